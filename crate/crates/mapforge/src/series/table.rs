//! Coefficient table files: CSV lines `n,coefficient` with exact integer
//! or `p/q` rational coefficients. Used to feed externally computed
//! series (3-connected counts) into the network systems and to dump
//! solved systems.

use super::ps::{PowerSeries, Q, SeriesError};
use num_bigint::BigInt;
use num_traits::Zero;
use std::str::FromStr;

pub fn parse_rational(tok: &str) -> Result<Q, SeriesError> {
    let tok = tok.trim();
    let parse_int = |s: &str| {
        BigInt::from_str(s.trim())
            .map_err(|e| SeriesError::MissingTable(format!("bad integer '{s}': {e}")))
    };
    match tok.split_once('/') {
        Some((p, q)) => {
            let num = parse_int(p)?;
            let den = parse_int(q)?;
            if den.is_zero() {
                return Err(SeriesError::MissingTable("zero denominator".into()));
            }
            Ok(Q::new(num, den))
        }
        None => Ok(Q::from_integer(parse_int(tok)?)),
    }
}

pub fn format_rational(q: &Q) -> String {
    if q.denom() == &BigInt::from(1) {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Read a coefficient table into a series of the given order; missing
/// orders are zero, entries beyond the order are ignored.
pub fn read_coefficient_csv(input: &str, order: usize) -> Result<PowerSeries, SeriesError> {
    let mut coeffs = vec![Q::zero(); order + 1];
    for (lineno, line) in input.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("n,") {
            continue;
        }
        let (n_tok, c_tok) = line.split_once(',').ok_or_else(|| {
            SeriesError::MissingTable(format!("line {}: expected 'n,coefficient'", lineno + 1))
        })?;
        let n: usize = n_tok.trim().parse().map_err(|_| {
            SeriesError::MissingTable(format!("line {}: bad index", lineno + 1))
        })?;
        if n <= order {
            coeffs[n] = parse_rational(c_tok)?;
        }
    }
    Ok(PowerSeries::from_coeffs(coeffs))
}

pub fn write_coefficient_csv(f: &PowerSeries) -> String {
    let mut out = String::from("n,coefficient\n");
    for n in 0..=f.order() {
        out.push_str(&format!("{},{}\n", n, format_rational(&f.coeff(n))));
    }
    out
}
