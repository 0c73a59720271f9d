//! Saddle-point and bivariate tail bounds.
//!
//! For a series with nonnegative coefficients, f_n <= f(x) x^{-n} for any
//! x where f(x) converges. The truncated evaluation is completed with a
//! geometric tail bound driven by the last coefficient ratio, so the
//! returned quantity genuinely dominates the true value whenever that
//! ratio honestly brackets the remaining terms (x strictly inside the
//! disk of convergence and coefficients eventually log-convex, which all
//! the counting series here satisfy).

use super::ps::{PowerSeries, Q, SeriesError};
use super::upoly::BivariateSeries;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Upper evaluation of a nonnegative series at x > 0: partial sum plus
/// geometric tail from the last ratio. Errors when the tail ratio
/// reaches 1 (x not safely inside the radius at this truncation).
pub fn eval_upper(f: &PowerSeries, x: &Q) -> Result<Q, SeriesError> {
    if !x.is_positive() {
        return Err(SeriesError::DomainError("x must be positive".into()));
    }
    if !f.is_nonnegative() {
        return Err(SeriesError::DomainError(
            "saddle bounds need nonnegative coefficients".into(),
        ));
    }
    let mut sum = Q::zero();
    let mut xp = Q::from_integer(1.into());
    let mut last_terms: Vec<Q> = Vec::new();
    for n in 0..=f.order() {
        let term = f.coeff(n) * &xp;
        sum += &term;
        xp *= x;
        last_terms.push(term);
    }
    // Geometric completion from the largest recent ratio.
    let n = last_terms.len();
    let mut ratio: Option<Q> = None;
    for i in (1..n).rev().take(4) {
        if !last_terms[i - 1].is_zero() && !last_terms[i].is_zero() {
            let r = &last_terms[i] / &last_terms[i - 1];
            ratio = Some(match ratio {
                Some(old) if old > r => old,
                _ => r,
            });
        }
    }
    let last = last_terms.last().cloned().unwrap_or_else(Q::zero);
    match ratio {
        None => Ok(sum), // polynomial: nothing beyond the order
        Some(r) => {
            if r >= Q::from_integer(1.into()) {
                return Err(SeriesError::DomainError(
                    "tail ratio at or above 1; x too close to the singularity".into(),
                ));
            }
            let tail = last * &r / (Q::from_integer(1.into()) - &r);
            Ok(sum + tail)
        }
    }
}

/// Saddle-point bound f_n <= f(x) x^{-n}, exact rational form.
pub fn saddle_bound_exact(f: &PowerSeries, x: &Q, n: usize) -> Result<Q, SeriesError> {
    let fx = eval_upper(f, x)?;
    let mut xn = Q::from_integer(1.into());
    for _ in 0..n {
        xn *= x;
    }
    Ok(fx / xn)
}

/// Saddle-point bound as a float (rounded up a hair to stay a bound).
pub fn saddle_bound(f: &PowerSeries, x: f64, n: usize) -> Result<f64, SeriesError> {
    let xq = q_from_f64(x)?;
    let b = saddle_bound_exact(f, &xq, n)?;
    Ok(q_to_f64_up(&b))
}

/// Bivariate tail bound [z^n u^k] A <= A(rho, u0) rho^{-n} u0^{-k}.
pub fn tail_bound_exact(
    a: &BivariateSeries,
    rho: &Q,
    u0: &Q,
    n: usize,
    k: usize,
) -> Result<Q, SeriesError> {
    if !rho.is_positive() || u0 <= &Q::from_integer(1.into()) {
        return Err(SeriesError::DomainError(
            "need rho > 0 and u0 > 1".into(),
        ));
    }
    // Row values g_m = A_m(u0), then the univariate upper evaluation.
    let rows: Vec<Q> = a.rows.iter().map(|p| p.eval(u0)).collect();
    if rows.iter().any(|r| r.is_negative()) {
        return Err(SeriesError::DomainError(
            "tail bound needs nonnegative coefficients".into(),
        ));
    }
    let g = PowerSeries::from_coeffs(rows);
    let val = eval_upper(&g, rho)?;
    let mut denom = Q::from_integer(1.into());
    for _ in 0..n {
        denom *= rho;
    }
    for _ in 0..k {
        denom *= u0;
    }
    Ok(val / denom)
}

pub fn tail_bound(
    a: &BivariateSeries,
    rho: f64,
    u0: f64,
    n: usize,
    k: usize,
) -> Result<f64, SeriesError> {
    let b = tail_bound_exact(a, &q_from_f64(rho)?, &q_from_f64(u0)?, n, k)?;
    Ok(q_to_f64_up(&b))
}

/// Rational from a finite f64, denominator capped at 10^6 by continued
/// fractions. Saddle and tail bounds are valid at any positive x, so a
/// nearby small rational serves; it keeps the exact arithmetic small.
pub fn q_from_f64(x: f64) -> Result<Q, SeriesError> {
    if !x.is_finite() {
        return Err(SeriesError::DomainError("non-finite float".into()));
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1) = (0i64, 1i64, 1i64, 0i64);
    for _ in 0..40 {
        let a = v.floor();
        if a > 1e15 {
            break;
        }
        let ai = a as i64;
        let (p2, q2) = (
            ai.saturating_mul(p1).saturating_add(p0),
            ai.saturating_mul(q1).saturating_add(q0),
        );
        if q2 > 1_000_000 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        let frac = v - a;
        if frac < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if q1 == 0 {
        return Err(SeriesError::DomainError("conversion failed".into()));
    }
    let q = Q::new(BigInt::from(if neg { -p1 } else { p1 }), BigInt::from(q1));
    Ok(q)
}

/// Float conversion rounded upward (bounds must stay bounds).
pub fn q_to_f64_up(q: &Q) -> f64 {
    match q.to_f64() {
        Some(v) if v.is_finite() => {
            // one ulp up
            f64::from_bits(v.to_bits() + 1)
        }
        _ => {
            // magnitude beyond f64: report via logs
            super::asym::ln_q_abs(q).exp() * 1.0000001
        }
    }
}
