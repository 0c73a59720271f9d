//! Coefficient asymptotics: growth-rate and polynomial-exponent
//! estimation, singular evaluation with tail control, and the
//! admissible/critical classification of fixed-point systems.
//!
//! For a counting series f_n ~ c rho^{-n} n^alpha the ratio f_{n-1}/f_n
//! approaches rho with a 1/n expansion, so Richardson extrapolation
//! (depth 3) of the ratio sequence estimates rho; the exponent then comes
//! from a least-squares fit of log(f_n rho^n) against log n over the top
//! half of the coefficients. Everything runs in the log domain, so
//! coefficients far beyond f64 range are fine.

use super::ps::{PowerSeries, Q, SeriesError};
use super::system::{Expr, SystemSpec};
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

/// Natural log of a positive big integer, stable for any size.
pub fn ln_bigint(x: &BigInt) -> f64 {
    debug_assert!(x.is_positive());
    let bits = x.bits();
    if bits <= 52 {
        return (x.to_f64().unwrap()).ln();
    }
    let shift = bits - 52;
    let top = (x >> shift).to_f64().unwrap();
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// Natural log of the absolute value of a nonzero rational.
pub fn ln_q_abs(q: &Q) -> f64 {
    ln_bigint(&q.numer().abs()) - ln_bigint(&q.denom().abs())
}

/// Growth estimate with Richardson diagnostics.
#[derive(Debug, Clone)]
pub struct AsymptoticEstimate {
    /// Estimated radius of convergence.
    pub rho: f64,
    /// Estimated polynomial exponent alpha in f_n ~ c rho^{-n} n^alpha.
    pub exponent: f64,
    /// Last value of each Richardson column (depth 0..=3).
    pub richardson: Vec<f64>,
    pub n_used: usize,
}

/// Estimate (rho, alpha) from the trailing run of nonzero coefficients.
pub fn estimate_growth(coeffs: &[Q]) -> Result<AsymptoticEstimate, SeriesError> {
    // Trailing contiguous nonzero run.
    let mut hi = coeffs.len();
    while hi > 0 && coeffs[hi - 1].is_zero() {
        hi -= 1;
    }
    let mut lo = hi;
    while lo > 0 && !coeffs[lo - 1].is_zero() {
        lo -= 1;
    }
    if hi - lo < 20 {
        return Err(SeriesError::InsufficientData(format!(
            "need >= 20 consecutive nonzero coefficients, have {}",
            hi - lo
        )));
    }
    let ln_f: Vec<f64> = (lo..hi).map(|n| ln_q_abs(&coeffs[n])).collect();
    // Ratios r_n = f_{n-1} / f_n indexed by n = lo+1 .. hi-1.
    let ns: Vec<f64> = (lo + 1..hi).map(|n| n as f64).collect();
    let mut col: Vec<f64> = (1..ln_f.len())
        .map(|i| (ln_f[i - 1] - ln_f[i]).exp())
        .collect();
    let mut rich_last = vec![*col.last().unwrap()];
    // Richardson: R^k_n = (n R^{k-1}_n - (n-k) R^{k-1}_{n-1}) / k.
    let mut ns_cur = ns;
    for k in 1..=3usize {
        let mut next = Vec::with_capacity(col.len().saturating_sub(1));
        for i in 1..col.len() {
            let n = ns_cur[i];
            next.push((n * col[i] - (n - k as f64) * col[i - 1]) / k as f64);
        }
        ns_cur.remove(0);
        col = next;
        rich_last.push(*col.last().unwrap());
    }
    let rho = *rich_last.last().unwrap();
    if !(rho.is_finite() && rho > 0.0) {
        return Err(SeriesError::InsufficientData(
            "ratio sequence diverged".into(),
        ));
    }
    // Exponent: slope of ln(f_n) + n ln(rho) against ln n, top half.
    let ln_rho = rho.ln();
    let start = lo + (hi - lo) / 2;
    let pts: Vec<(f64, f64)> = (start..hi)
        .map(|n| ((n as f64).ln(), ln_f[n - lo] + n as f64 * ln_rho))
        .collect();
    let exponent = least_squares_slope(&pts);
    Ok(AsymptoticEstimate {
        rho,
        exponent,
        richardson: rich_last,
        n_used: hi - lo,
    })
}

pub fn least_squares_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Evaluate a series at t > 0: returns (partial sum, tail bound), the
/// tail estimated geometrically from the ratio of the last two terms.
/// The tail bound is infinite when that ratio reaches 1.
pub fn eval_series_f64(f: &PowerSeries, t: f64) -> (f64, f64) {
    let ln_t = t.ln();
    let mut sum = 0.0;
    let mut last: Option<f64> = None;
    let mut prev: Option<f64> = None;
    for n in 0..=f.order() {
        let c = f.coeff(n);
        if c.is_zero() {
            continue;
        }
        let term = (ln_q_abs(&c) + n as f64 * ln_t).exp()
            * if c.is_negative() { -1.0 } else { 1.0 };
        sum += term;
        prev = last;
        last = Some(term.abs());
    }
    let tail = match (prev, last) {
        (Some(p), Some(l)) if p > 0.0 => {
            let r = l / p;
            if r < 1.0 {
                l * r / (1.0 - r)
            } else {
                f64::INFINITY
            }
        }
        _ => 0.0,
    };
    (sum, tail)
}

/// Evaluate at t assuming an algebraic tail f_n t^n ~ c n^alpha with
/// alpha < -1: the partial sum is completed by an Euler-Maclaurin
/// estimate of c * sum_{m > N} m^alpha. Far more accurate than the
/// geometric bound when t sits at the singularity.
pub fn eval_series_algebraic_tail(f: &PowerSeries, t: f64, alpha: f64) -> (f64, f64) {
    let (sum, _) = eval_series_f64(f, t);
    let n_top = f.order();
    let c_top = f.coeff(n_top);
    if c_top.is_zero() || alpha >= -1.0 {
        return (sum, f64::NAN);
    }
    let ln_t = t.ln();
    let term_n = (ln_q_abs(&c_top) + n_top as f64 * ln_t).exp();
    let c_est = term_n / (n_top as f64).powf(alpha);
    // sum_{m > N} m^alpha ~ (N + 1/2)^{alpha+1} / (-(alpha+1)).
    let tail = c_est * (n_top as f64 + 0.5).powf(alpha + 1.0) / (-(alpha + 1.0));
    (sum + tail, tail)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Admissible,
    Critical,
    Supercritical,
}

#[derive(Debug, Clone)]
pub struct CriticalityReport {
    pub rho_hat: f64,
    /// (value, geometric tail bound) of each unknown at rho_hat.
    pub y_at_rho: Vec<(f64, f64)>,
    /// Largest eigenvalue (by modulus) of the Jacobian of F at
    /// (rho_hat, y(rho_hat)).
    pub jacobian_spectral_radius: f64,
    /// Last ratio of the series sum n y_n rho^n; below 1 indicates that
    /// y'(rho) converges (the criticality proxy).
    pub y_prime_tail_ratio: f64,
    pub verdict: Verdict,
}

/// Half-width of the admissibility band around eigenvalue 1.
pub const CRITICALITY_BAND: f64 = 0.05;

/// Numeric evaluation of an expression at (z, y); series references are
/// summed directly (tail control is the caller's business via the
/// interval evaluators when certified values are needed).
fn eval_expr_f64(e: &Expr, z: f64, ys: &[f64], spec: &SystemSpec) -> f64 {
    match e {
        Expr::Z => z,
        Expr::Y(i) => ys[*i],
        Expr::Const(c) => {
            if c.is_zero() {
                0.0
            } else {
                (ln_q_abs(c)).exp() * if c.is_negative() { -1.0 } else { 1.0 }
            }
        }
        Expr::Add(a, b) => eval_expr_f64(a, z, ys, spec) + eval_expr_f64(b, z, ys, spec),
        Expr::Sub(a, b) => eval_expr_f64(a, z, ys, spec) - eval_expr_f64(b, z, ys, spec),
        Expr::Mul(a, b) => eval_expr_f64(a, z, ys, spec) * eval_expr_f64(b, z, ys, spec),
        Expr::Div(a, b) => eval_expr_f64(a, z, ys, spec) / eval_expr_f64(b, z, ys, spec),
        Expr::Pow(a, k) => eval_expr_f64(a, z, ys, spec).powi(*k as i32),
        Expr::Exp(a) => eval_expr_f64(a, z, ys, spec).exp(),
        Expr::Log(a) => eval_expr_f64(a, z, ys, spec).ln(),
        Expr::Compose(s, a) => {
            let arg = eval_expr_f64(a, z, ys, spec);
            let series = if *s < spec.env.len() {
                spec.env[*s].clone()
            } else {
                spec.env[usize::MAX - *s].derivative()
            };
            eval_series_f64(&series, arg).0
        }
    }
}

/// Solve the system, estimate its dominant singularity, and classify the
/// fixed point via the Jacobian spectral radius at (rho_hat, y(rho_hat)).
pub fn criticality_check(
    spec: &SystemSpec,
    order: usize,
) -> Result<CriticalityReport, SeriesError> {
    let ys = super::system::solve_vector(spec, order)?;
    let est = estimate_growth(ys[0].coeffs())?;
    let rho = est.rho;
    // At the singularity the geometric tail is useless; complete partial
    // sums with the algebraic tail at the estimated exponent.
    let vals: Vec<(f64, f64)> = ys
        .iter()
        .map(|y| {
            if est.exponent < -1.0 {
                eval_series_algebraic_tail(y, rho, est.exponent)
            } else {
                eval_series_f64(y, rho)
            }
        })
        .collect();
    let point: Vec<f64> = vals.iter().map(|v| v.0).collect();
    let r = spec.rhs.len();
    let mut jac = vec![vec![0.0; r]; r];
    for (i, rhs) in spec.rhs.iter().enumerate() {
        for (j, row) in jac[i].iter_mut().enumerate() {
            let d = rhs.d_dy(j);
            *row = eval_expr_f64(&d, rho, &point, spec).abs();
        }
    }
    let lambda = spectral_radius(&jac);
    // y'(rho) proxy: ratio of consecutive terms of sum n y_n rho^n.
    let y = &ys[0];
    let n = y.order();
    let (a, b) = (y.coeff(n - 1), y.coeff(n));
    let y_prime_tail_ratio = if a.is_zero() || b.is_zero() {
        f64::NAN
    } else {
        (ln_q_abs(&b) - ln_q_abs(&a) + rho.ln() + ((n as f64) / (n as f64 - 1.0)).ln())
            .exp()
    };
    let verdict = if (lambda - 1.0).abs() <= CRITICALITY_BAND {
        Verdict::Admissible
    } else if lambda < 1.0 {
        Verdict::Critical
    } else {
        Verdict::Supercritical
    };
    Ok(CriticalityReport {
        rho_hat: rho,
        y_at_rho: vals,
        jacobian_spectral_radius: lambda,
        y_prime_tail_ratio,
        verdict,
    })
}

fn spectral_radius(m: &[Vec<f64>]) -> f64 {
    let r = m.len();
    let mut v = vec![1.0; r];
    let mut lambda = 0.0;
    for _ in 0..500 {
        let mut w = vec![0.0; r];
        for i in 0..r {
            for j in 0..r {
                w[i] += m[i][j] * v[j];
            }
        }
        let norm: f64 = w.iter().map(|x| x.abs()).sum();
        if norm == 0.0 {
            return 0.0;
        }
        lambda = norm / v.iter().map(|x| x.abs()).sum::<f64>();
        v = w;
    }
    lambda
}

/// The Catalan number series, an asymptotics benchmark (rho = 1/4,
/// exponent -3/2).
pub fn catalan_series(order: usize) -> PowerSeries {
    let mut cs = Vec::with_capacity(order + 1);
    let mut c = BigInt::from(1);
    cs.push(Q::from_integer(c.clone()));
    for n in 1..=order {
        c *= BigInt::from(2 * (2 * n as i64 - 1));
        c /= BigInt::from(n as i64 + 1);
        cs.push(Q::from_integer(c.clone()));
    }
    PowerSeries::from_coeffs(cs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ps::q_int;

    #[test]
    fn catalan_benchmark() {
        let f = catalan_series(120);
        let est = estimate_growth(f.coeffs()).unwrap();
        assert!((est.rho - 0.25).abs() < 1e-4, "rho {}", est.rho);
        assert!((est.exponent + 1.5).abs() < 0.1, "alpha {}", est.exponent);
    }

    #[test]
    fn insufficient_data() {
        let f = PowerSeries::from_coeffs(vec![q_int(1); 8]);
        assert!(matches!(
            estimate_growth(f.coeffs()),
            Err(SeriesError::InsufficientData(_))
        ));
    }

    #[test]
    fn geometric_series_eval() {
        // 1/(1-z) at 1/2: partial sum below 2 with a finite tail bound
        // covering the gap.
        let f = PowerSeries::from_coeffs(vec![q_int(1); 41]);
        let (v, tail) = eval_series_f64(&f, 0.5);
        assert!(tail.is_finite());
        assert!(v < 2.0);
        assert!(v + tail >= 2.0 - 1e-9);
    }

    #[test]
    fn labelled_tree_system_is_admissible() {
        // F_y(rho, tau) = 1 at rho = 1/12, tau = 1/6.
        let spec = crate::series::system::labelled_tree_system();
        let rep = criticality_check(&spec, 140).unwrap();
        assert!((rep.rho_hat - 1.0 / 12.0).abs() < 1e-4, "{}", rep.rho_hat);
        assert_eq!(rep.verdict, Verdict::Admissible);
        assert!(
            (rep.jacobian_spectral_radius - 1.0).abs() < 0.02,
            "F_y = {}",
            rep.jacobian_spectral_radius
        );
    }
}
