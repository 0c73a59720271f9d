//! Generating functions of rooted planar maps and their 2-connected
//! cores.
//!
//! Three independent sources back each other here: the closed-form count
//! of rooted maps (2 * 3^m binom(2m, m) / ((m+1)(m+2)) at vertex weight
//! 1), the root-edge-deletion recurrence with the root-face degree as
//! catalytic variable (any vertex weight), and the exhaustive
//! rotation-system enumeration used by the tests at tiny sizes.
//!
//! Weights follow the core decomposition's convention: a map carries
//! x^(vertices - 1), so composing a core with pieces multiplies weights.
//! The core series comes from functional inversion (C = M o H^(-1) with
//! H = z (1+M)^2), and the core-size law P(X_n = k) = c_k [z^n] H^k / a_n
//! is evaluated with exact rational arithmetic.

use super::asym::{estimate_growth, eval_series_algebraic_tail};
use super::ps::{PowerSeries, Q, SeriesError};
use super::upoly::{BivariateSeries, UPoly};
use num_bigint::BigInt;
use num_traits::{One, Zero};

/// Rooted planar map counts a_0..a_order by Tutte's closed formula
/// (a_0 = 1 is the vertex map).
pub fn rooted_map_counts(order: usize) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(order + 1);
    for m in 0..=order as u64 {
        // 2 * 3^m * binom(2m, m) / ((m+1) (m+2))
        let mut binom = BigInt::one();
        for i in 0..m {
            binom = binom * BigInt::from(2 * m - i) / BigInt::from(i + 1);
        }
        let v = BigInt::from(2) * BigInt::from(3u8).pow(m as u32) * binom
            / (BigInt::from(m + 1) * BigInt::from(m + 2));
        out.push(v);
    }
    out
}

/// The bivariate map series M(z, u) with z marking edges, u the root-face
/// degree, and weight x per vertex, from the root-edge deletion identity
///   M = x + z u^2 M(u)^2 + z u (u M(u) - M(1)) / (u - 1).
/// Coefficient of z^n is a polynomial in u of degree at most 2n.
pub fn catalytic_map_series(order: usize, x: &Q) -> BivariateSeries {
    let u_order = 2 * order;
    let mut rows: Vec<UPoly> = Vec::with_capacity(order + 1);
    rows.push(UPoly::constant(x.clone()));
    for n in 1..=order {
        // u^2 * sum_{i+j=n-1} M_i M_j
        let mut sq = UPoly::zero();
        for i in 0..n {
            let j = n - 1 - i;
            if rows[i].is_zero() || rows[j].is_zero() {
                continue;
            }
            sq = sq.add(&rows[i].mul(&rows[j], u_order));
        }
        let mut term1 = UPoly {
            coeffs: {
                let mut c = vec![Q::zero(), Q::zero()];
                c.extend(sq.coeffs.iter().cloned());
                c.truncate(u_order + 1);
                c
            },
        };
        // u * (u M_{n-1}(u) - M_{n-1}(1)) / (u - 1)
        let prev = &rows[n - 1];
        let u_prev = UPoly {
            coeffs: {
                let mut c = vec![Q::zero()];
                c.extend(prev.coeffs.iter().cloned());
                c
            },
        };
        let r = u_prev.sub(&UPoly::constant(prev.eval_at_one()));
        let dd = r.div_by_u_minus_one();
        let term2 = UPoly {
            coeffs: {
                let mut c = vec![Q::zero()];
                c.extend(dd.coeffs.iter().cloned());
                c.truncate(u_order + 1);
                c
            },
        };
        term1 = term1.add(&term2);
        rows.push(term1);
    }
    BivariateSeries { rows, u_order }
}

/// Univariate rooted-map series with weight x at non-root vertices and
/// the vertex map excluded: M(z) = (M_cat(z, 1) - x) / x.
pub fn maps_series(order: usize, x: &Q) -> PowerSeries {
    if x == &Q::one() {
        let counts = rooted_map_counts(order);
        let mut coeffs: Vec<Q> = counts.into_iter().map(Q::from_integer).collect();
        coeffs[0] = Q::zero();
        PowerSeries::from_coeffs(coeffs)
    } else {
        let cat = catalytic_map_series(order, x);
        let at_one = cat.at_u_one();
        let mut coeffs: Vec<Q> = at_one.coeffs().iter().map(|c| c / x).collect();
        coeffs[0] = Q::zero();
        PowerSeries::from_coeffs(coeffs)
    }
}

#[derive(Debug, Clone)]
pub struct MapsCoreSeries {
    /// Rooted maps (vertex map excluded), weight x at non-root vertices.
    pub m: PowerSeries,
    /// H = z (1 + M)^2, the corner-substitution kernel.
    pub h: PowerSeries,
    /// Rooted 2-connected maps: C = M o H^(-1).
    pub c: PowerSeries,
}

/// The maps / cores / kernel triple, with the construction identity
/// M = C(H) asserted exactly to the working order.
pub fn maps_and_core_series(order: usize, x: &Q) -> Result<MapsCoreSeries, SeriesError> {
    let m = maps_series(order, x);
    let one_plus_m = PowerSeries::one(order).add(&m);
    let h = PowerSeries::z(order).mul(&one_plus_m.mul(&one_plus_m));
    let h_inv = h.invert_functional()?;
    let c = m.compose(&h_inv)?;
    let check = c.compose(&h)?;
    if check != m {
        return Err(SeriesError::InversionError(
            "core series identity M = C(H) failed".into(),
        ));
    }
    Ok(MapsCoreSeries { m, h, c })
}

/// Exact distribution of the core size X_n of a random rooted map with n
/// edges and weight x at (non-root) vertices: P(X_n = k) for k = 0..=n
/// (index 0 is always zero). Sums to exactly 1.
///
/// Integer weights go through a plain big-integer path (no gcd churn),
/// which matters at the n ~ 400 scale.
pub fn core_size_distribution(n: usize, x: &Q) -> Result<Vec<Q>, SeriesError> {
    if n == 0 {
        return Err(SeriesError::DomainError("need n >= 1".into()));
    }
    if x.is_integer() {
        return core_size_distribution_int(n, x);
    }
    let m = maps_series(n, x);
    let a_n = m.coeff(n);
    if a_n.is_zero() {
        return Err(SeriesError::DomainError("no maps of this size".into()));
    }
    let one_plus_m = PowerSeries::one(n).add(&m);
    let h = PowerSeries::z(n).mul(&one_plus_m.mul(&one_plus_m));
    // Progressive powers of H: at step k we hold H^k, record its z^n
    // coefficient, extract c_k triangularly from M = sum_k c_k H^k, and
    // accumulate the partial sum S = sum_{j<=k} c_j H^j.
    let mut pw = h.clone();
    let mut s = PowerSeries::zero(n);
    let mut probs = vec![Q::zero(); n + 1];
    for k in 1..=n {
        let c_k = m.coeff(k) - s.coeff(k);
        probs[k] = &c_k * pw.coeff(n) / &a_n;
        if !c_k.is_zero() {
            s = s.add(&pw.scale(&c_k));
        }
        if k < n {
            pw = pw.mul(&h);
        }
    }
    let total: Q = probs.iter().fold(Q::zero(), |acc, p| acc + p);
    if total != Q::one() {
        return Err(SeriesError::DomainError(format!(
            "core-size distribution sums to {total} instead of 1"
        )));
    }
    Ok(probs)
}

fn core_size_distribution_int(n: usize, x: &Q) -> Result<Vec<Q>, SeriesError> {
    let m_q = maps_series(n, x);
    let m: Vec<BigInt> = m_q.coeffs().iter().map(|c| c.numer().clone()).collect();
    let a_n = m[n].clone();
    if a_n.is_zero() {
        return Err(SeriesError::DomainError("no maps of this size".into()));
    }
    // H = z (1 + M)^2 over integers.
    let mut one_plus_m = m.clone();
    one_plus_m[0] += BigInt::one();
    let mut sq = vec![BigInt::zero(); n + 1];
    for i in 0..=n {
        if one_plus_m[i].is_zero() {
            continue;
        }
        for j in 0..=n - i {
            if !one_plus_m[j].is_zero() {
                let prod = &one_plus_m[i] * &one_plus_m[j];
                sq[i + j] += prod;
            }
        }
    }
    let mut h = vec![BigInt::zero(); n + 1];
    for i in 0..n {
        h[i + 1] = sq[i].clone();
    }
    let mut pw = h.clone();
    let mut s = vec![BigInt::zero(); n + 1];
    let mut probs = vec![Q::zero(); n + 1];
    for k in 1..=n {
        let c_k = &m[k] - &s[k];
        probs[k] = Q::new(&c_k * &pw[n], a_n.clone());
        if !c_k.is_zero() {
            for i in k..=n {
                if !pw[i].is_zero() {
                    let add = &c_k * &pw[i];
                    s[i] += add;
                }
            }
        }
        if k < n {
            // pw <- pw * h, truncated at n
            let mut next = vec![BigInt::zero(); n + 1];
            for i in k..=n {
                if pw[i].is_zero() {
                    continue;
                }
                for j in 1..=n - i {
                    if !h[j].is_zero() {
                        let prod = &pw[i] * &h[j];
                        next[i + j] += prod;
                    }
                }
            }
            pw = next;
        }
    }
    let total: Q = probs.iter().fold(Q::zero(), |acc, p| acc + p);
    if total != Q::one() {
        return Err(SeriesError::DomainError(format!(
            "core-size distribution sums to {total} instead of 1"
        )));
    }
    Ok(probs)
}

/// The core-size location alpha = H(rho) / (rho H'(rho)) evaluated at the
/// ratio-extrapolated singularity of the map series, with algebraic-tail
/// completion of both singular sums.
pub fn alpha_estimate(order: usize, x: &Q) -> Result<f64, SeriesError> {
    let m = maps_series(order, x);
    let est = estimate_growth(m.coeffs())?;
    let rho = est.rho;
    let one_plus_m = PowerSeries::one(order).add(&m);
    let h = PowerSeries::z(order).mul(&one_plus_m.mul(&one_plus_m));
    let hp = h.derivative();
    // H has the map singularity exponent -5/2; H' has -3/2.
    let (h_val, _) = eval_series_algebraic_tail(&h, rho, -2.5);
    let (hp_val, _) = eval_series_algebraic_tail(&hp, rho, -1.5);
    let alpha = h_val / (rho * hp_val);
    if !alpha.is_finite() {
        return Err(SeriesError::DomainError("alpha estimate diverged".into()));
    }
    Ok(alpha)
}
