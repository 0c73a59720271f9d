//! Summary statistics for the experiment records: weighted means via
//! log-sum-exp (importance weights x^blacks overflow any float for large
//! trees), quantiles, log-log slope fits, and a seeded bootstrap for the
//! slope confidence interval.

use mapforge::rng::Rng;

/// log(sum exp(ls)) with the usual max shift.
pub fn log_sum_exp(ls: &[f64]) -> f64 {
    let m = ls.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    m + ls.iter().map(|l| (l - m).exp()).sum::<f64>().ln()
}

/// Weighted mean of `values` with log-domain weights.
pub fn weighted_mean(values: &[f64], log_weights: &[f64]) -> f64 {
    debug_assert_eq!(values.len(), log_weights.len());
    let lse = log_sum_exp(log_weights);
    values
        .iter()
        .zip(log_weights)
        .map(|(v, lw)| v * (lw - lse).exp())
        .sum()
}

pub fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Empirical quantile by sorting (q in [0, 1]).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let idx = ((v.len() - 1) as f64 * q).round() as usize;
    v[idx]
}

/// Least-squares slope of ln(mean stat) against ln(n).
pub fn loglog_slope(points: &[(f64, f64)]) -> f64 {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .map(|&(n, m)| (n.ln(), m.ln()))
        .collect();
    mapforge::series::asym::least_squares_slope(&pts)
}

/// Bootstrap confidence interval of the log-log slope: replicates are
/// resampled independently per grid point, B times, seeded.
pub struct SlopeFit {
    pub slope: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
}

pub fn bootstrap_slope(
    per_n: &[(usize, Vec<f64>, Vec<f64>)], // (n, values, log_weights)
    b: usize,
    seed: u64,
) -> SlopeFit {
    let base: Vec<(f64, f64)> = per_n
        .iter()
        .map(|(n, vals, lws)| (*n as f64, weighted_mean(vals, lws)))
        .collect();
    let slope = loglog_slope(&base);
    let mut slopes = Vec::with_capacity(b);
    for bi in 0..b {
        let mut pts = Vec::with_capacity(per_n.len());
        for (gi, (n, vals, lws)) in per_n.iter().enumerate() {
            let mut rng = Rng::for_stream(seed, &[0xb007, bi as u64, gi as u64]);
            let k = vals.len();
            let mut rv = Vec::with_capacity(k);
            let mut rw = Vec::with_capacity(k);
            for _ in 0..k {
                let j = rng.usize_below(k);
                rv.push(vals[j]);
                rw.push(lws[j]);
            }
            pts.push((*n as f64, weighted_mean(&rv, &rw)));
        }
        slopes.push(loglog_slope(&pts));
    }
    slopes.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let lo = slopes[(b as f64 * 0.025) as usize];
    let hi = slopes[((b as f64 * 0.975) as usize).min(b - 1)];
    SlopeFit {
        slope,
        ci_lo: lo,
        ci_hi: hi,
    }
}

/// Total-variation distance between two distributions given as
/// probability vectors over the same support.
pub fn tv_distance(p: &[f64], q: &[f64]) -> f64 {
    let len = p.len().max(q.len());
    let get = |v: &[f64], i: usize| v.get(i).copied().unwrap_or(0.0);
    (0..len)
        .map(|i| (get(p, i) - get(q, i)).abs())
        .sum::<f64>()
        / 2.0
}
