//! Network decomposition generating functions.
//!
//! Plane networks (embedded): N = z + S + P + N^ with S = xN^2/(1+xN),
//! P = N^2/(1+N), N^ = T(N), where T counts rooted 3-connected maps by
//! non-root edges. T is either supplied as a table or derived from the
//! map/core chain by functional inversion, which is also how the
//! 3-connected counts were first computed historically.
//!
//! Planar networks (labelled at edges, unembedded): the four-series
//! system D = z + S + P + H, S = (z + P + H) x D,
//! P = (1+z) exp(S+H) - 1 - z - S - H, H = T(D), equivalent to the
//! one-line form D = (1+z) exp(xD^2/(1+xD) + T(D)) - 1, which is asserted
//! as an identity. The bivariate variant marks the recursive pole-distance
//! parameter chi with u.

use super::maps_gf::maps_and_core_series;
use super::ps::{q_int, PowerSeries, Q, SeriesError};
use super::system::{solve_vector, Expr, SystemSpec};
use super::upoly::{BivariateSeries, UPoly};
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone)]
pub struct PlaneNetworks {
    pub n: PowerSeries,
    pub s: PowerSeries,
    pub p: PowerSeries,
    pub n_hat: PowerSeries,
}

/// Solve the plane-network system for a given 3-connected table T
/// (valuation at least 2; the true series starts at z^5).
pub fn plane_network_system(
    order: usize,
    x: &Q,
    t_plane: &PowerSeries,
) -> Result<PlaneNetworks, SeriesError> {
    if matches!(t_plane.valuation(), Some(v) if v < 2) {
        return Err(SeriesError::ValuationError(
            "3-connected table must have valuation >= 2".into(),
        ));
    }
    // N = z + xN^2/(1+xN) + N^2/(1+N) + T(N)
    let xn = Expr::mul(Expr::cq(x.clone()), Expr::Y(0));
    let s = Expr::div(
        Expr::mul(Expr::cq(x.clone()), Expr::pow(Expr::Y(0), 2)),
        Expr::add(Expr::cint(1), xn),
    );
    let p = Expr::div(
        Expr::pow(Expr::Y(0), 2),
        Expr::add(Expr::cint(1), Expr::Y(0)),
    );
    let rhs = Expr::add(
        Expr::add(Expr::Z, Expr::add(s, p)),
        Expr::compose(0, Expr::Y(0)),
    );
    let spec = SystemSpec {
        names: vec!["N".into()],
        rhs: vec![rhs],
        env: vec![t_plane.clone()],
    };
    let n = solve_vector(&spec, order)?.pop().unwrap();
    let one = PowerSeries::one(order);
    let s = n
        .mul(&n)
        .scale(x)
        .div(&one.add(&n.scale(x)))?;
    let p = n.mul(&n).div(&one.add(&n))?;
    let n_hat = t_plane.truncated(order).compose(&n)?;
    Ok(PlaneNetworks { n, s, p, n_hat })
}

/// Derive the 3-connected plane map series T (z marks non-root edges,
/// weight x at vertices not on the root edge) from the map/core chain:
/// C = M o H^(-1), N = (C - z - xz)/(xz), then T = N^ o N^(-1) where
/// N^ = N - z - S - P.
pub fn derive_three_connected_plane(
    order: usize,
    x: &Q,
) -> Result<PowerSeries, SeriesError> {
    let chain_order = order + 1; // C is needed one order higher
    let mcs = maps_and_core_series(chain_order, x)?;
    let c = &mcs.c;
    // N = (C - z - xz) / (xz)
    let z = PowerSeries::z(chain_order);
    let num = c
        .sub(&z)
        .sub(&z.scale(x));
    let den = z.scale(x);
    let n = num.div(&den)?.truncated(order);
    let one = PowerSeries::one(order);
    let s = n.mul(&n).scale(x).div(&one.add(&n.scale(x)))?;
    let p = n.mul(&n).div(&one.add(&n))?;
    let n_hat = n.sub(&z.truncated(order)).sub(&s).sub(&p);
    let t = n_hat.compose(&n.invert_functional()?)?;
    Ok(t)
}

#[derive(Debug, Clone)]
pub struct PlanarNetworks {
    pub d: PowerSeries,
    pub s: PowerSeries,
    pub p: PowerSeries,
    pub h: PowerSeries,
}

/// Solve the planar-network system (edge-labelled, exponential in the
/// edge labels) with the supplied 3-connected table (zero for the
/// series-parallel case), and assert the one-line form of the same
/// equation on the solution.
pub fn planar_network_system(
    order: usize,
    x: &Q,
    t: &PowerSeries,
) -> Result<PlanarNetworks, SeriesError> {
    // Unknowns: D=0, S=1, P=2, H=3.
    let sph = Expr::add(Expr::Y(1), Expr::add(Expr::Y(2), Expr::Y(3)));
    let d_rhs = Expr::add(Expr::Z, sph);
    let s_rhs = Expr::mul(
        Expr::add(Expr::Z, Expr::add(Expr::Y(2), Expr::Y(3))),
        Expr::mul(Expr::cq(x.clone()), Expr::Y(0)),
    );
    let p_rhs = Expr::sub(
        Expr::mul(
            Expr::add(Expr::cint(1), Expr::Z),
            Expr::exp(Expr::add(Expr::Y(1), Expr::Y(3))),
        ),
        Expr::add(
            Expr::cint(1),
            Expr::add(Expr::Z, Expr::add(Expr::Y(1), Expr::Y(3))),
        ),
    );
    let h_rhs = Expr::compose(0, Expr::Y(0));
    let spec = SystemSpec {
        names: vec!["D".into(), "S".into(), "P".into(), "H".into()],
        rhs: vec![d_rhs, s_rhs, p_rhs, h_rhs],
        env: vec![t.clone()],
    };
    let mut ys = solve_vector(&spec, order)?;
    let h = ys.pop().unwrap();
    let p = ys.pop().unwrap();
    let s = ys.pop().unwrap();
    let d = ys.pop().unwrap();
    // One-line identity: D = (1+z) exp(xD^2/(1+xD) + T(D)) - 1.
    let one = PowerSeries::one(order);
    let z = PowerSeries::z(order);
    let xd = d.scale(x);
    let expo = d
        .mul(&xd)
        .div(&one.add(&xd))?
        .add(&t.truncated(order).compose(&d)?);
    let rhs = one.add(&z).mul(&expo.exp()?).sub(&one);
    if rhs != d {
        return Err(SeriesError::NonConvergent(
            "planar network system disagrees with its one-line form".into(),
        ));
    }
    Ok(PlanarNetworks { d, s, p, h })
}

#[derive(Debug, Clone)]
pub struct BivariatePlanarNetworks {
    pub d: BivariateSeries,
    pub s: BivariateSeries,
    pub p: BivariateSeries,
    pub h: BivariateSeries,
}

/// The chi-marked planar-network system with a bivariate 3-connected
/// table T(w, v), v marking the edges carrying the pole-path networks:
/// H(z, u) = T(D(z), D(z,u)/D(z)). Requires every table monomial to
/// satisfy v-degree <= w-degree.
pub fn bivariate_network_system_with_table(
    z_order: usize,
    u_order: usize,
    x: &Q,
    table: &BivariateSeries,
) -> Result<BivariatePlanarNetworks, SeriesError> {
    for (a, row) in table.rows.iter().enumerate() {
        if let Some(b) = row.degree() {
            if b > a {
                return Err(SeriesError::ValuationError(
                    "3-connected table needs v-degree <= w-degree".into(),
                ));
            }
        }
    }
    let zu = {
        let mut b = BivariateSeries::zero(z_order, u_order);
        b.rows[1] = UPoly::u();
        b
    };
    let one = {
        let mut b = BivariateSeries::zero(z_order, u_order);
        b.rows[0] = UPoly::constant(Q::one());
        b
    };
    let compose_h = |d_uni: &PowerSeries,
                     d_biv: &BivariateSeries|
     -> Result<BivariateSeries, SeriesError> {
        // H = sum_{a,b} t_{a,b} D(z)^{a-b} D(z,u)^b.
        let mut h = BivariateSeries::zero(z_order, u_order);
        let mut d_pow: Vec<PowerSeries> = vec![PowerSeries::one(z_order)];
        let mut dz_pow: Vec<BivariateSeries> = vec![one.clone()];
        for (a, row) in table.rows.iter().enumerate() {
            if row.is_zero() {
                continue;
            }
            while d_pow.len() <= a {
                let next = d_pow.last().unwrap().mul(d_uni);
                d_pow.push(next);
            }
            for (b, c) in row.coeffs.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                while dz_pow.len() <= b {
                    let next = dz_pow.last().unwrap().mul(d_biv);
                    dz_pow.push(next);
                }
                let term = BivariateSeries::from_univariate(&d_pow[a - b], u_order)
                    .mul(&dz_pow[b])
                    .scale(c);
                h = h.add(&term);
            }
        }
        Ok(h)
    };
    let mut d = BivariateSeries::zero(z_order, u_order);
    let mut s = BivariateSeries::zero(z_order, u_order);
    let mut p = BivariateSeries::zero(z_order, u_order);
    let mut h = BivariateSeries::zero(z_order, u_order);
    for _ in 0..2 * z_order + 8 {
        let d_next = zu.add(&s).add(&p).add(&h);
        let s_next = zu.add(&p).add(&h).mul(&d.scale(x));
        let sh = s.add(&h);
        let p_next = one
            .add(&zu)
            .mul(&sh.exp()?)
            .sub(&one)
            .sub(&zu)
            .sub(&sh);
        let h_next = compose_h(&d.at_u_one(), &d)?;
        if d_next == d && s_next == s && p_next == p && h_next == h {
            return Ok(BivariatePlanarNetworks { d, s, p, h });
        }
        d = d_next;
        s = s_next;
        p = p_next;
        h = h_next;
    }
    Err(SeriesError::NonConvergent(
        "bivariate network iteration did not stabilize".into(),
    ))
}

/// The chi-marked planar-network system in the series-parallel regime
/// (3-connected part zero).
pub fn bivariate_network_system(
    z_order: usize,
    u_order: usize,
    x: &Q,
) -> Result<BivariatePlanarNetworks, SeriesError> {
    let zu = {
        let mut b = BivariateSeries::zero(z_order, u_order);
        b.rows[1] = UPoly::u();
        b
    };
    let one = {
        let mut b = BivariateSeries::zero(z_order, u_order);
        b.rows[0] = UPoly::constant(Q::one());
        b
    };
    let h = BivariateSeries::zero(z_order, u_order);
    let mut d = BivariateSeries::zero(z_order, u_order);
    let mut s = BivariateSeries::zero(z_order, u_order);
    let mut p = BivariateSeries::zero(z_order, u_order);
    for _ in 0..2 * z_order + 8 {
        let sph = s.add(&p).add(&h);
        let d_next = zu.add(&sph);
        let s_next = zu.add(&p).add(&h).mul(&d.scale(x));
        let sh = s.add(&h);
        let p_next = one
            .add(&zu)
            .mul(&sh.exp()?)
            .sub(&one)
            .sub(&zu)
            .sub(&sh);
        if d_next == d && s_next == s && p_next == p {
            return Ok(BivariatePlanarNetworks { d, s, p, h });
        }
        d = d_next;
        s = s_next;
        p = p_next;
    }
    Err(SeriesError::NonConvergent(
        "bivariate network iteration did not stabilize".into(),
    ))
}

/// 2-connected planar graphs with a marked virtual edge, u marking the
/// summed chi of the two networks hanging at the edge. The missing S^2
/// and P^2 terms reflect that no two matched bricks share the R or M
/// kind.
pub fn marked_virtual_edge_series(nets: &BivariatePlanarNetworks) -> BivariateSeries {
    let two = q_int(2);
    let sp = nets.s.mul(&nets.p).scale(&two);
    let sh = nets.s.mul(&nets.h).scale(&two);
    let ph = nets.p.mul(&nets.h).scale(&two);
    let hh = nets.h.mul(&nets.h);
    sp.add(&sh).add(&ph).add(&hh)
}

/// Report of the truncated block-system saddle bound.
#[derive(Debug, Clone)]
pub struct BlockTruncationReport {
    /// E_k: pointed objects whose blocks have size at most k.
    pub e_k: PowerSeries,
    /// The evaluation point u_k.
    pub u_k: f64,
    /// phi_k(u_k) where phi_k(u) = u exp(-g_k(u)).
    pub phi_at_u_k: f64,
    /// Coefficient bounds u_k phi_k(u_k)^{-n} for n = 0..=order.
    pub bounds: Vec<f64>,
    /// Whether u_k came from the radius estimate R(1 + 1/(k log k)) or
    /// from the branch-point fallback.
    pub from_radius_estimate: bool,
}

/// Truncate the block derivative series g to degree k, solve
/// E_k = z exp(g_k(E_k)), and produce the saddle bound
/// [z^n] E_k <= u phi_k(u)^{-n} at u_k.
pub fn block_system_truncation(
    g: &PowerSeries,
    k: usize,
    order: usize,
) -> Result<BlockTruncationReport, SeriesError> {
    let g_k = g.truncated(k.min(g.order()));
    let mut padded = g_k.coeffs().to_vec();
    padded.resize(order + 1, Q::zero());
    let g_k_series = PowerSeries::from_coeffs(padded);
    let spec = SystemSpec {
        names: vec!["E".into()],
        rhs: vec![Expr::mul(
            Expr::Z,
            Expr::exp(Expr::compose(0, Expr::Y(0))),
        )],
        env: vec![g_k_series.clone()],
    };
    let e_k = solve_vector(&spec, order)?.pop().unwrap();
    // phi_k and its derivative, numerically.
    let gk_f64: Vec<f64> = g_k.coeffs().iter().map(q_to_f64).collect();
    let eval_g = |u: f64| -> f64 {
        gk_f64.iter().rev().fold(0.0, |acc, c| acc * u + c)
    };
    let eval_gp = |u: f64| -> f64 {
        let mut acc = 0.0;
        for (i, c) in gk_f64.iter().enumerate().skip(1).rev() {
            acc = acc * u + i as f64 * c;
        }
        acc
    };
    let phi = |u: f64| u * (-eval_g(u)).exp();
    // Branch point: u* with u g_k'(u) = 1 (phi_k' changes sign there).
    let branch = {
        let mut lo = 0.0f64;
        let mut hi = 1.0f64;
        while hi * eval_gp(hi) < 1.0 && hi < 1e12 {
            hi *= 2.0;
        }
        if hi >= 1e12 {
            f64::INFINITY
        } else {
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid * eval_gp(mid) < 1.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            0.5 * (lo + hi)
        }
    };
    // Fallback point when the radius of g is not estimable: just inside
    // the branch point, or any point at all when phi_k only increases.
    let fallback = if branch.is_finite() { 0.98 * branch } else { 1.0 };
    let (u_k, from_radius_estimate) = match super::asym::estimate_growth(g.coeffs()) {
        Ok(est) if k >= 2 => {
            let cand = est.rho * (1.0 + 1.0 / (k as f64 * (k as f64).ln().max(1.0)));
            if cand * eval_gp(cand) < 1.0 {
                (cand, true)
            } else {
                (fallback, false)
            }
        }
        _ => (fallback, false),
    };
    if !(u_k.is_finite() && u_k > 0.0) {
        return Err(SeriesError::DomainError(
            "no valid saddle point for the truncated block system".into(),
        ));
    }
    let phi_at_u_k = phi(u_k);
    let bounds = (0..=order)
        .map(|n| u_k * phi_at_u_k.powi(-(n as i32)))
        .collect();
    Ok(BlockTruncationReport {
        e_k,
        u_k,
        phi_at_u_k,
        bounds,
        from_radius_estimate,
    })
}

fn q_to_f64(q: &Q) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        let l = super::asym::ln_q_abs(q);
        let s = if q.is_negative() { -1.0 } else { 1.0 };
        s * l.exp()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ps::q_ratio;

    #[test]
    fn plane_networks_reproduce_core_series() {
        // C = z + xz + xzN to order 15, with T derived by inversion and N
        // solved independently through the fixed-point system.
        for x in [Q::one(), q_ratio(3, 2)] {
            let order = 15;
            let t = derive_three_connected_plane(order, &x).unwrap();
            // The 3-connected series starts at z^5 (K4 has 6 edges).
            for n in 0..=4 {
                assert_eq!(t.coeff(n), Q::zero(), "t_{n}");
            }
            assert!(t.coeff(5).is_positive(), "K4 embeddings present");
            let nets = plane_network_system(order, &x, &t).unwrap();
            let mcs = maps_and_core_series(order + 1, &x).unwrap();
            let z = PowerSeries::z(order + 1);
            let want = z
                .add(&z.scale(&x))
                .add(&z.scale(&x).mul(&{
                    let mut padded = nets.n.coeffs().to_vec();
                    padded.resize(order + 2, Q::zero());
                    PowerSeries::from_coeffs(padded)
                }))
                .truncated(order);
            assert_eq!(mcs.c.truncated(order), want);
            // Consistency: N = z + S + P + N^ exactly.
            let recomposed = PowerSeries::z(order)
                .add(&nets.s)
                .add(&nets.p)
                .add(&nets.n_hat);
            assert_eq!(recomposed, nets.n);
        }
    }

    #[test]
    fn three_connected_plane_value_matches_enumeration() {
        // [z^5] T at x = 1 counts rooted 3-connected maps with 6 edges,
        // independently enumerable as rotation systems.
        let t = derive_three_connected_plane(6, &Q::one()).unwrap();
        let mut count = 0i64;
        crate::map::for_each_rooted_map(6, true, |m| {
            if m.n_vertices() >= 4 && is_three_connected_map(m) {
                count += 1;
            }
        });
        assert_eq!(t.coeff(5), q_int(count), "3-connected maps with 6 edges");
    }

    /// Simple 3-connectivity test for the map's underlying graph: simple,
    /// at least 4 vertices, and no separation pair (checked by deleting
    /// each vertex pair).
    fn is_three_connected_map(m: &crate::map::RotationMap) -> bool {
        let g = crate::bijection::map_as_graph(m);
        let n = g.n_vertices();
        if n < 4 {
            return false;
        }
        // simplicity
        let mut seen = std::collections::HashSet::new();
        for &(u, v) in g.edges() {
            if u == v || !seen.insert((u.min(v), u.max(v))) {
                return false;
            }
        }
        for u in 0..n as u32 {
            for v in (u + 1)..n as u32 {
                let edges: Vec<(u32, u32)> = g
                    .edges()
                    .iter()
                    .copied()
                    .filter(|&(a, b)| a != u && a != v && b != u && b != v)
                    .collect();
                let verts: std::collections::HashSet<u32> =
                    edges.iter().flat_map(|&(a, b)| [a, b]).collect();
                if verts.len() < n - 2 {
                    return false; // isolated vertex after deletion
                }
                if verts.is_empty() {
                    continue;
                }
                let sub = crate::graph::SimpleGraph::new_multi(n, edges).unwrap();
                let start = *verts.iter().next().unwrap();
                let mut dist = vec![false; n];
                let mut stack = vec![start];
                dist[start as usize] = true;
                while let Some(x) = stack.pop() {
                    for &y in sub.neighbors(x) {
                        if !dist[y as usize] {
                            dist[y as usize] = true;
                            stack.push(y);
                        }
                    }
                }
                if verts.iter().any(|&w| !dist[w as usize]) {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn planar_networks_series_parallel() {
        // T = 0: D counts series-parallel networks; D_1 = 1 and the
        // identity between the system and its one-line form is asserted
        // inside the solver.
        let t0 = PowerSeries::zero(20);
        let nets = planar_network_system(20, &Q::one(), &t0).unwrap();
        assert_eq!(nets.d.coeff(1), Q::one());
        assert_eq!(nets.h, PowerSeries::zero(20));
        assert!(nets.d.is_nonnegative());
        // Hand-derived small EGF coefficients at general x: D_2 = x
        // (series pair), D_3 = x^2 + x (series triple; edge parallel to a
        // series pair).
        let x = q_ratio(5, 3);
        let nets = planar_network_system(8, &x, &PowerSeries::zero(8)).unwrap();
        assert_eq!(nets.d.coeff(2), x.clone());
        assert_eq!(nets.d.coeff(3), &x * &x + &x);
    }

    #[test]
    fn planar_networks_with_toy_table() {
        // A toy 3-connected table still satisfies the asserted identity.
        let mut t = PowerSeries::zero(18);
        t = t.add(&PowerSeries::monomial(q_int(1), 5, 18));
        t = t.add(&PowerSeries::monomial(q_ratio(2, 3), 7, 18));
        let nets = planar_network_system(18, &q_ratio(1, 2), &t).unwrap();
        assert!(nets.h.coeff(6).is_positive());
        assert!(nets.d.is_nonnegative());
    }

    #[test]
    fn bivariate_chi_marking() {
        let x = q_ratio(5, 3);
        let nets = bivariate_network_system(6, 8, &x).unwrap();
        // u = 1 section equals the univariate series-parallel solution.
        let uni = planar_network_system(6, &x, &PowerSeries::zero(6)).unwrap();
        let section = nets.d.at_u_one();
        for n in 0..=6 {
            assert_eq!(section.coeff(n), uni.d.coeff(n), "z^{n}");
        }
        // Single edge: chi = 1. Series pair: chi = 2 with weight x.
        // At z^3: series triple (x^2) and edge-parallel-series-pair (x),
        // both with chi = 3.
        assert_eq!(nets.d.coeff(1, 1), Q::one());
        assert_eq!(nets.d.coeff(2, 2), x.clone());
        assert_eq!(nets.d.coeff(3, 3), &x * &x + &x);
        for k in [0usize, 1, 2] {
            assert_eq!(nets.d.coeff(3, k), Q::zero(), "u^{k}");
        }
        // chi values agree with the recursive decomposition computed on
        // the completed graphs of the two 3-edge networks.
        use crate::decomp::chi_network;
        use crate::graph::SimpleGraph;
        // series triple completed: C4 with root edge 0.
        let c4 = SimpleGraph::new_simple(4, vec![(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(chi_network(&c4, 0).unwrap(), 3);
        // edge parallel to a series pair, completed: triangle + doubled
        // base, rooted at one copy of the base.
        let g = SimpleGraph::new_multi(3, vec![(0, 1), (0, 1), (0, 2), (2, 1)]).unwrap();
        assert_eq!(chi_network(&g, 0).unwrap(), 3);
        // The marked-virtual-edge series only lacks same-kind products.
        let gser = marked_virtual_edge_series(&nets);
        assert!(gser.rows.iter().all(|r| !r.coeffs.iter().any(|c| c.is_negative())));
    }

    #[test]
    fn bivariate_system_with_toy_table() {
        // A toy 3-connected table t_{5,3} = 1 (one polyhedral brick shape
        // with five substitutable edges, three of them pole-path
        // bearing): the u = 1 section of the chi-marked system matches
        // the univariate system with T(w) = w^5.
        let x = q_ratio(1, 2);
        let (zo, uo) = (12, 14);
        let toy = {
            let mut t = crate::series::upoly::BivariateSeries::zero(8, 8);
            t.rows[5] = {
                let mut p = crate::series::upoly::UPoly::zero();
                p.coeffs = vec![Q::zero(), Q::zero(), Q::zero(), Q::one()];
                p
            };
            t
        };
        let nets = bivariate_network_system_with_table(zo, uo, &x, &toy).unwrap();
        let uni_t = PowerSeries::monomial(Q::one(), 5, zo);
        let uni = planar_network_system(zo, &x, &uni_t).unwrap();
        let section = nets.d.at_u_one();
        for n in 0..=zo {
            assert_eq!(section.coeff(n), uni.d.coeff(n), "z^{n}");
        }
        // Coefficients stay nonnegative and the H part appears at the
        // right order (five substituted single edges).
        assert!(nets.h.coeff(5, 3).is_positive());
        for row in &nets.d.rows {
            assert!(!row.coeffs.iter().any(|c| c.is_negative()));
        }
        // A table violating v-degree <= w-degree is rejected.
        let bad = {
            let mut t = crate::series::upoly::BivariateSeries::zero(4, 8);
            t.rows[2] = {
                let mut p = crate::series::upoly::UPoly::zero();
                p.coeffs = vec![Q::zero(); 6];
                p.coeffs[5] = Q::one();
                p
            };
            t
        };
        assert!(bivariate_network_system_with_table(6, 6, &x, &bad).is_err());
    }

    #[test]
    fn block_truncation_bounds() {
        // g = 0: E = z exactly.
        let z_only = block_system_truncation(&PowerSeries::zero(10), 5, 10).unwrap();
        assert_eq!(z_only.e_k, PowerSeries::z(10));
        // Toy g(u) = u: E = z exp(E), the labelled rooted tree EGF with
        // E_n = n^{n-1}/n!; the saddle bound dominates every coefficient.
        let g = PowerSeries::monomial(Q::one(), 1, 30);
        let rep = block_system_truncation(&g, 30, 30).unwrap();
        let mut factorial = Q::one();
        for n in 1..=30usize {
            factorial = factorial * q_int(n as i64);
            let mut pow = Q::one();
            for _ in 0..(n - 1) {
                pow = pow * q_int(n as i64);
            }
            let e_n = &pow / &factorial;
            assert_eq!(rep.e_k.coeff(n), e_n, "Cayley coefficient {n}");
            let bound = rep.bounds[n];
            let exact = super::q_to_f64(&e_n);
            assert!(bound >= exact, "n={n}: bound {bound} < exact {exact}");
        }
        // Monotone in k: coefficients only grow as taller blocks enter.
        let g2 = {
            let mut c = vec![Q::zero(); 13];
            for (i, v) in c.iter_mut().enumerate().skip(1) {
                *v = q_ratio(1, i as i64);
            }
            PowerSeries::from_coeffs(c)
        };
        let e3 = block_system_truncation(&g2, 3, 12).unwrap().e_k;
        let e6 = block_system_truncation(&g2, 6, 12).unwrap().e_k;
        let e12 = block_system_truncation(&g2, 12, 12).unwrap().e_k;
        for n in 0..=12 {
            assert!(e3.coeff(n) <= e6.coeff(n));
            assert!(e6.coeff(n) <= e12.coeff(n));
        }
    }
}
