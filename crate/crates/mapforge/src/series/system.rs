//! Fixed-point systems y = F(z, y) over truncated power series.
//!
//! Right-hand sides are symbolic expressions over ring operations, exp,
//! log, quotients, and composition with named series. Solving iterates
//! y_{h+1} = F(z, y_h) from y_0 = 0; for the systems here each iteration
//! fixes at least one further coefficient, so the truncated solution is
//! reached after at most order+slack rounds (checked, not assumed).

use super::ps::{PowerSeries, Q, SeriesError};
use num_traits::Zero;
#[cfg(test)]
use num_traits::One;

/// Symbolic right-hand side expression.
#[derive(Debug, Clone)]
pub enum Expr {
    Z,
    /// Unknown number `i` of the system.
    Y(usize),
    Const(Q),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, usize),
    Exp(Box<Expr>),
    /// log of an expression with constant term 1.
    Log(Box<Expr>),
    /// Composition with a named series from the system environment.
    Compose(usize, Box<Expr>),
}

impl Expr {
    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }
    pub fn sub(a: Expr, b: Expr) -> Expr {
        Expr::Sub(Box::new(a), Box::new(b))
    }
    pub fn mul(a: Expr, b: Expr) -> Expr {
        Expr::Mul(Box::new(a), Box::new(b))
    }
    pub fn div(a: Expr, b: Expr) -> Expr {
        Expr::Div(Box::new(a), Box::new(b))
    }
    pub fn pow(a: Expr, k: usize) -> Expr {
        Expr::Pow(Box::new(a), k)
    }
    pub fn exp(a: Expr) -> Expr {
        Expr::Exp(Box::new(a))
    }
    pub fn log(a: Expr) -> Expr {
        Expr::Log(Box::new(a))
    }
    pub fn compose(series: usize, a: Expr) -> Expr {
        Expr::Compose(series, Box::new(a))
    }
    pub fn cint(n: i64) -> Expr {
        Expr::Const(super::ps::q_int(n))
    }
    pub fn cq(q: Q) -> Expr {
        Expr::Const(q)
    }

    /// Partial derivative with respect to unknown `j`.
    pub fn d_dy(&self, j: usize) -> Expr {
        match self {
            Expr::Z | Expr::Const(_) => Expr::cint(0),
            Expr::Y(i) => Expr::cint(if *i == j { 1 } else { 0 }),
            Expr::Add(a, b) => Expr::add(a.d_dy(j), b.d_dy(j)),
            Expr::Sub(a, b) => Expr::sub(a.d_dy(j), b.d_dy(j)),
            Expr::Mul(a, b) => Expr::add(
                Expr::mul(a.d_dy(j), (**b).clone()),
                Expr::mul((**a).clone(), b.d_dy(j)),
            ),
            Expr::Div(a, b) => {
                // (a'b - ab') / b^2
                let num = Expr::sub(
                    Expr::mul(a.d_dy(j), (**b).clone()),
                    Expr::mul((**a).clone(), b.d_dy(j)),
                );
                Expr::div(num, Expr::pow((**b).clone(), 2))
            }
            Expr::Pow(a, k) => {
                if *k == 0 {
                    Expr::cint(0)
                } else {
                    Expr::mul(
                        Expr::mul(Expr::cint(*k as i64), Expr::pow((**a).clone(), k - 1)),
                        a.d_dy(j),
                    )
                }
            }
            Expr::Exp(a) => Expr::mul(Expr::exp((**a).clone()), a.d_dy(j)),
            Expr::Log(a) => Expr::div(a.d_dy(j), (**a).clone()),
            Expr::Compose(s, a) => Expr::mul(
                Expr::Compose(usize::MAX - s, a.clone()),
                a.d_dy(j),
            ),
        }
    }
}

/// A fixed-point system: one right-hand side per unknown, plus the named
/// series referenced by `Compose` (env index i) together with their
/// derivatives (env index usize::MAX - i, used by the Jacobian).
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub names: Vec<String>,
    pub rhs: Vec<Expr>,
    pub env: Vec<PowerSeries>,
}

impl SystemSpec {
    pub fn scalar(name: &str, rhs: Expr) -> SystemSpec {
        SystemSpec {
            names: vec![name.to_string()],
            rhs: vec![rhs],
            env: Vec::new(),
        }
    }

    fn env_series(&self, idx: usize, order: usize) -> PowerSeries {
        if idx < self.env.len() {
            // direct reference
            self.env[idx].truncated(order)
        } else {
            // derivative reference: usize::MAX - idx
            self.env[usize::MAX - idx].derivative().truncated(order)
        }
    }

    fn eval_rhs(
        &self,
        which: usize,
        z: &PowerSeries,
        ys: &[PowerSeries],
    ) -> Result<PowerSeries, SeriesError> {
        self.rhs[which].eval_with(z, ys, self)
    }

    /// Evaluate an arbitrary expression against this system's environment.
    pub fn eval_expr(
        &self,
        expr: &Expr,
        z: &PowerSeries,
        ys: &[PowerSeries],
    ) -> Result<PowerSeries, SeriesError> {
        expr.eval_with(z, ys, self)
    }
}

impl Expr {
    fn eval_with(
        &self,
        z: &PowerSeries,
        ys: &[PowerSeries],
        spec: &SystemSpec,
    ) -> Result<PowerSeries, SeriesError> {
        Ok(match self {
            Expr::Z => z.clone(),
            Expr::Y(i) => ys[*i].clone(),
            Expr::Const(c) => PowerSeries::constant(c.clone(), z.order()),
            Expr::Add(a, b) => a.eval_with(z, ys, spec)?.add(&b.eval_with(z, ys, spec)?),
            Expr::Sub(a, b) => a.eval_with(z, ys, spec)?.sub(&b.eval_with(z, ys, spec)?),
            Expr::Mul(a, b) => a.eval_with(z, ys, spec)?.mul(&b.eval_with(z, ys, spec)?),
            Expr::Div(a, b) => a.eval_with(z, ys, spec)?.div(&b.eval_with(z, ys, spec)?)?,
            Expr::Pow(a, k) => a.eval_with(z, ys, spec)?.pow(*k),
            Expr::Exp(a) => a.eval_with(z, ys, spec)?.exp()?,
            Expr::Log(a) => a.eval_with(z, ys, spec)?.log()?,
            Expr::Compose(s, a) => {
                let series = spec.env_series(*s, z.order());
                series.compose(&a.eval_with(z, ys, spec)?)?
            }
        })
    }
}

/// Solve the system to the given truncation order. Iterates from the zero
/// vector, requiring coefficient-wise stabilization within 2*order + 8
/// rounds.
pub fn solve_vector(
    spec: &SystemSpec,
    order: usize,
) -> Result<Vec<PowerSeries>, SeriesError> {
    let z = PowerSeries::z(order);
    let r = spec.rhs.len();
    let mut ys: Vec<PowerSeries> = vec![PowerSeries::zero(order); r];
    // Convergence precondition: F(0, 0) must vanish.
    for i in 0..r {
        let f0 = spec.eval_rhs(i, &z, &ys)?;
        if !f0.coeff(0).is_zero() {
            return Err(SeriesError::NonConvergent(format!(
                "component {} has nonzero constant term at y = 0",
                spec.names.get(i).cloned().unwrap_or_default()
            )));
        }
    }
    let max_rounds = 2 * order + 8;
    for _ in 0..max_rounds {
        let mut next = Vec::with_capacity(r);
        for i in 0..r {
            next.push(spec.eval_rhs(i, &z, &ys)?);
        }
        if next == ys {
            return Ok(ys);
        }
        ys = next;
    }
    Err(SeriesError::NonConvergent(format!(
        "no fixed point after {max_rounds} rounds"
    )))
}

pub fn solve_scalar(spec: &SystemSpec, order: usize) -> Result<PowerSeries, SeriesError> {
    Ok(solve_vector(spec, order)?.into_iter().next().unwrap())
}

/// The exact truncation sequence y_0 = 0, y_{h+1} = F(z, y_h) up to h_max
/// (first unknown of the system).
pub fn height_truncations(
    spec: &SystemSpec,
    order: usize,
    h_max: usize,
) -> Result<Vec<PowerSeries>, SeriesError> {
    let z = PowerSeries::z(order);
    let r = spec.rhs.len();
    let mut ys: Vec<PowerSeries> = vec![PowerSeries::zero(order); r];
    let mut out = vec![ys[0].clone()];
    for _ in 0..h_max {
        let mut next = Vec::with_capacity(r);
        for i in 0..r {
            next.push(spec.eval_rhs(i, &z, &ys)?);
        }
        ys = next;
        out.push(ys[0].clone());
    }
    Ok(out)
}

/// Bicolored labelled trees by vertices with weight x per black vertex:
/// the two-line system for the black-rooted series f and white-rooted
/// series g,
///   f = x z / (1 - 2g) * T( x z / (1 - 2g)^2 ),
///   g = z / (1 - 2f) * T( z / (1 - 2f)^2 ),
/// where T is the plane-tree series T(w) = 1/(1 - w T(w)). The
/// white-black height is a height parameter for this system. At x = 1
/// the unique bicoloring with a black root makes f the labelled-tree
/// series itself.
pub fn bicolored_tree_system(x: Q, order: usize) -> SystemSpec {
    let plane_trees = super::asym::catalan_series(order);
    let one_minus = |y: usize| Expr::sub(Expr::cint(1), Expr::mul(Expr::cint(2), Expr::Y(y)));
    let f_rhs = Expr::mul(
        Expr::div(Expr::mul(Expr::cq(x.clone()), Expr::Z), one_minus(1)),
        Expr::compose(
            0,
            Expr::div(
                Expr::mul(Expr::cq(x.clone()), Expr::Z),
                Expr::pow(one_minus(1), 2),
            ),
        ),
    );
    let g_rhs = Expr::mul(
        Expr::div(Expr::Z, one_minus(0)),
        Expr::compose(0, Expr::div(Expr::Z, Expr::pow(one_minus(0), 2))),
    );
    SystemSpec {
        names: vec!["f".into(), "g".into()],
        rhs: vec![f_rhs, g_rhs],
        env: vec![plane_trees],
    }
}

/// Labelled trees counted by vertices: T = z / (1 - 3T).
pub fn labelled_tree_system() -> SystemSpec {
    SystemSpec::scalar(
        "T",
        Expr::div(
            Expr::Z,
            Expr::sub(Expr::cint(1), Expr::mul(Expr::cint(3), Expr::Y(0))),
        ),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::ps::q_int;
    use crate::tree::enumerate_labelled_trees;

    #[test]
    fn labelled_tree_counts() {
        let t = solve_scalar(&labelled_tree_system(), 8).unwrap();
        // 1, 3, 18, 135 at z^1..z^4: Catalan(n-1) * 3^(n-1), cross-checked
        // against the tree enumeration oracle.
        assert_eq!(t.coeff(1), q_int(1));
        assert_eq!(t.coeff(2), q_int(3));
        assert_eq!(t.coeff(3), q_int(18));
        assert_eq!(t.coeff(4), q_int(135));
        for n in 1..=5usize {
            let count = enumerate_labelled_trees(n - 1).unwrap().len() as i64;
            assert_eq!(t.coeff(n), q_int(count));
        }
    }

    #[test]
    fn catalan_via_fixed_point() {
        // y = z / (1 - y): y_n = Catalan(n-1).
        let spec = SystemSpec::scalar(
            "y",
            Expr::div(Expr::Z, Expr::sub(Expr::cint(1), Expr::Y(0))),
        );
        let y = solve_scalar(&spec, 10).unwrap();
        assert_eq!(y.coeff(1), q_int(1));
        assert_eq!(y.coeff(2), q_int(1));
        assert_eq!(y.coeff(3), q_int(2));
        assert_eq!(y.coeff(4), q_int(5));
        assert_eq!(y.coeff(5), q_int(14));
    }

    #[test]
    fn height_truncation_properties() {
        let spec = labelled_tree_system();
        let order = 12;
        let ys = height_truncations(&spec, order, 14).unwrap();
        // y_1 = z.
        assert_eq!(ys[1], PowerSeries::z(order));
        let solution = solve_scalar(&spec, order).unwrap();
        for (h, yh) in ys.iter().enumerate() {
            for n in 0..=order {
                // monotone and stabilized once h >= n
                assert!(yh.coeff(n) <= solution.coeff(n));
                if h >= n {
                    assert_eq!(yh.coeff(n), solution.coeff(n), "h={h} n={n}");
                }
                if h + 1 < ys.len() {
                    assert!(yh.coeff(n) <= ys[h + 1].coeff(n));
                }
            }
        }
    }

    #[test]
    fn bicolored_system_reduces_to_labelled_trees_at_x1() {
        // Unique bicoloring given the root color: f(x=1) equals the
        // labelled-tree series coefficient-wise to order 20.
        let order = 20;
        let f = solve_vector(&bicolored_tree_system(Q::from_integer(1.into()), order), order)
            .unwrap()
            .remove(0);
        let t = solve_scalar(&labelled_tree_system(), order).unwrap();
        assert_eq!(f, t);
    }

    #[test]
    fn bicolored_system_counts_black_weights() {
        // At general x, [z^n] f enumerates labelled trees weighted by
        // x^(black vertices); cross-check against the tree enumerator
        // with the parity bicoloring for n <= 4 edges (n+1 vertices).
        use crate::series::ps::q_ratio;
        use crate::tree::{bicolor, enumerate_labelled_trees, Color};
        let x = q_ratio(2, 1);
        let order = 6;
        let f = solve_vector(&bicolored_tree_system(x.clone(), order), order)
            .unwrap()
            .remove(0);
        for n_edges in 0..=4usize {
            let mut want = Q::zero();
            for t in enumerate_labelled_trees(n_edges).unwrap() {
                let b = bicolor(&t, Color::Black);
                let blacks = b.colors.iter().filter(|&&c| c == Color::Black).count();
                let mut w = Q::one();
                for _ in 0..blacks {
                    w *= &x;
                }
                want += w;
            }
            assert_eq!(f.coeff(n_edges + 1), want, "n_vertices = {}", n_edges + 1);
        }
    }

    #[test]
    fn nonconvergent_detected() {
        // y = 1 + y has F(0,0) = 1!= 0.
        let spec = SystemSpec::scalar("bad", Expr::add(Expr::cint(1), Expr::Y(0)));
        assert!(matches!(
            solve_scalar(&spec, 5),
            Err(SeriesError::NonConvergent(_))
        ));
    }
}

#[cfg(test)]
mod truncation_decay_tests {
    use super::*;
    use crate::series::asym::eval_series_f64;
    use crate::series::ps::{q_ratio, Q};
    use num_traits::{One, ToPrimitive, Zero};

    /// tau_h = y_h(z0) follows the pointwise iteration
    /// tau_{h+1} = F(z0, tau_h) wherever the series converge; below the
    /// singularity the gaps contract geometrically at rate
    /// F_y(z0, y(z0)) < 1, while at rho = 1/12 the labelled-tree system
    /// is admissible (F_y = 1) and the gaps decay like 1/(6 h^2).
    #[test]
    fn truncation_value_decay() {
        let iterate = |z0: Q, h_max: usize| -> Vec<Q> {
            let mut taus = vec![Q::zero()];
            for _ in 0..h_max {
                let t = taus.last().unwrap();
                let next = &z0 / (Q::one() - Q::from_integer(3.into()) * t);
                taus.push(next);
            }
            taus
        };
        // Geometric regime at z0 = 1/13: ratio tends to
        // F_y(z0, y(z0)) = 3 z0 / (1 - 3 y(z0))^2 ~ 0.5667.
        let taus = iterate(q_ratio(1, 13), 60);
        let gaps: Vec<f64> = taus
            .windows(2)
            .map(|w| (&w[1] - &w[0]).to_f64().unwrap())
            .collect();
        let r40 = gaps[41] / gaps[40];
        let r55 = gaps[56] / gaps[55];
        assert!((r40 - 0.5667).abs() < 0.02, "ratio {r40}");
        assert!((r55 - r40).abs() < 0.01, "geometric rate should be stable");
        // At rho = 1/12: h^2 * gap_h tends to 1/6 and the ratio to 1.
        let taus = iterate(q_ratio(1, 12), 220);
        let gaps: Vec<f64> = taus
            .windows(2)
            .map(|w| (&w[1] - &w[0]).to_f64().unwrap())
            .collect();
        for h in [80usize, 140, 200] {
            let scaled = gaps[h] * (h * h) as f64;
            assert!((scaled - 1.0 / 6.0).abs() < 0.02, "h={h}: {scaled}");
        }
        assert!(gaps[200] / gaps[199] > 0.98, "no geometric contraction at rho");
        // And the series-level truncations evaluate consistently with the
        // pointwise iteration where the truncation tail is negligible.
        let spec = labelled_tree_system();
        let ys = height_truncations(&spec, 80, 6).unwrap();
        let tau6 = iterate(q_ratio(1, 13), 6).pop().unwrap().to_f64().unwrap();
        let via_series = eval_series_f64(&ys[6], 1.0 / 13.0).0;
        assert!((via_series - tau6).abs() < 1e-9);
    }
}
