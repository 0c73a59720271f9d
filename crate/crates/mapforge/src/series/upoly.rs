//! Dense polynomials in a marking variable u, and bivariate series in
//! (z, u) stored as one u-polynomial per z-order. The two truncations are
//! independent: z to `z_order`, u to `u_order` (degrees above u_order are
//! dropped).

use super::ps::{PowerSeries, Q, SeriesError};
use num_traits::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UPoly {
    /// Coefficient of u^k at index k; no trailing-zero normalization.
    pub coeffs: Vec<Q>,
}

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly { coeffs: Vec::new() }
    }

    pub fn constant(c: Q) -> UPoly {
        UPoly { coeffs: vec![c] }
    }

    pub fn u() -> UPoly {
        UPoly {
            coeffs: vec![Q::zero(), Q::one()],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    pub fn add(&self, other: &UPoly) -> UPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) + other.coeff(k)).collect();
        UPoly { coeffs }
    }

    pub fn sub(&self, other: &UPoly) -> UPoly {
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|k| self.coeff(k) - other.coeff(k)).collect();
        UPoly { coeffs }
    }

    pub fn scale(&self, c: &Q) -> UPoly {
        UPoly {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &UPoly, u_order: usize) -> UPoly {
        if self.is_zero() || other.is_zero() {
            return UPoly::zero();
        }
        let len = (self.coeffs.len() + other.coeffs.len() - 1).min(u_order + 1);
        let mut coeffs = vec![Q::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i > u_order {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > u_order {
                    break;
                }
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        UPoly { coeffs }
    }

    pub fn eval(&self, at: &Q) -> Q {
        let mut acc = Q::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn eval_at_one(&self) -> Q {
        self.coeffs.iter().fold(Q::zero(), |a, c| a + c)
    }

    /// Exact division of a polynomial vanishing at 1 by (u - 1).
    pub fn div_by_u_minus_one(&self) -> UPoly {
        debug_assert!(self.eval_at_one().is_zero());
        if self.coeffs.is_empty() {
            return UPoly::zero();
        }
        let d = self.coeffs.len() - 1;
        if d == 0 {
            return UPoly::zero();
        }
        // Synthetic division at root 1.
        let mut q = vec![Q::zero(); d];
        let mut carry = Q::zero();
        for k in (0..d).rev() {
            carry = self.coeff(k + 1) + carry;
            q[k] = carry.clone();
        }
        UPoly { coeffs: q }
    }
}

/// Bivariate series: coefficient of z^n is `rows[n]`, a polynomial in u.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BivariateSeries {
    pub rows: Vec<UPoly>, // length z_order + 1
    pub u_order: usize,
}

impl BivariateSeries {
    pub fn zero(z_order: usize, u_order: usize) -> BivariateSeries {
        BivariateSeries {
            rows: vec![UPoly::zero(); z_order + 1],
            u_order,
        }
    }

    pub fn z_order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn coeff(&self, n: usize, k: usize) -> Q {
        self.rows
            .get(n)
            .map(|p| p.coeff(k))
            .unwrap_or_else(Q::zero)
    }

    pub fn add(&self, other: &BivariateSeries) -> BivariateSeries {
        let zo = self.z_order().min(other.z_order());
        BivariateSeries {
            rows: (0..=zo).map(|n| self.rows[n].add(&other.rows[n])).collect(),
            u_order: self.u_order.min(other.u_order),
        }
    }

    pub fn sub(&self, other: &BivariateSeries) -> BivariateSeries {
        let zo = self.z_order().min(other.z_order());
        BivariateSeries {
            rows: (0..=zo).map(|n| self.rows[n].sub(&other.rows[n])).collect(),
            u_order: self.u_order.min(other.u_order),
        }
    }

    pub fn mul(&self, other: &BivariateSeries) -> BivariateSeries {
        let zo = self.z_order().min(other.z_order());
        let uo = self.u_order.min(other.u_order);
        let mut rows = vec![UPoly::zero(); zo + 1];
        for i in 0..=zo {
            if self.rows[i].is_zero() {
                continue;
            }
            for j in 0..=zo - i {
                if other.rows[j].is_zero() {
                    continue;
                }
                rows[i + j] = rows[i + j].add(&self.rows[i].mul(&other.rows[j], uo));
            }
        }
        BivariateSeries { rows, u_order: uo }
    }

    pub fn scale(&self, c: &Q) -> BivariateSeries {
        BivariateSeries {
            rows: self.rows.iter().map(|p| p.scale(c)).collect(),
            u_order: self.u_order,
        }
    }

    /// Exponential of a bivariate with zero constant row (in z).
    pub fn exp(&self) -> Result<BivariateSeries, SeriesError> {
        if !self.rows[0].is_zero() {
            return Err(SeriesError::ValuationError(
                "bivariate exp needs vanishing z-constant term".into(),
            ));
        }
        let zo = self.z_order();
        let uo = self.u_order;
        let mut g = BivariateSeries::zero(zo, uo);
        g.rows[0] = UPoly::constant(Q::one());
        // n g_n = sum_{k=1..n} k f_k g_{n-k} (rows are u-polynomials).
        for n in 1..=zo {
            let mut acc = UPoly::zero();
            for k in 1..=n {
                if self.rows[k].is_zero() {
                    continue;
                }
                let term = self.rows[k].mul(&g.rows[n - k], uo);
                acc = acc.add(&term.scale(&super::ps::q_int(k as i64)));
            }
            g.rows[n] = acc.scale(&(Q::one() / super::ps::q_int(n as i64)));
        }
        Ok(g)
    }

    /// Multiplicative inverse; the (z^0, u^0) term must be a unit and the
    /// constant row constant in u.
    pub fn inverse(&self) -> Result<BivariateSeries, SeriesError> {
        let c0 = &self.rows[0];
        if c0.is_zero() || c0.degree() != Some(0) {
            return Err(SeriesError::ZeroDivision);
        }
        let zo = self.z_order();
        let uo = self.u_order;
        let inv0 = Q::one() / c0.coeff(0);
        let mut rows = vec![UPoly::zero(); zo + 1];
        rows[0] = UPoly::constant(inv0.clone());
        for n in 1..=zo {
            let mut acc = UPoly::zero();
            for k in 1..=n {
                if !self.rows[k].is_zero() {
                    acc = acc.add(&self.rows[k].mul(&rows[n - k], uo));
                }
            }
            rows[n] = acc.scale(&-inv0.clone());
        }
        Ok(BivariateSeries { rows, u_order: uo })
    }

    /// The u = 1 section as a univariate series in z.
    pub fn at_u_one(&self) -> PowerSeries {
        PowerSeries::from_coeffs(self.rows.iter().map(|p| p.eval_at_one()).collect())
    }

    /// Embed a univariate series (constant in u).
    pub fn from_univariate(f: &PowerSeries, u_order: usize) -> BivariateSeries {
        BivariateSeries {
            rows: f.coeffs().iter().map(|c| UPoly::constant(c.clone())).collect(),
            u_order,
        }
    }
}
