//! Truncated formal power series with exact rational coefficients.
//!
//! A series carries coefficients for z^0..=z^N where N is its truncation
//! order; no operation reads beyond the declared order and no floating
//! point enters coefficient arithmetic.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

pub type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    ZeroDivision,
    /// An argument violates a valuation precondition (composition with
    /// constant term, functional inversion without a linear term, ...).
    ValuationError(String),
    NonConvergent(String),
    InversionError(String),
    DomainError(String),
    InsufficientData(String),
    MissingTable(String),
    BudgetExceeded(String),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::ZeroDivision => write!(f, "division by a series with no unit term"),
            SeriesError::ValuationError(m) => write!(f, "valuation error: {m}"),
            SeriesError::NonConvergent(m) => write!(f, "iteration does not converge: {m}"),
            SeriesError::InversionError(m) => write!(f, "functional inversion: {m}"),
            SeriesError::DomainError(m) => write!(f, "domain error: {m}"),
            SeriesError::InsufficientData(m) => write!(f, "insufficient data: {m}"),
            SeriesError::MissingTable(m) => write!(f, "missing coefficient table: {m}"),
            SeriesError::BudgetExceeded(m) => write!(f, "budget exceeded: {m}"),
        }
    }
}

impl std::error::Error for SeriesError {}

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_ratio(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, PartialEq, Eq)]
pub struct PowerSeries {
    coeffs: Vec<Q>, // length order + 1
}

impl fmt::Debug for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PowerSeries[order {}; ", self.order())?;
        for (i, c) in self.coeffs.iter().take(8).enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        if self.coeffs.len() > 8 {
            write!(f, ", ...")?;
        }
        write!(f, "]")
    }
}

impl PowerSeries {
    pub fn from_coeffs(coeffs: Vec<Q>) -> PowerSeries {
        assert!(!coeffs.is_empty());
        PowerSeries { coeffs }
    }

    pub fn zero(order: usize) -> PowerSeries {
        PowerSeries {
            coeffs: vec![Q::zero(); order + 1],
        }
    }

    pub fn constant(c: Q, order: usize) -> PowerSeries {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    pub fn one(order: usize) -> PowerSeries {
        Self::constant(Q::one(), order)
    }

    pub fn z(order: usize) -> PowerSeries {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Q::one();
        }
        s
    }

    pub fn monomial(c: Q, k: usize, order: usize) -> PowerSeries {
        let mut s = Self::zero(order);
        if k <= order {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, n: usize) -> Q {
        self.coeffs.get(n).cloned().unwrap_or_else(Q::zero)
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Index of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn truncated(&self, order: usize) -> PowerSeries {
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(order + 1);
        coeffs.resize(order + 1, Q::zero());
        PowerSeries { coeffs }
    }

    pub fn add(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] + &other.coeffs[i])
            .collect();
        PowerSeries { coeffs }
    }

    pub fn sub(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|i| &self.coeffs[i] - &other.coeffs[i])
            .collect();
        PowerSeries { coeffs }
    }

    pub fn neg(&self) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> PowerSeries {
        PowerSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, other: &PowerSeries) -> PowerSeries {
        let order = self.order().min(other.order());
        let mut coeffs = vec![Q::zero(); order + 1];
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                coeffs[i + j] += &self.coeffs[i] * &other.coeffs[j];
            }
        }
        PowerSeries { coeffs }
    }

    /// Multiplicative inverse; the constant term must be a unit.
    pub fn inverse(&self) -> Result<PowerSeries, SeriesError> {
        if self.coeffs[0].is_zero() {
            return Err(SeriesError::ZeroDivision);
        }
        let order = self.order();
        let inv0 = Q::one() / &self.coeffs[0];
        let mut coeffs = vec![Q::zero(); order + 1];
        coeffs[0] = inv0.clone();
        for n in 1..=order {
            let mut acc = Q::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += &self.coeffs[k] * &coeffs[n - k];
                }
            }
            coeffs[n] = -(acc * &inv0);
        }
        Ok(PowerSeries { coeffs })
    }

    /// Division; denominators with positive valuation are allowed when the
    /// numerator's valuation is at least as large (the powers cancel).
    pub fn div(&self, other: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        match other.valuation() {
            None => Err(SeriesError::ZeroDivision),
            Some(0) => Ok(self.mul(&other.inverse()?)),
            Some(v) => {
                let sv = self.valuation().unwrap_or(usize::MAX);
                if sv < v {
                    return Err(SeriesError::ValuationError(format!(
                        "numerator valuation {sv} below denominator valuation {v}"
                    )));
                }
                let order = self.order().min(other.order());
                if v > order {
                    return Err(SeriesError::ZeroDivision);
                }
                let num = PowerSeries::from_coeffs(self.coeffs[v..=order].to_vec());
                let den = PowerSeries::from_coeffs(other.coeffs[v..=order].to_vec());
                // Result is exact only to order - v.
                Ok(num.mul(&den.inverse()?))
            }
        }
    }

    pub fn pow(&self, k: usize) -> PowerSeries {
        let mut acc = PowerSeries::one(self.order());
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            k >>= 1;
        }
        acc
    }

    /// Composition self(other); `other` must have valuation >= 1.
    pub fn compose(&self, other: &PowerSeries) -> Result<PowerSeries, SeriesError> {
        if !other.coeffs[0].is_zero() {
            return Err(SeriesError::ValuationError(
                "composition argument must vanish at 0".into(),
            ));
        }
        let order = self.order().min(other.order());
        // Horner from the top coefficient down.
        let mut acc = PowerSeries::zero(order);
        for n in (0..=order.min(self.order())).rev() {
            acc = acc.mul(&other.truncated(order));
            acc.coeffs[0] += &self.coeffs[n];
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> PowerSeries {
        let order = self.order();
        let mut coeffs = Vec::with_capacity(order.max(1));
        for n in 1..=order {
            coeffs.push(&self.coeffs[n] * q_int(n as i64));
        }
        if coeffs.is_empty() {
            coeffs.push(Q::zero());
        }
        PowerSeries { coeffs }
    }

    /// Exponential of a series with zero constant term, via the standard
    /// recurrence n g_n = sum k f_k g_{n-k}.
    pub fn exp(&self) -> Result<PowerSeries, SeriesError> {
        if !self.coeffs[0].is_zero() {
            return Err(SeriesError::ValuationError(
                "exp needs zero constant term".into(),
            ));
        }
        let order = self.order();
        let mut g = vec![Q::zero(); order + 1];
        g[0] = Q::one();
        for n in 1..=order {
            let mut acc = Q::zero();
            for k in 1..=n {
                if !self.coeffs[k].is_zero() {
                    acc += q_int(k as i64) * &self.coeffs[k] * &g[n - k];
                }
            }
            g[n] = acc / q_int(n as i64);
        }
        Ok(PowerSeries { coeffs: g })
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<PowerSeries, SeriesError> {
        if !self.coeffs[0].is_one() {
            return Err(SeriesError::ValuationError(
                "log needs constant term 1".into(),
            ));
        }
        // log f = integral of f'/f.
        let order = self.order();
        let fp = self.derivative();
        let ratio = fp.mul(&self.inverse()?);
        let mut coeffs = vec![Q::zero(); order + 1];
        for n in 1..=order {
            coeffs[n] = ratio.coeff(n - 1) / q_int(n as i64);
        }
        Ok(PowerSeries { coeffs })
    }

    /// Compositional inverse g with self(g) = z, by Lagrange inversion:
    /// g_n = (1/n) [w^{n-1}] (w / f(w))^n. Requires valuation exactly 1.
    pub fn invert_functional(&self) -> Result<PowerSeries, SeriesError> {
        if self.valuation() != Some(1) {
            return Err(SeriesError::InversionError(
                "functional inversion needs valuation exactly 1".into(),
            ));
        }
        let order = self.order();
        // u = w / f(w), a unit series.
        let shifted = PowerSeries::from_coeffs(self.coeffs[1..].to_vec());
        let u = shifted.inverse()?.truncated(order);
        let mut g = PowerSeries::zero(order);
        let mut power = PowerSeries::one(order);
        for n in 1..=order {
            power = power.mul(&u);
            g.coeffs[n] = power.coeff(n - 1) / q_int(n as i64);
        }
        // Verify the defining identity to a bounded order; the callers
        // that need the full identity assert it themselves.
        let check_order = order.min(48);
        let check = self.truncated(check_order).compose(&g.truncated(check_order))?;
        for n in 0..=check_order {
            let want = if n == 1 { Q::one() } else { Q::zero() };
            if check.coeff(n) != want {
                return Err(SeriesError::InversionError(format!(
                    "inversion failed at order {n}"
                )));
            }
        }
        Ok(g)
    }

    /// All coefficients nonnegative (meaningful for counting series).
    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }
}
