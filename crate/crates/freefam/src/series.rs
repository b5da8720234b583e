//! Truncated formal power series over `f64`: arithmetic, composition and
//! reversion (Lagrange inversion). Every transform in the toolkit is built on
//! this module.

use crate::{Error, Result};

/// Default truncation degree used when callers do not specify one.
pub const DEFAULT_ORDER: usize = 16;

/// A real formal power series truncated at degree `N` inclusive:
/// `coeffs[k]` is the coefficient of `x^k`, `coeffs.len() == N + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<f64>,
}

impl TruncatedSeries {
    /// Builds a series from its coefficients. Rejects empty or non-finite input.
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { coeffs })
    }

    /// The zero series of the given order.
    pub fn zero(order: usize) -> Self {
        Self { coeffs: vec![0.0; order + 1] }
    }

    /// The constant series 1.
    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = 1.0;
        s
    }

    /// The identity series x.
    pub fn identity(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = 1.0;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `x^k`; zero beyond the truncation order.
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    /// Re-truncates (or zero-extends) to the given order.
    pub fn resized(&self, order: usize) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order + 1, 0.0);
        Self { coeffs }
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(Self { coeffs })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Product truncated to the common order.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let n = self.order();
        let mut coeffs = vec![0.0; n + 1];
        for i in 0..=n {
            if self.coeffs[i] == 0.0 {
                continue;
            }
            for j in 0..=(n - i) {
                coeffs[i + j] += self.coeffs[i] * other.coeffs[j];
            }
        }
        Ok(Self { coeffs })
    }

    /// Multiplicative inverse; requires a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self> {
        let a0 = self.coeffs[0];
        if a0 == 0.0 {
            return Err(Error::NonInvertibleSeries);
        }
        let n = self.order();
        let mut coeffs = vec![0.0; n + 1];
        coeffs[0] = 1.0 / a0;
        for k in 1..=n {
            let mut s = 0.0;
            for j in 1..=k {
                s += self.coeffs[j] * coeffs[k - j];
            }
            coeffs[k] = -s / a0;
        }
        Ok(Self { coeffs })
    }

    /// Natural power by repeated multiplication.
    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..exponent {
            acc = acc.mul(self).expect("orders match");
        }
        acc
    }

    /// Composition `self(inner(x))`; the inner series must vanish at 0.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.check_order(inner)?;
        if inner.coeffs[0] != 0.0 {
            return Err(Error::InnerConstantTerm);
        }
        let n = self.order();
        // Horner evaluation in the series ring.
        let mut acc = Self::zero(n);
        for k in (0..=n).rev() {
            acc = acc.mul(inner)?;
            acc.coeffs[0] += self.coeffs[k];
        }
        Ok(acc)
    }

    /// Derivative, truncated at the same order (top coefficient becomes zero).
    pub fn derivative(&self) -> Self {
        let n = self.order();
        let mut coeffs = vec![0.0; n + 1];
        for k in 1..=n {
            coeffs[k - 1] = self.coeffs[k] * k as f64;
        }
        Self { coeffs }
    }

    /// Compositional inverse by Newton iteration: returns `g` with
    /// `self(g(y)) = y` up to the truncation order. Requires `self(0) = 0`
    /// and a nonzero linear coefficient.
    pub fn revert(&self) -> Result<Self> {
        if self.coeffs[0] != 0.0 {
            return Err(Error::InnerConstantTerm);
        }
        let f1 = self.coeff(1);
        if f1 == 0.0 {
            return Err(Error::NonInvertibleAtOrigin);
        }
        let n = self.order();
        let id = Self::identity(n);
        let deriv = self.derivative();
        let mut g = id.scale(1.0 / f1);
        // Each step doubles the number of correct coefficients.
        let steps = (usize::BITS - n.leading_zeros()) as usize + 1;
        for _ in 0..steps {
            let fg = self.compose(&g)?;
            let residual = fg.sub(&id)?;
            let fpg = deriv.compose(&g)?;
            g = g.sub(&residual.mul(&fpg.reciprocal()?)?)?;
        }
        Ok(g)
    }

    /// Compositional inverse via the Lagrange coefficient formula
    /// `g_n = (1/n) [x^{n-1}] (x / f(x))^n`. Kept as an independent check
    /// of [`TruncatedSeries::revert`].
    pub fn revert_lagrange(&self) -> Result<Self> {
        if self.coeffs[0] != 0.0 {
            return Err(Error::InnerConstantTerm);
        }
        if self.coeff(1) == 0.0 {
            return Err(Error::NonInvertibleAtOrigin);
        }
        let n = self.order();
        // phi = x / f(x) as a series (shift coefficients down by one).
        let mut shifted = self.coeffs[1..].to_vec();
        shifted.resize(n + 1, 0.0);
        let phi = Self { coeffs: shifted }.reciprocal()?;
        let mut g = Self::zero(n);
        let mut phi_pow = Self::one(n);
        for k in 1..=n {
            phi_pow = phi_pow.mul(&phi)?;
            g.coeffs[k] = phi_pow.coeff(k - 1) / k as f64;
        }
        Ok(g)
    }
}
