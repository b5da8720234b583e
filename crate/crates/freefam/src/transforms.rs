//! The analytic-transform layer: R-transform, its Laurent companion
//! `K(z) = R(z) + 1/z`, the Cauchy-Stieltjes transform `G` (as a tail series
//! and numerically), and the theta/mean parametrization maps.

use crate::cumulants::{CumulantSequence, RationalVarianceFunction};
use crate::measures::Measure;
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// R-transform, K-transform and G-tail data of a cumulant sequence.
///
/// `r_series.coeff(n-1)` is the free cumulant `c_n`; `g_tail.coeff(j)` is the
/// coefficient of `z^{-(j+1)}` in `G(z)`, i.e. the `j`-th moment;
/// `k_laurent` is the pole coefficient of `1/z` (always 1) together with the
/// regular part of `K`, which equals `r_series`.
#[derive(Debug, Clone)]
pub struct TransformBundle {
    pub r_series: TruncatedSeries,
    pub g_tail: TruncatedSeries,
    pub k_pole: f64,
    pub k_regular: TruncatedSeries,
}

impl TransformBundle {
    /// Moments `m_0, m_1, ...` read off the G-tail.
    pub fn moments(&self) -> &[f64] {
        self.g_tail.coeffs()
    }
}

/// Builds the bundle from free cumulants: `K(z) = 1/z + R(z)` and `G` is the
/// functional inverse of `K`, obtained by reverting `1/K(u)` as a power
/// series in `u` (so that `w = 1/z` gives `G` as a tail series).
pub fn bundle_from_cumulants(c: &CumulantSequence) -> Result<TransformBundle> {
    let n = c.order();
    let mut r = TruncatedSeries::zero(n);
    let mut coeffs = r.coeffs().to_vec();
    for k in 1..=n {
        coeffs[k - 1] = c.get(k);
    }
    r = TruncatedSeries::new(coeffs)?;
    // F(u) = 1/K(u) = u / (1 + u R(u)); G = revert(F) in the variable w = 1/z.
    let u_r = TruncatedSeries::identity(n).mul(&r)?;
    let one_plus = TruncatedSeries::one(n).add(&u_r)?;
    let f = TruncatedSeries::identity(n).mul(&one_plus.reciprocal()?)?;
    let g = f.revert()?;
    // g(w) = sum_j m_j w^{j+1}: shift down to expose the moments.
    let mut tail = g.coeffs()[1..].to_vec();
    tail.resize(n, 0.0);
    Ok(TransformBundle {
        g_tail: TruncatedSeries::new(tail)?,
        k_pole: 1.0,
        k_regular: r.clone(),
        r_series: r,
    })
}

/// Numerical Cauchy-Stieltjes transform `G(z) = int (z - x)^{-1} dnu` for
/// real `z` strictly outside the support and away from atoms.
pub fn g_numeric(nu: &Measure, z: f64) -> Result<f64> {
    if !nu.is_exterior(z) {
        return Err(Error::InsideSupport);
    }
    Ok(nu.integrate(|x| 1.0 / (z - x)))
}

/// Normalizer, mean, and variance of the kernel-family member `P_theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaPoint {
    /// `M(theta) = int (1 - theta x)^{-1} dnu`.
    pub normalizer: f64,
    pub mean: f64,
    pub variance: f64,
}

/// Evaluates `M(theta)`, the mean `(M - 1)/(theta M)` and the variance
/// `(mean - m0)(1/theta - mean)`, with the continuous extensions at
/// `theta = 0`. The window `|theta| <= 0.5 / support radius` keeps the
/// kernel bounded away from zero.
pub fn theta_maps(nu: &Measure, theta: f64) -> Result<ThetaPoint> {
    let radius = nu.support_radius();
    if radius > 0.0 && theta.abs() > 0.5 / radius {
        return Err(Error::ThetaOutsideWindow);
    }
    let m0 = nu.mean();
    if theta == 0.0 {
        return Ok(ThetaPoint { normalizer: 1.0, mean: m0, variance: nu.variance() });
    }
    let normalizer = nu.integrate(|x| 1.0 / (1.0 - theta * x));
    let mean = (normalizer - 1.0) / (theta * normalizer);
    let variance = (mean - m0) * (1.0 / theta - mean);
    Ok(ThetaPoint { normalizer, mean, variance })
}

/// The parameter data solving "member with mean `m`".
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanPoint {
    /// `psi(m) = (m - m0) / (m (m - m0) + V(m))`.
    pub theta: f64,
    /// `z = 1/theta = m + V(m)/(m - m0)`.
    pub z: f64,
    /// The value `(m - m0)/V(m)` that `G(z)` must take.
    pub g_target: f64,
}

/// Inverts the mean parametrization for a variance function: returns the
/// kernel parameter, the Cauchy-transform argument, and the target value of
/// `G` there.
pub fn mean_to_theta(v: &RationalVarianceFunction, m: f64) -> Result<MeanPoint> {
    let m0 = v.anchor();
    if m == m0 {
        return Err(Error::PsiUndefined);
    }
    let vm = v.eval(m);
    if !(vm > 0.0) {
        return Err(Error::MeanOutsideFamilyDomain);
    }
    let denom = m * (m - m0) + vm;
    if denom == 0.0 {
        return Err(Error::PsiUndefined);
    }
    Ok(MeanPoint {
        theta: (m - m0) / denom,
        z: m + vm / (m - m0),
        g_target: (m - m0) / vm,
    })
}
