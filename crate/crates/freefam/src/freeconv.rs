//! Free-convolution machinery on the cumulant side: dilated convolution
//! powers (the reproductive property), the free central limit theorem
//! scaling, and the Marchenko-Pastur approximation experiment.

use serde::Serialize;

use crate::cumulants::{cumulants_from_variance, CumulantSequence, RationalVarianceFunction};
use crate::moments::{moments_from_cumulants, MomentSequence};
use crate::{Error, Result};

/// Outcome of a convergence experiment over a parameter grid: the grid, the
/// moment-metric (or cumulant-metric) distance at each grid point, and a
/// least-squares log-log slope estimate when all distances are positive.
#[derive(Debug, Clone, Serialize)]
pub struct ConvergenceReport {
    pub grid: Vec<f64>,
    pub distances: Vec<f64>,
    pub slope: Option<f64>,
}

impl ConvergenceReport {
    fn new(grid: Vec<f64>, distances: Vec<f64>) -> Result<Self> {
        if grid.len() != distances.len() {
            return Err(Error::OrderMismatch(grid.len(), distances.len()));
        }
        if grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "grid must be strictly increasing".into(),
            ));
        }
        if distances.iter().any(|d| !d.is_finite() || *d < 0.0) {
            return Err(Error::NonFinite);
        }
        let slope = log_log_slope(&grid, &distances);
        Ok(Self { grid, distances, slope })
    }
}

fn log_log_slope(grid: &[f64], distances: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = grid
        .iter()
        .zip(distances)
        .filter(|(g, d)| **g > 0.0 && **d > 0.0)
        .map(|(g, d)| (g.ln(), d.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return None;
    }
    Some((n * sxy - sx * sy) / denom)
}

/// Cumulants of `nu_lambda = D_lambda(nu^{boxplus lambda})`, the generator of
/// the family with variance function `V / lambda`. Powers below 1 are only
/// formal (the measure need not exist) and require the `formal` flag.
pub fn reproductive_family(
    v: &RationalVarianceFunction,
    lambda: f64,
    n: usize,
    formal: bool,
) -> Result<CumulantSequence> {
    if lambda <= 0.0 {
        return Err(Error::NonPositivePower);
    }
    if lambda < 1.0 && !formal {
        return Err(Error::InvalidArgument(
            "convolution power below 1 requires the formal flag".into(),
        ));
    }
    cumulants_from_variance(&v.scaled(lambda)?, n)
}

/// CLT scaling `D_{sqrt n}(nu^{boxplus n})`: `c_k` becomes `c_k n^{1-k/2}`,
/// fixing the variance and damping every higher cumulant.
pub fn clt_cumulants(c: &CumulantSequence, n: usize) -> Result<CumulantSequence> {
    if n == 0 {
        return Err(Error::NonPositivePower);
    }
    if c.get(1) != 0.0 {
        return Err(Error::GeneratorNotCentered);
    }
    let nf = n as f64;
    CumulantSequence::new(
        c.values()
            .iter()
            .enumerate()
            .map(|(i, v)| v * nf.powf(1.0 - (i as f64 + 1.0) / 2.0))
            .collect(),
    )
}

/// The variance function `V(m0 + u / sqrt(lambda))` anchored at 0: the
/// standardized family scale used by the CLT-style experiments.
pub fn sqrt_dilated(
    v: &RationalVarianceFunction,
    lambda: f64,
) -> Result<RationalVarianceFunction> {
    if lambda <= 0.0 {
        return Err(Error::NonPositivePower);
    }
    v.substitute_affine(v.anchor(), 1.0 / lambda.sqrt())
}

/// Moments `m_1..m_order` of the family member `Q_m` of the family generated
/// by `V`, computed without quadrature. With `z = m + V(m)/(m - m0)` the
/// member density is `V(m)/(m - m0) * 1/(z - x)` against the generator, so
/// `I_k = int x^k/(z - x) dnu` obeys `I_k = z I_{k-1} - m_{k-1}(nu)` with
/// `I_0 = G(z) = (m - m0)/V(m)`.
pub fn member_moments(
    v: &RationalVarianceFunction,
    m: f64,
    order: usize,
) -> Result<MomentSequence> {
    let c = cumulants_from_variance(v, order.max(2))?;
    let base = moments_from_cumulants(&c, order)?;
    let m0 = v.anchor();
    if m == m0 {
        return Ok(base);
    }
    let vm = v.eval(m);
    if !(vm > 0.0) {
        return Err(Error::MeanOutsideFamilyDomain);
    }
    let z = m + vm / (m - m0);
    let ratio = vm / (m - m0);
    let mut i_k = (m - m0) / vm;
    let mut out = Vec::with_capacity(order);
    for k in 1..=order {
        i_k = z * i_k - base.get(k - 1);
        out.push(ratio * i_k);
    }
    MomentSequence::new(out)
}

/// The Marchenko-Pastur approximation experiment: for each `lambda` the
/// member with mean `m` of the family generated by `V(m0 + u/sqrt(lambda))`
/// is compared, in the max-moment metric up to `order`, with the member
/// `pi_{m, 1/V(m0)}` of the constant-variance (Marchenko-Pastur) family.
pub fn mp_approximation(
    v: &RationalVarianceFunction,
    lambda_grid: &[f64],
    m: f64,
    order: usize,
) -> Result<ConvergenceReport> {
    let v0 = v.eval(v.anchor());
    let delta = v0.sqrt();
    if !(m.abs() < delta) {
        return Err(Error::MeanOutsideFamilyDomain);
    }
    if lambda_grid.iter().any(|l| *l < 1.0) {
        return Err(Error::InvalidArgument(
            "lambda grid entries must be >= 1".into(),
        ));
    }
    let constant = RationalVarianceFunction::polynomial(vec![v0], 0.0)?;
    let target = member_moments(&constant, m, order)?;
    let mut distances = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let w = sqrt_dilated(v, lambda)?;
        let got = member_moments(&w, m, order)?;
        let dist = (1..=order)
            .map(|k| (got.get(k) - target.get(k)).abs())
            .fold(0.0, f64::max);
        distances.push(dist);
    }
    ConvergenceReport::new(lambda_grid.to_vec(), distances)
}

/// Cumulant convergence behind the free Mora theorem: the cumulants of the
/// generator of `V(m0 + u/sqrt(lambda))` approach those of the constant
/// variance function `V(m0)` (a dilated semicircle) as `lambda` grows.
pub fn mora_check(
    v: &RationalVarianceFunction,
    lambda_grid: &[f64],
    n: usize,
) -> Result<ConvergenceReport> {
    let v0 = v.eval(v.anchor());
    let constant = RationalVarianceFunction::polynomial(vec![v0], 0.0)?;
    let limit = cumulants_from_variance(&constant, n)?;
    let mut distances = Vec::with_capacity(lambda_grid.len());
    for &lambda in lambda_grid {
        let c = cumulants_from_variance(&sqrt_dilated(v, lambda)?, n)?;
        let dist = (1..=n)
            .map(|k| (c.get(k) - limit.get(k)).abs())
            .fold(0.0, f64::max);
        distances.push(dist);
    }
    ConvergenceReport::new(lambda_grid.to_vec(), distances)
}
