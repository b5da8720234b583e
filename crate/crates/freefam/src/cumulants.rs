//! The dictionary between variance functions and free cumulant sequences,
//! cumulant-side transformation laws, and the admissibility report for
//! candidate variance functions.

use serde::Serialize;
use std::collections::BTreeMap;

use crate::moments::{hankel_minors, moments_from_cumulants};
use crate::series::TruncatedSeries;
use crate::{Error, Result};

/// Maximum polynomial degree accepted for numerator and denominator.
pub const MAX_DEGREE: usize = 8;

/// A variance function `V(m) = P(m)/Q(m)` together with its anchor mean `m0`.
/// Requires `Q(m0) != 0` and `V(m0) > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalVarianceFunction {
    num: Vec<f64>,
    den: Vec<f64>,
    m0: f64,
}

fn poly_eval(p: &[f64], x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + c)
}

fn poly_derivative(p: &[f64]) -> Vec<f64> {
    if p.len() <= 1 {
        return vec![0.0];
    }
    p.iter()
        .enumerate()
        .skip(1)
        .map(|(k, c)| c * k as f64)
        .collect()
}

fn trim(p: &[f64]) -> &[f64] {
    let mut n = p.len();
    while n > 1 && p[n - 1] == 0.0 {
        n -= 1;
    }
    &p[..n]
}

/// Coefficients of `p(alpha + beta * u)` as a polynomial in `u`.
fn poly_affine(p: &[f64], alpha: f64, beta: f64) -> Vec<f64> {
    let mut out = vec![0.0; p.len()];
    for (k, &c) in p.iter().enumerate() {
        // c * (alpha + beta u)^k expanded by the binomial theorem.
        let mut binom = 1.0;
        for j in 0..=k {
            out[j] += c * binom * alpha.powi((k - j) as i32) * beta.powi(j as i32);
            binom = binom * (k - j) as f64 / (j + 1) as f64;
        }
    }
    out
}

impl RationalVarianceFunction {
    pub fn new(num: Vec<f64>, den: Vec<f64>, m0: f64) -> Result<Self> {
        if num.is_empty()
            || den.is_empty()
            || num.iter().chain(&den).any(|c| !c.is_finite())
            || !m0.is_finite()
        {
            return Err(Error::NonFinite);
        }
        let num = trim(&num).to_vec();
        let den = trim(&den).to_vec();
        if num.len() > MAX_DEGREE + 1 || den.len() > MAX_DEGREE + 1 {
            return Err(Error::DegreeBound);
        }
        let v = Self { num, den, m0 };
        let q0 = poly_eval(&v.den, m0);
        if q0 == 0.0 || !v.eval(m0).is_finite() || v.eval(m0) <= 0.0 {
            return Err(Error::DegenerateVariance);
        }
        Ok(v)
    }

    /// Polynomial variance function (denominator 1).
    pub fn polynomial(num: Vec<f64>, m0: f64) -> Result<Self> {
        Self::new(num, vec![1.0], m0)
    }

    pub fn anchor(&self) -> f64 {
        self.m0
    }

    pub fn numerator(&self) -> &[f64] {
        &self.num
    }

    pub fn denominator(&self) -> &[f64] {
        &self.den
    }

    pub fn eval(&self, m: f64) -> f64 {
        poly_eval(&self.num, m) / poly_eval(&self.den, m)
    }

    /// Derivative `V'(m)` of the rational function.
    pub fn eval_derivative(&self, m: f64) -> f64 {
        let p = poly_eval(&self.num, m);
        let q = poly_eval(&self.den, m);
        let dp = poly_eval(&poly_derivative(&self.num), m);
        let dq = poly_eval(&poly_derivative(&self.den), m);
        (dp * q - p * dq) / (q * q)
    }

    /// Taylor expansion of `V(m0 + x)` to the given order.
    pub fn taylor(&self, order: usize) -> Result<TruncatedSeries> {
        let p = TruncatedSeries::new(poly_affine(&self.num, self.m0, 1.0))?.resized(order);
        let q = TruncatedSeries::new(poly_affine(&self.den, self.m0, 1.0))?.resized(order);
        p.mul(&q.reciprocal()?)
    }

    /// The variance function `W(u) = V(alpha + beta * u)`, anchored at
    /// `(m0 - alpha) / beta` so that it describes the same law after an
    /// affine change of the mean variable.
    pub fn substitute_affine(&self, alpha: f64, beta: f64) -> Result<Self> {
        if beta == 0.0 {
            return Err(Error::InvalidArgument("affine scale must be nonzero".into()));
        }
        Self::new(
            poly_affine(&self.num, alpha, beta),
            poly_affine(&self.den, alpha, beta),
            (self.m0 - alpha) / beta,
        )
    }

    /// `V / lambda` as a variance function with the same anchor.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if lambda <= 0.0 {
            return Err(Error::NonPositivePower);
        }
        Self::new(
            self.num.iter().map(|c| c / lambda).collect(),
            self.den.clone(),
            self.m0,
        )
    }
}

/// Free cumulants `c_1..c_N` of a measure; `c_1` is the mean and `c_2` the
/// variance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CumulantSequence {
    c: Vec<f64>,
}

impl CumulantSequence {
    pub fn new(c: Vec<f64>) -> Result<Self> {
        if c.is_empty() || c.iter().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { c })
    }

    pub fn order(&self) -> usize {
        self.c.len()
    }

    /// 1-based access: `get(k)` is `c_k`. Zero beyond the stored order.
    pub fn get(&self, k: usize) -> f64 {
        assert!(k >= 1, "cumulant indices start at 1");
        self.c.get(k - 1).copied().unwrap_or(0.0)
    }

    pub fn values(&self) -> &[f64] {
        &self.c
    }

    pub fn resized(&self, order: usize) -> Self {
        let mut c = self.c.clone();
        c.resize(order, 0.0);
        Self { c }
    }
}

/// Free cumulants of the measure generating the family with variance
/// function `V`: `c_1 = m0` and `c_{n+1} = (1/n) [x^{n-1}] V(m0 + x)^n`.
pub fn cumulants_from_variance(v: &RationalVarianceFunction, n: usize) -> Result<CumulantSequence> {
    if n < 2 {
        return Err(Error::InvalidArgument("cumulant order must be >= 2".into()));
    }
    let vs = v.taylor(n)?;
    let mut c = vec![0.0; n];
    c[0] = v.anchor();
    let mut power = TruncatedSeries::one(n);
    for k in 1..n {
        power = power.mul(&vs)?;
        c[k] = power.coeff(k - 1) / k as f64;
    }
    CumulantSequence::new(c)
}

/// Taylor coefficients (in powers of `m - m0`) of the variance function whose
/// cumulant sequence is `c`; inverse of [`cumulants_from_variance`]. The
/// result has order `c.order() - 2`.
pub fn variance_from_cumulants(c: &CumulantSequence, n: usize) -> Result<TruncatedSeries> {
    let c = c.resized(n);
    if c.get(2) <= 0.0 {
        return Err(Error::DegenerateCumulants);
    }
    // S(u) = R(u) - m0 = c_2 u + c_3 u^2 + ...; inverting m = m0 + S(u)
    // at u = (m - m0)/V(m) gives u as a series in w = m - m0, and
    // V(w) = w / u(w).
    let mut s = TruncatedSeries::zero(n);
    let mut coeffs = s.coeffs().to_vec();
    for j in 1..n {
        coeffs[j] = c.get(j + 1);
    }
    s = TruncatedSeries::new(coeffs)?;
    let u = s.revert()?;
    let mut shifted = u.coeffs()[1..].to_vec();
    shifted.resize(n.saturating_sub(1), 0.0);
    let res = TruncatedSeries::new(shifted)?.reciprocal()?;
    Ok(res.resized(n.saturating_sub(2)))
}

/// A transformation acting on a cumulant sequence.
#[derive(Debug, Clone)]
pub enum CumulantAction<'a> {
    /// Dilation `D_r`: the law of `X / r`; scales `c_k` by `r^{-k}`.
    Dilate(f64),
    /// Free convolution power with dilation, `nu_lambda = D_lambda(nu^{boxplus lambda})`:
    /// keeps `c_1`, scales `c_{n+1}` by `lambda^{-n}`.
    Power(f64),
    /// Free convolution: component-wise sum of cumulants.
    Convolve(&'a CumulantSequence),
}

pub fn transform_cumulants(c: &CumulantSequence, action: CumulantAction) -> Result<CumulantSequence> {
    match action {
        CumulantAction::Dilate(r) => {
            if r == 0.0 {
                return Err(Error::ZeroDilation);
            }
            CumulantSequence::new(
                c.values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v / r.powi(i as i32 + 1))
                    .collect(),
            )
        }
        CumulantAction::Power(lambda) => {
            if lambda <= 0.0 {
                return Err(Error::NonPositivePower);
            }
            CumulantSequence::new(
                c.values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| if i == 0 { *v } else { v / lambda.powi(i as i32) })
                    .collect(),
            )
        }
        CumulantAction::Convolve(other) => {
            if c.order() != other.order() {
                return Err(Error::OrderMismatch(c.order(), other.order()));
            }
            CumulantSequence::new(
                c.values()
                    .iter()
                    .zip(other.values())
                    .map(|(a, b)| a + b)
                    .collect(),
            )
        }
    }
}

/// Affine reduction to the `m0 = 0`, `V(0) = 1` setting:
/// `V*(u) = V(m0 + u sqrt(V(m0))) / V(m0)`.
pub fn standardize_variance(v: &RationalVarianceFunction) -> Result<RationalVarianceFunction> {
    let v0 = v.eval(v.anchor());
    let s = v0.sqrt();
    let w = v.substitute_affine(v.anchor(), s)?;
    RationalVarianceFunction::new(
        w.numerator().iter().map(|c| c / v0).collect(),
        w.denominator().to_vec(),
        0.0,
    )
}

/// Outcome of a single admissibility check with numeric diagnostics.
#[derive(Debug, Clone, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub passed: bool,
    pub witness: BTreeMap<String, f64>,
}

/// Per-check verdicts for a candidate variance function. `admissible`
/// aggregates the necessary conditions for being a variance function at all;
/// `free_id_generator` aggregates the conditions for the generator to be
/// boxplus-infinitely divisible; `overall` is the conjunction of everything.
#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub checks: Vec<CheckRecord>,
    pub admissible: bool,
    pub free_id_generator: bool,
    pub overall: bool,
}

impl AdmissibilityReport {
    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Configuration for [`admissibility_report`].
#[derive(Debug, Clone)]
pub struct AdmissibilityConfig {
    /// Hankel matrices are tested up to this size.
    pub order: usize,
    /// Half-width of the punctured window for the z-map check; `None` picks
    /// `0.1 * sqrt(V*(0)) = 0.1` for the standardized function.
    pub window: Option<f64>,
    /// Sample count per side for the z-map check (log-spaced offsets).
    pub samples: usize,
    /// Relative tolerance absorbed when testing Hankel determinants `>= 0`.
    pub hankel_tol: f64,
}

impl Default for AdmissibilityConfig {
    fn default() -> Self {
        Self { order: 8, window: None, samples: 64, hankel_tol: 1e-9 }
    }
}

/// Runs the necessary-condition battery on `standardize_variance(v)`:
/// (a) the map `z(u) = u + V*(u)/u` must be decreasing on a punctured window,
/// (b) `V*''(0) >= -2` (3x3 Hankel bound), (c) Hankel positivity of the
/// moment sequence, (d) the shifted cumulant sequence must itself be a
/// moment sequence (free Levy-Khinchin), (e) `V*''(0) >= 0`.
/// Checks (d) and (e) only constrain the infinitely-divisible-generator
/// claim, not admissibility itself.
pub fn admissibility_report(
    v: &RationalVarianceFunction,
    config: &AdmissibilityConfig,
) -> Result<AdmissibilityReport> {
    if config.order < 4 {
        return Err(Error::InvalidArgument("admissibility order must be >= 4".into()));
    }
    let vstar = standardize_variance(v)?;
    let k = config.order;
    let delta = config.window.unwrap_or(0.1);
    let mut checks = Vec::new();

    // (a) z-map monotonicity.
    let z_prime = |u: f64| -> f64 {
        1.0 + vstar.eval_derivative(u) / u - vstar.eval(u) / (u * u)
    };
    let mut worst = f64::NEG_INFINITY;
    let mut worst_at = 0.0;
    let samples = config.samples.max(2);
    for i in 0..samples {
        let offset = delta * 10f64.powf(-8.0 + 8.0 * i as f64 / (samples - 1) as f64);
        for u in [offset, -offset] {
            let zp = z_prime(u);
            if !zp.is_finite() || zp > worst {
                worst = if zp.is_finite() { zp } else { f64::INFINITY };
                worst_at = u;
            }
        }
    }
    checks.push(CheckRecord {
        name: "z-map-decreasing".into(),
        passed: worst < 0.0,
        witness: BTreeMap::from([
            ("max_z_prime".into(), worst),
            ("at_offset".into(), worst_at),
            ("window".into(), delta),
        ]),
    });

    // Second derivative at the anchor, from the Taylor expansion.
    let vpp = 2.0 * vstar.taylor(2)?.coeff(2);

    // (b) V*''(0) >= -2.
    checks.push(CheckRecord {
        name: "second-derivative-bound".into(),
        passed: vpp >= -2.0,
        witness: BTreeMap::from([("v_second_derivative".into(), vpp)]),
    });

    // (c) Hankel positivity of the moment sequence.
    let cum = cumulants_from_variance(&vstar, 2 * k)?;
    let mom = moments_from_cumulants(&cum, 2 * k - 2)?;
    let mut full = vec![1.0];
    full.extend_from_slice(mom.values());
    let (dets, passed) = hankel_minors(&full, k, config.hankel_tol)?;
    let min_det = dets.iter().cloned().fold(f64::INFINITY, f64::min);
    checks.push(CheckRecord {
        name: "hankel-moments".into(),
        passed,
        witness: BTreeMap::from([("min_determinant".into(), min_det)]),
    });

    // (d) Free Levy-Khinchin: (c_2, c_3, ...) must be a moment sequence.
    let shifted: Vec<f64> = (2..=2 * k).map(|j| cum.get(j)).collect();
    let (lk_dets, lk_passed) = hankel_minors(&shifted, k, config.hankel_tol)?;
    let lk_min = lk_dets.iter().cloned().fold(f64::INFINITY, f64::min);
    checks.push(CheckRecord {
        name: "levy-khinchin".into(),
        passed: lk_passed,
        witness: BTreeMap::from([("min_determinant".into(), lk_min)]),
    });

    // (e) V*''(0) >= 0, necessary for an infinitely divisible generator.
    checks.push(CheckRecord {
        name: "free-id-second-derivative".into(),
        passed: vpp >= 0.0,
        witness: BTreeMap::from([("v_second_derivative".into(), vpp)]),
    });

    let admissible = checks[..3].iter().all(|c| c.passed);
    let free_id_generator = checks[3..].iter().all(|c| c.passed);
    Ok(AdmissibilityReport {
        admissible,
        free_id_generator,
        overall: admissible && free_id_generator,
        checks,
    })
}
