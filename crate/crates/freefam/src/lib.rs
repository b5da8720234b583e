//! Numerical toolkit for Cauchy-Stieltjes kernel families (free exponential
//! families): conversions between variance functions, free cumulants, moments
//! and Cauchy/R-transforms, explicit free Meixner laws, admissibility checks
//! for candidate variance functions, and free-convolution experiments
//! (reproductive property, free CLT, Marchenko-Pastur approximation).

pub mod cli;
pub mod cumulants;
pub mod freeconv;
pub mod measures;
pub mod moments;
pub mod quad;
pub mod series;
pub mod transforms;

use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-invertible series")]
    NonInvertibleSeries,
    #[error("inner series must vanish at origin")]
    InnerConstantTerm,
    #[error("non-invertible at origin")]
    NonInvertibleAtOrigin,
    #[error("order mismatch: {0} vs {1}")]
    OrderMismatch(usize, usize),
    #[error("non-finite coefficient")]
    NonFinite,
    #[error("degenerate or invalid variance at anchor")]
    DegenerateVariance,
    #[error("degenerate measure has no variance function")]
    DegenerateCumulants,
    #[error("polynomial degree exceeds configured bound")]
    DegreeBound,
    #[error("dilation by zero")]
    ZeroDilation,
    #[error("convolution power requires a positive exponent")]
    NonPositivePower,
    #[error("enumeration bound exceeded")]
    EnumerationBound,
    #[error("insufficient entries for Hankel matrix of size {0}")]
    HankelEntries(usize),
    #[error("evaluation inside support")]
    InsideSupport,
    #[error("theta outside admissible window")]
    ThetaOutsideWindow,
    #[error("psi undefined at this mean")]
    PsiUndefined,
    #[error("outside Meixner admissibility")]
    MeixnerAdmissibility,
    #[error("standard deviation must be positive")]
    NonPositiveSd,
    #[error("mean outside family domain")]
    MeanOutsideFamilyDomain,
    #[error("generator must be centered")]
    GeneratorNotCentered,
    #[error("measure mass check failed: total mass {0}")]
    MassCheck(f64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
