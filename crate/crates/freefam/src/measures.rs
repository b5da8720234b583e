//! Explicit compactly supported measures: free Meixner laws with their atom
//! taxonomy, semicircle and Marchenko-Pastur family members, and the kernel
//! reweightings that materialize arbitrary family members.

use serde::Serialize;
use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::cumulants::RationalVarianceFunction;
use crate::quad::integrate_arc;
use crate::{Error, Result};

/// Default quadrature node budget for integrals against a measure.
pub const DEFAULT_QUAD_NODES: usize = 2000;

/// Highest moment order served by [`Measure::moment`].
pub const MAX_MOMENT: usize = 16;

/// A point mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Atom {
    pub location: f64,
    pub mass: f64,
}

/// Parameters `(a, b)` of the free Meixner law with variance function
/// `1 + a m + b m^2`; requires `b >= -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeixnerParams {
    pub a: f64,
    pub b: f64,
}

impl MeixnerParams {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) {
            return Err(Error::NonFinite);
        }
        if b < -1.0 {
            return Err(Error::MeixnerAdmissibility);
        }
        Ok(Self { a, b })
    }
}

/// A compactly supported law: an absolutely continuous density on an
/// interval plus a finite list of atoms. Immutable after construction.
#[derive(Clone)]
pub struct Measure {
    ac_support: Option<(f64, f64)>,
    ac_density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    atoms: Vec<Atom>,
    weight_description: String,
    quad_nodes: usize,
}

impl fmt::Debug for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Measure")
            .field("ac_support", &self.ac_support)
            .field("atoms", &self.atoms)
            .field("weight_description", &self.weight_description)
            .finish()
    }
}

impl Measure {
    fn build(
        ac_support: Option<(f64, f64)>,
        ac_density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        atoms: Vec<Atom>,
        weight_description: String,
    ) -> Self {
        Self {
            ac_support,
            ac_density,
            atoms,
            weight_description,
            quad_nodes: DEFAULT_QUAD_NODES,
        }
    }

    pub fn with_quad_nodes(mut self, nodes: usize) -> Self {
        self.quad_nodes = nodes.max(64);
        self
    }

    pub fn ac_support(&self) -> Option<(f64, f64)> {
        self.ac_support
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn description(&self) -> &str {
        &self.weight_description
    }

    /// Density of the absolutely continuous part; zero off the support.
    pub fn density(&self, x: f64) -> f64 {
        match self.ac_support {
            Some((lo, hi)) if x > lo && x < hi => (self.ac_density)(x),
            _ => 0.0,
        }
    }

    /// Largest |x| carrying mass (support endpoints and atoms).
    pub fn support_radius(&self) -> f64 {
        let mut r: f64 = 0.0;
        if let Some((lo, hi)) = self.ac_support {
            r = r.max(lo.abs()).max(hi.abs());
        }
        for atom in &self.atoms {
            r = r.max(atom.location.abs());
        }
        r
    }

    /// `int f dnu`: quadrature over the AC part plus the atom sum.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let ac = match self.ac_support {
            Some((lo, hi)) => {
                let density = &self.ac_density;
                integrate_arc(lo, hi, self.quad_nodes, |x| density(x) * f(x))
            }
            None => 0.0,
        };
        ac + self
            .atoms
            .iter()
            .map(|a| a.mass * f(a.location))
            .sum::<f64>()
    }

    pub fn total_mass(&self) -> f64 {
        self.integrate(|_| 1.0)
    }

    pub fn mean(&self) -> f64 {
        self.integrate(|x| x)
    }

    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        self.integrate(|x| (x - mean) * (x - mean))
    }

    /// Raw moment `int x^k dnu`; `k` capped at [`MAX_MOMENT`].
    pub fn moment(&self, k: usize) -> Result<f64> {
        if k > MAX_MOMENT {
            return Err(Error::InvalidArgument(format!(
                "moment order {k} exceeds the configured maximum {MAX_MOMENT}"
            )));
        }
        Ok(self.integrate(|x| x.powi(k as i32)))
    }

    /// True when `x` lies strictly outside the closed AC support and away
    /// from every atom.
    pub fn is_exterior(&self, x: f64) -> bool {
        if let Some((lo, hi)) = self.ac_support {
            if x >= lo && x <= hi {
                return false;
            }
        }
        self.atoms.iter().all(|a| a.location != x)
    }

    /// Density samples as CSV with header `x,density`.
    pub fn density_csv(&self, resolution: usize) -> String {
        let mut out = String::from("x,density\n");
        if let Some((lo, hi)) = self.ac_support {
            let n = resolution.max(2);
            for i in 0..n {
                let x = lo + (hi - lo) * i as f64 / (n - 1) as f64;
                out.push_str(&format!("{},{}\n", x, (self.ac_density)(x)));
            }
        }
        out
    }

    /// Atoms as a JSON list of `{location, mass}`.
    pub fn atoms_json(&self) -> String {
        serde_json::to_string(&self.atoms).expect("atoms serialize")
    }

    fn check_mass(self) -> Result<Self> {
        let mass = self.total_mass();
        if (mass - 1.0).abs() > 1e-6 {
            return Err(Error::MassCheck(mass));
        }
        Ok(self)
    }
}

/// The free Meixner law for `V(m) = 1 + a m + b m^2`, `m0 = 0`:
/// AC density `sqrt(4(1+b) - (x-a)^2) / (2 pi (b x^2 + a x + 1))` plus up to
/// two atoms depending on `(a, b)`. Atom masses that evaluate negative are
/// clamped at zero, which is recorded in the description; the unit total
/// mass is then verified by quadrature.
pub fn meixner_measure(p: MeixnerParams) -> Result<Measure> {
    let MeixnerParams { a, b } = p;
    let radius = 2.0 * (1.0 + b).sqrt();
    let (atoms, clamped) = meixner_atoms(a, b);
    let mut description = format!("free-meixner(a={a}, b={b})");
    if clamped {
        description.push_str(" [atom mass clamped at 0]");
    }
    let density = move |x: f64| {
        let arg = 4.0 * (1.0 + b) - (x - a) * (x - a);
        if arg <= 0.0 {
            return 0.0;
        }
        arg.sqrt() / (2.0 * PI * (b * x * x + a * x + 1.0))
    };
    let support = if radius > 0.0 {
        Some((a - radius, a + radius))
    } else {
        None
    };
    Measure::build(support, Arc::new(density), atoms, description).check_mass()
}

fn meixner_atoms(a: f64, b: f64) -> (Vec<Atom>, bool) {
    let mut clamped = false;
    let atoms = if b == 0.0 {
        if a * a > 1.0 {
            vec![Atom { location: -1.0 / a, mass: 1.0 - 1.0 / (a * a) }]
        } else {
            Vec::new()
        }
    } else if b > 0.0 {
        // Boundary a^2 = 4b (free gamma type) carries no atom.
        if a * a > 4.0 * b {
            let s = (a * a - 4.0 * b).sqrt();
            let mass = 1.0 - (a.abs() - s) / (2.0 * b * s);
            if mass < 0.0 {
                clamped = true;
            }
            vec![Atom {
                location: -a.signum() * (a.abs() - s) / (2.0 * b),
                mass: mass.max(0.0),
            }]
        } else {
            Vec::new()
        }
    } else {
        // -1 <= b < 0: two candidate atoms.
        let s = (a * a - 4.0 * b).sqrt();
        let m1 = 1.0 + (s - a) / (2.0 * b * s);
        let m2 = 1.0 + (s + a) / (2.0 * b * s);
        if m1 < 0.0 || m2 < 0.0 {
            clamped = true;
        }
        vec![
            Atom { location: (-a + s) / (2.0 * b), mass: m1.max(0.0) },
            Atom { location: (-a - s) / (2.0 * b), mass: m2.max(0.0) },
        ]
    };
    (atoms, clamped)
}

/// Closed-form Cauchy-Stieltjes transform of the free Meixner law at real
/// `z` outside the support, with the branch making `G(z) ~ 1/z` at infinity.
pub fn meixner_g_closed(p: MeixnerParams, z: f64) -> Result<f64> {
    let MeixnerParams { a, b } = p;
    let disc = (a - z) * (a - z) - 4.0 * (1.0 + b);
    if disc < 0.0 {
        return Err(Error::InsideSupport);
    }
    let den = 2.0 * (1.0 + a * z + b * z * z);
    if den == 0.0 {
        return Err(Error::InsideSupport);
    }
    let branch = (z - a).signum() * disc.sqrt();
    Ok((a + z + 2.0 * b * z - branch) / den)
}

/// Semicircle (Wigner) law with the given mean and standard deviation.
pub fn semicircle_measure(mean: f64, sd: f64) -> Result<Measure> {
    if !(sd > 0.0) {
        return Err(Error::NonPositiveSd);
    }
    let density = move |x: f64| {
        let arg = 4.0 * sd * sd - (x - mean) * (x - mean);
        if arg <= 0.0 {
            return 0.0;
        }
        arg.sqrt() / (2.0 * PI * sd * sd)
    };
    Measure::build(
        Some((mean - 2.0 * sd, mean + 2.0 * sd)),
        Arc::new(density),
        Vec::new(),
        format!("semicircle(mean={mean}, sd={sd})"),
    )
    .check_mass()
}

/// The member with mean `m` of the constant-variance family `V = 1/lambda`
/// generated by the semicircle law: an affine Marchenko-Pastur law with
/// density `sqrt(lambda) sqrt(4 - lambda x^2) / (2 pi (1 + lambda m (m - x)))`.
pub fn mp_member(m: f64, lambda: f64) -> Result<Measure> {
    if !(lambda > 0.0) {
        return Err(Error::InvalidArgument("lambda must be positive".into()));
    }
    if m * m > 1.0 / lambda {
        return Err(Error::MeanOutsideFamilyDomain);
    }
    if m == 0.0 {
        return semicircle_measure(0.0, 1.0 / lambda.sqrt());
    }
    let density = move |x: f64| {
        let arg = 4.0 - lambda * x * x;
        if arg <= 0.0 {
            return 0.0;
        }
        lambda.sqrt() * arg.sqrt() / (2.0 * PI * (1.0 + lambda * m * (m - x)))
    };
    let r = 2.0 / lambda.sqrt();
    Measure::build(
        Some((-r, r)),
        Arc::new(density),
        Vec::new(),
        format!("marchenko-pastur-member(m={m}, lambda={lambda})"),
    )
    .check_mass()
}

/// Kernel reweighting `P_theta(dx) = nu(dx) / (M(theta)(1 - theta x))`.
pub fn kernel_reweight(nu: &Measure, theta: f64) -> Result<Measure> {
    let radius = nu.support_radius();
    if radius > 0.0 && theta.abs() > 0.5 / radius {
        return Err(Error::ThetaOutsideWindow);
    }
    let normalizer = nu.integrate(|x| 1.0 / (1.0 - theta * x));
    let base = nu.ac_density.clone();
    let density = move |x: f64| base(x) / (normalizer * (1.0 - theta * x));
    let atoms = nu
        .atoms
        .iter()
        .map(|a| Atom {
            location: a.location,
            mass: a.mass / (normalizer * (1.0 - theta * a.location)),
        })
        .collect();
    Ok(Measure {
        ac_support: nu.ac_support,
        ac_density: Arc::new(density),
        atoms,
        weight_description: format!("{} | kernel(theta={theta})", nu.weight_description),
        quad_nodes: nu.quad_nodes,
    })
}

/// Family member `Q_m` with the density weight
/// `V(m) / (V(m) + (m - m0)(m - x))` applied to the generating measure.
pub fn family_member(
    nu: &Measure,
    v: &RationalVarianceFunction,
    m: f64,
) -> Result<Measure> {
    let m0 = v.anchor();
    let vm = v.eval(m);
    if !(vm > 0.0) {
        return Err(Error::MeanOutsideFamilyDomain);
    }
    // The weight denominator is linear in x: positivity on the support is
    // settled at the endpoints and atom locations.
    let weight_den = |x: f64| vm + (m - m0) * (m - x);
    let mut probes = Vec::new();
    if let Some((lo, hi)) = nu.ac_support {
        probes.push(lo);
        probes.push(hi);
    }
    probes.extend(nu.atoms.iter().map(|a| a.location));
    if probes.iter().any(|&x| weight_den(x) <= 0.0) {
        return Err(Error::MeanOutsideFamilyDomain);
    }
    let base = nu.ac_density.clone();
    let density = move |x: f64| base(x) * vm / (vm + (m - m0) * (m - x));
    let atoms = nu
        .atoms
        .iter()
        .map(|a| Atom {
            location: a.location,
            mass: a.mass * vm / weight_den(a.location),
        })
        .collect();
    Ok(Measure {
        ac_support: nu.ac_support,
        ac_density: Arc::new(density),
        atoms,
        weight_description: format!("{} | member(m={m})", nu.weight_description),
        quad_nodes: nu.quad_nodes,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn meixner_reduces_to_semicircle() {
        let nu = meixner_measure(MeixnerParams::new(0.0, 0.0).unwrap()).unwrap();
        assert!(nu.atoms().is_empty());
        assert_eq!(nu.ac_support(), Some((-2.0, 2.0)));
        assert!((nu.density(0.0) - 1.0 / PI).abs() < 1e-14);
        assert!((nu.total_mass() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn meixner_mp_atom() {
        let nu = meixner_measure(MeixnerParams::new(2.0, 0.0).unwrap()).unwrap();
        assert_eq!(nu.atoms().len(), 1);
        assert!((nu.atoms()[0].location + 0.5).abs() < 1e-14);
        assert!((nu.atoms()[0].mass - 0.75).abs() < 1e-14);
    }

    #[test]
    fn meixner_hyperbolic_has_no_atoms() {
        let nu = meixner_measure(MeixnerParams::new(1.0, 1.0).unwrap()).unwrap();
        assert!(nu.atoms().is_empty());
    }

    #[test]
    fn meixner_two_point_law() {
        // b = -1 collapses the AC part to width zero.
        let nu = meixner_measure(MeixnerParams::new(0.0, -1.0).unwrap()).unwrap();
        assert!(nu.ac_support().is_none());
        assert_eq!(nu.atoms().len(), 2);
        for atom in nu.atoms() {
            assert!((atom.mass - 0.5).abs() < 1e-14);
            assert!((atom.location.abs() - 1.0).abs() < 1e-14);
        }
        assert!((nu.total_mass() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn meixner_rejects_b_below_minus_one() {
        assert_eq!(
            MeixnerParams::new(0.0, -1.5).unwrap_err(),
            Error::MeixnerAdmissibility
        );
    }

    #[test]
    fn meixner_grid_mass_and_centering() {
        for a in [0.0, 1.0, -1.0, 2.0] {
            for b in [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
                let nu = meixner_measure(MeixnerParams::new(a, b).unwrap()).unwrap();
                assert!(
                    (nu.total_mass() - 1.0).abs() < 1e-8,
                    "a={a} b={b}: mass {}",
                    nu.total_mass()
                );
                assert!(nu.mean().abs() < 1e-8, "a={a} b={b}: mean {}", nu.mean());
            }
        }
    }

    #[test]
    fn g_closed_semicircle_value() {
        let p = MeixnerParams::new(0.0, 0.0).unwrap();
        let want = (3.0 - 5f64.sqrt()) / 2.0;
        assert!((meixner_g_closed(p, 3.0).unwrap() - want).abs() < 1e-14);
    }

    #[test]
    fn g_closed_asymptotics() {
        let p = MeixnerParams::new(1.0, 0.5).unwrap();
        for z in [1e4, -1e4] {
            assert!((z * meixner_g_closed(p, z).unwrap() - 1.0).abs() < 1e-3);
        }
    }

    #[test]
    fn g_closed_rejects_interior() {
        let p = MeixnerParams::new(0.0, 0.0).unwrap();
        assert_eq!(meixner_g_closed(p, 0.5).unwrap_err(), Error::InsideSupport);
    }

    #[test]
    fn semicircle_moments() {
        let nu = semicircle_measure(0.0, 1.0).unwrap();
        let want = [1.0, 0.0, 1.0, 0.0, 2.0];
        for (k, w) in want.iter().enumerate() {
            assert!((nu.moment(k).unwrap() - w).abs() < 1e-9, "k={k}");
        }
        let shifted = semicircle_measure(5.0, 1.0).unwrap();
        assert!((shifted.mean() - 5.0).abs() < 1e-9);
        assert_eq!(semicircle_measure(0.0, 0.0).unwrap_err(), Error::NonPositiveSd);
    }

    #[test]
    fn mp_member_examples() {
        let semi = mp_member(0.0, 1.0).unwrap();
        assert_eq!(semi.ac_support(), Some((-2.0, 2.0)));
        let shifted = mp_member(0.5, 1.0).unwrap();
        assert!((shifted.total_mass() - 1.0).abs() < 1e-9);
        assert!((shifted.mean() - 0.5).abs() < 1e-8);
        assert_eq!(mp_member(1.1, 1.0).unwrap_err(), Error::MeanOutsideFamilyDomain);
    }

    #[test]
    fn kernel_reweight_at_zero_is_identity() {
        let nu = semicircle_measure(0.0, 1.0).unwrap();
        let p0 = kernel_reweight(&nu, 0.0).unwrap();
        assert!((p0.total_mass() - 1.0).abs() < 1e-10);
        assert!((p0.density(0.5) - nu.density(0.5)).abs() < 1e-12);
    }

    #[test]
    fn kernel_reweight_window() {
        let nu = semicircle_measure(0.0, 1.0).unwrap();
        assert_eq!(kernel_reweight(&nu, 0.3).unwrap_err(), Error::ThetaOutsideWindow);
        assert!(kernel_reweight(&nu, 0.25).is_ok());
    }

    #[test]
    fn family_member_at_anchor_is_identity() {
        let nu = semicircle_measure(0.0, 1.0).unwrap();
        let v = RationalVarianceFunction::polynomial(vec![1.0], 0.0).unwrap();
        let q = family_member(&nu, &v, 0.0).unwrap();
        assert!((q.density(1.0) - nu.density(1.0)).abs() < 1e-14);
    }

    #[test]
    fn family_member_matches_mp_density() {
        let nu = semicircle_measure(0.0, 1.0).unwrap();
        let v = RationalVarianceFunction::polynomial(vec![1.0], 0.0).unwrap();
        let q = family_member(&nu, &v, 0.4).unwrap();
        let pi = mp_member(0.4, 1.0).unwrap();
        for x in [-1.9, -0.5, 0.0, 0.7, 1.9] {
            assert!((q.density(x) - pi.density(x)).abs() < 1e-12, "x={x}");
        }
        assert!((q.mean() - 0.4).abs() < 1e-8);
    }

    #[test]
    fn density_csv_and_atoms_json() {
        let nu = meixner_measure(MeixnerParams::new(2.0, 0.0).unwrap()).unwrap();
        let csv = nu.density_csv(5);
        assert!(csv.starts_with("x,density\n"));
        assert_eq!(csv.lines().count(), 6);
        let json = nu.atoms_json();
        assert!(json.contains("\"location\":-0.5"));
        assert!(json.contains("\"mass\":0.75"));
    }
}
