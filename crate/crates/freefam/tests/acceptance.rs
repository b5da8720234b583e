//! End-to-end acceptance suite. Each test prints one [PASS]/[FAIL] line for
//! its criterion before asserting, so a full run doubles as a checklist.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use freefam::cumulants::{
    admissibility_report, cumulants_from_variance, transform_cumulants, variance_from_cumulants,
    AdmissibilityConfig, CumulantAction, CumulantSequence, RationalVarianceFunction,
};
use freefam::freeconv::{clt_cumulants, mp_approximation, reproductive_family};
use freefam::measures::{
    family_member, meixner_g_closed, meixner_measure, mp_member, semicircle_measure,
    MeixnerParams,
};
use freefam::moments::{
    cumulants_from_moments, enumerate_nc_partitions, moments_from_cumulants,
    moments_via_nc_oracle, MomentSequence,
};
use freefam::series::TruncatedSeries;
use freefam::transforms::{g_numeric, mean_to_theta, theta_maps};

fn conclude(number: usize, name: &str, ok: bool, detail: &str) {
    let verdict = if ok { "[PASS]" } else { "[FAIL]" };
    println!("{verdict} criterion {number}: {name} ({detail})");
    assert!(ok, "criterion {number}: {name}: {detail}");
}

fn quadratic(a: f64, b: f64) -> RationalVarianceFunction {
    RationalVarianceFunction::polynomial(vec![1.0, a, b], 0.0).unwrap()
}

fn catalan(k: usize) -> f64 {
    let mut c = 1.0f64;
    for i in 0..k {
        c = c * 2.0 * (2.0 * i as f64 + 1.0) / (i as f64 + 2.0);
    }
    c
}

#[test]
fn criterion_01_free_gamma_cumulants() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for a in [0.5, 1.0, 2.0] {
        let v = RationalVarianceFunction::polynomial(vec![1.0, 2.0 * a, a * a], 0.0).unwrap();
        let c = cumulants_from_variance(&v, 12).unwrap();
        for k in 1..=11usize {
            let want = catalan(k) * a.powi(k as i32 - 1);
            let rel = (c.get(k + 1) - want).abs() / want.abs();
            worst = worst.max(rel);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        1,
        "free-gamma cumulants match Catalan closed form",
        worst <= 1e-11 && elapsed < 1.0,
        &format!("max rel err {worst:.2e}, {elapsed:.3}s"),
    );
}

#[test]
fn criterion_02_geometric_variance_catalan() {
    let v = RationalVarianceFunction::new(vec![1.0], vec![1.0, -1.0], 0.0).unwrap();
    let c = cumulants_from_variance(&v, 12).unwrap();
    let mut worst = 0.0f64;
    assert_eq!(c.get(1), 0.0);
    for n in 1..=11usize {
        let want = catalan(n - 1);
        worst = worst.max((c.get(n + 1) - want).abs() / want);
    }
    conclude(
        2,
        "V = 1/(1-m) yields the Catalan cumulant sequence",
        worst <= 1e-11,
        &format!("max rel err {worst:.2e}"),
    );
}

#[test]
fn criterion_03_nc_partition_oracle() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    let cases: Vec<(CumulantSequence, MomentSequence)> = (0..100)
        .map(|_| {
            let coeffs: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let c = CumulantSequence::new(coeffs).unwrap();
            let m = moments_from_cumulants(&c, 10).unwrap();
            (c, m)
        })
        .collect();
    // Spot-check the library's one-shot oracle entry point, then share one
    // enumeration per order across all 100 sequences for the full sweep.
    let (c0, m0) = &cases[0];
    let direct = moments_via_nc_oracle(c0, 10).unwrap();
    worst = worst.max((m0.get(10) - direct).abs() / direct.abs().max(1.0));
    for n in 1..=10usize {
        let partitions = enumerate_nc_partitions(n).unwrap();
        for (c, m) in &cases {
            let oracle: f64 = partitions
                .iter()
                .map(|p| p.block_sizes().map(|s| c.get(s)).product::<f64>())
                .sum();
            let rel = (m.get(n) - oracle).abs() / oracle.abs().max(1.0);
            worst = worst.max(rel);
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    conclude(
        3,
        "moment recursion matches non-crossing partition enumeration",
        worst <= 1e-12 && elapsed < 10.0,
        &format!("max rel err {worst:.2e}, {elapsed:.2}s"),
    );
}

fn meixner_grid() -> Vec<(f64, f64)> {
    let mut grid = Vec::new();
    for a in [0.0, 1.0, -1.0, 2.0] {
        for b in [-1.0, -0.5, 0.0, 0.5, 1.0, 2.0] {
            grid.push((a, b));
        }
    }
    grid
}

#[test]
fn criterion_04_meixner_moment_consistency() {
    let mut worst_moment = 0.0f64;
    let mut worst_mass = 0.0f64;
    for (a, b) in meixner_grid() {
        let nu = meixner_measure(MeixnerParams::new(a, b).unwrap()).unwrap();
        let c = cumulants_from_variance(&quadratic(a, b), 10).unwrap();
        let want = moments_from_cumulants(&c, 8).unwrap();
        worst_mass = worst_mass.max((nu.total_mass() - 1.0).abs());
        for k in 1..=8 {
            let got = nu.moment(k).unwrap();
            worst_moment = worst_moment.max((got - want.get(k)).abs());
        }
    }
    conclude(
        4,
        "Meixner measure moments match cumulant predictions on the (a,b) grid",
        worst_moment <= 1e-6 && worst_mass <= 1e-8,
        &format!("max moment gap {worst_moment:.2e}, max mass gap {worst_mass:.2e}"),
    );
}

#[test]
fn criterion_05_meixner_g_transform() {
    let mut worst = 0.0f64;
    for (a, b) in meixner_grid() {
        let p = MeixnerParams::new(a, b).unwrap();
        let nu = meixner_measure(p).unwrap();
        let r = 2.0 * (1.0 + b).sqrt();
        for j in 0..5 {
            for sign in [-1.0, 1.0] {
                let z = a + sign * (r + 0.537 + 0.613 * j as f64);
                let closed = meixner_g_closed(p, z).unwrap();
                let numeric = g_numeric(&nu, z).unwrap();
                worst = worst.max((numeric - closed).abs() / closed.abs().max(1e-30));
            }
        }
    }
    conclude(
        5,
        "closed-form Meixner G matches quadrature at external points",
        worst <= 1e-8,
        &format!("max rel err {worst:.2e}"),
    );
}

#[test]
fn criterion_06_semicircle_family_triangle() {
    let nu = semicircle_measure(0.0, 1.0).unwrap();
    let v = RationalVarianceFunction::polynomial(vec![1.0], 0.0).unwrap();
    let mut worst_mass = 0.0f64;
    let mut worst_mean = 0.0f64;
    let mut worst_var = 0.0f64;
    let mut worst_g = 0.0f64;
    let mut worst_density = 0.0f64;
    for i in 0..20 {
        let m = -0.9 + 1.8 * i as f64 / 19.0;
        let member = family_member(&nu, &v, m).unwrap();
        worst_mass = worst_mass.max((member.total_mass() - 1.0).abs());
        worst_mean = worst_mean.max((member.mean() - m).abs());
        worst_var = worst_var.max((member.variance() - v.eval(m)).abs());
        let point = mean_to_theta(&v, m).unwrap();
        let g = g_numeric(&nu, point.z).unwrap();
        worst_g = worst_g.max((g - point.g_target).abs());
        let pi = mp_member(m, 1.0).unwrap();
        for j in 0..=40 {
            let x = -2.0 + 4.0 * j as f64 / 40.0;
            worst_density = worst_density.max((member.density(x) - pi.density(x)).abs());
        }
    }
    conclude(
        6,
        "semicircle family members satisfy the mean/variance/G triangle",
        worst_mass <= 1e-8
            && worst_mean <= 1e-6
            && worst_var <= 1e-6
            && worst_g <= 1e-8
            && worst_density <= 1e-8,
        &format!(
            "mass {worst_mass:.1e}, mean {worst_mean:.1e}, var {worst_var:.1e}, \
             G {worst_g:.1e}, density {worst_density:.1e}"
        ),
    );
}

#[test]
fn criterion_07_reproductive_property() {
    let mut worst = 0.0f64;
    for a in [0.0, 1.0, 2.0] {
        for b in [0.0, 0.5, 1.0, 2.0] {
            let v = quadratic(a, b);
            let c = cumulants_from_variance(&v, 12).unwrap();
            for lambda in [1.0, 2.0, 10.0] {
                let direct = reproductive_family(&v, lambda, 12, false).unwrap();
                let action = transform_cumulants(&c, CumulantAction::Power(lambda)).unwrap();
                for k in 1..=12 {
                    let rel =
                        (direct.get(k) - action.get(k)).abs() / action.get(k).abs().max(1.0);
                    worst = worst.max(rel);
                }
            }
        }
    }
    conclude(
        7,
        "reproductive property: power action equals V/lambda cumulants",
        worst <= 1e-12,
        &format!("max rel err {worst:.2e}"),
    );
}

#[test]
fn criterion_08_free_clt_rate() {
    let c = CumulantSequence::new(vec![0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0]).unwrap();
    let tail = |n: usize| -> f64 {
        let s = clt_cumulants(&c, n).unwrap();
        (3..=8).map(|k| s.get(k).abs()).fold(0.0, f64::max)
    };
    let ratio = tail(100) / tail(10_000);
    conclude(
        8,
        "free CLT tail cumulants shrink tenfold from n=100 to n=10000",
        (ratio - 10.0).abs() <= 2.0,
        &format!("ratio {ratio:.4}"),
    );
}

#[test]
fn criterion_09_marchenko_pastur_approximation() {
    let v = quadratic(1.0, 0.0);
    let report = mp_approximation(&v, &[100.0, 1000.0, 10_000.0], 0.3, 8).unwrap();
    let decreasing =
        report.distances[0] > report.distances[1] && report.distances[1] > report.distances[2];
    let slope = report.slope.unwrap_or(f64::NAN);
    conclude(
        9,
        "Marchenko-Pastur approximation converges at the n^{-1/2} rate",
        decreasing && (slope + 0.5).abs() <= 0.1,
        &format!(
            "distances {:?}, slope {slope:.4}",
            report.distances
        ),
    );
}

#[test]
fn criterion_10_admissibility_rejections() {
    let config = AdmissibilityConfig::default();
    let neg_quad = admissibility_report(&quadratic(0.0, -2.0), &config).unwrap();
    // The Mobius example needs the wider sampling window to expose the
    // non-monotone z-map; the defaults look only at a small neighborhood.
    let wide = AdmissibilityConfig { window: Some(0.5), ..AdmissibilityConfig::default() };
    let mobius = admissibility_report(
        &RationalVarianceFunction::new(vec![1.0, -1.0], vec![1.0, 1.0], 0.0).unwrap(),
        &wide,
    )
    .unwrap();
    let neg_b = admissibility_report(&quadratic(0.0, -0.5), &config).unwrap();
    let constant = admissibility_report(&quadratic(0.0, 0.0), &config).unwrap();
    let mp = admissibility_report(&quadratic(1.0, 0.0), &config).unwrap();
    let ok = !neg_quad.admissible
        && !mobius.admissible
        && !neg_b.free_id_generator
        && neg_b.admissible
        && constant.overall
        && mp.overall;
    conclude(
        10,
        "rejection suite distinguishes admissible and free-ID generators",
        ok,
        &format!(
            "1-2m^2 admissible={}, (1-m)/(1+m) admissible={}, 1-0.5m^2 free-id={}, \
             V=1 overall={}, V=1+m overall={}",
            neg_quad.admissible,
            mobius.admissible,
            neg_b.free_id_generator,
            constant.overall,
            mp.overall
        ),
    );
}

#[test]
fn criterion_11_roundtrip_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut worst = 0.0f64;

    // variance -> cumulants -> variance on random quadratics.
    for _ in 0..100 {
        let a: f64 = rng.gen_range(-0.5..0.5);
        let b: f64 = rng.gen_range(-0.3..0.5);
        let m0: f64 = rng.gen_range(-0.2..0.2);
        let v = RationalVarianceFunction::polynomial(vec![1.0, a, b], m0).unwrap();
        let c = cumulants_from_variance(&v, 10).unwrap();
        let back = variance_from_cumulants(&c, 10).unwrap();
        let taylor = v.taylor(8).unwrap();
        for k in 0..=7 {
            worst = worst.max((back.coeff(k) - taylor.coeff(k)).abs());
        }
    }

    // cumulants -> moments -> cumulants.
    for _ in 0..100 {
        let coeffs: Vec<f64> = (0..10).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let c = CumulantSequence::new(coeffs).unwrap();
        let m = moments_from_cumulants(&c, 10).unwrap();
        let back = cumulants_from_moments(&MomentSequence::new(m.values().to_vec()).unwrap(), 10)
            .unwrap();
        for k in 1..=10 {
            worst = worst.max((back.get(k) - c.get(k)).abs());
        }
    }

    // psi <-> mean through the semicircle family.
    let nu = semicircle_measure(0.0, 1.0).unwrap();
    let v = RationalVarianceFunction::polynomial(vec![1.0], 0.0).unwrap();
    let mut done = 0;
    while done < 100 {
        let m: f64 = rng.gen_range(-0.25..0.25);
        if m.abs() < 1e-3 {
            continue;
        }
        let p = mean_to_theta(&v, m).unwrap();
        let t = theta_maps(&nu, p.theta).unwrap();
        worst = worst.max((t.mean - m).abs());
        done += 1;
    }

    // series reversion roundtrip.
    for _ in 0..100 {
        let mut coeffs: Vec<f64> = (0..9).map(|_| rng.gen_range(-0.3..0.3)).collect();
        coeffs[0] = 0.0;
        coeffs[1] = rng.gen_range(0.7..1.3);
        let f = TruncatedSeries::new(coeffs).unwrap();
        let g = f.revert().unwrap();
        let round = g.compose(&f).unwrap();
        for k in 0..=8 {
            let want = if k == 1 { 1.0 } else { 0.0 };
            worst = worst.max((round.coeff(k) - want).abs());
        }
    }

    conclude(
        11,
        "randomized roundtrips close within 1e-8",
        worst <= 1e-8,
        &format!("max gap {worst:.2e}"),
    );
}
