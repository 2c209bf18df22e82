//! Acceptance criteria, one test per criterion. Each prints a single
//! `PASS`/`FAIL` line (run with `--nocapture` to see them).

use std::f64::consts::{PI, TAU};

use emitsurf::density::{channel_density, delta_f, f_evan_limit_kappa1, f_rad_limit_kappa1};
use emitsurf::rates::{delta_rates, gamma_evan, gamma_mat_vac, gamma_rad, gamma_total, rate_report};
use emitsurf::validate::{
    delta_form_spread, local_maxima, oracle_deviation, random_complex_vector, random_dipole, random_real_dipole,
    sign_changes,
};
use emitsurf::vectens::decompose_coupling;
use emitsurf::{Branch, Channel, ComplexVector3, DipolePolarization, InterfaceConfig, QuadratureSpec};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cfg() -> InterfaceConfig {
    InterfaceConfig::silica_cs_d2()
}

fn spec() -> QuadratureSpec {
    QuadratureSpec::default()
}

fn steps(stop: f64, step: f64) -> Vec<f64> {
    (0..=(stop / step).round() as usize).map(|i| step * i as f64).collect()
}

fn verdict(id: &str, passed: bool, detail: String) {
    println!("criterion {id}: {} {detail}", if passed { "PASS" } else { "FAIL" });
    assert!(passed, "criterion {id}: {detail}");
}

#[test]
fn criterion_01_peak_enhancement() {
    let g = gamma_total(&cfg(), &DipolePolarization::x(), 0.0, &spec()).unwrap();
    verdict("1", (g - 2.18).abs() <= 0.02, format!("gamma_total(0) = {g:.5}"));
}

#[test]
fn criterion_02_material_output() {
    let u = DipolePolarization::theta_xz();
    assert!((u.ux_sqr() - 0.5).abs() < 1e-15);
    let g: Vec<f64> = steps(800.0, 5.0)
        .iter()
        .map(|&x| gamma_mat_vac(&cfg(), &u, x, &spec()).unwrap().gamma_mat)
        .collect();
    let spread = g.iter().cloned().fold(f64::MIN, f64::max) - g.iter().cloned().fold(f64::MAX, f64::min);
    verdict(
        "2",
        (g[0] - 0.40).abs() <= 0.01 && spread < 1e-10,
        format!("gamma_rad_mat = {:.5}, spread {spread:.1e}", g[0]),
    );
}

#[test]
fn criterion_03_crossovers() {
    let u = DipolePolarization::theta_xz();
    let xs = steps(600.0, 1.0);
    let rates: Vec<_> = xs.iter().map(|&x| gamma_mat_vac(&cfg(), &u, x, &spec()).unwrap()).collect();
    let diff: Vec<f64> = rates.iter().map(|r| r.gamma_vac - r.gamma_mat).collect();
    let half: Vec<f64> = rates.iter().map(|r| r.gamma_vac - 0.5).collect();
    let cross = sign_changes(&xs, &diff);
    let above = sign_changes(&xs, &half);
    let (c, h) = (cross.first().copied().unwrap_or(f64::NAN), above.first().copied().unwrap_or(f64::NAN));
    verdict(
        "3",
        (c - 195.0).abs() <= 5.0 && (h - 397.0).abs() <= 5.0,
        format!("sign change at {c:.2} nm, gamma_rad_vac > 1/2 from {h:.2} nm"),
    );
}

#[test]
fn criterion_04_oscillation_period() {
    let u = DipolePolarization::z();
    let xs = steps(2600.0, 1.0);
    let g: Vec<f64> = xs.iter().map(|&x| gamma_rad(&cfg(), &u, x, &spec()).unwrap()).collect();
    let peaks = local_maxima(&xs, &g);
    let gaps: Vec<f64> = peaks.windows(2).map(|w| w[1] - w[0]).collect();
    verdict(
        "4",
        gaps.len() >= 3 && gaps.iter().all(|d| (d - 426.0).abs() <= 15.0),
        format!("maxima at {peaks:.0?}, spacings {gaps:.1?}"),
    );
}

#[test]
fn criterion_05a_far_total_rate() {
    let x = 50.0 * cfg().lambda0_nm();
    let mut worst = 0.0f64;
    for u in [DipolePolarization::x(), DipolePolarization::y(), DipolePolarization::z(), DipolePolarization::eps_xz()] {
        worst = worst.max((gamma_total(&cfg(), &u, x, &spec()).unwrap() - 1.0).abs());
    }
    verdict("5a", worst < 0.005, format!("max |gamma_total - 1| = {worst:.2e} at 50 wavelengths"));
}

#[test]
fn criterion_05b_far_evanescent_rate() {
    let x = 50.0 * cfg().lambda0_nm();
    let mut worst = 0.0f64;
    for u in [DipolePolarization::x(), DipolePolarization::y(), DipolePolarization::z()] {
        worst = worst.max(gamma_evan(&cfg(), &u, x, &spec()).unwrap());
    }
    verdict("5b", worst < 1e-8, format!("max gamma_evan = {worst:.3e} at 50 wavelengths"));
}

#[test]
fn criterion_06_directionality() {
    let u = DipolePolarization::eps_xz();
    let reports: Vec<_> = steps(800.0, 5.0)
        .iter()
        .map(|&x| rate_report(&cfg(), &u, x, &spec()).unwrap())
        .collect();
    let plus_wins = reports.iter().all(|r| r.gamma_evan_plus > r.gamma_evan_minus);
    let zeta_rad0 = reports[0].zeta_rad.expect("gamma_rad is finite");
    let zeta_evan: Vec<f64> = reports.iter().map(|r| r.zeta_evan.expect("gamma_evan is nonzero")).collect();
    let decreasing = zeta_evan.windows(2).all(|w| w[1] < w[0]);
    verdict(
        "6",
        plus_wins && zeta_rad0.abs() < 1e-9 && decreasing,
        format!("evan+ > evan-: {plus_wins}, zeta_rad(0) = {zeta_rad0:.1e}, zeta_evan decreasing: {decreasing}"),
    );
}

#[test]
fn criterion_07_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let cases = 24;
    for _ in 0..cases {
        let u = random_dipole(&mut rng);
        let x = rng.gen_range(0.0..1000.0);
        worst = worst.max(oracle_deviation(&cfg(), &u, x, &spec()).unwrap());
    }
    verdict("7", worst < 1e-7, format!("{cases} cases, worst relative deviation {worst:.1e}"));
}

#[test]
fn criterion_08_three_way_delta() {
    let c = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst = 0.0f64;
    let points = 2000;
    for _ in 0..points {
        let u = random_dipole(&mut rng);
        let phi = rng.gen_range(0.0..TAU);
        let x = rng.gen_range(0.0..2000.0);
        let xi_e = rng.gen_range(0.0..c.xi_max_evanescent());
        let xi_r = rng.gen_range(0.0..1.0);
        worst = worst.max(delta_form_spread(&c, &u, xi_e, phi, x, Branch::Evanescent).unwrap());
        worst = worst.max(delta_form_spread(&c, &u, xi_r, phi, x, Branch::Radiation).unwrap());
    }
    verdict("8", worst < 1e-11, format!("{points} points per branch, worst spread {worst:.1e}"));
}

#[test]
fn criterion_09_tensor_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    let mut worst_real = 0.0f64;
    let real = |v: &ComplexVector3| {
        ComplexVector3::new(Complex64::from(v.x.re), Complex64::from(v.y.re), Complex64::from(v.z.re))
    };
    for _ in 0..1000 {
        let d = random_complex_vector(&mut rng);
        let e = random_complex_vector(&mut rng);
        let direct = d.dot(&e).norm_sqr();
        let parts = decompose_coupling(&d, &e, 1.0);
        worst = worst.max((parts.total() - direct).abs() / direct);
        worst_real = worst_real.max(decompose_coupling(&real(&d), &real(&e), 1.0).vector_part.abs());
    }
    verdict(
        "9",
        worst < 1e-12 && worst_real == 0.0,
        format!("worst relative error {worst:.1e}, real-pair vector part {worst_real:.1e}"),
    );
}

#[test]
fn criterion_10_symmetries() {
    let c = cfg();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let (mut delta, mut inversion, mut x0, mut limit) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..100 {
        let u = random_real_dipole(&mut rng);
        let x = rng.gen_range(0.0..1000.0);
        let d = delta_rates(&c, &u, x, &spec()).unwrap();
        delta = delta.max(d.evan.abs()).max(d.rad.abs()).max(d.total.abs());
        for _ in 0..5 {
            let phi = rng.gen_range(0.0..TAU);
            for (xi, ch) in [
                (rng.gen_range(0.0..c.xi_max_evanescent()), Channel::Evan),
                (rng.gen_range(0.0..1.0), Channel::Rad),
            ] {
                let a = channel_density(&c, &u, xi, phi, x, ch).unwrap();
                let b = channel_density(&c, &u, xi, phi + PI, x, ch).unwrap();
                inversion = inversion.max((a - b).abs() / a.abs().max(1.0));
                let df = delta_f(&c, &u, xi, phi, x, ch).unwrap();
                inversion = inversion.max(df.abs());
            }
            let w = random_dipole(&mut rng);
            x0 = x0.max(delta_f(&c, &w, rng.gen_range(0.0..1.0), phi, 0.0, Channel::Rad).unwrap().abs());
            let (e, r) = (f_evan_limit_kappa1(&c, &w, phi), f_rad_limit_kappa1(&c, &w, phi));
            limit = limit.max((e - r).abs() / e.max(1.0));
        }
    }
    verdict(
        "10",
        delta == 0.0 && inversion < 1e-12 && x0 == 0.0 && limit < 1e-12,
        format!("real-dipole delta {delta:.1e}, inversion {inversion:.1e}, x=0 delta_f {x0:.1e}, limit mismatch {limit:.1e}"),
    );
}
