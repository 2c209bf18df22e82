//! Self-check suite: reference values for the Cs D2 / silica setup, closed
//! forms against brute-force quadrature, and identities that must hold for
//! any configuration.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{
    channel_density, delta_f, delta_f_equivalences, f_evan_limit_kappa1, f_rad_limit_kappa1, Channel,
    DipolePolarization,
};
use crate::error::Result;
use crate::optics::{Branch, InterfaceConfig};
use crate::quad::QuadratureSpec;
use crate::rates::{
    delta_rates, gamma_evan, gamma_mat_vac, gamma_rad, gamma_total, oracle_integrate, rate_report, PhiRange,
};
use crate::vectens::{decompose_coupling, ComplexVector3};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, passed: bool, detail: String) -> Self {
        Self {
            name: name.to_string(),
            passed,
            detail,
        }
    }

    fn failed(name: &str, err: crate::Error) -> Self {
        Self::new(name, false, format!("error: {err}"))
    }
}

fn run(name: &str, f: impl FnOnce() -> Result<(bool, String)>) -> Check {
    match f() {
        Ok((passed, detail)) => Check::new(name, passed, detail),
        Err(e) => Check::failed(name, e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SuiteOptions {
    /// Configuration for the identity and oracle checks. Reference values
    /// always use [`InterfaceConfig::silica_cs_d2`].
    pub config: InterfaceConfig,
    pub quadrature: QuadratureSpec,
    pub oracle_cases: usize,
    pub seed: u64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            config: InterfaceConfig::silica_cs_d2(),
            quadrature: QuadratureSpec::default(),
            oracle_cases: 20,
            seed: 0x5eed,
        }
    }
}

/// Unit-norm complex dipole with components drawn from `[-1, 1]`.
pub fn random_dipole<R: Rng>(rng: &mut R) -> DipolePolarization {
    loop {
        let p: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        if let Ok(u) = DipolePolarization::from_parts(p) {
            return u;
        }
    }
}

pub fn random_real_dipole<R: Rng>(rng: &mut R) -> DipolePolarization {
    loop {
        let p = [rng.gen_range(-1.0..1.0), 0.0, rng.gen_range(-1.0..1.0), 0.0, rng.gen_range(-1.0..1.0), 0.0];
        if let Ok(u) = DipolePolarization::from_parts(p) {
            return u;
        }
    }
}

pub fn random_complex_vector<R: Rng>(rng: &mut R) -> ComplexVector3 {
    ComplexVector3::from_parts(std::array::from_fn(|_| rng.gen_range(-1.0..1.0)))
}

/// Distances `0, step, ..., stop`.
fn grid(stop: f64, step: f64) -> Vec<f64> {
    let n = (stop / step).round() as usize;
    (0..=n).map(|i| step * i as f64).collect()
}

fn scan<F: Fn(f64) -> Result<f64> + Sync>(xs: &[f64], f: F) -> Result<Vec<f64>> {
    xs.par_iter().map(|&x| f(x)).collect()
}

/// Linear-interpolated abscissae where `ys` changes sign.
pub fn sign_changes(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..xs.len() {
        let (a, b) = (ys[i - 1], ys[i]);
        if a == 0.0 {
            out.push(xs[i - 1]);
        } else if a * b < 0.0 {
            out.push(xs[i - 1] + (xs[i] - xs[i - 1]) * a / (a - b));
        }
    }
    out
}

/// Interior local maxima, refined by a parabola through the three samples.
pub fn local_maxima(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let mut out = Vec::new();
    for i in 1..xs.len().saturating_sub(1) {
        let (l, c, r) = (ys[i - 1], ys[i], ys[i + 1]);
        if c > l && c >= r {
            let h = xs[i] - xs[i - 1];
            let denom = l - 2.0 * c + r;
            let shift = if denom != 0.0 { 0.5 * (l - r) / denom } else { 0.0 };
            out.push(xs[i] + shift * h);
        }
    }
    out
}

pub fn peak_enhancement(spec: &QuadratureSpec) -> Check {
    run("peak enhancement", || {
        let cfg = InterfaceConfig::silica_cs_d2();
        let u = DipolePolarization::x();
        let xs = grid(800.0, 2.0);
        let g = scan(&xs, |x| gamma_total(&cfg, &u, x, spec))?;
        let at_zero = g[0];
        let argmax = g.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).map(|(i, _)| xs[i]).unwrap_or(f64::NAN);
        let passed = (at_zero - 2.18).abs() <= 0.02 && argmax == 0.0;
        Ok((passed, format!("gamma_total(0) = {at_zero:.5}, maximum at x = {argmax} nm")))
    })
}

pub fn material_output(spec: &QuadratureSpec) -> Check {
    run("material output rate", || {
        let cfg = InterfaceConfig::silica_cs_d2();
        let u = DipolePolarization::theta_xz();
        let xs = grid(800.0, 10.0);
        let g = scan(&xs, |x| Ok(gamma_mat_vac(&cfg, &u, x, spec)?.gamma_mat))?;
        let lo = g.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = g.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let passed = (g[0] - 0.40).abs() <= 0.01 && hi - lo < 1e-10;
        Ok((passed, format!("gamma_rad_mat = {:.5}, spread {:.1e}", g[0], hi - lo)))
    })
}

pub fn crossovers(spec: &QuadratureSpec) -> Check {
    run("vacuum/material crossovers", || {
        let cfg = InterfaceConfig::silica_cs_d2();
        let u = DipolePolarization::theta_xz();
        let xs = grid(600.0, 1.0);
        let rates = scan(&xs, |x| {
            let r = gamma_mat_vac(&cfg, &u, x, spec)?;
            Ok(r.gamma_vac - r.gamma_mat)
        })?;
        let vac = scan(&xs, |x| Ok(gamma_mat_vac(&cfg, &u, x, spec)?.gamma_vac - 0.5))?;
        let cross = sign_changes(&xs, &rates).first().copied().unwrap_or(f64::NAN);
        let half = sign_changes(&xs, &vac).first().copied().unwrap_or(f64::NAN);
        let passed = (cross - 195.0).abs() <= 5.0 && (half - 397.0).abs() <= 5.0;
        Ok((passed, format!("vac-mat sign change at {cross:.2} nm, vac > 1/2 from {half:.2} nm")))
    })
}

pub fn oscillation_period(spec: &QuadratureSpec) -> Check {
    run("radiation oscillation period", || {
        let cfg = InterfaceConfig::silica_cs_d2();
        let u = DipolePolarization::z();
        let xs = grid(2600.0, 1.0);
        let g = scan(&xs, |x| gamma_rad(&cfg, &u, x, spec))?;
        let peaks = local_maxima(&xs, &g);
        let gaps: Vec<f64> = peaks.windows(2).map(|w| w[1] - w[0]).collect();
        let passed = gaps.len() >= 3 && gaps.iter().all(|d| (d - 426.0).abs() <= 15.0);
        let shown: Vec<String> = gaps.iter().map(|d| format!("{d:.1}")).collect();
        Ok((passed, format!("maxima spacings [{}] nm", shown.join(", "))))
    })
}

pub fn far_limit(spec: &QuadratureSpec) -> Check {
    run("far-distance limit", || {
        let cfg = InterfaceConfig::silica_cs_d2();
        let x = 50.0 * cfg.lambda0_nm();
        let mut worst = 0.0f64;
        for u in [DipolePolarization::x(), DipolePolarization::z(), DipolePolarization::eps_xz()] {
            worst = worst.max((gamma_total(&cfg, &u, x, spec)? - 1.0).abs());
        }
        Ok((worst < 0.005, format!("max |gamma_total - 1| = {worst:.2e} at 50 wavelengths")))
    })
}

pub fn directionality(spec: &QuadratureSpec) -> Check {
    run("circular-dipole directionality", || {
        let cfg = InterfaceConfig::silica_cs_d2();
        let u = DipolePolarization::eps_xz();
        let xs = grid(800.0, 10.0);
        let reports: Vec<_> = xs.par_iter().map(|&x| rate_report(&cfg, &u, x, spec)).collect::<Result<_>>()?;
        let plus_wins = reports.iter().all(|r| r.gamma_evan_plus > r.gamma_evan_minus);
        let zeta_rad0 = reports[0].zeta_rad.unwrap_or(f64::NAN);
        let zeta_evan: Vec<f64> = reports.iter().map(|r| r.zeta_evan.unwrap_or(f64::NAN)).collect();
        let decreasing = zeta_evan.windows(2).all(|w| w[1] < w[0]);
        let passed = plus_wins && zeta_rad0.abs() < 1e-9 && decreasing;
        Ok((
            passed,
            format!(
                "evan+ > evan-: {plus_wins}, zeta_rad(0) = {zeta_rad0:.1e}, zeta_evan decreasing: {decreasing}"
            ),
        ))
    })
}

fn rel_dev(a: f64, b: f64, scale: f64) -> f64 {
    (a - b).abs() / b.abs().max(scale)
}

/// Largest relative deviation between the closed-form rates at `(u, x)` and
/// nested quadrature of the densities. Differences are normalized by the
/// channel rate when they are much smaller than it.
pub fn oracle_deviation(cfg: &InterfaceConfig, u: &DipolePolarization, x: f64, spec: &QuadratureSpec) -> Result<f64> {
    let r = rate_report(cfg, u, x, spec)?;
    let o = |ch, range| oracle_integrate(cfg, u, x, ch, range, spec);
    let half = |ch| -> Result<(f64, f64)> { Ok((o(ch, PhiRange::Plus)?, o(ch, PhiRange::Minus)?)) };
    let (ep, em) = half(Channel::Evan)?;
    let (rp, rm) = half(Channel::Rad)?;
    let (mp, mm) = half(Channel::Mat)?;
    let (vp, vm) = half(Channel::Vac)?;
    let floor = 1e-6;
    let pairs = [
        (r.gamma_evan, ep + em, floor),
        (r.gamma_rad, rp + rm, floor),
        (r.delta_evan, ep - em, r.gamma_evan * 1e-3),
        (r.delta_rad, rp - rm, r.gamma_rad * 1e-3),
        (r.gamma_rad_mat, mp + mm, floor),
        (r.gamma_rad_vac, vp + vm, floor),
        (r.delta_rad_mat, mp - mm, r.gamma_rad_mat * 1e-3),
        (r.delta_rad_vac, vp - vm, r.gamma_rad_vac * 1e-3),
        (r.gamma_plus, ep + rp, floor),
        (r.gamma_minus, em + rm, floor),
    ];
    Ok(pairs.iter().map(|&(a, b, s)| rel_dev(a, b, s.max(1e-12))).fold(0.0, f64::max))
}

pub fn oracle_agreement(opts: &SuiteOptions) -> Check {
    run("closed forms vs brute-force quadrature", || {
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let cases: Vec<(DipolePolarization, f64)> =
            (0..opts.oracle_cases).map(|_| (random_dipole(&mut rng), rng.gen_range(0.0..800.0))).collect();
        let devs: Vec<f64> = cases
            .par_iter()
            .map(|(u, x)| oracle_deviation(&opts.config, u, *x, &opts.quadrature))
            .collect::<Result<_>>()?;
        let worst = devs.iter().cloned().fold(0.0, f64::max);
        Ok((worst < 1e-7, format!("{} cases, worst relative deviation {worst:.1e}", cases.len())))
    })
}

/// Worst spread among the three `ΔF` forms, relative to `max(1, |ΔF|)`.
pub fn delta_form_spread(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    xi: f64,
    phi: f64,
    x: f64,
    branch: Branch,
) -> Result<f64> {
    let forms = delta_f_equivalences(cfg, u, xi, phi, x, branch)?;
    Ok(forms.max_deviation() / forms.closed_form.abs().max(1.0))
}

pub fn delta_forms(opts: &SuiteOptions, points: usize) -> Check {
    run("three-way density difference", || {
        let cfg = &opts.config;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0xdf);
        let mut worst = 0.0f64;
        for _ in 0..points {
            let u = random_dipole(&mut rng);
            let phi = rng.gen_range(0.0..TAU);
            let x = rng.gen_range(0.0..800.0);
            let xi_e = rng.gen_range(0.0..cfg.xi_max_evanescent());
            let xi_r = rng.gen_range(0.0..1.0);
            worst = worst.max(delta_form_spread(cfg, &u, xi_e, phi, x, Branch::Evanescent)?);
            worst = worst.max(delta_form_spread(cfg, &u, xi_r, phi, x, Branch::Radiation)?);
        }
        Ok((worst < 1e-11, format!("{points} points per branch, worst spread {worst:.1e}")))
    })
}

pub fn tensor_identity(seed: u64, pairs: usize) -> Check {
    run("scalar/vector/tensor decomposition", || {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7e);
        let mut worst = 0.0f64;
        let mut worst_real = 0.0f64;
        for _ in 0..pairs {
            let d = random_complex_vector(&mut rng);
            let e = random_complex_vector(&mut rng);
            let direct = d.dot(&e).norm_sqr();
            let parts = decompose_coupling(&d, &e, 1.0);
            worst = worst.max((parts.total() - direct).abs() / direct.max(d.norm_sqr() * e.norm_sqr() * 1e-3));

            let real = |v: &ComplexVector3| {
                ComplexVector3::new(Complex64::from(v.x.re), Complex64::from(v.y.re), Complex64::from(v.z.re))
            };
            worst_real = worst_real.max(decompose_coupling(&real(&d), &real(&e), 1.0).vector_part.abs());
        }
        Ok((
            worst < 1e-12 && worst_real == 0.0,
            format!("{pairs} pairs, worst relative error {worst:.1e}, real-pair vector part {worst_real:.1e}"),
        ))
    })
}

pub fn symmetries(opts: &SuiteOptions, points: usize) -> Check {
    run("symmetries and boundary limits", || {
        let cfg = &opts.config;
        let spec = &opts.quadrature;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed ^ 0x5e);
        let mut worst_delta = 0.0f64;
        let mut worst_inversion = 0.0f64;
        let mut worst_x0 = 0.0f64;
        let mut worst_limit = 0.0f64;
        for _ in 0..points {
            let u = random_real_dipole(&mut rng);
            let x = rng.gen_range(0.0..800.0);
            let d = delta_rates(cfg, &u, x, spec)?;
            worst_delta = worst_delta.max(d.evan.abs()).max(d.rad.abs()).max(d.total.abs());

            let phi = rng.gen_range(0.0..TAU);
            for (xi, ch) in [
                (rng.gen_range(0.0..cfg.xi_max_evanescent()), Channel::Evan),
                (rng.gen_range(0.0..1.0), Channel::Rad),
            ] {
                let a = channel_density(cfg, &u, xi, phi, x, ch)?;
                let b = channel_density(cfg, &u, xi, phi + PI, x, ch)?;
                worst_inversion = worst_inversion.max((a - b).abs() / a.abs().max(1.0));
            }

            let w = random_dipole(&mut rng);
            let xi = rng.gen_range(0.0..1.0);
            worst_x0 = worst_x0.max(delta_f(cfg, &w, xi, phi, 0.0, Channel::Rad)?.abs());
            let evan = f_evan_limit_kappa1(cfg, &w, phi);
            let rad = f_rad_limit_kappa1(cfg, &w, phi);
            worst_limit = worst_limit.max((evan - rad).abs() / evan.abs().max(1.0));
        }
        let g = gamma_evan(cfg, &DipolePolarization::x(), 0.0, spec)?;
        let passed = worst_delta == 0.0 && worst_inversion < 1e-12 && worst_x0 == 0.0 && worst_limit < 1e-12 && g >= 0.0;
        Ok((
            passed,
            format!(
                "real-dipole delta {worst_delta:.1e}, inversion {worst_inversion:.1e}, x=0 delta {worst_x0:.1e}, limit mismatch {worst_limit:.1e}"
            ),
        ))
    })
}

/// Every check, in a fixed order.
pub fn run_suite(opts: &SuiteOptions) -> Vec<Check> {
    let spec = &opts.quadrature;
    vec![
        peak_enhancement(spec),
        material_output(spec),
        crossovers(spec),
        oscillation_period(spec),
        far_limit(spec),
        directionality(spec),
        oracle_agreement(opts),
        delta_forms(opts, 500),
        tensor_identity(opts.seed, 1000),
        symmetries(opts, 50),
    ]
}
