//! Integrated emission rates, side-resolved rates and asymmetry factors.
//!
//! Every rate is obtained from a one-dimensional `ξ` integral of the already
//! `φ`-integrated kernels, in units of `γ0`. Evanescent integrals use
//! `ξ = √(n1²-1)·sin t` to absorb the square-root endpoint; radiation
//! integrals start from enough panels that each spans at most half an
//! oscillation of `cos(2ξ k0 x)`.
//!
//! [`oracle_integrate`] instead integrates the angular densities over `ξ` and
//! `φ` directly and serves as an independent check on every closed form.

use std::cell::RefCell;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use serde::{Deserialize, Serialize};

use crate::density::{channel_density, Channel, DipolePolarization};
use crate::error::{Error, Result};
use crate::optics::{check_distance, fresnel_unchecked, transmittance_unchecked, Branch, InterfaceConfig};
use crate::quad::{integrate, QuadratureSpec};

/// Denominators below this make an asymmetry factor undefined.
pub const ZETA_DENOMINATOR_FLOOR: f64 = 1e-12;

/// Dipole orientation for the axis-specific rate formulas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DipoleAxis {
    /// Along `x̂`, normal to the surface.
    Perpendicular,
    /// Any unit vector in the `yz` plane.
    Parallel,
}

/// Integrates `g(ξ)` over the evanescent branch `[0, √(n1²-1)]`.
fn evanescent_integral<G: Fn(f64) -> f64>(cfg: &InterfaceConfig, spec: &QuadratureSpec, g: G) -> Result<f64> {
    let a = cfg.xi_max_evanescent();
    let h = |t: f64| {
        let (s, c) = t.sin_cos();
        g((a * s).min(a)) * a * c
    };
    Ok(integrate(h, 0.0, FRAC_PI_2, 1, spec)?.value)
}

fn radiation_panels(kx: f64) -> usize {
    ((2.0 * kx / PI).ceil() as usize).max(4)
}

/// Integrates `g(ξ)` over the radiation branch `[0, 1]`.
fn radiation_integral<G: Fn(f64) -> f64>(kx: f64, spec: &QuadratureSpec, g: G) -> Result<f64> {
    Ok(integrate(g, 0.0, 1.0, radiation_panels(kx), spec)?.value)
}

fn prepare(cfg: &InterfaceConfig, x_nm: f64, spec: &QuadratureSpec) -> Result<f64> {
    check_distance(x_nm)?;
    spec.validate()?;
    Ok(cfg.kx(x_nm))
}

/// Rate into evanescent modes in all directions.
pub fn gamma_evan(cfg: &InterfaceConfig, u: &DipolePolarization, x_nm: f64, spec: &QuadratureSpec) -> Result<f64> {
    let kx = prepare(cfg, x_nm, spec)?;
    let ux2 = u.ux_sqr();
    let integral = evanescent_integral(cfg, spec, |xi| {
        let t = transmittance_unchecked(cfg, xi);
        let xi2 = xi * xi;
        ((1.0 - ux2) * t.t_s + (ux2 * (2.0 + xi2) + xi2) * t.t_p) * (-2.0 * xi * kx).exp()
    })?;
    Ok(0.75 * integral)
}

/// `(3/4)∫{(1-|u_x|²) r_s + [|u_x|²(2-ξ²) - ξ²] r_p} cos(2ξ k0 x) dξ`, the
/// interference part of the radiation rate.
fn radiation_interference(cfg: &InterfaceConfig, ux2: f64, kx: f64, spec: &QuadratureSpec) -> Result<f64> {
    let integral = radiation_integral(kx, spec, |xi| {
        let r = fresnel_unchecked(cfg, xi);
        let xi2 = xi * xi;
        ((1.0 - ux2) * r.r_s + (ux2 * (2.0 - xi2) - xi2) * r.r_p) * (2.0 * xi * kx).cos()
    })?;
    Ok(0.75 * integral)
}

/// Rate into radiation modes in all directions.
pub fn gamma_rad(cfg: &InterfaceConfig, u: &DipolePolarization, x_nm: f64, spec: &QuadratureSpec) -> Result<f64> {
    let kx = prepare(cfg, x_nm, spec)?;
    Ok(1.0 + radiation_interference(cfg, u.ux_sqr(), kx, spec)?)
}

/// Total rate `1 + (3/4)∫_evan + (3/4)∫_rad`.
pub fn gamma_total(cfg: &InterfaceConfig, u: &DipolePolarization, x_nm: f64, spec: &QuadratureSpec) -> Result<f64> {
    let kx = prepare(cfg, x_nm, spec)?;
    Ok(1.0 + gamma_evan(cfg, u, x_nm, spec)? + radiation_interference(cfg, u.ux_sqr(), kx, spec)?)
}

/// Evanescent rate from the `T_⊥`, `T_∥` coefficients.
pub fn gamma_evan_axis(cfg: &InterfaceConfig, axis: DipoleAxis, x_nm: f64, spec: &QuadratureSpec) -> Result<f64> {
    let kx = prepare(cfg, x_nm, spec)?;
    let (weight, pick): (f64, fn(f64, f64, f64) -> f64) = match axis {
        DipoleAxis::Perpendicular => (1.5, |xi, _ts, tp| (1.0 + xi * xi) * tp),
        DipoleAxis::Parallel => (0.75, |xi, ts, tp| ts + xi * xi * tp),
    };
    let integral = evanescent_integral(cfg, spec, |xi| {
        let t = transmittance_unchecked(cfg, xi);
        pick(xi, t.t_s, t.t_p) * (-2.0 * xi * kx).exp()
    })?;
    Ok(weight * integral)
}

/// Radiation rate from the `r_⊥`, `r_∥` coefficients.
pub fn gamma_rad_axis(cfg: &InterfaceConfig, axis: DipoleAxis, x_nm: f64, spec: &QuadratureSpec) -> Result<f64> {
    let kx = prepare(cfg, x_nm, spec)?;
    let (weight, pick): (f64, fn(f64, f64, f64) -> f64) = match axis {
        DipoleAxis::Perpendicular => (1.5, |xi, _rs, rp| (1.0 - xi * xi) * rp),
        DipoleAxis::Parallel => (0.75, |xi, rs, rp| rs - xi * xi * rp),
    };
    let integral = radiation_integral(kx, spec, |xi| {
        let r = fresnel_unchecked(cfg, xi);
        pick(xi, r.r_s, r.r_p) * (2.0 * xi * kx).cos()
    })?;
    Ok(1.0 + weight * integral)
}

/// Differences `γ^(+) − γ^(−)` between the `+z` and `−z` half-spaces of
/// in-plane wave vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaRates {
    pub evan: f64,
    pub rad: f64,
    pub total: f64,
}

fn delta_evan(cfg: &InterfaceConfig, u: &DipolePolarization, kx: f64, spec: &QuadratureSpec) -> Result<f64> {
    let im = u.xz_product().im;
    if im == 0.0 {
        return Ok(0.0);
    }
    let integral = evanescent_integral(cfg, spec, |xi| {
        xi * (1.0 + xi * xi).sqrt() * transmittance_unchecked(cfg, xi).t_p * (-2.0 * xi * kx).exp()
    })?;
    Ok(6.0 / PI * im * integral)
}

fn delta_rad(cfg: &InterfaceConfig, u: &DipolePolarization, kx: f64, spec: &QuadratureSpec) -> Result<f64> {
    let im = u.xz_product().im;
    if im == 0.0 || kx == 0.0 {
        return Ok(0.0);
    }
    let integral = radiation_integral(kx, spec, |xi| {
        xi * (1.0 - xi * xi).max(0.0).sqrt() * fresnel_unchecked(cfg, xi).r_p * (2.0 * xi * kx).sin()
    })?;
    Ok(6.0 / PI * im * integral)
}

pub fn delta_rates(cfg: &InterfaceConfig, u: &DipolePolarization, x_nm: f64, spec: &QuadratureSpec) -> Result<DeltaRates> {
    let kx = prepare(cfg, x_nm, spec)?;
    let evan = delta_evan(cfg, u, kx, spec)?;
    let rad = delta_rad(cfg, u, kx, spec)?;
    Ok(DeltaRates {
        evan,
        rad,
        total: evan + rad,
    })
}

/// `γ^(±) = γ/2 ± Δ/2`.
pub fn split_sides(gamma: f64, delta: f64) -> (f64, f64) {
    (0.5 * gamma + 0.5 * delta, 0.5 * gamma - 0.5 * delta)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideRates {
    pub evan_plus: f64,
    pub evan_minus: f64,
    pub rad_plus: f64,
    pub rad_minus: f64,
    pub plus: f64,
    pub minus: f64,
}

pub fn side_rates(cfg: &InterfaceConfig, u: &DipolePolarization, x_nm: f64, spec: &QuadratureSpec) -> Result<SideRates> {
    let ge = gamma_evan(cfg, u, x_nm, spec)?;
    let gr = gamma_rad(cfg, u, x_nm, spec)?;
    let d = delta_rates(cfg, u, x_nm, spec)?;
    Ok(compose_sides(ge, gr, &d))
}

fn compose_sides(ge: f64, gr: f64, d: &DeltaRates) -> SideRates {
    let (evan_plus, evan_minus) = split_sides(ge, d.evan);
    let (rad_plus, rad_minus) = split_sides(gr, d.rad);
    let (plus, minus) = split_sides(ge + gr, d.total);
    SideRates {
        evan_plus,
        evan_minus,
        rad_plus,
        rad_minus,
        plus,
        minus,
    }
}

/// Radiation rates split by the half-space that receives the output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatVacRates {
    pub gamma_mat: f64,
    pub gamma_vac: f64,
    pub delta_mat: f64,
    pub delta_vac: f64,
    pub mat_plus: f64,
    pub mat_minus: f64,
    pub vac_plus: f64,
    pub vac_minus: f64,
}

/// `(3/8)∫{(1-|u_x|²) r_s² + [|u_x|²(2-3ξ²)+ξ²] r_p²} dξ`
fn reflected_power(cfg: &InterfaceConfig, ux2: f64, spec: &QuadratureSpec) -> Result<f64> {
    let integral = radiation_integral(0.0, spec, |xi| {
        let r = fresnel_unchecked(cfg, xi);
        let xi2 = xi * xi;
        (1.0 - ux2) * r.r_s * r.r_s + (ux2 * (2.0 - 3.0 * xi2) + xi2) * r.r_p * r.r_p
    })?;
    Ok(0.375 * integral)
}

/// `Δ_rad^mat`, independent of distance.
fn delta_mat(cfg: &InterfaceConfig, u: &DipolePolarization, spec: &QuadratureSpec) -> Result<f64> {
    let re = u.xz_product().re;
    if re == 0.0 {
        return Ok(0.0);
    }
    let integral = radiation_integral(0.0, spec, |xi| {
        let r_p = fresnel_unchecked(cfg, xi).r_p;
        xi * (1.0 - xi * xi).max(0.0).sqrt() * r_p * r_p
    })?;
    Ok(re / PI * (1.0 - 3.0 * integral))
}

pub fn gamma_mat_vac(cfg: &InterfaceConfig, u: &DipolePolarization, x_nm: f64, spec: &QuadratureSpec) -> Result<MatVacRates> {
    let kx = prepare(cfg, x_nm, spec)?;
    let ux2 = u.ux_sqr();
    let power = reflected_power(cfg, ux2, spec)?;
    let interference = radiation_interference(cfg, ux2, kx, spec)?;
    let gamma_mat = 0.5 - power;
    let gamma_vac = 0.5 + power + interference;
    let d_mat = delta_mat(cfg, u, spec)?;
    let d_vac = -d_mat + delta_rad(cfg, u, kx, spec)?;
    let (mat_plus, mat_minus) = split_sides(gamma_mat, d_mat);
    let (vac_plus, vac_minus) = split_sides(gamma_vac, d_vac);
    Ok(MatVacRates {
        gamma_mat,
        gamma_vac,
        delta_mat: d_mat,
        delta_vac: d_vac,
        mat_plus,
        mat_minus,
        vac_plus,
        vac_minus,
    })
}

/// Asymmetry factors `ζ = Δ/γ`; `None` where `γ` is below
/// [`ZETA_DENOMINATOR_FLOOR`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Asymmetry {
    pub evan: Option<f64>,
    pub rad: Option<f64>,
    pub total: Option<f64>,
}

pub fn zeta(delta: f64, gamma: f64) -> Option<f64> {
    (gamma.abs() >= ZETA_DENOMINATOR_FLOOR).then(|| delta / gamma)
}

pub fn asymmetry(cfg: &InterfaceConfig, u: &DipolePolarization, x_nm: f64, spec: &QuadratureSpec) -> Result<Asymmetry> {
    let ge = gamma_evan(cfg, u, x_nm, spec)?;
    let gr = gamma_rad(cfg, u, x_nm, spec)?;
    let d = delta_rates(cfg, u, x_nm, spec)?;
    Ok(Asymmetry {
        evan: zeta(d.evan, ge),
        rad: zeta(d.rad, gr),
        total: zeta(d.total, ge + gr),
    })
}

/// Every integrated quantity at one distance, in units of `γ0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub x_nm: f64,
    pub gamma_evan: f64,
    pub gamma_rad: f64,
    pub gamma_total: f64,
    pub delta_evan: f64,
    pub delta_rad: f64,
    pub delta_total: f64,
    pub gamma_evan_plus: f64,
    pub gamma_evan_minus: f64,
    pub gamma_rad_plus: f64,
    pub gamma_rad_minus: f64,
    pub gamma_plus: f64,
    pub gamma_minus: f64,
    pub gamma_rad_mat: f64,
    pub gamma_rad_vac: f64,
    pub delta_rad_mat: f64,
    pub delta_rad_vac: f64,
    pub gamma_rad_mat_plus: f64,
    pub gamma_rad_mat_minus: f64,
    pub gamma_rad_vac_plus: f64,
    pub gamma_rad_vac_minus: f64,
    pub zeta_evan: Option<f64>,
    pub zeta_rad: Option<f64>,
    pub zeta_total: Option<f64>,
}

impl RateReport {
    /// Column names in the order of [`values`](Self::values).
    pub const COLUMNS: [&'static str; 24] = [
        "x_nm",
        "gamma_evan",
        "gamma_rad",
        "gamma_total",
        "delta_evan",
        "delta_rad",
        "delta_total",
        "gamma_evan_plus",
        "gamma_evan_minus",
        "gamma_rad_plus",
        "gamma_rad_minus",
        "gamma_plus",
        "gamma_minus",
        "gamma_rad_mat",
        "gamma_rad_vac",
        "delta_rad_mat",
        "delta_rad_vac",
        "gamma_rad_mat_plus",
        "gamma_rad_mat_minus",
        "gamma_rad_vac_plus",
        "gamma_rad_vac_minus",
        "zeta_evan",
        "zeta_rad",
        "zeta_total",
    ];

    /// Flat values; undefined asymmetry factors become NaN.
    pub fn values(&self) -> [f64; 24] {
        let z = |v: Option<f64>| v.unwrap_or(f64::NAN);
        [
            self.x_nm,
            self.gamma_evan,
            self.gamma_rad,
            self.gamma_total,
            self.delta_evan,
            self.delta_rad,
            self.delta_total,
            self.gamma_evan_plus,
            self.gamma_evan_minus,
            self.gamma_rad_plus,
            self.gamma_rad_minus,
            self.gamma_plus,
            self.gamma_minus,
            self.gamma_rad_mat,
            self.gamma_rad_vac,
            self.delta_rad_mat,
            self.delta_rad_vac,
            self.gamma_rad_mat_plus,
            self.gamma_rad_mat_minus,
            self.gamma_rad_vac_plus,
            self.gamma_rad_vac_minus,
            z(self.zeta_evan),
            z(self.zeta_rad),
            z(self.zeta_total),
        ]
    }
}

pub fn rate_report(cfg: &InterfaceConfig, u: &DipolePolarization, x_nm: f64, spec: &QuadratureSpec) -> Result<RateReport> {
    let kx = prepare(cfg, x_nm, spec)?;
    let ux2 = u.ux_sqr();
    let ge = gamma_evan(cfg, u, x_nm, spec)?;
    let interference = radiation_interference(cfg, ux2, kx, spec)?;
    let gr = 1.0 + interference;
    let d = DeltaRates {
        evan: delta_evan(cfg, u, kx, spec)?,
        rad: delta_rad(cfg, u, kx, spec)?,
        total: 0.0,
    };
    let d = DeltaRates {
        total: d.evan + d.rad,
        ..d
    };
    let sides = compose_sides(ge, gr, &d);

    let power = reflected_power(cfg, ux2, spec)?;
    let gamma_mat = 0.5 - power;
    let gamma_vac = 0.5 + power + interference;
    let d_mat = delta_mat(cfg, u, spec)?;
    let d_vac = -d_mat + d.rad;
    let (mat_plus, mat_minus) = split_sides(gamma_mat, d_mat);
    let (vac_plus, vac_minus) = split_sides(gamma_vac, d_vac);

    Ok(RateReport {
        x_nm,
        gamma_evan: ge,
        gamma_rad: gr,
        gamma_total: ge + gr,
        delta_evan: d.evan,
        delta_rad: d.rad,
        delta_total: d.total,
        gamma_evan_plus: sides.evan_plus,
        gamma_evan_minus: sides.evan_minus,
        gamma_rad_plus: sides.rad_plus,
        gamma_rad_minus: sides.rad_minus,
        gamma_plus: sides.plus,
        gamma_minus: sides.minus,
        gamma_rad_mat: gamma_mat,
        gamma_rad_vac: gamma_vac,
        delta_rad_mat: d_mat,
        delta_rad_vac: d_vac,
        gamma_rad_mat_plus: mat_plus,
        gamma_rad_mat_minus: mat_minus,
        gamma_rad_vac_plus: vac_plus,
        gamma_rad_vac_minus: vac_minus,
        zeta_evan: zeta(d.evan, ge),
        zeta_rad: zeta(d.rad, gr),
        zeta_total: zeta(d.total, ge + gr),
    })
}

/// Range of azimuths for [`oracle_integrate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiRange {
    /// `[0, 2π]`
    Full,
    /// `[0, π]`, in-plane wave vectors with `K_z > 0`.
    Plus,
    /// `[π, 2π]`
    Minus,
}

impl PhiRange {
    fn bounds(self) -> (f64, f64) {
        match self {
            PhiRange::Full => (0.0, TAU),
            PhiRange::Plus => (0.0, PI),
            PhiRange::Minus => (PI, TAU),
        }
    }
}

/// `∫ξ dξ ∫dφ F_channel` by nested quadrature of the angular densities.
pub fn oracle_integrate(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    x_nm: f64,
    channel: Channel,
    phi_range: PhiRange,
    spec: &QuadratureSpec,
) -> Result<f64> {
    let kx = prepare(cfg, x_nm, spec)?;
    let (lo, hi) = phi_range.bounds();
    let phi_panels = if phi_range == PhiRange::Full { 4 } else { 2 };
    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let inner = |xi: f64| -> f64 {
        if failure.borrow().is_some() {
            return 0.0;
        }
        let density = |phi: f64| match channel_density(cfg, u, xi, phi, x_nm, channel) {
            Ok(v) => v,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        };
        match integrate(density, lo, hi, phi_panels, spec) {
            Ok(est) => xi * est.value,
            Err(e) => {
                failure.borrow_mut().get_or_insert(e);
                0.0
            }
        }
    };
    let value = match channel.branch() {
        Branch::Evanescent => evanescent_integral(cfg, spec, inner),
        Branch::Radiation => radiation_integral(kx, spec, inner),
    };
    if let Some(e) = failure.into_inner() {
        return Err(e);
    }
    value
}

#[cfg(test)]
mod tests {
    use super::*;

    fn silica() -> InterfaceConfig {
        InterfaceConfig::silica_cs_d2()
    }

    fn spec() -> QuadratureSpec {
        QuadratureSpec::default()
    }

    #[test]
    fn peak_enhancement_for_normal_dipole() {
        let g = gamma_total(&silica(), &DipolePolarization::x(), 0.0, &spec()).unwrap();
        assert!((g - 2.18).abs() < 0.02, "{g}");
    }

    #[test]
    fn axis_formulas_match_general_kernel() {
        let cfg = silica();
        for &x in &[0.0, 75.0, 600.0] {
            let perp = gamma_evan(&cfg, &DipolePolarization::x(), x, &spec()).unwrap();
            let par = gamma_evan(&cfg, &DipolePolarization::y(), x, &spec()).unwrap();
            assert!((perp - gamma_evan_axis(&cfg, DipoleAxis::Perpendicular, x, &spec()).unwrap()).abs() < 1e-10 * perp);
            assert!((par - gamma_evan_axis(&cfg, DipoleAxis::Parallel, x, &spec()).unwrap()).abs() < 1e-10 * par);
            let perp = gamma_rad(&cfg, &DipolePolarization::x(), x, &spec()).unwrap();
            let par = gamma_rad(&cfg, &DipolePolarization::z(), x, &spec()).unwrap();
            assert!((perp - gamma_rad_axis(&cfg, DipoleAxis::Perpendicular, x, &spec()).unwrap()).abs() < 1e-10);
            assert!((par - gamma_rad_axis(&cfg, DipoleAxis::Parallel, x, &spec()).unwrap()).abs() < 1e-10);
        }
    }

    #[test]
    fn near_vacuum_index() {
        let cfg = InterfaceConfig::new(1.0 + 1e-12, 852.0).unwrap();
        let u = DipolePolarization::theta_xz();
        // The evanescent range shrinks like √(n1²-1) ≈ 1.4e-6.
        assert!(gamma_evan(&cfg, &u, 10.0, &spec()).unwrap().abs() < 1e-5);
        assert!((gamma_rad(&cfg, &u, 10.0, &spec()).unwrap() - 1.0).abs() < 1e-5);
    }

    #[test]
    fn real_dipole_has_no_differences() {
        let u = DipolePolarization::theta_xz();
        let d = delta_rates(&silica(), &u, 120.0, &spec()).unwrap();
        assert_eq!((d.evan, d.rad, d.total), (0.0, 0.0, 0.0));
        let z = asymmetry(&silica(), &u, 120.0, &spec()).unwrap();
        assert_eq!((z.evan, z.rad, z.total), (Some(0.0), Some(0.0), Some(0.0)));
    }

    #[test]
    fn circular_dipole_directionality_at_surface() {
        let cfg = silica();
        let u = DipolePolarization::eps_xz();
        let s = side_rates(&cfg, &u, 0.0, &spec()).unwrap();
        assert!(s.evan_plus > s.evan_minus);
        assert_eq!(s.rad_plus, s.rad_minus);
        let z = asymmetry(&cfg, &u, 0.0, &spec()).unwrap();
        assert_eq!(z.rad, Some(0.0));
        assert!(z.evan.unwrap() > z.total.unwrap() && z.total.unwrap() > 0.0);
    }

    #[test]
    fn material_rate_for_half_normal_dipole() {
        let cfg = silica();
        let a = gamma_mat_vac(&cfg, &DipolePolarization::eps_xz(), 0.0, &spec()).unwrap();
        let b = gamma_mat_vac(&cfg, &DipolePolarization::theta_xz(), 500.0, &spec()).unwrap();
        assert!((a.gamma_mat - 0.40).abs() < 0.01, "{}", a.gamma_mat);
        assert_eq!(a.gamma_mat, b.gamma_mat);
        assert_eq!(a.delta_mat, 0.0);
        assert_eq!(a.mat_plus, a.mat_minus);
        assert!(b.delta_mat > 0.0);
    }

    #[test]
    fn report_composition() {
        let cfg = silica();
        let u = DipolePolarization::from_parts([0.4, 0.1, -0.2, 0.5, 0.3, -0.6]).unwrap();
        let r = rate_report(&cfg, &u, 140.0, &spec()).unwrap();
        assert!((r.gamma_plus + r.gamma_minus - r.gamma_total).abs() < 1e-12);
        assert!((r.gamma_plus - r.gamma_minus - r.delta_total).abs() < 1e-12);
        assert!((r.gamma_rad_mat + r.gamma_rad_vac - r.gamma_rad).abs() < 1e-12);
        assert!((r.delta_rad_mat + r.delta_rad_vac - r.delta_rad).abs() < 1e-12);
        let direct = gamma_total(&cfg, &u, 140.0, &spec()).unwrap();
        assert!((direct - r.gamma_total).abs() < 1e-12);
        assert_eq!(r.values().len(), RateReport::COLUMNS.len());
    }

    #[test]
    fn undefined_zeta() {
        assert_eq!(zeta(1e-20, 1e-13), None);
        assert_eq!(zeta(0.5, 1.0), Some(0.5));
    }

    #[test]
    fn oracle_matches_closed_form() {
        let cfg = silica();
        let u = DipolePolarization::eps_xz();
        let x = 90.0;
        let ge = gamma_evan(&cfg, &u, x, &spec()).unwrap();
        let oe = oracle_integrate(&cfg, &u, x, Channel::Evan, PhiRange::Full, &spec()).unwrap();
        assert!((ge - oe).abs() < 1e-8 * ge, "{ge} {oe}");
        let d = delta_rates(&cfg, &u, x, &spec()).unwrap();
        let plus = oracle_integrate(&cfg, &u, x, Channel::Rad, PhiRange::Plus, &spec()).unwrap();
        let minus = oracle_integrate(&cfg, &u, x, Channel::Rad, PhiRange::Minus, &spec()).unwrap();
        assert!((plus - minus - d.rad).abs() < 1e-8 * d.rad.abs(), "{} {}", plus - minus, d.rad);
    }

    #[test]
    fn negative_distance_rejected() {
        let e = gamma_total(&silica(), &DipolePolarization::x(), -1.0, &spec()).unwrap_err();
        assert!(matches!(e, Error::Domain { param: "x_nm", .. }));
    }
}
