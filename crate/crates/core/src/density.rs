//! Angular densities of the emission rate in wave-vector space.
//!
//! Every density is in units of `γ0` per `ξ dξ dφ`, so a channel rate is
//! `∫ ξ dξ ∫ dφ F`. Dipole dependence enters through three angular terms,
//! with `K̂ = (0, cos φ, sin φ)`:
//!
//! ```text
//! A_s = |u_y|² sin²φ + |u_z|² cos²φ − Re(u_y* u_z) sin 2φ     (TE weight)
//! L   = |u_y|² cos²φ + |u_z|² sin²φ + Re(u_y* u_z) sin 2φ     (|u·K̂|²)
//! C   = u_x* u_y cos φ + u_x* u_z sin φ                         (u_x* (u·K̂))
//! ```

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optics::{
    check_distance, fresnel_unchecked, mode_function_p, spin_density, transmittance_unchecked,
    Branch, InputSide, InterfaceConfig, ModePoint, ModePolarization, ENDPOINT_CLAMP,
};
use crate::vectens::ComplexVector3;

/// Below this `ξ` the radiation kernels switch to their `ξ → 0` limits.
pub const RADIATION_SERIES_XI: f64 = 1e-8;

/// Input norms further than this from 1 trigger a normalization warning.
pub const NORMALIZATION_NOTICE: f64 = 1e-9;

/// Unit polarization vector `u` of the transition dipole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DipolePolarization {
    u: ComplexVector3,
    input_norm: f64,
}

impl DipolePolarization {
    /// Normalizes `v`; zero or non-finite vectors are rejected.
    pub fn new(v: ComplexVector3) -> Result<Self> {
        if !v.is_finite() {
            return Err(Error::invalid("dipole", "components must be finite"));
        }
        let norm = v.norm();
        if norm == 0.0 {
            return Err(Error::invalid("dipole", "dipole must be nonzero"));
        }
        if (norm - 1.0).abs() > NORMALIZATION_NOTICE {
            log::warn!("dipole vector has norm {norm}; normalizing to unit length");
        }
        Ok(Self {
            u: v * (1.0 / norm),
            input_norm: norm,
        })
    }

    /// Six reals `re_x, im_x, re_y, im_y, re_z, im_z`.
    pub fn from_parts(p: [f64; 6]) -> Result<Self> {
        Self::new(ComplexVector3::from_parts(p))
    }

    pub fn x() -> Self {
        Self::unit([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    }

    pub fn y() -> Self {
        Self::unit([0.0, 0.0, 1.0, 0.0, 0.0, 0.0])
    }

    pub fn z() -> Self {
        Self::unit([0.0, 0.0, 0.0, 0.0, 1.0, 0.0])
    }

    /// Linear `(x̂ + ẑ)/√2`.
    pub fn theta_xz() -> Self {
        Self::unit([1.0, 0.0, 0.0, 0.0, 1.0, 0.0])
    }

    /// Circular `(x̂ + iẑ)/√2`.
    pub fn eps_xz() -> Self {
        Self::unit([1.0, 0.0, 0.0, 0.0, 0.0, 1.0])
    }

    /// Presets are normalized exactly as user input would be, so an explicit
    /// `1,0,0,0,0,1` reproduces `eps_xz` bit for bit.
    fn unit(p: [f64; 6]) -> Self {
        let v = ComplexVector3::from_parts(p);
        Self {
            u: v * (1.0 / v.norm()),
            input_norm: 1.0,
        }
    }

    pub fn u(&self) -> &ComplexVector3 {
        &self.u
    }

    /// Norm of the vector passed to [`new`](Self::new).
    pub fn input_norm(&self) -> f64 {
        self.input_norm
    }

    pub fn was_renormalized(&self) -> bool {
        (self.input_norm - 1.0).abs() > NORMALIZATION_NOTICE
    }

    /// `i[u*×u]`
    pub fn ellipticity(&self) -> [f64; 3] {
        self.u.ellipticity()
    }

    pub fn ux_sqr(&self) -> f64 {
        self.u.x.norm_sqr()
    }

    /// `u_x* u_z`
    pub fn xz_product(&self) -> Complex64 {
        self.u.x.conj() * self.u.z
    }

    pub fn conj(&self) -> Self {
        Self {
            u: self.u.conj(),
            input_norm: self.input_norm,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Angular {
    ux2: f64,
    a_s: f64,
    l: f64,
    c: Complex64,
}

impl Angular {
    pub(crate) fn new(u: &DipolePolarization, phi: f64) -> Self {
        let u = u.u;
        let (s, c) = phi.sin_cos();
        let (uy2, uz2) = (u.y.norm_sqr(), u.z.norm_sqr());
        let re_yz = (u.y.conj() * u.z).re;
        let sin2 = 2.0 * s * c;
        Angular {
            ux2: u.x.norm_sqr(),
            a_s: uy2 * s * s + uz2 * c * c - re_yz * sin2,
            l: uy2 * c * c + uz2 * s * s + re_yz * sin2,
            c: u.x.conj() * (u.y * c + u.z * s),
        }
    }
}

/// TE and TM evanescent densities and their sum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EvanescentDensity {
    pub s: f64,
    pub p: f64,
    pub total: f64,
}

/// Radiation densities per polarization and input side (`1` dielectric,
/// `2` vacuum), aggregated per polarization, and split by output side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiationDensity {
    pub s1: f64,
    pub s2: f64,
    pub p1: f64,
    pub p2: f64,
    pub s: f64,
    pub p: f64,
    pub total: f64,
    pub mat: f64,
    pub vac: f64,
}

fn a_evan(cfg: &InterfaceConfig) -> f64 {
    cfg.xi_max_evanescent()
}

fn limit_s(cfg: &InterfaceConfig, ang: &Angular) -> f64 {
    3.0 * ang.a_s / (2.0 * PI * a_evan(cfg))
}

fn limit_p(cfg: &InterfaceConfig, ang: &Angular) -> f64 {
    3.0 * cfg.n1() * cfg.n1() * ang.ux2 / (2.0 * PI * a_evan(cfg))
}

pub fn f_evan(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    xi: f64,
    phi: f64,
    x_nm: f64,
) -> Result<EvanescentDensity> {
    let xi = cfg.check_xi(Branch::Evanescent, xi)?;
    check_distance(x_nm)?;
    let ang = Angular::new(u, phi);
    Ok(f_evan_unchecked(cfg, &ang, xi, cfg.kx(x_nm)))
}

pub(crate) fn f_evan_unchecked(cfg: &InterfaceConfig, ang: &Angular, xi: f64, kx: f64) -> EvanescentDensity {
    if xi == 0.0 {
        let (s, p) = (limit_s(cfg, ang), limit_p(cfg, ang));
        return EvanescentDensity { s, p, total: s + p };
    }
    let t = transmittance_unchecked(cfg, xi);
    let pre = 3.0 / (4.0 * PI * xi) * (-2.0 * xi * kx).exp();
    let xi2 = xi * xi;
    let s = pre * t.t_s * ang.a_s;
    let p = pre
        * t.t_p
        * (ang.ux2 * (1.0 + xi2) + xi2 * ang.l + 2.0 * xi * (1.0 + xi2).sqrt() * ang.c.im);
    EvanescentDensity { s, p, total: s + p }
}

/// Common value of the evanescent and radiation densities at `κ = 1`.
pub fn f_evan_limit_kappa1(cfg: &InterfaceConfig, u: &DipolePolarization, phi: f64) -> f64 {
    let ang = Angular::new(u, phi);
    limit_s(cfg, &ang) + limit_p(cfg, &ang)
}

/// `κ → 1` limit approached from the radiation branch (`ξ → 0⁺`), built
/// from the per-input limits.
pub fn f_rad_limit_kappa1(cfg: &InterfaceConfig, u: &DipolePolarization, phi: f64) -> f64 {
    radiation_limit(cfg, &Angular::new(u, phi)).total
}

fn radiation_limit(cfg: &InterfaceConfig, ang: &Angular) -> RadiationDensity {
    let (s1, p1) = (limit_s(cfg, ang), limit_p(cfg, ang));
    RadiationDensity {
        s1,
        s2: 0.0,
        p1,
        p2: 0.0,
        s: s1,
        p: p1,
        total: s1 + p1,
        mat: s1 + p1,
        vac: 0.0,
    }
}

pub fn f_rad(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    xi: f64,
    phi: f64,
    x_nm: f64,
) -> Result<RadiationDensity> {
    let xi = cfg.check_xi(Branch::Radiation, xi)?;
    check_distance(x_nm)?;
    let ang = Angular::new(u, phi);
    Ok(f_rad_unchecked(cfg, &ang, xi, cfg.kx(x_nm)))
}

pub(crate) fn f_rad_unchecked(cfg: &InterfaceConfig, ang: &Angular, xi: f64, kx: f64) -> RadiationDensity {
    if xi < RADIATION_SERIES_XI {
        return radiation_limit(cfg, ang);
    }
    let r = fresnel_unchecked(cfg, xi);
    let (r_s, r_p) = (r.r_s, r.r_p);
    let xi2 = xi * xi;
    let root = (1.0 - xi2).max(0.0).sqrt();
    let (sin2, cos2) = (2.0 * xi * kx).sin_cos();
    let half = 3.0 / (8.0 * PI * xi);
    let full = 3.0 / (4.0 * PI * xi);

    let bracket = ang.ux2 * (1.0 - xi2) + xi2 * ang.l;
    let anti = ang.ux2 * (1.0 - xi2) - xi2 * ang.l;
    let re_term = 2.0 * (1.0 - r_p * r_p) * xi * root * ang.c.re;
    let reflected = full * r_p * (cos2 * anti + 2.0 * xi * root * sin2 * ang.c.im);

    let s1 = half * (1.0 - r_s * r_s) * ang.a_s;
    let s2 = half * (1.0 + r_s * r_s + 2.0 * r_s * cos2) * ang.a_s;
    let p1 = half * ((1.0 - r_p * r_p) * bracket - re_term);
    let p2 = half * ((1.0 + r_p * r_p) * bracket + re_term) + reflected;

    let s = full * (1.0 + r_s * cos2) * ang.a_s;
    let p = full * bracket + reflected;

    let mat = s1 + half * ((1.0 - r_p * r_p) * bracket + re_term);
    let vac = s2 + half * ((1.0 + r_p * r_p) * bracket - re_term) + reflected;

    RadiationDensity {
        s1,
        s2,
        p1,
        p2,
        s,
        p,
        total: s + p,
        mat,
        vac,
    }
}

/// Channel selector for central-inversion differences and oracle integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Channel {
    Evan,
    Rad,
    Mat,
    Vac,
}

impl Channel {
    pub fn branch(self) -> Branch {
        match self {
            Channel::Evan => Branch::Evanescent,
            _ => Branch::Radiation,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Channel::Evan => "evan",
            Channel::Rad => "rad",
            Channel::Mat => "mat",
            Channel::Vac => "vac",
        }
    }
}

/// Density of the given channel at one mode point.
pub fn channel_density(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    xi: f64,
    phi: f64,
    x_nm: f64,
    channel: Channel,
) -> Result<f64> {
    Ok(match channel {
        Channel::Evan => f_evan(cfg, u, xi, phi, x_nm)?.total,
        Channel::Rad => f_rad(cfg, u, xi, phi, x_nm)?.total,
        Channel::Mat => f_rad(cfg, u, xi, phi, x_nm)?.mat,
        Channel::Vac => f_rad(cfg, u, xi, phi, x_nm)?.vac,
    })
}

/// Closed-form `F(ξ, φ) − F(ξ, φ + π)` for a channel.
pub fn delta_f(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    xi: f64,
    phi: f64,
    x_nm: f64,
    channel: Channel,
) -> Result<f64> {
    let xi = cfg.check_xi(channel.branch(), xi)?;
    check_distance(x_nm)?;
    let ang = Angular::new(u, phi);
    let kx = cfg.kx(x_nm);
    Ok(match channel {
        Channel::Evan => delta_evan(cfg, &ang, xi, kx),
        Channel::Rad => delta_rad(cfg, &ang, xi, kx),
        Channel::Mat => delta_mat(cfg, &ang, xi),
        Channel::Vac => delta_rad(cfg, &ang, xi, kx) - delta_mat(cfg, &ang, xi),
    })
}

fn delta_evan(cfg: &InterfaceConfig, ang: &Angular, xi: f64, kx: f64) -> f64 {
    let t_p = transmittance_unchecked(cfg, xi).t_p;
    3.0 / PI * (1.0 + xi * xi).sqrt() * t_p * (-2.0 * xi * kx).exp() * ang.c.im
}

fn delta_rad(cfg: &InterfaceConfig, ang: &Angular, xi: f64, kx: f64) -> f64 {
    let r_p = fresnel_unchecked(cfg, xi).r_p;
    3.0 / PI * (1.0 - xi * xi).max(0.0).sqrt() * r_p * (2.0 * xi * kx).sin() * ang.c.im
}

fn delta_mat(cfg: &InterfaceConfig, ang: &Angular, xi: f64) -> f64 {
    if xi < RADIATION_SERIES_XI {
        return 0.0;
    }
    let r_p = fresnel_unchecked(cfg, xi).r_p;
    3.0 / (2.0 * PI) * (1.0 - xi * xi).max(0.0).sqrt() * (1.0 - r_p * r_p) * ang.c.re
}

/// `ΔF` evaluated three independent ways.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaForms {
    pub closed_form: f64,
    pub cross_product: f64,
    pub spin: f64,
}

impl DeltaForms {
    pub fn max_deviation(&self) -> f64 {
        let v = [self.closed_form, self.cross_product, self.spin];
        let spread = v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min);
        spread
    }
}

/// `ΔF_evan` or `ΔF_rad` as a closed form, as the overlap
/// `[u*×u]·[U*×U]` of dipole and mode-function ellipticities, and as the
/// coupling `i[u*×u]·S` to the local spin density.
pub fn delta_f_equivalences(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    xi: f64,
    phi: f64,
    x_nm: f64,
    branch: Branch,
) -> Result<DeltaForms> {
    let xi = cfg.check_xi(branch, xi)?;
    check_distance(x_nm)?;
    let ang = Angular::new(u, phi);
    let kx = cfg.kx(x_nm);
    let dipole_cross = u.u().conj().cross(u.u());
    let dipole_ell = u.ellipticity();

    match branch {
        Branch::Evanescent => {
            let point = ModePoint::evanescent(cfg, xi, phi, ModePolarization::P)?;
            let eta = (cfg.n1() * cfg.n1() - 1.0 - xi * xi).max(0.0).sqrt();
            let closed_form = delta_evan(cfg, &ang, xi, kx);
            if eta <= ENDPOINT_CLAMP {
                // Both overlap forms are 0/0 at the upper endpoint, where T_p = 0.
                return Ok(DeltaForms {
                    closed_form,
                    cross_product: 0.0,
                    spin: 0.0,
                });
            }
            let m = mode_function_p(cfg, &point, x_nm)?;
            let overlap = dipole_cross.dot(&m.conj().cross(&m)).re;
            let s = spin_density(cfg, &point, x_nm)?;
            Ok(DeltaForms {
                closed_form,
                cross_product: 3.0 / (8.0 * PI * eta) * overlap,
                spin: 3.0 / (2.0 * PI * eta) * s.dot(&dipole_ell),
            })
        }
        Branch::Radiation => {
            let closed_form = delta_rad(cfg, &ang, xi, kx);
            if xi < RADIATION_SERIES_XI {
                return Ok(DeltaForms {
                    closed_form,
                    cross_product: 0.0,
                    spin: 0.0,
                });
            }
            let point = ModePoint::radiation(cfg, xi, phi, ModePolarization::P, InputSide::Vacuum)?;
            let m = mode_function_p(cfg, &point, x_nm)?;
            let overlap = dipole_cross.dot(&m.conj().cross(&m)).re;
            let s = spin_density(cfg, &point, x_nm)?;
            Ok(DeltaForms {
                closed_form,
                cross_product: 3.0 / (8.0 * PI * xi) * overlap,
                spin: 3.0 / (2.0 * PI * xi) * s.dot(&dipole_ell),
            })
        }
    }
}

/// Central-inversion asymmetry `ΔF / (F(φ) + F(φ+π))` of the evanescent or
/// full radiation density; `None` when the sum vanishes.
pub fn density_asymmetry(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    xi: f64,
    phi: f64,
    x_nm: f64,
    branch: Branch,
) -> Result<Option<f64>> {
    let channel = match branch {
        Branch::Evanescent => Channel::Evan,
        Branch::Radiation => Channel::Rad,
    };
    let fwd = channel_density(cfg, u, xi, phi, x_nm, channel)?;
    let back = channel_density(cfg, u, xi, phi + PI, x_nm, channel)?;
    let sum = fwd + back;
    if sum.abs() < 1e-300 {
        return Ok(None);
    }
    Ok(Some(delta_f(cfg, u, xi, phi, x_nm, channel)? / sum))
}

/// Angular zones of the far-field pattern, with `θ` measured from the `+x`
/// axis (vacuum side).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternZone {
    /// Forbidden zone in the dielectric, `[π/2, π − θc]`.
    EvanForbidden,
    /// Allowed zone in the dielectric, `[π − θc, π]`.
    RadMaterial,
    /// Vacuum half-space, `[0, π/2]`.
    RadVacuum,
}

impl PatternZone {
    pub fn range(self, cfg: &InterfaceConfig) -> (f64, f64) {
        let edge = PI - cfg.critical_angle();
        match self {
            PatternZone::EvanForbidden => (PI / 2.0, edge),
            PatternZone::RadMaterial => (edge, PI),
            PatternZone::RadVacuum => (0.0, PI / 2.0),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PatternZone::EvanForbidden => "evan_forbidden",
            PatternZone::RadMaterial => "rad_material",
            PatternZone::RadVacuum => "rad_vacuum",
        }
    }

    /// Zone containing `θ ∈ [0, π]`; shared edges go to the dielectric
    /// allowed zone and to the vacuum.
    pub fn containing(cfg: &InterfaceConfig, theta: f64) -> Option<Self> {
        [PatternZone::RadVacuum, PatternZone::RadMaterial, PatternZone::EvanForbidden]
            .into_iter()
            .find(|z| {
                let (lo, hi) = z.range(cfg);
                theta >= lo && theta <= hi
            })
    }
}

/// Far-field angular distribution in direction `(θ, φ)`.
pub fn pattern(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    theta: f64,
    phi: f64,
    x_nm: f64,
    zone: PatternZone,
) -> Result<f64> {
    check_distance(x_nm)?;
    let (lo, hi) = zone.range(cfg);
    if !(theta.is_finite() && theta >= lo - ENDPOINT_CLAMP && theta <= hi + ENDPOINT_CLAMP) {
        return Err(Error::Domain {
            param: "theta",
            value: theta,
            min: lo,
            max: hi,
        });
    }
    let theta = theta.clamp(lo, hi);
    let n1 = cfg.n1();
    let (sin, cos) = theta.sin_cos();
    let ang = Angular::new(u, phi);
    let kx = cfg.kx(x_nm);
    Ok(match zone {
        PatternZone::EvanForbidden => {
            let xi = (n1 * n1 * sin * sin - 1.0).max(0.0).sqrt().min(cfg.xi_max_evanescent());
            -n1 * n1 * cos * f_evan_unchecked(cfg, &ang, xi, kx).total
        }
        PatternZone::RadMaterial => {
            let xi = (1.0 - n1 * n1 * sin * sin).max(0.0).sqrt().min(1.0);
            -n1 * n1 * cos * f_rad_unchecked(cfg, &ang, xi, kx).mat
        }
        PatternZone::RadVacuum => {
            let xi = cos.clamp(0.0, 1.0);
            cos * f_rad_unchecked(cfg, &ang, xi, kx).vac
        }
    })
}

/// Region of a `(κ_y, κ_z)` grid point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridRegion {
    OutOfDomain,
    Boundary,
    Evanescent,
    Radiation,
}

impl GridRegion {
    /// Numeric code used in tables.
    pub fn code(self) -> f64 {
        match self {
            GridRegion::OutOfDomain => -1.0,
            GridRegion::Boundary => 0.0,
            GridRegion::Evanescent => 1.0,
            GridRegion::Radiation => 2.0,
        }
    }
}

/// Grid points with `|κ − 1|` below this use the `κ = 1` limit formulas.
pub const KAPPA_SNAP: f64 = 1e-9;

/// Every density channel at one in-plane wave vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityBreakdown {
    pub region: GridRegion,
    pub xi: f64,
    pub phi: f64,
    pub evanescent: Option<EvanescentDensity>,
    pub radiation: Option<RadiationDensity>,
}

/// Maps `(κ_y, κ_z)` to `(ξ, φ)` and evaluates the applicable branch. At
/// `κ = 1` both branches are filled from their shared limit.
pub fn density_at_kappa(
    cfg: &InterfaceConfig,
    u: &DipolePolarization,
    kappa_y: f64,
    kappa_z: f64,
    x_nm: f64,
) -> Result<DensityBreakdown> {
    check_distance(x_nm)?;
    if !(kappa_y.is_finite() && kappa_z.is_finite()) {
        return Err(Error::invalid("kappa", "grid coordinates must be finite"));
    }
    let kappa = kappa_y.hypot(kappa_z);
    let phi = crate::optics::wrap_angle(kappa_z.atan2(kappa_y));
    let ang = Angular::new(u, phi);
    let kx = cfg.kx(x_nm);
    let n1 = cfg.n1();
    let mut out = DensityBreakdown {
        region: GridRegion::OutOfDomain,
        xi: f64::NAN,
        phi,
        evanescent: None,
        radiation: None,
    };
    if (kappa - 1.0).abs() < KAPPA_SNAP {
        out.region = GridRegion::Boundary;
        out.xi = 0.0;
        out.evanescent = Some(f_evan_unchecked(cfg, &ang, 0.0, kx));
        out.radiation = Some(radiation_limit(cfg, &ang));
    } else if kappa < 1.0 {
        let xi = (1.0 - kappa * kappa).sqrt();
        out.region = GridRegion::Radiation;
        out.xi = xi;
        out.radiation = Some(f_rad_unchecked(cfg, &ang, xi, kx));
    } else if kappa <= n1 + ENDPOINT_CLAMP {
        let xi = (kappa * kappa - 1.0).sqrt().min(cfg.xi_max_evanescent());
        out.region = GridRegion::Evanescent;
        out.xi = xi;
        out.evanescent = Some(f_evan_unchecked(cfg, &ang, xi, kx));
    }
    Ok(out)
}
