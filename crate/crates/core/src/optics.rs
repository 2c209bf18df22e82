//! Interface geometry and the Fresnel layer.
//!
//! The dielectric (index `n1`) fills `x < 0` and vacuum fills `x > 0`. Modes are
//! labelled by the normalized out-of-plane wave-vector magnitude `ξ` on the
//! vacuum side and the azimuth `φ` of the in-plane wave vector, measured from
//! the `y` axis. Evanescent modes have `κ = √(1+ξ²) ∈ [1, n1]`, radiation modes
//! `κ = √(1-ξ²) ∈ [0, 1]`.
//!
//! Distances enter every formula only through `k0·x`, so the public API takes
//! `x` in nanometres and converts immediately.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::vectens::ComplexVector3;

/// Inputs within this distance beyond a branch endpoint are clamped onto it.
pub const ENDPOINT_CLAMP: f64 = 1e-12;

/// A single flat interface between a lossless dielectric and vacuum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InterfaceConfig {
    n1: f64,
    lambda0_nm: f64,
}

impl InterfaceConfig {
    pub fn new(n1: f64, lambda0_nm: f64) -> Result<Self> {
        if !(n1.is_finite() && n1 > 1.0) {
            return Err(Error::invalid("n1", format!("refractive index must exceed 1, got {n1}")));
        }
        if !(lambda0_nm.is_finite() && lambda0_nm > 0.0) {
            return Err(Error::invalid(
                "lambda0",
                format!("wavelength must be positive, got {lambda0_nm}"),
            ));
        }
        Ok(Self { n1, lambda0_nm })
    }

    /// Silica at the cesium D2 line: `n1 = 1.45`, `λ0 = 852 nm`.
    pub fn silica_cs_d2() -> Self {
        Self {
            n1: 1.45,
            lambda0_nm: 852.0,
        }
    }

    pub fn n1(&self) -> f64 {
        self.n1
    }

    pub fn lambda0_nm(&self) -> f64 {
        self.lambda0_nm
    }

    /// Vacuum wave number in nm⁻¹.
    pub fn k0(&self) -> f64 {
        TAU / self.lambda0_nm
    }

    /// `k0·x` for a distance in nanometres.
    pub fn kx(&self, x_nm: f64) -> f64 {
        self.k0() * x_nm
    }

    /// Upper end `√(n1²-1)` of the evanescent branch.
    pub fn xi_max_evanescent(&self) -> f64 {
        (self.n1 * self.n1 - 1.0).sqrt()
    }

    /// Critical angle `arcsin(1/n1)`.
    pub fn critical_angle(&self) -> f64 {
        (1.0 / self.n1).asin()
    }

    pub(crate) fn check_xi(&self, branch: Branch, xi: f64) -> Result<f64> {
        let max = match branch {
            Branch::Evanescent => self.xi_max_evanescent(),
            Branch::Radiation => 1.0,
        };
        if !(xi.is_finite() && xi >= 0.0 && xi <= max + ENDPOINT_CLAMP) {
            return Err(Error::Domain {
                param: "xi",
                value: xi,
                min: 0.0,
                max,
            });
        }
        Ok(xi.min(max))
    }
}

pub(crate) fn check_distance(x_nm: f64) -> Result<()> {
    if x_nm.is_finite() && x_nm >= 0.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            param: "x_nm",
            value: x_nm,
            min: 0.0,
            max: f64::INFINITY,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    Evanescent,
    Radiation,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModePolarization {
    /// TE
    S,
    /// TM
    P,
}

impl ModePolarization {
    fn name(self) -> &'static str {
        match self {
            ModePolarization::S => "s",
            ModePolarization::P => "p",
        }
    }
}

/// Medium from which the mode's single input arrives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputSide {
    Dielectric,
    Vacuum,
}

/// One field mode at the transition frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModePoint {
    branch: Branch,
    xi: f64,
    phi: f64,
    q: ModePolarization,
    side: InputSide,
}

impl ModePoint {
    /// Evanescent mode (input always from the dielectric).
    pub fn evanescent(cfg: &InterfaceConfig, xi: f64, phi: f64, q: ModePolarization) -> Result<Self> {
        let xi = cfg.check_xi(Branch::Evanescent, xi)?;
        Ok(Self {
            branch: Branch::Evanescent,
            xi,
            phi: wrap_angle(phi),
            q,
            side: InputSide::Dielectric,
        })
    }

    pub fn radiation(
        cfg: &InterfaceConfig,
        xi: f64,
        phi: f64,
        q: ModePolarization,
        side: InputSide,
    ) -> Result<Self> {
        let xi = cfg.check_xi(Branch::Radiation, xi)?;
        Ok(Self {
            branch: Branch::Radiation,
            xi,
            phi: wrap_angle(phi),
            q,
            side,
        })
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn polarization(&self) -> ModePolarization {
        self.q
    }

    pub fn side(&self) -> InputSide {
        self.side
    }

    /// Normalized in-plane wave number `κ = K/k0`.
    pub fn kappa(&self) -> f64 {
        match self.branch {
            Branch::Evanescent => (1.0 + self.xi * self.xi).sqrt(),
            Branch::Radiation => (1.0 - self.xi * self.xi).max(0.0).sqrt(),
        }
    }

    /// Unit in-plane direction `K̂ = (0, cos φ, sin φ)`.
    pub fn k_hat(&self) -> [f64; 3] {
        [0.0, self.phi.cos(), self.phi.sin()]
    }

    /// The same mode with the in-plane wave vector reversed.
    pub fn reversed(&self) -> Self {
        Self {
            phi: wrap_angle(self.phi + PI),
            ..*self
        }
    }
}

/// Maps an angle onto `[0, 2π)`.
pub fn wrap_angle(phi: f64) -> f64 {
    let w = phi.rem_euclid(TAU);
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// `[K̂ × x̂] = (0, sin φ, -cos φ)`.
pub fn transverse_axis(phi: f64) -> [f64; 3] {
    [0.0, phi.sin(), -phi.cos()]
}

/// Reflection coefficients for light incident from vacuum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reflection {
    pub r_s: f64,
    pub r_p: f64,
}

/// `η = √(n1²-1+ξ²)` on the radiation branch.
fn eta_radiation(cfg: &InterfaceConfig, xi: f64) -> f64 {
    (cfg.n1 * cfg.n1 - 1.0 + xi * xi).sqrt()
}

/// `η = √(n1²-1-ξ²)` on the evanescent branch, clamped at the endpoint.
fn eta_evanescent(cfg: &InterfaceConfig, xi: f64) -> f64 {
    (cfg.n1 * cfg.n1 - 1.0 - xi * xi).max(0.0).sqrt()
}

/// Radiation-branch reflection coefficients `r_s`, `r_p`.
pub fn fresnel(cfg: &InterfaceConfig, xi: f64) -> Result<Reflection> {
    let xi = cfg.check_xi(Branch::Radiation, xi)?;
    Ok(fresnel_unchecked(cfg, xi))
}

pub(crate) fn fresnel_unchecked(cfg: &InterfaceConfig, xi: f64) -> Reflection {
    let eta = eta_radiation(cfg, xi);
    let n2 = cfg.n1 * cfg.n1;
    Reflection {
        r_s: (xi - eta) / (xi + eta),
        r_p: (n2 * xi - eta) / (n2 * xi + eta),
    }
}

/// Transmittance parameters `T_s`, `T_p` of the evanescent branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Transmittance {
    pub t_s: f64,
    pub t_p: f64,
}

pub fn transmittance(cfg: &InterfaceConfig, xi: f64) -> Result<Transmittance> {
    let xi = cfg.check_xi(Branch::Evanescent, xi)?;
    Ok(transmittance_unchecked(cfg, xi))
}

pub(crate) fn transmittance_unchecked(cfg: &InterfaceConfig, xi: f64) -> Transmittance {
    let n2 = cfg.n1 * cfg.n1;
    let root = eta_evanescent(cfg, xi);
    Transmittance {
        t_s: 2.0 * xi * root / (n2 - 1.0),
        t_p: 2.0 * n2 / (n2 - 1.0) * xi * root / ((n2 + 1.0) * xi * xi + 1.0),
    }
}

/// Coefficients for dipoles perpendicular (`perp`) and parallel (`par`) to the
/// interface: `T_⊥, T_∥` on the evanescent branch, `r_⊥, r_∥` on the
/// radiation branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisCoefficients {
    pub perp: f64,
    pub par: f64,
}

pub fn axis_coefficients(cfg: &InterfaceConfig, branch: Branch, xi: f64) -> Result<AxisCoefficients> {
    let xi = cfg.check_xi(branch, xi)?;
    let xi2 = xi * xi;
    Ok(match branch {
        Branch::Evanescent => {
            let t = transmittance_unchecked(cfg, xi);
            AxisCoefficients {
                perp: (1.0 + xi2) * t.t_p,
                par: t.t_s + xi2 * t.t_p,
            }
        }
        Branch::Radiation => {
            let r = fresnel_unchecked(cfg, xi);
            AxisCoefficients {
                perp: (1.0 - xi2) * r.r_p,
                par: r.r_s - xi2 * r.r_p,
            }
        }
    })
}

/// `ξ` at which `r_p` vanishes, `1/√(n1²+1)`.
pub fn brewster_xi(cfg: &InterfaceConfig) -> f64 {
    1.0 / (cfg.n1 * cfg.n1 + 1.0).sqrt()
}

/// `a x̂ + b K̂`
fn tm_vector(a: Complex64, b: Complex64, k_hat: [f64; 3]) -> ComplexVector3 {
    ComplexVector3::new(a, b * k_hat[1], b * k_hat[2])
}

/// Electric field profile of the TM mode in the vacuum half-space, as a
/// complex vector, unnormalized.
///
/// Evanescent `(p, dielectric input)`: `e^{-ξ k0 x} t12^p (κ x̂ - i ξ K̂)` with
/// `t12^p = 2 n1 η / (η + i n1² ξ)`.
/// Radiation `(p, vacuum input)`: `e^{-iξk0x}(κx̂+ξK̂) + r_p e^{iξk0x}(κx̂-ξK̂)`.
pub fn mode_function_p(cfg: &InterfaceConfig, point: &ModePoint, x_nm: f64) -> Result<ComplexVector3> {
    require_p(point)?;
    check_distance(x_nm)?;
    let kx = cfg.kx(x_nm);
    let (xi, kappa, k_hat) = (point.xi, point.kappa(), point.k_hat());
    match point.branch {
        Branch::Evanescent => {
            let n2 = cfg.n1 * cfg.n1;
            let eta = eta_evanescent(cfg, xi);
            let t12 = Complex64::new(2.0 * cfg.n1 * eta, 0.0) / Complex64::new(eta, n2 * xi);
            let amp = t12 * (-xi * kx).exp();
            let v = tm_vector(kappa.into(), Complex64::new(0.0, -xi), k_hat);
            Ok(v * amp)
        }
        Branch::Radiation => {
            if point.side != InputSide::Vacuum {
                return Err(Error::invalid("side", "radiation TM profile is defined for vacuum input"));
            }
            let r_p = fresnel_unchecked(cfg, xi).r_p;
            let incoming = Complex64::from_polar(1.0, -xi * kx);
            let reflected = Complex64::from_polar(r_p, xi * kx);
            let plus = tm_vector(kappa.into(), xi.into(), k_hat);
            let minus = tm_vector(kappa.into(), (-xi).into(), k_hat);
            Ok(plus * incoming + minus * reflected)
        }
    }
}

fn require_p(point: &ModePoint) -> Result<()> {
    match point.q {
        ModePolarization::P => Ok(()),
        q => Err(Error::WrongPolarization(q.name())),
    }
}

/// Real electric polarization `[K̂ × x̂]` of a TE mode.
pub fn mode_polarization_s(point: &ModePoint) -> ComplexVector3 {
    ComplexVector3::from_real(transverse_axis(point.phi))
}

/// Unit electric polarization vector of a TM mode at distance `x` in vacuum.
pub fn mode_polarization_p(cfg: &InterfaceConfig, point: &ModePoint, x_nm: f64) -> Result<ComplexVector3> {
    require_p(point)?;
    check_distance(x_nm)?;
    let (xi, kappa, k_hat) = (point.xi, point.kappa(), point.k_hat());
    match point.branch {
        Branch::Evanescent => {
            let norm = (kappa * kappa + xi * xi).sqrt();
            Ok(tm_vector(kappa.into(), Complex64::new(0.0, -xi), k_hat) * (1.0 / norm))
        }
        Branch::Radiation => {
            if point.side != InputSide::Vacuum {
                return Err(Error::invalid("side", "radiation TM polarization is defined for vacuum input"));
            }
            let kx = cfg.kx(x_nm);
            if xi < RADIATION_LIMIT_XI {
                // ξ → 0: both amplitudes vanish linearly in ξ, leaving c x̂ + K̂.
                let c = Complex64::new(cfg.n1 * cfg.n1 / cfg.xi_max_evanescent(), -kx);
                let norm = (c.norm_sqr() + 1.0).sqrt();
                return Ok(tm_vector(c, 1.0.into(), k_hat) * (1.0 / norm));
            }
            let w = StandingWave::new(cfg, xi, kx);
            let v = tm_vector(w.along_x * kappa, w.along_k * xi, k_hat);
            Ok(v * (1.0 / w.z(xi).sqrt()))
        }
    }
}

/// Below this `ξ` the radiation TM polarization uses its `ξ → 0` limit.
const RADIATION_LIMIT_XI: f64 = 1e-8;

/// `1 + r_p e^{iθ}` and `1 - r_p e^{iθ}` with `θ = 2ξ k0 x`, formed without
/// cancellation near `r_p = -1`.
struct StandingWave {
    r_p: f64,
    two_xi_kx: f64,
    along_x: Complex64,
    along_k: Complex64,
}

impl StandingWave {
    fn new(cfg: &InterfaceConfig, xi: f64, kx: f64) -> Self {
        let n2 = cfg.n1 * cfg.n1;
        let eta = eta_radiation(cfg, xi);
        let (r_p, one_plus, one_minus) = {
            let den = n2 * xi + eta;
            ((n2 * xi - eta) / den, 2.0 * n2 * xi / den, 2.0 * eta / den)
        };
        let theta = 2.0 * xi * kx;
        let half = 0.5 * theta;
        let phase_minus_one = Complex64::new(-2.0 * half.sin() * half.sin(), theta.sin());
        StandingWave {
            r_p,
            two_xi_kx: theta,
            along_x: one_plus + phase_minus_one * r_p,
            along_k: one_minus - phase_minus_one * r_p,
        }
    }

    /// `Z = 1 + r_p² + 2 r_p (1 - 2ξ²) cos(2ξ k0 x)`, evaluated as
    /// `κ²|1 + r_p e^{iθ}|² + ξ²|1 - r_p e^{iθ}|²`.
    fn z(&self, xi: f64) -> f64 {
        (1.0 - xi * xi) * self.along_x.norm_sqr() + xi * xi * self.along_k.norm_sqr()
    }
}

/// Closed-form ellipticity `Im[ε*×ε]` of the TM polarization.
pub fn mode_ellipticity(cfg: &InterfaceConfig, point: &ModePoint, x_nm: f64) -> Result<[f64; 3]> {
    require_p(point)?;
    check_distance(x_nm)?;
    let xi = point.xi;
    let axis = transverse_axis(point.phi);
    let magnitude = match point.branch {
        Branch::Evanescent => 2.0 * xi * (1.0 + xi * xi).sqrt() / (1.0 + 2.0 * xi * xi),
        Branch::Radiation => {
            let kx = cfg.kx(x_nm);
            if xi < RADIATION_LIMIT_XI {
                let c = cfg.n1 * cfg.n1 / cfg.xi_max_evanescent();
                -2.0 * kx / (c * c + kx * kx + 1.0)
            } else {
                let w = StandingWave::new(cfg, xi, kx);
                4.0 / w.z(xi) * xi * (1.0 - xi * xi).max(0.0).sqrt() * w.r_p * w.two_xi_kx.sin()
            }
        }
    };
    Ok(axis.map(|c| c * magnitude))
}

/// Local electric spin density of a mode, in units of `ε0/ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpinDensity(pub [f64; 3]);

impl SpinDensity {
    pub fn zero() -> Self {
        SpinDensity([0.0; 3])
    }

    pub fn dot(&self, v: &[f64; 3]) -> f64 {
        self.0.iter().zip(v).map(|(a, b)| a * b).sum()
    }
}

/// Spin density of the TM mode; zero for TE modes, whose electric
/// polarization is linear.
pub fn spin_density(cfg: &InterfaceConfig, point: &ModePoint, x_nm: f64) -> Result<SpinDensity> {
    check_distance(x_nm)?;
    if point.q == ModePolarization::S {
        return Ok(SpinDensity::zero());
    }
    let xi = point.xi;
    let kx = cfg.kx(x_nm);
    let magnitude = match point.branch {
        Branch::Evanescent => {
            let n2 = cfg.n1 * cfg.n1;
            let edge = (n2 - 1.0 - xi * xi).max(0.0);
            2.0 * n2 / (n2 - 1.0) * edge / ((n2 + 1.0) * xi * xi + 1.0)
                * xi
                * (1.0 + xi * xi).sqrt()
                * (-2.0 * xi * kx).exp()
        }
        Branch::Radiation => {
            let r_p = fresnel_unchecked(cfg, xi).r_p;
            xi * (1.0 - xi * xi).max(0.0).sqrt() * r_p * (2.0 * xi * kx).sin()
        }
    };
    Ok(SpinDensity(transverse_axis(point.phi).map(|c| c * magnitude)))
}
