//! Spontaneous emission of a two-level emitter with an arbitrarily polarized
//! (complex) dipole in front of a flat dielectric surface.
//!
//! All rates are in units of the free-space rate `γ0`; distances are in nm.

pub mod density;
pub mod error;
pub mod optics;
pub mod quad;
pub mod rates;
pub mod sweep;
pub mod validate;
pub mod vectens;

pub use density::{
    Channel, DensityBreakdown, DipolePolarization, EvanescentDensity, GridRegion, PatternZone,
    RadiationDensity,
};
pub use error::{Error, Result};
pub use optics::{Branch, InputSide, InterfaceConfig, ModePoint, ModePolarization, SpinDensity};
pub use quad::QuadratureSpec;
pub use rates::{Asymmetry, DeltaRates, DipoleAxis, MatVacRates, PhiRange, RateReport, SideRates};
pub use sweep::{PatternPlane, ResultTable, SweepRequest, XSpec};
pub use validate::{Check, SuiteOptions};
pub use vectens::{ComplexVector3, RankTwoTensor, RateDecomposition};
