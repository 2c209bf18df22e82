//! Globally adaptive 15/31-point Gauss–Kronrod quadrature.
//!
//! The panel with the largest error estimate is bisected until the summed
//! estimate drops below `max(abs_tol, rel_tol·|I|)`. Error estimates follow the
//! QUADPACK heuristic for the embedded pair.

#![allow(clippy::excessive_precision)]

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const XGK: [f64; 16] = [
    0.0,
    0.101_142_066_918_717_499_027_074_231_447_392,
    0.201_194_093_997_434_522_300_628_303_394_596,
    0.299_180_007_153_168_812_166_780_024_266_389,
    0.394_151_347_077_563_369_897_207_370_981_045,
    0.485_081_863_640_239_680_693_655_740_232_351,
    0.570_972_172_608_538_847_537_226_737_253_911,
    0.650_996_741_297_416_970_533_735_895_313_275,
    0.724_417_731_360_170_047_416_186_054_613_938,
    0.790_418_501_442_465_932_967_649_294_817_947,
    0.848_206_583_410_427_216_200_648_320_774_217,
    0.897_264_532_344_081_900_882_509_656_454_496,
    0.937_273_392_400_705_904_307_758_947_710_209,
    0.967_739_075_679_139_134_257_347_978_784_337,
    0.987_992_518_020_485_428_489_565_718_586_613,
    0.998_002_298_693_397_060_285_172_840_152_271,
];

const WGK: [f64; 16] = [
    0.101_330_007_014_791_549_017_374_792_767_492,
    0.100_769_845_523_875_595_044_946_662_617_570,
    0.099_173_598_721_791_959_332_393_173_484_604,
    0.096_642_726_983_623_678_505_179_907_627_589,
    0.093_126_598_170_825_321_225_486_872_747_346,
    0.088_564_443_056_211_770_647_275_443_693_775,
    0.083_080_502_823_133_021_038_289_247_286_103,
    0.076_849_680_757_720_378_894_432_777_482_659,
    0.069_854_121_318_728_258_709_520_077_099_147,
    0.062_009_567_800_670_640_285_139_230_960_803,
    0.053_481_524_690_928_087_265_343_147_239_431,
    0.044_589_751_324_764_876_608_227_299_373_279,
    0.035_346_360_791_375_846_222_037_948_478_359,
    0.025_460_847_326_715_320_186_874_001_019_655,
    0.015_007_947_329_316_122_538_374_763_075_807,
    0.005_377_479_872_923_348_987_792_051_430_128,
];

/// Gauss weights for the even-indexed Kronrod nodes.
const WG: [f64; 8] = [
    0.202_578_241_925_561_272_880_620_199_967_519,
    0.198_431_485_327_111_576_456_118_326_443_839,
    0.186_161_000_015_562_211_026_800_561_866_423,
    0.166_269_205_816_993_933_553_200_860_481_209,
    0.139_570_677_926_154_314_447_804_794_511_028,
    0.107_159_220_467_171_935_011_869_546_685_869,
    0.070_366_047_488_108_124_709_267_416_450_667,
    0.030_753_241_996_117_268_354_628_393_577_204,
];

/// Tolerances and subdivision budget for every rate integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Bisections allowed beyond the initial panel partition.
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-14,
            max_subdivisions: 200,
        }
    }
}

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol.is_finite() && self.rel_tol > 0.0) {
            return Err(Error::invalid("rel_tol", "tolerance must be positive"));
        }
        if !(self.abs_tol.is_finite() && self.abs_tol > 0.0) {
            return Err(Error::invalid("abs_tol", "tolerance must be positive"));
        }
        if self.max_subdivisions < 10 {
            return Err(Error::invalid(
                "max_subdivisions",
                format!("need at least 10, got {}", self.max_subdivisions),
            ));
        }
        Ok(())
    }
}

/// Converged integral with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = WGK[0] * fc;
    let mut res_g = WG[0] * fc;
    let mut res_abs = res_k.abs();
    let mut values = [(0.0, 0.0); 16];
    values[0] = (fc, fc);
    for j in 1..16 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        values[j] = (f1, f2);
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 0 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[0] * (fc - mean).abs();
    for j in 1..16 {
        res_asc += WGK[j] * ((values[j].0 - mean).abs() + (values[j].1 - mean).abs());
    }
    let scale = half.abs();
    res_asc *= scale;
    res_abs *= scale;
    let mut error = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && error != 0.0 {
        error = res_asc * (200.0 * error / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        error = error.max(50.0 * f64::EPSILON * res_abs);
    }
    Panel {
        a,
        b,
        value: res_k * half,
        error,
    }
}

/// Integrates `f` over `[a, b]` starting from `panels` equal subintervals.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    panels: usize,
    spec: &QuadratureSpec,
) -> Result<Estimate> {
    spec.validate()?;
    if a == b {
        return Ok(Estimate {
            value: 0.0,
            error: 0.0,
            subdivisions: 0,
        });
    }
    let panels = panels.max(1);
    let width = (b - a) / panels as f64;
    let mut list: Vec<Panel> = (0..panels)
        .map(|i| {
            let lo = a + width * i as f64;
            let hi = if i + 1 == panels { b } else { lo + width };
            kronrod(&f, lo, hi)
        })
        .collect();

    let mut subdivisions = 0;
    loop {
        let value: f64 = list.iter().map(|p| p.value).sum();
        let error: f64 = list.iter().map(|p| p.error).sum();
        let tolerance = spec.abs_tol.max(spec.rel_tol * value.abs());
        if !value.is_finite() {
            return Err(Error::Quadrature {
                value,
                estimate: error,
                tolerance,
                subdivisions,
            });
        }
        if error <= tolerance {
            return Ok(Estimate {
                value,
                error,
                subdivisions,
            });
        }
        if subdivisions >= spec.max_subdivisions {
            return Err(Error::Quadrature {
                value,
                estimate: error,
                tolerance,
                subdivisions,
            });
        }
        let worst = list
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.error.total_cmp(&y.1.error))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let p = list.swap_remove(worst);
        let mid = 0.5 * (p.a + p.b);
        if mid == p.a || mid == p.b {
            // Panel no longer divisible in floating point; accept what we have.
            return Ok(Estimate {
                value,
                error,
                subdivisions,
            });
        }
        list.push(kronrod(&f, p.a, mid));
        list.push(kronrod(&f, mid, p.b));
        subdivisions += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn polynomials_are_exact() {
        let spec = QuadratureSpec::default();
        let r = integrate(|x| x.powi(7) - 3.0 * x * x, 0.0, 2.0, 1, &spec).unwrap();
        assert!((r.value - (32.0 - 8.0)).abs() < 1e-13);
        assert_eq!(r.subdivisions, 0);
    }

    #[test]
    fn square_root_endpoint() {
        let spec = QuadratureSpec::default();
        let r = integrate(|x| (1.0 - x * x).sqrt(), 0.0, 1.0, 1, &spec).unwrap();
        assert!((r.value - PI / 4.0).abs() < 1e-10);
    }

    #[test]
    fn oscillatory_with_panels() {
        let spec = QuadratureSpec::default();
        let k = 500.0;
        let panels = (k / PI).ceil() as usize;
        let r = integrate(|x| (k * x).cos(), 0.0, 1.0, panels, &spec).unwrap();
        assert!((r.value - k.sin() / k).abs() < 1e-12);
    }

    #[test]
    fn reversed_and_empty_intervals() {
        let spec = QuadratureSpec::default();
        let r = integrate(|x| x, 1.0, 0.0, 1, &spec).unwrap();
        assert!((r.value + 0.5).abs() < 1e-15);
        assert_eq!(integrate(|x| x, 3.0, 3.0, 4, &spec).unwrap().value, 0.0);
    }

    #[test]
    fn budget_exhaustion_reports_estimate() {
        let spec = QuadratureSpec {
            rel_tol: 1e-14,
            abs_tol: 1e-300,
            max_subdivisions: 10,
        };
        let err = integrate(|x: f64| x.abs().powf(-0.9), -1.0, 1.3, 1, &spec).unwrap_err();
        match err {
            Error::Quadrature { subdivisions, estimate, .. } => {
                assert_eq!(subdivisions, 10);
                assert!(estimate > 0.0);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn spec_validation() {
        let mut spec = QuadratureSpec {
            max_subdivisions: 9,
            ..Default::default()
        };
        assert!(spec.validate().is_err());
        spec.max_subdivisions = 10;
        spec.rel_tol = 0.0;
        assert!(spec.validate().is_err());
    }
}
