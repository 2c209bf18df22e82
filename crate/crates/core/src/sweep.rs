//! Batch evaluation into [`ResultTable`]s: distance sweeps, `(κ_y, κ_z)`
//! density grids and far-field θ scans.
//!
//! Rows are computed in parallel and collected in sweep order, so a request
//! always produces the same table. Cells that do not apply to a row hold NaN;
//! every table ends with a `status` column (`0` ok, `1` quadrature failure).

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::density::{density_at_kappa, pattern, DipolePolarization, GridRegion, PatternZone};
use crate::error::{Error, Result};
use crate::optics::InterfaceConfig;
use crate::quad::QuadratureSpec;
use crate::rates::{rate_report, RateReport};

pub const TOOL_NAME: &str = "emitsurf";

/// Distances in nm, either `start:stop:step` (stop inclusive) or a list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XSpec {
    Range { start: f64, stop: f64, step: f64 },
    List(Vec<f64>),
}

impl XSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        let out = match self {
            XSpec::Range { start, stop, step } => {
                let (start, stop, step) = (*start, *stop, *step);
                if !(start.is_finite() && stop.is_finite() && step.is_finite()) {
                    return Err(Error::invalid("x-nm", "range bounds must be finite"));
                }
                if step <= 0.0 {
                    return Err(Error::invalid("x-nm", "step must be positive"));
                }
                if stop < start {
                    return Err(Error::invalid("x-nm", "stop must not be below start"));
                }
                let n = ((stop - start) / step * (1.0 + 1e-12)).floor() as usize;
                (0..=n).map(|i| start + step * i as f64).collect()
            }
            XSpec::List(v) => v.clone(),
        };
        if let Some(bad) = out.iter().find(|x| !(x.is_finite() && **x >= 0.0)) {
            return Err(Error::invalid("x-nm", format!("distances must be finite and nonnegative, got {bad}")));
        }
        Ok(out)
    }
}

impl std::str::FromStr for XSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let num = |t: &str| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| Error::invalid("x-nm", format!("cannot parse '{}' as a number", t.trim())))
        };
        let s = s.trim();
        if s.contains(':') {
            let parts: Vec<&str> = s.split(':').collect();
            if parts.len() != 3 {
                return Err(Error::invalid("x-nm", "expected start:stop:step"));
            }
            let spec = XSpec::Range {
                start: num(parts[0])?,
                stop: num(parts[1])?,
                step: num(parts[2])?,
            };
            spec.values()?;
            Ok(spec)
        } else if s.is_empty() {
            Ok(XSpec::List(Vec::new()))
        } else {
            let spec = XSpec::List(s.split(',').map(num).collect::<Result<_>>()?);
            spec.values()?;
            Ok(spec)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PatternPlane {
    /// `φ ∈ {0, π}`
    Xy,
    /// `φ ∈ {π/2, 3π/2}`
    Xz,
}

impl PatternPlane {
    pub fn azimuths(self) -> [f64; 2] {
        match self {
            PatternPlane::Xy => [0.0, PI],
            PatternPlane::Xz => [PI / 2.0, 1.5 * PI],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            PatternPlane::Xy => "xy",
            PatternPlane::Xz => "xz",
        }
    }
}

pub const MIN_GRID: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRequest {
    pub config: InterfaceConfig,
    pub dipole: DipolePolarization,
    pub x: XSpec,
    /// Points per axis of the `(κ_y, κ_z)` grid.
    pub grid_size: usize,
    /// Restrict the grid to `[-1, 1]²` and radiation modes.
    pub radiation_only: bool,
    pub plane: PatternPlane,
    /// Samples of `θ ∈ [0, π]` per azimuth.
    pub theta_samples: usize,
    pub quadrature: QuadratureSpec,
}

impl SweepRequest {
    pub fn new(config: InterfaceConfig, dipole: DipolePolarization) -> Self {
        Self {
            config,
            dipole,
            x: XSpec::List(vec![0.0]),
            grid_size: 101,
            radiation_only: false,
            plane: PatternPlane::Xz,
            theta_samples: 721,
            quadrature: QuadratureSpec::default(),
        }
    }

    fn distances(&self) -> Result<Vec<f64>> {
        self.quadrature.validate()?;
        self.x.values()
    }
}

/// Header block of a [`ResultTable`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub tool: String,
    pub version: String,
    pub kind: String,
    pub n1: f64,
    pub lambda0_nm: f64,
    /// `re_x, im_x, re_y, im_y, re_z, im_z` of the unit dipole vector.
    pub dipole: [f64; 6],
    pub quadrature: QuadratureSpec,
    #[serde(default)]
    pub extras: BTreeMap<String, serde_json::Value>,
}

impl Metadata {
    fn for_request(kind: &str, req: &SweepRequest) -> Self {
        let mut extras = BTreeMap::new();
        extras.insert("x".to_string(), serde_json::to_value(&req.x).unwrap_or_default());
        Self {
            tool: TOOL_NAME.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            kind: kind.to_string(),
            n1: req.config.n1(),
            lambda0_nm: req.config.lambda0_nm(),
            dipole: req.dipole.u().to_parts(),
            quadrature: req.quadrature,
            extras,
        }
    }
}

/// Named real columns with row-major records.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

fn format_number(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{v:.16e}")
    }
}

impl ResultTable {
    pub fn new(metadata: Metadata, columns: &[&str]) -> Self {
        Self {
            metadata,
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Every row has one value per column.
    pub fn is_rectangular(&self) -> bool {
        self.rows.iter().all(|r| r.len() == self.columns.len())
    }

    /// Metadata as `# `-prefixed JSON lines, a header row, then records with
    /// 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let meta = serde_json::to_string_pretty(&self.metadata).expect("metadata serializes");
        for line in meta.lines() {
            let _ = writeln!(out, "# {line}");
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format_number(*v)).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let mut meta = String::new();
        let mut lines = text.lines().peekable();
        while let Some(line) = lines.peek() {
            if let Some(rest) = line.strip_prefix('#') {
                meta.push_str(rest.strip_prefix(' ').unwrap_or(rest));
                meta.push('\n');
                lines.next();
            } else {
                break;
            }
        }
        let metadata: Metadata =
            serde_json::from_str(&meta).map_err(|e| Error::invalid("csv", format!("bad metadata block: {e}")))?;
        let header = lines.next().ok_or_else(|| Error::invalid("csv", "missing header row"))?;
        let columns: Vec<String> = header.split(',').map(str::to_string).collect();
        let mut rows = Vec::new();
        for (n, line) in lines.enumerate() {
            if line.is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|c| c.parse::<f64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| Error::invalid("csv", format!("row {}: {e}", n + 1)))?;
            if row.len() != columns.len() {
                return Err(Error::invalid("csv", format!("row {} has {} cells", n + 1, row.len())));
            }
            rows.push(row);
        }
        Ok(Self { metadata, columns, rows })
    }

    /// `{metadata, columns, rows}` with 17 significant digits; NaN becomes `null`.
    pub fn to_json(&self) -> String {
        let meta = serde_json::to_string_pretty(&self.metadata).expect("metadata serializes");
        let columns = serde_json::to_string(&self.columns).expect("columns serialize");
        let mut out = String::new();
        out.push_str("{\n  \"metadata\": ");
        out.push_str(&meta.replace('\n', "\n  "));
        let _ = write!(out, ",\n  \"columns\": {columns},\n  \"rows\": [");
        for (i, row) in self.rows.iter().enumerate() {
            let cells: Vec<String> = row
                .iter()
                .map(|v| if v.is_finite() { format_number(*v) } else { "null".to_string() })
                .collect();
            let sep = if i == 0 { "" } else { "," };
            let _ = write!(out, "{sep}\n    [{}]", cells.join(", "));
        }
        if !self.rows.is_empty() {
            out.push_str("\n  ");
        }
        out.push_str("]\n}\n");
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        struct Doc {
            metadata: Metadata,
            columns: Vec<String>,
            rows: Vec<Vec<Option<f64>>>,
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| Error::invalid("json", e.to_string()))?;
        let rows = doc
            .rows
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.unwrap_or(f64::NAN)).collect())
            .collect();
        let table = Self {
            metadata: doc.metadata,
            columns: doc.columns,
            rows,
        };
        if !table.is_rectangular() {
            return Err(Error::invalid("json", "row length differs from column count"));
        }
        Ok(table)
    }

    /// Same schema, metadata and bit-identical cells (NaN equals NaN).
    pub fn same_as(&self, other: &Self) -> bool {
        self.metadata == other.metadata
            && self.columns == other.columns
            && self.rows.len() == other.rows.len()
            && self
                .rows
                .iter()
                .zip(&other.rows)
                .all(|(a, b)| a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits()))
    }
}

pub const STATUS_OK: f64 = 0.0;
pub const STATUS_QUADRATURE: f64 = 1.0;

fn rate_rows(req: &SweepRequest, xs: &[f64]) -> Vec<std::result::Result<RateReport, (f64, Error)>> {
    let (cfg, u, spec) = (req.config, req.dipole, req.quadrature);
    xs.par_iter()
        .map(|&x| rate_report(&cfg, &u, x, &spec).map_err(|e| (x, e)))
        .collect()
}

fn failed_row(x: f64, width: usize, err: &Error) -> Result<Vec<f64>> {
    match err {
        Error::Quadrature { .. } => {
            log::warn!("x = {x} nm: {err}");
            let mut row = vec![f64::NAN; width];
            row[0] = x;
            row.push(STATUS_QUADRATURE);
            Ok(row)
        }
        other => Err(other.clone()),
    }
}

/// One row per distance with every [`RateReport`] column.
pub fn sweep_rates(req: &SweepRequest) -> Result<ResultTable> {
    let xs = req.distances()?;
    let mut columns: Vec<&str> = RateReport::COLUMNS.to_vec();
    columns.push("status");
    let mut table = ResultTable::new(Metadata::for_request("rates", req), &columns);
    for r in rate_rows(req, &xs) {
        table.rows.push(match r {
            Ok(report) => {
                let mut row = report.values().to_vec();
                row.push(STATUS_OK);
                row
            }
            Err((x, e)) => failed_row(x, RateReport::COLUMNS.len(), &e)?,
        });
    }
    Ok(table)
}

pub const ASYMMETRY_COLUMNS: [&str; 11] = [
    "x_nm",
    "gamma_evan",
    "gamma_rad",
    "gamma_total",
    "delta_evan",
    "delta_rad",
    "delta_total",
    "zeta_evan",
    "zeta_rad",
    "zeta_total",
    "status",
];

/// Differences and asymmetry factors per distance; undefined `ζ` is NaN.
pub fn sweep_asymmetry(req: &SweepRequest) -> Result<ResultTable> {
    let xs = req.distances()?;
    let mut table = ResultTable::new(Metadata::for_request("asymmetry", req), &ASYMMETRY_COLUMNS);
    let z = |v: Option<f64>| v.unwrap_or(f64::NAN);
    for r in rate_rows(req, &xs) {
        table.rows.push(match r {
            Ok(r) => vec![
                r.x_nm,
                r.gamma_evan,
                r.gamma_rad,
                r.gamma_total,
                r.delta_evan,
                r.delta_rad,
                r.delta_total,
                z(r.zeta_evan),
                z(r.zeta_rad),
                z(r.zeta_total),
                STATUS_OK,
            ],
            Err((x, e)) => failed_row(x, ASYMMETRY_COLUMNS.len() - 1, &e)?,
        });
    }
    Ok(table)
}

pub const GRID_COLUMNS: [&str; 20] = [
    "x_nm",
    "kappa_y",
    "kappa_z",
    "region",
    "xi",
    "phi",
    "f_evan_s",
    "f_evan_p",
    "f_evan",
    "f_rad_s1",
    "f_rad_s2",
    "f_rad_p1",
    "f_rad_p2",
    "f_rad_s",
    "f_rad_p",
    "f_rad",
    "f_rad_mat",
    "f_rad_vac",
    "f",
    "status",
];

/// Symmetric grid coordinate `e·(2i − (N−1))/(N−1)`, exactly mirrored about 0.
pub fn grid_coordinate(extent: f64, i: usize, n: usize) -> f64 {
    let m = (n - 1) as f64;
    extent * (2.0 * i as f64 - m) / m
}

/// Density channels on an `N×N` grid over `[-n1, n1]²`, or `[-1, 1]²` with
/// `radiation_only`. `region` holds the [`GridRegion`] code; `f` is the
/// density of whichever branch applies.
pub fn grid_density(req: &SweepRequest) -> Result<ResultTable> {
    let xs = req.distances()?;
    let n = req.grid_size;
    if n < MIN_GRID {
        return Err(Error::invalid("grid", format!("need at least {MIN_GRID} points per axis, got {n}")));
    }
    let extent = if req.radiation_only { 1.0 } else { req.config.n1() };
    let mut meta = Metadata::for_request("density", req);
    meta.extras.insert("grid_size".into(), n.into());
    meta.extras.insert("radiation_only".into(), req.radiation_only.into());
    let mut table = ResultTable::new(meta, &GRID_COLUMNS);
    let (cfg, u) = (req.config, req.dipole);
    for &x in &xs {
        let rows: Vec<Result<Vec<f64>>> = (0..n * n)
            .into_par_iter()
            .map(|k| {
                let (ky, kz) = (grid_coordinate(extent, k / n, n), grid_coordinate(extent, k % n, n));
                let mut b = density_at_kappa(&cfg, &u, ky, kz, x)?;
                if req.radiation_only && b.region == GridRegion::Evanescent {
                    b.region = GridRegion::OutOfDomain;
                    b.evanescent = None;
                    b.xi = f64::NAN;
                }
                let nan = f64::NAN;
                let (es, ep, et) = b.evanescent.map_or((nan, nan, nan), |e| (e.s, e.p, e.total));
                let rad = b.radiation.map_or([nan; 9], |r| [r.s1, r.s2, r.p1, r.p2, r.s, r.p, r.total, r.mat, r.vac]);
                let f = match b.region {
                    GridRegion::OutOfDomain => nan,
                    GridRegion::Radiation | GridRegion::Boundary => rad[6],
                    GridRegion::Evanescent => et,
                };
                let mut row = vec![x, ky, kz, b.region.code(), b.xi, b.phi, es, ep, et];
                row.extend_from_slice(&rad);
                row.push(f);
                row.push(STATUS_OK);
                Ok(row)
            })
            .collect();
        for r in rows {
            table.rows.push(r?);
        }
    }
    Ok(table)
}

pub const PATTERN_COLUMNS: [&str; 6] = ["x_nm", "phi", "theta", "zone", "p", "status"];

/// Numeric code of a pattern zone in tables.
pub fn zone_code(zone: PatternZone) -> f64 {
    match zone {
        PatternZone::EvanForbidden => 0.0,
        PatternZone::RadMaterial => 1.0,
        PatternZone::RadVacuum => 2.0,
    }
}

/// Far-field pattern over `θ ∈ [0, π]` in both half-planes of the selected plane.
pub fn scan_pattern(req: &SweepRequest) -> Result<ResultTable> {
    let xs = req.distances()?;
    let m = req.theta_samples;
    if m < 2 {
        return Err(Error::invalid("theta-samples", "need at least 2 samples"));
    }
    let mut meta = Metadata::for_request("pattern", req);
    meta.extras.insert("plane".into(), req.plane.name().into());
    meta.extras.insert("theta_samples".into(), m.into());
    let mut table = ResultTable::new(meta, &PATTERN_COLUMNS);
    let (cfg, u) = (req.config, req.dipole);
    for &x in &xs {
        for phi in req.plane.azimuths() {
            let rows: Vec<Result<Vec<f64>>> = (0..m)
                .into_par_iter()
                .map(|k| {
                    let theta = PI * k as f64 / (m - 1) as f64;
                    let zone = PatternZone::containing(&cfg, theta).expect("θ within [0, π]");
                    let p = pattern(&cfg, &u, theta, phi, x, zone)?;
                    Ok(vec![x, phi, theta, zone_code(zone), p, STATUS_OK])
                })
                .collect();
            for r in rows {
                table.rows.push(r?);
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn request(u: DipolePolarization) -> SweepRequest {
        SweepRequest::new(InterfaceConfig::silica_cs_d2(), u)
    }

    #[test]
    fn x_spec_parsing() {
        let s: XSpec = "0:10:2.5".parse().unwrap();
        assert_eq!(s.values().unwrap(), vec![0.0, 2.5, 5.0, 7.5, 10.0]);
        let s: XSpec = "0:800:2".parse().unwrap();
        assert_eq!(s.values().unwrap().len(), 401);
        let s: XSpec = "5, 1,3".parse().unwrap();
        assert_eq!(s.values().unwrap(), vec![5.0, 1.0, 3.0]);
        assert!("0:10:0".parse::<XSpec>().is_err());
        assert!("0:10".parse::<XSpec>().is_err());
        assert!("a,b".parse::<XSpec>().is_err());
        assert!("-1".parse::<XSpec>().is_err());
        assert_eq!("".parse::<XSpec>().unwrap(), XSpec::List(vec![]));
    }

    #[test]
    fn empty_sweep_keeps_schema() {
        let mut req = request(DipolePolarization::x());
        req.x = XSpec::List(vec![]);
        let t = sweep_rates(&req).unwrap();
        assert!(t.rows.is_empty());
        assert_eq!(t.columns.len(), RateReport::COLUMNS.len() + 1);
        assert!(ResultTable::from_csv(&t.to_csv()).unwrap().same_as(&t));
        assert!(ResultTable::from_json(&t.to_json()).unwrap().same_as(&t));
    }

    #[test]
    fn grid_is_mirror_symmetric() {
        for n in [16, 17, 64, 101] {
            for i in 0..n {
                assert_eq!(grid_coordinate(1.45, i, n), -grid_coordinate(1.45, n - 1 - i, n));
            }
            assert_eq!(grid_coordinate(1.45, 0, n), -1.45);
        }
    }

    #[test]
    fn small_grid_rejected() {
        let mut req = request(DipolePolarization::x());
        req.grid_size = 15;
        assert!(grid_density(&req).is_err());
    }

    #[test]
    fn csv_and_json_round_trip() {
        let mut req = request(DipolePolarization::eps_xz());
        req.x = XSpec::List(vec![0.0, 37.5, 410.0]);
        let t = sweep_rates(&req).unwrap();
        assert!(t.is_rectangular());
        let csv = ResultTable::from_csv(&t.to_csv()).unwrap();
        let json = ResultTable::from_json(&t.to_json()).unwrap();
        assert!(csv.same_as(&t));
        assert!(json.same_as(&t));
    }

    #[test]
    fn grid_region_sentinels() {
        let mut req = request(DipolePolarization::x());
        req.grid_size = 16;
        let t = grid_density(&req).unwrap();
        let region = t.column_index("region").unwrap();
        let f = t.column_index("f").unwrap();
        let corner = &t.rows[0];
        assert_eq!(corner[region], -1.0);
        assert!(corner[f].is_nan());
        assert!(t.rows.iter().filter(|r| r[region] > 0.0).all(|r| r[f] >= 0.0));
        assert!(ResultTable::from_json(&t.to_json()).unwrap().same_as(&t));
    }

    #[test]
    fn pattern_nonnegative() {
        let mut req = request(DipolePolarization::eps_xz());
        req.x = XSpec::List(vec![50.0]);
        req.theta_samples = 181;
        let t = scan_pattern(&req).unwrap();
        assert_eq!(t.rows.len(), 362);
        assert!(t.column("p").unwrap().iter().all(|p| *p >= 0.0));
    }
}
