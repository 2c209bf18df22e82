use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(
    name = "emitsurf",
    version,
    about = "Emission rates of a polarized dipole in front of a dielectric surface"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep every rate over distances.
    Rates(Options),
    /// Angular densities on a (κ_y, κ_z) grid.
    Density(Options),
    /// Far-field pattern over θ in the xy or xz plane.
    Pattern(Options),
    /// Side differences and asymmetry factors over distances.
    Asymmetry(Options),
    /// Run the self-check suite; exits 2 if any check fails.
    Validate(Options),
}

impl Command {
    pub fn options(&self) -> &Options {
        match self {
            Command::Rates(o) | Command::Density(o) | Command::Pattern(o) | Command::Asymmetry(o) | Command::Validate(o) => o,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    Xy,
    Xz,
}

/// A value given as text on the command line, or as text or a number list in
/// a config file.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum TextOrNumbers {
    Text(String),
    Number(f64),
    Numbers(Vec<f64>),
}

impl TextOrNumbers {
    pub fn to_text(&self) -> String {
        match self {
            TextOrNumbers::Text(s) => s.clone(),
            TextOrNumbers::Number(v) => v.to_string(),
            TextOrNumbers::Numbers(v) => v.iter().map(f64::to_string).collect::<Vec<_>>().join(","),
        }
    }
}

fn text(s: &str) -> Result<TextOrNumbers, String> {
    Ok(TextOrNumbers::Text(s.to_string()))
}

/// Every flag is optional so that a `--config` file can fill the gaps.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Options {
    /// Refractive index of the dielectric (default 1.45).
    #[arg(long)]
    pub n1: Option<f64>,

    /// Free-space transition wavelength in nm (default 852).
    #[arg(long = "wavelength-nm")]
    pub wavelength_nm: Option<f64>,

    /// Preset x, y, z, theta-xz, eps-xz, or six reals re_x,im_x,re_y,im_y,re_z,im_z.
    #[arg(long, value_parser = text, allow_hyphen_values = true)]
    pub dipole: Option<TextOrNumbers>,

    /// Distances in nm: start:stop:step (inclusive) or a comma list.
    #[arg(long = "x-nm", value_parser = text, allow_hyphen_values = true)]
    pub x_nm: Option<TextOrNumbers>,

    /// Grid points per κ axis (at least 16).
    #[arg(long)]
    pub grid: Option<usize>,

    /// Restrict the density grid to radiation modes, κ in [-1, 1].
    #[arg(long = "radiation-only", num_args = 0..=1, default_missing_value = "true")]
    pub radiation_only: Option<bool>,

    /// Pattern plane.
    #[arg(long, value_enum)]
    pub plane: Option<Plane>,

    /// θ samples per azimuth for patterns.
    #[arg(long = "theta-samples")]
    pub theta_samples: Option<usize>,

    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,

    /// Output format; defaults to json for a .json output path, csv otherwise.
    #[arg(long, value_enum)]
    pub format: Option<Format>,

    #[arg(long = "rel-tol")]
    pub rel_tol: Option<f64>,

    #[arg(long = "abs-tol")]
    pub abs_tol: Option<f64>,

    #[arg(long = "max-subdivisions")]
    pub max_subdivisions: Option<usize>,

    /// JSON file with any of the options above; flags take precedence.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
}

impl Options {
    /// Fills unset fields from `base`.
    pub fn or(self, base: Options) -> Options {
        Options {
            n1: self.n1.or(base.n1),
            wavelength_nm: self.wavelength_nm.or(base.wavelength_nm),
            dipole: self.dipole.or(base.dipole),
            x_nm: self.x_nm.or(base.x_nm),
            grid: self.grid.or(base.grid),
            radiation_only: self.radiation_only.or(base.radiation_only),
            plane: self.plane.or(base.plane),
            theta_samples: self.theta_samples.or(base.theta_samples),
            out: self.out.or(base.out),
            format: self.format.or(base.format),
            rel_tol: self.rel_tol.or(base.rel_tol),
            abs_tol: self.abs_tol.or(base.abs_tol),
            max_subdivisions: self.max_subdivisions.or(base.max_subdivisions),
            config: self.config,
        }
    }

    pub fn load_config(path: &Path) -> Result<Options, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
    }
}
