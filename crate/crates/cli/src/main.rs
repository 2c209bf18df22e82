mod args;

use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use emitsurf::sweep::{grid_density, scan_pattern, sweep_asymmetry, sweep_rates};
use emitsurf::validate::{run_suite, SuiteOptions};
use emitsurf::{DipolePolarization, Error, InterfaceConfig, PatternPlane, QuadratureSpec, SweepRequest, XSpec};

use args::{Cli, Command, Format, Options, Plane, TextOrNumbers};

/// A one-line diagnostic attached to the flag that caused it.
struct Diagnostic {
    flag: Option<&'static str>,
    message: String,
}

impl Diagnostic {
    fn new(flag: &'static str, message: impl Into<String>) -> Self {
        Self {
            flag: Some(flag),
            message: message.into(),
        }
    }
}

impl From<Error> for Diagnostic {
    fn from(e: Error) -> Self {
        let (param, message) = match &e {
            Error::Invalid { param, reason } => (Some(*param), reason.clone()),
            Error::Domain { param, .. } => (Some(*param), e.to_string()),
            _ => (None, e.to_string()),
        };
        let flag = param.and_then(|p| match p {
            "n1" => Some("--n1"),
            "lambda0" => Some("--wavelength-nm"),
            "dipole" => Some("--dipole"),
            "x-nm" | "x_nm" => Some("--x-nm"),
            "grid" => Some("--grid"),
            "theta-samples" => Some("--theta-samples"),
            "rel_tol" => Some("--rel-tol"),
            "abs_tol" => Some("--abs-tol"),
            "max_subdivisions" => Some("--max-subdivisions"),
            _ => None,
        });
        Self { flag, message }
    }
}

fn parse_dipole(spec: &TextOrNumbers) -> Result<DipolePolarization, Diagnostic> {
    let text = spec.to_text();
    let preset = match text.trim() {
        "x" => Some(DipolePolarization::x()),
        "y" => Some(DipolePolarization::y()),
        "z" => Some(DipolePolarization::z()),
        "theta-xz" => Some(DipolePolarization::theta_xz()),
        "eps-xz" => Some(DipolePolarization::eps_xz()),
        _ => None,
    };
    if let Some(u) = preset {
        return Ok(u);
    }
    let parts: Vec<f64> = text
        .split(',')
        .map(|t| t.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| Diagnostic::new("--dipole", format!("expected a preset or six reals, got '{text}'")))?;
    let parts: [f64; 6] = parts
        .try_into()
        .map_err(|v: Vec<f64>| Diagnostic::new("--dipole", format!("expected six reals, got {}", v.len())))?;
    let u = DipolePolarization::from_parts(parts)?;
    if u.was_renormalized() {
        eprintln!("note: --dipole: input norm {} normalized to 1", u.input_norm());
    }
    Ok(u)
}

fn default_x(command: &Command) -> &'static str {
    match command {
        Command::Rates(_) | Command::Asymmetry(_) => "0:800:2",
        _ => "0",
    }
}

fn build_request(command: &Command, o: &Options) -> Result<SweepRequest, Diagnostic> {
    let config = InterfaceConfig::new(o.n1.unwrap_or(1.45), o.wavelength_nm.unwrap_or(852.0))?;
    let dipole = parse_dipole(o.dipole.as_ref().unwrap_or(&TextOrNumbers::Text("x".into())))?;
    let x_text = o.x_nm.as_ref().map_or_else(|| default_x(command).to_string(), TextOrNumbers::to_text);
    let x: XSpec = x_text.parse()?;
    let defaults = QuadratureSpec::default();
    let quadrature = QuadratureSpec {
        rel_tol: o.rel_tol.unwrap_or(defaults.rel_tol),
        abs_tol: o.abs_tol.unwrap_or(defaults.abs_tol),
        max_subdivisions: o.max_subdivisions.unwrap_or(defaults.max_subdivisions),
    };
    quadrature.validate()?;
    let mut req = SweepRequest::new(config, dipole);
    req.x = x;
    req.quadrature = quadrature;
    if let Some(n) = o.grid {
        req.grid_size = n;
    }
    req.radiation_only = o.radiation_only.unwrap_or(false);
    req.plane = match o.plane.unwrap_or(Plane::Xz) {
        Plane::Xy => PatternPlane::Xy,
        Plane::Xz => PatternPlane::Xz,
    };
    if let Some(m) = o.theta_samples {
        req.theta_samples = m;
    }
    Ok(req)
}

fn format_of(o: &Options) -> Format {
    o.format.unwrap_or_else(|| match o.out.as_ref().and_then(|p| p.extension()) {
        Some(ext) if ext.eq_ignore_ascii_case("json") => Format::Json,
        _ => Format::Csv,
    })
}

fn emit(o: &Options, body: &str) -> Result<(), Diagnostic> {
    match &o.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| Diagnostic::new("--out", format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Diagnostic {
                    flag: None,
                    message: format!("cannot write to stdout: {e}"),
                })
        }
    }
}

fn validate(req: &SweepRequest, o: &Options) -> Result<bool, Diagnostic> {
    let opts = SuiteOptions {
        config: req.config,
        quadrature: req.quadrature,
        ..SuiteOptions::default()
    };
    let checks = run_suite(&opts);
    let all = checks.iter().all(|c| c.passed);
    let body = match format_of(o) {
        Format::Json => serde_json::to_string_pretty(&checks).expect("checks serialize") + "\n",
        Format::Csv => {
            let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
            let mut s = String::new();
            for c in &checks {
                let mark = if c.passed { "PASS" } else { "FAIL" };
                s.push_str(&format!("{mark}  {:width$}  {}\n", c.name, c.detail));
            }
            let passed = checks.iter().filter(|c| c.passed).count();
            s.push_str(&format!("{passed}/{} checks passed\n", checks.len()));
            s
        }
    };
    emit(o, &body)?;
    Ok(all)
}

fn run(cli: Cli) -> Result<ExitCode, Diagnostic> {
    let flags = cli.command.options().clone();
    let opts = match &flags.config {
        Some(path) => flags.clone().or(Options::load_config(path).map_err(|m| Diagnostic::new("--config", m))?),
        None => flags,
    };
    let req = build_request(&cli.command, &opts)?;
    let table = match &cli.command {
        Command::Rates(_) => sweep_rates(&req)?,
        Command::Density(_) => grid_density(&req)?,
        Command::Pattern(_) => scan_pattern(&req)?,
        Command::Asymmetry(_) => sweep_asymmetry(&req)?,
        Command::Validate(_) => {
            return Ok(if validate(&req, &opts)? { ExitCode::SUCCESS } else { ExitCode::from(2) });
        }
    };
    let body = match format_of(&opts) {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    emit(&opts, &body)?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(d) => {
            match d.flag {
                Some(flag) => eprintln!("error: {flag}: {}", d.message),
                None => eprintln!("error: {}", d.message),
            }
            ExitCode::from(1)
        }
    }
}
