use std::fmt;
use std::path::Path;

use polcorr::chsh::{
    beta_analytic, beta_max, beta_max_surface, beta_trace, optimal_angle_curves,
    violation_threshold, AnalyzerSettings, NoisePolicy,
};
use polcorr::fit::{fit_table, fixed_white_fraction_curve, ExperimentPoint};
use polcorr::separability::separability_region;
use polcorr::sim::estimate_beta;
use polcorr::state::entropy_surface;
use polcorr::NoiseParams;
use serde::Deserialize;

use crate::args::{AnglePolicy, Command, Noise, RunConfig, ThresholdPolicy};

/// A failure that aborts the command; printed as one line on stderr.
#[derive(Debug)]
pub struct CliError {
    pub code: &'static str,
    pub message: String,
}

impl CliError {
    fn new(code: &'static str, message: impl fmt::Display) -> Self {
        CliError {
            code,
            message: message.to_string(),
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let flat = self
            .message
            .split_whitespace()
            .collect::<Vec<_>>()
            .join(" ");
        write!(f, "error: {}: {}", self.code, flat)
    }
}

impl From<polcorr::Error> for CliError {
    fn from(e: polcorr::Error) -> Self {
        let code = match e {
            polcorr::Error::InvalidParams { .. } | polcorr::Error::InvalidArgument(_) => "domain",
            polcorr::Error::NoThreshold(_) => "no-threshold",
            _ => "compute",
        };
        CliError::new(code, e)
    }
}

/// Everything a command produced: the artifact plus per-row batch failures.
#[derive(Debug, Default)]
pub struct Outcome {
    pub body: Vec<u8>,
    pub row_errors: Vec<CliError>,
}

struct Fmt {
    precision: usize,
    degrees: bool,
}

impl Fmt {
    /// Fixed-point with '.' separator; never prints a negative zero.
    fn num(&self, x: f64) -> String {
        let s = format!("{:.*}", self.precision, x);
        match s.strip_prefix('-') {
            Some(rest) if rest.bytes().all(|b| b == b'0' || b == b'.') => rest.to_string(),
            _ => s,
        }
    }

    fn angle(&self, radians: f64) -> String {
        self.num(if self.degrees {
            radians.to_degrees()
        } else {
            radians
        })
    }

    fn angle_in(&self, value: f64) -> f64 {
        if self.degrees {
            value.to_radians()
        } else {
            value
        }
    }
}

struct Table {
    writer: csv::Writer<Vec<u8>>,
}

impl Table {
    fn new(header: &[&str]) -> Result<Self, CliError> {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer.write_record(header).map_err(io_error)?;
        Ok(Table { writer })
    }

    fn row(&mut self, fields: &[String]) -> Result<(), CliError> {
        self.writer.write_record(fields).map_err(io_error)
    }

    fn finish(self) -> Result<Vec<u8>, CliError> {
        self.writer
            .into_inner()
            .map_err(|e| CliError::new("io", e.error()))
    }
}

fn io_error(e: impl fmt::Display) -> CliError {
    CliError::new("io", e)
}

fn params(noise: &Noise) -> Result<NoiseParams, CliError> {
    Ok(NoiseParams::new(noise.p, noise.r)?)
}

fn unit_grid(n: u32) -> Vec<f64> {
    (0..n).map(|k| k as f64 / (n - 1) as f64).collect()
}

fn line(text: String) -> Outcome {
    Outcome {
        body: format!("{text}\n").into_bytes(),
        row_errors: Vec::new(),
    }
}

fn table(body: Vec<u8>) -> Outcome {
    Outcome {
        body,
        row_errors: Vec::new(),
    }
}

pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    let f = Fmt {
        precision: config.precision as usize,
        degrees: config.degrees,
    };
    match &config.command {
        Command::Entropy(grid) => {
            let mut t = Table::new(&["p", "r", "entropy"])?;
            for s in entropy_surface(grid.grid as usize)? {
                t.row(&[f.num(s.p), f.num(s.r), f.num(s.entropy)])?;
            }
            Ok(table(t.finish()?))
        }
        Command::Separability(grid) => {
            let mut t = Table::new(&["p", "r", "separable", "margin", "lambda_t_min"])?;
            for s in separability_region(grid.grid as usize)? {
                t.row(&[
                    f.num(s.p),
                    f.num(s.r),
                    s.separable.to_string(),
                    f.num(s.margin),
                    f.num(s.lambda_t_min),
                ])?;
            }
            Ok(table(t.finish()?))
        }
        Command::Beta { noise, theta, phi } => {
            let pr = params(noise)?;
            let s = AnalyzerSettings::new(f.angle_in(*theta), f.angle_in(*phi))?;
            Ok(line(format!(
                "beta={} trace_magnitude={}",
                f.num(beta_analytic(pr, s)),
                f.num(beta_trace(pr, s).abs())
            )))
        }
        Command::BetaMax { noise } => {
            let m = beta_max(params(noise)?);
            Ok(line(format!(
                "beta_max={} theta_star={} phi_star={}",
                f.num(m.beta_max),
                f.angle(m.settings.theta),
                f.angle(m.settings.phi)
            )))
        }
        Command::BetaMaxSurface(grid) => {
            let mut t = Table::new(&["p", "r", "beta_max", "theta_star", "phi_star"])?;
            for s in beta_max_surface(grid.grid as usize)? {
                t.row(&[
                    f.num(s.p),
                    f.num(s.r),
                    f.num(s.beta_max),
                    f.angle(s.theta_star),
                    f.angle(s.phi_star),
                ])?;
            }
            Ok(table(t.finish()?))
        }
        Command::Angles { policy, grid } => {
            let policy = match policy {
                AnglePolicy::Colored => NoisePolicy::Colored,
                AnglePolicy::Half => NoisePolicy::Half,
                AnglePolicy::Werner => NoisePolicy::Werner,
            };
            let mut t = Table::new(&["p", "theta_star", "phi_star"])?;
            for s in optimal_angle_curves(policy, &unit_grid(grid.grid))? {
                t.row(&[f.num(s.p), f.angle(s.theta_star), f.angle(s.phi_star)])?;
            }
            Ok(table(t.finish()?))
        }
        Command::Threshold { policy, level } => {
            let need_level = || {
                level.ok_or_else(|| {
                    CliError::new(
                        "usage",
                        "--level is required for white-frac and white-weight",
                    )
                })
            };
            let policy = match policy {
                ThresholdPolicy::Colored => NoisePolicy::Colored,
                ThresholdPolicy::Half => NoisePolicy::Half,
                ThresholdPolicy::Werner => NoisePolicy::Werner,
                ThresholdPolicy::WhiteFrac => NoisePolicy::WhiteFraction(need_level()?),
                ThresholdPolicy::WhiteWeight => NoisePolicy::WhiteWeight(need_level()?),
            };
            Ok(line(format!(
                "p_star={}",
                f.num(violation_threshold(policy)?)
            )))
        }
        Command::Simulate {
            noise,
            theta,
            phi,
            samples,
            seed,
        } => {
            let pr = params(noise)?;
            let best = beta_max(pr).settings;
            let s = AnalyzerSettings::new(
                theta.map_or(best.theta, |t| f.angle_in(t)),
                phi.map_or(best.phi, |t| f.angle_in(t)),
            )?;
            let est = estimate_beta(pr, s, *samples, *seed)?;
            Ok(line(format!(
                "beta_hat={} std_error={} samples_per_setting={} seed={} theta={} phi={}",
                f.num(est.value),
                f.num(est.std_error),
                est.samples_per_setting,
                seed,
                f.angle(s.theta),
                f.angle(s.phi)
            )))
        }
        Command::Fit { input } => fit(input, &f),
        Command::Curve { white_frac, grid } => {
            let mut t = Table::new(&["p", "beta_max"])?;
            for c in fixed_white_fraction_curve(*white_frac, &unit_grid(grid.grid))? {
                t.row(&[f.num(c.p), f.num(c.beta_max)])?;
            }
            Ok(table(t.finish()?))
        }
    }
}

#[derive(Debug, Deserialize)]
struct InputRow {
    p: f64,
    beta_exp: f64,
}

fn fit(input: &Path, f: &Fmt) -> Result<Outcome, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(input)
        .map_err(|e| CliError::new("io", format!("{}: {e}", input.display())))?;
    let header = reader.headers().map_err(io_error)?.clone();
    if header.iter().collect::<Vec<_>>() != ["p", "beta_exp"] {
        return Err(CliError::new(
            "input",
            format!("{}: expected header `p,beta_exp`", input.display()),
        ));
    }

    let mut row_errors = Vec::new();
    let mut points = Vec::new();
    for (idx, record) in reader.deserialize::<InputRow>().enumerate() {
        let row = idx + 1;
        let point = record
            .map_err(|e| e.to_string())
            .and_then(|r| ExperimentPoint::new(r.p, r.beta_exp).map_err(|e| e.to_string()));
        match point {
            Ok(pt) => points.push((row, pt)),
            Err(msg) => row_errors.push((row, msg)),
        }
    }

    let just_points: Vec<_> = points.iter().map(|(_, pt)| *pt).collect();
    let mut t = Table::new(&["p", "r", "white_pct", "colored_pct", "beta_fit"])?;
    for ((row, _), fitted) in points.iter().zip(fit_table(&just_points)) {
        match fitted {
            Ok(fp) => {
                let b = fp.breakdown;
                t.row(&[
                    f.num(b.p),
                    f.num(b.r),
                    f.num(b.white_pct),
                    f.num(b.colored_pct),
                    f.num(fp.beta_fit),
                ])?;
            }
            Err(e) => row_errors.push((*row, e.to_string())),
        }
    }
    row_errors.sort_by_key(|(row, _)| *row);
    Ok(Outcome {
        body: t.finish()?,
        row_errors: row_errors
            .into_iter()
            .map(|(row, msg)| CliError::new("fit-row", format!("row {row}: {msg}")))
            .collect(),
    })
}
