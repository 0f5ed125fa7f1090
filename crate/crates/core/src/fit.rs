//! Fitting the colored-noise weight to measured maximal Bell values.
//!
//! For fixed `p`, `beta_max(p, r)` increases monotonically in `r` between
//! the Werner value at `r = 0` and the colored-only value at `r = 1 - p`, so
//! a measured value inside that bracket pins down a unique `r`.

use crate::chsh::{beta_max, NoisePolicy, TSIRELSON_BOUND};
use crate::error::{Error, Result};
use crate::roots::bisect;
use crate::state::NoiseParams;

/// Bracket width at which the bisection on `r` stops.
pub const FIT_TOL: f64 = 1e-9;
const FIT_MAX_ITER: usize = 200;
/// Distance from a bracket end at which a measured value snaps to it.
const ENDPOINT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExperimentPoint {
    pub p: f64,
    pub beta_exp: f64,
}

impl ExperimentPoint {
    pub fn new(p: f64, beta_exp: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("p={p} outside [0, 1]")));
        }
        if !(beta_exp > 0.0 && beta_exp <= TSIRELSON_BOUND) {
            return Err(Error::InvalidArgument(format!(
                "beta_exp={beta_exp} outside (0, {TSIRELSON_BOUND}]"
            )));
        }
        Ok(ExperimentPoint { p, beta_exp })
    }
}

/// Split of the total noise weight `1 - p` into white and colored parts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseBreakdown {
    pub p: f64,
    pub r: f64,
    pub white_pct: f64,
    pub colored_pct: f64,
}

pub fn noise_breakdown(params: NoiseParams) -> Result<NoiseBreakdown> {
    let (p, r) = (params.p(), params.r());
    if p >= 1.0 {
        return Err(Error::NoNoise { p });
    }
    let total = 1.0 - p;
    let colored_pct = 100.0 * r / total;
    Ok(NoiseBreakdown {
        p,
        r,
        white_pct: 100.0 - colored_pct,
        colored_pct,
    })
}

/// The `r` for which `beta_max(p, r) = beta_exp`.
pub fn fit_r(p: f64, beta_exp: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!(
            "fit requires 0 <= p < 1, got p={p}"
        )));
    }
    let r_max = 1.0 - p;
    let at = |r: f64| beta_max(NoiseParams::new(p, r).expect("r within [0, 1-p]")).beta_max;
    let lower = at(0.0);
    let upper = at(r_max);
    if beta_exp < lower - ENDPOINT_TOL || beta_exp > upper + ENDPOINT_TOL || beta_exp.is_nan() {
        return Err(Error::BetaOutOfRange {
            p,
            beta_exp,
            lower,
            upper,
        });
    }
    if (beta_exp - lower).abs() <= ENDPOINT_TOL {
        return Ok(0.0);
    }
    if (beta_exp - upper).abs() <= ENDPOINT_TOL {
        return Ok(r_max);
    }
    let r = bisect(|r| at(r) - beta_exp, 0.0, r_max, FIT_TOL, FIT_MAX_ITER)
        .expect("bracket verified above");
    Ok(r)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FittedPoint {
    pub breakdown: NoiseBreakdown,
    /// `beta_max` at the fitted parameters.
    pub beta_fit: f64,
}

pub fn fit_point(point: &ExperimentPoint) -> Result<FittedPoint> {
    let r = fit_r(point.p, point.beta_exp)?;
    let params = NoiseParams::new(point.p, r)?;
    Ok(FittedPoint {
        breakdown: noise_breakdown(params)?,
        beta_fit: beta_max(params).beta_max,
    })
}

/// Fits each point independently; a failing row does not affect the others.
pub fn fit_table(points: &[ExperimentPoint]) -> Vec<Result<FittedPoint>> {
    points.iter().map(fit_point).collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub p: f64,
    pub beta_max: f64,
}

/// `beta_max` along `r = (1 - w)(1 - p)`, where `w` is the white share of
/// the total noise.
pub fn fixed_white_fraction_curve(w: f64, p_grid: &[f64]) -> Result<Vec<CurvePoint>> {
    let policy = NoisePolicy::WhiteFraction(w);
    p_grid
        .iter()
        .map(|&p| {
            let params = policy.params(p)?;
            Ok(CurvePoint {
                p: params.p(),
                beta_max: beta_max(params).beta_max,
            })
        })
        .collect()
}
