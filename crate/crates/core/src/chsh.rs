//! CHSH Bell quantity for the noise family and its maximization over the
//! analyzer angles.
//!
//! The observables are `A0 = σz`, `A1 = a(θ)`, `B0 = a(φ)`, `B1 = a(φ - θ)`
//! with `a(α) = cos α σz + sin α σx`, combined as
//! `β = -<A0 B0> - <A0 B1> - <A1 B0> + <A1 B1>`.
//!
//! For fixed θ the analytic β is `X(θ) cos φ + Y(θ) sin φ` with
//!
//! ```text
//! X(θ) = (2p + r)(sin²θ + cos θ) + r cos θ
//! Y(θ) = (2p + r)(1 - cos θ) sin θ
//! ```
//!
//! so `max_φ |β| = sqrt(X² + Y²)` at `φ = atan2(Y, X)`, leaving a smooth
//! one-dimensional search over θ.

use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::linalg::{kron, trace_product, ComplexMat2, ComplexMat4};
use crate::roots::bisect;
use crate::state::{build_rho_cw, triangle_grid, NoiseParams};

/// Local-realistic bound on `|β|`.
pub const CLASSICAL_BOUND: f64 = 2.0;
/// Quantum bound on `|β|`.
pub const TSIRELSON_BOUND: f64 = 2.0 * SQRT_2;

/// Seed intervals for the θ search over `[0, π]`.
const THETA_SEEDS: usize = 512;
/// Width at which the golden-section stage stops.
const THETA_TOL: f64 = 1e-9;
/// Relative gap under which two refined maxima count as tied.
const TIE_TOL: f64 = 1e-12;
/// Probes along a policy line when looking for the first CHSH violation.
const THRESHOLD_PROBES: usize = 1000;

/// Analyzer orientation angles in radians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyzerSettings {
    pub theta: f64,
    pub phi: f64,
}

impl AnalyzerSettings {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !theta.is_finite() || !phi.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "analyzer angles must be finite (theta={theta}, phi={phi})"
            )));
        }
        Ok(AnalyzerSettings { theta, phi })
    }

    /// Both angles reduced to `[0, 2π)`.
    pub fn canonical(&self) -> Self {
        let wrap = |a: f64| {
            let w = a.rem_euclid(2.0 * PI);
            if w >= 2.0 * PI {
                0.0
            } else {
                w
            }
        };
        AnalyzerSettings {
            theta: wrap(self.theta),
            phi: wrap(self.phi),
        }
    }
}

/// `cos α σz + sin α σx`.
pub fn observable(alpha: f64) -> ComplexMat2 {
    let (s, c) = alpha.sin_cos();
    ComplexMat2::pauli_z().scale(c) + ComplexMat2::pauli_x().scale(s)
}

pub fn bell_operator_matrix(s: AnalyzerSettings) -> ComplexMat4 {
    let a0 = observable(0.0);
    let a1 = observable(s.theta);
    let b0 = observable(s.phi);
    let b1 = observable(s.phi - s.theta);
    kron(&a1, &b1) - kron(&a0, &b0) - kron(&a0, &b1) - kron(&a1, &b0)
}

/// `Re Tr(ρ·B)` for the noise state and the Bell operator at `s`.
///
/// The analytic form [`beta_analytic`] carries the opposite overall sign;
/// only magnitudes are comparable.
pub fn beta_trace(params: NoiseParams, s: AnalyzerSettings) -> f64 {
    trace_product(build_rho_cw(params).matrix(), &bell_operator_matrix(s)).re
}

/// `X(θ)` and `Y(θ)` such that `β = X cos φ + Y sin φ`.
fn phase_coefficients(params: NoiseParams, theta: f64) -> (f64, f64) {
    let a = 2.0 * params.p() + params.r();
    let (s, c) = theta.sin_cos();
    (a * (s * s + c) + params.r() * c, a * (1.0 - c) * s)
}

/// Analytic β at the given angles.
pub fn beta_analytic(params: NoiseParams, s: AnalyzerSettings) -> f64 {
    let (p, r) = (params.p(), params.r());
    let a = 2.0 * p + r;
    let (st, ct) = s.theta.sin_cos();
    let (sp, cp) = s.phi.sin_cos();
    cp * (a * (st * st + ct) + r * ct) - sp * a * (ct - 1.0) * st
}

/// Reduced β formulas for the two single-noise cases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NoiseVariant {
    /// White noise only, `r = 0`.
    White,
    /// Colored noise only, `r = 1 - p`.
    Colored,
}

/// β as a function of `(θ, φ)` for a single-noise state.
///
/// Rejects parameters that do not lie on the variant's line.
pub fn beta_special(
    params: NoiseParams,
    variant: NoiseVariant,
) -> Result<impl Fn(f64, f64) -> f64> {
    let p = params.p();
    let (name, requirement, on_line) = match variant {
        NoiseVariant::White => ("white-noise", "r = 0", params.r().abs() <= 1e-12),
        NoiseVariant::Colored => ("colored-noise", "r = 1 - p", params.white().abs() <= 1e-12),
    };
    if !on_line {
        return Err(Error::VariantMismatch {
            variant: name,
            requirement,
            p,
            r: params.r(),
        });
    }
    Ok(move |theta: f64, phi: f64| {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        match variant {
            NoiseVariant::White => 2.0 * p * (cp * (st * st + ct) - sp * (ct - 1.0) * st),
            NoiseVariant::Colored => {
                cp * ((1.0 + p) * st * st + 2.0 * ct) - sp * (1.0 + p) * (ct - 1.0) * st
            }
        }
    })
}

/// Largest `|β|` and the canonical angles attaining it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellMaxResult {
    pub beta_max: f64,
    pub settings: AnalyzerSettings,
    pub params: NoiseParams,
}

impl BellMaxResult {
    pub fn violates_chsh(&self) -> bool {
        self.beta_max > CLASSICAL_BOUND
    }
}

/// `X² + Y²`, the squared φ-optimized β.
fn envelope(params: NoiseParams, theta: f64) -> f64 {
    let (x, y) = phase_coefficients(params, theta);
    x * x + y * y
}

fn envelope_slope(params: NoiseParams, theta: f64) -> f64 {
    let a = 2.0 * params.p() + params.r();
    let (s, c) = theta.sin_cos();
    let (x, y) = phase_coefficients(params, theta);
    let dx = s * (a * (2.0 * c - 1.0) - params.r());
    let dy = a * (c - (2.0 * theta).cos());
    2.0 * (x * dx + y * dy)
}

/// Golden-section maximization of the envelope on `[lo, hi]`, then a
/// bisection on its slope when the slope changes sign near the estimate.
fn refine_theta(params: NoiseParams, mut lo: f64, mut hi: f64) -> f64 {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let f = |t| envelope(params, t);
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > THETA_TOL {
        if f1 >= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2);
        }
    }
    let estimate = 0.5 * (lo + hi);

    let window_lo = (estimate - 1e-6).max(0.0);
    let window_hi = (estimate + 1e-6).min(PI);
    let slope = |t| envelope_slope(params, t);
    if slope(window_lo) >= 0.0 && slope(window_hi) <= 0.0 {
        if let Some(t) = bisect(slope, window_lo, window_hi, 1e-15, 200) {
            return t;
        }
    }
    estimate
}

/// Maximizes `|β|` over the analyzer angles.
///
/// φ is eliminated in closed form; θ is searched on `[0, π]` by dense
/// seeding followed by local refinement of every seed-level local maximum.
/// Reported angles satisfy `θ ∈ [0, π]`, `φ ∈ [0, π)`; ties go to the
/// smaller θ. For `p = r = 0` the result is `β = 0` at `(0, 0)`.
pub fn beta_max(params: NoiseParams) -> BellMaxResult {
    if 2.0 * params.p() + params.r() == 0.0 {
        return BellMaxResult {
            beta_max: 0.0,
            settings: AnalyzerSettings {
                theta: 0.0,
                phi: 0.0,
            },
            params,
        };
    }

    let step = PI / THETA_SEEDS as f64;
    let seeds: Vec<f64> = (0..=THETA_SEEDS)
        .map(|k| envelope(params, k as f64 * step))
        .collect();

    let mut best: Option<(f64, f64)> = None;
    for k in 0..=THETA_SEEDS {
        let left = if k > 0 {
            seeds[k - 1]
        } else {
            f64::NEG_INFINITY
        };
        let right = if k < THETA_SEEDS {
            seeds[k + 1]
        } else {
            f64::NEG_INFINITY
        };
        if seeds[k] < left || seeds[k] < right {
            continue;
        }
        let lo = k.saturating_sub(1) as f64 * step;
        let hi = ((k + 1).min(THETA_SEEDS) as f64 * step).min(PI);
        let theta = refine_theta(params, lo, hi);
        let value = envelope(params, theta);
        match best {
            Some((_, v)) if value <= v * (1.0 + TIE_TOL) => {}
            _ => best = Some((theta, value)),
        }
    }
    let (theta, value) = best.expect("at least one seed is a local maximum");

    let (x, y) = phase_coefficients(params, theta);
    let mut phi = y.atan2(x);
    if phi < 0.0 {
        phi += PI;
    }
    if phi >= PI {
        phi -= PI;
    }
    BellMaxResult {
        beta_max: value.sqrt(),
        settings: AnalyzerSettings { theta, phi },
        params,
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellMaxSample {
    pub p: f64,
    pub r: f64,
    pub beta_max: f64,
    pub theta_star: f64,
    pub phi_star: f64,
}

impl From<BellMaxResult> for BellMaxSample {
    fn from(m: BellMaxResult) -> Self {
        BellMaxSample {
            p: m.params.p(),
            r: m.params.r(),
            beta_max: m.beta_max,
            theta_star: m.settings.theta,
            phi_star: m.settings.phi,
        }
    }
}

/// `beta_max` over the triangle grid, in grid order.
pub fn beta_max_surface(grid_n: usize) -> Result<Vec<BellMaxSample>> {
    Ok(triangle_grid(grid_n)?
        .into_iter()
        .map(|params| beta_max(params).into())
        .collect())
}

/// A one-parameter path through the noise triangle, indexed by `p`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoisePolicy {
    /// `r = 0`.
    Werner,
    /// `r = 1 - p`.
    Colored,
    /// `r = (1 - p) / 2`: equal white and colored weights.
    Half,
    /// White noise is a fixed fraction `w` of the total noise: `r = (1 - w)(1 - p)`.
    WhiteFraction(f64),
    /// Fixed absolute white-noise weight `w`: `p + r = 1 - w`.
    WhiteWeight(f64),
}

impl NoisePolicy {
    fn check(&self) -> Result<()> {
        match *self {
            NoisePolicy::WhiteFraction(w) | NoisePolicy::WhiteWeight(w)
                if !(0.0..=1.0).contains(&w) =>
            {
                Err(Error::InvalidArgument(format!(
                    "white-noise level {w} outside [0, 1]"
                )))
            }
            _ => Ok(()),
        }
    }

    /// Largest `p` on the path.
    pub fn p_max(&self) -> f64 {
        match *self {
            NoisePolicy::WhiteWeight(w) => 1.0 - w,
            _ => 1.0,
        }
    }

    pub fn params(&self, p: f64) -> Result<NoiseParams> {
        self.check()?;
        let r = match *self {
            NoisePolicy::Werner => 0.0,
            NoisePolicy::Colored => 1.0 - p,
            NoisePolicy::Half => 0.5 * (1.0 - p),
            NoisePolicy::WhiteFraction(w) => (1.0 - w) * (1.0 - p),
            NoisePolicy::WhiteWeight(w) => 1.0 - w - p,
        };
        NoiseParams::new(p, r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AngleSample {
    pub p: f64,
    pub theta_star: f64,
    pub phi_star: f64,
}

/// Maximizing angles along a noise policy, one row per grid value of `p`.
pub fn optimal_angle_curves(policy: NoisePolicy, p_grid: &[f64]) -> Result<Vec<AngleSample>> {
    p_grid
        .iter()
        .map(|&p| {
            let m = beta_max(policy.params(p)?);
            Ok(AngleSample {
                p: m.params.p(),
                theta_star: m.settings.theta,
                phi_star: m.settings.phi,
            })
        })
        .collect()
}

/// Smallest `p` above which `beta_max` exceeds the classical bound along
/// the policy path.
///
/// The path is probed at evenly spaced `p > 0`; the first crossing is then
/// bisected to `1e-12` in `p`. Returns 0 when every probe already violates.
pub fn violation_threshold(policy: NoisePolicy) -> Result<f64> {
    policy.check()?;
    let p_max = policy.p_max();
    if p_max <= 0.0 {
        return Err(Error::NoThreshold(format!(
            "{policy:?} leaves no room for p > 0"
        )));
    }
    let excess = |p: f64| -> f64 {
        let params = policy.params(p).expect("p on the policy path");
        beta_max(params).beta_max - CLASSICAL_BOUND
    };
    let probes: Vec<f64> = (1..=THRESHOLD_PROBES)
        .map(|k| p_max * k as f64 / THRESHOLD_PROBES as f64)
        .collect();
    let values: Vec<f64> = probes.iter().map(|&p| excess(p)).collect();

    if values.iter().all(|&v| v > 0.0) {
        return Ok(0.0);
    }
    let Some(k) = (1..values.len()).find(|&k| values[k - 1] <= 0.0 && values[k] > 0.0) else {
        return Err(Error::NoThreshold(format!(
            "beta_max never exceeds {CLASSICAL_BOUND} along {policy:?}"
        )));
    };
    bisect(excess, probes[k - 1], probes[k], 1e-12, 200)
        .ok_or_else(|| Error::NoThreshold(format!("lost the bracket along {policy:?}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    use proptest::prelude::*;

    fn params(p: f64, r: f64) -> NoiseParams {
        NoiseParams::new(p, r).unwrap()
    }

    fn settings(theta: f64, phi: f64) -> AnalyzerSettings {
        AnalyzerSettings::new(theta, phi).unwrap()
    }

    /// Exhaustive `(θ, φ)` grid evaluating the analytic formula pointwise.
    fn grid_oracle(pr: NoiseParams, n: usize) -> (f64, f64, f64) {
        let mut best = (0.0, 0.0, 0.0);
        for i in 0..n {
            let theta = PI * i as f64 / (n - 1) as f64;
            for j in 0..n {
                let phi = PI * j as f64 / n as f64;
                let b = beta_analytic(pr, settings(theta, phi)).abs();
                if b > best.0 {
                    best = (b, theta, phi);
                }
            }
        }
        best
    }

    #[test]
    fn observable_cases() {
        assert!(observable(0.0).max_abs_diff(&ComplexMat2::pauli_z()) < 1e-15);
        assert!(observable(FRAC_PI_2).max_abs_diff(&ComplexMat2::pauli_x()) < 1e-15);
        for alpha in [0.3, 1.7, -2.2, 5.0] {
            let o = observable(alpha);
            assert_eq!(
                o.hermitian_eigenvalues()
                    .unwrap()
                    .map(|v| (v * 1e12).round() / 1e12),
                [1.0, -1.0]
            );
            assert!(o.trace().norm() < 1e-15);
        }
    }

    #[test]
    fn bell_operator_cases() {
        let b = bell_operator_matrix(settings(FRAC_PI_2, FRAC_PI_4));
        assert!(
            (beta_trace(params(1.0, 0.0), settings(FRAC_PI_2, FRAC_PI_4)).abs() - TSIRELSON_BOUND)
                .abs()
                < 1e-12
        );
        assert!(b.hermitian_deviation() < 1e-15);

        let zz = kron(&ComplexMat2::pauli_z(), &ComplexMat2::pauli_z());
        assert!(bell_operator_matrix(settings(0.0, 0.0)).max_abs_diff(&zz.scale(-2.0)) < 1e-15);

        for (t, f) in [(0.2, 1.1), (2.0, -0.7)] {
            assert!(beta_trace(params(0.0, 0.0), settings(t, f)).abs() < 1e-15);
        }
    }

    #[test]
    fn analytic_examples() {
        for p in [0.0, 0.3, 1.0] {
            let b = beta_analytic(params(p, 0.0), settings(FRAC_PI_2, FRAC_PI_4));
            assert!((b - TSIRELSON_BOUND * p).abs() < 1e-14);
        }
        assert_eq!(beta_analytic(params(0.0, 0.0), settings(0.4, 2.5)), 0.0);
    }

    #[test]
    fn analytic_is_negated_trace() {
        let b = beta_analytic(params(0.4, 0.35), settings(0.9, 2.1));
        let t = beta_trace(params(0.4, 0.35), settings(0.9, 2.1));
        assert!((b + t).abs() < 1e-12);
    }

    #[test]
    fn special_case_examples() {
        let white = beta_special(params(1.0, 0.0), NoiseVariant::White).unwrap();
        assert!((white(FRAC_PI_2, FRAC_PI_4) - TSIRELSON_BOUND).abs() < 1e-14);
        let colored = beta_special(params(0.0, 1.0), NoiseVariant::Colored).unwrap();
        assert_eq!(colored(0.0, 0.0), 2.0);
        let half = beta_special(params(0.5, 0.0), NoiseVariant::White).unwrap();
        for (t, f) in [(0.3, 0.2), (1.9, 2.8)] {
            assert!((half(t, f) - 0.5 * white(t, f)).abs() < 1e-15);
        }
    }

    #[test]
    fn special_case_rejects_wrong_line() {
        assert!(matches!(
            beta_special(params(0.5, 0.2), NoiseVariant::White),
            Err(Error::VariantMismatch { .. })
        ));
        assert!(beta_special(params(0.5, 0.2), NoiseVariant::Colored).is_err());
        assert!(beta_special(params(0.0, 0.0), NoiseVariant::White).is_ok());
    }

    #[test]
    fn max_at_pure_state() {
        let m = beta_max(params(1.0, 0.0));
        assert!((m.beta_max - TSIRELSON_BOUND).abs() < 1e-12);
        assert!(
            (m.settings.theta - FRAC_PI_2).abs() < 1e-9,
            "{:?}",
            m.settings
        );
        assert!(
            (m.settings.phi - FRAC_PI_4).abs() < 1e-9,
            "{:?}",
            m.settings
        );
        assert!(m.violates_chsh());
    }

    #[test]
    fn max_on_werner_line_and_colored_corner() {
        for p in [0.1, 0.5, 0.9] {
            assert!((beta_max(params(p, 0.0)).beta_max - TSIRELSON_BOUND * p).abs() < 1e-12);
        }
        let m = beta_max(params(0.0, 1.0));
        assert!((m.beta_max - 2.0).abs() < 1e-12);
        assert!(m.settings.theta.abs() < 1e-3, "{:?}", m.settings);
        // dense-grid oracle for the colored corner
        let (oracle, theta, _) = grid_oracle(params(0.0, 1.0), 401);
        assert!((oracle - 2.0).abs() < 1e-12);
        assert_eq!(theta, 0.0);
    }

    #[test]
    fn max_of_fully_mixed_state() {
        let m = beta_max(params(0.0, 0.0));
        assert_eq!(m.beta_max, 0.0);
        assert_eq!(m.settings, settings(0.0, 0.0));
    }

    #[test]
    fn max_agrees_with_coarse_grid() {
        for (p, r) in [(0.3, 0.2), (0.6, 0.4), (0.05, 0.9), (0.8, 0.1)] {
            let pr = params(p, r);
            let m = beta_max(pr);
            let (oracle, _, _) = grid_oracle(pr, 600);
            assert!(m.beta_max >= oracle - 1e-12);
            assert!(
                m.beta_max - oracle < 2e-5,
                "{p},{r}: {} vs {oracle}",
                m.beta_max
            );
            let at_argmax = beta_analytic(pr, m.settings).abs();
            assert!((at_argmax - m.beta_max).abs() < 1e-12);
            assert!((0.0..=PI).contains(&m.settings.theta));
            assert!((0.0..PI).contains(&m.settings.phi));
        }
    }

    #[test]
    fn surface_rows() {
        let rows = beta_max_surface(11).unwrap();
        assert_eq!(rows.len(), 66);
        let pure = rows.iter().find(|s| s.p == 1.0).unwrap();
        assert!((pure.beta_max - TSIRELSON_BOUND).abs() < 1e-12);
        for s in &rows {
            if s.p > 0.0 && (s.p + s.r - 1.0).abs() < 1e-12 {
                assert!(s.beta_max > 2.0, "{s:?}");
            }
            if s.r == 0.0 && s.p < FRAC_1_SQRT_2_MINUS {
                assert!(s.beta_max < 2.0, "{s:?}");
            }
        }
    }
    const FRAC_1_SQRT_2_MINUS: f64 = std::f64::consts::FRAC_1_SQRT_2 - 1e-12;

    #[test]
    fn beta_max_nondecreasing_in_r() {
        for p in [0.0, 0.1, 0.33, 0.5, 0.8, 0.95] {
            let mut prev = 0.0;
            for k in 0..50 {
                let r = (1.0 - p) * k as f64 / 49.0;
                let b = beta_max(params(p, r)).beta_max;
                assert!(b >= prev - 1e-12, "p={p} r={r}");
                prev = b;
            }
        }
    }

    #[test]
    fn angle_curves() {
        let grid: Vec<f64> = (1..=20).map(|k| k as f64 / 20.0).collect();
        for row in optimal_angle_curves(NoisePolicy::Werner, &grid).unwrap() {
            assert!((row.theta_star - FRAC_PI_2).abs() < 1e-9, "{row:?}");
            assert!((row.phi_star - FRAC_PI_4).abs() < 1e-9, "{row:?}");
        }
        let colored = optimal_angle_curves(NoisePolicy::Colored, &grid).unwrap();
        let last = colored.last().unwrap();
        assert!((last.theta_star - FRAC_PI_2).abs() < 1e-9);
        assert!((last.phi_star - FRAC_PI_4).abs() < 1e-9);
        let half = optimal_angle_curves(NoisePolicy::Half, &grid).unwrap();
        let differing = colored
            .iter()
            .zip(&half)
            .filter(|(c, h)| (c.theta_star - h.theta_star).abs() > 1e-3)
            .count();
        assert!(differing >= grid.len() / 2, "{differing}");
        assert!(optimal_angle_curves(NoisePolicy::Werner, &[1.5]).is_err());
    }

    #[test]
    fn thresholds() {
        let werner = violation_threshold(NoisePolicy::Werner).unwrap();
        assert!((werner - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-9);
        assert_eq!(violation_threshold(NoisePolicy::Colored).unwrap(), 0.0);
        let weight = violation_threshold(NoisePolicy::WhiteWeight(0.1)).unwrap();
        assert!((0.4..0.6).contains(&weight), "{weight}");
        assert!(matches!(
            violation_threshold(NoisePolicy::WhiteWeight(0.5)),
            Err(Error::NoThreshold(_))
        ));
        assert!(violation_threshold(NoisePolicy::WhiteFraction(1.5)).is_err());
    }

    #[test]
    fn canonical_settings() {
        let s = settings(-FRAC_PI_2, 7.0).canonical();
        assert!((s.theta - 1.5 * PI).abs() < 1e-15);
        assert!((s.phi - (7.0 - 2.0 * PI)).abs() < 1e-15);
        assert!(AnalyzerSettings::new(f64::INFINITY, 0.0).is_err());
    }

    proptest! {
        #[test]
        fn analytic_magnitude_matches_trace(p in 0.0f64..=1.0, u in 0.0f64..=1.0,
                                            theta in -7.0f64..7.0, phi in -7.0f64..7.0) {
            let pr = params(p, u * (1.0 - p));
            let s = settings(theta, phi);
            prop_assert!((beta_analytic(pr, s).abs() - beta_trace(pr, s).abs()).abs() < 1e-12);
        }

        #[test]
        fn special_forms_match_general(p in 0.0f64..=1.0, theta in -7.0f64..7.0, phi in -7.0f64..7.0) {
            let w = params(p, 0.0);
            let white = beta_special(w, NoiseVariant::White).unwrap();
            prop_assert!((white(theta, phi) - beta_analytic(w, settings(theta, phi))).abs() < 1e-14);
            let c = params(p, 1.0 - p);
            let colored = beta_special(c, NoiseVariant::Colored).unwrap();
            prop_assert!((colored(theta, phi) - beta_analytic(c, settings(theta, phi))).abs() < 1e-14);
        }

        #[test]
        fn max_dominates_probes(p in 0.0f64..=1.0, u in 0.0f64..=1.0,
                                theta in -7.0f64..7.0, phi in -7.0f64..7.0) {
            let pr = params(p, u * (1.0 - p));
            let m = beta_max(pr);
            prop_assert!(m.beta_max <= TSIRELSON_BOUND + 1e-9);
            prop_assert!(m.beta_max >= beta_analytic(pr, settings(theta, phi)).abs() - 1e-9);
        }

        #[test]
        fn slope_matches_finite_difference(p in 0.0f64..=1.0, u in 0.0f64..=1.0, theta in 0.01f64..3.1) {
            let pr = params(p, u * (1.0 - p));
            let h = 1e-6;
            let fd = (envelope(pr, theta + h) - envelope(pr, theta - h)) / (2.0 * h);
            prop_assert!((fd - envelope_slope(pr, theta)).abs() < 1e-6);
        }
    }
}
