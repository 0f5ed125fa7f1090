//! Separability of the noise family: partial transpose and majorization.

use crate::linalg::{hermitian_eigenvalues, Subsystem};
use crate::roots::bisect;
use crate::state::{build_rho_cw, NoiseParams};

/// Slack on partial-transpose eigenvalues and majorization partial sums.
pub const VERDICT_TOL: f64 = 1e-12;

/// Spectrum of the partially transposed state, nonincreasing.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PptSpectrum {
    pub lambda_t: [f64; 4],
}

impl PptSpectrum {
    pub fn min(&self) -> f64 {
        self.lambda_t[3]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Criterion {
    Ppt,
    Majorization,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparabilityVerdict {
    pub separable: bool,
    /// `1 - 3p - r`; its sign decides separability for this family.
    pub margin: f64,
    pub criterion: Criterion,
}

/// `1 - 3p - r`.
pub fn ppt_margin(params: NoiseParams) -> f64 {
    1.0 - 3.0 * params.p() - params.r()
}

pub fn ppt_eigenvalues_closed_form(params: NoiseParams) -> PptSpectrum {
    let (p, r) = (params.p(), params.r());
    let top = 0.25 * (1.0 + p + r);
    PptSpectrum {
        lambda_t: [top, top, 0.25 * (1.0 + p - r), 0.25 * ppt_margin(params)],
    }
}

/// Separable iff the smallest partial-transpose eigenvalue is non-negative.
/// The boundary `3p + r = 1` counts as separable.
pub fn is_separable_ppt(params: NoiseParams) -> SeparabilityVerdict {
    let margin = ppt_margin(params);
    SeparabilityVerdict {
        separable: ppt_eigenvalues_closed_form(params).min() >= -VERDICT_TOL,
        margin,
        criterion: Criterion::Ppt,
    }
}

/// Majorization check `λ(ρ) ≺ λ(ρ_A)` and `λ(ρ) ≺ λ(ρ_B)`.
///
/// Both spectra are computed numerically from the density matrix and its
/// reduced states; the reduced spectrum is padded with zeros to length 4.
/// A partial-sum excess beyond [`VERDICT_TOL`] means the state is entangled.
pub fn majorization_test(params: NoiseParams) -> SeparabilityVerdict {
    let rho = build_rho_cw(params);
    let global = rho.eigenvalues();
    let majorized = [Subsystem::A, Subsystem::B].into_iter().all(|traced| {
        let [a, b] = rho
            .reduced(traced)
            .hermitian_eigenvalues()
            .expect("reduced state is Hermitian");
        is_majorized_by(&global, &[a, b, 0.0, 0.0])
    });
    SeparabilityVerdict {
        separable: majorized,
        margin: ppt_margin(params),
        criterion: Criterion::Majorization,
    }
}

/// `x ≺ y` for nonincreasing vectors of equal length: every partial sum of
/// `x` stays below that of `y`, with equal totals.
pub fn is_majorized_by(x: &[f64], y: &[f64]) -> bool {
    assert_eq!(x.len(), y.len());
    let (mut sx, mut sy) = (0.0, 0.0);
    for (k, (a, b)) in x.iter().zip(y).enumerate() {
        sx += a;
        sy += b;
        if k + 1 == x.len() {
            return (sx - sy).abs() <= VERDICT_TOL;
        }
        if sx - sy > VERDICT_TOL {
            return false;
        }
    }
    true
}

/// Numeric partial-transpose spectrum, for either qubit.
pub fn ppt_eigenvalues_numeric(params: NoiseParams, which: Subsystem) -> PptSpectrum {
    let m = crate::linalg::partial_transpose(build_rho_cw(params).matrix(), which);
    PptSpectrum {
        lambda_t: hermitian_eigenvalues(&m).expect("partial transpose stays Hermitian"),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    pub r: f64,
    /// Set when `p > 1/3`: the line `3p + r = 1` has left the valid triangle
    /// and every valid `r` is entangled.
    pub exits_domain: bool,
}

/// Colored-noise weight on the boundary `3p + r = 1`, clamped to the triangle.
pub fn separability_boundary(p: f64) -> BoundaryPoint {
    let r = 1.0 - 3.0 * p;
    if r < 0.0 {
        BoundaryPoint {
            r: 0.0,
            exits_domain: true,
        }
    } else {
        BoundaryPoint {
            r: r.min(1.0 - p),
            exits_domain: false,
        }
    }
}

/// Locates the boundary at fixed `p` by bisecting the partial-transpose
/// margin over `r ∈ [0, 1 - p]`. `None` if the margin keeps one sign.
pub fn boundary_by_bisection(p: f64, tol: f64) -> Option<f64> {
    let margin = |r: f64| ppt_margin(NoiseParams::new(p, r).expect("r within [0, 1-p]"));
    bisect(margin, 0.0, 1.0 - p, tol, 200)
}

/// Locates the Werner-line endpoint (`r = 0`) of the boundary by bisection in `p`.
pub fn werner_boundary_by_bisection(tol: f64) -> Option<f64> {
    bisect(
        |p| ppt_margin(NoiseParams::werner(p).expect("p within [0, 1]")),
        0.0,
        1.0,
        tol,
        200,
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeparabilitySample {
    pub p: f64,
    pub r: f64,
    pub separable: bool,
    pub margin: f64,
    pub lambda_t_min: f64,
}

pub fn separability_region(grid_n: usize) -> crate::Result<Vec<SeparabilitySample>> {
    Ok(crate::state::triangle_grid(grid_n)?
        .into_iter()
        .map(|params| {
            let verdict = is_separable_ppt(params);
            SeparabilitySample {
                p: params.p(),
                r: params.r(),
                separable: verdict.separable,
                margin: verdict.margin,
                lambda_t_min: ppt_eigenvalues_closed_form(params).min(),
            }
        })
        .collect())
}
