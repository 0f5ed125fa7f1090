//! The colored/white noise state family, its spectrum and entropy.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, partial_trace, ComplexMat2, ComplexMat4, Subsystem};

/// Slack allowed on the parameter constraints before a value is rejected.
/// Values within the slack are snapped onto the boundary.
pub const PARAM_TOL: f64 = 1e-12;

/// Tolerance on the trace, Hermiticity and positivity of a density matrix.
pub const STATE_TOL: f64 = 1e-12;

/// Weights of the pure `|Φ+>` component (`p`) and the colored noise (`r`).
/// The white-noise weight `1 - p - r` is derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseParams {
    p: f64,
    r: f64,
}

impl NoiseParams {
    pub fn new(p: f64, r: f64) -> Result<Self> {
        let invalid = |constraint| Err(Error::InvalidParams { p, r, constraint });
        if !p.is_finite() || !r.is_finite() {
            return invalid("p and r must be finite");
        }
        if !(-PARAM_TOL..=1.0 + PARAM_TOL).contains(&p) {
            return invalid("0 <= p <= 1");
        }
        if r < -PARAM_TOL {
            return invalid("r >= 0");
        }
        if p + r > 1.0 + PARAM_TOL {
            return invalid("p + r <= 1");
        }
        let p = p.clamp(0.0, 1.0);
        let r = r.clamp(0.0, 1.0 - p);
        Ok(NoiseParams { p, r })
    }

    /// Werner state: no colored noise.
    pub fn werner(p: f64) -> Result<Self> {
        Self::new(p, 0.0)
    }

    /// No white noise: `r = 1 - p`.
    pub fn colored(p: f64) -> Result<Self> {
        Self::new(p, 1.0 - p)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn white(&self) -> f64 {
        1.0 - self.p - self.r
    }
}

/// A validated two-qubit density matrix in the computational basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitState {
    matrix: ComplexMat4,
}

impl TwoQubitState {
    /// Checks Hermiticity, unit trace and positivity (all within [`STATE_TOL`]).
    pub fn new(matrix: ComplexMat4) -> Result<Self> {
        let spectrum = hermitian_eigenvalues(&matrix)?;
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "trace is {trace}, expected 1"
            )));
        }
        if spectrum[3] < -STATE_TOL {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {}",
                spectrum[3]
            )));
        }
        Ok(TwoQubitState { matrix })
    }

    pub fn matrix(&self) -> &ComplexMat4 {
        &self.matrix
    }

    /// Numeric spectrum, nonincreasing.
    pub fn eigenvalues(&self) -> [f64; 4] {
        hermitian_eigenvalues(&self.matrix).expect("density matrix is Hermitian")
    }

    /// Reduced state of the qubit that remains after tracing out `traced`.
    pub fn reduced(&self, traced: Subsystem) -> ComplexMat2 {
        partial_trace(&self.matrix, traced)
    }
}

/// Bell states `Φ+, Φ-, Ψ+, Ψ-` as computational-basis amplitude vectors.
pub fn bell_states() -> [[Complex64; 4]; 4] {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let z = Complex64::new(0.0, 0.0);
    [[h, z, z, h], [h, z, z, -h], [z, h, h, z], [z, h, -h, z]]
}

/// Coefficients of the state on the Bell-state projectors.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BellWeights {
    pub phi_plus: f64,
    pub phi_minus: f64,
    pub psi_plus: f64,
    pub psi_minus: f64,
}

impl BellWeights {
    pub fn as_array(&self) -> [f64; 4] {
        [self.phi_plus, self.phi_minus, self.psi_plus, self.psi_minus]
    }

    /// `Σ_k w_k |B_k><B_k|`.
    pub fn reconstruct(&self) -> ComplexMat4 {
        bell_states()
            .iter()
            .zip(self.as_array())
            .fold(ComplexMat4::zeros(), |acc, (v, w)| {
                acc + ComplexMat4::outer(v).scale(w)
            })
    }
}

/// Density matrix of the family, built from its three components.
pub fn build_rho_cw(params: NoiseParams) -> TwoQubitState {
    let [phi_plus, ..] = bell_states();
    let pure = ComplexMat4::outer(&phi_plus).scale(params.p());
    let colored = ComplexMat4::diag([0.5, 0.0, 0.0, 0.5]).scale(params.r());
    let white = ComplexMat4::identity().scale(0.25 * params.white());
    TwoQubitState {
        matrix: pure + colored + white,
    }
}

/// Spectrum in Bell-basis order: `((1+3p+r)/4, (1-p+r)/4, (1-p-r)/4, (1-p-r)/4)`.
/// This order is also nonincreasing.
pub fn eigenvalues_closed_form(params: NoiseParams) -> [f64; 4] {
    let (p, r) = (params.p(), params.r());
    let degenerate = 0.25 * (1.0 - p - r);
    [
        0.25 * (1.0 + 3.0 * p + r),
        0.25 * (1.0 - p + r),
        degenerate,
        degenerate,
    ]
}

pub fn bell_decomposition(params: NoiseParams) -> BellWeights {
    let [phi_plus, phi_minus, psi_plus, psi_minus] = eigenvalues_closed_form(params);
    BellWeights {
        phi_plus,
        phi_minus,
        psi_plus,
        psi_minus,
    }
}

/// `-Σ λ log2 λ`. Values down to `-STATE_TOL` are treated as zero.
pub fn entropy_of_spectrum(spectrum: &[f64]) -> f64 {
    let s: f64 = spectrum
        .iter()
        .map(|&l| if l < STATE_TOL { 0.0 } else { -l * l.log2() })
        .sum();
    s.max(0.0)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(params: NoiseParams) -> f64 {
    entropy_of_spectrum(&eigenvalues_closed_form(params))
}

/// Uniform grid over the closed triangle `p, r >= 0, p + r <= 1`.
///
/// Row order is lexicographic in `(i, j)` with `p = i/(n-1)`, `r = j/(n-1)`;
/// points outside the triangle are skipped, so rows are ragged.
pub fn triangle_grid(grid_n: usize) -> Result<Vec<NoiseParams>> {
    if grid_n < 2 {
        return Err(Error::InvalidArgument(format!(
            "grid_n must be >= 2, got {grid_n}"
        )));
    }
    let step = 1.0 / (grid_n - 1) as f64;
    let mut points = Vec::with_capacity(grid_n * (grid_n + 1) / 2);
    for i in 0..grid_n {
        for j in 0..grid_n - i {
            points.push(NoiseParams::new(i as f64 * step, j as f64 * step)?);
        }
    }
    Ok(points)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropySample {
    pub p: f64,
    pub r: f64,
    pub entropy: f64,
}

pub fn entropy_surface(grid_n: usize) -> Result<Vec<EntropySample>> {
    Ok(triangle_grid(grid_n)?
        .into_iter()
        .map(|params| EntropySample {
            p: params.p(),
            r: params.r(),
            entropy: von_neumann_entropy(params),
        })
        .collect())
}
