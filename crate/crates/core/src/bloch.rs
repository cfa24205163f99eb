//! Bloch vectors, pure states and qubit density operators.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::hermitian_eig;
use crate::matrix::ComplexMatrix;
use crate::pauli::{dot_sigma, pauli_traces};
use crate::DEFAULT_TOL;

/// A point `r⃗ = (x1, x2, x3)` of physical space.
///
/// Any finite vector is representable; only vectors in the closed unit ball
/// correspond to states.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl BlochVector {
    pub const ORIGIN: BlochVector = BlochVector::new(0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }

    pub fn norm(self) -> f64 {
        self.to_array().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(self, other: BlochVector) -> f64 {
        let (a, b) = (self.to_array(), other.to_array());
        (0..3).map(|k| (a[k] - b[k]).abs()).fold(0.0, f64::max)
    }
}

/// Polar angle `theta ∈ [0, π]` and azimuth `phi ∈ [0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalAngles {
    theta: f64,
    phi: f64,
}

impl SphericalAngles {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(Error::Domain(format!("theta = {theta} outside [0, π]")));
        }
        if !(0.0..2.0 * PI).contains(&phi) {
            return Err(Error::Domain(format!("phi = {phi} outside [0, 2π)")));
        }
        Ok(Self { theta, phi })
    }

    pub fn theta(self) -> f64 {
        self.theta
    }

    pub fn phi(self) -> f64 {
        self.phi
    }
}

/// `(sin θ cos φ, sin θ sin φ, cos θ)`
pub fn angles_to_bloch(a: SphericalAngles) -> BlochVector {
    let (st, ct) = a.theta.sin_cos();
    let (sp, cp) = a.phi.sin_cos();
    BlochVector::new(st * cp, st * sp, ct)
}

/// `cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩`
pub fn angles_to_pure_state(a: SphericalAngles) -> [Complex64; 2] {
    let (s, c) = (a.theta / 2.0).sin_cos();
    [Complex64::new(c, 0.0), Complex64::from_polar(s, a.phi)]
}

/// A 2×2 Hermitian, unit-trace, positive semidefinite matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        if matrix.shape() != (2, 2) {
            return Err(Error::NonState(format!("expected 2x2, got {:?}", matrix.shape())));
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let herm = matrix.hermiticity_defect();
        if herm > tol {
            return Err(Error::NonState(format!("not Hermitian (defect {herm:e})")));
        }
        let tr = matrix.trace()?;
        if (tr - 1.0).norm() > tol {
            return Err(Error::NonState(format!("trace {tr} != 1")));
        }
        let eig = hermitian_eig(&matrix)?;
        let min = eig.eigenvalues[1];
        if min < -tol {
            return Err(Error::NonState(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// Skips validation; callers guarantee the invariants by construction.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        debug_assert_eq!(matrix.shape(), (2, 2));
        Self { matrix }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `|ψ⟩⟨ψ|`
    pub fn from_pure_state(psi: &[Complex64; 2]) -> Result<Self> {
        let norm = (psi[0].norm_sqr() + psi[1].norm_sqr()).sqrt();
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::NonState(format!("state vector has norm {norm}")));
        }
        let data = (0..4).map(|k| psi[k / 2] * psi[k % 2].conj()).collect();
        Ok(Self::from_matrix_unchecked(ComplexMatrix::from_vec(2, 2, data)?))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PurityKind {
    Pure,
    Mixed,
}

/// `Tr ρ²` together with the pure/mixed verdict.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Purity {
    pub value: f64,
    pub kind: PurityKind,
}

/// `ρ = ½(I + r⃗·σ⃗)`.
///
/// Vectors with `‖r‖ ∈ (1, 1 + tol]` are pulled back onto the sphere; larger
/// ones are rejected.
pub fn bloch_to_density(r: BlochVector) -> Result<DensityOperator> {
    bloch_to_density_with_tolerance(r, DEFAULT_TOL)
}

pub fn bloch_to_density_with_tolerance(r: BlochVector, tol: f64) -> Result<DensityOperator> {
    let v = r.to_array();
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFinite);
    }
    let norm = r.norm();
    if norm > 1.0 + tol {
        return Err(Error::NonState(format!("Bloch vector norm {norm} exceeds 1")));
    }
    let v = if norm > 1.0 { v.map(|x| x / norm) } else { v };
    let rho = (&ComplexMatrix::identity(2) + &dot_sigma(&v)).scale_real(0.5);
    Ok(DensityOperator::from_matrix_unchecked(rho))
}

/// `x_k = Tr(ρ σ_k)`.
pub fn density_to_bloch(rho: &DensityOperator) -> BlochVector {
    let t = pauli_traces(&rho.matrix);
    BlochVector::new(t[0].re, t[1].re, t[2].re)
}

/// Purity with the default band: `Pure` iff `|Tr ρ² − 1| ≤ 1e-9`.
pub fn purity(rho: &DensityOperator) -> Purity {
    purity_with_tolerance(rho, DEFAULT_TOL)
}

pub fn purity_with_tolerance(rho: &DensityOperator, tol: f64) -> Purity {
    let value = (&rho.matrix * &rho.matrix).trace().expect("2x2").re;
    let kind = if (value - 1.0).abs() <= tol {
        PurityKind::Pure
    } else {
        PurityKind::Mixed
    };
    Purity { value, kind }
}
