//! The two directions between SO(3) and SU(2), the su(2) ≅ ℝ³ coordinate map,
//! and checks that the state-level and group-level diagrams commute.

use num_complex::Complex64;

use crate::bloch::{bloch_to_density_with_tolerance, BlochVector, DensityOperator};
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::pauli::{dot_sigma, pauli_traces, paulis};
use crate::so3::{self, axis_angle_from_rotation, rotation_from_axis_angle, AxisAngle, Rotation3};
use crate::su2::{self, conjugate, unitary_from_axis_angle, Unitary2};
use crate::DEFAULT_TOL;

/// `φ(R) = U(n̂, α)` with `(n̂, α)` the canonical axis-angle of `R` (α ∈ [0, π]).
pub fn phi(r: &Rotation3) -> Unitary2 {
    unitary_from_axis_angle(&axis_angle_from_rotation(r))
}

/// `R_kj = ½ Tr(U σ_j U* σ_k)`.
///
/// Quadratic in `U`, so `U` and `−U` give bit-identical output. The result is
/// checked to be orthogonal with determinant +1; a failure points at a phase
/// problem upstream.
pub fn phi_inverse(u: &Unitary2) -> Result<Rotation3> {
    let m = u.matrix();
    let m_adj = m.adjoint();
    let mut r = [[0.0; 3]; 3];
    for (j, sigma_j) in paulis().iter().enumerate() {
        let w = &(m * sigma_j) * &m_adj;
        let t = pauli_traces(&w);
        for k in 0..3 {
            // + 0.0 folds a possible -0.0 into +0.0
            r[k][j] = t[k].re / 2.0 + 0.0;
        }
    }
    Rotation3::new(r).map_err(|e| Error::Domain(format!("U σ U* did not yield a proper rotation: {e}")))
}

/// An element `u = i r⃗·σ⃗` of su(2), stored by its coordinates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Su2AlgebraElement {
    pub vector: [f64; 3],
}

impl Su2AlgebraElement {
    pub fn new(vector: [f64; 3]) -> Self {
        Self { vector }
    }

    /// `i r⃗·σ⃗`, anti-Hermitian by construction.
    pub fn matrix(&self) -> ComplexMatrix {
        dot_sigma(&self.vector).scale(Complex64::new(0.0, 1.0))
    }

    /// Reads coordinates back from an anti-Hermitian traceless 2×2 matrix.
    pub fn from_matrix(u: &ComplexMatrix) -> Result<Self> {
        if u.shape() != (2, 2) {
            return Err(Error::Domain(format!("expected 2x2, got {:?}", u.shape())));
        }
        let anti = (u + &u.adjoint()).max_abs();
        let tr = u.trace()?.norm();
        if anti > DEFAULT_TOL || tr > DEFAULT_TOL {
            return Err(Error::Domain("matrix is not in su(2)".into()));
        }
        // Tr(u σ_k) = 2i r_k
        let t = pauli_traces(u);
        Ok(Self::new(t.map(|z| z.im / 2.0)))
    }

    /// `det(i r⃗·σ⃗) = ‖r⃗‖²`
    pub fn determinant(&self) -> f64 {
        self.vector.iter().map(|x| x * x).sum()
    }
}

/// `Ψ: i r⃗·σ⃗ ↦ r⃗`
pub fn psi(u: &Su2AlgebraElement) -> BlochVector {
    BlochVector::from_array(u.vector)
}

pub fn psi_inverse(r: BlochVector) -> Su2AlgebraElement {
    Su2AlgebraElement::new(r.to_array())
}

/// `T_U: u ↦ U u U*`
pub fn adjoint_action(u: &Unitary2, x: &Su2AlgebraElement) -> Su2AlgebraElement {
    let m = u.matrix();
    let out = &(m * &x.matrix()) * &m.adjoint();
    let t = pauli_traces(&out);
    Su2AlgebraElement::new(t.map(|z| z.im / 2.0))
}

/// One end of a commuting-diagram check.
#[derive(Clone, Debug, PartialEq)]
pub enum DiagramPoint {
    Density(DensityOperator),
    Bloch(BlochVector),
    Rotation(Rotation3),
}

#[derive(Clone, Debug, PartialEq)]
pub struct DiagramReport {
    pub max_deviation: f64,
    pub commutes: bool,
    pub path_a_result: DiagramPoint,
    pub path_b_result: DiagramPoint,
}

/// Rotating the vector then preparing the state (path A) against preparing
/// the state then conjugating by `U(n̂, α)` (path B).
pub fn verify_state_diagram(r: BlochVector, aa: &AxisAngle, tol: f64) -> Result<DiagramReport> {
    let rotated = so3::apply(&rotation_from_axis_angle(aa), r);
    let path_a = bloch_to_density_with_tolerance(rotated, tol)?;
    let path_b = conjugate(&unitary_from_axis_angle(aa), &bloch_to_density_with_tolerance(r, tol)?);
    let max_deviation = path_a.matrix().max_abs_diff(path_b.matrix());
    Ok(DiagramReport {
        max_deviation,
        commutes: max_deviation <= tol,
        path_a_result: DiagramPoint::Density(path_a),
        path_b_result: DiagramPoint::Density(path_b),
    })
}

/// `φ⁻¹(U₁⋯U_k)` (path A) against `R₁⋯R_k` (path B).
pub fn verify_group_diagram(word: &[AxisAngle], tol: f64) -> Result<DiagramReport> {
    if word.is_empty() {
        return Err(Error::Domain("group word must be nonempty".into()));
    }
    let (u, r) = word
        .iter()
        .fold((Unitary2::identity(), Rotation3::IDENTITY), |(u, r), aa| {
            (
                su2::compose(&u, &unitary_from_axis_angle(aa)),
                so3::compose(&r, &rotation_from_axis_angle(aa)),
            )
        });
    let path_a = phi_inverse(&u)?;
    let max_deviation = path_a.max_abs_diff(&r);
    Ok(DiagramReport {
        max_deviation,
        commutes: max_deviation <= tol,
        path_a_result: DiagramPoint::Rotation(path_a),
        path_b_result: DiagramPoint::Rotation(r),
    })
}

/// `φ(φ⁻¹(U))` lands on `U` or `−U`; returns the distance to the nearer one.
pub fn double_cover_distance(u: &Unitary2) -> Result<f64> {
    let back = phi(&phi_inverse(u)?);
    let plus = back.matrix().max_abs_diff(u.matrix());
    let minus = back.matrix().max_abs_diff(u.negated().matrix());
    Ok(plus.min(minus))
}

/// `φ⁻¹(U)` and `φ⁻¹(−U)` compared bit for bit.
pub fn double_cover_is_exact(u: &Unitary2) -> Result<bool> {
    let a = phi_inverse(u)?;
    let b = phi_inverse(&u.negated())?;
    Ok(a.matrix()
        .iter()
        .flatten()
        .zip(b.matrix().iter().flatten())
        .all(|(x, y)| x.to_bits() == y.to_bits()))
}
