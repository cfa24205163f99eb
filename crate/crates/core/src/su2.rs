//! SU(2): the half-angle exponential, its logarithm, and state conjugation.

use num_complex::Complex64;

use crate::bloch::DensityOperator;
use crate::error::{Error, Result};
use crate::matrix::ComplexMatrix;
use crate::pauli::{dot_sigma, pauli_traces};
use crate::so3::AxisAngle;
use crate::DEFAULT_TOL;

/// A 2×2 unitary with determinant exactly 1 (within tolerance).
#[derive(Clone, Debug, PartialEq)]
pub struct Unitary2 {
    matrix: ComplexMatrix,
}

impl Unitary2 {
    /// Rejects matrices that are unitary but carry a global phase
    /// (`det U = e^{iλ}`, `λ ≠ 0`); see [`normalize_phase`].
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOL)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        check_unitary(&matrix, tol)?;
        let det = matrix.determinant()?;
        if (det - 1.0).norm() > tol {
            return Err(Error::Domain(format!("det U = {det}, expected 1")));
        }
        Ok(Self { matrix })
    }

    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix) -> Self {
        Self { matrix }
    }

    pub fn identity() -> Self {
        Self {
            matrix: ComplexMatrix::identity(2),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// `U*`, again in SU(2).
    pub fn adjoint(&self) -> Unitary2 {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// `−U`, negated exactly.
    pub fn negated(&self) -> Unitary2 {
        Self { matrix: -&self.matrix }
    }
}

fn check_unitary(m: &ComplexMatrix, tol: f64) -> Result<()> {
    if m.shape() != (2, 2) {
        return Err(Error::Domain(format!("expected 2x2, got {:?}", m.shape())));
    }
    if !m.is_finite() {
        return Err(Error::NonFinite);
    }
    let defect = m.unitarity_defect();
    if defect > tol {
        return Err(Error::Domain(format!("matrix is not unitary (defect {defect:e})")));
    }
    Ok(())
}

/// Divides a unitary by the principal square root of its determinant.
pub fn normalize_phase(m: &ComplexMatrix) -> Result<Unitary2> {
    check_unitary(m, DEFAULT_TOL)?;
    let det = m.determinant()?;
    let root = Complex64::from_polar(1.0, det.arg() / 2.0);
    Ok(Unitary2 {
        matrix: m.scale(root.conj()),
    })
}

/// `U(n̂, α) = cos(α/2) I − i sin(α/2) n̂·σ⃗`.
pub fn unitary_from_axis_angle(aa: &AxisAngle) -> Unitary2 {
    let (s, c) = (aa.angle() / 2.0).sin_cos();
    let ns = dot_sigma(&aa.axis());
    let matrix = &ComplexMatrix::identity(2).scale_real(c) + &ns.scale(Complex64::new(0.0, -s));
    Unitary2 { matrix }
}

/// Logarithm onto `α ∈ [0, 2π]`.
///
/// `U = a₀ I − i b⃗·σ⃗` with `a₀ = Re Tr U / 2` and `b_k = −Im Tr(U σ_k) / 2`;
/// then `α = 2 atan2(‖b‖, a₀)` and `n̂ = b / ‖b‖`. When `‖b‖` vanishes the
/// axis is `ẑ`, so `I ↦ (ẑ, 0)` and `−I ↦ (ẑ, 2π)`.
pub fn axis_angle_from_unitary(u: &Unitary2) -> AxisAngle {
    let a0 = u.matrix.trace().expect("2x2").re / 2.0;
    let t = pauli_traces(&u.matrix);
    let b = t.map(|z| -z.im / 2.0);
    let sin_half = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    let angle = 2.0 * sin_half.atan2(a0);
    if sin_half < 1e-14 {
        return AxisAngle::from_parts_unchecked([0.0, 0.0, 1.0], angle);
    }
    AxisAngle::from_parts_unchecked(b.map(|x| x / sin_half), angle)
}

/// `Ua · Ub`
pub fn compose(ua: &Unitary2, ub: &Unitary2) -> Unitary2 {
    Unitary2 {
        matrix: &ua.matrix * &ub.matrix,
    }
}

/// `ρ′ = U ρ U*`
pub fn conjugate(u: &Unitary2, rho: &DensityOperator) -> DensityOperator {
    let m = &(&u.matrix * rho.matrix()) * &u.matrix.adjoint();
    DensityOperator::from_matrix_unchecked(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{bloch_to_density, purity, BlochVector};
    use crate::linalg::expm_taylor;
    use crate::matrix::{I, ZERO};
    use crate::sampling;
    use proptest::prelude::*;
    use std::f64::consts::{FRAC_PI_2, PI, TAU};

    const X: [f64; 3] = [1.0, 0.0, 0.0];
    const Z: [f64; 3] = [0.0, 0.0, 1.0];

    #[test]
    fn zero_angle_is_identity() {
        let u = unitary_from_axis_angle(&AxisAngle::new([0.0, 0.6, 0.8], 0.0).unwrap());
        assert_eq!(u, Unitary2::identity());
    }

    #[test]
    fn z_rotation_is_diagonal_phase() {
        let alpha = 1.234;
        let u = unitary_from_axis_angle(&AxisAngle::new(Z, alpha).unwrap());
        let expected = ComplexMatrix::from_diagonal(&[
            Complex64::from_polar(1.0, -alpha / 2.0),
            Complex64::from_polar(1.0, alpha / 2.0),
        ]);
        assert!(u.matrix().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn closed_form_matches_series() {
        let mut rng = sampling::seeded_rng(21);
        for _ in 0..200 {
            let aa = sampling::axis_angle(&mut rng);
            let gen = dot_sigma(&aa.axis()).scale(Complex64::new(0.0, -aa.angle() / 2.0));
            let series = expm_taylor(&gen, 40).unwrap();
            assert!(unitary_from_axis_angle(&aa).matrix().approx_eq(&series, 1e-10));
        }
    }

    #[test]
    fn validation_rejects_phase_and_non_unitary() {
        let phased = ComplexMatrix::identity(2).scale(I);
        assert!(matches!(Unitary2::new(phased.clone()), Err(Error::Domain(_))));
        assert!(Unitary2::new(ComplexMatrix::identity(2).scale_real(2.0)).is_err());
        assert!(Unitary2::new(ComplexMatrix::identity(3)).is_err());
        // -I has determinant 1 and is accepted
        assert!(Unitary2::new(ComplexMatrix::identity(2).scale_real(-1.0)).is_ok());
        let fixed = normalize_phase(&phased).unwrap();
        assert!((fixed.matrix().determinant().unwrap() - 1.0).norm() < 1e-15);
    }

    #[test]
    fn logarithm_examples() {
        assert_eq!(axis_angle_from_unitary(&Unitary2::identity()), AxisAngle::IDENTITY);

        let minus = Unitary2::identity().negated();
        let aa = axis_angle_from_unitary(&minus);
        assert_eq!(aa.axis(), Z);
        assert_eq!(aa.angle(), TAU);
        assert!(unitary_from_axis_angle(&aa).matrix().approx_eq(minus.matrix(), 1e-15));

        let h = Complex64::from_polar(1.0, PI / 4.0);
        let u = Unitary2::new(ComplexMatrix::from_diagonal(&[h.conj(), h])).unwrap();
        let aa = axis_angle_from_unitary(&u);
        assert!((aa.axis()[2] - 1.0).abs() < 1e-15);
        assert!((aa.angle() - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn logarithm_distinguishes_sign() {
        let mut rng = sampling::seeded_rng(22);
        for _ in 0..200 {
            let u = sampling::su2(&mut rng);
            for v in [u.clone(), u.negated()] {
                let back = unitary_from_axis_angle(&axis_angle_from_unitary(&v));
                assert!(back.matrix().approx_eq(v.matrix(), 1e-12));
            }
        }
    }

    #[test]
    fn bit_flip_on_ground_state() {
        let u = unitary_from_axis_angle(&AxisAngle::new(X, PI).unwrap());
        let rho = bloch_to_density(BlochVector::new(0.0, 0.0, 1.0)).unwrap();
        let flipped = conjugate(&u, &rho);
        let expected = ComplexMatrix::from_diagonal(&[ZERO, Complex64::new(1.0, 0.0)]);
        assert!(flipped.matrix().approx_eq(&expected, 1e-15));
    }

    #[test]
    fn conjugate_by_identity() {
        let rho = bloch_to_density(BlochVector::new(0.2, 0.3, -0.4)).unwrap();
        assert_eq!(conjugate(&Unitary2::identity(), &rho), rho);
    }

    proptest! {
        #[test]
        fn exponential_output_in_su2(seed in any::<u64>()) {
            let mut rng = sampling::seeded_rng(seed);
            let u = unitary_from_axis_angle(&sampling::axis_angle(&mut rng));
            prop_assert!(u.matrix().unitarity_defect() <= 1e-12);
            prop_assert!((u.matrix().determinant().unwrap() - 1.0).norm() <= 1e-12);
        }

        #[test]
        fn group_closure(seed in any::<u64>()) {
            let mut rng = sampling::seeded_rng(seed);
            let w = compose(&sampling::su2(&mut rng), &sampling::su2(&mut rng));
            prop_assert!(Unitary2::with_tolerance(w.into_matrix(), 1e-11).is_ok());
        }

        #[test]
        fn conjugation_preserves_state_invariants(seed in any::<u64>()) {
            let mut rng = sampling::seeded_rng(seed);
            let u = sampling::su2(&mut rng);
            let rho = bloch_to_density(sampling::bloch_in_ball(&mut rng)).unwrap();
            let out = conjugate(&u, &rho);
            prop_assert!(DensityOperator::with_tolerance(out.matrix().clone(), 1e-12).is_ok());
            prop_assert!((purity(&out).value - purity(&rho).value).abs() <= 1e-12);
        }
    }
}
