//! Seeded random sampling of states, rotations, unitaries and matrices.
//!
//! Every sampler takes the generator explicitly; [`seeded_rng`] gives a
//! reproducible one.

use num_complex::Complex64;
pub use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::bloch::{bloch_to_density, BlochVector, DensityOperator};
use crate::channels::KrausSet;
use crate::isomorphism::phi_inverse;
use crate::matrix::{inner, vec_norm, ComplexMatrix};
use crate::so3::{AxisAngle, Rotation3};
use crate::su2::Unitary2;

pub type SeededRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Uniform on the unit sphere.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = std::array::from_fn(|_| normal(rng));
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            return v.map(|x| x / n);
        }
    }
}

/// Uniform in the closed unit ball.
pub fn bloch_in_ball<R: Rng + ?Sized>(rng: &mut R) -> BlochVector {
    let radius = rng.random::<f64>().cbrt();
    BlochVector::from_array(unit_vector(rng).map(|x| x * radius))
}

/// Uniform axis, angle uniform in `[0, 2π)`.
pub fn axis_angle<R: Rng + ?Sized>(rng: &mut R) -> AxisAngle {
    let axis = unit_vector(rng);
    let angle = rng.random_range(0.0..std::f64::consts::TAU);
    AxisAngle::from_parts_unchecked(axis, angle)
}

/// Haar-distributed element of SU(2).
pub fn su2<R: Rng + ?Sized>(rng: &mut R) -> Unitary2 {
    let q = loop {
        let q: [f64; 4] = std::array::from_fn(|_| normal(rng));
        let n = q.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            break q.map(|x| x / n);
        }
    };
    // q0 I − i (q1 σx + q2 σy + q3 σz)
    let a = Complex64::new(q[0], -q[3]);
    let b = Complex64::new(-q[2], -q[1]);
    let m = ComplexMatrix::from_vec(2, 2, vec![a, b, -b.conj(), a.conj()]).expect("2x2");
    Unitary2::from_matrix_unchecked(m)
}

/// Haar-distributed element of SO(3), as the image of [`su2`].
pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> Rotation3 {
    phi_inverse(&su2(rng)).expect("SU(2) image is a rotation")
}

/// Density operator with Bloch vector uniform in the ball.
pub fn density<R: Rng + ?Sized>(rng: &mut R) -> DensityOperator {
    bloch_to_density(bloch_in_ball(rng)).expect("vector inside the ball")
}

/// `n×n` matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let data = (0..n * n)
        .map(|_| Complex64::new(normal(rng) * s, normal(rng) * s))
        .collect();
    ComplexMatrix::from_vec(n, n, data).expect("finite entries")
}

/// Haar-distributed `n×n` unitary (Gram–Schmidt on a Ginibre matrix).
pub fn unitary_matrix<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    loop {
        let g = ginibre(rng, n);
        let mut q = ComplexMatrix::zeros(n, n);
        let mut ok = true;
        for j in 0..n {
            let mut v = g.column(j);
            for k in 0..j {
                let qk = q.column(k);
                let proj = inner(&qk, &v);
                for (x, y) in v.iter_mut().zip(&qk) {
                    *x -= proj * y;
                }
            }
            let norm = vec_norm(&v);
            if norm < 1e-8 {
                ok = false;
                break;
            }
            q.set_column(j, &v.iter().map(|x| x / norm).collect::<Vec<_>>());
        }
        if ok {
            return q;
        }
    }
}

/// Uniform on the probability simplex with `m` entries.
pub fn probability_vector<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..m).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = e.iter().sum();
    e.into_iter().map(|x| x / total).collect()
}

/// `m` Kraus operators `A_a = Σ_c W_{ca} √w_c U` for a random unitary `W`
/// and random weights `w`: a redundant representation of conjugation by `U`.
pub fn redundant_kraus<R: Rng + ?Sized>(rng: &mut R, u: &ComplexMatrix, m: usize) -> KrausSet {
    let weights = probability_vector(rng, m);
    let w = unitary_matrix(rng, m);
    let ops = (0..m)
        .map(|a| u.scale((0..m).map(|c| w[(c, a)] * weights[c].sqrt()).sum()))
        .collect();
    KrausSet::new(ops).expect("nonzero operators")
}
