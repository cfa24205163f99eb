//! Pauli matrices in the fixed order (σ_x, σ_y, σ_z).

use num_complex::Complex64;

use crate::matrix::{ComplexMatrix, I, ONE, ZERO};

/// `σ_{k+1}` for `k ∈ {0, 1, 2}`.
pub fn sigma(k: usize) -> ComplexMatrix {
    let data = match k {
        0 => vec![ZERO, ONE, ONE, ZERO],
        1 => vec![ZERO, -I, I, ZERO],
        2 => vec![ONE, ZERO, ZERO, -ONE],
        _ => panic!("Pauli index {k} out of range"),
    };
    ComplexMatrix::from_vec(2, 2, data).expect("2x2")
}

pub fn paulis() -> [ComplexMatrix; 3] {
    [sigma(0), sigma(1), sigma(2)]
}

/// `v · σ⃗`
pub fn dot_sigma(v: &[f64; 3]) -> ComplexMatrix {
    let [x, y, z] = *v;
    ComplexMatrix::from_vec(
        2,
        2,
        vec![
            Complex64::new(z, 0.0),
            Complex64::new(x, -y),
            Complex64::new(x, y),
            Complex64::new(-z, 0.0),
        ],
    )
    .expect("2x2")
}

/// `Tr(m σ_k)` for each k.
pub fn pauli_traces(m: &ComplexMatrix) -> [Complex64; 3] {
    debug_assert_eq!(m.shape(), (2, 2));
    // Closed forms of Tr(m σ_k) for a 2x2 m.
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    [b + c, I * (b - c), a - d]
}
