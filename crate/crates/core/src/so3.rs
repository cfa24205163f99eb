//! Proper rotations of physical space.

use std::f64::consts::{PI, TAU};

use crate::bloch::BlochVector;
use crate::error::{Error, Result};
use crate::DEFAULT_TOL;

/// Below this `|sin α|` the axis is read from the symmetric part near α = π.
const SKEW_SWITCH: f64 = 1e-4;

/// Rotation axis `n̂` and angle `α`.
///
/// The angle lives in `[0, 2π]`; the closed upper end exists only so that
/// `−I ∈ SU(2)` has a logarithm (see [`crate::su2::axis_angle_from_unitary`]).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngle {
    axis: [f64; 3],
    angle: f64,
}

impl AxisAngle {
    pub const IDENTITY: AxisAngle = AxisAngle {
        axis: [0.0, 0.0, 1.0],
        angle: 0.0,
    };

    /// Accepts axes within `1e-9` of unit length and renormalizes them.
    pub fn new(axis: [f64; 3], angle: f64) -> Result<Self> {
        if axis.iter().chain([&angle]).any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm = norm3(&axis);
        if (norm - 1.0).abs() > DEFAULT_TOL {
            return Err(Error::Domain(format!("rotation axis has norm {norm}")));
        }
        if !(0.0..=TAU).contains(&angle) {
            return Err(Error::Domain(format!("angle {angle} outside [0, 2π]")));
        }
        Ok(Self {
            axis: axis.map(|x| x / norm),
            angle,
        })
    }

    pub(crate) fn from_parts_unchecked(axis: [f64; 3], angle: f64) -> Self {
        Self { axis, angle }
    }

    pub fn axis(&self) -> [f64; 3] {
        self.axis
    }

    pub fn angle(&self) -> f64 {
        self.angle
    }
}

/// A real orthogonal 3×3 matrix with determinant +1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation3 {
    matrix: [[f64; 3]; 3],
}

impl Rotation3 {
    pub const IDENTITY: Rotation3 = Rotation3 {
        matrix: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    pub fn new(matrix: [[f64; 3]; 3]) -> Result<Self> {
        Self::with_tolerance(matrix, DEFAULT_TOL)
    }

    pub fn with_tolerance(matrix: [[f64; 3]; 3], tol: f64) -> Result<Self> {
        if matrix.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::NonFinite);
        }
        let defect = orthogonality_defect(&matrix);
        if defect > tol {
            return Err(Error::Domain(format!("matrix is not orthogonal (defect {defect:e})")));
        }
        let det = det3(&matrix);
        if (det - 1.0).abs() > tol {
            return Err(Error::Domain(format!("determinant {det} != +1")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.matrix
    }

    pub fn transpose(&self) -> Rotation3 {
        let m = &self.matrix;
        Rotation3 {
            matrix: std::array::from_fn(|i| std::array::from_fn(|j| m[j][i])),
        }
    }

    pub fn determinant(&self) -> f64 {
        det3(&self.matrix)
    }

    /// `max |(RᵀR − I)_jk|`
    pub fn orthogonality_defect(&self) -> f64 {
        orthogonality_defect(&self.matrix)
    }

    pub fn max_abs_diff(&self, other: &Rotation3) -> f64 {
        self.matrix
            .iter()
            .flatten()
            .zip(other.matrix.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub(crate) fn levi_civita(j: usize, k: usize, l: usize) -> f64 {
    match (j, k, l) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

pub(crate) fn matmul3(a: &[[f64; 3]; 3], b: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).map(|k| a[i][k] * b[k][j]).sum()))
}

pub(crate) fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

pub(crate) fn orthogonality_defect(m: &[[f64; 3]; 3]) -> f64 {
    let mut worst: f64 = 0.0;
    for j in 0..3 {
        for l in 0..3 {
            let dot: f64 = (0..3).map(|k| m[k][j] * m[k][l]).sum();
            let delta = if j == l { 1.0 } else { 0.0 };
            worst = worst.max((dot - delta).abs());
        }
    }
    worst
}

/// Rodrigues: `R_jk = δ_jk cos α + n_j n_k (1 − cos α) − Σ_l ε_jkl n_l sin α`.
pub fn rotation_from_axis_angle(aa: &AxisAngle) -> Rotation3 {
    let n = aa.axis;
    let (s, c) = aa.angle.sin_cos();
    let matrix = std::array::from_fn(|j| {
        std::array::from_fn(|k| {
            let delta = if j == k { 1.0 } else { 0.0 };
            let skew: f64 = (0..3).map(|l| levi_civita(j, k, l) * n[l]).sum();
            delta * c + n[j] * n[k] * (1.0 - c) - skew * s
        })
    });
    Rotation3 { matrix }
}

/// Inverse of Rodrigues on the canonical cell `α ∈ [0, π]`.
///
/// Identity maps to `(ẑ, 0)`. At `α = π` the axis sign is chosen so that the
/// first non-negligible component is positive.
pub fn axis_angle_from_rotation(r: &Rotation3) -> AxisAngle {
    let m = &r.matrix;
    // w = n sin α, read from the skew part
    let w = [
        (m[2][1] - m[1][2]) / 2.0,
        (m[0][2] - m[2][0]) / 2.0,
        (m[1][0] - m[0][1]) / 2.0,
    ];
    let sin_a = norm3(&w);
    let cos_a = ((m[0][0] + m[1][1] + m[2][2] - 1.0) / 2.0).clamp(-1.0, 1.0);
    let angle = sin_a.atan2(cos_a);

    if sin_a >= SKEW_SWITCH || cos_a > 0.0 {
        if sin_a < 1e-15 {
            return AxisAngle::IDENTITY;
        }
        return AxisAngle::from_parts_unchecked(w.map(|x| x / sin_a), angle);
    }

    // Near π: (R + Rᵀ)/2 − cos α I = (1 − cos α) n nᵀ.
    let sym: [[f64; 3]; 3] =
        std::array::from_fn(|j| std::array::from_fn(|k| (m[j][k] + m[k][j]) / 2.0 - if j == k { cos_a } else { 0.0 }));
    let pivot = (0..3).max_by(|&a, &b| sym[a][a].total_cmp(&sym[b][b])).unwrap_or(0);
    let col = [sym[0][pivot], sym[1][pivot], sym[2][pivot]];
    let len = norm3(&col);
    let mut n = col.map(|x| x / len);

    let (n, angle) = if sin_a > 1e-12 {
        if n.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() < 0.0 {
            n = n.map(|x| -x);
        }
        (n, angle)
    } else {
        if n.iter().find(|x| x.abs() > 1e-12).is_some_and(|&x| x < 0.0) {
            n = n.map(|x| -x);
        }
        (n, PI)
    };
    AxisAngle::from_parts_unchecked(n, angle)
}

/// `Ra · Rb`
pub fn compose(ra: &Rotation3, rb: &Rotation3) -> Rotation3 {
    Rotation3 {
        matrix: matmul3(&ra.matrix, &rb.matrix),
    }
}

/// `r⃗′ = R r⃗`
pub fn apply(r: &Rotation3, v: BlochVector) -> BlochVector {
    let x = v.to_array();
    let m = &r.matrix;
    BlochVector::from_array(std::array::from_fn(|j| (0..3).map(|k| m[j][k] * x[k]).sum()))
}
