//! Qubit geometry: Bloch vectors and density operators, SO(3) and SU(2)
//! parametrizations, the two-to-one map between them, and qubit channels with
//! a decision procedure for CPTP invertibility.
//!
//! ```
//! use blochiso_core::{phi_inverse, unitary_from_axis_angle, AxisAngle};
//!
//! let aa = AxisAngle::new([0.0, 0.0, 1.0], std::f64::consts::FRAC_PI_2).unwrap();
//! let r = phi_inverse(&unitary_from_axis_angle(&aa)).unwrap();
//! assert!((r.matrix()[1][0] - 1.0).abs() < 1e-15);
//! ```

pub mod bloch;
pub mod channels;
pub mod error;
pub mod isomorphism;
pub mod linalg;
pub mod matrix;
pub mod pauli;
pub mod sampling;
pub mod so3;
pub mod su2;

/// Default absolute tolerance for validation and classification.
pub const DEFAULT_TOL: f64 = 1e-9;

pub use bloch::{
    angles_to_bloch, angles_to_pure_state, bloch_to_density, density_to_bloch, purity, BlochVector, DensityOperator,
    Purity, PurityKind, SphericalAngles,
};
pub use channels::{
    apply_channel, bloch_affine_action, choi_of, classify, extract_unitary_via_gram, invert, is_cptp,
    make_amplitude_damping, make_depolarizing, verify_inverse_pair, AffineAction, ChannelClassification, ChannelKind,
    ChoiMatrix, CptpReport, GramData, InversePairReport, KrausSet,
};
pub use error::{Error, Result};
pub use isomorphism::{
    adjoint_action, double_cover_distance, double_cover_is_exact, phi, phi_inverse, psi, psi_inverse,
    verify_group_diagram, verify_state_diagram, DiagramPoint, DiagramReport, Su2AlgebraElement,
};
pub use matrix::ComplexMatrix;
pub use so3::{axis_angle_from_rotation, rotation_from_axis_angle, AxisAngle, Rotation3};
pub use su2::{axis_angle_from_unitary, normalize_phase, unitary_from_axis_angle, Unitary2};
