//! The JSON wire format.
//!
//! ```json
//! {"schema_version": "1", "kind": "unitary",
//!  "payload": {"matrix": [[[0.0, 0.0], [0.0, -1.0]], [[0.0, -1.0], [0.0, 0.0]]]}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major nested
//! arrays. Payloads per kind:
//!
//! | kind         | payload                                   |
//! |--------------|-------------------------------------------|
//! | `bloch`      | `{"vector": [x1, x2, x3]}`                |
//! | `density`    | `{"matrix": 2×2 complex}`                 |
//! | `rotation`   | `{"matrix": 3×3 real}`                    |
//! | `unitary`    | `{"matrix": 2×2 complex, det 1}`          |
//! | `axis_angle` | `{"axis": [n1, n2, n3], "angle": α}`      |
//! | `kraus`      | `{"operators": [2×2 complex, ...]}`       |
//! | `choi`       | `{"matrix": 4×4 complex}`                 |

use blochiso_core::{
    AxisAngle, BlochVector, ChoiMatrix, ComplexMatrix, DensityOperator, KrausSet, Rotation3, Unitary2,
};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Kraus,
    Choi,
    Rotation,
    Unitary,
    #[value(name = "axis_angle")]
    AxisAngle,
    Bloch,
    Density,
}

impl Kind {
    pub fn as_str(self) -> &'static str {
        match self {
            Kind::Kraus => "kraus",
            Kind::Choi => "choi",
            Kind::Rotation => "rotation",
            Kind::Unitary => "unitary",
            Kind::AxisAngle => "axis_angle",
            Kind::Bloch => "bloch",
            Kind::Density => "density",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelDocument {
    pub schema_version: String,
    pub kind: Kind,
    pub payload: Value,
}

/// A parsed and validated document payload.
#[derive(Clone, Debug, PartialEq)]
pub enum Object {
    Kraus(KrausSet),
    Choi(ChoiMatrix),
    Rotation(Rotation3),
    Unitary(Unitary2),
    AxisAngle(AxisAngle),
    Bloch(BlochVector),
    Density(DensityOperator),
}

type RawComplexMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorPayload {
    vector: [f64; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ComplexMatrixPayload {
    matrix: RawComplexMatrix,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RealMatrixPayload {
    matrix: [[f64; 3]; 3],
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AxisAnglePayload {
    axis: [f64; 3],
    angle: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KrausPayload {
    operators: Vec<RawComplexMatrix>,
}

fn payload<T: for<'de> Deserialize<'de>>(kind: Kind, value: &Value) -> Result<T, CliError> {
    T::deserialize(value).map_err(|e| CliError::Malformed(format!("{} payload: {e}", kind.as_str())))
}

fn complex_matrix(raw: &RawComplexMatrix) -> Result<ComplexMatrix, CliError> {
    let rows: Vec<Vec<Complex64>> = raw
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    Ok(ComplexMatrix::from_rows(&rows)?)
}

fn finite(values: &[f64]) -> Result<(), CliError> {
    if values.iter().all(|x| x.is_finite()) {
        Ok(())
    } else {
        Err(CliError::Malformed("non-finite number in payload".into()))
    }
}

impl Object {
    pub fn kind(&self) -> Kind {
        match self {
            Object::Kraus(_) => Kind::Kraus,
            Object::Choi(_) => Kind::Choi,
            Object::Rotation(_) => Kind::Rotation,
            Object::Unitary(_) => Kind::Unitary,
            Object::AxisAngle(_) => Kind::AxisAngle,
            Object::Bloch(_) => Kind::Bloch,
            Object::Density(_) => Kind::Density,
        }
    }

    /// Parses and validates; `tol` is the tolerance for state, unitarity,
    /// orthogonality and Choi checks.
    pub fn from_document(doc: &ChannelDocument, tol: f64) -> Result<Object, CliError> {
        if doc.schema_version != SCHEMA_VERSION {
            return Err(CliError::Malformed(format!(
                "unsupported schema_version {:?}",
                doc.schema_version
            )));
        }
        let kind = doc.kind;
        let v = &doc.payload;
        Ok(match kind {
            Kind::Bloch => {
                let p: VectorPayload = payload(kind, v)?;
                finite(&p.vector)?;
                let r = BlochVector::from_array(p.vector);
                if r.norm() > 1.0 + tol {
                    return Err(CliError::Malformed(format!("Bloch vector has norm {} > 1", r.norm())));
                }
                Object::Bloch(r)
            }
            Kind::Density => {
                let p: ComplexMatrixPayload = payload(kind, v)?;
                Object::Density(DensityOperator::with_tolerance(complex_matrix(&p.matrix)?, tol)?)
            }
            Kind::Rotation => {
                let p: RealMatrixPayload = payload(kind, v)?;
                Object::Rotation(Rotation3::with_tolerance(p.matrix, tol)?)
            }
            Kind::Unitary => {
                let p: ComplexMatrixPayload = payload(kind, v)?;
                Object::Unitary(Unitary2::with_tolerance(complex_matrix(&p.matrix)?, tol)?)
            }
            Kind::AxisAngle => {
                let p: AxisAnglePayload = payload(kind, v)?;
                Object::AxisAngle(AxisAngle::new(p.axis, p.angle)?)
            }
            Kind::Kraus => {
                let p: KrausPayload = payload(kind, v)?;
                let ops = p.operators.iter().map(complex_matrix).collect::<Result<Vec<_>, _>>()?;
                Object::Kraus(KrausSet::new(ops)?)
            }
            Kind::Choi => {
                let p: ComplexMatrixPayload = payload(kind, v)?;
                Object::Choi(ChoiMatrix::new(complex_matrix(&p.matrix)?, tol)?)
            }
        })
    }

    pub fn to_document(&self) -> ChannelDocument {
        let payload = match self {
            Object::Kraus(k) => json!({ "operators": k.operators().iter().map(encode_matrix).collect::<Vec<_>>() }),
            Object::Choi(j) => json!({ "matrix": encode_matrix(j.matrix()) }),
            Object::Rotation(r) => json!({ "matrix": encode_real_matrix(r.matrix()) }),
            Object::Unitary(u) => json!({ "matrix": encode_matrix(u.matrix()) }),
            Object::AxisAngle(aa) => json!({ "axis": encode_real(&aa.axis()), "angle": num(aa.angle()) }),
            Object::Bloch(r) => json!({ "vector": encode_real(&r.to_array()) }),
            Object::Density(rho) => json!({ "matrix": encode_matrix(rho.matrix()) }),
        };
        ChannelDocument {
            schema_version: SCHEMA_VERSION.into(),
            kind: self.kind(),
            payload,
        }
    }
}

pub fn parse_document(text: &str) -> Result<ChannelDocument, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Malformed(format!("invalid document: {e}")))
}

pub fn parse_object(text: &str, tol: f64) -> Result<Object, CliError> {
    Object::from_document(&parse_document(text)?, tol)
}

/// Folds `-0.0` into `0.0` so equal values print identically.
pub fn num(x: f64) -> f64 {
    x + 0.0
}

pub fn encode_complex(z: Complex64) -> Value {
    json!([num(z.re), num(z.im)])
}

pub fn encode_matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        m.to_rows()
            .into_iter()
            .map(|row| Value::Array(row.into_iter().map(encode_complex).collect()))
            .collect(),
    )
}

pub fn encode_real(v: &[f64]) -> Value {
    v.iter().map(|&x| num(x)).collect()
}

pub fn encode_real_matrix(m: &[[f64; 3]; 3]) -> Value {
    m.iter().map(|row| encode_real(row)).collect()
}
