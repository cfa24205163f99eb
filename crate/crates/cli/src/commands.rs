//! Subcommand bodies. Each one maps onto library calls and builds a JSON
//! report; none of them does numerical work of its own.

use blochiso_core::sampling::{self, seeded_rng, Rng};
use blochiso_core::{
    axis_angle_from_rotation, axis_angle_from_unitary, bloch_affine_action, choi_of, classify as classify_channel,
    density_to_bloch, double_cover_distance, double_cover_is_exact, invert, normalize_phase, phi, phi_inverse,
    rotation_from_axis_angle, unitary_from_axis_angle, verify_group_diagram, verify_inverse_pair, verify_state_diagram,
    AxisAngle, BlochVector, ChannelKind, KrausSet, Unitary2,
};
use serde_json::{json, Map, Value};

use crate::document::{encode_complex, encode_matrix, encode_real, encode_real_matrix, num, Kind, Object};
use crate::error::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Options {
    pub tol: f64,
    pub samples: usize,
    pub seed: u64,
}

impl Default for Options {
    fn default() -> Self {
        Self {
            tol: blochiso_core::DEFAULT_TOL,
            samples: 1000,
            seed: 42,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum VerifyMode {
    Diagram,
    DoubleCover,
    Group,
    InversePair,
}

impl VerifyMode {
    pub fn as_str(self) -> &'static str {
        match self {
            VerifyMode::Diagram => "diagram",
            VerifyMode::DoubleCover => "double-cover",
            VerifyMode::Group => "group",
            VerifyMode::InversePair => "inverse-pair",
        }
    }
}

/// A verification report and whether every case passed.
#[derive(Clone, Debug, PartialEq)]
pub struct Verdict {
    pub report: Value,
    pub passed: bool,
}

pub fn convert(input: Object, to: Kind, opts: &Options) -> Result<Object, CliError> {
    let from = input.kind();
    if from == to {
        return Ok(input);
    }
    let impossible = |reason: String| CliError::Impossible { from, to, reason };
    Ok(match (input, to) {
        (Object::Bloch(r), Kind::Density) => {
            Object::Density(blochiso_core::bloch::bloch_to_density_with_tolerance(r, opts.tol)?)
        }
        (Object::Density(rho), Kind::Bloch) => Object::Bloch(density_to_bloch(&rho)),
        (Object::AxisAngle(aa), Kind::Rotation) => Object::Rotation(rotation_from_axis_angle(&aa)),
        (Object::AxisAngle(aa), Kind::Unitary) => Object::Unitary(unitary_from_axis_angle(&aa)),
        (Object::Rotation(r), Kind::AxisAngle) => Object::AxisAngle(axis_angle_from_rotation(&r)),
        (Object::Rotation(r), Kind::Unitary) => Object::Unitary(phi(&r)),
        (Object::Unitary(u), Kind::Rotation) => Object::Rotation(phi_inverse(&u)?),
        (Object::Unitary(u), Kind::AxisAngle) => Object::AxisAngle(axis_angle_from_unitary(&u)),
        (Object::Unitary(u), Kind::Kraus) => Object::Kraus(KrausSet::from_unitary(u.matrix())?),
        (Object::Kraus(k), Kind::Choi) => Object::Choi(choi_of(&k).map_err(|e| impossible(e.to_string()))?),
        (Object::Choi(j), Kind::Kraus) => Object::Kraus(j.to_kraus()),
        (Object::Kraus(k), Kind::Unitary) => Object::Unitary(unitary_of(&k, opts).map_err(impossible)?),
        (Object::Choi(j), Kind::Unitary) => Object::Unitary(unitary_of(&j.to_kraus(), opts).map_err(impossible)?),
        _ => return Err(CliError::Unsupported { from, to }),
    })
}

fn unitary_of(k: &KrausSet, opts: &Options) -> Result<Unitary2, String> {
    let class = classify_channel(k, opts.tol);
    match class.extracted_unitary {
        Some(u) => normalize_phase(&u).map_err(|e| e.to_string()),
        None => Err(format!(
            "channel is {} (Choi rank {})",
            class.kind.as_str(),
            class.choi_rank
        )),
    }
}

fn expect_kraus(input: Object) -> Result<KrausSet, CliError> {
    match input {
        Object::Kraus(k) => Ok(k),
        other => Err(CliError::Malformed(format!(
            "expected a kraus document, got {}",
            other.kind().as_str()
        ))),
    }
}

pub fn classify(input: Object, opts: &Options) -> Result<Value, CliError> {
    let k = expect_kraus(input)?;
    let class = classify_channel(&k, opts.tol);
    let mut report = Map::new();
    report.insert("cptp".into(), json!(class.diagnostics.cptp));
    report.insert("choi_rank".into(), json!(class.choi_rank));
    report.insert("kind".into(), json!(class.kind.as_str()));
    if let Some(u) = &class.extracted_unitary {
        report.insert("unitary".into(), encode_matrix(u));
    }
    if class.kind == ChannelKind::UnitaryConjugation {
        let inverse = invert(&k, opts.tol)?;
        let doc = serde_json::to_value(Object::Kraus(inverse).to_document()).expect("serializable");
        report.insert("inverse".into(), doc);
    }
    Ok(Value::Object(report))
}

pub fn bloch_action(input: Object, opts: &Options) -> Result<Value, CliError> {
    let k = expect_kraus(input)?;
    let action = bloch_affine_action(&k)?;
    Ok(json!({
        "M": encode_real_matrix(&action.matrix),
        "t": encode_real(&action.translation),
        "isometry": action.is_isometry(opts.tol),
    }))
}

struct Case {
    pass: bool,
    deviation: f64,
    fields: Map<String, Value>,
}

fn summarize(mode: VerifyMode, opts: &Options, sampled: bool, cases: Vec<Case>) -> Verdict {
    let failures = cases.iter().filter(|c| !c.pass).count();
    let max_deviation = cases.iter().map(|c| c.deviation).fold(0.0, f64::max);
    let mut report = Map::new();
    report.insert("mode".into(), json!(mode.as_str()));
    report.insert("tol".into(), json!(opts.tol));
    if sampled {
        report.insert("seed".into(), json!(opts.seed));
        report.insert("samples".into(), json!(cases.len()));
    }
    report.insert("passed".into(), json!(failures == 0));
    report.insert("failures".into(), json!(failures));
    report.insert("max_deviation".into(), json!(num(max_deviation)));
    let cases_json = cases
        .into_iter()
        .map(|c| {
            let mut m = Map::new();
            m.insert("pass".into(), json!(c.pass));
            m.insert("deviation".into(), json!(num(c.deviation)));
            m.extend(c.fields);
            Value::Object(m)
        })
        .collect();
    report.insert("cases".into(), Value::Array(cases_json));
    Verdict {
        report: Value::Object(report),
        passed: failures == 0,
    }
}

pub fn verify(mode: VerifyMode, inputs: Vec<Object>, opts: &Options) -> Result<Verdict, CliError> {
    let sampled = inputs.is_empty();
    let cases = match mode {
        VerifyMode::Diagram => diagram_cases(inputs, opts)?,
        VerifyMode::DoubleCover => double_cover_cases(inputs, opts)?,
        VerifyMode::Group => group_cases(inputs, opts)?,
        VerifyMode::InversePair => inverse_pair_cases(inputs, opts)?,
    };
    Ok(summarize(mode, opts, sampled, cases))
}

fn diagram_case(r: BlochVector, aa: &AxisAngle, opts: &Options) -> Result<Case, CliError> {
    let report = verify_state_diagram(r, aa, opts.tol)?;
    Ok(Case {
        pass: report.commutes,
        deviation: report.max_deviation,
        fields: Map::new(),
    })
}

fn diagram_cases(inputs: Vec<Object>, opts: &Options) -> Result<Vec<Case>, CliError> {
    if inputs.is_empty() {
        let mut rng = seeded_rng(opts.seed);
        return (0..opts.samples)
            .map(|_| {
                let r = sampling::bloch_in_ball(&mut rng);
                let aa = sampling::axis_angle(&mut rng);
                diagram_case(r, &aa, opts)
            })
            .collect();
    }
    let mut state = None;
    let mut axis_angle = None;
    for obj in inputs {
        match obj {
            Object::Bloch(r) if state.is_none() => state = Some(r),
            Object::Density(rho) if state.is_none() => state = Some(density_to_bloch(&rho)),
            Object::AxisAngle(aa) if axis_angle.is_none() => axis_angle = Some(aa),
            other => {
                return Err(CliError::Malformed(format!(
                    "diagram takes one bloch (or density) and one axis_angle document; unexpected {}",
                    other.kind().as_str()
                )))
            }
        }
    }
    match (state, axis_angle) {
        (Some(r), Some(aa)) => Ok(vec![diagram_case(r, &aa, opts)?]),
        _ => Err(CliError::Malformed(
            "diagram takes one bloch (or density) and one axis_angle document".into(),
        )),
    }
}

fn double_cover_case(u: &Unitary2, opts: &Options) -> Result<Case, CliError> {
    let exact = double_cover_is_exact(u)?;
    let distance = double_cover_distance(u)?;
    let mut fields = Map::new();
    fields.insert("bitwise_equal".into(), json!(exact));
    Ok(Case {
        pass: exact && distance <= opts.tol,
        deviation: distance,
        fields,
    })
}

fn double_cover_cases(inputs: Vec<Object>, opts: &Options) -> Result<Vec<Case>, CliError> {
    if inputs.is_empty() {
        let mut rng = seeded_rng(opts.seed);
        return (0..opts.samples)
            .map(|_| double_cover_case(&sampling::su2(&mut rng), opts))
            .collect();
    }
    inputs
        .into_iter()
        .map(|obj| match obj {
            Object::Unitary(u) => double_cover_case(&u, opts),
            other => Err(CliError::Malformed(format!(
                "double-cover takes unitary documents; got {}",
                other.kind().as_str()
            ))),
        })
        .collect()
}

fn group_case(word: &[AxisAngle], opts: &Options) -> Result<Case, CliError> {
    let report = verify_group_diagram(word, opts.tol)?;
    let mut fields = Map::new();
    fields.insert("length".into(), json!(word.len()));
    Ok(Case {
        pass: report.commutes,
        deviation: report.max_deviation,
        fields,
    })
}

fn group_cases(inputs: Vec<Object>, opts: &Options) -> Result<Vec<Case>, CliError> {
    if inputs.is_empty() {
        let mut rng = seeded_rng(opts.seed);
        return (0..opts.samples)
            .map(|_| {
                let len = rng.random_range(1..=4);
                let word: Vec<_> = (0..len).map(|_| sampling::axis_angle(&mut rng)).collect();
                group_case(&word, opts)
            })
            .collect();
    }
    let word = inputs
        .into_iter()
        .map(|obj| match obj {
            Object::AxisAngle(aa) => Ok(aa),
            other => Err(CliError::Malformed(format!(
                "group takes axis_angle documents forming one word; got {}",
                other.kind().as_str()
            ))),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(vec![group_case(&word, opts)?])
}

fn inverse_pair_case(fwd: &KrausSet, inv: &KrausSet, opts: &Options) -> Case {
    let report = verify_inverse_pair(fwd, inv, opts.tol);
    let mut fields = Map::new();
    fields.insert("alpha_norm_sq".into(), json!(num(report.alpha_norm_sq)));
    fields.insert("max_residual".into(), json!(num(report.max_residual)));
    fields.insert(
        "alpha".into(),
        Value::Array(
            report
                .alpha
                .to_rows()
                .into_iter()
                .map(|row| Value::Array(row.into_iter().map(encode_complex).collect()))
                .collect(),
        ),
    );
    Case {
        pass: report.is_inverse,
        deviation: report.max_residual.max((report.alpha_norm_sq - 1.0).abs()),
        fields,
    }
}

fn inverse_pair_cases(inputs: Vec<Object>, opts: &Options) -> Result<Vec<Case>, CliError> {
    if inputs.is_empty() {
        let mut rng = seeded_rng(opts.seed);
        return Ok((0..opts.samples)
            .map(|_| {
                let u = sampling::su2(&mut rng);
                let m = rng.random_range(1..=4);
                let fwd = sampling::redundant_kraus(&mut rng, u.matrix(), m);
                let m = rng.random_range(1..=4);
                let inv = sampling::redundant_kraus(&mut rng, &u.matrix().adjoint(), m);
                inverse_pair_case(&fwd, &inv, opts)
            })
            .collect());
    }
    match <[Object; 2]>::try_from(inputs) {
        Ok([Object::Kraus(fwd), Object::Kraus(inv)]) => Ok(vec![inverse_pair_case(&fwd, &inv, opts)]),
        _ => Err(CliError::Malformed(
            "inverse-pair takes two kraus documents: forward then inverse".into(),
        )),
    }
}
