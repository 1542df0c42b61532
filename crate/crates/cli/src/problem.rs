//! Reading a problem document.

use opcalc::json::scalar_from_json;
use opcalc::poly::Poly;
use opcalc::rational::RationalExpr;
use opcalc::scalar::{Mode, Scalar};
use opcalc::solver::{IVProblem, Rhs};
use opcalc::transforms::{z_bridge, Family, NamedFunction, Realization, ZDirection};
use serde_json::{Map, Value};

pub const DEFAULT_TRUNCATION: usize = 64;
const MAX_TRUNCATION: usize = 1 << 16;

/// A rejected document: where, and why.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum InputError {
    #[error("line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("field `{field}`: {message}")]
    Field { field: String, message: String },
}

impl InputError {
    pub fn field(field: impl Into<String>, message: impl Into<String>) -> InputError {
        InputError::Field {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            InputError::Syntax { line, column, message } => serde_json::json!({
                "error": "ValidationError",
                "line": line,
                "column": column,
                "message": message,
            }),
            InputError::Field { field, message } => serde_json::json!({
                "error": "ValidationError",
                "field": field,
                "message": message,
            }),
        }
    }
}

pub fn parse_json(text: &str) -> Result<Value, InputError> {
    serde_json::from_str(text).map_err(|e| InputError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })
}

/// A validated problem plus the run options.
#[derive(Debug, Clone)]
pub struct ProblemDoc {
    pub problem: IVProblem,
    pub truncation: usize,
    pub mode: Mode,
    pub sample_points: Option<Vec<f64>>,
}

fn object<'a>(v: &'a Value, field: &str) -> Result<&'a Map<String, Value>, InputError> {
    v.as_object()
        .ok_or_else(|| InputError::field(field, format!("expected an object, found {v}")))
}

fn required<'a>(obj: &'a Map<String, Value>, parent: &str, key: &str) -> Result<&'a Value, InputError> {
    obj.get(key)
        .ok_or_else(|| InputError::field(join(parent, key), "missing required field"))
}

fn join(parent: &str, key: &str) -> String {
    if parent.is_empty() {
        key.to_string()
    } else {
        format!("{parent}.{key}")
    }
}

fn reject_unknown(obj: &Map<String, Value>, parent: &str, allowed: &[&str]) -> Result<(), InputError> {
    match obj.keys().find(|k| !allowed.contains(&k.as_str())) {
        Some(k) => Err(InputError::field(join(parent, k), "unknown field")),
        None => Ok(()),
    }
}

fn string<'a>(v: &'a Value, field: &str) -> Result<&'a str, InputError> {
    v.as_str()
        .ok_or_else(|| InputError::field(field, format!("expected a string, found {v}")))
}

fn number(v: &Value, field: &str) -> Result<f64, InputError> {
    v.as_f64()
        .filter(|x| x.is_finite())
        .ok_or_else(|| InputError::field(field, format!("expected a finite number, found {v}")))
}

fn scalar(v: &Value, field: &str, mode: Mode) -> Result<Scalar, InputError> {
    scalar_from_json(v, mode).map_err(|m| InputError::field(field, m))
}

fn scalars(v: &Value, field: &str, mode: Mode) -> Result<Vec<Scalar>, InputError> {
    let items = v
        .as_array()
        .ok_or_else(|| InputError::field(field, format!("expected an array, found {v}")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| scalar(x, &format!("{field}[{i}]"), mode))
        .collect()
}

/// A JSON value of a sequence file: an array of scalars, or an object
/// carrying one under `coefficients`.
pub fn sequence_values(v: &Value, mode: Mode) -> Result<Vec<Scalar>, InputError> {
    match v {
        Value::Object(obj) => scalars(required(obj, "", "coefficients")?, "coefficients", mode),
        _ => scalars(v, "coefficients", mode),
    }
}

fn parse_realization(v: &Value) -> Result<Realization, InputError> {
    let obj = object(v, "realization")?;
    reject_unknown(obj, "realization", &["kind", "nu"])?;
    let kind = string(required(obj, "realization", "kind")?, "realization.kind")?;
    let nu = obj.get("nu");
    match (kind, nu) {
        ("bessel", Some(nu)) => {
            let nu = number(nu, "realization.nu")?;
            Realization::bessel(nu).map_err(|e| InputError::field("realization.nu", e.to_string()))
        }
        ("bessel", None) => Err(InputError::field("realization.nu", "required for the bessel realization")),
        ("maclaurin" | "zbridge", Some(_)) => {
            Err(InputError::field("realization.nu", format!("only the bessel realization takes nu, not {kind}")))
        }
        ("maclaurin", None) => Ok(Realization::Maclaurin),
        ("zbridge", None) => Ok(Realization::ZBridge),
        (other, _) => Err(InputError::field(
            "realization.kind",
            format!("unknown realization \"{other}\"; expected maclaurin, bessel or zbridge"),
        )),
    }
}

fn parse_mode(options: Option<&Map<String, Value>>) -> Result<Mode, InputError> {
    match options.and_then(|o| o.get("mode")) {
        None => Ok(Mode::Exact),
        Some(v) => match string(v, "options.mode")? {
            "exact" => Ok(Mode::Exact),
            "float" => Ok(Mode::Float),
            other => Err(InputError::field("options.mode", format!("expected exact or float, found \"{other}\""))),
        },
    }
}

fn parse_rhs(v: &Value, realization: Realization, mode: Mode) -> Result<Rhs, InputError> {
    let obj = object(v, "rhs")?;
    let kind = string(required(obj, "rhs", "kind")?, "rhs.kind")?;
    match kind {
        "zero" => {
            reject_unknown(obj, "rhs", &["kind"])?;
            Ok(Rhs::Zero)
        }
        "rational" => {
            reject_unknown(obj, "rhs", &["kind", "num", "den", "variable"])?;
            let num = scalars(required(obj, "rhs", "num")?, "rhs.num", mode)?;
            let den = scalars(required(obj, "rhs", "den")?, "rhs.den", mode)?;
            let expr = RationalExpr::new(Poly::new(num), Poly::new(den))
                .map_err(|e| InputError::field("rhs.den", e.to_string()))?;
            match obj.get("variable").map(|v| string(v, "rhs.variable")).transpose()? {
                None | Some("s") => Ok(Rhs::Rational(expr)),
                Some("z") => Ok(Rhs::Rational(z_bridge(ZDirection::FromZ, &expr))),
                Some(other) => Err(InputError::field("rhs.variable", format!("expected s or z, found \"{other}\""))),
            }
        }
        "named" => {
            reject_unknown(obj, "rhs", &["kind", "family", "params", "prefactor"])?;
            parse_named(obj, realization, mode).map(Rhs::Named)
        }
        other => Err(InputError::field(
            "rhs.kind",
            format!("unknown right-hand side \"{other}\"; expected zero, rational or named"),
        )),
    }
}

fn parse_named(obj: &Map<String, Value>, realization: Realization, mode: Mode) -> Result<NamedFunction, InputError> {
    let name = string(required(obj, "rhs", "family")?, "rhs.family")?;
    let family = Family::from_name(name).ok_or_else(|| InputError::field("rhs.family", format!("unknown family \"{name}\"")))?;
    let prefactor = match obj.get("prefactor") {
        Some(v) => scalar(v, "rhs.prefactor", mode)?,
        None => Scalar::one(mode),
    };
    let empty = Map::new();
    let params = match obj.get("params") {
        Some(v) => object(v, "rhs.params")?,
        None => &empty,
    };
    let param_name = NamedFunction::param_name(family);
    let mut allowed = vec!["nu", "degree"];
    allowed.extend(param_name);
    reject_unknown(params, "rhs.params", &allowed)?;
    let param = match param_name {
        Some(key) => scalar(required(params, "rhs.params", key)?, &format!("rhs.params.{key}"), mode)?,
        None => Scalar::zero(mode),
    };
    let nu = match params.get("nu") {
        Some(v) => number(v, "rhs.params.nu")?,
        None => realization.nu().unwrap_or(0.0),
    };
    let degree = match params.get("degree") {
        Some(v) => v
            .as_u64()
            .ok_or_else(|| InputError::field("rhs.params.degree", format!("expected a non-negative integer, found {v}")))?
            as usize,
        None => 0,
    };
    Ok(NamedFunction {
        family,
        prefactor,
        param,
        nu,
        degree,
    })
}

fn parse_truncation(options: Option<&Map<String, Value>>, env: Option<&str>) -> Result<usize, InputError> {
    let check = |n: u64, field: &str| {
        if n == 0 || n as usize > MAX_TRUNCATION {
            Err(InputError::field(field, format!("truncation must be in 1..={MAX_TRUNCATION}, got {n}")))
        } else {
            Ok(n as usize)
        }
    };
    if let Some(v) = options.and_then(|o| o.get("truncation")) {
        let n = v
            .as_u64()
            .ok_or_else(|| InputError::field("options.truncation", format!("expected a positive integer, found {v}")))?;
        return check(n, "options.truncation");
    }
    match env {
        Some(text) => {
            let n = text
                .trim()
                .parse::<u64>()
                .map_err(|_| InputError::field("OPCALC_TRUNCATION", format!("expected a positive integer, found \"{text}\"")))?;
            check(n, "OPCALC_TRUNCATION")
        }
        None => Ok(DEFAULT_TRUNCATION),
    }
}

fn parse_sample_points(v: &Value, realization: Realization) -> Result<Vec<f64>, InputError> {
    let items = v
        .as_array()
        .ok_or_else(|| InputError::field("options.sample_points", format!("expected an array, found {v}")))?;
    items
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let field = format!("options.sample_points[{i}]");
            let t = number(x, &field)?;
            match realization {
                Realization::ZBridge if t < 0.0 || t.fract() != 0.0 => {
                    Err(InputError::field(field, format!("zbridge samples are indices k >= 0, got {t}")))
                }
                Realization::Bessel { .. } if t < 0.0 => {
                    Err(InputError::field(field, format!("bessel samples need t >= 0, got {t}")))
                }
                _ => Ok(t),
            }
        })
        .collect()
}

/// Validate a problem document. `env_truncation` is the value of
/// `OPCALC_TRUNCATION`, used when the document does not set a truncation.
pub fn parse_problem(doc: &Value, env_truncation: Option<&str>) -> Result<ProblemDoc, InputError> {
    let obj = object(doc, "")?;
    reject_unknown(obj, "", &["realization", "operator", "rhs", "init", "options"])?;
    let options = obj.get("options").map(|v| object(v, "options")).transpose()?;
    if let Some(o) = options {
        reject_unknown(o, "options", &["truncation", "mode", "sample_points"])?;
    }
    let mode = parse_mode(options)?;
    let truncation = parse_truncation(options, env_truncation)?;
    let realization = parse_realization(required(obj, "", "realization")?)?;
    let op_poly = scalars(required(obj, "", "operator")?, "operator", mode)?;
    match op_poly.last() {
        None => return Err(InputError::field("operator", "needs at least one coefficient")),
        Some(c) if c.is_zero() => return Err(InputError::field("operator", "the last coefficient c_m must be nonzero")),
        _ => {}
    }
    let rhs = match obj.get("rhs") {
        Some(v) => parse_rhs(v, realization, mode)?,
        None => Rhs::Zero,
    };
    let init = scalars(required(obj, "", "init")?, "init", mode)?;
    let order = op_poly.len() - 1;
    if init.len() != order {
        return Err(InputError::field(
            "init",
            format!("an order-{order} operator needs {order} initial values, got {}", init.len()),
        ));
    }
    let sample_points = options
        .and_then(|o| o.get("sample_points"))
        .map(|v| parse_sample_points(v, realization))
        .transpose()?;
    let problem = IVProblem::new(realization, op_poly, rhs, init).map_err(|e| InputError::field("", e.to_string()))?;
    Ok(ProblemDoc {
        problem,
        truncation,
        mode,
        sample_points,
    })
}
