//! The solution document.

use opcalc::json::scalar_to_json;
use opcalc::numerics::residual;
use opcalc::poly::Poly;
use opcalc::roots::FactorMode;
use opcalc::scalar::{Mode, Scalar};
use opcalc::sequence::Sequence;
use opcalc::solver::{default_sample_points, verify_solution_at, IVProblem, Solution};
use opcalc::transforms::Realization;
use serde_json::{json, Value};

fn poly_json(p: &Poly) -> Value {
    Value::Array(p.coeffs().iter().map(scalar_to_json).collect())
}

pub fn sequence_json(seq: &Sequence) -> Value {
    Value::Array(seq.iter().map(scalar_to_json).collect())
}

fn mode_name(mode: Mode) -> &'static str {
    match mode {
        Mode::Exact => "exact",
        Mode::Float => "float",
    }
}

fn factor_mode_name(mode: FactorMode) -> &'static str {
    match mode {
        FactorMode::Exact => "exact",
        FactorMode::Mixed => "mixed",
        FactorMode::Float => "float",
    }
}

/// Sample points the solution can be checked at: in the Z bridge the
/// residual needs `y_{k+m}`, so indices run below `N - m`.
fn usable_points(p: &IVProblem, sol: &Solution, requested: Option<&[f64]>) -> Vec<f64> {
    let points = requested.map_or_else(|| default_sample_points(p.realization), <[f64]>::to_vec);
    match p.realization {
        Realization::ZBridge => {
            let limit = sol.coeff_seq.truncation().saturating_sub(p.order()) as f64;
            points.into_iter().filter(|&k| k < limit).collect()
        }
        _ => points,
    }
}

pub fn solution_doc(p: &IVProblem, sol: &Solution, requested_points: Option<&[f64]>) -> Value {
    let points = usable_points(p, sol, requested_points);
    let evaluator = sol.evaluator();
    let samples: Vec<Value> = points
        .iter()
        .map(|&t| {
            let value = evaluator.eval(t).value;
            json!({
                "t": t,
                "value": scalar_to_json(&Scalar::Float(value)),
                "residual": residual(p, &evaluator, t),
            })
        })
        .collect();
    let pole_terms: Vec<Value> = sol
        .decomposition
        .iter()
        .flat_map(|d| &d.terms)
        .map(|t| {
            json!({
                "rate": scalar_to_json(&t.rate),
                "multiplicity": t.multiplicity,
                "coeff": scalar_to_json(&t.coeff),
            })
        })
        .collect();
    let named_terms: Vec<Value> = sol
        .named
        .iter()
        .map(|f| {
            json!({
                "family": f.family.name(),
                "params": f.params_json(),
                "prefactor": scalar_to_json(&f.prefactor),
                "text": f.to_string(),
            })
        })
        .collect();
    let report = verify_solution_at(p, sol, &points);
    let checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "passed": c.passed,
                "max_residual": c.max_residual,
                "detail": c.detail,
            })
        })
        .collect();
    let errors: Vec<Value> = sol
        .diagnostics
        .errors
        .iter()
        .map(|e| json!({"name": e.name(), "message": e.to_string()}))
        .collect();
    let realization = match p.realization {
        Realization::Bessel { nu } => json!({"kind": "bessel", "nu": nu}),
        r => json!({"kind": r.name()}),
    };
    json!({
        "realization": realization,
        "transform": {"num": poly_json(sol.transform.num()), "den": poly_json(sol.transform.den())},
        "pole_terms": pole_terms,
        "polynomial_part": sol.decomposition.as_ref().map(|d| poly_json(&d.poly_part)),
        "named_terms": named_terms,
        "closed_form": sol.closed_form(),
        "coefficients": sequence_json(&sol.coeff_seq),
        "samples": samples,
        "diagnostics": {
            "factor_mode": sol.diagnostics.factor_mode.map(factor_mode_name),
            "truncation": sol.diagnostics.truncation,
            "mode": mode_name(sol.diagnostics.mode),
            "errors": errors,
            "verified": report.passed(),
            "checks": checks,
        },
    })
}
