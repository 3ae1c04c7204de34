//! Command implementations. Each returns a JSON report, a text rendering
//! and whether the answer is decisive.

use std::fmt::Write as _;

use bjnear::distance::{dist_to_algebra, maximize_variance, variance_functional};
use bjnear::numkit::{operator_norm, svd};
use bjnear::ortho::{bhatia_semrl_check, check_orthogonality, is_minimal, validate_certificate};
use bjnear::{
    AlgebraSpec, ComplexMatrix, ComplexVector, OrthoVerdict, SubspaceBasis, ToleranceConfig,
};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::io::MatrixDoc;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    Decisive,
    Inconclusive,
    Failed,
}

impl Decision {
    pub fn exit_code(self) -> i32 {
        match self {
            Decision::Decisive => 0,
            Decision::Inconclusive => 2,
            Decision::Failed => 1,
        }
    }
}

#[derive(Debug)]
pub struct Output {
    pub decision: Decision,
    pub json: Value,
    pub text: String,
}

pub(crate) fn matrix_json(m: &ComplexMatrix) -> Value {
    serde_json::to_value(MatrixDoc::from_matrix(m)).expect("matrix documents always serialise")
}

fn vector_json(v: &ComplexVector) -> Value {
    Value::Array(v.iter().map(|z| json!([z.re, z.im])).collect())
}

pub fn norm(a: &ComplexMatrix) -> Result<Output, CliError> {
    let s = svd(a)?;
    Ok(Output {
        decision: Decision::Decisive,
        json: json!({
            "command": "norm",
            "norm": s.norm(),
            "singular_values": s.singular_values,
        }),
        text: format!("operator norm {:.12}\n", s.norm()),
    })
}

pub(crate) fn verdict_json(
    a: &ComplexMatrix,
    w: &SubspaceBasis,
    v: &OrthoVerdict,
    cfg: &ToleranceConfig,
) -> Result<Value, CliError> {
    let mut out = json!({
        "verdict": v.label(),
        "norm": operator_norm(a)?,
        "subspace_dim": w.dim(),
    });
    match v {
        OrthoVerdict::Orthogonal(c) => {
            let report = validate_certificate(a, w, &c.p, cfg)?;
            out["certificate"] = json!({
                "p": matrix_json(&c.p),
                "weights": c.weights,
                "rank": c.rank,
                "multiplicity": c.multiplicity,
                "trivial": c.trivial,
                "residual_eigen": report.residual_eigen,
                "residual_trace": report.residual_trace,
                "residual_membership": report.residual_membership,
                "min_eigenvalue": report.min_eigenvalue,
                "trace_defect": report.trace_defect,
                "hermitian_defect": report.hermitian_defect,
                "valid": report.pass,
            });
        }
        OrthoVerdict::NotOrthogonal(d) => {
            out["witness"] = json!({
                "w": matrix_json(&d.witness),
                "direction": matrix_json(&d.direction),
                "step": d.step,
                "norm_before": d.norm,
                "norm_after": d.achieved_norm,
                "directional_derivative": d.directional_derivative,
            });
        }
        OrthoVerdict::Inconclusive(diag) => {
            out["diagnostics"] = json!({
                "min_directional_derivative": diag.min_directional_derivative,
                "derivative_lower_bound": diag.derivative_lower_bound,
                "certificate_reasons": diag.certificate.as_ref().map(|r| r.reasons.clone()),
                "note": diag.note,
            });
        }
    }
    Ok(out)
}

fn verdict_text(v: &OrthoVerdict) -> String {
    match v {
        OrthoVerdict::Orthogonal(c) => format!(
            "orthogonal (certificate rank {}, top multiplicity {})\n",
            c.rank, c.multiplicity
        ),
        OrthoVerdict::NotOrthogonal(d) => format!(
            "not orthogonal: ||A + W|| = {:.12} < ||A|| = {:.12}\n",
            d.achieved_norm, d.norm
        ),
        OrthoVerdict::Inconclusive(diag) => format!("inconclusive: {}\n", diag.note),
    }
}

fn decision_of(v: &OrthoVerdict) -> Decision {
    match v {
        OrthoVerdict::Inconclusive(_) => Decision::Inconclusive,
        _ => Decision::Decisive,
    }
}

pub fn ortho_check(
    a: &ComplexMatrix,
    w: &SubspaceBasis,
    cfg: &ToleranceConfig,
) -> Result<Output, CliError> {
    let v = check_orthogonality(a, w, cfg)?;
    let mut js = verdict_json(a, w, &v, cfg)?;
    js["command"] = json!("ortho-check");
    Ok(Output {
        decision: decision_of(&v),
        json: js,
        text: verdict_text(&v),
    })
}

pub fn minimal(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<Output, CliError> {
    let v = is_minimal(a, cfg)?;
    let n = a.nrows();
    let w = SubspaceBasis::diagonal(n, bjnear::Field::Real);
    let mut js = verdict_json(a, &w, &v, cfg)?;
    js["command"] = json!("minimal");
    js["minimal"] = json!(v.is_orthogonal());
    let text = match &v {
        OrthoVerdict::Orthogonal(_) => "minimal\n".to_string(),
        OrthoVerdict::NotOrthogonal(_) => format!("not minimal; {}", verdict_text(&v)),
        OrthoVerdict::Inconclusive(_) => verdict_text(&v),
    };
    Ok(Output {
        decision: decision_of(&v),
        json: js,
        text,
    })
}

pub fn bs_check(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<Output, CliError> {
    let v = bhatia_semrl_check(a, b, cfg)?;
    let mut text = if v.orthogonal {
        "orthogonal to the line through B".to_string()
    } else {
        format!(
            "not orthogonal to the line through B (support margin {:.3e})",
            v.support_margin
        )
    };
    if v.witness.is_some() {
        let _ = write!(
            text,
            "; witness inner product {:.3e}",
            v.inner_product.norm()
        );
    }
    text.push('\n');
    Ok(Output {
        decision: Decision::Decisive,
        json: json!({
            "command": "bs-check",
            "verdict": if v.orthogonal { "orthogonal" } else { "not_orthogonal" },
            "witness": v.witness.as_ref().map(vector_json),
            "eigen_residual": finite_or_null(v.eigen_residual),
            "inner_product": if v.witness.is_some() { json!([v.inner_product.re, v.inner_product.im]) } else { Value::Null },
            "support_margin": v.support_margin,
        }),
        text,
    })
}

fn finite_or_null(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::Null
    }
}

pub fn distance(
    a: &ComplexMatrix,
    alg: &AlgebraSpec,
    cfg: &ToleranceConfig,
) -> Result<Output, CliError> {
    let r = dist_to_algebra(a, alg, cfg)?;
    let text = format!(
        "distance {:.12}\nvariance {:.12}\ngap {:.3e} (tolerance {:.3e}, {})\n",
        r.dist,
        r.variance,
        r.gap,
        r.gap_tol,
        if r.certified {
            "certified"
        } else {
            "not certified"
        }
    );
    Ok(Output {
        decision: if r.certified {
            Decision::Decisive
        } else {
            Decision::Inconclusive
        },
        json: json!({
            "command": "distance",
            "dist": r.dist,
            "b0": matrix_json(&r.b0),
            "a0": matrix_json(&r.a0),
            "p": matrix_json(&r.p),
            "variance": r.variance,
            "gap": r.gap,
            "gap_tol": r.gap_tol,
            "certified": r.certified,
            "iterations": {
                "primal": r.iterations.primal,
                "certificate": r.iterations.certificate,
                "ascent": r.iterations.ascent,
            },
        }),
        text,
    })
}

pub fn variance(
    a: &ComplexMatrix,
    alg: &AlgebraSpec,
    density: Option<&ComplexMatrix>,
    cfg: &ToleranceConfig,
) -> Result<Output, CliError> {
    let (p, value, iterations) = match density {
        Some(p) => (p.clone(), variance_functional(a, p, alg, cfg)?, 0),
        None => {
            let m = maximize_variance(a, alg, cfg)?;
            (m.p, m.value, m.iterations)
        }
    };
    Ok(Output {
        decision: Decision::Decisive,
        json: json!({
            "command": "variance",
            "p": matrix_json(&p),
            "value": value,
            "lower_bound_on_dist": value.max(0.0).sqrt(),
            "maximised": density.is_none(),
            "iterations": iterations,
        }),
        text: format!(
            "variance {value:.12} (distance at least {:.12})\n",
            value.max(0.0).sqrt()
        ),
    })
}
