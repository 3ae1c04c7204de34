//! Worked examples with known answers, rerun as regressions.

use bjnear::distance::{dist_to_algebra, dist_to_scalars, maximize_variance};
use bjnear::numkit::{identity, operator_norm, real_diag, real_matrix, trace};
use bjnear::ortho::{bhatia_semrl_check, check_orthogonality, is_minimal, traceless_descent};
use bjnear::{sample, AlgebraSpec, ComplexMatrix, Field, SubspaceBasis, ToleranceConfig, C64};
use serde_json::json;

use crate::commands::{Decision, Output};
use crate::error::CliError;

struct Case {
    name: &'static str,
    pass: bool,
    detail: String,
}

fn scalars(n: usize) -> Result<SubspaceBasis, CliError> {
    Ok(SubspaceBasis::orthonormalize(
        &[identity(n)],
        Field::Complex,
        n,
    )?)
}

fn sum_of_orthogonal_pair(cfg: &ToleranceConfig) -> Result<Case, CliError> {
    let a1 = real_matrix(3, &[0., 1., 0., 1., 0., 1., 0., 1., 0.]);
    let a2 = real_matrix(3, &[0., 0., 1., 0., 0., 0., 1., 0., 0.]);
    let sum = &a1 + &a2;
    let w = scalars(3)?;
    let o1 = check_orthogonality(&a1, &w, cfg)?.is_orthogonal();
    let o2 = check_orthogonality(&a2, &w, cfg)?.is_orthogonal();
    let o_sum = check_orthogonality(&sum, &w, cfg)?.is_not_orthogonal();
    let norm = operator_norm(&sum)?;
    let r = dist_to_scalars(&sum, cfg)?;
    let z = r.b0[(0, 0)];
    let pass = o1
        && o2
        && o_sum
        && (norm - 2.0).abs() <= 1e-10
        && (r.dist - 1.5).abs() <= 1e-6
        && (z - C64::new(0.5, 0.0)).norm() <= 1e-6;
    Ok(Case {
        name: "orthogonal pair with non-orthogonal sum",
        pass,
        detail: format!(
            "A1 orthogonal {o1}, A2 orthogonal {o2}, sum not orthogonal {o_sum}, ||A1+A2|| = {norm:.9}, dist = {:.9} at z = {:.9}",
            r.dist, z.re
        ),
    })
}

fn scalar_against_traceless(cfg: &ToleranceConfig) -> Result<Case, CliError> {
    let n = 3;
    let a = identity(n) * C64::new(2.0, -1.0);
    let w = SubspaceBasis::traceless(n, Field::Complex)?;
    let v = check_orthogonality(&a, &w, cfg)?;
    let rank = match &v {
        bjnear::OrthoVerdict::Orthogonal(c) => c.rank,
        _ => 0,
    };
    Ok(Case {
        name: "scalar matrix against traceless matrices",
        pass: rank == n,
        detail: format!("verdict {}, certificate rank {rank} of {n}", v.label()),
    })
}

fn diagonal_against_traceless(cfg: &ToleranceConfig) -> Result<Case, CliError> {
    let d = real_diag(&[2.0, -1.0, 0.5]);
    let t = traceless_descent(&d, cfg)?;
    let w = t.as_ref().and_then(|t| t.diagonal.clone());
    let (tr, before, after) = match &w {
        Some(w) => (
            trace(w).norm(),
            operator_norm(&d)?,
            operator_norm(&(&d + w))?,
        ),
        None => (f64::NAN, f64::NAN, f64::NAN),
    };
    let v = check_orthogonality(&d, &SubspaceBasis::traceless(3, Field::Complex)?, cfg)?;
    Ok(Case {
        name: "non-scalar diagonal against traceless matrices",
        pass: w.is_some() && tr <= 1e-12 && after <= before - 1e-9 && v.is_not_orthogonal(),
        detail: format!(
            "|tr W| = {tr:.1e}, ||D + W|| = {after:.9} < ||D|| = {before:.9}, solver verdict {}",
            v.label()
        ),
    })
}

fn two_by_two_diagonal(cfg: &ToleranceConfig) -> Result<Case, CliError> {
    let a = ComplexMatrix::from_row_slice(
        2,
        2,
        &[
            C64::new(1.0, 0.0),
            C64::new(2.0, 0.0),
            C64::new(0.0, 3.0),
            C64::new(-1.0, 0.0),
        ],
    );
    let r = dist_to_algebra(&a, &AlgebraSpec::diagonal(2)?, cfg)?;
    let w = SubspaceBasis::diagonal(2, Field::Complex);
    let off = real_matrix(2, &[0.0, 2.0, 1.0, 0.0]);
    let off_orth = check_orthogonality(&off, &w, cfg)?.is_orthogonal();
    let not_orth = check_orthogonality(&a, &w, cfg)?.is_not_orthogonal();
    Ok(Case {
        name: "2x2 distance and orthogonality to diagonals",
        pass: (r.dist - 3.0).abs() <= 1e-8 && off_orth && not_orth,
        detail: format!(
            "dist = {:.9} (largest off-diagonal 3), zero diagonal orthogonal {off_orth}, nonzero diagonal not orthogonal {not_orth}",
            r.dist
        ),
    })
}

fn minimal_hermitian(cfg: &ToleranceConfig) -> Result<Case, CliError> {
    let flip = real_matrix(2, &[0.0, 1.0, 1.0, 0.0]);
    let tilted = real_matrix(2, &[1.0, 1.0, 1.0, 0.0]);
    let m1 = is_minimal(&flip, cfg)?.is_orthogonal();
    let m2 = is_minimal(&tilted, cfg)?.is_not_orthogonal();
    Ok(Case {
        name: "minimal hermitian matrices",
        pass: m1 && m2,
        detail: format!("[[0,1],[1,0]] minimal {m1}, [[1,1],[1,0]] not minimal {m2}"),
    })
}

fn single_direction(cfg: &ToleranceConfig) -> Result<Case, CliError> {
    let i2 = identity(2);
    let flip_sign = real_diag(&[1.0, -1.0]);
    let yes = bhatia_semrl_check(&i2, &flip_sign, cfg)?.orthogonal;
    let no = !bhatia_semrl_check(&real_diag(&[1.0, 0.5]), &i2, cfg)?.orthogonal;
    Ok(Case {
        name: "orthogonality to a single direction",
        pass: yes && no,
        detail: format!("I vs diag(1,-1) orthogonal {yes}, diag(1,0.5) vs I not orthogonal {no}"),
    })
}

fn scalar_duality(cfg: &ToleranceConfig) -> Result<Case, CliError> {
    let mut rng = sample::rng(cfg.seed);
    let a = sample::gaussian(3, 3, &mut rng);
    let r = dist_to_scalars(&a, cfg)?;
    let v = maximize_variance(&a, &AlgebraSpec::scalars(3)?, cfg)?;
    let d2 = r.dist * r.dist;
    let tol = 1e-5 * (1.0 + operator_norm(&a)?.powi(2));
    Ok(Case {
        name: "distance to scalars equals the largest variance",
        pass: r.certified && (d2 - v.value).abs() <= tol,
        detail: format!(
            "dist^2 = {d2:.9}, max variance = {:.9}, gap {:.1e}",
            v.value, r.gap
        ),
    })
}

pub fn run(cfg: &ToleranceConfig) -> Result<Output, CliError> {
    let cases = [
        sum_of_orthogonal_pair(cfg)?,
        scalar_against_traceless(cfg)?,
        diagonal_against_traceless(cfg)?,
        two_by_two_diagonal(cfg)?,
        minimal_hermitian(cfg)?,
        single_direction(cfg)?,
        scalar_duality(cfg)?,
    ];
    let passed = cases.iter().filter(|c| c.pass).count();
    let mut text = String::new();
    for c in &cases {
        text.push_str(&format!(
            "{} {}: {}\n",
            if c.pass { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        ));
    }
    text.push_str(&format!("{passed}/{} passed\n", cases.len()));
    let json = json!({
        "command": "demo",
        "seed": cfg.seed,
        "passed": passed,
        "total": cases.len(),
        "cases": cases
            .iter()
            .map(|c| json!({"name": c.name, "pass": c.pass, "detail": c.detail}))
            .collect::<Vec<_>>(),
    });
    Ok(Output {
        decision: if passed == cases.len() {
            Decision::Decisive
        } else {
            Decision::Failed
        },
        json,
        text,
    })
}
