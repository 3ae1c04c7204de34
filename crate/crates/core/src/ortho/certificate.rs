//! Density-matrix certificates of orthogonality.

use nalgebra::{DMatrix, DVector};

use super::descent::dual_solve;
use super::{
    herm_to_vec, project_spectahedron, validate_pair, vec_to_herm, Compressed, RANK_THRESHOLD,
};
use crate::error::Result;
use crate::numkit::{
    check_finite, ensure_shape, herm_part, hermitian_eig_unchecked, identity, operator_norm,
    top_singular_subspace, trace, ComplexMatrix, ToleranceConfig,
};
use crate::spaces::SubspaceBasis;

const CHECK_EVERY: usize = 10;
/// Relative eigenvalue thresholds used to guess the face of the density
/// cone a near-feasible point lies on.
const FACE_THRESHOLDS: [f64; 4] = [1e-3, 1e-5, 1e-7, 0.0];

/// A density matrix `P` with `A*A P = ||A||² P` and `AP ⊥ W`, stored with
/// its eigenpairs.
#[derive(Clone, Debug)]
pub struct OrthogonalityCertificate {
    pub p: ComplexMatrix,
    /// Eigenvalues `t_i` of `P` above the rank threshold, descending.
    pub weights: Vec<f64>,
    /// Matching unit eigenvectors as columns.
    pub vectors: ComplexMatrix,
    pub rank: usize,
    pub multiplicity: usize,
    pub residual_eigen: f64,
    pub residual_trace: f64,
    pub residual_membership: f64,
    /// Set for `A = 0`, where every density works.
    pub trivial: bool,
}

/// Residuals of a candidate certificate and whether they are within
/// tolerance.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    pub pass: bool,
    /// `||A*A P - ||A||² P||_F`.
    pub residual_eigen: f64,
    /// `|tr(A*A P) - ||A||²|`.
    pub residual_trace: f64,
    /// Frobenius norm of the projection of `AP` onto `W`.
    pub residual_membership: f64,
    pub rank: usize,
    pub multiplicity: usize,
    pub min_eigenvalue: f64,
    pub trace_defect: f64,
    pub hermitian_defect: f64,
    pub reasons: Vec<String>,
}

/// Result of [`find_certificate`]: the certificate when one validated, and
/// the report of the best candidate either way.
#[derive(Clone, Debug)]
pub struct CertificateSearch {
    pub certificate: Option<OrthogonalityCertificate>,
    pub report: CertificateReport,
    pub iterations: usize,
}

/// Checks a candidate certificate. Residual tolerances are
/// `feasibility_tol` scaled by `max(1, ||A||²)` for the quadratic residuals
/// and by `max(1, ||A||)` for membership.
pub fn validate_certificate(
    a: &ComplexMatrix,
    w: &SubspaceBasis,
    p: &ComplexMatrix,
    cfg: &ToleranceConfig,
) -> Result<CertificateReport> {
    validate_pair(a, w)?;
    check_finite(p)?;
    ensure_shape(p, w.ambient_n())?;
    let tol = cfg.feasibility_tol;
    let mut reasons = Vec::new();
    let hermitian_defect = (p - p.adjoint()).norm();
    if hermitian_defect > tol {
        reasons.push(format!(
            "P is not Hermitian (defect {hermitian_defect:.3e})"
        ));
    }
    let ph = herm_part(p);
    let eig = hermitian_eig_unchecked(&ph);
    let min_eigenvalue = eig.min();
    if min_eigenvalue < -tol {
        reasons.push(format!("P has negative eigenvalue {min_eigenvalue:.3e}"));
    }
    let trace_defect = (trace(&ph).re - 1.0).abs();
    if trace_defect > tol {
        reasons.push(format!("tr P differs from 1 by {trace_defect:.3e}"));
    }
    let rank = eig.values.iter().filter(|&&l| l > RANK_THRESHOLD).count();
    let norm = operator_norm(a)?;
    if norm == 0.0 {
        let n = w.ambient_n();
        return Ok(CertificateReport {
            pass: reasons.is_empty(),
            residual_eigen: 0.0,
            residual_trace: 0.0,
            residual_membership: 0.0,
            rank,
            multiplicity: n,
            min_eigenvalue,
            trace_defect,
            hermitian_defect,
            reasons,
        });
    }
    let multiplicity = top_singular_subspace(a, cfg)?.multiplicity;
    let n2 = norm * norm;
    let ata = a.adjoint() * a;
    let atap = &ata * &ph;
    let residual_eigen = (&atap - ph.scale(n2)).norm();
    let residual_trace = (trace(&atap).re - n2).abs();
    let residual_membership = w.project_onto(&(a * &ph))?.norm();
    let quad_tol = tol * n2.max(1.0);
    let lin_tol = tol * norm.max(1.0);
    if residual_eigen > quad_tol {
        reasons.push(format!(
            "P is not supported on the top singular space (residual {residual_eigen:.3e})"
        ));
    }
    if residual_trace > quad_tol {
        reasons.push(format!("tr(A*A P) misses ||A||² by {residual_trace:.3e}"));
    }
    if residual_membership > lin_tol {
        reasons.push(format!(
            "AP has a component in the subspace of norm {residual_membership:.3e}"
        ));
    }
    if rank > multiplicity {
        reasons.push(format!("rank {rank} exceeds multiplicity {multiplicity}"));
    }
    Ok(CertificateReport {
        pass: reasons.is_empty(),
        residual_eigen,
        residual_trace,
        residual_membership,
        rank,
        multiplicity,
        min_eigenvalue,
        trace_defect,
        hermitian_defect,
        reasons,
    })
}

fn to_certificate(p: ComplexMatrix, report: &CertificateReport) -> OrthogonalityCertificate {
    let eig = hermitian_eig_unchecked(&herm_part(&p));
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&j| eig.values[j] > RANK_THRESHOLD)
        .collect();
    let cols: Vec<_> = keep
        .iter()
        .map(|&j| eig.vectors.column(j).into_owned())
        .collect();
    let n = p.nrows();
    let vectors = if cols.is_empty() {
        ComplexMatrix::zeros(n, 0)
    } else {
        ComplexMatrix::from_columns(&cols)
    };
    OrthogonalityCertificate {
        weights: keep.iter().map(|&j| eig.values[j]).collect(),
        vectors,
        rank: report.rank,
        multiplicity: report.multiplicity,
        residual_eigen: report.residual_eigen,
        residual_trace: report.residual_trace,
        residual_membership: report.residual_membership,
        trivial: false,
        p,
    }
}

/// Orthonormal basis of the span of `rows` (modified Gram–Schmidt).
fn orthonormal_rows(rows: &[Vec<f64>]) -> Vec<DVector<f64>> {
    let scale = rows
        .iter()
        .map(|r| r.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mut out: Vec<DVector<f64>> = Vec::new();
    for r in rows {
        let mut v = DVector::from_column_slice(r);
        for _ in 0..2 {
            for q in &out {
                let c = q.dot(&v);
                v.axpy(-c, q, 1.0);
            }
        }
        let nv = v.norm();
        if nv > 1e-12 * scale {
            out.push(v / nv);
        }
    }
    out
}

/// Dykstra's alternating projections between the density matrices and the
/// null space of the constraints, started from `I/m`.
fn dykstra(comp: &Compressed, cfg: &ToleranceConfig) -> (ComplexMatrix, usize) {
    let m = comp.m();
    let rows: Vec<Vec<f64>> = comp.constraints.iter().map(herm_to_vec).collect();
    let q = orthonormal_rows(&rows);
    let start = identity(m).unscale(m as f64);
    if q.is_empty() {
        return (start, 0);
    }
    let project_null = |x: &DVector<f64>| {
        let mut out = x.clone();
        for qi in &q {
            let c = qi.dot(x);
            out.axpy(-c, qi, 1.0);
        }
        out
    };
    let project_density = |x: &DVector<f64>| {
        DVector::from_vec(herm_to_vec(&project_spectahedron(&vec_to_herm(
            x.as_slice(),
            m,
        ))))
    };
    let dim = m * m;
    let mut x = DVector::from_vec(herm_to_vec(&start));
    let mut p = DVector::zeros(dim);
    let mut r = DVector::zeros(dim);
    let mut y = x.clone();
    let target = 0.1 * cfg.feasibility_tol;
    let mut iterations = 0;
    for it in 1..=cfg.max_iter {
        iterations = it;
        y = project_density(&(&x + &p));
        p = &x + &p - &y;
        let x_new = project_null(&(&y + &r));
        r = &y + &r - &x_new;
        let moved = (&x_new - &x).norm();
        x = x_new;
        if it % CHECK_EVERY == 0 {
            let infeasible = (&y - project_null(&y)).norm();
            if infeasible <= target || moved == 0.0 {
                break;
            }
        }
    }
    (vec_to_herm(y.as_slice(), m), iterations)
}

/// Affine projection of `t0` onto the constraints within the face spanned
/// by its eigenvectors above `rel * λ_max`, kept only if it stays PSD.
fn polish(comp: &Compressed, t0: &ComplexMatrix, rel: f64) -> Option<ComplexMatrix> {
    let eig = hermitian_eig_unchecked(&herm_part(t0));
    let cut = rel * eig.max();
    let r = eig.values.iter().filter(|&&l| l > cut).count();
    if r == 0 {
        return None;
    }
    let u = eig.vectors.columns(0, r).into_owned();
    let dim = r * r;
    let mut rows: Vec<Vec<f64>> = comp
        .constraints
        .iter()
        .map(|g| herm_to_vec(&herm_part(&(u.adjoint() * g * &u))))
        .collect();
    rows.push(herm_to_vec(&identity(r)));
    let k = rows.len();
    let mat = DMatrix::from_fn(k, dim, |i, j| rows[i][j]);
    let mut rhs = DVector::zeros(k);
    rhs[k - 1] = 1.0;
    let s0 = DVector::from_vec(herm_to_vec(&(u.adjoint() * t0 * &u)));
    let pinv = mat.clone().pseudo_inverse(1e-12).ok()?;
    let s = &s0 - pinv * (&mat * &s0 - rhs);
    let sm = vec_to_herm(s.as_slice(), r);
    if hermitian_eig_unchecked(&sm).min() < -1e-13 {
        return None;
    }
    Some(&u * sm * u.adjoint())
}

/// Searches for an orthogonality certificate of `A` against `W`.
pub fn find_certificate(
    a: &ComplexMatrix,
    w: &SubspaceBasis,
    cfg: &ToleranceConfig,
) -> Result<CertificateSearch> {
    validate_pair(a, w)?;
    cfg.validate()?;
    let n = w.ambient_n();
    if operator_norm(a)? == 0.0 {
        let p = identity(n).unscale(n as f64);
        let report = validate_certificate(a, w, &p, cfg)?;
        let mut cert = to_certificate(p, &report);
        cert.trivial = true;
        return Ok(CertificateSearch {
            certificate: Some(cert),
            report,
            iterations: 0,
        });
    }
    let top = top_singular_subspace(a, cfg)?;
    let v = top.vectors.clone();
    let comp = Compressed::new(a, w, top);
    let lift = |t: &ComplexMatrix| herm_part(&(&v * t * v.adjoint()));

    let (t_dyk, mut iterations) = dykstra(&comp, cfg);
    let mut best: Option<(ComplexMatrix, CertificateReport)> = None;
    let mut consider = |t: &ComplexMatrix| -> Result<bool> {
        let p = lift(t);
        let report = validate_certificate(a, w, &p, cfg)?;
        let pass = report.pass;
        let better = match &best {
            None => true,
            Some((_, b)) => !b.pass && (pass || report.residual_membership < b.residual_membership),
        };
        if better {
            best = Some((p, report));
        }
        Ok(pass)
    };
    let mut found = consider(&t_dyk)?;
    for rel in FACE_THRESHOLDS {
        if found {
            break;
        }
        if let Some(t) = polish(&comp, &t_dyk, rel) {
            found = consider(&t)?;
        }
    }
    if !found {
        let dual = dual_solve(&comp, cfg, 1e-3 * cfg.feasibility_tol);
        iterations += dual.iterations;
        found = consider(&dual.t)?;
        for rel in FACE_THRESHOLDS {
            if found {
                break;
            }
            if let Some(t) = polish(&comp, &dual.t, rel) {
                found = consider(&t)?;
            }
        }
    }
    let (p, report) = best.expect("at least one candidate");
    let certificate = found.then(|| to_certificate(p, &report));
    Ok(CertificateSearch {
        certificate,
        report,
        iterations,
    })
}
