//! Dense complex linear-algebra kernels.
//!
//! Matrices are plain `nalgebra` dense matrices of `Complex64`. Every public
//! entry point rejects non-finite input. Decompositions are made
//! deterministic: inside a degenerate singular (or eigen) space the basis is
//! rebuilt canonically from the space's orthogonal projector, so two calls on
//! the same input always return identical vectors.

mod numrange;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

pub use num_complex::Complex64 as C64;
pub use numrange::{numrange_contains_zero, numrange_zero_search, NumRangeVerdict};

pub type ComplexMatrix = DMatrix<C64>;
pub type ComplexVector = DVector<C64>;

/// Relative spread under which computed singular values or eigenvalues are
/// treated as one degenerate cluster when canonicalising bases.
const DEGENERACY_REL_TOL: f64 = 1e-12;

/// Singular values at or below this fraction of `s_1` are numerically zero.
const ZERO_REL_TOL: f64 = 1e-13;

/// Numerical tolerances shared by all solvers.
#[derive(Clone, Debug, PartialEq)]
pub struct ToleranceConfig {
    /// `s_1 - s_j <= multiplicity_rel_tol * s_1` puts `s_j` in the top cluster.
    pub multiplicity_rel_tol: f64,
    /// Eigenvalues below `rank_rel_tol * lambda_max` count as zero.
    pub rank_rel_tol: f64,
    pub feasibility_tol: f64,
    pub solver_tol: f64,
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            multiplicity_rel_tol: 1e-8,
            rank_rel_tol: 1e-10,
            feasibility_tol: 1e-9,
            solver_tol: 1e-7,
            max_iter: 10_000,
            seed: 0,
        }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        let tols = [
            ("multiplicity_rel_tol", self.multiplicity_rel_tol),
            ("rank_rel_tol", self.rank_rel_tol),
            ("feasibility_tol", self.feasibility_tol),
            ("solver_tol", self.solver_tol),
        ];
        for (name, v) in tols {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::input(format!("{name} must be positive, got {v}")));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::input("max_iter must be at least 1"));
        }
        Ok(())
    }
}

/// Builds a matrix from row-major entries.
pub fn matrix_from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<ComplexMatrix> {
    if rows == 0 || cols == 0 {
        return Err(Error::input("matrix must have at least one row and column"));
    }
    if entries.len() != rows * cols {
        return Err(Error::dims(
            format!("{} entries", rows * cols),
            format!("{} entries", entries.len()),
        ));
    }
    let m = ComplexMatrix::from_row_slice(rows, cols, entries);
    check_finite(&m)?;
    Ok(m)
}

/// Square matrix from real row-major entries.
///
/// # Panics
///
/// If `entries.len() != n * n`.
pub fn real_matrix(n: usize, entries: &[f64]) -> ComplexMatrix {
    assert_eq!(entries.len(), n * n, "expected {} entries", n * n);
    ComplexMatrix::from_row_iterator(n, n, entries.iter().map(|&x| C64::new(x, 0.0)))
}

pub fn diag(values: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_column_slice(values))
}

pub fn real_diag(values: &[f64]) -> ComplexMatrix {
    ComplexMatrix::from_diagonal(&ComplexVector::from_iterator(
        values.len(),
        values.iter().map(|&x| C64::new(x, 0.0)),
    ))
}

pub fn identity(n: usize) -> ComplexMatrix {
    ComplexMatrix::identity(n, n)
}

/// Matrix unit `E_{ij}`.
pub fn unit(n: usize, i: usize, j: usize) -> ComplexMatrix {
    let mut e = ComplexMatrix::zeros(n, n);
    e[(i, j)] = C64::new(1.0, 0.0);
    e
}

pub fn check_finite(a: &ComplexMatrix) -> Result<()> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Err(Error::input("empty matrix"));
    }
    match a
        .iter()
        .position(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        None => Ok(()),
        Some(k) => {
            // nalgebra storage is column-major
            let (r, c) = (k % a.nrows(), k / a.nrows());
            Err(Error::input(format!("non-finite entry at ({r}, {c})")))
        }
    }
}

pub(crate) fn ensure_square(a: &ComplexMatrix) -> Result<usize> {
    if a.nrows() != a.ncols() {
        return Err(Error::dims(
            format!("square matrix, {} x {}", a.nrows(), a.nrows()),
            format!("{} x {}", a.nrows(), a.ncols()),
        ));
    }
    Ok(a.nrows())
}

pub(crate) fn ensure_shape(a: &ComplexMatrix, n: usize) -> Result<()> {
    if a.nrows() != n || a.ncols() != n {
        return Err(Error::dims(
            format!("{n} x {n}"),
            format!("{} x {}", a.nrows(), a.ncols()),
        ));
    }
    Ok(())
}

/// `(X + X*) / 2`.
pub fn herm_part(x: &ComplexMatrix) -> ComplexMatrix {
    (x + x.adjoint()).scale(0.5)
}

pub fn trace(x: &ComplexMatrix) -> C64 {
    x.diagonal().iter().sum()
}

/// `tr(X* Y)`.
pub fn inner(x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
    x.dotc(y)
}

pub fn frobenius_norm(x: &ComplexMatrix) -> f64 {
    x.norm()
}

/// `x* M x`.
pub fn quadratic_form(m: &ComplexMatrix, x: &ComplexVector) -> C64 {
    x.dotc(&(m * x))
}

/// Hermitian dilation `[[0, A], [A*, 0]]`, whose eigenvalues are `±s_i`
/// (plus `|rows - cols|` zeros). Its eigensolver is used for all singular
/// value work: nalgebra's complex SVD loses accuracy on some inputs with
/// repeated singular values.
fn dilation(a: &ComplexMatrix) -> ComplexMatrix {
    let (r, c) = a.shape();
    let mut h = ComplexMatrix::zeros(r + c, r + c);
    h.view_mut((0, r), (r, c)).copy_from(a);
    h.view_mut((r, 0), (c, r)).copy_from(&a.adjoint());
    h
}

fn raw_singular_values(a: &ComplexMatrix) -> Vec<f64> {
    let k = a.nrows().min(a.ncols());
    let mut ev: Vec<f64> = dilation(a)
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev.truncate(k);
    ev.iter_mut().for_each(|x| *x = x.max(0.0));
    ev
}

/// Largest singular value.
pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    check_finite(a)?;
    if a.iter().all(|z| *z == C64::new(0.0, 0.0)) {
        return Ok(0.0);
    }
    Ok(raw_singular_values(a)[0])
}

/// Sum of singular values.
pub fn trace_norm(a: &ComplexMatrix) -> Result<f64> {
    check_finite(a)?;
    Ok(raw_singular_values(a).iter().sum())
}

/// Thin singular value decomposition `A = U diag(s) V*`.
#[derive(Clone, Debug)]
pub struct SpectralData {
    /// Descending, non-negative.
    pub singular_values: Vec<f64>,
    /// `rows x k` with `k = min(rows, cols)`.
    pub left_vectors: ComplexMatrix,
    /// `cols x k`.
    pub right_vectors: ComplexMatrix,
}

impl SpectralData {
    pub fn norm(&self) -> f64 {
        self.singular_values[0]
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let s = DVector::from_iterator(
            self.singular_values.len(),
            self.singular_values.iter().map(|&x| C64::new(x, 0.0)),
        );
        let us = ComplexMatrix::from_fn(self.left_vectors.nrows(), s.len(), |i, j| {
            self.left_vectors[(i, j)] * s[j]
        });
        us * self.right_vectors.adjoint()
    }
}

/// Groups a descending sequence into runs whose consecutive gaps are at most
/// `abs_tol`. Returns `(start, len)` pairs.
fn clusters(values: &[f64], abs_tol: f64) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=values.len() {
        if i == values.len() || (values[i - 1] - values[i]).abs() > abs_tol {
            out.push((start, i - start));
            start = i;
        }
    }
    out
}

/// Rotates `v` so its first non-negligible component is real and positive.
/// Returns the phase that was applied.
fn phase_normalize(v: &mut ComplexVector) -> C64 {
    let amax = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if amax == 0.0 {
        return C64::new(1.0, 0.0);
    }
    let lead = v.iter().find(|z| z.norm() > 1e-8 * amax).copied().unwrap();
    let phase = lead.conj() / lead.norm();
    *v *= phase;
    phase
}

/// Canonical orthonormal basis for the column span of `cols` (assumed
/// orthonormal). The basis depends only on the span: columns are built by
/// pivoted Gram–Schmidt on the projected coordinate vectors `Q e_i`, then
/// phase-normalised.
pub(crate) fn canonical_basis(cols: &ComplexMatrix) -> ComplexMatrix {
    let (n, k) = cols.shape();
    if k == 0 {
        return cols.clone();
    }
    let mut cand: Vec<ComplexVector> = (0..n).map(|i| cols * cols.row(i).adjoint()).collect();
    let mut basis: Vec<ComplexVector> = Vec::with_capacity(k);
    for _ in 0..k {
        let norms: Vec<f64> = cand.iter().map(|c| c.norm()).collect();
        let max = norms.iter().copied().fold(0.0, f64::max);
        let pick = norms.iter().position(|&x| x >= max * (1.0 - 1e-9)).unwrap();
        let mut v = cand[pick].clone();
        for b in &basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
        let nv = v.norm();
        if nv == 0.0 {
            break;
        }
        v /= C64::new(nv, 0.0);
        phase_normalize(&mut v);
        for c in cand.iter_mut() {
            let p = v.dotc(c);
            *c -= &v * p;
        }
        basis.push(v);
    }
    if basis.len() < k {
        // Degenerate input; keep the original columns.
        return cols.clone();
    }
    ComplexMatrix::from_columns(&basis)
}

/// Singular values below this fraction of `s_1` get vectors from an
/// orthogonal complement rather than from the dilation's eigenvectors.
const VECTOR_REL_TOL: f64 = 1e-11;

/// Appends `count` orthonormal vectors orthogonal to `basis`, picking
/// coordinate vectors greedily by residual norm.
fn complete_basis(basis: &mut Vec<ComplexVector>, dim: usize, count: usize) {
    let target = basis.len() + count;
    while basis.len() < target {
        let mut best: Option<ComplexVector> = None;
        let mut best_norm = 0.0;
        for i in 0..dim {
            let mut e = ComplexVector::zeros(dim);
            e[i] = C64::new(1.0, 0.0);
            for _ in 0..2 {
                for b in basis.iter() {
                    let c = b.dotc(&e);
                    e -= b * c;
                }
            }
            let ne = e.norm();
            if ne > best_norm * (1.0 + 1e-9) {
                best_norm = ne;
                best = Some(e);
            }
        }
        let v = best.expect("complement is non-empty");
        basis.push(v.unscale(best_norm));
    }
}

/// Orthogonalises `v` against `basis` and normalises it; `None` if little
/// is left.
fn orthonormal_against(mut v: ComplexVector, basis: &[ComplexVector]) -> Option<ComplexVector> {
    let n0 = v.norm();
    for _ in 0..2 {
        for b in basis {
            let c = b.dotc(&v);
            v -= b * c;
        }
    }
    let nv = v.norm();
    (nv > 0.5 * n0 && nv > 0.0).then(|| v.unscale(nv))
}

/// Thin SVD, descending, from the dilation's eigenpairs.
fn raw_svd(a: &ComplexMatrix, k: usize) -> (Vec<f64>, ComplexMatrix, ComplexMatrix) {
    let (rows, cols) = a.shape();
    let dec = SymmetricEigen::new(dilation(a));
    let mut order: Vec<usize> = (0..rows + cols).collect();
    order.sort_by(|&i, &j| dec.eigenvalues[j].total_cmp(&dec.eigenvalues[i]));
    let s: Vec<f64> = order[..k]
        .iter()
        .map(|&i| dec.eigenvalues[i].max(0.0))
        .collect();
    let cut = VECTOR_REL_TOL * s.first().copied().unwrap_or(0.0);
    let mut us: Vec<ComplexVector> = Vec::with_capacity(k);
    let mut vs: Vec<ComplexVector> = Vec::with_capacity(k);
    for (j, &src) in order[..k].iter().enumerate() {
        if s[j] <= cut || s[j] == 0.0 {
            break;
        }
        let x = dec.eigenvectors.column(src);
        let Some(v) = orthonormal_against(x.rows(rows, cols).into_owned(), &vs) else {
            break;
        };
        let Some(u) = orthonormal_against(a * &v, &us) else {
            break;
        };
        vs.push(v);
        us.push(u);
    }
    let missing = k - vs.len();
    complete_basis(&mut vs, cols, missing);
    complete_basis(&mut us, rows, missing);
    (
        s,
        ComplexMatrix::from_columns(&us),
        ComplexMatrix::from_columns(&vs),
    )
}

/// Singular value decomposition with deterministic vectors.
pub fn svd(a: &ComplexMatrix) -> Result<SpectralData> {
    check_finite(a)?;
    let k = a.nrows().min(a.ncols());
    let (s, mut left, mut right) = raw_svd(a, k);

    let s1 = s[0];
    for (start, len) in clusters(&s, DEGENERACY_REL_TOL * s1) {
        let negligible = s1 == 0.0 || s[start] <= ZERO_REL_TOL * s1;
        if len == 1 {
            let mut v = right.column(start).into_owned();
            let phase = phase_normalize(&mut v);
            right.set_column(start, &v);
            if negligible {
                let mut u = left.column(start).into_owned();
                phase_normalize(&mut u);
                left.set_column(start, &u);
            } else {
                let u = left.column(start) * phase;
                left.set_column(start, &u);
            }
            continue;
        }
        let v_old = right.columns(start, len).into_owned();
        let v_new = canonical_basis(&v_old);
        let u_new = if negligible {
            canonical_basis(&left.columns(start, len).into_owned())
        } else {
            // A V_old = s U_old, so A (V_old R) = s (U_old R) with R = V_old* V_new.
            let r = v_old.adjoint() * &v_new;
            left.columns(start, len) * r
        };
        right.columns_mut(start, len).copy_from(&v_new);
        left.columns_mut(start, len).copy_from(&u_new);
    }

    Ok(SpectralData {
        singular_values: s,
        left_vectors: left,
        right_vectors: right,
    })
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues descending.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn max(&self) -> f64 {
        self.values[0]
    }

    pub fn min(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn top_vector(&self) -> ComplexVector {
        self.vectors.column(0).into_owned()
    }

    pub fn bottom_vector(&self) -> ComplexVector {
        self.vectors.column(self.values.len() - 1).into_owned()
    }
}

/// Eigen-decomposition of `H`, which must be Hermitian up to
/// `1e-10 * (1 + ||H||_F)` in Frobenius norm; `H` is symmetrised first.
pub fn hermitian_eig(h: &ComplexMatrix) -> Result<HermitianEig> {
    check_finite(h)?;
    ensure_square(h)?;
    let asym = (h - h.adjoint()).norm();
    if asym > 1e-10 * (1.0 + h.norm()) {
        return Err(Error::input(format!(
            "matrix is not Hermitian (||H - H*||_F = {asym:.3e})"
        )));
    }
    Ok(hermitian_eig_unchecked(&herm_part(h)))
}

/// Eigen-decomposition of an exactly Hermitian matrix.
pub(crate) fn hermitian_eig_unchecked(h: &ComplexMatrix) -> HermitianEig {
    let n = h.nrows();
    let dec = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| dec.eigenvalues[j].total_cmp(&dec.eigenvalues[i]));
    let values: Vec<f64> = order.iter().map(|&i| dec.eigenvalues[i]).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &dec.eigenvectors.column(src));
    }
    let scale = values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    for (start, len) in clusters(&values, DEGENERACY_REL_TOL * scale) {
        let block = vectors.columns(start, len).into_owned();
        let canon = if len == 1 {
            let mut v = block.column(0).into_owned();
            phase_normalize(&mut v);
            ComplexMatrix::from_columns(&[v])
        } else {
            canonical_basis(&block)
        };
        vectors.columns_mut(start, len).copy_from(&canon);
    }
    HermitianEig { values, vectors }
}

/// Largest eigenvalue of an exactly Hermitian matrix together with a unit
/// eigenvector.
pub(crate) fn lambda_max(h: &ComplexMatrix) -> (f64, ComplexVector) {
    if h.nrows() == 1 {
        return (
            h[(0, 0)].re,
            ComplexVector::from_element(1, C64::new(1.0, 0.0)),
        );
    }
    let dec = SymmetricEigen::new(h.clone());
    let (imax, lmax) =
        dec.eigenvalues
            .iter()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, &l)| if l > acc.1 { (i, l) } else { acc },
            );
    (lmax, dec.eigenvectors.column(imax).into_owned())
}

/// Moore–Penrose inverse of a Hermitian positive semidefinite matrix.
pub fn mp_inverse(h: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<ComplexMatrix> {
    let eig = hermitian_eig(h)?;
    let scale = eig.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let cutoff = cfg.rank_rel_tol * scale;
    if eig.min() < -cutoff {
        return Err(Error::input(format!(
            "matrix is not positive semidefinite (min eigenvalue {:.3e})",
            eig.min()
        )));
    }
    Ok(pinv_from_eig(&eig, cutoff))
}

pub(crate) fn pinv_from_eig(eig: &HermitianEig, cutoff: f64) -> ComplexMatrix {
    let n = eig.vectors.nrows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (j, &l) in eig.values.iter().enumerate() {
        if l > cutoff {
            let v = eig.vectors.column(j);
            out += (v * v.adjoint()).scale(1.0 / l);
        }
    }
    out
}

/// Top right-singular subspace of `A`.
#[derive(Clone, Debug)]
pub struct TopSubspace {
    pub norm: f64,
    /// `m(A)`: size of the top singular cluster.
    pub multiplicity: usize,
    /// `n x m` orthonormal columns spanning the cluster's right-singular space.
    pub vectors: ComplexMatrix,
    pub singular_values: Vec<f64>,
}

pub fn top_singular_subspace(a: &ComplexMatrix, cfg: &ToleranceConfig) -> Result<TopSubspace> {
    top_singular_subspace_rel(a, cfg.multiplicity_rel_tol)
}

/// As [`top_singular_subspace`] with an explicit relative cluster width.
pub fn top_singular_subspace_rel(a: &ComplexMatrix, rel_tol: f64) -> Result<TopSubspace> {
    let sd = svd(a)?;
    let s1 = sd.norm();
    if s1 == 0.0 {
        return Err(Error::input(
            "top singular subspace of the zero matrix is undefined",
        ));
    }
    let m = sd
        .singular_values
        .iter()
        .take_while(|&&s| s1 - s <= rel_tol * s1)
        .count();
    let vectors = canonical_basis(&sd.right_vectors.columns(0, m).into_owned());
    Ok(TopSubspace {
        norm: s1,
        multiplicity: m,
        vectors,
        singular_values: sd.singular_values,
    })
}

#[cfg(test)]
mod tests;
