//! Real- or complex-linear subspaces `W ⊆ M_n(C)`.
//!
//! A subspace is stored as a basis that is orthonormal for the trace inner
//! product matching its field: `tr(X* Y)` for complex subspaces and
//! `Re tr(X* Y)` for real ones. Projection onto `W` is then a plain
//! coefficient sum; it is the adjoint of the inclusion `W -> M_n(C)`.

use crate::error::{Error, Result};
use crate::numkit::{check_finite, ensure_shape, inner, unit, ComplexMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    /// `tr(X* Y)`, or its real part for the real field.
    pub fn inner(self, x: &ComplexMatrix, y: &ComplexMatrix) -> C64 {
        let ip = inner(x, y);
        match self {
            Field::Complex => ip,
            Field::Real => C64::new(ip.re, 0.0),
        }
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Field::Real => "real",
            Field::Complex => "complex",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SubspaceBasis {
    n: usize,
    field: Field,
    basis: Vec<ComplexMatrix>,
}

/// Relative residual under which a spanning element counts as dependent.
const DEPENDENCE_REL_TOL: f64 = 1e-10;

impl SubspaceBasis {
    /// Modified Gram–Schmidt with one re-orthogonalisation pass. Elements
    /// whose residual falls below `1e-10` times the largest input norm are
    /// dropped.
    pub fn orthonormalize(spanning: &[ComplexMatrix], field: Field, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("ambient dimension must be at least 1"));
        }
        for x in spanning {
            check_finite(x)?;
            ensure_shape(x, n)?;
        }
        let max_norm = spanning.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if max_norm == 0.0 {
            return Err(Error::input("spanning set is empty or all zero"));
        }
        let mut basis: Vec<ComplexMatrix> = Vec::new();
        for x in spanning {
            let mut r = x.clone();
            for _ in 0..2 {
                for b in &basis {
                    let c = field.inner(b, &r);
                    r -= b * c;
                }
            }
            let nr = r.norm();
            if nr > DEPENDENCE_REL_TOL * max_norm {
                basis.push(r.unscale(nr));
            }
        }
        Ok(Self { n, field, basis })
    }

    /// Wraps a basis already known to be orthonormal.
    pub(crate) fn from_orthonormal(n: usize, field: Field, basis: Vec<ComplexMatrix>) -> Self {
        debug_assert!(!basis.is_empty());
        Self { n, field, basis }
    }

    /// `{X : tr X = 0}`: complex dimension `n² - 1`, real dimension
    /// `2n² - 2`.
    pub fn traceless(n: usize, field: Field) -> Result<Self> {
        let mut span = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    span.push(unit(n, i, j));
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            span.push(unit(n, i, i) - unit(n, n - 1, n - 1));
        }
        if field == Field::Real {
            let imag: Vec<ComplexMatrix> = span.iter().map(|x| x * C64::new(0.0, 1.0)).collect();
            span.extend(imag);
        }
        Self::orthonormalize(&span, field, n)
    }

    /// Diagonal matrices: `D_n(R)` for the real field, `D_n(C)` for the
    /// complex one.
    pub fn diagonal(n: usize, field: Field) -> Self {
        Self::from_orthonormal(n, field, (0..n).map(|i| unit(n, i, i)).collect())
    }

    pub fn ambient_n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[ComplexMatrix] {
        &self.basis
    }

    /// Orthonormal basis of `W` viewed as a real vector space under
    /// `Re tr(X* Y)`: the basis itself for real subspaces, `{B_j, i B_j}`
    /// for complex ones.
    pub fn real_generators(&self) -> Vec<ComplexMatrix> {
        match self.field {
            Field::Real => self.basis.clone(),
            Field::Complex => self
                .basis
                .iter()
                .flat_map(|b| [b.clone(), b * C64::new(0.0, 1.0)])
                .collect(),
        }
    }

    /// Largest entry of `Gram - I` in absolute value.
    pub fn gram_error(&self) -> f64 {
        let mut err: f64 = 0.0;
        for (i, a) in self.basis.iter().enumerate() {
            for (j, b) in self.basis.iter().enumerate() {
                let target = if i == j { 1.0 } else { 0.0 };
                err = err.max((self.field.inner(a, b) - C64::new(target, 0.0)).norm());
            }
        }
        err
    }

    /// Coordinates `<B_j, X>` of the projection of `X`; real for real
    /// subspaces.
    pub fn coefficients(&self, x: &ComplexMatrix) -> Result<Vec<C64>> {
        ensure_shape(x, self.n)?;
        Ok(self.basis.iter().map(|b| self.field.inner(b, x)).collect())
    }

    pub fn combine(&self, coeffs: &[C64]) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.n, self.n);
        for (b, c) in self.basis.iter().zip(coeffs) {
            out += b * *c;
        }
        out
    }

    /// Orthogonal projection onto `W`.
    pub fn project_onto(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(self.combine(&self.coefficients(x)?))
    }

    /// Orthogonal projection onto `W^⊥`.
    pub fn project_complement(&self, x: &ComplexMatrix) -> Result<ComplexMatrix> {
        Ok(x - self.project_onto(x)?)
    }

    /// `||X - P_W X||_F <= tol * (1 + ||X||_F)`.
    pub fn contains(&self, x: &ComplexMatrix, tol: f64) -> Result<bool> {
        Ok(self.project_complement(x)?.norm() <= tol * (1.0 + x.norm()))
    }
}
