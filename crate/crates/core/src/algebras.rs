//! Unital `*`-subalgebras of `M_n(C)`.
//!
//! An algebra is either the scalars `C·I` or `V (M_{n_1} ⊕ … ⊕ M_{n_k}) V*`
//! for a unitary `V` and block sizes summing to `n`. Its conditional
//! expectation (the trace-orthogonal projection onto the algebra) is
//! `X ↦ V · pinch(V* X V) · V*`, where the pinching keeps the diagonal
//! blocks and zeroes the rest. For the scalars it is `X ↦ (tr X / n) I`.

use crate::error::{Error, Result};
use crate::numkit::{
    check_finite, ensure_shape, identity, operator_norm, trace, unit, ComplexMatrix,
};
use crate::spaces::{Field, SubspaceBasis};

/// Tolerance on `||V*V - I||` when accepting a conjugating unitary.
pub const UNITARY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum AlgebraKind {
    Scalars,
    Blocks {
        sizes: Vec<usize>,
        unitary: ComplexMatrix,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraSpec {
    n: usize,
    kind: AlgebraKind,
}

fn check_sizes(sizes: &[usize], n: usize) -> Result<()> {
    if sizes.is_empty() || sizes.contains(&0) {
        return Err(Error::input("block sizes must be positive and non-empty"));
    }
    let total: usize = sizes.iter().sum();
    if total != n {
        return Err(Error::input(format!(
            "block sizes sum to {total}, expected {n}"
        )));
    }
    Ok(())
}

pub fn block_ranges(sizes: &[usize]) -> Vec<(usize, usize)> {
    sizes
        .iter()
        .scan(0, |start, &len| {
            let r = (*start, len);
            *start += len;
            Some(r)
        })
        .collect()
}

impl AlgebraSpec {
    pub fn scalars(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::input("ambient dimension must be at least 1"));
        }
        Ok(Self {
            n,
            kind: AlgebraKind::Scalars,
        })
    }

    /// Block-diagonal algebra `⊕ M_{n_i}` in the standard basis.
    pub fn blocks(sizes: &[usize]) -> Result<Self> {
        let n: usize = sizes.iter().sum();
        Self::conjugated(sizes, identity(n.max(1)))
    }

    /// `V (⊕ M_{n_i}) V*`.
    pub fn conjugated(sizes: &[usize], unitary: ComplexMatrix) -> Result<Self> {
        let n = unitary.nrows();
        check_finite(&unitary)?;
        ensure_shape(&unitary, n)?;
        check_sizes(sizes, n)?;
        let defect = operator_norm(&(unitary.adjoint() * &unitary - identity(n)))?;
        if defect > UNITARY_TOL {
            return Err(Error::input(format!(
                "conjugating matrix is not unitary (||V*V - I|| = {defect:.3e})"
            )));
        }
        Ok(Self {
            n,
            kind: AlgebraKind::Blocks {
                sizes: sizes.to_vec(),
                unitary,
            },
        })
    }

    /// `D_n(C)`.
    pub fn diagonal(n: usize) -> Result<Self> {
        Self::blocks(&vec![1; n])
    }

    /// `M_n(C)` itself.
    pub fn full(n: usize) -> Result<Self> {
        Self::blocks(&[n])
    }

    pub fn ambient_n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn is_scalars(&self) -> bool {
        matches!(self.kind, AlgebraKind::Scalars)
    }

    pub fn block_sizes(&self) -> Option<&[usize]> {
        match &self.kind {
            AlgebraKind::Scalars => None,
            AlgebraKind::Blocks { sizes, .. } => Some(sizes),
        }
    }

    pub fn unitary(&self) -> Option<&ComplexMatrix> {
        match &self.kind {
            AlgebraKind::Scalars => None,
            AlgebraKind::Blocks { unitary, .. } => Some(unitary),
        }
    }

    /// Complex dimension.
    pub fn dim(&self) -> usize {
        match &self.kind {
            AlgebraKind::Scalars => 1,
            AlgebraKind::Blocks { sizes, .. } => sizes.iter().map(|s| s * s).sum(),
        }
    }

    /// `V* X V` (identity map for the scalars).
    pub(crate) fn to_frame(&self, x: &ComplexMatrix) -> ComplexMatrix {
        match &self.kind {
            AlgebraKind::Scalars => x.clone(),
            AlgebraKind::Blocks { unitary, .. } => unitary.adjoint() * x * unitary,
        }
    }

    /// `V X V*`.
    pub(crate) fn out_of_frame(&self, x: &ComplexMatrix) -> ComplexMatrix {
        match &self.kind {
            AlgebraKind::Scalars => x.clone(),
            AlgebraKind::Blocks { unitary, .. } => unitary * x * unitary.adjoint(),
        }
    }

    /// Conditional expectation expressed in the block frame: pinching, or
    /// the normalised trace for the scalars.
    pub(crate) fn frame_project(&self, x: &ComplexMatrix) -> ComplexMatrix {
        match &self.kind {
            AlgebraKind::Scalars => identity(self.n) * (trace(x) / self.n as f64),
            AlgebraKind::Blocks { sizes, .. } => pinch_unchecked(x, sizes),
        }
    }

    /// The algebra in its block frame (`V = I`) as a complex subspace.
    pub(crate) fn frame_basis(&self) -> SubspaceBasis {
        let n = self.n;
        let basis = match &self.kind {
            AlgebraKind::Scalars => vec![identity(n).unscale((n as f64).sqrt())],
            AlgebraKind::Blocks { sizes, .. } => block_units(sizes)
                .into_iter()
                .map(|(p, q)| unit(n, p, q))
                .collect(),
        };
        SubspaceBasis::from_orthonormal(n, Field::Complex, basis)
    }
}

fn block_units(sizes: &[usize]) -> Vec<(usize, usize)> {
    block_ranges(sizes)
        .into_iter()
        .flat_map(|(start, len)| {
            (start..start + len).flat_map(move |p| (start..start + len).map(move |q| (p, q)))
        })
        .collect()
}

fn pinch_unchecked(x: &ComplexMatrix, sizes: &[usize]) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(x.nrows(), x.ncols());
    for (start, len) in block_ranges(sizes) {
        out.view_mut((start, start), (len, len))
            .copy_from(&x.view((start, start), (len, len)));
    }
    out
}

/// Keeps the diagonal blocks of `X` for the given partition.
pub fn pinch(x: &ComplexMatrix, sizes: &[usize]) -> Result<ComplexMatrix> {
    let n = x.nrows();
    ensure_shape(x, n)?;
    check_sizes(sizes, n)?;
    Ok(pinch_unchecked(x, sizes))
}

/// Trace-orthogonal projection of `X` onto the algebra.
pub fn cond_expect(x: &ComplexMatrix, alg: &AlgebraSpec) -> Result<ComplexMatrix> {
    ensure_shape(x, alg.n)?;
    Ok(alg.out_of_frame(&alg.frame_project(&alg.to_frame(x))))
}

/// `V* X V`; unitarily similar to `X`.
pub fn conjugate_to_blocks(x: &ComplexMatrix, alg: &AlgebraSpec) -> Result<ComplexMatrix> {
    ensure_shape(x, alg.n)?;
    Ok(alg.to_frame(x))
}

/// The algebra as a complex subspace, with orthonormal basis
/// `V E_{pq} V*` over matrix units inside the diagonal blocks.
pub fn algebra_basis(alg: &AlgebraSpec) -> SubspaceBasis {
    let n = alg.n;
    let basis = match &alg.kind {
        AlgebraKind::Scalars => vec![identity(n).unscale((n as f64).sqrt())],
        AlgebraKind::Blocks { sizes, .. } => block_units(sizes)
            .into_iter()
            .map(|(p, q)| alg.out_of_frame(&unit(n, p, q)))
            .collect(),
    };
    SubspaceBasis::from_orthonormal(n, Field::Complex, basis)
}
