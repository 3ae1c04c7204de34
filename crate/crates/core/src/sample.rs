//! Seeded random instances: Gaussian matrices, Haar-like unitaries, density
//! matrices. Used by the test suites, benches and the CLI demo.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::numkit::{trace, ComplexMatrix, ComplexVector, C64};

pub type SampleRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SampleRng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Entries i.i.d. standard complex Gaussian.
pub fn gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| complex_normal(rng))
}

pub fn real_gaussian<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    DMatrix::from_fn(rows, cols, |_, _| C64::new(rng.sample(StandardNormal), 0.0))
}

pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let g = gaussian(n, n, rng);
    (&g + g.adjoint()).scale(0.5)
}

/// Haar-distributed unitary (QR of a Gaussian matrix with the phases of
/// `diag(R)` removed).
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let qr = gaussian(n, n, rng).qr();
    let (mut q, r) = (qr.q(), qr.r());
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let ph = d / d.norm();
            let mut col = q.column_mut(j);
            col *= ph;
        }
    }
    q
}

pub fn unit_vector<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexVector {
    let v = ComplexVector::from_fn(n, |_, _| complex_normal(rng));
    let nv = v.norm();
    v / C64::new(nv, 0.0)
}

/// Random density matrix of the given rank (`Y Y* / tr(Y Y*)`, `Y` Gaussian
/// `n x rank`).
pub fn density<R: Rng + ?Sized>(n: usize, rank: usize, rng: &mut R) -> ComplexMatrix {
    let y = gaussian(n, rank.max(1), rng);
    let p = &y * y.adjoint();
    let t = trace(&p).re;
    p.scale(1.0 / t)
}

/// Random block algebra of dimension `n`: random block sizes and a random
/// conjugating unitary.
pub fn algebra<R: Rng + ?Sized>(n: usize, rng: &mut R) -> crate::algebras::AlgebraSpec {
    let mut sizes = Vec::new();
    let mut left = n;
    while left > 0 {
        let s = rng.random_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    crate::algebras::AlgebraSpec::conjugated(&sizes, unitary(n, rng)).expect("valid algebra")
}

/// Random element of an algebra.
pub fn algebra_element<R: Rng + ?Sized>(
    alg: &crate::algebras::AlgebraSpec,
    rng: &mut R,
) -> ComplexMatrix {
    let basis = crate::algebras::algebra_basis(alg);
    let coeffs: Vec<C64> = (0..basis.dim()).map(|_| complex_normal(rng)).collect();
    basis.combine(&coeffs)
}
