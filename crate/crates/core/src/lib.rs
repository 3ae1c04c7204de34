//! Birkhoff–James orthogonality of complex matrices to real or complex
//! matrix subspaces, and operator-norm distance to unital `*`-subalgebras
//! of `M_n(C)`.
//!
//! The crate is organised bottom-up:
//!
//! - [`numkit`]: dense complex kernels (SVD, Hermitian eigensolver, PSD
//!   pseudoinverse, top singular subspace, numerical-range zero test).
//! - [`spaces`]: subspaces of `M_n(C)` stored as orthonormal bases under the
//!   real or complex trace inner product.
//! - [`algebras`]: block-diagonal algebras `V (⊕ M_{n_i}) V*` and the scalar
//!   algebra `C·I`, with their conditional expectations.
//! - [`ortho`]: orthogonality decisions with density-matrix certificates or
//!   norm-reducing witnesses.
//! - [`distance`]: distance to an algebra, computed by a primal minimisation
//!   and a dual variance maximisation, reported with their duality gap.
//!
//! Solvers that run several independent starts use [`exec::Exec`], which
//! dispatches to rayon when the `parallel` feature is enabled.

#![forbid(unsafe_code)]

pub mod algebras;
pub mod distance;
pub mod error;
pub mod exec;
pub mod numkit;
pub mod ortho;
pub mod sample;
pub mod spaces;

pub use algebras::{AlgebraKind, AlgebraSpec};
pub use distance::DistanceReport;
pub use error::{Error, Result};
pub use exec::Exec;
pub use numkit::{ComplexMatrix, ComplexVector, ToleranceConfig, C64};
pub use ortho::{OrthoVerdict, OrthogonalityCertificate};
pub use spaces::{Field, SubspaceBasis};
