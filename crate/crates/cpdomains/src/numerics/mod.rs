//! Dense complex-matrix kernels and subspace arithmetic.
//!
//! Everything downstream reduces C*-algebraic definitions to three
//! primitives: a Hermitian eigendecomposition, a null-space extraction,
//! and orthonormal-subspace comparison. All values are immutable after
//! construction and all operations are pure and deterministic.

mod eig;
mod mat;
mod subspace;
mod tol;

pub use eig::{hermitian_eig, inv_sqrt_psd, lambda_max, op_norm};
pub use mat::{C64, Mat};
pub use subspace::{
    KernelAccumulator, OperatorSubspace, SubspaceComparison, null_space, numerical_rank,
    subspace_compare,
};
pub use tol::Tolerances;
