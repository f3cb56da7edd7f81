//! Exact linear algebra: integer matrices and their Smith normal form, kernels
//! of homomorphisms between finite products of cyclic groups, and ranks and
//! homology over `F_p`.

mod fp;
mod group;
mod int_matrix;
mod kernel;
mod snf;

pub use fp::{fp_homology, FpMatrix};
pub use group::GroupStructure;
pub use int_matrix::IntMatrix;
pub use kernel::{kernel_invariant_factors, kernel_invariants};
pub use snf::{smith_normal_form, SmithForm};
