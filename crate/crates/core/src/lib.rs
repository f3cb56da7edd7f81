//! Exact computation of the relative K-groups `K_{2r-1}(k[x]/(x^e), (x))` for
//! prime fields `k = F_p`.
//!
//! The crate is organised bottom-up:
//!
//! * [`exactalg`]: integer and `F_p` linear algebra (Smith normal form, kernels
//!   of maps between finite cyclic products, ranks and homology over `F_p`).
//! * [`witt`]: big and p-typical Witt vectors through the ghost map.
//! * [`wittsplit`]: the decomposition of `W_{re}(k)/V_e W_r(k)` into p-typical
//!   factors, with an enumeration oracle.
//! * [`cycbar`]: weight-graded normalized cyclic bar complexes of the pointed
//!   monoid `{0, 1, x, ..., x^{e-1}}`, their homology and Connes' operator.
//! * [`ssengine`]: bookkeeping for the Tate and homotopy fixed point spectral
//!   sequences.
//! * [`tcassemble`]: equalizer kernels per weight class and assembly of the
//!   TC / K groups.
//! * [`verify`]: named verification suites shared by the CLI and the tests.

pub mod cycbar;
pub mod error;
pub mod exactalg;
pub mod numtheory;
pub mod ssengine;
pub mod tcassemble;
pub mod verify;
pub mod witt;
pub mod wittsplit;

pub use error::{Error, Result};
pub use exactalg::{FpMatrix, GroupStructure, IntMatrix};
pub use witt::{CoeffRing, TruncationSet, WittVector};
pub use wittsplit::SplitParams;
