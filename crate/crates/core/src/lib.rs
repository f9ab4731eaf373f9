//! Exact arithmetic over cyclotomic fields and the joint spectra of matrix
//! pencils built from Fourier and complex Hadamard matrices.
//!
//! ```
//! use specpencil_core::{b_from_hadamard, fourier_matrix, omega_diag, pencil, VarSet};
//!
//! let n = 3;
//! let a = omega_diag(n);
//! let b = b_from_hadamard(&fourier_matrix(n))?;
//! let ab = a.matmul(&b)?;
//! let det = pencil(&[a, b, ab], VarSet::xyz())?.determinant()?;
//! assert_eq!(det.to_string(), "x^3 + y^3 + z^3 - 1");
//! # Ok::<(), specpencil_core::Error>(())
//! ```

pub mod construct;
pub mod cycfield;
pub mod error;
pub mod exactmat;
pub mod format;
pub mod mpoly;
pub mod perms;
pub mod search;
pub mod spectra;

pub use construct::{b_from_hadamard, b_hat, b_hat_hat, fourier_matrix, omega_diag};
pub use cycfield::{root_of_unity, BigRational, CycNumber};
pub use error::{Error, Result};
pub use exactmat::{pencil, ExactMatrix};
pub use mpoly::{is_proportional, MPoly, Monomial, Var, VarSet};
pub use perms::Permutation;
pub use search::{ClassificationReport, ScanOptions};
pub use spectra::{joint_spectrum_poly, Surface};
