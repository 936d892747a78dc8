//! Natural frequencies and modal loss factors of three-layer laminated
//! glass beams with a viscoelastic interlayer.
//!
//! Four methods are available:
//!
//! * CNM: Newton iteration on the complex nonlinear eigenproblem of a
//!   layered Timoshenko finite element model (the reference);
//! * MSE: iterated real eigenproblem with modal strain energy loss factors;
//! * DET and EET: closed-form estimates through a complex effective
//!   thickness.
//!
//! SI units throughout unless a name says otherwise (`_mm`, `_mpa`, `_c`).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod band;
pub mod effective;
pub mod eigen;
pub mod error;
pub mod fem_beam;
pub mod materials;
pub mod oracle;
pub mod study;

pub use eigen::{Method, ModalResult, SolverSettings};
pub use error::{Error, Result};
pub use fem_beam::{BoundaryCondition, CrossSection, LaminatedBeam};
