//! Double forms, algebraic curvature tensors and the H. Weyl curvature
//! invariants `h_{2q}`.
//!
//! The crate is organised bottom-up:
//!
//! * [`dfcore`]: the ring of double forms (product, contraction, metric
//!   multiplication, Hodge star, inner product).
//! * [`curvature`]: algebraic curvature tensors, their orthogonal
//!   decomposition and the invariants `h_{2q}`, `h₄`.
//! * [`models`]: closed-form model tensors and random generators.
//! * [`pcurv`]: p-curvature on tangent planes and sampled positivity checks.
//! * [`neck`]: leading-order `h₄` of a surgery neck and a bending planner.
//! * [`io`] and [`verify`]: file formats and the property suites driven by
//!   the command-line tool.

pub mod curvature;
pub mod dfcore;
pub mod error;
pub mod io;
pub mod models;
pub mod neck;
pub mod pcurv;
pub mod scalar;
pub mod verify;

pub use curvature::{CurvatureTensor, InvariantReport, WeylDecomposition};
pub use dfcore::{DoubleForm, MultiIndex};
pub use error::{Error, Result};
pub use neck::{NeckParams, NeckState};
pub use pcurv::PPlane;
pub use scalar::{Exact, Scalar};
