//! Affine cartesian evaluation codes over chains of finite subfields.
//!
//! The crate builds the point set `X = K_1 x ... x K_n`, the code `C_X(d)`
//! of reduced polynomials of degree at most `d`, computes its parameters in
//! closed form, enumerates codewords exhaustively and certifies the shape of
//! the minimal-weight words up to the affine group of X.

pub mod error;
pub mod gf;
pub mod affine;
pub mod code;
pub mod linalg;
pub mod minwords;
pub mod poly;
pub mod search;
pub mod spec;
pub mod cli;

pub use error::{Error, Result};
pub use gf::{FieldCtx, FieldElement};
pub use poly::{CartesianSet, ReducedPoly};
