//! Arithmetic of the chordal cubic fourfold
//!
//! `X ⊂ ℙ⁵` is the cubic hypersurface
//!
//! ```text
//!     P = x0·x12² + x1·x02² + x2·x01² − x01·x02·x12 − 4·x0·x1·x2
//! ```
//!
//! i.e. the locus where the symmetric matrix
//! `[[2x0, x01, x02], [x01, 2x1, x12], [x02, x12, 2x2]]` is singular. It is the
//! symmetric square of the projective plane: a point of `X(ℚ)` is an unordered
//! pair of rational plane points, or a pair of conjugate plane points over a
//! quadratic field.
//!
//! This crate is `no_std` (it needs `alloc`) and contains everything that is
//! pure computation:
//!
//! - [`exactmath`]: integer utilities, squarefree kernels, quadratic integers
//! - [`variety`]: points of `X`, discriminants, height, classification
//! - [`sym2`]: the isomorphism `Sym²(ℙ²) ≅ X` in both directions
//! - [`enumerate`]: point-counting engines, split into deterministic tasks
//! - [`densities`]: exact p-adic densities, Monte Carlo kernels for the real
//!   densities, and assembly of the predicted leading constants
//!
//! Scheduling, files and the command line live in the `chordal-cli` crate.

#![no_std]

extern crate alloc;

mod error;

pub mod densities;
pub mod enumerate;
pub mod exactmath;
pub mod sym2;
pub mod variety;

pub use error::{Error, Result};
