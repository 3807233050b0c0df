//! Kashaev invariants of the hyperbolic knots 4_1, 5_2 and 6_1 at roots of
//! unity, the special functions behind their large-N asymptotics, and the
//! saddle-point hyperbolic volumes they grow towards.
//!
//! The crate is split the same way the computation is:
//!
//! * [`cyclo`] exact arithmetic in Q(ω), used as a ground-truth oracle;
//! * [`invariant`] the floating-point state sums with overflow-safe,
//!   deterministic parallel accumulation;
//! * [`qdilog`] Li₂, Lobachevsky's function and Faddeev's quantum dilogarithm;
//! * [`saddle`] stationary points of the dilogarithm potentials and volumes;
//! * [`asymfit`] growth-rate extraction from finite-N data;
//! * [`cli`] the `knotvol` command-line surface.

pub mod asymfit;
pub mod cli;
pub mod cyclo;
mod error;
pub mod invariant;
mod knot;
pub mod qdilog;
pub mod saddle;
pub mod verify;

pub use error::{Error, Result};
pub use knot::KnotId;
