//! Constructive polynomial representations of elementary semi-algebraic sets.
//!
//! Given polynomials `p_1, ..., p_s` whose nonnegativity region `P` is
//! non-empty and bounded, this crate builds a system of `n + 1` (or `n`, when
//! the set of maximally active points is finite) polynomials with the same
//! closed set `P` and the same open set `P_0`. Here `n` is the largest number of
//! constraints that vanish simultaneously at a point of `P`.
//!
//! The parameter searches that make the construction effective need answers
//! to first-order questions about real polynomials. Those are answered by a
//! numerical oracle ([`oracle`]) built on outward-rounded interval
//! branch-and-bound with sampling falsifiers; it answers `Proved`, `Refuted`
//! (with a witness) or `Unknown`.
//!
//! Module map:
//!
//! * [`poly`]: sparse multivariate polynomials over `f64`, double-double or
//!   exact rationals.
//! * [`elemsym`]: elementary symmetric functions of numbers and of systems.
//! * [`oracle`]: interval arithmetic, branch-and-bound and the decision queries.
//! * [`construct`]: parameter searches and assembly of the reduced systems.
//! * [`verify`]: grid equivalence, Hausdorff estimates and the approximation
//!   composites.
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod construct;
pub mod elemsym;
mod error;
pub mod oracle;
pub mod poly;
pub mod system;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{Dd, Monomial, Polynomial, Precision, Rational};
pub use system::{AffineFrame, System};
