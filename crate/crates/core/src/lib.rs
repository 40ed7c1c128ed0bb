//! Exact cohomology computations for compact Lie groups and their central
//! quotients, driven by Schubert presentations of flag manifolds.
//!
//! Layering, bottom to top: [`arith`], [`poly`], [`linalg`], [`graded`] form
//! the symbolic substrate; [`roots`] and [`flag`] hold group data;
//! [`koszul`] and [`engine`] implement the E₃-page calculus; [`binomial`]
//! covers the gcd/valuation arithmetic; [`assembler`] builds the final rings
//! and [`verify`] runs the acceptance battery.

pub mod arith;
pub mod assembler;
pub mod binomial;
pub mod engine;
pub mod error;
pub mod flag;
pub mod graded;
pub mod koszul;
pub mod linalg;
pub mod par;
pub mod poly;
pub mod render;
pub mod roots;
pub mod tables;
pub mod verify;

pub use error::{Error, Result};
pub use flag::RingPresentation;
pub use graded::{GradedAbelianGroup, QuotientRing};
pub use linalg::{IntMatrix, SnfResult};
pub use poly::{CoeffRing, Context, Poly};
pub use roots::{Family, GroupSpec, Lattice, TransgressionData};
