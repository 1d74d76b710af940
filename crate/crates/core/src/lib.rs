//! Abelian varieties isogenous to a power of an elliptic curve over a finite field,
//! studied through modules over the curve's endomorphism order.

pub mod arith;
pub mod config;
pub mod decide;
pub mod error;
pub mod functor;
pub mod intmat;
pub mod kernels;
pub mod modules;
pub mod ntheory;
pub mod orders;
pub mod zmod;

pub use config::Bounds;
pub use error::{Error, Result};
