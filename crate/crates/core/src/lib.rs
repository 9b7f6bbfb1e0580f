//! Exact tropicalization of subtraction-free functions, potential cones, and
//! weakly log-canonical Poisson brackets on the dual group of SL_n.

pub mod cones;
pub mod error;
pub mod expr;
pub mod bk;
pub mod gstar;
pub mod lie;
pub mod linalg;
pub mod lp;
pub mod par;
pub mod poly;
pub mod pt;
pub mod rational;
pub mod ring;
pub mod scaled;
pub mod tropical;
pub mod verify;

pub use error::{Error, Result};
pub use poly::{LaurentPolynomial, Q};
pub use rational::{PositiveRational, RationalFunction, SignedPositiveSum};
