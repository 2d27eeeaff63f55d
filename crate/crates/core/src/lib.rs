//! Exact arithmetic for Clifford algebras, half-spin representations, pure
//! spinors and the level-changing maps between them.

pub mod bits;
pub mod cartan;
pub mod clifford;
pub mod error;
pub mod exterior;
pub mod grassmann;
pub mod ideal;
pub mod group;
pub mod linalg;
pub mod rational;
pub mod so;
pub mod spin;
pub mod transfer;
pub mod vector;

pub use clifford::{CliffordElement, Monomial, Symbol};
pub use error::{Error, Result};
pub use exterior::ExteriorVector;
pub use group::{GroupElement, random_group_element};
pub use rational::Rational;
pub use so::{RootVector, SoElement};
pub use spin::{Parity, SpinVector};
pub use vector::Vector;
