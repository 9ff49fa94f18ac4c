//! An exact computational laboratory for semigroup dynamical systems.
//!
//! The crate models abelian left-cancellative monoids and their actions on
//! operator algebras with exact arithmetic throughout: Gaussian-rational
//! scalars, lazy column-finite operators on countable bases, the
//! constructible-ideal calculus over `ℤ`, covariance-relation checkers for
//! concrete representation pairs, and the explicit one-step isometric
//! dilation with its stage-by-stage verification.
//!
//! Nothing here is numerical in the floating-point sense. Every claimed
//! relation is evaluated on a finite window of basis vectors and reported
//! with an exact residual; zero means the relation holds on that window.

pub mod dilation;
pub mod error;
pub mod ideal;
pub mod operator;
pub mod report;
pub mod scalar;
pub mod semigroup;
pub mod systems;

pub use error::{LabError, Result};
