//! Second Conway coefficient and Δ-unknotting number of pretzel knots.
//!
//! [`a2`] computes `a2` by skein recursion, closed form or the Alexander
//! polynomial. [`delta`] turns it into an exact Δ-unknotting number or a
//! bound, and [`sweep`] runs both over grids of twist vectors.

pub mod a2;
pub mod cli;
pub mod delta;
pub mod diagram;
pub mod error;
pub mod formulas;
pub mod pretzel;
pub mod rational;
pub mod sweep;
pub mod table;

pub use error::{Error, Result};
pub use pretzel::TwistVector;
pub use rational::ExactRational;
