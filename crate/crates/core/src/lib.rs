//! Exact trace invariants of circle and torus actions on finite
//! equivariant CW complexes, computed by independent chain-level and
//! closed-form routes.

pub mod chaincx;
pub mod error;
pub mod groupring;
pub mod groups;
pub mod hochschild;
pub mod report;
pub mod s1cw;
pub mod seifert;
pub mod t2cw;

pub use error::{Error, Result};
