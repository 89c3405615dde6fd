//! Pressure-driven slip flow in straight channels: steady and transient flux,
//! fundamental Robin eigenvalues, and numerical checks of the isoperimetric
//! inequalities relating them across cross-sections.

pub mod disk;
pub mod ellipse;
pub mod error;
pub mod fem;
pub mod geomfn;
pub mod modesum;
pub mod rect;
pub mod rootkit;
pub mod tri;
pub mod verify;

pub use error::{Error, Result};
