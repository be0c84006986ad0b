//! Two-level priority multilevel diversity coding over blockage-prone paths.
//!
//! A source sends two messages over E parallel paths of equal capacity, each
//! path independently blocked with a known probability. A grouping declares
//! under which blockage patterns the high-priority message must survive
//! (group 1) and under which both messages must (group 2). This crate
//! classifies such instances, produces the exact rate region or a cut-set
//! outer bound, builds linear coding schemes achieving the region's corner
//! points, reduces instances to equivalent combination networks, brute-forces
//! achievability at fixed block lengths, and simulates blockage draws against
//! the analytic decoding probabilities.

mod error;

pub mod capacity;
pub mod codes;
pub mod combnet;
pub mod field;
pub mod oracle;
pub mod patterns;
pub mod rational;
pub mod simulate;

pub use error::{Error, Result};
