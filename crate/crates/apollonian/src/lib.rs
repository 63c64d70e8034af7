//! Exact arithmetic for integral Apollonian circle packings and the number
//! theory around them.

pub mod error;
pub mod hyperbolic;
pub mod circlespace;
pub mod cli;
pub mod contfrac;
pub mod numtheory;
pub mod obstructions;
pub mod packing;
pub mod quadforms;
pub mod schmidt;

pub use error::{Error, Result};
