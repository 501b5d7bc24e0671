//! Exact constructions of approximate (symmetric) Sperner colourings in any
//! dimension, lifted from 2D rectangular Sperner instances, together with
//! solution recovery and the induced envy-free cake-cutting instances.

pub mod error;
pub mod numerics;
pub mod simplex;
pub mod rect2d;
pub mod base2d;
pub mod converter_sym;
pub mod lift;
pub mod recover;
pub mod cake;
pub mod cli;

pub use error::{Error, Result};
