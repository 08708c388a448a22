//! Legendrian Jones polynomial and Legendrian Khovanov homology of fronts.

pub mod check;
pub mod complex;
pub mod corpus;
pub mod diagram;
pub mod error;
pub mod homology;
pub mod linalg;
pub mod moves;
pub mod poly;
pub mod polynomial;
pub mod smooth;
pub mod states;

pub use error::{Error, Result};
