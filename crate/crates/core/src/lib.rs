#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bound;
pub mod cli;
pub mod deformation;
pub mod error;
pub mod flux;
pub mod numerics;
pub mod quasiposition;
pub mod scattering;

pub use error::{Error, Result};
