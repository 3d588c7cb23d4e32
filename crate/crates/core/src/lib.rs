//! Exact laws, samplers and a self-checking harness for a two-parameter
//! family of exchangeable random partitions with a finite random number of
//! blocks, alongside the Ewens–Pitman family it is compared with.

pub mod combinatorics;
pub mod error;
pub mod inference;
pub mod model;
pub mod sampler;
pub mod verify;

pub use error::{Error, Result};
