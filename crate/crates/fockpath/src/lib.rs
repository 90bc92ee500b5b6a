//! Front end for `fockpath-core`: JSON encodings, the oracle cache,
//! verification sweeps and the command-line interface.

pub mod cache;
pub mod cli;
pub mod json;
pub mod sweeps;
