//! Instance generators, file formats, benchmark harness and plots.

pub mod bench;
pub mod generators;
pub mod io;
pub mod plot;
pub mod rng;
