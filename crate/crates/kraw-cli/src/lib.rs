//! Library side of the `kraw` command: settings files, figure parameters,
//! CSV sweeps and the acceptance suite.

pub mod checks;
pub mod config;
pub mod error;
pub mod figures;
pub mod sweep;
