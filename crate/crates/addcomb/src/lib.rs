//! File formats, report serialization and the command-line front end for
//! `addcomb-core`.

pub mod cli;
pub mod format;
pub mod report;
