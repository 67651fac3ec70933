//! Command-line front end for `acsusy-core`: configuration files, figure
//! CSVs, structured reports and the subcommand implementations.

pub mod commands;
pub mod config;
pub mod error;
pub mod figures;
pub mod pipeline;
