//! Command-line workbench over `cdc-core`: the MEL edge-list format, JSON
//! and table reports, and the `cdcw` dispatcher with a parallel audit.

pub mod cli;
pub mod mel;
pub mod report;
