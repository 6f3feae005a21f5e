//! Files, reports and the `flagvol` command line on top of `flagvol-core`.

pub mod cli;
pub mod format;
pub mod report;
