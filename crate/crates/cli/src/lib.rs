//! Library behind the `hiertest` binary: CSV ingestion, report assembly and
//! the compare / ttest / simulate commands.

pub mod commands;
pub mod io;
pub mod report;
