//! Module files, generated families of modules of constant Jordan type,
//! property suites and scanners behind the `cjt` command.

pub mod family;
pub mod fixtures;
pub mod format;
pub mod report;
pub mod scan;
pub mod suites;
