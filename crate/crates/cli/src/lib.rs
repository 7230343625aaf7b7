//! Session scripts for rrfilt: a small declarative language of rings,
//! ideals and commands, with human and JSON-lines reports.

pub mod run;
pub mod session;
pub mod syntax;
