//! Library side of the `sgop` command-line tool: instance files, reports,
//! seeded instance generation, verification suites, and the command
//! implementations the binary dispatches to.

pub mod commands;
pub mod gen;
pub mod instance;
pub mod report;
pub mod verify;
