//! File formats, generators and subcommands of the `orbits` tool.

pub mod bench;
pub mod cli;
pub mod io;
pub mod verify;
