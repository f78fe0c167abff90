//! Std companion to `rosbid-core`: spec files, horizon grids, a parallel
//! trial runner, CSV reports and the `rosbid` command line.

pub mod cli;
pub mod grid;
pub mod runner;
pub mod specfile;

pub use cli::{run_cli, run_cli_with, CSV_HEADER, DEFAULT_SEED};
pub use grid::{parse_grid, GridError};
pub use runner::Runner;
pub use specfile::{load_spec, parse_spec, SpecFileError};
