//! Command implementations behind the `graphpdp` binary, plus the HTTP
//! decision service.

pub mod args;
pub mod commands;
pub mod load;
pub mod service;

pub use args::{Cli, Command, EngineArgs};
pub use commands::{decision_exit_code, run};
pub use load::Failure;
