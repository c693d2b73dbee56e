//! Library side of the `merit` binary: subcommand implementations and the
//! HTTP service, importable by the integration tests.

pub mod commands;
pub mod server;
