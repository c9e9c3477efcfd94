//! Experiment driver, file formats and command implementations for the
//! `multiris` CLI. The numerics live in `multiris_core`.

pub mod commands;
pub mod config;
pub mod experiment;
pub mod table;
pub mod verify;
