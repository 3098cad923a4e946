//! Library side of the `darts` binary: expression grammar, config files,
//! output formats and the subcommands.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod expr;
pub mod output;
pub mod reproduce;
