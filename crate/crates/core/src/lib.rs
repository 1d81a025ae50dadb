//! Branching laws for quaternionic and small discrete series restricted to
//! their distinguished subgroups, with a formal-series oracle to check them.

pub mod cli;
pub mod error;
pub mod formal;
pub mod lattice;
pub mod oracle;
pub mod quaternionic;
pub mod repweights;
pub mod rootsystems;
pub mod selftest;
pub mod specialcases;

pub use error::{Error, Result};
