pub mod cli;
pub mod config;
pub mod corpus;
pub mod error;
pub mod frontend;
pub mod naming;
pub mod similarity;
pub mod statsdb;
pub mod checker;
pub mod filters;
pub mod sarif;

pub use error::{Error, Result};
