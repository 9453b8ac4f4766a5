//! Theta series with certified truncation, and exact verification of the
//! Weil-representation identities that accompany them.

pub mod cli;
pub mod error;
pub mod hecke;
pub mod modularity;
pub mod numerics;
pub mod quadforms;
pub mod report;
pub mod suites;
pub mod theta_classical;
pub mod theta_indefinite;
pub mod weylrep;

pub use error::{Error, Result};
pub use numerics::{SeriesResult, TruncationSpec, C64};
