//! Exact arithmetic for the group of rooted-tree series under operadic
//! substitution, its linear-tree and corolla quotients, and formal flows of
//! polynomial vector fields.
//!
//! ```
//! use prelie_core::{group, quotients, series};
//!
//! let log = group::log_star(5).unwrap();
//! let chains = quotients::phi(&log);
//! assert_eq!(chains.coeff(2).to_string(), "-1/2");
//! # let _ = series::exp_star(3).unwrap();
//! ```

pub mod cli;
pub mod error;
pub mod group;
pub mod io;
pub mod quotients;
pub mod rational;
pub mod selftest;
pub mod series;
pub mod trees;
pub mod vectorfields;

pub use error::{Error, Result};
pub use rational::Rational;
pub use series::TreeSeries;
pub use trees::{TreeId, TreeTable};
