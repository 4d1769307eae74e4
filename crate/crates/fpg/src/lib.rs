//! Finitely presented groups: reduced words, coset enumeration, low-index
//! subgroup search, double cosets, bounded profinite closures, and
//! engulfing verdicts, with exact word-problem solvers for two built-in
//! groups.

pub mod analysis;
pub mod coset_enum;
pub mod covers;
pub mod error;
pub mod low_index;
pub mod normal_form;
pub mod perm;
pub mod words;

pub use error::{Error, Result};
