//! The disc, odd sphere and mirror-sphere family: builders for the graphs,
//! correspondences and labelled spaces involved, and suites that verify
//! the identities relating them.

pub mod build;
pub mod mirror;
pub mod poly;
pub mod suites;

use serde::Serialize;

use crate::error::{Error, Result};

pub use build::{gluing_data, GluingData};
pub use mirror::{build_en_space, build_mirror_sum, MirrorSum};
pub use suites::{truncation_stability, verify_sphere_suite};

/// Rank `n` of the family and truncation depth `N` of the infinite part of
/// `(Y, B)` and `E_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SphereConfig {
    pub n: usize,
    pub trunc: usize,
}

impl SphereConfig {
    pub const DEFAULT_TRUNC: usize = 4;

    pub fn new(n: usize, trunc: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("sphere rank", "n must be at least 1"));
        }
        if trunc < 2 {
            return Err(Error::invalid("truncation", format!("N = {trunc}, need N ≥ 2")));
        }
        Ok(SphereConfig { n, trunc })
    }
}
