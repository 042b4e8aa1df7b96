//! Exact symbolic toolkit for graph algebras, labelled-graph algebras and
//! finitely presented C*-correspondences.
//!
//! Everything is computed over exact rationals. The main entry points are
//!
//! - [`algebra`]: presented commutative coefficient algebras and an exact linear solver,
//! - [`graph`]: directed graphs, Smith normal form, K-theory and the two-sink obstruction sweep,
//! - [`labelled`]: labelled spaces, relative ranges and the normal-term arithmetic engine,
//! - [`corr`]: correspondences, compact operators, morphisms and restricted direct sums,
//! - [`spheres`]: builders and verification suites for the disc, sphere and mirror-sphere family.
//!
//! Runnable walkthroughs live in `examples/`; `cargo run --example` lists them.

#![allow(clippy::needless_range_loop, clippy::type_complexity)]

pub mod algebra;
pub mod cli;
pub mod corr;
pub mod error;
pub mod graph;
pub mod labelled;
pub mod report;
pub mod scalar;
pub mod spheres;

pub use error::{Error, Result};
pub use scalar::Scalar;
