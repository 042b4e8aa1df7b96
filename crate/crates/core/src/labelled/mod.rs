//! Labelled graphs, labelled spaces and their normal-form arithmetic.

pub mod engine;
pub mod functor;
pub mod graph;
pub mod morphism;
pub mod represent;
pub mod set;
pub mod space;

pub use engine::*;
pub use functor::*;
pub use graph::*;
pub use morphism::*;
pub use represent::*;
pub use set::*;
pub use space::*;

/// Default truncation bound for checks on indexed graphs.
pub const DEFAULT_TRUNCATION: u32 = 4;
