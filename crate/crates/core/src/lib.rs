//! Divisor theory on metric graphs and Brill-Noether experiments on chains of loops.

pub mod brill_noether;
pub mod chain;
pub mod cli;
pub mod error;
pub mod graph;
pub mod independence;
pub mod json;
pub mod plfunc;
pub mod random;
pub mod rational;
pub mod reduce;

pub use error::{Error, Result};
pub use graph::{Direction, Divisor, EdgeId, End, MetricGraph, Point, Region, VertexId};
pub use plfunc::PlFunction;
pub use rational::Q;
