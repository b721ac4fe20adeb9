//! Exact tools for the regularity method on small dense graphs and digraphs:
//! ε-regular pairs, energy-increment partitions, the degree form, greedy
//! embedding, Hamilton cycle certificates and searches, robust expansion and
//! shifted walks, along with the classical extremal constructions.

pub mod constructions;
pub mod embedding;
pub mod enumerate;
pub mod error;
pub mod graph;
pub mod hamiltonicity;
pub mod io;
pub mod rational;
pub mod regularity;
pub mod robust_expansion;
pub mod shifted_walks;
pub mod szemeredi;

pub use error::{LabError, Result};
pub use graph::{AnyGraph, Digraph, Graph, VertexSet};
pub use rational::{parse_rational, Rational};
