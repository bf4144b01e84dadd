//! Fixed-locus combinatorics.

mod codec;
mod decorated;
mod enumerate;
mod refined;

pub use decorated::{DecoratedGraph, Edge, Vertex};
pub use enumerate::{enumerate_effective_genus1_graphs, enumerate_genus0_trees, enumerate_refined_trees};
pub use refined::{Conditions, RefinedTree, Role, ThickClass, TreeLocusData, TreeNode};
