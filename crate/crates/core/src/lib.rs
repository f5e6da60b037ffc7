pub mod byproducts;
pub mod cli;
pub mod cover_queries;
pub mod cst_builder;
pub mod error;
pub mod labeled_dsu;
pub mod suffix_tree;

pub use cst_builder::{compute_cst, Cst};
pub use error::{Error, Result};
pub use labeled_dsu::{ChangeList, LabeledPartition};
pub use suffix_tree::{Locus, NodeId, SuffixTree};
