//! Seedable simulator for the half-restricted random graph process and its
//! Erdos-Renyi and Achlioptas relatives, with tools for the coupon-collector
//! bounds used to analyse it.

pub mod cli;
pub mod dsu;
pub mod error;
pub mod fenwick;
pub mod geomsum;
pub mod harness;
pub mod order_index;
pub mod process;
pub mod sorted_blocks;

pub use dsu::{MergeOutcome, Partition, VertexId};
pub use error::{Error, Result};
pub use order_index::{OrderIndex, RankDraw, TieBreak};
