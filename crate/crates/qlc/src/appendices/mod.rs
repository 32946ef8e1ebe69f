//! The Rosso form identification and the alternative (*-metric)
//! Levi-Civita problem on SL_q(N).

mod rosso;
mod star;

#[cfg(test)]
mod tests;

use thiserror::Error;

use crate::metric::MetricError;
use crate::tensor::TensorError;

pub use rosso::{
    chi_as_fke, fke_functional, k_functional, printed_rosso_table, root_functional, rosso_chi_table, rosso_pair,
    rosso_vs_dual_metric, FkeMonomial, FkeWord, KMonomial, PairingTable, Root, RossoReading, RossoReport,
};
pub use star::{star_basis, star_compat_rows, star_lc_solution_space, star_metric, StarLcSpace};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AppendixError {
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Tensor(#[from] TensorError),
}
