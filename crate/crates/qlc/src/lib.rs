//! Exact verification of Levi-Civita connections on bicovariant differential
//! calculi over the quantum groups SL_q(N), O_q(N) and Sp_q(N).

pub mod scalar;
pub mod tensor;
pub mod group;
pub mod functional;
pub mod calculus;
pub mod metric;
pub mod levi_civita;
pub mod appendices;
pub mod report;

#[doc = include_str!("../../../book/src/introduction.md")]
mod chapter_introduction {}
#[doc = include_str!("../../../book/src/scalars.md")]
mod chapter_scalars {}
#[doc = include_str!("../../../book/src/tensors.md")]
mod chapter_tensors {}
#[doc = include_str!("../../../book/src/quantum-groups.md")]
mod chapter_quantum_groups {}
#[doc = include_str!("../../../book/src/calculus.md")]
mod chapter_calculus {}
#[doc = include_str!("../../../book/src/metrics.md")]
mod chapter_metrics {}
#[doc = include_str!("../../../book/src/levi-civita.md")]
mod chapter_levi_civita {}
#[doc = include_str!("../../../book/src/appendices.md")]
mod chapter_appendices {}
#[doc = include_str!("../../../book/src/reports.md")]
mod chapter_reports {}
#[doc = include_str!("../../../book/src/findings.md")]
mod chapter_findings {}
