//! Exact computations on compact complex nilmanifolds given by structure
//! equations: invariant cohomology, the Frölicher spectral sequence, the
//! ∂∂̄-lemma, special Hermitian metrics with verified witnesses or
//! certificates, and Kuranishi deformations of complex parallelisable
//! structures.

pub mod cohomology;
pub mod deform;
pub mod exterior;
pub mod frolicher;
pub mod kuranishi;
pub mod linalg;
pub mod metrics;
pub mod report;
pub mod scalars;
pub mod structeq;
