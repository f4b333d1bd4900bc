//! Toeplitz matrices, dense eigenvalues and eigenvalue-distribution reports.

mod eigen;
mod toeplitz;
mod weyl;

pub use eigen::{
    eigenvalues_capped, eigenvalues_dense, eigenvalues_general, eigenvalues_symmetric, inverse_iteration,
    is_symmetric, DEFAULT_ORDER_CAP,
};
pub use toeplitz::{toeplitz, toeplitz_real, toeplitz_tensor, ToeplitzSpec};
pub use weyl::{
    lattice_samples_1d, quantiles, reference_count, weyl_report, weyl_report_from, DistributionReport,
    OutlierCount, OVERSAMPLE,
};
