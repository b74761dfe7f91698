//! Numerical checks of the analytic claims: structured matrices, finite
//! difference linearizations and their spectra, equilibrium classification,
//! and a brute-force oracle for the angle-sum inequality.

mod equilibrium;
mod kkt;
mod linearization;
mod matrices;
mod spectrum;

pub use equilibrium::{classify_equilibrium, coplanarity, EquilibriumClass, EquilibriumTag};
pub use kkt::{kkt_minimize_oracle, kkt_objective, kkt_objective_gradient, KktOracleResult, KKT_STATIONARY_POINTS};
pub use linearization::{
    cross_in_plane_jacobian, cross_out_of_plane_jacobian, rpy_reference_jacobian, xi_s_jacobian,
    xi_s_spectrum_analytic, zeta_spectrum_analytic, FD_STEP,
};
pub use matrices::{
    commutes_with_exchange, exchange_matrix, is_persymmetric, lambda_matrix, lambda_spectrum_analytic, ones_matrix,
};
pub use spectrum::{compare_spectra, eigenvalues, numeric_jacobian, SpectrumReport};
