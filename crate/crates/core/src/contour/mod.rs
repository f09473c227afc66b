//! Keyhole-contour quadrature and finite-part integral evaluators.

mod epsilon;
mod fn_lambda;
mod fpi;
mod kernel;
mod keyhole;

pub use epsilon::{divergent_part, fpi_epsilon_oracle, subtraction_series, EPSILON_LEVELS};
pub use fn_lambda::{
    fn_lambda, fn_lambda_derivative, fn_lambda_reglim, integer_case_coefficients, integer_case_kernel,
    integer_case_log_polynomial,
};
pub use fpi::{
    beta_coefficients, fpi_log, fpi_log_integer, fpi_log_noninteger, fpi_log_shifted, FpiDiagnostics, FpiResult,
};
pub use kernel::{Decay, Kernel, TAYLOR_LEN};
pub use keyhole::{
    default_epsilon, keyhole_quadrature, KeyholeContour, KeyholeValue, LegRule, QuadratureConfig, Upper,
};
