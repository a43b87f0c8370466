//! Numeric evaluation of the special functions and independent numerical
//! checks: identity residuals, ADE witness residuals and a rank falsifier.

pub mod falsify;
pub mod registry;
pub mod residual;
pub mod special;

pub use falsify::{ade_falsify, FalsifierReport, FalsifyError, FalsifySpec, Verdict};
pub use registry::{constant_value, declared_poles, special_value, standard_env, PoleSet, SUPPORTED};
pub use residual::{ade_residual, fe_residual, fe_residual_in, Point, ResidualReport, SamplePlan};
