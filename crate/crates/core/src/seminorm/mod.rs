//! Multiplicative seminorms as exact −log_p values, point evaluators, and the
//! λ/μ transfer maps between the spectra of R and W(R).

mod eval;
mod value;

pub use eval::{
    lambda_map, log_omega, mu_map, omega, seminorm_power, vr_tilde, Element, PointEvaluator, WittKind,
    DEFAULT_WITT_LEN,
};
pub use value::{Exactness, SeminormValue};
