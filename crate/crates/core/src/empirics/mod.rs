//! Monte Carlo estimators and statistical verification.

pub mod beta;
pub mod density;
pub mod ks;
pub mod nu;
pub mod tails;
pub mod verify;

pub use beta::{beta_cdf, beta_from_moments, fit_beta_moments, mean_variance, BetaLaw};
pub use density::{estimate_location_density, local_density, DensityEstimate};
pub use ks::{kolmogorov_critical, kolmogorov_pvalue, ks_statistic, ks_two_sample, two_sample_critical, KsResult};
pub use nu::{estimate_nu, frame_identity_gaps, frame_thresholds, EmpiricalNu, FrameGap, NuAccumulator, NuThreshold};
pub use tails::{
    fit_power_law, levy_factorization_check, u_marginal_tail_exponent, LevyReport, PowerLawFit, TailWindow, UTailFit,
    DEFAULT_V_BAND,
};
pub use verify::{check_bound, BoundCheck, Verdict};
