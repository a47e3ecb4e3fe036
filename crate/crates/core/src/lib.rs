pub mod alpha;
pub mod asymptotics;
pub mod error;
pub mod heat_brownian;
pub mod mc;
pub mod quadrature;
pub mod shc;
pub mod specfun;
pub mod subordinator;

pub use alpha::{Alpha, Regime};
pub use error::{Error, Result};
pub use subordinator::{fractional_moment, DensityEval, DensityMethod, StableSubordinator};
pub use heat_brownian::{q2, q2_deficit, q2_remainder, Domain};
pub use mc::{McConfig, McEstimate};
pub use shc::{q_alpha_mc, q_tilde, q_tilde_mc, sup_stable_mc, MonitoredEstimate, QuadratureSpec, Subordination};
