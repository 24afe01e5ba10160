//! Trigonometric system norms on tuples of vectors and the ideal norms
//! `ρ`, `δ` and `μ` of operators between finite-dimensional normed spaces.
//!
//! ```
//! use umdnorms::prelude::*;
//!
//! let space = NormedSpace::linf(2).real();
//! let t = LinearOperator::identity(&space);
//! let grid = QuadratureGrid::default_for(2);
//! let cfg = OptimizerConfig::default().with_restarts(4);
//! let c: System = TrigSystem::cosine(2).into();
//! let s: System = TrigSystem::sine(2).into();
//! let est = rho_estimate(&t, &s, &c, grid, &cfg).unwrap();
//! assert!(est.value >= 1.0 - 1e-9);
//! ```

pub mod cli;
pub mod error;
pub mod ideal_norms;
pub mod kernels;
pub mod norms;
pub mod seed;
pub mod spaces;
pub mod systems;
pub mod verify;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::ideal_norms::{
        brute_force_rho, delta_estimate, doubling_residual, duality_gap, mu_estimate, rho_estimate,
        Certificate, IdealNormEstimate, MuEstimate, OptimizerConfig,
    };
    pub use crate::kernels::{kernel_eval, vp_apply, vp_l1_norm, KernelSpec};
    pub use crate::norms::{system_norm, GridFunction, VectorTuple};
    pub use crate::spaces::{Field, LinearOperator, NormedSpace, Scalar};
    pub use crate::systems::{tensor, QuadratureGrid, System, TrigSystem};
}
