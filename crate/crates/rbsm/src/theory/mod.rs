//! Closed-form elasticity of isotropic rigid-body-spring assemblies.
//!
//! The module collects everything that can be said about the macroscopic
//! elastic constants of a discrete assembly without ever building one:
//!
//! * rotation tensors relating the contact vector to the facet normal,
//! * the per-contact fourth order tensors whose weighted sums give the
//!   elastic tensor of the assembly under the uniform-strain hypothesis,
//! * their analytic expectations over isotropic orientation distributions,
//!   together with a Monte Carlo oracle that checks every closed form,
//! * predictors mapping the stiffness ratio `alpha` and the geometry
//!   statistics (`gamma` cone width, or the integrals `I1`, `I2`) to the
//!   macroscopic Poisson's ratio and elastic modulus.

mod distribution;
mod expectations;
mod predict;
mod rotation;
mod script;

pub use distribution::{ChiVariant, OrientationDistribution};
pub use expectations::{closed_expectations, expectation_oracle, ExpectationEstimate};
pub use predict::{
    cone_i1, cone_i2, constants_from_tensor, elastic_tensor_meso, macro_tensor, nu_interval_gamma,
    nu_interval_i2, predict_cone, predict_general, predict_limit, stationary_gammas,
};
pub use rotation::{rotation_2d, rotation_3d, rotation_y, rotation_z};
pub use script::{contact_tensor, script_tensors};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum TheoryError {
    #[error("invalid material parameters: {0}")]
    InvalidParams(String),
    #[error("degenerate volume expectation (E[rho:nu] ~ 0)")]
    DegenerateVolume,
    #[error("singular denominator in predictor ({0})")]
    SingularDenominator(String),
    #[error("invalid orientation distribution: {0}")]
    InvalidDistribution(String),
}

/// Analysis mode fixing the relation between the plane elastic tensor and
/// the engineering constants.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    PlaneStress,
    PlaneStrain,
    ThreeD,
}

impl Mode {
    pub fn dim(self) -> usize {
        match self {
            Mode::PlaneStress | Mode::PlaneStrain => 2,
            Mode::ThreeD => 3,
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::PlaneStress => write!(f, "plane-stress"),
            Mode::PlaneStrain => write!(f, "plane-strain"),
            Mode::ThreeD => write!(f, "3d"),
        }
    }
}

/// Contact material parameters: normal stiffness and tangential/normal ratio.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct MaterialParams {
    pub e0: f64,
    pub alpha: f64,
}

impl MaterialParams {
    pub fn new(e0: f64, alpha: f64) -> Result<Self, TheoryError> {
        if !(e0 > 0.0) {
            return Err(TheoryError::InvalidParams(format!(
                "normal stiffness must be positive, got {e0}"
            )));
        }
        if !(alpha >= 0.0) {
            return Err(TheoryError::InvalidParams(format!(
                "stiffness ratio must be non-negative, got {alpha}"
            )));
        }
        Ok(MaterialParams { e0, alpha })
    }
}

/// Macroscopic elastic constants. Predictors report `e` in units of the
/// contact normal stiffness (i.e. for `E0 = 1`).
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ElasticConstants {
    pub e: f64,
    pub nu: f64,
    pub mode: Mode,
}
