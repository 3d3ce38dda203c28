//! Macroscopic elastic constants predicted from the contact geometry.
//!
//! Every predictor goes through the same two steps: build the mesoscopic
//! elastic tensor `D = a·isym + b·ivol` from the orientation expectations,
//! then match coefficients against the macroscopic isotropic tensor of the
//! requested analysis mode and solve for `(E, ν)`. Deriving all branches
//! from the tensor equality keeps the three modes consistent by
//! construction instead of trusting transcribed formulas.

use super::expectations::{closed_expectations, sinc};
use super::{ElasticConstants, MaterialParams, Mode, TheoryError};
use crate::tensor::{iso_coefficients, Tensor4};
use std::f64::consts::PI;

/// `I1 = E[cos chi]` of the cone distribution.
pub fn cone_i1(gamma: f64, dim: usize) -> f64 {
    match dim {
        2 => sinc(gamma),
        3 => (gamma / 2.0).cos().powi(2),
        _ => panic!("dimension must be 2 or 3"),
    }
}

/// `I2 = E[cos 2chi]` of the cone distribution.
pub fn cone_i2(gamma: f64, dim: usize) -> f64 {
    match dim {
        2 => sinc(2.0 * gamma),
        3 => {
            let c = gamma.cos();
            (2.0 * c * c + 2.0 * c - 1.0) / 3.0
        }
        _ => panic!("dimension must be 2 or 3"),
    }
}

/// Mesoscopic elastic tensor `D = (N_dim·E0/m_vol)·(N_sym + α·T_sym)`.
pub fn elastic_tensor_meso(
    params: &MaterialParams,
    m_vol: f64,
    n_sym: &Tensor4,
    t_sym: &Tensor4,
    dim: usize,
) -> Result<Tensor4, TheoryError> {
    if m_vol.abs() < 1e-9 {
        return Err(TheoryError::DegenerateVolume);
    }
    let factor = dim as f64 * params.e0 / m_vol;
    Ok(n_sym
        .add(&t_sym.scale(params.alpha))
        .scale(factor)
        .symmetrize_minor())
}

/// Macroscopic isotropic elastic tensor for given `(E, ν)` and mode.
pub fn macro_tensor(ec: &ElasticConstants) -> Result<Tensor4, TheoryError> {
    let (e, nu) = (ec.e, ec.nu);
    let dim = ec.mode.dim();
    let (a, b) = match ec.mode {
        Mode::PlaneStress => {
            if (1.0 - nu * nu).abs() < 1e-12 {
                return Err(TheoryError::SingularDenominator(format!(
                    "plane stress is singular at nu = {nu}"
                )));
            }
            (e / (1.0 + nu), 3.0 * e * nu / (1.0 - nu * nu))
        }
        Mode::PlaneStrain | Mode::ThreeD => {
            let d = (1.0 + nu) * (1.0 - 2.0 * nu);
            if d.abs() < 1e-12 {
                return Err(TheoryError::SingularDenominator(format!(
                    "mode is singular at nu = {nu}"
                )));
            }
            (e / (1.0 + nu), 3.0 * e * nu / d)
        }
    };
    Ok(Tensor4::isym(dim)
        .scale(a)
        .add(&Tensor4::ivol(dim).scale(b)))
}

/// Invert the isotropic coefficient pair `(a, b)` of `D = a·isym + b·ivol`
/// into `(E, ν)` for the given mode.
fn constants_from_coefficients(
    a: f64,
    b: f64,
    mode: Mode,
) -> Result<ElasticConstants, TheoryError> {
    let scale = a.abs() + b.abs();
    let (nu, e) = match mode {
        Mode::PlaneStress => {
            // a = E/(1+ν), b = 3Eν/((1-ν)(1+ν))
            let den = 3.0 * a + b;
            if den.abs() < 1e-12 * scale.max(1e-300) {
                return Err(TheoryError::SingularDenominator("3a + b = 0".into()));
            }
            let nu = b / den;
            (nu, a * (1.0 + nu))
        }
        Mode::PlaneStrain | Mode::ThreeD => {
            // a = E/(1+ν), b = 3Eν/((1+ν)(1-2ν))
            let den = 3.0 * a + 2.0 * b;
            if den.abs() < 1e-12 * scale.max(1e-300) {
                return Err(TheoryError::SingularDenominator("3a + 2b = 0".into()));
            }
            let nu = b / den;
            (nu, a * (1.0 + nu))
        }
    };
    Ok(ElasticConstants { e, nu, mode })
}

/// Extract `(E, ν)` back out of an isotropic elastic tensor (the inverse of
/// [`macro_tensor`] up to the isotropy assumption).
pub fn constants_from_tensor(d: &Tensor4, mode: Mode) -> Result<ElasticConstants, TheoryError> {
    let (a, b) = iso_coefficients(d);
    constants_from_coefficients(a, b, mode)
}

/// Predictor for the cone distribution with half-width `gamma`.
/// `E` is reported in units of the contact normal stiffness.
///
/// ```
/// use rbsm::theory::{predict_cone, Mode};
/// // parallel contacts, no tangential stiffness: the classic bounds
/// let ec = predict_cone(0.0, 0.0, Mode::PlaneStress).unwrap();
/// assert!((ec.nu - 1.0 / 3.0).abs() < 1e-14);
/// assert!((ec.e - 2.0 / 3.0).abs() < 1e-14);
/// ```
pub fn predict_cone(alpha: f64, gamma: f64, mode: Mode) -> Result<ElasticConstants, TheoryError> {
    let params = MaterialParams::new(1.0, alpha)?;
    let dim = mode.dim();
    let (m, n_sym, t_sym) = closed_expectations(gamma, dim);
    let d = elastic_tensor_meso(&params, m, &n_sym, &t_sym, dim)?;
    let (a, b) = iso_coefficients(&d);
    constants_from_coefficients(a, b, mode)
}

/// The `gamma -> 0` limits (contact vector parallel to the normal).
pub fn predict_limit(alpha: f64, mode: Mode) -> ElasticConstants {
    let a = alpha;
    let (nu, e) = match mode {
        Mode::PlaneStress => ((1.0 - a) / (3.0 + a), (2.0 + 2.0 * a) / (3.0 + a)),
        Mode::PlaneStrain => ((1.0 - a) / 4.0, (1.0 + a) * (5.0 - a) / 8.0),
        Mode::ThreeD => ((1.0 - a) / (4.0 + a), (2.0 + 3.0 * a) / (4.0 + a)),
    };
    ElasticConstants { e, nu, mode }
}

/// Predictor for an arbitrary contact-angle distribution summarized by the
/// integrals `I1 = E[cos chi]` and `I2 = E[cos 2chi]`.
pub fn predict_general(
    alpha: f64,
    i1: f64,
    i2: f64,
    mode: Mode,
) -> Result<ElasticConstants, TheoryError> {
    if !(i1 > 0.0) {
        return Err(TheoryError::SingularDenominator(format!(
            "I1 must be positive, got {i1}"
        )));
    }
    if !(-1.0..=1.0).contains(&i2) {
        return Err(TheoryError::SingularDenominator(format!(
            "I2 must lie in [-1, 1], got {i2}"
        )));
    }
    if alpha < 0.0 {
        return Err(TheoryError::InvalidParams(format!(
            "stiffness ratio must be non-negative, got {alpha}"
        )));
    }
    // Isotropic coefficients of (N_dim/I1)·⟨E[N] + α E[T]⟩_sym, in units E0.
    let (a, b) = match mode.dim() {
        2 => (
            (1.0 + alpha) / (2.0 * i1),
            3.0 * (1.0 - alpha) * i2 / (4.0 * i1),
        ),
        3 => (
            ((1.0 - alpha) * (i2 - 13.0) + 20.0) / (20.0 * i1),
            3.0 * (1.0 - alpha) * (3.0 * i2 + 1.0) / (20.0 * i1),
        ),
        _ => unreachable!(),
    };
    constants_from_coefficients(a, b, mode)
}

/// Stationary points of ν(γ) for fixed `alpha != 1`. In 2D these are 0 and
/// the root of `2γ = tan 2γ` inside `(π/2, π)`; in 3D they are 0, `2π/3`
/// (exactly `arccos(-1/2)`) and `π`.
pub fn stationary_gammas(dim: usize) -> Vec<f64> {
    match dim {
        2 => {
            // Solve g(γ) = 2γ·cos 2γ − sin 2γ = 0: same roots as 2γ = tan 2γ
            // away from cos 2γ = 0, strictly monotone on the bracket.
            let g = |x: f64| 2.0 * x * (2.0 * x).cos() - (2.0 * x).sin();
            let mut lo = PI / 2.0 + 1e-6;
            let mut hi = PI - 1e-6;
            debug_assert!(g(lo) < 0.0 && g(hi) > 0.0);
            for _ in 0..100 {
                let mid = 0.5 * (lo + hi);
                if g(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if hi - lo < 1e-14 {
                    break;
                }
            }
            vec![0.0, 0.5 * (lo + hi)]
        }
        3 => vec![0.0, 2.0 * PI / 3.0, PI],
        _ => panic!("dimension must be 2 or 3"),
    }
}

/// Poisson's ratio bounds at fixed geometry: the predictor evaluated at
/// `alpha = 0` and in the analytic `alpha -> infinity` limit, ordered.
/// The plane-strain bound is `-inf` at `I2 = 1`.
pub fn nu_interval_i2(mode: Mode, i2: f64) -> (f64, f64) {
    let nu0 = match mode {
        Mode::PlaneStress => i2 / (2.0 + i2),
        Mode::PlaneStrain => {
            if (2.0 + 2.0 * i2).abs() < 1e-300 {
                f64::NEG_INFINITY
            } else {
                i2 / (2.0 + 2.0 * i2)
            }
        }
        Mode::ThreeD => (3.0 * i2 + 1.0) / (7.0 * i2 + 9.0),
    };
    let nu_inf = match mode {
        Mode::PlaneStress => -i2 / (2.0 - i2),
        Mode::PlaneStrain => {
            let den = 2.0 - 2.0 * i2;
            if den.abs() < 1e-300 {
                if i2 > 0.0 {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                -i2 / den
            }
        }
        Mode::ThreeD => (3.0 * i2 + 1.0) / (7.0 * i2 - 11.0),
    };
    if nu0 <= nu_inf {
        (nu0, nu_inf)
    } else {
        (nu_inf, nu0)
    }
}

/// [`nu_interval_i2`] with the geometry given as a cone half-width.
pub fn nu_interval_gamma(mode: Mode, gamma: f64) -> (f64, f64) {
    nu_interval_i2(mode, cone_i2(gamma, mode.dim()))
}
