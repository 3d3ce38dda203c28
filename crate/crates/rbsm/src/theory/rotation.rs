//! Rotation tensors mapping the facet normal onto the contact vector.

use crate::tensor::Tensor2;

/// Plane rotation by angle `chi`.
pub fn rotation_2d(chi: f64) -> Tensor2 {
    let (s, c) = chi.sin_cos();
    Tensor2::from_rows_2d([[c, -s], [s, c]])
}

/// Rotation about the y axis.
pub fn rotation_y(a: f64) -> Tensor2 {
    let (s, c) = a.sin_cos();
    Tensor2::from_rows_3d([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])
}

/// Rotation about the z axis.
pub fn rotation_z(a: f64) -> Tensor2 {
    let (s, c) = a.sin_cos();
    Tensor2::from_rows_3d([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
}

/// Spatial rotation carrying the normal `n(xi, zeta)` onto the contact
/// vector tilted from it by `chi` and swung around it by `theta`:
/// `ρ_z(ξ)·ρ_y(ζ)·ρ_z(θ)·ρ_y(χ)·ρ_yᵀ(ζ)·ρ_zᵀ(ξ)`.
pub fn rotation_3d(xi: f64, zeta: f64, theta: f64, chi: f64) -> Tensor2 {
    let rz_xi = rotation_z(xi);
    let ry_zeta = rotation_y(zeta);
    rz_xi
        .dot(&ry_zeta)
        .dot(&rotation_z(theta))
        .dot(&rotation_y(chi))
        .dot(&ry_zeta.transpose(0, 1))
        .dot(&rz_xi.transpose(0, 1))
}

/// Unit normal parametrized by the isotropy angles.
pub fn normal_2d(xi: f64) -> [f64; 2] {
    [xi.cos(), xi.sin()]
}

pub fn normal_3d(xi: f64, zeta: f64) -> [f64; 3] {
    [xi.cos() * zeta.sin(), xi.sin() * zeta.sin(), zeta.cos()]
}
