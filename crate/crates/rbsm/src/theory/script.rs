//! Per-contact fourth order tensors entering the virtual-work sum.
//!
//! A single contact with unit normal `n` and rotation `ρ` (so that the
//! contact vector is `t = ρ·n`) contributes `A l E0 (𝒩 + α 𝒯)` to the
//! elastic tensor, where
//!
//! ```text
//! 𝒩 = (ρ · (n⊗n) ⊗ (n⊗n) · ρᵀ)^{T12}      𝒯 = ρ · Tᵀ¹³ · T · ρᵀ
//! T = 3 n · (ivol)^{T13} − n ⊗ n ⊗ n
//! ```
//!
//! Contracted twice with a symmetric strain they reproduce the facet strain
//! quadratic form: `ε:(𝒩 + α𝒯):ε = e_N² + α‖e_T‖²`.

use crate::tensor::{Tensor2, Tensor3, Tensor4};

/// The third order contact tensor `T = 3 n·(ivol)^{T13} − n⊗n⊗n`.
pub fn contact_tensor(n: &[f64]) -> Tensor3 {
    let dim = n.len();
    let ivol_t13 = Tensor4::ivol(dim).transpose(0, 2);
    // n·X contracts with the first index and leaves a third order tensor.
    let mut front = Tensor3::zeros(dim);
    for j in 0..dim {
        for k in 0..dim {
            for l in 0..dim {
                let mut s = 0.0;
                for i in 0..dim {
                    s += n[i] * ivol_t13.get(&[i, j, k, l]);
                }
                front.set(&[j, k, l], s);
            }
        }
    }
    front.scale(3.0).sub(&Tensor3::outer3(n, n, n))
}

/// Build `(𝒩, 𝒯)` for a contact with normal `n` and rotation `rho`.
pub fn script_tensors(n: &[f64], rho: &Tensor2) -> (Tensor4, Tensor4) {
    let nu = Tensor2::outer(n, n);
    let rho_t = rho.transpose(0, 1);

    let nn = Tensor4::outer_t2(&nu, &nu);
    let script_n = nn.dot_front(rho).dot_back(&rho_t).transpose(0, 1);

    let t = contact_tensor(n);
    let gram = t.transpose(0, 2).dot_t3(&t);
    let script_t = gram.dot_front(rho).dot_back(&rho_t);

    (script_n, script_t)
}

/// Entry-wise closed forms of the same tensors, used in sampling loops:
/// `𝒩_{ijkl} = n_i t_j n_k t_l` and `𝒯_{ijkl} = t_i t_l (δ_jk − n_j n_k)`
/// with `t = ρ·n`. Equality with [`script_tensors`] is covered by tests.
pub fn script_entries_from_vectors(n: &[f64], t: &[f64]) -> (Tensor4, Tensor4) {
    let dim = n.len();
    let mut sn = Tensor4::zeros(dim);
    let mut st = Tensor4::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                for l in 0..dim {
                    sn.set(&[i, j, k, l], n[i] * t[j] * n[k] * t[l]);
                    let dk = if j == k { 1.0 } else { 0.0 };
                    st.set(&[i, j, k, l], t[i] * t[l] * (dk - n[j] * n[k]));
                }
            }
        }
    }
    (sn, st)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::rotation::{normal_2d, normal_3d, rotation_2d, rotation_3d};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(dim: usize, rng: &mut impl Rng) -> Tensor2 {
        let mut e = Tensor2::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = rng.random_range(-1.0..1.0);
                e.set(&[i, j], v);
                e.set(&[j, i], v);
            }
        }
        e
    }

    #[test]
    fn script_n_for_axis_vector_and_identity_rotation() {
        let n = [1.0, 0.0];
        let (sn, _) = script_tensors(&n, &Tensor2::identity(2));
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        let expect = if (i, j, k, l) == (0, 0, 0, 0) {
                            1.0
                        } else {
                            0.0
                        };
                        assert_eq!(sn.get(&[i, j, k, l]), expect);
                    }
                }
            }
        }
    }

    /// ε:(𝒩 + α𝒯):ε = e_N² + α‖e_T‖² with the facet strains evaluated
    /// directly from n, t and ε.
    #[test]
    fn contraction_identity_matches_facet_strains() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..300 {
            // 3D case.
            let xi = rng.random_range(0.0..std::f64::consts::TAU);
            let zeta = rng.random_range(0.0..std::f64::consts::PI);
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let chi = rng.random_range(0.0..std::f64::consts::PI);
            let n = normal_3d(xi, zeta);
            let rho = rotation_3d(xi, zeta, theta, chi);
            let t = rho.dot_vec(&n);
            let eps = random_symmetric(3, &mut rng);
            let alpha = rng.random_range(0.0..3.0);

            let (sn, st) = script_tensors(&n, &rho);
            let lhs = sn.quad_form(&eps, &eps) + alpha * st.quad_form(&eps, &eps);

            let et_full = eps.dot_vec(&t);
            let e_n: f64 = (0..3).map(|i| n[i] * et_full[i]).sum();
            let e_t: Vec<f64> = (0..3).map(|i| et_full[i] - e_n * n[i]).collect();
            let rhs = e_n * e_n + alpha * e_t.iter().map(|v| v * v).sum::<f64>();
            assert!((lhs - rhs).abs() < 1e-12, "3D identity violated");

            // 2D case.
            let xi = rng.random_range(0.0..std::f64::consts::TAU);
            let chi = rng.random_range(-std::f64::consts::PI..std::f64::consts::PI);
            let n2 = normal_2d(xi);
            let rho2 = rotation_2d(chi);
            let t2 = rho2.dot_vec(&n2);
            let eps2 = random_symmetric(2, &mut rng);
            let (sn2, st2) = script_tensors(&n2, &rho2);
            let lhs2 = sn2.quad_form(&eps2, &eps2) + alpha * st2.quad_form(&eps2, &eps2);
            let et2 = eps2.dot_vec(&t2);
            let e_n2: f64 = (0..2).map(|i| n2[i] * et2[i]).sum();
            let e_t2: Vec<f64> = (0..2).map(|i| et2[i] - e_n2 * n2[i]).collect();
            let rhs2 = e_n2 * e_n2 + alpha * e_t2.iter().map(|v| v * v).sum::<f64>();
            assert!((lhs2 - rhs2).abs() < 1e-12, "2D identity violated");
        }
    }

    /// A strain that maps the contact vector onto the normal produces no
    /// tangential facet strain, so the 𝒯 quadratic form vanishes.
    #[test]
    fn script_t_vanishes_when_tangential_strain_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..100 {
            let xi = rng.random_range(0.0..std::f64::consts::TAU);
            let chi = rng.random_range(-1.0..1.0);
            let n = normal_2d(xi);
            let rho = rotation_2d(chi);
            let t = rho.dot_vec(&n);
            // ε = c (n⊗t + t⊗n) gives ε·t = c(n (t·t) + t (n·t)); subtract the
            // normal part explicitly by constructing ε·t ∥ n: use ε = n⊗n
            // rotated so that ε·t = (n·t) n.
            let c = rng.random_range(0.5..2.0);
            let eps = Tensor2::outer(&n, &n).scale(c);
            let et = eps.dot_vec(&t);
            let e_n: f64 = (0..2).map(|i| n[i] * et[i]).sum();
            let e_t: Vec<f64> = (0..2).map(|i| et[i] - e_n * n[i]).collect();
            assert!(e_t.iter().map(|v| v * v).sum::<f64>() < 1e-24);

            let (_, st) = script_tensors(&n, &rho);
            assert!(st.quad_form(&eps, &eps).abs() < 1e-12);
        }
    }

    #[test]
    fn entrywise_forms_match_tensor_algebra() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let xi = rng.random_range(0.0..std::f64::consts::TAU);
            let zeta = rng.random_range(0.0..std::f64::consts::PI);
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let chi = rng.random_range(0.0..std::f64::consts::PI);
            let n = normal_3d(xi, zeta);
            let rho = rotation_3d(xi, zeta, theta, chi);
            let t = rho.dot_vec(&n);
            let (sn_a, st_a) = script_tensors(&n, &rho);
            let (sn_b, st_b) = script_entries_from_vectors(&n, &t);
            assert!(sn_a.sub(&sn_b).max_abs() < 1e-13);
            assert!(st_a.sub(&st_b).max_abs() < 1e-13);
        }
    }
}
