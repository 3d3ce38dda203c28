//! Orientation expectations of the contact tensors: analytic closed forms
//! for the cone distribution and a Monte Carlo oracle for everything.

use super::distribution::OrientationDistribution;
use super::rotation::{normal_2d, normal_3d, rotation_y, rotation_z};
use super::script::script_entries_from_vectors;
use crate::tensor::Tensor4;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::f64::consts::TAU;

/// `sin(x)/x` continued through zero.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// Closed-form symmetric expectations for the cone distribution:
/// the mean volume factor `E[ρ:ν]` and `⟨E[𝒩]⟩ˢʸᵐ`, `⟨E[𝒯]⟩ˢʸᵐ`.
pub fn closed_expectations(gamma: f64, dim: usize) -> (f64, Tensor4, Tensor4) {
    let isym = Tensor4::isym(dim);
    let ivol = Tensor4::ivol(dim);
    match dim {
        2 => {
            let m = sinc(gamma);
            // 3 sin(2γ)/(16γ) = (3/8)·sinc(2γ)
            let c = 3.0 / 8.0 * sinc(2.0 * gamma);
            let n = isym.scale(0.25).add(&ivol.scale(c));
            let t = isym.scale(0.25).add(&ivol.scale(-c));
            (m, n, t)
        }
        3 => {
            let m = (gamma / 2.0).cos().powi(2);
            let w = 2.0 * gamma.cos() + (2.0 * gamma).cos();
            let n = isym
                .scale((w + 21.0) / 180.0)
                .add(&ivol.scale((w + 1.0) / 20.0));
            let t = isym
                .scale((39.0 - w) / 180.0)
                .add(&ivol.scale(-(w + 1.0) / 20.0));
            (m, n, t)
        }
        _ => panic!("dimension must be 2 or 3"),
    }
}

/// Monte Carlo estimate of the same expectations with per-entry standard
/// errors of the mean.
#[derive(Clone, Debug)]
pub struct ExpectationEstimate {
    pub samples: u64,
    pub m_vol: f64,
    pub m_vol_se: f64,
    pub n_sym: Tensor4,
    pub n_sym_se: Tensor4,
    pub t_sym: Tensor4,
    pub t_sym_se: Tensor4,
}

impl ExpectationEstimate {
    /// Largest |closed − sampled| / se over all tensor entries, ignoring
    /// entries whose standard error is numerically zero (both estimates
    /// exact there).
    pub fn max_sigma_deviation(&self, n_closed: &Tensor4, t_closed: &Tensor4) -> f64 {
        let mut worst = 0.0f64;
        for (mc, se, closed) in [
            (&self.n_sym, &self.n_sym_se, n_closed),
            (&self.t_sym, &self.t_sym_se, t_closed),
        ] {
            for i in 0..mc.data().len() {
                let err = (mc.data()[i] - closed.data()[i]).abs();
                let s = se.data()[i];
                if s > 1e-300 {
                    worst = worst.max(err / s);
                } else if err > 1e-12 {
                    worst = f64::INFINITY;
                }
            }
        }
        worst
    }
}

struct Accumulator {
    count: u64,
    m_sum: f64,
    m_sumsq: f64,
    n_sum: Vec<f64>,
    n_sumsq: Vec<f64>,
    t_sum: Vec<f64>,
    t_sumsq: Vec<f64>,
}

impl Accumulator {
    fn new(entries: usize) -> Self {
        Accumulator {
            count: 0,
            m_sum: 0.0,
            m_sumsq: 0.0,
            n_sum: vec![0.0; entries],
            n_sumsq: vec![0.0; entries],
            t_sum: vec![0.0; entries],
            t_sumsq: vec![0.0; entries],
        }
    }

    fn merge(mut self, other: Accumulator) -> Accumulator {
        self.count += other.count;
        self.m_sum += other.m_sum;
        self.m_sumsq += other.m_sumsq;
        for i in 0..self.n_sum.len() {
            self.n_sum[i] += other.n_sum[i];
            self.n_sumsq[i] += other.n_sumsq[i];
            self.t_sum[i] += other.t_sum[i];
            self.t_sumsq[i] += other.t_sumsq[i];
        }
        self
    }
}

/// Number of independent RNG substreams; fixed so the result does not depend
/// on how many threads execute them.
const CHUNKS: u64 = 64;

fn subseed(seed: u64, tag: u64) -> u64 {
    // splitmix64 step
    let mut z = seed ^ tag.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Monte Carlo means of `ρ:ν`, `⟨𝒩⟩ˢʸᵐ` and `⟨𝒯⟩ˢʸᵐ` with the isotropy
/// angles drawn from their densities and `chi` from `dist`. Deterministic
/// for a fixed seed, independent of thread count.
pub fn expectation_oracle(
    dist: &OrientationDistribution,
    samples: u64,
    seed: u64,
) -> ExpectationEstimate {
    assert!(samples >= 1, "need at least one sample");
    let dim = dist.dim;
    let entries = dim.pow(4);

    let acc = (0..CHUNKS)
        .into_par_iter()
        .map(|chunk| {
            let mut n = samples / CHUNKS;
            if chunk < samples % CHUNKS {
                n += 1;
            }
            let mut rng = ChaCha8Rng::seed_from_u64(subseed(seed, chunk));
            let mut acc = Accumulator::new(entries);
            let mut sym_n = vec![0.0; entries];
            let mut sym_t = vec![0.0; entries];
            for _ in 0..n {
                let chi = dist.sample_chi(&mut rng);
                let (nvec, tvec): (Vec<f64>, Vec<f64>) = if dim == 2 {
                    let xi = rng.random::<f64>() * TAU;
                    let nv = normal_2d(xi);
                    let tv = normal_2d(xi + chi);
                    (nv.to_vec(), tv.to_vec())
                } else {
                    let xi = rng.random::<f64>() * TAU;
                    let zeta = (1.0 - 2.0 * rng.random::<f64>()).clamp(-1.0, 1.0).acos();
                    let theta = rng.random::<f64>() * TAU;
                    let nv = normal_3d(xi, zeta);
                    let local = [chi.sin() * theta.cos(), chi.sin() * theta.sin(), chi.cos()];
                    let tv = rotation_z(xi).dot(&rotation_y(zeta)).dot_vec(&local);
                    (nv.to_vec(), tv)
                };
                let m: f64 = nvec.iter().zip(&tvec).map(|(a, b)| a * b).sum();
                acc.m_sum += m;
                acc.m_sumsq += m * m;

                let (sn, st) = script_entries_from_vectors(&nvec, &tvec);
                // symmetrize each sample before accumulating so the standard
                // errors refer to the reported entries
                sym_entries(sn.data(), dim, &mut sym_n);
                sym_entries(st.data(), dim, &mut sym_t);
                for i in 0..entries {
                    acc.n_sum[i] += sym_n[i];
                    acc.n_sumsq[i] += sym_n[i] * sym_n[i];
                    acc.t_sum[i] += sym_t[i];
                    acc.t_sumsq[i] += sym_t[i] * sym_t[i];
                }
            }
            acc.count = n;
            acc
        })
        .collect::<Vec<_>>()
        .into_iter()
        .fold(Accumulator::new(entries), Accumulator::merge);

    let n = acc.count as f64;
    let mean_se = |sum: f64, sumsq: f64| {
        let mean = sum / n;
        let var = (sumsq / n - mean * mean).max(0.0);
        (mean, (var / n).sqrt())
    };

    let (m_vol, m_vol_se) = mean_se(acc.m_sum, acc.m_sumsq);
    let mut n_sym = Tensor4::zeros(dim);
    let mut n_se = Tensor4::zeros(dim);
    let mut t_sym = Tensor4::zeros(dim);
    let mut t_se = Tensor4::zeros(dim);
    for i in 0..entries {
        let (m, s) = mean_se(acc.n_sum[i], acc.n_sumsq[i]);
        n_sym.data_mut()[i] = m;
        n_se.data_mut()[i] = s;
        let (m, s) = mean_se(acc.t_sum[i], acc.t_sumsq[i]);
        t_sym.data_mut()[i] = m;
        t_se.data_mut()[i] = s;
    }

    ExpectationEstimate {
        samples,
        m_vol,
        m_vol_se,
        n_sym,
        n_sym_se: n_se,
        t_sym,
        t_sym_se: t_se,
    }
}

/// T34-symmetrize a flat order-4 tensor into `out`.
fn sym_entries(data: &[f64], dim: usize, out: &mut [f64]) {
    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                for l in 0..dim {
                    let a = ((i * dim + j) * dim + k) * dim + l;
                    let b = ((i * dim + j) * dim + l) * dim + k;
                    out[a] = 0.5 * (data[a] + data[b]);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_2d_limits() {
        // γ → 0: N → isym/4 + (3/8) ivol
        let (m, n, _) = closed_expectations(0.0, 2);
        assert!((m - 1.0).abs() < 1e-14);
        let expect = Tensor4::isym(2)
            .scale(0.25)
            .add(&Tensor4::ivol(2).scale(3.0 / 8.0));
        assert!(n.sub(&expect).max_abs() < 1e-14);
    }

    #[test]
    fn closed_3d_limits() {
        // γ = 0: N = (2/15) isym + (1/5) ivol, m = 1
        let (m, n, _) = closed_expectations(0.0, 3);
        assert!((m - 1.0).abs() < 1e-14);
        let expect = Tensor4::isym(3)
            .scale(2.0 / 15.0)
            .add(&Tensor4::ivol(3).scale(0.2));
        assert!(n.sub(&expect).max_abs() < 1e-14);
        // γ = π: volume expectation collapses, m = cos²(π/2) = 0
        let (m_pi, _, _) = closed_expectations(std::f64::consts::PI, 3);
        assert!(m_pi.abs() < 1e-30);
    }

    #[test]
    fn oracle_volume_mean_2d_half_pi() {
        // E[ρ:ν] = sin γ / γ; at γ = π/2 this is 2/π.
        let dist = OrientationDistribution::cone(std::f64::consts::FRAC_PI_2, 2).unwrap();
        let est = expectation_oracle(&dist, 400_000, 1);
        assert!(
            (est.m_vol - 2.0 / std::f64::consts::PI).abs() < 4.0 * est.m_vol_se + 1e-12,
            "sampled {} expected {}",
            est.m_vol,
            2.0 / std::f64::consts::PI
        );
    }

    #[test]
    fn oracle_volume_mean_3d_gamma_pi() {
        let dist = OrientationDistribution::cone(std::f64::consts::PI, 3).unwrap();
        let est = expectation_oracle(&dist, 200_000, 2);
        assert!(est.m_vol.abs() < 4.0 * est.m_vol_se.max(1e-3));
    }

    #[test]
    fn oracle_dirac_parallel_matches_isotropic_quartic_moment() {
        // ρ = identity: N_sym must converge to E[ν ⊗ ν].
        for dim in [2usize, 3] {
            let dist = OrientationDistribution::dirac_parallel(dim);
            let est = expectation_oracle(&dist, 300_000, 3);
            assert!((est.m_vol - 1.0).abs() < 1e-14);
            let (_, n_closed, _) = closed_expectations(0.0, dim);
            assert!(
                est.max_sigma_deviation(&n_closed, &n_closed.clone()) < 4.5
                    || est.n_sym.sub(&n_closed).max_abs() < 2e-3
            );
        }
    }

    #[test]
    fn oracle_reproducible_and_thread_independent() {
        let dist = OrientationDistribution::cone(1.0, 3).unwrap();
        let a = expectation_oracle(&dist, 50_000, 7);
        let b = expectation_oracle(&dist, 50_000, 7);
        assert_eq!(a.m_vol.to_bits(), b.m_vol.to_bits());
        assert_eq!(a.n_sym, b.n_sym);
        assert_eq!(a.t_sym, b.t_sym);
    }
}
