//! Dense tensors of order 2, 3 and 4 in two or three dimensions.
//!
//! The tensors here are small (at most 3^4 entries), so everything is stored
//! as a flat row-major `Vec<f64>`. The operations mirror the conventions of
//! classical continuum mechanics texts:
//!
//! * `A · B` contracts the last index of `A` with the first index of `B`,
//! * `A : B` contracts the last two indices of `A` with the first two of `B`,
//! * `transpose(i, j)` swaps two index positions (0-based),
//! * the minor symmetrization of a fourth order tensor averages it with its
//!   `(2, 3)` transpose.
//!
//! The volumetric projector keeps the divisor 3 in two dimensions as well, so
//! that the closed-form elastic tensors expand in the same `(isym, ivol)`
//! basis in both dimensions. As a consequence `ivol : ivol = ivol` holds only
//! for `dim == 3`; in 2D the contraction yields `(2/3) ivol`.

fn check_dim(dim: usize) {
    assert!(dim == 2 || dim == 3, "tensor dimension must be 2 or 3");
}

macro_rules! tensor_type {
    ($name:ident, $order:expr) => {
        #[derive(Clone, Debug, PartialEq)]
        pub struct $name {
            dim: usize,
            data: Vec<f64>,
        }

        impl $name {
            pub fn zeros(dim: usize) -> Self {
                check_dim(dim);
                $name {
                    dim,
                    data: vec![0.0; dim.pow($order)],
                }
            }

            pub fn dim(&self) -> usize {
                self.dim
            }

            pub const ORDER: usize = $order;

            pub fn data(&self) -> &[f64] {
                &self.data
            }

            pub fn data_mut(&mut self) -> &mut [f64] {
                &mut self.data
            }

            fn flat(&self, idx: &[usize]) -> usize {
                debug_assert_eq!(idx.len(), $order);
                let mut f = 0;
                for &i in idx {
                    debug_assert!(i < self.dim);
                    f = f * self.dim + i;
                }
                f
            }

            pub fn get(&self, idx: &[usize]) -> f64 {
                self.data[self.flat(idx)]
            }

            pub fn set(&mut self, idx: &[usize], v: f64) {
                let f = self.flat(idx);
                self.data[f] = v;
            }

            pub fn add_at(&mut self, idx: &[usize], v: f64) {
                let f = self.flat(idx);
                self.data[f] += v;
            }

            /// Swap index positions `i` and `j` (0-based, `i < j < order`).
            /// This is an involution: applying it twice restores the tensor.
            pub fn transpose(&self, i: usize, j: usize) -> Self {
                assert!(
                    i < j && j < $order,
                    "transpose indices out of range: ({i}, {j}) for order {}",
                    $order
                );
                let mut out = Self::zeros(self.dim);
                let mut idx = [0usize; $order];
                loop {
                    let mut swapped = idx;
                    swapped.swap(i, j);
                    out.set(&swapped, self.get(&idx));
                    if !next_index(&mut idx, self.dim) {
                        break;
                    }
                }
                out
            }

            pub fn scale(&self, s: f64) -> Self {
                $name {
                    dim: self.dim,
                    data: self.data.iter().map(|v| v * s).collect(),
                }
            }

            pub fn add(&self, other: &Self) -> Self {
                assert_eq!(self.dim, other.dim);
                $name {
                    dim: self.dim,
                    data: self
                        .data
                        .iter()
                        .zip(&other.data)
                        .map(|(a, b)| a + b)
                        .collect(),
                }
            }

            pub fn sub(&self, other: &Self) -> Self {
                self.add(&other.scale(-1.0))
            }

            pub fn max_abs(&self) -> f64 {
                self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
            }
        }
    };
}

tensor_type!(Tensor2, 2);
tensor_type!(Tensor3, 3);
tensor_type!(Tensor4, 4);

/// Advance a multi-index in row-major order; returns false after the last one.
fn next_index(idx: &mut [usize], dim: usize) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dim {
            return true;
        }
        idx[k] = 0;
    }
    false
}

impl Tensor2 {
    pub fn identity(dim: usize) -> Self {
        let mut t = Tensor2::zeros(dim);
        for i in 0..dim {
            t.set(&[i, i], 1.0);
        }
        t
    }

    pub fn from_rows_2d(rows: [[f64; 2]; 2]) -> Self {
        let mut t = Tensor2::zeros(2);
        for i in 0..2 {
            for j in 0..2 {
                t.set(&[i, j], rows[i][j]);
            }
        }
        t
    }

    pub fn from_rows_3d(rows: [[f64; 3]; 3]) -> Self {
        let mut t = Tensor2::zeros(3);
        for i in 0..3 {
            for j in 0..3 {
                t.set(&[i, j], rows[i][j]);
            }
        }
        t
    }

    pub fn outer(a: &[f64], b: &[f64]) -> Self {
        assert_eq!(a.len(), b.len());
        let dim = a.len();
        let mut t = Tensor2::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                t.set(&[i, j], a[i] * b[j]);
            }
        }
        t
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(&[i, i])).sum()
    }

    /// Matrix product `self · other`.
    pub fn dot(&self, other: &Tensor2) -> Tensor2 {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Tensor2::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for m in 0..d {
                    s += self.get(&[i, m]) * other.get(&[m, j]);
                }
                out.set(&[i, j], s);
            }
        }
        out
    }

    /// Matrix-vector product `self · v`.
    pub fn dot_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(&[i, j]) * v[j]).sum())
            .collect()
    }

    /// Double contraction `self : other` (scalar).
    pub fn ddot(&self, other: &Tensor2) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data.iter().zip(&other.data).map(|(a, b)| a * b).sum()
    }

    pub fn sym(&self) -> Tensor2 {
        self.add(&self.transpose(0, 1)).scale(0.5)
    }

    /// Largest deviation from orthonormality, `max |ρᵀρ - 1|`.
    pub fn orthonormality_defect(&self) -> f64 {
        let prod = self.transpose(0, 1).dot(self);
        prod.sub(&Tensor2::identity(self.dim)).max_abs()
    }

    pub fn det(&self) -> f64 {
        match self.dim {
            2 => self.get(&[0, 0]) * self.get(&[1, 1]) - self.get(&[0, 1]) * self.get(&[1, 0]),
            3 => {
                let g = |i, j| self.get(&[i, j]);
                g(0, 0) * (g(1, 1) * g(2, 2) - g(1, 2) * g(2, 1))
                    - g(0, 1) * (g(1, 0) * g(2, 2) - g(1, 2) * g(2, 0))
                    + g(0, 2) * (g(1, 0) * g(2, 1) - g(1, 1) * g(2, 0))
            }
            _ => unreachable!(),
        }
    }
}

impl Tensor3 {
    pub fn outer3(a: &[f64], b: &[f64], c: &[f64]) -> Self {
        let dim = a.len();
        let mut t = Tensor3::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    t.set(&[i, j, k], a[i] * b[j] * c[k]);
                }
            }
        }
        t
    }

    /// Levi-Civita permutation symbol (3D).
    pub fn levi_civita() -> Self {
        let mut t = Tensor3::zeros(3);
        t.set(&[0, 1, 2], 1.0);
        t.set(&[1, 2, 0], 1.0);
        t.set(&[2, 0, 1], 1.0);
        t.set(&[0, 2, 1], -1.0);
        t.set(&[2, 1, 0], -1.0);
        t.set(&[1, 0, 2], -1.0);
        t
    }

    /// Contract a vector with the first index: `(v · self)_{jk} = v_i self_{ijk}`.
    pub fn vec_dot_front(&self, v: &[f64]) -> Tensor2 {
        assert_eq!(self.dim, v.len());
        let d = self.dim;
        let mut out = Tensor2::zeros(d);
        for j in 0..d {
            for k in 0..d {
                let mut s = 0.0;
                for i in 0..d {
                    s += v[i] * self.get(&[i, j, k]);
                }
                out.set(&[j, k], s);
            }
        }
        out
    }

    /// Contract the last index with the first index of `other`, producing a
    /// fourth order tensor: `(self · other)_{ijkl} = self_{ijm} other_{mkl}`.
    pub fn dot_t3(&self, other: &Tensor3) -> Tensor4 {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Tensor4::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = 0.0;
                        for m in 0..d {
                            s += self.get(&[i, j, m]) * other.get(&[m, k, l]);
                        }
                        out.set(&[i, j, k, l], s);
                    }
                }
            }
        }
        out
    }

    /// Contract the last index with the first index of a matrix:
    /// `(self · m)_{ijk} = self_{ijp} m_{pk}`.
    pub fn dot_t2(&self, m: &Tensor2) -> Tensor3 {
        assert_eq!(self.dim, m.dim());
        let d = self.dim;
        let mut out = Tensor3::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let mut s = 0.0;
                    for p in 0..d {
                        s += self.get(&[i, j, p]) * m.get(&[p, k]);
                    }
                    out.set(&[i, j, k], s);
                }
            }
        }
        out
    }

    /// Double contraction with a matrix over the last two indices:
    /// `(self : m)_i = self_{ijk} m_{jk}`.
    pub fn ddot_t2(&self, m: &Tensor2) -> Vec<f64> {
        assert_eq!(self.dim, m.dim());
        let d = self.dim;
        (0..d)
            .map(|i| {
                let mut s = 0.0;
                for j in 0..d {
                    for k in 0..d {
                        s += self.get(&[i, j, k]) * m.get(&[j, k]);
                    }
                }
                s
            })
            .collect()
    }
}

impl Tensor4 {
    /// Symmetric fourth-order identity `I_{ijkl} = (δ_ik δ_jl + δ_il δ_jk)/2`.
    pub fn isym(dim: usize) -> Self {
        check_dim(dim);
        let mut t = Tensor4::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                for k in 0..dim {
                    for l in 0..dim {
                        let d = |a: usize, b: usize| if a == b { 1.0 } else { 0.0 };
                        t.set(&[i, j, k, l], 0.5 * (d(i, k) * d(j, l) + d(i, l) * d(j, k)));
                    }
                }
            }
        }
        t
    }

    /// Volumetric projector `(1 ⊗ 1)/3`; the divisor stays 3 in 2D.
    pub fn ivol(dim: usize) -> Self {
        check_dim(dim);
        let mut t = Tensor4::zeros(dim);
        for i in 0..dim {
            for k in 0..dim {
                t.set(&[i, i, k, k], 1.0 / 3.0);
            }
        }
        t
    }

    pub fn outer_t2(a: &Tensor2, b: &Tensor2) -> Self {
        assert_eq!(a.dim(), b.dim());
        let d = a.dim();
        let mut out = Tensor4::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        out.set(&[i, j, k, l], a.get(&[i, j]) * b.get(&[k, l]));
                    }
                }
            }
        }
        out
    }

    /// `(m · self)_{ijkl} = m_{ip} self_{pjkl}`.
    pub fn dot_front(&self, m: &Tensor2) -> Tensor4 {
        assert_eq!(self.dim, m.dim());
        let d = self.dim;
        let mut out = Tensor4::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = 0.0;
                        for p in 0..d {
                            s += m.get(&[i, p]) * self.get(&[p, j, k, l]);
                        }
                        out.set(&[i, j, k, l], s);
                    }
                }
            }
        }
        out
    }

    /// `(self · m)_{ijkl} = self_{ijkp} m_{pl}`.
    pub fn dot_back(&self, m: &Tensor2) -> Tensor4 {
        assert_eq!(self.dim, m.dim());
        let d = self.dim;
        let mut out = Tensor4::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = 0.0;
                        for p in 0..d {
                            s += self.get(&[i, j, k, p]) * m.get(&[p, l]);
                        }
                        out.set(&[i, j, k, l], s);
                    }
                }
            }
        }
        out
    }

    /// Double contraction with a second order tensor: `(self : m)_{ij}`.
    pub fn ddot_t2(&self, m: &Tensor2) -> Tensor2 {
        assert_eq!(self.dim, m.dim());
        let d = self.dim;
        let mut out = Tensor2::zeros(d);
        for i in 0..d {
            for j in 0..d {
                let mut s = 0.0;
                for k in 0..d {
                    for l in 0..d {
                        s += self.get(&[i, j, k, l]) * m.get(&[k, l]);
                    }
                }
                out.set(&[i, j], s);
            }
        }
        out
    }

    /// Double contraction of two fourth order tensors.
    pub fn ddot_t4(&self, other: &Tensor4) -> Tensor4 {
        assert_eq!(self.dim, other.dim);
        let d = self.dim;
        let mut out = Tensor4::zeros(d);
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    for l in 0..d {
                        let mut s = 0.0;
                        for m in 0..d {
                            for n in 0..d {
                                s += self.get(&[i, j, m, n]) * other.get(&[m, n, k, l]);
                            }
                        }
                        out.set(&[i, j, k, l], s);
                    }
                }
            }
        }
        out
    }

    /// Quadratic form `a : self : b`.
    pub fn quad_form(&self, a: &Tensor2, b: &Tensor2) -> f64 {
        a.ddot(&self.ddot_t2(b))
    }

    /// Minor symmetrization `(self + self^{T34})/2`; idempotent.
    pub fn symmetrize_minor(&self) -> Tensor4 {
        self.add(&self.transpose(2, 3)).scale(0.5)
    }

    pub fn has_minor_symmetry(&self, tol: f64) -> bool {
        self.sub(&self.transpose(2, 3)).max_abs() <= tol
    }
}

/// Coefficients `(a, b)` such that `D = a · isym + b · ivol`, read off the
/// `D_1212` and `D_1122` entries. Only meaningful for isotropic tensors.
pub fn iso_coefficients(d: &Tensor4) -> (f64, f64) {
    let a = 2.0 * d.get(&[0, 1, 0, 1]);
    let b = 3.0 * d.get(&[0, 0, 1, 1]);
    (a, b)
}

/// Residual of the isotropic expansion: `max |D - a·isym - b·ivol|`.
pub fn iso_expansion_defect(d: &Tensor4) -> f64 {
    let (a, b) = iso_coefficients(d);
    let recon = Tensor4::isym(d.dim())
        .scale(a)
        .add(&Tensor4::ivol(d.dim()).scale(b));
    d.sub(&recon).max_abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn transpose_is_involution() {
        for dim in [2, 3] {
            let mut t = Tensor4::zeros(dim);
            for (i, v) in t.data_mut().iter_mut().enumerate() {
                *v = (i as f64).sin();
            }
            assert_eq!(t.transpose(0, 2).transpose(0, 2), t);
            assert_eq!(t.transpose(1, 3).transpose(1, 3), t);
        }
    }

    #[test]
    fn symmetric_tensor2_unchanged_by_transpose() {
        let t = Tensor2::from_rows_2d([[1.0, 2.0], [2.0, -3.0]]);
        assert_eq!(t.transpose(0, 1), t);
    }

    #[test]
    fn symmetrize_minor_is_idempotent_and_fixes_isym() {
        for dim in [2, 3] {
            let isym = Tensor4::isym(dim);
            assert!(isym.sub(&isym.symmetrize_minor()).max_abs() < 1e-15);

            let mut t = Tensor4::zeros(dim);
            for (i, v) in t.data_mut().iter_mut().enumerate() {
                *v = (i as f64 * 0.7).cos();
            }
            let s = t.symmetrize_minor();
            assert!(s.sub(&s.symmetrize_minor()).max_abs() < 1e-15);
            assert!(s.has_minor_symmetry(1e-15));
        }
    }

    /// `⟨(ivol)^{T23}⟩_sym = isym/3`, valid in both dimensions.
    #[test]
    fn ivol_transpose_symmetrized_identity() {
        for dim in [2, 3] {
            let lhs = Tensor4::ivol(dim).transpose(1, 2).symmetrize_minor();
            let rhs = Tensor4::isym(dim).scale(1.0 / 3.0);
            assert!(lhs.sub(&rhs).max_abs() < 1e-15);

            let lhs24 = Tensor4::ivol(dim).transpose(1, 3).symmetrize_minor();
            assert!(lhs24.sub(&rhs).max_abs() < 1e-15);
        }
    }

    #[test]
    fn projector_contractions() {
        // isym : isym = isym in both dimensions.
        for dim in [2, 3] {
            let isym = Tensor4::isym(dim);
            assert!(isym.ddot_t4(&isym).sub(&isym).max_abs() < 1e-15);
        }
        // ivol : ivol = ivol only in 3D; keeping the divisor 3 in 2D turns
        // the contraction into (2/3) ivol.
        let ivol3 = Tensor4::ivol(3);
        assert!(ivol3.ddot_t4(&ivol3).sub(&ivol3).max_abs() < 1e-15);
        let ivol2 = Tensor4::ivol(2);
        assert!(ivol2.ddot_t4(&ivol2).sub(&ivol2.scale(2.0 / 3.0)).max_abs() < 1e-15);
    }

    #[test]
    fn projector_action_on_tensor2() {
        for dim in [2, 3] {
            let mut x = Tensor2::zeros(dim);
            for (i, v) in x.data_mut().iter_mut().enumerate() {
                *v = (i as f64 + 1.0).sqrt();
            }
            // isym : X = sym(X)
            let sx = Tensor4::isym(dim).ddot_t2(&x);
            assert!(sx.sub(&x.sym()).max_abs() < 1e-15);
            // ivol : X = (tr X / 3) 1
            let vx = Tensor4::ivol(dim).ddot_t2(&x);
            let expect = Tensor2::identity(dim).scale(x.trace() / 3.0);
            assert!(vx.sub(&expect).max_abs() < 1e-15);
        }
    }

    #[test]
    fn iso_coefficients_roundtrip() {
        for dim in [2, 3] {
            let d = Tensor4::isym(dim)
                .scale(1.7)
                .add(&Tensor4::ivol(dim).scale(-0.45));
            let (a, b) = iso_coefficients(&d);
            assert!((a - 1.7).abs() < 1e-14);
            assert!((b + 0.45).abs() < 1e-14);
            assert!(iso_expansion_defect(&d) < 1e-14);
        }
    }

    #[test]
    fn levi_civita_gives_cross_product() {
        let e = Tensor3::levi_civita();
        let a = [1.0, 2.0, 3.0];
        let b = [-2.0, 0.5, 4.0];
        // b · E · a: (b·E)_{jk} = b_i E_{ijk}, then contract with a.
        let be = e.vec_dot_front(&b);
        let out = be.dot_vec(&a);
        let cross = [
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ];
        for i in 0..3 {
            assert!((out[i] - cross[i]).abs() < 1e-15);
        }
    }
}
