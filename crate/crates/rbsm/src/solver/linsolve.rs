//! Sparse symmetric linear algebra: CSR storage, reverse Cuthill-McKee
//! ordering, an envelope (skyline) Cholesky factorization and a
//! Jacobi-preconditioned conjugate gradient solver.
//!
//! The assembled stiffness matrices are planar-graph structured, so a
//! bandwidth-reducing permutation plus an envelope factorization handles
//! the desk-scale systems here comfortably and deterministically.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum LinSolveError {
    #[error("matrix is not positive definite (pivot {pivot:e} at unknown {index})")]
    NotPositiveDefinite { index: usize, pivot: f64 },
    #[error("conjugate gradient stalled at relative residual {residual:e}")]
    CgStalled { residual: f64 },
}

/// Compressed sparse row matrix; both triangles of the symmetric matrix
/// are stored.
#[derive(Clone, Debug)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub cols: Vec<usize>,
    pub vals: Vec<f64>,
}

impl CsrMatrix {
    /// Build from unsorted (row, col, value) triplets; duplicates are summed
    /// in a deterministic order.
    pub fn from_triplets(n: usize, triplets: &mut Vec<(u32, u32, f64)>) -> CsrMatrix {
        triplets.sort_by_key(|&(r, c, _)| (r, c));
        let mut row_ptr = vec![0usize; n + 1];
        let mut cols = Vec::new();
        let mut vals: Vec<f64> = Vec::new();
        let mut last: Option<(u32, u32)> = None;
        for &(r, c, v) in triplets.iter() {
            if last == Some((r, c)) {
                *vals.last_mut().unwrap() += v;
            } else {
                cols.push(c as usize);
                vals.push(v);
                row_ptr[r as usize + 1] += 1;
                last = Some((r, c));
            }
        }
        for i in 0..n {
            row_ptr[i + 1] += row_ptr[i];
        }
        CsrMatrix {
            n,
            row_ptr,
            cols,
            vals,
        }
    }

    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let r = self.row_ptr[i]..self.row_ptr[i + 1];
        (&self.cols[r.clone()], &self.vals[r])
    }

    pub fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            y[i] = cols.iter().zip(vals).map(|(&c, &v)| v * x[c]).sum();
        }
    }

    /// Largest relative asymmetry `|a_ij - a_ji| / max|a|`.
    pub fn asymmetry(&self) -> f64 {
        let scale = self.vals.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        if scale == 0.0 {
            return 0.0;
        }
        let mut worst = 0.0f64;
        for i in 0..self.n {
            let (cols, vals) = self.row(i);
            for (&j, &v) in cols.iter().zip(vals) {
                if j > i {
                    let vt = self.get(j, i);
                    worst = worst.max((v - vt).abs());
                }
            }
        }
        worst / scale
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }
}

/// Reverse Cuthill-McKee ordering: `perm[new] = old`.
pub fn reverse_cuthill_mckee(m: &CsrMatrix) -> Vec<usize> {
    let n = m.n;
    let degree = |i: usize| m.row_ptr[i + 1] - m.row_ptr[i];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    // next component seed: unvisited vertex of minimum degree
    while let Some(start) = (0..n)
        .filter(|&i| !visited[i])
        .min_by_key(|&i| (degree(i), i))
    {
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(start);
        visited[start] = true;
        while let Some(v) = queue.pop_front() {
            order.push(v);
            let (cols, _) = m.row(v);
            let mut nbrs: Vec<usize> = cols.iter().copied().filter(|&c| !visited[c]).collect();
            nbrs.sort_by_key(|&c| (degree(c), c));
            for c in nbrs {
                visited[c] = true;
                queue.push_back(c);
            }
        }
    }
    order.reverse();
    order
}

/// Envelope Cholesky factor in skyline storage.
pub struct SkylineCholesky {
    n: usize,
    /// `perm[new] = old`
    perm: Vec<usize>,
    /// first stored column per row
    first: Vec<usize>,
    /// start of each row's slice in `data`
    offsets: Vec<usize>,
    data: Vec<f64>,
}

impl SkylineCholesky {
    /// Factor a symmetric positive definite matrix. On a non-positive pivot
    /// the error names the offending unknown in the original numbering.
    pub fn factor(m: &CsrMatrix) -> Result<SkylineCholesky, LinSolveError> {
        let n = m.n;
        let perm = reverse_cuthill_mckee(m);
        let mut inv_perm = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv_perm[old] = new;
        }

        let mut first = vec![0usize; n];
        for new in 0..n {
            let old = perm[new];
            let (cols, _) = m.row(old);
            let f = cols
                .iter()
                .map(|&c| inv_perm[c])
                .filter(|&c| c <= new)
                .min()
                .unwrap_or(new);
            first[new] = f.min(new);
        }

        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + (i - first[i] + 1);
        }
        let mut data = vec![0.0f64; offsets[n]];
        for new in 0..n {
            let old = perm[new];
            let (cols, vals) = m.row(old);
            for (&c, &v) in cols.iter().zip(vals) {
                let cn = inv_perm[c];
                if cn <= new {
                    data[offsets[new] + (cn - first[new])] = v;
                }
            }
        }

        let scale = data.iter().fold(0.0f64, |mx, v| mx.max(v.abs()));
        // in-place factorization; fill stays inside the envelope
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut s = data[offsets[i] + (j - fi)];
                for k in lo..j {
                    s -= data[offsets[i] + (k - fi)] * data[offsets[j] + (k - fj)];
                }
                data[offsets[i] + (j - fi)] = s / data[offsets[j] + (j - fj)];
            }
            let mut d = data[offsets[i] + (i - fi)];
            for k in fi..i {
                let l = data[offsets[i] + (k - fi)];
                d -= l * l;
            }
            if d <= 1e-14 * scale.max(1e-300) {
                return Err(LinSolveError::NotPositiveDefinite {
                    index: perm[i],
                    pivot: d,
                });
            }
            data[offsets[i] + (i - fi)] = d.sqrt();
        }

        Ok(SkylineCholesky {
            n,
            perm,
            first,
            offsets,
            data,
        })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut y = vec![0.0; n];
        for i in 0..n {
            y[i] = b[self.perm[i]];
        }
        // forward: L y' = y
        for i in 0..n {
            let fi = self.first[i];
            let mut s = y[i];
            for k in fi..i {
                s -= self.data[self.offsets[i] + (k - fi)] * y[k];
            }
            y[i] = s / self.data[self.offsets[i] + (i - fi)];
        }
        // backward: Lᵀ x' = y'
        for i in (0..n).rev() {
            let fi = self.first[i];
            y[i] /= self.data[self.offsets[i] + (i - fi)];
            let yi = y[i];
            for k in fi..i {
                y[k] -= self.data[self.offsets[i] + (k - fi)] * yi;
            }
        }
        let mut x = vec![0.0; n];
        for i in 0..n {
            x[self.perm[i]] = y[i];
        }
        x
    }
}

/// Jacobi-preconditioned conjugate gradient to a relative residual.
pub fn conjugate_gradient(
    m: &CsrMatrix,
    b: &[f64],
    rel_tol: f64,
) -> Result<Vec<f64>, LinSolveError> {
    let n = m.n;
    let norm_b = b.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm_b == 0.0 {
        return Ok(vec![0.0; n]);
    }
    let inv_diag: Vec<f64> = (0..n)
        .map(|i| {
            let d = m.get(i, i);
            if d > 0.0 {
                1.0 / d
            } else {
                1.0
            }
        })
        .collect();
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, d)| a * d).collect();
    let mut p = z.clone();
    let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
    let mut ap = vec![0.0; n];
    let max_iter = 40 * n + 100;
    for _ in 0..max_iter {
        m.matvec(&p, &mut ap);
        let pap: f64 = p.iter().zip(&ap).map(|(a, b)| a * b).sum();
        if pap <= 0.0 {
            return Err(LinSolveError::NotPositiveDefinite {
                index: 0,
                pivot: pap,
            });
        }
        let alpha = rz / pap;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * ap[i];
        }
        let norm_r = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm_r <= rel_tol * norm_b {
            return Ok(x);
        }
        for i in 0..n {
            z[i] = r[i] * inv_diag[i];
        }
        let rz_new: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let beta = rz_new / rz;
        rz = rz_new;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    let norm_r = r.iter().map(|v| v * v).sum::<f64>().sqrt();
    Err(LinSolveError::CgStalled {
        residual: norm_r / norm_b,
    })
}
