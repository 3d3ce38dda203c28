//! The 2D discrete rigid-body elastic solver.
//!
//! Each body carries three degrees of freedom: two translations and one
//! rotation about its governing node. Contacts act as springs on the
//! displacement jump at the face centroid; prescribed boundary
//! displacements drive the system.

mod linsolve;

pub use linsolve::{conjugate_gradient, CsrMatrix, LinSolveError, SkylineCholesky};

use crate::geometry::{ContactElement, Tessellation};
use crate::theory::MaterialParams;
use crate::vec2::Vec2;
use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("bodies without any contact element: {0:?}")]
    DetachedBodies(Vec<usize>),
    #[error("contact between nodes {a} and {b} has near-zero length {l:e}")]
    ZeroLengthContact { a: usize, b: usize, l: f64 },
    #[error(
        "stiffness matrix is not positive definite at dof {dof} of node {node} (pivot {pivot:e})"
    )]
    NotPositiveDefinite { dof: usize, node: usize, pivot: f64 },
    #[error("linear solver failed: {0}")]
    LinSolve(#[from] LinSolveError),
}

/// Nodal degrees of freedom: `(ux, uy, phi)` per node, stored flat.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DofVector {
    pub data: Vec<f64>,
}

impl DofVector {
    pub fn zeros(n_nodes: usize) -> Self {
        DofVector {
            data: vec![0.0; 3 * n_nodes],
        }
    }

    pub fn n_nodes(&self) -> usize {
        self.data.len() / 3
    }

    pub fn u(&self, node: usize) -> Vec2 {
        Vec2::new(self.data[3 * node], self.data[3 * node + 1])
    }

    pub fn phi(&self, node: usize) -> f64 {
        self.data[3 * node + 2]
    }

    pub fn set_u(&mut self, node: usize, u: Vec2) {
        self.data[3 * node] = u.x;
        self.data[3 * node + 1] = u.y;
    }

    pub fn set_phi(&mut self, node: usize, phi: f64) {
        self.data[3 * node + 2] = phi;
    }

    /// The uniform-strain (Voigt) field `u = eps.x`, `phi = 0`.
    pub fn voigt(load: &StrainLoad, nodes: &[Vec2]) -> Self {
        let mut d = DofVector::zeros(nodes.len());
        for (i, &x) in nodes.iter().enumerate() {
            d.set_u(i, load.apply(x));
        }
        d
    }
}

/// Macroscopic strain prescribed on the boundary, `eps` symmetric.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StrainLoad {
    pub xx: f64,
    pub yy: f64,
    pub xy: f64,
}

impl StrainLoad {
    pub fn axial(p: f64, q: f64) -> Self {
        StrainLoad {
            xx: p,
            yy: q,
            xy: 0.0,
        }
    }

    pub fn apply(&self, x: Vec2) -> Vec2 {
        Vec2::new(self.xx * x.x + self.xy * x.y, self.xy * x.x + self.yy * x.y)
    }
}

/// Kinematic and static state of one contact under a displacement field.
#[derive(Clone, Debug, Serialize)]
pub struct ContactState {
    /// Displacement jump of body `b` relative to body `a` at the centroid.
    pub delta: Vec2,
    pub e_n: f64,
    pub e_t: Vec2,
    pub s_n: f64,
    pub s_t: Vec2,
    /// Force transmitted through the face, `f = A (s_n n + s_t)`.
    pub f: Vec2,
}

/// Assembled linear system with prescribed degrees of freedom.
#[derive(Debug)]
pub struct SparseSystem {
    pub n_dofs: usize,
    pub matrix: CsrMatrix,
    pub prescribed: Vec<Option<f64>>,
}

/// Method used by [`solve`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SolveMethod {
    #[default]
    Cholesky,
    ConjugateGradient,
}

/// B-matrix mapping the six nodal dofs `(ua, phia, ub, phib)` to the
/// displacement jump at the face centroid:
/// `delta = ub + phib*perp(c - xb) - ua - phia*perp(c - xa)`.
fn jump_matrix(e: &ContactElement, nodes: &[Vec2]) -> [[f64; 6]; 2] {
    let ra = e.c - nodes[e.a];
    let rb = e.c - nodes[e.b];
    [
        [-1.0, 0.0, ra.y, 1.0, 0.0, -rb.y],
        [0.0, -1.0, -ra.x, 0.0, 1.0, rb.x],
    ]
}

/// Element stiffness `K_e = (E0 A / l) Bᵀ (n⊗n + α (1 − n⊗n)) B`:
/// symmetric positive semidefinite with the pair's rigid modes in its
/// nullspace.
pub fn element_stiffness(
    e: &ContactElement,
    params: &MaterialParams,
    nodes: &[Vec2],
) -> Result<[[f64; 6]; 6], SolverError> {
    let lmin_scale = 1e-9 * e.area.max(e.l);
    if e.l < lmin_scale.max(1e-300) {
        return Err(SolverError::ZeroLengthContact {
            a: e.a,
            b: e.b,
            l: e.l,
        });
    }
    let b = jump_matrix(e, nodes);
    let (nx, ny) = (e.n.x, e.n.y);
    let alpha = params.alpha;
    // M = n⊗n + α (1 − n⊗n)
    let m = [
        [nx * nx + alpha * (1.0 - nx * nx), nx * ny * (1.0 - alpha)],
        [nx * ny * (1.0 - alpha), ny * ny + alpha * (1.0 - ny * ny)],
    ];
    let w = params.e0 * e.area / e.l;
    let mut k = [[0.0; 6]; 6];
    for i in 0..6 {
        for j in 0..6 {
            let mut s = 0.0;
            for p in 0..2 {
                for q in 0..2 {
                    s += b[p][i] * m[p][q] * b[q][j];
                }
            }
            k[i][j] = w * s;
        }
    }
    Ok(k)
}

fn element_dofs(e: &ContactElement) -> [usize; 6] {
    [
        3 * e.a,
        3 * e.a + 1,
        3 * e.a + 2,
        3 * e.b,
        3 * e.b + 1,
        3 * e.b + 2,
    ]
}

/// Assemble the global stiffness matrix. Bodies without a single contact
/// element are reported as detached.
pub fn assemble(
    t: &Tessellation,
    elements: &[ContactElement],
    params: &MaterialParams,
) -> Result<SparseSystem, SolverError> {
    let n_nodes = t.nodes.len();
    let mut touched = vec![false; n_nodes];
    let mut triplets: Vec<(u32, u32, f64)> = Vec::with_capacity(36 * elements.len());
    for e in elements {
        touched[e.a] = true;
        touched[e.b] = true;
        let k = element_stiffness(e, params, &t.nodes)?;
        let dofs = element_dofs(e);
        for i in 0..6 {
            for j in 0..6 {
                if k[i][j] != 0.0 {
                    triplets.push((dofs[i] as u32, dofs[j] as u32, k[i][j]));
                }
            }
        }
    }
    let orphans: Vec<usize> = (0..n_nodes).filter(|&i| !touched[i]).collect();
    if !orphans.is_empty() {
        return Err(SolverError::DetachedBodies(orphans));
    }
    let matrix = CsrMatrix::from_triplets(3 * n_nodes, &mut triplets);
    Ok(SparseSystem {
        n_dofs: 3 * n_nodes,
        matrix,
        prescribed: vec![None; 3 * n_nodes],
    })
}

/// Prescribe `u = eps·x`, `phi = 0` on the given boundary nodes.
pub fn apply_strain_bc(
    sys: &mut SparseSystem,
    load: &StrainLoad,
    boundary_nodes: &[usize],
    nodes: &[Vec2],
) {
    for &i in boundary_nodes {
        let u = load.apply(nodes[i]);
        sys.prescribed[3 * i] = Some(u.x);
        sys.prescribed[3 * i + 1] = Some(u.y);
        sys.prescribed[3 * i + 2] = Some(0.0);
    }
}

/// Solve the constrained system by elimination: the reduced SPD system over
/// free dofs gets `rhs = -K_fc u_c`; prescribed values are merged back in.
pub fn solve(sys: &SparseSystem, method: SolveMethod) -> Result<DofVector, SolverError> {
    let n = sys.n_dofs;
    let free: Vec<usize> = (0..n).filter(|&i| sys.prescribed[i].is_none()).collect();
    let mut full = vec![0.0f64; n];
    for i in 0..n {
        if let Some(v) = sys.prescribed[i] {
            full[i] = v;
        }
    }
    if free.is_empty() {
        log::warn!("all degrees of freedom prescribed; nothing to solve");
        return Ok(DofVector { data: full });
    }
    let mut free_index = vec![usize::MAX; n];
    for (k, &i) in free.iter().enumerate() {
        free_index[i] = k;
    }

    let mut triplets: Vec<(u32, u32, f64)> = Vec::new();
    let mut rhs = vec![0.0f64; free.len()];
    for (k, &i) in free.iter().enumerate() {
        let (cols, vals) = sys.matrix.row(i);
        for (&j, &v) in cols.iter().zip(vals) {
            match sys.prescribed[j] {
                None => triplets.push((k as u32, free_index[j] as u32, v)),
                Some(uc) => rhs[k] -= v * uc,
            }
        }
    }
    let reduced = CsrMatrix::from_triplets(free.len(), &mut triplets);

    let x = match method {
        SolveMethod::Cholesky => match SkylineCholesky::factor(&reduced) {
            Ok(f) => f.solve(&rhs),
            Err(LinSolveError::NotPositiveDefinite { index, pivot }) => {
                let dof = free[index];
                return Err(SolverError::NotPositiveDefinite {
                    dof,
                    node: dof / 3,
                    pivot,
                });
            }
            Err(e) => return Err(e.into()),
        },
        SolveMethod::ConjugateGradient => conjugate_gradient(&reduced, &rhs, 1e-10)?,
    };
    for (k, &i) in free.iter().enumerate() {
        full[i] = x[k];
    }
    Ok(DofVector { data: full })
}

/// Kinematics and force of one contact under the displacement field `d`.
pub fn contact_state(
    e: &ContactElement,
    d: &DofVector,
    params: &MaterialParams,
    nodes: &[Vec2],
) -> ContactState {
    let ra = e.c - nodes[e.a];
    let rb = e.c - nodes[e.b];
    let delta = d.u(e.b) + rb.perp() * d.phi(e.b) - d.u(e.a) - ra.perp() * d.phi(e.a);
    let e_n = e.n.dot(delta) / e.l;
    let e_t = delta * (1.0 / e.l) - e.n * e_n;
    let s_n = params.e0 * e_n;
    let s_t = e_t * (params.e0 * params.alpha);
    let f = (e.n * s_n + s_t) * e.area;
    ContactState {
        delta,
        e_n,
        e_t,
        s_n,
        s_t,
        f,
    }
}

/// Strain energy of the field: `sum (A l / 2)(E0 e_n² + E0 α |e_t|²)`.
pub fn strain_energy(
    elements: &[ContactElement],
    d: &DofVector,
    params: &MaterialParams,
    nodes: &[Vec2],
) -> f64 {
    elements
        .iter()
        .map(|e| {
            let s = contact_state(e, d, params, nodes);
            0.5 * e.area * e.l * params.e0 * (s.e_n * s.e_n + params.alpha * s.e_t.norm_squared())
        })
        .sum()
}

/// Worst force and moment imbalance over interior (non-boundary) nodes,
/// normalized by `E0·lmin` and `E0·lmin²` respectively. The moment is taken
/// about each body's governing node.
pub fn residual(
    t: &Tessellation,
    elements: &[ContactElement],
    d: &DofVector,
    params: &MaterialParams,
) -> (f64, f64) {
    let n = t.nodes.len();
    let mut force = vec![Vec2::ZERO; n];
    let mut moment = vec![0.0f64; n];
    for e in elements {
        let s = contact_state(e, d, params, &t.nodes);
        // the gradient of the element energy contributes -f at node a and
        // +f at node b
        force[e.a] += -1.0 * s.f;
        force[e.b] += s.f;
        let ra = e.c - t.nodes[e.a];
        let rb = e.c - t.nodes[e.b];
        moment[e.a] += -ra.cross(s.f);
        moment[e.b] += rb.cross(s.f);
    }
    let boundary: std::collections::HashSet<usize> = t.boundary_nodes().into_iter().collect();
    let mut worst_f = 0.0f64;
    let mut worst_m = 0.0f64;
    for i in 0..n {
        if boundary.contains(&i) {
            continue;
        }
        worst_f = worst_f.max(force[i].norm());
        worst_m = worst_m.max(moment[i].abs());
    }
    (
        worst_f / (params.e0 * t.lmin),
        worst_m / (params.e0 * t.lmin * t.lmin),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{extract_contacts, generate, DomainBox, TessellationKind};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_body_fixture() -> (Tessellation, Vec<ContactElement>) {
        // two unit squares side by side in a 2x1 box
        let domain = DomainBox::sized(2.0, 1.0).unwrap();
        let pts = vec![
            crate::vec2::Vec2::new(0.5, 0.5),
            crate::vec2::Vec2::new(1.5, 0.5),
        ];
        // hand-built tessellation (voronoi_tessellate requires >= 3 points)
        let vertices = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(2.0, 0.0),
            Vec2::new(2.0, 1.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
        ];
        let bodies = vec![
            crate::geometry::Body {
                node_id: 0,
                shape: crate::geometry::BodyShape::Polygon {
                    polygon: vec![0, 1, 4, 5],
                },
            },
            crate::geometry::Body {
                node_id: 1,
                shape: crate::geometry::BodyShape::Polygon {
                    polygon: vec![1, 2, 3, 4],
                },
            },
        ];
        let mut t = Tessellation {
            version: 1,
            dim: 2,
            domain,
            seed: 0,
            kind: TessellationKind::Voronoi,
            lmin: 1.0,
            nodes: pts,
            vertices,
            bodies,
            contacts: Vec::new(),
        };
        t.contacts = extract_contacts(&t).unwrap();
        let els = t.contacts.clone();
        (t, els)
    }

    fn random_dof(n: usize, rng: &mut impl Rng) -> DofVector {
        DofVector {
            data: (0..3 * n).map(|_| rng.random_range(-1.0..1.0)).collect(),
        }
    }

    #[test]
    fn rigid_motion_is_in_the_nullspace() {
        let (t, els) = two_body_fixture();
        let params = MaterialParams::new(2.0, 0.7).unwrap();
        let k = element_stiffness(&els[0], &params, &t.nodes).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let kn: f64 = k.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
        for _ in 0..50 {
            // rigid translation + rotation about a random point
            let u0 = Vec2::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            let omega: f64 = rng.random_range(-1.0..1.0);
            let x0 = Vec2::new(rng.random_range(-1.0..2.0), rng.random_range(-1.0..2.0));
            let mut d = [0.0; 6];
            for (slot, node) in [(0, els[0].a), (1, els[0].b)] {
                let u = u0 + (t.nodes[node] - x0).perp() * omega;
                d[3 * slot] = u.x;
                d[3 * slot + 1] = u.y;
                d[3 * slot + 2] = omega;
            }
            for i in 0..6 {
                let r: f64 = (0..6).map(|j| k[i][j] * d[j]).sum();
                assert!(r.abs() < 1e-10 * kn, "rigid mode leaks force {r}");
            }
        }
    }

    #[test]
    fn element_energy_identity() {
        let (t, els) = two_body_fixture();
        let params = MaterialParams::new(3.0, 0.4).unwrap();
        let e = &els[0];
        let k = element_stiffness(e, &params, &t.nodes).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..100 {
            let d = random_dof(2, &mut rng);
            let local = [
                d.data[3 * e.a],
                d.data[3 * e.a + 1],
                d.data[3 * e.a + 2],
                d.data[3 * e.b],
                d.data[3 * e.b + 1],
                d.data[3 * e.b + 2],
            ];
            let mut quad = 0.0;
            for i in 0..6 {
                for j in 0..6 {
                    quad += local[i] * k[i][j] * local[j];
                }
            }
            let s = contact_state(e, &d, &params, &t.nodes);
            let energy =
                e.area * e.l * params.e0 * (s.e_n * s.e_n + params.alpha * s.e_t.norm_squared());
            assert!((0.5 * quad - 0.5 * energy).abs() < 1e-12 * (1.0 + energy.abs()));
        }
    }

    #[test]
    fn two_body_assembly_matches_single_element() {
        let (t, els) = two_body_fixture();
        let params = MaterialParams::new(1.0, 1.0).unwrap();
        let sys = assemble(&t, &els, &params).unwrap();
        let k = element_stiffness(&els[0], &params, &t.nodes).unwrap();
        let dofs = element_dofs(&els[0]);
        for i in 0..6 {
            for j in 0..6 {
                assert!((sys.matrix.get(dofs[i], dofs[j]) - k[i][j]).abs() < 1e-14);
            }
        }
        assert!(sys.matrix.asymmetry() < 1e-12);
    }

    #[test]
    fn detached_body_is_reported() {
        let (mut t, els) = two_body_fixture();
        t.nodes.push(Vec2::new(0.1, 0.1));
        t.bodies.push(crate::geometry::Body {
            node_id: 2,
            shape: crate::geometry::BodyShape::Polygon { polygon: vec![] },
        });
        let params = MaterialParams::new(1.0, 1.0).unwrap();
        match assemble(&t, &els, &params) {
            Err(SolverError::DetachedBodies(list)) => assert_eq!(list, vec![2]),
            Err(other) => panic!("expected detached-body error, got {other:?}"),
            Ok(_) => panic!("expected detached-body error"),
        }
    }

    #[test]
    fn zero_strain_gives_zero_solution() {
        let domain = DomainBox::sized(10.0, 10.0).unwrap();
        let t = generate(TessellationKind::Voronoi, domain, 1.0, 3, 2000).unwrap();
        let params = MaterialParams::new(1.0, 0.8).unwrap();
        let mut sys = assemble(&t, &t.contacts, &params).unwrap();
        apply_strain_bc(
            &mut sys,
            &StrainLoad::axial(0.0, 0.0),
            &t.boundary_nodes(),
            &t.nodes,
        );
        let d = solve(&sys, SolveMethod::Cholesky).unwrap();
        assert!(d.data.iter().all(|&v| v.abs() < 1e-14));
    }

    /// Voronoi tessellation with equal normal and tangential stiffness:
    /// the uniform-strain field solves the system exactly.
    #[test]
    fn voronoi_alpha_one_reproduces_uniform_strain() {
        let domain = DomainBox::sized(12.0, 12.0).unwrap();
        let t = generate(TessellationKind::Voronoi, domain, 1.0, 8, 2000).unwrap();
        let params = MaterialParams::new(1.0, 1.0).unwrap();
        let load = StrainLoad::axial(1e-3, 0.0);
        let mut sys = assemble(&t, &t.contacts, &params).unwrap();
        apply_strain_bc(&mut sys, &load, &t.boundary_nodes(), &t.nodes);
        let d = solve(&sys, SolveMethod::Cholesky).unwrap();
        let expect = DofVector::voigt(&load, &t.nodes);
        let scale = 1e-3 * 12.0;
        let worst = d
            .data
            .iter()
            .zip(&expect.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(
            worst < 1e-9 * scale,
            "deviation from uniform strain {worst:e}"
        );
        let (rf, rm) = residual(&t, &t.contacts, &d, &params);
        assert!(rf < 1e-9 && rm < 1e-9, "residuals {rf:e} {rm:e}");
    }

    #[test]
    fn voigt_field_violates_equilibrium_off_voronoi() {
        let domain = DomainBox::sized(12.0, 12.0).unwrap();
        let t = generate(TessellationKind::Random, domain, 1.0, 8, 2000).unwrap();
        let params = MaterialParams::new(1.0, 0.5).unwrap();
        let load = StrainLoad::axial(1e-3, 0.0);
        let voigt = DofVector::voigt(&load, &t.nodes);
        let (rf, _) = residual(&t, &t.contacts, &voigt, &params);
        assert!(
            rf > 1e-7,
            "uniform strain should be out of equilibrium, rf {rf:e}"
        );
    }

    #[test]
    fn cg_and_cholesky_agree() {
        let domain = DomainBox::sized(20.0, 20.0).unwrap();
        let t = generate(TessellationKind::RandomizedVoronoi, domain, 1.0, 4, 2000).unwrap();
        let params = MaterialParams::new(1.0, 0.5).unwrap();
        let load = StrainLoad::axial(1e-3, 0.0);
        let mut sys = assemble(&t, &t.contacts, &params).unwrap();
        apply_strain_bc(&mut sys, &load, &t.boundary_nodes(), &t.nodes);
        let d1 = solve(&sys, SolveMethod::Cholesky).unwrap();
        let d2 = solve(&sys, SolveMethod::ConjugateGradient).unwrap();
        let scale = d1.data.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let diff = d1
            .data
            .iter()
            .zip(&d2.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(diff < 1e-8 * scale.max(1e-12), "cg vs cholesky {diff:e}");
    }

    #[test]
    fn energy_identity_on_structure() {
        let domain = DomainBox::sized(10.0, 10.0).unwrap();
        let t = generate(TessellationKind::CenteredRandom, domain, 1.0, 6, 2000).unwrap();
        let params = MaterialParams::new(2.0, 0.3).unwrap();
        let sys = assemble(&t, &t.contacts, &params).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let d = random_dof(t.nodes.len(), &mut rng);
            let mut kd = vec![0.0; sys.n_dofs];
            sys.matrix.matvec(&d.data, &mut kd);
            let quad: f64 = 0.5 * d.data.iter().zip(&kd).map(|(a, b)| a * b).sum::<f64>();
            let energy = strain_energy(&t.contacts, &d, &params, &t.nodes);
            assert!(
                (quad - energy).abs() < 1e-10 * energy.abs().max(1.0),
                "quadratic form {quad} vs element energy {energy}"
            );
        }
    }

    #[test]
    fn scaling_e0_scales_forces_not_displacements() {
        let domain = DomainBox::sized(10.0, 10.0).unwrap();
        let t = generate(TessellationKind::RandomizedVoronoi, domain, 1.0, 12, 2000).unwrap();
        let load = StrainLoad::axial(1e-3, 0.0);
        let solve_with = |e0: f64| {
            let params = MaterialParams::new(e0, 0.5).unwrap();
            let mut sys = assemble(&t, &t.contacts, &params).unwrap();
            apply_strain_bc(&mut sys, &load, &t.boundary_nodes(), &t.nodes);
            let d = solve(&sys, SolveMethod::Cholesky).unwrap();
            let f = contact_state(&t.contacts[0], &d, &params, &t.nodes).f;
            (d, f)
        };
        let (d1, f1) = solve_with(1.0);
        let (d2, f2) = solve_with(7.5);
        let diff = d1
            .data
            .iter()
            .zip(&d2.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0f64, f64::max);
        assert!(diff < 1e-12, "displacements must be stiffness-independent");
        assert!((f2.x - 7.5 * f1.x).abs() < 1e-12 * f1.norm().max(1e-12));
        assert!((f2.y - 7.5 * f1.y).abs() < 1e-12 * f1.norm().max(1e-12));
    }

    #[test]
    fn pure_rigid_motion_has_zero_contact_state() {
        let (t, els) = two_body_fixture();
        let params = MaterialParams::new(1.0, 0.9).unwrap();
        let mut d = DofVector::zeros(2);
        let omega = 0.3;
        let x0 = Vec2::new(0.7, 0.2);
        for i in 0..2 {
            d.set_u(i, Vec2::new(0.2, -0.4) + (t.nodes[i] - x0).perp() * omega);
            d.set_phi(i, omega);
        }
        let s = contact_state(&els[0], &d, &params, &t.nodes);
        assert!(s.delta.norm() < 1e-14);
        assert!(s.f.norm() < 1e-14);
    }

    #[test]
    fn alpha_zero_gives_normal_force_only() {
        let (t, els) = two_body_fixture();
        let params = MaterialParams::new(1.0, 0.0).unwrap();
        let mut d = DofVector::zeros(2);
        d.set_u(1, Vec2::new(0.01, 0.02));
        let s = contact_state(&els[0], &d, &params, &t.nodes);
        assert_eq!(s.s_t, Vec2::ZERO);
        let cross = s.f.cross(els[0].n);
        assert!(cross.abs() < 1e-15, "force must align with the normal");
        assert!(s.e_t.dot(els[0].n).abs() < 1e-15);
    }
}


#[cfg(test)]
mod voigt_kinematics_tests {
    use super::*;
    use crate::geometry::{generate, DomainBox, TessellationKind};
    use crate::theory::MaterialParams;

    /// Under the uniform-strain field the facet strains reduce to the
    /// closed expressions `e_N = n·eps·t` and `e_T = eps·t − e_N n` on
    /// every element, for any tessellation kind.
    #[test]
    fn voigt_field_facet_strains() {
        let domain = DomainBox::sized(12.0, 12.0).unwrap();
        let params = MaterialParams::new(1.0, 0.7).unwrap();
        let load = StrainLoad {
            xx: 8e-4,
            yy: -3e-4,
            xy: 2e-4,
        };
        for kind in [
            TessellationKind::Voronoi,
            TessellationKind::RandomizedVoronoi,
            TessellationKind::Random,
            TessellationKind::CenteredRandom,
        ] {
            let t = generate(kind, domain, 1.0, 4, 5000).unwrap();
            let d = DofVector::voigt(&load, &t.nodes);
            for e in &t.contacts {
                let s = contact_state(e, &d, &params, &t.nodes);
                let eps_t = load.apply(e.t);
                let e_n = e.n.dot(eps_t);
                let e_t = eps_t - e.n * e_n;
                assert!((s.e_n - e_n).abs() < 1e-12, "{kind:?}");
                assert!((s.e_t - e_t).norm() < 1e-12, "{kind:?}");
            }
        }
    }

    #[test]
    fn strain_bc_constrains_three_dofs_per_boundary_node() {
        let domain = DomainBox::sized(10.0, 10.0).unwrap();
        let t = generate(TessellationKind::Voronoi, domain, 1.0, 6, 5000).unwrap();
        let params = MaterialParams::new(1.0, 1.0).unwrap();
        let mut sys = assemble(&t, &t.contacts, &params).unwrap();
        let boundary = t.boundary_nodes();
        apply_strain_bc(&mut sys, &StrainLoad::axial(1e-3, 0.0), &boundary, &t.nodes);
        let constrained = sys.prescribed.iter().filter(|p| p.is_some()).count();
        assert_eq!(constrained, 3 * boundary.len());
    }
}
