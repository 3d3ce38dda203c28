//! Contact-element extraction from a tessellation.
//!
//! A contact element is a maximal straight run of face edges shared by two
//! bodies. For the Voronoi families every shared face is a single edge; for
//! the random tessellation two bodies typically share several faces, one
//! per shared triangle edge (adjacent collinear edges are merged).

use super::{Body, BodyShape, ContactElement, GeometryError, Tessellation};
use crate::vec2::Vec2;
use std::collections::HashMap;

/// Directed occurrence of a boundary edge inside one body.
#[derive(Clone, Copy, Debug)]
struct EdgeUse {
    body: usize,
    /// Edge endpoints in the body's counterclockwise traversal order.
    from: usize,
    to: usize,
}

/// A face edge of `body` lying on the domain boundary, directed in body
/// traversal order.
#[derive(Clone, Copy, Debug)]
pub struct BoundaryFace {
    pub body: usize,
    pub from: usize,
    pub to: usize,
}

fn body_directed_edges(body: &Body, out: &mut Vec<(usize, usize)>) {
    out.clear();
    match &body.shape {
        BodyShape::Polygon { polygon } => {
            let n = polygon.len();
            for i in 0..n {
                out.push((polygon[i], polygon[(i + 1) % n]));
            }
        }
        BodyShape::Triangles { triangles } => {
            for t in triangles {
                out.push((t[0], t[1]));
                out.push((t[1], t[2]));
                out.push((t[2], t[0]));
            }
        }
    }
}

/// Collect every undirected edge together with its (at most two) body uses.
/// Edges interior to one triangle-union body cancel out.
fn shared_edge_map(
    t: &Tessellation,
) -> Result<HashMap<(usize, usize), Vec<EdgeUse>>, GeometryError> {
    let mut map: HashMap<(usize, usize), Vec<EdgeUse>> = HashMap::new();
    let mut edges = Vec::new();
    for (bi, body) in t.bodies.iter().enumerate() {
        body_directed_edges(body, &mut edges);
        for &(u, v) in &edges {
            let key = (u.min(v), u.max(v));
            map.entry(key).or_default().push(EdgeUse {
                body: bi,
                from: u,
                to: v,
            });
        }
    }
    // Drop edges used twice by the same body (internal triangle edges).
    map.retain(|_, uses| !(uses.len() == 2 && uses[0].body == uses[1].body));
    for (key, uses) in &map {
        if uses.len() > 2 {
            return Err(GeometryError::Topology(format!(
                "edge {key:?} is used by more than two bodies"
            )));
        }
    }
    Ok(map)
}

/// Face edges on the domain boundary (used one-sided by a single body).
pub fn boundary_faces(t: &Tessellation) -> Result<Vec<BoundaryFace>, GeometryError> {
    let map = shared_edge_map(t)?;
    let tol = 1e-9 * t.lmin;
    let mut out = Vec::new();
    for (key, uses) in &map {
        if uses.len() == 1 {
            let u = uses[0];
            if !(t.domain.on_boundary(t.vertices[u.from], tol)
                && t.domain.on_boundary(t.vertices[u.to], tol))
            {
                return Err(GeometryError::Topology(format!(
                    "single-sided edge {key:?} does not lie on the domain boundary"
                )));
            }
            out.push(BoundaryFace {
                body: u.body,
                from: u.from,
                to: u.to,
            });
        }
    }
    out.sort_by_key(|f| (f.body, f.from, f.to));
    Ok(out)
}

/// One shared straight edge between two bodies, directed as body `a`
/// traverses it.
#[derive(Clone, Copy, Debug)]
struct SharedEdge {
    from: usize,
    to: usize,
}

/// Extract contact elements. The normal points outward from body `a`
/// (`a < b` by node id); `t = (x_b - x_a)/l`; `chi` is the signed angle
/// from `n` to `t`. Domain-boundary faces produce no element; face edges
/// shorter than `1e-12 * lmin` are dropped with a warning.
pub fn extract_contacts(t: &Tessellation) -> Result<Vec<ContactElement>, GeometryError> {
    let map = shared_edge_map(t)?;
    let tol = 1e-9 * t.lmin;

    // Group shared edges per body pair, keyed deterministically.
    let mut pairs: HashMap<(usize, usize), Vec<SharedEdge>> = HashMap::new();
    let mut dropped = 0usize;
    for (key, uses) in &map {
        if uses.len() != 2 {
            continue;
        }
        let (u0, u1) = (uses[0], uses[1]);
        if u0.body == u1.body {
            continue;
        }
        let edge_len = (t.vertices[key.0] - t.vertices[key.1]).norm();
        if edge_len < 1e-12 * t.lmin {
            dropped += 1;
            continue;
        }
        let (a_use, _) = if u0.body < u1.body {
            (u0, u1)
        } else {
            (u1, u0)
        };
        pairs
            .entry((a_use.body, u0.body.max(u1.body)))
            .or_default()
            .push(SharedEdge {
                from: a_use.from,
                to: a_use.to,
            });
    }
    if dropped > 0 {
        log::warn!("dropped {dropped} zero-length face edges");
    }

    let mut pair_keys: Vec<(usize, usize)> = pairs.keys().copied().collect();
    pair_keys.sort_unstable();

    let mut elements = Vec::new();
    for (a, b) in pair_keys {
        let mut edges = pairs.remove(&(a, b)).unwrap();
        edges.sort_by_key(|e| (e.from, e.to));
        for run in merge_collinear_runs(&t.vertices, &mut edges) {
            let length: f64 = run
                .iter()
                .map(|e| (t.vertices[e.to] - t.vertices[e.from]).norm())
                .sum();
            let centroid = run
                .iter()
                .map(|e| {
                    let w = (t.vertices[e.to] - t.vertices[e.from]).norm();
                    (t.vertices[e.from] + t.vertices[e.to]) * (0.5 * w)
                })
                .fold(Vec2::ZERO, |acc, v| acc + v)
                * (1.0 / length);
            let dir = (t.vertices[run[0].to] - t.vertices[run[0].from]).normalized();
            // Outward normal of a counterclockwise boundary: clockwise perp.
            let n = Vec2::new(dir.y, -dir.x);
            let xa = t.nodes[a];
            let xb = t.nodes[b];
            let l = (xb - xa).norm();
            if l < tol {
                return Err(GeometryError::Topology(format!(
                    "nodes {a} and {b} coincide (l = {l:e})"
                )));
            }
            let tv = (xb - xa) * (1.0 / l);
            let chi = n.cross(tv).atan2(n.dot(tv));
            elements.push(ContactElement {
                a,
                b,
                face: (run[0].from, run.last().unwrap().to),
                area: length,
                l,
                n,
                t: tv,
                c: centroid,
                chi,
            });
        }
    }
    Ok(elements)
}

/// Partition a set of shared edges into maximal runs of connected,
/// collinear edges; each run becomes one contact element.
fn merge_collinear_runs(vertices: &[Vec2], edges: &mut Vec<SharedEdge>) -> Vec<Vec<SharedEdge>> {
    let n = edges.len();
    let mut assigned = vec![false; n];
    let mut runs = Vec::new();
    for start in 0..n {
        if assigned[start] {
            continue;
        }
        assigned[start] = true;
        let mut run = vec![edges[start]];
        // Greedily grow at both ends.
        loop {
            let mut grew = false;
            for j in 0..n {
                if assigned[j] {
                    continue;
                }
                let e = edges[j];
                let head = run[0];
                let tail = *run.last().unwrap();
                if e.from == tail.to && collinear(vertices, tail, e) {
                    run.push(e);
                    assigned[j] = true;
                    grew = true;
                } else if e.to == head.from && collinear(vertices, e, head) {
                    run.insert(0, e);
                    assigned[j] = true;
                    grew = true;
                }
            }
            if !grew {
                break;
            }
        }
        runs.push(run);
    }
    runs
}

fn collinear(vertices: &[Vec2], e1: SharedEdge, e2: SharedEdge) -> bool {
    let d1 = vertices[e1.to] - vertices[e1.from];
    let d2 = vertices[e2.to] - vertices[e2.from];
    d1.cross(d2).abs() <= 1e-9 * d1.norm() * d2.norm()
}

/// Volume closure of the element decomposition: the sum of element volumes
/// plus the fan areas of domain-boundary faces equals the domain area for a
/// gap-free tessellation. Returns `(sum of element volumes, boundary slack)`.
pub fn volume_closure(
    t: &Tessellation,
    elements: &[ContactElement],
) -> Result<(f64, f64), GeometryError> {
    let sum_elements: f64 = elements.iter().map(|e| e.volume()).sum();
    let mut slack = 0.0;
    for f in boundary_faces(t)? {
        let from = t.vertices[f.from];
        let to = t.vertices[f.to];
        let len = (to - from).norm();
        if len == 0.0 {
            continue;
        }
        let dir = (to - from) * (1.0 / len);
        let n = Vec2::new(dir.y, -dir.x);
        let c = (from + to) * 0.5;
        let h = n.dot(c - t.nodes[f.body]);
        slack += len * h / 2.0;
    }
    Ok((sum_elements, slack))
}
