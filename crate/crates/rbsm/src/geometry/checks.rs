//! Geometric validity checks used by tests and diagnostics.

use super::{Body, BodyShape, Tessellation};
use crate::vec2::Vec2;

/// Convexity of a counterclockwise polygon (allows collinear vertices).
pub fn polygon_is_convex(vertices: &[Vec2], loop_ids: &[usize]) -> bool {
    let n = loop_ids.len();
    if n < 3 {
        return false;
    }
    for i in 0..n {
        let a = vertices[loop_ids[i]];
        let b = vertices[loop_ids[(i + 1) % n]];
        let c = vertices[loop_ids[(i + 2) % n]];
        let cross = (b - a).cross(c - b);
        let scale = (b - a).norm() * (c - b).norm();
        if cross < -1e-12 * scale.max(1e-300) {
            return false;
        }
    }
    true
}

pub fn point_in_convex_polygon(vertices: &[Vec2], loop_ids: &[usize], p: Vec2, tol: f64) -> bool {
    let n = loop_ids.len();
    for i in 0..n {
        let a = vertices[loop_ids[i]];
        let b = vertices[loop_ids[(i + 1) % n]];
        if (b - a).cross(p - a) < -tol * (b - a).norm().max(1e-300) {
            return false;
        }
    }
    true
}

fn body_loops(body: &Body) -> Vec<Vec<usize>> {
    match &body.shape {
        BodyShape::Polygon { polygon } => vec![polygon.clone()],
        BodyShape::Triangles { triangles } => triangles.iter().map(|t| t.to_vec()).collect(),
    }
}

fn bbox(vertices: &[Vec2], ids: &[usize]) -> (Vec2, Vec2) {
    let mut lo = Vec2::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Vec2::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    for &v in ids {
        lo.x = lo.x.min(vertices[v].x);
        lo.y = lo.y.min(vertices[v].y);
        hi.x = hi.x.max(vertices[v].x);
        hi.y = hi.y.max(vertices[v].y);
    }
    (lo, hi)
}

fn segments_properly_intersect(a: Vec2, b: Vec2, c: Vec2, d: Vec2, tol: f64) -> bool {
    let d1 = (b - a).cross(c - a);
    let d2 = (b - a).cross(d - a);
    let d3 = (d - c).cross(a - c);
    let d4 = (d - c).cross(b - c);
    let s = (b - a).norm() * (d - c).norm();
    let eps = tol * s.max(1e-300);
    d1 * d2 < -eps * eps && d3 * d4 < -eps * eps
}

fn point_strictly_inside_loop(vertices: &[Vec2], loop_ids: &[usize], p: Vec2, tol: f64) -> bool {
    // winding by ray casting; points within tol of an edge do not count
    let n = loop_ids.len();
    let mut crossings = 0;
    for i in 0..n {
        let a = vertices[loop_ids[i]];
        let b = vertices[loop_ids[(i + 1) % n]];
        // distance to edge
        let ab = b - a;
        let t = ((p - a).dot(ab) / ab.norm_squared()).clamp(0.0, 1.0);
        if (a + ab * t - p).norm() <= tol {
            return false;
        }
        if (a.y <= p.y) != (b.y <= p.y) {
            let x = a.x + (p.y - a.y) / (b.y - a.y) * (b.x - a.x);
            if x > p.x {
                crossings += 1;
            }
        }
    }
    crossings % 2 == 1
}

/// Pairs of bodies whose interiors overlap. Candidates are restricted to
/// bounding-box intersections; the verdict uses edge-crossing and
/// vertex-containment tests with relative tolerance `tol`.
pub fn find_overlapping_bodies(t: &Tessellation, tol: f64) -> Vec<(usize, usize)> {
    let loops: Vec<Vec<Vec<usize>>> = t.bodies.iter().map(body_loops).collect();
    let boxes: Vec<Vec<(Vec2, Vec2)>> = loops
        .iter()
        .map(|ls| ls.iter().map(|l| bbox(&t.vertices, l)).collect())
        .collect();
    let scale = t.lmin;
    let mut bad = Vec::new();
    for i in 0..t.bodies.len() {
        for j in (i + 1)..t.bodies.len() {
            let mut overlap = false;
            'outer: for (li, bi) in loops[i].iter().zip(&boxes[i]) {
                for (lj, bj) in loops[j].iter().zip(&boxes[j]) {
                    if bi.0.x > bj.1.x || bj.0.x > bi.1.x || bi.0.y > bj.1.y || bj.0.y > bi.1.y {
                        continue;
                    }
                    if loops_overlap(&t.vertices, li, lj, tol * scale) {
                        overlap = true;
                        break 'outer;
                    }
                }
            }
            if overlap {
                bad.push((i, j));
            }
        }
    }
    bad
}

fn loops_overlap(vertices: &[Vec2], a: &[usize], b: &[usize], tol: f64) -> bool {
    let na = a.len();
    let nb = b.len();
    for i in 0..na {
        let p = vertices[a[i]];
        let q = vertices[a[(i + 1) % na]];
        for j in 0..nb {
            let r = vertices[b[j]];
            let s = vertices[b[(j + 1) % nb]];
            if segments_properly_intersect(p, q, r, s, tol) {
                return true;
            }
        }
    }
    // containment without proper crossings: vertices of one loop strictly
    // inside the other, or edge midpoints for the collinear-boundary case
    // (two rectangles overlapping in a strip touch only along edges)
    for &v in a {
        if point_strictly_inside_loop(vertices, b, vertices[v], tol) {
            return true;
        }
    }
    for &v in b {
        if point_strictly_inside_loop(vertices, a, vertices[v], tol) {
            return true;
        }
    }
    for i in 0..na {
        let mid = (vertices[a[i]] + vertices[a[(i + 1) % na]]) * 0.5;
        if point_strictly_inside_loop(vertices, b, mid, tol) {
            return true;
        }
    }
    for j in 0..nb {
        let mid = (vertices[b[j]] + vertices[b[(j + 1) % nb]]) * 0.5;
        if point_strictly_inside_loop(vertices, a, mid, tol) {
            return true;
        }
    }
    false
}

/// Governing nodes lying outside their own body (possible for the random
/// tessellation with strongly non-convex bodies).
pub fn nodes_outside_body(t: &Tessellation) -> Vec<usize> {
    let tol = 1e-9 * t.lmin;
    let mut out = Vec::new();
    for (i, body) in t.bodies.iter().enumerate() {
        let inside = match &body.shape {
            BodyShape::Polygon { polygon } => {
                point_in_convex_polygon(&t.vertices, polygon, t.nodes[i], tol)
                    || point_strictly_inside_loop(&t.vertices, polygon, t.nodes[i], tol)
            }
            BodyShape::Triangles { triangles } => triangles
                .iter()
                .any(|tr| point_in_convex_polygon(&t.vertices, tr.as_slice(), t.nodes[i], tol)),
        };
        if !inside {
            out.push(i);
        }
    }
    out
}
