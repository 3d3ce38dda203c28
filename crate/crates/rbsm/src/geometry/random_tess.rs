//! Random tessellation: Delaunay triangles of a fine auxiliary point set
//! flood-assigned to coarse basic nodes, plus the node-centering variant.

use super::delaunay::{orient2d, triangulate};
use super::grid::UniformGrid;
use super::{
    extract_contacts, place_points, Body, BodyShape, DomainBox, GeometryError, Tessellation,
    TessellationKind, TESSELLATION_FORMAT_VERSION,
};
use crate::rng::subseed;
use crate::vec2::Vec2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Auxiliary vertex set: the four box corners, sequential points along each
/// side, and sequential interior points, all with minimum spacing `d`.
/// Corner and side seeding closes the triangulation hull onto the box so the
/// triangles cover the whole domain.
fn auxiliary_vertices(
    domain: &DomainBox,
    d: f64,
    seed: u64,
    max_trials: usize,
) -> Result<Vec<Vec2>, GeometryError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = UniformGrid::new(d);
    let mut pts = Vec::new();
    let push = |grid: &mut UniformGrid, pts: &mut Vec<Vec2>, p: Vec2| {
        grid.insert(p);
        pts.push(p);
    };
    for c in domain.corners() {
        push(&mut grid, &mut pts, c);
    }
    let corners = domain.corners();
    for side in 0..4 {
        let a = corners[side];
        let b = corners[(side + 1) % 4];
        let mut rejections = 0;
        while rejections < max_trials {
            let u: f64 = rng.random();
            let p = a + (b - a) * u;
            if grid.any_within(p, d) {
                rejections += 1;
            } else {
                push(&mut grid, &mut pts, p);
                rejections = 0;
            }
        }
    }
    let mut rejections = 0;
    while rejections < max_trials {
        let p = Vec2::new(
            domain.min.x + rng.random::<f64>() * domain.width(),
            domain.min.y + rng.random::<f64>() * domain.height(),
        );
        if grid.any_within(p, d) {
            rejections += 1;
        } else {
            push(&mut grid, &mut pts, p);
            rejections = 0;
        }
    }
    Ok(pts)
}

fn point_in_triangle(vertices: &[Vec2], tri: &[usize; 3], p: Vec2) -> bool {
    for k in 0..3 {
        if orient2d(vertices[tri[k]], vertices[tri[(k + 1) % 3]], p) < 0.0 {
            return false;
        }
    }
    true
}

/// Termination of the sequential point processes inside
/// [`random_tessellate`]: placement stops after this many consecutive
/// rejections. The published contact-angle statistics of the random and
/// centered tessellations are only reproduced at this moderate saturation;
/// running the processes to full saturation (as the clipped Voronoi family
/// does) narrows the angle distribution noticeably.
pub const RANDOM_TESSELLATION_TRIALS: usize = 100;

/// Generate the random tessellation: basic nodes with spacing `l_min`,
/// auxiliary vertices with spacing `l_min / 2`, Delaunay triangulation of
/// the vertices, triangles containing a basic node assigned to it directly,
/// the rest assigned by deterministic flood sweeps over ascending triangle
/// ids until a fixpoint.
pub fn random_tessellate(
    domain: &DomainBox,
    l_min: f64,
    seed: u64,
) -> Result<Tessellation, GeometryError> {
    let max_trials = RANDOM_TESSELLATION_TRIALS;
    let nodes = place_points(domain, l_min, subseed(seed, 0), max_trials)?;
    if nodes.len() < 3 {
        return Err(GeometryError::TooFewPoints {
            need: 3,
            got: nodes.len(),
        });
    }
    let vertices = auxiliary_vertices(domain, l_min / 2.0, subseed(seed, 1), max_trials)?;
    let delaunay = triangulate(&vertices)?;
    let triangles = delaunay.triangles;

    // Bucket triangles by the grid cells their bounding box touches.
    let cell = l_min;
    let mut buckets: std::collections::HashMap<(i64, i64), Vec<usize>> =
        std::collections::HashMap::new();
    for (ti, tri) in triangles.iter().enumerate() {
        let xs = tri.map(|v| vertices[v].x);
        let ys = tri.map(|v| vertices[v].y);
        let lo = (
            (xs.iter().cloned().fold(f64::INFINITY, f64::min) / cell).floor() as i64,
            (ys.iter().cloned().fold(f64::INFINITY, f64::min) / cell).floor() as i64,
        );
        let hi = (
            (xs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / cell).floor() as i64,
            (ys.iter().cloned().fold(f64::NEG_INFINITY, f64::max) / cell).floor() as i64,
        );
        for gx in lo.0..=hi.0 {
            for gy in lo.1..=hi.1 {
                buckets.entry((gx, gy)).or_default().push(ti);
            }
        }
    }

    // Seed assignment: lowest triangle id containing each node wins, which
    // also settles nodes sitting exactly on a shared edge.
    let mut owner: Vec<Option<usize>> = vec![None; triangles.len()];
    let mut pending: Vec<(usize, usize)> = Vec::new(); // (node, containing tri)
    for (ni, p) in nodes.iter().enumerate() {
        let key = ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64);
        let mut candidates: Vec<usize> = Vec::new();
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(b) = buckets.get(&(key.0 + dx, key.1 + dy)) {
                    candidates.extend_from_slice(b);
                }
            }
        }
        candidates.sort_unstable();
        candidates.dedup();
        let Some(&tri) = candidates
            .iter()
            .find(|&&ti| point_in_triangle(&vertices, &triangles[ti], *p))
        else {
            return Err(GeometryError::Topology(format!(
                "basic node {ni} not contained in any triangle"
            )));
        };
        if owner[tri].is_none() {
            owner[tri] = Some(ni);
        } else {
            pending.push((ni, tri));
        }
    }

    // Edge adjacency between triangles.
    let mut edge_map: std::collections::HashMap<(usize, usize), Vec<usize>> =
        std::collections::HashMap::new();
    for (ti, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (u, v) = (tri[k], tri[(k + 1) % 3]);
            edge_map.entry((u.min(v), u.max(v))).or_default().push(ti);
        }
    }
    let mut adjacency: Vec<Vec<usize>> = vec![Vec::new(); triangles.len()];
    for tris in edge_map.values() {
        if tris.len() == 2 {
            adjacency[tris[0]].push(tris[1]);
            adjacency[tris[1]].push(tris[0]);
        }
    }
    for adj in &mut adjacency {
        adj.sort_unstable();
    }

    // Nodes whose containing triangle was claimed first by another node grab
    // the lowest-id unassigned neighbor of that triangle.
    for (ni, tri) in pending {
        log::warn!("basic node {ni} shares a triangle with an earlier node");
        let Some(&free) = adjacency[tri].iter().find(|&&t| owner[t].is_none()) else {
            return Err(GeometryError::Topology(format!(
                "no free triangle near contested node {ni}"
            )));
        };
        owner[free] = Some(ni);
    }

    // Flood sweeps in ascending triangle id until fixpoint. Each sweep only
    // consults the assignment state from before the sweep, so bodies grow in
    // rings around their seed triangles instead of along id-ordered chains.
    loop {
        let snapshot = owner.clone();
        let mut changed = false;
        for ti in 0..triangles.len() {
            if owner[ti].is_some() {
                continue;
            }
            if let Some(&src) = adjacency[ti].iter().find(|&&t| snapshot[t].is_some()) {
                owner[ti] = snapshot[src];
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }

    // Isolated islands (unreachable through shared edges) fall back to the
    // nearest basic node by centroid distance.
    let mut islands = 0usize;
    for ti in 0..triangles.len() {
        if owner[ti].is_none() {
            islands += 1;
            let c = (vertices[triangles[ti][0]]
                + vertices[triangles[ti][1]]
                + vertices[triangles[ti][2]])
                * (1.0 / 3.0);
            let nearest = nodes
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| {
                    (**a - c)
                        .norm_squared()
                        .partial_cmp(&(**b - c).norm_squared())
                        .unwrap()
                })
                .map(|(i, _)| i)
                .unwrap();
            owner[ti] = Some(nearest);
        }
    }
    if islands > 0 {
        log::warn!("{islands} isolated triangles assigned to nearest basic node");
    }

    let mut body_triangles: Vec<Vec<[usize; 3]>> = vec![Vec::new(); nodes.len()];
    for (ti, tri) in triangles.iter().enumerate() {
        body_triangles[owner[ti].unwrap()].push(*tri);
    }
    if let Some(empty) = body_triangles.iter().position(|b| b.is_empty()) {
        return Err(GeometryError::Topology(format!(
            "basic node {empty} received no triangles"
        )));
    }

    let bodies = body_triangles
        .into_iter()
        .enumerate()
        .map(|(i, triangles)| Body {
            node_id: i,
            shape: BodyShape::Triangles { triangles },
        })
        .collect();

    let mut t = Tessellation {
        version: TESSELLATION_FORMAT_VERSION,
        dim: 2,
        domain: *domain,
        seed,
        kind: TessellationKind::Random,
        lmin: l_min,
        nodes,
        vertices,
        bodies,
        contacts: Vec::new(),
    };
    t.contacts = extract_contacts(&t)?;
    let outside = super::checks::nodes_outside_body(&t).len();
    if outside > 0 {
        log::info!(
            "{outside} of {} governing nodes lie outside their own body",
            t.nodes.len()
        );
    }
    Ok(t)
}

/// Move every governing node into its body centroid. Body shapes, face
/// areas, normals and centroids stay identical; contact vectors, lengths
/// and angles are recomputed.
pub fn center_nodes(t: &Tessellation) -> Result<Tessellation, GeometryError> {
    if t.kind != TessellationKind::Random {
        return Err(GeometryError::WrongKind {
            expected: TessellationKind::Random,
            got: t.kind,
        });
    }
    let mut out = t.clone();
    out.kind = TessellationKind::CenteredRandom;
    for i in 0..out.nodes.len() {
        out.nodes[i] = out.body_centroid(i);
    }
    out.contacts = extract_contacts(&out)?;
    Ok(out)
}
