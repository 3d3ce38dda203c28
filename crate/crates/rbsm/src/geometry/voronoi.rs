//! Clipped Voronoi tessellation via the Delaunay dual.
//!
//! Each cell is the domain box clipped against the bisector half-planes of
//! the nucleus' Delaunay neighbors (those half-planes define the Voronoi
//! cell exactly). Every constructed vertex is interned in a shared pool
//! under a canonical key (the circumcenter of a sorted point triple, a
//! (sorted pair, box side) cut, or a box corner) and its coordinates are
//! computed once by a canonical formula. Cells that share a vertex
//! therefore reference the *same* vertex object, which keeps the partition
//! closed under later vertex perturbations.

use super::delaunay::triangulate;
use super::{
    Body, BodyShape, ContactElement, DomainBox, GeometryError, Tessellation, TessellationKind,
    TESSELLATION_FORMAT_VERSION,
};
use crate::vec2::Vec2;
use std::collections::HashMap;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
enum VKey {
    Corner(u8),
    /// Bisector of a sorted nucleus pair cut by a box side.
    SideCut {
        pair: (u32, u32),
        side: u8,
    },
    /// Intersection of two bisectors: circumcenter of a sorted triple.
    Circum {
        tri: [u32; 3],
    },
}

/// Provenance of the line carrying a polygon edge.
#[derive(Clone, Copy, Debug)]
enum EdgeLine {
    /// Box side `s` (0 bottom, 1 right, 2 top, 3 left).
    Side(u8),
    /// Bisector between the cell nucleus and this other nucleus.
    Bisector(u32),
}

#[derive(Clone, Debug)]
struct ClipVertex {
    key: VKey,
    pos: Vec2,
    /// Line of the edge leaving this vertex.
    line: EdgeLine,
}

#[derive(Default)]
struct VertexPool {
    ids: HashMap<VKey, usize>,
    by_bits: HashMap<(u64, u64), usize>,
    coords: Vec<Vec2>,
}

impl VertexPool {
    fn intern(&mut self, key: VKey, pos: Vec2) -> usize {
        if let Some(&id) = self.ids.get(&key) {
            return id;
        }
        // Degenerate (cocircular) configurations can reach one geometric
        // point through different key triples; merge bit-identical
        // coordinates into a single shared vertex.
        let bits = (pos.x.to_bits(), pos.y.to_bits());
        if let Some(&id) = self.by_bits.get(&bits) {
            self.ids.insert(key, id);
            return id;
        }
        let id = self.coords.len();
        self.coords.push(pos);
        self.ids.insert(key, id);
        self.by_bits.insert(bits, id);
        id
    }
}

fn circumcenter(a: Vec2, b: Vec2, c: Vec2) -> Vec2 {
    let d = 2.0 * (a.x * (b.y - c.y) + b.x * (c.y - a.y) + c.x * (a.y - b.y));
    let na = a.norm_squared();
    let nb = b.norm_squared();
    let nc = c.norm_squared();
    Vec2::new(
        (na * (b.y - c.y) + nb * (c.y - a.y) + nc * (a.y - b.y)) / d,
        (na * (c.x - b.x) + nb * (a.x - c.x) + nc * (b.x - a.x)) / d,
    )
}

/// Intersection of the bisector of a sorted nucleus pair with a box side;
/// the fixed coordinate of the side is taken exactly.
fn bisector_side_point(pa: Vec2, pb: Vec2, side: u8, domain: &DomainBox) -> Vec2 {
    let m = (pa + pb) * 0.5;
    let dir = (pb - pa).perp();
    match side {
        0 | 2 => {
            let y = if side == 0 {
                domain.min.y
            } else {
                domain.max.y
            };
            let t = (y - m.y) / dir.y;
            Vec2::new(m.x + t * dir.x, y)
        }
        1 | 3 => {
            let x = if side == 1 {
                domain.max.x
            } else {
                domain.min.x
            };
            let t = (x - m.x) / dir.x;
            Vec2::new(x, m.y + t * dir.y)
        }
        _ => unreachable!(),
    }
}

fn sorted_pair(a: usize, b: usize) -> (u32, u32) {
    if a < b {
        (a as u32, b as u32)
    } else {
        (b as u32, a as u32)
    }
}

fn sorted_triple(a: usize, b: usize, c: usize) -> [u32; 3] {
    let mut t = [a as u32, b as u32, c as u32];
    t.sort_unstable();
    t
}

/// Vertex created where the bisector of `(cell, other)` cuts the line of an
/// existing polygon edge. Coordinates come from canonical inputs only, so
/// both cells sharing the new vertex compute bit-identical positions.
fn cut_vertex(
    points: &[Vec2],
    domain: &DomainBox,
    cell: usize,
    other: usize,
    line: EdgeLine,
) -> (VKey, Vec2) {
    match line {
        EdgeLine::Side(s) => {
            let pair = sorted_pair(cell, other);
            let pos =
                bisector_side_point(points[pair.0 as usize], points[pair.1 as usize], s, domain);
            (VKey::SideCut { pair, side: s }, pos)
        }
        EdgeLine::Bisector(r) => {
            let tri = sorted_triple(cell, other, r as usize);
            let pos = circumcenter(
                points[tri[0] as usize],
                points[tri[1] as usize],
                points[tri[2] as usize],
            );
            (VKey::Circum { tri }, pos)
        }
    }
}

/// Clip `poly` against the half-plane of points closer to `cell` than to
/// `other` (Sutherland-Hodgman step).
fn clip_by_bisector(
    poly: Vec<ClipVertex>,
    points: &[Vec2],
    domain: &DomainBox,
    cell: usize,
    other: usize,
) -> Vec<ClipVertex> {
    let m = (points[cell] + points[other]) * 0.5;
    let d = points[other] - points[cell];
    let inside = |v: Vec2| (v - m).dot(d) <= 0.0;

    let mut out = Vec::with_capacity(poly.len() + 2);
    let n = poly.len();
    for i in 0..n {
        let cur = &poly[i];
        let nxt = &poly[(i + 1) % n];
        let cur_in = inside(cur.pos);
        let nxt_in = inside(nxt.pos);
        if cur_in {
            out.push(cur.clone());
        }
        if cur_in != nxt_in {
            let (key, pos) = cut_vertex(points, domain, cell, other, cur.line);
            let line = if cur_in {
                EdgeLine::Bisector(other as u32)
            } else {
                cur.line
            };
            out.push(ClipVertex { key, pos, line });
        }
    }
    out
}

pub(crate) fn voronoi_cells(
    points: &[Vec2],
    domain: &DomainBox,
    neighbors: &[Vec<usize>],
) -> Result<(Vec<Vec2>, Vec<Vec<usize>>), GeometryError> {
    let corners = domain.corners();
    let mut pool = VertexPool::default();
    let mut cells = Vec::with_capacity(points.len());

    for (i, _) in points.iter().enumerate() {
        let mut poly: Vec<ClipVertex> = (0..4)
            .map(|k| ClipVertex {
                key: VKey::Corner(k as u8),
                pos: corners[k],
                line: EdgeLine::Side(k as u8),
            })
            .collect();
        for &q in &neighbors[i] {
            poly = clip_by_bisector(poly, points, domain, i, q);
            if poly.len() < 3 {
                return Err(GeometryError::Topology(format!(
                    "cell of nucleus {i} degenerated while clipping"
                )));
            }
        }
        let mut ids: Vec<usize> = poly.iter().map(|v| pool.intern(v.key, v.pos)).collect();
        ids.dedup();
        while ids.len() > 1 && ids.first() == ids.last() {
            ids.pop();
        }
        if ids.len() < 3 {
            return Err(GeometryError::Topology(format!(
                "cell of nucleus {i} collapsed to fewer than three vertices"
            )));
        }
        cells.push(ids);
    }
    Ok((pool.coords, cells))
}

/// Clipped Voronoi tessellation of `points` inside `domain`.
///
/// Cells are convex, contain their nucleus and partition the domain. The
/// returned tessellation has no contacts attached; use
/// [`super::extract_contacts`] or [`super::generate`].
pub fn voronoi_tessellate(
    points: &[Vec2],
    domain: &DomainBox,
) -> Result<Tessellation, GeometryError> {
    if points.len() < 3 {
        return Err(GeometryError::TooFewPoints {
            need: 3,
            got: points.len(),
        });
    }
    for (i, p) in points.iter().enumerate() {
        if !domain.contains(*p) {
            return Err(GeometryError::PointOutsideDomain { index: i });
        }
    }
    let delaunay = triangulate(points)?;
    let (vertices, cells) = voronoi_cells(points, domain, &delaunay.neighbors)?;
    let bodies = cells
        .into_iter()
        .enumerate()
        .map(|(i, polygon)| Body {
            node_id: i,
            shape: BodyShape::Polygon { polygon },
        })
        .collect();
    Ok(Tessellation {
        version: TESSELLATION_FORMAT_VERSION,
        dim: 2,
        domain: *domain,
        seed: 0,
        kind: TessellationKind::Voronoi,
        lmin: 1.0,
        nodes: points.to_vec(),
        vertices,
        bodies,
        contacts: Vec::<ContactElement>::new(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::checks;
    use crate::geometry::place_points;

    #[test]
    fn four_quadrant_nuclei_give_four_equal_squares() {
        let domain = DomainBox::sized(1.0, 1.0).unwrap();
        let pts = vec![
            Vec2::new(0.25, 0.25),
            Vec2::new(0.75, 0.25),
            Vec2::new(0.25, 0.75),
            Vec2::new(0.75, 0.75),
        ];
        let t = voronoi_tessellate(&pts, &domain).unwrap();
        for i in 0..4 {
            assert!((t.body_area(i) - 0.25).abs() < 1e-12);
            let c = t.body_centroid(i);
            assert!((c - pts[i]).norm() < 1e-12, "cell centered on nucleus");
        }
        assert!(t.partition_defect() < 1e-12);
    }

    #[test]
    fn cells_are_convex_contain_nuclei_and_partition_domain() {
        let domain = DomainBox::sized(20.0, 20.0).unwrap();
        let pts = place_points(&domain, 1.0, 7, 3000).unwrap();
        let t = voronoi_tessellate(&pts, &domain).unwrap();
        assert!(t.partition_defect() < 1e-9);
        for (i, body) in t.bodies.iter().enumerate() {
            let BodyShape::Polygon { polygon } = &body.shape else {
                panic!("voronoi bodies are polygons");
            };
            assert!(checks::polygon_is_convex(&t.vertices, polygon));
            assert!(
                checks::point_in_convex_polygon(&t.vertices, polygon, t.nodes[i], 1e-9),
                "nucleus {i} outside its cell"
            );
        }
        assert!(checks::find_overlapping_bodies(&t, 1e-9).is_empty());
    }

    #[test]
    fn rejects_bad_input() {
        let domain = DomainBox::sized(1.0, 1.0).unwrap();
        assert!(matches!(
            voronoi_tessellate(&[Vec2::new(0.5, 0.5)], &domain),
            Err(GeometryError::TooFewPoints { .. })
        ));
        let outside = vec![
            Vec2::new(0.2, 0.2),
            Vec2::new(0.8, 0.2),
            Vec2::new(0.5, 1.7),
        ];
        assert!(matches!(
            voronoi_tessellate(&outside, &domain),
            Err(GeometryError::PointOutsideDomain { index: 2 })
        ));
        let collinear = vec![
            Vec2::new(0.1, 0.1),
            Vec2::new(0.5, 0.5),
            Vec2::new(0.9, 0.9),
        ];
        assert!(matches!(
            voronoi_tessellate(&collinear, &domain),
            Err(GeometryError::CollinearPoints)
        ));
    }
}
