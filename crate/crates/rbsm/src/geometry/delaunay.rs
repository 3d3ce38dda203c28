//! Thin wrapper around the incremental Delaunay triangulation.

use super::GeometryError;
use crate::vec2::Vec2;
use spade::{DelaunayTriangulation, Point2, Triangulation};
use std::collections::BTreeSet;

pub(crate) struct Delaunay {
    /// Triangles as vertex-id triples in counterclockwise order; the index
    /// in this vector is the triangle id.
    pub triangles: Vec<[usize; 3]>,
    /// Sorted Delaunay neighbor ids per vertex.
    pub neighbors: Vec<Vec<usize>>,
}

pub(crate) fn triangulate(points: &[Vec2]) -> Result<Delaunay, GeometryError> {
    let mut tri: DelaunayTriangulation<Point2<f64>> = DelaunayTriangulation::new();
    for (i, p) in points.iter().enumerate() {
        let handle = tri
            .insert(Point2::new(p.x, p.y))
            .map_err(|e| GeometryError::Triangulation(format!("{e:?}")))?;
        if handle.index() != i {
            return Err(GeometryError::DuplicatePoints(handle.index(), i));
        }
    }
    if tri.num_inner_faces() == 0 {
        return Err(GeometryError::CollinearPoints);
    }

    let mut triangles = Vec::with_capacity(tri.num_inner_faces());
    let mut neighbor_sets: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); points.len()];
    for face in tri.inner_faces() {
        let [a, b, c] = face.vertices().map(|v| v.fix().index());
        let mut t = [a, b, c];
        if orient(points, a, b, c) < 0.0 {
            t.swap(1, 2);
        }
        triangles.push(t);
        for (u, v) in [(a, b), (b, c), (c, a)] {
            neighbor_sets[u].insert(v);
            neighbor_sets[v].insert(u);
        }
    }
    Ok(Delaunay {
        triangles,
        neighbors: neighbor_sets
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect(),
    })
}

fn orient(points: &[Vec2], a: usize, b: usize, c: usize) -> f64 {
    robust::orient2d(
        robust::Coord {
            x: points[a].x,
            y: points[a].y,
        },
        robust::Coord {
            x: points[b].x,
            y: points[b].y,
        },
        robust::Coord {
            x: points[c].x,
            y: points[c].y,
        },
    )
}

/// Exact orientation predicate on raw coordinates.
pub(crate) fn orient2d(a: Vec2, b: Vec2, c: Vec2) -> f64 {
    robust::orient2d(
        robust::Coord { x: a.x, y: a.y },
        robust::Coord { x: b.x, y: b.y },
        robust::Coord { x: c.x, y: c.y },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn collinear_points_are_rejected() {
        let pts: Vec<Vec2> = (0..5)
            .map(|i| Vec2::new(i as f64, 2.0 * i as f64))
            .collect();
        assert!(matches!(
            triangulate(&pts),
            Err(GeometryError::CollinearPoints)
        ));
    }

    #[test]
    fn duplicate_points_are_rejected() {
        let pts = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(1.0, 0.0),
        ];
        assert!(matches!(
            triangulate(&pts),
            Err(GeometryError::DuplicatePoints(..))
        ));
    }

    #[test]
    fn triangles_are_ccw_and_cover_square() {
        let pts = vec![
            Vec2::new(0.0, 0.0),
            Vec2::new(1.0, 0.0),
            Vec2::new(1.0, 1.0),
            Vec2::new(0.0, 1.0),
            Vec2::new(0.4, 0.6),
        ];
        let d = triangulate(&pts).unwrap();
        let mut area = 0.0;
        for t in &d.triangles {
            let a = super::super::triangle_area(&pts, t);
            assert!(a > 0.0, "triangle must be counterclockwise");
            area += a;
        }
        assert!((area - 1.0).abs() < 1e-12);
        // interior point is everyone's neighbor
        assert_eq!(d.neighbors[4], vec![0, 1, 2, 3]);
    }
}
