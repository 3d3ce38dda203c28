//! Vertex randomization turning a Voronoi tessellation into the
//! randomized-Voronoi family.

use super::grid::UniformGrid;
use super::{extract_contacts, GeometryError, Tessellation, TessellationKind};
use crate::vec2::Vec2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// Move every Voronoi vertex once in a uniformly random direction by a
/// distance drawn from `U(0, k)`, where `k` is half the distance to the
/// nearest other vertex (evaluated on the unperturbed tessellation, which
/// prevents vertices from crossing). Vertices are shared objects, so the
/// partition of the domain is preserved. Corner vertices stay fixed and
/// side vertices slide along their side (the same displacement law,
/// projected), keeping the domain rectangular. Interior vertices are
/// additionally capped by their distance to the boundary so no body pokes
/// out of the domain.
pub fn randomize_vertices(t: &Tessellation, seed: u64) -> Result<Tessellation, GeometryError> {
    randomize_vertices_scaled(t, seed, 1.0)
}

/// [`randomize_vertices`] with the displacement amplitude scaled; a scale
/// of zero reproduces the input geometry exactly.
pub fn randomize_vertices_scaled(
    t: &Tessellation,
    seed: u64,
    scale: f64,
) -> Result<Tessellation, GeometryError> {
    if t.kind != TessellationKind::Voronoi {
        return Err(GeometryError::WrongKind {
            expected: TessellationKind::Voronoi,
            got: t.kind,
        });
    }
    let tol = 1e-9 * t.lmin;
    let grid = UniformGrid::with_points(t.lmin.max(1e-12), &t.vertices);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut out = t.clone();
    out.kind = TessellationKind::RandomizedVoronoi;
    out.seed = seed;

    for (i, v) in t.vertices.iter().enumerate() {
        // Draw for every vertex so the stream does not depend on the
        // boundary classification.
        let angle = rng.random::<f64>() * TAU;
        let u: f64 = rng.random();

        let on_left = (v.x - t.domain.min.x).abs() <= tol;
        let on_right = (v.x - t.domain.max.x).abs() <= tol;
        let on_bottom = (v.y - t.domain.min.y).abs() <= tol;
        let on_top = (v.y - t.domain.max.y).abs() <= tol;
        let sides = [on_left, on_right, on_bottom, on_top]
            .iter()
            .filter(|&&b| b)
            .count();

        if sides >= 2 {
            continue; // corner
        }

        let k = 0.5 * grid.nearest_other_distance(i);
        let disp = Vec2::new(angle.cos(), angle.sin()) * (u * k * scale);
        if sides == 1 {
            // Slide along the side: project the displacement on its tangent.
            let tangent = if on_left || on_right {
                Vec2::new(0.0, 1.0)
            } else {
                Vec2::new(1.0, 0.0)
            };
            let slide = tangent * disp.dot(tangent);
            out.vertices[i] = *v + slide;
        } else {
            let cap = t.domain.boundary_distance(*v);
            let len = disp.norm();
            let disp = if len > cap { disp * (cap / len) } else { disp };
            out.vertices[i] = *v + disp;
        }
    }

    out.contacts = extract_contacts(&out)?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{checks, chi_statistics, generate, DomainBox, TessellationKind};

    fn voronoi_fixture(size: f64, seed: u64) -> Tessellation {
        let domain = DomainBox::sized(size, size).unwrap();
        generate(TessellationKind::Voronoi, domain, 1.0, seed, 2000).unwrap()
    }

    #[test]
    fn zero_scale_is_identity() {
        let t = voronoi_fixture(12.0, 4);
        let r = randomize_vertices_scaled(&t, 9, 0.0).unwrap();
        assert_eq!(t.vertices, r.vertices);
        let stats = chi_statistics(&r.contacts, 40).unwrap();
        assert!((stats.i2 - 1.0).abs() < 1e-9);
    }

    #[test]
    fn wrong_kind_is_rejected() {
        let t = voronoi_fixture(8.0, 1);
        let r = randomize_vertices(&t, 5).unwrap();
        assert!(matches!(
            randomize_vertices(&r, 6),
            Err(GeometryError::WrongKind { .. })
        ));
    }

    #[test]
    fn partition_and_overlap_invariants_survive() {
        let t = voronoi_fixture(15.0, 11);
        let r = randomize_vertices(&t, 42).unwrap();
        assert!(
            r.partition_defect() < 1e-9,
            "defect {}",
            r.partition_defect()
        );
        assert!(checks::find_overlapping_bodies(&r, 1e-9).is_empty());
        // domain stays rectangular: every boundary vertex still on boundary
        let tol = 1e-9;
        for v in &r.vertices {
            assert!(r.domain.contains(*v) || r.domain.on_boundary(*v, tol));
        }
    }

    #[test]
    fn contact_vectors_unchanged_normals_rotated() {
        let t = voronoi_fixture(12.0, 2);
        let r = randomize_vertices(&t, 3).unwrap();
        // same node set, same topology: contact (a, b) pairs identical
        let pairs_t: Vec<(usize, usize)> = t.contacts.iter().map(|e| (e.a, e.b)).collect();
        let pairs_r: Vec<(usize, usize)> = r.contacts.iter().map(|e| (e.a, e.b)).collect();
        assert_eq!(pairs_t, pairs_r);
        let mut rotated = 0;
        for (et, er) in t.contacts.iter().zip(&r.contacts) {
            assert_eq!(et.t, er.t, "contact vectors must not change");
            assert_eq!(et.l, er.l);
            if (et.n - er.n).norm() > 1e-9 {
                rotated += 1;
            }
        }
        assert!(rotated > 0, "randomization must rotate some normals");
    }

    #[test]
    fn chi_distribution_is_symmetric() {
        let t = voronoi_fixture(25.0, 17);
        let r = randomize_vertices(&t, 23).unwrap();
        let n = r.contacts.len() as f64;
        let mean_sin: f64 = r.contacts.iter().map(|e| e.chi.sin()).sum::<f64>() / n;
        let var: f64 = r
            .contacts
            .iter()
            .map(|e| (e.chi.sin() - mean_sin).powi(2))
            .sum::<f64>()
            / n;
        assert!(
            mean_sin.abs() < 3.0 * (var / n).sqrt() + 1e-12,
            "mean sin chi = {mean_sin}, sd of mean = {}",
            (var / n).sqrt()
        );
    }
}
