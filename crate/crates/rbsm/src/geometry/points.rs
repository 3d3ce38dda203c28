//! Sequential random point placement with a minimum-distance constraint.

use super::grid::UniformGrid;
use super::{DomainBox, GeometryError};
use crate::vec2::Vec2;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Place points uniformly at random, accepting a candidate only if it keeps
/// distance `l_min` to every previously accepted point. The process stops
/// after `max_trials` consecutive rejections.
pub fn place_points(
    domain: &DomainBox,
    l_min: f64,
    seed: u64,
    max_trials: usize,
) -> Result<Vec<Vec2>, GeometryError> {
    if !(domain.area() > 0.0) {
        return Err(GeometryError::DegenerateDomain);
    }
    if !(l_min > 0.0) {
        return Err(GeometryError::InvalidParameter(format!(
            "minimum spacing must be positive, got {l_min}"
        )));
    }
    if max_trials == 0 {
        return Err(GeometryError::InvalidParameter(
            "max_trials must be at least 1".into(),
        ));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut grid = UniformGrid::new(l_min);
    let mut points = Vec::new();
    let mut rejections = 0usize;
    while rejections < max_trials {
        let p = Vec2::new(
            domain.min.x + rng.random::<f64>() * domain.width(),
            domain.min.y + rng.random::<f64>() * domain.height(),
        );
        if grid.any_within(p, l_min) {
            rejections += 1;
        } else {
            grid.insert(p);
            points.push(p);
            rejections = 0;
        }
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_distance_invariant_in_tiny_domain() {
        let domain = DomainBox::sized(1.0, 1.0).unwrap();
        for seed in 0..5 {
            let pts = place_points(&domain, 1.0, seed, 500).unwrap();
            assert!(!pts.is_empty());
            for i in 0..pts.len() {
                for j in 0..i {
                    assert!(pts[i].distance(pts[j]) >= 1.0);
                }
            }
        }
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let domain = DomainBox::sized(20.0, 20.0).unwrap();
        let a = place_points(&domain, 1.0, 99, 2000).unwrap();
        let b = place_points(&domain, 1.0, 99, 2000).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rejects_degenerate_inputs() {
        let domain = DomainBox::sized(5.0, 5.0).unwrap();
        assert!(place_points(&domain, 0.0, 1, 10).is_err());
        assert!(place_points(&domain, 1.0, 1, 0).is_err());
        assert!(DomainBox::sized(0.0, 5.0).is_err());
    }

    /// Saturated sequential placement at 150 x 150 spacing units. The band
    /// was frozen from 50 independent seeds of this generator
    /// (mean 14669.1, sd 79.1, range 14509..14814); allow five standard
    /// deviations.
    #[test]
    fn saturation_density_regression() {
        let domain = DomainBox::sized(150.0, 150.0).unwrap();
        let pts = place_points(&domain, 1.0, 1234, 10_000).unwrap();
        let n = pts.len() as f64;
        assert!(
            (n - 14669.1).abs() < 5.0 * 79.1,
            "point count {n} outside regression band"
        );
    }
}
