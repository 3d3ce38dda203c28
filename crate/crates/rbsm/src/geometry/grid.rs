//! Uniform bucket grid for neighborhood queries over point sets.

use crate::vec2::Vec2;
use std::collections::HashMap;

pub(crate) struct UniformGrid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
    points: Vec<Vec2>,
}

impl UniformGrid {
    pub fn new(cell: f64) -> Self {
        assert!(cell > 0.0);
        UniformGrid {
            cell,
            buckets: HashMap::new(),
            points: Vec::new(),
        }
    }

    pub fn with_points(cell: f64, points: &[Vec2]) -> Self {
        let mut g = UniformGrid::new(cell);
        for &p in points {
            g.insert(p);
        }
        g
    }

    fn key(&self, p: Vec2) -> (i64, i64) {
        (
            (p.x / self.cell).floor() as i64,
            (p.y / self.cell).floor() as i64,
        )
    }

    pub fn insert(&mut self, p: Vec2) -> usize {
        let id = self.points.len();
        self.points.push(p);
        self.buckets.entry(self.key(p)).or_default().push(id);
        id
    }

    /// Is any stored point strictly closer than `r` to `p`?
    pub fn any_within(&self, p: Vec2, r: f64) -> bool {
        let reach = (r / self.cell).ceil() as i64;
        let (kx, ky) = self.key(p);
        let r2 = r * r;
        for dx in -reach..=reach {
            for dy in -reach..=reach {
                if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                    if ids
                        .iter()
                        .any(|&i| (self.points[i] - p).norm_squared() < r2)
                    {
                        return true;
                    }
                }
            }
        }
        false
    }

    /// Distance from point `i` to its nearest other stored point.
    pub fn nearest_other_distance(&self, i: usize) -> f64 {
        let p = self.points[i];
        let (kx, ky) = self.key(p);
        let mut reach: i64 = 1;
        loop {
            let mut best = f64::INFINITY;
            for dx in -reach..=reach {
                for dy in -reach..=reach {
                    if let Some(ids) = self.buckets.get(&(kx + dx, ky + dy)) {
                        for &j in ids {
                            if j != i {
                                best = best.min((self.points[j] - p).norm_squared());
                            }
                        }
                    }
                }
            }
            // A hit is only conclusive once it cannot be beaten by a point
            // just outside the searched ring.
            let safe = (reach as f64) * self.cell;
            if best.is_finite() && best.sqrt() <= safe {
                return best.sqrt();
            }
            if (reach as f64) * self.cell > 1e6 * self.cell * self.points.len() as f64 {
                return best.sqrt();
            }
            reach += 1;
        }
    }
}
