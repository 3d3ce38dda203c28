//! Contact-angle statistics: the moments `I1`, `I2` and a binned density.

use super::{ChiStatistics, ContactElement, GeometryError};
use std::f64::consts::PI;

/// Empirical moments and density of the contact angle over `[-pi, pi]`.
/// `I1 = mean cos chi`, `I2 = mean cos 2chi`. The density is returned as
/// nodal values on the bin-edge grid so that the trapezoid rule integrates
/// it to exactly one.
pub fn chi_statistics(
    elements: &[ContactElement],
    bins: usize,
) -> Result<ChiStatistics, GeometryError> {
    if elements.is_empty() {
        return Err(GeometryError::EmptyElements);
    }
    if bins == 0 {
        return Err(GeometryError::InvalidParameter(
            "need at least one bin".into(),
        ));
    }
    let n = elements.len();
    let i1 = elements.iter().map(|e| e.chi.cos()).sum::<f64>() / n as f64;
    let i2 = elements.iter().map(|e| (2.0 * e.chi).cos()).sum::<f64>() / n as f64;

    let width = 2.0 * PI / bins as f64;
    let mut counts = vec![0usize; bins];
    for e in elements {
        let mut k = ((e.chi + PI) / width) as usize;
        if k >= bins {
            k = bins - 1;
        }
        counts[k] += 1;
    }
    let bin_density: Vec<f64> = counts
        .iter()
        .map(|&c| c as f64 / (n as f64 * width))
        .collect();

    let grid: Vec<f64> = (0..=bins).map(|i| -PI + width * i as f64).collect();
    let mut density = Vec::with_capacity(bins + 1);
    density.push(bin_density[0]);
    for j in 1..bins {
        density.push(0.5 * (bin_density[j - 1] + bin_density[j]));
    }
    density.push(bin_density[bins - 1]);

    Ok(ChiStatistics {
        grid,
        density,
        i1,
        i2,
        sample_count: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vec2::Vec2;

    fn element_with_chi(chi: f64) -> ContactElement {
        let n = Vec2::new(1.0, 0.0);
        let t = Vec2::new(chi.cos(), chi.sin());
        ContactElement {
            a: 0,
            b: 1,
            face: (0, 1),
            area: 1.0,
            l: 1.0,
            n,
            t,
            c: Vec2::ZERO,
            chi,
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(
            chi_statistics(&[], 10),
            Err(GeometryError::EmptyElements)
        ));
    }

    #[test]
    fn parallel_contacts() {
        let els: Vec<_> = (0..10).map(|_| element_with_chi(0.0)).collect();
        let s = chi_statistics(&els, 16).unwrap();
        assert_eq!(s.i1, 1.0);
        assert_eq!(s.i2, 1.0);
        assert!((s.integral() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn perpendicular_contacts() {
        let els: Vec<_> = (0..10)
            .map(|i| element_with_chi(if i % 2 == 0 { PI / 2.0 } else { -PI / 2.0 }))
            .collect();
        let s = chi_statistics(&els, 16).unwrap();
        assert!(s.i1.abs() < 1e-15);
        assert!((s.i2 + 1.0).abs() < 1e-15);
    }

    #[test]
    fn histogram_integrates_to_one() {
        let els: Vec<_> = (0..500)
            .map(|i| element_with_chi((i as f64 * 0.71).sin() * 2.9))
            .collect();
        for bins in [5, 40, 81] {
            let s = chi_statistics(&els, bins).unwrap();
            assert!(
                (s.integral() - 1.0).abs() < 1e-6,
                "bins {bins}: integral {}",
                s.integral()
            );
            assert_eq!(s.sample_count, 500);
        }
    }
}
