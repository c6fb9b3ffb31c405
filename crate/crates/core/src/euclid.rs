//! Sums of squared Euclidean differences over vertex pairs and edges.
//!
//! Conventions used throughout the crate: edge sums run over directed edges
//! (each undirected edge twice) and pair sums over ordered vertex pairs.

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Common dimension of all points, or an error naming the first mismatch.
pub fn common_dimension(points: &[Vec<f64>]) -> Result<usize> {
    let dim = points.first().map_or(0, Vec::len);
    for (vertex, p) in points.iter().enumerate() {
        if p.len() != dim {
            return Err(Error::DimensionMismatch {
                vertex,
                expected: dim,
                found: p.len(),
            });
        }
    }
    Ok(dim)
}

pub fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Sum over ordered pairs `(u, v)` of `|p(u) - p(v)|^2`, via
/// `2 n * sum |p(u) - mean|^2`.
pub fn ordered_pair_sum(points: &[Vec<f64>]) -> Result<f64> {
    let dim = common_dimension(points)?;
    let n = points.len();
    if n == 0 {
        return Ok(0.0);
    }
    let mut mean = vec![0.0; dim];
    for p in points {
        for (m, x) in mean.iter_mut().zip(p) {
            *m += x;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let spread: f64 = points.iter().map(|p| squared_distance(p, &mean)).sum();
    Ok(2.0 * n as f64 * spread)
}

/// Sum over directed edges `u -> v` of `|p(u) - p(v)|^2`.
pub fn directed_edge_sum(g: &Graph, points: &[Vec<f64>]) -> Result<f64> {
    common_dimension(points)?;
    if points.len() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            found: points.len(),
        });
    }
    Ok(2.0
        * g.edges()
            .map(|(u, v)| squared_distance(&points[u], &points[v]))
            .sum::<f64>())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle;

    #[test]
    fn pair_sum_matches_double_loop() {
        let pts: Vec<Vec<f64>> = (0..7)
            .map(|i| vec![(i as f64).sin(), (i * i) as f64 * 0.1])
            .collect();
        let brute: f64 = pts
            .iter()
            .flat_map(|a| pts.iter().map(move |b| squared_distance(a, b)))
            .sum();
        assert!((ordered_pair_sum(&pts).unwrap() - brute).abs() < 1e-9);
    }

    #[test]
    fn edge_sum_on_cycle() {
        let pts: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
        // edges 0-1,1-2,2-3 contribute 1 each, 3-0 contributes 9
        assert_eq!(directed_edge_sum(&cycle(4), &pts).unwrap(), 24.0);
    }

    #[test]
    fn dimension_mismatch() {
        let pts = vec![vec![0.0], vec![1.0, 2.0]];
        assert!(matches!(
            ordered_pair_sum(&pts),
            Err(Error::DimensionMismatch { vertex: 1, .. })
        ));
    }
}
