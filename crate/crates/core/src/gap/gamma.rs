use super::map::{partition_stats, VertexMap};
use crate::error::{Error, Result};
use crate::euclid::{directed_edge_sum, ordered_pair_sum};
use crate::graph::Graph;
use crate::metric::DistanceMatrix;

/// Both sides of the defining identity
/// `gamma / (d n) * edge_sum = pair_sum / n^2` for one map.
///
/// `pair_sum` runs over ordered vertex pairs and `edge_sum` over directed
/// edges, so `gamma = (d / n) * pair_sum / edge_sum`. When `edge_sum` is 0
/// the ratio is undefined and `gamma` is `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaReport {
    pub n: usize,
    pub d: usize,
    pub pair_sum: f64,
    pub edge_sum: f64,
    pub gamma: Option<f64>,
}

impl GammaReport {
    pub fn new(n: usize, d: usize, pair_sum: f64, edge_sum: f64) -> Self {
        let gamma = (edge_sum > 0.0).then(|| (d as f64 * pair_sum) / (n as f64 * edge_sum));
        GammaReport {
            n,
            d,
            pair_sum,
            edge_sum,
            gamma,
        }
    }

    pub fn degenerate(&self) -> bool {
        self.gamma.is_none()
    }

    /// `pair_sum / n^2`, the average squared distance over all pairs.
    pub fn pair_average(&self) -> f64 {
        self.pair_sum / (self.n as f64 * self.n as f64)
    }

    /// `edge_sum / (d n)`, the average squared distance over directed edges.
    pub fn edge_average(&self) -> f64 {
        self.edge_sum / (self.d as f64 * self.n as f64)
    }
}

pub(crate) fn regular_degree(g: &Graph) -> Result<usize> {
    g.regular_degree().ok_or(Error::NotRegular)
}

pub(crate) fn check_map(g: &Graph, dist: &DistanceMatrix, f: &VertexMap) -> Result<()> {
    if f.n() != g.n() {
        return Err(Error::SizeMismatch {
            expected: g.n(),
            found: f.n(),
        });
    }
    if f.m() != dist.len() {
        return Err(Error::SizeMismatch {
            expected: dist.len(),
            found: f.m(),
        });
    }
    Ok(())
}

/// Squared distances between the images that `f` actually uses; errors if
/// two used images are at infinite distance.
fn used_squared_distances(dist: &DistanceMatrix, sizes: &[usize]) -> Result<Vec<u64>> {
    let m = dist.len();
    let mut sq = vec![0u64; m * m];
    for i in (0..m).filter(|&i| sizes[i] > 0) {
        for j in (0..m).filter(|&j| sizes[j] > 0) {
            let dij = dist.get(i, j).ok_or(Error::InfiniteDistance(i, j))? as u64;
            sq[i * m + j] = dij * dij;
        }
    }
    Ok(sq)
}

/// Exact integer sums `(pair_sum, edge_sum)` for a graph-metric map.
pub(crate) fn integer_sums(g: &Graph, dist: &DistanceMatrix, f: &VertexMap) -> Result<(u64, u64)> {
    check_map(g, dist, f)?;
    let m = dist.len();
    let sizes = partition_stats(f).sizes;
    let sq = used_squared_distances(dist, &sizes)?;
    let mut pair = 0u64;
    for i in 0..m {
        for j in 0..m {
            pair += (sizes[i] * sizes[j]) as u64 * sq[i * m + j];
        }
    }
    let edge: u64 = g
        .edges()
        .map(|(u, v)| 2 * sq[f.get(u) * m + f.get(v)])
        .sum();
    Ok((pair, edge))
}

/// `gamma(G, d_H, f)` for a d-regular `g` and a map into the metric `dist`.
pub fn gamma_value(g: &Graph, dist: &DistanceMatrix, f: &VertexMap) -> Result<GammaReport> {
    let d = regular_degree(g)?;
    let (pair, edge) = integer_sums(g, dist, f)?;
    Ok(GammaReport::new(g.n(), d, pair as f64, edge as f64))
}

/// The same functional with Euclidean distances between vector values.
pub fn gamma_vector(g: &Graph, points: &[Vec<f64>]) -> Result<GammaReport> {
    let d = regular_degree(g)?;
    let edge = directed_edge_sum(g, points)?;
    let pair = ordered_pair_sum(points)?;
    Ok(GammaReport::new(g.n(), d, pair, edge))
}

/// Real-line specialization; its supremum over `f` is `1 / lambda_1`.
pub fn gamma_real(g: &Graph, f: &[f64]) -> Result<GammaReport> {
    let points: Vec<Vec<f64>> = f.iter().map(|&x| vec![x]).collect();
    gamma_vector(g, &points)
}

/// Counts for the near-pair set `N_H = {(u, v) : d_H(f(u), f(v)) <= alpha D}`.
///
/// Both counts are over ordered pairs: `near_pair_count` includes the
/// diagonal `u = v` and `crossing_edge_count` counts directed edges of `G`
/// lying in `N_H`. The criterion compares the directed count with
/// `beta * d * n`, the number of directed edges scaled by `beta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NearPairReport {
    pub alpha: f64,
    pub beta: f64,
    pub diameter: u32,
    pub near_pair_count: u64,
    pub crossing_edge_count: u64,
    pub threshold: f64,
}

impl NearPairReport {
    /// `|E_G cap N_H| <= beta d n`.
    pub fn below_threshold(&self) -> bool {
        (self.crossing_edge_count as f64) <= self.threshold
    }

    pub fn radius(&self) -> f64 {
        self.alpha * f64::from(self.diameter)
    }
}

pub fn near_pair_report(
    g: &Graph,
    dist: &DistanceMatrix,
    f: &VertexMap,
    alpha: f64,
    beta: f64,
) -> Result<NearPairReport> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidParameters(format!("alpha must lie in (0, 1], got {alpha}")));
    }
    let d = regular_degree(g)?;
    check_map(g, dist, f)?;
    let diameter = dist.diameter().ok_or(Error::Disconnected)?;
    let radius = alpha * f64::from(diameter);
    let m = dist.len();
    let near = |i: usize, j: usize| f64::from(dist.get(i, j).expect("connected")) <= radius;
    let sizes = partition_stats(f).sizes;
    let mut near_pair_count = 0u64;
    for i in 0..m {
        for j in 0..m {
            if near(i, j) {
                near_pair_count += (sizes[i] * sizes[j]) as u64;
            }
        }
    }
    let crossing_edge_count = 2 * g.edges().filter(|&(u, v)| near(f.get(u), f.get(v))).count() as u64;
    Ok(NearPairReport {
        alpha,
        beta,
        diameter,
        near_pair_count,
        crossing_edge_count,
        threshold: beta * (d * g.n()) as f64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle};
    use crate::metric::all_pairs_distances;

    fn c4_k2() -> (Graph, DistanceMatrix, VertexMap) {
        (
            cycle(4),
            all_pairs_distances(&complete(2)),
            VertexMap::new(vec![0, 0, 1, 1], 2).unwrap(),
        )
    }

    #[test]
    fn c4_into_k2() {
        let (g, h, f) = c4_k2();
        let r = gamma_value(&g, &h, &f).unwrap();
        assert_eq!(r.pair_sum, 8.0);
        assert_eq!(r.edge_sum, 4.0);
        assert_eq!(r.gamma, Some(1.0));
    }

    #[test]
    fn constant_map_is_degenerate() {
        let g = cycle(5);
        let h = all_pairs_distances(&complete(3));
        let r = gamma_value(&g, &h, &VertexMap::constant(5, 3, 2).unwrap()).unwrap();
        assert!(r.degenerate());
        assert_eq!((r.pair_sum, r.edge_sum), (0.0, 0.0));
    }

    #[test]
    fn k2_real_line() {
        let r = gamma_real(&complete(2), &[0.0, 1.0]).unwrap();
        assert_eq!(r.gamma, Some(0.5));
        assert!(gamma_real(&complete(2), &[3.0, 3.0]).unwrap().degenerate());
    }

    #[test]
    fn errors() {
        let h = all_pairs_distances(&complete(2));
        let path = crate::graph::path(3);
        let f = VertexMap::new(vec![0, 1, 0], 2).unwrap();
        assert_eq!(gamma_value(&path, &h, &f).unwrap_err(), Error::NotRegular);

        let two = crate::graph::disjoint_union(&complete(2), &complete(2));
        let h2 = all_pairs_distances(&two);
        let f = VertexMap::new(vec![0, 2, 0, 2], 4).unwrap();
        assert!(matches!(
            gamma_value(&cycle(4), &h2, &f),
            Err(Error::InfiniteDistance(..))
        ));
        // a map staying inside one component is fine
        let f = VertexMap::new(vec![0, 1, 0, 1], 4).unwrap();
        assert!(gamma_value(&cycle(4), &h2, &f).is_ok());
        assert_eq!(
            near_pair_report(&cycle(4), &h2, &f, 0.5, 0.25).unwrap_err(),
            Error::Disconnected
        );
    }

    #[test]
    fn near_pairs_c4_k2() {
        let (g, h, f) = c4_k2();
        let r = near_pair_report(&g, &h, &f, 0.5, 0.25).unwrap();
        assert_eq!(r.near_pair_count, 8);
        assert_eq!(r.crossing_edge_count, 4);
        assert_eq!(r.threshold, 2.0);
        assert!(!r.below_threshold());
        let all = near_pair_report(&g, &h, &f, 1.0, 0.25).unwrap();
        assert_eq!(all.near_pair_count, 16);
        assert_eq!(all.crossing_edge_count, 8);
    }
}
