//! Shortest-path metric of a graph.

use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Hop distances from `source`; `None` marks unreachable vertices.
pub fn bfs_distances(g: &Graph, source: usize) -> Vec<Option<u32>> {
    let mut dist = vec![None; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = Some(0);
    queue.push_back(source);
    while let Some(u) = queue.pop_front() {
        let du = dist[u].unwrap();
        for &v in g.neighbors(u) {
            if dist[v].is_none() {
                dist[v] = Some(du + 1);
                queue.push_back(v);
            }
        }
    }
    dist
}

/// All-pairs hop distances; one BFS per source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    m: usize,
    dist: Vec<Option<u32>>,
}

impl DistanceMatrix {
    /// Builds a matrix from explicit rows. Only shape is checked; see
    /// [`DistanceMatrix::check_metric`] for the metric axioms.
    pub fn from_rows(rows: Vec<Vec<Option<u32>>>) -> Result<Self> {
        let m = rows.len();
        let mut dist = Vec::with_capacity(m * m);
        for row in rows {
            if row.len() != m {
                return Err(Error::SizeMismatch {
                    expected: m,
                    found: row.len(),
                });
            }
            dist.extend(row);
        }
        Ok(DistanceMatrix { m, dist })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn get(&self, a: usize, b: usize) -> Option<u32> {
        self.dist[a * self.m + b]
    }

    pub fn row(&self, a: usize) -> &[Option<u32>] {
        &self.dist[a * self.m..(a + 1) * self.m]
    }

    pub fn is_connected(&self) -> bool {
        self.dist.iter().all(Option::is_some)
    }

    /// Largest distance, or `None` when some pair is unreachable.
    pub fn diameter(&self) -> Option<u32> {
        self.dist
            .iter()
            .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
    }

    /// Checks zero diagonal, symmetry and the triangle inequality on finite
    /// entries. Returns a description of the first violation.
    pub fn check_metric(&self) -> std::result::Result<(), String> {
        let m = self.m;
        for a in 0..m {
            if self.get(a, a) != Some(0) {
                return Err(format!("nonzero diagonal at {a}"));
            }
            for b in 0..m {
                if self.get(a, b) != self.get(b, a) {
                    return Err(format!("asymmetric at ({a}, {b})"));
                }
            }
        }
        for b in 0..m {
            for a in 0..m {
                let Some(ab) = self.get(a, b) else { continue };
                for c in 0..m {
                    if let (Some(bc), Some(ac)) = (self.get(b, c), self.get(a, c)) {
                        if ac > ab + bc {
                            return Err(format!("triangle inequality fails at ({a}, {b}, {c})"));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Row-major tab-separated text; unreachable entries print as `inf`.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for a in 0..self.m {
            let cells: Vec<String> = self
                .row(a)
                .iter()
                .map(|d| d.map_or_else(|| "inf".to_string(), |d| d.to_string()))
                .collect();
            writeln!(out, "{}", cells.join("\t")).unwrap();
        }
        out
    }
}

pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let rows: Vec<Vec<Option<u32>>> = (0..g.n())
        .into_par_iter()
        .map(|s| bfs_distances(g, s))
        .collect();
    DistanceMatrix {
        m: g.n(),
        dist: rows.into_iter().flatten().collect(),
    }
}

/// Largest pairwise distance of a connected graph.
pub fn diameter(g: &Graph) -> Result<u32> {
    if g.n() == 0 {
        return Ok(0);
    }
    (0..g.n())
        .into_par_iter()
        .map(|s| {
            bfs_distances(g, s)
                .into_iter()
                .try_fold(0, |acc, d| d.map(|d| acc.max(d)))
                .ok_or(Error::Disconnected)
        })
        .try_reduce(|| 0, |a, b| Ok(a.max(b)))
}

/// Number of vertices within distance `k` of `v` (including `v`).
pub fn ball_size(g: &Graph, v: usize, k: u32) -> usize {
    bfs_distances(g, v)
        .into_iter()
        .filter(|d| matches!(d, Some(d) if *d <= k))
        .count()
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() == 0 || bfs_distances(g, 0).iter().all(Option::is_some)
}

/// Moore-type upper bound `1 + d + ... + d^k` on a ball in a graph of
/// maximum degree `d`.
pub fn ball_bound(d: usize, k: u32) -> u128 {
    (0..=k).map(|i| (d as u128).pow(i)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{complete, cycle, disjoint_union, path, petersen};

    #[test]
    fn bfs_on_small_graphs() {
        let c6: Vec<_> = bfs_distances(&cycle(6), 0).into_iter().map(Option::unwrap).collect();
        assert_eq!(c6, vec![0, 1, 2, 3, 2, 1]);
        let k5: Vec<_> = bfs_distances(&complete(5), 2).into_iter().map(Option::unwrap).collect();
        assert_eq!(k5, vec![1, 1, 0, 1, 1]);
        let two = disjoint_union(&complete(3), &complete(3));
        let d = bfs_distances(&two, 0);
        assert!(d[..3].iter().all(Option::is_some));
        assert!(d[3..].iter().all(Option::is_none));
    }

    #[test]
    fn all_pairs_small() {
        let tri = all_pairs_distances(&complete(3));
        for a in 0..3 {
            for b in 0..3 {
                assert_eq!(tri.get(a, b), Some(u32::from(a != b)));
            }
        }
        let p3 = all_pairs_distances(&path(3));
        assert_eq!(p3.get(0, 2), Some(2));
        assert!(p3.check_metric().is_ok());
        assert_eq!(p3.to_tsv(), "0\t1\t2\n1\t0\t1\n2\t1\t0\n");
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&complete(7)).unwrap(), 1);
        assert_eq!(diameter(&cycle(6)).unwrap(), 3);
        assert_eq!(diameter(&petersen()).unwrap(), 2);
        let two = disjoint_union(&complete(2), &complete(2));
        assert_eq!(diameter(&two).unwrap_err(), Error::Disconnected);
        assert_eq!(all_pairs_distances(&two).diameter(), None);
    }

    #[test]
    fn balls() {
        assert_eq!(ball_size(&cycle(6), 0, 1), 3);
        assert_eq!(ball_size(&complete(5), 0, 1), 5);
        assert_eq!(ball_size(&petersen(), 0, 1), 4);
        assert_eq!(ball_size(&petersen(), 0, 2), 10);
        assert_eq!(ball_bound(3, 2), 13);
    }

    #[test]
    fn connectivity() {
        assert!(is_connected(&complete(3)));
        assert!(!is_connected(&disjoint_union(&complete(2), &complete(2))));
    }
}
