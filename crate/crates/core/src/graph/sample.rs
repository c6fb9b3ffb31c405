use rand::Rng as _;

use super::{Graph, Multigraph};
use crate::error::{Error, Result};
use crate::rng::Rng;

/// A perfect matching on the `n * d` half-edges. Half-edge `h` belongs to
/// vertex `h / d`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HalfEdgeMatching {
    n: usize,
    d: usize,
    pairs: Vec<(usize, usize)>,
}

impl HalfEdgeMatching {
    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn owner(&self, half_edge: usize) -> usize {
        half_edge / self.d
    }

    /// Projects the matching onto vertices, keeping loops and parallel edges.
    pub fn project(&self) -> Multigraph {
        Multigraph::new(
            self.n,
            self.pairs.iter().map(|&(a, b)| (self.owner(a), self.owner(b))),
        )
        .expect("half-edge owners are in range")
    }
}

fn check_params(n: usize, d: usize) -> Result<()> {
    if n < 2 || d < 1 {
        return Err(Error::InvalidParameters(format!(
            "need n >= 2 and d >= 1, got n={n}, d={d}"
        )));
    }
    if (n * d) % 2 == 1 {
        return Err(Error::OddDegreeSum { n, d });
    }
    Ok(())
}

/// Pool of half-edges consumed by sequential uniform pairing: pop one
/// half-edge, pair it with a uniformly chosen remaining one. The pool keeps
/// every half-edge in its buffer so that it can be refilled in O(1); the
/// resulting matching is uniform whatever order the buffer is in.
struct HalfEdgePool {
    buf: Vec<usize>,
    len: usize,
}

impl HalfEdgePool {
    fn new(size: usize) -> Self {
        HalfEdgePool {
            buf: (0..size).collect(),
            len: size,
        }
    }

    fn refill(&mut self) {
        self.len = self.buf.len();
    }

    fn next_pair(&mut self, rng: &mut Rng) -> Option<(usize, usize)> {
        if self.len < 2 {
            return None;
        }
        self.len -= 1;
        let a = self.buf[self.len];
        let j = rng.random_range(0..self.len);
        self.len -= 1;
        self.buf.swap(j, self.len);
        Some((a, self.buf[self.len]))
    }
}

/// Uniform perfect matching on `n * d` half-edges.
pub fn sample_matching(n: usize, d: usize, rng: &mut Rng) -> Result<HalfEdgeMatching> {
    check_params(n, d)?;
    let mut pool = HalfEdgePool::new(n * d);
    let mut pairs = Vec::with_capacity(n * d / 2);
    while let Some(p) = pool.next_pair(rng) {
        pairs.push(p);
    }
    Ok(HalfEdgeMatching { n, d, pairs })
}

/// Configuration-model multigraph: the projection of a uniform matching.
pub fn sample_configuration(n: usize, d: usize, rng: &mut Rng) -> Result<Multigraph> {
    Ok(sample_matching(n, d, rng)?.project())
}

/// Uniform simple d-regular graph by rejection from the configuration model.
///
/// An attempt is abandoned as soon as a loop or a repeated edge appears,
/// which rejects exactly the matchings whose projection is not simple.
/// Returns the graph and the number of attempts used (including the
/// accepted one).
///
/// When `d > (n - 1) / 2` the complement, a uniform `(n - 1 - d)`-regular
/// graph, is sampled instead; complementation is a bijection so the result
/// is still uniform.
pub fn sample_simple_regular(
    n: usize,
    d: usize,
    rng: &mut Rng,
    max_attempts: usize,
) -> Result<(Graph, usize)> {
    check_params(n, d)?;
    if d >= n {
        return Err(Error::InvalidParameters(format!(
            "simple {d}-regular graph needs n > d, got n={n}"
        )));
    }
    let co = n - 1 - d;
    if co < d {
        let (h, attempts) = if co == 0 {
            (Graph::from_edges(n, [])?, 1)
        } else {
            rejection_sample(n, co, rng, max_attempts)?
        };
        let edges: Vec<_> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .filter(|&(u, v)| !h.has_edge(u, v))
            .collect();
        return Ok((Graph::from_edges(n, edges)?, attempts));
    }
    rejection_sample(n, d, rng, max_attempts)
}

fn rejection_sample(
    n: usize,
    d: usize,
    rng: &mut Rng,
    max_attempts: usize,
) -> Result<(Graph, usize)> {
    let mut pool = HalfEdgePool::new(n * d);
    let mut adj: Vec<Vec<usize>> = vec![Vec::with_capacity(d); n];
    let mut touched: Vec<usize> = Vec::with_capacity(n);
    for attempt in 1..=max_attempts {
        for &v in &touched {
            adj[v].clear();
        }
        touched.clear();
        pool.refill();
        let mut simple = true;
        while let Some((a, b)) = pool.next_pair(rng) {
            let (u, v) = (a / d, b / d);
            if u == v || adj[u].contains(&v) {
                simple = false;
                break;
            }
            for (x, y) in [(u, v), (v, u)] {
                if adj[x].is_empty() {
                    touched.push(x);
                }
                adj[x].push(y);
            }
        }
        if simple {
            let g = Graph::from_edges(
                n,
                adj.iter()
                    .enumerate()
                    .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v))),
            )?;
            return Ok((g, attempt));
        }
    }
    Err(Error::SamplerExhausted {
        attempts: max_attempts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::complete;
    use crate::rng::rng_from_seed;

    #[test]
    fn odd_degree_sum_rejected() {
        let mut rng = rng_from_seed(1);
        assert_eq!(
            sample_configuration(3, 3, &mut rng).unwrap_err(),
            Error::OddDegreeSum { n: 3, d: 3 }
        );
    }

    #[test]
    fn two_vertices_one_edge() {
        let mut rng = rng_from_seed(2);
        for _ in 0..10 {
            let g = sample_configuration(2, 1, &mut rng).unwrap();
            assert_eq!(g.edges(), &[(0, 1)]);
        }
    }

    #[test]
    fn degree_sums_match() {
        let mut rng = rng_from_seed(3);
        for &(n, d) in &[(10, 3), (7, 4), (50, 5), (9, 2)] {
            let g = sample_configuration(n, d, &mut rng).unwrap();
            assert_eq!(g.degree_sum(), n * d);
            assert!((0..n).all(|v| g.degree(v) == d));
        }
    }

    #[test]
    fn unique_simple_graphs() {
        let mut rng = rng_from_seed(4);
        let (tri, _) = sample_simple_regular(3, 2, &mut rng, 10_000).unwrap();
        assert_eq!(tri, complete(3));
        let (k10, _) = sample_simple_regular(10, 9, &mut rng, 1_000_000).unwrap();
        assert_eq!(k10, complete(10));
    }

    #[test]
    fn exhausted_sampler_reports_attempts() {
        let mut rng = rng_from_seed(5);
        // K_10 is accepted with probability about 1e-18 per attempt
        // acceptance probability is about e^{-63/4} per attempt
        assert_eq!(
            sample_simple_regular(40, 8, &mut rng, 3).unwrap_err(),
            Error::SamplerExhausted { attempts: 3 }
        );
        assert!(sample_simple_regular(4, 4, &mut rng, 3).is_err());
    }

    #[test]
    fn sampled_graphs_are_simple_and_regular() {
        let mut rng = rng_from_seed(6);
        for &(n, d) in &[(20, 3), (30, 4), (100, 5), (12, 6), (13, 10), (9, 6)] {
            let (g, attempts) = sample_simple_regular(n, d, &mut rng, 1_000_000).unwrap();
            assert!(attempts >= 1);
            assert_eq!(g.regular_degree(), Some(d));
            assert_eq!(g.num_edges(), n * d / 2);
        }
    }
}
