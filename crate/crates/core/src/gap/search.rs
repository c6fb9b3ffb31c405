//! Adversarial lower estimates of `gamma(G, d_H) = sup_f gamma(G, d_H, f)`.
//!
//! The search combines uniform random maps with best-improvement hill
//! climbing over single-vertex image reassignments. Scores are kept as exact
//! integer sums so comparisons (and tie-breaking) do not depend on rounding.

use std::cmp::Ordering;

use rand::Rng as _;
use rand::seq::SliceRandom;
use rayon::prelude::*;

use super::gamma::{check_map, integer_sums, regular_degree, GammaReport};
use super::map::{class_capacity, partition_stats, VertexMap};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::metric::DistanceMatrix;
use crate::rng::{child_seed, rng_from_seed, Rng};

#[derive(Debug, Clone, PartialEq)]
pub struct SearchStrategy {
    /// Number of hill climbs. The first climb starts from the best random
    /// sample when there is one.
    pub restarts: usize,
    /// Number of random maps evaluated before climbing.
    pub random_samples: usize,
    /// Move budget per climb.
    pub max_moves: usize,
    /// Restrict the search to the class `F(delta)`.
    pub class_delta: Option<f64>,
    /// Enumerate all `m^n` maps instead when `m^n` is at most this.
    pub exhaustive_limit: u64,
    pub seed: u64,
}

impl Default for SearchStrategy {
    fn default() -> Self {
        SearchStrategy {
            restarts: 4,
            random_samples: 100,
            max_moves: 100_000,
            class_delta: None,
            exhaustive_limit: 0,
            seed: 0,
        }
    }
}

/// Exact score `(pair_sum, edge_sum)`; compares by the ratio, with the
/// degenerate `edge_sum = 0` below everything else.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Score {
    pair: u64,
    edge: u64,
}

impl Score {
    fn cmp_ratio(self, other: Score) -> Ordering {
        match (self.edge, other.edge) {
            (0, 0) => Ordering::Equal,
            (0, _) => Ordering::Less,
            (_, 0) => Ordering::Greater,
            _ => (u128::from(self.pair) * u128::from(other.edge))
                .cmp(&(u128::from(other.pair) * u128::from(self.edge))),
        }
    }

    fn beats(self, other: Score) -> bool {
        self.cmp_ratio(other) == Ordering::Greater
    }
}

/// One hill climb.
#[derive(Debug, Clone)]
pub struct Climb {
    pub restart: usize,
    /// Gamma after each accepted move, starting with the initial map
    /// (degenerate states are not recorded).
    pub trace: Vec<f64>,
    pub moves: usize,
    pub map: VertexMap,
    pub report: GammaReport,
}

#[derive(Debug, Clone)]
pub struct SupEstimate {
    pub best: VertexMap,
    pub report: GammaReport,
    /// Every random sample with its report, in sampling order.
    pub samples: Vec<(VertexMap, GammaReport)>,
    pub climbs: Vec<Climb>,
    /// Number of maps enumerated when the exhaustive branch ran.
    pub enumerated: Option<u64>,
}

impl SupEstimate {
    pub fn found_nondegenerate(&self) -> bool {
        !self.report.degenerate()
    }

    /// Gamma of the best random sample, if any sample was nondegenerate.
    pub fn best_sample_gamma(&self) -> Option<f64> {
        self.samples
            .iter()
            .filter_map(|(_, r)| r.gamma)
            .fold(None, |acc, g| Some(acc.map_or(g, |a: f64| a.max(g))))
    }

    /// All maps the search looked at and kept: samples, then climb results.
    pub fn searched_maps(&self) -> impl Iterator<Item = (&VertexMap, &GammaReport)> {
        self.samples
            .iter()
            .map(|(f, r)| (f, r))
            .chain(self.climbs.iter().map(|c| (&c.map, &c.report)))
    }
}

/// Incremental state for single-vertex moves.
struct ClimbState<'a> {
    g: &'a Graph,
    m: usize,
    /// Squared distances, row-major `m x m`.
    sq: &'a [u64],
    map: VertexMap,
    sizes: Vec<usize>,
    /// `row[i] = sum_j sizes[j] * sq[i][j]`.
    row: Vec<u64>,
    score: Score,
}

impl<'a> ClimbState<'a> {
    fn new(g: &'a Graph, sq: &'a [u64], m: usize, map: VertexMap) -> Self {
        let sizes = partition_stats(&map).sizes;
        let row: Vec<u64> = (0..m)
            .map(|i| (0..m).map(|j| sizes[j] as u64 * sq[i * m + j]).sum())
            .collect();
        let pair = (0..m).map(|i| sizes[i] as u64 * row[i]).sum();
        let edge = g
            .edges()
            .map(|(u, v)| 2 * sq[map.get(u) * m + map.get(v)])
            .sum();
        ClimbState {
            g,
            m,
            sq,
            map,
            sizes,
            row,
            score: Score { pair, edge },
        }
    }

    /// Score after moving `v` to image `b`.
    fn score_after(&self, v: usize, b: usize) -> Score {
        let m = self.m;
        let a = self.map.get(v);
        let pair = self.score.pair as i128 - 2 * self.row[a] as i128 + 2 * self.row[b] as i128
            - 2 * self.sq[a * m + b] as i128;
        let mut edge = self.score.edge as i128;
        for &w in self.g.neighbors(v) {
            let c = self.map.get(w);
            edge += 2 * (self.sq[b * m + c] as i128 - self.sq[a * m + c] as i128);
        }
        Score {
            pair: pair as u64,
            edge: edge as u64,
        }
    }

    fn apply(&mut self, v: usize, b: usize, score: Score) {
        let m = self.m;
        let a = self.map.get(v);
        for i in 0..m {
            self.row[i] = self.row[i] - self.sq[i * m + a] + self.sq[i * m + b];
        }
        self.sizes[a] -= 1;
        self.sizes[b] += 1;
        self.map.set(v, b);
        self.score = score;
    }

    /// Best strictly improving move; ties go to the lowest vertex, then the
    /// lowest image.
    fn best_move(&self, capacity: usize) -> Option<(usize, usize, Score)> {
        let mut best: Option<(usize, usize, Score)> = None;
        for v in 0..self.g.n() {
            let a = self.map.get(v);
            for b in (0..self.m).filter(|&b| b != a && self.sizes[b] < capacity) {
                let s = self.score_after(v, b);
                let reference = best.map_or(self.score, |(_, _, bs)| bs);
                if s.beats(reference) {
                    best = Some((v, b, s));
                }
            }
        }
        best
    }
}

fn report_of(n: usize, d: usize, s: Score) -> GammaReport {
    GammaReport::new(n, d, s.pair as f64, s.edge as f64)
}

#[allow(clippy::too_many_arguments)]
fn climb(
    g: &Graph,
    d: usize,
    sq: &[u64],
    m: usize,
    start: VertexMap,
    capacity: usize,
    max_moves: usize,
    restart: usize,
) -> Climb {
    let mut state = ClimbState::new(g, sq, m, start);
    let mut trace = Vec::new();
    let push = |trace: &mut Vec<f64>, s: Score| {
        if let Some(gm) = report_of(g.n(), d, s).gamma {
            trace.push(gm);
        }
    };
    push(&mut trace, state.score);
    let mut moves = 0;
    while moves < max_moves {
        let Some((v, b, s)) = state.best_move(capacity) else {
            break;
        };
        state.apply(v, b, s);
        moves += 1;
        push(&mut trace, s);
    }
    Climb {
        restart,
        trace,
        moves,
        report: report_of(g.n(), d, state.score),
        map: state.map,
    }
}

/// Random map: uniform when unrestricted, otherwise each vertex (in random
/// order) picks a uniform image among those with room left.
fn random_map(n: usize, m: usize, capacity: usize, rng: &mut Rng) -> VertexMap {
    if capacity >= n {
        let values = (0..n).map(|_| rng.random_range(0..m)).collect();
        return VertexMap::new(values, m).expect("images in range");
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut room = vec![capacity; m];
    let mut open: Vec<usize> = (0..m).collect();
    let mut values = vec![0; n];
    for v in order {
        let k = rng.random_range(0..open.len());
        let i = open[k];
        values[v] = i;
        room[i] -= 1;
        if room[i] == 0 {
            open.swap_remove(k);
        }
    }
    VertexMap::new(values, m).expect("images in range")
}

/// Odometer enumeration of `0..m` valued words of length `n`.
fn for_each_map(n: usize, m: usize, mut visit: impl FnMut(&[usize])) -> u64 {
    let mut word = vec![0usize; n];
    let mut count = 0;
    loop {
        visit(&word);
        count += 1;
        let mut k = n;
        loop {
            if k == 0 {
                return count;
            }
            k -= 1;
            word[k] += 1;
            if word[k] < m {
                break;
            }
            word[k] = 0;
        }
    }
}

fn map_space_size(n: usize, m: usize) -> Option<u64> {
    (m as u64).checked_pow(u32::try_from(n).ok()?)
}

/// Searches for a map with large `gamma(G, d_H, f)`; the returned value is a
/// lower bound on the supremum (exact when the exhaustive branch ran).
pub fn gamma_sup_estimate(
    g: &Graph,
    dist: &DistanceMatrix,
    strategy: &SearchStrategy,
) -> Result<SupEstimate> {
    let d = regular_degree(g)?;
    let (n, m) = (g.n(), dist.len());
    if m == 0 {
        return Err(Error::TooFewPoints(0));
    }
    if !dist.is_connected() {
        return Err(Error::Disconnected);
    }
    let capacity = match strategy.class_delta {
        Some(delta) if delta <= 0.0 => {
            return Err(Error::InvalidParameters(format!("delta must be positive, got {delta}")))
        }
        Some(delta) => class_capacity(n, delta),
        None => n,
    };
    if capacity.saturating_mul(m) < n {
        return Err(Error::EmptyClass(format!(
            "{m} images with at most {capacity} preimages each cannot cover {n} vertices"
        )));
    }
    let exhaustive = map_space_size(n, m).is_some_and(|s| s <= strategy.exhaustive_limit);
    if !exhaustive && strategy.restarts == 0 && strategy.random_samples == 0 {
        return Err(Error::EmptyStrategy("no restarts, samples or enumeration"));
    }
    let sq: Vec<u64> = (0..m * m)
        .map(|k| {
            let x = u64::from(dist.get(k / m, k % m).expect("connected"));
            x * x
        })
        .collect();

    if exhaustive {
        let mut best: Option<(Vec<usize>, Score)> = None;
        let enumerated = for_each_map(n, m, |word| {
            let mut sizes = vec![0; m];
            for &i in word {
                sizes[i] += 1;
            }
            if sizes.iter().any(|&s| s > capacity) {
                return;
            }
            let f = VertexMap::new(word.to_vec(), m).expect("images in range");
            let (pair, edge) = integer_sums(g, dist, &f).expect("validated inputs");
            let s = Score { pair, edge };
            if best.as_ref().is_none_or(|(_, bs)| s.beats(*bs)) {
                best = Some((word.to_vec(), s));
            }
        });
        let (word, score) = best.expect("class is nonempty");
        return Ok(SupEstimate {
            best: VertexMap::new(word, m)?,
            report: report_of(n, d, score),
            samples: Vec::new(),
            climbs: Vec::new(),
            enumerated: Some(enumerated),
        });
    }

    let mut sample_rng = rng_from_seed(child_seed(strategy.seed, 0));
    let mut samples = Vec::with_capacity(strategy.random_samples);
    let mut best_sample: Option<(usize, Score)> = None;
    for k in 0..strategy.random_samples {
        let f = random_map(n, m, capacity, &mut sample_rng);
        check_map(g, dist, &f)?;
        let (pair, edge) = integer_sums(g, dist, &f)?;
        let s = Score { pair, edge };
        if best_sample.is_none_or(|(_, bs)| s.beats(bs)) {
            best_sample = Some((k, s));
        }
        samples.push((f, report_of(n, d, s)));
    }

    let climbs: Vec<Climb> = (0..strategy.restarts)
        .into_par_iter()
        .map(|r| {
            let start = match (r, best_sample) {
                (0, Some((k, _))) => samples[k].0.clone(),
                _ => {
                    let mut rng = rng_from_seed(child_seed(strategy.seed, r as u64 + 1));
                    random_map(n, m, capacity, &mut rng)
                }
            };
            climb(g, d, &sq, m, start, capacity, strategy.max_moves, r)
        })
        .collect();

    let mut best: Option<(VertexMap, Score)> =
        best_sample.map(|(k, s)| (samples[k].0.clone(), s));
    for c in &climbs {
        let s = Score {
            pair: c.report.pair_sum as u64,
            edge: c.report.edge_sum as u64,
        };
        if best.as_ref().is_none_or(|(_, bs)| s.beats(*bs)) {
            best = Some((c.map.clone(), s));
        }
    }
    let (best, score) = best.expect("at least one sample or climb");
    Ok(SupEstimate {
        best,
        report: report_of(n, d, score),
        samples,
        climbs,
        enumerated: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gap::gamma_value;
    use crate::graph::{complete, cycle, petersen};
    use crate::metric::all_pairs_distances;

    #[test]
    fn incremental_scores_match_recomputation() {
        let g = petersen();
        let h = all_pairs_distances(&cycle(5));
        let mut rng = rng_from_seed(9);
        let m = 5;
        let sq: Vec<u64> = (0..25)
            .map(|k| u64::from(h.get(k / 5, k % 5).unwrap()).pow(2))
            .collect();
        let mut state = ClimbState::new(&g, &sq, m, random_map(10, m, 10, &mut rng));
        for _ in 0..200 {
            let v = rng.random_range(0..10);
            let b = rng.random_range(0..m);
            if b == state.map.get(v) {
                continue;
            }
            let s = state.score_after(v, b);
            state.apply(v, b, s);
            let r = gamma_value(&g, &h, &state.map).unwrap();
            assert_eq!((s.pair as f64, s.edge as f64), (r.pair_sum, r.edge_sum));
        }
    }

    #[test]
    fn complete_graph_search_is_flat() {
        let g = complete(6);
        let h = all_pairs_distances(&cycle(4));
        let strategy = SearchStrategy {
            restarts: 2,
            random_samples: 10,
            ..SearchStrategy::default()
        };
        let est = gamma_sup_estimate(&g, &h, &strategy).unwrap();
        assert!((est.report.gamma.unwrap() - 5.0 / 6.0).abs() < 1e-12);
        for c in &est.climbs {
            assert_eq!(c.moves, 0);
            assert!(c.trace.iter().all(|&x| (x - 5.0 / 6.0).abs() < 1e-12));
        }
    }

    #[test]
    fn single_point_host_is_degenerate() {
        let h = all_pairs_distances(&Graph::from_edges(1, []).unwrap());
        let est = gamma_sup_estimate(&cycle(6), &h, &SearchStrategy::default()).unwrap();
        assert!(!est.found_nondegenerate());
    }

    #[test]
    fn empty_strategy_rejected() {
        let h = all_pairs_distances(&complete(2));
        let s = SearchStrategy {
            restarts: 0,
            random_samples: 0,
            ..SearchStrategy::default()
        };
        assert!(matches!(
            gamma_sup_estimate(&cycle(6), &h, &s),
            Err(Error::EmptyStrategy(_))
        ));
    }

    #[test]
    fn climbs_are_monotone_and_respect_class() {
        let mut rng = rng_from_seed(10);
        let g = crate::graph::sample_simple_regular(60, 3, &mut rng, 10_000).unwrap().0;
        let h = all_pairs_distances(&petersen());
        let s = SearchStrategy {
            restarts: 3,
            random_samples: 20,
            class_delta: Some(5.0),
            seed: 4,
            ..SearchStrategy::default()
        };
        let est = gamma_sup_estimate(&g, &h, &s).unwrap();
        for c in &est.climbs {
            assert!(c.trace.windows(2).all(|w| w[1] >= w[0]));
            assert!(crate::gap::in_function_class(&c.map, 5.0));
        }
        for (f, _) in &est.samples {
            assert!(crate::gap::in_function_class(f, 5.0));
        }
        assert!(est.report.gamma.unwrap() >= est.best_sample_gamma().unwrap());
    }

    #[test]
    fn empty_class_rejected() {
        let h = all_pairs_distances(&complete(2));
        let s = SearchStrategy {
            class_delta: Some(3.0),
            ..SearchStrategy::default()
        };
        assert!(matches!(
            gamma_sup_estimate(&cycle(6), &h, &s),
            Err(Error::EmptyClass(_))
        ));
    }
}
