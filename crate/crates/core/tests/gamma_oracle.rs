//! gamma, its supremum and the near-pair counts against independent
//! double-loop oracles.

mod common;

use std::cmp::Ordering;

use rand::seq::SliceRandom;
use rand::Rng as _;

use nlgap::gap::{gamma_sup_estimate, gamma_value, near_pair_report, SearchStrategy, VertexMap};
use nlgap::graph::{complete, cycle, path, petersen, sample_simple_regular, Graph};
use nlgap::metric::all_pairs_distances;
use nlgap::rng::{rng_from_seed, Rng};

fn graph(n: usize, d: usize, rng: &mut Rng) -> Graph {
    sample_simple_regular(n, d, rng, 100_000).unwrap().0
}

fn random_map(n: usize, m: usize, rng: &mut Rng) -> VertexMap {
    VertexMap::new((0..n).map(|_| rng.random_range(0..m)).collect(), m).unwrap()
}

#[test]
fn gamma_matches_double_loop() {
    let mut rng = rng_from_seed(1);
    for (n, d) in [(10, 3), (20, 4), (31, 2), (40, 5)] {
        let g = graph(n, d, &mut rng);
        let adj = common::adjacency(&g);
        for host in [petersen(), cycle(7), path(5)] {
            let fw = common::floyd_warshall(&host);
            let dist = all_pairs_distances(&host);
            for _ in 0..20 {
                let f = random_map(n, host.n(), &mut rng);
                let (pair, edge) = common::sums(&adj, &fw, f.values());
                let r = gamma_value(&g, &dist, &f).unwrap();
                assert_eq!((r.pair_sum, r.edge_sum), (pair as f64, edge as f64));
                assert_eq!(r.gamma, common::gamma_from(n, d, (pair, edge)));
            }
        }
    }
}

#[test]
fn exhaustive_search_is_exact() {
    let mut rng = rng_from_seed(2);
    for (n, d) in [(6, 2), (6, 3), (7, 4), (8, 3)] {
        let g = graph(n, d, &mut rng);
        for host in [complete(2), path(3), cycle(4)] {
            let oracle = common::brute_force_sup(&g, &host);
            let m = host.n() as u64;
            let strategy = SearchStrategy {
                exhaustive_limit: m.pow(n as u32),
                ..SearchStrategy::default()
            };
            let est = gamma_sup_estimate(&g, &all_pairs_distances(&host), &strategy).unwrap();
            let got = (est.report.pair_sum as u64, est.report.edge_sum as u64);
            assert_eq!(common::cmp_ratio(got, oracle), Ordering::Equal, "n={n} d={d} m={m}");
            // the reported map really attains the value
            let fw = common::floyd_warshall(&host);
            assert_eq!(common::sums(&common::adjacency(&g), &fw, est.best.values()), got);
        }
    }
}

#[test]
fn heuristic_search_is_a_lower_bound() {
    let mut rng = rng_from_seed(3);
    for seed in 0..10 {
        let g = graph(8, 3, &mut rng);
        let host = cycle(3);
        let oracle = common::brute_force_sup(&g, &host);
        let strategy = SearchStrategy {
            restarts: 3,
            random_samples: 10,
            seed,
            ..SearchStrategy::default()
        };
        let est = gamma_sup_estimate(&g, &all_pairs_distances(&host), &strategy).unwrap();
        let got = (est.report.pair_sum as u64, est.report.edge_sum as u64);
        assert_ne!(common::cmp_ratio(got, oracle), Ordering::Greater);
        for c in &est.climbs {
            assert!(c.trace.windows(2).all(|w| w[0] <= w[1]), "climb not monotone");
        }
    }
}

#[test]
fn complete_graph_identity() {
    let mut rng = rng_from_seed(4);
    for n in [5, 12, 33] {
        let g = complete(n);
        let dist = all_pairs_distances(&petersen());
        for _ in 0..10 {
            let f = random_map(n, 10, &mut rng);
            if let Some(gamma) = gamma_value(&g, &dist, &f).unwrap().gamma {
                assert!((gamma - (n - 1) as f64 / n as f64).abs() < 1e-12);
            }
        }
    }
}

#[test]
fn relabeling_the_domain_preserves_gamma() {
    let mut rng = rng_from_seed(5);
    let g = graph(60, 3, &mut rng);
    let dist = all_pairs_distances(&petersen());
    for _ in 0..20 {
        let f = random_map(60, 10, &mut rng);
        let mut perm: Vec<usize> = (0..60).collect();
        perm.shuffle(&mut rng);
        let g2 = g.permute(&perm).unwrap();
        let f2 = f.permute_domain(&perm).unwrap();
        let a = gamma_value(&g, &dist, &f).unwrap();
        let b = gamma_value(&g2, &dist, &f2).unwrap();
        assert_eq!((a.pair_sum, a.edge_sum, a.gamma), (b.pair_sum, b.edge_sum, b.gamma));
    }
}

#[test]
fn near_pair_counts_two_ways() {
    let mut rng = rng_from_seed(6);
    let g = graph(50, 3, &mut rng);
    let host = cycle(9);
    let fw = common::floyd_warshall(&host);
    let adj = common::adjacency(&g);
    let dist = all_pairs_distances(&host);
    for alpha in [0.25, 0.5, 0.75, 1.0] {
        let f = random_map(50, 9, &mut rng);
        let r = near_pair_report(&g, &dist, &f, alpha, 0.25).unwrap();
        let radius = alpha * 4.0;
        let near = |u: usize, v: usize| fw[f.get(u)][f.get(v)] as f64 <= radius;
        let pairs = (0..50).flat_map(|u| (0..50).map(move |v| (u, v)));
        let near_pairs = pairs.clone().filter(|&(u, v)| near(u, v)).count() as u64;
        let near_edges = pairs.filter(|&(u, v)| adj[u][v] && near(u, v)).count() as u64;
        assert_eq!((r.near_pair_count, r.crossing_edge_count), (near_pairs, near_edges));
        assert!(r.crossing_edge_count <= 2 * g.num_edges() as u64);
        // directed edges outside the near set each contribute more than (alpha D)^2
        let edge_sum = gamma_value(&g, &dist, &f).unwrap().edge_sum;
        let far = (2 * g.num_edges() as u64 - near_edges) as f64;
        assert!(edge_sum >= far * radius * radius);
        assert_eq!(r.below_threshold(), near_edges as f64 <= 0.25 * 150.0);
    }
}
