//! Randomized invariants across modules.

use proptest::prelude::*;

use nlgap::euclid::ordered_pair_sum;
use nlgap::gap::{
    gamma_real, gamma_value, gamma_vector, in_function_class, partition_stats, read_vertex_map,
    write_vertex_map, VertexMap,
};
use nlgap::graph::{
    petersen, read_edge_list, sample_configuration, sample_simple_regular, write_edge_list, Graph,
};
use nlgap::metric::{all_pairs_distances, bfs_distances};
use nlgap::rng::rng_from_seed;
use nlgap::spectral::{hilbert_expander_check, laplacian_spectrum};

/// `(n, d)` with `n d` even and `d < n`.
fn regular_params(max_n: usize) -> impl Strategy<Value = (usize, usize)> {
    (1usize..=5, 6usize..=max_n).prop_map(|(d, n)| if n * d % 2 == 1 { (n + 1, d) } else { (n, d) })
}

fn simple(n: usize, d: usize, seed: u64) -> Graph {
    sample_simple_regular(n, d, &mut rng_from_seed(seed), 100_000).unwrap().0
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn configuration_degree_sum((n, d) in regular_params(200), seed: u64) {
        let g = sample_configuration(n, d, &mut rng_from_seed(seed)).unwrap();
        prop_assert_eq!(g.degree_sum(), n * d);
        prop_assert!((0..n).all(|v| g.degree(v) == d));
    }

    #[test]
    fn simple_samples_are_simple_and_regular((n, d) in regular_params(120), seed: u64) {
        let g = simple(n, d, seed);
        prop_assert_eq!(g.regular_degree(), Some(d));
        for v in 0..n {
            prop_assert!(!g.neighbors(v).contains(&v));
            prop_assert!(g.neighbors(v).windows(2).all(|w| w[0] < w[1]));
            for &u in g.neighbors(v) {
                prop_assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn switching_preserves_degrees((n, d) in regular_params(80), seed: u64, steps in 1usize..200) {
        let mut g = simple(n, d, seed);
        let before = g.degrees();
        let mut rng = rng_from_seed(seed ^ 1);
        for _ in 0..steps {
            g.random_switch(&mut rng);
        }
        prop_assert_eq!(g.degrees(), before);
        prop_assert_eq!(g.num_edges(), n * d / 2);
    }

    #[test]
    fn edge_list_round_trip((n, d) in regular_params(100), seed: u64) {
        let text = write_edge_list(&simple(n, d, seed));
        prop_assert_eq!(write_edge_list(&read_edge_list(&text).unwrap()), text);
    }

    #[test]
    fn distances_form_a_metric((n, d) in regular_params(60), seed: u64) {
        let g = simple(n, d, seed);
        let dist = all_pairs_distances(&g);
        prop_assert!(dist.check_metric().is_ok());
        for s in 0..n {
            prop_assert_eq!(dist.row(s), &bfs_distances(&g, s)[..]);
        }
    }

    #[test]
    fn gamma_at_least_a_quarter(
        (n, d) in regular_params(80),
        seed: u64,
        images in prop::collection::vec(0usize..10, 80),
    ) {
        let g = simple(n, d, seed);
        let f = VertexMap::new(images[..n.min(80)].iter().copied().chain(std::iter::repeat(0)).take(n).collect(), 10).unwrap();
        let r = gamma_value(&g, &all_pairs_distances(&petersen()), &f).unwrap();
        if let Some(gamma) = r.gamma {
            prop_assert!(gamma >= 0.25 - 1e-12);
        } else {
            prop_assert_eq!(r.edge_sum, 0.0);
        }
    }

    #[test]
    fn real_maps_respect_the_spectral_gap(
        (n, d) in regular_params(60),
        seed: u64,
        values in prop::collection::vec(-10.0f64..10.0, 60),
    ) {
        let g = simple(n, d, seed);
        let s = laplacian_spectrum(&g).unwrap();
        let f = &values[..n.min(60)];
        prop_assume!(f.len() == n);
        if let Some(gamma) = gamma_real(&g, f).unwrap().gamma {
            if s.lambda_1() > 1e-9 {
                prop_assert!(gamma <= 1.0 / s.lambda_1() * (1.0 + 1e-9));
            }
        }
        let points: Vec<Vec<f64>> = f.iter().map(|&x| vec![x, -x / 2.0]).collect();
        prop_assert!(hilbert_expander_check(&g, s.lambda_1(), &points).unwrap() >= -1e-9);
        let v = gamma_vector(&g, &points).unwrap();
        prop_assert!((v.pair_sum - ordered_pair_sum(&points).unwrap()).abs() <= 1e-9 * v.pair_sum.max(1.0));
    }

    #[test]
    fn vertex_map_round_trip(images in prop::collection::vec(0usize..7, 1..100)) {
        let f = VertexMap::new(images, 7).unwrap();
        let text = write_vertex_map(&f);
        prop_assert_eq!(read_vertex_map(&text).unwrap(), f.clone());
        let stats = partition_stats(&f);
        prop_assert_eq!(stats.sizes.iter().sum::<usize>(), f.n());
        prop_assert!(in_function_class(&f, f.n() as f64 / stats.max_size as f64));
    }
}
