//! Reference implementations used as oracles. They deliberately share no
//! code with the library beyond reading a graph's edge list.

#![allow(dead_code)]

use std::cmp::Ordering;

use nlgap::graph::Graph;

pub const INF: u64 = u64::MAX / 4;

/// Floyd-Warshall on the edge list.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<u64>> {
    let n = g.n();
    let mut d = vec![vec![INF; n]; n];
    for (v, row) in d.iter_mut().enumerate() {
        row[v] = 0;
    }
    for (u, v) in g.edges() {
        d[u][v] = 1;
        d[v][u] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k] + d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

pub fn adjacency(g: &Graph) -> Vec<Vec<bool>> {
    let mut a = vec![vec![false; g.n()]; g.n()];
    for (u, v) in g.edges() {
        a[u][v] = true;
        a[v][u] = true;
    }
    a
}

/// `(sum over ordered pairs, sum over directed edges)` of squared host
/// distances, by double loops.
pub fn sums(adj: &[Vec<bool>], dist: &[Vec<u64>], f: &[usize]) -> (u64, u64) {
    let n = f.len();
    let (mut pair, mut edge) = (0, 0);
    for u in 0..n {
        for v in 0..n {
            let x = dist[f[u]][f[v]];
            pair += x * x;
            if adj[u][v] {
                edge += x * x;
            }
        }
    }
    (pair, edge)
}

/// Orders `a.0 / a.1` against `b.0 / b.1`, with zero denominators lowest.
pub fn cmp_ratio(a: (u64, u64), b: (u64, u64)) -> Ordering {
    match (a.1, b.1) {
        (0, 0) => Ordering::Equal,
        (0, _) => Ordering::Less,
        (_, 0) => Ordering::Greater,
        _ => (u128::from(a.0) * u128::from(b.1)).cmp(&(u128::from(b.0) * u128::from(a.1))),
    }
}

/// Exact `sup_f pair/edge` by enumerating all `m^n` maps.
pub fn brute_force_sup(g: &Graph, host: &Graph) -> (u64, u64) {
    let adj = adjacency(g);
    let dist = floyd_warshall(host);
    let (n, m) = (g.n(), host.n());
    let mut f = vec![0usize; n];
    let mut best = (0, 0);
    loop {
        let s = sums(&adj, &dist, &f);
        if cmp_ratio(s, best) == Ordering::Greater {
            best = s;
        }
        let mut k = 0;
        while k < n {
            f[k] += 1;
            if f[k] < m {
                break;
            }
            f[k] = 0;
            k += 1;
        }
        if k == n {
            return best;
        }
    }
}

/// `(d / n) pair / edge` from exact sums.
pub fn gamma_from(n: usize, d: usize, (pair, edge): (u64, u64)) -> Option<f64> {
    (edge > 0).then(|| d as f64 * pair as f64 / (n as f64 * edge as f64))
}
