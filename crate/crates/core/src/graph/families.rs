use super::Graph;

/// Complete graph K_n.
pub fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
        .expect("complete graph is simple")
}

/// Cycle C_n, n >= 3.
pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3, "cycle needs at least 3 vertices");
    Graph::from_edges(n, (0..n).map(|u| (u, (u + 1) % n))).expect("cycle is simple")
}

/// Path on n vertices, 0 - 1 - ... - (n-1).
pub fn path(n: usize) -> Graph {
    Graph::from_edges(n, (1..n).map(|u| (u - 1, u))).expect("path is simple")
}

/// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10, spokes i - i+5.
pub fn petersen() -> Graph {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    Graph::from_edges(10, outer.chain(spokes).chain(inner)).expect("Petersen graph is simple")
}

/// Disjoint union; vertices of `b` are shifted by `a.n()`.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.n();
    Graph::from_edges(
        a.n() + b.n(),
        a.edges().chain(b.edges().map(|(u, v)| (u + shift, v + shift))),
    )
    .expect("union of simple graphs is simple")
}
