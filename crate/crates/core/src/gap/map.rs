use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::io::parse_pair;

/// A map `f: V(G) -> V(H)` stored as image indices in `0..m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct VertexMap {
    values: Vec<usize>,
    m: usize,
}

impl VertexMap {
    pub fn new(values: Vec<usize>, m: usize) -> Result<Self> {
        if let Some((vertex, &value)) = values.iter().enumerate().find(|(_, &x)| x >= m) {
            return Err(Error::ImageOutOfRange { vertex, value, m });
        }
        Ok(VertexMap { values, m })
    }

    pub fn constant(n: usize, m: usize, image: usize) -> Result<Self> {
        Self::new(vec![image; n], m)
    }

    /// `v -> v mod m`.
    pub fn balanced(n: usize, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidParameters("map needs m >= 1".into()));
        }
        Self::new((0..n).map(|v| v % m).collect(), m)
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn values(&self) -> &[usize] {
        &self.values
    }

    pub fn get(&self, v: usize) -> usize {
        self.values[v]
    }

    pub(crate) fn set(&mut self, v: usize, image: usize) {
        debug_assert!(image < self.m);
        self.values[v] = image;
    }

    pub fn is_constant(&self) -> bool {
        self.values.windows(2).all(|w| w[0] == w[1])
    }

    /// `S_i = f^{-1}(i)` for every image `i`.
    pub fn preimages(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.m];
        for (v, &i) in self.values.iter().enumerate() {
            out[i].push(v);
        }
        out
    }

    /// The map `v -> f(perm^{-1}(v))`, i.e. `f` transported along a relabeling
    /// `v -> perm[v]` of the domain.
    pub fn permute_domain(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.n() {
            return Err(Error::SizeMismatch {
                expected: self.n(),
                found: perm.len(),
            });
        }
        let mut values = vec![0; self.n()];
        for (v, &p) in perm.iter().enumerate() {
            values[p] = self.values[v];
        }
        Self::new(values, self.m)
    }
}

/// Preimage sizes `s_i = |f^{-1}(i)|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionStats {
    pub sizes: Vec<usize>,
    pub max_size: usize,
}

pub fn partition_stats(f: &VertexMap) -> PartitionStats {
    let mut sizes = vec![0; f.m()];
    for &i in f.values() {
        sizes[i] += 1;
    }
    let max_size = sizes.iter().copied().max().unwrap_or(0);
    PartitionStats { sizes, max_size }
}

/// Largest preimage size allowed in the class `F(delta)`: `floor(n / delta)`.
/// A quotient within `1e-9` below an integer counts as that integer, so
/// `delta = n / s` (rounded) still admits preimages of size `s`.
pub fn class_capacity(n: usize, delta: f64) -> usize {
    (n as f64 / delta + 1e-9).floor() as usize
}

/// Whether every preimage has size at most `n / delta`.
pub fn in_function_class(f: &VertexMap, delta: f64) -> bool {
    partition_stats(f).max_size <= class_capacity(f.n(), delta)
}

/// Parses `"n m"` followed by `n` image indices, one per line.
pub fn read_vertex_map(text: &str) -> Result<VertexMap> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hl, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        msg: "missing header".into(),
    })?;
    let (n, m) = parse_pair(hl, header)?;
    let mut values = Vec::with_capacity(n);
    let mut last = hl;
    for (ln, line) in lines {
        last = ln;
        let x: usize = line.parse().map_err(|_| Error::Parse {
            line: ln,
            msg: format!("invalid image index {line:?}"),
        })?;
        if x >= m {
            return Err(Error::Parse {
                line: ln,
                msg: format!("image {x} out of range 0..{m}"),
            });
        }
        values.push(x);
    }
    if values.len() != n {
        return Err(Error::Parse {
            line: last,
            msg: format!("header declares {n} vertices, found {}", values.len()),
        });
    }
    VertexMap::new(values, m)
}

pub fn write_vertex_map(f: &VertexMap) -> String {
    let mut out = String::new();
    writeln!(out, "{} {}", f.n(), f.m()).unwrap();
    for x in f.values() {
        writeln!(out, "{x}").unwrap();
    }
    out
}
