//! Randomized Bourgain embedding of a finite metric into Euclidean space.
//!
//! For scale `t = 1..=T` (`T = floor(log2 m)`) and repetition `j = 1..=q`, a
//! subset `A_{t,j}` keeps each point independently with probability `2^-t`;
//! the `(t, j)` coordinate of `x` is `d(x, A_{t,j})`, or 0 when the subset is
//! empty. Every coordinate is 1-Lipschitz, so the embedding never expands a
//! distance by more than `sqrt(K)`, `K = T q`.

use std::fmt::Write as _;

use rand::Rng as _;

use crate::error::{Error, Result};
use crate::euclid::squared_distance;
use crate::gap::VertexMap;
use crate::metric::DistanceMatrix;
use crate::rng::rng_from_seed;

#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    points: Vec<Vec<f64>>,
    scales: usize,
    repetitions: usize,
    scale_factor: f64,
    seed: Option<u64>,
}

impl Embedding {
    /// Wraps explicit points (all of the same dimension).
    pub fn from_points(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = crate::euclid::common_dimension(&points)?;
        Ok(Embedding {
            points,
            scales: 1,
            repetitions: dim,
            scale_factor: 1.0,
            seed: None,
        })
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Target dimension `K`.
    pub fn dimension(&self) -> usize {
        self.points.first().map_or(0, Vec::len)
    }

    pub fn scales(&self) -> usize {
        self.scales
    }

    pub fn repetitions(&self) -> usize {
        self.repetitions
    }

    pub fn scale_factor(&self) -> f64 {
        self.scale_factor
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// One row per point, tab-separated coordinates.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            let cells: Vec<String> = p.iter().map(|x| x.to_string()).collect();
            writeln!(out, "{}", cells.join("\t")).unwrap();
        }
        out
    }
}

/// `ceil(4 log2 m)`.
pub fn default_repetitions(m: usize) -> usize {
    (4.0 * (m as f64).log2()).ceil().max(1.0) as usize
}

pub fn bourgain_embed(dist: &DistanceMatrix, seed: u64, repetitions: usize) -> Result<Embedding> {
    let m = dist.len();
    if m < 2 {
        return Err(Error::TooFewPoints(m));
    }
    if !dist.is_connected() {
        return Err(Error::Disconnected);
    }
    if repetitions == 0 {
        return Err(Error::InvalidParameters("need at least one repetition".into()));
    }
    let scales = m.ilog2() as usize;
    let mut rng = rng_from_seed(seed);
    let mut points = vec![Vec::with_capacity(scales * repetitions); m];
    let mut subset = Vec::with_capacity(m);
    for t in 1..=scales {
        let p = 0.5f64.powi(t as i32);
        for _ in 0..repetitions {
            subset.clear();
            subset.extend((0..m).filter(|_| rng.random_bool(p)));
            for (x, point) in points.iter_mut().enumerate() {
                let coord = subset
                    .iter()
                    .map(|&a| dist.get(x, a).expect("connected"))
                    .min()
                    .unwrap_or(0);
                point.push(f64::from(coord));
            }
        }
    }
    Ok(Embedding {
        points,
        scales,
        repetitions,
        scale_factor: 1.0,
        seed: Some(seed),
    })
}

/// Worst-case expansion and contraction of an embedding over distinct pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Distortion {
    /// `max |g(x) - g(y)| / d(x, y)`.
    pub max_expansion: f64,
    /// `max d(x, y) / |g(x) - g(y)|`; infinite when a pair collapses.
    pub max_contraction: f64,
    pub collapsed_pairs: usize,
}

impl Distortion {
    pub fn distortion(&self) -> f64 {
        self.max_expansion * self.max_contraction
    }
}

pub fn distortion(dist: &DistanceMatrix, e: &Embedding) -> Result<Distortion> {
    let m = dist.len();
    if e.len() != m {
        return Err(Error::SizeMismatch {
            expected: m,
            found: e.len(),
        });
    }
    let mut out = Distortion {
        max_expansion: 1.0,
        max_contraction: 1.0,
        collapsed_pairs: 0,
    };
    if m < 2 {
        return Ok(out);
    }
    out.max_expansion = 0.0;
    out.max_contraction = 0.0;
    for x in 0..m {
        for y in x + 1..m {
            let d = f64::from(dist.get(x, y).ok_or(Error::Disconnected)?);
            let image = squared_distance(&e.points[x], &e.points[y]).sqrt();
            out.max_expansion = out.max_expansion.max(image / d);
            if image == 0.0 {
                out.collapsed_pairs += 1;
                out.max_contraction = f64::INFINITY;
            } else {
                out.max_contraction = out.max_contraction.max(d / image);
            }
        }
    }
    Ok(out)
}

/// `F = g o f`: each vertex gets the embedded point of its image.
pub fn compose_map(f: &VertexMap, e: &Embedding) -> Result<Vec<Vec<f64>>> {
    if f.m() != e.len() {
        return Err(Error::SizeMismatch {
            expected: e.len(),
            found: f.m(),
        });
    }
    Ok(f.values().iter().map(|&i| e.points[i].clone()).collect())
}
