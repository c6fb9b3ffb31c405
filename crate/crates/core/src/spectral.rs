//! Normalized Laplacian spectra and the deterministic inequalities they
//! control: the spectral diameter bound, edge discrepancy and the Euclidean
//! expander inequality.

use faer::{Mat, Side};

use crate::error::{Error, Result};
use crate::euclid::{directed_edge_sum, ordered_pair_sum};
use crate::graph::Graph;

/// Default relative tolerance for eigen-residuals and symmetry.
pub const DEFAULT_TOL: f64 = 1e-9;

/// `I - D^{-1/2} A D^{-1/2}` as a dense matrix.
pub fn normalized_laplacian(g: &Graph) -> Result<Mat<f64>> {
    let n = g.n();
    if let Some(v) = (0..n).find(|&v| g.degree(v) == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    let inv_sqrt: Vec<f64> = (0..n).map(|v| 1.0 / (g.degree(v) as f64).sqrt()).collect();
    let mut l = Mat::<f64>::identity(n, n);
    for (u, v) in g.edges() {
        let w = -inv_sqrt[u] * inv_sqrt[v];
        l[(u, v)] = w;
        l[(v, u)] = w;
    }
    Ok(l)
}

/// Sorted eigenvalues with their orthonormal eigenvectors (as columns).
#[derive(Debug, Clone)]
pub struct Spectrum {
    eigenvalues: Vec<f64>,
    eigenvectors: Mat<f64>,
    residual: f64,
}

impl Spectrum {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Largest `|A v - lambda v|` over the returned pairs.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// First nontrivial eigenvalue.
    pub fn lambda_1(&self) -> f64 {
        self.eigenvalues[1]
    }

    pub fn lambda_max(&self) -> f64 {
        *self.eigenvalues.last().expect("nonempty spectrum")
    }

    pub fn eigenvector(&self, k: usize) -> Vec<f64> {
        self.eigenvectors.col(k).iter().copied().collect()
    }

    pub fn sum(&self) -> f64 {
        self.eigenvalues.iter().sum()
    }

    /// Number of eigenvalues with `|lambda| <= tol`.
    pub fn zero_multiplicity(&self, tol: f64) -> usize {
        self.eigenvalues.iter().filter(|l| l.abs() <= tol).count()
    }
}

/// Full symmetric eigendecomposition. Fails when `matrix` is asymmetric
/// beyond `tol * |A|_F` or when some residual exceeds `tol * |A|_2`.
pub fn eigenvalues(matrix: &Mat<f64>, tol: f64) -> Result<Spectrum> {
    let n = matrix.nrows();
    if matrix.ncols() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: matrix.ncols(),
        });
    }
    let frob = matrix.norm_l2();
    let mut asym: f64 = 0.0;
    for j in 0..n {
        for i in j + 1..n {
            asym = asym.max((matrix[(i, j)] - matrix[(j, i)]).abs());
        }
    }
    if asym > tol * frob.max(f64::MIN_POSITIVE) {
        return Err(Error::NotSymmetric(asym));
    }
    if n == 0 {
        return Ok(Spectrum {
            eigenvalues: Vec::new(),
            eigenvectors: Mat::zeros(0, 0),
            residual: 0.0,
        });
    }
    let evd = matrix
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::Eigen(format!("{e:?}")))?;
    let values: Vec<f64> = evd.S().column_vector().iter().copied().collect();
    let vectors = evd.U().to_owned();

    let product = matrix * &vectors;
    let mut residual: f64 = 0.0;
    for (k, &lambda) in values.iter().enumerate() {
        let r: f64 = (0..n)
            .map(|i| {
                let x = product[(i, k)] - lambda * vectors[(i, k)];
                x * x
            })
            .sum();
        residual = residual.max(r.sqrt());
    }
    let spectral_norm = values.iter().fold(0.0_f64, |a, l| a.max(l.abs()));
    if residual > tol * spectral_norm.max(1.0) {
        return Err(Error::Eigen(format!(
            "residual {residual:e} exceeds tolerance {tol:e}"
        )));
    }
    Ok(Spectrum {
        eigenvalues: values,
        eigenvectors: vectors,
        residual,
    })
}

/// Normalized Laplacian spectrum of `g` at the default tolerance.
pub fn laplacian_spectrum(g: &Graph) -> Result<Spectrum> {
    eigenvalues(&normalized_laplacian(g)?, DEFAULT_TOL)
}

/// `max(|1 - lambda_1|, |lambda_{n-1} - 1|)`.
pub fn lambda_bar(s: &Spectrum) -> f64 {
    (1.0 - s.lambda_1()).abs().max((s.lambda_max() - 1.0).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterBound {
    Finite(u64),
    /// The spectral quantity is not below 1 and the bound says nothing.
    Vacuous,
}

impl DiameterBound {
    pub fn admits(self, diameter: u32) -> bool {
        match self {
            DiameterBound::Finite(b) => u64::from(diameter) <= b,
            DiameterBound::Vacuous => true,
        }
    }
}

/// Values within `DEFAULT_TOL` of 1 count as 1: the eigensolver cannot
/// tell them apart and the bound would be astronomically large anyway.
fn log_ratio_bound(n: usize, contraction: f64) -> DiameterBound {
    if !(0.0..1.0 - DEFAULT_TOL).contains(&contraction) || n < 3 {
        return DiameterBound::Vacuous;
    }
    let ratio = ((n - 1) as f64).ln() / (1.0 / contraction).ln();
    DiameterBound::Finite(ratio.ceil() as u64)
}

/// `ceil(log(n - 1) / log(1 / lambda_bar))`.
pub fn spectral_diameter_bound(s: &Spectrum, n: usize) -> DiameterBound {
    log_ratio_bound(n, lambda_bar(s))
}

/// The same expression with `1 - lambda_1` in place of `lambda_bar`.
pub fn lambda1_diameter_bound(s: &Spectrum, n: usize) -> DiameterBound {
    log_ratio_bound(n, 1.0 - s.lambda_1())
}

/// A disjoint pair of vertex sets.
pub type SetPair = (Vec<usize>, Vec<usize>);

/// Largest `|e(X,Y) - vol X vol Y / vol G| - lambda_bar sqrt(vol X vol Y)`
/// over `pairs`; `-inf` for an empty list.
pub fn discrepancy_audit(g: &Graph, s: &Spectrum, pairs: &[SetPair]) -> Result<f64> {
    let lb = lambda_bar(s);
    let vol_g = g.volume() as f64;
    let vol = |set: &[usize]| set.iter().map(|&v| g.degree(v)).sum::<usize>() as f64;
    let mut worst = f64::NEG_INFINITY;
    for (x, y) in pairs {
        let e = g.edges_between(x, y)? as f64;
        let (vx, vy) = (vol(x), vol(y));
        let violation = (e - vx * vy / vol_g).abs() - lb * (vx * vy).sqrt();
        worst = worst.max(violation);
    }
    Ok(worst)
}

/// `(1/(n d)) sum_{u->v} |f(u)-f(v)|^2 - (lambda_1/n^2) sum_{u,v} |f(u)-f(v)|^2`,
/// nonnegative for every vector-valued `f` on a d-regular graph.
pub fn hilbert_expander_check(g: &Graph, lambda_1: f64, f: &[Vec<f64>]) -> Result<f64> {
    let d = g.regular_degree().ok_or(Error::NotRegular)? as f64;
    let n = g.n() as f64;
    let edge = directed_edge_sum(g, f)?;
    let pair = ordered_pair_sum(f)?;
    Ok(edge / (n * d) - lambda_1 * pair / (n * n))
}
