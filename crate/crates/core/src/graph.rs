//! Weighted undirected graphs and their combinatorial Laplacian.
//!
//! A [`Graph`] stores the merged edge list, the Laplacian `L = D - W` in CSR
//! form and a cheap upper bound on its largest eigenvalue. The dense
//! eigendecomposition lives in [`GraphEigensystem`] and is only computed on
//! request, since the fast filtering paths never need it.

use std::collections::BTreeMap;
use std::ops::{AddAssign, Mul};

use nalgebra::DMatrix;
use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Default cap on the vertex count accepted by [`eigendecompose`].
pub const DEFAULT_EIGEN_CAP: usize = 4096;

/// Undirected weighted edge. Stored with `src < dst` once inside a [`Graph`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub weight: f64,
}

impl Edge {
    pub fn new(src: usize, dst: usize, weight: f64) -> Self {
        Self { src, dst, weight }
    }
}

/// Symmetric sparse matrix in compressed sparse row layout.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    n: usize,
    indptr: Vec<usize>,
    indices: Vec<usize>,
    values: Vec<f64>,
}

/// Scalars the Laplacian can act on (real and complex signals).
pub trait Scalar: Copy + Send + Sync + AddAssign + Mul<f64, Output = Self> + 'static {
    fn zero() -> Self;
}

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
}

impl Scalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
}

impl CsrMatrix {
    fn from_rows(n: usize, rows: Vec<BTreeMap<usize, f64>>) -> Self {
        let mut indptr = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        indptr.push(0);
        for row in rows {
            for (j, v) in row {
                indices.push(j);
                values.push(v);
            }
            indptr.push(indices.len());
        }
        Self { n, indptr, indices, values }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Iterates over `(column, value)` of one row.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, f64)> + '_ {
        let span = self.indptr[i]..self.indptr[i + 1];
        self.indices[span.clone()]
            .iter()
            .copied()
            .zip(self.values[span].iter().copied())
    }

    pub fn mul_vec<T: Scalar>(&self, x: ArrayView1<T>) -> Array1<T> {
        Array1::from_shape_fn(self.n, |i| {
            let mut acc = T::zero();
            for (j, v) in self.row(i) {
                acc += x[j] * v;
            }
            acc
        })
    }

    /// `self * x` for an `n x cols` matrix, i.e. the operator applied to every column.
    pub fn mul_mat<T: Scalar>(&self, x: ArrayView2<T>) -> Array2<T> {
        let cols = x.ncols();
        let mut out = Array2::from_elem((self.n, cols), T::zero());
        for (i, mut out_row) in out.axis_iter_mut(Axis(0)).enumerate() {
            for (j, v) in self.row(i) {
                let src = x.row(j);
                for (o, s) in out_row.iter_mut().zip(src.iter()) {
                    *o += *s * v;
                }
            }
        }
        out
    }

    pub fn to_dense(&self) -> Array2<f64> {
        let mut out = Array2::zeros((self.n, self.n));
        for i in 0..self.n {
            for (j, v) in self.row(i) {
                out[[i, j]] += v;
            }
        }
        out
    }
}

/// Weighted undirected graph with its cached combinatorial Laplacian.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    edges: Vec<Edge>,
    laplacian: CsrMatrix,
    degrees: Vec<f64>,
    lambda_max: f64,
    coords: Option<Vec<[f64; 2]>>,
}

/// Builds a graph from an undirected edge list.
///
/// Duplicate undirected edges (in either orientation) are merged by summing
/// their weights. Self-loops and negative weights are rejected.
pub fn build_graph(edges: &[Edge], num_vertices: usize) -> Result<Graph> {
    if num_vertices == 0 {
        return Err(Error::InvalidParameter("graph needs at least one vertex".into()));
    }
    let mut merged: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    for e in edges {
        for id in [e.src, e.dst] {
            if id >= num_vertices {
                return Err(Error::VertexOutOfRange { id, n: num_vertices });
            }
        }
        if !e.weight.is_finite() {
            return Err(Error::NonFinite(format!("weight of edge ({}, {})", e.src, e.dst)));
        }
        if e.weight < 0.0 {
            return Err(Error::NegativeWeight { src: e.src, dst: e.dst, weight: e.weight });
        }
        if e.src == e.dst {
            return Err(Error::SelfLoop(e.src));
        }
        let key = (e.src.min(e.dst), e.src.max(e.dst));
        *merged.entry(key).or_insert(0.0) += e.weight;
    }

    let mut rows: Vec<BTreeMap<usize, f64>> = vec![BTreeMap::new(); num_vertices];
    let mut degrees = vec![0.0; num_vertices];
    let mut kept = Vec::with_capacity(merged.len());
    for (&(a, b), &w) in &merged {
        if w == 0.0 {
            continue;
        }
        *rows[a].entry(b).or_insert(0.0) -= w;
        *rows[b].entry(a).or_insert(0.0) -= w;
        degrees[a] += w;
        degrees[b] += w;
        kept.push(Edge::new(a, b, w));
    }
    for (i, row) in rows.iter_mut().enumerate() {
        // Diagonal as the negated sum of the stored off-diagonals so that
        // every row of L sums to exactly zero.
        let off: f64 = row.values().sum();
        row.insert(i, -off);
    }
    let max_degree = degrees.iter().cloned().fold(0.0, f64::max);
    Ok(Graph {
        n: num_vertices,
        edges: kept,
        laplacian: CsrMatrix::from_rows(num_vertices, rows),
        degrees,
        lambda_max: 2.0 * max_degree,
        coords: None,
    })
}

impl Graph {
    pub fn num_vertices(&self) -> usize {
        self.n
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn laplacian(&self) -> &CsrMatrix {
        &self.laplacian
    }

    pub fn degrees(&self) -> &[f64] {
        &self.degrees
    }

    /// Upper bound on the largest Laplacian eigenvalue used by the fast paths.
    pub fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    pub fn coords(&self) -> Option<&[[f64; 2]]> {
        self.coords.as_deref()
    }

    pub fn with_coords(mut self, coords: Vec<[f64; 2]>) -> Result<Self> {
        if coords.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {} vertices",
                coords.len(),
                self.n
            )));
        }
        self.coords = Some(coords);
        Ok(self)
    }

    /// Replaces the `2 d_max` bound by a power-iteration estimate.
    ///
    /// The estimate is inflated by 1% and never exceeds the degree bound. It
    /// is no longer a certified upper bound, only a tighter working value.
    pub fn refine_lambda_max(mut self, iterations: usize, seed: u64) -> Self {
        let est = power_iteration(&self, iterations, seed);
        self.lambda_max = (1.01 * est).min(estimate_lambda_max(&self));
        self
    }

    pub fn weight_matrix(&self) -> Array2<f64> {
        let mut w = Array2::zeros((self.n, self.n));
        for e in &self.edges {
            w[[e.src, e.dst]] += e.weight;
            w[[e.dst, e.src]] += e.weight;
        }
        w
    }

    /// `x^T L x` computed edge by edge.
    pub fn quadratic_form(&self, x: ArrayView1<f64>) -> f64 {
        self.edges
            .iter()
            .map(|e| e.weight * (x[e.src] - x[e.dst]).powi(2))
            .sum()
    }

    /// Breadth-first connectivity test.
    pub fn is_connected(&self) -> bool {
        let mut adj = vec![Vec::new(); self.n];
        for e in &self.edges {
            adj[e.src].push(e.dst);
            adj[e.dst].push(e.src);
        }
        let mut seen = vec![false; self.n];
        let mut queue = std::collections::VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = queue.pop_front() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    count += 1;
                    queue.push_back(u);
                }
            }
        }
        count == self.n
    }
}

/// Upper bound `2 d_max` on the largest Laplacian eigenvalue.
pub fn estimate_lambda_max(g: &Graph) -> f64 {
    2.0 * g.degrees.iter().cloned().fold(0.0, f64::max)
}

fn power_iteration(g: &Graph, iterations: usize, seed: u64) -> f64 {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut x = Array1::from_shape_fn(g.n, |_| rng.random::<f64>() - 0.5);
    let mut est = 0.0;
    for _ in 0..iterations.max(1) {
        let norm = x.dot(&x).sqrt();
        if norm == 0.0 {
            return 0.0;
        }
        x /= norm;
        let y = g.laplacian.mul_vec(x.view());
        est = x.dot(&y);
        x = y;
    }
    est
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (columns) of `L`.
#[derive(Debug, Clone)]
pub struct GraphEigensystem {
    pub eigenvalues: Array1<f64>,
    pub eigenvectors: Array2<f64>,
}

impl GraphEigensystem {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.iter().cloned().fold(0.0, f64::max)
    }
}

pub fn eigendecompose(g: &Graph) -> Result<GraphEigensystem> {
    eigendecompose_with_cap(g, DEFAULT_EIGEN_CAP)
}

/// Dense symmetric eigendecomposition of the Laplacian.
///
/// Eigenvalues come back ascending; each eigenvector is signed so that its
/// first entry with magnitude above `1e-12` is positive.
pub fn eigendecompose_with_cap(g: &Graph, cap: usize) -> Result<GraphEigensystem> {
    let n = g.n;
    if n > cap {
        return Err(Error::EigenCapExceeded { n, cap });
    }
    let dense = g.laplacian.to_dense();
    let m = DMatrix::from_fn(n, n, |i, j| dense[[i, j]]);
    let eig = nalgebra::SymmetricEigen::try_new(m, f64::EPSILON, 0)
        .ok_or_else(|| Error::EigenFailure("symmetric eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut values = Array1::zeros(n);
    let mut vectors = Array2::zeros((n, n));
    for (col, &src) in order.iter().enumerate() {
        // L is PSD; clamp round-off below zero.
        values[col] = eig.eigenvalues[src].max(0.0);
        let v = eig.eigenvectors.column(src);
        let sign = v
            .iter()
            .find(|x| x.abs() > 1e-12)
            .map(|x| x.signum())
            .unwrap_or(1.0);
        for i in 0..n {
            vectors[[i, col]] = sign * v[i];
        }
    }
    Ok(GraphEigensystem { eigenvalues: values, eigenvectors: vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    fn path3() -> Graph {
        build_graph(&[Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)], 3).unwrap()
    }

    #[test]
    fn single_edge_laplacian() {
        let g = build_graph(&[Edge::new(0, 1, 1.0)], 2).unwrap();
        assert_eq!(g.laplacian().to_dense(), array![[1.0, -1.0], [-1.0, 1.0]]);
    }

    #[test]
    fn empty_edge_list_gives_zero_laplacian() {
        let g = build_graph(&[], 3).unwrap();
        assert_eq!(g.laplacian().to_dense(), Array2::<f64>::zeros((3, 3)));
        assert_eq!(estimate_lambda_max(&g), 0.0);
    }

    #[test]
    fn path_laplacian() {
        let l = path3().laplacian().to_dense();
        assert_eq!(l, array![[1.0, -1.0, 0.0], [-1.0, 2.0, -1.0], [0.0, -1.0, 1.0]]);
    }

    #[test]
    fn duplicate_edges_are_summed() {
        let g = build_graph(&[Edge::new(0, 1, 1.0), Edge::new(1, 0, 2.5)], 2).unwrap();
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.edges()[0].weight, 3.5);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(matches!(
            build_graph(&[Edge::new(0, 1, -1.0)], 2),
            Err(Error::NegativeWeight { .. })
        ));
        assert!(matches!(build_graph(&[Edge::new(1, 1, 1.0)], 2), Err(Error::SelfLoop(1))));
        assert!(matches!(
            build_graph(&[Edge::new(0, 5, 1.0)], 2),
            Err(Error::VertexOutOfRange { id: 5, n: 2 })
        ));
    }

    #[test]
    fn lambda_max_bounds() {
        let p2 = build_graph(&[Edge::new(0, 1, 1.0)], 2).unwrap();
        assert_eq!(estimate_lambda_max(&p2), 2.0);
        let k3 = build_graph(
            &[Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(0, 2, 1.0)],
            3,
        )
        .unwrap();
        let b = estimate_lambda_max(&k3);
        assert!((3.0..=4.0).contains(&b));
        let refined = k3.refine_lambda_max(50, 0).lambda_max();
        assert!(refined >= 3.0 && refined <= 4.0, "{refined}");
    }

    #[test]
    fn eigenvalues_of_small_graphs() {
        let p2 = build_graph(&[Edge::new(0, 1, 1.0)], 2).unwrap();
        let e = eigendecompose(&p2).unwrap();
        assert!((e.eigenvalues[0]).abs() < 1e-14 && (e.eigenvalues[1] - 2.0).abs() < 1e-14);

        let k3 = build_graph(
            &[Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0), Edge::new(0, 2, 1.0)],
            3,
        )
        .unwrap();
        let e = eigendecompose(&k3).unwrap();
        for (got, want) in e.eigenvalues.iter().zip([0.0, 3.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }

        let zero = build_graph(&[], 2).unwrap();
        let e = eigendecompose(&zero).unwrap();
        assert_eq!(e.eigenvalues, array![0.0, 0.0]);
        let gram = e.eigenvectors.t().dot(&e.eigenvectors);
        assert!((gram - Array2::<f64>::eye(2)).iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn eigen_cap_is_enforced() {
        let g = path3();
        assert!(matches!(
            eigendecompose_with_cap(&g, 2),
            Err(Error::EigenCapExceeded { n: 3, cap: 2 })
        ));
    }

    #[test]
    fn sign_convention_first_nonzero_positive() {
        let e = eigendecompose(&path3()).unwrap();
        for col in e.eigenvectors.columns() {
            let first = col.iter().find(|x| x.abs() > 1e-12).unwrap();
            assert!(*first > 0.0);
        }
    }

    #[test]
    fn connectivity() {
        assert!(path3().is_connected());
        assert!(!build_graph(&[Edge::new(0, 1, 1.0)], 3).unwrap().is_connected());
    }
}
