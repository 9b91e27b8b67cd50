//! Synthetic graph fixtures: paths, rings, grids, kNN sensor networks and
//! Erdős–Rényi graphs. All randomness flows from a seeded ChaCha8 stream.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, Edge, Graph};
use crate::rng::seeded;

/// Sensor placement is redrawn until the kNN graph is connected, at most this many times.
const MAX_SENSOR_ATTEMPTS: usize = 200;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GraphKind {
    Path { n: usize },
    Ring { n: usize },
    Grid2d { rows: usize, cols: usize },
    /// `sigma: None` uses the mean distance to the k nearest neighbours.
    KnnSensor { n: usize, k: usize, sigma: Option<f64> },
    ErdosRenyi { n: usize, p: f64 },
}

pub fn generate_graph(kind: &GraphKind, seed: u64) -> Result<Graph> {
    match *kind {
        GraphKind::Path { n } => {
            require(n >= 1, "path needs n >= 1")?;
            let edges: Vec<_> = (1..n).map(|i| Edge::new(i - 1, i, 1.0)).collect();
            let coords = (0..n).map(|i| [i as f64, 0.0]).collect();
            build_graph(&edges, n)?.with_coords(coords)
        }
        GraphKind::Ring { n } => {
            require(n >= 3, "ring needs n >= 3")?;
            let edges: Vec<_> = (0..n).map(|i| Edge::new(i, (i + 1) % n, 1.0)).collect();
            let coords = (0..n)
                .map(|i| {
                    let a = 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                    [a.cos(), a.sin()]
                })
                .collect();
            build_graph(&edges, n)?.with_coords(coords)
        }
        GraphKind::Grid2d { rows, cols } => {
            require(rows >= 1 && cols >= 1, "grid needs rows, cols >= 1")?;
            let id = |r: usize, c: usize| r * cols + c;
            let mut edges = Vec::new();
            for r in 0..rows {
                for c in 0..cols {
                    if c + 1 < cols {
                        edges.push(Edge::new(id(r, c), id(r, c + 1), 1.0));
                    }
                    if r + 1 < rows {
                        edges.push(Edge::new(id(r, c), id(r + 1, c), 1.0));
                    }
                }
            }
            let coords = (0..rows * cols)
                .map(|v| [(v % cols) as f64, (v / cols) as f64])
                .collect();
            build_graph(&edges, rows * cols)?.with_coords(coords)
        }
        GraphKind::KnnSensor { n, k, sigma } => knn_sensor(n, k, sigma, seed),
        GraphKind::ErdosRenyi { n, p } => {
            require(n >= 1, "erdos_renyi needs n >= 1")?;
            require((0.0..=1.0).contains(&p), "erdos_renyi needs p in [0, 1]")?;
            let mut rng = seeded(seed);
            let mut edges = Vec::new();
            for i in 0..n {
                for j in (i + 1)..n {
                    if rng.random::<f64>() < p {
                        edges.push(Edge::new(i, j, 1.0));
                    }
                }
            }
            build_graph(&edges, n)
        }
    }
}

fn require(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter(msg.to_string()))
    }
}

/// Uniform points in the unit square joined to their `k` nearest neighbours
/// with Gaussian weights `exp(-d^2 / sigma^2)`, symmetrised by union.
fn knn_sensor(n: usize, k: usize, sigma: Option<f64>, seed: u64) -> Result<Graph> {
    require(n >= 2, "knn_sensor needs n >= 2")?;
    require(k >= 1 && k < n, "knn_sensor needs 1 <= k < n")?;
    if let Some(s) = sigma {
        require(s > 0.0 && s.is_finite(), "knn_sensor sigma must be positive")?;
    }
    let mut rng = seeded(seed);
    for _ in 0..MAX_SENSOR_ATTEMPTS {
        let pts: Vec<[f64; 2]> = (0..n).map(|_| [rng.random(), rng.random()]).collect();
        let g = knn_from_points(&pts, k, sigma)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::InvalidParameter(format!(
        "no connected kNN sensor graph with n={n}, k={k} after {MAX_SENSOR_ATTEMPTS} draws"
    )))
}

pub fn knn_from_points(pts: &[[f64; 2]], k: usize, sigma: Option<f64>) -> Result<Graph> {
    let n = pts.len();
    require(k >= 1 && k < n, "knn needs 1 <= k < n")?;
    let dist = |a: usize, b: usize| {
        let dx = pts[a][0] - pts[b][0];
        let dy = pts[a][1] - pts[b][1];
        (dx * dx + dy * dy).sqrt()
    };
    let mut pairs = std::collections::BTreeMap::new();
    let mut total = 0.0;
    for i in 0..n {
        let mut others: Vec<(f64, usize)> = (0..n).filter(|&j| j != i).map(|j| (dist(i, j), j)).collect();
        others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        for &(d, j) in others.iter().take(k) {
            total += d;
            pairs.insert((i.min(j), i.max(j)), d);
        }
    }
    let sigma = sigma.unwrap_or(total / (n * k) as f64).max(f64::MIN_POSITIVE);
    let edges: Vec<Edge> = pairs
        .into_iter()
        .map(|((a, b), d)| Edge::new(a, b, (-(d * d) / (sigma * sigma)).exp()))
        .collect();
    build_graph(&edges, n)?.with_coords(pts.to_vec())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_is_two_regular() {
        let g = generate_graph(&GraphKind::Ring { n: 4 }, 0).unwrap();
        assert!(g.degrees().iter().all(|&d| d == 2.0));
    }

    #[test]
    fn grid_counts() {
        let g = generate_graph(&GraphKind::Grid2d { rows: 3, cols: 3 }, 0).unwrap();
        assert_eq!(g.num_vertices(), 9);
        assert_eq!(g.num_edges(), 12);
    }

    #[test]
    fn sensor_graph_is_connected_and_deterministic() {
        let kind = GraphKind::KnnSensor { n: 50, k: 5, sigma: None };
        let a = generate_graph(&kind, 7).unwrap();
        let b = generate_graph(&kind, 7).unwrap();
        assert!(a.is_connected());
        assert_eq!(a.edges(), b.edges());
        assert!(a.edges().iter().all(|e| e.weight > 0.0 && e.weight <= 1.0));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(generate_graph(&GraphKind::KnnSensor { n: 5, k: 5, sigma: None }, 0).is_err());
        assert!(generate_graph(&GraphKind::Ring { n: 2 }, 0).is_err());
        assert!(generate_graph(&GraphKind::ErdosRenyi { n: 5, p: 1.5 }, 0).is_err());
    }
}
