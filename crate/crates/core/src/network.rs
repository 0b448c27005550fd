//! Networks (labelled nodes with pairwise dissimilarities) and point clouds.

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;

/// A finite set of labelled nodes with a dissimilarity function.
///
/// The dissimilarity is zero exactly on the diagonal, finite, and may be
/// asymmetric. Labels are kept in input order; every computation downstream
/// works on indices into that order.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    labels: Vec<String>,
    dissim: SquareMatrix,
    symmetric: bool,
}

impl Network {
    pub fn new(labels: Vec<String>, dissim: SquareMatrix) -> Result<Self> {
        let n = dissim.dim();
        if labels.len() != n {
            return Err(Error::InvalidNetwork(format!(
                "{} labels for a {n}x{n} dissimilarity matrix",
                labels.len()
            )));
        }
        if n == 0 {
            return Err(Error::InvalidNetwork("empty node set".into()));
        }
        for i in 0..n {
            for j in 0..n {
                let v = dissim.get(i, j);
                if !v.is_finite() {
                    return Err(Error::InvalidNetwork(format!(
                        "non-finite dissimilarity at ({i}, {j})"
                    )));
                }
                if i == j && v != 0.0 {
                    return Err(Error::InvalidNetwork(format!(
                        "nonzero diagonal entry {v} at ({i}, {i})"
                    )));
                }
                if i != j && v <= 0.0 {
                    return Err(Error::InvalidNetwork(format!(
                        "non-positive dissimilarity {v} at ({i}, {j})"
                    )));
                }
            }
        }
        let symmetric = dissim.is_symmetric();
        Ok(Network {
            labels,
            dissim,
            symmetric,
        })
    }

    /// Network with labels `x1, x2, ...`.
    pub fn unlabeled(dissim: SquareMatrix) -> Result<Self> {
        let labels = default_labels(dissim.dim());
        Network::new(labels, dissim)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dissim(&self) -> &SquareMatrix {
        &self.dissim
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.dissim.get(i, j)
    }
}

pub(crate) fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| format!("x{i}")).collect()
}

/// Labelled points in `R^d`; dissimilarity is Euclidean distance.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    labels: Vec<String>,
    dim: usize,
    coords: Vec<f64>,
}

impl PointCloud {
    /// `coords` is row-major, one row of `dim` coordinates per label.
    pub fn new(labels: Vec<String>, dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidNetwork("points need at least one coordinate".into()));
        }
        if coords.len() != labels.len() * dim {
            return Err(Error::InvalidNetwork(format!(
                "{} coordinates for {} points of dimension {dim}",
                coords.len(),
                labels.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidNetwork("empty point cloud".into()));
        }
        if let Some(c) = coords.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidNetwork(format!(
                "non-finite coordinate for point {}",
                c / dim
            )));
        }
        let cloud = PointCloud { labels, dim, coords };
        if let Some((i, j)) = cloud.first_duplicate() {
            return Err(Error::InvalidNetwork(format!(
                "points {} and {} coincide",
                cloud.labels[i], cloud.labels[j]
            )));
        }
        Ok(cloud)
    }

    fn first_duplicate(&self) -> Option<(usize, usize)> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| {
            self.point(a)
                .iter()
                .zip(self.point(b))
                .map(|(x, y)| x.total_cmp(y))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        order.windows(2).find_map(|w| {
            (self.point(w[0]) == self.point(w[1])).then(|| (w[0].min(w[1]), w[0].max(w[1])))
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn distance(&self, i: usize, j: usize) -> f64 {
        euclidean(self.point(i), self.point(j))
    }

    pub fn distance_matrix(&self) -> SquareMatrix {
        euclidean_matrix(self.len(), self.dim, &self.coords)
    }

    pub fn min_pairwise_distance(&self) -> Option<f64> {
        let n = self.len();
        let mut best: Option<f64> = None;
        for i in 0..n {
            for j in i + 1..n {
                let d = self.distance(i, j);
                best = Some(best.map_or(d, |b| b.min(d)));
            }
        }
        best
    }

    pub fn to_network(&self) -> Result<Network> {
        Network::new(self.labels.clone(), self.distance_matrix())
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

pub(crate) fn euclidean_matrix(n: usize, dim: usize, coords: &[f64]) -> SquareMatrix {
    let mut m = SquareMatrix::zeros(n);
    for i in 0..n {
        for j in i + 1..n {
            let d = euclidean(&coords[i * dim..(i + 1) * dim], &coords[j * dim..(j + 1) * dim]);
            m.set(i, j, d);
            m.set(j, i, d);
        }
    }
    m
}
