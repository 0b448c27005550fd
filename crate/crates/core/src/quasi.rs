//! Quasi-coverings: coverings of a quasi-cut metric together with directed
//! influence edges between their blocks.

use crate::covering::{sweep_limited, Covering, NestedCovering};
use crate::error::{Error, Result};
use crate::graph::DEFAULT_CLIQUE_LIMIT;
use crate::metric::MetricMatrix;

/// A covering plus ordered block-index pairs `(i, j)`: block `i` influences
/// block `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiCovering {
    covering: Covering,
    edges: Vec<(usize, usize)>,
}

impl QuasiCovering {
    pub fn new(covering: Covering, mut edges: Vec<(usize, usize)>) -> Result<Self> {
        let m = covering.len();
        if let Some(&(i, j)) = edges.iter().find(|&&(i, j)| i >= m || j >= m || i == j) {
            return Err(Error::Structural(format!(
                "edge ({i}, {j}) is a self-edge or references a missing block ({m} blocks)"
            )));
        }
        edges.sort_unstable();
        edges.dedup();
        Ok(QuasiCovering { covering, edges })
    }

    pub fn covering(&self) -> &Covering {
        &self.covering
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn delta(&self) -> f64 {
        self.covering.delta()
    }
}

/// Influence edges at `delta`: `(i, j)` is present iff some node of `C_i`
/// outside `C_j` reaches some node of `C_j` outside `C_i` within `delta`.
///
/// Edges come out sorted; both directions may be present.
pub fn quasi_edge_set(m: &MetricMatrix, cov: &Covering, delta: f64) -> Result<Vec<(usize, usize)>> {
    if cov.n() != m.dim() {
        return Err(Error::Structural(format!(
            "covering has {} nodes but the matrix is {}×{}",
            cov.n(),
            m.dim(),
            m.dim()
        )));
    }
    let blocks = cov.blocks();
    let mut edges = Vec::new();
    for (i, a) in blocks.iter().enumerate() {
        for (j, b) in blocks.iter().enumerate() {
            if i == j {
                continue;
            }
            let only_a = a.iter().filter(|x| b.binary_search(x).is_err());
            let reaches = only_a
                .flat_map(|&x| {
                    b.iter()
                        .filter(|y| a.binary_search(y).is_err())
                        .map(move |&y| (x, y))
                })
                .any(|(x, y)| m.get(x, y) <= delta);
            if reaches {
                edges.push((i, j));
            }
        }
    }
    Ok(edges)
}

pub fn quasi_covering_at(m: &MetricMatrix, delta: f64) -> Result<QuasiCovering> {
    let cov = crate::covering::covering_at(m, delta)?;
    let edges = quasi_edge_set(m, &cov, delta)?;
    QuasiCovering::new(cov, edges)
}

/// Quasi-coverings at every breakpoint.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedQuasiCovering {
    breakpoints: Vec<f64>,
    quasi_coverings: Vec<QuasiCovering>,
}

impl NestedQuasiCovering {
    pub fn new(breakpoints: Vec<f64>, quasi_coverings: Vec<QuasiCovering>) -> Result<Self> {
        if breakpoints.len() != quasi_coverings.len() || breakpoints.is_empty() {
            return Err(Error::Structural(
                "need one quasi-covering per breakpoint and at least one breakpoint".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Structural("breakpoints must be strictly ascending".into()));
        }
        Ok(NestedQuasiCovering {
            breakpoints,
            quasi_coverings,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn quasi_coverings(&self) -> &[QuasiCovering] {
        &self.quasi_coverings
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// The underlying nested covering, one covering per breakpoint.
    pub fn coverings(&self) -> NestedCovering {
        NestedCovering::new(
            self.breakpoints.clone(),
            self.quasi_coverings.iter().map(|q| q.covering.clone()).collect(),
        )
        .expect("validated on construction")
    }
}

/// `{0}` together with every distinct positive directed entry.
pub fn quasi_breakpoints(m: &MetricMatrix) -> Vec<f64> {
    let v = m.values();
    let n = v.dim();
    let mut values: Vec<f64> = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| i != j)
        .map(|(i, j)| v.get(i, j))
        .filter(|&x| x > 0.0)
        .collect();
    values.push(0.0);
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

pub fn quasi_sweep(m: &MetricMatrix) -> Result<NestedQuasiCovering> {
    quasi_sweep_limited(m, DEFAULT_CLIQUE_LIMIT)
}

pub fn quasi_sweep_limited(m: &MetricMatrix, limit: usize) -> Result<NestedQuasiCovering> {
    let nc = sweep_limited(m, limit)?;
    let bps = quasi_breakpoints(m);
    let mut out = Vec::with_capacity(bps.len());
    for &v in &bps {
        let base = nc.at(v);
        let cov = Covering::new(base.n(), v, base.blocks().to_vec())?;
        let edges = quasi_edge_set(m, &cov, v)?;
        out.push(QuasiCovering::new(cov, edges)?);
    }
    NestedQuasiCovering::new(bps, out)
}

/// A violating edge: `from → to` at `delta` with nothing to carry it at
/// `delta_next` (for border violations `delta_next == delta`).
#[derive(Debug, Clone, PartialEq)]
pub struct Def13Witness {
    pub delta: f64,
    pub delta_next: f64,
    pub from: Vec<usize>,
    pub to: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Def13Report {
    pub border_ok: bool,
    pub persistence_ok: bool,
    pub witnesses: Vec<Def13Witness>,
}

impl Def13Report {
    pub fn holds(&self) -> bool {
        self.border_ok && self.persistence_ok
    }
}

fn intersection_len(a: &[usize], b: &[usize]) -> usize {
    a.iter().filter(|x| b.binary_search(x).is_ok()).count()
}

fn contains_all(outer: &[usize], inner: &[usize]) -> bool {
    inner.iter().all(|x| outer.binary_search(x).is_ok())
}

/// Checks the border and persistence conditions of a nested quasi-covering.
///
/// Border: no edges at the first breakpoint nor wherever the covering is a
/// single block. Persistence: for every edge `(C_i, C_j)` at `v_t` there are
/// blocks `C_i' ⊇ C_i`, `C_j' ⊇ C_j` at `v_{t+1}` that are joined by an edge
/// or intersect in strictly more nodes.
pub fn validate_def13(nqc: &NestedQuasiCovering) -> Def13Report {
    let mut witnesses = Vec::new();
    let qs = &nqc.quasi_coverings;
    let mut border_ok = true;
    for (t, q) in qs.iter().enumerate() {
        if t == 0 || q.covering.is_single_block() {
            for &(i, j) in &q.edges {
                border_ok = false;
                let b = q.covering.blocks();
                witnesses.push(Def13Witness {
                    delta: q.delta(),
                    delta_next: q.delta(),
                    from: b[i].clone(),
                    to: b[j].clone(),
                });
            }
        }
    }

    let mut persistence_ok = true;
    for w in qs.windows(2) {
        let (now, next) = (&w[0], &w[1]);
        let (blocks, next_blocks) = (now.covering.blocks(), next.covering.blocks());
        for &(i, j) in &now.edges {
            let (ci, cj) = (&blocks[i], &blocks[j]);
            let shared = intersection_len(ci, cj);
            let carried = next_blocks.iter().enumerate().any(|(a, ca)| {
                contains_all(ca, ci)
                    && next_blocks.iter().enumerate().any(|(b, cb)| {
                        contains_all(cb, cj)
                            && (next.edges.binary_search(&(a, b)).is_ok()
                                || shared < intersection_len(ca, cb))
                    })
            });
            if !carried {
                persistence_ok = false;
                witnesses.push(Def13Witness {
                    delta: now.delta(),
                    delta_next: next.delta(),
                    from: ci.clone(),
                    to: cj.clone(),
                });
            }
        }
    }

    Def13Report {
        border_ok,
        persistence_ok,
        witnesses,
    }
}
