//! Hierarchical clustering methods producing ultrametrics, directed single
//! linkage producing quasi-ultrametrics, and the dendrogram ↔ ultrametric
//! correspondence.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::metric::{check_ultrametric, MetricKind, MetricMatrix};
use crate::network::Network;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LinkageKind {
    Single,
    Complete,
    /// Unweighted average linkage.
    Upgma,
    /// Ward's minimum variance criterion; merge heights are reported in the
    /// units of the input (square root of the Lance–Williams quantity).
    Ward,
}

impl LinkageKind {
    pub const ALL: [LinkageKind; 4] = [
        LinkageKind::Single,
        LinkageKind::Complete,
        LinkageKind::Upgma,
        LinkageKind::Ward,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LinkageKind::Single => "single",
            LinkageKind::Complete => "complete",
            LinkageKind::Upgma => "upgma",
            LinkageKind::Ward => "ward",
        }
    }
}

impl std::str::FromStr for LinkageKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "single" => Ok(LinkageKind::Single),
            "complete" => Ok(LinkageKind::Complete),
            "upgma" | "average" => Ok(LinkageKind::Upgma),
            "ward" => Ok(LinkageKind::Ward),
            other => Err(Error::InvalidConfig(format!("unknown linkage '{other}'"))),
        }
    }
}

/// One agglomeration step. Leaves are clusters `0..n`; the cluster created by
/// the `k`-th merge has id `n + k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Merge {
    pub height: f64,
    pub left: usize,
    pub right: usize,
    pub id: usize,
    pub size: usize,
}

/// A stepwise dendrogram: `n − 1` merges with nondecreasing heights.
#[derive(Debug, Clone, PartialEq)]
pub struct Dendrogram {
    n: usize,
    merges: Vec<Merge>,
}

impl Dendrogram {
    /// Validates and wraps a merge list.
    pub fn new(n: usize, merges: Vec<Merge>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Structural("dendrogram over an empty node set".into()));
        }
        if merges.len() != n - 1 {
            return Err(Error::Structural(format!(
                "{} merges for {n} leaves, expected {}",
                merges.len(),
                n - 1
            )));
        }
        let mut alive = vec![true; 2 * n - 1];
        let mut size: Vec<usize> = vec![1; 2 * n - 1];
        let mut last = 0.0f64;
        for (k, m) in merges.iter().enumerate() {
            let id = n + k;
            if m.id != id {
                return Err(Error::Structural(format!("merge {k} creates id {}, expected {id}", m.id)));
            }
            for c in [m.left, m.right] {
                if c >= id || !alive[c] {
                    return Err(Error::Structural(format!("merge {k} uses unavailable cluster {c}")));
                }
            }
            if m.left == m.right {
                return Err(Error::Structural(format!("merge {k} joins cluster {} with itself", m.left)));
            }
            if !(m.height >= last) || !m.height.is_finite() {
                return Err(Error::Structural(format!(
                    "merge {k} at height {} after height {last}",
                    m.height
                )));
            }
            alive[m.left] = false;
            alive[m.right] = false;
            size[id] = size[m.left] + size[m.right];
            if m.size != size[id] {
                return Err(Error::Structural(format!(
                    "merge {k} claims size {}, actual {}",
                    m.size, size[id]
                )));
            }
            last = m.height;
        }
        Ok(Dendrogram { n, merges })
    }

    pub fn leaves(&self) -> usize {
        self.n
    }

    pub fn merges(&self) -> &[Merge] {
        &self.merges
    }

    /// Height of the last merge (`0` for a single leaf).
    pub fn max_height(&self) -> f64 {
        self.merges.last().map_or(0.0, |m| m.height)
    }

    /// Partition at resolution `delta`: every merge with `height ≤ delta`
    /// applied. Blocks are sorted, and listed in lexicographic order.
    pub fn partition_at(&self, delta: f64) -> Vec<Vec<usize>> {
        let mut members: Vec<Option<Vec<usize>>> = (0..self.n).map(|i| Some(vec![i])).collect();
        for m in self.merges.iter().take_while(|m| m.height <= delta) {
            let mut l = members[m.left].take().expect("validated merge list");
            let r = members[m.right].take().expect("validated merge list");
            l.extend(r);
            members.push(Some(l));
        }
        let mut blocks: Vec<Vec<usize>> = members
            .into_iter()
            .flatten()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        blocks.sort();
        blocks
    }
}

/// Agglomerative clustering of a symmetric network.
///
/// Among cluster pairs at the minimal inter-cluster distance, the pair with
/// the lexicographically smallest `(min member, min member)` key is merged.
pub fn agglomerate(net: &Network, kind: LinkageKind) -> Result<Dendrogram> {
    if !net.is_symmetric() {
        return Err(Error::RequiresSymmetric);
    }
    Ok(agglomerate_matrix(net.dissim(), kind))
}

/// Ultrametric produced by `kind` on `net`.
pub fn linkage_ultrametric(net: &Network, kind: LinkageKind) -> Result<MetricMatrix> {
    agglomerate(net, kind).map(|d| ultrametric_from_dendrogram(&d))
}

// Stored-matrix Lance–Williams agglomeration. Clusters are identified by their
// smallest member index, which makes the tie-break key a plain `(a, b)` with
// `a < b`. A per-row nearest-neighbour cache keeps the common case near O(n²).
pub(crate) fn agglomerate_matrix(dissim: &SquareMatrix, kind: LinkageKind) -> Dendrogram {
    let n = dissim.dim();
    let mut d = dissim.clone();
    if kind == LinkageKind::Ward {
        d.as_mut_slice().iter_mut().for_each(|v| *v *= *v);
    }
    let mut active = vec![true; n];
    let mut size = vec![1usize; n];
    let mut id: Vec<usize> = (0..n).collect();
    let mut nn: Vec<Option<(f64, usize)>> = (0..n).map(|a| nearest(&d, &active, a)).collect();
    let mut merges = Vec::with_capacity(n.saturating_sub(1));

    for k in 0..n.saturating_sub(1) {
        let (a, (h, b)) = nn
            .iter()
            .enumerate()
            .filter(|(a, _)| active[*a])
            .filter_map(|(a, e)| e.map(|e| (a, e)))
            .min_by(|x, y| key_cmp((x.1 .0, x.0), (y.1 .0, y.0)))
            .expect("at least two active clusters remain");

        let (na, nb) = (size[a] as f64, size[b] as f64);
        for c in 0..n {
            if !active[c] || c == a || c == b {
                continue;
            }
            let (dac, dbc) = (d.get(a, c), d.get(b, c));
            let updated = match kind {
                LinkageKind::Single => dac.min(dbc),
                LinkageKind::Complete => dac.max(dbc),
                LinkageKind::Upgma => (na * dac + nb * dbc) / (na + nb),
                LinkageKind::Ward => {
                    let nc = size[c] as f64;
                    ((na + nc) * dac + (nb + nc) * dbc - nc * h) / (na + nb + nc)
                }
            };
            // All four linkages are reducible; clamping only absorbs rounding.
            let updated = updated.max(h);
            d.set(a, c, updated);
            d.set(c, a, updated);
        }

        let height = if kind == LinkageKind::Ward { h.sqrt() } else { h };
        merges.push(Merge {
            height,
            left: id[a],
            right: id[b],
            id: n + k,
            size: size[a] + size[b],
        });
        active[b] = false;
        nn[b] = None;
        size[a] += size[b];
        id[a] = n + k;

        nn[a] = nearest(&d, &active, a);
        for c in 0..n {
            if !active[c] || c == a {
                continue;
            }
            match nn[c] {
                Some((_, t)) if t == a || t == b => nn[c] = nearest(&d, &active, c),
                Some(cur) if c < a => {
                    let cand = (d.get(c, a), a);
                    if key_cmp(cand, cur) == Ordering::Less {
                        nn[c] = Some(cand);
                    }
                }
                _ => {}
            }
        }
    }

    Dendrogram { n, merges }
}

fn key_cmp(x: (f64, usize), y: (f64, usize)) -> Ordering {
    x.0.total_cmp(&y.0).then(x.1.cmp(&y.1))
}

// Nearest active cluster with a larger representative.
fn nearest(d: &SquareMatrix, active: &[bool], a: usize) -> Option<(f64, usize)> {
    let row = d.row(a);
    let mut best: Option<(f64, usize)> = None;
    for b in a + 1..row.len() {
        if active[b] && best.is_none_or(|cur| key_cmp((row[b], b), cur) == Ordering::Less) {
            best = Some((row[b], b));
        }
    }
    best
}

/// `u(x,x')` = height of the first merge joining `x` and `x'`.
pub fn ultrametric_from_dendrogram(d: &Dendrogram) -> MetricMatrix {
    let n = d.leaves();
    let mut u = SquareMatrix::zeros(n);
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    for m in d.merges() {
        let l = std::mem::take(&mut members[m.left]);
        let r = std::mem::take(&mut members[m.right]);
        for &x in &l {
            for &y in &r {
                u.set(x, y, m.height);
                u.set(y, x, m.height);
            }
        }
        let mut joined = l;
        joined.extend(r);
        members.push(joined);
    }
    MetricMatrix::new(u, MetricKind::Ultrametric).expect("merge heights are finite")
}

/// Inverse of [`ultrametric_from_dendrogram`].
///
/// Fails with [`Error::AxiomViolation`] when `u` is not an ultrametric.
pub fn dendrogram_from_ultrametric(u: &MetricMatrix) -> Result<Dendrogram> {
    let report = check_ultrametric(u);
    if !report.holds {
        return Err(Error::AxiomViolation(format!(
            "not an ultrametric: worst triple {:?} exceeds the max bound by {}",
            report.worst_triple, report.worst_slack
        )));
    }
    // Single linkage reproduces an ultrametric exactly.
    Ok(agglomerate_matrix(u.values(), LinkageKind::Single))
}

/// Directed single linkage: `ũ(x,x')` is the smallest achievable maximum
/// dissimilarity along a directed chain from `x` to `x'`.
pub fn directed_single_linkage(net: &Network) -> MetricMatrix {
    let mut u = net.dissim().clone();
    minimax_closure(&mut u);
    MetricMatrix::new(u, MetricKind::QuasiUltrametric).expect("finite input")
}

// All-pairs minimax path recurrence (Floyd–Warshall with (min, max)).
pub(crate) fn minimax_closure(u: &mut SquareMatrix) {
    let n = u.dim();
    for k in 0..n {
        let row_k: Vec<f64> = u.row(k).to_vec();
        for i in 0..n {
            let uik = u.get(i, k);
            if i == k {
                continue;
            }
            let row_i = &mut u.as_mut_slice()[i * n..(i + 1) * n];
            for j in 0..n {
                let via = uik.max(row_k[j]);
                if via < row_i[j] {
                    row_i[j] = via;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn triangle() -> Network {
        // d(x,y) = 1, d(y,z) = 2, d(x,z) = 5
        Network::unlabeled(
            SquareMatrix::from_rows(&[[0.0, 1.0, 5.0], [1.0, 0.0, 2.0], [5.0, 2.0, 0.0]]).unwrap(),
        )
        .unwrap()
    }

    fn heights(d: &Dendrogram) -> Vec<f64> {
        d.merges().iter().map(|m| m.height).collect()
    }

    #[test]
    fn triangle_heights_per_linkage() {
        let net = triangle();
        assert_eq!(heights(&agglomerate(&net, LinkageKind::Single).unwrap()), [1.0, 2.0]);
        assert_eq!(heights(&agglomerate(&net, LinkageKind::Complete).unwrap()), [1.0, 5.0]);
        assert_eq!(heights(&agglomerate(&net, LinkageKind::Upgma).unwrap()), [1.0, 3.5]);
    }

    #[test]
    fn ward_triangle_height() {
        // Lance–Williams on squares: ((1+1)·25 + (1+1)·4 − 1·1) / 3 = 57/3.
        let d = agglomerate(&triangle(), LinkageKind::Ward).unwrap();
        assert_eq!(d.merges()[0].height, 1.0);
        assert!((d.merges()[1].height - 19f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn two_nodes_merge_at_their_distance() {
        let net = Network::unlabeled(SquareMatrix::from_rows(&[[0.0, 7.0], [7.0, 0.0]]).unwrap()).unwrap();
        for kind in LinkageKind::ALL {
            assert_eq!(heights(&agglomerate(&net, kind).unwrap()), [7.0]);
        }
    }

    #[test]
    fn single_linkage_ultrametric_on_triangle() {
        let u = linkage_ultrametric(&triangle(), LinkageKind::Single).unwrap();
        assert_eq!(u.get(0, 2), 2.0);
        assert_eq!(u.get(0, 1), 1.0);
        assert_eq!(u.get(1, 2), 2.0);
    }

    #[test]
    fn asymmetric_rejected() {
        let net = Network::unlabeled(SquareMatrix::from_rows(&[[0.0, 1.0], [5.0, 0.0]]).unwrap()).unwrap();
        assert_eq!(agglomerate(&net, LinkageKind::Single), Err(Error::RequiresSymmetric));
    }

    #[test]
    fn tie_break_prefers_smallest_representatives() {
        // All four pairs at distance 1 form a 4-cycle 0-1-2-3-0; diagonals 2.
        let m = SquareMatrix::from_rows(&[
            [0.0, 1.0, 2.0, 1.0],
            [1.0, 0.0, 1.0, 2.0],
            [2.0, 1.0, 0.0, 1.0],
            [1.0, 2.0, 1.0, 0.0],
        ])
        .unwrap();
        let d = agglomerate(&Network::unlabeled(m).unwrap(), LinkageKind::Single).unwrap();
        let pairs: Vec<(usize, usize)> = d.merges().iter().map(|m| (m.left, m.right)).collect();
        assert_eq!(pairs, [(0, 1), (4, 2), (5, 3)]);
    }

    #[test]
    fn single_leaf() {
        let net = Network::unlabeled(SquareMatrix::zeros(1)).unwrap();
        let d = agglomerate(&net, LinkageKind::Single).unwrap();
        assert!(d.merges().is_empty());
        let u = ultrametric_from_dendrogram(&d);
        assert_eq!(u.values().as_slice(), &[0.0]);
    }

    #[test]
    fn all_equal_ultrametric_is_a_star() {
        let u = MetricMatrix::new(
            SquareMatrix::from_fn(5, |i, j| if i == j { 0.0 } else { 4.0 }),
            MetricKind::Ultrametric,
        )
        .unwrap();
        let d = dendrogram_from_ultrametric(&u).unwrap();
        assert!(d.merges().iter().all(|m| m.height == 4.0));
        assert_eq!(d.partition_at(3.9).len(), 5);
        assert_eq!(d.partition_at(4.0), vec![vec![0, 1, 2, 3, 4]]);
    }

    #[test]
    fn dendrogram_from_non_ultrametric_fails() {
        let u = MetricMatrix::new(triangle().dissim().clone(), MetricKind::General).unwrap();
        assert!(matches!(dendrogram_from_ultrametric(&u), Err(Error::AxiomViolation(_))));
    }

    #[test]
    fn triangle_round_trip() {
        let u = linkage_ultrametric(&triangle(), LinkageKind::Single).unwrap();
        let d = dendrogram_from_ultrametric(&u).unwrap();
        assert_eq!(heights(&d), [1.0, 2.0]);
        assert_eq!(ultrametric_from_dendrogram(&d), u);
    }

    #[test]
    fn dsl_two_nodes() {
        let net = Network::unlabeled(SquareMatrix::from_rows(&[[0.0, 1.0], [5.0, 0.0]]).unwrap()).unwrap();
        let u = directed_single_linkage(&net);
        assert_eq!((u.get(0, 1), u.get(1, 0)), (1.0, 5.0));
    }

    #[test]
    fn dsl_uses_chains() {
        let net = Network::unlabeled(
            SquareMatrix::from_rows(&[[0.0, 1.0, 5.0], [10.0, 0.0, 1.0], [10.0, 10.0, 0.0]]).unwrap(),
        )
        .unwrap();
        let u = directed_single_linkage(&net);
        assert_eq!(u.get(0, 2), 1.0);
        assert_eq!(u.get(2, 0), 10.0);
    }

    #[test]
    fn dendrogram_validation() {
        let bad = vec![Merge { height: 1.0, left: 0, right: 0, id: 2, size: 2 }];
        assert!(Dendrogram::new(2, bad).is_err());
        let decreasing = vec![
            Merge { height: 2.0, left: 0, right: 1, id: 3, size: 2 },
            Merge { height: 1.0, left: 3, right: 2, id: 4, size: 3 },
        ];
        assert!(Dendrogram::new(3, decreasing).is_err());
    }
}
