//! Coverings read off a cut metric, full-resolution sweeps, the overlapping
//! function and resolution selection.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graph::{
    canonicalize, maximal_cliques_limited, tolerance_graph, CliqueTracker, DEFAULT_CLIQUE_LIMIT,
};
use crate::metric::MetricMatrix;

/// Blocks of nodes at one resolution.
///
/// Blocks are sorted ascending and listed in lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct Covering {
    n: usize,
    delta: f64,
    blocks: Vec<Vec<usize>>,
}

impl Covering {
    /// Canonicalizes `blocks` and checks that they cover `0..n` without
    /// duplicate or nested blocks.
    pub fn new(n: usize, delta: f64, blocks: Vec<Vec<usize>>) -> Result<Self> {
        let mut blocks = canonicalize(blocks);
        for b in &mut blocks {
            b.dedup();
        }
        let mut seen = vec![false; n];
        for (k, b) in blocks.iter().enumerate() {
            if b.is_empty() {
                return Err(Error::Structural(format!("block {k} is empty")));
            }
            for &x in b {
                if x >= n {
                    return Err(Error::Structural(format!("block {k} references node {x} but n = {n}")));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = seen.iter().position(|s| !s) {
            return Err(Error::Structural(format!("node {x} is not covered")));
        }
        for i in 0..blocks.len() {
            for j in 0..blocks.len() {
                if i != j && is_subset(&blocks[i], &blocks[j]) {
                    return Err(Error::Structural(format!(
                        "block {i} is contained in block {j}"
                    )));
                }
            }
        }
        Ok(Covering { n, delta, blocks })
    }

    pub(crate) fn from_canonical(n: usize, delta: f64, blocks: Vec<Vec<usize>>) -> Self {
        Covering { n, delta, blocks }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Membership count of every node.
    pub fn multiplicity(&self) -> Vec<usize> {
        let mut count = vec![0; self.n];
        for b in &self.blocks {
            for &x in b {
                count[x] += 1;
            }
        }
        count
    }

    /// Nodes lying in two or more blocks.
    pub fn overlapping_nodes(&self) -> Vec<usize> {
        self.multiplicity()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c >= 2)
            .map(|(x, _)| x)
            .collect()
    }

    pub fn overlap_count(&self) -> usize {
        self.multiplicity().iter().filter(|&&c| c >= 2).count()
    }

    pub fn is_partition(&self) -> bool {
        self.overlap_count() == 0
    }

    pub fn is_singletons(&self) -> bool {
        self.blocks.len() == self.n
    }

    pub fn is_single_block(&self) -> bool {
        self.blocks.len() == 1
    }

    /// Pairs `(i, j)`, `i < j`, that share a block.
    pub fn co_membership(&self) -> Vec<FixedBitSet> {
        let mut adj = vec![FixedBitSet::with_capacity(self.n); self.n];
        for b in &self.blocks {
            for (k, &i) in b.iter().enumerate() {
                for &j in &b[k + 1..] {
                    adj[i].insert(j);
                    adj[j].insert(i);
                }
            }
        }
        adj
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.len() <= b.len() && a.iter().all(|x| b.binary_search(x).is_ok())
}

/// Maximal cliques of the tolerance graph at `delta`.
pub fn covering_at(m: &MetricMatrix, delta: f64) -> Result<Covering> {
    covering_at_limited(m, delta, DEFAULT_CLIQUE_LIMIT)
}

pub fn covering_at_limited(m: &MetricMatrix, delta: f64, limit: usize) -> Result<Covering> {
    let g = tolerance_graph(m, delta);
    let blocks = maximal_cliques_limited(&g, limit)?;
    Ok(Covering::from_canonical(m.dim(), delta, blocks))
}

/// Coverings at every breakpoint; constant on `[v_t, v_{t+1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct NestedCovering {
    breakpoints: Vec<f64>,
    coverings: Vec<Covering>,
}

impl NestedCovering {
    pub fn new(breakpoints: Vec<f64>, coverings: Vec<Covering>) -> Result<Self> {
        if breakpoints.len() != coverings.len() || breakpoints.is_empty() {
            return Err(Error::Structural(
                "need one covering per breakpoint and at least one breakpoint".into(),
            ));
        }
        if breakpoints.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::Structural("breakpoints must be strictly ascending".into()));
        }
        let n = coverings[0].n();
        if coverings.iter().any(|c| c.n() != n) {
            return Err(Error::Structural("coverings disagree on node count".into()));
        }
        Ok(NestedCovering {
            breakpoints,
            coverings,
        })
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn coverings(&self) -> &[Covering] {
        &self.coverings
    }

    pub fn len(&self) -> usize {
        self.breakpoints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.breakpoints.is_empty()
    }

    /// Covering in force at `delta` (the last breakpoint `≤ delta`).
    pub fn at(&self, delta: f64) -> &Covering {
        let k = self.breakpoints.partition_point(|&v| v <= delta);
        &self.coverings[k.saturating_sub(1)]
    }

    /// First consecutive pair `(t, t+1)` whose adjacency is not nested,
    /// with an offending node pair.
    pub fn nestedness_violation(&self) -> Option<(usize, (usize, usize))> {
        let mut prev = self.coverings[0].co_membership();
        for t in 1..self.coverings.len() {
            let next = self.coverings[t].co_membership();
            for (i, row) in prev.iter().enumerate() {
                if let Some(j) = row.ones().find(|&j| !next[i].contains(j)) {
                    return Some((t - 1, (i, j)));
                }
            }
            prev = next;
        }
        None
    }

    pub fn is_tolerance_nested(&self) -> bool {
        self.nestedness_violation().is_none()
    }
}

/// `{0}` together with the distinct values of the symmetric part.
pub fn breakpoints(m: &MetricMatrix) -> Vec<f64> {
    let sym = m.symmetric_part();
    let n = sym.dim();
    let mut values: Vec<f64> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| sym.get(i, j))
        .filter(|&v| v > 0.0)
        .collect();
    values.push(0.0);
    values.sort_by(f64::total_cmp);
    values.dedup();
    values
}

// Feeds tolerance edges in ascending order into a clique tracker and calls
// `visit` once per breakpoint with the state in force there.
fn walk<F>(m: &MetricMatrix, limit: usize, mut visit: F) -> Result<()>
where
    F: FnMut(f64, &CliqueTracker) -> Result<()>,
{
    let sym = m.symmetric_part();
    let n = sym.dim();
    let mut pairs: Vec<(f64, usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| (sym.get(i, j), i, j))
        .collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));
    let mut tracker = CliqueTracker::new(n, limit);
    let mut k = 0;
    while k < pairs.len() && pairs[k].0 <= 0.0 {
        tracker.add_edge(pairs[k].1, pairs[k].2)?;
        k += 1;
    }
    visit(0.0, &tracker)?;
    while k < pairs.len() {
        let v = pairs[k].0;
        while k < pairs.len() && pairs[k].0 == v {
            tracker.add_edge(pairs[k].1, pairs[k].2)?;
            k += 1;
        }
        visit(v, &tracker)?;
    }
    Ok(())
}

/// Coverings at every breakpoint.
///
/// Stores one covering per distinct matrix value; for large inputs prefer
/// [`profile_sweep`].
pub fn sweep(m: &MetricMatrix) -> Result<NestedCovering> {
    sweep_limited(m, DEFAULT_CLIQUE_LIMIT)
}

pub fn sweep_limited(m: &MetricMatrix, limit: usize) -> Result<NestedCovering> {
    let n = m.dim();
    let mut bps = Vec::new();
    let mut covs = Vec::new();
    walk(m, limit, |v, t| {
        bps.push(v);
        covs.push(Covering::from_canonical(n, v, t.cliques()));
        Ok(())
    })?;
    NestedCovering::new(bps, covs)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverlapSample {
    pub delta: f64,
    /// `f_ol`: nodes in two or more blocks.
    pub overlap: usize,
    /// Number of blocks `m(δ)`.
    pub blocks: usize,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OverlapProfile {
    pub samples: Vec<OverlapSample>,
    pub clusterable_at: Option<Vec<f64>>,
    pub min_local_min: Option<(f64, usize)>,
}

impl OverlapProfile {
    /// Builds a profile from samples and fills in the derived verdicts.
    pub fn from_samples(samples: Vec<OverlapSample>, n: usize) -> Self {
        let qualifying: Vec<f64> = qualifying_indices(&samples, n)
            .into_iter()
            .map(|k| samples[k].delta)
            .collect();
        let mut p = OverlapProfile {
            samples,
            clusterable_at: (!qualifying.is_empty()).then_some(qualifying),
            min_local_min: None,
        };
        p.min_local_min = min_local_minimum(&p);
        p
    }

    pub fn is_clusterable(&self) -> bool {
        self.clusterable_at.is_some()
    }
}

// Zero-overlap, non-trivial breakpoints. Until the first overlap appears the
// coverings are merely the opening steps of a hierarchy and are skipped,
// unless no overlap ever appears.
fn qualifying_indices(samples: &[OverlapSample], n: usize) -> Vec<usize> {
    let start = samples
        .iter()
        .position(|s| s.overlap > 0)
        .unwrap_or(0);
    (start..samples.len())
        .filter(|&k| {
            let s = samples[k];
            s.overlap == 0 && s.blocks > 1 && s.blocks < n
        })
        .collect()
}

pub fn overlapping_function(nc: &NestedCovering) -> OverlapProfile {
    let n = nc.coverings[0].n();
    let samples = nc
        .coverings
        .iter()
        .map(|c| OverlapSample {
            delta: c.delta(),
            overlap: c.overlap_count(),
            blocks: c.len(),
        })
        .collect();
    OverlapProfile::from_samples(samples, n)
}

/// Breakpoints whose covering is a non-trivial partition, with the partition.
pub fn clusterability(nc: &NestedCovering) -> Option<Vec<(f64, Covering)>> {
    let profile = overlapping_function(nc);
    let n = nc.coverings[0].n();
    let found: Vec<(f64, Covering)> = qualifying_indices(&profile.samples, n)
        .into_iter()
        .map(|k| (nc.breakpoints[k], nc.coverings[k].clone()))
        .collect();
    (!found.is_empty()).then_some(found)
}

/// Smallest interior local minimum of `f_ol`.
///
/// Runs of equal value count once, at their leftmost breakpoint; the first and
/// last runs are never interior. Ties go to the smallest resolution.
pub fn min_local_minimum(p: &OverlapProfile) -> Option<(f64, usize)> {
    if p.samples.len() < 3 {
        return None;
    }
    let mut runs: Vec<(f64, usize)> = Vec::new();
    for s in &p.samples {
        if runs.last().map(|r| r.1) != Some(s.overlap) {
            runs.push((s.delta, s.overlap));
        }
    }
    let mut best: Option<(f64, usize)> = None;
    for k in 1..runs.len().saturating_sub(1) {
        let (delta, value) = runs[k];
        if value <= runs[k - 1].1 && value <= runs[k + 1].1 && best.is_none_or(|b| value < b.1) {
            best = Some((delta, value));
        }
    }
    best
}

/// Overlap profile and zero-overlap partitions of a sweep, without storing
/// every covering.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileSweep {
    pub profile: OverlapProfile,
    /// Coverings at every `clusterable_at` resolution, in the same order.
    pub partitions: Vec<Covering>,
}

pub fn profile_sweep(m: &MetricMatrix) -> Result<ProfileSweep> {
    profile_sweep_limited(m, DEFAULT_CLIQUE_LIMIT)
}

pub fn profile_sweep_limited(m: &MetricMatrix, limit: usize) -> Result<ProfileSweep> {
    let n = m.dim();
    let mut samples = Vec::new();
    let mut leading = Vec::new();
    let mut later = Vec::new();
    let mut seen_overlap = false;
    walk(m, limit, |v, t| {
        let s = OverlapSample {
            delta: v,
            overlap: t.overlap_count(),
            blocks: t.block_count(),
        };
        samples.push(s);
        seen_overlap |= s.overlap > 0;
        if s.overlap == 0 && s.blocks > 1 && s.blocks < n {
            let c = Covering::from_canonical(n, v, t.cliques());
            if seen_overlap {
                later.push(c);
            } else {
                leading.push(c);
            }
        }
        Ok(())
    })?;
    let partitions = if seen_overlap { later } else { leading };
    Ok(ProfileSweep {
        profile: OverlapProfile::from_samples(samples, n),
        partitions,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::MetricKind;

    fn triad_avg() -> MetricMatrix {
        MetricMatrix::from_rows(
            &[[0.0, 1.0, 2.5], [2.5, 0.0, 3.0], [2.0, 1.0, 0.0]],
            MetricKind::QuasiCutMetric,
        )
        .unwrap()
    }

    fn profile(values: &[usize]) -> OverlapProfile {
        OverlapProfile {
            samples: values
                .iter()
                .enumerate()
                .map(|(k, &v)| OverlapSample {
                    delta: k as f64,
                    overlap: v,
                    blocks: 2,
                })
                .collect(),
            ..Default::default()
        }
    }

    #[test]
    fn triad_avg_coverings() {
        let m = triad_avg();
        assert_eq!(covering_at(&m, 2.5).unwrap().blocks(), &[vec![0, 1], vec![0, 2]]);
        assert_eq!(covering_at(&m, 2.0).unwrap().blocks(), &[vec![0], vec![1], vec![2]]);
        assert_eq!(covering_at(&m, 3.0).unwrap().blocks(), &[vec![0, 1, 2]]);
        assert!(covering_at(&m, 0.0).unwrap().is_singletons());
    }

    #[test]
    fn triad_avg_sweep_and_profile() {
        let nc = sweep(&triad_avg()).unwrap();
        assert_eq!(nc.breakpoints(), &[0.0, 2.5, 3.0]);
        let p = overlapping_function(&nc);
        let f: Vec<usize> = p.samples.iter().map(|s| s.overlap).collect();
        assert_eq!(f, vec![0, 1, 0]);
        assert!(clusterability(&nc).is_none());
        assert!(nc.is_tolerance_nested());
        assert_eq!(nc.at(2.7).blocks(), &[vec![0, 1], vec![0, 2]]);
        assert_eq!(nc.at(1.0).len(), 3);
    }

    #[test]
    fn single_node_sweep() {
        let m = MetricMatrix::from_rows(&[[0.0]], MetricKind::CutMetric).unwrap();
        let nc = sweep(&m).unwrap();
        assert_eq!(nc.breakpoints(), &[0.0]);
        assert_eq!(nc.coverings()[0].blocks(), &[vec![0]]);
    }

    #[test]
    fn local_minimum_rule() {
        assert_eq!(min_local_minimum(&profile(&[0, 3, 1, 4, 2, 0])), Some((2.0, 1)));
        assert_eq!(min_local_minimum(&profile(&[0, 5, 0])), None);
        assert_eq!(min_local_minimum(&profile(&[0, 1])), None);
        // Plateau reported at its left end.
        assert_eq!(min_local_minimum(&profile(&[0, 4, 2, 2, 2, 5, 0])), Some((2.0, 2)));
        // Ties go to the smaller resolution.
        assert_eq!(min_local_minimum(&profile(&[0, 4, 1, 3, 1, 2, 0])), Some((2.0, 1)));
    }

    #[test]
    fn covering_validation() {
        assert!(Covering::new(3, 1.0, vec![vec![0, 1], vec![2]]).is_ok());
        assert!(Covering::new(3, 1.0, vec![vec![0, 1]]).is_err());
        assert!(Covering::new(3, 1.0, vec![vec![0, 1, 2], vec![2]]).is_err());
        assert!(Covering::new(3, 1.0, vec![vec![0, 1, 2], vec![0, 1, 2]]).is_err());
        assert!(Covering::new(3, 1.0, vec![vec![0, 1, 5], vec![2]]).is_err());
    }

    #[test]
    fn hierarchy_partitions_all_qualify() {
        // An ultrametric never overlaps; every intermediate level is reported.
        let u = MetricMatrix::from_rows(
            &[
                [0.0, 1.0, 3.0, 3.0],
                [1.0, 0.0, 3.0, 3.0],
                [3.0, 3.0, 0.0, 2.0],
                [3.0, 3.0, 2.0, 0.0],
            ],
            MetricKind::Ultrametric,
        )
        .unwrap();
        let nc = sweep(&u).unwrap();
        let found = clusterability(&nc).unwrap();
        let deltas: Vec<f64> = found.iter().map(|(d, _)| *d).collect();
        assert_eq!(deltas, vec![1.0, 2.0]);
        let ps = profile_sweep(&u).unwrap();
        assert_eq!(ps.profile.clusterable_at, Some(vec![1.0, 2.0]));
        assert_eq!(ps.partitions.len(), 2);
        assert_eq!(ps.partitions[1].blocks(), &[vec![0, 1], vec![2, 3]]);
    }

    #[test]
    fn leading_partitions_are_skipped_once_overlap_appears() {
        // Path 0-1-2 at 1 overlaps at node 1; joining 3 at 4 yields a partition.
        let m = MetricMatrix::from_rows(
            &[
                [0.0, 0.5, 2.0, 5.0],
                [0.5, 0.0, 1.0, 5.0],
                [2.0, 1.0, 0.0, 4.0],
                [5.0, 5.0, 4.0, 0.0],
            ],
            MetricKind::CutMetric,
        )
        .unwrap();
        let nc = sweep(&m).unwrap();
        let f: Vec<usize> = overlapping_function(&nc).samples.iter().map(|s| s.overlap).collect();
        assert_eq!(nc.breakpoints(), &[0.0, 0.5, 1.0, 2.0, 4.0, 5.0]);
        assert_eq!(f, vec![0, 0, 1, 0, 1, 0]);
        let found = clusterability(&nc).unwrap();
        assert_eq!(found.len(), 1);
        assert_eq!(found[0].0, 2.0);
        assert_eq!(found[0].1.blocks(), &[vec![0, 1, 2], vec![3]]);
        let ps = profile_sweep(&m).unwrap();
        assert_eq!(ps.profile.clusterable_at, Some(vec![2.0]));
        assert_eq!(ps.partitions, vec![found[0].1.clone()]);
    }
}
