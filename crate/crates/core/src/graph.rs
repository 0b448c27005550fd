//! Tolerance graphs and maximal clique enumeration.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::metric::MetricMatrix;

/// Default abort threshold for maximal clique enumeration.
pub const DEFAULT_CLIQUE_LIMIT: usize = 1_000_000;

/// Undirected graph of the tolerance relation at one resolution.
///
/// Reflexivity is implicit: self-loops are never stored.
#[derive(Debug, Clone, PartialEq)]
pub struct ToleranceGraph {
    delta: f64,
    adj: Vec<FixedBitSet>,
}

impl ToleranceGraph {
    pub fn empty(n: usize, delta: f64) -> Self {
        ToleranceGraph {
            delta,
            adj: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn from_edges(n: usize, delta: f64, edges: &[(usize, usize)]) -> Self {
        let mut g = ToleranceGraph::empty(n, delta);
        for &(i, j) in edges {
            g.add_edge(i, j);
        }
        g
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.adj[i].insert(j);
            self.adj[j].insert(i);
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        i != j && self.adj[i].contains(j)
    }

    pub fn neighbors(&self, i: usize) -> &FixedBitSet {
        &self.adj[i]
    }

    /// Edges as `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(i, row)| row.ones().filter(move |&j| j > i).map(move |j| (i, j)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|r| r.count_ones(..)).sum::<usize>() / 2
    }
}

/// `x ↔ x'` whenever the (max-symmetrized, for directed kinds) value is `≤ delta`.
pub fn tolerance_graph(m: &MetricMatrix, delta: f64) -> ToleranceGraph {
    let sym = m.symmetric_part();
    let n = sym.dim();
    let mut g = ToleranceGraph::empty(n, delta);
    for i in 0..n {
        for j in i + 1..n {
            if sym.get(i, j) <= delta {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// All maximal cliques, canonicalized: each sorted ascending, the list
/// sorted lexicographically. Isolated vertices come out as singletons.
pub fn maximal_cliques(g: &ToleranceGraph) -> Result<Vec<Vec<usize>>> {
    maximal_cliques_limited(g, DEFAULT_CLIQUE_LIMIT)
}

pub fn maximal_cliques_limited(g: &ToleranceGraph, limit: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.len();
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut emit = |c: &[usize]| -> Result<()> {
        out.push(c.to_vec());
        if out.len() > limit {
            return Err(Error::CliqueLimit { limit });
        }
        Ok(())
    };
    // Outer loop in degeneracy order keeps the candidate sets small.
    let order = degeneracy_order(&g.adj);
    let mut later = FixedBitSet::with_capacity(n);
    later.insert_range(..);
    let mut earlier = FixedBitSet::with_capacity(n);
    let mut r = Vec::with_capacity(16);
    for v in order {
        later.set(v, false);
        let mut p = g.adj[v].clone();
        p.intersect_with(&later);
        let mut x = g.adj[v].clone();
        x.intersect_with(&earlier);
        r.push(v);
        expand(&g.adj, &mut r, p, x, &mut emit)?;
        r.pop();
        earlier.insert(v);
    }
    Ok(canonicalize(out))
}

pub(crate) fn canonicalize(mut cliques: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for c in &mut cliques {
        c.sort_unstable();
    }
    cliques.sort();
    cliques
}

// Bron–Kerbosch with Tomita pivoting.
fn expand<F>(
    adj: &[FixedBitSet],
    r: &mut Vec<usize>,
    mut p: FixedBitSet,
    mut x: FixedBitSet,
    emit: &mut F,
) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    if p.is_clear() {
        if x.is_clear() {
            emit(r)?;
        }
        return Ok(());
    }
    // No pivot can cover more than |P| (from X) or |P| - 1 (from P); stop
    // scanning once one does, which keeps dense graphs cheap.
    let p_len = p.count_ones(..);
    let mut pivot = usize::MAX;
    let mut best = 0;
    for (u, bound) in x.ones().map(|u| (u, p_len)).chain(p.ones().map(|u| (u, p_len - 1))) {
        let covered = p.intersection_count(&adj[u]);
        if pivot == usize::MAX || covered > best {
            pivot = u;
            best = covered;
        }
        if covered == bound {
            break;
        }
    }
    let mut candidates = p.clone();
    candidates.difference_with(&adj[pivot]);
    for v in candidates.ones() {
        let mut np = p.clone();
        np.intersect_with(&adj[v]);
        let mut nx = x.clone();
        nx.intersect_with(&adj[v]);
        r.push(v);
        expand(adj, r, np, nx, emit)?;
        r.pop();
        p.set(v, false);
        x.insert(v);
    }
    Ok(())
}

fn degeneracy_order(adj: &[FixedBitSet]) -> Vec<usize> {
    let n = adj.len();
    let mut degree: Vec<usize> = adj.iter().map(|r| r.count_ones(..)).collect();
    let mut removed = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (degree[v], v))
            .expect("vertices remain");
        removed[v] = true;
        order.push(v);
        for u in adj[v].ones() {
            if !removed[u] {
                degree[u] -= 1;
            }
        }
    }
    order
}

/// Covering by classes: closed neighbourhoods with dominated ones removed.
pub fn covering_by_classes(g: &ToleranceGraph) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut hoods: Vec<FixedBitSet> = (0..n)
        .map(|i| {
            let mut h = g.adj[i].clone();
            h.insert(i);
            h
        })
        .collect();
    hoods.sort_by(|a, b| a.ones().cmp(b.ones()));
    hoods.dedup();
    let keep: Vec<Vec<usize>> = hoods
        .iter()
        .enumerate()
        .filter(|(i, h)| {
            !hoods
                .iter()
                .enumerate()
                .any(|(j, other)| *i != j && h.is_subset(other))
        })
        .map(|(_, h)| h.ones().collect())
        .collect();
    canonicalize(keep)
}

/// Maintains the set of maximal cliques while edges are only ever added.
///
/// Adding `(u, v)` creates the cliques `{u, v} ∪ K` for every maximal clique
/// `K` of the common neighbourhood of `u` and `v`, and retires exactly those
/// old cliques through `u` (or `v`) that the new edge lets absorb `v` (or
/// `u`). Cliques avoiding both endpoints are unaffected.
#[derive(Debug, Clone)]
pub struct CliqueTracker {
    adj: Vec<FixedBitSet>,
    cliques: Vec<Option<FixedBitSet>>,
    free: Vec<usize>,
    by_node: Vec<Vec<usize>>,
    membership: Vec<usize>,
    overlapping: usize,
    live: usize,
    limit: usize,
}

impl CliqueTracker {
    /// Edgeless graph: every node is its own clique.
    pub fn new(n: usize, limit: usize) -> Self {
        let mut t = CliqueTracker {
            adj: vec![FixedBitSet::with_capacity(n); n],
            cliques: Vec::with_capacity(n),
            free: Vec::new(),
            by_node: vec![Vec::new(); n],
            membership: vec![0; n],
            overlapping: 0,
            live: 0,
            limit,
        };
        for v in 0..n {
            let mut c = FixedBitSet::with_capacity(n);
            c.insert(v);
            t.insert(c);
        }
        t
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    /// Number of maximal cliques (blocks).
    pub fn block_count(&self) -> usize {
        self.live
    }

    /// Number of nodes lying in two or more cliques.
    pub fn overlap_count(&self) -> usize {
        self.overlapping
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u != v && self.adj[u].contains(v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v || self.adj[u].contains(v) {
            return Ok(());
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);

        for (a, b) in [(u, v), (v, u)] {
            let ids = self.by_node[a].clone();
            for id in ids {
                let absorbed = {
                    let c = self.cliques[id].as_ref().expect("indexed clique is live");
                    !c.contains(b) && c.ones().all(|x| x == a || self.adj[b].contains(x))
                };
                if absorbed {
                    self.remove(id);
                }
            }
        }

        let mut common = self.adj[u].clone();
        common.intersect_with(&self.adj[v]);
        let mut found: Vec<Vec<usize>> = Vec::new();
        let limit = self.limit;
        let live = self.live;
        let mut emit = |c: &[usize]| -> Result<()> {
            found.push(c.to_vec());
            if live + found.len() > limit {
                return Err(Error::CliqueLimit { limit });
            }
            Ok(())
        };
        let mut r = Vec::new();
        expand(
            &self.adj,
            &mut r,
            common,
            FixedBitSet::with_capacity(self.len()),
            &mut emit,
        )?;
        for k in found {
            let mut c = FixedBitSet::with_capacity(self.len());
            c.insert(u);
            c.insert(v);
            k.into_iter().for_each(|x| c.insert(x));
            self.insert(c);
        }
        Ok(())
    }

    fn insert(&mut self, c: FixedBitSet) {
        let id = match self.free.pop() {
            Some(id) => id,
            None => {
                self.cliques.push(None);
                self.cliques.len() - 1
            }
        };
        for x in c.ones() {
            self.by_node[x].push(id);
            self.membership[x] += 1;
            if self.membership[x] == 2 {
                self.overlapping += 1;
            }
        }
        self.cliques[id] = Some(c);
        self.live += 1;
    }

    fn remove(&mut self, id: usize) {
        let c = self.cliques[id].take().expect("removing a live clique");
        for x in c.ones() {
            self.by_node[x].retain(|&k| k != id);
            self.membership[x] -= 1;
            if self.membership[x] == 1 {
                self.overlapping -= 1;
            }
        }
        self.free.push(id);
        self.live -= 1;
    }

    /// Current cliques, canonicalized.
    pub fn cliques(&self) -> Vec<Vec<usize>> {
        canonicalize(
            self.cliques
                .iter()
                .flatten()
                .map(|c| c.ones().collect())
                .collect(),
        )
    }

    pub fn graph(&self, delta: f64) -> ToleranceGraph {
        ToleranceGraph {
            delta,
            adj: self.adj.clone(),
        }
    }
}
