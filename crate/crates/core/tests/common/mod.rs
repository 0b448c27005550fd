#![allow(dead_code)]

use cutcover::matrix::SquareMatrix;
use cutcover::{MetricKind, MetricMatrix, Network, ToleranceGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn triad_a() -> MetricMatrix {
    MetricMatrix::from_rows(
        &[[0.0, 1.0, 3.0], [2.0, 0.0, 3.0], [2.0, 1.0, 0.0]],
        MetricKind::QuasiUltrametric,
    )
    .unwrap()
}

pub fn triad_b() -> MetricMatrix {
    MetricMatrix::from_rows(
        &[[0.0, 1.0, 2.0], [3.0, 0.0, 3.0], [2.0, 1.0, 0.0]],
        MetricKind::QuasiUltrametric,
    )
    .unwrap()
}

pub const PLAYS: [&str; 7] = [
    "Cymbeline",
    "Othello",
    "Coriolanus",
    "Edward III",
    "Tamburlaine",
    "Edward II",
    "Jew of Malta",
];

/// Directed weights of the seven-play network, `(from, to, weight)` with
/// 1-based play numbers.
const PLAY_EDGES: [(usize, usize, f64); 42] = [
    (3, 1, 0.19), (1, 3, 0.19), (3, 2, 0.18), (2, 3, 0.21),
    (3, 6, 0.17), (6, 3, 0.26), (3, 7, 0.16), (7, 3, 0.25),
    (3, 5, 0.19), (5, 3, 0.26), (3, 4, 0.19), (4, 3, 0.22),
    (1, 2, 0.18), (2, 1, 0.20), (1, 6, 0.19), (6, 1, 0.27),
    (1, 7, 0.18), (7, 1, 0.26), (1, 5, 0.20), (5, 1, 0.30),
    (1, 4, 0.19), (4, 1, 0.21), (2, 6, 0.19), (6, 2, 0.26),
    (2, 7, 0.19), (7, 2, 0.24), (2, 5, 0.23), (5, 2, 0.29),
    (2, 4, 0.22), (4, 2, 0.23), (6, 7, 0.20), (7, 6, 0.18),
    (6, 5, 0.20), (5, 6, 0.20), (6, 4, 0.22), (4, 6, 0.17),
    (7, 5, 0.22), (5, 7, 0.24), (7, 4, 0.22), (4, 7, 0.19),
    (5, 4, 0.24), (4, 5, 0.19),
];

pub fn plays() -> Network {
    let mut m = SquareMatrix::zeros(7);
    for (from, to, w) in PLAY_EDGES {
        m.set(from - 1, to - 1, w);
    }
    Network::new(PLAYS.iter().map(|s| s.to_string()).collect(), m).unwrap()
}

/// Random network on `n` nodes with entries in `(0, 1]`; `ties` draws from a
/// handful of integers instead so equal values are common.
pub fn random_network(rng: &mut impl Rng, n: usize, symmetric: bool, ties: bool) -> Network {
    let mut m = SquareMatrix::zeros(n);
    let draw = |rng: &mut dyn rand::RngCore| -> f64 {
        if ties {
            rng.random_range(1..=4) as f64
        } else {
            1.0 - rng.random::<f64>()
        }
    };
    for i in 0..n {
        for j in 0..n {
            if i == j || (symmetric && j < i) {
                continue;
            }
            let v = draw(rng);
            m.set(i, j, v);
            if symmetric {
                m.set(j, i, v);
            }
        }
    }
    Network::unlabeled(m).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> ToleranceGraph {
    let mut g = ToleranceGraph::empty(n, 1.0);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < density {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// Smallest achievable largest step over all simple chains from `i` to `j`,
/// by exhaustive depth-first enumeration.
pub fn chain_oracle(d: &SquareMatrix, i: usize, j: usize) -> f64 {
    fn go(d: &SquareMatrix, at: usize, target: usize, seen: &mut Vec<bool>, worst: f64, best: &mut f64) {
        if at == target {
            *best = best.min(worst);
            return;
        }
        for next in 0..d.dim() {
            if !seen[next] {
                seen[next] = true;
                go(d, next, target, seen, worst.max(d.get(at, next)), best);
                seen[next] = false;
            }
        }
    }
    if i == j {
        return 0.0;
    }
    let mut seen = vec![false; d.dim()];
    seen[i] = true;
    let mut best = f64::INFINITY;
    go(d, i, j, &mut seen, 0.0, &mut best);
    best
}

pub fn chain_oracle_matrix(d: &SquareMatrix) -> SquareMatrix {
    SquareMatrix::from_fn(d.dim(), |i, j| chain_oracle(d, i, j))
}

/// Maximal cliques by testing every vertex subset.
pub fn clique_oracle(g: &ToleranceGraph) -> Vec<Vec<usize>> {
    let n = g.len();
    let is_clique = |mask: u32| {
        (0..n).all(|i| {
            mask & (1 << i) == 0 || (i + 1..n).all(|j| mask & (1 << j) == 0 || g.has_edge(i, j))
        })
    };
    let cliques: Vec<u32> = (1u32..1 << n).filter(|&m| is_clique(m)).collect();
    let mut out: Vec<Vec<usize>> = cliques
        .iter()
        .filter(|&&m| !cliques.iter().any(|&o| o != m && o & m == m))
        .map(|&m| (0..n).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    out.sort();
    out
}

/// Convex combination of DSL outputs on random asymmetric networks.
pub fn random_quasi_cut_metric(rng: &mut impl Rng, n: usize, parts: usize) -> MetricMatrix {
    let list: Vec<MetricMatrix> = (0..parts)
        .map(|_| {
            let ties = rng.random();
            cutcover::directed_single_linkage(&random_network(rng, n, false, ties))
        })
        .collect();
    let raw: Vec<f64> = (0..parts).map(|_| rng.random::<f64>() + 0.05).collect();
    let total: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| w / total).collect();
    cutcover::average_matrices(&list, &weights).unwrap()
}

/// Convex combination of single-linkage ultrametrics on random networks.
pub fn random_cut_metric(rng: &mut impl Rng, n: usize, parts: usize) -> MetricMatrix {
    let list: Vec<MetricMatrix> = (0..parts)
        .map(|_| {
            let ties = rng.random();
            let net = random_network(rng, n, true, ties);
            cutcover::ultrametric_from_dendrogram(
                &cutcover::agglomerate(&net, cutcover::LinkageKind::Single).unwrap(),
            )
        })
        .collect();
    let w = vec![1.0 / parts as f64; parts];
    cutcover::average_matrices(&list, &w).unwrap()
}
