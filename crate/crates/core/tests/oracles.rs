mod common;

use common::*;
use cutcover::graph::CliqueTracker;
use cutcover::{
    agglomerate, directed_single_linkage, maximal_cliques, ultrametric_from_dendrogram,
    LinkageKind,
};
use rand::Rng;

#[test]
fn single_linkage_matches_chain_oracle() {
    let mut rng = rng(11);
    for case in 0..120 {
        let n = rng.random_range(1..=7);
        let net = random_network(&mut rng, n, true, case % 2 == 0);
        let u = ultrametric_from_dendrogram(&agglomerate(&net, LinkageKind::Single).unwrap());
        assert_eq!(u.values(), &chain_oracle_matrix(net.dissim()), "case {case}");
    }
}

#[test]
fn directed_single_linkage_matches_chain_oracle() {
    let mut rng = rng(12);
    for case in 0..120 {
        let n = rng.random_range(1..=7);
        let net = random_network(&mut rng, n, false, case % 2 == 0);
        let u = directed_single_linkage(&net);
        assert_eq!(u.values(), &chain_oracle_matrix(net.dissim()), "case {case}");
    }
}

#[test]
fn seven_play_network_matches_chain_oracle() {
    let net = plays();
    assert_eq!(directed_single_linkage(&net).values(), &chain_oracle_matrix(net.dissim()));
}

#[test]
fn maximal_cliques_match_subset_enumeration() {
    let mut rng = rng(13);
    for case in 0..120 {
        let n = rng.random_range(0..=12);
        let density = rng.random_range(0.0..1.0);
        let g = random_graph(&mut rng, n, density);
        assert_eq!(maximal_cliques(&g).unwrap(), clique_oracle(&g), "case {case}");
    }
}

#[test]
fn incremental_cliques_match_subset_enumeration() {
    let mut rng = rng(14);
    for case in 0..40 {
        let n = rng.random_range(1..=10);
        let g = random_graph(&mut rng, n, 0.6);
        let mut tracker = CliqueTracker::new(n, usize::MAX);
        let mut partial = cutcover::ToleranceGraph::empty(n, 1.0);
        for (u, v) in g.edges() {
            tracker.add_edge(u, v).unwrap();
            partial.add_edge(u, v);
            let got = tracker.cliques();
            assert_eq!(got, clique_oracle(&partial), "case {case}");
            let overlap = (0..n)
                .filter(|&x| got.iter().filter(|c| c.contains(&x)).count() > 1)
                .count();
            assert_eq!(tracker.overlap_count(), overlap);
        }
    }
}
