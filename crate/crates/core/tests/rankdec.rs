mod common;

use ehf_core::detect::{classify_basic, BasicKind};
use ehf_core::generators::{
    flat_paths_of_length, is_in_class, long_pyramid, random_extended_basic, random_long_pyramid,
};
use ehf_core::graph::named::{complete, cycle};
use ehf_core::oracle::{brute_rank_width, OracleBudget};
use ehf_core::rankdec::{
    caterpillar_decomposition, combine_rank_decompositions, decomposition_width,
    rank_decomposition, rank_decomposition_basic, rank_decomposition_node, RankDecomposition,
};
use ehf_core::twojoin::build_decomposition_tree;
use ehf_core::{Graph, VertexSet};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Cut-rank by elimination on rows packed into `u128`, independent of the
/// library's matrix code.
fn cut_rank_oracle(g: &Graph, side: &VertexSet) -> usize {
    let cols: Vec<usize> = (0..g.n()).filter(|&v| !side.contains(v)).collect();
    let mut rows: Vec<u128> = side
        .iter()
        .map(|u| {
            cols.iter()
                .enumerate()
                .filter(|&(_, &w)| g.has_edge(u, w))
                .fold(0, |r, (j, _)| r | 1 << j)
        })
        .collect();
    let mut rank = 0;
    for bit in 0..cols.len() {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i] >> bit & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for i in 0..rows.len() {
            if i != rank && rows[i] >> bit & 1 == 1 {
                rows[i] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

/// Bijection between leaves and vertices, and every width rechecked.
fn audit(g: &Graph, d: &RankDecomposition) -> usize {
    d.validate(g.n()).unwrap();
    let mut seen = vec![false; d.nodes];
    for &t in &d.leaf_map {
        assert!(!seen[t], "two vertices on one leaf");
        seen[t] = true;
    }
    let widths = d.widths(g);
    for (side, w) in d.edge_sides(g.n()).iter().zip(&widths) {
        assert_eq!(cut_rank_oracle(g, side), *w);
    }
    widths.into_iter().max().unwrap_or(0)
}

/// A random set of disjoint flat paths of length 3 to 6.
fn random_paths(rng: &mut impl Rng, g: &Graph) -> Vec<Vec<usize>> {
    let mut all: Vec<Vec<usize>> = (3..=6).flat_map(|l| flat_paths_of_length(g, l)).collect();
    all.shuffle(rng);
    let want = rng.gen_range(0..=3);
    let mut used = VertexSet::new(g.n());
    let mut out = Vec::new();
    for p in all {
        if out.len() == want {
            break;
        }
        let set = VertexSet::from_iter(g.n(), p.iter().copied());
        if set.is_disjoint(&used) {
            used.union_with(&set);
            out.push(p);
        }
    }
    out
}

fn check_basic_property(g: &Graph, kind: &BasicKind, rng: &mut impl Rng) {
    for _ in 0..20 {
        let s = random_paths(rng, g);
        let d = rank_decomposition_basic(g, &s, kind).unwrap();
        assert!(audit(g, &d) <= 3);
        for p in &s {
            assert!(
                d.is_separated(g.n(), &VertexSet::from_iter(g.n(), p.iter().copied())),
                "{p:?} not separated"
            );
        }
    }
}

#[test]
fn pyramids_have_the_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..10 {
        let g = random_long_pyramid(&mut rng).graph;
        let kind = classify_basic(&g);
        check_basic_property(&g, &kind, &mut rng);
    }
}

#[test]
fn extended_basics_have_the_property() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    while checked < 12 {
        let branches = rng.gen_range(2..=4);
        let g = random_extended_basic(&mut rng, branches).graph;
        if !is_in_class(&g) {
            continue;
        }
        let kind = classify_basic(&g);
        check_basic_property(&g, &kind, &mut rng);
        checked += 1;
    }
}

#[test]
fn cliques_and_holes() {
    for t in 2..=12 {
        let g = complete(t);
        assert!(audit(&g, &rank_decomposition(&g).unwrap()) <= 1);
    }
    for n in 4..=12 {
        let g = cycle(n);
        let d = caterpillar_decomposition(n, &(0..n).collect::<Vec<_>>());
        assert_eq!(audit(&g, &d), 2);
        assert!(audit(&g, &rank_decomposition(&g).unwrap()) <= 2);
    }
}

#[test]
fn oracle_agreement_on_small_graphs() {
    let b = OracleBudget::default();
    for (l1, l2, l3) in [(2, 2, 2), (3, 3, 3), (2, 2, 4), (2, 4, 4)] {
        let g = long_pyramid(l1, l2, l3).unwrap().graph;
        let w = audit(&g, &rank_decomposition(&g).unwrap());
        let exact = brute_rank_width(&g, &b).unwrap();
        assert!(
            exact <= w && w <= 3,
            "pyramid {l1},{l2},{l3}: exact {exact}, built {w}"
        );
    }
}

#[test]
fn corpus_decompositions() {
    for inst in common::small_corpus(31, 20) {
        let g = &inst.graph;
        let tree = build_decomposition_tree(g).unwrap();
        let d = rank_decomposition_node(&tree).unwrap();
        assert!(audit(g, &d) <= 3, "{}", inst.name);
        assert_eq!(decomposition_width(g, &d).unwrap(), d.width(g));
        if let Some(j) = &tree.join {
            let d1 = rank_decomposition_node(&j.children[0]).unwrap();
            let d2 = rank_decomposition_node(&j.children[1]).unwrap();
            let c =
                combine_rank_decompositions(&d1, &d2, (&j.blocks[0], &j.blocks[1]), g.n()).unwrap();
            assert!(c.is_separated(g.n(), &j.split.x1));
            assert_eq!(cut_rank_oracle(g, &j.split.x1), 2);
        }
    }
}

#[test]
fn malformed_inputs_are_rejected() {
    let g = long_pyramid(3, 3, 3).unwrap().graph;
    let kind = classify_basic(&g);
    // too short and overlapping paths
    assert!(rank_decomposition_basic(&g, &[vec![4, 5]], &kind).is_err());
    assert!(rank_decomposition_basic(&g, &[vec![0, 4, 5, 3], vec![3, 9, 8, 2]], &kind).is_err());
    assert!(rank_decomposition(&Graph::new(3)).is_err());
    let mut d = caterpillar_decomposition(4, &[0, 1, 2, 3]);
    d.leaf_map[0] = d.leaf_map[1];
    assert!(d.validate(4).is_err());
}

#[test]
fn dot_output_lists_every_edge() {
    let g = cycle(6);
    let d = rank_decomposition(&g).unwrap();
    let dot = d.to_dot(&g);
    assert!(dot.starts_with("graph"));
    assert_eq!(dot.matches(" -- ").count(), d.edges.len());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn width_at_most_three(seed in any::<u64>()) {
        let (kept, _) = ehf_core::generators::generate_corpus(seed, 1, 8..=28);
        for inst in kept {
            let d = rank_decomposition(&inst.graph).unwrap();
            prop_assert!(audit(&inst.graph, &d) <= 3);
        }
    }
}
