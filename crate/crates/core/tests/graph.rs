use ehf_core::gf2::{cut_rank, gf2_rank, Gf2Matrix};
use ehf_core::graph::named::{complete, cycle, path};
use ehf_core::{Graph, VertexSet};
use proptest::prelude::*;

/// Rank by brute force: the size of the largest linearly independent
/// subset of rows, found by checking that no nonempty subset XORs to 0.
fn brute_rank(rows: &[u32]) -> usize {
    let k = rows.len();
    let mut best = 0;
    for mask in 0u32..(1 << k) {
        let chosen: Vec<u32> = (0..k)
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| rows[i])
            .collect();
        let independent = (1u32..(1 << chosen.len())).all(|sub| {
            (0..chosen.len())
                .filter(|&i| sub >> i & 1 == 1)
                .fold(0, |x, i| x ^ chosen[i])
                != 0
        });
        if independent {
            best = best.max(chosen.len());
        }
    }
    best
}

fn matrix_from(rows: &[u32], cols: usize) -> Gf2Matrix {
    let mut m = Gf2Matrix::zeros(rows.len(), cols);
    for (i, &r) in rows.iter().enumerate() {
        for j in 0..cols {
            m.set(i, j, r >> j & 1 == 1);
        }
    }
    m
}

#[test]
fn rank_examples() {
    assert_eq!(gf2_rank(&Gf2Matrix::identity(3)), 3);
    assert_eq!(gf2_rank(&Gf2Matrix::from_bit_rows(&["111", "111"])), 1);
    assert_eq!(
        gf2_rank(&Gf2Matrix::from_bit_rows(&["110", "011", "101"])),
        2
    );
    assert_eq!(brute_rank(&[0b011, 0b110, 0b101]), 2);
}

#[test]
fn cut_rank_examples() {
    let k4 = complete(4);
    for a in 0..4 {
        for b in a + 1..4 {
            assert_eq!(cut_rank(&k4, &VertexSet::from_iter(4, [a, b])).unwrap(), 1);
        }
    }
    assert_eq!(cut_rank(&k4, &VertexSet::new(4)).unwrap(), 0);
    assert_eq!(cut_rank(&k4, &VertexSet::full(4)).unwrap(), 0);
    assert_eq!(
        cut_rank(&cycle(5), &VertexSet::from_iter(5, [0, 1])).unwrap(),
        2
    );
    assert!(cut_rank(&k4, &VertexSet::from_iter(9, [7])).is_err());
}

#[test]
fn components_examples() {
    let p = path(3);
    let parts = p.components(&VertexSet::singleton(3, 1));
    assert_eq!(
        parts.iter().map(VertexSet::to_vec).collect::<Vec<_>>(),
        vec![vec![0], vec![2]]
    );
    assert_eq!(cycle(6).components(&VertexSet::new(6)).len(), 1);
    let parts = cycle(6).components(&VertexSet::from_iter(6, [0, 3]));
    assert_eq!(parts.len(), 2);
    assert!(parts.iter().all(|c| c.len() == 2));
    assert!(Graph::new(0).is_connected());
}

#[test]
fn flat_paths_and_holes() {
    let c = cycle(6);
    assert!(c.is_hole(&[0, 1, 2, 3, 4, 5]));
    assert!(!c.is_hole(&[0, 1, 2]));
    assert!(c.is_flat_path(&[0, 1, 2, 3]));
    let mut g = cycle(6);
    g.add_edge(1, 4);
    assert!(!g.is_hole(&[0, 1, 2, 3, 4, 5]));
    assert!(!g.is_flat_path(&[0, 1, 2]));
    assert!(g.is_flat_path(&[1, 2, 3]));
    assert!(!g.is_flat_path(&[1, 2, 3, 4]));
}

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::new(n);
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        g.add_edge(u, v);
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn subset(g: &Graph, mask: u32) -> VertexSet {
    VertexSet::from_iter(g.n(), (0..g.n()).filter(|&i| mask >> i & 1 == 1))
}

proptest! {
    #[test]
    fn rank_matches_brute_force(rows in proptest::collection::vec(0u32..64, 0..7)) {
        prop_assert_eq!(gf2_rank(&matrix_from(&rows, 6)), brute_rank(&rows));
    }

    #[test]
    fn rank_ignores_appended_combinations(rows in proptest::collection::vec(1u32..256, 1..6), pick in any::<u32>()) {
        let combo = (0..rows.len()).filter(|&i| pick >> i & 1 == 1).fold(0, |x, i| x ^ rows[i]);
        let mut more = rows.clone();
        more.push(combo);
        prop_assert_eq!(gf2_rank(&matrix_from(&more, 8)), gf2_rank(&matrix_from(&rows, 8)));
    }

    #[test]
    fn cut_rank_is_symmetric(g in graph_strategy(10), mask in any::<u32>()) {
        let a = subset(&g, mask);
        prop_assert_eq!(cut_rank(&g, &a).unwrap(), cut_rank(&g, &a.complement(g.n())).unwrap());
    }

    #[test]
    fn cut_rank_is_submodular(g in graph_strategy(10), ma in any::<u32>(), mb in any::<u32>()) {
        let (a, b) = (subset(&g, ma), subset(&g, mb));
        let lhs = cut_rank(&g, &a).unwrap() + cut_rank(&g, &b).unwrap();
        let rhs = cut_rank(&g, &(&a | &b)).unwrap() + cut_rank(&g, &(&a & &b)).unwrap();
        prop_assert!(lhs >= rhs);
    }

    #[test]
    fn components_partition_the_rest(g in graph_strategy(10), mask in any::<u32>()) {
        let removed = subset(&g, mask);
        let parts = g.components(&removed);
        let mut union = VertexSet::new(g.n());
        for (i, p) in parts.iter().enumerate() {
            prop_assert!(!p.is_empty());
            prop_assert!(p.is_disjoint(&union));
            prop_assert!(g.is_connected_within(p));
            for q in &parts[i + 1..] {
                prop_assert!(p.iter().all(|u| !g.neighbors(u).intersects(q)));
            }
            union.union_with(p);
        }
        prop_assert_eq!(union, removed.complement(g.n()));
    }
}
