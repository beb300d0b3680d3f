#![allow(dead_code)]

use ehf_core::generators::{generate_corpus, CorpusInstance};
use ehf_core::Graph;
use rand::Rng;

/// A small composed corpus, cheap enough for ordinary test runs.
pub fn small_corpus(seed: u64, count: usize) -> Vec<CorpusInstance> {
    generate_corpus(seed, count, 8..=30).0
}

pub fn random_graph(rng: &mut impl Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn random_connected_graph(rng: &mut impl Rng, n: usize) -> Graph {
    loop {
        let p = rng.gen_range(0.2..0.7);
        let g = random_graph(rng, n, p);
        if g.is_connected() {
            return g;
        }
    }
}
