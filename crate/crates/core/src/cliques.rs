//! Maximal clique enumeration (Bron–Kerbosch with Tomita pivoting).

use crate::graph::{Graph, VertexSet};

/// Calls `visit` once per maximal clique of `g`. Stops early when `visit`
/// returns `false`.
pub fn for_each_maximal_clique<F>(g: &Graph, mut visit: F)
where
    F: FnMut(&VertexSet) -> bool,
{
    if g.n() == 0 {
        return;
    }
    let mut r = g.empty_set();
    let p = g.vertices();
    let x = g.empty_set();
    expand(g, &mut r, p, x, &mut visit);
}

fn expand<F>(
    g: &Graph,
    r: &mut VertexSet,
    mut p: VertexSet,
    mut x: VertexSet,
    visit: &mut F,
) -> bool
where
    F: FnMut(&VertexSet) -> bool,
{
    if p.is_empty() {
        if x.is_empty() {
            return visit(r);
        }
        return true;
    }
    // pivot maximizing |P ∩ N(u)| over u in P ∪ X
    let pivot = p
        .iter()
        .chain(x.iter())
        .max_by_key(|&u| (p.intersection_len(g.neighbors(u)), std::cmp::Reverse(u)))
        .expect("P is nonempty");
    let candidates = &p - g.neighbors(pivot);
    for v in candidates.iter() {
        let nv = g.neighbors(v);
        r.insert(v);
        let keep_going = expand(g, r, &p & nv, &x & nv, visit);
        r.remove(v);
        if !keep_going {
            return false;
        }
        p.remove(v);
        x.insert(v);
    }
    true
}

/// All maximal cliques, each as a sorted vertex list; the list is sorted.
pub fn maximal_cliques(g: &Graph) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for_each_maximal_clique(g, |c| {
        out.push(c.to_vec());
        true
    });
    out.sort();
    out
}

/// Size of a largest clique; 0 for the empty graph.
pub fn clique_number(g: &Graph) -> usize {
    let mut best = 0;
    for_each_maximal_clique(g, |c| {
        best = best.max(c.len());
        true
    });
    best
}
