//! Class membership tests: even holes, star and clique cutsets, and
//! recognition of the basic graphs (cliques, holes, long pyramids and
//! extended nontrivial basic graphs).

use serde::Serialize;
use thiserror::Error;

use crate::cliques::{for_each_maximal_clique, maximal_cliques};
use crate::graph::{Graph, VertexSet};

/// Default vertex limit for the exhaustive hole search.
pub const HOLE_SEARCH_LIMIT: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DetectError {
    #[error("graph on {n} vertices exceeds the hole-search limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("input graph is disconnected")]
    Disconnected,
}

/// A chordless cycle of length at least 4, listed in cyclic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HoleWitness {
    pub cycle: Vec<usize>,
}

impl HoleWitness {
    pub fn is_valid(&self, g: &Graph) -> bool {
        g.is_hole(&self.cycle)
    }
}

/// A cutset `set` containing `center`, where `center` sees all of `set`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StarCutsetWitness {
    pub center: usize,
    pub set: VertexSet,
}

impl StarCutsetWitness {
    pub fn is_valid(&self, g: &Graph) -> bool {
        if !self.set.contains(self.center) {
            return false;
        }
        let mut rest = self.set.clone();
        rest.remove(self.center);
        rest.is_subset(g.neighbors(self.center)) && g.components(&self.set).len() >= 2
    }
}

/// Enumerates chordless cycles of length at least 4, each exactly once per
/// orientation class, as `[s, p1, ..., pk]` with `s` the least vertex and
/// `p1 < pk`. Stops when `visit` returns `false`.
pub fn for_each_hole<F>(g: &Graph, mut visit: F)
where
    F: FnMut(&[usize]) -> bool,
{
    let n = g.n();
    for s in 0..n {
        let mut blocked = VertexSet::from_iter(n, 0..=s);
        let mut path = vec![s];
        for p1 in g.neighbors(s).iter().filter(|&v| v > s) {
            path.push(p1);
            blocked.insert(p1);
            // s is the only blocked-by-adjacency exception: closing edges are
            // detected by testing adjacency to s
            if !extend(g, s, &mut path, blocked.clone(), &mut visit) {
                return;
            }
            path.pop();
            blocked.remove(p1);
        }
    }
}

fn extend<F>(g: &Graph, s: usize, path: &mut Vec<usize>, blocked: VertexSet, visit: &mut F) -> bool
where
    F: FnMut(&[usize]) -> bool,
{
    let last = *path.last().unwrap();
    let candidates = g.neighbors(last) - &blocked;
    // the current last vertex becomes interior for any extension
    let mut next_blocked = blocked;
    next_blocked.union_with(g.neighbors(last));
    for w in candidates.iter() {
        if g.has_edge(w, s) {
            if path.len() >= 3 && path[1] < w {
                path.push(w);
                let keep = visit(path);
                path.pop();
                if !keep {
                    return false;
                }
            }
            continue;
        }
        path.push(w);
        let mut b = next_blocked.clone();
        b.insert(w);
        let keep = extend(g, s, path, b, visit);
        path.pop();
        if !keep {
            return false;
        }
    }
    true
}

/// Returns an even hole if one exists; the first found in lexicographic
/// order of `[least vertex, ...]` sequences.
pub fn find_even_hole(g: &Graph) -> Result<Option<HoleWitness>, DetectError> {
    find_even_hole_with_limit(g, HOLE_SEARCH_LIMIT)
}

pub fn find_even_hole_with_limit(
    g: &Graph,
    limit: usize,
) -> Result<Option<HoleWitness>, DetectError> {
    if g.n() > limit {
        return Err(DetectError::TooLarge { n: g.n(), limit });
    }
    let mut found = None;
    for_each_hole(g, |c| {
        if c.len() % 2 == 0 {
            found = Some(HoleWitness { cycle: c.to_vec() });
            false
        } else {
            true
        }
    });
    Ok(found)
}

/// Sorted distinct hole lengths of `g`.
pub fn hole_lengths(g: &Graph) -> Vec<usize> {
    let mut lens = std::collections::BTreeSet::new();
    for_each_hole(g, |c| {
        lens.insert(c.len());
        true
    });
    lens.into_iter().collect()
}

/// Polynomial star-cutset test. For each center `x` in increasing order:
///
/// * if `x` is universal, a star cutset exists iff two other vertices are
///   non-adjacent (remove everything else);
/// * if `G \ N[x]` is disconnected, `N[x]` is a star cutset;
/// * otherwise some star cutset centered at `x` exists iff a neighbor `u`
///   has `N(u) ⊆ N[x]`, and then `N[x] \ {u}` separates `u`.
pub fn find_star_cutset(g: &Graph) -> Result<Option<StarCutsetWitness>, DetectError> {
    if !g.is_connected() {
        return Err(DetectError::Disconnected);
    }
    let n = g.n();
    for x in 0..n {
        let closed = g.closed_neighborhood(x);
        let outside = closed.complement(n);
        if outside.is_empty() {
            let pair = (0..n).filter(|&u| u != x).find_map(|u| {
                (u + 1..n)
                    .find(|&w| w != x && !g.has_edge(u, w))
                    .map(|w| (u, w))
            });
            if let Some((u, w)) = pair {
                let mut set = g.vertices();
                set.remove(u);
                set.remove(w);
                return Ok(Some(StarCutsetWitness { center: x, set }));
            }
            continue;
        }
        if !g.is_connected_within(&outside) {
            return Ok(Some(StarCutsetWitness {
                center: x,
                set: closed,
            }));
        }
        if let Some(u) = g
            .neighbors(x)
            .iter()
            .find(|&u| g.neighbors(u).is_subset(&closed))
        {
            let mut set = closed;
            set.remove(u);
            return Ok(Some(StarCutsetWitness { center: x, set }));
        }
    }
    Ok(None)
}

/// Clique cutset search. If `S` is a clique cutset and `K ⊇ S` a maximal
/// clique, some component `C` of `G \ K` avoids `K \ S`, and `N(C) ⊆ S` is
/// again a clique cutset; so scanning `N(C)` over all maximal cliques `K`
/// and components `C` is complete. Returns the lexicographically least
/// such `N(C)`.
pub fn find_clique_cutset(g: &Graph) -> Result<Option<StarCutsetWitness>, DetectError> {
    if !g.is_connected() {
        return Err(DetectError::Disconnected);
    }
    let n = g.n();
    let mut best: Option<Vec<usize>> = None;
    for_each_maximal_clique(g, |k| {
        for comp in g.components(k) {
            let attach = g.neighborhood_of_set(&comp);
            let covered = &comp | &attach;
            if covered.len() < n && !attach.is_empty() {
                let cand = attach.to_vec();
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        true
    });
    Ok(best.map(|s| StarCutsetWitness {
        center: s[0],
        set: VertexSet::from_iter(n, s),
    }))
}

/// A long pyramid: triangle `triangle`, apex, and three paths
/// `paths[i] = triangle[i] ... apex` of length at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Pyramid {
    pub apex: usize,
    pub triangle: [usize; 3],
    pub paths: [Vec<usize>; 3],
}

impl Pyramid {
    pub fn path_lengths(&self) -> [usize; 3] {
        [0, 1, 2].map(|i| self.paths[i].len() - 1)
    }
}

/// A tree recovered from its line graph: node `v` of the line graph is the
/// tree edge `node_edges[v]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LineRoot {
    pub tree_order: usize,
    pub node_edges: Vec<(usize, usize)>,
}

impl LineRoot {
    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.tree_order];
        for &(a, b) in &self.node_edges {
            d[a] += 1;
            d[b] += 1;
        }
        d
    }
}

/// An extended nontrivial basic graph: `line_part` induces the line graph
/// of a tree, `x` and `y` are adjacent and see exactly the leaf nodes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExtendedBasic {
    pub x: usize,
    pub y: usize,
    pub line_part: VertexSet,
    /// Maximal cliques of size at least 3 of the line part.
    pub extended_cliques: Vec<Vec<usize>>,
    /// Maximal cliques of size 2 of the line part (edges of flat stretches).
    pub small_blocks: Vec<Vec<usize>>,
    pub leaf_nodes: Vec<usize>,
    /// Root tree, indexed by the line-part vertices in increasing order.
    pub tree: LineRoot,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind")]
pub enum BasicKind {
    Clique,
    Hole { cycle: Vec<usize> },
    LongPyramid(Pyramid),
    ExtendedNontrivialBasic(ExtendedBasic),
    NotBasic,
}

impl BasicKind {
    pub fn is_basic(&self) -> bool {
        !matches!(self, BasicKind::NotBasic)
    }

    pub fn tag(&self) -> &'static str {
        match self {
            BasicKind::Clique => "Clique",
            BasicKind::Hole { .. } => "Hole",
            BasicKind::LongPyramid(_) => "LongPyramid",
            BasicKind::ExtendedNontrivialBasic(_) => "ExtendedNontrivialBasic",
            BasicKind::NotBasic => "NotBasic",
        }
    }
}

/// Recognizes the basic graph types. Pyramids whose path lengths differ
/// in parity contain an even hole and are reported as `NotBasic`.
pub fn classify_basic(g: &Graph) -> BasicKind {
    if g.is_clique(&g.vertices()) {
        return BasicKind::Clique;
    }
    if !g.is_connected() {
        return BasicKind::NotBasic;
    }
    if let Some(cycle) = as_hole(g) {
        return BasicKind::Hole { cycle };
    }
    if let Some(p) = as_long_pyramid(g) {
        let l = p.path_lengths();
        if l[0] % 2 == l[1] % 2 && l[1] % 2 == l[2] % 2 {
            return BasicKind::LongPyramid(p);
        }
        return BasicKind::NotBasic;
    }
    if let Some(e) = as_extended_basic(g) {
        return BasicKind::ExtendedNontrivialBasic(e);
    }
    BasicKind::NotBasic
}

fn as_hole(g: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    if n < 4 || (0..n).any(|v| g.degree(v) != 2) {
        return None;
    }
    let mut cycle = vec![0];
    let mut prev = usize::MAX;
    let mut cur = 0;
    loop {
        let next = g.neighbors(cur).iter().find(|&w| w != prev)?;
        if next == 0 {
            break;
        }
        cycle.push(next);
        prev = cur;
        cur = next;
    }
    (cycle.len() == n).then_some(cycle)
}

fn as_long_pyramid(g: &Graph) -> Option<Pyramid> {
    let n = g.n();
    let cubic: Vec<usize> = (0..n).filter(|&v| g.degree(v) == 3).collect();
    if cubic.len() != 4 || (0..n).any(|v| g.degree(v) != 2 && g.degree(v) != 3) {
        return None;
    }
    // the apex is the cubic vertex adjacent to no other cubic vertex
    let apex = *cubic
        .iter()
        .find(|&&a| cubic.iter().all(|&b| !g.has_edge(a, b)))?;
    let tri: Vec<usize> = cubic.iter().copied().filter(|&v| v != apex).collect();
    let triangle = [tri[0], tri[1], tri[2]];
    if !g.is_clique(&VertexSet::from_iter(n, triangle)) {
        return None;
    }
    let mut seen = VertexSet::from_iter(n, cubic.iter().copied());
    let mut paths: [Vec<usize>; 3] = Default::default();
    for (i, &t) in triangle.iter().enumerate() {
        let start = g.neighbors(t).iter().find(|&w| !triangle.contains(&w))?;
        if start == apex {
            return None;
        }
        let mut path = vec![t];
        let mut prev = t;
        let mut cur = start;
        loop {
            if cur == apex {
                path.push(apex);
                break;
            }
            if seen.contains(cur) || g.degree(cur) != 2 {
                return None;
            }
            seen.insert(cur);
            path.push(cur);
            let next = g.neighbors(cur).iter().find(|&w| w != prev)?;
            prev = cur;
            cur = next;
        }
        paths[i] = path;
    }
    (seen.len() == n).then_some(Pyramid {
        apex,
        triangle,
        paths,
    })
}

/// Recovers a tree whose line graph is `G[part]`, by taking the maximal
/// cliques of size at least 2 as the internal tree vertices and adding one
/// pendant tree vertex for every missing edge end; the result is checked
/// by rebuilding the line graph.
pub(crate) fn line_root(g: &Graph, part: &VertexSet) -> Option<(LineRoot, Vec<Vec<usize>>)> {
    let (l, map) = g.induced_subgraph(part);
    let k = l.n();
    if k == 0 || !l.is_connected() {
        return None;
    }
    let blocks: Vec<Vec<usize>> = maximal_cliques(&l)
        .into_iter()
        .filter(|c| c.len() >= 2)
        .collect();
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); k];
    for (b, c) in blocks.iter().enumerate() {
        for &v in c {
            ends[v].push(b);
        }
    }
    let mut tree_order = blocks.len();
    let mut node_edges = Vec::with_capacity(k);
    for e in ends.iter_mut() {
        if e.len() > 2 {
            return None;
        }
        while e.len() < 2 {
            e.push(tree_order);
            tree_order += 1;
        }
        node_edges.push((e[0], e[1]));
    }
    // a tree with k edges has k + 1 vertices; together with the line graph
    // check below this also rules out parallel edges and cycles
    if tree_order != k + 1 {
        return None;
    }
    for i in 0..k {
        for j in i + 1..k {
            let (a, b) = node_edges[i];
            let (c, d) = node_edges[j];
            let share = a == c || a == d || b == c || b == d;
            if share != l.has_edge(i, j) {
                return None;
            }
        }
    }
    let mut tree = Graph::new(tree_order);
    for &(a, b) in &node_edges {
        if a == b || tree.has_edge(a, b) {
            return None;
        }
        tree.add_edge(a, b);
    }
    if !tree.is_connected() {
        return None;
    }
    let blocks = blocks
        .into_iter()
        .map(|c| c.into_iter().map(|v| map[v]).collect())
        .collect();
    Some((
        LineRoot {
            tree_order,
            node_edges,
        },
        blocks,
    ))
}

fn as_extended_basic(g: &Graph) -> Option<ExtendedBasic> {
    let n = g.n();
    for (x, y) in g.edges() {
        let nx = &(g.neighbors(x) - &VertexSet::singleton(n, y));
        let ny = &(g.neighbors(y) - &VertexSet::singleton(n, x));
        if nx.intersects(ny) {
            continue;
        }
        let mut line_part = g.vertices();
        line_part.remove(x);
        line_part.remove(y);
        let Some((tree, blocks)) = line_root(g, &line_part) else {
            continue;
        };
        let (extended_cliques, small_blocks): (Vec<_>, Vec<_>) =
            blocks.into_iter().partition(|c| c.len() >= 3);
        if extended_cliques.len() < 2 {
            continue;
        }
        let deg = tree.degrees();
        let part: Vec<usize> = line_part.to_vec();
        let leaf_nodes: Vec<usize> = tree
            .node_edges
            .iter()
            .enumerate()
            .filter(|(_, &(a, b))| deg[a] == 1 || deg[b] == 1)
            .map(|(i, _)| part[i])
            .collect();
        let leaves = VertexSet::from_iter(n, leaf_nodes.iter().copied());
        if (nx | ny) != leaves {
            continue;
        }
        return Some(ExtendedBasic {
            x,
            y,
            line_part,
            extended_cliques,
            small_blocks,
            leaf_nodes,
            tree,
        });
    }
    None
}

/// Whether `x` and `y` each see at most one vertex of every extended
/// clique, and no extended clique sees both.
pub fn check_extended_clique_neighbors(g: &Graph, b: &ExtendedBasic) -> bool {
    b.extended_cliques.iter().all(|k| {
        let hx = k.iter().filter(|&&v| g.has_edge(v, b.x)).count();
        let hy = k.iter().filter(|&&v| g.has_edge(v, b.y)).count();
        hx <= 1 && hy <= 1 && (hx == 0 || hy == 0)
    })
}

/// Whether `g` is connected, even-hole-free and has no star cutset.
pub fn in_class(g: &Graph) -> Result<bool, DetectError> {
    if !g.is_connected() {
        return Ok(false);
    }
    if find_star_cutset(g)?.is_some() {
        return Ok(false);
    }
    Ok(find_even_hole(g)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{complete, cycle, path};

    #[test]
    fn even_hole_in_c4() {
        let w = find_even_hole(&cycle(4)).unwrap().unwrap();
        assert_eq!(w.cycle.len(), 4);
        assert!(w.is_valid(&cycle(4)));
    }

    #[test]
    fn no_even_hole_in_c5() {
        assert_eq!(find_even_hole(&cycle(5)).unwrap(), None);
    }

    #[test]
    fn size_guard() {
        let g = Graph::new(10);
        assert_eq!(
            find_even_hole_with_limit(&g, 5),
            Err(DetectError::TooLarge { n: 10, limit: 5 })
        );
    }

    #[test]
    fn even_hole_in_c6_with_pendant() {
        let mut g = Graph::new(7);
        for i in 0..6 {
            g.add_edge(i, (i + 1) % 6);
        }
        g.add_edge(2, 6);
        let w = find_even_hole(&g).unwrap().unwrap();
        assert_eq!(w.cycle, vec![0, 1, 2, 3, 4, 5]);
    }

    #[test]
    fn hole_enumeration_counts_each_hole_once() {
        let mut count = 0;
        for_each_hole(&cycle(7), |_| {
            count += 1;
            true
        });
        assert_eq!(count, 1);
        assert_eq!(hole_lengths(&complete(5)), Vec::<usize>::new());
    }

    #[test]
    fn cut_vertex_is_star_cutset() {
        let g = path(3);
        let w = find_star_cutset(&g).unwrap().unwrap();
        assert!(w.is_valid(&g));
        assert_eq!(w.center, 1);
        assert_eq!(w.set.to_vec(), vec![1]);
    }

    #[test]
    fn c5_has_no_star_cutset() {
        assert_eq!(find_star_cutset(&cycle(5)).unwrap(), None);
    }

    #[test]
    fn universal_vertex_over_non_clique() {
        // K1 joined to two non-adjacent vertices: the center alone separates
        let g = Graph::from_edges(3, [(0, 1), (0, 2)]).unwrap();
        let w = find_star_cutset(&g).unwrap().unwrap();
        assert!(w.is_valid(&g));
    }

    #[test]
    fn disconnected_input_rejected() {
        assert_eq!(
            find_star_cutset(&Graph::new(2)),
            Err(DetectError::Disconnected)
        );
        assert_eq!(
            find_clique_cutset(&Graph::new(2)),
            Err(DetectError::Disconnected)
        );
    }

    #[test]
    fn clique_cutset_of_two_triangles() {
        let g = Graph::from_edges(4, [(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]).unwrap();
        let w = find_clique_cutset(&g).unwrap().unwrap();
        assert_eq!(w.set.to_vec(), vec![1, 2]);
        assert!(w.is_valid(&g));
    }

    #[test]
    fn c6_has_no_clique_cutset() {
        assert_eq!(find_clique_cutset(&cycle(6)).unwrap(), None);
    }

    #[test]
    fn classify_small() {
        assert_eq!(classify_basic(&complete(5)), BasicKind::Clique);
        assert_eq!(classify_basic(&complete(1)), BasicKind::Clique);
        assert_eq!(classify_basic(&cycle(7)).tag(), "Hole");
        assert_eq!(classify_basic(&path(4)), BasicKind::NotBasic);
    }

    #[test]
    fn line_root_of_spider() {
        // line graph of a star with 3 leaves is a triangle
        let g = complete(3);
        let (root, blocks) = line_root(&g, &g.vertices()).unwrap();
        assert_eq!(root.tree_order, 4);
        assert_eq!(blocks, vec![vec![0, 1, 2]]);
        // the claw is not a line graph
        let claw = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(line_root(&claw, &claw.vertices()).is_none());
        // C4 is the line graph of C4, not of a tree
        let c4 = cycle(4);
        assert!(line_root(&c4, &c4.vertices()).is_none());
    }
}
