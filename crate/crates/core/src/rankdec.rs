//! Rank-decompositions: trees whose leaves are the vertices, with the
//! width of an edge being the GF(2) cut-rank of the split it induces.
//! Basic graphs get decompositions of width at most 3 from their
//! characteristic tree; 2-joins glue decompositions along marker paths.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::detect::{BasicKind, ExtendedBasic, Pyramid};
use crate::gf2::cut_rank_unchecked;
use crate::graph::{Graph, VertexSet};
use crate::twojoin::{build_decomposition_tree, Block, DecompNode, TwoJoinError};

#[derive(Debug, Error)]
pub enum RankDecError {
    #[error(transparent)]
    Decomposition(#[from] TwoJoinError),
    #[error("graph is not connected")]
    Disconnected,
    #[error("expected a long pyramid or an extended nontrivial basic graph")]
    NotBasic,
    #[error("invalid flat path set: {0}")]
    InvalidPaths(String),
    #[error("malformed decomposition: {0}")]
    Malformed(String),
    #[error("marker path of block {0} is not separated")]
    MarkerNotSeparated(usize),
}

/// An unrooted tree with leaves in bijection with the vertices. Internal
/// nodes have degree 2 or 3.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RankDecomposition {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    /// Tree node holding each vertex.
    pub leaf_map: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct RankDecompositionReport {
    pub nodes: usize,
    pub edges: Vec<(usize, usize)>,
    pub leaf_map: Vec<usize>,
    pub per_edge_width: Vec<usize>,
    pub width: usize,
}

impl RankDecomposition {
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.nodes];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Checks the tree shape and the leaf bijection for a graph on `n`
    /// vertices.
    pub fn validate(&self, n: usize) -> Result<(), RankDecError> {
        let bad = |m: &str| Err(RankDecError::Malformed(m.into()));
        if self.leaf_map.len() != n {
            return bad("leaf map has the wrong length");
        }
        if n == 0 {
            return if self.nodes == 0 {
                Ok(())
            } else {
                bad("nodes without vertices")
            };
        }
        if self.edges.len() + 1 != self.nodes {
            return bad("edge count is not nodes - 1");
        }
        if self
            .edges
            .iter()
            .any(|&(a, b)| a >= self.nodes || b >= self.nodes || a == b)
        {
            return bad("edge endpoint out of range");
        }
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for &w in &adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return bad("tree is not connected");
        }
        let mut holder = vec![usize::MAX; self.nodes];
        for (v, &t) in self.leaf_map.iter().enumerate() {
            if t >= self.nodes || holder[t] != usize::MAX {
                return bad("leaf map is not injective");
            }
            holder[t] = v;
        }
        for (t, a) in adj.iter().enumerate() {
            if a.len() > 3 {
                return bad("node of degree more than 3");
            }
            if a.len() == 2 {
                return bad("node of degree 2");
            }
            let is_leaf = a.len() <= 1;
            if is_leaf != (holder[t] != usize::MAX) {
                return bad("leaves and vertices do not match");
            }
        }
        Ok(())
    }

    /// Vertex set on the far side of each edge `(a, b)`, the side of `b`.
    pub fn edge_sides(&self, n: usize) -> Vec<VertexSet> {
        if self.nodes == 0 {
            return Vec::new();
        }
        let adj = self.adjacency();
        let mut parent = vec![usize::MAX; self.nodes];
        let mut order = Vec::with_capacity(self.nodes);
        let mut stack = vec![0];
        parent[0] = 0;
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in &adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
        let mut below = vec![VertexSet::new(n); self.nodes];
        for (v, &t) in self.leaf_map.iter().enumerate() {
            below[t].insert(v);
        }
        for &u in order.iter().rev() {
            if u != 0 {
                let s = below[u].clone();
                below[parent[u]].union_with(&s);
            }
        }
        self.edges
            .iter()
            .map(|&(a, b)| {
                if parent[b] == a {
                    below[b].clone()
                } else {
                    below[a].complement(n)
                }
            })
            .collect()
    }

    pub fn widths(&self, g: &Graph) -> Vec<usize> {
        self.edge_sides(g.n())
            .iter()
            .map(|s| cut_rank_unchecked(g, s))
            .collect()
    }

    pub fn width(&self, g: &Graph) -> usize {
        self.widths(g).into_iter().max().unwrap_or(0)
    }

    /// Whether some edge splits the vertices into `set` and the rest.
    pub fn is_separated(&self, n: usize, set: &VertexSet) -> bool {
        let rest = set.complement(n);
        self.edge_sides(n).iter().any(|s| s == set || *s == rest)
    }

    pub fn report(&self, g: &Graph) -> RankDecompositionReport {
        let per_edge_width = self.widths(g);
        RankDecompositionReport {
            nodes: self.nodes,
            edges: self.edges.clone(),
            leaf_map: self.leaf_map.clone(),
            width: per_edge_width.iter().copied().max().unwrap_or(0),
            per_edge_width,
        }
    }

    /// Graphviz text: leaves are labeled by vertex, edges by width.
    pub fn to_dot(&self, g: &Graph) -> String {
        let widths = self.widths(g);
        let mut out = String::from("graph rankdec {\n");
        for (v, &t) in self.leaf_map.iter().enumerate() {
            let _ = writeln!(out, "  t{t} [shape=box,label=\"{v}\"];");
        }
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            let _ = writeln!(out, "  t{a} -- t{b} [label=\"{}\"];", widths[i]);
        }
        out.push_str("}\n");
        out
    }
}

/// Width of `d` as a decomposition of `g`, after checking its shape.
pub fn decomposition_width(g: &Graph, d: &RankDecomposition) -> Result<usize, RankDecError> {
    d.validate(g.n())?;
    Ok(d.width(g))
}

fn compact(adj: &[Vec<usize>], alive: &[bool], leaf_map: &[usize]) -> RankDecomposition {
    let mut id = vec![usize::MAX; adj.len()];
    let mut nodes = 0;
    for (t, &a) in alive.iter().enumerate() {
        if a {
            id[t] = nodes;
            nodes += 1;
        }
    }
    let mut edges = Vec::new();
    for (t, a) in adj.iter().enumerate() {
        for &w in a {
            if alive[t] && t < w {
                edges.push((id[t], id[w]));
            }
        }
    }
    RankDecomposition {
        nodes,
        edges,
        leaf_map: leaf_map.iter().map(|&t| id[t]).collect(),
    }
}

/// Tree under construction.
struct Builder {
    adj: Vec<Vec<usize>>,
    leaf_map: Vec<usize>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            adj: Vec::new(),
            leaf_map: vec![usize::MAX; n],
        }
    }

    fn node(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    fn link(&mut self, a: usize, b: usize) {
        self.adj[a].push(b);
        self.adj[b].push(a);
    }

    fn leaf(&mut self, v: usize) -> usize {
        let t = self.node();
        self.leaf_map[v] = t;
        t
    }

    /// A caterpillar with spine `a_1 … a_{k-1}` whose leaf slots are the
    /// given subtree roots; returns its root `a_1`.
    fn caterpillar(&mut self, items: &[usize]) -> usize {
        let k = items.len();
        if k == 1 {
            let a = self.node();
            self.link(a, items[0]);
            return a;
        }
        let spine: Vec<usize> = (0..k - 1).map(|_| self.node()).collect();
        for w in spine.windows(2) {
            self.link(w[0], w[1]);
        }
        for (i, &a) in spine.iter().enumerate() {
            self.link(a, items[i]);
        }
        self.link(spine[k - 2], items[k - 1]);
        spine[0]
    }

    fn path(&mut self, vs: &[usize]) -> usize {
        let leaves: Vec<usize> = vs.iter().map(|&v| self.leaf(v)).collect();
        self.caterpillar(&leaves)
    }

    /// Drops dangling unmapped nodes and renumbers.
    fn finish(mut self) -> RankDecomposition {
        let n = self.adj.len();
        let mut mapped = vec![false; n];
        for &t in &self.leaf_map {
            mapped[t] = true;
        }
        let mut alive = vec![true; n];
        let mut stack: Vec<usize> = (0..n)
            .filter(|&t| self.adj[t].len() <= 1 && !mapped[t])
            .collect();
        while let Some(t) = stack.pop() {
            if !alive[t] || mapped[t] || self.adj[t].len() > 1 {
                continue;
            }
            alive[t] = false;
            if let Some(&w) = self.adj[t].first() {
                self.adj[w].retain(|&u| u != t);
                stack.push(w);
            }
            self.adj[t].clear();
        }
        // suppress unmapped nodes of degree 2; the cuts stay the same
        for t in 0..n {
            if alive[t] && !mapped[t] && self.adj[t].len() == 2 {
                let (a, b) = (self.adj[t][0], self.adj[t][1]);
                self.adj[a].retain(|&u| u != t);
                self.adj[b].retain(|&u| u != t);
                self.link(a, b);
                self.adj[t].clear();
                alive[t] = false;
            }
        }
        compact(&self.adj, &alive, &self.leaf_map)
    }
}

/// A single caterpillar over the vertices in the given order.
pub fn caterpillar_decomposition(n: usize, order: &[usize]) -> RankDecomposition {
    let mut b = Builder::new(n);
    match order.len() {
        0 => {}
        1 => {
            b.leaf(order[0]);
        }
        _ => {
            b.path(order);
        }
    }
    b.finish()
}

/// Node of a characteristic tree: a flat path of the graph and its
/// children, listed in order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharNode {
    pub path: Vec<usize>,
    pub children: Vec<usize>,
}

/// The tree of flat pieces of a basic graph, rooted at a clique; the root
/// itself carries no vertices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacteristicTree {
    pub nodes: Vec<CharNode>,
    pub root_children: Vec<usize>,
}

impl CharacteristicTree {
    /// The node paths are disjoint flat paths covering the graph.
    pub fn check(&self, g: &Graph) -> Result<(), RankDecError> {
        let mut seen = VertexSet::new(g.n());
        for node in &self.nodes {
            if node.path.len() >= 2 && !g.is_flat_path(&node.path) {
                return Err(RankDecError::Malformed(format!(
                    "{:?} is not flat",
                    node.path
                )));
            }
            for &v in &node.path {
                if seen.contains(v) {
                    return Err(RankDecError::Malformed(format!("vertex {v} in two nodes")));
                }
                seen.insert(v);
            }
        }
        if seen.len() != g.n() {
            return Err(RankDecError::Malformed(
                "nodes do not cover the graph".into(),
            ));
        }
        Ok(())
    }
}

fn check_paths(g: &Graph, s: &[Vec<usize>]) -> Result<(), RankDecError> {
    let mut used = VertexSet::new(g.n());
    for p in s {
        if p.len() < 4 || p.iter().any(|&v| v >= g.n()) || !g.is_flat_path(p) {
            return Err(RankDecError::InvalidPaths(format!(
                "{p:?} is not a flat path of length at least 3"
            )));
        }
        for &v in p {
            if used.contains(v) {
                return Err(RankDecError::InvalidPaths(format!(
                    "paths share vertex {v}"
                )));
            }
            used.insert(v);
        }
    }
    Ok(())
}

/// Leaf path that should receive the special vertex `z`: the one holding
/// the rest of a path of `s` ending at `z`, or else the least one whose
/// free end sees `z`.
fn place_special(
    g: &Graph,
    s: &[Vec<usize>],
    nodes: &[CharNode],
    leaves: &[usize],
    z: usize,
) -> Option<usize> {
    for p in s {
        let rest = if p[0] == z {
            p[1]
        } else if p[p.len() - 1] == z {
            p[p.len() - 2]
        } else {
            continue;
        };
        if let Some(&i) = leaves.iter().find(|&&i| nodes[i].path.contains(&rest)) {
            return Some(i);
        }
    }
    leaves
        .iter()
        .copied()
        .filter(|&i| g.has_edge(*nodes[i].path.last().unwrap(), z))
        .min_by_key(|&i| *nodes[i].path.last().unwrap())
}

/// Characteristic tree of an extended nontrivial basic graph.
pub fn characteristic_tree_extended(
    g: &Graph,
    s: &[Vec<usize>],
    e: &ExtendedBasic,
) -> Result<CharacteristicTree, RankDecError> {
    let n = g.n();
    let ext: Vec<VertexSet> = e
        .extended_cliques
        .iter()
        .map(|k| VertexSet::from_iter(n, k.iter().copied()))
        .collect();
    // flat pieces: the line part without the edges of extended cliques
    let mut pieces = Graph::new(n);
    for (u, v) in g.edges() {
        if e.line_part.contains(u)
            && e.line_part.contains(v)
            && !ext.iter().any(|k| k.contains(u) && k.contains(v))
        {
            pieces.add_edge(u, v);
        }
    }
    let mut paths: Vec<Vec<usize>> = Vec::new();
    for comp in pieces.components_within(&e.line_part) {
        let start = comp
            .iter()
            .find(|&v| pieces.degree(v) <= 1)
            .ok_or(RankDecError::NotBasic)?;
        let mut path = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(next) = pieces.neighbors(cur).iter().find(|&w| w != prev) {
            path.push(next);
            prev = cur;
            cur = next;
        }
        paths.push(path);
    }
    let touches = |p: &[usize], k: &VertexSet| k.contains(p[0]) || k.contains(p[p.len() - 1]);
    let root = (0..ext.len())
        .min_by_key(|&i| (ext[i].first(), i))
        .ok_or(RankDecError::NotBasic)?;

    let mut nodes: Vec<CharNode> = Vec::new();
    let mut index = vec![usize::MAX; paths.len()];
    let mut clique_done = vec![false; ext.len()];
    let mut root_children = Vec::new();
    // (clique, parent node or none)
    let mut queue = std::collections::VecDeque::from([(root, usize::MAX)]);
    clique_done[root] = true;
    while let Some((k, parent)) = queue.pop_front() {
        let mut kids: Vec<usize> = (0..paths.len())
            .filter(|&p| index[p] == usize::MAX && touches(&paths[p], &ext[k]))
            .collect();
        kids.sort_by_key(|&p| paths[p].iter().min().copied());
        for p in kids {
            let mut path = paths[p].clone();
            if !ext[k].contains(path[0]) {
                path.reverse();
            }
            index[p] = nodes.len();
            nodes.push(CharNode {
                path: path.clone(),
                children: Vec::new(),
            });
            if parent == usize::MAX {
                root_children.push(index[p]);
            } else {
                nodes[parent].children.push(index[p]);
            }
            for (j, kj) in ext.iter().enumerate() {
                if !clique_done[j] && touches(&path, kj) {
                    clique_done[j] = true;
                    queue.push_back((j, index[p]));
                }
            }
        }
    }
    if index.contains(&usize::MAX) {
        return Err(RankDecError::NotBasic);
    }
    let leaves: Vec<usize> = (0..nodes.len())
        .filter(|&i| nodes[i].children.is_empty())
        .collect();
    let lx = place_special(g, s, &nodes, &leaves, e.x).ok_or(RankDecError::NotBasic)?;
    // y follows x when a path of `s` runs through x into y
    let through_x = s
        .iter()
        .any(|p| (p[0] == e.y || p[p.len() - 1] == e.y) && p.contains(&e.x));
    let ly = if through_x {
        Some(lx)
    } else {
        place_special(g, s, &nodes, &leaves, e.y)
    };
    let ly = ly.ok_or(RankDecError::NotBasic)?;
    nodes[lx].path.push(e.x);
    nodes[ly].path.push(e.y);
    Ok(CharacteristicTree {
        nodes,
        root_children,
    })
}

/// Characteristic tree of a long pyramid: the triangle is the root clique,
/// the three paths are leaves and the apex plays the part of `x`.
pub fn characteristic_tree_pyramid(
    g: &Graph,
    s: &[Vec<usize>],
    py: &Pyramid,
) -> Result<CharacteristicTree, RankDecError> {
    let mut nodes: Vec<CharNode> = py
        .paths
        .iter()
        .map(|p| CharNode {
            path: p[..p.len() - 1].to_vec(),
            children: Vec::new(),
        })
        .collect();
    let leaves = [0, 1, 2];
    let l = place_special(g, s, &nodes, &leaves, py.apex).ok_or(RankDecError::NotBasic)?;
    nodes[l].path.push(py.apex);
    Ok(CharacteristicTree {
        nodes,
        root_children: vec![0, 1, 2],
    })
}

/// Splits a node path into the paths of `s` it holds and the maximal runs
/// between them.
fn segments(path: &[usize], s: &[Vec<usize>]) -> Result<Vec<Vec<usize>>, RankDecError> {
    let mut owner = vec![usize::MAX; path.len()];
    for (pi, p) in s.iter().enumerate() {
        let at: Vec<usize> = p
            .iter()
            .filter_map(|v| path.iter().position(|w| w == v))
            .collect();
        if at.is_empty() {
            continue;
        }
        let (lo, hi) = (*at.iter().min().unwrap(), *at.iter().max().unwrap());
        if at.len() != p.len() || hi - lo + 1 != p.len() {
            return Err(RankDecError::InvalidPaths(format!(
                "{p:?} is not inside one flat piece"
            )));
        }
        for o in &mut owner[lo..=hi] {
            *o = pi;
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for (i, &v) in path.iter().enumerate() {
        if i > 0 && owner[i] == owner[i - 1] {
            out.last_mut().unwrap().push(v);
        } else {
            out.push(vec![v]);
        }
    }
    Ok(out)
}

/// Decomposition read off a characteristic tree, children before parents.
pub fn decomposition_from_characteristic(
    g: &Graph,
    s: &[Vec<usize>],
    ct: &CharacteristicTree,
) -> Result<RankDecomposition, RankDecError> {
    ct.check(g)?;
    let mut b = Builder::new(g.n());
    fn build(
        b: &mut Builder,
        ct: &CharacteristicTree,
        s: &[Vec<usize>],
        i: usize,
    ) -> Result<usize, RankDecError> {
        let segs = segments(&ct.nodes[i].path, s)?;
        let own = if segs.len() == 1 {
            b.path(&segs[0])
        } else {
            let roots: Vec<usize> = segs.iter().map(|sg| b.path(sg)).collect();
            b.caterpillar(&roots)
        };
        if ct.nodes[i].children.is_empty() {
            return Ok(own);
        }
        let mut items = vec![own];
        for &c in &ct.nodes[i].children {
            items.push(build(b, ct, s, c)?);
        }
        Ok(b.caterpillar(&items))
    }
    let mut items = Vec::new();
    for &c in &ct.root_children {
        items.push(build(&mut b, ct, s, c)?);
    }
    b.caterpillar(&items);
    Ok(b.finish())
}

/// A decomposition of width at most 3 of a long pyramid or an extended
/// nontrivial basic graph in which every path of `s` is separated.
pub fn rank_decomposition_basic(
    g: &Graph,
    s: &[Vec<usize>],
    kind: &BasicKind,
) -> Result<RankDecomposition, RankDecError> {
    check_paths(g, s)?;
    let ct = match kind {
        BasicKind::ExtendedNontrivialBasic(e) => characteristic_tree_extended(g, s, e)?,
        BasicKind::LongPyramid(py) => characteristic_tree_pyramid(g, s, py)?,
        _ => return Err(RankDecError::NotBasic),
    };
    decomposition_from_characteristic(g, s, &ct)
}

/// Edge of `d` splitting off `set`, oriented as (far from `set`, on the
/// `set` side).
fn separating_edge(d: &RankDecomposition, n: usize, set: &VertexSet) -> Option<(usize, usize)> {
    let rest = set.complement(n);
    for (i, side) in d.edge_sides(n).iter().enumerate() {
        let (a, b) = d.edges[i];
        if side == set {
            return Some((a, b));
        }
        if *side == rest {
            return Some((b, a));
        }
    }
    None
}

/// Glues decompositions of the two blocks of a 2-join along their marker
/// paths into a decomposition of the parent on `n` vertices.
pub fn combine_rank_decompositions(
    d1: &RankDecomposition,
    d2: &RankDecomposition,
    blocks: (&Block, &Block),
    n: usize,
) -> Result<RankDecomposition, RankDecError> {
    let mut adj: Vec<Vec<usize>> = Vec::new();
    let mut leaf_map = vec![usize::MAX; n];
    let mut us = [0usize; 2];
    for (k, (d, blk)) in [(d1, blocks.0), (d2, blocks.1)].into_iter().enumerate() {
        let bn = blk.graph.n();
        d.validate(bn)?;
        let marker = VertexSet::from_iter(bn, blk.marker.iter().copied());
        let (u, v) =
            separating_edge(d, bn, &marker).ok_or(RankDecError::MarkerNotSeparated(blk.index))?;
        // keep the component of `u` once the edge `uv` is cut
        let dadj = d.adjacency();
        let offset = adj.len();
        let mut id = vec![usize::MAX; d.nodes];
        let mut stack = vec![u];
        id[u] = offset;
        let mut kept = vec![u];
        while let Some(t) = stack.pop() {
            for &w in &dadj[t] {
                if w != v && id[w] == usize::MAX {
                    id[w] = offset + kept.len();
                    kept.push(w);
                    stack.push(w);
                }
            }
        }
        adj.resize(offset + kept.len(), Vec::new());
        for &t in &kept {
            for &w in &dadj[t] {
                if w != v {
                    adj[id[t]].push(id[w]);
                }
            }
        }
        for (bv, o) in blk.origin.iter().enumerate() {
            if let Some(pv) = *o {
                leaf_map[pv] = id[d.leaf_map[bv]];
            }
        }
        us[k] = id[u];
    }
    adj[us[0]].push(us[1]);
    adj[us[1]].push(us[0]);
    if leaf_map.contains(&usize::MAX) {
        return Err(RankDecError::Malformed(
            "blocks do not cover the parent".into(),
        ));
    }
    let alive = vec![true; adj.len()];
    Ok(compact(&adj, &alive, &leaf_map))
}

/// Decomposition of the graph of a decomposition tree node in which every
/// path of the node's set is separated.
pub fn rank_decomposition_node(node: &DecompNode) -> Result<RankDecomposition, RankDecError> {
    let g = &node.graph;
    match &node.join {
        None => match node.basic.as_ref() {
            Some(BasicKind::Clique) => Ok(caterpillar_decomposition(
                g.n(),
                &(0..g.n()).collect::<Vec<_>>(),
            )),
            Some(BasicKind::Hole { cycle }) => Ok(caterpillar_decomposition(g.n(), cycle)),
            Some(kind) => rank_decomposition_basic(g, &node.flat_paths, kind),
            None => Err(RankDecError::NotBasic),
        },
        Some(join) => {
            let d1 = rank_decomposition_node(&join.children[0])?;
            let d2 = rank_decomposition_node(&join.children[1])?;
            combine_rank_decompositions(&d1, &d2, (&join.blocks[0], &join.blocks[1]), g.n())
        }
    }
}

/// A decomposition of width at most 3 of a connected even-hole-free graph
/// with no star cutset.
pub fn rank_decomposition(g: &Graph) -> Result<RankDecomposition, RankDecError> {
    if g.n() <= 1 {
        return Ok(caterpillar_decomposition(
            g.n(),
            &(0..g.n()).collect::<Vec<_>>(),
        ));
    }
    if !g.is_connected() {
        return Err(RankDecError::Disconnected);
    }
    let tree = build_decomposition_tree(g)?;
    rank_decomposition_node(&tree)
}
