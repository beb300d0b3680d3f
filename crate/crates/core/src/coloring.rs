//! Special labels, nice elimination orders and the greedy coloring they
//! drive. A nice order colored greedily in reverse uses at most `ω + 1`
//! colors.

use serde::Serialize;
use thiserror::Error;

use crate::detect::{BasicKind, ExtendedBasic, Pyramid};
use crate::graph::{Graph, VertexSet};
use crate::twojoin::{build_decomposition_tree, Block, DecompNode, TwoJoinError, TwoJoinSplit};

pub use crate::cliques::clique_number;

#[derive(Debug, Error)]
pub enum ColoringError {
    #[error(transparent)]
    Decomposition(#[from] TwoJoinError),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid labels: {0}")]
    InvalidLabels(String),
    #[error("expected a long pyramid or an extended nontrivial basic graph")]
    NotBasic,
    #[error("{0:?} is not a flat path of length at least 2")]
    NotFlat(Vec<usize>),
    #[error("no almost simplicial vertex left among {0:?}")]
    Stuck(Vec<usize>),
    #[error("order does not cover the vertices exactly once")]
    IncompleteOrder,
}

/// The pair `(C, F)`: every vertex of `F` has degree 2 and every vertex of
/// `C` has a neighbor in `F`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpecialLabels {
    pub c_set: VertexSet,
    pub f_set: VertexSet,
}

impl SpecialLabels {
    pub fn empty(n: usize) -> Self {
        SpecialLabels {
            c_set: VertexSet::new(n),
            f_set: VertexSet::new(n),
        }
    }

    pub fn check(&self, g: &Graph) -> Result<(), ColoringError> {
        let bad = |m: String| Err(ColoringError::InvalidLabels(m));
        if g.check_set(&self.c_set).is_err() || g.check_set(&self.f_set).is_err() {
            return bad("label set out of range".into());
        }
        if self.c_set.intersects(&self.f_set) {
            return bad("C and F intersect".into());
        }
        if let Some(f) = self.f_set.iter().find(|&f| g.degree(f) != 2) {
            return bad(format!("vertex {f} of F has degree {}", g.degree(f)));
        }
        if let Some(c) = self
            .c_set
            .iter()
            .find(|&c| !g.neighbors(c).intersects(&self.f_set))
        {
            return bad(format!("vertex {c} of C has no neighbor in F"));
        }
        Ok(())
    }
}

/// Vertices of `G ∖ F` in elimination order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct EliminationOrder(pub Vec<usize>);

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct Coloring {
    /// Color of each vertex, starting at 1.
    pub colors: Vec<usize>,
}

impl Coloring {
    pub fn colors_used(&self) -> usize {
        self.colors.iter().copied().max().unwrap_or(0)
    }

    pub fn is_proper(&self, g: &Graph) -> bool {
        self.colors.len() == g.n()
            && self.colors.iter().all(|&c| c > 0)
            && g.edges().all(|(u, v)| self.colors[u] != self.colors[v])
    }
}

/// Whether `v` is almost simplicial in `g`.
pub fn is_almost_simplicial(g: &Graph, labels: &SpecialLabels, v: usize) -> bool {
    is_almost_simplicial_in(g, labels, &g.vertices(), v)
}

/// Whether `v` is almost simplicial in `G[alive]`: its neighborhood is a
/// clique, or a clique plus one vertex outside `C`.
pub fn is_almost_simplicial_in(
    g: &Graph,
    labels: &SpecialLabels,
    alive: &VertexSet,
    v: usize,
) -> bool {
    let nb = g.neighbors(v) & alive;
    if g.is_clique(&nb) {
        return true;
    }
    nb.iter().filter(|&u| !labels.c_set.contains(u)).any(|u| {
        let mut rest = nb.clone();
        rest.remove(u);
        g.is_clique(&rest)
    })
}

/// First failing step of an order, if any.
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum NiceOrderError {
    #[error("order does not cover V ∖ F exactly once")]
    Coverage,
    #[error("vertex {vertex} is not almost simplicial at step {step}")]
    NotAlmostSimplicial { step: usize, vertex: usize },
}

/// Replays `order` on `G ∖ F` and checks every step.
pub fn audit_nice_order(
    g: &Graph,
    labels: &SpecialLabels,
    order: &[usize],
) -> Result<(), NiceOrderError> {
    let mut alive = labels.f_set.complement(g.n());
    if order.len() != alive.len() || order.iter().any(|&v| v >= g.n()) {
        return Err(NiceOrderError::Coverage);
    }
    for (step, &v) in order.iter().enumerate() {
        if !alive.contains(v) {
            return Err(NiceOrderError::Coverage);
        }
        if !is_almost_simplicial_in(g, labels, &alive, v) {
            return Err(NiceOrderError::NotAlmostSimplicial { step, vertex: v });
        }
        alive.remove(v);
    }
    Ok(())
}

/// Labels of the block `block` of the split `s` of a labeled parent.
pub fn propagate_labels(
    g: &Graph,
    s: &TwoJoinSplit,
    labels: &SpecialLabels,
    block: &Block,
) -> Result<SpecialLabels, ColoringError> {
    labels.check(g)?;
    let (x, a, b, _) = s.side(block.index);
    let (_, a_other, b_other, _) = s.side(3 - block.index);
    let n = block.graph.n();
    let mut out = SpecialLabels::empty(n);
    for (i, o) in block.origin.iter().enumerate() {
        if let Some(v) = *o {
            debug_assert!(x.contains(v));
            if labels.c_set.contains(v) {
                out.c_set.insert(i);
            }
            if labels.f_set.contains(v) {
                out.f_set.insert(i);
            }
        }
    }
    let end_label = |ends: &VertexSet, far: &VertexSet| {
        ends.len() == 1
            && labels.c_set.contains(ends.first().unwrap())
            && far.intersects(&labels.f_set)
    };
    for (ends, far, m) in [
        (a, a_other, block.marker_a()),
        (b, b_other, block.marker_b()),
    ] {
        if end_label(ends, far) {
            out.f_set.insert(m);
        } else {
            out.c_set.insert(m);
        }
    }
    for &m in &block.marker[1..block.marker.len() - 1] {
        out.f_set.insert(m);
    }
    Ok(out)
}

/// `(K1 ∪ K2 ∪ V(P)) ∖ F`, where `Ki` is the rest of the neighborhood of an
/// end of `P` when that is a clique.
pub fn q_set(g: &Graph, labels: &SpecialLabels, p: &[usize]) -> VertexSet {
    let on_p = VertexSet::from_iter(g.n(), p.iter().copied());
    let mut q = on_p.clone();
    for &u in [p[0], p[p.len() - 1]].iter() {
        let k = g.neighbors(u) - &on_p;
        if g.is_clique(&k) {
            q.union_with(&k);
        }
    }
    q.difference_with(&labels.f_set);
    q
}

/// Builds an order by appending vertices and tracking what is left.
struct Eliminator<'a> {
    g: &'a Graph,
    labels: &'a SpecialLabels,
    alive: VertexSet,
    order: Vec<usize>,
}

impl<'a> Eliminator<'a> {
    fn new(g: &'a Graph, labels: &'a SpecialLabels) -> Self {
        Eliminator {
            g,
            labels,
            alive: labels.f_set.complement(g.n()),
            order: Vec::new(),
        }
    }

    fn push(&mut self, v: usize) {
        if self.alive.contains(v) {
            self.alive.remove(v);
            self.order.push(v);
        }
    }

    /// Eliminates all of `targets`, least id first among the eligible
    /// vertices; simplicial vertices go before merely almost simplicial
    /// ones when `prefer_simplicial` is set.
    fn drain(&mut self, targets: &VertexSet, prefer_simplicial: bool) -> Result<(), ColoringError> {
        let mut left = targets & &self.alive;
        while !left.is_empty() {
            let simplicial = |v: usize| self.g.is_clique(&(self.g.neighbors(v) & &self.alive));
            let pick = prefer_simplicial
                .then(|| left.iter().find(|&v| simplicial(v)))
                .flatten()
                .or_else(|| {
                    left.iter()
                        .find(|&v| is_almost_simplicial_in(self.g, self.labels, &self.alive, v))
                });
            let Some(v) = pick else {
                return Err(ColoringError::Stuck(left.to_vec()));
            };
            left.remove(v);
            self.push(v);
        }
        Ok(())
    }

    fn finish(self) -> EliminationOrder {
        EliminationOrder(self.order)
    }
}

/// Post-order of the tree `T_H` on `part`, rooted at `root`: each vertex
/// hangs below its unique neighbor one step closer to the root, children
/// come before parents and among siblings the ones in `late` come last.
/// Root vertices are not emitted.
fn tree_post_order(g: &Graph, part: &VertexSet, root: &VertexSet, late: &VertexSet) -> Vec<usize> {
    let n = g.n();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue: std::collections::VecDeque<usize> = root.iter().collect();
    for v in root.iter() {
        dist[v] = 0;
    }
    while let Some(u) = queue.pop_front() {
        for w in (g.neighbors(u) & part).iter() {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                parent[w] = u;
                queue.push_back(w);
            }
        }
    }
    let mut children: Vec<Vec<usize>> = vec![Vec::new(); n];
    for v in part.iter() {
        if parent[v] != usize::MAX {
            children[parent[v]].push(v);
        }
    }
    for c in children.iter_mut() {
        c.sort_by_key(|&v| (late.contains(v), v));
    }
    let mut out = Vec::new();
    for r in root.iter() {
        // iterative post-order below `r`
        let mut stack: Vec<(usize, usize)> = children[r].iter().rev().map(|&c| (c, 0)).collect();
        while let Some((v, i)) = stack.pop() {
            if i < children[v].len() {
                stack.push((v, i + 1));
                stack.push((children[v][i], 0));
            } else {
                out.push(v);
            }
        }
    }
    out
}

/// Grows `p` through degree-2 ends into a maximal flat path.
fn maximal_flat_path(g: &Graph, p: &[usize]) -> Vec<usize> {
    let mut path: std::collections::VecDeque<usize> = p.iter().copied().collect();
    let on = |path: &std::collections::VecDeque<usize>, v: usize| path.contains(&v);
    loop {
        let front = path[0];
        if g.degree(front) != 2 {
            break;
        }
        match g.neighbors(front).iter().find(|&w| !on(&path, w)) {
            Some(w) if g.degree(w) >= 2 && !g.has_edge(w, *path.back().unwrap()) => {
                path.push_front(w)
            }
            _ => break,
        }
    }
    loop {
        let back = *path.back().unwrap();
        if g.degree(back) != 2 {
            break;
        }
        match g.neighbors(back).iter().find(|&w| !on(&path, w)) {
            Some(w) if !g.has_edge(w, path[0]) => path.push_back(w),
            _ => break,
        }
    }
    path.into_iter().collect()
}

/// Root clique of a component of the line part: the extended clique
/// holding its least vertex that lies in one, or the least vertex alone.
fn default_root(n: usize, comp: &VertexSet, extended: &[Vec<usize>]) -> VertexSet {
    for v in comp.iter() {
        if let Some(k) = extended
            .iter()
            .find(|k| k.contains(&v) && k.iter().all(|&u| comp.contains(u)))
        {
            return VertexSet::from_iter(n, k.iter().copied());
        }
    }
    VertexSet::from_iter(n, comp.first())
}

/// A nice order of `G ∖ F` for a long pyramid or an extended nontrivial
/// basic graph. With a flat path `p`, the set `q_set(p)` is eliminated
/// last.
pub fn nice_order_basic(
    g: &Graph,
    labels: &SpecialLabels,
    kind: &BasicKind,
    p: Option<&[usize]>,
) -> Result<EliminationOrder, ColoringError> {
    labels.check(g)?;
    if let Some(p) = p {
        if p.len() < 3 || !g.is_flat_path(p) {
            return Err(ColoringError::NotFlat(p.to_vec()));
        }
    }
    match kind {
        BasicKind::ExtendedNontrivialBasic(e) => Ok(extended_order(g, labels, e, p)?),
        BasicKind::LongPyramid(py) => Ok(pyramid_order(g, labels, py, p)?),
        _ => Err(ColoringError::NotBasic),
    }
}

fn extended_order(
    g: &Graph,
    labels: &SpecialLabels,
    e: &ExtendedBasic,
    p: Option<&[usize]>,
) -> Result<EliminationOrder, ColoringError> {
    let n = g.n();
    let full = p.map(|p| maximal_flat_path(g, p));
    let q_full = match &full {
        Some(pp) => q_set(g, labels, pp),
        None => VertexSet::new(n),
    };
    let mut el = Eliminator::new(g, labels);
    let xy = VertexSet::from_iter(n, [e.x, e.y]);

    // labeled vertices outside Q ∪ {x, y} lose their F neighbor, so they go first
    let early = &(&labels.c_set - &q_full) - &xy;
    el.drain(&early, true)?;

    let e_vertices = &(g.neighbors(e.x) | g.neighbors(e.y)) - &xy;
    let mut part = e.line_part.clone();
    let mut roots = VertexSet::new(n);
    if let Some(pp) = &full {
        part.difference_with(&VertexSet::from_iter(n, pp.iter().copied()));
        for comp in g.components_within(&part) {
            let r = &q_full & &comp;
            let r = if r.is_empty() {
                default_root(n, &comp, &e.extended_cliques)
            } else {
                r
            };
            roots.union_with(&r);
            for v in tree_post_order(g, &comp, &r, &e_vertices) {
                el.push(v);
            }
        }
    } else {
        let r = default_root(n, &part, &e.extended_cliques);
        roots.union_with(&r);
        for v in tree_post_order(g, &part, &r, &e_vertices) {
            el.push(v);
        }
    }
    // whichever of x, y sees less of what is left goes first
    let mut ends: Vec<usize> = [e.x, e.y]
        .into_iter()
        .filter(|&v| !q_full.contains(v))
        .collect();
    ends.sort_by_key(|&v| ((g.neighbors(v) & &el.alive).len(), v));
    for v in ends {
        el.push(v);
    }
    finish_with_q(el, g, labels, p, &q_full)
}

/// Eliminates whatever is left outside `Q_{P'}`, then `Q_{P'} ∖ Q_P`, then
/// `Q_P`, preferring simplicial vertices inside `Q_P`.
fn finish_with_q(
    mut el: Eliminator<'_>,
    g: &Graph,
    labels: &SpecialLabels,
    p: Option<&[usize]>,
    q_full: &VertexSet,
) -> Result<EliminationOrder, ColoringError> {
    let rest = &el.alive - q_full;
    el.drain(&rest, true)?;
    if let Some(p) = p {
        let q = q_set(g, labels, p);
        el.drain(&(q_full - &q), true)?;
        el.drain(&q, true)?;
    }
    let left = el.alive.clone();
    el.drain(&left, true)?;
    Ok(el.finish())
}

/// The pyramid version: the two paths other than the one holding `P` are
/// eliminated from the apex side toward the triangle.
fn pyramid_order(
    g: &Graph,
    labels: &SpecialLabels,
    py: &Pyramid,
    p: Option<&[usize]>,
) -> Result<EliminationOrder, ColoringError> {
    let n = g.n();
    let holder = match p {
        Some(p) => (0..3)
            .find(|&i| p.iter().all(|v| py.paths[i].contains(v)))
            .ok_or_else(|| ColoringError::NotFlat(p.to_vec()))?,
        None => 0,
    };
    let full = &py.paths[holder];
    let q_full = match p {
        Some(_) => q_set(g, labels, full),
        None => VertexSet::new(n),
    };
    let mut el = Eliminator::new(g, labels);
    let early = &labels.c_set - &q_full;
    let early = &early - &VertexSet::from_iter(n, [py.apex]);
    el.drain(&early, true)?;
    for i in (0..3).filter(|&i| i != holder) {
        // paths run from the triangle to the apex; skip both ends
        let path = &py.paths[i];
        for &v in path[1..path.len() - 1].iter().rev() {
            if !q_full.contains(v) {
                el.push(v);
            }
        }
    }
    finish_with_q(el, g, labels, p, &q_full)
}

/// A nice order of a hole: a vertex with a neighbor outside `C` goes first,
/// what remains is a union of paths.
fn hole_order(g: &Graph, labels: &SpecialLabels) -> Result<EliminationOrder, ColoringError> {
    let mut el = Eliminator::new(g, labels);
    let first = el
        .alive
        .iter()
        .find(|&v| is_almost_simplicial_in(g, labels, &el.alive, v))
        .ok_or_else(|| ColoringError::Stuck(el.alive.to_vec()))?;
    el.push(first);
    let left = el.alive.clone();
    el.drain(&left, true)?;
    Ok(el.finish())
}

/// A nice order of `G ∖ F` for the graph of a decomposition tree node.
pub fn nice_order_node(
    node: &DecompNode,
    labels: &SpecialLabels,
) -> Result<EliminationOrder, ColoringError> {
    let g = &node.graph;
    labels.check(g)?;
    let Some(join) = &node.join else {
        return match node.basic.as_ref() {
            Some(BasicKind::Clique) => {
                Ok(EliminationOrder(labels.f_set.complement(g.n()).to_vec()))
            }
            Some(BasicKind::Hole { .. }) => hole_order(g, labels),
            Some(kind @ (BasicKind::LongPyramid(_) | BasicKind::ExtendedNontrivialBasic(_))) => {
                nice_order_basic(g, labels, kind, None)
            }
            _ => Err(ColoringError::NotBasic),
        };
    };
    let s = &join.split;
    let [b1, b2] = &join.blocks;
    let kind = join.children[join.basic_child]
        .basic
        .as_ref()
        .ok_or(ColoringError::NotBasic)?;
    let l1 = propagate_labels(g, s, labels, b1)?;
    let l2 = propagate_labels(g, s, labels, b2)?;

    // O1: the basic block's order without its Q part, in parent ids
    let o1_full = nice_order_basic(&b1.graph, &l1, kind, Some(&b1.marker))?;
    let q = q_set(&b1.graph, &l1, &b1.marker);
    let mut order: Vec<usize> = Vec::with_capacity(g.n());
    for v in o1_full.0 {
        if !q.contains(v) {
            order.push(b1.origin[v].ok_or(ColoringError::IncompleteOrder)?);
        }
    }

    // O2': the other block's order with its marker ends replaced
    let o2 = nice_order_node(&join.children[1], &l2)?;
    let (_, a1, bb1, _) = s.side(b1.index);
    for v in o2.0 {
        let ends = if v == b2.marker_a() {
            Some(a1)
        } else if v == b2.marker_b() {
            Some(bb1)
        } else {
            None
        };
        match ends {
            Some(set) => {
                if l2.c_set.contains(v) && g.is_clique(set) {
                    order.extend(set.iter());
                }
            }
            None => order.push(b2.origin[v].ok_or(ColoringError::IncompleteOrder)?),
        }
    }
    Ok(EliminationOrder(order))
}

/// Eliminates any almost simplicial vertex until none is left. Almost
/// simpliciality survives deleting other vertices, so this finds a nice
/// order whenever one exists.
pub fn greedy_nice_order(
    g: &Graph,
    labels: &SpecialLabels,
) -> Result<EliminationOrder, ColoringError> {
    labels.check(g)?;
    let mut el = Eliminator::new(g, labels);
    let all = el.alive.clone();
    el.drain(&all, true)?;
    Ok(el.finish())
}

/// How a nice order was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderMethod {
    Decomposition,
    /// The graph has no extreme 2-join and is not basic.
    GreedyElimination,
}

/// A nice order of a connected even-hole-free graph with no star cutset,
/// built along the 2-join decomposition tree. Graphs that are neither
/// basic nor split by a 2-join fall back to [`greedy_nice_order`].
pub fn nice_order_with_method(g: &Graph) -> Result<(EliminationOrder, OrderMethod), ColoringError> {
    if g.n() == 0 {
        return Ok((EliminationOrder(Vec::new()), OrderMethod::Decomposition));
    }
    if !g.is_connected() {
        return Err(ColoringError::Disconnected);
    }
    let labels = SpecialLabels::empty(g.n());
    match build_decomposition_tree(g) {
        Ok(tree) => Ok((nice_order_node(&tree, &labels)?, OrderMethod::Decomposition)),
        Err(TwoJoinError::NoBasicLeaf { .. }) => Ok((
            greedy_nice_order(g, &labels)?,
            OrderMethod::GreedyElimination,
        )),
        Err(e) => Err(e.into()),
    }
}

pub fn nice_order(g: &Graph) -> Result<EliminationOrder, ColoringError> {
    nice_order_with_method(g).map(|(o, _)| o)
}

/// Colors vertices in reverse `order`, each with the least color not used
/// by an already colored neighbor.
pub fn greedy_color(g: &Graph, order: &[usize]) -> Result<Coloring, ColoringError> {
    let n = g.n();
    let mut seen = VertexSet::new(n);
    for &v in order {
        if v >= n || seen.contains(v) {
            return Err(ColoringError::IncompleteOrder);
        }
        seen.insert(v);
    }
    if seen.len() != n {
        return Err(ColoringError::IncompleteOrder);
    }
    let mut colors = vec![0usize; n];
    let mut taken = vec![false; n + 2];
    for &v in order.iter().rev() {
        for w in g.neighbors(v).iter() {
            taken[colors[w]] = true;
        }
        colors[v] = (1..).find(|&c| !taken[c]).unwrap();
        for w in g.neighbors(v).iter() {
            taken[colors[w]] = false;
        }
    }
    Ok(Coloring { colors })
}

#[derive(Clone, Debug, Serialize)]
pub struct ColorReport {
    pub order: EliminationOrder,
    pub coloring: Coloring,
    pub method: OrderMethod,
    pub omega: usize,
    pub colors_used: usize,
    pub bound: usize,
}

/// Nice order, greedy coloring and clique number of `g`.
pub fn color_graph(g: &Graph) -> Result<ColorReport, ColoringError> {
    let (order, method) = nice_order_with_method(g)?;
    let coloring = greedy_color(g, &order.0)?;
    let omega = clique_number(g);
    Ok(ColorReport {
        colors_used: coloring.colors_used(),
        coloring,
        method,
        omega,
        bound: omega + 1,
        order,
    })
}
