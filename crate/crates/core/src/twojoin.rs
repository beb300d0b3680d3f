//! 2-joins: search, verification, blocks of decomposition with marker
//! paths, and extreme non-crossing decomposition trees.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::detect::{classify_basic, BasicKind};
use crate::graph::{Graph, VertexSet};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwoJoinError {
    #[error("the split does not satisfy the 2-join conditions")]
    InvalidSplit,
    #[error("side {side} has no path from A to B with interior in C")]
    NoSidePath { side: usize },
    #[error("paths of side {side} disagree in parity; the graph has an even hole")]
    ParityDisagreement { side: usize },
    #[error("no extreme non-crossing 2-join found in a non-basic graph on {n} vertices")]
    NoBasicLeaf { n: usize },
    #[error("decomposition exceeded depth {0}")]
    DepthExceeded(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwoJoinSplit {
    pub x1: VertexSet,
    pub x2: VertexSet,
    pub a1: VertexSet,
    pub b1: VertexSet,
    pub a2: VertexSet,
    pub b2: VertexSet,
}

impl TwoJoinSplit {
    pub fn c1(&self) -> VertexSet {
        &(&self.x1 - &self.a1) - &self.b1
    }

    pub fn c2(&self) -> VertexSet {
        &(&self.x2 - &self.a2) - &self.b2
    }

    /// `(X, A, B, C)` of the given side (1 or 2).
    pub fn side(&self, side: usize) -> (&VertexSet, &VertexSet, &VertexSet, VertexSet) {
        match side {
            1 => (&self.x1, &self.a1, &self.b1, self.c1()),
            2 => (&self.x2, &self.a2, &self.b2, self.c2()),
            _ => panic!("side must be 1 or 2, got {side}"),
        }
    }

    /// The same 2-join with the roles of the two sides exchanged.
    pub fn swapped(&self) -> Self {
        TwoJoinSplit {
            x1: self.x2.clone(),
            x2: self.x1.clone(),
            a1: self.a2.clone(),
            b1: self.b2.clone(),
            a2: self.a1.clone(),
            b2: self.b1.clone(),
        }
    }

    /// Deterministic key used for tie-breaking: `(X1, A1, B1)` as lists.
    pub fn signature(&self) -> (Vec<usize>, Vec<usize>, Vec<usize>) {
        (self.x1.to_vec(), self.a1.to_vec(), self.b1.to_vec())
    }

    /// Whether some edge between the sides lies on one of `paths`.
    pub fn crosses(&self, paths: &[Vec<usize>]) -> bool {
        paths.iter().any(|p| {
            p.windows(2)
                .any(|w| self.x1.contains(w[0]) != self.x1.contains(w[1]))
        })
    }
}

/// Checks every condition of the 2-join definition.
pub fn verify_split(g: &Graph, s: &TwoJoinSplit) -> bool {
    let n = g.n();
    let sets = [&s.x1, &s.x2, &s.a1, &s.b1, &s.a2, &s.b2];
    if sets.iter().any(|x| g.check_set(x).is_err()) {
        return false;
    }
    if s.x1.intersects(&s.x2) || (&s.x1 | &s.x2).len() != n {
        return false;
    }
    for side in 1..=2 {
        let (x, a, b, _) = s.side(side);
        if x.len() < 3 || a.is_empty() || b.is_empty() || a.intersects(b) {
            return false;
        }
        if !a.is_subset(x) || !b.is_subset(x) {
            return false;
        }
        if g.shortest_path_between(a, b, x).is_none() || g.induces_path(x) {
            return false;
        }
    }
    for u in s.x1.iter() {
        let expected = if s.a1.contains(u) {
            s.a2.clone()
        } else if s.b1.contains(u) {
            s.b2.clone()
        } else {
            g.empty_set()
        };
        if (g.neighbors(u) & &s.x2) != expected {
            return false;
        }
    }
    true
}

/// Seed `(a1, a2, b1, b2)`: `a1a2` and `b1b2` are edges and `a1b2`,
/// `a2b1` are not.
type Seed = (usize, usize, usize, usize);

fn seeds(g: &Graph) -> Vec<Seed> {
    let mut out = Vec::new();
    let edges: Vec<(usize, usize)> = g.edges().flat_map(|(u, v)| [(u, v), (v, u)]).collect();
    for &(a1, a2) in &edges {
        for &(b1, b2) in &edges {
            if a1 >= b1 || a2 == b2 || a1 == b2 || a2 == b1 {
                continue;
            }
            if g.has_edge(a1, b2) || g.has_edge(a2, b1) {
                continue;
            }
            out.push((a1, a2, b1, b2));
        }
    }
    out.sort_unstable();
    out
}

/// Closure on `u128` masks, used when the graph has at most 128 vertices.
struct SmallCloser {
    adj: Vec<u128>,
    forbidden: Vec<u128>,
}

impl SmallCloser {
    fn new(g: &Graph, forbidden: &[VertexSet]) -> Option<SmallCloser> {
        if g.n() > 128 {
            return None;
        }
        Some(SmallCloser {
            adj: (0..g.n())
                .map(|v| g.neighbors(v).as_u128().unwrap())
                .collect(),
            forbidden: forbidden.iter().map(|p| p.as_u128().unwrap()).collect(),
        })
    }

    fn neighbors_of(&self, mut set: u128) -> u128 {
        let mut out = 0;
        while set != 0 {
            out |= self.adj[set.trailing_zeros() as usize];
            set &= set - 1;
        }
        out
    }

    /// Same rules as [`closure`].
    fn close(&self, start: u128, a2: usize, b2: usize) -> Option<u128> {
        let ends = 1u128 << a2 | 1u128 << b2;
        let (adj_a, adj_b) = (self.adj[a2], self.adj[b2]);
        let mut y = 0u128;
        let mut reach = 0u128;
        let mut pending = start;
        let (mut na, mut nb) = (0u128, 0u128);
        loop {
            let mut grew = true;
            while grew {
                grew = false;
                for &p in &self.forbidden {
                    if p & pending != 0 && p & !(pending | y) != 0 {
                        pending |= p;
                        grew = true;
                    }
                }
            }
            pending &= !y;
            if pending == 0 {
                return Some(y);
            }
            if pending & ends != 0 {
                return None;
            }
            let fresh = self.neighbors_of(pending);
            reach |= fresh;
            y |= pending;
            let (new_na, new_nb) = (adj_a & y, adj_b & y);
            if new_na & new_nb != 0 {
                return None;
            }
            let mut scan = if new_na != na || new_nb != nb {
                reach
            } else {
                fresh
            };
            scan &= !(y | ends);
            na = new_na;
            nb = new_nb;
            let mut add = 0u128;
            while scan != 0 {
                let w = scan.trailing_zeros() as usize;
                scan &= scan - 1;
                let s = self.adj[w] & y;
                if s != na && s != nb {
                    add |= 1u128 << w;
                }
            }
            pending = add;
        }
    }
}

/// Smallest superset of `start` that can be the side `X1` of a 2-join with
/// `a2 ∈ A2`, `b2 ∈ B2` and no forbidden path crossing. Every rule below
/// only adds vertices that any such `X1 ⊇ start` must contain.
fn closure(
    g: &Graph,
    start: VertexSet,
    a2: usize,
    b2: usize,
    forbidden: &[VertexSet],
) -> Option<VertexSet> {
    let n = g.n();
    let mut y = VertexSet::new(n);
    let mut reach = VertexSet::new(n);
    let mut pending = start;
    let mut na = VertexSet::new(n);
    let mut nb = VertexSet::new(n);
    loop {
        // absorb the pending vertices and any forbidden path they touch
        let mut grew = true;
        while grew {
            grew = false;
            for p in forbidden {
                if p.intersects(&pending) && !p.is_subset(&(&pending | &y)) {
                    pending.union_with(p);
                    grew = true;
                }
            }
        }
        pending.difference_with(&y);
        if pending.is_empty() {
            return Some(y);
        }
        if pending.contains(a2) || pending.contains(b2) {
            return None;
        }
        for v in pending.iter() {
            reach.union_with(g.neighbors(v));
        }
        y.union_with(&pending);
        let new_na = g.neighbors(a2) & &y;
        let new_nb = g.neighbors(b2) & &y;
        if new_na.intersects(&new_nb) {
            return None;
        }
        // unless the attachments moved, only neighbors of new vertices can change
        let scan = if new_na != na || new_nb != nb {
            reach.clone()
        } else {
            let mut s = VertexSet::new(n);
            for v in pending.iter() {
                s.union_with(g.neighbors(v));
            }
            s
        };
        na = new_na;
        nb = new_nb;
        let mut add = VertexSet::new(n);
        for w in scan.iter() {
            if w == a2 || w == b2 || y.contains(w) {
                continue;
            }
            let nw = g.neighbors(w);
            if !nw.intersection_equals(&y, &na) && !nw.intersection_equals(&y, &nb) {
                add.insert(w);
            }
        }
        pending = add;
    }
}

/// The split induced by side `x1` and the seed's `a2`, `b2`; `None` when the
/// outside vertices do not attach as a 2-join requires.
fn split_for(g: &Graph, x1: &VertexSet, a2: usize, b2: usize) -> Option<TwoJoinSplit> {
    let n = g.n();
    let a1 = g.neighbors(a2) & x1;
    let b1 = g.neighbors(b2) & x1;
    let x2 = x1.complement(n);
    let mut sa2 = VertexSet::new(n);
    let mut sb2 = VertexSet::new(n);
    for w in x2.iter() {
        let s = g.neighbors(w) & x1;
        if s.is_empty() {
            continue;
        }
        if s == a1 {
            sa2.insert(w);
        } else if s == b1 {
            sb2.insert(w);
        } else {
            return None;
        }
    }
    let split = TwoJoinSplit {
        x1: x1.clone(),
        x2,
        a1,
        b1,
        a2: sa2,
        b2: sb2,
    };
    verify_split(g, &split).then_some(split)
}

/// Orientation-free key of a 2-join, for deduplication.
fn canonical_key(s: &TwoJoinSplit) -> (Vec<usize>, Vec<usize>) {
    let s = if s.x1.contains(0) {
        s.clone()
    } else {
        s.swapped()
    };
    let (a, b) = (s.a1.to_vec(), s.b1.to_vec());
    (s.x1.to_vec(), a.min(b))
}

/// Search limits for the exhaustive 2-join enumeration.
#[derive(Clone, Copy, Debug)]
pub struct SearchLimits {
    /// Closed sets explored per seed.
    pub states_per_seed: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            states_per_seed: 512,
        }
    }
}

/// Calls `visit` on every valid split found, per seed in lexicographic
/// order, growing `X1` one vertex at a time from the seed closure. Splits
/// are reported once up to orientation. Stops when `visit` returns `false`.
pub fn for_each_two_join<F>(g: &Graph, forbidden: &[Vec<usize>], limits: SearchLimits, mut visit: F)
where
    F: FnMut(&TwoJoinSplit) -> bool,
{
    let n = g.n();
    if n < 6 {
        return;
    }
    let forbidden: Vec<VertexSet> = forbidden
        .iter()
        .map(|p| VertexSet::from_iter(n, p.iter().copied()))
        .collect();
    let small = SmallCloser::new(g, &forbidden);
    let close = |start: VertexSet, a2: usize, b2: usize| match &small {
        Some(sc) => sc
            .close(start.as_u128().unwrap(), a2, b2)
            .map(|bits| VertexSet::from_u128(n, bits)),
        None => closure(g, start, a2, b2, &forbidden),
    };
    let mut reported: HashSet<(Vec<usize>, Vec<usize>)> = HashSet::new();
    // closed sets already expanded, shared by seeds with the same `a2`, `b2`
    let mut visited: HashSet<(usize, usize, VertexSet)> = HashSet::new();
    for (a1, a2, b1, b2) in seeds(g) {
        let Some(y0) = close(VertexSet::from_iter(n, [a1, b1]), a2, b2) else {
            continue;
        };
        let mut expanded = 0;
        // a vertex whose addition fails stays dead for every superset
        let mut stack = vec![(y0, VertexSet::new(n))];
        while let Some((y, mut dead)) = stack.pop() {
            if expanded >= limits.states_per_seed || !visited.insert((a2, b2, y.clone())) {
                continue;
            }
            expanded += 1;
            if n - y.len() < 3 {
                continue;
            }
            if let Some(split) = split_for(g, &y, a2, b2) {
                if reported.insert(canonical_key(&split)) && !visit(&split) {
                    return;
                }
            }
            let mut next = Vec::new();
            for c in (0..n).rev() {
                if y.contains(c) || dead.contains(c) || c == a2 || c == b2 {
                    continue;
                }
                let mut grown = y.clone();
                grown.insert(c);
                match close(grown, a2, b2) {
                    Some(z) => next.push(z),
                    None => dead.insert(c),
                }
            }
            stack.extend(next.into_iter().map(|z| (z, dead.clone())));
        }
    }
}

/// First 2-join found whose crossing edges avoid all `forbidden` paths.
pub fn find_two_join(g: &Graph, forbidden: &[Vec<usize>]) -> Option<TwoJoinSplit> {
    let mut found = None;
    for_each_two_join(g, forbidden, SearchLimits::default(), |s| {
        found = Some(s.clone());
        false
    });
    found
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Parity {
    Odd,
    Even,
}

impl Parity {
    pub fn of_length(len: usize) -> Self {
        if len % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    /// Marker length used when this parity is replaced.
    pub fn marker_length(self) -> usize {
        match self {
            Parity::Odd => 3,
            Parity::Even => 4,
        }
    }
}

/// Parity of a shortest path from `A_i` to `B_i` with interior in `C_i`.
pub fn side_path_parity(g: &Graph, s: &TwoJoinSplit, side: usize) -> Result<Parity, TwoJoinError> {
    let (_, a, b, c) = s.side(side);
    let path = g
        .shortest_path_between(a, b, &c)
        .ok_or(TwoJoinError::NoSidePath { side })?;
    Ok(Parity::of_length(path.len() - 1))
}

/// Like [`side_path_parity`], but also enumerates up to `limit` induced
/// `A_i`–`B_i` paths through `C_i` and checks they all share the parity.
pub fn side_path_parity_checked(
    g: &Graph,
    s: &TwoJoinSplit,
    side: usize,
    limit: usize,
) -> Result<Parity, TwoJoinError> {
    let parity = side_path_parity(g, s, side)?;
    let (_, a, b, c) = s.side(side);
    let mut ok = true;
    let mut seen = 0;
    for start in a.iter() {
        let mut path = vec![start];
        let mut blocked = VertexSet::singleton(g.n(), start);
        blocked.union_with(a);
        side_paths(g, b, &c, &mut path, blocked, &mut |p| {
            seen += 1;
            if Parity::of_length(p.len() - 1) != parity {
                ok = false;
            }
            ok && seen < limit
        });
        if !ok || seen >= limit {
            break;
        }
    }
    if ok {
        Ok(parity)
    } else {
        Err(TwoJoinError::ParityDisagreement { side })
    }
}

fn side_paths(
    g: &Graph,
    ends: &VertexSet,
    via: &VertexSet,
    path: &mut Vec<usize>,
    blocked: VertexSet,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> bool {
    let last = *path.last().unwrap();
    let reach = g.neighbors(last) - &blocked;
    let mut next_blocked = blocked;
    next_blocked.union_with(g.neighbors(last));
    for w in reach.iter() {
        if ends.contains(w) {
            path.push(w);
            let keep = visit(path);
            path.pop();
            if !keep {
                return false;
            }
        } else if via.contains(w) {
            path.push(w);
            let mut b = next_blocked.clone();
            b.insert(w);
            let keep = side_paths(g, ends, via, path, b, visit);
            path.pop();
            if !keep {
                return false;
            }
        }
    }
    true
}

/// A block of decomposition: one side of a 2-join with the other side
/// replaced by a marker path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    /// 1 when the block keeps `X1`, 2 when it keeps `X2`.
    pub index: usize,
    pub graph: Graph,
    /// Marker path in block ids, from the end complete to `A` to the end
    /// complete to `B`.
    pub marker: Vec<usize>,
    /// Parent vertex of each block vertex; `None` on the marker.
    pub origin: Vec<Option<usize>>,
}

impl Block {
    pub fn marker_length(&self) -> usize {
        self.marker.len() - 1
    }

    pub fn marker_a(&self) -> usize {
        self.marker[0]
    }

    pub fn marker_b(&self) -> usize {
        *self.marker.last().unwrap()
    }

    /// Block id of each parent vertex kept in this block.
    pub fn block_ids(&self, parent_n: usize) -> Vec<Option<usize>> {
        let mut ids = vec![None; parent_n];
        for (b, o) in self.origin.iter().enumerate() {
            if let Some(p) = o {
                ids[*p] = Some(b);
            }
        }
        ids
    }

    /// Kept vertices (those with a parent) as a block vertex set.
    pub fn kept(&self) -> VertexSet {
        VertexSet::from_iter(
            self.graph.n(),
            self.origin
                .iter()
                .enumerate()
                .filter(|(_, o)| o.is_some())
                .map(|(i, _)| i),
        )
    }
}

fn make_block(g: &Graph, s: &TwoJoinSplit, index: usize, k: usize) -> Block {
    let (x, a, b, _) = s.side(index);
    let keep = x.to_vec();
    let m = keep.len();
    let n = m + k + 1;
    let mut graph = Graph::new(n);
    let mut local = vec![usize::MAX; g.n()];
    for (i, &v) in keep.iter().enumerate() {
        local[v] = i;
    }
    for (i, &v) in keep.iter().enumerate() {
        for w in g.neighbors(v).iter() {
            if x.contains(w) && local[w] > i {
                graph.add_edge(i, local[w]);
            }
        }
    }
    let marker: Vec<usize> = (m..n).collect();
    for w in marker.windows(2) {
        graph.add_edge(w[0], w[1]);
    }
    for v in a.iter() {
        graph.add_edge(local[v], marker[0]);
    }
    for v in b.iter() {
        graph.add_edge(local[v], marker[k]);
    }
    let mut origin: Vec<Option<usize>> = keep.into_iter().map(Some).collect();
    origin.resize(n, None);
    Block {
        index,
        graph,
        marker,
        origin,
    }
}

/// Builds both blocks. Block 1 keeps `X1` with a marker whose length
/// follows the parity of side 2, and symmetrically.
pub fn build_blocks(g: &Graph, s: &TwoJoinSplit) -> Result<(Block, Block), TwoJoinError> {
    if !verify_split(g, s) {
        return Err(TwoJoinError::InvalidSplit);
    }
    let k2 = side_path_parity(g, s, 2)?.marker_length();
    let k1 = side_path_parity(g, s, 1)?.marker_length();
    Ok((make_block(g, s, 1, k2), make_block(g, s, 2, k1)))
}

/// Glues two blocks back together along their markers; vertex ids are the
/// original parent ids.
pub fn recompose(b1: &Block, b2: &Block) -> Graph {
    let n = b1.origin.iter().chain(&b2.origin).flatten().count();
    let mut g = Graph::new(n);
    let mut attach: [[Vec<usize>; 2]; 2] = Default::default();
    for (side, blk) in [b1, b2].into_iter().enumerate() {
        for (u, v) in blk.graph.edges() {
            if let (Some(p), Some(q)) = (blk.origin[u], blk.origin[v]) {
                g.add_edge(p, q);
            }
        }
        for (end, m) in [blk.marker_a(), blk.marker_b()].into_iter().enumerate() {
            attach[side][end] = blk
                .graph
                .neighbors(m)
                .iter()
                .filter_map(|w| blk.origin[w])
                .collect();
        }
    }
    for end in 0..2 {
        for &p in &attach[0][end] {
            for &q in &attach[1][end] {
                g.add_edge(p, q);
            }
        }
    }
    g
}

/// A join node of the decomposition tree.
#[derive(Clone, Debug)]
pub struct Join {
    pub split: TwoJoinSplit,
    pub blocks: [Block; 2],
    pub children: [DecompNode; 2],
    /// Index (0 or 1) of the child that is a basic leaf.
    pub basic_child: usize,
}

/// A node `(H, S)` of a 2-join decomposition tree.
#[derive(Clone, Debug)]
pub struct DecompNode {
    pub graph: Graph,
    pub flat_paths: Vec<Vec<usize>>,
    /// Classification of a leaf.
    pub basic: Option<BasicKind>,
    pub join: Option<Box<Join>>,
}

impl DecompNode {
    pub fn is_leaf(&self) -> bool {
        self.join.is_none()
    }

    pub fn leaves(&self) -> Vec<&DecompNode> {
        match &self.join {
            None => vec![self],
            Some(j) => j.children.iter().flat_map(|c| c.leaves()).collect(),
        }
    }

    pub fn depth(&self) -> usize {
        match &self.join {
            None => 0,
            Some(j) => 1 + j.children.iter().map(DecompNode::depth).max().unwrap_or(0),
        }
    }

    pub fn view(&self) -> DecompView {
        DecompView {
            vertices: self.graph.n(),
            edges: self.graph.edges().collect(),
            flat_paths: self.flat_paths.clone(),
            basic_kind: self.basic.as_ref().map(|b| b.tag()),
            split: self.join.as_ref().map(|j| SplitView {
                x1: j.split.x1.to_vec(),
                x2: j.split.x2.to_vec(),
                a1: j.split.a1.to_vec(),
                b1: j.split.b1.to_vec(),
                a2: j.split.a2.to_vec(),
                b2: j.split.b2.to_vec(),
            }),
            marker_lengths: self
                .join
                .as_ref()
                .map(|j| [j.blocks[1].marker_length(), j.blocks[0].marker_length()]),
            children: self
                .join
                .as_ref()
                .map(|j| j.children.iter().map(DecompNode::view).collect())
                .unwrap_or_default(),
        }
    }
}

/// Serializable form of a decomposition tree.
#[derive(Clone, Debug, Serialize)]
pub struct DecompView {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
    pub flat_paths: Vec<Vec<usize>>,
    pub basic_kind: Option<&'static str>,
    pub split: Option<SplitView>,
    /// `[k1, k2]`: lengths of the markers replacing `X1` and `X2`.
    pub marker_lengths: Option<[usize; 2]>,
    pub children: Vec<DecompView>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub struct SplitView {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub a1: Vec<usize>,
    pub b1: Vec<usize>,
    pub a2: Vec<usize>,
    pub b2: Vec<usize>,
}

fn paths_within(paths: &[Vec<usize>], side: &VertexSet, ids: &[Option<usize>]) -> Vec<Vec<usize>> {
    paths
        .iter()
        .filter(|p| p.iter().all(|&v| side.contains(v)))
        .map(|p| p.iter().map(|&v| ids[v].expect("kept vertex")).collect())
        .collect()
}

/// Children `(G1, S1 ∪ {P2})` and `(G2, S2 ∪ {P1})` of a join at `s`.
fn child_path_sets(
    g: &Graph,
    s: &TwoJoinSplit,
    blocks: &[Block; 2],
    paths: &[Vec<usize>],
) -> [Vec<Vec<usize>>; 2] {
    let mk = |i: usize, x: &VertexSet| {
        let mut ps = paths_within(paths, x, &blocks[i].block_ids(g.n()));
        ps.push(blocks[i].marker.clone());
        ps
    };
    [mk(0, &s.x1), mk(1, &s.x2)]
}

/// A candidate extreme split: the block of side `x1` is basic.
#[derive(Clone, Debug)]
pub struct Extreme {
    pub split: TwoJoinSplit,
    pub blocks: (Block, Block),
    pub kind: BasicKind,
}

/// All non-crossing splits whose `X1` block is basic, ordered by block
/// size and then split signature.
pub fn extreme_candidates(g: &Graph, paths: &[Vec<usize>], limits: SearchLimits) -> Vec<Extreme> {
    let mut out: Vec<(usize, (Vec<usize>, Vec<usize>, Vec<usize>), Extreme)> = Vec::new();
    for_each_two_join(g, paths, limits, |s| {
        for split in [s.clone(), s.swapped()] {
            let Ok((b1, b2)) = build_blocks(g, &split) else {
                continue;
            };
            let kind = classify_basic(&b1.graph);
            if kind.is_basic() {
                out.push((
                    b1.graph.n(),
                    split.signature(),
                    Extreme {
                        split,
                        blocks: (b1, b2),
                        kind,
                    },
                ));
            }
        }
        true
    });
    out.sort_by(|a, b| (a.0, &a.1).cmp(&(b.0, &b.1)));
    out.into_iter().map(|(_, _, e)| e).collect()
}

/// Extreme 2-join decomposition tree of a connected even-hole-free graph
/// with no star cutset. The basic child of every join is the block of the
/// side `X1` of its split. A greedy choice can leave a block whose only
/// 2-joins cross a marker path, so candidates are tried in order with
/// backtracking.
pub fn build_decomposition_tree(g: &Graph) -> Result<DecompNode, TwoJoinError> {
    let mut budget = TreeBudget {
        expansions: 0,
        max_expansions: 16 * g.n().max(8),
    };
    build_node(g.clone(), Vec::new(), 0, 2 * g.n() + 8, &mut budget)
}

struct TreeBudget {
    expansions: usize,
    max_expansions: usize,
}

fn build_node(
    g: Graph,
    paths: Vec<Vec<usize>>,
    depth: usize,
    max_depth: usize,
    budget: &mut TreeBudget,
) -> Result<DecompNode, TwoJoinError> {
    if depth > max_depth {
        return Err(TwoJoinError::DepthExceeded(max_depth));
    }
    let kind = classify_basic(&g);
    if kind.is_basic() {
        return Ok(DecompNode {
            graph: g,
            flat_paths: paths,
            basic: Some(kind),
            join: None,
        });
    }
    let n = g.n();
    for cand in extreme_candidates(&g, &paths, SearchLimits::default()) {
        budget.expansions += 1;
        if budget.expansions > budget.max_expansions {
            break;
        }
        let Extreme {
            split,
            blocks: (b1, b2),
            kind,
        } = cand;
        let blocks = [b1, b2];
        let [p1, p2] = child_path_sets(&g, &split, &blocks, &paths);
        match build_node(blocks[1].graph.clone(), p2, depth + 1, max_depth, budget) {
            Ok(rest) => {
                let leaf = DecompNode {
                    graph: blocks[0].graph.clone(),
                    flat_paths: p1,
                    basic: Some(kind),
                    join: None,
                };
                return Ok(DecompNode {
                    graph: g,
                    flat_paths: paths,
                    basic: None,
                    join: Some(Box::new(Join {
                        split,
                        blocks,
                        children: [leaf, rest],
                        basic_child: 0,
                    })),
                });
            }
            Err(TwoJoinError::NoBasicLeaf { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(TwoJoinError::NoBasicLeaf { n })
}

/// All distinct 2-joins found (up to orientation), in discovery order.
pub fn all_two_joins(
    g: &Graph,
    forbidden: &[Vec<usize>],
    limits: SearchLimits,
) -> Vec<TwoJoinSplit> {
    let mut out = Vec::new();
    for_each_two_join(g, forbidden, limits, |s| {
        out.push(s.clone());
        true
    });
    out
}

/// Checks the structural invariants of a decomposition tree: leaves are
/// basic, paths in `S` are flat and disjoint, crossing edges avoid `S`,
/// every join has a basic child and its blocks recompose to the node.
pub fn audit_tree(node: &DecompNode) -> Result<(), String> {
    let mut used = BTreeSet::new();
    for p in &node.flat_paths {
        if !node.graph.is_flat_path(p) {
            return Err(format!("path {p:?} is not flat"));
        }
        for &v in p {
            if !used.insert(v) {
                return Err(format!("paths share vertex {v}"));
            }
        }
    }
    match &node.join {
        None => match &node.basic {
            Some(k) if k.is_basic() => Ok(()),
            _ => Err("leaf is not basic".into()),
        },
        Some(j) => {
            if !verify_split(&node.graph, &j.split) {
                return Err("invalid split".into());
            }
            if j.split.crosses(&node.flat_paths) {
                return Err("split crosses a flat path".into());
            }
            if !j.children[j.basic_child].is_leaf() {
                return Err("join without a basic child".into());
            }
            if recompose(&j.blocks[0], &j.blocks[1]) != node.graph {
                return Err("blocks do not recompose".into());
            }
            for c in &j.children {
                audit_tree(c)?;
            }
            Ok(())
        }
    }
}
