//! Simple undirected graphs over dense vertex ids `0..n` with bitset rows.

use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};

use serde::{Serialize, Serializer};
use smallvec::SmallVec;
use thiserror::Error;

const WORD: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),
}

/// A subset of `0..n`, stored as 64-bit words.
///
/// Sets taking part in one binary operation must share the same universe
/// size; the operators zip over words.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    words: SmallVec<[u64; 2]>,
}

impl VertexSet {
    pub fn new(n: usize) -> Self {
        VertexSet {
            words: SmallVec::from_elem(0, n.div_ceil(WORD)),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut s = Self::new(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(n: usize, it: I) -> Self {
        let mut s = Self::new(n);
        for v in it {
            s.insert(v);
        }
        s
    }

    pub fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::new(n);
        s.insert(v);
        s
    }

    /// Number of vertices the set can hold (rounded up to a word).
    pub fn capacity(&self) -> usize {
        self.words.len() * WORD
    }

    #[inline]
    pub fn insert(&mut self, v: usize) {
        self.words[v / WORD] |= 1u64 << (v % WORD);
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.words[v / WORD] &= !(1u64 << (v % WORD));
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.capacity() && self.words[v / WORD] & (1u64 << (v % WORD)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    /// Least member.
    pub fn first(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    pub fn iter(&self) -> Members<'_> {
        Members {
            words: &self.words,
            idx: 0,
            cur: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &VertexSet) -> bool {
        !self.is_disjoint(other)
    }

    pub fn union_with(&mut self, other: &VertexSet) {
        self.words
            .iter_mut()
            .zip(&other.words)
            .for_each(|(a, b)| *a |= b);
    }

    pub fn intersect_with(&mut self, other: &VertexSet) {
        self.words
            .iter_mut()
            .zip(&other.words)
            .for_each(|(a, b)| *a &= b);
    }

    pub fn difference_with(&mut self, other: &VertexSet) {
        self.words
            .iter_mut()
            .zip(&other.words)
            .for_each(|(a, b)| *a &= !b);
    }

    /// `0..n` minus this set.
    pub fn complement(&self, n: usize) -> VertexSet {
        let mut c = VertexSet::full(n);
        c.difference_with(self);
        c
    }

    /// The members as a single `u128` mask, for sets over at most 128 vertices.
    pub(crate) fn as_u128(&self) -> Option<u128> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0] as u128),
            2 => Some(self.words[0] as u128 | (self.words[1] as u128) << 64),
            _ => None,
        }
    }

    pub(crate) fn from_u128(n: usize, bits: u128) -> VertexSet {
        let mut s = VertexSet::new(n);
        for (i, w) in s.words.iter_mut().enumerate() {
            *w = (bits >> (64 * i)) as u64;
        }
        s
    }

    /// Whether `self & other == target`, without allocating.
    pub fn intersection_equals(&self, other: &VertexSet, target: &VertexSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .zip(&target.words)
            .all(|((a, b), t)| a & b == *t)
    }

    pub fn intersection_len(&self, other: &VertexSet) -> usize {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }
}

impl BitOr for &VertexSet {
    type Output = VertexSet;
    fn bitor(self, rhs: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.union_with(rhs);
        s
    }
}

impl BitAnd for &VertexSet {
    type Output = VertexSet;
    fn bitand(self, rhs: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.intersect_with(rhs);
        s
    }
}

impl Sub for &VertexSet {
    type Output = VertexSet;
    fn sub(self, rhs: &VertexSet) -> VertexSet {
        let mut s = self.clone();
        s.difference_with(rhs);
        s
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

pub struct Members<'a> {
    words: &'a [u64],
    idx: usize,
    cur: u64,
}

impl Iterator for Members<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.cur != 0 {
                let bit = self.cur.trailing_zeros() as usize;
                self.cur &= self.cur - 1;
                return Some(self.idx * WORD + bit);
            }
            self.idx += 1;
            if self.idx >= self.words.len() {
                return None;
            }
            self.cur = self.words[self.idx];
        }
    }
}

/// Simple undirected graph on vertices `0..n`.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: vec![VertexSet::new(n); n],
        }
    }

    /// Builds a graph from an edge list, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::new(n);
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Inserts `uv`; idempotent. Panics on a loop or out-of-range id.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v, "self-loop at {u}");
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(v);
        self.adj[v].remove(u);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(VertexSet::len).sum::<usize>() / 2
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn closed_neighborhood(&self, v: usize) -> VertexSet {
        let mut s = self.adj[v].clone();
        s.insert(v);
        s
    }

    /// Vertices outside `set` with a neighbor in `set`.
    pub fn neighborhood_of_set(&self, set: &VertexSet) -> VertexSet {
        let mut out = VertexSet::new(self.n);
        for v in set.iter() {
            out.union_with(&self.adj[v]);
        }
        out.difference_with(set);
        out
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    pub fn empty_set(&self) -> VertexSet {
        VertexSet::new(self.n)
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| {
            self.adj[u]
                .iter()
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn check_set(&self, set: &VertexSet) -> Result<(), GraphError> {
        match set.iter().find(|&v| v >= self.n) {
            Some(v) => Err(GraphError::VertexOutOfRange {
                vertex: v,
                n: self.n,
            }),
            None => Ok(()),
        }
    }

    pub fn is_clique(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| {
            let mut rest = set.clone();
            rest.remove(v);
            rest.is_subset(&self.adj[v])
        })
    }

    pub fn is_stable(&self, set: &VertexSet) -> bool {
        set.iter().all(|v| self.adj[v].is_disjoint(set))
    }

    /// `G[keep]` relabelled to `0..|keep|` in increasing id order, together
    /// with the map from new ids to old ids.
    pub fn induced_subgraph(&self, keep: &VertexSet) -> (Graph, Vec<usize>) {
        let map: Vec<usize> = keep.iter().collect();
        let mut inv = vec![usize::MAX; self.n];
        for (i, &v) in map.iter().enumerate() {
            inv[v] = i;
        }
        let mut h = Graph::new(map.len());
        for (i, &v) in map.iter().enumerate() {
            for w in self.adj[v].iter() {
                let j = inv[w];
                if j != usize::MAX && j > i {
                    h.add_edge(i, j);
                }
            }
        }
        (h, map)
    }

    /// Vertices reachable from `start` inside `within`.
    pub fn reachable(&self, start: usize, within: &VertexSet) -> VertexSet {
        let mut seen = VertexSet::new(self.n);
        if !within.contains(start) {
            return seen;
        }
        seen.insert(start);
        let mut frontier = seen.clone();
        while !frontier.is_empty() {
            let mut next = VertexSet::new(self.n);
            for v in frontier.iter() {
                next.union_with(&self.adj[v]);
            }
            next.intersect_with(within);
            next.difference_with(&seen);
            seen.union_with(&next);
            frontier = next;
        }
        seen
    }

    /// Connected components of `G \ removed`, ordered by least vertex.
    pub fn components(&self, removed: &VertexSet) -> Vec<VertexSet> {
        let mut rest = removed.complement(self.n);
        let mut parts = Vec::new();
        while let Some(v) = rest.first() {
            let comp = self.reachable(v, &rest);
            rest.difference_with(&comp);
            parts.push(comp);
        }
        parts
    }

    /// Components of `G[within]`.
    pub fn components_within(&self, within: &VertexSet) -> Vec<VertexSet> {
        self.components(&within.complement(self.n))
    }

    /// The empty graph counts as connected.
    pub fn is_connected(&self) -> bool {
        self.n == 0 || self.reachable(0, &self.vertices()).len() == self.n
    }

    pub fn is_connected_within(&self, within: &VertexSet) -> bool {
        match within.first() {
            None => true,
            Some(v) => self.reachable(v, within) == *within,
        }
    }

    /// Shortest path from any vertex of `from` to any vertex of `to`, using
    /// only vertices of `via` as interior vertices. Returned in order.
    pub fn shortest_path_between(
        &self,
        from: &VertexSet,
        to: &VertexSet,
        via: &VertexSet,
    ) -> Option<Vec<usize>> {
        let mut pred = vec![usize::MAX; self.n];
        let mut queue = std::collections::VecDeque::new();
        let mut seen = VertexSet::new(self.n);
        for s in from.iter() {
            if to.contains(s) {
                return Some(vec![s]);
            }
            seen.insert(s);
            queue.push_back(s);
        }
        while let Some(v) = queue.pop_front() {
            for w in self.adj[v].iter() {
                if seen.contains(w) {
                    continue;
                }
                if to.contains(w) {
                    let mut path = vec![w, v];
                    let mut cur = v;
                    while pred[cur] != usize::MAX {
                        cur = pred[cur];
                        path.push(cur);
                    }
                    path.reverse();
                    return Some(path);
                }
                if via.contains(w) {
                    seen.insert(w);
                    pred[w] = v;
                    queue.push_back(w);
                }
            }
        }
        None
    }

    /// Whether `G[set]` is a path graph (connected, acyclic, max degree 2).
    /// A single vertex is a path; the empty set is not.
    pub fn induces_path(&self, set: &VertexSet) -> bool {
        let k = set.len();
        if k == 0 || !self.is_connected_within(set) {
            return false;
        }
        let mut deg_sum = 0;
        for v in set.iter() {
            let d = self.adj[v].intersection_len(set);
            if d > 2 {
                return false;
            }
            deg_sum += d;
        }
        deg_sum / 2 == k - 1
    }

    /// Whether `path` (in order) is an induced path of the graph.
    pub fn is_induced_path(&self, path: &[usize]) -> bool {
        let k = path.len();
        for i in 0..k {
            for j in i + 1..k {
                if self.has_edge(path[i], path[j]) != (j == i + 1) {
                    return false;
                }
            }
        }
        let mut seen = VertexSet::new(self.n);
        path.iter().all(|&v| {
            let fresh = !seen.contains(v);
            seen.insert(v);
            fresh
        })
    }

    /// Whether `path` is a flat path: an induced path whose interior
    /// vertices all have degree 2 in the graph.
    pub fn is_flat_path(&self, path: &[usize]) -> bool {
        self.is_induced_path(path)
            && path.len() >= 2
            && path[1..path.len() - 1].iter().all(|&v| self.degree(v) == 2)
    }

    /// Whether `cycle` (in order) is a chordless cycle of length at least 4.
    pub fn is_hole(&self, cycle: &[usize]) -> bool {
        let k = cycle.len();
        if k < 4 {
            return false;
        }
        let mut seen = VertexSet::new(self.n);
        for &v in cycle {
            if v >= self.n || seen.contains(v) {
                return false;
            }
            seen.insert(v);
        }
        for i in 0..k {
            for j in i + 1..k {
                let consecutive = j == i + 1 || (i == 0 && j == k - 1);
                if self.has_edge(cycle[i], cycle[j]) != consecutive {
                    return false;
                }
            }
        }
        true
    }

    /// Disjoint union with `other`, whose vertices are shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        let mut g = Graph::new(n);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.n, v + self.n);
        }
        g
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges=", self.n)?;
        f.debug_list().entries(self.edges()).finish()?;
        write!(f, ")")
    }
}

/// Common small graphs.
pub mod named {
    use super::Graph;

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    /// Cycle `0-1-...-(n-1)-0`; requires `n >= 3`.
    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }
}
