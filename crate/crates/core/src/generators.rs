//! Constructions: the tight chromatic family, the family without clique
//! cutsets of growing clique-width, long pyramids, extended nontrivial
//! basic graphs from trees, 2-join composition and a seeded corpus.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::detect::{find_even_hole, find_star_cutset};
use crate::graph::{Graph, VertexSet};
use crate::twojoin::{side_path_parity, verify_split, TwoJoinError, TwoJoinSplit};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GenError {
    #[error("parameter k = {0} is out of range")]
    BadOrder(usize),
    #[error("pyramid path lengths {0:?} must be at least 2 and share parity")]
    BadPyramid([usize; 3]),
    #[error("input is not a tree")]
    NotATree,
    #[error("the tree yields fewer than two extended cliques")]
    TooFewExtendedCliques,
    #[error("leaf assignment must cover every leaf exactly once")]
    BadAssignment,
    #[error("{0:?} is not a flat path of length 3 or 4")]
    BadPath(Vec<usize>),
    #[error("marker lengths do not match the path parities of the other side")]
    ParityMismatch,
    #[error("composition does not form a 2-join")]
    NotATwoJoin,
    #[error(transparent)]
    Split(#[from] TwoJoinError),
}

/// A graph with a printable name per vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedGraph {
    pub graph: Graph,
    pub names: Vec<String>,
}

impl NamedGraph {
    pub fn id_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|s| s == name)
    }
}

/// The graph on `A ∪ B ∪ C ∪ D ∪ E ∪ F` with `ω = k` and `χ = k + 1`.
/// `A`, `C`, `E` are cliques of size `k-1`; `B`, `D` stable of size `k-1`;
/// `F` stable of size `k-2`.
pub fn tight_chromatic_graph(k: usize) -> Result<NamedGraph, GenError> {
    if k < 3 {
        return Err(GenError::BadOrder(k));
    }
    let m = k - 1;
    let base = |set: usize| set * m;
    let (a, b, c, d, e) = (base(0), base(1), base(2), base(3), base(4));
    let f = base(5);
    let n = 5 * m + (k - 2);
    let mut g = Graph::new(n);
    for off in [a, c, e] {
        for i in 0..m {
            for j in i + 1..m {
                g.add_edge(off + i, off + j);
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            g.add_edge(a + i, b + j);
            g.add_edge(c + i, d + j);
        }
        g.add_edge(b + i, c + i);
        g.add_edge(d + i, e + i);
        g.add_edge(a + m - 1, e + i);
    }
    for i in 0..k - 2 {
        g.add_edge(d, f + i);
        g.add_edge(a + i, f + i);
    }
    let mut names = Vec::with_capacity(n);
    for letter in ["a", "b", "c", "d", "e"] {
        names.extend((1..=m).map(|i| format!("{letter}_{i}")));
    }
    names.extend((1..=k - 2).map(|i| format!("f_{i}")));
    Ok(NamedGraph { graph: g, names })
}

/// Cliques `A_0..A_k` of size `k+1`, with `a_{i,j} ~ a_{i+1,l}` iff
/// `j + l ≤ k`, indices of the cliques taken mod `k+1`.
pub fn unbounded_cwd_graph(k: usize) -> Result<NamedGraph, GenError> {
    if k < 4 || k % 2 == 1 {
        return Err(GenError::BadOrder(k));
    }
    let s = k + 1;
    let id = |i: usize, j: usize| i * s + j;
    let mut g = Graph::new(s * s);
    for i in 0..s {
        for j in 0..s {
            for l in j + 1..s {
                g.add_edge(id(i, j), id(i, l));
            }
            for l in 0..s {
                if j + l <= k {
                    g.add_edge(id(i, j), id((i + 1) % s, l));
                }
            }
        }
    }
    let names = (0..s)
        .flat_map(|i| (0..s).map(move |j| format!("a_{i},{j}")))
        .collect();
    Ok(NamedGraph { graph: g, names })
}

/// Long pyramid with triangle `0,1,2`, apex `3` and paths of the given
/// lengths; interior vertices follow in path order.
pub fn long_pyramid(l1: usize, l2: usize, l3: usize) -> Result<NamedGraph, GenError> {
    let ls = [l1, l2, l3];
    if ls.iter().any(|&l| l < 2) || l1 % 2 != l2 % 2 || l2 % 2 != l3 % 2 {
        return Err(GenError::BadPyramid(ls));
    }
    let n = 4 + ls.iter().map(|l| l - 1).sum::<usize>();
    let mut g = Graph::new(n);
    g.add_edge(0, 1);
    g.add_edge(0, 2);
    g.add_edge(1, 2);
    let mut names: Vec<String> = ["x1", "x2", "x3", "y"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut next = 4;
    for (i, &l) in ls.iter().enumerate() {
        let mut prev = i;
        for j in 1..l {
            g.add_edge(prev, next);
            names.push(format!("p{}_{j}", i + 1));
            prev = next;
            next += 1;
        }
        g.add_edge(prev, 3);
    }
    Ok(NamedGraph { graph: g, names })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    X,
    Y,
}

/// Line graph of `tree` plus an adjacent pair `x`, `y`, where the leaf
/// node of each tree leaf `ℓ` is joined to the side `assignment` gives `ℓ`.
/// Line-graph vertex `i` is the `i`-th edge of `tree.edges()`; `x` and `y`
/// come last.
pub fn extended_basic_from_tree(
    tree: &Graph,
    assignment: &[(usize, Side)],
) -> Result<NamedGraph, GenError> {
    let t = tree.n();
    if t == 0 || tree.edge_count() != t - 1 || !tree.is_connected() {
        return Err(GenError::NotATree);
    }
    if (0..t).filter(|&v| tree.degree(v) >= 3).count() < 2 {
        return Err(GenError::TooFewExtendedCliques);
    }
    let leaves: Vec<usize> = (0..t).filter(|&v| tree.degree(v) == 1).collect();
    let mut side = vec![None; t];
    for &(leaf, s) in assignment {
        if leaf >= t || tree.degree(leaf) != 1 || side[leaf].is_some() {
            return Err(GenError::BadAssignment);
        }
        side[leaf] = Some(s);
    }
    if leaves.iter().any(|&l| side[l].is_none()) {
        return Err(GenError::BadAssignment);
    }
    let edges: Vec<(usize, usize)> = tree.edges().collect();
    let m = edges.len();
    let (x, y) = (m, m + 1);
    let mut g = Graph::new(m + 2);
    for i in 0..m {
        for j in i + 1..m {
            let (a, b) = edges[i];
            let (c, d) = edges[j];
            if a == c || a == d || b == c || b == d {
                g.add_edge(i, j);
            }
        }
        let (a, b) = edges[i];
        for v in [a, b] {
            match side[v] {
                Some(Side::X) => g.add_edge(i, x),
                Some(Side::Y) => g.add_edge(i, y),
                None => {}
            }
        }
    }
    g.add_edge(x, y);
    let mut names: Vec<String> = edges.iter().map(|(a, b)| format!("e{a}_{b}")).collect();
    names.push("x".into());
    names.push("y".into());
    Ok(NamedGraph { graph: g, names })
}

/// Leaf assignment by the parity of the depth of each leaf from vertex 0:
/// the only choice (up to swapping `x` and `y`) that avoids even holes
/// through `x` or `y`.
pub fn parity_assignment(tree: &Graph) -> Vec<(usize, Side)> {
    let depth = bfs_depths(tree, 0);
    (0..tree.n())
        .filter(|&v| tree.degree(v) == 1)
        .map(|v| (v, if depth[v].is_multiple_of(2) { Side::X } else { Side::Y }))
        .collect()
}

fn bfs_depths(g: &Graph, root: usize) -> Vec<usize> {
    let mut depth = vec![usize::MAX; g.n()];
    depth[root] = 0;
    let mut queue = std::collections::VecDeque::from([root]);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v).iter() {
            if depth[w] == usize::MAX {
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    depth
}

/// Two graphs, each with a flat path that stands for the other one.
#[derive(Clone, Debug)]
pub struct ComposeRecipe {
    pub first: Graph,
    pub first_path: Vec<usize>,
    pub second: Graph,
    pub second_path: Vec<usize>,
}

/// Result of gluing: `first` minus its path keeps ids `0..`, followed by
/// `second` minus its path.
#[derive(Clone, Debug)]
pub struct Composed {
    pub graph: Graph,
    pub split: TwoJoinSplit,
    /// `(0, v)` for a vertex of `first`, `(1, v)` for one of `second`.
    pub origin: Vec<(usize, usize)>,
}

/// Inverse of taking blocks: `first` without `first_path` becomes `X1`,
/// `second` without `second_path` becomes `X2`; the neighbors of the path
/// ends become `A` and `B`.
pub fn compose_two_join(r: &ComposeRecipe) -> Result<Composed, GenError> {
    for (g, p) in [(&r.first, &r.first_path), (&r.second, &r.second_path)] {
        let k = p.len().wrapping_sub(1);
        if !(k == 3 || k == 4) || !g.is_flat_path(p) {
            return Err(GenError::BadPath(p.clone()));
        }
    }
    let mut origin = Vec::new();
    let mut local = [
        vec![usize::MAX; r.first.n()],
        vec![usize::MAX; r.second.n()],
    ];
    for (side, (g, p)) in [(&r.first, &r.first_path), (&r.second, &r.second_path)]
        .into_iter()
        .enumerate()
    {
        for v in 0..g.n() {
            if !p.contains(&v) {
                local[side][v] = origin.len();
                origin.push((side, v));
            }
        }
    }
    let n = origin.len();
    let mut g = Graph::new(n);
    let mut ends: [[VertexSet; 2]; 2] = Default::default();
    for (side, (h, p)) in [(&r.first, &r.first_path), (&r.second, &r.second_path)]
        .into_iter()
        .enumerate()
    {
        for (u, v) in h.edges() {
            let (lu, lv) = (local[side][u], local[side][v]);
            if lu != usize::MAX && lv != usize::MAX {
                g.add_edge(lu, lv);
            }
        }
        for (e, &end) in [p[0], *p.last().unwrap()].iter().enumerate() {
            ends[side][e] = VertexSet::from_iter(
                n,
                h.neighbors(end)
                    .iter()
                    .filter(|w| !p.contains(w))
                    .map(|w| local[side][w]),
            );
        }
    }
    for e in 0..2 {
        for u in ends[0][e].iter() {
            for v in ends[1][e].iter() {
                g.add_edge(u, v);
            }
        }
    }
    let x1 = VertexSet::from_iter(n, (0..n).filter(|&v| origin[v].0 == 0));
    let [[a1, b1], [a2, b2]] = ends;
    let split = TwoJoinSplit {
        x2: x1.complement(n),
        x1,
        a1,
        b1,
        a2,
        b2,
    };
    if !verify_split(&g, &split) {
        return Err(GenError::NotATwoJoin);
    }
    let k1 = side_path_parity(&g, &split, 1)?.marker_length();
    let k2 = side_path_parity(&g, &split, 2)?.marker_length();
    if r.first_path.len() - 1 != k2 || r.second_path.len() - 1 != k1 {
        return Err(GenError::ParityMismatch);
    }
    Ok(Composed {
        graph: g,
        split,
        origin,
    })
}

/// All flat paths with `len` edges, each listed once with the smaller end
/// first.
pub fn flat_paths_of_length(g: &Graph, len: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for start in 0..g.n() {
        let mut path = vec![start];
        grow_flat(g, len, &mut path, &mut out);
    }
    out.retain(|p| p[0] < *p.last().unwrap());
    out.sort();
    out
}

fn grow_flat(g: &Graph, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if path.len() == len + 1 {
        if g.is_induced_path(path) {
            out.push(path.clone());
        }
        return;
    }
    let last = *path.last().unwrap();
    if path.len() > 1 && g.degree(last) != 2 {
        return;
    }
    for w in g.neighbors(last).iter() {
        if !path.contains(&w) {
            path.push(w);
            grow_flat(g, len, path, out);
            path.pop();
        }
    }
}

/// Random tree with `branches ≥ 2` vertices of degree at least 3, each
/// carrying at most one pendant leaf, and subdivided edges of random length.
pub fn random_branching_tree(rng: &mut impl Rng, branches: usize) -> Graph {
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut next = branches;
    let mut degree = vec![0usize; branches];
    let join = |edges: &mut Vec<(usize, usize)>,
                next: &mut usize,
                u: usize,
                v: Option<usize>,
                inner: usize| {
        let mut prev = u;
        for _ in 0..inner {
            edges.push((prev, *next));
            prev = *next;
            *next += 1;
        }
        let end = v.unwrap_or_else(|| {
            let leaf = *next;
            *next += 1;
            leaf
        });
        edges.push((prev, end));
    };
    for b in 1..branches {
        let parent = rng.gen_range(0..b);
        let inner = rng.gen_range(0..=3);
        join(&mut edges, &mut next, parent, Some(b), inner);
        degree[parent] += 1;
        degree[b] += 1;
    }
    for (b, &d) in degree.iter().enumerate() {
        let extra = 3usize.saturating_sub(d) + rng.gen_range(0..=1);
        for i in 0..extra {
            // one pendant leaf per branch vertex at most; other pendants
            // are paths of length at least 2
            let inner = if i == 0 {
                rng.gen_range(0..=3)
            } else {
                rng.gen_range(1..=3)
            };
            join(&mut edges, &mut next, b, None, inner);
        }
    }
    Graph::from_edges(next, edges).expect("tree edges are valid")
}

/// Random extended nontrivial basic graph with the parity leaf assignment;
/// retries until both `x` and `y` receive leaves.
pub fn random_extended_basic(rng: &mut impl Rng, branches: usize) -> NamedGraph {
    loop {
        let tree = random_branching_tree(rng, branches);
        let assignment = parity_assignment(&tree);
        let has_both =
            assignment.iter().any(|a| a.1 == Side::X) && assignment.iter().any(|a| a.1 == Side::Y);
        if has_both {
            return extended_basic_from_tree(&tree, &assignment).expect("generated tree is valid");
        }
    }
}

/// Random long pyramid with path lengths of a random common parity.
pub fn random_long_pyramid(rng: &mut impl Rng) -> NamedGraph {
    let odd = rng.gen_bool(0.5);
    let mut pick = || {
        let base = if odd { 3 } else { 2 };
        base + 2 * rng.gen_range(0..=3)
    };
    let (a, b, c) = (pick(), pick(), pick());
    long_pyramid(a, b, c).expect("lengths share parity")
}

fn random_piece(rng: &mut impl Rng) -> Graph {
    if rng.gen_bool(0.4) {
        random_long_pyramid(rng).graph
    } else {
        let branches = rng.gen_range(2..=3);
        random_extended_basic(rng, branches).graph
    }
}

/// Whether `g` is connected, even-hole-free and has no star cutset.
pub fn is_in_class(g: &Graph) -> bool {
    g.is_connected()
        && matches!(find_star_cutset(g), Ok(None))
        && matches!(find_even_hole(g), Ok(None))
}

/// One corpus graph and how it was made.
#[derive(Clone, Debug)]
pub struct CorpusInstance {
    pub name: String,
    pub graph: Graph,
    /// Number of basic pieces glued together.
    pub pieces: usize,
}

/// A generated graph that failed the class test.
#[derive(Clone, Debug)]
pub struct Quarantined {
    pub name: String,
    pub graph: Graph,
    pub reason: String,
}

/// Tries to glue a random piece onto `g` along one of its flat paths.
fn grow(rng: &mut impl Rng, g: &Graph) -> Option<Graph> {
    for _ in 0..20 {
        let piece = random_piece(rng);
        let kf = if rng.gen_bool(0.5) { 3 } else { 4 };
        let mut fp = flat_paths_of_length(g, kf);
        let mut sp = flat_paths_of_length(&piece, 7 - kf);
        if fp.is_empty() || sp.is_empty() {
            continue;
        }
        fp.shuffle(rng);
        sp.shuffle(rng);
        for first_path in fp.iter().take(4) {
            for second_path in sp.iter().take(4) {
                for flip in [false, true] {
                    let mut sp2 = second_path.clone();
                    if flip {
                        sp2.reverse();
                    }
                    let recipe = ComposeRecipe {
                        first: g.clone(),
                        first_path: first_path.clone(),
                        second: piece.clone(),
                        second_path: sp2,
                    };
                    if let Ok(c) = compose_two_join(&recipe) {
                        return Some(c.graph);
                    }
                }
            }
        }
    }
    None
}

/// Seeded corpus of composed graphs with `n` in `sizes`. Graphs that fail
/// the class test are returned separately rather than kept.
pub fn generate_corpus(
    seed: u64,
    count: usize,
    sizes: std::ops::RangeInclusive<usize>,
) -> (Vec<CorpusInstance>, Vec<Quarantined>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut kept = Vec::new();
    let mut quarantined = Vec::new();
    let mut attempt = 0;
    while kept.len() < count && attempt < count * 50 {
        attempt += 1;
        let target = rng.gen_range(sizes.clone());
        let mut g = random_piece(&mut rng);
        let mut pieces = 1;
        while g.n() < target {
            match grow(&mut rng, &g) {
                Some(h) if h.n() <= *sizes.end() => {
                    g = h;
                    pieces += 1;
                }
                _ => break,
            }
        }
        if pieces < 2 || !sizes.contains(&g.n()) {
            continue;
        }
        let name = format!("corpus-{seed}-{attempt}");
        if is_in_class(&g) {
            kept.push(CorpusInstance {
                name,
                graph: g,
                pieces,
            });
        } else {
            quarantined.push(Quarantined {
                name,
                graph: g,
                reason: "failed class test".into(),
            });
        }
    }
    (kept, quarantined)
}
