//! Exponential-time ground truth for tests and cross-checks. Every oracle
//! refuses inputs above its budget instead of approximating.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::cliques::clique_number;
use crate::detect::StarCutsetWitness;
use crate::gf2::cut_rank_unchecked;
use crate::graph::{Graph, VertexSet};

/// Environment variable overriding the default budgets, as
/// `chromatic=24,rank_width=11,star_cutset=10,holes=16,timeout_ms=60000`.
pub const BUDGET_ENV: &str = "EHF_ORACLE_BUDGET";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{oracle} oracle refuses n = {n} (budget {limit})")]
    OverBudget {
        oracle: &'static str,
        n: usize,
        limit: usize,
    },
    #[error("{0} oracle ran out of time")]
    Timeout(&'static str),
    #[error("bad budget specification: {0}")]
    BadBudget(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleBudget {
    pub chromatic: usize,
    pub rank_width: usize,
    pub star_cutset: usize,
    pub holes: usize,
    pub timeout: Option<Duration>,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            chromatic: 24,
            rank_width: 11,
            star_cutset: 10,
            holes: 16,
            timeout: None,
        }
    }
}

impl OracleBudget {
    /// Defaults with any overrides from [`BUDGET_ENV`].
    pub fn from_env() -> Result<Self, OracleError> {
        match std::env::var(BUDGET_ENV) {
            Ok(text) => Self::parse(&text),
            Err(_) => Ok(Self::default()),
        }
    }

    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let mut b = Self::default();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let bad = || OracleError::BadBudget(part.to_string());
            let (key, value) = part.split_once('=').ok_or_else(bad)?;
            let value: u64 = value.trim().parse().map_err(|_| bad())?;
            match key.trim() {
                "chromatic" => b.chromatic = value as usize,
                "rank_width" => b.rank_width = value as usize,
                "star_cutset" => b.star_cutset = value as usize,
                "holes" => b.holes = value as usize,
                "timeout_ms" => b.timeout = Some(Duration::from_millis(value)),
                _ => return Err(bad()),
            }
        }
        Ok(b)
    }

    fn check(&self, oracle: &'static str, n: usize, limit: usize) -> Result<(), OracleError> {
        if n > limit {
            Err(OracleError::OverBudget { oracle, n, limit })
        } else {
            Ok(())
        }
    }

    fn deadline(&self) -> Option<Instant> {
        self.timeout.map(|t| Instant::now() + t)
    }
}

/// Exact chromatic number by DSATUR branch and bound, starting from the
/// clique number as lower bound.
pub fn brute_chromatic(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    let n = g.n();
    budget.check("chromatic", n, budget.chromatic)?;
    // color sets are u64 masks
    budget.check("chromatic", n, 63)?;
    if n == 0 {
        return Ok(0);
    }
    let lower = clique_number(g);
    let mut search = Dsatur {
        g,
        colors: vec![0; n],
        best: n + 1,
        lower,
        deadline: budget.deadline(),
        timed_out: false,
        steps: 0,
    };
    search.run(0, 0);
    if search.timed_out {
        return Err(OracleError::Timeout("chromatic"));
    }
    Ok(search.best)
}

struct Dsatur<'a> {
    g: &'a Graph,
    colors: Vec<usize>,
    best: usize,
    lower: usize,
    deadline: Option<Instant>,
    timed_out: bool,
    steps: u64,
}

impl Dsatur<'_> {
    fn run(&mut self, colored: usize, used: usize) {
        if self.timed_out || self.best <= self.lower {
            return;
        }
        self.steps += 1;
        if self.steps % 4096 == 1 && self.deadline.is_some_and(|d| Instant::now() > d) {
            self.timed_out = true;
            return;
        }
        let n = self.g.n();
        if colored == n {
            self.best = self.best.min(used);
            return;
        }
        // uncolored vertex of maximum saturation, then degree
        let mut pick = usize::MAX;
        let mut key = (0usize, 0usize);
        for v in 0..n {
            if self.colors[v] != 0 {
                continue;
            }
            let mut seen = 0u64;
            let mut deg = 0;
            for w in self.g.neighbors(v).iter() {
                match self.colors[w] {
                    0 => deg += 1,
                    c => seen |= 1 << (c - 1),
                }
            }
            let k = (seen.count_ones() as usize, deg);
            if pick == usize::MAX || k > key {
                pick = v;
                key = k;
            }
        }
        let v = pick;
        let forbidden: u64 = self
            .g
            .neighbors(v)
            .iter()
            .filter(|&w| self.colors[w] != 0)
            .fold(0, |m, w| m | 1 << (self.colors[w] - 1));
        for c in 1..=(used + 1).min(self.best - 1) {
            if forbidden & (1 << (c - 1)) != 0 {
                continue;
            }
            self.colors[v] = c;
            self.run(colored + 1, used.max(c));
            self.colors[v] = 0;
            if self.timed_out || self.best <= self.lower {
                return;
            }
        }
    }
}

/// Exact rank-width by dynamic programming over vertex subsets: a subset
/// is worth the best rooted binary tree on it, counting the cut-rank of
/// every subtree.
pub fn brute_rank_width(g: &Graph, budget: &OracleBudget) -> Result<usize, OracleError> {
    let n = g.n();
    budget.check("rank-width", n, budget.rank_width)?;
    if n <= 1 {
        return Ok(0);
    }
    if n > 20 {
        return Err(OracleError::OverBudget {
            oracle: "rank-width",
            n,
            limit: 20,
        });
    }
    let deadline = budget.deadline();
    let full: u32 = (1u32 << n) - 1;
    let mut cut: HashMap<u32, usize> = HashMap::new();
    let mut cut_rank = |mask: u32| -> usize {
        // a cut and its complement have the same rank
        let key = mask.min(full ^ mask);
        *cut.entry(key).or_insert_with(|| {
            cut_rank_unchecked(
                g,
                &VertexSet::from_iter(n, (0..n).filter(|&i| key >> i & 1 == 1)),
            )
        })
    };
    let mut best = vec![usize::MAX; 1 << n];
    for mask in 1..=full {
        if mask & 0xfff == 0 && deadline.is_some_and(|d| Instant::now() > d) {
            return Err(OracleError::Timeout("rank-width"));
        }
        let own = cut_rank(mask);
        if mask.count_ones() == 1 {
            best[mask as usize] = own;
            continue;
        }
        if mask == full {
            continue;
        }
        let low = mask & mask.wrapping_neg();
        let mut inner = usize::MAX;
        // sub ranges over the parts holding the lowest vertex, so each
        // unordered split is seen once
        let mut sub = (mask - 1) & mask;
        while sub > 0 {
            if sub & low != 0 {
                let w = best[sub as usize].max(best[(mask ^ sub) as usize]);
                inner = inner.min(w);
            }
            sub = (sub - 1) & mask;
        }
        best[mask as usize] = own.max(inner);
    }
    // the root edge splits V into two rooted halves
    let low = 1u32;
    let mut answer = usize::MAX;
    let mut sub = (full - 1) & full;
    while sub > 0 {
        if sub & low != 0 {
            answer = answer.min(best[sub as usize].max(best[(full ^ sub) as usize]));
        }
        sub = (sub - 1) & full;
    }
    Ok(answer)
}

/// Some star cutset, found by trying every center and every subset of its
/// neighborhood.
pub fn brute_star_cutset(
    g: &Graph,
    budget: &OracleBudget,
) -> Result<Option<StarCutsetWitness>, OracleError> {
    let n = g.n();
    budget.check("star cutset", n, budget.star_cutset)?;
    for x in 0..n {
        let nb = g.neighbors(x).to_vec();
        for mask in 0u64..(1 << nb.len()) {
            let mut set = VertexSet::singleton(n, x);
            for (i, &w) in nb.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    set.insert(w);
                }
            }
            if g.components(&set).len() >= 2 {
                return Ok(Some(StarCutsetWitness { center: x, set }));
            }
        }
    }
    Ok(None)
}

/// Lengths of all holes (chordless cycles of length at least 4), by
/// testing every vertex subset; sorted, with multiplicity per vertex set.
pub fn brute_hole_lengths(g: &Graph, budget: &OracleBudget) -> Result<Vec<usize>, OracleError> {
    let n = g.n();
    budget.check("holes", n, budget.holes)?;
    let mut out = Vec::new();
    for mask in 1u64..(1u64 << n) {
        let size = mask.count_ones() as usize;
        if size < 4 {
            continue;
        }
        let set = VertexSet::from_iter(n, (0..n).filter(|&i| mask >> i & 1 == 1));
        if set
            .iter()
            .all(|v| g.neighbors(v).intersection_len(&set) == 2)
            && g.is_connected_within(&set)
        {
            out.push(size);
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn brute_has_even_hole(g: &Graph, budget: &OracleBudget) -> Result<bool, OracleError> {
    Ok(brute_hole_lengths(g, budget)?.iter().any(|l| l % 2 == 0))
}

/// An isomorphism `g → h` as a vertex map, by backtracking with degree
/// pruning.
pub fn find_isomorphism(g: &Graph, h: &Graph) -> Option<Vec<usize>> {
    let n = g.n();
    if n != h.n() || g.edge_count() != h.edge_count() {
        return None;
    }
    let mut dg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut dh: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    let (sg, sh) = (
        {
            dg.sort_unstable();
            dg.clone()
        },
        {
            dh.sort_unstable();
            dh.clone()
        },
    );
    if sg != sh {
        return None;
    }
    // map high-degree vertices first, each next to already mapped ones if possible
    let mut order: Vec<usize> = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    while order.len() < n {
        let next = (0..n)
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                (
                    order.iter().filter(|&&u| g.has_edge(u, v)).count(),
                    g.degree(v),
                    std::cmp::Reverse(v),
                )
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
    }
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn extend(
        g: &Graph,
        h: &Graph,
        order: &[usize],
        i: usize,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if i == order.len() {
            return true;
        }
        let v = order[i];
        for w in 0..h.n() {
            if used[w] || h.degree(w) != g.degree(v) {
                continue;
            }
            if order[..i]
                .iter()
                .any(|&u| g.has_edge(u, v) != h.has_edge(map[u], w))
            {
                continue;
            }
            map[v] = w;
            used[w] = true;
            if extend(g, h, order, i + 1, map, used) {
                return true;
            }
            used[w] = false;
        }
        map[v] = usize::MAX;
        false
    }
    extend(g, h, &order, 0, &mut map, &mut used).then_some(map)
}

pub fn are_isomorphic(g: &Graph, h: &Graph) -> bool {
    find_isomorphism(g, h).is_some()
}
