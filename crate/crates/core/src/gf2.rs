//! Dense GF(2) matrices and the cut-rank function.

use crate::graph::{Graph, GraphError, VertexSet};

const WORD: usize = 64;

/// Row-major matrix over GF(2); each row is a packed bit vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Vec<u64>>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Gf2Matrix {
            rows,
            cols,
            data: vec![vec![0; cols.div_ceil(WORD)]; rows],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of `0`/`1` characters, e.g. `["110", "011"]`.
    /// Panics on ragged input or other characters.
    pub fn from_bit_rows(rows: &[&str]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged row {i}");
            for (j, c) in r.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => m.set(i, j, true),
                    _ => panic!("bad matrix character {c:?}"),
                }
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i][j / WORD] >> (j % WORD) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, bit: bool) {
        assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i][j / WORD];
        if bit {
            *w |= 1 << (j % WORD);
        } else {
            *w &= !(1 << (j % WORD));
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                if self.get(i, j) {
                    t.set(j, i, true);
                }
            }
        }
        t
    }

    /// Rank over GF(2) by word-parallel Gaussian elimination.
    pub fn rank(&self) -> usize {
        rank_of_rows(self.data.clone())
    }

    /// Submatrix on the given row and column indices, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut m = Self::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                if self.get(i, j) {
                    m.set(a, b, true);
                }
            }
        }
        m
    }

    /// Adjacency matrix of `g` over GF(2).
    pub fn adjacency(g: &Graph) -> Self {
        let n = g.n();
        let mut m = Self::zeros(n, n);
        for (u, v) in g.edges() {
            m.set(u, v, true);
            m.set(v, u, true);
        }
        m
    }
}

/// Rank of a list of packed bit rows, consuming them.
fn rank_of_rows(mut rows: Vec<Vec<u64>>) -> usize {
    let mut rank = 0;
    let words = rows.first().map_or(0, Vec::len);
    for w in 0..words {
        loop {
            // pivot columns are distinct: each pivot bit is cleared from every row below
            let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] != 0) else {
                break;
            };
            rows.swap(rank, p);
            let bit = rows[rank][w] & rows[rank][w].wrapping_neg();
            let (head, tail) = rows.split_at_mut(rank + 1);
            let pivot = &head[rank];
            for row in tail.iter_mut() {
                if row[w] & bit != 0 {
                    for (a, b) in row[w..].iter_mut().zip(&pivot[w..]) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
    }
    rank
}

/// Rank over GF(2) of the matrix.
pub fn gf2_rank(m: &Gf2Matrix) -> usize {
    m.rank()
}

/// `rk(M[a, V \ a])` for the adjacency matrix `M` of `g`.
pub fn cut_rank(g: &Graph, a: &VertexSet) -> Result<usize, GraphError> {
    g.check_set(a)?;
    Ok(cut_rank_unchecked(g, a))
}

/// [`cut_rank`] without the range check.
pub fn cut_rank_unchecked(g: &Graph, a: &VertexSet) -> usize {
    let rest = a.complement(g.n());
    let (small, other) = if a.len() <= rest.len() {
        (a, &rest)
    } else {
        (&rest, a)
    };
    let rows: Vec<Vec<u64>> = small
        .iter()
        .map(|v| row_words(&(g.neighbors(v) & other)))
        .collect();
    rank_of_rows(rows)
}

fn row_words(s: &VertexSet) -> Vec<u64> {
    let cap = s.capacity();
    let mut out = vec![0u64; cap / WORD];
    for v in s.iter() {
        out[v / WORD] |= 1 << (v % WORD);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::{complete, cycle};

    /// Rank by brute force: the number of distinct XOR-combinations of the
    /// rows is `2^rank`.
    fn rank_by_span(m: &Gf2Matrix) -> usize {
        let r = m.rows();
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..(1 << r) {
            let mut acc = vec![false; m.cols()];
            for i in 0..r {
                if mask >> i & 1 == 1 {
                    for (j, bit) in acc.iter_mut().enumerate() {
                        *bit ^= m.get(i, j);
                    }
                }
            }
            span.insert(acc);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn identity_has_full_rank() {
        assert_eq!(gf2_rank(&Gf2Matrix::identity(3)), 3);
    }

    #[test]
    fn repeated_rows() {
        assert_eq!(gf2_rank(&Gf2Matrix::from_bit_rows(&["111", "111"])), 1);
    }

    #[test]
    fn dependent_third_row() {
        let m = Gf2Matrix::from_bit_rows(&["110", "011", "101"]);
        assert_eq!(rank_by_span(&m), 2);
        assert_eq!(gf2_rank(&m), 2);
    }

    #[test]
    fn empty_matrix() {
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(0, 0)), 0);
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(3, 0)), 0);
        assert_eq!(gf2_rank(&Gf2Matrix::zeros(0, 5)), 0);
    }

    #[test]
    fn wide_matrix_crosses_words() {
        let mut m = Gf2Matrix::zeros(3, 150);
        m.set(0, 3, true);
        m.set(1, 70, true);
        m.set(2, 140, true);
        m.set(2, 3, true);
        assert_eq!(m.rank(), 3);
        assert_eq!(m.transpose().rank(), 3);
    }

    #[test]
    fn clique_cut_rank_is_one() {
        let g = complete(4);
        for a in 0..4 {
            for b in a + 1..4 {
                assert_eq!(cut_rank(&g, &VertexSet::from_iter(4, [a, b])).unwrap(), 1);
            }
        }
    }

    #[test]
    fn trivial_cuts() {
        let g = cycle(5);
        assert_eq!(cut_rank(&g, &g.empty_set()).unwrap(), 0);
        assert_eq!(cut_rank(&g, &g.vertices()).unwrap(), 0);
    }

    #[test]
    fn c5_adjacent_pair() {
        let g = cycle(5);
        let a = VertexSet::from_iter(5, [0, 1]);
        // rows 0 -> {2,3,4}: 001 (adj 4); 1 -> 100 (adj 2)
        let m = Gf2Matrix::adjacency(&g).submatrix(&[0, 1], &[2, 3, 4]);
        assert_eq!(rank_by_span(&m), 2);
        assert_eq!(cut_rank(&g, &a).unwrap(), 2);
    }

    #[test]
    fn out_of_range() {
        let g = cycle(5);
        let a = VertexSet::from_iter(8, [6]);
        assert!(cut_rank(&g, &a).is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn arb_matrix() -> impl Strategy<Value = Gf2Matrix> {
            (0usize..7, 0usize..9).prop_flat_map(|(r, c)| {
                proptest::collection::vec(proptest::collection::vec(any::<bool>(), c), r).prop_map(
                    move |bits| {
                        let mut m = Gf2Matrix::zeros(r, c);
                        for (i, row) in bits.iter().enumerate() {
                            for (j, &b) in row.iter().enumerate() {
                                m.set(i, j, b);
                            }
                        }
                        m
                    },
                )
            })
        }

        proptest! {
            #[test]
            fn rank_matches_span(m in arb_matrix()) {
                prop_assert_eq!(m.rank(), rank_by_span(&m));
                prop_assert_eq!(m.rank(), m.transpose().rank());
                prop_assert!(m.rank() <= m.rows().min(m.cols()));
            }

            #[test]
            fn appending_xor_of_rows_keeps_rank(m in arb_matrix(), mask in any::<u8>()) {
                prop_assume!(m.rows() > 0);
                let mut ext = Gf2Matrix::zeros(m.rows() + 1, m.cols());
                for i in 0..m.rows() {
                    for j in 0..m.cols() {
                        ext.set(i, j, m.get(i, j));
                    }
                }
                for j in 0..m.cols() {
                    let bit = (0..m.rows()).filter(|&i| mask >> (i % 8) & 1 == 1)
                        .fold(false, |acc, i| acc ^ m.get(i, j));
                    ext.set(m.rows(), j, bit);
                }
                prop_assert_eq!(ext.rank(), m.rank());
            }
        }
    }
}
