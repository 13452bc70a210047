//! Dense boolean matrices over the (or, and) semiring, one bitset per row.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoolMatrix {
    n: usize,
    words: usize,
    rows: Vec<Vec<u64>>,
}

impl BoolMatrix {
    pub fn zeros(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        BoolMatrix { n, words, rows: vec![vec![0; words]; n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.set(i, i);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.rows[i][j / 64] |= 1 << (j % 64);
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i][j / 64] >> (j % 64) & 1 == 1
    }

    fn or_row_into(&mut self, dst: usize, src: &[u64]) {
        for (d, s) in self.rows[dst].iter_mut().zip(src) {
            *d |= *s;
        }
    }

    pub fn mul(&self, other: &BoolMatrix) -> BoolMatrix {
        assert_eq!(self.n, other.n);
        let mut out = BoolMatrix::zeros(self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                if self.get(i, k) {
                    out.or_row_into(i, &other.rows[k]);
                }
            }
        }
        out
    }

    /// Reflexive-transitive closure (Warshall).
    pub fn closure(&self) -> BoolMatrix {
        let mut m = self.clone();
        for i in 0..self.n {
            m.set(i, i);
        }
        for k in 0..self.n {
            let row_k = m.rows[k].clone();
            for i in 0..self.n {
                if m.get(i, k) {
                    m.or_row_into(i, &row_k);
                }
            }
        }
        m
    }

    pub fn is_full(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j)))
    }

    /// Positions holding `false`, row-major.
    pub fn zeros_list(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in 0..self.n {
                if !self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}
