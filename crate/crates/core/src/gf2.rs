//! Dense matrices over GF(2) stored as row bitsets.

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        Gf2Matrix { rows, cols, words, data: vec![0; rows * words] }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.data[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = &mut self.data[r * self.words + c / 64];
        if v {
            *w |= 1 << (c % 64);
        } else {
            *w &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.data[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    pub fn transpose(&self) -> Self {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) {
                    t.set(c, r, true);
                }
            }
        }
        t
    }

    pub fn mul(&self, other: &Gf2Matrix) -> Gf2Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                if self.get(r, k) {
                    for w in 0..other.words {
                        out.data[r * out.words + w] ^= other.data[k * other.words + w];
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn row(&self, r: usize) -> &[u64] {
        &self.data[r * self.words..(r + 1) * self.words]
    }

    /// Row echelon basis of the row space, as bit rows with pivot columns.
    fn echelon(&self) -> Vec<(usize, Vec<u64>)> {
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::new();
        for r in 0..self.rows {
            let mut v = self.row(r).to_vec();
            reduce(&basis, &mut v);
            if let Some(p) = lowest_bit(&v) {
                basis.push((p, v));
            }
        }
        basis
    }

    pub fn rank(&self) -> usize {
        self.echelon().len()
    }

    /// Whether the bit vector `v` (length `cols`) lies in the row space.
    pub fn row_space_contains(&self, v: &[bool]) -> bool {
        let basis = self.echelon();
        let mut w = vec![0u64; self.words];
        for (i, &b) in v.iter().enumerate() {
            if b {
                w[i / 64] |= 1 << (i % 64);
            }
        }
        reduce(&basis, &mut w);
        w.iter().all(|&x| x == 0)
    }
}

fn lowest_bit(v: &[u64]) -> Option<usize> {
    v.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
}

fn reduce(basis: &[(usize, Vec<u64>)], v: &mut [u64]) {
    // Repeat until no pivot of the basis is set; pivots are distinct so this terminates.
    loop {
        let mut changed = false;
        for (p, b) in basis {
            if v[p / 64] >> (p % 64) & 1 == 1 {
                for (x, y) in v.iter_mut().zip(b) {
                    *x ^= y;
                }
                changed = true;
            }
        }
        if !changed {
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_rank(m: &Gf2Matrix) -> usize {
        // Size of the row space, by enumerating all subsets of rows.
        let mut span = std::collections::HashSet::new();
        for mask in 0u32..1 << m.rows() {
            let v: Vec<bool> = (0..m.cols()).map(|c| (0..m.rows()).filter(|&r| mask >> r & 1 == 1 && m.get(r, c)).count() % 2 == 1).collect();
            span.insert(v);
        }
        span.len().trailing_zeros() as usize
    }

    #[test]
    fn rank_matches_subset_enumeration() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..40 {
            let (r, c) = (rng.gen_range(1..7), rng.gen_range(1..70));
            let mut m = Gf2Matrix::zeros(r, c);
            for i in 0..r {
                for j in 0..c {
                    m.set(i, j, rng.gen_bool(0.3));
                }
            }
            assert_eq!(m.rank(), brute_rank(&m));
            assert_eq!(m.transpose().rank(), m.rank());
        }
    }

    #[test]
    fn row_space_membership() {
        let mut m = Gf2Matrix::zeros(2, 3);
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 1, true);
        assert!(m.row_space_contains(&[true, false, false]));
        assert!(!m.row_space_contains(&[false, false, true]));
    }
}
