//! Exact linear algebra: Smith normal form over the integers (arbitrary
//! precision, generic over the integer type) and rank computations over
//! GF(2).

use num_integer::Integer;
use num_traits::Signed;
use serde::{Deserialize, Serialize};
use std::fmt;

/// Dense matrix of exact integers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix<T = crate::Int> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Integer + Signed + Clone> IntMatrix<T> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c));
        IntMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_to(&mut self, r: usize, c: usize, v: &T) {
        let cur = self.get(r, c).clone();
        self.set(r, c, cur + v.clone());
    }

    /// Matrix product, exact.
    pub fn mul(&self, other: &IntMatrix<T>) -> IntMatrix<T> {
        assert_eq!(self.cols, other.rows);
        let mut out = IntMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let add = a.clone() * other.get(k, j).clone();
                    out.add_to(i, j, &add);
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }
}

/// Invariant factors d₁ | d₂ | … (positive, including any 1s) and the rank
/// of the matrix, via row and column reduction with exact arithmetic.
pub fn smith_normal_form<T: Integer + Signed + Clone>(m: &IntMatrix<T>) -> (Vec<T>, usize) {
    let mut a = m.clone();
    let (rows, cols) = (a.rows, a.cols);
    let mut factors = Vec::new();
    let mut k = 0;
    while k < rows.min(cols) {
        // pivot: nonzero entry of least absolute value in the submatrix
        let mut pivot: Option<(usize, usize)> = None;
        for i in k..rows {
            for j in k..cols {
                if !a.get(i, j).is_zero()
                    && pivot.is_none_or(|(pi, pj)| a.get(i, j).abs() < a.get(pi, pj).abs())
                {
                    pivot = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = pivot else { break };
        swap_rows(&mut a, k, pi);
        swap_cols(&mut a, k, pj);

        loop {
            // clear column k by row operations
            let mut dirty = false;
            for i in k + 1..rows {
                if !a.get(i, k).is_zero() {
                    let q = a.get(i, k).div_floor(a.get(k, k));
                    row_sub_mul(&mut a, i, k, &q);
                    if !a.get(i, k).is_zero() {
                        // remainder is smaller than the pivot; swap it up
                        swap_rows(&mut a, k, i);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // clear row k by column operations
            for j in k + 1..cols {
                if !a.get(k, j).is_zero() {
                    let q = a.get(k, j).div_floor(a.get(k, k));
                    col_sub_mul(&mut a, j, k, &q);
                    if !a.get(k, j).is_zero() {
                        swap_cols(&mut a, k, j);
                        dirty = true;
                    }
                }
            }
            if dirty {
                continue;
            }
            // pivot must divide every remaining entry
            let mut fixed = false;
            'scan: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !a.get(i, j).mod_floor(a.get(k, k)).is_zero() {
                        // fold row i into row k and restart the reduction
                        row_add(&mut a, k, i);
                        fixed = true;
                        break 'scan;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        factors.push(a.get(k, k).abs());
        k += 1;
    }
    let rank = factors.len();
    (factors, rank)
}

fn swap_rows<T: Clone>(a: &mut IntMatrix<T>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for c in 0..a.cols {
        a.data.swap(i * a.cols + c, j * a.cols + c);
    }
}

fn swap_cols<T: Clone>(a: &mut IntMatrix<T>, i: usize, j: usize) {
    if i == j {
        return;
    }
    for r in 0..a.rows {
        a.data.swap(r * a.cols + i, r * a.cols + j);
    }
}

fn row_sub_mul<T: Integer + Signed + Clone>(a: &mut IntMatrix<T>, i: usize, k: usize, q: &T) {
    for c in 0..a.cols {
        let v = a.get(i, c).clone() - q.clone() * a.get(k, c).clone();
        a.set(i, c, v);
    }
}

fn col_sub_mul<T: Integer + Signed + Clone>(a: &mut IntMatrix<T>, j: usize, k: usize, q: &T) {
    for r in 0..a.rows {
        let v = a.get(r, j).clone() - q.clone() * a.get(r, k).clone();
        a.set(r, j, v);
    }
}

fn row_add<T: Integer + Signed + Clone>(a: &mut IntMatrix<T>, k: usize, i: usize) {
    for c in 0..a.cols {
        let v = a.get(k, c).clone() + a.get(i, c).clone();
        a.set(k, c, v);
    }
}

/// A finitely generated abelian group in canonical form: invariant factors
/// d₁ | d₂ | … (each ≥ 2) plus a free rank.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AbelianGroupSpec {
    pub torsion: Vec<u64>,
    #[serde(rename = "freeRank")]
    pub free_rank: usize,
}

impl AbelianGroupSpec {
    pub fn trivial() -> Self {
        AbelianGroupSpec {
            torsion: vec![],
            free_rank: 0,
        }
    }

    pub fn free(rank: usize) -> Self {
        AbelianGroupSpec {
            torsion: vec![],
            free_rank: rank,
        }
    }

    pub fn cyclic(n: u64) -> Self {
        if n <= 1 {
            Self::trivial()
        } else {
            AbelianGroupSpec {
                torsion: vec![n],
                free_rank: 0,
            }
        }
    }

    pub fn new(mut torsion: Vec<u64>, free_rank: usize) -> Self {
        torsion.retain(|&d| d > 1);
        debug_assert!(torsion.windows(2).all(|w| w[1] % w[0] == 0));
        AbelianGroupSpec { torsion, free_rank }
    }

    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }

    /// Dimension of G ⊗ Z₂: even invariant factors plus the free rank.
    pub fn mod2_dimension(&self) -> usize {
        self.torsion.iter().filter(|&&d| d % 2 == 0).count() + self.free_rank
    }
}

impl fmt::Display for AbelianGroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.torsion.iter().map(|d| format!("Z{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".into()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join("+"))
    }
}

/// Dense matrix over GF(2), rows packed into 64-bit words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    bits: Vec<u64>,
}

impl BitMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            words,
            bits: vec![0; rows * words],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.bits[r * self.words + c / 64] >> (c % 64) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, v: bool) {
        let w = r * self.words + c / 64;
        if v {
            self.bits[w] |= 1 << (c % 64);
        } else {
            self.bits[w] &= !(1 << (c % 64));
        }
    }

    pub fn flip(&mut self, r: usize, c: usize) {
        self.bits[r * self.words + c / 64] ^= 1 << (c % 64);
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        for w in 0..self.words {
            let v = self.bits[src * self.words + w];
            self.bits[dst * self.words + w] ^= v;
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().reduce().1.len()
    }

    /// In-place row reduction to reduced echelon form with ascending pivot
    /// columns; returns the pivot columns.
    pub fn reduce(mut self) -> (BitMatrix, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..self.cols {
            let Some(src) = (row..self.rows).find(|&r| self.get(r, col)) else {
                continue;
            };
            if src != row {
                for w in 0..self.words {
                    self.bits.swap(row * self.words + w, src * self.words + w);
                }
            }
            for r in 0..self.rows {
                if r != row && self.get(r, col) {
                    self.xor_rows(r, row);
                }
            }
            pivots.push(col);
            row += 1;
            if row == self.rows {
                break;
            }
        }
        (self, pivots)
    }

    /// Basis of the right kernel, in deterministic order: one vector per
    /// free column, ascending.
    pub fn nullspace(&self) -> Vec<Vec<bool>> {
        let (rref, pivots) = self.clone().reduce();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if is_pivot[free] {
                continue;
            }
            let mut v = vec![false; self.cols];
            v[free] = true;
            for (r, &p) in pivots.iter().enumerate() {
                if rref.get(r, free) {
                    v[p] = true;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// A growing reduced GF(2) basis for quotient computations.
#[derive(Clone, Debug, Default)]
pub struct Gf2Basis {
    rows: Vec<Vec<bool>>,
    pivots: Vec<usize>,
}

impl Gf2Basis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Reduce `v` against the basis.
    pub fn reduce(&self, mut v: Vec<bool>) -> Vec<bool> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p] {
                for (x, y) in v.iter_mut().zip(row) {
                    *x ^= *y;
                }
            }
        }
        v
    }

    /// Reduce and insert if independent; returns true when inserted.
    pub fn insert(&mut self, v: Vec<bool>) -> bool {
        let v = self.reduce(v);
        let Some(p) = v.iter().position(|&b| b) else {
            return false;
        };
        // keep earlier rows reduced against the new pivot
        for row in &mut self.rows {
            if row[p] {
                for (x, y) in row.iter_mut().zip(&v) {
                    *x ^= *y;
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn big(rows: Vec<Vec<i64>>) -> IntMatrix<BigInt> {
        IntMatrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(BigInt::from).collect())
                .collect(),
        )
    }

    #[test]
    fn snf_identity() {
        let m = big(vec![vec![1, 0], vec![0, 1]]);
        let (factors, rank) = smith_normal_form(&m);
        assert_eq!(factors, vec![BigInt::from(1), BigInt::from(1)]);
        assert_eq!(rank, 2);
    }

    #[test]
    fn snf_zero() {
        let m = big(vec![vec![0, 0], vec![0, 0]]);
        let (factors, rank) = smith_normal_form(&m);
        assert!(factors.is_empty());
        assert_eq!(rank, 0);
    }

    #[test]
    fn snf_two_four() {
        // elementary reduction by hand gives diag(2, 4)
        let m = big(vec![vec![2, 4], vec![6, 8]]);
        let (factors, rank) = smith_normal_form(&m);
        assert_eq!(factors, vec![BigInt::from(2), BigInt::from(4)]);
        assert_eq!(rank, 2);
    }

    #[test]
    fn snf_known_4x4() {
        let m = big(vec![
            vec![-6, 111, -36, 6],
            vec![5, -672, 210, 74],
            vec![0, -255, 81, 24],
            vec![-7, 255, -81, -10],
        ]);
        let (factors, rank) = smith_normal_form(&m);
        assert_eq!(
            factors,
            vec![BigInt::from(1), BigInt::from(3), BigInt::from(21)]
        );
        assert_eq!(rank, 3);
    }

    // Independent oracle: the product of the first j invariant factors
    // equals the gcd of all j×j minors.
    fn minor_gcd_oracle(m: &IntMatrix<BigInt>, j: usize) -> BigInt {
        use num_integer::Integer as _;
        fn minor(m: &IntMatrix<BigInt>, rows: &[usize], cols: &[usize]) -> BigInt {
            if rows.len() == 1 {
                return m.get(rows[0], cols[0]).clone();
            }
            let mut acc = BigInt::from(0);
            let mut sign = BigInt::from(1);
            for (k, &c) in cols.iter().enumerate() {
                let sub_rows = &rows[1..];
                let sub_cols: Vec<usize> = cols
                    .iter()
                    .copied()
                    .enumerate()
                    .filter(|&(i, _)| i != k)
                    .map(|(_, c)| c)
                    .collect();
            acc += sign.clone() * m.get(rows[0], c).clone() * minor(m, sub_rows, &sub_cols);
                sign = -sign;
            }
            acc
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in 0..n {
                for mut rest in subsets(n, k - 1) {
                    if rest.iter().all(|&x| x > first) {
                        let mut s = vec![first];
                        s.append(&mut rest);
                        out.push(s);
                    }
                }
            }
            out
        }
        let mut g = BigInt::from(0);
        for rows in subsets(m.rows(), j) {
            for cols in subsets(m.cols(), j) {
                g = g.gcd(&minor(m, &rows, &cols));
            }
        }
        g
    }

    #[test]
    fn snf_matches_minor_gcds_on_random_3x3() {
        // deterministic pseudo-random small matrices
        let mut seed = 0x9e3779b97f4a7c15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed % 13) as i64 - 6
        };
        for _ in 0..40 {
            let m = big(vec![
                vec![next(), next(), next()],
                vec![next(), next(), next()],
                vec![next(), next(), next()],
            ]);
            let (factors, rank) = smith_normal_form(&m);
            assert!(factors.windows(2).all(|w| (&w[1] % &w[0]).is_zero()));
            let mut prod = BigInt::from(1);
            for (j, d) in factors.iter().enumerate() {
                prod *= d;
                assert_eq!(prod, minor_gcd_oracle(&m, j + 1), "j={} m={:?}", j + 1, m);
            }
            for j in rank + 1..=3 {
                assert!(minor_gcd_oracle(&m, j).is_zero());
            }
        }
    }

    #[test]
    fn group_display_and_mod2() {
        assert_eq!(AbelianGroupSpec::trivial().to_string(), "0");
        assert_eq!(AbelianGroupSpec::cyclic(4).to_string(), "Z4");
        let g = AbelianGroupSpec::new(vec![2, 2], 0);
        assert_eq!(g.to_string(), "Z2+Z2");
        assert_eq!(g.mod2_dimension(), 2);
        assert_eq!(AbelianGroupSpec::free(1).to_string(), "Z");
        assert_eq!(AbelianGroupSpec::new(vec![3], 2).to_string(), "Z3+Z^2");
        assert_eq!(AbelianGroupSpec::cyclic(10).mod2_dimension(), 1);
        // factors of 1 are dropped
        assert_eq!(AbelianGroupSpec::new(vec![1, 1, 4], 0), AbelianGroupSpec::cyclic(4));
    }

    #[test]
    fn bitmatrix_rank_and_nullspace() {
        let mut m = BitMatrix::zero(3, 4);
        // rows: 1100, 0110, 1010 (third = first + second)
        m.set(0, 0, true);
        m.set(0, 1, true);
        m.set(1, 1, true);
        m.set(1, 2, true);
        m.set(2, 0, true);
        m.set(2, 2, true);
        assert_eq!(m.rank(), 2);
        let basis = m.nullspace();
        assert_eq!(basis.len(), 2);
        for v in &basis {
            for r in 0..3 {
                let dot = (0..4).filter(|&c| m.get(r, c) && v[c]).count();
                assert_eq!(dot % 2, 0);
            }
        }
    }

    #[test]
    fn gf2_basis_quotient() {
        let mut b = Gf2Basis::new();
        assert!(b.insert(vec![true, true, false]));
        assert!(b.insert(vec![false, true, true]));
        assert!(!b.insert(vec![true, false, true])); // sum of the two
        assert_eq!(b.len(), 2);
        let r = b.reduce(vec![true, true, true]);
        assert!(r.iter().any(|&x| x));
    }
}
