//! Dense integer matrices with Smith and Hermite normal forms.

use std::fmt;

use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{CycMatrix, CycNum, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<Vec<i64>>", try_from = "Vec<Vec<i64>>")]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl From<IntMatrix> for Vec<Vec<i64>> {
    fn from(m: IntMatrix) -> Self {
        m.to_rows()
    }
}

impl TryFrom<Vec<Vec<i64>>> for IntMatrix {
    type Error = String;

    fn try_from(rows: Vec<Vec<i64>>) -> Result<Self, String> {
        let c = rows.first().map_or(0, |r| r.len());
        if rows.iter().any(|r| r.len() != c) {
            return Err("ragged integer matrix".into());
        }
        Ok(IntMatrix::from_rows(&rows))
    }
}

/// `U A V = diag(d)` with `U`, `V` unimodular and `d₁ | d₂ | ...`, all `dᵢ ≥ 0`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub v: IntMatrix,
    pub diag: Vec<i64>,
}

fn narrow(x: i128) -> i64 {
    i64::try_from(x).expect("integer matrix entry overflow")
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn scalar(n: usize, c: i64) -> Self {
        let mut m = Self::identity(n);
        m.data.iter_mut().for_each(|x| *x *= c);
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_columns(cols: &[Vec<i64>]) -> Self {
        Self::from_rows(cols).transpose()
    }

    /// Block diagonal matrix.
    pub fn block_diag(blocks: &[IntMatrix]) -> Self {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// `A ⊗ B` (Kronecker product).
    pub fn kron(&self, other: &IntMatrix) -> Self {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.set(i * other.rows + k, j * other.cols + l, self.get(i, j) * other.get(k, l));
                    }
                }
            }
        }
        out
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: i64) {
        self.data[i * self.cols + j] = x;
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        self.data.chunks(self.cols.max(1)).take(self.rows).map(|r| r.to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<i64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        let mut out = Self::zeros(rows.len(), cols.len());
        for (a, i) in rows.clone().enumerate() {
            for (b, j) in cols.clone().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j));
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let s: i128 = (0..self.cols).map(|k| self.get(i, k) as i128 * other.get(k, j) as i128).sum();
                out.set(i, j, narrow(s));
            }
        }
        out
    }

    pub fn add(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "dimension mismatch");
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &IntMatrix) -> IntMatrix {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> IntMatrix {
        IntMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|a| -a).collect() }
    }

    pub fn mul_vec_rational(&self, v: &[Rational]) -> Vec<Rational> {
        (0..self.rows)
            .map(|i| (0..self.cols).fold(Rational::zero(), |acc, j| acc + &v[j] * Rational::from_integer(self.get(i, j).into())))
            .collect()
    }

    pub fn pow(&self, e: u64) -> IntMatrix {
        let mut out = Self::identity(self.rows);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.rows)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&x| x == 0)
    }

    pub fn trace(&self) -> i64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> i64 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut a: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if a[k][k] == 0 {
                match (k + 1..n).find(|&i| a[i][k] != 0) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
                }
            }
            prev = a[k][k];
        }
        narrow(if n == 0 { 1 } else { sign * a[n - 1][n - 1] })
    }

    pub fn is_unimodular(&self) -> bool {
        self.rows == self.cols && self.det().abs() == 1
    }

    pub fn to_cyc(&self) -> CycMatrix {
        CycMatrix::from_ints(&self.to_rows())
    }

    /// The integer matrix with the given rational entries, if they are all integers.
    pub fn from_cyc(m: &CycMatrix) -> Option<IntMatrix> {
        m.to_int_rows().map(|r| IntMatrix::from_rows(&r))
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        if !self.is_unimodular() {
            return None;
        }
        Self::from_cyc(&self.to_cyc().inverse().ok()?)
    }

    pub fn rank(&self) -> usize {
        self.smith().diag.iter().filter(|&&d| d != 0).count()
    }

    /// Smith normal form with transforms.
    pub fn smith(&self) -> Smith {
        let (m, n) = (self.rows, self.cols);
        let mut a: Vec<Vec<i128>> = self.to_rows().into_iter().map(|r| r.into_iter().map(i128::from).collect()).collect();
        let mut u: Vec<Vec<i128>> = (0..m).map(|i| (0..m).map(|j| i128::from(i == j)).collect()).collect();
        let mut v: Vec<Vec<i128>> = (0..n).map(|i| (0..n).map(|j| i128::from(i == j)).collect()).collect();
        let swap_cols = |x: &mut Vec<Vec<i128>>, p: usize, q: usize| {
            for row in x.iter_mut() {
                row.swap(p, q);
            }
        };
        for t in 0..m.min(n) {
            loop {
                // smallest nonzero entry of the trailing block
                let mut best: Option<(usize, usize)> = None;
                for i in t..m {
                    for j in t..n {
                        if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                            best = Some((i, j));
                        }
                    }
                }
                let Some((pi, pj)) = best else { break };
                a.swap(t, pi);
                u.swap(t, pi);
                swap_cols(&mut a, t, pj);
                swap_cols(&mut v, t, pj);
                let p = a[t][t];
                let mut clean = true;
                for i in t + 1..m {
                    let q = Integer::div_floor(&a[i][t], &p);
                    if q != 0 {
                        for j in 0..n {
                            a[i][j] -= q * a[t][j];
                        }
                        for j in 0..m {
                            u[i][j] -= q * u[t][j];
                        }
                    }
                    clean &= a[i][t] == 0;
                }
                for j in t + 1..n {
                    let q = Integer::div_floor(&a[t][j], &p);
                    if q != 0 {
                        for row in a.iter_mut() {
                            row[j] -= q * row[t];
                        }
                        for row in v.iter_mut() {
                            row[j] -= q * row[t];
                        }
                    }
                    clean &= a[t][j] == 0;
                }
                if !clean {
                    continue;
                }
                let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| a[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in 0..n {
                            a[t][j] += a[i][j];
                        }
                        for j in 0..m {
                            u[t][j] += u[i][j];
                        }
                    }
                    None => break,
                }
            }
            if a[t][t] < 0 {
                for j in 0..n {
                    a[t][j] = -a[t][j];
                }
                for j in 0..m {
                    u[t][j] = -u[t][j];
                }
            }
        }
        let to_int = |x: Vec<Vec<i128>>| IntMatrix::from_rows(&x.into_iter().map(|r| r.into_iter().map(narrow).collect()).collect::<Vec<_>>());
        let diag = (0..m.min(n)).map(|i| narrow(a[i][i])).collect();
        Smith { u: to_int(u), v: to_int(v), diag }
    }

    /// Column Hermite form: a basis (as columns, lower triangular with positive
    /// pivots and reduced entries left of each pivot) of the lattice spanned by the columns.
    pub fn column_hermite(&self) -> IntMatrix {
        let (m, n) = (self.rows, self.cols);
        let mut c: Vec<Vec<i128>> = (0..n).map(|j| self.column(j).into_iter().map(i128::from).collect()).collect();
        let mut p = 0;
        for i in 0..m {
            if p == n {
                break;
            }
            loop {
                let best = (p..n).filter(|&j| c[j][i] != 0).min_by_key(|&j| c[j][i].abs());
                let Some(b) = best else { break };
                c.swap(p, b);
                let mut done = true;
                for j in p + 1..n {
                    let q = Integer::div_floor(&c[j][i], &c[p][i]);
                    if q != 0 {
                        for k in 0..m {
                            c[j][k] -= q * c[p][k];
                        }
                    }
                    done &= c[j][i] == 0;
                }
                if done {
                    break;
                }
            }
            if p < n && c[p][i] != 0 {
                if c[p][i] < 0 {
                    c[p].iter_mut().for_each(|x| *x = -*x);
                }
                for j in 0..p {
                    let q = Integer::div_floor(&c[j][i], &c[p][i]);
                    if q != 0 {
                        for k in 0..m {
                            c[j][k] -= q * c[p][k];
                        }
                    }
                }
                p += 1;
            }
        }
        let cols: Vec<Vec<i64>> = c.into_iter().take(p).map(|col| col.into_iter().map(narrow).collect()).collect();
        if cols.is_empty() {
            return IntMatrix::zeros(m, 0);
        }
        IntMatrix::from_columns(&cols)
    }
}

/// Least common multiple of the denominators.
pub fn common_denominator(v: &[Rational]) -> i64 {
    v.iter().fold(1i64, |acc, x| acc.lcm(&x.denom().to_i64().expect("small denominator")))
}

/// Reduce into `[0, 1)`.
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

pub fn rational_vector_to_cyc(v: &[Rational]) -> CycMatrix {
    CycMatrix::from_rows(v.iter().map(|x| vec![CycNum::from_rational(x.clone())]).collect()).expect("column vector")
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> =
            self.to_rows().iter().map(|r| format!("[{}]", r.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))).collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>())
    }

    fn check_smith(a: &IntMatrix) {
        let s = a.smith();
        assert!(s.u.is_unimodular() && s.v.is_unimodular());
        let d = s.u.mul(a).mul(&s.v);
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                let expect = if i == j { s.diag[i] } else { 0 };
                assert_eq!(d.get(i, j), expect, "{a}");
            }
        }
        for w in s.diag.windows(2) {
            assert!(w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0), "{:?}", s.diag);
        }
    }

    #[test]
    fn smith_examples() {
        let a = m(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        check_smith(&a);
        assert_eq!(a.smith().diag, vec![2, 6, 12]);
        check_smith(&m(&[&[0, 0], &[0, 0]]));
        check_smith(&m(&[&[1, 2, 3], &[2, 4, 6]]));
    }

    #[test]
    fn det_and_inverse() {
        let a = m(&[&[0, -1], &[1, -1]]);
        assert_eq!(a.det(), 1);
        assert_eq!(a.pow(3), IntMatrix::identity(2));
        assert_eq!(a.inverse_unimodular().unwrap().mul(&a), IntMatrix::identity(2));
        assert_eq!(IntMatrix::scalar(6, -1).det(), 1);
        assert_eq!(IntMatrix::scalar(6, 2).det(), 64);
    }

    #[test]
    fn hermite_of_index_two_superlattice() {
        // 2Z² + Z(1,1)
        let h = m(&[&[2, 0, 1], &[0, 2, 1]]).column_hermite();
        assert_eq!(h.cols(), 2);
        assert_eq!(h.det().abs(), 2);
        assert_eq!(h, m(&[&[1, 0], &[1, 2]]));
    }

    proptest! {
        #[test]
        fn smith_random(rows in proptest::collection::vec(proptest::collection::vec(-5i64..6, 4), 3)) {
            check_smith(&IntMatrix::from_rows(&rows));
        }

        #[test]
        fn hermite_preserves_determinant(rows in proptest::collection::vec(proptest::collection::vec(-5i64..6, 3), 3)) {
            let a = IntMatrix::from_rows(&rows);
            let h = a.column_hermite();
            if a.det() != 0 {
                prop_assert_eq!(h.det().abs(), a.det().abs());
            } else {
                prop_assert_eq!(h.cols(), a.rank());
            }
        }
    }
}
