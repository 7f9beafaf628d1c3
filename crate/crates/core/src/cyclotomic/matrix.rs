use std::fmt;

use num_integer::Integer;

use super::{check_bound, divisors, CycError, CycNum, Rational};

/// A root of unity `ζ_order^exp` in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RootLabel {
    pub order: u32,
    pub exp: u32,
}

impl RootLabel {
    /// Normalize `ζ_n^k` to lowest terms.
    pub fn new(n: u32, k: i64) -> Self {
        let k = k.rem_euclid(n as i64) as u32;
        if k == 0 {
            return RootLabel { order: 1, exp: 0 };
        }
        let g = n.gcd(&k);
        RootLabel { order: n / g, exp: k / g }
    }

    pub fn one() -> Self {
        RootLabel { order: 1, exp: 0 }
    }

    pub fn value(&self) -> CycNum {
        CycNum::root_of_unity(self.order, self.exp as i64)
    }

    pub fn inverse(&self) -> Self {
        RootLabel::new(self.order, -(self.exp as i64))
    }

    /// Exponent of this root written over a common denominator `m`.
    pub fn exponent_mod(&self, m: u32) -> u32 {
        assert!(m % self.order == 0, "{m} is not a multiple of {}", self.order);
        self.exp * (m / self.order)
    }
}

impl fmt::Display for RootLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.order, self.exp) {
            (1, _) => write!(f, "1"),
            (2, _) => write!(f, "-1"),
            (n, 1) => write!(f, "z{n}"),
            (n, k) => write!(f, "z{n}^{k}"),
        }
    }
}

/// A dense matrix over a cyclotomic field; all entries share one conductor.
#[derive(Clone, Debug)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    conductor: u32,
    entries: Vec<CycNum>,
}

impl PartialEq for CycMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows && self.cols == other.cols && self.entries == other.entries
    }
}

impl Eq for CycMatrix {}

impl CycMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<CycNum>) -> Result<Self, CycError> {
        if entries.len() != rows * cols {
            return Err(CycError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        let mut n = 1u64;
        for e in &entries {
            n = n.lcm(&(e.conductor() as u64));
        }
        let n = check_bound(n)?;
        let entries = entries.into_iter().map(|e| e.lift(n)).collect();
        Ok(CycMatrix { rows, cols, conductor: n, entries })
    }

    pub fn from_rows(rows: Vec<Vec<CycNum>>) -> Result<Self, CycError> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(CycError::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(rows.iter().map(|r| r.iter().map(|&x| CycNum::from_int(x)).collect()).collect())
            .expect("integer matrix is well formed")
    }

    pub fn identity(n: usize) -> Self {
        Self::scalar(n, CycNum::one())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        CycMatrix { rows, cols, conductor: 1, entries: vec![CycNum::zero(); rows * cols] }
    }

    pub fn scalar(n: usize, c: CycNum) -> Self {
        Self::diag(vec![c; n])
    }

    pub fn diag(d: Vec<CycNum>) -> Self {
        let n = d.len();
        let mut entries = vec![CycNum::zero(); n * n];
        for (i, x) in d.into_iter().enumerate() {
            entries[i * n + i] = x;
        }
        Self::new(n, n, entries).expect("diagonal matrix within conductor bound")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> Vec<CycNum> {
        self.entries[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn to_rows(&self) -> Vec<Vec<CycNum>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn column(&self, j: usize) -> Vec<CycNum> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn from_columns(cols: &[Vec<CycNum>]) -> Result<Self, CycError> {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut entries = Vec::with_capacity(r * c);
        for i in 0..r {
            for col in cols {
                entries.push(col[i].clone());
            }
        }
        Self::new(r, c, entries)
    }

    /// Integer entries, when every entry is a rational integer.
    pub fn to_int_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j).to_i64()).collect())
            .collect()
    }

    /// Hash key after lifting every entry to conductor `m`, so that equal matrices
    /// built at different conductors collide.
    pub fn key_at(&self, m: u32) -> (usize, usize, Vec<Rational>) {
        let coeffs = self.entries.iter().flat_map(|e| e.lift(m).coeffs().to_vec()).collect();
        (self.rows, self.cols, coeffs)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycError> {
        if self.cols != other.rows {
            return Err(CycError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = CycNum::zero();
                for k in 0..self.cols {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.try_add(&a.try_mul(b)?)?;
                }
                entries.push(acc);
            }
        }
        Self::new(self.rows, other.cols, entries)
    }

    fn zip_with(
        &self,
        other: &Self,
        f: impl Fn(&CycNum, &CycNum) -> Result<CycNum, CycError>,
    ) -> Result<Self, CycError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(CycError::DimensionMismatch(format!(
                "{}x{} versus {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| f(a, b)).collect::<Result<_, _>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycError> {
        self.zip_with(other, |a, b| a.try_add(b))
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycError> {
        self.zip_with(other, |a, b| a.try_sub(b))
    }

    pub fn scale(&self, c: &CycNum) -> Result<Self, CycError> {
        let entries = self.entries.iter().map(|e| e.try_mul(c)).collect::<Result<_, _>>()?;
        Self::new(self.rows, self.cols, entries)
    }

    pub fn neg(&self) -> Self {
        CycMatrix { entries: self.entries.iter().map(|e| -e).collect(), ..self.clone() }
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        CycMatrix { rows: self.cols, cols: self.rows, conductor: self.conductor, entries }
    }

    pub fn conj(&self) -> Self {
        CycMatrix { entries: self.entries.iter().map(|e| e.conj()).collect(), ..self.clone() }
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self, CycError> {
        let (r, c) = (self.rows + other.rows, self.cols + other.cols);
        let mut entries = vec![CycNum::zero(); r * c];
        for i in 0..self.rows {
            for j in 0..self.cols {
                entries[i * c + j] = self.get(i, j).clone();
            }
        }
        for i in 0..other.rows {
            for j in 0..other.cols {
                entries[(self.rows + i) * c + self.cols + j] = other.get(i, j).clone();
            }
        }
        Self::new(r, c, entries)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..self.cols).all(|j| {
                let e = self.get(i, j);
                if i == j { e.is_one() } else { e.is_zero() }
            }))
    }

    fn require_square(&self) -> Result<(), CycError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(CycError::DimensionMismatch(format!("{}x{} is not square", self.rows, self.cols)))
        }
    }

    pub fn trace(&self) -> Result<CycNum, CycError> {
        self.require_square()?;
        let mut acc = CycNum::zero();
        for i in 0..self.rows {
            acc = acc.try_add(self.get(i, i))?;
        }
        Ok(acc)
    }

    pub fn pow(&self, e: u64) -> Result<Self, CycError> {
        self.require_square()?;
        let mut base = self.clone();
        let mut acc = Self::identity(self.rows);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.try_mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Determinant by Bareiss elimination.
    pub fn det(&self) -> Result<CycNum, CycError> {
        self.require_square()?;
        let n = self.rows;
        if n == 0 {
            return Ok(CycNum::one());
        }
        let mut a = self.to_rows();
        let mut sign = false;
        let mut prev = CycNum::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = !sign;
                    }
                    None => return Ok(CycNum::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let t = a[i][j].try_mul(&a[k][k])?.try_sub(&a[i][k].try_mul(&a[k][j])?)?;
                    a[i][j] = t.try_div(&prev)?;
                }
                a[i][k] = CycNum::zero();
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign { -d } else { d })
    }

    /// Characteristic polynomial `det(xI - M)`, coefficients lowest degree first.
    pub fn charpoly(&self) -> Result<Vec<CycNum>, CycError> {
        self.require_square()?;
        let n = self.rows;
        let mut coeffs = vec![CycNum::zero(); n + 1];
        coeffs[n] = CycNum::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            m = self.try_mul(&m)?.try_add(&Self::scalar(n, coeffs[n - k + 1].clone()))?;
            let t = self.try_mul(&m)?.trace()?;
            coeffs[n - k] = -t.scale(&Rational::new(1.into(), (k as i64).into()));
        }
        Ok(coeffs)
    }

    /// Rank by fraction-free row elimination.
    pub fn rank(&self) -> Result<usize, CycError> {
        let mut a = self.to_rows();
        let (r, c) = (self.rows, self.cols);
        let mut rank = 0;
        let mut prev = CycNum::one();
        for col in 0..c {
            let Some(p) = (rank..r).find(|&i| !a[i][col].is_zero()) else { continue };
            a.swap(rank, p);
            for i in rank + 1..r {
                if a[i][col].is_zero() {
                    // still scale by pivot/prev to keep the Bareiss invariant
                    for j in col + 1..c {
                        a[i][j] = a[i][j].try_mul(&a[rank][col])?.try_div(&prev)?;
                    }
                    continue;
                }
                for j in col + 1..c {
                    let t = a[i][j].try_mul(&a[rank][col])?.try_sub(&a[i][col].try_mul(&a[rank][j])?)?;
                    a[i][j] = t.try_div(&prev)?;
                }
                a[i][col] = CycNum::zero();
            }
            prev = a[rank][col].clone();
            rank += 1;
            if rank == r {
                break;
            }
        }
        Ok(rank)
    }

    pub fn nullity(&self) -> Result<usize, CycError> {
        Ok(self.cols - self.rank()?)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> Result<(Self, Vec<usize>), CycError> {
        let mut a = self.to_rows();
        let (r, c) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..c {
            if row == r {
                break;
            }
            let Some(p) = (row..r).find(|&i| !a[i][col].is_zero()) else { continue };
            a.swap(row, p);
            let inv = a[row][col].inv()?;
            for j in col..c {
                a[row][j] = a[row][j].try_mul(&inv)?;
            }
            for i in 0..r {
                if i == row || a[i][col].is_zero() {
                    continue;
                }
                let f = a[i][col].clone();
                for j in col..c {
                    let t = f.try_mul(&a[row][j])?;
                    a[i][j] = a[i][j].try_sub(&t)?;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Ok((Self::from_rows_sized(r, c, a)?, pivots))
    }

    fn from_rows_sized(r: usize, c: usize, rows: Vec<Vec<CycNum>>) -> Result<Self, CycError> {
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    /// Basis of the right kernel, one column per basis vector.
    pub fn nullspace(&self) -> Result<Vec<Vec<CycNum>>, CycError> {
        let (rref, pivots) = self.rref()?;
        let free: Vec<usize> = (0..self.cols).filter(|j| !pivots.contains(j)).collect();
        let mut basis = Vec::new();
        for &f in &free {
            let mut v = vec![CycNum::zero(); self.cols];
            v[f] = CycNum::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -rref.get(i, f);
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// Solve `A X = B` for `A` of full column rank.
    pub fn solve(&self, b: &Self) -> Result<Self, CycError> {
        if self.rows != b.rows {
            return Err(CycError::DimensionMismatch("solve: row counts differ".into()));
        }
        let n = self.cols;
        let aug: Vec<Vec<CycNum>> = (0..self.rows).map(|i| [self.row(i), b.row(i)].concat()).collect();
        let (rref, pivots) = Self::from_rows(aug)?.rref()?;
        if pivots.iter().any(|&p| p >= n) {
            return Err(CycError::Inconsistent);
        }
        if pivots.len() < n {
            return Err(CycError::Singular);
        }
        let rows = (0..n).map(|i| (0..b.cols).map(|j| rref.get(i, n + j).clone()).collect()).collect();
        Self::from_rows(rows)
    }

    pub fn inverse(&self) -> Result<Self, CycError> {
        self.require_square()?;
        self.solve(&Self::identity(self.rows))
    }

    /// Least `k ≤ bound` with `M^k = I`.
    pub fn multiplicative_order(&self, bound: u32) -> Result<u32, CycError> {
        self.require_square()?;
        let mut p = self.clone();
        for k in 1..=bound {
            if p.is_identity() {
                return Ok(k);
            }
            p = p.try_mul(self)?;
        }
        Err(CycError::NotFiniteOrder(bound))
    }

    /// Eigenvalues of a matrix with `M^order = I`, via kernel tests against every root of unity
    /// of order dividing `order`.
    pub fn eigenvalue_profile(&self, order: u32) -> Result<Vec<RootLabel>, CycError> {
        self.require_square()?;
        if !self.pow(order as u64)?.is_identity() {
            return Err(CycError::NotFiniteOrder(order));
        }
        let n = self.rows;
        let mut out = Vec::new();
        for d in divisors(order) {
            for k in 0..d.max(1) {
                if (d == 1 && k != 0) || (d > 1 && k.gcd(&d) != 1) {
                    continue;
                }
                let root = RootLabel::new(d, k as i64);
                let shifted = self.try_sub(&Self::scalar(n, root.value()))?;
                let mult = shifted.nullity()?;
                out.extend(std::iter::repeat(root).take(mult));
                if out.len() == n {
                    out.sort();
                    return Ok(out);
                }
            }
        }
        // finite-order matrices are diagonalizable, so this is unreachable for valid input
        Err(CycError::NotFiniteOrder(order))
    }

    pub fn has_eigenvalue_one(&self) -> Result<bool, CycError> {
        self.require_square()?;
        Ok(self.try_sub(&Self::identity(self.rows))?.rank()? < self.rows)
    }

    /// Companion matrix of a monic integer polynomial (coefficients lowest first).
    pub fn companion(poly: &[i128]) -> Self {
        let n = poly.len() - 1;
        let mut rows = vec![vec![0i64; n]; n];
        for i in 1..n {
            rows[i][i - 1] = 1;
        }
        for i in 0..n {
            rows[i][n - 1] = -(poly[i] as i64);
        }
        Self::from_ints(&rows)
    }
}

impl fmt::Display for CycMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::cyclotomic_polynomial;

    fn z(n: u32, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k)
    }

    #[test]
    fn determinant_and_trace() {
        let a0 = CycMatrix::from_ints(&[vec![1, 0, 0], vec![0, -1, 0], vec![0, 0, -1]]);
        assert!(a0.det().unwrap().is_one());
        assert!(CycMatrix::identity(5).det().unwrap().is_one());
        let rho = CycMatrix::diag(vec![z(4, 1), z(4, -1)]);
        assert!(rho.trace().unwrap().is_zero());
        let m = CycMatrix::from_ints(&[vec![2, 1], vec![7, 4]]);
        assert!(m.det().unwrap().is_one());
        let s = CycMatrix::from_ints(&[vec![0, 1, 2], vec![0, 3, 4], vec![5, 6, 0]]);
        assert_eq!(s.det().unwrap(), CycNum::from_int(5 * (4 - 6)));
    }

    #[test]
    fn eigenvalue_profiles() {
        let d = CycMatrix::diag(vec![CycNum::one(), z(4, 1), z(4, -1)]);
        let prof = d.eigenvalue_profile(4).unwrap();
        assert_eq!(prof, vec![RootLabel::one(), RootLabel::new(4, 1), RootLabel::new(4, 3)]);
        let b = CycMatrix::from_ints(&[vec![-1, 0, 0], vec![0, 0, 1], vec![0, 1, 0]]);
        let prof = b.eigenvalue_profile(2).unwrap();
        assert_eq!(prof, vec![RootLabel::one(), RootLabel::new(2, 1), RootLabel::new(2, 1)]);
        // oracle: charpoly (x+1)^2 (x-1) = x^3 + x^2 - x - 1
        let cp: Vec<i64> = b.charpoly().unwrap().iter().map(|c| c.to_i64().unwrap()).collect();
        assert_eq!(cp, vec![-1, -1, 1, 1]);
        assert_eq!(CycMatrix::identity(3).eigenvalue_profile(1).unwrap(), vec![RootLabel::one(); 3]);
        assert!(CycMatrix::from_ints(&[vec![1, 1], vec![0, 1]]).eigenvalue_profile(6).is_err());
    }

    #[test]
    fn eigenvalue_one() {
        assert!(!CycMatrix::scalar(3, z(3, 1)).has_eigenvalue_one().unwrap());
        assert!(CycMatrix::identity(3).has_eigenvalue_one().unwrap());
        assert!(CycMatrix::diag(vec![z(3, 1), CycNum::one(), z(3, 2)]).has_eigenvalue_one().unwrap());
    }

    #[test]
    fn companion_charpoly_recovers_phi() {
        for n in [3u32, 4, 6, 7, 12] {
            let phi = cyclotomic_polynomial(n);
            let c = CycMatrix::companion(&phi);
            let cp: Vec<i128> = c.charpoly().unwrap().iter().map(|x| x.to_i64().unwrap() as i128).collect();
            assert_eq!(cp, *phi, "charpoly of companion(Φ_{n})");
            assert_eq!(c.multiplicative_order(n).unwrap(), n);
        }
    }

    #[test]
    fn solve_and_nullspace() {
        let a = CycMatrix::from_ints(&[vec![1, 2], vec![3, 4], vec![5, 6]]);
        let x = CycMatrix::from_ints(&[vec![1], vec![-1]]);
        let b = a.try_mul(&x).unwrap();
        assert_eq!(a.solve(&b).unwrap(), x);
        let bad = CycMatrix::from_ints(&[vec![1], vec![0], vec![0]]);
        assert_eq!(a.solve(&bad), Err(CycError::Inconsistent));
        let m = CycMatrix::from_ints(&[vec![1, 1, 0], vec![0, 0, 1]]);
        let ns = m.nullspace().unwrap();
        assert_eq!(ns.len(), 1);
        let v = CycMatrix::from_columns(&ns).unwrap();
        assert!(m.try_mul(&v).unwrap().entries().iter().all(|e| e.is_zero()));
    }

    #[test]
    fn rank_over_cyclotomic_field() {
        // rows proportional by ζ_3
        let m = CycMatrix::from_rows(vec![vec![CycNum::one(), z(3, 1)], vec![z(3, 1), z(3, 2)]]).unwrap();
        assert_eq!(m.rank().unwrap(), 1);
        assert!(m.det().unwrap().is_zero());
    }
}
