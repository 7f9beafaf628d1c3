//! Integral quadratic lattices, reflections in (-2)-vectors and in orbits of mutually
//! orthogonal (-2)-vectors, and the walk that reflects a vector into the chamber cut out
//! by a finite wall system.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

pub const DEFAULT_CHAMBER_CAP: usize = 1_000_000;

/// Reads `CYQUOT_CHAMBER_CAP`, falling back to [`DEFAULT_CHAMBER_CAP`].
pub fn chamber_cap() -> usize {
    std::env::var("CYQUOT_CHAMBER_CAP").ok().and_then(|v| v.parse().ok()).unwrap_or(DEFAULT_CHAMBER_CAP)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ChamberError {
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("Gram matrix is degenerate")]
    Degenerate,
    #[error("vector has length {found}, lattice rank is {rank}")]
    Length { rank: usize, found: usize },
    #[error("vector {0:?} does not have square -2")]
    WrongNorm(Vec<i64>),
    #[error("orbit vectors {0} and {1} are not orthogonal")]
    NotOrthogonal(usize, usize),
    #[error("arithmetic overflow")]
    Overflow,
    #[error("reference vector must have positive square and positive pairing with every wall")]
    BadReference,
    #[error("vector is not in the closed positive cone of the reference vector")]
    OutsideCone,
    #[error("no chamber reached within {cap} reflections; partial word {word:?}")]
    CapExceeded { cap: usize, word: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadLattice {
    gram: Vec<Vec<i64>>,
}

impl QuadLattice {
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self, ChamberError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) || (0..n).any(|i| (0..i).any(|j| gram[i][j] != gram[j][i])) {
            return Err(ChamberError::NotSymmetric);
        }
        let l = QuadLattice { gram };
        if l.diagonal().iter().any(|d| d.is_zero()) {
            return Err(ChamberError::Degenerate);
        }
        Ok(l)
    }

    /// The hyperbolic plane `U` followed by `k` copies of `⟨-2⟩`.
    pub fn hyperbolic_plus_nodes(k: usize) -> Self {
        let n = 2 + k;
        let mut gram = vec![vec![0; n]; n];
        gram[0][1] = 1;
        gram[1][0] = 1;
        for i in 2..n {
            gram[i][i] = -2;
        }
        QuadLattice { gram }
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &[Vec<i64>] {
        &self.gram
    }

    fn check(&self, x: &[i64]) -> Result<(), ChamberError> {
        if x.len() != self.rank() {
            return Err(ChamberError::Length { rank: self.rank(), found: x.len() });
        }
        Ok(())
    }

    pub fn pair(&self, x: &[i64], y: &[i64]) -> Result<i64, ChamberError> {
        self.check(x)?;
        self.check(y)?;
        let mut s: i128 = 0;
        for (i, row) in self.gram.iter().enumerate() {
            for (j, &g) in row.iter().enumerate() {
                s += x[i] as i128 * g as i128 * y[j] as i128;
            }
        }
        i64::try_from(s).map_err(|_| ChamberError::Overflow)
    }

    pub fn norm(&self, x: &[i64]) -> Result<i64, ChamberError> {
        self.pair(x, x)
    }

    /// Diagonal of a rational congruence diagonalization.
    fn diagonal(&self) -> Vec<BigRational> {
        let n = self.rank();
        let mut a: Vec<Vec<BigRational>> =
            self.gram.iter().map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect()).collect();
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            if a[k][k].is_zero() {
                if let Some(j) = (k + 1..n).find(|&j| !a[j][j].is_zero()) {
                    a.swap(k, j);
                    for row in a.iter_mut() {
                        row.swap(k, j);
                    }
                } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].is_zero()) {
                    // e_k ← e_k + e_j gives a nonzero diagonal entry 2 a_kj
                    for c in 0..n {
                        let v = a[j][c].clone();
                        a[k][c] += v;
                    }
                    for r in 0..n {
                        let v = a[r][j].clone();
                        a[r][k] += v;
                    }
                }
            }
            let p = a[k][k].clone();
            out.push(p.clone());
            if p.is_zero() {
                continue;
            }
            for i in k + 1..n {
                let f = &a[i][k] / &p;
                for c in k..n {
                    let v = &f * &a[k][c];
                    a[i][c] -= v;
                }
            }
            for row in a.iter_mut().skip(k + 1) {
                row[k] = BigRational::zero();
            }
            for c in k + 1..n {
                a[k][c] = BigRational::zero();
            }
        }
        out
    }

    /// `(positive, negative)` index of inertia.
    pub fn signature(&self) -> (usize, usize) {
        let d = self.diagonal();
        (d.iter().filter(|x| x.is_positive()).count(), d.iter().filter(|x| x.is_negative()).count())
    }
}

/// Mutually orthogonal (-2)-vectors permuted by a group; their reflections commute.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NodalOrbitClass {
    vectors: Vec<Vec<i64>>,
}

impl NodalOrbitClass {
    pub fn new(lattice: &QuadLattice, vectors: Vec<Vec<i64>>) -> Result<Self, ChamberError> {
        for (k, b) in vectors.iter().enumerate() {
            if lattice.norm(b)? != -2 {
                return Err(ChamberError::WrongNorm(b.clone()));
            }
            for (l, c) in vectors.iter().enumerate().take(k) {
                if lattice.pair(b, c)? != 0 {
                    return Err(ChamberError::NotOrthogonal(l, k));
                }
            }
        }
        Ok(NodalOrbitClass { vectors })
    }

    pub fn vectors(&self) -> &[Vec<i64>] {
        &self.vectors
    }
}

fn axpy(x: &[i64], c: i64, b: &[i64]) -> Result<Vec<i64>, ChamberError> {
    x.iter().zip(b).map(|(&xi, &bi)| c.checked_mul(bi).and_then(|v| v.checked_add(xi)).ok_or(ChamberError::Overflow)).collect()
}

/// `x + (x.B) B` for a (-2)-vector `B`.
pub fn reflect_single(lattice: &QuadLattice, x: &[i64], b: &[i64]) -> Result<Vec<i64>, ChamberError> {
    if lattice.norm(b)? != -2 {
        return Err(ChamberError::WrongNorm(b.to_vec()));
    }
    axpy(x, lattice.pair(x, b)?, b)
}

/// `x + Σ (x.B_k) B_k`, the product of the commuting reflections in the orbit.
pub fn orbit_reflection(lattice: &QuadLattice, x: &[i64], orbit: &NodalOrbitClass) -> Result<Vec<i64>, ChamberError> {
    let mut y = x.to_vec();
    for b in &orbit.vectors {
        y = axpy(&y, lattice.pair(x, b)?, b)?;
    }
    Ok(y)
}

/// `(x.B) ≥ 0` for every vector of every orbit.
pub fn chamber_test(lattice: &QuadLattice, x: &[i64], orbits: &[NodalOrbitClass]) -> Result<bool, ChamberError> {
    for o in orbits {
        for b in &o.vectors {
            if lattice.pair(x, b)? < 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChamberWalk {
    pub y: Vec<i64>,
    /// Orbit indices in the order they were applied.
    pub word: Vec<usize>,
}

/// Apply the word to `x`, first letter first.
pub fn apply_word(lattice: &QuadLattice, x: &[i64], orbits: &[NodalOrbitClass], word: &[usize]) -> Result<Vec<i64>, ChamberError> {
    let mut y = x.to_vec();
    for &k in word {
        y = orbit_reflection(lattice, &y, &orbits[k])?;
    }
    Ok(y)
}

/// Reflect `x` into the chamber, always across the wall with the most negative pairing
/// (lowest orbit index on ties). Each step lowers `(x.h)` by a positive integer as long as
/// `x` pairs equally with all vectors of each orbit; otherwise the walk can cycle until the cap.
pub fn reflect_into_chamber(
    lattice: &QuadLattice,
    x: &[i64],
    orbits: &[NodalOrbitClass],
    h: &[i64],
    cap: usize,
) -> Result<ChamberWalk, ChamberError> {
    if lattice.norm(h)? <= 0 {
        return Err(ChamberError::BadReference);
    }
    for o in orbits {
        for b in &o.vectors {
            if lattice.pair(h, b)? <= 0 {
                return Err(ChamberError::BadReference);
            }
        }
    }
    if lattice.norm(x)? < 0 || lattice.pair(x, h)? < 0 {
        return Err(ChamberError::OutsideCone);
    }
    let mut y = x.to_vec();
    let mut word = Vec::new();
    loop {
        let mut worst: Option<(i64, usize)> = None;
        for (k, o) in orbits.iter().enumerate() {
            for b in &o.vectors {
                let p = lattice.pair(&y, b)?;
                if p < 0 && worst.map_or(true, |(w, _)| p < w) {
                    worst = Some((p, k));
                }
            }
        }
        let Some((_, k)) = worst else {
            return Ok(ChamberWalk { y, word });
        };
        if word.len() >= cap {
            return Err(ChamberError::CapExceeded { cap, word });
        }
        y = orbit_reflection(lattice, &y, &orbits[k])?;
        word.push(k);
    }
}

/// Integers ordered `0, 1, -1, 2, -2, …` up to `bound`.
fn signed_range(bound: i64) -> Vec<i64> {
    let mut v = vec![0];
    for k in 1..=bound {
        v.push(k);
        v.push(-k);
    }
    v
}

/// First primitive isotropic vector with entries in `[-bound, bound]`: by increasing
/// sup-norm, then lexicographically with entries ordered `0, 1, -1, 2, -2, …`.
pub fn isotropic_search(lattice: &QuadLattice, bound: u32) -> Option<Vec<i64>> {
    let n = lattice.rank();
    for shell in 1..=bound as i64 {
        let values = signed_range(shell);
        let mut idx = vec![0usize; n];
        loop {
            let x: Vec<i64> = idx.iter().map(|&i| values[i]).collect();
            let sup = x.iter().map(|v| v.abs()).max().unwrap_or(0);
            let g = x.iter().fold(0i64, |g, &v| g.gcd(&v));
            if sup == shell && g == 1 && lattice.norm(&x).ok() == Some(0) {
                return Some(x);
            }
            let mut k = n;
            loop {
                if k == 0 {
                    break;
                }
                k -= 1;
                idx[k] += 1;
                if idx[k] < values.len() {
                    break;
                }
                idx[k] = 0;
            }
            if idx.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn u_plus(k: usize) -> QuadLattice {
        QuadLattice::hyperbolic_plus_nodes(k)
    }

    #[test]
    fn single_reflections() {
        let l = u_plus(1);
        let b = vec![0, 0, 1];
        assert_eq!(reflect_single(&l, &[1, 1, 1], &b).unwrap(), vec![1, 1, -1]);
        assert_eq!(reflect_single(&l, &[1, 0, 0], &b).unwrap(), vec![1, 0, 0]);
        assert_eq!(reflect_single(&l, &b, &b).unwrap(), vec![0, 0, -1]);
        assert_eq!(reflect_single(&l, &[1, 1, 1], &[1, 0, 0]), Err(ChamberError::WrongNorm(vec![1, 0, 0])));
    }

    #[test]
    fn orbits() {
        let l = u_plus(2);
        let single = NodalOrbitClass::new(&l, vec![vec![0, 0, 1, 0]]).unwrap();
        let x = [3, 2, 1, 5];
        assert_eq!(orbit_reflection(&l, &x, &single).unwrap(), reflect_single(&l, &x, &[0, 0, 1, 0]).unwrap());
        let pair = NodalOrbitClass::new(&l, vec![vec![0, 0, 1, 0], vec![0, 0, 0, 1]]).unwrap();
        assert_eq!(orbit_reflection(&l, &[1, 1, 0, 0], &pair).unwrap(), vec![1, 1, 0, 0]);
        assert_eq!(
            NodalOrbitClass::new(&l, vec![vec![0, 0, 1, 0], vec![1, 0, 1, 0]]),
            Err(ChamberError::NotOrthogonal(0, 1))
        );
    }

    #[test]
    fn chamber_membership() {
        let l = u_plus(1);
        let o = NodalOrbitClass::new(&l, vec![vec![0, 0, 1]]).unwrap();
        assert!(chamber_test(&l, &[1, 1, 0], &[]).unwrap());
        assert!(!chamber_test(&l, &[0, 0, 1], &[o.clone()]).unwrap());
        assert!(chamber_test(&l, &[2, 2, -1], &[o]).unwrap());
    }

    #[test]
    fn walks() {
        let l = u_plus(1);
        let o = vec![NodalOrbitClass::new(&l, vec![vec![0, 0, 1]]).unwrap()];
        let h = [1, 2, -1];
        let w = reflect_into_chamber(&l, &[2, 2, -1], &o, &h, 10).unwrap();
        assert!(w.word.is_empty());
        // (x.B) = -2 * 1 with x = (1, 1, 1): one reflection
        let w = reflect_into_chamber(&l, &[1, 1, 1], &o, &h, 10).unwrap();
        assert_eq!(w, ChamberWalk { y: vec![1, 1, -1], word: vec![0] });
        assert_eq!(reflect_into_chamber(&l, &[1, 1, 1], &o, &h, 0), Err(ChamberError::CapExceeded { cap: 0, word: vec![] }));
        assert_eq!(reflect_into_chamber(&l, &[1, 1, 1], &o, &[1, 2, 1], 10), Err(ChamberError::BadReference));
    }

    #[test]
    fn lattice_invariants() {
        assert_eq!(u_plus(2).signature(), (1, 3));
        assert_eq!(QuadLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap().signature(), (1, 1));
        assert_eq!(QuadLattice::new(vec![vec![1, 1], vec![1, 1]]), Err(ChamberError::Degenerate));
        assert_eq!(QuadLattice::new(vec![vec![1, 2], vec![0, 1]]), Err(ChamberError::NotSymmetric));
    }

    #[test]
    fn isotropic_vectors() {
        let u = QuadLattice::new(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(isotropic_search(&u, 3), Some(vec![0, 1]));
        let d = QuadLattice::new(vec![vec![2, 0], vec![0, -2]]).unwrap();
        assert_eq!(isotropic_search(&d, 3), Some(vec![1, 1]));
        let p = QuadLattice::new(vec![vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(isotropic_search(&p, 5), None);
        let l = u_plus(2);
        assert_eq!(l.norm(&isotropic_search(&l, 2).unwrap()).unwrap(), 0);
    }

    fn gram_strategy() -> impl Strategy<Value = QuadLattice> {
        proptest::collection::vec(-3i64..4, 6).prop_filter_map("degenerate", |v| {
            let g = vec![vec![v[0], v[1], v[2]], vec![v[1], v[3], v[4]], vec![v[2], v[4], v[5]]];
            QuadLattice::new(g).ok()
        })
    }

    proptest! {
        #[test]
        fn isotropic_search_is_stable_in_the_bound(l in gram_strategy(), b in 1u32..4, extra in 0u32..3) {
            if let Some(v) = isotropic_search(&l, b) {
                prop_assert_eq!(l.norm(&v).unwrap(), 0);
                prop_assert_eq!(isotropic_search(&l, b + extra), Some(v));
            }
        }
    }
}
