//! Exact arithmetic in cyclotomic fields `Q(ζ_N)`.
//!
//! An element is a dense rational coefficient vector in the power basis
//! `1, ζ_N, …, ζ_N^{φ(N)-1}`. Binary operations on elements of different
//! conductors promote both operands to the lcm first.

mod matrix;

pub use matrix::{CycMatrix, RootLabel};

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub type Rational = BigRational;

pub const DEFAULT_CONDUCTOR_BOUND: u32 = 840;

static CONDUCTOR_BOUND: AtomicU32 = AtomicU32::new(DEFAULT_CONDUCTOR_BOUND);

/// Largest conductor an arithmetic operation may promote to.
pub fn conductor_bound() -> u32 {
    CONDUCTOR_BOUND.load(Ordering::Relaxed)
}

pub fn set_conductor_bound(bound: u32) {
    CONDUCTOR_BOUND.store(bound.max(1), Ordering::Relaxed);
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CycError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("conductor {0} exceeds the configured bound {1}")]
    ConductorOverflow(u64, u32),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not of finite order dividing {0}")]
    NotFiniteOrder(u32),
    #[error("matrix is singular")]
    Singular,
    #[error("linear system has no solution")]
    Inconsistent,
}

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn euler_phi(n: u32) -> usize {
    let mut m = n;
    let mut result = n as u64;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result -= result / p as u64;
        }
        p += 1;
    }
    if m > 1 {
        result -= result / m as u64;
    }
    result as usize
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|d| n % d == 0).collect()
}

fn cache() -> &'static Mutex<HashMap<u32, Arc<Vec<i128>>>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i128>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of Φ_n, lowest degree first.
pub fn cyclotomic_polynomial(n: u32) -> Arc<Vec<i128>> {
    assert!(n >= 1, "cyclotomic polynomial index must be positive");
    if let Some(p) = cache().lock().unwrap().get(&n) {
        return p.clone();
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![0i128; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in divisors(n) {
        if d == n {
            continue;
        }
        let den = cyclotomic_polynomial(d);
        num = exact_monic_division(&num, &den);
    }
    let poly = Arc::new(num);
    cache().lock().unwrap().insert(n, poly.clone());
    poly
}

fn exact_monic_division(num: &[i128], den: &[i128]) -> Vec<i128> {
    let dn = den.len() - 1;
    let mut rem = num.to_vec();
    let qlen = num.len() - dn;
    let mut q = vec![0i128; qlen];
    for i in (0..qlen).rev() {
        let c = rem[i + dn];
        q[i] = c;
        if c != 0 {
            for j in 0..=dn {
                rem[i + j] -= c * den[j];
            }
        }
    }
    debug_assert!(rem.iter().all(|&r| r == 0));
    q
}

/// Reduce a polynomial in ζ_n modulo Φ_n.
fn reduce(n: u32, mut p: Vec<Rational>) -> Vec<Rational> {
    let phi = cyclotomic_polynomial(n);
    let deg = phi.len() - 1;
    if p.len() > deg {
        for i in (deg..p.len()).rev() {
            if p[i].is_zero() {
                continue;
            }
            let c = p[i].clone();
            for (j, &pj) in phi.iter().enumerate().take(deg) {
                if pj != 0 {
                    p[i - deg + j] -= &c * Rational::from_integer(BigInt::from(pj));
                }
            }
            p[i] = Rational::zero();
        }
    }
    p.resize(deg, Rational::zero());
    p
}

fn check_bound(n: u64) -> Result<u32, CycError> {
    let bound = conductor_bound();
    if n > bound as u64 {
        Err(CycError::ConductorOverflow(n, bound))
    } else {
        Ok(n as u32)
    }
}

/// An element of `Q(ζ_N)`.
#[derive(Clone, Debug)]
pub struct CycNum {
    conductor: u32,
    coeffs: Vec<Rational>,
}

impl CycNum {
    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(rat(n))
    }

    pub fn from_rational(q: Rational) -> Self {
        CycNum { conductor: 1, coeffs: vec![q] }
    }

    /// Build from raw power-basis coefficients (any length) and reduce.
    pub fn from_coeffs(conductor: u32, coeffs: Vec<Rational>) -> Result<Self, CycError> {
        let n = check_bound(conductor as u64)?;
        Ok(CycNum { conductor: n, coeffs: reduce(n, coeffs) })
    }

    /// `ζ_n^k`, with `k` taken mod `n`.
    pub fn root_of_unity(n: u32, k: i64) -> Self {
        assert!(n >= 1, "root of unity order must be positive");
        let e = k.rem_euclid(n as i64) as usize;
        let mut p = vec![Rational::zero(); e + 1];
        p[e] = Rational::one();
        CycNum { conductor: n, coeffs: reduce(n, p) }
    }

    pub fn conductor(&self) -> u32 {
        self.conductor
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.to_rational().is_some_and(|q| q.is_one())
    }

    pub fn to_rational(&self) -> Option<Rational> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn to_integer(&self) -> Option<BigInt> {
        self.to_rational().filter(|q| q.is_integer()).map(|q| q.to_integer())
    }

    pub fn to_i64(&self) -> Option<i64> {
        self.to_integer().and_then(|z| z.to_i64())
    }

    /// Re-express in `Q(ζ_m)` for a multiple `m` of the conductor.
    pub fn lift(&self, m: u32) -> Self {
        assert!(m % self.conductor == 0, "lift target must be a multiple of the conductor");
        if m == self.conductor {
            return self.clone();
        }
        let step = (m / self.conductor) as usize;
        let mut p = vec![Rational::zero(); (self.coeffs.len() - 1) * step + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            p[i * step] = c.clone();
        }
        CycNum { conductor: m, coeffs: reduce(m, p) }
    }

    fn promote(&self, other: &Self) -> Result<(Self, Self), CycError> {
        let l = check_bound((self.conductor as u64).lcm(&(other.conductor as u64)))?;
        Ok((self.lift(l), other.lift(l)))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, CycError> {
        let (a, b) = self.promote(other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(CycNum { conductor: a.conductor, coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, CycError> {
        let (a, b) = self.promote(other)?;
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x - y).collect();
        Ok(CycNum { conductor: a.conductor, coeffs })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, CycError> {
        if let Some(q) = self.to_rational() {
            return Ok(other.scale(&q));
        }
        if let Some(q) = other.to_rational() {
            return Ok(self.scale(&q));
        }
        let (a, b) = self.promote(other)?;
        let mut p = vec![Rational::zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, x) in a.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate() {
                if !y.is_zero() {
                    p[i + j] += x * y;
                }
            }
        }
        Ok(CycNum { conductor: a.conductor, coeffs: reduce(a.conductor, p) })
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, CycError> {
        let inv = other.inv()?;
        self.try_mul(&inv)
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycNum { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplicative inverse via the extended Euclidean algorithm against Φ_N.
    pub fn inv(&self) -> Result<Self, CycError> {
        if self.is_zero() {
            return Err(CycError::DivisionByZero);
        }
        if let Some(q) = self.to_rational() {
            return Ok(CycNum { conductor: self.conductor, coeffs: reduce(self.conductor, vec![q.recip()]) });
        }
        let phi: Vec<Rational> = cyclotomic_polynomial(self.conductor)
            .iter()
            .map(|&c| Rational::from_integer(BigInt::from(c)))
            .collect();
        // invariant: r0 ≡ s0·a, r1 ≡ s1·a (mod Φ)
        let mut r0 = trim(phi);
        let mut s0: Vec<Rational> = vec![];
        let mut r1 = trim(self.coeffs.clone());
        let mut s1 = vec![Rational::one()];
        while !(r1.len() == 1) {
            let (q, r) = poly_divmod(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = r1;
            r1 = trim(r);
            s0 = s1;
            s1 = s2;
            if r1.is_empty() {
                // Φ_N is irreducible, so a nonzero element is coprime to it
                unreachable!("nonzero cyclotomic element shares a factor with Φ_N");
            }
        }
        let c = r1[0].recip();
        let coeffs = s1.into_iter().map(|x| x * &c).collect();
        Ok(CycNum { conductor: self.conductor, coeffs: reduce(self.conductor, coeffs) })
    }

    /// Complex conjugation `ζ_N ↦ ζ_N^{N-1}`.
    pub fn conj(&self) -> Self {
        let n = self.conductor as usize;
        if self.to_rational().is_some() {
            return self.clone();
        }
        let mut p = vec![Rational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                p[(i * (n - 1)) % n] += c;
            }
        }
        CycNum { conductor: self.conductor, coeffs: reduce(self.conductor, p) }
    }

    pub fn pow(&self, e: i64) -> Result<Self, CycError> {
        let mut base = if e < 0 { self.inv()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc = CycNum::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.try_mul(&base)?;
            }
            base = base.try_mul(&base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    /// Hash key that is stable for elements of a fixed conductor.
    pub fn key(&self) -> (u32, Vec<Rational>) {
        (self.conductor, self.coeffs.clone())
    }
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut p = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            p[i + j] += x * y;
        }
    }
    trim(p)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut p = vec![Rational::zero(); n];
    for (i, x) in a.iter().enumerate() {
        p[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        p[i] -= y;
    }
    trim(p)
}

fn poly_divmod(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    let db = b.len() - 1;
    if r.len() <= db {
        return (vec![], trim(r));
    }
    let lead = b[db].clone();
    let mut q = vec![Rational::zero(); r.len() - db];
    for i in (0..q.len()).rev() {
        let c = &r[i + db] / &lead;
        if !c.is_zero() {
            for j in 0..=db {
                r[i + j] -= &c * &b[j];
            }
        }
        q[i] = c;
    }
    (trim(q), trim(r))
}

impl PartialEq for CycNum {
    fn eq(&self, other: &Self) -> bool {
        if self.conductor == other.conductor {
            return self.coeffs == other.coeffs;
        }
        let l = self.conductor.lcm(&other.conductor);
        self.lift(l).coeffs == other.lift(l).coeffs
    }
}

impl Eq for CycNum {}

impl From<i64> for CycNum {
    fn from(n: i64) -> Self {
        CycNum::from_int(n)
    }
}

impl From<Rational> for CycNum {
    fn from(q: Rational) -> Self {
        CycNum::from_rational(q)
    }
}

macro_rules! forward_op {
    ($tr:ident, $m:ident, $try:ident) => {
        impl $tr<&CycNum> for &CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                self.$try(rhs).expect("cyclotomic conductor bound exceeded")
            }
        }
        impl $tr<CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: CycNum) -> CycNum {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&CycNum> for CycNum {
            type Output = CycNum;
            fn $m(self, rhs: &CycNum) -> CycNum {
                (&self).$m(rhs)
            }
        }
    };
}

forward_op!(Add, add, try_add);
forward_op!(Sub, sub, try_sub);
forward_op!(Mul, mul, try_mul);

impl Neg for &CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        CycNum { conductor: self.conductor, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for CycNum {
    type Output = CycNum;
    fn neg(self) -> CycNum {
        -&self
    }
}

impl fmt::Display for CycNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign = if c.is_negative() { "-" } else { "+" };
            let body = match (i, mag.is_one()) {
                (0, _) => mag.to_string(),
                (1, true) => format!("z{}", self.conductor),
                (1, false) => format!("{}*z{}", mag, self.conductor),
                (_, true) => format!("z{}^{}", self.conductor, i),
                (_, false) => format!("{}*z{}^{}", mag, self.conductor, i),
            };
            terms.push((sign, body));
        }
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (sign, body)) in terms.iter().enumerate() {
            match (k, *sign) {
                (0, "-") => write!(f, "-{body}")?,
                (0, _) => write!(f, "{body}")?,
                (_, s) => write!(f, " {s} {body}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k)
    }

    #[test]
    fn small_cyclotomic_polynomials() {
        assert_eq!(*cyclotomic_polynomial(1), vec![-1, 1]);
        assert_eq!(*cyclotomic_polynomial(4), vec![1, 0, 1]);
        assert_eq!(*cyclotomic_polynomial(6), vec![1, -1, 1]);
        assert_eq!(*cyclotomic_polynomial(12), vec![1, 0, -1, 0, 1]);
        assert_eq!(cyclotomic_polynomial(840).len() - 1, euler_phi(840));
    }

    #[test]
    fn basic_identities() {
        assert_eq!(&z(3, 1) + &z(3, 2), CycNum::from_int(-1));
        assert_eq!(&z(4, 1) * &z(4, 1), CycNum::from_int(-1));
        assert_eq!(z(1, 0), CycNum::one());
        assert_eq!(z(2, 1), CycNum::from_int(-1));
        assert_eq!(z(6, 3), CycNum::from_int(-1));
        assert_eq!(z(4, 1).conj(), -z(4, 1));
        assert_eq!(CycNum::from_int(-1).conj(), CycNum::from_int(-1));
        assert_eq!(z(7, 2).conj(), z(7, 5));
    }

    #[test]
    fn norm_of_one_minus_zeta7() {
        // oracle: Φ_7(1) from the integer coefficients
        let oracle: i128 = cyclotomic_polynomial(7).iter().sum();
        let mut prod = CycNum::one();
        for k in 1..=6 {
            prod = prod * (CycNum::one() - z(7, k));
        }
        assert_eq!(prod, CycNum::from_int(oracle as i64));
        assert_eq!(oracle, 7);
    }

    #[test]
    fn mixed_conductors_promote() {
        // ζ_3 · ζ_4 = ζ_12^7
        assert_eq!(&z(3, 1) * &z(4, 1), z(12, 7));
        assert_eq!((&z(3, 1) * &z(4, 1)).conductor(), 12);
        assert_eq!(z(6, 2), z(3, 1));
    }

    #[test]
    fn division_and_errors() {
        let a = CycNum::one() - z(5, 1);
        let q = a.inv().unwrap();
        assert!((&a * &q).is_one());
        assert_eq!(CycNum::zero().inv(), Err(CycError::DivisionByZero));
        let err = z(29, 1).try_mul(&z(31, 1)).unwrap_err();
        assert!(matches!(err, CycError::ConductorOverflow(899, _)));
    }

    #[test]
    fn roots_have_order_n_and_annihilate_phi() {
        for n in 1..=84u32 {
            let zeta = z(n, 1);
            assert!(zeta.pow(n as i64).unwrap().is_one(), "ζ_{n}^{n} != 1");
            let phi = cyclotomic_polynomial(n);
            let mut acc = CycNum::zero();
            for (i, &c) in phi.iter().enumerate() {
                acc = acc + zeta.pow(i as i64).unwrap().scale(&rat(c as i64));
            }
            assert!(acc.is_zero(), "Φ_{n}(ζ_{n}) != 0");
        }
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(z(3, 1).to_string(), "z3");
        assert_eq!((-z(4, 1) + CycNum::from_int(2)).to_string(), "2 - z4");
        assert_eq!(CycNum::zero().to_string(), "0");
    }
}
