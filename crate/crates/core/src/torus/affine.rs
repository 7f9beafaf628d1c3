use std::fmt;

use num_traits::{ToPrimitive, Zero};

use super::intmat::frac;
use super::{IntMatrix, TorusError, ORDER_BOUND};
use crate::cyclotomic::Rational;

/// `x ↦ Mx + t` on `R²ᵈ/Z²ᵈ`, with `t` kept reduced into `[0, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineAut {
    linear: IntMatrix,
    translation: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FixedKind {
    Empty,
    Isolated(u64),
    PositiveDimensional,
}

#[derive(Clone, Debug)]
pub struct FixedPointSet {
    pub kind: FixedKind,
    /// Every fixed point when isolated (as reduced rational coordinates), else empty.
    pub points: Vec<Vec<Rational>>,
}

impl FixedPointSet {
    pub fn is_empty(&self) -> bool {
        self.kind == FixedKind::Empty
    }

    pub fn count(&self) -> Option<u64> {
        match self.kind {
            FixedKind::Empty => Some(0),
            FixedKind::Isolated(n) => Some(n),
            FixedKind::PositiveDimensional => None,
        }
    }
}

pub(crate) fn reduce(v: &[Rational]) -> Vec<Rational> {
    v.iter().map(frac).collect()
}

impl AffineAut {
    pub fn new(linear: IntMatrix, translation: Vec<Rational>) -> Result<Self, TorusError> {
        if linear.rows() != linear.cols() || linear.rows() != translation.len() {
            return Err(TorusError::Dimension(format!(
                "{}x{} linear part with {} translation entries",
                linear.rows(),
                linear.cols(),
                translation.len()
            )));
        }
        Ok(AffineAut { translation: reduce(&translation), linear })
    }

    pub fn linear_only(linear: IntMatrix) -> Self {
        let n = linear.rows();
        AffineAut { linear, translation: vec![Rational::zero(); n] }
    }

    pub fn translation_by(t: Vec<Rational>) -> Self {
        AffineAut { linear: IntMatrix::identity(t.len()), translation: reduce(&t) }
    }

    pub fn identity(n: usize) -> Self {
        Self::linear_only(IntMatrix::identity(n))
    }

    pub fn linear(&self) -> &IntMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &[Rational] {
        &self.translation
    }

    pub fn rank(&self) -> usize {
        self.translation.len()
    }

    pub fn is_identity(&self) -> bool {
        self.linear.is_identity() && self.translation.iter().all(|t| t.is_zero())
    }

    pub fn is_translation(&self) -> bool {
        self.linear.is_identity()
    }

    pub fn apply(&self, x: &[Rational]) -> Vec<Rational> {
        let mx = self.linear.mul_vec_rational(x);
        reduce(&mx.iter().zip(&self.translation).map(|(a, b)| a + b).collect::<Vec<_>>())
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &AffineAut) -> Result<AffineAut, TorusError> {
        if self.rank() != other.rank() {
            return Err(TorusError::Dimension("composing automorphisms of different tori".into()));
        }
        let t: Vec<Rational> =
            self.linear.mul_vec_rational(&other.translation).iter().zip(&self.translation).map(|(a, b)| a + b).collect();
        Ok(AffineAut { linear: self.linear.mul(&other.linear), translation: reduce(&t) })
    }

    pub fn inverse(&self) -> Result<AffineAut, TorusError> {
        let inv = self.linear.inverse_unimodular().ok_or_else(|| TorusError::NotUnimodular(self.linear.to_string()))?;
        let t: Vec<Rational> = inv.mul_vec_rational(&self.translation).into_iter().map(|x| -x).collect();
        Ok(AffineAut { linear: inv, translation: reduce(&t) })
    }

    pub fn pow(&self, e: i64) -> Result<AffineAut, TorusError> {
        let base = if e < 0 { self.inverse()? } else { self.clone() };
        let mut out = AffineAut::identity(self.rank());
        for _ in 0..e.unsigned_abs() {
            out = out.compose(&base)?;
        }
        Ok(out)
    }

    /// Least `n ≥ 1` with `fⁿ = id`, searched up to the order bound.
    pub fn order(&self) -> Result<u32, TorusError> {
        let mut p = self.clone();
        for n in 1..=ORDER_BOUND {
            if p.is_identity() {
                return Ok(n);
            }
            p = p.compose(self)?;
        }
        Err(TorusError::OrderBound(ORDER_BOUND))
    }

    /// `det(I − M)`.
    pub fn lefschetz_number(&self) -> i64 {
        IntMatrix::identity(self.rank()).sub(&self.linear).det()
    }

    /// Solve `(I − M)x ≡ t (mod Z²ᵈ)` through the Smith form of `I − M`.
    pub fn fixed_points(&self) -> FixedPointSet {
        let n = self.rank();
        let a = IntMatrix::identity(n).sub(&self.linear);
        let s = a.smith();
        let c = s.u.mul_vec_rational(&self.translation);
        let mut choices: Vec<Vec<Rational>> = Vec::with_capacity(n);
        let mut degenerate = false;
        for i in 0..n {
            let d = s.diag[i];
            if d == 0 {
                if !c[i].is_integer() {
                    return FixedPointSet { kind: FixedKind::Empty, points: Vec::new() };
                }
                degenerate = true;
                choices.push(vec![Rational::zero()]);
            } else {
                let den = Rational::from_integer(d.into());
                choices.push((0..d).map(|k| (&c[i] + Rational::from_integer(k.into())) / &den).collect());
            }
        }
        if degenerate {
            return FixedPointSet { kind: FixedKind::PositiveDimensional, points: Vec::new() };
        }
        let count: u64 = s.diag.iter().map(|d| d.unsigned_abs()).product();
        let mut points = Vec::with_capacity(count.to_usize().unwrap_or(0));
        let mut idx = vec![0usize; n];
        loop {
            let y: Vec<Rational> = idx.iter().zip(&choices).map(|(&k, c)| c[k].clone()).collect();
            points.push(reduce(&s.v.mul_vec_rational(&y)));
            let mut i = 0;
            loop {
                if i == n {
                    points.sort();
                    return FixedPointSet { kind: FixedKind::Isolated(count), points };
                }
                idx[i] += 1;
                if idx[i] < choices[i].len() {
                    break;
                }
                idx[i] = 0;
                i += 1;
            }
        }
    }
}

impl fmt::Display for AffineAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t: Vec<String> = self.translation.iter().map(|x| x.to_string()).collect();
        write!(f, "({}, [{}])", self.linear, t.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::ratio;

    fn half() -> Rational {
        ratio(1, 2)
    }

    #[test]
    fn translations_compose() {
        let t = AffineAut::translation_by(vec![half(), Rational::zero()]);
        assert!(t.compose(&t).unwrap().is_identity());
        assert_eq!(t.order().unwrap(), 2);
    }

    #[test]
    fn minus_one_has_sixty_four_fixed_points() {
        let f = AffineAut::linear_only(IntMatrix::scalar(6, -1));
        assert_eq!(f.lefschetz_number(), 64);
        let fp = f.fixed_points();
        assert_eq!(fp.kind, FixedKind::Isolated(64));
        assert_eq!(fp.points.len(), 64);
        assert!(fp.points.iter().all(|p| f.apply(p) == *p));
    }

    #[test]
    fn identity_is_positive_dimensional() {
        assert_eq!(AffineAut::identity(4).fixed_points().kind, FixedKind::PositiveDimensional);
        let t = AffineAut::translation_by(vec![half(), Rational::zero()]);
        assert!(t.fixed_points().is_empty());
    }

    #[test]
    fn inverse_and_powers() {
        let m = IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]]);
        let f = AffineAut::new(m, vec![ratio(1, 3), ratio(2, 3)]).unwrap();
        let g = f.inverse().unwrap();
        assert!(f.compose(&g).unwrap().is_identity());
        assert_eq!(f.pow(-2).unwrap(), f);
        assert_eq!(f.order().unwrap(), 3);
    }
}
