//! Exact matrix representations and characters of catalog groups.

mod catalog;
mod exterior;

pub use catalog::irrep_catalog;
pub use exterior::{wedge_invariants, WedgeInvariants, WedgeTerm};

use std::sync::Arc;

use num_traits::Signed;
use thiserror::Error;

use crate::cyclotomic::{CycError, CycMatrix, CycNum, Rational};
use crate::groups::{FiniteGroup, GroupError};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum RepError {
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("generator images do not define a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("{0} has no irreducible catalog")]
    OutsideCatalog(String),
    #[error("{0} is not a nonnegative integer")]
    NonIntegral(String),
    #[error("wrong degree: expected {expected}, found {found}")]
    WrongDegree { expected: usize, found: usize },
    #[error("characters belong to different groups")]
    GroupMismatch,
}

/// A representation given on generators and extended to every element.
#[derive(Clone, Debug)]
pub struct Representation {
    group: Arc<FiniteGroup>,
    label: String,
    degree: usize,
    generator_images: Vec<CycMatrix>,
    images: Vec<CycMatrix>,
}

impl Representation {
    /// Extend generator images along the Cayley graph and verify `ρ(gh) = ρ(g)ρ(h)` on all pairs.
    pub fn new(group: Arc<FiniteGroup>, label: impl Into<String>, generator_images: Vec<CycMatrix>) -> Result<Self, RepError> {
        let label = label.into();
        if generator_images.len() != group.generators().len() {
            return Err(RepError::NotHomomorphism(format!("{label}: one image per generator required")));
        }
        let degree = generator_images.first().map_or(1, |m| m.rows());
        if generator_images.iter().any(|m| m.rows() != degree || m.cols() != degree) {
            return Err(RepError::NotHomomorphism(format!("{label}: images must be square of equal size")));
        }
        let mut images: Vec<Option<CycMatrix>> = vec![None; group.order()];
        images[group.identity()] = Some(CycMatrix::identity(degree));
        for (y, edge) in group.bfs_tree() {
            if let Some((x, s)) = edge {
                let m = images[x].as_ref().expect("parent first").try_mul(&generator_images[s])?;
                images[y] = Some(m);
            }
        }
        let images: Vec<CycMatrix> = images.into_iter().map(|m| m.expect("generators generate")).collect();
        for a in group.elements() {
            for b in group.elements() {
                if images[a].try_mul(&images[b])? != images[group.mul(a, b)] {
                    return Err(RepError::NotHomomorphism(format!(
                        "{label}: rho({}) rho({}) != rho(product)",
                        group.element_label(a),
                        group.element_label(b)
                    )));
                }
            }
        }
        Ok(Representation { group, label, degree, generator_images, images })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generator_images(&self) -> &[CycMatrix] {
        &self.generator_images
    }

    pub fn image(&self, g: usize) -> &CycMatrix {
        &self.images[g]
    }

    pub fn character(&self) -> Character {
        let values = self.images.iter().map(|m| m.trace().expect("square")).collect();
        Character { group: self.group.clone(), values }
    }

    pub fn kernel(&self) -> Vec<usize> {
        self.group.elements().filter(|&g| self.images[g].is_identity()).collect()
    }

    pub fn is_faithful(&self) -> bool {
        self.kernel().len() == 1
    }

    pub fn is_special_linear(&self) -> Result<bool, RepError> {
        for m in &self.generator_images {
            if !m.det()?.is_one() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn direct_sum(&self, other: &Representation) -> Result<Representation, RepError> {
        if !Arc::ptr_eq(&self.group, &other.group) {
            return Err(RepError::GroupMismatch);
        }
        let gens = self
            .generator_images
            .iter()
            .zip(&other.generator_images)
            .map(|(a, b)| a.direct_sum(b))
            .collect::<Result<Vec<_>, _>>()?;
        let images = self.images.iter().zip(&other.images).map(|(a, b)| a.direct_sum(b)).collect::<Result<Vec<_>, _>>()?;
        Ok(Representation {
            group: self.group.clone(),
            label: format!("{} + {}", self.label, other.label),
            degree: self.degree + other.degree,
            generator_images: gens,
            images,
        })
    }
}

/// A class function on a group with cyclotomic values.
#[derive(Clone, Debug)]
pub struct Character {
    group: Arc<FiniteGroup>,
    values: Vec<CycNum>,
}

fn to_nonneg_integer(q: &CycNum, what: &str) -> Result<u64, RepError> {
    match q.to_rational() {
        Some(r) if r.is_integer() && !r.is_negative() => {
            Ok(num_traits::ToPrimitive::to_u64(&r.to_integer()).expect("fits in u64"))
        }
        _ => Err(RepError::NonIntegral(format!("{what} = {q}"))),
    }
}

impl Character {
    pub fn new(group: Arc<FiniteGroup>, values: Vec<CycNum>) -> Self {
        assert_eq!(values.len(), group.order(), "one value per element");
        Character { group, values }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn values(&self) -> &[CycNum] {
        &self.values
    }

    pub fn at(&self, g: usize) -> &CycNum {
        &self.values[g]
    }

    pub fn degree(&self) -> &CycNum {
        &self.values[self.group.identity()]
    }

    pub fn is_class_function(&self) -> bool {
        let g = &self.group;
        g.elements().all(|x| g.generators().iter().all(|&s| self.values[g.conjugate(s, x)] == self.values[x]))
    }

    fn check_same(&self, other: &Character) -> Result<(), RepError> {
        if Arc::ptr_eq(&self.group, &other.group) || self.group.order() == other.group.order() && self.values.len() == other.values.len() {
            Ok(())
        } else {
            Err(RepError::GroupMismatch)
        }
    }

    pub fn add(&self, other: &Character) -> Result<Character, RepError> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a.try_add(b)).collect::<Result<_, _>>()?;
        Ok(Character { group: self.group.clone(), values })
    }

    pub fn conj(&self) -> Character {
        Character { group: self.group.clone(), values: self.values.iter().map(|v| v.conj()).collect() }
    }

    /// Character of `V ⊕ V̄`, the first cohomology of a torus whose holomorphic forms carry `χ`.
    pub fn realified(&self) -> Character {
        self.add(&self.conj()).expect("same group")
    }

    /// `g ↦ (χ(g)² − χ(g²))/2`, the character of the exterior square.
    pub fn wedge_square(&self) -> Result<Character, RepError> {
        let half = Rational::new(1.into(), 2.into());
        let g = &self.group;
        let values = g
            .elements()
            .map(|x| {
                let sq = self.values[x].try_mul(&self.values[x])?;
                Ok(sq.try_sub(&self.values[g.mul(x, x)])?.scale(&half))
            })
            .collect::<Result<_, RepError>>()?;
        Ok(Character { group: self.group.clone(), values })
    }

    /// `(1/|G|) Σ χ(g) conj(ψ(g))`.
    pub fn inner(&self, other: &Character) -> Result<CycNum, RepError> {
        self.check_same(other)?;
        let mut acc = CycNum::zero();
        for (a, b) in self.values.iter().zip(&other.values) {
            acc = acc.try_add(&a.try_mul(&b.conj())?)?;
        }
        Ok(acc.scale(&Rational::new(1.into(), (self.group.order() as i64).into())))
    }

    /// Dimension of the invariant subspace, asserted to be a nonnegative integer.
    pub fn invariant_dimension(&self) -> Result<u64, RepError> {
        let mut acc = CycNum::zero();
        for v in &self.values {
            acc = acc.try_add(v)?;
        }
        let avg = acc.scale(&Rational::new(1.into(), (self.group.order() as i64).into()));
        to_nonneg_integer(&avg, "invariant dimension")
    }

    /// Multiplicities against a list of irreducibles, with the reconstruction
    /// `χ = Σ mᵢ χᵢ` asserted.
    pub fn decompose(&self, irreps: &[Representation]) -> Result<Vec<(String, u64)>, RepError> {
        let mut out = Vec::new();
        let mut rebuilt = vec![CycNum::zero(); self.values.len()];
        for rho in irreps {
            let chi = rho.character();
            let m = to_nonneg_integer(&self.inner(&chi)?, &format!("multiplicity of {}", rho.label()))?;
            if m > 0 {
                for (r, v) in rebuilt.iter_mut().zip(chi.values()) {
                    *r = r.try_add(&v.scale(&Rational::from_integer((m as i64).into())))?;
                }
            }
            out.push((rho.label().to_string(), m));
        }
        if rebuilt != self.values {
            return Err(RepError::NonIntegral("character is not a combination of the supplied irreducibles".into()));
        }
        Ok(out)
    }
}

/// Decompose a representation against the group's catalog.
pub fn decompose(rep: &Representation) -> Result<Vec<(String, u64)>, RepError> {
    let irreps = irrep_catalog(rep.group())?;
    rep.character().decompose(&irreps)
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    fn group(name: &str) -> Arc<FiniteGroup> {
        Arc::new(build_group(&name.parse().unwrap()).unwrap())
    }

    fn z(n: u32, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k)
    }

    #[test]
    fn trivial_and_regular() {
        let c2 = group("C2");
        let triv = Representation::new(c2.clone(), "1", vec![CycMatrix::identity(1)]).unwrap();
        assert!(triv.character().values().iter().all(|v| v.is_one()));
        assert!(!triv.is_faithful());
        let reg = Representation::new(c2, "reg", vec![CycMatrix::from_ints(&[vec![0, 1], vec![1, 0]])]).unwrap();
        assert_eq!(reg.character().invariant_dimension().unwrap(), 1);
    }

    #[test]
    fn regular_c3_decomposes_once_each() {
        let c3 = group("C3");
        let p = CycMatrix::from_ints(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]);
        let reg = Representation::new(c3, "reg", vec![p]).unwrap();
        let d = decompose(&reg).unwrap();
        assert_eq!(d.iter().map(|x| x.1).collect::<Vec<_>>(), vec![1, 1, 1]);
    }

    #[test]
    fn d8_characters() {
        let d8 = group("D8");
        let cat = irrep_catalog(&d8).unwrap();
        let rho21 = cat.iter().find(|r| r.label() == "rho2,1").unwrap();
        let chi = rho21.character();
        let a = d8.element("a").unwrap();
        let a2 = d8.element("a^2").unwrap();
        assert!(chi.at(a).is_zero());
        assert_eq!(*chi.at(a2), CycNum::from_int(-2));
        let rho11 = cat.iter().find(|r| r.label() == "rho1,1").unwrap();
        assert!(!rho11.is_special_linear().unwrap());
    }

    #[test]
    fn non_homomorphism_rejected() {
        let c2 = group("C2");
        let bad = Representation::new(c2, "bad", vec![CycMatrix::scalar(1, z(3, 1))]);
        assert!(matches!(bad, Err(RepError::NotHomomorphism(_))));
    }

    #[test]
    fn derived_character_degrees() {
        // g3 acting by ζ3 on a 3-dimensional space
        let c3 = group("C3");
        let rep = Representation::new(c3, "g3", vec![CycMatrix::scalar(3, z(3, 1))]).unwrap();
        let h1 = rep.character().realified();
        assert_eq!(*h1.degree(), CycNum::from_int(6));
        let w = h1.wedge_square().unwrap();
        assert_eq!(*w.degree(), CycNum::from_int(15));
        assert_eq!(w.invariant_dimension().unwrap(), 9);
        let c7 = group("C7");
        let rep = Representation::new(c7, "g7", vec![CycMatrix::diag(vec![z(7, 1), z(7, 2), z(7, 4)])]).unwrap();
        assert_eq!(rep.character().realified().wedge_square().unwrap().invariant_dimension().unwrap(), 3);
    }
}
