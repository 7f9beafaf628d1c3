//! Complex tori as lattices with exact complex structure, and finite groups of
//! affine automorphisms acting on them.

mod affine;
pub mod intmat;
mod model;

pub use affine::{AffineAut, FixedKind, FixedPointSet};
pub use intmat::{IntMatrix, Smith};
pub use model::{EllipticFactor, ModelKind, Period, TorusModel};

use std::sync::Arc;

use num_traits::ToPrimitive;
use thiserror::Error;

use crate::cyclotomic::{CycError, CycMatrix, CycNum, Rational};
use crate::groups::{closure, FiniteGroup, GroupError, MAX_ORDER};
use crate::reps::{RepError, Representation};

/// Largest order searched for an affine automorphism.
pub const ORDER_BOUND: u32 = 24;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum TorusError {
    #[error(transparent)]
    Cyc(#[from] CycError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("invalid torus model: {0}")]
    InvalidModel(String),
    #[error("linear part {0} is not holomorphic")]
    NotHolomorphic(String),
    #[error("linear part {0} is not unimodular")]
    NotUnimodular(String),
    #[error("no finite order up to {0}")]
    OrderBound(u32),
    #[error("generator {generator}: {reason}")]
    Generator { generator: String, reason: String },
    #[error("relation fails: {0}")]
    Relation(String),
    #[error("action is not faithful: {0} acts trivially")]
    NotFaithful(String),
    #[error("translation subgroup is not normal: {0}")]
    NotNormal(String),
    #[error("kernel is {0}")]
    DegenerateKernel(&'static str),
    #[error("generator {0} does not preserve the kernel subtorus")]
    DoesNotDescend(String),
}

/// A finite group acting faithfully on a torus by affine automorphisms.
#[derive(Clone, Debug)]
pub struct ActionSpec {
    model: TorusModel,
    group: Arc<FiniteGroup>,
    generators: Vec<AffineAut>,
    images: Vec<AffineAut>,
}

impl ActionSpec {
    /// Assign one automorphism to each generator of `group`; the assignment must
    /// be admissible for the model, satisfy every relation and be faithful.
    pub fn new(model: TorusModel, group: Arc<FiniteGroup>, generators: Vec<AffineAut>) -> Result<Self, TorusError> {
        if generators.len() != group.generators().len() {
            return Err(TorusError::Dimension(format!(
                "{} generator images for {} generators",
                generators.len(),
                group.generators().len()
            )));
        }
        for (name, f) in group.generator_names().iter().zip(&generators) {
            if f.rank() != model.rank() {
                return Err(TorusError::Generator { generator: name.clone(), reason: "wrong lattice rank".into() });
            }
            model
                .check_linear(f.linear())
                .map_err(|e| TorusError::Generator { generator: name.clone(), reason: e.to_string() })?;
        }
        let mut images: Vec<Option<AffineAut>> = vec![None; group.order()];
        images[group.identity()] = Some(AffineAut::identity(model.rank()));
        for (y, edge) in group.bfs_tree() {
            if let Some((x, s)) = edge {
                images[y] = Some(images[x].as_ref().expect("parent first").compose(&generators[s])?);
            }
        }
        let images: Vec<AffineAut> = images.into_iter().map(|f| f.expect("generators generate")).collect();
        for a in group.elements() {
            for b in group.elements() {
                if images[a].compose(&images[b])? != images[group.mul(a, b)] {
                    return Err(TorusError::Relation(format!(
                        "image of {} times image of {} differs from image of the product",
                        group.element_label(a),
                        group.element_label(b)
                    )));
                }
            }
        }
        for g in group.elements() {
            if g != group.identity() && images[g].is_identity() {
                return Err(TorusError::NotFaithful(group.element_label(g)));
            }
        }
        Ok(ActionSpec { model, group, generators, images })
    }

    /// The group generated by the given automorphisms, built by closure.
    pub fn generated(model: TorusModel, names: &[&str], generators: Vec<AffineAut>) -> Result<Self, TorusError> {
        let c = closure(
            &generators,
            AffineAut::identity(model.rank()),
            |f, g| f.compose(g).expect("same rank"),
            |f| f.clone(),
            MAX_ORDER,
        )?;
        let group = Arc::new(FiniteGroup::from_closure(c, names)?);
        Self::new(model, group, generators)
    }

    /// Re-express the same action over another presentation of the group, matching generators by position.
    pub fn over_group(&self, group: Arc<FiniteGroup>, generators: Vec<AffineAut>) -> Result<Self, TorusError> {
        Self::new(self.model.clone(), group, generators)
    }

    pub fn model(&self) -> &TorusModel {
        &self.model
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn generators(&self) -> &[AffineAut] {
        &self.generators
    }

    pub fn image(&self, g: usize) -> &AffineAut {
        &self.images[g]
    }

    pub fn element(&self, word: &str) -> Result<&AffineAut, TorusError> {
        Ok(&self.images[self.group.element(word)?])
    }

    pub fn holomorphic_matrix(&self, g: usize) -> Result<CycMatrix, TorusError> {
        self.model.holomorphic_matrix(self.images[g].linear())
    }

    /// The representation on holomorphic coordinates, `g ↦ R_g` with `ΦM_g = R_gΦ`.
    pub fn holomorphic_representation(&self) -> Result<Representation, TorusError> {
        let gens = self.generators.iter().map(|f| self.model.holomorphic_matrix(f.linear())).collect::<Result<Vec<_>, _>>()?;
        Ok(Representation::new(self.group.clone(), "holomorphic", gens)?)
    }

    /// Holomorphic matrices of all elements, in element order.
    pub fn holomorphic_images(&self) -> Result<Vec<CycMatrix>, TorusError> {
        self.group.elements().map(|g| self.holomorphic_matrix(g)).collect()
    }

    /// Pass to `A/T` for a finite group `T` of translations normalized by the action.
    ///
    /// The new lattice `Z²ᵈ + Σ Zτ` gets a Hermite basis `B`; linear parts become
    /// `B⁻¹MB` and translations `B⁻¹t`. The group is rebuilt by closure, so it
    /// becomes the quotient of the old group by the elements acting as translations in `T`.
    pub fn quotient_by_translations(&self, taus: &[Vec<Rational>]) -> Result<ActionSpec, TorusError> {
        let n = self.model.rank();
        if taus.iter().any(|t| t.len() != n) {
            return Err(TorusError::Dimension("translation of wrong length".into()));
        }
        let b = enlarged_lattice_basis(n, taus)?;
        let b_inv = b.inverse()?;
        let conj = |m: &CycMatrix| -> Result<CycMatrix, CycError> { b_inv.try_mul(m)?.try_mul(&b) };
        let mut gens = Vec::with_capacity(self.generators.len());
        for (name, f) in self.group.generator_names().iter().zip(&self.generators) {
            let m = IntMatrix::from_cyc(&conj(&f.linear().to_cyc())?)
                .ok_or_else(|| TorusError::NotNormal(format!("{name} does not preserve the enlarged lattice")))?;
            let t = mat_vec(&b_inv, f.translation())?;
            gens.push(AffineAut::new(m, t)?);
        }
        let model = self.model.extended(taus)?;
        let names: Vec<&str> = self.group.generator_names().iter().map(|s| s.as_str()).collect();
        ActionSpec::generated(model, &names, gens)
    }

    /// The connected kernel of an endomorphism and the induced action on the quotient torus.
    pub fn connected_kernel_subtorus(&self, endo: &IntMatrix) -> Result<KernelDescent, TorusError> {
        let n = self.model.rank();
        self.model.holomorphic_matrix(endo)?;
        let null = endo.to_cyc().nullspace()?;
        let r = null.len();
        if r == 0 {
            return Err(TorusError::DegenerateKernel("trivial"));
        }
        if r == n {
            return Err(TorusError::DegenerateKernel("the whole torus"));
        }
        let cols: Vec<Vec<i64>> = null.iter().map(|v| integral_multiple(v)).collect();
        let s = IntMatrix::from_columns(&cols).smith();
        let w = s.u.inverse_unimodular().expect("Smith transform is unimodular");
        let w_inv = s.u.clone();
        let wc = w.to_cyc();
        let split = |m: &CycMatrix| -> Result<Option<(CycMatrix, CycMatrix)>, CycError> {
            let c = s.u.to_cyc().try_mul(m)?.try_mul(&wc)?;
            let lower_left = (r..n).all(|i| (0..r).all(|j| c.get(i, j).is_zero()));
            if !lower_left {
                return Ok(None);
            }
            Ok(Some((block(&c, 0..r, 0..r)?, block(&c, r..n, r..n)?)))
        };
        let mut sub_linear = Vec::new();
        let mut descended = Vec::new();
        for (name, f) in self.group.generator_names().iter().zip(&self.generators) {
            let m = w_inv.mul(f.linear()).mul(&w);
            if (r..n).any(|i| (0..r).any(|j| m.get(i, j) != 0)) {
                return Err(TorusError::DoesNotDescend(name.clone()));
            }
            sub_linear.push(m.submatrix(0..r, 0..r));
            let t = w_inv.mul_vec_rational(f.translation());
            descended.push(AffineAut::new(m.submatrix(r..n, r..n), t[r..].to_vec())?);
        }
        let phi_k = self.model.phi().try_mul(&block(&wc, 0..n, 0..r)?)?;
        let (rr, piv) = phi_k.rref()?;
        let sub_phi = block(&rr, 0..piv.len(), 0..r)?;
        let psi = CycMatrix::from_rows(phi_k.transpose().nullspace()?)?;
        let quot_phi = psi.try_mul(self.model.phi())?.try_mul(&block(&wc, 0..n, r..n)?)?;
        let mut sub_comm = Vec::new();
        let mut quot_comm = Vec::new();
        for x in self.model.commutant() {
            if let Some((a, b)) = split(x)? {
                sub_comm.push(a);
                quot_comm.push(b);
            }
        }
        let sub = TorusModel::derived(format!("{}/kernel", self.model.name()), sub_phi, sub_comm);
        let quotient = TorusModel::derived(format!("{}/quotient", self.model.name()), quot_phi, quot_comm);
        Ok(KernelDescent { kernel_rank: r, basis: w, sub, quotient, sub_linear, descended })
    }

}

impl TorusModel {
    /// The torus `Cᵈ/(Λ + Σ Zτ)` in the Hermite basis of the enlarged lattice.
    pub fn extended(&self, taus: &[Vec<Rational>]) -> Result<TorusModel, TorusError> {
        let n = self.rank();
        if taus.iter().any(|t| t.len() != n) {
            return Err(TorusError::Dimension("translation of wrong length".into()));
        }
        let b = enlarged_lattice_basis(n, taus)?;
        let b_inv = b.inverse()?;
        let phi = self.phi().try_mul(&b)?;
        let commutant = self.commutant().iter().map(|m| b_inv.try_mul(m)?.try_mul(&b)).collect::<Result<Vec<_>, CycError>>()?;
        Ok(TorusModel::derived(format!("{}/translations", self.name()), phi, commutant))
    }
}

/// The result of splitting off a connected kernel subtorus `E ⊂ A`.
#[derive(Clone, Debug)]
pub struct KernelDescent {
    /// Real rank of the kernel lattice.
    pub kernel_rank: usize,
    /// Unimodular basis whose first `kernel_rank` columns span the saturated kernel.
    pub basis: IntMatrix,
    pub sub: TorusModel,
    pub quotient: TorusModel,
    /// Linear parts of the generators restricted to the kernel.
    pub sub_linear: Vec<IntMatrix>,
    /// Generators induced on `A/E`.
    pub descended: Vec<AffineAut>,
}

/// Hermite basis (as rational columns in old coordinates) of `Z^n + Σ Zτ`.
pub fn enlarged_lattice_basis(n: usize, taus: &[Vec<Rational>]) -> Result<CycMatrix, TorusError> {
    let den = taus.iter().fold(1i64, |acc, t| num_integer::lcm(acc, intmat::common_denominator(t)));
    let mut cols: Vec<Vec<i64>> = (0..n).map(|i| (0..n).map(|j| if i == j { den } else { 0 }).collect()).collect();
    for t in taus {
        cols.push(t.iter().map(|x| (x * Rational::from_integer(den.into())).to_integer().to_i64().expect("small")).collect());
    }
    let h = IntMatrix::from_columns(&cols).column_hermite();
    Ok(h.to_cyc().scale(&CycNum::from_rational(Rational::new(1.into(), den.into())))?)
}

fn block(m: &CycMatrix, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Result<CycMatrix, CycError> {
    CycMatrix::from_rows(rows.map(|i| cols.clone().map(|j| m.get(i, j).clone()).collect()).collect())
}

fn mat_vec(m: &CycMatrix, v: &[Rational]) -> Result<Vec<Rational>, TorusError> {
    let col = m.try_mul(&intmat::rational_vector_to_cyc(v))?;
    (0..col.rows())
        .map(|i| col.get(i, 0).to_rational().ok_or_else(|| TorusError::Dimension("translation is not rational".into())))
        .collect()
}

/// Clear denominators of a rational vector.
fn integral_multiple(v: &[CycNum]) -> Vec<i64> {
    let q: Vec<Rational> = v.iter().map(|x| x.to_rational().expect("rational kernel vector")).collect();
    let den = intmat::common_denominator(&q);
    q.iter().map(|x| (x * Rational::from_integer(den.into())).to_integer().to_i64().expect("small")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclotomic::ratio;
    use crate::groups::build_group;

    fn signs(s: &[i64]) -> IntMatrix {
        IntMatrix::block_diag(&s.iter().map(|&x| IntMatrix::scalar(2, x)).collect::<Vec<_>>())
    }

    fn q(v: &[(i64, i64)]) -> Vec<Rational> {
        v.iter().map(|&(a, b)| ratio(a, b)).collect()
    }

    fn igusa() -> ActionSpec {
        let model = TorusModel::preset("E1xE2xE3").unwrap();
        let a = AffineAut::new(signs(&[1, -1, -1]), q(&[(1, 2), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)])).unwrap();
        let b = AffineAut::new(signs(&[-1, 1, -1]), q(&[(0, 1), (0, 1), (1, 2), (0, 1), (1, 2), (0, 1)])).unwrap();
        ActionSpec::generated(model, &["a", "b"], vec![a, b]).unwrap()
    }

    #[test]
    fn igusa_group_is_klein_four() {
        let s = igusa();
        assert_eq!(s.group().order(), 4);
        assert!(s.group().is_abelian());
        let (a, b) = (&s.generators()[0], &s.generators()[1]);
        assert_eq!(a.compose(b).unwrap(), b.compose(a).unwrap());
        for g in s.group().elements().filter(|&g| g != s.group().identity()) {
            assert!(s.image(g).fixed_points().is_empty());
        }
    }

    #[test]
    fn catalog_group_relations_checked() {
        let model = TorusModel::preset("E1xE2xE3").unwrap();
        let c2 = Arc::new(build_group(&"C2".parse().unwrap()).unwrap());
        let bad = AffineAut::new(signs(&[1, -1, -1]), q(&[(1, 3), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)])).unwrap();
        assert!(matches!(ActionSpec::new(model.clone(), c2.clone(), vec![bad]), Err(TorusError::Relation(_))));
        let id = AffineAut::identity(6);
        assert!(matches!(ActionSpec::new(model, c2, vec![id]), Err(TorusError::NotFaithful(_))));
    }

    #[test]
    fn quotient_by_two_torsion_point() {
        let model = TorusModel::preset("E3").unwrap();
        let minus = AffineAut::linear_only(IntMatrix::scalar(6, -1));
        let s = ActionSpec::generated(model, &["m"], vec![minus]).unwrap();
        let tau = q(&[(1, 2), (0, 1), (1, 2), (0, 1), (0, 1), (0, 1)]);
        let t = s.quotient_by_translations(&[tau]).unwrap();
        assert_eq!(t.group().order(), 2);
        let b = enlarged_lattice_basis(6, &[q(&[(1, 2), (0, 1), (1, 2), (0, 1), (0, 1), (0, 1)])]).unwrap();
        assert_eq!(b.det().unwrap(), CycNum::from_rational(ratio(1, 2)));
        assert_eq!(t.generators()[0].linear(), &IntMatrix::scalar(6, -1));
    }

    #[test]
    fn igusa_kernel_is_first_factor() {
        let s = igusa();
        let a0 = s.generators()[0].linear().sub(&IntMatrix::identity(6));
        let k = s.connected_kernel_subtorus(&a0).unwrap();
        assert_eq!(k.kernel_rank, 2);
        assert_eq!(k.quotient.dim(), 2);
        assert_eq!(k.sub.dim(), 1);
        assert_eq!(k.descended[0].linear(), &IntMatrix::scalar(4, -1));
        assert!(matches!(s.connected_kernel_subtorus(&IntMatrix::zeros(6, 6)), Err(TorusError::DegenerateKernel(_))));
    }
}
