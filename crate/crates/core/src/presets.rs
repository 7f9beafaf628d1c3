//! Named torus actions: the Igusa examples, the Calabi and Klein pairs and the
//! two extensions of the Calabi pair.

use std::sync::Arc;

use crate::cyclotomic::{cyclotomic_polynomial, ratio, CycMatrix, Rational};
use crate::groups::{build_group, GroupSpec};
use crate::torus::{ActionSpec, AffineAut, IntMatrix, TorusError, TorusModel};

pub const TYPE_A_PRESETS: [&str; 6] = ["igusa", "refined-igusa", "calabi", "klein", "x31", "x32"];

fn group(spec: &str) -> Result<Arc<crate::groups::FiniteGroup>, TorusError> {
    let spec: GroupSpec = spec.parse()?;
    Ok(Arc::new(build_group(&spec)?))
}

fn signs(s: &[i64]) -> IntMatrix {
    IntMatrix::block_diag(&s.iter().map(|&x| IntMatrix::scalar(2, x)).collect::<Vec<_>>())
}

fn q(v: &[(i64, i64)]) -> Vec<Rational> {
    v.iter().map(|&(a, b)| ratio(a, b)).collect()
}

/// Multiplication by `ζ₃` on `Z + Zζ₃` in the basis `(1, ζ₃)`.
pub fn omega_block() -> IntMatrix {
    IntMatrix::from_rows(&[vec![0, -1], vec![1, -1]])
}

/// `diag(ζ₃^e₁, ζ₃^e₂, ζ₃^e₃)` on `E_{ζ₃}³`.
pub fn omega_diag(e: [u64; 3]) -> IntMatrix {
    IntMatrix::block_diag(&e.map(|k| omega_block().pow(k % 3)))
}

/// `(z₁, z₂, z₃) ↦ (z₃, z₁, z₂)` on a product of three isomorphic curves.
pub fn cyclic_shift() -> IntMatrix {
    IntMatrix::from_rows(&[vec![0, 0, 1], vec![1, 0, 0], vec![0, 1, 0]]).kron(&IntMatrix::identity(2))
}

/// Igusa's `C₂⊕C₂` action on `E₁×E₂×E₃` with 2-torsion translations.
pub fn igusa() -> Result<ActionSpec, TorusError> {
    igusa_with(ratio(1, 2))
}

/// The Igusa action with the first coordinate of `τ₁` replaced.
pub fn igusa_with(tau1: Rational) -> Result<ActionSpec, TorusError> {
    let mut ta = q(&[(0, 1); 6]);
    ta[0] = tau1;
    let a = AffineAut::new(signs(&[1, -1, -1]), ta)?;
    let b = AffineAut::new(signs(&[-1, 1, -1]), q(&[(0, 1), (0, 1), (1, 2), (0, 1), (0, 1), (1, 2)]))?;
    ActionSpec::new(TorusModel::preset("E1xE2xE3")?, group("C2^2")?, vec![a, b])
}

/// The order-16 action `⟨ã, b̃⟩` on `E₁×E₂×E₂` before dividing by `t_τ`.
pub fn refined_igusa_cover() -> Result<ActionSpec, TorusError> {
    let rot = IntMatrix::from_rows(&[vec![0, -1], vec![1, 0]]).kron(&IntMatrix::identity(2));
    let a_lin = IntMatrix::block_diag(&[IntMatrix::identity(2), rot]);
    let a = AffineAut::new(a_lin, q(&[(1, 4), (0, 1), (0, 1), (0, 1), (0, 1), (0, 1)]))?;
    let b = AffineAut::new(signs(&[-1, 1, -1]), q(&[(0, 1), (0, 1), (1, 2), (0, 1), (0, 1), (1, 2)]))?;
    ActionSpec::generated(TorusModel::preset("E1xE2xE2")?, &["a", "b"], vec![a, b])
}

/// `τ = (0, τ₂+τ₃, τ₂+τ₃)`, the translation `(ãb̃)²`.
pub fn refined_igusa_tau() -> Vec<Rational> {
    q(&[(0, 1), (0, 1), (1, 2), (1, 2), (1, 2), (1, 2)])
}

/// The `D₈` action on `(E₁×E₂×E₂)/⟨t_τ⟩`.
pub fn refined_igusa() -> Result<ActionSpec, TorusError> {
    let quotient = refined_igusa_cover()?.quotient_by_translations(&[refined_igusa_tau()])?;
    let gens = quotient.generators().to_vec();
    quotient.over_group(group("D8")?, gens)
}

fn g3() -> AffineAut {
    AffineAut::linear_only(omega_diag([1, 1, 1]))
}

/// `g₃ = ζ₃` on `E_{ζ₃}³`.
pub fn calabi() -> Result<ActionSpec, TorusError> {
    ActionSpec::new(TorusModel::preset("E3_zeta3")?, group("C3")?, vec![g3()])
}

/// `g₇ = ζ₇` on `Z[ζ₇]` with holomorphic type `{1, 2, 4}`.
pub fn klein() -> Result<ActionSpec, TorusError> {
    let g7 = IntMatrix::from_cyc(&CycMatrix::companion(&cyclotomic_polynomial(7))).expect("integer companion matrix");
    ActionSpec::new(TorusModel::preset("Z_zeta7")?, group("C7")?, vec![AffineAut::linear_only(g7)])
}

fn point(p: [[i64; 2]; 3]) -> Vec<Rational> {
    p.iter().flat_map(|c| c.iter().map(|&x| ratio(x, 3))).collect()
}

/// `⟨g₃, h⟩ ≅ C₃²` with `h = diag(1, ζ₃, ζ₃²)` composed with a `ζ₃`-fixed translation in every factor.
pub fn x31() -> Result<ActionSpec, TorusError> {
    let h = AffineAut::new(omega_diag([0, 1, 2]), point([[2, 1], [2, 1], [2, 1]]))?;
    ActionSpec::new(TorusModel::preset("E3_zeta3")?, group("C3^2")?, vec![g3(), h])
}

/// The lattice `Z[ζ₃]³ + Z[ζ₃]·(1,1,1)/(1 − ζ₃)` with the linear Heisenberg group
/// `⟨diag(1, ζ₃, ζ₃²), cyclic shift⟩`. The quotient torus is again `E_{ζ₃}³`.
pub fn x32_linear() -> Result<ActionSpec, TorusError> {
    let h = AffineAut::linear_only(omega_diag([0, 1, 2]));
    let k = AffineAut::linear_only(cyclic_shift());
    let linear = ActionSpec::generated(TorusModel::preset("E3_zeta3")?, &["x", "y"], vec![h, k])?;
    linear.quotient_by_translations(&[point([[2, 1], [2, 1], [2, 1]])])
}

/// Translation parts (in thirds, in the basis of [`x32_linear`]) of `h` and `k`.
pub const X32_H_TRANSLATION: [[i64; 2]; 3] = [[0, 1], [0, 1], [0, 1]];
pub const X32_K_TRANSLATION: [[i64; 2]; 3] = [[0, 0], [0, 0], [1, 2]];

/// The Heisenberg group of order 27 generated by `h` and `k`, with `[h, k]` acting as `ζ₃^±1`.
pub fn x32() -> Result<ActionSpec, TorusError> {
    let linear = x32_linear()?;
    let h = AffineAut::new(linear.generators()[0].linear().clone(), point(X32_H_TRANSLATION))?;
    let k = AffineAut::new(linear.generators()[1].linear().clone(), point(X32_K_TRANSLATION))?;
    ActionSpec::new(linear.model().clone(), group("Heis27")?, vec![h, k])
}

/// Base lattice preset and extra lattice vectors for presets living on a quotient torus.
pub fn lattice_extension(name: &str) -> Option<(&'static str, Vec<Vec<Rational>>)> {
    match name {
        "refined-igusa" => Some(("E1xE2xE2", vec![refined_igusa_tau()])),
        "x32" => Some(("E3_zeta3", vec![point([[2, 1], [2, 1], [2, 1]])])),
        _ => None,
    }
}

pub fn type_a_preset(name: &str) -> Result<ActionSpec, TorusError> {
    match name {
        "igusa" => igusa(),
        "refined-igusa" => refined_igusa(),
        "calabi" => calabi(),
        "klein" => klein(),
        "x31" => x31(),
        "x32" => x32(),
        _ => Err(TorusError::InvalidModel(format!("unknown preset {name}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::torus::FixedKind;

    #[test]
    fn all_presets_build() {
        for name in TYPE_A_PRESETS {
            let s = type_a_preset(name).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert!(s.group().order() > 1);
        }
    }

    #[test]
    fn refined_igusa_cover_relations() {
        let c = refined_igusa_cover().unwrap();
        assert_eq!(c.group().order(), 16);
        let (a, b) = (&c.generators()[0], &c.generators()[1]);
        assert_eq!(a.order().unwrap(), 4);
        assert_eq!(b.order().unwrap(), 2);
        let abab = a.compose(b).unwrap().compose(a).unwrap().compose(b).unwrap();
        assert_eq!(abab, AffineAut::translation_by(refined_igusa_tau()));
        let t = AffineAut::translation_by(refined_igusa_tau());
        assert_eq!(a.compose(&t).unwrap(), t.compose(a).unwrap());
        assert_eq!(b.compose(&t).unwrap(), t.compose(b).unwrap());
    }

    #[test]
    fn refined_igusa_is_d8_and_pushes_tau_to_identity() {
        let s = refined_igusa().unwrap();
        assert_eq!(s.group().order(), 8);
        assert_eq!(s.generators()[0].order().unwrap(), 4);
        let lifted = refined_igusa_cover().unwrap().quotient_by_translations(&[refined_igusa_tau()]).unwrap();
        assert_eq!(lifted.group().order(), 8);
    }

    fn free_outside_scalars(s: &ActionSpec) {
        for g in s.group().elements() {
            let r = s.holomorphic_matrix(g).unwrap();
            let scalar = r == CycMatrix::scalar(3, r.get(0, 0).clone());
            assert_eq!(scalar, !s.image(g).fixed_points().is_empty() || g == s.group().identity(), "{}", s.group().element_label(g));
        }
    }

    #[test]
    fn calabi_extensions_act_freely_off_the_centre() {
        let s = x31().unwrap();
        assert_eq!(s.group().order(), 9);
        free_outside_scalars(&s);
        let s = x32().unwrap();
        assert_eq!(s.group().order(), 27);
        assert!(!s.group().is_abelian());
        free_outside_scalars(&s);
    }

    #[test]
    fn calabi_fixed_points() {
        let s = calabi().unwrap();
        let f = s.generators()[0].fixed_points();
        assert_eq!(f.kind, FixedKind::Isolated(27));
        assert_eq!(s.generators()[0].lefschetz_number(), 27);
    }
}
