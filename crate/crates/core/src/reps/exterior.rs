use std::fmt;

use super::RepError;
use crate::cyclotomic::{CycMatrix, CycNum, Rational};

/// One coefficient times `e_left ∧ e_right` in the basis `dz_1..dz_d, dz̄_1..dz̄_d`.
#[derive(Clone, Debug, PartialEq)]
pub struct WedgeTerm {
    pub coeff: CycNum,
    pub left: usize,
    pub right: usize,
}

/// The invariant subspace of `Λ²(V ⊕ V̄)` found by an explicit averaging projector.
#[derive(Clone, Debug)]
pub struct WedgeInvariants {
    pub dim: usize,
    pub complex_dim: usize,
    pub basis: Vec<Vec<WedgeTerm>>,
}

fn one_form(i: usize, d: usize) -> String {
    if i < d {
        format!("dz{}", i + 1)
    } else {
        format!("dz̄{}", i - d + 1)
    }
}

impl WedgeTerm {
    pub fn monomial(&self, complex_dim: usize) -> String {
        format!("{}∧{}", one_form(self.left, complex_dim), one_form(self.right, complex_dim))
    }
}

impl WedgeInvariants {
    /// Each basis vector rendered as `c·dzi∧dz̄j + ...`.
    pub fn labels(&self) -> Vec<String> {
        self.basis
            .iter()
            .map(|v| {
                v.iter()
                    .map(|t| {
                        let m = t.monomial(self.complex_dim);
                        if t.coeff.is_one() {
                            m
                        } else {
                            format!("({})·{m}", t.coeff)
                        }
                    })
                    .collect::<Vec<_>>()
                    .join(" + ")
            })
            .collect()
    }
}

impl fmt::Display for WedgeInvariants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]", self.dim, self.labels().join(", "))
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

fn second_exterior(m: &CycMatrix) -> Result<CycMatrix, RepError> {
    let idx = pairs(m.rows());
    let mut rows = Vec::with_capacity(idx.len());
    for &(a, b) in &idx {
        let mut row = Vec::with_capacity(idx.len());
        for &(c, d) in &idx {
            let x = m.get(a, c).try_mul(m.get(b, d))?;
            let y = m.get(a, d).try_mul(m.get(b, c))?;
            row.push(x.try_sub(&y)?);
        }
        rows.push(row);
    }
    Ok(CycMatrix::from_rows(rows)?)
}

/// Invariant 2-forms for a group acting on holomorphic coordinates by the given
/// matrices (one per group element). A form `Σ cᵢ dzᵢ` pulls back to `Rᵀc`, and
/// `dz̄` coefficients by `conj(R)ᵀ`.
pub fn wedge_invariants(holomorphic: &[CycMatrix]) -> Result<WedgeInvariants, RepError> {
    let d = holomorphic.first().map_or(0, |m| m.rows());
    let n = 2 * d;
    let idx = pairs(n);
    let mut sum = CycMatrix::zeros(idx.len(), idx.len());
    for r in holomorphic {
        let h1 = r.transpose().direct_sum(&r.conj().transpose())?;
        sum = sum.try_add(&second_exterior(&h1)?)?;
    }
    let p = sum.scale(&CycNum::from_rational(Rational::new(1.into(), (holomorphic.len() as i64).into())))?;
    let (r, pivots) = p.transpose().rref()?;
    let basis = (0..pivots.len())
        .map(|i| {
            (0..idx.len())
                .filter(|&j| !r.get(i, j).is_zero())
                .map(|j| WedgeTerm { coeff: r.get(i, j).clone(), left: idx[j].0, right: idx[j].1 })
                .collect()
        })
        .collect();
    Ok(WedgeInvariants { dim: pivots.len(), complex_dim: d, basis })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u32, k: i64) -> CycNum {
        CycNum::root_of_unity(n, k)
    }

    fn cyclic(m: &CycMatrix, order: u64) -> Vec<CycMatrix> {
        (0..order).map(|k| m.pow(k).unwrap()).collect()
    }

    #[test]
    fn scalar_zeta3_has_nine_invariant_forms() {
        let w = wedge_invariants(&cyclic(&CycMatrix::scalar(3, z(3, 1)), 3)).unwrap();
        assert_eq!(w.dim, 9);
        assert!(w.basis.iter().all(|v| v.len() == 1 && v[0].left < 3 && v[0].right >= 3));
    }

    #[test]
    fn klein_type_has_three() {
        let g = CycMatrix::diag(vec![z(7, 1), z(7, 2), z(7, 4)]);
        let w = wedge_invariants(&cyclic(&g, 7)).unwrap();
        assert_eq!(w.dim, 3);
        assert_eq!(w.labels(), vec!["dz1∧dz̄1", "dz2∧dz̄2", "dz3∧dz̄3"]);
    }

    #[test]
    fn trivial_group_keeps_everything() {
        let w = wedge_invariants(&[CycMatrix::identity(3)]).unwrap();
        assert_eq!(w.dim, 15);
    }

    #[test]
    fn swap_symmetrizes() {
        // z2 ↔ z3 together with sign flips
        let a = CycMatrix::from_ints(&[vec![1, 0, 0], vec![0, 0, -1], vec![0, 1, 0]]);
        let w = wedge_invariants(&cyclic(&a, 4)).unwrap();
        assert!(w.labels().contains(&"dz2∧dz̄2 + dz3∧dz̄3".to_string()));
    }
}
