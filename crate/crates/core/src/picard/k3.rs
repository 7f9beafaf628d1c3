use std::sync::Arc;

use serde::Serialize;

use super::PicardError;
use crate::cyclotomic::{CycMatrix, CycNum};
use crate::groups::FiniteGroup;
use crate::reps::irrep_catalog;

/// Number of fixed points of a symplectic automorphism of a K3 surface, by order.
pub const NIKULIN_TABLE: [(usize, u64); 7] = [(2, 8), (3, 6), (4, 4), (5, 4), (6, 2), (7, 3), (8, 2)];

pub fn nikulin_fixed_count(order: usize) -> Result<u64, PicardError> {
    NIKULIN_TABLE
        .iter()
        .find(|&&(n, _)| n == order)
        .map(|&(_, c)| c)
        .ok_or(PicardError::OrderOutOfRange(order))
}

/// Decomposition of `H²(K3, C)` as a representation of `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct K3Invariants {
    /// `χ(g) = #Fix(g) − 2` on each element, and `22` at the identity.
    pub character: Vec<i64>,
    pub multiplicities: Vec<(String, u64)>,
}

impl K3Invariants {
    pub fn multiplicity(&self, label: &str) -> Option<u64> {
        self.multiplicities.iter().find(|(l, _)| l == label).map(|&(_, m)| m)
    }
}

/// Recover the multiplicities of the irreducibles in `H²(K3)` from the fixed-point
/// counts of every element, by solving the character table system and
/// confirming the answer with inner products.
pub fn solve_k3_invariants(group: &Arc<FiniteGroup>, fixed_counts: &[u64]) -> Result<K3Invariants, PicardError> {
    if fixed_counts.len() != group.order() {
        return Err(PicardError::CountLength { expected: group.order(), found: fixed_counts.len() });
    }
    let character: Vec<i64> = group
        .elements()
        .map(|x| if x == group.identity() { 22 } else { fixed_counts[x] as i64 - 2 })
        .collect();
    let classes = group.conjugacy_classes();
    for class in &classes {
        if class.iter().any(|&x| character[x] != character[class[0]]) {
            return Err(PicardError::NotClassFunction(group.element_label(class[0])));
        }
    }
    let irreps = irrep_catalog(group)?;
    let chars: Vec<_> = irreps.iter().map(|r| r.character()).collect();
    let table: Vec<Vec<CycNum>> = classes.iter().map(|c| chars.iter().map(|chi| chi.at(c[0]).clone()).collect()).collect();
    let rhs: Vec<Vec<CycNum>> = classes.iter().map(|c| vec![CycNum::from_int(character[c[0]])]).collect();
    let solution = CycMatrix::from_rows(table)?
        .solve(&CycMatrix::from_rows(rhs)?)
        .map_err(|e| PicardError::NoSolution(e.to_string()))?;

    let as_character = crate::reps::Character::new(group.clone(), character.iter().map(|&v| CycNum::from_int(v)).collect());
    let mut multiplicities = Vec::new();
    for (i, (rho, chi)) in irreps.iter().zip(&chars).enumerate() {
        let m = solution.get(i, 0);
        if *m != as_character.inner(chi)? {
            return Err(PicardError::NoSolution(format!("{}: linear solve and inner product disagree", rho.label())));
        }
        let m = m
            .to_i64()
            .filter(|&v| v >= 0)
            .ok_or_else(|| PicardError::NoSolution(format!("multiplicity of {} is {m}", rho.label())))?;
        multiplicities.push((rho.label().to_string(), m as u64));
    }
    Ok(K3Invariants { character, multiplicities })
}

/// Picard number of `(K3 × E)/G`: invariant classes on the K3 side plus the
/// class of the elliptic curve.
pub fn type_k_picard(inv: &K3Invariants) -> u64 {
    let trivial = inv.character.iter().sum::<i64>() / inv.character.len() as i64;
    trivial as u64 + 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    fn group(name: &str) -> Arc<FiniteGroup> {
        Arc::new(build_group(&name.parse().unwrap()).unwrap())
    }

    /// Nikulin counts inside the rotation subgroup, free elsewhere.
    fn counts(g: &FiniteGroup, in_h: impl Fn(usize) -> bool) -> Vec<u64> {
        g.elements()
            .map(|x| if x == g.identity() || !in_h(x) { 0 } else { nikulin_fixed_count(g.element_order(x)).unwrap() })
            .collect()
    }

    #[test]
    fn dihedral_eight() {
        let g = group("D8");
        let a = g.generator("a").unwrap();
        let rot = g.generated(&[a]).unwrap();
        let inv = solve_k3_invariants(&g, &counts(&g, |x| rot >> x & 1 == 1)).unwrap();
        let ms: Vec<u64> = inv.multiplicities.iter().map(|&(_, m)| m).collect();
        assert_eq!(ms, vec![3, 5, 3, 3, 4]);
        assert_eq!(inv.multiplicity("rho2,1"), Some(4));
        assert_eq!(type_k_picard(&inv), 4);
    }

    #[test]
    fn dihedral_six_by_hand() {
        let g = group("D6");
        let a = g.generator("a").unwrap();
        let rot = g.generated(&[a]).unwrap();
        let inv = solve_k3_invariants(&g, &counts(&g, |x| rot >> x & 1 == 1)).unwrap();
        assert_eq!(inv.multiplicity("rho1,0"), Some((22 + 2 * 4 - 3 * 2) / 6));
        assert_eq!(type_k_picard(&inv), 5);
    }

    #[test]
    fn rejects_inconsistent_counts() {
        let g = group("D8");
        let mut c = vec![0; 8];
        c[g.generator("b").unwrap()] = 8;
        assert!(matches!(solve_k3_invariants(&g, &c), Err(PicardError::NotClassFunction(_))));
        let g = group("C2");
        assert!(matches!(solve_k3_invariants(&g, &[0, 1]), Err(PicardError::NoSolution(_))));
        assert!(matches!(nikulin_fixed_count(9), Err(PicardError::OrderOutOfRange(9))));
    }

    #[test]
    fn small_groups() {
        let inv = solve_k3_invariants(&group("C2"), &[0, 0]).unwrap();
        assert_eq!(inv.multiplicity("chi(0)"), Some(10));
        assert_eq!(inv.multiplicity("chi(1)"), Some(12));
        let inv = solve_k3_invariants(&group("C1"), &[0]).unwrap();
        assert_eq!(inv.multiplicities, vec![("chi(0)".to_string(), 22)]);
    }
}
