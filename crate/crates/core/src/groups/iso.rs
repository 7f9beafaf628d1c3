//! Isomorphism testing for small groups.

use super::{FiniteGroup, GroupError, MAX_ORDER};

fn check_bound(g: &FiniteGroup) -> Result<(), GroupError> {
    if g.order() > MAX_ORDER {
        Err(GroupError::OrderTooLarge(g.order(), MAX_ORDER))
    } else {
        Ok(())
    }
}

#[derive(PartialEq, Eq, Debug)]
struct Fingerprint {
    order: usize,
    orders: Vec<usize>,
    center: u32,
    abelian: bool,
    derived: u32,
    classes: usize,
}

fn fingerprint(g: &FiniteGroup) -> Result<Fingerprint, GroupError> {
    Ok(Fingerprint {
        order: g.order(),
        orders: g.order_statistics(),
        center: g.center()?.count_ones(),
        abelian: g.is_abelian(),
        derived: g.derived_subgroup()?.count_ones(),
        classes: g.conjugacy_classes().len(),
    })
}

/// A generating set of `g` with no redundant member, drawn from its stored generators
/// and, failing that, greedily from the elements of largest order.
fn small_generating_set(g: &FiniteGroup) -> Result<Vec<usize>, GroupError> {
    let mut gens: Vec<usize> = g.generators().to_vec();
    let mut i = 0;
    while i < gens.len() {
        let mut without = gens.clone();
        without.remove(i);
        if !without.is_empty() && g.generated(&without)? == g.all_elements() {
            gens = without;
        } else {
            i += 1;
        }
    }
    if gens.len() > 2 {
        let mut by_order: Vec<usize> = g.elements().collect();
        by_order.sort_by_key(|&x| std::cmp::Reverse(g.element_order(x)));
        for &a in &by_order {
            for &b in &by_order {
                if g.generated(&[a, b])? == g.all_elements() {
                    return Ok(vec![a, b]);
                }
            }
        }
    }
    Ok(gens)
}

/// An isomorphism `g → h` as an element map, if one exists.
pub fn find_isomorphism(g: &FiniteGroup, h: &FiniteGroup) -> Result<Option<Vec<usize>>, GroupError> {
    check_bound(g)?;
    check_bound(h)?;
    if fingerprint(g)? != fingerprint(h)? {
        return Ok(None);
    }
    let gens = small_generating_set(g)?;
    let local = g.clone_with_generators(&gens);
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&x| h.elements().filter(|&y| h.element_order(y) == g.element_order(x)).collect())
        .collect();
    let mut choice = vec![0usize; gens.len()];
    loop {
        let images: Vec<usize> = choice.iter().zip(&candidates).map(|(&i, c)| c[i]).collect();
        if let Some(map) = local.extend_homomorphism(&images, |a, b| h.mul(a, b), h.identity()) {
            let mut seen = vec![false; h.order()];
            if map.iter().all(|&y| !std::mem::replace(&mut seen[y], true)) {
                return Ok(Some(map));
            }
        }
        // advance the odometer
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(None);
            }
            choice[k] += 1;
            if choice[k] < candidates[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

pub fn are_isomorphic(g: &FiniteGroup, h: &FiniteGroup) -> Result<bool, GroupError> {
    Ok(find_isomorphism(g, h)?.is_some())
}

/// Whether some subgroup of `g` of order `|h|` is isomorphic to `h`; returns the first witness.
pub fn contains_subgroup_isomorphic_to(g: &FiniteGroup, h: &FiniteGroup) -> Result<Option<u64>, GroupError> {
    check_bound(g)?;
    if g.order() % h.order() != 0 {
        return Ok(None);
    }
    for s in g.subgroups_of_order(h.order())? {
        if are_isomorphic(&g.subgroup(s)?, h)? {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

impl FiniteGroup {
    fn clone_with_generators(&self, gens: &[usize]) -> FiniteGroup {
        let mut g = self.clone();
        g.generator_names = gens.iter().map(|&x| self.element_label(x)).collect();
        g.generators = gens.to_vec();
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::build_group;

    fn g(name: &str) -> FiniteGroup {
        build_group(&name.parse().unwrap()).unwrap()
    }

    #[test]
    fn isomorphism_examples() {
        assert!(!are_isomorphic(&g("D8"), &g("Q8")).unwrap());
        assert!(are_isomorphic(&g("C6"), &g("C2xC3")).unwrap());
        assert!(!are_isomorphic(&g("24/C3:C8"), &g("24/C3xC8")).unwrap());
        assert!(are_isomorphic(&g("D6"), &g("S3")).unwrap());
        assert!(are_isomorphic(&g("C2^2"), &g("Dih(C1xC2)")).unwrap());
        assert!(are_isomorphic(&g("D12"), &g("Dih(C1xC6)")).unwrap());
    }

    #[test]
    fn subgroup_containment() {
        assert!(contains_subgroup_isomorphic_to(&g("S4"), &g("A4")).unwrap().is_some());
        assert!(contains_subgroup_isomorphic_to(&g("D8"), &g("C4")).unwrap().is_some());
        assert!(contains_subgroup_isomorphic_to(&g("Q8"), &g("C2^2")).unwrap().is_none());
    }

    #[test]
    fn map_is_a_homomorphism() {
        let (a, b) = (g("Q12"), g("24/C3:C8"));
        assert!(find_isomorphism(&a, &b).unwrap().is_none());
        let (a, b) = (g("S3"), g("D6"));
        let map = find_isomorphism(&a, &b).unwrap().unwrap();
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(map[a.mul(x, y)], b.mul(map[x], map[y]));
            }
        }
    }
}
