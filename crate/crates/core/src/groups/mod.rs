//! Finite groups stored as explicit multiplication tables.
//!
//! Groups are built by closing a faithful realization (permutations, matrices or
//! normal-form tuples) under multiplication by its generators. Subsets of
//! elements are bitmasks, which caps subgroup queries at 64 elements; the
//! enumeration routines enforce the tighter [`MAX_ORDER`].

mod iso;
mod spec;

pub use iso::{are_isomorphic, contains_subgroup_isomorphic_to, find_isomorphism};
pub use spec::{build_group, direct_product, semidirect, Case24, GroupSpec};

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::hash::Hash;

use thiserror::Error;

/// Largest order for which subgroup enumeration and isomorphism search are supported.
pub const MAX_ORDER: usize = 48;

/// A set of element indices.
pub type ElemSet = u64;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("group order {0} exceeds the supported bound {1}")]
    OrderTooLarge(usize, usize),
    #[error("unknown group spec `{0}`")]
    UnknownSpec(String),
    #[error("inconsistent presentation for {0}: {1}")]
    InconsistentPresentation(String, String),
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("group of order {0} is not a p-group")]
    NotPGroup(usize),
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("malformed word `{0}`")]
    MalformedWord(String),
}

#[derive(Clone, Debug)]
pub struct FiniteGroup {
    table: Vec<Vec<usize>>,
    identity: usize,
    inverse: Vec<usize>,
    orders: Vec<usize>,
    generators: Vec<usize>,
    generator_names: Vec<String>,
    name: Option<String>,
    spec: Option<GroupSpec>,
}

/// Result of closing a set of generators.
pub struct Closure<T> {
    pub elements: Vec<T>,
    pub table: Vec<Vec<usize>>,
    pub generators: Vec<usize>,
}

/// Close `gens` under right multiplication and tabulate the product.
pub fn closure<T, K>(
    gens: &[T],
    identity: T,
    mul: impl Fn(&T, &T) -> T,
    key: impl Fn(&T) -> K,
    limit: usize,
) -> Result<Closure<T>, GroupError>
where
    K: Hash + Eq,
{
    let mut elements = vec![identity];
    let mut index: HashMap<K, usize> = HashMap::new();
    index.insert(key(&elements[0]), 0);
    // parent[j] = (p, s) with element j = element p * gen s
    let mut parent: Vec<Option<(usize, usize)>> = vec![None];
    let mut right: Vec<Vec<usize>> = Vec::new();
    let mut i = 0;
    while i < elements.len() {
        let mut row = Vec::with_capacity(gens.len());
        for (s, g) in gens.iter().enumerate() {
            let p = mul(&elements[i], g);
            let k = key(&p);
            let j = match index.get(&k) {
                Some(&j) => j,
                None => {
                    let j = elements.len();
                    if j >= limit {
                        return Err(GroupError::OrderTooLarge(j + 1, limit));
                    }
                    index.insert(k, j);
                    elements.push(p);
                    parent.push(Some((i, s)));
                    j
                }
            };
            row.push(j);
        }
        right.push(row);
        i += 1;
    }
    let n = elements.len();
    let mut table = vec![vec![0usize; n]; n];
    for (i, row) in table.iter_mut().enumerate() {
        row[0] = i;
        for j in 1..n {
            let (p, s) = parent[j].expect("non-identity element has a parent");
            row[j] = right[row[p]][s];
        }
    }
    let generators = gens.iter().map(|g| index[&key(g)]).collect();
    Ok(Closure { elements, table, generators })
}

/// Compose permutations: `(p * q)(i) = p(q(i))`.
pub fn perm_mul(p: &[usize], q: &[usize]) -> Vec<usize> {
    q.iter().map(|&i| p[i]).collect()
}

pub fn bits(set: ElemSet) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| set >> i & 1 == 1)
}

impl FiniteGroup {
    /// Validate a table and wrap it as a group.
    pub fn from_table(
        table: Vec<Vec<usize>>,
        generators: Vec<usize>,
        generator_names: Vec<String>,
    ) -> Result<Self, GroupError> {
        let n = table.len();
        if n == 0 || table.iter().any(|r| r.len() != n || r.iter().any(|&x| x >= n)) {
            return Err(GroupError::InvalidTable("table is not square over its index set".into()));
        }
        if generators.len() != generator_names.len() {
            return Err(GroupError::InvalidTable("generator names do not match generators".into()));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| GroupError::InvalidTable("no identity".into()))?;
        let mut inverse = vec![usize::MAX; n];
        for x in 0..n {
            let y = (0..n)
                .find(|&y| table[x][y] == identity && table[y][x] == identity)
                .ok_or_else(|| GroupError::InvalidTable(format!("element {x} has no inverse")))?;
            inverse[x] = y;
        }
        if n <= 64 {
            for a in 0..n {
                for b in 0..n {
                    let ab = table[a][b];
                    for c in 0..n {
                        if table[ab][c] != table[a][table[b][c]] {
                            return Err(GroupError::InvalidTable(format!("associativity fails at ({a},{b},{c})")));
                        }
                    }
                }
            }
        }
        let mut orders = vec![0; n];
        for x in 0..n {
            let mut k = 1;
            let mut p = x;
            while p != identity {
                p = table[p][x];
                k += 1;
            }
            orders[x] = k;
        }
        let g = FiniteGroup { table, identity, inverse, orders, generators, generator_names, name: None, spec: None };
        if g.generated_list(&g.generators).len() != n {
            return Err(GroupError::InvalidTable("generators do not generate the group".into()));
        }
        Ok(g)
    }

    pub fn from_closure<T>(c: Closure<T>, names: &[&str]) -> Result<Self, GroupError> {
        Self::from_table(c.table, c.generators, names.iter().map(|s| s.to_string()).collect())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub(crate) fn with_spec(mut self, spec: GroupSpec) -> Self {
        self.name = Some(spec.to_string());
        self.spec = Some(spec);
        self
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn name(&self) -> &str {
        self.name.as_deref().unwrap_or("G")
    }

    pub fn spec(&self) -> Option<&GroupSpec> {
        self.spec.as_ref()
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generator_names
    }

    pub fn generator(&self, name: &str) -> Result<usize, GroupError> {
        self.generator_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.generators[i])
            .ok_or_else(|| GroupError::UnknownGenerator(name.into()))
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverse[a]
    }

    pub fn pow(&self, a: usize, k: i64) -> usize {
        let base = if k < 0 { self.inverse[a] } else { a };
        let mut acc = self.identity;
        for _ in 0..k.unsigned_abs() {
            acc = self.table[acc][base];
        }
        acc
    }

    pub fn conjugate(&self, g: usize, x: usize) -> usize {
        // g x g^{-1}
        self.mul(self.mul(g, x), self.inv(g))
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    /// Elements in breadth-first order from the identity, each with the
    /// (parent, generator position) edge that reached it.
    pub fn bfs_tree(&self) -> Vec<(usize, Option<(usize, usize)>)> {
        let mut seen = vec![false; self.order()];
        let mut out = vec![(self.identity, None)];
        seen[self.identity] = true;
        let mut q = VecDeque::from([self.identity]);
        while let Some(x) = q.pop_front() {
            for (s, &g) in self.generators.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push((y, Some((x, s))));
                    q.push_back(y);
                }
            }
        }
        out
    }

    /// Shortest word (generator positions with exponent ±1) for every element.
    pub fn element_words(&self) -> Vec<Vec<usize>> {
        let mut words = vec![Vec::new(); self.order()];
        for (y, edge) in self.bfs_tree() {
            if let Some((x, s)) = edge {
                let mut w = words[x].clone();
                w.push(s);
                words[y] = w;
            }
        }
        words
    }

    /// Human-readable word for an element, such as `a^2*b`.
    pub fn element_label(&self, x: usize) -> String {
        if x == self.identity {
            return "1".into();
        }
        let word = &self.element_words()[x];
        let mut parts: Vec<(usize, usize)> = Vec::new();
        for &s in word {
            match parts.last_mut() {
                Some((t, k)) if *t == s => *k += 1,
                _ => parts.push((s, 1)),
            }
        }
        parts
            .iter()
            .map(|&(s, k)| {
                let n = &self.generator_names[s];
                if k == 1 { n.clone() } else { format!("{n}^{k}") }
            })
            .collect::<Vec<_>>()
            .join("*")
    }

    /// Parse a word such as `a*b^-1`, `ab^2` or `1`.
    pub fn parse_word(&self, word: &str) -> Result<Vec<(usize, i64)>, GroupError> {
        let w = word.trim();
        if w.is_empty() || w == "1" || w == "e" {
            return Ok(vec![]);
        }
        let mut out = Vec::new();
        for token in w.split(|c: char| c == '*' || c.is_whitespace()).filter(|t| !t.is_empty()) {
            if let Some(parsed) = self.parse_token(token) {
                out.push(parsed);
                continue;
            }
            // concatenated single-character generator names
            let chars: Vec<char> = token.chars().collect();
            let mut i = 0;
            while i < chars.len() {
                let mut j = i + 1;
                if j < chars.len() && chars[j] == '^' {
                    j += 1;
                    if j < chars.len() && chars[j] == '-' {
                        j += 1;
                    }
                    while j < chars.len() && chars[j].is_ascii_digit() {
                        j += 1;
                    }
                }
                let piece: String = chars[i..j].iter().collect();
                out.push(self.parse_token(&piece).ok_or_else(|| GroupError::MalformedWord(word.into()))?);
                i = j;
            }
        }
        Ok(out)
    }

    fn parse_token(&self, token: &str) -> Option<(usize, i64)> {
        let (name, exp) = match token.split_once('^') {
            Some((n, e)) => (n, e.parse::<i64>().ok()?),
            None => (token, 1),
        };
        let pos = self.generator_names.iter().position(|g| g == name)?;
        Some((pos, exp))
    }

    pub fn eval_word(&self, word: &[(usize, i64)]) -> usize {
        word.iter().fold(self.identity, |acc, &(s, k)| self.mul(acc, self.pow(self.generators[s], k)))
    }

    pub fn element(&self, word: &str) -> Result<usize, GroupError> {
        Ok(self.eval_word(&self.parse_word(word)?))
    }

    /// Assert that each relator word evaluates to the identity.
    pub fn verify_relators(&self, relators: &[String]) -> Result<(), GroupError> {
        for r in relators {
            if self.element(r)? != self.identity {
                return Err(GroupError::InconsistentPresentation(self.name().into(), format!("relator {r} is not trivial")));
            }
        }
        Ok(())
    }

    pub fn is_abelian(&self) -> bool {
        self.generators
            .iter()
            .all(|&a| self.generators.iter().all(|&b| self.mul(a, b) == self.mul(b, a)))
    }

    fn require_mask(&self) -> Result<(), GroupError> {
        if self.order() > 64 {
            Err(GroupError::OrderTooLarge(self.order(), 64))
        } else {
            Ok(())
        }
    }

    fn require_bound(&self) -> Result<(), GroupError> {
        if self.order() > MAX_ORDER {
            Err(GroupError::OrderTooLarge(self.order(), MAX_ORDER))
        } else {
            Ok(())
        }
    }

    pub fn all_elements(&self) -> ElemSet {
        if self.order() == 64 { u64::MAX } else { (1u64 << self.order()) - 1 }
    }

    pub fn center(&self) -> Result<ElemSet, GroupError> {
        self.require_mask()?;
        Ok(self
            .elements()
            .filter(|&z| self.elements().all(|x| self.mul(z, x) == self.mul(x, z)))
            .fold(0, |m, z| m | 1 << z))
    }

    /// Conjugacy classes, ordered by least element; each class sorted.
    pub fn conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.order()];
        let mut classes = Vec::new();
        for x in self.elements() {
            if seen[x] {
                continue;
            }
            let mut class: Vec<usize> = self.elements().map(|g| self.conjugate(g, x)).collect();
            class.sort_unstable();
            class.dedup();
            for &y in &class {
                seen[y] = true;
            }
            classes.push(class);
        }
        classes
    }

    /// Index into [`conjugacy_classes`](Self::conjugacy_classes) for each element.
    pub fn class_index(&self) -> Vec<usize> {
        let mut idx = vec![0; self.order()];
        for (c, class) in self.conjugacy_classes().iter().enumerate() {
            for &x in class {
                idx[x] = c;
            }
        }
        idx
    }

    fn generated_list(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order()];
        seen[self.identity] = true;
        let mut out = vec![self.identity];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }

    pub fn generated(&self, gens: &[usize]) -> Result<ElemSet, GroupError> {
        self.require_mask()?;
        Ok(self.generated_list(gens).into_iter().fold(0, |m, x| m | 1 << x))
    }

    /// Every subgroup generated by at most three elements, sorted by (order, mask).
    pub fn all_subgroups(&self) -> Result<Vec<ElemSet>, GroupError> {
        self.require_bound()?;
        let mut cyclic: Vec<ElemSet> = Vec::new();
        let mut found: HashSet<ElemSet> = HashSet::new();
        for x in self.elements() {
            let s = self.generated(&[x])?;
            if found.insert(s) {
                cyclic.push(s);
            }
        }
        let mut frontier = cyclic.clone();
        for _ in 1..3 {
            let mut next = Vec::new();
            for &s in &frontier {
                for &c in &cyclic {
                    if c & !s == 0 {
                        continue;
                    }
                    let gens: Vec<usize> = bits(s | c).collect();
                    let j = self.generated_set_from(s, &gens)?;
                    if found.insert(j) {
                        next.push(j);
                    }
                }
            }
            frontier = next;
        }
        let mut all: Vec<ElemSet> = found.into_iter().collect();
        all.sort_by_key(|&s| (s.count_ones(), s));
        Ok(all)
    }

    fn generated_set_from(&self, start: ElemSet, extra: &[usize]) -> Result<ElemSet, GroupError> {
        let mut set = start;
        let mut list: Vec<usize> = bits(start).collect();
        for &e in extra {
            if set >> e & 1 == 0 {
                set |= 1 << e;
                list.push(e);
            }
        }
        let mut i = 0;
        while i < list.len() {
            for j in 0..=i {
                for (a, b) in [(list[i], list[j]), (list[j], list[i])] {
                    let p = self.mul(a, b);
                    if set >> p & 1 == 0 {
                        set |= 1 << p;
                        list.push(p);
                    }
                }
            }
            i += 1;
        }
        Ok(set)
    }

    pub fn subgroups_of_order(&self, k: usize) -> Result<Vec<ElemSet>, GroupError> {
        Ok(self.all_subgroups()?.into_iter().filter(|s| s.count_ones() as usize == k).collect())
    }

    /// Sylow `p`-subgroups.
    pub fn sylow(&self, p: usize) -> Result<Vec<ElemSet>, GroupError> {
        let mut pk = 1;
        while self.order() % (pk * p) == 0 {
            pk *= p;
        }
        self.subgroups_of_order(pk)
    }

    pub fn is_normal(&self, s: ElemSet) -> bool {
        bits(s).all(|x| self.generators.iter().all(|&g| s >> self.conjugate(g, x) & 1 == 1))
    }

    pub fn is_abelian_set(&self, s: ElemSet) -> bool {
        bits(s).all(|a| bits(s).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn maximal_normal_abelian_subgroups(&self) -> Result<Vec<ElemSet>, GroupError> {
        let cands: Vec<ElemSet> = self
            .all_subgroups()?
            .into_iter()
            .filter(|&s| self.is_normal(s) && self.is_abelian_set(s))
            .collect();
        Ok(cands.iter().copied().filter(|&s| !cands.iter().any(|&t| t != s && t & s == s)).collect())
    }

    pub fn derived_subgroup(&self) -> Result<ElemSet, GroupError> {
        self.require_mask()?;
        let comms: Vec<usize> = self
            .elements()
            .flat_map(|a| self.elements().map(move |b| (a, b)))
            .map(|(a, b)| self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b)))
            .collect();
        self.generated(&comms)
    }

    /// The subgroup on `s` as a standalone group, with a greedy generating set.
    pub fn subgroup(&self, s: ElemSet) -> Result<FiniteGroup, GroupError> {
        self.require_mask()?;
        let elems: Vec<usize> = bits(s).collect();
        let pos: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let table = elems
            .iter()
            .map(|&a| {
                elems
                    .iter()
                    .map(|&b| pos.get(&self.mul(a, b)).copied().ok_or_else(|| GroupError::InvalidTable("subset is not closed".into())))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()?;
        let mut gens: Vec<usize> = Vec::new();
        let mut span: ElemSet = 1 << self.identity;
        for &x in elems.iter().rev() {
            if span >> x & 1 == 0 {
                gens.push(x);
                span = self.generated(&gens)?;
            }
        }
        if gens.is_empty() {
            gens.push(self.identity);
        }
        let names: Vec<String> = gens.iter().map(|&g| self.element_label(g)).collect();
        let local: Vec<usize> = gens.iter().map(|g| pos[g]).collect();
        Ok(FiniteGroup::from_table(table, local, names)?.with_name(format!("subgroup of {}", self.name())))
    }

    /// Generator images for a homomorphism into `target`, extended over the whole group.
    /// Returns `None` when the assignment does not respect the relations.
    pub fn extend_homomorphism(&self, images: &[usize], mul: impl Fn(usize, usize) -> usize, target_identity: usize) -> Option<Vec<usize>> {
        let mut map = vec![usize::MAX; self.order()];
        map[self.identity] = target_identity;
        for (y, edge) in self.bfs_tree() {
            if let Some((x, s)) = edge {
                map[y] = mul(map[x], images[s]);
            }
        }
        for x in self.elements() {
            for (s, &g) in self.generators.iter().enumerate() {
                if map[self.mul(x, g)] != mul(map[x], images[s]) {
                    return None;
                }
            }
        }
        Some(map)
    }

    pub fn order_statistics(&self) -> Vec<usize> {
        let mut v = self.orders.clone();
        v.sort_unstable();
        v
    }

    pub fn is_p_group(&self) -> Option<(usize, u32)> {
        let n = self.order();
        if n == 1 {
            return None;
        }
        let p = (2..=n).find(|d| n % d == 0)?;
        let mut m = n;
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        (m == 1).then_some((p, k))
    }
}

impl fmt::Display for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (order {})", self.name(), self.order())
    }
}

/// Outcome of the Burnside-Hall inequality check on a p-group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BurnsideHall {
    pub p: usize,
    pub n: u32,
    pub h: u32,
    pub holds: bool,
    pub witness: ElemSet,
}

fn log_p(mut m: usize, p: usize) -> u32 {
    let mut k = 0;
    while m > 1 {
        m /= p;
        k += 1;
    }
    k
}

/// For `|G| = p^n`, check `h(h+1) ≥ 2n` for every maximal normal abelian subgroup of
/// order `p^h`. The reported witness is one with the smallest `h`.
pub fn check_burnside_hall(g: &FiniteGroup) -> Result<BurnsideHall, GroupError> {
    let (p, n) = g.is_p_group().ok_or(GroupError::NotPGroup(g.order()))?;
    let subs = g.maximal_normal_abelian_subgroups()?;
    let holds = subs.iter().all(|s| {
        let h = log_p(s.count_ones() as usize, p);
        h * (h + 1) >= 2 * n
    });
    let witness = *subs
        .iter()
        .min_by_key(|s| (s.count_ones(), **s))
        .expect("a p-group has a maximal normal abelian subgroup");
    let h = log_p(witness.count_ones() as usize, p);
    Ok(BurnsideHall { p, n, h, holds, witness })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(name: &str) -> FiniteGroup {
        build_group(&name.parse().unwrap()).unwrap()
    }

    #[test]
    fn dihedral_relations_and_center() {
        let d8 = g("D8");
        assert_eq!(d8.order(), 8);
        assert_eq!(d8.element("a^4").unwrap(), d8.identity());
        assert_eq!(d8.element("b^2").unwrap(), d8.identity());
        assert_eq!(d8.element("b*a*b").unwrap(), d8.element("a^-1").unwrap());
        // oracle: brute-force commuting elements
        let brute = d8.elements().filter(|&z| d8.elements().all(|x| d8.mul(z, x) == d8.mul(x, z))).count();
        assert_eq!(brute, 2);
        assert_eq!(d8.center().unwrap().count_ones(), 2);
    }

    #[test]
    fn heisenberg_exponent_three() {
        let h = g("Heis27");
        assert_eq!(h.order(), 27);
        assert!(h.elements().filter(|&x| x != h.identity()).all(|x| h.element_order(x) == 3));
        assert!(!h.is_abelian());
    }

    #[test]
    fn trivial_group() {
        let c1 = g("C1");
        assert_eq!(c1.order(), 1);
        assert!(c1.is_abelian());
    }

    #[test]
    fn a4_classes() {
        let a4 = g("A4");
        let mut sizes: Vec<usize> = a4.conjugacy_classes().iter().map(|c| c.len()).collect();
        sizes.sort_unstable();
        assert_eq!(sizes, vec![1, 3, 4, 4]);
    }

    #[test]
    fn classes_partition_and_center_is_singletons() {
        for name in ["D8", "Q8", "A4", "S4", "D12", "Q12", "Heis27", "C3^2:C2"] {
            let grp = g(name);
            let classes = grp.conjugacy_classes();
            assert_eq!(classes.iter().map(|c| c.len()).sum::<usize>(), grp.order());
            let singles = classes.iter().filter(|c| c.len() == 1).fold(0u64, |m, c| m | 1 << c[0]);
            assert_eq!(singles, grp.center().unwrap(), "{name}");
        }
    }

    #[test]
    fn burnside_hall_examples() {
        let bh = check_burnside_hall(&g("D8")).unwrap();
        assert_eq!((bh.h, bh.n, bh.holds), (2, 3, true));
        let bh = check_burnside_hall(&g("C2")).unwrap();
        assert_eq!((bh.h, bh.n, bh.holds), (1, 1, true));
        let bh = check_burnside_hall(&g("Heis27")).unwrap();
        assert_eq!((bh.h, bh.n, bh.holds), (2, 3, true));
        assert_eq!(check_burnside_hall(&g("S3")), Err(GroupError::NotPGroup(6)));
    }

    #[test]
    fn sylow_and_subgroups() {
        let s4 = g("S4");
        let syl = s4.sylow(2).unwrap();
        assert_eq!(syl.len(), 3);
        let subs = s4.all_subgroups().unwrap();
        // S4 has 30 subgroups
        assert_eq!(subs.len(), 30);
        assert_eq!(g("Q8").subgroups_of_order(2).unwrap().len(), 1);
    }

    #[test]
    fn words_round_trip() {
        let d8 = g("D8");
        for x in d8.elements() {
            let label = d8.element_label(x);
            assert_eq!(d8.element(&label).unwrap(), x, "{label}");
        }
        assert_eq!(d8.element("ab").unwrap(), d8.mul(d8.generator("a").unwrap(), d8.generator("b").unwrap()));
        assert!(d8.element("q").is_err());
    }
}
