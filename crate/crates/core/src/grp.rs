//! Finite groups given by multiplication tables: construction, subgroups,
//! double cosets and exact factorizations.
//!
//! Convention: `table[a][b]` is the product `a·b`. For permutation groups the
//! product `a·b` means "apply `a`, then `b`", i.e. `(a·b)(x) = b(a(x))`.
//! Switching convention replaces a group by its opposite; everything computed
//! downstream is invariant under that swap up to based-ring isomorphism.

use std::collections::{BTreeSet, HashMap, VecDeque};

use crate::error::{Error, Result};

/// Largest group order accepted by the closure and factorization routines.
pub const MAX_ORDER: usize = 64;

/// A finite group stored as its full multiplication table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    identity: usize,
    inv: Vec<usize>,
    names: Option<Vec<String>>,
}

/// A subgroup, stored as the sorted list of its element indices in the parent.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    elements: Vec<usize>,
}

/// One double coset `HσH`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DoubleCoset {
    /// Smallest element index of the coset.
    pub representative: usize,
    pub elements: Vec<usize>,
    /// `H ∩ σHσ⁻¹` for `σ` the representative.
    pub stabilizer: Subgroup,
}

impl FiniteGroup {
    /// Validates a multiplication table and builds the group.
    pub fn from_table(table: Vec<Vec<usize>>) -> Result<Self> {
        let n = table.len();
        if n == 0 {
            return Err(Error::Format("empty multiplication table".into()));
        }
        for (i, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!(
                    "row {i} has length {}, expected {n}",
                    row.len()
                )));
            }
            if let Some(&x) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Format(format!("entry {x} in row {i} out of range")));
            }
        }
        for i in 0..n {
            let mut seen_row = vec![false; n];
            let mut seen_col = vec![false; n];
            for j in 0..n {
                if std::mem::replace(&mut seen_row[table[i][j]], true) {
                    return Err(Error::Format(format!(
                        "not a Latin square: row {i} repeats {}",
                        table[i][j]
                    )));
                }
                if std::mem::replace(&mut seen_col[table[j][i]], true) {
                    return Err(Error::Format(format!(
                        "not a Latin square: column {i} repeats {}",
                        table[j][i]
                    )));
                }
            }
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|x| table[e][x] == x && table[x][e] == x))
            .ok_or_else(|| Error::validation("no two-sided identity", vec![]))?;
        let mut inv = vec![0; n];
        for a in 0..n {
            let b = (0..n).find(|&b| table[a][b] == identity).unwrap();
            if table[b][a] != identity {
                return Err(Error::validation("left and right inverses differ", vec![a]));
            }
            inv[a] = b;
        }
        for a in 0..n {
            for b in 0..n {
                let ab = table[a][b];
                for c in 0..n {
                    if table[ab][c] != table[a][table[b][c]] {
                        return Err(Error::validation("associativity fails", vec![a, b, c]));
                    }
                }
            }
        }
        Ok(FiniteGroup {
            n,
            table: table.into_iter().flatten().collect(),
            identity,
            inv,
            names: None,
        })
    }

    /// Group generated by permutations of `{0, …, m−1}` (0-based images).
    ///
    /// Element 0 is the identity; the rest follow breadth-first order of the
    /// closure. Element names are cycle notation on `{1, …, m}`.
    pub fn from_permutations(generators: &[Vec<usize>]) -> Result<Self> {
        let m = generators.first().map_or(0, |g| g.len());
        for g in generators {
            if g.len() != m {
                return Err(Error::Format("generators act on different sets".into()));
            }
            let mut seen = vec![false; m];
            for &x in g {
                if x >= m || std::mem::replace(&mut seen[x], true) {
                    return Err(Error::Format(format!("{g:?} is not a bijection")));
                }
            }
        }
        let id: Vec<usize> = (0..m).collect();
        let mut elems = vec![id.clone()];
        let mut index: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let p = compose_perm(&elems[i], g);
                if !index.contains_key(&p) {
                    if elems.len() == MAX_ORDER {
                        return Err(Error::Size {
                            what: "permutation group order",
                            size: MAX_ORDER + 1,
                            cap: MAX_ORDER,
                        });
                    }
                    index.insert(p.clone(), elems.len());
                    queue.push_back(elems.len());
                    elems.push(p);
                }
            }
        }
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&compose_perm(a, b)]).collect())
            .collect();
        let names = elems.iter().map(|p| cycle_notation(p)).collect();
        Ok(FiniteGroup::from_table(table)?.with_names(names))
    }

    pub fn with_names(mut self, names: Vec<String>) -> Self {
        if names.len() == self.n {
            self.names = Some(names);
        }
        self
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.n + b]
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn names(&self) -> Option<&[String]> {
        self.names.as_deref()
    }

    pub fn name(&self, a: usize) -> String {
        match &self.names {
            Some(n) => n[a].clone(),
            None => a.to_string(),
        }
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.n
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.n).all(|a| (0..a).all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// A small generating set, chosen greedily by element index.
    pub fn generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in 0..self.n {
            if span.len() == self.n {
                break;
            }
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.closure(&gens);
            }
        }
        gens
    }

    /// Sorted closure of a set of elements under multiplication.
    fn closure(&self, elems: &[usize]) -> Vec<usize> {
        let mut inside = vec![false; self.n];
        inside[self.identity] = true;
        let mut list = vec![self.identity];
        let mut i = 0;
        while i < list.len() {
            let x = list[i];
            for &g in elems {
                let y = self.mul(x, g);
                if !inside[y] {
                    inside[y] = true;
                    list.push(y);
                }
            }
            i += 1;
        }
        list.sort_unstable();
        list
    }

    fn check_index(&self, elems: &[usize]) -> Result<()> {
        match elems.iter().find(|&&x| x >= self.n) {
            Some(&x) => Err(Error::Format(format!(
                "element index {x} out of range for group of order {}",
                self.n
            ))),
            None => Ok(()),
        }
    }

    /// Smallest subgroup containing `elems`.
    pub fn subgroup_generated(&self, elems: &[usize]) -> Result<Subgroup> {
        self.check_index(elems)?;
        Ok(Subgroup {
            elements: self.closure(elems),
        })
    }

    /// Checks that `elems` is a subgroup and wraps it.
    pub fn subgroup(&self, elems: &[usize]) -> Result<Subgroup> {
        self.check_index(elems)?;
        let set: BTreeSet<usize> = elems.iter().copied().collect();
        if !set.contains(&self.identity) {
            return Err(Error::Containment("subset does not contain the identity".into()));
        }
        for &a in &set {
            if !set.contains(&self.inv(a)) {
                return Err(Error::Containment(format!("not closed under inverse at {a}")));
            }
            for &b in &set {
                if !set.contains(&self.mul(a, b)) {
                    return Err(Error::Containment(format!(
                        "not closed under product at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Subgroup {
            elements: set.into_iter().collect(),
        })
    }

    pub fn trivial_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: vec![self.identity],
        }
    }

    pub fn full_subgroup(&self) -> Subgroup {
        Subgroup {
            elements: (0..self.n).collect(),
        }
    }

    /// Partition into double cosets `HσH`, sorted by representative.
    pub fn double_cosets(&self, h: &Subgroup) -> Result<Vec<DoubleCoset>> {
        self.subgroup(h.elements())?;
        let mut assigned = vec![false; self.n];
        let mut parts = Vec::new();
        for sigma in 0..self.n {
            if assigned[sigma] {
                continue;
            }
            let mut elements: Vec<usize> = h
                .elements()
                .iter()
                .flat_map(|&a| h.elements().iter().map(move |&b| (a, b)))
                .map(|(a, b)| self.mul(self.mul(a, sigma), b))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            elements.sort_unstable();
            for &x in &elements {
                assigned[x] = true;
            }
            let sig_inv = self.inv(sigma);
            let stab: Vec<usize> = h
                .elements()
                .iter()
                .copied()
                .filter(|&a| h.contains(self.mul(self.mul(sig_inv, a), sigma)))
                .collect();
            parts.push(DoubleCoset {
                representative: sigma,
                elements,
                stabilizer: Subgroup { elements: stab },
            });
        }
        Ok(parts)
    }

    /// Subgroups generated by at most two elements, plus the whole group.
    pub fn subgroups(&self) -> Result<Vec<Subgroup>> {
        self.subgroups_with(2)
    }

    /// Subgroups generated by at most `max_generators` (≤ 3) elements, plus
    /// the trivial and the whole group. Sorted by order, then elements.
    pub fn subgroups_with(&self, max_generators: usize) -> Result<Vec<Subgroup>> {
        if self.n > MAX_ORDER {
            return Err(Error::Size {
                what: "group order",
                size: self.n,
                cap: MAX_ORDER,
            });
        }
        if max_generators > 3 {
            return Err(Error::Size {
                what: "generator count",
                size: max_generators,
                cap: 3,
            });
        }
        let mut found: BTreeSet<Vec<usize>> = BTreeSet::new();
        found.insert(vec![self.identity]);
        found.insert((0..self.n).collect());
        let n = self.n;
        for a in 0..n {
            if max_generators >= 1 {
                found.insert(self.closure(&[a]));
            }
            for b in (a + 1)..n {
                if max_generators >= 2 {
                    found.insert(self.closure(&[a, b]));
                }
                if max_generators >= 3 {
                    for c in (b + 1)..n {
                        found.insert(self.closure(&[a, b, c]));
                    }
                }
            }
        }
        let mut subs: Vec<Subgroup> = found
            .into_iter()
            .map(|elements| Subgroup { elements })
            .collect();
        subs.sort_by(|x, y| (x.order(), &x.elements).cmp(&(y.order(), &y.elements)));
        Ok(subs)
    }

    /// All ordered pairs `(G, Γ)` of subgroups with `G ∩ Γ = {e}` and
    /// `|G|·|Γ| = |Σ|`, using subgroups generated by at most two elements.
    pub fn exact_factorizations(&self) -> Result<Vec<(Subgroup, Subgroup)>> {
        self.exact_factorizations_with(2)
    }

    pub fn exact_factorizations_with(
        &self,
        max_generators: usize,
    ) -> Result<Vec<(Subgroup, Subgroup)>> {
        let subs = self.subgroups_with(max_generators)?;
        let mut out = Vec::new();
        for g in &subs {
            for k in &subs {
                if g.order() * k.order() == self.n && g.intersection_order(k) == 1 {
                    out.push((g.clone(), k.clone()));
                }
            }
        }
        Ok(out)
    }

    /// Whether `map` (indexed by elements of `self`) is a homomorphism into
    /// `target`; returns the first failing pair otherwise.
    pub fn homomorphism_failure(&self, target: &FiniteGroup, map: &[usize]) -> Option<(usize, usize)> {
        for a in 0..self.n {
            for b in 0..self.n {
                if map[self.mul(a, b)] != target.mul(map[a], map[b]) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Whether `map` is a bijective homomorphism onto `target`.
    pub fn is_isomorphism(&self, target: &FiniteGroup, map: &[usize]) -> bool {
        if map.len() != self.n || target.n != self.n {
            return false;
        }
        let mut seen = vec![false; self.n];
        for &x in map {
            if x >= self.n || std::mem::replace(&mut seen[x], true) {
                return false;
            }
        }
        self.homomorphism_failure(target, map).is_none()
    }

    /// Direct product, element `(a, b)` at index `a·|other| + b`.
    pub fn direct_product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.n;
        let n = self.n * m;
        let table: Vec<Vec<usize>> = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        let names = (0..n)
            .map(|x| format!("({},{})", self.name(x / m), other.name(x % m)))
            .collect();
        FiniteGroup::from_table(table)
            .expect("direct product of groups is a group")
            .with_names(names)
    }
}

impl Subgroup {
    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, x: usize) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn intersection_order(&self, other: &Subgroup) -> usize {
        self.elements.iter().filter(|&&x| other.contains(x)).count()
    }

    /// The subgroup as a group in its own right; element `i` of the result
    /// is `self.elements()[i]` in the parent.
    pub fn to_group(&self, parent: &FiniteGroup) -> FiniteGroup {
        let pos: HashMap<usize, usize> = self
            .elements
            .iter()
            .enumerate()
            .map(|(i, &x)| (x, i))
            .collect();
        let table = self
            .elements
            .iter()
            .map(|&a| self.elements.iter().map(|&b| pos[&parent.mul(a, b)]).collect())
            .collect();
        let names = self.elements.iter().map(|&x| parent.name(x)).collect();
        FiniteGroup::from_table(table)
            .expect("subgroup is closed")
            .with_names(names)
    }
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    // a then b.
    a.iter().map(|&x| b[x]).collect()
}

/// 0-based image vector of a permutation of `{1, …, m}` given in 1-based
/// cycle notation.
pub fn perm_from_cycles(m: usize, cycles: &[&[usize]]) -> Vec<usize> {
    let mut p: Vec<usize> = (0..m).collect();
    for cyc in cycles {
        for (i, &x) in cyc.iter().enumerate() {
            p[x - 1] = cyc[(i + 1) % cyc.len()] - 1;
        }
    }
    p
}

fn cycle_notation(p: &[usize]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] == start {
            continue;
        }
        let mut cyc = Vec::new();
        let mut x = start;
        while !seen[x] {
            seen[x] = true;
            cyc.push((x + 1).to_string());
            x = p[x];
        }
        out.push('(');
        out.push_str(&cyc.join(" "));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite;

    #[test]
    fn trivial_and_z2_tables() {
        let g = FiniteGroup::from_table(vec![vec![0]]).unwrap();
        assert_eq!(g.order(), 1);
        let z2 = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2.order(), 2);
        assert_eq!(z2.inv(1), 1);
    }

    #[test]
    fn non_latin_is_format_error() {
        let err = FiniteGroup::from_table(vec![vec![0, 1], vec![1, 1]]).unwrap_err();
        assert!(matches!(err, Error::Format(_)));
    }

    #[test]
    fn corrupted_z6_names_a_failing_triple() {
        // Flip the intercalate on rows {1,4} x columns {1,4} of Z6. The table
        // stays a Latin square with identity but stops being associative.
        let mut t: Vec<Vec<usize>> = (0..6).map(|a| (0..6).map(|b| (a + b) % 6).collect()).collect();
        t[1][1] = 5;
        t[1][4] = 2;
        t[4][1] = 2;
        t[4][4] = 5;
        match FiniteGroup::from_table(t.clone()).unwrap_err() {
            Error::Validation { what, witness } => {
                assert!(what.contains("associativity"));
                let (a, b, c) = (witness[0], witness[1], witness[2]);
                assert_ne!(t[t[a][b]][c], t[a][t[b][c]]);
            }
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn permutation_closures() {
        let z2 = FiniteGroup::from_permutations(&[perm_from_cycles(2, &[&[1, 2]])]).unwrap();
        assert_eq!(z2.order(), 2);
        let s3 = FiniteGroup::from_permutations(&[
            perm_from_cycles(3, &[&[1, 2, 3]]),
            perm_from_cycles(3, &[&[1, 2]]),
        ])
        .unwrap();
        assert_eq!(s3.order(), 6);
        assert!(!s3.is_abelian());
        assert_eq!(s3.identity(), 0);
        assert_eq!(s3.name(0), "()");
        let s4 = FiniteGroup::from_permutations(&[
            perm_from_cycles(4, &[&[1, 2, 3, 4]]),
            perm_from_cycles(4, &[&[1, 2]]),
        ])
        .unwrap();
        assert_eq!(s4.order(), 24);
    }

    #[test]
    fn closure_cap() {
        let s5 = FiniteGroup::from_permutations(&[
            perm_from_cycles(5, &[&[1, 2, 3, 4, 5]]),
            perm_from_cycles(5, &[&[1, 2]]),
        ]);
        assert!(matches!(s5, Err(Error::Size { .. })));
    }

    #[test]
    fn generated_subgroups() {
        let s3 = suite::symmetric3();
        assert_eq!(s3.subgroup_generated(&[]).unwrap().elements(), &[0]);
        let three_cycle = (0..6).find(|&a| s3.element_order(a) == 3).unwrap();
        assert_eq!(s3.subgroup_generated(&[three_cycle]).unwrap().order(), 3);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(s3.subgroup_generated(&all).unwrap().order(), 6);
        assert!(s3.subgroup_generated(&[9]).is_err());
    }

    #[test]
    fn double_coset_examples() {
        let s3 = suite::symmetric3();
        let full = s3.double_cosets(&s3.full_subgroup()).unwrap();
        assert_eq!(full.len(), 1);
        assert_eq!(full[0].stabilizer.order(), 6);
        let triv = s3.double_cosets(&s3.trivial_subgroup()).unwrap();
        assert_eq!(triv.len(), 6);
        let t = (0..6).find(|&a| s3.element_order(a) == 2).unwrap();
        let h = s3.subgroup_generated(&[t]).unwrap();
        let parts = s3.double_cosets(&h).unwrap();
        let mut shape: Vec<(usize, usize)> = parts
            .iter()
            .map(|p| (p.elements.len(), p.stabilizer.order()))
            .collect();
        shape.sort();
        assert_eq!(shape, vec![(2, 2), (4, 1)]);
    }

    #[test]
    fn double_cosets_reject_non_subgroup() {
        let s3 = suite::symmetric3();
        let three_cycle = (0..6).find(|&a| s3.element_order(a) == 3).unwrap();
        let bad = Subgroup {
            elements: vec![0, three_cycle],
        };
        assert!(matches!(s3.double_cosets(&bad), Err(Error::Containment(_))));
    }

    #[test]
    fn factorizations_of_s3_and_z4() {
        let s3 = suite::symmetric3();
        let f = s3.exact_factorizations().unwrap();
        assert!(f.iter().any(|(g, k)| g.order() == 1 && k.order() == 6));
        assert!(f.iter().any(|(g, k)| g.order() == 6 && k.order() == 1));
        assert!(f.iter().any(|(g, k)| g.order() == 2 && k.order() == 3));
        let z4 = suite::cyclic(4);
        let f = z4.exact_factorizations().unwrap();
        assert_eq!(f.len(), 2);
    }

    #[test]
    fn factorization_products_are_bijective() {
        for (_, sigma) in suite::bundled_groups() {
            for (g, k) in sigma.exact_factorizations().unwrap() {
                let mut hit = vec![false; sigma.order()];
                for &a in g.elements() {
                    for &b in k.elements() {
                        hit[sigma.mul(a, b)] = true;
                    }
                }
                assert!(hit.iter().all(|&x| x));
            }
        }
    }

    #[test]
    fn elementary_abelian_rank_three_needs_three_generators() {
        let z2 = suite::cyclic(2);
        let e8 = z2.direct_product(&z2).direct_product(&z2);
        let two = e8.subgroups_with(2).unwrap();
        let three = e8.subgroups_with(3).unwrap();
        assert!(two.iter().all(|s| s.order() != 8 || s.order() == e8.order()));
        assert!(three.len() >= two.len());
        assert!(e8.subgroups_with(4).is_err());
    }
}
