//! Small groups, matched pairs and crossed actions used by the tests, the
//! CLI and the bindings.

use crate::crossact::CrossedActionData;
use crate::error::Result;
use crate::fusring::{tambara_yamagami, FusionRing, Grading};
use crate::grp::{perm_from_cycles, FiniteGroup};
use crate::matched::{derive_matched_pair, MatchedPair};

pub fn cyclic(n: usize) -> FiniteGroup {
    let table = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
    FiniteGroup::from_table(table)
        .expect("cyclic group table")
        .with_names((0..n).map(|k| format!("g^{k}")).collect())
}

pub fn symmetric3() -> FiniteGroup {
    FiniteGroup::from_permutations(&[
        perm_from_cycles(3, &[&[1, 2, 3]]),
        perm_from_cycles(3, &[&[1, 2]]),
    ])
    .expect("S3")
}

pub fn symmetric4() -> FiniteGroup {
    FiniteGroup::from_permutations(&[
        perm_from_cycles(4, &[&[1, 2, 3, 4]]),
        perm_from_cycles(4, &[&[1, 2]]),
    ])
    .expect("S4")
}

pub fn alternating4() -> FiniteGroup {
    FiniteGroup::from_permutations(&[
        perm_from_cycles(4, &[&[1, 2, 3]]),
        perm_from_cycles(4, &[&[2, 3, 4]]),
    ])
    .expect("A4")
}

/// Dihedral group of order 8.
pub fn dihedral8() -> FiniteGroup {
    FiniteGroup::from_permutations(&[
        perm_from_cycles(4, &[&[1, 2, 3, 4]]),
        perm_from_cycles(4, &[&[1, 3]]),
    ])
    .expect("D8")
}

/// Quaternion group through its regular permutation representation.
pub fn quaternion8() -> FiniteGroup {
    FiniteGroup::from_permutations(&[
        perm_from_cycles(8, &[&[1, 2, 3, 4], &[5, 6, 7, 8]]),
        perm_from_cycles(8, &[&[1, 5, 3, 7], &[2, 8, 4, 6]]),
    ])
    .expect("Q8")
}

pub fn klein4() -> FiniteGroup {
    FiniteGroup::from_permutations(&[
        perm_from_cycles(4, &[&[1, 2]]),
        perm_from_cycles(4, &[&[3, 4]]),
    ])
    .expect("Z2 x Z2")
}

/// The groups whose exact factorizations make up the round-trip suite.
pub fn bundled_groups() -> Vec<(&'static str, FiniteGroup)> {
    vec![
        ("Z6", cyclic(6)),
        ("S3", symmetric3()),
        ("D8", dihedral8()),
        ("Q8", quaternion8()),
        ("A4", alternating4()),
        ("S4", symmetric4()),
        ("Z2xZ2", klein4()),
    ]
}

/// Index of the element with the given display name.
pub fn element(g: &FiniteGroup, name: &str) -> usize {
    g.elements()
        .find(|&a| g.name(a) == name)
        .unwrap_or_else(|| panic!("no element named {name}"))
}

/// `S3 = Z2·Z3` with `G = ⟨(1 2)⟩`, `Γ = ⟨(1 2 3)⟩`.
pub fn s3_pair() -> MatchedPair {
    let s = symmetric3();
    let g = s.subgroup_generated(&[element(&s, "(1 2)")]).unwrap();
    let k = s.subgroup_generated(&[element(&s, "(1 2 3)")]).unwrap();
    derive_matched_pair(&s, &g, &k).expect("S3 factorization")
}

/// `A4 = Z3·V4` with `G = ⟨(1 2 3)⟩` and `Γ` the normal Klein subgroup.
pub fn a4_pair() -> MatchedPair {
    let s = alternating4();
    let g = s.subgroup_generated(&[element(&s, "(1 2 3)")]).unwrap();
    let k = s
        .subgroup_generated(&[element(&s, "(1 2)(3 4)"), element(&s, "(1 3)(2 4)")])
        .unwrap();
    derive_matched_pair(&s, &g, &k).expect("A4 factorization")
}

/// `S4 = Z4·S3` with `G = ⟨(1 2 3 4)⟩` and `Γ` the stabiliser of the letter 4.
pub fn s4_pair() -> MatchedPair {
    let s = symmetric4();
    let g = s.subgroup_generated(&[element(&s, "(1 2 3 4)")]).unwrap();
    let k = s
        .subgroup_generated(&[element(&s, "(1 2 3)"), element(&s, "(1 2)")])
        .unwrap();
    derive_matched_pair(&s, &g, &k).expect("S4 factorization")
}

/// `G` trivial, `Γ = S3`.
pub fn trivial_g_pair() -> MatchedPair {
    let s = symmetric3();
    derive_matched_pair(&s, &s.trivial_subgroup(), &s.full_subgroup()).expect("trivial factorization")
}

/// Direct product `Z2 × Z3` with both actions trivial.
pub fn direct_product_pair() -> MatchedPair {
    MatchedPair::trivial(cyclic(2), cyclic(3))
}

/// Every matched pair obtained from an exact factorization of a bundled group.
pub fn bundled_matched_pairs() -> Vec<(String, MatchedPair)> {
    let mut out = Vec::new();
    for (name, sigma) in bundled_groups() {
        for (i, (g, k)) in sigma.exact_factorizations().unwrap().into_iter().enumerate() {
            let mp = derive_matched_pair(&sigma, &g, &k).unwrap();
            out.push((format!("{name}#{i}"), mp));
        }
    }
    out
}

/// `Z2` acting on `TY(A)` by inversion on the invertibles and fixing `m`,
/// with the trivial matched pair `G = Γ = Z2`.
pub fn ty_inversion(a: &FiniteGroup) -> Result<CrossedActionData> {
    let ring: FusionRing = tambara_yamagami(a)?;
    let z2 = cyclic(2);
    let n = a.order();
    let grading = Grading::new(
        z2.clone(),
        (0..=n).map(|x| usize::from(x == n)).collect(),
    );
    let act = (0..=n)
        .map(|x| {
            let inverted = if x == n { n } else { a.inv(x) };
            vec![x, inverted]
        })
        .collect();
    CrossedActionData::new(ring, MatchedPair::trivial(z2.clone(), z2), grading, act)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_orders() {
        let orders: Vec<usize> = bundled_groups().iter().map(|(_, g)| g.order()).collect();
        assert_eq!(orders, vec![6, 6, 8, 8, 12, 24, 4]);
    }

    #[test]
    fn quaternion_has_a_unique_involution() {
        let q = quaternion8();
        assert!(!q.is_abelian());
        let involutions = q.elements().filter(|&a| q.element_order(a) == 2).count();
        assert_eq!(involutions, 1);
    }
}
