//! `(G, Γ)`-crossed actions on a fusion ring, strictified to label tables.

use crate::error::{Error, Result};
use crate::fusring::{group_ring, validate_fusion_ring, verify_grading, FusionRing, Grading};
use crate::matched::{verify_matched_pair, MatchedPair};
use crate::report::Report;

/// A fusion ring `C` graded by `Γ`, a matched pair `(G, Γ)` and a right
/// action `a ◁ g` of `G` on the labels (`act[a][g]`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedActionData {
    pub ring: FusionRing,
    pub mp: MatchedPair,
    pub grading: Grading,
    pub act: Vec<Vec<usize>>,
}

impl CrossedActionData {
    /// Checks shapes: the grading group must be `Γ` and `act` must be a
    /// `rank × |G|` table of labels.
    pub fn new(
        ring: FusionRing,
        mp: MatchedPair,
        grading: Grading,
        act: Vec<Vec<usize>>,
    ) -> Result<Self> {
        if grading.group != *mp.gamma() {
            return Err(Error::Format(
                "the grading group must be the Gamma of the matched pair".into(),
            ));
        }
        if grading.deg.len() != ring.rank() {
            return Err(Error::Format("grading needs one degree per label".into()));
        }
        let ng = mp.g().order();
        if act.len() != ring.rank()
            || act.iter().any(|row| row.len() != ng || row.iter().any(|&x| x >= ring.rank()))
        {
            return Err(Error::Format(format!(
                "act must be a {}x{ng} table of labels indexed [label][g]",
                ring.rank()
            )));
        }
        Ok(CrossedActionData {
            ring,
            mp,
            grading,
            act,
        })
    }

    /// The pointed crossed action of a matched pair: `C = K(vec_Γ)` graded by
    /// itself, with `γ ◁ g = γ ◀ g`.
    pub fn pointed(mp: &MatchedPair) -> Self {
        let gamma = mp.gamma().clone();
        let ring = group_ring(&gamma);
        let deg = gamma.elements().collect();
        let act = gamma
            .elements()
            .map(|k| mp.g().elements().map(|g| mp.ract(k, g)).collect())
            .collect();
        CrossedActionData {
            ring,
            mp: mp.clone(),
            grading: Grading::new(gamma, deg),
            act,
        }
    }

    /// `G` acting trivially on a graded ring, with both matched-pair actions
    /// trivial.
    pub fn trivial(ring: FusionRing, grading: Grading, g: crate::grp::FiniteGroup) -> Self {
        let mp = MatchedPair::trivial(g.clone(), grading.group.clone());
        let act = (0..ring.rank()).map(|a| vec![a; g.order()]).collect();
        CrossedActionData {
            ring,
            mp,
            grading,
            act,
        }
    }

    #[inline]
    pub fn act(&self, a: usize, g: usize) -> usize {
        self.act[a][g]
    }

    #[inline]
    pub fn deg(&self, a: usize) -> usize {
        self.grading.deg[a]
    }
}

/// Exhaustive check of the ring, the matched pair, the grading and every
/// crossed-action condition.
pub fn verify_crossed_action(d: &CrossedActionData) -> Report {
    let mut rep = Report::new();
    rep.merge("ring: ", validate_fusion_ring(&d.ring));
    rep.merge("matched pair: ", verify_matched_pair(&d.mp));
    rep.merge("grading: ", verify_grading(&d.ring, &d.grading));
    if !rep.is_ok() {
        return rep;
    }
    let r = &d.ring;
    let g = d.mp.g();
    let k = r.rank();
    for a in 0..k {
        if d.act(a, g.identity()) != a {
            rep.record("a◁e = a", &[a]);
        }
        for x in g.elements() {
            for y in g.elements() {
                if d.act(d.act(a, x), y) != d.act(a, g.mul(x, y)) {
                    rep.record("(a◁g)◁h = a◁(gh)", &[a, x, y]);
                }
            }
            if d.deg(d.act(a, x)) != d.mp.ract(d.deg(a), x) {
                rep.record("grading equivariance deg(a◁g) = deg(a)◀g", &[a, x]);
            }
            let da = r.dual(a);
            let lhs = r.dual(d.act(a, d.mp.lact(d.deg(da), x)));
            if lhs != d.act(da, x) {
                rep.record("dual compatibility dual(a◁(deg(a*)▶g)) = a*◁g", &[a, x]);
            }
        }
    }
    for x in g.elements() {
        if d.act(r.unit(), x) != r.unit() {
            rep.record("unit◁g = unit", &[x]);
        }
        for a in 0..k {
            for b in 0..k {
                let shifted = d.act(a, d.mp.lact(d.deg(b), x));
                let bg = d.act(b, x);
                for c in 0..k {
                    if r.n(a, b, c) != r.n(shifted, bg, d.act(c, x)) {
                        rep.record(
                            "twisted multiplicativity N[a][b][c] = N[a◁(deg(b)▶g)][b◁g][c◁g]",
                            &[a, b, c, x],
                        );
                    }
                }
            }
        }
    }
    rep
}

/// The matched pair of fusion categories `(vec_G, C)` induced by a crossed
/// action: `Γ` acts on `Irr(vec_G) = G` through `▶`, `C` carries `◁`, and
/// all coherence data are identities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPairFc {
    /// `lact[k][g] = k ▷ g = k ▶ g`.
    pub lact: Vec<Vec<usize>>,
    /// `ract[a][g] = a ◁ g`.
    pub ract: Vec<Vec<usize>>,
    pub gamma_identity: bool,
    pub eta_identity: bool,
    pub gamma0_identity: bool,
    pub eta0_identity: bool,
}

impl MatchedPairFc {
    pub fn is_lact_trivial(&self) -> bool {
        self.lact.iter().all(|row| row.iter().enumerate().all(|(g, &x)| x == g))
    }

    pub fn is_ract_trivial(&self) -> bool {
        self.ract.iter().enumerate().all(|(a, row)| row.iter().all(|&x| x == a))
    }
}

pub fn matched_pair_fc(d: &CrossedActionData) -> Result<MatchedPairFc> {
    let rep = verify_crossed_action(d);
    if !rep.is_ok() {
        return Err(Error::Axiom(format!("invalid crossed action:\n{rep}")));
    }
    Ok(MatchedPairFc {
        lact: d.mp.lact_table().to_vec(),
        ract: d.act.clone(),
        gamma_identity: true,
        eta_identity: true,
        gamma0_identity: true,
        eta0_identity: true,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fusring::{tambara_yamagami, universal_grading};
    use crate::suite;

    #[test]
    fn pointed_s3_is_valid() {
        let d = CrossedActionData::pointed(&suite::s3_pair());
        assert!(verify_crossed_action(&d).is_ok());
        let fc = matched_pair_fc(&d).unwrap();
        assert!(fc.is_lact_trivial());
        // The involution inverts Z3.
        let gamma = d.mp.gamma();
        for k in gamma.elements() {
            assert_eq!(fc.ract[k][1], gamma.inv(k));
        }
    }

    #[test]
    fn ty3_inversion_is_valid() {
        let d = suite::ty_inversion(&suite::cyclic(3)).unwrap();
        assert!(verify_crossed_action(&d).is_ok());
        let fc = matched_pair_fc(&d).unwrap();
        assert!(fc.is_lact_trivial());
        assert_eq!(fc.ract[3], vec![3, 3]);
    }

    #[test]
    fn trivial_group_acts_validly() {
        let ty = tambara_yamagami(&suite::cyclic(3)).unwrap();
        let (_, grading) = universal_grading(&ty).unwrap();
        let d = CrossedActionData::trivial(ty, grading, suite::cyclic(1));
        assert!(verify_crossed_action(&d).is_ok());
    }

    #[test]
    fn broken_action_is_reported() {
        let mut d = CrossedActionData::pointed(&suite::s3_pair());
        d.act[1][1] = 1;
        let rep = verify_crossed_action(&d);
        assert!(!rep.is_ok());
        assert!(matches!(matched_pair_fc(&d), Err(Error::Axiom(_))));
    }
}
