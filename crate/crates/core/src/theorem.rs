//! End-to-end comparison, for a matched pair `(G, Γ)`, of the crossed
//! extension `K((vec_Γ)^(G,Γ))` with the bimodule model of the dual of
//! `vec_Σ`, `Σ = G ⋈ Γ`, with respect to the subgroup `G`.

use crate::bicross::{bicrossed_ring, verify_exact_factorization};
use crate::crossact::CrossedActionData;
use crate::dualgt::{dual_ring_group_theoretical, DualRing};
use crate::equivar::{equivariantize_pointed, extension_checks, EquivariantRing};
use crate::error::{Error, Result};
use crate::fusring::{find_based_iso, BasedRingIso};
use crate::matched::{verify_matched_pair, zappa_szep, MatchedPair};
use crate::report::Report;
use crate::Options;

/// Everything computed by [`theorem1`].
#[derive(Clone, Debug)]
pub struct TheoremOutcome {
    /// The crossed extension ring and its simples.
    pub extension_ring: EquivariantRing,
    /// The dual-category ring and its simples.
    pub dual_ring: DualRing,
    /// A based isomorphism from the first ring to the second, if any.
    pub iso: Option<BasedRingIso>,
    /// Failed checks; empty when the comparison succeeds.
    pub report: Report,
}

impl TheoremOutcome {
    pub fn passed(&self) -> bool {
        self.report.is_ok()
    }
}

/// Runs the pipeline: pointed crossed action, equivariantization, the dual
/// model over `Σ = G ⋈ Γ` with `H = {(g, e)}`, the isomorphism search, the
/// extension-shape checks and the exact factorization of the bicrossed
/// product.
///
/// Errors are reserved for invalid input and undecided searches
/// ([`Error::Timeout`]); a failed comparison is reported in the outcome.
pub fn theorem1(mp: &MatchedPair, opts: &Options) -> Result<TheoremOutcome> {
    let rep = verify_matched_pair(mp);
    if !rep.is_ok() {
        return Err(Error::Axiom(format!("invalid matched pair:\n{rep}")));
    }
    let d = CrossedActionData::pointed(mp);
    let k1 = equivariantize_pointed(&d, opts)?;

    let sigma = zappa_szep(mp)?;
    let e = mp.gamma().identity();
    let h_elems: Vec<usize> = mp.g().elements().map(|g| mp.pair_index(g, e)).collect();
    let h = sigma.subgroup(&h_elems)?;
    let k2 = dual_ring_group_theoretical(&sigma, &h, opts)?;

    let mut report = Report::new();
    let iso = find_based_iso(&k1.ring, &k2.ring)?;
    if iso.is_none() {
        report.record(
            "based isomorphism between the crossed extension and the dual model",
            &[k1.ring.rank(), k2.ring.rank()],
        );
    }
    report.merge(
        "extension: ",
        extension_checks(&k1.ring, &k1.simples, &d, opts)?,
    );
    let b = bicrossed_ring(&d)?;
    report.merge(
        "exact factorization: ",
        verify_exact_factorization(&b.ring, &b.g_labels(), &b.c_labels())?,
    );
    Ok(TheoremOutcome {
        extension_ring: k1,
        dual_ring: k2,
        iso,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite;

    #[test]
    fn s3_pair_passes() {
        let out = theorem1(&suite::s3_pair(), &Options::default()).unwrap();
        assert!(out.passed(), "{}", out.report);
        assert_eq!(out.extension_ring.ring.rank(), 3);
    }

    #[test]
    fn invalid_pair_is_an_input_error() {
        let mut mp = suite::s3_pair();
        mp.set_ract(1, 1, 1);
        assert!(matches!(theorem1(&mp, &Options::default()), Err(Error::Axiom(_))));
    }
}
