//! The bicrossed product ring `K(vec_G ⋈ C)` and exact factorizations of
//! based rings.

use crate::crossact::{verify_crossed_action, CrossedActionData};
use crate::error::{Error, Result};
use crate::fusring::{fpdim, solve_duals, validate_fusion_ring, FusionRing};
use crate::report::Report;

/// Tolerance of the FP-dimension comparison in [`verify_exact_factorization`].
pub const FACTORIZATION_TOL: f64 = 1e-6;

/// The bicrossed product ring together with the data it was built from.
#[derive(Clone, Debug)]
pub struct BicrossedRing {
    pub ring: FusionRing,
    pub data: CrossedActionData,
}

impl BicrossedRing {
    /// Label index of `g ⋈ a`.
    pub fn index(&self, g: usize, a: usize) -> usize {
        g * self.data.ring.rank() + a
    }

    /// The labels `{(g, unit)}`, spanning a copy of `K(vec_G)`.
    pub fn g_labels(&self) -> Vec<usize> {
        let u = self.data.ring.unit();
        self.data.mp.g().elements().map(|g| self.index(g, u)).collect()
    }

    /// The labels `{(e, a)}`, spanning a copy of `C`.
    pub fn c_labels(&self) -> Vec<usize> {
        let e = self.data.mp.g().identity();
        (0..self.data.ring.rank()).map(|a| self.index(e, a)).collect()
    }
}

/// `N[(g,a)][(g′,a′)][(h,c)] = δ(h, g·(deg(a)▶g′)) · N_C[a◁g′][a′][c]`.
pub fn bicrossed_ring(d: &CrossedActionData) -> Result<BicrossedRing> {
    let rep = verify_crossed_action(d);
    if !rep.is_ok() {
        return Err(Error::Axiom(format!("invalid crossed action:\n{rep}")));
    }
    let c = &d.ring;
    let g = d.mp.g();
    let k = c.rank();
    let rank = g.order() * k;
    let idx = |x: usize, a: usize| x * k + a;
    let mut triples = Vec::new();
    for x in g.elements() {
        for a in 0..k {
            for y in g.elements() {
                let h = g.mul(x, d.mp.lact(d.deg(a), y));
                let shifted = d.act(a, y);
                for b in 0..k {
                    for (cc, m) in c.product(shifted, b) {
                        triples.push((idx(x, a), idx(y, b), idx(h, cc), m));
                    }
                }
            }
        }
    }
    let unit = idx(g.identity(), c.unit());
    let mut ring = FusionRing::from_triples(rank, unit, vec![0; rank], &triples)?;
    let dual = solve_duals(rank, unit, |x, y, z| ring.n(x, y, z))?;
    ring = FusionRing::from_triples(rank, unit, dual, &triples)?.with_labels(
        g.elements()
            .flat_map(|x| (0..k).map(move |a| (x, a)))
            .map(|(x, a)| format!("{}⋈{}", g.name(x), c.label(a)))
            .collect(),
    );
    let rep = validate_fusion_ring(&ring);
    if let Some(v) = rep.violations.first() {
        return Err(Error::validation(
            format!("bicrossed product fails {}", v.axiom),
            v.witness.clone(),
        ));
    }
    Ok(BicrossedRing {
        ring,
        data: d.clone(),
    })
}

/// Checks that `A` and `C` (label subsets of `B`) form an exact
/// factorization: `A ∩ C = {unit}`, `FPdim(B) = FPdim(A)·FPdim(C)` and every
/// label of `B` occurs in some `a ⊗ c`.
pub fn verify_exact_factorization(
    b: &FusionRing,
    a_labels: &[usize],
    c_labels: &[usize],
) -> Result<Report> {
    for (name, set) in [("A", a_labels), ("C", c_labels)] {
        if set.iter().any(|&x| x >= b.rank()) {
            return Err(Error::Subring(format!("{name} contains a label out of range")));
        }
        if !set.contains(&b.unit()) {
            return Err(Error::Subring(format!("{name} does not contain the unit")));
        }
        if !b.is_closed(set) {
            return Err(Error::Subring(format!("{name} is not closed under the product")));
        }
    }
    let mut rep = Report::new();
    let common: Vec<usize> = a_labels
        .iter()
        .copied()
        .filter(|x| c_labels.contains(x))
        .collect();
    if common != [b.unit()] {
        rep.record("A ∩ C = {unit}", &common);
    }
    let d = fpdim(b)?;
    let total = |set: &[usize]| set.iter().map(|&x| d.dims[x] * d.dims[x]).sum::<f64>();
    let (fa, fc) = (total(a_labels), total(c_labels));
    if (d.total - fa * fc).abs() > FACTORIZATION_TOL {
        rep.record_detail(
            "FPdim(B) = FPdim(A)·FPdim(C)",
            &[],
            format!("{} vs {} · {}", d.total, fa, fc),
        );
    }
    let mut hit = vec![false; b.rank()];
    for &x in a_labels {
        for &y in c_labels {
            for (z, _) in b.product(x, y) {
                hit[z] = true;
            }
        }
    }
    if let Some(missing) = hit.iter().position(|&h| !h) {
        rep.record("every label occurs in some a ⊗ c", &[missing]);
    }
    Ok(rep)
}
