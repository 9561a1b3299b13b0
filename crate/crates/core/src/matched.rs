//! Matched pairs of groups and their Zappa–Szép products.
//!
//! A matched pair `(G, Γ, ▶, ◀)` is stored as two dense `|Γ|×|G|` tables:
//! `lact[k][g] = k▶g ∈ G` and `ract[k][g] = k◀g ∈ Γ`. The product on `G×Γ`
//! is `(h, k)(g, t) = (h·(k▶g), (k◀g)·t)`, and the element `(g, k)` has index
//! `g·|Γ| + k`.

use crate::error::{Error, Result};
use crate::grp::{FiniteGroup, Subgroup};
use crate::report::Report;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchedPair {
    g: FiniteGroup,
    gamma: FiniteGroup,
    lact: Vec<Vec<usize>>,
    ract: Vec<Vec<usize>>,
}

impl MatchedPair {
    /// Wraps the data after checking table shapes and index ranges. The
    /// axioms are checked by [`verify_matched_pair`].
    pub fn new(
        g: FiniteGroup,
        gamma: FiniteGroup,
        lact: Vec<Vec<usize>>,
        ract: Vec<Vec<usize>>,
    ) -> Result<Self> {
        let (ng, nk) = (g.order(), gamma.order());
        for (name, table, bound) in [("lact", &lact, ng), ("ract", &ract, nk)] {
            if table.len() != nk || table.iter().any(|r| r.len() != ng) {
                return Err(Error::Format(format!(
                    "{name} must be a {nk}x{ng} table indexed [k][g]"
                )));
            }
            if table.iter().flatten().any(|&x| x >= bound) {
                return Err(Error::Format(format!("{name} has an entry out of range")));
            }
        }
        Ok(MatchedPair {
            g,
            gamma,
            lact,
            ract,
        })
    }

    /// Both actions trivial; the Zappa–Szép product is the direct product.
    pub fn trivial(g: FiniteGroup, gamma: FiniteGroup) -> Self {
        let lact = vec![(0..g.order()).collect(); gamma.order()];
        let ract = (0..gamma.order()).map(|k| vec![k; g.order()]).collect();
        MatchedPair {
            g,
            gamma,
            lact,
            ract,
        }
    }

    pub fn g(&self) -> &FiniteGroup {
        &self.g
    }

    pub fn gamma(&self) -> &FiniteGroup {
        &self.gamma
    }

    /// `k ▶ g`.
    #[inline]
    pub fn lact(&self, k: usize, g: usize) -> usize {
        self.lact[k][g]
    }

    /// `k ◀ g`.
    #[inline]
    pub fn ract(&self, k: usize, g: usize) -> usize {
        self.ract[k][g]
    }

    pub fn lact_table(&self) -> &[Vec<usize>] {
        &self.lact
    }

    pub fn ract_table(&self) -> &[Vec<usize>] {
        &self.ract
    }

    pub fn set_ract(&mut self, k: usize, g: usize, value: usize) {
        self.ract[k][g] = value;
    }

    pub fn set_lact(&mut self, k: usize, g: usize, value: usize) {
        self.lact[k][g] = value;
    }

    pub fn is_lact_trivial(&self) -> bool {
        self.lact.iter().all(|row| row.iter().enumerate().all(|(g, &x)| x == g))
    }

    pub fn is_ract_trivial(&self) -> bool {
        self.ract.iter().enumerate().all(|(k, row)| row.iter().all(|&x| x == k))
    }

    /// Index of `(g, k)` in the Zappa–Szép product.
    #[inline]
    pub fn pair_index(&self, g: usize, k: usize) -> usize {
        g * self.gamma.order() + k
    }
}

/// Reads off the matched pair of an exact factorization `Σ = GΓ`: for
/// `k ∈ Γ`, `g ∈ G` the product `k·g` is written uniquely as `g′·k′`, and
/// `k▶g = g′`, `k◀g = k′`.
pub fn derive_matched_pair(
    sigma: &FiniteGroup,
    g_sub: &Subgroup,
    k_sub: &Subgroup,
) -> Result<MatchedPair> {
    sigma.subgroup(g_sub.elements())?;
    sigma.subgroup(k_sub.elements())?;
    let intersection = g_sub.intersection_order(k_sub);
    if intersection != 1 || g_sub.order() * k_sub.order() != sigma.order() {
        return Err(Error::Factorization {
            g: g_sub.order(),
            gamma: k_sub.order(),
            intersection,
            sigma: sigma.order(),
        });
    }
    let (ng, nk) = (g_sub.order(), k_sub.order());
    // Every element of Σ as a unique product g·k.
    let mut split = vec![(usize::MAX, usize::MAX); sigma.order()];
    for (gi, &g) in g_sub.elements().iter().enumerate() {
        for (ki, &k) in k_sub.elements().iter().enumerate() {
            split[sigma.mul(g, k)] = (gi, ki);
        }
    }
    let mut lact = vec![vec![0; ng]; nk];
    let mut ract = vec![vec![0; ng]; nk];
    for (ki, &k) in k_sub.elements().iter().enumerate() {
        for (gi, &g) in g_sub.elements().iter().enumerate() {
            let (g2, k2) = split[sigma.mul(k, g)];
            lact[ki][gi] = g2;
            ract[ki][gi] = k2;
        }
    }
    MatchedPair::new(g_sub.to_group(sigma), k_sub.to_group(sigma), lact, ract)
}

/// Exhaustive check of the matched-pair axioms.
pub fn verify_matched_pair(mp: &MatchedPair) -> Report {
    let mut r = Report::new();
    let (g, k) = (&mp.g, &mp.gamma);
    let (eg, ek) = (g.identity(), k.identity());
    for x in g.elements() {
        if mp.lact(ek, x) != x {
            r.record("left action unit e▶g = g", &[ek, x]);
        }
    }
    for t in k.elements() {
        if mp.ract(t, eg) != t {
            r.record("right action unit k◀e = k", &[t, eg]);
        }
        if mp.lact(t, eg) != eg {
            r.record("unit condition k▶e = e", &[t, eg]);
        }
    }
    for x in g.elements() {
        if mp.ract(ek, x) != ek {
            r.record("unit condition e◀g = e", &[ek, x]);
        }
    }
    for a in k.elements() {
        for b in k.elements() {
            for x in g.elements() {
                if mp.lact(k.mul(a, b), x) != mp.lact(a, mp.lact(b, x)) {
                    r.record("left action (kt)▶g = k▶(t▶g)", &[a, b, x]);
                }
                let lhs = mp.ract(k.mul(a, b), x);
                let rhs = k.mul(mp.ract(a, mp.lact(b, x)), mp.ract(b, x));
                if lhs != rhs {
                    r.record("compatibility 1: (kt)◀g = (k◀(t▶g))(t◀g)", &[a, b, x]);
                }
            }
        }
    }
    for a in k.elements() {
        for x in g.elements() {
            for y in g.elements() {
                if mp.ract(a, g.mul(x, y)) != mp.ract(mp.ract(a, x), y) {
                    r.record("right action k◀(gh) = (k◀g)◀h", &[a, x, y]);
                }
                let lhs = mp.lact(a, g.mul(x, y));
                let rhs = g.mul(mp.lact(a, x), mp.lact(mp.ract(a, x), y));
                if lhs != rhs {
                    r.record("compatibility 2: k▶(gh) = (k▶g)((k◀g)▶h)", &[a, x, y]);
                }
            }
        }
    }
    r
}

/// The Zappa–Szép product `G ⋈ Γ`.
pub fn zappa_szep(mp: &MatchedPair) -> Result<FiniteGroup> {
    let report = verify_matched_pair(mp);
    if !report.is_ok() {
        return Err(Error::Axiom(format!("invalid matched pair:\n{report}")));
    }
    let (ng, nk) = (mp.g.order(), mp.gamma.order());
    let n = ng * nk;
    let table = (0..n)
        .map(|x| {
            let (h, k) = (x / nk, x % nk);
            (0..n)
                .map(|y| {
                    let (g, t) = (y / nk, y % nk);
                    let left = mp.g.mul(h, mp.lact(k, g));
                    let right = mp.gamma.mul(mp.ract(k, g), t);
                    mp.pair_index(left, right)
                })
                .collect()
        })
        .collect();
    let names = (0..n)
        .map(|x| format!("({},{})", mp.g.name(x / nk), mp.gamma.name(x % nk)))
        .collect();
    Ok(FiniteGroup::from_table(table)?.with_names(names))
}

/// The map `(g, k) ↦ g·k` from the Zappa–Szép product of a derived pair back
/// into the ambient group, indexed by pair index.
pub fn product_map(sigma: &FiniteGroup, g_sub: &Subgroup, k_sub: &Subgroup) -> Vec<usize> {
    g_sub
        .elements()
        .iter()
        .flat_map(|&g| k_sub.elements().iter().map(move |&k| sigma.mul(g, k)))
        .collect()
}
