//! Fusion rings: validation, Frobenius–Perron dimensions, gradings, the
//! standard examples and a backtracking search for based isomorphisms.

use std::collections::{BTreeMap, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grp::FiniteGroup;
use crate::numlin::{self, round_guarded, Matrix, C64};
use crate::report::Report;

/// Largest supported rank.
pub const MAX_RANK: usize = 64;
/// Node budget of [`find_based_iso`].
pub const ISO_NODE_LIMIT: u64 = 10_000_000;

const FP_RESIDUAL: f64 = 1e-12;
const FP_MAX_ITERS: usize = 100_000;

/// A based ring with a dense structure tensor `N[a][b][c]`, the multiplicity
/// of `c` in `a ⊗ b`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionRing {
    rank: usize,
    unit: usize,
    dual: Vec<usize>,
    n: Vec<u32>,
    labels: Vec<String>,
}

impl FusionRing {
    /// Builds a ring from sparse `(a, b, c, multiplicity)` entries. Only
    /// shapes and ranges are checked; axioms are left to
    /// [`validate_fusion_ring`].
    pub fn from_triples(
        rank: usize,
        unit: usize,
        dual: Vec<usize>,
        triples: &[(usize, usize, usize, u32)],
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Format("rank must be positive".into()));
        }
        if rank > MAX_RANK {
            return Err(Error::Size {
                what: "fusion ring rank",
                size: rank,
                cap: MAX_RANK,
            });
        }
        if unit >= rank {
            return Err(Error::Format(format!("unit {unit} out of range")));
        }
        if dual.len() != rank || dual.iter().any(|&d| d >= rank) {
            return Err(Error::Format("dual must be a list of rank labels".into()));
        }
        let mut n = vec![0u32; rank * rank * rank];
        for &(a, b, c, m) in triples {
            if a >= rank || b >= rank || c >= rank {
                return Err(Error::Format(format!("entry ({a},{b},{c}) out of range")));
            }
            n[(a * rank + b) * rank + c] = m;
        }
        Ok(FusionRing {
            rank,
            unit,
            dual,
            n,
            labels: (0..rank).map(|a| a.to_string()).collect(),
        })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.rank, "one label per basis element");
        self.labels = labels;
        self
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn dual(&self, a: usize) -> usize {
        self.dual[a]
    }

    pub fn duals(&self) -> &[usize] {
        &self.dual
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn label_index(&self, name: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == name)
    }

    #[inline]
    pub fn n(&self, a: usize, b: usize, c: usize) -> u32 {
        self.n[(a * self.rank + b) * self.rank + c]
    }

    pub fn set_n(&mut self, a: usize, b: usize, c: usize, m: u32) {
        let r = self.rank;
        self.n[(a * r + b) * r + c] = m;
    }

    /// The decomposition of `a ⊗ b` as `(label, multiplicity)` pairs.
    pub fn product(&self, a: usize, b: usize) -> Vec<(usize, u32)> {
        let r = self.rank;
        let row = &self.n[(a * r + b) * r..(a * r + b + 1) * r];
        row.iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(c, &m)| (c, m))
            .collect()
    }

    /// Non-zero entries in lexicographic order.
    pub fn triples(&self) -> Vec<(usize, usize, usize, u32)> {
        let r = self.rank;
        let mut out = Vec::new();
        for a in 0..r {
            for b in 0..r {
                for (c, m) in self.product(a, b) {
                    out.push((a, b, c, m));
                }
            }
        }
        out
    }

    /// Renames label `a` to `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> FusionRing {
        let r = self.rank;
        let mut out = self.clone();
        for a in 0..r {
            out.dual[perm[a]] = perm[self.dual[a]];
            out.labels[perm[a]] = self.labels[a].clone();
            for b in 0..r {
                for c in 0..r {
                    out.set_n(perm[a], perm[b], perm[c], self.n(a, b, c));
                }
            }
        }
        out.unit = perm[self.unit];
        out
    }

    /// Whether the span of `labels` is closed under the product.
    pub fn is_closed(&self, labels: &[usize]) -> bool {
        let mut inside = vec![false; self.rank];
        for &a in labels {
            inside[a] = true;
        }
        labels.iter().all(|&a| {
            labels
                .iter()
                .all(|&b| self.product(a, b).iter().all(|&(c, _)| inside[c]))
        })
    }

    /// The based subring spanned by `labels` (in the given order). Fails if
    /// the span is not closed under products and duals or misses the unit.
    pub fn subring(&self, labels: &[usize]) -> Result<FusionRing> {
        let mut pos = vec![usize::MAX; self.rank];
        for (i, &a) in labels.iter().enumerate() {
            pos[a] = i;
        }
        if pos[self.unit] == usize::MAX {
            return Err(Error::Subring("label set does not contain the unit".into()));
        }
        if !self.is_closed(labels) {
            return Err(Error::Subring("label set is not closed under the product".into()));
        }
        let dual = labels
            .iter()
            .map(|&a| pos[self.dual[a]])
            .collect::<Vec<_>>();
        if dual.contains(&usize::MAX) {
            return Err(Error::Subring("label set is not closed under duals".into()));
        }
        let mut triples = Vec::new();
        for (i, &a) in labels.iter().enumerate() {
            for (j, &b) in labels.iter().enumerate() {
                for (c, m) in self.product(a, b) {
                    triples.push((i, j, pos[c], m));
                }
            }
        }
        let names = labels.iter().map(|&a| self.labels[a].clone()).collect();
        Ok(FusionRing::from_triples(labels.len(), pos[self.unit], dual, &triples)?.with_labels(names))
    }
}

/// Solves `N[x][y][unit] = 1` for every `x`, requiring exactly one solution
/// `y` (with multiplicity one) per label.
pub fn solve_duals(rank: usize, unit: usize, n: impl Fn(usize, usize, usize) -> u32) -> Result<Vec<usize>> {
    (0..rank)
        .map(|x| {
            let hits: Vec<usize> = (0..rank).filter(|&y| n(x, y, unit) > 0).collect();
            match hits.as_slice() {
                [y] if n(x, *y, unit) == 1 => Ok(*y),
                [] => Err(Error::Rigidity(format!("label {x} has no dual"))),
                _ => Err(Error::Rigidity(format!(
                    "label {x} has no unique dual (candidates {hits:?})"
                ))),
            }
        })
        .collect()
}

/// Exhaustive check of the based-ring axioms, including the full
/// `O(rank⁴)` associativity scan.
pub fn validate_fusion_ring(r: &FusionRing) -> Report {
    let mut rep = Report::new();
    let (k, u) = (r.rank, r.unit);
    for a in 0..k {
        for b in 0..k {
            let delta = u32::from(a == b);
            if r.n(u, a, b) != delta {
                rep.record("unit law N[unit][b][c] = δ(b,c)", &[a, b]);
            }
            if r.n(a, u, b) != delta {
                rep.record("unit law N[a][unit][c] = δ(a,c)", &[a, b]);
            }
        }
    }
    if r.dual[u] != u {
        rep.record("dual(unit) = unit", &[u]);
    }
    for a in 0..k {
        if r.dual[r.dual[a]] != a {
            rep.record("dual is an involution", &[a]);
        }
        for b in 0..k {
            if r.n(a, b, u) != u32::from(b == r.dual[a]) {
                rep.record("dual pairing N[a][b][unit] = δ(b, dual(a))", &[a, b]);
            }
        }
    }
    if let Some((witness, count)) = associativity_failures(r) {
        rep.record("associativity", &witness);
        if let Some(v) = rep.violations.last_mut() {
            v.count = count;
        }
    }
    rep
}

/// First failing `(a, b, c, d)` of `(a⊗b)⊗c = a⊗(b⊗c)` and the number of
/// failing tuples, scanning the outer index in parallel.
fn associativity_failures(r: &FusionRing) -> Option<(Vec<usize>, usize)> {
    let k = r.rank;
    let per_a: Vec<(Option<Vec<usize>>, usize)> = (0..k)
        .into_par_iter()
        .map(|a| {
            let mut first = None;
            let mut count = 0;
            let mut lhs = vec![0u64; k];
            let mut rhs = vec![0u64; k];
            for b in 0..k {
                let ab = r.product(a, b);
                for c in 0..k {
                    lhs.iter_mut().for_each(|x| *x = 0);
                    rhs.iter_mut().for_each(|x| *x = 0);
                    for &(x, m) in &ab {
                        for (d, m2) in r.product(x, c) {
                            lhs[d] += u64::from(m) * u64::from(m2);
                        }
                    }
                    for (y, m) in r.product(b, c) {
                        for (d, m2) in r.product(a, y) {
                            rhs[d] += u64::from(m) * u64::from(m2);
                        }
                    }
                    for d in 0..k {
                        if lhs[d] != rhs[d] {
                            count += 1;
                            first.get_or_insert_with(|| vec![a, b, c, d]);
                        }
                    }
                }
            }
            (first, count)
        })
        .collect();
    let count: usize = per_a.iter().map(|p| p.1).sum();
    per_a
        .into_iter()
        .find_map(|(w, _)| w)
        .map(|w| (w, count))
}

/// Frobenius–Perron dimensions of the basis and their sum of squares.
#[derive(Clone, Debug, PartialEq)]
pub struct FpDims {
    pub dims: Vec<f64>,
    pub total: f64,
}

fn round12(x: f64) -> f64 {
    (x * 1e12).round() / 1e12
}

/// Perron eigenvector of `K[b][c] = Σ_a N[a][b][c]`, normalised so that the
/// unit has dimension one, by power iteration.
pub fn fpdim(r: &FusionRing) -> Result<FpDims> {
    let k = r.rank;
    let mut kmat = vec![0.0f64; k * k];
    for a in 0..k {
        for b in 0..k {
            for (c, m) in r.product(a, b) {
                kmat[b * k + c] += f64::from(m);
            }
        }
    }
    let mut v = vec![1.0 / (k as f64).sqrt(); k];
    let mut w = vec![0.0; k];
    let mut converged = false;
    for _ in 0..FP_MAX_ITERS {
        for b in 0..k {
            w[b] = (0..k).map(|c| kmat[b * k + c] * v[c]).sum();
        }
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::Numeric("power iteration collapsed".into()));
        }
        let mut delta: f64 = 0.0;
        for b in 0..k {
            let next = w[b] / norm;
            delta = delta.max((next - v[b]).abs());
            v[b] = next;
        }
        if delta <= FP_RESIDUAL {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "FP-dimension power iteration did not converge in {FP_MAX_ITERS} iterations"
        )));
    }
    // Two steps of inverse iteration at the Rayleigh quotient bring the
    // vector to machine precision, so integral dimensions come out exact.
    let kmat = nalgebra::DMatrix::from_row_slice(k, k, &kmat);
    for _ in 0..2 {
        let x = nalgebra::DVector::from_column_slice(&v);
        let lambda = x.dot(&(&kmat * &x)) / x.dot(&x);
        let shifted = &kmat - nalgebra::DMatrix::identity(k, k) * lambda;
        match shifted.lu().solve(&x) {
            Some(y) if y.iter().all(|t| t.is_finite()) && y.norm() > 0.0 => {
                let sign = if y.sum() < 0.0 { -1.0 } else { 1.0 };
                let norm = y.norm();
                let y = y * (sign / norm);
                if residual(&kmat, &y) > residual(&kmat, &x) {
                    break;
                }
                v = y.iter().copied().collect();
            }
            _ => break,
        }
    }
    let scale = v[r.unit];
    if scale <= 0.0 {
        return Err(Error::Numeric("Perron vector vanishes on the unit".into()));
    }
    let dims: Vec<f64> = v.iter().map(|x| x / scale).collect();
    let total = dims.iter().map(|d| d * d).sum::<f64>();
    Ok(FpDims {
        dims: dims.into_iter().map(round12).collect(),
        total: round12(total),
    })
}

/// `max |Kx − λx|` at the Rayleigh quotient `λ`.
fn residual(kmat: &nalgebra::DMatrix<f64>, x: &nalgebra::DVector<f64>) -> f64 {
    let kx = kmat * x;
    let lambda = x.dot(&kx) / x.dot(x);
    (kx - x * lambda).amax()
}

/// A grading of the basis labels by a group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub group: FiniteGroup,
    pub deg: Vec<usize>,
}

impl Grading {
    pub fn new(group: FiniteGroup, deg: Vec<usize>) -> Self {
        Grading { group, deg }
    }

    /// Labels of degree `g`.
    pub fn component(&self, g: usize) -> Vec<usize> {
        (0..self.deg.len()).filter(|&a| self.deg[a] == g).collect()
    }
}

/// Checks support multiplicativity, unit and dual degrees and faithfulness.
pub fn verify_grading(r: &FusionRing, grading: &Grading) -> Report {
    let mut rep = Report::new();
    let g = &grading.group;
    if grading.deg.len() != r.rank || grading.deg.iter().any(|&x| x >= g.order()) {
        rep.record("degree map has one group element per label", &[grading.deg.len()]);
        return rep;
    }
    let deg = &grading.deg;
    for a in 0..r.rank {
        for b in 0..r.rank {
            for (c, _) in r.product(a, b) {
                if deg[c] != g.mul(deg[a], deg[b]) {
                    rep.record("support multiplicativity deg(c) = deg(a)deg(b)", &[a, b, c]);
                }
            }
        }
        if deg[r.dual[a]] != g.inv(deg[a]) {
            rep.record("deg(dual(a)) = deg(a)⁻¹", &[a]);
        }
    }
    if deg[r.unit] != g.identity() {
        rep.record("deg(unit) = e", &[r.unit]);
    }
    for x in g.elements() {
        if !deg.contains(&x) {
            rep.record("faithfulness", &[x]);
        }
    }
    rep
}

/// Labels occurring in the adjoint subring (generated by all `a ⊗ dual(a)`).
pub fn adjoint_labels(r: &FusionRing) -> Vec<usize> {
    let k = r.rank;
    let mut inside = vec![false; k];
    let mut queue = VecDeque::new();
    for a in 0..k {
        for (c, _) in r.product(a, r.dual[a]) {
            if !inside[c] {
                inside[c] = true;
                queue.push_back(c);
            }
        }
    }
    let mut members: Vec<usize> = queue.iter().copied().collect();
    while let Some(x) = queue.pop_front() {
        for y in members.clone() {
            for (p, q) in [(x, y), (y, x)] {
                for (c, _) in r.product(p, q) {
                    if !inside[c] {
                        inside[c] = true;
                        queue.push_back(c);
                        members.push(c);
                    }
                }
            }
        }
    }
    (0..k).filter(|&a| inside[a]).collect()
}

/// The universal grading: components are the classes of `a ~ b` iff
/// `N[x][a][b] > 0` for some adjoint label `x`, and the product of the ring
/// induces the group law on components. The component of the unit is the
/// identity; the others are numbered by their smallest label.
pub fn universal_grading(r: &FusionRing) -> Result<(FiniteGroup, Grading)> {
    let k = r.rank;
    let adjoint = adjoint_labels(r);
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    for &x in &adjoint {
        for a in 0..k {
            for (b, _) in r.product(x, a) {
                let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }
    let mut comp_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let unit_root = find(&mut parent, r.unit);
    comp_of_root.insert(unit_root, 0);
    for a in 0..k {
        let root = find(&mut parent, a);
        let next = comp_of_root.len();
        comp_of_root.entry(root).or_insert(next);
    }
    let deg: Vec<usize> = (0..k).map(|a| comp_of_root[&find(&mut parent, a)]).collect();
    let m = comp_of_root.len();
    let mut table = vec![vec![usize::MAX; m]; m];
    for a in 0..k {
        for b in 0..k {
            for (c, _) in r.product(a, b) {
                let slot = &mut table[deg[a]][deg[b]];
                if *slot == usize::MAX {
                    *slot = deg[c];
                } else if *slot != deg[c] {
                    return Err(Error::validation(
                        "components do not multiply consistently",
                        vec![a, b, c],
                    ));
                }
            }
        }
    }
    let group = FiniteGroup::from_table(table).map_err(|e| {
        Error::validation(format!("component product is not a group: {e}"), vec![])
    })?;
    let grading = Grading::new(group.clone(), deg);
    Ok((group, grading))
}

/// `K(vec_G)`: basis `G`, `a ⊗ b = ab`, dual = inverse.
pub fn group_ring(g: &FiniteGroup) -> FusionRing {
    let n = g.order();
    let triples: Vec<_> = g
        .elements()
        .flat_map(|a| g.elements().map(move |b| (a, b)))
        .map(|(a, b)| (a, b, g.mul(a, b), 1))
        .collect();
    let dual = g.elements().map(|a| g.inv(a)).collect();
    let labels = g.elements().map(|a| g.name(a)).collect();
    FusionRing::from_triples(n, g.identity(), dual, &triples)
        .expect("group ring data is well formed")
        .with_labels(labels)
}

/// Tambara–Yamagami ring over an abelian group `A`: labels `A ∪ {m}` with
/// `m` last, `a ⊗ m = m ⊗ a = m` and `m ⊗ m = Σ_a a`.
pub fn tambara_yamagami(a: &FiniteGroup) -> Result<FusionRing> {
    if !a.is_abelian() {
        return Err(Error::Domain(
            "Tambara-Yamagami rings need an abelian group".into(),
        ));
    }
    let n = a.order();
    let m = n;
    let mut triples = Vec::new();
    for x in a.elements() {
        for y in a.elements() {
            triples.push((x, y, a.mul(x, y), 1));
        }
        triples.push((x, m, m, 1));
        triples.push((m, x, m, 1));
        triples.push((m, m, x, 1));
    }
    let mut dual: Vec<usize> = a.elements().map(|x| a.inv(x)).collect();
    dual.push(m);
    let mut labels: Vec<String> = a.elements().map(|x| a.name(x)).collect();
    labels.push("m".into());
    Ok(FusionRing::from_triples(n + 1, a.identity(), dual, &triples)?.with_labels(labels))
}

/// Irreducible characters of a group, as values on every element.
#[derive(Clone, Debug)]
pub struct CharacterTable {
    pub degrees: Vec<usize>,
    pub values: Vec<Vec<C64>>,
}

/// Characters obtained by splitting the left regular representation.
///
/// Characters are ordered by degree, then by their values read element by
/// element in decreasing `(re, im)` order, so that the trivial character
/// comes first.
pub fn character_table(g: &FiniteGroup, seed: u64) -> Result<CharacterTable> {
    let n = g.order();
    let gens = g.generators();
    let action: Vec<Matrix> = gens
        .iter()
        .map(|&s| Matrix::permutation(&g.elements().map(|x| g.mul(s, x)).collect::<Vec<_>>()))
        .collect();
    let split = if action.is_empty() {
        numlin::split_commutant(&[Matrix::identity(n)], seed)?
    } else {
        numlin::split_commutant(&action, seed)?
    };
    let key = |v: &[C64]| -> Vec<(i64, i64)> {
        v.iter()
            .map(|z| ((z.re * 1e6).round() as i64, (z.im * 1e6).round() as i64))
            .collect()
    };
    let mut found: BTreeMap<(usize, std::cmp::Reverse<Vec<(i64, i64)>>), Vec<C64>> = BTreeMap::new();
    for block in &split.blocks {
        let b = &block.basis;
        let values: Vec<C64> = g
            .elements()
            .map(|x| {
                let mut t = C64::new(0.0, 0.0);
                for i in 0..b.cols() {
                    for y in 0..n {
                        t += b[(g.mul(x, y), i)].conj() * b[(y, i)];
                    }
                }
                t
            })
            .collect();
        let degree = round_guarded(values[g.identity()].re, "character degree")?;
        found
            .entry((degree, std::cmp::Reverse(key(&values))))
            .or_insert(values);
    }
    let degrees: Vec<usize> = found.keys().map(|k| k.0).collect();
    let sum_sq: usize = degrees.iter().map(|d| d * d).sum();
    if sum_sq != n {
        return Err(Error::Splitting(format!(
            "character degrees {degrees:?} have square sum {sum_sq}, expected {n}"
        )));
    }
    Ok(CharacterTable {
        degrees,
        values: found.into_values().collect(),
    })
}

/// `K(Rep G)` with the default seed.
pub fn rep_ring(g: &FiniteGroup) -> Result<FusionRing> {
    rep_ring_seeded(g, 0)
}

/// `K(Rep G)`: `N[χ][ψ][φ] = ⟨χψ, φ⟩`, rounded with the integer guard.
pub fn rep_ring_seeded(g: &FiniteGroup, seed: u64) -> Result<FusionRing> {
    let ct = character_table(g, seed)?;
    let k = ct.degrees.len();
    let order = g.order() as f64;
    let inner = |x: &[C64], y: &[C64]| -> C64 {
        x.iter().zip(y).map(|(a, b)| a * b.conj()).sum::<C64>() / order
    };
    let mut triples = Vec::new();
    for a in 0..k {
        for b in 0..k {
            let prod: Vec<C64> = ct.values[a]
                .iter()
                .zip(&ct.values[b])
                .map(|(x, y)| x * y)
                .collect();
            for c in 0..k {
                let z = inner(&prod, &ct.values[c]);
                if z.im.abs() > numlin::ROUNDING_GUARD {
                    return Err(Error::Numeric(format!(
                        "character inner product {z} is not real"
                    )));
                }
                let m = round_guarded(z.re, "character inner product")?;
                if m > 0 {
                    triples.push((a, b, c, m as u32));
                }
            }
        }
    }
    let dual = (0..k)
        .map(|a| {
            let conj: Vec<C64> = ct.values[a].iter().map(|z| z.conj()).collect();
            (0..k)
                .find(|&b| {
                    conj.iter()
                        .zip(&ct.values[b])
                        .all(|(x, y)| (x - y).norm() < numlin::ROUNDING_GUARD)
                })
                .ok_or_else(|| Error::Numeric("conjugate character not found".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    let labels = (0..k)
        .map(|a| {
            if a == 0 {
                "1".to_string()
            } else {
                format!("χ{a}[{}]", ct.degrees[a])
            }
        })
        .collect();
    Ok(FusionRing::from_triples(k, 0, dual, &triples)?.with_labels(labels))
}

/// A label bijection `map[a ∈ R1] ∈ R2` preserving unit, duals and `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasedRingIso {
    pub map: Vec<usize>,
}

impl BasedRingIso {
    /// Whether the map is a bijection that preserves unit, duals and every
    /// structure constant.
    pub fn check(&self, r1: &FusionRing, r2: &FusionRing) -> bool {
        let k = r1.rank;
        if r2.rank != k || self.map.len() != k {
            return false;
        }
        let mut seen = vec![false; k];
        for &b in &self.map {
            if b >= k || std::mem::replace(&mut seen[b], true) {
                return false;
            }
        }
        let f = &self.map;
        if f[r1.unit] != r2.unit {
            return false;
        }
        (0..k).all(|a| {
            f[r1.dual[a]] == r2.dual[f[a]]
                && (0..k).all(|b| (0..k).all(|c| r1.n(a, b, c) == r2.n(f[a], f[b], f[c])))
        })
    }
}

/// Searches for a based isomorphism `R1 → R2`.
///
/// Returns `Ok(None)` when the search space is exhausted and
/// [`Error::Timeout`] when the node budget runs out first.
pub fn find_based_iso(r1: &FusionRing, r2: &FusionRing) -> Result<Option<BasedRingIso>> {
    find_based_iso_with_limit(r1, r2, ISO_NODE_LIMIT)
}

pub fn find_based_iso_with_limit(
    r1: &FusionRing,
    r2: &FusionRing,
    limit: u64,
) -> Result<Option<BasedRingIso>> {
    if r1.rank != r2.rank {
        return Ok(None);
    }
    let mut budget = limit;
    if let Some(map) = search_iso(r1, r2, &mut budget)? {
        return verified(r1, r2, map).map(Some);
    }
    // An isomorphism onto the opposite ring, composed with the dual of R2,
    // is an isomorphism onto R2.
    let op = opposite(r2);
    if let Some(map) = search_iso(r1, &op, &mut budget)? {
        let map = map.into_iter().map(|b| r2.dual[b]).collect();
        return verified(r1, r2, map).map(Some);
    }
    Ok(None)
}

fn verified(r1: &FusionRing, r2: &FusionRing, map: Vec<usize>) -> Result<BasedRingIso> {
    let iso = BasedRingIso { map };
    if iso.check(r1, r2) {
        Ok(iso)
    } else {
        Err(Error::Consistency(
            "isomorphism search returned a map that does not preserve N".into(),
        ))
    }
}

/// `N^op[a][b][c] = N[b][a][c]`.
pub fn opposite(r: &FusionRing) -> FusionRing {
    let mut out = r.clone();
    for a in 0..r.rank {
        for b in 0..r.rank {
            for c in 0..r.rank {
                out.set_n(a, b, c, r.n(b, a, c));
            }
        }
    }
    out
}

/// Isomorphism-invariant fingerprint of a label.
fn label_invariants(r: &FusionRing, dims: &[f64]) -> Vec<Vec<i64>> {
    let k = r.rank;
    (0..k)
        .map(|a| {
            let mut inv = vec![(dims[a] * 1e6).round() as i64, i64::from(r.dual[a] == a)];
            let mut left: Vec<i64> = (0..k)
                .map(|b| r.product(a, b).iter().map(|p| i64::from(p.1)).sum())
                .collect();
            let mut right: Vec<i64> = (0..k)
                .map(|b| r.product(b, a).iter().map(|p| i64::from(p.1)).sum())
                .collect();
            left.sort_unstable();
            right.sort_unstable();
            inv.extend(left);
            inv.extend(right);
            inv.push(i64::from(r.n(a, a, a)));
            // Powers a^1..a^4: coefficient of the unit and total multiplicity.
            let mut power = vec![0u64; k];
            power[a] = 1;
            for _ in 0..4 {
                inv.push(power[r.unit] as i64);
                inv.push(power.iter().sum::<u64>() as i64);
                let mut next = vec![0u64; k];
                for (x, &c) in power.iter().enumerate() {
                    if c == 0 {
                        continue;
                    }
                    for (y, m) in r.product(x, a) {
                        next[y] += c * u64::from(m);
                    }
                }
                power = next;
            }
            inv
        })
        .collect()
}

struct IsoSearch<'a> {
    r1: &'a FusionRing,
    r2: &'a FusionRing,
    class1: Vec<usize>,
    class2: Vec<usize>,
    classes: usize,
    single1: Vec<Option<usize>>,
    single2: Vec<Option<usize>>,
    map: Vec<usize>,
    inv: Vec<usize>,
    log: Vec<usize>,
    budget: &'a mut u64,
}

fn singles(r: &FusionRing) -> Vec<Option<usize>> {
    let k = r.rank;
    let mut out = vec![None; k * k];
    for a in 0..k {
        for b in 0..k {
            if let [(c, 1)] = r.product(a, b).as_slice() {
                out[a * k + b] = Some(*c);
            }
        }
    }
    out
}

fn search_iso(r1: &FusionRing, r2: &FusionRing, budget: &mut u64) -> Result<Option<Vec<usize>>> {
    let k = r1.rank;
    let d1 = fpdim(r1)?;
    let d2 = fpdim(r2)?;
    let inv1 = label_invariants(r1, &d1.dims);
    let inv2 = label_invariants(r2, &d2.dims);
    let mut class_ids: BTreeMap<&Vec<i64>, usize> = BTreeMap::new();
    for v in inv1.iter().chain(&inv2) {
        let next = class_ids.len();
        class_ids.entry(v).or_insert(next);
    }
    let class1: Vec<usize> = inv1.iter().map(|v| class_ids[v]).collect();
    let class2: Vec<usize> = inv2.iter().map(|v| class_ids[v]).collect();
    let mut h1 = class1.clone();
    let mut h2 = class2.clone();
    h1.sort_unstable();
    h2.sort_unstable();
    if h1 != h2 || class1[r1.unit] != class2[r2.unit] {
        return Ok(None);
    }
    let classes = class_ids.len();
    let mut s = IsoSearch {
        r1,
        r2,
        class1,
        class2,
        classes,
        single1: singles(r1),
        single2: singles(r2),
        map: vec![usize::MAX; k],
        inv: vec![usize::MAX; k],
        log: Vec::new(),
        budget,
    };
    if !s.assign(r1.unit, r2.unit) {
        return Ok(None);
    }
    // Most constrained labels first.
    let mut order: Vec<usize> = (0..k).collect();
    let class_size = |c: usize| s.class2.iter().filter(|&&x| x == c).count();
    order.sort_by_key(|&a| (class_size(s.class1[a]), a));
    if s.extend(&order)? {
        Ok(Some(s.map))
    } else {
        Ok(None)
    }
}

impl IsoSearch<'_> {
    fn extend(&mut self, order: &[usize]) -> Result<bool> {
        let Some(&a) = order.iter().find(|&&a| self.map[a] == usize::MAX) else {
            return Ok(true);
        };
        let k = self.r1.rank;
        for b in 0..k {
            if self.inv[b] != usize::MAX || self.class2[b] != self.class1[a] {
                continue;
            }
            if *self.budget == 0 {
                return Err(Error::Timeout {
                    nodes: ISO_NODE_LIMIT,
                });
            }
            *self.budget -= 1;
            let mark = self.log.len();
            if self.assign(a, b) && self.extend(order)? {
                return Ok(true);
            }
            self.undo(mark);
        }
        Ok(false)
    }

    fn undo(&mut self, mark: usize) {
        while self.log.len() > mark {
            let a = self.log.pop().unwrap();
            self.inv[self.map[a]] = usize::MAX;
            self.map[a] = usize::MAX;
        }
    }

    /// Assigns `a ↦ b` and everything it forces; on conflict returns false
    /// (the caller undoes the partial assignment).
    fn assign(&mut self, a: usize, b: usize) -> bool {
        let mut queue = vec![(a, b)];
        while let Some((x, y)) = queue.pop() {
            if self.map[x] == y {
                continue;
            }
            if self.map[x] != usize::MAX || self.inv[y] != usize::MAX || self.class1[x] != self.class2[y] {
                return false;
            }
            self.map[x] = y;
            self.inv[y] = x;
            self.log.push(x);
            queue.push((self.r1.dual[x], self.r2.dual[y]));
            if !self.consistent(x, &mut queue) {
                return false;
            }
        }
        true
    }

    /// Checks every structure constant involving `x` against the assigned
    /// labels and queues forced images of single products.
    fn consistent(&self, x: usize, queue: &mut Vec<(usize, usize)>) -> bool {
        let k = self.r1.rank;
        let (r1, r2, f) = (self.r1, self.r2, &self.map);
        for &p in &self.log {
            for &q in &self.log {
                if p != x && q != x {
                    continue;
                }
                for &z in &self.log {
                    if r1.n(p, q, z) != r2.n(f[p], f[q], f[z]) {
                        return false;
                    }
                }
                let mut hist = vec![0u64; self.classes];
                for (c, m) in r1.product(p, q) {
                    hist[self.class1[c]] += u64::from(m);
                }
                for (c, m) in r2.product(f[p], f[q]) {
                    let slot = &mut hist[self.class2[c]];
                    if *slot < u64::from(m) {
                        return false;
                    }
                    *slot -= u64::from(m);
                }
                if hist.iter().any(|&h| h != 0) {
                    return false;
                }
                match (self.single1[p * k + q], self.single2[f[p] * k + f[q]]) {
                    (Some(c), Some(d)) => queue.push((c, d)),
                    (None, None) => {}
                    _ => return false,
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::suite;

    #[test]
    fn group_rings_are_valid() {
        for (_, g) in suite::bundled_groups() {
            let r = group_ring(&g);
            assert!(validate_fusion_ring(&r).is_ok());
            let d = fpdim(&r).unwrap();
            assert_eq!(d.total, g.order() as f64);
            assert!(d.dims.iter().all(|&x| x == 1.0));
        }
    }

    #[test]
    fn ising_dimensions() {
        let ising = tambara_yamagami(&suite::cyclic(2)).unwrap();
        assert!(validate_fusion_ring(&ising).is_ok());
        let d = fpdim(&ising).unwrap();
        assert!((d.dims[2] - 2f64.sqrt()).abs() < 1e-9);
        assert!((d.total - 4.0).abs() < 1e-9);
    }

    #[test]
    fn tambara_yamagami_needs_abelian() {
        assert!(matches!(
            tambara_yamagami(&suite::symmetric3()),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn rep_ring_degrees() {
        let cases = [
            (suite::cyclic(2), vec![1, 1]),
            (suite::symmetric3(), vec![1, 1, 2]),
            (suite::quaternion8(), vec![1, 1, 1, 1, 2]),
            (suite::alternating4(), vec![1, 1, 1, 3]),
            (suite::symmetric4(), vec![1, 1, 2, 3, 3]),
        ];
        for (g, degrees) in cases {
            let r = rep_ring(&g).unwrap();
            assert!(validate_fusion_ring(&r).is_ok());
            let d = fpdim(&r).unwrap();
            let got: Vec<usize> = d.dims.iter().map(|x| x.round() as usize).collect();
            assert_eq!(got, degrees);
        }
    }

    #[test]
    fn universal_grading_examples() {
        let z6 = suite::cyclic(6);
        let (g, grading) = universal_grading(&group_ring(&z6)).unwrap();
        assert_eq!(g.order(), 6);
        assert!(verify_grading(&group_ring(&z6), &grading).is_ok());

        let ty = tambara_yamagami(&suite::cyclic(3)).unwrap();
        let (g, grading) = universal_grading(&ty).unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(grading.deg, vec![0, 0, 0, 1]);

        let (g, _) = universal_grading(&rep_ring(&suite::symmetric3()).unwrap()).unwrap();
        assert_eq!(g.order(), 1);
    }

    #[test]
    fn iso_search_examples() {
        let s3 = rep_ring(&suite::symmetric3()).unwrap();
        let iso = find_based_iso(&s3, &s3).unwrap().unwrap();
        assert_eq!(iso.map, vec![0, 1, 2]);
        let z4 = group_ring(&suite::cyclic(4));
        let v4 = group_ring(&suite::klein4());
        assert!(find_based_iso(&z4, &v4).unwrap().is_none());
    }

    #[test]
    fn iso_search_timeout_is_distinct() {
        let a = group_ring(&suite::klein4());
        let b = group_ring(&suite::klein4());
        assert!(matches!(
            find_based_iso_with_limit(&a, &b, 0),
            Err(Error::Timeout { .. })
        ));
    }
}
