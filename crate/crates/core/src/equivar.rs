//! Equivariant objects and the crossed extension `C^(G,Γ)`.
//!
//! An equivariant object is a graded space together with invertible maps
//! `u_g` (one per `g ∈ G`). As linear maps `u_g` sends the component of
//! degree `γ` to the component of degree `γ◁g`, and the cocycle condition
//! reads `u_{gh} = u_h · u_g`.
//!
//! For a pointed base `C = K(vec_Γ)` the simples are found by splitting the
//! free objects `Ind(γ)` (basis `e_x`, `x ∈ G`, of degree `γ◀x`, with
//! `u_h e_x = e_{xh}`), and fusion coefficients are intertwiner dimensions
//! against the twisted tensor product `w_g = u_{β▶g} ⊗ v_g` on the
//! `(α, β)` block.

use std::cmp::Reverse;

use rayon::prelude::*;

use crate::crossact::{verify_crossed_action, CrossedActionData};
use crate::error::{Error, Result};
use crate::fusring::{
    character_table, find_based_iso, fpdim, rep_ring_seeded, solve_duals, FusionRing,
};
use crate::grp::FiniteGroup;
use crate::numlin::{self, hom_dim, Matrix, C64};
use crate::report::Report;
use crate::Options;

/// Cap on `|G|·|Γ|` for [`equivariantize_pointed`].
pub const MAX_PRODUCT_ORDER: usize = 72;
/// Residual allowed in the cocycle condition.
pub const COCYCLE_TOL: f64 = 1e-6;

/// A graded space (degree of each basis vector, as a label of `C`) with one
/// structure matrix `u_g` per element of `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct EquivariantObject {
    pub degrees: Vec<usize>,
    pub u: Vec<Matrix>,
}

impl EquivariantObject {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// Dimension of each graded component, indexed by label.
    pub fn graded_dims(&self, labels: usize) -> Vec<usize> {
        let mut out = vec![0; labels];
        for &d in &self.degrees {
            out[d] += 1;
        }
        out
    }

    /// The unit: one vector of the unit degree with `u_g = [1]`.
    pub fn unit(d: &CrossedActionData) -> Self {
        EquivariantObject {
            degrees: vec![d.ring.unit()],
            u: vec![Matrix::identity(1); d.mp.g().order()],
        }
    }

    /// The free object on a label: basis `e_x` (`x ∈ G`) of degree `a◁x`
    /// with `u_h e_x = e_{xh}`.
    pub fn induced(d: &CrossedActionData, a: usize) -> Self {
        let g = d.mp.g();
        EquivariantObject {
            degrees: g.elements().map(|x| d.act(a, x)).collect(),
            u: g
                .elements()
                .map(|h| Matrix::permutation(&g.elements().map(|x| g.mul(x, h)).collect::<Vec<_>>()))
                .collect(),
        }
    }

    fn on(&self, gens: &[usize]) -> Vec<Matrix> {
        gens.iter().map(|&g| self.u[g].clone()).collect()
    }
}

/// Checks invertibility, degree compatibility and the cocycle condition.
pub fn verify_equivariant_structure(x: &EquivariantObject, d: &CrossedActionData) -> Report {
    let mut rep = Report::new();
    let g = d.mp.g();
    let n = x.dim();
    if x.u.len() != g.order()
        || x.u.iter().any(|m| m.rows() != n || m.cols() != n)
        || x.degrees.iter().any(|&a| a >= d.ring.rank())
    {
        rep.record("one square structure matrix per group element", &[x.u.len(), n]);
        return rep;
    }
    for s in g.elements() {
        let u = &x.u[s];
        match numlin::rank(u, numlin::DEFAULT_TOL) {
            Ok(r) if r == n => {}
            _ if n == 0 => {}
            _ => rep.record("u_g invertible", &[s]),
        }
        for r in 0..n {
            for c in 0..n {
                if u[(r, c)].norm() > COCYCLE_TOL && x.degrees[r] != d.act(x.degrees[c], s) {
                    rep.record("u_g maps degree a to degree a◁g", &[s, r, c]);
                }
            }
        }
    }
    for s in g.elements() {
        for t in g.elements() {
            let lhs = &x.u[g.mul(s, t)];
            let rhs = &x.u[t] * &x.u[s];
            let residual = (lhs - &rhs).max_abs();
            if residual > COCYCLE_TOL {
                rep.record_detail(
                    "cocycle u_{gh} = u_h ∘ (u_g◁h)",
                    &[s, t],
                    format!("residual {residual:.3e}"),
                );
            }
        }
    }
    rep
}

/// A simple equivariant object.
#[derive(Clone, Debug)]
pub struct EquivariantSimple {
    /// The `◁`-orbit of labels supporting the object, sorted.
    pub orbit: Vec<usize>,
    pub stabilizer_order: usize,
    pub dim: usize,
    pub object: EquivariantObject,
    pub fp: f64,
}

/// The crossed extension ring and its simples (index `i` of `simples` is
/// label `i` of `ring`).
#[derive(Clone, Debug)]
pub struct EquivariantRing {
    pub ring: FusionRing,
    pub simples: Vec<EquivariantSimple>,
}

/// Orbits of the label action, each sorted, ordered by smallest element.
pub fn label_orbits(d: &CrossedActionData) -> Vec<Vec<usize>> {
    let k = d.ring.rank();
    let mut seen = vec![false; k];
    let mut out = Vec::new();
    for a in 0..k {
        if seen[a] {
            continue;
        }
        let mut orbit: Vec<usize> = d.mp.g().elements().map(|x| d.act(a, x)).collect();
        orbit.sort_unstable();
        orbit.dedup();
        for &b in &orbit {
            seen[b] = true;
        }
        out.push(orbit);
    }
    out
}

fn stabilizer(d: &CrossedActionData, a: usize) -> Vec<usize> {
    d.mp.g().elements().filter(|&x| d.act(a, x) == a).collect()
}

fn require_pointed(d: &CrossedActionData) -> Result<()> {
    let gamma = d.mp.gamma();
    let r = &d.ring;
    let n = gamma.order();
    let shaped = r.rank() == n
        && r.unit() == gamma.identity()
        && (0..n).all(|a| d.deg(a) == a)
        && (0..n).all(|a| {
            (0..n).all(|b| (0..n).all(|c| r.n(a, b, c) == u32::from(c == gamma.mul(a, b))))
        })
        && (0..n).all(|a| d.mp.g().elements().all(|x| d.act(a, x) == d.mp.ract(a, x)));
    if shaped {
        Ok(())
    } else {
        Err(Error::Domain(
            "expected C = K(vec_Gamma) graded by itself with the action ◀".into(),
        ))
    }
}

/// Restriction of an object to an invariant block.
fn restrict(x: &EquivariantObject, block: &numlin::Block) -> EquivariantObject {
    EquivariantObject {
        degrees: block.degrees.clone(),
        u: x.u.iter().map(|m| m.restrict(&block.basis)).collect(),
    }
}

/// The twisted tensor product: degree `αβ` on the `(α, β)` block and
/// `w_g = u_{β▶g} ⊗ v_g` there.
pub fn tensor(d: &CrossedActionData, x: &EquivariantObject, y: &EquivariantObject) -> EquivariantObject {
    let (g, gamma) = (d.mp.g(), d.mp.gamma());
    let (m, n) = (x.dim(), y.dim());
    let degrees = (0..m * n)
        .map(|p| gamma.mul(x.degrees[p / n], y.degrees[p % n]))
        .collect();
    let u = g
        .elements()
        .map(|s| {
            let mut w = Matrix::zeros(m * n, m * n);
            for j in 0..n {
                let ux = &x.u[d.mp.lact(y.degrees[j], s)];
                for jp in 0..n {
                    let v = y.u[s][(jp, j)];
                    if v == C64::new(0.0, 0.0) {
                        continue;
                    }
                    for i in 0..m {
                        for ip in 0..m {
                            w[(ip * n + jp, i * n + j)] = ux[(ip, i)] * v;
                        }
                    }
                }
            }
            w
        })
        .collect();
    EquivariantObject { degrees, u }
}

/// Character of the stabilizer of `a` on the degree-`a` component.
fn stabilizer_character(x: &EquivariantObject, stab: &[usize], a: usize) -> Vec<(i64, i64)> {
    stab.iter()
        .map(|&s| {
            let t: C64 = (0..x.dim())
                .filter(|&i| x.degrees[i] == a)
                .map(|i| x.u[s][(i, i)])
                .sum();
            ((t.re * 1e6).round() as i64, (t.im * 1e6).round() as i64)
        })
        .collect()
}

/// Simples of `C^(G,Γ)` for `C = K(vec_Γ)` and the fusion ring they span.
pub fn equivariantize_pointed(d: &CrossedActionData, opts: &Options) -> Result<EquivariantRing> {
    let (g, gamma) = (d.mp.g(), d.mp.gamma());
    let size = g.order() * gamma.order();
    if size > MAX_PRODUCT_ORDER {
        return Err(Error::Size {
            what: "|G|·|Gamma|",
            size,
            cap: MAX_PRODUCT_ORDER,
        });
    }
    let rep = verify_crossed_action(d);
    if !rep.is_ok() {
        return Err(Error::Axiom(format!("invalid crossed action:\n{rep}")));
    }
    require_pointed(d)?;
    let gens = g.generators();
    let orbits = label_orbits(d);

    let per_orbit: Vec<Vec<EquivariantSimple>> = orbits
        .par_iter()
        .enumerate()
        .map(|(i, orbit)| simples_on_orbit(d, orbit, &gens, opts.task_seed(i), opts.tol))
        .collect::<Result<_>>()?;
    let simples: Vec<EquivariantSimple> = per_orbit.into_iter().flatten().collect();

    let sum_sq: usize = simples.iter().map(|s| s.dim * s.dim).sum();
    if sum_sq != size {
        return Err(Error::Splitting(format!(
            "simple dimensions have square sum {sum_sq}, expected |G|·|Gamma| = {size}"
        )));
    }
    let unit_obj = EquivariantObject::unit(d);
    if simples.first().map(|s| &s.object.degrees) != Some(&unit_obj.degrees)
        || hom_dim(
            &unit_obj.on(&gens),
            &unit_obj.degrees,
            &simples[0].object.on(&gens),
            &simples[0].object.degrees,
            opts.tol,
        )? != 1
    {
        return Err(Error::Consistency("the unit object is not the first simple".into()));
    }

    let k = simples.len();
    let rows: Vec<Vec<(usize, usize, usize, u32)>> = (0..k * k)
        .into_par_iter()
        .map(|p| {
            let (a, b) = (p / k, p % k);
            let prod = tensor(d, &simples[a].object, &simples[b].object);
            let dst = prod.on(&gens);
            let mut out = Vec::new();
            let mut covered = 0;
            for (c, s) in simples.iter().enumerate() {
                let m = hom_dim(&s.object.on(&gens), &s.object.degrees, &dst, &prod.degrees, opts.tol)?;
                if m > 0 {
                    covered += m * s.dim;
                    out.push((a, b, c, m as u32));
                }
            }
            if covered != prod.dim() {
                return Err(Error::Consistency(format!(
                    "decomposition of simple {a} ⊗ simple {b} covers {covered} of {} dimensions",
                    prod.dim()
                )));
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let triples: Vec<_> = rows.into_iter().flatten().collect();
    let lookup = |x: usize, y: usize, z: usize| {
        triples
            .iter()
            .find(|t| t.0 == x && t.1 == y && t.2 == z)
            .map_or(0, |t| t.3)
    };
    let dual = solve_duals(k, 0, lookup)?;
    let mut counter = vec![0usize; gamma.order()];
    let labels = simples
        .iter()
        .map(|s| {
            let rep = s.orbit[0];
            let i = counter[rep];
            counter[rep] += 1;
            format!("{}/{}", gamma.name(rep), i)
        })
        .collect();
    let ring = FusionRing::from_triples(k, 0, dual, &triples)?.with_labels(labels);
    Ok(EquivariantRing { ring, simples })
}

fn simples_on_orbit(
    d: &CrossedActionData,
    orbit: &[usize],
    gens: &[usize],
    seed: u64,
    tol: f64,
) -> Result<Vec<EquivariantSimple>> {
    let rep = orbit[0];
    let stab = stabilizer(d, rep);
    let ind = EquivariantObject::induced(d, rep);
    let split = numlin::split_commutant_graded(&ind.on(gens), &ind.degrees, seed, tol)?;
    let mut found: Vec<EquivariantObject> = Vec::new();
    for block in &split.blocks {
        let obj = restrict(&ind, block);
        let mut known = false;
        for f in &found {
            if f.dim() == obj.dim()
                && hom_dim(&obj.on(gens), &obj.degrees, &f.on(gens), &f.degrees, tol)? > 0
            {
                known = true;
                break;
            }
        }
        if !known {
            found.push(obj);
        }
    }
    let mut keyed: Vec<_> = found
        .into_iter()
        .map(|obj| ((obj.dim(), Reverse(stabilizer_character(&obj, &stab, rep))), obj))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed
        .into_iter()
        .map(|(_, object)| EquivariantSimple {
            orbit: orbit.to_vec(),
            stabilizer_order: stab.len(),
            dim: object.dim(),
            fp: object.dim() as f64,
            object,
        })
        .collect())
}

/// One orbit of the label action in the general census.
#[derive(Clone, Debug, PartialEq)]
pub struct CensusEntry {
    pub orbit: Vec<usize>,
    pub stabilizer_order: usize,
    pub irrep_count: usize,
    pub fp_dims: Vec<f64>,
}

/// Simples of `C^G` counted by orbit and stabilizer irreducibles.
#[derive(Clone, Debug, PartialEq)]
pub struct Census {
    pub entries: Vec<CensusEntry>,
    /// `Σ fp²` over all simples.
    pub sum_squares: f64,
    /// `|G| · FPdim(C)`.
    pub expected: f64,
    /// Whether the two agree within `1e-6`.
    pub consistent: bool,
}

impl Census {
    pub fn fp_dims(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.entries.iter().flat_map(|e| e.fp_dims.clone()).collect();
        all.sort_by(f64::total_cmp);
        all
    }
}

/// Orbit/stabilizer bookkeeping of `C^G` for an arbitrary crossed action;
/// no fusion coefficients are computed.
pub fn equivariant_census_general(d: &CrossedActionData, opts: &Options) -> Result<Census> {
    let dims = fpdim(&d.ring)?;
    let g = d.mp.g();
    let mut entries = Vec::new();
    for orbit in label_orbits(d) {
        let stab = stabilizer(d, orbit[0]);
        let stab_group: FiniteGroup = g.subgroup(&stab)?.to_group(g);
        let table = character_table(&stab_group, opts.seed)?;
        let orbit_dim: f64 = orbit.iter().map(|&a| dims.dims[a]).sum();
        entries.push(CensusEntry {
            stabilizer_order: stab.len(),
            irrep_count: table.degrees.len(),
            fp_dims: table.degrees.iter().map(|&k| k as f64 * orbit_dim).collect(),
            orbit,
        });
    }
    let sum_squares = entries
        .iter()
        .flat_map(|e| e.fp_dims.iter())
        .map(|x| x * x)
        .sum::<f64>();
    let expected = g.order() as f64 * dims.total;
    Ok(Census {
        entries,
        sum_squares,
        expected,
        consistent: (sum_squares - expected).abs() <= 1e-6,
    })
}

/// Checks the shape `Rep G ↪ C^(G,Γ) → C` on an equivariantized ring:
/// (i) the simples supported on the unit degree span a copy of `K(Rep G)`,
/// (ii) `F(S) = Σ_γ dim(S_γ)·γ` is multiplicative into `K(vec_Γ)`,
/// (iii) every `γ` occurs in some `F(S)`.
pub fn extension_checks(
    ring: &FusionRing,
    simples: &[EquivariantSimple],
    d: &CrossedActionData,
    opts: &Options,
) -> Result<Report> {
    let mut rep = Report::new();
    let gamma = d.mp.gamma();
    let e = gamma.identity();
    let k = ring.rank();
    if simples.len() != k {
        return Err(Error::Consistency("one simple per label expected".into()));
    }

    let trivial: Vec<usize> = (0..k).filter(|&s| simples[s].orbit == [e]).collect();
    match ring.subring(&trivial) {
        Err(_) => rep.record("simples over the unit degree span a subring", &trivial),
        Ok(sub) => {
            let rep_g = rep_ring_seeded(d.mp.g(), opts.seed)?;
            if find_based_iso(&sub, &rep_g)?.is_none() {
                rep.record("simples over the unit degree ≅ Rep G", &trivial);
            }
        }
    }

    let n = gamma.order();
    let forget: Vec<Vec<u64>> = simples
        .iter()
        .map(|s| s.object.graded_dims(n).into_iter().map(|x| x as u64).collect())
        .collect();
    for a in 0..k {
        for b in 0..k {
            let mut lhs = vec![0u64; n];
            for x in 0..n {
                for y in 0..n {
                    lhs[gamma.mul(x, y)] += forget[a][x] * forget[b][y];
                }
            }
            let mut rhs = vec![0u64; n];
            for (c, m) in ring.product(a, b) {
                for x in 0..n {
                    rhs[x] += u64::from(m) * forget[c][x];
                }
            }
            if lhs != rhs {
                rep.record("forgetful map F(S)F(T) = F(S⊗T)", &[a, b]);
            }
        }
    }
    for x in 0..n {
        if forget.iter().all(|f| f[x] == 0) {
            rep.record("forgetful map hits every degree", &[x]);
        }
    }
    Ok(rep)
}
