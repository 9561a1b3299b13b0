//! Bimodules over a subgroup `H ≤ Σ` in `Σ`-graded vector spaces, a model of
//! the dual of `vec_Σ` with respect to the module category of `H`.
//!
//! `L_a` (`a ∈ H`) sends degree `σ` to `aσ`; `R_b` sends degree `σ` to `σb`
//! and is stored as the matrix of `x ↦ x·b`, so `R_{bb′} = R_{b′} R_b`.
//! The FP-dimension of a bimodule is its dimension divided by `|H|`.

use std::cmp::Reverse;
use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fusring::{solve_duals, FusionRing};
use crate::grp::{FiniteGroup, Subgroup};
use crate::numlin::{self, hom_dim, nullspace, Matrix, C64};
use crate::report::Report;
use crate::Options;

/// Cap on `|Σ|`.
pub const MAX_SIGMA_ORDER: usize = 24;

/// A graded `H`-bimodule: `l[i]` and `r[i]` act by the `i`-th element of `H`
/// (in the subgroup's sorted order).
#[derive(Clone, Debug, PartialEq)]
pub struct BimoduleObject {
    pub degrees: Vec<usize>,
    pub l: Vec<Matrix>,
    pub r: Vec<Matrix>,
}

impl BimoduleObject {
    pub fn dim(&self) -> usize {
        self.degrees.len()
    }

    /// `H` itself with left and right translation.
    pub fn unit(sigma: &FiniteGroup, h: &Subgroup) -> Self {
        let hs = h.elements();
        let pos = position_map(sigma, h);
        let translate = |f: &dyn Fn(usize) -> usize| {
            Matrix::permutation(&hs.iter().map(|&x| pos[f(x)]).collect::<Vec<_>>())
        };
        BimoduleObject {
            degrees: hs.to_vec(),
            l: hs.iter().map(|&a| translate(&|x| sigma.mul(a, x))).collect(),
            r: hs.iter().map(|&b| translate(&|x| sigma.mul(x, b))).collect(),
        }
    }

    /// The free bimodule at `σ`: basis `H×H`, `deg(a, b) = aσb`,
    /// `L_c(a, b) = (ca, b)` and `R_c(a, b) = (a, bc)`.
    pub fn free(sigma: &FiniteGroup, h: &Subgroup, s: usize) -> Self {
        let hs = h.elements();
        let n = hs.len();
        let pos = position_map(sigma, h);
        let degrees = (0..n * n)
            .map(|p| sigma.mul(sigma.mul(hs[p / n], s), hs[p % n]))
            .collect();
        let l = hs
            .iter()
            .map(|&c| {
                let img: Vec<usize> = (0..n * n)
                    .map(|p| pos[sigma.mul(c, hs[p / n])] * n + p % n)
                    .collect();
                Matrix::permutation(&img)
            })
            .collect();
        let r = hs
            .iter()
            .map(|&c| {
                let img: Vec<usize> = (0..n * n)
                    .map(|p| (p / n) * n + pos[sigma.mul(hs[p % n], c)])
                    .collect();
                Matrix::permutation(&img)
            })
            .collect();
        BimoduleObject { degrees, l, r }
    }

    /// Left actions of the given `H` positions followed by right actions.
    fn action(&self, gens: &[usize]) -> Vec<Matrix> {
        gens.iter()
            .map(|&i| self.l[i].clone())
            .chain(gens.iter().map(|&i| self.r[i].clone()))
            .collect()
    }

    fn restrict(&self, basis: &Matrix, degrees: Vec<usize>) -> Self {
        BimoduleObject {
            degrees,
            l: self.l.iter().map(|m| m.restrict(basis)).collect(),
            r: self.r.iter().map(|m| m.restrict(basis)).collect(),
        }
    }
}

fn position_map(sigma: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    let mut pos = vec![usize::MAX; sigma.order()];
    for (i, &x) in h.elements().iter().enumerate() {
        pos[x] = i;
    }
    pos
}

/// Positions (within `H`) of a generating set of `H`.
fn generator_positions(sigma: &FiniteGroup, h: &Subgroup) -> Vec<usize> {
    h.to_group(sigma).generators()
}

/// Checks the bimodule axioms: action laws, commuting actions and degrees.
pub fn verify_bimodule(x: &BimoduleObject, sigma: &FiniteGroup, h: &Subgroup) -> Report {
    let mut rep = Report::new();
    let hs = h.elements();
    let pos = position_map(sigma, h);
    let tol = 1e-6;
    let close = |a: &Matrix, b: &Matrix| (a - b).max_abs() <= tol;
    for (i, &a) in hs.iter().enumerate() {
        for (j, &b) in hs.iter().enumerate() {
            let ab = pos[sigma.mul(a, b)];
            if !close(&x.l[ab], &(&x.l[i] * &x.l[j])) {
                rep.record("L_a L_b = L_ab", &[a, b]);
            }
            if !close(&x.r[ab], &(&x.r[j] * &x.r[i])) {
                rep.record("R_ab = R_b R_a", &[a, b]);
            }
            if !close(&(&x.l[i] * &x.r[j]), &(&x.r[j] * &x.l[i])) {
                rep.record("L_a R_b = R_b L_a", &[a, b]);
            }
        }
        for r in 0..x.dim() {
            for c in 0..x.dim() {
                if x.l[i][(r, c)].norm() > tol && x.degrees[r] != sigma.mul(a, x.degrees[c]) {
                    rep.record("L_a maps degree σ to aσ", &[a, r, c]);
                }
                if x.r[i][(r, c)].norm() > tol && x.degrees[r] != sigma.mul(x.degrees[c], a) {
                    rep.record("R_a maps degree σ to σa", &[a, r, c]);
                }
            }
        }
    }
    rep
}

/// `X ⊗_H Y`: the orthogonal complement in `X ⊗ Y` of the relations
/// `x·h ⊗ y − x ⊗ h·y`, with `L` from `X` and `R` from `Y`.
///
/// For unitary actions the complement is the joint fixed space of
/// `R_{h⁻¹} ⊗ L_h` over generators `h`. These maps preserve the total
/// degree, so the space is computed one total degree at a time.
pub fn bimodule_tensor(
    x: &BimoduleObject,
    y: &BimoduleObject,
    sigma: &FiniteGroup,
    h: &Subgroup,
    tol: f64,
) -> Result<BimoduleObject> {
    let (m, n) = (x.dim(), y.dim());
    let big = m * n;
    let hs = h.elements();
    let pos = position_map(sigma, h);
    let gens = generator_positions(sigma, h);
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for p in 0..big {
        by_degree
            .entry(sigma.mul(x.degrees[p / n], y.degrees[p % n]))
            .or_default()
            .push(p);
    }
    let zero = C64::new(0.0, 0.0);
    let mut slot = vec![usize::MAX; big];
    // (degree, coordinates, orthonormal kernel on those coordinates)
    let mut blocks: Vec<(usize, Vec<usize>, Matrix)> = Vec::new();
    for (&deg, coords) in &by_degree {
        let s = coords.len();
        for (a, &p) in coords.iter().enumerate() {
            slot[p] = a;
        }
        let mut data = Vec::with_capacity(gens.len() * s * s);
        for &g in &gens {
            let rx = &x.r[pos[sigma.inv(hs[g])]];
            let ly = &y.l[g];
            for &dst in coords {
                let (pd, qd) = (dst / n, dst % n);
                for &src in coords {
                    let (ps, qs) = (src / n, src % n);
                    let mut v = rx[(pd, ps)] * ly[(qd, qs)];
                    if dst == src {
                        v -= C64::new(1.0, 0.0);
                    }
                    data.push(v);
                }
            }
        }
        let kernel = if gens.is_empty() {
            Matrix::identity(s)
        } else {
            nullspace(&Matrix::from_data(gens.len() * s, s, data), tol)?
        };
        for &p in coords {
            slot[p] = usize::MAX;
        }
        if kernel.cols() > 0 {
            blocks.push((deg, coords.clone(), kernel));
        }
    }
    let q: usize = blocks.iter().map(|b| b.2.cols()).sum();
    if q * h.order() != big {
        return Err(Error::Consistency(format!(
            "relative tensor product has dimension {q}, expected {big}/{}",
            h.order()
        )));
    }
    let mut offset = Vec::with_capacity(blocks.len());
    let mut block_of_degree = vec![usize::MAX; sigma.order()];
    let mut degrees = Vec::with_capacity(q);
    let mut acc = 0;
    for (b, (deg, _, kernel)) in blocks.iter().enumerate() {
        offset.push(acc);
        block_of_degree[*deg] = b;
        acc += kernel.cols();
        degrees.extend(std::iter::repeat_n(*deg, kernel.cols()));
    }

    // Restriction of a map acting on one tensor factor, given as the
    // non-zero entries of each of its columns.
    let restrict_factor = |sparse: &[Vec<(usize, C64)>], on_left: bool| -> Matrix {
        let mut out = Matrix::zeros(q, q);
        let mut scratch = vec![zero; big];
        let mut touched: Vec<usize> = Vec::new();
        for (b, (_, coords, kernel)) in blocks.iter().enumerate() {
            for k in 0..kernel.cols() {
                for (a, &p) in coords.iter().enumerate() {
                    let v = kernel[(a, k)];
                    if v == zero {
                        continue;
                    }
                    let (i, j) = (p / n, p % n);
                    let (col, keep) = if on_left { (i, j) } else { (j, i) };
                    for &(r, w) in &sparse[col] {
                        let target = if on_left { r * n + keep } else { keep * n + r };
                        if scratch[target] == zero {
                            touched.push(target);
                        }
                        scratch[target] += w * v;
                    }
                }
                if let Some(&t) = touched.first() {
                    let deg = sigma.mul(x.degrees[t / n], y.degrees[t % n]);
                    let tb = block_of_degree[deg];
                    if tb != usize::MAX {
                        let (_, tcoords, tkernel) = &blocks[tb];
                        for j in 0..tkernel.cols() {
                            let dot: C64 = tcoords
                                .iter()
                                .enumerate()
                                .map(|(a, &p)| tkernel[(a, j)].conj() * scratch[p])
                                .sum();
                            out[(offset[tb] + j, offset[b] + k)] = dot;
                        }
                    }
                }
                for t in touched.drain(..) {
                    scratch[t] = zero;
                }
            }
        }
        out
    };
    let l = x.l.iter().map(|a| restrict_factor(&column_entries(a), true)).collect();
    let r = y.r.iter().map(|b| restrict_factor(&column_entries(b), false)).collect();
    Ok(BimoduleObject { degrees, l, r })
}

fn column_entries(m: &Matrix) -> Vec<Vec<(usize, C64)>> {
    let zero = C64::new(0.0, 0.0);
    (0..m.cols())
        .map(|c| {
            (0..m.rows())
                .filter(|&r| m[(r, c)] != zero)
                .map(|r| (r, m[(r, c)]))
                .collect()
        })
        .collect()
}

/// Positions `(i, j)` of the pairs `(a, σ⁻¹a⁻¹σ)` with `a ∈ H ∩ σHσ⁻¹`.
fn stabilizer_pairs(sigma: &FiniteGroup, h: &Subgroup, s: usize) -> Vec<(usize, usize)> {
    let pos = position_map(sigma, h);
    let s_inv = sigma.inv(s);
    h.elements()
        .iter()
        .enumerate()
        .filter_map(|(i, &a)| {
            let b = sigma.mul(sigma.mul(s_inv, sigma.inv(a)), s);
            h.contains(b).then(|| (i, pos[b]))
        })
        .collect()
}

/// The stabilizer of `σ` acting on the degree-`σ` component of `X` by
/// `x ↦ a·x·(σ⁻¹a⁻¹σ)`, one matrix per stabilizer element.
fn component_action(
    x: &BimoduleObject,
    sigma: &FiniteGroup,
    h: &Subgroup,
    stab: &[(usize, usize)],
    s: usize,
) -> Vec<Matrix> {
    let hs = h.elements();
    let of_degree = |d: usize| -> Vec<usize> { (0..x.dim()).filter(|&p| x.degrees[p] == d).collect() };
    let comp = of_degree(s);
    stab.iter()
        .map(|&(i, j)| {
            let mid = of_degree(sigma.mul(s, hs[j]));
            &x.l[i].select(&comp, &mid) * &x.r[j].select(&mid, &comp)
        })
        .collect()
}

/// A simple bimodule and the double coset supporting it.
#[derive(Clone, Debug)]
pub struct DualSimple {
    /// Smallest element of the supporting double coset.
    pub representative: usize,
    pub dim: usize,
    pub object: BimoduleObject,
}

/// The dual ring with its simples (index `i` of `simples` is label `i`).
#[derive(Clone, Debug)]
pub struct DualRing {
    pub ring: FusionRing,
    pub simples: Vec<DualSimple>,
}

/// Multiplicity of each simple in `X`, as `(index, multiplicity)` pairs with
/// positive multiplicity.
///
/// A bimodule supported on the double coset of `σ` is determined by the
/// stabilizer representation on its degree-`σ` component, so multiplicities
/// are computed between those components.
pub fn decompose_bimodule(
    x: &BimoduleObject,
    simples: &[DualSimple],
    sigma: &FiniteGroup,
    h: &Subgroup,
    tol: f64,
) -> Result<Vec<(usize, usize)>> {
    if x.dim() == 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut covered = 0;
    let mut cache: BTreeMap<usize, (Vec<(usize, usize)>, Vec<Matrix>)> = BTreeMap::new();
    for (i, s) in simples.iter().enumerate() {
        let rep = s.representative;
        let (stab, dst) = cache.entry(rep).or_insert_with(|| {
            let stab = stabilizer_pairs(sigma, h, rep);
            let dst = component_action(x, sigma, h, &stab, rep);
            (stab, dst)
        });
        if dst.first().is_none_or(|m| m.rows() == 0) {
            continue;
        }
        let src = component_action(&s.object, sigma, h, stab, rep);
        let zs = vec![0; src[0].rows()];
        let zd = vec![0; dst[0].rows()];
        let m = hom_dim(&src, &zs, dst, &zd, tol)?;
        if m > 0 {
            covered += m * s.dim;
            out.push((i, m));
        }
    }
    if covered != x.dim() {
        return Err(Error::Consistency(format!(
            "simple summands cover {covered} of {} dimensions",
            x.dim()
        )));
    }
    Ok(out)
}

/// Simples and fusion ring of `H`-bimodules in `Σ`-graded spaces.
pub fn dual_ring_group_theoretical(
    sigma: &FiniteGroup,
    h: &Subgroup,
    opts: &Options,
) -> Result<DualRing> {
    if sigma.order() > MAX_SIGMA_ORDER {
        return Err(Error::Size {
            what: "|Sigma|",
            size: sigma.order(),
            cap: MAX_SIGMA_ORDER,
        });
    }
    sigma.subgroup(h.elements())?;
    let gens = generator_positions(sigma, h);
    let mut cosets: Vec<Vec<usize>> = sigma
        .double_cosets(h)?
        .into_iter()
        .map(|c| c.elements)
        .collect();
    for c in &mut cosets {
        c.sort_unstable();
    }
    cosets.sort();

    let per_coset: Vec<Vec<DualSimple>> = cosets
        .par_iter()
        .enumerate()
        .map(|(i, coset)| simples_on_coset(sigma, h, coset[0], &gens, opts.task_seed(i), opts.tol))
        .collect::<Result<_>>()?;
    let simples: Vec<DualSimple> = per_coset.into_iter().flatten().collect();

    let ho = h.order();
    let sum_sq: usize = simples.iter().map(|s| s.dim * s.dim).sum();
    if sum_sq != sigma.order() * ho * ho {
        return Err(Error::Splitting(format!(
            "Σ (dim/|H|)² = {}/{}, expected |Sigma| = {}",
            sum_sq,
            ho * ho,
            sigma.order()
        )));
    }
    let unit = BimoduleObject::unit(sigma, h);
    let first = &simples[0].object;
    if first.dim() != unit.dim()
        || hom_dim(
            &unit.action(&gens),
            &unit.degrees,
            &first.action(&gens),
            &first.degrees,
            opts.tol,
        )? != 1
    {
        return Err(Error::Consistency("the unit bimodule is not the first simple".into()));
    }

    let k = simples.len();
    let rows: Vec<Vec<(usize, usize, usize, u32)>> = (0..k * k)
        .into_par_iter()
        .map(|p| {
            let (a, b) = (p / k, p % k);
            let prod = bimodule_tensor(&simples[a].object, &simples[b].object, sigma, h, opts.tol)?;
            Ok(decompose_bimodule(&prod, &simples, sigma, h, opts.tol)?
                .into_iter()
                .map(|(c, m)| (a, b, c, m as u32))
                .collect())
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
    let mut counter: BTreeMap<usize, usize> = BTreeMap::new();
    let labels = simples
        .iter()
        .map(|s| {
            let i = counter.entry(s.representative).or_insert(0);
            let label = format!("{}/{}", sigma.name(s.representative), i);
            *i += 1;
            label
        })
        .collect();
    let ring = FusionRing::from_triples(k, 0, dual, &triples)?.with_labels(labels);
    Ok(DualRing { ring, simples })
}

fn simples_on_coset(
    sigma: &FiniteGroup,
    h: &Subgroup,
    s: usize,
    gens: &[usize],
    seed: u64,
    tol: f64,
) -> Result<Vec<DualSimple>> {
    let free = BimoduleObject::free(sigma, h, s);
    let split = numlin::split_commutant_graded(&free.action(gens), &free.degrees, seed, tol)?;
    let stab = stabilizer_pairs(sigma, h, s);
    let zeros = |m: &[Matrix]| vec![0; m.first().map_or(0, Matrix::rows)];
    let mut found: Vec<(BimoduleObject, Vec<Matrix>)> = Vec::new();
    for block in split.blocks {
        let obj = free.restrict(&block.basis, block.degrees);
        let comp = component_action(&obj, sigma, h, &stab, s);
        let mut known = false;
        for (f, fc) in &found {
            if f.dim() == obj.dim() && hom_dim(&comp, &zeros(&comp), fc, &zeros(fc), tol)? > 0 {
                known = true;
                break;
            }
        }
        if !known {
            found.push((obj, comp));
        }
    }
    // Character of the stabilizer on the degree-σ component.
    let character = |comp: &[Matrix]| -> Vec<(i64, i64)> {
        comp.iter()
            .map(|m| {
                let t = m.trace();
                ((t.re * 1e6).round() as i64, (t.im * 1e6).round() as i64)
            })
            .collect()
    };
    let mut keyed: Vec<_> = found
        .into_iter()
        .map(|(obj, comp)| ((obj.dim(), Reverse(character(&comp))), obj))
        .collect();
    keyed.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(keyed
        .into_iter()
        .map(|(_, object)| DualSimple {
            representative: s,
            dim: object.dim(),
            object,
        })
        .collect())
}
