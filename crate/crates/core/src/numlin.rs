//! Dense complex linear algebra: numerical rank, orthonormal kernels,
//! intertwiner spaces and the splitting of a representation into irreducible
//! blocks through its commutant.
//!
//! Every object handled here is small (a few hundred rows at most), so all
//! matrices are dense. SVD and Hermitian eigendecompositions are delegated to
//! `nalgebra`.

use std::collections::BTreeMap;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest admissible side length of a matrix handed to the solvers.
pub const MAX_SIDE: usize = 4096;
/// Relative singular-value threshold used for numerical rank.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Largest allowed distance from an integer when rounding a computed
/// multiplicity.
pub const ROUNDING_GUARD: f64 = 1e-6;
/// Entries of an intertwiner system below this magnitude are treated as
/// exact zeros.
pub const ENTRY_FLOOR: f64 = 1e-10;
/// Recursion budget of [`split_commutant`].
pub const MAX_SPLIT_ROUNDS: usize = 32;

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![C64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from real row vectors.
    ///
    /// Panics if the rows are ragged.
    pub fn from_real_rows(rows: &[Vec<f64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Matrix::zeros(r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = C64::new(x, 0.0);
            }
        }
        m
    }

    pub fn from_data(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Matrix { rows, cols, data }
    }

    /// Permutation matrix sending basis vector `j` to basis vector `images[j]`.
    pub fn permutation(images: &[usize]) -> Self {
        let n = images.len();
        let mut m = Matrix::zeros(n, n);
        for (j, &i) in images.iter().enumerate() {
            m[(i, j)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Matrix whose columns are the given vectors (all of length `rows`).
    pub fn from_columns(rows: usize, columns: &[Vec<C64>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, &x) in col.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let mut m = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)];
            }
        }
        m
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|x| x.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn kron(&self, other: &Matrix) -> Matrix {
        let mut m = Matrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        m[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        m
    }

    /// `basisᴴ · self · basis`: the action restricted to the span of an
    /// orthonormal, invariant set of columns.
    pub fn restrict(&self, basis: &Matrix) -> Matrix {
        &(&basis.adjoint() * self) * basis
    }

    /// Submatrix on the given row and column index sets.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                m[(a, b)] = self[(i, j)];
            }
        }
        m
    }

    /// If this is a 0/1 permutation matrix, the image of every basis vector.
    pub fn as_permutation(&self) -> Option<Vec<usize>> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut images = vec![usize::MAX; n];
        let mut hit = vec![false; n];
        for i in 0..n {
            for j in 0..n {
                let x = self[(i, j)];
                if x == C64::new(1.0, 0.0) {
                    if images[j] != usize::MAX || hit[i] {
                        return None;
                    }
                    images[j] = i;
                    hit[i] = true;
                } else if x != C64::new(0.0, 0.0) {
                    return None;
                }
            }
        }
        if images.iter().any(|&x| x == usize::MAX) {
            return None;
        }
        Some(images)
    }

    pub(crate) fn to_nalgebra(&self) -> DMatrix<C64> {
        DMatrix::from_row_slice(self.rows, self.cols, &self.data)
    }

    pub(crate) fn from_nalgebra(m: &DMatrix<C64>) -> Matrix {
        let mut out = Matrix::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = m[(i, j)];
            }
        }
        out
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == C64::new(0.0, 0.0) {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

fn check_size(m: &Matrix) -> Result<()> {
    let side = m.rows.max(m.cols);
    if side > MAX_SIDE {
        return Err(Error::Size {
            what: "matrix side",
            size: side,
            cap: MAX_SIDE,
        });
    }
    Ok(())
}

/// Singular values, in no particular order.
pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    check_size(m)?;
    if m.rows == 0 || m.cols == 0 {
        return Ok(Vec::new());
    }
    let svd = m.to_nalgebra().svd(false, false);
    Ok(svd.singular_values.iter().copied().collect())
}

/// Number of singular values above `tol` times the largest one.
pub fn rank(m: &Matrix, tol: f64) -> Result<usize> {
    assert!(tol > 0.0, "tolerance must be positive");
    let sv = singular_values(m)?;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(0);
    }
    Ok(sv.iter().filter(|&&s| s > tol * smax).count())
}

/// Orthonormal basis (as columns) of the numerical kernel of `m`.
pub fn nullspace(m: &Matrix, tol: f64) -> Result<Matrix> {
    assert!(tol > 0.0, "tolerance must be positive");
    check_size(m)?;
    let n = m.cols;
    if n == 0 {
        return Ok(Matrix::zeros(0, 0));
    }
    if m.rows == 0 {
        return Ok(Matrix::identity(n));
    }
    // Pad wide systems so that the SVD returns a full right basis.
    let a = if m.rows < n {
        let mut padded = DMatrix::<C64>::zeros(n, n);
        padded
            .view_mut((0, 0), (m.rows, n))
            .copy_from(&m.to_nalgebra());
        padded
    } else {
        m.to_nalgebra()
    };
    let svd = a.svd(false, true);
    let v_t = svd
        .v_t
        .ok_or_else(|| Error::Numeric("SVD did not return right singular vectors".into()))?;
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    let mut cols = Vec::new();
    for (k, &s) in sv.iter().enumerate() {
        if smax == 0.0 || s <= tol * smax {
            cols.push((0..n).map(|j| v_t[(k, j)].conj()).collect::<Vec<_>>());
        }
    }
    Ok(Matrix::from_columns(n, &cols))
}

/// Orthonormal basis of the linear span of a family of equally-shaped
/// matrices (Frobenius inner product).
pub fn span_basis(mats: &[Matrix], tol: f64) -> Result<Vec<Matrix>> {
    let Some(first) = mats.first() else {
        return Ok(Vec::new());
    };
    let (r, c) = (first.rows, first.cols);
    let len = r * c;
    if len == 0 {
        return Ok(Vec::new());
    }
    let mut stacked = DMatrix::<C64>::zeros(len, mats.len());
    for (k, m) in mats.iter().enumerate() {
        for (i, &x) in m.data.iter().enumerate() {
            stacked[(i, k)] = x;
        }
    }
    let svd = stacked.svd(true, false);
    let u = svd
        .u
        .ok_or_else(|| Error::Numeric("SVD did not return left singular vectors".into()))?;
    let sv = &svd.singular_values;
    let smax = sv.iter().copied().fold(0.0, f64::max);
    if smax == 0.0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for (k, &s) in sv.iter().enumerate() {
        if s > tol * smax {
            let data = (0..len).map(|i| u[(i, k)]).collect();
            out.push(Matrix::from_data(r, c, data));
        }
    }
    Ok(out)
}

/// Basis of the space of degree-preserving linear maps `f: src → dst` with
/// `dst[i] · f = f · src[i]` for every `i`.
///
/// `src_deg` / `dst_deg` give the degree of each basis vector; only entries
/// `f[r][c]` with `dst_deg[r] == src_deg[c]` are unknowns.
pub fn intertwiners(
    src: &[Matrix],
    src_deg: &[usize],
    dst: &[Matrix],
    dst_deg: &[usize],
    tol: f64,
) -> Result<Vec<Matrix>> {
    assert_eq!(src.len(), dst.len(), "action lists must correspond");
    let n_src = src_deg.len();
    let n_dst = dst_deg.len();
    let mut unknown = vec![usize::MAX; n_dst * n_src];
    let mut positions = Vec::new();
    for r in 0..n_dst {
        for c in 0..n_src {
            if dst_deg[r] == src_deg[c] {
                unknown[r * n_src + c] = positions.len();
                positions.push((r, c));
            }
        }
    }
    let k = positions.len();
    if k == 0 {
        return Ok(Vec::new());
    }
    if k > MAX_SIDE {
        return Err(Error::Size {
            what: "intertwiner unknowns",
            size: k,
            cap: MAX_SIDE,
        });
    }

    // Row (r, c) of B·f − f·A, for each generator pair.
    let mut rows: Vec<Vec<C64>> = Vec::new();
    let zero = C64::new(0.0, 0.0);
    for (a, b) in src.iter().zip(dst) {
        for r in 0..n_dst {
            for c in 0..n_src {
                let mut row = vec![zero; k];
                let mut nonzero = false;
                for j in 0..n_dst {
                    let coeff = b[(r, j)];
                    if coeff == zero {
                        continue;
                    }
                    let u = unknown[j * n_src + c];
                    if u != usize::MAX {
                        row[u] += coeff;
                        nonzero = true;
                    }
                }
                for i in 0..n_src {
                    let coeff = a[(i, c)];
                    if coeff == zero {
                        continue;
                    }
                    let u = unknown[r * n_src + i];
                    if u != usize::MAX {
                        row[u] -= coeff;
                        nonzero = true;
                    }
                }
                // Round-off from restricted actions must not count as a
                // constraint, since the rank test below is relative.
                for x in row.iter_mut() {
                    if x.norm() <= ENTRY_FLOOR {
                        *x = zero;
                    }
                }
                if nonzero && row.iter().any(|x| x.norm() > 0.0) {
                    rows.push(row);
                }
            }
        }
    }
    // Reduce tall systems through QR before the SVD.
    let system = if rows.is_empty() {
        Matrix::zeros(0, k)
    } else {
        let mut m = DMatrix::<C64>::zeros(rows.len(), k);
        for (i, row) in rows.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        if rows.len() > k {
            let r = m.qr().r();
            Matrix::from_nalgebra(&r)
        } else {
            Matrix::from_nalgebra(&m)
        }
    };
    let kernel = nullspace(&system, tol)?;
    let mut out = Vec::with_capacity(kernel.cols());
    for col in 0..kernel.cols() {
        let mut f = Matrix::zeros(n_dst, n_src);
        for (u, &(r, c)) in positions.iter().enumerate() {
            f[(r, c)] = kernel[(u, col)];
        }
        out.push(f);
    }
    Ok(out)
}

/// Dimension of the intertwiner space; see [`intertwiners`].
pub fn hom_dim(
    src: &[Matrix],
    src_deg: &[usize],
    dst: &[Matrix],
    dst_deg: &[usize],
    tol: f64,
) -> Result<usize> {
    Ok(intertwiners(src, src_deg, dst, dst_deg, tol)?.len())
}

/// Degree-preserving commutant of an action.
pub fn commutant(action: &[Matrix], degrees: &[usize], tol: f64) -> Result<Vec<Matrix>> {
    intertwiners(action, degrees, action, degrees, tol)
}

/// One irreducible invariant block: an orthonormal basis of homogeneous
/// vectors (as columns) and the degree of each of them.
#[derive(Clone, Debug)]
pub struct Block {
    pub basis: Matrix,
    pub degrees: Vec<usize>,
}

impl Block {
    pub fn dim(&self) -> usize {
        self.basis.cols()
    }
}

/// Decomposition of a representation space into irreducible blocks.
#[derive(Clone, Debug, Default)]
pub struct BlockSplit {
    pub blocks: Vec<Block>,
}

impl BlockSplit {
    pub fn dims(&self) -> Vec<usize> {
        self.blocks.iter().map(Block::dim).collect()
    }
}

/// Splits an (ungraded) representation into irreducible invariant blocks.
pub fn split_commutant(action: &[Matrix], seed: u64) -> Result<BlockSplit> {
    let n = action.first().map_or(0, |m| m.rows());
    split_commutant_graded(action, &vec![0; n], seed, DEFAULT_TOL)
}

/// Splits a graded representation into irreducible graded blocks.
///
/// The action matrices must map homogeneous vectors to homogeneous vectors.
/// The commutant is computed once (from orbitals when every matrix is a
/// degree-compatible permutation, otherwise by a linear solve). A
/// pseudo-random Hermitian element of the commutant is then diagonalised
/// degree by degree, the space is cut along its eigenspaces, and each piece
/// is processed again with the commutant compressed to it, until every
/// block has a one-dimensional commutant.
pub fn split_commutant_graded(
    action: &[Matrix],
    degrees: &[usize],
    seed: u64,
    tol: f64,
) -> Result<BlockSplit> {
    let n = degrees.len();
    for a in action {
        if a.rows() != n || a.cols() != n {
            return Err(Error::Consistency(format!(
                "action matrix is {}x{}, expected {n}x{n}",
                a.rows(),
                a.cols()
            )));
        }
        check_size(a)?;
    }
    if n == 0 {
        return Ok(BlockSplit::default());
    }
    let comm = match orbital_commutant(action, degrees) {
        Some(c) => c,
        None => commutant(action, degrees, tol)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut blocks = Vec::new();
    split_rec(
        Matrix::identity(n),
        degrees.to_vec(),
        comm,
        0,
        tol,
        &mut rng,
        &mut blocks,
    )?;
    Ok(BlockSplit { blocks })
}

fn split_rec(
    basis: Matrix,
    degrees: Vec<usize>,
    comm: Vec<Matrix>,
    round: usize,
    tol: f64,
    rng: &mut ChaCha8Rng,
    out: &mut Vec<Block>,
) -> Result<()> {
    let comm = span_basis(&comm, tol)?;
    if comm.len() <= 1 {
        out.push(Block { basis, degrees });
        return Ok(());
    }
    if round >= MAX_SPLIT_ROUNDS {
        return Err(Error::Splitting(format!(
            "no irreducible split after {MAX_SPLIT_ROUNDS} rounds (commutant dimension {})",
            comm.len()
        )));
    }
    let m = degrees.len();
    let mut x = Matrix::zeros(m, m);
    for c in &comm {
        let coeff = C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
        x = &x + &c.scale(coeff);
    }
    let herm = &x + &x.adjoint();
    let clusters = eigen_clusters(&herm, &degrees)?;
    if clusters.len() == 1 {
        // The random element happened to be scalar; draw again.
        return split_rec(basis, degrees, comm, round + 1, tol, rng, out);
    }
    for (local, local_deg) in clusters {
        let sub_comm: Vec<Matrix> = comm.iter().map(|c| c.restrict(&local)).collect();
        split_rec(
            &basis * &local,
            local_deg,
            sub_comm,
            round + 1,
            tol,
            rng,
            out,
        )?;
    }
    Ok(())
}

/// Eigenspaces of a Hermitian, degree-preserving matrix, each returned as an
/// orthonormal set of homogeneous columns together with their degrees.
fn eigen_clusters(herm: &Matrix, degrees: &[usize]) -> Result<Vec<(Matrix, Vec<usize>)>> {
    let m = degrees.len();
    let mut by_degree: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &d) in degrees.iter().enumerate() {
        by_degree.entry(d).or_default().push(i);
    }
    let mut pairs: Vec<(f64, usize, Vec<C64>)> = Vec::new();
    for (&d, idx) in &by_degree {
        let sub = herm.select(idx, idx).to_nalgebra();
        let eig = SymmetricEigen::new(sub);
        for k in 0..idx.len() {
            let mut v = vec![C64::new(0.0, 0.0); m];
            for (a, &i) in idx.iter().enumerate() {
                v[i] = eig.eigenvectors[(a, k)];
            }
            pairs.push((eig.eigenvalues[k], d, v));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    let scale = pairs.iter().map(|p| p.0.abs()).fold(1.0, f64::max);
    let gap = 1e-6 * scale;
    let mut clusters: Vec<(Matrix, Vec<usize>)> = Vec::new();
    let mut cur_cols: Vec<Vec<C64>> = Vec::new();
    let mut cur_deg: Vec<usize> = Vec::new();
    let mut last = f64::NEG_INFINITY;
    for (val, d, v) in pairs {
        if !cur_cols.is_empty() && val - last > gap {
            clusters.push((Matrix::from_columns(m, &cur_cols), std::mem::take(&mut cur_deg)));
            cur_cols.clear();
        }
        cur_cols.push(v);
        cur_deg.push(d);
        last = val;
    }
    if !cur_cols.is_empty() {
        clusters.push((Matrix::from_columns(m, &cur_cols), cur_deg));
    }
    Ok(clusters)
}

/// Commutant of a degree-compatible permutation action, spanned by the
/// indicator matrices of the orbits on pairs of equal-degree basis vectors.
fn orbital_commutant(action: &[Matrix], degrees: &[usize]) -> Option<Vec<Matrix>> {
    let n = degrees.len();
    let perms: Vec<Vec<usize>> = action
        .iter()
        .map(|a| a.as_permutation())
        .collect::<Option<_>>()?;
    // Each permutation must move degree classes as a whole.
    for p in &perms {
        let mut image_of: BTreeMap<usize, usize> = BTreeMap::new();
        for i in 0..n {
            let d = degrees[p[i]];
            if *image_of.entry(degrees[i]).or_insert(d) != d {
                return None;
            }
        }
    }
    let mut parent: Vec<usize> = (0..n * n).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..n {
        for j in 0..n {
            if degrees[i] != degrees[j] {
                continue;
            }
            for p in &perms {
                let a = find(&mut parent, i * n + j);
                let b = find(&mut parent, p[i] * n + p[j]);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut orbit_index: BTreeMap<usize, usize> = BTreeMap::new();
    let mut mats: Vec<Matrix> = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if degrees[i] != degrees[j] {
                continue;
            }
            let root = find(&mut parent, i * n + j);
            let idx = *orbit_index.entry(root).or_insert_with(|| {
                mats.push(Matrix::zeros(n, n));
                mats.len() - 1
            });
            mats[idx][(i, j)] = C64::new(1.0, 0.0);
        }
    }
    Some(mats)
}

/// Rounds a real value to the nearest non-negative integer, failing if it is
/// further than [`ROUNDING_GUARD`] from it.
pub fn round_guarded(x: f64, what: &str) -> Result<usize> {
    let r = x.round();
    if (x - r).abs() > ROUNDING_GUARD || r < 0.0 {
        return Err(Error::Numeric(format!(
            "{what}: value {x} is not within {ROUNDING_GUARD} of a non-negative integer"
        )));
    }
    Ok(r as usize)
}
