//! Exact linear algebra over the Gaussian rationals: row reduction, kernels,
//! and subspaces kept in reduced row-echelon form.
//!
//! Pivots are chosen left to right, first usable row top to bottom, so every
//! basis this module produces is deterministic.

use crate::scalars::GaussRational;

pub type Vector = Vec<GaussRational>;

/// Reduces `rows` to reduced row-echelon form in place, dropping zero rows.
/// Returns the pivot column of each remaining row.
pub fn rref(rows: &mut Vec<Vector>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let inv = rows[r][c].inv();
        if !rows[r][c].is_one() {
            for x in rows[r].iter_mut().skip(c) {
                *x = &*x * &inv;
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !y.is_zero() {
                    *x -= &(&factor * y);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(rows: &[Vector]) -> usize {
    let mut work = rows.to_vec();
    rref(&mut work).len()
}

/// Null space of the matrix given by its rows, as a list of basis vectors
/// (one per free column, with a 1 in that column).
pub fn kernel(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut work: Vec<Vector> = rows.iter().filter(|r| r.iter().any(|x| !x.is_zero())).cloned().collect();
    let pivots = rref(&mut work);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|&c| !is_pivot[c]) {
        let mut v = vec![GaussRational::zero(); ncols];
        v[free] = GaussRational::one();
        for (row, &p) in work.iter().zip(&pivots) {
            v[p] = -&row[free];
        }
        basis.push(v);
    }
    basis
}

/// Matrix rows from a list of column vectors of length `nrows`.
pub fn columns_to_rows(cols: &[Vector], nrows: usize) -> Vec<Vector> {
    (0..nrows).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect()
}

/// Kernel of the linear map whose images of the source basis are `cols`.
pub fn kernel_of_map(cols: &[Vector], target_dim: usize) -> Vec<Vector> {
    kernel(&columns_to_rows(cols, target_dim), cols.len())
}

/// One solution `x` of `Σ_j x_j cols[j] = b`, if any.
pub fn solve_map(cols: &[Vector], target_dim: usize, b: &[GaussRational]) -> Option<Vector> {
    let n = cols.len();
    let mut rows = columns_to_rows(cols, target_dim);
    for (row, bi) in rows.iter_mut().zip(b) {
        row.push(-bi);
    }
    // Solutions of [A | -b] (x, 1) = 0 with last coordinate 1.
    let kern = kernel(&rows, n + 1);
    let v = kern.into_iter().find(|v| !v[n].is_zero())?;
    let scale = v[n].inv();
    Some(v[..n].iter().map(|x| x * &scale).collect())
}

pub fn dot(a: &[GaussRational], b: &[GaussRational]) -> GaussRational {
    let mut acc = GaussRational::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            acc += &(x * y);
        }
    }
    acc
}

pub fn is_zero_vector(v: &[GaussRational]) -> bool {
    v.iter().all(GaussRational::is_zero)
}

/// Subspace of `G^ambient`, stored as a reduced row-echelon basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vector>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace { ambient, basis: Vec::new(), pivots: Vec::new() }
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vector>) -> Self {
        let mut basis: Vec<Vector> = vectors.into_iter().filter(|v| !is_zero_vector(v)).collect();
        debug_assert!(basis.iter().all(|v| v.len() == ambient));
        let pivots = rref(&mut basis);
        Subspace { ambient, basis, pivots }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(
            ambient,
            (0..ambient).map(|i| {
                let mut v = vec![GaussRational::zero(); ambient];
                v[i] = GaussRational::one();
                v
            }),
        )
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// Remainder of `v` after eliminating the pivot coordinates of this subspace.
    pub fn reduce(&self, v: &[GaussRational]) -> Vector {
        let mut out = v.to_vec();
        for (row, &p) in self.basis.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let factor = out[p].clone();
            for (x, y) in out.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x -= &(&factor * y);
                }
            }
        }
        out
    }

    pub fn contains(&self, v: &[GaussRational]) -> bool {
        is_zero_vector(&self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(self.ambient, self.basis.iter().chain(other.basis.iter()).cloned())
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        if self.dim() == 0 || other.dim() == 0 {
            return Subspace::zero(self.ambient);
        }
        // a·U = b·W  <=>  (a, -b) in the kernel of [U; W]^T.
        let cols: Vec<Vector> = self
            .basis
            .iter()
            .cloned()
            .chain(other.basis.iter().map(|w| w.iter().map(|x| -x).collect()))
            .collect();
        let kern = kernel_of_map(&cols, self.ambient);
        let k = self.dim();
        Subspace::span(
            self.ambient,
            kern.into_iter().map(|coeffs| combine(&self.basis, &coeffs[..k], self.ambient)),
        )
    }

    /// Deterministic complement of `sub` inside `self`: the remainders of this
    /// subspace's echelon basis vectors modulo `sub`, kept greedily while
    /// they stay independent.
    pub fn complement_of(&self, sub: &Subspace) -> Vec<Vector> {
        let mut acc = sub.clone();
        let mut out = Vec::new();
        for v in &self.basis {
            let r = acc.reduce(v);
            if is_zero_vector(&r) {
                continue;
            }
            let rep = sub.reduce(v);
            acc = acc.sum(&Subspace::span(self.ambient, [r]));
            out.push(rep);
        }
        out
    }

    /// Coordinates of `v` in the echelon basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[GaussRational]) -> Option<Vector> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&p| v[p].clone()).collect())
    }
}

pub fn combine(basis: &[Vector], coeffs: &[GaussRational], ambient: usize) -> Vector {
    let mut out = vec![GaussRational::zero(); ambient];
    for (b, c) in basis.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (x, y) in out.iter_mut().zip(b) {
            if !y.is_zero() {
                *x += &(c * y);
            }
        }
    }
    out
}
