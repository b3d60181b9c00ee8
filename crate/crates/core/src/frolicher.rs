//! Frölicher spectral sequence of the holomorphic-degree filtration, computed
//! directly from the subspaces
//! `Z_r^{p,q} = {x ∈ F^pΛ^{p+q} : dx ∈ F^{p+r}}` and
//! `E_r^{p,q} = Z_r^{p,q} / (Z_{r−1}^{p+1,q−1} + d Z_{r−1}^{p−r+1,q+r−2})`.

use std::collections::HashMap;

use crate::cohomology::{derham, dolbeault};
use crate::exterior::{Form, Mono};
use crate::linalg::{kernel_of_map, Subspace};
use crate::scalars::GaussRational;
use crate::structeq::ComplexNilmanifold;

/// `table[p][q]`.
pub type Table = Vec<Vec<usize>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeCheck {
    pub k: usize,
    pub betti: usize,
    pub hodge_sum: usize,
    pub equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralPages {
    pub n: usize,
    /// `pages[r − 1]` is `E_r`.
    pub pages: Vec<Table>,
    pub e_infinity: Table,
    /// Smallest computed `r` with `E_r = E_∞`.
    pub degeneration_page: Option<usize>,
    pub degrees: Vec<DegreeCheck>,
    /// Alternating sum `Σ (−1)^{p+q} dim E_r^{p,q}` per computed page.
    pub euler: Vec<i64>,
    /// Euler invariance, monotonicity in `r`, and `Σ_{p+q=k} E_∞ = b_k` all hold.
    pub consistent: bool,
}

struct Filtration<'a> {
    m: &'a ComplexNilmanifold,
    cache: HashMap<(usize, isize, usize), Subspace>,
}

impl<'a> Filtration<'a> {
    fn monos(&self, k: usize) -> Vec<Mono> {
        Mono::all_of_degree(self.m.n(), k)
    }

    /// `Z_r^p` in degree `k`, in coordinates of all `k`-monomials.
    fn z(&mut self, r: usize, p: isize, k: usize) -> Subspace {
        if let Some(s) = self.cache.get(&(r, p, k)) {
            return s.clone();
        }
        let n = self.m.n();
        let all = self.monos(k);
        let hol = |m: &Mono| m.bidegree(n).0 as isize;
        let source: Vec<(usize, Mono)> = all.iter().copied().enumerate().filter(|(_, m)| hol(m) >= p).collect();
        let target: Vec<Mono> = if k == 2 * n {
            Vec::new()
        } else {
            self.monos(k + 1).into_iter().filter(|m| hol(m) < p + r as isize).collect()
        };
        let cols: Vec<Vec<GaussRational>> = source
            .iter()
            .map(|(_, m)| self.m.diff().d_mono(*m).coords(&target))
            .collect();
        let kern = kernel_of_map(&cols, target.len());
        let space = Subspace::span(
            all.len(),
            kern.into_iter().map(|v| {
                let mut full = vec![GaussRational::zero(); all.len()];
                for ((idx, _), c) in source.iter().zip(v) {
                    full[*idx] = c;
                }
                full
            }),
        );
        self.cache.insert((r, p, k), space.clone());
        space
    }

    fn d_image(&mut self, r: usize, p: isize, k: usize) -> Subspace {
        let target = self.monos(k);
        if k == 0 {
            return Subspace::zero(target.len());
        }
        let src = self.z(r, p, k - 1);
        let source = self.monos(k - 1);
        let n = self.m.n();
        Subspace::span(
            target.len(),
            src.basis().iter().map(|v| self.m.diff().d(&Form::from_coords(n, &source, v)).coords(&target)),
        )
    }

    fn e(&mut self, r: usize, p: usize, q: usize) -> usize {
        let k = p + q;
        let pi = p as isize;
        let z = self.z(r, pi, k);
        let lower = self.z(r - 1, pi + 1, k);
        let bound = self.d_image(r - 1, pi - r as isize + 1, k);
        let denom = lower.sum(&bound);
        debug_assert!(z.contains_subspace(&denom));
        z.dim() - denom.dim()
    }

    fn page(&mut self, r: usize) -> Table {
        let n = self.m.n();
        (0..=n).map(|p| (0..=n).map(|q| self.e(r, p, q)).collect()).collect()
    }
}

fn euler(t: &Table) -> i64 {
    let mut acc = 0i64;
    for (p, row) in t.iter().enumerate() {
        for (q, &v) in row.iter().enumerate() {
            acc += if (p + q) % 2 == 0 { v as i64 } else { -(v as i64) };
        }
    }
    acc
}

/// Pages `E_1..E_{r_max}`, stopping early once a page equals `E_∞`.
/// `r_max` defaults to `n + 1`, after which every differential vanishes.
pub fn pages(m: &ComplexNilmanifold, r_max: Option<usize>) -> SpectralPages {
    let n = m.n();
    let r_max = r_max.unwrap_or(n + 1).max(1);
    let mut filt = Filtration { m, cache: HashMap::new() };
    let e_infinity = filt.page(n + 1);
    let mut out = Vec::new();
    let mut degeneration_page = None;
    for r in 1..=r_max {
        let t = filt.page(r);
        let done = t == e_infinity;
        out.push(t);
        if done {
            degeneration_page = Some(r);
            break;
        }
    }
    let degrees = check_inequality(m);
    let betti: Vec<usize> = degrees.iter().map(|d| d.betti).collect();
    let eulers: Vec<i64> = out.iter().map(euler).collect();
    let mut consistent = eulers.iter().all(|&e| e == euler(&e_infinity));
    for w in out.windows(2).chain(std::iter::once([out[out.len() - 1].clone(), e_infinity.clone()].as_slice())) {
        for p in 0..=n {
            for q in 0..=n {
                consistent &= w[1][p][q] <= w[0][p][q];
            }
        }
    }
    for (k, b) in betti.iter().enumerate() {
        let s: usize = (0..=n).filter(|p| *p <= k && k - p <= n).map(|p| e_infinity[p][k - p]).sum();
        consistent &= s == *b;
    }
    consistent &= out[0] == dolbeault(m).table();
    SpectralPages { n, pages: out, e_infinity, degeneration_page, degrees, euler: eulers, consistent }
}

/// `b_k` against `Σ_{p+q=k} h^{p,q}` for every `k`.
pub fn check_inequality(m: &ComplexNilmanifold) -> Vec<DegreeCheck> {
    let n = m.n();
    let b = derham(m).betti();
    let h = dolbeault(m).table();
    (0..=2 * n)
        .map(|k| {
            let hodge_sum: usize = (0..=n).filter(|p| *p <= k && k - p <= n).map(|p| h[p][k - p]).sum();
            DegreeCheck { k, betti: b[k], hodge_sum, equal: b[k] == hodge_sum }
        })
        .collect()
}
