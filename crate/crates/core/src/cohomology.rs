//! Invariant De Rham, Dolbeault and Bott–Chern cohomology by exact ranks, with
//! representatives, and the invariant ∂∂̄-lemma check.
//!
//! Representatives are the reduced-echelon basis vectors of the cocycle space
//! (pivots taken left to right in monomial mask order), reduced modulo the
//! coboundaries and kept greedily while independent.

use std::fmt;

use crate::exterior::{Form, Mono};
use crate::linalg::{kernel_of_map, Subspace, Vector};
use crate::scalars::GaussRational;
use crate::structeq::ComplexNilmanifold;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Theory {
    DeRham,
    Dolbeault,
    BottChern,
}

impl Theory {
    pub fn name(self) -> &'static str {
        match self {
            Theory::DeRham => "derham",
            Theory::Dolbeault => "dolbeault",
            Theory::BottChern => "bottchern",
        }
    }
}

impl fmt::Display for Theory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Theory {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "derham" => Ok(Theory::DeRham),
            "dolbeault" => Ok(Theory::Dolbeault),
            "bottchern" => Ok(Theory::BottChern),
            other => Err(format!("unknown theory `{other}` (expected derham, dolbeault or bottchern)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degree {
    Total(usize),
    Bi(usize, usize),
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Degree::Total(k) => write!(f, "{k}"),
            Degree::Bi(p, q) => write!(f, "{p},{q}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Group {
    pub degree: Degree,
    pub dim: usize,
    pub cocycle_dim: usize,
    pub coboundary_dim: usize,
    pub representatives: Vec<Form<GaussRational>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CohomologyReport {
    pub theory: Theory,
    pub n: usize,
    pub groups: Vec<Group>,
}

impl CohomologyReport {
    /// `b_0..b_{2n}` for De Rham reports.
    pub fn betti(&self) -> Vec<usize> {
        self.groups.iter().filter(|g| matches!(g.degree, Degree::Total(_))).map(|g| g.dim).collect()
    }

    /// `table[p][q]` for bigraded reports.
    pub fn table(&self) -> Vec<Vec<usize>> {
        let mut t = vec![vec![0; self.n + 1]; self.n + 1];
        for g in &self.groups {
            if let Degree::Bi(p, q) = g.degree {
                t[p][q] = g.dim;
            }
        }
        t
    }

    pub fn dim(&self, p: usize, q: usize) -> usize {
        self.table()[p][q]
    }
}

/// Column matrix of `op` from `source` to `target` monomials.
fn columns(
    m: &ComplexNilmanifold,
    op: impl Fn(&Form<GaussRational>) -> Form<GaussRational>,
    source: &[Mono],
    target: &[Mono],
) -> Vec<Vector> {
    m.diff().matrix(op, source, target)
}

fn stack(a: Vec<Vector>, b: Vec<Vector>) -> Vec<Vector> {
    a.into_iter().zip(b).map(|(mut x, y)| {
        x.extend(y);
        x
    })
    .collect()
}

fn kernel_space(cols: &[Vector], target_dim: usize, source_dim: usize) -> Subspace {
    Subspace::span(source_dim, kernel_of_map(cols, target_dim))
}

fn image_space(cols: Vec<Vector>, dim: usize) -> Subspace {
    Subspace::span(dim, cols)
}

fn group(n: usize, degree: Degree, monos: &[Mono], z: &Subspace, b: &Subspace) -> Group {
    assert!(z.contains_subspace(b), "coboundaries must be cocycles in degree {degree}");
    let reps = z.complement_of(b);
    assert_eq!(reps.len(), z.dim() - b.dim());
    Group {
        degree,
        dim: reps.len(),
        cocycle_dim: z.dim(),
        coboundary_dim: b.dim(),
        representatives: reps.iter().map(|v| Form::from_coords(n, monos, v)).collect(),
    }
}

pub fn derham(m: &ComplexNilmanifold) -> CohomologyReport {
    let n = m.n();
    let d = |f: &Form<GaussRational>| m.diff().d(f);
    let mut groups = Vec::new();
    for k in 0..=2 * n {
        let monos = Mono::all_of_degree(n, k);
        let z = if k == 2 * n {
            Subspace::full(monos.len())
        } else {
            let next = Mono::all_of_degree(n, k + 1);
            kernel_space(&columns(m, d, &monos, &next), next.len(), monos.len())
        };
        let b = if k == 0 {
            Subspace::zero(monos.len())
        } else {
            image_space(columns(m, d, &Mono::all_of_degree(n, k - 1), &monos), monos.len())
        };
        groups.push(group(n, Degree::Total(k), &monos, &z, &b));
    }
    CohomologyReport { theory: Theory::DeRham, n, groups }
}

fn bidegree_monos(n: usize, p: isize, q: isize) -> Vec<Mono> {
    if p < 0 || q < 0 || p as usize > n || q as usize > n {
        return Vec::new();
    }
    Mono::all_of_bidegree(n, p as usize, q as usize)
}

pub fn dolbeault(m: &ComplexNilmanifold) -> CohomologyReport {
    let n = m.n();
    let delbar = |f: &Form<GaussRational>| m.diff().delbar(f);
    let mut groups = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            let (pi, qi) = (p as isize, q as isize);
            let monos = bidegree_monos(n, pi, qi);
            let next = bidegree_monos(n, pi, qi + 1);
            let z = kernel_space(&columns(m, delbar, &monos, &next), next.len(), monos.len());
            let prev = bidegree_monos(n, pi, qi - 1);
            let b = image_space(columns(m, delbar, &prev, &monos), monos.len());
            groups.push(group(n, Degree::Bi(p, q), &monos, &z, &b));
        }
    }
    CohomologyReport { theory: Theory::Dolbeault, n, groups }
}

pub fn bott_chern(m: &ComplexNilmanifold) -> CohomologyReport {
    let n = m.n();
    let del = |f: &Form<GaussRational>| m.diff().del(f);
    let delbar = |f: &Form<GaussRational>| m.diff().delbar(f);
    let ddbar = |f: &Form<GaussRational>| m.diff().del(&m.diff().delbar(f));
    let mut groups = Vec::new();
    for p in 0..=n {
        for q in 0..=n {
            let (pi, qi) = (p as isize, q as isize);
            let monos = bidegree_monos(n, pi, qi);
            let t1 = bidegree_monos(n, pi + 1, qi);
            let t2 = bidegree_monos(n, pi, qi + 1);
            let cols = stack(columns(m, del, &monos, &t1), columns(m, delbar, &monos, &t2));
            let z = kernel_space(&cols, t1.len() + t2.len(), monos.len());
            let prev = bidegree_monos(n, pi - 1, qi - 1);
            let b = image_space(columns(m, ddbar, &prev, &monos), monos.len());
            groups.push(group(n, Degree::Bi(p, q), &monos, &z, &b));
        }
    }
    CohomologyReport { theory: Theory::BottChern, n, groups }
}

pub fn compute(m: &ComplexNilmanifold, theory: Theory) -> CohomologyReport {
    match theory {
        Theory::DeRham => derham(m),
        Theory::Dolbeault => dolbeault(m),
        Theory::BottChern => bott_chern(m),
    }
}

/// Exactness data for d-closed pure (p,q)-forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdbarEntry {
    pub p: usize,
    pub q: usize,
    pub closed_dim: usize,
    pub d_exact_dim: usize,
    pub del_exact_dim: usize,
    pub delbar_exact_dim: usize,
    pub ddbar_exact_dim: usize,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DdbarReport {
    pub entries: Vec<DdbarEntry>,
    pub overall: bool,
}

/// For every bidegree, compares the d-, ∂-, ∂̄- and ∂∂̄-exact subspaces of the
/// d-closed pure-type forms. The lemma holds iff all four coincide everywhere.
pub fn ddbar_check(m: &ComplexNilmanifold) -> DdbarReport {
    let n = m.n();
    let diff = m.diff();
    let mut entries = Vec::new();
    for k in 0..=2 * n {
        let monos = Mono::all_of_degree(n, k);
        let dim = monos.len();
        let closed_all = if k == 2 * n {
            Subspace::full(dim)
        } else {
            let next = Mono::all_of_degree(n, k + 1);
            kernel_space(&columns(m, |f| diff.d(f), &monos, &next), next.len(), dim)
        };
        let prev = if k == 0 { Vec::new() } else { Mono::all_of_degree(n, k - 1) };
        let d_image = image_space(columns(m, |f| diff.d(f), &prev, &monos), dim);
        for p in 0..=k.min(n) {
            let q = k - p;
            if q > n {
                continue;
            }
            let (pi, qi) = (p as isize, q as isize);
            let pure = Subspace::span(
                dim,
                monos.iter().enumerate().filter(|(_, mo)| mo.bidegree(n) == (p, q)).map(|(i, _)| unit(dim, i)),
            );
            let closed = closed_all.intersection(&pure);
            let d_exact = closed.intersection(&d_image);
            let del_exact = closed.intersection(&image_space(
                columns(m, |f| diff.del(f), &bidegree_monos(n, pi - 1, qi), &monos),
                dim,
            ));
            let delbar_exact = closed.intersection(&image_space(
                columns(m, |f| diff.delbar(f), &bidegree_monos(n, pi, qi - 1), &monos),
                dim,
            ));
            let ddbar_exact = image_space(
                columns(m, |f| diff.del(&diff.delbar(f)), &bidegree_monos(n, pi - 1, qi - 1), &monos),
                dim,
            );
            let base = ddbar_exact.dim();
            let holds = d_exact.dim() == base && del_exact.dim() == base && delbar_exact.dim() == base;
            entries.push(DdbarEntry {
                p,
                q,
                closed_dim: closed.dim(),
                d_exact_dim: d_exact.dim(),
                del_exact_dim: del_exact.dim(),
                delbar_exact_dim: delbar_exact.dim(),
                ddbar_exact_dim: base,
                holds,
            });
        }
    }
    entries.sort_by_key(|e| (e.p + e.q, e.p));
    let overall = entries.iter().all(|e| e.holds);
    DdbarReport { entries, overall }
}

fn unit(dim: usize, i: usize) -> Vector {
    let mut v = vec![GaussRational::zero(); dim];
    v[i] = GaussRational::one();
    v
}

/// Every ∂̄-closed (n−1,0)-form is d-closed.
pub fn holomorphic_forms_closed(m: &ComplexNilmanifold) -> bool {
    let n = m.n();
    if n == 0 {
        return true;
    }
    let monos = Mono::all_of_bidegree(n, n - 1, 0);
    let t = Mono::all_of_bidegree(n, n - 1, 1);
    let hol = kernel_space(&columns(m, |f| m.diff().delbar(f), &monos, &t), t.len(), monos.len());
    hol.basis().iter().all(|v| m.diff().d(&Form::from_coords(n, &monos, v)).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structeq::load;

    fn iwasawa() -> ComplexNilmanifold {
        load("dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = -phi1 ^ phi2\n").unwrap()
    }

    #[test]
    fn iwasawa_first_betti_and_representatives() {
        let r = derham(&iwasawa());
        assert_eq!(r.betti(), vec![1, 4, 8, 10, 8, 4, 1]);
        let reps: Vec<String> = r.groups[1].representatives.iter().map(|f| f.to_string()).collect();
        assert_eq!(reps, ["phi1", "phi2", "conj(phi1)", "conj(phi2)"]);
    }

    #[test]
    fn iwasawa_hodge() {
        let r = dolbeault(&iwasawa());
        assert_eq!(r.dim(1, 0), 3);
        assert_eq!(r.dim(0, 1), 2);
    }

    #[test]
    fn torus_tables() {
        let m = load("dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = 0\n").unwrap();
        let binom = [1, 3, 3, 1];
        for r in [dolbeault(&m), bott_chern(&m)] {
            for p in 0..=3 {
                for q in 0..=3 {
                    assert_eq!(r.dim(p, q), binom[p] * binom[q]);
                }
            }
        }
        assert!(ddbar_check(&m).overall);
    }

    #[test]
    fn iwasawa_ddbar_fails() {
        let r = ddbar_check(&iwasawa());
        assert!(!r.overall);
        let e20 = r.entries.iter().find(|e| (e.p, e.q) == (2, 0)).unwrap();
        assert_eq!(e20.d_exact_dim, 1);
        assert_eq!(e20.ddbar_exact_dim, 0);
        assert!(holomorphic_forms_closed(&iwasawa()));
    }
}
