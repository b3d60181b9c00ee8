//! Bigraded exterior algebra on the invariant coframe `φ¹..φⁿ, φ̄¹..φ̄ⁿ`.
//!
//! Generator `g < n` is `φ^{g+1}`, generator `g >= n` is `φ̄^{g-n+1}`. A
//! monomial is the bitmask of its generators; its canonical order is
//! ascending generator index, so all holomorphic factors come first.

mod differential;
mod hermitian;
mod real;

pub use differential::Differential;
pub use hermitian::HermitianMatrix;
pub use real::RealFrame;

use std::collections::BTreeMap;
use std::fmt;

use crate::scalars::{Coeff, GaussRational, ParamPoly};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ExteriorError {
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("form is not real")]
    NotReal,
    #[error("wrong bidegree: expected pure ({0},{1})")]
    WrongBidegree(usize, usize),
}

/// Canonical wedge monomial, as a bitmask over the `2n` generators.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Mono(pub u32);

impl Mono {
    pub const ONE: Mono = Mono(0);

    pub fn generator(g: usize) -> Mono {
        Mono(1 << g)
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn bidegree(self, n: usize) -> (usize, usize) {
        let hol = (self.0 & ((1 << n) - 1)).count_ones() as usize;
        (hol, self.degree() - hol)
    }

    pub fn generators(self) -> impl Iterator<Item = usize> {
        let mask = self.0;
        (0..32).filter(move |g| mask & (1 << g) != 0)
    }

    /// Conjugate monomial and the sign absorbed by reordering it canonically.
    pub fn conj(self, n: usize) -> (Mono, bool) {
        let low = (1u32 << n) - 1;
        let hol = self.0 & low;
        let anti = self.0 >> n;
        let (p, q) = (hol.count_ones(), anti.count_ones());
        (Mono(anti | (hol << n)), (p * q) % 2 == 1)
    }

    /// Every monomial of total degree `k` on `2n` generators, in mask order.
    pub fn all_of_degree(n: usize, k: usize) -> Vec<Mono> {
        (0u32..(1 << (2 * n))).filter(|m| m.count_ones() as usize == k).map(Mono).collect()
    }

    pub fn all_of_bidegree(n: usize, p: usize, q: usize) -> Vec<Mono> {
        Mono::all_of_degree(n, p + q).into_iter().filter(|m| m.bidegree(n) == (p, q)).collect()
    }

    pub fn top(n: usize) -> Mono {
        Mono((1 << (2 * n)) - 1)
    }

    pub fn display(self, n: usize) -> String {
        if self.0 == 0 {
            return "1".to_string();
        }
        self.generators().map(|g| generator_name(n, g)).collect::<Vec<_>>().join(" ^ ")
    }
}

pub fn generator_name(n: usize, g: usize) -> String {
    if g < n {
        format!("phi{}", g + 1)
    } else {
        format!("conj(phi{})", g - n + 1)
    }
}

/// Sign of `a ∧ b` relative to the canonical monomial `a | b`; `None` if they share a factor.
pub fn wedge_sign(a: Mono, b: Mono) -> Option<bool> {
    if a.0 & b.0 != 0 {
        return None;
    }
    let mut swaps = 0u32;
    for j in b.generators() {
        swaps += (a.0 >> (j + 1)).count_ones();
    }
    Some(swaps % 2 == 1)
}

/// An invariant differential form with coefficients in `C`.
#[derive(Clone, PartialEq, Debug)]
pub struct Form<C = GaussRational> {
    n: usize,
    coeffs: BTreeMap<Mono, C>,
}

pub type PolyForm = Form<ParamPoly>;

impl<C: Coeff> Form<C> {
    pub fn zero(n: usize) -> Self {
        Form { n, coeffs: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::monomial(n, Mono::ONE, C::from_gauss(GaussRational::one()))
    }

    pub fn monomial(n: usize, m: Mono, c: C) -> Self {
        let mut f = Self::zero(n);
        f.add_term(m, c);
        f
    }

    /// The generator `φ^k` (1-based).
    pub fn phi(n: usize, k: usize) -> Self {
        Self::monomial(n, Mono::generator(k - 1), C::from_gauss(GaussRational::one()))
    }

    /// The generator `φ̄^k` (1-based).
    pub fn phibar(n: usize, k: usize) -> Self {
        Self::monomial(n, Mono::generator(n + k - 1), C::from_gauss(GaussRational::one()))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_term(&mut self, m: Mono, c: C) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&m) {
            Some(existing) => {
                *existing = existing.add(&c);
                if existing.is_zero() {
                    self.coeffs.remove(&m);
                }
            }
            None => {
                self.coeffs.insert(m, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &C)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, m: Mono) -> C {
        self.coeffs.get(&m).cloned().unwrap_or_else(C::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, other: &Form<C>) -> Form<C> {
        assert_eq!(self.n, other.n, "dimension mismatch");
        let mut out = self.clone();
        for (m, c) in &other.coeffs {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Form<C>) -> Form<C> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Form<C> {
        Form { n: self.n, coeffs: self.coeffs.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, c: &C) -> Form<C> {
        let mut out = Form::zero(self.n);
        for (m, x) in &self.coeffs {
            out.add_term(*m, x.mul(c));
        }
        out
    }

    pub fn scale_gauss(&self, c: &GaussRational) -> Form<C> {
        let mut out = Form::zero(self.n);
        for (m, x) in &self.coeffs {
            out.add_term(*m, x.scale(c));
        }
        out
    }

    pub fn try_wedge(&self, other: &Form<C>) -> Result<Form<C>, ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::DimensionMismatch(self.n, other.n));
        }
        let mut out = Form::zero(self.n);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                if let Some(neg) = wedge_sign(*a, *b) {
                    let c = ca.mul(cb);
                    out.add_term(Mono(a.0 | b.0), if neg { c.neg() } else { c });
                }
            }
        }
        Ok(out)
    }

    /// Exterior product; panics on a dimension mismatch.
    pub fn wedge(&self, other: &Form<C>) -> Form<C> {
        self.try_wedge(other).expect("wedge of forms of different dimension")
    }

    /// `self^k` under the wedge product.
    pub fn wedge_power(&self, k: usize) -> Form<C> {
        (0..k).fold(Form::one(self.n), |acc, _| acc.wedge(self))
    }

    pub fn conj(&self) -> Form<C> {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.coeffs {
            let (cm, neg) = m.conj(self.n);
            let c = c.conj();
            out.add_term(cm, if neg { c.neg() } else { c });
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    pub fn bidegree_component(&self, p: usize, q: usize) -> Form<C> {
        self.filter(|m| m.bidegree(self.n) == (p, q))
    }

    pub fn degree_component(&self, k: usize) -> Form<C> {
        self.filter(|m| m.degree() == k)
    }

    pub fn filter(&self, keep: impl Fn(Mono) -> bool) -> Form<C> {
        Form {
            n: self.n,
            coeffs: self.coeffs.iter().filter(|(m, _)| keep(**m)).map(|(m, c)| (*m, c.clone())).collect(),
        }
    }

    /// Bidegrees present, in ascending order.
    pub fn bidegrees(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<_> = self.coeffs.keys().map(|m| m.bidegree(self.n)).collect();
        out.sort();
        out.dedup();
        out
    }

    pub fn is_pure(&self, p: usize, q: usize) -> bool {
        self.coeffs.keys().all(|m| m.bidegree(self.n) == (p, q))
    }

    /// Coefficient of `vol := (iφ¹∧φ̄¹)∧…∧(iφⁿ∧φ̄ⁿ)`.
    pub fn top_coefficient(&self) -> C {
        let top = Mono::top(self.n);
        let c = self.coeff(top);
        if c.is_zero() {
            return c;
        }
        c.scale(&volume_coefficient(self.n).inv())
    }

    /// Replaces each generator `g` by the 1-form `images[g]` and expands.
    pub fn substitute(&self, images: &[Form<C>]) -> Form<C> {
        assert_eq!(images.len(), 2 * self.n);
        let mut out = Form::zero(self.n);
        for (m, c) in &self.coeffs {
            let mut acc = Form::monomial(self.n, Mono::ONE, c.clone());
            for g in m.generators() {
                acc = acc.wedge(&images[g]);
                if acc.is_zero() {
                    break;
                }
            }
            out = out.add(&acc);
        }
        out
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Form<D> {
        let mut out = Form::zero(self.n);
        for (m, c) in &self.coeffs {
            out.add_term(*m, f(c));
        }
        out
    }

    /// Coordinate vector against an ordered list of monomials. Terms on other
    /// monomials are ignored.
    pub fn coords(&self, basis: &[Mono]) -> Vec<C> {
        basis.iter().map(|m| self.coeff(*m)).collect()
    }

    pub fn from_coords(n: usize, basis: &[Mono], coords: &[C]) -> Form<C> {
        let mut out = Form::zero(n);
        for (m, c) in basis.iter().zip(coords) {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl Form<GaussRational> {
    pub fn to_poly(&self) -> PolyForm {
        self.map_coeffs(|c| ParamPoly::constant(c.clone()))
    }

    /// `i·φ^j∧φ̄^k` (1-based).
    pub fn i_phi_phibar(n: usize, j: usize, k: usize) -> Self {
        Form::phi(n, j).wedge(&Form::phibar(n, k)).scale(&GaussRational::i())
    }

    /// `vol = Π_j (iφ^j∧φ̄^j)`.
    pub fn volume(n: usize) -> Self {
        (1..=n).fold(Form::one(n), |acc, j| acc.wedge(&Form::i_phi_phibar(n, j, j)))
    }

    /// Matrix `H` with `self = i Σ H_jk φ^j∧φ̄^k`, for a real (1,1)-form.
    pub fn hermitian_of_11(&self) -> Result<HermitianMatrix, ExteriorError> {
        let n = self.n;
        if !self.is_pure(1, 1) {
            return Err(ExteriorError::WrongBidegree(1, 1));
        }
        if !self.is_real() {
            return Err(ExteriorError::NotReal);
        }
        let minus_i = -GaussRational::i();
        let mut h = HermitianMatrix::zero(n);
        for j in 0..n {
            for k in 0..n {
                let m = Mono((1 << j) | (1 << (n + k)));
                h.entries[j][k] = &self.coeff(m) * &minus_i;
            }
        }
        Ok(h)
    }

    /// Matrix `H` with `self ∧ iφ^j∧φ̄^k = H_jk·vol`, for a real (n−1,n−1)-form.
    pub fn hermitian_of_n1n1(&self) -> Result<HermitianMatrix, ExteriorError> {
        let n = self.n;
        if n == 0 || !self.is_pure(n - 1, n - 1) {
            return Err(ExteriorError::WrongBidegree(n.saturating_sub(1), n.saturating_sub(1)));
        }
        if !self.is_real() {
            return Err(ExteriorError::NotReal);
        }
        let mut h = HermitianMatrix::zero(n);
        for j in 1..=n {
            for k in 1..=n {
                h.entries[j - 1][k - 1] = self.wedge(&Form::i_phi_phibar(n, j, k)).top_coefficient();
            }
        }
        Ok(h)
    }

    /// The real (1,1)-form `i Σ H_jk φ^j∧φ̄^k`.
    pub fn from_hermitian_11(h: &HermitianMatrix) -> Self {
        let n = h.n();
        let mut out = Form::zero(n);
        for j in 0..n {
            for k in 0..n {
                let m = Mono((1 << j) | (1 << (n + k)));
                out.add_term(m, &h.entries[j][k] * &GaussRational::i());
            }
        }
        out
    }

    /// The real (n−1,n−1)-form whose (n−1,n−1)-probe is `h`.
    pub fn from_hermitian_n1n1(h: &HermitianMatrix) -> Self {
        let n = h.n();
        let full = (1u32 << n) - 1;
        let mut out = Form::zero(n);
        for j in 0..n {
            for k in 0..n {
                if h.entries[j][k].is_zero() {
                    continue;
                }
                let m = Mono((full & !(1 << j)) | ((full & !(1 << k)) << n));
                let unit = Form::monomial(n, m, GaussRational::one());
                let pairing = unit.wedge(&Form::i_phi_phibar(n, j + 1, k + 1)).top_coefficient();
                out.add_term(m, &h.entries[j][k] / &pairing);
            }
        }
        out
    }
}

/// Coefficient of the top mask monomial in `vol`.
pub fn volume_coefficient(n: usize) -> GaussRational {
    let mut acc = Form::<GaussRational>::one(n);
    for j in 1..=n {
        acc = acc.wedge(&Form::phi(n, j).wedge(&Form::phibar(n, j)).scale(&GaussRational::i()));
    }
    acc.coeff(Mono::top(n))
}

impl<C: Coeff> fmt::Display for Form<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.coeffs {
            let mono = m.display(self.n);
            for (neg, body) in c.signed_factors() {
                if first {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                first = false;
                if body.is_empty() {
                    write!(f, "{mono}")?;
                } else if m.0 == 0 {
                    write!(f, "{body}")?;
                } else {
                    write!(f, "{body} * {mono}")?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type F = Form<GaussRational>;

    #[test]
    fn wedge_basics() {
        let n = 3;
        let a = F::phi(n, 1).wedge(&F::phi(n, 2));
        assert_eq!(a.num_terms(), 1);
        assert_eq!(a.bidegrees(), vec![(2, 0)]);
        assert!(F::phi(n, 1).wedge(&F::phi(n, 1)).is_zero());
        let b = F::phi(n, 2).wedge(&F::phi(n, 1));
        assert_eq!(b, a.neg());
        let p13 = F::phi(n, 1).wedge(&F::phi(n, 3));
        let top = p13.wedge(&p13.conj());
        assert_eq!(top.bidegrees(), vec![(2, 2)]);
    }

    #[test]
    fn conj_is_involution_with_signs() {
        let n = 3;
        let a = F::phi(n, 1).wedge(&F::phibar(n, 2)).scale(&GaussRational::i());
        assert_eq!(a.conj().conj(), a);
        // conj(i φ1∧φ̄2) = -i φ̄1∧φ2 = i φ2∧φ̄1
        assert_eq!(a.conj(), F::i_phi_phibar(n, 2, 1));
        assert!(F::i_phi_phibar(n, 2, 2).is_real());
    }

    #[test]
    fn volume_and_top() {
        for n in 1..=4 {
            assert_eq!(F::volume(n).top_coefficient(), GaussRational::one());
        }
    }

    #[test]
    fn probes() {
        let n = 3;
        let omega = (1..=n).fold(F::zero(n), |acc, j| acc.add(&F::i_phi_phibar(n, j, j)));
        assert_eq!(omega.hermitian_of_11().unwrap(), HermitianMatrix::identity(n));
        let e22 = F::i_phi_phibar(n, 2, 2).hermitian_of_11().unwrap();
        assert_eq!(e22.entries[1][1], GaussRational::one());
        assert_eq!(e22.entries[0][0], GaussRational::zero());
        assert_eq!(F::phi(n, 1).wedge(&F::phi(n, 2)).hermitian_of_11(), Err(ExteriorError::WrongBidegree(1, 1)));
        assert_eq!(F::phi(n, 1).wedge(&F::phibar(n, 1)).hermitian_of_11(), Err(ExteriorError::NotReal));
    }

    #[test]
    fn hermitian_round_trip() {
        let n = 3;
        let mut h = HermitianMatrix::identity(n);
        h.entries[0][2] = GaussRational::new(crate::scalars::rat(1, 2), crate::scalars::rat(1, 3));
        h.entries[2][0] = h.entries[0][2].conj();
        let a = F::from_hermitian_11(&h);
        assert!(a.is_real());
        assert_eq!(a.hermitian_of_11().unwrap(), h);
        let b = F::from_hermitian_n1n1(&h);
        assert!(b.is_real());
        assert_eq!(b.hermitian_of_n1n1().unwrap(), h);
    }
}
