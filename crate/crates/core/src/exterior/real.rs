use super::{Form, Mono};
use crate::linalg::Vector;
use crate::scalars::GaussRational;

/// Real structure on the span of a conjugation-closed set of monomials.
///
/// For a pair `m ≠ m̄` the real basis holds `m + conj(m)` and `i(m − conj(m))`;
/// a self-conjugate `m` contributes `m` or `i·m`, whichever is real. Real
/// forms then have rational coordinates.
#[derive(Clone, Debug)]
pub struct RealFrame {
    n: usize,
    monos: Vec<Mono>,
    entries: Vec<RealEntry>,
}

#[derive(Clone, Copy, Debug)]
enum RealEntry {
    /// `m + conj(m)` then `i(m - conj(m))`, read off as Re/Im of the coefficient of `m`.
    PairRe(Mono),
    PairIm(Mono),
    /// self-conjugate `m` with `conj(m) = m`
    SelfReal(Mono),
    /// self-conjugate `m` with `conj(m) = -m`; basis element `i·m`
    SelfImag(Mono),
}

impl RealFrame {
    pub fn new(n: usize, mut monos: Vec<Mono>) -> Self {
        monos.sort();
        monos.dedup();
        let mut entries = Vec::new();
        for &m in &monos {
            let (cm, neg) = m.conj(n);
            debug_assert!(monos.binary_search(&cm).is_ok(), "monomial set not closed under conjugation");
            if cm == m {
                entries.push(if neg { RealEntry::SelfImag(m) } else { RealEntry::SelfReal(m) });
            } else if m < cm {
                entries.push(RealEntry::PairRe(m));
                entries.push(RealEntry::PairIm(m));
            }
        }
        RealFrame { n, monos, entries }
    }

    pub fn of_bidegree(n: usize, p: usize, q: usize) -> Self {
        let mut monos = Mono::all_of_bidegree(n, p, q);
        if p != q {
            monos.extend(Mono::all_of_bidegree(n, q, p));
        }
        Self::new(n, monos)
    }

    pub fn of_degree(n: usize, k: usize) -> Self {
        Self::new(n, Mono::all_of_degree(n, k))
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn monos(&self) -> &[Mono] {
        &self.monos
    }

    pub fn basis_form(&self, idx: usize) -> Form<GaussRational> {
        let n = self.n;
        let unit = |m: Mono| Form::monomial(n, m, GaussRational::one());
        match self.entries[idx] {
            RealEntry::PairRe(m) => unit(m).add(&unit(m).conj()),
            RealEntry::PairIm(m) => unit(m).sub(&unit(m).conj()).scale(&GaussRational::i()),
            RealEntry::SelfReal(m) => unit(m),
            RealEntry::SelfImag(m) => unit(m).scale(&GaussRational::i()),
        }
    }

    pub fn basis(&self) -> Vec<Form<GaussRational>> {
        (0..self.dim()).map(|i| self.basis_form(i)).collect()
    }

    /// Rational coordinates of a real form (terms outside the frame are ignored).
    pub fn coords(&self, f: &Form<GaussRational>) -> Vector {
        self.entries
            .iter()
            .map(|e| match *e {
                RealEntry::PairRe(m) | RealEntry::SelfReal(m) => GaussRational::real(f.coeff(m).re),
                RealEntry::PairIm(m) | RealEntry::SelfImag(m) => GaussRational::real(f.coeff(m).im),
            })
            .collect()
    }

    pub fn form(&self, coords: &[GaussRational]) -> Form<GaussRational> {
        let mut out = Form::zero(self.n);
        for (i, c) in coords.iter().enumerate() {
            if !c.is_zero() {
                out = out.add(&self.basis_form(i).scale(c));
            }
        }
        out
    }
}
