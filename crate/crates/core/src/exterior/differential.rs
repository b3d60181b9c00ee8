use super::{wedge_sign, Form, Mono};
use crate::scalars::{Coeff, GaussRational};

/// Exterior derivative of invariant forms, determined by `dφ^k` and
/// `dφ̄^k = conj(dφ^k)` through the Leibniz rule.
#[derive(Clone, Debug, PartialEq)]
pub struct Differential {
    n: usize,
    dgen: Vec<Vec<(Mono, GaussRational)>>,
}

impl Differential {
    /// `d_phi[k]` is `dφ^{k+1}` as a 2-form.
    pub fn new(d_phi: &[Form<GaussRational>]) -> Self {
        let n = d_phi.len();
        let mut dgen = Vec::with_capacity(2 * n);
        for f in d_phi {
            dgen.push(f.terms().map(|(m, c)| (*m, c.clone())).collect());
        }
        for f in d_phi {
            dgen.push(f.conj().terms().map(|(m, c)| (*m, c.clone())).collect());
        }
        Differential { n, dgen }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d_generator(&self, g: usize) -> Form<GaussRational> {
        let mut f = Form::zero(self.n);
        for (m, c) in &self.dgen[g] {
            f.add_term(*m, c.clone());
        }
        f
    }

    /// `d` of a single canonical monomial.
    pub fn d_mono(&self, m: Mono) -> Form<GaussRational> {
        let mut out = Form::zero(self.n);
        let gens: Vec<usize> = m.generators().collect();
        for (pos, &g) in gens.iter().enumerate() {
            let prefix = Mono(gens[..pos].iter().fold(0, |acc, &h| acc | (1 << h)));
            let suffix = Mono(gens[pos + 1..].iter().fold(0, |acc, &h| acc | (1 << h)));
            let leibniz_neg = pos % 2 == 1;
            for (dm, c) in &self.dgen[g] {
                let Some(s1) = wedge_sign(prefix, *dm) else { continue };
                let mid = Mono(prefix.0 | dm.0);
                let Some(s2) = wedge_sign(mid, suffix) else { continue };
                let neg = leibniz_neg ^ s1 ^ s2;
                out.add_term(Mono(mid.0 | suffix.0), if neg { -c } else { c.clone() });
            }
        }
        out
    }

    pub fn d<C: Coeff>(&self, a: &Form<C>) -> Form<C> {
        self.apply(a, |_, _| true)
    }

    /// `∂`: the (p+1,q)-part of `d` on each (p,q)-monomial.
    pub fn del<C: Coeff>(&self, a: &Form<C>) -> Form<C> {
        self.apply(a, |(p, q), (p2, q2)| p2 == p + 1 && q2 == q)
    }

    /// `∂̄`: the (p,q+1)-part of `d` on each (p,q)-monomial.
    pub fn delbar<C: Coeff>(&self, a: &Form<C>) -> Form<C> {
        self.apply(a, |(p, q), (p2, q2)| p2 == p && q2 == q + 1)
    }

    fn apply<C: Coeff>(&self, a: &Form<C>, keep: impl Fn((usize, usize), (usize, usize)) -> bool) -> Form<C> {
        let n = self.n;
        let mut out = Form::zero(n);
        for (m, c) in a.terms() {
            let from = m.bidegree(n);
            for (dm, dc) in self.d_mono(*m).terms() {
                if keep(from, dm.bidegree(n)) {
                    out.add_term(*dm, c.scale(dc));
                }
            }
        }
        out
    }

    /// Columns of the matrix of an operator from `source` monomials to `target` monomials.
    pub fn matrix(
        &self,
        op: impl Fn(&Form<GaussRational>) -> Form<GaussRational>,
        source: &[Mono],
        target: &[Mono],
    ) -> Vec<Vec<GaussRational>> {
        source
            .iter()
            .map(|m| op(&Form::monomial(self.n, *m, GaussRational::one())).coords(target))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iwasawa() -> Differential {
        let n = 3;
        let d3 = Form::phi(n, 1).wedge(&Form::phi(n, 2)).neg();
        Differential::new(&[Form::zero(n), Form::zero(n), d3])
    }

    #[test]
    fn iwasawa_derivatives() {
        let d = iwasawa();
        let n = 3;
        let phi3: Form = Form::phi(n, 3);
        assert_eq!(d.d(&phi3), Form::phi(n, 1).wedge(&Form::phi(n, 2)).neg());
        assert!(d.d(&Form::<GaussRational>::phi(n, 1).wedge(&Form::phi(n, 2))).is_zero());
        assert!(d.d(&Form::<GaussRational>::phi(n, 1).wedge(&Form::phi(n, 3))).is_zero());
        assert!(d.d(&Form::<GaussRational>::phi(n, 2).wedge(&Form::phi(n, 3))).is_zero());
        assert_eq!(d.d(&Form::<GaussRational>::phibar(n, 3)), d.d(&phi3).conj());
    }

    #[test]
    fn d_squared_and_leibniz() {
        let d = iwasawa();
        let n = 3;
        for k in 0..=6 {
            for m in Mono::all_of_degree(n, k) {
                let f = Form::monomial(n, m, GaussRational::one());
                assert!(d.d(&d.d(&f)).is_zero(), "d^2 != 0 on {}", m.display(n));
                assert_eq!(d.d(&f), d.del(&f).add(&d.delbar(&f)));
            }
        }
        let a: Form = Form::phi(n, 3).add(&Form::phibar(n, 1));
        let b: Form = Form::phibar(n, 3).wedge(&Form::phi(n, 2));
        let lhs = d.d(&a.wedge(&b));
        let rhs = d.d(&a).wedge(&b).sub(&a.wedge(&d.d(&b)));
        assert_eq!(lhs, rhs);
    }
}
