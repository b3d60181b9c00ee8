use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::gauss::GaussRational;
use super::ScalarError;

/// A formal parameter `t` or its formal conjugate `conj(t)`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Var {
    pub name: String,
    pub conj: bool,
}

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var { name: name.into(), conj: false }
    }

    pub fn conjugate(&self) -> Self {
        Var { name: self.name.clone(), conj: !self.conj }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.conj {
            write!(f, "conj({})", self.name)
        } else {
            write!(f, "{}", self.name)
        }
    }
}

/// Exponent vector, stored sparsely and sorted by variable.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct PolyMonomial(Vec<(Var, u32)>);

impl PolyMonomial {
    pub fn one() -> Self {
        PolyMonomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        PolyMonomial(vec![(v, 1)])
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &PolyMonomial) -> PolyMonomial {
        let mut acc: BTreeMap<Var, u32> = self.0.iter().cloned().collect();
        for (v, e) in &other.0 {
            *acc.entry(v.clone()).or_insert(0) += e;
        }
        PolyMonomial(acc.into_iter().collect())
    }

    pub fn conj(&self) -> PolyMonomial {
        let acc: BTreeMap<Var, u32> = self.0.iter().map(|(v, e)| (v.conjugate(), *e)).collect();
        PolyMonomial(acc.into_iter().collect())
    }
}

impl fmt::Display for PolyMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .flat_map(|(v, e)| std::iter::repeat_n(v.to_string(), *e as usize))
            .collect();
        write!(f, "{}", parts.join(" * "))
    }
}

/// Polynomial in formal parameters `t_k` and independent formal conjugates
/// `conj(t_k)`, with Gaussian-rational coefficients. The zero polynomial has
/// no terms.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct ParamPoly {
    terms: BTreeMap<PolyMonomial, GaussRational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly::default()
    }

    pub fn constant(c: GaussRational) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term(PolyMonomial::one(), c);
        p
    }

    pub fn one() -> Self {
        Self::constant(GaussRational::one())
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(PolyMonomial::var(Var::new(name)), GaussRational::one())
    }

    pub fn conj_var(name: &str) -> Self {
        Self::monomial(PolyMonomial::var(Var::new(name).conjugate()), GaussRational::one())
    }

    pub fn monomial(m: PolyMonomial, c: GaussRational) -> Self {
        let mut p = ParamPoly::zero();
        p.add_term(m, c);
        p
    }

    pub fn add_term(&mut self, m: PolyMonomial, c: GaussRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m.clone()).or_insert_with(GaussRational::zero);
        *entry += &c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PolyMonomial, &GaussRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant value, if the polynomial involves no parameters.
    pub fn as_constant(&self) -> Option<GaussRational> {
        match self.terms.len() {
            0 => Some(GaussRational::zero()),
            1 => self.terms.get(&PolyMonomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(PolyMonomial::degree).max().unwrap_or(0)
    }

    pub fn homogeneous_part(&self, degree: u32) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == degree)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Parameter names occurring in the polynomial (conjugates reported under their base name).
    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.name.clone()))
            .collect()
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRational) -> ParamPoly {
        if c.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly { terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect() }
    }

    /// Conjugates coefficients and swaps every `t_k` with `conj(t_k)`.
    pub fn conj(&self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(m, c)| (m.conj(), c.conj())).collect() }
    }

    /// Evaluates at `t_k := point[t_k]`, binding `conj(t_k)` to the conjugate value.
    pub fn eval(&self, point: &BTreeMap<String, GaussRational>) -> Result<GaussRational, ScalarError> {
        let mut acc = GaussRational::zero();
        for (m, c) in &self.terms {
            let mut term = c.clone();
            for (v, e) in &m.0 {
                let value = point.get(&v.name).ok_or_else(|| ScalarError::UnboundVariable(v.name.clone()))?;
                let value = if v.conj { value.conj() } else { value.clone() };
                for _ in 0..*e {
                    term = &term * &value;
                }
            }
            acc += &term;
        }
        Ok(acc)
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in &self.terms {
            let (neg, mag) = split_sign(c);
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            match (mag.is_one(), m.is_one()) {
                (true, true) => write!(f, "1")?,
                (true, false) => write!(f, "{m}")?,
                (false, true) => write!(f, "{mag}")?,
                (false, false) => write!(f, "{mag} * {m}")?,
            }
        }
        Ok(())
    }
}

/// Splits off a leading minus sign for printing: returns (negated?, magnitude literal).
pub(crate) fn split_sign(c: &GaussRational) -> (bool, GaussRational) {
    use num_traits::{Signed, Zero};
    let negative = if c.re.is_zero() { c.im.is_negative() } else { c.re.is_negative() && !c.im.is_positive() };
    if negative {
        (true, -c)
    } else {
        (false, c.clone())
    }
}
