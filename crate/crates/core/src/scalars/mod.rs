//! Exact scalars: rationals, Gaussian rationals and polynomials in formal
//! deformation parameters with a conjugation involution.

mod gauss;
mod poly;
mod rational;

pub use gauss::{GaussRational, ParseGaussError};
pub use poly::{ParamPoly, PolyMonomial, Var};
pub(crate) use poly::split_sign;
pub use rational::{limit_denominator, rat, rat_int, rational_to_f64, rationalize, Rational};

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ScalarError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
}

/// Coefficient ring for forms: Gaussian rationals, or parameter polynomials.
pub trait Coeff: Clone + PartialEq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    fn zero() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn conj(&self) -> Self;
    fn from_gauss(c: GaussRational) -> Self;
    fn scale(&self, c: &GaussRational) -> Self;
    /// Printable summands as (negative?, body); an empty body means a unit coefficient.
    fn signed_factors(&self) -> Vec<(bool, String)>;
}

impl Coeff for GaussRational {
    fn zero() -> Self {
        GaussRational::zero()
    }
    fn is_zero(&self) -> bool {
        GaussRational::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn conj(&self) -> Self {
        GaussRational::conj(self)
    }
    fn from_gauss(c: GaussRational) -> Self {
        c
    }
    fn scale(&self, c: &GaussRational) -> Self {
        self * c
    }
    fn signed_factors(&self) -> Vec<(bool, String)> {
        let (neg, mag) = split_sign(self);
        vec![(neg, if mag.is_one() { String::new() } else { mag.to_string() })]
    }
}

impl Coeff for ParamPoly {
    fn zero() -> Self {
        ParamPoly::zero()
    }
    fn is_zero(&self) -> bool {
        ParamPoly::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        ParamPoly::add(self, other)
    }
    fn mul(&self, other: &Self) -> Self {
        ParamPoly::mul(self, other)
    }
    fn neg(&self) -> Self {
        ParamPoly::neg(self)
    }
    fn conj(&self) -> Self {
        ParamPoly::conj(self)
    }
    fn from_gauss(c: GaussRational) -> Self {
        ParamPoly::constant(c)
    }
    fn scale(&self, c: &GaussRational) -> Self {
        ParamPoly::scale(self, c)
    }
    fn signed_factors(&self) -> Vec<(bool, String)> {
        self.terms()
            .map(|(m, c)| {
                let (neg, mag) = split_sign(c);
                let body = match (mag.is_one(), m.is_one()) {
                    (true, true) => String::new(),
                    (true, false) => m.to_string(),
                    (false, true) => mag.to_string(),
                    (false, false) => format!("{mag} * {m}"),
                };
                (neg, body)
            })
            .collect()
    }
}
