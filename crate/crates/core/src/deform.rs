//! Deformed structure equations at a rational parameter point: the graph
//! coframe `φ^i_t = φ^i + Σ_λ ψ^i_λ φ̄^λ` of a Maurer-Cartan solution `ψ`.

use std::collections::BTreeMap;

use crate::exterior::{Form, Mono};
use crate::kuranishi::{maurer_cartan_residual, parameter_name, solve_maurer_cartan, KuranishiError, VectorForm};
use crate::linalg::Vector;
use crate::scalars::{GaussRational, ScalarError};
use crate::structeq::{load, ComplexNilmanifold, StructError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DeformError {
    #[error("NOT_INVERTIBLE: graph coframe has rank {rank} of {size}; the parameter is too large")]
    NotInvertible { rank: usize, size: usize },
    #[error("INTEGRABILITY_BROKEN: {0}")]
    IntegrabilityBroken(String),
    #[error("the point t = 0 is the base manifold itself; use `iwasawa` instead")]
    ZeroParameter,
    #[error("unknown parameter `{0}`")]
    UnknownParameter(String),
    #[error("vector form has n = {0}, manifold has n = {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error(transparent)]
    Struct(StructError),
    #[error(transparent)]
    Kuranishi(#[from] KuranishiError),
}

impl From<StructError> for DeformError {
    fn from(e: StructError) -> Self {
        match e {
            StructError::NotInvertible { rank, size } => DeformError::NotInvertible { rank, size },
            StructError::NotIntegrable { k, term } => {
                DeformError::IntegrabilityBroken(format!("d phi{k}_t has the (0,2) term {term}"))
            }
            other => DeformError::Struct(other),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DeformedStructure {
    pub base: ComplexNilmanifold,
    pub point: BTreeMap<String, GaussRational>,
    pub manifold: ComplexNilmanifold,
    /// Row `g` is the new generator `g` of `2n` in the old generators.
    pub basis_change: Vec<Vector>,
    /// Row `h` is the old generator `h` in the new generators.
    pub inverse: Vec<Vector>,
}

impl DeformedStructure {
    /// Rewrites a form on the base in the deformed coframe.
    pub fn transport(&self, form: &Form<GaussRational>) -> Form<GaussRational> {
        let n = self.base.n();
        let images: Vec<Form<GaussRational>> = self
            .inverse
            .iter()
            .map(|row| {
                let mut f = Form::zero(n);
                for (g, c) in row.iter().enumerate() {
                    f.add_term(Mono::generator(g), c.clone());
                }
                f
            })
            .collect();
        form.substitute(&images)
    }
}

pub fn deformed_structure(
    m: &ComplexNilmanifold,
    psi: &VectorForm,
    point: &BTreeMap<String, GaussRational>,
) -> Result<DeformedStructure, DeformError> {
    let n = m.n();
    if psi.n() != n {
        return Err(DeformError::DimensionMismatch(psi.n(), n));
    }
    let vars = psi.variables();
    if let Some(unknown) = point.keys().find(|k| !vars.contains(*k)) {
        return Err(DeformError::UnknownParameter(unknown.clone()));
    }
    let comps = psi.evaluate(point)?;
    let at_point = VectorForm::from_components(comps.iter().map(Form::to_poly).collect());
    let residual = maurer_cartan_residual(m, &at_point)?;
    if !residual.is_zero() {
        return Err(DeformError::IntegrabilityBroken(format!("Maurer-Cartan residual {residual} at the point")));
    }
    let mut rows = vec![vec![GaussRational::zero(); 2 * n]; 2 * n];
    for i in 0..n {
        rows[i][i] = GaussRational::one();
        rows[n + i][n + i] = GaussRational::one();
        for (mono, c) in comps[i].terms() {
            let lambda = mono.generators().next().expect("1-form") - n;
            rows[i][n + lambda] = c.clone();
            rows[n + i][lambda] = c.conj();
        }
    }
    let (manifold, inverse) = m.recoframe(&rows)?;
    Ok(DeformedStructure { base: m.clone(), point: point.clone(), manifold, basis_change: rows, inverse })
}

pub const IWASAWA: &str = "dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = -phi1 ^ phi2\n";

pub fn iwasawa() -> ComplexNilmanifold {
    load(IWASAWA).expect("built-in Iwasawa equations are valid")
}

/// Nakamura's `ψ(t)` on the Iwasawa manifold.
pub fn iwasawa_psi() -> VectorForm {
    solve_maurer_cartan(&iwasawa(), None).expect("Iwasawa is unobstructed").psi
}

/// The Iwasawa deformation along `t₁₂ = t`, all other parameters zero.
pub fn ab_fiber(t: &GaussRational) -> Result<DeformedStructure, DeformError> {
    if t.is_zero() {
        return Err(DeformError::ZeroParameter);
    }
    let point = BTreeMap::from([(parameter_name(1, 2), t.clone())]);
    deformed_structure(&iwasawa(), &iwasawa_psi(), &point)
}
