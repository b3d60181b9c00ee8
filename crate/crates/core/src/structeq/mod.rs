//! Structure equations `dφ^k` of an invariant coframe, their validation into a
//! [`ComplexNilmanifold`], and coframe changes (Chevalley flag, basis changes).
//!
//! Sign convention: `dφ(X,Y) = −φ([X,Y])`, so `dφ³ = −φ¹∧φ²` encodes
//! `[θ₁,θ₂] = θ₃`.

mod parser;

pub use parser::{parse_form, parse_manifold, parse_psi, ParseError, PsiFile, MAX_DIM};

use std::collections::BTreeMap;
use std::fmt;

use crate::exterior::{generator_name, Differential, Form, Mono, PolyForm};
use crate::linalg::{self, Subspace, Vector};
use crate::scalars::{GaussRational, ParamPoly, ScalarError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum StructError {
    #[error("parse error: {0}")]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("structure equations still contain parameters: {0}")]
    ParametersPresent(String),
    #[error("D2_NONZERO: d(d {generator}) = {form} is not zero")]
    D2Nonzero { generator: String, form: String },
    #[error("NOT_INTEGRABLE: d phi{k} has the (0,2)-term {term}")]
    NotIntegrable { k: usize, term: String },
    #[error("NOT_NILPOTENT: the Chevalley flag stalls at dimension {stalled_at} of {total}")]
    NotNilpotent { stalled_at: usize, total: usize },
    #[error("NOT_PARALLELISABLE: some d phi^k has terms other than phi^i ^ phi^j")]
    NotParallelisable,
    #[error("NOT_INVERTIBLE: coframe change has rank {rank} < {size}")]
    NotInvertible { rank: usize, size: usize },
}

/// Table of `dφ^k`, `k = 1..n`, with coefficients polynomial in the parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct StructureEquations {
    n: usize,
    params: Vec<String>,
    d_table: Vec<PolyForm>,
}

impl StructureEquations {
    pub fn new(n: usize, params: Vec<String>, d_table: Vec<PolyForm>) -> Self {
        assert_eq!(d_table.len(), n);
        StructureEquations { n, params, d_table }
    }

    pub fn from_forms(forms: &[Form<GaussRational>]) -> Self {
        let n = forms.len();
        StructureEquations::new(n, Vec::new(), forms.iter().map(Form::to_poly).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn params(&self) -> &[String] {
        &self.params
    }

    pub fn d_table(&self) -> &[PolyForm] {
        &self.d_table
    }

    /// Substitutes values for every declared parameter.
    pub fn evaluate(&self, point: &BTreeMap<String, GaussRational>) -> Result<StructureEquations, ScalarError> {
        let mut table = Vec::with_capacity(self.n);
        for f in &self.d_table {
            let mut g = Form::zero(self.n);
            for (m, c) in f.terms() {
                g.add_term(*m, ParamPoly::constant(c.eval(point)?));
            }
            table.push(g);
        }
        Ok(StructureEquations::new(self.n, Vec::new(), table))
    }

    /// The table with plain coefficients, if no parameter occurs.
    pub fn constant_table(&self) -> Option<Vec<Form<GaussRational>>> {
        let mut out = Vec::with_capacity(self.n);
        for f in &self.d_table {
            let mut g = Form::zero(self.n);
            for (m, c) in f.terms() {
                g.add_term(*m, c.as_constant()?);
            }
            out.push(g);
        }
        Some(out)
    }
}

impl fmt::Display for StructureEquations {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim {}", self.n)?;
        if !self.params.is_empty() {
            writeln!(f, "params {}", self.params.join(" "))?;
        }
        for (k, d) in self.d_table.iter().enumerate() {
            writeln!(f, "d phi{} = {}", k + 1, d)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Flags {
    pub integrable: bool,
    pub d_squared_zero: bool,
    pub unimodular: bool,
    pub nilpotent: bool,
    pub parallelisable: bool,
}

/// Validated, parameter-free structure equations.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexNilmanifold {
    eqs: StructureEquations,
    d_phi: Vec<Form<GaussRational>>,
    diff: Differential,
    flags: Flags,
}

pub fn validate(eqs: &StructureEquations) -> Result<ComplexNilmanifold, StructError> {
    let Some(d_phi) = eqs.constant_table() else {
        let mut names = std::collections::BTreeSet::new();
        for f in eqs.d_table() {
            for (_, c) in f.terms() {
                names.extend(c.variables());
            }
        }
        return Err(StructError::ParametersPresent(names.into_iter().collect::<Vec<_>>().join(", ")));
    };
    let n = eqs.n();
    for (k, f) in d_phi.iter().enumerate() {
        let bad = f.bidegree_component(0, 2);
        if !bad.is_zero() {
            return Err(StructError::NotIntegrable { k: k + 1, term: bad.to_string() });
        }
    }
    let diff = Differential::new(&d_phi);
    for g in 0..2 * n {
        let dd = diff.d(&diff.d_generator(g));
        if !dd.is_zero() {
            return Err(StructError::D2Nonzero { generator: generator_name(n, g), form: dd.to_string() });
        }
    }
    let unimodular = Mono::all_of_degree(n, 2 * n - 1)
        .into_iter()
        .all(|m| diff.d_mono(m).top_coefficient().is_zero());
    let all: Vec<usize> = (0..2 * n).collect();
    let nilpotent = filtration(&diff, &all).is_ok();
    let parallelisable = d_phi.iter().all(|f| f.is_pure(2, 0));
    let flags = Flags { integrable: true, d_squared_zero: true, unimodular, nilpotent, parallelisable };
    Ok(ComplexNilmanifold { eqs: StructureEquations::from_forms(&d_phi), d_phi, diff, flags })
}

/// Parses and validates in one step.
pub fn load(text: &str) -> Result<ComplexNilmanifold, StructError> {
    let eqs = parse_manifold(text)?;
    validate(&eqs)
}

impl ComplexNilmanifold {
    pub fn n(&self) -> usize {
        self.eqs.n()
    }

    pub fn eqs(&self) -> &StructureEquations {
        &self.eqs
    }

    /// `dφ^k` for `k = 1..n` (index `k − 1`).
    pub fn d_phi(&self) -> &[Form<GaussRational>] {
        &self.d_phi
    }

    pub fn diff(&self) -> &Differential {
        &self.diff
    }

    pub fn flags(&self) -> Flags {
        self.flags
    }

    /// Rewrites the structure equations in a new coframe. Row `g` of `rows`
    /// gives the new generator `g` (of `2n`) in old-generator coordinates.
    /// The result is validated again, so a change that mixes types in a
    /// non-integrable way is rejected.
    pub fn recoframe(&self, rows: &[Vector]) -> Result<(ComplexNilmanifold, Vec<Vector>), StructError> {
        let n = self.n();
        let size = 2 * n;
        assert_eq!(rows.len(), size);
        let inverse = invert(rows)?;
        // old generator h = Σ_g inverse[h][g] · new_g
        let old_in_new: Vec<Form<GaussRational>> = (0..size)
            .map(|h| one_form(n, &inverse[h]))
            .collect();
        let mut table = Vec::with_capacity(n);
        for row in rows.iter().take(n) {
            let mut d_new = Form::zero(n);
            for (h, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    d_new = d_new.add(&self.diff.d_generator(h).scale(c));
                }
            }
            table.push(d_new.substitute(&old_in_new));
        }
        let m = validate(&StructureEquations::from_forms(&table))?;
        Ok((m, inverse))
    }

    /// Holomorphic coframe change `φ'_i = Σ a[i][j] φ^j`, with the conjugate
    /// change on `φ̄`.
    pub fn change_coframe(&self, a: &[Vector]) -> Result<ComplexNilmanifold, StructError> {
        let n = self.n();
        let mut rows = vec![vec![GaussRational::zero(); 2 * n]; 2 * n];
        for i in 0..n {
            for j in 0..n {
                rows[i][j] = a[i][j].clone();
                rows[n + i][n + j] = a[i][j].conj();
            }
        }
        Ok(self.recoframe(&rows)?.0)
    }
}

fn one_form(n: usize, coords: &[GaussRational]) -> Form<GaussRational> {
    let mut f = Form::zero(n);
    for (g, c) in coords.iter().enumerate() {
        f.add_term(Mono::generator(g), c.clone());
    }
    f
}

/// Exact inverse by row reduction of `[A | I]`.
pub fn invert(a: &[Vector]) -> Result<Vec<Vector>, StructError> {
    let size = a.len();
    let mut aug: Vec<Vector> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..size).map(|j| if i == j { GaussRational::one() } else { GaussRational::zero() }));
            r
        })
        .collect();
    let pivots = linalg::rref(&mut aug);
    let rank = pivots.iter().filter(|&&p| p < size).count();
    if rank < size {
        return Err(StructError::NotInvertible { rank, size });
    }
    Ok(aug.into_iter().map(|r| r[size..].to_vec()).collect())
}

/// Chevalley flag `V_1 ⊂ V_2 ⊂ …` on the span of the generators `gens`:
/// `V_1` is the closed 1-forms, `V_{j+1} = {α : dα ∈ Λ²V_j}`. Vectors are
/// coordinates against `gens`. Fails if the flag stalls before spanning.
fn filtration(diff: &Differential, gens: &[usize]) -> Result<Vec<Subspace>, StructError> {
    let n = diff.n();
    let k = gens.len();
    let mask = gens.iter().fold(0u32, |acc, &g| acc | (1 << g));
    let targets: Vec<Mono> = Mono::all_of_degree(n, 2).into_iter().filter(|m| m.0 & !mask == 0).collect();
    let d_cols: Vec<Vector> = gens.iter().map(|&g| diff.d_generator(g).coords(&targets)).collect();
    let mut flag: Vec<Subspace> = Vec::new();
    let mut current = Subspace::zero(k);
    loop {
        let forms: Vec<Form<GaussRational>> = current
            .basis()
            .iter()
            .map(|v| {
                let mut f = Form::zero(n);
                for (i, c) in v.iter().enumerate() {
                    f.add_term(Mono::generator(gens[i]), c.clone());
                }
                f
            })
            .collect();
        let mut wedge_cols = Vec::new();
        for a in 0..forms.len() {
            for b in a + 1..forms.len() {
                wedge_cols.push(forms[a].wedge(&forms[b]).coords(&targets));
            }
        }
        let w = Subspace::span(targets.len(), wedge_cols);
        let mut cols = d_cols.clone();
        cols.extend(w.basis().iter().map(|v| v.iter().map(|x| -x).collect()));
        let kern = linalg::kernel_of_map(&cols, targets.len());
        let next = Subspace::span(k, kern.into_iter().map(|v| v[..k].to_vec()));
        if next.dim() == current.dim() {
            if current.dim() == k {
                return Ok(flag);
            }
            return Err(StructError::NotNilpotent { stalled_at: current.dim(), total: k });
        }
        flag.push(next.clone());
        current = next;
    }
}

/// An adapted holomorphic coframe for a nilpotent complex parallelisable
/// manifold: `dφ'_μ` only involves `φ'_λ ∧ φ'_ν` with `λ, ν < μ`.
#[derive(Debug, Clone, PartialEq)]
pub struct ChevalleyFlag {
    /// Row `i` is `φ'_{i+1}` in the old coordinates.
    pub change: Vec<Vector>,
    /// Dimensions of the flag steps `V_1, V_2, …`.
    pub steps: Vec<usize>,
    /// Number of closed forms among the new coframe.
    pub r: usize,
    pub manifold: ComplexNilmanifold,
}

pub fn chevalley_flag(m: &ComplexNilmanifold) -> Result<ChevalleyFlag, StructError> {
    if !m.flags().parallelisable {
        return Err(StructError::NotParallelisable);
    }
    let n = m.n();
    let gens: Vec<usize> = (0..n).collect();
    let flag = filtration(m.diff(), &gens)?;
    let mut change: Vec<Vector> = Vec::new();
    let mut span = Subspace::zero(n);
    for step in &flag {
        for v in step.basis() {
            if !span.contains(v) {
                span = span.sum(&Subspace::span(n, [v.clone()]));
                change.push(v.clone());
            }
        }
    }
    let manifold = m.change_coframe(&change)?;
    Ok(ChevalleyFlag { change, steps: flag.iter().map(Subspace::dim).collect(), r: flag[0].dim(), manifold })
}

/// Strict triangularity: `dφ_μ` only involves `φ_λ ∧ φ_ν` with `λ, ν < μ`.
pub fn is_strictly_triangular(m: &ComplexNilmanifold) -> bool {
    m.d_phi().iter().enumerate().all(|(mu, f)| {
        f.terms().all(|(mono, _)| mono.bidegree(m.n()) == (2, 0) && mono.generators().all(|g| g < mu))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const IWASAWA: &str = "dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = -phi1 ^ phi2\n";

    #[test]
    fn iwasawa_flags() {
        let m = load(IWASAWA).unwrap();
        let f = m.flags();
        assert!(f.parallelisable && f.nilpotent && f.unimodular && f.integrable && f.d_squared_zero);
    }

    #[test]
    fn torus_flags() {
        let m = load("dim 2\nd phi1 = 0\nd phi2 = 0\n").unwrap();
        let f = m.flags();
        assert!(f.parallelisable && f.nilpotent && f.unimodular);
        let flag = chevalley_flag(&m).unwrap();
        assert_eq!(flag.r, 2);
        assert_eq!(flag.change, vec![vec![GaussRational::one(), GaussRational::zero()], vec![GaussRational::zero(), GaussRational::one()]]);
    }

    #[test]
    fn rejects_non_integrable() {
        let e = load("dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = conj(phi1) ^ conj(phi2)\n").unwrap_err();
        assert!(matches!(e, StructError::NotIntegrable { k: 3, .. }));
    }

    #[test]
    fn rejects_d_squared_nonzero() {
        let e = load("dim 4\nd phi1 = phi3 ^ phi4\nd phi2 = 0\nd phi3 = 0\nd phi4 = phi1 ^ phi2\n").unwrap_err();
        assert!(matches!(e, StructError::D2Nonzero { .. }), "{e:?}");
    }

    #[test]
    fn non_unimodular_is_a_flag() {
        // dφ2 = φ1∧φ2: solvable, not unimodular, not nilpotent.
        let m = load("dim 2\nd phi1 = 0\nd phi2 = phi1 ^ phi2\n").unwrap();
        assert!(!m.flags().unimodular);
        assert!(!m.flags().nilpotent);
        assert!(matches!(chevalley_flag(&m), Err(StructError::NotNilpotent { .. })));
    }

    #[test]
    fn chevalley_identity_on_iwasawa() {
        let m = load(IWASAWA).unwrap();
        let flag = chevalley_flag(&m).unwrap();
        assert_eq!(flag.r, 2);
        assert_eq!(flag.steps, vec![2, 3]);
        let id: Vec<Vector> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { GaussRational::one() } else { GaussRational::zero() }).collect())
            .collect();
        assert_eq!(flag.change, id);
        assert_eq!(flag.manifold, m);
    }

    #[test]
    fn chevalley_sorts_closed_forms_first() {
        // Iwasawa listed as (φ3, φ1, φ2).
        let m = load("dim 3\nd phi1 = -phi2 ^ phi3\nd phi2 = 0\nd phi3 = 0\n").unwrap();
        assert!(!is_strictly_triangular(&m));
        let flag = chevalley_flag(&m).unwrap();
        let e = |k: usize| (0..3).map(|j| if j == k { GaussRational::one() } else { GaussRational::zero() }).collect::<Vector>();
        assert_eq!(flag.change, vec![e(1), e(2), e(0)]);
        assert_eq!(flag.r, 2);
        assert!(is_strictly_triangular(&flag.manifold));
        assert_eq!(flag.manifold, load(IWASAWA).unwrap());
    }

    #[test]
    fn print_round_trip() {
        let text = "dim 3\nparams t\nd phi1 = 0\nd phi2 = 0\nd phi3 = (1/2-1/3*i) * t * phi1 ^ phi2 - conj(t) * phi2 ^ conj(phi2) + i * phi1 ^ conj(phi1)\n";
        let eqs = parse_manifold(text).unwrap();
        let printed = eqs.to_string();
        assert_eq!(parse_manifold(&printed).unwrap(), eqs);
    }

    #[test]
    fn evaluate_binds_conjugates() {
        let eqs = parse_manifold("dim 3\nparams t\nd phi1 = 0\nd phi2 = 0\nd phi3 = conj(t) * phi2 ^ conj(phi2)\n").unwrap();
        let point = BTreeMap::from([("t".to_string(), GaussRational::i())]);
        let e = eqs.evaluate(&point).unwrap();
        let c = e.d_table()[2].terms().next().unwrap().1.as_constant().unwrap();
        assert_eq!(c, -GaussRational::i());
        assert!(matches!(validate(&eqs), Err(StructError::ParametersPresent(_))));
    }
}
