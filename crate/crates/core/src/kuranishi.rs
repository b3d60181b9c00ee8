//! Kuranishi deformations of nilpotent complex parallelisable structures at
//! the level of invariant forms: Kodaira's `h^{0,1} = r`, the basis
//! `θ_i ⊗ φ̄_λ` of `H^{0,1}(T^{1,0})`, the bracket on vector forms, and a
//! degree-by-degree polynomial solver for `∂̄ψ = ½[ψ,ψ]`.
//!
//! All computations run in the adapted coframe of the Chevalley flag, in
//! which the first `r` forms are closed. For input that is already adapted
//! (such as the Iwasawa manifold) this coframe is the given one.

use std::collections::BTreeMap;
use std::fmt;

use crate::exterior::{Form, Mono, PolyForm};
use crate::linalg::{self, Vector};
use crate::scalars::{Coeff, GaussRational, ParamPoly, PolyMonomial, ScalarError};
use crate::structeq::{chevalley_flag, ComplexNilmanifold, PsiFile, StructError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum KuranishiError {
    #[error(transparent)]
    Struct(#[from] StructError),
    #[error("DEGREE_EXCEEDED: Maurer-Cartan residual still nonzero at degree {0}")]
    DegreeExceeded(usize),
    #[error("dimension mismatch: vector form for n = {0}, manifold has n = {1}")]
    DimensionMismatch(usize, usize),
}

/// `Σ_i ψ^i ⊗ θ_i` with each `ψ^i` an invariant (0,q)-form.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorForm {
    n: usize,
    components: Vec<PolyForm>,
}

impl VectorForm {
    pub fn zero(n: usize) -> Self {
        VectorForm { n, components: vec![Form::zero(n); n] }
    }

    pub fn from_components(components: Vec<PolyForm>) -> Self {
        VectorForm { n: components.len(), components }
    }

    /// `c · θ_i ⊗ φ̄_λ` (1-based `i`, `λ`).
    pub fn basis_element(n: usize, i: usize, lambda: usize, c: ParamPoly) -> Self {
        let mut v = VectorForm::zero(n);
        v.components[i - 1] = Form::phibar(n, lambda).scale(&c);
        v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[PolyForm] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(Form::is_zero)
    }

    pub fn add(&self, other: &VectorForm) -> VectorForm {
        VectorForm { n: self.n, components: self.components.iter().zip(&other.components).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, other: &VectorForm) -> VectorForm {
        self.add(&other.scale(&GaussRational::int(-1)))
    }

    pub fn scale(&self, c: &GaussRational) -> VectorForm {
        VectorForm { n: self.n, components: self.components.iter().map(|f| f.scale_gauss(c)).collect() }
    }

    /// Variables occurring in any coefficient.
    pub fn variables(&self) -> std::collections::BTreeSet<String> {
        self.components.iter().flat_map(|f| f.terms().flat_map(|(_, c)| c.variables())).collect()
    }

    /// The part of polynomial degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> VectorForm {
        VectorForm {
            n: self.n,
            components: self
                .components
                .iter()
                .map(|f| {
                    let mut g = Form::zero(self.n);
                    for (m, c) in f.terms() {
                        g.add_term(*m, c.homogeneous_part(d));
                    }
                    g
                })
                .collect(),
        }
    }

    pub fn max_degree(&self) -> u32 {
        self.components.iter().flat_map(|f| f.terms().map(|(_, c)| c.total_degree())).max().unwrap_or(0)
    }

    /// Text in the `.psi` file format.
    pub fn to_file_text(&self, params: &[String]) -> String {
        let mut s = format!("dim {}\n", self.n);
        if !params.is_empty() {
            s.push_str(&format!("params {}\n", params.join(" ")));
        }
        s.push_str(&format!("psi = {self}\n"));
        s
    }

    /// Substitutes parameter values; missing parameters count as zero.
    pub fn evaluate(&self, point: &BTreeMap<String, GaussRational>) -> Result<Vec<Form<GaussRational>>, ScalarError> {
        let mut full = point.clone();
        for v in self.variables() {
            full.entry(v).or_insert_with(GaussRational::zero);
        }
        self.components
            .iter()
            .map(|f| {
                let mut g = Form::zero(self.n);
                for (m, c) in f.terms() {
                    g.add_term(*m, c.eval(&full)?);
                }
                Ok(g)
            })
            .collect()
    }
}

impl From<PsiFile> for VectorForm {
    fn from(file: PsiFile) -> Self {
        VectorForm::from_components(file.components)
    }
}

impl fmt::Display for VectorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, comp) in self.components.iter().enumerate() {
            for (m, c) in comp.terms() {
                for (neg, body) in c.signed_factors() {
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    first = false;
                    if !body.is_empty() {
                        write!(f, "{body} * ")?;
                    }
                    write!(f, "theta{} (x) {}", i + 1, m.display(self.n))?;
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// Bracket of frame vector fields: `[θ_i, θ_k] = −Σ_m c^m_{ik} θ_m` for
/// `dφ^m = Σ_{i<k} c^m_{ik} φ^i ∧ φ^k` (0-based), as coefficients on `θ_m`.
fn frame_bracket(m: &ComplexNilmanifold, i: usize, k: usize) -> Vec<GaussRational> {
    let n = m.n();
    if i == k {
        return vec![GaussRational::zero(); n];
    }
    let (a, b, sign) = if i < k { (i, k, -GaussRational::one()) } else { (k, i, GaussRational::one()) };
    let mono = Mono((1 << a) | (1 << b));
    m.d_phi().iter().map(|f| &f.coeff(mono) * &sign).collect()
}

fn require_parallelisable(m: &ComplexNilmanifold) -> Result<(), StructError> {
    if !m.flags().parallelisable {
        return Err(StructError::NotParallelisable);
    }
    Ok(())
}

/// `[ψ, τ] = Σ_{i,k} (ψ^i ∧ τ^k) ⊗ [θ_i, θ_k]`.
pub fn kuranishi_bracket(m: &ComplexNilmanifold, psi: &VectorForm, tau: &VectorForm) -> VectorForm {
    let n = m.n();
    let mut out = VectorForm::zero(n);
    for (i, a) in psi.components.iter().enumerate() {
        if a.is_zero() {
            continue;
        }
        for (k, b) in tau.components.iter().enumerate() {
            if b.is_zero() || i == k {
                continue;
            }
            let br = frame_bracket(m, i, k);
            if br.iter().all(GaussRational::is_zero) {
                continue;
            }
            let w = a.wedge(b);
            for (mm, c) in br.iter().enumerate() {
                if !c.is_zero() {
                    out.components[mm] = out.components[mm].add(&w.scale_gauss(c));
                }
            }
        }
    }
    out
}

/// Componentwise `∂̄`; the frame `θ_i` is holomorphic on a parallelisable manifold.
pub fn delbar_vector(m: &ComplexNilmanifold, psi: &VectorForm) -> Result<VectorForm, StructError> {
    require_parallelisable(m)?;
    Ok(VectorForm { n: psi.n, components: psi.components.iter().map(|f| m.diff().delbar(f)).collect() })
}

/// `∂̄ψ − ½[ψ,ψ]`.
pub fn maurer_cartan_residual(m: &ComplexNilmanifold, psi: &VectorForm) -> Result<VectorForm, StructError> {
    let half = GaussRational::real(crate::scalars::rat(1, 2));
    Ok(delbar_vector(m, psi)?.sub(&kuranishi_bracket(m, psi, psi).scale(&half)))
}

pub fn verify_integrability(m: &ComplexNilmanifold, psi: &VectorForm) -> bool {
    psi.n == m.n() && maurer_cartan_residual(m, psi).is_ok_and(|r| r.is_zero())
}

pub fn count_closed_oneforms(m: &ComplexNilmanifold) -> Result<usize, StructError> {
    require_parallelisable(m)?;
    let n = m.n();
    let hol: Vec<Mono> = (0..n).map(Mono::generator).collect();
    let cols = m.diff().matrix(|f| m.diff().d(f), &hol, &Mono::all_of_degree(n, 2));
    Ok(linalg::kernel_of_map(&cols, Mono::all_of_degree(n, 2).len()).len())
}

#[derive(Debug, Clone, PartialEq)]
pub struct KodairaBasis {
    pub r: usize,
    /// `φ̄'_1..φ̄'_r` of the adapted coframe, written in the input coframe.
    pub basis: Vec<Form<GaussRational>>,
}

pub fn kodaira_h01(m: &ComplexNilmanifold) -> Result<KodairaBasis, StructError> {
    let flag = chevalley_flag(m)?;
    let n = m.n();
    let basis = flag.change[..flag.r]
        .iter()
        .map(|row| {
            let mut f = Form::zero(n);
            for (j, c) in row.iter().enumerate() {
                f.add_term(Mono::generator(n + j), c.conj());
            }
            f
        })
        .collect();
    Ok(KodairaBasis { r: flag.r, basis })
}

/// The `n·r` vector forms `θ_i ⊗ φ̄_λ`, `λ ≤ r`, in the adapted coframe.
pub fn tangent_h01_basis(m: &ComplexNilmanifold) -> Result<Vec<VectorForm>, StructError> {
    let flag = chevalley_flag(m)?;
    let n = m.n();
    let mut out = Vec::new();
    for i in 1..=n {
        for lambda in 1..=flag.r {
            out.push(VectorForm::basis_element(n, i, lambda, ParamPoly::one()));
        }
    }
    Ok(out)
}

/// Parameter name for the coefficient of `θ_i ⊗ φ̄_λ` in `ψ₁`.
pub fn parameter_name(i: usize, lambda: usize) -> String {
    format!("t{i}{lambda}")
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaurerCartanSolution {
    /// The adapted coframe manifold `ψ` refers to.
    pub manifold: ComplexNilmanifold,
    pub params: Vec<String>,
    pub psi: VectorForm,
    /// Homogeneous pieces `ψ_1, ψ_2, …`.
    pub pieces: Vec<VectorForm>,
    pub degree: usize,
    /// Degree-`ν` right-hand side component outside the image of `∂̄`.
    pub obstruction: Option<VectorForm>,
    /// `∂̄` of every right-hand side vanished.
    pub bianchi_ok: bool,
}

/// Coefficient vectors per polynomial monomial of a vector (0,q)-form,
/// against the (component, monomial) basis.
fn split_by_monomial(v: &VectorForm, monos: &[Mono]) -> BTreeMap<PolyMonomial, Vector> {
    let n = v.n;
    let mut out: BTreeMap<PolyMonomial, Vector> = BTreeMap::new();
    for (i, f) in v.components.iter().enumerate() {
        for (m, c) in f.terms() {
            let idx = monos.iter().position(|x| x == m).expect("pure (0,q) monomial");
            for (pm, coef) in c.terms() {
                out.entry(pm.clone()).or_insert_with(|| vec![GaussRational::zero(); n * monos.len()])[i * monos.len() + idx] = coef.clone();
            }
        }
    }
    out
}

fn assemble(n: usize, monos: &[Mono], parts: &BTreeMap<PolyMonomial, Vector>) -> VectorForm {
    let mut v = VectorForm::zero(n);
    for (pm, vec) in parts {
        for (idx, c) in vec.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (i, j) = (idx / monos.len(), idx % monos.len());
            v.components[i].add_term(monos[j], ParamPoly::monomial(pm.clone(), c.clone()));
        }
    }
    v
}

/// Rows of `L*`, one per source coordinate.
fn adjoint_rows(cols: &[Vector]) -> Vec<Vector> {
    cols.iter().map(|c| c.iter().map(GaussRational::conj).collect()).collect()
}

/// Solves `∂̄ψ = ½[ψ,ψ]` degree by degree from `ψ₁ = Σ t_{iλ} θ_i ⊗ φ̄_λ`.
/// Returns an obstruction instead of a solution when some right-hand side is
/// not `∂̄`-exact; fails with `DegreeExceeded` if the residual survives to
/// `max_degree` (default `2n`).
pub fn solve_maurer_cartan(m: &ComplexNilmanifold, max_degree: Option<usize>) -> Result<MaurerCartanSolution, KuranishiError> {
    if !m.flags().nilpotent {
        return Err(StructError::NotNilpotent { stalled_at: 0, total: m.n() }.into());
    }
    let flag = chevalley_flag(m)?;
    let am = flag.manifold;
    let n = am.n();
    let max_degree = max_degree.unwrap_or(2 * n).max(1);
    let mut params = Vec::new();
    let mut psi1 = VectorForm::zero(n);
    for i in 1..=n {
        for lambda in 1..=flag.r {
            let name = parameter_name(i, lambda);
            psi1 = psi1.add(&VectorForm::basis_element(n, i, lambda, ParamPoly::var(&name)));
            params.push(name);
        }
    }
    let src = Mono::all_of_bidegree(n, 0, 1);
    let tgt = Mono::all_of_bidegree(n, 0, 2);
    // ∂̄ on vector (0,1)-forms, columns indexed by (component, monomial)
    let mut cols: Vec<Vector> = Vec::new();
    for i in 0..n {
        for s in &src {
            let mut e = VectorForm::zero(n);
            e.components[i] = Form::monomial(n, *s, ParamPoly::one());
            let img = delbar_vector(&am, &e)?;
            let parts = split_by_monomial(&img, &tgt);
            cols.push(parts.get(&PolyMonomial::one()).cloned().unwrap_or_else(|| vec![GaussRational::zero(); n * tgt.len()]));
        }
    }
    let rows = n * tgt.len();
    let adjoint = adjoint_rows(&cols);
    let gram: Vec<Vector> = (0..rows)
        .map(|r| {
            let mut e = vec![GaussRational::zero(); rows];
            e[r] = GaussRational::one();
            let lstar_e: Vector = adjoint.iter().map(|row| linalg::dot(row, &e)).collect();
            linalg::combine(&cols, &lstar_e, rows)
        })
        .collect();

    let half = GaussRational::real(crate::scalars::rat(1, 2));
    let mut pieces = vec![psi1.clone()];
    let mut psi = psi1;
    let mut bianchi_ok = true;
    let mut degree = 1;
    loop {
        if maurer_cartan_residual(&am, &psi)?.is_zero() {
            break;
        }
        if degree >= max_degree {
            return Err(KuranishiError::DegreeExceeded(degree));
        }
        let nu = degree + 1;
        let mut rhs = VectorForm::zero(n);
        for mu in 1..nu {
            rhs = rhs.add(&kuranishi_bracket(&am, &pieces[mu - 1], &pieces[nu - mu - 1]));
        }
        let rhs = rhs.scale(&half);
        bianchi_ok &= delbar_vector(&am, &rhs)?.is_zero();
        let parts = split_by_monomial(&rhs, &tgt);
        let mut sol: BTreeMap<PolyMonomial, Vector> = BTreeMap::new();
        let mut obstruction: BTreeMap<PolyMonomial, Vector> = BTreeMap::new();
        for (pm, v) in &parts {
            match linalg::solve_map(&gram, rows, v) {
                Some(y) => {
                    let u: Vector = adjoint.iter().map(|row| linalg::dot(row, &y)).collect();
                    sol.insert(pm.clone(), u);
                }
                None => {
                    obstruction.insert(pm.clone(), v.clone());
                }
            }
        }
        if !obstruction.is_empty() {
            return Ok(MaurerCartanSolution {
                manifold: am,
                params,
                psi,
                pieces,
                degree,
                obstruction: Some(assemble(n, &tgt, &obstruction)),
                bianchi_ok,
            });
        }
        let piece = assemble(n, &src, &sol);
        psi = psi.add(&piece);
        pieces.push(piece);
        degree = nu;
    }
    while pieces.last().is_some_and(VectorForm::is_zero) && pieces.len() > 1 {
        pieces.pop();
    }
    let degree = pieces.len();
    Ok(MaurerCartanSolution { manifold: am, params, psi, pieces, degree, obstruction: None, bianchi_ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structeq::load;

    fn iwasawa() -> ComplexNilmanifold {
        load("dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = -phi1 ^ phi2\n").unwrap()
    }

    fn t(i: usize, l: usize) -> ParamPoly {
        ParamPoly::var(&parameter_name(i, l))
    }

    fn d_of_t() -> ParamPoly {
        t(1, 1).mul(&t(2, 2)).sub(&t(1, 2).mul(&t(2, 1)))
    }

    #[test]
    fn iwasawa_counts() {
        let m = iwasawa();
        assert_eq!(count_closed_oneforms(&m).unwrap(), 2);
        let k = kodaira_h01(&m).unwrap();
        assert_eq!(k.r, 2);
        assert_eq!(k.basis, vec![Form::phibar(3, 1), Form::phibar(3, 2)]);
        assert_eq!(tangent_h01_basis(&m).unwrap().len(), 6);
    }

    #[test]
    fn bracket_of_psi1() {
        let m = iwasawa();
        let mut psi1 = VectorForm::zero(3);
        for i in 1..=3 {
            for l in 1..=2 {
                psi1 = psi1.add(&VectorForm::basis_element(3, i, l, t(i, l)));
            }
        }
        let half = kuranishi_bracket(&m, &psi1, &psi1).scale(&GaussRational::real(crate::scalars::rat(1, 2)));
        let mut expected = VectorForm::zero(3);
        expected.components[2] = Form::phibar(3, 1).wedge(&Form::phibar(3, 2)).scale(&d_of_t());
        assert_eq!(half, expected);
        assert!(delbar_vector(&m, &psi1).unwrap().is_zero());
        assert!(!verify_integrability(&m, &psi1));
        let theta3 = VectorForm::basis_element(3, 3, 3, ParamPoly::one());
        for i in 1..=3 {
            for l in 1..=3 {
                assert!(kuranishi_bracket(&m, &theta3, &VectorForm::basis_element(3, i, l, ParamPoly::one())).is_zero());
            }
        }
    }

    #[test]
    fn nakamura_solution() {
        let m = iwasawa();
        let sol = solve_maurer_cartan(&m, None).unwrap();
        assert!(sol.obstruction.is_none());
        assert_eq!(sol.degree, 2);
        let psi2 = VectorForm::basis_element(3, 3, 3, d_of_t().neg());
        assert_eq!(sol.pieces[1], psi2);
        assert!(verify_integrability(&m, &sol.psi));
        assert!(sol.bianchi_ok);
        assert_eq!(sol.params.len(), 6);
    }

    #[test]
    fn psi_text_round_trip() {
        let sol = solve_maurer_cartan(&iwasawa(), None).unwrap();
        let psi = sol.psi;
        let text = psi.to_file_text(&sol.params);
        let parsed: VectorForm = crate::structeq::parse_psi(&text).unwrap().into();
        assert_eq!(parsed, psi);
    }

    #[test]
    fn torus_solution_is_linear() {
        let m = load("dim 2\nd phi1 = 0\nd phi2 = 0\n").unwrap();
        let sol = solve_maurer_cartan(&m, None).unwrap();
        assert_eq!(sol.degree, 1);
        assert_eq!(sol.params.len(), 4);
        assert!(verify_integrability(&m, &VectorForm::zero(2)));
    }
}
