//! Invariant Kähler, balanced, strongly Gauduchon and Gauduchon metrics.
//!
//! Each kind is a cone-feasibility problem on a linear space of real forms
//! (the condition subspace): find one whose Hermitian probe is positive
//! definite. A floating-point search proposes candidates; a witness is only
//! reported after exact verification. When no witness is found, the dual
//! problem is searched for a nonzero positive semidefinite obstruction,
//! again verified exactly. Verdicts are at the level of invariant forms.

mod search;

use std::fmt;

use nalgebra::Complex;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::exterior::{ExteriorError, Form, HermitianMatrix, RealFrame};
use crate::linalg::{self, Subspace, Vector};
use crate::scalars::{rationalize, rational_to_f64, GaussRational, Rational};
use crate::structeq::ComplexNilmanifold;

use search::{embed, embed_complex, maximize_min_eig, near_kernel, numeric_rref, Maximum};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricsError {
    #[error("INCONSISTENT: {0}")]
    Inconsistent(String),
}

/// Metric kinds in implication order: each implies the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MetricKind {
    Kahler,
    Balanced,
    Sg,
    Gauduchon,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [MetricKind::Kahler, MetricKind::Balanced, MetricKind::Sg, MetricKind::Gauduchon];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Kahler => "kahler",
            MetricKind::Balanced => "balanced",
            MetricKind::Sg => "sg",
            MetricKind::Gauduchon => "gauduchon",
        }
    }

    /// Bidegree `(p,p)` of the forms whose probe must be positive definite.
    pub fn probe_degree(self, n: usize) -> usize {
        match self {
            MetricKind::Kahler => 1,
            _ => n.saturating_sub(1),
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for MetricKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "kahler" => Ok(MetricKind::Kahler),
            "balanced" => Ok(MetricKind::Balanced),
            "sg" => Ok(MetricKind::Sg),
            "gauduchon" => Ok(MetricKind::Gauduchon),
            other => Err(format!("unknown metric kind `{other}` (expected kahler, balanced, sg or gauduchon)")),
        }
    }
}

/// Positivity probe of a real pure-type form for the given kind.
pub fn probe(kind: MetricKind, f: &Form<GaussRational>) -> Result<HermitianMatrix, ExteriorError> {
    match kind {
        MetricKind::Kahler => f.hermitian_of_11(),
        _ => f.hermitian_of_n1n1(),
    }
}

/// The form whose probe (for `kind`) is `h`.
pub fn from_probe(kind: MetricKind, h: &HermitianMatrix) -> Form<GaussRational> {
    match kind {
        MetricKind::Kahler => Form::from_hermitian_11(h),
        _ => Form::from_hermitian_n1n1(h),
    }
}

/// Condition subspace: a rational basis of the real pure-type forms that are
/// admissible for `kind`, with their probes.
#[derive(Debug, Clone)]
pub struct ConditionSpace {
    pub kind: MetricKind,
    pub n: usize,
    frame: RealFrame,
    span: Subspace,
    /// Pure `(p,p)`-forms (the echelon basis of the subspace).
    pub forms: Vec<Form<GaussRational>>,
    /// For `sg`, a closed real `(2n−2)`-form with each basis element as its
    /// `(n−1,n−1)`-component; otherwise equal to `forms`.
    pub closed_forms: Vec<Form<GaussRational>>,
    pub probes: Vec<HermitianMatrix>,
}

impl ConditionSpace {
    pub fn dim(&self) -> usize {
        self.forms.len()
    }

    /// Exact membership of a real pure-type form.
    pub fn contains(&self, f: &Form<GaussRational>) -> bool {
        let p = self.kind.probe_degree(self.n);
        f.is_real() && f.is_pure(p, p) && self.span.contains(&self.frame.coords(f))
    }
}

/// Rational kernel of a real-linear operator between two real frames.
fn real_kernel(
    src: &RealFrame,
    tgt: &RealFrame,
    op: impl Fn(&Form<GaussRational>) -> Form<GaussRational>,
) -> Vec<Vector> {
    let cols: Vec<Vector> = src.basis().iter().map(|b| tgt.coords(&op(b))).collect();
    linalg::kernel_of_map(&cols, tgt.dim())
}

pub fn condition_subspace(m: &ComplexNilmanifold, kind: MetricKind) -> ConditionSpace {
    let n = m.n();
    let diff = m.diff();
    let p = kind.probe_degree(n);
    let frame = RealFrame::of_bidegree(n, p, p);
    let (basis, closed_forms): (Vec<Vector>, Vec<Form<GaussRational>>) = match kind {
        MetricKind::Kahler | MetricKind::Balanced => {
            let tgt = RealFrame::of_degree(n, 2 * p + 1);
            let kern = real_kernel(&frame, &tgt, |f| diff.d(f));
            let span = Subspace::span(frame.dim(), kern);
            let forms = span.basis().iter().map(|v| frame.form(v)).collect();
            (span.basis().to_vec(), forms)
        }
        MetricKind::Gauduchon => {
            let tgt = RealFrame::of_degree(n, 2 * n);
            let i = GaussRational::i();
            let kern = real_kernel(&frame, &tgt, |f| diff.del(&diff.delbar(f)).scale(&i));
            let span = Subspace::span(frame.dim(), kern);
            let forms = span.basis().iter().map(|v| frame.form(v)).collect();
            (span.basis().to_vec(), forms)
        }
        MetricKind::Sg => {
            let src = RealFrame::of_degree(n, 2 * p);
            let tgt = RealFrame::of_degree(n, 2 * p + 1);
            let closed: Vec<Form<GaussRational>> =
                real_kernel(&src, &tgt, |f| diff.d(f)).iter().map(|v| src.form(v)).collect();
            let proj: Vec<Vector> = closed.iter().map(|f| frame.coords(&f.bidegree_component(p, p))).collect();
            let span = Subspace::span(frame.dim(), proj.clone());
            let lifts = span
                .basis()
                .iter()
                .map(|b| {
                    let c = linalg::solve_map(&proj, frame.dim(), b).expect("basis vector lies in the span");
                    closed.iter().zip(&c).fold(Form::zero(n), |acc, (f, x)| acc.add(&f.scale(x)))
                })
                .collect();
            (span.basis().to_vec(), lifts)
        }
    };
    let span = Subspace::span(frame.dim(), basis.clone());
    let forms: Vec<Form<GaussRational>> = basis.iter().map(|v| frame.form(v)).collect();
    let probes = forms.iter().map(|f| probe(kind, f).expect("condition forms are real and pure")).collect();
    ConditionSpace { kind, n, frame, span, forms, closed_forms, probes }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    /// A real 1-form `α` with `(dα)^{1,1}` (balanced) or `dα` (sg) equal to the
    /// nonzero positive semidefinite (1,1)-form `positive_part`.
    Geometric { alpha: Form<GaussRational>, positive_part: Form<GaussRational> },
    /// A nonzero positive semidefinite probe matrix orthogonal to every
    /// condition form under `top(· ∧ ·)`, with its form of complementary degree.
    DualPsd { matrix: HermitianMatrix, form: Form<GaussRational> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Witness,
    Certificate,
    Undecided,
}

impl Verdict {
    pub fn name(self) -> &'static str {
        match self {
            Verdict::Witness => "witness",
            Verdict::Certificate => "certificate",
            Verdict::Undecided => "undecided",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    pub condition_dim: usize,
    pub iterations: usize,
    pub restarts: usize,
    pub witness_best: Option<f64>,
    pub certificate_best: Option<f64>,
    pub denominator: Option<u64>,
    pub faces: usize,
    pub certificates_enabled: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetricReport {
    pub kind: MetricKind,
    pub verdict: Verdict,
    pub witness: Option<Form<GaussRational>>,
    pub certificate: Option<Certificate>,
    pub verified: bool,
    pub stats: SearchStats,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    /// Total iteration budget per kind, shared by the witness and dual searches.
    pub budget: usize,
    pub seed: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { budget: 10_000, seed: 42 }
    }
}

const RESTARTS: usize = 8;
const MAX_DENOMINATOR_LOG2: u32 = 32;

/// Outcome of a positive-definite search over `Σ y_j mats_j` with `tr = 1`.
struct PdSearch {
    coeffs: Option<Vec<Rational>>,
    best: f64,
    best_y: Vec<f64>,
    iterations: usize,
    denominator: Option<u64>,
}

fn real_trace(h: &HermitianMatrix) -> Rational {
    h.trace().re
}

fn combination(mats: &[HermitianMatrix], y: &[Rational]) -> HermitianMatrix {
    let n = mats.first().map_or(0, HermitianMatrix::n);
    mats.iter()
        .zip(y)
        .filter(|(_, c)| !c.is_zero())
        .fold(HermitianMatrix::zero(n), |acc, (h, c)| acc.add(&h.scale(&GaussRational::real(c.clone()))))
}

/// Coefficients on the trace-one slice: `y_j = z_j` for `j ≠ j0`, and `y_{j0}`
/// fixed by `Σ y_j tr_j = 1`.
fn slice_coeffs(traces: &[Rational], j0: usize, z: &[Rational]) -> Vec<Rational> {
    let mut y = Vec::with_capacity(traces.len());
    let mut rest = Rational::one();
    let mut zi = z.iter();
    for (j, t) in traces.iter().enumerate() {
        if j == j0 {
            y.push(Rational::zero());
        } else {
            let v = zi.next().expect("one slice coordinate per free index").clone();
            rest -= &v * t;
            y.push(v);
        }
    }
    y[j0] = rest / &traces[j0];
    y
}

fn search_pd(mats: &[HermitianMatrix], budget: usize, rng: &mut ChaCha8Rng) -> PdSearch {
    let empty = PdSearch { coeffs: None, best: f64::NEG_INFINITY, best_y: Vec::new(), iterations: 0, denominator: None };
    if mats.is_empty() {
        return empty;
    }
    let traces: Vec<Rational> = mats.iter().map(real_trace).collect();
    let Some(j0) = (0..traces.len()).filter(|&j| !traces[j].is_zero()).max_by(|&a, &b| {
        traces[a].abs().cmp(&traces[b].abs()).then(b.cmp(&a))
    }) else {
        return empty;
    };
    let t0 = rational_to_f64(&traces[j0]);
    let emb: Vec<_> = mats.iter().map(embed).collect();
    let base = &emb[j0] / t0;
    let dirs: Vec<_> = (0..mats.len())
        .filter(|&j| j != j0)
        .map(|j| &emb[j] - &emb[j0] * (rational_to_f64(&traces[j]) / t0))
        .collect();
    let mut found: Option<(Vec<Rational>, u64)> = None;
    let mut try_rationalize = |mx: &Maximum| -> bool {
        if mx.value <= 1e-9 {
            return false;
        }
        for k in 0..=MAX_DENOMINATOR_LOG2 {
            let bound = 1u64 << k;
            let z: Vec<Rational> = mx.z.iter().map(|x| rationalize(*x, bound)).collect();
            let y = slice_coeffs(&traces, j0, &z);
            if combination(mats, &y).is_positive_definite() {
                found = Some((y, bound));
                return true;
            }
        }
        false
    };
    let best = maximize_min_eig(&base, &dirs, budget, RESTARTS, rng, &mut try_rationalize);
    let zf: Vec<f64> = best.z.clone();
    let mut best_y = Vec::with_capacity(mats.len());
    let mut rest = 1.0;
    let mut it = zf.iter();
    for (j, t) in traces.iter().enumerate() {
        if j == j0 {
            best_y.push(0.0);
        } else {
            let v = *it.next().expect("coordinate");
            rest -= v * rational_to_f64(t);
            best_y.push(v);
        }
    }
    best_y[j0] = rest / t0;
    let (coeffs, denominator) = match found {
        Some((y, d)) => (Some(y), Some(d)),
        None => (None, None),
    };
    PdSearch { coeffs, best: best.value, best_y, iterations: best.iterations, denominator }
}

/// `V* H V` for the column vectors `v`.
fn compress(h: &HermitianMatrix, v: &[Vector]) -> HermitianMatrix {
    let d = v.len();
    let n = h.n();
    let mut out = HermitianMatrix::zero(d);
    for a in 0..d {
        for b in 0..d {
            let mut acc = GaussRational::zero();
            for i in 0..n {
                if v[a][i].is_zero() {
                    continue;
                }
                let ci = v[a][i].conj();
                for j in 0..n {
                    if !v[b][j].is_zero() && !h.entries[i][j].is_zero() {
                        acc += &(&(&ci * &h.entries[i][j]) * &v[b][j]);
                    }
                }
            }
            out.entries[a][b] = acc;
        }
    }
    out
}

fn to_complex(v: &[GaussRational]) -> Vec<Complex<f64>> {
    v.iter().map(|x| Complex::new(rational_to_f64(&x.re), rational_to_f64(&x.im))).collect()
}

fn rationalize_vector(v: &[Complex<f64>], bound: u64) -> Vector {
    v.iter().map(|z| GaussRational::new(rationalize(z.re, bound), rationalize(z.im, bound))).collect()
}

struct DualSearch {
    matrix: Option<HermitianMatrix>,
    best: f64,
    faces: usize,
    iterations: usize,
}

/// Searches for a nonzero PSD matrix `Q` with `pairing(Q, H) = 0` for every
/// probe `H`. When the best trace-one point is singular, the search restricts
/// to the face of matrices vanishing on its (rationalised) kernel and repeats.
fn search_dual(n: usize, probes: &[HermitianMatrix], budget: usize, rng: &mut ChaCha8Rng) -> DualSearch {
    let coords = n * n;
    let units: Vec<HermitianMatrix> = (0..coords)
        .map(|i| {
            let mut c = vec![GaussRational::zero(); coords];
            c[i] = GaussRational::one();
            HermitianMatrix::from_real_coords(n, &c)
        })
        .collect();
    let cols: Vec<Vector> = units.iter().map(|u| probes.iter().map(|h| GaussRational::real(u.pairing(h).re)).collect()).collect();
    let mut basis: Vec<HermitianMatrix> = linalg::kernel_of_map(&cols, probes.len())
        .iter()
        .map(|c| HermitianMatrix::from_real_coords(n, c))
        .collect();
    let mut frame: Vec<Vector> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { GaussRational::one() } else { GaussRational::zero() }).collect())
        .collect();
    let mut out = DualSearch { matrix: None, best: f64::NEG_INFINITY, faces: 0, iterations: 0 };
    let mut remaining = budget;
    while !basis.is_empty() && !frame.is_empty() {
        let compressed: Vec<HermitianMatrix> = basis.iter().map(|b| compress(b, &frame)).collect();
        let level_budget = (remaining / 2).max(50);
        let s = search_pd(&compressed, level_budget, rng);
        remaining = remaining.saturating_sub(s.iterations);
        out.iterations += s.iterations;
        out.best = s.best;
        if let Some(y) = s.coeffs {
            let q = combination(&basis, &y);
            if q.is_positive_semidefinite() && !q.is_zero() {
                out.matrix = Some(q);
            }
            return out;
        }
        if s.best_y.is_empty() || s.best < -1e-6 || out.faces >= n {
            return out;
        }
        // The best point sits on the boundary: restrict to its kernel face.
        let d = frame.len();
        let mut m = nalgebra::DMatrix::<Complex<f64>>::zeros(d, d);
        for (c, yj) in compressed.iter().zip(&s.best_y) {
            for a in 0..d {
                for b in 0..d {
                    let e = &c.entries[a][b];
                    m[(a, b)] += Complex::new(rational_to_f64(&e.re), rational_to_f64(&e.im)) * *yj;
                }
            }
        }
        let kern = near_kernel(&embed_complex(&m), 1e-4);
        let frame_c: Vec<Vec<Complex<f64>>> = frame.iter().map(|v| to_complex(v)).collect();
        let lifted: Vec<Vec<Complex<f64>>> = kern
            .iter()
            .map(|w| (0..n).map(|i| (0..d).map(|a| frame_c[a][i] * w[a]).sum()).collect())
            .collect();
        let k_rows = numeric_rref(lifted, 1e-6);
        if k_rows.is_empty() || k_rows.len() >= d {
            return out;
        }
        let k_exact = Subspace::span(n, k_rows.iter().map(|r| rationalize_vector(r, 10_000)));
        // Q k = 0 for k in K, as real linear conditions on the coefficients.
        let mut eqs: Vec<Vector> = Vec::new();
        for k in k_exact.basis() {
            let images: Vec<Vector> = basis.iter().map(|b| mat_vec(b, k)).collect();
            for i in 0..n {
                eqs.push(images.iter().map(|v| GaussRational::real(v[i].re.clone())).collect());
                eqs.push(images.iter().map(|v| GaussRational::real(v[i].im.clone())).collect());
            }
        }
        basis = linalg::kernel(&eqs, basis.len()).iter().map(|c| combine_matrices(&basis, c)).collect();
        let conj_rows: Vec<Vector> = k_exact.basis().iter().map(|k| k.iter().map(GaussRational::conj).collect()).collect();
        frame = linalg::kernel(&conj_rows, n);
        out.faces += 1;
    }
    out
}

fn mat_vec(h: &HermitianMatrix, v: &[GaussRational]) -> Vector {
    h.entries.iter().map(|row| linalg::dot(row, v)).collect()
}

fn combine_matrices(basis: &[HermitianMatrix], c: &[GaussRational]) -> HermitianMatrix {
    let n = basis[0].n();
    basis.iter().zip(c).filter(|(_, x)| !x.is_zero()).fold(HermitianMatrix::zero(n), |acc, (b, x)| acc.add(&b.scale(x)))
}

/// Positive rescaling that clears denominators and common factors.
fn normalize_positive(f: &Form<GaussRational>) -> Form<GaussRational> {
    let mut lcm = BigInt::one();
    let mut gcd = BigInt::zero();
    for (_, c) in f.terms() {
        for r in [&c.re, &c.im] {
            if !r.is_zero() {
                lcm = lcm.lcm(r.denom());
                gcd = gcd.gcd(r.numer());
            }
        }
    }
    if gcd.is_zero() {
        return f.clone();
    }
    let factor = Rational::new(lcm.clone(), BigInt::one());
    let scaled = f.scale(&GaussRational::real(factor));
    let mut g = BigInt::zero();
    for (_, c) in scaled.terms() {
        for r in [&c.re, &c.im] {
            if !r.is_zero() {
                g = g.gcd(r.numer());
            }
        }
    }
    scaled.scale(&GaussRational::real(Rational::new(BigInt::one(), g)))
}

/// Real 1-form `α` with `(dα)^{1,1} = t` (balanced) or `dα = t` (sg).
fn solve_alpha(m: &ComplexNilmanifold, kind: MetricKind, t: &Form<GaussRational>) -> Option<Form<GaussRational>> {
    let n = m.n();
    let src = RealFrame::of_degree(n, 1);
    let tgt = match kind {
        MetricKind::Balanced => RealFrame::of_bidegree(n, 1, 1),
        MetricKind::Sg => RealFrame::of_degree(n, 2),
        _ => return None,
    };
    let op = |f: &Form<GaussRational>| {
        let d = m.diff().d(f);
        if kind == MetricKind::Balanced {
            d.bidegree_component(1, 1)
        } else {
            d
        }
    };
    let cols: Vec<Vector> = src.basis().iter().map(|b| tgt.coords(&op(b))).collect();
    let x = linalg::solve_map(&cols, tgt.dim(), &tgt.coords(t))?;
    let alpha = src.form(&x);
    (op(&alpha) == *t).then_some(alpha)
}

fn rng_for(seed: u64, kind: MetricKind) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(4).wrapping_add(kind as u64))
}

pub fn find_witness(m: &ComplexNilmanifold, kind: MetricKind, opts: SearchOptions) -> MetricReport {
    let space = condition_subspace(m, kind);
    let mut rng = rng_for(opts.seed, kind);
    let certificates_enabled = m.flags().unimodular;
    let mut stats = SearchStats {
        condition_dim: space.dim(),
        iterations: 0,
        restarts: RESTARTS,
        witness_best: None,
        certificate_best: None,
        denominator: None,
        faces: 0,
        certificates_enabled,
    };
    let witness_budget = if certificates_enabled { opts.budget / 2 } else { opts.budget };
    let s = search_pd(&space.probes, witness_budget, &mut rng);
    stats.iterations += s.iterations;
    stats.witness_best = s.best.is_finite().then_some(s.best);
    stats.denominator = s.denominator;
    if let Some(y) = s.coeffs {
        let w = space
            .closed_forms
            .iter()
            .zip(&y)
            .fold(Form::zero(m.n()), |acc, (f, c)| acc.add(&f.scale(&GaussRational::real(c.clone()))));
        let w = normalize_positive(&w);
        if verify_witness(m, kind, &w) {
            return MetricReport { kind, verdict: Verdict::Witness, witness: Some(w), certificate: None, verified: true, stats };
        }
    }
    if certificates_enabled {
        let budget = opts.budget.saturating_sub(stats.iterations);
        let dual = search_dual(m.n(), &space.probes, budget, &mut rng);
        stats.iterations += dual.iterations;
        stats.faces = dual.faces;
        stats.certificate_best = dual.best.is_finite().then_some(dual.best);
        if let Some(q) = dual.matrix {
            let cert = certificate_from_dual(m, kind, q);
            if verify_certificate(m, kind, &cert) {
                return MetricReport {
                    kind,
                    verdict: Verdict::Certificate,
                    witness: None,
                    certificate: Some(cert),
                    verified: true,
                    stats,
                };
            }
        }
    }
    MetricReport { kind, verdict: Verdict::Undecided, witness: None, certificate: None, verified: false, stats }
}

fn certificate_from_dual(m: &ComplexNilmanifold, kind: MetricKind, q: HermitianMatrix) -> Certificate {
    let dual_kind = if kind == MetricKind::Kahler { MetricKind::Balanced } else { MetricKind::Kahler };
    let form = from_probe(dual_kind, &q);
    if matches!(kind, MetricKind::Balanced | MetricKind::Sg) {
        if let Some(alpha) = solve_alpha(m, kind, &form) {
            return Certificate::Geometric { alpha, positive_part: form };
        }
    }
    Certificate::DualPsd { matrix: q, form }
}

pub fn verify_witness(m: &ComplexNilmanifold, kind: MetricKind, w: &Form<GaussRational>) -> bool {
    let n = m.n();
    let p = kind.probe_degree(n);
    if !w.is_real() {
        return false;
    }
    let diff = m.diff();
    let part = w.bidegree_component(p, p);
    let pd = match probe(kind, &part) {
        Ok(h) => h.is_positive_definite(),
        Err(_) => false,
    };
    if !pd {
        return false;
    }
    match kind {
        MetricKind::Kahler | MetricKind::Balanced => w.is_pure(p, p) && diff.d(w).is_zero(),
        MetricKind::Gauduchon => w.is_pure(p, p) && diff.del(&diff.delbar(w)).is_zero(),
        MetricKind::Sg => {
            if !w.terms().all(|(mo, _)| mo.degree() == 2 * p) {
                return false;
            }
            if w.is_pure(p, p) && !diff.d(w).is_zero() {
                condition_subspace(m, kind).contains(w)
            } else {
                diff.d(w).is_zero()
            }
        }
    }
}

fn is_psd_nonzero_11(t: &Form<GaussRational>) -> bool {
    match t.hermitian_of_11() {
        Ok(h) => !h.is_zero() && h.is_positive_semidefinite(),
        Err(_) => false,
    }
}

pub fn verify_certificate(m: &ComplexNilmanifold, kind: MetricKind, cert: &Certificate) -> bool {
    if !m.flags().unimodular {
        return false;
    }
    match cert {
        Certificate::Geometric { alpha, positive_part } => {
            if !alpha.is_real() || !alpha.terms().all(|(mo, _)| mo.degree() == 1) {
                return false;
            }
            if !is_psd_nonzero_11(positive_part) {
                return false;
            }
            let da = m.diff().d(alpha);
            match kind {
                MetricKind::Balanced => da.bidegree_component(1, 1) == *positive_part,
                MetricKind::Sg => {
                    da.bidegree_component(2, 0).is_zero()
                        && da.bidegree_component(0, 2).is_zero()
                        && da.bidegree_component(1, 1) == *positive_part
                }
                _ => false,
            }
        }
        Certificate::DualPsd { matrix, form } => {
            let dual_kind = if kind == MetricKind::Kahler { MetricKind::Balanced } else { MetricKind::Kahler };
            if matrix.n() != m.n() || !matrix.is_positive_semidefinite() || matrix.is_zero() {
                return false;
            }
            if from_probe(dual_kind, matrix) != *form {
                return false;
            }
            condition_subspace(m, kind).probes.iter().all(|h| matrix.pairing(h).is_zero())
        }
    }
}

/// The two evaluations of `⟨T, w⟩` behind the witness/certificate exclusion:
/// `stokes` vanishes whenever `w` is a verified witness and the certificate is
/// verified (Stokes or orthogonality), `positive` is `> 0` whenever the probe
/// of `w` is positive definite and `T` is nonzero PSD. They agree as numbers.
#[derive(Debug, Clone, PartialEq)]
pub struct Exclusion {
    pub stokes: GaussRational,
    pub positive: GaussRational,
}

impl Exclusion {
    /// True if the pair would prove `0 > 0`: this must never happen for two
    /// verified objects.
    pub fn fires(&self) -> bool {
        self.stokes.is_zero() && self.positive.im.is_zero() && self.positive.re.is_positive()
    }
}

pub fn exclusion_pairing(
    m: &ComplexNilmanifold,
    kind: MetricKind,
    w: &Form<GaussRational>,
    cert: &Certificate,
) -> Exclusion {
    let n = m.n();
    let p = kind.probe_degree(n);
    let part = w.bidegree_component(p, p);
    match cert {
        Certificate::Geometric { alpha, positive_part } => {
            let diff = m.diff();
            // dα∧w = d(α∧w) + α∧dw
            let stokes = diff.d(&alpha.wedge(w)).add(&alpha.wedge(&diff.d(w))).top_coefficient();
            let positive = positive_part.wedge(&part).top_coefficient();
            Exclusion { stokes, positive }
        }
        Certificate::DualPsd { matrix, form } => {
            let stokes = match probe(kind, &part) {
                Ok(h) => matrix.pairing(&h),
                Err(_) => GaussRational::zero(),
            };
            let positive = form.wedge(&part).top_coefficient();
            Exclusion { stokes, positive }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AuditEntry {
    pub description: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Classification {
    pub reports: Vec<MetricReport>,
    pub audit: Vec<AuditEntry>,
}

impl Classification {
    pub fn report(&self, kind: MetricKind) -> &MetricReport {
        self.reports.iter().find(|r| r.kind == kind).expect("all kinds classified")
    }
}

pub fn classify(m: &ComplexNilmanifold, opts: SearchOptions) -> Result<Classification, MetricsError> {
    let n = m.n();
    let reports: Vec<MetricReport> = MetricKind::ALL.iter().map(|&k| find_witness(m, k, opts)).collect();
    let mut audit = Vec::new();
    let get = |k: MetricKind| reports.iter().find(|r| r.kind == k).expect("all kinds");
    if let Some(w) = &get(MetricKind::Kahler).witness {
        let power = w.wedge_power(n.saturating_sub(1));
        audit.push(AuditEntry {
            description: "kahler witness to the power n-1 is a balanced witness".into(),
            passed: verify_witness(m, MetricKind::Balanced, &power),
        });
    }
    if let Some(w) = &get(MetricKind::Balanced).witness {
        audit.push(AuditEntry {
            description: "balanced witness is an sg witness".into(),
            passed: verify_witness(m, MetricKind::Sg, w),
        });
    }
    if let Some(w) = &get(MetricKind::Sg).witness {
        let p = n.saturating_sub(1);
        audit.push(AuditEntry {
            description: "(n-1,n-1)-part of the sg witness is a gauduchon witness".into(),
            passed: verify_witness(m, MetricKind::Gauduchon, &w.bidegree_component(p, p)),
        });
    }
    for (i, a) in MetricKind::ALL.iter().enumerate() {
        for b in &MetricKind::ALL[i..] {
            let ok = !(get(*a).verdict == Verdict::Witness && get(*b).verdict == Verdict::Certificate);
            if !ok {
                audit.push(AuditEntry {
                    description: format!("{a} witness against {b} certificate"),
                    passed: false,
                });
            }
        }
    }
    if let Some(bad) = audit.iter().find(|e| !e.passed) {
        return Err(MetricsError::Inconsistent(bad.description.clone()));
    }
    Ok(Classification { reports, audit })
}
