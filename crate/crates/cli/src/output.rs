//! JSON and text renderings of results. Forms are written in the
//! structure-equation term syntax so they can be parsed back.

use std::fmt::Write;

use nilgeo::cohomology::{CohomologyReport, DdbarReport, Degree};
use nilgeo::deform::DeformedStructure;
use nilgeo::exterior::HermitianMatrix;
use nilgeo::frolicher::{SpectralPages, Table};
use nilgeo::kuranishi::{KodairaBasis, MaurerCartanSolution};
use nilgeo::metrics::{AuditEntry, Certificate, MetricReport, SearchOptions};
use nilgeo::report::{summary_line, FullReport};
use nilgeo::structeq::ComplexNilmanifold;
use serde_json::{json, Value};

fn matrix_json(h: &HermitianMatrix) -> Value {
    json!(h.rows_display())
}

fn flags_json(m: &ComplexNilmanifold) -> Value {
    let f = m.flags();
    json!({
        "integrable": f.integrable,
        "d_squared_zero": f.d_squared_zero,
        "unimodular": f.unimodular,
        "nilpotent": f.nilpotent,
        "parallelisable": f.parallelisable,
    })
}

pub fn validate_json(m: &ComplexNilmanifold) -> Value {
    json!({ "n": m.n(), "flags": flags_json(m), "equations": m.eqs().to_string() })
}

pub fn validate_text(m: &ComplexNilmanifold) -> String {
    let f = m.flags();
    let mut s = format!("valid structure equations, complex dimension {}\n", m.n());
    let _ = writeln!(s, "nilpotent: {}  unimodular: {}  parallelisable: {}", f.nilpotent, f.unimodular, f.parallelisable);
    s.push_str(&m.eqs().to_string());
    s
}

fn group_json(g: &nilgeo::cohomology::Group) -> Value {
    let degree = match g.degree {
        Degree::Total(k) => json!(k),
        Degree::Bi(p, q) => json!([p, q]),
    };
    json!({
        "degree": degree,
        "dim": g.dim,
        "cocycle_dim": g.cocycle_dim,
        "coboundary_dim": g.coboundary_dim,
        "representatives": g.representatives.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
    })
}

fn cohomology_one(r: &CohomologyReport) -> Value {
    let mut v = json!({
        "theory": r.theory.name(),
        "groups": r.groups.iter().map(group_json).collect::<Vec<_>>(),
    });
    match r.groups.first().map(|g| g.degree) {
        Some(Degree::Total(_)) => v["betti"] = json!(r.betti()),
        _ => v["table"] = json!(r.table()),
    }
    v
}

pub fn cohomology_json(reports: &[CohomologyReport]) -> Value {
    json!({ "cohomology": reports.iter().map(cohomology_one).collect::<Vec<_>>() })
}

fn table_text(t: &Table) -> String {
    // rows q = n..0, columns p = 0..n
    let n = t.len().saturating_sub(1);
    let mut s = String::new();
    for q in (0..=n).rev() {
        let row: Vec<String> = (0..=n).map(|p| format!("{:>3}", t[p][q])).collect();
        let _ = writeln!(s, "  q={q} {}", row.join(""));
    }
    s
}

pub fn cohomology_text(reports: &[CohomologyReport]) -> String {
    let mut s = String::new();
    for r in reports {
        match r.groups.first().map(|g| g.degree) {
            Some(Degree::Total(_)) => {
                let b: Vec<String> = r.betti().iter().map(usize::to_string).collect();
                let _ = writeln!(s, "{}: b = ({})", r.theory, b.join(", "));
            }
            _ => {
                let _ = writeln!(s, "{} (rows q, columns p):", r.theory);
                s.push_str(&table_text(&r.table()));
            }
        }
    }
    s
}

pub fn frolicher_json(p: &SpectralPages) -> Value {
    json!({
        "pages": p.pages,
        "e_infinity": p.e_infinity,
        "degeneration_page": p.degeneration_page,
        "euler": p.euler,
        "consistent": p.consistent,
        "degrees": p.degrees.iter().map(|d| json!({
            "k": d.k, "betti": d.betti, "hodge_sum": d.hodge_sum, "equal": d.equal,
        })).collect::<Vec<_>>(),
    })
}

pub fn frolicher_text(p: &SpectralPages) -> String {
    let mut s = String::new();
    for (r, t) in p.pages.iter().enumerate() {
        let _ = writeln!(s, "E{}:", r + 1);
        s.push_str(&table_text(t));
    }
    match p.degeneration_page {
        Some(r) => {
            let _ = writeln!(s, "degenerates at E{r}");
        }
        None => s.push_str("no degeneration within the computed pages\n"),
    }
    for d in &p.degrees {
        let rel = if d.equal { "=" } else { "<" };
        let _ = writeln!(s, "  b{} = {} {} {} = sum of h^(p,q)", d.k, d.betti, rel, d.hodge_sum);
    }
    s
}

pub fn ddbar_json(r: &DdbarReport) -> Value {
    json!({
        "overall": r.overall,
        "entries": r.entries.iter().map(|e| json!({
            "bidegree": [e.p, e.q],
            "closed_dim": e.closed_dim,
            "d_exact_dim": e.d_exact_dim,
            "del_exact_dim": e.del_exact_dim,
            "delbar_exact_dim": e.delbar_exact_dim,
            "ddbar_exact_dim": e.ddbar_exact_dim,
            "holds": e.holds,
        })).collect::<Vec<_>>(),
    })
}

pub fn ddbar_text(r: &DdbarReport) -> String {
    let mut s = format!("ddbar-lemma: {}\n", if r.overall { "holds" } else { "fails" });
    for e in r.entries.iter().filter(|e| !e.holds) {
        let _ = writeln!(
            s,
            "  ({},{}): d-exact {}, del-exact {}, delbar-exact {}, ddbar-exact {}",
            e.p, e.q, e.d_exact_dim, e.del_exact_dim, e.delbar_exact_dim, e.ddbar_exact_dim
        );
    }
    s
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Geometric { alpha, positive_part } => json!({
            "type": "geometric",
            "alpha": alpha.to_string(),
            "positive_part": positive_part.to_string(),
        }),
        Certificate::DualPsd { matrix, form } => json!({
            "type": "dual_psd",
            "matrix": matrix_json(matrix),
            "form": form.to_string(),
        }),
    }
}

fn metric_json(r: &MetricReport) -> Value {
    let s = &r.stats;
    json!({
        "kind": r.kind.name(),
        "verdict": r.verdict.name(),
        "verified": r.verified,
        "witness": r.witness.as_ref().map(|w| w.to_string()),
        "certificate": r.certificate.as_ref().map(certificate_json),
        "stats": {
            "condition_dim": s.condition_dim,
            "iterations": s.iterations,
            "restarts": s.restarts,
            "witness_best": s.witness_best,
            "certificate_best": s.certificate_best,
            "denominator": s.denominator,
            "faces": s.faces,
            "certificates_enabled": s.certificates_enabled,
        },
    })
}

pub fn metrics_json(reports: &[MetricReport], audit: &[AuditEntry], opts: SearchOptions) -> Value {
    json!({
        "seed": opts.seed,
        "budget": opts.budget,
        "metrics": reports.iter().map(metric_json).collect::<Vec<_>>(),
        "audit": audit.iter().map(|a| json!({ "check": a.description, "passed": a.passed })).collect::<Vec<_>>(),
    })
}

pub fn metrics_text(reports: &[MetricReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let _ = writeln!(s, "{}: {} (invariant level)", r.kind, r.verdict.name());
        if let Some(w) = &r.witness {
            let _ = writeln!(s, "  witness: {w}");
        }
        match &r.certificate {
            Some(Certificate::Geometric { alpha, positive_part }) => {
                let _ = writeln!(s, "  alpha: {alpha}\n  positive part: {positive_part}");
            }
            Some(Certificate::DualPsd { matrix, form }) => {
                let rows: Vec<String> = matrix.rows_display().iter().map(|r| format!("[{}]", r.join(", "))).collect();
                let _ = writeln!(s, "  dual matrix: {}\n  dual form: {form}", rows.join(" "));
            }
            None => {}
        }
    }
    s
}

fn solution_json(sol: &MaurerCartanSolution) -> Value {
    json!({
        "params": sol.params,
        "psi": sol.psi.to_string(),
        "pieces": sol.pieces.iter().map(|p| p.to_string()).collect::<Vec<_>>(),
        "degree": sol.degree,
        "obstruction": sol.obstruction.as_ref().map(|o| o.to_string()),
        "bianchi_ok": sol.bianchi_ok,
        "adapted_equations": sol.manifold.eqs().to_string(),
    })
}

pub fn kuranishi_json(r: usize, k: &KodairaBasis, tangent: usize, sol: &MaurerCartanSolution) -> Value {
    json!({
        "r": r,
        "h01": k.r,
        "h01_basis": k.basis.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
        "tangent_h01_dim": tangent,
        "solution": solution_json(sol),
    })
}

pub fn kuranishi_text(r: usize, k: &KodairaBasis, tangent: usize, sol: &MaurerCartanSolution) -> String {
    let basis: Vec<String> = k.basis.iter().map(|f| f.to_string()).collect();
    let mut s = format!("r = {r}\nh^(0,1) = {} spanned by {}\n", k.r, basis.join(", "));
    let _ = writeln!(s, "dim H^(0,1)(T^(1,0)) = {tangent}");
    let _ = writeln!(s, "psi = {}", sol.psi);
    match &sol.obstruction {
        Some(o) => {
            let _ = writeln!(s, "obstructed at degree {}: {o}", sol.degree + 1);
        }
        None => {
            let _ = writeln!(s, "Maurer-Cartan solved exactly at degree {}", sol.degree);
        }
    }
    s
}

fn rows_json(rows: &[Vec<nilgeo::scalars::GaussRational>]) -> Value {
    json!(rows.iter().map(|r| r.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

pub fn deform_json(d: &DeformedStructure) -> Value {
    let point: serde_json::Map<String, Value> = d.point.iter().map(|(k, v)| (k.clone(), json!(v.to_string()))).collect();
    json!({
        "point": point,
        "equations": d.manifold.eqs().to_string(),
        "basis_change": rows_json(&d.basis_change),
        "flags": flags_json(&d.manifold),
    })
}

pub fn deform_text(d: &DeformedStructure) -> String {
    d.manifold.eqs().to_string()
}

pub fn report_json(r: &FullReport) -> Value {
    let kuranishi = r.kuranishi.as_ref().map(|k| {
        let solution = match &k.solution {
            Ok(sol) => solution_json(sol),
            Err(e) => json!({ "error": e.to_string() }),
        };
        json!({
            "r": k.kodaira.r,
            "h01_basis": k.kodaira.basis.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "tangent_h01_dim": k.tangent_dim,
            "solution": solution,
        })
    });
    json!({
        "manifold": validate_json(&r.manifold),
        "cohomology": [cohomology_one(&r.derham), cohomology_one(&r.dolbeault), cohomology_one(&r.bott_chern)],
        "frolicher": frolicher_json(&r.spectral),
        "ddbar": ddbar_json(&r.ddbar),
        "metrics": metrics_json(&r.metrics.reports, &r.metrics.audit, r.options),
        "kuranishi": kuranishi,
        "summary": summary_line(r),
        "seed": r.options.seed,
        "budget": r.options.budget,
    })
}

pub fn report_text(r: &FullReport) -> String {
    let mut s = validate_text(&r.manifold);
    s.push('\n');
    s.push_str(&cohomology_text(&[r.derham.clone(), r.dolbeault.clone(), r.bott_chern.clone()]));
    s.push('\n');
    s.push_str(&frolicher_text(&r.spectral));
    s.push('\n');
    s.push_str(&ddbar_text(&r.ddbar));
    s.push('\n');
    s.push_str(&metrics_text(&r.metrics.reports));
    if let Some(k) = &r.kuranishi {
        s.push('\n');
        match &k.solution {
            Ok(sol) => s.push_str(&kuranishi_text(k.kodaira.r, &k.kodaira, k.tangent_dim, sol)),
            Err(e) => {
                let _ = writeln!(s, "r = {}\nkuranishi: {e}", k.kodaira.r);
            }
        }
    }
    let _ = writeln!(s, "\n{}", summary_line(r));
    s
}
