//! Built-in examples and the full pipeline report.

use crate::cohomology::{self, CohomologyReport, DdbarReport};
use crate::deform::{self, DeformError, IWASAWA};
use crate::frolicher::{self, SpectralPages};
use crate::kuranishi::{self, KodairaBasis, KuranishiError, MaurerCartanSolution};
use crate::metrics::{self, Classification, MetricKind, MetricsError, SearchOptions, Verdict};
use crate::scalars::GaussRational;
use crate::structeq::{ComplexNilmanifold, StructError};

pub const BUILTINS: [&str; 4] = ["iwasawa", "torus2", "torus3", "iwasawa_ab(t)"];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ReportError {
    #[error("unknown builtin `{name}`; available: {}", BUILTINS.join(", "))]
    UnknownBuiltin { name: String },
    #[error("invalid parameter `{0}` for iwasawa_ab")]
    BadParameter(String),
    #[error("[structeq] {0}")]
    Struct(#[from] StructError),
    #[error("[deform] {0}")]
    Deform(#[from] DeformError),
    #[error("[metrics] {0}")]
    Metrics(#[from] MetricsError),
    #[error("[report] internal inconsistency: {0}")]
    Inconsistent(String),
}

impl ReportError {
    /// Errors that indicate a bug rather than bad input.
    pub fn is_internal(&self) -> bool {
        matches!(
            self,
            ReportError::Inconsistent(_)
                | ReportError::Metrics(MetricsError::Inconsistent(_))
                | ReportError::Deform(DeformError::IntegrabilityBroken(_))
        )
    }
}

fn torus(n: usize) -> String {
    let mut s = format!("dim {n}\n");
    for k in 1..=n {
        s.push_str(&format!("d phi{k} = 0\n"));
    }
    s
}

fn ab_parameter(name: &str) -> Option<&str> {
    name.strip_prefix("iwasawa_ab(").and_then(|r| r.strip_suffix(')')).or_else(|| name.strip_prefix("iwasawa_ab:"))
}

/// Structure-equation text of a built-in manifold.
pub fn builtin(name: &str) -> Result<String, ReportError> {
    match name {
        "iwasawa" => Ok(IWASAWA.to_string()),
        "torus2" => Ok(torus(2)),
        "torus3" => Ok(torus(3)),
        _ => {
            let Some(arg) = ab_parameter(name) else {
                return Err(ReportError::UnknownBuiltin { name: name.to_string() });
            };
            let t: GaussRational = arg.trim().parse().map_err(|_| ReportError::BadParameter(arg.to_string()))?;
            Ok(deform::ab_fiber(&t)?.manifold.eqs().to_string())
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct KuranishiSummary {
    pub kodaira: KodairaBasis,
    pub tangent_dim: usize,
    pub solution: Result<MaurerCartanSolution, KuranishiError>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FullReport {
    pub manifold: ComplexNilmanifold,
    pub derham: CohomologyReport,
    pub dolbeault: CohomologyReport,
    pub bott_chern: CohomologyReport,
    pub spectral: SpectralPages,
    pub ddbar: DdbarReport,
    pub metrics: Classification,
    pub kuranishi: Option<KuranishiSummary>,
    pub options: SearchOptions,
    pub version: &'static str,
}

pub fn run_report(m: &ComplexNilmanifold, options: SearchOptions) -> Result<FullReport, ReportError> {
    let derham = cohomology::derham(m);
    let dolbeault = cohomology::dolbeault(m);
    let bott_chern = cohomology::bott_chern(m);
    let spectral = frolicher::pages(m, None);
    if !spectral.consistent {
        return Err(ReportError::Inconsistent("spectral pages fail the Euler, monotonicity or limit checks".into()));
    }
    if spectral.pages[0] != dolbeault.table() {
        return Err(ReportError::Inconsistent("E1 differs from the Dolbeault table".into()));
    }
    let ddbar = cohomology::ddbar_check(m);
    let metrics = metrics::classify(m, options)?;
    let kuranishi = if m.flags().parallelisable && m.flags().nilpotent {
        let kodaira = kuranishi::kodaira_h01(m)?;
        if kodaira.r != dolbeault.dim(0, 1) {
            return Err(ReportError::Inconsistent(format!(
                "Kodaira count r = {} differs from h01 = {}",
                kodaira.r,
                dolbeault.dim(0, 1)
            )));
        }
        let tangent_dim = kuranishi::tangent_h01_basis(m)?.len();
        let solution = kuranishi::solve_maurer_cartan(m, None);
        if let Ok(sol) = &solution {
            if sol.obstruction.is_none() && !kuranishi::verify_integrability(&sol.manifold, &sol.psi) {
                return Err(ReportError::Inconsistent("Maurer-Cartan solution fails verification".into()));
            }
        }
        Some(KuranishiSummary { kodaira, tangent_dim, solution })
    } else {
        None
    };
    Ok(FullReport {
        manifold: m.clone(),
        derham,
        dolbeault,
        bott_chern,
        spectral,
        ddbar,
        metrics,
        kuranishi,
        options,
        version: env!("CARGO_PKG_VERSION"),
    })
}

fn verdict_text(v: Verdict) -> &'static str {
    match v {
        Verdict::Witness => "YES (witness verified)",
        Verdict::Certificate => "NO (certificate verified)",
        Verdict::Undecided => "UNDECIDED",
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

/// One line per manifold, for example
/// `Kähler: NO (certificate verified) | balanced: YES (witness verified) | … | ∂∂̄: NO | E1-degeneration: NO`.
pub fn summary_line(r: &FullReport) -> String {
    let label = |k: MetricKind| match k {
        MetricKind::Kahler => "Kähler",
        MetricKind::Balanced => "balanced",
        MetricKind::Sg => "sG",
        MetricKind::Gauduchon => "Gauduchon",
    };
    let mut parts: Vec<String> = MetricKind::ALL
        .iter()
        .map(|&k| format!("{}: {}", label(k), verdict_text(r.metrics.report(k).verdict)))
        .collect();
    parts.push(format!("∂∂̄: {}", yes_no(r.ddbar.overall)));
    parts.push(format!("E1-degeneration: {}", yes_no(r.spectral.degeneration_page == Some(1))));
    parts.join(" | ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structeq::load;

    #[test]
    fn builtins_resolve() {
        assert_eq!(builtin("iwasawa").unwrap(), IWASAWA);
        assert_eq!(builtin("torus3").unwrap(), "dim 3\nd phi1 = 0\nd phi2 = 0\nd phi3 = 0\n");
        let ab = builtin("iwasawa_ab(1/10)").unwrap();
        assert_eq!(ab, builtin("iwasawa_ab:1/10").unwrap());
        assert_eq!(load(&ab).unwrap(), deform::ab_fiber(&"1/10".parse().unwrap()).unwrap().manifold);
        let err = builtin("heisenberg").unwrap_err().to_string();
        assert!(err.contains("iwasawa, torus2, torus3"), "{err}");
        assert!(matches!(builtin("iwasawa_ab(0)"), Err(ReportError::Deform(DeformError::ZeroParameter))));
    }

    #[test]
    fn iwasawa_summary() {
        let r = run_report(&load(IWASAWA).unwrap(), SearchOptions::default()).unwrap();
        assert_eq!(
            summary_line(&r),
            "Kähler: NO (certificate verified) | balanced: YES (witness verified) | sG: YES (witness verified) \
             | Gauduchon: YES (witness verified) | ∂∂̄: NO | E1-degeneration: NO"
        );
        let k = r.kuranishi.unwrap();
        assert_eq!((k.kodaira.r, k.tangent_dim), (2, 6));
    }
}
