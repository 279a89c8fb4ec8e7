use std::fmt::Write;

use super::{ExperimentReport, MetricSummary, Scheme, SchemeResult};

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| format!("{:>12}", "-"), |x| format!("{x:>12.5}"))
}

fn scheme_title(r: &SchemeResult, report: &ExperimentReport) -> String {
    match r.scheme {
        Scheme::Global => "Global model".to_string(),
        Scheme::Cluster => format!(
            "Cluster-level models (k = {})",
            report.assignment.as_ref().map_or(0, |a| a.k)
        ),
        Scheme::Station => "Station-level models".to_string(),
    }
}

type Stat = (&'static str, fn(&MetricSummary) -> f64);

fn stat_rows(out: &mut String, r: &SchemeResult) {
    let s = &r.summary;
    let rows: [Stat; 5] = [
        ("Mean", |m| m.mean),
        ("Min", |m| m.min),
        ("Med", |m| m.median),
        ("Max", |m| m.max),
        ("Std", |m| m.std),
    ];
    for (label, f) in rows {
        let _ = writeln!(
            out,
            "  {label:<8}{}{}{}",
            cell(s.picp.as_ref().map(f)),
            cell(s.pinaw.as_ref().map(f)),
            cell(s.mse_median.as_ref().map(f))
        );
    }
}

/// Plain-text result tables, one block per scheme.
pub fn render_summary(report: &ExperimentReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "Experiment: {}", report.name);
    let _ = writeln!(out, "DGP: {}", report.dgp);
    let _ = writeln!(
        out,
        "Stations: {}  Hours: {}  Train hours: {}  Test hours: {}",
        report.n_stations,
        report.n_hours,
        report.boundary,
        report.n_hours - report.boundary
    );
    let h = &report.homogeneity;
    let _ = writeln!(
        out,
        "Slope homogeneity: D = {:.4} (k = {}, N = {}, T = {}), {} at 5%",
        h.d_tilde,
        h.k,
        h.n_stations,
        h.t,
        if h.reject_at_5pct { "rejected" } else { "not rejected" }
    );
    if let Some(a) = &report.assignment {
        let _ = writeln!(
            out,
            "Clusters: k = {} (knee), silhouette argmax k = {}, {} PCA components",
            a.k, a.silhouette_k, a.basis.n_components
        );
        for w in &a.warnings {
            let _ = writeln!(out, "  warning: {w}");
        }
    }

    for r in &report.results {
        let _ = writeln!(out);
        let _ = writeln!(out, "{}", scheme_title(r, report));
        let _ = writeln!(out, "  {:<8}{:>12}{:>12}{:>12}", "", "PICP", "PINAW", "MSE_median");
        if r.scheme == Scheme::Global {
            for rep in &r.reports {
                let _ = writeln!(
                    out,
                    "  {:<8}{}{}{}",
                    "",
                    cell(Some(rep.picp)),
                    cell(rep.pinaw),
                    cell(Some(rep.mse_median))
                );
            }
        } else {
            stat_rows(&mut out, r);
        }
        let crossing = r.summary.crossing_rate.map_or(0.0, |m| m.mean);
        let _ = writeln!(out, "  scopes: {}  mean crossing rate: {crossing:.5}", r.reports.len());
        if !r.degenerate.is_empty() {
            let _ = writeln!(out, "  skipped (too few rows): {}", r.degenerate.join(", "));
        }
    }
    out
}
