//! Rendering of analysis reports, human and machine forms.

use crate::records::Records;
use graphnorm::norming::{CheckOutcome, Verdict};
use graphnorm::NormingReport64;

pub fn human(source: &str, report: &NormingReport64) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "graph {source} ({} vertices, {} edges, graph6 {})\n",
        report.vertex_count, report.edge_count, report.graph6
    ));
    let line = |name: &str, outcome: &CheckOutcome| format!("  {name:<22} {}\n", outcome.label());
    out.push_str(&line("components isomorphic", &report.components_isomorphic));
    out.push_str(&line("bipartite", &report.bipartite));
    out.push_str(&line("biregular", &report.biregular));
    if let Some((a, b)) = report.part_degrees {
        out.push_str(&format!("  {:<22} a = {a}, b = {b}\n", "part degrees"));
    }
    out.push_str(&line("edge-transitive", &report.edge_transitive));
    if let Some(orbits) = report.edge_orbit_count {
        out.push_str(&format!("  {:<22} {orbits}\n", "edge orbits"));
    }
    if report.falsifiers_ran {
        out.push_str(&format!(
            "  {:<22} {}\n",
            "lemma falsifier",
            report
                .lemma_certificate
                .as_ref()
                .map_or("no gap found within budget".to_string(), |c| format!(
                    "gap {} between edges {} and {}",
                    c.gap, c.edge_hi, c.edge_lo
                ))
        ));
        out.push_str(&format!(
            "  {:<22} {}\n",
            "Hölder falsifier",
            report
                .holder_certificate
                .as_ref()
                .map_or("no violation found within budget".to_string(), |c| format!(
                    "violation {}",
                    c.violation
                ))
        ));
    }
    if let Some(flag) = &report.unexpected_certificate {
        out.push_str(&format!("  note: {flag}\n"));
    }
    match &report.verdict {
        Verdict::NotWeaklyNorming { reason } => {
            out.push_str(&format!("verdict: NOT weakly norming — {reason}\n"));
        }
        Verdict::PassesAllNecessaryConditions => {
            out.push_str("verdict: passes all necessary conditions\n");
            if let Some(caveat) = report.caveat {
                out.push_str(&format!("caveat: {caveat}\n"));
            }
        }
    }
    out
}

pub fn records(source: &str, report: &NormingReport64) -> Records {
    let mut records = Records::new("analyze");
    records.push("graph", source);
    records.push("graph6", &report.graph6);
    records.push("n", report.vertex_count);
    records.push("k", report.edge_count);
    let outcome = |o: &CheckOutcome| match o {
        CheckOutcome::Pass => "pass".to_string(),
        CheckOutcome::Fail(_) => "fail".to_string(),
        CheckOutcome::Skipped => "skipped".to_string(),
    };
    records.push("check.components_isomorphic", outcome(&report.components_isomorphic));
    records.push("check.bipartite", outcome(&report.bipartite));
    records.push("check.biregular", outcome(&report.biregular));
    if let Some((a, b)) = report.part_degrees {
        records.push("degrees.a", a);
        records.push("degrees.b", b);
    }
    records.push("check.edge_transitive", outcome(&report.edge_transitive));
    if let Some(orbits) = report.edge_orbit_count {
        records.push("orbits", orbits);
    }
    records.push("falsifiers_ran", report.falsifiers_ran);
    records.push(
        "lemma_certificate",
        if report.lemma_certificate.is_some() { "found" } else { "none" },
    );
    records.push(
        "holder_certificate",
        if report.holder_certificate.is_some() { "found" } else { "none" },
    );
    if let Some(flag) = &report.unexpected_certificate {
        records.push("unexpected_certificate", flag);
    }
    match &report.verdict {
        Verdict::NotWeaklyNorming { reason } => {
            records.push("verdict", "not_weakly_norming");
            records.push("reason", reason.replace('\n', " "));
        }
        Verdict::PassesAllNecessaryConditions => {
            records.push("verdict", "passes_all_necessary_conditions");
            if let Some(caveat) = report.caveat {
                records.push("caveat", caveat);
            }
        }
    }
    records
}
