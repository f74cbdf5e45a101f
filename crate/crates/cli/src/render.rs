//! Markdown renderings of engine results. Output is byte-stable for equal
//! inputs.

use std::fmt::Write;

use ctprof_core::analyzer::{AnalysisReport, ProfileDiff, ReasonKind};
use ctprof_core::catalog::Atom;
use ctprof_core::corpus::{TaxonomyKind, TaxonomyTable};
use ctprof_core::designer::DesignSolution;
use ctprof_core::profile::CharacteristicProfile;
use ctprof_core::Constraint;
use serde_json::Value;

fn atoms(list: &[Atom]) -> String {
    list.iter().map(|a| a.name()).collect::<Vec<_>>().join(", ")
}

fn functionalities(p: &CharacteristicProfile) -> String {
    let names: Vec<&str> = p.functionalities.iter().map(|f| f.as_str()).collect();
    if names.is_empty() {
        "(none)".into()
    } else {
        names.join(", ")
    }
}

/// Characteristics grouped like the descriptor template: tools, system, task
/// and algorithm.
fn characteristics_table(out: &mut String, p: &CharacteristicProfile) {
    let rows = [
        ("Problem", "domain", p.domain.to_string()),
        ("Tools", "functionalities", functionalities(p)),
        ("System", "resettability", p.resettability.to_string()),
        ("System", "observability", p.observability.to_string()),
        ("Task", "cardinality", p.cardinality.to_string()),
        ("Task", "explicitness", p.explicitness.to_string()),
        (
            "Task",
            "constraints",
            Constraint::from_flag(p.constrained).to_string(),
        ),
        ("Task", "state_unknown", p.state_unknown.to_string()),
        ("Algorithm", "representation", p.representation.to_string()),
    ];
    out.push_str("| Section | Characteristic | Value |\n|---|---|---|\n");
    for (section, name, value) in rows {
        let _ = writeln!(out, "| {section} | {name} | {value} |");
    }
}

fn reasons_cell(r: &ctprof_core::analyzer::CompetencyResult) -> String {
    if r.reasons.is_empty() {
        return "-".into();
    }
    let missing: Vec<Atom> = r
        .reasons
        .iter()
        .filter(|x| x.kind == ReasonKind::MissingRequired)
        .flat_map(|x| x.atoms.iter().copied())
        .collect();
    let mut parts = Vec::new();
    if !missing.is_empty() {
        parts.push(format!("missing: {}", atoms(&missing)));
    }
    for reason in &r.reasons {
        match reason.kind {
            ReasonKind::MissingRequired => {}
            ReasonKind::MissingAnyGroup => {
                parts.push(format!("need one of: {}", atoms(&reason.atoms)))
            }
            ReasonKind::Inhibited => parts.push(format!("inhibited by: {}", atoms(&reason.atoms))),
        }
    }
    parts.join("; ")
}

pub fn render_report_markdown(r: &AnalysisReport) -> String {
    let mut out = String::new();
    out.push_str("# Competency profile\n\n");
    let _ = writeln!(
        out,
        "Ruleset: {} (version {})\n",
        r.ruleset.name, r.ruleset.version
    );
    out.push_str("## Characteristics\n\n");
    characteristics_table(&mut out, &r.profile);
    let activable = r.results.iter().filter(|(_, x)| x.is_activable()).count();
    let _ = writeln!(
        out,
        "\n## Competencies ({activable} of {} activable)\n",
        r.results.len()
    );
    out.push_str(
        "| Competency | Status | Reasons | Support | Supporters |\n|---|---|---|---|---|\n",
    );
    for (c, res) in &r.results {
        let supporters = if res.supporters_present.is_empty() {
            "-".into()
        } else {
            atoms(&res.supporters_present)
        };
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} |",
            c.as_str(),
            res.status.as_str(),
            reasons_cell(res),
            res.support_score,
            supporters
        );
    }
    out
}

pub fn render_taxonomy_markdown(t: &TaxonomyTable) -> String {
    let mut out = String::new();
    let title = match t.kind {
        TaxonomyKind::Characteristics => "Characteristics taxonomy",
        TaxonomyKind::Competencies => "Competencies taxonomy",
    };
    let mode = if t.collapse_groups {
        " (groups collapsed)"
    } else {
        ""
    };
    let _ = writeln!(out, "# {title}{mode}\n");
    out.push_str("| Section | Row |");
    for d in &t.domains {
        let _ = write!(out, " {d} |");
    }
    out.push_str("\n|---|---|");
    for _ in &t.domains {
        out.push_str("---|");
    }
    out.push('\n');
    for row in &t.rows {
        let _ = write!(out, "| {} | {} |", row.section, row.row);
        for c in &row.cells {
            let _ = write!(out, " {}% ({}/{}) |", c.percent, c.numerator, c.denominator);
        }
        out.push('\n');
    }
    out
}

pub fn render_solution_markdown(s: &DesignSolution) -> String {
    let mut out = String::new();
    out.push_str("# Design solution\n\n");
    let _ = writeln!(out, "Feasible: {}\n", if s.feasible { "yes" } else { "no" });
    out.push_str("## Constraints\n\n");
    let list = |set: &std::collections::BTreeSet<Atom>| {
        if set.is_empty() {
            "(none)".to_string()
        } else {
            set.iter().map(|a| a.name()).collect::<Vec<_>>().join(", ")
        }
    };
    let _ = writeln!(out, "- must: {}", list(&s.constraints.must));
    let _ = writeln!(out, "- must not: {}", list(&s.constraints.must_not));
    if s.constraints.choose_one_of.is_empty() {
        out.push_str("- choose one of: (none)\n");
    }
    for group in &s.constraints.choose_one_of {
        let _ = writeln!(out, "- choose one of: {}", list(group));
    }
    if !s.conflicts.is_empty() {
        out.push_str("\n## Conflicts\n\n");
        for c in &s.conflicts {
            let _ = writeln!(out, "- {}", c.explanation);
        }
    }
    if !s.profiles.is_empty() {
        out.push_str("\n## Ranked profiles\n\n");
        out.push_str(
            "| Rank | Support | Functionalities | Resettability | Observability | Cardinality | Explicitness | Constraints | Representation | State unknown |\n",
        );
        out.push_str("|---|---|---|---|---|---|---|---|---|---|\n");
        for (i, r) in s.profiles.iter().enumerate() {
            let p = &r.profile;
            let _ = writeln!(
                out,
                "| {} | {} | {} | {} | {} | {} | {} | {} | {} | {} |",
                i + 1,
                r.support_total,
                functionalities(p),
                p.resettability,
                p.observability,
                p.cardinality,
                p.explicitness,
                Constraint::from_flag(p.constrained),
                p.representation,
                p.state_unknown
            );
        }
    }
    out
}

fn value_text(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Array(items) if items.is_empty() => "(none)".into(),
        Value::Array(items) => items.iter().map(value_text).collect::<Vec<_>>().join(", "),
        other => other.to_string(),
    }
}

pub fn render_diff_markdown(d: &ProfileDiff) -> String {
    let mut out = String::new();
    out.push_str("# Profile comparison\n\n");
    if let Some(dc) = &d.domain_change {
        let _ = writeln!(out, "Domain: {} -> {}\n", dc.before, dc.after);
    }
    if d.changed.is_empty() {
        out.push_str("No characteristic differs.\n");
    } else {
        out.push_str("| Characteristic | Before | After |\n|---|---|---|\n");
        for c in &d.changed {
            let _ = writeln!(
                out,
                "| {} | {} | {} |",
                c.dimension,
                value_text(&c.before),
                value_text(&c.after)
            );
        }
    }
    let names = |cs: &[ctprof_core::catalog::Competency]| {
        if cs.is_empty() {
            "(none)".to_string()
        } else {
            cs.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", ")
        }
    };
    out.push('\n');
    let _ = writeln!(
        out,
        "- competencies gained: {}",
        names(&d.competencies_gained)
    );
    let _ = writeln!(out, "- competencies lost: {}", names(&d.competencies_lost));
    out
}
