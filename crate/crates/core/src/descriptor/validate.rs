use std::collections::BTreeSet;

use super::{derive_domain, Descriptor, ToolRole};
use crate::schema::{index_path, IssueCode, Issues, ValidationIssue};
use crate::vocab::Observability;

/// Checks every structural invariant of a parsed descriptor. Issues come back
/// ordered by path.
pub fn validate_descriptor(d: &Descriptor) -> Vec<ValidationIssue> {
    let mut issues = Issues::default();

    if d.name.trim().is_empty() {
        issues.push(
            IssueCode::BadFieldPresence,
            "name",
            "name must not be empty",
        );
    }
    if d.group.as_deref().is_some_and(|g| g.trim().is_empty()) {
        issues.push(
            IssueCode::BadFieldPresence,
            "group",
            "group must not be empty when present",
        );
    }

    let ps = &d.components.problem_solver;
    if !ps.is_agent
        && !ps
            .tools
            .iter()
            .any(|t| t.roles.contains(&ToolRole::Interaction))
    {
        issues.push(
            IssueCode::MissingInteraction,
            "components.problem_solver.tools",
            "no interaction tool and the problem solver is not the agent",
        );
    }
    check_unique(
        ps.tools.iter().map(|t| t.name.as_str()),
        "components.problem_solver.tools",
        &mut issues,
    );

    let agent = &d.components.agent;
    if agent.actions.is_empty() {
        issues.push(
            IssueCode::BadFieldPresence,
            "components.agent.actions",
            "agent has no actions",
        );
    }
    check_unique(
        agent.actions.iter().map(|a| a.name.as_str()),
        "components.agent.actions",
        &mut issues,
    );

    if d.components.environment.descriptors.is_empty() {
        issues.push(
            IssueCode::BadFieldPresence,
            "components.environment.descriptors",
            "environment has no descriptors",
        );
    }

    match derive_domain(agent.kind, d.components.environment.kind) {
        Ok(derived) => {
            if let Some(declared) = d
                .characteristics
                .domain
                .filter(|declared| *declared != derived)
            {
                issues.push(
                    IssueCode::DomainMismatch,
                    "characteristics.domain",
                    format!("declared {declared} but components imply {derived}"),
                );
            }
        }
        Err(e) => issues.push(IssueCode::DomainMismatch, "components", e.to_string()),
    }

    if ps.is_agent && d.characteristics.observability != Observability::Total {
        issues.push(
            IssueCode::BadFieldPresence,
            "characteristics.observability",
            "the problem solver is the agent, so observability must be total",
        );
    }

    if d.task.objectives().is_empty() {
        issues.push(
            IssueCode::NoObjective,
            "task",
            "no task element is to be found",
        );
    }
    for (role, e) in d.task.elements() {
        let path = format!("task.{}", role.as_str());
        match (e.is_to_find(), e.explicitness.is_some()) {
            (true, true) => issues.push(
                IssueCode::BadFieldPresence,
                format!("{path}.explicitness"),
                "explicitness applies only to given elements",
            ),
            (false, false) => issues.push(
                IssueCode::BadFieldPresence,
                format!("{path}.explicitness"),
                "given elements need an explicitness",
            ),
            _ => {}
        }
        match (e.is_to_find(), e.constrained.is_some()) {
            (false, true) => issues.push(
                IssueCode::BadFieldPresence,
                format!("{path}.constrained"),
                "constrained applies only to elements to be found",
            ),
            (true, false) => issues.push(
                IssueCode::BadFieldPresence,
                format!("{path}.constrained"),
                "elements to be found need a constrained flag",
            ),
            _ => {}
        }
    }

    let mut out = issues.0;
    out.sort_by(|a, b| a.path.cmp(&b.path));
    out
}

fn check_unique<'a>(names: impl Iterator<Item = &'a str>, path: &str, issues: &mut Issues) {
    let mut seen = BTreeSet::new();
    for (i, name) in names.enumerate() {
        if !seen.insert(name) {
            issues.push(
                IssueCode::DuplicateName,
                index_path(path, i),
                format!("`{name}` appears twice"),
            );
        }
    }
}
