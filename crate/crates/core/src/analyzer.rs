//! Forward analysis: which competencies a profile can develop under a ruleset,
//! and why the others are blocked.

use std::collections::BTreeSet;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::catalog::{eval_atom, Atom, Competency, Dimension};
use crate::profile::CharacteristicProfile;
use crate::ruleset::{Rule, Ruleset, RulesetMeta};
use crate::vocab::{Domain, FunctionalitySet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Activable,
    Blocked,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Activable => "activable",
            Status::Blocked => "blocked",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ReasonKind {
    MissingRequired,
    MissingAnyGroup,
    Inhibited,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Reason {
    pub kind: ReasonKind,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompetencyResult {
    pub status: Status,
    pub reasons: Vec<Reason>,
    pub support_score: usize,
    pub supporters_present: Vec<Atom>,
}

impl CompetencyResult {
    pub fn is_activable(&self) -> bool {
        self.status == Status::Activable
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub profile: CharacteristicProfile,
    pub ruleset: RulesetMeta,
    /// One entry per leaf, in tree order.
    pub results: Vec<(Competency, CompetencyResult)>,
}

impl AnalysisReport {
    pub fn result(&self, c: Competency) -> &CompetencyResult {
        &self.results[c.index()].1
    }

    pub fn is_activable(&self, c: Competency) -> bool {
        self.result(c).is_activable()
    }

    pub fn activable(&self) -> BTreeSet<Competency> {
        self.results
            .iter()
            .filter(|(_, r)| r.is_activable())
            .map(|(c, _)| *c)
            .collect()
    }

    pub fn to_json(&self) -> String {
        crate::schema::to_canonical_json(self)
    }
}

impl Serialize for AnalysisReport {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Results<'a>(&'a [(Competency, CompetencyResult)]);
        impl Serialize for Results<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.len()))?;
                for (c, r) in self.0 {
                    map.serialize_entry(c.as_str(), r)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("profile", &self.profile)?;
        map.serialize_entry("ruleset", &self.ruleset)?;
        map.serialize_entry("results", &Results(&self.results))?;
        map.end()
    }
}

/// Evaluates one rule. Every failure is listed, not just the first; missing
/// atoms follow profile dimension order.
pub fn evaluate_rule(profile: &CharacteristicProfile, rule: &Rule) -> CompetencyResult {
    let holds = |a: &Atom| eval_atom(profile, *a);
    let mut reasons = Vec::new();
    let mut missing: Vec<Atom> = rule
        .required
        .iter()
        .copied()
        .filter(|a| !holds(a))
        .collect();
    missing.sort_by_key(|a| (a.dimension(), a.name()));
    for atom in missing {
        reasons.push(Reason {
            kind: ReasonKind::MissingRequired,
            atoms: vec![atom],
        });
    }
    for group in &rule.required_any {
        if !group.iter().any(holds) {
            reasons.push(Reason {
                kind: ReasonKind::MissingAnyGroup,
                atoms: group.iter().copied().collect(),
            });
        }
    }
    for atom in rule.inhibitors.iter().filter(|a| holds(a)) {
        reasons.push(Reason {
            kind: ReasonKind::Inhibited,
            atoms: vec![*atom],
        });
    }
    let supporters_present: Vec<Atom> = rule.supporters.iter().copied().filter(holds).collect();
    CompetencyResult {
        status: if reasons.is_empty() {
            Status::Activable
        } else {
            Status::Blocked
        },
        reasons,
        support_score: supporters_present.len(),
        supporters_present,
    }
}

/// Whether `rule` lets the competency develop on `profile`, without building
/// explanations.
pub fn rule_activable(profile: &CharacteristicProfile, rule: &Rule) -> bool {
    rule.required.iter().all(|a| eval_atom(profile, *a))
        && rule
            .required_any
            .iter()
            .all(|g| g.iter().any(|a| eval_atom(profile, *a)))
        && !rule.inhibitors.iter().any(|a| eval_atom(profile, *a))
}

pub fn analyze(profile: &CharacteristicProfile, rules: &Ruleset) -> AnalysisReport {
    AnalysisReport {
        profile: *profile,
        ruleset: rules.meta.clone(),
        results: rules
            .rules()
            .map(|(c, rule)| (c, evaluate_rule(profile, rule)))
            .collect(),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DimensionChange {
    pub dimension: Dimension,
    pub before: Value,
    pub after: Value,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct DomainChange {
    pub before: Domain,
    pub after: Domain,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProfileDiff {
    /// Rule-relevant dimensions whose values differ, in dimension order.
    pub changed: Vec<DimensionChange>,
    /// The problem domain is reported apart from the rule-relevant dimensions.
    pub domain_change: Option<DomainChange>,
    pub functionality_added: FunctionalitySet,
    pub functionality_removed: FunctionalitySet,
    pub competencies_gained: Vec<Competency>,
    pub competencies_lost: Vec<Competency>,
}

impl ProfileDiff {
    pub fn changed_dimensions(&self) -> Vec<Dimension> {
        self.changed.iter().map(|c| c.dimension).collect()
    }
}

pub fn diff_profiles(
    a: &CharacteristicProfile,
    b: &CharacteristicProfile,
    rules: &Ruleset,
) -> ProfileDiff {
    let changed = Dimension::ALL
        .into_iter()
        .filter_map(|dim| {
            let (before, after) = (a.dimension_value(dim), b.dimension_value(dim));
            (before != after).then_some(DimensionChange {
                dimension: dim,
                before,
                after,
            })
        })
        .collect();
    let before = analyze(a, rules).activable();
    let after = analyze(b, rules).activable();
    ProfileDiff {
        changed,
        domain_change: (a.domain != b.domain).then_some(DomainChange {
            before: a.domain,
            after: b.domain,
        }),
        functionality_added: b.functionalities.difference(a.functionalities),
        functionality_removed: a.functionalities.difference(b.functionalities),
        competencies_gained: after.difference(&before).copied().collect(),
        competencies_lost: before.difference(&after).copied().collect(),
    }
}
