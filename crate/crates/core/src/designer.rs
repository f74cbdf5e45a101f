//! Backward design: from target competencies to the characteristics a
//! problem must (and must not) have, plus ranked concrete profiles.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use serde_json::Value;

use crate::analyzer::{evaluate_rule, rule_activable};
use crate::catalog::{eval_atom, Atom, Competency, Dimension};
use crate::profile::{CharacteristicProfile, PartialProfile, ProfileSpace};
use crate::ruleset::Ruleset;
use crate::schema::{
    as_array, as_enum, as_u64, index_path, parse_json, IssueCode, Issues, ObjectReader,
    SyntaxError, ValidationIssue,
};

pub const DEFAULT_MAX_SOLUTIONS: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignQuery {
    pub develop: BTreeSet<Competency>,
    pub avoid: BTreeSet<Competency>,
    pub locked: PartialProfile,
    pub max_solutions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DesignError {
    #[error(transparent)]
    Parse(#[from] SyntaxError),
    #[error("design query does not match the schema: {}", crate::schema::summarize_issues(.0))]
    Schema(Vec<ValidationIssue>),
    #[error("the develop set is empty")]
    EmptyDevelopSet,
    #[error("competencies both developed and avoided: {}", .0.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", "))]
    DevelopAvoidOverlap(Vec<Competency>),
    #[error("max_solutions must be at least 1")]
    ZeroMaxSolutions,
}

impl DesignQuery {
    pub fn new(develop: impl IntoIterator<Item = Competency>) -> Self {
        DesignQuery {
            develop: develop.into_iter().collect(),
            avoid: BTreeSet::new(),
            locked: PartialProfile::default(),
            max_solutions: DEFAULT_MAX_SOLUTIONS,
        }
    }

    pub fn check(&self) -> Result<(), DesignError> {
        if self.develop.is_empty() {
            return Err(DesignError::EmptyDevelopSet);
        }
        let both: Vec<Competency> = self.develop.intersection(&self.avoid).copied().collect();
        if !both.is_empty() {
            return Err(DesignError::DevelopAvoidOverlap(both));
        }
        if self.max_solutions == 0 {
            return Err(DesignError::ZeroMaxSolutions);
        }
        Ok(())
    }

    /// Reads `{"develop": [...], "avoid"?: [...], "locked"?: {...}, "max_solutions"?: n}`.
    pub fn from_json_value(v: &Value) -> Result<Self, DesignError> {
        let mut issues = Issues::default();
        let q = read_query(v, &mut issues);
        let q = issues.into_result(q).map_err(DesignError::Schema)?;
        q.check()?;
        Ok(q)
    }

    pub fn parse(text: &str) -> Result<Self, DesignError> {
        Self::from_json_value(&parse_json(text)?)
    }
}

fn read_competencies(v: &Value, path: &str, issues: &mut Issues) -> Option<BTreeSet<Competency>> {
    let items = as_array(v, path, issues)?;
    let mut set = BTreeSet::new();
    let mut ok = true;
    for (i, item) in items.iter().enumerate() {
        let p = index_path(path, i);
        match as_enum::<Competency>(item, &p, issues) {
            Some(c) => {
                if !set.insert(c) {
                    issues.push(IssueCode::DuplicateName, p, format!("`{c}` listed twice"));
                }
            }
            None => ok = false,
        }
    }
    ok.then_some(set)
}

fn read_query(v: &Value, issues: &mut Issues) -> Option<DesignQuery> {
    let mut r = ObjectReader::new(v, "", issues)?;
    let develop = r
        .required("develop", issues)
        .and_then(|(v, p)| read_competencies(v, &p, issues));
    let avoid = match r.optional("avoid") {
        Some((v, p)) => read_competencies(v, &p, issues),
        None => Some(BTreeSet::new()),
    };
    let locked = match r.optional("locked") {
        Some((v, p)) => PartialProfile::from_json_value(v, &p, issues),
        None => Some(PartialProfile::default()),
    };
    let max_solutions = match r.optional("max_solutions") {
        Some((v, p)) => as_u64(v, &p, issues).map(|n| usize::try_from(n).unwrap_or(usize::MAX)),
        None => Some(DEFAULT_MAX_SOLUTIONS),
    };
    r.finish(issues);
    Some(DesignQuery {
        develop: develop?,
        avoid: avoid?,
        locked: locked?,
        max_solutions: max_solutions?,
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct DesignConstraints {
    pub must: BTreeSet<Atom>,
    pub must_not: BTreeSet<Atom>,
    pub choose_one_of: Vec<BTreeSet<Atom>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Conflict {
    pub competency_a: Competency,
    pub competency_b: Option<Competency>,
    pub atom: Option<Atom>,
    pub explanation: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankedProfile {
    pub profile: CharacteristicProfile,
    pub support_total: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DesignSolution {
    pub constraints: DesignConstraints,
    pub conflicts: Vec<Conflict>,
    pub profiles: Vec<RankedProfile>,
    pub feasible: bool,
}

impl DesignSolution {
    pub fn to_json(&self) -> String {
        crate::schema::to_canonical_json(self)
    }
}

/// Which develop competencies contributed each constraint atom.
struct Demands {
    must: BTreeMap<Atom, Competency>,
    must_not: BTreeMap<Atom, Competency>,
    groups: Vec<(Competency, BTreeSet<Atom>)>,
}

fn collect_demands(q: &DesignQuery, rules: &Ruleset) -> Demands {
    let mut d = Demands {
        must: BTreeMap::new(),
        must_not: BTreeMap::new(),
        groups: Vec::new(),
    };
    for &c in &q.develop {
        let rule = rules.rule(c);
        for a in &rule.required {
            d.must.entry(*a).or_insert(c);
        }
        for a in &rule.inhibitors {
            d.must_not.entry(*a).or_insert(c);
        }
        for g in &rule.required_any {
            if !d.groups.iter().any(|(_, seen)| seen == g) {
                d.groups.push((c, g.clone()));
            }
        }
    }
    d
}

/// Profiles that differ from the first candidate only in `dim`, one per
/// candidate value of that dimension.
fn dimension_variants(space: &ProfileSpace, dim: Dimension) -> Vec<CharacteristicProfile> {
    let Some(base) = space.iter().next() else {
        return Vec::new();
    };
    let with = |f: &dyn Fn(&mut CharacteristicProfile)| {
        let mut p = base;
        f(&mut p);
        p
    };
    match dim {
        Dimension::Functionalities => space
            .functionalities
            .iter()
            .map(|v| with(&|p| p.functionalities = *v))
            .collect(),
        Dimension::Resettability => space
            .resettability
            .iter()
            .map(|v| with(&|p| p.resettability = *v))
            .collect(),
        Dimension::Observability => space
            .observability
            .iter()
            .map(|v| with(&|p| p.observability = *v))
            .collect(),
        Dimension::Cardinality => space
            .cardinality
            .iter()
            .map(|v| with(&|p| p.cardinality = *v))
            .collect(),
        Dimension::Explicitness => space
            .explicitness
            .iter()
            .map(|v| with(&|p| p.explicitness = *v))
            .collect(),
        Dimension::Constrained => space
            .constrained
            .iter()
            .map(|v| with(&|p| p.constrained = *v))
            .collect(),
        Dimension::Representation => space
            .representation
            .iter()
            .map(|v| with(&|p| p.representation = *v))
            .collect(),
        Dimension::StateUnknown => space
            .state_unknown
            .iter()
            .map(|v| with(&|p| p.state_unknown = *v))
            .collect(),
    }
}

fn describe_lock(locked: &PartialProfile, dim: Dimension) -> String {
    let probe = locked
        .candidates()
        .iter()
        .next()
        .map(|p| p.dimension_value(dim));
    match probe {
        Some(Value::String(s)) => format!("{dim} is locked to {s}"),
        Some(v) => format!("{dim} is locked to {v}"),
        None => format!("{dim} is locked"),
    }
}

fn find_conflicts(q: &DesignQuery, d: &Demands) -> Vec<Conflict> {
    let mut conflicts = Vec::new();
    let space = q.locked.candidates();

    for (atom, &c) in &d.must {
        if let Some(&b) = d.must_not.get(atom) {
            conflicts.push(Conflict {
                competency_a: c,
                competency_b: Some(b),
                atom: Some(*atom),
                explanation: format!("{c} requires {atom} but it inhibits {b}"),
            });
        }
    }

    for dim in Dimension::ALL {
        let variants = dimension_variants(&space, dim);
        let on_dim: Vec<(Atom, Competency)> = d
            .must
            .iter()
            .filter(|(a, _)| a.dimension() == dim)
            .map(|(a, c)| (*a, *c))
            .collect();
        let mut alone_ok = Vec::new();
        for &(a, c) in &on_dim {
            if variants.iter().any(|p| eval_atom(p, a)) {
                alone_ok.push((a, c));
            } else {
                conflicts.push(Conflict {
                    competency_a: c,
                    competency_b: None,
                    atom: Some(a),
                    explanation: format!("{c} requires {a} but {}", describe_lock(&q.locked, dim)),
                });
            }
        }
        let mut pair_found = false;
        for (i, &(a, ca)) in alone_ok.iter().enumerate() {
            for &(b, cb) in &alone_ok[i + 1..] {
                if !variants.iter().any(|p| eval_atom(p, a) && eval_atom(p, b)) {
                    pair_found = true;
                    conflicts.push(Conflict {
                        competency_a: ca,
                        competency_b: Some(cb),
                        atom: Some(a),
                        explanation: format!(
                            "{ca} requires {a} and {cb} requires {b}; both cannot hold"
                        ),
                    });
                }
            }
        }
        if !pair_found
            && alone_ok.len() == on_dim.len()
            && !on_dim.is_empty()
            && !variants
                .iter()
                .any(|p| on_dim.iter().all(|(a, _)| eval_atom(p, *a)))
        {
            let (a, c) = on_dim[0];
            conflicts.push(Conflict {
                competency_a: c,
                competency_b: None,
                atom: Some(a),
                explanation: format!("the atoms required on {dim} cannot hold together"),
            });
        }
    }

    for (c, group) in &d.groups {
        let possible = group.iter().any(|a| q.locked.eval(*a) != Some(false));
        if !possible {
            let names: Vec<&str> = group.iter().map(|a| a.name()).collect();
            conflicts.push(Conflict {
                competency_a: *c,
                competency_b: None,
                atom: None,
                explanation: format!(
                    "{c} needs one of {} but the locks rule out all of them",
                    names.join(", ")
                ),
            });
        }
    }
    conflicts
}

/// Derives the constraints of a query without enumerating profiles.
pub fn design_constraints(
    q: &DesignQuery,
    rules: &Ruleset,
) -> Result<DesignConstraints, DesignError> {
    q.check()?;
    let d = collect_demands(q, rules);
    let mut choose_one_of: Vec<BTreeSet<Atom>> = d.groups.into_iter().map(|(_, g)| g).collect();
    choose_one_of.sort();
    Ok(DesignConstraints {
        must: d.must.into_keys().collect(),
        must_not: d.must_not.into_keys().collect(),
        choose_one_of,
    })
}

/// Every profile under the locks that develops all targets and no avoided
/// competency, best first, truncated to `max_solutions`.
pub fn enumerate_solutions(q: &DesignQuery, rules: &Ruleset) -> Vec<RankedProfile> {
    let develop: Vec<_> = q.develop.iter().map(|c| rules.rule(*c)).collect();
    let avoid: Vec<_> = q.avoid.iter().map(|c| rules.rule(*c)).collect();
    let space = q.locked.candidates();
    let mut admissible: Vec<RankedProfile> = space
        .iter()
        .filter(|p| {
            develop.iter().all(|r| rule_activable(p, r))
                && !avoid.iter().any(|r| rule_activable(p, r))
        })
        .map(|profile| RankedProfile {
            support_total: develop
                .iter()
                .map(|r| evaluate_rule(&profile, r).support_score)
                .sum(),
            profile,
        })
        .collect();
    rank_and_truncate(&mut admissible, q.max_solutions);
    admissible
}

/// Ranking: support descending, then fewer functionalities, then compact JSON
/// of the profile. The JSON key is only computed for the groups that reach the
/// cut.
fn rank_and_truncate(items: &mut Vec<RankedProfile>, max: usize) {
    let cheap = |r: &RankedProfile| {
        (
            std::cmp::Reverse(r.support_total),
            r.profile.functionalities.len(),
        )
    };
    items.sort_unstable_by_key(cheap);
    if items.len() > max {
        let boundary = cheap(&items[max - 1]);
        let end = items.partition_point(|r| cheap(r) <= boundary);
        items.truncate(end);
    }
    let mut keyed: Vec<(String, RankedProfile)> =
        items.drain(..).map(|r| (r.profile.sort_key(), r)).collect();
    keyed.sort_by(|(ka, a), (kb, b)| cheap(a).cmp(&cheap(b)).then_with(|| ka.cmp(kb)));
    items.extend(keyed.into_iter().map(|(_, r)| r).take(max));
}

/// Runs a full design query.
pub fn design(q: &DesignQuery, rules: &Ruleset) -> Result<DesignSolution, DesignError> {
    let constraints = design_constraints(q, rules)?;
    let demands = collect_demands(q, rules);
    let mut conflicts = find_conflicts(q, &demands);
    let profiles = if conflicts.is_empty() {
        enumerate_solutions(q, rules)
    } else {
        Vec::new()
    };
    if profiles.is_empty() && conflicts.is_empty() {
        conflicts.push(explain_empty(q, rules));
    }
    Ok(DesignSolution {
        constraints,
        feasible: !profiles.is_empty(),
        conflicts,
        profiles,
    })
}

/// Explains an empty result that no single clause accounts for. Usually an
/// avoided competency becomes activable whenever the targets are.
fn explain_empty(q: &DesignQuery, rules: &Ruleset) -> Conflict {
    let develop: Vec<_> = q.develop.iter().map(|c| rules.rule(*c)).collect();
    let space = q.locked.candidates();
    let targets_met: Vec<CharacteristicProfile> = space
        .iter()
        .filter(|p| develop.iter().all(|r| rule_activable(p, r)))
        .collect();
    let first_develop = *q.develop.iter().next().expect("develop is non-empty");
    if targets_met.is_empty() {
        return Conflict {
            competency_a: first_develop,
            competency_b: None,
            atom: None,
            explanation: "no profile under the locks activates every target competency".into(),
        };
    }
    let forced = q.avoid.iter().copied().find(|c| {
        targets_met
            .iter()
            .all(|p| rule_activable(p, rules.rule(*c)))
    });
    match forced {
        Some(a) => Conflict {
            competency_a: first_develop,
            competency_b: Some(a),
            atom: None,
            explanation: format!(
                "every profile that develops the targets also activates the avoided {a}"
            ),
        },
        None => Conflict {
            competency_a: first_develop,
            competency_b: q.avoid.iter().next().copied(),
            atom: None,
            explanation:
                "every profile that develops the targets activates at least one avoided competency"
                    .into(),
        },
    }
}
