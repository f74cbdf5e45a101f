//! The characteristics to competencies relation, stored as data.
//!
//! A [`Rule`] says which atoms a leaf competency requires outright, which
//! groups need at least one member to hold, which atoms inhibit it and which
//! support it. A [`Ruleset`] holds exactly one rule per leaf.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};
use serde_json::Value;

use crate::catalog::{Atom, Competency};
use crate::schema::{
    as_array, as_str, as_u64, index_path, parse_json, Issues, ObjectReader, SyntaxError,
    ValidationIssue,
};

pub const RULESET_EXTENSION: &str = ".rules.json";

const DEFAULT_RULESET_TEXT: &str = include_str!("../../../rulesets/default.rules.json");

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Rule {
    pub required: BTreeSet<Atom>,
    pub required_any: Vec<BTreeSet<Atom>>,
    pub inhibitors: BTreeSet<Atom>,
    pub supporters: BTreeSet<Atom>,
}

impl Rule {
    /// Every atom the rule mentions, in any role.
    pub fn atoms(&self) -> BTreeSet<Atom> {
        let mut all = self.required.clone();
        all.extend(self.required_any.iter().flatten().copied());
        all.extend(&self.inhibitors);
        all.extend(&self.supporters);
        all
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RulesetMeta {
    pub name: String,
    pub version: u64,
    pub notes: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ruleset {
    pub meta: RulesetMeta,
    rules: Vec<Rule>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RulesetError {
    #[error(transparent)]
    Parse(#[from] SyntaxError),
    #[error("ruleset does not match the schema: {}", crate::schema::summarize_issues(.0))]
    Schema(Vec<ValidationIssue>),
    #[error("unknown competency `{0}`")]
    UnknownCompetency(String),
    #[error("unknown atom `{atom}` in rule for {competency}")]
    UnknownAtom { competency: String, atom: String },
    #[error("no rule for {}", names(.0))]
    MissingCompetency(Vec<Competency>),
    #[error("rule for {competency}: `{atom}` is both {first} and {second}")]
    Overlap {
        competency: Competency,
        atom: Atom,
        first: &'static str,
        second: &'static str,
    },
    #[error("rule for {competency}: a required_any group needs at least 2 atoms, found {size}")]
    DegenerateGroup { competency: Competency, size: usize },
}

fn names(cs: &[Competency]) -> String {
    cs.iter().map(|c| c.as_str()).collect::<Vec<_>>().join(", ")
}

impl Ruleset {
    /// Builds a ruleset from one rule per leaf, in leaf order, checking every
    /// invariant. Groups are sorted and deduplicated.
    pub fn new(meta: RulesetMeta, rules: Vec<(Competency, Rule)>) -> Result<Self, RulesetError> {
        let mut slots: Vec<Option<Rule>> = vec![None; Competency::ALL.len()];
        for (c, mut rule) in rules {
            rule.required_any.sort();
            rule.required_any.dedup();
            check_rule(c, &rule)?;
            slots[c.index()] = Some(rule);
        }
        let missing: Vec<Competency> = Competency::ALL
            .iter()
            .copied()
            .filter(|c| slots[c.index()].is_none())
            .collect();
        if !missing.is_empty() {
            return Err(RulesetError::MissingCompetency(missing));
        }
        Ok(Ruleset {
            meta,
            rules: slots.into_iter().map(Option::unwrap).collect(),
        })
    }

    pub fn rule(&self, c: Competency) -> &Rule {
        &self.rules[c.index()]
    }

    /// Rules in leaf order.
    pub fn rules(&self) -> impl Iterator<Item = (Competency, &Rule)> {
        Competency::ALL.iter().copied().zip(&self.rules)
    }

    /// Copy of this ruleset with each rule passed through `edit`.
    pub fn map_rules(
        &self,
        mut edit: impl FnMut(Competency, &mut Rule),
    ) -> Result<Ruleset, RulesetError> {
        let rules = self
            .rules()
            .map(|(c, r)| {
                let mut r = r.clone();
                edit(c, &mut r);
                (c, r)
            })
            .collect();
        Ruleset::new(self.meta.clone(), rules)
    }

    pub fn to_json(&self) -> String {
        crate::schema::to_canonical_json(self)
    }
}

fn check_rule(c: Competency, rule: &Rule) -> Result<(), RulesetError> {
    let overlap = |a: &BTreeSet<Atom>, b: &BTreeSet<Atom>, first, second| {
        a.intersection(b).next().map(|atom| RulesetError::Overlap {
            competency: c,
            atom: *atom,
            first,
            second,
        })
    };
    if let Some(e) = overlap(&rule.required, &rule.inhibitors, "required", "an inhibitor") {
        return Err(e);
    }
    if let Some(e) = overlap(&rule.supporters, &rule.required, "a supporter", "required") {
        return Err(e);
    }
    if let Some(e) = overlap(
        &rule.supporters,
        &rule.inhibitors,
        "a supporter",
        "an inhibitor",
    ) {
        return Err(e);
    }
    if let Some(g) = rule.required_any.iter().find(|g| g.len() < 2) {
        return Err(RulesetError::DegenerateGroup {
            competency: c,
            size: g.len(),
        });
    }
    Ok(())
}

impl Serialize for Ruleset {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Rules<'a>(&'a Ruleset);
        impl Serialize for Rules<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                let mut map = serializer.serialize_map(Some(self.0.rules.len()))?;
                for (c, rule) in self.0.rules() {
                    map.serialize_entry(c.as_str(), rule)?;
                }
                map.end()
            }
        }
        let mut map = serializer.serialize_map(Some(4))?;
        map.serialize_entry("name", &self.meta.name)?;
        map.serialize_entry("version", &self.meta.version)?;
        map.serialize_entry("notes", &self.meta.notes)?;
        map.serialize_entry("rules", &Rules(self))?;
        map.end()
    }
}

/// Parses and checks a ruleset document.
pub fn load_ruleset(text: &str) -> Result<Ruleset, RulesetError> {
    let value = parse_json(text)?;
    let mut issues = Issues::default();
    let mut semantic: Option<RulesetError> = None;
    let parsed = read_ruleset(&value, &mut issues, &mut semantic);
    if !issues.is_empty() {
        return Err(RulesetError::Schema(issues.0));
    }
    if let Some(e) = semantic {
        return Err(e);
    }
    let (meta, rules) = parsed.expect("a failed read always records an issue");
    Ruleset::new(meta, rules)
}

fn read_ruleset(
    v: &Value,
    issues: &mut Issues,
    semantic: &mut Option<RulesetError>,
) -> Option<(RulesetMeta, Vec<(Competency, Rule)>)> {
    let mut r = ObjectReader::new(v, "", issues)?;
    let name = r.req_str("name", issues);
    let version = r
        .required("version", issues)
        .and_then(|(v, p)| as_u64(v, &p, issues));
    let notes = r.req_str("notes", issues);
    let rules = r.required("rules", issues).and_then(|(v, p)| {
        let map = crate::schema::as_object(v, &p, issues)?;
        let mut out = Vec::new();
        for (key, body) in map {
            let rule_path = crate::schema::join_path(&p, key);
            let Ok(c) = key.parse::<Competency>() else {
                semantic.get_or_insert(RulesetError::UnknownCompetency(key.clone()));
                continue;
            };
            if let Some(rule) = read_rule(body, &rule_path, key, issues, semantic) {
                out.push((c, rule));
            }
        }
        Some(out)
    });
    r.finish(issues);
    Some((
        RulesetMeta {
            name: name?.to_string(),
            version: version?,
            notes: notes?.to_string(),
        },
        rules?,
    ))
}

fn read_rule(
    v: &Value,
    path: &str,
    competency: &str,
    issues: &mut Issues,
    semantic: &mut Option<RulesetError>,
) -> Option<Rule> {
    let mut read_atoms = |v: &Value, path: &str, issues: &mut Issues| -> Option<BTreeSet<Atom>> {
        let items = as_array(v, path, issues)?;
        let mut set = BTreeSet::new();
        for (i, item) in items.iter().enumerate() {
            let text = as_str(item, &index_path(path, i), issues)?;
            match text.parse::<Atom>() {
                Ok(a) => {
                    set.insert(a);
                }
                Err(_) => {
                    semantic.get_or_insert(RulesetError::UnknownAtom {
                        competency: competency.to_string(),
                        atom: text.to_string(),
                    });
                }
            }
        }
        Some(set)
    };
    let mut r = ObjectReader::new(v, path, issues)?;
    let required = r
        .required("required", issues)
        .and_then(|(v, p)| read_atoms(v, &p, issues));
    let required_any = r.required("required_any", issues).and_then(|(v, p)| {
        let groups = as_array(v, &p, issues)?;
        let mut out = Vec::with_capacity(groups.len());
        for (i, g) in groups.iter().enumerate() {
            out.push(read_atoms(g, &index_path(&p, i), issues)?);
        }
        Some(out)
    });
    let inhibitors = r
        .required("inhibitors", issues)
        .and_then(|(v, p)| read_atoms(v, &p, issues));
    let supporters = r
        .required("supporters", issues)
        .and_then(|(v, p)| read_atoms(v, &p, issues));
    r.finish(issues);
    Some(Rule {
        required: required?,
        required_any: required_any?,
        inhibitors: inhibitors?,
        supporters: supporters?,
    })
}

/// The bundled default ruleset.
pub fn default_ruleset() -> &'static Ruleset {
    static DEFAULT: OnceLock<Ruleset> = OnceLock::new();
    DEFAULT.get_or_init(|| {
        load_ruleset(DEFAULT_RULESET_TEXT).expect("bundled default ruleset is valid")
    })
}

/// Text of the bundled default ruleset file.
pub fn default_ruleset_text() -> &'static str {
    DEFAULT_RULESET_TEXT
}
