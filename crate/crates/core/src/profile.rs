//! Characteristic profiles: the fully resolved eight-dimension vector the
//! analyzer consumes, partial profiles used as design locks, and enumeration
//! of the finite profile space.

use serde::Serialize;
use serde_json::Value;

use crate::catalog::{Atom, Dimension};
use crate::schema::{
    as_array, as_bool, as_enum, index_path, parse_json, IssueCode, Issues, ObjectReader,
    SyntaxError, ValidationIssue,
};
use crate::vocab::{
    Cardinality, Domain, Explicitness, Functionality, FunctionalitySet, Observability,
    Representation, Resettability,
};

/// Number of profiles in the enumerable space for one domain:
/// 2^8 functionality sets x 3 x 3 x 3 x 2 x 2 x 3 x 2.
pub const PROFILE_SPACE_SIZE: usize = 256 * 3 * 3 * 3 * 2 * 2 * 3 * 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CharacteristicProfile {
    pub domain: Domain,
    pub functionalities: FunctionalitySet,
    pub resettability: Resettability,
    pub observability: Observability,
    pub cardinality: Cardinality,
    pub explicitness: Explicitness,
    pub constrained: bool,
    pub representation: Representation,
    pub state_unknown: bool,
}

#[derive(Debug, thiserror::Error)]
pub enum ProfileError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error("profile does not match the schema ({} issue(s))", .0.len())]
    Schema(Vec<ValidationIssue>),
}

impl CharacteristicProfile {
    /// Compact single-line JSON, used as the final ranking tie-breaker.
    pub fn sort_key(&self) -> String {
        serde_json::to_string(self).expect("in-memory serialization cannot fail")
    }

    pub fn to_json(&self) -> String {
        crate::schema::to_canonical_json(self)
    }

    pub fn from_json_value(v: &Value, path: &str, issues: &mut Issues) -> Option<Self> {
        let mut r = ObjectReader::new(v, path, issues)?;
        let domain = r.req_enum("domain", issues);
        let functionalities = r
            .required("functionalities", issues)
            .and_then(|(v, p)| read_functionalities(v, &p, issues));
        let resettability = r.req_enum("resettability", issues);
        let observability = r.req_enum("observability", issues);
        let cardinality = r.req_enum("cardinality", issues);
        let explicitness = r.req_enum("explicitness", issues);
        let constrained = r.req_bool("constrained", issues);
        let representation = r.req_enum("representation", issues);
        let state_unknown = r.req_bool("state_unknown", issues);
        r.finish(issues);
        Some(CharacteristicProfile {
            domain: domain?,
            functionalities: functionalities?,
            resettability: resettability?,
            observability: observability?,
            cardinality: cardinality?,
            explicitness: explicitness?,
            constrained: constrained?,
            representation: representation?,
            state_unknown: state_unknown?,
        })
    }

    /// JSON value stored in one dimension.
    pub fn dimension_value(&self, dim: Dimension) -> Value {
        let v = match dim {
            Dimension::Functionalities => serde_json::to_value(self.functionalities),
            Dimension::Resettability => serde_json::to_value(self.resettability),
            Dimension::Observability => serde_json::to_value(self.observability),
            Dimension::Cardinality => serde_json::to_value(self.cardinality),
            Dimension::Explicitness => serde_json::to_value(self.explicitness),
            Dimension::Constrained => serde_json::to_value(self.constrained),
            Dimension::Representation => serde_json::to_value(self.representation),
            Dimension::StateUnknown => serde_json::to_value(self.state_unknown),
        };
        v.expect("in-memory serialization cannot fail")
    }

    /// Parses a strict profile document.
    pub fn parse(text: &str) -> Result<Self, ProfileError> {
        let value = parse_json(text)?;
        let mut issues = Issues::default();
        let profile = Self::from_json_value(&value, "", &mut issues);
        issues.into_result(profile).map_err(ProfileError::Schema)
    }
}

/// Reads a set of functionality names; duplicates are reported.
pub fn read_functionalities(
    v: &Value,
    path: &str,
    issues: &mut Issues,
) -> Option<FunctionalitySet> {
    let items = as_array(v, path, issues)?;
    let mut set = FunctionalitySet::EMPTY;
    let mut ok = true;
    for (i, item) in items.iter().enumerate() {
        let p = index_path(path, i);
        match as_enum::<Functionality>(item, &p, issues) {
            Some(f) => {
                if !set.insert(f) {
                    issues.push(IssueCode::DuplicateName, p, format!("`{f}` listed twice"));
                }
            }
            None => ok = false,
        }
    }
    ok.then_some(set)
}

/// A profile with any subset of dimensions fixed. Used for design locks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct PartialProfile {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub functionalities: Option<FunctionalitySet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resettability: Option<Resettability>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub observability: Option<Observability>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<Cardinality>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explicitness: Option<Explicitness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constrained: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub representation: Option<Representation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state_unknown: Option<bool>,
}

impl PartialProfile {
    /// Locks every dimension of `profile`.
    pub fn from_profile(p: &CharacteristicProfile) -> Self {
        PartialProfile {
            domain: Some(p.domain),
            functionalities: Some(p.functionalities),
            resettability: Some(p.resettability),
            observability: Some(p.observability),
            cardinality: Some(p.cardinality),
            explicitness: Some(p.explicitness),
            constrained: Some(p.constrained),
            representation: Some(p.representation),
            state_unknown: Some(p.state_unknown),
        }
    }

    pub fn is_locked(&self, dim: Dimension) -> bool {
        match dim {
            Dimension::Functionalities => self.functionalities.is_some(),
            Dimension::Resettability => self.resettability.is_some(),
            Dimension::Observability => self.observability.is_some(),
            Dimension::Cardinality => self.cardinality.is_some(),
            Dimension::Explicitness => self.explicitness.is_some(),
            Dimension::Constrained => self.constrained.is_some(),
            Dimension::Representation => self.representation.is_some(),
            Dimension::StateUnknown => self.state_unknown.is_some(),
        }
    }

    pub fn unlock(&mut self, dim: Dimension) {
        match dim {
            Dimension::Functionalities => self.functionalities = None,
            Dimension::Resettability => self.resettability = None,
            Dimension::Observability => self.observability = None,
            Dimension::Cardinality => self.cardinality = None,
            Dimension::Explicitness => self.explicitness = None,
            Dimension::Constrained => self.constrained = None,
            Dimension::Representation => self.representation = None,
            Dimension::StateUnknown => self.state_unknown = None,
        }
    }

    pub fn locked_dimensions(&self) -> Vec<Dimension> {
        Dimension::ALL
            .into_iter()
            .filter(|d| self.is_locked(*d))
            .collect()
    }

    /// Truth value of `atom` if the dimension it reads is locked.
    pub fn eval(&self, atom: Atom) -> Option<bool> {
        let mut probe = self.candidates();
        if probe.dimension_len(atom.dimension()) != 1 {
            return None;
        }
        probe.domain = Domain::Unplugged;
        probe.first().map(|p| crate::catalog::eval_atom(&p, atom))
    }

    pub fn matches(&self, p: &CharacteristicProfile) -> bool {
        self.domain.is_none_or(|v| v == p.domain)
            && self.functionalities.is_none_or(|v| v == p.functionalities)
            && self.resettability.is_none_or(|v| v == p.resettability)
            && self.observability.is_none_or(|v| v == p.observability)
            && self.cardinality.is_none_or(|v| v == p.cardinality)
            && self.explicitness.is_none_or(|v| v == p.explicitness)
            && self.constrained.is_none_or(|v| v == p.constrained)
            && self.representation.is_none_or(|v| v == p.representation)
            && self.state_unknown.is_none_or(|v| v == p.state_unknown)
    }

    /// The profile space restricted to the locked values.
    ///
    /// The domain is not a rule-relevant dimension and is never enumerated:
    /// candidates carry the locked domain, or `unplugged` when it is free.
    pub fn candidates(&self) -> ProfileSpace {
        fn pick<T: Copy>(locked: Option<T>, all: &[T]) -> Vec<T> {
            locked.map_or_else(|| all.to_vec(), |v| vec![v])
        }
        ProfileSpace {
            domain: self.domain.unwrap_or(Domain::Unplugged),
            functionalities: self
                .functionalities
                .map_or_else(|| FunctionalitySet::all_subsets().collect(), |v| vec![v]),
            resettability: pick(self.resettability, Resettability::ALL),
            observability: pick(self.observability, Observability::ALL),
            cardinality: pick(self.cardinality, Cardinality::ALL),
            explicitness: pick(self.explicitness, Explicitness::ALL),
            constrained: pick(self.constrained, &[false, true]),
            representation: pick(self.representation, Representation::ALL),
            state_unknown: pick(self.state_unknown, &[false, true]),
        }
    }

    /// Sets one dimension from `dim=value` style text. Functionalities take a
    /// comma-separated list (possibly empty).
    pub fn set_text(&mut self, dim: &str, value: &str) -> Result<(), String> {
        fn parse_bool(value: &str) -> Result<bool, String> {
            match value {
                "true" => Ok(true),
                "false" => Ok(false),
                other => Err(format!("`{other}` is not true or false")),
            }
        }
        match dim {
            "domain" => self.domain = Some(value.parse().map_err(|e| format!("{e}"))?),
            "functionalities" => {
                let mut set = FunctionalitySet::EMPTY;
                for name in value.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                    set.insert(name.parse::<Functionality>().map_err(|e| format!("{e}"))?);
                }
                self.functionalities = Some(set);
            }
            "resettability" => {
                self.resettability = Some(value.parse().map_err(|e| format!("{e}"))?)
            }
            "observability" => {
                self.observability = Some(value.parse().map_err(|e| format!("{e}"))?)
            }
            "cardinality" => self.cardinality = Some(value.parse().map_err(|e| format!("{e}"))?),
            "explicitness" => self.explicitness = Some(value.parse().map_err(|e| format!("{e}"))?),
            "constrained" => self.constrained = Some(parse_bool(value)?),
            "representation" => {
                self.representation = Some(value.parse().map_err(|e| format!("{e}"))?)
            }
            "state_unknown" => self.state_unknown = Some(parse_bool(value)?),
            other => return Err(format!("unknown dimension `{other}`")),
        }
        Ok(())
    }

    pub fn from_json_value(v: &Value, path: &str, issues: &mut Issues) -> Option<Self> {
        let mut r = ObjectReader::new(v, path, issues)?;
        let mut out = PartialProfile::default();
        let mut ok = true;
        macro_rules! field {
            ($key:literal, $slot:ident, enum) => {
                if let Some((v, p)) = r.optional($key) {
                    out.$slot = as_enum(v, &p, issues);
                    ok &= out.$slot.is_some();
                }
            };
            ($key:literal, $slot:ident, bool) => {
                if let Some((v, p)) = r.optional($key) {
                    out.$slot = as_bool(v, &p, issues);
                    ok &= out.$slot.is_some();
                }
            };
        }
        field!("domain", domain, enum);
        if let Some((v, p)) = r.optional("functionalities") {
            out.functionalities = read_functionalities(v, &p, issues);
            ok &= out.functionalities.is_some();
        }
        field!("resettability", resettability, enum);
        field!("observability", observability, enum);
        field!("cardinality", cardinality, enum);
        field!("explicitness", explicitness, enum);
        field!("constrained", constrained, bool);
        field!("representation", representation, enum);
        field!("state_unknown", state_unknown, bool);
        r.finish(issues);
        ok.then_some(out)
    }
}

/// Cartesian product of per-dimension value lists.
#[derive(Debug, Clone)]
pub struct ProfileSpace {
    pub domain: Domain,
    pub functionalities: Vec<FunctionalitySet>,
    pub resettability: Vec<Resettability>,
    pub observability: Vec<Observability>,
    pub cardinality: Vec<Cardinality>,
    pub explicitness: Vec<Explicitness>,
    pub constrained: Vec<bool>,
    pub representation: Vec<Representation>,
    pub state_unknown: Vec<bool>,
}

impl ProfileSpace {
    pub fn full(domain: Domain) -> Self {
        let mut space = PartialProfile::default().candidates();
        space.domain = domain;
        space
    }

    fn dimension_len(&self, dim: Dimension) -> usize {
        match dim {
            Dimension::Functionalities => self.functionalities.len(),
            Dimension::Resettability => self.resettability.len(),
            Dimension::Observability => self.observability.len(),
            Dimension::Cardinality => self.cardinality.len(),
            Dimension::Explicitness => self.explicitness.len(),
            Dimension::Constrained => self.constrained.len(),
            Dimension::Representation => self.representation.len(),
            Dimension::StateUnknown => self.state_unknown.len(),
        }
    }

    pub fn len(&self) -> usize {
        Dimension::ALL
            .iter()
            .map(|d| self.dimension_len(*d))
            .product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn first(&self) -> Option<CharacteristicProfile> {
        self.iter().next()
    }

    pub fn iter(&self) -> impl Iterator<Item = CharacteristicProfile> + '_ {
        let domain = self.domain;
        self.functionalities
            .iter()
            .flat_map(move |&functionalities| {
                self.resettability.iter().flat_map(move |&resettability| {
                    self.observability.iter().flat_map(move |&observability| {
                        self.cardinality.iter().flat_map(move |&cardinality| {
                            self.explicitness.iter().flat_map(move |&explicitness| {
                                self.constrained.iter().flat_map(move |&constrained| {
                                    self.representation.iter().flat_map(move |&representation| {
                                        self.state_unknown.iter().map(move |&state_unknown| {
                                            CharacteristicProfile {
                                                domain,
                                                functionalities,
                                                resettability,
                                                observability,
                                                cardinality,
                                                explicitness,
                                                constrained,
                                                representation,
                                                state_unknown,
                                            }
                                        })
                                    })
                                })
                            })
                        })
                    })
                })
            })
    }
}
