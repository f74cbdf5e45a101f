//! Independent reference implementations for tests. Nothing here calls the
//! engine's atom evaluation, rule loading or profile enumeration: profiles are
//! plain strings, rules are read straight from the JSON text and every clause
//! is checked by hand.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use ctprof_core::profile::CharacteristicProfile;
use ctprof_core::{Domain, FunctionalitySet};
use proptest::prelude::*;
use serde_json::Value;

pub const FUNCTIONALITIES: [&str; 8] = [
    "variables",
    "operators",
    "sequences",
    "repetitions",
    "conditionals",
    "functions",
    "parallelism",
    "events",
];
pub const RESETTABILITY: [&str; 3] = ["direct", "indirect", "none"];
pub const OBSERVABILITY: [&str; 3] = ["total", "partial", "none"];
pub const CARDINALITY: [&str; 3] = ["one_to_one", "many_to_one", "many_to_many"];
pub const EXPLICITNESS: [&str; 2] = ["explicit", "implicit"];
pub const REPRESENTATION: [&str; 3] = ["manifest_written", "manifest_non_written", "latent"];

pub const LEAVES: [&str; 18] = [
    "data_collection",
    "pattern_recognition",
    "decomposition",
    "abstraction",
    "data_representation",
    "variables",
    "operators",
    "sequences",
    "repetitions",
    "conditionals",
    "functions",
    "parallelism",
    "events",
    "algorithm_debugging",
    "system_state_verification",
    "constraints_validation",
    "optimisation",
    "generalisation",
];

/// A profile as plain values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Flat {
    pub funcs: Vec<&'static str>,
    pub res: &'static str,
    pub obs: &'static str,
    pub card: &'static str,
    pub expl: &'static str,
    pub constrained: bool,
    pub rep: &'static str,
    pub state_unknown: bool,
}

impl Flat {
    pub fn to_profile(&self, domain: Domain) -> CharacteristicProfile {
        let mut functionalities = FunctionalitySet::EMPTY;
        for f in &self.funcs {
            functionalities.insert(f.parse().unwrap());
        }
        CharacteristicProfile {
            domain,
            functionalities,
            resettability: self.res.parse().unwrap(),
            observability: self.obs.parse().unwrap(),
            cardinality: self.card.parse().unwrap(),
            explicitness: self.expl.parse().unwrap(),
            constrained: self.constrained,
            representation: self.rep.parse().unwrap(),
            state_unknown: self.state_unknown,
        }
    }

    pub fn from_profile(p: &CharacteristicProfile) -> Flat {
        let pick = |all: &[&'static str], s: String| *all.iter().find(|v| **v == s).unwrap();
        Flat {
            funcs: FUNCTIONALITIES
                .iter()
                .copied()
                .filter(|f| p.functionalities.contains(f.parse().unwrap()))
                .collect(),
            res: pick(&RESETTABILITY, p.resettability.to_string()),
            obs: pick(&OBSERVABILITY, p.observability.to_string()),
            card: pick(&CARDINALITY, p.cardinality.to_string()),
            expl: pick(&EXPLICITNESS, p.explicitness.to_string()),
            constrained: p.constrained,
            rep: pick(&REPRESENTATION, p.representation.to_string()),
            state_unknown: p.state_unknown,
        }
    }
}

/// Every combination of rule-relevant values, built with nested loops.
pub fn all_flats() -> Vec<Flat> {
    let mut out = Vec::with_capacity(165_888);
    for mask in 0u32..256 {
        let funcs: Vec<&'static str> = FUNCTIONALITIES
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, f)| *f)
            .collect();
        for res in RESETTABILITY {
            for obs in OBSERVABILITY {
                for card in CARDINALITY {
                    for expl in EXPLICITNESS {
                        for constrained in [false, true] {
                            for rep in REPRESENTATION {
                                for state_unknown in [false, true] {
                                    out.push(Flat {
                                        funcs: funcs.clone(),
                                        res,
                                        obs,
                                        card,
                                        expl,
                                        constrained,
                                        rep,
                                        state_unknown,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

/// Truth of an atom written as text.
pub fn holds(p: &Flat, atom: &str) -> bool {
    match atom {
        "resettable" => p.res == "direct" || p.res == "indirect",
        "observable" => p.obs == "total" || p.obs == "partial",
        "manifest" => p.rep == "manifest_written" || p.rep == "manifest_non_written",
        "state_unknown" => p.state_unknown,
        "rich_toolset" => p.funcs.len() >= 5,
        _ => {
            let (family, value) = atom
                .split_once(':')
                .unwrap_or_else(|| panic!("unknown atom {atom}"));
            match family {
                "functionality" => p.funcs.contains(&value),
                "resettability" => p.res == value,
                "observability" => p.obs == value,
                "cardinality" => p.card == value,
                "explicitness" => p.expl == value,
                "constraints" => {
                    value
                        == if p.constrained {
                            "constrained"
                        } else {
                            "unconstrained"
                        }
                }
                "representation" => p.rep == value,
                _ => panic!("unknown atom {atom}"),
            }
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct OracleRule {
    pub required: Vec<String>,
    pub required_any: Vec<Vec<String>>,
    pub inhibitors: Vec<String>,
    pub supporters: Vec<String>,
}

fn strings(v: &Value) -> Vec<String> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap().to_string())
        .collect()
}

/// Rules read directly from ruleset JSON text.
pub fn oracle_rules(text: &str) -> BTreeMap<String, OracleRule> {
    let doc: Value = serde_json::from_str(text).unwrap();
    doc["rules"]
        .as_object()
        .unwrap()
        .iter()
        .map(|(leaf, r)| {
            let rule = OracleRule {
                required: strings(&r["required"]),
                required_any: r["required_any"]
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(strings)
                    .collect(),
                inhibitors: strings(&r["inhibitors"]),
                supporters: strings(&r["supporters"]),
            };
            (leaf.clone(), rule)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub activable: bool,
    pub missing: BTreeSet<String>,
    pub missing_groups: BTreeSet<Vec<String>>,
    pub inhibited: BTreeSet<String>,
    pub supporters: BTreeSet<String>,
}

pub fn oracle_eval(p: &Flat, rule: &OracleRule) -> OracleResult {
    let missing: BTreeSet<String> = rule
        .required
        .iter()
        .filter(|a| !holds(p, a))
        .cloned()
        .collect();
    let missing_groups: BTreeSet<Vec<String>> = rule
        .required_any
        .iter()
        .filter(|g| !g.iter().any(|a| holds(p, a)))
        .map(|g| {
            let mut g = g.clone();
            g.sort();
            g
        })
        .collect();
    let inhibited: BTreeSet<String> = rule
        .inhibitors
        .iter()
        .filter(|a| holds(p, a))
        .cloned()
        .collect();
    let supporters = rule
        .supporters
        .iter()
        .filter(|a| holds(p, a))
        .cloned()
        .collect();
    OracleResult {
        activable: missing.is_empty() && missing_groups.is_empty() && inhibited.is_empty(),
        missing,
        missing_groups,
        inhibited,
        supporters,
    }
}

/// Brute-force design: filter the full space by hand and rank by support,
/// then functionality count, then compact profile JSON.
#[derive(Debug, Clone)]
pub struct OracleQuery {
    pub develop: Vec<String>,
    pub avoid: Vec<String>,
    pub locks: Vec<(String, String)>,
    pub max_solutions: usize,
}

fn lock_holds(p: &Flat, dim: &str, value: &str) -> bool {
    match dim {
        "functionalities" => {
            let want: BTreeSet<&str> = value.split(',').filter(|s| !s.is_empty()).collect();
            let have: BTreeSet<&str> = p.funcs.iter().copied().collect();
            want == have
        }
        "resettability" => p.res == value,
        "observability" => p.obs == value,
        "cardinality" => p.card == value,
        "explicitness" => p.expl == value,
        "constrained" => p.constrained.to_string() == value,
        "representation" => p.rep == value,
        "state_unknown" => p.state_unknown.to_string() == value,
        "domain" => true,
        _ => panic!("unknown dimension {dim}"),
    }
}

pub fn oracle_design(
    q: &OracleQuery,
    flats: &[Flat],
    rules: &BTreeMap<String, OracleRule>,
) -> Vec<(CharacteristicProfile, usize)> {
    let domain = q
        .locks
        .iter()
        .find(|(d, _)| d == "domain")
        .map(|(_, v)| v.parse().unwrap())
        .unwrap_or(Domain::Unplugged);
    let mut out: Vec<(CharacteristicProfile, usize)> = flats
        .iter()
        .filter(|p| q.locks.iter().all(|(d, v)| lock_holds(p, d, v)))
        .filter(|p| {
            q.develop
                .iter()
                .all(|c| oracle_eval(p, &rules[c]).activable)
        })
        .filter(|p| q.avoid.iter().all(|c| !oracle_eval(p, &rules[c]).activable))
        .map(|p| {
            let support = q
                .develop
                .iter()
                .map(|c| oracle_eval(p, &rules[c]).supporters.len())
                .sum();
            (p.to_profile(domain), support)
        })
        .collect();
    out.sort_by_cached_key(|(p, s)| {
        (
            std::cmp::Reverse(*s),
            p.functionalities.len(),
            serde_json::to_string(p).unwrap(),
        )
    });
    out.truncate(q.max_solutions);
    out
}

/// Random design queries over the oracle's own value lists.
pub fn query_strategy() -> impl Strategy<Value = OracleQuery> {
    let dims: Vec<(&'static str, Vec<String>)> = vec![
        (
            "domain",
            ["unplugged", "robotic", "virtual"]
                .map(String::from)
                .to_vec(),
        ),
        ("resettability", RESETTABILITY.map(String::from).to_vec()),
        ("observability", OBSERVABILITY.map(String::from).to_vec()),
        ("cardinality", CARDINALITY.map(String::from).to_vec()),
        ("explicitness", EXPLICITNESS.map(String::from).to_vec()),
        ("constrained", vec!["false".into(), "true".into()]),
        ("representation", REPRESENTATION.map(String::from).to_vec()),
        ("state_unknown", vec!["false".into(), "true".into()]),
    ];
    let locks = dims
        .into_iter()
        .map(|(d, values)| {
            proptest::option::weighted(0.3, proptest::sample::select(values))
                .prop_map(move |v| v.map(|v| (d.to_string(), v)))
        })
        .collect::<Vec<_>>();
    let func_lock = proptest::option::weighted(
        0.2,
        proptest::sample::subsequence(FUNCTIONALITIES.to_vec(), 0..=8),
    )
    .prop_map(|v| v.map(|fs| ("functionalities".to_string(), fs.join(","))));
    (
        proptest::sample::subsequence(LEAVES.to_vec(), 1..=3),
        proptest::sample::subsequence(LEAVES.to_vec(), 0..=2),
        locks,
        func_lock,
        1usize..40,
    )
        .prop_map(|(develop, avoid, locks, func_lock, max_solutions)| {
            let develop: Vec<String> = develop.into_iter().map(String::from).collect();
            let avoid = avoid
                .into_iter()
                .map(String::from)
                .filter(|a| !develop.contains(a))
                .collect();
            let locks = locks.into_iter().flatten().chain(func_lock).collect();
            OracleQuery {
                develop,
                avoid,
                locks,
                max_solutions,
            }
        })
}

/// Published characteristics percentages: (domain, row, percent).
pub const REFERENCE_CHARACTERISTICS: &[(&str, &str, u32)] = &[
    ("unplugged", "resettable", 43),
    ("unplugged", "observable", 57),
    ("unplugged", "cardinality:one_to_one", 100),
    ("unplugged", "explicitness:explicit", 71),
    ("unplugged", "explicitness:implicit", 29),
    ("unplugged", "constraints:unconstrained", 57),
    ("unplugged", "constraints:constrained", 43),
    ("unplugged", "representation:manifest_written", 72),
    ("unplugged", "representation:manifest_non_written", 14),
    ("unplugged", "representation:latent", 14),
    ("robotic", "resettable", 40),
    ("robotic", "observable", 100),
    ("robotic", "cardinality:one_to_one", 100),
    ("robotic", "explicitness:explicit", 80),
    ("robotic", "explicitness:implicit", 20),
    ("robotic", "constraints:unconstrained", 100),
    ("robotic", "representation:manifest_written", 100),
    ("virtual", "resettable", 100),
    ("virtual", "observable", 100),
    ("virtual", "cardinality:one_to_one", 75),
    ("virtual", "cardinality:many_to_one", 25),
    ("virtual", "explicitness:explicit", 100),
    ("virtual", "constraints:unconstrained", 100),
    ("virtual", "representation:manifest_written", 67),
    ("virtual", "representation:latent", 33),
];

/// Published competency percentages per domain, in [`LEAVES`] order.
pub const REFERENCE_COMPETENCIES: [(&str, [u32; 18]); 3] = [
    (
        "unplugged",
        [
            100, 100, 100, 100, 100, 100, 100, 100, 100, 50, 100, 17, 0, 50, 33, 50, 50, 50,
        ],
    ),
    (
        "robotic",
        [
            100, 100, 100, 100, 100, 100, 100, 100, 60, 60, 100, 40, 80, 40, 40, 0, 40, 40,
        ],
    ),
    (
        "virtual",
        [
            100, 100, 100, 100, 100, 100, 100, 100, 67, 33, 100, 0, 33, 67, 67, 0, 100, 100,
        ],
    ),
];

/// Counting mode that matches each domain's published competency column.
pub fn reference_collapse(domain: &str) -> bool {
    domain == "virtual"
}

pub fn reference_competency(domain: &str, leaf: &str) -> u32 {
    let (_, row) = REFERENCE_COMPETENCIES
        .iter()
        .find(|(d, _)| *d == domain)
        .unwrap();
    row[LEAVES.iter().position(|l| *l == leaf).unwrap()]
}

/// Integer percent rounded half away from zero, via floating point.
pub fn oracle_percent(num: usize, den: usize) -> u32 {
    (100.0 * num as f64 / den as f64).round() as u32
}
