//! Fixed vocabularies: the competency hierarchy and the atom language rules
//! are written in.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::profile::CharacteristicProfile;
use crate::vocab::{
    vocab_enum, Cardinality, Constraint, Explicitness, Functionality, Observability,
    Representation, Resettability, UnknownVariant,
};

/// Minimum number of functionalities for the `rich_toolset` alias.
pub const RICH_TOOLSET_THRESHOLD: usize = 5;

vocab_enum! {
    /// A leaf competency, declared in tree order.
    pub enum Competency {
        DataCollection => "data_collection",
        PatternRecognition => "pattern_recognition",
        Decomposition => "decomposition",
        Abstraction => "abstraction",
        DataRepresentation => "data_representation",
        Variables => "variables",
        Operators => "operators",
        Sequences => "sequences",
        Repetitions => "repetitions",
        Conditionals => "conditionals",
        Functions => "functions",
        Parallelism => "parallelism",
        Events => "events",
        AlgorithmDebugging => "algorithm_debugging",
        SystemStateVerification => "system_state_verification",
        ConstraintsValidation => "constraints_validation",
        Optimisation => "optimisation",
        Generalisation => "generalisation",
    }
}

vocab_enum! {
    /// The three top-level competency groups.
    pub enum CompetencyRoot {
        ProblemSetting => "problem_setting",
        Algorithm => "algorithm",
        Assessment => "assessment",
    }
}

impl Competency {
    pub fn root(self) -> CompetencyRoot {
        use Competency::*;
        match self {
            DataCollection | PatternRecognition | Decomposition | Abstraction
            | DataRepresentation => CompetencyRoot::ProblemSetting,
            Variables | Operators | Sequences | Repetitions | Conditionals | Functions
            | Parallelism | Events => CompetencyRoot::Algorithm,
            AlgorithmDebugging
            | SystemStateVerification
            | ConstraintsValidation
            | Optimisation
            | Generalisation => CompetencyRoot::Assessment,
        }
    }

    /// The functionality an algorithm leaf is named after.
    pub fn functionality(self) -> Option<Functionality> {
        use Competency::*;
        Some(match self {
            Variables => Functionality::Variables,
            Operators => Functionality::Operators,
            Sequences => Functionality::Sequences,
            Repetitions => Functionality::Repetitions,
            Conditionals => Functionality::Conditionals,
            Functions => Functionality::Functions,
            Parallelism => Functionality::Parallelism,
            Events => Functionality::Events,
            _ => return None,
        })
    }

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompetencyNode {
    pub id: &'static str,
    pub label: &'static str,
    pub parent: Option<&'static str>,
    pub definition: &'static str,
}

const fn node(
    id: &'static str,
    label: &'static str,
    parent: Option<&'static str>,
    definition: &'static str,
) -> CompetencyNode {
    CompetencyNode {
        id,
        label,
        parent,
        definition,
    }
}

const NODES: &[CompetencyNode] = &[
    node(
        "problem_setting",
        "Problem setting",
        None,
        "Recognise, understand, reformulate or model a CTP and its components so that its solution can be computed.",
    ),
    node(
        "analysing",
        "Analysing",
        Some("problem_setting"),
        "Collect, examine and interpret data about the system: environment descriptors and agent actions.",
    ),
    node("data_collection", "Data collection", Some("analysing"), "Gather details about the system."),
    node(
        "pattern_recognition",
        "Pattern recognition",
        Some("analysing"),
        "Identify similarities, trends, ideas and structures within the system.",
    ),
    node(
        "modelling",
        "Modelling",
        Some("problem_setting"),
        "Restructure, clean and update knowledge about the system.",
    ),
    node(
        "decomposition",
        "Decomposition",
        Some("modelling"),
        "Divide the original task into sub-tasks that are easier to be solved.",
    ),
    node(
        "abstraction",
        "Abstraction",
        Some("modelling"),
        "Simplify the original task, focus on key concepts and omit unimportant ones.",
    ),
    node(
        "data_representation",
        "Data representation",
        Some("problem_setting"),
        "Illustrate or communicate information about the system and the task.",
    ),
    node(
        "algorithm",
        "Algorithm",
        None,
        "Conceive and represent a set of agent's actions that should be executed by a human, artificial or virtual agent to solve the task.",
    ),
    node(
        "variables",
        "Variables",
        Some("algorithm"),
        "Entity that stores values about the system or intermediate data.",
    ),
    node(
        "operators",
        "Operators",
        Some("algorithm"),
        "Mathematical, logical or comparison operators, or specific commands or actions.",
    ),
    node(
        "control_structures",
        "Control structures",
        Some("algorithm"),
        "Statements that define the agent actions flow's direction, such as sequential, repetitive, or conditional.",
    ),
    node("sequences", "Sequences", Some("control_structures"), "Linear succession of agent actions."),
    node("repetitions", "Repetitions", Some("control_structures"), "Iterative agent actions"),
    node(
        "conditionals",
        "Conditionals",
        Some("control_structures"),
        "Agent actions dependent on conditions.",
    ),
    node(
        "functions",
        "Functions",
        Some("algorithm"),
        "Set of reusable agent actions which produce a result for a specific sub-task.",
    ),
    node("parallelism", "Parallelism", Some("algorithm"), "Simultaneous agent actions."),
    node(
        "events",
        "Events",
        Some("algorithm"),
        "Variations in the environment descriptors that trigger the execution of agent actions.",
    ),
    node(
        "assessment",
        "Assessment",
        None,
        "Evaluate the quality and validity of the solution in relation to the original task.",
    ),
    node("correctness", "Correctness", Some("assessment"), "Assess whether the task solution is correct."),
    node(
        "algorithm_debugging",
        "Algorithm debugging",
        Some("correctness"),
        "Evaluate whether the algorithm is correct, identifying errors and fixing bugs that prevent it from functioning correctly.",
    ),
    node(
        "system_state_verification",
        "System state verification",
        Some("correctness"),
        "Evaluate whether the system is in the expected state, detecting and solving potential issues.",
    ),
    node(
        "constraints_validation",
        "Constraints validation",
        Some("correctness"),
        "Evaluate whether the solution satisfies the constraints established for the system and the algorithm, looking for and correcting eventual problems.",
    ),
    node(
        "effectiveness",
        "Effectiveness",
        Some("assessment"),
        "Assess how effective is the task solution.",
    ),
    node(
        "optimisation",
        "Optimisation",
        Some("effectiveness"),
        "Evaluate whether the solution meets the standards in a timely and resource-efficient manner, and eventually identify ways to optimise the performance.",
    ),
    node(
        "generalisation",
        "Generalisation",
        Some("effectiveness"),
        "Formulate the task solution in such a way that can be reused or applied to different situations.",
    ),
];

/// The competency hierarchy: three roots, five intermediate groups and
/// eighteen leaves.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompetencyTree {
    pub nodes: Vec<CompetencyNode>,
}

impl CompetencyTree {
    pub fn node(&self, id: &str) -> Option<&CompetencyNode> {
        self.nodes.iter().find(|n| n.id == id)
    }

    pub fn roots(&self) -> impl Iterator<Item = &CompetencyNode> {
        self.nodes.iter().filter(|n| n.parent.is_none())
    }

    pub fn children<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a CompetencyNode> {
        self.nodes.iter().filter(move |n| n.parent == Some(id))
    }

    /// Nodes without children, in tree order.
    pub fn leaves(&self) -> impl Iterator<Item = &CompetencyNode> {
        self.nodes
            .iter()
            .filter(|n| self.children(n.id).next().is_none())
    }

    /// Chain of ancestors from the node's parent up to its root.
    pub fn ancestors<'a>(&'a self, id: &str) -> Vec<&'a CompetencyNode> {
        let mut out = Vec::new();
        let mut current = self.node(id).and_then(|n| n.parent);
        while let Some(parent) = current {
            let Some(p) = self.node(parent) else { break };
            if out.iter().any(|seen: &&CompetencyNode| seen.id == p.id) {
                break;
            }
            out.push(p);
            current = p.parent;
        }
        out
    }
}

pub fn competency_tree() -> CompetencyTree {
    CompetencyTree {
        nodes: NODES.to_vec(),
    }
}

/// Family of mutually exclusive base atoms, one per profile dimension.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum AtomFamily {
    Resettability,
    Observability,
    Cardinality,
    Explicitness,
    Constraints,
    Representation,
}

impl AtomFamily {
    pub const EXCLUSIVE: [AtomFamily; 6] = [
        AtomFamily::Resettability,
        AtomFamily::Observability,
        AtomFamily::Cardinality,
        AtomFamily::Explicitness,
        AtomFamily::Constraints,
        AtomFamily::Representation,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AtomFamily::Resettability => "resettability",
            AtomFamily::Observability => "observability",
            AtomFamily::Cardinality => "cardinality",
            AtomFamily::Explicitness => "explicitness",
            AtomFamily::Constraints => "constraints",
            AtomFamily::Representation => "representation",
        }
    }

    pub fn atoms(self) -> Vec<Atom> {
        match self {
            AtomFamily::Resettability => Resettability::ALL
                .iter()
                .map(|v| Atom::Resettability(*v))
                .collect(),
            AtomFamily::Observability => Observability::ALL
                .iter()
                .map(|v| Atom::Observability(*v))
                .collect(),
            AtomFamily::Cardinality => Cardinality::ALL
                .iter()
                .map(|v| Atom::Cardinality(*v))
                .collect(),
            AtomFamily::Explicitness => Explicitness::ALL
                .iter()
                .map(|v| Atom::Explicitness(*v))
                .collect(),
            AtomFamily::Constraints => Constraint::ALL
                .iter()
                .map(|v| Atom::Constraints(*v))
                .collect(),
            AtomFamily::Representation => Representation::ALL
                .iter()
                .map(|v| Atom::Representation(*v))
                .collect(),
        }
    }
}

/// Profile dimension an atom reads.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Dimension {
    Functionalities,
    Resettability,
    Observability,
    Cardinality,
    Explicitness,
    Constrained,
    Representation,
    StateUnknown,
}

impl Dimension {
    pub const ALL: [Dimension; 8] = [
        Dimension::Functionalities,
        Dimension::Resettability,
        Dimension::Observability,
        Dimension::Cardinality,
        Dimension::Explicitness,
        Dimension::Constrained,
        Dimension::Representation,
        Dimension::StateUnknown,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Dimension::Functionalities => "functionalities",
            Dimension::Resettability => "resettability",
            Dimension::Observability => "observability",
            Dimension::Cardinality => "cardinality",
            Dimension::Explicitness => "explicitness",
            Dimension::Constrained => "constrained",
            Dimension::Representation => "representation",
            Dimension::StateUnknown => "state_unknown",
        }
    }
}

impl Serialize for Dimension {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

impl fmt::Display for Dimension {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A boolean predicate over a characteristic profile.
///
/// Base atoms mirror a stored profile value. The five aliases are derived:
/// `resettable` (direct or indirect), `observable` (total or partial),
/// `manifest` (written or non-written), `state_unknown` (an initial or final
/// state is to be found) and `rich_toolset` (at least
/// [`RICH_TOOLSET_THRESHOLD`] functionalities).
///
/// Atoms order by their textual name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Functionality(Functionality),
    Resettability(Resettability),
    Observability(Observability),
    Cardinality(Cardinality),
    Explicitness(Explicitness),
    Constraints(Constraint),
    Representation(Representation),
    Resettable,
    Observable,
    Manifest,
    StateUnknown,
    RichToolset,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown atom `{0}`")]
pub struct UnknownAtom(pub String);

impl Atom {
    pub const ALIASES: [Atom; 5] = [
        Atom::Resettable,
        Atom::Observable,
        Atom::Manifest,
        Atom::StateUnknown,
        Atom::RichToolset,
    ];

    pub fn name(self) -> &'static str {
        use Functionality as F;
        match self {
            Atom::Functionality(f) => match f {
                F::Variables => "functionality:variables",
                F::Operators => "functionality:operators",
                F::Sequences => "functionality:sequences",
                F::Repetitions => "functionality:repetitions",
                F::Conditionals => "functionality:conditionals",
                F::Functions => "functionality:functions",
                F::Parallelism => "functionality:parallelism",
                F::Events => "functionality:events",
            },
            Atom::Resettability(v) => match v {
                Resettability::Direct => "resettability:direct",
                Resettability::Indirect => "resettability:indirect",
                Resettability::None => "resettability:none",
            },
            Atom::Observability(v) => match v {
                Observability::Total => "observability:total",
                Observability::Partial => "observability:partial",
                Observability::None => "observability:none",
            },
            Atom::Cardinality(v) => match v {
                Cardinality::OneToOne => "cardinality:one_to_one",
                Cardinality::ManyToOne => "cardinality:many_to_one",
                Cardinality::ManyToMany => "cardinality:many_to_many",
            },
            Atom::Explicitness(v) => match v {
                Explicitness::Explicit => "explicitness:explicit",
                Explicitness::Implicit => "explicitness:implicit",
            },
            Atom::Constraints(v) => match v {
                Constraint::Constrained => "constraints:constrained",
                Constraint::Unconstrained => "constraints:unconstrained",
            },
            Atom::Representation(v) => match v {
                Representation::ManifestWritten => "representation:manifest_written",
                Representation::ManifestNonWritten => "representation:manifest_non_written",
                Representation::Latent => "representation:latent",
            },
            Atom::Resettable => "resettable",
            Atom::Observable => "observable",
            Atom::Manifest => "manifest",
            Atom::StateUnknown => "state_unknown",
            Atom::RichToolset => "rich_toolset",
        }
    }

    pub fn is_alias(self) -> bool {
        Atom::ALIASES.contains(&self)
    }

    /// Exclusive family of a base atom. Functionality atoms and aliases have none.
    pub fn family(self) -> Option<AtomFamily> {
        Some(match self {
            Atom::Resettability(_) => AtomFamily::Resettability,
            Atom::Observability(_) => AtomFamily::Observability,
            Atom::Cardinality(_) => AtomFamily::Cardinality,
            Atom::Explicitness(_) => AtomFamily::Explicitness,
            Atom::Constraints(_) => AtomFamily::Constraints,
            Atom::Representation(_) => AtomFamily::Representation,
            _ => return None,
        })
    }

    pub fn dimension(self) -> Dimension {
        match self {
            Atom::Functionality(_) | Atom::RichToolset => Dimension::Functionalities,
            Atom::Resettability(_) | Atom::Resettable => Dimension::Resettability,
            Atom::Observability(_) | Atom::Observable => Dimension::Observability,
            Atom::Cardinality(_) => Dimension::Cardinality,
            Atom::Explicitness(_) => Dimension::Explicitness,
            Atom::Constraints(_) => Dimension::Constrained,
            Atom::Representation(_) | Atom::Manifest => Dimension::Representation,
            Atom::StateUnknown => Dimension::StateUnknown,
        }
    }
}

impl PartialOrd for Atom {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Atom {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.name().cmp(other.name())
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Atom {
    type Err = UnknownAtom;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        atom_vocabulary()
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| UnknownAtom(s.to_string()))
    }
}

impl Serialize for Atom {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.name())
    }
}

/// The whole atom vocabulary: 8 functionality atoms, then the base atoms of
/// each exclusive family in declaration order, then the 5 aliases.
pub fn atom_vocabulary() -> Vec<Atom> {
    let mut atoms: Vec<Atom> = Functionality::ALL
        .iter()
        .map(|f| Atom::Functionality(*f))
        .collect();
    for family in AtomFamily::EXCLUSIVE {
        atoms.extend(family.atoms());
    }
    atoms.extend(Atom::ALIASES);
    atoms
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AtomInfo {
    pub name: &'static str,
    pub dimension: Dimension,
    pub family: Option<&'static str>,
    pub alias: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogDocument {
    pub competencies: Vec<CompetencyNode>,
    pub atoms: Vec<AtomInfo>,
}

/// The catalog as exported to clients: every tree node, then every atom.
pub fn catalog_document() -> CatalogDocument {
    CatalogDocument {
        competencies: competency_tree().nodes,
        atoms: atom_vocabulary()
            .into_iter()
            .map(|a| AtomInfo {
                name: a.name(),
                dimension: a.dimension(),
                family: a.family().map(AtomFamily::as_str),
                alias: a.is_alias(),
            })
            .collect(),
    }
}

/// Truth value of `atom` on `profile`.
pub fn eval_atom(profile: &CharacteristicProfile, atom: Atom) -> bool {
    match atom {
        Atom::Functionality(f) => profile.functionalities.contains(f),
        Atom::Resettability(v) => profile.resettability == v,
        Atom::Observability(v) => profile.observability == v,
        Atom::Cardinality(v) => profile.cardinality == v,
        Atom::Explicitness(v) => profile.explicitness == v,
        Atom::Constraints(v) => Constraint::from_flag(profile.constrained) == v,
        Atom::Representation(v) => profile.representation == v,
        Atom::Resettable => profile.resettability.is_resettable(),
        Atom::Observable => profile.observability.is_observable(),
        Atom::Manifest => profile.representation.is_manifest(),
        Atom::StateUnknown => profile.state_unknown,
        Atom::RichToolset => profile.functionalities.len() >= RICH_TOOLSET_THRESHOLD,
    }
}

/// [`eval_atom`] for an atom given by name.
pub fn eval_atom_named(profile: &CharacteristicProfile, atom: &str) -> Result<bool, UnknownAtom> {
    Ok(eval_atom(profile, atom.parse()?))
}

impl From<UnknownVariant> for UnknownAtom {
    fn from(e: UnknownVariant) -> Self {
        UnknownAtom(e.value)
    }
}
