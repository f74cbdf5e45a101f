//! Activity descriptors: the structured record of one problem, with its
//! components (problem solver, agent, environment), its task and the
//! characteristics declared by the author.
//!
//! Descriptor files are UTF-8 JSON with the `.ctp.json` extension. The
//! canonical form written by [`serialize_descriptor`] lists keys in schema
//! order, indents by two spaces, sorts every set lexicographically and ends
//! with a newline.

mod derive;
mod parse;
mod validate;

use std::collections::BTreeSet;

use serde::Serialize;

use crate::schema::{SyntaxError, ValidationIssue};
use crate::vocab::{
    vocab_enum, Cardinality, Domain, Explicitness, FunctionalitySet, Observability, Representation,
    Resettability,
};

pub use derive::{classify_task, derive_characteristics, derive_domain};
pub use parse::{descriptor_from_value, parse_descriptor};
pub use validate::validate_descriptor;

pub const DESCRIPTOR_EXTENSION: &str = ".ctp.json";

vocab_enum! {
    /// Artefact category of a problem-solver tool.
    pub enum ToolCategory {
        Embodied => "embodied",
        Symbolic => "symbolic",
        Formal => "formal",
    }
}

vocab_enum! {
    pub enum ToolRole {
        Interaction => "interaction",
        Reasoning => "reasoning",
    }
}

vocab_enum! {
    pub enum AgentKind {
        Human => "human",
        Robot => "robot",
        Virtual => "virtual",
    }
}

vocab_enum! {
    pub enum EnvironmentKind {
        Physical => "physical",
        Virtual => "virtual",
    }
}

vocab_enum! {
    pub enum ElementStatus {
        Given => "given",
        ToFind => "to_find",
    }
}

vocab_enum! {
    pub enum ElementCount {
        One => "one",
        Many => "many",
    }
}

vocab_enum! {
    /// The six task types, by which elements are to be found.
    pub enum TaskType {
        FindInitialState => "find_initial_state",
        FindAlgorithm => "find_algorithm",
        FindFinalState => "find_final_state",
        CreationAct => "creation_act",
        ApplicationAct => "application_act",
        ProjectAct => "project_act",
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Descriptor {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group: Option<String>,
    pub components: Components,
    pub task: TaskSpec,
    pub characteristics: DeclaredCharacteristics,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Components {
    pub problem_solver: ProblemSolver,
    pub agent: Agent,
    pub environment: Environment,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProblemSolver {
    pub tools: Vec<Tool>,
    pub is_agent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tool {
    pub name: String,
    pub category: ToolCategory,
    pub roles: BTreeSet<ToolRole>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Agent {
    pub kind: AgentKind,
    pub actions: Vec<Action>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Action {
    pub name: String,
    pub reversible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Environment {
    pub kind: EnvironmentKind,
    pub descriptors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TaskSpec {
    pub initial_state: TaskElement,
    pub algorithm: TaskElement,
    pub final_state: TaskElement,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct TaskElement {
    pub status: ElementStatus,
    pub count: ElementCount,
    /// Present only for given elements.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub explicitness: Option<Explicitness>,
    /// Present only for elements to be found.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constrained: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeclaredCharacteristics {
    pub functionalities: FunctionalitySet,
    pub resettability: Resettability,
    pub observability: Observability,
    pub representation: Representation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub domain: Option<Domain>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cardinality: Option<Cardinality>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ElementRole {
    InitialState,
    Algorithm,
    FinalState,
}

impl ElementRole {
    pub const ALL: [ElementRole; 3] = [
        ElementRole::InitialState,
        ElementRole::Algorithm,
        ElementRole::FinalState,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ElementRole::InitialState => "initial_state",
            ElementRole::Algorithm => "algorithm",
            ElementRole::FinalState => "final_state",
        }
    }
}

impl TaskElement {
    pub fn given(count: ElementCount, explicitness: Explicitness) -> Self {
        TaskElement {
            status: ElementStatus::Given,
            count,
            explicitness: Some(explicitness),
            constrained: None,
        }
    }

    pub fn to_find(count: ElementCount, constrained: bool) -> Self {
        TaskElement {
            status: ElementStatus::ToFind,
            count,
            explicitness: None,
            constrained: Some(constrained),
        }
    }

    pub fn is_to_find(&self) -> bool {
        self.status == ElementStatus::ToFind
    }
}

impl TaskSpec {
    pub fn element(&self, role: ElementRole) -> &TaskElement {
        match role {
            ElementRole::InitialState => &self.initial_state,
            ElementRole::Algorithm => &self.algorithm,
            ElementRole::FinalState => &self.final_state,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = (ElementRole, &TaskElement)> {
        ElementRole::ALL.into_iter().map(|r| (r, self.element(r)))
    }

    pub fn objectives(&self) -> Vec<ElementRole> {
        self.elements()
            .filter(|(_, e)| e.is_to_find())
            .map(|(r, _)| r)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DescriptorError {
    #[error(transparent)]
    Parse(#[from] SyntaxError),
    #[error("descriptor does not match the schema: {}", crate::schema::summarize_issues(.0))]
    Schema(Vec<ValidationIssue>),
    #[error("no problem domain for a {agent} agent in a {environment} environment")]
    UnderivableDomain {
        agent: AgentKind,
        environment: EnvironmentKind,
    },
    #[error("tasks must have one or two elements to find, found {0}")]
    UnsupportedObjectiveSet(usize),
}

/// Canonical JSON text of a descriptor.
pub fn serialize_descriptor(d: &Descriptor) -> String {
    crate::schema::to_canonical_json(d)
}
