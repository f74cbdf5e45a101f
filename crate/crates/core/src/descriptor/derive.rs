use super::{
    AgentKind, Descriptor, DescriptorError, ElementCount, ElementRole, EnvironmentKind, TaskSpec,
    TaskType,
};
use crate::profile::CharacteristicProfile;
use crate::vocab::{Cardinality, Domain, Explicitness, Observability};

/// Domain implied by the agent and environment kinds, if it is one of the three
/// named domains.
pub fn derive_domain(
    agent: AgentKind,
    environment: EnvironmentKind,
) -> Result<Domain, DescriptorError> {
    match (agent, environment) {
        (AgentKind::Human, EnvironmentKind::Physical) => Ok(Domain::Unplugged),
        (AgentKind::Robot, EnvironmentKind::Physical) => Ok(Domain::Robotic),
        (AgentKind::Virtual, EnvironmentKind::Virtual) => Ok(Domain::Virtual),
        (agent, environment) => Err(DescriptorError::UnderivableDomain { agent, environment }),
    }
}

fn derive_cardinality(task: &TaskSpec) -> Cardinality {
    let mut elements = task.elements().map(|(_, e)| e);
    if elements.all(|e| e.count == ElementCount::One) {
        Cardinality::OneToOne
    } else if task
        .elements()
        .any(|(_, e)| e.is_to_find() && e.count == ElementCount::Many)
    {
        Cardinality::ManyToMany
    } else {
        Cardinality::ManyToOne
    }
}

/// Resolves a descriptor into the profile the analyzer reads.
///
/// A declared cardinality overrides the derived one. Observability is total
/// whenever the problem solver is its own agent.
pub fn derive_characteristics(d: &Descriptor) -> Result<CharacteristicProfile, DescriptorError> {
    let c = &d.characteristics;
    let domain = derive_domain(d.components.agent.kind, d.components.environment.kind)?;
    let task = &d.task;
    let explicit = task
        .elements()
        .filter(|(_, e)| !e.is_to_find())
        .all(|(_, e)| e.explicitness != Some(Explicitness::Implicit));
    let constrained = task
        .elements()
        .any(|(_, e)| e.is_to_find() && e.constrained == Some(true));
    let state_unknown = task.initial_state.is_to_find() || task.final_state.is_to_find();
    let observability = if d.components.problem_solver.is_agent {
        Observability::Total
    } else {
        c.observability
    };
    Ok(CharacteristicProfile {
        domain,
        functionalities: c.functionalities,
        resettability: c.resettability,
        observability,
        cardinality: c.cardinality.unwrap_or_else(|| derive_cardinality(task)),
        explicitness: if explicit {
            Explicitness::Explicit
        } else {
            Explicitness::Implicit
        },
        constrained,
        representation: c.representation,
        state_unknown,
    })
}

pub fn classify_task(t: &TaskSpec) -> Result<TaskType, DescriptorError> {
    use ElementRole::*;
    match t.objectives().as_slice() {
        [InitialState] => Ok(TaskType::FindInitialState),
        [Algorithm] => Ok(TaskType::FindAlgorithm),
        [FinalState] => Ok(TaskType::FindFinalState),
        [Algorithm, FinalState] => Ok(TaskType::CreationAct),
        [InitialState, FinalState] => Ok(TaskType::ApplicationAct),
        [InitialState, Algorithm] => Ok(TaskType::ProjectAct),
        other => Err(DescriptorError::UnsupportedObjectiveSet(other.len())),
    }
}
