use std::collections::BTreeSet;

use serde_json::Value;

use super::{
    Action, Agent, Components, DeclaredCharacteristics, Descriptor, DescriptorError, Environment,
    ProblemSolver, TaskElement, TaskSpec, Tool, ToolRole,
};
use crate::profile::read_functionalities;
use crate::schema::{
    as_array, as_enum, as_str, index_path, parse_json, IssueCode, Issues, ObjectReader,
};

/// Parses a descriptor document. Unknown keys, wrong types and
/// out-of-vocabulary strings are all reported together.
pub fn parse_descriptor(text: &str) -> Result<Descriptor, DescriptorError> {
    let value = parse_json(text)?;
    descriptor_from_value(&value).map_err(DescriptorError::Schema)
}

pub fn descriptor_from_value(
    value: &Value,
) -> Result<Descriptor, Vec<crate::schema::ValidationIssue>> {
    let mut issues = Issues::default();
    let d = read_descriptor(value, &mut issues);
    issues.into_result(d)
}

fn read_descriptor(v: &Value, issues: &mut Issues) -> Option<Descriptor> {
    let mut r = ObjectReader::new(v, "", issues)?;
    let name = r.req_str("name", issues);
    let group = match r.optional("group") {
        Some((v, p)) => as_str(v, &p, issues).map(|s| Some(s.to_string())),
        None => Some(None),
    };
    let components = r
        .required("components", issues)
        .and_then(|(v, p)| read_components(v, &p, issues));
    let task = r
        .required("task", issues)
        .and_then(|(v, p)| read_task(v, &p, issues));
    let characteristics = r
        .required("characteristics", issues)
        .and_then(|(v, p)| read_characteristics(v, &p, issues));
    r.finish(issues);
    Some(Descriptor {
        name: name?.to_string(),
        group: group?,
        components: components?,
        task: task?,
        characteristics: characteristics?,
    })
}

fn read_list<T>(
    v: &Value,
    path: &str,
    issues: &mut Issues,
    mut item: impl FnMut(&Value, &str, &mut Issues) -> Option<T>,
) -> Option<Vec<T>> {
    let items = as_array(v, path, issues)?;
    let mut out = Vec::with_capacity(items.len());
    let mut ok = true;
    for (i, x) in items.iter().enumerate() {
        match item(x, &index_path(path, i), issues) {
            Some(t) => out.push(t),
            None => ok = false,
        }
    }
    ok.then_some(out)
}

fn read_components(v: &Value, path: &str, issues: &mut Issues) -> Option<Components> {
    let mut r = ObjectReader::new(v, path, issues)?;
    let problem_solver = r
        .required("problem_solver", issues)
        .and_then(|(v, p)| read_problem_solver(v, &p, issues));
    let agent = r
        .required("agent", issues)
        .and_then(|(v, p)| read_agent(v, &p, issues));
    let environment = r
        .required("environment", issues)
        .and_then(|(v, p)| read_environment(v, &p, issues));
    r.finish(issues);
    Some(Components {
        problem_solver: problem_solver?,
        agent: agent?,
        environment: environment?,
    })
}

fn read_problem_solver(v: &Value, path: &str, issues: &mut Issues) -> Option<ProblemSolver> {
    let mut r = ObjectReader::new(v, path, issues)?;
    let tools = r
        .required("tools", issues)
        .and_then(|(v, p)| read_list(v, &p, issues, read_tool));
    let is_agent = r.req_bool("is_agent", issues);
    r.finish(issues);
    Some(ProblemSolver {
        tools: tools?,
        is_agent: is_agent?,
    })
}

fn read_tool(v: &Value, path: &str, issues: &mut Issues) -> Option<Tool> {
    let mut r = ObjectReader::new(v, path, issues)?;
    let name = r.req_str("name", issues);
    let category = r.req_enum("category", issues);
    let roles = r.required("roles", issues).and_then(|(v, p)| {
        let list = read_list(v, &p, issues, |x, ip, issues| {
            as_enum::<ToolRole>(x, ip, issues).map(|r| (r, ip.to_string()))
        })?;
        let mut set = BTreeSet::new();
        for (role, ip) in list {
            if !set.insert(role) {
                issues.push(
                    IssueCode::DuplicateName,
                    ip,
                    format!("role `{role}` listed twice"),
                );
            }
        }
        Some(set)
    });
    r.finish(issues);
    Some(Tool {
        name: name?.to_string(),
        category: category?,
        roles: roles?,
    })
}

fn read_agent(v: &Value, path: &str, issues: &mut Issues) -> Option<Agent> {
    let mut r = ObjectReader::new(v, path, issues)?;
    let kind = r.req_enum("kind", issues);
    let actions = r.required("actions", issues).and_then(|(v, p)| {
        read_list(v, &p, issues, |x, ip, issues| {
            let mut r = ObjectReader::new(x, ip, issues)?;
            let name = r.req_str("name", issues);
            let reversible = r.req_bool("reversible", issues);
            r.finish(issues);
            Some(Action {
                name: name?.to_string(),
                reversible: reversible?,
            })
        })
    });
    r.finish(issues);
    Some(Agent {
        kind: kind?,
        actions: actions?,
    })
}

fn read_environment(v: &Value, path: &str, issues: &mut Issues) -> Option<Environment> {
    let mut r = ObjectReader::new(v, path, issues)?;
    let kind = r.req_enum("kind", issues);
    let descriptors = r.required("descriptors", issues).and_then(|(v, p)| {
        read_list(v, &p, issues, |x, ip, issues| {
            as_str(x, ip, issues).map(str::to_string)
        })
    });
    r.finish(issues);
    Some(Environment {
        kind: kind?,
        descriptors: descriptors?,
    })
}

fn read_task(v: &Value, path: &str, issues: &mut Issues) -> Option<TaskSpec> {
    let mut r = ObjectReader::new(v, path, issues)?;
    let initial_state = r
        .required("initial_state", issues)
        .and_then(|(v, p)| read_element(v, &p, issues));
    let algorithm = r
        .required("algorithm", issues)
        .and_then(|(v, p)| read_element(v, &p, issues));
    let final_state = r
        .required("final_state", issues)
        .and_then(|(v, p)| read_element(v, &p, issues));
    r.finish(issues);
    Some(TaskSpec {
        initial_state: initial_state?,
        algorithm: algorithm?,
        final_state: final_state?,
    })
}

/// Field presence rules (explicitness only when given, constrained only when
/// to be found) are left to the validator so that parsing stays lossless.
fn read_element(v: &Value, path: &str, issues: &mut Issues) -> Option<TaskElement> {
    let mut r = ObjectReader::new(v, path, issues)?;
    let status = r.req_enum("status", issues);
    let count = r.req_enum("count", issues);
    let explicitness = match r.optional("explicitness") {
        Some((v, p)) => as_enum(v, &p, issues).map(Some),
        None => Some(None),
    };
    let constrained = match r.optional("constrained") {
        Some((v, p)) => crate::schema::as_bool(v, &p, issues).map(Some),
        None => Some(None),
    };
    r.finish(issues);
    Some(TaskElement {
        status: status?,
        count: count?,
        explicitness: explicitness?,
        constrained: constrained?,
    })
}

fn read_characteristics(
    v: &Value,
    path: &str,
    issues: &mut Issues,
) -> Option<DeclaredCharacteristics> {
    let mut r = ObjectReader::new(v, path, issues)?;
    let functionalities = r
        .required("functionalities", issues)
        .and_then(|(v, p)| read_functionalities(v, &p, issues));
    let resettability = r.req_enum("resettability", issues);
    let observability = r.req_enum("observability", issues);
    let representation = r.req_enum("representation", issues);
    let domain = match r.optional("domain") {
        Some((v, p)) => as_enum(v, &p, issues).map(Some),
        None => Some(None),
    };
    let cardinality = match r.optional("cardinality") {
        Some((v, p)) => as_enum(v, &p, issues).map(Some),
        None => Some(None),
    };
    r.finish(issues);
    Some(DeclaredCharacteristics {
        functionalities: functionalities?,
        resettability: resettability?,
        observability: observability?,
        representation: representation?,
        domain: domain?,
        cardinality: cardinality?,
    })
}

#[cfg(test)]
mod tests {
    use super::super::{serialize_descriptor, testing};
    use super::*;

    #[test]
    fn round_trip() {
        let d = testing::sample();
        let text = serialize_descriptor(&d);
        let back = parse_descriptor(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(serialize_descriptor(&back), text);
    }

    #[test]
    fn loops_is_unknown_enum() {
        let text = serialize_descriptor(&testing::sample()).replace("\"operators\"", "\"loops\"");
        match parse_descriptor(&text) {
            Err(DescriptorError::Schema(issues)) => {
                assert_eq!(issues.len(), 1);
                assert_eq!(issues[0].code, IssueCode::UnknownEnum);
                assert_eq!(issues[0].path, "characteristics.functionalities[0]");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn unknown_key_rejected() {
        let text = serialize_descriptor(&testing::sample()).replacen(
            "\"name\": \"sample\"",
            "\"name\": \"sample\", \"colour\": \"red\"",
            1,
        );
        match parse_descriptor(&text) {
            Err(DescriptorError::Schema(issues)) => {
                assert_eq!(issues[0].code, IssueCode::BadFieldPresence);
                assert_eq!(issues[0].path, "colour");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn malformed_has_line_and_column() {
        match parse_descriptor("{\n  \"name\": \"x\",\n}") {
            Err(DescriptorError::Parse(e)) => assert_eq!(e.line, 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
