//! JSON instance/assignment documents and DOT export.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::model::{Assignment, Instance, SeatGraph, SeatShape};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    agents: Vec<String>,
    preferences: Vec<(String, String)>,
    seat_graph: SeatGraphDoc,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SeatGraphDoc {
    shape: String,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    edges: Option<Vec<(usize, usize)>>,
}

fn malformed(e: serde_json::Error) -> Error {
    Error::MalformedDocument(e.to_string())
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(malformed)?;
    let shape: SeatShape = doc.seat_graph.shape.parse()?;
    if doc.seat_graph.n != doc.agents.len() {
        return Err(Error::SizeMismatch {
            expected: doc.agents.len(),
            found: doc.seat_graph.n,
        });
    }
    if doc.agents.iter().any(String::is_empty) {
        return Err(Error::EmptyLabel);
    }
    let seats = SeatGraph::with_shape(shape, doc.seat_graph.n, doc.seat_graph.edges)?;
    let arcs: Vec<(&str, &str)> = doc
        .preferences
        .iter()
        .map(|(a, b)| (a.as_str(), b.as_str()))
        .collect();
    let labels: Vec<&str> = doc.agents.iter().map(String::as_str).collect();
    Instance::from_labels(&labels, &arcs, seats)
}

/// Canonical form: sorted agents, arcs in index order, edges only for
/// custom seat graphs.
pub fn instance_to_value(inst: &Instance) -> Value {
    let seats = inst.seats();
    let doc = InstanceDoc {
        agents: inst.agents().to_vec(),
        preferences: inst
            .prefs()
            .arcs()
            .map(|(i, j)| (inst.label(i).to_owned(), inst.label(j).to_owned()))
            .collect(),
        seat_graph: SeatGraphDoc {
            shape: seats.shape().as_str().to_owned(),
            n: seats.n(),
            edges: (seats.shape() == SeatShape::Custom).then(|| seats.edges().collect()),
        },
    };
    serde_json::to_value(doc).expect("instance document serializes")
}

pub fn serialize_instance(inst: &Instance) -> String {
    serde_json::to_string_pretty(&instance_to_value(inst)).expect("value serializes")
}

/// `{"assignment": {"a": 0, ...}}` with labels in index order.
pub fn assignment_to_value(inst: &Instance, asg: &Assignment) -> Value {
    let map: Map<String, Value> = (0..inst.n())
        .map(|i| (inst.label(i).to_owned(), Value::from(asg.seat(i))))
        .collect();
    let mut outer = Map::new();
    outer.insert("assignment".into(), Value::Object(map));
    Value::Object(outer)
}

/// Label-to-seat map without the outer wrapper.
pub fn assignment_map(inst: &Instance, asg: &Assignment) -> Value {
    match assignment_to_value(inst, asg) {
        Value::Object(mut m) => m.remove("assignment").expect("key present"),
        _ => unreachable!(),
    }
}

pub fn serialize_assignment(inst: &Instance, asg: &Assignment) -> String {
    serde_json::to_string_pretty(&assignment_to_value(inst, asg)).expect("value serializes")
}

/// Parses an assignment document against `inst`. Every agent must appear
/// exactly once.
pub fn parse_assignment(inst: &Instance, text: &str) -> Result<Assignment> {
    let value: Value = serde_json::from_str(text).map_err(malformed)?;
    let map = value
        .get("assignment")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::MalformedDocument("expected an `assignment` object".into()))?;
    let mut seat_of = vec![usize::MAX; inst.n()];
    for (label, seat) in map {
        let agent = inst.agent_index(label)?;
        let seat = seat
            .as_u64()
            .ok_or_else(|| Error::MalformedDocument(format!("seat of `{label}` is not an index")))?;
        seat_of[agent] = seat as usize;
    }
    if let Some(missing) = seat_of.iter().position(|&s| s == usize::MAX) {
        return Err(Error::InvalidAssignment(format!(
            "agent `{}` has no seat",
            inst.label(missing)
        )));
    }
    let asg = Assignment::new(seat_of)?;
    inst.validate_assignment(&asg)?;
    Ok(asg)
}

/// Preference digraph followed by the seat graph; seats are labelled with
/// their occupants when an assignment is given.
pub fn to_dot(inst: &Instance, asg: Option<&Assignment>) -> String {
    let mut out = String::new();
    out.push_str("digraph preferences {\n");
    for i in 0..inst.n() {
        let _ = writeln!(out, "  \"{}\";", inst.label(i));
    }
    for (i, j) in inst.prefs().arcs() {
        let _ = writeln!(out, "  \"{}\" -> \"{}\";", inst.label(i), inst.label(j));
    }
    out.push_str("}\n");
    out.push_str("graph seats {\n");
    for v in 0..inst.seats().n() {
        match asg {
            Some(a) => {
                let _ = writeln!(out, "  v{v} [label=\"v{v}: {}\"];", inst.label(a.occupant(v)));
            }
            None => {
                let _ = writeln!(out, "  v{v};");
            }
        }
    }
    for (u, v) in inst.seats().edges() {
        let _ = writeln!(out, "  v{u} -- v{v};");
    }
    out.push_str("}\n");
    out
}
