//! The two route probes for the airport service.

use std::collections::BTreeMap;

use super::{GuardExpr, InitialSpec, ProbeDef, ProbeError, ProbeSpec};

pub const BUILTIN_NAMES: [&str; 2] = ["loose", "strict"];

pub fn builtin(name: &str) -> Option<ProbeDef> {
    match name {
        "loose" => Some(builtin_loose()),
        "strict" => Some(builtin_strict()),
        _ => None,
    }
}

fn edges(list: &[(&str, &str, &str)]) -> Vec<(String, GuardExpr, String)> {
    list.iter()
        .map(|(from, region, to)| {
            (
                from.to_string(),
                GuardExpr::in_region(*region),
                to.to_string(),
            )
        })
        .collect()
}

fn build(spec: ProbeSpec) -> ProbeDef {
    ProbeDef::build(spec).unwrap_or_else(|e: ProbeError| panic!("builtin probe is malformed: {e}"))
}

/// Direction-agnostic probe: the bus may move between neighbouring regions
/// of the chain airport, suburbs1, suburbs2, centre, garage in either
/// direction, and may stay put. Starts in the state of the region holding
/// the first fix.
pub fn builtin_loose() -> ProbeDef {
    let states = [
        "AIRPORT", "SUBURBS1", "SUBURBS2", "CENTRE", "GARAGE", "ERROR",
    ];
    let transitions = edges(&[
        ("AIRPORT", "airport", "AIRPORT"),
        ("AIRPORT", "suburbs1", "SUBURBS1"),
        ("SUBURBS1", "airport", "AIRPORT"),
        ("SUBURBS1", "suburbs1", "SUBURBS1"),
        ("SUBURBS1", "suburbs2", "SUBURBS2"),
        ("SUBURBS2", "suburbs1", "SUBURBS1"),
        ("SUBURBS2", "suburbs2", "SUBURBS2"),
        ("SUBURBS2", "centre", "CENTRE"),
        ("CENTRE", "suburbs2", "SUBURBS2"),
        ("CENTRE", "centre", "CENTRE"),
        ("CENTRE", "garage", "GARAGE"),
        ("GARAGE", "centre", "CENTRE"),
        ("GARAGE", "garage", "GARAGE"),
    ]);
    let initial: BTreeMap<String, String> = [
        ("airport", "AIRPORT"),
        ("suburbs1", "SUBURBS1"),
        ("suburbs2", "SUBURBS2"),
        ("centre", "CENTRE"),
        ("garage", "GARAGE"),
    ]
    .into_iter()
    .map(|(r, s)| (r.to_string(), s.to_string()))
    .collect();
    build(ProbeSpec {
        name: "loose".into(),
        states: states.iter().map(|s| s.to_string()).collect(),
        error_state: Some("ERROR".into()),
        transitions,
        initial: InitialSpec::FromFirstObservation(initial),
        airport_state: Some("AIRPORT".into()),
        centre_state: Some("CENTRE".into()),
    })
}

/// Direction-aware probe: outward legs A, S1A, S2A to C, the garage G off
/// the centre, and return legs S2R, S1R back to A. Always starts in A.
pub fn builtin_strict() -> ProbeDef {
    let states = ["A", "S1A", "S2A", "C", "G", "S2R", "S1R", "E"];
    let transitions = edges(&[
        ("A", "airport", "A"),
        ("A", "suburbs1", "S1A"),
        ("S1A", "suburbs1", "S1A"),
        ("S1A", "suburbs2", "S2A"),
        ("S2A", "suburbs2", "S2A"),
        ("S2A", "centre", "C"),
        ("C", "centre", "C"),
        ("C", "garage", "G"),
        ("C", "suburbs2", "S2R"),
        ("G", "garage", "G"),
        ("G", "centre", "C"),
        ("S2R", "suburbs2", "S2R"),
        ("S2R", "suburbs1", "S1R"),
        ("S1R", "suburbs1", "S1R"),
        ("S1R", "airport", "A"),
    ]);
    build(ProbeSpec {
        name: "strict".into(),
        states: states.iter().map(|s| s.to_string()).collect(),
        error_state: Some("E".into()),
        transitions,
        initial: InitialSpec::Fixed("A".into()),
        airport_state: Some("A".into()),
        centre_state: Some("C".into()),
    })
}
