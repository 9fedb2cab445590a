#![allow(dead_code)]

use routeprobe::{Observation, ProbeResult, RegionSet, Scalar, TimeOfDay, Trace};

/// Region order along the route; the loose probe allows moves between
/// neighbours in this list.
pub const CHAIN: [&str; 5] = ["airport", "suburbs1", "suburbs2", "centre", "garage"];

/// Allowed next region for each direction-aware state of the strict probe,
/// written as plain successor tables.
const STRICT: &[(&str, &[(&str, &str)])] = &[
    ("A", &[("airport", "A"), ("suburbs1", "S1A")]),
    ("S1A", &[("suburbs1", "S1A"), ("suburbs2", "S2A")]),
    ("S2A", &[("suburbs2", "S2A"), ("centre", "C")]),
    (
        "C",
        &[("centre", "C"), ("garage", "G"), ("suburbs2", "S2R")],
    ),
    ("G", &[("garage", "G"), ("centre", "C")]),
    ("S2R", &[("suburbs2", "S2R"), ("suburbs1", "S1R")]),
    ("S1R", &[("suburbs1", "S1R"), ("airport", "A")]),
];

pub fn region_sequence<S: Scalar>(trace: &Trace<S>, regions: &RegionSet<S>) -> Vec<Option<String>> {
    trace
        .observations()
        .iter()
        .map(|o| {
            // Direct rectangle test, independent of RegionSet::classify.
            let p = o.position();
            let hits: Vec<&str> = regions
                .regions()
                .iter()
                .filter(|r| {
                    r.min_long < p.longitude
                        && p.longitude < r.max_long
                        && r.min_lat < p.latitude
                        && p.latitude < r.max_lat
                })
                .map(|r| r.name())
                .collect();
            assert!(hits.len() <= 1, "regions overlap at a fix");
            hits.first().map(|s| s.to_string())
        })
        .collect()
}

/// Accepts iff the first fix is in a chain region and every later fix stays
/// put or moves to a chain neighbour.
pub fn loose_oracle(cells: &[Option<String>]) -> ProbeResult {
    let pos = |c: &Option<String>| {
        c.as_deref()
            .and_then(|n| CHAIN.iter().position(|r| *r == n))
    };
    let mut current = match cells.first().and_then(pos) {
        Some(p) => p,
        None => return ProbeResult::Rejected,
    };
    for c in cells {
        match pos(c) {
            Some(next) if next.abs_diff(current) <= 1 => current = next,
            _ => return ProbeResult::Rejected,
        }
    }
    ProbeResult::Accepted
}

/// Direction-aware oracle starting at the airport state.
pub fn strict_oracle(cells: &[Option<String>]) -> ProbeResult {
    let mut state = "A";
    for c in cells {
        let Some(region) = c.as_deref() else {
            return ProbeResult::Rejected;
        };
        let table = STRICT.iter().find(|(s, _)| *s == state).unwrap().1;
        match table.iter().find(|(r, _)| *r == region) {
            Some((_, next)) => state = next,
            None => return ProbeResult::Rejected,
        }
    }
    ProbeResult::Accepted
}

/// A trace with one fix at the centre of each named region, 60 s apart.
pub fn trace_through<S: Scalar>(regions: &RegionSet<S>, names: &[&str], start: u64) -> Trace<S> {
    let obs = names
        .iter()
        .enumerate()
        .map(|(i, name)| {
            let c = regions.get(name).unwrap().center();
            Observation {
                latitude: c.latitude,
                longitude: c.longitude,
                time: TimeOfDay::from_seconds(start + 60 * i as u64),
            }
        })
        .collect();
    Trace::new("t", obs).unwrap()
}

#[derive(Debug, PartialEq)]
pub struct ReadComponent<S> {
    pub vehicle: String,
    pub chunks: Vec<usize>,
    pub observations: Vec<Observation<S>>,
}

/// Reads emitted component text back, following the continuation of every
/// state rather than trusting line order.
pub fn read_component<S: Scalar>(text: &str) -> Result<ReadComponent<S>, String> {
    let mut lines = text.lines().map(str::trim);
    let header = lines
        .by_ref()
        .find(|l| l.starts_with("component "))
        .ok_or("no component")?;
    let vehicle = header
        .strip_prefix("component ")
        .and_then(|s| s.strip_suffix(" {"))
        .ok_or("bad component line")?
        .to_string();

    // state label -> (payload, continuation); chunk label -> first state
    let mut states = std::collections::HashMap::new();
    let mut chunk_heads = std::collections::HashMap::new();
    let mut chunks = Vec::new();
    let mut current_chunk: Option<String> = None;
    let mut pending: Option<(String, Observation<S>)> = None;
    let mut init = None;
    for line in lines {
        if let Some(name) = line.strip_suffix(" {").filter(|n| n.starts_with("CHUNK")) {
            current_chunk = Some(name.to_string());
            chunks.push(0);
        } else if let Some((label, rest)) = line.split_once(" = move*[true]<") {
            let payload = rest.strip_suffix(">{").ok_or("bad action line")?;
            let obs = parse_payload(payload)?;
            if let Some(chunk) = current_chunk.as_ref() {
                chunk_heads
                    .entry(chunk.clone())
                    .or_insert_with(|| label.to_string());
            }
            *chunks.last_mut().ok_or("state outside chunk")? += 1;
            pending = Some((label.to_string(), obs));
        } else if let Some(next) = line.strip_prefix("}.").and_then(|s| s.strip_suffix(';')) {
            let (label, obs) = pending.take().ok_or("continuation without action")?;
            states.insert(label, (obs, next.to_string()));
        } else if let Some(p) = line
            .strip_prefix("init { ")
            .and_then(|s| s.strip_suffix(" }"))
        {
            init = Some(p.to_string());
        }
    }

    let mut observations = Vec::new();
    let mut target = init.ok_or("no init")?;
    loop {
        if target == "nil" {
            break;
        }
        if let Some(head) = chunk_heads.get(&target) {
            target = head.clone();
        }
        let (obs, next) = states
            .get(&target)
            .ok_or(format!("undefined process {target}"))?;
        observations.push(*obs);
        if observations.len() > states.len() {
            return Err("continuation cycle".into());
        }
        target = next.clone();
    }
    if observations.len() != states.len() {
        return Err("unreachable states".into());
    }
    Ok(ReadComponent {
        vehicle,
        chunks,
        observations,
    })
}

fn parse_payload<S: Scalar>(payload: &str) -> Result<Observation<S>, String> {
    let f: Vec<&str> = payload.split(',').collect();
    if f.len() != 5 {
        return Err(format!("payload `{payload}` has {} fields", f.len()));
    }
    let num = |s: &str| S::parse_literal(s).ok_or(format!("bad number `{s}`"));
    let int = |s: &str| s.parse::<u8>().map_err(|e| e.to_string());
    Ok(Observation {
        latitude: num(f[0])?,
        longitude: num(f[1])?,
        time: TimeOfDay::new(int(f[2])?, int(f[3])?, int(f[4])?).map_err(|e| e.to_string())?,
    })
}
