//! Probe definition files (TOML).
//!
//! ```toml
//! name = "loose"
//! states = ["AIRPORT", "SUBURBS1", "ERROR"]
//! error_state = "ERROR"
//! transitions = [
//!   ["AIRPORT", 'in("airport")', "AIRPORT"],
//!   ["AIRPORT", 'in("suburbs1")', "SUBURBS1"],
//! ]
//!
//! [initial]
//! from_first_observation = { airport = "AIRPORT", suburbs1 = "SUBURBS1" }
//! # or: fixed = "AIRPORT"
//!
//! [liveness]          # optional
//! airport = "AIRPORT"
//! centre = "CENTRE"
//! ```
//!
//! Error transitions may be omitted; they are derived from the other guards.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{InitialSpec, ProbeDef, ProbeError, ProbeSpec};
use crate::geometry::RegionSet;
use crate::scalar::Scalar;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeFile {
    #[serde(default)]
    name: String,
    states: Vec<String>,
    error_state: Option<String>,
    #[serde(default)]
    transitions: Vec<(String, String, String)>,
    initial: InitialFile,
    #[serde(default, skip_serializing_if = "LivenessFile::is_empty")]
    liveness: LivenessFile,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
enum InitialFile {
    Fixed(String),
    FromFirstObservation(BTreeMap<String, String>),
}

#[derive(Debug, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LivenessFile {
    #[serde(skip_serializing_if = "Option::is_none")]
    airport: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    centre: Option<String>,
}

impl LivenessFile {
    fn is_empty(&self) -> bool {
        self.airport.is_none() && self.centre.is_none()
    }
}

/// Parses and builds a probe without checking it against any regions.
pub fn parse_probe_unchecked(source: &str) -> Result<ProbeDef, ProbeError> {
    let file: ProbeFile = toml::from_str(source).map_err(|e| ProbeError::File(e.to_string()))?;
    let transitions = file
        .transitions
        .into_iter()
        .map(|(from, guard, to)| Ok((from, guard.parse()?, to)))
        .collect::<Result<Vec<_>, ProbeError>>()?;
    ProbeDef::build(ProbeSpec {
        name: file.name,
        states: file.states,
        error_state: file.error_state,
        transitions,
        initial: match file.initial {
            InitialFile::Fixed(s) => InitialSpec::Fixed(s),
            InitialFile::FromFirstObservation(m) => InitialSpec::FromFirstObservation(m),
        },
        airport_state: file.liveness.airport,
        centre_state: file.liveness.centre,
    })
}

/// Parses a probe file and validates it against `regions`.
pub fn parse_probe<S: Scalar>(
    source: &str,
    regions: &RegionSet<S>,
) -> Result<ProbeDef, ProbeError> {
    let probe = parse_probe_unchecked(source)?;
    probe.validate(regions)?;
    Ok(probe)
}

/// Renders a probe as a file [`parse_probe`] accepts, error transitions included.
pub fn write_probe(probe: &ProbeDef) -> String {
    let spec = probe.to_spec();
    let file = ProbeFile {
        name: spec.name,
        states: spec.states,
        error_state: spec.error_state,
        transitions: spec
            .transitions
            .into_iter()
            .map(|(f, g, t)| (f, g.to_string(), t))
            .collect(),
        initial: match spec.initial {
            InitialSpec::Fixed(s) => InitialFile::Fixed(s),
            InitialSpec::FromFirstObservation(m) => InitialFile::FromFirstObservation(m),
        },
        liveness: LivenessFile {
            airport: spec.airport_state,
            centre: spec.centre_state,
        },
    };
    toml::to_string(&file).expect("probe files always serialize")
}
