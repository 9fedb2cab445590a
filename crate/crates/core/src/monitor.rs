//! Running probes over traces: verdicts, measures and fleet reports.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::geometry::RegionSet;
use crate::probe::{ProbeCursor, ProbeDef, ProbeError, StateId};
use crate::scalar::Scalar;
use crate::trace::Trace;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum MonitorError {
    #[error(transparent)]
    Probe(#[from] ProbeError),
    #[error("probe has no state named `{0}`")]
    UnknownState(String),
    #[error("state histories cover different events and cannot be summed")]
    MismatchedHistories,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbeResult {
    Accepted,
    Rejected,
}

/// Outcome of checking one trace: one row of a fleet report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub vehicle_id: String,
    pub initial_state: String,
    pub final_state: String,
    pub airport_visited: bool,
    pub centre_visited: bool,
    pub error_seen: bool,
    pub result: ProbeResult,
    /// Event after which the probe first sat in its error state.
    pub error_event_index: Option<usize>,
}

impl Verdict {
    /// One-line JSON record.
    pub fn to_record(&self) -> String {
        serde_json::to_string(self).expect("verdicts always serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HistoryEntry {
    pub index: usize,
    pub elapsed_s: u64,
    pub state: StateId,
}

/// The probe state after every event of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateHistory {
    states: Vec<String>,
    entries: Vec<HistoryEntry>,
}

impl StateHistory {
    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn entries(&self) -> &[HistoryEntry] {
        &self.entries
    }

    pub fn state_names(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|e| self.states[e.state.0].as_str())
    }

    fn state_id(&self, name: &str) -> Result<StateId, MonitorError> {
        self.states
            .iter()
            .position(|s| s == name)
            .map(StateId)
            .ok_or_else(|| MonitorError::UnknownState(name.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeRun {
    pub verdict: Verdict,
    pub history: StateHistory,
}

/// Checks one trace: the probe starts in its initial state for the first
/// fix and then steps once per event.
pub fn run_probe<S: Scalar>(
    trace: &Trace<S>,
    probe: &ProbeDef,
    regions: &RegionSet<S>,
) -> Result<ProbeRun, MonitorError> {
    probe.validate(regions)?;
    let mut cursor = ProbeCursor::start(probe, trace.first(), regions);
    let initial = cursor.current();
    let mut entries = Vec::with_capacity(trace.len());
    for event in trace.events() {
        let state = cursor.step(&event, regions)?;
        entries.push(HistoryEntry {
            index: event.index,
            elapsed_s: event.elapsed_s,
            state,
        });
    }

    let error = probe.error_state();
    let error_event_index = entries.iter().find(|e| e.state == error).map(|e| e.index);
    let error_seen = cursor.has_visited(error);
    let visited = |s: Option<StateId>| s.is_some_and(|s| cursor.has_visited(s));
    let verdict = Verdict {
        vehicle_id: trace.vehicle_id().to_string(),
        initial_state: probe.state_name(initial).to_string(),
        final_state: probe.state_name(cursor.current()).to_string(),
        airport_visited: visited(probe.airport_state()),
        centre_visited: visited(probe.centre_state()),
        error_seen,
        result: if error_seen {
            ProbeResult::Rejected
        } else {
            ProbeResult::Accepted
        },
        error_event_index,
    };
    Ok(ProbeRun {
        verdict,
        history: StateHistory {
            states: probe.states().to_vec(),
            entries,
        },
    })
}

/// A named real-valued signal sampled once per event.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSeries<V> {
    pub name: String,
    pub samples: Vec<(u64, V)>,
}

impl<V: std::fmt::Display> MeasureSeries<V> {
    pub fn values(&self) -> impl Iterator<Item = &V> {
        self.samples.iter().map(|(_, v)| v)
    }

    /// Two-column CSV: `elapsed_s,value`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("elapsed_s,value\n");
        for (t, v) in &self.samples {
            let _ = writeln!(out, "{t},{v}");
        }
        out
    }
}

/// 1 while the probe sits in `state`, else 0.
pub fn measure_count_in_state(
    history: &StateHistory,
    state: &str,
) -> Result<MeasureSeries<f64>, MonitorError> {
    measure_count_across(&[history], state)
}

/// Number of cursors in `state` at each event, for cursors that observed
/// the same events.
pub fn measure_count_across(
    histories: &[&StateHistory],
    state: &str,
) -> Result<MeasureSeries<f64>, MonitorError> {
    let (first, rest) = histories
        .split_first()
        .ok_or(MonitorError::MismatchedHistories)?;
    let axis: Vec<u64> = first.entries.iter().map(|e| e.elapsed_s).collect();
    if rest.iter().any(|h| {
        h.entries
            .iter()
            .map(|e| e.elapsed_s)
            .ne(axis.iter().copied())
    }) {
        return Err(MonitorError::MismatchedHistories);
    }
    let mut counts = vec![0.0; axis.len()];
    for h in histories {
        let id = h.state_id(state)?;
        for (c, e) in counts.iter_mut().zip(&h.entries) {
            if e.state == id {
                *c += 1.0;
            }
        }
    }
    Ok(MeasureSeries {
        name: format!("ProbeInState{state}"),
        samples: axis.into_iter().zip(counts).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Attribute {
    Latitude,
    Longitude,
}

/// Running maximum of one coordinate along the trace.
pub fn measure_max_attribute<S: Scalar>(
    trace: &Trace<S>,
    attribute: Attribute,
) -> MeasureSeries<S> {
    let name = match attribute {
        Attribute::Latitude => "MaxLatitude",
        Attribute::Longitude => "MaxLongitude",
    };
    let mut best: Option<S> = None;
    let samples = trace
        .events()
        .map(|ev| {
            let v = match attribute {
                Attribute::Latitude => ev.payload.latitude,
                Attribute::Longitude => ev.payload.longitude,
            };
            let m = match best {
                Some(b) if b >= v => b,
                _ => v,
            };
            best = Some(m);
            (ev.elapsed_s, m)
        })
        .collect();
    MeasureSeries {
        name: name.to_string(),
        samples,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReportRow {
    Checked(Verdict),
    Failed { vehicle_id: String, message: String },
}

impl ReportRow {
    pub fn vehicle_id(&self) -> &str {
        match self {
            ReportRow::Checked(v) => &v.vehicle_id,
            ReportRow::Failed { vehicle_id, .. } => vehicle_id,
        }
    }

    pub fn result_label(&self) -> &'static str {
        match self {
            ReportRow::Checked(v) => match v.result {
                ProbeResult::Accepted => "Accepted",
                ProbeResult::Rejected => "Rejected",
            },
            ReportRow::Failed { .. } => "Error",
        }
    }

    pub fn to_record(&self) -> String {
        match self {
            ReportRow::Checked(v) => v.to_record(),
            ReportRow::Failed {
                vehicle_id,
                message,
            } => serde_json::json!({
                "vehicle_id": vehicle_id,
                "result": "Error",
                "error": message,
            })
            .to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FleetReport {
    pub rows: Vec<ReportRow>,
}

const COLUMNS: [&str; 7] = [
    "Fleet number",
    "Initial state",
    "Final state",
    "AIRPORT visited",
    "CENTRE visited",
    "ERROR seen",
    "Probe result",
];

impl FleetReport {
    pub fn count(&self, result: ProbeResult) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r, ReportRow::Checked(v) if v.result == result))
            .count()
    }

    pub fn failed(&self) -> usize {
        self.rows
            .iter()
            .filter(|r| matches!(r, ReportRow::Failed { .. }))
            .count()
    }

    /// Aligned text table, one row per trace in input order.
    pub fn render_table(&self) -> String {
        let yes_no = |b: bool| if b { "Yes" } else { "No" }.to_string();
        let cells: Vec<[String; 7]> = self
            .rows
            .iter()
            .map(|row| match row {
                ReportRow::Checked(v) => [
                    v.vehicle_id.clone(),
                    v.initial_state.clone(),
                    v.final_state.clone(),
                    yes_no(v.airport_visited),
                    yes_no(v.centre_visited),
                    yes_no(v.error_seen),
                    row.result_label().to_string(),
                ],
                ReportRow::Failed { vehicle_id, .. } => {
                    let dash = || "-".to_string();
                    [
                        vehicle_id.clone(),
                        dash(),
                        dash(),
                        dash(),
                        dash(),
                        dash(),
                        "Error".into(),
                    ]
                }
            })
            .collect();
        let mut widths = COLUMNS.map(str::len);
        for row in &cells {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.len());
            }
        }
        let line = |fields: &[String]| {
            let padded: Vec<String> = fields
                .iter()
                .zip(widths)
                .map(|(f, w)| format!("{f:<w$}"))
                .collect();
            padded.join(" | ").trim_end().to_string()
        };
        let mut out = line(&COLUMNS.map(String::from));
        out.push('\n');
        out.push_str(
            &widths
                .iter()
                .map(|w| "-".repeat(*w))
                .collect::<Vec<_>>()
                .join("-+-"),
        );
        out.push('\n');
        for row in &cells {
            out.push_str(&line(row));
            out.push('\n');
        }
        out
    }

    /// One JSON record per line.
    pub fn to_records(&self) -> String {
        self.rows.iter().map(|r| r.to_record() + "\n").collect()
    }
}

/// Checks every trace against its probe. Traces are checked in parallel;
/// rows come back in input order and one failure does not affect the others.
pub fn fleet_report<S: Scalar>(
    runs: &[(&Trace<S>, &ProbeDef)],
    regions: &RegionSet<S>,
) -> FleetReport {
    let rows = runs
        .par_iter()
        .map(|(trace, probe)| match run_probe(trace, probe, regions) {
            Ok(run) => ReportRow::Checked(run.verdict),
            Err(e) => ReportRow::Failed {
                vehicle_id: trace.vehicle_id().to_string(),
                message: e.to_string(),
            },
        })
        .collect();
    FleetReport { rows }
}
