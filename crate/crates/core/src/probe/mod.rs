//! Probe automata: finite-state observers whose transitions are guarded by
//! region membership of the observed vehicle.
//!
//! Every probe has one absorbing error state. From any other state the error
//! transition fires only when none of the state's other guards hold, so a
//! validated probe has exactly one enabled move for every position.

mod builtin;
mod file;
pub mod guard;

use std::collections::{BTreeMap, BTreeSet};

use crate::geometry::{GeometryError, RegionSet};
use crate::scalar::Scalar;
use crate::trace::{MoveEvent, Observation};

pub use builtin::{builtin, builtin_loose, builtin_strict, BUILTIN_NAMES};
pub use file::{parse_probe, parse_probe_unchecked, write_probe};
pub use guard::{parse_guard, GuardExpr, GuardParseError};

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ProbeError {
    #[error(transparent)]
    Guard(#[from] GuardParseError),
    #[error("probe file: {0}")]
    File(String),
    #[error("probe declares no error state")]
    MissingErrorState,
    #[error("state `{0}` is not declared")]
    UnknownState(String),
    #[error("state `{0}` is declared more than once")]
    DuplicateState(String),
    #[error("guard refers to unknown region `{0}`")]
    UnknownRegion(String),
    #[error("error state must only loop on itself with guard `true`, found transition to `{to}`")]
    NonAbsorbingError { to: String },
    #[error("state `{state}` has more than one explicit error transition")]
    MultipleErrorTransitions { state: String },
    #[error("state `{state}`: guards towards `{first}` and `{second}` both hold {witness}")]
    NonDisjointGuards {
        state: String,
        first: String,
        second: String,
        witness: String,
    },
    #[error("state `{state}`: error guard is not the complement of the other guards {witness}")]
    ErrorGuardMismatch { state: String, witness: String },
    #[error("state `{state}`: transitions to `{first}` and `{second}` are both enabled")]
    NondeterministicStep {
        state: String,
        first: String,
        second: String,
    },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeTransition {
    pub from: StateId,
    pub guard: GuardExpr,
    pub to: StateId,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialPolicy {
    Fixed(StateId),
    /// Start in the state mapped from the region holding the first fix, or in
    /// the error state when that region is unmapped or there is none.
    FromFirstObservation(BTreeMap<String, StateId>),
}

/// Name-based description of a probe, as written in a probe file.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProbeSpec {
    pub name: String,
    pub states: Vec<String>,
    pub error_state: Option<String>,
    pub transitions: Vec<(String, GuardExpr, String)>,
    pub initial: InitialSpec,
    /// States whose visit marks the airport and centre liveness goals.
    /// When unset, states literally named `AIRPORT` / `CENTRE` are used.
    pub airport_state: Option<String>,
    pub centre_state: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialSpec {
    Fixed(String),
    FromFirstObservation(BTreeMap<String, String>),
}

impl Default for InitialSpec {
    fn default() -> Self {
        InitialSpec::FromFirstObservation(BTreeMap::new())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeDef {
    name: String,
    states: Vec<String>,
    error: StateId,
    transitions: Vec<ProbeTransition>,
    initial: InitialPolicy,
    airport: Option<StateId>,
    centre: Option<StateId>,
}

impl ProbeDef {
    /// Resolves names and completes the automaton. Any non-error state
    /// without an explicit error transition gets one whose guard is the
    /// conjunction of the negated guards of its other transitions; the error
    /// state gets a `true` self-loop if it has none.
    ///
    /// Region-dependent checks happen in [`ProbeDef::validate`].
    pub fn build(spec: ProbeSpec) -> Result<Self, ProbeError> {
        let mut seen = BTreeSet::new();
        for s in &spec.states {
            if !seen.insert(s.as_str()) {
                return Err(ProbeError::DuplicateState(s.clone()));
            }
        }
        let lookup = |name: &str| {
            spec.states
                .iter()
                .position(|s| s == name)
                .map(StateId)
                .ok_or_else(|| ProbeError::UnknownState(name.to_string()))
        };
        let error_name = spec
            .error_state
            .as_deref()
            .ok_or(ProbeError::MissingErrorState)?;
        let error = lookup(error_name)?;

        let mut transitions = Vec::with_capacity(spec.transitions.len());
        for (from, guard, to) in &spec.transitions {
            let (from, to) = (lookup(from)?, lookup(to)?);
            if from == error && to != error {
                return Err(ProbeError::NonAbsorbingError {
                    to: spec.states[to.0].clone(),
                });
            }
            transitions.push(ProbeTransition {
                from,
                guard: guard.clone(),
                to,
            });
        }

        for (i, state) in spec.states.iter().enumerate() {
            let id = StateId(i);
            let errors = transitions
                .iter()
                .filter(|t| t.from == id && t.to == error)
                .count();
            if errors > 1 {
                return Err(ProbeError::MultipleErrorTransitions {
                    state: state.clone(),
                });
            }
            if errors == 0 {
                let guard = if id == error {
                    GuardExpr::Const(true)
                } else {
                    GuardExpr::none_of(
                        transitions
                            .iter()
                            .filter(|t| t.from == id && t.to != error)
                            .map(|t| &t.guard),
                    )
                };
                transitions.push(ProbeTransition {
                    from: id,
                    guard,
                    to: error,
                });
            }
        }
        // Keep each state's branches together, in declaration order.
        transitions.sort_by_key(|t| (t.from, t.to == error));

        let initial = match &spec.initial {
            InitialSpec::Fixed(s) => InitialPolicy::Fixed(lookup(s)?),
            InitialSpec::FromFirstObservation(map) => InitialPolicy::FromFirstObservation(
                map.iter()
                    .map(|(region, state)| Ok((region.clone(), lookup(state)?)))
                    .collect::<Result<_, ProbeError>>()?,
            ),
        };
        let milestone = |explicit: &Option<String>, default: &str| match explicit {
            Some(name) => lookup(name).map(Some),
            None => Ok(lookup(default).ok()),
        };
        let airport = milestone(&spec.airport_state, "AIRPORT")?;
        let centre = milestone(&spec.centre_state, "CENTRE")?;

        Ok(Self {
            name: spec.name,
            states: spec.states,
            error,
            transitions,
            initial,
            airport,
            centre,
        })
    }

    /// Checks the probe against a region set: every region name resolves,
    /// each state's non-error guards are pairwise disjoint, every error guard
    /// is exactly the complement of its siblings, and the error state is
    /// absorbing.
    ///
    /// Guards only observe region membership and regions are disjoint, so a
    /// point is described completely by the one region holding it, or by
    /// none. Checking every such cell is exhaustive.
    pub fn validate<S: Scalar>(&self, regions: &RegionSet<S>) -> Result<(), ProbeError> {
        for t in &self.transitions {
            if let Some(missing) = t
                .guard
                .regions()
                .into_iter()
                .find(|r| regions.get(r).is_none())
            {
                return Err(ProbeError::UnknownRegion(missing.to_string()));
            }
        }
        if let InitialPolicy::FromFirstObservation(map) = &self.initial {
            if let Some(missing) = map.keys().find(|r| regions.get(r).is_none()) {
                return Err(ProbeError::UnknownRegion(missing.clone()));
            }
        }

        let cells = cells(regions);
        for (i, state) in self.states.iter().enumerate() {
            let id = StateId(i);
            let error_guard = &self.error_transition(id).guard;
            if id == self.error {
                if let Some(cell) = cells.iter().find(|c| !error_guard.holds_in(**c)) {
                    return Err(ProbeError::NonAbsorbingError {
                        to: format!("nowhere {}", describe_cell(*cell)),
                    });
                }
                continue;
            }
            let branches: Vec<&ProbeTransition> = self.regular_transitions(id).collect();
            for (k, a) in branches.iter().enumerate() {
                for b in &branches[k + 1..] {
                    if let Some(cell) = cells
                        .iter()
                        .find(|c| a.guard.holds_in(**c) && b.guard.holds_in(**c))
                    {
                        return Err(ProbeError::NonDisjointGuards {
                            state: state.clone(),
                            first: self.states[a.to.0].clone(),
                            second: self.states[b.to.0].clone(),
                            witness: describe_cell(*cell),
                        });
                    }
                }
            }
            if let Some(cell) = cells.iter().find(|c| {
                let any_regular = branches.iter().any(|t| t.guard.holds_in(**c));
                error_guard.holds_in(**c) == any_regular
            }) {
                return Err(ProbeError::ErrorGuardMismatch {
                    state: state.clone(),
                    witness: describe_cell(*cell),
                });
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn states(&self) -> &[String] {
        &self.states
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.0]
    }

    pub fn state_id(&self, name: &str) -> Option<StateId> {
        self.states.iter().position(|s| s == name).map(StateId)
    }

    pub fn error_state(&self) -> StateId {
        self.error
    }

    pub fn transitions(&self) -> &[ProbeTransition] {
        &self.transitions
    }

    pub fn initial_policy(&self) -> &InitialPolicy {
        &self.initial
    }

    pub fn airport_state(&self) -> Option<StateId> {
        self.airport
    }

    pub fn centre_state(&self) -> Option<StateId> {
        self.centre
    }

    pub fn outgoing(&self, from: StateId) -> impl Iterator<Item = &ProbeTransition> {
        self.transitions.iter().filter(move |t| t.from == from)
    }

    pub fn out_degree(&self, state: &str) -> Option<usize> {
        self.state_id(state).map(|id| self.outgoing(id).count())
    }

    /// Transitions out of `from` that do not lead to the error state.
    pub fn regular_transitions(&self, from: StateId) -> impl Iterator<Item = &ProbeTransition> {
        let error = self.error;
        self.outgoing(from).filter(move |t| t.to != error)
    }

    pub fn error_transition(&self, from: StateId) -> &ProbeTransition {
        self.outgoing(from)
            .find(|t| t.to == self.error)
            .expect("build adds an error transition to every state")
    }

    /// Canonical form for structural comparison: state names, initial policy,
    /// milestones, and for each `(from, to)` pair the set of cells on which
    /// the combined guard holds.
    pub fn normalized<S: Scalar>(&self, regions: &RegionSet<S>) -> NormalizedProbe {
        let cells = cells(regions);
        let mut edges: BTreeMap<(String, String), Vec<String>> = BTreeMap::new();
        for t in &self.transitions {
            let entry = edges
                .entry((self.states[t.from.0].clone(), self.states[t.to.0].clone()))
                .or_default();
            for cell in cells.iter().filter(|c| t.guard.holds_in(**c)) {
                let label = describe_cell(*cell);
                if !entry.contains(&label) {
                    entry.push(label);
                }
            }
        }
        for labels in edges.values_mut() {
            labels.sort();
        }
        let name = |id: StateId| self.states[id.0].clone();
        NormalizedProbe {
            states: self.states.iter().cloned().collect(),
            error_state: name(self.error),
            initial: match &self.initial {
                InitialPolicy::Fixed(s) => InitialSpec::Fixed(name(*s)),
                InitialPolicy::FromFirstObservation(map) => InitialSpec::FromFirstObservation(
                    map.iter().map(|(r, s)| (r.clone(), name(*s))).collect(),
                ),
            },
            airport_state: self.airport.map(name),
            centre_state: self.centre.map(name),
            edges,
        }
    }

    /// Back to the name-based description; [`ProbeDef::build`] of the result
    /// reproduces `self`.
    pub fn to_spec(&self) -> ProbeSpec {
        let name = |id: StateId| self.states[id.0].clone();
        ProbeSpec {
            name: self.name.clone(),
            states: self.states.clone(),
            error_state: Some(name(self.error)),
            transitions: self
                .transitions
                .iter()
                .map(|t| (name(t.from), t.guard.clone(), name(t.to)))
                .collect(),
            initial: match &self.initial {
                InitialPolicy::Fixed(s) => InitialSpec::Fixed(name(*s)),
                InitialPolicy::FromFirstObservation(map) => InitialSpec::FromFirstObservation(
                    map.iter().map(|(r, s)| (r.clone(), name(*s))).collect(),
                ),
            },
            airport_state: self.airport.map(name),
            centre_state: self.centre.map(name),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedProbe {
    pub states: BTreeSet<String>,
    pub error_state: String,
    pub initial: InitialSpec,
    pub airport_state: Option<String>,
    pub centre_state: Option<String>,
    pub edges: BTreeMap<(String, String), Vec<String>>,
}

fn cells<S: Scalar>(regions: &RegionSet<S>) -> Vec<Option<&str>> {
    regions
        .names()
        .map(Some)
        .chain(std::iter::once(None))
        .collect()
}

fn describe_cell(cell: Option<&str>) -> String {
    match cell {
        Some(r) => format!("inside region `{r}`"),
        None => "outside every region".to_string(),
    }
}

/// The state a probe starts in for a trace whose first fix is `first`.
pub fn initial_state<S: Scalar>(
    probe: &ProbeDef,
    first: &Observation<S>,
    regions: &RegionSet<S>,
) -> StateId {
    match &probe.initial {
        InitialPolicy::Fixed(s) => *s,
        InitialPolicy::FromFirstObservation(map) => regions
            .classify(&first.position())
            .ok()
            .flatten()
            .and_then(|r| map.get(r.name()))
            .copied()
            .unwrap_or(probe.error),
    }
}

/// One running instance of a probe over one event stream.
#[derive(Debug, Clone)]
pub struct ProbeCursor<'p> {
    probe: &'p ProbeDef,
    current: StateId,
    visited: Vec<bool>,
    history: Vec<(usize, StateId)>,
}

impl<'p> ProbeCursor<'p> {
    pub fn new(probe: &'p ProbeDef, start: StateId) -> Self {
        let mut visited = vec![false; probe.states.len()];
        visited[start.0] = true;
        Self {
            probe,
            current: start,
            visited,
            history: Vec::new(),
        }
    }

    /// Places a cursor in the probe's initial state for `first`.
    pub fn start<S: Scalar>(
        probe: &'p ProbeDef,
        first: &Observation<S>,
        regions: &RegionSet<S>,
    ) -> Self {
        Self::new(probe, initial_state(probe, first, regions))
    }

    /// Advances on one event. The error transition is taken only when no
    /// other transition out of the current state is enabled.
    pub fn step<S: Scalar>(
        &mut self,
        event: &MoveEvent<S>,
        regions: &RegionSet<S>,
    ) -> Result<StateId, ProbeError> {
        let p = event.payload.position();
        let mut next: Option<StateId> = None;
        if self.current != self.probe.error {
            for t in self.probe.regular_transitions(self.current) {
                if !t.guard.evaluate(&p, regions) {
                    continue;
                }
                if let Some(other) = next {
                    return Err(ProbeError::NondeterministicStep {
                        state: self.probe.state_name(self.current).to_string(),
                        first: self.probe.state_name(other).to_string(),
                        second: self.probe.state_name(t.to).to_string(),
                    });
                }
                next = Some(t.to);
            }
        }
        self.current = next.unwrap_or(self.probe.error);
        self.visited[self.current.0] = true;
        self.history.push((event.index, self.current));
        Ok(self.current)
    }

    pub fn probe(&self) -> &'p ProbeDef {
        self.probe
    }

    pub fn current(&self) -> StateId {
        self.current
    }

    pub fn has_visited(&self, state: StateId) -> bool {
        self.visited[state.0]
    }

    pub fn visited(&self) -> impl Iterator<Item = StateId> + '_ {
        self.visited
            .iter()
            .enumerate()
            .filter(|(_, v)| **v)
            .map(|(i, _)| StateId(i))
    }

    /// `(event index, state after that event)`, one entry per step.
    pub fn history(&self) -> &[(usize, StateId)] {
        &self.history
    }
}
