//! Runtime verification of GPS traces against region probes.
//!
//! A trace of timestamped fixes is replayed as a stream of move events; a
//! probe automaton tracks which region the vehicle is in and falls into an
//! absorbing error state as soon as it leaves the permitted route. The crate
//! also generates labelled synthetic traces and emits the straight-line
//! component text for a trace.
//!
//! Everything numeric is generic over [`Scalar`]; [`Exact`] keeps decimal
//! coordinates digit for digit.

pub mod codegen;
pub mod geometry;
pub mod monitor;
pub mod probe;
pub mod scalar;
pub mod synth;
pub mod trace;

pub use geometry::{load_regions, write_regions, GeoPoint, GeometryError, Region, RegionSet};
pub use monitor::{
    fleet_report, measure_count_across, measure_count_in_state, measure_max_attribute, run_probe,
    Attribute, FleetReport, MeasureSeries, MonitorError, ProbeResult, ProbeRun, ReportRow,
    StateHistory, Verdict,
};
pub use probe::{
    builtin, builtin_loose, builtin_strict, parse_probe, write_probe, GuardExpr, ProbeDef,
    ProbeError, StateId,
};
pub use scalar::Scalar;
pub use trace::{
    as_event_stream, compute_elapsed, parse_trace, write_trace, MoveEvent, Observation, TimeOfDay,
    Trace, TraceError,
};

/// Exact decimal coordinates.
pub type Exact = rust_decimal::Decimal;

pub type ExactPoint = GeoPoint<Exact>;
pub type ExactRegionSet = RegionSet<Exact>;
pub type ExactTrace = Trace<Exact>;

pub type GeoPoint64 = GeoPoint<f64>;
pub type RegionSet64 = RegionSet<f64>;
pub type Trace64 = Trace<f64>;

pub type GeoPoint32 = GeoPoint<f32>;
pub type RegionSet32 = RegionSet<f32>;
pub type Trace32 = Trace<f32>;
