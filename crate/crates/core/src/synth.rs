//! Labelled synthetic traces: vehicles driving the route between region
//! centres, optionally with a seeded fault.
//!
//! Every fix is generated with an intended cell (the region it is meant to
//! lie in, or none). Gaussian jitter is redrawn until the noisy fix lands in
//! its intended cell, so the label, computed from the intended cells alone,
//! holds for the emitted coordinates too.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::Deserialize;

use crate::geometry::{GeoPoint, RegionSet};
use crate::monitor::ProbeResult;
use crate::scalar::Scalar;
use crate::trace::{Observation, TimeOfDay, Trace, TraceError};

/// Region order along the airport service route.
pub const AIRPORT_CORRIDOR: [&str; 5] = ["airport", "suburbs1", "suburbs2", "centre", "garage"];

/// A round trip through the corridor: out to the garage and back.
const LOOP_ORDER: [usize; 8] = [0, 1, 2, 3, 4, 3, 2, 1];

pub const DEFAULT_SAMPLE_INTERVAL_S: u64 = 60;
pub const DEFAULT_TRAVEL_SPEED: f64 = 1e-4;
pub const DEFAULT_DWELL_S: u64 = 180;
pub const DEFAULT_NOISE_SIGMA: f64 = 1e-4;

/// Fraction of the smallest corridor half-extent that noise may reach.
const NOISE_LIMIT_FRACTION: f64 = 0.125;
const NOISE_REDRAWS: usize = 64;
const OSCILLATION_OFFSET: f64 = 1e-4;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SynthError {
    #[error("invalid route: {0}")]
    InvalidRoute(String),
    #[error("invalid fault: {0}")]
    InvalidFault(String),
    #[error("noise sigma {sigma} exceeds {limit}, labels could not be guaranteed")]
    NoiseTooLarge { sigma: f64, limit: f64 },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Trace(#[from] TraceError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Waypoint {
    pub point: GeoPoint<f64>,
    pub dwell_s: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RouteSpec {
    pub waypoints: Vec<Waypoint>,
    /// Degrees per second along straight segments.
    pub travel_speed: f64,
    pub sample_interval_s: u64,
    /// Standard deviation of the isotropic jitter, in degrees.
    pub noise_sigma: f64,
    pub seed: u64,
    pub start_time: TimeOfDay,
    /// Region chain used to label traces; neighbours in the chain may follow
    /// each other.
    pub corridor: Vec<String>,
}

impl RouteSpec {
    /// `laps` round trips between region centres of the airport corridor,
    /// starting at position `start` of the loop
    /// airport, suburbs1, suburbs2, centre, garage, centre, suburbs2, suburbs1.
    pub fn airport_loop<S: Scalar>(
        regions: &RegionSet<S>,
        start: usize,
        laps: usize,
        config: &FleetConfig,
        seed: u64,
        start_time: TimeOfDay,
    ) -> Result<Self, SynthError> {
        let centres = AIRPORT_CORRIDOR
            .iter()
            .map(|name| {
                let r = regions.get(name).ok_or_else(|| {
                    SynthError::InvalidRoute(format!("region `{name}` is missing"))
                })?;
                let c = r.center();
                Ok(GeoPoint {
                    longitude: c.longitude.to_degrees(),
                    latitude: c.latitude.to_degrees(),
                })
            })
            .collect::<Result<Vec<_>, SynthError>>()?;
        let n = LOOP_ORDER.len();
        let waypoints = (0..=n * laps)
            .map(|k| Waypoint {
                point: centres[LOOP_ORDER[(start + k) % n]],
                dwell_s: config.dwell_s,
            })
            .collect();
        Ok(Self {
            waypoints,
            travel_speed: config.travel_speed,
            sample_interval_s: config.sample_interval_s,
            noise_sigma: config.noise_sigma,
            seed,
            start_time,
            corridor: AIRPORT_CORRIDOR.iter().map(|s| s.to_string()).collect(),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    Longitude(f64),
    Latitude(f64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FaultSpec {
    None,
    /// After the first waypoint, drive to `target` (outside every region),
    /// stay `duration_s`, then rejoin the route at the second waypoint.
    Detour {
        target: GeoPoint<f64>,
        duration_s: u64,
    },
    /// Replace fix `index` with `target`, outside every region.
    OutOfRegionJump {
        index: usize,
        target: GeoPoint<f64>,
    },
    /// Stop on the first crossing of `boundary` and report alternating fixes
    /// either side of it for `cycles` back-and-forth pairs.
    BoundaryOscillation {
        boundary: Boundary,
        cycles: usize,
    },
}

impl FaultSpec {
    /// Detour towards a second depot north-east of the garage.
    pub fn default_detour() -> Self {
        FaultSpec::Detour {
            target: GeoPoint {
                longitude: -3.16,
                latitude: 55.975,
            },
            duration_s: 1800,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LabelledTrace<S> {
    pub trace: Trace<S>,
    pub label: ProbeResult,
}

#[derive(Debug, Clone, Copy)]
enum Leg {
    Dwell {
        at: GeoPoint<f64>,
        duration: f64,
        off_route: bool,
    },
    Travel {
        from: GeoPoint<f64>,
        to: GeoPoint<f64>,
        duration: f64,
        off_route: bool,
    },
    Oscillate {
        near: GeoPoint<f64>,
        far: GeoPoint<f64>,
        duration: f64,
    },
}

impl Leg {
    fn duration(&self) -> f64 {
        match *self {
            Leg::Dwell { duration, .. }
            | Leg::Travel { duration, .. }
            | Leg::Oscillate { duration, .. } => duration,
        }
    }
}

fn distance(a: GeoPoint<f64>, b: GeoPoint<f64>) -> f64 {
    (b.longitude - a.longitude).hypot(b.latitude - a.latitude)
}

fn lerp(a: GeoPoint<f64>, b: GeoPoint<f64>, t: f64) -> GeoPoint<f64> {
    GeoPoint {
        longitude: a.longitude + (b.longitude - a.longitude) * t,
        latitude: a.latitude + (b.latitude - a.latitude) * t,
    }
}

fn to_scalar<S: Scalar>(p: GeoPoint<f64>) -> Option<GeoPoint<S>> {
    GeoPoint::new(S::from_degrees(p.longitude)?, S::from_degrees(p.latitude)?).ok()
}

fn cell_of<S: Scalar>(regions: &RegionSet<S>, p: GeoPoint<f64>) -> Option<String> {
    let q = to_scalar::<S>(p)?;
    regions.classify_name(&q).ok().flatten().map(str::to_string)
}

fn route_legs(route: &RouteSpec) -> Vec<Leg> {
    let mut legs = Vec::new();
    for (i, wp) in route.waypoints.iter().enumerate() {
        legs.push(Leg::Dwell {
            at: wp.point,
            duration: wp.dwell_s as f64,
            off_route: false,
        });
        if let Some(next) = route.waypoints.get(i + 1) {
            legs.push(Leg::Travel {
                from: wp.point,
                to: next.point,
                duration: distance(wp.point, next.point) / route.travel_speed,
                off_route: false,
            });
        }
    }
    legs
}

fn apply_detour<S: Scalar>(
    legs: &mut Vec<Leg>,
    route: &RouteSpec,
    regions: &RegionSet<S>,
    target: GeoPoint<f64>,
    duration_s: u64,
) -> Result<(), SynthError> {
    if cell_of(regions, target).is_some() || to_scalar::<S>(target).is_none() {
        return Err(SynthError::InvalidFault(
            "detour target must lie outside every region".into(),
        ));
    }
    if duration_s < route.sample_interval_s {
        return Err(SynthError::InvalidFault(
            "detour must last at least one sample interval".into(),
        ));
    }
    let (first, second) = (route.waypoints[0].point, route.waypoints[1].point);
    let detour = [
        Leg::Travel {
            from: first,
            to: target,
            duration: distance(first, target) / route.travel_speed,
            off_route: true,
        },
        Leg::Dwell {
            at: target,
            duration: duration_s as f64,
            off_route: true,
        },
        Leg::Travel {
            from: target,
            to: second,
            duration: distance(target, second) / route.travel_speed,
            off_route: true,
        },
    ];
    // legs[1] is the direct first-to-second segment.
    legs.splice(1..2, detour);
    Ok(())
}

fn apply_oscillation<S: Scalar>(
    legs: &mut Vec<Leg>,
    route: &RouteSpec,
    regions: &RegionSet<S>,
    boundary: Boundary,
    cycles: usize,
) -> Result<(), SynthError> {
    if cycles == 0 {
        return Err(SynthError::InvalidFault(
            "oscillation needs at least one cycle".into(),
        ));
    }
    let axis = |p: GeoPoint<f64>| match boundary {
        Boundary::Longitude(_) => p.longitude,
        Boundary::Latitude(_) => p.latitude,
    };
    let value = match boundary {
        Boundary::Longitude(v) | Boundary::Latitude(v) => v,
    };
    let (pos, from, to, duration) = legs
        .iter()
        .enumerate()
        .find_map(|(i, leg)| match *leg {
            Leg::Travel {
                from,
                to,
                duration,
                off_route: false,
            } if (axis(from) - value) * (axis(to) - value) < 0.0 => Some((i, from, to, duration)),
            _ => None,
        })
        .ok_or_else(|| SynthError::InvalidFault(format!("route never crosses boundary {value}")))?;

    let s = (value - axis(from)) / (axis(to) - axis(from));
    let crossing = lerp(from, to, s);
    let toward = |sign: f64| {
        let mut p = crossing;
        match boundary {
            Boundary::Longitude(_) => p.longitude += sign * OSCILLATION_OFFSET,
            Boundary::Latitude(_) => p.latitude += sign * OSCILLATION_OFFSET,
        }
        p
    };
    let from_sign = if axis(from) < value { -1.0 } else { 1.0 };
    let (near, far) = (toward(from_sign), toward(-from_sign));
    let (near_cell, far_cell) = (cell_of(regions, near), cell_of(regions, far));
    if near_cell.is_none() || far_cell.is_none() || near_cell == far_cell {
        return Err(SynthError::InvalidFault(format!(
            "crossing of boundary {value} does not separate two regions"
        )));
    }
    let oscillate = [
        Leg::Travel {
            from,
            to: near,
            duration: duration * s,
            off_route: false,
        },
        Leg::Oscillate {
            near,
            far,
            duration: (2 * cycles) as f64 * route.sample_interval_s as f64,
        },
        Leg::Travel {
            from: far,
            to,
            duration: duration * (1.0 - s),
            off_route: false,
        },
    ];
    legs.splice(pos..pos + 1, oscillate);
    Ok(())
}

/// Largest noise sigma accepted for routes through `corridor`.
pub fn noise_limit<S: Scalar>(regions: &RegionSet<S>, corridor: &[String]) -> f64 {
    corridor
        .iter()
        .filter_map(|name| regions.get(name))
        .map(|r| {
            let w = (r.max_long.to_degrees() - r.min_long.to_degrees()) / 2.0;
            let h = (r.max_lat.to_degrees() - r.min_lat.to_degrees()) / 2.0;
            w.min(h)
        })
        .fold(f64::INFINITY, f64::min)
        * NOISE_LIMIT_FRACTION
}

/// Generates one trace and its expected verdict under the loose probe.
pub fn generate_trace<S: Scalar>(
    route: &RouteSpec,
    fault: &FaultSpec,
    vehicle_id: &str,
    regions: &RegionSet<S>,
) -> Result<LabelledTrace<S>, SynthError> {
    if route.waypoints.len() < 2 {
        return Err(SynthError::InvalidRoute(
            "at least two waypoints are required".into(),
        ));
    }
    if route.sample_interval_s == 0 || route.sample_interval_s >= crate::trace::SECONDS_PER_DAY {
        return Err(SynthError::InvalidRoute(
            "sample interval must be in (0, 86400) seconds".into(),
        ));
    }
    if !(route.travel_speed > 0.0 && route.travel_speed.is_finite()) {
        return Err(SynthError::InvalidRoute(
            "travel speed must be positive".into(),
        ));
    }
    if route.noise_sigma.is_nan() || route.noise_sigma < 0.0 {
        return Err(SynthError::InvalidRoute(
            "noise sigma must be non-negative".into(),
        ));
    }
    let limit = noise_limit(regions, &route.corridor);
    if route.noise_sigma > limit {
        return Err(SynthError::NoiseTooLarge {
            sigma: route.noise_sigma,
            limit,
        });
    }
    for wp in &route.waypoints {
        if cell_of(regions, wp.point).is_none() {
            return Err(SynthError::InvalidRoute(format!(
                "waypoint ({}, {}) lies in no region",
                wp.point.longitude, wp.point.latitude
            )));
        }
    }

    let mut legs = route_legs(route);
    match *fault {
        FaultSpec::None | FaultSpec::OutOfRegionJump { .. } => {}
        FaultSpec::Detour { target, duration_s } => {
            apply_detour(&mut legs, route, regions, target, duration_s)?
        }
        FaultSpec::BoundaryOscillation { boundary, cycles } => {
            apply_oscillation(&mut legs, route, regions, boundary, cycles)?
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(route.seed);
    let noise = Normal::new(0.0, route.noise_sigma).expect("sigma checked above");
    let total: f64 = legs.iter().map(Leg::duration).sum();
    let dt = route.sample_interval_s;
    let count = (total / dt as f64).floor() as u64 + 1;

    let mut fixes: Vec<(GeoPoint<S>, Option<String>)> = Vec::with_capacity(count as usize);
    let mut leg_index = 0;
    let mut leg_start = 0.0;
    let mut oscillation_first: Option<u64> = None;
    for k in 0..count {
        let t = (k * dt) as f64;
        while leg_index + 1 < legs.len() && t >= leg_start + legs[leg_index].duration() {
            leg_start += legs[leg_index].duration();
            leg_index += 1;
        }
        let leg = legs[leg_index];
        let (clean, nudge_to, off_route) = match leg {
            Leg::Dwell { at, off_route, .. } => (at, None, off_route),
            Leg::Travel {
                from,
                to,
                duration,
                off_route,
            } => {
                let frac = if duration > 0.0 {
                    ((t - leg_start) / duration).min(1.0)
                } else {
                    1.0
                };
                (lerp(from, to, frac), Some(to), off_route)
            }
            Leg::Oscillate { near, far, .. } => {
                let first = *oscillation_first.get_or_insert(k);
                (
                    if (k - first).is_multiple_of(2) {
                        near
                    } else {
                        far
                    },
                    None,
                    false,
                )
            }
        };
        let (clean, intended) = settle(regions, clean, nudge_to, off_route)?;
        let point = jitter(
            regions,
            clean,
            &intended,
            &noise,
            route.noise_sigma,
            &mut rng,
        )?;
        fixes.push((point, intended));
    }

    if let FaultSpec::OutOfRegionJump { index, target } = *fault {
        if cell_of(regions, target).is_some() {
            return Err(SynthError::InvalidFault(
                "jump target must lie outside every region".into(),
            ));
        }
        let slot = fixes.get_mut(index).ok_or_else(|| {
            SynthError::InvalidFault(format!("jump index {index} beyond trace of {count} fixes"))
        })?;
        let point = to_scalar(target)
            .ok_or_else(|| SynthError::InvalidFault("jump target out of range".into()))?;
        *slot = (point, None);
    }

    let label = label_for(
        fixes.iter().map(|(_, cell)| cell.as_deref()),
        &route.corridor,
    );
    let start = route.start_time.seconds_since_midnight();
    let observations = fixes
        .into_iter()
        .enumerate()
        .map(|(k, (p, _))| Observation {
            latitude: p.latitude,
            longitude: p.longitude,
            time: TimeOfDay::from_seconds(start + k as u64 * dt),
        })
        .collect();
    Ok(LabelledTrace {
        trace: Trace::new(vehicle_id, observations)?,
        label,
    })
}

/// Moves a route point sitting exactly on a boundary a hair towards where
/// the vehicle is heading, and reports the cell it is meant to occupy.
fn settle<S: Scalar>(
    regions: &RegionSet<S>,
    clean: GeoPoint<f64>,
    heading: Option<GeoPoint<f64>>,
    off_route: bool,
) -> Result<(GeoPoint<f64>, Option<String>), SynthError> {
    let cell = cell_of(regions, clean);
    if cell.is_some() || off_route {
        return Ok((clean, cell));
    }
    let target = heading.ok_or_else(|| {
        SynthError::InvalidRoute(format!(
            "route point ({}, {}) lies in no region",
            clean.longitude, clean.latitude
        ))
    })?;
    let span = distance(clean, target);
    let mut step = 1e-9;
    while step < 1e-4 && span > 0.0 {
        let p = lerp(clean, target, (step / span).min(1.0));
        if let Some(cell) = cell_of(regions, p) {
            return Ok((p, Some(cell)));
        }
        step *= 2.0;
    }
    Err(SynthError::InvalidRoute(format!(
        "route leaves every region near ({}, {})",
        clean.longitude, clean.latitude
    )))
}

fn jitter<S: Scalar>(
    regions: &RegionSet<S>,
    clean: GeoPoint<f64>,
    intended: &Option<String>,
    noise: &Normal<f64>,
    sigma: f64,
    rng: &mut ChaCha8Rng,
) -> Result<GeoPoint<S>, SynthError> {
    if sigma > 0.0 {
        for _ in 0..NOISE_REDRAWS {
            let p = GeoPoint {
                longitude: clean.longitude + noise.sample(rng),
                latitude: clean.latitude + noise.sample(rng),
            };
            if let Some(q) = to_scalar::<S>(p) {
                if regions.classify_name(&q).ok().flatten() == intended.as_deref() {
                    return Ok(q);
                }
            }
        }
    }
    to_scalar(clean).ok_or_else(|| {
        SynthError::InvalidRoute(format!(
            "point ({}, {}) is not representable",
            clean.longitude, clean.latitude
        ))
    })
}

/// Accepted iff every fix is meant to lie in a corridor region and
/// consecutive fixes stay in the same or neighbouring regions.
fn label_for<'a>(cells: impl Iterator<Item = Option<&'a str>>, corridor: &[String]) -> ProbeResult {
    let position = |c: Option<&str>| c.and_then(|name| corridor.iter().position(|r| r == name));
    let mut prev: Option<usize> = None;
    for cell in cells {
        let Some(here) = position(cell) else {
            return ProbeResult::Rejected;
        };
        if prev.is_some_and(|p| p.abs_diff(here) > 1) {
            return ProbeResult::Rejected;
        }
        prev = Some(here);
    }
    ProbeResult::Accepted
}

/// Shared route parameters for a generated fleet.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FleetConfig {
    pub sample_interval_s: u64,
    pub travel_speed: f64,
    pub dwell_s: u64,
    pub noise_sigma: f64,
    pub laps: usize,
}

impl Default for FleetConfig {
    fn default() -> Self {
        Self {
            sample_interval_s: DEFAULT_SAMPLE_INTERVAL_S,
            travel_speed: DEFAULT_TRAVEL_SPEED,
            dwell_s: DEFAULT_DWELL_S,
            noise_sigma: DEFAULT_NOISE_SIGMA,
            laps: 1,
        }
    }
}

pub fn parse_fleet_config(source: &str) -> Result<FleetConfig, SynthError> {
    toml::from_str(source).map_err(|e| SynthError::Config(e.to_string()))
}

#[derive(Debug, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum FaultEntry {
    None,
    Detour {
        target: [f64; 2],
        duration_s: u64,
    },
    OutOfRegionJump {
        index: usize,
        #[serde(default)]
        target: [f64; 2],
    },
    BoundaryOscillation {
        longitude: Option<f64>,
        latitude: Option<f64>,
        cycles: usize,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct FaultFile {
    #[serde(default)]
    fault: Vec<FaultEntry>,
}

/// Parses a fault list. Points are written `[longitude, latitude]`.
///
/// ```toml
/// [[fault]]
/// kind = "detour"
/// target = [-3.16, 55.975]
/// duration_s = 1800
///
/// [[fault]]
/// kind = "boundary_oscillation"
/// longitude = -3.28
/// cycles = 2
/// ```
pub fn parse_faults(source: &str) -> Result<Vec<FaultSpec>, SynthError> {
    let file: FaultFile = toml::from_str(source).map_err(|e| SynthError::Config(e.to_string()))?;
    let point = |[lon, lat]: [f64; 2]| {
        GeoPoint::new(lon, lat).map_err(|e| SynthError::Config(e.to_string()))
    };
    file.fault
        .into_iter()
        .map(|f| {
            Ok(match f {
                FaultEntry::None => FaultSpec::None,
                FaultEntry::Detour { target, duration_s } => FaultSpec::Detour {
                    target: point(target)?,
                    duration_s,
                },
                FaultEntry::OutOfRegionJump { index, target } => FaultSpec::OutOfRegionJump {
                    index,
                    target: point(target)?,
                },
                FaultEntry::BoundaryOscillation {
                    longitude,
                    latitude,
                    cycles,
                } => {
                    FaultSpec::BoundaryOscillation {
                        boundary: match (longitude, latitude) {
                            (Some(v), None) => Boundary::Longitude(v),
                            (None, Some(v)) => Boundary::Latitude(v),
                            _ => return Err(SynthError::Config(
                                "boundary_oscillation needs exactly one of longitude or latitude"
                                    .into(),
                            )),
                        },
                        cycles,
                    }
                }
            })
        })
        .collect()
}

/// `n_correct` fault-free vehicles plus one vehicle per fault, in a seeded
/// shuffled order, named `bus-01`, `bus-02`, ...
///
/// Fault-free vehicles start at a random point of the loop and a random
/// time of day. Detour vehicles start in the garage, so the detour comes
/// before any other region is reached.
pub fn generate_fleet<S: Scalar>(
    n_correct: usize,
    faults: &[FaultSpec],
    seed: u64,
    config: &FleetConfig,
    regions: &RegionSet<S>,
) -> Result<Vec<LabelledTrace<S>>, SynthError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut plan: Vec<FaultSpec> = std::iter::repeat_n(FaultSpec::None, n_correct)
        .chain(faults.iter().copied())
        .collect();
    plan.shuffle(&mut rng);

    let garage = AIRPORT_CORRIDOR
        .iter()
        .position(|r| *r == "garage")
        .expect("garage in corridor");
    let width = plan.len().to_string().len().max(2);
    plan.iter()
        .enumerate()
        .map(|(i, fault)| {
            let start = match fault {
                FaultSpec::Detour { .. } => garage,
                _ => rng.gen_range(0..LOOP_ORDER.len()),
            };
            let start_time =
                TimeOfDay::from_seconds(rng.gen_range(0..crate::trace::SECONDS_PER_DAY));
            let route = RouteSpec::airport_loop(
                regions,
                start,
                config.laps.max(1),
                config,
                rng.gen(),
                start_time,
            )?;
            generate_trace(&route, fault, &format!("bus-{:0width$}", i + 1), regions)
        })
        .collect()
}

/// Sidecar label file: `vehicle_id,expected_result` per line.
pub fn write_labels<S: Scalar>(fleet: &[LabelledTrace<S>]) -> String {
    let mut out = String::from("vehicle_id,expected_result\n");
    for lt in fleet {
        out.push_str(&format!("{},{:?}\n", lt.trace.vehicle_id(), lt.label));
    }
    out
}

pub fn parse_labels(source: &str) -> Result<BTreeMap<String, ProbeResult>, SynthError> {
    let mut out = BTreeMap::new();
    for (n, line) in source.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let (id, label) = line.split_once(',').ok_or_else(|| {
            SynthError::Config(format!("label line {}: expected two fields", n + 1))
        })?;
        let label = match label.trim() {
            "Accepted" => ProbeResult::Accepted,
            "Rejected" => ProbeResult::Rejected,
            other => {
                return Err(SynthError::Config(format!(
                    "label line {}: unknown result `{other}`",
                    n + 1
                )))
            }
        };
        out.insert(id.trim().to_string(), label);
    }
    Ok(out)
}
