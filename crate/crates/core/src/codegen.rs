//! Textual straight-line component for a trace.
//!
//! Grammar of the emitted text (one item per line, four-space indents):
//!
//! ```text
//! // straight-line component: <n> move actions in <k> processes
//! component Bus_<id> {
//!     store {
//!         attrib latitude := <lat0>;        (five attrib lines: latitude,
//!         ...                                longitude, hour, minutes, seconds)
//!     }
//!     behaviour {
//!         CHUNK<c> {
//!             S<i> = move*[true]<lat,long,HH,MM,SS>{
//!                 my.latitude := <lat>;      (five update lines)
//!                 ...
//!             }.<next>;                      (S<i+1>, CHUNK<c+1> or nil)
//!         }
//!     }
//!     init { CHUNK0 }
//! }
//! ```
//!
//! Every process holds at most `chunk_size` states. Coordinates are printed
//! with the scalar's own formatting, so exact inputs are reproduced digit
//! for digit.

use std::fmt::Write;

use crate::scalar::Scalar;
use crate::trace::{Observation, Trace};

/// Lines outside any chunk: header, store block and the closing structure.
const FIXED_LINES: usize = 13;
const LINES_PER_CHUNK: usize = 2;
const LINES_PER_STATE: usize = 7;

/// Sizes of the processes a trace of `len` fixes is split into.
pub fn chunk_sizes(len: usize, chunk_size: usize) -> Vec<usize> {
    assert!(chunk_size >= 1, "chunk size must be at least 1");
    (0..len.div_ceil(chunk_size))
        .map(|c| chunk_size.min(len - c * chunk_size))
        .collect()
}

/// Component name derived from the vehicle id.
pub fn component_name(vehicle_id: &str) -> String {
    let id: String = vehicle_id
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
        .collect();
    format!("Bus_{id}")
}

/// The five-tuple payload as it appears inside `move*[true]<...>`.
pub fn payload<S: Scalar>(o: &Observation<S>) -> String {
    format!(
        "{},{},{:02},{:02},{:02}",
        o.latitude,
        o.longitude,
        o.time.hour(),
        o.time.minute(),
        o.time.second()
    )
}

pub fn emit_component<S: Scalar>(trace: &Trace<S>, chunk_size: usize) -> String {
    let sizes = chunk_sizes(trace.len(), chunk_size);
    let obs = trace.observations();
    let first = trace.first();
    let mut out = String::with_capacity(obs.len() * 220 + 512);

    // Writing to a String cannot fail.
    let _ = writeln!(
        out,
        "// straight-line component: {} move actions in {} processes",
        obs.len(),
        sizes.len()
    );
    let _ = writeln!(out, "component {} {{", component_name(trace.vehicle_id()));
    out.push_str("    store {\n");
    for (field, value) in fields(first) {
        let _ = writeln!(out, "        attrib {field} := {value};");
    }
    out.push_str("    }\n    behaviour {\n");

    let mut i = 0;
    for (c, &size) in sizes.iter().enumerate() {
        let _ = writeln!(out, "        CHUNK{c} {{");
        for k in 0..size {
            let o = &obs[i];
            let _ = writeln!(out, "            S{i} = move*[true]<{}>{{", payload(o));
            for (field, value) in fields(o) {
                let _ = writeln!(out, "                my.{field} := {value};");
            }
            let next = if i + 1 == obs.len() {
                "nil".to_string()
            } else if k + 1 == size {
                format!("CHUNK{}", c + 1)
            } else {
                format!("S{}", i + 1)
            };
            let _ = writeln!(out, "            }}.{next};");
            i += 1;
        }
        out.push_str("        }\n");
    }
    out.push_str("    }\n    init { CHUNK0 }\n}\n");
    out
}

fn fields<S: Scalar>(o: &Observation<S>) -> [(&'static str, String); 5] {
    [
        ("latitude", o.latitude.to_string()),
        ("longitude", o.longitude.to_string()),
        ("hour", format!("{:02}", o.time.hour())),
        ("minutes", format!("{:02}", o.time.minute())),
        ("seconds", format!("{:02}", o.time.second())),
    ]
}

/// Line count of `emit_component(trace, chunk_size)`, computed from the
/// template without emitting anything.
pub fn estimate_emitted_size<S: Scalar>(trace: &Trace<S>, chunk_size: usize) -> usize {
    let chunks = chunk_sizes(trace.len(), chunk_size).len();
    FIXED_LINES + LINES_PER_CHUNK * chunks + LINES_PER_STATE * trace.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::trace::parse_trace;
    use rust_decimal::Decimal;

    const SAMPLE: &str = "55.948413846216582,-3.363214449536430,00:11:39\n\
                        55.944855742591862,-3.361568243977290,00:12:41\n\
                        55.937544319811479,-3.358045792384101,00:13:43\n";

    #[test]
    fn ceiling_division() {
        assert_eq!(chunk_sizes(1440, 500), vec![500, 500, 440]);
        assert_eq!(chunk_sizes(1, 1), vec![1]);
        assert_eq!(chunk_sizes(3, 1000), vec![3]);
        assert_eq!(chunk_sizes(1000, 1000), vec![1000]);
        assert!(chunk_sizes(0, 7).is_empty());
    }

    #[test]
    fn sample_payload_verbatim() {
        let t = parse_trace::<Decimal>(SAMPLE, "sample", b',').unwrap();
        let text = emit_component(&t, 1000);
        assert!(text.contains("S0 = move*[true]<55.948413846216582,-3.363214449536430,00,11,39>{"));
        assert_eq!(text.matches("move*[true]").count(), 3);
        assert_eq!(text.matches("CHUNK0 {").count(), 1);
        assert!(text.contains("}.nil;"));
        assert_eq!(text.lines().count(), estimate_emitted_size(&t, 1000));
    }

    #[test]
    fn one_chunk_per_state() {
        let t = parse_trace::<Decimal>(SAMPLE, "sample 1", b',').unwrap();
        let text = emit_component(&t, 1);
        for c in 0..3 {
            assert!(text.contains(&format!("CHUNK{c} {{")));
        }
        assert!(text.contains("}.CHUNK1;") && text.contains("}.CHUNK2;"));
        assert!(!text.contains("CHUNK3"));
        assert!(text.contains("component Bus_sample_1 {"));
        assert_eq!(text.lines().count(), estimate_emitted_size(&t, 1));
    }

    #[test]
    fn emission_is_deterministic() {
        let t = parse_trace::<f64>(SAMPLE, "sample", b',').unwrap();
        assert_eq!(emit_component(&t, 2), emit_component(&t, 2));
    }
}
