//! Measurement traces and the move-event stream they broadcast.
//!
//! A trace file holds one GPS fix per line as `latitude, longitude, HH:MM:SS`.
//! Timestamps are time-of-day only; whenever the clock goes backwards the
//! trace is taken to have crossed midnight.

use std::fmt;
use std::str::FromStr;

use crate::geometry::GeoPoint;
use crate::scalar::Scalar;

pub const SECONDS_PER_DAY: u64 = 86_400;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum TraceError {
    #[error("trace contains no records")]
    Empty,
    #[error("line {line}: field `{field}`: {message}")]
    Malformed {
        line: u64,
        field: &'static str,
        message: String,
    },
    #[error("record {index} repeats the timestamp of the record before it")]
    DuplicateTimestamp { index: usize },
    #[error("invalid time of day `{0}`")]
    BadTime(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeOfDay {
    hour: u8,
    minute: u8,
    second: u8,
}

impl TimeOfDay {
    pub fn new(hour: u8, minute: u8, second: u8) -> Result<Self, TraceError> {
        if hour > 23 || minute > 59 || second > 59 {
            return Err(TraceError::BadTime(format!("{hour}:{minute}:{second}")));
        }
        Ok(Self {
            hour,
            minute,
            second,
        })
    }

    /// Wraps `seconds` onto the 24-hour clock.
    pub fn from_seconds(seconds: u64) -> Self {
        let s = seconds % SECONDS_PER_DAY;
        Self {
            hour: (s / 3600) as u8,
            minute: (s / 60 % 60) as u8,
            second: (s % 60) as u8,
        }
    }

    pub fn hour(self) -> u8 {
        self.hour
    }

    pub fn minute(self) -> u8 {
        self.minute
    }

    pub fn second(self) -> u8 {
        self.second
    }

    pub fn seconds_since_midnight(self) -> u64 {
        u64::from(self.hour) * 3600 + u64::from(self.minute) * 60 + u64::from(self.second)
    }
}

impl fmt::Display for TimeOfDay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}:{:02}", self.hour, self.minute, self.second)
    }
}

impl FromStr for TimeOfDay {
    type Err = TraceError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || TraceError::BadTime(s.to_string());
        let mut parts = s.trim().split(':');
        let mut next = || -> Result<u8, TraceError> {
            let part = parts.next().ok_or_else(bad)?;
            if part.is_empty() || part.len() > 2 || !part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            part.parse().map_err(|_| bad())
        };
        let (h, m, sec) = (next()?, next()?, next()?);
        if parts.next().is_some() {
            return Err(bad());
        }
        TimeOfDay::new(h, m, sec).map_err(|_| bad())
    }
}

/// One GPS fix: the five-tuple carried by a move event.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation<S> {
    pub latitude: S,
    pub longitude: S,
    pub time: TimeOfDay,
}

impl<S: Scalar> Observation<S> {
    pub fn position(&self) -> GeoPoint<S> {
        GeoPoint {
            longitude: self.longitude,
            latitude: self.latitude,
        }
    }
}

/// An ordered, non-empty sequence of fixes for one vehicle.
#[derive(Debug, Clone, PartialEq)]
pub struct Trace<S> {
    vehicle_id: String,
    observations: Vec<Observation<S>>,
    elapsed: Vec<u64>,
}

impl<S: Scalar> Trace<S> {
    pub fn new(
        vehicle_id: impl Into<String>,
        observations: Vec<Observation<S>>,
    ) -> Result<Self, TraceError> {
        let times: Vec<TimeOfDay> = observations.iter().map(|o| o.time).collect();
        let elapsed = compute_elapsed(&times)?;
        Ok(Self {
            vehicle_id: vehicle_id.into(),
            observations,
            elapsed,
        })
    }

    pub fn vehicle_id(&self) -> &str {
        &self.vehicle_id
    }

    pub fn observations(&self) -> &[Observation<S>] {
        &self.observations
    }

    /// Seconds since the first fix, one entry per observation.
    pub fn elapsed(&self) -> &[u64] {
        &self.elapsed
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }

    pub fn first(&self) -> &Observation<S> {
        &self.observations[0]
    }

    /// The move events a straight-line component built from this trace
    /// broadcasts, one per fix and in input order. Each call yields an
    /// independent cursor over the same immutable data.
    pub fn events(&self) -> impl ExactSizeIterator<Item = MoveEvent<S>> + '_ {
        self.observations.iter().zip(&self.elapsed).enumerate().map(
            |(index, (payload, &elapsed_s))| MoveEvent {
                index,
                payload: *payload,
                elapsed_s,
            },
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoveEvent<S> {
    pub index: usize,
    pub payload: Observation<S>,
    pub elapsed_s: u64,
}

/// Collects the event stream of `trace` into a vector.
pub fn as_event_stream<S: Scalar>(trace: &Trace<S>) -> Vec<MoveEvent<S>> {
    trace.events().collect()
}

/// Seconds since the first timestamp, adding a day each time the clock
/// goes backwards.
pub fn compute_elapsed(times: &[TimeOfDay]) -> Result<Vec<u64>, TraceError> {
    let (first, rest) = times.split_first().ok_or(TraceError::Empty)?;
    let mut out = Vec::with_capacity(times.len());
    out.push(0);
    let mut total = 0u64;
    let mut prev = first.seconds_since_midnight();
    for (i, t) in rest.iter().enumerate() {
        let now = t.seconds_since_midnight();
        if now == prev {
            return Err(TraceError::DuplicateTimestamp { index: i + 1 });
        }
        total += (now + SECONDS_PER_DAY - prev) % SECONDS_PER_DAY;
        out.push(total);
        prev = now;
    }
    Ok(out)
}

/// Parses delimited trace text. Records are `latitude, longitude, HH:MM:SS`;
/// lines starting with `#` are comments. Input order is kept as given.
pub fn parse_trace<S: Scalar>(
    source: &str,
    vehicle_id: impl Into<String>,
    delimiter: u8,
) -> Result<Trace<S>, TraceError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .comment(Some(b'#'))
        .delimiter(delimiter)
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source.as_bytes());

    let mut observations = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| TraceError::Malformed {
            line: e.position().map_or(0, |p| p.line()),
            field: "record",
            message: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != 3 {
            return Err(TraceError::Malformed {
                line,
                field: "record",
                message: format!("expected 3 fields, found {}", record.len()),
            });
        }
        let coordinate = |field: &'static str, text: &str| {
            S::parse_literal(text).ok_or_else(|| TraceError::Malformed {
                line,
                field,
                message: format!("`{text}` is not a number"),
            })
        };
        let latitude = coordinate("latitude", &record[0])?;
        let longitude = coordinate("longitude", &record[1])?;
        if GeoPoint::new(longitude, latitude).is_err() {
            return Err(TraceError::Malformed {
                line,
                field: "latitude/longitude",
                message: "coordinate out of range".into(),
            });
        }
        let time = record[2].parse().map_err(|_| TraceError::Malformed {
            line,
            field: "time",
            message: format!("`{}` is not HH:MM:SS", &record[2]),
        })?;
        observations.push(Observation {
            latitude,
            longitude,
            time,
        });
    }
    if observations.is_empty() {
        return Err(TraceError::Empty);
    }
    Trace::new(vehicle_id, observations)
}

/// Serializes a trace in the format [`parse_trace`] reads.
pub fn write_trace<S: Scalar>(trace: &Trace<S>, delimiter: char) -> String {
    let mut out = String::with_capacity(trace.len() * 48);
    for o in trace.observations() {
        out.push_str(&format!(
            "{}{d}{}{d}{}\n",
            o.latitude,
            o.longitude,
            o.time,
            d = delimiter
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rust_decimal::Decimal;

    const SAMPLE_ROWS: &str = "\
55.948413846216582,-3.363214449536430,00:11:39
55.944855742591862,-3.361568243977290,00:12:41
55.937544319811479,-3.358045792384101,00:13:43
";

    fn tod(s: &str) -> TimeOfDay {
        s.parse().unwrap()
    }

    // Independent route: absolute seconds with a day counter bumped on each wrap.
    fn absolute_oracle(times: &[&str]) -> Vec<u64> {
        let mut day = 0u64;
        let mut last: Option<u64> = None;
        let mut abs = Vec::new();
        for t in times {
            let parts: Vec<u64> = t.split(':').map(|p| p.parse().unwrap()).collect();
            let s = parts[0] * 3600 + parts[1] * 60 + parts[2];
            if matches!(last, Some(l) if s < l) {
                day += 1;
            }
            last = Some(s);
            abs.push(day * 86_400 + s);
        }
        abs.iter().map(|a| a - abs[0]).collect()
    }

    #[test]
    fn elapsed_examples() {
        let e = |ts: &[&str]| compute_elapsed(&ts.iter().map(|s| tod(s)).collect::<Vec<_>>());
        assert_eq!(
            e(&["00:11:39", "00:12:41", "00:13:43"]).unwrap(),
            vec![0, 62, 124]
        );
        assert_eq!(e(&["10:00:00"]).unwrap(), vec![0]);
        let wrap = ["23:59:00", "00:01:00", "00:03:00"];
        assert_eq!(absolute_oracle(&wrap), vec![0, 120, 240]);
        assert_eq!(e(&wrap).unwrap(), absolute_oracle(&wrap));
        assert_eq!(e(&["23:59:30", "00:00:30"]).unwrap(), vec![0, 60]);
        assert_eq!(e(&[]).unwrap_err(), TraceError::Empty);
        assert_eq!(
            e(&["01:00:00", "01:00:01", "01:00:01"]).unwrap_err(),
            TraceError::DuplicateTimestamp { index: 2 }
        );
    }

    #[test]
    fn parses_sample_rows() {
        let t = parse_trace::<Decimal>(SAMPLE_ROWS, "bus", b',').unwrap();
        assert_eq!(t.len(), 3);
        assert_eq!(t.elapsed(), &[0, 62, 124]);
        let ev = as_event_stream(&t);
        assert_eq!(
            ev.iter().map(|e| e.index).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
        let first = ev[0].payload;
        assert_eq!(first.latitude.to_string(), "55.948413846216582");
        assert_eq!(first.longitude.to_string(), "-3.363214449536430");
        assert_eq!(
            (first.time.hour(), first.time.minute(), first.time.second()),
            (0, 11, 39)
        );
        assert_eq!(write_trace(&t, ','), SAMPLE_ROWS);
    }

    #[test]
    fn single_record_and_midnight() {
        let t = parse_trace::<f64>("55.94,-3.36,12:00:00\n", "x", b',').unwrap();
        assert_eq!(t.elapsed(), &[0]);
        let t =
            parse_trace::<f64>("55.94,-3.36,23:59:30\n55.94,-3.35,00:00:30\n", "x", b',').unwrap();
        assert_eq!(t.elapsed(), &[0, 60]);
    }

    #[test]
    fn comments_and_custom_delimiter() {
        let src = "# vehicle 12\n55.94;-3.36;12:00:00\n\n# pause\n55.95;-3.35;12:01:00\n";
        let t = parse_trace::<f64>(src, "x", b';').unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn parse_errors_carry_location() {
        assert_eq!(
            parse_trace::<f64>("", "x", b',').unwrap_err(),
            TraceError::Empty
        );
        assert_eq!(
            parse_trace::<f64>("# only\n", "x", b',').unwrap_err(),
            TraceError::Empty
        );
        let err =
            parse_trace::<f64>("55.9,-3.3,00:00:01\n55.9,abc,00:00:02\n", "x", b',').unwrap_err();
        assert!(matches!(
            err,
            TraceError::Malformed {
                line: 2,
                field: "longitude",
                ..
            }
        ));
        let err = parse_trace::<f64>("55.9,-3.3,24:00:00\n", "x", b',').unwrap_err();
        assert!(matches!(
            err,
            TraceError::Malformed {
                line: 1,
                field: "time",
                ..
            }
        ));
        let err = parse_trace::<f64>("55.9,-3.3\n", "x", b',').unwrap_err();
        assert!(matches!(
            err,
            TraceError::Malformed {
                line: 1,
                field: "record",
                ..
            }
        ));
        let err = parse_trace::<f64>("95.0,-3.3,00:00:00\n", "x", b',').unwrap_err();
        assert!(matches!(err, TraceError::Malformed { line: 1, .. }));
    }

    #[test]
    fn time_of_day_parsing() {
        assert_eq!(tod("7:05:09").to_string(), "07:05:09");
        for bad in [
            "",
            "12:00",
            "12:00:00:00",
            "12:60:00",
            "1a:00:00",
            "-1:00:00",
            "123:00:00",
        ] {
            assert!(bad.parse::<TimeOfDay>().is_err(), "{bad}");
        }
        assert_eq!(
            TimeOfDay::from_seconds(86_400 + 3_661).to_string(),
            "01:01:01"
        );
    }

    fn decimal_coord(int_lo: i64, int_hi: i64) -> impl Strategy<Value = String> {
        (int_lo..int_hi, 0u64..1_000_000_000_000_000u64, 0usize..16).prop_map(
            |(i, frac, digits)| {
                if digits == 0 {
                    format!("{i}")
                } else {
                    let f = format!("{frac:015}");
                    format!("{i}.{}", &f[..digits.min(15)])
                }
            },
        )
    }

    proptest! {
        #[test]
        fn write_parse_round_trip(
            rows in prop::collection::vec((decimal_coord(-89, 89), decimal_coord(-179, 179)), 1..40),
            start in 0u64..86_400,
            gaps in prop::collection::vec(1u64..5_000, 40),
        ) {
            let mut text = String::new();
            let mut clock = start;
            for (i, (lat, lon)) in rows.iter().enumerate() {
                text.push_str(&format!("{lat},{lon},{}\n", TimeOfDay::from_seconds(clock)));
                clock += gaps[i];
            }
            let t = parse_trace::<Decimal>(&text, "v", b',').unwrap();
            prop_assert_eq!(write_trace(&t, ','), text);
            prop_assert_eq!(t.events().len(), rows.len());
            for (ev, o) in t.events().zip(t.observations()) {
                prop_assert_eq!(&ev.payload, o);
            }
            // Deltas agree with the raw clock modulo one day.
            for (w, g) in t.elapsed().windows(2).zip(&gaps) {
                prop_assert!(w[1] > w[0]);
                prop_assert_eq!((w[1] - w[0]) % SECONDS_PER_DAY, g % SECONDS_PER_DAY);
            }
        }
    }
}
