//! Named rectangular regions and point membership.

use std::collections::HashSet;
use std::fmt;

use crate::scalar::Scalar;

/// The shipped region file for the airport service route.
pub const DEFAULT_REGIONS: &str = include_str!("../config/regions.csv");

/// Header every region file must carry.
pub const REGION_HEADER: [&str; 5] = ["name", "min_long", "max_long", "min_lat", "max_lat"];

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeometryError {
    #[error("coordinate out of range: longitude {longitude}, latitude {latitude}")]
    OutOfRange { longitude: String, latitude: String },
    #[error("region `{name}` is degenerate: bounds must satisfy min < max on both axes")]
    Degenerate { name: String },
    #[error("region name `{0}` is declared more than once")]
    DuplicateName(String),
    #[error("regions `{first}` and `{second}` overlap")]
    Overlap { first: String, second: String },
    #[error("point lies inside both `{first}` and `{second}`")]
    Ambiguous { first: String, second: String },
    #[error("line {line}: field `{field}`: {message}")]
    Parse {
        line: u64,
        field: String,
        message: String,
    },
}

/// A position in decimal degrees, east- and north-positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint<S> {
    pub longitude: S,
    pub latitude: S,
}

impl<S: Scalar> GeoPoint<S> {
    pub fn new(longitude: S, latitude: S) -> Result<Self, GeometryError> {
        let point = Self {
            longitude,
            latitude,
        };
        if point.in_range() {
            Ok(point)
        } else {
            Err(GeometryError::OutOfRange {
                longitude: longitude.to_string(),
                latitude: latitude.to_string(),
            })
        }
    }

    pub fn in_range(&self) -> bool {
        within(self.longitude, 180) && within(self.latitude, 90)
    }
}

// Written so that NaN fails.
fn within<S: Scalar>(value: S, limit: i32) -> bool {
    let hi = S::from_i32(limit).expect("small integers are representable");
    let lo = S::from_i32(-limit).expect("small integers are representable");
    value >= lo && value <= hi
}

/// An open, axis-aligned rectangle.
#[derive(Debug, Clone, PartialEq)]
pub struct Region<S> {
    name: String,
    pub min_long: S,
    pub max_long: S,
    pub min_lat: S,
    pub max_lat: S,
}

impl<S: Scalar> Region<S> {
    pub fn new(
        name: impl Into<String>,
        min_long: S,
        max_long: S,
        min_lat: S,
        max_lat: S,
    ) -> Result<Self, GeometryError> {
        let name = name.into();
        let corners_valid =
            GeoPoint::new(min_long, min_lat).is_ok() && GeoPoint::new(max_long, max_lat).is_ok();
        if !corners_valid
            || min_long.partial_cmp(&max_long) != Some(std::cmp::Ordering::Less)
            || min_lat.partial_cmp(&max_lat) != Some(std::cmp::Ordering::Less)
        {
            return Err(GeometryError::Degenerate { name });
        }
        Ok(Self {
            name,
            min_long,
            max_long,
            min_lat,
            max_lat,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Strict on all four sides: a point on the boundary is outside.
    pub fn contains(&self, p: &GeoPoint<S>) -> bool {
        p.longitude > self.min_long
            && p.longitude < self.max_long
            && p.latitude > self.min_lat
            && p.latitude < self.max_lat
    }

    /// True when some point lies strictly inside both rectangles.
    pub fn interior_overlaps(&self, other: &Region<S>) -> bool {
        self.min_long < other.max_long
            && other.min_long < self.max_long
            && self.min_lat < other.max_lat
            && other.min_lat < self.max_lat
    }

    pub fn center(&self) -> GeoPoint<S> {
        let two = S::one() + S::one();
        GeoPoint {
            longitude: (self.min_long + self.max_long) / two,
            latitude: (self.min_lat + self.max_lat) / two,
        }
    }
}

impl<S: Scalar> fmt::Display for Region<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} = [({}, {}), ({}, {})]",
            self.name, self.min_long, self.min_lat, self.max_long, self.max_lat
        )
    }
}

/// A validated collection of regions with pairwise disjoint interiors.
///
/// Immutable once built, so a single set can be shared across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct RegionSet<S> {
    regions: Vec<Region<S>>,
}

impl<S: Scalar> RegionSet<S> {
    pub fn new(regions: Vec<Region<S>>) -> Result<Self, GeometryError> {
        let mut names = HashSet::new();
        for r in &regions {
            if !names.insert(r.name()) {
                return Err(GeometryError::DuplicateName(r.name.clone()));
            }
        }
        for (i, a) in regions.iter().enumerate() {
            for b in &regions[i + 1..] {
                if a.interior_overlaps(b) {
                    return Err(GeometryError::Overlap {
                        first: a.name.clone(),
                        second: b.name.clone(),
                    });
                }
            }
        }
        Ok(Self { regions })
    }

    pub fn empty() -> Self {
        Self {
            regions: Vec::new(),
        }
    }

    /// The five-region airport service layout shipped with the crate.
    pub fn airport_route() -> Self {
        load_regions(DEFAULT_REGIONS).expect("shipped region file is valid")
    }

    pub fn regions(&self) -> &[Region<S>] {
        &self.regions
    }

    pub fn len(&self) -> usize {
        self.regions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.regions.is_empty()
    }

    pub fn get(&self, name: &str) -> Option<&Region<S>> {
        self.regions.iter().find(|r| r.name == name)
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.regions.iter().map(|r| r.name.as_str())
    }

    /// The region strictly containing `p`, if any.
    ///
    /// Every region is tested so that an overlap slipping past validation is
    /// reported instead of resolved by list order.
    pub fn classify(&self, p: &GeoPoint<S>) -> Result<Option<&Region<S>>, GeometryError> {
        let mut found: Option<&Region<S>> = None;
        for r in self.regions.iter().filter(|r| r.contains(p)) {
            if let Some(first) = found {
                return Err(GeometryError::Ambiguous {
                    first: first.name.clone(),
                    second: r.name.clone(),
                });
            }
            found = Some(r);
        }
        Ok(found)
    }

    pub fn classify_name(&self, p: &GeoPoint<S>) -> Result<Option<&str>, GeometryError> {
        Ok(self.classify(p)?.map(Region::name))
    }
}

/// Parses a region file.
///
/// The format is comma-separated text with a `name,min_long,max_long,min_lat,max_lat`
/// header; blank lines and lines starting with `#` are skipped. Numbers are
/// parsed directly into `S`, so an exact scalar keeps every written digit.
pub fn load_regions<S: Scalar>(source: &str) -> Result<RegionSet<S>, GeometryError> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .flexible(true)
        .from_reader(source.as_bytes());

    let header = reader.headers().map_err(|e| csv_error(&e))?.clone();
    let header_line = header.position().map_or(1, |p| p.line());
    if header.is_empty() {
        return Ok(RegionSet::empty());
    }
    if header.iter().ne(REGION_HEADER.iter().copied()) {
        return Err(GeometryError::Parse {
            line: header_line,
            field: "header".into(),
            message: format!("expected `{}`", REGION_HEADER.join(",")),
        });
    }

    let mut regions = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(&e))?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != REGION_HEADER.len() {
            return Err(GeometryError::Parse {
                line,
                field: "record".into(),
                message: format!("expected 5 fields, found {}", record.len()),
            });
        }
        let name = &record[0];
        if name.is_empty() {
            return Err(GeometryError::Parse {
                line,
                field: "name".into(),
                message: "empty region name".into(),
            });
        }
        let mut bounds = [S::zero(); 4];
        for (slot, (field, text)) in bounds
            .iter_mut()
            .zip(REGION_HEADER[1..].iter().zip(record.iter().skip(1)))
        {
            *slot = S::parse_literal(text).ok_or_else(|| GeometryError::Parse {
                line,
                field: (*field).into(),
                message: format!("`{text}` is not a number"),
            })?;
        }
        let [min_long, max_long, min_lat, max_lat] = bounds;
        regions.push(Region::new(name, min_long, max_long, min_lat, max_lat)?);
    }
    RegionSet::new(regions)
}

fn csv_error(e: &csv::Error) -> GeometryError {
    GeometryError::Parse {
        line: e.position().map_or(0, |p| p.line()),
        field: "record".into(),
        message: e.to_string(),
    }
}

/// Renders a region set in the format [`load_regions`] reads.
pub fn write_regions<S: Scalar>(regions: &RegionSet<S>) -> String {
    let mut out = REGION_HEADER.join(",");
    out.push('\n');
    for r in regions.regions() {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            r.name, r.min_long, r.max_long, r.min_lat, r.max_lat
        ));
    }
    out
}
