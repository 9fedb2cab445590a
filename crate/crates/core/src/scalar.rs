//! The numeric type coordinates are carried in.
//!
//! Region membership only needs ordering, so every geometric operation is
//! generic over [`Scalar`]. Binary floats work for simulation and bulk
//! checking; [`rust_decimal::Decimal`] keeps coordinates exactly as they were
//! written in the input, digit for digit.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{FromPrimitive, Num, ToPrimitive};

pub trait Scalar:
    Copy
    + PartialOrd
    + Num
    + FromPrimitive
    + ToPrimitive
    + FromStr
    + Display
    + Debug
    + Send
    + Sync
    + 'static
{
    /// Parses a decimal literal, rejecting anything that is not a finite number.
    fn parse_literal(text: &str) -> Option<Self> {
        let value: Self = text.trim().parse().ok()?;
        value.to_f64().filter(|v| v.is_finite())?;
        Some(value)
    }

    fn from_degrees(value: f64) -> Option<Self> {
        Self::from_f64(value)
    }

    fn to_degrees(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}
impl Scalar for rust_decimal::Decimal {}
