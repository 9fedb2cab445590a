//! Boolean guards over region membership.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! expr    := and ( "||" and )*
//! and     := unary ( "&&" unary )*
//! unary   := "!" unary | atom
//! atom    := "true" | "false" | "in(" name ")" | "(" expr ")"
//! name    := quoted string | [A-Za-z0-9_.-]+
//! ```

use std::fmt;
use std::str::FromStr;

use crate::geometry::{GeoPoint, RegionSet};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum GuardExpr {
    Const(bool),
    In(String),
    Not(Box<GuardExpr>),
    And(Box<GuardExpr>, Box<GuardExpr>),
    Or(Box<GuardExpr>, Box<GuardExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("guard `{source_text}` at offset {offset}: {message}")]
pub struct GuardParseError {
    pub source_text: String,
    pub offset: usize,
    pub message: String,
}

impl GuardExpr {
    pub fn in_region(name: impl Into<String>) -> Self {
        GuardExpr::In(name.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(self) -> Self {
        GuardExpr::Not(Box::new(self))
    }

    pub fn and(self, other: GuardExpr) -> Self {
        GuardExpr::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: GuardExpr) -> Self {
        GuardExpr::Or(Box::new(self), Box::new(other))
    }

    /// Conjunction of the negations of `guards`, `true` when empty.
    pub fn none_of<'a>(guards: impl IntoIterator<Item = &'a GuardExpr>) -> Self {
        guards
            .into_iter()
            .map(|g| g.clone().not())
            .reduce(GuardExpr::and)
            .unwrap_or(GuardExpr::Const(true))
    }

    /// Evaluates against a position. An atom naming a region absent from
    /// `regions` is false.
    pub fn evaluate<S: Scalar>(&self, p: &GeoPoint<S>, regions: &RegionSet<S>) -> bool {
        match self {
            GuardExpr::Const(b) => *b,
            GuardExpr::In(name) => regions.get(name).is_some_and(|r| r.contains(p)),
            GuardExpr::Not(g) => !g.evaluate(p, regions),
            GuardExpr::And(a, b) => a.evaluate(p, regions) && b.evaluate(p, regions),
            GuardExpr::Or(a, b) => a.evaluate(p, regions) || b.evaluate(p, regions),
        }
    }

    /// Evaluates for a point known to lie in exactly `cell` (`None` meaning
    /// outside every region). With disjoint regions these cells are the only
    /// atom valuations a real point can produce.
    pub fn holds_in(&self, cell: Option<&str>) -> bool {
        match self {
            GuardExpr::Const(b) => *b,
            GuardExpr::In(name) => cell == Some(name.as_str()),
            GuardExpr::Not(g) => !g.holds_in(cell),
            GuardExpr::And(a, b) => a.holds_in(cell) && b.holds_in(cell),
            GuardExpr::Or(a, b) => a.holds_in(cell) || b.holds_in(cell),
        }
    }

    /// Region names mentioned by `in(..)` atoms, in first-use order.
    pub fn regions(&self) -> Vec<&str> {
        let mut out = Vec::new();
        self.collect_regions(&mut out);
        out
    }

    fn collect_regions<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            GuardExpr::Const(_) => {}
            GuardExpr::In(name) => {
                if !out.contains(&name.as_str()) {
                    out.push(name);
                }
            }
            GuardExpr::Not(g) => g.collect_regions(out),
            GuardExpr::And(a, b) | GuardExpr::Or(a, b) => {
                a.collect_regions(out);
                b.collect_regions(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            GuardExpr::Or(..) => 1,
            GuardExpr::And(..) => 2,
            _ => 3,
        }
    }
}

fn is_bare_name(name: &str) -> bool {
    !name.is_empty()
        && name
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

impl fmt::Display for GuardExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Binary operators associate to the left, so a right operand of the
        // same precedence needs parentheses to survive a reparse.
        let child = |f: &mut fmt::Formatter<'_>, g: &GuardExpr, min: u8| {
            if g.precedence() < min {
                write!(f, "({g})")
            } else {
                write!(f, "{g}")
            }
        };
        match self {
            GuardExpr::Const(b) => write!(f, "{b}"),
            GuardExpr::In(name) => write!(f, "in(\"{name}\")"),
            GuardExpr::Not(g) => {
                f.write_str("!")?;
                child(f, g, 3)
            }
            GuardExpr::And(a, b) => {
                child(f, a, 2)?;
                f.write_str(" && ")?;
                child(f, b, 3)
            }
            GuardExpr::Or(a, b) => {
                child(f, a, 1)?;
                f.write_str(" || ")?;
                child(f, b, 2)
            }
        }
    }
}

impl FromStr for GuardExpr {
    type Err = GuardParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_guard(s)
    }
}

pub fn parse_guard(text: &str) -> Result<GuardExpr, GuardParseError> {
    let mut parser = Parser { text, pos: 0 };
    let expr = parser.expr()?;
    parser.skip_ws();
    if parser.pos < text.len() {
        return Err(parser.error("unexpected trailing input"));
    }
    Ok(expr)
}

struct Parser<'a> {
    text: &'a str,
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> GuardParseError {
        GuardParseError {
            source_text: self.text.to_string(),
            offset: self.pos,
            message: message.into(),
        }
    }

    fn rest(&self) -> &str {
        &self.text[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.text.len() - trimmed.len();
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), GuardParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{token}`")))
        }
    }

    fn expr(&mut self) -> Result<GuardExpr, GuardParseError> {
        let mut lhs = self.conjunction()?;
        while self.eat("||") {
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<GuardExpr, GuardParseError> {
        let mut lhs = self.unary()?;
        while self.eat("&&") {
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<GuardExpr, GuardParseError> {
        if self.eat("!") {
            return Ok(self.unary()?.not());
        }
        self.atom()
    }

    fn keyword(&mut self, word: &str) -> bool {
        self.skip_ws();
        let rest = self.rest();
        let boundary = rest[word.len().min(rest.len())..]
            .chars()
            .next()
            .is_none_or(|c| !(c.is_ascii_alphanumeric() || c == '_'));
        if rest.starts_with(word) && boundary {
            self.pos += word.len();
            true
        } else {
            false
        }
    }

    fn atom(&mut self) -> Result<GuardExpr, GuardParseError> {
        if self.eat("(") {
            let inner = self.expr()?;
            self.expect(")")?;
            return Ok(inner);
        }
        if self.keyword("true") {
            return Ok(GuardExpr::Const(true));
        }
        if self.keyword("false") {
            return Ok(GuardExpr::Const(false));
        }
        if self.keyword("in") {
            self.expect("(")?;
            let name = self.region_name()?;
            self.expect(")")?;
            return Ok(GuardExpr::In(name));
        }
        Err(self.error("expected `true`, `false`, `in(..)`, `!` or `(`"))
    }

    fn region_name(&mut self) -> Result<String, GuardParseError> {
        self.skip_ws();
        if self.eat("\"") {
            let end = self
                .rest()
                .find('"')
                .ok_or_else(|| self.error("unterminated region name"))?;
            let name = self.rest()[..end].to_string();
            if name.is_empty() {
                return Err(self.error("empty region name"));
            }
            self.pos += end + 1;
            return Ok(name);
        }
        let len = self
            .rest()
            .find(|c: char| !(c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.')))
            .unwrap_or(self.rest().len());
        let name = self.rest()[..len].to_string();
        if !is_bare_name(&name) {
            return Err(self.error("expected a region name"));
        }
        self.pos += len;
        Ok(name)
    }
}
