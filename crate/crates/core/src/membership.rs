//! The max-min scalar algebra over grade memberships.
//!
//! Every operation here only ever *selects* one of its inputs, so values
//! produced downstream are always 0, 1, or some bound input value. Equality
//! comparisons across the crate are exact for that reason.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// A grade membership in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Membership(f64);

impl Membership {
    pub const ZERO: Membership = Membership(0.0);
    pub const ONE: Membership = Membership(1.0);

    pub fn new(value: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&value) {
            // normalise -0.0 so printing and bit comparison stay stable
            Ok(Membership(value + 0.0))
        } else {
            Err(Error::InvalidMembership(value.to_string()))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    #[inline]
    pub fn max(self, other: Self) -> Self {
        snorm_max(self, other)
    }

    #[inline]
    pub fn min(self, other: Self) -> Self {
        tnorm_min(self, other)
    }
}

// NaN is unrepresentable, so the partial order is total.
impl Eq for Membership {}

impl Ord for Membership {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.total_cmp(&other.0)
    }
}

impl PartialOrd for Membership {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Membership {
    /// Shortest round-trip decimal (`0.6`, `1`, `0`).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl FromStr for Membership {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim();
        let v: f64 = trimmed
            .parse()
            .map_err(|_| Error::InvalidMembership(trimmed.to_string()))?;
        if v.is_nan() {
            return Err(Error::InvalidMembership(trimmed.to_string()));
        }
        Membership::new(v)
    }
}

impl TryFrom<f64> for Membership {
    type Error = Error;

    fn try_from(value: f64) -> Result<Self> {
        Membership::new(value)
    }
}

/// Union of grades: `max`, identity 0.
#[inline]
pub fn snorm_max(a: Membership, b: Membership) -> Membership {
    if b.0 > a.0 {
        b
    } else {
        a
    }
}

/// Intersection of grades: `min`, identity 1.
#[inline]
pub fn tnorm_min(a: Membership, b: Membership) -> Membership {
    if b.0 < a.0 {
        b
    } else {
        a
    }
}

/// Variable bindings, ordered by name for deterministic iteration.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment(BTreeMap<String, Membership>);

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, name: impl Into<String>, value: Membership) {
        self.0.insert(name.into(), value);
    }

    pub fn with(mut self, name: impl Into<String>, value: Membership) -> Self {
        self.set(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<Membership> {
        self.0.get(name).copied()
    }

    pub fn require(&self, name: &str) -> Result<Membership> {
        self.get(name)
            .ok_or_else(|| Error::MissingBinding(name.to_string()))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Membership)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn values(&self) -> impl Iterator<Item = Membership> + '_ {
        self.0.values().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Builds an assignment from `(name, value)` pairs, panicking on values
    /// outside `[0, 1]`. Intended for tests and fixtures.
    pub fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, f64)>) -> Self {
        let mut a = Assignment::new();
        for (name, v) in pairs {
            a.set(name, Membership::new(v).expect("membership in [0, 1]"));
        }
        a
    }

    /// Parses a single `name=value` binding as given on the command line.
    pub fn parse_binding(text: &str) -> Result<(String, Membership)> {
        let (name, value) = text.split_once('=').ok_or_else(|| Error::Syntax {
            line: 1,
            column: 1,
            message: format!("expected `name=value`, found `{text}`"),
        })?;
        let name = name.trim();
        if !crate::expr::is_identifier(name) {
            return Err(Error::Syntax {
                line: 1,
                column: 1,
                message: format!("invalid variable name `{name}`"),
            });
        }
        Ok((name.to_string(), value.parse()?))
    }

    /// Parses an assignment file: one `<var> = <decimal>` per line, `#` comments.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut out = Assignment::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("");
            if line.trim().is_empty() {
                continue;
            }
            let (name, value) = Self::parse_binding(line).map_err(|e| match e {
                Error::Syntax { message, .. } => Error::Syntax {
                    line: lineno + 1,
                    column: 1 + raw.len() - raw.trim_start().len(),
                    message,
                },
                other => other,
            })?;
            out.set(name, value);
        }
        Ok(out)
    }
}

impl FromIterator<(String, Membership)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (String, Membership)>>(iter: I) -> Self {
        Assignment(iter.into_iter().collect())
    }
}
