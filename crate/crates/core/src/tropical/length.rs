use std::cmp::Ordering;
use std::fmt;

use num_rational::Ratio;
use num_traits::{CheckedMul, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An edge length in `ℚ≥0 ∪ {∞}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Length {
    Finite(Ratio<i64>),
    Infinite,
}

impl Length {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den == 0 {
            return Err(Error::Input("length with zero denominator".into()));
        }
        let r = Ratio::new(num, den);
        if r < Ratio::zero() {
            return Err(Error::Input(format!("negative length {r}")));
        }
        Ok(Length::Finite(r))
    }

    pub fn integer(n: i64) -> Self {
        Length::new(n, 1).expect("nonnegative integer")
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Length::Finite(_))
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Length::Finite(r) => *r > Ratio::zero(),
            Length::Infinite => true,
        }
    }

    /// `2ℓ`, with `2·∞ = ∞`.
    pub fn double(&self) -> Result<Self> {
        match self {
            Length::Finite(r) => r
                .checked_mul(&Ratio::from_integer(2))
                .map(Length::Finite)
                .ok_or_else(|| Error::Input(format!("overflow doubling {r}"))),
            Length::Infinite => Ok(Length::Infinite),
        }
    }

    /// `ℓ/2`, with `∞/2 = ∞`.
    pub fn half(&self) -> Result<Self> {
        match self {
            Length::Finite(r) => r
                .checked_mul(&Ratio::new(1, 2))
                .map(Length::Finite)
                .ok_or_else(|| Error::Input(format!("overflow halving {r}"))),
            Length::Infinite => Ok(Length::Infinite),
        }
    }

    pub fn add(&self, other: &Length) -> Result<Self> {
        match (self, other) {
            (Length::Finite(a), Length::Finite(b)) => num_traits::CheckedAdd::checked_add(a, b)
                .map(Length::Finite)
                .ok_or_else(|| Error::Input(format!("overflow adding {a} and {b}"))),
            _ => Ok(Length::Infinite),
        }
    }

    pub fn to_json(&self, edge: usize) -> LengthJson {
        match self {
            Length::Finite(r) => LengthJson::Finite { edge: Some(edge), num: *r.numer(), den: *r.denom() },
            Length::Infinite => LengthJson::Infinite(Inf),
        }
    }
}

impl PartialOrd for Length {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Length {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Length::Finite(a), Length::Finite(b)) => a.cmp(b),
            (Length::Finite(_), Length::Infinite) => Ordering::Less,
            (Length::Infinite, Length::Finite(_)) => Ordering::Greater,
            (Length::Infinite, Length::Infinite) => Ordering::Equal,
        }
    }
}

impl fmt::Display for Length {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Length::Finite(r) => write!(f, "{r}"),
            Length::Infinite => f.write_str("inf"),
        }
    }
}

/// The literal string `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Inf;

impl Serialize for Inf {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str("inf")
    }
}

impl<'de> Deserialize<'de> for Inf {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        if s == "inf" {
            Ok(Inf)
        } else {
            Err(serde::de::Error::custom(format!("expected \"inf\", found {s:?}")))
        }
    }
}

/// Wire form: `{"edge": i, "num": p, "den": q}` or `"inf"`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(untagged)]
pub enum LengthJson {
    Finite {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        edge: Option<usize>,
        num: i64,
        #[serde(default = "one")]
        den: i64,
    },
    Infinite(Inf),
}

fn one() -> i64 {
    1
}

/// Reads a length list; entries with an explicit `edge` go to that edge,
/// the others fill positions in order.
pub fn lengths_from_json(entries: &[LengthJson], num_edges: usize) -> Result<Vec<Length>> {
    if entries.len() != num_edges {
        return Err(Error::Input(format!("{} lengths for {num_edges} edges", entries.len())));
    }
    let mut out: Vec<Option<Length>> = vec![None; num_edges];
    for (i, entry) in entries.iter().enumerate() {
        let (slot, value) = match entry {
            LengthJson::Finite { edge, num, den } => (edge.unwrap_or(i), Length::new(*num, *den)?),
            LengthJson::Infinite(_) => (i, Length::Infinite),
        };
        if slot >= num_edges {
            return Err(Error::Input(format!("length for unknown edge {slot}")));
        }
        if out[slot].replace(value).is_some() {
            return Err(Error::Input(format!("two lengths for edge {slot}")));
        }
    }
    Ok(out.into_iter().map(|x| x.expect("every slot filled")).collect())
}

pub fn lengths_to_json(lengths: &[Length]) -> Vec<LengthJson> {
    lengths.iter().enumerate().map(|(e, l)| l.to_json(e)).collect()
}
