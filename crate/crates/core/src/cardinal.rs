//! Symbolic cardinals: the finite numbers, the beth tower `ω, 𝔠 = 2^ω, 2^𝔠, …`
//! and the successors `κ⁺` of beth values.
//!
//! Inside this fragment every comparison is decided by ZFC except one family:
//! `Beth(k)⁺` versus `Beth(k + 1)` is provably `≤`, but whether the inequality is
//! strict is independent (for `k = 0` this is CH). Such comparisons surface as
//! [`CardOrdering::LeUnknownStrictness`] / [`CardOrdering::GeUnknownStrictness`]
//! and the boolean helpers raise [`Undecidable`] when the answer hinges on them.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest `n` accepted by `exp2(Fin(n))`.
const MAX_FINITE_EXPONENT: u64 = 1 << 16;

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Cardinal {
    Fin(BigUint),
    /// `Beth(0) = ω`, `Beth(1) = 𝔠`, `Beth(2) = 2^𝔠`, ...
    Beth(u32),
    /// The successor cardinal of `Beth(k)`.
    Succ(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CardOrdering {
    Lt,
    Eq,
    Gt,
    /// `a ≤ b` is provable, `a < b` is independent.
    LeUnknownStrictness,
    /// `a ≥ b` is provable, `a > b` is independent.
    GeUnknownStrictness,
}

impl CardOrdering {
    pub fn reverse(self) -> Self {
        match self {
            CardOrdering::Lt => CardOrdering::Gt,
            CardOrdering::Gt => CardOrdering::Lt,
            CardOrdering::Eq => CardOrdering::Eq,
            CardOrdering::LeUnknownStrictness => CardOrdering::GeUnknownStrictness,
            CardOrdering::GeUnknownStrictness => CardOrdering::LeUnknownStrictness,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("comparison {left} vs {right} is independent of ZFC")]
pub struct Undecidable {
    pub left: Cardinal,
    pub right: Cardinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CardinalError {
    #[error("2^({0}) lies outside the supported cardinal fragment")]
    SuccNotSupported(Cardinal),
    #[error("2^{0} is too large to materialize")]
    ExponentTooLarge(BigUint),
    #[error("invalid cardinal `{0}`")]
    Parse(String),
}

impl Cardinal {
    pub fn zero() -> Self {
        Cardinal::Fin(BigUint::zero())
    }

    pub fn one() -> Self {
        Cardinal::Fin(BigUint::one())
    }

    pub fn fin(n: u64) -> Self {
        Cardinal::Fin(BigUint::from(n))
    }

    pub const OMEGA: Cardinal = Cardinal::Beth(0);
    pub const CONTINUUM: Cardinal = Cardinal::Beth(1);

    pub fn is_zero(&self) -> bool {
        matches!(self, Cardinal::Fin(n) if n.is_zero())
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Cardinal::Fin(_))
    }

    pub fn is_infinite(&self) -> bool {
        !self.is_finite()
    }

    pub fn as_u64(&self) -> Option<u64> {
        match self {
            Cardinal::Fin(n) => n.to_u64(),
            _ => None,
        }
    }

    /// The successor `κ⁺`, available for beth values only.
    pub fn successor(&self) -> Result<Cardinal, CardinalError> {
        match self {
            Cardinal::Beth(k) => Ok(Cardinal::Succ(*k)),
            other => Err(CardinalError::SuccNotSupported(other.clone())),
        }
    }

    pub fn compare(&self, other: &Cardinal) -> CardOrdering {
        use Cardinal::*;
        match (self, other) {
            (Fin(a), Fin(b)) => from_std(a.cmp(b)),
            (Fin(_), _) => CardOrdering::Lt,
            (_, Fin(_)) => CardOrdering::Gt,
            (Beth(a), Beth(b)) | (Succ(a), Succ(b)) => from_std(a.cmp(b)),
            (Beth(a), Succ(b)) => {
                if a <= b {
                    CardOrdering::Lt
                } else if *a == b + 1 {
                    CardOrdering::GeUnknownStrictness
                } else {
                    CardOrdering::Gt
                }
            }
            (Succ(_), Beth(_)) => other.compare(self).reverse(),
        }
    }

    fn undecidable(&self, other: &Cardinal) -> Undecidable {
        Undecidable { left: self.clone(), right: other.clone() }
    }

    pub fn ge(&self, other: &Cardinal) -> Result<bool, Undecidable> {
        match self.compare(other) {
            CardOrdering::Gt | CardOrdering::Eq | CardOrdering::GeUnknownStrictness => Ok(true),
            CardOrdering::Lt => Ok(false),
            CardOrdering::LeUnknownStrictness => Err(self.undecidable(other)),
        }
    }

    pub fn le(&self, other: &Cardinal) -> Result<bool, Undecidable> {
        other.ge(self)
    }

    pub fn gt(&self, other: &Cardinal) -> Result<bool, Undecidable> {
        self.le(other).map(|b| !b)
    }

    pub fn lt(&self, other: &Cardinal) -> Result<bool, Undecidable> {
        self.ge(other).map(|b| !b)
    }

    pub fn eq_decided(&self, other: &Cardinal) -> Result<bool, Undecidable> {
        match self.compare(other) {
            CardOrdering::Eq => Ok(true),
            CardOrdering::Lt | CardOrdering::Gt => Ok(false),
            _ => Err(self.undecidable(other)),
        }
    }

    /// `≤` in the provable sense; never undecidable.
    fn provably_le(&self, other: &Cardinal) -> bool {
        matches!(
            self.compare(other),
            CardOrdering::Lt | CardOrdering::Eq | CardOrdering::LeUnknownStrictness
        )
    }

    /// Maximum of two cardinals. On the `Beth(k)⁺ ≤ Beth(k+1)` link the beth
    /// side is returned, which is the exact maximum.
    pub fn max(&self, other: &Cardinal) -> Cardinal {
        if self.provably_le(other) {
            other.clone()
        } else {
            self.clone()
        }
    }

    pub fn csum(&self, other: &Cardinal) -> Cardinal {
        match (self, other) {
            (Cardinal::Fin(a), Cardinal::Fin(b)) => Cardinal::Fin(a + b),
            _ => self.max(other),
        }
    }

    pub fn cprod(&self, other: &Cardinal) -> Cardinal {
        if self.is_zero() || other.is_zero() {
            return Cardinal::zero();
        }
        match (self, other) {
            (Cardinal::Fin(a), Cardinal::Fin(b)) => Cardinal::Fin(a * b),
            _ => self.max(other),
        }
    }

    pub fn exp2(&self) -> Result<Cardinal, CardinalError> {
        match self {
            Cardinal::Fin(n) => match n.to_u64() {
                Some(e) if e <= MAX_FINITE_EXPONENT => Ok(Cardinal::Fin(BigUint::one() << e)),
                _ => Err(CardinalError::ExponentTooLarge(n.clone())),
            },
            Cardinal::Beth(k) => Ok(Cardinal::Beth(k + 1)),
            Cardinal::Succ(_) => Err(CardinalError::SuccNotSupported(self.clone())),
        }
    }
}

fn from_std(o: std::cmp::Ordering) -> CardOrdering {
    match o {
        std::cmp::Ordering::Less => CardOrdering::Lt,
        std::cmp::Ordering::Equal => CardOrdering::Eq,
        std::cmp::Ordering::Greater => CardOrdering::Gt,
    }
}

/// Supremum of a finite, non-empty list; `None` for an empty list.
pub fn csup<'a>(items: impl IntoIterator<Item = &'a Cardinal>) -> Option<Cardinal> {
    items.into_iter().fold(None, |acc, c| match acc {
        None => Some(c.clone()),
        Some(m) => Some(m.max(c)),
    })
}

/// Cardinal sum of a finite list (zero for the empty list).
pub fn csum_all<'a>(items: impl IntoIterator<Item = &'a Cardinal>) -> Cardinal {
    items.into_iter().fold(Cardinal::zero(), |acc, c| acc.csum(c))
}

fn beth_text(k: u32) -> String {
    match k {
        0 => "w".to_string(),
        k => format!("{}c", "2^".repeat(k as usize - 1)),
    }
}

impl fmt::Display for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cardinal::Fin(n) => write!(f, "{n}"),
            Cardinal::Beth(k) => f.write_str(&beth_text(*k)),
            Cardinal::Succ(k) => write!(f, "{}+", beth_text(*k)),
        }
    }
}

impl fmt::Debug for Cardinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Cardinal {
    type Err = CardinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || CardinalError::Parse(s.to_string());
        let t = s.trim();
        if !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) {
            return t.parse::<BigUint>().map(Cardinal::Fin).map_err(|_| err());
        }
        let (body, succ) = match t.strip_suffix('+') {
            Some(b) => (b, true),
            None => (t, false),
        };
        let mut rest = body;
        let mut towers = 0u32;
        while let Some(r) = rest.strip_prefix("2^") {
            rest = r;
            towers += 1;
        }
        let k = match (rest, towers) {
            ("w", 0) => 0,
            ("c", n) => n + 1,
            _ => return Err(err()),
        };
        Ok(if succ { Cardinal::Succ(k) } else { Cardinal::Beth(k) })
    }
}

impl Serialize for Cardinal {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Cardinal {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Cardinal::*;

    fn f(n: u64) -> Cardinal {
        Cardinal::fin(n)
    }

    #[test]
    fn compare_examples() {
        assert_eq!(f(5).compare(&Beth(0)), CardOrdering::Lt);
        assert_eq!(Beth(1).compare(&Beth(1)), CardOrdering::Eq);
        assert_eq!(Succ(1).compare(&Beth(2)), CardOrdering::LeUnknownStrictness);
        assert_eq!(Beth(2).compare(&Succ(1)), CardOrdering::GeUnknownStrictness);
        assert_eq!(Succ(1).compare(&Beth(1)), CardOrdering::Gt);
        assert_eq!(Succ(0).compare(&Beth(2)), CardOrdering::Lt);
        assert_eq!(Beth(3).compare(&Succ(1)), CardOrdering::Gt);
    }

    #[test]
    fn decided_helpers() {
        assert_eq!(Beth(2).ge(&Succ(1)), Ok(true));
        assert!(Succ(1).ge(&Beth(2)).is_err());
        assert!(Succ(0).ge(&Beth(1)).is_err());
        assert!(Succ(1).lt(&Beth(2)).is_err());
        assert_eq!(Beth(1).lt(&Succ(1)), Ok(true));
        assert!(Beth(2).eq_decided(&Succ(1)).is_err());
    }

    #[test]
    fn arithmetic_examples() {
        assert_eq!(f(3).csum(&f(4)), f(7));
        assert_eq!(Beth(0).csum(&Beth(1)), Beth(1));
        assert_eq!(f(0).cprod(&Beth(1)), f(0));
        assert_eq!(f(3).cprod(&f(4)), f(12));
        assert_eq!(Succ(1).csum(&Beth(2)), Beth(2));
        assert_eq!(Beth(2).cprod(&Succ(1)), Beth(2));
    }

    #[test]
    fn csup_examples() {
        assert_eq!(csup(&[f(2), Beth(0)]), Some(Beth(0)));
        assert_eq!(csup(&[Beth(1), Beth(1)]), Some(Beth(1)));
        assert_eq!(csup(&[f(7), f(9), f(3)]), Some(f(9)));
        assert_eq!(csup(&[Succ(1), Beth(2)]), Some(Beth(2)));
        assert_eq!(csup(&[]), None);
    }

    #[test]
    fn exp2_examples() {
        assert_eq!(Beth(0).exp2(), Ok(Beth(1)));
        assert_eq!(f(3).exp2(), Ok(f(8)));
        assert_eq!(Succ(0).exp2(), Err(CardinalError::SuccNotSupported(Succ(0))));
    }

    #[test]
    fn text_round_trip() {
        for (s, c) in [
            ("0", f(0)),
            ("17", f(17)),
            ("w", Beth(0)),
            ("c", Beth(1)),
            ("c+", Succ(1)),
            ("2^c", Beth(2)),
            ("2^2^c", Beth(3)),
            ("w+", Succ(0)),
        ] {
            assert_eq!(s.parse::<Cardinal>().unwrap(), c);
            assert_eq!(c.to_string(), s);
        }
        assert!("2^w".parse::<Cardinal>().is_err());
        assert!("x".parse::<Cardinal>().is_err());
    }

    #[test]
    fn successor_only_for_beth() {
        assert_eq!(Beth(1).successor(), Ok(Succ(1)));
        assert!(Succ(1).successor().is_err());
        assert!(f(3).successor().is_err());
    }
}
