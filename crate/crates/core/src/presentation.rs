//! Normal forms for abelian groups written as finite formal direct sums of
//! primitive blocks with cardinal multiplicities.
//!
//! Two presentations are treated as isomorphic exactly when their normal forms
//! are equal. Normalization is computed from the isomorphism invariants of the
//! supported block class rather than from the surface terms:
//!
//! * free rank (`Z`) and rational rank (`Q`);
//! * per prime `p`: the Prüfer rank, the tower multiplicity `t_p` (each copy of
//!   `L_p` contributes one `Z(p^n)` at every level `n ≥ 1`) and the
//!   Ulm-Kaplanski invariants `α_{p,n}` of the reduced part;
//! * the socle part: cofinite `Soc` blocks contribute to `α_{p,1}` at every
//!   prime outside their excluded set.
//!
//! The rebuild step writes the invariants back out with a fixed rule, so
//! equal invariants give equal terms. Cyclic terms swallowed by an infinite
//! tower or socle multiplicity disappear, e.g. `L(2)^w + Z(2^2)^5` is `L(2)^w`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Pow};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::{factorize, is_prime};
use crate::cardinal::{csum_all, Cardinal, CardOrdering};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Block {
    /// `Z(p^k)`, `k ≥ 1`.
    Cyclic { p: u64, k: u32 },
    /// `Z(p^∞)`.
    Prufer(u64),
    /// `L_p = ⊕_{n ≥ 1} Z(p^n)`.
    Tower(u64),
    /// `⊕_{p ∉ excluded} Z(p)`, the socle over a cofinite prime set.
    Soc(BTreeSet<u64>),
    IntZ,
    RatQ,
}

impl Block {
    pub fn cyclic(p: u64, k: u32) -> Block {
        Block::Cyclic { p, k }
    }

    pub fn soc_all() -> Block {
        Block::Soc(BTreeSet::new())
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, Block::Cyclic { .. })
    }

    pub fn is_torsion_free(&self) -> bool {
        matches!(self, Block::IntZ | Block::RatQ)
    }

    /// Every block except `Z(p^k)` is infinite (countable) and unbounded.
    pub fn is_unbounded(&self) -> bool {
        !self.is_cyclic()
    }

    fn validate(&self) -> Result<(), PresentationError> {
        let check = |p: u64| {
            if is_prime(p) {
                Ok(())
            } else {
                Err(PresentationError::InvalidPrime(p))
            }
        };
        match self {
            Block::Cyclic { p, k } => {
                check(*p)?;
                if *k == 0 {
                    return Err(PresentationError::InvalidModulus(1));
                }
                Ok(())
            }
            Block::Prufer(p) | Block::Tower(p) => check(*p),
            Block::Soc(ex) => ex.iter().try_for_each(|&p| check(p)),
            Block::IntZ | Block::RatQ => Ok(()),
        }
    }
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Block::Cyclic { p, k: 1 } => write!(f, "Z({p})"),
            Block::Cyclic { p, k } => write!(f, "Z({p}^{k})"),
            Block::Prufer(p) => write!(f, "Z({p}^inf)"),
            Block::Tower(p) => write!(f, "L({p})"),
            Block::Soc(ex) if ex.is_empty() => f.write_str("Soc(P)"),
            Block::Soc(ex) => write!(f, "Soc(P\\{{{}}})", join_primes(ex)),
            Block::IntZ => f.write_str("Z"),
            Block::RatQ => f.write_str("Q"),
        }
    }
}

impl Serialize for Block {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

pub(crate) fn serialize_display<T: fmt::Display, S: Serializer>(
    value: &T,
    serializer: S,
) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

pub(crate) fn join_primes(set: &BTreeSet<u64>) -> String {
    set.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum PrimeSet {
    Finite(BTreeSet<u64>),
    Cofinite(BTreeSet<u64>),
}

impl PrimeSet {
    pub fn contains(&self, p: u64) -> bool {
        match self {
            PrimeSet::Finite(s) => s.contains(&p),
            PrimeSet::Cofinite(ex) => is_prime(p) && !ex.contains(&p),
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PrimeSet::Cofinite(_))
    }
}

impl fmt::Display for PrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PrimeSet::Finite(s) => write!(f, "{{{}}}", join_primes(s)),
            PrimeSet::Cofinite(ex) if ex.is_empty() => f.write_str("P"),
            PrimeSet::Cofinite(ex) => write!(f, "P\\{{{}}}", join_primes(ex)),
        }
    }
}

impl Serialize for PrimeSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Input shapes accepted by [`Presentation::normalize`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RawBlock {
    Block(Block),
    /// `Z(n)` for an arbitrary modulus `n ≥ 2`, split by CRT.
    Mod(u64),
    /// `⊕_{p ∈ P} Z(p)` for a finite prime set.
    FiniteSoc(BTreeSet<u64>),
}

impl From<Block> for RawBlock {
    fn from(b: Block) -> Self {
        RawBlock::Block(b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PresentationError {
    #[error("invalid modulus {0}: Z(n) needs n >= 2")]
    InvalidModulus(u64),
    #[error("{0} is not a prime")]
    InvalidPrime(u64),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Term {
    pub block: Block,
    pub mult: Cardinal,
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mult == Cardinal::one() {
            write!(f, "{}", self.block)
        } else {
            write!(f, "{}^{}", self.block, self.mult)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Presentation {
    terms: Vec<Term>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Exponent {
    Finite(BigUint),
    Infinite,
}

impl Exponent {
    pub fn is_finite(&self) -> bool {
        matches!(self, Exponent::Finite(_))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Finite(n) => write!(f, "{n}"),
            Exponent::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Exponent {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl Presentation {
    pub fn trivial() -> Self {
        Presentation::default()
    }

    pub fn normalize<I, R>(raw: I) -> Result<Self, PresentationError>
    where
        I: IntoIterator<Item = (R, Cardinal)>,
        R: Into<RawBlock>,
    {
        let mut blocks = Vec::new();
        for (r, mult) in raw {
            match r.into() {
                RawBlock::Block(b) => {
                    b.validate()?;
                    blocks.push((b, mult));
                }
                RawBlock::Mod(n) => {
                    if n < 2 {
                        return Err(PresentationError::InvalidModulus(n));
                    }
                    for (p, k) in factorize(n) {
                        blocks.push((Block::Cyclic { p, k }, mult.clone()));
                    }
                }
                RawBlock::FiniteSoc(ps) => {
                    for p in ps {
                        if !is_prime(p) {
                            return Err(PresentationError::InvalidPrime(p));
                        }
                        blocks.push((Block::Cyclic { p, k: 1 }, mult.clone()));
                    }
                }
            }
        }
        Ok(canonicalize(blocks))
    }

    /// Normalizes already-validated blocks, e.g. sub-sums of a normal form.
    pub(crate) fn from_blocks(blocks: Vec<(Block, Cardinal)>) -> Self {
        canonicalize(blocks)
    }

    pub fn single(block: Block, mult: Cardinal) -> Result<Self, PresentationError> {
        Self::normalize([(block, mult)])
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn direct_sum(&self, other: &Presentation) -> Presentation {
        let blocks = self
            .terms
            .iter()
            .chain(other.terms.iter())
            .map(|t| (t.block.clone(), t.mult.clone()))
            .collect();
        canonicalize(blocks)
    }

    pub fn direct_sum_all<'a>(parts: impl IntoIterator<Item = &'a Presentation>) -> Presentation {
        let blocks = parts
            .into_iter()
            .flat_map(|p| p.terms.iter().map(|t| (t.block.clone(), t.mult.clone())))
            .collect();
        canonicalize(blocks)
    }

    /// Sub-sum of the terms satisfying `keep`.
    pub fn select(&self, mut keep: impl FnMut(&Term) -> bool) -> Presentation {
        let blocks = self
            .terms
            .iter()
            .filter(|t| keep(t))
            .map(|t| (t.block.clone(), t.mult.clone()))
            .collect();
        canonicalize(blocks)
    }

    pub fn map_multiplicities(&self, f: impl Fn(&Cardinal) -> Cardinal) -> Presentation {
        let blocks = self.terms.iter().map(|t| (t.block.clone(), f(&t.mult))).collect();
        canonicalize(blocks)
    }

    pub fn is_bounded(&self) -> bool {
        self.terms.iter().all(|t| t.block.is_cyclic())
    }

    pub fn cardinality(&self) -> Cardinal {
        self.terms.iter().fold(Cardinal::one(), |acc, t| {
            let size = match (&t.block, &t.mult) {
                (Block::Cyclic { p, k }, Cardinal::Fin(n)) => {
                    let order = BigUint::from(*p).pow(*k);
                    let n = u32::try_from(n).expect("finite multiplicity too large to expand");
                    Cardinal::Fin(order.pow(n))
                }
                (_, Cardinal::Fin(_)) => Cardinal::OMEGA,
                (_, kappa) => kappa.clone(),
            };
            acc.cprod(&size)
        })
    }

    /// Exponent of the cyclic sub-sum as `prime -> max k`.
    pub fn cyclic_exponent(&self) -> BTreeMap<u64, u32> {
        let mut out = BTreeMap::new();
        for t in &self.terms {
            if let Block::Cyclic { p, k } = t.block {
                let e = out.entry(p).or_insert(0);
                *e = (*e).max(k);
            }
        }
        out
    }

    pub fn exponent(&self) -> Exponent {
        if !self.is_bounded() {
            return Exponent::Infinite;
        }
        let n = self
            .cyclic_exponent()
            .into_iter()
            .fold(BigUint::one(), |acc, (p, k)| acc * BigUint::from(p).pow(k));
        Exponent::Finite(n)
    }

    /// Multiplicity of an exact block (zero if absent).
    pub fn multiplicity(&self, block: &Block) -> Cardinal {
        self.terms
            .iter()
            .find(|t| &t.block == block)
            .map(|t| t.mult.clone())
            .unwrap_or_else(Cardinal::zero)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    block: String,
    mult: Cardinal,
}

#[derive(Serialize, Deserialize)]
struct PresentationJson {
    terms: Vec<TermJson>,
}

impl Serialize for Presentation {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        PresentationJson {
            terms: self
                .terms
                .iter()
                .map(|t| TermJson { block: t.block.to_string(), mult: t.mult.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Presentation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = PresentationJson::deserialize(deserializer)?;
        let mut items = Vec::with_capacity(raw.terms.len());
        for t in raw.terms {
            let block = crate::dsl::parse_raw_block(&t.block).map_err(serde::de::Error::custom)?;
            items.push((block, t.mult));
        }
        Presentation::normalize(items).map_err(serde::de::Error::custom)
    }
}

#[derive(Clone)]
struct PrimeLedger {
    levels: BTreeMap<u32, Cardinal>,
    prufer: Cardinal,
    tower: Cardinal,
}

impl Default for PrimeLedger {
    fn default() -> Self {
        PrimeLedger { levels: BTreeMap::new(), prufer: Cardinal::zero(), tower: Cardinal::zero() }
    }
}

fn add_to(slot: &mut Cardinal, c: &Cardinal) {
    *slot = slot.csum(c);
}

/// The unique `λ` with `base + λ = total` under the rebuild convention.
/// Requires `base ≤ total`.
fn residual(total: &Cardinal, base: &Cardinal) -> Cardinal {
    if total == base {
        return Cardinal::zero();
    }
    match (total, base) {
        (Cardinal::Fin(t), Cardinal::Fin(b)) => Cardinal::Fin(t - b),
        _ => total.clone(),
    }
}

fn canonicalize(blocks: Vec<(Block, Cardinal)>) -> Presentation {
    let mut free = Cardinal::zero();
    let mut rational = Cardinal::zero();
    let mut primes: BTreeMap<u64, PrimeLedger> = BTreeMap::new();
    let mut socs: Vec<(BTreeSet<u64>, Cardinal)> = Vec::new();

    for (block, mult) in blocks {
        if mult.is_zero() {
            continue;
        }
        match block {
            Block::Cyclic { p, k } => {
                let slot = primes.entry(p).or_default().levels.entry(k).or_insert_with(Cardinal::zero);
                add_to(slot, &mult);
            }
            Block::Prufer(p) => add_to(&mut primes.entry(p).or_default().prufer, &mult),
            Block::Tower(p) => add_to(&mut primes.entry(p).or_default().tower, &mult),
            Block::Soc(ex) => socs.push((ex, mult)),
            Block::IntZ => add_to(&mut free, &mult),
            Block::RatQ => add_to(&mut rational, &mult),
        }
    }

    let soc_total = csum_all(socs.iter().map(|(_, m)| m));
    let mut candidates: BTreeSet<u64> = primes.keys().copied().collect();
    for (ex, _) in &socs {
        candidates.extend(ex.iter().copied());
    }

    let mut out: Vec<(Block, Cardinal)> = Vec::new();
    let mut excluded = BTreeSet::new();
    for p in candidates {
        let ledger = primes.get(&p).cloned().unwrap_or_default();
        let t = &ledger.tower;
        for (&k, c) in &ledger.levels {
            if k == 1 && !socs.is_empty() {
                continue;
            }
            let alpha = c.csum(t);
            let lambda = residual(&alpha, t);
            out.push((Block::Cyclic { p, k }, lambda));
        }
        if !socs.is_empty() {
            let from_socs = csum_all(socs.iter().filter(|(ex, _)| !ex.contains(&p)).map(|(_, m)| m));
            let c1 = ledger.levels.get(&1).cloned().unwrap_or_else(Cardinal::zero);
            let alpha1 = c1.csum(t).csum(&from_socs);
            let base_in = t.csum(&soc_total);
            // p stays in the socle iff its level-1 invariant provably covers the generic share
            let inside = matches!(
                base_in.compare(&alpha1),
                CardOrdering::Lt | CardOrdering::Eq | CardOrdering::LeUnknownStrictness
            );
            let lambda = if inside {
                residual(&alpha1, &base_in)
            } else {
                excluded.insert(p);
                residual(&alpha1, t)
            };
            out.push((Block::Cyclic { p, k: 1 }, lambda));
        }
        out.push((Block::Prufer(p), ledger.prufer.clone()));
        out.push((Block::Tower(p), ledger.tower.clone()));
    }
    if !socs.is_empty() {
        out.push((Block::Soc(excluded), soc_total));
    }
    out.push((Block::IntZ, free));
    out.push((Block::RatQ, rational));

    let mut terms: Vec<Term> = out
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(block, mult)| Term { block, mult })
        .collect();
    terms.sort_by(|a, b| a.block.cmp(&b.block));
    Presentation { terms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use Cardinal::*;

    fn f(n: u64) -> Cardinal {
        Cardinal::fin(n)
    }

    #[test]
    fn normalize_examples() {
        let g = Presentation::normalize([(RawBlock::Mod(6), f(1))]).unwrap();
        assert_eq!(g.to_string(), "Z(2) + Z(3)");
        let g = Presentation::normalize([(RawBlock::Mod(2), f(5)), (RawBlock::Mod(2), f(7))]).unwrap();
        assert_eq!(g.to_string(), "Z(2)^12");
        let g = Presentation::normalize([(RawBlock::Mod(2), Beth(0)), (RawBlock::Mod(2), Beth(1))]).unwrap();
        assert_eq!(g.to_string(), "Z(2)^c");
        assert_eq!(
            Presentation::normalize([(RawBlock::Mod(1), f(1))]),
            Err(PresentationError::InvalidModulus(1))
        );
        assert_eq!(
            Presentation::normalize([(RawBlock::Mod(0), f(1))]),
            Err(PresentationError::InvalidModulus(0))
        );
        assert_eq!(
            Presentation::normalize([(Block::Prufer(4), f(1))]),
            Err(PresentationError::InvalidPrime(4))
        );
    }

    #[test]
    fn zero_multiplicity_is_absent() {
        let g = Presentation::normalize([(Block::IntZ, f(0))]).unwrap();
        assert!(g.is_trivial());
    }

    #[test]
    fn direct_sum_examples() {
        assert_eq!(parse("Z^c").unwrap().direct_sum(&Presentation::trivial()), parse("Z^c").unwrap());
        assert_eq!(parse("Z(2)^3").unwrap().direct_sum(&parse("Z(2)^4").unwrap()), parse("Z(2)^7").unwrap());
        let s = parse("Z(4)^c").unwrap().direct_sum(&parse("Z(3)^w").unwrap());
        assert_eq!(s.to_string(), "Z(2^2)^c + Z(3)^w");
    }

    #[test]
    fn cardinality_examples() {
        assert_eq!(parse("Z(4)^5").unwrap().cardinality(), f(1024));
        assert_eq!(parse("Z(2)^w").unwrap().cardinality(), Beth(0));
        assert_eq!(parse("Z(2)^c + Z^w").unwrap().cardinality(), Beth(1));
        assert_eq!(Presentation::trivial().cardinality(), f(1));
        assert_eq!(parse("L(3)^4").unwrap().cardinality(), Beth(0));
    }

    #[test]
    fn exponent_examples() {
        assert_eq!(parse("Z(2)^c + Z(8)^3").unwrap().exponent(), Exponent::Finite(8u32.into()));
        assert_eq!(Presentation::trivial().exponent(), Exponent::Finite(1u32.into()));
        assert_eq!(parse("Z(2)^c + L(2)").unwrap().exponent(), Exponent::Infinite);
    }

    #[test]
    fn soc_merges_by_rank_per_prime() {
        // p-ranks: 2 -> 1, 3 -> 1, every other prime -> 2
        let g = parse("Soc(P\\{2}) + Soc(P\\{3})").unwrap();
        assert_eq!(g.to_string(), "Z(2) + Z(3) + Soc(P\\{2,3})^2");
        // an excluded prime topped up by a cyclic summand rejoins the socle
        assert_eq!(parse("Soc(P\\{2}) + Z(2)").unwrap(), parse("Soc(P)").unwrap());
        assert_eq!(parse("Soc(P)^w + Z(5)^7").unwrap(), parse("Soc(P)^w").unwrap());
        assert_eq!(parse("Soc(P\\{2})^w + Z(2)^w").unwrap(), parse("Soc(P)^w").unwrap());
        assert_eq!(parse("Soc(P\\{2})^w + Z(2)^5").unwrap().to_string(), "Z(2)^5 + Soc(P\\{2})^w");
        assert_eq!(parse("Soc(P)^2 + Z(3)^3").unwrap().to_string(), "Z(3)^3 + Soc(P)^2");
    }

    #[test]
    fn towers_absorb_smaller_cyclic_summands() {
        assert_eq!(parse("L(2)^w + Z(4)^5").unwrap(), parse("L(2)^w").unwrap());
        assert_eq!(parse("L(2)^w + Z(4)^c").unwrap().to_string(), "Z(2^2)^c + L(2)^w");
        assert_eq!(parse("L(2)^3 + Z(4)^2").unwrap().to_string(), "Z(2^2)^2 + L(2)^3");
        assert_eq!(parse("L(2)^2^c + Z(2)^c+").unwrap(), parse("L(2)^2^c").unwrap());
        // 2^c is not provably equal to c+, so nothing is absorbed here
        assert_eq!(parse("L(2)^c+ + Z(2)^2^c").unwrap().terms().len(), 2);
    }
}
