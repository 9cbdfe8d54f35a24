//! Element-level brute force over concrete finite abelian groups
//! `Z/n_1 × … × Z/n_r`.
//!
//! Elements are stored as mixed-radix codes, so a subgroup is just a sorted
//! list of codes. Nothing here uses the structure theory of the symbolic
//! modules; the iso type of a subgroup is recovered by counting elements.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{factorize, valuation};
use crate::cardinal::Cardinal;
use crate::presentation::{Block, Presentation};
use crate::structure::{m_torsion, multiply};

/// Order bound for single calls.
pub const DEFAULT_BOUND: u64 = 1_000_000;
/// Order bound for exhaustive sweeps.
pub const SWEEP_BOUND: u64 = 200;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("group is not finite")]
    NotFinite,
    #[error("group order {order} exceeds the bound {bound}")]
    TooLarge { order: String, bound: u64 },
    #[error("multiplier must be a positive integer, got {0}")]
    InvalidMultiplier(u64),
}

pub type Result<T> = std::result::Result<T, OracleError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConcreteGroup {
    factors: Vec<u64>,
    order: u64,
}

impl ConcreteGroup {
    pub fn new(factors: Vec<u64>) -> Result<Self> {
        Self::with_bound(factors, DEFAULT_BOUND)
    }

    pub fn with_bound(factors: Vec<u64>, bound: u64) -> Result<Self> {
        assert!(factors.iter().all(|&n| n >= 2), "factors must be at least 2");
        let mut order = 1u64;
        for &n in &factors {
            order = order.checked_mul(n).filter(|&o| o <= bound).ok_or_else(|| OracleError::TooLarge {
                order: factors.iter().map(u64::to_string).collect::<Vec<_>>().join("*"),
                bound,
            })?;
        }
        Ok(ConcreteGroup { factors, order })
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    fn decode(&self, mut code: u64) -> Vec<u64> {
        self.factors
            .iter()
            .map(|&n| {
                let x = code % n;
                code /= n;
                x
            })
            .collect()
    }

    fn encode(&self, coords: &[u64]) -> u64 {
        self.factors.iter().zip(coords).rev().fold(0, |acc, (&n, &x)| acc * n + x)
    }

    fn scale(&self, code: u64, m: u64) -> u64 {
        let coords: Vec<u64> = self
            .decode(code)
            .into_iter()
            .zip(&self.factors)
            .map(|(x, &n)| ((x as u128 * m as u128) % n as u128) as u64)
            .collect();
        self.encode(&coords)
    }

    pub fn all(&self) -> Subgroup<'_> {
        Subgroup { group: self, elements: (0..self.order).collect() }
    }

    /// The coordinates of every element of `sub`, in code order.
    pub fn elements(&self, sub: &Subgroup<'_>) -> Vec<Vec<u64>> {
        sub.elements.iter().map(|&c| self.decode(c)).collect()
    }
}

/// An enumerated subset of a concrete group, closed under the group
/// operation by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup<'a> {
    group: &'a ConcreteGroup,
    elements: Vec<u64>,
}

impl<'a> Subgroup<'a> {
    pub fn order(&self) -> u64 {
        self.elements.len() as u64
    }

    pub fn elements(&self) -> Vec<Vec<u64>> {
        self.group.elements(self)
    }

    fn image(&self, m: u64) -> Subgroup<'a> {
        let mut out: Vec<u64> = self.elements.iter().map(|&c| self.group.scale(c, m)).collect();
        out.sort_unstable();
        out.dedup();
        Subgroup { group: self.group, elements: out }
    }

    fn kernel(&self, m: u64) -> Subgroup<'a> {
        let out = self.elements.iter().copied().filter(|&c| self.group.scale(c, m) == 0).collect();
        Subgroup { group: self.group, elements: out }
    }
}

/// One factor `p^k` per copy of each cyclic term.
pub fn realize(g: &Presentation) -> Result<ConcreteGroup> {
    realize_with_bound(g, DEFAULT_BOUND)
}

pub fn realize_with_bound(g: &Presentation, bound: u64) -> Result<ConcreteGroup> {
    let mut factors = Vec::new();
    for t in g.terms() {
        let (Block::Cyclic { p, k }, Some(copies)) = (&t.block, t.mult.as_u64()) else {
            return Err(OracleError::NotFinite);
        };
        let n = p.checked_pow(*k).ok_or_else(|| too_large(g, bound))?;
        for _ in 0..copies {
            factors.push(n);
            if factors.len() > 64 {
                return Err(too_large(g, bound));
            }
        }
    }
    ConcreteGroup::with_bound(factors, bound)
}

fn too_large(g: &Presentation, bound: u64) -> OracleError {
    OracleError::TooLarge { order: g.cardinality().to_string(), bound }
}

pub fn image_m_g(m: u64, g: &ConcreteGroup) -> Result<Subgroup<'_>> {
    if m == 0 {
        return Err(OracleError::InvalidMultiplier(m));
    }
    Ok(g.all().image(m))
}

pub fn kernel_m(m: u64, g: &ConcreteGroup) -> Result<Subgroup<'_>> {
    if m == 0 {
        return Err(OracleError::InvalidMultiplier(m));
    }
    Ok(g.all().kernel(m))
}

/// Iso type by counting: the number of `Z(p^j)` summands with `j ≥ i` is
/// `log_p |(p^{i-1}H)[p]|`.
pub fn iso_type(h: &Subgroup<'_>) -> Presentation {
    let order = h.order();
    let mut raw = Vec::new();
    for p in factorize(order).into_keys() {
        let mut at_least = Vec::new();
        let mut level = h.clone();
        loop {
            let socle = level.kernel(p).order();
            if socle == 1 {
                break;
            }
            at_least.push(valuation(p, socle));
            level = level.image(p);
        }
        for (i, &n) in at_least.iter().enumerate() {
            let next = at_least.get(i + 1).copied().unwrap_or(0);
            if n > next {
                raw.push((Block::cyclic(p, i as u32 + 1), Cardinal::fin(u64::from(n - next))));
            }
        }
    }
    Presentation::normalize(raw).expect("counted blocks are valid")
}

pub fn iso_type_of(g: &ConcreteGroup) -> Presentation {
    iso_type(&g.all())
}

fn partitions(n: u32, max: u32) -> Vec<Vec<u32>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for first in (1..=n.min(max)).rev() {
        for mut rest in partitions(n - first, first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every finite abelian group of order `n`, as presentations.
pub fn groups_of_order(n: u64) -> Vec<Presentation> {
    let mut acc: Vec<Vec<(Block, Cardinal)>> = vec![Vec::new()];
    for (p, e) in factorize(n) {
        let mut next = Vec::new();
        for base in &acc {
            for part in partitions(e, e) {
                let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
                for k in part {
                    *counts.entry(k).or_insert(0) += 1;
                }
                let mut blocks = base.clone();
                blocks.extend(counts.into_iter().map(|(k, c)| (Block::cyclic(p, k), Cardinal::fin(c))));
                next.push(blocks);
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|b| Presentation::normalize(b).expect("valid blocks"))
        .collect()
}

/// Every finite abelian group of order at most `n`, including the trivial one.
pub fn groups_up_to(n: u64) -> Vec<Presentation> {
    (1..=n).flat_map(groups_of_order).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CrossCheck {
    pub m: u64,
    pub image_order: u64,
    pub kernel_order: u64,
    pub oracle_image: Presentation,
    pub oracle_kernel: Presentation,
    pub symbolic_image: Presentation,
    pub symbolic_kernel: Presentation,
    pub agree: bool,
}

/// Compares `mG` and `G[m]` from the symbolic engine with the brute-force
/// enumeration for every `1 ≤ m ≤ max_m`.
pub fn cross_check(g: &Presentation, max_m: u64, bound: u64) -> Result<Vec<CrossCheck>> {
    let concrete = realize_with_bound(g, bound)?;
    Ok((1..=max_m)
        .into_par_iter()
        .map(|m| {
            let img = concrete.all().image(m);
            let ker = concrete.all().kernel(m);
            let oracle_image = iso_type(&img);
            let oracle_kernel = iso_type(&ker);
            let symbolic_image = multiply(m, g).expect("m >= 1");
            let symbolic_kernel = m_torsion(m, g).expect("m >= 1");
            let agree = oracle_image == symbolic_image
                && oracle_kernel == symbolic_kernel
                && img.order() * ker.order() == concrete.order();
            CrossCheck {
                m,
                image_order: img.order(),
                kernel_order: ker.order(),
                oracle_image,
                oracle_kernel,
                symbolic_image,
                symbolic_kernel,
                agree,
            }
        })
        .collect())
}
