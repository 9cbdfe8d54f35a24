//! Elementary transforms: `mG`, `G[m]`, torsion and primary parts, prime
//! support and rank profiles.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::arith::factorize;
use crate::cardinal::{csum_all, Cardinal};
use crate::presentation::{Block, PrimeSet, Presentation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("multiplier must be a positive integer, got {0}")]
    InvalidMultiplier(u64),
}

/// A positive integer kept in factored form, `prime -> valuation`.
pub type Factored = BTreeMap<u64, u32>;

pub fn multiply(m: u64, g: &Presentation) -> Result<Presentation, StructureError> {
    if m == 0 {
        return Err(StructureError::InvalidMultiplier(m));
    }
    Ok(multiply_factored(&factorize(m), g))
}

pub fn multiply_factored(m: &Factored, g: &Presentation) -> Presentation {
    let v = |p: u64| m.get(&p).copied().unwrap_or(0);
    let mut out = Vec::with_capacity(g.terms().len());
    for t in g.terms() {
        let block = match &t.block {
            Block::Cyclic { p, k } => {
                let vp = v(*p);
                if *k <= vp {
                    continue;
                }
                Block::Cyclic { p: *p, k: k - vp }
            }
            Block::Soc(ex) => {
                let mut ex = ex.clone();
                ex.extend(m.iter().filter(|(_, &e)| e > 0).map(|(&p, _)| p));
                Block::Soc(ex)
            }
            other => other.clone(),
        };
        out.push((block, t.mult.clone()));
    }
    Presentation::from_blocks(out)
}

pub fn m_torsion(m: u64, g: &Presentation) -> Result<Presentation, StructureError> {
    if m == 0 {
        return Err(StructureError::InvalidMultiplier(m));
    }
    Ok(m_torsion_factored(&factorize(m), g))
}

pub fn m_torsion_factored(m: &Factored, g: &Presentation) -> Presentation {
    let v = |p: u64| m.get(&p).copied().unwrap_or(0);
    let mut out = Vec::new();
    for t in g.terms() {
        let mult = t.mult.clone();
        match &t.block {
            Block::Cyclic { p, k } => {
                let vp = v(*p);
                if vp > 0 {
                    out.push((Block::Cyclic { p: *p, k: (*k).min(vp) }, mult));
                }
            }
            Block::Prufer(p) => {
                let vp = v(*p);
                if vp > 0 {
                    out.push((Block::Cyclic { p: *p, k: vp }, mult));
                }
            }
            Block::Tower(p) => {
                let vp = v(*p);
                if vp > 0 {
                    for j in 1..vp {
                        out.push((Block::Cyclic { p: *p, k: j }, mult.clone()));
                    }
                    out.push((Block::Cyclic { p: *p, k: vp }, mult.cprod(&Cardinal::OMEGA)));
                }
            }
            Block::Soc(ex) => {
                for (&p, &e) in m {
                    if e > 0 && !ex.contains(&p) {
                        out.push((Block::Cyclic { p, k: 1 }, mult.clone()));
                    }
                }
            }
            Block::IntZ | Block::RatQ => {}
        }
    }
    Presentation::from_blocks(out)
}

pub fn torsion_part(g: &Presentation) -> Presentation {
    g.select(|t| !t.block.is_torsion_free())
}

pub fn torsion_free_part(g: &Presentation) -> Presentation {
    g.select(|t| t.block.is_torsion_free())
}

pub fn p_component(p: u64, g: &Presentation) -> Presentation {
    let mut out = Vec::new();
    for t in g.terms() {
        match &t.block {
            Block::Cyclic { p: q, .. } | Block::Prufer(q) | Block::Tower(q) if *q == p => {
                out.push((t.block.clone(), t.mult.clone()));
            }
            Block::Soc(ex) if !ex.contains(&p) && crate::arith::is_prime(p) => {
                out.push((Block::Cyclic { p, k: 1 }, t.mult.clone()));
            }
            _ => {}
        }
    }
    Presentation::from_blocks(out)
}

/// Primes explicitly named by some block (cyclic, Prüfer, tower, or an
/// excluded prime of a socle).
fn named_primes(g: &Presentation) -> BTreeSet<u64> {
    let mut out = BTreeSet::new();
    for t in g.terms() {
        match &t.block {
            Block::Cyclic { p, .. } | Block::Prufer(p) | Block::Tower(p) => {
                out.insert(*p);
            }
            Block::Soc(ex) => out.extend(ex.iter().copied()),
            _ => {}
        }
    }
    out
}

fn soc_excluded(g: &Presentation) -> Option<&BTreeSet<u64>> {
    g.terms().iter().find_map(|t| match &t.block {
        Block::Soc(ex) => Some(ex),
        _ => None,
    })
}

pub fn prime_support(g: &Presentation) -> PrimeSet {
    let named = named_primes(g);
    let nontrivial = |p: u64| !p_component(p, g).is_trivial();
    match soc_excluded(g) {
        Some(ex) => PrimeSet::Cofinite(ex.iter().copied().filter(|&p| !nontrivial(p)).collect()),
        None => PrimeSet::Finite(named.into_iter().filter(|&p| nontrivial(p)).collect()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RankProfile {
    pub r0: Cardinal,
    /// `r_p` at every explicitly named prime.
    pub rp: BTreeMap<u64, Cardinal>,
    /// `r_p` at all remaining primes (present only when a socle block exists).
    pub generic: Option<Cardinal>,
    pub r: Cardinal,
}

impl RankProfile {
    pub fn rank_at(&self, p: u64) -> Cardinal {
        self.rp
            .get(&p)
            .cloned()
            .or_else(|| self.generic.clone())
            .unwrap_or_else(Cardinal::zero)
    }

    /// All `r_p` values together with `r_0`.
    pub fn all_ranks(&self) -> impl Iterator<Item = &Cardinal> {
        std::iter::once(&self.r0).chain(self.rp.values()).chain(self.generic.iter())
    }
}

fn p_rank_of_block(p: u64, block: &Block, mult: &Cardinal) -> Cardinal {
    match block {
        Block::Cyclic { p: q, .. } | Block::Prufer(q) if *q == p => mult.clone(),
        Block::Tower(q) if *q == p => mult.csum(&Cardinal::OMEGA),
        Block::Soc(ex) if !ex.contains(&p) => mult.clone(),
        _ => Cardinal::zero(),
    }
}

pub fn rank_profile(g: &Presentation) -> RankProfile {
    let r0 = csum_all(g.terms().iter().filter(|t| t.block.is_torsion_free()).map(|t| &t.mult));
    let generic = g.terms().iter().find_map(|t| match &t.block {
        Block::Soc(_) => Some(t.mult.clone()),
        _ => None,
    });
    // with a socle present, zero entries record excluded primes and must stay
    let rp: BTreeMap<u64, Cardinal> = named_primes(g)
        .into_iter()
        .map(|p| {
            let r = g
                .terms()
                .iter()
                .fold(Cardinal::zero(), |acc, t| acc.csum(&p_rank_of_block(p, &t.block, &t.mult)));
            (p, r)
        })
        .filter(|(_, r)| generic.is_some() || !r.is_zero())
        .collect();
    let mut r = csum_all(rp.values()).csum(&r0);
    if let Some(k) = &generic {
        // infinitely many primes carry rank k
        r = r.csum(&k.cprod(&Cardinal::OMEGA));
    }
    RankProfile { r0, rp, generic, r }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    fn g(s: &str) -> Presentation {
        parse(s).unwrap()
    }

    #[test]
    fn multiply_examples() {
        assert_eq!(multiply(6, &g("Z(8) + Z(9)")).unwrap(), g("Z(4) + Z(3)"));
        let x = g("Z(2)^c + L(3) + Soc(P)");
        assert_eq!(multiply(1, &x).unwrap(), x);
        assert_eq!(multiply(12, &g("Z(3^inf)")).unwrap(), g("Z(3^inf)"));
        assert_eq!(multiply(0, &x), Err(StructureError::InvalidMultiplier(0)));
        assert_eq!(multiply(6, &g("Soc(P)")).unwrap(), g("Soc(P\\{2,3})"));
        assert_eq!(multiply(4, &g("L(2)^w + Z")).unwrap(), g("L(2)^w + Z"));
    }

    #[test]
    fn m_torsion_examples() {
        assert_eq!(m_torsion(6, &g("Z(8) + Z(9)")).unwrap(), g("Z(2) + Z(3)"));
        assert_eq!(m_torsion(12, &g("Z(2^inf)")).unwrap(), g("Z(4)"));
        assert!(m_torsion(5, &g("Z^c")).unwrap().is_trivial());
        assert_eq!(m_torsion(4, &g("L(2)")).unwrap(), g("Z(2) + Z(4)^w"));
        assert_eq!(m_torsion(30, &g("Soc(P\\{3})^c")).unwrap(), g("Z(2)^c + Z(5)^c"));
        assert_eq!(m_torsion(0, &g("Z")), Err(StructureError::InvalidMultiplier(0)));
    }

    #[test]
    fn torsion_and_components() {
        assert_eq!(torsion_part(&g("Z^c + Z(2)^5")), g("Z(2)^5"));
        assert!(torsion_part(&g("Q")).is_trivial());
        assert_eq!(torsion_part(&g("L(3) + Z(3^inf)")), g("L(3) + Z(3^inf)"));
        assert_eq!(p_component(2, &g("Z(4)^c + Z(9)")), g("Z(4)^c"));
        assert_eq!(p_component(5, &g("Soc(P\\{2,3})^w")), g("Z(5)^w"));
        assert!(p_component(3, &g("Z^w")).is_trivial());
    }

    #[test]
    fn prime_support_examples() {
        assert_eq!(prime_support(&g("Z(8) + Z(9)")), PrimeSet::Finite([2, 3].into()));
        assert_eq!(prime_support(&g("Soc(P\\{2})")), PrimeSet::Cofinite([2].into()));
        assert_eq!(prime_support(&g("Z^c")), PrimeSet::Finite(BTreeSet::new()));
        assert_eq!(prime_support(&g("Soc(P\\{2}) + L(2)")), PrimeSet::Cofinite(BTreeSet::new()));
    }

    #[test]
    fn rank_profile_examples() {
        let rp = rank_profile(&g("Z(2)^5 + Z^3"));
        assert_eq!(rp.r0, Cardinal::fin(3));
        assert_eq!(rp.rank_at(2), Cardinal::fin(5));
        assert_eq!(rp.r, Cardinal::fin(8));

        let rp = rank_profile(&g("L(2)"));
        assert_eq!(rp.r0, Cardinal::zero());
        assert_eq!(rp.rank_at(2), Cardinal::OMEGA);
        assert_eq!(rp.r, Cardinal::OMEGA);

        let rp = rank_profile(&Presentation::trivial());
        assert_eq!(rp.r0, Cardinal::zero());
        assert_eq!(rp.r, Cardinal::zero());

        let rp = rank_profile(&g("Soc(P\\{3})^2"));
        assert_eq!(rp.rank_at(3), Cardinal::zero());
        assert_eq!(rp.rank_at(7), Cardinal::fin(2));
        assert_eq!(rp.r, Cardinal::OMEGA);

        let rp = rank_profile(&g("Z^2 + Z(3^inf)"));
        assert_eq!(rp.r, Cardinal::fin(3));
    }
}
