//! Divisible weight and rank, Ulm-Kaplanski invariants, and the decision
//! procedures built on them.
//!
//! `w_d(G) = min |nG|` and `r_d(G) = min r(nG)` range over all `n ≥ 1`. For a
//! presentation both minima are attained at `n₀`, the exponent of the cyclic
//! sub-sum: `n₀` kills every cyclic term, and `|·|` and `r(·)` of every other
//! block are unchanged by multiplication. For arbitrary `n`,
//! `lcm(n, n₀)·G ⊆ nG` and `lcm(n, n₀)·G` has the same size and rank as
//! `n₀G`, so no `n` does better.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Pow;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{divisors, expand};
use crate::cardinal::{csum_all, Cardinal, CardinalError, Undecidable};
use crate::presentation::{Block, Exponent, Presentation};
use crate::structure::{multiply, multiply_factored, rank_profile, Factored, RankProfile};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Undecidable(#[from] Undecidable),
    #[error(transparent)]
    Cardinal(#[from] CardinalError),
    #[error("group is not bounded")]
    NotBounded,
    #[error("group is trivial")]
    TrivialGroup,
    #[error("kappa = {0} is below the continuum")]
    KappaTooSmall(Cardinal),
    #[error("sigma = {0} must be an infinite cardinal")]
    SigmaNotInfinite(Cardinal),
    #[error("multiplier does not fit in 64 bits")]
    Overflow,
}

pub type Result<T> = std::result::Result<T, InvariantError>;

/// `n₀`: the exponent of the cyclic sub-sum, in factored form.
pub fn killing_multiplier(g: &Presentation) -> Factored {
    g.cyclic_exponent()
}

pub fn divisible_weight(g: &Presentation) -> Cardinal {
    multiply_factored(&killing_multiplier(g), g).cardinality()
}

pub fn divisible_rank(g: &Presentation) -> Cardinal {
    rank_profile(&multiply_factored(&killing_multiplier(g), g)).r
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UkRow {
    /// `α_{p,1}, …, α_{p,m_p}`.
    pub alphas: Vec<Cardinal>,
    pub leading_index: u32,
    pub leading: Cardinal,
}

/// One instance of `|k_p G| = p^{α_{p,m_p}}` (finite leading invariant) or
/// `|k_p G| = α_{p,m_p}` (infinite leading invariant).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LeadingSizeCheck {
    pub p: u64,
    #[serde(serialize_with = "crate::presentation::serialize_display")]
    pub k_p: BigUint,
    pub size: Cardinal,
    pub expected: Cardinal,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UkTable {
    pub rows: BTreeMap<u64, UkRow>,
    pub leading_checks: Vec<LeadingSizeCheck>,
}

impl UkTable {
    pub fn alpha(&self, p: u64, i: u32) -> Cardinal {
        self.rows
            .get(&p)
            .and_then(|r| r.alphas.get(i as usize - 1).cloned())
            .unwrap_or_else(Cardinal::zero)
    }
}

pub fn uk_invariants(g: &Presentation) -> Result<UkTable> {
    if !g.is_bounded() {
        return Err(InvariantError::NotBounded);
    }
    if g.is_trivial() {
        return Err(InvariantError::TrivialGroup);
    }
    let exponent = g.cyclic_exponent();
    let mut rows = BTreeMap::new();
    let mut leading_checks = Vec::new();
    for (&p, &top) in &exponent {
        let alphas: Vec<Cardinal> = (1..=top).map(|i| g.multiplicity(&Block::cyclic(p, i))).collect();
        let leading = alphas[top as usize - 1].clone();

        let mut k_p = exponent.clone();
        *k_p.get_mut(&p).expect("p in exponent") -= 1;
        let size = multiply_factored(&k_p, g).cardinality();
        let expected = match &leading {
            Cardinal::Fin(a) => {
                let a = u32::try_from(a).map_err(|_| InvariantError::Overflow)?;
                Cardinal::Fin(BigUint::from(p).pow(a))
            }
            infinite => infinite.clone(),
        };
        let k_p_value = k_p
            .iter()
            .fold(BigUint::from(1u32), |acc, (&q, &e)| acc * BigUint::from(q).pow(e));
        leading_checks.push(LeadingSizeCheck {
            p,
            k_p: k_p_value,
            holds: size == expected,
            size,
            expected,
        });
        rows.insert(p, UkRow { alphas, leading_index: top, leading });
    }
    Ok(UkTable { rows, leading_checks })
}

/// Bounded groups: all leading Ulm-Kaplanski invariants are at least `𝔠`.
/// The trivial group passes vacuously.
pub fn leading_uk_test(g: &Presentation) -> Result<bool> {
    if g.is_trivial() {
        return Ok(true);
    }
    let table = uk_invariants(g)?;
    for row in table.rows.values() {
        if !row.leading.ge(&Cardinal::CONTINUUM)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MWitness {
    pub m: u64,
    /// `|mG|`, non-trivial and below `𝔠`.
    pub size: Cardinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MGroupDecision {
    pub holds: bool,
    pub witness: Option<MWitness>,
}

/// For every `m`: `mG = {0}` or `|mG| ≥ 𝔠`.
///
/// Bounded groups scan the divisors of the exponent (`mG = gcd(m, k)G`);
/// unbounded groups reduce to `w_d(G) ≥ 𝔠` with witness `n₀`.
pub fn is_m_group(g: &Presentation) -> Result<MGroupDecision> {
    if g.is_bounded() {
        let exp = g.cyclic_exponent();
        let divs = divisors(&exp).ok_or(InvariantError::Overflow)?;
        for m in divs {
            let mg = multiply(m, g).expect("divisors are positive");
            if mg.is_trivial() {
                continue;
            }
            let size = mg.cardinality();
            if !size.ge(&Cardinal::CONTINUUM)? {
                return Ok(MGroupDecision { holds: false, witness: Some(MWitness { m, size }) });
            }
        }
        return Ok(MGroupDecision { holds: true, witness: None });
    }
    let n0 = killing_multiplier(g);
    let wd = divisible_weight(g);
    if wd.ge(&Cardinal::CONTINUUM)? {
        Ok(MGroupDecision { holds: true, witness: None })
    } else {
        let m = expand(&n0).ok_or(InvariantError::Overflow)?;
        Ok(MGroupDecision { holds: false, witness: Some(MWitness { m, size: wd }) })
    }
}

pub fn admits_connected_topology(g: &Presentation) -> Result<bool> {
    Ok(is_m_group(g)?.holds)
}

pub fn is_w_divisible(g: &Presentation) -> Result<bool> {
    Ok(divisible_weight(g).eq_decided(&g.cardinality())?)
}

pub fn is_r_divisible(g: &Presentation) -> Result<bool> {
    Ok(divisible_rank(g).eq_decided(&rank_profile(g).r)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PartSplit {
    /// Each copy of the block is one summand.
    Whole,
    /// Each `L_p` splits into `ω` towers indexed by a partition of `ℕ` into
    /// infinitely many infinite sets.
    TowerTails,
    /// Each socle splits along a partition of its prime set into infinitely
    /// many infinite classes.
    PrimePartition,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FamilyPart {
    pub block: Block,
    pub copies: Cardinal,
    pub split: PartSplit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyCase {
    /// `r_0(G) = |G|`.
    FreeRank,
    DivisibleTorsion,
    /// `L_p^{(τ)}` inside a `p`-primary part.
    PrimaryTowers,
    /// Infinitely many primes carry rank.
    SoclePartition,
    Mixed,
}

/// A direct sum `⊕_{i ∈ I} A_i` of unbounded subgroups read off the blocks.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UnboundedFamily {
    pub case: FamilyCase,
    pub parts: Vec<FamilyPart>,
    /// `|I|`.
    pub index: Cardinal,
    /// `|G|`.
    pub size: Cardinal,
}

impl UnboundedFamily {
    /// Each part is unbounded and `|I| = |G|`.
    pub fn verify(&self) -> std::result::Result<bool, Undecidable> {
        let parts_ok = self.parts.iter().all(|p| p.block.is_unbounded() && !p.copies.is_zero());
        let index = csum_all(self.parts.iter().map(|p| &p.copies));
        Ok(parts_ok && index == self.index && self.index.eq_decided(&self.size)?)
    }
}

/// The largest family of unbounded summands visible in the blocks.
pub fn unbounded_family(g: &Presentation) -> UnboundedFamily {
    let size = g.cardinality();
    let parts: Vec<FamilyPart> = g
        .terms()
        .iter()
        .filter(|t| t.block.is_unbounded())
        .map(|t| {
            let split = match t.block {
                Block::Tower(_) => PartSplit::TowerTails,
                Block::Soc(_) => PartSplit::PrimePartition,
                _ => PartSplit::Whole,
            };
            let copies = match split {
                PartSplit::Whole => t.mult.clone(),
                _ => t.mult.cprod(&Cardinal::OMEGA),
            };
            FamilyPart { block: t.block.clone(), copies, split }
        })
        .collect();
    let index = csum_all(parts.iter().map(|p| &p.copies));
    let reaches = |pred: fn(&Block) -> bool| {
        let c = csum_all(parts.iter().filter(|p| pred(&p.block)).map(|p| &p.copies));
        !c.is_zero() && c == size
    };
    let case = if reaches(Block::is_torsion_free) {
        FamilyCase::FreeRank
    } else if reaches(|b| matches!(b, Block::Prufer(_))) {
        FamilyCase::DivisibleTorsion
    } else if reaches(|b| matches!(b, Block::Tower(_))) {
        FamilyCase::PrimaryTowers
    } else if reaches(|b| matches!(b, Block::Soc(_))) {
        FamilyCase::SoclePartition
    } else {
        FamilyCase::Mixed
    };
    UnboundedFamily { case, parts, index, size }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrongUnboundedness {
    pub holds: bool,
    pub certificate: Option<UnboundedFamily>,
}

/// `G` is w-divisible and `r_d(G) ≥ ω`; a witness family is attached when true.
pub fn is_strongly_unbounded(g: &Presentation) -> Result<StrongUnboundedness> {
    let holds = is_w_divisible(g)? && divisible_rank(g).ge(&Cardinal::OMEGA)?;
    let certificate = holds.then(|| unbounded_family(g));
    Ok(StrongUnboundedness { holds, certificate })
}

pub fn is_sigma_homogeneous(g: &Presentation, sigma: &Cardinal) -> Result<bool> {
    if sigma.is_finite() {
        return Err(InvariantError::SigmaNotInfinite(sigma.clone()));
    }
    for t in g.terms() {
        if !t.mult.ge(sigma)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TorusEmbedding {
    pub holds: bool,
    pub reason: String,
}

/// Dense embeddability into `𝕋^κ`: `log κ ≤ w_d(G) ≤ |G| ≤ 2^κ`, decided in
/// the log-free form `κ ≤ 2^{w_d(G)}` and `|G| ≤ 2^κ`.
pub fn check_torus_embedding(g: &Presentation, kappa: &Cardinal) -> Result<TorusEmbedding> {
    if kappa.lt(&Cardinal::CONTINUUM)? {
        return Err(InvariantError::KappaTooSmall(kappa.clone()));
    }
    if let Cardinal::Succ(_) = kappa {
        return Err(CardinalError::SuccNotSupported(kappa.clone()).into());
    }
    let wd = divisible_weight(g);
    let size = g.cardinality();
    let exp_wd = wd.exp2()?;
    let exp_kappa = kappa.exp2()?;
    if !kappa.le(&exp_wd)? {
        return Ok(TorusEmbedding {
            holds: false,
            reason: format!("w_d = {wd}, kappa = {kappa} exceeds 2^w_d = {exp_wd}"),
        });
    }
    if !size.le(&exp_kappa)? {
        return Ok(TorusEmbedding {
            holds: false,
            reason: format!("|G| = {size} exceeds 2^kappa = {exp_kappa}"),
        });
    }
    Ok(TorusEmbedding {
        holds: true,
        reason: format!("kappa = {kappa} <= 2^w_d = {exp_wd} and |G| = {size} <= 2^kappa = {exp_kappa}"),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Flags {
    pub m_group: bool,
    pub w_divisible: bool,
    pub r_divisible: bool,
    pub strongly_unbounded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub group: String,
    pub cardinality: Cardinal,
    pub exponent: Exponent,
    pub rank_profile: RankProfile,
    pub w_d: Cardinal,
    pub r_d: Cardinal,
    pub uk: Option<UkTable>,
    pub m_group_witness: Option<MWitness>,
    pub flags: Flags,
}

pub fn report(g: &Presentation) -> Result<InvariantReport> {
    let m = is_m_group(g)?;
    let uk = if g.is_bounded() && !g.is_trivial() { Some(uk_invariants(g)?) } else { None };
    Ok(InvariantReport {
        group: g.to_string(),
        cardinality: g.cardinality(),
        exponent: g.exponent(),
        rank_profile: rank_profile(g),
        w_d: divisible_weight(g),
        r_d: divisible_rank(g),
        uk,
        flags: Flags {
            m_group: m.holds,
            w_divisible: is_w_divisible(g)?,
            r_divisible: is_r_divisible(g)?,
            strongly_unbounded: is_strongly_unbounded(g)?.holds,
        },
        m_group_witness: m.witness,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use Cardinal::*;

    fn g(s: &str) -> Presentation {
        parse(s).unwrap()
    }

    fn f(n: u64) -> Cardinal {
        Cardinal::fin(n)
    }

    #[test]
    fn divisible_weight_examples() {
        assert_eq!(divisible_weight(&g("Z(2)^c + Z^w")), Beth(0));
        assert_eq!(divisible_weight(&g("Z")), Beth(0));
        assert_eq!(divisible_weight(&g("Z(4)^c")), f(1));
        assert_eq!(divisible_weight(&Presentation::trivial()), f(1));
    }

    #[test]
    fn divisible_rank_examples() {
        assert_eq!(divisible_rank(&g("Z + Z(2)^c")), f(1));
        assert_eq!(divisible_rank(&g("L(2)")), Beth(0));
        assert_eq!(divisible_rank(&g("Z(8)^2^c")), f(0));
    }

    #[test]
    fn uk_examples() {
        let t = uk_invariants(&g("Z(2)^3 + Z(4)^c + Z(3)^w")).unwrap();
        assert_eq!(t.alpha(2, 1), f(3));
        assert_eq!(t.alpha(2, 2), Beth(1));
        assert_eq!(t.alpha(3, 1), Beth(0));
        assert_eq!(t.rows[&2].leading, Beth(1));
        assert_eq!(t.rows[&3].leading, Beth(0));
        let c3 = t.leading_checks.iter().find(|c| c.p == 3).unwrap();
        assert_eq!(c3.k_p, BigUint::from(4u32));
        assert_eq!(c3.size, Beth(0));
        assert!(t.leading_checks.iter().all(|c| c.holds));

        let t = uk_invariants(&g("Z(8)")).unwrap();
        assert_eq!(t.rows[&2].leading_index, 3);
        assert_eq!(t.rows[&2].leading, f(1));
        assert_eq!(t.leading_checks[0].size, f(2));
        assert!(t.leading_checks[0].holds);

        assert_eq!(uk_invariants(&g("Z^w")), Err(InvariantError::NotBounded));
        assert_eq!(uk_invariants(&Presentation::trivial()), Err(InvariantError::TrivialGroup));
    }

    #[test]
    fn m_group_examples() {
        let d = is_m_group(&g("Z(2)^c + Z(4)^3")).unwrap();
        assert!(!d.holds);
        assert_eq!(d.witness, Some(MWitness { m: 2, size: f(8) }));
        assert!(!leading_uk_test(&g("Z(2)^c + Z(4)^3")).unwrap());
        assert!(is_m_group(&g("Z(2)^w + Z^c")).unwrap().holds);
        assert!(is_m_group(&Presentation::trivial()).unwrap().holds);
        assert!(admits_connected_topology(&g("Z(2)^c")).unwrap());
        assert!(!admits_connected_topology(&g("Z")).unwrap());
        // w_1 versus c is CH
        assert!(matches!(is_m_group(&g("Z^w+")), Err(InvariantError::Undecidable(_))));
    }

    #[test]
    fn w_divisibility_examples() {
        assert!(is_w_divisible(&g("Z")).unwrap());
        assert!(!is_w_divisible(&g("Z(2)^c")).unwrap());
        assert!(is_w_divisible(&g("Z(2)^w + Z^c")).unwrap());
        assert!(is_w_divisible(&Presentation::trivial()).unwrap());
    }

    #[test]
    fn r_divisibility_examples() {
        assert!(is_r_divisible(&g("Q^c")).unwrap());
        assert!(!is_r_divisible(&g("Z + Z(2)")).unwrap());
        assert!(is_r_divisible(&g("Z")).unwrap());
    }

    #[test]
    fn strongly_unbounded_examples() {
        assert!(!is_strongly_unbounded(&g("Z")).unwrap().holds);

        let su = is_strongly_unbounded(&g("L(2)")).unwrap();
        assert!(su.holds);
        let cert = su.certificate.unwrap();
        assert_eq!(cert.case, FamilyCase::PrimaryTowers);
        assert_eq!(cert.parts[0].split, PartSplit::TowerTails);
        assert_eq!(cert.index, Beth(0));
        assert!(cert.verify().unwrap());

        let su = is_strongly_unbounded(&g("Soc(P)")).unwrap();
        assert!(su.holds);
        let cert = su.certificate.unwrap();
        assert_eq!(cert.case, FamilyCase::SoclePartition);
        assert!(cert.verify().unwrap());

        let cert = unbounded_family(&g("Z^c + Z(2)^5"));
        assert_eq!(cert.case, FamilyCase::FreeRank);
        assert!(cert.verify().unwrap());
    }

    #[test]
    fn sigma_homogeneity_examples() {
        assert!(is_sigma_homogeneous(&Presentation::trivial(), &Beth(1)).unwrap());
        assert!(is_sigma_homogeneous(&g("Z(4)^2^c + Q^c"), &Beth(1)).unwrap());
        assert!(!is_sigma_homogeneous(&g("Z(2)^5"), &Beth(0)).unwrap());
        assert!(matches!(
            is_sigma_homogeneous(&g("Z^c+"), &Beth(2)),
            Err(InvariantError::Undecidable(_))
        ));
        assert!(is_sigma_homogeneous(&g("Z^2^c"), &Succ(1)).unwrap());
        assert_eq!(
            is_sigma_homogeneous(&g("Z"), &f(3)),
            Err(InvariantError::SigmaNotInfinite(f(3)))
        );
    }

    #[test]
    fn torus_embedding_examples() {
        assert!(check_torus_embedding(&g("Z^c"), &Beth(1)).unwrap().holds);
        let e = check_torus_embedding(&g("Z(2)^c"), &Beth(1)).unwrap();
        assert!(!e.holds);
        assert!(e.reason.contains("w_d = 1"));
        assert_eq!(
            check_torus_embedding(&g("Z"), &Beth(0)),
            Err(InvariantError::KappaTooSmall(Beth(0)))
        );
        assert!(matches!(
            check_torus_embedding(&g("Z"), &Succ(1)),
            Err(InvariantError::Cardinal(CardinalError::SuccNotSupported(_)))
        ));
        // |G| = 2^2^c exceeds 2^kappa for kappa = c
        assert!(!check_torus_embedding(&g("Q^2^2^c"), &Beth(1)).unwrap().holds);
    }

    #[test]
    fn report_for_integers() {
        let r = report(&g("Z")).unwrap();
        assert_eq!(r.w_d, Beth(0));
        assert_eq!(r.r_d, f(1));
        assert!(r.flags.w_divisible);
        assert!(!r.flags.strongly_unbounded);
        assert!(!r.flags.m_group);
    }
}
