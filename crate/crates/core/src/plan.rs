//! Certificate planner for connected group topologies.
//!
//! A certificate is a tree of steps. Each step names the construction it
//! applies, its input and output groups, its cardinal parameters and a list of
//! checks. A check stores a predicate together with the value it had when the
//! plan was built; [`PlanCertificate::verify`] evaluates every predicate again
//! from scratch.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::cardinal::{Cardinal, CardinalError, Undecidable};
use crate::decompose::{self, hm_symbolic, DecomposeError};
use crate::invariants::{self, InvariantError, MWitness};
use crate::presentation::Presentation;
use crate::structure::rank_profile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error(transparent)]
    Undecidable(#[from] Undecidable),
    #[error(transparent)]
    Cardinal(#[from] CardinalError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Decompose(#[from] DecomposeError),
}

pub type Result<T> = std::result::Result<T, PlanError>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "predicate", rename_all = "snake_case")]
pub enum Predicate {
    MGroup { group: Presentation },
    Bounded { group: Presentation },
    Trivial { group: Presentation },
    /// Every leading Ulm-Kaplanski invariant is at least `𝔠`.
    LeadingUkAtLeastContinuum { group: Presentation },
    WDivisible { group: Presentation },
    SigmaHomogeneous { group: Presentation, sigma: Cardinal },
    DivisibleWeightAtLeast { group: Presentation, bound: Cardinal },
    /// `|group| = w_d(of)`.
    SizeIsDivisibleWeight { group: Presentation, of: Presentation },
    SameSize { left: Presentation, right: Presentation },
    SizeAtLeast { group: Presentation, bound: Cardinal },
    SizeAtMost { group: Presentation, bound: Cardinal },
    /// `value = 2^of`.
    IsExp2 { value: Cardinal, of: Cardinal },
    TorusEmbedding { group: Presentation, kappa: Cardinal },
    /// `hm_symbolic(group) = group`.
    HmFixed { group: Presentation },
    DirectSum { parts: Vec<Presentation>, whole: Presentation },
    /// Every term of `part` occurs in `whole` with at least its multiplicity.
    SubSum { part: Presentation, whole: Presentation },
    /// `r_0` and every `r_p` are strictly below `bound`.
    RanksBelow { group: Presentation, bound: Cardinal },
    RanksAtMost { group: Presentation, bound: Cardinal },
}

impl Predicate {
    pub fn evaluate(&self) -> Result<bool> {
        use Predicate::*;
        Ok(match self {
            MGroup { group } => invariants::is_m_group(group)?.holds,
            Bounded { group } => group.is_bounded(),
            Trivial { group } => group.is_trivial(),
            LeadingUkAtLeastContinuum { group } => invariants::leading_uk_test(group)?,
            WDivisible { group } => invariants::is_w_divisible(group)?,
            SigmaHomogeneous { group, sigma } => invariants::is_sigma_homogeneous(group, sigma)?,
            DivisibleWeightAtLeast { group, bound } => invariants::divisible_weight(group).ge(bound)?,
            SizeIsDivisibleWeight { group, of } => {
                group.cardinality().eq_decided(&invariants::divisible_weight(of))?
            }
            SameSize { left, right } => left.cardinality().eq_decided(&right.cardinality())?,
            SizeAtLeast { group, bound } => group.cardinality().ge(bound)?,
            SizeAtMost { group, bound } => group.cardinality().le(bound)?,
            IsExp2 { value, of } => *value == of.exp2()?,
            TorusEmbedding { group, kappa } => invariants::check_torus_embedding(group, kappa)?.holds,
            HmFixed { group } => hm_symbolic(group) == *group,
            DirectSum { parts, whole } => Presentation::direct_sum_all(parts) == *whole,
            SubSum { part, whole } => {
                let mut ok = true;
                for t in part.terms() {
                    ok &= whole.multiplicity(&t.block).ge(&t.mult)?;
                }
                ok
            }
            RanksBelow { group, bound } => {
                let mut ok = true;
                for r in rank_profile(group).all_ranks() {
                    ok &= r.lt(bound)?;
                }
                ok
            }
            RanksAtMost { group, bound } => {
                let mut ok = true;
                for r in rank_profile(group).all_ranks() {
                    ok &= r.le(bound)?;
                }
                ok
            }
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    #[serde(flatten)]
    pub predicate: Predicate,
    pub result: bool,
}

impl Check {
    fn new(predicate: Predicate) -> Result<Check> {
        let result = predicate.evaluate()?;
        Ok(Check { predicate, result })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepKind {
    /// Bounded M-group: every leading Ulm-Kaplanski invariant is at least `𝔠`.
    BoundedMGroup,
    /// `G = N ⊕ H` with `σ = 𝔠`.
    HomogeneousSplit,
    /// `N` is `𝔠⁺`-homogeneous, hence `𝔠`-homogeneous and `N ≅ HM(N)`.
    HomogeneousPower,
    /// `H' ≤ H` `𝔠`-homogeneous, w-divisible, `|H'| = |H|`.
    WdivHomogeneousSubgroup,
    /// `H'` embeds densely into `𝕋^κ` with `κ = 2^τ`, so `HM(H') ≅ H'` is
    /// dense in `HM(𝕋^κ)`.
    TorusDensity,
    /// Rank hypotheses for extending `H' → HM(𝕋^κ)` to a monomorphism of `H`.
    EmbeddingExtension,
    /// A topology on an open subgroup extends to the whole group.
    OpenSubgroup,
    TrivialGroup,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Leaf {
    /// Pathwise connected Hartman-Mycielski topology.
    HmTopology,
    /// Dense subgroup of `HM(𝕋^κ)`: dp-connected and locally dp-connected.
    DenseInHmTorus,
    /// Pathwise connected, locally pathwise connected topology on a bounded
    /// M-group.
    KirkuTopology,
    /// Citation only: the component plan of an open subgroup.
    OpenSubgroupExtension,
    /// The indiscrete topology on `{0}`.
    Trivial,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub lemma: StepKind,
    pub inputs: Vec<Presentation>,
    pub outputs: Vec<Presentation>,
    pub params: BTreeMap<String, Cardinal>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub leaf: Option<Leaf>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<Step>,
}

impl Step {
    fn new(lemma: StepKind, inputs: Vec<Presentation>) -> Step {
        Step {
            lemma,
            inputs,
            outputs: Vec::new(),
            params: BTreeMap::new(),
            checks: Vec::new(),
            leaf: None,
            children: Vec::new(),
        }
    }

    fn param(mut self, name: &str, value: Cardinal) -> Step {
        self.params.insert(name.to_string(), value);
        self
    }

    fn check(mut self, predicate: Predicate) -> Result<Step> {
        self.checks.push(Check::new(predicate)?);
        Ok(self)
    }

    fn collect<'a>(&'a self, out: &mut Vec<&'a Step>) {
        out.push(self);
        for c in &self.children {
            c.collect(out);
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanCertificate {
    pub group: Presentation,
    pub root: Step,
}

/// Outcome of re-verifying a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verification {
    pub checks: usize,
    /// `(lemma, predicate)` pairs whose re-evaluation is not `true`, or differs
    /// from the stored result.
    pub failures: Vec<String>,
}

impl Verification {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl PlanCertificate {
    pub fn steps(&self) -> Vec<&Step> {
        let mut out = Vec::new();
        self.root.collect(&mut out);
        out
    }

    pub fn leaves(&self) -> Vec<Leaf> {
        self.steps().iter().filter_map(|s| s.leaf).collect()
    }

    pub fn verify(&self) -> Verification {
        let items: Vec<(StepKind, &Check)> = self
            .steps()
            .into_iter()
            .flat_map(|s| s.checks.iter().map(move |c| (s.lemma, c)))
            .collect();
        let failures = items
            .par_iter()
            .filter_map(|(lemma, c)| match c.predicate.evaluate() {
                Ok(true) if c.result => None,
                Ok(v) => Some(format!("{lemma:?}: {:?} evaluated to {v}", c.predicate)),
                Err(e) => Some(format!("{lemma:?}: {:?} failed: {e}", c.predicate)),
            })
            .collect();
        Verification { checks: items.len(), failures }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Refusal {
    pub group: Presentation,
    pub m: u64,
    /// `|mG|`: non-trivial and below `𝔠`.
    pub size: Cardinal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum PlanOutcome {
    Certificate(PlanCertificate),
    Refusal(Refusal),
}

impl PlanOutcome {
    pub fn certificate(&self) -> Option<&PlanCertificate> {
        match self {
            PlanOutcome::Certificate(c) => Some(c),
            PlanOutcome::Refusal(_) => None,
        }
    }

    pub fn refusal(&self) -> Option<&Refusal> {
        match self {
            PlanOutcome::Refusal(r) => Some(r),
            PlanOutcome::Certificate(_) => None,
        }
    }
}

fn trivial_step(g: &Presentation) -> Result<Step> {
    let mut s = Step::new(StepKind::TrivialGroup, vec![g.clone()]).check(Predicate::Trivial { group: g.clone() })?;
    s.leaf = Some(Leaf::Trivial);
    Ok(s)
}

fn bounded_step(g: &Presentation) -> Result<Step> {
    let mut s = Step::new(StepKind::BoundedMGroup, vec![g.clone()])
        .check(Predicate::Bounded { group: g.clone() })?
        .check(Predicate::LeadingUkAtLeastContinuum { group: g.clone() })?
        .check(Predicate::MGroup { group: g.clone() })?;
    s.leaf = Some(Leaf::KirkuTopology);
    Ok(s)
}

fn n_branch(n: &Presentation) -> Result<Step> {
    if n.is_trivial() {
        return trivial_step(n);
    }
    let c = Cardinal::CONTINUUM;
    let mut s = Step::new(StepKind::HomogeneousPower, vec![n.clone()])
        .param("sigma", c.clone())
        .check(Predicate::SigmaHomogeneous { group: n.clone(), sigma: c.successor()? })?
        .check(Predicate::SigmaHomogeneous { group: n.clone(), sigma: c })?
        .check(Predicate::HmFixed { group: n.clone() })?;
    s.leaf = Some(Leaf::HmTopology);
    Ok(s)
}

fn h_branch(h: &Presentation) -> Result<Step> {
    let c = Cardinal::CONTINUUM;
    let h_prime = decompose::homogeneous_wdiv_subgroup(h)?;
    let tau = h_prime.cardinality();
    let kappa = tau.exp2()?;
    let exp_kappa = kappa.exp2()?;

    let mut embed = Step::new(StepKind::EmbeddingExtension, vec![h_prime.clone(), h.clone()])
        .param("kappa", kappa.clone())
        .check(Predicate::SubSum { part: h_prime.clone(), whole: h.clone() })?
        .check(Predicate::RanksBelow { group: h_prime.clone(), bound: kappa.clone() })?
        .check(Predicate::RanksAtMost { group: h.clone(), bound: kappa.clone() })?;
    embed.outputs = vec![h.clone()];
    embed.leaf = Some(Leaf::DenseInHmTorus);

    let mut density = Step::new(StepKind::TorusDensity, vec![h_prime.clone()])
        .param("tau", tau.clone())
        .param("kappa", kappa.clone())
        .check(Predicate::IsExp2 { value: kappa.clone(), of: tau.clone() })?
        .check(Predicate::TorusEmbedding { group: h_prime.clone(), kappa: kappa.clone() })?
        .check(Predicate::DivisibleWeightAtLeast { group: h_prime.clone(), bound: tau.clone() })?
        .check(Predicate::SizeAtMost { group: h_prime.clone(), bound: exp_kappa })?
        .check(Predicate::HmFixed { group: h_prime.clone() })?;
    density.outputs = vec![h_prime.clone()];
    density.children = vec![embed];

    let mut sub = Step::new(StepKind::WdivHomogeneousSubgroup, vec![h.clone()])
        .param("tau", tau)
        .check(Predicate::WDivisible { group: h.clone() })?
        .check(Predicate::SizeAtLeast { group: h.clone(), bound: c.clone() })?
        .check(Predicate::SubSum { part: h_prime.clone(), whole: h.clone() })?
        .check(Predicate::SigmaHomogeneous { group: h_prime.clone(), sigma: c })?
        .check(Predicate::WDivisible { group: h_prime.clone() })?
        .check(Predicate::SameSize { left: h_prime.clone(), right: h.clone() })?;
    sub.outputs = vec![h_prime];
    sub.children = vec![density];
    Ok(sub)
}

/// A certificate that `g` admits a connected group topology, or the
/// multiplier witnessing that `g` is not an M-group.
pub fn plan_connected_topology(g: &Presentation) -> Result<PlanOutcome> {
    let decision = invariants::is_m_group(g)?;
    if let Some(MWitness { m, size }) = decision.witness {
        return Ok(PlanOutcome::Refusal(Refusal { group: g.clone(), m, size }));
    }
    let root = if g.is_trivial() {
        trivial_step(g)?
    } else if g.is_bounded() {
        bounded_step(g)?
    } else {
        let c = Cardinal::CONTINUUM;
        let (n, h) = decompose::homogeneous_split(g, &c)?;
        let mut split = Step::new(StepKind::HomogeneousSplit, vec![g.clone()])
            .param("sigma", c.clone())
            .check(Predicate::MGroup { group: g.clone() })?
            .check(Predicate::DivisibleWeightAtLeast { group: g.clone(), bound: c.clone() })?
            .check(Predicate::Bounded { group: n.clone() })?
            .check(Predicate::SigmaHomogeneous { group: n.clone(), sigma: c.successor()? })?
            .check(Predicate::WDivisible { group: h.clone() })?
            .check(Predicate::SizeIsDivisibleWeight { group: h.clone(), of: g.clone() })?
            .check(Predicate::DirectSum { parts: vec![n.clone(), h.clone()], whole: g.clone() })?;
        split.outputs = vec![n.clone(), h.clone()];
        split.children = vec![n_branch(&n)?, h_branch(&h)?];
        split
    };
    Ok(PlanOutcome::Certificate(PlanCertificate { group: g.clone(), root }))
}

/// Plan for realizing `h` as the connected component of a topology on `g`:
/// the plan for `h` under a citation-only open-subgroup step.
pub fn plan_component(g: &Presentation, h: &Presentation) -> Result<PlanOutcome> {
    Ok(match plan_connected_topology(h)? {
        PlanOutcome::Certificate(cert) => {
            let mut top = Step::new(StepKind::OpenSubgroup, vec![g.clone(), h.clone()]);
            top.outputs = vec![g.clone()];
            top.leaf = Some(Leaf::OpenSubgroupExtension);
            top.children = vec![cert.root];
            PlanOutcome::Certificate(PlanCertificate { group: g.clone(), root: top })
        }
        refusal => refusal,
    })
}
