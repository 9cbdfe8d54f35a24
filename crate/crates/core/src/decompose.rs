//! Constructive decompositions: bounded/w-divisible split, σ-split,
//! homogeneous split, homogeneous w-divisible subgroups, the finite-rank
//! decomposition and the symbolic Hartman-Mycielski functor.
//!
//! Every operation re-checks its postconditions through the invariants module
//! and reports a violation as `PostconditionFailed` instead of returning a
//! wrong answer.

use serde::Serialize;
use thiserror::Error;

use crate::cardinal::{Cardinal, CardinalError, Undecidable};
use crate::invariants::{
    divisible_rank, divisible_weight, is_sigma_homogeneous, is_w_divisible, InvariantError,
};
use crate::presentation::{Block, Presentation};
use crate::structure::rank_profile;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecomposeError {
    #[error(transparent)]
    Undecidable(#[from] Undecidable),
    #[error(transparent)]
    Cardinal(#[from] CardinalError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error("group is not bounded")]
    NotBounded,
    #[error("precondition failed: {0}")]
    PreconditionFailed(String),
    #[error("postcondition failed: {0}")]
    PostconditionFailed(String),
}

pub type Result<T> = std::result::Result<T, DecomposeError>;

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(DecomposeError::PostconditionFailed(what()))
    }
}

fn require_infinite(sigma: &Cardinal) -> Result<()> {
    if sigma.is_finite() {
        return Err(DecomposeError::PreconditionFailed(format!("sigma = {sigma} is finite")));
    }
    Ok(())
}

/// `G = K ⊕ M` with `K` the cyclic sub-sum (bounded) and `M` w-divisible.
pub fn split_bounded_wdiv(g: &Presentation) -> Result<(Presentation, Presentation)> {
    let k = g.select(|t| t.block.is_cyclic());
    let m = g.select(|t| !t.block.is_cyclic());
    ensure(k.direct_sum(&m) == *g, || format!("{k} + {m} != {g}"))?;
    ensure(is_w_divisible(&m)?, || format!("{m} is not w-divisible"))?;
    Ok((k, m))
}

/// `K = L ⊕ N` with `|L| < σ` and `N` σ-homogeneous.
pub fn split_sigma(k: &Presentation, sigma: &Cardinal) -> Result<(Presentation, Presentation)> {
    require_infinite(sigma)?;
    if !k.is_bounded() {
        return Err(DecomposeError::NotBounded);
    }
    let mut small = Vec::new();
    for t in k.terms() {
        small.push(t.mult.lt(sigma)?);
    }
    let mut it = small.iter();
    let l = k.select(|_| *it.next().expect("one flag per term"));
    let mut it = small.iter();
    let n = k.select(|_| !*it.next().expect("one flag per term"));
    ensure(l.direct_sum(&n) == *k, || format!("{l} + {n} != {k}"))?;
    ensure(l.cardinality().lt(sigma)?, || format!("|{l}| >= {sigma}"))?;
    ensure(is_sigma_homogeneous(&n, sigma)?, || format!("{n} is not {sigma}-homogeneous"))?;
    Ok((l, n))
}

/// `G = N ⊕ H` with `N` bounded and `σ⁺`-homogeneous, `H` w-divisible and
/// `|H| = w_d(G)`.
pub fn homogeneous_split(g: &Presentation, sigma: &Cardinal) -> Result<(Presentation, Presentation)> {
    require_infinite(sigma)?;
    let wd = divisible_weight(g);
    if !wd.ge(sigma)? {
        return Err(DecomposeError::PreconditionFailed(format!("w_d = {wd} is below sigma = {sigma}")));
    }
    let sigma_plus = sigma.successor()?;
    let (k, m) = split_bounded_wdiv(g)?;
    let (l, n) = split_sigma(&k, &sigma_plus)?;
    let h = l.direct_sum(&m);
    ensure(n.direct_sum(&h) == *g, || format!("{n} + {h} != {g}"))?;
    ensure(n.is_bounded(), || format!("{n} is not bounded"))?;
    ensure(is_sigma_homogeneous(&n, &sigma_plus)?, || format!("{n} is not {sigma_plus}-homogeneous"))?;
    ensure(is_w_divisible(&h)?, || format!("{h} is not w-divisible"))?;
    ensure(h.cardinality().eq_decided(&wd)?, || format!("|{h}| != w_d = {wd}"))?;
    Ok((n, h))
}

/// A `𝔠`-homogeneous w-divisible subgroup `H ≤ G` with `|H| = |G|`, chosen
/// among the terms of `G`.
pub fn homogeneous_wdiv_subgroup(g: &Presentation) -> Result<Presentation> {
    let size = g.cardinality();
    if !is_w_divisible(g)? {
        return Err(DecomposeError::PreconditionFailed(format!("{g} is not w-divisible")));
    }
    if !size.ge(&Cardinal::CONTINUUM)? {
        return Err(DecomposeError::PreconditionFailed(format!("|G| = {size} is below c")));
    }
    let h = if size.gt(&Cardinal::CONTINUUM)? {
        let mut keep = Vec::new();
        for t in g.terms() {
            keep.push(t.mult.ge(&Cardinal::CONTINUUM)?);
        }
        let mut it = keep.iter();
        g.select(|_| *it.next().expect("one flag per term"))
    } else {
        let mut chosen = None;
        // a single non-socle unbounded block first, the socle as fallback
        for pass_soc in [false, true] {
            for t in g.terms() {
                let is_soc = matches!(t.block, Block::Soc(_));
                if t.block.is_unbounded() && is_soc == pass_soc && t.mult.eq_decided(&Cardinal::CONTINUUM)? {
                    chosen = Some(t);
                    break;
                }
            }
            if chosen.is_some() {
                break;
            }
        }
        let t = chosen.ok_or_else(|| {
            DecomposeError::PreconditionFailed(format!("{g} has no unbounded term of multiplicity c"))
        })?;
        g.select(|u| u == t)
    };
    ensure(is_sigma_homogeneous(&h, &Cardinal::CONTINUUM)?, || format!("{h} is not c-homogeneous"))?;
    ensure(is_w_divisible(&h)?, || format!("{h} is not w-divisible"))?;
    ensure(h.cardinality().eq_decided(&size)?, || format!("|{h}| != |G| = {size}"))?;
    Ok(h)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiniteRankDecomposition {
    /// Torsion-free part.
    pub g0: Presentation,
    /// Divisible torsion part.
    pub d: Presentation,
    /// Bounded part.
    pub b: Presentation,
    pub r_d: Cardinal,
}

/// `G = G₀ ⊕ D ⊕ B` for `r_d(G) < ω`, with `r_d(G) = r₀(G₀) + r(D)`.
pub fn finite_rank_decomposition(g: &Presentation) -> Result<FiniteRankDecomposition> {
    let rd = divisible_rank(g);
    if !rd.is_finite() {
        return Err(DecomposeError::PreconditionFailed(format!("r_d = {rd} is infinite")));
    }
    let g0 = g.select(|t| t.block.is_torsion_free());
    let d = g.select(|t| matches!(t.block, Block::Prufer(_)));
    let b = g.select(|t| t.block.is_cyclic());
    ensure(Presentation::direct_sum_all([&g0, &d, &b]) == *g, || {
        format!("{g0} + {d} + {b} != {g}")
    })?;
    let expected = rank_profile(&g0).r0.csum(&rank_profile(&d).r);
    ensure(expected == rd, || format!("r_0(G0) + r(D) = {expected} != r_d = {rd}"))?;
    Ok(FiniteRankDecomposition { g0, d, b, r_d: rd })
}

/// `HM(G) ≅ G^(𝔠)`: every multiplicity `κ` becomes `κ·𝔠`.
pub fn hm_symbolic(g: &Presentation) -> Presentation {
    g.map_multiplicities(|k| k.cprod(&Cardinal::CONTINUUM))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;
    use Cardinal::*;

    fn g(s: &str) -> Presentation {
        parse(s).unwrap()
    }

    #[test]
    fn bounded_wdiv_examples() {
        assert_eq!(split_bounded_wdiv(&g("Z(4)^c + Q^w")).unwrap(), (g("Z(4)^c"), g("Q^w")));
        assert_eq!(split_bounded_wdiv(&g("Z(2)^3")).unwrap(), (g("Z(2)^3"), Presentation::trivial()));
        assert_eq!(split_bounded_wdiv(&g("L(5)")).unwrap(), (Presentation::trivial(), g("L(5)")));
    }

    #[test]
    fn sigma_split_examples() {
        assert_eq!(
            split_sigma(&g("Z(2)^5 + Z(4)^2^c"), &Succ(1)).unwrap(),
            (g("Z(2)^5"), g("Z(4)^2^c"))
        );
        let t = Presentation::trivial();
        assert_eq!(split_sigma(&t, &Beth(0)).unwrap(), (t.clone(), t));
        assert_eq!(split_sigma(&g("Z(3)^w"), &Beth(0)).unwrap(), (Presentation::trivial(), g("Z(3)^w")));
        assert_eq!(split_sigma(&g("Z"), &Beth(0)), Err(DecomposeError::NotBounded));
    }

    #[test]
    fn homogeneous_split_examples() {
        let (n, h) = homogeneous_split(&g("Z(2)^5 + Z(4)^2^c + Z^c"), &Beth(1)).unwrap();
        assert_eq!(n, g("Z(4)^2^c"));
        assert_eq!(h, g("Z(2)^5 + Z^c"));
        assert_eq!(h.cardinality(), Beth(1));

        let (n, h) = homogeneous_split(&g("Q^c"), &Beth(1)).unwrap();
        assert!(n.is_trivial());
        assert_eq!(h, g("Q^c"));

        assert!(matches!(
            homogeneous_split(&g("Z(2)^c"), &Beth(1)),
            Err(DecomposeError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn homogeneous_subgroup_examples() {
        assert_eq!(homogeneous_wdiv_subgroup(&g("Z^c + Z(2)^5")).unwrap(), g("Z^c"));
        assert_eq!(homogeneous_wdiv_subgroup(&g("Soc(P)^c")).unwrap(), g("Soc(P)^c"));
        assert_eq!(homogeneous_wdiv_subgroup(&g("Soc(P)^c + Z^w")).unwrap(), g("Soc(P)^c"));
        assert_eq!(
            homogeneous_wdiv_subgroup(&g("Q^2^c + Z(3)^2^c + L(2)^w")).unwrap(),
            g("Q^2^c + Z(3)^2^c")
        );
        assert!(matches!(
            homogeneous_wdiv_subgroup(&g("Z(2)^c")),
            Err(DecomposeError::PreconditionFailed(_))
        ));
        assert!(matches!(
            homogeneous_wdiv_subgroup(&g("Z^w")),
            Err(DecomposeError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn finite_rank_examples() {
        let d = finite_rank_decomposition(&g("Z^2 + Z(3^inf) + Z(4)^c")).unwrap();
        assert_eq!((d.g0, d.d, d.b), (g("Z^2"), g("Z(3^inf)"), g("Z(4)^c")));
        assert_eq!(d.r_d, Cardinal::fin(3));

        let d = finite_rank_decomposition(&g("Z(8)^w")).unwrap();
        assert!(d.g0.is_trivial() && d.d.is_trivial());
        assert_eq!(d.r_d, Cardinal::zero());

        assert!(matches!(
            finite_rank_decomposition(&g("L(2)")),
            Err(DecomposeError::PreconditionFailed(_))
        ));
    }

    #[test]
    fn hm_symbolic_examples() {
        assert_eq!(hm_symbolic(&g("Z(2)")), g("Z(2)^c"));
        assert!(hm_symbolic(&Presentation::trivial()).is_trivial());
        assert_eq!(hm_symbolic(&g("Z^2^c")), g("Z^2^c"));
    }
}
