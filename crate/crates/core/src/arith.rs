//! Small integer helpers: primality, factorization, valuations.

use std::collections::BTreeMap;

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization as `prime -> exponent`. `factorize(1)` is empty.
pub fn factorize(mut n: u64) -> BTreeMap<u64, u32> {
    assert!(n >= 1, "factorize(0)");
    let mut out = BTreeMap::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        while n % d == 0 {
            *out.entry(d).or_insert(0) += 1;
            n /= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        *out.entry(n).or_insert(0) += 1;
    }
    out
}

pub fn valuation(p: u64, mut n: u64) -> u32 {
    debug_assert!(p >= 2 && n >= 1);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// All positive divisors of `prod p^e`, ascending.
pub fn divisors(factors: &BTreeMap<u64, u32>) -> Option<Vec<u64>> {
    let mut out = vec![1u64];
    for (&p, &e) in factors {
        let mut next = Vec::with_capacity(out.len() * (e as usize + 1));
        for &d in &out {
            let mut q = d;
            next.push(q);
            for _ in 0..e {
                q = q.checked_mul(p)?;
                next.push(q);
            }
        }
        out = next;
    }
    out.sort_unstable();
    Some(out)
}

/// `prod p^e` as `u64`, or `None` on overflow.
pub fn expand(factors: &BTreeMap<u64, u32>) -> Option<u64> {
    factors
        .iter()
        .try_fold(1u64, |acc, (&p, &e)| acc.checked_mul(p.checked_pow(e)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primes_and_factors() {
        let small: Vec<u64> = (0..30).filter(|&n| is_prime(n)).collect();
        assert_eq!(small, vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
        assert_eq!(factorize(360), BTreeMap::from([(2, 3), (3, 2), (5, 1)]));
        assert!(factorize(1).is_empty());
        assert_eq!(valuation(2, 24), 3);
        assert_eq!(valuation(5, 24), 0);
        assert_eq!(divisors(&factorize(12)).unwrap(), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(expand(&factorize(360)), Some(360));
    }
}
