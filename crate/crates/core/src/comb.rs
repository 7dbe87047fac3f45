//! Exact integer combinatorics: binomial coefficients, colexicographic
//! ranking/unranking of r-subsets, prefix families, and the exact-rational
//! two-sided binomial estimate checker.

use num::bigint::{BigInt, BigUint};
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use thiserror::Error;

use crate::subset::RSubset;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CombError {
    #[error("rank {rank} out of range [1, {count}] for C({n},{r})")]
    RankOutOfRange { rank: u64, n: u8, r: u8, count: u64 },
    #[error("invalid prefix {prefix:?} for (n={n}, r={r}): {reason}")]
    InvalidPrefix {
        prefix: Vec<u8>,
        n: u8,
        r: u8,
        reason: &'static str,
    },
    #[error("estimate check requires n >= r >= 2 and c <= r, got n={n} r={r} c={c}")]
    EstimateOutOfScope { n: u64, r: u64, c: i64 },
}

/// C(n, k), exact. Returns 0 when k > n. Counts are carried in 128 bits and
/// checked multiplication panics rather than wrap if a result ever exceeds
/// that width (no input in this crate's operating range does).
pub fn binom(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut result: u128 = 1;
    for i in 1..=k {
        // Each prefix product is itself a binomial, so the division is exact.
        result = result
            .checked_mul((n - k + i) as u128)
            .expect("binomial coefficient exceeds 128 bits")
            / i as u128;
    }
    result
}

/// C(n, k) in arbitrary precision, for the bound formulas.
pub fn binom_big(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut result = BigUint::one();
    for i in 1..=k {
        result = result * BigUint::from(n - k + i) / BigUint::from(i);
    }
    result
}

/// C(n, k) as u64; the layout and ranking paths keep n <= 64 where this fits.
pub fn binom_u64(n: u64, k: u64) -> u64 {
    u64::try_from(binom(n, k)).expect("vertex count exceeds 64 bits")
}

/// Colex rank of an r-subset, 1-based: `{1,..,r}` has rank 1. The rank does
/// not depend on the ambient n.
pub fn colex_rank(s: &RSubset) -> u64 {
    let mut rank: u64 = 1;
    for (i, &e) in s.elements().iter().enumerate() {
        rank += binom_u64(e as u64 - 1, i as u64 + 1);
    }
    rank
}

/// Inverse of [`colex_rank`] over the r-subsets of `[1, n]`.
pub fn colex_unrank(rank: u64, n: u8, r: u8) -> Result<RSubset, CombError> {
    let count = binom_u64(n as u64, r as u64);
    if rank < 1 || rank > count {
        return Err(CombError::RankOutOfRange { rank, n, r, count });
    }
    let mut rem = rank - 1;
    let mut elems = vec![0u8; r as usize];
    let mut hi = n as u64;
    for i in (1..=r as u64).rev() {
        // Largest e with C(e-1, i) <= rem.
        let mut e = hi;
        while binom_u64(e - 1, i) > rem {
            e -= 1;
        }
        rem -= binom_u64(e - 1, i);
        elems[i as usize - 1] = e as u8;
        hi = e - 1;
    }
    Ok(RSubset::new(elems).expect("unrank produced invalid subset"))
}

/// Iterator over the k-subsets of an arbitrary ground list, in colex order
/// (with respect to positions in the ground list, which is kept sorted by
/// callers so this is colex on elements too).
pub struct ColexCombinations<'a> {
    ground: &'a [u8],
    idx: Vec<usize>,
    done: bool,
}

impl<'a> ColexCombinations<'a> {
    pub fn new(ground: &'a [u8], k: usize) -> Self {
        let done = k > ground.len();
        ColexCombinations {
            ground,
            idx: (0..k).collect(),
            done,
        }
    }
}

impl<'a> Iterator for ColexCombinations<'a> {
    type Item = Vec<u8>;

    fn next(&mut self) -> Option<Vec<u8>> {
        if self.done {
            return None;
        }
        let out: Vec<u8> = self.idx.iter().map(|&i| self.ground[i]).collect();
        let k = self.idx.len();
        if k == 0 {
            self.done = true;
            return Some(out);
        }
        // Colex successor: bump the lowest index with headroom, reset below.
        let mut j = 0;
        loop {
            let cap = if j + 1 < k {
                self.idx[j + 1]
            } else {
                self.ground.len()
            };
            if self.idx[j] + 1 < cap {
                self.idx[j] += 1;
                for (t, slot) in self.idx.iter_mut().enumerate().take(j) {
                    *slot = t;
                }
                break;
            }
            j += 1;
            if j == k {
                self.done = true;
                break;
            }
        }
        Some(out)
    }
}

/// The family of all r-subsets of `[1, n]` whose smallest t elements are
/// exactly the given prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixFamily {
    prefix: Vec<u8>,
    n: u8,
    r: u8,
}

impl PrefixFamily {
    pub fn new(prefix: &[u8], n: u8, r: u8) -> Result<Self, CombError> {
        let invalid = |reason| CombError::InvalidPrefix {
            prefix: prefix.to_vec(),
            n,
            r,
            reason,
        };
        if prefix.is_empty() {
            return Err(invalid("prefix must be nonempty"));
        }
        if !prefix.windows(2).all(|w| w[0] < w[1]) || prefix[0] == 0 {
            return Err(invalid("prefix must be strictly increasing and positive"));
        }
        if prefix.len() > r as usize {
            return Err(invalid("prefix longer than r"));
        }
        if *prefix.last().unwrap() > n {
            return Err(invalid("prefix element exceeds n"));
        }
        Ok(PrefixFamily {
            prefix: prefix.to_vec(),
            n,
            r,
        })
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn size(&self) -> u64 {
        let t = self.prefix.len() as u64;
        let it = *self.prefix.last().unwrap() as u64;
        binom_u64(self.n as u64 - it, self.r as u64 - t)
    }

    pub fn contains(&self, s: &RSubset) -> bool {
        if s.len() != self.r as usize {
            return false;
        }
        let t = self.prefix.len();
        s.elements()[..t] == self.prefix[..]
    }

    /// Members in colex order.
    pub fn members(&self) -> Vec<RSubset> {
        let t = self.prefix.len();
        let it = *self.prefix.last().unwrap();
        let ground: Vec<u8> = (it + 1..=self.n).collect();
        ColexCombinations::new(&ground, self.r as usize - t)
            .map(|tail| {
                let mut elems = self.prefix.clone();
                elems.extend(tail);
                RSubset::new(elems).expect("prefix family produced invalid subset")
            })
            .collect()
    }
}

/// Members of the prefix family `S_{i1...it}` over `(n, r)`, in colex order.
pub fn prefix_family(prefix: &[u8], n: u8, r: u8) -> Result<Vec<RSubset>, CombError> {
    Ok(PrefixFamily::new(prefix, n, r)?.members())
}

fn factorial_big(k: u64) -> BigUint {
    (1..=k).map(BigUint::from).fold(BigUint::one(), |a, b| a * b)
}

pub(crate) fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub(crate) fn rat_big(v: BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub(crate) fn pow_big(base: u64, exp: u64) -> BigUint {
    BigUint::from(base).pow(exp as u32)
}

/// `n^e / e'!`-style monomial as an exact rational.
pub(crate) fn monomial(n: u64, exp: u64, fact: u64) -> BigRational {
    rat_big(pow_big(n, exp)) / rat_big(factorial_big(fact))
}

/// Checks, in exact rational arithmetic, the two-sided estimate
///
/// `n^r/r! - (c + (r-1)/2) n^(r-1)/(r-1)!  <=  C(n-c, r)
///   <=  n^r/r! - (c + (r-1)/2) n^(r-1)/(r-1)! + 4 r^4 n^(r-2)`
///
/// for integers n >= r >= 2, c <= r (c may be negative). Returns whether each
/// side holds.
pub fn binomial_estimate_check(n: u64, r: u64, c: i64) -> Result<(bool, bool), CombError> {
    if n < r || r < 2 || c > r as i64 {
        return Err(CombError::EstimateOutOfScope { n, r, c });
    }
    let shifted = n as i64 - c;
    let mid = if shifted < 0 {
        BigUint::zero()
    } else {
        binom_big(shifted as u64, r)
    };
    let mid = rat_big(mid);

    // (c + (r-1)/2) = (2c + r - 1) / 2
    let slope = rat_int(2 * c + r as i64 - 1) / rat_int(2);
    let base = monomial(n, r, r) - slope * monomial(n, r - 1, r - 1);
    let correction = rat_int((4 * r * r * r * r) as i64) * rat_big(pow_big(n, r - 2));

    let lower_ok = base <= mid;
    let upper_ok = mid <= base + correction;
    Ok((lower_ok, upper_ok))
}

/// Decimal rendering of an exact rational with fixed places, rounding half
/// away from zero. Used for report emission only.
pub fn rat_to_decimal(v: &BigRational, places: u32) -> String {
    let scale = BigInt::from(10u32).pow(places);
    let scaled = v * BigRational::from_integer(scale.clone());
    let num = scaled.numer();
    let den = scaled.denom();
    let (q, rem) = (num / den, num % den);
    let rounded = if (rem.abs() * BigInt::from(2)) >= den.abs() {
        if v.is_negative() {
            q - BigInt::one()
        } else {
            q + BigInt::one()
        }
    } else {
        q
    };
    let neg = rounded.is_negative();
    let digits = rounded.abs().to_string();
    let digits = if digits.len() <= places as usize {
        format!("{}{}", "0".repeat(places as usize + 1 - digits.len()), digits)
    } else {
        digits
    };
    let split = digits.len() - places as usize;
    format!(
        "{}{}.{}",
        if neg { "-" } else { "" },
        &digits[..split],
        &digits[split..]
    )
}

/// Exact rendering: plain integer when the denominator is 1, else `p/q`.
pub fn rat_to_exact(v: &BigRational) -> String {
    if v.denom().is_one() {
        v.numer().to_string()
    } else {
        format!("{}/{}", v.numer(), v.denom())
    }
}
