//! Every closed-form bound evaluated in exact rational arithmetic, plus the
//! assembled comparison report. Conversion to floating point happens only at
//! report emission; residuals are carried as exact fractions.

use std::fmt;
use std::str::FromStr;

use num::bigint::{BigInt, Sign};
use num::rational::BigRational;
use num::traits::Zero;
use thiserror::Error;

use crate::cert::{certified_upper_bound, CertError};
use crate::comb::{binom, binom_big, monomial, rat_big, rat_int};
use crate::dilation::dilation_scan;
use crate::layout::{bfs_layout, feasibility, paper_layout, trivial_layout, Labeling, LayoutError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum BoundsError {
    #[error("independent-set bound needs n >= 2r, got n={n} r={r}")]
    NeedsEdges { n: u8, r: u8 },
    #[error("dilation lower bound is stated only for r >= 4, got r={r}")]
    LowerNeedsR4 { r: u64 },
    #[error("asymptotic upper terms are defined only for r >= 3, got r={r}")]
    AsymNeedsR3 { r: u64 },
    #[error("proof constants need n >= r + 5, got n={n} r={r}")]
    ProofConstantsRange { n: u64, r: u64 },
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Layout(#[from] LayoutError),
    #[error(transparent)]
    Cert(#[from] CertError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
}

/// `C(n,r) - floor(C(n-1,r-1)/2)`: the split-independent-set upper bound.
pub fn trivial_upper(n: u8, r: u8) -> Result<u64, BoundsError> {
    if (n as u16) < 2 * r as u16 {
        return Err(BoundsError::NeedsEdges { n, r });
    }
    let count = binom(n as u64, r as u64);
    let star = binom(n as u64 - 1, r as u64 - 1);
    u64::try_from(count - star / 2).map_err(|_| BoundsError::NeedsEdges { n, r })
}

/// The explicit dilation lower bound for fixed r >= 4:
/// `C(n,r) - C(n-1,r-1)/2 - 2 n^(r-2)/(r-2)! + (r+2) n^(r-3)/(r-3)! - 9 r^4 n^(r-4)`.
pub fn dilation_lower_bound(n: u64, r: u64) -> Result<BigRational, BoundsError> {
    if r < 4 {
        return Err(BoundsError::LowerNeedsR4 { r });
    }
    let value = rat_big(binom_big(n, r)) - rat_big(binom_big(n - 1, r - 1)) / rat_int(2)
        - rat_int(2) * monomial(n, r - 2, r - 2)
        + rat_int(r as i64 + 2) * monomial(n, r - 3, r - 3)
        - rat_int((9 * r * r * r * r) as i64) * monomial(n, r - 4, 0);
    Ok(value)
}

/// The explicit part of the matching upper bound, for r >= 3:
/// `C(n,r) - C(n-1,r-1)/2 - 2 n^(r-2)/(r-2)! + (r+2) n^(r-3)/(r-3)!`.
pub fn asym_upper_terms(n: u64, r: u64) -> Result<BigRational, BoundsError> {
    if r < 3 {
        return Err(BoundsError::AsymNeedsR3 { r });
    }
    let value = rat_big(binom_big(n, r)) - rat_big(binom_big(n - 1, r - 1)) / rat_int(2)
        - rat_int(2) * monomial(n, r - 2, r - 2)
        + rat_int(r as i64 + 2) * monomial(n, r - 3, r - 3);
    Ok(value)
}

/// Auxiliary quantities from the lower-bound argument, exposed for property
/// tests only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProofConstants {
    /// `ceil(C(n-1,r-1)/2) - r C(n-2,r-2)`; may be negative at small n.
    pub big_n: BigInt,
    /// `C(n-2,r-2) + 3 r^2 C(n-3,r-3)`.
    pub ell: BigInt,
    /// `(C(n-2,r-2) + C(n-3,r-2) + C(n-4,r-2) + C(n-5,r-2)) / 2`.
    pub m: BigRational,
}

pub fn proof_constants(n: u64, r: u64) -> Result<ProofConstants, BoundsError> {
    if n < r + 5 || r < 3 {
        return Err(BoundsError::ProofConstantsRange { n, r });
    }
    let star = binom_big(n - 1, r - 1);
    let half_ceil = (star + 1u32) / 2u32;
    let big_n = BigInt::from(half_ceil)
        - BigInt::from(r) * BigInt::from(binom_big(n - 2, r - 2));
    let ell = BigInt::from(binom_big(n - 2, r - 2))
        + BigInt::from(3 * r * r) * BigInt::from(binom_big(n - 3, r - 3));
    let m = (rat_big(binom_big(n - 2, r - 2))
        + rat_big(binom_big(n - 3, r - 2))
        + rat_big(binom_big(n - 4, r - 2))
        + rat_big(binom_big(n - 5, r - 2)))
        / rat_int(2);
    Ok(ProofConstants { big_n, ell, m })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LayoutKind {
    Paper,
    Trivial,
    Bfs,
}

impl LayoutKind {
    pub const ALL: [LayoutKind; 3] = [LayoutKind::Paper, LayoutKind::Trivial, LayoutKind::Bfs];

    pub fn name(self) -> &'static str {
        match self {
            LayoutKind::Paper => "paper",
            LayoutKind::Trivial => "trivial",
            LayoutKind::Bfs => "bfs",
        }
    }

    pub fn build(self, n: u8, r: u8) -> Result<Labeling, LayoutError> {
        match self {
            LayoutKind::Paper => Ok(paper_layout(n, r)?.0),
            LayoutKind::Trivial => trivial_layout(n, r),
            LayoutKind::Bfs => bfs_layout(n, r),
        }
    }
}

impl fmt::Display for LayoutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LayoutKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "paper" => Ok(LayoutKind::Paper),
            "trivial" => Ok(LayoutKind::Trivial),
            "bfs" => Ok(LayoutKind::Bfs),
            other => Err(format!("unknown layout kind `{other}` (expected paper|trivial|bfs)")),
        }
    }
}

/// Whether the lower-bound expression is in its meaningful regime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegimeFlag {
    /// r >= 4 and the expression exceeds half the vertex count.
    Meaningful,
    /// r >= 4 but the expression is at most half the vertex count.
    BelowHalf,
    /// r < 4: the lower-bound formula is out of scope.
    NotApplicable,
}

impl RegimeFlag {
    pub fn as_str(self) -> &'static str {
        match self {
            RegimeFlag::Meaningful => "meaningful",
            RegimeFlag::BelowHalf => "below-half",
            RegimeFlag::NotApplicable => "not-applicable",
        }
    }
}

/// All evaluated bound quantities for one (n, r), with optional measured
/// dilations per layout kind.
#[derive(Debug, Clone)]
pub struct BoundsReport {
    pub n: u8,
    pub r: u8,
    pub vertex_count: u64,
    pub trivial_upper: Option<u64>,
    pub lower_bound: Option<BigRational>,
    pub asym_upper_terms: Option<BigRational>,
    pub certified_upper: Option<u64>,
    pub measured_dilation: Vec<(LayoutKind, u64)>,
    /// `asym_upper_terms - certified_upper`, when both exist.
    pub residual_upper: Option<BigRational>,
    /// `certified_upper - lower_bound`, when both exist.
    pub gap: Option<BigRational>,
    pub regime: RegimeFlag,
}

impl BoundsReport {
    pub fn measured(&self, kind: LayoutKind) -> Option<u64> {
        self.measured_dilation
            .iter()
            .find(|(k, _)| *k == kind)
            .map(|&(_, v)| v)
    }
}

pub fn regime_flag(n: u8, r: u8, lower: Option<&BigRational>) -> RegimeFlag {
    match lower {
        None => RegimeFlag::NotApplicable,
        Some(value) => {
            let half = rat_big(binom_big(n as u64, r as u64)) / rat_int(2);
            if *value > half {
                RegimeFlag::Meaningful
            } else {
                RegimeFlag::BelowHalf
            }
        }
    }
}

/// Assembles a report: exact bound formulas always (where defined), the
/// certified upper bound when the construction is feasible, and measured
/// dilation for each requested layout.
pub fn report(n: u8, r: u8, kinds: &[LayoutKind]) -> Result<BoundsReport, ReportError> {
    let vertex_count = u64::try_from(binom(n as u64, r as u64)).expect("vertex count fits u64");
    let trivial = trivial_upper(n, r).ok();
    let lower = dilation_lower_bound(n as u64, r as u64).ok();
    let asym = asym_upper_terms(n as u64, r as u64).ok();
    let certified = if feasibility(n, r).is_ok() {
        Some(certified_upper_bound(n, r)?)
    } else {
        None
    };

    let mut measured = Vec::new();
    for &kind in kinds {
        let labeling = kind.build(n, r)?;
        measured.push((kind, dilation_scan(&labeling).value));
    }

    let residual = match (&asym, certified) {
        (Some(a), Some(c)) => Some(a - BigRational::from_integer(BigInt::from(c))),
        _ => None,
    };
    let gap = match (&lower, certified) {
        (Some(l), Some(c)) => Some(BigRational::from_integer(BigInt::from(c)) - l),
        _ => None,
    };
    let regime = regime_flag(n, r, lower.as_ref());
    Ok(BoundsReport {
        n,
        r,
        vertex_count,
        trivial_upper: trivial,
        lower_bound: lower,
        asym_upper_terms: asym,
        certified_upper: certified,
        measured_dilation: measured,
        residual_upper: residual,
        gap,
        regime,
    })
}

pub fn rat_is_negative(v: &BigRational) -> bool {
    v.numer().sign() == Sign::Minus
}

pub fn rat_from_u64(v: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn rat_zero() -> BigRational {
    BigRational::zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::{rat_to_decimal, rat_to_exact};

    #[test]
    fn trivial_upper_examples() {
        assert_eq!(trivial_upper(5, 2).unwrap(), 8);
        assert_eq!(trivial_upper(10, 3).unwrap(), 102);
        for r in [2u8, 3, 4] {
            let n = 2 * r;
            let expect =
                binom(n as u64, r as u64) - binom(n as u64 - 1, r as u64 - 1) / 2;
            assert_eq!(trivial_upper(n, r).unwrap() as u128, expect);
        }
        assert!(matches!(
            trivial_upper(5, 3),
            Err(BoundsError::NeedsEdges { .. })
        ));
    }

    #[test]
    fn lower_bound_pinned_value() {
        let v = dilation_lower_bound(20, 4).unwrap();
        assert_eq!(v, BigRational::new(BigInt::from(3553), BigInt::from(2)));
        assert_eq!(rat_to_exact(&v), "3553/2");
        assert_eq!(rat_to_decimal(&v, 6), "1776.500000");
    }

    #[test]
    fn lower_bound_refuses_r3() {
        assert!(matches!(
            dilation_lower_bound(20, 3),
            Err(BoundsError::LowerNeedsR4 { r: 3 })
        ));
    }

    #[test]
    fn lower_bound_monotone_in_n_for_r4() {
        let mut prev = dilation_lower_bound(20, 4).unwrap();
        for n in 21..=60u64 {
            let cur = dilation_lower_bound(n, 4).unwrap();
            assert!(cur > prev, "not monotone at n={n}");
            prev = cur;
        }
    }

    #[test]
    fn asym_terms_examples() {
        // r=3: C(n,3) - C(n-1,2)/2 - 2n + 5
        let v = asym_upper_terms(12, 3).unwrap();
        assert_eq!(v, BigRational::new(BigInt::from(347), BigInt::from(2)));
        assert!(matches!(
            asym_upper_terms(10, 2),
            Err(BoundsError::AsymNeedsR3 { .. })
        ));
    }

    #[test]
    fn proof_constants_examples() {
        let pc = proof_constants(20, 4).unwrap();
        assert_eq!(pc.big_n, BigInt::from(-127));
        let pc100 = proof_constants(100, 4).unwrap();
        assert!(pc100.big_n > BigInt::zero());
        assert!(proof_constants(8, 4).is_err());
    }

    #[test]
    fn m_bound_holds_on_sweep() {
        // m(r,n) <= 2 n^(r-2)/(r-2)! - (r+4) n^(r-3)/(r-3)! + 8 r^4 n^(r-4)
        for r in 4..=6u64 {
            for n in r + 5..=60 {
                let pc = proof_constants(n, r).unwrap();
                let bound = rat_int(2) * monomial(n, r - 2, r - 2)
                    - rat_int(r as i64 + 4) * monomial(n, r - 3, r - 3)
                    + rat_int((8 * r * r * r * r) as i64) * monomial(n, r - 4, 0);
                assert!(pc.m <= bound, "violated at n={n} r={r}");
            }
        }
    }

    #[test]
    fn regime_flags() {
        assert_eq!(regime_flag(12, 3, None), RegimeFlag::NotApplicable);
        let low = dilation_lower_bound(20, 4).unwrap();
        assert_eq!(regime_flag(20, 4, Some(&low)), RegimeFlag::BelowHalf);
        let high = dilation_lower_bound(24, 4).unwrap();
        assert_eq!(regime_flag(24, 4, Some(&high)), RegimeFlag::Meaningful);
    }

    #[test]
    fn report_5_2_trivial_only() {
        let rep = report(5, 2, &[LayoutKind::Trivial]).unwrap();
        assert_eq!(rep.trivial_upper, Some(8));
        assert_eq!(rep.certified_upper, None);
        assert_eq!(rep.asym_upper_terms, None);
        assert_eq!(rep.regime, RegimeFlag::NotApplicable);
        assert!(rep.measured(LayoutKind::Trivial).unwrap() <= 8);
    }

    #[test]
    fn report_12_3_paper_beats_trivial() {
        let rep = report(12, 3, &[LayoutKind::Trivial, LayoutKind::Paper]).unwrap();
        let paper = rep.measured(LayoutKind::Paper).unwrap();
        let trivial = rep.measured(LayoutKind::Trivial).unwrap();
        assert!(paper < trivial, "{paper} >= {trivial}");
        let certified = rep.certified_upper.unwrap();
        assert!(paper <= certified);
        assert!(certified <= rep.trivial_upper.unwrap());
    }

    #[test]
    fn report_14_4_certified_present() {
        let rep = report(14, 4, &[LayoutKind::Paper]).unwrap();
        let certified = rep.certified_upper.unwrap();
        assert!(rep.measured(LayoutKind::Paper).unwrap() <= certified);
        assert!(rep.residual_upper.is_some());
        assert!(rep.gap.is_some());
    }
}
