//! Upper-bound certificate machinery for the 29-block layout.
//!
//! A terminal label interval G (starting past the midpoint) is a right
//! blocker of a block F when F and G are cross-intersecting: no edge can run
//! from F past the start of G, which caps the stretch of any edge leaving F
//! at `max(y-1, C(n,r) - (|G| + x))` for F = [x, y]. Each of the 14 blocks in
//! the first half of the layout carries a designated blocker; verifying all
//! of them yields an exact integer upper bound on the dilation of the
//! constructed labeling.

use thiserror::Error;

use crate::comb::binom_u64;
use crate::layout::{paper_layout, BlockId, BlockLayout, LayoutError};
use crate::subset::RSubset;

pub const EXACT_PAIR_BUDGET: u128 = 100_000_000;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("block {0} in the terminal interval is empty")]
    EmptyBlock(BlockId),
    #[error("exhaustive check of {f} vs terminal({m}) needs {product} pair tests, budget {budget}")]
    ExactBudget {
        f: BlockId,
        m: BlockId,
        product: u128,
        budget: u128,
    },
    #[error("malformed interval: x={x} y={y} g_size={g_size} total={total}")]
    MalformedInterval {
        x: u64,
        y: u64,
        g_size: u64,
        total: u64,
    },
    #[error("certificate {f} -> terminal({m}) failed verification")]
    CertificationFailed { f: BlockId, m: BlockId },
    #[error(transparent)]
    Layout(#[from] LayoutError),
}

/// The 14 designated (block, blocker-start) pairs. The terminal interval
/// starting at the second block of each pair is the right blocker of the
/// first. Note the shared blocker of S357 and Rest35.
pub const BLOCKER_TABLE: [(BlockId, BlockId); 14] = [
    (BlockId::S12, BlockId::RestS2),
    (BlockId::S156, BlockId::S236),
    (BlockId::S157, BlockId::S235),
    (BlockId::Rest15, BlockId::Rest25),
    (BlockId::S189, BlockId::S259),
    (BlockId::S18_10, BlockId::S258),
    (BlockId::RestS1p, BlockId::RestS1pp),
    (BlockId::S346, BlockId::S168),
    (BlockId::S347, BlockId::S167),
    (BlockId::Rest34, BlockId::Rest14),
    (BlockId::S356, BlockId::S146),
    (BlockId::S357, BlockId::S145),
    (BlockId::Rest35, BlockId::S145),
    (BlockId::Rest3, BlockId::S13),
];

pub fn blocker_table() -> &'static [(BlockId, BlockId); 14] {
    &BLOCKER_TABLE
}

fn family_intersection(members: &[RSubset]) -> u64 {
    members.iter().fold(u64::MAX, |acc, m| acc & m.mask())
}

/// Result of the per-block sufficient condition: every block B of the
/// terminal interval shares a common element with F (an element of
/// I(B) ∩ I(F)), which makes F and the whole interval cross-intersecting.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SufficientCheck {
    pub f_block: BlockId,
    pub m_block: BlockId,
    /// Condition (a): the terminal interval starts past the midpoint.
    pub past_midpoint: bool,
    /// F is empty, so cross-intersection holds vacuously.
    pub vacuous: bool,
    /// Per terminal block: the smallest shared element, or None on failure.
    pub witnesses: Vec<(BlockId, Option<u8>)>,
    pub ok: bool,
}

pub fn verify_blocker_sufficient(
    bl: &BlockLayout,
    f: BlockId,
    m: BlockId,
) -> Result<SufficientCheck, CertError> {
    let count = bl.vertex_count();
    let (g_start, _) = bl.terminal_interval(m);
    let past_midpoint = 2 * g_start > count;
    let f_members = &bl.block(f).members;
    if f_members.is_empty() {
        return Ok(SufficientCheck {
            f_block: f,
            m_block: m,
            past_midpoint,
            vacuous: true,
            witnesses: Vec::new(),
            ok: past_midpoint,
        });
    }
    let f_common = family_intersection(f_members);
    let mut witnesses = Vec::new();
    let mut all = true;
    for block in bl.terminal_blocks(m) {
        if block.is_empty() {
            return Err(CertError::EmptyBlock(block.id));
        }
        let shared = family_intersection(&block.members) & f_common;
        let witness = if shared != 0 {
            Some(shared.trailing_zeros() as u8 + 1)
        } else {
            all = false;
            None
        };
        witnesses.push((block.id, witness));
    }
    Ok(SufficientCheck {
        f_block: f,
        m_block: m,
        past_midpoint,
        vacuous: false,
        witnesses,
        ok: all && past_midpoint,
    })
}

/// Result of the exhaustive pairwise cross-intersection check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactCheck {
    pub f_block: BlockId,
    pub m_block: BlockId,
    pub past_midpoint: bool,
    pub pairs_checked: u128,
    /// A disjoint pair (member of F, member of the terminal interval) when
    /// the check fails.
    pub counterexample: Option<(RSubset, RSubset)>,
    pub ok: bool,
}

pub fn verify_blocker_exact(
    bl: &BlockLayout,
    f: BlockId,
    m: BlockId,
) -> Result<ExactCheck, CertError> {
    let count = bl.vertex_count();
    let (g_start, g_size) = bl.terminal_interval(m);
    let past_midpoint = 2 * g_start > count;
    let f_members = &bl.block(f).members;
    let product = f_members.len() as u128 * g_size as u128;
    if product > EXACT_PAIR_BUDGET {
        return Err(CertError::ExactBudget {
            f,
            m,
            product,
            budget: EXACT_PAIR_BUDGET,
        });
    }
    let mut pairs_checked = 0u128;
    for block in bl.terminal_blocks(m) {
        for w in &block.members {
            let mw = w.mask();
            for v in f_members {
                pairs_checked += 1;
                if v.mask() & mw == 0 {
                    return Ok(ExactCheck {
                        f_block: f,
                        m_block: m,
                        past_midpoint,
                        pairs_checked,
                        counterexample: Some((v.clone(), w.clone())),
                        ok: false,
                    });
                }
            }
        }
    }
    Ok(ExactCheck {
        f_block: f,
        m_block: m,
        past_midpoint,
        pairs_checked,
        counterexample: None,
        ok: past_midpoint,
    })
}

/// Edge-stretch cap from a right blocker: for F = [x, y] with a terminal
/// blocker of size `g_size` in `[1, total]`, no edge touching F is longer
/// than `max(y - 1, total - (g_size + x))`.
pub fn blocked_interval_bound(x: u64, y: u64, g_size: u64, total: u64) -> Result<u64, CertError> {
    if x < 1 || x > y || y > total || g_size > total {
        return Err(CertError::MalformedInterval {
            x,
            y,
            g_size,
            total,
        });
    }
    let down = y - 1;
    let up = total as i128 - (g_size as i128 + x as i128);
    Ok(down.max(up.max(0) as u64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HalfId {
    /// Floor half of the star at 1 (blocks 1-7).
    Floor,
    /// Ceil half of the star at 1 (blocks 23-29).
    Ceil,
}

impl HalfId {
    pub fn name(self) -> &'static str {
        match self {
            HalfId::Floor => "S1'",
            HalfId::Ceil => "S1''",
        }
    }
}

/// A full prefix family referenced by a size decomposition, with the index
/// that determines its size (C(n-index, r-2) for pairs, C(n-index, r-3) for
/// triples).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NamedFamily {
    pub name: &'static str,
    pub index: u8,
    pub size: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IdentityDetail {
    /// F = S12: the blocker is the whole final side, |G| = |S2| + |S1''|.
    WholeSide { s2: u64, s1_ceil: u64 },
    /// |G| + x = 1 + |half| + pair sizes + triple sizes.
    Decomposed {
        half: HalfId,
        half_size: u64,
        pairs: Vec<NamedFamily>,
        triples: Vec<NamedFamily>,
        /// Sum of the two pair indices drawn from {2,5} or {3,4}.
        bd_sum: Option<u8>,
        /// Exactly two pairs and two triples.
        canonical: bool,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeIdentity {
    pub f_block: BlockId,
    pub m_block: BlockId,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
    pub detail: IdentityDetail,
}

/// The family decomposition of `|G| + x` for each block of the first half.
/// Pairs carry the index b of C(n-b, r-2), triples the index t of
/// C(n-t, r-3). Two blocks deviate from the two-pair/two-triple pattern:
/// Rest35 carries a third triple and Rest3 a third pair in place of its
/// triples; both still contain a pair couple with indices summing to 7.
fn identity_families(
    f: BlockId,
) -> Option<(HalfId, &'static [(&'static str, u8)], &'static [(&'static str, u8)])> {
    use HalfId::*;
    let spec: (HalfId, &[(&str, u8)], &[(&str, u8)]) = match f {
        BlockId::S156 => (Ceil, &[("S12", 2), ("S25", 5)], &[("S236", 6), ("S235", 5)]),
        BlockId::S157 => (Ceil, &[("S12", 2), ("S25", 5)], &[("S156", 6), ("S235", 5)]),
        BlockId::Rest15 => (Ceil, &[("S12", 2), ("S25", 5)], &[("S156", 6), ("S157", 7)]),
        BlockId::S189 => (Ceil, &[("S12", 2), ("S15", 5)], &[("S259", 9), ("S258", 8)]),
        BlockId::S18_10 => (Ceil, &[("S12", 2), ("S15", 5)], &[("S189", 9), ("S258", 8)]),
        BlockId::RestS1p => (
            Ceil,
            &[("S12", 2), ("S15", 5)],
            &[("S189", 9), ("S18_10", 10)],
        ),
        BlockId::S346 => (Floor, &[("S14", 4), ("S13", 3)], &[("S168", 8), ("S167", 7)]),
        BlockId::S347 => (Floor, &[("S14", 4), ("S13", 3)], &[("S167", 7), ("S346", 6)]),
        BlockId::Rest34 => (Floor, &[("S14", 4), ("S13", 3)], &[("S346", 6), ("S347", 7)]),
        BlockId::S356 => (Floor, &[("S34", 4), ("S13", 3)], &[("S146", 6), ("S145", 5)]),
        BlockId::S357 => (Floor, &[("S34", 4), ("S13", 3)], &[("S356", 6), ("S145", 5)]),
        BlockId::Rest35 => (
            Floor,
            &[("S34", 4), ("S13", 3)],
            &[("S356", 6), ("S357", 7), ("S145", 5)],
        ),
        BlockId::Rest3 => (Floor, &[("S34", 4), ("S35", 5), ("S13", 3)], &[]),
        _ => return None,
    };
    Some(spec)
}

fn designated_couple(pairs: &[NamedFamily]) -> Option<u8> {
    for i in 0..pairs.len() {
        for j in i + 1..pairs.len() {
            let (a, b) = (pairs[i].index, pairs[j].index);
            let couple = [a.min(b), a.max(b)];
            if couple == [2, 5] || couple == [3, 4] {
                return Some(a + b);
            }
        }
    }
    None
}

/// Verifies the exact size accounting behind the blocker of `f`: the blocker
/// size plus the block's start position equals a fixed combination of full
/// family sizes, all evaluated as exact integers.
pub fn size_identity(bl: &BlockLayout, f: BlockId, m: BlockId) -> Result<SizeIdentity, CertError> {
    let n = bl.n() as u64;
    let r = bl.r() as u64;
    let x = bl.block(f).start;
    let (_, g_size) = bl.terminal_interval(m);

    if f == BlockId::S12 {
        let s2 = binom_u64(n - 2, r - 1);
        let s1_ceil = bl.s1_dprime_size();
        let rhs = s2 + s1_ceil;
        return Ok(SizeIdentity {
            f_block: f,
            m_block: m,
            lhs: g_size,
            rhs,
            holds: g_size == rhs,
            detail: IdentityDetail::WholeSide { s2, s1_ceil },
        });
    }

    let (half, pair_spec, triple_spec) = identity_families(f).ok_or(
        CertError::CertificationFailed { f, m },
    )?;
    let half_size = match half {
        HalfId::Floor => bl.s1_prime_size(),
        HalfId::Ceil => bl.s1_dprime_size(),
    };
    let pairs: Vec<NamedFamily> = pair_spec
        .iter()
        .map(|&(name, index)| NamedFamily {
            name,
            index,
            size: binom_u64(n - index as u64, r - 2),
        })
        .collect();
    let triples: Vec<NamedFamily> = triple_spec
        .iter()
        .map(|&(name, index)| NamedFamily {
            name,
            index,
            size: binom_u64(n.saturating_sub(index as u64), r - 3),
        })
        .collect();
    let rhs = 1
        + half_size
        + pairs.iter().map(|p| p.size).sum::<u64>()
        + triples.iter().map(|t| t.size).sum::<u64>();
    let lhs = g_size + x;
    let bd_sum = designated_couple(&pairs);
    let canonical = pairs.len() == 2 && triples.len() == 2;
    Ok(SizeIdentity {
        f_block: f,
        m_block: m,
        lhs,
        rhs,
        holds: lhs == rhs,
        detail: IdentityDetail::Decomposed {
            half,
            half_size,
            pairs,
            triples,
            bd_sum,
            canonical,
        },
    })
}

/// Status of the exhaustive check in a certificate report row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExactStatus {
    NotRequested,
    SkippedOverBudget { product: u128 },
    Checked(ExactCheck),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertRow {
    pub f_block: BlockId,
    pub m_block: BlockId,
    pub f_interval: (u64, u64),
    pub g_start: u64,
    pub g_size: u64,
    pub sufficient: SufficientCheck,
    pub exact: ExactStatus,
    pub identity: SizeIdentity,
    pub interval_bound: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CertTable {
    pub n: u8,
    pub r: u8,
    pub rows: Vec<CertRow>,
    /// Stretch cap for edges touching the wraparound block R.
    pub r_bound: u64,
    pub certified_upper: u64,
    pub all_sufficient: bool,
    pub all_exact_checked_ok: bool,
    pub all_identities_hold: bool,
}

/// Runs every certificate against a built layout: the sufficient condition
/// always, the exhaustive condition on request (within budget), and the size
/// identities. The certified upper bound is the maximum of the R cap and the
/// per-block interval bounds.
pub fn verify_table(bl: &BlockLayout, run_exact: bool) -> Result<CertTable, CertError> {
    let count = bl.vertex_count();
    let r_bound = count - bl.s1_prime_size() - bl.s3_size();
    let mut rows = Vec::with_capacity(14);
    let mut certified = r_bound;
    let mut all_sufficient = true;
    let mut all_exact = true;
    let mut all_ident = true;
    for &(f, m) in &BLOCKER_TABLE {
        let fb = bl.block(f);
        let (g_start, g_size) = bl.terminal_interval(m);
        let sufficient = verify_blocker_sufficient(bl, f, m)?;
        all_sufficient &= sufficient.ok;
        let exact = if !run_exact {
            ExactStatus::NotRequested
        } else {
            match verify_blocker_exact(bl, f, m) {
                Ok(check) => {
                    all_exact &= check.ok;
                    ExactStatus::Checked(check)
                }
                Err(CertError::ExactBudget { product, .. }) => {
                    ExactStatus::SkippedOverBudget { product }
                }
                Err(e) => return Err(e),
            }
        };
        let identity = size_identity(bl, f, m)?;
        all_ident &= identity.holds;
        let interval_bound = if fb.is_empty() {
            0
        } else {
            let bound = blocked_interval_bound(fb.start, fb.end, g_size, count)?;
            certified = certified.max(bound);
            bound
        };
        rows.push(CertRow {
            f_block: f,
            m_block: m,
            f_interval: (fb.start, fb.end),
            g_start,
            g_size,
            sufficient,
            exact,
            identity,
            interval_bound,
        });
    }
    Ok(CertTable {
        n: bl.n(),
        r: bl.r(),
        rows,
        r_bound,
        certified_upper: certified,
        all_sufficient,
        all_exact_checked_ok: all_exact,
        all_identities_hold: all_ident,
    })
}

/// Exact integer upper bound on the dilation of the constructed layout at
/// (n, r), valid only when all 14 blocker certificates verify.
pub fn certified_upper_bound(n: u8, r: u8) -> Result<u64, CertError> {
    let (_, bl) = paper_layout(n, r)?;
    certified_upper_bound_for(&bl)
}

pub fn certified_upper_bound_for(bl: &BlockLayout) -> Result<u64, CertError> {
    let count = bl.vertex_count();
    let mut best = count - bl.s1_prime_size() - bl.s3_size();
    for &(f, m) in &BLOCKER_TABLE {
        let check = verify_blocker_sufficient(bl, f, m)?;
        if !check.ok {
            return Err(CertError::CertificationFailed { f, m });
        }
        let fb = bl.block(f);
        if fb.is_empty() {
            continue;
        }
        let (_, g_size) = bl.terminal_interval(m);
        best = best.max(blocked_interval_bound(fb.start, fb.end, g_size, count)?);
    }
    Ok(best)
}
