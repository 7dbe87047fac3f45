//! Exact dilation of a labeling of K(n,r): the maximum label difference
//! across an edge. Three independent methods serve as mutual oracles:
//!
//! * `brute`  - all vertex pairs, small instances only (ground truth);
//! * `scan`   - top-down partner scan with span pruning (production path);
//! * `sos`    - subset-max transform over the 2^n masks (mid-scale check).
//!
//! `boundary` gives the per-interval quantity: the longest edge with at
//! least one endpoint labeled inside a given interval.

use std::fmt;

use thiserror::Error;

use crate::layout::Labeling;
use crate::subset::RSubset;

pub const BRUTE_BUDGET: u64 = 20_000;
pub const SOS_MAX_N: u8 = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DilationError {
    #[error("brute-force method limited to {budget} vertices, instance has {count}")]
    BruteBudget { count: u64, budget: u64 },
    #[error("subset-transform method limited to n <= {max}, instance has n = {n}")]
    SosTooLarge { n: u8, max: u8 },
    #[error("interval [{lo}, {hi}] not contained in [1, {count}]")]
    BadInterval { lo: u64, hi: u64, count: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Brute,
    Scan,
    Sos,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Scan => "scan",
            Method::Sos => "sos",
        })
    }
}

/// An edge achieving the dilation, reported by the labels of its endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub low_label: u64,
    pub high_label: u64,
    pub low: RSubset,
    pub high: RSubset,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DilationResult {
    pub value: u64,
    pub witness: Option<Witness>,
    pub method: Method,
}

fn make_witness(l: &Labeling, pair: Option<(u64, u64)>) -> Option<Witness> {
    pair.map(|(a, b)| Witness {
        low_label: a,
        high_label: b,
        low: l.subset_of_label(a),
        high: l.subset_of_label(b),
    })
}

/// Exact dilation over all vertex pairs. Ties on the value resolve to the
/// smallest label pair, lexicographically.
pub fn dilation_brute(l: &Labeling) -> Result<DilationResult, DilationError> {
    let count = l.vertex_count();
    if count > BRUTE_BUDGET {
        return Err(DilationError::BruteBudget {
            count,
            budget: BRUTE_BUDGET,
        });
    }
    let masks = l.masks_by_label();
    let mut best = 0u64;
    let mut pair = None;
    for a in 1..=count {
        let ma = masks[(a - 1) as usize];
        for b in a + 1..=count {
            if ma & masks[(b - 1) as usize] == 0 && b - a > best {
                best = b - a;
                pair = Some((a, b));
            }
        }
    }
    Ok(DilationResult {
        value: best,
        witness: make_witness(l, pair),
        method: Method::Brute,
    })
}

/// Exact dilation by downward partner scan: for each label a in increasing
/// order, scan labels from the top down until a disjoint partner is found or
/// the remaining span cannot beat the current best.
pub fn dilation_scan(l: &Labeling) -> DilationResult {
    let masks = l.masks_by_label();
    let count = l.vertex_count();
    let mut best = 0u64;
    let mut pair = None;
    for a in 1..=count {
        if count - a <= best {
            break;
        }
        let ma = masks[(a - 1) as usize];
        let mut b = count;
        while b > a + best {
            if ma & masks[(b - 1) as usize] == 0 {
                best = b - a;
                pair = Some((a, b));
                break;
            }
            b -= 1;
        }
    }
    DilationResult {
        value: best,
        witness: make_witness(l, pair),
        method: Method::Scan,
    }
}

/// Exact dilation via an over-the-bits maximum transform: for every mask m
/// over `[1, n]`, compute the maximum label among vertices whose subset is
/// contained in m, then read each vertex's complement mask.
pub fn dilation_sos(l: &Labeling) -> Result<DilationResult, DilationError> {
    let n = l.n();
    if n > SOS_MAX_N {
        return Err(DilationError::SosTooLarge { n, max: SOS_MAX_N });
    }
    let masks = l.masks_by_label();
    let count = l.vertex_count();
    let full = 1usize << n;
    let mut max_label = vec![0u32; full];
    for (i, &m) in masks.iter().enumerate() {
        max_label[m as usize] = i as u32 + 1;
    }
    for bit in 0..n {
        let b = 1usize << bit;
        for m in 0..full {
            if m & b != 0 {
                let below = max_label[m ^ b];
                if below > max_label[m] {
                    max_label[m] = below;
                }
            }
        }
    }
    let all = (full - 1) as u64;
    let mut value = 0u64;
    for a in 1..=count {
        let comp = (!masks[(a - 1) as usize]) & all;
        let partner = max_label[comp as usize] as u64;
        if partner > a && partner - a > value {
            value = partner - a;
        }
    }
    // Witness recovery: first low label with a partner at exactly the value.
    let mut pair = None;
    if value > 0 {
        for a in 1..=count - value {
            if masks[(a - 1) as usize] & masks[(a + value - 1) as usize] == 0 {
                pair = Some((a, a + value));
                break;
            }
        }
    }
    Ok(DilationResult {
        value,
        witness: make_witness(l, pair),
        method: Method::Sos,
    })
}

/// Maximum label stretch over edges with at least one endpoint labeled in
/// `[lo, hi]`; 0 when no such edge exists.
pub fn boundary(l: &Labeling, lo: u64, hi: u64) -> Result<u64, DilationError> {
    let count = l.vertex_count();
    if lo < 1 || hi > count || lo > hi {
        return Err(DilationError::BadInterval { lo, hi, count });
    }
    let masks = l.masks_by_label();
    let mut best = 0u64;
    for a in lo..=hi {
        let ma = masks[(a - 1) as usize];
        // partner above a
        let mut b = count;
        while b > a + best {
            if ma & masks[(b - 1) as usize] == 0 {
                best = b - a;
                break;
            }
            b -= 1;
        }
        // partner below a
        let mut b = 1;
        while b + best < a {
            if ma & masks[(b - 1) as usize] == 0 {
                best = a - b;
                break;
            }
            b += 1;
        }
    }
    Ok(best)
}
