//! Labelings of V(K(n,r)): the 29-block constructed layout, the split-star
//! baseline, a reverse breadth-first baseline, validation, and a plain-text
//! persistence format.
//!
//! The constructed layout partitions the label interval `[1, C(n,r)]` into 29
//! consecutive blocks. Reading the two rows below left to right, with `R`
//! wrapping from the end of the first row into the second, gives the block
//! order:
//!
//! ```text
//! S12 S156 S157 Rest15 S189 S18_10 RestS1p | S346 S347 Rest34 S356 S357 Rest35 Rest3 | R
//! R | RestS2 Rest23 S236 S235 Rest25 S259 S258 | RestS1pp S168 S167 Rest14 S146 S145 S13
//! ```
//!
//! Blocks 1-7 are a floor-half of the star at element 1, blocks 8-14 are the
//! family with minimum 3, block 15 is everything with minimum at least 4,
//! blocks 16-22 the family with minimum 2, and blocks 23-29 the remaining
//! ceil-half of the star at 1. Within every block, members are laid out in
//! colex order.

use std::fmt;
use std::io::{self, BufRead, Write};

use thiserror::Error;

use crate::comb::{binom_u64, colex_rank, colex_unrank, ColexCombinations};
use crate::subset::RSubset;

/// In-memory budget for explicit labelings.
pub const VERTEX_BUDGET: u64 = 20_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Infeasibility {
    #[error("construction requires r >= 3 (triple-prefix blocks are undefined for r = {r})")]
    RTooSmall { r: u8 },
    #[error("construction requires ground-set element 10 (block S18_10), but n = {n} < 10")]
    GroundSetTooSmall { n: u8 },
    #[error("floor half of the star at 1 cannot hold its four designated families (short by {deficit})")]
    FloorHalfDeficit { deficit: i128 },
    #[error("ceil half of the star at 1 cannot hold its four designated families (short by {deficit})")]
    CeilHalfDeficit { deficit: i128 },
    #[error("initial 14 blocks spill past the midpoint: {first_side} > {half}")]
    FirstHalfOverflow { first_side: u64, half: u64 },
    #[error("initial side longer than final side: {first_side} > {second_side}")]
    SidesUnbalanced { first_side: u64, second_side: u64 },
}

#[derive(Debug, Error)]
pub enum LayoutError {
    #[error(transparent)]
    Infeasible(#[from] Infeasibility),
    #[error("C({n},{r}) = {count} vertices exceeds the in-memory budget {budget}")]
    TooLarge { n: u8, r: u8, count: u64, budget: u64 },
    #[error("invalid parameters: need 1 <= r <= n <= 64, got n={n} r={r}")]
    BadParameters { n: u8, r: u8 },
    #[error("labeling is not a bijection: {0:?}")]
    NotBijective(Vec<Violation>),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
    #[error("layout file parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

/// A bijection between the r-subsets of `[1, n]` (indexed by colex rank) and
/// the labels `1..=C(n,r)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Labeling {
    n: u8,
    r: u8,
    /// forward[rank - 1] = label
    forward: Vec<u64>,
    /// inverse[label - 1] = rank
    inverse: Vec<u64>,
}

impl Labeling {
    pub fn from_forward(n: u8, r: u8, forward: Vec<u64>) -> Result<Self, LayoutError> {
        if r == 0 || r > n || n > 64 {
            return Err(LayoutError::BadParameters { n, r });
        }
        let count = binom_u64(n as u64, r as u64);
        let violations = check_bijection(count, &forward);
        if !violations.is_empty() {
            return Err(LayoutError::NotBijective(violations));
        }
        let mut inverse = vec![0u64; count as usize];
        for (i, &label) in forward.iter().enumerate() {
            inverse[(label - 1) as usize] = i as u64 + 1;
        }
        Ok(Labeling {
            n,
            r,
            forward,
            inverse,
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn vertex_count(&self) -> u64 {
        self.forward.len() as u64
    }

    pub fn label_of_rank(&self, rank: u64) -> u64 {
        self.forward[(rank - 1) as usize]
    }

    pub fn rank_of_label(&self, label: u64) -> u64 {
        self.inverse[(label - 1) as usize]
    }

    pub fn label_of(&self, s: &RSubset) -> u64 {
        self.label_of_rank(colex_rank(s))
    }

    pub fn subset_of_label(&self, label: u64) -> RSubset {
        colex_unrank(self.rank_of_label(label), self.n, self.r).expect("rank in range")
    }

    pub fn forward(&self) -> &[u64] {
        &self.forward
    }

    /// Characteristic masks indexed by label - 1.
    pub fn masks_by_label(&self) -> Vec<u64> {
        let mut masks = vec![0u64; self.forward.len()];
        for rank in 1..=self.vertex_count() {
            let s = colex_unrank(rank, self.n, self.r).expect("rank in range");
            masks[(self.label_of_rank(rank) - 1) as usize] = s.mask();
        }
        masks
    }

    /// The labeling with every label v replaced by C(n,r)+1-v.
    pub fn reversed(&self) -> Labeling {
        let count = self.vertex_count();
        let forward = self.forward.iter().map(|&l| count + 1 - l).collect();
        Labeling::from_forward(self.n, self.r, forward).expect("reversal preserves bijection")
    }

    /// Plain-text layout format: a header `n=<n> r=<r> count=<count>`, then
    /// one `label,e1 e2 ... er` record per line, sorted by label.
    pub fn write_to(&self, w: &mut impl Write) -> io::Result<()> {
        writeln!(w, "n={} r={} count={}", self.n, self.r, self.vertex_count())?;
        for label in 1..=self.vertex_count() {
            let s = self.subset_of_label(label);
            let elems: Vec<String> = s.elements().iter().map(|e| e.to_string()).collect();
            writeln!(w, "{},{}", label, elems.join(" "))?;
        }
        Ok(())
    }

    pub fn read_from(reader: &mut impl BufRead) -> Result<Labeling, LayoutError> {
        let mut lines = reader.lines();
        let header = lines
            .next()
            .ok_or(LayoutError::Parse {
                line: 1,
                reason: "missing header".into(),
            })??;
        let mut n = None;
        let mut r = None;
        let mut count = None;
        for part in header.split_whitespace() {
            let (key, value) = part.split_once('=').ok_or_else(|| LayoutError::Parse {
                line: 1,
                reason: format!("bad header field `{part}`"),
            })?;
            let parsed: u64 = value.parse().map_err(|_| LayoutError::Parse {
                line: 1,
                reason: format!("bad header value `{value}`"),
            })?;
            match key {
                "n" => n = Some(parsed),
                "r" => r = Some(parsed),
                "count" => count = Some(parsed),
                _ => {
                    return Err(LayoutError::Parse {
                        line: 1,
                        reason: format!("unknown header key `{key}`"),
                    })
                }
            }
        }
        let (n, r, count) = match (n, r, count) {
            (Some(n), Some(r), Some(c)) => (n, r, c),
            _ => {
                return Err(LayoutError::Parse {
                    line: 1,
                    reason: "header must contain n=, r=, count=".into(),
                })
            }
        };
        if n == 0 || n > 64 || r == 0 || r > n {
            return Err(LayoutError::BadParameters {
                n: n.min(255) as u8,
                r: r.min(255) as u8,
            });
        }
        let (n, r) = (n as u8, r as u8);
        let expected = binom_u64(n as u64, r as u64);
        if count != expected {
            return Err(LayoutError::Parse {
                line: 1,
                reason: format!("count={count} but C({n},{r}) = {expected}"),
            });
        }
        let mut forward = vec![0u64; expected as usize];
        for (idx, line) in lines.enumerate() {
            let lineno = idx + 2;
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let (label_str, elems_str) =
                line.split_once(',').ok_or_else(|| LayoutError::Parse {
                    line: lineno,
                    reason: "expected `label,elements`".into(),
                })?;
            let label: u64 = label_str.trim().parse().map_err(|_| LayoutError::Parse {
                line: lineno,
                reason: format!("bad label `{label_str}`"),
            })?;
            if label < 1 || label > expected {
                return Err(LayoutError::Parse {
                    line: lineno,
                    reason: format!("label {label} out of range [1, {expected}]"),
                });
            }
            let elems: Result<Vec<u8>, _> = elems_str
                .split_whitespace()
                .map(|t| t.parse::<u8>())
                .collect();
            let elems = elems.map_err(|_| LayoutError::Parse {
                line: lineno,
                reason: format!("bad element list `{elems_str}`"),
            })?;
            let subset = RSubset::new(elems).map_err(|e| LayoutError::Parse {
                line: lineno,
                reason: e.to_string(),
            })?;
            subset.check_ambient(n, r).map_err(|e| LayoutError::Parse {
                line: lineno,
                reason: e.to_string(),
            })?;
            forward[(colex_rank(&subset) - 1) as usize] = label;
        }
        Labeling::from_forward(n, r, forward)
    }
}

/// The 29 blocks of the constructed layout, in layout order.
#[allow(non_camel_case_types)]
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BlockId {
    S12,
    S156,
    S157,
    Rest15,
    S189,
    S18_10,
    RestS1p,
    S346,
    S347,
    Rest34,
    S356,
    S357,
    Rest35,
    Rest3,
    R,
    RestS2,
    Rest23,
    S236,
    S235,
    Rest25,
    S259,
    S258,
    RestS1pp,
    S168,
    S167,
    Rest14,
    S146,
    S145,
    S13,
}

impl BlockId {
    pub const LAYOUT_ORDER: [BlockId; 29] = [
        BlockId::S12,
        BlockId::S156,
        BlockId::S157,
        BlockId::Rest15,
        BlockId::S189,
        BlockId::S18_10,
        BlockId::RestS1p,
        BlockId::S346,
        BlockId::S347,
        BlockId::Rest34,
        BlockId::S356,
        BlockId::S357,
        BlockId::Rest35,
        BlockId::Rest3,
        BlockId::R,
        BlockId::RestS2,
        BlockId::Rest23,
        BlockId::S236,
        BlockId::S235,
        BlockId::Rest25,
        BlockId::S259,
        BlockId::S258,
        BlockId::RestS1pp,
        BlockId::S168,
        BlockId::S167,
        BlockId::Rest14,
        BlockId::S146,
        BlockId::S145,
        BlockId::S13,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BlockId::S12 => "S12",
            BlockId::S156 => "S156",
            BlockId::S157 => "S157",
            BlockId::Rest15 => "Rest15",
            BlockId::S189 => "S189",
            BlockId::S18_10 => "S18_10",
            BlockId::RestS1p => "RestS1p",
            BlockId::S346 => "S346",
            BlockId::S347 => "S347",
            BlockId::Rest34 => "Rest34",
            BlockId::S356 => "S356",
            BlockId::S357 => "S357",
            BlockId::Rest35 => "Rest35",
            BlockId::Rest3 => "Rest3",
            BlockId::R => "R",
            BlockId::RestS2 => "RestS2",
            BlockId::Rest23 => "Rest23",
            BlockId::S236 => "S236",
            BlockId::S235 => "S235",
            BlockId::Rest25 => "Rest25",
            BlockId::S259 => "S259",
            BlockId::S258 => "S258",
            BlockId::RestS1pp => "RestS1pp",
            BlockId::S168 => "S168",
            BlockId::S167 => "S167",
            BlockId::Rest14 => "Rest14",
            BlockId::S146 => "S146",
            BlockId::S145 => "S145",
            BlockId::S13 => "S13",
        }
    }

    /// Position in [`BlockId::LAYOUT_ORDER`].
    pub fn position(self) -> usize {
        Self::LAYOUT_ORDER
            .iter()
            .position(|&b| b == self)
            .expect("block in order table")
    }
}

impl fmt::Display for BlockId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

enum NextRule {
    /// No constraint beyond the tail ground set.
    All,
    /// The smallest tail element must be listed or at least the threshold.
    InOrAbove {
        small: &'static [u8],
        at_least: u8,
    },
}

struct BlockRule {
    forced: &'static [u8],
    ground_lo: u8,
    next: NextRule,
}

/// Membership rules for the 27 structural blocks. `RestS1p`/`RestS1pp` are
/// filled from the leftover pool of the star at 1 and have no static rule.
fn block_rule(id: BlockId) -> Option<BlockRule> {
    use NextRule::*;
    let rule = |forced: &'static [u8], ground_lo: u8, next: NextRule| {
        Some(BlockRule {
            forced,
            ground_lo,
            next,
        })
    };
    match id {
        BlockId::S12 => rule(&[1, 2], 3, All),
        BlockId::S156 => rule(&[1, 5, 6], 7, All),
        BlockId::S157 => rule(&[1, 5, 7], 8, All),
        BlockId::Rest15 => rule(&[1, 5], 8, All),
        BlockId::S189 => rule(&[1, 8, 9], 10, All),
        BlockId::S18_10 => rule(&[1, 8, 10], 11, All),
        BlockId::RestS1p => None,
        BlockId::S346 => rule(&[3, 4, 6], 7, All),
        BlockId::S347 => rule(&[3, 4, 7], 8, All),
        BlockId::Rest34 => rule(
            &[3, 4],
            5,
            InOrAbove {
                small: &[5],
                at_least: 8,
            },
        ),
        BlockId::S356 => rule(&[3, 5, 6], 7, All),
        BlockId::S357 => rule(&[3, 5, 7], 8, All),
        BlockId::Rest35 => rule(&[3, 5], 8, All),
        BlockId::Rest3 => rule(&[3], 6, All),
        BlockId::R => rule(&[], 4, All),
        BlockId::RestS2 => rule(
            &[2],
            3,
            InOrAbove {
                small: &[4],
                at_least: 6,
            },
        ),
        BlockId::Rest23 => rule(
            &[2, 3],
            4,
            InOrAbove {
                small: &[4],
                at_least: 7,
            },
        ),
        BlockId::S236 => rule(&[2, 3, 6], 7, All),
        BlockId::S235 => rule(&[2, 3, 5], 6, All),
        BlockId::Rest25 => rule(
            &[2, 5],
            6,
            InOrAbove {
                small: &[6, 7],
                at_least: 10,
            },
        ),
        BlockId::S259 => rule(&[2, 5, 9], 10, All),
        BlockId::S258 => rule(&[2, 5, 8], 9, All),
        BlockId::RestS1pp => None,
        BlockId::S168 => rule(&[1, 6, 8], 9, All),
        BlockId::S167 => rule(&[1, 6, 7], 8, All),
        BlockId::Rest14 => rule(&[1, 4], 7, All),
        BlockId::S146 => rule(&[1, 4, 6], 7, All),
        BlockId::S145 => rule(&[1, 4, 5], 6, All),
        BlockId::S13 => rule(&[1, 3], 4, All),
    }
}

fn next_allowed(rule: &NextRule, tail: &[u8]) -> bool {
    match rule {
        NextRule::All => true,
        NextRule::InOrAbove { small, at_least } => match tail.first() {
            None => true,
            Some(&min) => small.contains(&min) || min >= *at_least,
        },
    }
}

fn rule_members(rule: &BlockRule, n: u8, r: u8) -> Vec<RSubset> {
    let t = rule.forced.len();
    let ground: Vec<u8> = (rule.ground_lo..=n).collect();
    ColexCombinations::new(&ground, r as usize - t)
        .filter(|tail| next_allowed(&rule.next, tail))
        .map(|tail| {
            let mut elems = rule.forced.to_vec();
            elems.extend(tail);
            RSubset::new(elems).expect("block rule produced invalid subset")
        })
        .collect()
}

fn rule_contains(rule: &BlockRule, s: &RSubset, n: u8, r: u8) -> bool {
    if s.len() != r as usize {
        return false;
    }
    let t = rule.forced.len();
    let elems = s.elements();
    if elems[..t] != rule.forced[..] {
        return false;
    }
    let tail = &elems[t..];
    if let Some(&min) = tail.first() {
        if min < rule.ground_lo {
            return false;
        }
    }
    if elems.last().is_some_and(|&e| e > n) {
        return false;
    }
    next_allowed(&rule.next, tail)
}

/// True when s belongs to the leftover pool of the star at 1, i.e. contains 1
/// but avoids the eight designated prefix families of the construction.
fn in_star_pool(s: &RSubset) -> bool {
    let e = s.elements();
    if e[0] != 1 || e.len() < 3 {
        return false;
    }
    match e[1] {
        2..=5 => false,                          // S12, S13, S14, S15
        6 => e[2] != 7 && e[2] != 8,             // S167, S168
        8 => e[2] != 9 && e[2] != 10,            // S189, S18_10
        _ => true,
    }
}

/// Exact block sizes from binomial formulas, for feasibility and accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SplitSizes {
    pub s1: u64,
    pub s1_floor: u64,
    pub s1_ceil: u64,
    pub s2: u64,
    pub s3: u64,
    pub x_prime: i128,
    pub x_dprime: i128,
}

pub fn split_sizes(n: u8, r: u8) -> SplitSizes {
    let (n, r) = (n as u64, r as u64);
    let s1 = binom_u64(n - 1, r - 1);
    let s1_floor = s1 / 2;
    let s1_ceil = s1 - s1_floor;
    let pair = |b: u64| binom_u64(n.saturating_sub(b), r - 2);
    let triple = |t: u64| binom_u64(n.saturating_sub(t), r - 3);
    let x_prime =
        s1_floor as i128 - (pair(2) + pair(5) + triple(9) + triple(10)) as i128;
    let x_dprime =
        s1_ceil as i128 - (pair(3) + pair(4) + triple(7) + triple(8)) as i128;
    SplitSizes {
        s1,
        s1_floor,
        s1_ceil,
        s2: binom_u64(n - 2, r - 1),
        s3: binom_u64(n - 3, r - 1),
        x_prime,
        x_dprime,
    }
}

/// Checks whether the 29-block construction is well defined at (n, r):
/// r >= 3, the ground set reaches element 10, both halves of the star at 1
/// can hold their designated families, the initial 14 blocks stay inside the
/// first half, and the initial side is no longer than the final side.
pub fn feasibility(n: u8, r: u8) -> Result<(), Infeasibility> {
    if r < 3 {
        return Err(Infeasibility::RTooSmall { r });
    }
    if n < 10 {
        return Err(Infeasibility::GroundSetTooSmall { n });
    }
    let sz = split_sizes(n, r);
    if sz.x_prime < 0 {
        return Err(Infeasibility::FloorHalfDeficit {
            deficit: -sz.x_prime,
        });
    }
    if sz.x_dprime < 0 {
        return Err(Infeasibility::CeilHalfDeficit {
            deficit: -sz.x_dprime,
        });
    }
    let count = binom_u64(n as u64, r as u64);
    let first_side = sz.s1_floor + sz.s3;
    let second_side = sz.s1_ceil + sz.s2;
    if first_side > count / 2 {
        return Err(Infeasibility::FirstHalfOverflow {
            first_side,
            half: count / 2,
        });
    }
    if first_side > second_side {
        return Err(Infeasibility::SidesUnbalanced {
            first_side,
            second_side,
        });
    }
    Ok(())
}

/// One block of the constructed layout: its identifier, its label interval,
/// and its members in label order (which is colex order).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub id: BlockId,
    pub start: u64,
    pub end: u64,
    pub members: Vec<RSubset>,
}

impl Block {
    pub fn len(&self) -> u64 {
        self.members.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// The ordered 29-block decomposition of `[1, C(n,r)]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockLayout {
    n: u8,
    r: u8,
    blocks: Vec<Block>,
}

impl BlockLayout {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn vertex_count(&self) -> u64 {
        binom_u64(self.n as u64, self.r as u64)
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block(&self, id: BlockId) -> &Block {
        &self.blocks[id.position()]
    }

    /// Terminal label interval starting at the given block: (start, size).
    pub fn terminal_interval(&self, id: BlockId) -> (u64, u64) {
        let start = self.block(id).start;
        (start, self.vertex_count() - start + 1)
    }

    /// Blocks from the given one to the end of the layout.
    pub fn terminal_blocks(&self, id: BlockId) -> &[Block] {
        &self.blocks[id.position()..]
    }

    /// Size of the floor half of the star at 1 (blocks 1-7).
    pub fn s1_prime_size(&self) -> u64 {
        self.blocks[..7].iter().map(Block::len).sum()
    }

    /// Size of the ceil half of the star at 1 (blocks 23-29).
    pub fn s1_dprime_size(&self) -> u64 {
        self.blocks[22..].iter().map(Block::len).sum()
    }

    /// Size of the family with minimum element 3 (blocks 8-14).
    pub fn s3_size(&self) -> u64 {
        self.blocks[7..14].iter().map(Block::len).sum()
    }

    /// Size of the family with minimum element 2 (blocks 16-22).
    pub fn s2_size(&self) -> u64 {
        self.blocks[15..22].iter().map(Block::len).sum()
    }
}

/// Builds the 29-block layout. Within each block, members are in colex
/// order; the leftover pool of the star at 1 is split with its colex-smallest
/// part going to the floor half.
pub fn paper_layout(n: u8, r: u8) -> Result<(Labeling, BlockLayout), LayoutError> {
    feasibility(n, r)?;
    let count = binom_u64(n as u64, r as u64);
    if count > VERTEX_BUDGET {
        return Err(LayoutError::TooLarge {
            n,
            r,
            count,
            budget: VERTEX_BUDGET,
        });
    }
    let sz = split_sizes(n, r);

    // Leftover pool of the star at 1, colex order, split floor/ceil.
    let star: Vec<RSubset> = crate::comb::prefix_family(&[1], n, r).expect("star prefix");
    let pool: Vec<RSubset> = star.into_iter().filter(in_star_pool).collect();
    debug_assert_eq!(pool.len() as i128, sz.x_prime + sz.x_dprime);
    let x_prime: Vec<RSubset> = pool[..sz.x_prime as usize].to_vec();
    let x_dprime: Vec<RSubset> = pool[sz.x_prime as usize..].to_vec();

    let mut blocks = Vec::with_capacity(29);
    let mut cursor = 0u64;
    let mut forward = vec![0u64; count as usize];
    for id in BlockId::LAYOUT_ORDER {
        let members = match id {
            BlockId::RestS1p => x_prime.clone(),
            BlockId::RestS1pp => x_dprime.clone(),
            _ => rule_members(&block_rule(id).expect("structural block"), n, r),
        };
        let start = cursor + 1;
        for (i, m) in members.iter().enumerate() {
            forward[(colex_rank(m) - 1) as usize] = start + i as u64;
        }
        cursor += members.len() as u64;
        blocks.push(Block {
            id,
            start,
            end: cursor,
            members,
        });
    }
    debug_assert_eq!(cursor, count, "blocks must partition the label interval");

    let labeling = Labeling::from_forward(n, r, forward)?;
    Ok((labeling, BlockLayout { n, r, blocks }))
}

/// Split-star baseline: the floor half of the star at 1 takes the bottom
/// labels, the ceil half the top labels, everything else fills the middle in
/// colex order.
pub fn trivial_layout(n: u8, r: u8) -> Result<Labeling, LayoutError> {
    if r == 0 || r > n || n > 64 {
        return Err(LayoutError::BadParameters { n, r });
    }
    let count = binom_u64(n as u64, r as u64);
    if count > VERTEX_BUDGET {
        return Err(LayoutError::TooLarge {
            n,
            r,
            count,
            budget: VERTEX_BUDGET,
        });
    }
    let mut forward = vec![0u64; count as usize];
    let star_size = binom_u64(n as u64 - 1, r as u64 - 1);
    let h = star_size / 2;
    let mut star_seen = 0u64;
    let mut middle = h;
    for rank in 1..=count {
        let s = colex_unrank(rank, n, r).expect("rank in range");
        let label = if s.contains(1) {
            star_seen += 1;
            if star_seen <= h {
                star_seen
            } else {
                count - star_size + star_seen
            }
        } else {
            middle += 1;
            middle
        };
        forward[(rank - 1) as usize] = label;
    }
    Labeling::from_forward(n, r, forward)
}

/// Reverse breadth-first baseline: level-synchronous BFS from the colex-least
/// unvisited vertex (repeating per component), levels ordered by colex, and
/// the whole discovery order reversed.
pub fn bfs_layout(n: u8, r: u8) -> Result<Labeling, LayoutError> {
    if r == 0 || r > n || n > 64 {
        return Err(LayoutError::BadParameters { n, r });
    }
    let count = binom_u64(n as u64, r as u64);
    if count > VERTEX_BUDGET {
        return Err(LayoutError::TooLarge {
            n,
            r,
            count,
            budget: VERTEX_BUDGET,
        });
    }
    let masks: Vec<u64> = (1..=count)
        .map(|rank| colex_unrank(rank, n, r).expect("rank in range").mask())
        .collect();
    let total = count as usize;
    let mut visited = vec![false; total];
    let mut order: Vec<usize> = Vec::with_capacity(total);
    for root in 0..total {
        if visited[root] {
            continue;
        }
        visited[root] = true;
        order.push(root);
        let mut level = vec![root];
        while !level.is_empty() {
            let mut next = Vec::new();
            for v in 0..total {
                if visited[v] {
                    continue;
                }
                if level.iter().any(|&u| masks[u] & masks[v] == 0) {
                    visited[v] = true;
                    next.push(v);
                }
            }
            order.extend(&next);
            level = next;
        }
    }
    order.reverse();
    let mut forward = vec![0u64; total];
    for (i, &rank0) in order.iter().enumerate() {
        forward[rank0] = i as u64 + 1;
    }
    Labeling::from_forward(n, r, forward)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NotInjective { label: u64 },
    LabelOutOfRange { label: u64 },
    MissingLabel { label: u64 },
    BlocksNotConsecutive { block: BlockId, expected_start: u64, got: u64 },
    IntervalLengthMismatch { block: BlockId, interval: u64, members: u64 },
    MemberOutsideInterval { block: BlockId, member: RSubset, label: u64 },
    ForeignMember { block: BlockId, member: RSubset },
    HalvingBroken { floor_got: u64, ceil_got: u64, star: u64 },
    PoolSplitOrderBroken,
    PartitionIncomplete { covered: u64, expected: u64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotInjective { label } => write!(f, "not injective at label {label}"),
            Violation::LabelOutOfRange { label } => write!(f, "label {label} out of range"),
            Violation::MissingLabel { label } => write!(f, "label {label} never assigned"),
            Violation::BlocksNotConsecutive {
                block,
                expected_start,
                got,
            } => write!(
                f,
                "block {block} starts at {got}, expected {expected_start}"
            ),
            Violation::IntervalLengthMismatch {
                block,
                interval,
                members,
            } => write!(
                f,
                "block {block} interval length {interval} != member count {members}"
            ),
            Violation::MemberOutsideInterval {
                block,
                member,
                label,
            } => write!(
                f,
                "member {member} of block {block} labeled {label}, outside block interval"
            ),
            Violation::ForeignMember { block, member } => {
                write!(f, "{member} does not belong to block {block}")
            }
            Violation::HalvingBroken {
                floor_got,
                ceil_got,
                star,
            } => write!(
                f,
                "star halves sized {floor_got}/{ceil_got}, expected {}/{}",
                star / 2,
                star - star / 2
            ),
            Violation::PoolSplitOrderBroken => {
                write!(f, "floor-half pool members must colex-precede ceil-half pool members")
            }
            Violation::PartitionIncomplete { covered, expected } => {
                write!(f, "blocks cover {covered} labels, expected {expected}")
            }
        }
    }
}

fn check_bijection(count: u64, forward: &[u64]) -> Vec<Violation> {
    let mut violations = Vec::new();
    if forward.len() as u64 != count {
        violations.push(Violation::PartitionIncomplete {
            covered: forward.len() as u64,
            expected: count,
        });
        return violations;
    }
    let mut seen = vec![false; count as usize];
    for &label in forward {
        if label < 1 || label > count {
            violations.push(Violation::LabelOutOfRange { label });
            continue;
        }
        if seen[(label - 1) as usize] {
            violations.push(Violation::NotInjective { label });
        }
        seen[(label - 1) as usize] = true;
    }
    for (i, &s) in seen.iter().enumerate() {
        if !s {
            violations.push(Violation::MissingLabel {
                label: i as u64 + 1,
            });
        }
    }
    violations
}

/// Validates a labeling as a raw rank-to-label map, optionally against a
/// block layout. Returns all violations found (empty means valid).
pub fn validate_forward(n: u8, r: u8, forward: &[u64], bl: Option<&BlockLayout>) -> Vec<Violation> {
    let count = binom_u64(n as u64, r as u64);
    let mut violations = check_bijection(count, forward);
    let Some(bl) = bl else {
        return violations;
    };

    let mut expected_start = 1u64;
    let mut covered = 0u64;
    for block in bl.blocks() {
        if block.start != expected_start {
            violations.push(Violation::BlocksNotConsecutive {
                block: block.id,
                expected_start,
                got: block.start,
            });
        }
        let interval = block.end + 1 - block.start;
        if interval != block.len() {
            violations.push(Violation::IntervalLengthMismatch {
                block: block.id,
                interval,
                members: block.len(),
            });
        }
        covered += block.len();
        expected_start = block.end + 1;

        for m in &block.members {
            let rank = colex_rank(m);
            if rank < 1 || rank > count {
                violations.push(Violation::ForeignMember {
                    block: block.id,
                    member: m.clone(),
                });
                continue;
            }
            let label = forward[(rank - 1) as usize];
            if label < block.start || label > block.end {
                violations.push(Violation::MemberOutsideInterval {
                    block: block.id,
                    member: m.clone(),
                    label,
                });
            }
            let belongs = match block.id {
                BlockId::RestS1p | BlockId::RestS1pp => {
                    m.check_ambient(n, r).is_ok() && in_star_pool(m)
                }
                id => rule_contains(&block_rule(id).expect("structural block"), m, n, r),
            };
            if !belongs {
                violations.push(Violation::ForeignMember {
                    block: block.id,
                    member: m.clone(),
                });
            }
        }
    }
    if covered != count {
        violations.push(Violation::PartitionIncomplete {
            covered,
            expected: count,
        });
    }

    let star = binom_u64(n as u64 - 1, r as u64 - 1);
    let floor_got = bl.s1_prime_size();
    let ceil_got = bl.s1_dprime_size();
    if floor_got != star / 2 || ceil_got != star - star / 2 {
        violations.push(Violation::HalvingBroken {
            floor_got,
            ceil_got,
            star,
        });
    }
    let xp = &bl.block(BlockId::RestS1p).members;
    let xpp = &bl.block(BlockId::RestS1pp).members;
    if let (Some(last), Some(first)) = (xp.last(), xpp.first()) {
        if last >= first {
            violations.push(Violation::PoolSplitOrderBroken);
        }
    }
    violations
}

/// Validates a labeling, optionally against its block layout.
pub fn validate(l: &Labeling, bl: Option<&BlockLayout>) -> Vec<Violation> {
    validate_forward(l.n(), l.r(), l.forward(), bl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::binom;

    #[test]
    fn feasibility_examples() {
        assert!(feasibility(10, 3).is_ok());
        assert!(feasibility(12, 3).is_ok());
        assert!(feasibility(12, 4).is_ok());
        assert!(matches!(
            feasibility(9, 3),
            Err(Infeasibility::GroundSetTooSmall { n: 9 })
        ));
        assert!(matches!(
            feasibility(10, 2),
            Err(Infeasibility::RTooSmall { r: 2 })
        ));
        assert!(matches!(
            feasibility(10, 5),
            Err(Infeasibility::FloorHalfDeficit { .. })
        ));
        // message for the missing-element case names element 10
        let msg = feasibility(9, 3).unwrap_err().to_string();
        assert!(msg.contains("10"), "{msg}");
    }

    #[test]
    fn split_sizes_12_3() {
        let sz = split_sizes(12, 3);
        assert_eq!(sz.s1, 55);
        assert_eq!(sz.s1_floor, 27);
        assert_eq!(sz.s1_ceil, 28);
        assert_eq!(sz.x_prime, 8);
        assert_eq!(sz.x_dprime, 9);
        assert_eq!(sz.s2, 45);
        assert_eq!(sz.s3, 36);
    }

    #[test]
    fn paper_layout_12_3_block_accounting() {
        let (l, bl) = paper_layout(12, 3).unwrap();
        assert_eq!(l.vertex_count(), 220);
        assert_eq!(bl.block(BlockId::RestS1p).len(), 8);
        assert_eq!(bl.block(BlockId::RestS1pp).len(), 9);
        assert_eq!(bl.block(BlockId::R).len(), 84);
        assert_eq!(bl.s1_prime_size(), 27);
        assert_eq!(bl.s1_dprime_size(), 28);
        assert_eq!(bl.s3_size(), 36);
        assert_eq!(bl.s2_size(), 45);
        // R spans the wraparound; it must straddle the midpoint.
        let r = bl.block(BlockId::R);
        assert_eq!((r.start, r.end), (64, 147));
        assert!(r.start <= 110 && 110 <= r.end);
        assert!(validate(&l, Some(&bl)).is_empty());
    }

    #[test]
    fn paper_layout_block_size_formulas() {
        for (n, r) in [(12u8, 3u8), (13, 3), (12, 4), (14, 4)] {
            let (_, bl) = paper_layout(n, r).unwrap();
            let (nn, rr) = (n as u64, r as u64);
            let expect = [
                (BlockId::S12, binom(nn - 2, rr - 2)),
                (BlockId::Rest15, binom(nn - 5, rr - 2) - binom(nn - 6, rr - 3) - binom(nn - 7, rr - 3)),
                (BlockId::S189, binom(nn - 9, rr - 3)),
                (BlockId::S18_10, binom(nn - 10, rr - 3)),
                (BlockId::S13, binom(nn - 3, rr - 2)),
                (BlockId::S146, binom(nn - 6, rr - 3)),
                (BlockId::R, binom(nn - 3, rr)),
                (BlockId::Rest34, binom(nn - 4, rr - 2) - binom(nn - 6, rr - 3) - binom(nn - 7, rr - 3)),
                (BlockId::RestS2, binom(nn - 2, rr - 1) - binom(nn - 3, rr - 2) - binom(nn - 5, rr - 2)),
                (BlockId::Rest25, binom(nn - 5, rr - 2) - binom(nn - 9, rr - 3) - binom(nn - 8, rr - 3)),
            ];
            for (id, size) in expect {
                assert_eq!(bl.block(id).len() as u128, size, "block {id} at ({n},{r})");
            }
            // block members also match an independent enumeration by membership rule
            for block in bl.blocks() {
                assert!(block.members.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    #[test]
    fn paper_layout_10_3_singleton_block() {
        let (l, bl) = paper_layout(10, 3).unwrap();
        let b = bl.block(BlockId::S18_10);
        assert_eq!(b.members, vec![RSubset::of(&[1, 8, 10])]);
        assert_eq!(b.start, b.end);
        assert!(validate(&l, Some(&bl)).is_empty());
    }

    #[test]
    fn paper_layout_validates_sweep() {
        for n in 10..=16u8 {
            let (l, bl) = paper_layout(n, 3).unwrap();
            assert!(validate(&l, Some(&bl)).is_empty(), "n={n}");
            let r = bl.block(BlockId::R);
            let mid = l.vertex_count() / 2;
            assert!(r.start <= mid && mid <= r.end, "R straddles midpoint, n={n}");
        }
    }

    #[test]
    fn validate_catches_duplicate_label() {
        let violations = validate_forward(4, 2, &[1, 2, 3, 5, 5, 6], None);
        assert!(violations.contains(&Violation::NotInjective { label: 5 }));
        assert!(violations.contains(&Violation::MissingLabel { label: 4 }));
    }

    #[test]
    fn validate_catches_cross_block_swap() {
        let (l, bl) = paper_layout(12, 3).unwrap();
        // Swap the labels of the first member of S12 and the member of S156.
        let a = colex_rank(&bl.block(BlockId::S12).members[0]);
        let b = colex_rank(&bl.block(BlockId::S156).members[0]);
        let mut forward = l.forward().to_vec();
        forward.swap((a - 1) as usize, (b - 1) as usize);
        let violations = validate_forward(12, 3, &forward, Some(&bl));
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::MemberOutsideInterval { .. })));
    }

    #[test]
    fn trivial_layout_shape() {
        let l = trivial_layout(5, 2).unwrap();
        assert_eq!(l.vertex_count(), 10);
        // 4 star members split 2/2: bottom two and top two labels contain 1.
        for label in [1u64, 2, 9, 10] {
            assert!(l.subset_of_label(label).contains(1), "label {label}");
        }
        for label in 3..=8u64 {
            assert!(!l.subset_of_label(label).contains(1), "label {label}");
        }
        assert!(validate(&l, None).is_empty());
    }

    #[test]
    fn bfs_layout_deterministic_and_valid() {
        let a = bfs_layout(8, 3).unwrap();
        let b = bfs_layout(8, 3).unwrap();
        assert_eq!(a, b);
        assert!(validate(&a, None).is_empty());
        let c = bfs_layout(4, 2).unwrap();
        assert!(validate(&c, None).is_empty());
    }

    #[test]
    fn file_roundtrip_identical() {
        let (l, _) = paper_layout(10, 3).unwrap();
        let mut buf = Vec::new();
        l.write_to(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("n=10 r=3 count=120\n"));
        assert!(text.is_ascii());
        let back = Labeling::read_from(&mut buf.as_slice()).unwrap();
        assert_eq!(back, l);
        let mut buf2 = Vec::new();
        back.write_to(&mut buf2).unwrap();
        assert_eq!(buf, buf2);
    }

    #[test]
    fn file_rejects_garbage() {
        let bad = "n=4 r=2 count=7\n";
        assert!(Labeling::read_from(&mut bad.as_bytes()).is_err());
        let bad = "n=4 r=2 count=6\n1,1 2\n";
        assert!(matches!(
            Labeling::read_from(&mut bad.as_bytes()),
            Err(LayoutError::NotBijective(_))
        ));
        let bad = "n=4 r=2 count=6\n1,2 1\n";
        assert!(matches!(
            Labeling::read_from(&mut bad.as_bytes()),
            Err(LayoutError::Parse { .. })
        ));
    }

    #[test]
    fn reversal_is_involutive() {
        let (l, _) = paper_layout(10, 3).unwrap();
        assert_eq!(l.reversed().reversed(), l);
    }
}
