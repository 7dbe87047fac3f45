//! Set-family predicates and oracles: common intersection, intersecting and
//! trivial families, cross-intersection with witnesses, matching extraction,
//! and an exhaustive maximum t-intersecting family search for small ground
//! sets.

use thiserror::Error;

use crate::comb::{binom_u64, colex_unrank};
use crate::subset::{RSubset, SubsetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error("family is empty")]
    Empty,
    #[error("duplicate member {0}")]
    Duplicate(RSubset),
    #[error("member invalid for ambient (n={n}, r={r}): {source}")]
    BadMember {
        n: u8,
        r: u8,
        #[source]
        source: SubsetError,
    },
    #[error("families live over different ground sets: n={0} vs n={1}")]
    AmbientMismatch(u8, u8),
    #[error("search budget exceeded: C({n},{r}) = {count} > {budget}")]
    BudgetExceeded { n: u8, r: u8, count: u64, budget: u64 },
}

/// A duplicate-free family of r-subsets over a common ground set `[1, n]`.
/// Members are kept in colex order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Family {
    n: u8,
    r: u8,
    members: Vec<RSubset>,
}

impl Family {
    pub fn new(n: u8, r: u8, mut members: Vec<RSubset>) -> Result<Self, FamilyError> {
        for m in &members {
            m.check_ambient(n, r)
                .map_err(|source| FamilyError::BadMember { n, r, source })?;
        }
        members.sort();
        if let Some(w) = members.windows(2).find(|w| w[0] == w[1]) {
            return Err(FamilyError::Duplicate(w[0].clone()));
        }
        Ok(Family { n, r, members })
    }

    /// The star of all r-subsets containing a fixed element.
    pub fn star(n: u8, r: u8, center: u8) -> Result<Self, FamilyError> {
        let count = binom_u64(n as u64, r as u64);
        let members = (1..=count)
            .map(|rank| colex_unrank(rank, n, r).expect("rank in range"))
            .filter(|s| s.contains(center))
            .collect();
        Family::new(n, r, members)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[RSubset] {
        &self.members
    }
}

/// The intersection of all members, as an increasing element list.
pub fn common_intersection(f: &Family) -> Result<Vec<u8>, FamilyError> {
    if f.is_empty() {
        return Err(FamilyError::Empty);
    }
    let mut mask = u64::MAX;
    for m in f.members() {
        mask &= m.mask();
        if mask == 0 {
            break;
        }
    }
    Ok(RSubset::from_mask(mask).elements().to_vec())
}

/// True when every two members share an element.
pub fn is_intersecting(f: &Family) -> Result<bool, FamilyError> {
    if f.is_empty() {
        return Err(FamilyError::Empty);
    }
    let masks: Vec<u64> = f.members().iter().map(RSubset::mask).collect();
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            if masks[i] & masks[j] == 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// True when all members share a common element (the family is a sub-star).
pub fn is_trivial(f: &Family) -> Result<bool, FamilyError> {
    Ok(!common_intersection(f)?.is_empty())
}

/// Result of a cross-intersection check between two families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossCheck {
    pub holds: bool,
    /// A disjoint pair (one member from each family) when the check fails.
    pub witness: Option<(RSubset, RSubset)>,
}

/// True iff every member of `a` meets every member of `b`. The two families
/// must share the ground set; their member sizes may differ.
pub fn cross_intersecting(a: &Family, b: &Family) -> Result<CrossCheck, FamilyError> {
    if a.n() != b.n() {
        return Err(FamilyError::AmbientMismatch(a.n(), b.n()));
    }
    let bm: Vec<u64> = b.members().iter().map(RSubset::mask).collect();
    for u in a.members() {
        let mu = u.mask();
        for (j, &mv) in bm.iter().enumerate() {
            if mu & mv == 0 {
                return Ok(CrossCheck {
                    holds: false,
                    witness: Some((u.clone(), b.members()[j].clone())),
                });
            }
        }
    }
    Ok(CrossCheck {
        holds: true,
        witness: None,
    })
}

/// Finds `size` pairwise disjoint members if any exist: greedy in colex order
/// first, then exhaustive backtracking. Returns `None` only when the
/// exhaustive search proves no such matching exists.
pub fn find_matching(f: &Family, size: usize) -> Option<Vec<RSubset>> {
    if size == 0 {
        return Some(Vec::new());
    }
    let masks: Vec<u64> = f.members().iter().map(RSubset::mask).collect();

    // Greedy pass.
    let mut chosen: Vec<usize> = Vec::new();
    let mut used = 0u64;
    for (i, &m) in masks.iter().enumerate() {
        if used & m == 0 {
            chosen.push(i);
            used |= m;
            if chosen.len() == size {
                return Some(chosen.iter().map(|&i| f.members()[i].clone()).collect());
            }
        }
    }

    // Exhaustive backtracking.
    fn dfs(masks: &[u64], start: usize, used: u64, chosen: &mut Vec<usize>, size: usize) -> bool {
        if chosen.len() == size {
            return true;
        }
        let need = size - chosen.len();
        for i in start..masks.len() {
            if masks.len() - i < need {
                return false;
            }
            if used & masks[i] == 0 {
                chosen.push(i);
                if dfs(masks, i + 1, used | masks[i], chosen, size) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    let mut chosen = Vec::new();
    if dfs(&masks, 0, 0, &mut chosen, size) {
        Some(chosen.iter().map(|&i| f.members()[i].clone()).collect())
    } else {
        None
    }
}

/// Number of members containing at least one element of `elems`.
pub fn count_meeting(f: &Family, elems: &[u8]) -> usize {
    let mut probe = 0u64;
    for &e in elems {
        probe |= 1u64 << (e - 1);
    }
    f.members().iter().filter(|m| m.mask() & probe != 0).count()
}

const MAX_T_BUDGET: u64 = 70;

/// Exact maximum size of a t-intersecting family of r-subsets of `[1, n]`,
/// by maximum clique search on the t-intersection compatibility graph.
/// Refuses instances with C(n,r) > 70 rather than degrade.
pub fn max_t_intersecting(n: u8, r: u8, t: u8) -> Result<u64, FamilyError> {
    let count = binom_u64(n as u64, r as u64);
    if count > MAX_T_BUDGET {
        return Err(FamilyError::BudgetExceeded {
            n,
            r,
            count,
            budget: MAX_T_BUDGET,
        });
    }
    let verts: Vec<u64> = (1..=count)
        .map(|rank| colex_unrank(rank, n, r).expect("rank in range").mask())
        .collect();
    let m = verts.len();
    let mut adj = vec![0u128; m];
    for i in 0..m {
        for j in i + 1..m {
            if (verts[i] & verts[j]).count_ones() >= t as u32 {
                adj[i] |= 1u128 << j;
                adj[j] |= 1u128 << i;
            }
        }
    }

    // Branch and bound max clique with greedy pivoting.
    fn expand(adj: &[u128], mut cand: u128, size: u64, best: &mut u64) {
        if size + cand.count_ones() as u64 <= *best {
            return;
        }
        if cand == 0 {
            *best = (*best).max(size);
            return;
        }
        // Pivot: candidate with most candidate-neighbors; branch only on
        // candidates not adjacent to it.
        let mut pivot = 0usize;
        let mut pivot_deg = -1i64;
        let mut c = cand;
        while c != 0 {
            let v = c.trailing_zeros() as usize;
            c &= c - 1;
            let deg = (adj[v] & cand).count_ones() as i64;
            if deg > pivot_deg {
                pivot_deg = deg;
                pivot = v;
            }
        }
        let mut branch = cand & !adj[pivot];
        while branch != 0 {
            let v = branch.trailing_zeros() as usize;
            branch &= branch - 1;
            cand &= !(1u128 << v);
            expand(adj, cand & adj[v], size + 1, best);
            if size + cand.count_ones() as u64 <= *best {
                return;
            }
        }
    }

    let full: u128 = if m == 128 { u128::MAX } else { (1u128 << m) - 1 };
    let mut best = 0u64;
    expand(&adj, full, 0, &mut best);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::comb::prefix_family;
    use proptest::prelude::*;
    use rand::seq::SliceRandom;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn prefix_as_family(prefix: &[u8], n: u8, r: u8) -> Family {
        Family::new(n, r, prefix_family(prefix, n, r).unwrap()).unwrap()
    }

    #[test]
    fn common_intersection_examples() {
        let s12 = prefix_as_family(&[1, 2], 8, 3);
        assert_eq!(common_intersection(&s12).unwrap(), vec![1, 2]);

        let disjoint = Family::new(
            6,
            3,
            vec![RSubset::of(&[1, 2, 3]), RSubset::of(&[4, 5, 6])],
        )
        .unwrap();
        assert_eq!(common_intersection(&disjoint).unwrap(), Vec::<u8>::new());

        let s1 = prefix_as_family(&[1], 8, 3);
        assert_eq!(common_intersection(&s1).unwrap(), vec![1]);

        let empty = Family::new(8, 3, vec![]).unwrap();
        assert!(matches!(common_intersection(&empty), Err(FamilyError::Empty)));
    }

    #[test]
    fn intersecting_and_trivial() {
        let star = Family::star(7, 3, 1).unwrap();
        assert_eq!(star.len(), 15);
        assert!(is_intersecting(&star).unwrap());
        assert!(is_trivial(&star).unwrap());

        let triangle = Family::new(
            3,
            2,
            vec![
                RSubset::of(&[1, 2]),
                RSubset::of(&[1, 3]),
                RSubset::of(&[2, 3]),
            ],
        )
        .unwrap();
        assert!(is_intersecting(&triangle).unwrap());
        assert!(!is_trivial(&triangle).unwrap());

        let split = Family::new(4, 2, vec![RSubset::of(&[1, 2]), RSubset::of(&[3, 4])]).unwrap();
        assert!(!is_intersecting(&split).unwrap());
    }

    #[test]
    fn cross_intersection_examples() {
        let a = Family::star(9, 3, 1).unwrap();
        let res = cross_intersecting(&a, &a).unwrap();
        assert!(res.holds);
        assert!(res.witness.is_none());

        let x = Family::new(5, 2, vec![RSubset::of(&[1, 2])]).unwrap();
        let y = Family::new(5, 2, vec![RSubset::of(&[3, 4])]).unwrap();
        let res = cross_intersecting(&x, &y).unwrap();
        assert!(!res.holds);
        assert_eq!(
            res.witness,
            Some((RSubset::of(&[1, 2]), RSubset::of(&[3, 4])))
        );

        let z = Family::new(6, 2, vec![RSubset::of(&[1, 2])]).unwrap();
        assert!(matches!(
            cross_intersecting(&x, &z),
            Err(FamilyError::AmbientMismatch(5, 6))
        ));
    }

    #[test]
    fn cross_intersection_mixed_sizes() {
        // r may differ between the two families.
        let pairs = Family::new(6, 2, vec![RSubset::of(&[1, 2]), RSubset::of(&[1, 3])]).unwrap();
        let triples = Family::star(6, 3, 1).unwrap();
        assert!(cross_intersecting(&pairs, &triples).unwrap().holds);
    }

    #[test]
    fn matching_examples() {
        let all_pairs = Family::new(
            6,
            2,
            (1..=binom_u64(6, 2))
                .map(|rank| colex_unrank(rank, 6, 2).unwrap())
                .collect(),
        )
        .unwrap();
        let m = find_matching(&all_pairs, 3).unwrap();
        assert_eq!(m.len(), 3);
        for i in 0..3 {
            for j in i + 1..3 {
                assert!(m[i].is_disjoint(&m[j]));
            }
        }
        assert!(m.iter().all(|s| all_pairs.members().contains(s)));

        let star = Family::star(8, 3, 1).unwrap();
        assert!(find_matching(&star, 2).is_none());
        assert!(find_matching(&star, 1).is_some());
        assert_eq!(find_matching(&star, 0), Some(vec![]));
    }

    /// Independent oracle: try every combination of `size` members.
    fn matching_exists_exhaustive(f: &Family, size: usize) -> bool {
        fn combos(masks: &[u64], start: usize, used: u64, left: usize) -> bool {
            if left == 0 {
                return true;
            }
            for i in start..masks.len() {
                if used & masks[i] == 0 && combos(masks, i + 1, used | masks[i], left - 1) {
                    return true;
                }
            }
            false
        }
        let masks: Vec<u64> = f.members().iter().map(RSubset::mask).collect();
        combos(&masks, 0, 0, size)
    }

    #[test]
    fn matching_absence_vs_exhaustive() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0001);
        for _ in 0..200 {
            let n = rng.gen_range(4..=8);
            let r = rng.gen_range(2..=3u8);
            let count = binom_u64(n as u64, r as u64);
            let take = rng.gen_range(1..=count.min(20)) as usize;
            let mut ranks: Vec<u64> = (1..=count).collect();
            ranks.shuffle(&mut rng);
            let members: Vec<RSubset> = ranks[..take]
                .iter()
                .map(|&rank| colex_unrank(rank, n, r).unwrap())
                .collect();
            let f = Family::new(n, r, members).unwrap();
            for size in 1..=3usize {
                assert_eq!(
                    find_matching(&f, size).is_some(),
                    matching_exists_exhaustive(&f, size),
                    "n={n} r={r} size={size}"
                );
            }
        }
    }

    #[test]
    fn matching_from_family_size_property() {
        // |F| > p * C(n-1, r-1) forces a (p+1)-matching, sampled over ground
        // sets large enough for p+1 disjoint r-sets to fit.
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0002);
        for _ in 0..300 {
            let r = rng.gen_range(2..=3u8);
            let p = rng.gen_range(1..=2u64);
            let lo = ((p + 1) * r as u64) as u8;
            if lo > 9 {
                continue;
            }
            let n = rng.gen_range(lo..=9);
            let count = binom_u64(n as u64, r as u64);
            let threshold = p * binom_u64(n as u64 - 1, r as u64 - 1);
            if threshold + 1 > count {
                continue;
            }
            let take = rng.gen_range(threshold + 1..=count) as usize;
            let mut ranks: Vec<u64> = (1..=count).collect();
            ranks.shuffle(&mut rng);
            let members: Vec<RSubset> = ranks[..take]
                .iter()
                .map(|&rank| colex_unrank(rank, n, r).unwrap())
                .collect();
            let f = Family::new(n, r, members).unwrap();
            let m = find_matching(&f, (p + 1) as usize);
            assert!(m.is_some(), "n={n} r={r} p={p} |F|={take}");
        }
    }

    #[test]
    fn count_meeting_examples() {
        let s1 = Family::star(9, 3, 1).unwrap();
        assert_eq!(s1.len(), 28);
        assert_eq!(count_meeting(&s1, &[1]), 28);
        assert_eq!(count_meeting(&s1, &[]), 0);

        let f = Family::new(
            5,
            2,
            vec![
                RSubset::of(&[1, 2]),
                RSubset::of(&[2, 3]),
                RSubset::of(&[4, 5]),
            ],
        )
        .unwrap();
        assert_eq!(count_meeting(&f, &[2, 4]), 3);
    }

    #[test]
    fn max_t_intersecting_examples() {
        assert_eq!(max_t_intersecting(8, 3, 2).unwrap(), 6);
        assert_eq!(max_t_intersecting(7, 3, 1).unwrap(), 15);
        assert_eq!(max_t_intersecting(6, 3, 3).unwrap(), 1);
        assert!(matches!(
            max_t_intersecting(12, 4, 2),
            Err(FamilyError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn max_one_intersecting_matches_star_bound() {
        // Largest intersecting family of r-subsets has star size for n >= 2r.
        for (n, r) in [(4u8, 2u8), (5, 2), (6, 2), (7, 2), (8, 2), (6, 3), (8, 4)] {
            assert_eq!(
                max_t_intersecting(n, r, 1).unwrap(),
                binom_u64(n as u64 - 1, r as u64 - 1),
                "({n},{r})"
            );
        }
    }

    proptest! {
        #[test]
        fn cross_intersecting_symmetric(seed in 0u64..5_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(4..=8);
            let r = rng.gen_range(2..=3u8);
            let count = binom_u64(n as u64, r as u64);
            let pick = |rng: &mut ChaCha8Rng| {
                let take = rng.gen_range(1..=count.min(10)) as usize;
                let mut ranks: Vec<u64> = (1..=count).collect();
                ranks.shuffle(rng);
                Family::new(n, r, ranks[..take].iter()
                    .map(|&rank| colex_unrank(rank, n, r).unwrap()).collect()).unwrap()
            };
            let a = pick(&mut rng);
            let b = pick(&mut rng);
            prop_assert_eq!(
                cross_intersecting(&a, &b).unwrap().holds,
                cross_intersecting(&b, &a).unwrap().holds
            );
        }

        #[test]
        fn trivial_implies_intersecting(seed in 0u64..5_000) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(4..=8);
            let r = rng.gen_range(2..=3u8);
            let count = binom_u64(n as u64, r as u64);
            let take = rng.gen_range(1..=count.min(12)) as usize;
            let mut ranks: Vec<u64> = (1..=count).collect();
            ranks.shuffle(&mut rng);
            let f = Family::new(n, r, ranks[..take].iter()
                .map(|&rank| colex_unrank(rank, n, r).unwrap()).collect()).unwrap();
            if is_trivial(&f).unwrap() {
                prop_assert!(is_intersecting(&f).unwrap());
            }
        }
    }
}
