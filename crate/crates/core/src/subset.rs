//! `RSubset`: an r-element subset of the ground set `[1, n]`, the vertex type
//! of the Kneser graph. Elements are kept strictly increasing; the canonical
//! order on subsets of equal size is colexicographic throughout the crate.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SubsetError {
    #[error("elements must be strictly increasing and at least 1, got {0:?}")]
    NotIncreasing(Vec<u8>),
    #[error("element {element} outside ground set [1, {n}]")]
    OutOfRange { element: u8, n: u8 },
    #[error("expected an {expected}-subset, got {got} elements")]
    WrongSize { expected: usize, got: usize },
}

/// An r-subset of `[1, n]`, stored as strictly increasing 1-based elements.
///
/// The ambient ground-set size `n` is not stored; operations that need it
/// take it as a parameter and validate with [`RSubset::check_ambient`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RSubset {
    elems: Vec<u8>,
}

impl RSubset {
    pub fn new(elems: Vec<u8>) -> Result<Self, SubsetError> {
        let increasing = elems.windows(2).all(|w| w[0] < w[1]);
        if !increasing || elems.first().is_some_and(|&e| e == 0) {
            return Err(SubsetError::NotIncreasing(elems));
        }
        Ok(RSubset { elems })
    }

    /// Builds from a slice, panicking on invalid input. Test/construction helper.
    pub fn of(elems: &[u8]) -> Self {
        Self::new(elems.to_vec()).expect("invalid subset literal")
    }

    pub fn from_mask(mut mask: u64) -> Self {
        let mut elems = Vec::with_capacity(mask.count_ones() as usize);
        while mask != 0 {
            let bit = mask.trailing_zeros() as u8;
            elems.push(bit + 1);
            mask &= mask - 1;
        }
        RSubset { elems }
    }

    pub fn elements(&self) -> &[u8] {
        &self.elems
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn contains(&self, e: u8) -> bool {
        self.elems.binary_search(&e).is_ok()
    }

    pub fn max_element(&self) -> Option<u8> {
        self.elems.last().copied()
    }

    /// Characteristic bitmask (element e maps to bit e-1). Requires elements <= 64.
    pub fn mask(&self) -> u64 {
        let mut m = 0u64;
        for &e in &self.elems {
            debug_assert!(e >= 1 && e <= 64);
            m |= 1u64 << (e - 1);
        }
        m
    }

    pub fn is_disjoint(&self, other: &RSubset) -> bool {
        self.mask() & other.mask() == 0
    }

    /// Intersection as an element list.
    pub fn intersection(&self, other: &RSubset) -> Vec<u8> {
        self.elems
            .iter()
            .copied()
            .filter(|&e| other.contains(e))
            .collect()
    }

    /// Validates size and range against an ambient `(n, r)`.
    pub fn check_ambient(&self, n: u8, r: u8) -> Result<(), SubsetError> {
        if self.elems.len() != r as usize {
            return Err(SubsetError::WrongSize {
                expected: r as usize,
                got: self.elems.len(),
            });
        }
        if let Some(&max) = self.elems.last() {
            if max > n {
                return Err(SubsetError::OutOfRange { element: max, n });
            }
        }
        Ok(())
    }
}

/// Colexicographic order: compare the largest differing element.
impl Ord for RSubset {
    fn cmp(&self, other: &RSubset) -> Ordering {
        let mut a = self.elems.iter().rev();
        let mut b = other.elems.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (Some(x), Some(y)) => match x.cmp(y) {
                    Ordering::Equal => continue,
                    ord => return ord,
                },
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
            }
        }
    }
}

impl PartialOrd for RSubset {
    fn partial_cmp(&self, other: &RSubset) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, e) in self.elems.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_zero() {
        assert!(RSubset::new(vec![2, 1]).is_err());
        assert!(RSubset::new(vec![1, 1]).is_err());
        assert!(RSubset::new(vec![0, 3]).is_err());
        assert!(RSubset::new(vec![1, 3, 7]).is_ok());
    }

    #[test]
    fn mask_roundtrip() {
        let s = RSubset::of(&[1, 5, 9]);
        assert_eq!(RSubset::from_mask(s.mask()), s);
        assert_eq!(s.mask(), 0b1_0001_0001);
    }

    #[test]
    fn colex_order_examples() {
        // {1,2,3} < {1,2,4} < {1,3,4} < {2,3,4} < {1,2,5}
        let a = RSubset::of(&[1, 2, 3]);
        let b = RSubset::of(&[1, 2, 4]);
        let c = RSubset::of(&[2, 3, 4]);
        let d = RSubset::of(&[1, 2, 5]);
        assert!(a < b && b < c && c < d);
    }

    #[test]
    fn disjointness() {
        assert!(RSubset::of(&[1, 2]).is_disjoint(&RSubset::of(&[3, 4])));
        assert!(!RSubset::of(&[1, 2]).is_disjoint(&RSubset::of(&[2, 3])));
    }

    #[test]
    fn ambient_check() {
        let s = RSubset::of(&[1, 5, 9]);
        assert!(s.check_ambient(9, 3).is_ok());
        assert!(matches!(
            s.check_ambient(8, 3),
            Err(SubsetError::OutOfRange { element: 9, n: 8 })
        ));
        assert!(matches!(
            s.check_ambient(9, 2),
            Err(SubsetError::WrongSize { .. })
        ));
    }
}
