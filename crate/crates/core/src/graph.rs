//! The implicit Kneser graph K(n,r): vertices are the r-subsets of `[1, n]`,
//! edges join disjoint subsets. The graph is never materialized as an edge
//! list here; consumers work against `is_edge`/`neighbors`.

use std::collections::VecDeque;

use thiserror::Error;

use crate::comb::{binom_u64, colex_rank, colex_unrank, ColexCombinations};
use crate::subset::{RSubset, SubsetError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("invalid parameters: need 1 <= r <= n <= 64, got n={n} r={r}")]
    BadParameters { n: u8, r: u8 },
    #[error("vertex does not match ambient (n={n}, r={r}): {source}")]
    BadVertex {
        n: u8,
        r: u8,
        #[source]
        source: SubsetError,
    },
    #[error("diameter formula requires n > 2r, got n={n} r={r}")]
    FormulaOutOfScope { n: u8, r: u8 },
    #[error("graph is edgeless or disconnected; BFS eccentricity undefined")]
    Disconnected,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiameterMethod {
    Formula,
    Bfs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KneserGraph {
    n: u8,
    r: u8,
    vertex_count: u64,
    edgeless: bool,
}

impl KneserGraph {
    pub fn new(n: u8, r: u8) -> Result<Self, GraphError> {
        if r == 0 || r > n || n > 64 {
            return Err(GraphError::BadParameters { n, r });
        }
        Ok(KneserGraph {
            n,
            r,
            vertex_count: binom_u64(n as u64, r as u64),
            edgeless: n < 2 * r,
        })
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn r(&self) -> u8 {
        self.r
    }

    pub fn vertex_count(&self) -> u64 {
        self.vertex_count
    }

    /// True when n < 2r, so no two r-subsets can be disjoint.
    pub fn is_edgeless(&self) -> bool {
        self.edgeless
    }

    pub fn degree(&self) -> u64 {
        binom_u64(self.n as u64 - self.r as u64, self.r as u64)
    }

    fn check(&self, v: &RSubset) -> Result<(), GraphError> {
        v.check_ambient(self.n, self.r)
            .map_err(|source| GraphError::BadVertex {
                n: self.n,
                r: self.r,
                source,
            })
    }

    pub fn is_edge(&self, u: &RSubset, v: &RSubset) -> Result<bool, GraphError> {
        self.check(u)?;
        self.check(v)?;
        Ok(u.is_disjoint(v))
    }

    /// The r-subsets of `[1,n] \ v`, i.e. the neighbors of v.
    pub fn neighbors(&self, v: &RSubset) -> Result<Vec<RSubset>, GraphError> {
        self.check(v)?;
        let ground: Vec<u8> = (1..=self.n).filter(|&e| !v.contains(e)).collect();
        Ok(ColexCombinations::new(&ground, self.r as usize)
            .map(|elems| RSubset::new(elems).expect("complement subset invalid"))
            .collect())
    }

    pub fn diameter(&self, method: DiameterMethod) -> Result<u64, GraphError> {
        match method {
            DiameterMethod::Formula => {
                if self.n <= 2 * self.r {
                    return Err(GraphError::FormulaOutOfScope {
                        n: self.n,
                        r: self.r,
                    });
                }
                let r = self.r as u64;
                let gap = (self.n - 2 * self.r) as u64;
                Ok((r - 1).div_ceil(gap) + 1)
            }
            DiameterMethod::Bfs => self.bfs_eccentricity(),
        }
    }

    /// Eccentricity of the vertex {1..r} by explicit BFS; vertex transitivity
    /// makes one source sufficient for the diameter.
    fn bfs_eccentricity(&self) -> Result<u64, GraphError> {
        if self.edgeless && self.vertex_count > 1 {
            return Err(GraphError::Disconnected);
        }
        let count = self.vertex_count as usize;
        let mut dist = vec![u64::MAX; count];
        let root = colex_unrank(1, self.n, self.r).expect("root subset");
        dist[0] = 0;
        let mut queue = VecDeque::new();
        queue.push_back(root);
        let mut ecc = 0;
        while let Some(v) = queue.pop_front() {
            let dv = dist[(colex_rank(&v) - 1) as usize];
            for w in self.neighbors(&v).expect("internal vertex valid") {
                let wi = (colex_rank(&w) - 1) as usize;
                if dist[wi] == u64::MAX {
                    dist[wi] = dv + 1;
                    ecc = ecc.max(dv + 1);
                    queue.push_back(w);
                }
            }
        }
        if dist.iter().any(|&d| d == u64::MAX) {
            return Err(GraphError::Disconnected);
        }
        Ok(ecc)
    }
}
