//! Explicit finite chains given by an energy table and a symmetric rate
//! list. Used for reference fixtures and file-defined models.

use alloc::string::String;
use alloc::vec::Vec;

use super::{ModelError, ModelSpec, StateId};
use crate::unionfind::UnionFind;

#[derive(Debug, Clone)]
pub struct TabularModel {
    name: String,
    energies: Vec<f64>,
    adjacency: Vec<Vec<(u32, f64)>>,
}

impl TabularModel {
    /// Build and validate a tabular model. Each `(i, j, rate)` entry is one
    /// undirected proposal edge; listing a pair twice is rejected, and so
    /// is listing `(i, j)` and `(j, i)` with different rates.
    pub fn new(
        name: impl Into<String>,
        energies: Vec<f64>,
        edges: &[(usize, usize, f64)],
    ) -> Result<Self, ModelError> {
        let n = energies.len();
        if n == 0 {
            return Err(ModelError::InvalidParameter("need at least one state"));
        }
        if energies.iter().any(|e| !e.is_finite()) {
            return Err(ModelError::InvalidParameter("energies must be finite"));
        }
        let mut adjacency: Vec<Vec<(u32, f64)>> = alloc::vec![Vec::new(); n];
        let mut uf = UnionFind::new(n);
        for &(i, j, rate) in edges {
            if i >= n || j >= n {
                return Err(ModelError::EdgeOutOfRange { i, j, states: n });
            }
            if i == j {
                return Err(ModelError::SelfLoop { i });
            }
            if !(rate > 0.0) || !rate.is_finite() {
                return Err(ModelError::NonpositiveRate { i, j });
            }
            if let Some(&(_, existing)) = adjacency[i].iter().find(|&&(k, _)| k as usize == j) {
                if existing == rate {
                    return Err(ModelError::DuplicateEdge { i, j });
                }
                return Err(ModelError::AsymmetricRate { i, j });
            }
            adjacency[i].push((j as u32, rate));
            adjacency[j].push((i as u32, rate));
            uf.union(i, j);
        }
        if uf.components() > 1 {
            return Err(ModelError::Disconnected { components: uf.components() });
        }
        for row in &mut adjacency {
            row.sort_unstable_by_key(|&(k, _)| k);
        }
        Ok(Self { name: name.into(), energies, adjacency })
    }

    /// Path graph with a uniform edge rate.
    pub fn path(name: impl Into<String>, energies: Vec<f64>, rate: f64) -> Result<Self, ModelError> {
        let edges: Vec<_> = (1..energies.len()).map(|i| (i - 1, i, rate)).collect();
        Self::new(name, energies, &edges)
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    /// Canonical undirected edge list, each pair once with `i < j`.
    pub fn edge_list(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::new();
        for (i, row) in self.adjacency.iter().enumerate() {
            for &(j, rate) in row {
                if i < j as usize {
                    out.push((i, j as usize, rate));
                }
            }
        }
        out
    }
}

impl ModelSpec for TabularModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn energy(&self, state: StateId) -> f64 {
        self.energies[state.index()]
    }

    fn neighbors(&self, state: StateId) -> Vec<(StateId, f64)> {
        self.adjacency[state.index()]
            .iter()
            .map(|&(j, rate)| (StateId(j as u64), rate))
            .collect()
    }

    fn state_count(&self) -> Option<u64> {
        Some(self.energies.len() as u64)
    }

    fn ground(&self) -> Option<(StateId, f64)> {
        // Lowest index among minima, for deterministic ties.
        let (idx, &e) = self
            .energies
            .iter()
            .enumerate()
            .min_by(|(i, a), (j, b)| a.partial_cmp(b).unwrap().then(i.cmp(j)))?;
        Some((StateId(idx as u64), e))
    }
}
