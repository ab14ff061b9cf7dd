//! Ferromagnetic Ising models with single-spin-flip proposals.
//!
//! Configurations live on the vertices of either a `d`-dimensional
//! hypercube or a complete graph. The energy is
//!
//! ```text
//! H(sigma) = -(J/2) * sum_edges sigma(v) sigma(w) - (h/2) * sum_v sigma(v)
//! ```
//!
//! with each undirected edge counted once. With `J > 0` and `h > 0` the
//! all-plus configuration is the unique ground state; at `h = 0` it stays a
//! ground state, tied with its global flip.
//!
//! Encoding: bit `v` set means `sigma(v) = +1`. The proposal flips a single
//! spin at rate `1 / |V|`, so the total proposal exit rate is 1.

use alloc::string::String;
use alloc::vec::Vec;

use super::{display_name, ModelError, ModelSpec, StateId};

/// Underlying interaction graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IsingGraph {
    /// `d`-dimensional hypercube: `2^d` vertices, `d 2^(d-1)` edges.
    Hypercube { dim: u32 },
    /// Complete graph on `n` vertices.
    Complete { n: u32 },
}

#[derive(Debug, Clone)]
pub struct IsingModel {
    graph: IsingGraph,
    j: f64,
    h: f64,
    vertices: u32,
    edges: Vec<(u8, u8)>,
    name: String,
}

impl IsingModel {
    pub fn hypercube(dim: u32, j: f64, h: f64) -> Result<Self, ModelError> {
        if dim == 0 || dim > 5 {
            return Err(ModelError::InvalidParameter("hypercube dimension must be in 1..=5"));
        }
        let vertices = 1u32 << dim;
        let mut edges = Vec::new();
        for v in 0..vertices {
            for k in 0..dim {
                let w = v ^ (1 << k);
                if v < w {
                    edges.push((v as u8, w as u8));
                }
            }
        }
        Self::build(IsingGraph::Hypercube { dim }, vertices, edges, j, h)
    }

    pub fn complete(n: u32, j: f64, h: f64) -> Result<Self, ModelError> {
        if n < 2 || n > 20 {
            return Err(ModelError::InvalidParameter("complete-graph size must be in 2..=20"));
        }
        let mut edges = Vec::new();
        for v in 0..n {
            for w in (v + 1)..n {
                edges.push((v as u8, w as u8));
            }
        }
        Self::build(IsingGraph::Complete { n }, n, edges, j, h)
    }

    fn build(
        graph: IsingGraph,
        vertices: u32,
        edges: Vec<(u8, u8)>,
        j: f64,
        h: f64,
    ) -> Result<Self, ModelError> {
        if !(j > 0.0) || !j.is_finite() {
            return Err(ModelError::InvalidParameter("coupling J must be positive"));
        }
        if !(h >= 0.0) || !h.is_finite() {
            return Err(ModelError::InvalidParameter("field h must be non-negative"));
        }
        let name = match graph {
            IsingGraph::Hypercube { dim } => {
                display_name("ising-hypercube", format_args!("(d={dim}, J={j}, h={h})"))
            }
            IsingGraph::Complete { n } => {
                display_name("ising-complete", format_args!("(n={n}, J={j}, h={h})"))
            }
        };
        Ok(Self { graph, j, h, vertices, edges, name })
    }

    pub fn graph(&self) -> IsingGraph {
        self.graph
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertices
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn coupling(&self) -> f64 {
        self.j
    }

    pub fn field(&self) -> f64 {
        self.h
    }

    /// Spectral gap of the single-spin-flip proposal chain, `2 / |V|`.
    pub fn proposal_gap(&self) -> f64 {
        2.0 / self.vertices as f64
    }

    fn spin(state: u64, v: u8) -> i64 {
        if state >> v & 1 == 1 {
            1
        } else {
            -1
        }
    }
}

impl ModelSpec for IsingModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn energy(&self, state: StateId) -> f64 {
        let s = state.0;
        let mut pair = 0i64;
        for &(v, w) in &self.edges {
            pair += Self::spin(s, v) * Self::spin(s, w);
        }
        let field = 2 * (s.count_ones() as i64) - self.vertices as i64;
        -0.5 * self.j * pair as f64 - 0.5 * self.h * field as f64
    }

    fn neighbors(&self, state: StateId) -> Vec<(StateId, f64)> {
        let rate = 1.0 / self.vertices as f64;
        (0..self.vertices)
            .map(|v| (StateId(state.0 ^ (1u64 << v)), rate))
            .collect()
    }

    fn state_count(&self) -> Option<u64> {
        1u64.checked_shl(self.vertices)
    }

    fn ground(&self) -> Option<(StateId, f64)> {
        let all_plus = StateId((1u64 << self.vertices) - 1);
        Some((all_plus, self.energy(all_plus)))
    }
}
