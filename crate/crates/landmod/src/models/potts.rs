//! `q`-state Potts model on the two-dimensional torus with single-site
//! recoloring proposals.
//!
//! On the torus `(Z/nZ)^2` with `n >= 3` (so the edge set is simple), the
//! energy counts monochromatic edges:
//!
//! ```text
//! H(sigma) = -J * #{(v, w) in E : sigma(v) = sigma(w)}
//! ```
//!
//! The `q` monochromatic configurations are the ground states. The proposal
//! recolors one site to one of the `q - 1` other colors at rate
//! `1 / (q |V|)` each; choosing the current color carries no edge in the
//! generator (its mass sits on the diagonal).
//!
//! Encoding: colors `0..q` as base-`q` digits, little-endian in the site
//! index `r * n + c`.

use alloc::string::String;
use alloc::vec::Vec;

use super::{display_name, ModelError, ModelSpec, StateId};

#[derive(Debug, Clone)]
pub struct PottsModel {
    side: u32,
    colors: u32,
    j: f64,
    /// `colors^v` for each site, for digit extraction.
    powers: Vec<u64>,
    edges: Vec<(u16, u16)>,
    name: String,
}

impl PottsModel {
    pub fn new(side: u32, colors: u32, j: f64) -> Result<Self, ModelError> {
        if side < 3 {
            return Err(ModelError::InvalidParameter("torus side must be at least 3"));
        }
        if colors < 2 {
            return Err(ModelError::InvalidParameter("need at least 2 colors"));
        }
        if !(j > 0.0) || !j.is_finite() {
            return Err(ModelError::InvalidParameter("coupling J must be positive"));
        }
        let sites = (side * side) as u64;
        let mut powers = Vec::with_capacity(sites as usize);
        let mut p: u64 = 1;
        for v in 0..sites {
            powers.push(p);
            if v + 1 < sites {
                p = p
                    .checked_mul(colors as u64)
                    .ok_or(ModelError::InvalidParameter("state space does not fit the packed encoding"))?;
            }
        }
        // Also require the total count to fit.
        p.checked_mul(colors as u64)
            .ok_or(ModelError::InvalidParameter("state space does not fit the packed encoding"))?;

        let n = side as u16;
        let mut edges = Vec::with_capacity(2 * (side * side) as usize);
        for r in 0..n {
            for c in 0..n {
                let v = r * n + c;
                let right = r * n + (c + 1) % n;
                let down = (r + 1) % n * n + c;
                edges.push((v, right));
                edges.push((v, down));
            }
        }
        let name = display_name("potts", format_args!("(n={side}, q={colors}, J={j})"));
        Ok(Self { side, colors, j, powers, edges, name })
    }

    pub fn side(&self) -> u32 {
        self.side
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }

    pub fn coupling(&self) -> f64 {
        self.j
    }

    pub fn site_count(&self) -> u32 {
        self.side * self.side
    }

    /// Gap constant of the recoloring proposal used in the spin-model
    /// bounds, `q / ((q - 1) |V|)`.
    pub fn proposal_gap(&self) -> f64 {
        let q = self.colors as f64;
        q / ((q - 1.0) * self.site_count() as f64)
    }

    #[inline]
    fn color_at(&self, state: u64, site: usize) -> u64 {
        state / self.powers[site] % self.colors as u64
    }
}

impl ModelSpec for PottsModel {
    fn name(&self) -> &str {
        &self.name
    }

    fn energy(&self, state: StateId) -> f64 {
        let s = state.0;
        let mut equal = 0u32;
        for &(v, w) in &self.edges {
            if self.color_at(s, v as usize) == self.color_at(s, w as usize) {
                equal += 1;
            }
        }
        -self.j * equal as f64
    }

    fn neighbors(&self, state: StateId) -> Vec<(StateId, f64)> {
        let sites = self.site_count() as usize;
        let q = self.colors as u64;
        let rate = 1.0 / (q as f64 * sites as f64);
        let mut out = Vec::with_capacity(sites * (q as usize - 1));
        for v in 0..sites {
            let current = self.color_at(state.0, v);
            let stripped = state.0 - current * self.powers[v];
            for color in 0..q {
                if color != current {
                    out.push((StateId(stripped + color * self.powers[v]), rate));
                }
            }
        }
        out
    }

    fn state_count(&self) -> Option<u64> {
        (self.colors as u64).checked_pow(self.site_count())
    }

    fn ground(&self) -> Option<(StateId, f64)> {
        // Monochrome color 0; all q monochromes share this energy.
        let edges = 2.0 * self.site_count() as f64;
        Some((StateId(0), -self.j * edges))
    }
}
