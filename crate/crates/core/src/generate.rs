//! Seeded random generalized cycles and demand-decomposable extensions.
//!
//! Superposing directed simple cycles gives a balanced multigraph; once it is
//! strongly connected it is Eulerian and converts to a generalized cycle. The
//! superposed cycles are edge-disjoint and cover every edge, so they form a
//! maximal packing that can host extra intra-cycle demands.

use rand::seq::index;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graphs::{self, DirectedMultigraph};
use crate::model::{DemandEdge, DemandSupergraph, SupergraphCycle};
use crate::solvers::{self, SolverLimits};
use crate::transforms;

pub const MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GeneratorParams {
    /// Number of receivers, m >= 2.
    pub receivers: usize,
    /// Number of superposed cycles, r >= 1.
    pub cycles: usize,
    /// Extra demands placed inside single cycles.
    pub extra_demands: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generated {
    /// The instance: `gc` plus the extra demands.
    pub problem: DemandSupergraph,
    pub gc: DemandSupergraph,
    /// The superposed cycles, a maximal packing of `gc`.
    pub packing: Vec<SupergraphCycle>,
}

/// Random Eulerian multigraph made of `r` simple cycles on `m` vertices,
/// returned with the cycles as vertex sequences.
fn superpose(rng: &mut ChaCha8Rng, m: usize, r: usize) -> Result<(DirectedMultigraph, Vec<Vec<usize>>)> {
    let mut vertices: Vec<usize> = (0..m).collect();
    for _ in 0..MAX_ATTEMPTS {
        let mut g = DirectedMultigraph::new(m);
        let mut cycles = Vec::with_capacity(r);
        for _ in 0..r {
            let len = rng.gen_range(2..=m);
            vertices.shuffle(rng);
            let cycle = vertices[..len].to_vec();
            for k in 0..len {
                g.add_edge(cycle[k], cycle[(k + 1) % len])?;
            }
            cycles.push(cycle);
        }
        if graphs::is_eulerian(&g).unwrap_or(false) {
            return Ok((g, cycles));
        }
    }
    Err(Error::RetryLimitExceeded(MAX_ATTEMPTS))
}

pub fn generate(params: &GeneratorParams) -> Result<Generated> {
    let GeneratorParams {
        receivers: m,
        cycles: r,
        extra_demands: k,
        seed,
    } = *params;
    if m < 2 || r < 1 {
        return Err(Error::InvalidArgument("need at least 2 receivers and 1 cycle".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_ATTEMPTS {
        let (g, cycles) = superpose(&mut rng, m, r)?;
        let gc = transforms::from_eulerian(&g)?;
        // Edges were added cycle by cycle; edge e carries message x{e+1}
        // demanded by receiver head+1, as in from_eulerian.
        let mut packing = Vec::with_capacity(r);
        let mut start = 0;
        for c in &cycles {
            let edges: Vec<DemandEdge> = (start..start + c.len())
                .map(|e| DemandEdge::new(format!("x{}", e + 1), (g.head(e) + 1).to_string()))
                .collect();
            packing.push(SupergraphCycle::new(&gc, edges)?);
            start += c.len();
        }

        let mut candidates = Vec::new();
        for c in &packing {
            for msg in c.messages() {
                for rec in c.receivers() {
                    let d = DemandEdge::new(msg.clone(), rec.clone());
                    if gc.holder(msg) != Some(rec) && !gc.contains_demand(&d) {
                        candidates.push(d);
                    }
                }
            }
        }
        if candidates.len() < k {
            continue;
        }
        let mut picked: Vec<usize> = index::sample(&mut rng, candidates.len(), k).into_vec();
        picked.sort_unstable();
        let problem = gc.with_demands(
            gc.demands()
                .iter()
                .cloned()
                .chain(picked.into_iter().map(|i| candidates[i].clone())),
        )?;
        return Ok(Generated { problem, gc, packing });
    }
    Err(Error::RetryLimitExceeded(MAX_ATTEMPTS))
}

/// Samples random Eulerian graphs looking for one with ν_e < τ_e.
pub fn find_gap_instance(
    m: usize,
    r: usize,
    attempts: usize,
    seed: u64,
    limits: SolverLimits,
) -> Result<Option<DirectedMultigraph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..attempts {
        let (g, _) = superpose(&mut rng, m, r)?;
        let (packing, fes) = solvers::edge_nu_tau(&g, limits)?;
        if packing.len() < fes.len() {
            return Ok(Some(g));
        }
    }
    Ok(None)
}
