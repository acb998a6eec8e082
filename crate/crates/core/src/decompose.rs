//! Demand-decomposable supergraphs: a spanning generalized cycle plus extra
//! demands that never cross between cycles of a maximal packing.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::graphs::{self, SimpleCycle};
use crate::model::{is_generalized_cycle, DemandEdge, DemandSupergraph, MessageId, ReceiverId, SupergraphCycle};
use crate::solvers::{self, SolverLimits};
use crate::transforms::{self, EulerianView};

pub const DEFAULT_SEARCH_BUDGET: u64 = 1_000_000;

/// A spanning generalized cycle of some supergraph together with a maximal
/// edge-disjoint packing of its cycles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub gc: DemandSupergraph,
    pub packing: Vec<SupergraphCycle>,
}

fn check_subgraph(g: &DemandSupergraph, gc: &DemandSupergraph) -> Result<()> {
    if g.receivers().ne(gc.receivers()) {
        return Err(Error::InvalidSubgraph("receivers differ".into()));
    }
    for r in g.receivers() {
        if g.side_info(r) != gc.side_info(r) {
            return Err(Error::InvalidSubgraph(format!("side information of receiver {r} differs")));
        }
    }
    if let Some(d) = gc.demands().iter().find(|d| !g.contains_demand(d)) {
        return Err(Error::InvalidSubgraph(format!("demand {d} is not in the supergraph")));
    }
    if let Some(v) = is_generalized_cycle(gc).violation {
        return Err(Error::InvalidSubgraph(format!("not a generalized cycle: {v}")));
    }
    Ok(())
}

fn check_packing(gc: &DemandSupergraph, packing: &[SupergraphCycle]) -> Result<()> {
    let mut used = BTreeSet::new();
    for c in packing {
        SupergraphCycle::new(gc, c.edges().to_vec()).map_err(|e| Error::InvalidPacking(e.to_string()))?;
        for e in c.edges() {
            if !used.insert(e) {
                return Err(Error::InvalidPacking(format!("edge {e} is in two cycles")));
            }
        }
    }
    let (hg, provenance) = gc.holder_graph();
    let maximal = hg.is_acyclic_where(|e| !used.contains(&provenance[e]), |_| true);
    if !maximal {
        return Err(Error::InvalidPacking("a cycle remains outside the packing".into()));
    }
    Ok(())
}

/// Checks that every edge of `g` outside the packed cycles starts at a
/// message of some packed cycle and ends at a receiver of that same cycle.
///
/// `gc` must be a spanning generalized-cycle subgraph of `g` with the same
/// side information, and `packing` an edge-disjoint, maximal set of its cycles.
pub fn is_demand_decomposable(
    g: &DemandSupergraph,
    gc: &DemandSupergraph,
    packing: &[SupergraphCycle],
) -> Result<bool> {
    check_subgraph(g, gc)?;
    check_packing(gc, packing)?;
    let packed: BTreeSet<&DemandEdge> = packing.iter().flat_map(|c| c.edges()).collect();
    let home: BTreeMap<&MessageId, usize> = packing
        .iter()
        .enumerate()
        .flat_map(|(i, c)| c.messages().map(move |m| (m, i)))
        .collect();
    let visits: Vec<BTreeSet<&ReceiverId>> = packing.iter().map(|c| c.receivers().collect()).collect();
    Ok(g.demands().iter().filter(|d| !packed.contains(d)).all(|d| {
        home.get(&d.message)
            .is_some_and(|&i| visits[i].contains(&d.receiver))
    }))
}

struct Budget {
    used: u64,
    limit: u64,
}

impl Budget {
    fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.limit {
            Err(Error::SearchLimitExceeded(self.limit))
        } else {
            Ok(())
        }
    }
}

/// Searches for a spanning generalized cycle of `g` and a maximal packing
/// that makes `g` demand-decomposable.
///
/// Candidates are explored in canonical order (each message assigned to its
/// demanding receivers in label order). The first candidate admitting a
/// decomposable packing of maximum cardinality is returned; otherwise the
/// candidate with the largest decomposable packing found.
pub fn find_spanning_generalized_cycle(
    g: &DemandSupergraph,
    budget: u64,
    limits: SolverLimits,
) -> Result<Option<Decomposition>> {
    let messages: Vec<&MessageId> = g.messages().collect();
    let mut options: Vec<Vec<&DemandEdge>> = vec![Vec::new(); messages.len()];
    for d in g.demands() {
        let i = messages.binary_search(&&d.message).expect("validated");
        options[i].push(d);
    }
    if options.iter().any(Vec::is_empty) {
        return Ok(None);
    }
    let capacity: BTreeMap<&ReceiverId, usize> = g
        .receivers()
        .map(|r| (r, g.side_info(r).expect("listed").len()))
        .collect();
    let mut search = SpanningSearch {
        g,
        options,
        capacity,
        chosen: Vec::new(),
        budget: Budget { used: 0, limit: budget },
        limits,
        best: None,
    };
    search.assign(0)?;
    Ok(search.best.map(|(d, _)| d))
}

struct SpanningSearch<'a> {
    g: &'a DemandSupergraph,
    options: Vec<Vec<&'a DemandEdge>>,
    capacity: BTreeMap<&'a ReceiverId, usize>,
    chosen: Vec<&'a DemandEdge>,
    budget: Budget,
    limits: SolverLimits,
    best: Option<(Decomposition, bool)>,
}

impl<'a> SpanningSearch<'a> {
    /// Returns true once a maximum-cardinality decomposition is recorded.
    fn assign(&mut self, i: usize) -> Result<bool> {
        self.budget.tick()?;
        if i == self.options.len() {
            return self.evaluate();
        }
        for k in 0..self.options[i].len() {
            let d = self.options[i][k];
            let slot = self.capacity.get_mut(&d.receiver).expect("known receiver");
            if *slot == 0 {
                continue;
            }
            *slot -= 1;
            self.chosen.push(d);
            let done = self.assign(i + 1)?;
            self.chosen.pop();
            *self.capacity.get_mut(&d.receiver).expect("known receiver") += 1;
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }

    fn evaluate(&mut self) -> Result<bool> {
        // Every message is demanded once and no receiver exceeds s_j, and both
        // totals equal n, so in-degrees match; only connectivity can fail.
        let gc = self.g.with_demands(self.chosen.iter().map(|&d| d.clone()))?;
        if !is_generalized_cycle(&gc).holds() {
            return Ok(false);
        }
        let view = transforms::to_eulerian(&gc)?;
        let nu_e = solvers::max_edge_disjoint_packing(&view.graph, solvers::PackingMode::Exact, self.limits)?.len();
        let extra: Vec<&DemandEdge> = self.g.demands().iter().filter(|d| !gc.contains_demand(d)).collect();
        let Some(packing) = best_decomposition(&view, &extra, nu_e, self.limits, &mut self.budget)? else {
            return Ok(false);
        };
        let maximum = packing.len() == nu_e;
        let better = match &self.best {
            None => true,
            Some((b, _)) => packing.len() > b.packing.len(),
        };
        if better {
            self.best = Some((Decomposition { gc, packing }, maximum));
        }
        Ok(maximum)
    }
}

/// Largest cycle decomposition of the Eulerian view in which every extra
/// demand stays inside the cycle holding its message. Maximal packings of an
/// Eulerian graph are exactly its cycle decompositions.
fn best_decomposition(
    view: &EulerianView,
    extra: &[&DemandEdge],
    target: usize,
    limits: SolverLimits,
    budget: &mut Budget,
) -> Result<Option<Vec<SupergraphCycle>>> {
    let g = &view.graph;
    let cycles = graphs::enumerate_simple_cycles(g, limits.cycle_cap)?;
    let compatible: Vec<bool> = cycles
        .iter()
        .map(|c| {
            let visited: BTreeSet<&ReceiverId> = c.vertices(g).into_iter().map(|v| &view.labels[v]).collect();
            c.edges().iter().all(|&e| {
                let m = &view.provenance[e].message;
                extra
                    .iter()
                    .filter(|d| &d.message == m)
                    .all(|d| visited.contains(&d.receiver))
            })
        })
        .collect();
    let mut through: Vec<Vec<usize>> = vec![Vec::new(); g.edge_count()];
    for (i, c) in cycles.iter().enumerate() {
        if compatible[i] {
            for &e in c.edges() {
                through[e].push(i);
            }
        }
    }
    let mut cover = CoverSearch {
        cycles: &cycles,
        through,
        used: vec![false; g.edge_count()],
        current: Vec::new(),
        best: None,
        target,
    };
    cover.search(budget)?;
    Ok(cover.best.map(|idx| {
        idx.into_iter()
            .map(|i| view.to_supergraph_cycle(&cycles[i]))
            .collect()
    }))
}

struct CoverSearch<'a> {
    cycles: &'a [SimpleCycle],
    through: Vec<Vec<usize>>,
    used: Vec<bool>,
    current: Vec<usize>,
    best: Option<Vec<usize>>,
    target: usize,
}

impl CoverSearch<'_> {
    /// Exact cover of the edge set by compatible cycles, branching on the
    /// first uncovered edge. Returns true once `target` cycles are reached.
    fn search(&mut self, budget: &mut Budget) -> Result<bool> {
        budget.tick()?;
        let Some(e) = self.used.iter().position(|u| !u) else {
            if self.best.as_ref().is_none_or(|b| self.current.len() > b.len()) {
                self.best = Some(self.current.clone());
            }
            return Ok(self.current.len() == self.target);
        };
        for k in 0..self.through[e].len() {
            let c = self.through[e][k];
            let edges = self.cycles[c].edges();
            if edges.iter().any(|&x| self.used[x]) {
                continue;
            }
            for &x in edges {
                self.used[x] = true;
            }
            self.current.push(c);
            let done = self.search(budget)?;
            self.current.pop();
            for &x in edges {
                self.used[x] = false;
            }
            if done {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
