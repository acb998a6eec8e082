//! Exact and greedy cycle packing and feedback set solvers.
//!
//! All exact solvers enumerate cycles first and then run a branch-and-bound
//! over the resulting set system: maximum disjoint packing for ν and minimum
//! hitting set for τ. Both are exponential; every search carries a node budget
//! and exceeding it is an error.

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};
use crate::graphs::{self, DirectedMultigraph, SimpleCycle, DEFAULT_CYCLE_CAP};
use crate::model::{DemandEdge, DemandSupergraph, SupergraphCycle};
use crate::transforms;

pub const DEFAULT_NODE_BUDGET: u64 = 50_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolverLimits {
    pub cycle_cap: usize,
    pub node_budget: u64,
}

impl Default for SolverLimits {
    fn default() -> Self {
        SolverLimits {
            cycle_cap: DEFAULT_CYCLE_CAP,
            node_budget: DEFAULT_NODE_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PackingMode {
    #[default]
    Exact,
    /// Shortest cycles first, ties by edge index; maximal but not always maximum.
    Greedy,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CyclePacking {
    pub cycles: Vec<SimpleCycle>,
}

impl CyclePacking {
    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// Number of edges used by the packing.
    pub fn edge_total(&self) -> usize {
        self.cycles.iter().map(SimpleCycle::len).sum()
    }

    pub fn is_edge_disjoint(&self) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.cycles.iter().flat_map(|c| c.edges()).all(|&e| seen.insert(e))
    }

    pub fn is_vertex_disjoint(&self, g: &DirectedMultigraph) -> bool {
        let mut seen = std::collections::BTreeSet::new();
        self.cycles
            .iter()
            .flat_map(|c| c.vertices(g))
            .all(|v| seen.insert(v))
    }

    /// True if every edge of `g` lies on one of the cycles.
    pub fn covers(&self, g: &DirectedMultigraph) -> bool {
        let mut hit = vec![false; g.edge_count()];
        for &e in self.cycles.iter().flat_map(|c| c.edges()) {
            hit[e] = true;
        }
        hit.into_iter().all(|h| h)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeedbackEdgeSet {
    pub edges: Vec<usize>,
}

impl FeedbackEdgeSet {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn is_feedback_for(&self, g: &DirectedMultigraph) -> bool {
        let mut removed = vec![false; g.edge_count()];
        for &e in &self.edges {
            removed[e] = true;
        }
        g.is_acyclic_where(|e| !removed[e], |_| true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeedbackVertexSet {
    pub vertices: Vec<usize>,
}

impl FeedbackVertexSet {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn is_feedback_for(&self, g: &DirectedMultigraph) -> bool {
        let mut removed = vec![false; g.vertex_count()];
        for &v in &self.vertices {
            removed[v] = true;
        }
        g.is_acyclic_where(|_| true, |v| !removed[v])
    }
}

fn to_bitsets<'a, I>(universe: usize, sets: I) -> Vec<FixedBitSet>
where
    I: IntoIterator<Item = &'a [usize]>,
{
    sets.into_iter()
        .map(|s| {
            let mut b = FixedBitSet::with_capacity(universe);
            for &x in s {
                b.insert(x);
            }
            b
        })
        .collect()
}

/// Maximum number of pairwise disjoint sets. Returns indices into `sets`.
fn max_disjoint_sets(sets: &[FixedBitSet], budget: u64) -> Result<Vec<usize>> {
    let mut order: Vec<usize> = (0..sets.len()).collect();
    order.sort_by_key(|&i| (sets[i].count_ones(..), i));
    let mut search = PackingSearch {
        sets,
        best: Vec::new(),
        chosen: Vec::new(),
        nodes: 0,
        budget,
    };
    search.run(&order)?;
    Ok(search.best)
}

struct PackingSearch<'a> {
    sets: &'a [FixedBitSet],
    best: Vec<usize>,
    chosen: Vec<usize>,
    nodes: u64,
    budget: u64,
}

impl PackingSearch<'_> {
    fn run(&mut self, avail: &[usize]) -> Result<()> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SolverBudgetExceeded(self.budget));
        }
        if self.chosen.len() > self.best.len() {
            self.best = self.chosen.clone();
        }
        if avail.is_empty() {
            return Ok(());
        }
        let universe = self.sets[avail[0]].len();
        let mut union = FixedBitSet::with_capacity(universe);
        let mut shortest = usize::MAX;
        for &i in avail {
            union.union_with(&self.sets[i]);
            shortest = shortest.min(self.sets[i].count_ones(..));
        }
        let room = union.count_ones(..) / shortest.max(1);
        if self.chosen.len() + room <= self.best.len() {
            return Ok(());
        }
        // Branch on the element lying in the fewest available sets: either one
        // of those sets is taken, or the element stays unused.
        let mut freq = vec![0usize; universe];
        for &i in avail {
            for x in self.sets[i].ones() {
                freq[x] += 1;
            }
        }
        let pivot = union
            .ones()
            .min_by_key(|&x| (freq[x], x))
            .expect("union is non-empty");
        for &i in avail.iter().filter(|&&i| self.sets[i].contains(pivot)) {
            let rest: Vec<usize> = avail
                .iter()
                .copied()
                .filter(|&j| self.sets[i].is_disjoint(&self.sets[j]))
                .collect();
            self.chosen.push(i);
            self.run(&rest)?;
            self.chosen.pop();
        }
        let rest: Vec<usize> = avail
            .iter()
            .copied()
            .filter(|&j| !self.sets[j].contains(pivot))
            .collect();
        self.run(&rest)
    }
}

/// Minimum set of elements meeting every set. `lower` is a known lower bound;
/// the search stops as soon as it finds a hitting set of that size.
fn min_hitting_set(universe: usize, sets: &[FixedBitSet], lower: usize, budget: u64) -> Result<Vec<usize>> {
    if sets.is_empty() {
        return Ok(Vec::new());
    }
    let best = greedy_hitting_set(universe, sets);
    let mut search = HittingSearch {
        sets,
        best,
        lower,
        chosen: Vec::new(),
        hit: FixedBitSet::with_capacity(universe),
        excluded: FixedBitSet::with_capacity(universe),
        nodes: 0,
        budget,
    };
    if search.best.len() > lower {
        search.run()?;
    }
    let mut best = search.best;
    best.sort_unstable();
    Ok(best)
}

fn greedy_hitting_set(universe: usize, sets: &[FixedBitSet]) -> Vec<usize> {
    let mut alive: Vec<bool> = vec![true; sets.len()];
    let mut chosen = Vec::new();
    loop {
        let mut count = vec![0usize; universe];
        let mut any = false;
        for (s, _) in sets.iter().zip(&alive).filter(|(_, &a)| a) {
            any = true;
            for x in s.ones() {
                count[x] += 1;
            }
        }
        if !any {
            return chosen;
        }
        let x = (0..universe).max_by_key(|&x| (count[x], std::cmp::Reverse(x))).expect("non-empty");
        chosen.push(x);
        for (s, a) in sets.iter().zip(alive.iter_mut()) {
            if s.contains(x) {
                *a = false;
            }
        }
    }
}

struct HittingSearch<'a> {
    sets: &'a [FixedBitSet],
    best: Vec<usize>,
    lower: usize,
    chosen: Vec<usize>,
    hit: FixedBitSet,
    excluded: FixedBitSet,
    nodes: u64,
    budget: u64,
}

impl HittingSearch<'_> {
    /// Returns true once a solution matching the global lower bound is found.
    fn run(&mut self) -> Result<bool> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::SolverBudgetExceeded(self.budget));
        }
        // Unhit sets, restricted to elements not yet excluded.
        let mut open: Vec<FixedBitSet> = Vec::new();
        for s in self.sets {
            if s.is_disjoint(&self.hit) {
                let mut allowed = s.clone();
                allowed.difference_with(&self.excluded);
                if allowed.is_clear() {
                    return Ok(false);
                }
                open.push(allowed);
            }
        }
        if open.is_empty() {
            if self.chosen.len() < self.best.len() {
                self.best = self.chosen.clone();
            }
            return Ok(self.best.len() <= self.lower);
        }
        open.sort_by_key(|s| s.count_ones(..));
        let mut used = FixedBitSet::with_capacity(self.hit.len());
        let mut disjoint = 0;
        for s in &open {
            if s.is_disjoint(&used) {
                used.union_with(s);
                disjoint += 1;
            }
        }
        if self.chosen.len() + disjoint >= self.best.len() {
            return Ok(false);
        }
        let branch: Vec<usize> = open[0].ones().collect();
        let mut newly_excluded = Vec::new();
        let mut done = false;
        for x in branch {
            self.chosen.push(x);
            self.hit.insert(x);
            let r = self.run();
            self.hit.set(x, false);
            self.chosen.pop();
            if r? {
                done = true;
                break;
            }
            self.excluded.insert(x);
            newly_excluded.push(x);
        }
        for x in newly_excluded {
            self.excluded.set(x, false);
        }
        Ok(done)
    }
}

fn greedy_pack(order: impl IntoIterator<Item = SimpleCycle>, edge_count: usize) -> CyclePacking {
    let mut used = vec![false; edge_count];
    let mut cycles = Vec::new();
    for c in order {
        if c.edges().iter().all(|&e| !used[e]) {
            for &e in c.edges() {
                used[e] = true;
            }
            cycles.push(c);
        }
    }
    CyclePacking { cycles }
}

/// Greedy maximal packing taking the cycles in the given order.
pub fn greedy_packing_in_order(g: &DirectedMultigraph, cycles: &[SimpleCycle]) -> CyclePacking {
    greedy_pack(cycles.iter().cloned(), g.edge_count())
}

pub fn max_edge_disjoint_packing(
    g: &DirectedMultigraph,
    mode: PackingMode,
    limits: SolverLimits,
) -> Result<CyclePacking> {
    let cycles = graphs::enumerate_simple_cycles(g, limits.cycle_cap)?;
    packing_from_cycles(g, cycles, mode, limits)
}

fn packing_from_cycles(
    g: &DirectedMultigraph,
    mut cycles: Vec<SimpleCycle>,
    mode: PackingMode,
    limits: SolverLimits,
) -> Result<CyclePacking> {
    match mode {
        PackingMode::Greedy => {
            cycles.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.edges().cmp(b.edges())));
            Ok(greedy_pack(cycles, g.edge_count()))
        }
        PackingMode::Exact => {
            let sets = to_bitsets(g.edge_count(), cycles.iter().map(|c| c.edges()));
            let chosen = max_disjoint_sets(&sets, limits.node_budget)?;
            let mut picked: Vec<SimpleCycle> = chosen.into_iter().map(|i| cycles[i].clone()).collect();
            picked.sort();
            Ok(CyclePacking { cycles: picked })
        }
    }
}

/// Exact ν_e and τ_e from a single cycle enumeration.
pub fn edge_nu_tau(g: &DirectedMultigraph, limits: SolverLimits) -> Result<(CyclePacking, FeedbackEdgeSet)> {
    let cycles = graphs::enumerate_simple_cycles(g, limits.cycle_cap)?;
    let sets = to_bitsets(g.edge_count(), cycles.iter().map(|c| c.edges()));
    let packing = packing_from_cycles(g, cycles, PackingMode::Exact, limits)?;
    let edges = min_hitting_set(g.edge_count(), &sets, packing.len(), limits.node_budget)?;
    let fes = FeedbackEdgeSet { edges };
    assert!(fes.is_feedback_for(g), "hitting set must leave the graph acyclic");
    Ok((packing, fes))
}

pub fn min_feedback_edge_set(g: &DirectedMultigraph, limits: SolverLimits) -> Result<FeedbackEdgeSet> {
    edge_nu_tau(g, limits).map(|(_, f)| f)
}

fn chordless_sets(g: &DirectedMultigraph, limits: SolverLimits) -> Result<(Vec<Vec<usize>>, Vec<FixedBitSet>)> {
    let cycles = graphs::enumerate_chordless_cycles(g, limits.cycle_cap)?;
    let sets = to_bitsets(g.vertex_count(), cycles.iter().map(Vec::as_slice));
    Ok((cycles, sets))
}

fn vertex_cycle_to_edges(g: &DirectedMultigraph, vertices: &[usize]) -> SimpleCycle {
    let edges = (0..vertices.len())
        .map(|k| {
            let (t, h) = (vertices[k], vertices[(k + 1) % vertices.len()]);
            g.edges()
                .iter()
                .position(|&e| e == (t, h))
                .expect("consecutive cycle vertices are adjacent")
        })
        .collect();
    SimpleCycle::from_trusted(edges)
}

pub fn max_vertex_disjoint_packing(g: &DirectedMultigraph, limits: SolverLimits) -> Result<CyclePacking> {
    let (cycles, sets) = chordless_sets(g, limits)?;
    let chosen = max_disjoint_sets(&sets, limits.node_budget)?;
    let mut picked: Vec<SimpleCycle> = chosen
        .into_iter()
        .map(|i| vertex_cycle_to_edges(g, &cycles[i]))
        .collect();
    picked.sort();
    Ok(CyclePacking { cycles: picked })
}

pub fn min_feedback_vertex_set(g: &DirectedMultigraph, limits: SolverLimits) -> Result<FeedbackVertexSet> {
    let (_, sets) = chordless_sets(g, limits)?;
    let lower = max_disjoint_sets(&sets, limits.node_budget)?.len();
    let vertices = min_hitting_set(g.vertex_count(), &sets, lower, limits.node_budget)?;
    let fvs = FeedbackVertexSet { vertices };
    assert!(fvs.is_feedback_for(g), "hitting set must leave the graph acyclic");
    Ok(fvs)
}

/// Splits an Eulerian graph into edge-disjoint cycles covering every edge.
pub fn eulerian_decomposition(g: &DirectedMultigraph) -> Result<CyclePacking> {
    let order: Vec<usize> = (0..g.edge_count()).collect();
    eulerian_decomposition_ordered(g, &order)
}

/// Like [`eulerian_decomposition`], preferring edges that come earlier in
/// `order` (a permutation of the edge indices) whenever the walk has a choice.
pub fn eulerian_decomposition_ordered(g: &DirectedMultigraph, order: &[usize]) -> Result<CyclePacking> {
    if !graphs::is_eulerian(g)? {
        return Err(Error::NotEulerian);
    }
    if order.len() != g.edge_count() {
        return Err(Error::InvalidArgument("order must list every edge once".into()));
    }
    let mut rank = vec![usize::MAX; g.edge_count()];
    for (r, &e) in order.iter().enumerate() {
        if e >= g.edge_count() || rank[e] != usize::MAX {
            return Err(Error::InvalidArgument("order must list every edge once".into()));
        }
        rank[e] = r;
    }
    let mut out = g.out_edges();
    for list in &mut out {
        list.sort_by_key(|&e| rank[e]);
    }
    let mut next = vec![0usize; g.vertex_count()];
    let mut used = vec![false; g.edge_count()];
    let mut cycles = Vec::new();
    let mut pos: Vec<Option<usize>> = vec![None; g.vertex_count()];

    for &start in order {
        if used[start] {
            continue;
        }
        let mut walk_vertices = vec![g.tail(start)];
        let mut walk_edges: Vec<usize> = Vec::new();
        pos[g.tail(start)] = Some(0);
        while let Some(&v) = walk_vertices.last() {
            while next[v] < out[v].len() && used[out[v][next[v]]] {
                next[v] += 1;
            }
            if next[v] == out[v].len() {
                // Balanced degrees mean only an empty walk can get stuck.
                debug_assert!(walk_edges.is_empty());
                pos[v] = None;
                break;
            }
            let e = out[v][next[v]];
            used[e] = true;
            let w = g.head(e);
            walk_edges.push(e);
            match pos[w] {
                Some(p) => {
                    let cycle: Vec<usize> = walk_edges.split_off(p);
                    for &x in &walk_vertices[p + 1..] {
                        pos[x] = None;
                    }
                    walk_vertices.truncate(p + 1);
                    cycles.push(SimpleCycle::from_trusted(cycle));
                }
                None => {
                    pos[w] = Some(walk_vertices.len());
                    walk_vertices.push(w);
                }
            }
        }
    }
    Ok(CyclePacking { cycles })
}

/// ν_e and τ_e of a generalized cycle with certificates in supergraph terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupergraphNuTau {
    pub nu_e: usize,
    pub tau_e: usize,
    pub packing: Vec<SupergraphCycle>,
    pub feedback: Vec<DemandEdge>,
}

/// Computes on the Eulerian view and maps certificates back through edge provenance.
pub fn supergraph_nu_tau(gc: &DemandSupergraph, limits: SolverLimits) -> Result<SupergraphNuTau> {
    let view = transforms::to_eulerian(gc)?;
    let (packing, fes) = edge_nu_tau(&view.graph, limits)?;
    Ok(SupergraphNuTau {
        nu_e: packing.len(),
        tau_e: fes.len(),
        packing: packing.cycles.iter().map(|c| view.to_supergraph_cycle(c)).collect(),
        feedback: fes.edges.iter().map(|&e| view.provenance[e].clone()).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::tests::{arb_multigraph, fig3};
    use crate::model::tests::example1;
    use proptest::prelude::*;

    fn bidirected_triangle() -> DirectedMultigraph {
        DirectedMultigraph::from_edges(3, [(0, 1), (1, 0), (1, 2), (2, 1), (2, 0), (0, 2)]).unwrap()
    }

    /// Largest pairwise-disjoint family among bitmask sets, by exhaustive include/skip recursion.
    fn brute_max_disjoint(sets: &[u64], used: u64) -> usize {
        match sets.split_first() {
            None => 0,
            Some((&s, rest)) => {
                let skip = brute_max_disjoint(rest, used);
                if s & used == 0 {
                    skip.max(1 + brute_max_disjoint(rest, used | s))
                } else {
                    skip
                }
            }
        }
    }

    fn brute_nu_e(g: &DirectedMultigraph) -> usize {
        let cycles = graphs::enumerate_simple_cycles(g, 1 << 16).unwrap();
        let sets: Vec<u64> = cycles
            .iter()
            .map(|c| c.edges().iter().fold(0u64, |acc, &e| acc | 1 << e))
            .collect();
        brute_max_disjoint(&sets, 0)
    }

    /// Smallest edge subset whose removal leaves an acyclic graph.
    fn brute_tau_e(g: &DirectedMultigraph) -> usize {
        let m = g.edge_count();
        assert!(m <= 20);
        (0u32..(1 << m))
            .filter(|mask| g.is_acyclic_where(|e| mask >> e & 1 == 0, |_| true))
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    fn brute_tau_v(g: &DirectedMultigraph) -> usize {
        let n = g.vertex_count();
        (0u32..(1 << n))
            .filter(|mask| g.is_acyclic_where(|_| true, |v| mask >> v & 1 == 0))
            .map(|mask| mask.count_ones() as usize)
            .min()
            .unwrap()
    }

    fn brute_nu_v(g: &DirectedMultigraph) -> usize {
        let cycles = graphs::enumerate_simple_cycles(g, 1 << 16).unwrap();
        let sets: Vec<u64> = cycles
            .iter()
            .map(|c| c.vertices(g).iter().fold(0u64, |acc, &v| acc | 1 << v))
            .collect();
        brute_max_disjoint(&sets, 0)
    }

    #[test]
    fn triangle_oracles() {
        let g = bidirected_triangle();
        assert_eq!(brute_nu_e(&g), 3);
        assert_eq!(brute_tau_e(&g), 3);
        let p = max_edge_disjoint_packing(&g, PackingMode::Exact, SolverLimits::default()).unwrap();
        assert_eq!(p.len(), 3);
        assert!(p.is_edge_disjoint());
        let f = min_feedback_edge_set(&g, SolverLimits::default()).unwrap();
        assert_eq!(f.len(), 3);
    }

    #[test]
    fn fig3_nu_tau() {
        let (p, f) = edge_nu_tau(&fig3(), SolverLimits::default()).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(f.len(), 4);
        assert!(p.covers(&fig3()));
        let greedy = max_edge_disjoint_packing(&fig3(), PackingMode::Greedy, SolverLimits::default()).unwrap();
        assert!(greedy.covers(&fig3()));
        assert!(greedy.len() <= 4);
    }

    #[test]
    fn single_cycle_and_acyclic() {
        let c = DirectedMultigraph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert_eq!(max_edge_disjoint_packing(&c, PackingMode::Exact, SolverLimits::default()).unwrap().len(), 1);
        let path = DirectedMultigraph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        assert!(min_feedback_edge_set(&path, SolverLimits::default()).unwrap().is_empty());
        assert!(min_feedback_vertex_set(&path, SolverLimits::default()).unwrap().is_empty());
        assert!(max_vertex_disjoint_packing(&path, SolverLimits::default()).unwrap().is_empty());
    }

    #[test]
    fn disjoint_two_cycles() {
        let k = 4;
        let edges = (0..k).flat_map(|i| [(2 * i, 2 * i + 1), (2 * i + 1, 2 * i)]);
        let g = DirectedMultigraph::from_edges(2 * k, edges).unwrap();
        assert_eq!(min_feedback_vertex_set(&g, SolverLimits::default()).unwrap().len(), k);
        assert_eq!(max_vertex_disjoint_packing(&g, SolverLimits::default()).unwrap().len(), k);
    }

    #[test]
    fn example1_side_info_vertex_numbers() {
        let si = transforms::to_side_information_graph(&example1()).unwrap();
        let fvs = min_feedback_vertex_set(&si.graph, SolverLimits::default()).unwrap();
        let pack = max_vertex_disjoint_packing(&si.graph, SolverLimits::default()).unwrap();
        assert_eq!(fvs.len(), 4);
        assert_eq!(pack.len(), 4);
        assert!(pack.is_vertex_disjoint(&si.graph));
        assert_eq!(brute_tau_v(&si.graph), 4);
    }

    #[test]
    fn decomposition_orders() {
        let g = bidirected_triangle();
        let a = eulerian_decomposition(&g).unwrap();
        let b = eulerian_decomposition_ordered(&g, &[0, 2, 4, 1, 3, 5]).unwrap();
        assert_eq!(a.len(), 3);
        assert_eq!(b.len(), 2);
        for p in [&a, &b] {
            assert!(p.covers(&g));
            assert!(p.is_edge_disjoint());
            assert_eq!(p.edge_total(), 6);
        }
        let d = eulerian_decomposition(&fig3()).unwrap();
        assert_eq!(d.edge_total(), 9);
        assert!(d.covers(&fig3()));
        let single = DirectedMultigraph::from_edges(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(eulerian_decomposition(&single).unwrap().cycles, vec![SimpleCycle::from_trusted(vec![0, 1, 2])]);
        let path = DirectedMultigraph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        assert_eq!(eulerian_decomposition(&path), Err(Error::NotEulerian));
    }

    #[test]
    fn example1_supergraph_numbers() {
        let r = supergraph_nu_tau(&example1(), SolverLimits::default()).unwrap();
        assert_eq!((r.nu_e, r.tau_e), (4, 4));
        let lens: Vec<usize> = {
            let mut l: Vec<usize> = r.packing.iter().map(|c| c.len()).collect();
            l.sort();
            l
        };
        assert_eq!(lens, vec![2, 2, 2, 3]);
        let gc = example1();
        for c in &r.packing {
            assert!(SupergraphCycle::new(&gc, c.edges().to_vec()).is_ok());
        }
    }

    #[test]
    fn budget_is_enforced() {
        let limits = SolverLimits { cycle_cap: DEFAULT_CYCLE_CAP, node_budget: 1 };
        assert_eq!(
            max_edge_disjoint_packing(&fig3(), PackingMode::Exact, limits),
            Err(Error::SolverBudgetExceeded(1))
        );
        let limits = SolverLimits { cycle_cap: 2, node_budget: 10 };
        assert_eq!(
            max_edge_disjoint_packing(&fig3(), PackingMode::Exact, limits),
            Err(Error::CycleLimitExceeded(2))
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exact_edge_solvers_match_brute_force(g in arb_multigraph(5, 11)) {
            let (p, f) = edge_nu_tau(&g, SolverLimits::default()).unwrap();
            prop_assert!(p.is_edge_disjoint());
            prop_assert_eq!(p.len(), brute_nu_e(&g));
            prop_assert_eq!(f.len(), brute_tau_e(&g));
            prop_assert!(p.len() <= f.len());
            let greedy = max_edge_disjoint_packing(&g, PackingMode::Greedy, SolverLimits::default()).unwrap();
            prop_assert!(greedy.len() <= p.len());
        }

        #[test]
        fn exact_vertex_solvers_match_brute_force(g in arb_multigraph(7, 16)) {
            let p = max_vertex_disjoint_packing(&g, SolverLimits::default()).unwrap();
            let f = min_feedback_vertex_set(&g, SolverLimits::default()).unwrap();
            prop_assert!(p.is_vertex_disjoint(&g));
            prop_assert_eq!(p.len(), brute_nu_v(&g));
            prop_assert_eq!(f.len(), brute_tau_v(&g));
        }
    }
}
