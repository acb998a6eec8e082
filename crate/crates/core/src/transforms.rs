//! Conversions between generalized cycles, side-information graphs and
//! Eulerian multigraphs.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::graphs::{self, DirectedMultigraph, SimpleCycle};
use crate::model::{
    is_generalized_cycle, DemandEdge, DemandSupergraph, MessageId, ReceiverId, SupergraphCycle,
};

/// Side-information graph of a single-unicast problem: one vertex per
/// message, and an edge `x_j -> x_i` when the receiver demanding `x_j` holds `x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideInfoGraph {
    pub graph: DirectedMultigraph,
    pub labels: Vec<MessageId>,
}

impl SideInfoGraph {
    pub fn vertex_of(&self, m: &MessageId) -> Option<usize> {
        self.labels.iter().position(|l| l == m)
    }
}

/// Eulerian multigraph on receivers with one edge per demand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerianView {
    pub graph: DirectedMultigraph,
    pub labels: Vec<ReceiverId>,
    /// Demand carried by each edge, indexed like `graph.edges()`.
    pub provenance: Vec<DemandEdge>,
}

impl EulerianView {
    /// Maps a multigraph cycle back to the supergraph cycle it came from,
    /// starting at its smallest message.
    pub fn to_supergraph_cycle(&self, cycle: &SimpleCycle) -> SupergraphCycle {
        // Edge order is preserved: the head of edge k holds the message of edge k+1.
        let edges: Vec<DemandEdge> = cycle.edges().iter().map(|&e| self.provenance[e].clone()).collect();
        SupergraphCycle::from_trusted(edges).canonical()
    }

    pub fn edge_of(&self, d: &DemandEdge) -> Option<usize> {
        self.provenance.iter().position(|p| p == d)
    }
}

fn require_gc(gc: &DemandSupergraph) -> Result<()> {
    match is_generalized_cycle(gc).violation {
        None => Ok(()),
        Some(v) => Err(Error::NotGeneralizedCycle(v.to_string())),
    }
}

pub fn to_side_information_graph(gc: &DemandSupergraph) -> Result<SideInfoGraph> {
    require_gc(gc)?;
    let labels: Vec<MessageId> = gc.messages().cloned().collect();
    let mut graph = DirectedMultigraph::new(labels.len());
    for d in gc.demands() {
        let from = gc.message_index(&d.message).expect("validated");
        for held in gc.side_info(&d.receiver).expect("validated") {
            let to = gc.message_index(held).expect("validated");
            graph.add_edge(from, to)?;
        }
    }
    Ok(SideInfoGraph { graph, labels })
}

pub fn to_eulerian(gc: &DemandSupergraph) -> Result<EulerianView> {
    require_gc(gc)?;
    let (graph, provenance) = gc.holder_graph();
    debug_assert!(graphs::is_eulerian(&graph).unwrap_or(false));
    Ok(EulerianView {
        graph,
        labels: gc.receivers().cloned().collect(),
        provenance,
    })
}

/// Builds a generalized cycle whose Eulerian view is `g`.
///
/// Vertex `i` becomes receiver `i+1`; edge `k` becomes message `x{k+1}`, held
/// by the tail of the edge and demanded by its head.
pub fn from_eulerian(g: &DirectedMultigraph) -> Result<DemandSupergraph> {
    if !graphs::is_eulerian(g)? {
        return Err(Error::NotEulerian);
    }
    let receiver = |v: usize| ReceiverId::new((v + 1).to_string());
    let message = |k: usize| MessageId::new(format!("x{}", k + 1));
    let mut sides = vec![BTreeSet::new(); g.vertex_count()];
    let mut demands = Vec::with_capacity(g.edge_count());
    for (k, &(t, h)) in g.edges().iter().enumerate() {
        sides[t].insert(message(k));
        demands.push(DemandEdge::new(message(k), receiver(h)));
    }
    DemandSupergraph::new(
        sides.into_iter().enumerate().map(|(v, s)| (receiver(v), s)),
        demands,
    )
}

/// Side-information cycle through the same message subvertices as `c`:
/// each message points at the next one, which its demander holds.
pub fn transport_cycle(si: &SideInfoGraph, c: &SupergraphCycle) -> Option<SimpleCycle> {
    let msgs: Vec<&MessageId> = c.messages().collect();
    let mut edges = Vec::with_capacity(msgs.len());
    for k in 0..msgs.len() {
        let from = si.vertex_of(msgs[k])?;
        let to = si.vertex_of(msgs[(k + 1) % msgs.len()])?;
        let e = si.graph.edges().iter().position(|&(t, h)| t == from && h == to)?;
        edges.push(e);
    }
    SimpleCycle::new(&si.graph, edges).ok()
}
