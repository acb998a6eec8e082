//! Directed multigraphs stored as edge lists.
//!
//! Parallel edges are distinguished by their position in the edge list, so a
//! cycle, a packing or a feedback set is always a set of edge indices.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the number of simple cycles an enumeration may return.
pub const DEFAULT_CYCLE_CAP: usize = 100_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DirectedMultigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    allow_self_loops: bool,
}

impl DirectedMultigraph {
    pub fn new(vertex_count: usize) -> Self {
        DirectedMultigraph {
            vertex_count,
            edges: Vec::new(),
            allow_self_loops: false,
        }
    }

    /// A multigraph that accepts `v -> v` edges.
    pub fn with_self_loops(vertex_count: usize) -> Self {
        DirectedMultigraph {
            allow_self_loops: true,
            ..Self::new(vertex_count)
        }
    }

    pub fn from_edges<I>(vertex_count: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Self::new(vertex_count);
        for (tail, head) in edges {
            g.add_edge(tail, head)?;
        }
        Ok(g)
    }

    /// Appends an edge and returns its index.
    pub fn add_edge(&mut self, tail: usize, head: usize) -> Result<usize> {
        for v in [tail, head] {
            if v >= self.vertex_count {
                return Err(Error::VertexOutOfRange {
                    vertex: v,
                    count: self.vertex_count,
                });
            }
        }
        if tail == head && !self.allow_self_loops {
            return Err(Error::SelfLoop(tail));
        }
        self.edges.push((tail, head));
        Ok(self.edges.len() - 1)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge(&self, index: usize) -> (usize, usize) {
        self.edges[index]
    }

    pub fn tail(&self, index: usize) -> usize {
        self.edges[index].0
    }

    pub fn head(&self, index: usize) -> usize {
        self.edges[index].1
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(t, _) in &self.edges {
            deg[t] += 1;
        }
        deg
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.vertex_count];
        for &(_, h) in &self.edges {
            deg[h] += 1;
        }
        deg
    }

    /// Outgoing edge indices per vertex, in edge-list order.
    pub fn out_edges(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(t, _)) in self.edges.iter().enumerate() {
            adj[t].push(i);
        }
        adj
    }

    /// Sorted edge multiset, useful for comparing graphs up to parallel-edge relabeling.
    pub fn edge_multiset(&self) -> Vec<(usize, usize)> {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e
    }

    /// Returns true if the subgraph made of the edges with `edge_alive(e)` and
    /// the vertices with `vertex_alive(v)` has no directed cycle.
    pub fn is_acyclic_where<E, V>(&self, edge_alive: E, vertex_alive: V) -> bool
    where
        E: Fn(usize) -> bool,
        V: Fn(usize) -> bool,
    {
        let mut indeg = vec![0usize; self.vertex_count];
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (i, &(t, h)) in self.edges.iter().enumerate() {
            if edge_alive(i) && vertex_alive(t) && vertex_alive(h) {
                indeg[h] += 1;
                adj[t].push(h);
            }
        }
        let mut queue: VecDeque<usize> = (0..self.vertex_count).filter(|&v| indeg[v] == 0).collect();
        let mut seen = 0;
        while let Some(v) = queue.pop_front() {
            seen += 1;
            for &w in &adj[v] {
                indeg[w] -= 1;
                if indeg[w] == 0 {
                    queue.push_back(w);
                }
            }
        }
        seen == self.vertex_count
    }

    pub fn is_acyclic(&self) -> bool {
        self.is_acyclic_where(|_| true, |_| true)
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for DirectedMultigraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vertices {}", self.vertex_count)?;
        for &(t, h) in &self.edges {
            writeln!(f, "edge {t} {h}")?;
        }
        Ok(())
    }
}

/// Parses the `vertices <n>` / `edge <tail> <head>` multigraph format.
pub fn parse_multigraph(text: &str) -> Result<DirectedMultigraph> {
    let mut graph: Option<DirectedMultigraph> = None;
    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = content.split_whitespace().collect();
        let syntax = |message: String| Error::Syntax { line, message };
        match (tokens[0], graph.as_mut()) {
            ("vertices", None) => {
                if tokens.len() != 2 {
                    return Err(syntax("expected `vertices <n>`".into()));
                }
                let n = parse_index(tokens[1]).map_err(syntax)?;
                graph = Some(DirectedMultigraph::new(n));
            }
            ("vertices", Some(_)) => return Err(syntax("duplicate `vertices` line".into())),
            ("edge", Some(g)) => {
                if tokens.len() != 3 {
                    return Err(syntax("expected `edge <tail> <head>`".into()));
                }
                let t = parse_index(tokens[1]).map_err(syntax)?;
                let h = parse_index(tokens[2]).map_err(syntax)?;
                g.add_edge(t, h).map_err(|e| syntax(e.to_string()))?;
            }
            ("edge", None) => return Err(syntax("`edge` before `vertices`".into())),
            (other, _) => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }
    graph.ok_or(Error::Syntax {
        line: text.lines().count().max(1),
        message: "missing `vertices` line".into(),
    })
}

pub(crate) fn parse_index(token: &str) -> std::result::Result<usize, String> {
    token
        .parse::<usize>()
        .map_err(|_| format!("`{token}` is not a non-negative integer"))
}

/// A simple cycle given as edge indices in traversal order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimpleCycle {
    edges: Vec<usize>,
}

impl SimpleCycle {
    /// Wraps `edges` after checking that they form a simple cycle of `g`.
    pub fn new(g: &DirectedMultigraph, edges: Vec<usize>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidCycle("empty cycle".into()));
        }
        let mut seen = vec![false; g.vertex_count()];
        for (k, &e) in edges.iter().enumerate() {
            if e >= g.edge_count() {
                return Err(Error::InvalidCycle(format!("edge {e} out of range")));
            }
            let next = edges[(k + 1) % edges.len()];
            if next >= g.edge_count() || g.head(e) != g.tail(next) {
                return Err(Error::InvalidCycle(format!(
                    "edge {e} does not connect to edge {next}"
                )));
            }
            let t = g.tail(e);
            if seen[t] {
                return Err(Error::InvalidCycle(format!("vertex {t} visited twice")));
            }
            seen[t] = true;
        }
        Ok(SimpleCycle { edges })
    }

    pub(crate) fn from_trusted(edges: Vec<usize>) -> Self {
        SimpleCycle { edges }
    }

    pub fn edges(&self) -> &[usize] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Visited vertices, starting from the tail of the first edge.
    pub fn vertices(&self, g: &DirectedMultigraph) -> Vec<usize> {
        self.edges.iter().map(|&e| g.tail(e)).collect()
    }
}

pub fn strongly_connected(g: &DirectedMultigraph) -> bool {
    let n = g.vertex_count();
    if n <= 1 {
        return true;
    }
    let mut fwd = vec![Vec::new(); n];
    let mut rev = vec![Vec::new(); n];
    for &(t, h) in g.edges() {
        fwd[t].push(h);
        rev[h].push(t);
    }
    reaches_all(&fwd, 0) && reaches_all(&rev, 0)
}

fn reaches_all(adj: &[Vec<usize>], start: usize) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![start];
    seen[start] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    count == adj.len()
}

/// Balanced and strongly connected. Every vertex must have an incident edge.
pub fn is_eulerian(g: &DirectedMultigraph) -> Result<bool> {
    let outd = g.out_degrees();
    let ind = g.in_degrees();
    if let Some(v) = (0..g.vertex_count()).find(|&v| outd[v] + ind[v] == 0) {
        return Err(Error::IsolatedVertex(v));
    }
    Ok(outd == ind && strongly_connected(g))
}

/// Lists every simple cycle of `g` exactly once.
///
/// Johnson-style backtracking with blocked sets, run over edges rather than
/// vertices so that parallel edges give distinct cycles. Cycles are reported
/// rooted at their smallest vertex, grouped by root in increasing order, and
/// within a root in the order the depth-first search meets them.
pub fn enumerate_simple_cycles(g: &DirectedMultigraph, limit: usize) -> Result<Vec<SimpleCycle>> {
    let mut search = Johnson {
        g,
        adj: g.out_edges(),
        blocked: vec![false; g.vertex_count()],
        block_map: vec![Vec::new(); g.vertex_count()],
        stack: Vec::new(),
        out: Vec::new(),
        limit,
    };
    for root in 0..g.vertex_count() {
        for v in root..g.vertex_count() {
            search.blocked[v] = false;
            search.block_map[v].clear();
        }
        search.circuit(root, root)?;
    }
    Ok(search.out)
}

struct Johnson<'a> {
    g: &'a DirectedMultigraph,
    adj: Vec<Vec<usize>>,
    blocked: Vec<bool>,
    block_map: Vec<Vec<usize>>,
    stack: Vec<usize>,
    out: Vec<SimpleCycle>,
    limit: usize,
}

impl Johnson<'_> {
    fn circuit(&mut self, v: usize, root: usize) -> Result<bool> {
        let mut found = false;
        self.blocked[v] = true;
        for k in 0..self.adj[v].len() {
            let e = self.adj[v][k];
            let w = self.g.head(e);
            if w < root {
                continue;
            }
            if w == root {
                self.stack.push(e);
                self.out.push(SimpleCycle::from_trusted(self.stack.clone()));
                self.stack.pop();
                if self.out.len() > self.limit {
                    return Err(Error::CycleLimitExceeded(self.limit));
                }
                found = true;
            } else if !self.blocked[w] {
                self.stack.push(e);
                if self.circuit(w, root)? {
                    found = true;
                }
                self.stack.pop();
            }
        }
        if found {
            self.unblock(v);
        } else {
            for k in 0..self.adj[v].len() {
                let w = self.g.head(self.adj[v][k]);
                if w >= root && !self.block_map[w].contains(&v) {
                    self.block_map[w].push(v);
                }
            }
        }
        Ok(found)
    }

    fn unblock(&mut self, u: usize) {
        self.blocked[u] = false;
        while let Some(w) = self.block_map[u].pop() {
            if self.blocked[w] {
                self.unblock(w);
            }
        }
    }
}

/// Lists the vertex sequences of all chordless (induced) cycles, each rooted
/// at its smallest vertex.
///
/// Every cycle contains the vertex set of some chordless cycle, so these are
/// enough for vertex-disjoint packing and feedback vertex set problems.
pub fn enumerate_chordless_cycles(g: &DirectedMultigraph, limit: usize) -> Result<Vec<Vec<usize>>> {
    let n = g.vertex_count();
    let mut adj = vec![vec![false; n]; n];
    let mut succ = vec![Vec::new(); n];
    let mut out = Vec::new();
    for &(t, h) in g.edges() {
        if !adj[t][h] {
            adj[t][h] = true;
            if t != h {
                succ[t].push(h);
            }
        }
    }
    for v in 0..n {
        if adj[v][v] {
            out.push(vec![v]);
        }
        succ[v].sort_unstable();
    }
    if out.len() > limit {
        return Err(Error::CycleLimitExceeded(limit));
    }
    let mut path = Vec::new();
    let mut on_path = vec![false; n];
    for root in 0..n {
        if adj[root][root] {
            continue;
        }
        path.push(root);
        on_path[root] = true;
        extend_induced(&adj, &succ, root, &mut path, &mut on_path, &mut out, limit)?;
        on_path[root] = false;
        path.pop();
    }
    Ok(out)
}

fn extend_induced(
    adj: &[Vec<bool>],
    succ: &[Vec<usize>],
    root: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
    limit: usize,
) -> Result<()> {
    let last = *path.last().expect("non-empty path");
    for &w in &succ[last] {
        if w <= root || on_path[w] || adj[w][w] {
            continue;
        }
        // w must see the path only through last -> w, and optionally w -> root
        let k = path.len() - 1;
        let chord = path.iter().enumerate().any(|(i, &u)| {
            (i < k && adj[u][w]) || (i > 0 && adj[w][u])
        });
        if chord {
            continue;
        }
        path.push(w);
        if adj[w][root] {
            out.push(path.clone());
            if out.len() > limit {
                return Err(Error::CycleLimitExceeded(limit));
            }
        } else {
            on_path[w] = true;
            extend_induced(adj, succ, root, path, on_path, out, limit)?;
            on_path[w] = false;
        }
        path.pop();
    }
    Ok(())
}
