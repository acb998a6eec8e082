//! Uniprior index coding problems as demand supergraphs.
//!
//! A receiver is a supervertex holding its side-information messages as
//! subvertices; a demand is an edge from a message subvertex to the receiver
//! that wants it. Side-information sets are pairwise disjoint, so every
//! message has at most one holder.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::{Error, Result};
use crate::graphs::{self, DirectedMultigraph};

/// Orders labels so that digit runs compare numerically (`x2 < x10`).
fn natural_cmp(a: &str, b: &str) -> Ordering {
    let (mut ai, mut bi) = (a.char_indices().peekable(), b.char_indices().peekable());
    loop {
        match (ai.peek().copied(), bi.peek().copied()) {
            (None, None) => return a.cmp(b),
            (None, Some(_)) => return Ordering::Less,
            (Some(_), None) => return Ordering::Greater,
            (Some((sa, ca)), Some((sb, cb))) => {
                if ca.is_ascii_digit() && cb.is_ascii_digit() {
                    let ea = digit_run_end(a, sa);
                    let eb = digit_run_end(b, sb);
                    let (da, db) = (a[sa..ea].trim_start_matches('0'), b[sb..eb].trim_start_matches('0'));
                    let ord = da.len().cmp(&db.len()).then_with(|| da.cmp(db));
                    if ord != Ordering::Equal {
                        return ord;
                    }
                    while ai.peek().is_some_and(|&(i, _)| i < ea) {
                        ai.next();
                    }
                    while bi.peek().is_some_and(|&(i, _)| i < eb) {
                        bi.next();
                    }
                } else {
                    if ca != cb {
                        return ca.cmp(&cb);
                    }
                    ai.next();
                    bi.next();
                }
            }
        }
    }
}

fn digit_run_end(s: &str, start: usize) -> usize {
    s[start..]
        .find(|c: char| !c.is_ascii_digit())
        .map_or(s.len(), |off| start + off)
}

macro_rules! label_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, PartialEq, Eq, Hash)]
        pub struct $name(String);

        impl $name {
            pub fn new(label: impl Into<String>) -> Self {
                $name(label.into())
            }

            pub fn as_str(&self) -> &str {
                &self.0
            }
        }

        impl Ord for $name {
            fn cmp(&self, other: &Self) -> Ordering {
                natural_cmp(&self.0, &other.0)
            }
        }

        impl PartialOrd for $name {
            fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
                Some(self.cmp(other))
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(&self.0)
            }
        }

        impl From<&str> for $name {
            fn from(s: &str) -> Self {
                $name(s.to_owned())
            }
        }
    };
}

label_type!(
    /// Label of a message, e.g. `x1`.
    MessageId
);
label_type!(
    /// Label of a receiver (supervertex).
    ReceiverId
);

/// Message `message` is demanded by `receiver`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DemandEdge {
    pub message: MessageId,
    pub receiver: ReceiverId,
}

impl DemandEdge {
    pub fn new(message: impl Into<MessageId>, receiver: impl Into<ReceiverId>) -> Self {
        DemandEdge {
            message: message.into(),
            receiver: receiver.into(),
        }
    }
}

impl From<String> for MessageId {
    fn from(s: String) -> Self {
        MessageId(s)
    }
}

impl From<String> for ReceiverId {
    fn from(s: String) -> Self {
        ReceiverId(s)
    }
}

impl fmt::Display for DemandEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.message, self.receiver)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DemandSupergraph {
    receivers: BTreeMap<ReceiverId, BTreeSet<MessageId>>,
    demands: BTreeSet<DemandEdge>,
    holder: BTreeMap<MessageId, ReceiverId>,
}

impl DemandSupergraph {
    /// Builds and validates a supergraph.
    pub fn new<R, D>(receivers: R, demands: D) -> Result<Self>
    where
        R: IntoIterator<Item = (ReceiverId, BTreeSet<MessageId>)>,
        D: IntoIterator<Item = DemandEdge>,
    {
        let mut map = BTreeMap::new();
        let mut holder: BTreeMap<MessageId, ReceiverId> = BTreeMap::new();
        for (r, side) in receivers {
            if side.is_empty() {
                return Err(Error::EmptySideInfo(r.to_string()));
            }
            for m in &side {
                if let Some(prev) = holder.insert(m.clone(), r.clone()) {
                    return Err(Error::NonDisjointSideInfo {
                        message: m.to_string(),
                        first: prev.to_string(),
                        second: r.to_string(),
                    });
                }
            }
            if map.insert(r.clone(), side).is_some() {
                return Err(Error::DuplicateReceiver(r.to_string()));
            }
        }
        let mut set = BTreeSet::new();
        for d in demands {
            if !map.contains_key(&d.receiver) {
                return Err(Error::InvalidArgument(format!(
                    "demand {d} names unknown receiver {}",
                    d.receiver
                )));
            }
            match holder.get(&d.message) {
                None => {
                    return Err(Error::UnhousedDemandedMessage {
                        message: d.message.to_string(),
                        receiver: d.receiver.to_string(),
                    })
                }
                Some(h) if *h == d.receiver => {
                    return Err(Error::DemandInOwnSideInfo {
                        message: d.message.to_string(),
                        receiver: d.receiver.to_string(),
                    })
                }
                Some(_) => {}
            }
            set.insert(d);
        }
        Ok(DemandSupergraph {
            receivers: map,
            demands: set,
            holder,
        })
    }

    /// Number of receivers, m.
    pub fn receiver_count(&self) -> usize {
        self.receivers.len()
    }

    /// Number of messages, n.
    pub fn message_count(&self) -> usize {
        self.holder.len()
    }

    pub fn receivers(&self) -> impl Iterator<Item = &ReceiverId> {
        self.receivers.keys()
    }

    /// Messages in canonical order.
    pub fn messages(&self) -> impl Iterator<Item = &MessageId> {
        self.holder.keys()
    }

    pub fn side_info(&self, r: &ReceiverId) -> Option<&BTreeSet<MessageId>> {
        self.receivers.get(r)
    }

    pub fn holder(&self, m: &MessageId) -> Option<&ReceiverId> {
        self.holder.get(m)
    }

    /// Demand edges in canonical order.
    pub fn demands(&self) -> &BTreeSet<DemandEdge> {
        &self.demands
    }

    pub fn contains_demand(&self, d: &DemandEdge) -> bool {
        self.demands.contains(d)
    }

    pub fn demand_set(&self, r: &ReceiverId) -> BTreeSet<&MessageId> {
        self.demands
            .iter()
            .filter(|d| &d.receiver == r)
            .map(|d| &d.message)
            .collect()
    }

    pub fn in_degree(&self, r: &ReceiverId) -> usize {
        self.demands.iter().filter(|d| &d.receiver == r).count()
    }

    pub fn receiver_index(&self, r: &ReceiverId) -> Option<usize> {
        self.receivers.keys().position(|k| k == r)
    }

    pub fn message_index(&self, m: &MessageId) -> Option<usize> {
        self.holder.keys().position(|k| k == m)
    }

    /// Same receivers and side information, different demands.
    pub fn with_demands<D>(&self, demands: D) -> Result<Self>
    where
        D: IntoIterator<Item = DemandEdge>,
    {
        DemandSupergraph::new(self.receivers.clone(), demands)
    }

    /// Multigraph on receivers (canonical order) with one edge per demand,
    /// from the holder of the message to the demanding receiver. Edge `k`
    /// carries the `k`-th demand in canonical order.
    pub fn holder_graph(&self) -> (DirectedMultigraph, Vec<DemandEdge>) {
        let index: BTreeMap<&ReceiverId, usize> =
            self.receivers.keys().enumerate().map(|(i, r)| (r, i)).collect();
        let mut g = DirectedMultigraph::new(self.receivers.len());
        let mut provenance = Vec::with_capacity(self.demands.len());
        for d in &self.demands {
            let tail = index[&self.holder[&d.message]];
            let head = index[&d.receiver];
            g.add_edge(tail, head).expect("holder differs from demander");
            provenance.push(d.clone());
        }
        (g, provenance)
    }

    /// Serializes to the instance text format.
    pub fn to_instance_text(&self) -> String {
        let mut out = String::new();
        for (r, side) in &self.receivers {
            out.push_str(&format!("receiver {r}\n"));
            out.push_str("side");
            for m in side {
                out.push_str(&format!(" {m}"));
            }
            out.push('\n');
            let demanded = self.demand_set(r);
            if !demanded.is_empty() {
                out.push_str("demand");
                for m in demanded {
                    out.push_str(&format!(" {m}"));
                }
                out.push('\n');
            }
        }
        out
    }
}

/// Parses an instance file: per receiver a `receiver <id>` line followed by
/// `side` and `demand` lines. `#` starts a comment.
pub fn parse_problem(text: &str) -> Result<DemandSupergraph> {
    let mut order: Vec<ReceiverId> = Vec::new();
    let mut sides: BTreeMap<ReceiverId, BTreeSet<MessageId>> = BTreeMap::new();
    let mut demands: Vec<(usize, DemandEdge)> = Vec::new();
    let mut holder: BTreeMap<MessageId, ReceiverId> = BTreeMap::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut tokens = content.split_whitespace();
        let keyword = tokens.next().unwrap_or_default();
        let args: Vec<&str> = tokens.collect();
        let syntax = |message: String| Error::Syntax { line, message };
        match keyword {
            "receiver" => {
                if args.len() != 1 {
                    return Err(syntax("expected `receiver <id>`".into()));
                }
                let r = ReceiverId::new(args[0]);
                if sides.contains_key(&r) {
                    return Err(syntax(Error::DuplicateReceiver(r.to_string()).to_string()));
                }
                sides.insert(r.clone(), BTreeSet::new());
                order.push(r);
            }
            "side" | "demand" => {
                let Some(current) = order.last() else {
                    return Err(syntax(format!("`{keyword}` before any `receiver` line")));
                };
                if args.is_empty() {
                    return Err(syntax(format!("`{keyword}` needs at least one message")));
                }
                for a in args {
                    let m = MessageId::new(a);
                    if keyword == "side" {
                        if let Some(prev) = holder.get(&m) {
                            return Err(Error::NonDisjointSideInfo {
                                message: m.to_string(),
                                first: prev.to_string(),
                                second: current.to_string(),
                            });
                        }
                        holder.insert(m.clone(), current.clone());
                        sides.get_mut(current).expect("declared").insert(m);
                    } else {
                        demands.push((line, DemandEdge::new(m, current.clone())));
                    }
                }
            }
            other => return Err(syntax(format!("unknown keyword `{other}`"))),
        }
    }

    // Demands are checked after all side lines are seen, so a receiver may
    // demand a message declared further down the file.
    for (_, d) in &demands {
        match holder.get(&d.message) {
            None => {
                return Err(Error::UnhousedDemandedMessage {
                    message: d.message.to_string(),
                    receiver: d.receiver.to_string(),
                })
            }
            Some(h) if *h == d.receiver => {
                return Err(Error::DemandInOwnSideInfo {
                    message: d.message.to_string(),
                    receiver: d.receiver.to_string(),
                })
            }
            Some(_) => {}
        }
    }
    DemandSupergraph::new(sides, demands.into_iter().map(|(_, d)| d))
}

/// A cycle `((x^{i_0}, i_1), (x^{i_1}, i_2), ..., (x^{i_{L-1}}, i_0))` of a supergraph.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SupergraphCycle {
    edges: Vec<DemandEdge>,
}

impl SupergraphCycle {
    pub fn new(g: &DemandSupergraph, edges: Vec<DemandEdge>) -> Result<Self> {
        if edges.is_empty() {
            return Err(Error::InvalidCycle("empty cycle".into()));
        }
        let mut seen_edges = BTreeSet::new();
        let mut seen_receivers = BTreeSet::new();
        for (k, e) in edges.iter().enumerate() {
            if !g.contains_demand(e) {
                return Err(Error::InvalidCycle(format!("{e} is not a demand edge")));
            }
            if !seen_edges.insert(e) {
                return Err(Error::InvalidCycle(format!("{e} repeated")));
            }
            let next = &edges[(k + 1) % edges.len()];
            if g.holder(&next.message) != Some(&e.receiver) {
                return Err(Error::InvalidCycle(format!(
                    "{e} ends at receiver {} which does not hold {}",
                    e.receiver, next.message
                )));
            }
            if !seen_receivers.insert(&e.receiver) {
                return Err(Error::InvalidCycle(format!(
                    "receiver {} visited twice",
                    e.receiver
                )));
            }
        }
        Ok(SupergraphCycle { edges })
    }

    pub(crate) fn from_trusted(edges: Vec<DemandEdge>) -> Self {
        SupergraphCycle { edges }
    }

    /// The same cycle rotated to start at its smallest message.
    pub fn canonical(mut self) -> Self {
        let start = (0..self.edges.len())
            .min_by(|&a, &b| self.edges[a].message.cmp(&self.edges[b].message))
            .unwrap_or(0);
        self.edges.rotate_left(start);
        self
    }

    pub fn edges(&self) -> &[DemandEdge] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Message subvertices the cycle starts edges from, in cycle order.
    pub fn messages(&self) -> impl Iterator<Item = &MessageId> {
        self.edges.iter().map(|e| &e.message)
    }

    /// Supervertices on the cycle, in cycle order starting from the head of the first edge.
    pub fn receivers(&self) -> impl Iterator<Item = &ReceiverId> {
        self.edges.iter().map(|e| &e.receiver)
    }
}

impl fmt::Display for SupergraphCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str(")")
    }
}

/// Reason a supergraph fails to be a generalized cycle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GcViolation {
    InDegreeMismatch {
        receiver: ReceiverId,
        in_degree: usize,
        side_info: usize,
    },
    DemandCount {
        message: MessageId,
        times: usize,
    },
    NotConnected {
        receiver: ReceiverId,
    },
}

impl fmt::Display for GcViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GcViolation::InDegreeMismatch {
                receiver,
                in_degree,
                side_info,
            } => write!(
                f,
                "in-degree of receiver {receiver} is {in_degree}, side information size is {side_info}"
            ),
            GcViolation::DemandCount { message, times } => {
                write!(f, "message {message} is demanded {times} times")
            }
            GcViolation::NotConnected { receiver } => {
                write!(f, "receiver {receiver} is not strongly connected to the rest")
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GcVerdict {
    pub violation: Option<GcViolation>,
}

impl GcVerdict {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// Checks the three generalized-cycle conditions.
///
/// The in-degree condition is checked first, then the demanded-exactly-once
/// condition, then strong connectivity of the holder graph. The witness is
/// the first violation in that order.
pub fn is_generalized_cycle(g: &DemandSupergraph) -> GcVerdict {
    for (r, side) in &g.receivers {
        let in_degree = g.in_degree(r);
        if in_degree != side.len() {
            return GcVerdict {
                violation: Some(GcViolation::InDegreeMismatch {
                    receiver: r.clone(),
                    in_degree,
                    side_info: side.len(),
                }),
            };
        }
    }
    let mut counts: BTreeMap<&MessageId, usize> = g.holder.keys().map(|m| (m, 0)).collect();
    for d in &g.demands {
        *counts.get_mut(&d.message).expect("validated") += 1;
    }
    if let Some((m, &times)) = counts.iter().find(|(_, &c)| c != 1) {
        return GcVerdict {
            violation: Some(GcViolation::DemandCount {
                message: (*m).clone(),
                times,
            }),
        };
    }
    let (hg, _) = g.holder_graph();
    if !graphs::strongly_connected(&hg) {
        let receiver = first_unreachable(&hg)
            .and_then(|i| g.receivers.keys().nth(i))
            .expect("some vertex is cut off")
            .clone();
        return GcVerdict {
            violation: Some(GcViolation::NotConnected { receiver }),
        };
    }
    GcVerdict { violation: None }
}

fn first_unreachable(g: &DirectedMultigraph) -> Option<usize> {
    let n = g.vertex_count();
    let mut fwd = vec![Vec::new(); n];
    let mut rev = vec![Vec::new(); n];
    for &(t, h) in g.edges() {
        fwd[t].push(h);
        rev[h].push(t);
    }
    let reach = |adj: &Vec<Vec<usize>>| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    };
    let (a, b) = (reach(&fwd), reach(&rev));
    (0..n).find(|&v| !a[v] || !b[v])
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) const EXAMPLE1: &str = "\
# nine messages, four receivers
receiver 1
side x3
demand x1
receiver 2
side x1 x5 x8
demand x2 x4 x7
receiver 3
side x2 x4 x6
demand x3 x5 x9
receiver 4
side x7 x9
demand x6 x8
";

    pub(crate) const TOY2: &str = "receiver 1\nside a\ndemand b\nreceiver 2\nside b\ndemand a\n";

    pub(crate) fn example1() -> DemandSupergraph {
        parse_problem(EXAMPLE1).unwrap()
    }

    #[test]
    fn parses_example1() {
        let g = example1();
        assert_eq!(g.receiver_count(), 4);
        assert_eq!(g.message_count(), 9);
        assert_eq!(g.demands().len(), 9);
        let msgs: Vec<&str> = g.messages().map(|m| m.as_str()).collect();
        assert_eq!(msgs, ["x1", "x2", "x3", "x4", "x5", "x6", "x7", "x8", "x9"]);
        assert_eq!(g.holder(&"x7".into()), Some(&ReceiverId::new("4")));
    }

    #[test]
    fn rejects_overlapping_side_info() {
        let err = parse_problem("receiver 1\nside a\nreceiver 2\nside a b\n").unwrap_err();
        assert!(matches!(err, Error::NonDisjointSideInfo { .. }));
    }

    #[test]
    fn rejects_demand_in_own_side_info() {
        let err = parse_problem("receiver 1\nside a\ndemand a\n").unwrap_err();
        assert!(matches!(err, Error::DemandInOwnSideInfo { .. }));
    }

    #[test]
    fn rejects_unhoused_demand() {
        let err = parse_problem("receiver 1\nside a\ndemand z\nreceiver 2\nside b\n").unwrap_err();
        assert_eq!(
            err,
            Error::UnhousedDemandedMessage {
                message: "z".into(),
                receiver: "1".into()
            }
        );
    }

    #[test]
    fn syntax_errors_report_line() {
        let err = parse_problem("receiver 1\nside a\nfoo bar\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
        let err = parse_problem("side a\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, .. }));
        let err = parse_problem("receiver 1\nside a\nreceiver 1\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 3, .. }));
    }

    #[test]
    fn forward_references_are_allowed() {
        let g = parse_problem(TOY2).unwrap();
        assert_eq!(g.demands().len(), 2);
    }

    #[test]
    fn natural_ordering_of_labels() {
        let mut v: Vec<MessageId> = ["x10", "x2", "x1", "y", "x02"].iter().map(|&s| s.into()).collect();
        v.sort();
        let s: Vec<&str> = v.iter().map(|m| m.as_str()).collect();
        assert_eq!(s, ["x1", "x02", "x2", "x10", "y"]);
    }

    #[test]
    fn round_trip() {
        let g = example1();
        assert_eq!(parse_problem(&g.to_instance_text()).unwrap(), g);
    }

    #[test]
    fn example1_is_generalized_cycle() {
        assert!(is_generalized_cycle(&example1()).holds());
        assert!(is_generalized_cycle(&parse_problem(TOY2).unwrap()).holds());
    }

    #[test]
    fn missing_edge_reports_in_degree() {
        let g = example1();
        let cut = g
            .with_demands(g.demands().iter().filter(|d| **d != DemandEdge::new("x1", "1")).cloned())
            .unwrap();
        let v = is_generalized_cycle(&cut);
        assert_eq!(
            v.violation,
            Some(GcViolation::InDegreeMismatch {
                receiver: "1".into(),
                in_degree: 0,
                side_info: 1
            })
        );
    }

    #[test]
    fn disconnected_supergraph() {
        let g = parse_problem(
            "receiver 1\nside a\ndemand b\nreceiver 2\nside b\ndemand a\n\
             receiver 3\nside c\ndemand d\nreceiver 4\nside d\ndemand c\n",
        )
        .unwrap();
        let v = is_generalized_cycle(&g);
        assert_eq!(v.violation, Some(GcViolation::NotConnected { receiver: "3".into() }));
    }

    #[test]
    fn message_demanded_twice() {
        // in-degrees all match, but c is demanded twice and b never
        let g = parse_problem(
            "receiver 1\nside a\ndemand c\nreceiver 2\nside b\ndemand c\nreceiver 3\nside c\ndemand a\n",
        )
        .unwrap();
        assert_eq!(
            is_generalized_cycle(&g).violation,
            Some(GcViolation::DemandCount { message: "b".into(), times: 0 })
        );
    }

    #[test]
    fn supergraph_cycle_validation() {
        let g = example1();
        let c1 = vec![
            DemandEdge::new("x1", "1"),
            DemandEdge::new("x3", "3"),
            DemandEdge::new("x2", "2"),
        ];
        let c = SupergraphCycle::new(&g, c1).unwrap();
        assert_eq!(c.len(), 3);
        let bad = vec![DemandEdge::new("x1", "1"), DemandEdge::new("x2", "2")];
        assert!(SupergraphCycle::new(&g, bad).is_err());
        let revisit = vec![
            DemandEdge::new("x5", "3"),
            DemandEdge::new("x2", "2"),
            DemandEdge::new("x5", "3"),
            DemandEdge::new("x4", "2"),
        ];
        assert!(SupergraphCycle::new(&g, revisit).is_err());
    }

    #[test]
    fn empty_side_info_is_rejected() {
        let err = parse_problem("receiver 1\nside a\nreceiver 2\ndemand a\n").unwrap_err();
        assert_eq!(err, Error::EmptySideInfo("2".into()));
    }
}
