//! Structural analysis: per-edge disconnect sets, maximum-disconnectivity κ,
//! the 𝒜/ℬ/𝒞 classification of maximum-disconnecting edges, connectivity and
//! shortcut predicates.

use std::collections::BTreeMap;

use crate::multigraph::{EdgeId, GraphError, NodeId, SumNetwork};

/// The set of (source index, terminal index) pairs a single edge removal
/// disconnects. Only pairs connected in the original network can appear.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DisconnectSet {
    pub edge: EdgeId,
    pub pairs: Vec<(usize, usize)>,
}

/// Class tags for a maximum-disconnecting edge:
/// - `a`: at most one terminal is reachable (or equal) from its head,
/// - `b`: at most one source reaches (or equals) its tail,
/// - `c`: at least two sources reach its tail and at least two terminals are
///   reachable from its head.
///
/// Source/terminal nodes count themselves via the zero-length path, so an
/// edge leaving s1 always has s1 "reaching" its tail.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AbcClass {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

/// Full structural report for a network.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalysisReport {
    pub kappa: u32,
    pub disconnect: Vec<DisconnectSet>,
    pub max_disconnecting: Vec<EdgeId>,
    pub abc: BTreeMap<EdgeId, AbcClass>,
    pub connected: bool,
}

/// Exact set of source-terminal pairs disconnected by removing `e`.
pub fn disconnect_set(net: &SumNetwork, e: EdgeId) -> Result<DisconnectSet, GraphError> {
    net.edge(e)?;
    let without = net.remove_edges(&[e])?;
    let mut pairs = Vec::new();
    for (i, &s) in net.sources().iter().enumerate() {
        let before = net.reach_set(s)?;
        let after = without.reach_set(s)?;
        for (j, &t) in net.terminals().iter().enumerate() {
            if before[t.0 as usize] && !after[t.0 as usize] {
                pairs.push((i, j));
            }
        }
    }
    Ok(DisconnectSet { edge: e, pairs })
}

/// Maximum-disconnectivity: the largest number of source-terminal pairs any
/// single edge removal disconnects. Pairs not connected in the original
/// network are never counted.
pub fn kappa(net: &SumNetwork) -> u32 {
    net.edges()
        .iter()
        .map(|e| {
            disconnect_set(net, e.id)
                .expect("edge taken from the network")
                .pairs
                .len() as u32
        })
        .max()
        .unwrap_or(0)
}

/// Edges attaining κ. When κ = 0 every edge qualifies.
pub fn max_disconnecting_edges(net: &SumNetwork) -> Vec<EdgeId> {
    let k = kappa(net);
    net.edges()
        .iter()
        .filter(|e| {
            disconnect_set(net, e.id)
                .expect("edge taken from the network")
                .pairs
                .len() as u32
                == k
        })
        .map(|e| e.id)
        .collect()
}

/// 𝒜/ℬ/𝒞 membership for every maximum-disconnecting edge, by
/// reachability-or-equality counts from sources to the tail and from the head
/// to terminals.
pub fn classify_abc(net: &SumNetwork) -> BTreeMap<EdgeId, AbcClass> {
    let mut map = BTreeMap::new();
    for id in max_disconnecting_edges(net) {
        let e = net.edge(id).expect("edge taken from the network");
        let sources_to_tail = net
            .sources()
            .iter()
            .filter(|&&s| net.reaches_or_equal(s, e.tail).expect("nodes in net"))
            .count();
        let head_to_terminals = net
            .terminals()
            .iter()
            .filter(|&&t| net.reaches_or_equal(e.head, t).expect("nodes in net"))
            .count();
        map.insert(
            id,
            AbcClass {
                a: head_to_terminals <= 1,
                b: sources_to_tail <= 1,
                c: sources_to_tail >= 2 && head_to_terminals >= 2,
            },
        );
    }
    map
}

/// True iff every source reaches every terminal.
pub fn is_connected_sum_network(net: &SumNetwork) -> bool {
    net.sources().iter().all(|&s| {
        let reach = net.reach_set(s).expect("source in net");
        net.terminals().iter().all(|&t| reach[t.0 as usize])
    })
}

/// A node through which enough source-terminal traffic can be funneled to
/// route the sum directly: either all sources reach it and it reaches at
/// least two terminals, or at least two sources reach it and it reaches all
/// terminals (reachability-or-equality in both cases). Such a node makes the
/// network solvable over every field. Returns the lowest-id hub, if any.
///
/// A source-to-source or terminal-to-terminal path makes the reached source
/// (or the reaching terminal) a hub under the equality convention, so that
/// shortcut is subsumed by this check.
pub fn find_hub_node(net: &SumNetwork) -> Option<NodeId> {
    let l = net.sources().len();
    let j = net.terminals().len();
    net.nodes().find(|&v| {
        let srcs = net
            .sources()
            .iter()
            .filter(|&&s| net.reaches_or_equal(s, v).expect("nodes in net"))
            .count();
        let terms = net
            .terminals()
            .iter()
            .filter(|&&t| net.reaches_or_equal(v, t).expect("nodes in net"))
            .count();
        (srcs == l && terms >= 2) || (srcs >= 2 && terms == j)
    })
}

/// Add one fresh parallel edge alongside each listed edge.
pub fn augment_parallel(net: &SumNetwork, edges: &[EdgeId]) -> Result<SumNetwork, GraphError> {
    net.with_parallel_edges(edges)
}

/// Bundle of every analysis this module offers, as the CLI reports it.
pub fn analyze(net: &SumNetwork) -> AnalysisReport {
    let disconnect: Vec<DisconnectSet> = net
        .edges()
        .iter()
        .map(|e| disconnect_set(net, e.id).expect("edge taken from the network"))
        .collect();
    let kappa = disconnect.iter().map(|d| d.pairs.len() as u32).max().unwrap_or(0);
    let max_disconnecting: Vec<EdgeId> = disconnect
        .iter()
        .filter(|d| d.pairs.len() as u32 == kappa)
        .map(|d| d.edge)
        .collect();
    AnalysisReport {
        kappa,
        max_disconnecting,
        abc: classify_abc(net),
        connected: is_connected_sum_network(net),
        disconnect,
    }
}
