//! Directed acyclic multigraph representation with reachability,
//! ancestor/descendant queries, Γ-set computation, and edge mincut.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("the edge set induces a directed cycle")]
    CycleDetected,
    #[error("unknown node {0:?}")]
    UnknownNode(NodeId),
    #[error("unknown edge {0:?}")]
    UnknownEdge(EdgeId),
    #[error("self-loop on node {0:?}")]
    SelfLoop(NodeId),
    #[error("sources and terminals must be disjoint, nonempty, and distinct")]
    BadSourceTerminalLists,
}

/// Opaque node handle. Nodes of a network are numbered 0..node_count and
/// remain stable across edge insertions and removals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NodeId(pub u32);

/// Opaque edge handle. Parallel edges get distinct ids; ids are stable across
/// removals and reversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub u32);

/// An ordered pair of distinct nodes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NodePair {
    pub from: NodeId,
    pub to: NodeId,
}

impl NodePair {
    pub fn new(from: NodeId, to: NodeId) -> Option<NodePair> {
        if from == to {
            None
        } else {
            Some(NodePair { from, to })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub id: EdgeId,
    pub tail: NodeId,
    pub head: NodeId,
}

/// A sum-network: a DAG multigraph with designated source and terminal nodes.
/// Values are immutable after construction; removal, reversal, and
/// augmentation return new networks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumNetwork {
    node_count: u32,
    edges: Vec<Edge>,
    sources: Vec<NodeId>,
    terminals: Vec<NodeId>,
    next_edge_id: u32,
    // out[v] / inc[v]: indices into `edges`, ascending EdgeId.
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
}

impl SumNetwork {
    /// Build a network from raw parts. `edges` pairs are (tail, head) over
    /// nodes 0..node_count; edge ids are assigned in list order.
    pub fn new(
        node_count: u32,
        edge_pairs: &[(u32, u32)],
        sources: &[u32],
        terminals: &[u32],
    ) -> Result<SumNetwork, GraphError> {
        let edges: Vec<Edge> = edge_pairs
            .iter()
            .enumerate()
            .map(|(i, &(t, h))| Edge {
                id: EdgeId(i as u32),
                tail: NodeId(t),
                head: NodeId(h),
            })
            .collect();
        let sources: Vec<NodeId> = sources.iter().map(|&v| NodeId(v)).collect();
        let terminals: Vec<NodeId> = terminals.iter().map(|&v| NodeId(v)).collect();
        Self::from_parts(node_count, edges, sources, terminals)
    }

    fn from_parts(
        node_count: u32,
        edges: Vec<Edge>,
        sources: Vec<NodeId>,
        terminals: Vec<NodeId>,
    ) -> Result<SumNetwork, GraphError> {
        for e in &edges {
            if e.tail.0 >= node_count {
                return Err(GraphError::UnknownNode(e.tail));
            }
            if e.head.0 >= node_count {
                return Err(GraphError::UnknownNode(e.head));
            }
            if e.tail == e.head {
                return Err(GraphError::SelfLoop(e.tail));
            }
        }
        if sources.is_empty() || terminals.is_empty() {
            return Err(GraphError::BadSourceTerminalLists);
        }
        let mut seen = vec![false; node_count as usize];
        for v in sources.iter().chain(terminals.iter()) {
            if v.0 >= node_count {
                return Err(GraphError::UnknownNode(*v));
            }
            if seen[v.0 as usize] {
                return Err(GraphError::BadSourceTerminalLists);
            }
            seen[v.0 as usize] = true;
        }
        let next_edge_id = edges.iter().map(|e| e.id.0 + 1).max().unwrap_or(0);
        let mut net = SumNetwork {
            node_count,
            edges,
            sources,
            terminals,
            next_edge_id,
            out: Vec::new(),
            inc: Vec::new(),
        };
        net.edges.sort_by_key(|e| e.id);
        net.rebuild_adjacency();
        // Validate acyclicity by attempting a topological order.
        net.topological_order_checked()?;
        Ok(net)
    }

    fn rebuild_adjacency(&mut self) {
        let n = self.node_count as usize;
        self.out = vec![Vec::new(); n];
        self.inc = vec![Vec::new(); n];
        for (i, e) in self.edges.iter().enumerate() {
            self.out[e.tail.0 as usize].push(i);
            self.inc[e.head.0 as usize].push(i);
        }
    }

    pub fn node_count(&self) -> u32 {
        self.node_count
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        (0..self.node_count).map(NodeId)
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> Result<&Edge, GraphError> {
        self.edges
            .iter()
            .find(|e| e.id == id)
            .ok_or(GraphError::UnknownEdge(id))
    }

    pub fn sources(&self) -> &[NodeId] {
        &self.sources
    }

    pub fn terminals(&self) -> &[NodeId] {
        &self.terminals
    }

    pub fn is_source(&self, v: NodeId) -> bool {
        self.sources.contains(&v)
    }

    pub fn is_terminal(&self, v: NodeId) -> bool {
        self.terminals.contains(&v)
    }

    /// In-edges of a node, ascending EdgeId.
    pub fn in_edges(&self, v: NodeId) -> Vec<&Edge> {
        self.inc[v.0 as usize].iter().map(|&i| &self.edges[i]).collect()
    }

    /// Out-edges of a node, ascending EdgeId.
    pub fn out_edges(&self, v: NodeId) -> Vec<&Edge> {
        self.out[v.0 as usize].iter().map(|&i| &self.edges[i]).collect()
    }

    fn check_node(&self, v: NodeId) -> Result<(), GraphError> {
        if v.0 < self.node_count {
            Ok(())
        } else {
            Err(GraphError::UnknownNode(v))
        }
    }

    fn topological_order_checked(&self) -> Result<Vec<NodeId>, GraphError> {
        let n = self.node_count as usize;
        let mut indeg = vec![0usize; n];
        for e in &self.edges {
            indeg[e.head.0 as usize] += 1;
        }
        // Kahn's algorithm, always taking the smallest ready node id so the
        // order is deterministic.
        let mut ready: Vec<usize> = (0..n).filter(|&v| indeg[v] == 0).collect();
        ready.sort_unstable_by(|a, b| b.cmp(a)); // descending; pop() yields smallest
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop() {
            order.push(NodeId(v as u32));
            let mut unlocked = Vec::new();
            for &i in &self.out[v] {
                let h = self.edges[i].head.0 as usize;
                indeg[h] -= 1;
                if indeg[h] == 0 {
                    unlocked.push(h);
                }
            }
            unlocked.sort_unstable();
            unlocked.dedup();
            for h in unlocked.into_iter().rev() {
                ready.push(h);
            }
            ready.sort_unstable_by(|a, b| b.cmp(a));
        }
        if order.len() == n {
            Ok(order)
        } else {
            Err(GraphError::CycleDetected)
        }
    }

    /// Total order in which every edge's tail precedes its head. Acyclicity
    /// is a construction invariant, so this cannot fail on a built network.
    pub fn topological_order(&self) -> Vec<NodeId> {
        self.topological_order_checked()
            .expect("networks are validated acyclic at construction")
    }

    /// All nodes reachable from `from` by a directed path with at least one
    /// edge. `from` itself is included only if some cycle would return to it,
    /// which acyclicity rules out - so `from` is never included.
    pub fn reach_set(&self, from: NodeId) -> Result<Vec<bool>, GraphError> {
        self.check_node(from)?;
        let mut seen = vec![false; self.node_count as usize];
        let mut stack: Vec<usize> = self.out[from.0 as usize]
            .iter()
            .map(|&i| self.edges[i].head.0 as usize)
            .collect();
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            for &i in &self.out[v] {
                let h = self.edges[i].head.0 as usize;
                if !seen[h] {
                    stack.push(h);
                }
            }
        }
        Ok(seen)
    }

    /// True iff a directed path with ≥1 edge exists from `from` to `to`.
    /// A node never reaches itself.
    pub fn reachable(&self, from: NodeId, to: NodeId) -> Result<bool, GraphError> {
        self.check_node(to)?;
        Ok(self.reach_set(from)?[to.0 as usize])
    }

    /// Reachability extended with the zero-length path: u reaches-or-equals v
    /// iff u = v or u → v.
    pub fn reaches_or_equal(&self, from: NodeId, to: NodeId) -> Result<bool, GraphError> {
        Ok(from == to || self.reachable(from, to)?)
    }

    /// Γ-set: all nodes reachable from every node of `a` and reaching every
    /// node of `b`. With `a` empty this is the common-ancestor set of `b`;
    /// with `b` empty, the common-descendant set of `a`.
    pub fn gamma(&self, a: &[NodeId], b: &[NodeId]) -> Result<Vec<NodeId>, GraphError> {
        for v in a.iter().chain(b.iter()) {
            self.check_node(*v)?;
        }
        let down: Vec<Vec<bool>> = a
            .iter()
            .map(|&v| self.reach_set(v))
            .collect::<Result<_, _>>()?;
        let mut result = Vec::new();
        'node: for v in self.nodes() {
            for set in &down {
                if !set[v.0 as usize] {
                    continue 'node;
                }
            }
            let up = self.reach_set(v)?;
            for &t in b {
                if !up[t.0 as usize] {
                    continue 'node;
                }
            }
            result.push(v);
        }
        Ok(result)
    }

    /// Least number of edges whose removal leaves no path from any node of
    /// `a` to any node of `b`. Computed as unit-capacity max-flow from a
    /// virtual super-source to a virtual super-sink, with the virtual arcs
    /// given capacity |E|+1 (effectively infinite).
    ///
    /// `a` and `b` must be nonempty and disjoint.
    pub fn mincut(&self, a: &[NodeId], b: &[NodeId]) -> Result<u32, GraphError> {
        for v in a.iter().chain(b.iter()) {
            self.check_node(*v)?;
        }
        assert!(
            !a.is_empty() && !b.is_empty() && a.iter().all(|v| !b.contains(v)),
            "mincut requires nonempty disjoint node sets"
        );
        let n = self.node_count as usize;
        let s = n;
        let t = n + 1;
        let inf = self.edges.len() as i64 + 1;
        let mut flow = FlowNetwork::new(n + 2);
        for e in &self.edges {
            flow.add_arc(e.tail.0 as usize, e.head.0 as usize, 1);
        }
        for &v in a {
            flow.add_arc(s, v.0 as usize, inf);
        }
        for &v in b {
            flow.add_arc(v.0 as usize, t, inf);
        }
        Ok(flow.max_flow(s, t) as u32)
    }

    /// The reverse network: every edge flipped (same id), sources and
    /// terminals interchanged.
    pub fn reverse(&self) -> SumNetwork {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge { id: e.id, tail: e.head, head: e.tail })
            .collect();
        SumNetwork::from_parts(
            self.node_count,
            edges,
            self.terminals.clone(),
            self.sources.clone(),
        )
        .expect("reversing a DAG yields a DAG")
    }

    /// Copy of the network without the given edges; nodes retained.
    pub fn remove_edges(&self, removed: &[EdgeId]) -> Result<SumNetwork, GraphError> {
        for &id in removed {
            self.edge(id)?;
        }
        let edges = self
            .edges
            .iter()
            .filter(|e| !removed.contains(&e.id))
            .copied()
            .collect();
        Ok(SumNetwork::from_parts(
            self.node_count,
            edges,
            self.sources.clone(),
            self.terminals.clone(),
        )
        .expect("removing edges preserves validity"))
    }

    /// Copy of the network with one fresh parallel edge (same tail/head)
    /// added alongside each listed edge. Fresh ids are assigned in list
    /// order, above all existing ids.
    pub fn with_parallel_edges(&self, doubled: &[EdgeId]) -> Result<SumNetwork, GraphError> {
        let mut edges = self.edges.clone();
        for (next, &id) in (self.next_edge_id..).zip(doubled) {
            let e = *self.edge(id)?;
            edges.push(Edge { id: EdgeId(next), tail: e.tail, head: e.head });
        }
        Ok(SumNetwork::from_parts(
            self.node_count,
            edges,
            self.sources.clone(),
            self.terminals.clone(),
        )
        .expect("parallel copies of existing edges preserve validity"))
    }
}

/// Minimal Edmonds-Karp max-flow on a small integer-capacity network.
struct FlowNetwork {
    // arcs[i] = (to, capacity); arcs come in residual pairs (i ^ 1).
    arcs: Vec<(usize, i64)>,
    adj: Vec<Vec<usize>>,
}

impl FlowNetwork {
    fn new(n: usize) -> FlowNetwork {
        FlowNetwork { arcs: Vec::new(), adj: vec![Vec::new(); n] }
    }

    fn add_arc(&mut self, from: usize, to: usize, cap: i64) {
        self.adj[from].push(self.arcs.len());
        self.arcs.push((to, cap));
        self.adj[to].push(self.arcs.len());
        self.arcs.push((from, 0));
    }

    fn max_flow(&mut self, s: usize, t: usize) -> i64 {
        let mut total = 0;
        loop {
            // BFS for a shortest augmenting path.
            let mut prev_arc = vec![usize::MAX; self.adj.len()];
            let mut queue = std::collections::VecDeque::new();
            queue.push_back(s);
            let mut reached = vec![false; self.adj.len()];
            reached[s] = true;
            while let Some(v) = queue.pop_front() {
                for &ai in &self.adj[v] {
                    let (to, cap) = self.arcs[ai];
                    if cap > 0 && !reached[to] {
                        reached[to] = true;
                        prev_arc[to] = ai;
                        queue.push_back(to);
                    }
                }
            }
            if !reached[t] {
                return total;
            }
            // Find bottleneck along the path.
            let mut bottleneck = i64::MAX;
            let mut v = t;
            while v != s {
                let ai = prev_arc[v];
                bottleneck = bottleneck.min(self.arcs[ai].1);
                v = self.arcs[ai ^ 1].0;
            }
            let mut v = t;
            while v != s {
                let ai = prev_arc[v];
                self.arcs[ai].1 -= bottleneck;
                self.arcs[ai ^ 1].1 += bottleneck;
                v = self.arcs[ai ^ 1].0;
            }
            total += bottleneck;
        }
    }
}
