//! The network file format: one declaration per line, `#` starts a comment.
//!
//! ```text
//! node <name> [source|terminal]
//! edge <name> <tail> <head>
//! ```
//!
//! Names are arbitrary non-whitespace tokens; node and edge names live in
//! separate namespaces. Exactly three sources and three terminals are
//! required. Nodes may be referenced before their declaration line.

use std::collections::BTreeMap;

use sumnet::multigraph::{EdgeId, NodeId, SumNetwork};

use crate::CliError;

/// A network together with the user-facing names of its nodes and edges.
/// Reports and code files always speak in these names, never internal ids.
#[derive(Debug, Clone)]
pub struct NamedNetwork {
    pub net: SumNetwork,
    node_names: Vec<String>,
    edge_names: Vec<String>,
    nodes_by_name: BTreeMap<String, NodeId>,
    edges_by_name: BTreeMap<String, EdgeId>,
}

impl NamedNetwork {
    pub fn node_name(&self, id: NodeId) -> &str {
        &self.node_names[id.0 as usize]
    }

    pub fn edge_name(&self, id: EdgeId) -> &str {
        &self.edge_names[id.0 as usize]
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.nodes_by_name.get(name).copied()
    }

    pub fn edge_by_name(&self, name: &str) -> Option<EdgeId> {
        self.edges_by_name.get(name).copied()
    }

    /// Wrap a bare network in canonical names: nodes `v0, v1, …` and edges
    /// `e0, e1, …` by id. Requires the dense ids produced by construction
    /// (not by edge removal).
    pub fn with_canonical_names(net: SumNetwork) -> NamedNetwork {
        let node_names: Vec<String> = (0..net.node_count()).map(|i| format!("v{i}")).collect();
        let edge_names: Vec<String> = (0..net.edges().len()).map(|i| format!("e{i}")).collect();
        assert!(
            net.edges().iter().all(|e| (e.id.0 as usize) < edge_names.len()),
            "canonical naming requires dense edge ids"
        );
        let nodes_by_name = node_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), NodeId(i as u32)))
            .collect();
        let edges_by_name = edge_names
            .iter()
            .enumerate()
            .map(|(i, n)| (n.clone(), EdgeId(i as u32)))
            .collect();
        NamedNetwork { net, node_names, edge_names, nodes_by_name, edges_by_name }
    }
}

/// Split a line into (1-based column, token) pairs, `#` comments stripped.
fn tokenize(line: &str) -> Vec<(usize, &str)> {
    let body = line.split('#').next().unwrap_or("");
    let mut tokens = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                tokens.push((s + 1, &body[s..i]));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        tokens.push((s + 1, &body[s..]));
    }
    tokens
}

pub fn parse_network(text: &str) -> Result<NamedNetwork, CliError> {
    struct EdgeDecl {
        line: usize,
        name: (usize, String),
        tail: (usize, String),
        head: (usize, String),
    }
    let mut node_names: Vec<String> = Vec::new();
    let mut nodes_by_name: BTreeMap<String, NodeId> = BTreeMap::new();
    let mut sources: Vec<u32> = Vec::new();
    let mut terminals: Vec<u32> = Vec::new();
    let mut edge_decls: Vec<EdgeDecl> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens = tokenize(raw);
        let parse_err = |col: usize, message: String| CliError::Parse { line, col, message };
        let Some(&(first_col, directive)) = tokens.first() else {
            continue;
        };
        match directive {
            "node" => {
                if tokens.len() < 2 || tokens.len() > 3 {
                    return Err(parse_err(
                        first_col,
                        "expected `node <name> [source|terminal]`".into(),
                    ));
                }
                let (name_col, name) = tokens[1];
                if nodes_by_name.contains_key(name) {
                    return Err(parse_err(name_col, format!("duplicate node name `{name}`")));
                }
                let id = NodeId(node_names.len() as u32);
                match tokens.get(2) {
                    None => {}
                    Some(&(_, "source")) => sources.push(id.0),
                    Some(&(_, "terminal")) => terminals.push(id.0),
                    Some(&(col, role)) => {
                        return Err(parse_err(
                            col,
                            format!("unknown role `{role}` (expected `source` or `terminal`)"),
                        ));
                    }
                }
                nodes_by_name.insert(name.to_string(), id);
                node_names.push(name.to_string());
            }
            "edge" => {
                if tokens.len() != 4 {
                    return Err(parse_err(
                        first_col,
                        "expected `edge <name> <tail> <head>`".into(),
                    ));
                }
                edge_decls.push(EdgeDecl {
                    line,
                    name: (tokens[1].0, tokens[1].1.to_string()),
                    tail: (tokens[2].0, tokens[2].1.to_string()),
                    head: (tokens[3].0, tokens[3].1.to_string()),
                });
            }
            other => {
                return Err(parse_err(
                    first_col,
                    format!("unknown directive `{other}` (expected `node` or `edge`)"),
                ));
            }
        }
    }

    let mut edge_names: Vec<String> = Vec::new();
    let mut edges_by_name: BTreeMap<String, EdgeId> = BTreeMap::new();
    let mut pairs: Vec<(u32, u32)> = Vec::new();
    for decl in &edge_decls {
        let parse_err = |col: usize, message: String| CliError::Parse {
            line: decl.line,
            col,
            message,
        };
        let (name_col, name) = (&decl.name.0, &decl.name.1);
        if edges_by_name.contains_key(name.as_str()) {
            return Err(parse_err(*name_col, format!("duplicate edge name `{name}`")));
        }
        let resolve = |(col, ref token): &(usize, String)| {
            nodes_by_name
                .get(token.as_str())
                .copied()
                .ok_or_else(|| parse_err(*col, format!("unknown node `{token}`")))
        };
        let tail = resolve(&decl.tail)?;
        let head = resolve(&decl.head)?;
        edges_by_name.insert(name.clone(), EdgeId(edge_names.len() as u32));
        edge_names.push(name.clone());
        pairs.push((tail.0, head.0));
    }

    if sources.len() != 3 {
        return Err(CliError::Validation(format!(
            "expected exactly 3 source nodes, found {}",
            sources.len()
        )));
    }
    if terminals.len() != 3 {
        return Err(CliError::Validation(format!(
            "expected exactly 3 terminal nodes, found {}",
            terminals.len()
        )));
    }
    let net = SumNetwork::new(node_names.len() as u32, &pairs, &sources, &terminals)
        .map_err(|e| CliError::Validation(e.to_string()))?;
    Ok(NamedNetwork { net, node_names, edge_names, nodes_by_name, edges_by_name })
}

/// Render a network file. Nodes appear in id order with their roles, then
/// edges in id order — the parse/render round trip preserves structure, and
/// rendering is byte-deterministic.
pub fn render_network(named: &NamedNetwork) -> String {
    let net = &named.net;
    let mut out = String::new();
    for (i, name) in named.node_names.iter().enumerate() {
        let id = NodeId(i as u32);
        let role = if net.is_source(id) {
            " source"
        } else if net.is_terminal(id) {
            " terminal"
        } else {
            ""
        };
        out.push_str(&format!("node {name}{role}\n"));
    }
    for e in net.edges() {
        out.push_str(&format!(
            "edge {} {} {}\n",
            named.edge_name(e.id),
            named.node_name(e.tail),
            named.node_name(e.head),
        ));
    }
    out
}
