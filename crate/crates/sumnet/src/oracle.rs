//! Ground-truth machinery: exhaustive enumeration of scalar linear codes on
//! small networks, and seeded random generation of 3s/3t test networks.
//!
//! The enumerator here is deliberately plain — a single odometer over every
//! coefficient slot with eliminated decoders — so it can serve as the
//! independent referee for the classifier and the search heuristics.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::analysis;
use crate::gf::{FieldElement, PrimeField};
use crate::multigraph::{EdgeId, NodeId, SumNetwork};
use crate::netcode::{self, EdgeMap, ScalarLinearCode};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("{slots} coefficient slots exceed the exhaustion cap of {cap}")]
    SearchSpaceTooLarge { slots: u32, cap: u32 },
    #[error("network generation failed: {0}")]
    GenerationFailed(String),
}

/// Parameters for seeded random network generation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorConfig {
    /// Maximum number of nodes (at least 6: three sources, three terminals).
    pub node_budget: u32,
    /// Maximum number of edges.
    pub edge_budget: u32,
    pub seed: u64,
    /// Reject samples until every source reaches every terminal.
    pub ensure_connected: bool,
    /// Reject samples until κ equals this value.
    pub ensure_kappa: Option<u32>,
}

/// Largest slot count the exhaustive oracle accepts for a field: the space
/// p^slots stays near 2^14.
pub fn slot_cap(field: PrimeField) -> u32 {
    match field.modulus() {
        2 => 14,
        3 => 10,
        5 => 6,
        7 => 5,
        p => {
            let mut cap = 0;
            let mut space: u64 = 1;
            while space.saturating_mul(p) <= 1 << 14 {
                space *= p;
                cap += 1;
            }
            cap
        }
    }
}

/// Inputs of one edge: the tail's source symbol (if the tail is a source)
/// and each in-edge of the tail.
fn inputs_of(net: &SumNetwork, id: EdgeId) -> (bool, Vec<EdgeId>) {
    let e = net.edge(id).expect("edge exists");
    (
        net.is_source(e.tail),
        net.in_edges(e.tail).iter().map(|f| f.id).collect(),
    )
}

/// Number of enumerated coefficient slots: every input of every edge with
/// two or more inputs. Single-input edges are normalized to coefficient 1
/// (scaling an edge's only input is absorbed downstream without changing
/// code existence).
pub fn coefficient_slots(net: &SumNetwork) -> u32 {
    net.edges()
        .iter()
        .map(|e| {
            let (src, ins) = inputs_of(net, e.id);
            let count = usize::from(src) + ins.len();
            if count >= 2 {
                count as u32
            } else {
                0
            }
        })
        .sum()
}

/// Exhaustively decide scalar solvability over `field`, using the default
/// slot cap for that field. Returns the lexicographically least passing code
/// (slot order: ascending edge id, source symbol before in-edges ascending;
/// values ascending), or None after complete enumeration.
pub fn brute_force_solvable(
    net: &SumNetwork,
    field: PrimeField,
) -> Result<Option<ScalarLinearCode>, OracleError> {
    brute_force_solvable_capped(net, field, slot_cap(field))
}

/// `brute_force_solvable` with an explicit slot cap.
pub fn brute_force_solvable_capped(
    net: &SumNetwork,
    field: PrimeField,
    cap: u32,
) -> Result<Option<ScalarLinearCode>, OracleError> {
    assert_eq!(net.sources().len(), 3, "oracle requires 3 sources");
    assert_eq!(net.terminals().len(), 3, "oracle requires 3 terminals");
    let slots = coefficient_slots(net);
    if slots > cap {
        return Err(OracleError::SearchSpaceTooLarge { slots, cap });
    }

    let f = field;
    let p = f.modulus();
    // Slot layout, edge by edge in ascending id order.
    struct EdgeSlots {
        id: EdgeId,
        source: bool,
        ins: Vec<EdgeId>,
        /// Index of this edge's first slot, or None when normalized to 1.
        first_slot: Option<usize>,
    }
    let mut layout = Vec::new();
    let mut total = 0usize;
    for e in net.edges() {
        let (source, ins) = inputs_of(net, e.id);
        let count = usize::from(source) + ins.len();
        let first_slot = (count >= 2).then(|| {
            let s = total;
            total += count;
            s
        });
        layout.push(EdgeSlots { id: e.id, source, ins, first_slot });
    }

    let topo_pos: BTreeMap<NodeId, usize> = net
        .topological_order()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut eval_order: Vec<usize> = (0..layout.len()).collect();
    eval_order.sort_by_key(|&i| {
        let e = net.edge(layout[i].id).expect("edge exists");
        (topo_pos[&e.tail], e.id)
    });
    let source_index: BTreeMap<NodeId, usize> = net
        .sources()
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();
    let pos_of: BTreeMap<EdgeId, usize> = layout
        .iter()
        .enumerate()
        .map(|(i, s)| (s.id, i))
        .collect();

    let mut slots_v = vec![0u64; total];
    loop {
        // Transfer vectors under the current assignment.
        let mut transfers = vec![[0u64; 3]; layout.len()];
        for &ei in &eval_order {
            let es = &layout[ei];
            let mut cursor = es.first_slot;
            let mut next = || -> u64 {
                match cursor {
                    Some(s) => {
                        cursor = Some(s + 1);
                        slots_v[s]
                    }
                    None => 1,
                }
            };
            let mut acc = [0u64; 3];
            if es.source {
                let tail = net.edge(es.id).expect("edge exists").tail;
                let i = source_index[&tail];
                acc[i] = f.add_raw(acc[i], next());
            }
            for fid in &es.ins {
                let c = next();
                let t = transfers[pos_of[fid]];
                for k in 0..3 {
                    acc[k] = f.add_raw(acc[k], f.mul_raw(c, t[k]));
                }
            }
            transfers[ei] = acc;
        }

        // A decoder per terminal, by elimination.
        let mut decoders = Vec::with_capacity(3);
        for &t in net.terminals() {
            let in_ids: Vec<EdgeId> = net.in_edges(t).iter().map(|e| e.id).collect();
            let rows: Vec<Vec<u64>> = (0..3)
                .map(|coord| {
                    in_ids.iter().map(|id| transfers[pos_of[id]][coord]).collect()
                })
                .collect();
            match netcode::solve_linear(&rows, &[1, 1, 1], f) {
                Some(d) => decoders.push(
                    in_ids
                        .iter()
                        .zip(d)
                        .map(|(id, v)| (*id, f.elem(v)))
                        .collect::<BTreeMap<EdgeId, FieldElement>>(),
                ),
                None => break,
            }
        }
        if decoders.len() == 3 {
            let edge_maps = layout
                .iter()
                .map(|es| {
                    let mut cursor = es.first_slot;
                    let mut next = || -> u64 {
                        match cursor {
                            Some(s) => {
                                cursor = Some(s + 1);
                                slots_v[s]
                            }
                            None => 1,
                        }
                    };
                    let source_coef = es.source.then(|| f.elem(next()));
                    let in_coefs = es
                        .ins
                        .iter()
                        .map(|fid| (*fid, f.elem(next())))
                        .collect();
                    (es.id, EdgeMap { source_coef, in_coefs })
                })
                .collect();
            let code = ScalarLinearCode { field: f, edge_maps, decoders };
            debug_assert_eq!(netcode::verify_exhaustive(net, &code), Ok(true));
            return Ok(Some(code));
        }

        // Lexicographic odometer, rightmost slot fastest.
        let mut i = total;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            slots_v[i] += 1;
            if slots_v[i] < p {
                break;
            }
            slots_v[i] = 0;
        }
    }
}

/// Generate a random 3s/3t sum-network: a layered DAG (three sources, up to
/// two internal layers, three terminals) with edges only from earlier to
/// later layers, so sources have no in-edges and terminals no out-edges.
/// Every source gets an out-edge, every terminal an in-edge, and every
/// internal node both. Deterministic for a given config; `ensure_connected`
/// and `ensure_kappa` reject and resample up to 10,000 times.
pub fn generate_random(config: &GeneratorConfig) -> Result<SumNetwork, OracleError> {
    if config.node_budget < 6 {
        return Err(OracleError::GenerationFailed(
            "node budget must be at least 6 (three sources, three terminals)".into(),
        ));
    }
    if config.edge_budget < 3 {
        return Err(OracleError::GenerationFailed(
            "edge budget must be at least 3 (every source needs an out-edge)".into(),
        ));
    }
    if let Some(k) = config.ensure_kappa {
        if k > 9 {
            return Err(OracleError::GenerationFailed(format!(
                "kappa is at most 9 for a 3s/3t network, requested {k}"
            )));
        }
    }

    const ATTEMPTS: u32 = 10_000;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    for _ in 0..ATTEMPTS {
        let net = sample_layered(&mut rng, config);
        if config.ensure_connected && !analysis::is_connected_sum_network(&net) {
            continue;
        }
        if let Some(k) = config.ensure_kappa {
            if analysis::kappa(&net) != k {
                continue;
            }
        }
        return Ok(net);
    }
    Err(OracleError::GenerationFailed(format!(
        "no sample met the constraints within {ATTEMPTS} attempts"
    )))
}

fn sample_layered(rng: &mut ChaCha8Rng, config: &GeneratorConfig) -> SumNetwork {
    // Internal nodes: each seeded node costs an in-edge and an out-edge, so
    // stay well inside the edge budget.
    let max_internal = (config.node_budget - 6)
        .min((config.edge_budget.saturating_sub(6)) / 2)
        .min(6);
    let internal = rng.gen_range(0..=max_internal);
    // Split the internal nodes over up to two layers.
    let layer1 = if internal == 0 { 0 } else { rng.gen_range(1..=internal) };
    let layer2 = internal - layer1;

    // Node numbering: sources 0..3, layer one, layer two, terminals last.
    let n = 6 + internal;
    let mut layers: Vec<Vec<u32>> = vec![vec![0, 1, 2]];
    if layer1 > 0 {
        layers.push((3..3 + layer1).collect());
    }
    if layer2 > 0 {
        layers.push((3 + layer1..3 + internal).collect());
    }
    layers.push((n - 3..n).collect());

    // A random head strictly after `tail_layer`, then a random node in it.
    let pick_head = |rng: &mut ChaCha8Rng, tail_layer: usize| -> u32 {
        let li = rng.gen_range(tail_layer + 1..layers.len());
        layers[li][rng.gen_range(0..layers[li].len())]
    };

    let mut edges: Vec<(u32, u32)> = Vec::new();
    // Every source sends somewhere.
    for s in 0..3u32 {
        let head = pick_head(rng, 0);
        edges.push((s, head));
    }
    // Every internal node gets an in-edge from an earlier layer and an
    // out-edge to a later one.
    for li in 1..layers.len() - 1 {
        for &v in &layers[li].clone() {
            let from_layer = rng.gen_range(0..li);
            let tail = layers[from_layer][rng.gen_range(0..layers[from_layer].len())];
            edges.push((tail, v));
            let head = pick_head(rng, li);
            edges.push((v, head));
        }
    }
    // Every terminal without an in-edge yet gets one.
    for t in n - 3..n {
        if !edges.iter().any(|&(_, h)| h == t) {
            let from_layer = rng.gen_range(0..layers.len() - 1);
            let tail = layers[from_layer][rng.gen_range(0..layers[from_layer].len())];
            edges.push((tail, t));
        }
    }
    // Fill with random layer-respecting edges (repeats make parallel edges).
    while (edges.len() as u32) < config.edge_budget && rng.gen_bool(0.8) {
        let tail_layer = rng.gen_range(0..layers.len() - 1);
        let tail = layers[tail_layer][rng.gen_range(0..layers[tail_layer].len())];
        let head = pick_head(rng, tail_layer);
        edges.push((tail, head));
    }

    let terminals: Vec<u32> = (n - 3..n).collect();
    SumNetwork::new(n, &edges, &[0, 1, 2], &terminals)
        .expect("layered construction is acyclic and well-formed")
}
