//! Code synthesis: bounded deterministic search for scalar and fractional
//! linear codes, and the explicit α-parameterized construction for networks
//! solvable over every field except GF(2).

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::classifier::{self, ClassifierError, WitnessPair};
use crate::gf::{alpha_constants, FieldElement, PrimeField};
use crate::multigraph::{EdgeId, NodeId, SumNetwork};
use crate::netcode::{
    self, EdgeMap, FracEdgeMap, FractionalLinearCode, Mat, ScalarLinearCode,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructorError {
    #[error("witness pair does not satisfy the required conditions")]
    InvalidWitness,
    #[error("alpha must lie outside {{0,1}} in a prime field with p >= 3")]
    InvalidAlpha,
    #[error("a required path is missing (the witness conditions should guarantee it)")]
    NoValidPaths,
    #[error("construction search exhausted its budget without producing a code")]
    ConstructionFailed,
    #[error(transparent)]
    Classifier(#[from] ClassifierError),
}

/// Resource limits for code search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchBudget {
    /// Maximum number of edge-coefficient assignments to enumerate.
    pub max_codes: u64,
    /// Allowed coefficient values (canonical representatives). None means
    /// the whole field.
    pub coefficient_set: Option<Vec<u64>>,
    /// Wall-clock limit for one search call.
    pub time_limit: Option<Duration>,
}

impl SearchBudget {
    /// No limits: the search covers its entire candidate space.
    pub fn exhaustive() -> SearchBudget {
        SearchBudget { max_codes: u64::MAX, coefficient_set: None, time_limit: None }
    }

    pub fn with_max_codes(max_codes: u64) -> SearchBudget {
        assert!(max_codes > 0, "budget must allow at least one candidate");
        SearchBudget { max_codes, coefficient_set: None, time_limit: None }
    }
}

/// Result of a bounded search. `complete` means the answer is definitive:
/// either a code was found, or the whole candidate space was enumerated
/// without finding one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchOutcome<T> {
    pub found: Option<T>,
    pub complete: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum SlotInput {
    /// The tail's own source symbol.
    Source,
    /// The symbol of an in-edge of the tail.
    In(EdgeId),
}

/// Static description of one scalar search: which coefficient values each
/// edge slot may take, how decoders are derived, and what transfer vector
/// each terminal must decode.
struct ScalarSpec<'a> {
    net: &'a SumNetwork,
    field: PrimeField,
    /// Sorted allowed values for enumerated edge coefficients.
    values: Vec<u64>,
    /// Sorted allowed decoder values; None solves decoders by elimination
    /// over the whole field.
    decoder_values: Option<Vec<u64>>,
    /// Per-terminal target transfer vector (source-list coordinates).
    targets: [[u64; 3]; 3],
    max_codes: u64,
    time_limit: Option<Duration>,
}

/// Inputs of every edge in canonical order (source symbol first, then
/// in-edges ascending), edges ascending by id.
fn edge_inputs(net: &SumNetwork) -> Vec<(EdgeId, Vec<SlotInput>)> {
    net.edges()
        .iter()
        .map(|e| {
            let mut inputs = Vec::new();
            if net.is_source(e.tail) {
                inputs.push(SlotInput::Source);
            }
            for f in net.in_edges(e.tail) {
                inputs.push(SlotInput::In(f.id));
            }
            (e.id, inputs)
        })
        .collect()
}

/// True iff `values` contains 1 and is closed under field multiplication —
/// the condition under which pinning every single-input edge coefficient to
/// 1 loses no codes (the scale is absorbed by downstream coefficients, whose
/// products stay inside the set).
fn closed_under_product(values: &[u64], f: PrimeField) -> bool {
    values.binary_search(&1).is_ok()
        && values.iter().all(|&a| {
            values
                .iter()
                .all(|&b| values.binary_search(&f.mul_raw(a, b)).is_ok())
        })
}

/// Find one decoder for a terminal: coefficients over its in-edge transfers
/// summing to `target`. Either by Gaussian elimination (None mode) or by
/// enumerating the restricted value set (first hit in lexicographic order).
fn solve_decoder(
    transfers: &[[u64; 3]],
    target: [u64; 3],
    f: PrimeField,
    restricted: Option<&[u64]>,
) -> Option<Vec<u64>> {
    match restricted {
        None => {
            let rows: Vec<Vec<u64>> = (0..3)
                .map(|coord| transfers.iter().map(|t| t[coord]).collect())
                .collect();
            netcode::solve_linear(&rows, &target, f)
        }
        Some(values) => {
            if values.is_empty() {
                return None;
            }
            let m = transfers.len();
            let mut idx = vec![0usize; m];
            loop {
                let mut acc = [0u64; 3];
                for (i, t) in transfers.iter().enumerate() {
                    let d = values[idx[i]];
                    for c in 0..3 {
                        acc[c] = f.add_raw(acc[c], f.mul_raw(d, t[c]));
                    }
                }
                if acc == target {
                    return Some(idx.iter().map(|&i| values[i]).collect());
                }
                // Lexicographic odometer, rightmost digit fastest.
                let mut i = m;
                loop {
                    if i == 0 {
                        return None;
                    }
                    i -= 1;
                    idx[i] += 1;
                    if idx[i] < values.len() {
                        break;
                    }
                    idx[i] = 0;
                }
            }
        }
    }
}

/// Core scalar enumeration. Deterministic: slots ordered by (edge id; source
/// symbol before in-edges ascending), values ascending, lexicographically
/// first passing assignment returned.
fn run_scalar_search(spec: &ScalarSpec) -> (SearchOutcome<ScalarLinearCode>, u64) {
    let net = spec.net;
    let f = spec.field;
    assert_eq!(net.sources().len(), 3, "scalar search requires 3 sources");
    assert_eq!(net.terminals().len(), 3, "scalar search requires 3 terminals");

    let inputs = edge_inputs(net);
    let normalize = closed_under_product(&spec.values, f);
    // Enumerated slots: every input of every multi-input edge, plus every
    // input of single-input edges when normalization is unsound.
    let mut slots: Vec<(usize, usize)> = Vec::new();
    for (ei, (_, ins)) in inputs.iter().enumerate() {
        if ins.len() >= 2 || !normalize {
            for ii in 0..ins.len() {
                slots.push((ei, ii));
            }
        }
    }

    // Dense edge indexing for transfer storage.
    let pos_of: BTreeMap<EdgeId, usize> =
        inputs.iter().enumerate().map(|(i, (id, _))| (*id, i)).collect();
    let topo_pos: BTreeMap<NodeId, usize> = net
        .topological_order()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let mut eval_order: Vec<usize> = (0..inputs.len()).collect();
    eval_order.sort_by_key(|&i| {
        let e = net.edge(inputs[i].0).expect("edge exists");
        (topo_pos[&e.tail], e.id)
    });
    let source_index: BTreeMap<NodeId, usize> = net
        .sources()
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, i))
        .collect();

    if !slots.is_empty() && spec.values.is_empty() {
        return (SearchOutcome { found: None, complete: true }, 0);
    }

    let started = Instant::now();
    let mut tried: u64 = 0;
    let mut idx = vec![0usize; slots.len()];
    let coef = |slot_values: &[usize], ei: usize, ii: usize| -> u64 {
        // Slots are sorted; direct scan is fine at these sizes.
        for (s, &(se, si)) in slots.iter().enumerate() {
            if (se, si) == (ei, ii) {
                return spec.values[slot_values[s]];
            }
        }
        1 // normalized single-input edge
    };

    loop {
        tried += 1;
        if tried > spec.max_codes {
            return (SearchOutcome { found: None, complete: false }, tried - 1);
        }
        if let Some(limit) = spec.time_limit {
            if tried.is_multiple_of(256) && started.elapsed() > limit {
                return (SearchOutcome { found: None, complete: false }, tried);
            }
        }

        // Transfer vectors in topological edge order.
        let mut transfers = vec![[0u64; 3]; inputs.len()];
        for &ei in &eval_order {
            let (id, ins) = &inputs[ei];
            let tail = net.edge(*id).expect("edge exists").tail;
            let mut acc = [0u64; 3];
            for (ii, input) in ins.iter().enumerate() {
                let c = coef(&idx, ei, ii);
                match input {
                    SlotInput::Source => {
                        let s = source_index[&tail];
                        acc[s] = f.add_raw(acc[s], c);
                    }
                    SlotInput::In(fid) => {
                        let t = transfers[pos_of[fid]];
                        for k in 0..3 {
                            acc[k] = f.add_raw(acc[k], f.mul_raw(c, t[k]));
                        }
                    }
                }
            }
            transfers[ei] = acc;
        }

        // Decoders, one terminal at a time.
        let mut decoders = Vec::with_capacity(3);
        for (j, &t) in net.terminals().iter().enumerate() {
            let in_ids: Vec<EdgeId> = net.in_edges(t).iter().map(|e| e.id).collect();
            let in_transfers: Vec<[u64; 3]> =
                in_ids.iter().map(|id| transfers[pos_of[id]]).collect();
            match solve_decoder(
                &in_transfers,
                spec.targets[j],
                f,
                spec.decoder_values.as_deref(),
            ) {
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
            let edge_maps = inputs
                .iter()
                .enumerate()
                .map(|(ei, (id, ins))| {
                    let mut source_coef = None;
                    let mut in_coefs = BTreeMap::new();
                    for (ii, input) in ins.iter().enumerate() {
                        let c = f.elem(coef(&idx, ei, ii));
                        match input {
                            SlotInput::Source => source_coef = Some(c),
                            SlotInput::In(fid) => {
                                in_coefs.insert(*fid, c);
                            }
                        }
                    }
                    (*id, EdgeMap { source_coef, in_coefs })
                })
                .collect();
            let code = ScalarLinearCode { field: f, edge_maps, decoders };
            return (SearchOutcome { found: Some(code), complete: true }, tried);
        }

        // Advance the odometer (rightmost slot fastest = lexicographic).
        let mut i = slots.len();
        loop {
            if i == 0 {
                return (SearchOutcome { found: None, complete: true }, tried);
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < spec.values.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

fn sorted_canonical(values: &[u64], f: PrimeField) -> Vec<u64> {
    let mut out: Vec<u64> = values.iter().map(|&v| f.reduce(v)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

fn xor_values(f: PrimeField) -> Vec<u64> {
    sorted_canonical(&[0, 1, f.modulus() - 1], f)
}

fn intersect_sorted(a: &[u64], b: &[u64]) -> Vec<u64> {
    a.iter().copied().filter(|v| b.binary_search(v).is_ok()).collect()
}

const SUM_TARGETS: [[u64; 3]; 3] = [[1, 1, 1], [1, 1, 1], [1, 1, 1]];

/// Search for a scalar linear code delivering the source sum to all three
/// terminals.
///
/// With `xor_only`, every coefficient (edge maps and decoders) is restricted
/// to {0, +1, −1}. Otherwise the search tries the {0, ±1} subset first (a
/// code found there is an XOR code) and then the full budgeted set, where
/// decoders are derived by Gaussian elimination. Within each stage the
/// lexicographically least passing assignment wins, so results are
/// deterministic.
pub fn search_scalar(
    net: &SumNetwork,
    field: PrimeField,
    budget: &SearchBudget,
    xor_only: bool,
) -> SearchOutcome<ScalarLinearCode> {
    assert!(budget.max_codes > 0, "budget must allow at least one candidate");
    let full: Vec<u64> = (0..field.modulus()).collect();
    let base = match &budget.coefficient_set {
        None => full.clone(),
        Some(s) => sorted_canonical(s, field),
    };
    let xor = intersect_sorted(&xor_values(field), &base);

    let mut stages: Vec<Vec<u64>> = Vec::new();
    if xor_only {
        stages.push(xor);
    } else {
        if xor != base {
            stages.push(xor);
        }
        stages.push(base);
    }

    let mut remaining = budget.max_codes;
    let started = Instant::now();
    let last = stages.len() - 1;
    for (i, values) in stages.into_iter().enumerate() {
        if remaining == 0 {
            return SearchOutcome { found: None, complete: false };
        }
        let decoder_values = if values.len() as u64 == field.modulus() {
            None
        } else {
            Some(values.clone())
        };
        let spec = ScalarSpec {
            net,
            field,
            values,
            decoder_values,
            targets: SUM_TARGETS,
            max_codes: remaining,
            time_limit: budget
                .time_limit
                .map(|l| l.saturating_sub(started.elapsed())),
        };
        let (outcome, used) = run_scalar_search(&spec);
        remaining = remaining.saturating_sub(used);
        if outcome.found.is_some() {
            return outcome;
        }
        if i == last {
            return outcome;
        }
        if !outcome.complete {
            // Earlier stage already ran out of budget; the final verdict
            // cannot be definitive.
            return SearchOutcome { found: None, complete: false };
        }
    }
    unreachable!("stage loop always returns")
}

/// Widen a scalar code to a (k,n) fractional code, k ≤ n: rounds 0..k run
/// the scalar code coordinate-wise, remaining rounds idle.
fn widen_scalar(code: &ScalarLinearCode, k: usize, n: usize) -> FractionalLinearCode {
    assert!(k >= 1 && k <= n);
    let band = |c: &FieldElement| {
        let mut m = Mat::zero(n, n);
        for r in 0..k {
            m.set(r, r, c.value());
        }
        m
    };
    let edge_maps = code
        .edge_maps
        .iter()
        .map(|(id, map)| {
            let source_mat = map.source_coef.as_ref().map(|c| {
                let mut m = Mat::zero(n, k);
                for r in 0..k {
                    m.set(r, r, c.value());
                }
                m
            });
            let in_mats = map.in_coefs.iter().map(|(fid, c)| (*fid, band(c))).collect();
            (*id, FracEdgeMap { source_mat, in_mats })
        })
        .collect();
    let decoders = code
        .decoders
        .iter()
        .map(|dec| {
            dec.iter()
                .map(|(fid, c)| {
                    let mut m = Mat::zero(k, n);
                    for r in 0..k {
                        m.set(r, r, c.value());
                    }
                    (*fid, m)
                })
                .collect()
        })
        .collect();
    FractionalLinearCode { field: code.field, k, n, edge_maps, decoders }
}

/// The fixed (2,3) combining matrix: every pair of columns is invertible
/// over every prime field (all 2×2 minors have determinant ±1).
const R_23: [[i64; 3]; 2] = [[1, 0, 1], [0, 1, 1]];

fn r_matrix(f: PrimeField) -> Mat {
    let mut r = Mat::zero(2, 3);
    for (i, row) in R_23.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            r.set(i, j, f.reduce(v.rem_euclid(f.modulus() as i64) as u64));
        }
    }
    r
}

/// Per-source round-spreading matrices M_i (3×2) with row i zero and
/// R·M_i = I_2: rows are the inverse of R with column i dropped.
fn m_matrices(f: PrimeField) -> [Mat; 3] {
    let r = r_matrix(f);
    let mut out = [Mat::zero(3, 2), Mat::zero(3, 2), Mat::zero(3, 2)];
    for (i, m) in out.iter_mut().enumerate() {
        let others: Vec<usize> = (0..3).filter(|&c| c != i).collect();
        // 2×2 submatrix of R without column i.
        let a = r.get(0, others[0]);
        let b = r.get(0, others[1]);
        let c = r.get(1, others[0]);
        let d = r.get(1, others[1]);
        let det = f.sub_raw(f.mul_raw(a, d), f.mul_raw(b, c));
        let det_inv = f.inv_raw(det).expect("R column pairs are invertible");
        let inv = [
            [f.mul_raw(det_inv, d), f.mul_raw(det_inv, f.sub_raw(0, b))],
            [f.mul_raw(det_inv, f.sub_raw(0, c)), f.mul_raw(det_inv, a)],
        ];
        for (row_pos, &round) in others.iter().enumerate() {
            m.set(round, 0, inv[row_pos][0]);
            m.set(round, 1, inv[row_pos][1]);
        }
    }
    out
}

/// Search for a verified (k,n) fractional code.
///
/// Strategy: any scalar code widens to a (k,n) code for k ≤ n; failing that,
/// (2,3) is attempted by session decomposition — three scalar rounds, each
/// delivering the sum of two sources (source r silent in round r), recombined
/// through fixed spreading matrices. `complete` is true when a code is found,
/// and for a definitive absence only at (1,1), where the scalar search is
/// lossless.
pub fn search_fractional(
    net: &SumNetwork,
    field: PrimeField,
    k: usize,
    n: usize,
    budget: &SearchBudget,
) -> SearchOutcome<FractionalLinearCode> {
    assert!(k >= 1 && n >= 1, "rate components must be positive");
    if k > n {
        return SearchOutcome { found: None, complete: false };
    }
    let scalar = search_scalar(net, field, budget, false);
    if let Some(code) = scalar.found {
        let frac = widen_scalar(&code, k, n);
        debug_assert_eq!(netcode::verify_fractional(net, &frac), Ok(true));
        return SearchOutcome { found: Some(frac), complete: true };
    }
    if (k, n) == (1, 1) {
        return SearchOutcome { found: None, complete: scalar.complete };
    }
    if (k, n) != (2, 3) || !scalar.complete {
        return SearchOutcome { found: None, complete: false };
    }

    // Session decomposition: round r must deliver x_i + x_j for {i,j} =
    // sources other than r, to every terminal.
    let full: Vec<u64> = (0..field.modulus()).collect();
    let values = match &budget.coefficient_set {
        None => full.clone(),
        Some(s) => sorted_canonical(s, field),
    };
    let decoder_values =
        if values.len() as u64 == field.modulus() { None } else { Some(values.clone()) };
    let mut sessions = Vec::with_capacity(3);
    for r in 0..3 {
        let mut tau = [1u64; 3];
        tau[r] = 0;
        let spec = ScalarSpec {
            net,
            field,
            values: values.clone(),
            decoder_values: decoder_values.clone(),
            targets: [tau, tau, tau],
            max_codes: budget.max_codes,
            time_limit: budget.time_limit,
        };
        let (outcome, _) = run_scalar_search(&spec);
        match outcome.found {
            Some(code) => sessions.push(code),
            None => return SearchOutcome { found: None, complete: false },
        }
    }

    let f = field;
    let r_mat = r_matrix(f);
    let ms = m_matrices(f);
    let source_index: BTreeMap<NodeId, usize> =
        net.sources().iter().enumerate().map(|(i, &s)| (s, i)).collect();
    let edge_maps = net
        .edges()
        .iter()
        .map(|e| {
            let source_mat = net.is_source(e.tail).then(|| {
                let i = source_index[&e.tail];
                let mut m = Mat::zero(3, 2);
                for (r, session) in sessions.iter().enumerate() {
                    let a = session.edge_maps[&e.id]
                        .source_coef
                        .expect("source edge has a source coefficient")
                        .value();
                    for c in 0..2 {
                        m.set(r, c, f.mul_raw(a, ms[i].get(r, c)));
                    }
                }
                m
            });
            let in_mats = net
                .in_edges(e.tail)
                .iter()
                .map(|g| {
                    let mut m = Mat::zero(3, 3);
                    for (r, session) in sessions.iter().enumerate() {
                        m.set(r, r, session.edge_maps[&e.id].in_coefs[&g.id].value());
                    }
                    (g.id, m)
                })
                .collect();
            (e.id, FracEdgeMap { source_mat, in_mats })
        })
        .collect();
    let decoders = net
        .terminals()
        .iter()
        .enumerate()
        .map(|(j, &t)| {
            net.in_edges(t)
                .iter()
                .map(|g| {
                    let mut m = Mat::zero(2, 3);
                    for (r, session) in sessions.iter().enumerate() {
                        let d = session.decoders[j][&g.id].value();
                        for row in 0..2 {
                            m.set(row, r, f.mul_raw(d, r_mat.get(row, r)));
                        }
                    }
                    (g.id, m)
                })
                .collect()
        })
        .collect();
    let frac = FractionalLinearCode { field: f, k: 2, n: 3, edge_maps, decoders };
    assert_eq!(
        netcode::verify_fractional(net, &frac),
        Ok(true),
        "assembled session code must verify"
    );
    SearchOutcome { found: Some(frac), complete: true }
}

/// Rate admissibility against the two-edge cut of a nonsolvability witness:
/// the pair (e1, e2) cuts all sources from t3, and its 2n cut symbols must
/// distinguish |F|^{3k} message triples, forcing 3k ≤ 2n. Returns true iff
/// k/n ≤ 2/3. Errors with InvalidWitness when the witness does not satisfy
/// the six nonsolvability conditions.
pub fn cut_bound_check(
    net: &SumNetwork,
    witness: &WitnessPair,
    k: u64,
    n: u64,
) -> Result<bool, ConstructorError> {
    assert!(k >= 1 && n >= 1, "rate components must be positive");
    if !classifier::is_nonsolvability_witness(net, witness.e1, witness.e2, &witness.labeling)? {
        return Err(ConstructorError::InvalidWitness);
    }
    Ok(3 * k <= 2 * n)
}

/// The twelve paths used by the α-construction. All are found in the network
/// with e1 and e2 removed (the witness conditions guarantee each exists
/// there), shortest first with ties broken by the smallest edge-id sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathSet {
    /// s1 → t1 avoiding e1.
    pub q1: Vec<EdgeId>,
    /// s2 → t2 avoiding e2.
    pub q2: Vec<EdgeId>,
    /// s1 → t2.
    pub r1: Vec<EdgeId>,
    /// s2 → t1.
    pub r2: Vec<EdgeId>,
    pub s1_to_tail_e1: Vec<EdgeId>,
    pub s3_to_tail_e1: Vec<EdgeId>,
    pub s2_to_tail_e2: Vec<EdgeId>,
    pub s3_to_tail_e2: Vec<EdgeId>,
    pub head_e1_to_t1: Vec<EdgeId>,
    pub head_e1_to_t3: Vec<EdgeId>,
    pub head_e2_to_t2: Vec<EdgeId>,
    pub head_e2_to_t3: Vec<EdgeId>,
}

impl PathSet {
    /// All edges of all paths.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = [
            &self.q1,
            &self.q2,
            &self.r1,
            &self.r2,
            &self.s1_to_tail_e1,
            &self.s3_to_tail_e1,
            &self.s2_to_tail_e2,
            &self.s3_to_tail_e2,
            &self.head_e1_to_t1,
            &self.head_e1_to_t3,
            &self.head_e2_to_t2,
            &self.head_e2_to_t3,
        ]
        .iter()
        .flat_map(|p| p.iter().copied())
        .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Shortest path (fewest edges, ties by lexicographically least edge-id
/// sequence) between two nodes of a DAG. `from == to` yields the empty path.
fn shortest_path(net: &SumNetwork, from: NodeId, to: NodeId) -> Option<Vec<EdgeId>> {
    let mut best: BTreeMap<NodeId, (u32, Vec<EdgeId>)> = BTreeMap::new();
    best.insert(from, (0, Vec::new()));
    for v in net.topological_order() {
        let Some((d, path)) = best.get(&v).cloned() else {
            continue;
        };
        for e in net.out_edges(v) {
            let mut cand_path = path.clone();
            cand_path.push(e.id);
            let cand = (d + 1, cand_path);
            match best.get(&e.head) {
                Some(cur) if *cur <= cand => {}
                _ => {
                    best.insert(e.head, cand);
                }
            }
        }
    }
    best.remove(&to).map(|(_, p)| p)
}

/// Locate the twelve construction paths for a verified witness. Exposed for
/// inspection; `construct_alpha_code` calls it internally.
pub fn find_path_set(
    net: &SumNetwork,
    witness: &WitnessPair,
) -> Result<PathSet, ConstructorError> {
    let e1 = *net.edge(witness.e1).map_err(ClassifierError::from)?;
    let e2 = *net.edge(witness.e2).map_err(ClassifierError::from)?;
    let stripped = net
        .remove_edges(&[witness.e1, witness.e2])
        .map_err(ClassifierError::from)?;
    let s = |r: usize| witness.labeling.source_node(net, r);
    let t = |r: usize| witness.labeling.terminal_node(net, r);
    let find = |from: NodeId, to: NodeId| {
        shortest_path(&stripped, from, to).ok_or(ConstructorError::NoValidPaths)
    };
    Ok(PathSet {
        q1: find(s(0), t(0))?,
        q2: find(s(1), t(1))?,
        r1: find(s(0), t(1))?,
        r2: find(s(1), t(0))?,
        s1_to_tail_e1: find(s(0), e1.tail)?,
        s3_to_tail_e1: find(s(2), e1.tail)?,
        s2_to_tail_e2: find(s(1), e2.tail)?,
        s3_to_tail_e2: find(s(2), e2.tail)?,
        head_e1_to_t1: find(e1.head, t(0))?,
        head_e1_to_t3: find(e1.head, t(2))?,
        head_e2_to_t2: find(e2.head, t(1))?,
        head_e2_to_t3: find(e2.head, t(2))?,
    })
}

/// Transfer-vector patterns (role coordinates) that edges of the
/// construction subnetwork are allowed to carry, up to scale: the three pure
/// source symbols, the two special mixtures pinned to e1 and e2, the
/// two-source mixture γx1+x2 delivered to t1 and t2, and the full sum.
fn alpha_patterns(alpha: u64, beta: u64, gamma: u64) -> [[u64; 3]; 7] {
    [
        [1, 0, 0],
        [0, 1, 0],
        [0, 0, 1],
        [1, 0, alpha],
        [0, beta, 1],
        [gamma, 1, 0],
        [1, 1, 1],
    ]
}

/// Is `t` the zero vector or a nonzero scalar multiple of some pattern?
fn matches_pattern(t: [u64; 3], patterns: &[[u64; 3]], f: PrimeField) -> bool {
    if t == [0, 0, 0] {
        return true;
    }
    patterns.iter().any(|p| {
        // t = λp for λ ≠ 0 ⇔ supports match and cross products agree.
        let support_match = (0..3).all(|i| (t[i] == 0) == (p[i] == 0));
        support_match
            && (0..3).all(|i| {
                (i + 1..3).all(|j| f.mul_raw(t[i], p[j]) == f.mul_raw(t[j], p[i]))
            })
    })
}

struct AlphaDfs<'a> {
    net: &'a SumNetwork,
    f: PrimeField,
    /// U-edges in topological order: (edge id, inputs restricted to U).
    order: Vec<(EdgeId, Vec<SlotInput>)>,
    patterns: [[u64; 3]; 7],
    e1: EdgeId,
    e2: EdgeId,
    e1_target: [u64; 3],
    e2_target: [u64; 3],
    coefficients: Vec<u64>,
    /// Role index of each source node.
    source_role: BTreeMap<NodeId, usize>,
    /// Terminal nodes by role.
    terminals: [NodeId; 3],
    prune_patterns: bool,
    steps: u64,
    step_cap: u64,
}

impl AlphaDfs<'_> {
    /// Depth-first assignment of coefficients to U-edges in topological
    /// order. Returns per-edge assignments and per-terminal decoders on
    /// success.
    fn solve(
        &mut self,
        depth: usize,
        transfers: &mut BTreeMap<EdgeId, [u64; 3]>,
        assignment: &mut Vec<Vec<u64>>,
    ) -> Option<Vec<Vec<u64>>> {
        if depth == self.order.len() {
            // All U-edges assigned; try to decode (1,1,1) at each terminal.
            let mut decoders = Vec::with_capacity(3);
            for &t in &self.terminals {
                let in_transfers: Vec<[u64; 3]> = self
                    .net
                    .in_edges(t)
                    .iter()
                    .map(|e| transfers.get(&e.id).copied().unwrap_or([0, 0, 0]))
                    .collect();
                let rows: Vec<Vec<u64>> = (0..3)
                    .map(|coord| in_transfers.iter().map(|v| v[coord]).collect())
                    .collect();
                {
                    let d = netcode::solve_linear(&rows, &[1, 1, 1], self.f)?;
                    decoders.push(d)
                }
            }
            return Some(decoders);
        }
        let (id, inputs) = self.order[depth].clone();
        let m = inputs.len();
        let mut idx = vec![0usize; m];
        loop {
            self.steps += 1;
            if self.steps > self.step_cap {
                return None;
            }
            let mut acc = [0u64; 3];
            for (ii, input) in inputs.iter().enumerate() {
                let c = self.coefficients[idx[ii]];
                match input {
                    SlotInput::Source => {
                        let tail = self.net.edge(id).expect("edge exists").tail;
                        let role = self.source_role[&tail];
                        acc[role] = self.f.add_raw(acc[role], c);
                    }
                    SlotInput::In(fid) => {
                        let tv = transfers[fid];
                        for k in 0..3 {
                            acc[k] = self.f.add_raw(acc[k], self.f.mul_raw(c, tv[k]));
                        }
                    }
                }
            }
            let ok = if id == self.e1 {
                acc == self.e1_target
            } else if id == self.e2 {
                acc == self.e2_target
            } else if self.prune_patterns {
                matches_pattern(acc, &self.patterns, self.f)
            } else {
                true
            };
            if ok {
                transfers.insert(id, acc);
                assignment.push(idx.iter().map(|&i| self.coefficients[i]).collect());
                if let Some(d) = self.solve(depth + 1, transfers, assignment) {
                    return Some(d);
                }
                assignment.pop();
                transfers.remove(&id);
            }
            // Next coefficient vector for this edge.
            let mut i = m;
            loop {
                if i == 0 {
                    return None;
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < self.coefficients.len() {
                    break;
                }
                idx[i] = 0;
            }
        }
    }
}

/// Build a verified scalar code for a GF(2)-exception witness over a field
/// with p ≥ 3, parameterized by α ∉ {0,1}: edge e1 carries x1+αx3, edge e2
/// carries x3+βx2 with β=(1−α)⁻¹, and the Q/R path subnetwork delivers
/// γx1+x2 (γ=1−α⁻¹) to t1 and t2; terminal decoders recombine these into
/// x1+x2+x3 via the identities β⁻¹=1−α, γ+α⁻¹=1, γ⁻¹+β=1.
///
/// The coefficients are found by a depth-first search over the union of the
/// twelve construction paths, restricted to the values
/// {0,±1,α,β,γ,α⁻¹,β⁻¹,γ⁻¹} and pruned so every edge carries a scalar
/// multiple of one of the seven transfer patterns the proof produces; e1 and
/// e2 are pinned exactly. If the pruned search fails (it should not, for a
/// verified witness), an unpruned pass over the same subnetwork runs before
/// giving up.
pub fn construct_alpha_code(
    net: &SumNetwork,
    witness: &WitnessPair,
    field: PrimeField,
    alpha: FieldElement,
) -> Result<ScalarLinearCode, ConstructorError> {
    if alpha.field() != field {
        return Err(ConstructorError::InvalidAlpha);
    }
    let (beta, gamma) =
        alpha_constants(field, alpha).map_err(|_| ConstructorError::InvalidAlpha)?;
    if !classifier::is_f2_exception_witness(net, witness.e1, witness.e2, &witness.labeling)? {
        return Err(ConstructorError::InvalidWitness);
    }
    let paths = find_path_set(net, witness)?;
    let f = field;
    let (a, b, g) = (alpha.value(), beta.value(), gamma.value());
    let inv = |v: u64| f.inv_raw(v).expect("alpha constants are nonzero");
    let coefficients = sorted_canonical(
        &[0, 1, f.modulus() - 1, a, b, g, inv(a), inv(b), inv(g)],
        f,
    );

    let mut u_edges = paths.edges();
    u_edges.extend([witness.e1, witness.e2]);
    u_edges.sort_unstable();
    u_edges.dedup();
    let in_u = |id: EdgeId| u_edges.binary_search(&id).is_ok();

    let topo_pos: BTreeMap<NodeId, usize> = net
        .topological_order()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, i))
        .collect();
    let inputs_of: BTreeMap<EdgeId, Vec<SlotInput>> = u_edges
        .iter()
        .map(|&id| {
            let e = net.edge(id).expect("edge exists");
            let mut inputs = Vec::new();
            if net.is_source(e.tail) {
                inputs.push(SlotInput::Source);
            }
            for fe in net.in_edges(e.tail) {
                if in_u(fe.id) {
                    inputs.push(SlotInput::In(fe.id));
                }
            }
            (id, inputs)
        })
        .collect();
    // Assignment order: schedule the hard-constrained spine (the trunk
    // paths feeding the pinned pair, and the pair itself) as early as the
    // edge dependencies allow, then the delivery paths, then the q/r paths.
    // Otherwise backtracking from the pinned targets re-enumerates every
    // combination of unrelated edges placed in between.
    let mut group: BTreeMap<EdgeId, u8> = u_edges.iter().map(|&id| (id, 2)).collect();
    for path in [
        &paths.head_e1_to_t1,
        &paths.head_e1_to_t3,
        &paths.head_e2_to_t2,
        &paths.head_e2_to_t3,
    ] {
        for &id in path {
            group.insert(id, 1);
        }
    }
    for &id in paths
        .s1_to_tail_e1
        .iter()
        .chain(&paths.s3_to_tail_e1)
        .chain(&paths.s2_to_tail_e2)
        .chain(&paths.s3_to_tail_e2)
        .chain([witness.e1, witness.e2].iter())
    {
        group.insert(id, 0);
    }
    let mut order: Vec<(EdgeId, Vec<SlotInput>)> = Vec::with_capacity(u_edges.len());
    let mut placed = std::collections::BTreeSet::new();
    while order.len() < u_edges.len() {
        let next = u_edges
            .iter()
            .copied()
            .filter(|id| !placed.contains(id))
            .filter(|id| {
                inputs_of[id].iter().all(|input| match input {
                    SlotInput::In(fid) => placed.contains(fid),
                    SlotInput::Source => true,
                })
            })
            .min_by_key(|id| {
                (group[id], topo_pos[&net.edge(*id).expect("edge exists").tail], *id)
            })
            .expect("the U-edge dependency graph is acyclic");
        placed.insert(next);
        order.push((next, inputs_of[&next].clone()));
    }

    let source_role: BTreeMap<NodeId, usize> = (0..3)
        .map(|r| (witness.labeling.source_node(net, r), r))
        .collect();
    let terminals = [
        witness.labeling.terminal_node(net, 0),
        witness.labeling.terminal_node(net, 1),
        witness.labeling.terminal_node(net, 2),
    ];

    let mut result = None;
    for prune in [true, false] {
        let mut dfs = AlphaDfs {
            net,
            f,
            order: order.clone(),
            patterns: alpha_patterns(a, b, g),
            e1: witness.e1,
            e2: witness.e2,
            e1_target: [1, 0, a],
            e2_target: [0, b, 1],
            coefficients: coefficients.clone(),
            source_role: source_role.clone(),
            terminals,
            prune_patterns: prune,
            steps: 0,
            step_cap: 5_000_000,
        };
        let mut transfers = BTreeMap::new();
        let mut assignment = Vec::new();
        if let Some(decoders) = dfs.solve(0, &mut transfers, &mut assignment) {
            result = Some((assignment, decoders));
            break;
        }
    }
    let Some((assignment, decoders)) = result else {
        return Err(ConstructorError::ConstructionFailed);
    };

    // Assemble the full code: U-edges get their assigned coefficients,
    // everything else is zero.
    let assigned: BTreeMap<EdgeId, &Vec<u64>> = order
        .iter()
        .map(|(id, _)| id)
        .zip(&assignment)
        .map(|(id, v)| (*id, v))
        .collect();
    let edge_maps = net
        .edges()
        .iter()
        .map(|e| {
            let inputs_here: Vec<SlotInput> = order
                .iter()
                .find(|(id, _)| *id == e.id)
                .map(|(_, ins)| ins.clone())
                .unwrap_or_default();
            let values = assigned.get(&e.id);
            let mut source_coef = net.is_source(e.tail).then(|| f.zero());
            let mut in_coefs: BTreeMap<EdgeId, FieldElement> = net
                .in_edges(e.tail)
                .iter()
                .map(|g| (g.id, f.zero()))
                .collect();
            if let Some(values) = values {
                for (input, &v) in inputs_here.iter().zip(values.iter()) {
                    match input {
                        SlotInput::Source => source_coef = Some(f.elem(v)),
                        SlotInput::In(fid) => {
                            in_coefs.insert(*fid, f.elem(v));
                        }
                    }
                }
            }
            (e.id, EdgeMap { source_coef, in_coefs })
        })
        .collect();
    let decoders = terminals
        .iter()
        .zip(decoders)
        .map(|(&t, d)| {
            net.in_edges(t)
                .iter()
                .zip(d)
                .map(|(e, v)| (e.id, f.elem(v)))
                .collect::<BTreeMap<EdgeId, FieldElement>>()
        })
        .collect::<Vec<_>>();
    // Decoders were computed per role; reorder to the terminal list order.
    let mut decoder_by_node: BTreeMap<NodeId, BTreeMap<EdgeId, FieldElement>> =
        terminals.iter().copied().zip(decoders).collect();
    let decoders: Vec<BTreeMap<EdgeId, FieldElement>> = net
        .terminals()
        .iter()
        .map(|t| decoder_by_node.remove(t).expect("every terminal has a decoder"))
        .collect();

    let code = ScalarLinearCode { field: f, edge_maps, decoders };
    let ok = netcode::verify_transfer(net, &code).unwrap_or(false)
        && netcode::verify_exhaustive(net, &code).unwrap_or(false);
    if !ok {
        return Err(ConstructorError::ConstructionFailed);
    }
    Ok(code)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifier::Labeling;
    use crate::fixtures;
    use crate::gf::admissible_alphas;
    use crate::netcode::{is_xor_code, verify_exhaustive, verify_fractional};
    use proptest::prelude::*;

    fn witness_for(net: &SumNetwork) -> WitnessPair {
        match classifier::classify(net).unwrap() {
            classifier::SolvabilityClass::Nonsolvable(w) => w,
            classifier::SolvabilityClass::SolvableExceptF2(w) => w,
            other => panic!("fixture has no witness: {other:?}"),
        }
    }

    #[test]
    fn bottleneck_has_xor_code_over_gf2() {
        let net = fixtures::bottleneck();
        let f = PrimeField::new(2).unwrap();
        let out = search_scalar(&net, f, &SearchBudget::exhaustive(), true);
        let code = out.found.expect("bottleneck is solvable");
        assert!(out.complete);
        assert!(is_xor_code(&code));
        assert!(verify_exhaustive(&net, &code).unwrap());
    }

    #[test]
    fn nonsolvable_fixture_has_no_scalar_code() {
        let net = fixtures::nonsolvable_witness();
        for p in [2u64, 3] {
            let f = PrimeField::new(p).unwrap();
            let out = search_scalar(&net, f, &SearchBudget::exhaustive(), false);
            assert_eq!(out.found, None);
            assert!(out.complete, "absence must be definitive over GF({p})");
        }
    }

    #[test]
    fn f2_exception_fixture_splits_by_field() {
        let net = fixtures::f2_exception_witness();
        let f2 = PrimeField::new(2).unwrap();
        let out2 = search_scalar(&net, f2, &SearchBudget::exhaustive(), false);
        assert_eq!(out2.found, None);
        assert!(out2.complete);

        let f3 = PrimeField::new(3).unwrap();
        let out3 = search_scalar(&net, f3, &SearchBudget::exhaustive(), false);
        let code = out3.found.expect("solvable over GF(3)");
        assert!(verify_exhaustive(&net, &code).unwrap());
    }

    #[test]
    fn budget_exhaustion_is_not_definitive() {
        let net = fixtures::nonsolvable_witness();
        let f = PrimeField::new(3).unwrap();
        let budget = SearchBudget::with_max_codes(2);
        let out = search_scalar(&net, f, &budget, false);
        assert_eq!(out.found, None);
        assert!(!out.complete);
    }

    #[test]
    fn xor_stage_result_is_an_xor_code() {
        // Solvable net over GF(5): the xor-first stage should produce a
        // {0,±1} code even without xor_only.
        let net = fixtures::nine_disjoint();
        let f = PrimeField::new(5).unwrap();
        let out = search_scalar(&net, f, &SearchBudget::exhaustive(), false);
        let code = out.found.unwrap();
        assert!(is_xor_code(&code));
    }

    #[test]
    fn restricted_coefficient_set_is_respected() {
        let net = fixtures::nine_disjoint();
        let f = PrimeField::new(5).unwrap();
        let budget = SearchBudget {
            max_codes: u64::MAX,
            coefficient_set: Some(vec![0, 2]),
            time_limit: None,
        };
        let out = search_scalar(&net, f, &budget, false);
        // With coefficients {0,2} only, each terminal sees 2x_i on its three
        // in-edges and needs decoder values from {0,2}: 2·2=4 ≠ 1, so no code.
        assert_eq!(out.found, None);
        assert!(out.complete);
    }

    #[test]
    fn fractional_1_1_agrees_with_scalar() {
        for net in [fixtures::bottleneck(), fixtures::nonsolvable_witness()] {
            let f = PrimeField::new(2).unwrap();
            let scalar = search_scalar(&net, f, &SearchBudget::exhaustive(), false);
            let frac = search_fractional(&net, f, 1, 1, &SearchBudget::exhaustive());
            assert_eq!(scalar.found.is_some(), frac.found.is_some());
            assert_eq!(scalar.complete, frac.complete);
            if let Some(code) = frac.found {
                assert!(verify_fractional(&net, &code).unwrap());
            }
        }
    }

    #[test]
    fn fractional_2_3_found_on_nonsolvable_fixture() {
        let net = fixtures::nonsolvable_witness();
        let f = PrimeField::new(2).unwrap();
        let out = search_fractional(&net, f, 2, 3, &SearchBudget::exhaustive());
        let code = out.found.expect("rate 2/3 is achievable");
        assert!(out.complete);
        assert!(verify_fractional(&net, &code).unwrap());
        assert_eq!(
            netcode::verify_fractional_exhaustive(&net, &code).unwrap(),
            Some(true)
        );
    }

    #[test]
    fn fractional_widening_on_solvable_net() {
        let net = fixtures::bottleneck();
        let f = PrimeField::new(3).unwrap();
        let out = search_fractional(&net, f, 2, 2, &SearchBudget::exhaustive());
        let code = out.found.expect("scalar-solvable nets have (2,2) codes");
        assert!(verify_fractional(&net, &code).unwrap());
        let out = search_fractional(&net, f, 2, 3, &SearchBudget::exhaustive());
        assert!(verify_fractional(&net, &out.found.unwrap()).unwrap());
    }

    #[test]
    fn fractional_k_above_n_is_inconclusive() {
        let net = fixtures::nine_disjoint();
        let f = PrimeField::new(2).unwrap();
        let out = search_fractional(&net, f, 2, 1, &SearchBudget::exhaustive());
        assert_eq!(out.found, None);
        assert!(!out.complete);
    }

    #[test]
    fn cut_bound_examples() {
        let net = fixtures::nonsolvable_witness();
        let w = witness_for(&net);
        assert!(cut_bound_check(&net, &w, 2, 3).unwrap());
        assert!(!cut_bound_check(&net, &w, 1, 1).unwrap());
        assert!(!cut_bound_check(&net, &w, 3, 4).unwrap());
        assert!(cut_bound_check(&net, &w, 4, 6).unwrap());
        // Rates above 2/3 are rejected for every (k,n) up to 9.
        for k in 1..=9u64 {
            for n in 1..=9u64 {
                assert_eq!(cut_bound_check(&net, &w, k, n).unwrap(), 3 * k <= 2 * n);
            }
        }
    }

    #[test]
    fn cut_bound_rejects_invalid_witness() {
        let net = fixtures::f2_exception_witness();
        // This fixture has no nonsolvability witness; borrow its labeling.
        let w = WitnessPair {
            e1: fixtures::WITNESS_E1,
            e2: fixtures::WITNESS_E2,
            labeling: Labeling::identity(),
        };
        assert_eq!(
            cut_bound_check(&net, &w, 2, 3),
            Err(ConstructorError::InvalidWitness)
        );
    }

    #[test]
    #[should_panic(expected = "positive")]
    fn cut_bound_rejects_zero_rate() {
        let net = fixtures::nonsolvable_witness();
        let w = witness_for(&net);
        let _ = cut_bound_check(&net, &w, 0, 3);
    }

    #[test]
    fn path_set_exists_for_f2_exception_fixture() {
        let net = fixtures::f2_exception_witness();
        let w = witness_for(&net);
        let paths = find_path_set(&net, &w).unwrap();
        // Q1 must avoid e1 and Q2 must avoid e2 (both are found with the
        // pair removed, so they avoid both).
        assert!(!paths.q1.contains(&w.e1) && !paths.q1.contains(&w.e2));
        assert!(!paths.q2.contains(&w.e1) && !paths.q2.contains(&w.e2));
        for path in [&paths.s1_to_tail_e1, &paths.s3_to_tail_e1] {
            let last_head = path
                .last()
                .map(|&id| net.edge(id).unwrap().head)
                .unwrap_or_else(|| w.labeling.source_node(&net, 0));
            assert_eq!(last_head, net.edge(w.e1).unwrap().tail);
        }
    }

    #[test]
    fn alpha_code_on_fixture_over_gf3() {
        let net = fixtures::f2_exception_witness();
        let w = witness_for(&net);
        let f = PrimeField::new(3).unwrap();
        let code = construct_alpha_code(&net, &w, f, f.elem(2)).unwrap();
        assert!(verify_exhaustive(&net, &code).unwrap());
        assert!(netcode::verify_transfer(&net, &code).unwrap());
    }

    #[test]
    fn alpha_code_for_every_admissible_alpha() {
        let net = fixtures::f2_exception_witness();
        let w = witness_for(&net);
        for p in [3u64, 5, 7] {
            let f = PrimeField::new(p).unwrap();
            for alpha in admissible_alphas(f) {
                let code = construct_alpha_code(&net, &w, f, alpha)
                    .unwrap_or_else(|e| panic!("p={p} alpha={}: {e}", alpha.value()));
                assert!(verify_exhaustive(&net, &code).unwrap());
            }
        }
    }

    #[test]
    fn alpha_code_rejects_gf2_and_degenerate_alpha() {
        let net = fixtures::f2_exception_witness();
        let w = witness_for(&net);
        let f2 = PrimeField::new(2).unwrap();
        assert_eq!(
            construct_alpha_code(&net, &w, f2, f2.elem(1)),
            Err(ConstructorError::InvalidAlpha)
        );
        let f3 = PrimeField::new(3).unwrap();
        assert_eq!(
            construct_alpha_code(&net, &w, f3, f3.elem(1)),
            Err(ConstructorError::InvalidAlpha)
        );
        // Alpha from the wrong field.
        let f5 = PrimeField::new(5).unwrap();
        assert_eq!(
            construct_alpha_code(&net, &w, f3, f5.elem(2)),
            Err(ConstructorError::InvalidAlpha)
        );
    }

    #[test]
    fn alpha_code_rejects_invalid_witness() {
        // The nonsolvable fixture's designed pair is not an F2-exception
        // witness (each edge disconnects three pairs).
        let net = fixtures::nonsolvable_witness();
        let w = WitnessPair {
            e1: fixtures::WITNESS_E1,
            e2: fixtures::WITNESS_E2,
            labeling: Labeling::identity(),
        };
        let f = PrimeField::new(3).unwrap();
        assert_eq!(
            construct_alpha_code(&net, &w, f, f.elem(2)),
            Err(ConstructorError::InvalidWitness)
        );
    }

    /// Plain enumerator with no normalization: every input of every edge is
    /// a slot. Used to validate that pinning single-input edges to 1 loses
    /// no codes.
    fn unnormalized_code_exists(net: &SumNetwork, f: PrimeField) -> Option<bool> {
        let inputs = edge_inputs(net);
        let total: usize = inputs.iter().map(|(_, ins)| ins.len()).sum();
        if total > 8 {
            return None;
        }
        let mut idx = vec![0u64; total];
        let p = f.modulus();
        loop {
            // Build a code candidate from idx.
            let mut maps = BTreeMap::new();
            let mut cursor = 0;
            for (id, ins) in &inputs {
                let mut source_coef = None;
                let mut in_coefs = BTreeMap::new();
                for input in ins {
                    let c = f.elem(idx[cursor]);
                    cursor += 1;
                    match input {
                        SlotInput::Source => source_coef = Some(c),
                        SlotInput::In(fid) => {
                            in_coefs.insert(*fid, c);
                        }
                    }
                }
                maps.insert(*id, EdgeMap { source_coef, in_coefs });
            }
            let mut probe = ScalarLinearCode {
                field: f,
                edge_maps: maps,
                decoders: vec![BTreeMap::new(); 3],
            };
            // Fill decoders with zeros of the right shape, then solve them.
            for (j, &t) in net.terminals().iter().enumerate() {
                probe.decoders[j] = net
                    .in_edges(t)
                    .iter()
                    .map(|e| (e.id, f.zero()))
                    .collect();
            }
            let transfers = netcode::transfer_vectors(net, &probe).unwrap();
            let mut all = true;
            for (j, &t) in net.terminals().iter().enumerate() {
                let in_ids: Vec<EdgeId> = net.in_edges(t).iter().map(|e| e.id).collect();
                let tv: Vec<[u64; 3]> = in_ids.iter().map(|id| transfers[id]).collect();
                if solve_decoder(&tv, SUM_TARGETS[j], f, None).is_none() {
                    all = false;
                    break;
                }
            }
            if all {
                return Some(true);
            }
            let mut i = total;
            loop {
                if i == 0 {
                    return Some(false);
                }
                i -= 1;
                idx[i] += 1;
                if idx[i] < p {
                    break;
                }
                idx[i] = 0;
            }
        }
    }

    /// Tiny random nets for the normalization validation (few edges so the
    /// unnormalized sweep stays feasible).
    fn arb_tiny_net() -> impl Strategy<Value = SumNetwork> {
        (0u32..2, prop::collection::vec((0u32..64, 0u32..64), 3..7)).prop_map(
            |(internals, raw)| {
                let n = 6 + internals;
                let tails = 3 + internals;
                let edges: Vec<(u32, u32)> = raw
                    .into_iter()
                    .map(|(a, b)| {
                        let tail = a % tails;
                        let lo = if tail < 3 { 3 } else { tail + 1 };
                        let head = lo + b % (n - lo);
                        (tail, head)
                    })
                    .collect();
                SumNetwork::new(n, &edges, &[0, 1, 2], &[n - 3, n - 2, n - 1]).unwrap()
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        /// Normalizing single-input edges to coefficient 1 preserves code
        /// existence exactly.
        #[test]
        fn normalization_is_lossless(net in arb_tiny_net()) {
            for p in [2u64, 3] {
                let f = PrimeField::new(p).unwrap();
                if let Some(unnormalized) = unnormalized_code_exists(&net, f) {
                    let normalized = search_scalar(&net, f, &SearchBudget::exhaustive(), false);
                    prop_assert!(normalized.complete);
                    prop_assert_eq!(normalized.found.is_some(), unnormalized);
                }
            }
        }

        /// Every code any search returns is verified.
        #[test]
        fn searches_only_return_verified_codes(net in arb_tiny_net()) {
            let f = PrimeField::new(3).unwrap();
            let out = search_scalar(&net, f, &SearchBudget::exhaustive(), false);
            if let Some(code) = out.found {
                prop_assert!(verify_exhaustive(&net, &code).unwrap());
            }
            let out = search_scalar(&net, f, &SearchBudget::exhaustive(), true);
            if let Some(code) = out.found {
                prop_assert!(is_xor_code(&code));
                prop_assert!(verify_exhaustive(&net, &code).unwrap());
            }
        }
    }
}
