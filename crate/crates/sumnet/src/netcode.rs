//! Representation, evaluation, and verification of scalar and fractional
//! linear network codes on sum-networks.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::gf::{FieldElement, PrimeField};
use crate::multigraph::{EdgeId, SumNetwork};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum NetcodeError {
    #[error("code does not match the network: {0}")]
    CodeShapeMismatch(String),
    #[error("input code does not verify on its network")]
    InputCodeInvalid,
}

/// Local coding map of one edge: a coefficient per input. The inputs of an
/// edge are all in-edges of its tail plus the tail's own source symbol when
/// the tail is a source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    pub source_coef: Option<FieldElement>,
    pub in_coefs: BTreeMap<EdgeId, FieldElement>,
}

/// A scalar linear network code: one symbol per edge per use, terminal
/// decoders as linear combinations of incoming edge symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScalarLinearCode {
    pub field: PrimeField,
    pub edge_maps: BTreeMap<EdgeId, EdgeMap>,
    /// One decoder per terminal (in terminal-list order), keyed by in-edge.
    pub decoders: Vec<BTreeMap<EdgeId, FieldElement>>,
}

impl ScalarLinearCode {
    /// All-zero code with the correct shape for `net`.
    pub fn zero(net: &SumNetwork, field: PrimeField) -> ScalarLinearCode {
        let edge_maps = net
            .edges()
            .iter()
            .map(|e| {
                let map = EdgeMap {
                    source_coef: net.is_source(e.tail).then(|| field.zero()),
                    in_coefs: net
                        .in_edges(e.tail)
                        .iter()
                        .map(|f| (f.id, field.zero()))
                        .collect(),
                };
                (e.id, map)
            })
            .collect();
        let decoders = net
            .terminals()
            .iter()
            .map(|&t| {
                net.in_edges(t)
                    .iter()
                    .map(|f| (f.id, field.zero()))
                    .collect()
            })
            .collect();
        ScalarLinearCode { field, edge_maps, decoders }
    }
}

/// Check that a code has exactly the shape `net` requires: a map per edge
/// covering exactly the tail's inputs, a decoder per terminal covering
/// exactly its in-edges, and a 3-source network.
pub fn check_shape(net: &SumNetwork, code: &ScalarLinearCode) -> Result<(), NetcodeError> {
    if net.sources().len() != 3 {
        return Err(NetcodeError::CodeShapeMismatch(format!(
            "expected 3 sources, found {}",
            net.sources().len()
        )));
    }
    if code.edge_maps.len() != net.edges().len() {
        return Err(NetcodeError::CodeShapeMismatch(format!(
            "{} edge maps for {} edges",
            code.edge_maps.len(),
            net.edges().len()
        )));
    }
    for e in net.edges() {
        let map = code
            .edge_maps
            .get(&e.id)
            .ok_or_else(|| NetcodeError::CodeShapeMismatch(format!("no map for edge {:?}", e.id)))?;
        if map.source_coef.is_some() != net.is_source(e.tail) {
            return Err(NetcodeError::CodeShapeMismatch(format!(
                "edge {:?}: source coefficient presence does not match tail",
                e.id
            )));
        }
        let expected: Vec<EdgeId> = net.in_edges(e.tail).iter().map(|f| f.id).collect();
        let got: Vec<EdgeId> = map.in_coefs.keys().copied().collect();
        if expected != got {
            return Err(NetcodeError::CodeShapeMismatch(format!(
                "edge {:?}: input edges {:?} vs expected {:?}",
                e.id, got, expected
            )));
        }
        for fe in map.in_coefs.values().chain(map.source_coef.as_ref()) {
            if fe.field() != code.field {
                return Err(NetcodeError::CodeShapeMismatch(
                    "coefficient from a different field".into(),
                ));
            }
        }
    }
    if code.decoders.len() != net.terminals().len() {
        return Err(NetcodeError::CodeShapeMismatch(format!(
            "{} decoders for {} terminals",
            code.decoders.len(),
            net.terminals().len()
        )));
    }
    for (j, &t) in net.terminals().iter().enumerate() {
        let expected: Vec<EdgeId> = net.in_edges(t).iter().map(|f| f.id).collect();
        let got: Vec<EdgeId> = code.decoders[j].keys().copied().collect();
        if expected != got {
            return Err(NetcodeError::CodeShapeMismatch(format!(
                "terminal {j}: decoder edges {:?} vs expected {:?}",
                got, expected
            )));
        }
        for fe in code.decoders[j].values() {
            if fe.field() != code.field {
                return Err(NetcodeError::CodeShapeMismatch(
                    "decoder coefficient from a different field".into(),
                ));
            }
        }
    }
    Ok(())
}

/// Run the network once: compute every edge symbol in topological order and
/// every terminal output.
pub fn evaluate(
    net: &SumNetwork,
    code: &ScalarLinearCode,
    inputs: [FieldElement; 3],
) -> Result<(BTreeMap<EdgeId, FieldElement>, Vec<FieldElement>), NetcodeError> {
    check_shape(net, code)?;
    let f = code.field;
    for x in &inputs {
        if x.field() != f {
            return Err(NetcodeError::CodeShapeMismatch("input from a different field".into()));
        }
    }
    let mut symbols: BTreeMap<EdgeId, u64> = BTreeMap::new();
    for v in net.topological_order() {
        for e in net.out_edges(v) {
            let map = &code.edge_maps[&e.id];
            let mut acc = 0u64;
            if let Some(c) = map.source_coef {
                let i = net.sources().iter().position(|&s| s == v).expect("tail is a source");
                acc = f.add_raw(acc, f.mul_raw(c.value(), inputs[i].value()));
            }
            for (fid, c) in &map.in_coefs {
                acc = f.add_raw(acc, f.mul_raw(c.value(), symbols[fid]));
            }
            symbols.insert(e.id, acc);
        }
    }
    let outputs = code
        .decoders
        .iter()
        .map(|dec| {
            let mut acc = 0u64;
            for (fid, c) in dec {
                acc = f.add_raw(acc, f.mul_raw(c.value(), symbols[fid]));
            }
            f.elem(acc)
        })
        .collect();
    Ok((symbols.into_iter().map(|(k, v)| (k, f.elem(v))).collect(), outputs))
}

/// Per-edge transfer vectors: the coefficients of (x1, x2, x3) carried by
/// each edge symbol, computed in topological order.
pub fn transfer_vectors(
    net: &SumNetwork,
    code: &ScalarLinearCode,
) -> Result<BTreeMap<EdgeId, [u64; 3]>, NetcodeError> {
    check_shape(net, code)?;
    let f = code.field;
    let mut transfers: BTreeMap<EdgeId, [u64; 3]> = BTreeMap::new();
    for v in net.topological_order() {
        for e in net.out_edges(v) {
            let map = &code.edge_maps[&e.id];
            let mut acc = [0u64; 3];
            if let Some(c) = map.source_coef {
                let i = net.sources().iter().position(|&s| s == v).expect("tail is a source");
                acc[i] = f.add_raw(acc[i], c.value());
            }
            for (fid, c) in &map.in_coefs {
                let t = transfers[fid];
                for k in 0..3 {
                    acc[k] = f.add_raw(acc[k], f.mul_raw(c.value(), t[k]));
                }
            }
            transfers.insert(e.id, acc);
        }
    }
    Ok(transfers)
}

/// Decoded transfer vector of each terminal.
pub fn terminal_transfers(
    net: &SumNetwork,
    code: &ScalarLinearCode,
) -> Result<Vec<[u64; 3]>, NetcodeError> {
    let transfers = transfer_vectors(net, code)?;
    let f = code.field;
    Ok(code
        .decoders
        .iter()
        .map(|dec| {
            let mut acc = [0u64; 3];
            for (fid, c) in dec {
                let t = transfers[fid];
                for k in 0..3 {
                    acc[k] = f.add_raw(acc[k], f.mul_raw(c.value(), t[k]));
                }
            }
            acc
        })
        .collect())
}

/// True iff for every input triple, every terminal outputs x1+x2+x3.
pub fn verify_exhaustive(net: &SumNetwork, code: &ScalarLinearCode) -> Result<bool, NetcodeError> {
    check_shape(net, code)?;
    let f = code.field;
    let p = f.modulus();
    for x1 in 0..p {
        for x2 in 0..p {
            for x3 in 0..p {
                let inputs = [f.elem(x1), f.elem(x2), f.elem(x3)];
                let want = f.add_raw(f.add_raw(x1, x2), x3);
                let (_, outputs) = evaluate(net, code, inputs)?;
                if outputs.iter().any(|o| o.value() != want) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// First input triple on which some terminal fails, if any.
pub fn first_failing_input(
    net: &SumNetwork,
    code: &ScalarLinearCode,
) -> Result<Option<([u64; 3], usize, u64)>, NetcodeError> {
    check_shape(net, code)?;
    let f = code.field;
    let p = f.modulus();
    for x1 in 0..p {
        for x2 in 0..p {
            for x3 in 0..p {
                let inputs = [f.elem(x1), f.elem(x2), f.elem(x3)];
                let want = f.add_raw(f.add_raw(x1, x2), x3);
                let (_, outputs) = evaluate(net, code, inputs)?;
                if let Some((j, out)) =
                    outputs.iter().enumerate().find(|(_, o)| o.value() != want)
                {
                    return Ok(Some(([x1, x2, x3], j, out.value())));
                }
            }
        }
    }
    Ok(None)
}

/// True iff every terminal's decoded transfer vector is (1,1,1). Equivalent
/// to `verify_exhaustive` by linearity.
pub fn verify_transfer(net: &SumNetwork, code: &ScalarLinearCode) -> Result<bool, NetcodeError> {
    Ok(terminal_transfers(net, code)?.iter().all(|t| *t == [1, 1, 1]))
}

/// True iff every coefficient of the code (edge maps and decoders) lies in
/// {0, +1, −1}: nodes only add and subtract, a zero meaning "input unused".
pub fn is_xor_code(code: &ScalarLinearCode) -> bool {
    let p = code.field.modulus();
    let ok = |fe: &FieldElement| fe.value() == 0 || fe.value() == 1 || fe.value() == p - 1;
    code.edge_maps.values().all(|m| {
        m.source_coef.iter().all(&ok) && m.in_coefs.values().all(&ok)
    }) && code.decoders.iter().all(|d| d.values().all(&ok))
}

/// Code for the reverse network, built by transposing the forward code:
/// - the coefficient of reversed edge rev(f) into rev(e) is the forward
///   coefficient of e into f,
/// - the injection of the reverse source t_j into rev(e) is the forward
///   decoder coefficient of e at t_j,
/// - the reverse decoder of terminal s_i on rev(e) is the forward injection
///   coefficient of s_i into e.
///
/// An induction over reverse-topological order shows each reversed edge
/// carries Σ_j S(e,j)·x'_j, where S(e,j) is the forward sensitivity of
/// terminal j to edge e's symbol; validity of the forward code then makes
/// every reverse terminal decode x'_1+x'_2+x'_3. All coefficients are copies,
/// so XOR-ness is preserved.
pub fn reverse_code(
    net: &SumNetwork,
    code: &ScalarLinearCode,
) -> Result<ScalarLinearCode, NetcodeError> {
    check_shape(net, code)?;
    if !verify_transfer(net, code)? {
        return Err(NetcodeError::InputCodeInvalid);
    }
    let rev = net.reverse();
    let f = code.field;
    let edge_maps: BTreeMap<EdgeId, EdgeMap> = rev
        .edges()
        .iter()
        .map(|re| {
            // re has the same id as the forward edge e; its tail is e's head.
            let in_coefs = rev
                .in_edges(re.tail)
                .iter()
                .map(|rg| {
                    // rg reversed = forward edge g with tail(g) = head(e).
                    let c = code.edge_maps[&rg.id].in_coefs[&re.id];
                    (rg.id, c)
                })
                .collect();
            let source_coef = rev.is_source(re.tail).then(|| {
                let j = rev
                    .sources()
                    .iter()
                    .position(|&s| s == re.tail)
                    .expect("tail is a reverse source");
                code.decoders[j].get(&re.id).copied().unwrap_or_else(|| f.zero())
            });
            (re.id, EdgeMap { source_coef, in_coefs })
        })
        .collect();
    let decoders = rev
        .terminals()
        .iter()
        .map(|&t| {
            rev.in_edges(t)
                .iter()
                .map(|re| {
                    let c = code.edge_maps[&re.id]
                        .source_coef
                        .expect("forward tail is a source");
                    (re.id, c)
                })
                .collect()
        })
        .collect();
    let reversed = ScalarLinearCode { field: f, edge_maps, decoders };
    debug_assert!(verify_transfer(&rev, &reversed).unwrap_or(false));
    Ok(reversed)
}

/// Small dense matrix over GF(p), row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<u64>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: u64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, other: &Mat, f: PrimeField) -> Mat {
        assert_eq!(self.cols, other.rows, "matrix dimension mismatch");
        let mut out = Mat::zero(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let v = f.add_raw(out.get(r, c), f.mul_raw(a, other.get(k, c)));
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn add_assign(&mut self, other: &Mat, f: PrimeField) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a = f.add_raw(*a, *b);
        }
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u64], f: PrimeField) -> Vec<u64> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                v.iter().enumerate().fold(0, |acc, (c, &x)| {
                    f.add_raw(acc, f.mul_raw(self.get(r, c), x))
                })
            })
            .collect()
    }
}

/// Solve the linear system `rows · x = rhs` over GF(p) by Gaussian
/// elimination. Returns one solution (free variables set to zero), or None
/// when the system is inconsistent.
pub fn solve_linear(rows: &[Vec<u64>], rhs: &[u64], f: PrimeField) -> Option<Vec<u64>> {
    assert_eq!(rows.len(), rhs.len());
    let m = rows.len();
    let cols = rows.first().map_or(0, |r| r.len());
    let mut a: Vec<Vec<u64>> = rows
        .iter()
        .zip(rhs)
        .map(|(r, &b)| {
            assert_eq!(r.len(), cols);
            let mut row: Vec<u64> = r.iter().map(|&v| f.reduce(v)).collect();
            row.push(f.reduce(b));
            row
        })
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for c in 0..cols {
        let Some(pr) = (rank..m).find(|&r| a[r][c] != 0) else {
            continue;
        };
        a.swap(rank, pr);
        let inv = f.inv_raw(a[rank][c]).expect("pivot is nonzero");
        for v in a[rank].iter_mut() {
            *v = f.mul_raw(*v, inv);
        }
        let pivot_row = a[rank].clone();
        for (r, row) in a.iter_mut().enumerate() {
            if r != rank && row[c] != 0 {
                let factor = row[c];
                for (v, &pv) in row.iter_mut().zip(&pivot_row) {
                    *v = f.sub_raw(*v, f.mul_raw(factor, pv));
                }
            }
        }
        pivot_cols.push(c);
        rank += 1;
        if rank == m {
            break;
        }
    }
    // Inconsistent iff a zero row has nonzero right-hand side.
    if a[rank..].iter().any(|row| row[cols] != 0) {
        return None;
    }
    let mut x = vec![0u64; cols];
    for (r, &c) in pivot_cols.iter().enumerate() {
        x[c] = a[r][cols];
    }
    Some(x)
}

/// Per-edge map of a (k,n) fractional code: an n×n matrix per in-edge of the
/// tail and an n×k injection matrix when the tail is a source.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FracEdgeMap {
    pub source_mat: Option<Mat>,
    pub in_mats: BTreeMap<EdgeId, Mat>,
}

/// A (k,n) fractional linear network code: sources are blocked into packets
/// of k symbols, edges carry packets of n symbols, and each terminal decodes
/// one k-symbol sum block with a k×n matrix per in-edge. Rate k/n.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FractionalLinearCode {
    pub field: PrimeField,
    pub k: usize,
    pub n: usize,
    pub edge_maps: BTreeMap<EdgeId, FracEdgeMap>,
    pub decoders: Vec<BTreeMap<EdgeId, Mat>>,
}

fn check_fractional_shape(
    net: &SumNetwork,
    code: &FractionalLinearCode,
) -> Result<(), NetcodeError> {
    if net.sources().len() != 3 {
        return Err(NetcodeError::CodeShapeMismatch("expected 3 sources".into()));
    }
    if code.k == 0 || code.n == 0 {
        return Err(NetcodeError::CodeShapeMismatch("k and n must be at least 1".into()));
    }
    for e in net.edges() {
        let map = code.edge_maps.get(&e.id).ok_or_else(|| {
            NetcodeError::CodeShapeMismatch(format!("no map for edge {:?}", e.id))
        })?;
        if map.source_mat.is_some() != net.is_source(e.tail) {
            return Err(NetcodeError::CodeShapeMismatch(format!(
                "edge {:?}: source matrix presence does not match tail",
                e.id
            )));
        }
        if let Some(m) = &map.source_mat {
            if (m.rows, m.cols) != (code.n, code.k) {
                return Err(NetcodeError::CodeShapeMismatch("source matrix shape".into()));
            }
        }
        let expected: Vec<EdgeId> = net.in_edges(e.tail).iter().map(|f| f.id).collect();
        let got: Vec<EdgeId> = map.in_mats.keys().copied().collect();
        if expected != got {
            return Err(NetcodeError::CodeShapeMismatch(format!(
                "edge {:?}: input matrices do not cover in-edges",
                e.id
            )));
        }
        for m in map.in_mats.values() {
            if (m.rows, m.cols) != (code.n, code.n) {
                return Err(NetcodeError::CodeShapeMismatch("edge matrix shape".into()));
            }
        }
    }
    if code.decoders.len() != net.terminals().len() {
        return Err(NetcodeError::CodeShapeMismatch("decoder count".into()));
    }
    for (j, &t) in net.terminals().iter().enumerate() {
        let expected: Vec<EdgeId> = net.in_edges(t).iter().map(|f| f.id).collect();
        let got: Vec<EdgeId> = code.decoders[j].keys().copied().collect();
        if expected != got {
            return Err(NetcodeError::CodeShapeMismatch(format!(
                "terminal {j}: decoder matrices do not cover in-edges"
            )));
        }
        for m in code.decoders[j].values() {
            if (m.rows, m.cols) != (code.k, code.n) {
                return Err(NetcodeError::CodeShapeMismatch("decoder matrix shape".into()));
            }
        }
    }
    Ok(())
}

/// Per-edge n×3k transfer matrices of a fractional code.
fn fractional_transfers(
    net: &SumNetwork,
    code: &FractionalLinearCode,
) -> BTreeMap<EdgeId, Mat> {
    let f = code.field;
    let (k, n) = (code.k, code.n);
    let mut transfers: BTreeMap<EdgeId, Mat> = BTreeMap::new();
    for v in net.topological_order() {
        for e in net.out_edges(v) {
            let map = &code.edge_maps[&e.id];
            let mut acc = Mat::zero(n, 3 * k);
            if let Some(m) = &map.source_mat {
                let i = net.sources().iter().position(|&s| s == v).expect("tail is a source");
                for r in 0..n {
                    for c in 0..k {
                        let v0 = f.add_raw(acc.get(r, i * k + c), m.get(r, c));
                        acc.set(r, i * k + c, v0);
                    }
                }
            }
            for (fid, m) in &map.in_mats {
                acc.add_assign(&m.mul(&transfers[fid], f), f);
            }
            transfers.insert(e.id, acc);
        }
    }
    transfers
}

/// True iff each terminal's composite k×3k transfer matrix equals
/// [I_k | I_k | I_k], i.e. the terminal recovers the blockwise sum.
pub fn verify_fractional(
    net: &SumNetwork,
    code: &FractionalLinearCode,
) -> Result<bool, NetcodeError> {
    check_fractional_shape(net, code)?;
    let f = code.field;
    let k = code.k;
    let transfers = fractional_transfers(net, code);
    let mut want = Mat::zero(k, 3 * k);
    for b in 0..3 {
        for i in 0..k {
            want.set(i, b * k + i, 1);
        }
    }
    for dec in &code.decoders {
        let mut acc = Mat::zero(k, 3 * k);
        for (fid, m) in dec {
            acc.add_assign(&m.mul(&transfers[fid], f), f);
        }
        if acc != want {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive fractional verification over all |F|^{3k} input blocks.
/// Returns None when the sweep would exceed 729 states.
pub fn verify_fractional_exhaustive(
    net: &SumNetwork,
    code: &FractionalLinearCode,
) -> Result<Option<bool>, NetcodeError> {
    check_fractional_shape(net, code)?;
    let f = code.field;
    let (k, n) = (code.k, code.n);
    let p = f.modulus();
    let states = (p as u128).pow(3 * k as u32);
    if states > 729 {
        return Ok(None);
    }
    let mut blocks = vec![0u64; 3 * k];
    loop {
        // Evaluate the network on this input assignment.
        let mut symbols: BTreeMap<EdgeId, Vec<u64>> = BTreeMap::new();
        for v in net.topological_order() {
            for e in net.out_edges(v) {
                let map = &code.edge_maps[&e.id];
                let mut acc = vec![0u64; n];
                if let Some(m) = &map.source_mat {
                    let i = net.sources().iter().position(|&s| s == v).unwrap();
                    let x = &blocks[i * k..(i + 1) * k];
                    for (a, b) in acc.iter_mut().zip(m.apply(x, f)) {
                        *a = f.add_raw(*a, b);
                    }
                }
                for (fid, m) in &map.in_mats {
                    for (a, b) in acc.iter_mut().zip(m.apply(&symbols[fid], f)) {
                        *a = f.add_raw(*a, b);
                    }
                }
                symbols.insert(e.id, acc);
            }
        }
        let want: Vec<u64> = (0..k)
            .map(|i| {
                f.add_raw(f.add_raw(blocks[i], blocks[k + i]), blocks[2 * k + i])
            })
            .collect();
        for dec in &code.decoders {
            let mut acc = vec![0u64; k];
            for (fid, m) in dec {
                for (a, b) in acc.iter_mut().zip(m.apply(&symbols[fid], f)) {
                    *a = f.add_raw(*a, b);
                }
            }
            if acc != want {
                return Ok(Some(false));
            }
        }
        // Odometer step.
        let mut i = 0;
        loop {
            if i == blocks.len() {
                return Ok(Some(true));
            }
            blocks[i] += 1;
            if blocks[i] < p {
                break;
            }
            blocks[i] = 0;
            i += 1;
        }
    }
}

/// Wrap a scalar code as a (1,1) fractional code.
pub fn fractional_from_scalar(code: &ScalarLinearCode) -> FractionalLinearCode {
    let one_by_one = |fe: &FieldElement| Mat { rows: 1, cols: 1, data: vec![fe.value()] };
    FractionalLinearCode {
        field: code.field,
        k: 1,
        n: 1,
        edge_maps: code
            .edge_maps
            .iter()
            .map(|(id, m)| {
                (
                    *id,
                    FracEdgeMap {
                        source_mat: m.source_coef.as_ref().map(&one_by_one),
                        in_mats: m
                            .in_coefs
                            .iter()
                            .map(|(f, c)| (*f, one_by_one(c)))
                            .collect(),
                    },
                )
            })
            .collect(),
        decoders: code
            .decoders
            .iter()
            .map(|d| d.iter().map(|(f, c)| (*f, one_by_one(c))).collect())
            .collect(),
    }
}
