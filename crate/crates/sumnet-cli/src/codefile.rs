//! The code file format. A scalar code:
//!
//! ```text
//! field <p>
//! coef <edge> source <v>         # coefficient on the tail's own symbol
//! coef <edge> edge <in> <v>      # coefficient on in-edge <in> of the tail
//! decode <terminal> <in> <v>     # decoder coefficient at a terminal
//! ```
//!
//! A fractional (k,n) code adds a `rate <k> <n>` line and uses matrix
//! entries instead (`row`/`col` are 0-based):
//!
//! ```text
//! fcoef <edge> source <row> <col> <v>      # n×k injection matrix
//! fcoef <edge> edge <in> <row> <col> <v>   # n×n transfer matrix
//! fdecode <terminal> <in> <row> <col> <v>  # k×n decoder matrix
//! ```
//!
//! Unassigned coefficients are zero; the renderer writes every entry out
//! explicitly. Edges, nodes, and terminals are referenced by the names from
//! the accompanying network file.

use std::collections::BTreeSet;

use sumnet::gf::PrimeField;
use sumnet::multigraph::{EdgeId, NodeId};
use sumnet::netcode::{
    EdgeMap, FracEdgeMap, FractionalLinearCode, Mat, ScalarLinearCode,
};

use crate::netfile::NamedNetwork;
use crate::CliError;

#[derive(Debug, Clone)]
pub enum ParsedCode {
    Scalar(ScalarLinearCode),
    Fractional(FractionalLinearCode),
}

impl ParsedCode {
    pub fn field(&self) -> PrimeField {
        match self {
            ParsedCode::Scalar(c) => c.field,
            ParsedCode::Fractional(c) => c.field,
        }
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

pub fn parse_code(text: &str, named: &NamedNetwork) -> Result<ParsedCode, CliError> {
    let net = &named.net;

    // First pass: the field and optional rate declarations.
    let mut field: Option<PrimeField> = None;
    let mut rate: Option<(usize, usize)> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens = tokenize(raw);
        let parse_err = |col: usize, message: String| CliError::Parse { line, col, message };
        let Some(&(first_col, directive)) = tokens.first() else {
            continue;
        };
        match directive {
            "field" => {
                if field.is_some() {
                    return Err(parse_err(first_col, "duplicate `field` line".into()));
                }
                let (col, tok) = *tokens
                    .get(1)
                    .ok_or_else(|| parse_err(first_col, "expected `field <p>`".into()))?;
                let p: u64 = tok
                    .parse()
                    .map_err(|_| parse_err(col, format!("`{tok}` is not a number")))?;
                field =
                    Some(PrimeField::new(p).map_err(|_| CliError::InvalidField(p))?);
            }
            "rate" => {
                if rate.is_some() {
                    return Err(parse_err(first_col, "duplicate `rate` line".into()));
                }
                if tokens.len() != 3 {
                    return Err(parse_err(first_col, "expected `rate <k> <n>`".into()));
                }
                let num = |(col, tok): (usize, &str)| -> Result<usize, CliError> {
                    let v: usize = tok
                        .parse()
                        .map_err(|_| parse_err(col, format!("`{tok}` is not a number")))?;
                    if v == 0 {
                        return Err(parse_err(col, "rate components must be positive".into()));
                    }
                    Ok(v)
                };
                rate = Some((num(tokens[1])?, num(tokens[2])?));
            }
            "coef" | "decode" | "fcoef" | "fdecode" => {}
            other => {
                return Err(parse_err(first_col, format!("unknown directive `{other}`")));
            }
        }
    }
    let Some(f) = field else {
        return Err(CliError::Validation("code file has no `field` line".into()));
    };
    let p = f.modulus();

    // Zero-filled code of the right shape.
    let scalar_shape = || -> ScalarLinearCode {
        let edge_maps = net
            .edges()
            .iter()
            .map(|e| {
                let source_coef = net.is_source(e.tail).then(|| f.zero());
                let in_coefs =
                    net.in_edges(e.tail).iter().map(|g| (g.id, f.zero())).collect();
                (e.id, EdgeMap { source_coef, in_coefs })
            })
            .collect();
        let decoders = net
            .terminals()
            .iter()
            .map(|&t| net.in_edges(t).iter().map(|g| (g.id, f.zero())).collect())
            .collect();
        ScalarLinearCode { field: f, edge_maps, decoders }
    };
    let fractional_shape = |k: usize, n: usize| -> FractionalLinearCode {
        let edge_maps = net
            .edges()
            .iter()
            .map(|e| {
                let source_mat = net.is_source(e.tail).then(|| Mat::zero(n, k));
                let in_mats = net
                    .in_edges(e.tail)
                    .iter()
                    .map(|g| (g.id, Mat::zero(n, n)))
                    .collect();
                (e.id, FracEdgeMap { source_mat, in_mats })
            })
            .collect();
        let decoders = net
            .terminals()
            .iter()
            .map(|&t| {
                net.in_edges(t)
                    .iter()
                    .map(|g| (g.id, Mat::zero(k, n)))
                    .collect()
            })
            .collect();
        FractionalLinearCode { field: f, k, n, edge_maps, decoders }
    };
    let mut scalar = rate.is_none().then(scalar_shape);
    let mut fractional = rate.map(|(k, n)| fractional_shape(k, n));

    // Second pass: coefficient assignments.
    let mut assigned: BTreeSet<(u8, u32, u32, usize, usize)> = BTreeSet::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let tokens = tokenize(raw);
        let parse_err = |col: usize, message: String| CliError::Parse { line, col, message };
        let Some(&(first_col, directive)) = tokens.first() else {
            continue;
        };
        if directive == "field" || directive == "rate" {
            continue;
        }
        let scalar_kind = directive == "coef" || directive == "decode";
        if scalar_kind && rate.is_some() {
            return Err(parse_err(
                first_col,
                format!("`{directive}` is a scalar directive but a `rate` line is present"),
            ));
        }
        if !scalar_kind && rate.is_none() {
            return Err(parse_err(
                first_col,
                format!("`{directive}` needs a `rate <k> <n>` line"),
            ));
        }

        let value = |(col, tok): (usize, &str)| -> Result<u64, CliError> {
            let v: u64 = tok
                .parse()
                .map_err(|_| parse_err(col, format!("`{tok}` is not a number")))?;
            if v >= p {
                return Err(parse_err(col, format!("{v} is out of range for GF({p})")));
            }
            Ok(v)
        };
        let index = |(col, tok): (usize, &str), bound: usize, what: &str| -> Result<usize, CliError> {
            let v: usize = tok
                .parse()
                .map_err(|_| parse_err(col, format!("`{tok}` is not a number")))?;
            if v >= bound {
                return Err(parse_err(col, format!("{what} {v} out of range (max {})", bound - 1)));
            }
            Ok(v)
        };
        let edge_ref = |(col, tok): (usize, &str)| -> Result<EdgeId, CliError> {
            named
                .edge_by_name(tok)
                .ok_or_else(|| parse_err(col, format!("unknown edge `{tok}`")))
        };
        let terminal_ref = |(col, tok): (usize, &str)| -> Result<(usize, NodeId), CliError> {
            let id = named
                .node_by_name(tok)
                .ok_or_else(|| parse_err(col, format!("unknown node `{tok}`")))?;
            let idx = net
                .terminals()
                .iter()
                .position(|&t| t == id)
                .ok_or_else(|| parse_err(col, format!("`{tok}` is not a terminal")))?;
            Ok((idx, id))
        };
        // The input being assigned: either the tail's source symbol or a
        // named in-edge of `of` (an edge tail or a terminal node).
        let input_ref = |kw: (usize, &str),
                         arg: Option<(usize, &str)>,
                         of: NodeId|
         -> Result<Option<EdgeId>, CliError> {
            match kw.1 {
                "source" => {
                    if !net.is_source(of) {
                        return Err(parse_err(
                            kw.0,
                            "`source` only applies when the edge leaves a source node".into(),
                        ));
                    }
                    Ok(None)
                }
                "edge" => {
                    let (col, tok) = arg.ok_or_else(|| {
                        parse_err(kw.0, "expected an in-edge name after `edge`".into())
                    })?;
                    let id = named
                        .edge_by_name(tok)
                        .ok_or_else(|| parse_err(col, format!("unknown edge `{tok}`")))?;
                    if net.edge(id).expect("known edge").head != of {
                        return Err(parse_err(
                            col,
                            format!("`{tok}` is not an input here (its head is elsewhere)"),
                        ));
                    }
                    Ok(Some(id))
                }
                other => Err(parse_err(
                    kw.0,
                    format!("expected `source` or `edge`, found `{other}`"),
                )),
            }
        };
        let mut claim = |key: (u8, u32, u32, usize, usize), col: usize| -> Result<(), CliError> {
            if !assigned.insert(key) {
                return Err(parse_err(col, "coefficient assigned twice".into()));
            }
            Ok(())
        };

        match directive {
            "coef" => {
                // coef <edge> source <v> | coef <edge> edge <in> <v>
                if tokens.len() != 4 && tokens.len() != 5 {
                    return Err(parse_err(first_col, "malformed `coef` line".into()));
                }
                let eid = edge_ref(tokens[1])?;
                let tail = net.edge(eid).expect("known edge").tail;
                let input = input_ref(tokens[2], tokens.get(3).copied(), tail)?;
                let code = scalar.as_mut().expect("scalar mode");
                let map = code.edge_maps.get_mut(&eid).expect("edge map exists");
                match input {
                    None => {
                        if tokens.len() != 4 {
                            return Err(parse_err(first_col, "malformed `coef` line".into()));
                        }
                        claim((0, eid.0, 0, 0, 0), tokens[1].0)?;
                        map.source_coef = Some(f.elem(value(tokens[3])?));
                    }
                    Some(in_id) => {
                        if tokens.len() != 5 {
                            return Err(parse_err(first_col, "malformed `coef` line".into()));
                        }
                        claim((1, eid.0, in_id.0, 0, 0), tokens[1].0)?;
                        map.in_coefs.insert(in_id, f.elem(value(tokens[4])?));
                    }
                }
            }
            "decode" => {
                // decode <terminal> <in> <v>
                if tokens.len() != 4 {
                    return Err(parse_err(
                        first_col,
                        "expected `decode <terminal> <in-edge> <v>`".into(),
                    ));
                }
                let (tidx, tnode) = terminal_ref(tokens[1])?;
                let in_id = input_ref((tokens[2].0, "edge"), Some(tokens[2]), tnode)?
                    .expect("edge keyword returns an id");
                claim((2, tidx as u32, in_id.0, 0, 0), tokens[2].0)?;
                let code = scalar.as_mut().expect("scalar mode");
                code.decoders[tidx].insert(in_id, f.elem(value(tokens[3])?));
            }
            "fcoef" => {
                // fcoef <edge> source <r> <c> <v> | fcoef <edge> edge <in> <r> <c> <v>
                if tokens.len() != 6 && tokens.len() != 7 {
                    return Err(parse_err(first_col, "malformed `fcoef` line".into()));
                }
                let eid = edge_ref(tokens[1])?;
                let tail = net.edge(eid).expect("known edge").tail;
                let input = input_ref(tokens[2], tokens.get(3).copied(), tail)?;
                let (k, n) = rate.expect("fractional mode");
                let code = fractional.as_mut().expect("fractional mode");
                let map = code.edge_maps.get_mut(&eid).expect("edge map exists");
                match input {
                    None => {
                        if tokens.len() != 6 {
                            return Err(parse_err(first_col, "malformed `fcoef` line".into()));
                        }
                        let r = index(tokens[3], n, "row")?;
                        let c = index(tokens[4], k, "column")?;
                        claim((3, eid.0, 0, r, c), tokens[1].0)?;
                        let m = map.source_mat.as_mut().expect("source matrix exists");
                        m.set(r, c, value(tokens[5])?);
                    }
                    Some(in_id) => {
                        if tokens.len() != 7 {
                            return Err(parse_err(first_col, "malformed `fcoef` line".into()));
                        }
                        let r = index(tokens[4], n, "row")?;
                        let c = index(tokens[5], n, "column")?;
                        claim((4, eid.0, in_id.0, r, c), tokens[1].0)?;
                        let m = map.in_mats.get_mut(&in_id).expect("in matrix exists");
                        m.set(r, c, value(tokens[6])?);
                    }
                }
            }
            "fdecode" => {
                // fdecode <terminal> <in> <r> <c> <v>
                if tokens.len() != 6 {
                    return Err(parse_err(
                        first_col,
                        "expected `fdecode <terminal> <in-edge> <row> <col> <v>`".into(),
                    ));
                }
                let (tidx, tnode) = terminal_ref(tokens[1])?;
                let in_id = input_ref((tokens[2].0, "edge"), Some(tokens[2]), tnode)?
                    .expect("edge keyword returns an id");
                let (k, n) = rate.expect("fractional mode");
                let r = index(tokens[3], k, "row")?;
                let c = index(tokens[4], n, "column")?;
                claim((5, tidx as u32, in_id.0, r, c), tokens[2].0)?;
                let code = fractional.as_mut().expect("fractional mode");
                let m = code.decoders[tidx].get_mut(&in_id).expect("decoder matrix exists");
                m.set(r, c, value(tokens[5])?);
            }
            _ => unreachable!("directives filtered in the first pass"),
        }
    }

    Ok(match fractional {
        Some(code) => ParsedCode::Fractional(code),
        None => ParsedCode::Scalar(scalar.expect("scalar mode")),
    })
}

/// Render a scalar code file: the field line, every edge coefficient
/// (ascending edge id, source symbol first), then every decoder coefficient
/// (terminal list order, in-edges ascending). Deterministic and complete —
/// zeros are written out.
pub fn render_scalar_code(named: &NamedNetwork, code: &ScalarLinearCode) -> String {
    let mut out = format!("field {}\n", code.field.modulus());
    for (eid, map) in &code.edge_maps {
        let ename = named.edge_name(*eid);
        if let Some(c) = map.source_coef {
            out.push_str(&format!("coef {ename} source {}\n", c.value()));
        }
        for (in_id, c) in &map.in_coefs {
            out.push_str(&format!(
                "coef {ename} edge {} {}\n",
                named.edge_name(*in_id),
                c.value()
            ));
        }
    }
    for (j, dec) in code.decoders.iter().enumerate() {
        let tname = named.node_name(named.net.terminals()[j]);
        for (in_id, c) in dec {
            out.push_str(&format!(
                "decode {tname} {} {}\n",
                named.edge_name(*in_id),
                c.value()
            ));
        }
    }
    out
}

/// Render a fractional code file (row-major matrix entries).
pub fn render_fractional_code(named: &NamedNetwork, code: &FractionalLinearCode) -> String {
    let mut out = format!("field {}\nrate {} {}\n", code.field.modulus(), code.k, code.n);
    let entries = |out: &mut String, prefix: &str, m: &Mat| {
        for r in 0..m.rows {
            for c in 0..m.cols {
                out.push_str(&format!("{prefix} {r} {c} {}\n", m.get(r, c)));
            }
        }
    };
    for (eid, map) in &code.edge_maps {
        let ename = named.edge_name(*eid);
        if let Some(m) = &map.source_mat {
            entries(&mut out, &format!("fcoef {ename} source"), m);
        }
        for (in_id, m) in &map.in_mats {
            entries(
                &mut out,
                &format!("fcoef {ename} edge {}", named.edge_name(*in_id)),
                m,
            );
        }
    }
    for (j, dec) in code.decoders.iter().enumerate() {
        let tname = named.node_name(named.net.terminals()[j]);
        for (in_id, m) in dec {
            entries(
                &mut out,
                &format!("fdecode {tname} {}", named.edge_name(*in_id)),
                m,
            );
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::netfile::parse_network;
    use sumnet::constructor::{search_fractional, search_scalar, SearchBudget};
    use sumnet::netcode::{verify_exhaustive, verify_fractional};

    const NET: &str = "\
node s1 source
node s2 source
node s3 source
node m
node t1 terminal
node t2 terminal
node t3 terminal
edge a s1 m
edge b s2 m
edge c s3 m
edge d m t1
edge e m t2
edge f m t3
";

    fn named() -> NamedNetwork {
        parse_network(NET).unwrap()
    }

    #[test]
    fn scalar_round_trip() {
        let named = named();
        let f = PrimeField::new(3).unwrap();
        let code = search_scalar(&named.net, f, &SearchBudget::exhaustive(), false)
            .found
            .expect("hub network is solvable");
        let text = render_scalar_code(&named, &code);
        let ParsedCode::Scalar(parsed) = parse_code(&text, &named).unwrap() else {
            panic!("expected a scalar code");
        };
        assert_eq!(parsed, code);
        assert!(verify_exhaustive(&named.net, &parsed).unwrap());
    }

    #[test]
    fn fractional_round_trip() {
        let named = named();
        let f = PrimeField::new(2).unwrap();
        let code = search_fractional(&named.net, f, 2, 3, &SearchBudget::exhaustive())
            .found
            .expect("solvable network has a (2,3) code");
        let text = render_fractional_code(&named, &code);
        let ParsedCode::Fractional(parsed) = parse_code(&text, &named).unwrap() else {
            panic!("expected a fractional code");
        };
        assert_eq!(parsed, code);
        assert!(verify_fractional(&named.net, &parsed).unwrap());
    }

    #[test]
    fn missing_entries_default_to_zero() {
        let named = named();
        let text = "field 3\ncoef a source 1\n";
        let ParsedCode::Scalar(code) = parse_code(text, &named).unwrap() else {
            panic!("expected a scalar code");
        };
        let f = PrimeField::new(3).unwrap();
        let a = named.edge_by_name("a").unwrap();
        let d = named.edge_by_name("d").unwrap();
        assert_eq!(code.edge_maps[&a].source_coef, Some(f.one()));
        assert_eq!(code.edge_maps[&d].in_coefs.values().filter(|c| **c != f.zero()).count(), 0);
        assert!(code.decoders.iter().all(|dec| dec.values().all(|c| *c == f.zero())));
    }

    #[test]
    fn schema_errors_have_locations() {
        let named = named();
        for (text, needle) in [
            ("coef a source 1\n", "no `field` line"),
            ("field 4\n", "not prime"),
            ("field 3\ncoef z source 1\n", "unknown edge `z`"),
            ("field 3\ncoef a source 5\n", "out of range"),
            ("field 3\ncoef d source 1\n", "leaves a source"),
            ("field 3\ncoef a edge d 1\n", "not an input here"),
            ("field 3\ndecode s1 a 1\n", "not a terminal"),
            ("field 3\ndecode t1 a 1\n", "not an input here"),
            ("field 3\ncoef a source 1\ncoef a source 2\n", "assigned twice"),
            ("field 3\nfcoef a source 0 0 1\n", "needs a `rate"),
            ("field 3\nrate 2 3\ncoef a source 1\n", "scalar directive"),
            ("field 3\nrate 2 3\nfcoef a source 3 0 1\n", "row 3 out of range"),
            ("field 3\nrate 0 3\n", "must be positive"),
        ] {
            let err = parse_code(text, &named).unwrap_err();
            let shown = err.to_string();
            assert!(shown.contains(needle), "`{text}` gave `{shown}`, wanted `{needle}`");
        }
    }
}
