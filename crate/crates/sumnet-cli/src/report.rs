//! One report type for every subcommand. Each command fills in the sections
//! it produced; the same value renders as indented human text or as JSON
//! (`--format structured`), so the two outputs can never disagree.

use serde::Serialize;
use sumnet::analysis::AnalysisReport;
use sumnet::classifier::SolvabilityClass;
use sumnet::netcode::{FractionalLinearCode, Mat, ScalarLinearCode};

use crate::codefile::{render_fractional_code, render_scalar_code};
use crate::netfile::NamedNetwork;

#[derive(Debug, Serialize, Default)]
pub struct Report {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub network: Option<NetworkSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub analysis: Option<AnalysisSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<ClassificationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub construction: Option<ConstructionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<VerificationSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub code: Option<CodeSection>,
}

#[derive(Debug, Serialize)]
pub struct NetworkSection {
    pub nodes: usize,
    pub edges: usize,
    pub sources: Vec<String>,
    pub terminals: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct DisconnectEntry {
    pub edge: String,
    /// (source name, terminal name) pairs cut off by removing the edge.
    pub pairs: Vec<[String; 2]>,
}

#[derive(Debug, Serialize)]
pub struct AnalysisSection {
    pub connected: bool,
    /// connectivity[i][j]: does source i reach terminal j?
    pub connectivity: [[bool; 3]; 3],
    pub kappa: u32,
    pub disconnecting: Vec<DisconnectEntry>,
    pub max_disconnecting: Vec<String>,
    /// Edges whose head reaches at most one terminal.
    pub class_a: Vec<String>,
    /// Edges whose tail is reached by at most one source.
    pub class_b: Vec<String>,
    /// Edges with at least two sources behind and two terminals ahead.
    pub class_c: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct WitnessSection {
    pub e1: String,
    pub e2: String,
    /// Node playing source role r (roles 1..=3).
    pub sources: [String; 3],
    /// Node playing terminal role r.
    pub terminals: [String; 3],
}

#[derive(Debug, Serialize)]
pub struct ClassificationSection {
    pub class: String,
    pub capacity: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSection>,
}

#[derive(Debug, Serialize)]
pub struct ConstructionSection {
    pub mode: String,
    pub field: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<u64>,
    pub found: bool,
    /// True when the outcome is definitive: either a code was found or the
    /// search space was exhausted. False means the budget ran out first.
    pub complete: bool,
}

#[derive(Debug, Serialize)]
pub struct CounterexampleSection {
    pub inputs: [u64; 3],
    pub terminal: String,
    pub output: u64,
    pub expected: u64,
}

#[derive(Debug, Serialize)]
pub struct VerificationSection {
    pub kind: String,
    pub field: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<[usize; 2]>,
    /// Did every terminal's decoded transfer come out as the all-ones sum?
    pub transfer_check: bool,
    /// "pass", "fail", or "skipped" (fractional input spaces beyond the
    /// exhaustive-evaluation limit).
    pub exhaustive_check: String,
    pub valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<CounterexampleSection>,
}

#[derive(Debug, Serialize)]
pub struct OracleSection {
    pub field: u64,
    pub slots: u32,
    pub cap: u32,
    pub solvable: bool,
    /// Whether the enumeration covered the entire code space. A verdict is
    /// only ever reported after a complete enumeration (oversized spaces are
    /// an error instead), so this is `true` whenever the section is present.
    pub complete: bool,
}

#[derive(Debug, Serialize)]
#[serde(untagged)]
pub enum Coef {
    Scalar(u64),
    Matrix(Vec<Vec<u64>>),
}

#[derive(Debug, Serialize)]
pub struct InputCoef {
    pub input: String,
    pub coef: Coef,
}

#[derive(Debug, Serialize)]
pub struct EdgeCoefs {
    pub edge: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub source: Option<Coef>,
    pub inputs: Vec<InputCoef>,
}

#[derive(Debug, Serialize)]
pub struct DecoderCoefs {
    pub terminal: String,
    pub inputs: Vec<InputCoef>,
}

#[derive(Debug, Serialize)]
pub struct CodeSection {
    pub kind: String,
    pub field: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rate: Option<[usize; 2]>,
    pub xor: bool,
    pub edges: Vec<EdgeCoefs>,
    pub decoders: Vec<DecoderCoefs>,
    /// The code in file format; feeding this back to `verify` reproduces it.
    pub file: String,
}

pub fn network_section(named: &NamedNetwork) -> NetworkSection {
    let net = &named.net;
    NetworkSection {
        nodes: net.node_count() as usize,
        edges: net.edges().len(),
        sources: net.sources().iter().map(|&v| named.node_name(v).to_string()).collect(),
        terminals: net.terminals().iter().map(|&v| named.node_name(v).to_string()).collect(),
    }
}

pub fn analysis_section(named: &NamedNetwork, report: &AnalysisReport) -> AnalysisSection {
    let net = &named.net;
    let disconnecting = report
        .disconnect
        .iter()
        .filter(|d| !d.pairs.is_empty())
        .map(|d| DisconnectEntry {
            edge: named.edge_name(d.edge).to_string(),
            pairs: d
                .pairs
                .iter()
                .map(|&(i, j)| {
                    [
                        named.node_name(net.sources()[i]).to_string(),
                        named.node_name(net.terminals()[j]).to_string(),
                    ]
                })
                .collect(),
        })
        .collect();
    let by_class = |f: fn(&sumnet::analysis::AbcClass) -> bool| -> Vec<String> {
        report
            .abc
            .iter()
            .filter(|(_, c)| f(c))
            .map(|(e, _)| named.edge_name(*e).to_string())
            .collect()
    };
    let mut connectivity = [[false; 3]; 3];
    for (i, &s) in net.sources().iter().enumerate() {
        for (j, &t) in net.terminals().iter().enumerate() {
            connectivity[i][j] = net.reachable(s, t).expect("known nodes");
        }
    }
    AnalysisSection {
        connected: report.connected,
        connectivity,
        kappa: report.kappa,
        disconnecting,
        max_disconnecting: report
            .max_disconnecting
            .iter()
            .map(|&e| named.edge_name(e).to_string())
            .collect(),
        class_a: by_class(|c| c.a),
        class_b: by_class(|c| c.b),
        class_c: by_class(|c| c.c),
    }
}

pub fn classification_section(
    named: &NamedNetwork,
    class: &SolvabilityClass,
) -> ClassificationSection {
    let net = &named.net;
    let witness = class.witness().map(|w| {
        let name = |v| named.node_name(v).to_string();
        WitnessSection {
            e1: named.edge_name(w.e1).to_string(),
            e2: named.edge_name(w.e2).to_string(),
            sources: [0, 1, 2].map(|r| name(w.labeling.source_node(net, r))),
            terminals: [0, 1, 2].map(|r| name(w.labeling.terminal_node(net, r))),
        }
    });
    ClassificationSection {
        class: class.name().to_string(),
        capacity: class.capacity_note().to_string(),
        witness,
    }
}

fn mat_rows(m: &Mat) -> Vec<Vec<u64>> {
    (0..m.rows).map(|r| (0..m.cols).map(|c| m.get(r, c)).collect()).collect()
}

pub fn scalar_code_section(named: &NamedNetwork, code: &ScalarLinearCode) -> CodeSection {
    let edges = code
        .edge_maps
        .iter()
        .map(|(eid, map)| EdgeCoefs {
            edge: named.edge_name(*eid).to_string(),
            source: map.source_coef.map(|c| Coef::Scalar(c.value())),
            inputs: map
                .in_coefs
                .iter()
                .map(|(in_id, c)| InputCoef {
                    input: named.edge_name(*in_id).to_string(),
                    coef: Coef::Scalar(c.value()),
                })
                .collect(),
        })
        .collect();
    let decoders = code
        .decoders
        .iter()
        .enumerate()
        .map(|(j, dec)| DecoderCoefs {
            terminal: named.node_name(named.net.terminals()[j]).to_string(),
            inputs: dec
                .iter()
                .map(|(in_id, c)| InputCoef {
                    input: named.edge_name(*in_id).to_string(),
                    coef: Coef::Scalar(c.value()),
                })
                .collect(),
        })
        .collect();
    CodeSection {
        kind: "scalar".into(),
        field: code.field.modulus(),
        rate: None,
        xor: sumnet::netcode::is_xor_code(code),
        edges,
        decoders,
        file: render_scalar_code(named, code),
    }
}

pub fn fractional_code_section(named: &NamedNetwork, code: &FractionalLinearCode) -> CodeSection {
    let edges = code
        .edge_maps
        .iter()
        .map(|(eid, map)| EdgeCoefs {
            edge: named.edge_name(*eid).to_string(),
            source: map.source_mat.as_ref().map(|m| Coef::Matrix(mat_rows(m))),
            inputs: map
                .in_mats
                .iter()
                .map(|(in_id, m)| InputCoef {
                    input: named.edge_name(*in_id).to_string(),
                    coef: Coef::Matrix(mat_rows(m)),
                })
                .collect(),
        })
        .collect();
    let decoders = code
        .decoders
        .iter()
        .enumerate()
        .map(|(j, dec)| DecoderCoefs {
            terminal: named.node_name(named.net.terminals()[j]).to_string(),
            inputs: dec
                .iter()
                .map(|(in_id, m)| InputCoef {
                    input: named.edge_name(*in_id).to_string(),
                    coef: Coef::Matrix(mat_rows(m)),
                })
                .collect(),
        })
        .collect();
    CodeSection {
        kind: "fractional".into(),
        field: code.field.modulus(),
        rate: Some([code.k, code.n]),
        xor: false,
        edges,
        decoders,
        file: render_fractional_code(named, code),
    }
}

fn push_names(out: &mut String, label: &str, names: &[String]) {
    if names.is_empty() {
        out.push_str(&format!("  {label}: (none)\n"));
    } else {
        out.push_str(&format!("  {label}: {}\n", names.join(" ")));
    }
}

/// Human rendering: one block per present section.
pub fn render_human(report: &Report) -> String {
    let mut out = String::new();
    let sep = |out: &mut String| {
        if !out.is_empty() {
            out.push('\n');
        }
    };

    if let Some(s) = &report.network {
        sep(&mut out);
        out.push_str("network:\n");
        out.push_str(&format!("  nodes: {}\n  edges: {}\n", s.nodes, s.edges));
        push_names(&mut out, "sources", &s.sources);
        push_names(&mut out, "terminals", &s.terminals);
    }
    if let Some(s) = &report.analysis {
        sep(&mut out);
        out.push_str("analysis:\n");
        out.push_str(&format!("  connected: {}\n", if s.connected { "yes" } else { "no" }));
        out.push_str("  connectivity (source -> terminal):\n");
        for (i, row) in s.connectivity.iter().enumerate() {
            let source = report
                .network
                .as_ref()
                .map_or_else(|| format!("s{}", i + 1), |n| n.sources[i].clone());
            let cells: Vec<String> = row
                .iter()
                .enumerate()
                .map(|(j, &ok)| {
                    let terminal = report
                        .network
                        .as_ref()
                        .map_or_else(|| format!("t{}", j + 1), |n| n.terminals[j].clone());
                    format!("{terminal}:{}", if ok { "yes" } else { "no" })
                })
                .collect();
            out.push_str(&format!("    {source} -> {}\n", cells.join(" ")));
        }
        out.push_str(&format!("  kappa: {}\n", s.kappa));
        if s.disconnecting.is_empty() {
            out.push_str("  disconnecting edges: (none)\n");
        } else {
            out.push_str("  disconnecting edges:\n");
            for d in &s.disconnecting {
                let pairs: Vec<String> =
                    d.pairs.iter().map(|[a, b]| format!("({a},{b})")).collect();
                out.push_str(&format!("    {} cuts {}\n", d.edge, pairs.join(" ")));
            }
        }
        push_names(&mut out, "max-disconnecting", &s.max_disconnecting);
        push_names(&mut out, "class A (single terminal ahead)", &s.class_a);
        push_names(&mut out, "class B (single source behind)", &s.class_b);
        push_names(&mut out, "class C (two of each)", &s.class_c);
    }
    if let Some(s) = &report.classification {
        sep(&mut out);
        out.push_str("classification:\n");
        out.push_str(&format!("  class: {}\n  capacity: {}\n", s.class, s.capacity));
        if let Some(w) = &s.witness {
            out.push_str(&format!("  witness edges: e1={} e2={}\n", w.e1, w.e2));
            out.push_str(&format!(
                "  witness sources: s1={} s2={} s3={}\n",
                w.sources[0], w.sources[1], w.sources[2]
            ));
            out.push_str(&format!(
                "  witness terminals: t1={} t2={} t3={}\n",
                w.terminals[0], w.terminals[1], w.terminals[2]
            ));
        }
    }
    if let Some(s) = &report.construction {
        sep(&mut out);
        out.push_str("construction:\n");
        out.push_str(&format!("  mode: {}\n  field: GF({})\n", s.mode, s.field));
        if let Some([k, n]) = s.rate {
            out.push_str(&format!("  rate: {k}/{n}\n"));
        }
        if let (Some(a), Some(b), Some(g)) = (s.alpha, s.beta, s.gamma) {
            out.push_str(&format!("  alpha: {a} (beta {b}, gamma {g})\n"));
        }
        let status = match (s.found, s.complete) {
            (true, _) => "found",
            (false, true) => "none exists",
            (false, false) => "not found (search incomplete)",
        };
        out.push_str(&format!("  result: {status}\n"));
    }
    if let Some(s) = &report.verification {
        sep(&mut out);
        out.push_str("verification:\n");
        out.push_str(&format!("  kind: {} over GF({})\n", s.kind, s.field));
        if let Some([k, n]) = s.rate {
            out.push_str(&format!("  rate: {k}/{n}\n"));
        }
        out.push_str(&format!(
            "  transfer check: {}\n",
            if s.transfer_check { "pass" } else { "fail" }
        ));
        out.push_str(&format!("  exhaustive check: {}\n", s.exhaustive_check));
        if let Some(c) = &s.counterexample {
            out.push_str(&format!(
                "  counterexample: inputs ({},{},{}) -> terminal {} outputs {} (expected {})\n",
                c.inputs[0], c.inputs[1], c.inputs[2], c.terminal, c.output, c.expected
            ));
        }
        out.push_str(&format!("  result: {}\n", if s.valid { "VALID" } else { "INVALID" }));
    }
    if let Some(s) = &report.oracle {
        sep(&mut out);
        out.push_str("oracle:\n");
        out.push_str(&format!("  field: GF({})\n", s.field));
        out.push_str(&format!("  coefficient slots: {} (cap {})\n", s.slots, s.cap));
        out.push_str(&format!(
            "  enumeration: {}\n",
            if s.complete { "complete" } else { "incomplete" }
        ));
        out.push_str(&format!("  solvable: {}\n", if s.solvable { "yes" } else { "no" }));
    }
    if let Some(s) = &report.code {
        sep(&mut out);
        out.push_str("code:\n");
        if s.xor {
            out.push_str("  coefficients: all in {0, +1, -1} (an XOR code)\n");
        }
        for line in s.file.lines() {
            out.push_str("  ");
            out.push_str(line);
            out.push('\n');
        }
    }
    out
}
