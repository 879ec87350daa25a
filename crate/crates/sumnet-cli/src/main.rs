//! `sumnet`: analyze, classify, code-construct, verify, generate, and
//! brute-force 3-source/3-terminal sum-networks from plain-text files.
//!
//! Exit codes: 0 success; 1 bad input or usage; 2 definitive "no such code";
//! 3 inconclusive (budget, search-space cap, or generation limit); 4 the
//! supplied code failed verification.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use sumnet::analysis;
use sumnet::classifier::{self, SolvabilityClass};
use sumnet::constructor::{self, ConstructorError, SearchBudget};
use sumnet::gf::PrimeField;
use sumnet::netcode;
use sumnet::oracle::{self, GeneratorConfig, OracleError};

use sumnet_cli::codefile::{self, ParsedCode};
use sumnet_cli::netfile::{self, NamedNetwork};
use sumnet_cli::report::{self, Report};
use sumnet_cli::CliError;

#[derive(Parser)]
#[command(
    name = "sumnet",
    version,
    about = "Solvability analysis and code construction for 3-source/3-terminal sum-networks"
)]
struct Cli {
    /// Output format for reports (errors always go to stderr as text).
    #[arg(long, global = true, value_enum, default_value_t = Format::Human)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Human,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Coefficients restricted to {0, +1, -1}.
    Xor,
    /// Any scalar linear code.
    Linear,
    /// The explicit two-parameter construction for exception networks.
    Alpha,
    /// A (k,n) vector code at rate k/n.
    Fractional,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Xor => "xor",
            Mode::Linear => "linear",
            Mode::Alpha => "alpha",
            Mode::Fractional => "fractional",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Structural analysis: connectivity, kappa, disconnecting edges, edge classes.
    Analyze {
        /// Network file.
        network: PathBuf,
    },
    /// Decide the solvability class and the capacity it implies.
    Classify {
        /// Network file.
        network: PathBuf,
    },
    /// Find or construct an explicit code over GF(p).
    Construct {
        /// Network file.
        network: PathBuf,
        /// Prime field order p.
        #[arg(long)]
        field: u64,
        #[arg(long, value_enum, default_value_t = Mode::Linear)]
        mode: Mode,
        /// Alpha parameter for --mode alpha (default: the least admissible value, 2).
        #[arg(long)]
        alpha: Option<u64>,
        /// Packet sizes for --mode fractional: sources block k symbols, edges carry n.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        /// Search budget: stop after this many candidate codes.
        #[arg(long)]
        max_codes: Option<u64>,
        /// Also write the code file here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a code file against a network file.
    Verify {
        /// Network file.
        network: PathBuf,
        /// Code file.
        code: PathBuf,
        /// Require the code to be over this field.
        #[arg(long)]
        field: Option<u64>,
    },
    /// Generate a random sum-network (writes network file text).
    Generate {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Node budget (at least 6).
        #[arg(long, default_value_t = 10)]
        nodes: u32,
        /// Edge budget (at least 3).
        #[arg(long, default_value_t = 12)]
        edges: u32,
        /// Require this exact kappa (number of (source,terminal) pairs some
        /// single edge disconnects, maximized over edges).
        #[arg(long)]
        kappa: Option<u32>,
        /// Require every terminal to be reachable from every source.
        #[arg(long)]
        ensure_connected: bool,
        /// Write the network file here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Brute-force scalar solvability over GF(p) by exhausting all codes.
    Oracle {
        /// Network file.
        network: PathBuf,
        /// Prime field order p.
        #[arg(long)]
        field: u64,
        /// Override the per-field coefficient-slot cap.
        #[arg(long)]
        cap: Option<u32>,
    },
}

enum Output {
    Report(Box<Report>),
    /// Already rendered for the requested format (used by `generate`).
    Text(String),
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; real usage errors map
            // to exit 1 like every other bad input.
            if e.use_stderr() {
                eprint!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let format = cli.format;
    match run(cli.command, format) {
        Ok((output, exit)) => {
            match output {
                Output::Report(r) => match format {
                    Format::Human => print!("{}", report::render_human(&r)),
                    Format::Structured => println!(
                        "{}",
                        serde_json::to_string_pretty(&r).expect("report serializes")
                    ),
                },
                Output::Text(t) => print!("{t}"),
            }
            ExitCode::from(exit)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn read_network(path: &Path) -> Result<NamedNetwork, CliError> {
    let text = fs::read_to_string(path)?;
    netfile::parse_network(&text)
}

fn parse_field(p: u64) -> Result<PrimeField, CliError> {
    PrimeField::new(p).map_err(|_| CliError::InvalidField(p))
}

fn classify(net: &sumnet::multigraph::SumNetwork) -> Result<SolvabilityClass, CliError> {
    classifier::classify(net).map_err(|e| CliError::Validation(e.to_string()))
}

fn run(command: Command, format: Format) -> Result<(Output, u8), CliError> {
    match command {
        Command::Analyze { network } => {
            let named = read_network(&network)?;
            let analysis = analysis::analyze(&named.net);
            let report = Report {
                network: Some(report::network_section(&named)),
                analysis: Some(report::analysis_section(&named, &analysis)),
                ..Report::default()
            };
            Ok((Output::Report(Box::new(report)), 0))
        }
        Command::Classify { network } => {
            let named = read_network(&network)?;
            let class = classify(&named.net)?;
            let report = Report {
                network: Some(report::network_section(&named)),
                classification: Some(report::classification_section(&named, &class)),
                ..Report::default()
            };
            Ok((Output::Report(Box::new(report)), 0))
        }
        Command::Construct { network, field, mode, alpha, k, n, max_codes, out } => {
            run_construct(&network, field, mode, alpha, k, n, max_codes, out.as_deref())
        }
        Command::Verify { network, code, field } => run_verify(&network, &code, field),
        Command::Generate { seed, nodes, edges, kappa, ensure_connected, out } => {
            let config = GeneratorConfig {
                node_budget: nodes,
                edge_budget: edges,
                seed,
                ensure_connected,
                ensure_kappa: kappa,
            };
            let net = oracle::generate_random(&config).map_err(oracle_error)?;
            let kappa_value = analysis::kappa(&net);
            let named = NamedNetwork::with_canonical_names(net);
            let text = netfile::render_network(&named);
            if let Some(path) = out {
                fs::write(path, &text)?;
            }
            // Human output is the bare network file so it pipes straight
            // into the other subcommands; structured wraps it with stats.
            let rendered = match format {
                Format::Human => text,
                Format::Structured => {
                    let value = serde_json::json!({
                        "seed": seed,
                        "nodes": named.net.node_count(),
                        "edges": named.net.edges().len(),
                        "kappa": kappa_value,
                        "file": text,
                    });
                    format!("{}\n", serde_json::to_string_pretty(&value).expect("value serializes"))
                }
            };
            Ok((Output::Text(rendered), 0))
        }
        Command::Oracle { network, field, cap } => {
            let named = read_network(&network)?;
            let f = parse_field(field)?;
            let cap = cap.unwrap_or_else(|| oracle::slot_cap(f));
            let found = oracle::brute_force_solvable_capped(&named.net, f, cap)
                .map_err(oracle_error)?;
            let solvable = found.is_some();
            let report = Report {
                network: Some(report::network_section(&named)),
                oracle: Some(report::OracleSection {
                    field: f.modulus(),
                    slots: oracle::coefficient_slots(&named.net),
                    cap,
                    solvable,
                    complete: true,
                }),
                code: found.map(|c| report::scalar_code_section(&named, &c)),
                ..Report::default()
            };
            Ok((Output::Report(Box::new(report)), if solvable { 0 } else { 2 }))
        }
    }
}

fn oracle_error(e: OracleError) -> CliError {
    match e {
        OracleError::SearchSpaceTooLarge { slots, cap } => {
            CliError::SearchSpaceTooLarge { slots, cap }
        }
        OracleError::GenerationFailed(m) => CliError::GenerationFailed(m),
    }
}

#[allow(clippy::too_many_arguments)]
fn run_construct(
    network: &Path,
    field: u64,
    mode: Mode,
    alpha: Option<u64>,
    k: Option<usize>,
    n: Option<usize>,
    max_codes: Option<u64>,
    out: Option<&Path>,
) -> Result<(Output, u8), CliError> {
    if mode != Mode::Alpha && alpha.is_some() {
        return Err(CliError::Usage("--alpha only applies to --mode alpha".into()));
    }
    if mode != Mode::Fractional && (k.is_some() || n.is_some()) {
        return Err(CliError::Usage("--k and --n only apply to --mode fractional".into()));
    }
    if mode == Mode::Alpha && max_codes.is_some() {
        return Err(CliError::Usage(
            "--max-codes does not apply to --mode alpha (no search happens)".into(),
        ));
    }

    let named = read_network(network)?;
    let f = parse_field(field)?;
    let class = classify(&named.net)?;
    let budget = match max_codes {
        Some(0) => {
            return Err(CliError::Usage("--max-codes must be positive".into()));
        }
        Some(m) => SearchBudget::with_max_codes(m),
        None => SearchBudget::exhaustive(),
    };

    let mut report = Report {
        network: Some(report::network_section(&named)),
        classification: Some(report::classification_section(&named, &class)),
        ..Report::default()
    };
    let mut section = report::ConstructionSection {
        mode: mode.name().to_string(),
        field: f.modulus(),
        rate: None,
        alpha: None,
        beta: None,
        gamma: None,
        found: false,
        complete: true,
    };

    let exit: u8;
    match mode {
        Mode::Xor | Mode::Linear => {
            // The classifier settles most cases before any search: scalar
            // codes cannot exist on disconnected or nonsolvable networks,
            // nor over GF(2) on exception networks.
            let impossible = match class {
                SolvabilityClass::NotConnected | SolvabilityClass::Nonsolvable(_) => true,
                SolvabilityClass::SolvableExceptF2(_) => f.modulus() == 2,
                SolvabilityClass::SolvableAllFields => false,
            };
            if impossible {
                exit = 2;
            } else {
                let outcome =
                    constructor::search_scalar(&named.net, f, &budget, mode == Mode::Xor);
                section.found = outcome.found.is_some();
                section.complete = outcome.complete;
                match outcome.found {
                    Some(code) => {
                        write_code_out(out, &codefile::render_scalar_code(&named, &code))?;
                        report.code = Some(report::scalar_code_section(&named, &code));
                        exit = 0;
                    }
                    None => exit = if outcome.complete { 2 } else { 3 },
                }
            }
        }
        Mode::Alpha => {
            let witness = match &class {
                SolvabilityClass::SolvableExceptF2(w) => *w,
                other => {
                    return Err(CliError::ClassMismatch {
                        mode: "alpha".into(),
                        class: other.name().into(),
                    });
                }
            };
            let a = match alpha {
                Some(a) => a,
                None if f.modulus() == 2 => {
                    return Err(CliError::InvalidAlpha(
                        "no admissible alpha exists over GF(2)".into(),
                    ));
                }
                None => 2,
            };
            if a >= f.modulus() {
                return Err(CliError::InvalidAlpha(format!(
                    "{a} is not an element of GF({})",
                    f.modulus()
                )));
            }
            let alpha_elem = f.elem(a);
            let (beta, gamma) = sumnet::gf::alpha_constants(f, alpha_elem).map_err(|_| {
                CliError::InvalidAlpha(format!("alpha must avoid 0 and 1, got {a} over GF({})", f.modulus()))
            })?;
            let code = constructor::construct_alpha_code(&named.net, &witness, f, alpha_elem)
                .map_err(constructor_error)?;
            section.alpha = Some(alpha_elem.value());
            section.beta = Some(beta.value());
            section.gamma = Some(gamma.value());
            section.found = true;
            write_code_out(out, &codefile::render_scalar_code(&named, &code))?;
            report.code = Some(report::scalar_code_section(&named, &code));
            exit = 0;
        }
        Mode::Fractional => {
            let (Some(k), Some(n)) = (k, n) else {
                return Err(CliError::Usage("--mode fractional requires --k and --n".into()));
            };
            if k == 0 || n == 0 {
                return Err(CliError::Usage("--k and --n must be positive".into()));
            }
            section.rate = Some([k, n]);
            // Definitive refusals first: a disconnected network carries no
            // positive rate at all, and on a nonsolvable network any rate
            // above 2/3 is beyond capacity.
            let impossible = match &class {
                SolvabilityClass::NotConnected => true,
                SolvabilityClass::Nonsolvable(w) => {
                    !constructor::cut_bound_check(&named.net, w, k as u64, n as u64)
                        .map_err(constructor_error)?
                }
                _ => false,
            };
            if impossible {
                exit = 2;
            } else {
                let outcome = constructor::search_fractional(&named.net, f, k, n, &budget);
                section.found = outcome.found.is_some();
                section.complete = outcome.complete;
                match outcome.found {
                    Some(code) => {
                        write_code_out(out, &codefile::render_fractional_code(&named, &code))?;
                        report.code = Some(report::fractional_code_section(&named, &code));
                        exit = 0;
                    }
                    None => exit = if outcome.complete { 2 } else { 3 },
                }
            }
        }
    }
    report.construction = Some(section);
    Ok((Output::Report(Box::new(report)), exit))
}

fn constructor_error(e: ConstructorError) -> CliError {
    match e {
        ConstructorError::InvalidAlpha => {
            CliError::InvalidAlpha("alpha must avoid 0 and 1".into())
        }
        other => CliError::Validation(other.to_string()),
    }
}

fn write_code_out(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    if let Some(path) = out {
        fs::write(path, text)?;
    }
    Ok(())
}

fn run_verify(
    network: &Path,
    code_path: &Path,
    field: Option<u64>,
) -> Result<(Output, u8), CliError> {
    let named = read_network(network)?;
    let code_text = fs::read_to_string(code_path)?;
    let parsed = codefile::parse_code(&code_text, &named)?;
    if let Some(p) = field {
        if p != parsed.field().modulus() {
            return Err(CliError::Validation(format!(
                "--field {p} does not match the code file's field GF({})",
                parsed.field().modulus()
            )));
        }
    }
    let shape_err = |e: netcode::NetcodeError| CliError::Validation(e.to_string());

    let (section, valid) = match &parsed {
        ParsedCode::Scalar(code) => {
            let transfer = netcode::verify_transfer(&named.net, code).map_err(shape_err)?;
            let exhaustive = netcode::verify_exhaustive(&named.net, code).map_err(shape_err)?;
            let counterexample = if exhaustive {
                None
            } else {
                netcode::first_failing_input(&named.net, code).map_err(shape_err)?.map(
                    |(inputs, j, output)| {
                        let f = code.field;
                        let expected =
                            f.add_raw(f.add_raw(inputs[0], inputs[1]), inputs[2]);
                        report::CounterexampleSection {
                            inputs,
                            terminal: named
                                .node_name(named.net.terminals()[j])
                                .to_string(),
                            output,
                            expected,
                        }
                    },
                )
            };
            let valid = transfer && exhaustive;
            (
                report::VerificationSection {
                    kind: "scalar".into(),
                    field: code.field.modulus(),
                    rate: None,
                    transfer_check: transfer,
                    exhaustive_check: if exhaustive { "pass" } else { "fail" }.into(),
                    valid,
                    counterexample,
                },
                valid,
            )
        }
        ParsedCode::Fractional(code) => {
            let transfer = netcode::verify_fractional(&named.net, code).map_err(shape_err)?;
            let exhaustive =
                netcode::verify_fractional_exhaustive(&named.net, code).map_err(shape_err)?;
            let valid = transfer && exhaustive.unwrap_or(true);
            (
                report::VerificationSection {
                    kind: "fractional".into(),
                    field: code.field.modulus(),
                    rate: Some([code.k, code.n]),
                    transfer_check: transfer,
                    exhaustive_check: match exhaustive {
                        Some(true) => "pass",
                        Some(false) => "fail",
                        None => "skipped",
                    }
                    .into(),
                    valid,
                    counterexample: None,
                },
                valid,
            )
        }
    };
    let report = Report {
        network: Some(report::network_section(&named)),
        verification: Some(section),
        ..Report::default()
    };
    Ok((Output::Report(Box::new(report)), if valid { 0 } else { 4 }))
}
