//! `primeval`: recognition, decomposition and restricted colorings of
//! P4-tidy and (q,q-4)-graphs from the command line.

use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use primeval::decomposition::{is_qq4_exhaustive, DecompositionError, Rejection};
use primeval::engine::{solve_with_budget, EngineError, SeparableHarmoniousCheck, TraceEntry};
use primeval::oracle::{exact_chromatic, OracleBudget, OracleError};
use primeval::selftest::{self, SelftestConfig};
use primeval::validators;
use primeval::{build_tree, compute_q, is_p4_tidy, is_qq4, parse_graph, Coloring, ColoringFamily, Graph, GraphFormat, Mode};

mod exit {
    pub const OK: u8 = 0;
    pub const DISCREPANCY: u8 = 1;
    pub const REJECTED: u8 = 2;
    pub const DISCONNECTED: u8 = 3;
    pub const PARSE: u8 = 4;
    pub const BUDGET: u8 = 5;
    pub const IO: u8 = 6;
    pub const USAGE: u8 = 64;
}

const BUDGET_ENV: &str = "PRIMEVAL_ORACLE_BUDGET";

#[derive(Parser)]
#[command(name = "primeval", version, about = "Decompose P4-tidy and (q,q-4)-graphs and compute restricted chromatic numbers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test membership in a graph class.
    Recognize {
        #[arg(long, value_enum, default_value = "p4tidy")]
        class: ClassArg,
        /// q for `--class qq4`.
        #[arg(long)]
        q: Option<usize>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print the least q such that the graph is a (q,q-4)-graph.
    Qvalue {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Print the decomposition tree.
    Decompose {
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Compute a chromatic number along the decomposition tree.
    Color {
        #[arg(long, value_enum)]
        variant: VariantArg,
        /// Include the optimal coloring in the output.
        #[arg(long)]
        emit_witness: bool,
        #[command(flatten)]
        mode: ModeArgs,
        /// Vertex limit for exhaustive search on leaves and bounded components.
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: OutputFormat,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Exhaustive search, or check a given coloring with `--verify`.
    Oracle {
        #[arg(long, value_enum)]
        variant: VariantArg,
        #[arg(long)]
        budget: Option<usize>,
        /// Coloring to check: a JSON array of colors, or an object with a
        /// `witness` or `colors` array (such as the output of `color`).
        #[arg(long, value_name = "COLORING")]
        verify: Option<PathBuf>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Compare the engine with the oracle on small and sampled graphs.
    Selftest {
        #[arg(long, default_value_t = 7)]
        n_max: usize,
        #[arg(long, default_value_t = 500)]
        samples: usize,
        #[arg(long, default_value_t = 10)]
        sample_max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct InputArgs {
    /// Graph file, or `-` for standard input.
    file: PathBuf,
    /// Input format; guessed from the extension and content when absent.
    #[arg(long, value_enum)]
    input_format: Option<FormatArg>,
}

#[derive(Args)]
struct ModeArgs {
    /// Decomposition to use; by default P4-tidy when the graph is, else
    /// (q,q-4) with the least q.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    #[arg(long)]
    q: Option<usize>,
    /// Largest q accepted for (q,q-4) decompositions.
    #[arg(long, default_value_t = 10)]
    max_q: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ClassArg {
    Cograph,
    P4sparse,
    P4tidy,
    Qq4,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    P4tidy,
    Qq4,
}

#[derive(Clone, Copy, ValueEnum)]
enum VariantArg {
    Acyclic,
    Star,
    #[value(alias = "nonrepetitive")]
    Thue,
    Harmonious,
    Clique,
}

impl From<VariantArg> for ColoringFamily {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Acyclic => ColoringFamily::Acyclic,
            VariantArg::Star => ColoringFamily::Star,
            VariantArg::Thue => ColoringFamily::Nonrepetitive,
            VariantArg::Harmonious => ColoringFamily::Harmonious,
            VariantArg::Clique => ColoringFamily::Clique,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Edgelist,
    Dimacs,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Dot,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

impl From<EngineError> for Failure {
    fn from(e: EngineError) -> Self {
        let code = match &e {
            EngineError::Rejected(_) => exit::REJECTED,
            EngineError::Disconnected | EngineError::Oracle(OracleError::Disconnected) => exit::DISCONNECTED,
            EngineError::Oracle(_) | EngineError::Budget { .. } => exit::BUDGET,
            EngineError::Precondition(_) => exit::REJECTED,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::Disconnected => exit::DISCONNECTED,
            _ => exit::BUDGET,
        };
        Failure::new(code, e.to_string())
    }
}

/// What a successful command prints, and its exit status.
struct Success {
    stdout: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { exit::USAGE } else { exit::OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(out) => {
            let mut stdout = io::stdout().lock();
            if stdout.write_all(out.stdout.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(exit::IO);
            }
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("primeval: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(command: Command) -> Result<Success, Failure> {
    match command {
        Command::Recognize { class, q, input } => recognize(class, q, &read_graph(&input)?),
        Command::Qvalue { input } => {
            let g = read_graph(&input)?;
            json_out(&compute_q(&g), exit::OK)
        }
        Command::Decompose { mode, format, input } => {
            let g = read_graph(&input)?;
            let mode = choose_mode(&mode, &g)?;
            let tree = build_tree(&g, mode).map_err(decomposition_failure)?;
            let stdout = match format {
                OutputFormat::Json => tree.to_json() + "\n",
                OutputFormat::Dot => tree.to_dot(),
            };
            Ok(Success { stdout, code: exit::OK })
        }
        Command::Color {
            variant,
            emit_witness,
            mode,
            budget,
            format,
            input,
        } => {
            let g = read_graph(&input)?;
            let budget = oracle_budget(budget)?;
            let mode = choose_mode(&mode, &g)?;
            let result = solve_with_budget(&g, variant.into(), mode, &budget)?;
            if format == OutputFormat::Dot {
                return Ok(Success {
                    stdout: colored_dot(&g, &result.witness),
                    code: exit::OK,
                });
            }
            let out = ColorOutput {
                variant: result.variant,
                mode: Some(mode),
                value: result.value,
                witness: emit_witness.then(|| result.witness.colors().to_vec()),
                trace: result.trace,
                separable_checks: result.separable_checks,
            };
            json_out(&out, exit::OK)
        }
        Command::Oracle {
            variant,
            budget,
            verify,
            input,
        } => {
            let g = read_graph(&input)?;
            let budget = oracle_budget(budget)?;
            let family = ColoringFamily::from(variant);
            match verify {
                Some(path) => verify_coloring(&g, family, &path),
                None => {
                    let result = exact_chromatic(&g, family, &budget)?;
                    let out = ColorOutput {
                        variant: result.variant,
                        mode: None,
                        value: result.value,
                        witness: Some(result.witness.colors().to_vec()),
                        trace: result.trace,
                        separable_checks: Vec::new(),
                    };
                    json_out(&out, exit::OK)
                }
            }
        }
        Command::Selftest {
            n_max,
            samples,
            sample_max_n,
            seed,
        } => {
            if n_max > 8 {
                return Err(Failure::new(exit::USAGE, "--n-max above 8 is not supported"));
            }
            let config = SelftestConfig {
                n_max,
                samples,
                sample_max_n,
                seed,
            };
            let report = selftest::run(&config);
            eprintln!(
                "selftest: {} instances, {} comparisons, {} discrepancies, {} fallbacks, {} of {} separable harmonious checks differ from n' + min k",
                report.instances,
                report.comparisons,
                report.discrepancies.len(),
                report.fallbacks,
                report.statement_mismatches.len(),
                report.separable_harmonious_checks,
            );
            let code = if report.passed() { exit::OK } else { exit::DISCREPANCY };
            json_out(&report, code)
        }
    }
}

/// Frozen output schema of `color` and `oracle`.
#[derive(Serialize)]
struct ColorOutput {
    variant: ColoringFamily,
    #[serde(skip_serializing_if = "Option::is_none")]
    mode: Option<Mode>,
    value: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<Vec<usize>>,
    trace: Vec<TraceEntry>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    separable_checks: Vec<SeparableHarmoniousCheck>,
}

#[derive(Serialize)]
struct RecognizeOutput {
    class: String,
    member: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    rejection: Option<Rejection>,
}

#[derive(Serialize)]
struct VerifyOutput {
    variant: ColoringFamily,
    valid: bool,
    colors_used: usize,
}

fn json_out<T: Serialize>(value: &T, code: u8) -> Result<Success, Failure> {
    let mut stdout = serde_json::to_string_pretty(value).map_err(|e| Failure::new(exit::IO, e.to_string()))?;
    stdout.push('\n');
    Ok(Success { stdout, code })
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::new(exit::IO, format!("standard input: {e}")))?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| Failure::new(exit::IO, format!("{}: {e}", path.display())))
}

fn read_graph(input: &InputArgs) -> Result<Graph, Failure> {
    let text = read_text(&input.file)?;
    let format = match input.input_format {
        Some(FormatArg::Edgelist) => GraphFormat::EdgeList,
        Some(FormatArg::Dimacs) => GraphFormat::Dimacs,
        Some(FormatArg::Json) => GraphFormat::Json,
        None => GraphFormat::detect(input.file.to_str(), &text),
    };
    parse_graph(&text, format).map_err(|e| Failure::new(exit::PARSE, format!("{}:{e}", input.file.display())))
}

fn oracle_budget(flag: Option<usize>) -> Result<OracleBudget, Failure> {
    let limit = match flag {
        Some(n) => Some(n),
        None => match std::env::var(BUDGET_ENV) {
            Ok(s) => Some(
                s.trim()
                    .parse::<usize>()
                    .map_err(|_| Failure::new(exit::USAGE, format!("{BUDGET_ENV} must be a vertex count, got `{s}`")))?,
            ),
            Err(_) => None,
        },
    };
    Ok(OracleBudget {
        max_vertices: limit,
        max_steps: None,
    })
}

fn choose_mode(args: &ModeArgs, g: &Graph) -> Result<Mode, Failure> {
    let mode = match (args.mode, args.q) {
        (Some(ModeArg::P4tidy), Some(_)) => return Err(Failure::new(exit::USAGE, "--q only applies to --mode qq4")),
        (Some(ModeArg::P4tidy), None) => Mode::P4Tidy,
        (Some(ModeArg::Qq4) | None, Some(q)) => Mode::Qq4 { q },
        (Some(ModeArg::Qq4), None) => Mode::Qq4 { q: compute_q(g).q },
        (None, None) if is_p4_tidy(g) => Mode::P4Tidy,
        (None, None) => Mode::Qq4 { q: compute_q(g).q },
    };
    if let Mode::Qq4 { q } = mode {
        if q < 4 {
            return Err(Failure::new(exit::USAGE, "q must be at least 4"));
        }
        if q > args.max_q {
            return Err(Failure::new(
                exit::BUDGET,
                format!("q = {q} exceeds --max-q {}", args.max_q),
            ));
        }
    }
    Ok(mode)
}

fn decomposition_failure(e: DecompositionError) -> Failure {
    match e {
        DecompositionError::Rejected(r) => {
            Failure::new(exit::REJECTED, format!("{r}\n{}", serde_json::to_string(&r).unwrap_or_default()))
        }
        DecompositionError::Budget { .. } => Failure::new(exit::BUDGET, e.to_string()),
        other => Failure::new(exit::REJECTED, other.to_string()),
    }
}

fn recognize(class: ClassArg, q: Option<usize>, g: &Graph) -> Result<Success, Failure> {
    let mode = match (class, q) {
        (ClassArg::Qq4, None) => return Err(Failure::new(exit::USAGE, "--class qq4 needs --q")),
        (ClassArg::Qq4, Some(q)) if q < 4 => return Err(Failure::new(exit::USAGE, "q must be at least 4")),
        (ClassArg::Qq4, Some(q)) => Mode::Qq4 { q },
        (_, Some(_)) => return Err(Failure::new(exit::USAGE, "--q only applies to --class qq4")),
        (ClassArg::Cograph, None) => Mode::Qq4 { q: 4 },
        (ClassArg::P4sparse, None) => Mode::Qq4 { q: 5 },
        (ClassArg::P4tidy, None) => Mode::P4Tidy,
    };
    let member = match mode {
        Mode::P4Tidy => is_p4_tidy(g),
        Mode::Qq4 { q } if g.n() <= 20 => is_qq4_exhaustive(g, q),
        Mode::Qq4 { q } => is_qq4(g, q),
    };
    let rejection = match build_tree(g, mode) {
        Err(DecompositionError::Rejected(r)) if !member => Some(r),
        _ => None,
    };
    let class = match class {
        ClassArg::Cograph => "cograph".to_string(),
        ClassArg::P4sparse => "p4sparse".to_string(),
        ClassArg::P4tidy => "p4tidy".to_string(),
        ClassArg::Qq4 => format!("qq4(q={})", q.unwrap_or_default()),
    };
    json_out(
        &RecognizeOutput {
            class,
            member,
            rejection,
        },
        exit::OK,
    )
}

fn verify_coloring(g: &Graph, family: ColoringFamily, path: &Path) -> Result<Success, Failure> {
    let text = read_text(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::new(exit::PARSE, format!("{}:{e}", path.display())))?;
    let array = match &value {
        serde_json::Value::Object(map) => map.get("witness").or_else(|| map.get("colors")),
        other => Some(other),
    };
    let colors: Vec<usize> = array
        .and_then(|a| serde_json::from_value(a.clone()).ok())
        .ok_or_else(|| Failure::new(exit::PARSE, format!("{}: expected an array of colors", path.display())))?;
    let coloring = Coloring::from_colors(colors);
    let valid = validators::check(family, g, &coloring).map_err(|e| Failure::new(exit::PARSE, e.to_string()))?;
    let out = VerifyOutput {
        variant: family,
        valid,
        colors_used: coloring.colors_used(),
    };
    json_out(&out, if valid { exit::OK } else { exit::DISCREPANCY })
}

const PALETTE: [&str; 12] = [
    "#e6194b", "#3cb44b", "#ffe119", "#4363d8", "#f58231", "#911eb4", "#46f0f0", "#f032e6", "#bcf60c", "#fabebe",
    "#008080", "#e6beff",
];

fn colored_dot(g: &Graph, c: &Coloring) -> String {
    let mut out = String::from("graph G {\n  node [style=filled];\n");
    for v in 0..g.n() {
        let color = c.color(v);
        let fill = PALETTE.get(color).copied().unwrap_or("#cccccc");
        out.push_str(&format!("  {v} [label=\"{v}:{color}\", fillcolor=\"{fill}\"];\n"));
    }
    for (u, v) in g.edges() {
        out.push_str(&format!("  {u} -- {v};\n"));
    }
    out.push_str("}\n");
    out
}
