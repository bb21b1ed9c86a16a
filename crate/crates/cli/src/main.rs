//! `ramsey`: verify, encode, search and extend Ramsey witness colorings.
//!
//! Output is one `key=value` line per record; `--json` prints one JSON
//! object instead. Exit codes:
//!
//! | code | meaning |
//! |---|---|
//! | 0 | success (witness valid, model or extension found) |
//! | 1 | definite negative answer (unsatisfiable, no extension, no solution) |
//! | 2 | unparsable input or bad arguments |
//! | 3 | coloring is not a witness |
//! | 4 | a search budget ran out before an answer |
//! | 5 | file or network I/O failed |

mod output;

use clap::{Args, Parser, Subcommand, ValueEnum};
use output::{Output, Record};
use ramsey_core::circulant::{largest_z, search_z, CirculantMode, SearchOptions, ZSearchError, ZSearchResult};
use ramsey_core::clique::enumerate_violations;
use ramsey_core::cnf::{emit_dimacs, parse_model, ramsey_counts, ClauseSource, ModelError, PartitionFn, ZMode};
use ramsey_core::extension::{extend, unsettled_counts, ExtendError, ExtendOutcome};
use ramsey_core::graph::format::{emit_coloring, parse_coloring, TextFormat};
use ramsey_core::graph::EdgeColoring;
use ramsey_core::relax::{relax_solve, RelaxOutcome, RelaxPolicy, RelaxTrace};
use ramsey_core::solver::SolveBudget;
use serde_json::json;
use std::collections::BTreeSet;
use std::io::Write;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;
use thiserror::Error;

#[derive(Parser)]
#[command(name = "ramsey", version, about = "Ramsey witness toolkit")]
struct Cli {
    /// Print one JSON object instead of key=value lines.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads for parallel searches (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a coloring for monochromatic cliques.
    Verify {
        file: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        /// Violations listed per color.
        #[arg(long, default_value_t = 10)]
        limit: usize,
        #[arg(long)]
        format: Option<TextFormat>,
    },
    /// Write the DIMACS instance for K_n.
    Encode {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        z: ZArgs,
        /// Fix the edges of this coloring on its vertices; only unsettled
        /// clauses are written.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Output file (default: stdout).
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Variable and clause counts, optionally residual to a base coloring.
    Counts {
        #[command(flatten)]
        size: Size,
        #[arg(long)]
        base: Option<PathBuf>,
    },
    /// Search circulant colorings of K_n.
    Zsearch {
        #[command(flatten)]
        size: Size,
        /// Require z_k = z_{n-k}.
        #[arg(long)]
        sym: bool,
        /// Count every solution instead of stopping at the first.
        #[arg(long)]
        all: bool,
        #[arg(long)]
        node_limit: Option<u64>,
        /// Write the solutions, one z-vector per line.
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Write each solution's adjacency list into this directory.
        #[arg(long)]
        adj_dir: Option<PathBuf>,
    },
    /// Largest n <= nmax with a circulant witness.
    Zlargest {
        #[arg(long)]
        s: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        nmax: usize,
        #[arg(long)]
        sym: bool,
        #[arg(long)]
        node_limit: Option<u64>,
    },
    /// Solve the Ramsey clauses with distance clauses as relaxable soft constraints.
    RelaxSolve {
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        z: ZArgs,
        #[command(flatten)]
        policy: PolicyArgs,
        /// Write the witness here.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Grow a witness by fixing it on the first vertices and solving the rest.
    Extend {
        #[arg(long)]
        base: PathBuf,
        #[command(flatten)]
        size: Size,
        #[command(flatten)]
        policy: PolicyArgs,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Flip the color of edge (i, j) and print the result in the input's format.
    Flip {
        file: PathBuf,
        i: usize,
        j: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the HTTP editing service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "127.0.0.1")]
        host: String,
        /// Idle sessions are dropped after this many hours.
        #[arg(long, default_value_t = 24)]
        ttl_hours: u64,
        /// Default violations listed per color.
        #[arg(long, default_value_t = 50)]
        limit: usize,
    },
    /// Turn a solver model for K_n into an adjacency list.
    DecodeModel {
        model: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Size {
    #[arg(long)]
    s: usize,
    #[arg(long)]
    t: usize,
    #[arg(long)]
    n: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum ZKind {
    None,
    Full,
    Sym,
}

#[derive(Args)]
struct ZArgs {
    /// Distance clause family (encode default: none; relax-solve default: full).
    #[arg(long, value_enum)]
    z: Option<ZKind>,
    /// Distances left out of the full family (implies --z full).
    #[arg(long, value_delimiter = ',')]
    omit: Vec<usize>,
    /// Partition preset: `rows24-33` or `band:LO-HI`.
    #[arg(long)]
    partition: Option<String>,
}

impl ZArgs {
    fn mode(&self, default: ZKind) -> Result<ZMode, CliError> {
        if let Some(name) = &self.partition {
            let p = PartitionFn::preset(name).ok_or_else(|| CliError::Usage(format!("unknown partition preset {name:?}")))?;
            return Ok(ZMode::Partitioned(p));
        }
        if !self.omit.is_empty() {
            return Ok(ZMode::Imperfect(self.omit.iter().copied().collect::<BTreeSet<_>>()));
        }
        Ok(match self.z.unwrap_or(default) {
            ZKind::None => ZMode::None,
            ZKind::Full => ZMode::Full,
            ZKind::Sym => ZMode::Symmetric,
        })
    }
}

#[derive(Args)]
struct PolicyArgs {
    /// Share of active soft clauses dropped after a failed round.
    #[arg(long, default_value_t = 0.5)]
    drop: f64,
    #[arg(long, default_value_t = 10)]
    rounds: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Conflict budget per round.
    #[arg(long, default_value_t = 100_000)]
    conflicts: u64,
    /// Wall-clock budget per round, in seconds.
    #[arg(long)]
    seconds: Option<f64>,
    /// Rank victims by penalties summed over all rounds.
    #[arg(long)]
    cumulative: bool,
}

impl PolicyArgs {
    fn policy(&self) -> Result<RelaxPolicy, CliError> {
        let budget = SolveBudget::new(Some(self.conflicts), self.seconds, self.seed).map_err(|e| CliError::Usage(e.to_string()))?;
        let policy = RelaxPolicy::new(self.drop, self.rounds, budget).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(if self.cumulative { policy.cumulative() } else { policy })
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error("{0}")]
    Budget(String),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Parse { .. } => 2,
            CliError::Invalid(_) => 3,
            CliError::Budget(_) => 4,
            CliError::Io { .. } => 5,
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.display().to_string(), source }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(io_err(path))
}

fn read_coloring(path: &Path, format: Option<TextFormat>) -> Result<(EdgeColoring, TextFormat), CliError> {
    let text = read_text(path)?;
    let format = format.unwrap_or_else(|| TextFormat::detect(&text));
    let coloring = parse_coloring(&text, Some(format))
        .map_err(|e| CliError::Parse { path: path.display().to_string(), message: e.to_string() })?;
    Ok((coloring, format))
}

fn write_text(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(io_err(p)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: "stdout".into(), source }),
    }
}

fn usage(e: impl std::fmt::Display) -> CliError {
    CliError::Usage(e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(workers) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(workers).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(cli.command) {
        Ok((out, code)) => {
            out.print(cli.json);
            ExitCode::from(code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", json!({ "error": e.to_string(), "code": e.code() }));
            } else {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(Output, u8), CliError> {
    match command {
        Command::Verify { file, s, t, limit, format } => verify(&file, s, t, limit, format),
        Command::Encode { size, z, base, output } => encode(&size, &z, base.as_deref(), output.as_deref()),
        Command::Counts { size, base } => counts(&size, base.as_deref()),
        Command::Zsearch { size, sym, all, node_limit, output, adj_dir } => {
            zsearch(&size, sym, all, node_limit, output.as_deref(), adj_dir.as_deref())
        }
        Command::Zlargest { s, t, nmax, sym, node_limit } => zlargest(s, t, nmax, sym, node_limit),
        Command::RelaxSolve { size, z, policy, output } => relax(&size, &z, &policy, output.as_deref()),
        Command::Extend { base, size, policy, output } => extend_cmd(&base, &size, &policy, output.as_deref()),
        Command::Flip { file, i, j, output } => flip(&file, i, j, output.as_deref()),
        Command::Serve { port, host, ttl_hours, limit } => serve(&host, port, ttl_hours, limit),
        Command::DecodeModel { model, n, output } => decode_model(&model, n, output.as_deref()),
    }
}

fn verify(file: &Path, s: usize, t: usize, limit: usize, format: Option<TextFormat>) -> Result<(Output, u8), CliError> {
    let (coloring, _) = read_coloring(file, format)?;
    if !coloring.is_total() {
        return Err(CliError::Invalid(format!("{} undecided edges", coloring.undecided_count())));
    }
    let report = enumerate_violations(&coloring, s, t, limit).map_err(usage)?;
    let mut out = Output::new(
        Record::new()
            .field("valid", report.valid)
            .field("n", report.n)
            .field("s", s)
            .field("t", t)
            .field("violations", report.violations.len())
            .field("truncated", report.truncated),
    );
    for v in &report.violations {
        out.push("violation", Record::new().field("color", v.color.number()).field("vertices", &v.vertices));
    }
    Ok((out, if report.valid { 0 } else { 3 }))
}

fn encode(size: &Size, z: &ZArgs, base: Option<&Path>, output: Option<&Path>) -> Result<(Output, u8), CliError> {
    let mut source = ClauseSource::ramsey(size.s, size.t, size.n).map_err(usage)?;
    if let Some(path) = base {
        let (coloring, _) = read_coloring(path, None)?;
        source = source.with_fixed(coloring.embed(size.n).map_err(usage)?).map_err(usage)?;
    }
    let source = source.with_z(z.mode(ZKind::None)?).map_err(usage)?;
    let clauses = source.count_hard() + source.stream_z(&mut ramsey_core::cnf::ClauseCounter::default()).unwrap_or(0);
    let record = Record::new().field("vars", source.num_vars()).field("clauses", clauses);
    match output {
        Some(path) => {
            let file = std::fs::File::create(path).map_err(io_err(path))?;
            let mut w = emit_dimacs(&source, std::io::BufWriter::new(file)).map_err(io_err(path))?;
            w.flush().map_err(io_err(path))?;
            Ok((Output::new(record.field("file", path.display().to_string())), 0))
        }
        None => {
            let stdout = std::io::stdout();
            let mut w = emit_dimacs(&source, std::io::BufWriter::new(stdout.lock()))
                .map_err(|source| CliError::Io { path: "stdout".into(), source })?;
            w.flush().map_err(|source| CliError::Io { path: "stdout".into(), source })?;
            eprintln!("{}", record.to_line());
            Ok((Output::empty(), 0))
        }
    }
}

fn counts(size: &Size, base: Option<&Path>) -> Result<(Output, u8), CliError> {
    match base {
        None => {
            let c = ramsey_counts(size.s, size.t, size.n).map_err(usage)?;
            Ok((Output::new(Record::new().field("vars", c.variables).field("clauses", c.clauses)), 0))
        }
        Some(path) => {
            let (coloring, _) = read_coloring(path, None)?;
            let r = unsettled_counts(&coloring, size.s, size.t, size.n).map_err(usage)?;
            Ok((
                Output::new(
                    Record::new()
                        .field("unsettled_vars", r.unsettled_vars)
                        .field("unsettled_clauses", r.unsettled_clauses)
                        .field("z_vars", r.z_vars)
                        .field("z_clauses", r.z_clauses),
                ),
                0,
            ))
        }
    }
}

fn search_options(all: bool, node_limit: Option<u64>) -> SearchOptions {
    let opts = if all { SearchOptions::all() } else { SearchOptions::first() };
    match node_limit {
        Some(l) => opts.with_node_limit(l),
        None => opts,
    }
}

fn mode(sym: bool) -> CirculantMode {
    if sym {
        CirculantMode::Symmetric
    } else {
        CirculantMode::Full
    }
}

fn zsearch_output(r: &ZSearchResult) -> Output {
    let mut out = Output::new(
        Record::new()
            .field("n", r.n)
            .field("mode", r.mode.as_str())
            .field("count", r.count)
            .field("exhaustive", r.exhaustive)
            .field("nodes", r.nodes),
    );
    for z in &r.solutions {
        out.push("solution", Record::new().field("z", z.to_bit_string()));
    }
    out
}

fn zsearch(
    size: &Size,
    sym: bool,
    all: bool,
    node_limit: Option<u64>,
    output: Option<&Path>,
    adj_dir: Option<&Path>,
) -> Result<(Output, u8), CliError> {
    let r = match search_z(size.s, size.t, size.n, mode(sym), &search_options(all, node_limit)) {
        Ok(r) => r,
        Err(ZSearchError::BudgetExceeded(partial)) => {
            return Err(CliError::Budget(format!("node budget exhausted after {} nodes, {} solutions so far", partial.nodes, partial.count)))
        }
        Err(e) => return Err(usage(e)),
    };
    if let Some(path) = output {
        let text: String = r.solutions.iter().map(|z| z.to_bit_string() + "\n").collect();
        std::fs::write(path, text).map_err(io_err(path))?;
    }
    if let Some(dir) = adj_dir {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
        for (idx, z) in r.solutions.iter().enumerate() {
            let path = dir.join(format!("z{idx:04}.adj"));
            let text = emit_coloring(&z.to_coloring().map_err(usage)?, TextFormat::Adj).map_err(usage)?;
            std::fs::write(&path, text).map_err(io_err(&path))?;
        }
    }
    let code = if r.count > 0 { 0 } else { 1 };
    Ok((zsearch_output(&r), code))
}

fn zlargest(s: usize, t: usize, nmax: usize, sym: bool, node_limit: Option<u64>) -> Result<(Output, u8), CliError> {
    match largest_z(s, t, nmax, mode(sym), &search_options(true, node_limit)) {
        Ok(Some(r)) => Ok((Output::new(Record::new().field("n", r.n).field("count", r.count).field("mode", r.mode.as_str())), 0)),
        Ok(None) => Ok((Output::new(Record::new().field("n", 0).field("count", 0).field("mode", mode(sym).as_str())), 1)),
        Err(ZSearchError::BudgetExceeded(partial)) => {
            Err(CliError::Budget(format!("node budget exhausted at n={}", partial.n)))
        }
        Err(e) => Err(usage(e)),
    }
}

fn trace_output(trace: &RelaxTrace, mut head: Record) -> Output {
    head = head.field("outcome", trace.outcome.as_str()).field("rounds", trace.rounds.len()).field("soft", trace.original_soft).field("active", trace.active.len());
    if let Some(sat) = trace.satisfied_soft {
        head = head.field("satisfied", sat);
    }
    let mut out = Output::new(head);
    for r in &trace.rounds {
        out.push(
            "round",
            Record::new()
                .field("round", r.round)
                .field("status", r.status.as_str())
                .field("active", r.active)
                .field("dropped", r.dropped)
                .field("kept", format!("{:.4}", r.kept_fraction))
                .field("conflicts", r.stats.conflicts)
                .field("soft_conflicts", r.stats.soft_conflicts)
                .field("decisions", r.stats.decisions)
                .field("restarts", r.stats.restarts),
        );
    }
    out
}

fn relax_exit(outcome: RelaxOutcome) -> u8 {
    match outcome {
        RelaxOutcome::Model => 0,
        RelaxOutcome::HardUnsat => 1,
        RelaxOutcome::TotallyRelaxedFailure | RelaxOutcome::RoundLimit => 4,
    }
}

fn relax(size: &Size, z: &ZArgs, policy: &PolicyArgs, output: Option<&Path>) -> Result<(Output, u8), CliError> {
    let source = ClauseSource::ramsey(size.s, size.t, size.n).map_err(usage)?.with_z(z.mode(ZKind::Full)?).map_err(usage)?;
    let soft = source.z_clauses();
    let r = relax_solve(&source, &soft, &policy.policy()?).map_err(usage)?;
    if let (Some(c), Some(path)) = (&r.coloring, output) {
        write_text(Some(path), &emit_coloring(c, TextFormat::Adj).map_err(usage)?)?;
    }
    Ok((trace_output(&r.trace, Record::new()), relax_exit(r.trace.outcome)))
}

fn extend_cmd(base: &Path, size: &Size, policy: &PolicyArgs, output: Option<&Path>) -> Result<(Output, u8), CliError> {
    let (coloring, _) = read_coloring(base, None)?;
    let r = match extend(&coloring, size.s, size.t, size.n, &policy.policy()?) {
        Ok(r) => r,
        Err(e @ (ExtendError::InvalidBase { .. } | ExtendError::Graph(_))) => return Err(CliError::Invalid(e.to_string())),
        Err(e) => return Err(usage(e)),
    };
    let head = Record::new()
        .field("unsettled_vars", r.stats.unsettled_vars)
        .field("unsettled_clauses", r.stats.unsettled_clauses)
        .field("z_vars", r.stats.z_vars)
        .field("z_clauses", r.stats.z_clauses);
    let code = match &r.outcome {
        ExtendOutcome::Extended(c) => {
            if let Some(path) = output {
                write_text(Some(path), &emit_coloring(c, TextFormat::Adj).map_err(usage)?)?;
            }
            0
        }
        ExtendOutcome::NoExtension => 1,
        ExtendOutcome::GaveUp(_) => 4,
    };
    Ok((trace_output(&r.trace, head), code))
}

fn flip(file: &Path, i: usize, j: usize, output: Option<&Path>) -> Result<(Output, u8), CliError> {
    let (coloring, format) = read_coloring(file, None)?;
    let flipped = coloring.flip_edge(i, j).map_err(usage)?;
    write_text(output, &emit_coloring(&flipped, format).map_err(usage)?)?;
    Ok((Output::empty(), 0))
}

fn serve(host: &str, port: u16, ttl_hours: u64, limit: usize) -> Result<(Output, u8), CliError> {
    let addr: SocketAddr = format!("{host}:{port}").parse().map_err(usage)?;
    let config = ramsey_service::ServiceConfig { ttl: Duration::from_secs(ttl_hours * 3600), default_limit: limit };
    let runtime = tokio::runtime::Runtime::new().map_err(|source| CliError::Io { path: "runtime".into(), source })?;
    eprintln!("listening={addr}");
    runtime
        .block_on(ramsey_service::serve(addr, config))
        .map_err(|source| CliError::Io { path: addr.to_string(), source })?;
    Ok((Output::empty(), 0))
}

fn decode_model(model: &Path, n: usize, output: Option<&Path>) -> Result<(Output, u8), CliError> {
    let text = read_text(model)?;
    let decoded = match parse_model(&text, n) {
        Ok(d) => d,
        Err(ModelError::Unsatisfiable) => {
            return Ok((Output::new(Record::new().field("satisfiable", false)), 1));
        }
        Err(e) => return Err(CliError::Parse { path: model.display().to_string(), message: e.to_string() }),
    };
    let adj = emit_coloring(&decoded.coloring, TextFormat::Adj).map_err(usage)?;
    let mut out = Output::new(
        Record::new()
            .field("satisfiable", true)
            .field("n", n)
            .field("z_inconsistencies", decoded.z_inconsistencies.len()),
    );
    for z in &decoded.z_inconsistencies {
        out.push("z_inconsistency", Record::new().field("i", z.i).field("j", z.j).field("k", z.k));
    }
    match output {
        Some(path) => write_text(Some(path), &adj)?,
        None => {
            // The witness owns stdout; the summary goes to stderr.
            write_text(None, &adj)?;
            eprintln!("{}", out.to_lines());
            return Ok((Output::empty(), 0));
        }
    }
    Ok((out, 0))
}
