use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use treespectrum::selftest::{run_selftest, SelftestConfig};
use treespectrum::spectrum::records_to_csv;
use treespectrum::tree_count::DEFAULT_ENUMERATION_BUDGET;
use treespectrum::{
    build_multigraph, build_simple_graph, continuant_pair, minus_cf, pad_graph, reconstruct_word,
    run_spectrum, tau_enumerate, tau_kirchhoff, verify_word, ConstructionParams, ContinuantPair,
    Error, MultiGraph, Rational, SpectrumOptions, VerifyOptions, Word,
};

#[derive(Parser, Debug)]
#[command(
    name = "treespectrum",
    version,
    about = "Spanning-tree count spectra of continuant graph families"
)]
struct Cli {
    /// Write the document here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,

    /// Worker threads for the parallel kernels.
    #[arg(long, global = true, env = "TREESPECTRUM_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Continuant pairs and their inverse.
    #[command(subcommand)]
    Continuant(ContinuantCommand),
    /// Emit H_w or G_w as canonical JSON or DOT.
    Build(BuildArgs),
    /// Count spanning trees of a graph file.
    Tau(TauArgs),
    /// Check every identity on one word.
    Verify(VerifyArgs),
    /// Walk a word family and aggregate the spectra.
    Spectrum(SpectrumArgs),
    /// Run the seeded invariant fuzz suites.
    Selftest(SelftestArgs),
}

#[derive(Subcommand, Debug)]
enum ContinuantCommand {
    /// Print (K_r, K_{r-1}) and the continued fraction value of a word.
    Eval {
        #[arg(long)]
        word: Word,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Recover the word from a pair `hi,lo`.
    Reconstruct {
        #[arg(long)]
        pair: ContinuantPair,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Kind {
    Multigraph,
    Simple,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Kirchhoff,
    Enumerate,
}

#[derive(Args, Debug)]
struct BuildArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    word: Word,
    /// Anchor count of G_w; defaults to the largest entry minus one.
    #[arg(long)]
    q: Option<u32>,
    /// Pad G_w with pendant vertices up to this many vertices.
    #[arg(long)]
    pad_to: Option<usize>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct TauArgs {
    /// Graph in canonical JSON.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Kirchhoff)]
    method: Method,
    /// Largest number of edge subsets the enumeration may visit.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    q: u32,
    #[arg(long)]
    word: Word,
    /// Also check that this many pendant vertices keep the count.
    #[arg(long)]
    pad: Option<usize>,
    /// Enumeration cross-check budget, in edge subsets.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_BUDGET)]
    budget: u64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct SpectrumArgs {
    #[arg(long)]
    m: usize,
    #[arg(long)]
    q: u32,
    /// Exponent of the informational lower bound, as `p/q`.
    #[arg(long, default_value = "1/10")]
    eta: Rational,
    /// Pad every G_w by this many vertices.
    #[arg(long)]
    pad: Option<usize>,
    /// Largest family size that will be walked.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args, Debug)]
struct SelftestArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Scale every suite down by this factor.
    #[arg(long, default_value_t = 1)]
    shrink: usize,
    #[arg(long, value_enum, default_value_t = Format::Plain)]
    format: Format,
}

enum Failure {
    /// Bad input or a computation that could not run.
    Domain(String),
    /// An identity check came out false.
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::FiberBound(_) | Error::Inconsistent(_) => Failure::Check(e.to_string()),
            e => Failure::Domain(e.to_string()),
        }
    }
}

/// The emitted document and whether every check it carries passed.
struct Outcome {
    text: String,
    verified: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome {
            text,
            verified: true,
        }
    }
}

fn unsupported(command: &str, format: Format) -> Failure {
    let name = format.to_possible_value().expect("no skipped variants");
    Failure::Domain(format!(
        "{command} does not support --format {}",
        name.get_name()
    ))
}

fn json_line(value: serde_json::Value) -> String {
    serde_json::to_string_pretty(&value).expect("json values serialize") + "\n"
}

fn continuant(cmd: ContinuantCommand) -> Result<Outcome, Failure> {
    match cmd {
        ContinuantCommand::Eval { word, format } => {
            let pair = continuant_pair(&word);
            let value = minus_cf(&word);
            let text = match format {
                Format::Plain => format!("pair {pair}\nvalue {value}\n"),
                Format::Json => json_line(json!({
                    "word": word.to_string(),
                    "k_r": pair.hi().to_string(),
                    "k_r_minus_1": pair.lo().to_string(),
                    "value": value.to_string(),
                })),
                f => return Err(unsupported("continuant eval", f)),
            };
            Ok(Outcome::ok(text))
        }
        ContinuantCommand::Reconstruct { pair, format } => {
            let word = reconstruct_word(&pair)?;
            let text = match format {
                Format::Plain => format!("word {word}\n"),
                Format::Json => {
                    json_line(json!({ "pair": pair.to_string(), "word": word.to_string() }))
                }
                f => return Err(unsupported("continuant reconstruct", f)),
            };
            Ok(Outcome::ok(text))
        }
    }
}

fn build(args: BuildArgs) -> Result<Outcome, Failure> {
    let graph = match args.kind {
        Kind::Multigraph => {
            if args.pad_to.is_some() || args.q.is_some() {
                return Err(Failure::Domain(
                    "--q and --pad-to apply to --kind simple only".into(),
                ));
            }
            build_multigraph(&args.word)?
        }
        Kind::Simple => {
            let q = match args.q {
                Some(q) => q,
                None => default_q(&args.word)?,
            };
            let g = build_simple_graph(&ConstructionParams::for_word(q, args.word)?)?;
            match args.pad_to {
                Some(n) => pad_graph(&g, n)?,
                None => g,
            }
        }
    };
    let text = match args.format {
        Format::Json => graph.encode() + "\n",
        Format::Dot => graph.to_dot(),
        f => return Err(unsupported("build", f)),
    };
    Ok(Outcome::ok(text))
}

fn default_q(word: &Word) -> Result<u32, Failure> {
    let largest = word.entries().iter().max().expect("words are nonempty");
    u32::try_from(largest - 1u32)
        .map(|q| q.max(1))
        .map_err(|_| Failure::Domain(format!("entry {largest} is too large for G_w")))
}

fn tau(args: TauArgs) -> Result<Outcome, Failure> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| Failure::Domain(format!("cannot read {}: {e}", args.input.display())))?;
    let graph = MultiGraph::decode(&text)?;
    let count = match args.method {
        Method::Kirchhoff => tau_kirchhoff(&graph)?,
        Method::Enumerate => tau_enumerate(&graph, args.budget)?,
    };
    let text = match args.format {
        Format::Plain => format!("tau {}\n", count.value),
        Format::Json => json_line(json!({
            "tau": count.value.to_string(),
            "method": count.method,
        })),
        f => return Err(unsupported("tau", f)),
    };
    Ok(Outcome::ok(text))
}

fn verify(args: VerifyArgs) -> Result<Outcome, Failure> {
    let params = ConstructionParams::new(args.m, args.q, args.word)?;
    let opts = VerifyOptions {
        pad: args.pad,
        enumeration_budget: args.budget,
    };
    let record = verify_word(&params, &opts)?;
    let text = match args.format {
        Format::Json => serde_json::to_string_pretty(&record).expect("records serialize") + "\n",
        Format::Csv => records_to_csv(std::slice::from_ref(&record)),
        Format::Plain => format!(
            "word {}\nD_w {}\ntau {}\nflags {}\n",
            record.word,
            record.d_w,
            record.tau_simple,
            record.flags.summary()
        ),
        f => return Err(unsupported("verify", f)),
    };
    Ok(Outcome {
        text,
        verified: record.flags.all_ok(),
    })
}

fn spectrum(args: SpectrumArgs) -> Result<Outcome, Failure> {
    let mut opts = SpectrumOptions {
        eta: args.eta,
        ..SpectrumOptions::default()
    };
    opts.verify.pad = args.pad;
    if let Some(budget) = args.budget {
        opts.word_budget = budget;
    }
    if !matches!(args.format, Format::Json | Format::Csv) {
        return Err(unsupported("spectrum", args.format));
    }
    let report = run_spectrum(args.m, args.q, &opts)?;
    let text = match args.format {
        Format::Csv => report.to_csv(),
        _ => report.to_json(),
    };
    Ok(Outcome {
        text,
        verified: report.all_ok(),
    })
}

fn selftest(args: SelftestArgs) -> Result<Outcome, Failure> {
    let base = SelftestConfig::default();
    let k = args.shrink.max(1);
    let cfg = SelftestConfig {
        seed: args.seed,
        words: base.words / k,
        matrices: base.matrices / k,
        graphs: base.graphs / k,
        integers: base.integers / k as u64,
    };
    let suites = run_selftest(&cfg)?;
    let verified = suites.iter().all(|s| s.passed);
    let text = match args.format {
        Format::Plain => suites
            .iter()
            .map(|s| {
                let status = if s.passed { "ok" } else { "FAILED" };
                let detail = s
                    .failure
                    .as_deref()
                    .map(|f| format!(" ({f})"))
                    .unwrap_or_default();
                format!("{:<26} {:>7} cases  {status}{detail}\n", s.name, s.cases)
            })
            .collect(),
        Format::Json => json_line(json!({ "seed": args.seed, "suites": suites })),
        f => return Err(unsupported("selftest", f)),
    };
    Ok(Outcome { text, verified })
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(Failure::Domain("--threads must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Domain(format!("cannot size thread pool: {e}")))?;
    }
    match cli.command {
        Command::Continuant(cmd) => continuant(cmd),
        Command::Build(args) => build(args),
        Command::Tau(args) => tau(args),
        Command::Verify(args) => verify(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Selftest(args) => selftest(args),
    }
}

fn emit(path: Option<&PathBuf>, text: &str) -> std::io::Result<()> {
    match path {
        Some(path) => fs::write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let output = cli.output.clone();
    match run(cli) {
        Ok(outcome) => {
            if let Err(e) = emit(output.as_ref(), &outcome.text) {
                eprintln!("error: cannot write output: {e}");
                return ExitCode::from(1);
            }
            if outcome.verified {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed: at least one check is false");
                ExitCode::from(2)
            }
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(2)
        }
    }
}
