use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cxn::corpus::parse_corpus;
use cxn::lexicon_io::{parse_lexicon, LexiconError, Mode};
use cxn::pipeline::{
    annotate_corpus, by_responder, check_probes, graph_records, read_jsonl, segment_text,
    with_gap_limit, write_jsonl,
};
use cxn::provider::{CompletionProvider, DecodeParams, HttpProvider, StubProvider, API_KEY_ENV};
use cxn::records::{GraphInput, RefineRec};
use cxn::runner::{run, RunOptions};
use cxn_core::model::Lexicon;
use cxn_core::probe::{score, Probe, Transcript};
use cxn_core::validate::{has_errors, validate};

#[derive(Parser)]
#[command(
    name = "cxn",
    version,
    about = "Constructicon tools: lexicons, matching, segmentation, graphs and probes"
)]
#[command(propagate_version = true)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a lexicon and print its diagnostics.
    Validate(ValidateArgs),
    /// Match constructions in a token-per-line corpus.
    Annotate(AnnotateArgs),
    /// Segment verb words, one sentence per line.
    Segment(SegmentArgs),
    /// Build literal and idiomatic graphs from annotate or segment output.
    Graph(GraphArgs),
    /// Run or score interpretation probes.
    #[command(subcommand)]
    Probe(ProbeCmd),
}

#[derive(Args)]
struct LexiconArgs {
    /// Lexicon JSON file.
    lexicon: PathBuf,
    /// Ignore unknown keys inside entries.
    #[arg(long)]
    lax: bool,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    lex: LexiconArgs,
}

#[derive(Args)]
struct AnnotateArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    /// Corpus file: surface, lemma and POS per line, blank line between sentences.
    corpus: PathBuf,
    /// Override every construction's gap limit.
    #[arg(long)]
    gap_limit: Option<usize>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Output file; standard output when absent.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SegmentArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    words: PathBuf,
    /// Template id; the lexicon's first template when absent.
    #[arg(long)]
    template: Option<String>,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GraphArgs {
    #[command(flatten)]
    lex: LexiconArgs,
    annotations: PathBuf,
    /// JSON object of record id to per-side variable and concept overrides.
    #[arg(long)]
    refine: Option<PathBuf>,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum ProbeCmd {
    /// Send every probe to a provider and write transcripts.
    Run(RunArgs),
    /// Score transcripts against gold answers.
    Score(ScoreArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum ProviderKind {
    Stub,
    Http,
}

#[derive(Args)]
#[command(
    after_help = "The http provider reads its API key from the CXN_PROBE_API_KEY environment variable."
)]
struct RunArgs {
    #[arg(long)]
    probes: PathBuf,
    #[arg(long, value_enum)]
    provider: ProviderKind,
    /// Base URL of an OpenAI-style chat completions API.
    #[arg(long)]
    endpoint: Option<String>,
    /// Model name; also the responder id in transcripts.
    #[arg(long)]
    model: Option<String>,
    #[arg(long, default_value_t = 1)]
    concurrency: usize,
    #[arg(long, default_value_t = 0.0)]
    temperature: f64,
    /// Stub only: JSON object of probe id to canned reply.
    #[arg(long)]
    responses: Option<PathBuf>,
    /// Stub only: reply for probes missing from --responses.
    #[arg(long, default_value = "")]
    default_reply: String,
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScoreArgs {
    /// Probe file with gold answers.
    #[arg(long)]
    gold: PathBuf,
    #[arg(long, num_args = 1.., required = true)]
    transcripts: Vec<PathBuf>,
    /// Responder ids that are human annotators.
    #[arg(long = "human")]
    humans: Vec<String>,
    #[arg(long)]
    report: Option<PathBuf>,
}

enum Failure {
    Domain(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Domain(m) | Failure::Usage(m) | Failure::Io(m) => m,
        }
    }
}

type Res<T> = Result<T, Failure>;

fn require(paths: &[&Path]) -> Res<()> {
    for p in paths {
        if !p.exists() {
            return Err(Failure::Usage(format!("no such file: {}", p.display())));
        }
    }
    Ok(())
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Res<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("stdout: {e}")))
        }
    }
}

/// Parses and validates; prints diagnostics to stderr and fails on errors.
fn load_lexicon(args: &LexiconArgs) -> Res<Lexicon> {
    let bytes = fs::read(&args.lexicon)
        .map_err(|e| Failure::Io(format!("{}: {e}", args.lexicon.display())))?;
    let mode = if args.lax { Mode::Lax } else { Mode::Strict };
    let lex = parse_lexicon(&bytes, mode).map_err(|e| match e {
        LexiconError::Validation(ds) => {
            ds.iter().for_each(|d| eprintln!("{d}"));
            Failure::Domain("invalid lexicon".into())
        }
        other => Failure::Domain(format!("{}: {other}", args.lexicon.display())),
    })?;
    let diags = validate(&lex);
    for d in &diags {
        eprintln!("{d}");
    }
    if has_errors(&diags) {
        return Err(Failure::Domain(format!(
            "{}: lexicon has errors",
            args.lexicon.display()
        )));
    }
    Ok(lex)
}

fn cmd_annotate(a: &AnnotateArgs) -> Res<()> {
    require(&[&a.lex.lexicon, &a.corpus])?;
    let lex = with_gap_limit(&load_lexicon(&a.lex)?, a.gap_limit);
    let sentences = parse_corpus(&read(&a.corpus)?)
        .map_err(|e| Failure::Domain(format!("{}: {e}", a.corpus.display())))?;
    emit(
        a.out.as_deref(),
        &write_jsonl(&annotate_corpus(&lex, &sentences, a.jobs)),
    )
}

fn cmd_segment(a: &SegmentArgs) -> Res<()> {
    require(&[&a.lex.lexicon, &a.words])?;
    let lex = load_lexicon(&a.lex)?;
    let recs = segment_text(&lex, &read(&a.words)?, a.template.as_deref(), a.jobs)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    emit(a.out.as_deref(), &write_jsonl(&recs))
}

fn cmd_graph(a: &GraphArgs) -> Res<()> {
    let mut paths: Vec<&Path> = vec![&a.lex.lexicon, &a.annotations];
    if let Some(r) = &a.refine {
        paths.push(r);
    }
    require(&paths)?;
    let lex = load_lexicon(&a.lex)?;
    let inputs: Vec<GraphInput> = read_jsonl(&read(&a.annotations)?)
        .map_err(|e| Failure::Domain(format!("{}: {e}", a.annotations.display())))?;
    let refinements: BTreeMap<String, RefineRec> = match &a.refine {
        Some(p) => serde_json::from_str(&read(p)?)
            .map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?,
        None => BTreeMap::new(),
    };
    let recs = graph_records(&lex, &inputs, &refinements).map_err(Failure::Domain)?;
    emit(a.out.as_deref(), &write_jsonl(&recs))
}

fn read_probes(path: &Path) -> Res<Vec<Probe>> {
    let probes: Vec<Probe> = read_jsonl(&read(path)?)
        .map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    check_probes(&probes).map_err(|e| Failure::Domain(format!("{}: {e}", path.display())))?;
    Ok(probes)
}

fn cmd_probe_run(a: &RunArgs) -> Res<()> {
    let mut paths: Vec<&Path> = vec![&a.probes];
    if let Some(r) = &a.responses {
        paths.push(r);
    }
    require(&paths)?;
    let provider: Box<dyn CompletionProvider> = match a.provider {
        ProviderKind::Stub => {
            let replies: BTreeMap<String, String> = match &a.responses {
                Some(p) => serde_json::from_str(&read(p)?)
                    .map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?,
                None => BTreeMap::new(),
            };
            Box::new(StubProvider::table(
                a.model.as_deref().unwrap_or("stub"),
                replies,
                &a.default_reply,
            ))
        }
        ProviderKind::Http => {
            let (Some(endpoint), Some(model)) = (&a.endpoint, &a.model) else {
                return Err(Failure::Usage(
                    "--provider http needs --endpoint and --model".into(),
                ));
            };
            if a.responses.is_some() {
                return Err(Failure::Usage(
                    "--responses only applies to the stub provider".into(),
                ));
            }
            Box::new(
                HttpProvider::from_env(endpoint, model)
                    .map_err(|e| Failure::Usage(e.to_string()))?,
            )
        }
    };
    let probes = read_probes(&a.probes)?;
    let opts = RunOptions {
        concurrency: a.concurrency.max(1),
        params: DecodeParams {
            temperature: a.temperature,
        },
        ..RunOptions::default()
    };
    let outcomes = run(provider.as_ref(), &probes, &opts);
    let transcripts: Vec<Transcript> = outcomes.iter().map(|o| o.transcript.clone()).collect();
    emit(a.out.as_deref(), &write_jsonl(&transcripts))?;
    let failed: Vec<_> = outcomes.iter().filter(|o| o.failure.is_some()).collect();
    for o in &failed {
        eprintln!(
            "probe {}: {}",
            o.transcript.probe_id, o.transcript.rationale
        );
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::Io(format!(
            "{} of {} probes failed",
            failed.len(),
            outcomes.len()
        )))
    }
}

fn cmd_probe_score(a: &ScoreArgs) -> Res<()> {
    let mut paths: Vec<&Path> = vec![&a.gold];
    paths.extend(a.transcripts.iter().map(PathBuf::as_path));
    require(&paths)?;
    let probes = read_probes(&a.gold)?;
    let mut all = Vec::new();
    for p in &a.transcripts {
        let ts: Vec<Transcript> =
            read_jsonl(&read(p)?).map_err(|e| Failure::Domain(format!("{}: {e}", p.display())))?;
        all.extend(ts);
    }
    let report = score(&probes, &by_responder(all), &a.humans)
        .map_err(|e| Failure::Domain(e.to_string()))?;
    let mut text = serde_json::to_string_pretty(&report).expect("report serializes");
    text.push('\n');
    emit(a.report.as_deref(), &text)
}

fn dispatch(cli: &Cli) -> Res<()> {
    match &cli.cmd {
        Cmd::Validate(a) => {
            require(&[&a.lex.lexicon])?;
            load_lexicon(&a.lex).map(|_| ())
        }
        Cmd::Annotate(a) => cmd_annotate(a),
        Cmd::Segment(a) => cmd_segment(a),
        Cmd::Graph(a) => cmd_graph(a),
        Cmd::Probe(ProbeCmd::Run(a)) => cmd_probe_run(a),
        Cmd::Probe(ProbeCmd::Score(a)) => cmd_probe_score(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if let Failure::Usage(_) = f {
                eprintln!(
                    "error: {}\n\nFor more information, try '--help'.",
                    f.message()
                );
            } else {
                eprintln!("error: {}", f.message());
            }
            if f.message().contains(API_KEY_ENV) {
                eprintln!("set {API_KEY_ENV} in the environment; keys are not accepted on the command line");
            }
            ExitCode::from(f.code())
        }
    }
}
