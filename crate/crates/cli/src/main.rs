use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rhetor_core::corpus::{corpus_stats, read_corpus, validate_corpus, write_corpus, Corpus};
use rhetor_core::pipeline::{
    component_dataset, cross_validate, fit_final_and_test, generate_relation_pairs, premise_dataset,
    relation_dataset, split_task_data, CvReport, FinalReport, TaskData, TaskModels,
    DEFAULT_TEST_FRACTION,
};
use rhetor_core::portfolio::{build_portfolio, mds_project, rank_examples_by_delta};
use rhetor_core::{Analyzer, EmbeddingProvider, ModelBundle, ModelSpec, ProviderConfig, TaskKind};
use rhetor_service::{ServiceConfig, DEFAULT_PORT};
use serde::Serialize;

const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "rhetor", version, about = "Argument structure and persuasive-strategy analysis")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a corpus, print its label statistics
    Ingest {
        #[arg(long)]
        corpus: PathBuf,
        /// Also write the corpus back out in canonical form
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a corpus against the annotation rules
    Validate {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Label counts per topic
    Stats {
        #[arg(long)]
        corpus: PathBuf,
    },
    /// Cross-validate model specs, fit the winner, write artifacts
    Train(TrainArgs),
    /// Fit the selected spec on the training split and score the test split
    Evaluate(EvaluateArgs),
    /// Run the HTTP service
    Serve {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        models: PathBuf,
        #[arg(long, default_value_t = DEFAULT_PORT)]
        port: u16,
        #[arg(long, default_value = "submissions.jsonl")]
        log: PathBuf,
    },
    /// Analyze one text file
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        topic: String,
        #[arg(long)]
        models: PathBuf,
        /// Corpus whose topic examples the text is projected among
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Components,
    Relations,
    Premises,
    All,
}

impl TaskArg {
    fn tasks(self) -> Vec<TaskKind> {
        match self {
            TaskArg::Components => vec![TaskKind::ComponentExtraction],
            TaskArg::Relations => vec![TaskKind::RelationDetection],
            TaskArg::Premises => vec![TaskKind::PremiseClassification],
            TaskArg::All => TaskKind::ALL.to_vec(),
        }
    }
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    task: TaskArg,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Embedding provider configuration (JSON); default is the builtin
    /// hashing embedder
    #[arg(long)]
    provider: Option<PathBuf>,
    /// Builtin embedder width when no --provider file is given
    #[arg(long, default_value_t = rhetor_core::features::DEFAULT_DIMENSION)]
    dimension: usize,
}

#[derive(Args)]
struct TrainArgs {
    #[command(flatten)]
    data: DataArgs,
    #[arg(long, default_value_t = 5)]
    folds: usize,
    /// JSON list of model specs; default is every family with default
    /// hyperparameters
    #[arg(long)]
    specs: Option<PathBuf>,
    /// Output directory for model artifacts and CV reports
    #[arg(long, default_value = "models")]
    out: PathBuf,
}

#[derive(Args)]
struct EvaluateArgs {
    #[command(flatten)]
    data: DataArgs,
    /// Directory holding the CV reports written by `train`
    #[arg(long, default_value = "models")]
    models: PathBuf,
    #[arg(long, value_enum, default_value = "table")]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Json,
}

fn print_json<T: Serialize>(value: &T) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn load_corpus(path: &Path) -> Result<Corpus> {
    read_corpus(path).with_context(|| format!("reading corpus {}", path.display()))
}

#[derive(Serialize)]
struct ValidationOutput<'a> {
    summary: String,
    violations: &'a [rhetor_core::corpus::Violation],
    notes: &'a [rhetor_core::corpus::Note],
}

/// Prints the report; errors when there are violations.
fn report_validation(corpus: &Corpus) -> Result<()> {
    let report = validate_corpus(corpus);
    let summary = format!("{} violations", report.violations.len());
    eprintln!("{summary}");
    print_json(&ValidationOutput {
        summary: summary.clone(),
        violations: &report.violations,
        notes: &report.notes,
    })?;
    if !report.violations.is_empty() {
        bail!("corpus has {summary}");
    }
    Ok(())
}

fn provider_config(args: &DataArgs) -> Result<ProviderConfig> {
    match &args.provider {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing provider config {}", p.display()))
        }
        None => Ok(ProviderConfig::builtin(args.dimension, 0)),
    }
}

fn task_data(task: TaskKind, corpus: &Corpus, provider: &dyn EmbeddingProvider, seed: u64) -> Result<TaskData> {
    Ok(match task {
        TaskKind::ComponentExtraction => TaskData::Components(component_dataset(corpus, provider)?),
        TaskKind::RelationDetection => {
            let pairs = generate_relation_pairs(corpus, seed);
            tracing::info!(positives = pairs.positives, negatives = pairs.negatives, shortfall = pairs.shortfall, "relation pairs");
            TaskData::Relations(relation_dataset(corpus, &pairs.pairs, provider)?)
        }
        TaskKind::PremiseClassification => TaskData::Premises(premise_dataset(corpus, provider)?),
    })
}

fn cv_report_file(task: TaskKind) -> String {
    format!("cv_{task}.json")
}

fn model_files(task: TaskKind, models: &TaskModels) -> Vec<(String, String)> {
    match models {
        TaskModels::Single(m) => vec![(format!("{task}.json"), m.to_artifact_json())],
        TaskModels::Strategies(s) => s
            .iter()
            .map(|(label, m)| (format!("strategy_{label}.json"), m.to_artifact_json()))
            .collect(),
    }
}

fn train(args: TrainArgs) -> Result<()> {
    let corpus = load_corpus(&args.data.corpus)?;
    let seed = args.data.seed;
    let cfg = provider_config(&args.data)?;
    let provider = cfg.build()?;
    let specs = match &args.specs {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            let specs: Vec<ModelSpec> =
                serde_json::from_str(&text).with_context(|| format!("parsing specs {}", p.display()))?;
            specs
        }
        None => ModelSpec::all_defaults(seed),
    };

    fs::create_dir_all(&args.out).with_context(|| format!("creating {}", args.out.display()))?;
    fs::write(args.out.join("provider.json"), serde_json::to_string_pretty(&cfg)?)?;
    let mut reports: BTreeMap<String, CvReport> = BTreeMap::new();
    for task in args.data.task.tasks() {
        let data = task_data(task, &corpus, provider.as_ref(), seed)?;
        let (train_part, _) = split_task_data(&data, DEFAULT_TEST_FRACTION, seed)?;
        tracing::info!(%task, rows = train_part.len(), folds = args.folds, "cross-validating");
        let report = cross_validate(&train_part, &specs, args.folds, seed)?;
        let (_, models) = fit_final_and_test(&report.winner, &train_part, &train_part)?;
        for (name, body) in model_files(task, &models) {
            fs::write(args.out.join(&name), body).with_context(|| format!("writing {name}"))?;
        }
        fs::write(args.out.join(cv_report_file(task)), serde_json::to_string_pretty(&report)? + "\n")?;
        tracing::info!(%task, winner = %report.winner.label(), "artifacts written");
        reports.insert(task.to_string(), report);
    }
    if reports.len() == 1 {
        print_json(reports.values().next().expect("one report"))
    } else {
        print_json(&reports)
    }
}

fn table(report: &FinalReport) -> String {
    let mut out = format!(
        "{} | {} | train {} / test {} | weighted F1 {:.3}\n",
        report.task,
        report.spec.label(),
        report.train_size,
        report.test_size,
        report.weighted_f1
    );
    out.push_str(&format!(
        "{:<14} {:>6} {:>6} {:>6} {:>8}   {:>6} {:>6} {:>6}\n",
        "class", "P", "R", "F1", "support", "ref P", "ref R", "ref F1"
    ));
    for row in &report.per_class {
        let reference = report.reference.iter().find(|r| r.class == row.class);
        let r = |f: fn(&rhetor_core::pipeline::ReferenceRow) -> f64| {
            reference.map_or("-".to_string(), |x| format!("{:.2}", f(x)))
        };
        out.push_str(&format!(
            "{:<14} {:>6.2} {:>6.2} {:>6.2} {:>8}   {:>6} {:>6} {:>6}\n",
            row.class,
            row.precision,
            row.recall,
            row.f1,
            row.support,
            r(|x| x.precision),
            r(|x| x.recall),
            r(|x| x.f1)
        ));
    }
    out
}

fn evaluate(args: EvaluateArgs) -> Result<()> {
    let corpus = load_corpus(&args.data.corpus)?;
    let seed = args.data.seed;
    let provider = provider_config(&args.data)?.build()?;
    let mut reports = Vec::new();
    for task in args.data.task.tasks() {
        let path = args.models.join(cv_report_file(task));
        let cv: CvReport = serde_json::from_str(
            &fs::read_to_string(&path).with_context(|| format!("reading {} (run `train` first)", path.display()))?,
        )
        .with_context(|| format!("parsing {}", path.display()))?;
        let data = task_data(task, &corpus, provider.as_ref(), seed)?;
        let (train_part, test_part) = split_task_data(&data, DEFAULT_TEST_FRACTION, seed)?;
        let (report, _) = fit_final_and_test(&cv.winner, &train_part, &test_part)?;
        reports.push(report);
    }
    match args.format {
        Format::Json if reports.len() == 1 => print_json(&reports[0]),
        Format::Json => print_json(&reports),
        Format::Table => {
            let parts: Vec<String> = reports.iter().map(table).collect();
            print!("{}", parts.join("\n"));
            Ok(())
        }
    }
}

fn analyze(input: &Path, topic: &str, models: &Path, corpus: Option<&Path>) -> Result<()> {
    let body = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let bundle = ModelBundle::load(models)?;
    let analyzer = Analyzer::new(bundle)?;
    let mut result = analyzer.analyze(&body)?;
    if let Some(path) = corpus {
        let corpus = load_corpus(path)?;
        let posts: Vec<_> = corpus.posts.iter().filter(|p| p.topic == topic).collect();
        if posts.is_empty() {
            bail!("no examples for topic {topic:?} in {}", path.display());
        }
        let ranked = rank_examples_by_delta(posts.iter().copied());
        let ratios: Vec<_> = ranked
            .iter()
            .filter_map(|id| corpus.post(id))
            .filter_map(|p| build_portfolio(&p.annotations).ok())
            .map(|p| p.ratios())
            .collect();
        if !ratios.is_empty() {
            let (_, mds) = mds_project(&ratios);
            let d: Vec<f64> = ratios.iter().map(|r| r.distance(&result.portfolio.ratios)).collect();
            result.projection = Some(mds.place(&d));
        }
    }
    print_json(&result)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest { corpus, out } => {
            let c = load_corpus(&corpus)?;
            let report = validate_corpus(&c);
            eprintln!("{} posts, {} violations", c.len(), report.violations.len());
            if let Some(out) = out {
                let f = fs::File::create(&out).with_context(|| format!("creating {}", out.display()))?;
                write_corpus(&c, std::io::BufWriter::new(f))?;
            }
            #[derive(Serialize)]
            struct Ingest<'a> {
                stats: rhetor_core::corpus::LabelStats,
                violations: &'a [rhetor_core::corpus::Violation],
            }
            print_json(&Ingest {
                stats: corpus_stats(&c),
                violations: &report.violations,
            })?;
            if !report.violations.is_empty() {
                bail!("corpus has {} violations", report.violations.len());
            }
            Ok(())
        }
        Command::Validate { corpus } => report_validation(&load_corpus(&corpus)?),
        Command::Stats { corpus } => print_json(&corpus_stats(&load_corpus(&corpus)?)),
        Command::Train(args) => train(args),
        Command::Evaluate(args) => evaluate(args),
        Command::Serve { corpus, models, port, log } => {
            let rt = tokio::runtime::Runtime::new()?;
            rt.block_on(rhetor_service::serve(ServiceConfig { corpus, models, port, log }))?;
            Ok(())
        }
        Command::Analyze { input, topic, models, corpus } => analyze(&input, &topic, &models, corpus.as_deref()),
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_ansi(std::io::IsTerminal::is_terminal(&std::io::stderr()))
        .with_env_filter(
            tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()),
        )
        .init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
