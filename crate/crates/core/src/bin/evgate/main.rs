//! `evgate`: build an evidence index and run gated queries against it.

mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use evidence_gate::corpus::Corpus;
use evidence_gate::index::VectorIndex;
use evidence_gate::pipeline::{
    save_bundle, AnswerAssembler, ConfigOverrides, Engine, Extractive, HttpGenerator, PipelineConfig, SweepTable,
};
use evidence_gate::select::MueWeights;

#[derive(Parser)]
#[command(name = "evgate", version, about = "Evidence-gated question answering over a local corpus")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment documents, embed every unit and write an index bundle.
    Ingest {
        /// Directory of UTF-8 `.txt` files; each file is one document.
        #[arg(long)]
        docs: Option<PathBuf>,
        /// JSON Lines file of structured records; may be repeated.
        #[arg(long)]
        records: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        tune: Tunables,
    },
    /// Answer one question, or abstain.
    Query {
        #[arg(long)]
        index: PathBuf,
        #[arg(long = "q")]
        question: String,
        /// Print the trace as one JSON object.
        #[arg(long)]
        json: bool,
        /// POST admitted evidence to this URL and print its answer.
        #[arg(long)]
        generator: Option<String>,
        #[arg(long, default_value_t = 30_000)]
        generator_timeout_ms: u64,
        #[command(flatten)]
        tune: Tunables,
    },
    /// Show every stage for one question: candidates, signals, selection steps, gate.
    Explain {
        #[arg(long)]
        index: PathBuf,
        #[arg(long = "q", required_unless_present = "dump_idf")]
        question: Option<String>,
        /// Print the corpus term/df/idf table instead.
        #[arg(long)]
        dump_idf: bool,
        #[command(flatten)]
        tune: Tunables,
    },
    /// Run every question under every weight triple.
    Sweep {
        #[arg(long)]
        index: PathBuf,
        /// One question per line.
        #[arg(long)]
        questions: PathBuf,
        /// One `lambda,mu,nu` triple per line.
        #[arg(long)]
        grid: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
        #[command(flatten)]
        tune: Tunables,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Tsv,
    Json,
}

/// Configuration file plus per-key overrides.
#[derive(Args)]
struct Tunables {
    /// TOML file of configuration keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// MUE weights as `lambda,mu,nu`.
    #[arg(long)]
    weights: Option<String>,
    #[arg(long)]
    top_k: Option<usize>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    delta_dup: Option<f64>,
    #[arg(long)]
    cand_k: Option<usize>,
    #[arg(long)]
    k_min: Option<usize>,
    #[arg(long)]
    tau_rel: Option<f64>,
    #[arg(long)]
    tau_sim: Option<f64>,
    #[arg(long)]
    mean_rel_min: Option<f64>,
    #[arg(long)]
    mean_mue_min: Option<f64>,
    #[arg(long)]
    phrase_anchoring: Option<bool>,
    #[arg(long)]
    fuzzy: Option<bool>,
    #[arg(long)]
    fuzzy_threshold: Option<f64>,
    #[arg(long)]
    min_term_len: Option<usize>,
    /// `local_hash` or `remote`. Only used by `ingest`; queries use the
    /// provider recorded in the bundle.
    #[arg(long)]
    embedding: Option<String>,
    #[arg(long)]
    dimension: Option<usize>,
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    timeout_ms: Option<u64>,
    #[arg(long)]
    stopwords: Option<PathBuf>,
    #[arg(long)]
    scaffold: Option<PathBuf>,
    #[arg(long)]
    phrases: Option<PathBuf>,
    /// JSON field holding record text.
    #[arg(long)]
    text_field: Option<String>,
}

impl Tunables {
    fn resolve(&self) -> Result<PipelineConfig> {
        let mut config = match &self.config {
            Some(path) => PipelineConfig::load(path)?,
            None => PipelineConfig::default(),
        };
        let mut o = ConfigOverrides {
            top_k: self.top_k,
            gamma: self.gamma,
            delta_dup: self.delta_dup,
            cand_k: self.cand_k,
            k_min: self.k_min,
            tau_rel: self.tau_rel,
            tau_sim: self.tau_sim,
            mean_rel_min: self.mean_rel_min,
            mean_mue_min: self.mean_mue_min,
            phrase_anchoring: self.phrase_anchoring,
            fuzzy: self.fuzzy,
            fuzzy_threshold: self.fuzzy_threshold,
            min_term_len: self.min_term_len,
            embedding: self.embedding.clone(),
            dimension: self.dimension,
            endpoint: self.endpoint.clone(),
            timeout_ms: self.timeout_ms,
            stopwords: self.stopwords.clone(),
            scaffold: self.scaffold.clone(),
            phrases: self.phrases.clone(),
            text_field: self.text_field.clone(),
            ..ConfigOverrides::default()
        };
        if let Some(w) = &self.weights {
            o.set_weights(MueWeights::parse(w)?);
        }
        o.apply(&mut config)?;
        Ok(config)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest {
            docs,
            records,
            out,
            tune,
        } => ingest(docs.as_deref(), &records, &out, tune.resolve()?),
        Command::Query {
            index,
            question,
            json,
            generator,
            generator_timeout_ms,
            tune,
        } => {
            let engine = Engine::open(&index, tune.resolve()?)
                .with_context(|| format!("opening {}", index.display()))?;
            let assembler: Box<dyn AnswerAssembler> = match generator {
                Some(url) => Box::new(HttpGenerator::new(&url, Duration::from_millis(generator_timeout_ms))),
                None => Box::new(Extractive),
            };
            let outcome = engine.run_query_with(&question, assembler.as_ref())?;
            if json {
                println!("{}", outcome.to_json());
            } else {
                print!("{}", report::outcome(&outcome));
            }
            Ok(())
        }
        Command::Explain {
            index,
            question,
            dump_idf,
            tune,
        } => {
            let engine = Engine::open(&index, tune.resolve()?)
                .with_context(|| format!("opening {}", index.display()))?;
            if dump_idf {
                print!("{}", engine.stats().to_tsv());
            } else if let Some(q) = question {
                let explanation = engine.explain(&q)?;
                print!("{}", report::explanation(&engine, &explanation));
            }
            Ok(())
        }
        Command::Sweep {
            index,
            questions,
            grid,
            format,
            tune,
        } => {
            let engine = Engine::open(&index, tune.resolve()?)
                .with_context(|| format!("opening {}", index.display()))?;
            let questions = read_lines(&questions)?;
            let grid = read_lines(&grid)?
                .iter()
                .map(|l| MueWeights::parse(l))
                .collect::<Result<Vec<_>, _>>()?;
            let table = SweepTable::run(&engine, &questions, &grid);
            match format {
                Format::Tsv => print!("{}", table.to_tsv()),
                Format::Json => print!("{}", table.to_json()),
            }
            for s in table.stats() {
                let [l, m, n] = s.weights.as_array();
                eprintln!(
                    "weights {l:.2},{m:.2},{n:.2}: {} pass, {} fail, {} error",
                    s.passed, s.failed, s.errors
                );
            }
            Ok(())
        }
    }
}

fn ingest(docs: Option<&Path>, records: &[PathBuf], out: &Path, config: PipelineConfig) -> Result<()> {
    if docs.is_none() && records.is_empty() {
        bail!("nothing to ingest: pass --docs and/or --records");
    }
    let mut corpus = Corpus::new();
    if let Some(dir) = docs {
        let mut files: Vec<PathBuf> = fs::read_dir(dir)
            .with_context(|| format!("reading {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        for file in &files {
            corpus.ingest_text_file(file)?;
        }
    }
    for file in records {
        corpus.ingest_jsonl_file(file, &config.text_field)?;
    }
    let provider = config.provider.build()?;
    let index = VectorIndex::build(&corpus, provider.as_ref())?;
    let manifest = save_bundle(out, &corpus, &index, &config.provider)?;
    eprintln!(
        "indexed {} units from {} documents (dimension {}) into {}",
        manifest.units,
        corpus.documents().count(),
        manifest.dimension,
        out.display()
    );
    Ok(())
}

/// Non-blank lines that do not start with `#`.
fn read_lines(path: &Path) -> Result<Vec<String>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_owned)
        .collect())
}
