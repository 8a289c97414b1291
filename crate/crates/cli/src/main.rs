use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use topic_noise::coherence::{grid_search, write_grid_report};
use topic_noise::confusion::{load_pairs, ConfusionModel};
use topic_noise::corpus::{load_corpus, load_lexicon, preprocess, write_corpus, Dictionary, Episode, PipelineConfig};
use topic_noise::harness::{
    beta_wer_curve, decile_report, export_sweep, filter_pairs, run_sweep, wer_svg, write_deciles,
    write_filter_report, write_wer_curve, ExperimentKind, RunConfig,
};
use topic_noise::lda::{self, LdaModel};
use topic_noise::noise::{inject, NoiseSpec, NoiseStrategy};
use topic_noise::pipeline::TopicPipeline;

#[derive(Parser)]
#[command(name = "topic-noise", version, about = "Topic-model similarity under simulated ASR noise")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Overrides the seed of whatever the subcommand draws at random.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// JSON run configuration with `pipeline`, `train`, `sweep` and `grid` sections.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, created if missing.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// Worker threads; defaults to all cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Train a topic model and write a model directory.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        /// Which episode text becomes a training document.
        #[arg(long, value_enum, default_value_t = TextField::Transcript)]
        text: TextField,
    },
    /// Score a grid of model settings by U_mass coherence.
    Grid {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        lexicon: PathBuf,
        #[arg(long, value_enum, default_value_t = TextField::Transcript)]
        text: TextField,
    },
    /// Count reference/hypothesis substitutions into a confusion model.
    BuildConfusion {
        /// JSON lines of `{"ref": ..., "hyp": ...}`.
        #[arg(long)]
        pairs: PathBuf,
    },
    /// Write a noisy copy of a corpus.
    Inject {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        strategy: NoiseStrategy,
        #[arg(long)]
        beta: f64,
        #[arg(long)]
        confusion: Option<PathBuf>,
        /// Model directory whose dictionary supplies the uniform vocabulary.
        #[arg(long)]
        model: Option<PathBuf>,
    },
    /// Baseline description/transcript similarity and the retained episodes.
    Filter {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        threshold: Option<f64>,
    },
    /// Run the beta sweep for one experiment.
    Sweep {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        confusion: Option<PathBuf>,
        #[arg(long, value_enum)]
        experiment: Option<Experiment>,
        #[command(flatten)]
        grid: SweepOverrides,
        #[arg(long)]
        svg: bool,
    },
    /// Decile table of baseline similarity.
    Deciles {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: PathBuf,
    },
    /// Mean WER of injected transcripts per beta.
    WerCurve {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long)]
        confusion: Option<PathBuf>,
        #[command(flatten)]
        grid: SweepOverrides,
        #[arg(long)]
        svg: bool,
    },
}

#[derive(Args)]
struct SweepOverrides {
    /// Comma-separated beta values.
    #[arg(long, value_delimiter = ',')]
    betas: Option<Vec<f64>>,
    #[arg(long)]
    trials: Option<usize>,
    /// Comma-separated strategies.
    #[arg(long, value_delimiter = ',')]
    strategies: Option<Vec<NoiseStrategy>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextField {
    Transcript,
    Description,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Experiment {
    /// Extended description against the noisy transcript.
    Description,
    /// Raw transcript against its noisy copy.
    Raw,
}

/// Inference settings stored next to the model.
#[derive(Serialize, Deserialize)]
struct PipelineFile {
    pipeline: PipelineConfig,
    vb_iterations: usize,
    gamma_threshold: f64,
}

const MODEL_FILE: &str = "model.json";
const DICTIONARY_FILE: &str = "dictionary.json";
const PIPELINE_FILE: &str = "pipeline.json";
const LEXICON_FILE: &str = "lexicon.tsv";

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let common = cli.common;
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = common.seed {
        cfg.train.seed = seed;
        cfg.sweep.master_seed = seed;
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = common.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        pool = pool.num_threads(n);
    }
    let pool = pool.build().context("building thread pool")?;
    fs::create_dir_all(&common.out).with_context(|| format!("creating {}", common.out.display()))?;
    let out = common.out.as_path();
    pool.install(|| dispatch(cli.command, cfg, common.seed, out))
}

fn dispatch(command: Command, mut cfg: RunConfig, seed: Option<u64>, out: &Path) -> Result<()> {
    match command {
        Command::Train { corpus, lexicon, text } => {
            let episodes = load_corpus(&corpus)?;
            let lex = load_lexicon(&lexicon)?;
            let docs = training_docs(&episodes, text);
            let tokens: Vec<Vec<String>> = docs.iter().map(|d| preprocess(d, &lex, &cfg.pipeline)).collect();
            let dictionary = Dictionary::build(&tokens, &cfg.pipeline)?;
            let bows: Vec<_> = tokens.iter().map(|t| dictionary.vectorize(t)).collect();
            let model = lda::train(&bows, dictionary.len(), &cfg.train)?;
            model.save(out.join(MODEL_FILE))?;
            dictionary.save(out.join(DICTIONARY_FILE))?;
            let settings = PipelineFile {
                pipeline: cfg.pipeline.clone(),
                vb_iterations: cfg.train.vb_iterations,
                gamma_threshold: cfg.train.gamma_threshold,
            };
            write_json(&out.join(PIPELINE_FILE), &settings)?;
            fs::copy(&lexicon, out.join(LEXICON_FILE))
                .with_context(|| format!("copying {}", lexicon.display()))?;
            println!(
                "trained {} topics over {} terms from {} documents",
                model.num_topics(),
                dictionary.len(),
                bows.len()
            );
        }
        Command::Grid { corpus, lexicon, text } => {
            let episodes = load_corpus(&corpus)?;
            let lex = load_lexicon(&lexicon)?;
            let docs = training_docs(&episodes, text);
            let outcome = grid_search(&docs, &lex, &cfg.pipeline, &cfg.grid, &cfg.train)?;
            write_grid_report(&outcome, create(&out.join("grid_report.csv"))?)?;
            write_json(&out.join("grid_best.json"), &outcome.best)?;
            println!("best {}", outcome.best);
        }
        Command::BuildConfusion { pairs } => {
            let pairs = load_pairs(&pairs)?;
            let model = ConfusionModel::accumulate(&pairs);
            model.save(out.join("confusion.json"))?;
            println!("{} words from {} pairs", model.len(), model.total_pairs());
        }
        Command::Inject { corpus, strategy, beta, confusion, model } => {
            let spec = NoiseSpec {
                beta,
                strategy,
                seed: seed.unwrap_or(0),
            };
            spec.validate()?;
            let episodes = load_corpus(&corpus)?;
            let vocab = match &model {
                Some(dir) => load_pipeline(dir)?.dictionary.unigram_terms(),
                None => Vec::new(),
            };
            let confusion = confusion.map(ConfusionModel::load).transpose()?;
            let noisy: Vec<Episode> = episodes
                .iter()
                .map(|e| {
                    let tokens: Vec<&str> = e.transcript.split_whitespace().collect();
                    let mut rng = spec.rng_for(&e.id);
                    let transcript = inject(&tokens, &spec, &vocab, confusion.as_ref(), &mut rng)?.join(" ");
                    Ok(Episode {
                        transcript,
                        ..e.clone()
                    })
                })
                .collect::<topic_noise::Result<_>>()?;
            write_corpus(&noisy, create(&out.join("noisy_corpus.jsonl"))?)?;
        }
        Command::Filter { corpus, model, threshold } => {
            let episodes = load_corpus(&corpus)?;
            let pipeline = load_pipeline(&model)?;
            let threshold = threshold.unwrap_or(cfg.sweep.filter_threshold);
            let report = filter_pairs(&episodes, &pipeline, threshold)?;
            write_filter_report(&report, create(&out.join("filter_report.csv"))?)?;
            write_corpus(&report.retained, create(&out.join("retained_corpus.jsonl"))?)?;
            println!("retained {} of {}", report.retained.len(), episodes.len());
        }
        Command::Sweep { corpus, model, confusion, experiment, grid, svg } => {
            let episodes = load_corpus(&corpus)?;
            let pipeline = load_pipeline(&model)?;
            let confusion = confusion.map(ConfusionModel::load).transpose()?;
            if let Some(e) = experiment {
                cfg.sweep.experiment = match e {
                    Experiment::Description => ExperimentKind::DescriptionVsNoisyTranscript,
                    Experiment::Raw => ExperimentKind::RawVsNoisyTranscript,
                };
            }
            grid.apply(&mut cfg)?;
            let result = run_sweep(&episodes, &pipeline, confusion.as_ref(), &cfg.sweep)?;
            for path in export_sweep(&result, out, svg)? {
                println!("{}", path.display());
            }
        }
        Command::Deciles { corpus, model } => {
            let episodes = load_corpus(&corpus)?;
            let pipeline = load_pipeline(&model)?;
            let report = decile_report(&episodes, &pipeline)?;
            write_deciles(&report, create(&out.join("deciles.csv"))?)?;
        }
        Command::WerCurve { corpus, model, confusion, grid, svg } => {
            let episodes = load_corpus(&corpus)?;
            let vocab = match &model {
                Some(dir) => load_pipeline(dir)?.dictionary.unigram_terms(),
                None => Vec::new(),
            };
            let confusion = confusion.map(ConfusionModel::load).transpose()?;
            grid.apply(&mut cfg)?;
            let points = beta_wer_curve(&episodes, &vocab, confusion.as_ref(), &cfg.sweep)?;
            write_wer_curve(&points, create(&out.join("wer_curve.csv"))?)?;
            if svg {
                let path = out.join("wer_curve.svg");
                fs::write(&path, wer_svg(&points)).with_context(|| format!("writing {}", path.display()))?;
            }
        }
    }
    Ok(())
}

impl SweepOverrides {
    fn apply(self, cfg: &mut RunConfig) -> Result<()> {
        if let Some(b) = self.betas {
            cfg.sweep.beta_grid = b;
        }
        if let Some(t) = self.trials {
            cfg.sweep.trials = t;
        }
        if let Some(s) = self.strategies {
            cfg.sweep.strategies = s;
        }
        cfg.sweep.validate()?;
        Ok(())
    }
}

fn training_docs(episodes: &[Episode], field: TextField) -> Vec<String> {
    let mut docs = Vec::new();
    for e in episodes {
        match field {
            TextField::Transcript => docs.push(e.transcript.clone()),
            TextField::Description => docs.push(e.extended_description()),
            TextField::Both => {
                docs.push(e.transcript.clone());
                docs.push(e.extended_description());
            }
        }
    }
    docs
}

fn load_pipeline(dir: &Path) -> Result<TopicPipeline> {
    let settings: PipelineFile = {
        let path = dir.join(PIPELINE_FILE);
        let text = fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
        serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?
    };
    settings.pipeline.validate()?;
    let lexicon = load_lexicon(dir.join(LEXICON_FILE))?;
    let dictionary = Dictionary::load(dir.join(DICTIONARY_FILE))?;
    let model = LdaModel::load(dir.join(MODEL_FILE))?;
    Ok(TopicPipeline::new(
        lexicon,
        settings.pipeline,
        dictionary,
        model,
        settings.vb_iterations,
        settings.gamma_threshold,
    )?)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    fs::write(path, text + "\n").with_context(|| format!("writing {}", path.display()))
}
