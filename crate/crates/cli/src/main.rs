// SPDX-License-Identifier: Apache-2.0

//! `linkrec`: recover issue-commit links from the command line.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use linkrec::config::SEED_ENV;
use linkrec::corpus::write_corpus_dir;
use linkrec::hybrid::train_hybrid_with;
use linkrec::linkgen::{candidate_pool, read_candidates, write_candidates};
use linkrec::tabular::drop_redundant_columns;
use linkrec::{
    balance, cross_validate, load_corpus, load_corpus_dir, synthesize_corpus, Config, EnsembleKind, HybridModel,
    LinkCandidate, SignalParams, TuneOn,
};

#[derive(Parser, Debug)]
#[command(name = "linkrec", version, about = "Issue-commit link recovery")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// JSON configuration; flags override its fields.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Sets every seed; overrides the config file and `HYBRID_LINKER_SEED`.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// False-link window in days.
    #[arg(long, global = true, conflicts_with = "no_window")]
    window_days: Option<u32>,

    /// Disables the false-link window.
    #[arg(long, global = true)]
    no_window: bool,

    #[arg(long, global = true)]
    threshold: Option<f64>,

    /// One of rf+gb, gb+xgb, rf+xgb, rf+gb+xgb.
    #[arg(long, global = true)]
    ensemble: Option<EnsembleKind>,

    #[arg(long, global = true)]
    no_gap_features: bool,

    /// Status/type reduction table (`raw<TAB>class` per line).
    #[arg(long, global = true)]
    category_map: Option<PathBuf>,

    /// Stopword list, one word per line.
    #[arg(long, global = true)]
    stopwords: Option<PathBuf>,

    #[arg(long, global = true)]
    max_features: Option<usize>,

    #[arg(long, global = true)]
    alpha_steps: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Validate an issues file and a commits file and write a corpus directory.
    Ingest {
        #[arg(long)]
        issues: PathBuf,
        #[arg(long)]
        commits: PathBuf,
        #[arg(long)]
        project: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write a synthetic corpus directory.
    Synth {
        #[arg(long = "issues", default_value_t = 200)]
        n_issues: usize,
        #[arg(long = "commits", default_value_t = 200)]
        n_commits: usize,
        #[arg(long, default_value_t = 1.0)]
        lexical: f64,
        #[arg(long, default_value_t = 1.0)]
        temporal: f64,
        #[arg(long, default_value_t = 1.0)]
        density: f64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate true links and windowed false links.
    GenLinks {
        #[arg(long)]
        corpus: PathBuf,
        /// Keep every true link and an equal seeded sample of false links.
        #[arg(long)]
        balance: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Train both channels and tune the fusion weight.
    Train {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cross-validate and write a JSON report.
    Evaluate {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        candidates: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Also report each channel alone.
        #[arg(long)]
        ablation: bool,
        #[arg(long)]
        stratified: bool,
        /// `validation` or `test`.
        #[arg(long)]
        tune_on: Option<TuneOn>,
        #[arg(long)]
        folds: Option<usize>,
    },
    /// Score one issue-commit pair.
    Predict {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        issue: String,
        #[arg(long)]
        commit: String,
        /// Defaults to the corpus the model was trained on.
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
    /// Score every pair in a file (`issue<TAB>commit[<TAB>...]` per line).
    PredictBatch {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        corpus: Option<PathBuf>,
    },
}

/// Overlays `overlay` onto `base`, recursing into objects present in both.
fn merge(base: &mut Value, overlay: Value) {
    match (base, overlay) {
        (Value::Object(base), Value::Object(overlay)) => {
            for (key, value) in overlay {
                match base.get_mut(&key) {
                    Some(slot) => merge(slot, value),
                    None => {
                        base.insert(key, value);
                    }
                }
            }
        }
        (slot, value) => *slot = value,
    }
}

fn effective_config(g: &Global) -> Result<Config> {
    let mut config = Config::default();
    if let Ok(raw) = std::env::var(SEED_ENV) {
        let seed: u64 = raw
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}=`{raw}` is not a seed"))?;
        config = config.with_seed(seed);
    }
    if let Some(path) = &g.config {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let file: Value = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
        if !file.is_object() {
            bail!("{}: configuration must be a JSON object", path.display());
        }
        let mut base = serde_json::to_value(&config)?;
        merge(&mut base, file);
        config = serde_json::from_value(base).with_context(|| format!("config {}", path.display()))?;
    }
    if let Some(seed) = g.seed {
        config = config.with_seed(seed);
    }
    if let Some(d) = g.window_days {
        config.window_days = Some(d);
    }
    if g.no_window {
        config.window_days = None;
    }
    if let Some(t) = g.threshold {
        config.threshold = t;
    }
    if let Some(kind) = g.ensemble {
        if kind != config.ensemble {
            config.ensemble = kind;
            config.members.clear();
        }
    }
    if g.no_gap_features {
        config.gap_features = false;
    }
    if let Some(p) = &g.category_map {
        config.category_map = Some(p.clone());
    }
    if let Some(p) = &g.stopwords {
        config.stopwords = Some(p.clone());
    }
    if let Some(m) = g.max_features {
        config.max_features = m;
    }
    if let Some(s) = g.alpha_steps {
        config.alpha_steps = s;
    }
    Ok(config)
}

fn echo(config: &Config) {
    let seeds = config.seeds();
    eprintln!("config: {}", serde_json::to_string(config).expect("config serializes"));
    eprintln!(
        "seeds: balance={} fold={} split={} textual={} members={:?}",
        seeds.balance, seeds.fold, seeds.split, seeds.textual, seeds.members
    );
}

fn read_pairs(path: &Path) -> Result<Vec<LinkCandidate>> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut out = Vec::new();
    for (n, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        match (fields.next(), fields.next()) {
            (Some(i), Some(c)) if !i.is_empty() && !c.is_empty() => {
                out.push(LinkCandidate::generated_false(i, c));
            }
            _ => bail!("{}:{}: expected `issue<TAB>commit`", path.display(), n + 1),
        }
    }
    Ok(out)
}

fn model_corpus(model: &HybridModel, corpus: Option<&PathBuf>) -> Result<linkrec::Corpus> {
    let dir = match (corpus, &model.corpus_path) {
        (Some(p), _) => p.clone(),
        (None, Some(p)) => p.clone(),
        (None, None) => bail!("model records no corpus; pass --corpus"),
    };
    Ok(load_corpus_dir(&dir)?)
}

fn run(cli: Cli) -> Result<()> {
    let mut config = effective_config(&cli.global)?;
    if let Command::Evaluate {
        stratified,
        tune_on,
        folds,
        ..
    } = &cli.command
    {
        config.stratified |= *stratified;
        if let Some(t) = tune_on {
            config.tune_on = *t;
        }
        if let Some(k) = folds {
            config.folds = *k;
        }
    }
    config.validate()?;
    echo(&config);

    if let Some(jobs) = cli.global.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs.max(1))
            .build_global()
            .context("configuring worker pool")?;
    }

    match cli.command {
        Command::Ingest {
            issues,
            commits,
            project,
            out,
        } => {
            let corpus = load_corpus(&issues, &commits, project.as_deref())?;
            let columns = drop_redundant_columns(&corpus, config.redundancy_threshold);
            write_corpus_dir(&corpus, &out)?;
            println!(
                "project={} issues={} commits={} links={} reporter_creator_rate={:.4} drop_reporter={}",
                corpus.project(),
                corpus.issues().len(),
                corpus.commits().len(),
                corpus.n_links(),
                columns.reporter_creator_rate,
                columns.drop_reporter
            );
        }
        Command::Synth {
            n_issues,
            n_commits,
            lexical,
            temporal,
            density,
            out,
        } => {
            let signal = SignalParams {
                lexical,
                temporal,
                density,
            };
            let corpus = synthesize_corpus(config.balance_seed, n_issues, n_commits, signal)?;
            write_corpus_dir(&corpus, &out)?;
            println!(
                "project={} issues={} commits={} links={}",
                corpus.project(),
                corpus.issues().len(),
                corpus.commits().len(),
                corpus.n_links()
            );
        }
        Command::GenLinks {
            corpus,
            balance: keep_balanced,
            out,
        } => {
            let corpus = load_corpus_dir(&corpus)?;
            let pool = candidate_pool(&corpus, config.window());
            if keep_balanced {
                let b = balance(&pool, config.balance_seed)?;
                write_candidates(&out, &b.candidates)?;
                println!("true={} false={} deficit={}", b.n_true, b.n_false, b.deficit);
            } else {
                write_candidates(&out, &pool)?;
                let n_true = pool.iter().filter(|c| c.label).count();
                println!("true={} false={} deficit=0", n_true, pool.len() - n_true);
            }
        }
        Command::Train {
            corpus: dir,
            candidates,
            out,
        } => {
            let corpus = load_corpus_dir(&dir)?;
            let cands = read_candidates(&candidates)?;
            let resources = config.load_resources()?;
            let mut model = train_hybrid_with(&cands, &corpus, &config, &resources)?;
            model.corpus_path = Some(
                dir.canonicalize()
                    .with_context(|| format!("resolving {}", dir.display()))?,
            );
            model.save(&out)?;
            println!(
                "alpha={} validation_f1={:.4} threshold={}",
                model.alpha, model.validation_f1, model.threshold
            );
        }
        Command::Evaluate {
            corpus,
            candidates,
            out,
            ablation,
            ..
        } => {
            let corpus = load_corpus_dir(&corpus)?;
            let cands = read_candidates(&candidates)?;
            let report = cross_validate(&cands, &corpus, &config, ablation)?;
            std::fs::write(&out, report.to_json()).with_context(|| format!("writing {}", out.display()))?;
            println!(
                "mean_f1={:.4} std={:.4} alphas={:?}",
                report.mean_f1, report.hybrid.f1.std, report.alphas
            );
        }
        Command::Predict {
            model,
            issue,
            commit,
            corpus,
        } => {
            let model = HybridModel::load(&model)?;
            let corpus = model_corpus(&model, corpus.as_ref())?;
            let p = model.predict(&issue, &commit, &corpus)?;
            println!("{issue} {commit} {:.6} {}", p.p_f, u8::from(p.label));
        }
        Command::PredictBatch {
            model,
            pairs,
            out,
            corpus,
        } => {
            let model = HybridModel::load(&model)?;
            let corpus = model_corpus(&model, corpus.as_ref())?;
            let pairs = read_pairs(&pairs)?;
            let predictions = model.predict_all(&pairs, &corpus)?;
            let file = File::create(&out).with_context(|| format!("creating {}", out.display()))?;
            let mut w = BufWriter::new(file);
            writeln!(w, "issue_id\tcommit_hash\tp_nt\tp_t\tp_f\tlabel")?;
            for (pair, p) in pairs.iter().zip(&predictions) {
                writeln!(
                    w,
                    "{}\t{}\t{:.6}\t{:.6}\t{:.6}\t{}",
                    pair.issue_id,
                    pair.commit_hash,
                    p.p_nt,
                    p.p_t,
                    p.p_f,
                    u8::from(p.label)
                )?;
            }
            w.flush()?;
            println!(
                "pairs={} linked={}",
                predictions.len(),
                predictions.iter().filter(|p| p.label).count()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let mut message = e.to_string();
            for cause in e.chain().skip(1) {
                let cause = cause.to_string();
                if !message.contains(&cause) {
                    message = format!("{message}: {cause}");
                }
            }
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
