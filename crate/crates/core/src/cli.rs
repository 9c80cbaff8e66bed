//! Command-line front end: `debias`, `eval` and `compare`.
//!
//! All randomness comes from `--seed`, split into fixed sub-seeds:
//! clustering uses `seed`, classification `seed + 1`, and the i-th WEAT spec
//! `seed + 2 + i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fs::File;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::bias::{
    gbwr_classification, gbwr_clustering, gbwr_correlation, mean_abs_projection_bias, parse_sembias,
    parse_weat_spec, profession_neighbor_counts, select_biased_words_with, sembias_eval, weat_test,
    BiasedWordLists, ClassificationSplit, ProjectionMode, RelationOptions, SemBiasInstance,
    DEFAULT_BIASED_WORDS, DEFAULT_NEIGHBORS,
};
use crate::debias::{debias, HsrConfig, Method, DEFAULT_ALPHA};
use crate::embedding::{load_embeddings, partition, read_word_list, save_embeddings, EmbeddingSet};
use crate::error::{Error, Result};
use crate::quality::{parse_sentence_pairs, parse_word_pairs, sts_eval, word_similarity_eval, yearly_average};
use crate::report::{self, file_digest, write_atomic, BiasReport, MetricValue, SIGNIFICANCE_LEVEL};

pub const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "hsr-debias", version, about = "Debias word embeddings and measure gender bias")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// Write a debiased copy of an embedding file plus a metadata sidecar.
    Debias(DebiasArgs),
    /// Compute bias and quality metrics and write a JSON report.
    Eval(EvalArgs),
    /// Merge several reports into one TSV table.
    Compare(CompareArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Hsr,
    Hard,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Hsr => Method::Hsr,
            MethodArg::Hard => Method::Hard,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum MetricGroup {
    Direction,
    Relation,
    Quality,
}

fn parse_alpha(s: &str) -> std::result::Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if !(v.is_finite() && v >= 0.0) {
        return Err(format!("alpha must be a finite number >= 0, got {s}"));
    }
    Ok(v)
}

#[derive(Debug, Args)]
pub struct DebiasArgs {
    #[arg(long)]
    pub embeddings: PathBuf,
    #[arg(long)]
    pub gender_list: PathBuf,
    #[arg(long, value_enum, default_value = "hsr")]
    pub method: MethodArg,
    #[arg(long, default_value_t = DEFAULT_ALPHA, value_parser = parse_alpha, allow_negative_numbers = true)]
    pub alpha: f64,
    #[arg(long)]
    pub out: PathBuf,
    /// Keep only the first N words of the embedding file.
    #[arg(long)]
    pub vocab_cap: Option<usize>,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Embedding to evaluate.
    #[arg(long)]
    pub embeddings: PathBuf,
    /// Embedding the biased-word lists and original bias come from; defaults
    /// to `--embeddings`.
    #[arg(long)]
    pub original: Option<PathBuf>,
    #[arg(long)]
    pub gender_list: Option<PathBuf>,
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    pub metrics: Vec<MetricGroup>,
    /// Label for the report; defaults to the method in the embedding's sidecar, or "none".
    #[arg(long)]
    pub method: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Where to write per-profession neighbor counts; defaults to `<out>.professions.tsv`.
    #[arg(long)]
    pub profession_counts: Option<PathBuf>,
    /// Use cosine with `he − she` instead of the dot product.
    #[arg(long)]
    pub normalized_projection: bool,
    #[arg(long)]
    pub vocab_cap: Option<usize>,
    #[arg(long)]
    pub sembias: Option<PathBuf>,
    #[arg(long)]
    pub professions: Option<PathBuf>,
    /// WEAT spec file; repeat for several tests.
    #[arg(long)]
    pub weat: Vec<PathBuf>,
    /// Word-similarity dataset; repeat for several.
    #[arg(long)]
    pub word_sim: Vec<PathBuf>,
    /// Sentence-similarity dataset; repeat for several.
    #[arg(long)]
    pub sts: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BIASED_WORDS)]
    pub biased_words: usize,
    #[arg(long, default_value_t = DEFAULT_NEIGHBORS)]
    pub neighbors: usize,
    #[arg(long, default_value_t = 2500)]
    pub classification_words: usize,
    #[arg(long, default_value_t = 500)]
    pub classification_train: usize,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Report files; columns follow this order.
    #[arg(required = true, num_args = 2..)]
    pub reports: Vec<PathBuf>,
    /// Output TSV; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Sidecar written next to a debiased embedding file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DebiasMetadata {
    pub method: Method,
    pub alpha: f64,
    pub gender_norm: f64,
    pub definition_words: usize,
    pub missing_definition_words: usize,
    pub input_digest: String,
    pub gender_list_digest: String,
    pub vocab_cap: Option<usize>,
}

pub fn sidecar_path(embeddings: &Path) -> PathBuf {
    let mut name = embeddings.as_os_str().to_owned();
    name.push(".meta.json");
    PathBuf::from(name)
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_set(path: &Path, cap: Option<usize>) -> Result<EmbeddingSet> {
    let set = load_embeddings(open(path)?).map_err(|e| match e {
        Error::Parse { line, message } => Error::Parse {
            line,
            message: format!("{}: {message}", path.display()),
        },
        other => other,
    })?;
    Ok(match cap {
        Some(c) => set.truncated(c),
        None => set,
    })
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn cmd_debias(args: &DebiasArgs) -> Result<DebiasMetadata> {
    let set = load_set(&args.embeddings, args.vocab_cap)?;
    let gender_list = read_word_list(open(&args.gender_list)?)?;
    let config = HsrConfig::new(gender_list).with_alpha(args.alpha);
    let result = debias(&set, &config, args.method.into())?;

    let meta = DebiasMetadata {
        method: result.method,
        alpha: args.alpha,
        gender_norm: result.gender_norm,
        definition_words: result.partition.definition_indices.len(),
        missing_definition_words: result.partition.missing,
        input_digest: file_digest(&args.embeddings)?,
        gender_list_digest: file_digest(&args.gender_list)?,
        vocab_cap: args.vocab_cap,
    };
    write_atomic(&args.out, |w| save_embeddings(&result.embeddings, w))?;
    let sidecar = sidecar_path(&args.out);
    let written = write_atomic(&sidecar, |w| {
        serde_json::to_writer_pretty(&mut *w, &meta)?;
        Ok(w.write_all(b"\n")?)
    });
    if let Err(e) = written {
        let _ = std::fs::remove_file(&args.out);
        return Err(e);
    }
    Ok(meta)
}

/// Records `outcome` under `name`, or the error that prevented it.
fn record<T>(report: &mut BiasReport, name: &str, outcome: Result<T>, mut store: impl FnMut(&mut BiasReport, T) -> Result<()>) {
    if let Err(e) = outcome.and_then(|v| store(report, v)) {
        report.record_error(name, e);
    }
}

pub fn cmd_eval(args: &EvalArgs) -> Result<BiasReport> {
    let mut inputs: Vec<(&str, &Path)> = vec![("embeddings", &args.embeddings)];
    if let Some(p) = &args.original {
        inputs.push(("original", p));
    }
    if let Some(p) = &args.gender_list {
        inputs.push(("gender_list", p));
    }
    if let Some(p) = &args.sembias {
        inputs.push(("sembias", p));
    }
    if let Some(p) = &args.professions {
        inputs.push(("professions", p));
    }
    let weat_keys: Vec<String> = args.weat.iter().map(|p| format!("weat:{}", stem(p))).collect();
    let wordsim_keys: Vec<String> = args.word_sim.iter().map(|p| format!("wordsim:{}", stem(p))).collect();
    let sts_keys: Vec<String> = args.sts.iter().map(|p| format!("sts:{}", stem(p))).collect();
    for (k, p) in weat_keys.iter().zip(&args.weat) {
        inputs.push((k, p));
    }
    for (k, p) in wordsim_keys.iter().zip(&args.word_sim) {
        inputs.push((k, p));
    }
    for (k, p) in sts_keys.iter().zip(&args.sts) {
        inputs.push((k, p));
    }
    for (_, p) in &inputs {
        if !p.is_file() {
            return Err(Error::Config(format!("input file {} does not exist", p.display())));
        }
    }
    let groups: BTreeSet<MetricGroup> = args.metrics.iter().copied().collect();
    let needs_lists = groups.contains(&MetricGroup::Direction) || groups.contains(&MetricGroup::Relation);
    if needs_lists && args.gender_list.is_none() {
        return Err(Error::Config("direction and relation metrics need --gender-list".into()));
    }

    let set = load_set(&args.embeddings, args.vocab_cap)?;
    let original = match &args.original {
        Some(p) => load_set(p, args.vocab_cap)?,
        None => set.clone(),
    };
    let sidecar: Option<DebiasMetadata> = std::fs::read_to_string(sidecar_path(&args.embeddings))
        .ok()
        .and_then(|s| serde_json::from_str(&s).ok());
    let mode = if args.normalized_projection {
        ProjectionMode::Normalized
    } else {
        ProjectionMode::Raw
    };

    let label = args
        .method
        .clone()
        .or_else(|| sidecar.as_ref().map(|m| m.method.to_string()))
        .unwrap_or_else(|| Method::None.to_string());
    let mut report = BiasReport::new(label);
    {
        let p = &mut report.provenance;
        for (key, path) in &inputs {
            p.insert(format!("digest:{key}"), file_digest(path)?);
        }
        if args.original.is_none() {
            p.insert("digest:original".into(), p["digest:embeddings"].clone());
        }
        if let Some(meta) = &sidecar {
            p.insert("alpha".into(), meta.alpha.to_string());
            p.insert("gender_norm".into(), meta.gender_norm.to_string());
        }
        p.insert("metric_groups".into(), groups.iter().map(|g| format!("{g:?}").to_lowercase()).collect::<Vec<_>>().join(","));
        p.insert("seed".into(), args.seed.to_string());
        p.insert("projection".into(), format!("{mode:?}").to_lowercase());
        p.insert("vocab_cap".into(), args.vocab_cap.map_or("none".into(), |c| c.to_string()));
        p.insert("biased_words_per_gender".into(), args.biased_words.to_string());
        p.insert("neighbors".into(), args.neighbors.to_string());
        p.insert("kmeans".into(), "k-means++ init, 10 restarts, 300 iterations, tol 1e-6".into());
        p.insert(
            "classifier".into(),
            format!(
                "linear hinge-loss SGD, lambda 1e-4, 200 epochs; {} per gender, top {} per gender for training",
                args.classification_words, args.classification_train
            ),
        );
        p.insert("hard_debias_variant".into(), "single direction he-she".into());
        p.insert("sentence_lowercase".into(), "true".into());
    }

    let lists: Option<Result<(crate::embedding::WordPartition, BiasedWordLists)>> = needs_lists.then(|| {
        let gender_list = read_word_list(open(args.gender_list.as_ref().expect("checked above"))?)?;
        let part = partition(&original, &gender_list)?;
        let lists = select_biased_words_with(&original, &part, args.biased_words, mode)?
            .with_source(report.provenance["digest:original"].clone());
        Ok((part, lists))
    });
    let lists = lists.map(|r| r.map_err(|e| e.to_string()));
    let lists_or = |name: &str, report: &mut BiasReport| -> Option<(crate::embedding::WordPartition, BiasedWordLists)> {
        match &lists {
            Some(Ok(l)) => Some(l.clone()),
            Some(Err(e)) => {
                report.record_error(name, format!("biased-word selection failed: {e}"));
                None
            }
            None => None,
        }
    };

    if groups.contains(&MetricGroup::Direction) {
        if let Some((_, l)) = lists_or(report::PROJECTION_BIAS, &mut report) {
            record(&mut report, report::PROJECTION_BIAS, mean_abs_projection_bias(&set, &l, mode), |r, o| {
                r.counts.insert("projection_bias_used".into(), o.used as u64);
                r.counts.insert("projection_bias_skipped".into(), o.skipped as u64);
                r.insert_scalar(report::PROJECTION_BIAS, o.value)
            });
        }
        if let Some(path) = &args.sembias {
            let instances: Result<Vec<SemBiasInstance>> = open(path).and_then(parse_sembias);
            match instances {
                Ok(instances) => {
                    record(&mut report, report::SEMBIAS_ACC, sembias_eval(&set, &instances), |r, o| {
                        r.counts.insert("sembias_used".into(), o.used as u64);
                        r.counts.insert("sembias_skipped".into(), o.skipped as u64);
                        r.insert_scalar(report::SEMBIAS_ACC, o.accuracy)
                    });
                    let subset: Vec<SemBiasInstance> = instances.into_iter().filter(|i| i.subset).collect();
                    if !subset.is_empty() {
                        record(&mut report, report::SEMBIAS_SUBSET_ACC, sembias_eval(&set, &subset), |r, o| {
                            r.counts.insert("sembias_subset_used".into(), o.used as u64);
                            r.insert_scalar(report::SEMBIAS_SUBSET_ACC, o.accuracy)
                        });
                    }
                }
                Err(e) => report.record_error(report::SEMBIAS_ACC, e),
            }
        }
    }

    if groups.contains(&MetricGroup::Relation) {
        let options = RelationOptions {
            neighbors: args.neighbors,
            projection: mode,
        };
        if let Some((_, l)) = lists_or(report::GBWR_PURITY, &mut report) {
            record(&mut report, report::GBWR_PURITY, gbwr_clustering(&set, &l, args.seed), |r, v| {
                r.insert_scalar(report::GBWR_PURITY, v)
            });
        }
        if let Some((_, l)) = lists_or(report::GBWR_CORRELATION, &mut report) {
            record(&mut report, report::GBWR_CORRELATION, gbwr_correlation(&set, &l, &original, &options), |r, v| {
                r.insert_scalar(report::GBWR_CORRELATION, v)
            });
        }
        if let Some(path) = &args.professions {
            if let Some((_, l)) = lists_or(report::GBWR_PROFESSION, &mut report) {
                let counts = open(path)
                    .and_then(read_word_list)
                    .and_then(|prof| profession_neighbor_counts(&set, &prof, &l, &original, &options));
                match counts {
                    Ok(counts) => {
                        let tsv_path = args.profession_counts.clone().unwrap_or_else(|| {
                            let mut n = args.out.as_os_str().to_owned();
                            n.push(".professions.tsv");
                            PathBuf::from(n)
                        });
                        write_atomic(&tsv_path, |w| Ok(w.write_all(counts.to_tsv().as_bytes())?))?;
                        report.counts.insert("gbwr_profession_used".into(), counts.counts.len() as u64);
                        report.counts.insert("gbwr_profession_skipped".into(), counts.skipped as u64);
                        record(&mut report, report::GBWR_PROFESSION, counts.correlation(), |r, v| {
                            r.insert_scalar(report::GBWR_PROFESSION, v)
                        });
                    }
                    Err(e) => report.record_error(report::GBWR_PROFESSION, e),
                }
            }
        }
        if !args.weat.is_empty() {
            let mut pvalues = Vec::new();
            let mut failed = Vec::new();
            for (i, path) in args.weat.iter().enumerate() {
                let outcome = open(path)
                    .and_then(|r| parse_weat_spec(r, &stem(path)))
                    .and_then(|spec| weat_test(&set, &spec, args.seed.wrapping_add(2 + i as u64)));
                match outcome {
                    Ok(o) => pvalues.push(o.p_value),
                    Err(e) => failed.push(format!("{}: {e}", path.display())),
                }
            }
            if failed.is_empty() {
                let significant = pvalues.iter().filter(|&&p| p < SIGNIFICANCE_LEVEL).count();
                record(&mut report, report::WEAT_PVALUES, Ok(pvalues), |r, v| {
                    r.insert(report::WEAT_PVALUES, MetricValue::List(v))
                });
                record(&mut report, report::GBWR_ASSOCIATION_SIGNIFICANT, Ok(significant), |r, v| {
                    r.insert_scalar(report::GBWR_ASSOCIATION_SIGNIFICANT, v as f64)
                });
            } else {
                report.record_error(report::WEAT_PVALUES, failed.join("; "));
            }
        }
        if let Some((part, _)) = lists_or(report::GBWR_CLASSIFICATION_ACC, &mut report) {
            let split = ClassificationSplit {
                per_gender: args.classification_words,
                train_per_gender: args.classification_train,
            };
            record(
                &mut report,
                report::GBWR_CLASSIFICATION_ACC,
                gbwr_classification(&set, &part, &original, args.seed.wrapping_add(1), &split),
                |r, o| {
                    r.counts.insert("gbwr_classification_train".into(), o.train as u64);
                    r.counts.insert("gbwr_classification_test".into(), o.test as u64);
                    r.insert_scalar(report::GBWR_CLASSIFICATION_ACC, o.accuracy)
                },
            );
        }
    }

    if groups.contains(&MetricGroup::Quality) {
        for (key, path) in wordsim_keys.iter().zip(&args.word_sim) {
            let outcome = open(path)
                .and_then(|r| parse_word_pairs(r, &stem(path)))
                .and_then(|d| word_similarity_eval(&set, &d));
            record(&mut report, key, outcome, |r, o| {
                r.counts.insert(format!("{key}:used"), o.used as u64);
                r.counts.insert(format!("{key}:skipped"), o.skipped as u64);
                r.insert_scalar(key, o.spearman)
            });
        }
        let mut sts_scores = Vec::new();
        for (key, path) in sts_keys.iter().zip(&args.sts) {
            let outcome = open(path)
                .and_then(|r| parse_sentence_pairs(r, &stem(path), true))
                .and_then(|d| sts_eval(&set, &d));
            if let Ok(o) = &outcome {
                sts_scores.push((stem(path), o.pearson_x100));
            }
            record(&mut report, key, outcome, |r, o| {
                r.counts.insert(format!("{key}:used"), o.used as u64);
                r.counts.insert(format!("{key}:skipped"), o.skipped as u64);
                r.insert_scalar(key, o.pearson_x100)
            });
        }
        if !sts_scores.is_empty() {
            match yearly_average(&sts_scores) {
                Ok(years) => {
                    for (year, v) in years {
                        let key = format!("sts_year:{year}");
                        record(&mut report, &key, Ok(v), |r, v| r.insert_scalar(&key, v));
                    }
                }
                Err(e) => report.record_error("sts_year", e),
            }
        }
    }

    write_atomic(&args.out, |w| Ok(w.write_all(report.to_json()?.as_bytes())?))?;
    Ok(report)
}

/// Merges reports into a TSV with one row per metric and one column per report.
pub fn compare_reports(reports: &[BiasReport]) -> (String, Vec<String>) {
    let mut warnings = Vec::new();
    let all: BTreeSet<&String> = reports.iter().flat_map(|r| r.metrics.keys()).collect();
    for (i, r) in reports.iter().enumerate() {
        let missing = all.iter().filter(|m| !r.metrics.contains_key(**m)).count();
        if missing > 0 {
            warnings.push(format!(
                "report {} ({}) lacks {missing} of {} metrics; leaving blanks",
                i + 1,
                r.method,
                all.len()
            ));
        }
    }
    let mut seen: BTreeMap<&str, usize> = BTreeMap::new();
    let headers: Vec<String> = reports
        .iter()
        .map(|r| {
            let n = seen.entry(&r.method).or_insert(0);
            *n += 1;
            if *n == 1 {
                r.method.clone()
            } else {
                format!("{}#{n}", r.method)
            }
        })
        .collect();
    let mut out = String::from("metric");
    for h in &headers {
        out.push('\t');
        out.push_str(h);
    }
    out.push('\n');
    for m in all {
        out.push_str(m);
        for r in reports {
            out.push('\t');
            if let Some(v) = r.metrics.get(m) {
                out.push_str(&v.render());
            }
        }
        out.push('\n');
    }
    (out, warnings)
}

pub fn cmd_compare(args: &CompareArgs) -> Result<String> {
    let reports = args
        .reports
        .iter()
        .map(|p| {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", p.display()))))?;
            BiasReport::from_json(&text)
        })
        .collect::<Result<Vec<_>>>()?;
    let (table, warnings) = compare_reports(&reports);
    for w in warnings {
        eprintln!("warning: {w}");
    }
    match &args.out {
        Some(path) => write_atomic(path, |w| Ok(w.write_all(table.as_bytes())?))?,
        None => io::stdout().write_all(table.as_bytes())?,
    }
    Ok(table)
}

/// Runs a parsed command line. Exit status is 0 only if every requested
/// metric was computed.
pub fn run(cli: Cli) -> ExitCode {
    let outcome = match &cli.command {
        Command::Debias(args) => cmd_debias(args).map(|meta| {
            eprintln!(
                "{}: {} definition words ({} missing), gender norm {}",
                meta.method, meta.definition_words, meta.missing_definition_words, meta.gender_norm
            );
            true
        }),
        Command::Eval(args) => cmd_eval(args).map(|report| {
            for (metric, err) in &report.errors {
                eprintln!("error: {metric}: {err}");
            }
            report.errors.is_empty()
        }),
        Command::Compare(args) => cmd_compare(args).map(|_| true),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
