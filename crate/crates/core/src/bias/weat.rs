use std::io::BufRead;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::matrix::cosine_similarity;

/// Specs with at most this many equal-size re-partitions are enumerated exactly.
pub const EXACT_PARTITION_LIMIT: u64 = 100_000;

/// Random re-partitions drawn when exact enumeration is too large.
pub const WEAT_SAMPLES: usize = 10_000;

/// Two target sets and two attribute sets of an association test.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeatSpec {
    pub name: String,
    pub targets_x: Vec<String>,
    pub targets_y: Vec<String>,
    pub attributes_a: Vec<String>,
    pub attributes_b: Vec<String>,
}

impl WeatSpec {
    pub fn validate(&self) -> Result<()> {
        if self.targets_x.len() != self.targets_y.len() || self.targets_x.len() < 2 {
            return Err(Error::input(format!(
                "{}: target sets need equal sizes of at least 2, got {} and {}",
                self.name,
                self.targets_x.len(),
                self.targets_y.len()
            )));
        }
        if self.attributes_a.is_empty() || self.attributes_b.is_empty() {
            return Err(Error::input(format!("{}: attribute sets must be nonempty", self.name)));
        }
        Ok(())
    }

    /// The same test with the two target sets exchanged.
    pub fn swapped_targets(&self) -> Self {
        Self {
            targets_x: self.targets_y.clone(),
            targets_y: self.targets_x.clone(),
            ..self.clone()
        }
    }
}

/// Parses a spec file: `[targets_x]`, `[targets_y]`, `[attributes_a]` and
/// `[attributes_b]` section headers each followed by one token per line. An
/// optional `name: <label>` line before the first section names the test;
/// otherwise `default_name` is used. `#` starts a comment line.
pub fn parse_weat_spec<R: BufRead>(reader: R, default_name: &str) -> Result<WeatSpec> {
    let mut name = default_name.to_owned();
    let mut sections: [Option<Vec<String>>; 4] = Default::default();
    let mut current: Option<usize> = None;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if let Some(header) = t.strip_prefix('[').and_then(|h| h.strip_suffix(']')) {
            let slot = match header.trim() {
                "targets_x" => 0,
                "targets_y" => 1,
                "attributes_a" => 2,
                "attributes_b" => 3,
                other => return Err(Error::parse(lineno, format!("unknown section {other:?}"))),
            };
            if sections[slot].is_some() {
                return Err(Error::parse(lineno, format!("section {header:?} repeated")));
            }
            sections[slot] = Some(Vec::new());
            current = Some(slot);
            continue;
        }
        match current {
            Some(slot) => sections[slot].as_mut().expect("opened").push(t.to_owned()),
            None => match t.strip_prefix("name:") {
                Some(n) => name = n.trim().to_owned(),
                None => return Err(Error::parse(lineno, "token outside of a section")),
            },
        }
    }
    let [x, y, a, b] = sections;
    let missing = |s: &str| Error::input(format!("{name}: missing section [{s}]"));
    let spec = WeatSpec {
        targets_x: x.ok_or_else(|| missing("targets_x"))?,
        targets_y: y.ok_or_else(|| missing("targets_y"))?,
        attributes_a: a.ok_or_else(|| missing("attributes_a"))?,
        attributes_b: b.ok_or_else(|| missing("attributes_b"))?,
        name,
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeatOutcome {
    /// `Σ_x s(x) − Σ_y s(y)`.
    pub statistic: f64,
    /// One-sided: share of re-partitions whose statistic is at least as large.
    pub p_value: f64,
    /// `(mean_x s − mean_y s) / std_{X∪Y} s` (sample standard deviation).
    pub effect_size: f64,
    /// Whether all re-partitions were enumerated.
    pub exact: bool,
    /// Re-partitions evaluated, the observed one included.
    pub partitions: u64,
}

/// `C(n, k)`, saturating at `u64::MAX`.
fn binomial(n: u64, k: u64) -> u64 {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn vectors<'a>(set: &'a EmbeddingSet, words: &[String]) -> Result<Vec<&'a [f64]>> {
    words
        .iter()
        .map(|w| {
            set.vector_of(w)
                .map_err(|_| Error::input(format!("WEAT token {w:?} is not in the vocabulary")))
        })
        .collect()
}

fn mean_cosine(w: &[f64], attrs: &[&[f64]]) -> Result<f64> {
    let mut total = 0.0;
    for a in attrs {
        total += cosine_similarity(w, a)?;
    }
    Ok(total / attrs.len() as f64)
}

/// Difference of the sums of `s` over the chosen and the remaining indices,
/// both summed in ascending index order.
fn split_statistic(s: &[f64], chosen: &[bool]) -> f64 {
    let (mut inside, mut outside) = (0.0, 0.0);
    for (v, &c) in s.iter().zip(chosen) {
        if c {
            inside += v;
        } else {
            outside += v;
        }
    }
    inside - outside
}

/// Advances `idx` (strictly increasing, values below `n`) to the next
/// combination in lexicographic order. Returns false after the last one.
fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if idx[i] < n - k + i {
            idx[i] += 1;
            for j in i + 1..k {
                idx[j] = idx[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// How the permutation p-value is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PermutationMode {
    /// Exact when `C(2n, n)` is at most [`EXACT_PARTITION_LIMIT`], else
    /// [`WEAT_SAMPLES`] samples.
    #[default]
    Auto,
    Exact,
    Sampled(usize),
}

/// Word Embedding Association Test with a permutation p-value.
///
/// `s(w) = mean_a cos(w, a) − mean_b cos(w, b)`. All `C(2n, n)` equal-size
/// re-partitions of `X ∪ Y` are enumerated when that is at most
/// [`EXACT_PARTITION_LIMIT`]; otherwise [`WEAT_SAMPLES`] seeded random
/// re-partitions are drawn and the observed split is counted as one more.
pub fn weat_test(set: &EmbeddingSet, spec: &WeatSpec, seed: u64) -> Result<WeatOutcome> {
    weat_test_with(set, spec, seed, PermutationMode::Auto)
}

/// [`weat_test`] with an explicit choice between enumeration and sampling.
pub fn weat_test_with(set: &EmbeddingSet, spec: &WeatSpec, seed: u64, mode: PermutationMode) -> Result<WeatOutcome> {
    spec.validate()?;
    let xs = vectors(set, &spec.targets_x)?;
    let ys = vectors(set, &spec.targets_y)?;
    let a = vectors(set, &spec.attributes_a)?;
    let b = vectors(set, &spec.attributes_b)?;

    let s: Vec<f64> = xs
        .iter()
        .chain(&ys)
        .map(|w| Ok(mean_cosine(w, &a)? - mean_cosine(w, &b)?))
        .collect::<Result<_>>()?;
    let n = xs.len();
    let total = s.len();

    let mut observed_split = vec![false; total];
    observed_split[..n].iter_mut().for_each(|c| *c = true);
    let statistic = split_statistic(&s, &observed_split);

    // Re-partitions that tie the observed statistic up to rounding count as ≥.
    let slack = 1e-12 * s.iter().map(|v| v.abs()).sum::<f64>().max(1e-300);
    let threshold = statistic - slack;

    let combos = binomial(total as u64, n as u64);
    let samples = match mode {
        PermutationMode::Auto if combos <= EXACT_PARTITION_LIMIT => None,
        PermutationMode::Auto => Some(WEAT_SAMPLES),
        PermutationMode::Exact => None,
        PermutationMode::Sampled(k) => Some(k),
    };
    let (hits, partitions, exact) = if let Some(samples) = samples {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut order: Vec<usize> = (0..total).collect();
        let mut chosen = vec![false; total];
        let mut hits = 1u64; // the observed split
        for _ in 0..samples {
            order.shuffle(&mut rng);
            chosen.iter_mut().for_each(|c| *c = false);
            order[..n].iter().for_each(|&i| chosen[i] = true);
            if split_statistic(&s, &chosen) >= threshold {
                hits += 1;
            }
        }
        (hits, samples as u64 + 1, false)
    } else {
        if combos == u64::MAX {
            return Err(Error::input(format!("too many re-partitions to enumerate for {n} targets per side")));
        }
        let mut idx: Vec<usize> = (0..n).collect();
        let mut chosen = vec![false; total];
        let mut hits = 0u64;
        loop {
            chosen.iter_mut().for_each(|c| *c = false);
            idx.iter().for_each(|&i| chosen[i] = true);
            if split_statistic(&s, &chosen) >= threshold {
                hits += 1;
            }
            if !next_combination(&mut idx, total) {
                break;
            }
        }
        (hits, combos, true)
    };

    let mean_x = s[..n].iter().sum::<f64>() / n as f64;
    let mean_y = s[n..].iter().sum::<f64>() / n as f64;
    let mean_all = s.iter().sum::<f64>() / total as f64;
    let var = s.iter().map(|v| (v - mean_all).powi(2)).sum::<f64>() / (total - 1) as f64;
    let effect_size = if var > 0.0 { (mean_x - mean_y) / var.sqrt() } else { 0.0 };

    Ok(WeatOutcome {
        statistic,
        p_value: hits as f64 / partitions as f64,
        effect_size,
        exact,
        partitions,
    })
}
