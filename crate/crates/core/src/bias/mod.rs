//! Gender-bias measurements.
//!
//! Two families are covered. Direction metrics look at how much a word vector
//! projects onto `he − she`. Relation metrics look at what is left after the
//! direction is gone: whether formerly biased words still cluster, still sit
//! next to each other, or can still be told apart by a classifier.
//!
//! Biased-word lists and "original bias" values always come from the
//! embedding before debiasing and are reused for every debiased variant.

mod sembias;
mod weat;

pub use sembias::{parse_sembias, sembias_eval, PairTag, SemBiasInstance, SemBiasOutcome, WordPair};
pub use weat::{
    parse_weat_spec, weat_test, weat_test_with, PermutationMode, WeatOutcome, WeatSpec, EXACT_PARTITION_LIMIT,
    WEAT_SAMPLES,
};

use std::collections::HashSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::debias::he_she_direction;
use crate::embedding::{EmbeddingSet, NeighborIndex, WordPartition};
use crate::error::{Error, Result};
use crate::matrix::{
    cosine_similarity, dot, kmeans, pearson, purity, train_linear_classifier, DenseMatrix,
    KMeansConfig, TrainingSchedule,
};

/// Neighbors inspected per word by the neighbor-based metrics.
pub const DEFAULT_NEIGHBORS: usize = 100;

/// Words per gender for the direction and clustering metrics.
pub const DEFAULT_BIASED_WORDS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectionMode {
    /// `v · (he − she)`
    #[default]
    Raw,
    /// `cos(v, he − she)`
    Normalized,
}

fn project(v: &[f64], direction: &[f64], mode: ProjectionMode) -> Result<f64> {
    match mode {
        ProjectionMode::Raw => Ok(dot(v, direction)),
        ProjectionMode::Normalized => cosine_similarity(v, direction),
    }
}

/// Bias of `word` along the `he − she` direction of the same embedding.
pub fn bias_by_projection(set: &EmbeddingSet, word: &str, mode: ProjectionMode) -> Result<f64> {
    let direction = he_she_direction(set).map_err(|e| Error::input(e.to_string()))?;
    project(set.vector_of(word)?, &direction, mode)
}

/// The most male- and female-biased neutral words of an embedding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BiasedWordLists {
    /// Descending projection bias.
    pub male_biased: Vec<String>,
    /// Descending absolute (negative) projection bias.
    pub female_biased: Vec<String>,
    /// Which embedding the lists were computed on (usually a file digest).
    pub source: String,
}

impl BiasedWordLists {
    pub fn with_source(mut self, source: impl Into<String>) -> Self {
        self.source = source.into();
        self
    }

    pub fn len(&self) -> usize {
        self.male_biased.len() + self.female_biased.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Male words, then female words, each paired with `true` for male.
    pub fn labeled(&self) -> impl Iterator<Item = (&str, bool)> {
        self.male_biased
            .iter()
            .map(|w| (w.as_str(), true))
            .chain(self.female_biased.iter().map(|w| (w.as_str(), false)))
    }

    /// Vocabulary indices of all listed words in `set`, male first.
    fn indices(&self, set: &EmbeddingSet) -> Result<Vec<usize>> {
        self.labeled()
            .map(|(w, _)| {
                set.index_of(w)
                    .ok_or_else(|| Error::input(format!("biased word {w:?} is not in the vocabulary")))
            })
            .collect()
    }
}

/// Selects the `n_per_gender` neutral words with the largest positive (male)
/// and largest negative (female) raw projection on `he − she`.
pub fn select_biased_words(
    set: &EmbeddingSet,
    partition: &WordPartition,
    n_per_gender: usize,
) -> Result<BiasedWordLists> {
    select_biased_words_with(set, partition, n_per_gender, ProjectionMode::Raw)
}

/// [`select_biased_words`] with an explicit projection mode.
pub fn select_biased_words_with(
    set: &EmbeddingSet,
    partition: &WordPartition,
    n_per_gender: usize,
    mode: ProjectionMode,
) -> Result<BiasedWordLists> {
    if n_per_gender == 0 {
        return Err(Error::input("need at least one word per gender"));
    }
    let direction = he_she_direction(set)?;
    let mut male = Vec::new();
    let mut female = Vec::new();
    for &i in &partition.neutral_indices {
        let b = project(set.vector(i), &direction, mode)?;
        if b > 0.0 {
            male.push((b, i));
        } else if b < 0.0 {
            female.push((-b, i));
        }
    }
    if male.len() < n_per_gender || female.len() < n_per_gender {
        return Err(Error::input(format!(
            "asked for {n_per_gender} words per gender but only {} male and {} female candidates exist",
            male.len(),
            female.len()
        )));
    }
    let take = |mut v: Vec<(f64, usize)>| -> Vec<String> {
        v.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        v.into_iter()
            .take(n_per_gender)
            .map(|(_, i)| set.word(i).to_owned())
            .collect()
    };
    Ok(BiasedWordLists {
        male_biased: take(male),
        female_biased: take(female),
        source: String::new(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProjectionBiasOutcome {
    pub value: f64,
    pub used: usize,
    pub skipped: usize,
}

/// Mean absolute projection bias over both lists; words missing from `set`
/// are skipped and counted.
pub fn mean_abs_projection_bias(
    set: &EmbeddingSet,
    lists: &BiasedWordLists,
    mode: ProjectionMode,
) -> Result<ProjectionBiasOutcome> {
    let direction = he_she_direction(set)?;
    let (mut total, mut used, mut skipped) = (0.0, 0, 0);
    for (w, _) in lists.labeled() {
        match set.index_of(w) {
            Some(i) => {
                total += project(set.vector(i), &direction, mode)?.abs();
                used += 1;
            }
            None => skipped += 1,
        }
    }
    if used == 0 {
        return Err(Error::input("none of the biased words are in the vocabulary"));
    }
    Ok(ProjectionBiasOutcome {
        value: total / used as f64,
        used,
        skipped,
    })
}

/// Purity of a 2-means clustering of the listed words against their
/// male/female list membership.
pub fn gbwr_clustering(set: &EmbeddingSet, lists: &BiasedWordLists, seed: u64) -> Result<f64> {
    let indices = lists.indices(set)?;
    if indices.len() < 2 {
        return Err(Error::input("clustering needs at least two words"));
    }
    let points = set.vectors().select_rows(&indices);
    let labels: Vec<usize> = lists.labeled().map(|(_, m)| usize::from(m)).collect();
    let res = kmeans(&points, 2, seed, &KMeansConfig::default())?;
    purity(&res.assignments, &labels)
}

/// The biased-word union of one embedding, ready for neighbor queries.
#[derive(Debug, Clone)]
pub struct NeighborPool {
    index: NeighborIndex,
    male: HashSet<usize>,
}

impl NeighborPool {
    pub fn new(set: &EmbeddingSet, lists: &BiasedWordLists) -> Result<Self> {
        let indices = lists.indices(set)?;
        let male = indices[..lists.male_biased.len()].iter().copied().collect();
        Ok(Self {
            index: NeighborIndex::new(set, &indices)?,
            male,
        })
    }

    /// Number of male-list words among the `k` pool words nearest to word
    /// `query` of `set` (the query itself is never its own neighbor).
    pub fn male_neighbors(&self, set: &EmbeddingSet, query: usize, k: usize) -> Result<usize> {
        let nn = self.index.query(set.vector(query), Some(query), k)?;
        Ok(nn.iter().filter(|i| self.male.contains(i)).count())
    }

    /// Fraction of male-list words among the `k` nearest pool words.
    pub fn male_fraction(&self, set: &EmbeddingSet, query: usize, k: usize) -> Result<f64> {
        if k == 0 {
            return Err(Error::input("k must be at least 1"));
        }
        Ok(self.male_neighbors(set, query, k)? as f64 / k as f64)
    }
}

/// Share of male-biased words among the `k` nearest neighbors of `word`
/// within the biased-word union.
pub fn bias_by_neighbors(set: &EmbeddingSet, word: &str, lists: &BiasedWordLists, k: usize) -> Result<f64> {
    let query = set
        .index_of(word)
        .ok_or_else(|| Error::input(format!("token {word:?} is not in the vocabulary")))?;
    NeighborPool::new(set, lists)?.male_fraction(set, query, k)
}

/// Options shared by the neighbor-based relation metrics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelationOptions {
    pub neighbors: usize,
    pub projection: ProjectionMode,
}

impl Default for RelationOptions {
    fn default() -> Self {
        Self {
            neighbors: DEFAULT_NEIGHBORS,
            projection: ProjectionMode::Raw,
        }
    }
}

/// Pearson correlation, over the listed words, between projection bias in
/// `original` and bias-by-neighbors in `set`.
pub fn gbwr_correlation(
    set: &EmbeddingSet,
    lists: &BiasedWordLists,
    original: &EmbeddingSet,
    options: &RelationOptions,
) -> Result<f64> {
    if lists.is_empty() {
        return Err(Error::input("biased-word lists are empty"));
    }
    let direction = he_she_direction(original)?;
    let original_bias: Vec<f64> = lists
        .labeled()
        .map(|(w, _)| project(original.vector_of(w)?, &direction, options.projection))
        .collect::<Result<_>>()?;
    let pool = NeighborPool::new(set, lists)?;
    let queries = lists.indices(set)?;
    let fractions: Vec<f64> = queries
        .par_iter()
        .map(|&q| pool.male_fraction(set, q, options.neighbors))
        .collect::<Result<_>>()?;
    pearson(&original_bias, &fractions)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfessionCount {
    pub word: String,
    pub male_neighbors: usize,
    pub original_bias: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfessionCounts {
    pub counts: Vec<ProfessionCount>,
    /// Professions missing from either embedding.
    pub skipped: usize,
}

impl ProfessionCounts {
    /// Pearson correlation of male-neighbor counts with original bias.
    pub fn correlation(&self) -> Result<f64> {
        let counts: Vec<f64> = self.counts.iter().map(|c| c.male_neighbors as f64).collect();
        let bias: Vec<f64> = self.counts.iter().map(|c| c.original_bias).collect();
        pearson(&bias, &counts)
    }

    /// `profession<TAB>male_neighbors<TAB>original_bias` lines with a header.
    pub fn to_tsv(&self) -> String {
        let mut out = String::from("profession\tmale_neighbors\toriginal_bias\n");
        for c in &self.counts {
            out.push_str(&format!("{}\t{}\t{}\n", c.word, c.male_neighbors, c.original_bias));
        }
        out
    }
}

/// Male-neighbor counts of each profession within the biased-word pool of
/// `set`, next to the profession's projection bias in `original`.
pub fn profession_neighbor_counts(
    set: &EmbeddingSet,
    professions: &[String],
    lists: &BiasedWordLists,
    original: &EmbeddingSet,
    options: &RelationOptions,
) -> Result<ProfessionCounts> {
    let direction = he_she_direction(original)?;
    let pool = NeighborPool::new(set, lists)?;
    let usable: Vec<(&String, usize, f64)> = professions
        .iter()
        .filter_map(|w| {
            let q = set.index_of(w)?;
            let v = original.vector_of(w).ok()?;
            Some((w, q, v))
        })
        .map(|(w, q, v)| Ok((w, q, project(v, &direction, options.projection)?)))
        .collect::<Result<_>>()?;
    let skipped = professions.len() - usable.len();
    let counts = usable
        .par_iter()
        .map(|&(w, q, bias)| {
            Ok(ProfessionCount {
                word: w.clone(),
                male_neighbors: pool.male_neighbors(set, q, options.neighbors)?,
                original_bias: bias,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ProfessionCounts { counts, skipped })
}

/// Correlation between the male-neighbor count of each profession and its
/// original projection bias, plus the counts themselves.
pub fn gbwr_profession(
    set: &EmbeddingSet,
    professions: &[String],
    lists: &BiasedWordLists,
    original: &EmbeddingSet,
    options: &RelationOptions,
) -> Result<(f64, ProfessionCounts)> {
    let counts = profession_neighbor_counts(set, professions, lists, original, options)?;
    Ok((counts.correlation()?, counts))
}

/// Sizes for the classification metric.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationSplit {
    pub per_gender: usize,
    pub train_per_gender: usize,
}

impl Default for ClassificationSplit {
    fn default() -> Self {
        Self {
            per_gender: 2500,
            train_per_gender: 500,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassificationOutcome {
    pub accuracy: f64,
    pub train: usize,
    pub test: usize,
}

/// Trains a linear classifier to recover the original gender of biased words
/// from their vectors in `set` and reports held-out accuracy.
///
/// Words are ranked on `original`; the top `train_per_gender` of each gender
/// form the training set and the remaining words the test set.
pub fn gbwr_classification(
    set: &EmbeddingSet,
    partition: &WordPartition,
    original: &EmbeddingSet,
    seed: u64,
    split: &ClassificationSplit,
) -> Result<ClassificationOutcome> {
    if split.train_per_gender == 0 || split.train_per_gender >= split.per_gender {
        return Err(Error::input(format!(
            "training size {} must be in 1..{}",
            split.train_per_gender, split.per_gender
        )));
    }
    let lists = select_biased_words(original, partition, split.per_gender)?;
    let mut train = (Vec::new(), Vec::new());
    let mut test = (Vec::new(), Vec::new());
    for (words, male) in [(&lists.male_biased, true), (&lists.female_biased, false)] {
        for (rank, w) in words.iter().enumerate() {
            let v = set.vector_of(w)?.to_vec();
            let dst = if rank < split.train_per_gender { &mut train } else { &mut test };
            dst.0.push(v);
            dst.1.push(male);
        }
    }
    let train_points = DenseMatrix::from_rows(&train.0)?;
    let test_points = DenseMatrix::from_rows(&test.0)?;
    let model = train_linear_classifier(&train_points, &train.1, seed, &TrainingSchedule::default())?;
    Ok(ClassificationOutcome {
        accuracy: model.accuracy(&test_points, &test.1)?,
        train: train.1.len(),
        test: test.1.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::embedding::partition;

    fn words(ws: &[&str]) -> Vec<String> {
        ws.iter().map(|s| s.to_string()).collect()
    }

    /// he/she along the first axis, `m*` words at +g, `f*` words at −g, each
    /// with a small private component.
    fn planted(n: usize) -> EmbeddingSet {
        let dim = 2 * n + 2;
        let mut pairs = vec![("he".to_string(), unit(dim, 0, 1.0)), ("she".to_string(), unit(dim, 0, -1.0))];
        for i in 0..n {
            let mut m = unit(dim, 0, 1.0 + i as f64 * 0.01);
            m[2 + i] = 0.1;
            pairs.push((format!("m{i}"), m));
            let mut f = unit(dim, 0, -1.0 - i as f64 * 0.01);
            f[2 + n + i] = 0.1;
            pairs.push((format!("f{i}"), f));
        }
        EmbeddingSet::from_pairs(pairs).unwrap()
    }

    fn unit(dim: usize, axis: usize, scale: f64) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        v[axis] = scale;
        v
    }

    #[test]
    fn projection_modes() {
        let set = EmbeddingSet::from_pairs([
            ("he", [1.0, 1.0]),
            ("she", [-1.0, 1.0]),
            ("tree", [0.0, 5.0]),
            ("g", [2.0, 0.0]),
        ])
        .unwrap();
        for mode in [ProjectionMode::Raw, ProjectionMode::Normalized] {
            assert_eq!(bias_by_projection(&set, "tree", mode).unwrap(), 0.0);
        }
        assert_eq!(bias_by_projection(&set, "g", ProjectionMode::Raw).unwrap(), 4.0);
        assert!((bias_by_projection(&set, "g", ProjectionMode::Normalized).unwrap() - 1.0).abs() < 1e-15);
        assert!(bias_by_projection(&set, "nope", ProjectionMode::Raw).is_err());
    }

    #[test]
    fn selection_splits_by_sign() {
        let set = planted(4);
        let part = partition(&set, &words(&["he", "she"])).unwrap();
        let lists = select_biased_words(&set, &part, 2).unwrap();
        assert_eq!(lists.male_biased, words(&["m3", "m2"]));
        assert_eq!(lists.female_biased, words(&["f3", "f2"]));
        assert!(select_biased_words(&set, &part, 5).is_err());
    }

    #[test]
    fn mean_abs_bias_by_hand() {
        // direction (2, 0); raw biases 2·x.
        let set = EmbeddingSet::from_pairs([
            ("he", [1.0, 0.0]),
            ("she", [-1.0, 0.0]),
            ("a", [0.5, 1.0]),
            ("b", [0.25, -3.0]),
            ("c", [-1.0, 0.0]),
            ("d", [-0.125, 2.0]),
        ])
        .unwrap();
        let lists = BiasedWordLists {
            male_biased: words(&["a", "b"]),
            female_biased: words(&["c", "d", "zzz"]),
            source: String::new(),
        };
        let got = mean_abs_projection_bias(&set, &lists, ProjectionMode::Raw).unwrap();
        assert_eq!(got.value, (1.0 + 0.5 + 2.0 + 0.25) / 4.0);
        assert_eq!((got.used, got.skipped), (4, 1));
    }

    #[test]
    fn clustering_of_planted_words_is_pure() {
        let set = planted(10);
        let part = partition(&set, &words(&["he", "she"])).unwrap();
        let lists = select_biased_words(&set, &part, 10).unwrap();
        assert_eq!(gbwr_clustering(&set, &lists, 42).unwrap(), 1.0);
    }

    #[test]
    fn identical_vectors_cluster_at_half_purity() {
        let mut pairs = vec![("he".to_string(), vec![1.0, 0.0]), ("she".to_string(), vec![-1.0, 0.0])];
        for i in 0..6 {
            pairs.push((format!("w{i}"), vec![0.3, 0.3]));
        }
        let set = EmbeddingSet::from_pairs(pairs).unwrap();
        let lists = BiasedWordLists {
            male_biased: words(&["w0", "w1", "w2"]),
            female_biased: words(&["w3", "w4", "w5"]),
            source: String::new(),
        };
        assert_eq!(gbwr_clustering(&set, &lists, 1).unwrap(), 0.5);
    }

    #[test]
    fn neighbor_fraction_extremes() {
        let set = planted(6);
        let part = partition(&set, &words(&["he", "she"])).unwrap();
        let lists = select_biased_words(&set, &part, 6).unwrap();
        assert_eq!(bias_by_neighbors(&set, "m0", &lists, 5).unwrap(), 1.0);
        assert_eq!(bias_by_neighbors(&set, "f0", &lists, 5).unwrap(), 0.0);
        // "he" is not in the pool, so all 12 words are candidates.
        assert_eq!(bias_by_neighbors(&set, "he", &lists, 12).unwrap(), 0.5);
        assert!(bias_by_neighbors(&set, "m0", &lists, 12).is_err());
    }

    #[test]
    fn symmetric_neighbors_give_half() {
        // Query on the y axis; male and female words mirrored across it.
        let set = EmbeddingSet::from_pairs([
            ("he", [1.0, 0.0]),
            ("she", [-1.0, 0.0]),
            ("q", [0.0, 1.0]),
            ("m0", [0.2, 1.0]),
            ("m1", [0.5, 1.0]),
            ("f0", [-0.2, 1.0]),
            ("f1", [-0.5, 1.0]),
        ])
        .unwrap();
        let lists = BiasedWordLists {
            male_biased: words(&["m0", "m1"]),
            female_biased: words(&["f0", "f1"]),
            source: String::new(),
        };
        assert_eq!(bias_by_neighbors(&set, "q", &lists, 2).unwrap(), 0.5);
        assert_eq!(bias_by_neighbors(&set, "q", &lists, 4).unwrap(), 0.5);
    }

    #[test]
    fn constant_neighbor_fractions_are_undefined() {
        // In `flat` all listed words coincide, so with k = 1 the tie-break
        // makes "a" or "b" every word's neighbor and all fractions equal 1.
        let mut pairs = vec![("he".to_string(), vec![1.0, 0.0]), ("she".to_string(), vec![-1.0, 0.0])];
        let lists = BiasedWordLists {
            male_biased: words(&["a", "b"]),
            female_biased: words(&["c", "d"]),
            source: String::new(),
        };
        for (i, w) in ["a", "b", "c", "d"].iter().enumerate() {
            pairs.push((w.to_string(), vec![if i < 2 { 1.0 } else { -1.0 } * (1.0 + i as f64), 1.0]));
        }
        let original = EmbeddingSet::from_pairs(pairs.clone()).unwrap();
        for p in pairs.iter_mut().skip(2) {
            p.1 = vec![0.0, 1.0];
        }
        let flat = EmbeddingSet::from_pairs(pairs).unwrap();
        let opts = RelationOptions { neighbors: 1, ..RelationOptions::default() };
        let err = gbwr_correlation(&flat, &lists, &original, &opts).unwrap_err();
        assert!(matches!(err, Error::UndefinedCorrelation(_)), "{err}");
    }

    #[test]
    fn classification_on_planted_vectors_is_perfect() {
        let set = planted(30);
        let part = partition(&set, &words(&["he", "she"])).unwrap();
        let split = ClassificationSplit { per_gender: 30, train_per_gender: 10 };
        let out = gbwr_classification(&set, &part, &set, 4, &split).unwrap();
        assert_eq!(out.accuracy, 1.0);
        assert_eq!((out.train, out.test), (20, 40));
        let again = gbwr_classification(&set, &part, &set, 4, &split).unwrap();
        assert_eq!(out, again);
    }

    #[test]
    fn selection_matches_full_sort() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(8);
        let mut pairs = vec![("he".to_string(), vec![1.0, 0.0, 0.0]), ("she".to_string(), vec![0.0, 1.0, 0.0])];
        for i in 0..20 {
            let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-3i32..=3) as f64 * 0.5).collect();
            pairs.push((format!("w{i}"), v));
        }
        let set = EmbeddingSet::from_pairs(pairs.clone()).unwrap();
        let part = partition(&set, &["he".to_string(), "she".to_string()]).unwrap();
        // Projection on he − she = (1, −1, 0).
        let mut scored: Vec<(f64, usize)> = (2..22).map(|i| (pairs[i].1[0] - pairs[i].1[1], i)).collect();
        scored.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
        let male: Vec<String> = scored.iter().filter(|s| s.0 > 0.0).take(3).map(|s| pairs[s.1].0.clone()).collect();
        scored.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)));
        let female: Vec<String> = scored.iter().filter(|s| s.0 < 0.0).take(3).map(|s| pairs[s.1].0.clone()).collect();
        let lists = select_biased_words(&set, &part, 3).unwrap();
        assert_eq!(lists.male_biased, male);
        assert_eq!(lists.female_biased, female);
    }

    #[test]
    fn neighbor_bias_matches_brute_force() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(12);
        let pairs: Vec<(String, Vec<f64>)> = (0..12)
            .map(|i| (format!("w{i}"), (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect()))
            .collect();
        let set = EmbeddingSet::from_pairs(pairs.clone()).unwrap();
        let lists = BiasedWordLists {
            male_biased: (0..4).map(|i| format!("w{i}")).collect(),
            female_biased: (4..8).map(|i| format!("w{i}")).collect(),
            source: String::new(),
        };
        let cos = |a: &[f64], b: &[f64]| {
            let d: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
            d / (a.iter().map(|x| x * x).sum::<f64>().sqrt() * b.iter().map(|x| x * x).sum::<f64>().sqrt())
        };
        for q in 0..12 {
            let mut pool: Vec<(f64, usize)> = (0..8).filter(|&i| i != q).map(|i| (cos(&pairs[q].1, &pairs[i].1), i)).collect();
            pool.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
            let male = pool.iter().take(3).filter(|p| p.1 < 4).count();
            let got = bias_by_neighbors(&set, &format!("w{q}"), &lists, 3).unwrap();
            assert_eq!(got, male as f64 / 3.0, "query w{q}");
        }
    }
}
