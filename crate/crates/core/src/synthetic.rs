//! Synthetic embeddings with a known, planted gender component.
//!
//! Every neutral word is `semantic + c·g`, where `g = unit(he − she)` lies in
//! the span of the definition vectors and `c` is a per-word coefficient whose
//! sign is the planted gender label.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::matrix::{norm, DenseMatrix};

/// Definition words used by [`planted_bias`], in order. `he` and `she` come first.
pub const DEFINITION_WORDS: [&str; 10] = [
    "he", "she", "man", "woman", "king", "queen", "father", "mother", "boy", "girl",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedBiasConfig {
    pub dim: usize,
    /// How many of [`DEFINITION_WORDS`] to use (at least 2).
    pub definition_words: usize,
    pub neutral_words: usize,
    /// Coefficient magnitudes are drawn uniformly from this range.
    pub coefficient_range: (f64, f64),
    /// Standard deviation of each semantic coordinate.
    pub noise: f64,
    pub seed: u64,
}

impl Default for PlantedBiasConfig {
    fn default() -> Self {
        Self {
            dim: 50,
            definition_words: 10,
            neutral_words: 2000,
            coefficient_range: (3.0, 6.0),
            noise: 1.0,
            seed: 7,
        }
    }
}

#[derive(Debug, Clone)]
pub struct PlantedBias {
    /// Definition words first, then neutral words `w0000, w0001, …`.
    pub set: EmbeddingSet,
    pub gender_list: Vec<String>,
    /// Unit vector `he − she`.
    pub direction: Vec<f64>,
    /// Planted coefficient of each neutral word, in set order after the
    /// definition words. Even-numbered words are male (positive).
    pub coefficients: Vec<f64>,
}

impl PlantedBias {
    pub fn neutral_words(&self) -> &[String] {
        &self.set.words()[self.gender_list.len()..]
    }

    /// The `n` most strongly planted words of each sign, strongest first.
    pub fn planted_lists(&self, n: usize) -> Result<crate::bias::BiasedWordLists> {
        let words = self.neutral_words();
        let pick = |positive: bool| -> Result<Vec<String>> {
            let mut v: Vec<(f64, usize)> = self
                .coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| (**c > 0.0) == positive)
                .map(|(i, c)| (c.abs(), i))
                .collect();
            if v.len() < n {
                return Err(Error::input(format!("only {} planted words of one sign", v.len())));
            }
            v.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
            Ok(v[..n].iter().map(|&(_, i)| words[i].clone()).collect())
        };
        Ok(crate::bias::BiasedWordLists {
            male_biased: pick(true)?,
            female_biased: pick(false)?,
            source: "planted".into(),
        })
    }
}

/// Standard normal draw (Box–Muller).
pub fn gaussian(rng: &mut impl Rng) -> f64 {
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn planted_bias(config: &PlantedBiasConfig) -> Result<PlantedBias> {
    let m = config.definition_words;
    if !(2..=DEFINITION_WORDS.len()).contains(&m) {
        return Err(Error::Config(format!(
            "definition_words must be in 2..={}, got {m}",
            DEFINITION_WORDS.len()
        )));
    }
    if config.dim < m {
        return Err(Error::Config(format!("dim {} is below the {m} definition words", config.dim)));
    }
    let (lo, hi) = config.coefficient_range;
    if !(lo >= 0.0 && hi >= lo && hi.is_finite()) {
        return Err(Error::Config(format!("bad coefficient range ({lo}, {hi})")));
    }
    let d = config.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut rows: Vec<Vec<f64>> = (0..m).map(|_| (0..d).map(|_| gaussian(&mut rng)).collect()).collect();

    let diff: Vec<f64> = rows[0].iter().zip(&rows[1]).map(|(a, b)| a - b).collect();
    let len = norm(&diff);
    let direction: Vec<f64> = diff.iter().map(|x| x / len).collect();

    let mut coefficients = Vec::with_capacity(config.neutral_words);
    for i in 0..config.neutral_words {
        let magnitude = lo + (hi - lo) * rng.gen::<f64>();
        let c = if i % 2 == 0 { magnitude } else { -magnitude };
        let row: Vec<f64> = direction
            .iter()
            .map(|g| config.noise * gaussian(&mut rng) + c * g)
            .collect();
        coefficients.push(c);
        rows.push(row);
    }

    let gender_list: Vec<String> = DEFINITION_WORDS[..m].iter().map(|s| s.to_string()).collect();
    let mut words = gender_list.clone();
    words.extend((0..config.neutral_words).map(|i| format!("w{i:04}")));
    let set = EmbeddingSet::new(words, DenseMatrix::from_rows(&rows)?)?;
    Ok(PlantedBias {
        set,
        gender_list,
        direction,
        coefficients,
    })
}
