//! Half-sibling regression (HSR) debiasing and a projection baseline.
//!
//! HSR treats gender-definition words and all other words as half-siblings
//! that share a gender parent. Ridge regression predicts the neutral vectors
//! from the definition vectors; that prediction is the gender component, and
//! subtracting it leaves the debiased neutral vectors:
//!
//! ```text
//! W  = (V_Dᵀ V_D + α I)⁻¹ V_Dᵀ V_N
//! Ĝ  = V_D W
//! V̂_N = V_N − Ĝ
//! ```
//!
//! Word vectors are the columns of `V_D` (`d x m`) and `V_N` (`d x n`), so each
//! embedding dimension is one regression sample. The `m x m` system is
//! factored once and `Ĝ` is produced block by block over the neutral words.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::embedding::{partition, EmbeddingSet, WordPartition};
use crate::error::{Error, Result};
use crate::matrix::{dot, norm, CholeskyFactor, DenseMatrix, ZERO_NORM};

pub const DEFAULT_ALPHA: f64 = 60.0;

/// Neutral words per block when computing `Ĝ`.
const BLOCK_WORDS: usize = 2048;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HsrConfig {
    /// Ridge constant.
    pub alpha: f64,
    /// Gender-definition words.
    pub gender_list: Vec<String>,
}

impl HsrConfig {
    pub fn new(gender_list: Vec<String>) -> Self {
        Self {
            alpha: DEFAULT_ALPHA,
            gender_list,
        }
    }

    pub fn with_alpha(mut self, alpha: f64) -> Self {
        self.alpha = alpha;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(Error::Config(format!(
                "alpha must be finite and >= 0, got {}",
                self.alpha
            )));
        }
        if self.gender_list.is_empty() {
            return Err(Error::Config("gender-definition list is empty".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Hsr,
    Hard,
    None,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Hsr => "hsr",
            Method::Hard => "hard",
            Method::None => "none",
        }
    }
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct DebiasResult {
    /// Same vocabulary, order and dimension as the input.
    pub embeddings: EmbeddingSet,
    pub method: Method,
    /// Frobenius norm of the component removed from the neutral words
    /// (`‖Ĝ‖_F` for HSR).
    pub gender_norm: f64,
    pub config: HsrConfig,
    pub partition: WordPartition,
}

/// Ridge fit of neutral vectors on the definition vectors, factored once.
struct GenderRegression {
    /// `m x d`: definition vectors as rows, i.e. `V_Dᵀ`.
    definition: DenseMatrix,
    factor: CholeskyFactor,
}

impl GenderRegression {
    fn fit(definition: DenseMatrix, alpha: f64) -> Result<Self> {
        crate::matrix::check_alpha(alpha)?;
        // V_Dᵀ V_D + αI: pairwise dot products of definition vectors.
        let mut gram = definition.matmul_t(&definition)?;
        for i in 0..gram.rows() {
            gram.set(i, i, gram.get(i, i) + alpha);
        }
        let factor = CholeskyFactor::new(&gram)?;
        Ok(Self { definition, factor })
    }

    /// `Ĝᵀ` for a block of neutral vectors given as rows (`b x d`).
    fn gender_rows(&self, neutral: &DenseMatrix) -> Result<DenseMatrix> {
        let rhs = self.definition.matmul_t(neutral)?; // V_Dᵀ V_N, m x b
        let weights = self.factor.solve(&rhs)?; // W, m x b
        weights.t_matmul(&self.definition) // (V_D W)ᵀ = Wᵀ V_Dᵀ, b x d
    }

    /// Applies [`Self::gender_rows`] to `rows` of `vectors` in fixed-size blocks.
    /// Blocks are independent, so the result does not depend on the block size.
    fn gender_rows_blocked(&self, vectors: &DenseMatrix, rows: &[usize]) -> Result<Vec<DenseMatrix>> {
        rows.par_chunks(BLOCK_WORDS)
            .map(|block| self.gender_rows(&vectors.select_rows(block)))
            .collect()
    }
}

/// `Ĝ = V_D · W` where `W` is the ridge solution of `V_N` on `V_D`.
///
/// `v_d` is `d x m` and `v_n` is `d x n` (word vectors as columns); the result
/// is `d x n` and every column lies in the column space of `v_d`.
pub fn approximate_gender_info(v_d: &DenseMatrix, v_n: &DenseMatrix, alpha: f64) -> Result<DenseMatrix> {
    if v_d.rows() != v_n.rows() {
        return Err(Error::input(format!(
            "definition vectors have dimension {} but neutral vectors have {}",
            v_d.rows(),
            v_n.rows()
        )));
    }
    let regression = GenderRegression::fit(v_d.transpose(), alpha)?;
    let neutral = v_n.transpose();
    let all: Vec<usize> = (0..neutral.rows()).collect();
    let blocks = regression.gender_rows_blocked(&neutral, &all)?;
    let mut values = Vec::with_capacity(neutral.rows() * neutral.cols());
    for b in blocks {
        values.extend(b.into_vec());
    }
    Ok(DenseMatrix::new(neutral.rows(), neutral.cols(), values)?.transpose())
}

/// The gender component `Ĝ` of every neutral word, as rows aligned with
/// `partition.neutral_indices`.
pub fn gender_components(set: &EmbeddingSet, config: &HsrConfig) -> Result<(WordPartition, DenseMatrix)> {
    config.validate()?;
    let part = partition(set, &config.gender_list)?;
    let regression = GenderRegression::fit(set.vectors().select_rows(&part.definition_indices), config.alpha)?;
    let blocks = regression.gender_rows_blocked(set.vectors(), &part.neutral_indices)?;
    let mut values = Vec::with_capacity(part.neutral_indices.len() * set.dim());
    for b in blocks {
        values.extend(b.into_vec());
    }
    let g = DenseMatrix::new(part.neutral_indices.len(), set.dim(), values)?;
    Ok((part, g))
}

/// Debiases every non-definition word by subtracting its ridge-predicted
/// gender component. Definition words are copied through unchanged.
pub fn hsr_debias(set: &EmbeddingSet, config: &HsrConfig) -> Result<DebiasResult> {
    config.validate()?;
    let part = partition(set, &config.gender_list)?;
    let regression = GenderRegression::fit(set.vectors().select_rows(&part.definition_indices), config.alpha)?;
    let blocks = regression.gender_rows_blocked(set.vectors(), &part.neutral_indices)?;

    let mut out = set.vectors().clone();
    let mut squared = 0.0;
    for (block_rows, g) in part.neutral_indices.chunks(BLOCK_WORDS).zip(&blocks) {
        for (k, &row) in block_rows.iter().enumerate() {
            let gk = g.row(k);
            squared += dot(gk, gk);
            for (v, gv) in out.row_mut(row).iter_mut().zip(gk) {
                *v -= gv;
            }
        }
    }
    Ok(DebiasResult {
        embeddings: set.with_vectors(out)?,
        method: Method::Hsr,
        gender_norm: squared.sqrt(),
        config: config.clone(),
        partition: part,
    })
}

/// `he − she`.
pub fn he_she_direction(set: &EmbeddingSet) -> Result<Vec<f64>> {
    let missing: Vec<&str> = ["he", "she"].into_iter().filter(|w| !set.contains(w)).collect();
    if !missing.is_empty() {
        return Err(Error::Config(format!(
            "gender direction needs {} in the vocabulary",
            missing.join(" and ")
        )));
    }
    let he = set.vector_of("he")?;
    let she = set.vector_of("she")?;
    Ok(he.iter().zip(she).map(|(a, b)| a - b).collect())
}

/// Removes the component along `direction` from every neutral word of
/// `part`: `v̂ = v − (v·ĝ)ĝ` with `ĝ` the unit direction. Returns the new set
/// and the Frobenius norm of what was removed.
pub fn project_out_direction(
    set: &EmbeddingSet,
    part: &WordPartition,
    direction: &[f64],
) -> Result<(EmbeddingSet, f64)> {
    if direction.len() != set.dim() {
        return Err(Error::input(format!(
            "direction has dimension {}, embeddings have {}",
            direction.len(),
            set.dim()
        )));
    }
    let n = norm(direction);
    if n < ZERO_NORM {
        return Err(Error::Config("gender direction is the zero vector".into()));
    }
    let unit: Vec<f64> = direction.iter().map(|v| v / n).collect();
    let mut out = set.vectors().clone();
    let mut squared = 0.0;
    for &row in &part.neutral_indices {
        let r = out.row_mut(row);
        let c = dot(r, &unit);
        squared += c * c;
        for (v, u) in r.iter_mut().zip(&unit) {
            *v -= c * u;
        }
    }
    Ok((set.with_vectors(out)?, squared.sqrt()))
}

/// Single-direction hard debiasing: neutral words lose their `he − she`
/// component, definition words are unchanged.
pub fn hard_debias(set: &EmbeddingSet, config: &HsrConfig) -> Result<DebiasResult> {
    config.validate()?;
    let direction = he_she_direction(set)?;
    let part = partition(set, &config.gender_list)?;
    let (embeddings, removed) = project_out_direction(set, &part, &direction)?;
    Ok(DebiasResult {
        embeddings,
        method: Method::Hard,
        gender_norm: removed,
        config: config.clone(),
        partition: part,
    })
}

/// Dispatches on `method`; [`Method::None`] returns the input unchanged.
pub fn debias(set: &EmbeddingSet, config: &HsrConfig, method: Method) -> Result<DebiasResult> {
    match method {
        Method::Hsr => hsr_debias(set, config),
        Method::Hard => hard_debias(set, config),
        Method::None => {
            config.validate()?;
            Ok(DebiasResult {
                embeddings: set.clone(),
                method,
                gender_norm: 0.0,
                config: config.clone(),
                partition: partition(set, &config.gender_list)?,
            })
        }
    }
}
