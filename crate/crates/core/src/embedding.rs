//! Word-embedding sets: text I/O, vocabulary lookup, the definition/neutral
//! split and cosine nearest-neighbor queries.

use std::collections::{HashMap, HashSet};
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::matrix::{dot, format_float, norm, DenseMatrix, ZERO_NORM};

/// A vocabulary and one dense vector per word (row `i` belongs to `words[i]`).
///
/// Tokens are case-sensitive and vectors are kept exactly as loaded, without
/// length normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingSet {
    words: Vec<String>,
    index: HashMap<String, usize>,
    vectors: DenseMatrix,
}

impl EmbeddingSet {
    pub fn new(words: Vec<String>, vectors: DenseMatrix) -> Result<Self> {
        if words.len() != vectors.rows() {
            return Err(Error::input(format!(
                "{} words but {} vectors",
                words.len(),
                vectors.rows()
            )));
        }
        let mut index = HashMap::with_capacity(words.len());
        for (i, w) in words.iter().enumerate() {
            if index.insert(w.clone(), i).is_some() {
                return Err(Error::input(format!("duplicate token {w:?}")));
            }
        }
        Ok(Self {
            words,
            index,
            vectors,
        })
    }

    /// Builds a set from `(token, vector)` pairs.
    pub fn from_pairs<S: Into<String>, V: AsRef<[f64]>>(
        pairs: impl IntoIterator<Item = (S, V)>,
    ) -> Result<Self> {
        let mut words = Vec::new();
        let mut rows = Vec::new();
        for (w, v) in pairs {
            words.push(w.into());
            rows.push(v.as_ref().to_vec());
        }
        Self::new(words, DenseMatrix::from_rows(&rows)?)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.vectors.cols()
    }

    pub fn words(&self) -> &[String] {
        &self.words
    }

    pub fn word(&self, i: usize) -> &str {
        &self.words[i]
    }

    pub fn vectors(&self) -> &DenseMatrix {
        &self.vectors
    }

    pub fn index_of(&self, word: &str) -> Option<usize> {
        self.index.get(word).copied()
    }

    pub fn contains(&self, word: &str) -> bool {
        self.index.contains_key(word)
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        self.vectors.row(i)
    }

    /// Vector of `word`, or an input error naming the missing token.
    pub fn vector_of(&self, word: &str) -> Result<&[f64]> {
        self.index_of(word)
            .map(|i| self.vector(i))
            .ok_or_else(|| Error::input(format!("token {word:?} is not in the vocabulary")))
    }

    /// Same vocabulary and order, new vectors.
    pub fn with_vectors(&self, vectors: DenseMatrix) -> Result<Self> {
        if vectors.shape() != self.vectors.shape() {
            return Err(Error::input(format!(
                "replacement vectors have shape {:?}, expected {:?}",
                vectors.shape(),
                self.vectors.shape()
            )));
        }
        Ok(Self {
            words: self.words.clone(),
            index: self.index.clone(),
            vectors,
        })
    }

    /// Keeps only the first `cap` words (embedding files are usually sorted by
    /// frequency).
    pub fn truncated(&self, cap: usize) -> Self {
        if cap >= self.len() {
            return self.clone();
        }
        let keep: Vec<usize> = (0..cap).collect();
        let words = self.words[..cap].to_vec();
        let index = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i))
            .collect();
        Self {
            words,
            index,
            vectors: self.vectors.select_rows(&keep),
        }
    }

    /// Rows scaled to unit length; rows with norm below [`ZERO_NORM`] become zero.
    pub fn unit_vectors(&self) -> DenseMatrix {
        unit_rows(self.vectors.clone())
    }
}

fn unit_rows(mut m: DenseMatrix) -> DenseMatrix {
    for r in 0..m.rows() {
        let row = m.row_mut(r);
        let n = norm(row);
        if n < ZERO_NORM {
            row.iter_mut().for_each(|v| *v = 0.0);
        } else {
            row.iter_mut().for_each(|v| *v /= n);
        }
    }
    m
}

/// Parses the whitespace-separated text format: one `token v1 ... vd` per line,
/// no header. The dimension is taken from the first line.
pub fn load_embeddings<R: BufRead>(reader: R) -> Result<EmbeddingSet> {
    let mut words = Vec::new();
    let mut values = Vec::new();
    let mut seen = HashSet::new();
    let mut dim = None;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.strip_suffix('\r').unwrap_or(&line);
        if line.trim().is_empty() {
            continue;
        }
        // The token runs up to the first ASCII space so that tokens may contain
        // other (e.g. non-breaking) whitespace.
        let (token, rest) = line
            .split_once(' ')
            .ok_or_else(|| Error::parse(lineno, "line has a token but no vector"))?;
        if token.is_empty() {
            return Err(Error::parse(lineno, "empty token"));
        }
        let before = values.len();
        for field in rest.split_ascii_whitespace() {
            let v: f64 = field
                .parse()
                .map_err(|_| Error::parse(lineno, format!("non-numeric field {field:?}")))?;
            if !v.is_finite() {
                return Err(Error::parse(lineno, format!("non-finite value {field:?}")));
            }
            values.push(v);
        }
        let count = values.len() - before;
        match dim {
            None if count == 0 => return Err(Error::parse(lineno, "vector has no components")),
            None => dim = Some(count),
            Some(d) if d != count => {
                return Err(Error::parse(
                    lineno,
                    format!("expected {d} components, found {count}"),
                ))
            }
            Some(_) => {}
        }
        if !seen.insert(token.to_owned()) {
            return Err(Error::parse(lineno, format!("duplicate token {token:?}")));
        }
        words.push(token.to_owned());
    }
    let dim = dim.ok_or_else(|| Error::EmptyInput("embedding stream has no vectors".into()))?;
    let vectors = DenseMatrix::new(words.len(), dim, values)?;
    EmbeddingSet::new(words, vectors)
}

/// Writes `set` in the format read by [`load_embeddings`].
///
/// Values use the shortest decimal form that parses back to the same `f64`,
/// so a save/load round trip is exact and the output is byte-stable.
pub fn save_embeddings<W: Write>(set: &EmbeddingSet, mut sink: W) -> Result<()> {
    for (i, word) in set.words().iter().enumerate() {
        sink.write_all(word.as_bytes())?;
        for &v in set.vector(i) {
            write!(sink, " {}", format_float(v))?;
        }
        sink.write_all(b"\n")?;
    }
    sink.flush()?;
    Ok(())
}

/// Reads a one-token-per-line list. Blank lines and lines starting with `#`
/// are skipped; surrounding whitespace is trimmed.
pub fn read_word_list<R: BufRead>(reader: R) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        out.push(t.to_owned());
    }
    Ok(out)
}

/// Split of a vocabulary into gender-definition words and everything else.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordPartition {
    /// Ascending vocabulary indices of list words found in the vocabulary.
    pub definition_indices: Vec<usize>,
    /// Ascending indices of all remaining words.
    pub neutral_indices: Vec<usize>,
    /// Distinct list tokens that were not in the vocabulary.
    pub missing: usize,
}

impl WordPartition {
    pub fn is_definition(&self, index: usize) -> bool {
        self.definition_indices.binary_search(&index).is_ok()
    }
}

/// Splits the vocabulary of `set` by membership in `gender_list`.
pub fn partition(set: &EmbeddingSet, gender_list: &[String]) -> Result<WordPartition> {
    let mut in_vocab = vec![false; set.len()];
    let mut missing = HashSet::new();
    for w in gender_list {
        match set.index_of(w) {
            Some(i) => in_vocab[i] = true,
            None => {
                missing.insert(w.as_str());
            }
        }
    }
    let (mut definition_indices, mut neutral_indices) = (Vec::new(), Vec::new());
    for (i, &d) in in_vocab.iter().enumerate() {
        if d {
            definition_indices.push(i);
        } else {
            neutral_indices.push(i);
        }
    }
    if definition_indices.is_empty() {
        return Err(Error::Config(format!(
            "none of the {} gender-definition words occur in the vocabulary",
            gender_list.len()
        )));
    }
    Ok(WordPartition {
        definition_indices,
        neutral_indices,
        missing: missing.len(),
    })
}

/// Unit-length copies of a fixed candidate set, for repeated cosine top-k queries.
#[derive(Debug, Clone)]
pub struct NeighborIndex {
    candidates: Vec<usize>,
    units: DenseMatrix,
}

impl NeighborIndex {
    pub fn new(set: &EmbeddingSet, candidates: &[usize]) -> Result<Self> {
        if let Some(&bad) = candidates.iter().find(|&&c| c >= set.len()) {
            return Err(Error::input(format!(
                "candidate index {bad} is outside the vocabulary of {} words",
                set.len()
            )));
        }
        let mut candidates = candidates.to_vec();
        candidates.sort_unstable();
        candidates.dedup();
        let units = unit_rows(set.vectors().select_rows(&candidates));
        Ok(Self { candidates, units })
    }

    pub fn candidates(&self) -> &[usize] {
        &self.candidates
    }

    /// The `k` candidates most cosine-similar to `query_vector`, skipping the
    /// vocabulary index `exclude`. Ties go to the lower vocabulary index.
    pub fn query(&self, query_vector: &[f64], exclude: Option<usize>, k: usize) -> Result<Vec<usize>> {
        let n = norm(query_vector);
        let q: Vec<f64> = if n < ZERO_NORM {
            vec![0.0; query_vector.len()]
        } else {
            query_vector.iter().map(|v| v / n).collect()
        };
        let mut scored: Vec<(f64, usize)> = self
            .candidates
            .iter()
            .enumerate()
            .filter(|&(_, &c)| Some(c) != exclude)
            .map(|(row, &c)| (dot(&q, self.units.row(row)), c))
            .collect();
        if k > scored.len() {
            return Err(Error::input(format!(
                "asked for {k} neighbors but only {} candidates are available",
                scored.len()
            )));
        }
        let by_rank = |a: &(f64, usize), b: &(f64, usize)| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1));
        if k < scored.len() && k > 0 {
            scored.select_nth_unstable_by(k - 1, by_rank);
        }
        scored.truncate(k);
        scored.sort_unstable_by(by_rank);
        Ok(scored.into_iter().map(|(_, c)| c).collect())
    }
}

/// Top-`k` members of `candidates` by cosine similarity to word `query_index`,
/// excluding the query itself; ties broken by ascending vocabulary index.
pub fn nearest_neighbors(
    set: &EmbeddingSet,
    query_index: usize,
    k: usize,
    candidates: &[usize],
) -> Result<Vec<usize>> {
    if query_index >= set.len() {
        return Err(Error::input(format!(
            "query index {query_index} is outside the vocabulary of {} words",
            set.len()
        )));
    }
    NeighborIndex::new(set, candidates)?.query(set.vector(query_index), Some(query_index), k)
}
