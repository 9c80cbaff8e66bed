//! Embedding quality benchmarks: word similarity (Spearman against human
//! ratings) and sentence similarity with averaged word vectors (Pearson).

use std::collections::BTreeMap;
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::matrix::{cosine_similarity, norm, pearson, spearman, ZERO_NORM};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordPair {
    pub word1: String,
    pub word2: String,
    pub human_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WordPairDataset {
    pub name: String,
    pub entries: Vec<WordPair>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentencePair {
    pub sentence1: Vec<String>,
    pub sentence2: Vec<String>,
    pub human_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SentencePairDataset {
    pub name: String,
    pub entries: Vec<SentencePair>,
}

/// Yields `(line number, tab-separated fields)` of non-comment lines, checking
/// the field count and parsing the trailing score.
fn scored_rows<R: BufRead>(reader: R) -> impl Iterator<Item = Result<(usize, String, String, f64)>> {
    reader.lines().enumerate().filter_map(|(i, line)| {
        let lineno = i + 1;
        let line = match line {
            Ok(l) => l,
            Err(e) => return Some(Err(e.into())),
        };
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            return None;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            return Some(Err(Error::parse(
                lineno,
                format!("expected 3 tab-separated fields, found {}", fields.len()),
            )));
        }
        let score = match fields[2].trim().parse::<f64>() {
            Ok(v) if v.is_finite() => v,
            _ => return Some(Err(Error::parse(lineno, format!("bad score {:?}", fields[2])))),
        };
        Some(Ok((lineno, fields[0].to_owned(), fields[1].to_owned(), score)))
    })
}

/// Reads `word1<TAB>word2<TAB>score` lines; `#` lines are comments.
pub fn parse_word_pairs<R: BufRead>(reader: R, name: &str) -> Result<WordPairDataset> {
    let mut entries = Vec::new();
    for row in scored_rows(reader) {
        let (lineno, w1, w2, score) = row?;
        let (w1, w2) = (w1.trim(), w2.trim());
        if w1.is_empty() || w2.is_empty() {
            return Err(Error::parse(lineno, "empty word"));
        }
        entries.push(WordPair {
            word1: w1.to_owned(),
            word2: w2.to_owned(),
            human_score: score,
        });
    }
    if entries.is_empty() {
        return Err(Error::EmptyInput(format!("word-pair dataset {name} has no entries")));
    }
    Ok(WordPairDataset {
        name: name.to_owned(),
        entries,
    })
}

/// Reads `sentence1<TAB>sentence2<TAB>score` lines. Sentences are split on
/// whitespace and, when `lowercase` is set, lowercased.
pub fn parse_sentence_pairs<R: BufRead>(reader: R, name: &str, lowercase: bool) -> Result<SentencePairDataset> {
    let tokenize = |s: &str| -> Vec<String> {
        s.split_whitespace()
            .map(|t| if lowercase { t.to_lowercase() } else { t.to_owned() })
            .collect()
    };
    let mut entries = Vec::new();
    for row in scored_rows(reader) {
        let (lineno, s1, s2, score) = row?;
        let (sentence1, sentence2) = (tokenize(&s1), tokenize(&s2));
        if sentence1.is_empty() || sentence2.is_empty() {
            return Err(Error::parse(lineno, "empty sentence"));
        }
        entries.push(SentencePair {
            sentence1,
            sentence2,
            human_score: score,
        });
    }
    if entries.is_empty() {
        return Err(Error::EmptyInput(format!("sentence-pair dataset {name} has no entries")));
    }
    Ok(SentencePairDataset {
        name: name.to_owned(),
        entries,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WordSimilarityOutcome {
    pub spearman: f64,
    pub used: usize,
    pub skipped: usize,
}

/// Spearman correlation between pair cosines and human scores. Pairs with an
/// out-of-vocabulary word are skipped.
pub fn word_similarity_eval(set: &EmbeddingSet, data: &WordPairDataset) -> Result<WordSimilarityOutcome> {
    let mut model = Vec::new();
    let mut human = Vec::new();
    for e in &data.entries {
        if let (Some(a), Some(b)) = (set.index_of(&e.word1), set.index_of(&e.word2)) {
            model.push(cosine_similarity(set.vector(a), set.vector(b))?);
            human.push(e.human_score);
        }
    }
    if model.len() < 2 {
        return Err(Error::input(format!(
            "{}: only {} pairs are in the vocabulary",
            data.name,
            model.len()
        )));
    }
    Ok(WordSimilarityOutcome {
        spearman: spearman(&model, &human)?,
        used: model.len(),
        skipped: data.entries.len() - model.len(),
    })
}

/// Mean of the in-vocabulary token vectors; the zero vector when none are known.
pub fn sentence_embedding<S: AsRef<str>>(set: &EmbeddingSet, sentence: &[S]) -> Vec<f64> {
    let mut sum = vec![0.0; set.dim()];
    let mut count = 0usize;
    for tok in sentence {
        if let Some(i) = set.index_of(tok.as_ref()) {
            for (s, v) in sum.iter_mut().zip(set.vector(i)) {
                *s += v;
            }
            count += 1;
        }
    }
    if count > 0 {
        sum.iter_mut().for_each(|s| *s /= count as f64);
    }
    sum
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StsOutcome {
    /// Pearson correlation times 100.
    pub pearson_x100: f64,
    pub used: usize,
    pub skipped: usize,
}

/// Pearson correlation (x100) between cosines of averaged sentence vectors and
/// human scores. Pairs where both sentences embed to zero are skipped.
pub fn sts_eval(set: &EmbeddingSet, data: &SentencePairDataset) -> Result<StsOutcome> {
    let mut model = Vec::new();
    let mut human = Vec::new();
    for e in &data.entries {
        let u = sentence_embedding(set, &e.sentence1);
        let v = sentence_embedding(set, &e.sentence2);
        if norm(&u) < ZERO_NORM && norm(&v) < ZERO_NORM {
            continue;
        }
        model.push(cosine_similarity(&u, &v)?);
        human.push(e.human_score);
    }
    if model.len() < 2 {
        return Err(Error::input(format!(
            "{}: only {} sentence pairs are usable",
            data.name,
            model.len()
        )));
    }
    let r = pearson(&model, &human).map_err(|e| match e {
        Error::UndefinedCorrelation(m) => Error::input(format!("{}: {m}", data.name)),
        other => other,
    })?;
    Ok(StsOutcome {
        pearson_x100: 100.0 * r,
        used: model.len(),
        skipped: data.entries.len() - model.len(),
    })
}

/// Group key of a task name: its first run of four digits (the year), or the
/// whole name when it has none.
pub fn year_of(task: &str) -> String {
    let bytes = task.as_bytes();
    for start in 0..bytes.len().saturating_sub(3) {
        let run = &bytes[start..start + 4];
        let bounded = (start == 0 || !bytes[start - 1].is_ascii_digit())
            && bytes.get(start + 4).is_none_or(|b| !b.is_ascii_digit());
        if bounded && run.iter().all(u8::is_ascii_digit) {
            return task[start..start + 4].to_owned();
        }
    }
    task.to_owned()
}

/// Unweighted mean score per year, grouping tasks with [`year_of`].
pub fn yearly_average(results: &[(String, f64)]) -> Result<BTreeMap<String, f64>> {
    if results.is_empty() {
        return Err(Error::input("no STS results to average"));
    }
    let mut groups: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    for (task, score) in results {
        groups.entry(year_of(task)).or_default().push(*score);
    }
    Ok(groups
        .into_iter()
        .map(|(year, v)| (year, v.iter().sum::<f64>() / v.len() as f64))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Cursor;

    fn set() -> EmbeddingSet {
        EmbeddingSet::from_pairs([
            ("cat", [1.0, 0.0]),
            ("dog", [0.9, 0.1]),
            ("car", [0.0, 1.0]),
            ("bus", [0.2, 1.0]),
            ("sun", [0.7, 0.7]),
        ])
        .unwrap()
    }

    fn dataset(pairs: &[(&str, &str, f64)]) -> WordPairDataset {
        WordPairDataset {
            name: "toy".into(),
            entries: pairs
                .iter()
                .map(|&(a, b, s)| WordPair {
                    word1: a.into(),
                    word2: b.into(),
                    human_score: s,
                })
                .collect(),
        }
    }

    #[test]
    fn scores_equal_to_cosines_give_one() {
        let s = set();
        let pairs = [("cat", "dog"), ("cat", "car"), ("car", "bus"), ("sun", "bus")];
        let cos = |a: &str, b: &str| cosine_similarity(s.vector_of(a).unwrap(), s.vector_of(b).unwrap()).unwrap();
        let data = dataset(&pairs.map(|(a, b)| (a, b, cos(a, b))));
        assert!((word_similarity_eval(&s, &data).unwrap().spearman - 1.0).abs() < 1e-12);
        let data = dataset(&pairs.map(|(a, b)| (a, b, -cos(a, b))));
        assert!((word_similarity_eval(&s, &data).unwrap().spearman + 1.0).abs() < 1e-12);
    }

    #[test]
    fn oov_pairs_are_counted() {
        let data = dataset(&[("cat", "dog", 9.0), ("cat", "zebra", 5.0), ("car", "bus", 8.0), ("cat", "car", 1.0)]);
        let out = word_similarity_eval(&set(), &data).unwrap();
        assert_eq!((out.used, out.skipped), (3, 1));
        let data = dataset(&[("cat", "dog", 9.0), ("x", "y", 5.0)]);
        assert!(word_similarity_eval(&set(), &data).is_err());
    }

    #[test]
    fn sentence_embedding_cases() {
        let s = set();
        assert_eq!(sentence_embedding(&s, &["cat"]), vec![1.0, 0.0]);
        assert_eq!(sentence_embedding(&s, &["cat", "car"]), vec![0.5, 0.5]);
        assert_eq!(sentence_embedding(&s, &["cat", "qq", "car"]), vec![0.5, 0.5]);
        let zero = sentence_embedding(&s, &["qq", "zz"]);
        assert_eq!(zero, vec![0.0, 0.0]);
        assert_eq!(cosine_similarity(&zero, &[1.0, 1.0]).unwrap(), 0.0);
    }

    #[test]
    fn sts_three_pairs_by_hand() {
        // cosines: (cat, dog) → c1, (cat, car) → 0, (car, bus) → c3
        let s = set();
        let text = "cat\tdog\t4\ncat\tcar\t1\ncar\tbus\t3\n";
        let data = parse_sentence_pairs(Cursor::new(text), "toy", true).unwrap();
        let out = sts_eval(&s, &data).unwrap();
        let c1 = 0.9 / (0.82_f64).sqrt();
        let c3 = 1.0 / (1.04_f64).sqrt();
        let x = [c1, 0.0, c3];
        let y = [4.0, 1.0, 3.0];
        let (mx, my) = (x.iter().sum::<f64>() / 3.0, y.iter().sum::<f64>() / 3.0);
        let sxy: f64 = x.iter().zip(&y).map(|(a, b)| (a - mx) * (b - my)).sum();
        let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
        let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
        let expected = 100.0 * sxy / (sxx * syy).sqrt();
        assert!((out.pearson_x100 - expected).abs() < 1e-10, "{} vs {expected}", out.pearson_x100);
    }

    #[test]
    fn sts_affine_scores_give_hundred_and_skip_empty_pairs() {
        let s = set();
        let text = "cat\tdog\t0\ncat\tcar\t0\nsun\tbus\t0\nqq\tzz\t0\nCAT\tqq\t0\n";
        let mut data = parse_sentence_pairs(Cursor::new(text), "toy", true).unwrap();
        for e in &mut data.entries {
            let c = cosine_similarity(&sentence_embedding(&s, &e.sentence1), &sentence_embedding(&s, &e.sentence2)).unwrap();
            e.human_score = 3.0 * c + 1.0;
        }
        let out = sts_eval(&s, &data).unwrap();
        assert!((out.pearson_x100 - 100.0).abs() < 1e-10);
        assert_eq!((out.used, out.skipped), (4, 1));
    }

    #[test]
    fn lowercasing_is_optional() {
        let data = parse_sentence_pairs(Cursor::new("The Cat\tA dog\t1\n"), "t", false).unwrap();
        assert_eq!(data.entries[0].sentence1, vec!["The", "Cat"]);
        let data = parse_sentence_pairs(Cursor::new("The Cat\tA dog\t1\n"), "t", true).unwrap();
        assert_eq!(data.entries[0].sentence1, vec!["the", "cat"]);
        assert!(parse_sentence_pairs(Cursor::new("a\tb\n"), "t", true).is_err());
        assert!(parse_word_pairs(Cursor::new("# only comments\n"), "t").is_err());
    }

    #[test]
    fn yearly_grouping() {
        let r = |v: &[(&str, f64)]| v.iter().map(|&(n, s)| (n.to_string(), s)).collect::<Vec<_>>();
        let single = yearly_average(&r(&[("STS2015.images", 70.0)])).unwrap();
        assert_eq!(single["2015"], 70.0);
        let two = yearly_average(&r(&[("STS2014.a", 40.0), ("STS2014.b", 60.0)])).unwrap();
        assert_eq!(two["2014"], 50.0);
        let five = yearly_average(&r(&[
            ("STS2012.MSRpar", 40.0),
            ("STS2012.MSRvid", 60.0),
            ("STS2012.SMTeuroparl", 50.0),
            ("STS2013.FNWN", 30.0),
            ("STS2013.headlines", 70.0),
        ]))
        .unwrap();
        assert_eq!(five.len(), 2);
        assert_eq!(five["2012"], 50.0);
        assert_eq!(five["2013"], 50.0);
        assert_eq!(year_of("SICK"), "SICK");
        assert_eq!(year_of("task-20150"), "task-20150");
        assert!(yearly_average(&[]).is_err());
    }
}
