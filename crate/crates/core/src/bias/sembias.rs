use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::debias::he_she_direction;
use crate::embedding::EmbeddingSet;
use crate::error::{Error, Result};
use crate::matrix::cosine_similarity;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PairTag {
    Definition,
    Biased,
    Other,
}

impl std::str::FromStr for PairTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "definition" => Ok(PairTag::Definition),
            "biased" => Ok(PairTag::Biased),
            "other" => Ok(PairTag::Other),
            _ => Err(Error::input(format!("unknown pair tag {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WordPair {
    pub a: String,
    pub b: String,
    pub tag: PairTag,
}

/// Four candidate pairs, exactly one of which is a gender-definition pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemBiasInstance {
    pub pairs: [WordPair; 4],
    /// Member of the held-out subset.
    pub subset: bool,
}

impl SemBiasInstance {
    pub fn new(pairs: [WordPair; 4], subset: bool) -> Result<Self> {
        let definitions = pairs.iter().filter(|p| p.tag == PairTag::Definition).count();
        if definitions != 1 {
            return Err(Error::input(format!(
                "an instance needs exactly one definition pair, found {definitions}"
            )));
        }
        Ok(Self { pairs, subset })
    }

    fn answer(&self) -> usize {
        self.pairs
            .iter()
            .position(|p| p.tag == PairTag::Definition)
            .expect("validated on construction")
    }
}

fn is_subset_marker(field: &str) -> Result<bool> {
    match field.trim() {
        "" | "0" | "false" | "train" => Ok(false),
        "1" | "true" | "subset" => Ok(true),
        other => Err(Error::input(format!("unrecognized subset marker {other:?}"))),
    }
}

/// Reads instances: four tab-separated `wordA wordB tag` fields per line and
/// an optional fifth field marking held-out subset membership (`subset`, `1`
/// or `true`). Lines starting with `#` are comments.
pub fn parse_sembias<R: BufRead>(reader: R) -> Result<Vec<SemBiasInstance>> {
    let mut out = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 4 && fields.len() != 5 {
            return Err(Error::parse(
                lineno,
                format!("expected 4 tab-separated pairs, found {} fields", fields.len()),
            ));
        }
        let mut pairs = Vec::with_capacity(4);
        for f in &fields[..4] {
            let parts: Vec<&str> = f.split_whitespace().collect();
            let [a, b, tag] = parts[..] else {
                return Err(Error::parse(lineno, format!("pair {f:?} is not \"wordA wordB tag\"")));
            };
            let tag = tag.parse().map_err(|e: Error| Error::parse(lineno, e.to_string()))?;
            pairs.push(WordPair {
                a: a.to_owned(),
                b: b.to_owned(),
                tag,
            });
        }
        let subset = match fields.get(4) {
            Some(f) => is_subset_marker(f).map_err(|e| Error::parse(lineno, e.to_string()))?,
            None => false,
        };
        let pairs: [WordPair; 4] = pairs.try_into().expect("four pairs");
        out.push(SemBiasInstance::new(pairs, subset).map_err(|e| Error::parse(lineno, e.to_string()))?);
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SemBiasOutcome {
    pub accuracy: f64,
    pub used: usize,
    /// Instances with at least one out-of-vocabulary word.
    pub skipped: usize,
}

/// For each instance, picks the pair whose difference `a − b` is most
/// cosine-aligned with `he − she` (first pair on ties) and reports how often
/// that is the definition pair.
pub fn sembias_eval(set: &EmbeddingSet, instances: &[SemBiasInstance]) -> Result<SemBiasOutcome> {
    let direction = he_she_direction(set)?;
    let (mut correct, mut used, mut skipped) = (0, 0, 0);
    'instances: for inst in instances {
        let mut best = (0, f64::NEG_INFINITY);
        for (k, pair) in inst.pairs.iter().enumerate() {
            let (Some(a), Some(b)) = (set.index_of(&pair.a), set.index_of(&pair.b)) else {
                skipped += 1;
                continue 'instances;
            };
            let diff: Vec<f64> = set.vector(a).iter().zip(set.vector(b)).map(|(x, y)| x - y).collect();
            let c = cosine_similarity(&diff, &direction)?;
            if c > best.1 {
                best = (k, c);
            }
        }
        used += 1;
        if best.0 == inst.answer() {
            correct += 1;
        }
    }
    if used == 0 {
        return Err(Error::input("no SemBias instance is fully in the vocabulary"));
    }
    Ok(SemBiasOutcome {
        accuracy: correct as f64 / used as f64,
        used,
        skipped,
    })
}
