//! Cosine nearest neighbors of every word in a small vocabulary.

use hsr_debias::embedding::{nearest_neighbors, EmbeddingSet};

fn main() -> hsr_debias::Result<()> {
    let set = EmbeddingSet::from_pairs([
        ("king", [0.9, 0.8, 0.1]),
        ("queen", [0.9, 0.1, 0.8]),
        ("man", [0.3, 0.9, 0.1]),
        ("woman", [0.3, 0.1, 0.9]),
        ("crown", [1.0, 0.4, 0.4]),
        ("apple", [0.0, 0.5, 0.5]),
    ])?;
    let all: Vec<usize> = (0..set.len()).collect();
    for q in 0..set.len() {
        let names: Vec<&str> = nearest_neighbors(&set, q, 3, &all)?
            .into_iter()
            .map(|i| set.word(i))
            .collect();
        println!("{:<6} -> {}", set.word(q), names.join(", "));
    }
    Ok(())
}
