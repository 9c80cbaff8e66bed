//! Word-similarity and sentence-similarity benchmarks on inline data.

use std::io::Cursor;

use hsr_debias::embedding::load_embeddings;
use hsr_debias::quality::{parse_sentence_pairs, parse_word_pairs, sts_eval, word_similarity_eval, yearly_average};

const VECTORS: &str = "\
cat 0.9 0.1 0.0
dog 0.8 0.2 0.1
car 0.1 0.9 0.2
truck 0.2 0.8 0.3
runs 0.3 0.3 0.9
drives 0.2 0.5 0.8
";

fn main() -> hsr_debias::Result<()> {
    let set = load_embeddings(Cursor::new(VECTORS))?;

    let pairs = parse_word_pairs(
        Cursor::new("cat\tdog\t9.0\ncar\ttruck\t8.5\ncat\tcar\t1.5\ndog\ttruck\t2.0\ncat\tunicorn\t5.0\n"),
        "toy-sim",
    )?;
    let ws = word_similarity_eval(&set, &pairs)?;
    println!("{}: spearman = {:.3} ({} pairs, {} skipped)", pairs.name, ws.spearman, ws.used, ws.skipped);

    let mut results = Vec::new();
    for (name, text) in [
        ("sts-2014-toy", "The cat runs\tthe dog runs\t4.5\nthe car drives\tthe cat runs\t1.0\na truck drives\tthe car drives\t4.0\n"),
        ("sts-2015-toy", "cat\tdog\t4.0\ncat\ttruck\t0.5\ndog runs\tcar drives\t2.0\n"),
    ] {
        let data = parse_sentence_pairs(Cursor::new(text), name, true)?;
        let out = sts_eval(&set, &data)?;
        println!("{name}: pearson x100 = {:.2} ({} pairs)", out.pearson_x100, out.used);
        results.push((name.to_string(), out.pearson_x100));
    }
    for (year, avg) in yearly_average(&results)? {
        println!("year {year}: {avg:.2}");
    }
    Ok(())
}
