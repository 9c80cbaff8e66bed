//! Word Embedding Association Test from a spec file, with exact and sampled
//! permutation p-values.

use std::io::Cursor;

use hsr_debias::bias::{parse_weat_spec, weat_test_with, PermutationMode};
use hsr_debias::embedding::load_embeddings;

const VECTORS: &str = "\
engineer 0.9 0.1 0.2
scientist 0.8 0.2 0.1
doctor 0.7 0.3 0.3
nurse 0.1 0.9 0.2
dancer 0.2 0.8 0.1
teacher 0.3 0.7 0.3
he 1.0 0.0 0.1
man 0.9 0.1 0.0
she 0.0 1.0 0.1
woman 0.1 0.9 0.0
";

const SPEC: &str = "\
name: occupations
[targets_x]
engineer
scientist
doctor
[targets_y]
nurse
dancer
teacher
[attributes_a]
he
man
[attributes_b]
she
woman
";

fn main() -> hsr_debias::Result<()> {
    let set = load_embeddings(Cursor::new(VECTORS))?;
    let spec = parse_weat_spec(Cursor::new(SPEC), "weat")?;
    let exact = weat_test_with(&set, &spec, 0, PermutationMode::Exact)?;
    let sampled = weat_test_with(&set, &spec, 0, PermutationMode::Sampled(10_000))?;
    println!("{}: statistic = {:.4}, effect size = {:.3}", spec.name, exact.statistic, exact.effect_size);
    println!("exact p   = {:.4} over {} partitions", exact.p_value, exact.partitions);
    println!("sampled p = {:.4} over {} partitions", sampled.p_value, sampled.partitions);
    Ok(())
}
