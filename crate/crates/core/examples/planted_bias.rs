//! Plants a gender component in synthetic vectors and removes it with
//! half-sibling regression and with hard debiasing.

use hsr_debias::bias::gbwr_clustering;
use hsr_debias::debias::{hard_debias, hsr_debias, HsrConfig};
use hsr_debias::embedding::partition;
use hsr_debias::matrix::cosine_similarity;
use hsr_debias::synthetic::{planted_bias, PlantedBiasConfig};

fn main() -> hsr_debias::Result<()> {
    let planted = planted_bias(&PlantedBiasConfig::default())?;
    let set = &planted.set;
    let part = partition(set, &planted.gender_list)?;
    let lists = planted.planted_lists(500)?;
    println!(
        "{} words, dim {}, {} definition words",
        set.len(),
        set.dim(),
        part.definition_indices.len()
    );

    let max_cos = |s: &hsr_debias::embedding::EmbeddingSet| -> hsr_debias::Result<f64> {
        let mut m = 0.0f64;
        for &i in &part.neutral_indices {
            m = m.max(cosine_similarity(s.vector(i), &planted.direction)?.abs());
        }
        Ok(m)
    };

    println!("original: max |cos(v, g)| = {:.3}, purity = {}", max_cos(set)?, gbwr_clustering(set, &lists, 42)?);
    for alpha in [0.0, 60.0] {
        let out = hsr_debias(set, &HsrConfig::new(planted.gender_list.clone()).with_alpha(alpha))?;
        println!(
            "hsr α={alpha:<4}: max |cos(v, g)| = {:.2e}, purity = {:.3}, ‖Ĝ‖ = {:.2}",
            max_cos(&out.embeddings)?,
            gbwr_clustering(&out.embeddings, &lists, 42)?,
            out.gender_norm
        );
    }
    let hard = hard_debias(set, &HsrConfig::new(planted.gender_list.clone()))?;
    println!(
        "hard      : max |cos(v, g)| = {:.2e}, purity = {:.3}",
        max_cos(&hard.embeddings)?,
        gbwr_clustering(&hard.embeddings, &lists, 42)?
    );
    Ok(())
}
