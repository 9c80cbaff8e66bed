//! Direction and word-relation bias metrics before and after debiasing.

use hsr_debias::bias::{
    gbwr_classification, gbwr_clustering, gbwr_correlation, mean_abs_projection_bias, select_biased_words,
    ClassificationSplit, ProjectionMode, RelationOptions,
};
use hsr_debias::debias::{debias, HsrConfig, Method};
use hsr_debias::embedding::partition;
use hsr_debias::synthetic::{planted_bias, PlantedBiasConfig};

fn main() -> hsr_debias::Result<()> {
    let planted = planted_bias(&PlantedBiasConfig {
        dim: 30,
        neutral_words: 1200,
        ..Default::default()
    })?;
    let original = &planted.set;
    let part = partition(original, &planted.gender_list)?;
    let lists = select_biased_words(original, &part, 200)?;
    let options = RelationOptions {
        neighbors: 50,
        ..Default::default()
    };
    let split = ClassificationSplit {
        per_gender: 400,
        train_per_gender: 100,
    };
    let config = HsrConfig::new(planted.gender_list.clone()).with_alpha(0.0);

    println!("method  projection  purity  correlation  classification");
    for method in [Method::None, Method::Hard, Method::Hsr] {
        let set = debias(original, &config, method)?.embeddings;
        println!(
            "{:<7} {:>10.4}  {:>6.3}  {:>11.3}  {:>14.3}",
            method,
            mean_abs_projection_bias(&set, &lists, ProjectionMode::Raw)?.value,
            gbwr_clustering(&set, &lists, 1)?,
            gbwr_correlation(&set, &lists, original, &options)?,
            gbwr_classification(&set, &part, original, 2, &split)?.accuracy,
        );
    }
    Ok(())
}
