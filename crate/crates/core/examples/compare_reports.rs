//! Builds one report per method and merges them into a comparison table.

use hsr_debias::bias::{gbwr_clustering, mean_abs_projection_bias, select_biased_words, ProjectionMode};
use hsr_debias::cli::compare_reports;
use hsr_debias::debias::{debias, HsrConfig, Method};
use hsr_debias::embedding::partition;
use hsr_debias::report::{BiasReport, GBWR_PURITY, PROJECTION_BIAS};
use hsr_debias::synthetic::{planted_bias, PlantedBiasConfig};

fn main() -> hsr_debias::Result<()> {
    let planted = planted_bias(&PlantedBiasConfig {
        neutral_words: 600,
        dim: 20,
        ..Default::default()
    })?;
    let part = partition(&planted.set, &planted.gender_list)?;
    let lists = select_biased_words(&planted.set, &part, 100)?;
    let config = HsrConfig::new(planted.gender_list.clone());

    let mut reports = Vec::new();
    for method in [Method::None, Method::Hard, Method::Hsr] {
        let set = debias(&planted.set, &config, method)?.embeddings;
        let mut report = BiasReport::new(method.as_str());
        report.insert_scalar(PROJECTION_BIAS, mean_abs_projection_bias(&set, &lists, ProjectionMode::Raw)?.value)?;
        report.insert_scalar(GBWR_PURITY, gbwr_clustering(&set, &lists, 42)?)?;
        reports.push(report);
    }
    let (table, warnings) = compare_reports(&reports);
    print!("{table}");
    for w in warnings {
        eprintln!("warning: {w}");
    }
    println!("\n{}", reports[2].to_json()?);
    Ok(())
}
