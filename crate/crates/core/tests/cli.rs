mod common;

use std::fs;

use hsr_debias::embedding::load_embeddings;
use hsr_debias::report::BiasReport;

use common::{path_str, run, Fixture};

fn debias(fx: &Fixture, method: &str, out: &str, extra: &[&str]) -> std::process::Output {
    let out = fx.path(out);
    let mut args = vec![
        "debias",
        "--embeddings",
        path_str(&fx.embeddings),
        "--gender-list",
        path_str(&fx.gender_list),
        "--method",
        method,
        "--out",
        path_str(&out),
    ];
    args.extend_from_slice(extra);
    run(&args)
}

fn read_report(path: &std::path::Path) -> BiasReport {
    BiasReport::from_json(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn debias_keeps_vocabulary_and_writes_sidecar() {
    let fx = Fixture::new();
    let out = debias(&fx, "hsr", "hsr.txt", &["--alpha", "0"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let set = load_embeddings(fs::File::open(fx.path("hsr.txt")).map(std::io::BufReader::new).unwrap()).unwrap();
    assert_eq!(set.words(), fx.planted.set.words());
    for w in &fx.planted.gender_list {
        assert_eq!(set.vector_of(w).unwrap(), fx.planted.set.vector_of(w).unwrap());
    }
    let meta: serde_json::Value = serde_json::from_str(&fs::read_to_string(fx.path("hsr.txt.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["method"], "hsr");
    assert_eq!(meta["alpha"], 0.0);
    assert_eq!(meta["definition_words"], 10);
}

#[test]
fn hard_debiased_embedding_has_zero_projection_bias() {
    let fx = Fixture::new();
    assert!(debias(&fx, "hard", "hard.txt", &[]).status.success());
    let report_path = fx.path("hard.json");
    let out = run(&[
        "eval",
        "--embeddings",
        path_str(&fx.path("hard.txt")),
        "--original",
        path_str(&fx.embeddings),
        "--gender-list",
        path_str(&fx.gender_list),
        "--metrics",
        "direction",
        "--biased-words",
        "50",
        "--out",
        path_str(&report_path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_report(&report_path);
    assert_eq!(report.method, "hard");
    assert!(report.scalar("projection_bias").unwrap() <= 1e-10);

    let orig_path = fx.path("orig.json");
    let out = run(&[
        "eval",
        "--embeddings",
        path_str(&fx.embeddings),
        "--gender-list",
        path_str(&fx.gender_list),
        "--metrics",
        "direction",
        "--biased-words",
        "50",
        "--out",
        path_str(&orig_path),
    ]);
    assert!(out.status.success());
    let orig = read_report(&orig_path);
    assert_eq!(orig.method, "none");
    assert!(orig.scalar("projection_bias").unwrap() > 1.0);
}

#[test]
fn negative_alpha_is_rejected_without_output() {
    let fx = Fixture::new();
    let out = debias(&fx, "hsr", "neg.txt", &["--alpha", "-1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("alpha"));
    assert!(!fx.path("neg.txt").exists());
}

#[test]
fn unknown_gender_list_is_an_error() {
    let fx = Fixture::new();
    fs::write(fx.path("none.txt"), "nobody\nnoone\n").unwrap();
    let out = run(&[
        "debias",
        "--embeddings",
        path_str(&fx.embeddings),
        "--gender-list",
        path_str(&fx.path("none.txt")),
        "--out",
        path_str(&fx.path("x.txt")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!fx.path("x.txt").exists());
    assert!(!fx.path("x.txt.meta.json").exists());
}

#[test]
fn missing_dataset_fails_before_computing() {
    let fx = Fixture::new();
    let report_path = fx.path("r.json");
    let out = run(&[
        "eval",
        "--embeddings",
        path_str(&fx.embeddings),
        "--metrics",
        "quality",
        "--word-sim",
        "/nonexistent/wordsim.txt",
        "--out",
        path_str(&report_path),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/wordsim.txt"));
    assert!(!report_path.exists());
}

#[test]
fn quality_metrics_need_no_gender_list() {
    let fx = Fixture::new();
    let report_path = fx.path("q.json");
    let out = run(&[
        "eval",
        "--embeddings",
        path_str(&fx.embeddings),
        "--metrics",
        "quality",
        "--word-sim",
        path_str(&fx.word_sim),
        "--sts",
        path_str(&fx.sts),
        "--out",
        path_str(&report_path),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let report = read_report(&report_path);
    assert_eq!(report.counts["wordsim:simlex:used"], 3);
    assert_eq!(report.counts["wordsim:simlex:skipped"], 1);
    // Three in-vocabulary pairs: Spearman is the Pearson correlation of ranks.
    let set = &fx.planted.set;
    let cos = |a: &str, b: &str| {
        let (u, v) = (set.vector_of(a).unwrap(), set.vector_of(b).unwrap());
        let d: f64 = u.iter().zip(v).map(|(x, y)| x * y).sum();
        d / (u.iter().map(|x| x * x).sum::<f64>().sqrt() * v.iter().map(|x| x * x).sum::<f64>().sqrt())
    };
    let model = [cos("w0000", "w0002"), cos("w0000", "w0001"), cos("w0100", "w0102")];
    let rank = |xs: &[f64], i: usize| xs.iter().filter(|x| **x < xs[i]).count() as f64;
    let model_ranks: Vec<f64> = (0..3).map(|i| rank(&model, i)).collect();
    let human_ranks = [2.0, 0.0, 1.0];
    let centered = |r: &[f64]| r.iter().map(|x| x - 1.0).collect::<Vec<f64>>();
    let (a, b) = (centered(&model_ranks), centered(&human_ranks));
    let expected = a.iter().zip(&b).map(|(x, y)| x * y).sum::<f64>() / 2.0;
    assert!((report.scalar("wordsim:simlex").unwrap() - expected).abs() < 1e-12);
    assert!(report.metrics.contains_key("sts:sts-2015-news"));
    assert_eq!(report.scalar("sts_year:2015"), report.scalar("sts:sts-2015-news"));
    assert!(!report.metrics.contains_key("projection_bias"));
}

#[test]
fn failing_metric_is_reported_and_sets_exit_status() {
    let fx = Fixture::new();
    fs::write(fx.path("oov.tsv"), "zz yy definition\tw0000 w0001 biased\tw0002 w0004 other\tw0003 w0005 other\n").unwrap();
    let report_path = fx.path("e.json");
    let out = run(&[
        "eval",
        "--embeddings",
        path_str(&fx.embeddings),
        "--gender-list",
        path_str(&fx.gender_list),
        "--metrics",
        "direction",
        "--biased-words",
        "50",
        "--sembias",
        path_str(&fx.path("oov.tsv")),
        "--out",
        path_str(&report_path),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let report = read_report(&report_path);
    assert!(report.errors.contains_key("sembias_acc"));
    assert!(report.metrics.contains_key("projection_bias"));
}

#[test]
fn eval_is_deterministic_and_seed_is_recorded() {
    let fx = Fixture::new();
    let mut bytes = Vec::new();
    for (name, seed) in [("a.json", "7"), ("b.json", "7")] {
        let path = fx.path(name);
        let args = fx.eval_args(&fx.embeddings, &path, seed);
        let args: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = run(&args);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        bytes.push(fs::read(&path).unwrap());
    }
    assert_eq!(bytes[0], bytes[1]);
    let report = read_report(&fx.path("a.json"));
    assert_eq!(report.provenance["seed"], "7");
    assert!(fs::read_to_string(fx.path("a.professions.tsv"))
        .unwrap()
        .starts_with("profession\tmale_neighbors\toriginal_bias\n"));
}

#[test]
fn compare_merges_reports() {
    let fx = Fixture::new();
    let mut a = BiasReport::new("hsr");
    a.insert_scalar("gbwr_purity", 0.5).unwrap();
    a.insert_scalar("projection_bias", 0.25).unwrap();
    let mut b = BiasReport::new("hard");
    b.insert_scalar("gbwr_purity", 0.75).unwrap();
    fs::write(fx.path("a.json"), a.to_json().unwrap()).unwrap();
    fs::write(fx.path("b.json"), b.to_json().unwrap()).unwrap();

    let out = run(&["compare", path_str(&fx.path("b.json")), path_str(&fx.path("a.json"))]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "metric\thard\thsr\ngbwr_purity\t0.75\t0.5\nprojection_bias\t\t0.25\n"
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));

    let table = fx.path("t.tsv");
    let out = run(&[
        "compare",
        path_str(&fx.path("a.json")),
        path_str(&fx.path("a.json")),
        "--out",
        path_str(&table),
    ]);
    assert!(out.status.success());
    assert!(out.stderr.is_empty());
    assert!(fs::read_to_string(&table).unwrap().starts_with("metric\thsr\thsr#2\n"));
}

#[test]
fn compare_rejects_malformed_report() {
    let fx = Fixture::new();
    fs::write(fx.path("bad.json"), "{not json").unwrap();
    fs::write(fx.path("ok.json"), BiasReport::new("none").to_json().unwrap()).unwrap();
    let out = run(&["compare", path_str(&fx.path("ok.json")), path_str(&fx.path("bad.json"))]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn vocab_cap_truncates_output() {
    let fx = Fixture::new();
    assert!(debias(&fx, "hsr", "cap.txt", &["--vocab-cap", "50"]).status.success());
    let text = fs::read_to_string(fx.path("cap.txt")).unwrap();
    assert_eq!(text.lines().count(), 50);
}
