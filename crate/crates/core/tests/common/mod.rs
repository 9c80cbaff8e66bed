#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hsr_debias::embedding::save_embeddings;
use hsr_debias::synthetic::{planted_bias, PlantedBias, PlantedBiasConfig};

pub const BIN: &str = env!("CARGO_BIN_EXE_hsr-debias");

pub fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

pub fn path_str(p: &Path) -> &str {
    p.to_str().expect("utf-8 path")
}

/// Small planted-bias embedding plus one file of every dataset kind.
pub struct Fixture {
    pub dir: tempfile::TempDir,
    pub planted: PlantedBias,
    pub embeddings: PathBuf,
    pub gender_list: PathBuf,
    pub sembias: PathBuf,
    pub weat: PathBuf,
    pub professions: PathBuf,
    pub word_sim: PathBuf,
    pub sts: PathBuf,
}

impl Fixture {
    pub fn new() -> Self {
        let dir = tempfile::tempdir().unwrap();
        let planted = planted_bias(&PlantedBiasConfig {
            dim: 16,
            neutral_words: 400,
            seed: 11,
            ..Default::default()
        })
        .unwrap();
        let p = |name: &str| dir.path().join(name);

        let embeddings = p("vectors.txt");
        let mut buf = Vec::new();
        save_embeddings(&planted.set, &mut buf).unwrap();
        fs::write(&embeddings, buf).unwrap();

        let gender_list = p("gender.txt");
        fs::write(&gender_list, format!("# definition words\n{}\n", planted.gender_list.join("\n"))).unwrap();

        let sembias = p("sembias.tsv");
        fs::write(
            &sembias,
            "he she definition\tw0000 w0001 biased\tw0002 w0004 other\tw0003 w0005 other\n\
             w0006 w0007 biased\tking queen definition\tw0008 w0010 other\tw0009 w0011 other\tsubset\n\
             w0012 w0013 biased\tw0014 w0016 other\tman woman definition\tw0015 w0017 other\n",
        )
        .unwrap();

        let weat = p("career.txt");
        fs::write(
            &weat,
            "name: planted\n[targets_x]\nw0020\nw0022\nw0024\n[targets_y]\nw0021\nw0023\nw0025\n\
             [attributes_a]\nhe\nman\n[attributes_b]\nshe\nwoman\n",
        )
        .unwrap();

        let professions = p("professions.txt");
        let prof: Vec<String> = (30..60).map(|i| format!("w{i:04}")).collect();
        fs::write(&professions, prof.join("\n") + "\n").unwrap();

        let word_sim = p("simlex.txt");
        fs::write(&word_sim, "w0000\tw0002\t8.5\nw0000\tw0001\t1.0\nw0100\tw0102\t6.0\nw0003\tmissing\t2.0\n").unwrap();

        let sts = p("sts-2015-news.tsv");
        fs::write(
            &sts,
            "w0000 w0002\tw0004 w0006\t4.5\nW0001 w0003\tw0000\t1.0\nw0010 w0011\tw0012 w0013\t3.0\nw0040\tw0042 w0044\t4.0\n",
        )
        .unwrap();

        Self {
            dir,
            planted,
            embeddings,
            gender_list,
            sembias,
            weat,
            professions,
            word_sim,
            sts,
        }
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    /// Arguments for an `eval` run over every metric group and dataset.
    pub fn eval_args(&self, embeddings: &Path, out: &Path, seed: &str) -> Vec<String> {
        let mut args: Vec<String> = [
            "eval",
            "--embeddings",
            path_str(embeddings),
            "--original",
            path_str(&self.embeddings),
            "--gender-list",
            path_str(&self.gender_list),
            "--metrics",
            "direction,relation,quality",
            "--seed",
            seed,
            "--out",
            path_str(out),
            "--sembias",
            path_str(&self.sembias),
            "--professions",
            path_str(&self.professions),
            "--weat",
            path_str(&self.weat),
            "--word-sim",
            path_str(&self.word_sim),
            "--sts",
            path_str(&self.sts),
            "--biased-words",
            "60",
            "--neighbors",
            "10",
            "--classification-words",
            "150",
            "--classification-train",
            "50",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        args.push("--profession-counts".into());
        args.push(path_str(&out.with_extension("professions.tsv")).to_owned());
        args
    }
}
