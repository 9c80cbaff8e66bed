//! Gender debiasing of word embeddings by half-sibling regression, with the
//! bias and quality measurements used to evaluate it.
//!
//! The crate is organized bottom-up:
//!
//! - [`matrix`]: dense kernels (ridge solve, correlations, k-means, linear classifier)
//! - [`embedding`]: embedding sets, text I/O, vocabulary partition, nearest neighbors
//! - [`debias`]: half-sibling regression and the hard-debias baseline
//! - [`bias`]: direction and word-relation bias metrics, WEAT, SemBias
//! - [`quality`]: word-similarity and sentence-similarity benchmarks
//! - [`report`] and [`cli`]: JSON reports and the `hsr-debias` command line
//! - [`synthetic`]: embeddings with a planted gender component, for testing
//!
//! ```
//! use hsr_debias::debias::{hsr_debias, HsrConfig};
//! use hsr_debias::embedding::EmbeddingSet;
//!
//! let set = EmbeddingSet::from_pairs([
//!     ("he", [1.0, 0.2, 0.0]),
//!     ("she", [-1.0, 0.2, 0.0]),
//!     ("nurse", [-0.4, 0.1, 0.9]),
//! ])?;
//! let config = HsrConfig::new(vec!["he".into(), "she".into()]);
//! let out = hsr_debias(&set, &config)?;
//! assert_eq!(out.embeddings.vector_of("he")?, set.vector_of("he")?);
//! # Ok::<(), hsr_debias::Error>(())
//! ```

pub mod bias;
pub mod cli;
pub mod debias;
pub mod embedding;
pub mod error;
pub mod matrix;
pub mod quality;
pub mod report;
pub mod synthetic;

pub use error::{Error, Result};
