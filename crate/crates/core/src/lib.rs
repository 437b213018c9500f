//! Mining truly parallel sentence pairs from topic-aligned comparable corpora.
//!
//! The pipeline turns bilingual document pairs (crawled from a wiki or loaded
//! from fixtures) into a filtered parallel corpus:
//!
//! 1. [`corpus`] — crawl topic-related article pairs and strip them to plain text;
//! 2. [`text`] — sentence segmentation, tokenization, stopwords, synonyms;
//! 3. [`align`] — two-pass length + dictionary sentence alignment;
//! 4. [`translate`] — produce an intermediate translation of every source line;
//! 5. [`filter`] — tiered similarity filtering of translation/target line pairs,
//!    which also recovers reorderings the monotone aligner cannot express;
//! 6. [`metrics`] — BLEU/NIST/METEOR/TER for evaluating plugged-in engines;
//! 7. [`word_align`] — grow-diag-final-and symmetrization and reordering
//!    orientation classification;
//! 8. [`pipeline`] — orchestration, reporting, and the bootstrap loop.

pub mod align;
pub mod corpus;
pub mod error;
pub mod filter;
pub mod lang;
pub mod metrics;
pub mod pipeline;
pub mod seqmatch;
pub mod text;
pub mod translate;
pub mod word_align;

pub use error::{Error, Result};
pub use lang::LangCode;
