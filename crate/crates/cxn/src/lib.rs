//! File formats, the annotation pipeline and probe runs on top of `cxn-core`.

pub mod corpus;
pub mod lexicon_io;
pub mod pipeline;
pub mod provider;
pub mod records;
pub mod runner;
