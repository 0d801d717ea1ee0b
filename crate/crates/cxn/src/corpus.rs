//! Token-per-line corpus files.
//!
//! One token per line as `surface<TAB>lemma<TAB>POS`; lemma and tag may be
//! omitted or written `_`. A blank line ends a sentence and lines starting
//! with `#` are comments.

use cxn_core::matcher::{Pos, Token};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CorpusError {
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
}

pub fn parse_corpus(text: &str) -> Result<Vec<Vec<Token>>, CorpusError> {
    let mut out = Vec::new();
    let mut current: Vec<Token> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() {
            if !current.is_empty() {
                out.push(std::mem::take(&mut current));
            }
            continue;
        }
        if line.starts_with('#') {
            continue;
        }
        let cols: Vec<&str> = line.split('\t').collect();
        if cols.len() > 3 {
            return Err(CorpusError::Format {
                line: i + 1,
                message: format!("expected at most 3 columns, found {}", cols.len()),
            });
        }
        let surface = cols[0].trim();
        if surface.is_empty() {
            return Err(CorpusError::Format {
                line: i + 1,
                message: "empty surface form".into(),
            });
        }
        let col = |k: usize| {
            cols.get(k)
                .map(|c| c.trim())
                .filter(|c| !c.is_empty() && *c != "_")
        };
        let pos = match col(2) {
            Some(tag) => Some(tag.parse::<Pos>().map_err(|e| CorpusError::Format {
                line: i + 1,
                message: e.to_string(),
            })?),
            None => None,
        };
        current.push(Token::new(current.len(), surface, col(1), pos));
    }
    if !current.is_empty() {
        out.push(current);
    }
    Ok(out)
}

pub fn write_corpus(sentences: &[Vec<Token>]) -> String {
    let mut out = String::new();
    for s in sentences {
        for t in s {
            out.push_str(&format!("{}\t{}\t{}\n", t.surface, t.lemma, t.pos));
        }
        out.push('\n');
    }
    out
}
