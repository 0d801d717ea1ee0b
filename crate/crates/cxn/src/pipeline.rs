//! The work behind each subcommand, over in-memory values.

use std::collections::BTreeMap;

use cxn_core::graph::{
    idiomatic_graph, literal_graph, refine, segmentation_fits, serialize_graph, Source,
};
use cxn_core::matcher::{annotate, Token};
use cxn_core::model::{Lexicon, MorphSlotKind, Roleset};
use cxn_core::morph::{reattach_detached, segment_verb_word, stem_analyze, Segmentation};
use cxn_core::probe::{Probe, Transcript};
use cxn_core::Diagnostic;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;

use crate::records::{
    to_refinement, GraphInput, GraphRec, ParseRec, RefineRec, SentenceRec, WordRec,
};

#[derive(Debug, Error)]
pub enum JsonlError {
    #[error("line {line}: {message}")]
    Line { line: usize, message: String },
}

pub fn read_jsonl<T: DeserializeOwned>(text: &str) -> Result<Vec<T>, JsonlError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| JsonlError::Line {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}

pub fn write_jsonl<T: Serialize>(items: &[T]) -> String {
    let mut out = String::new();
    for item in items {
        out.push_str(&serde_json::to_string(item).expect("records always serialize"));
        out.push('\n');
    }
    out
}

fn pool(jobs: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .expect("thread pool")
}

/// Applies a gap-limit override to every construction.
pub fn with_gap_limit(lexicon: &Lexicon, gap_limit: Option<usize>) -> Lexicon {
    let mut lex = lexicon.clone();
    if let Some(g) = gap_limit {
        for c in lex.constructions.values_mut() {
            c.gap_limit = g;
        }
    }
    lex
}

pub fn annotate_corpus(
    lexicon: &Lexicon,
    sentences: &[Vec<Token>],
    jobs: usize,
) -> Vec<SentenceRec> {
    pool(jobs).install(|| {
        sentences
            .par_iter()
            .enumerate()
            .map(|(i, s)| SentenceRec::new(i, s, &annotate(lexicon, s).matches))
            .collect()
    })
}

fn stem_of(seg: &Segmentation, lexicon: &Lexicon) -> Vec<cxn_core::morph::StemAnalysis> {
    seg.piece_by_kind(MorphSlotKind::Stem)
        .and_then(|p| stem_analyze(&p.entry.bare_form(), lexicon).ok())
        .unwrap_or_default()
}

fn segment_line(
    lexicon: &Lexicon,
    template: &cxn_core::model::MorphTemplate,
    line_no: usize,
    line: &str,
) -> Vec<WordRec> {
    let words: Vec<&str> = line.split_whitespace().collect();
    let (logical, diags) = reattach_detached(&words, lexicon);
    logical
        .iter()
        .enumerate()
        .map(|(k, lw)| {
            let word = lw.with_initial_change();
            let mut diagnostics: Vec<Diagnostic> = diags
                .iter()
                .filter(|d| lw.sources.iter().any(|s| d.path == format!("/words/{s}")))
                .cloned()
                .collect();
            let (parses, error) = match segment_verb_word(&word, lexicon, template) {
                Ok(segs) => (
                    segs.iter()
                        .map(|s| ParseRec::new(s, &stem_of(s, lexicon)))
                        .collect(),
                    None,
                ),
                Err(e) => (Vec::new(), Some(e.to_string())),
            };
            for d in &mut diagnostics {
                d.path = format!("/lines/{line_no}{}", d.path);
            }
            WordRec {
                id: format!("l{line_no}-w{k}"),
                line: line_no,
                sources: lw.sources.iter().map(|&s| words[s].to_string()).collect(),
                word,
                parses,
                error,
                diagnostics,
            }
        })
        .collect()
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SegmentSetupError {
    #[error("the lexicon has no verb-word template{}", .0.as_ref().map(|t| format!(" named `{t}`")).unwrap_or_default())]
    NoTemplate(Option<String>),
}

/// One record per logical verb word; each input line is one sentence whose
/// detached preverbs are put back before segmenting.
pub fn segment_text(
    lexicon: &Lexicon,
    text: &str,
    template_id: Option<&str>,
    jobs: usize,
) -> Result<Vec<WordRec>, SegmentSetupError> {
    let template = lexicon
        .template(template_id)
        .ok_or_else(|| SegmentSetupError::NoTemplate(template_id.map(str::to_string)))?;
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.trim_start().starts_with('#'))
        .collect();
    let nested: Vec<Vec<WordRec>> = pool(jobs).install(|| {
        lines
            .par_iter()
            .map(|(i, l)| segment_line(lexicon, template, *i, l))
            .collect()
    });
    Ok(nested.into_iter().flatten().collect())
}

fn graph_pair(
    id: &str,
    roleset: &Roleset,
    lexicon: &Lexicon,
    source: Source<'_>,
    refinements: &BTreeMap<String, RefineRec>,
) -> GraphRec {
    let mut diagnostics = Vec::new();
    let path = format!("/graphs/{id}");
    let refine_for = refinements.get(id);
    let literal = match literal_graph(source, roleset, lexicon) {
        Ok(mut g) => {
            if let Some(r) = refine_for {
                refine(&mut g, &to_refinement(&r.literal));
            }
            Some(serialize_graph(&g))
        }
        Err(e) => {
            diagnostics.push(Diagnostic::error(
                "GRAPH_LITERAL",
                path.as_str(),
                e.to_string(),
            ));
            None
        }
    };
    let idiomatic = match &roleset.mapping {
        None => None,
        Some(_) => match idiomatic_graph(source, roleset, lexicon) {
            Ok(mut g) => {
                if let Some(r) = refine_for {
                    refine(&mut g, &to_refinement(&r.idiomatic));
                }
                Some(serialize_graph(&g))
            }
            Err(e) => {
                diagnostics.push(Diagnostic::error(
                    "GRAPH_IDIOMATIC",
                    path.as_str(),
                    e.to_string(),
                ));
                None
            }
        },
    };
    GraphRec {
        match_id: id.to_string(),
        roleset: roleset.predicate_id.clone(),
        literal,
        idiomatic,
        diagnostics,
    }
}

/// Literal and idiomatic graphs for every match and every verb word whose
/// best parse realizes an MWE roleset's fixed morphs.
pub fn graph_records(
    lexicon: &Lexicon,
    inputs: &[GraphInput],
    refinements: &BTreeMap<String, RefineRec>,
) -> Result<Vec<GraphRec>, String> {
    let mut out = Vec::new();
    for input in inputs {
        match input {
            GraphInput::Sentence(rec) => {
                let tokens = rec.tokens()?;
                for m in &rec.matches {
                    let span = m.span()?;
                    if span.assignments.iter().any(|(_, r)| r.end >= tokens.len()) {
                        return Err(format!("{}: span outside the sentence", m.id));
                    }
                    let Some(roleset) = lexicon.rolesets.get(&m.roleset) else {
                        out.push(GraphRec {
                            match_id: m.id.clone(),
                            roleset: m.roleset.clone(),
                            literal: None,
                            idiomatic: None,
                            diagnostics: vec![Diagnostic::error(
                                "GRAPH_ROLESET_UNKNOWN",
                                format!("/graphs/{}", m.id),
                                format!("roleset `{}` is not in the lexicon", m.roleset),
                            )],
                        });
                        continue;
                    };
                    let source = Source::Match {
                        span: &span,
                        sentence: &tokens,
                    };
                    out.push(graph_pair(&m.id, roleset, lexicon, source, refinements));
                }
            }
            GraphInput::Word(rec) => {
                let Some(template) = lexicon.template(None) else {
                    continue;
                };
                let Ok(segs) = segment_verb_word(&rec.word, lexicon, template) else {
                    continue;
                };
                let best = &segs[0];
                for roleset in lexicon
                    .rolesets
                    .values()
                    .filter(|r| segmentation_fits(best, r))
                {
                    out.push(graph_pair(
                        &rec.id,
                        roleset,
                        lexicon,
                        Source::Segmentation(best),
                        refinements,
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Groups transcripts by responder (their `provider_id`).
pub fn by_responder(transcripts: Vec<Transcript>) -> BTreeMap<String, Vec<Transcript>> {
    let mut out: BTreeMap<String, Vec<Transcript>> = BTreeMap::new();
    for t in transcripts {
        out.entry(t.provider_id.clone()).or_default().push(t);
    }
    out
}

pub fn check_probes(probes: &[Probe]) -> Result<(), String> {
    let mut seen = std::collections::BTreeSet::new();
    for p in probes {
        p.check().map_err(|e| e.to_string())?;
        if !seen.insert(p.probe_id.as_str()) {
            return Err(format!("duplicate probe id `{}`", p.probe_id));
        }
    }
    Ok(())
}
