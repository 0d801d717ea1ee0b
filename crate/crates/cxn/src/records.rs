//! JSON-lines records exchanged between subcommands.

use std::collections::BTreeMap;

use cxn_core::graph::Refinement;
use cxn_core::matcher::{Annotation, MatchSpan, Pos, Token, TokenRange};
use cxn_core::model::ArgLabel;
use cxn_core::morph::{Segmentation, StemAnalysis};
use cxn_core::Diagnostic;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TokenRec {
    pub surface: String,
    pub lemma: String,
    pub pos: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpanRec {
    pub start: usize,
    pub end: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SlotRec {
    pub slot: String,
    pub start: usize,
    pub end: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatchRec {
    pub id: String,
    pub cxn: String,
    pub variant: String,
    pub roleset: String,
    pub slots: Vec<SlotRec>,
    pub roles: BTreeMap<String, SpanRec>,
    pub rel: Vec<usize>,
    pub anchors: Vec<usize>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub ambiguous_literal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub light_verb: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eventive: Option<SpanRec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eventive_roleset: Option<String>,
}

/// One annotated sentence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SentenceRec {
    pub sentence: usize,
    pub text: String,
    pub tokens: Vec<TokenRec>,
    pub matches: Vec<MatchRec>,
}

fn text_of(tokens: &[Token], r: TokenRange) -> String {
    tokens[r.start..=r.end]
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

fn span_rec(tokens: &[Token], r: TokenRange) -> SpanRec {
    SpanRec {
        start: r.start,
        end: r.end,
        text: text_of(tokens, r),
    }
}

impl SentenceRec {
    pub fn new(index: usize, tokens: &[Token], annotations: &[Annotation]) -> Self {
        let matches = annotations
            .iter()
            .enumerate()
            .map(|(k, a)| {
                let s = &a.span;
                MatchRec {
                    id: format!("s{index}-m{k}"),
                    cxn: s.cxn_id.clone(),
                    variant: s.variant_id.clone(),
                    roleset: a.predicate_id.clone(),
                    slots: s
                        .assignments
                        .iter()
                        .map(|(slot, r)| SlotRec {
                            slot: slot.clone(),
                            start: r.start,
                            end: r.end,
                            text: text_of(tokens, *r),
                        })
                        .collect(),
                    roles: s
                        .roles
                        .iter()
                        .map(|(l, r)| (l.to_string(), span_rec(tokens, *r)))
                        .collect(),
                    rel: s.rel_tokens.iter().copied().collect(),
                    anchors: s.anchors.iter().copied().collect(),
                    ambiguous_literal: s.ambiguous_literal,
                    light_verb: s.light_verb,
                    eventive: s.eventive.map(|r| span_rec(tokens, r)),
                    eventive_roleset: a.eventive_predicate.clone(),
                }
            })
            .collect();
        SentenceRec {
            sentence: index,
            text: text_of(
                tokens,
                TokenRange {
                    start: 0,
                    end: tokens.len().saturating_sub(1),
                },
            ),
            tokens: tokens
                .iter()
                .map(|t| TokenRec {
                    surface: t.surface.clone(),
                    lemma: t.lemma.clone(),
                    pos: t.pos.to_string(),
                })
                .collect(),
            matches,
        }
    }

    pub fn tokens(&self) -> Result<Vec<Token>, String> {
        self.tokens
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let pos: Pos = t.pos.parse().map_err(|e| format!("token {i}: {e}"))?;
                Ok(Token::new(i, &t.surface, Some(&t.lemma), Some(pos)))
            })
            .collect()
    }
}

impl MatchRec {
    /// Rebuilds the matcher's span from a record.
    pub fn span(&self) -> Result<MatchSpan, String> {
        let range = |s: usize, e: usize| TokenRange { start: s, end: e };
        let mut roles = BTreeMap::new();
        for (label, r) in &self.roles {
            let l: ArgLabel = label.parse().map_err(|e| format!("{}: {e}", self.id))?;
            roles.insert(l, range(r.start, r.end));
        }
        Ok(MatchSpan {
            cxn_id: self.cxn.clone(),
            variant_id: self.variant.clone(),
            assignments: self
                .slots
                .iter()
                .map(|s| (s.slot.clone(), range(s.start, s.end)))
                .collect(),
            roles,
            rel_tokens: self.rel.iter().copied().collect(),
            anchors: self.anchors.iter().copied().collect(),
            ambiguous_literal: self.ambiguous_literal,
            light_verb: self.light_verb,
            eventive: self.eventive.as_ref().map(|r| range(r.start, r.end)),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PieceRec {
    pub slot: String,
    pub kind: String,
    pub form: String,
    pub gloss: String,
    pub surface: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialChangeRec {
    pub infix: String,
    pub piece: usize,
    pub position: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StemRec {
    pub cxn: String,
    pub gloss: String,
    pub initial: String,
    #[serde(rename = "final")]
    pub final_: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub derivational_final: Option<String>,
}

impl From<&StemAnalysis> for StemRec {
    fn from(a: &StemAnalysis) -> Self {
        StemRec {
            cxn: a.cxn.as_str().into(),
            gloss: a.gloss(),
            initial: a.initial.surface.clone(),
            final_: a.final_.surface.clone(),
            derivational_final: a.derivational_final.as_ref().map(|d| d.surface.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParseRec {
    pub gloss: String,
    pub pieces: Vec<PieceRec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_change: Option<InitialChangeRec>,
    /// Stem-internal analyses of the stem piece, when it has any.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub stem: Vec<StemRec>,
}

impl ParseRec {
    pub fn new(seg: &Segmentation, stem: &[StemAnalysis]) -> Self {
        ParseRec {
            gloss: seg.gloss_line(),
            pieces: seg
                .pieces
                .iter()
                .map(|p| PieceRec {
                    slot: p.slot_name.clone(),
                    kind: p.slot_kind.as_str().into(),
                    form: p.entry.bare_form(),
                    gloss: p.entry.gloss.clone(),
                    surface: p.surface.clone(),
                })
                .collect(),
            initial_change: seg.initial_change.as_ref().map(|ic| InitialChangeRec {
                infix: ic.infix.as_str().into(),
                piece: ic.host,
                position: ic.position,
                text: ic.text.clone(),
            }),
            stem: stem.iter().map(StemRec::from).collect(),
        }
    }
}

/// One logical verb word with its parses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordRec {
    pub id: String,
    pub line: usize,
    pub sources: Vec<String>,
    pub word: String,
    pub parses: Vec<ParseRec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<Diagnostic>,
}

/// Graph pair for one match or verb word.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphRec {
    pub match_id: String,
    pub roleset: String,
    pub literal: Option<String>,
    pub idiomatic: Option<String>,
    pub diagnostics: Vec<Diagnostic>,
}

/// Either input record accepted by `graph`.
#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(untagged)]
pub enum GraphInput {
    Sentence(SentenceRec),
    Word(WordRec),
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeOverride {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub var: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept: Option<String>,
}

/// Annotator refinements for one record id, per graph side, keyed by the
/// derived variable.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RefineRec {
    #[serde(default)]
    pub literal: BTreeMap<String, NodeOverride>,
    #[serde(default)]
    pub idiomatic: BTreeMap<String, NodeOverride>,
}

pub fn to_refinement(side: &BTreeMap<String, NodeOverride>) -> Refinement {
    let mut r = Refinement::default();
    for (var, o) in side {
        if let Some(v) = &o.var {
            r.vars.insert(var.clone(), v.clone());
        }
        if let Some(c) = &o.concept {
            r.concepts.insert(var.clone(), c.clone());
        }
    }
    r
}
