//! Multiple-choice probes over novel multiword expressions: prompt
//! construction, answer extraction and scoring.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Answer {
    A,
    B,
    C,
    #[cfg_attr(feature = "serde", serde(rename = "UNPARSEABLE"))]
    Unparseable,
}

impl Answer {
    pub const CHOICES: [Answer; 3] = [Answer::A, Answer::B, Answer::C];

    pub fn as_str(self) -> &'static str {
        match self {
            Answer::A => "A",
            Answer::B => "B",
            Answer::C => "C",
            Answer::Unparseable => "UNPARSEABLE",
        }
    }

    fn from_char(c: char) -> Option<Answer> {
        match c.to_ascii_uppercase() {
            'A' => Some(Answer::A),
            'B' => Some(Answer::B),
            'C' => Some(Answer::C),
            _ => None,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Answer {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        let mut chars = s.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Answer::from_char(c).ok_or_else(|| s.to_string()),
            _ if s == "UNPARSEABLE" => Ok(Answer::Unparseable),
            _ => Err(s.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ProbeKind {
    Interpretation,
    Reasoning,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct ExpressionDef {
    pub expression: String,
    pub meaning: String,
    pub usage: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Options {
    #[cfg_attr(feature = "serde", serde(rename = "A"))]
    pub a: String,
    #[cfg_attr(feature = "serde", serde(rename = "B"))]
    pub b: String,
    #[cfg_attr(feature = "serde", serde(rename = "C"))]
    pub c: String,
}

impl Options {
    pub fn new(a: &str, b: &str, c: &str) -> Self {
        Options {
            a: a.to_string(),
            b: b.to_string(),
            c: c.to_string(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (Answer, &str)> {
        [
            (Answer::A, self.a.as_str()),
            (Answer::B, self.b.as_str()),
            (Answer::C, self.c.as_str()),
        ]
        .into_iter()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Probe {
    pub probe_id: String,
    pub kind: ProbeKind,
    pub expressions: Vec<ExpressionDef>,
    pub question: String,
    pub options: Options,
    pub gold: Answer,
    /// Written for this corpus rather than transcribed.
    #[cfg_attr(feature = "serde", serde(default))]
    pub synthetic: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ProbeError {
    #[error("probe `{0}` has no expressions")]
    NoExpressions(String),
    #[error("probe `{0}` has an empty question")]
    EmptyQuestion(String),
    #[error("probe `{0}` has an empty option")]
    EmptyOption(String),
    #[error("probe `{0}` has no gold choice")]
    NoGold(String),
}

impl Probe {
    pub fn check(&self) -> Result<(), ProbeError> {
        let id = || self.probe_id.clone();
        if self.expressions.is_empty() {
            return Err(ProbeError::NoExpressions(id()));
        }
        if self.question.trim().is_empty() {
            return Err(ProbeError::EmptyQuestion(id()));
        }
        if self.options.iter().any(|(_, o)| o.trim().is_empty()) {
            return Err(ProbeError::EmptyOption(id()));
        }
        if self.gold == Answer::Unparseable {
            return Err(ProbeError::NoGold(id()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct Transcript {
    pub probe_id: String,
    pub provider_id: String,
    pub raw_response: String,
    pub parsed_choice: Answer,
    pub rationale: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub latency_ms: u64,
    #[cfg_attr(feature = "serde", serde(default))]
    pub retries: u32,
}

impl Transcript {
    /// Transcript for a response, with choice and rationale parsed from it.
    pub fn from_response(probe_id: &str, provider_id: &str, raw: &str) -> Self {
        let (choice, rationale) = parse_response(raw);
        Transcript {
            probe_id: probe_id.to_string(),
            provider_id: provider_id.to_string(),
            raw_response: raw.to_string(),
            parsed_choice: choice,
            rationale,
            latency_ms: 0,
            retries: 0,
        }
    }
}

const INSTRUCTION: &str = "Using the information given below, output a single character, either A, B, or C, corresponding to the correct answer. Provide an explanation for the answer. If the answer is not clear from the context provided, output the character C.";

pub fn build_prompt(probe: &Probe) -> String {
    let mut out = String::from(INSTRUCTION);
    out.push_str("\n\nConsider these novel multiword expression:\n\n");
    let blocks: Vec<String> = probe
        .expressions
        .iter()
        .map(|e| {
            format!(
                "Expression: {}\nMeaning: {}\nUsage: {}",
                e.expression, e.meaning, e.usage
            )
        })
        .collect();
    out.push_str(&blocks.join("\n\n"));
    out.push_str("\n\nNow answer this question:\n");
    out.push_str(&probe.question);
    out.push('\n');
    for (choice, text) in probe.options.iter() {
        out.push_str(&format!(
            "{}) {text}\n",
            choice.as_str().to_ascii_lowercase()
        ));
    }
    out
}

fn strip_marks(s: &str) -> &str {
    s.trim().trim_matches('*').trim()
}

fn standalone(line: &str) -> Option<Answer> {
    let t = strip_marks(line)
        .trim_start_matches('(')
        .trim_end_matches(['.', ')', ':', ',', '!']);
    let mut chars = t.chars();
    let c = chars.next()?;
    chars.next().is_none().then_some(())?;
    Answer::from_char(c)
}

fn after_answer_tag(line: &str) -> Option<(Answer, &str)> {
    let l = strip_marks(line);
    let head = l.get(..6)?;
    if !head.eq_ignore_ascii_case("answer") {
        return None;
    }
    let rest = l[6..]
        .trim_start_matches('*')
        .trim_start()
        .strip_prefix(':')?;
    let rest = rest.trim_start_matches('*').trim_start();
    let end = rest.find(char::is_whitespace).unwrap_or(rest.len());
    Some((standalone(&rest[..end])?, rest[end..].trim()))
}

fn leading(line: &str) -> Option<(Answer, &str)> {
    let t = line.trim_start().trim_start_matches('*');
    let mut it = t.char_indices();
    let (_, c) = it.next()?;
    let choice = Answer::from_char(c)?;
    match it.next() {
        None => Some((choice, "")),
        Some((i, d)) if matches!(d, '.' | ')' | ':' | ',' | '*') => Some((
            choice,
            t[i..].trim_start_matches(['.', ')', ':', ',', '*']).trim(),
        )),
        _ => None,
    }
}

fn join_without(lines: &[&str], skip: usize, keep: &str) -> String {
    let mut parts: Vec<&str> = Vec::new();
    if !keep.is_empty() {
        parts.push(keep);
    }
    for (i, l) in lines.iter().enumerate() {
        if i != skip {
            parts.push(l);
        }
    }
    parts.join("\n").trim().to_string()
}

/// Extracts the chosen letter and the rationale. The first line that is a
/// bare letter, an `Answer:` line, or (for the opening line only) a letter
/// followed by punctuation decides. Otherwise the choice is `Unparseable`
/// and the whole text is the rationale.
pub fn parse_response(raw: &str) -> (Answer, String) {
    let lines: Vec<&str> = raw.lines().collect();
    let first = lines.iter().position(|l| !l.trim().is_empty());
    for (i, line) in lines.iter().enumerate() {
        if let Some(a) = standalone(line) {
            return (a, join_without(&lines, i, ""));
        }
        if let Some((a, rest)) = after_answer_tag(line) {
            return (a, join_without(&lines, i, rest));
        }
        if Some(i) == first {
            if let Some((a, rest)) = leading(line) {
                return (a, join_without(&lines, i, rest));
            }
        }
    }
    (Answer::Unparseable, raw.trim().to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ScoreError {
    #[error("responder `{responder}` has no transcript for probe `{probe}`")]
    MissingTranscript { probe: String, responder: String },
    #[error("responder `{responder}` has a transcript for unknown probe `{probe}`")]
    UnknownProbe { probe: String, responder: String },
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ResponderScore {
    pub responder: String,
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
    pub unparseable: usize,
    /// Fraction of probes where this responder chose the gold-majority answer.
    pub majority_agreement: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProbeRow {
    pub probe_id: String,
    pub gold: Answer,
    pub majority: Answer,
    pub choices: BTreeMap<String, Answer>,
    /// Rationales surfaced for manual review.
    pub rationales: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Pair {
    pub a: String,
    pub b: String,
    pub agreement: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Report {
    pub responders: Vec<ResponderScore>,
    pub agreement: Vec<Pair>,
    pub humans: Vec<String>,
    pub probes: Vec<ProbeRow>,
}

impl Report {
    pub fn responder(&self, name: &str) -> Option<&ResponderScore> {
        self.responders.iter().find(|r| r.responder == name)
    }

    pub fn agreement(&self, a: &str, b: &str) -> Option<f64> {
        self.agreement
            .iter()
            .find(|p| p.a == a && p.b == b)
            .map(|p| p.agreement)
    }
}

/// Scores every responder against gold and against the per-probe majority
/// of `humans` (ties go to gold; with no humans the majority is gold).
pub fn score(
    probes: &[Probe],
    by_responder: &BTreeMap<String, Vec<Transcript>>,
    humans: &[String],
) -> Result<Report, ScoreError> {
    let mut table: BTreeMap<&str, BTreeMap<&str, &Transcript>> = BTreeMap::new();
    for (who, ts) in by_responder {
        let row = table.entry(who.as_str()).or_default();
        for t in ts {
            if !probes.iter().any(|p| p.probe_id == t.probe_id) {
                return Err(ScoreError::UnknownProbe {
                    probe: t.probe_id.clone(),
                    responder: who.clone(),
                });
            }
            row.insert(t.probe_id.as_str(), t);
        }
    }
    let get = |who: &str, probe: &str| -> Result<&Transcript, ScoreError> {
        table
            .get(who)
            .and_then(|r| r.get(probe))
            .copied()
            .ok_or_else(|| ScoreError::MissingTranscript {
                probe: probe.to_string(),
                responder: who.to_string(),
            })
    };
    for h in humans {
        if !by_responder.contains_key(h) {
            return Err(ScoreError::MissingTranscript {
                probe: probes
                    .first()
                    .map(|p| p.probe_id.clone())
                    .unwrap_or_default(),
                responder: h.clone(),
            });
        }
    }

    let mut rows = Vec::new();
    for p in probes {
        let mut choices = BTreeMap::new();
        let mut rationales = BTreeMap::new();
        for who in by_responder.keys() {
            let t = get(who, &p.probe_id)?;
            choices.insert(who.clone(), t.parsed_choice);
            rationales.insert(who.clone(), t.rationale.clone());
        }
        let mut counts: BTreeMap<Answer, usize> = BTreeMap::new();
        for h in humans {
            *counts.entry(choices[h]).or_default() += 1;
        }
        let top = counts.values().copied().max().unwrap_or(0);
        let tied: Vec<Answer> = counts
            .iter()
            .filter(|(_, c)| **c == top)
            .map(|(a, _)| *a)
            .collect();
        let majority = if tied.is_empty() || tied.contains(&p.gold) {
            p.gold
        } else {
            tied[0]
        };
        rows.push(ProbeRow {
            probe_id: p.probe_id.clone(),
            gold: p.gold,
            majority,
            choices,
            rationales,
        });
    }

    let n = probes.len();
    let responders = by_responder
        .keys()
        .map(|who| {
            let picks = || rows.iter().map(|r| (r, r.choices[who]));
            let correct = picks().filter(|(r, c)| *c == r.gold).count();
            ResponderScore {
                responder: who.clone(),
                correct,
                total: n,
                accuracy: ratio(correct, n),
                unparseable: picks().filter(|(_, c)| *c == Answer::Unparseable).count(),
                majority_agreement: ratio(picks().filter(|(r, c)| *c == r.majority).count(), n),
            }
        })
        .collect();
    let mut agreement = Vec::new();
    for a in by_responder.keys() {
        for b in by_responder.keys() {
            // An unparseable answer never agrees with anything, itself aside.
            let same = rows
                .iter()
                .filter(|r| {
                    a == b || (r.choices[a] == r.choices[b] && r.choices[a] != Answer::Unparseable)
                })
                .count();
            agreement.push(Pair {
                a: a.clone(),
                b: b.clone(),
                agreement: ratio(same, n),
            });
        }
    }
    Ok(Report {
        responders,
        agreement,
        humans: humans.to_vec(),
        probes: rows,
    })
}

fn ratio(n: usize, d: usize) -> f64 {
    if d == 0 {
        0.0
    } else {
        n as f64 / d as f64
    }
}
