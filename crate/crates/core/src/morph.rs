//! Verb-word segmentation against slot templates.
//!
//! Matching is diacritic-insensitive: both words and morpheme forms are
//! folded (NFD, combining marks dropped, lowercased) before comparison, but
//! every matched surface is a slice of the caller's original text.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;
use unicode_normalization::char::is_combining_mark;
use unicode_normalization::UnicodeNormalization;

use crate::diagnostic::Diagnostic;
use crate::model::{Lexicon, MorphEntry, MorphSlotKind, MorphTemplate};

pub const DETACH_SUFFIX: &str = "ini";

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("no segmentation covers `{0}`")]
    NoParse(String),
    #[error("empty word")]
    EmptyWord,
    #[error("lexicon has no verb-word template")]
    NoTemplate,
}

/// Folded copy of a string with a map back to original byte offsets.
#[derive(Clone, Debug)]
pub struct Folded<'a> {
    pub original: &'a str,
    pub text: String,
    /// `bounds[i]` is the original byte offset for folded byte `i`, when `i`
    /// falls on the boundary between two original characters.
    bounds: Vec<Option<usize>>,
}

impl<'a> Folded<'a> {
    pub fn new(original: &'a str) -> Self {
        let mut text = String::new();
        let mut bounds = Vec::new();
        for (offset, c) in original.char_indices() {
            let piece: String = core::iter::once(glottal(c))
                .nfd()
                .filter(|d| !is_combining_mark(*d))
                .flat_map(char::to_lowercase)
                .collect();
            // A character that folds to nothing (a bare combining mark)
            // stays attached to the one before it.
            if piece.is_empty() {
                continue;
            }
            bounds.resize(text.len(), None);
            bounds.push(Some(if text.is_empty() { 0 } else { offset }));
            text.push_str(&piece);
        }
        bounds.resize(text.len(), None);
        bounds.push(Some(original.len()));
        Folded {
            original,
            text,
            bounds,
        }
    }

    pub fn orig(&self, folded: usize) -> Option<usize> {
        self.bounds.get(folded).copied().flatten()
    }

    pub fn slice(&self, from: usize, to: usize) -> Option<&'a str> {
        Some(&self.original[self.orig(from)?..self.orig(to)?])
    }
}

/// Typeset apostrophes spell the same glottal stop as `'`.
fn glottal(c: char) -> char {
    match c {
        '\u{2019}' | '\u{02BC}' => '\'',
        c => c,
    }
}

pub fn fold(s: &str) -> String {
    Folded::new(s).text
}

fn is_vowel(c: char) -> bool {
    matches!(c, 'a' | 'e' | 'i' | 'o' | 'u')
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Infix {
    En,
    On,
}

impl Infix {
    pub fn as_str(&self) -> &'static str {
        match self {
            Infix::En => "en",
            Infix::On => "on",
        }
    }
}

impl fmt::Display for Infix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stripped {
    pub base: String,
    pub infix: Option<Infix>,
    /// Byte offset in `base` where the infix was removed.
    pub position: usize,
    /// The removed text, as written (normally `en` or `on`).
    pub removed: String,
}

impl Stripped {
    pub fn reinsert(&self) -> String {
        let mut s = self.base.clone();
        s.insert_str(self.position, &self.removed);
        s
    }
}

/// Folded-byte length of the consonant onset when `folded` has the shape
/// onset + `en`/`on` + long vowel.
fn initial_change_at(folded: &str) -> Option<(usize, Infix)> {
    let onset = folded.find(|c: char| is_vowel(c))?;
    if onset == 0 {
        return None;
    }
    let rest = &folded[onset..];
    let infix = if rest.starts_with("en") {
        Infix::En
    } else if rest.starts_with("on") {
        Infix::On
    } else {
        return None;
    };
    let mut after = rest[2..].chars();
    match (after.next(), after.next()) {
        (Some(a), Some(b)) if is_vowel(a) && a == b => Some((onset, infix)),
        _ => None,
    }
}

/// Removes an initial-change infix (`y-on-oo3i` -> `yoo3i`).
pub fn strip_initial_change(piece: &str) -> Stripped {
    let unchanged = Stripped {
        base: piece.to_string(),
        infix: None,
        position: 0,
        removed: String::new(),
    };
    let folded = Folded::new(piece);
    let Some((onset, infix)) = initial_change_at(&folded.text) else {
        return unchanged;
    };
    match (folded.orig(onset), folded.orig(onset + 2)) {
        (Some(a), Some(b)) => {
            let mut base = String::with_capacity(piece.len());
            base.push_str(&piece[..a]);
            base.push_str(&piece[b..]);
            Stripped {
                base,
                infix: Some(infix),
                position: a,
                removed: piece[a..b].to_string(),
            }
        }
        _ => unchanged,
    }
}

/// Forms of `folded_form` with an initial-change infix inserted, paired with
/// the insertion point.
fn changed_forms(folded_form: &str) -> Vec<(String, usize, Infix)> {
    let mut out = Vec::new();
    let Some(onset) = folded_form.find(|c: char| is_vowel(c)) else {
        return out;
    };
    if onset == 0 {
        return out;
    }
    let mut rest = folded_form[onset..].chars();
    match (rest.next(), rest.next()) {
        (Some(a), Some(b)) if a == b => {}
        _ => return out,
    }
    for infix in [Infix::En, Infix::On] {
        let mut s = String::with_capacity(folded_form.len() + 2);
        s.push_str(&folded_form[..onset]);
        s.push_str(infix.as_str());
        s.push_str(&folded_form[onset..]);
        out.push((s, onset, infix));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Piece {
    pub slot_name: String,
    pub slot_kind: MorphSlotKind,
    pub entry: MorphEntry,
    /// Matched text, without any initial-change infix.
    pub surface: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InitialChange {
    pub infix: Infix,
    pub host: usize,
    /// Byte offset within the host piece's surface.
    pub position: usize,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segmentation {
    pub word: String,
    pub pieces: Vec<Piece>,
    pub initial_change: Option<InitialChange>,
}

impl Segmentation {
    pub fn gloss_line(&self) -> String {
        let glosses: Vec<&str> = self.pieces.iter().map(|p| p.entry.gloss.as_str()).collect();
        glosses.join("-")
    }

    /// Pieces joined, with the infix put back into its host.
    pub fn reassemble(&self) -> String {
        let mut out = String::new();
        for (i, p) in self.pieces.iter().enumerate() {
            match &self.initial_change {
                Some(ic) if ic.host == i => {
                    out.push_str(&p.surface[..ic.position]);
                    out.push_str(&ic.text);
                    out.push_str(&p.surface[ic.position..]);
                }
                _ => out.push_str(&p.surface),
            }
        }
        out
    }

    pub fn piece_by_kind(&self, kind: MorphSlotKind) -> Option<&Piece> {
        self.pieces.iter().find(|p| p.slot_kind == kind)
    }

    fn rank_key(&self) -> (usize, Vec<&str>, Vec<&str>, Vec<&str>, bool) {
        (
            self.pieces.len(),
            self.pieces.iter().map(|p| p.slot_name.as_str()).collect(),
            self.pieces.iter().map(|p| p.entry.form.as_str()).collect(),
            self.pieces.iter().map(|p| p.entry.gloss.as_str()).collect(),
            self.initial_change.is_some(),
        )
    }
}

pub fn strip_hyphens(word: &str) -> String {
    word.chars().filter(|c| *c != '-').collect()
}

/// Folded forms (canonical form plus surface variants) of a morpheme.
pub fn entry_forms(entry: &MorphEntry) -> BTreeSet<String> {
    let mut forms: BTreeSet<String> = BTreeSet::new();
    forms.insert(fold(&entry.bare_form()));
    for v in &entry.surface_variants {
        forms.insert(fold(&strip_hyphens(v)));
    }
    forms.retain(|f| !f.is_empty());
    forms
}

/// Can slot `j` follow slot `last` (or open the word when `last` is `None`)
/// without skipping a required slot?
pub fn slot_step_ok(template: &MorphTemplate, last: Option<usize>, j: usize) -> bool {
    let from = match last {
        None => 0,
        Some(l) if j == l => return template.slots[l].repeatable,
        Some(l) if j < l => return false,
        Some(l) => l + 1,
    };
    template.slots[from..j].iter().all(|s| !s.required)
}

pub fn closes_ok(template: &MorphTemplate, last: Option<usize>) -> bool {
    let from = last.map_or(0, |l| l + 1);
    template.slots[from..].iter().all(|s| !s.required)
}

struct Search<'s, 'a> {
    folded: &'s Folded<'a>,
    lexicon: &'s Lexicon,
    template: &'s MorphTemplate,
    forms: &'s [BTreeSet<String>],
    word: String,
    out: Vec<Segmentation>,
}

impl Search<'_, '_> {
    fn run(
        &mut self,
        pos: usize,
        last: Option<usize>,
        pieces: &mut Vec<Piece>,
        ic: &Option<InitialChange>,
    ) {
        let text = &self.folded.text;
        if pos == text.len() {
            if !pieces.is_empty() && closes_ok(self.template, last) {
                self.out.push(Segmentation {
                    word: self.word.clone(),
                    pieces: pieces.clone(),
                    initial_change: ic.clone(),
                });
            }
            return;
        }
        let rest = &text[pos..];
        let forms = self.forms;
        for (mi, entry) in self.lexicon.morphemes.iter().enumerate() {
            for form in &forms[mi] {
                let mut hits: Vec<(usize, Option<(usize, Infix)>)> = Vec::new();
                if rest.starts_with(form.as_str()) {
                    hits.push((form.len(), None));
                }
                if pos == 0 {
                    for (changed, at, infix) in changed_forms(form) {
                        if rest.starts_with(changed.as_str()) {
                            hits.push((changed.len(), Some((at, infix))));
                        }
                    }
                }
                for (len, change) in hits {
                    let end = pos + len;
                    let Some(surface) = self.piece_surface(pos, end, change) else {
                        continue;
                    };
                    for (j, slot) in self.template.slots.iter().enumerate() {
                        if !entry.allowed_slots.contains(&slot.kind)
                            || !slot_step_ok(self.template, last, j)
                        {
                            continue;
                        }
                        let next_ic = match change {
                            Some((at, infix)) => {
                                let a = self.folded.orig(pos + at).unwrap_or(0);
                                let b = self.folded.orig(pos + at + 2).unwrap_or(a);
                                let host_start = self.folded.orig(pos).unwrap_or(0);
                                Some(InitialChange {
                                    infix,
                                    host: pieces.len(),
                                    position: a - host_start,
                                    text: self.folded.original[a..b].to_string(),
                                })
                            }
                            None => ic.clone(),
                        };
                        pieces.push(Piece {
                            slot_name: slot.name.clone(),
                            slot_kind: slot.kind,
                            entry: entry.clone(),
                            surface: surface.clone(),
                        });
                        self.run(end, Some(j), pieces, &next_ic);
                        pieces.pop();
                    }
                }
            }
        }
    }

    fn piece_surface(
        &self,
        from: usize,
        to: usize,
        change: Option<(usize, Infix)>,
    ) -> Option<String> {
        match change {
            None => self.folded.slice(from, to).map(ToString::to_string),
            Some((at, _)) => {
                let head = self.folded.slice(from, from + at)?;
                self.folded.slice(from + at, from + at + 2)?;
                let tail = self.folded.slice(from + at + 2, to)?;
                Some(format!("{head}{tail}"))
            }
        }
    }
}

fn sort_parses(out: &mut Vec<Segmentation>) {
    out.sort_by(|a, b| a.rank_key().cmp(&b.rank_key()));
    out.dedup();
}

/// Every segmentation of `word` consistent with the template, best first
/// (fewest pieces, then slot-name sequence).
pub fn segment_verb_word(
    word: &str,
    lexicon: &Lexicon,
    template: &MorphTemplate,
) -> Result<Vec<Segmentation>, SegmentError> {
    let clean = strip_hyphens(word);
    if clean.is_empty() {
        return Err(SegmentError::EmptyWord);
    }
    let folded = Folded::new(&clean);
    let forms: Vec<BTreeSet<String>> = lexicon.morphemes.iter().map(entry_forms).collect();
    let mut search = Search {
        folded: &folded,
        lexicon,
        template,
        forms: &forms,
        word: clean.clone(),
        out: Vec::new(),
    };
    search.run(0, None, &mut Vec::new(), &None);
    let mut out = search.out;
    if out.is_empty() {
        return Err(SegmentError::NoParse(word.to_string()));
    }
    sort_parses(&mut out);
    Ok(out)
}

/// One verb word after detached preverbs have been put back.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalWord {
    pub sources: Vec<usize>,
    /// Bases and verb concatenated, initial change removed.
    pub word: String,
    /// Initial change found on the first detached piece, positioned within
    /// `word`.
    pub initial_change: Option<InitialChange>,
}

impl LogicalWord {
    /// `word` with any recorded infix restored: the string a segmenter sees.
    pub fn with_initial_change(&self) -> String {
        match &self.initial_change {
            Some(ic) => {
                let mut s = self.word.clone();
                s.insert_str(ic.position, &ic.text);
                s
            }
            None => self.word.clone(),
        }
    }
}

fn preverb_form(lexicon: &Lexicon, base: &str) -> bool {
    let folded = fold(base);
    lexicon.morphemes.iter().any(|m| {
        m.allowed_slots.iter().any(MorphSlotKind::is_preverb) && entry_forms(m).contains(&folded)
    })
}

struct Detached {
    source: usize,
    base: String,
    change: Option<(Infix, usize, String)>,
}

/// Base of a detached word: suffix removed, initial change removed, and an
/// epenthetic word-initial `h` dropped before a vowel.
fn detached_base(word: &str) -> Option<(String, Option<(Infix, usize, String)>)> {
    let folded = Folded::new(word);
    if !folded.text.ends_with(DETACH_SUFFIX) || folded.text.len() <= DETACH_SUFFIX.len() {
        return None;
    }
    let cut = folded.orig(folded.text.len() - DETACH_SUFFIX.len())?;
    let stem = &word[..cut];
    let stripped = strip_initial_change(stem);
    let mut base = stripped.base.clone();
    let mut change = stripped
        .infix
        .map(|i| (i, stripped.position, stripped.removed.clone()));
    let fb = Folded::new(&base);
    let mut chars = fb.text.chars();
    if let (Some('h'), Some(v)) = (chars.next(), chars.next()) {
        if is_vowel(v) {
            if let Some(off) = fb.orig(1) {
                base = base[off..].to_string();
                if let Some((_, pos, _)) = change.as_mut() {
                    *pos = pos.saturating_sub(off);
                }
            }
        }
    }
    Some((base, change))
}

/// Merges detached preverbs (`yonoo3iini hiiyoo3iini notikoni3i'`) onto the
/// following verb word. Unknown `-ini` words pass through with a warning.
pub fn reattach_detached(words: &[&str], lexicon: &Lexicon) -> (Vec<LogicalWord>, Vec<Diagnostic>) {
    let mut out = Vec::new();
    let mut diags = Vec::new();
    let mut pending: Vec<Detached> = Vec::new();

    fn flush_orphans(
        pending: &mut Vec<Detached>,
        words: &[&str],
        out: &mut Vec<LogicalWord>,
        diags: &mut Vec<Diagnostic>,
    ) {
        for d in pending.drain(..) {
            diags.push(Diagnostic::warning(
                "DETACHED_ORPHAN",
                format!("/words/{}", d.source),
                format!("`{}` has no following verb word", words[d.source]),
            ));
            out.push(LogicalWord {
                sources: alloc::vec![d.source],
                word: words[d.source].to_string(),
                initial_change: None,
            });
        }
    }

    for (i, word) in words.iter().enumerate() {
        match detached_base(word) {
            Some((base, change)) if preverb_form(lexicon, &base) => {
                pending.push(Detached {
                    source: i,
                    base,
                    change,
                });
            }
            Some(_) => {
                flush_orphans(&mut pending, words, &mut out, &mut diags);
                diags.push(Diagnostic::warning(
                    "DETACHED_UNKNOWN",
                    format!("/words/{i}"),
                    format!(
                        "`{word}` ends in -{DETACH_SUFFIX} but its base is not a known preverb"
                    ),
                ));
                out.push(LogicalWord {
                    sources: alloc::vec![i],
                    word: word.to_string(),
                    initial_change: None,
                });
            }
            None => {
                let mut sources = Vec::new();
                let mut merged = String::new();
                let mut initial_change = None;
                for (k, d) in pending.drain(..).enumerate() {
                    if k == 0 {
                        initial_change = d.change.map(|(infix, position, text)| InitialChange {
                            infix,
                            host: 0,
                            position,
                            text,
                        });
                    }
                    sources.push(d.source);
                    merged.push_str(&d.base);
                }
                sources.push(i);
                merged.push_str(word);
                out.push(LogicalWord {
                    sources,
                    word: merged,
                    initial_change,
                });
            }
        }
    }
    flush_orphans(&mut pending, words, &mut out, &mut diags);
    (out, diags)
}

/// Noun-incorporation stem constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StemCxn {
    ModeOfAction,
    Instrumental,
    PatientUndergoer,
    BodyPart,
    Topic,
    Sensation,
}

impl StemCxn {
    pub const ALL: [StemCxn; 6] = [
        StemCxn::ModeOfAction,
        StemCxn::Instrumental,
        StemCxn::PatientUndergoer,
        StemCxn::BodyPart,
        StemCxn::Topic,
        StemCxn::Sensation,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            StemCxn::ModeOfAction => "mode-of-action",
            StemCxn::Instrumental => "instrumental",
            StemCxn::PatientUndergoer => "patient-undergoer",
            StemCxn::BodyPart => "body-part",
            StemCxn::Topic => "topic",
            StemCxn::Sensation => "sensation",
        }
    }

    /// Initial class, admissible positions of the second piece, its class.
    fn pattern(&self) -> (&'static str, &'static [&'static str], &'static str) {
        match self {
            StemCxn::ModeOfAction => ("transitive-action-root", &["medial", "final"], "manner"),
            StemCxn::Instrumental => ("transitive-action-root", &["final"], "implement"),
            StemCxn::PatientUndergoer => ("action-root", &["medial", "final"], "patient"),
            StemCxn::BodyPart => ("condition-root", &["medial"], "body-part"),
            StemCxn::Topic => ("condition-root", &["final"], "natural-object"),
            StemCxn::Sensation => ("experiential-quality-root", &["final"], "sensory-modality"),
        }
    }
}

impl fmt::Display for StemCxn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemPart {
    pub entry: MorphEntry,
    pub surface: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StemAnalysis {
    pub stem: String,
    pub cxn: StemCxn,
    pub initial: StemPart,
    pub final_: StemPart,
    pub derivational_final: Option<StemPart>,
}

impl StemAnalysis {
    pub fn surface(&self) -> String {
        let mut s = self.initial.surface.clone();
        s.push_str(&self.final_.surface);
        if let Some(d) = &self.derivational_final {
            s.push_str(&d.surface);
        }
        s
    }

    /// `around--ride.horse<AI>`
    pub fn gloss(&self) -> String {
        let mut s = format!("{}--{}", self.initial.entry.gloss, self.final_.entry.gloss);
        if let Some(d) = &self.derivational_final {
            s.push('<');
            s.push_str(&d.entry.gloss);
            s.push('>');
        }
        s
    }
}

fn split_class(pos_class: &str) -> Option<(&str, &str)> {
    pos_class.split_once('.')
}

/// Position and class of a stem-internal piece, from a `pos` such as
/// `initial.transitive-action-root` or `medial.body-part`.
pub fn stem_piece_class(pos_class: &str) -> Option<(&str, &str)> {
    split_class(pos_class)
        .filter(|(p, c)| matches!(*p, "initial" | "medial" | "final") && !c.is_empty())
}

/// Decomposes a verb stem into initial + final (+ derivational final)
/// according to the noun-incorporation stem constructions.
pub fn stem_analyze(stem: &str, lexicon: &Lexicon) -> Result<Vec<StemAnalysis>, SegmentError> {
    let clean = strip_hyphens(stem);
    if clean.is_empty() {
        return Err(SegmentError::EmptyWord);
    }
    let folded = Folded::new(&clean);
    let text = folded.text.as_str();
    let prefixes = |pos: usize, pred: &dyn Fn(&MorphEntry) -> bool| -> Vec<(MorphEntry, usize)> {
        let mut hits = Vec::new();
        for m in lexicon.morphemes.iter().filter(|m| pred(m)) {
            for f in entry_forms(m) {
                if text[pos..].starts_with(f.as_str()) && folded.orig(pos + f.len()).is_some() {
                    hits.push((m.clone(), pos + f.len()));
                }
            }
        }
        hits
    };
    let part = |entry: MorphEntry, from: usize, to: usize| StemPart {
        surface: folded.slice(from, to).unwrap_or_default().to_string(),
        entry,
    };

    let mut out = Vec::new();
    let initials = prefixes(0, &|m| {
        split_class(&m.pos_class).is_some_and(|(p, _)| p == "initial")
    });
    for (init, a) in initials {
        let (_, init_class) = split_class(&init.pos_class).unwrap_or_default();
        let finals = prefixes(a, &|m| {
            split_class(&m.pos_class).is_some_and(|(p, _)| p == "medial" || p == "final")
        });
        for (fin, b) in finals {
            let (fin_pos, fin_class) = split_class(&fin.pos_class).unwrap_or_default();
            let tails: Vec<(Option<MorphEntry>, usize)> = if b == text.len() {
                alloc::vec![(None, b)]
            } else {
                prefixes(b, &|m| {
                    m.allowed_slots.contains(&MorphSlotKind::DerivationalFinal)
                })
                .into_iter()
                .filter(|(_, c)| *c == text.len())
                .map(|(m, c)| (Some(m), c))
                .collect()
            };
            for (deriv, c) in tails {
                for cxn in StemCxn::ALL {
                    let (want_init, positions, want_fin) = cxn.pattern();
                    if init_class == want_init
                        && positions.contains(&fin_pos)
                        && fin_class == want_fin
                    {
                        out.push(StemAnalysis {
                            stem: clean.clone(),
                            cxn,
                            initial: part(init.clone(), 0, a),
                            final_: part(fin.clone(), a, b),
                            derivational_final: deriv.clone().map(|d| part(d, b, c)),
                        });
                    }
                }
            }
        }
    }
    if out.is_empty() {
        return Err(SegmentError::NoParse(stem.to_string()));
    }
    out.sort_by(|x, y| {
        (x.cxn, &x.initial.entry.form, &x.final_.entry.form).cmp(&(
            y.cxn,
            &y.initial.entry.form,
            &y.final_.entry.form,
        ))
    });
    out.dedup();
    Ok(out)
}
