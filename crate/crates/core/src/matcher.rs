//! Surface matching of constructions over tokenized sentences.
//!
//! Substantive slots match by lemma (or surface, case-insensitively);
//! schematic slots consume a run of tokens whose part-of-speech tags fit the
//! slot's category. Consecutive slots may be separated by at most
//! `gap_limit` unassigned tokens. Overlaps between candidates are resolved
//! greedily by a fixed score.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::{Ordering, Reverse};
use core::fmt;
use core::str::FromStr;

use crate::model::{
    ArgLabel, Category, Construction, Lexicon, ModelError, Slot, SlotKind, SlotPattern,
};

macro_rules! pos_tags {
    ($($variant:ident => $text:literal),+ $(,)?) => {
        /// Part-of-speech tags accepted in the corpus.
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum Pos { $($variant),+ }

        impl Pos {
            pub const ALL: &'static [Pos] = &[$(Pos::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self { $(Pos::$variant => $text),+ }
            }
        }

        impl FromStr for Pos {
            type Err = ModelError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok(Pos::$variant),)+
                    other => Err(ModelError::UnknownTag { kind: "part of speech", value: other.to_string() }),
                }
            }
        }
    };
}

pos_tags! {
    Det => "DET",
    N => "N",
    Propn => "PROPN",
    Pron => "PRON",
    Adj => "ADJ",
    Adjr => "ADJR",
    Adv => "ADV",
    Advr => "ADVR",
    V => "V",
    Aux => "AUX",
    Adp => "ADP",
    Part => "PART",
    Conj => "CONJ",
    Punct => "PUNCT",
    Num => "NUM",
    Any => "ANY",
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub index: usize,
    pub surface: String,
    pub lemma: String,
    pub pos: Pos,
}

impl Token {
    pub fn new(index: usize, surface: &str, lemma: Option<&str>, pos: Option<Pos>) -> Self {
        Token {
            index,
            surface: surface.to_string(),
            lemma: match lemma {
                Some(l) => l.to_string(),
                None => surface.to_lowercase(),
            },
            pos: pos.unwrap_or(Pos::Any),
        }
    }
}

/// Builds a sentence from `(surface, lemma, pos)` triples.
pub fn sentence(tokens: &[(&str, &str, Pos)]) -> Vec<Token> {
    tokens
        .iter()
        .enumerate()
        .map(|(i, (s, l, p))| Token::new(i, s, Some(l), Some(*p)))
        .collect()
}

/// Inclusive token range.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TokenRange {
    pub start: usize,
    pub end: usize,
}

impl TokenRange {
    pub fn new(start: usize, end: usize) -> Self {
        TokenRange { start, end }
    }

    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn indices(&self) -> core::ops::RangeInclusive<usize> {
        self.start..=self.end
    }

    pub fn overlaps(&self, other: &TokenRange) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatchSpan {
    pub cxn_id: String,
    pub variant_id: String,
    /// Slot id and range, in variant slot order.
    pub assignments: Vec<(String, TokenRange)>,
    pub roles: BTreeMap<ArgLabel, TokenRange>,
    /// Relation tokens: substantive anchors other than fixed function words,
    /// plus the eventive noun of a light verb construction.
    pub rel_tokens: BTreeSet<usize>,
    /// Every token of a substantive slot. Drives the overlap score.
    pub anchors: BTreeSet<usize>,
    pub ambiguous_literal: bool,
    pub light_verb: Option<usize>,
    pub eventive: Option<TokenRange>,
}

impl MatchSpan {
    pub fn start(&self) -> usize {
        self.assignments.first().map_or(0, |(_, r)| r.start)
    }

    pub fn end(&self) -> usize {
        self.assignments.last().map_or(0, |(_, r)| r.end)
    }

    pub fn assigned_tokens(&self) -> usize {
        self.assignments.iter().map(|(_, r)| r.len()).sum()
    }

    pub fn token_set(&self) -> BTreeSet<usize> {
        self.assignments
            .iter()
            .flat_map(|(_, r)| r.indices())
            .collect()
    }

    pub fn range_of(&self, slot_id: &str) -> Option<TokenRange> {
        self.assignments
            .iter()
            .find(|(id, _)| id == slot_id)
            .map(|(_, r)| *r)
    }

    pub fn overlaps(&self, other: &MatchSpan) -> bool {
        self.assignments
            .iter()
            .any(|(_, a)| other.assignments.iter().any(|(_, b)| a.overlaps(b)))
    }

    fn order_key(&self) -> (usize, &str, &str, &[(String, TokenRange)]) {
        (
            self.start(),
            &self.cxn_id,
            &self.variant_id,
            &self.assignments,
        )
    }
}

/// Total order used to pick matches: more anchors, fewer assigned tokens,
/// leftmost start, then `cxn_id`, `variant_id` and the assignment vector.
pub fn score_cmp(a: &MatchSpan, b: &MatchSpan) -> Ordering {
    let key = |m: &MatchSpan| {
        (
            Reverse(m.anchors.len()),
            m.assigned_tokens(),
            m.start(),
            m.cxn_id.clone(),
            m.variant_id.clone(),
            m.assignments.clone(),
        )
    };
    key(a).cmp(&key(b))
}

pub fn candidate_cmp(a: &MatchSpan, b: &MatchSpan) -> Ordering {
    a.order_key().cmp(&b.order_key())
}

/// Part-of-speech tags allowed as the first token of a filler.
pub fn first_ok(category: Category, pos: Pos) -> bool {
    use Pos::*;
    if pos == Any {
        return true;
    }
    match category {
        Category::Np => matches!(pos, Det | N | Propn | Pron | Adj | Num),
        Category::Pp => pos == Adp,
        Category::Vp => matches!(pos, V | Aux),
        Category::Adjp => matches!(pos, Adj | Adjr | Adv | Advr),
        Category::Advp => matches!(pos, Adv | Advr),
        Category::Clause => pos != Punct,
        Category::N => matches!(pos, N | Propn),
        Category::V => pos == V,
        Category::Det => pos == Det,
        Category::Any => true,
    }
}

/// Part-of-speech tags allowed after the first token of a filler.
pub fn continuation_ok(category: Category, pos: Pos) -> bool {
    use Pos::*;
    if pos == Any {
        return true;
    }
    match category {
        Category::Np => matches!(pos, Det | N | Propn | Adj | Adjr | Num | Adp | Conj),
        Category::Pp => matches!(pos, Det | N | Propn | Pron | Adj | Adjr | Num | Adp | Conj),
        Category::Vp => !matches!(pos, Punct | Conj),
        Category::Adjp => matches!(pos, Adj | Adjr | Adv | Advr),
        Category::Advp => matches!(pos, Adv | Advr),
        Category::Clause => pos != Punct,
        Category::N => matches!(pos, N | Propn),
        Category::V => pos == V,
        Category::Det => pos == Det,
        Category::Any => true,
    }
}

fn eq_ci(a: &str, b: &str) -> bool {
    a == b || a.to_lowercase() == b.to_lowercase()
}

/// Does `token` realize the lemma `form`?
pub fn token_matches(token: &Token, form: &str) -> bool {
    eq_ci(&token.lemma, form) || eq_ci(&token.surface, form)
}

/// Lengths (in tokens) at which substantive `slot` matches from `start`.
pub fn substantive_lengths(slot: &Slot, sentence: &[Token], start: usize) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for form in &slot.surface_forms {
        let parts: Vec<&str> = form.split_whitespace().collect();
        if parts.is_empty() || start + parts.len() > sentence.len() {
            continue;
        }
        if parts
            .iter()
            .zip(&sentence[start..])
            .all(|(p, t)| token_matches(t, p))
        {
            out.insert(parts.len());
        }
    }
    out
}

/// Is `range` an admissible filler for schematic `slot`, ignoring context?
pub fn schematic_fits(slot: &Slot, sentence: &[Token], range: TokenRange) -> bool {
    let Some(category) = slot.category else {
        return false;
    };
    let (min, max) = (slot.min_tokens.unwrap_or(1), slot.max_tokens.unwrap_or(1));
    if range.end >= sentence.len() || range.len() < min || range.len() > max {
        return false;
    }
    let first = &sentence[range.start];
    if !first_ok(category, first.pos) {
        return false;
    }
    if slot.comparative && !matches!(first.pos, Pos::Adjr | Pos::Advr | Pos::Any) {
        return false;
    }
    sentence[range.start + 1..=range.end]
        .iter()
        .all(|t| continuation_ok(category, t.pos))
}

/// Rejects a schematic filler that stops short of a phrase it could have
/// absorbed: the free token to its right continues the phrase, or the free
/// token to its left could start it.
pub fn maximal(
    slot: &Slot,
    sentence: &[Token],
    range: TokenRange,
    assigned: &BTreeSet<usize>,
) -> bool {
    let Some(category) = slot.category else {
        return true;
    };
    if range.len() >= slot.max_tokens.unwrap_or(1) {
        return true;
    }
    let right = range.end + 1;
    if right < sentence.len()
        && !assigned.contains(&right)
        && continuation_ok(category, sentence[right].pos)
    {
        return false;
    }
    if range.start > 0 {
        let left = range.start - 1;
        if !assigned.contains(&left)
            && first_ok(category, sentence[left].pos)
            && continuation_ok(category, sentence[range.start].pos)
            && !(slot.comparative
                && !matches!(sentence[left].pos, Pos::Adjr | Pos::Advr | Pos::Any))
        {
            return false;
        }
    }
    true
}

/// Builds a span from a complete slot assignment, or `None` when a
/// schematic filler is not maximal.
pub fn build_span(
    cxn: &Construction,
    variant: &SlotPattern,
    sentence: &[Token],
    ranges: &[TokenRange],
) -> Option<MatchSpan> {
    let assigned: BTreeSet<usize> = ranges.iter().flat_map(|r| r.indices()).collect();
    let mut span = MatchSpan {
        cxn_id: cxn.id.clone(),
        variant_id: variant.variant_id.clone(),
        assignments: Vec::with_capacity(ranges.len()),
        roles: BTreeMap::new(),
        rel_tokens: BTreeSet::new(),
        anchors: BTreeSet::new(),
        ambiguous_literal: false,
        light_verb: None,
        eventive: None,
    };
    let lvc = variant.slots.iter().any(|s| s.lv_marker);
    for (slot, range) in variant.slots.iter().zip(ranges) {
        match slot.kind {
            SlotKind::Substantive => {
                span.anchors.extend(range.indices());
                if !slot.function_word {
                    span.rel_tokens.extend(range.indices());
                }
                if slot.lv_marker && span.light_verb.is_none() {
                    span.light_verb = Some(range.start);
                }
            }
            SlotKind::Schematic => {
                if !maximal(slot, sentence, *range, &assigned) {
                    return None;
                }
                if lvc && span.eventive.is_none() && slot.category == Some(Category::N) {
                    span.eventive = Some(*range);
                    span.rel_tokens.extend(range.indices());
                }
            }
        }
        if let Some(role) = &slot.role_binding {
            span.roles.insert(role.clone(), *range);
        }
        span.assignments.push((slot.id.clone(), *range));
    }
    Some(span)
}

fn search(
    cxn: &Construction,
    variant: &SlotPattern,
    sentence: &[Token],
    ranges: &mut Vec<TokenRange>,
    out: &mut Vec<MatchSpan>,
) {
    let i = ranges.len();
    if i == variant.slots.len() {
        if let Some(span) = build_span(cxn, variant, sentence, ranges) {
            out.push(span);
        }
        return;
    }
    let n = sentence.len();
    let starts = match ranges.last() {
        None => 0..n,
        Some(prev) => (prev.end + 1)..(prev.end + 2 + cxn.gap_limit).min(n),
    };
    let slot = &variant.slots[i];
    for start in starts {
        match slot.kind {
            SlotKind::Substantive => {
                for len in substantive_lengths(slot, sentence, start) {
                    ranges.push(TokenRange::new(start, start + len - 1));
                    search(cxn, variant, sentence, ranges, out);
                    ranges.pop();
                }
            }
            SlotKind::Schematic => {
                let min = slot.min_tokens.unwrap_or(1).max(1);
                let max = slot.max_tokens.unwrap_or(1);
                for len in min..=max {
                    let range = TokenRange::new(start, start + len - 1);
                    if range.end >= n {
                        break;
                    }
                    if schematic_fits(slot, sentence, range) {
                        ranges.push(range);
                        search(cxn, variant, sentence, ranges, out);
                        ranges.pop();
                    }
                }
            }
        }
    }
}

/// Every candidate instance of `cxn` in `sentence`, over all variants,
/// sorted by `(start, cxn_id, variant_id)`.
pub fn match_construction(cxn: &Construction, sentence: &[Token]) -> Vec<MatchSpan> {
    let mut out = Vec::new();
    for variant in &cxn.variants {
        if variant.slots.is_empty() {
            continue;
        }
        search(cxn, variant, sentence, &mut Vec::new(), &mut out);
    }
    out.sort_by(candidate_cmp);
    out.dedup();
    out
}

/// Light verb constructions. The light verb stays in `rel_tokens` without a
/// role; the eventive noun carries the relation. A match is dropped when the
/// eventive lemma is on the construction's exclusion list.
pub fn detect_lvc(sentence: &[Token], lexicon: &Lexicon) -> Vec<MatchSpan> {
    let mut out = Vec::new();
    for cxn in lexicon.constructions.values().filter(|c| c.is_lvc()) {
        for span in match_construction(cxn, sentence) {
            // Gaps count: "take a strip of paper" must not surface as
            // take + paper.
            let excluded = span.eventive.is_some_and(|r| {
                sentence[span.start()..=r.end]
                    .iter()
                    .any(|t| cxn.exclusions.iter().any(|x| eq_ci(x, &t.lemma)))
            });
            if !excluded {
                out.push(span);
            }
        }
    }
    out.sort_by(candidate_cmp);
    out
}

/// Greedy selection of pairwise token-disjoint matches in [`score_cmp`]
/// order. Output is sorted like candidates.
pub fn resolve_overlaps(candidates: &[MatchSpan]) -> Vec<MatchSpan> {
    let mut ranked: Vec<&MatchSpan> = candidates.iter().collect();
    ranked.sort_by(|a, b| score_cmp(a, b));
    let mut taken: BTreeSet<usize> = BTreeSet::new();
    let mut out: Vec<MatchSpan> = Vec::new();
    for m in ranked {
        let tokens = m.token_set();
        if tokens.is_disjoint(&taken) {
            taken.extend(tokens);
            out.push(m.clone());
        }
    }
    out.sort_by(candidate_cmp);
    out.dedup();
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Annotation {
    pub span: MatchSpan,
    /// Meaning-pole roleset of the construction.
    pub predicate_id: String,
    /// For light verb constructions, the eventive noun's roleset when the
    /// lexicon has one (`walk` -> `walk-01`).
    pub eventive_predicate: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct AnnotationSet {
    pub matches: Vec<Annotation>,
}

fn eventive_roleset(lexicon: &Lexicon, lemma: &str) -> Option<String> {
    let lemma = lemma.to_lowercase();
    lexicon
        .rolesets
        .keys()
        .find(|id| {
            id.rsplit_once('-').is_some_and(|(head, sense)| {
                head == lemma && !sense.is_empty() && sense.chars().all(|c| c.is_ascii_digit())
            })
        })
        .cloned()
}

pub fn annotate(lexicon: &Lexicon, sentence: &[Token]) -> AnnotationSet {
    let mut candidates = Vec::new();
    for cxn in lexicon.constructions.values().filter(|c| !c.is_lvc()) {
        candidates.extend(match_construction(cxn, sentence));
    }
    candidates.extend(detect_lvc(sentence, lexicon));
    let matches = resolve_overlaps(&candidates)
        .into_iter()
        .map(|mut span| {
            let cxn = &lexicon.constructions[&span.cxn_id];
            let meaning = lexicon.rolesets.get(&cxn.meaning);
            span.ambiguous_literal = meaning.is_some_and(|rs| rs.mapping.is_some());
            let eventive_predicate = span
                .eventive
                .and_then(|r| eventive_roleset(lexicon, &sentence[r.end].lemma));
            Annotation {
                span,
                predicate_id: cxn.meaning.clone(),
                eventive_predicate,
            }
        })
        .collect();
    AnnotationSet { matches }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::*;
    use alloc::vec;
    use Pos::*;

    fn arg(s: &str) -> ArgLabel {
        s.parse().unwrap()
    }

    fn r(a: usize, b: usize) -> TokenRange {
        TokenRange::new(a, b)
    }

    fn let_alone() -> Construction {
        let a = Slot::schematic("A", Category::Np, 1, 8).with_role(arg("ARG1"));
        let l = Slot::substantive("L", &["let alone"]);
        let b = Slot::schematic("B", Category::Np, 1, 8).with_role(arg("ARG2"));
        Construction::new(
            "let-alone",
            "let-alone-01",
            vec![SlotPattern::new("bare", vec![a, l, b])],
        )
    }

    fn ceasefire() -> Vec<Token> {
        sentence(&[
            ("A", "a", Det),
            ("ceasefire", "ceasefire", N),
            (",", ",", Punct),
            ("let", "let", Conj),
            ("alone", "alone", Conj),
            ("lasting", "lasting", Adj),
            ("peace", "peace", N),
            (",", ",", Punct),
            ("will", "will", Aux),
            ("take", "take", V),
            ("long", "long", Adj),
            ("negotiation", "negotiation", N),
            (".", ".", Punct),
        ])
    }

    #[test]
    fn let_alone_single_candidate() {
        let got = match_construction(&let_alone(), &ceasefire());
        assert_eq!(got.len(), 1, "{got:#?}");
        let m = &got[0];
        assert_eq!(
            m.assignments,
            vec![
                ("A".into(), r(0, 1)),
                ("L".into(), r(3, 4)),
                ("B".into(), r(5, 6))
            ]
        );
        assert_eq!(m.rel_tokens, [3, 4].into_iter().collect());
    }

    #[test]
    fn frozen_anchor_admits_no_gap() {
        let mut s = ceasefire();
        s.insert(4, Token::new(4, "even", None, Some(Adv)));
        for (i, t) in s.iter_mut().enumerate() {
            t.index = i;
        }
        assert!(match_construction(&let_alone(), &s).is_empty());
    }

    #[test]
    fn empty_sentence_has_no_candidates() {
        assert!(match_construction(&let_alone(), &[]).is_empty());
    }

    fn catch_bug() -> Construction {
        let mut c = Slot::substantive("C", &["a"]);
        c.function_word = true;
        Construction::new(
            "catch-bug-01",
            "catch-bug-01",
            vec![SlotPattern::new(
                "v",
                vec![
                    Slot::schematic("A", Category::Np, 1, 6).with_role(arg("ARG1")),
                    Slot::substantive("B", &["catch"]),
                    c,
                    Slot::schematic("D", Category::N, 1, 3).with_role(arg("ARG2")),
                    Slot::substantive("E", &["bug"]),
                    Slot::schematic("F", Category::Pp, 1, 6).with_role(arg("ARG3")),
                ],
            )],
        )
    }

    fn liu() -> Vec<Token> {
        sentence(&[
            ("Liu", "liu", Propn),
            ("caught", "catch", V),
            ("a", "a", Det),
            ("stomach", "stomach", N),
            ("bug", "bug", N),
            ("from", "from", Adp),
            ("Cooper", "cooper", Propn),
        ])
    }

    #[test]
    fn catch_bug_roles() {
        let got = match_construction(&catch_bug(), &liu());
        assert_eq!(got.len(), 1);
        let m = &got[0];
        assert_eq!(m.roles[&arg("ARG1")], r(0, 0));
        assert_eq!(m.roles[&arg("ARG2")], r(3, 3));
        assert_eq!(m.roles[&arg("ARG3")], r(5, 6));
        assert_eq!(m.rel_tokens, [1, 4].into_iter().collect());
        assert_eq!(m.anchors, [1, 2, 4].into_iter().collect());
    }

    fn take_lvc() -> Lexicon {
        let mut lex = Lexicon::default();
        let mut lv = Slot::substantive("L", &["take"]);
        lv.lv_marker = true;
        let mut det = Slot::substantive("D", &["a"]);
        det.function_word = true;
        let mut cxn = Construction::new(
            "take-lvc",
            "take-lvc-01",
            vec![SlotPattern::new(
                "v",
                vec![lv, det, Slot::schematic("N", Category::N, 1, 1)],
            )],
        );
        cxn.exclusions.insert("strip".into());
        lex.add_construction(cxn);
        lex.add_roleset(Roleset::new(
            "take-lvc-01",
            "light take",
            RolesetKind::Lexical,
            vec![],
        ));
        lex.add_roleset(Roleset::new(
            "walk-01",
            "walk",
            RolesetKind::Lexical,
            vec![],
        ));
        lex
    }

    #[test]
    fn take_a_walk_is_an_lvc() {
        let s = sentence(&[("take", "take", V), ("a", "a", Det), ("walk", "walk", N)]);
        let got = detect_lvc(&s, &take_lvc());
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].light_verb, Some(0));
        assert_eq!(got[0].eventive, Some(r(2, 2)));
        assert!(got[0].roles.is_empty());
        let set = annotate(&take_lvc(), &s);
        assert_eq!(
            set.matches[0].eventive_predicate.as_deref(),
            Some("walk-01")
        );
    }

    #[test]
    fn take_a_strip_is_excluded() {
        let s = sentence(&[
            ("take", "take", V),
            ("a", "a", Det),
            ("strip", "strip", N),
            ("of", "of", Adp),
            ("paper", "paper", N),
        ]);
        assert!(detect_lvc(&s, &take_lvc()).is_empty());
        let none = sentence(&[("fold", "fold", V), ("it", "it", Pron)]);
        assert!(detect_lvc(&none, &take_lvc()).is_empty());
    }

    fn span(cxn: &str, anchors: &[usize], ranges: &[(usize, usize)]) -> MatchSpan {
        MatchSpan {
            cxn_id: cxn.into(),
            variant_id: "v".into(),
            assignments: ranges
                .iter()
                .enumerate()
                .map(|(i, (a, b))| (alloc::format!("S{i}"), r(*a, *b)))
                .collect(),
            roles: BTreeMap::new(),
            rel_tokens: anchors.iter().copied().collect(),
            anchors: anchors.iter().copied().collect(),
            ambiguous_literal: false,
            light_verb: None,
            eventive: None,
        }
    }

    #[test]
    fn more_anchors_win() {
        let two = span("z", &[1, 2], &[(0, 0), (1, 2)]);
        let one = span("a", &[2], &[(2, 2), (3, 3)]);
        assert_eq!(resolve_overlaps(&[one, two.clone()]), vec![two]);
    }

    #[test]
    fn disjoint_all_kept() {
        let a = span("a", &[0], &[(0, 1)]);
        let b = span("b", &[3], &[(3, 4)]);
        assert_eq!(resolve_overlaps(&[b.clone(), a.clone()]), vec![a, b]);
    }

    #[test]
    fn tie_goes_to_smaller_id() {
        let a = span("alpha", &[1], &[(0, 1)]);
        let b = span("beta", &[1], &[(0, 1)]);
        assert_eq!(resolve_overlaps(&[b, a.clone()]), vec![a]);
    }

    #[test]
    fn categories() {
        assert!(first_ok(Category::Np, Det) && !first_ok(Category::Np, Adp));
        assert!(first_ok(Category::Pp, Adp) && !first_ok(Category::Pp, N));
        assert!(first_ok(Category::Clause, V) && !first_ok(Category::Clause, Punct));
        for p in Pos::ALL {
            assert!(first_ok(Category::Any, *p));
            assert!(first_ok(Category::Np, Any) || *p != Any);
        }
    }
}
