//! Exhaustive matcher: every slot-to-span assignment, every disjoint subset.

use std::collections::{BTreeMap, BTreeSet};

use cxn_core::matcher::{
    candidate_cmp, continuation_ok, first_ok, score_cmp, MatchSpan, Pos, Token, TokenRange,
};
use cxn_core::model::{Category, Construction, Lexicon, Slot, SlotKind, SlotPattern};
use proptest::prelude::*;

const VOCAB: &[&str] = &["a", "b", "c", "d"];
const TAGS: &[Pos] = &[
    Pos::Det,
    Pos::N,
    Pos::Propn,
    Pos::Adj,
    Pos::Adjr,
    Pos::V,
    Pos::Adp,
    Pos::Conj,
    Pos::Punct,
    Pos::Any,
];
const CATEGORIES: &[Category] = &[
    Category::Np,
    Category::Pp,
    Category::Vp,
    Category::Adjp,
    Category::N,
    Category::V,
    Category::Det,
    Category::Clause,
    Category::Any,
];

fn form() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(VOCAB), 1..=2).prop_map(|w| w.join(" "))
}

fn slot(id: String) -> impl Strategy<Value = Slot> {
    let substantive = (prop::collection::btree_set(form(), 1..=2), any::<bool>()).prop_map({
        let id = id.clone();
        move |(forms, function)| {
            let refs: Vec<&str> = forms.iter().map(String::as_str).collect();
            let mut s = Slot::substantive(&id, &refs);
            s.function_word = function;
            s
        }
    });
    let schematic = (
        prop::sample::select(CATEGORIES),
        1usize..=2,
        0usize..=2,
        prop::bool::weighted(0.15),
    )
        .prop_map(move |(cat, min, extra, comparative)| {
            let mut s = Slot::schematic(&id, cat, min, min + extra);
            s.comparative = comparative;
            s
        });
    prop_oneof![substantive, schematic]
}

fn variant(vid: String) -> impl Strategy<Value = SlotPattern> {
    (1usize..=3)
        .prop_flat_map(|n| (0..n).map(|i| slot(format!("S{i}"))).collect::<Vec<_>>())
        .prop_map(move |slots| SlotPattern::new(&vid, slots))
}

fn construction(i: usize) -> impl Strategy<Value = Construction> {
    (prop::collection::vec(any::<()>(), 1..=2), 0usize..=2)
        .prop_flat_map(move |(vs, gap)| {
            let variants: Vec<_> = (0..vs.len()).map(|v| variant(format!("v{v}"))).collect();
            (variants, Just(gap))
        })
        .prop_map(move |(variants, gap)| {
            let mut c = Construction::new(&format!("c{i}"), &format!("m{i}"), variants);
            c.gap_limit = gap;
            c
        })
}

pub fn lexicon() -> impl Strategy<Value = Lexicon> {
    (1usize..=5)
        .prop_flat_map(|n| (0..n).map(construction).collect::<Vec<_>>())
        .prop_map(|cs| {
            let mut lex = Lexicon::default();
            for c in cs {
                lex.add_construction(c);
            }
            lex
        })
}

pub fn sentence() -> impl Strategy<Value = Vec<Token>> {
    prop::collection::vec(
        (
            prop::sample::select(VOCAB),
            prop::sample::select(TAGS),
            any::<bool>(),
        ),
        0..=12,
    )
    .prop_map(|ts| {
        ts.into_iter()
            .enumerate()
            .map(|(i, (lemma, pos, upper))| {
                let surface = if upper {
                    lemma.to_uppercase()
                } else {
                    lemma.to_string()
                };
                Token::new(i, &surface, Some(lemma), Some(pos))
            })
            .collect()
    })
}

fn same(a: &str, b: &str) -> bool {
    a.to_lowercase() == b.to_lowercase()
}

fn slot_ok(slot: &Slot, s: &[Token], r: TokenRange) -> bool {
    let toks = &s[r.start..=r.end];
    match slot.kind {
        SlotKind::Substantive => slot.surface_forms.iter().any(|f| {
            let words: Vec<&str> = f.split_whitespace().collect();
            words.len() == toks.len()
                && words
                    .iter()
                    .zip(toks)
                    .all(|(w, t)| same(w, &t.lemma) || same(w, &t.surface))
        }),
        SlotKind::Schematic => {
            let Some(cat) = slot.category else {
                return false;
            };
            let (min, max) = (slot.min_tokens.unwrap_or(1), slot.max_tokens.unwrap_or(1));
            toks.len() >= min
                && toks.len() <= max
                && first_ok(cat, toks[0].pos)
                && (!slot.comparative || matches!(toks[0].pos, Pos::Adjr | Pos::Advr | Pos::Any))
                && toks[1..].iter().all(|t| continuation_ok(cat, t.pos))
        }
    }
}

fn stops_short(slot: &Slot, s: &[Token], r: TokenRange, used: &BTreeSet<usize>) -> bool {
    let Some(cat) = slot.category else {
        return false;
    };
    if slot.kind != SlotKind::Schematic || r.len() >= slot.max_tokens.unwrap_or(1) {
        return false;
    }
    let right = r.end + 1;
    if right < s.len() && !used.contains(&right) && continuation_ok(cat, s[right].pos) {
        return true;
    }
    r.start > 0 && {
        let left = r.start - 1;
        !used.contains(&left)
            && first_ok(cat, s[left].pos)
            && continuation_ok(cat, s[r.start].pos)
            && (!slot.comparative || matches!(s[left].pos, Pos::Adjr | Pos::Advr | Pos::Any))
    }
}

fn span_of(c: &Construction, v: &SlotPattern, ranges: &[TokenRange]) -> MatchSpan {
    let mut anchors = BTreeSet::new();
    let mut rel = BTreeSet::new();
    let mut roles = BTreeMap::new();
    for (slot, r) in v.slots.iter().zip(ranges) {
        if slot.kind == SlotKind::Substantive {
            anchors.extend(r.indices());
            if !slot.function_word {
                rel.extend(r.indices());
            }
        }
        if let Some(role) = &slot.role_binding {
            roles.insert(role.clone(), *r);
        }
    }
    MatchSpan {
        cxn_id: c.id.clone(),
        variant_id: v.variant_id.clone(),
        assignments: v
            .slots
            .iter()
            .map(|s| s.id.clone())
            .zip(ranges.iter().copied())
            .collect(),
        roles,
        rel_tokens: rel,
        anchors,
        ambiguous_literal: false,
        light_verb: None,
        eventive: None,
    }
}

fn tuples(
    n: usize,
    k: usize,
    from: usize,
    acc: &mut Vec<TokenRange>,
    out: &mut Vec<Vec<TokenRange>>,
) {
    if acc.len() == k {
        out.push(acc.clone());
        return;
    }
    for start in from..n {
        for end in start..n {
            acc.push(TokenRange::new(start, end));
            tuples(n, k, end + 1, acc, out);
            acc.pop();
        }
    }
}

/// Every candidate, by checking each increasing tuple of ranges.
pub fn all_candidates(c: &Construction, s: &[Token]) -> Vec<MatchSpan> {
    let mut out = Vec::new();
    for v in &c.variants {
        let mut ts = Vec::new();
        tuples(s.len(), v.slots.len(), 0, &mut Vec::new(), &mut ts);
        for t in ts {
            let gaps_ok = t
                .windows(2)
                .all(|w| w[1].start - w[0].end - 1 <= c.gap_limit);
            if !gaps_ok || !v.slots.iter().zip(&t).all(|(sl, r)| slot_ok(sl, s, *r)) {
                continue;
            }
            let used: BTreeSet<usize> = t.iter().flat_map(|r| r.indices()).collect();
            if v.slots
                .iter()
                .zip(&t)
                .any(|(sl, r)| stops_short(sl, s, *r, &used))
            {
                continue;
            }
            out.push(span_of(c, v, &t));
        }
    }
    out.sort_by(candidate_cmp);
    out.dedup();
    out
}

/// Best maximal disjoint subset: compare members best-first under the
/// match score, lexicographically. Every maximal subset is visited; a branch
/// is cut only once some skipped candidate can no longer be blocked.
pub fn best_subset(cands: &[MatchSpan]) -> Vec<MatchSpan> {
    struct Search<'a> {
        cands: &'a [MatchSpan],
        masks: Vec<u64>,
        /// `later[i]`: union of the masks of candidates `i..`.
        later: Vec<u64>,
        best: Option<Vec<usize>>,
    }

    impl Search<'_> {
        fn better(&self, mine: &[usize]) -> bool {
            let Some(b) = &self.best else { return true };
            let ord = mine
                .iter()
                .zip(b.iter())
                .map(|(&x, &y)| score_cmp(&self.cands[x], &self.cands[y]))
                .find(|o| o.is_ne())
                .unwrap_or(mine.len().cmp(&b.len()).reverse());
            ord.is_lt()
        }

        fn walk(&mut self, i: usize, used: u64, chosen: &mut Vec<usize>, skipped: &mut Vec<usize>) {
            // A skipped candidate still free must be blocked by a later pick.
            let rest = self.later[i];
            if skipped
                .iter()
                .any(|&k| self.masks[k] & used == 0 && self.masks[k] & rest == 0)
            {
                return;
            }
            if i == self.cands.len() {
                let mut mine = chosen.clone();
                mine.sort_by(|&a, &b| score_cmp(&self.cands[a], &self.cands[b]));
                if self.better(&mine) {
                    self.best = Some(mine);
                }
                return;
            }
            if self.masks[i] & used == 0 {
                chosen.push(i);
                self.walk(i + 1, used | self.masks[i], chosen, skipped);
                chosen.pop();
            }
            skipped.push(i);
            self.walk(i + 1, used, chosen, skipped);
            skipped.pop();
        }
    }

    let masks: Vec<u64> = cands
        .iter()
        .map(|c| c.token_set().into_iter().fold(0u64, |m, t| m | 1 << t))
        .collect();
    let mut later = vec![0u64; cands.len() + 1];
    for i in (0..cands.len()).rev() {
        later[i] = later[i + 1] | masks[i];
    }
    let mut search = Search {
        cands,
        masks,
        later,
        best: None,
    };
    search.walk(0, 0, &mut Vec::new(), &mut Vec::new());
    let mut out: Vec<MatchSpan> = search
        .best
        .unwrap_or_default()
        .into_iter()
        .map(|i| cands[i].clone())
        .collect();
    out.sort_by(candidate_cmp);
    out
}

pub fn brute_annotate(lex: &Lexicon, s: &[Token]) -> Vec<MatchSpan> {
    let mut cands: Vec<MatchSpan> = lex
        .constructions
        .values()
        .flat_map(|c| all_candidates(c, s))
        .collect();
    cands.sort_by(candidate_cmp);
    cands.dedup();
    best_subset(&cands)
}

/// `None` when the engine agrees with the oracle.
pub fn disagreement(lex: &Lexicon, s: &[Token]) -> Option<String> {
    let got: Vec<MatchSpan> = cxn_core::matcher::annotate(lex, s)
        .matches
        .into_iter()
        .map(|a| a.span)
        .collect();
    let want = brute_annotate(lex, s);
    (got != want).then(|| format!("engine {got:#?}\noracle {want:#?}"))
}
