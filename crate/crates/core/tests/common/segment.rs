//! Exhaustive segmenter: every cut of the word, every (morpheme, slot) choice
//! per piece, filtered by the template order read straight off the slots.

use std::collections::BTreeSet;

use cxn_core::model::{Lexicon, MorphEntry, MorphSlotKind, MorphTemplate, TemplateSlot};
use cxn_core::morph::segment_verb_word;
use proptest::prelude::*;

const KINDS: &[MorphSlotKind] = &[
    MorphSlotKind::Proclitic,
    MorphSlotKind::TenseAspectPreverb,
    MorphSlotKind::AdverbialPreverb,
    MorphSlotKind::NominalPreverb,
    MorphSlotKind::Stem,
    MorphSlotKind::DerivationalFinal,
    MorphSlotKind::Inflection,
];

/// Forms over a tiny alphabet so that pieces collide often. No doubled
/// vowels, so initial change never applies.
fn form() -> impl Strategy<Value = String> {
    "[abt]{1,3}".prop_filter("doubled vowel", |s| !s.contains("aa"))
}

pub fn case() -> impl Strategy<Value = (Lexicon, String)> {
    let template = prop::sample::subsequence(KINDS, 2..=4).prop_flat_map(|kinds| {
        let n = kinds.len();
        (
            Just(kinds),
            prop::collection::vec((any::<bool>(), any::<bool>()), n),
        )
    });
    (
        template,
        prop::collection::vec((form(), any::<u8>()), 1..=12),
        "[abt]{1,8}",
    )
        .prop_map(|((kinds, flags), entries, word)| {
            // Size bounds: one repeatable slot at most, and no form shared by
            // more than two entries. Beyond that the parse count of a word
            // like `tttttttt` grows into the hundreds of thousands.
            let mut repeat_seen = false;
            let slots: Vec<TemplateSlot> = kinds
                .iter()
                .zip(flags)
                .map(|(k, (required, repeatable))| {
                    let repeatable = repeatable && !repeat_seen;
                    repeat_seen |= repeatable;
                    TemplateSlot {
                        name: k.as_str().to_string(),
                        kind: *k,
                        required,
                        repeatable,
                    }
                })
                .collect();
            let mut lex = Lexicon::default();
            for (i, (f, mask)) in entries.into_iter().enumerate() {
                if lex.morphemes.iter().filter(|m| m.form == f).count() >= 2 {
                    continue;
                }
                let allowed: Vec<MorphSlotKind> = kinds
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask & (1 << b) != 0)
                    .map(|(_, k)| *k)
                    .collect();
                let allowed = if allowed.is_empty() {
                    vec![kinds[0]]
                } else {
                    allowed
                };
                lex.morphemes
                    .push(MorphEntry::new(&f, &format!("g{i}"), &allowed, "x"));
            }
            lex.templates.push(MorphTemplate {
                template_id: "t".into(),
                slots,
            });
            (lex, word)
        })
}

/// A parse as `(slot name, form, gloss)` per piece.
pub type Parse = Vec<(String, String, String)>;

fn order_ok(t: &MorphTemplate, seq: &[usize]) -> bool {
    let mut last: Option<usize> = None;
    for &j in seq {
        let skipped = match last {
            None => 0..j,
            Some(l) if j == l => {
                if !t.slots[l].repeatable {
                    return false;
                }
                j..j
            }
            Some(l) if j < l => return false,
            Some(l) => l + 1..j,
        };
        if t.slots[skipped].iter().any(|s| s.required) {
            return false;
        }
        last = Some(j);
    }
    let tail = last.map_or(0, |l| l + 1);
    t.slots[tail..].iter().all(|s| !s.required)
}

fn cuts(word: &str) -> Vec<Vec<String>> {
    let n = word.len();
    (0u32..1 << (n - 1))
        .map(|mask| {
            let mut pieces = Vec::new();
            let mut from = 0;
            for i in 1..n {
                if mask & (1 << (i - 1)) != 0 {
                    pieces.push(word[from..i].to_string());
                    from = i;
                }
            }
            pieces.push(word[from..].to_string());
            pieces
        })
        .collect()
}

pub fn brute_segment(lex: &Lexicon, word: &str) -> BTreeSet<Parse> {
    let t = &lex.templates[0];
    let mut out = BTreeSet::new();
    for pieces in cuts(word) {
        let options: Vec<Vec<(usize, &MorphEntry)>> = pieces
            .iter()
            .map(|p| {
                let mut o = Vec::new();
                for e in lex.morphemes.iter().filter(|e| e.form == *p) {
                    for (j, s) in t.slots.iter().enumerate() {
                        if e.allowed_slots.contains(&s.kind) {
                            o.push((j, e));
                        }
                    }
                }
                o
            })
            .collect();
        let mut pick = vec![0usize; pieces.len()];
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        loop {
            let chosen: Vec<(usize, &MorphEntry)> =
                pick.iter().zip(&options).map(|(&k, o)| o[k]).collect();
            let seq: Vec<usize> = chosen.iter().map(|c| c.0).collect();
            if order_ok(t, &seq) {
                out.insert(
                    chosen
                        .iter()
                        .map(|(j, e)| (t.slots[*j].name.clone(), e.form.clone(), e.gloss.clone()))
                        .collect(),
                );
            }
            let mut i = 0;
            while i < pick.len() {
                pick[i] += 1;
                if pick[i] < options[i].len() {
                    break;
                }
                pick[i] = 0;
                i += 1;
            }
            if i == pick.len() {
                break;
            }
        }
    }
    out
}

/// The engine's parses in the same shape; also checks each reassembles to
/// the input.
pub fn engine_segment(lex: &Lexicon, word: &str) -> Result<BTreeSet<Parse>, String> {
    let Ok(segs) = segment_verb_word(word, lex, &lex.templates[0]) else {
        return Ok(BTreeSet::new());
    };
    let mut out = BTreeSet::new();
    for s in segs {
        if s.reassemble() != word {
            return Err(format!("`{}` reassembles as `{}`", word, s.reassemble()));
        }
        out.insert(
            s.pieces
                .iter()
                .map(|p| {
                    (
                        p.slot_name.clone(),
                        p.entry.form.clone(),
                        p.entry.gloss.clone(),
                    )
                })
                .collect(),
        );
    }
    Ok(out)
}

pub fn disagreement(lex: &Lexicon, word: &str) -> Option<String> {
    match engine_segment(lex, word) {
        Err(e) => Some(e),
        Ok(got) => {
            let want = brute_segment(lex, word);
            (got != want).then(|| format!("engine {got:?}\noracle {want:?}"))
        }
    }
}
