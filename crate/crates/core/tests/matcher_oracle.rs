mod common;

use std::collections::BTreeSet;

use common::matcher::{disagreement, lexicon, sentence};
use cxn_core::matcher::{annotate, MatchSpan, Token};
use cxn_core::model::Lexicon;
use proptest::prelude::*;

fn spans(lex: &Lexicon, s: &[Token]) -> Vec<MatchSpan> {
    annotate(lex, s)
        .matches
        .into_iter()
        .map(|a| a.span)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn engine_agrees_with_exhaustive_search(lex in lexicon(), s in sentence()) {
        if let Some(d) = disagreement(&lex, &s) {
            prop_assert!(false, "{}", d);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn selected_matches_are_disjoint(lex in lexicon(), s in sentence()) {
        let out = spans(&lex, &s);
        for (i, a) in out.iter().enumerate() {
            for b in &out[i + 1..] {
                prop_assert!(a.token_set().is_disjoint(&b.token_set()));
            }
        }
    }

    #[test]
    fn order_of_constructions_and_variants_is_irrelevant(lex in lexicon(), s in sentence()) {
        let mut flipped = lex.clone();
        for c in flipped.constructions.values_mut() {
            c.variants.reverse();
        }
        // Rebuild the map from a reversed insertion order too.
        let cs: Vec<_> = flipped.constructions.values().cloned().collect();
        flipped.constructions.clear();
        for c in cs.into_iter().rev() {
            flipped.add_construction(c);
        }
        prop_assert_eq!(spans(&lex, &s), spans(&flipped, &s));
    }

    #[test]
    fn repeated_runs_agree(lex in lexicon(), s in sentence()) {
        prop_assert_eq!(annotate(&lex, &s), annotate(&lex, &s));
    }

    #[test]
    fn losing_an_anchor_loses_its_matches(lex in lexicon(), s in sentence()) {
        let before = spans(&lex, &s);
        let anchors: BTreeSet<usize> = before.iter().flat_map(|m| m.anchors.iter().copied()).collect();
        for i in anchors {
            let mut changed = s.clone();
            changed[i] = Token::new(i, "zz", Some("zz"), Some(s[i].pos));
            let after = spans(&lex, &changed);
            for m in before.iter().filter(|m| m.anchors.contains(&i)) {
                prop_assert!(
                    // Another variant may still cover the same ranges schematically.
                    !after.iter().any(|a| a.cxn_id == m.cxn_id
                        && a.variant_id == m.variant_id
                        && a.assignments == m.assignments),
                    "{:?} survived losing token {}", m, i
                );
            }
        }
    }
}
