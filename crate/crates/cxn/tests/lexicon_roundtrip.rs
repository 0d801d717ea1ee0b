#[allow(dead_code)]
mod common {
    pub mod lexicons;
}

use common::lexicons::lexicon;
use cxn::lexicon_io::{parse_lexicon, serialize_lexicon, Mode};
use cxn_core::validate::{has_errors, validate};
use proptest::prelude::*;

const PAPER: &str = include_str!("../../../fixtures/paper.lexicon.json");

#[test]
fn paper_lexicon_is_a_fixpoint() {
    let lex = parse_lexicon(PAPER.as_bytes(), Mode::Strict).unwrap();
    let text = serialize_lexicon(&lex).unwrap();
    let back = parse_lexicon(text.as_bytes(), Mode::Strict).unwrap();
    assert_eq!(back, lex);
    assert_eq!(serialize_lexicon(&back).unwrap(), text);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn parse_of_serialize_is_identity(lex in lexicon()) {
        let diags = validate(&lex);
        prop_assert!(!has_errors(&diags), "generator produced an invalid lexicon: {:?}", diags);
        let text = serialize_lexicon(&lex).unwrap();
        let back = parse_lexicon(text.as_bytes(), Mode::Strict).unwrap();
        prop_assert_eq!(&back, &lex);
        prop_assert_eq!(serialize_lexicon(&back).unwrap(), text);
    }
}
