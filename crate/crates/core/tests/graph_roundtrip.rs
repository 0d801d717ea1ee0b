mod common;

use common::graphs::graph;
use cxn_core::graph::{normalize_ws, parse_graph, serialize_graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn serialize_then_parse_is_identity(g in graph()) {
        prop_assert!(g.is_canonical());
        let text = serialize_graph(&g);
        prop_assert_eq!(parse_graph(&text).unwrap(), g.clone());
        prop_assert_eq!(parse_graph(&normalize_ws(&text)).unwrap(), g);
    }

    #[test]
    fn serialization_is_stable(g in graph()) {
        let text = serialize_graph(&g);
        prop_assert_eq!(serialize_graph(&parse_graph(&text).unwrap()), text);
    }

    #[test]
    fn every_edge_sits_on_its_own_indented_line(g in graph()) {
        let text = serialize_graph(&g);
        for line in text.lines().skip(1) {
            let indent = line.len() - line.trim_start().len();
            prop_assert!(indent >= 2 && indent % 2 == 0);
            prop_assert!(line.trim_start().starts_with(':'));
        }
    }
}
