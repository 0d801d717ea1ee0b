//! Random canonical graphs.

use cxn_core::graph::{MeaningGraph, Node, Target};
use proptest::prelude::*;

const LABELS: &[&str] = &[
    ":arg0",
    ":arg1",
    ":arg2",
    ":arg3",
    ":arg10",
    ":mod",
    ":degree",
    ":refer-definiteness",
    ":domain",
    ":quant",
];

fn var() -> impl Strategy<Value = String> {
    "[A-F]{1,2}"
}

fn concept() -> impl Strategy<Value = String> {
    prop_oneof![
        "[a-z]{1,6}-0[1-9]",
        "narg[0-3]-[A-Za-z']{1,6}",
        "<[a-z]{1,5}( [a-z]{1,4})?>",
        "[a-z]{1,8}",
    ]
}

fn constant() -> impl Strategy<Value = String> {
    prop_oneof!["[a-z]{1,10}", "-", "[0-9]{1,3}"]
}

fn node() -> impl Strategy<Value = Node> {
    let leaf = (var(), concept()).prop_map(|(v, c)| Node::new(&v, &c));
    leaf.prop_recursive(4, 24, 4, |inner| {
        let target = prop_oneof![
            inner.prop_map(Target::Node),
            constant().prop_map(Target::Constant),
        ];
        (
            var(),
            concept(),
            prop::collection::vec((prop::sample::select(LABELS), target), 0..=4),
        )
            .prop_map(|(v, c, edges)| {
                let mut n = Node::new(&v, &c);
                for (label, t) in edges {
                    n.push_edge(label, t);
                }
                n
            })
    })
}

pub fn graph() -> impl Strategy<Value = MeaningGraph> {
    node().prop_map(MeaningGraph::new)
}
