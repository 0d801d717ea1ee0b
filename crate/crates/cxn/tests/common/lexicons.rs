//! Random lexicons that validate without errors.

use std::collections::BTreeSet;

use cxn_core::model::{
    ArgLabel, ArgSpec, Category, Construction, Fixedness, Lexicon, MappingExtra, MappingTarget,
    MetaphorMapping, MorphEntry, MorphSlotKind, MorphTemplate, Roleset, RolesetKind, Schematicity,
    Slot, SlotPattern, SurfaceRole, TemplateSlot, ThematicFunction, TokenSlot, TokenSlotMap,
};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum SlotSpec {
    Substantive {
        forms: BTreeSet<String>,
        function: bool,
    },
    Schematic {
        cat: Category,
        min: usize,
        extra: usize,
        comparative: bool,
        bound: bool,
    },
}

fn word() -> impl Strategy<Value = String> {
    "[a-z]{1,6}( [a-z]{1,6})?"
}

fn text() -> impl Strategy<Value = String> {
    "[a-zA-Z ,.'\"é3-]{0,16}"
}

fn slot_spec() -> impl Strategy<Value = SlotSpec> {
    prop_oneof![
        (prop::collection::btree_set(word(), 1..=2), any::<bool>())
            .prop_map(|(forms, function)| SlotSpec::Substantive { forms, function }),
        (
            prop::sample::select(Category::ALL),
            1usize..=3,
            0usize..=4,
            any::<bool>(),
            any::<bool>()
        )
            .prop_map(
                |(cat, min, extra, comparative, bound)| SlotSpec::Schematic {
                    cat,
                    min,
                    extra,
                    comparative,
                    bound
                }
            ),
    ]
}

#[derive(Clone, Debug)]
struct CxnSpec {
    slots: Vec<SlotSpec>,
    second_variant: bool,
    gap_limit: usize,
    schematicity: Option<Schematicity>,
    exclusions: BTreeSet<String>,
    first_arg: u8,
    mwe: bool,
    shift: u8,
    degree: bool,
    locative: bool,
    functions: Vec<ThematicFunction>,
    descriptions: Vec<String>,
}

fn cxn_spec() -> impl Strategy<Value = CxnSpec> {
    (
        prop::collection::vec(slot_spec(), 1..=4),
        any::<bool>(),
        0usize..=6,
        prop::option::of(prop::sample::select(Schematicity::ALL)),
        prop::collection::btree_set("[a-z]{2,6}", 0..=2),
        0u8..=1,
        any::<bool>(),
        0u8..=6,
        any::<bool>(),
        any::<bool>(),
        prop::collection::vec(prop::sample::select(ThematicFunction::ALL), 6),
        prop::collection::vec(text(), 6),
    )
        .prop_map(
            |(
                slots,
                second_variant,
                gap_limit,
                schematicity,
                exclusions,
                first_arg,
                mwe,
                shift,
                degree,
                locative,
                functions,
                descriptions,
            )| CxnSpec {
                slots,
                second_variant,
                gap_limit,
                schematicity,
                exclusions,
                first_arg,
                mwe,
                shift,
                degree,
                locative,
                functions,
                descriptions,
            },
        )
}

const LETTERS: &[&str] = &["A", "B", "C", "D", "E", "F"];

fn build(i: usize, spec: &CxnSpec, lex: &mut Lexicon) {
    let rs_id = format!("r{i}-01");
    let mut next = spec.first_arg;
    let mut slots = Vec::new();
    let mut token_slots = TokenSlotMap::default();
    let mut args = Vec::new();
    for (k, s) in spec.slots.iter().enumerate() {
        let id = LETTERS[k];
        match s {
            SlotSpec::Substantive { forms, function } => {
                let refs: Vec<&str> = forms.iter().map(String::as_str).collect();
                let mut slot = Slot::substantive(id, &refs);
                slot.function_word = *function;
                let role = if *function {
                    SurfaceRole::FixedFunction
                } else {
                    SurfaceRole::Rel
                };
                token_slots
                    .entries
                    .insert(id.into(), TokenSlot::new(role, None));
                slots.push(slot);
            }
            SlotSpec::Schematic {
                cat,
                min,
                extra,
                comparative,
                bound,
            } => {
                let mut slot = Slot::schematic(id, *cat, *min, min + extra);
                slot.comparative = *comparative;
                if *bound {
                    let label = ArgLabel::Numbered(next);
                    next += 1;
                    slot = slot.with_role(label.clone());
                    token_slots.entries.insert(
                        id.into(),
                        TokenSlot::new(SurfaceRole::ArgBearing, Some(label.clone())),
                    );
                    let n = args.len();
                    args.push(ArgSpec::new(
                        label,
                        spec.functions[n],
                        &spec.descriptions[n],
                    ));
                }
                slots.push(slot);
            }
        }
    }
    if spec.locative {
        let mut loc = ArgSpec::new(
            ArgLabel::Modifier("LOC".into()),
            ThematicFunction::Goal,
            "where",
        );
        loc.fixedness = Fixedness::SemiFixed;
        args.push(loc);
    }

    let mut variants = vec![SlotPattern::new("v0", slots.clone())];
    if spec.second_variant {
        let mut v = SlotPattern::new("v1", slots);
        v.notes = "alternate order of mention".into();
        variants.push(v);
    }
    let mut cxn = Construction::new(&format!("c{i}"), &rs_id, variants);
    cxn.gap_limit = spec.gap_limit;
    cxn.schematicity = spec.schematicity;
    cxn.exclusions = spec.exclusions.clone();
    lex.add_construction(cxn);

    let mwe = spec.mwe && !token_slots.entries.is_empty();
    let kind = if mwe {
        RolesetKind::Mwe
    } else {
        RolesetKind::Lexical
    };
    let mut rs = Roleset::new(&rs_id, &spec.descriptions[5], kind, args);
    if mwe {
        let pairs = rs
            .args
            .iter()
            .filter_map(|a| a.number.number())
            .map(|n| {
                (
                    ArgLabel::Numbered(n),
                    MappingTarget::Arg(ArgLabel::Numbered((n + spec.shift) % 7)),
                )
            })
            .collect();
        let extras = if spec.degree {
            vec![MappingExtra::Relation {
                label: ":degree".into(),
                value: "intensifier".into(),
            }]
        } else {
            vec![]
        };
        rs.token_slots = Some(token_slots);
        rs.mapping = Some(MetaphorMapping {
            literal: "lit-01".into(),
            idiomatic: None,
            pairs,
            idiomatic_pairs: vec![],
            extras,
        });
    }
    lex.add_roleset(rs);
}

fn literal_roleset() -> Roleset {
    let mut args: Vec<ArgSpec> = (0..=6)
        .map(|n| {
            ArgSpec::new(
                ArgLabel::Numbered(n),
                ThematicFunction::Theme,
                &format!("participant {n}"),
            )
        })
        .collect();
    args[6].fixedness = Fixedness::Implicit;
    args[6].implicit_concept = Some("<thing>".into());
    Roleset::new("lit-01", "literal reading", RolesetKind::Lexical, args)
}

fn morpheme() -> impl Strategy<Value = MorphEntry> {
    let in_template = (
        "-?[a-z3']{1,5}",
        "[a-z.]{1,8}",
        prop::sample::subsequence(MorphSlotKind::ALL, 1..=3),
        prop::collection::btree_set("[a-z3']{1,5}", 0..=2),
    )
        .prop_map(|(form, gloss, slots, variants)| {
            let mut m = MorphEntry::new(&form, &gloss, &slots, "");
            m.surface_variants = variants;
            m
        });
    let stem_piece = (
        "[a-z3']{1,5}",
        "[a-z.]{1,8}",
        prop::sample::select(vec!["initial.root", "medial.body-part", "final.manner"]),
    )
        .prop_map(|(form, gloss, class)| MorphEntry::new(&form, &gloss, &[], class));
    prop_oneof![in_template, stem_piece]
}

fn template() -> impl Strategy<Value = MorphTemplate> {
    prop::collection::vec((any::<bool>(), any::<bool>()), MorphSlotKind::ALL.len()).prop_map(
        |flags| MorphTemplate {
            template_id: "verb-word".into(),
            slots: MorphSlotKind::ALL
                .iter()
                .zip(flags)
                .map(|(k, (required, repeatable))| TemplateSlot {
                    name: k.as_str().into(),
                    kind: *k,
                    required: required || *k == MorphSlotKind::Stem,
                    repeatable: repeatable && k.is_preverb(),
                })
                .collect(),
        },
    )
}

pub fn lexicon() -> impl Strategy<Value = Lexicon> {
    (
        prop::collection::vec(cxn_spec(), 0..=10),
        prop::collection::vec(morpheme(), 0..=6),
        prop::option::of(template()),
    )
        .prop_map(|(specs, morphemes, template)| {
            let mut lex = Lexicon::default();
            lex.add_roleset(literal_roleset());
            for (i, s) in specs.iter().enumerate() {
                build(i, s, &mut lex);
            }
            lex.morphemes = morphemes;
            lex.templates.extend(template);
            lex
        })
}
