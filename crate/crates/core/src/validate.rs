//! Lexicon-wide consistency checks.
//!
//! Every check produces [`Diagnostic`]s instead of failing; callers decide
//! what to do with errors. Output is sorted by `(path, code)` and does not
//! depend on map iteration order.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::vec::Vec;

use crate::diagnostic::{sort_diagnostics, Diagnostic};
use crate::model::{
    classify_schematicity, ArgLabel, Category, Fixedness, Lexicon, MappingExtra, MappingTarget,
    MorphSlotKind, Roleset, RolesetKind, SlotKind, SurfaceRole,
};

pub fn validate(lexicon: &Lexicon) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    for id in lexicon.constructions.keys() {
        check_construction(lexicon, id, &mut out);
    }
    for (id, rs) in &lexicon.rolesets {
        check_roleset(lexicon, id, rs, &mut out);
    }
    check_templates(lexicon, &mut out);
    check_morphemes(lexicon, &mut out);
    sort_diagnostics(&mut out);
    out
}

pub fn has_errors(diags: &[Diagnostic]) -> bool {
    diags.iter().any(Diagnostic::is_error)
}

fn check_label(label: &ArgLabel, path: &str, out: &mut Vec<Diagnostic>) {
    if label.in_inventory() {
        return;
    }
    match label {
        ArgLabel::Numbered(_) => out.push(Diagnostic::error(
            "ARG_OUT_OF_RANGE",
            path,
            format!("{label} is outside ARG0..ARG6"),
        )),
        ArgLabel::Modifier(_) => out.push(Diagnostic::error(
            "ARGM_UNKNOWN",
            path,
            format!("{label} is not a known modifier subtype"),
        )),
    }
}

fn check_construction(lexicon: &Lexicon, id: &str, out: &mut Vec<Diagnostic>) {
    let cxn = &lexicon.constructions[id];
    let base = format!("/constructions/{id}");
    let meaning = lexicon.rolesets.get(&cxn.meaning);
    if meaning.is_none() {
        out.push(Diagnostic::error(
            "MEANING_DANGLING",
            format!("{base}/meaning"),
            format!("roleset `{}` is not in the lexicon", cxn.meaning),
        ));
    }
    if cxn.variants.is_empty() {
        out.push(Diagnostic::error(
            "CXN_NO_VARIANTS",
            base.as_str(),
            "construction has no variants",
        ));
    }

    let mut role_sets: Vec<BTreeSet<&str>> = Vec::new();
    for (vi, variant) in cxn.variants.iter().enumerate() {
        let vpath = format!("{base}/variants/{vi}");
        if variant.slots.is_empty() {
            out.push(Diagnostic::error(
                "SLOT_EMPTY_VARIANT",
                vpath.as_str(),
                format!("variant `{}` has no slots", variant.variant_id),
            ));
        }
        let mut seen_ids = BTreeSet::new();
        let mut seen_roles = BTreeSet::new();
        for (si, slot) in variant.slots.iter().enumerate() {
            let spath = format!("{vpath}/slots/{si}");
            if !seen_ids.insert(slot.id.as_str()) {
                out.push(Diagnostic::error(
                    "SLOT_DUPLICATE_ID",
                    spath.as_str(),
                    format!("slot id `{}` repeats within the variant", slot.id),
                ));
            }
            match slot.kind {
                SlotKind::Substantive => {
                    if slot.surface_forms.is_empty()
                        || slot.surface_forms.iter().any(|f| f.trim().is_empty())
                    {
                        out.push(Diagnostic::error(
                            "SUBSTANTIVE_NO_SURFACE",
                            spath.as_str(),
                            "substantive slot needs non-empty surface forms",
                        ));
                    }
                    if slot.category.is_some() {
                        out.push(Diagnostic::error(
                            "SUBSTANTIVE_HAS_CATEGORY",
                            spath.as_str(),
                            "substantive slot must not carry a category",
                        ));
                    }
                    if slot.min_tokens.is_some() || slot.max_tokens.is_some() || slot.comparative {
                        out.push(Diagnostic::error(
                            "SUBSTANTIVE_HAS_RANGE",
                            spath.as_str(),
                            "token range and comparative apply to schematic slots only",
                        ));
                    }
                }
                SlotKind::Schematic => {
                    if slot.category.is_none() {
                        out.push(Diagnostic::error(
                            "SCHEMATIC_NO_CATEGORY",
                            spath.as_str(),
                            "schematic slot needs a category",
                        ));
                    }
                    match (slot.min_tokens, slot.max_tokens) {
                        (Some(min), Some(max)) if min >= 1 && min <= max => {}
                        _ => out.push(Diagnostic::error(
                            "SCHEMATIC_BAD_RANGE",
                            spath.as_str(),
                            "schematic slot needs 1 <= min <= max",
                        )),
                    }
                    if !slot.surface_forms.is_empty() {
                        out.push(Diagnostic::error(
                            "SCHEMATIC_HAS_SURFACE",
                            spath.as_str(),
                            "schematic slot must not list surface forms",
                        ));
                    }
                    if slot.function_word {
                        out.push(Diagnostic::error(
                            "FUNCTION_INVALID",
                            spath.as_str(),
                            "only substantive slots can be function words",
                        ));
                    }
                }
            }
            if slot.lv_marker && (slot.kind != SlotKind::Substantive || slot.role_binding.is_some())
            {
                out.push(Diagnostic::error(
                    "LV_INVALID",
                    spath.as_str(),
                    "a light verb must be substantive and bind no role",
                ));
            }
            if let Some(role) = &slot.role_binding {
                let rpath = format!("{spath}/role");
                check_label(role, &rpath, out);
                if !seen_roles.insert(role.clone()) {
                    out.push(Diagnostic::error(
                        "ROLE_DUPLICATE",
                        rpath.as_str(),
                        format!("{role} is bound by more than one slot"),
                    ));
                }
                if let Some(rs) = meaning {
                    if rs.arg(role).is_none() {
                        out.push(Diagnostic::error(
                            "ROLE_UNKNOWN",
                            rpath.as_str(),
                            format!("{role} is not an argument of `{}`", rs.predicate_id),
                        ));
                    }
                }
            }
        }
        role_sets.push(variant.role_bound_ids());
    }
    if let Some(first) = role_sets.first() {
        for (vi, set) in role_sets.iter().enumerate().skip(1) {
            if set != first {
                out.push(Diagnostic::error(
                    "VARIANT_ROLE_MISMATCH",
                    format!("{base}/variants/{vi}"),
                    "role-bound slot ids differ from the first variant",
                ));
            }
        }
    }

    if cxn.is_lvc() {
        let has_eventive = cxn.variants.iter().all(|v| {
            v.slots
                .iter()
                .any(|s| s.kind == SlotKind::Schematic && s.category == Some(Category::N))
        });
        if !has_eventive {
            out.push(Diagnostic::error(
                "LVC_NO_EVENTIVE",
                base.as_str(),
                "light verb construction needs a schematic N slot for the eventive noun",
            ));
        }
    }

    if !cxn.variants.is_empty() {
        if let Some(declared) = cxn.schematicity {
            let derived = classify_schematicity(cxn);
            if declared != derived {
                out.push(Diagnostic::warning(
                    "SCHEMATICITY_MISMATCH",
                    format!("{base}/schematicity"),
                    format!("declared {declared}, slot composition gives {derived}"),
                ));
            }
        }
    }
}

fn check_roleset(lexicon: &Lexicon, id: &str, rs: &Roleset, out: &mut Vec<Diagnostic>) {
    let base = format!("/rolesets/{id}");
    let mut seen = BTreeSet::new();
    for (ai, arg) in rs.args.iter().enumerate() {
        let apath = format!("{base}/args/{ai}");
        check_label(&arg.number, &format!("{apath}/number"), out);
        if !seen.insert(arg.number.clone()) {
            out.push(Diagnostic::error(
                "ARG_DUPLICATE",
                apath.as_str(),
                format!("{} is declared twice", arg.number),
            ));
        }
        if arg.fixedness == Fixedness::Implicit && arg.implicit_concept.is_none() {
            out.push(Diagnostic::error(
                "IMPLICIT_NO_CONCEPT",
                apath.as_str(),
                "implicit argument needs a default concept",
            ));
        }
    }
    if rs.kind != RolesetKind::Lexical {
        let empty = rs.token_slots.as_ref().is_none_or(|t| t.entries.is_empty());
        if empty {
            out.push(Diagnostic::error(
                "TOKEN_SLOTS_MISSING",
                base.as_str(),
                format!("{} roleset needs token slots", rs.kind),
            ));
        }
    }
    out.extend(check_mapping(rs, lexicon));
}

/// Checks a roleset's token-slot letters and its metaphor mapping against
/// the rest of the lexicon. Returns sorted diagnostics.
pub fn check_mapping(rs: &Roleset, lexicon: &Lexicon) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let base = format!("/rolesets/{}", rs.predicate_id);
    check_token_slots(lexicon, rs, &base, &mut out);

    let Some(mapping) = &rs.mapping else {
        sort_diagnostics(&mut out);
        return out;
    };
    let mpath = format!("{base}/mapping");
    let literal = lexicon.rolesets.get(&mapping.literal);
    if literal.is_none() {
        out.push(Diagnostic::error(
            "MAPPING_DANGLING",
            format!("{mpath}/literal"),
            format!(
                "literal roleset `{}` is not in the lexicon",
                mapping.literal
            ),
        ));
    }
    let idiomatic = match &mapping.idiomatic {
        Some(name) => {
            let found = lexicon.rolesets.get(name);
            if found.is_none() {
                out.push(Diagnostic::error(
                    "MAPPING_DANGLING",
                    format!("{mpath}/idiomatic"),
                    format!("idiomatic roleset `{name}` is not in the lexicon"),
                ));
            }
            found
        }
        None => Some(rs),
    };

    let mut counts: BTreeMap<ArgLabel, usize> = BTreeMap::new();
    let mut targets = BTreeSet::new();
    for (pi, (from, to)) in mapping.pairs.iter().enumerate() {
        let ppath = format!("{mpath}/pairs/{pi}");
        check_label(from, &ppath, &mut out);
        if rs.arg(from).is_none() {
            out.push(Diagnostic::error(
                "MAPPING_ARG_UNKNOWN",
                ppath.as_str(),
                format!("{from} is not an argument of `{}`", rs.predicate_id),
            ));
        }
        *counts.entry(from.clone()).or_default() += 1;
        if !targets.insert(to.clone()) {
            out.push(Diagnostic::error(
                "MAPPING_TARGET_DUPLICATE",
                ppath.as_str(),
                format!("{to} is the target of more than one pair"),
            ));
        }
        match to {
            MappingTarget::Arg(label) => {
                check_label(label, &ppath, &mut out);
                if let Some(lit) = literal {
                    if label.in_inventory() && lit.arg(label).is_none() {
                        out.push(Diagnostic::error(
                            "MAPPING_TARGET_UNKNOWN",
                            ppath.as_str(),
                            format!("{label} is not an argument of `{}`", lit.predicate_id),
                        ));
                    }
                }
            }
            MappingTarget::Implicit(concept) => {
                if let Some(lit) = literal {
                    let declared = lit
                        .args
                        .iter()
                        .any(|a| a.implicit_concept.as_deref() == Some(concept.as_str()));
                    if !declared {
                        out.push(Diagnostic::error(
                            "IMPLICIT_UNKNOWN",
                            ppath.as_str(),
                            format!("`{}` declares no implicit {concept}", lit.predicate_id),
                        ));
                    }
                }
            }
        }
    }

    for (pi, (from, to)) in mapping.idiomatic_pairs.iter().enumerate() {
        let ppath = format!("{mpath}/idiomatic_pairs/{pi}");
        check_label(to, &ppath, &mut out);
        if rs.arg(from).is_none() {
            out.push(Diagnostic::error(
                "MAPPING_ARG_UNKNOWN",
                ppath.as_str(),
                format!("{from} is not an argument of `{}`", rs.predicate_id),
            ));
        }
        if let Some(idi) = idiomatic {
            if to.in_inventory() && idi.arg(to).is_none() {
                out.push(Diagnostic::error(
                    "MAPPING_TARGET_UNKNOWN",
                    ppath.as_str(),
                    format!("{to} is not an argument of `{}`", idi.predicate_id),
                ));
            }
        }
    }
    if mapping.idiomatic_pairs.is_empty() {
        if let Some(idi) = idiomatic {
            for arg in &rs.args {
                if idi.arg(&arg.number).is_none() {
                    out.push(Diagnostic::error(
                        "MAPPING_TARGET_UNKNOWN",
                        format!("{mpath}/idiomatic"),
                        format!(
                            "{} has no counterpart in `{}`",
                            arg.number, idi.predicate_id
                        ),
                    ));
                }
            }
        }
    }

    for (ei, extra) in mapping.extras.iter().enumerate() {
        if let MappingExtra::IdiomaticOnly(label) = extra {
            let epath = format!("{mpath}/extras/{ei}");
            check_label(label, &epath, &mut out);
            *counts.entry(label.clone()).or_default() += 1;
        }
    }
    for arg in rs.args.iter().filter(|a| a.number.number().is_some()) {
        match counts.get(&arg.number).copied().unwrap_or(0) {
            0 => out.push(Diagnostic::error(
                "MAPPING_UNPAIRED",
                mpath.as_str(),
                format!("{} appears in no pair and no extra", arg.number),
            )),
            1 => {}
            _ => out.push(Diagnostic::error(
                "MAPPING_DUPLICATE",
                mpath.as_str(),
                format!("{} is mapped more than once", arg.number),
            )),
        }
    }
    sort_diagnostics(&mut out);
    out
}

fn check_token_slots(lexicon: &Lexicon, rs: &Roleset, base: &str, out: &mut Vec<Diagnostic>) {
    let Some(map) = &rs.token_slots else { return };
    // Letters of English token maps must name slots of the construction(s)
    // whose meaning pole is this roleset.
    let owners: Vec<_> = lexicon
        .constructions
        .values()
        .filter(|c| c.meaning == rs.predicate_id)
        .collect();
    let owner_ids: BTreeSet<&str> = owners
        .iter()
        .flat_map(|c| c.variants.iter())
        .flat_map(|v| v.slots.iter())
        .map(|s| s.id.as_str())
        .collect();
    for (letter, entry) in &map.entries {
        let path = format!("{base}/token_slots/{letter}");
        let mut chars = letter.chars();
        let well_formed =
            matches!((chars.next(), chars.next()), (Some(c), None) if c.is_ascii_uppercase());
        if !well_formed {
            out.push(Diagnostic::error(
                "TOKEN_SLOT_BAD_LETTER",
                path.as_str(),
                format!("`{letter}` is not a single capital letter"),
            ));
        }
        if entry.slot.is_none() && !owners.is_empty() && !owner_ids.contains(letter.as_str()) {
            out.push(Diagnostic::error(
                "TOKEN_SLOT_UNKNOWN_LETTER",
                path.as_str(),
                format!(
                    "no construction slot `{letter}` realizes `{}`",
                    rs.predicate_id
                ),
            ));
        }
        if let Some(arg) = &entry.arg {
            check_label(arg, &path, out);
            if rs.arg(arg).is_none() {
                out.push(Diagnostic::error(
                    "TOKEN_SLOT_ARG_UNKNOWN",
                    path.as_str(),
                    format!("{arg} is not an argument of `{}`", rs.predicate_id),
                ));
            }
        }
        let role_ok = match entry.role {
            SurfaceRole::Rel => true,
            SurfaceRole::ArgBearing => entry.arg.is_some(),
            SurfaceRole::FixedFunction => entry.arg.is_none(),
        };
        if !role_ok {
            out.push(Diagnostic::error(
                "TOKEN_SLOT_ROLE_MISMATCH",
                path.as_str(),
                format!("{} letter has inconsistent argument binding", entry.role),
            ));
        }
        if entry.part.is_some() && entry.slot != Some(MorphSlotKind::Inflection) {
            out.push(Diagnostic::error(
                "TOKEN_SLOT_ROLE_MISMATCH",
                path.as_str(),
                "`part` selects from an inflection gloss and needs slot inflection",
            ));
        }
    }
}

fn check_templates(lexicon: &Lexicon, out: &mut Vec<Diagnostic>) {
    let mut ids = BTreeSet::new();
    for (ti, t) in lexicon.templates.iter().enumerate() {
        let base = format!("/templates/{ti}");
        if !ids.insert(t.template_id.as_str()) {
            out.push(Diagnostic::error(
                "TEMPLATE_DUPLICATE_ID",
                base.as_str(),
                format!("template id `{}` repeats", t.template_id),
            ));
        }
        let stems: Vec<_> = t
            .slots
            .iter()
            .filter(|s| s.kind == MorphSlotKind::Stem)
            .collect();
        if stems.len() != 1 {
            out.push(Diagnostic::error(
                "TEMPLATE_STEM_COUNT",
                base.as_str(),
                format!(
                    "template needs exactly one stem slot, found {}",
                    stems.len()
                ),
            ));
        }
        if stems.iter().any(|s| !s.required) {
            out.push(Diagnostic::error(
                "TEMPLATE_STEM_OPTIONAL",
                base.as_str(),
                "the stem slot must be required",
            ));
        }
        if let Some(pos) = t
            .slots
            .iter()
            .position(|s| s.kind == MorphSlotKind::Inflection)
        {
            if pos + 1 != t.slots.len() {
                out.push(Diagnostic::error(
                    "TEMPLATE_INFLECTION_NOT_LAST",
                    base.as_str(),
                    "the inflection slot must come last",
                ));
            }
        }
        let mut names = BTreeSet::new();
        for (si, s) in t.slots.iter().enumerate() {
            if !names.insert(s.name.as_str()) {
                out.push(Diagnostic::error(
                    "TEMPLATE_DUPLICATE_SLOT",
                    format!("{base}/slots/{si}"),
                    format!("slot name `{}` repeats", s.name),
                ));
            }
        }
    }
}

fn check_morphemes(lexicon: &Lexicon, out: &mut Vec<Diagnostic>) {
    for (mi, m) in lexicon.morphemes.iter().enumerate() {
        let path = format!("/morphemes/{mi}");
        if m.bare_form().is_empty() {
            out.push(Diagnostic::error(
                "MORPHEME_EMPTY_FORM",
                path.as_str(),
                "morpheme form is empty",
            ));
        }
        // Stem-internal pieces (initials, medials, finals) live below the
        // template and need no slot.
        if m.allowed_slots.is_empty() && crate::morph::stem_piece_class(&m.pos_class).is_none() {
            out.push(Diagnostic::error(
                "MORPHEME_NO_SLOTS",
                path.as_str(),
                format!("`{}` is allowed in no slot", m.form),
            ));
        }
        if m.surface_variants.iter().any(|v| v.is_empty()) {
            out.push(Diagnostic::error(
                "MORPHEME_EMPTY_FORM",
                path.as_str(),
                "surface variant is empty",
            ));
        }
    }
}
