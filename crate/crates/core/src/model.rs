//! Domain types shared by every module: constructions and their slot
//! patterns, rolesets with numbered arguments, token-slot maps, metaphor
//! mappings and the morpheme inventory.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use thiserror::Error;

/// Modifier subtypes accepted after `ARGM-`.
pub const ARGM_SUBTYPES: [&str; 4] = ["LOC", "DIS", "MNR", "TMP"];

/// Highest numbered argument a roleset may declare.
pub const MAX_ARG_NUMBER: u8 = 6;

pub const DEFAULT_GAP_LIMIT: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unrecognized argument label `{0}`")]
    BadArgLabel(String),
    #[error("unknown {kind} `{value}`")]
    UnknownTag { kind: &'static str, value: String },
    #[error("argument {0} has no mapping pair")]
    UnknownArg(ArgLabel),
}

/// `ARG0`..`ARG9` or `ARGM-<subtype>`.
///
/// Parsing accepts any single digit and any modifier subtype so that an
/// out-of-range label survives to validation, where it is reported instead
/// of silently dropped.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ArgLabel {
    Numbered(u8),
    Modifier(String),
}

impl ArgLabel {
    pub fn number(&self) -> Option<u8> {
        match self {
            ArgLabel::Numbered(n) => Some(*n),
            ArgLabel::Modifier(_) => None,
        }
    }

    /// True when the label is inside the closed inventory (`ARG0`..`ARG6`
    /// plus the known modifier subtypes).
    pub fn in_inventory(&self) -> bool {
        match self {
            ArgLabel::Numbered(n) => *n <= MAX_ARG_NUMBER,
            ArgLabel::Modifier(m) => ARGM_SUBTYPES.contains(&m.as_str()),
        }
    }

    /// Graph relation label, e.g. `:arg1` or `:argm-loc`.
    pub fn relation(&self) -> String {
        match self {
            ArgLabel::Numbered(n) => format!(":arg{n}"),
            ArgLabel::Modifier(m) => format!(":argm-{}", m.to_ascii_lowercase()),
        }
    }

    /// The `narg` prefix used on participant concepts, e.g. `narg1`.
    pub fn narg(&self) -> String {
        match self {
            ArgLabel::Numbered(n) => format!("narg{n}"),
            ArgLabel::Modifier(m) => format!("nargm-{}", m.to_ascii_lowercase()),
        }
    }
}

impl fmt::Display for ArgLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArgLabel::Numbered(n) => write!(f, "ARG{n}"),
            ArgLabel::Modifier(m) => write!(f, "ARGM-{m}"),
        }
    }
}

impl FromStr for ArgLabel {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        if let Some(rest) = upper.strip_prefix("ARGM-") {
            if !rest.is_empty() && rest.chars().all(|c| c.is_ascii_alphabetic()) {
                return Ok(ArgLabel::Modifier(rest.to_string()));
            }
        } else if let Some(rest) = upper.strip_prefix("ARG") {
            if rest.len() == 1 {
                if let Some(d) = rest.chars().next().and_then(|c| c.to_digit(10)) {
                    return Ok(ArgLabel::Numbered(d as u8));
                }
            }
        }
        Err(ModelError::BadArgLabel(s.to_string()))
    }
}

macro_rules! tag_enum {
    ($(#[$meta:meta])* $name:ident, $kind:literal, { $($variant:ident => $text:literal),+ $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub enum $name { $($variant),+ }

        impl $name {
            pub const ALL: &'static [$name] = &[$($name::$variant),+];

            pub fn as_str(&self) -> &'static str {
                match self { $($name::$variant => $text),+ }
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str(self.as_str())
            }
        }

        impl FromStr for $name {
            type Err = ModelError;
            fn from_str(s: &str) -> Result<Self, Self::Err> {
                match s {
                    $($text => Ok($name::$variant),)+
                    other => Err(ModelError::UnknownTag { kind: $kind, value: other.to_string() }),
                }
            }
        }
    };
}

tag_enum!(SlotKind, "slot kind", {
    Substantive => "substantive",
    Schematic => "schematic",
});

tag_enum!(
    /// Closed morphosyntactic constraint set for schematic slots.
    Category, "category", {
    Np => "NP",
    Vp => "VP",
    Pp => "PP",
    Adjp => "ADJP",
    Advp => "ADVP",
    Clause => "CLAUSE",
    N => "N",
    V => "V",
    Det => "DET",
    Any => "ANY",
});

tag_enum!(Schematicity, "schematicity", {
    Substantive => "substantive",
    PartiallySubstantive => "partially-substantive",
    MostlySchematic => "mostly-schematic",
    FullySchematic => "fully-schematic",
});

tag_enum!(RolesetKind, "roleset kind", {
    Lexical => "lexical",
    Mwe => "mwe",
    Morphological => "morphological",
});

tag_enum!(ThematicFunction, "thematic function", {
    Agent => "agent",
    Theme => "theme",
    Experiencer => "experiencer",
    Stimulus => "stimulus",
    Undergoer => "undergoer",
    Source => "source",
    Goal => "goal",
    Instrument => "instrument",
    Patient => "patient",
    Causer => "causer",
    Path => "path",
});

tag_enum!(Fixedness, "fixedness", {
    Open => "open",
    SemiFixed => "semi-fixed",
    Implicit => "implicit",
});

tag_enum!(SurfaceRole, "surface role", {
    Rel => "rel",
    ArgBearing => "arg-bearing",
    FixedFunction => "fixed-function",
});

tag_enum!(
    /// Slot kinds of a verb-word template, in canonical template order.
    MorphSlotKind, "morph slot kind", {
    Proclitic => "proclitic",
    Discourse => "discourse",
    TenseAspectPreverb => "tense-aspect-preverb",
    AdverbialPreverb => "adverbial-preverb",
    NominalPreverb => "nominal-preverb",
    Stem => "stem",
    DerivationalFinal => "derivational-final",
    Inflection => "inflection",
});

impl MorphSlotKind {
    pub fn is_preverb(&self) -> bool {
        matches!(
            self,
            MorphSlotKind::TenseAspectPreverb
                | MorphSlotKind::AdverbialPreverb
                | MorphSlotKind::NominalPreverb
        )
    }
}

/// One element of a form pole.
///
/// Substantive slots carry lemma strings (a form may span several tokens,
/// e.g. `let alone`, and then admits no intervening tokens). Schematic slots
/// carry a category and a token-count range. Nothing here is checked at
/// construction time; [`crate::validate`] reports violations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub id: String,
    pub kind: SlotKind,
    pub surface_forms: BTreeSet<String>,
    pub category: Option<Category>,
    pub min_tokens: Option<usize>,
    pub max_tokens: Option<usize>,
    pub role_binding: Option<ArgLabel>,
    /// Light verb: syntactic scaffolding that contributes no role.
    pub lv_marker: bool,
    /// Fixed function word (e.g. a determiner inside an idiom). Counts as an
    /// anchor but is not part of the relation.
    pub function_word: bool,
    /// The filler must start with a comparative (`ADJR`/`ADVR`) token.
    pub comparative: bool,
}

impl Slot {
    pub fn substantive(id: &str, forms: &[&str]) -> Self {
        Slot {
            id: id.to_string(),
            kind: SlotKind::Substantive,
            surface_forms: forms.iter().map(|f| f.to_string()).collect(),
            category: None,
            min_tokens: None,
            max_tokens: None,
            role_binding: None,
            lv_marker: false,
            function_word: false,
            comparative: false,
        }
    }

    pub fn schematic(id: &str, category: Category, min: usize, max: usize) -> Self {
        Slot {
            id: id.to_string(),
            kind: SlotKind::Schematic,
            surface_forms: BTreeSet::new(),
            category: Some(category),
            min_tokens: Some(min),
            max_tokens: Some(max),
            role_binding: None,
            lv_marker: false,
            function_word: false,
            comparative: false,
        }
    }

    pub fn with_role(mut self, label: ArgLabel) -> Self {
        self.role_binding = Some(label);
        self
    }

    pub fn is_substantive(&self) -> bool {
        self.kind == SlotKind::Substantive
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlotPattern {
    pub variant_id: String,
    pub slots: Vec<Slot>,
    pub notes: String,
}

impl SlotPattern {
    pub fn new(variant_id: &str, slots: Vec<Slot>) -> Self {
        SlotPattern {
            variant_id: variant_id.to_string(),
            slots,
            notes: String::new(),
        }
    }

    pub fn role_bound_ids(&self) -> BTreeSet<&str> {
        self.slots
            .iter()
            .filter(|s| s.role_binding.is_some())
            .map(|s| s.id.as_str())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Construction {
    pub id: String,
    pub variants: Vec<SlotPattern>,
    /// `predicate_id` of the meaning-pole roleset.
    pub meaning: String,
    /// Declared class; validation warns when it disagrees with
    /// [`classify_schematicity`].
    pub schematicity: Option<Schematicity>,
    pub gap_limit: usize,
    /// Lemmas that block a match when they fill the eventive slot of a light
    /// verb construction.
    pub exclusions: BTreeSet<String>,
}

impl Construction {
    pub fn new(id: &str, meaning: &str, variants: Vec<SlotPattern>) -> Self {
        Construction {
            id: id.to_string(),
            variants,
            meaning: meaning.to_string(),
            schematicity: None,
            gap_limit: DEFAULT_GAP_LIMIT,
            exclusions: BTreeSet::new(),
        }
    }

    pub fn is_lvc(&self) -> bool {
        self.variants
            .iter()
            .any(|v| v.slots.iter().any(|s| s.lv_marker))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArgSpec {
    pub number: ArgLabel,
    pub function: ThematicFunction,
    pub description: String,
    pub fixedness: Fixedness,
    pub implicit_concept: Option<String>,
}

impl ArgSpec {
    pub fn new(number: ArgLabel, function: ThematicFunction, description: &str) -> Self {
        ArgSpec {
            number,
            function,
            description: description.to_string(),
            fixedness: Fixedness::Open,
            implicit_concept: None,
        }
    }
}

/// Letter entry of a token-slot map.
///
/// English idioms key letters by construction slot id. Morphological
/// rolesets point at a verb-word template slot instead (`slot`), optionally
/// requiring a fixed morph (`form`) and selecting one `/`-separated part of
/// a portmanteau inflection gloss such as `4/3` (`part`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TokenSlot {
    pub role: SurfaceRole,
    pub arg: Option<ArgLabel>,
    pub slot: Option<MorphSlotKind>,
    pub form: Option<String>,
    pub part: Option<usize>,
}

impl TokenSlot {
    pub fn new(role: SurfaceRole, arg: Option<ArgLabel>) -> Self {
        TokenSlot {
            role,
            arg,
            slot: None,
            form: None,
            part: None,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TokenSlotMap {
    pub entries: BTreeMap<String, TokenSlot>,
}

impl TokenSlotMap {
    /// Letters bound to `arg`, in letter order.
    pub fn letters_for(&self, arg: &ArgLabel) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|(_, e)| e.arg.as_ref() == Some(arg))
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn is_morphological(&self) -> bool {
        self.entries.values().any(|e| e.slot.is_some())
    }
}

/// Right-hand side of a literal pair: a literal argument, or an implicit
/// concept written in angle brackets (`<arrow>`).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MappingTarget {
    Arg(ArgLabel),
    Implicit(String),
}

impl fmt::Display for MappingTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MappingTarget::Arg(a) => write!(f, "{a}"),
            MappingTarget::Implicit(c) => f.write_str(c),
        }
    }
}

impl FromStr for MappingTarget {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with('<') && s.ends_with('>') && s.len() > 2 {
            Ok(MappingTarget::Implicit(s.to_string()))
        } else {
            s.parse().map(MappingTarget::Arg)
        }
    }
}

/// An extra attached to the idiomatic reading: either a relation on the
/// root (`:degree intensifier`) or an MWE argument that has no literal
/// partner.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MappingExtra {
    Relation { label: String, value: String },
    IdiomaticOnly(ArgLabel),
}

impl fmt::Display for MappingExtra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MappingExtra::Relation { label, value } => write!(f, "{label} {value}"),
            MappingExtra::IdiomaticOnly(a) => write!(f, "{a}"),
        }
    }
}

impl FromStr for MappingExtra {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.starts_with(':') {
            let mut it = s.splitn(2, char::is_whitespace);
            let label = it.next().unwrap_or_default();
            let value = it.next().map(str::trim).unwrap_or_default();
            if label.len() > 1 && !value.is_empty() && !value.contains(char::is_whitespace) {
                return Ok(MappingExtra::Relation {
                    label: label.to_string(),
                    value: value.to_string(),
                });
            }
            return Err(ModelError::UnknownTag {
                kind: "mapping extra",
                value: s.to_string(),
            });
        }
        s.parse().map(MappingExtra::IdiomaticOnly)
    }
}

/// Correspondence between an MWE roleset's arguments (the `narg`s) and the
/// arguments of its literal frame and of its idiomatic frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaphorMapping {
    pub literal: String,
    /// Idiomatic frame; `None` means the MWE roleset itself.
    pub idiomatic: Option<String>,
    /// MWE argument -> literal argument or implicit concept.
    pub pairs: Vec<(ArgLabel, MappingTarget)>,
    /// MWE argument -> idiomatic-frame argument. Empty means identity.
    pub idiomatic_pairs: Vec<(ArgLabel, ArgLabel)>,
    pub extras: Vec<MappingExtra>,
}

impl MetaphorMapping {
    pub fn idiomatic_label(&self, mwe_arg: &ArgLabel) -> Option<ArgLabel> {
        if self.idiomatic_pairs.is_empty() {
            return Some(mwe_arg.clone());
        }
        self.idiomatic_pairs
            .iter()
            .find(|(from, _)| from == mwe_arg)
            .map(|(_, to)| to.clone())
    }

    pub fn literal_target(&self, mwe_arg: &ArgLabel) -> Option<&MappingTarget> {
        self.pairs
            .iter()
            .find(|(from, _)| from == mwe_arg)
            .map(|(_, to)| to)
    }

    pub fn is_idiomatic_only(&self, mwe_arg: &ArgLabel) -> bool {
        self.extras
            .iter()
            .any(|e| matches!(e, MappingExtra::IdiomaticOnly(a) if a == mwe_arg))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Roleset {
    pub predicate_id: String,
    pub definition: String,
    pub args: Vec<ArgSpec>,
    pub kind: RolesetKind,
    pub token_slots: Option<TokenSlotMap>,
    pub mapping: Option<MetaphorMapping>,
}

impl Roleset {
    pub fn new(
        predicate_id: &str,
        definition: &str,
        kind: RolesetKind,
        args: Vec<ArgSpec>,
    ) -> Self {
        Roleset {
            predicate_id: predicate_id.to_string(),
            definition: definition.to_string(),
            args,
            kind,
            token_slots: None,
            mapping: None,
        }
    }

    pub fn arg(&self, label: &ArgLabel) -> Option<&ArgSpec> {
        self.args.iter().find(|a| &a.number == label)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphEntry {
    pub form: String,
    pub gloss: String,
    pub allowed_slots: BTreeSet<MorphSlotKind>,
    pub pos_class: String,
    pub surface_variants: BTreeSet<String>,
}

impl MorphEntry {
    pub fn new(form: &str, gloss: &str, slots: &[MorphSlotKind], pos_class: &str) -> Self {
        MorphEntry {
            form: form.to_string(),
            gloss: gloss.to_string(),
            allowed_slots: slots.iter().copied().collect(),
            pos_class: pos_class.to_string(),
            surface_variants: BTreeSet::new(),
        }
    }

    /// Form with segmentation hyphens removed (`-eit` -> `eit`).
    pub fn bare_form(&self) -> String {
        self.form.chars().filter(|c| *c != '-').collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TemplateSlot {
    pub name: String,
    pub kind: MorphSlotKind,
    pub required: bool,
    pub repeatable: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphTemplate {
    pub template_id: String,
    pub slots: Vec<TemplateSlot>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lexicon {
    pub version: String,
    pub constructions: BTreeMap<String, Construction>,
    pub rolesets: BTreeMap<String, Roleset>,
    pub morphemes: Vec<MorphEntry>,
    pub templates: Vec<MorphTemplate>,
}

pub const FORMAT_VERSION: &str = "1";

impl Default for Lexicon {
    fn default() -> Self {
        Lexicon {
            version: FORMAT_VERSION.to_string(),
            constructions: BTreeMap::new(),
            rolesets: BTreeMap::new(),
            morphemes: Vec::new(),
            templates: Vec::new(),
        }
    }
}

impl Lexicon {
    pub fn add_construction(&mut self, cxn: Construction) {
        self.constructions.insert(cxn.id.clone(), cxn);
    }

    pub fn add_roleset(&mut self, rs: Roleset) {
        self.rolesets.insert(rs.predicate_id.clone(), rs);
    }

    pub fn template(&self, id: Option<&str>) -> Option<&MorphTemplate> {
        match id {
            Some(id) => self.templates.iter().find(|t| t.template_id == id),
            None => self.templates.first(),
        }
    }
}

/// Classifies a construction by the composition of its slots.
///
/// Slots are pooled across variants by id, so the result does not depend on
/// variant order. A frozen multi-token substantive form (such as `let alone`,
/// which admits no inflection or intervening words) makes the construction
/// substantive regardless of the open slots around it.
pub fn classify_schematicity(cxn: &Construction) -> Schematicity {
    let mut by_id: BTreeMap<&str, bool> = BTreeMap::new();
    let mut frozen_multiword = false;
    for variant in &cxn.variants {
        for slot in &variant.slots {
            let substantive = slot.is_substantive();
            let entry = by_id.entry(slot.id.as_str()).or_insert(substantive);
            *entry |= substantive;
            if substantive
                && slot
                    .surface_forms
                    .iter()
                    .any(|f| f.split_whitespace().count() > 1)
            {
                frozen_multiword = true;
            }
        }
    }
    let substantive = by_id.values().filter(|s| **s).count();
    let schematic = by_id.len() - substantive;
    if schematic == 0 {
        Schematicity::Substantive
    } else if substantive == 0 {
        Schematicity::FullySchematic
    } else if frozen_multiword {
        Schematicity::Substantive
    } else if substantive >= schematic {
        Schematicity::PartiallySubstantive
    } else {
        Schematicity::MostlySchematic
    }
}

/// What an MWE argument corresponds to in the literal frame.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Correspondence {
    Arg(ArgLabel),
    /// Implicit concept, with the literal argument that declares it when the
    /// literal roleset is present in the lexicon.
    Implicit {
        concept: String,
        literal_arg: Option<ArgLabel>,
    },
}

/// Looks up the literal partner of `mwe_arg`.
///
/// A mapping whose literal and idiomatic frames are the same roleset and
/// that lists no pair for the argument is the identity.
pub fn resolve_mapping(
    lexicon: &Lexicon,
    mwe_arg: &ArgLabel,
    mapping: &MetaphorMapping,
) -> Result<Correspondence, ModelError> {
    match mapping.literal_target(mwe_arg) {
        Some(MappingTarget::Arg(a)) => Ok(Correspondence::Arg(a.clone())),
        Some(MappingTarget::Implicit(concept)) => {
            let literal_arg = lexicon.rolesets.get(&mapping.literal).and_then(|rs| {
                rs.args
                    .iter()
                    .find(|a| a.implicit_concept.as_deref() == Some(concept.as_str()))
                    .map(|a| a.number.clone())
            });
            Ok(Correspondence::Implicit {
                concept: concept.clone(),
                literal_arg,
            })
        }
        None if mapping.idiomatic.as_deref() == Some(mapping.literal.as_str()) => {
            Ok(Correspondence::Arg(mwe_arg.clone()))
        }
        None => Err(ModelError::UnknownArg(mwe_arg.clone())),
    }
}
