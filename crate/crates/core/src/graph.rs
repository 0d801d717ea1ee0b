//! Literal and idiomatic meaning graphs.
//!
//! Graphs are rooted trees of `(VAR / concept ...)` nodes. Variables are the
//! token-slot letters that realize each participant, so the same letters
//! appear in the literal and the idiomatic graph of one match. A variable
//! may occur twice only for an implicit participant, which borrows the root
//! variable (`(C / ceb-01 ... :arg2 (C / narg2-<arrow>))`).

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::diagnostic::Diagnostic;
use crate::matcher::{MatchSpan, Pos, Token};
use crate::model::{
    ArgLabel, Lexicon, MappingExtra, MappingTarget, MorphSlotKind, Roleset, RolesetKind, SlotKind,
    SurfaceRole, TokenSlot, TokenSlotMap,
};
use crate::morph::Segmentation;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Target {
    Node(Node),
    Constant(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub label: String,
    pub target: Target,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Node {
    pub var: String,
    pub concept: String,
    pub edges: Vec<Edge>,
}

/// Sort key for relation labels: numbered args, `:mod`, `:degree`,
/// `:refer-definiteness`, then anything else alphabetically.
pub fn edge_rank(label: &str) -> (u8, u32, &str) {
    let lower = label.trim_start_matches(':');
    if let Some(n) = lower
        .strip_prefix("arg")
        .and_then(|d| d.parse::<u32>().ok())
    {
        return (0, n, "");
    }
    match lower {
        "mod" => (1, 0, ""),
        "degree" => (2, 0, ""),
        "refer-definiteness" => (3, 0, ""),
        _ => (4, 0, label),
    }
}

impl Node {
    pub fn new(var: &str, concept: &str) -> Self {
        Node {
            var: var.to_string(),
            concept: concept.to_string(),
            edges: Vec::new(),
        }
    }

    /// Adds an edge at its canonical position, after existing edges of equal
    /// rank.
    pub fn push_edge(&mut self, label: &str, target: Target) {
        let rank = edge_rank(label);
        let at = self
            .edges
            .iter()
            .position(|e| edge_rank(&e.label) > rank)
            .unwrap_or(self.edges.len());
        self.edges.insert(
            at,
            Edge {
                label: label.to_string(),
                target,
            },
        );
    }

    pub fn child(&self, label: &str) -> Option<&Node> {
        self.edges.iter().find_map(|e| match &e.target {
            Target::Node(n) if e.label == label => Some(n),
            _ => None,
        })
    }

    fn walk<'a>(&'a self, out: &mut Vec<&'a Node>) {
        out.push(self);
        for e in &self.edges {
            if let Target::Node(n) = &e.target {
                n.walk(out);
            }
        }
    }

    fn is_canonical(&self) -> bool {
        self.edges
            .windows(2)
            .all(|w| edge_rank(&w[0].label) <= edge_rank(&w[1].label))
            && self.edges.iter().all(|e| match &e.target {
                Target::Node(n) => n.is_canonical(),
                Target::Constant(_) => true,
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeaningGraph {
    pub root: Node,
}

impl MeaningGraph {
    pub fn new(root: Node) -> Self {
        MeaningGraph { root }
    }

    pub fn nodes(&self) -> Vec<&Node> {
        let mut out = Vec::new();
        self.root.walk(&mut out);
        out
    }

    /// `(source var, label, target var or constant)` triples.
    pub fn edges(&self) -> Vec<(&str, &str, &str)> {
        let mut out = Vec::new();
        for n in self.nodes() {
            for e in &n.edges {
                let t = match &e.target {
                    Target::Node(c) => c.var.as_str(),
                    Target::Constant(c) => c.as_str(),
                };
                out.push((n.var.as_str(), e.label.as_str(), t));
            }
        }
        out
    }

    /// Letters behind each variable.
    pub fn provenance(&self) -> BTreeMap<String, BTreeSet<char>> {
        self.nodes()
            .into_iter()
            .map(|n| (n.var.clone(), n.var.chars().collect()))
            .collect()
    }

    pub fn is_canonical(&self) -> bool {
        self.root.is_canonical()
    }
}

fn write_node(n: &Node, depth: usize, out: &mut String) {
    out.push('(');
    out.push_str(&n.var);
    out.push_str(" / ");
    out.push_str(&n.concept);
    for e in &n.edges {
        out.push('\n');
        for _ in 0..depth + 1 {
            out.push_str("  ");
        }
        out.push_str(&e.label);
        out.push(' ');
        match &e.target {
            Target::Node(c) => write_node(c, depth + 1, out),
            Target::Constant(c) => out.push_str(c),
        }
    }
    out.push(')');
}

/// Parenthesized rendering, one relation per line, two spaces per level.
pub fn serialize_graph(g: &MeaningGraph) -> String {
    let mut out = String::new();
    write_node(&g.root, 0, &mut out);
    out
}

impl fmt::Display for MeaningGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&serialize_graph(self))
    }
}

/// Collapses whitespace runs and drops spaces just inside parentheses.
pub fn normalize_ws(text: &str) -> String {
    let collapsed: Vec<&str> = text.split_whitespace().collect();
    let joined = collapsed.join(" ");
    joined.replace("( ", "(").replace(" )", ")")
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphParseError {
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {expected} at byte {at}")]
    Expected { expected: &'static str, at: usize },
    #[error("unbalanced parentheses")]
    Unbalanced,
    #[error("trailing input at byte {0}")]
    Trailing(usize),
}

struct Reader<'a> {
    s: &'a str,
    at: usize,
}

impl<'a> Reader<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.s[self.at..].chars().next() {
            if !c.is_whitespace() {
                break;
            }
            self.at += c.len_utf8();
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.s[self.at..].chars().next()
    }

    fn expect(&mut self, c: char, what: &'static str) -> Result<(), GraphParseError> {
        match self.peek() {
            Some(x) if x == c => {
                self.at += c.len_utf8();
                Ok(())
            }
            Some(_) => Err(GraphParseError::Expected {
                expected: what,
                at: self.at,
            }),
            None => Err(GraphParseError::UnexpectedEnd),
        }
    }

    /// An atom runs to whitespace or a parenthesis, except inside `[...]`
    /// and `<...>`.
    fn atom(&mut self, what: &'static str) -> Result<&'a str, GraphParseError> {
        self.skip_ws();
        let start = self.at;
        let mut depth = 0usize;
        for (i, c) in self.s[start..].char_indices() {
            match c {
                '[' | '<' => depth += 1,
                ']' | '>' if depth > 0 => depth -= 1,
                '(' | ')' if depth == 0 => {
                    self.at = start + i;
                    break;
                }
                c if c.is_whitespace() && depth == 0 => {
                    self.at = start + i;
                    break;
                }
                _ => {}
            }
            self.at = start + i + c.len_utf8();
        }
        if self.at == start {
            if self.at >= self.s.len() {
                return Err(GraphParseError::UnexpectedEnd);
            }
            return Err(GraphParseError::Expected {
                expected: what,
                at: start,
            });
        }
        Ok(&self.s[start..self.at])
    }

    fn node(&mut self) -> Result<Node, GraphParseError> {
        self.expect('(', "`(`")?;
        let var = self.atom("variable")?;
        if var == "/" {
            return Err(GraphParseError::Expected {
                expected: "variable",
                at: self.at,
            });
        }
        self.expect('/', "`/`")?;
        let concept = self.atom("concept")?;
        let mut node = Node::new(var, concept);
        loop {
            match self.peek() {
                Some(')') => {
                    self.at += 1;
                    return Ok(node);
                }
                Some(':') => {
                    let label = self.atom("relation")?;
                    let target = match self.peek() {
                        Some('(') => Target::Node(self.node()?),
                        Some(_) => Target::Constant(self.atom("constant")?.to_string()),
                        None => return Err(GraphParseError::Unbalanced),
                    };
                    node.edges.push(Edge {
                        label: label.to_string(),
                        target,
                    });
                }
                Some(_) => {
                    return Err(GraphParseError::Expected {
                        expected: "relation or `)`",
                        at: self.at,
                    })
                }
                None => return Err(GraphParseError::Unbalanced),
            }
        }
    }
}

/// Reads the notation produced by [`serialize_graph`]. Edge order is kept
/// as written.
pub fn parse_graph(text: &str) -> Result<MeaningGraph, GraphParseError> {
    let mut r = Reader { s: text, at: 0 };
    let root = r.node()?;
    match r.peek() {
        None => Ok(MeaningGraph::new(root)),
        Some(')') => Err(GraphParseError::Unbalanced),
        Some(_) => Err(GraphParseError::Trailing(r.at)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("roleset `{0}` is not in the lexicon")]
    MissingRoleset(String),
    #[error("`{0}` has no metaphor mapping")]
    NoMapping(String),
    #[error("realized participant {0} has no mapping pair")]
    Unpaired(ArgLabel),
}

/// What a token-slot letter is realized by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Filler {
    /// Surface used in the literal graph (English head token, Arapaho morph).
    pub form: String,
    /// Surface used in the idiomatic graph (English head token, morph gloss).
    pub gloss: String,
    /// Person code selected from a portmanteau inflection (`4` of `4/3`).
    pub code: Option<String>,
}

/// Input to the graph builders.
#[derive(Clone, Copy, Debug)]
pub enum Source<'a> {
    Match {
        span: &'a MatchSpan,
        sentence: &'a [Token],
    },
    Segmentation(&'a Segmentation),
}

fn head_token(sentence: &[Token], start: usize, end: usize) -> Option<&Token> {
    let run = sentence.get(start..=end)?;
    run.iter()
        .rev()
        .find(|t| matches!(t.pos, Pos::N | Pos::Propn | Pos::Pron))
        .or_else(|| run.last())
}

/// Token-slot map for a roleset. Lexical rolesets without one get letters
/// from the construction that realizes them: role-bound slots bear their
/// argument, other substantive slots are relation letters.
pub fn effective_token_slots(
    roleset: &Roleset,
    lexicon: &Lexicon,
    source: Source<'_>,
) -> TokenSlotMap {
    if let Some(ts) = &roleset.token_slots {
        return ts.clone();
    }
    let mut map = TokenSlotMap::default();
    if let Source::Match { span, .. } = source {
        let variant = lexicon
            .constructions
            .get(&span.cxn_id)
            .and_then(|c| c.variants.iter().find(|v| v.variant_id == span.variant_id));
        if let Some(v) = variant {
            for slot in &v.slots {
                let entry = match (&slot.role_binding, slot.kind) {
                    (Some(arg), _) => TokenSlot::new(SurfaceRole::ArgBearing, Some(arg.clone())),
                    (None, SlotKind::Substantive) if slot.function_word => {
                        TokenSlot::new(SurfaceRole::FixedFunction, None)
                    }
                    (None, SlotKind::Substantive) => TokenSlot::new(SurfaceRole::Rel, None),
                    (None, SlotKind::Schematic) => continue,
                };
                map.entries.insert(slot.id.clone(), entry);
            }
        }
    }
    map
}

/// Letter -> filler for every letter the source realizes.
pub fn realize(source: Source<'_>, slots: &TokenSlotMap) -> BTreeMap<String, Filler> {
    let mut out = BTreeMap::new();
    for (letter, entry) in &slots.entries {
        let filler = match source {
            Source::Match { span, sentence } => span
                .range_of(letter)
                .and_then(|r| head_token(sentence, r.start, r.end))
                .map(|t| Filler {
                    form: t.surface.clone(),
                    gloss: t.surface.clone(),
                    code: None,
                }),
            Source::Segmentation(seg) => seg_filler(seg, entry),
        };
        if let Some(f) = filler {
            out.insert(letter.clone(), f);
        }
    }
    out
}

fn seg_filler(seg: &Segmentation, entry: &TokenSlot) -> Option<Filler> {
    let kind = entry.slot?;
    let piece = seg.pieces.iter().find(|p| {
        p.slot_kind == kind
            && entry
                .form
                .as_ref()
                .is_none_or(|f| p.entry.bare_form() == *f)
    })?;
    match entry.part {
        Some(i) => {
            let code = piece.entry.gloss.split('/').nth(i)?.to_string();
            Some(Filler {
                form: String::new(),
                gloss: String::new(),
                code: Some(code),
            })
        }
        None if kind == MorphSlotKind::Inflection => Some(Filler {
            form: String::new(),
            gloss: String::new(),
            code: Some(piece.entry.gloss.clone()),
        }),
        None => Some(Filler {
            form: piece.entry.bare_form(),
            gloss: piece.entry.gloss.clone(),
            code: None,
        }),
    }
}

/// Does a segmentation realize the fixed morphs of `roleset`'s token slots?
pub fn segmentation_fits(seg: &Segmentation, roleset: &Roleset) -> bool {
    let Some(ts) = &roleset.token_slots else {
        return false;
    };
    let fixed: Vec<_> = ts.entries.values().filter(|e| e.form.is_some()).collect();
    !fixed.is_empty() && fixed.iter().all(|e| seg_filler(seg, e).is_some())
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Literal,
    Idiomatic,
}

struct Builder<'a> {
    roleset: &'a Roleset,
    slots: TokenSlotMap,
    fillers: BTreeMap<String, Filler>,
    side: Side,
    prefix_narg: bool,
}

impl Builder<'_> {
    fn root_var(&self, concept: &str) -> String {
        let letters: String = self
            .slots
            .entries
            .iter()
            .filter(|(l, e)| {
                e.role == SurfaceRole::Rel && e.arg.is_none() && self.fillers.contains_key(*l)
            })
            .map(|(l, _)| l.as_str())
            .collect();
        if letters.is_empty() {
            concept
                .chars()
                .next()
                .map(|c| c.to_lowercase().collect())
                .unwrap_or_default()
        } else {
            letters
        }
    }

    fn text(&self, f: &Filler) -> String {
        match self.side {
            Side::Literal => f.form.clone(),
            Side::Idiomatic => f.gloss.clone(),
        }
    }

    fn concept(&self, arg: &ArgLabel, body: &str) -> String {
        if self.prefix_narg {
            format!("{}-{body}", arg.narg())
        } else {
            body.to_string()
        }
    }

    /// One node for `letters`: contentful fillers joined by `-`, person codes
    /// turned into definiteness or, when alone, into the concept (`3S`).
    fn merged(&self, arg: &ArgLabel, letters: &[&str]) -> Option<Node> {
        if letters.is_empty() {
            return None;
        }
        let var: String = letters.concat();
        let mut words = Vec::new();
        let mut codes = Vec::new();
        for l in letters {
            if let Some(f) = self.fillers.get(*l) {
                match &f.code {
                    Some(c) => codes.push(c.clone()),
                    None => words.push(self.text(f)),
                }
            }
        }
        let body = if !words.is_empty() {
            words.join("-")
        } else if let Some(c) = codes.first() {
            format!("{c}S")
        } else {
            let desc = self
                .roleset
                .arg(arg)
                .map(|a| a.description.as_str())
                .unwrap_or("");
            format!("[{desc}]")
        };
        let mut node = Node::new(&var, &self.concept(arg, &body));
        // Obviation is a property of the literal form; the idiomatic reading
        // does not carry it.
        if self.side == Side::Literal && codes.iter().any(|c| c == "4") {
            node.push_edge(":refer-definiteness", Target::Constant("obviative".into()));
        }
        Some(node)
    }

    fn letters(&self, arg: &ArgLabel, role: Option<SurfaceRole>) -> Vec<&str> {
        self.slots
            .entries
            .iter()
            .filter(|(_, e)| e.arg.as_ref() == Some(arg) && role.is_none_or(|r| e.role == r))
            .map(|(l, _)| l.as_str())
            .collect()
    }

    /// Literal participant: a relation letter bound to the argument heads
    /// the node and the argument's other letters hang under it as `:mod`.
    fn literal_participant(&self, arg: &ArgLabel) -> Option<Node> {
        let heads = self.letters(arg, Some(SurfaceRole::Rel));
        if heads.is_empty() {
            return self.merged(arg, &self.letters(arg, Some(SurfaceRole::ArgBearing)));
        }
        let mut node = self.merged(arg, &heads)?;
        for l in self.letters(arg, Some(SurfaceRole::ArgBearing)) {
            if let Some(f) = self.fillers.get(l) {
                if f.code.is_none() {
                    node.push_edge(":mod", Target::Node(Node::new(l, &self.text(f))));
                }
            }
        }
        Some(node)
    }
}

fn narg_prefix(roleset: &Roleset) -> bool {
    roleset.kind != RolesetKind::Lexical
}

/// Literal-frame graph. For an MWE roleset the root is the mapping's
/// literal predicate and each participant is re-labelled with its literal
/// argument; a lexical roleset is its own literal frame.
pub fn literal_graph(
    source: Source<'_>,
    roleset: &Roleset,
    lexicon: &Lexicon,
) -> Result<MeaningGraph, GraphError> {
    let slots = effective_token_slots(roleset, lexicon, source);
    let fillers = realize(source, &slots);
    let b = Builder {
        roleset,
        slots,
        fillers,
        side: Side::Literal,
        prefix_narg: narg_prefix(roleset),
    };
    let concept = match &roleset.mapping {
        Some(m) => {
            if !lexicon.rolesets.contains_key(&m.literal) {
                return Err(GraphError::MissingRoleset(m.literal.clone()));
            }
            m.literal.clone()
        }
        None => roleset.predicate_id.clone(),
    };
    let root_var = b.root_var(&concept);
    let mut root = Node::new(&root_var, &concept);
    for spec in &roleset.args {
        let arg = &spec.number;
        let target = match &roleset.mapping {
            None => MappingTarget::Arg(arg.clone()),
            Some(m) => match m.literal_target(arg) {
                Some(t) => t.clone(),
                None if m.is_idiomatic_only(arg) => continue,
                None if b
                    .letters(arg, None)
                    .iter()
                    .any(|l| b.fillers.contains_key(*l)) =>
                {
                    return Err(GraphError::Unpaired(arg.clone()))
                }
                None => continue,
            },
        };
        match target {
            MappingTarget::Arg(lit) => {
                if let Some(node) = b.literal_participant(arg) {
                    root.push_edge(&lit.relation(), Target::Node(node));
                }
            }
            MappingTarget::Implicit(concept) => {
                let literal_arg = lexicon
                    .rolesets
                    .get(
                        &roleset
                            .mapping
                            .as_ref()
                            .map(|m| m.literal.clone())
                            .unwrap_or_default(),
                    )
                    .and_then(|rs| {
                        rs.args
                            .iter()
                            .find(|a| a.implicit_concept.as_deref() == Some(concept.as_str()))
                    })
                    .map(|a| a.number.clone())
                    .unwrap_or_else(|| arg.clone());
                let node = Node::new(&root_var, &b.concept(arg, &concept));
                root.push_edge(&literal_arg.relation(), Target::Node(node));
            }
        }
    }
    Ok(MeaningGraph::new(root))
}

/// Idiomatic-frame graph: the mapping's idiomatic predicate with each
/// participant's letters merged into one node under its idiomatic label.
pub fn idiomatic_graph(
    source: Source<'_>,
    mwe_roleset: &Roleset,
    lexicon: &Lexicon,
) -> Result<MeaningGraph, GraphError> {
    let mapping = mwe_roleset
        .mapping
        .as_ref()
        .ok_or_else(|| GraphError::NoMapping(mwe_roleset.predicate_id.clone()))?;
    let concept = mapping
        .idiomatic
        .clone()
        .unwrap_or_else(|| mwe_roleset.predicate_id.clone());
    if !lexicon.rolesets.contains_key(&concept) && concept != mwe_roleset.predicate_id {
        return Err(GraphError::MissingRoleset(concept));
    }
    let slots = effective_token_slots(mwe_roleset, lexicon, source);
    let fillers = realize(source, &slots);
    let b = Builder {
        roleset: mwe_roleset,
        slots,
        fillers,
        side: Side::Idiomatic,
        prefix_narg: true,
    };
    // The relation letters that root the literal graph root this one too.
    let root_var = b.root_var(&concept);
    let mut root = Node::new(&root_var, &concept);
    for spec in &mwe_roleset.args {
        let arg = &spec.number;
        let letters = b.letters(arg, None);
        let realized = letters.iter().any(|l| b.fillers.contains_key(*l));
        let implicit = matches!(
            mapping.literal_target(arg),
            Some(MappingTarget::Implicit(_))
        );
        if !realized && !implicit {
            continue;
        }
        let label = mapping
            .idiomatic_label(arg)
            .ok_or_else(|| GraphError::Unpaired(arg.clone()))?;
        let node = if implicit && !realized {
            Node::new(&root_var, &b.concept(arg, &spec.description))
        } else {
            match b.merged(arg, &letters) {
                Some(n) => n,
                None => continue,
            }
        };
        root.push_edge(&label.relation(), Target::Node(node));
    }
    for extra in &mapping.extras {
        if let MappingExtra::Relation { label, value } = extra {
            root.push_edge(label, Target::Constant(value.clone()));
        }
    }
    Ok(MeaningGraph::new(root))
}

/// Per-variable overrides for one graph: a new variable and/or a new
/// concept body (the part after the `narg` prefix).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Refinement {
    pub vars: BTreeMap<String, String>,
    pub concepts: BTreeMap<String, String>,
}

impl Refinement {
    pub fn is_empty(&self) -> bool {
        self.vars.is_empty() && self.concepts.is_empty()
    }
}

fn refine_node(n: &mut Node, r: &Refinement) {
    if let Some(body) = r.concepts.get(&n.var) {
        n.concept = match split_narg(&n.concept) {
            Some((prefix, _)) => format!("{prefix}-{body}"),
            None => body.clone(),
        };
    }
    if let Some(v) = r.vars.get(&n.var) {
        n.var = v.clone();
    }
    for e in &mut n.edges {
        if let Target::Node(c) = &mut e.target {
            refine_node(c, r);
        }
    }
}

/// Applies concept overrides, then renames variables simultaneously. Keys
/// are the derived variables.
pub fn refine(g: &mut MeaningGraph, r: &Refinement) {
    refine_node(&mut g.root, r);
}

/// Splits `narg2-bug` into (`narg2`, `bug`); case-insensitive on the prefix.
pub fn split_narg(concept: &str) -> Option<(&str, &str)> {
    let (head, body) = concept.split_once('-')?;
    let lower = head.to_ascii_lowercase();
    let digits = lower.strip_prefix("narg")?;
    (!digits.is_empty() && digits.chars().all(|c| c.is_ascii_digit())).then_some((head, body))
}

/// Side of a metaphor mapping a graph text claims to render.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphSide {
    Literal,
    Idiomatic,
}

/// Checks a graph text against an MWE roleset. Every finding is a warning:
/// this is for graphs written by hand, whose anomalies are documented rather
/// than rejected.
pub fn lint_graph(
    text: &str,
    mwe: &Roleset,
    side: GraphSide,
    lexicon: &Lexicon,
) -> Vec<Diagnostic> {
    let path = format!(
        "/graphs/{}/{}",
        mwe.predicate_id,
        match side {
            GraphSide::Literal => "literal",
            GraphSide::Idiomatic => "idiomatic",
        }
    );
    let mut out = Vec::new();
    let g = match parse_graph(text) {
        Ok(g) => g,
        Err(e) => {
            out.push(Diagnostic::warning(
                "GRAPH_PARSE",
                path.as_str(),
                e.to_string(),
            ));
            return out;
        }
    };
    if !g.is_canonical() {
        out.push(Diagnostic::warning(
            "GRAPH_EDGE_ORDER",
            path.as_str(),
            "relations are not in canonical order",
        ));
    }
    let letters: BTreeSet<char> = mwe
        .token_slots
        .as_ref()
        .map(|t| t.entries.keys().flat_map(|k| k.chars()).collect())
        .unwrap_or_default();
    for n in g.nodes() {
        let stray: String = n.var.chars().filter(|c| !letters.contains(c)).collect();
        if !stray.is_empty() {
            out.push(Diagnostic::warning(
                "GRAPH_UNKNOWN_LETTER",
                path.as_str(),
                format!(
                    "variable `{}` uses letters `{stray}` outside the token slots",
                    n.var
                ),
            ));
        }
    }
    let root_rs = lexicon.rolesets.get(&g.root.concept);
    for e in &g.root.edges {
        let Some(num) = e
            .label
            .strip_prefix(":arg")
            .or_else(|| e.label.strip_prefix(":ARG"))
        else {
            continue;
        };
        let Ok(label) = alloc::format!("ARG{num}").parse::<ArgLabel>() else {
            continue;
        };
        if let Some(rs) = root_rs {
            if rs.arg(&label).is_none() {
                out.push(Diagnostic::warning(
                    "GRAPH_ARG_UNKNOWN",
                    path.as_str(),
                    format!("{} has no {label}", rs.predicate_id),
                ));
            }
        }
        let Target::Node(child) = &e.target else {
            continue;
        };
        let Some((prefix, _)) = split_narg(&child.concept) else {
            continue;
        };
        let Ok(narg) = alloc::format!("ARG{}", &prefix[4..]).parse::<ArgLabel>() else {
            continue;
        };
        if mwe.arg(&narg).is_none() {
            out.push(Diagnostic::warning(
                "GRAPH_NARG_UNKNOWN",
                path.as_str(),
                format!("{} has no {narg}", mwe.predicate_id),
            ));
            continue;
        }
        let expected = mwe.mapping.as_ref().and_then(|m| match side {
            GraphSide::Literal => match m.literal_target(&narg) {
                Some(MappingTarget::Arg(a)) => Some(a.clone()),
                _ => None,
            },
            GraphSide::Idiomatic => m.idiomatic_label(&narg),
        });
        if let Some(want) = expected {
            if want != label {
                out.push(Diagnostic::warning(
                    "GRAPH_NARG_MISMATCH",
                    path.as_str(),
                    format!("{narg} maps to {want}, graph places it under {label}"),
                ));
            }
        }
    }
    crate::diagnostic::sort_diagnostics(&mut out);
    out
}
