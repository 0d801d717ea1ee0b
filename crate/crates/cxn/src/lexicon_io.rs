//! JSON lexicon files.
//!
//! Parsing goes through a small order- and duplicate-preserving JSON tree so
//! that a repeated id is reported with both of its positions instead of the
//! later entry silently replacing the earlier one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use cxn_core::model::{
    ArgLabel, ArgSpec, Category, Construction, Fixedness, Lexicon, MappingExtra, MappingTarget,
    MetaphorMapping, MorphEntry, MorphSlotKind, MorphTemplate, Roleset, RolesetKind, Schematicity,
    Slot, SlotKind, SlotPattern, SurfaceRole, TemplateSlot, ThematicFunction, TokenSlot,
    TokenSlotMap, DEFAULT_GAP_LIMIT, FORMAT_VERSION,
};
use cxn_core::validate::{has_errors, validate};
use cxn_core::Diagnostic;
use serde::de::{self, Deserialize, Deserializer, MapAccess, SeqAccess, Visitor};
use serde_json::{json, Map, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("schema error at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("lexicon has {} validation error(s)", .0.iter().filter(|d| d.is_error()).count())]
    Validation(Vec<Diagnostic>),
}

fn schema<T>(path: &str, message: impl Into<String>) -> Result<T, LexiconError> {
    Err(LexiconError::Schema {
        path: if path.is_empty() {
            "/".into()
        } else {
            path.into()
        },
        message: message.into(),
    })
}

/// JSON value that keeps object entries in document order, duplicates
/// included.
#[derive(Clone, Debug, PartialEq)]
enum J {
    Null,
    Bool(bool),
    Num(serde_json::Number),
    Str(String),
    Arr(Vec<J>),
    Obj(Vec<(String, J)>),
}

impl J {
    fn kind(&self) -> &'static str {
        match self {
            J::Null => "null",
            J::Bool(_) => "boolean",
            J::Num(_) => "number",
            J::Str(_) => "string",
            J::Arr(_) => "array",
            J::Obj(_) => "object",
        }
    }
}

impl<'de> Deserialize<'de> for J {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = J;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a JSON value")
            }
            fn visit_unit<E>(self) -> Result<J, E> {
                Ok(J::Null)
            }
            fn visit_bool<E>(self, b: bool) -> Result<J, E> {
                Ok(J::Bool(b))
            }
            fn visit_i64<E>(self, n: i64) -> Result<J, E> {
                Ok(J::Num(n.into()))
            }
            fn visit_u64<E>(self, n: u64) -> Result<J, E> {
                Ok(J::Num(n.into()))
            }
            fn visit_f64<E: de::Error>(self, n: f64) -> Result<J, E> {
                serde_json::Number::from_f64(n)
                    .map(J::Num)
                    .ok_or_else(|| E::custom("non-finite number"))
            }
            fn visit_str<E>(self, s: &str) -> Result<J, E> {
                Ok(J::Str(s.to_string()))
            }
            fn visit_string<E>(self, s: String) -> Result<J, E> {
                Ok(J::Str(s))
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<J, A::Error> {
                let mut out = Vec::new();
                while let Some(v) = seq.next_element()? {
                    out.push(v);
                }
                Ok(J::Arr(out))
            }
            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<J, A::Error> {
                let mut out = Vec::new();
                while let Some((k, v)) = map.next_entry::<String, J>()? {
                    out.push((k, v));
                }
                Ok(J::Obj(out))
            }
        }
        d.deserialize_any(V)
    }
}

/// How unknown object keys are treated. Unknown top-level keys are an error
/// in both modes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mode {
    #[default]
    Strict,
    Lax,
}

fn escape(key: &str) -> String {
    key.replace('~', "~0").replace('/', "~1")
}

/// Field access over one JSON object that remembers which keys were read.
struct Obj<'a> {
    path: String,
    entries: &'a [(String, J)],
    seen: BTreeSet<&'a str>,
}

impl<'a> Obj<'a> {
    fn new(j: &'a J, path: &str) -> Result<Self, LexiconError> {
        let J::Obj(entries) = j else {
            return schema(path, format!("expected object, found {}", j.kind()));
        };
        let mut first: BTreeMap<&str, usize> = BTreeMap::new();
        for (i, (k, _)) in entries.iter().enumerate() {
            if let Some(prev) = first.insert(k.as_str(), i) {
                return schema(
                    path,
                    format!("duplicate key `{k}` (entries #{} and #{})", prev + 1, i + 1),
                );
            }
        }
        Ok(Obj {
            path: path.to_string(),
            entries,
            seen: BTreeSet::new(),
        })
    }

    fn at(&self, key: &str) -> String {
        format!("{}/{}", self.path, escape(key))
    }

    fn opt(&mut self, key: &'a str) -> Option<&'a J> {
        let found = self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v);
        if found.is_some() {
            self.seen.insert(key);
        }
        found.filter(|v| !matches!(v, J::Null))
    }

    fn req(&mut self, key: &'a str) -> Result<&'a J, LexiconError> {
        match self.opt(key) {
            Some(v) => Ok(v),
            None => schema(&self.path, format!("missing field `{key}`")),
        }
    }

    fn str(&mut self, key: &'a str) -> Result<String, LexiconError> {
        let v = self.req(key)?;
        as_str(v, &self.at(key))
    }

    fn opt_str(&mut self, key: &'a str) -> Result<Option<String>, LexiconError> {
        match self.opt(key) {
            Some(v) => as_str(v, &self.at(key)).map(Some),
            None => Ok(None),
        }
    }

    fn opt_usize(&mut self, key: &'a str) -> Result<Option<usize>, LexiconError> {
        match self.opt(key) {
            Some(J::Num(n)) => match n.as_u64() {
                Some(u) => Ok(Some(u as usize)),
                None => schema(&self.at(key), "expected a non-negative integer"),
            },
            Some(v) => schema(
                &self.at(key),
                format!("expected number, found {}", v.kind()),
            ),
            None => Ok(None),
        }
    }

    fn flag(&mut self, key: &'a str) -> Result<bool, LexiconError> {
        match self.opt(key) {
            Some(J::Bool(b)) => Ok(*b),
            Some(v) => schema(
                &self.at(key),
                format!("expected boolean, found {}", v.kind()),
            ),
            None => Ok(false),
        }
    }

    fn strings(&mut self, key: &'a str) -> Result<Vec<String>, LexiconError> {
        match self.opt(key) {
            None => Ok(Vec::new()),
            Some(v) => {
                let path = self.at(key);
                arr(v, &path)?
                    .iter()
                    .enumerate()
                    .map(|(i, s)| as_str(s, &format!("{path}/{i}")))
                    .collect()
            }
        }
    }

    fn finish(self, mode: Mode) -> Result<(), LexiconError> {
        if mode == Mode::Lax {
            return Ok(());
        }
        match self
            .entries
            .iter()
            .find(|(k, _)| !self.seen.contains(k.as_str()))
        {
            Some((k, _)) => schema(&self.path, format!("unknown field `{k}`")),
            None => Ok(()),
        }
    }
}

fn as_str(j: &J, path: &str) -> Result<String, LexiconError> {
    match j {
        J::Str(s) => Ok(s.clone()),
        _ => schema(path, format!("expected string, found {}", j.kind())),
    }
}

fn arr<'a>(j: &'a J, path: &str) -> Result<&'a [J], LexiconError> {
    match j {
        J::Arr(a) => Ok(a),
        _ => schema(path, format!("expected array, found {}", j.kind())),
    }
}

fn tag<T: std::str::FromStr>(s: &str, path: &str) -> Result<T, LexiconError>
where
    T::Err: fmt::Display,
{
    s.parse::<T>().or_else(|e| schema(path, e.to_string()))
}

/// Entries of an id-keyed map; a repeated id names both of its positions.
fn keyed<'a>(
    j: &'a J,
    path: &str,
    what: &str,
) -> Result<Vec<(&'a str, &'a J, String)>, LexiconError> {
    let J::Obj(entries) = j else {
        return schema(path, format!("expected object, found {}", j.kind()));
    };
    let mut first: BTreeMap<&str, usize> = BTreeMap::new();
    let mut out = Vec::new();
    for (i, (k, v)) in entries.iter().enumerate() {
        if let Some(prev) = first.insert(k.as_str(), i) {
            return schema(
                path,
                format!(
                    "duplicate {what} `{k}` at entries #{} and #{}",
                    prev + 1,
                    i + 1
                ),
            );
        }
        out.push((k.as_str(), v, format!("{path}/{}", escape(k))));
    }
    Ok(out)
}

fn check_id(o: &mut Obj<'_>, key: &str) -> Result<(), LexiconError> {
    let id = o.str("id")?;
    if id != key {
        return schema(
            &o.at("id"),
            format!("id `{id}` does not match its key `{key}`"),
        );
    }
    Ok(())
}

fn read_slot(j: &J, path: &str, mode: Mode) -> Result<Slot, LexiconError> {
    let mut o = Obj::new(j, path)?;
    let id = o.str("id")?;
    let kind: SlotKind = tag(&o.str("kind")?, &o.at("kind"))?;
    let category = match o.opt_str("category")? {
        Some(c) => Some(tag::<Category>(&c, &o.at("category"))?),
        None => None,
    };
    let role_binding = match o.opt_str("role")? {
        Some(r) => Some(tag::<ArgLabel>(&r, &o.at("role"))?),
        None => None,
    };
    let slot = Slot {
        id,
        kind,
        surface_forms: o.strings("surface")?.into_iter().collect(),
        category,
        min_tokens: o.opt_usize("min")?,
        max_tokens: o.opt_usize("max")?,
        role_binding,
        lv_marker: o.flag("lv")?,
        function_word: o.flag("function")?,
        comparative: o.flag("comparative")?,
    };
    o.finish(mode)?;
    Ok(slot)
}

fn read_construction(
    key: &str,
    j: &J,
    path: &str,
    mode: Mode,
) -> Result<Construction, LexiconError> {
    let mut o = Obj::new(j, path)?;
    check_id(&mut o, key)?;
    let meaning = o.str("meaning")?;
    let schematicity = match o.opt_str("schematicity")? {
        Some(s) => Some(tag::<Schematicity>(&s, &o.at("schematicity"))?),
        None => None,
    };
    let gap_limit = o.opt_usize("gap_limit")?.unwrap_or(DEFAULT_GAP_LIMIT);
    let exclusions = o.strings("exclude")?.into_iter().collect();
    let vpath = o.at("variants");
    let mut variants = Vec::new();
    for (vi, vj) in arr(o.req("variants")?, &vpath)?.iter().enumerate() {
        let p = format!("{vpath}/{vi}");
        let mut vo = Obj::new(vj, &p)?;
        let variant_id = vo.str("id")?;
        let notes = vo.opt_str("notes")?.unwrap_or_default();
        let spath = vo.at("slots");
        let mut slots = Vec::new();
        for (si, sj) in arr(vo.req("slots")?, &spath)?.iter().enumerate() {
            slots.push(read_slot(sj, &format!("{spath}/{si}"), mode)?);
        }
        vo.finish(mode)?;
        variants.push(SlotPattern {
            variant_id,
            slots,
            notes,
        });
    }
    o.finish(mode)?;
    Ok(Construction {
        id: key.to_string(),
        variants,
        meaning,
        schematicity,
        gap_limit,
        exclusions,
    })
}

fn read_arg(j: &J, path: &str, mode: Mode) -> Result<ArgSpec, LexiconError> {
    let mut o = Obj::new(j, path)?;
    let number: ArgLabel = tag(&o.str("number")?, &o.at("number"))?;
    let function: ThematicFunction = tag(&o.str("function")?, &o.at("function"))?;
    let description = o.str("description")?;
    let fixedness = match o.opt_str("fixedness")? {
        Some(f) => tag::<Fixedness>(&f, &o.at("fixedness"))?,
        None => Fixedness::Open,
    };
    let implicit_concept = o.opt_str("implicit_concept")?;
    o.finish(mode)?;
    Ok(ArgSpec {
        number,
        function,
        description,
        fixedness,
        implicit_concept,
    })
}

fn read_token_slots(j: &J, path: &str, mode: Mode) -> Result<TokenSlotMap, LexiconError> {
    let mut map = TokenSlotMap::default();
    for (letter, ej, p) in keyed(j, path, "letter")? {
        let mut o = Obj::new(ej, &p)?;
        let role: SurfaceRole = tag(&o.str("role")?, &o.at("role"))?;
        let arg = match o.opt_str("arg")? {
            Some(a) => Some(tag::<ArgLabel>(&a, &o.at("arg"))?),
            None => None,
        };
        let slot = match o.opt_str("slot")? {
            Some(s) => Some(tag::<MorphSlotKind>(&s, &o.at("slot"))?),
            None => None,
        };
        let entry = TokenSlot {
            role,
            arg,
            slot,
            form: o.opt_str("form")?,
            part: o.opt_usize("part")?,
        };
        o.finish(mode)?;
        map.entries.insert(letter.to_string(), entry);
    }
    Ok(map)
}

fn pair<'a>(j: &'a J, path: &str) -> Result<(&'a str, &'a str), LexiconError> {
    match j {
        J::Arr(items) if items.len() == 2 => match (&items[0], &items[1]) {
            (J::Str(a), J::Str(b)) => Ok((a, b)),
            _ => schema(path, "pair members must be strings"),
        },
        _ => schema(path, "expected a two-element array"),
    }
}

fn read_mapping(j: &J, path: &str, mode: Mode) -> Result<MetaphorMapping, LexiconError> {
    let mut o = Obj::new(j, path)?;
    let literal = o.str("literal")?;
    let idiomatic = o.opt_str("idiomatic")?;
    let ppath = o.at("pairs");
    let mut pairs = Vec::new();
    for (i, pj) in arr(o.req("pairs")?, &ppath)?.iter().enumerate() {
        let p = format!("{ppath}/{i}");
        let (a, b) = pair(pj, &p)?;
        pairs.push((tag::<ArgLabel>(a, &p)?, tag::<MappingTarget>(b, &p)?));
    }
    let mut idiomatic_pairs = Vec::new();
    if let Some(ij) = o.opt("idiomatic_pairs") {
        let ipath = o.at("idiomatic_pairs");
        for (i, pj) in arr(ij, &ipath)?.iter().enumerate() {
            let p = format!("{ipath}/{i}");
            let (a, b) = pair(pj, &p)?;
            idiomatic_pairs.push((tag::<ArgLabel>(a, &p)?, tag::<ArgLabel>(b, &p)?));
        }
    }
    let epath = o.at("extras");
    let extras = o
        .strings("extras")?
        .iter()
        .enumerate()
        .map(|(i, e)| tag::<MappingExtra>(e, &format!("{epath}/{i}")))
        .collect::<Result<_, _>>()?;
    o.finish(mode)?;
    Ok(MetaphorMapping {
        literal,
        idiomatic,
        pairs,
        idiomatic_pairs,
        extras,
    })
}

fn read_roleset(key: &str, j: &J, path: &str, mode: Mode) -> Result<Roleset, LexiconError> {
    let mut o = Obj::new(j, path)?;
    check_id(&mut o, key)?;
    let definition = o.str("definition")?;
    let kind: RolesetKind = tag(&o.str("kind")?, &o.at("kind"))?;
    let apath = o.at("args");
    let args = arr(o.req("args")?, &apath)?
        .iter()
        .enumerate()
        .map(|(i, a)| read_arg(a, &format!("{apath}/{i}"), mode))
        .collect::<Result<_, _>>()?;
    let token_slots = match o.opt("token_slots") {
        Some(t) => Some(read_token_slots(t, &o.at("token_slots"), mode)?),
        None => None,
    };
    let mapping = match o.opt("mapping") {
        Some(m) => Some(read_mapping(m, &o.at("mapping"), mode)?),
        None => None,
    };
    o.finish(mode)?;
    Ok(Roleset {
        predicate_id: key.to_string(),
        definition,
        args,
        kind,
        token_slots,
        mapping,
    })
}

fn read_morpheme(j: &J, path: &str, mode: Mode) -> Result<MorphEntry, LexiconError> {
    let mut o = Obj::new(j, path)?;
    let form = o.str("form")?;
    let gloss = o.str("gloss")?;
    let spath = o.at("slots");
    let allowed_slots = o
        .strings("slots")?
        .iter()
        .enumerate()
        .map(|(i, s)| tag::<MorphSlotKind>(s, &format!("{spath}/{i}")))
        .collect::<Result<_, _>>()?;
    let entry = MorphEntry {
        form,
        gloss,
        allowed_slots,
        pos_class: o.opt_str("pos")?.unwrap_or_default(),
        surface_variants: o.strings("variants")?.into_iter().collect(),
    };
    o.finish(mode)?;
    Ok(entry)
}

fn read_template(j: &J, path: &str, mode: Mode) -> Result<MorphTemplate, LexiconError> {
    let mut o = Obj::new(j, path)?;
    let template_id = o.str("id")?;
    let spath = o.at("slots");
    let mut slots = Vec::new();
    for (i, sj) in arr(o.req("slots")?, &spath)?.iter().enumerate() {
        let p = format!("{spath}/{i}");
        let mut so = Obj::new(sj, &p)?;
        let name = so.str("name")?;
        let kind: MorphSlotKind = tag(&so.str("kind")?, &so.at("kind"))?;
        let required = so.flag("required")?;
        let repeatable = so.flag("repeatable")?;
        so.finish(mode)?;
        slots.push(TemplateSlot {
            name,
            kind,
            required,
            repeatable,
        });
    }
    o.finish(mode)?;
    Ok(MorphTemplate { template_id, slots })
}

/// Parses a lexicon document. The result is not validated; see
/// [`cxn_core::validate::validate`].
pub fn parse_lexicon(document: &[u8], mode: Mode) -> Result<Lexicon, LexiconError> {
    let root: J = serde_json::from_slice(document).map_err(|e| LexiconError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let mut o = Obj::new(&root, "")?;
    let version = o.str("version")?;
    if version != FORMAT_VERSION {
        return schema(
            "/version",
            format!("unsupported format version `{version}`"),
        );
    }
    let mut lex = Lexicon::default();
    for (key, cj, p) in keyed(o.req("constructions")?, "/constructions", "construction id")? {
        lex.add_construction(read_construction(key, cj, &p, mode)?);
    }
    for (key, rj, p) in keyed(o.req("rolesets")?, "/rolesets", "predicate id")? {
        lex.add_roleset(read_roleset(key, rj, &p, mode)?);
    }
    if let Some(m) = o.opt("morphemes") {
        for (i, mj) in arr(m, "/morphemes")?.iter().enumerate() {
            lex.morphemes
                .push(read_morpheme(mj, &format!("/morphemes/{i}"), mode)?);
        }
    }
    if let Some(t) = o.opt("templates") {
        for (i, tj) in arr(t, "/templates")?.iter().enumerate() {
            lex.templates
                .push(read_template(tj, &format!("/templates/{i}"), mode)?);
        }
    }
    // Top-level keys are closed even in lax mode.
    o.finish(Mode::Strict)?;
    Ok(lex)
}

fn put<T: Into<Value>>(m: &mut Map<String, Value>, key: &str, v: T) {
    m.insert(key.to_string(), v.into());
}

fn slot_value(s: &Slot) -> Value {
    let mut m = Map::new();
    put(&mut m, "id", s.id.as_str());
    put(&mut m, "kind", s.kind.as_str());
    if !s.surface_forms.is_empty() {
        put(
            &mut m,
            "surface",
            s.surface_forms.iter().cloned().collect::<Vec<_>>(),
        );
    }
    if let Some(c) = s.category {
        put(&mut m, "category", c.as_str());
    }
    if let Some(n) = s.min_tokens {
        put(&mut m, "min", n);
    }
    if let Some(n) = s.max_tokens {
        put(&mut m, "max", n);
    }
    if let Some(r) = &s.role_binding {
        put(&mut m, "role", r.to_string());
    }
    for (key, on) in [
        ("lv", s.lv_marker),
        ("function", s.function_word),
        ("comparative", s.comparative),
    ] {
        if on {
            put(&mut m, key, true);
        }
    }
    Value::Object(m)
}

fn construction_value(c: &Construction) -> Value {
    let mut m = Map::new();
    put(&mut m, "id", c.id.as_str());
    put(&mut m, "meaning", c.meaning.as_str());
    if let Some(s) = c.schematicity {
        put(&mut m, "schematicity", s.as_str());
    }
    if c.gap_limit != DEFAULT_GAP_LIMIT {
        put(&mut m, "gap_limit", c.gap_limit);
    }
    if !c.exclusions.is_empty() {
        put(
            &mut m,
            "exclude",
            c.exclusions.iter().cloned().collect::<Vec<_>>(),
        );
    }
    let variants: Vec<Value> = c
        .variants
        .iter()
        .map(|v| {
            let mut vm = Map::new();
            put(&mut vm, "id", v.variant_id.as_str());
            put(
                &mut vm,
                "slots",
                v.slots.iter().map(slot_value).collect::<Vec<_>>(),
            );
            if !v.notes.is_empty() {
                put(&mut vm, "notes", v.notes.as_str());
            }
            Value::Object(vm)
        })
        .collect();
    put(&mut m, "variants", variants);
    Value::Object(m)
}

fn roleset_value(r: &Roleset) -> Value {
    let mut m = Map::new();
    put(&mut m, "id", r.predicate_id.as_str());
    put(&mut m, "definition", r.definition.as_str());
    put(&mut m, "kind", r.kind.as_str());
    let args: Vec<Value> = r
        .args
        .iter()
        .map(|a| {
            let mut am = Map::new();
            put(&mut am, "number", a.number.to_string());
            put(&mut am, "function", a.function.as_str());
            put(&mut am, "description", a.description.as_str());
            if a.fixedness != Fixedness::Open {
                put(&mut am, "fixedness", a.fixedness.as_str());
            }
            if let Some(c) = &a.implicit_concept {
                put(&mut am, "implicit_concept", c.as_str());
            }
            Value::Object(am)
        })
        .collect();
    put(&mut m, "args", args);
    if let Some(ts) = &r.token_slots {
        let mut tm = Map::new();
        for (letter, e) in &ts.entries {
            let mut em = Map::new();
            put(&mut em, "role", e.role.as_str());
            if let Some(a) = &e.arg {
                put(&mut em, "arg", a.to_string());
            }
            if let Some(s) = e.slot {
                put(&mut em, "slot", s.as_str());
            }
            if let Some(f) = &e.form {
                put(&mut em, "form", f.as_str());
            }
            if let Some(p) = e.part {
                put(&mut em, "part", p);
            }
            tm.insert(letter.clone(), Value::Object(em));
        }
        put(&mut m, "token_slots", Value::Object(tm));
    }
    if let Some(mp) = &r.mapping {
        let mut mm = Map::new();
        put(&mut mm, "literal", mp.literal.as_str());
        if let Some(i) = &mp.idiomatic {
            put(&mut mm, "idiomatic", i.as_str());
        }
        let pairs: Vec<Value> = mp
            .pairs
            .iter()
            .map(|(a, t)| json!([a.to_string(), t.to_string()]))
            .collect();
        put(&mut mm, "pairs", pairs);
        if !mp.idiomatic_pairs.is_empty() {
            let ip: Vec<Value> = mp
                .idiomatic_pairs
                .iter()
                .map(|(a, b)| json!([a.to_string(), b.to_string()]))
                .collect();
            put(&mut mm, "idiomatic_pairs", ip);
        }
        put(
            &mut mm,
            "extras",
            mp.extras
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>(),
        );
        put(&mut m, "mapping", Value::Object(mm));
    }
    Value::Object(m)
}

fn morpheme_value(e: &MorphEntry) -> Value {
    let mut m = Map::new();
    put(&mut m, "form", e.form.as_str());
    put(&mut m, "gloss", e.gloss.as_str());
    put(
        &mut m,
        "slots",
        e.allowed_slots
            .iter()
            .map(|s| s.as_str())
            .collect::<Vec<_>>(),
    );
    if !e.pos_class.is_empty() {
        put(&mut m, "pos", e.pos_class.as_str());
    }
    if !e.surface_variants.is_empty() {
        put(
            &mut m,
            "variants",
            e.surface_variants.iter().cloned().collect::<Vec<_>>(),
        );
    }
    Value::Object(m)
}

fn template_value(t: &MorphTemplate) -> Value {
    let slots: Vec<Value> = t
        .slots
        .iter()
        .map(|s| {
            let mut m = Map::new();
            put(&mut m, "name", s.name.as_str());
            put(&mut m, "kind", s.kind.as_str());
            if s.required {
                put(&mut m, "required", true);
            }
            if s.repeatable {
                put(&mut m, "repeatable", true);
            }
            Value::Object(m)
        })
        .collect();
    json!({"id": t.template_id, "slots": slots})
}

/// Canonical text without the validation gate: sorted keys, defaults
/// omitted, two-space indentation, trailing newline.
pub fn to_canonical_json(lex: &Lexicon) -> String {
    let mut m = Map::new();
    put(&mut m, "version", lex.version.as_str());
    let cxns: Map<String, Value> = lex
        .constructions
        .iter()
        .map(|(k, c)| (k.clone(), construction_value(c)))
        .collect();
    put(&mut m, "constructions", Value::Object(cxns));
    let rs: Map<String, Value> = lex
        .rolesets
        .iter()
        .map(|(k, r)| (k.clone(), roleset_value(r)))
        .collect();
    put(&mut m, "rolesets", Value::Object(rs));
    if !lex.morphemes.is_empty() {
        put(
            &mut m,
            "morphemes",
            lex.morphemes.iter().map(morpheme_value).collect::<Vec<_>>(),
        );
    }
    if !lex.templates.is_empty() {
        put(
            &mut m,
            "templates",
            lex.templates.iter().map(template_value).collect::<Vec<_>>(),
        );
    }
    let mut out =
        serde_json::to_string_pretty(&Value::Object(m)).expect("JSON values always serialize");
    out.push('\n');
    out
}

/// Canonical serialization of a lexicon that validates without errors.
pub fn serialize_lexicon(lex: &Lexicon) -> Result<String, LexiconError> {
    let diags = validate(lex);
    if has_errors(&diags) {
        return Err(LexiconError::Validation(diags));
    }
    Ok(to_canonical_json(lex))
}

#[cfg(test)]
mod tests {
    use super::*;

    const EMPTY: &str = r#"{"version":"1","constructions":{},"rolesets":{}}"#;

    #[test]
    fn empty_document() {
        let lex = parse_lexicon(EMPTY.as_bytes(), Mode::Strict).unwrap();
        assert_eq!(lex, Lexicon::default());
        assert_eq!(
            serialize_lexicon(&lex).unwrap(),
            "{\n  \"constructions\": {},\n  \"rolesets\": {},\n  \"version\": \"1\"\n}\n"
        );
    }

    #[test]
    fn syntax_error_has_position() {
        let err = parse_lexicon(b"{\n  \"version\": \"1\",\n  oops\n}", Mode::Strict).unwrap_err();
        match err {
            LexiconError::Syntax { line, column, .. } => assert_eq!((line, column), (3, 3)),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn duplicate_roleset_names_both_entries() {
        let doc = r#"{"version":"1","constructions":{},"rolesets":{
            "a-01":{"id":"a-01","definition":"x","kind":"lexical","args":[]},
            "b-01":{"id":"b-01","definition":"x","kind":"lexical","args":[]},
            "a-01":{"id":"a-01","definition":"y","kind":"lexical","args":[]}}}"#;
        let err = parse_lexicon(doc.as_bytes(), Mode::Strict)
            .unwrap_err()
            .to_string();
        assert!(err.contains("/rolesets"), "{err}");
        assert!(
            err.contains("`a-01`") && err.contains("#1") && err.contains("#3"),
            "{err}"
        );
    }

    #[test]
    fn unknown_keys_strict_and_lax() {
        let doc = r#"{"version":"1","constructions":{},"rolesets":{
            "a-01":{"id":"a-01","definition":"x","kind":"lexical","args":[],"colour":"red"}}}"#;
        let err = parse_lexicon(doc.as_bytes(), Mode::Strict)
            .unwrap_err()
            .to_string();
        assert!(err.contains("unknown field `colour`"), "{err}");
        assert!(parse_lexicon(doc.as_bytes(), Mode::Lax).is_ok());
        let top = r#"{"version":"1","constructions":{},"rolesets":{},"extra":1}"#;
        assert!(parse_lexicon(top.as_bytes(), Mode::Lax).is_err());
    }

    #[test]
    fn wrong_types_and_versions() {
        let bad = r#"{"version":"1","constructions":[],"rolesets":{}}"#;
        assert!(matches!(
            parse_lexicon(bad.as_bytes(), Mode::Strict),
            Err(LexiconError::Schema { .. })
        ));
        let v2 = r#"{"version":"2","constructions":{},"rolesets":{}}"#;
        assert!(parse_lexicon(v2.as_bytes(), Mode::Strict)
            .unwrap_err()
            .to_string()
            .contains("version"));
        let mismatch = r#"{"version":"1","constructions":{},"rolesets":{
            "a-01":{"id":"b-01","definition":"x","kind":"lexical","args":[]}}}"#;
        assert!(parse_lexicon(mismatch.as_bytes(), Mode::Strict).is_err());
    }

    #[test]
    fn serialize_refuses_invalid() {
        let mut lex = Lexicon::default();
        lex.add_construction(Construction::new(
            "c",
            "missing-01",
            vec![SlotPattern::new("v", vec![Slot::substantive("A", &["a"])])],
        ));
        assert!(matches!(
            serialize_lexicon(&lex),
            Err(LexiconError::Validation(_))
        ));
    }
}
