//! Core of the constructicon engine.
//!
//! A *construction* pairs a form pole (ordered fixed and open slots) with a
//! meaning pole (a roleset). This crate holds the domain model and every
//! algorithm that works over it:
//!
//! - [`model`]: constructions, rolesets, token-slot maps and metaphor mappings.
//! - [`validate`]: lexicon-wide consistency diagnostics.
//! - [`matcher`]: detection of (possibly gappy) construction instances in
//!   tokenized sentences, light-verb detection and overlap resolution.
//! - [`morph`]: verb-word segmentation against slot templates, initial change,
//!   reattachment of detached preverbs and stem-internal analysis.
//! - [`graph`]: literal and idiomatic meaning graphs and their parenthesized
//!   notation.
//! - [`probe`]: prompt assembly, answer parsing and scoring for novel-MWE
//!   probes.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the CLI and
//! anything that talks to the network live in the `cxn` crate.
#![no_std]

extern crate alloc;

pub mod diagnostic;
pub mod graph;
pub mod matcher;
pub mod model;
pub mod morph;
pub mod probe;
pub mod validate;

pub use diagnostic::{Diagnostic, Severity};
pub use model::{
    ArgLabel, ArgSpec, Category, Construction, Lexicon, MetaphorMapping, MorphEntry, MorphSlotKind,
    MorphTemplate, Roleset, RolesetKind, Schematicity, Slot, SlotKind, SlotPattern, TokenSlot,
    TokenSlotMap,
};
