//! Finite-group Cayley graph colour symmetries.
//!
//! A connected Cayley graph `Cay(G; S)` carries a natural edge colouring:
//! the edge `{x, xs}` gets the colour of the inverse-closed pair `{s, s⁻¹}`.
//! Left translations preserve this colouring, and composing a translation
//! with a group automorphism that permutes `S` gives further colour-respecting
//! symmetries; maps of that shape are called *affine*.
//!
//! A group `G` is **CCA** (Cayley colour automorphism) when every
//! colour-preserving automorphism of every connected Cayley graph on `G` is
//! affine, and **strongly CCA** when the same holds for colour-permuting
//! automorphisms (those that induce a well-defined permutation of the
//! colours rather than fixing each one).
//!
//! This crate decides both properties for small groups by exhaustive,
//! certificate-producing search:
//!
//! * [`group`] — finite groups as multiplication tables, plus the structural
//!   toolbox (closures, automorphisms, quotients, abelian invariants).
//! * [`families`] — recipes and a catalogue of all groups of order < 32.
//! * [`cayley`] — connection sets and coloured Cayley graphs.
//! * [`engine`] — backtracking enumeration of colour-preserving and
//!   colour-permuting vertex stabilizers, with a brute-force cross-check.
//! * [`decide`] — per-group verdicts, connection-set enumeration, the
//!   abelian and generalized dihedral classifications, and a census runner.
//! * [`witnesses`] — constructive non-affine witnesses for the standard
//!   obstruction patterns, each re-verified by the engine.

pub mod cayley;
pub mod decide;
pub mod engine;
pub mod families;
pub mod group;
pub mod witnesses;

/// Version string recorded in reports and cache keys; bump on any change
/// that can alter enumeration order or verdict output.
pub const ENGINE_VERSION: &str = env!("CARGO_PKG_VERSION");
