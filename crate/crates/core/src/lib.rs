//! A workbench for two-sorted term-modal logic with non-rigid terms.
//!
//! * [`syntax`]: signatures, typed terms and formulas, parsing, substitution.
//! * [`semantics`]: finite Kripke models, satisfaction, bounded countermodel search.
//! * [`nonstandard`]: models whose constants are interpreted relative to the
//!   extension of the relation symbol they occur under.
//! * [`hilbert`]: the Hilbert system and its proof checker.
//! * [`format`]: the `.tms`, `.tmm`, `.tmn` and `.tmp` file formats.
//! * [`suite`]: executable checks tying the pieces together.

pub mod format;
pub mod hilbert;
pub mod nonstandard;
pub mod semantics;
pub mod suite;
pub mod syntax;
