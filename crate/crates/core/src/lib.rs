//! Model checking and precedent reasoning over temporal jurisdictional
//! case bases.
//!
//! - [`model`]: jurisdictions, case-base models, validation, JSON files.
//! - [`formula`]: the modal language, its parser/printer and derived operators.
//! - [`checker`]: evaluation of formulas at states.
//! - [`precedent`]: binding precedents, per incuriam, overruling and classification, computed directly.
//! - [`ingestion`]: models from factor-annotated cases.
//! - [`harness`]: random models and formulas, reference oracles, axiom checks.

pub mod checker;
pub mod formula;
pub mod harness;
pub mod ingestion;
pub mod model;
pub mod precedent;
