//! Higher-level complete permutation polynomials over finite fields of odd
//! characteristic.
//!
//! [`gf`] does the field arithmetic, [`poly`] handles sparse polynomials and
//! value tables, [`family`] builds the additive and multiplicative families,
//! [`analysis`] and [`group`] check their properties exhaustively, and
//! [`suite`] bundles every check into one report.

pub mod analysis;
pub mod error;
pub mod family;
pub mod gf;
pub mod group;
pub mod poly;
pub mod suite;
mod zpoly;

pub use analysis::{completeness_level, cycle_type, is_permutation, permutation_order, CycleType, PermReport};
pub use error::{Error, Result};
pub use family::{family_m, Family, FamilyParams, Flavor, Tower};
pub use gf::{find_irreducible, FieldCtx, FieldElement, FieldSpec};
pub use poly::{compose_tables, SparsePoly, ValueTable};
