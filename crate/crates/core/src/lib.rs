//! Exact verification of Calabi-Yau quotient conditions.
//!
//! Finite groups acting on complex tori (Type A) or on K3 x elliptic data (Type K)
//! are checked with exact cyclotomic and integer arithmetic only.

pub mod cyclotomic;
pub mod groups;
pub mod reps;
pub mod torus;
pub mod presets;
pub mod picard;
pub mod classify;
pub mod chamber;
pub mod schema;
