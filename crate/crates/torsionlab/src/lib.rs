//! Exact-arithmetic engines for torsion subgroups of elliptic curves with
//! full 2-torsion over the imaginary quadratic fields of class number 1,
//! quadratic twists and quadratic extensions, together with the auxiliary
//! objects (plane curves, birational maps, genus-2 Jacobians over small
//! finite fields, hyperelliptic modular-curve models) needed to check the
//! classification tables end to end.
//!
//! No floating point anywhere: all field arithmetic is exact rational
//! arithmetic on arbitrary-precision integers.

pub mod arith;
pub mod field;
pub mod qfield;
pub mod ff;
pub mod tower;
pub mod poly;
pub mod ecurve;
pub mod twistlab;
pub mod genweier;
pub mod auxlab;
pub mod cantor;
pub mod modcurve;
pub mod dataset;
pub mod verify;

pub use field::FieldElem;
pub use qfield::{FieldTag, QuadElem};
pub use tower::{TowerElem, TowerTag};
