//! Exact carriers for rings and modules and the value domain `ℕ ∪ {∞}`.

mod carriers;
mod element;
mod structure;
mod value;

pub use carriers::{DirectSum, Integers, ModuleOps, RegularModule, RingOps, TruncatedPoly, Zmod};
pub use element::Element;
pub(crate) use element::split_tuple;
pub use value::{compare, Comparison, ExtendedValue, INFINITY};
pub use structure::{self_test_structure, Law, LAW_BUDGET, LAW_SAMPLES};
