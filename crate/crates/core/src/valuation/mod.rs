//! The valuation derived from a filtration and the checks run against it.

mod axioms;
mod derived;
mod model;
mod pair;
mod props;

pub use axioms::{check_axiom_i, check_axiom_ii, check_axiom_iii, check_axiom_iv, check_onto_nontrivial};
pub use derived::{DerivedValuation, Membership, ValueSet, DEFAULT_NU_CAP};
pub use model::{FiniteModel, ProfileGroup};
pub use pair::{valuation_pair, ValuationPair};
pub use props::{
    check_prime_submodule, check_prop21_i, check_prop21_ii, check_prop21_iii, check_prop21_iv,
    check_prop21_v, check_prop21_vi, check_strong_implies_trivial,
};

pub(crate) use axioms::{model_search, violation};
