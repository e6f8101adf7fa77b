//! Cross-validation of the engine against closed forms and independent
//! oracles.

mod cache;
mod classify;
mod finite;
mod gen;
mod naive;
mod suites;

pub use cache::{CacheError, CacheStore, CACHE_VERSION, MAX_INLINE_THEORY};
pub use classify::{classify, compositions_up_to, monomial_inventory, EquivClass};
pub use finite::{finite_oracle, FiniteOracleError, MAX_CHAIN, MAX_MOVES};
pub use gen::{random_atom, random_normalizable, random_term};
pub use naive::{NaiveError, NaiveGame, MAX_NAIVE_DEPTH};
pub use suites::{
    build_discrete_block_family, cross_validate, special_sum_pairs, CaseBudget, Failure, HarnessError, SuiteReport,
    ALL_PROPERTIES, GRID_SUITES, PROPERTY_SUITES,
};
