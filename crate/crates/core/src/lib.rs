//! Finite semigroup toolkit.
//!
//! Cayley tables ([`table`]), subsemigroup closure and exact search
//! ([`closure`]), concrete families and counterexample constructions
//! ([`constructions`]), free bands ([`free_band`]), isomorph-free census of
//! small bands and exponent-`r` semigroups ([`enumeration`]), and the
//! verification commands behind the CLI ([`harness`]).

pub mod closure;
pub mod constructions;
pub mod element_set;
pub mod enumeration;
pub mod error;
pub mod free_band;
pub mod harness;
pub mod table;

pub use closure::{
    all_subsemigroups, all_subsemigroups_with, closure, has_subsemigroup_of_order,
    has_subsemigroup_of_order_with, is_closed, spectrum, spectrum_with, Spectrum, Strategy,
};
pub use constructions::{
    counterexample_without_subsemigroup, cyclic_group, direct_product, group_counterexample,
    rectangle_dims_for, rectangular_band, union_ideal, ConstructionSpec,
};
pub use element_set::ElementSet;
pub use enumeration::{count, enumerate, Constraint, EnumerationQuery, Mode};
pub use error::{Error, Result};
pub use free_band::{canonical_form, free_band_table, green_rees_order, word_equal, BandWord, CanonicalWord};
pub use table::{
    element_power, exhibit_small_subsemigroup, local_exponent, parse_sgt, satisfies_exponent,
    validate_table, MulTable, ValidationReport,
};
