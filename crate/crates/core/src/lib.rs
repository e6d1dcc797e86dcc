//! Induced poset saturation in the Boolean lattice `2^[n]`.
//!
//! The crate decides whether a family of subsets of `[n]` contains an
//! induced copy of a pattern poset, whether it is saturated for that
//! pattern, decomposes diamond-saturated families into their minimal /
//! maximal / generator parts and checks the structural bounds they obey,
//! and computes `sat*(n, P)` exactly for small `n` with a
//! symmetry-reduced layered search.

pub mod canon;
pub mod error;
pub mod family;
pub mod hasse;
pub mod induced;
pub mod pattern;
pub mod saturation;
pub mod search;
pub mod structure;

pub use canon::{canonical_form, CanonicalForm};
pub use error::{Error, Result};
pub use family::{parse_family, SetFamily, Subset};
pub use induced::{find_diamond, find_induced, find_induced_using, Embedding};
pub use pattern::PatternPoset;
pub use saturation::{is_free, is_saturated, CheckMode, SaturationReport, Verdict};

pub use search::{
    classify_minimum, q3_probe, sat_star_exact, sat_star_no_extremes, SearchManifest, SearchOptions,
};
