//! Automorphic word maps on finite groups.
//!
//! The crate is organised bottom-up:
//!
//! - [`words`]: freely reduced words, variations and the constants `M(d, l)`.
//! - [`groups`]: concrete finite groups on dense element indices, automorphism
//!   groups, subgroups, quotients, characteristic series and the solvable radical.
//! - [`fibers`]: plain and automorphic word-map evaluation, fiber distributions,
//!   exhaustive/sampled fiber maximisation and the coset-equation rewrite.
//! - [`verify`]: exhaustive checkers for the fiber inequalities, returning
//!   structured reports.
//! - [`bounds`]: exact and log-space evaluation of the exclusion thresholds.

pub mod bounds;
mod error;
pub mod fibers;
pub mod groups;
pub mod verify;
pub mod words;

pub use error::{Error, ErrorClass, Result};

use num_rational::BigRational;

/// `p/q` in lowest terms (`p` alone when `q = 1`).
pub fn ratio_string(r: &BigRational) -> String {
    if r.denom() == &num_bigint::BigInt::from(1) {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub(crate) fn serialize_ratio<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ratio_string(r))
}

/// Size caps and evaluation budgets shared by the exhaustive algorithms.
///
/// Exceeding any of these is reported as an error, never by truncating.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct Limits {
    /// Largest group order [`groups::make_group`] will construct.
    pub order_cap: usize,
    /// Largest group order for which `Aut(G)` is enumerated.
    pub aut_order_cap: usize,
    /// Largest number of automorphisms kept in an enumerated set.
    pub autset_cap: usize,
    /// Largest group order for full subgroup enumeration.
    pub subgroup_cap: usize,
    /// Largest group order for normal-subgroup enumeration.
    pub normal_cap: usize,
    /// Largest group order for isomorphism testing.
    pub iso_cap: usize,
    /// Maximum number of word evaluations in one search.
    pub budget: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            order_cap: 4096,
            aut_order_cap: 512,
            autset_cap: 200_000,
            subgroup_cap: 200,
            normal_cap: 360,
            iso_cap: 512,
            budget: 100_000_000,
        }
    }
}
