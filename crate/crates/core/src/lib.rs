//! Covering-system certificates for Sierpiński and Riesel numbers among
//! repdigits, repunits, repintegers and repstrings.
//!
//! - [`arith`]: modular arithmetic, orders, CRT and factorization.
//! - [`covering`]: covering systems of congruences.
//! - [`certificates`]: covers paired with primitive prime divisors.
//! - [`repforms`]: rep-form values and residues.
//! - [`constructions`]: machine checks for families of rep-forms.
//! - [`search`]: base-2 repstring search and table regeneration.

pub mod arith;
pub mod certificates;
pub mod cli;
pub mod constructions;
pub mod covering;
pub mod error;
pub mod json;
pub mod repforms;
pub mod search;

pub use arith::{Nat, ResidueClass};
pub use certificates::{CertEntry, CoverCertificate, Side};
pub use constructions::{FamilyClaim, FamilyVerdict, TClass};
pub use covering::{Congruence, CoveringSystem};
pub use error::{Error, Result};
pub use repforms::{RepForm, RepSpec};
