//! Covering systems of the integers.

use crate::arith::{nat, reduce_signed};
use crate::error::{Error, Result};
use crate::json;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::collections::HashSet;
use std::fmt;

/// Largest lcm of moduli that exhaustive verification will accept.
pub const DEFAULT_LCM_BUDGET: u64 = 10_000_000;

/// `residue (mod modulus)` with the residue in `[0, modulus)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Congruence {
    #[serde(rename = "r")]
    residue: u64,
    #[serde(rename = "m")]
    modulus: u64,
}

impl Congruence {
    pub fn new(residue: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidModulus);
        }
        Ok(Congruence {
            residue: residue % modulus,
            modulus,
        })
    }

    pub fn from_signed(residue: &BigInt, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidModulus);
        }
        let r = reduce_signed(residue, &nat(modulus));
        Ok(Congruence {
            residue: r.to_u64().expect("reduced below a u64 modulus"),
            modulus,
        })
    }

    pub fn residue(&self) -> u64 {
        self.residue
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn contains(&self, n: u64) -> bool {
        n % self.modulus == self.residue
    }

    /// `residue + a (mod modulus)`.
    pub fn shifted(&self, a: &BigInt) -> Congruence {
        Congruence::from_signed(&(a + BigInt::from(self.residue)), self.modulus)
            .expect("modulus already validated")
    }
}

impl fmt::Display for Congruence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

/// A congruence as written in a file; residues may be negative or unreduced.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCongruence {
    r: i128,
    m: u64,
}

impl TryFrom<RawCongruence> for Congruence {
    type Error = Error;

    fn try_from(raw: RawCongruence) -> Result<Self> {
        Congruence::from_signed(&BigInt::from(raw.r), raw.m)
    }
}

impl<'de> Deserialize<'de> for Congruence {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = RawCongruence::deserialize(d)?;
        Congruence::try_from(raw).map_err(serde::de::Error::custom)
    }
}

/// Outcome of exhaustive covering verification.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Coverage {
    Covering,
    /// Smallest nonnegative integer hit by no congruence.
    Uncovered {
        witness: u64,
    },
}

impl Coverage {
    pub fn is_covering(&self) -> bool {
        matches!(self, Coverage::Covering)
    }
}

/// A finite nonempty collection of congruences with moduli at least 2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct CoveringSystem {
    congruences: Vec<Congruence>,
    #[serde(skip)]
    lcm: u64,
}

impl CoveringSystem {
    pub fn new(congruences: Vec<Congruence>) -> Result<Self> {
        Self::with_budget(congruences, DEFAULT_LCM_BUDGET)
    }

    pub fn with_budget(congruences: Vec<Congruence>, budget: u64) -> Result<Self> {
        if congruences.is_empty() {
            return Err(Error::Invalid(
                "a covering system needs at least one congruence".into(),
            ));
        }
        if let Some(c) = congruences.iter().find(|c| c.modulus < 2) {
            return Err(Error::Invalid(format!("modulus of {c} is below 2")));
        }
        let mut seen = HashSet::new();
        for c in &congruences {
            if !seen.insert(*c) {
                log::warn!("duplicate congruence {c} in covering system");
            }
        }
        let mut lcm: u64 = 1;
        for c in &congruences {
            lcm = (lcm as u128)
                .lcm(&(c.modulus as u128))
                .try_into()
                .ok()
                .filter(|&l| l <= budget)
                .ok_or_else(|| {
                    Error::Resource(format!(
                        "lcm of moduli exceeds the verification budget {budget}"
                    ))
                })?;
        }
        Ok(CoveringSystem { congruences, lcm })
    }

    pub fn congruences(&self) -> &[Congruence] {
        &self.congruences
    }

    pub fn len(&self) -> usize {
        self.congruences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.congruences.is_empty()
    }

    /// Least common multiple of the moduli.
    pub fn lcm_of_moduli(&self) -> u64 {
        self.lcm
    }

    /// Checks every residue in `[0, L)` with a bitset, `L` the lcm of moduli.
    pub fn is_covering(&self) -> Coverage {
        let l = self.lcm as usize;
        let mut hit = vec![0u64; l.div_ceil(64)];
        for c in &self.congruences {
            let mut n = c.residue as usize;
            while n < l {
                hit[n / 64] |= 1 << (n % 64);
                n += c.modulus as usize;
            }
        }
        for (i, word) in hit.iter().enumerate() {
            let missing = !word;
            if missing != 0 {
                let n = i * 64 + missing.trailing_zeros() as usize;
                if n < l {
                    return Coverage::Uncovered { witness: n as u64 };
                }
            }
        }
        // Necessary density condition: sum of 1/m_j is at least 1.
        debug_assert!(
            self.congruences
                .iter()
                .map(|c| self.lcm / c.modulus)
                .sum::<u64>()
                >= self.lcm
        );
        Coverage::Covering
    }

    /// `{r_j + a (mod m_j)}`, congruence by congruence.
    ///
    /// With `verify`, the input must be a covering and so is the output.
    pub fn shift_cover(&self, a: &BigInt, verify: bool) -> Result<CoveringSystem> {
        if verify {
            if let Coverage::Uncovered { witness } = self.is_covering() {
                return Err(Error::Precondition(format!(
                    "cannot shift a non-covering system (uncovered residue {witness})"
                )));
            }
        }
        let shifted = CoveringSystem {
            congruences: self.congruences.iter().map(|c| c.shifted(a)).collect(),
            lcm: self.lcm,
        };
        if verify && !shifted.is_covering().is_covering() {
            return Err(Error::Logic("shifted covering lost coverage".into()));
        }
        Ok(shifted)
    }

    /// Compact JSON array of `{"r", "m"}` objects.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("congruences serialize")
    }

    pub fn from_json(source_name: &str, text: &str) -> Result<Self> {
        let doc: serde_json::Value = json::from_str(source_name, text)?;
        let items = match doc {
            serde_json::Value::Array(items) => items,
            serde_json::Value::Object(mut map) => {
                let schema = map
                    .remove("schema")
                    .map(|v| v.as_str().map(str::to_string).unwrap_or_default());
                json::check_schema(&schema)?;
                match map.remove("congruences") {
                    Some(serde_json::Value::Array(items)) => items,
                    _ => {
                        return Err(json::field_error(
                            source_name,
                            "expected a `congruences` array",
                        ))
                    }
                }
            }
            _ => {
                return Err(json::field_error(
                    source_name,
                    "expected an array of {\"r\", \"m\"} objects",
                ))
            }
        };
        let congruences = items
            .into_iter()
            .enumerate()
            .map(|(i, item)| {
                serde_json::from_value::<Congruence>(item)
                    .map_err(|e| json::field_error(source_name, &format!("congruence #{i}: {e}")))
            })
            .collect::<Result<Vec<_>>>()?;
        CoveringSystem::new(congruences)
    }
}

impl fmt::Display for CoveringSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.congruences.iter().map(|c| c.to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// `{0, 1, 2 (mod 3)}`.
pub fn trivial_cover() -> CoveringSystem {
    system(&[(0, 3), (1, 3), (2, 3)])
}

/// `{0 (mod 2), 0 (mod 3), 1 (mod 4), 3 (mod 8), 11 (mod 12), 7 (mod 24)}`.
pub fn classic_cover() -> CoveringSystem {
    system(&[(0, 2), (0, 3), (1, 4), (3, 8), (11, 12), (7, 24)])
}

/// `{2^(j-1) (mod 2^j) : 1 <= j <= tau} ∪ {0 (mod 2^tau)}`.
pub fn dyadic_cover(tau: u32) -> CoveringSystem {
    assert!((1..=23).contains(&tau), "tau out of range");
    let mut pairs: Vec<(u64, u64)> = (1..=tau).map(|j| (1 << (j - 1), 1 << j)).collect();
    pairs.push((0, 1 << tau));
    system(&pairs)
}

pub(crate) fn system(pairs: &[(u64, u64)]) -> CoveringSystem {
    CoveringSystem::new(
        pairs
            .iter()
            .map(|&(r, m)| Congruence::new(r, m).expect("nonzero modulus"))
            .collect(),
    )
    .expect("valid system")
}
