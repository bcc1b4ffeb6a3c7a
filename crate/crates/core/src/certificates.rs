//! Cover certificates: covering systems whose congruences are paired with
//! primitive prime divisors of `2^m - 1`, and the residue classes of
//! Sierpiński or Riesel numbers they induce.

use crate::arith::{
    crt_combine, factorize, is_prime, mod_inverse, mod_pow_u64, mult_order, nat, order_of_two, Nat,
    ResidueClass,
};
use crate::covering::{Congruence, Coverage, CoveringSystem};
use crate::error::{Error, Result};
use crate::json;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;

/// Which of `k*2^n + 1` (Sierpiński) or `k*2^n - 1` (Riesel) is forced composite.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Sierpinski,
    Riesel,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Sierpinski => Side::Riesel,
            Side::Riesel => Side::Sierpinski,
        }
    }

    /// The residue `k` must have modulo `p` so that `p | k*2^n ± 1` whenever
    /// `n ≡ r (mod ord_p(2))`: `-2^-r` for Sierpiński, `2^-r` for Riesel.
    pub fn target_residue(self, r: u64, p: &Nat) -> Nat {
        let two_r = nat(2).modpow(&nat(r), p);
        let inv = mod_inverse(&two_r, p).expect("p is odd");
        match self {
            Side::Sierpinski => (p - inv) % p,
            Side::Riesel => inv,
        }
    }

    /// `±1` as added to `k*2^n`, reduced modulo `p`.
    pub(crate) fn offset_mod(self, p: u64) -> u64 {
        match self {
            Side::Sierpinski => 1 % p,
            Side::Riesel => p - 1,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Side::Sierpinski => "sierpinski",
            Side::Riesel => "riesel",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Sierpinski => "Sierpiński",
            Side::Riesel => "Riesel",
        })
    }
}

/// `(r, m, p)`: the congruence `r (mod m)` served by the prime `p`, where
/// `p` is a primitive prime divisor of `2^m - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CertEntry {
    pub r: u64,
    pub m: u64,
    #[serde(with = "crate::json::nat")]
    pub p: Nat,
}

impl CertEntry {
    pub fn new(r: u64, m: u64, p: impl Into<Nat>) -> Self {
        CertEntry { r, m, p: p.into() }
    }

    fn validate(&self) -> Result<()> {
        if self.m < 2 {
            return Err(Error::Invalid(format!("modulus {} is below 2", self.m)));
        }
        if self.r >= self.m {
            return Err(Error::Invalid(format!(
                "residue {} is not reduced modulo {}",
                self.r, self.m
            )));
        }
        if !is_prime(&self.p) || self.p.is_even() {
            return Err(Error::Invalid(format!("{} is not an odd prime", self.p)));
        }
        let order = mult_order(&nat(2), &self.p)?;
        if order != nat(self.m) {
            return Err(Error::Invalid(format!(
                "{} is not a primitive prime divisor of 2^{} - 1 (order of 2 is {order})",
                self.p, self.m
            )));
        }
        Ok(())
    }
}

impl fmt::Display for CertEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.m, self.p)
    }
}

/// A validated certificate: its congruences cover the integers and its
/// primes are distinct and primitive for their moduli.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCertificate")]
pub struct CoverCertificate {
    side: Side,
    entries: Vec<CertEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCertificate {
    #[serde(default)]
    schema: Option<String>,
    side: Side,
    entries: Vec<CertEntry>,
}

impl TryFrom<RawCertificate> for CoverCertificate {
    type Error = Error;

    fn try_from(raw: RawCertificate) -> Result<Self> {
        json::check_schema(&raw.schema)?;
        CoverCertificate::new(raw.side, raw.entries)
    }
}

impl CoverCertificate {
    pub fn new(side: Side, entries: Vec<CertEntry>) -> Result<Self> {
        for e in &entries {
            e.validate()?;
        }
        let mut primes = BTreeSet::new();
        for e in &entries {
            if !primes.insert(&e.p) {
                return Err(Error::Invalid(format!("prime {} is used twice", e.p)));
            }
        }
        let cert = CoverCertificate { side, entries };
        if let Coverage::Uncovered { witness } = cert.covering()?.is_covering() {
            return Err(Error::Invalid(format!(
                "certificate congruences do not cover {witness}"
            )));
        }
        Ok(cert)
    }

    /// Builds from `(r, m, p)` triples.
    pub fn from_triples(side: Side, triples: &[(u64, u64, u64)]) -> Result<Self> {
        Self::new(
            side,
            triples
                .iter()
                .map(|&(r, m, p)| CertEntry::new(r, m, p))
                .collect(),
        )
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn entries(&self) -> &[CertEntry] {
        &self.entries
    }

    pub fn primes(&self) -> Vec<Nat> {
        self.entries.iter().map(|e| e.p.clone()).collect()
    }

    pub fn max_prime(&self) -> Nat {
        self.entries
            .iter()
            .map(|e| e.p.clone())
            .max()
            .unwrap_or_default()
    }

    /// `2 * prod p_j`.
    pub fn class_modulus(&self) -> Nat {
        self.entries.iter().fold(nat(2), |acc, e| acc * &e.p)
    }

    pub fn covering(&self) -> Result<CoveringSystem> {
        CoveringSystem::new(
            self.entries
                .iter()
                .map(|e| Congruence::new(e.r, e.m))
                .collect::<Result<_>>()?,
        )
    }

    /// The residue classes `∓2^-r_j (mod p_j)` demanded of `k`.
    pub fn targets(&self) -> Vec<ResidueClass> {
        self.entries
            .iter()
            .map(|e| {
                ResidueClass::new(self.side.target_residue(e.r, &e.p), e.p.clone())
                    .expect("prime modulus")
            })
            .collect()
    }

    /// Same entries, residues replaced by `r_j + shift (mod m_j)`.
    pub fn shifted(&self, shift: &Nat, side: Side) -> Result<CoverCertificate> {
        let entries = self
            .entries
            .iter()
            .map(|e| {
                let r = ((shift + e.r) % e.m).to_u64().expect("below a u64 modulus");
                CertEntry::new(r, e.m, e.p.clone())
            })
            .collect();
        CoverCertificate::new(side, entries)
    }

    pub fn from_json(source_name: &str, text: &str) -> Result<Self> {
        json::from_str(source_name, text)
    }
}

impl fmt::Display for CoverCertificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "{} {{{}}}", self.side, parts.join(", "))
    }
}

/// All primes `p | 2^m - 1` with `ord_p(2) = m`, ascending.
pub fn primitive_prime_divisors(m: u32) -> Result<Vec<Nat>> {
    primitive_prime_divisors_with_seed(m, 0)
}

pub fn primitive_prime_divisors_with_seed(m: u32, seed: u64) -> Result<Vec<Nat>> {
    if !(2..=64).contains(&m) {
        return Err(Error::OutOfRange {
            what: "exponent m",
            detail: format!("{m} is outside 2..=64"),
        });
    }
    let value = (Nat::one() << m) - 1u32;
    let factors = crate::arith::factorize_with_seed(&value, seed);
    let mut out: Vec<Nat> = factors
        .primes()
        .filter(|p| {
            mult_order(&nat(2), p)
                .map(|o| o == nat(m as u64))
                .unwrap_or(false)
        })
        .cloned()
        .collect();
    out.sort();
    Ok(out)
}

/// CRT of the certificate's targets together with `k ≡ 1 (mod 2)`.
pub fn class_from_certificate(cert: &CoverCertificate) -> Result<ResidueClass> {
    let mut classes = cert.targets();
    classes.push(ResidueClass::new(1u32, 2u32)?);
    let class = crt_combine(&classes).map_err(|e| {
        Error::Logic(format!(
            "distinct odd primes cannot give inconsistent targets: {e}"
        ))
    })?;
    debug_assert_eq!(class.modulus(), &cert.class_modulus());
    Ok(class)
}

/// Outcome of [`verify_member_direct`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum DirectVerdict {
    /// For every `n` in `[0, period)`, `divisors[n]` divides `K*2^n ± 1`.
    Certified {
        period: u64,
        #[serde(with = "crate::json::nat_vec")]
        divisors: Vec<Nat>,
    },
    /// No listed prime divides `K*2^n ± 1`.
    Failure { n: u64 },
}

/// Above this period the `n` loop is split across the rayon pool.
const PARALLEL_PERIOD: u64 = 1 << 16;

/// Checks `K*2^n ± 1` for divisibility by the prime set over one full
/// period of `n`, independently of any covering system.
pub fn verify_member_direct(k: &Nat, primes: &[Nat], side: Side) -> Result<DirectVerdict> {
    if primes.is_empty() {
        return Err(Error::Invalid("empty prime set".into()));
    }
    if k.is_even() {
        return Err(Error::Invalid(format!("{k} is even")));
    }
    let max_p = primes.iter().max().expect("nonempty");
    if k <= max_p {
        return Err(Error::Inconclusive(format!(
            "{k} does not exceed the largest prime {max_p}; a value could equal the prime itself"
        )));
    }
    let mut small = Vec::with_capacity(primes.len());
    let mut period: u64 = 1;
    for p in primes {
        let pv = p
            .to_u64()
            .filter(|&v| v % 2 == 1 && v < 1 << 63)
            .ok_or_else(|| Error::Invalid(format!("{p} is not an odd prime below 2^63")))?;
        let m = order_of_two(pv)?;
        period = period
            .checked_mul(m / period.gcd(&m))
            .ok_or_else(|| Error::Resource("period of n overflows 64 bits".into()))?;
        let km = (k % p).to_u64().expect("reduced");
        small.push((pv, km));
    }
    let divisor_at = |n: u64| -> Option<u64> {
        small.iter().find_map(|&(p, km)| {
            let v = ((km as u128 * mod_pow_u64(2, n, p) as u128) % p as u128) as u64;
            (v + side.offset_mod(p)).is_multiple_of(p).then_some(p)
        })
    };
    let found: Vec<Option<u64>> = if period > PARALLEL_PERIOD {
        (0..period).into_par_iter().map(divisor_at).collect()
    } else {
        (0..period).map(divisor_at).collect()
    };
    match found.iter().position(Option::is_none) {
        Some(n) => Ok(DirectVerdict::Failure { n: n as u64 }),
        None => Ok(DirectVerdict::Certified {
            period,
            divisors: found
                .into_iter()
                .map(|p| nat(p.expect("checked")))
                .collect(),
        }),
    }
}

/// Builds a certificate for `k` from a prime set, taking for each prime the
/// class of `n` it covers. Primes that cover nothing (those dividing `k`, or
/// with `k` not `∓2^-r` modulo them) are dropped.
pub fn certificate_for(k: &Nat, primes: &[Nat], side: Side) -> Result<CoverCertificate> {
    let mut entries = Vec::new();
    for p in primes {
        let km = k % p;
        if km.is_zero() {
            continue;
        }
        let m = mult_order(&nat(2), p)?
            .to_u64()
            .ok_or_else(|| Error::Resource(format!("order of 2 modulo {p} too large")))?;
        if let Some(r) = (0..m).find(|&r| side.target_residue(r, p) == km) {
            entries.push(CertEntry::new(r, m, p.clone()));
        }
    }
    CoverCertificate::new(side, entries)
}

/// Odd prime factors of `modulus`.
pub fn primes_from_modulus(modulus: &Nat) -> Result<Vec<Nat>> {
    let primes: Vec<Nat> = factorize(modulus)
        .primes()
        .filter(|p| p.is_odd())
        .cloned()
        .collect();
    if primes.is_empty() {
        return Err(Error::Invalid(format!(
            "{modulus} has no odd prime factors"
        )));
    }
    Ok(primes)
}

/// The certificate behind the classic demonstration cover.
pub fn classic_sierpinski_certificate() -> CoverCertificate {
    CoverCertificate::from_triples(
        Side::Sierpinski,
        &[
            (0, 2, 3),
            (0, 3, 7),
            (1, 4, 5),
            (3, 8, 17),
            (11, 12, 13),
            (7, 24, 241),
        ],
    )
    .expect("valid certificate")
}
