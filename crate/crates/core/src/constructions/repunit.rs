//! Repunit Sierpiński and Riesel numbers from the dyadic cover
//! `{2^(j-1) (mod 2^j) : 1 <= j <= tau} ∪ {0 (mod 2^tau)}`.

use super::{check_family, FamilyClaim, FamilyVerdict, TClass};
use crate::arith::{crt_combine, mult_order, nat, Nat, ResidueClass};
use crate::certificates::{CertEntry, CoverCertificate, Side};
use crate::error::{Error, Result};
use crate::repforms::RepForm;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

/// Upper bound on `ord_q(b)` for the incremental repunit scan.
const MAX_SCAN: u64 = 1 << 32;

/// The prime choice for the dyadic cover: `p_j` primitive for `2^(2^j) - 1`,
/// and a second primitive divisor `q` of `2^(2^tau) - 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepunitSetup {
    pub tau: u32,
    #[serde(with = "crate::json::nat_vec")]
    pub primes: Vec<Nat>,
    #[serde(with = "crate::json::nat")]
    pub q: Nat,
}

impl RepunitSetup {
    pub fn new(tau: u32, primes: Vec<Nat>, q: Nat) -> Result<Self> {
        if !(1..=23).contains(&tau) {
            return Err(Error::OutOfRange {
                what: "tau",
                detail: format!("{tau} is outside 1..=23"),
            });
        }
        if primes.len() != tau as usize {
            return Err(Error::Precondition(format!(
                "need {tau} primes p_1..p_tau, got {}",
                primes.len()
            )));
        }
        // validation of primality and primitivity happens in the certificate
        let setup = RepunitSetup { tau, primes, q };
        if setup.q == setup.primes[tau as usize - 1] {
            return Err(Error::Precondition(format!(
                "q = {} coincides with p_tau",
                setup.q
            )));
        }
        setup
            .certificate(Side::Sierpinski)
            .map_err(|e| Error::Precondition(format!("prime choice rejected: {e}")))?;
        Ok(setup)
    }

    /// `(2^(j-1), 2^j, p_j)` for each `j`, then `(0, 2^tau, q)`.
    pub fn certificate(&self, side: Side) -> Result<CoverCertificate> {
        let mut entries: Vec<CertEntry> = self
            .primes
            .iter()
            .enumerate()
            .map(|(i, p)| CertEntry::new(1 << i, 1 << (i + 1), p.clone()))
            .collect();
        entries.push(CertEntry::new(0, 1 << self.tau, self.q.clone()));
        CoverCertificate::new(side, entries)
    }

    /// `P = p_1 ... p_tau`.
    pub fn product(&self) -> Nat {
        self.primes.iter().product()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum RepunitCase {
    /// Sierpiński (i): `b ≡ 1 (mod q)` and `q ∤ L`; `t ≡ -1 (mod q)`.
    OneModQ,
    /// Sierpiński (ii): the repunit of length `s` is `-1 (mod q)` and the
    /// residue repeats with period `ord_q(b)`.
    RepunitHitsTarget {
        #[serde(with = "crate::json::nat")]
        s: Nat,
        #[serde(with = "crate::json::nat")]
        order: Nat,
    },
    /// Riesel (i): `q | b`; no condition modulo `q`.
    ZeroModQ,
    /// Riesel (ii): `b ≡ 1 (mod q)`; `t ≡ 1 (mod q)`.
    RieselOneModQ,
    /// Riesel (iii): `t ≡ 1 (mod ord_q(b))` with `gcd(P, ord_q(b)) = 1`.
    CoprimeOrder {
        #[serde(with = "crate::json::nat")]
        order: Nat,
    },
}

/// One row of the `l_j` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EllEntry {
    #[serde(with = "crate::json::nat")]
    pub prime: Nat,
    #[serde(with = "crate::json::nat")]
    pub ell: Nat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepunitConstruction {
    pub case: RepunitCase,
    /// `l_j` for the Sierpiński construction; empty for Riesel.
    pub ell_table: Vec<EllEntry>,
    /// `L = lcm(2, l_1, ..., l_tau)`, or the product `P` for Riesel.
    #[serde(with = "crate::json::nat")]
    pub l: Nat,
    pub tclass: TClass,
    pub claim: FamilyClaim,
    pub verdict: FamilyVerdict,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RepunitOutcome {
    Constructed(Box<RepunitConstruction>),
    Failed { reason: String },
}

impl RepunitOutcome {
    pub fn construction(&self) -> Option<&RepunitConstruction> {
        match self {
            RepunitOutcome::Constructed(c) => Some(c),
            RepunitOutcome::Failed { .. } => None,
        }
    }
}

/// `1 if p | b`, `p if b ≡ 1`, `ord_p(b)` otherwise.
fn ell(b: &Nat, p: &Nat) -> Nat {
    let r = b % p;
    if r.is_zero() {
        Nat::one()
    } else if r.is_one() {
        p.clone()
    } else {
        mult_order(&r, p).expect("p does not divide b")
    }
}

fn check_base(b: &Nat) -> Result<()> {
    if *b <= nat(2) {
        return Err(Error::Precondition(format!("base {b} must exceed 2")));
    }
    Ok(())
}

fn finish(
    b: &Nat,
    setup: &RepunitSetup,
    side: Side,
    case: RepunitCase,
    ell_table: Vec<EllEntry>,
    l: Nat,
    conditions: &[ResidueClass],
) -> Result<RepunitOutcome> {
    let combined = match crt_combine(conditions) {
        Ok(c) => c,
        Err(Error::Inconsistent { first, second }) => {
            return Ok(RepunitOutcome::Failed {
                reason: format!("conditions {first} and {second} on t are incompatible"),
            })
        }
        Err(e) => return Err(e),
    };
    let tclass = TClass::from_residue_class(&combined);
    let claim = FamilyClaim::new(
        format!("1_{b} repunit {}", side.as_str()),
        RepForm::new(Nat::one(), b.clone(), 0)?,
        tclass.clone(),
        side,
        setup.certificate(side)?,
    );
    let verdict = check_family(&claim)?;
    if !verdict.is_proved() {
        return Err(Error::Logic(format!(
            "repunit class {tclass} for base {b} does not verify: {verdict}"
        )));
    }
    let claim = FamilyClaim {
        expected_class: verdict.proof().map(|p| p.class.clone()),
        ..claim
    };
    Ok(RepunitOutcome::Constructed(Box::new(RepunitConstruction {
        case,
        ell_table,
        l,
        tclass,
        claim,
        verdict,
    })))
}

/// A t-class on which the base-`b` repunit is a Sierpiński number, or the
/// reason none exists under either condition.
pub fn repunit_sierpinski_construction(
    b: &Nat,
    tau: u32,
    primes: Vec<Nat>,
    q: Nat,
) -> Result<RepunitOutcome> {
    check_base(b)?;
    let setup = RepunitSetup::new(tau, primes, q)?;
    let q = &setup.q;
    if (b % q).is_zero() {
        return Err(Error::Precondition(format!("{q} divides the base {b}")));
    }
    let ell_table: Vec<EllEntry> = setup
        .primes
        .iter()
        .map(|p| EllEntry {
            prime: p.clone(),
            ell: ell(b, p),
        })
        .collect();
    let l = ell_table.iter().fold(nat(2), |acc, e| acc.lcm(&e.ell));
    let one_mod_l = ResidueClass::new(1u32, l.clone())?;

    if (b % q).is_one() {
        if (&l % q).is_zero() {
            return Ok(RepunitOutcome::Failed {
                reason: format!("b ≡ 1 (mod {q}) but {q} divides L = {l}"),
            });
        }
        let minus_one = ResidueClass::from_signed(&BigInt::from(-1), q.clone())?;
        return finish(
            b,
            &setup,
            Side::Sierpinski,
            RepunitCase::OneModQ,
            ell_table,
            l,
            &[one_mod_l, minus_one],
        );
    }

    // the repunit residue modulo q has period ord_q(b) in t
    let b_mod = b % q;
    let order = mult_order(&b_mod, q)?;
    let order_u = order
        .to_u64()
        .filter(|&o| o <= MAX_SCAN)
        .ok_or_else(|| Error::Resource(format!("ord_{q}(b) = {order} is too large to scan")))?;
    let target = q - 1u32;
    let mut repunit = Nat::zero();
    for s in 1..=order_u {
        repunit = (repunit * &b_mod + 1u32) % q;
        if repunit != target {
            continue;
        }
        let hit = ResidueClass::new(nat(s), order.clone())?;
        if hit.compatible_with(&one_mod_l) {
            return finish(
                b,
                &setup,
                Side::Sierpinski,
                RepunitCase::RepunitHitsTarget {
                    s: nat(s),
                    order: order.clone(),
                },
                ell_table,
                l.clone(),
                &[one_mod_l, hit],
            );
        }
    }
    Ok(RepunitOutcome::Failed {
        reason: format!("no t ≡ 1 (mod {l}) makes the base-{b} repunit ≡ -1 (mod {q})"),
    })
}

/// A t-class on which the base-`b` repunit is a Riesel number; needs
/// `b ≡ 1 (mod P)`.
pub fn repunit_riesel_construction(
    b: &Nat,
    tau: u32,
    primes: Vec<Nat>,
    q: Nat,
) -> Result<RepunitOutcome> {
    check_base(b)?;
    let setup = RepunitSetup::new(tau, primes, q)?;
    let q = &setup.q;
    let p_all = setup.product();
    if !(b % &p_all).is_one() {
        return Err(Error::Precondition(format!(
            "b = {b} is not ≡ 1 (mod P = {p_all})"
        )));
    }
    let mut conditions = vec![ResidueClass::from_signed(&BigInt::from(-1), p_all.clone())?];
    let b_mod = b % q;
    let case = if b_mod.is_zero() {
        RepunitCase::ZeroModQ
    } else if b_mod.is_one() {
        conditions.push(ResidueClass::new(1u32, q.clone())?);
        RepunitCase::RieselOneModQ
    } else {
        let order = mult_order(&b_mod, q)?;
        if !order.gcd(&p_all).is_one() {
            return Ok(RepunitOutcome::Failed {
                reason: format!("gcd(P, ord_{q}(b)) = gcd({p_all}, {order}) is not 1"),
            });
        }
        conditions.push(ResidueClass::new(1u32, order.clone())?);
        RepunitCase::CoprimeOrder { order }
    };
    if b.is_odd() {
        // an odd base makes the repunit's parity that of t
        conditions.push(ResidueClass::new(1u32, 2u32)?);
    }
    finish(
        b,
        &setup,
        Side::Riesel,
        case,
        Vec::new(),
        p_all,
        &conditions,
    )
}

/// Whether the base-`b` repunit of length `t` is `≡ -1 (mod q)`.
pub fn repunit_is_minus_one(b: &Nat, t: &Nat, q: &Nat) -> Result<bool> {
    let r = RepForm::new(Nat::one(), b.clone(), 0)?.residue(t, q)?;
    Ok(r == q - 1u32)
}
