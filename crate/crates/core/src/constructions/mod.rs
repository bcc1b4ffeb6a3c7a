//! Machine checks for families of Sierpiński and Riesel rep-forms.
//!
//! A [`FamilyClaim`] asserts that `k_b^(z;t)` is a Sierpiński (or Riesel)
//! number for every `t` in a residue class. [`check_family`] proves such a
//! claim from a cover certificate by re-deriving, for every certificate prime,
//! a period of the rep-form residue in `t` and checking the residue at one
//! representative.

mod corpus;
mod repunit;

pub use corpus::{bundled_corpus, check_corpus, ClaimCorpus, ClaimOutcome, ClaimStatus};
pub use repunit::{
    repunit_is_minus_one, repunit_riesel_construction, repunit_sierpinski_construction, EllEntry,
    RepunitCase, RepunitConstruction, RepunitOutcome, RepunitSetup,
};

use crate::arith::{crt_combine, nat, Nat, ResidueClass};
use crate::certificates::{class_from_certificate, CoverCertificate, Side};
use crate::error::{Error, Result};
use crate::repforms::RepForm;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// `{t >= 1 : t ≡ t0 (mod w)}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawTClass")]
pub struct TClass {
    #[serde(with = "crate::json::nat")]
    t0: Nat,
    #[serde(with = "crate::json::nat")]
    w: Nat,
}

#[derive(Deserialize)]
struct RawTClass {
    #[serde(with = "crate::json::nat")]
    t0: Nat,
    #[serde(with = "crate::json::nat")]
    w: Nat,
}

impl TryFrom<RawTClass> for TClass {
    type Error = Error;

    fn try_from(raw: RawTClass) -> Result<Self> {
        TClass::new(raw.t0, raw.w)
    }
}

impl TClass {
    pub fn new(t0: impl Into<Nat>, w: impl Into<Nat>) -> Result<Self> {
        let w = w.into();
        if w.is_zero() {
            return Err(Error::Invalid("t-class modulus must be at least 1".into()));
        }
        let t0 = t0.into() % &w;
        Ok(TClass { t0, w })
    }

    pub fn t0(&self) -> &Nat {
        &self.t0
    }

    pub fn w(&self) -> &Nat {
        &self.w
    }

    /// Smallest positive member; a zero representative stands for `w`.
    pub fn first_member(&self) -> Nat {
        if self.t0.is_zero() {
            self.w.clone()
        } else {
            self.t0.clone()
        }
    }

    pub fn contains(&self, t: &Nat) -> bool {
        !t.is_zero() && t % &self.w == self.t0
    }

    /// `t ≡ -t0 (mod w)`.
    pub fn negated(&self) -> TClass {
        TClass {
            t0: (&self.w - &self.t0) % &self.w,
            w: self.w.clone(),
        }
    }

    pub fn as_residue_class(&self) -> ResidueClass {
        ResidueClass::new(self.t0.clone(), self.w.clone()).expect("w >= 1")
    }

    pub fn from_residue_class(class: &ResidueClass) -> TClass {
        TClass {
            t0: class.residue().clone(),
            w: class.modulus().clone(),
        }
    }

    /// Residue of `t0` modulo `m`.
    pub fn component(&self, m: &Nat) -> Nat {
        &self.t0 % m
    }
}

impl fmt::Display for TClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t ≡ {} (mod {})", self.t0, self.w)
    }
}

/// "`k_b^(z;t)` is a Sierpiński/Riesel number for every `t` in `tclass`."
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyClaim {
    pub id: String,
    #[serde(flatten)]
    pub form: RepForm,
    pub tclass: TClass,
    pub side: Side,
    pub certificate: CoverCertificate,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_class: Option<ResidueClass>,
    /// Present for repdigit claims quantified over all bases in a class.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub base_class: Option<ResidueClass>,
}

impl FamilyClaim {
    pub fn new(
        id: impl Into<String>,
        form: RepForm,
        tclass: TClass,
        side: Side,
        certificate: CoverCertificate,
    ) -> Self {
        FamilyClaim {
            id: id.into(),
            form,
            tclass,
            side,
            certificate,
            expected_class: None,
            base_class: None,
        }
    }

    pub fn with_expected_class(mut self, class: ResidueClass) -> Self {
        self.expected_class = Some(class);
        self
    }
}

/// The period of the rep-form residue modulo one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EntryPeriod {
    #[serde(with = "crate::json::nat")]
    pub prime: Nat,
    #[serde(with = "crate::json::nat")]
    pub period: Nat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FamilyProof {
    #[serde(with = "crate::json::nat")]
    pub first_t: Nat,
    /// Class of the rep value modulo `2 * prod p_j`.
    pub class: ResidueClass,
    pub periods: Vec<EntryPeriod>,
    /// Period of the residue modulo 2.
    #[serde(with = "crate::json::nat")]
    pub parity_period: Nat,
}

/// Why a claim failed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Failure {
    PeriodDoesNotDivide {
        #[serde(with = "crate::json::nat")]
        prime: Nat,
        #[serde(with = "crate::json::nat")]
        period: Nat,
        #[serde(with = "crate::json::nat")]
        w: Nat,
    },
    WrongResidue {
        #[serde(with = "crate::json::nat")]
        prime: Nat,
        #[serde(with = "crate::json::nat")]
        expected: Nat,
        #[serde(with = "crate::json::nat")]
        found: Nat,
    },
    EvenValue,
    TooSmall {
        #[serde(with = "crate::json::nat")]
        first_t: Nat,
        #[serde(with = "crate::json::nat")]
        max_prime: Nat,
    },
    ClassMismatch {
        expected: ResidueClass,
        found: ResidueClass,
    },
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::PeriodDoesNotDivide { prime, period, w } => {
                write!(f, "period {period} modulo {prime} does not divide {w}")
            }
            Failure::WrongResidue {
                prime,
                expected,
                found,
            } => {
                write!(f, "residue modulo {prime} is {found}, needed {expected}")
            }
            Failure::EvenValue => f.write_str("rep value is even on the class"),
            Failure::TooSmall { first_t, max_prime } => {
                write!(f, "value at t = {first_t} does not exceed {max_prime}")
            }
            Failure::ClassMismatch { expected, found } => {
                write!(f, "class is {found}, expected {expected}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum FamilyVerdict {
    Proved(FamilyProof),
    Counterexample {
        /// Index of the failing certificate entry, when one is to blame.
        entry: Option<usize>,
        reason: Failure,
    },
}

impl FamilyVerdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, FamilyVerdict::Proved(_))
    }

    pub fn proof(&self) -> Option<&FamilyProof> {
        match self {
            FamilyVerdict::Proved(p) => Some(p),
            FamilyVerdict::Counterexample { .. } => None,
        }
    }
}

impl fmt::Display for FamilyVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FamilyVerdict::Proved(p) => write!(f, "proved, class {}", p.class),
            FamilyVerdict::Counterexample {
                entry: Some(j),
                reason,
            } => {
                write!(f, "counterexample at entry {j}: {reason}")
            }
            FamilyVerdict::Counterexample {
                entry: None,
                reason,
            } => {
                write!(f, "counterexample: {reason}")
            }
        }
    }
}

fn counterexample(entry: Option<usize>, reason: Failure) -> FamilyVerdict {
    FamilyVerdict::Counterexample { entry, reason }
}

/// Proves that every member of the claim's t-class is a Sierpiński (resp.
/// Riesel) number, or names the first check that fails.
///
/// For each certificate entry `(r, m, p)` the residue of `k_b^(z;t)` modulo
/// `p` has a period `λ` in `t`; the claim needs `λ | w` and the residue at the
/// first member to equal `∓2^-r`. Oddness is the same argument modulo 2.
/// Since values grow with `t`, the size condition is checked at the first
/// member only.
pub fn check_family(claim: &FamilyClaim) -> Result<FamilyVerdict> {
    let cert = &claim.certificate;
    if cert.side() != claim.side {
        return Err(Error::Invalid(format!(
            "claim `{}` is {} but its certificate is {}",
            claim.id,
            claim.side,
            cert.side()
        )));
    }
    if !cert.covering()?.is_covering().is_covering() {
        return Err(Error::Precondition(format!(
            "certificate of `{}` is not a covering",
            claim.id
        )));
    }
    let form = &claim.form;
    let w = claim.tclass.w();
    let first_t = claim.tclass.first_member();

    let mut periods = Vec::with_capacity(cert.entries().len());
    for (j, e) in cert.entries().iter().enumerate() {
        let period = form.period_mod_prime(&e.p);
        if !(w % &period).is_zero() {
            return Ok(counterexample(
                Some(j),
                Failure::PeriodDoesNotDivide {
                    prime: e.p.clone(),
                    period,
                    w: w.clone(),
                },
            ));
        }
        let found = form.residue(&first_t, &e.p)?;
        let expected = claim.side.target_residue(e.r, &e.p);
        if found != expected {
            return Ok(counterexample(
                Some(j),
                Failure::WrongResidue {
                    prime: e.p.clone(),
                    expected,
                    found,
                },
            ));
        }
        periods.push(EntryPeriod {
            prime: e.p.clone(),
            period,
        });
    }

    let two = nat(2);
    let parity_period = form.period_mod_prime(&two);
    if !(w % &parity_period).is_zero() || !form.residue(&first_t, &two)?.is_one() {
        return Ok(counterexample(None, Failure::EvenValue));
    }

    let max_prime = cert.max_prime();
    if !form.value_exceeds(&first_t, &max_prime) {
        return Ok(counterexample(
            None,
            Failure::TooSmall { first_t, max_prime },
        ));
    }

    let class = class_from_certificate(cert)?;
    let direct = form.residue(&first_t, class.modulus())?;
    if &direct != class.residue() {
        return Err(Error::Logic(format!(
            "per-prime residues agree but the combined residue {direct} differs from {class}"
        )));
    }
    if let Some(expected) = &claim.expected_class {
        if *expected != class {
            return Ok(counterexample(
                None,
                Failure::ClassMismatch {
                    expected: expected.clone(),
                    found: class,
                },
            ));
        }
    }
    Ok(FamilyVerdict::Proved(FamilyProof {
        first_t,
        class,
        periods,
        parity_period,
    }))
}

/// Result of [`check_repdigit_family`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RepdigitVerdict {
    #[serde(with = "crate::json::nat")]
    pub representative_base: Nat,
    pub verdict: FamilyVerdict,
    /// 2 and the certificate primes, each of which divides the base modulus.
    #[serde(with = "crate::json::nat_vec")]
    pub base_independent_moduli: Vec<Nat>,
}

/// Proves a repdigit family for every base in `base_class` by checking it at
/// the smallest admissible base. Residues and periods modulo a prime depend
/// on `b` only through `b mod p`, so this generalizes exactly when every
/// certificate prime, and 2, divides the class modulus.
pub fn check_repdigit_family(
    k: &Nat,
    base_class: &ResidueClass,
    tclass: &TClass,
    side: Side,
    certificate: &CoverCertificate,
) -> Result<RepdigitVerdict> {
    let modulus = base_class.modulus();
    let mut b = base_class.residue().clone();
    while b < nat(2) || &b <= k {
        b += modulus;
    }
    let claim = FamilyClaim::new(
        format!("{k}_b repdigit, b ≡ {base_class}"),
        RepForm::new(k.clone(), b.clone(), 0)?,
        tclass.clone(),
        side,
        certificate.clone(),
    );
    let verdict = check_family(&claim)?;
    let mut independent = vec![nat(2)];
    independent.extend(certificate.primes());
    let missing: Vec<String> = independent
        .iter()
        .filter(|p| !(modulus % *p).is_zero())
        .map(|p| p.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::CannotGeneralize {
            reason: format!(
                "class modulus {modulus} is not divisible by {}; only b = {b} is covered",
                missing.join(", ")
            ),
            representative: Box::new(verdict),
        });
    }
    Ok(RepdigitVerdict {
        representative_base: b,
        verdict,
        base_independent_moduli: independent,
    })
}

/// For each prime, whether `base^exponent ≡ 1 (mod p)`; primes dividing the
/// base are skipped.
pub fn power_is_one(base: &Nat, exponent: &Nat, primes: &[Nat]) -> Vec<(Nat, bool)> {
    primes
        .iter()
        .filter(|p| !(base % *p).is_zero())
        .map(|p| (p.clone(), base.modpow(exponent, p).is_one()))
        .collect()
}

/// A t-class on which `k_b^(t)` stays in the certificate's class: `t ≡ 1`
/// modulo the residue period of every certificate prime, and modulo 2.
///
/// At `t = 1` the repinteger is `k` itself, so any `t ≡ 1` modulo all
/// periods reproduces the residues of `k`.
pub fn lift_t_class(certificate: &CoverCertificate, k: &Nat, b: &Nat) -> Result<TClass> {
    let class = class_from_certificate(certificate)?;
    if !class.contains(k) {
        return Err(Error::Precondition(format!("{k} is not in {class}")));
    }
    let form = RepForm::new(k.clone(), b.clone(), 0)?;
    let mut conditions = vec![ResidueClass::new(1u32, 2u32)?];
    for e in certificate.entries() {
        conditions.push(ResidueClass::new(1u32, form.period_mod_prime(&e.p))?);
    }
    let combined = crt_combine(&conditions)
        .map_err(|e| Error::Logic(format!("all residues are 1, yet CRT failed: {e}")))?;
    let tclass = TClass::from_residue_class(&combined);
    let claim = FamilyClaim::new(
        format!("lift of {k} to base {b}"),
        form,
        tclass.clone(),
        certificate.side(),
        certificate.clone(),
    );
    match check_family(&claim)? {
        FamilyVerdict::Proved(_) => Ok(tclass),
        FamilyVerdict::Counterexample { reason, .. } => Err(Error::Precondition(format!(
            "lifted class {tclass} does not verify: {reason}"
        ))),
    }
}

/// Exponent `e` with `b = 2^e`, if any.
fn power_of_two_exponent(b: &Nat) -> Option<u64> {
    let is_pow2 = !b.is_zero() && (b & (b - 1u32)).is_zero();
    is_pow2.then(|| b.bits() - 1)
}

/// Turns a proved Sierpiński family into the Riesel family on `-t` (or back).
///
/// Residues shift by `log2(B) * t0`, the t-class is negated and the side
/// flips. Only bases that are powers of 2 have this duality.
pub fn additive_inverse_transform(claim: &FamilyClaim) -> Result<FamilyClaim> {
    if !check_family(claim)?.is_proved() {
        return Err(Error::Precondition(format!(
            "claim `{}` does not verify",
            claim.id
        )));
    }
    let e = power_of_two_exponent(claim.form.b()).ok_or_else(|| {
        Error::Precondition(format!(
            "base {} is not a power of 2; no additive-inverse dual",
            claim.form.b()
        ))
    })?;
    let stride_log = nat(e) * nat(claim.form.z() as u64 + claim.form.block_length() as u64);
    let shift = stride_log * claim.tclass.t0();
    let side = claim.side.flipped();
    let certificate = claim.certificate.shifted(&shift, side)?;
    let dual = FamilyClaim {
        id: dual_id(&claim.id),
        form: claim.form.clone(),
        tclass: claim.tclass.negated(),
        side,
        certificate,
        expected_class: None,
        base_class: None,
    };
    match check_family(&dual)? {
        FamilyVerdict::Proved(proof) => Ok(FamilyClaim {
            expected_class: Some(proof.class),
            ..dual
        }),
        FamilyVerdict::Counterexample { reason, .. } => Err(Error::Logic(format!(
            "dual of `{}` does not verify: {reason}",
            claim.id
        ))),
    }
}

fn dual_id(id: &str) -> String {
    match id.strip_suffix("~dual") {
        Some(orig) => orig.to_string(),
        None => format!("{id}~dual"),
    }
}
