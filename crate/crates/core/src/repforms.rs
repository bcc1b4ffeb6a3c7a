//! Repdigits, repintegers and repstrings.
//!
//! A repstring repeats the base-`b` numeral of `k` `t` times with `z` zeros
//! between consecutive copies. Its value is `k * (B^t - 1) / (B - 1)` with
//! stride `B = b^(z + l)` and `l` the number of base-`b` digits of `k`.
//! Repintegers are `z = 0`; repdigits additionally have `k < b`.

use crate::arith::{mult_order, Nat};
use crate::error::{Error, Result};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Refuse to materialize values wider than this many bits.
pub const MAX_VALUE_BITS: u64 = 1 << 26;

/// Number of base-`b` digits of `k`, by repeated division.
pub fn block_length(k: &Nat, b: &Nat) -> u32 {
    assert!(!k.is_zero(), "k must be positive");
    assert!(*b >= Nat::from(2u32), "base must be at least 2");
    let mut rest = k.clone();
    let mut digits = 0;
    while !rest.is_zero() {
        rest /= b;
        digits += 1;
    }
    digits
}

/// Base-`b` digits of `n`, most significant first.
pub fn digits(n: &Nat, b: &Nat) -> Vec<Nat> {
    if n.is_zero() {
        return vec![Nat::zero()];
    }
    let mut out = Vec::new();
    let mut rest = n.clone();
    while !rest.is_zero() {
        let (q, r) = rest.div_rem(b);
        out.push(r);
        rest = q;
    }
    out.reverse();
    out
}

/// Digit string of `n` in base `b`; bases above 36 list digits as `[d, d, ...]`.
pub fn digit_string(n: &Nat, b: &Nat) -> String {
    match b.to_u32().filter(|&b| b <= 36) {
        Some(radix) => n.to_str_radix(radix),
        None => {
            let ds: Vec<String> = digits(n, b).iter().map(|d| d.to_string()).collect();
            format!("[{}]", ds.join(", "))
        }
    }
}

/// The `(k, b, z)` part of a repstring, with `t` left free.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRepForm")]
pub struct RepForm {
    #[serde(with = "crate::json::nat")]
    k: Nat,
    #[serde(with = "crate::json::nat")]
    b: Nat,
    z: u32,
    #[serde(skip)]
    block: u32,
    #[serde(skip)]
    stride: Nat,
}

#[derive(Deserialize)]
struct RawRepForm {
    #[serde(with = "crate::json::nat")]
    k: Nat,
    #[serde(with = "crate::json::nat")]
    b: Nat,
    #[serde(default)]
    z: u32,
}

impl TryFrom<RawRepForm> for RepForm {
    type Error = Error;

    fn try_from(raw: RawRepForm) -> Result<Self> {
        RepForm::new(raw.k, raw.b, raw.z)
    }
}

impl RepForm {
    pub fn new(k: impl Into<Nat>, b: impl Into<Nat>, z: u32) -> Result<Self> {
        let (k, b) = (k.into(), b.into());
        if k.is_zero() {
            return Err(Error::Invalid("k must be positive".into()));
        }
        if b < Nat::from(2u32) {
            return Err(Error::Invalid(format!("base {b} is below 2")));
        }
        let block = block_length(&k, &b);
        let exponent = z
            .checked_add(block)
            .filter(|&e| e as u64 * b.bits() <= MAX_VALUE_BITS)
            .ok_or_else(|| Error::Resource("stride b^(z+l) is too large".into()))?;
        let stride = b.pow(exponent);
        debug_assert!(stride > k);
        Ok(RepForm {
            k,
            b,
            z,
            block,
            stride,
        })
    }

    pub fn k(&self) -> &Nat {
        &self.k
    }

    pub fn b(&self) -> &Nat {
        &self.b
    }

    pub fn z(&self) -> u32 {
        self.z
    }

    /// Digit length `l` of `k` in base `b`.
    pub fn block_length(&self) -> u32 {
        self.block
    }

    /// `B = b^(z + l)`.
    pub fn stride(&self) -> &Nat {
        &self.stride
    }

    pub fn at(&self, t: impl Into<Nat>) -> Result<RepSpec> {
        RepSpec::new(self.clone(), t)
    }

    /// Exact value for `t` repetitions.
    pub fn value(&self, t: &Nat) -> Result<Nat> {
        check_t(t)?;
        let t_small = t
            .to_u32()
            .filter(|&t| (t as u64).saturating_mul(self.stride.bits()) <= MAX_VALUE_BITS)
            .ok_or_else(|| Error::Resource(format!("value for t = {t} is too large to form")))?;
        let geometric = (self.stride.pow(t_small) - 1u32) / (&self.stride - 1u32);
        Ok(&self.k * geometric)
    }

    /// Value modulo `modulus` without forming the value: compute
    /// `B^t - 1` modulo `modulus * (B - 1)` and divide exactly by `B - 1`.
    pub fn residue(&self, t: &Nat, modulus: &Nat) -> Result<Nat> {
        check_t(t)?;
        if modulus.is_zero() {
            return Err(Error::InvalidModulus);
        }
        if modulus.is_one() {
            return Ok(Nat::zero());
        }
        let b_minus_1 = &self.stride - 1u32;
        let inflated = modulus * &b_minus_1;
        let x = (self.stride.modpow(t, &inflated) + &inflated - 1u32) % &inflated;
        let (q, rem) = x.div_rem(&b_minus_1);
        if !rem.is_zero() {
            return Err(Error::Logic(format!(
                "B^t - 1 not divisible by B - 1 for B = {}",
                self.stride
            )));
        }
        Ok(&self.k * q % modulus)
    }

    /// A period in `t` of the residue modulo `prime`: 1 if the prime divides
    /// `B`, the prime itself if `B ≡ 1`, otherwise the order of `B`. This is
    /// the order of `B` modulo `prime * (B - 1)`.
    pub fn period_mod_prime(&self, prime: &Nat) -> Nat {
        let b_mod = &self.stride % prime;
        if b_mod.is_zero() {
            Nat::one()
        } else if b_mod.is_one() {
            prime.clone()
        } else {
            mult_order(&b_mod, prime).expect("prime does not divide B")
        }
    }

    /// `mult_order(B, prime * (B - 1))`, the literal form of
    /// [`period_mod_prime`](Self::period_mod_prime). Needs `B - 1` factored.
    pub fn period_by_inflated_order(&self, prime: &Nat) -> Result<Nat> {
        if (&self.stride % prime).is_zero() {
            return Ok(Nat::one());
        }
        mult_order(&self.stride, &(prime * (&self.stride - 1u32)))
    }

    /// Whether the value at `t` exceeds `bound`, building it only as far as needed.
    pub fn value_exceeds(&self, t: &Nat, bound: &Nat) -> bool {
        let mut acc = Nat::zero();
        let mut i = Nat::zero();
        while &i < t {
            acc = acc * &self.stride + &self.k;
            if &acc > bound {
                return true;
            }
            i += 1u32;
        }
        false
    }
}

impl fmt::Display for RepForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}^({};t)", self.k, self.b, self.z)
    }
}

fn check_t(t: &Nat) -> Result<()> {
    if t.is_zero() {
        return Err(Error::Invalid(
            "t must be a positive repetition count".into(),
        ));
    }
    Ok(())
}

/// `(k, b, z, t)`: one concrete repstring.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RepSpec {
    form: RepForm,
    t: Nat,
}

impl RepSpec {
    pub fn new(form: RepForm, t: impl Into<Nat>) -> Result<Self> {
        let t = t.into();
        check_t(&t)?;
        Ok(RepSpec { form, t })
    }

    pub fn form(&self) -> &RepForm {
        &self.form
    }

    pub fn t(&self) -> &Nat {
        &self.t
    }
}

pub fn rep_value(spec: &RepSpec) -> Result<Nat> {
    spec.form.value(&spec.t)
}

pub fn rep_residue(spec: &RepSpec, modulus: &Nat) -> Result<Nat> {
    spec.form.residue(&spec.t, modulus)
}

pub fn residue_period_in_t(form: &RepForm, prime: &Nat) -> Nat {
    form.period_mod_prime(prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::nat;

    fn form(k: u64, b: u64, z: u32) -> RepForm {
        RepForm::new(nat(k), nat(b), z).unwrap()
    }

    #[test]
    fn block_lengths() {
        assert_eq!(block_length(&nat(18107), &nat(2)), 15);
        assert_eq!(block_length(&nat(659), &nat(2)), 10);
        assert_eq!(block_length(&nat(1), &nat(7)), 1);
        assert_eq!(block_length(&nat(1000), &nat(10)), 4);
        assert_eq!(block_length(&nat(999), &nat(10)), 3);
    }

    #[test]
    fn values() {
        assert_eq!(form(1, 10, 2).value(&nat(3)).unwrap(), nat(1001001));
        assert_eq!(form(5, 10, 0).value(&nat(3)).unwrap(), nat(555));
        assert_eq!(form(18107, 2, 0).value(&nat(1)).unwrap(), nat(18107));
        assert!(form(5, 10, 0).value(&nat(0)).is_err());
        assert!(form(5, 10, 0).at(0u32).is_err());
    }

    #[test]
    fn residues() {
        let m = nat(11184810);
        assert_eq!(
            form(18107, 2, 0).residue(&nat(25), &m).unwrap(),
            nat(8007257)
        );
        assert_eq!(
            form(659, 2, 2).residue(&nat(131), &m).unwrap(),
            nat(2131099)
        );
        assert_eq!(form(659, 2, 2).residue(&nat(131), &nat(1)).unwrap(), nat(0));
        assert!(form(659, 2, 2).residue(&nat(131), &nat(0)).is_err());
    }

    #[test]
    fn periods() {
        assert_eq!(form(1, 6, 0).period_mod_prime(&nat(3)), nat(1));
        let p659 = form(659, 2, 2).period_mod_prime(&nat(13));
        assert_eq!(nat(2730) % &p659, nat(0));
        assert_eq!(
            p659,
            form(659, 2, 2).period_by_inflated_order(&nat(13)).unwrap()
        );
        let p18107 = form(18107, 2, 0).period_mod_prime(&nat(241));
        assert_eq!(nat(56) % &p18107, nat(0));
        assert_eq!(
            p18107,
            form(18107, 2, 0)
                .period_by_inflated_order(&nat(241))
                .unwrap()
        );
        for p in [2u64, 3, 5, 7, 13, 17, 241] {
            for (k, b, z) in [
                (659, 2, 2),
                (18107, 2, 0),
                (41, 87, 0),
                (101, 180, 0),
                (7, 10, 1),
            ] {
                let f = form(k, b, z);
                assert_eq!(
                    f.period_mod_prime(&nat(p)),
                    f.period_by_inflated_order(&nat(p)).unwrap(),
                    "k={k} b={b} z={z} p={p}"
                );
            }
        }
    }

    #[test]
    fn size_check() {
        let f = form(18107, 2, 0);
        assert!(f.value_exceeds(&nat(1), &nat(18106)));
        assert!(!f.value_exceeds(&nat(1), &nat(18107)));
        assert!(f.value_exceeds(&nat(1_000_000_000_000), &nat(1 << 40)));
    }

    #[test]
    fn digit_rendering() {
        assert_eq!(digit_string(&nat(1001001), &nat(10)), "1001001");
        let v = form(659, 2, 2).value(&nat(2)).unwrap();
        assert_eq!(digit_string(&v, &nat(2)), "1010010011001010010011");
        let v = form(41, 87, 0).value(&nat(3)).unwrap();
        assert_eq!(digit_string(&v, &nat(87)), "[41, 41, 41]");
    }
}
