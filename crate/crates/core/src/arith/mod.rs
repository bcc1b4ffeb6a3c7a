//! Exact integer and modular arithmetic on arbitrary-precision naturals.

mod factor;

pub use factor::{factorize, factorize_with_seed, is_prime, Factorization};

use crate::error::{Error, Result};
use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// Nonnegative arbitrary-precision integer.
pub type Nat = BigUint;

pub fn nat(v: u64) -> Nat {
    Nat::from(v)
}

/// The arithmetic progression `residue (mod modulus)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawResidueClass")]
pub struct ResidueClass {
    #[serde(with = "crate::json::nat")]
    residue: Nat,
    #[serde(with = "crate::json::nat")]
    modulus: Nat,
}

#[derive(Deserialize)]
struct RawResidueClass {
    #[serde(with = "crate::json::nat")]
    residue: Nat,
    #[serde(with = "crate::json::nat")]
    modulus: Nat,
}

impl TryFrom<RawResidueClass> for ResidueClass {
    type Error = Error;

    fn try_from(raw: RawResidueClass) -> Result<Self> {
        ResidueClass::new(raw.residue, raw.modulus)
    }
}

impl ResidueClass {
    /// Builds the class, reducing `residue` into `[0, modulus)`.
    pub fn new(residue: impl Into<Nat>, modulus: impl Into<Nat>) -> Result<Self> {
        let modulus = modulus.into();
        if modulus.is_zero() {
            return Err(Error::InvalidModulus);
        }
        let residue = residue.into() % &modulus;
        Ok(ResidueClass { residue, modulus })
    }

    /// Class of a signed integer, normalized into `[0, modulus)`.
    pub fn from_signed(residue: &BigInt, modulus: impl Into<Nat>) -> Result<Self> {
        let modulus = modulus.into();
        if modulus.is_zero() {
            return Err(Error::InvalidModulus);
        }
        Ok(ResidueClass {
            residue: reduce_signed(residue, &modulus),
            modulus,
        })
    }

    /// The whole of the integers, `0 (mod 1)`.
    pub fn everything() -> Self {
        ResidueClass {
            residue: Nat::zero(),
            modulus: Nat::one(),
        }
    }

    pub fn residue(&self) -> &Nat {
        &self.residue
    }

    pub fn modulus(&self) -> &Nat {
        &self.modulus
    }

    pub fn contains(&self, n: &Nat) -> bool {
        n % &self.modulus == self.residue
    }

    /// Whether the two classes share at least one integer.
    pub fn compatible_with(&self, other: &ResidueClass) -> bool {
        crt_pair(self, other).is_some()
    }
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

pub(crate) fn reduce_signed(value: &BigInt, modulus: &Nat) -> Nat {
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    value
        .mod_floor(&m)
        .to_biguint()
        .expect("mod_floor by a positive modulus is nonnegative")
}

/// `base^exponent mod modulus`.
pub fn mod_pow(base: &Nat, exponent: &Nat, modulus: &Nat) -> Result<Nat> {
    if modulus.is_zero() {
        return Err(Error::InvalidModulus);
    }
    if modulus.is_one() {
        return Ok(Nat::zero());
    }
    Ok(base.modpow(exponent, modulus))
}

/// Word-sized `base^exponent mod modulus`; `modulus` must be nonzero.
pub fn mod_pow_u64(base: u64, mut exponent: u64, modulus: u64) -> u64 {
    assert!(modulus != 0, "zero modulus");
    let m = modulus as u128;
    let mut acc = 1u128 % m;
    let mut b = base as u128 % m;
    while exponent > 0 {
        if exponent & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exponent >>= 1;
    }
    acc as u64
}

/// Extended gcd: returns `(g, x)` with `a*x ≡ g (mod m)`.
fn ext_gcd(a: &BigInt, m: &BigInt) -> (BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), m.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    while !r.is_zero() {
        let q = &old_r / &r;
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
    }
    (old_r, old_s)
}

/// The inverse of `a` modulo `modulus`.
pub fn mod_inverse(a: &Nat, modulus: &Nat) -> Result<Nat> {
    if modulus.is_zero() {
        return Err(Error::InvalidModulus);
    }
    if modulus.is_one() {
        return Ok(Nat::zero());
    }
    let m = BigInt::from_biguint(Sign::Plus, modulus.clone());
    let a_red = BigInt::from_biguint(Sign::Plus, a % modulus);
    let (g, x) = ext_gcd(&a_red, &m);
    if !g.is_one() {
        return Err(Error::NoInverse {
            value: a.clone(),
            modulus: modulus.clone(),
            gcd: g.abs().to_biguint().unwrap_or_default(),
        });
    }
    Ok(reduce_signed(&x, modulus))
}

/// Carmichael's function λ(n) together with the factorization of λ(n).
fn carmichael(n: &Nat) -> (Nat, Factorization) {
    let mut lambda = Nat::one();
    let mut lambda_factors = Factorization::default();
    for (p, e) in factorize(n).iter() {
        let (part, part_factors) = if *p == nat(2) {
            let exp = match e {
                1 => 0,
                2 => 1,
                _ => e - 2,
            };
            let mut f = Factorization::default();
            if exp > 0 {
                f.push(nat(2), exp);
            }
            (Nat::one() << exp, f)
        } else {
            let mut f = factorize(&(p - 1u32));
            if e > 1 {
                f.push(p.clone(), e - 1);
            }
            (p.pow(e - 1) * (p - 1u32), f)
        };
        lambda = lambda.lcm(&part);
        lambda_factors.merge_max(&part_factors);
    }
    (lambda, lambda_factors)
}

/// Multiplicative order of `a` modulo `modulus`.
///
/// Works for composite moduli: starts from Carmichael's λ(modulus) and strips
/// prime factors while the power stays at 1.
pub fn mult_order(a: &Nat, modulus: &Nat) -> Result<Nat> {
    if modulus.is_zero() {
        return Err(Error::InvalidModulus);
    }
    if modulus.is_one() {
        return Ok(Nat::one());
    }
    let g = a.gcd(modulus);
    if !g.is_one() {
        return Err(Error::NoOrder {
            value: a.clone(),
            modulus: modulus.clone(),
            gcd: g,
        });
    }
    let a = a % modulus;
    let (mut order, factors) = carmichael(modulus);
    for (q, _) in factors.iter() {
        while (&order % q).is_zero() {
            let candidate = &order / q;
            if a.modpow(&candidate, modulus).is_one() {
                order = candidate;
            } else {
                break;
            }
        }
    }
    debug_assert!(a.modpow(&order, modulus).is_one());
    Ok(order)
}

/// Order of 2 modulo an odd `p`, for word-sized arguments.
pub fn order_of_two(p: u64) -> Result<u64> {
    mult_order(&nat(2), &nat(p)).map(|o| o.to_u64().expect("order below modulus"))
}

fn crt_pair(a: &ResidueClass, b: &ResidueClass) -> Option<ResidueClass> {
    let g = a.modulus.gcd(&b.modulus);
    let ra = BigInt::from_biguint(Sign::Plus, a.residue.clone());
    let rb = BigInt::from_biguint(Sign::Plus, b.residue.clone());
    let diff = &rb - &ra;
    let gi = BigInt::from_biguint(Sign::Plus, g.clone());
    if !(&diff % &gi).is_zero() {
        return None;
    }
    let m1 = BigInt::from_biguint(Sign::Plus, a.modulus.clone());
    let m2g = &b.modulus / &g;
    let m2g_i = BigInt::from_biguint(Sign::Plus, m2g.clone());
    let lcm = &a.modulus * &m2g;
    if m2g.is_one() {
        return Some(a.clone());
    }
    let inv = mod_inverse(&(&a.modulus / &g), &m2g).expect("m1/g and m2/g are coprime");
    let step = (&diff / &gi) * BigInt::from_biguint(Sign::Plus, inv);
    let step = step.mod_floor(&m2g_i);
    let x = ra + m1 * step;
    Some(ResidueClass {
        residue: reduce_signed(&x, &lcm),
        modulus: lcm,
    })
}

/// Intersects residue classes whose moduli need not be coprime.
///
/// The empty intersection of zero classes is `0 (mod 1)`.
pub fn crt_combine<'a, I>(classes: I) -> Result<ResidueClass>
where
    I: IntoIterator<Item = &'a ResidueClass>,
{
    let classes: Vec<&ResidueClass> = classes.into_iter().collect();
    let mut acc = ResidueClass::everything();
    for (i, class) in classes.iter().enumerate() {
        match crt_pair(&acc, class) {
            Some(next) => acc = next,
            None => {
                // Pairwise solvability is equivalent to joint solvability, so
                // some earlier class conflicts with this one on its own.
                let first = classes[..i]
                    .iter()
                    .find(|c| crt_pair(c, class).is_none())
                    .expect("a pairwise conflict exists");
                return Err(Error::Inconsistent {
                    first: (*first).clone(),
                    second: (*class).clone(),
                });
            }
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rc(r: u64, m: u64) -> ResidueClass {
        ResidueClass::new(nat(r), nat(m)).unwrap()
    }

    #[test]
    fn mod_pow_examples() {
        assert_eq!(mod_pow(&nat(2), &nat(56 * 15), &nat(241)).unwrap(), nat(1));
        assert_eq!(mod_pow(&nat(7), &nat(0), &nat(10)).unwrap(), nat(1));
        // 2^24 by repeated doubling
        let mut acc = 1u64;
        for _ in 0..24 {
            acc = acc * 2 % 241;
        }
        assert_eq!(acc, 1);
        assert_eq!(mod_pow(&nat(2), &nat(24), &nat(241)).unwrap(), nat(acc));
        assert!(matches!(
            mod_pow(&nat(2), &nat(3), &nat(0)),
            Err(Error::InvalidModulus)
        ));
        assert_eq!(mod_pow(&nat(5), &nat(3), &nat(1)).unwrap(), nat(0));
    }

    #[test]
    fn mod_pow_u64_matches_bigint() {
        for (b, e, m) in [
            (2u64, 840, 241),
            (87, 59, 11184810),
            (u64::MAX, 3, u64::MAX - 58),
        ] {
            assert_eq!(
                nat(mod_pow_u64(b, e, m)),
                mod_pow(&nat(b), &nat(e), &nat(m)).unwrap()
            );
        }
    }

    #[test]
    fn inverse_examples() {
        let x = mod_inverse(&nat(128), &nat(241)).unwrap();
        assert_eq!(nat(128) * &x % 241u32, nat(1));
        assert_eq!((nat(241) - x), nat(32));
        assert_eq!(mod_inverse(&nat(1), &nat(97)).unwrap(), nat(1));
        let scan = (1..17u64).find(|x| 2 * x % 17 == 1).unwrap();
        assert_eq!(scan, 9);
        assert_eq!(mod_inverse(&nat(2), &nat(17)).unwrap(), nat(9));
        match mod_inverse(&nat(6), &nat(15)) {
            Err(Error::NoInverse { gcd, .. }) => assert_eq!(gcd, nat(3)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn order_examples() {
        let scan = (1..241u64).find(|&l| mod_pow_u64(2, l, 241) == 1).unwrap();
        assert_eq!(scan, 24);
        assert_eq!(mult_order(&nat(2), &nat(241)).unwrap(), nat(24));
        assert_eq!(mult_order(&nat(1), &nat(1000)).unwrap(), nat(1));
        assert_eq!(mult_order(&nat(2), &nat(5)).unwrap(), nat(4));
        assert!(matches!(
            mult_order(&nat(4), &nat(6)),
            Err(Error::NoOrder { .. })
        ));
        // composite modulus with repeated factors
        assert_eq!(mult_order(&nat(4096), &nat(13 * 4095)).unwrap(), nat(13));
        assert_eq!(mult_order(&nat(3), &nat(64)).unwrap(), nat(16));
    }

    #[test]
    fn crt_examples() {
        let classes = [
            rc(2, 3),
            rc(6, 7),
            rc(2, 5),
            rc(2, 17),
            rc(11, 13),
            rc(32, 241),
            rc(1, 2),
        ];
        assert_eq!(crt_combine(&classes).unwrap(), rc(8007257, 11184810));
        assert_eq!(crt_combine(&[rc(0, 1)]).unwrap(), rc(0, 1));
        assert_eq!(crt_combine(&[]).unwrap(), rc(0, 1));
        match crt_combine(&[rc(1, 4), rc(3, 4)]) {
            Err(Error::Inconsistent { first, second }) => {
                assert_eq!(first, rc(1, 4));
                assert_eq!(second, rc(3, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
        // non-coprime moduli
        assert_eq!(crt_combine(&[rc(5, 6), rc(3, 8)]).unwrap(), rc(11, 24));
        assert_eq!(
            crt_combine(&[rc(385, 640), rc(1, 384)]).unwrap(),
            rc(385, 1920)
        );
    }

    #[test]
    fn crt_conflict_names_the_pair() {
        let err = crt_combine(&[rc(1, 3), rc(0, 2), rc(1, 5), rc(1, 4)]).unwrap_err();
        match err {
            Error::Inconsistent { first, second } => {
                assert_eq!(first, rc(0, 2));
                assert_eq!(second, rc(1, 4));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
