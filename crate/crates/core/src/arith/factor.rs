//! Primality testing and integer factorization.
//!
//! Trial division by primes below 10^6, then Brent's variant of Pollard's rho
//! on whatever cofactor remains. Primality is Miller-Rabin with the first
//! twelve prime bases, which is deterministic below 3.3 * 10^24; larger
//! inputs get eight extra fixed bases.

use super::{nat, Nat};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::sync::OnceLock;

const TRIAL_LIMIT: u32 = 1_000_000;

const MR_BASES: [u32; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
const MR_EXTRA_BASES: [u32; 8] = [41, 43, 47, 53, 59, 61, 67, 71];

fn small_primes() -> &'static [u32] {
    static PRIMES: OnceLock<Vec<u32>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        let n = TRIAL_LIMIT as usize;
        let mut composite = vec![false; n + 1];
        let mut out = Vec::new();
        for i in 2..=n {
            if !composite[i] {
                out.push(i as u32);
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
        }
        out
    })
}

/// Prime factorization sorted by prime, each prime once.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Factorization(Vec<(Nat, u32)>);

impl Factorization {
    pub fn iter(&self) -> impl Iterator<Item = (&Nat, u32)> {
        self.0.iter().map(|(p, e)| (p, *e))
    }

    pub fn primes(&self) -> impl Iterator<Item = &Nat> {
        self.0.iter().map(|(p, _)| p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn product(&self) -> Nat {
        self.0
            .iter()
            .fold(Nat::one(), |acc, (p, e)| acc * p.pow(*e))
    }

    pub(crate) fn push(&mut self, p: Nat, e: u32) {
        match self.0.binary_search_by(|(q, _)| q.cmp(&p)) {
            Ok(i) => self.0[i].1 += e,
            Err(i) => self.0.insert(i, (p, e)),
        }
    }

    pub(crate) fn merge_max(&mut self, other: &Factorization) {
        for (p, e) in other.iter() {
            match self.0.binary_search_by(|(q, _)| q.cmp(p)) {
                Ok(i) => self.0[i].1 = self.0[i].1.max(e),
                Err(i) => self.0.insert(i, (p.clone(), e)),
            }
        }
    }

    pub fn into_vec(self) -> Vec<(Nat, u32)> {
        self.0
    }
}

fn miller_rabin_round(n: &Nat, n_minus_1: &Nat, d: &Nat, s: u64, base: u32) -> bool {
    let a = Nat::from(base) % n;
    if a.is_zero() {
        return true;
    }
    let mut x = a.modpow(d, n);
    if x.is_one() || &x == n_minus_1 {
        return true;
    }
    for _ in 1..s {
        x = &x * &x % n;
        if &x == n_minus_1 {
            return true;
        }
        if x.is_one() {
            return false;
        }
    }
    false
}

/// Miller-Rabin primality test.
pub fn is_prime(n: &Nat) -> bool {
    if let Some(small) = n.to_u64() {
        if small < 2 {
            return false;
        }
        for &p in &MR_BASES {
            if small == p as u64 {
                return true;
            }
            if small % p as u64 == 0 {
                return false;
            }
        }
    } else if n.is_even() {
        return false;
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().expect("n > 1");
    let d = &n_minus_1 >> s;
    // Deterministic for n < 3.3 * 10^24 with the first twelve prime bases.
    let deterministic = n.bits() <= 81;
    let extra: &[u32] = if deterministic { &[] } else { &MR_EXTRA_BASES };
    MR_BASES
        .iter()
        .chain(extra)
        .all(|&b| miller_rabin_round(n, &n_minus_1, &d, s, b))
}

/// Brent's cycle-finding rho; returns a nontrivial factor of the odd composite `n`.
fn rho(n: &Nat, seed: u64) -> Nat {
    let mut c = Nat::from(seed % 1000 + 1);
    loop {
        let f = |x: &Nat| (x * x + &c) % n;
        let mut y = Nat::from(2u32 + (seed % 7) as u32) % n;
        let mut g = Nat::one();
        let mut r: u64 = 1;
        let mut q = Nat::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        const BATCH: u64 = 128;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..BATCH.min(r - k) {
                    y = f(&y);
                    let diff = if x > y { &x - &y } else { &y - &x };
                    q = q * diff % n;
                }
                g = q.gcd(n);
                k += BATCH;
            }
            r *= 2;
        }
        if &g == n {
            // Batched product collapsed; backtrack one step at a time.
            loop {
                ys = f(&ys);
                let diff = if x > ys { &x - &ys } else { &ys - &x };
                g = diff.gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return g;
        }
        c += 1u32;
    }
}

fn split_into(n: Nat, seed: u64, out: &mut Factorization) {
    if n.is_one() {
        return;
    }
    if is_prime(&n) {
        out.push(n, 1);
        return;
    }
    let d = rho(&n, seed);
    let rest = &n / &d;
    split_into(d, seed.wrapping_add(1), out);
    split_into(rest, seed.wrapping_add(2), out);
}

/// Complete prime factorization of `n >= 1`; `factorize(1)` is empty.
pub fn factorize(n: &Nat) -> Factorization {
    factorize_with_seed(n, 0)
}

/// As [`factorize`], with the rho starting constant derived from `seed`.
/// The result does not depend on the seed.
pub fn factorize_with_seed(n: &Nat, seed: u64) -> Factorization {
    assert!(!n.is_zero(), "cannot factor zero");
    let mut out = Factorization::default();
    let mut rest = n.clone();
    for &p in small_primes() {
        let p_big = Nat::from(p);
        if &p_big * &p_big > rest {
            break;
        }
        if let Some(r) = rest.to_u64() {
            let p = p as u64;
            if r % p != 0 {
                continue;
            }
        } else if !(&rest % p).is_zero() {
            continue;
        }
        let mut e = 0;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        out.push(p_big, e);
    }
    if !rest.is_one() {
        if rest <= nat(TRIAL_LIMIT as u64) * nat(TRIAL_LIMIT as u64) {
            // Nothing below the trial limit divides it, so it is prime.
            out.push(rest, 1);
        } else {
            split_into(rest, seed, &mut out);
        }
    }
    out
}
