//! Searches for odd `k` whose base-2 repstrings `k_2^(z;t)` are Sierpiński or
//! Riesel numbers for whole classes of `t`, given a prime set.
//!
//! For each `k` the residues of `k_2^(z;t)` modulo the primes repeat in `t`
//! with period `W`, and the divisibility of `K*2^n ± 1` repeats in `n` with
//! period `Λ = lcm ord_p(2)`. A `t` is admissible when every `n` in `[0, Λ)`
//! is hit by some prime. Everything runs on word-sized residues.

use crate::arith::{
    factorize_with_seed, is_prime, mod_pow_u64, nat, order_of_two, Nat, ResidueClass,
};
use crate::certificates::{certificate_for, CoverCertificate, Side};
use crate::constructions::{check_family, FamilyClaim, TClass};
use crate::error::{Error, Result};
use crate::json;
use crate::repforms::RepForm;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::atomic::{AtomicU64, Ordering};

/// Default cap on the `t`-period `W`.
pub const DEFAULT_PERIOD_BUDGET: u64 = 1 << 24;
/// `Λ` must fit one bitmask word.
pub const MAX_LAMBDA: u64 = 128;
/// Primes up to this bound get a dense residue table.
const DENSE_TABLE_LIMIT: u64 = 1 << 20;
/// Odd values of `k` per work unit.
const CHUNK: u64 = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SearchConfig {
    pub z: u32,
    pub primes: Vec<u64>,
    pub side: Side,
    pub k_bound: u64,
    pub parallelism: usize,
    pub period_budget: u64,
}

impl SearchConfig {
    /// Primes must be odd, distinct and below `2^32`; they are kept sorted.
    pub fn new(z: u32, mut primes: Vec<u64>, side: Side, k_bound: u64) -> Result<Self> {
        if primes.is_empty() {
            return Err(Error::Invalid("empty prime set".into()));
        }
        primes.sort_unstable();
        if let Some(w) = primes.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("prime {} listed twice", w[0])));
        }
        for &p in &primes {
            if p == 2 || p >= 1 << 32 || !is_prime(&nat(p)) {
                return Err(Error::Invalid(format!(
                    "{p} is not an odd prime below 2^32"
                )));
            }
        }
        Ok(SearchConfig {
            z,
            primes,
            side,
            k_bound,
            parallelism: default_parallelism(),
            period_budget: DEFAULT_PERIOD_BUDGET,
        })
    }

    /// Uses the odd prime factors of `modulus`.
    pub fn from_modulus(z: u32, modulus: &Nat, side: Side, k_bound: u64) -> Result<Self> {
        Self::from_modulus_with_seed(z, modulus, 0, side, k_bound)
    }

    /// As [`from_modulus`](Self::from_modulus), seeding the randomized
    /// factorization; the prime set does not depend on the seed.
    pub fn from_modulus_with_seed(
        z: u32,
        modulus: &Nat,
        seed: u64,
        side: Side,
        k_bound: u64,
    ) -> Result<Self> {
        if modulus.is_zero() {
            return Err(Error::InvalidModulus);
        }
        let primes: Vec<u64> = factorize_with_seed(modulus, seed)
            .primes()
            .filter(|p| p.is_odd())
            .map(|p| {
                p.to_u64()
                    .ok_or_else(|| Error::Invalid(format!("prime {p} exceeds 64 bits")))
            })
            .collect::<Result<_>>()?;
        if primes.is_empty() {
            return Err(Error::Invalid(format!(
                "{modulus} has no odd prime factors"
            )));
        }
        Self::new(z, primes, side, k_bound)
    }

    pub fn with_parallelism(mut self, threads: usize) -> Self {
        self.parallelism = threads.max(1);
        self
    }

    pub fn with_period_budget(mut self, budget: u64) -> Self {
        self.period_budget = budget;
        self
    }

    pub fn with_side(mut self, side: Side) -> Self {
        self.side = side;
        self
    }

    /// `2 * prod p`, the modulus of reported class residues.
    pub fn table_modulus(&self) -> Nat {
        self.primes.iter().fold(nat(2), |acc, &p| acc * p)
    }

    fn prime_nats(&self) -> Vec<Nat> {
        self.primes.iter().map(|&p| nat(p)).collect()
    }
}

pub fn default_parallelism() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

enum CoverTable {
    Dense(Vec<u128>),
    Sparse(HashMap<u64, u128>),
}

impl CoverTable {
    fn get(&self, x: u64) -> u128 {
        match self {
            CoverTable::Dense(v) => v[x as usize],
            CoverTable::Sparse(m) => m.get(&x).copied().unwrap_or(0),
        }
    }
}

struct PrimeData {
    p: u64,
    m: u64,
    /// residue of `K` -> bits of `n in [0, Λ)` with `p | K*2^n ± 1`
    table: CoverTable,
}

struct Prepared {
    primes: Vec<PrimeData>,
    full: u128,
}

fn prepare(config: &SearchConfig) -> Result<Prepared> {
    let mut lambda = 1u64;
    let mut orders = Vec::with_capacity(config.primes.len());
    for &p in &config.primes {
        let m = order_of_two(p)?;
        lambda = lambda.lcm(&m);
        if lambda > MAX_LAMBDA {
            return Err(Error::Resource(format!(
                "prime {p} (ord_p(2) = {m}) raises the n-period to {lambda} > {MAX_LAMBDA}"
            )));
        }
        orders.push(m);
    }
    let primes = config
        .primes
        .iter()
        .zip(orders)
        .map(|(&p, m)| {
            let inv2 = p.div_ceil(2);
            let mut table = if p <= DENSE_TABLE_LIMIT {
                CoverTable::Dense(vec![0; p as usize])
            } else {
                CoverTable::Sparse(HashMap::new())
            };
            for n in 0..m {
                let pow = mod_pow_u64(inv2, n, p);
                let x = match config.side {
                    Side::Sierpinski => (p - pow) % p,
                    Side::Riesel => pow,
                };
                let bits = (n..lambda)
                    .step_by(m as usize)
                    .fold(0u128, |b, i| b | 1 << i);
                match &mut table {
                    CoverTable::Dense(v) => v[x as usize] |= bits,
                    CoverTable::Sparse(h) => *h.entry(x).or_default() |= bits,
                }
            }
            PrimeData { p, m, table }
        })
        .collect();
    let full = if lambda == 128 {
        u128::MAX
    } else {
        (1u128 << lambda) - 1
    };
    Ok(Prepared { primes, full })
}

/// The scan of one `k` over a full `t`-period.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KScan {
    pub k: u64,
    pub w: u64,
    /// Admissible `t` in `[1, W]`.
    pub admissible: Vec<u64>,
    /// For each other `t`, the smallest uncovered `n`; filled on request.
    pub uncovered: Vec<(u64, u64)>,
}

fn scan(config: &SearchConfig, prep: &Prepared, k: u64, record: bool) -> Result<KScan> {
    let e = config.z as u64 + (64 - k.leading_zeros()) as u64;
    let mut w = 1u64;
    for d in &prep.primes {
        let period = if e.is_multiple_of(d.m) {
            d.p
        } else {
            d.m / d.m.gcd(&e)
        };
        w = w.lcm(&period);
        if w > config.period_budget {
            return Err(Error::Resource(format!(
                "prime {} raises the t-period for k = {k} to {w} > {}",
                d.p, config.period_budget
            )));
        }
    }
    let strides: Vec<u64> = prep.primes.iter().map(|d| mod_pow_u64(2, e, d.p)).collect();
    let ks: Vec<u64> = prep.primes.iter().map(|d| k % d.p).collect();
    let mut res = vec![0u64; prep.primes.len()];
    let mut admissible = Vec::new();
    let mut uncovered = Vec::new();
    for t in 1..=w {
        let mut mask = 0u128;
        for (i, d) in prep.primes.iter().enumerate() {
            // p < 2^32 keeps this in 64 bits
            res[i] = (res[i] * strides[i] + ks[i]) % d.p;
            mask |= d.table.get(res[i]);
        }
        if mask == prep.full {
            admissible.push(t);
        } else if record {
            uncovered.push((t, (!mask & prep.full).trailing_zeros() as u64));
        }
    }
    Ok(KScan {
        k,
        w,
        admissible,
        uncovered,
    })
}

/// Full scan of a single `k`, recording an uncovered `n` for every
/// inadmissible `t`.
pub fn scan_k(config: &SearchConfig, k: u64) -> Result<KScan> {
    if k.is_multiple_of(2) {
        return Err(Error::Invalid(format!("{k} is even")));
    }
    scan(config, &prepare(config)?, k, true)
}

/// `k` with the admissible `t`-classes modulo `W`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hit {
    pub k: u64,
    pub z: u32,
    pub side: Side,
    pub w: u64,
    pub tclasses: Vec<TClass>,
    /// Residues of `k_2^(z;t)` modulo `2 * prod p`, one per t-class.
    pub class_residues: Vec<ResidueClass>,
    pub certificates: Vec<CoverCertificate>,
}

fn assemble_hit(config: &SearchConfig, scan: KScan) -> Result<Hit> {
    let form = RepForm::new(nat(scan.k), nat(2), config.z)?;
    let modulus = config.table_modulus();
    let primes = config.prime_nats();
    let mut tclasses = Vec::new();
    let mut class_residues = Vec::new();
    let mut certificates = Vec::new();
    for &t in &scan.admissible {
        let tclass = TClass::new(nat(t), nat(scan.w))?;
        let residue = form.residue(&nat(t), &modulus)?;
        let certificate = certificate_for(&residue, &primes, config.side)?;
        let claim = FamilyClaim::new(
            format!("search {} z={}", scan.k, config.z),
            form.clone(),
            tclass.clone(),
            config.side,
            certificate.clone(),
        );
        let verdict = check_family(&claim)?;
        if !verdict.is_proved() {
            return Err(Error::Logic(format!(
                "search hit k = {} {tclass} does not verify: {verdict}",
                scan.k
            )));
        }
        tclasses.push(tclass);
        class_residues.push(ResidueClass::new(residue, modulus.clone())?);
        certificates.push(certificate);
    }
    Ok(Hit {
        k: scan.k,
        z: config.z,
        side: config.side,
        w: scan.w,
        tclasses,
        class_residues,
        certificates,
    })
}

/// Result of one work unit: hits in order, and the first error if any.
struct ChunkResult {
    hits: Vec<KScan>,
    error: Option<(u64, Error)>,
}

fn odd_chunks(bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut start = 1u64;
    while start <= bound {
        let end = start.saturating_add(2 * CHUNK - 1).min(bound);
        out.push((start, end));
        start = match end.checked_add(1 + end % 2) {
            Some(s) => s,
            None => break,
        };
    }
    out
}

fn run_chunks<F>(config: &SearchConfig, f: F) -> Result<Vec<ChunkResult>>
where
    F: Fn((u64, u64)) -> ChunkResult + Sync + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism.max(1))
        .build()
        .map_err(|e| Error::Resource(format!("thread pool: {e}")))?;
    Ok(pool.install(|| odd_chunks(config.k_bound).into_par_iter().map(f).collect()))
}

/// Error at the smallest `k`, if it precedes `limit`.
fn first_error(results: &mut [ChunkResult], limit: u64) -> Option<Error> {
    results
        .iter_mut()
        .filter_map(|r| r.error.take())
        .filter(|(k, _)| *k < limit)
        .min_by_key(|(k, _)| *k)
        .map(|(_, e)| e)
}

/// Every odd `k <= k_bound` with an admissible `t`, ascending.
pub fn find_reps(config: &SearchConfig) -> Result<Vec<Hit>> {
    let prep = prepare(config)?;
    let mut results = run_chunks(config, |(lo, hi)| {
        let mut hits = Vec::new();
        for k in (lo..=hi).step_by(2) {
            match scan(config, &prep, k, false) {
                Ok(s) if !s.admissible.is_empty() => hits.push(s),
                Ok(_) => {}
                Err(e) => {
                    return ChunkResult {
                        hits,
                        error: Some((k, e)),
                    }
                }
            }
        }
        ChunkResult { hits, error: None }
    })?;
    if let Some(e) = first_error(&mut results, u64::MAX) {
        return Err(e);
    }
    results
        .into_iter()
        .flat_map(|r| r.hits)
        .map(|s| assemble_hit(config, s))
        .collect()
}

/// The smallest odd `k <= k_bound` with an admissible `t`.
///
/// Workers share the best `k` found so far only to skip work beyond it; the
/// answer is the minimum over all work units, whatever the thread count.
pub fn find_smallest_rep(config: &SearchConfig) -> Result<Option<Hit>> {
    let prep = prepare(config)?;
    let best = AtomicU64::new(u64::MAX);
    let mut results = run_chunks(config, |(lo, hi)| {
        for k in (lo..=hi).step_by(2) {
            if k > best.load(Ordering::Relaxed) {
                break;
            }
            match scan(config, &prep, k, false) {
                Ok(s) if !s.admissible.is_empty() => {
                    best.fetch_min(k, Ordering::Relaxed);
                    return ChunkResult {
                        hits: vec![s],
                        error: None,
                    };
                }
                Ok(_) => {}
                Err(e) => {
                    return ChunkResult {
                        hits: Vec::new(),
                        error: Some((k, e)),
                    }
                }
            }
        }
        ChunkResult {
            hits: Vec::new(),
            error: None,
        }
    })?;
    let smallest = results
        .iter_mut()
        .flat_map(|r| r.hits.drain(..))
        .min_by_key(|s| s.k);
    let limit = smallest.as_ref().map_or(u64::MAX, |s| s.k);
    if let Some(e) = first_error(&mut results, limit) {
        return Err(e);
    }
    smallest.map(|s| assemble_hit(config, s)).transpose()
}

/// One side of a table row.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableCell {
    pub t0: u64,
    #[serde(with = "crate::json::nat")]
    pub residue: Nat,
}

/// A Sierpiński class and its Riesel partner `t' ≡ -t (mod W)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TablePair {
    pub sierpinski: Option<TableCell>,
    pub riesel: Option<TableCell>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub k: u64,
    pub z: u32,
    pub w: u64,
    #[serde(with = "crate::json::nat")]
    pub modulus: Nat,
    pub pairs: Vec<TablePair>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableReport {
    pub schema: &'static str,
    pub rows: Vec<TableRow>,
}

/// Runs every configuration and merges hits into rows keyed by
/// `(k, z, modulus)`, pairing each Sierpiński `t0` with the Riesel
/// `W - t0`.
pub fn tabulate(configs: &[SearchConfig]) -> Result<TableReport> {
    type Key = (u64, u32, Nat);
    let mut groups: BTreeMap<Key, (u64, Vec<TableCell>, Vec<TableCell>)> = BTreeMap::new();
    for config in configs {
        let modulus = config.table_modulus();
        for hit in find_reps(config)? {
            let entry = groups
                .entry((hit.k, hit.z, modulus.clone()))
                .or_insert_with(|| (hit.w, Vec::new(), Vec::new()));
            for (tc, rc) in hit.tclasses.iter().zip(&hit.class_residues) {
                let cell = TableCell {
                    t0: tc.t0().to_u64().expect("t0 below W"),
                    residue: rc.residue().clone(),
                };
                let cells = match hit.side {
                    Side::Sierpinski => &mut entry.1,
                    Side::Riesel => &mut entry.2,
                };
                if !cells.contains(&cell) {
                    cells.push(cell);
                }
            }
        }
    }
    let rows = groups
        .into_iter()
        .map(|((k, z, modulus), (w, mut sierp, mut riesel))| {
            sierp.sort_by_key(|c| c.t0);
            riesel.sort_by_key(|c| c.t0);
            let mut pairs = Vec::new();
            for s in sierp {
                let partner = (w - s.t0) % w;
                let r = riesel
                    .iter()
                    .position(|c| c.t0 == partner)
                    .map(|i| riesel.remove(i));
                pairs.push(TablePair {
                    sierpinski: Some(s),
                    riesel: r,
                });
            }
            pairs.extend(riesel.into_iter().map(|r| TablePair {
                sierpinski: None,
                riesel: Some(r),
            }));
            TableRow {
                k,
                z,
                w,
                modulus,
                pairs,
            }
        })
        .collect();
    Ok(TableReport {
        schema: json::SCHEMA,
        rows,
    })
}

/// `(k, z, W, modulus, [(t0, residue, t0', residue')])` of the published table.
type RefRow = (u64, u32, u64, u64, &'static [(u64, u64, u64, u64)]);

const M1: u64 = 11184810;

const REFERENCE: &[RefRow] = &[
    (
        659,
        2,
        2730,
        M1,
        &[(131, 2131099, 2599, 762701), (1361, 1639459, 1369, 1254341)],
    ),
    (
        727,
        2,
        2730,
        M1,
        &[
            (127, 3098059, 2603, 10702091),
            (1507, 271129, 1223, 2344211),
        ],
    ),
    (1177, 4, 84, 140100870, &[(19, 84319681, 65, 95997337)]),
    (
        1189,
        1,
        2730,
        M1,
        &[
            (1159, 7523281, 1571, 4384979),
            (2059, 7400371, 671, 4507889),
        ],
    ),
    (
        1549,
        1,
        1365,
        209191710,
        &[
            (38, 32552687, 1327, 23909173),
            (1343, 198067007, 22, 67586563),
        ],
    ),
    (
        1747,
        1,
        2730,
        M1,
        &[(307, 4573999, 2423, 5049251), (397, 7892569, 2333, 1730681)],
    ),
    (18107, 0, 56, M1, &[(25, 8007257, 31, 10702091)]),
    (26267, 0, 56, M1, &[(9, 1624097, 47, 1730681)]),
    (32681, 0, 56, M1, &[(51, 4067003, 5, 6610811)]),
];

/// The published table of Sierpiński and Riesel 2-repstrings.
pub fn reference_table() -> Vec<TableRow> {
    REFERENCE
        .iter()
        .map(|&(k, z, w, modulus, pairs)| TableRow {
            k,
            z,
            w,
            modulus: nat(modulus),
            pairs: pairs
                .iter()
                .map(|&(t, r, t2, r2)| TablePair {
                    sierpinski: Some(TableCell {
                        t0: t,
                        residue: nat(r),
                    }),
                    riesel: Some(TableCell {
                        t0: t2,
                        residue: nat(r2),
                    }),
                })
                .collect(),
        })
        .collect()
}

/// Search settings that regenerate the published table: each prime set is
/// scanned up to its largest listed `k`, on both sides.
pub fn reference_configs(parallelism: usize) -> Result<Vec<SearchConfig>> {
    let settings: [(u32, u64, u64); 5] = [
        (0, M1, 32681),
        (1, M1, 1747),
        (2, M1, 727),
        (4, 140100870, 1177),
        (1, 209191710, 1549),
    ];
    let mut out = Vec::new();
    for (z, modulus, bound) in settings {
        for side in [Side::Sierpinski, Side::Riesel] {
            out.push(
                SearchConfig::from_modulus(z, &nat(modulus), side, bound)?
                    .with_parallelism(parallelism),
            );
        }
    }
    Ok(out)
}

/// Differences between a computed table and a reference.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TableComparison {
    pub matched: Vec<u64>,
    /// Reference rows absent or different in the computed table.
    pub mismatched: Vec<u64>,
    /// Computed rows, or classes within matched `k`, absent from the reference.
    pub extra: Vec<String>,
}

impl TableComparison {
    pub fn is_exact(&self) -> bool {
        self.mismatched.is_empty() && self.extra.is_empty()
    }
}

pub fn compare_tables(computed: &[TableRow], reference: &[TableRow]) -> TableComparison {
    let mut cmp = TableComparison::default();
    for r in reference {
        match computed
            .iter()
            .find(|c| c.k == r.k && c.z == r.z && c.modulus == r.modulus)
        {
            Some(c) if c == r => cmp.matched.push(r.k),
            Some(c) => {
                let extra: Vec<&TablePair> =
                    c.pairs.iter().filter(|p| !r.pairs.contains(p)).collect();
                let covers_reference = r.pairs.iter().all(|p| c.pairs.contains(p)) && c.w == r.w;
                if covers_reference {
                    cmp.matched.push(r.k);
                    cmp.extra.push(format!(
                        "k = {}: {} additional class pairs",
                        r.k,
                        extra.len()
                    ));
                } else {
                    cmp.mismatched.push(r.k);
                }
            }
            None => cmp.mismatched.push(r.k),
        }
    }
    for c in computed {
        if !reference
            .iter()
            .any(|r| c.k == r.k && c.z == r.z && c.modulus == r.modulus)
        {
            cmp.extra
                .push(format!("k = {}, z = {}, modulus {}", c.k, c.z, c.modulus));
        }
    }
    cmp
}

fn cell_text(prime: &str, cell: &Option<TableCell>, w: u64, modulus: &Nat) -> (String, String) {
    match cell {
        Some(c) => (
            format!("t{prime} ≡ {} (mod {w})", c.t0),
            format!("{} (mod {modulus})", c.residue),
        ),
        None => ("-".into(), "-".into()),
    }
}

/// Aligned text layout of a table.
pub fn render_table(rows: &[TableRow]) -> String {
    let mut lines: Vec<[String; 6]> = vec![[
        "k".into(),
        "z".into(),
        "Sierpiński t".into(),
        "residue".into(),
        "Riesel t'".into(),
        "residue".into(),
    ]];
    for row in rows {
        for (i, pair) in row.pairs.iter().enumerate() {
            let (st, sr) = cell_text("", &pair.sierpinski, row.w, &row.modulus);
            let (rt, rr) = cell_text("'", &pair.riesel, row.w, &row.modulus);
            let (k, z) = if i == 0 {
                (row.k.to_string(), row.z.to_string())
            } else {
                (String::new(), String::new())
            };
            lines.push([k, z, st, sr, rt, rr]);
        }
    }
    let widths: Vec<usize> = (0..6)
        .map(|c| {
            lines
                .iter()
                .map(|l| l[c].chars().count())
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    for line in &lines {
        let mut text = String::new();
        for (c, cell) in line.iter().enumerate() {
            let pad = widths[c] - cell.chars().count();
            let _ = write!(text, "{cell}{}  ", " ".repeat(pad));
        }
        out.push_str(text.trim_end());
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(z: u32, side: Side, bound: u64) -> SearchConfig {
        SearchConfig::new(z, vec![3, 5, 7, 13, 17, 241], side, bound)
            .unwrap()
            .with_parallelism(2)
    }

    /// Brute force on exact values: every n in one period of the prime set.
    fn admissible_oracle(k: u64, z: u32, t: u64, primes: &[u64], side: Side) -> bool {
        let v = RepForm::new(nat(k), nat(2), z)
            .unwrap()
            .value(&nat(t))
            .unwrap();
        (0..24u64).all(|n| {
            let x = &v << n;
            let x = match side {
                Side::Sierpinski => x + 1u32,
                Side::Riesel => x - 1u32,
            };
            primes.iter().any(|&p| (&x % p) == nat(0))
        })
    }

    #[test]
    fn smallest_659() {
        let hit = find_smallest_rep(&config(2, Side::Sierpinski, 1000))
            .unwrap()
            .unwrap();
        assert_eq!(hit.k, 659);
        assert_eq!(hit.w, 2730);
        let t0: Vec<u64> = hit
            .tclasses
            .iter()
            .map(|t| t.t0().to_u64().unwrap())
            .collect();
        assert_eq!(t0, vec![131, 1361]);
        assert_eq!(
            hit.class_residues[0],
            ResidueClass::new(2131099u32, M1).unwrap()
        );
        for &t in &t0 {
            assert!(admissible_oracle(
                659,
                2,
                t,
                &[3, 5, 7, 13, 17, 241],
                Side::Sierpinski
            ));
        }
        assert!(!admissible_oracle(
            659,
            2,
            130,
            &[3, 5, 7, 13, 17, 241],
            Side::Sierpinski
        ));
    }

    #[test]
    fn none_below_bound() {
        assert!(find_smallest_rep(&config(0, Side::Sierpinski, 100))
            .unwrap()
            .is_none());
        assert!(find_reps(&config(0, Side::Sierpinski, 100))
            .unwrap()
            .is_empty());
    }

    #[test]
    fn witnesses_check_out() {
        let cfg = config(2, Side::Sierpinski, 1000);
        let s = scan_k(&cfg, 657).unwrap();
        assert!(s.admissible.is_empty());
        assert_eq!(s.uncovered.len() as u64, s.w);
        let form = RepForm::new(nat(657), nat(2), 2).unwrap();
        for &(t, n) in s.uncovered.iter().step_by(97) {
            for &p in &cfg.primes {
                let r = form.residue(&nat(t), &nat(p)).unwrap();
                let v = (r * nat(mod_pow_u64(2, n, p)) + 1u32) % p;
                assert_ne!(v, nat(0), "t={t} n={n} p={p}");
            }
        }
    }

    #[test]
    fn validation() {
        assert!(SearchConfig::new(0, vec![], Side::Riesel, 10).is_err());
        assert!(SearchConfig::new(0, vec![3, 3], Side::Riesel, 10).is_err());
        assert!(SearchConfig::new(0, vec![9], Side::Riesel, 10).is_err());
        assert!(SearchConfig::from_modulus(0, &nat(4), Side::Riesel, 10).is_err());
        let c = SearchConfig::from_modulus(4, &nat(140100870), Side::Riesel, 10).unwrap();
        assert_eq!(c.primes, vec![3, 5, 7, 13, 19, 37, 73]);
        // ord_p(2) of 6700417 is 64, of 641 also 64, of 11 is 10: lcm 320
        let big = SearchConfig::new(0, vec![11, 641], Side::Riesel, 10).unwrap();
        assert!(matches!(find_reps(&big), Err(Error::Resource(_))));
        let tight = config(2, Side::Sierpinski, 1000).with_period_budget(100);
        assert!(matches!(find_smallest_rep(&tight), Err(Error::Resource(_))));
    }

    #[test]
    fn chunks_partition_odds() {
        for bound in [0u64, 1, 2, 511, 512, 513, 2000] {
            let ks: Vec<u64> = odd_chunks(bound)
                .into_iter()
                .flat_map(|(lo, hi)| (lo..=hi).step_by(2))
                .collect();
            let expected: Vec<u64> = (1..=bound).filter(|k| k % 2 == 1).collect();
            assert_eq!(ks, expected, "bound {bound}");
        }
    }

    #[test]
    fn render() {
        let text = render_table(&reference_table()[..1]);
        assert!(text.contains("t ≡ 131 (mod 2730)"));
        assert!(text.contains("t' ≡ 1369 (mod 2730)"));
        assert_eq!(text.lines().count(), 3);
    }

    #[test]
    fn comparison_flags() {
        let reference = reference_table();
        assert!(compare_tables(&reference, &reference).is_exact());
        let mut changed = reference.clone();
        changed[0].pairs.pop();
        let cmp = compare_tables(&changed, &reference);
        assert_eq!(cmp.mismatched, vec![659]);
    }
}
