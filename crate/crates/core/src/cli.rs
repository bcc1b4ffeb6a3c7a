//! Command-line front end.
//!
//! Each subcommand produces a [`CommandOutcome`]: a JSON payload, a text
//! rendering of that payload, and a status mapped to the exit code.

use crate::arith::{Nat, ResidueClass};
use crate::certificates::{
    class_from_certificate, primitive_prime_divisors_with_seed, verify_member_direct,
    CoverCertificate, DirectVerdict, Side,
};
use crate::constructions::{
    additive_inverse_transform, bundled_corpus, check_corpus, ClaimCorpus, ClaimOutcome,
    ClaimStatus, FamilyClaim,
};
use crate::covering::{Coverage, CoveringSystem};
use crate::error::{Error, Result};
use crate::json::{self, parse_nat};
use crate::repforms::{digit_string, RepForm};
use crate::search::{
    compare_tables, default_parallelism, find_reps, find_smallest_rep, reference_configs,
    reference_table, render_table, tabulate, Hit, SearchConfig, TableComparison, TableReport,
};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde::Serialize;
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Parser)]
#[command(
    name = "coverforge",
    version,
    about = "Covering-system certificates for Sierpiński and Riesel rep-forms"
)]
pub struct Cli {
    /// Print the JSON payload instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check that a cover file is a covering system.
    CoverVerify { path: PathBuf },
    /// Validate a certificate file; optionally certify a specific k directly.
    CertVerify {
        path: PathBuf,
        #[arg(long, value_parser = parse_nat_arg)]
        k: Option<Nat>,
    },
    /// Residue class of Sierpiński/Riesel numbers induced by a certificate.
    ClassFromCert { path: PathBuf },
    /// Check every claim of a corpus file (or the bundled corpus).
    CheckClaims {
        /// Corpus file; omit to check the bundled corpus.
        path: Option<PathBuf>,
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Search for base-2 repstring Sierpiński or Riesel numbers.
    Search(SearchArgs),
    /// Value or residue of a rep-form.
    Rep {
        #[arg(long, value_parser = parse_nat_arg)]
        k: Nat,
        #[arg(long, value_parser = parse_nat_arg)]
        b: Nat,
        #[arg(long, default_value_t = 0)]
        z: u32,
        #[arg(long, value_parser = parse_nat_arg)]
        t: Nat,
        #[arg(long = "mod", value_parser = parse_nat_arg)]
        modulus: Option<Nat>,
    },
    /// Primitive prime divisors of 2^m - 1.
    PrimitivePrimes {
        #[arg(long)]
        m: u32,
        /// Seed for the randomized factorization; results do not depend on it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dual Riesel (or Sierpiński) claims of the claims in a corpus file.
    AdditiveInverse {
        path: PathBuf,
        /// Restrict to one claim.
        #[arg(long)]
        id: Option<String>,
    },
}

#[derive(Debug, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    pub z: u32,
    /// Use the odd prime factors of this modulus.
    #[arg(long, value_parser = parse_nat_arg, conflicts_with = "primes")]
    pub primes_from_modulus: Option<Nat>,
    /// Comma-separated prime set.
    #[arg(long, value_delimiter = ',', value_parser = parse_u64_arg)]
    pub primes: Vec<u64>,
    #[arg(long, value_enum, default_value_t = SideArg::Sierpinski)]
    pub side: SideArg,
    #[arg(long, value_parser = parse_u64_arg, default_value = "100000")]
    pub bound: u64,
    #[arg(long)]
    pub parallel: Option<usize>,
    /// Report every qualifying k, not only the smallest.
    #[arg(long)]
    pub all: bool,
    /// Regenerate the published table and compare against it.
    #[arg(long, conflicts_with_all = ["primes_from_modulus", "primes", "all"])]
    pub table: bool,
    /// Seed for the randomized factorization; results do not depend on it.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum SideArg {
    Sierpinski,
    Riesel,
}

impl From<SideArg> for Side {
    fn from(s: SideArg) -> Side {
        match s {
            SideArg::Sierpinski => Side::Sierpinski,
            SideArg::Riesel => Side::Riesel,
        }
    }
}

fn parse_nat_arg(s: &str) -> std::result::Result<Nat, String> {
    parse_nat(s).map_err(|e| e.to_string())
}

fn parse_u64_arg(s: &str) -> std::result::Result<u64, String> {
    parse_nat(s)
        .map_err(|e| e.to_string())?
        .to_u64()
        .ok_or_else(|| format!("{s} does not fit in 64 bits"))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Success,
    Failure,
    ResourceLimit,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Success => 0,
            Status::Failure => 1,
            Status::ResourceLimit => 2,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CommandOutcome {
    pub status: Status,
    pub payload: Value,
    #[serde(skip)]
    pub human_text: String,
}

impl CommandOutcome {
    fn new<P: Serialize>(status: Status, payload: &P, render: impl FnOnce(&P) -> String) -> Self {
        let mut value = serde_json::to_value(payload).expect("payload serializes");
        if let Value::Object(map) = &mut value {
            map.insert("schema".into(), json!(json::SCHEMA));
        }
        CommandOutcome {
            status,
            payload: value,
            human_text: render(payload),
        }
    }

    fn from_error(err: Error) -> Self {
        let status = if err.is_resource() {
            Status::ResourceLimit
        } else {
            Status::Failure
        };
        let message = err.to_string();
        CommandOutcome {
            status,
            payload: json!({ "schema": json::SCHEMA, "error": message }),
            human_text: format!("error: {message}\n"),
        }
    }
}

fn status_of(ok: bool) -> Status {
    if ok {
        Status::Success
    } else {
        Status::Failure
    }
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_certificate(path: &Path) -> Result<CoverCertificate> {
    CoverCertificate::from_json(&path.display().to_string(), &read_text(path)?)
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> CommandOutcome {
    let result = match &cli.command {
        Command::CoverVerify { path } => cmd_cover_verify(path),
        Command::CertVerify { path, k } => cmd_cert_verify(path, k.as_ref()),
        Command::ClassFromCert { path } => cmd_class_from_cert(path),
        Command::CheckClaims { path, parallel } => cmd_check_claims(
            path.as_deref(),
            parallel.unwrap_or_else(default_parallelism),
        ),
        Command::Search(args) => cmd_search(args),
        Command::Rep {
            k,
            b,
            z,
            t,
            modulus,
        } => cmd_rep(k, b, *z, t, modulus.as_ref()),
        Command::PrimitivePrimes { m, seed } => cmd_primitive_primes(*m, *seed),
        Command::AdditiveInverse { path, id } => cmd_additive_inverse(path, id.as_deref()),
    };
    result.unwrap_or_else(CommandOutcome::from_error)
}

#[derive(Serialize)]
struct CoverReport {
    congruences: usize,
    lcm: u64,
    #[serde(flatten)]
    coverage: Coverage,
}

pub fn cmd_cover_verify(path: &Path) -> Result<CommandOutcome> {
    let system = CoveringSystem::from_json(&path.display().to_string(), &read_text(path)?)?;
    let report = CoverReport {
        congruences: system.len(),
        lcm: system.lcm_of_moduli(),
        coverage: system.is_covering(),
    };
    Ok(CommandOutcome::new(
        status_of(report.coverage.is_covering()),
        &report,
        |r| match &r.coverage {
            Coverage::Covering => format!(
                "covering: {} congruences, lcm of moduli {}\n",
                r.congruences, r.lcm
            ),
            Coverage::Uncovered { witness } => format!(
                "not a covering: {witness} satisfies none of the {} congruences (lcm {})\n",
                r.congruences, r.lcm
            ),
        },
    ))
}

#[derive(Serialize)]
struct CertReport {
    certificate: CoverCertificate,
    class: ResidueClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    member: Option<MemberReport>,
}

#[derive(Serialize)]
struct MemberReport {
    #[serde(with = "crate::json::nat")]
    k: Nat,
    in_class: bool,
    direct: DirectVerdict,
}

pub fn cmd_cert_verify(path: &Path, k: Option<&Nat>) -> Result<CommandOutcome> {
    let certificate = read_certificate(path)?;
    let class = class_from_certificate(&certificate)?;
    let member = k
        .map(|k| {
            verify_member_direct(k, &certificate.primes(), certificate.side()).map(|direct| {
                MemberReport {
                    k: k.clone(),
                    in_class: class.contains(k),
                    direct,
                }
            })
        })
        .transpose()?;
    let ok = member
        .as_ref()
        .is_none_or(|m| matches!(m.direct, DirectVerdict::Certified { .. }));
    let report = CertReport {
        certificate,
        class,
        member,
    };
    Ok(CommandOutcome::new(status_of(ok), &report, |r| {
        let mut out = format!(
            "valid {} certificate with {} entries\nclass: k ≡ {}\n",
            r.certificate.side(),
            r.certificate.entries().len(),
            r.class
        );
        if let Some(m) = &r.member {
            let _ = match &m.direct {
                DirectVerdict::Certified { period, .. } => writeln!(
                    out,
                    "{}: every n in one period of {period} has a prime divisor (in class: {})",
                    m.k, m.in_class
                ),
                DirectVerdict::Failure { n } => writeln!(
                    out,
                    "{}: no listed prime divides the value at n = {n} (in class: {})",
                    m.k, m.in_class
                ),
            };
        }
        out
    }))
}

#[derive(Serialize)]
struct ClassReport {
    side: Side,
    class: ResidueClass,
}

pub fn cmd_class_from_cert(path: &Path) -> Result<CommandOutcome> {
    let certificate = read_certificate(path)?;
    let class = class_from_certificate(&certificate)?;
    let report = ClassReport {
        side: certificate.side(),
        class,
    };
    Ok(CommandOutcome::new(Status::Success, &report, |r| {
        format!("{} class: k ≡ {}\n", r.side, r.class)
    }))
}

#[derive(Serialize)]
struct ClaimsReport {
    total: usize,
    proved: usize,
    outcomes: Vec<ClaimOutcome>,
}

pub fn cmd_check_claims(path: Option<&Path>, parallel: usize) -> Result<CommandOutcome> {
    let corpus = match path {
        Some(p) => ClaimCorpus::read(p)?,
        None => bundled_corpus(),
    };
    let outcomes = check_corpus(&corpus, parallel)?;
    let report = ClaimsReport {
        total: outcomes.len(),
        proved: outcomes
            .iter()
            .filter(|o| o.status == ClaimStatus::Proved)
            .count(),
        outcomes,
    };
    Ok(CommandOutcome::new(
        status_of(report.proved == report.total),
        &report,
        |r| {
            let mut out = String::new();
            for o in &r.outcomes {
                let tag = match o.status {
                    ClaimStatus::Proved => "proved",
                    ClaimStatus::Failed => "FAILED",
                    ClaimStatus::Error => "ERROR",
                };
                let _ = writeln!(out, "{tag:<7} {}: {}", o.id, o.detail);
            }
            let _ = writeln!(out, "{}/{} claims proved", r.proved, r.total);
            out
        },
    ))
}

#[derive(Serialize)]
struct SearchReport {
    config: SearchConfig,
    hits: Vec<Hit>,
}

#[derive(Serialize)]
struct TableRun {
    table: TableReport,
    comparison: TableComparison,
}

fn render_hit(h: &Hit) -> String {
    let mut out = format!("k = {} (z = {}, {}), t-period {}\n", h.k, h.z, h.side, h.w);
    for (t, c) in h.tclasses.iter().zip(&h.class_residues) {
        let _ = writeln!(out, "  {t}: k_2^(z;t) ≡ {c}");
    }
    out
}

pub fn cmd_search(args: &SearchArgs) -> Result<CommandOutcome> {
    let parallel = args.parallel.unwrap_or_else(default_parallelism);
    if args.table {
        let table = tabulate(&reference_configs(parallel)?)?;
        let comparison = compare_tables(&table.rows, &reference_table());
        let run = TableRun { table, comparison };
        return Ok(CommandOutcome::new(
            status_of(run.comparison.mismatched.is_empty()),
            &run,
            |r| {
                let mut out = render_table(&r.table.rows);
                let _ = writeln!(
                    out,
                    "\nmatched {} of {} published rows",
                    r.comparison.matched.len(),
                    reference_table().len()
                );
                for k in &r.comparison.mismatched {
                    let _ = writeln!(out, "mismatch: k = {k}");
                }
                for e in &r.comparison.extra {
                    let _ = writeln!(out, "beyond the published table: {e}");
                }
                out
            },
        ));
    }
    let side = Side::from(args.side);
    let config = match (&args.primes_from_modulus, args.primes.is_empty()) {
        (Some(m), _) => {
            SearchConfig::from_modulus_with_seed(args.z, m, args.seed, side, args.bound)?
        }
        (None, false) => SearchConfig::new(args.z, args.primes.clone(), side, args.bound)?,
        (None, true) => {
            return Err(Error::Invalid(
                "give --primes or --primes-from-modulus".into(),
            ))
        }
    }
    .with_parallelism(parallel);
    let hits = if args.all {
        find_reps(&config)?
    } else {
        find_smallest_rep(&config)?.into_iter().collect()
    };
    let report = SearchReport { config, hits };
    Ok(CommandOutcome::new(
        status_of(!report.hits.is_empty()),
        &report,
        |r| {
            if r.hits.is_empty() {
                return format!("no k ≤ {} qualifies\n", r.config.k_bound);
            }
            r.hits.iter().map(render_hit).collect()
        },
    ))
}

#[derive(Serialize)]
struct RepReport {
    form: RepForm,
    #[serde(with = "crate::json::nat")]
    t: Nat,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_nat")]
    value: Option<Nat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    residue: Option<ResidueClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    digits: Option<String>,
}

mod opt_nat {
    use crate::arith::Nat;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(v: &Option<Nat>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(n) => s.serialize_str(&n.to_string()),
            None => s.serialize_none(),
        }
    }
}

pub fn cmd_rep(k: &Nat, b: &Nat, z: u32, t: &Nat, modulus: Option<&Nat>) -> Result<CommandOutcome> {
    let form = RepForm::new(k.clone(), b.clone(), z)?;
    let spec = form.at(t.clone())?;
    let report = match modulus {
        Some(m) => RepReport {
            residue: Some(ResidueClass::new(form.residue(spec.t(), m)?, m.clone())?),
            form,
            t: t.clone(),
            value: None,
            digits: None,
        },
        None => {
            let value = form.value(spec.t())?;
            RepReport {
                digits: Some(digit_string(&value, b)),
                value: Some(value),
                form,
                t: t.clone(),
                residue: None,
            }
        }
    };
    Ok(CommandOutcome::new(Status::Success, &report, |r| {
        match (&r.value, &r.residue, &r.digits) {
            (Some(v), _, Some(d)) => format!("{v}\nbase {}: {d}\n", r.form.b()),
            (_, Some(c), _) => format!("{c}\n"),
            _ => String::new(),
        }
    }))
}

#[derive(Serialize)]
struct PrimitiveReport {
    m: u32,
    #[serde(with = "crate::json::nat_vec")]
    primes: Vec<Nat>,
}

pub fn cmd_primitive_primes(m: u32, seed: u64) -> Result<CommandOutcome> {
    let report = PrimitiveReport {
        m,
        primes: primitive_prime_divisors_with_seed(m, seed)?,
    };
    Ok(CommandOutcome::new(Status::Success, &report, |r| {
        let list: Vec<String> = r.primes.iter().map(|p| p.to_string()).collect();
        if list.is_empty() {
            format!("2^{} - 1 has no primitive prime divisor\n", r.m)
        } else {
            format!("{}\n", list.join(" "))
        }
    }))
}

#[derive(Serialize)]
struct DualEntry {
    source: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    dual: Option<FamilyClaim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<String>,
}

pub fn cmd_additive_inverse(path: &Path, id: Option<&str>) -> Result<CommandOutcome> {
    let corpus = ClaimCorpus::read(path)?;
    let selected: Vec<&FamilyClaim> = match id {
        Some(id) => vec![corpus
            .get(id)
            .ok_or_else(|| Error::Invalid(format!("no claim `{id}` in the corpus")))?],
        None => corpus.claims.iter().collect(),
    };
    let entries: Vec<DualEntry> = selected
        .into_iter()
        .map(|claim| match additive_inverse_transform(claim) {
            Ok(dual) => DualEntry {
                source: claim.id.clone(),
                dual: Some(dual),
                error: None,
            },
            Err(e) => DualEntry {
                source: claim.id.clone(),
                dual: None,
                error: Some(e.to_string()),
            },
        })
        .collect();
    let ok = entries.iter().all(|e| e.dual.is_some());
    let payload = json!({ "duals": entries });
    Ok(CommandOutcome::new(status_of(ok), &payload, |_| {
        let mut out = String::new();
        for e in &entries {
            let _ = match (&e.dual, &e.error) {
                (Some(d), _) => {
                    let class = d
                        .expected_class
                        .as_ref()
                        .map_or_else(String::new, |c| format!(", class {c}"));
                    writeln!(
                        out,
                        "{} -> {} {} {}{class}",
                        e.source, d.side, d.form, d.tclass
                    )
                }
                (None, Some(err)) => writeln!(out, "{}: {err}", e.source),
                (None, None) => Ok(()),
            };
        }
        out
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rep_examples() {
        let out = cmd_rep(
            &Nat::from(1u32),
            &Nat::from(10u32),
            2,
            &Nat::from(3u32),
            None,
        )
        .unwrap();
        assert_eq!(out.payload["value"], "1001001");
        assert!(out.human_text.starts_with("1001001\n"));
        let out = cmd_rep(
            &Nat::from(18107u32),
            &Nat::from(2u32),
            0,
            &Nat::from(25u32),
            Some(&Nat::from(11184810u32)),
        )
        .unwrap();
        assert_eq!(out.payload["residue"]["residue"], 8007257);
        assert!(cmd_rep(
            &Nat::from(7u32),
            &Nat::from(10u32),
            0,
            &Nat::from(0u32),
            None
        )
        .is_err());
    }

    #[test]
    fn parse_args() {
        let cli = Cli::try_parse_from([
            "coverforge",
            "search",
            "--z",
            "2",
            "--primes-from-modulus",
            "0xAAAAAA",
            "--bound",
            "1000",
        ])
        .unwrap();
        match cli.command {
            Command::Search(a) => {
                assert_eq!(a.primes_from_modulus, Some(Nat::from(11184810u32)));
            }
            other => panic!("{other:?}"),
        }
        assert!(
            Cli::try_parse_from(["coverforge", "rep", "--k", "x", "--b", "2", "--t", "1"]).is_err()
        );
    }
}
