//! Acceptance run: one PASS/FAIL line per criterion, with timings.
//!
//! Timed sections report the median of several runs after one warm-up run.

use coverforge::arith::{nat, Nat, ResidueClass};
use coverforge::certificates::{
    class_from_certificate, classic_sierpinski_certificate, verify_member_direct, DirectVerdict,
    Side,
};
use coverforge::constructions::{
    additive_inverse_transform, bundled_corpus, check_family, check_repdigit_family, power_is_one,
    repunit_is_minus_one, repunit_riesel_construction, repunit_sierpinski_construction,
    FamilyClaim, FamilyVerdict, RepunitCase, TClass,
};
use coverforge::covering::{classic_cover, trivial_cover, Congruence, Coverage, CoveringSystem};
use coverforge::repforms::RepForm;
use coverforge::search::{
    compare_tables, find_reps, find_smallest_rep, reference_configs, reference_table, tabulate,
    SearchConfig,
};
use coverforge::CoverCertificate;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use std::time::{Duration, Instant};

const M1: u64 = 11184810;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Median wall time of `runs` calls after one warm-up; returns the last result.
fn timed<T>(runs: usize, mut f: impl FnMut() -> T) -> (T, Duration) {
    let mut result = f();
    let mut times = Vec::with_capacity(runs);
    for _ in 0..runs {
        let start = Instant::now();
        result = f();
        times.push(start.elapsed());
    }
    times.sort();
    (result, times[times.len() / 2])
}

fn once<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let r = f();
    (r, start.elapsed())
}

fn ms(d: Duration) -> String {
    format!("{:.3} ms", d.as_secs_f64() * 1e3)
}

fn rc(r: u64, m: u64) -> ResidueClass {
    ResidueClass::new(nat(r), nat(m)).unwrap()
}

fn claim(
    k: u64,
    z: u32,
    t0: u64,
    w: u64,
    side: Side,
    certificate: CoverCertificate,
) -> FamilyClaim {
    FamilyClaim::new(
        format!("{k}-{t0}"),
        RepForm::new(nat(k), nat(2), z).unwrap(),
        TClass::new(nat(t0), nat(w)).unwrap(),
        side,
        certificate,
    )
}

fn proved_class(v: &FamilyVerdict) -> Option<ResidueClass> {
    v.proof().map(|p| p.class.clone())
}

/// Smallest uncovered residue by a plain loop.
fn exhaustive_witness(pairs: &[(u64, u64)]) -> Option<u64> {
    let l = pairs
        .iter()
        .fold(1u64, |acc, &(_, m)| num_integer::lcm(acc, m));
    (0..l).find(|n| pairs.iter().all(|&(r, m)| n % m != r))
}

fn criterion_1() -> Outcome {
    let c1_pairs = [(0, 2), (0, 3), (1, 4), (3, 8), (11, 12), (7, 24)];
    let mut details = Vec::new();
    let mut pass = true;
    for (name, system) in [("C0", trivial_cover()), ("C1", classic_cover())] {
        let (cov, t) = timed(20, || system.is_covering());
        pass &= cov.is_covering() && t < Duration::from_millis(1);
        details.push(format!("{name} {}", ms(t)));
    }
    for skip in 0..c1_pairs.len() {
        let pairs: Vec<(u64, u64)> = c1_pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &p)| p)
            .collect();
        let system = CoveringSystem::new(
            pairs
                .iter()
                .map(|&(r, m)| Congruence::new(r, m).unwrap())
                .collect(),
        )
        .unwrap();
        let (cov, t) = timed(20, || system.is_covering());
        let expected = exhaustive_witness(&pairs);
        let ok = matches!(cov, Coverage::Uncovered { witness } if Some(witness) == expected)
            && t < Duration::from_millis(1);
        pass &= ok;
        details.push(format!("C1-#{skip} witness {:?} {}", expected, ms(t)));
    }
    outcome(pass, details.join(", "))
}

fn criterion_2() -> Outcome {
    let cert = classic_sierpinski_certificate();
    let (class, t) = timed(20, || class_from_certificate(&cert).unwrap());
    outcome(
        class == rc(8007257, M1) && t < Duration::from_millis(1),
        format!("{class} in {}", ms(t)),
    )
}

fn criterion_3() -> Outcome {
    let s = claim(
        18107,
        0,
        25,
        56,
        Side::Sierpinski,
        classic_sierpinski_certificate(),
    );
    let (r, t1) = timed(5, || {
        let v = check_family(&s).unwrap();
        let dual = additive_inverse_transform(&s).unwrap();
        (v, dual)
    });
    let (sv, dual) = r;
    let (rv, t2) = timed(5, || check_family(&dual).unwrap());
    let ok = proved_class(&sv) == Some(rc(8007257, M1))
        && dual.tclass == TClass::new(nat(31), nat(56)).unwrap()
        && proved_class(&rv) == Some(rc(10702091, M1));
    // the Riesel side on its own, from a certificate assembled independently
    let riesel_cert = coverforge::certificates::certificate_for(
        &nat(10702091),
        &[3u64, 5, 7, 13, 17, 241].map(nat),
        Side::Riesel,
    )
    .unwrap();
    let r2 = check_family(&claim(18107, 0, 31, 56, Side::Riesel, riesel_cert)).unwrap();
    let ok = ok && proved_class(&r2) == Some(rc(10702091, M1));
    let total = t1.max(t2);
    outcome(
        ok && total < Duration::from_millis(10),
        format!(
            "Sierpiński {}, Riesel {}; {} (check + transform), {} (Riesel check)",
            sv,
            rv,
            ms(t1),
            ms(t2)
        ),
    )
}

fn criterion_4() -> Outcome {
    let primes = [3u64, 5, 7, 13, 17, 241].map(nat);
    let cases = [
        (131, Side::Sierpinski, 2131099),
        (1361, Side::Sierpinski, 1639459),
        (2599, Side::Riesel, 762701),
        (1369, Side::Riesel, 1254341),
    ];
    let (results, t) = timed(3, || {
        cases
            .iter()
            .map(|&(t0, side, residue)| {
                let k = RepForm::new(nat(659), nat(2), 2)
                    .unwrap()
                    .residue(&nat(t0), &nat(M1))
                    .unwrap();
                let cert = coverforge::certificates::certificate_for(&k, &primes, side).unwrap();
                let v = check_family(&claim(659, 2, t0, 2730, side, cert)).unwrap();
                proved_class(&v) == Some(rc(residue, M1))
            })
            .collect::<Vec<bool>>()
    });
    // the published certificate for t ≡ 1361
    let c1361 = CoverCertificate::from_triples(
        Side::Sierpinski,
        &[
            (1, 2, 3),
            (1, 3, 7),
            (0, 4, 5),
            (6, 8, 17),
            (2, 12, 13),
            (18, 24, 241),
        ],
    )
    .unwrap();
    let published = check_family(&claim(659, 2, 1361, 2730, Side::Sierpinski, c1361)).unwrap();
    let ok = results.iter().all(|&b| b) && proved_class(&published) == Some(rc(1639459, M1));
    outcome(
        ok && t < Duration::from_millis(100),
        format!(
            "{results:?}, published 1361 certificate ok: {}; {}",
            published.is_proved(),
            ms(t)
        ),
    )
}

fn criterion_5() -> Outcome {
    let reference = reference_table();
    let (single, t1) = once(|| tabulate(&reference_configs(1).unwrap()));
    let (eight, t8) = once(|| tabulate(&reference_configs(8).unwrap()));
    let (single, eight) = match (single, eight) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return outcome(false, format!("search error: {e}")),
    };
    let cmp = compare_tables(&single.rows, &reference);
    // first row of each prime set is the smallest hit
    let smallest_ok = [
        (0u32, M1, 18107u64),
        (1, M1, 1189),
        (2, M1, 659),
        (4, 140100870, 1177),
        (1, 209191710, 1549),
    ]
    .iter()
    .all(|&(z, m, k)| {
        [Side::Sierpinski, Side::Riesel].iter().all(|&side| {
            let cfg = SearchConfig::from_modulus(z, &nat(m), side, k).unwrap();
            find_smallest_rep(&cfg).unwrap().map(|h| h.k) == Some(k)
        })
    });
    let ok = cmp.is_exact()
        && single == eight
        && smallest_ok
        && t1 < Duration::from_secs(300)
        && t8 < Duration::from_secs(60);
    outcome(
        ok,
        format!(
            "matched {}/{} rows, extras {:?}, smallest ok {smallest_ok}; 1 thread {:.2} s, 8 threads {:.2} s on {} core(s)",
            cmp.matched.len(),
            reference.len(),
            cmp.extra,
            t1.as_secs_f64(),
            t8.as_secs_f64(),
            std::thread::available_parallelism().map_or(1, |n| n.get())
        ),
    )
}

fn criterion_6() -> Outcome {
    let c87 = CoverCertificate::from_triples(
        Side::Sierpinski,
        &[
            (0, 2, 3),
            (2, 3, 7),
            (1, 4, 5),
            (7, 8, 17),
            (7, 12, 13),
            (3, 24, 241),
        ],
    )
    .unwrap();
    let c180 = CoverCertificate::from_triples(
        Side::Riesel,
        &[
            (1, 2, 3),
            (2, 3, 7),
            (0, 4, 5),
            (2, 8, 17),
            (10, 12, 13),
            (6, 24, 241),
        ],
    )
    .unwrap();
    let (a, ta) = timed(5, || {
        check_repdigit_family(
            &nat(41),
            &rc(87, M1),
            &TClass::new(nat(59), nat(120)).unwrap(),
            Side::Sierpinski,
            &c87,
        )
    });
    let (b, tb) = timed(5, || {
        check_repdigit_family(
            &nat(101),
            &rc(180, M1),
            &TClass::new(nat(171), nat(240)).unwrap(),
            Side::Riesel,
            &c180,
        )
    });
    let ok_a = a.as_ref().map(|v| v.verdict.is_proved()).unwrap_or(false);
    let ok_b = b.as_ref().map(|v| v.verdict.is_proved()).unwrap_or(false);
    let holds = |base: u64, e: u64, cert: &CoverCertificate| {
        power_is_one(&nat(base), &nat(e), &cert.primes())
            .iter()
            .all(|(_, ok)| *ok)
    };
    let (p87, p171, p180) = (
        holds(87, 120, &c87),
        holds(171, 240, &c180),
        holds(180, 240, &c180),
    );
    outcome(
        ok_a && ok_b && p87 && p180 && ta < Duration::from_millis(10) && tb < Duration::from_millis(10),
        format!(
            "41 base 87: {ok_a} {}, 101 base 180: {ok_b} {}; 87^120 = 1: {p87}, 171^240 = 1: {p171}, 180^240 = 1: {p180}",
            ms(ta),
            ms(tb)
        ),
    )
}

fn criterion_7() -> Outcome {
    let sp: Vec<Nat> = [3u64, 5, 17, 257, 65537, 6700417].map(nat).to_vec();
    let rp: Vec<Nat> = [3u64, 5, 17, 257, 65537, 641].map(nat).to_vec();
    let ((components, riesel, discrepancy), t) = timed(3, || {
        let components: Vec<Option<Nat>> = [147u64, 265, 378]
            .iter()
            .map(|&b| {
                repunit_sierpinski_construction(&nat(b), 6, sp.clone(), nat(641))
                    .ok()
                    .and_then(|o| o.construction().map(|c| c.tclass.component(&nat(640))))
            })
            .collect();
        let riesel = repunit_riesel_construction(&nat(16518444216571), 6, rp.clone(), nat(6700417))
            .ok()
            .and_then(|o| o.construction().map(|c| c.case.clone()));
        let t378 = repunit_is_minus_one(&nat(378), &nat(257), &nat(641)).unwrap();
        let t278 = [385u64, 513, 257]
            .iter()
            .any(|&t| repunit_is_minus_one(&nat(278), &nat(t), &nat(641)).unwrap());
        (components, riesel, (t378, t278))
    });
    let expected: Vec<Option<Nat>> = [385u64, 513, 257].iter().map(|&t| Some(nat(t))).collect();
    let riesel_ok = matches!(
        &riesel,
        Some(RepunitCase::CoprimeOrder { order })
            if num_integer::Integer::gcd(order, &nat(2753074036095)).is_one()
    );
    let ok = components == expected && riesel_ok && discrepancy == (true, false);
    outcome(
        ok && t < Duration::from_secs(1),
        format!(
            "640-components {:?}, Riesel case {:?}; 378 satisfies t ≡ 257: {}, 278 satisfies any stated class: {}; {}",
            components.iter().map(|c| c.as_ref().map(|n| n.to_string())).collect::<Vec<_>>(),
            riesel,
            discrepancy.0,
            discrepancy.1,
            ms(t)
        ),
    )
}

fn is_power_of_two(b: &Nat) -> bool {
    !b.is_zero() && (b & (b - Nat::one())).is_zero()
}

fn criterion_8() -> Outcome {
    let corpus = bundled_corpus();
    let ((checked, skipped, failures), t) = timed(1, || {
        let mut checked = 0;
        let mut skipped = 0;
        let mut failures = Vec::new();
        for c in corpus.claims.iter().filter(|c| c.side == Side::Sierpinski) {
            if !is_power_of_two(c.form.b()) {
                skipped += 1;
                continue;
            }
            checked += 1;
            match additive_inverse_transform(c) {
                Ok(dual) => {
                    let proved = check_family(&dual).map(|v| v.is_proved()).unwrap_or(false);
                    let sum = (c.tclass.t0() + dual.tclass.t0()) % c.tclass.w();
                    if !proved || !sum.is_zero() || dual.side != Side::Riesel {
                        failures.push(c.id.clone());
                    }
                }
                Err(e) => failures.push(format!("{}: {e}", c.id)),
            }
        }
        // double-class rows: each Sierpiński class maps to its published partner
        for row in reference_table().iter().filter(|r| r.pairs.len() == 2) {
            for pair in &row.pairs {
                let (s, r) = (
                    pair.sierpinski.as_ref().unwrap(),
                    pair.riesel.as_ref().unwrap(),
                );
                let primes = coverforge::certificates::primes_from_modulus(&row.modulus).unwrap();
                let cert = coverforge::certificates::certificate_for(
                    &s.residue,
                    &primes,
                    Side::Sierpinski,
                )
                .unwrap();
                let claim = claim(row.k, row.z, s.t0, row.w, Side::Sierpinski, cert);
                let ok = additive_inverse_transform(&claim)
                    .map(|d| {
                        d.tclass.t0().to_u64() == Some(r.t0)
                            && d.expected_class
                                == Some(
                                    ResidueClass::new(r.residue.clone(), row.modulus.clone())
                                        .unwrap(),
                                )
                    })
                    .unwrap_or(false);
                if !ok {
                    failures.push(format!("row {} t ≡ {}", row.k, s.t0));
                }
            }
        }
        (checked, skipped, failures)
    });
    outcome(
        failures.is_empty() && checked > 0 && t < Duration::from_secs(1),
        format!(
            "{checked} base-2 Sierpiński claims dualized, {skipped} other-base claims have no dual, 10 table pairings; failures {failures:?}; {}",
            ms(t)
        ),
    )
}

fn criterion_9() -> Outcome {
    let mut notes = Vec::new();

    // (a) residues against exact values
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let mut mismatches = 0;
    for _ in 0..10_000 {
        let k = rng.gen_range(1u64..=100_000);
        let b = rng.gen_range(2u64..=40);
        let z = rng.gen_range(0u32..=3);
        let t = rng.gen_range(1u64..=200);
        let m = rng.gen_range(1u64..=10_000_000);
        let form = RepForm::new(nat(k), nat(b), z).unwrap();
        let value = form.value(&nat(t)).unwrap();
        if form.residue(&nat(t), &nat(m)).unwrap() != value % m {
            mismatches += 1;
        }
    }
    let a = mismatches == 0;
    notes.push(format!("(a) {mismatches} mismatches in 10^4"));

    // (b) direct certification, cross-checked by a plain big-integer loop
    let oracle = |k: u64, primes: &[u64], side: Side| -> bool {
        (0..144u32).all(|n| {
            let v = nat(k) << n;
            let v = match side {
                Side::Sierpinski => v + 1u32,
                Side::Riesel => v - 1u32,
            };
            primes.iter().any(|&p| (&v % p).is_zero() && v > nat(p))
        })
    };
    let p78557 = [3u64, 5, 7, 13, 19, 37, 73];
    let p509203 = [3u64, 5, 7, 13, 17, 241];
    let b1 = matches!(
        verify_member_direct(&nat(78557), &p78557.map(nat), Side::Sierpinski),
        Ok(DirectVerdict::Certified { .. })
    ) && oracle(78557, &p78557, Side::Sierpinski);
    let b2 = matches!(
        verify_member_direct(&nat(509203), &p509203.map(nat), Side::Riesel),
        Ok(DirectVerdict::Certified { .. })
    ) && oracle(509203, &p509203, Side::Riesel);
    notes.push(format!("(b) 78557 {b1}, 509203 {b2}"));

    // (c) no 2^t - 1 in a constructed Sierpiński class
    let mut classes = vec![class_from_certificate(&classic_sierpinski_certificate()).unwrap()];
    for c in bundled_corpus()
        .claims
        .iter()
        .filter(|c| c.side == Side::Sierpinski)
    {
        if let Ok(FamilyVerdict::Proved(p)) = check_family(c) {
            classes.push(p.class);
        }
    }
    let mut hits = 0;
    for t in 1..=200u32 {
        let v = (Nat::one() << t) - 1u32;
        hits += classes.iter().filter(|c| c.contains(&v)).count();
    }
    let c = hits == 0;
    notes.push(format!(
        "(c) {} classes, {hits} Mersenne members",
        classes.len()
    ));

    // (d) identical search output at 1, 2 and 8 threads
    let runs: Vec<_> = [1usize, 2, 8]
        .iter()
        .map(|&n| {
            let cfg = SearchConfig::new(1, vec![3, 5, 7, 13, 17, 241], Side::Sierpinski, 1747)
                .unwrap()
                .with_parallelism(n);
            (find_reps(&cfg).unwrap(), find_smallest_rep(&cfg).unwrap())
        })
        .collect();
    let d = runs.windows(2).all(|w| w[0] == w[1]) && runs[0].0.len() == 2;
    notes.push(format!("(d) deterministic {d}"));

    outcome(a && b1 && b2 && c && d, notes.join("; "))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 9] = [
        ("cover verification", criterion_1),
        ("class construction", criterion_2),
        ("18107 family", criterion_3),
        ("659 repstring family", criterion_4),
        ("published table reproduction", criterion_5),
        ("repdigit bases", criterion_6),
        ("repunit corollaries", criterion_7),
        ("additive-inverse duality", criterion_8),
        ("property suites", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} {}. {name}: {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
