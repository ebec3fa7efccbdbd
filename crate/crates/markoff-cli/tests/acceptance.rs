//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test -p markoff-cli --test acceptance -- --nocapture`.
//!
//! Every integer assertion is exact; the only tolerances are the stated
//! wall-clock budgets.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::collections::BTreeSet;
use std::process::Command;
use std::time::Instant;

use markoff::farey::{self, Slope};
use markoff::{arith, character, form, matrix, tree, unicity};

fn n(v: u64) -> BigUint {
    BigUint::from(v)
}

fn s(nu: u64, mu: u64) -> Slope {
    Slope::new(mu, nu).unwrap()
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_markoff"))
}

const FIRST_40: [u64; 40] = [
    1, 2, 5, 13, 29, 34, 89, 169, 194, 233, 433, 610, 985, 1325, 1597, 2897, 4181, 5741, 6466,
    7561, 9077, 10946, 14701, 28657, 33461, 37666, 43261, 51641, 62210, 75025, 96557, 135137,
    195025, 196418, 294685, 426389, 499393, 514229, 646018, 925765,
];

#[test]
fn criterion_01_first_forty_numbers() {
    let start = Instant::now();
    let records = tree::enumerate_numbers(&n(1_000_000));
    let got: Vec<u64> = records.iter().map(|r| r.m.to_u64().unwrap()).collect();
    assert_eq!(got, FIRST_40);
    assert_eq!(*got.last().unwrap(), 925_765);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "enumeration took {elapsed:?}");

    // the CLI route must agree row for row
    let out = bin()
        .args(["enumerate", "--bound", "1000000", "--format", "csv"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let ms: Vec<u64> = stdout
        .lines()
        .skip(1)
        .map(|line| line.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ms, FIRST_40);
    println!("[PASS] criterion 1: first 40 Markoff numbers reproduced in {elapsed:?}");
}

#[test]
fn criterion_02_first_twelve_triples() {
    let start = Instant::now();
    // twelve smallest triples by maximal element; the last one is the
    // Fibonacci-branch triple (1, 233, 610)
    let expected: [(u64, u64, u64); 12] = [
        (1, 1, 1),
        (1, 1, 2),
        (1, 2, 5),
        (1, 5, 13),
        (2, 5, 29),
        (1, 13, 34),
        (1, 34, 89),
        (2, 29, 169),
        (5, 13, 194),
        (1, 89, 233),
        (5, 29, 433),
        (1, 233, 610),
    ];
    // oracle: each expected triple really solves the equation
    for (x, y, z) in expected {
        assert_eq!(x * x + y * y + z * z, 3 * x * y * z, "({x},{y},{z})");
    }
    let got: Vec<(u64, u64, u64)> = tree::enumerate_numbers(&n(610))
        .iter()
        .map(|r| {
            (
                r.triple.x().to_u64().unwrap(),
                r.triple.y().to_u64().unwrap(),
                r.triple.z().to_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(got, expected);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("[PASS] criterion 2: first 12 triples as permutation classes in {elapsed:?}");
}

#[test]
fn criterion_03_reduction_chain() {
    let start = tree::MarkoffTriple::new(13u32, 194u32, 7561u32).unwrap();
    let chain: Vec<(u64, u64, u64)> = start
        .reduce()
        .iter()
        .map(|t| {
            (
                t.x().to_u64().unwrap(),
                t.y().to_u64().unwrap(),
                t.z().to_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        chain,
        [
            (13, 194, 7561),
            (5, 13, 194),
            (1, 5, 13),
            (1, 2, 5),
            (1, 1, 2),
            (1, 1, 1),
        ]
    );
    println!("[PASS] criterion 3: reduction chain of (13, 194, 7561) reproduced exactly");
}

#[test]
fn criterion_04_tree_region_labels() {
    // all 33 region labels down to level 5
    let labels: [(u64, u64, u64); 33] = [
        (0, 1, 1),
        (1, 0, 2),
        (1, 1, 5),
        (1, 2, 13),
        (2, 1, 29),
        (1, 3, 34),
        (2, 3, 194),
        (3, 2, 433),
        (3, 1, 169),
        (1, 4, 89),
        (2, 5, 1325),
        (3, 5, 7561),
        (3, 4, 2897),
        (4, 3, 6466),
        (5, 3, 37666),
        (5, 2, 14701),
        (4, 1, 985),
        (1, 5, 233),
        (2, 7, 9077),
        (3, 8, 135137),
        (3, 7, 51641),
        (4, 7, 294685),
        (5, 8, 4400489),
        (5, 7, 1686049),
        (4, 5, 43261),
        (5, 4, 96557),
        (7, 5, 8399329),
        (8, 5, 48928105),
        (7, 4, 3276509),
        (7, 3, 1278818),
        (8, 3, 7453378),
        (7, 2, 499393),
        (5, 1, 5741),
    ];
    for (nu, mu, m) in labels {
        assert_eq!(tree::markoff_number(&s(nu, mu)), n(m), "slope {nu}/{mu}");
    }
    println!("[PASS] criterion 4: all 33 tree labels through level 5 match");
}

#[test]
fn criterion_05_example_matrices() {
    let cases: [((u64, u64), [i64; 4]); 7] = [
        ((1, 2), [21, 29, 13, 18]),
        ((1, 1), [8, 11, 5, 7]),
        ((2, 1), [46, 65, 29, 41]),
        ((1, 3), [55, 76, 34, 47]),
        ((2, 3), [313, 434, 194, 269]),
        ((3, 2), [687, 971, 433, 612]),
        ((3, 1), [268, 379, 169, 239]),
    ];
    for ((nu, mu), [a, b, c, d]) in cases {
        let got = matrix::markoff_matrix(&s(nu, mu)).m;
        assert_eq!(got, matrix::Mat2::new(a, b, c, d), "slope {nu}/{mu}");
    }
    println!("[PASS] criterion 5: all seven example matrices match entry for entry");
}

#[test]
fn criterion_06_commutator_traces() {
    let start = Instant::now();
    let pairs = farey::farey_pairs_up_to(10);
    assert_eq!(pairs.len(), 2047);
    for (r, sl) in &pairs {
        let tr = matrix::commutator_trace(r, sl).unwrap();
        assert_eq!(tr, (-2).into(), "pair ({r}, {sl})");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 6: commutator trace -2 on {} Farey pairs (levels <= 10) in {elapsed:?}",
        pairs.len()
    );
}

#[test]
fn criterion_07_difference_identity_sweep() {
    let start = Instant::now();
    let mut checked = 0usize;
    for level in 1..=12u32 {
        for t in farey::slopes_at_level(level) {
            let ft = farey::FareyTriple::of(&t).unwrap();
            assert!(character::check_difference_identities(&ft), "t={t}");
            checked += 1;
        }
    }
    assert_eq!(checked, 4095);
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("[PASS] criterion 7: difference identities on {checked} Farey triples in {elapsed:?}");
}

#[test]
fn criterion_08_monotonicity() {
    let slopes = farey::slopes_up_to_level(10);
    assert_eq!(slopes.len(), 1025);
    assert!(character::check_monotonicity(&slopes));
    // equivalently the matrix index a/c strictly decreases
    for w in slopes.windows(2) {
        let a = matrix::rho(&matrix::markoff_matrix(&w[0]).m).unwrap();
        let b = matrix::rho(&matrix::markoff_matrix(&w[1]).m).unwrap();
        assert_eq!(
            matrix::frac_cmp(&a, &b),
            std::cmp::Ordering::Greater,
            "{} vs {}",
            w[0],
            w[1]
        );
    }
    println!(
        "[PASS] criterion 8: u/m strictly increasing and a/c strictly decreasing over 1025 slopes"
    );
}

#[test]
fn criterion_09_matrix_structure() {
    let slopes = farey::slopes_up_to_level(12);
    assert_eq!(slopes.len(), 4097);
    for t in &slopes {
        let rec = matrix::markoff_matrix(t);
        assert!(rec.m.det().is_one(), "t={t}");
        assert!(matrix::structure_check(&rec), "t={t}");
        assert_eq!(
            matrix::markoff_number_from_trace(t),
            tree::markoff_number(t),
            "t={t}"
        );
    }
    println!(
        "[PASS] criterion 9: entry structure, inequalities, and trace/3 on {} slopes",
        slopes.len()
    );
}

#[test]
fn criterion_10_forms() {
    let records = tree::enumerate_numbers(&n(10_000));
    assert_eq!(records.len(), 21);
    for rec in &records {
        let f = form::markoff_form(&rec.triple);
        let delta = form::discriminant(&f).unwrap();
        assert_eq!(delta, 9u32 * &rec.m * &rec.m - 4u32, "m={}", rec.m);
        assert!(form::markoff_ratio_check(&f), "m={}", rec.m);
        let min = form::verify_minimum(&f, 50);
        assert_eq!(min.min, rec.m, "m={}", rec.m);
        assert_eq!(min.attaining, (1, 0), "m={}", rec.m);
        assert!(min.equals_m);
    }
    println!(
        "[PASS] criterion 10: discriminant, box minimum, and ratio bound on 21 forms (m <= 10^4)"
    );
}

/// Odd prime powers p^e ≤ limit and their doubles, p odd.
fn qualifying_moduli(limit: u64) -> Vec<u64> {
    let primes = arith::sieve_primes(limit);
    let mut out = Vec::new();
    for &p in primes.iter().filter(|&&p| p % 2 == 1) {
        let mut pe = p;
        loop {
            out.push(pe);
            if 2 * pe <= limit {
                out.push(2 * pe);
            }
            match pe.checked_mul(p) {
                Some(next) if next <= limit => pe = next,
                _ => break,
            }
        }
    }
    out.sort_unstable();
    out
}

#[test]
fn criterion_11_root_count_sweep() {
    // (a) every qualifying modulus up to 10^5, every coprime l <= 20: at most
    // one root of x² + l in (0, m/2). One residue pass per modulus covers all l.
    let moduli = qualifying_moduli(100_000);
    for &m in &moduli {
        if m <= 100 {
            for l in 1..=20u64 {
                if l.gcd(&m) != 1 {
                    continue;
                }
                let count = (1..)
                    .take_while(|x| 2 * x < m)
                    .filter(|&x| (x * x + l) % m == 0)
                    .count();
                assert!(count <= 1, "m={m} l={l}");
            }
        } else {
            let mut counts = [0u8; 21];
            let mut r = 0u64;
            for x in 1.. {
                if 2 * x >= m {
                    break;
                }
                r += 2 * x - 1;
                if r >= m {
                    r -= m;
                }
                let l = m - r;
                if l <= 20 && l.gcd(&m) == 1 {
                    counts[l as usize] += 1;
                    assert!(counts[l as usize] <= 1, "m={m} l={l}");
                }
            }
        }
    }

    // (b) the lifted path agrees with brute force at l = 1: exhaustively for
    // exponents >= 2, and on a deterministic prime sample up to 10^7.
    let mut agree_set: Vec<u64> = Vec::new();
    for &p in arith::sieve_primes(3163).iter().filter(|&&p| p % 2 == 1) {
        let mut pe = p.checked_mul(p).unwrap();
        while pe <= 10_000_000 {
            agree_set.push(pe);
            if 2 * pe <= 10_000_000 {
                agree_set.push(2 * pe);
            }
            match pe.checked_mul(p) {
                Some(next) if next <= 10_000_000 => pe = next,
                _ => break,
            }
        }
    }
    let primes_to_7 = arith::sieve_primes(10_000_000);
    for (i, &p) in primes_to_7.iter().enumerate().filter(|&(_, &p)| p % 2 == 1) {
        if p <= 10_000 || i % 997 == 0 {
            agree_set.push(p);
            if 2 * p <= 10_000_000 {
                agree_set.push(2 * p);
            }
        }
    }
    agree_set.sort_unstable();
    agree_set.dedup();
    let one = BigUint::one();
    for &m in &agree_set {
        let brute = unicity::count_roots_with_cutoff(&one, &n(m), u64::MAX).unwrap();
        let lifted = unicity::count_roots_with_cutoff(&one, &n(m), 0).unwrap();
        assert_eq!(brute, lifted, "m={m}");
        assert!(brute.len() <= 1, "m={m}");
    }
    println!(
        "[PASS] criterion 11: root counts <= 1 on {} moduli (l <= 20); lift agrees with brute force on {} moduli",
        moduli.len(),
        agree_set.len()
    );
}

/// Independent classifier for criterion 12: trial division only.
fn oracle_class(v: u64) -> Option<(u64, u32, bool)> {
    let mut rest = v;
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d) {
            let mut e = 0;
            while rest.is_multiple_of(d) {
                rest /= d;
                e += 1;
            }
            factors.push((d, e));
        }
        d += 1;
    }
    if rest > 1 {
        factors.push((rest, 1));
    }
    match factors.as_slice() {
        [(p, e)] if *p != 2 => Some((*p, *e, false)),
        [(2, 1), (p, e)] => Some((*p, *e, true)),
        _ => None,
    }
}

#[test]
fn criterion_12_certification_pipeline_to_10_12() {
    let start = Instant::now();
    let bound = n(1_000_000_000_000);
    let report = unicity::verify_unicity(&bound);
    assert!(report.violations.is_empty(), "{:?}", report.violations);
    assert!(report.duplicates.is_empty());

    // independent classification of every enumerated number
    let expected_certified: BTreeSet<u64> = tree::enumerate_numbers(&bound)
        .iter()
        .map(|r| r.m.to_u64().unwrap())
        .filter(|&m| oracle_class(m).is_some())
        .collect();
    let got_certified: BTreeSet<u64> = report
        .certificates
        .iter()
        .map(|c| c.m.to_u64().unwrap())
        .collect();
    assert_eq!(got_certified, expected_certified);
    assert_eq!(
        report.certificates.len() + report.hypothesis_unmet.len(),
        report.total_numbers
    );

    for cert in &report.certificates {
        assert_eq!(cert.root_count, 1);
        // u is a root of x² + 1 in the open half-interval
        assert!(((&cert.u * &cert.u + 1u32) % &cert.m).is_zero());
        assert!(cert.u > BigUint::zero() && 2u32 * &cert.u < cert.m);
        assert_eq!(cert.u, character::u_of(&cert.slope));
        assert_eq!(cert.class.value(), cert.m);
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!(
        "[PASS] criterion 12: {} of {} numbers <= 10^12 certified, 0 duplicates, in {elapsed:?}",
        report.certificates.len(),
        report.total_numbers
    );
}

#[test]
fn criterion_13_congruences_to_10_12() {
    let records = tree::enumerate_numbers(&n(1_000_000_000_000));
    for rec in &records {
        if rec.m.is_even() {
            assert_eq!((&rec.m % 32u32).to_u32(), Some(2), "m={}", rec.m);
        } else {
            assert_eq!((&rec.m % 4u32).to_u32(), Some(1), "m={}", rec.m);
        }
    }
    println!(
        "[PASS] criterion 13: odd == 1 (mod 4) and even == 2 (mod 32) over {} numbers <= 10^12",
        records.len()
    );
}
