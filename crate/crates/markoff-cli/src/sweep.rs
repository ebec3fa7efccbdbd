//! The cross-module invariant sweep behind `markoff verify`: every identity
//! the library promises, re-checked over a slope range, with per-invariant
//! counts and the witnessing slope on failure.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};
use std::cmp::Ordering;

use markoff::farey::{self, Slope};
use markoff::matrix::Mat2;
use markoff::{arith, character, form, matrix, tree};

pub enum Scope {
    Level(u32),
    Bound(BigUint),
}

pub struct SweepReport {
    pub lines: Vec<String>,
    pub failures: Vec<String>,
}

struct Check {
    name: &'static str,
    count: usize,
}

impl SweepReport {
    fn record(&mut self, check: &Check) {
        self.lines
            .push(format!("{}: {} checked", check.name, check.count));
    }
}

fn value_sorted_slopes(scope: &Scope, threads: usize) -> Vec<Slope> {
    let mut slopes = match scope {
        Scope::Level(l) => farey::slopes_up_to_level(*l),
        Scope::Bound(b) => {
            let mut out = Vec::new();
            for rec in tree::enumerate_numbers_threaded(b, threads) {
                out.extend(rec.slopes);
            }
            out
        }
    };
    slopes.sort();
    slopes
}

pub fn run(scope: &Scope, threads: usize) -> SweepReport {
    let mut report = SweepReport {
        lines: Vec::new(),
        failures: Vec::new(),
    };
    let slopes = value_sorted_slopes(scope, threads);
    let interior: Vec<&Slope> = slopes.iter().filter(|t| !t.is_root()).collect();

    // pairs: the root pair plus each interior slope against its descents
    let mut pairs = vec![(Slope::zero(), Slope::infinity())];
    for t in &interior {
        let (r, s) = farey::direct_descents(t).expect("interior slope");
        pairs.push((r, (*t).clone()));
        pairs.push(((*t).clone(), s));
    }

    let mut equation = Check {
        name: "triple equation and pairwise coprimality",
        count: 0,
    };
    for t in &interior {
        equation.count += 1;
        let st = tree::triple_at(t).expect("interior slope");
        let (a, b, c) = st.values();
        if !tree::is_markoff_triple(a, b, c) {
            report
                .failures
                .push(format!("{} at slope {t}", equation.name));
            continue;
        }
        if !(arith::gcd(a, b).is_one() && arith::gcd(b, c).is_one() && arith::gcd(a, c).is_one()) {
            report
                .failures
                .push(format!("{} at slope {t}", equation.name));
        }
    }
    report.record(&equation);

    let mut differences = Check {
        name: "character difference identities",
        count: 0,
    };
    let mut products = Check {
        name: "neighbor product identities",
        count: 0,
    };
    for t in &interior {
        let ft = farey::FareyTriple::of(t).expect("interior slope");
        differences.count += 1;
        if !character::check_difference_identities(&ft) {
            report
                .failures
                .push(format!("{} at slope {t}", differences.name));
        }
        products.count += 1;
        if !character::check_product_identities(&ft) {
            report
                .failures
                .push(format!("{} at slope {t}", products.name));
        }
    }
    report.record(&differences);
    report.record(&products);

    let mut residue = Check {
        name: "u² + 1 divisible by m, u in the open half-interval",
        count: 0,
    };
    for t in &interior {
        residue.count += 1;
        let ch = character::character(t);
        let exact = (&ch.u * &ch.u + 1u32) % &ch.m == BigUint::from(0u32);
        let interior_bounds = ch.u > BigUint::from(0u32) && 2u32 * &ch.u < ch.m;
        if !(exact && interior_bounds) {
            report
                .failures
                .push(format!("{} at slope {t}", residue.name));
        }
    }
    report.record(&residue);

    let mut monotonic = Check {
        name: "u/m strictly increasing with the slope",
        count: 0,
    };
    for w in slopes.windows(2) {
        monotonic.count += 1;
        let a = character::character(&w[0]);
        let b = character::character(&w[1]);
        if a.u * &b.m >= b.u * &a.m {
            report
                .failures
                .push(format!("{} at slopes {} < {}", monotonic.name, w[0], w[1]));
        }
    }
    report.record(&monotonic);

    let mut structure = Check {
        name: "matrix entry structure and inequalities",
        count: 0,
    };
    let mut trace_rule = Check {
        name: "trace/3 equals the tree value",
        count: 0,
    };
    let mut alt_shape = Check {
        name: "alternative generator family shape",
        count: 0,
    };
    let mut rho_mono = Check {
        name: "index a/c strictly decreasing",
        count: 0,
    };
    let mut prev_rho: Option<(BigInt, BigInt)> = None;
    for t in &slopes {
        let rec = matrix::markoff_matrix(t);
        structure.count += 1;
        let positive = rec.m.a > BigInt::from(0)
            && rec.m.b > BigInt::from(0)
            && rec.m.c > BigInt::from(0)
            && rec.m.d > BigInt::from(0);
        if !(rec.m.det().is_one() && positive && matrix::structure_check(&rec)) {
            report
                .failures
                .push(format!("{} at slope {t}", structure.name));
        }

        trace_rule.count += 1;
        if matrix::markoff_number_from_trace(t) != tree::markoff_number(t) {
            report
                .failures
                .push(format!("{} at slope {t}", trace_rule.name));
        }

        alt_shape.count += 1;
        let ch = character::character(t);
        let m = BigInt::from(ch.m.clone());
        let u = BigInt::from(ch.u.clone());
        let v = BigInt::from(ch.v.clone());
        let want = Mat2 {
            a: 2 * &m + &u,
            b: m.clone(),
            c: 2 * &m - &u - &v,
            d: &m - &u,
        };
        if matrix::alt_markoff_matrix(t) != want {
            report
                .failures
                .push(format!("{} at slope {t}", alt_shape.name));
        }

        let rho = matrix::rho(&rec.m).expect("Markoff matrices have positive c");
        if let Some(prev) = &prev_rho {
            rho_mono.count += 1;
            if matrix::frac_cmp(prev, &rho) != Ordering::Greater {
                report
                    .failures
                    .push(format!("{} at slope {t}", rho_mono.name));
            }
        }
        prev_rho = Some(rho);
    }
    report.record(&structure);
    report.record(&trace_rule);
    report.record(&alt_shape);
    report.record(&rho_mono);

    let mut commutator = Check {
        name: "commutator trace -2 on Farey pairs",
        count: 0,
    };
    let mut fricke = Check {
        name: "trace identities on Farey pairs",
        count: 0,
    };
    for (r, s) in &pairs {
        commutator.count += 1;
        match matrix::commutator_trace(r, s) {
            Ok(tr) if tr == BigInt::from(-2) => {}
            _ => report
                .failures
                .push(format!("{} at pair ({r}, {s})", commutator.name)),
        }
        fricke.count += 1;
        let mr = matrix::markoff_matrix(r).m;
        let ms = matrix::markoff_matrix(s).m;
        if !matrix::fricke_check(&mr, &ms).all_hold() {
            report
                .failures
                .push(format!("{} at pair ({r}, {s})", fricke.name));
        }
    }
    report.record(&commutator);
    report.record(&fricke);

    let mut forms = Check {
        name: "form discriminant, ratio bound, u agreement",
        count: 0,
    };
    let mut boxes = Check {
        name: "box minimum attained at (1, 0) for m <= 10^4",
        count: 0,
    };
    for t in &interior {
        forms.count += 1;
        let st = tree::triple_at(t).expect("interior slope");
        let f = form::markoff_form(&st.triple());
        let ch = character::character(t);
        let ok = form::discriminant(&f).is_ok() && form::markoff_ratio_check(&f) && f.u == ch.u;
        if !ok {
            report.failures.push(format!("{} at slope {t}", forms.name));
        }
        if f.m.to_u64().is_some_and(|m| m <= 10_000) {
            boxes.count += 1;
            let min = form::verify_minimum(&f, 50);
            if !(min.equals_m && min.attaining == (1, 0)) {
                report.failures.push(format!("{} at slope {t}", boxes.name));
            }
        }
    }
    report.record(&forms);
    report.record(&boxes);

    report
}
