//! Root counting for x² + l ≡ 0 (mod m), uniqueness certificates for Markoff
//! numbers that are prime powers or twice prime powers, and duplicate
//! detection across the enumerated tree.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::collections::BTreeMap;

use crate::arith::{self, PrimePowerClass};
use crate::farey::Slope;
use crate::{character, tree, Error, Result};

/// Brute-force/structured switchover for root counting.
pub const DEFAULT_BRUTE_CUTOFF: u64 = 10_000_000;

/// Square root of `a` mod an odd prime `p`, if one exists (Tonelli-Shanks).
fn sqrt_mod_prime(a: &BigUint, p: &BigUint) -> Option<BigUint> {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let a = a % p;
    if a.is_zero() {
        return Some(BigUint::zero());
    }
    let legendre_exp = (p - &one) >> 1;
    if a.modpow(&legendre_exp, p) != one {
        return None;
    }
    if (p % 4u32).to_u32() == Some(3) {
        let e = (p + &one) >> 2;
        return Some(a.modpow(&e, p));
    }
    // p ≡ 1 (mod 4): full Tonelli-Shanks.
    let p_minus_1 = p - &one;
    let s = p_minus_1.trailing_zeros().expect("p is odd");
    let q = &p_minus_1 >> s;
    let mut z = two.clone();
    while z.modpow(&legendre_exp, p) == one {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&q, p);
    let mut t = a.modpow(&q, p);
    let mut r = a.modpow(&((&q + &one) >> 1), p);
    while !t.is_one() {
        // least i with t^(2^i) = 1
        let mut i = 0u64;
        let mut probe = t.clone();
        while !probe.is_one() {
            probe = probe.modpow(&two, p);
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), p);
        m = i;
        c = b.modpow(&two, p);
        t = t * &c % p;
        r = r * b % p;
    }
    Some(r)
}

/// Lift x with x² + l ≡ 0 (mod p^e) through successive powers up to p^n.
fn hensel_lift(mut x: BigUint, l: &BigUint, p: &BigUint, n: u32) -> BigUint {
    let mut pe = p.clone();
    for _ in 1..n {
        let next = &pe * p;
        let fx = (&x * &x + l) % &next;
        let dx = 2u32 * &x % &next;
        let dinv = arith::mod_inv(&dx, &next).expect("2x is invertible mod odd prime powers");
        let correction = fx * dinv % &next;
        x = (&x + &next - correction) % &next;
        pe = next;
    }
    x
}

fn count_roots_brute(l: u64, m: u64) -> Vec<BigUint> {
    let mut roots = Vec::new();
    let mut r = 0u64; // x² mod m, updated incrementally
    for x in 1.. {
        if 2 * x >= m {
            break;
        }
        // (x)² = (x-1)² + 2x − 1
        r += 2 * x - 1;
        while r >= m {
            r -= m;
        }
        if (r + l % m).is_multiple_of(m) {
            roots.push(BigUint::from(x));
        }
    }
    roots
}

fn count_roots_structured(l: &BigUint, m: &BigUint, class: &PrimePowerClass) -> Vec<BigUint> {
    let p = &class.p;
    let pe = p.pow(class.n);
    let a = (&pe - l % &pe) % &pe; // −l mod p^n
    let Some(root_mod_p) = sqrt_mod_prime(&(&a % p), p) else {
        return Vec::new();
    };
    if root_mod_p.is_zero() {
        return Vec::new(); // would need p | l, excluded by coprimality
    }
    let root = hensel_lift(root_mod_p, l, p, class.n);
    debug_assert!(((&root * &root + l) % &pe).is_zero());
    let root = if class.twice {
        // pick the representative mod 2p^n with the parity forced by l
        if root.is_even() == l.is_even() {
            root
        } else {
            root + &pe
        }
    } else {
        root
    };
    let canonical = std::cmp::min(root.clone(), m - &root);
    debug_assert!(((&canonical * &canonical + l) % m).is_zero());
    vec![canonical]
}

/// All x in (0, m/2) with x² + l ≡ 0 (mod m), ascending. Brute force up to
/// `cutoff`; Tonelli-Shanks plus Hensel lifting for larger prime-power (or
/// twice-prime-power) moduli.
pub fn count_roots_with_cutoff(l: &BigUint, m: &BigUint, cutoff: u64) -> Result<Vec<BigUint>> {
    if !arith::gcd(l, m).is_one() {
        return Err(Error::NotCoprime {
            l: l.clone(),
            m: m.clone(),
        });
    }
    if let Some(m64) = m.to_u64() {
        // the scan accumulator needs headroom below 2^63; anything larger
        // could not be scanned in reasonable time anyway
        if m64 <= cutoff.min(1 << 62) {
            let l64 = (l % m).to_u64().expect("residue fits");
            return Ok(count_roots_brute(l64, m64));
        }
    }
    match arith::classify_prime_power(m) {
        Some(class) => Ok(count_roots_structured(l, m, &class)),
        None => Err(Error::UnsupportedModulus(m.clone())),
    }
}

/// [`count_roots_with_cutoff`] at the default cutoff.
pub fn count_roots(l: &BigUint, m: &BigUint) -> Result<Vec<BigUint>> {
    count_roots_with_cutoff(l, m, DEFAULT_BRUTE_CUTOFF)
}

/// Witness that a prime-power Markoff number determines its slope: the unique
/// root of x² + 1 (mod m) in (0, m/2) coincides with the character u_t.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnicityCertificate {
    pub m: BigUint,
    pub class: PrimePowerClass,
    pub u: BigUint,
    pub slope: Slope,
    pub root_count: usize,
}

impl UnicityCertificate {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m.to_string(),
            "class": {
                "p": self.class.p.to_string(),
                "n": self.class.n,
                "twice": self.class.twice,
            },
            "u": self.u.to_string(),
            "slope": self.slope.to_string(),
            "root_count": self.root_count,
        })
    }
}

/// Certify the slope's Markoff number if it meets the prime-power hypothesis;
/// `Ok(None)` when the hypothesis is unmet (this includes m = 1 and m = 2).
pub fn certify_unique(t: &Slope) -> Result<Option<UnicityCertificate>> {
    certify_unique_rounds(t, arith::DEFAULT_MR_ROUNDS)
}

pub fn certify_unique_rounds(t: &Slope, rounds: u32) -> Result<Option<UnicityCertificate>> {
    let m = tree::markoff_number(t);
    let Some(class) = arith::classify_prime_power_rounds(&m, rounds) else {
        return Ok(None);
    };
    let roots = count_roots(&BigUint::one(), &m)?;
    if roots.len() > 1 {
        return Err(Error::CertificateViolation {
            m,
            reason: format!("{} roots of x²+1 in (0, m/2)", roots.len()),
        });
    }
    let u = character::u_of(t);
    if !roots.contains(&u) {
        return Err(Error::CertificateViolation {
            m,
            reason: format!("character u = {u} is not among the roots {roots:?}"),
        });
    }
    Ok(Some(UnicityCertificate {
        m,
        class,
        u,
        slope: t.clone(),
        root_count: roots.len(),
    }))
}

/// Group enumerated Markoff numbers ≤ bound by value and return the groups
/// attained by more than one slope. Conjecturally always empty.
pub fn find_duplicates(bound: &BigUint) -> BTreeMap<BigUint, Vec<Slope>> {
    find_duplicates_threaded(bound, 1)
}

pub fn find_duplicates_threaded(bound: &BigUint, threads: usize) -> BTreeMap<BigUint, Vec<Slope>> {
    tree::enumerate_numbers_threaded(bound, threads)
        .into_iter()
        .filter(|rec| rec.slopes.len() > 1)
        .map(|rec| (rec.m, rec.slopes))
        .collect()
}

/// Outcome of the full certification pipeline below a bound.
#[derive(Debug, Clone)]
pub struct UnicityReport {
    pub bound: BigUint,
    pub rounds: u32,
    pub total_numbers: usize,
    pub certificates: Vec<UnicityCertificate>,
    pub hypothesis_unmet: Vec<BigUint>,
    pub duplicates: BTreeMap<BigUint, Vec<Slope>>,
    pub violations: Vec<String>,
}

impl UnicityReport {
    pub fn passed(&self) -> bool {
        self.duplicates.is_empty() && self.violations.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bound": self.bound.to_string(),
            "primality_rounds": self.rounds,
            "total_numbers": self.total_numbers,
            "certified": self.certificates.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "hypothesis_unmet": self.hypothesis_unmet.iter().map(|m| m.to_string()).collect::<Vec<_>>(),
            "duplicates": self
                .duplicates
                .iter()
                .map(|(m, slopes)| {
                    json!({
                        "m": m.to_string(),
                        "slopes": slopes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect::<Vec<_>>(),
            "violations": self.violations,
        })
    }
}

/// Enumerate to `bound`, certify every number meeting the hypothesis, and
/// cross-check against the duplicate search.
pub fn verify_unicity(bound: &BigUint) -> UnicityReport {
    verify_unicity_threaded(bound, 1, arith::DEFAULT_MR_ROUNDS)
}

pub fn verify_unicity_threaded(bound: &BigUint, threads: usize, rounds: u32) -> UnicityReport {
    let records = tree::enumerate_numbers_threaded(bound, threads);
    let mut certificates = Vec::new();
    let mut hypothesis_unmet = Vec::new();
    let mut violations = Vec::new();
    let mut duplicates = BTreeMap::new();
    for rec in &records {
        if rec.slopes.len() > 1 {
            duplicates.insert(rec.m.clone(), rec.slopes.clone());
        }
        match certify_unique_rounds(&rec.slopes[0], rounds) {
            Ok(Some(cert)) => certificates.push(cert),
            Ok(None) => hypothesis_unmet.push(rec.m.clone()),
            Err(e) => violations.push(e.to_string()),
        }
    }
    UnicityReport {
        bound: bound.clone(),
        rounds,
        total_numbers: records.len(),
        certificates,
        hypothesis_unmet,
        duplicates,
        violations,
    }
}
