//! Big-integer arithmetic helpers: gcd, modular inverses, primality testing,
//! prime-power classification, and small-scale factorization.
//!
//! Primality is deterministic below 2^64 (fixed Miller-Rabin witness set) and
//! probabilistic above, with a configurable round count. Witnesses for the
//! probabilistic test are drawn from a ChaCha stream seeded by the input so
//! results are reproducible run to run.

use num_bigint::{BigInt, BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::LazyLock;

use crate::{Error, Result};

/// Default Miller-Rabin round count for inputs ≥ 2^64 (error < 4^-40).
pub const DEFAULT_MR_ROUNDS: u32 = 40;

/// Witness set proving primality for every n < 2^64.
const MR_WITNESSES_U64: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

static SMALL_PRIMES: LazyLock<Vec<u64>> = LazyLock::new(|| sieve_primes(1000));

/// Primes up to and including `limit`, by sieve of Eratosthenes.
pub fn sieve_primes(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    for p in 2..=n {
        if !composite[p] {
            primes.push(p as u64);
            let mut q = p * p;
            while q <= n {
                composite[q] = true;
                q += p;
            }
        }
    }
    primes
}

/// Greatest common divisor; gcd(0, 0) = 0.
pub fn gcd(a: &BigUint, b: &BigUint) -> BigUint {
    a.gcd(b)
}

/// Extended Euclid: (g, x, y) with a·x + b·y = g = gcd(a, b).
pub fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut r0, mut r1) = (a.clone(), b.clone());
    let (mut s0, mut s1) = (BigInt::one(), BigInt::zero());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while !r1.is_zero() {
        let q = &r0 / &r1;
        let r = &r0 - &q * &r1;
        r0 = std::mem::replace(&mut r1, r);
        let s = &s0 - &q * &s1;
        s0 = std::mem::replace(&mut s1, s);
        let t = &t0 - &q * &t1;
        t0 = std::mem::replace(&mut t1, t);
    }
    if r0 < BigInt::zero() {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

/// Inverse of `a` modulo `m`: the x in [0, m) with a·x ≡ 1 (mod m).
pub fn mod_inv(a: &BigUint, m: &BigUint) -> Result<BigUint> {
    assert!(!m.is_zero(), "modulus must be ≥ 1");
    let am = BigInt::from(a % m);
    let mi = BigInt::from(m.clone());
    let (g, x, _) = ext_gcd(&am, &mi);
    if !g.is_one() {
        return Err(Error::NotInvertible {
            value: a.clone(),
            modulus: m.clone(),
        });
    }
    let r = ((x % &mi) + &mi) % &mi;
    Ok(r.to_biguint().expect("reduced residue is non-negative"))
}

fn mulmod_u64(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod_u64(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod_u64(acc, base, m);
        }
        base = mulmod_u64(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin for u64 inputs.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &[2u64, 3, 5, 7, 11, 13] {
        if n == p {
            return true;
        }
        if n.is_multiple_of(p) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &MR_WITNESSES_U64 {
        if a % n == 0 {
            continue;
        }
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn chacha_seed_for(n: &BigUint) -> [u8; 32] {
    let bytes = n.to_bytes_le();
    let mut seed = [0u8; 32];
    for (i, b) in bytes.iter().enumerate() {
        seed[i % 32] ^= *b;
    }
    seed
}

fn miller_rabin_big(n: &BigUint, rounds: u32) -> bool {
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let n_minus_1 = n - &one;
    let s = n_minus_1.trailing_zeros().expect("n is odd and > 2");
    let d = &n_minus_1 >> s;
    let mut rng = ChaCha8Rng::from_seed(chacha_seed_for(n));
    'round: for _ in 0..rounds {
        let base = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = base.modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = x.modpow(&two, n);
            if x == n_minus_1 {
                continue 'round;
            }
        }
        return false;
    }
    true
}

/// Primality test with the default round count.
pub fn is_probable_prime(n: &BigUint) -> bool {
    is_probable_prime_rounds(n, DEFAULT_MR_ROUNDS)
}

/// Primality test: deterministic below 2^64, strong-pseudoprime test with
/// `rounds` reproducible witnesses above.
pub fn is_probable_prime_rounds(n: &BigUint, rounds: u32) -> bool {
    if let Some(n64) = n.to_u64() {
        return is_prime_u64(n64);
    }
    // n ≥ 2^64 here, so a small-prime divisor means composite.
    for &p in SMALL_PRIMES.iter() {
        if (n % p).is_zero() {
            return false;
        }
    }
    miller_rabin_big(n, rounds)
}

/// Classification of n as p^k or 2·p^k for an odd (probable) prime p, k ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrimePowerClass {
    pub p: BigUint,
    pub n: u32,
    pub twice: bool,
}

impl PrimePowerClass {
    /// The represented value: p^n, doubled when `twice` is set.
    pub fn value(&self) -> BigUint {
        let pw = self.p.pow(self.n);
        if self.twice {
            pw * 2u32
        } else {
            pw
        }
    }
}

fn iroot_u64(q: u64, k: u32) -> u64 {
    if k == 1 {
        return q;
    }
    let mut r = (q as f64).powf(1.0 / k as f64).round() as u64;
    // f64 guess can be off by one in either direction
    while r > 1 && r.checked_pow(k).is_none_or(|v| v > q) {
        r -= 1;
    }
    while (r + 1).checked_pow(k).is_some_and(|v| v <= q) {
        r += 1;
    }
    r
}

fn classify_odd_u64(q: u64) -> Option<(u64, u32)> {
    debug_assert!(q % 2 == 1 && q > 1);
    // Factor-extraction route: a small prime factor settles the question.
    for &p in SMALL_PRIMES.iter().skip(1) {
        if p * p > q {
            break;
        }
        if q.is_multiple_of(p) {
            let mut rest = q;
            let mut e = 0u32;
            while rest.is_multiple_of(p) {
                rest /= p;
                e += 1;
            }
            return if rest == 1 { Some((p, e)) } else { None };
        }
    }
    if is_prime_u64(q) {
        return Some((q, 1));
    }
    // No factor below 1000, so any prime-power base exceeds 1000 and k ≤ 6.
    for k in 2..=6u32 {
        let r = iroot_u64(q, k);
        if r.checked_pow(k) == Some(q) && is_prime_u64(r) {
            return Some((r, k));
        }
    }
    None
}

fn classify_odd_big(q: &BigUint, rounds: u32) -> Option<(BigUint, u32)> {
    for &p in SMALL_PRIMES.iter().skip(1) {
        if (q % p).is_zero() {
            let pb = BigUint::from(p);
            let mut rest = q.clone();
            let mut e = 0u32;
            while (&rest % p).is_zero() {
                rest /= p;
                e += 1;
            }
            return if rest.is_one() { Some((pb, e)) } else { None };
        }
    }
    // k-th-root scan: q = p^k forces p to show up as an exact integer root.
    let max_k = q.bits() as u32;
    for k in 1..=max_k {
        let r = q.nth_root(k);
        if r <= BigUint::one() {
            break;
        }
        if r.pow(k) == *q && is_probable_prime_rounds(&r, rounds) {
            return Some((r, k));
        }
    }
    None
}

/// Classify n as an odd prime power or twice one, with the default rounds.
pub fn classify_prime_power(n: &BigUint) -> Option<PrimePowerClass> {
    classify_prime_power_rounds(n, DEFAULT_MR_ROUNDS)
}

/// Classify n = p^k or 2·p^k (p odd prime, k ≥ 1); None otherwise.
pub fn classify_prime_power_rounds(n: &BigUint, rounds: u32) -> Option<PrimePowerClass> {
    if n.is_zero() || n.is_one() {
        return None;
    }
    let twice = n.is_even();
    let q = if twice { n >> 1 } else { n.clone() };
    if q.is_one() || q.is_even() {
        // n = 2 has no odd part; n ≡ 0 (mod 4) has too many factors of two.
        return None;
    }
    let found = match q.to_u64() {
        Some(q64) => classify_odd_u64(q64).map(|(p, e)| (BigUint::from(p), e)),
        None => classify_odd_big(&q, rounds),
    };
    found.map(|(p, n)| PrimePowerClass { p, n, twice })
}

fn pollard_rho_u64(n: u64) -> u64 {
    // n odd composite, no factor below 1000. Floyd cycle-finding with a
    // deterministic parameter sweep.
    for c in 1..64u64 {
        let f = |x: u64| (mulmod_u64(x, x, n) + c) % n;
        let mut x = 2u64;
        let mut y = 2u64;
        let mut d = 1u64;
        let mut count = 0u64;
        while d == 1 {
            x = f(x);
            y = f(f(y));
            d = x.abs_diff(y).gcd(&n);
            count += 1;
            if count > 1 << 24 {
                break;
            }
        }
        if d != n && d != 1 {
            return d;
        }
    }
    panic!("factorization failed for {n}");
}

fn factor_u64(mut n: u64, out: &mut Vec<(BigUint, u32)>) {
    let mut small = Vec::new();
    for &p in SMALL_PRIMES.iter() {
        while n.is_multiple_of(p) {
            small.push(p);
            n /= p;
        }
    }
    let mut stack = vec![n];
    let mut rest = Vec::new();
    while let Some(m) = stack.pop() {
        if m == 1 {
            continue;
        }
        if is_prime_u64(m) {
            rest.push(m);
            continue;
        }
        let d = pollard_rho_u64(m);
        stack.push(d);
        stack.push(m / d);
    }
    small.extend(rest);
    small.sort_unstable();
    for p in small {
        match out.last_mut() {
            Some((q, e)) if *q == BigUint::from(p) => *e += 1,
            _ => out.push((BigUint::from(p), 1)),
        }
    }
}

/// Full factorization when feasible: complete for n < 2^64; for larger n,
/// small-prime stripping plus a primality check, giving up (None) on hard
/// composites.
pub fn factorize(n: &BigUint) -> Option<Vec<(BigUint, u32)>> {
    if n.is_zero() {
        return None;
    }
    if n.is_one() {
        return Some(Vec::new());
    }
    if let Some(n64) = n.to_u64() {
        let mut out = Vec::new();
        factor_u64(n64, &mut out);
        return Some(out);
    }
    let mut out: Vec<(BigUint, u32)> = Vec::new();
    let mut rest = n.clone();
    for &p in SMALL_PRIMES.iter() {
        let mut e = 0u32;
        while (&rest % p).is_zero() {
            rest /= p;
            e += 1;
        }
        if e > 0 {
            out.push((BigUint::from(p), e));
        }
    }
    if rest.is_one() {
        return Some(out);
    }
    if let Some(r64) = rest.to_u64() {
        factor_u64(r64, &mut out);
        out.sort();
        return Some(out);
    }
    if is_probable_prime(&rest) {
        out.push((rest, 1));
        return Some(out);
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(v: u64) -> BigUint {
        BigUint::from(v)
    }

    // Independent oracle: trial division up to the square root.
    fn trial_division_is_prime(v: u64) -> bool {
        if v < 2 {
            return false;
        }
        let mut d = 2u64;
        while d * d <= v {
            if v.is_multiple_of(d) {
                return false;
            }
            d += 1;
        }
        true
    }

    // Independent oracle: full trial-division factorization.
    fn trial_division_factor(mut v: u64) -> Vec<(u64, u32)> {
        let mut out = Vec::new();
        let mut d = 2u64;
        while d * d <= v {
            if v.is_multiple_of(d) {
                let mut e = 0;
                while v.is_multiple_of(d) {
                    v /= d;
                    e += 1;
                }
                out.push((d, e));
            }
            d += 1;
        }
        if v > 1 {
            out.push((v, 1));
        }
        out
    }

    fn classify_oracle(v: u64) -> Option<(u64, u32, bool)> {
        let f = trial_division_factor(v);
        match f.as_slice() {
            [(p, e)] if *p != 2 => Some((*p, *e, false)),
            [(2, 1), (p, e)] => Some((*p, *e, true)),
            _ => None,
        }
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(gcd(&n(12), &n(18)), n(6));
        assert_eq!(gcd(&n(5), &n(13)), n(1));
        assert_eq!(gcd(&n(0), &n(7)), n(7));
        assert_eq!(gcd(&n(0), &n(0)), n(0));
    }

    #[test]
    fn gcd_divides_and_is_greatest() {
        for a in 0..60u64 {
            for b in 0..60u64 {
                let g = gcd(&n(a), &n(b));
                if !g.is_zero() {
                    assert!((n(a) % &g).is_zero());
                    assert!((n(b) % &g).is_zero());
                }
                for d in 1..=60u64 {
                    if a % d == 0 && b % d == 0 {
                        assert!(
                            (&g % d).is_zero(),
                            "common divisor {d} of ({a},{b}) must divide {g}"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn mod_inv_examples() {
        // brute-force oracle over residues
        let inv_brute = |a: u64, m: u64| (0..m).find(|x| (a * x) % m == 1);
        assert_eq!(inv_brute(5, 13), Some(8)); // 5·8 = 40 ≡ 1 (mod 13)
        assert_eq!(mod_inv(&n(5), &n(13)).unwrap(), n(8));
        assert_eq!(mod_inv(&n(1), &n(7)).unwrap(), n(1));
        assert!(matches!(
            mod_inv(&n(4), &n(8)),
            Err(Error::NotInvertible { .. })
        ));
    }

    #[test]
    fn mod_inv_agrees_with_brute_force() {
        for m in 1..80u64 {
            for a in 0..m {
                let brute = (0..m).find(|x| (a * x) % m == 1 || (m == 1 && *x == 0));
                match mod_inv(&n(a), &n(m)) {
                    Ok(x) => {
                        let xv = x.to_u64().unwrap();
                        assert_eq!(Some(xv), brute, "a={a} m={m}");
                    }
                    Err(_) => assert_eq!(brute, None, "a={a} m={m}"),
                }
            }
        }
    }

    #[test]
    fn primality_examples() {
        assert!(is_probable_prime(&n(29)));
        assert!(!is_probable_prime(&n(1)));
        // the oracle decides 7561: no divisor up to its square root
        assert!(trial_division_is_prime(7561));
        assert!(is_probable_prime(&n(7561)));
    }

    #[test]
    fn primality_agrees_with_trial_division() {
        for v in 0..5000u64 {
            assert_eq!(is_prime_u64(v), trial_division_is_prime(v), "v={v}");
        }
    }

    #[test]
    fn big_primality_is_deterministic() {
        // 2^89 - 1 is a Mersenne prime; 2^90 + 1 is divisible by 5.
        let p = (BigUint::one() << 89) - 1u32;
        assert!(is_probable_prime(&p));
        assert!(is_probable_prime(&p));
        let c = (BigUint::one() << 90) + 1u32;
        assert!(!is_probable_prime(&c));
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify_prime_power(&n(169)),
            Some(PrimePowerClass {
                p: n(13),
                n: 2,
                twice: false
            })
        );
        assert_eq!(
            classify_prime_power(&n(34)),
            Some(PrimePowerClass {
                p: n(17),
                n: 1,
                twice: true
            })
        );
        assert_eq!(classify_prime_power(&n(6466)), None); // 2·53·61
        assert_eq!(classify_prime_power(&n(1)), None);
        assert_eq!(classify_prime_power(&n(2)), None); // no odd part
        assert_eq!(classify_prime_power(&n(4)), None);
        assert_eq!(
            classify_prime_power(&n(2 * 27)),
            Some(PrimePowerClass {
                p: n(3),
                n: 3,
                twice: true
            })
        );
    }

    #[test]
    fn classify_agrees_with_trial_division_to_a_million() {
        for v in 1..=1_000_000u64 {
            let got = classify_prime_power(&n(v)).map(|c| (c.p.to_u64().unwrap(), c.n, c.twice));
            assert_eq!(got, classify_oracle(v), "v={v}");
        }
    }

    #[test]
    fn classify_value_round_trip() {
        for v in [169u64, 34, 29, 2 * 343, 3125, 2 * 3125] {
            let c = classify_prime_power(&n(v)).unwrap();
            assert_eq!(c.value(), n(v));
        }
    }

    #[test]
    fn classify_big_powers() {
        let p = BigUint::from(1_000_003u64);
        let q = p.pow(7);
        let c = classify_prime_power(&q).unwrap();
        assert_eq!((c.p, c.n, c.twice), (p.clone(), 7, false));
        let c2 = classify_prime_power(&(q * 2u32)).unwrap();
        assert_eq!((c2.p, c2.n, c2.twice), (p, 7, true));
    }

    #[test]
    fn factorize_small() {
        assert_eq!(factorize(&n(1)).unwrap(), vec![]);
        assert_eq!(
            factorize(&n(610)).unwrap(),
            vec![(n(2), 1), (n(5), 1), (n(61), 1)]
        );
        assert_eq!(
            factorize(&n(6466)).unwrap(),
            vec![(n(2), 1), (n(53), 1), (n(61), 1)]
        );
        for v in 2..2000u64 {
            let f = factorize(&n(v)).unwrap();
            let back: BigUint = f.iter().map(|(p, e)| p.pow(*e)).product();
            assert_eq!(back, n(v));
            assert_eq!(
                f.iter()
                    .map(|(p, e)| (p.to_u64().unwrap(), *e))
                    .collect::<Vec<_>>(),
                trial_division_factor(v)
            );
        }
    }

    #[test]
    fn factorize_semiprime() {
        // 1000003 · 1000033
        let v = n(1_000_003) * n(1_000_033);
        let f = factorize(&v).unwrap();
        assert_eq!(f, vec![(n(1_000_003), 1), (n(1_000_033), 1)]);
    }
}
