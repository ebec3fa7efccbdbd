//! Indefinite binary quadratic forms attached to Markoff triples:
//! m·ξ² + (3m−2u)·ξη + (v−3u)·η², with discriminant 9m² − 4.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::tree::MarkoffTriple;
use crate::{arith, Error, Result};

/// The form coefficients together with the defining data (m ≥ m1 ≥ m2, u, v).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkoffForm {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub m: BigUint,
    pub m1: BigUint,
    pub m2: BigUint,
    pub u: BigUint,
    pub v: BigUint,
}

impl MarkoffForm {
    /// Evaluate the form at integer arguments.
    pub fn eval(&self, xi: &BigInt, eta: &BigInt) -> BigInt {
        &self.a * xi * xi + &self.b * xi * eta + &self.c * eta * eta
    }

    pub fn to_json(&self) -> Value {
        json!({
            "triple": [self.m.to_string(), self.m1.to_string(), self.m2.to_string()],
            "u": self.u.to_string(),
            "v": self.v.to_string(),
            "form": [self.a.to_string(), self.b.to_string(), self.c.to_string()],
            "delta": (9u32 * &self.m * &self.m - 4u32).to_string(),
        })
    }
}

/// Least non-negative u with u·m1 ≡ ±m2 (mod m), via modular inversion.
fn least_congruence_u(m: &BigUint, m1: &BigUint, m2: &BigUint) -> BigUint {
    if m.is_one() {
        return BigUint::zero();
    }
    let inv = arith::mod_inv(&(m1 % m), m).expect("triple elements are pairwise coprime");
    let plus = m2 % m * inv % m;
    let minus = (m - &plus) % m;
    plus.min(minus)
}

/// The Markoff form of a triple, ordered internally as m ≥ m1 ≥ m2.
pub fn markoff_form(triple: &MarkoffTriple) -> MarkoffForm {
    let m = triple.z().clone();
    let m1 = triple.y().clone();
    let m2 = triple.x().clone();
    let u = least_congruence_u(&m, &m1, &m2);
    let uu1 = &u * &u + 1u32;
    assert!((&uu1 % &m).is_zero(), "m must divide u²+1");
    let v = uu1 / &m;
    let mi = BigInt::from(m.clone());
    let ui = BigInt::from(u.clone());
    let vi = BigInt::from(v.clone());
    MarkoffForm {
        a: mi.clone(),
        b: 3 * &mi - 2 * &ui,
        c: vi - 3 * ui,
        m,
        m1,
        m2,
        u,
        v,
    }
}

/// b² − 4ac; must come out as 9m² − 4 or the construction is broken.
pub fn discriminant(f: &MarkoffForm) -> Result<BigUint> {
    let delta = &f.b * &f.b - 4 * &f.a * &f.c;
    let mi = BigInt::from(f.m.clone());
    let expected = 9 * &mi * &mi - 4;
    if delta != expected {
        return Err(Error::DiscriminantMismatch {
            found: delta,
            expected,
        });
    }
    Ok(delta.to_biguint().expect("9m²−4 is positive"))
}

/// Result of scanning |f| over the punctured box 0 < max(|ξ|, |η|) ≤ k.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimumReport {
    pub min: BigUint,
    pub attaining: (i64, i64),
    pub equals_m: bool,
}

/// Scan the box; a necessary check only, since the true minimum is an
/// infimum over all integer pairs. Ties prefer the pair (1, 0).
pub fn verify_minimum(f: &MarkoffForm, k: u32) -> MinimumReport {
    let k = k as i64;
    let mut best: Option<(BigUint, (i64, i64))> = None;
    for xi in -k..=k {
        for eta in -k..=k {
            if xi == 0 && eta == 0 {
                continue;
            }
            let value = f
                .eval(&BigInt::from(xi), &BigInt::from(eta))
                .abs()
                .to_biguint()
                .expect("absolute value");
            match &best {
                Some((cur, _)) if *cur <= value => {}
                _ => best = Some((value, (xi, eta))),
            }
        }
    }
    let (min, mut attaining) = best.expect("k ≥ 1 gives a non-empty box");
    let at_unit = f
        .eval(&BigInt::one(), &BigInt::zero())
        .abs()
        .to_biguint()
        .unwrap();
    if at_unit == min {
        attaining = (1, 0);
    }
    let equals_m = min == f.m;
    MinimumReport {
        min,
        attaining,
        equals_m,
    }
}

/// Exact statement of the ratio bound: 9m² > δ, forced by δ = 9m² − 4.
pub fn markoff_ratio_check(f: &MarkoffForm) -> bool {
    match discriminant(f) {
        Ok(delta) => 9u32 * &f.m * &f.m > delta,
        Err(_) => false,
    }
}
