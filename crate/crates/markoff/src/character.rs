//! The modular character pair (u_t, v_t) of a slope: u_t is the residue of
//! m_s/m_r mod m_t canonicalized into [0, m_t/2], and v_t = (u_t² + 1)/m_t.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use serde_json::{json, Value};

use crate::farey::{FareyTriple, Slope};
use crate::{arith, cache, tree};

/// A slope together with m_t and the pair (u_t, v_t).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    pub t: Slope,
    pub m: BigUint,
    pub u: BigUint,
    pub v: BigUint,
}

impl Character {
    pub fn to_json(&self) -> Value {
        json!({
            "t": self.t.to_string(),
            "m": self.m.to_string(),
            "u": self.u.to_string(),
            "v": self.v.to_string(),
        })
    }
}

/// Reduce a residue into the canonical half-interval [0, m/2].
fn canonical_residue(r: BigUint, m: &BigUint) -> BigUint {
    if 2u32 * &r > *m {
        m - r
    } else {
        r
    }
}

/// The full character of a slope; memoized alongside the Markoff numbers.
pub fn character(t: &Slope) -> Character {
    if t.nu().is_zero() {
        return Character {
            t: t.clone(),
            m: BigUint::one(),
            u: BigUint::zero(),
            v: BigUint::one(),
        };
    }
    if t.mu().is_zero() {
        return Character {
            t: t.clone(),
            m: BigUint::from(2u32),
            u: BigUint::one(),
            v: BigUint::one(),
        };
    }
    if let (Some(m), Some((u, v))) = (cache::get_m(t), cache::get_uv(t)) {
        return Character {
            t: t.clone(),
            m,
            u,
            v,
        };
    }
    let st = tree::triple_at(t).expect("non-root slope");
    let (m_r, m_t, m_s) = st.values();
    // u ≡ m_s / m_r (mod m_t), pinned to [0, m_t/2].
    let inv = arith::mod_inv(m_r, m_t).expect("triple elements are pairwise coprime");
    let u = canonical_residue(m_s * inv % m_t, m_t);
    let uu1 = &u * &u + 1u32;
    assert!((&uu1 % m_t).is_zero(), "m_t must divide u²+1");
    let v = uu1 / m_t;
    cache::put_uv(t, u.clone(), v.clone());
    Character {
        t: t.clone(),
        m: m_t.clone(),
        u,
        v,
    }
}

/// u_t alone.
pub fn u_of(t: &Slope) -> BigUint {
    character(t).u
}

/// v_t = (u_t² + 1)/m_t; the division is exact.
pub fn v_of(t: &Slope) -> BigUint {
    character(t).v
}

/// Both difference identities across a Farey triple:
/// u_t·m_r − u_r·m_t = m_s and u_s·m_t − u_t·m_s = m_r.
pub fn check_difference_identities(ft: &FareyTriple) -> bool {
    let cr = character(ft.r());
    let ct = character(ft.t());
    let cs = character(ft.s());
    let i = |x: &BigUint| BigInt::from(x.clone());
    let first = i(&ct.u) * i(&cr.m) - i(&cr.u) * i(&ct.m) == i(&cs.m);
    let second = i(&cs.u) * i(&ct.m) - i(&ct.u) * i(&cs.m) == i(&cr.m);
    first && second
}

/// Both product identities across a Farey triple, using the reflected slopes:
/// m_s·m_{s'} = m_r² + m_t² and m_r·m_{r'} = m_t² + m_s².
pub fn check_product_identities(ft: &FareyTriple) -> bool {
    let m_r = tree::markoff_number(ft.r());
    let m_t = tree::markoff_number(ft.t());
    let m_s = tree::markoff_number(ft.s());
    let m_s_prime = tree::markoff_number(&ft.s_prime());
    let m_r_prime = tree::markoff_number(&ft.r_prime());
    let first = &m_s * &m_s_prime == &m_r * &m_r + &m_t * &m_t;
    let second = &m_r * &m_r_prime == &m_t * &m_t + &m_s * &m_s;
    first && second
}

/// True iff u_t/m_t is strictly increasing along a value-sorted slope list.
pub fn check_monotonicity(slopes: &[Slope]) -> bool {
    slopes.windows(2).all(|w| {
        let a = character(&w[0]);
        let b = character(&w[1]);
        // u_a/m_a < u_b/m_b by cross multiplication
        a.u * b.m < b.u * a.m
    })
}
