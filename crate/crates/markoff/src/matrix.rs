//! Determinant-1 integer 2×2 matrices, Fricke trace identities, and the
//! Markoff matrices M_t built by Farey products of two fixed generators.

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};
use std::cmp::Ordering;
use std::fmt;

use crate::character;
use crate::farey::{self, Slope, Step};
use crate::{Error, Result};

/// Row-major `[[a, b], [c, d]]` over arbitrary-precision integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(
        a: impl Into<BigInt>,
        b: impl Into<BigInt>,
        c: impl Into<BigInt>,
        d: impl Into<BigInt>,
    ) -> Self {
        Mat2 {
            a: a.into(),
            b: b.into(),
            c: c.into(),
            d: d.into(),
        }
    }

    pub fn identity() -> Self {
        Mat2::new(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    /// Adjugate inverse `[[d, −b], [−c, a]]`; requires det = 1.
    pub fn inv(&self) -> Mat2 {
        debug_assert!(self.det().is_one(), "inverse assumes det = 1");
        Mat2 {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &rhs.a + &self.b * &rhs.c,
            b: &self.a * &rhs.b + &self.b * &rhs.d,
            c: &self.c * &rhs.a + &self.d * &rhs.c,
            d: &self.c * &rhs.b + &self.d * &rhs.d,
        }
    }

    /// X Y X⁻¹ Y⁻¹.
    pub fn commutator(&self, rhs: &Mat2) -> Mat2 {
        self.mul(rhs).mul(&self.inv()).mul(&rhs.inv())
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

fn gen_a() -> Mat2 {
    Mat2::new(2, 1, 1, 1)
}

fn gen_ab() -> Mat2 {
    Mat2::new(3, 4, 2, 3)
}

fn alt_gen_lo() -> Mat2 {
    Mat2::new(2, 1, 1, 1)
}

fn alt_gen_hi() -> Mat2 {
    Mat2::new(5, 2, 2, 1)
}

/// A Markoff matrix with its slope.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarkoffMatrixRecord {
    pub t: Slope,
    pub m: Mat2,
}

impl MarkoffMatrixRecord {
    pub fn to_json(&self) -> Value {
        let m = &self.m;
        json!({
            "t": self.t.to_string(),
            "M": [
                [m.a.to_string(), m.b.to_string()],
                [m.c.to_string(), m.d.to_string()],
            ],
        })
    }
}

/// Replay the Stern-Brocot path with a sliding matrix pair, multiplying in
/// Farey order (smaller slope on the left).
fn product_walk(t: &Slope, lo_root: Mat2, hi_root: Mat2) -> Mat2 {
    if t.nu().is_zero() {
        return lo_root;
    }
    if t.mu().is_zero() {
        return hi_root;
    }
    let path = farey::stern_brocot_path(t).expect("non-root slope");
    let mut lo = lo_root;
    let mut hi = hi_root;
    let mut cur = lo.mul(&hi);
    for step in path {
        match step {
            Step::L => {
                let next = lo.mul(&cur);
                hi = std::mem::replace(&mut cur, next);
            }
            Step::R => {
                let next = cur.mul(&hi);
                lo = std::mem::replace(&mut cur, next);
            }
        }
    }
    cur
}

/// The Markoff matrix of a slope: M_{0/1} = `[[2,1],[1,1]]`, M_{1/0} = `[[3,4],[2,3]]`,
/// and M of a mediant is the product of its descents' matrices.
pub fn markoff_matrix(t: &Slope) -> MarkoffMatrixRecord {
    MarkoffMatrixRecord {
        t: t.clone(),
        m: product_walk(t, gen_a(), gen_ab()),
    }
}

/// The alternative-generator family: roots `[[2,1],[1,1]]` and `[[5,2],[2,1]]`.
pub fn alt_markoff_matrix(t: &Slope) -> Mat2 {
    product_walk(t, alt_gen_lo(), alt_gen_hi())
}

/// Outcome of the trace-identity checks on a pair of SL(2,Z) matrices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrickeCheck {
    /// tr(XY) + tr(XY⁻¹) = tr(X)·tr(Y).
    pub trace_sum: bool,
    /// tr²X + tr²Y + tr²(XY) − trX·trY·tr(XY) = 2 + tr(XYX⁻¹Y⁻¹).
    pub commutator_identity: bool,
    /// tr²X + tr²Y + tr²(XY) = trX·trY·tr(XY); only asserted when the
    /// commutator has trace −2.
    pub markoff_relation: Option<bool>,
}

impl FrickeCheck {
    pub fn all_hold(&self) -> bool {
        self.trace_sum && self.commutator_identity && self.markoff_relation.unwrap_or(true)
    }
}

pub fn fricke_check(x: &Mat2, y: &Mat2) -> FrickeCheck {
    debug_assert!(x.det().is_one() && y.det().is_one());
    let xy = x.mul(y);
    let x_yinv = x.mul(&y.inv());
    let trace_sum = xy.trace() + x_yinv.trace() == x.trace() * y.trace();

    let (tx, ty, txy) = (x.trace(), y.trace(), xy.trace());
    let comm_trace = x.commutator(y).trace();
    let lhs = &tx * &tx + &ty * &ty + &txy * &txy - &tx * &ty * &txy;
    let commutator_identity = lhs == BigInt::from(2) + &comm_trace;

    let markoff_relation = if comm_trace == BigInt::from(-2) {
        Some(&tx * &tx + &ty * &ty + &txy * &txy == tx * ty * txy)
    } else {
        None
    };
    FrickeCheck {
        trace_sum,
        commutator_identity,
        markoff_relation,
    }
}

/// tr(M_r M_s M_r⁻¹ M_s⁻¹) for a Farey pair r < s; expected −2 everywhere.
pub fn commutator_trace(r: &Slope, s: &Slope) -> Result<BigInt> {
    if !farey::is_farey_pair(r, s) {
        return Err(Error::NotFareyPair {
            r: r.clone(),
            s: s.clone(),
        });
    }
    let mr = markoff_matrix(r).m;
    let ms = markoff_matrix(s).m;
    Ok(mr.commutator(&ms).trace())
}

/// Check the entry structure `[[2m−u, 2m+u−v], [m, m+u]]` against the character
/// module, together with the entry inequalities c ≤ d ≤ a ≤ b, 3a ≥ 2b,
/// 3c ≥ 2d (strict off the roots) and a + d = 3c.
pub fn structure_check(rec: &MarkoffMatrixRecord) -> bool {
    let ch = character::character(&rec.t);
    let m = BigInt::from(ch.m.clone());
    let u = BigInt::from(ch.u.clone());
    let v = BigInt::from(ch.v.clone());
    let expected = Mat2 {
        a: 2 * &m - &u,
        b: 2 * &m + &u - &v,
        c: m.clone(),
        d: &m + &u,
    };
    if rec.m != expected {
        return false;
    }
    let Mat2 { a, b, c, d } = &rec.m;
    if a + d != 3 * c {
        return false;
    }
    if rec.t == Slope::zero() {
        // [[2,1],[1,1]] has b < a; the entry ordering starts at level 0 on
        // the other root and holds non-strictly there.
        return 3 * a >= 2 * b && 3 * c >= 2 * d;
    }
    if rec.t.is_root() {
        return c <= d && d <= a && a <= b && 3 * a >= 2 * b && 3 * c >= 2 * d;
    }
    c < d && d < a && a < b && 3 * a > 2 * b && 3 * c > 2 * d
}

/// The index a/c of a Markoff matrix, as an exact integer pair.
pub fn rho(m: &Mat2) -> Result<(BigInt, BigInt)> {
    if m.c.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    Ok((m.a.clone(), m.c.clone()))
}

/// Exact comparison of two integer fractions (numerator, denominator).
pub fn frac_cmp(x: &(BigInt, BigInt), y: &(BigInt, BigInt)) -> Ordering {
    // normalize so both denominators are positive
    let (xn, xd) = if x.1.is_negative() {
        (-&x.0, -&x.1)
    } else {
        (x.0.clone(), x.1.clone())
    };
    let (yn, yd) = if y.1.is_negative() {
        (-&y.0, -&y.1)
    } else {
        (y.0.clone(), y.1.clone())
    };
    (xn * yd).cmp(&(yn * xd))
}

/// Markoff number recovered from the matrix route: tr(M_t)/3.
pub fn markoff_number_from_trace(t: &Slope) -> BigUint {
    let tr = markoff_matrix(t).m.trace();
    let (q, r) = num_integer::Integer::div_rem(&tr, &BigInt::from(3));
    assert!(r.is_zero(), "Markoff matrix traces are divisible by 3");
    q.to_biguint().expect("traces are positive")
}
