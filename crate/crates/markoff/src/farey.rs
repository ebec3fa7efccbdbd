//! Slopes (reduced non-negative rationals including ∞ = 1/0), Farey pairs and
//! sums, direct descents, Farey levels, and Stern-Brocot descent paths.
//!
//! All comparisons are exact cross-multiplications; no floating point.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use crate::{arith, Error, Result};

/// A reduced slope ν/μ in [0, ∞]. 0 = 0/1, ∞ = 1/0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Slope {
    nu: BigUint,
    mu: BigUint,
}

impl Slope {
    /// Build the reduced slope with denominator `mu` and numerator `nu`.
    pub fn new(mu: impl Into<BigUint>, nu: impl Into<BigUint>) -> Result<Self> {
        let (mu, nu) = (mu.into(), nu.into());
        if mu.is_zero() && nu.is_zero() {
            return Err(Error::ZeroSlope);
        }
        let g = arith::gcd(&mu, &nu);
        Ok(Slope {
            nu: nu / &g,
            mu: mu / &g,
        })
    }

    /// 0 = 0/1.
    pub fn zero() -> Self {
        Slope {
            nu: BigUint::zero(),
            mu: BigUint::one(),
        }
    }

    /// ∞ = 1/0.
    pub fn infinity() -> Self {
        Slope {
            nu: BigUint::one(),
            mu: BigUint::zero(),
        }
    }

    /// 1/1, the level-1 slope.
    pub fn one() -> Self {
        Slope {
            nu: BigUint::one(),
            mu: BigUint::one(),
        }
    }

    pub fn nu(&self) -> &BigUint {
        &self.nu
    }

    pub fn mu(&self) -> &BigUint {
        &self.mu
    }

    /// True for the level-0 slopes 0/1 and 1/0.
    pub fn is_root(&self) -> bool {
        self.nu.is_zero() || self.mu.is_zero()
    }
}

impl Ord for Slope {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.nu * &other.mu).cmp(&(&other.nu * &self.mu))
    }
}

impl PartialOrd for Slope {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Slope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.nu, self.mu)
    }
}

impl FromStr for Slope {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadSlope(s.to_string());
        let (nu, mu) = s.split_once('/').ok_or_else(bad)?;
        let nu = BigUint::from_str(nu.trim()).map_err(|_| bad())?;
        let mu = BigUint::from_str(mu.trim()).map_err(|_| bad())?;
        Slope::new(mu, nu).map_err(|_| bad())
    }
}

/// One step of a Stern-Brocot descent: L toward the smaller slope, R toward
/// the larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Step {
    L,
    R,
}

impl fmt::Display for Step {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Step::L => "L",
            Step::R => "R",
        })
    }
}

/// An ordered Farey triple (r, t, s) with r < t < s and t = r ⊕ s.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FareyTriple {
    r: Slope,
    t: Slope,
    s: Slope,
}

impl FareyTriple {
    /// Triple spanned by the Farey pair (r, s); arguments may come in either order.
    pub fn from_pair(a: &Slope, b: &Slope) -> Result<Self> {
        let (r, s) = if a < b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        };
        let t = farey_sum(&r, &s)?;
        Ok(FareyTriple { r, t, s })
    }

    /// The unique triple whose middle slope is `t`.
    pub fn of(t: &Slope) -> Result<Self> {
        let (r, s) = direct_descents(t)?;
        Ok(FareyTriple { r, t: t.clone(), s })
    }

    pub fn r(&self) -> &Slope {
        &self.r
    }

    pub fn t(&self) -> &Slope {
        &self.t
    }

    pub fn s(&self) -> &Slope {
        &self.s
    }

    /// Mediant of (r, t): middle of the flanking triple on the r side.
    pub fn s_prime(&self) -> Slope {
        farey_sum(&self.r, &self.t).expect("r, t are Farey neighbors")
    }

    /// Mediant of (t, s): middle of the flanking triple on the s side.
    pub fn r_prime(&self) -> Slope {
        farey_sum(&self.t, &self.s).expect("t, s are Farey neighbors")
    }
}

impl fmt::Display for FareyTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.t, self.s)
    }
}

/// True iff |r.nu·s.mu − r.mu·s.nu| = 1 on the reduced forms.
pub fn is_farey_pair(r: &Slope, s: &Slope) -> bool {
    let ad = r.nu() * s.mu();
    let bc = r.mu() * s.nu();
    let det = if ad > bc { ad - bc } else { bc - ad };
    det.is_one()
}

/// Mediant (nu_r + nu_s)/(mu_r + mu_s) of a Farey pair.
pub fn farey_sum(r: &Slope, s: &Slope) -> Result<Slope> {
    if !is_farey_pair(r, s) {
        return Err(Error::NotFareyPair {
            r: r.clone(),
            s: s.clone(),
        });
    }
    // The mediant of a Farey pair is already reduced.
    Ok(Slope {
        nu: r.nu() + s.nu(),
        mu: r.mu() + s.mu(),
    })
}

/// The unique Farey pair (r, s), r < s, with t = r ⊕ s.
pub fn direct_descents(t: &Slope) -> Result<(Slope, Slope)> {
    if t.is_root() {
        return Err(Error::RootSlope(t.clone()));
    }
    let one = BigUint::one();
    if t.mu().is_one() {
        // integer slope n/1: descents are (n-1)/1 and 1/0
        let r = Slope {
            nu: t.nu() - &one,
            mu: one,
        };
        return Ok((r, Slope::infinity()));
    }
    if t.nu().is_one() {
        // 1/m: descents are 0/1 and 1/(m-1)
        let s = Slope {
            nu: one.clone(),
            mu: t.mu() - &one,
        };
        return Ok((Slope::zero(), s));
    }
    // Solve a·nu − b·mu = 1 with 0 < a < mu; then r = b/a, s = (nu−b)/(mu−a).
    let a = arith::mod_inv(t.nu(), t.mu()).expect("nu, mu coprime");
    let b = (&a * t.nu() - &one) / t.mu();
    let r = Slope {
        nu: b.clone(),
        mu: a.clone(),
    };
    let s = Slope {
        nu: t.nu() - b,
        mu: t.mu() - a,
    };
    Ok((r, s))
}

/// Farey level: 0 for the roots, else 1 + max level of the direct descents.
/// Computed as the sum of the continued-fraction partial quotients of ν/μ.
pub fn farey_level(t: &Slope) -> BigUint {
    if t.is_root() {
        return BigUint::zero();
    }
    let (mut a, mut b) = (t.nu().clone(), t.mu().clone());
    let mut level = BigUint::zero();
    while !b.is_zero() {
        let (q, r) = a.div_rem(&b);
        level += q;
        a = b;
        b = r;
    }
    level
}

/// Insert the mediant of every adjacent pair; returns (next union, mediants).
fn grow_union(union: Vec<Slope>) -> (Vec<Slope>, Vec<Slope>) {
    let fresh: Vec<Slope> = union
        .windows(2)
        .map(|w| farey_sum(&w[0], &w[1]).expect("adjacent slopes in the union are Farey pairs"))
        .collect();
    let mut next = Vec::with_capacity(union.len() + fresh.len());
    for (i, s) in union.into_iter().enumerate() {
        next.push(s);
        if i < fresh.len() {
            next.push(fresh[i].clone());
        }
    }
    (next, fresh)
}

/// All slopes of level exactly `n`, ascending. Level 0 is [0/1, 1/0].
pub fn slopes_at_level(n: u32) -> Vec<Slope> {
    let mut union = vec![Slope::zero(), Slope::infinity()];
    if n == 0 {
        return union;
    }
    let mut fresh = Vec::new();
    for _ in 1..=n {
        (union, fresh) = grow_union(union);
    }
    fresh
}

/// Sorted union of all slopes with level at most `n`.
pub fn slopes_up_to_level(n: u32) -> Vec<Slope> {
    let mut union = vec![Slope::zero(), Slope::infinity()];
    for _ in 1..=n {
        (union, _) = grow_union(union);
    }
    union
}

/// Every Farey pair (r, s) with r < s whose members both have level ≤ `n`:
/// the root pair plus each deeper slope paired with its two direct descents.
pub fn farey_pairs_up_to(n: u32) -> Vec<(Slope, Slope)> {
    let mut pairs = vec![(Slope::zero(), Slope::infinity())];
    for level in 1..=n {
        for t in slopes_at_level(level) {
            let (r, s) = direct_descents(&t).expect("non-root slope");
            pairs.push((r, t.clone()));
            pairs.push((t, s));
        }
    }
    pairs
}

/// Descent word from 1/1 to `t` in the mediant tree; empty for 1/1.
pub fn stern_brocot_path(t: &Slope) -> Result<Vec<Step>> {
    if t.is_root() {
        return Err(Error::RootSlope(t.clone()));
    }
    // Partial quotients of nu/mu give the run lengths R^q0 L^q1 R^q2 ...;
    // the final run sheds one step because the walk starts at 1/1.
    let (mut a, mut b) = (t.nu().clone(), t.mu().clone());
    let mut runs: Vec<u64> = Vec::new();
    while !b.is_zero() {
        let (q, r) = a.div_rem(&b);
        runs.push(
            q.to_u64()
                .expect("descent runs beyond u64 are not representable"),
        );
        a = b;
        b = r;
    }
    if let Some(last) = runs.last_mut() {
        *last -= 1;
    }
    let mut path = Vec::new();
    for (i, &len) in runs.iter().enumerate() {
        let step = if i % 2 == 0 { Step::R } else { Step::L };
        path.extend(std::iter::repeat_n(step, len as usize));
    }
    Ok(path)
}

/// Replay a descent word from 1/1, returning the slope it lands on.
pub fn replay_path(path: &[Step]) -> Slope {
    let mut lo = Slope::zero();
    let mut hi = Slope::infinity();
    let mut cur = Slope::one();
    for step in path {
        match step {
            Step::L => {
                let next = farey_sum(&lo, &cur).expect("walk keeps Farey pairs");
                hi = std::mem::replace(&mut cur, next);
            }
            Step::R => {
                let next = farey_sum(&cur, &hi).expect("walk keeps Farey pairs");
                lo = std::mem::replace(&mut cur, next);
            }
        }
    }
    cur
}
