//! Markoff triples, the neighbor operation, the reduction algorithm,
//! slope-indexed Markoff numbers, and complete enumeration below a bound.
//!
//! The slope convention follows the matrix tree: m_{1/2} = 13, m_{2/1} = 29.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use std::fmt;

use crate::farey::{self, FareyTriple, Slope, Step};
use crate::{arith, cache, Error, Result};

/// An ordered positive solution (x ≤ y ≤ z) of x² + y² + z² = 3xyz.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MarkoffTriple {
    x: BigUint,
    y: BigUint,
    z: BigUint,
}

/// True iff x² + y² + z² = 3xyz exactly.
pub fn is_markoff_triple(x: &BigUint, y: &BigUint, z: &BigUint) -> bool {
    x * x + y * y + z * z == 3u32 * x * y * z
}

impl MarkoffTriple {
    /// Sort and validate a candidate triple.
    pub fn new(
        x: impl Into<BigUint>,
        y: impl Into<BigUint>,
        z: impl Into<BigUint>,
    ) -> Result<Self> {
        let mut v = [x.into(), y.into(), z.into()];
        v.sort();
        let [x, y, z] = v;
        if !is_markoff_triple(&x, &y, &z) {
            return Err(Error::NotMarkoffTriple { x, y, z });
        }
        Ok(MarkoffTriple { x, y, z })
    }

    pub fn x(&self) -> &BigUint {
        &self.x
    }

    pub fn y(&self) -> &BigUint {
        &self.y
    }

    pub fn z(&self) -> &BigUint {
        &self.z
    }

    /// The maximal element.
    pub fn max(&self) -> &BigUint {
        &self.z
    }

    /// (1,1,1) and (1,1,2) are singular; every other triple has distinct entries.
    pub fn is_singular(&self) -> bool {
        self.x == self.y || self.y == self.z
    }

    /// The three neighbors, replacing one coordinate w by 3·(product of the
    /// others) − w.
    pub fn neighbors(&self) -> [MarkoffTriple; 3] {
        let (x, y, z) = (&self.x, &self.y, &self.z);
        let nx = 3u32 * y * z - x;
        let ny = 3u32 * x * z - y;
        let nz = 3u32 * x * y - z;
        let mk = |a: BigUint, b: BigUint, c: BigUint| {
            MarkoffTriple::new(a, b, c).expect("neighbor solves the equation")
        };
        [
            mk(nx, y.clone(), z.clone()),
            mk(x.clone(), ny, z.clone()),
            mk(x.clone(), y.clone(), nz),
        ]
    }

    /// Full reduction path down to (1,1,1), applying z ↦ 3xy − z to the
    /// sorted triple and re-sorting at each step.
    pub fn reduce(&self) -> Vec<MarkoffTriple> {
        let one = MarkoffTriple::new(1u32, 1u32, 1u32).expect("unit triple");
        let mut path = vec![self.clone()];
        let mut cur = self.clone();
        while cur != one {
            let nz = 3u32 * &cur.x * &cur.y - &cur.z;
            cur = MarkoffTriple::new(cur.x.clone(), cur.y.clone(), nz)
                .expect("reduction step solves the equation");
            path.push(cur.clone());
        }
        path
    }

    /// x + y + z.
    pub fn sum(&self) -> BigUint {
        &self.x + &self.y + &self.z
    }
}

impl fmt::Display for MarkoffTriple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// A Markoff triple in slope coordinates: Farey triple (r, t, s) with the
/// values (m_r, m_t, m_s); m_t is the maximum once level(t) ≥ 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SlopedTriple {
    farey: FareyTriple,
    values: [BigUint; 3],
}

impl SlopedTriple {
    pub fn farey(&self) -> &FareyTriple {
        &self.farey
    }

    /// (m_r, m_t, m_s) in slope order.
    pub fn values(&self) -> (&BigUint, &BigUint, &BigUint) {
        (&self.values[0], &self.values[1], &self.values[2])
    }

    pub fn m_r(&self) -> &BigUint {
        &self.values[0]
    }

    pub fn m_t(&self) -> &BigUint {
        &self.values[1]
    }

    pub fn m_s(&self) -> &BigUint {
        &self.values[2]
    }

    /// The underlying sorted triple.
    pub fn triple(&self) -> MarkoffTriple {
        MarkoffTriple::new(
            self.values[0].clone(),
            self.values[1].clone(),
            self.values[2].clone(),
        )
        .expect("slope walk produces Markoff triples")
    }
}

/// Either a singular root triple or a genuine sloped triple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TripleClass {
    /// (1,1,1) for 0/1, (1,1,2) for 1/0.
    Singular(MarkoffTriple),
    Sloped(SlopedTriple),
}

/// Walk the Stern-Brocot path to t, carrying the sliding value triple.
/// The dropped value is replaced by 3·(product of the kept pair) − dropped.
pub fn triple_at(t: &Slope) -> Result<SlopedTriple> {
    let path = farey::stern_brocot_path(t)?;
    let mut lo = Slope::zero();
    let mut cur = Slope::one();
    let mut hi = Slope::infinity();
    let mut m_lo = BigUint::one();
    let mut m_cur = BigUint::from(5u32);
    let mut m_hi = BigUint::from(2u32);
    for step in path {
        match step {
            Step::L => {
                let next = farey::farey_sum(&lo, &cur)?;
                let m_next = 3u32 * &m_lo * &m_cur - &m_hi;
                hi = std::mem::replace(&mut cur, next);
                m_hi = std::mem::replace(&mut m_cur, m_next);
            }
            Step::R => {
                let next = farey::farey_sum(&cur, &hi)?;
                let m_next = 3u32 * &m_cur * &m_hi - &m_lo;
                lo = std::mem::replace(&mut cur, next);
                m_lo = std::mem::replace(&mut m_cur, m_next);
            }
        }
    }
    cache::put_m(&cur, m_cur.clone());
    let farey = FareyTriple::from_pair(&lo, &hi)?;
    debug_assert_eq!(farey.t(), &cur);
    Ok(SlopedTriple {
        farey,
        values: [m_lo, m_cur, m_hi],
    })
}

/// Root slopes map to the singular triples; everything else is sloped.
pub fn triple_class_at(t: &Slope) -> TripleClass {
    if t.is_root() {
        let z = if t.mu().is_zero() { 2u32 } else { 1u32 };
        TripleClass::Singular(MarkoffTriple::new(1u32, 1u32, z).expect("singular triple"))
    } else {
        TripleClass::Sloped(triple_at(t).expect("non-root slope"))
    }
}

/// The Markoff number of a slope; memoized.
pub fn markoff_number(t: &Slope) -> BigUint {
    if t.nu().is_zero() {
        return BigUint::one();
    }
    if t.mu().is_zero() {
        return BigUint::from(2u32);
    }
    if let Some(m) = cache::get_m(t) {
        return m;
    }
    triple_at(t).expect("non-root slope").m_t().clone()
}

/// One enumerated Markoff number with every slope attaining it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NumberRecord {
    pub m: BigUint,
    pub slopes: Vec<Slope>,
    pub level: u32,
    pub triple: MarkoffTriple,
}

impl NumberRecord {
    pub fn to_json(&self) -> Value {
        json!({
            "m": self.m.to_string(),
            "slopes": self.slopes.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            "level": self.level,
            "triple": [
                self.triple.x().to_string(),
                self.triple.y().to_string(),
                self.triple.z().to_string(),
            ],
        })
    }
}

#[derive(Clone)]
enum Limit {
    Bound(BigUint),
    Level(u32),
}

#[derive(Clone)]
struct Node {
    lo: Slope,
    cur: Slope,
    hi: Slope,
    m_lo: BigUint,
    m_cur: BigUint,
    m_hi: BigUint,
    depth: u32,
}

impl Node {
    fn root() -> Node {
        Node {
            lo: Slope::zero(),
            cur: Slope::one(),
            hi: Slope::infinity(),
            m_lo: BigUint::one(),
            m_cur: BigUint::from(5u32),
            m_hi: BigUint::from(2u32),
            depth: 1,
        }
    }

    fn children(&self) -> [Node; 2] {
        let left_slope = farey::farey_sum(&self.lo, &self.cur).expect("walk keeps Farey pairs");
        let right_slope = farey::farey_sum(&self.cur, &self.hi).expect("walk keeps Farey pairs");
        let left = Node {
            lo: self.lo.clone(),
            m_lo: self.m_lo.clone(),
            cur: left_slope,
            m_cur: 3u32 * &self.m_lo * &self.m_cur - &self.m_hi,
            hi: self.cur.clone(),
            m_hi: self.m_cur.clone(),
            depth: self.depth + 1,
        };
        let right = Node {
            lo: self.cur.clone(),
            m_lo: self.m_cur.clone(),
            cur: right_slope,
            m_cur: 3u32 * &self.m_cur * &self.m_hi - &self.m_lo,
            hi: self.hi.clone(),
            m_hi: self.m_hi.clone(),
            depth: self.depth + 1,
        };
        [left, right]
    }
}

fn admits(limit: &Limit, node: &Node) -> bool {
    match limit {
        // Children maxima strictly increase down the tree, so this prune is complete.
        Limit::Bound(b) => node.m_cur <= *b,
        Limit::Level(l) => node.depth <= *l,
    }
}

type RawRecord = (BigUint, Slope, u32, [BigUint; 3]);

fn record_of(node: &Node) -> RawRecord {
    let mut sorted = [node.m_lo.clone(), node.m_cur.clone(), node.m_hi.clone()];
    sorted.sort();
    (node.m_cur.clone(), node.cur.clone(), node.depth, sorted)
}

fn dfs(limit: &Limit, start: Node, out: &mut Vec<RawRecord>) {
    let mut stack = vec![start];
    while let Some(node) = stack.pop() {
        out.push(record_of(&node));
        for child in node.children() {
            if admits(limit, &child) {
                stack.push(child);
            }
        }
    }
}

fn enumerate_internal(limit: Limit, threads: usize) -> Vec<NumberRecord> {
    let mut raw: Vec<RawRecord> = Vec::new();
    let one = BigUint::one();
    let two = BigUint::from(2u32);
    let unit = |z: u32| [one.clone(), one.clone(), BigUint::from(z)];
    match &limit {
        Limit::Bound(b) => {
            if one <= *b {
                raw.push((one.clone(), Slope::zero(), 0, unit(1)));
            }
            if two <= *b {
                raw.push((two.clone(), Slope::infinity(), 0, unit(2)));
            }
        }
        Limit::Level(_) => {
            raw.push((one.clone(), Slope::zero(), 0, unit(1)));
            raw.push((two.clone(), Slope::infinity(), 0, unit(2)));
        }
    }

    let root = Node::root();
    if admits(&limit, &root) {
        if threads <= 1 {
            dfs(&limit, root, &mut raw);
        } else {
            // Expand a frontier wide enough to occupy the workers, then split.
            let mut frontier = vec![root];
            while frontier.len() < threads * 4 {
                let mut next = Vec::new();
                let mut grew = false;
                for node in &frontier {
                    for child in node.children() {
                        if admits(&limit, &child) {
                            next.push(child);
                            grew = true;
                        }
                    }
                }
                for node in &frontier {
                    raw.push(record_of(node));
                }
                frontier = next;
                if !grew {
                    break;
                }
            }
            let buckets: Vec<Vec<Node>> = {
                let mut buckets = vec![Vec::new(); threads];
                for (i, node) in frontier.into_iter().enumerate() {
                    buckets[i % threads].push(node);
                }
                buckets
            };
            let partials = std::thread::scope(|scope| {
                let handles: Vec<_> = buckets
                    .into_iter()
                    .map(|bucket| {
                        let limit = limit.clone();
                        scope.spawn(move || {
                            let mut out = Vec::new();
                            for node in bucket {
                                dfs(&limit, node, &mut out);
                            }
                            out
                        })
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("worker panicked"))
                    .collect::<Vec<_>>()
            });
            for partial in partials {
                raw.extend(partial);
            }
        }
    }

    merge_raw(raw)
}

/// Sort by (value, slope) and merge records that share a value, so the output
/// is deterministic regardless of traversal schedule and a number attained by
/// several slopes collapses into one record listing them all.
fn merge_raw(mut raw: Vec<RawRecord>) -> Vec<NumberRecord> {
    raw.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut out: Vec<NumberRecord> = Vec::new();
    for (m, slope, depth, values) in raw {
        match out.last_mut() {
            Some(rec) if rec.m == m => rec.slopes.push(slope),
            _ => {
                let [x, y, z] = values;
                out.push(NumberRecord {
                    m,
                    slopes: vec![slope],
                    level: depth,
                    triple: MarkoffTriple::new(x, y, z).expect("tree node is a Markoff triple"),
                });
            }
        }
    }
    out
}

/// Every Markoff number ≤ bound with all slopes attaining it, ascending.
pub fn enumerate_numbers(bound: &BigUint) -> Vec<NumberRecord> {
    enumerate_internal(Limit::Bound(bound.clone()), 1)
}

/// Parallel variant of [`enumerate_numbers`]; the result is identical for any
/// thread count.
pub fn enumerate_numbers_threaded(bound: &BigUint, threads: usize) -> Vec<NumberRecord> {
    enumerate_internal(Limit::Bound(bound.clone()), threads.max(1))
}

/// Every Markoff number of Farey level ≤ max_level, ascending by value.
pub fn enumerate_to_level(max_level: u32) -> Vec<NumberRecord> {
    enumerate_internal(Limit::Level(max_level), 1)
}

/// Residue facts of one Markoff number: m mod 4 for odd m, m mod 32 for even
/// m, and the odd-prime-factor residues when m is small enough to factor.
#[derive(Debug, Clone)]
pub struct CongruenceReport {
    pub m: BigUint,
    pub even: bool,
    pub modulus: u32,
    pub residue: u32,
    pub odd_part_factors: Option<Vec<(BigUint, u32)>>,
    pub odd_factors_one_mod_four: Option<bool>,
}

pub fn congruence_report(m: &BigUint) -> CongruenceReport {
    let even = m.is_even();
    let modulus = if even { 32u32 } else { 4u32 };
    let residue = (m % modulus).to_u32().expect("residue below 32");
    let odd_part = m >> m.trailing_zeros().unwrap_or(0);
    let odd_part_factors = arith::factorize(&odd_part);
    let odd_factors_one_mod_four = odd_part_factors
        .as_ref()
        .map(|fs| fs.iter().all(|(p, _)| (p % 4u32).is_one()));
    CongruenceReport {
        m: m.clone(),
        even,
        modulus,
        residue,
        odd_part_factors,
        odd_factors_one_mod_four,
    }
}
