//! Greedy elements, quantum and commutative, computed from their two-branch
//! recurrences, plus the predicates and axiom checkers attached to them.
//!
//! A pointed element at `(a1, a2)` is stored as its coefficient grid
//! `e(p, q)`, the coefficient of the pointed monomial
//! `X^{(bp - a1, cq - a2)}`.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::laurent::{quantum_binomial, LaurentV};
use crate::qtorus::{pointed_monomial, TorusElement};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointedElement {
    pub b: i64,
    pub c: i64,
    pub a1: i64,
    pub a2: i64,
    pub grid: BTreeMap<(i64, i64), LaurentV>,
}

impl PointedElement {
    /// Validates the corner coefficient and drops zero entries.
    pub fn new(b: i64, c: i64, a1: i64, a2: i64, grid: BTreeMap<(i64, i64), LaurentV>) -> Result<Self> {
        check_bc(b, c)?;
        let grid: BTreeMap<_, _> = grid.into_iter().filter(|(_, e)| !e.is_zero()).collect();
        if let Some(&(p, q)) = grid.keys().find(|(p, q)| *p < 0 || *q < 0) {
            return Err(Error::NotPointed(format!("grid index ({p},{q}) is negative")));
        }
        if !grid.get(&(0, 0)).is_some_and(LaurentV::is_one) {
            return Err(Error::NotPointed("e(0,0) must be 1".into()));
        }
        Ok(Self { b, c, a1, a2, grid })
    }

    pub fn get(&self, p: i64, q: i64) -> LaurentV {
        self.grid.get(&(p, q)).cloned().unwrap_or_default()
    }

    /// Exponent of the initial-cluster monomial carrying `e(p, q)`.
    pub fn exponent(&self, p: i64, q: i64) -> (i64, i64) {
        (self.b * p - self.a1, self.c * q - self.a2)
    }

    /// `sum e(p,q) X^{(bp - a1, cq - a2)}` in the initial torus.
    pub fn to_torus(&self) -> TorusElement {
        let mut out = TorusElement::zero();
        for (&(p, q), e) in &self.grid {
            let (x, y) = self.exponent(p, q);
            out += &pointed_monomial(x, y).scale(e);
        }
        out
    }

    pub fn eval_at_one(&self) -> BTreeMap<(i64, i64), BigInt> {
        self.grid
            .iter()
            .map(|(&k, e)| (k, e.eval_at_one()))
            .filter(|(_, e)| !e.is_zero())
            .collect()
    }

    /// First grid entry with a negative coefficient, if any.
    pub fn first_non_positive(&self) -> Option<((i64, i64), &LaurentV)> {
        self.grid
            .iter()
            .find(|(_, e)| !e.is_nonnegative())
            .map(|(&k, e)| (k, e))
    }

    pub fn is_positive(&self) -> bool {
        self.first_non_positive().is_none()
    }
}

/// The commutative (`v = 1`) counterpart of [`PointedElement`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalPointed {
    pub b: i64,
    pub c: i64,
    pub a1: i64,
    pub a2: i64,
    pub grid: BTreeMap<(i64, i64), BigInt>,
}

fn check_bc(b: i64, c: i64) -> Result<()> {
    if b < 1 || c < 1 {
        return Err(Error::InvalidArgument(format!(
            "b and c must be positive, got ({b},{c})"
        )));
    }
    Ok(())
}

fn pos(a: i64) -> i64 {
    a.max(0)
}

/// Membership of `(a1, a2)` in the positive imaginary roots:
/// both entries positive and `c a1^2 - b c a1 a2 + b a2^2 <= 0`.
pub fn is_imaginary_root(b: i64, c: i64, a1: i64, a2: i64) -> bool {
    if a1 <= 0 || a2 <= 0 {
        return false;
    }
    let (b, c, a1, a2) = (b as i128, c as i128, a1 as i128, a2 as i128);
    c * a1 * a1 - b * c * a1 * a2 + b * a2 * a2 <= 0
}

fn require_imaginary(b: i64, c: i64, a1: i64, a2: i64) -> Result<()> {
    check_bc(b, c)?;
    if !is_imaginary_root(b, c, a1, a2) {
        return Err(Error::InvalidArgument(format!(
            "({a1},{a2}) is not a positive imaginary root for (b,c)=({b},{c})"
        )));
    }
    Ok(())
}

/// Whether `(p, q)` lies in the greedy support region of the imaginary
/// root `(a1, a2)`: the polygon with corners `(0,0)`, `(a2,0)`,
/// `(a1/b, a2/c)`, `(0,a1)`, closed along the axes and open along the two
/// remaining edges except at their endpoints on the axes.
pub fn greedy_region_contains(b: i64, c: i64, a1: i64, a2: i64, p: i64, q: i64) -> Result<bool> {
    require_imaginary(b, c, a1, a2)?;
    if p < 0 || q < 0 {
        return Err(Error::InvalidArgument(format!("(p,q)=({p},{q}) must be non-negative")));
    }
    if (p, q) == (0, a1) || (p, q) == (a2, 0) {
        return Ok(true);
    }
    let (b, c, a1, a2, p, q) = (b as i128, c as i128, a1 as i128, a2 as i128, p as i128, q as i128);
    // q + (b - b a2/(c a1)) p < a1, scaled by c a1 > 0
    let below_upper_edge = c * a1 * q + (b * c * a1 - b * a2) * p < c * a1 * a1;
    // p + (c - c a1/(b a2)) q < a2, scaled by b a2 > 0
    let below_lower_edge = b * a2 * p + (b * c * a2 - c * a1) * q < b * a2 * a2;
    Ok(below_upper_edge || below_lower_edge)
}

/// Bookkeeping from a greedy computation.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GreedyStats {
    /// How many times the grid bound had to be enlarged because the
    /// one-cell margin did not vanish.
    pub bound_retries: u32,
}

/// Grid bound: `p <= [a2]_+`, `q <= [a1]_+`.
fn initial_bound(a1: i64, a2: i64) -> (i64, i64) {
    (pos(a2), pos(a1))
}

/// Cells in evaluation order: by `p + q`, then by `p`.
fn cells(p_max: i64, q_max: i64) -> impl Iterator<Item = (i64, i64)> {
    (0..=p_max + q_max).flat_map(move |s| {
        (0..=s.min(p_max))
            .filter(move |&p| s - p <= q_max)
            .map(move |p| (p, s - p))
    })
}

struct BinomialCache(HashMap<(i64, i64, i64), LaurentV>);

impl BinomialCache {
    fn get(&mut self, n: i64, k: i64, d: i64) -> &LaurentV {
        self.0
            .entry((n, k, d))
            .or_insert_with(|| quantum_binomial(n, k, d))
    }
}

/// The quantum greedy element `X[a1, a2]`.
pub fn quantum_greedy(b: i64, c: i64, a1: i64, a2: i64) -> Result<PointedElement> {
    quantum_greedy_with_stats(b, c, a1, a2).map(|(x, _)| x)
}

pub fn quantum_greedy_with_stats(b: i64, c: i64, a1: i64, a2: i64) -> Result<(PointedElement, GreedyStats)> {
    check_bc(b, c)?;
    let mut binom = BinomialCache(HashMap::new());
    let (mut p_max, mut q_max) = initial_bound(a1, a2);
    let mut stats = GreedyStats::default();
    loop {
        let grid = quantum_grid(b, c, a1, a2, p_max + 1, q_max + 1, &mut binom)?;
        let margin_clear = grid
            .keys()
            .all(|&(p, q)| p <= p_max && q <= q_max);
        if margin_clear {
            let x = PointedElement::new(b, c, a1, a2, grid)?;
            return Ok((x, stats));
        }
        stats.bound_retries += 1;
        p_max = 2 * (p_max + 1);
        q_max = 2 * (q_max + 1);
    }
}

fn quantum_grid(
    b: i64,
    c: i64,
    a1: i64,
    a2: i64,
    p_max: i64,
    q_max: i64,
    binom: &mut BinomialCache,
) -> Result<BTreeMap<(i64, i64), LaurentV>> {
    let mut grid: BTreeMap<(i64, i64), LaurentV> = BTreeMap::new();
    grid.insert((0, 0), LaurentV::one());
    let zero = LaurentV::zero();
    for (p, q) in cells(p_max, q_max).skip(1) {
        let lhs = c as i128 * a1 as i128 * q as i128;
        let rhs = b as i128 * a2 as i128 * p as i128;

        let first = |grid: &BTreeMap<(i64, i64), LaurentV>, binom: &mut BinomialCache| {
            let top = pos(a2 - c * q);
            let mut acc = LaurentV::zero();
            for k in 1..=p {
                let prev = grid.get(&(p - k, q)).unwrap_or(&zero);
                if prev.is_zero() {
                    continue;
                }
                let term = prev * binom.get(top + k - 1, k, b);
                if k % 2 == 1 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            acc
        };
        let second = |grid: &BTreeMap<(i64, i64), LaurentV>, binom: &mut BinomialCache| {
            let top = pos(a1 - b * p);
            let mut acc = LaurentV::zero();
            for l in 1..=q {
                let prev = grid.get(&(p, q - l)).unwrap_or(&zero);
                if prev.is_zero() {
                    continue;
                }
                let term = prev * binom.get(top + l - 1, l, c);
                if l % 2 == 1 {
                    acc += &term;
                } else {
                    acc -= &term;
                }
            }
            acc
        };

        let e = if lhs < rhs {
            first(&grid, binom)
        } else if lhs > rhs {
            second(&grid, binom)
        } else {
            let e1 = first(&grid, binom);
            let e2 = second(&grid, binom);
            if e1 != e2 {
                return Err(Error::InternalInconsistency {
                    b,
                    c,
                    a1,
                    a2,
                    p,
                    q,
                    first: e1.to_string(),
                    second: e2.to_string(),
                });
            }
            e1
        };
        if !e.is_zero() {
            grid.insert((p, q), e);
        }
    }
    Ok(grid)
}

/// The commutative greedy element `x[a1, a2]`, computed with ordinary
/// binomial coefficients. Kept separate from the quantum recurrence so the
/// two can be compared at `v = 1`.
pub fn classical_greedy(b: i64, c: i64, a1: i64, a2: i64) -> Result<ClassicalPointed> {
    check_bc(b, c)?;
    let (mut p_max, mut q_max) = initial_bound(a1, a2);
    loop {
        let grid = classical_grid(b, c, a1, a2, p_max + 1, q_max + 1)?;
        if grid.keys().all(|&(p, q)| p <= p_max && q <= q_max) {
            return Ok(ClassicalPointed { b, c, a1, a2, grid });
        }
        p_max = 2 * (p_max + 1);
        q_max = 2 * (q_max + 1);
    }
}

fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < k {
        return BigInt::zero();
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}

fn classical_grid(b: i64, c: i64, a1: i64, a2: i64, p_max: i64, q_max: i64) -> Result<BTreeMap<(i64, i64), BigInt>> {
    let mut e: BTreeMap<(i64, i64), BigInt> = BTreeMap::new();
    e.insert((0, 0), BigInt::one());
    let at = |e: &BTreeMap<(i64, i64), BigInt>, p, q| e.get(&(p, q)).cloned().unwrap_or_default();
    for p in 0..=p_max {
        for q in 0..=q_max {
            if (p, q) == (0, 0) {
                continue;
            }
            let first = || {
                (1..=p)
                    .map(|k| {
                        let sign = if k % 2 == 1 { 1 } else { -1 };
                        at(&e, p - k, q) * binomial(pos(a2 - c * q) + k - 1, k) * sign
                    })
                    .sum::<BigInt>()
            };
            let second = || {
                (1..=q)
                    .map(|l| {
                        let sign = if l % 2 == 1 { 1 } else { -1 };
                        at(&e, p, q - l) * binomial(pos(a1 - b * p) + l - 1, l) * sign
                    })
                    .sum::<BigInt>()
            };
            let lhs = c as i128 * a1 as i128 * q as i128;
            let rhs = b as i128 * a2 as i128 * p as i128;
            let val = match lhs.cmp(&rhs) {
                std::cmp::Ordering::Less => first(),
                std::cmp::Ordering::Greater => second(),
                std::cmp::Ordering::Equal => {
                    let (x, y) = (first(), second());
                    if x != y {
                        return Err(Error::InternalInconsistency {
                            b,
                            c,
                            a1,
                            a2,
                            p,
                            q,
                            first: x.to_string(),
                            second: y.to_string(),
                        });
                    }
                    x
                }
            };
            if !val.is_zero() {
                e.insert((p, q), val);
            }
        }
    }
    Ok(e)
}

/// Outcome of a property check: `None` witness means the property holds.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub pass: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub p: Option<i64>,
    pub q: Option<i64>,
    pub detail: String,
}

impl Verdict {
    pub fn ok() -> Self {
        Self { pass: true, witness: None }
    }

    pub fn fail(p: Option<i64>, q: Option<i64>, detail: impl Into<String>) -> Self {
        Self {
            pass: false,
            witness: Some(Witness { p, q, detail: detail.into() }),
        }
    }
}

/// Every nonzero `e(p, q)` must lie in the greedy region.
pub fn check_support_axiom(x: &PointedElement) -> Result<Verdict> {
    require_imaginary(x.b, x.c, x.a1, x.a2)?;
    for (&(p, q), e) in &x.grid {
        if !greedy_region_contains(x.b, x.c, x.a1, x.a2, p, q)? {
            return Ok(Verdict::fail(
                Some(p),
                Some(q),
                format!("e({p},{q}) = {e} lies outside the greedy region"),
            ));
        }
    }
    Ok(Verdict::ok())
}

/// Dense polynomial in a commuting variable `t` with `LaurentV` coefficients.
type TPoly = Vec<LaurentV>;

fn tpoly_trim(mut p: TPoly) -> TPoly {
    while p.last().is_some_and(LaurentV::is_zero) {
        p.pop();
    }
    p
}

fn tpoly_mul(f: &TPoly, g: &TPoly) -> TPoly {
    if f.is_empty() || g.is_empty() {
        return Vec::new();
    }
    let mut out = vec![LaurentV::zero(); f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += &(a * b);
        }
    }
    tpoly_trim(out)
}

/// Long division by a divisor whose leading coefficient is a unit `±v^k`;
/// returns the remainder.
fn tpoly_rem(num: &TPoly, den: &TPoly) -> TPoly {
    let den = tpoly_trim(den.clone());
    let lead = den.last().expect("nonzero divisor");
    assert!(lead.as_unit().is_some(), "divisor must be monic up to a unit");
    let mut rem = tpoly_trim(num.clone());
    while rem.len() >= den.len() {
        let shift = rem.len() - den.len();
        let top = rem.last().expect("nonempty").clone();
        let factor = top.div_exact(lead).expect("unit divides everything");
        for (i, d) in den.iter().enumerate() {
            let sub = &factor * d;
            rem[shift + i] -= &sub;
        }
        rem = tpoly_trim(rem);
    }
    rem
}

/// `prod_{j=1..n} (1 + v^{d(n+1-2j)} t)`.
fn divisibility_divisor(n: i64, d: i64) -> TPoly {
    let mut out: TPoly = vec![LaurentV::one()];
    for j in 1..=n {
        out = tpoly_mul(&out, &vec![LaurentV::one(), LaurentV::v_pow(d * (n + 1 - 2 * j))]);
    }
    out
}

/// Row `q` must be divisible by `prod_{j=1}^{a2-cq} (1 + v^{b(a2-cq+1-2j)} t)`
/// when `a2 > cq`; column `p` by `prod_{j=1}^{a1-bp} (1 + v^{c(a1-bp+1-2j)} t)`
/// when `a1 > bp`.
pub fn check_divisibility_axiom(x: &PointedElement) -> Result<Verdict> {
    require_imaginary(x.b, x.c, x.a1, x.a2)?;
    let (b, c, a1, a2) = (x.b, x.c, x.a1, x.a2);

    let mut q = 0;
    while a2 - c * q > 0 {
        let n = a2 - c * q;
        let row: TPoly = (0..=x.grid.keys().map(|k| k.0).max().unwrap_or(0))
            .map(|i| x.get(i, q))
            .collect();
        let rem = tpoly_rem(&row, &divisibility_divisor(n, b));
        if !rem.is_empty() {
            return Ok(Verdict::fail(
                None,
                Some(q),
                format!("row q={q} is not divisible by the degree-{n} product (remainder degree {})", rem.len() - 1),
            ));
        }
        q += 1;
    }

    let mut p = 0;
    while a1 - b * p > 0 {
        let n = a1 - b * p;
        let col: TPoly = (0..=x.grid.keys().map(|k| k.1).max().unwrap_or(0))
            .map(|i| x.get(p, i))
            .collect();
        let rem = tpoly_rem(&col, &divisibility_divisor(n, c));
        if !rem.is_empty() {
            return Ok(Verdict::fail(
                Some(p),
                None,
                format!("column p={p} is not divisible by the degree-{n} product (remainder degree {})", rem.len() - 1),
            ));
        }
        p += 1;
    }
    Ok(Verdict::ok())
}

#[derive(Serialize, Deserialize)]
struct PointedRepr {
    b: i64,
    c: i64,
    a: [i64; 2],
    grid: Vec<(i64, i64, LaurentV)>,
}

impl Serialize for PointedElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointedRepr {
            b: self.b,
            c: self.c,
            a: [self.a1, self.a2],
            grid: self
                .grid
                .iter()
                .map(|(&(p, q), e)| (p, q, e.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointedElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = PointedRepr::deserialize(d)?;
        let mut grid = BTreeMap::new();
        for (p, q, e) in r.grid {
            if grid.insert((p, q), e).is_some() {
                return Err(D::Error::custom(format!("duplicate grid entry ({p},{q})")));
            }
        }
        PointedElement::new(r.b, r.c, r.a[0], r.a[1], grid).map_err(D::Error::custom)
    }
}
