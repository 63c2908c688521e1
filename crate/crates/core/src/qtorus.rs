//! The rank 2 quantum torus `Z[v^{±1}]<X1^{±1}, X2^{±1} : X2 X1 = v^2 X1 X2>`.
//!
//! Elements are stored in normal form: every monomial is written with all
//! `X1` powers to the left of all `X2` powers, so `(i, j)` keys the monomial
//! `X1^i X2^j`. The same type also represents elements of a neighbouring
//! torus `T_m`; the two generators are then read as `(X_m, X_{m+1})`, which
//! satisfy the same commutation rule.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::greedy::PointedElement;
use crate::laurent::LaurentV;

/// Exponent pair `(i, j)` of the monomial `X1^i X2^j`.
pub type Exponent = (i64, i64);

#[derive(Clone, Default, PartialEq, Eq)]
pub struct TorusElement {
    terms: BTreeMap<Exponent, LaurentV>,
}

/// Labels the cluster `{X_m, X_{m+1}}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClusterIndex(pub i64);

impl TorusElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, LaurentV::one())
    }

    pub fn x1() -> Self {
        Self::monomial(1, 0, LaurentV::one())
    }

    pub fn x2() -> Self {
        Self::monomial(0, 1, LaurentV::one())
    }

    /// `coeff * X1^i X2^j`.
    pub fn monomial(i: i64, j: i64, coeff: LaurentV) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert((i, j), coeff);
        }
        Self { terms }
    }

    pub fn constant(coeff: LaurentV) -> Self {
        Self::monomial(0, 0, coeff)
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, LaurentV)>>(iter: I) -> Self {
        let mut out = Self::zero();
        for (e, c) in iter {
            out.add_term(e, &c);
        }
        out
    }

    fn add_term(&mut self, e: Exponent, c: &LaurentV) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms sorted lexicographically by `(i, j)`.
    pub fn terms(&self) -> impl Iterator<Item = (Exponent, &LaurentV)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    pub fn coeff(&self, i: i64, j: i64) -> LaurentV {
        self.terms.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// Multiplies every coefficient by a scalar (scalars are central).
    pub fn scale(&self, s: &LaurentV) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, c * s)).collect(),
        }
    }

    /// Bar-involution: an antiautomorphism with `bar(c X1^i X2^j) = bar(c) v^{2ij} X1^i X2^j`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| ((i, j), c.bar().shift(2 * i * j)))
                .collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.bar() == *self
    }

    /// True when every Laurent coefficient lies in `Z>=0[v^{±1}]`.
    pub fn is_positive(&self) -> bool {
        self.terms.values().all(LaurentV::is_nonnegative)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a monomial with unit coefficient `±v^k`.
    pub fn inverse_monomial(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&(i, j), c) = self.terms.iter().next()?;
        let (sign, k) = c.as_unit()?;
        // (X1^i X2^j)^{-1} = v^{-2ij} X1^{-i} X2^{-j}
        let inv = LaurentV::monomial(-k - 2 * i * j, sign as i64);
        Some(Self::monomial(-i, -j, inv))
    }

    /// `self^n` for any integer `n`; negative powers need an invertible monomial.
    pub fn pow_signed(&self, n: i64) -> Option<Self> {
        if n >= 0 {
            Some(self.pow(n as u32))
        } else {
            Some(self.inverse_monomial()?.pow((-n) as u32))
        }
    }

    pub fn min_first_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.0).min()
    }

    pub fn min_second_exponent(&self) -> Option<i64> {
        self.terms.keys().map(|e| e.1).min()
    }

    /// Commutative specialization `v = 1`.
    pub fn eval_at_one(&self) -> BTreeMap<Exponent, BigInt> {
        self.terms
            .iter()
            .map(|(&e, c)| (e, c.eval_at_one()))
            .filter(|(_, c)| c != &BigInt::from(0))
            .collect()
    }

    /// Applies the ring map `X1 -> first`, `X2 -> second`. The images must
    /// satisfy `second * first = v^2 first * second`; whenever a negative power
    /// occurs the corresponding image has to be an invertible monomial.
    pub fn substitute(&self, first: &Self, second: &Self) -> Result<Self> {
        let mut first_pows: BTreeMap<i64, Self> = BTreeMap::new();
        let mut second_pows: BTreeMap<i64, Self> = BTreeMap::new();
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            if !first_pows.contains_key(&i) {
                let p = first.pow_signed(i).ok_or_else(|| {
                    Error::NotDivisible(format!("substitution needs a negative power {i} of a non-monomial"))
                })?;
                first_pows.insert(i, p);
            }
            if !second_pows.contains_key(&j) {
                let p = second.pow_signed(j).ok_or_else(|| {
                    Error::NotDivisible(format!("substitution needs a negative power {j} of a non-monomial"))
                })?;
                second_pows.insert(j, p);
            }
            let term = &first_pows[&i] * &second_pows[&j];
            out += &term.scale(c);
        }
        Ok(out)
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (&(i, j), c) in &self.terms {
            let coeff = if latex { c.to_latex() } else { c.to_string() };
            let mut mono = String::new();
            for (name, e) in [("X_1", i), ("X_2", j)] {
                if e == 0 {
                    continue;
                }
                let name = if latex { name.to_string() } else { name.replace('_', "") };
                mono.push_str(&name);
                if e != 1 {
                    if latex {
                        mono.push_str(&format!("^{{{e}}}"));
                    } else {
                        mono.push_str(&format!("^{e}"));
                    }
                }
            }
            let part = match (mono.is_empty(), c.is_one()) {
                (true, _) => format!("({coeff})"),
                (false, true) => mono,
                (false, false) => format!("({coeff}){mono}"),
            };
            parts.push(part);
        }
        parts.join(if latex { "+" } else { " + " })
    }
}

/// Product of normal-form monomials:
/// `(X1^a X2^b)(X1^c X2^d) = v^{2bc} X1^{a+c} X2^{b+d}`.
fn monomial_twist(left: Exponent, right: Exponent) -> i64 {
    2 * left.1 * right.0
}

/// `v^{a1 a2} X1^{a1} X2^{a2}`, the pointed monomial of the initial cluster.
pub fn pointed_monomial(a1: i64, a2: i64) -> TorusElement {
    TorusElement::monomial(a1, a2, LaurentV::v_pow(a1 * a2))
}

pub fn te_mul(f: &TorusElement, g: &TorusElement) -> TorusElement {
    f * g
}

pub fn te_bar(f: &TorusElement) -> TorusElement {
    f.bar()
}

#[derive(Clone, Copy)]
enum Side {
    /// Solve `q * g = f`.
    Right,
    /// Solve `g * q = f`.
    Left,
}

/// Solves `q * g = f` exactly.
pub fn exact_divide(f: &TorusElement, g: &TorusElement) -> Result<TorusElement> {
    divide(f, g, Side::Right)
}

/// Solves `g * q = f` exactly.
pub fn exact_divide_left(f: &TorusElement, g: &TorusElement) -> Result<TorusElement> {
    divide(f, g, Side::Left)
}

fn range_of(t: &TorusElement, pick: fn(&Exponent) -> i64) -> (i64, i64) {
    let mut it = t.terms.keys().map(pick);
    let first = it.next().unwrap_or(0);
    it.fold((first, first), |(lo, hi), x| (lo.min(x), hi.max(x)))
}

// Monomial order: lexicographic with the X2-degree dominant.
fn leading(t: &TorusElement) -> Option<(Exponent, &LaurentV)> {
    t.terms
        .iter()
        .max_by_key(|(&(i, j), _)| (j, i))
        .map(|(&e, c)| (e, c))
}

fn divide(f: &TorusElement, g: &TorusElement, side: Side) -> Result<TorusElement> {
    let (g_lead, g_lc) = leading(g).ok_or_else(|| Error::NotDivisible("division by zero".into()))?;
    if f.is_zero() {
        return Ok(TorusElement::zero());
    }
    // The torus is a domain, so the extreme exponents in each variable add
    // under multiplication; any quotient lives in this box.
    let (fi_lo, fi_hi) = range_of(f, |e| e.0);
    let (fj_lo, fj_hi) = range_of(f, |e| e.1);
    let (gi_lo, gi_hi) = range_of(g, |e| e.0);
    let (gj_lo, gj_hi) = range_of(g, |e| e.1);
    let (qi_lo, qi_hi) = (fi_lo - gi_lo, fi_hi - gi_hi);
    let (qj_lo, qj_hi) = (fj_lo - gj_lo, fj_hi - gj_hi);
    if qi_lo > qi_hi || qj_lo > qj_hi {
        return Err(Error::NotDivisible(
            "exponent ranges of dividend and divisor are incompatible".into(),
        ));
    }

    // Remainder keyed by (j, i) so the leading term is the last entry.
    let mut rem: BTreeMap<(i64, i64), LaurentV> = f.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect();
    let mut quot = TorusElement::zero();
    while let Some(((rj, ri), r_lc)) = rem.pop_last() {
        let e = (ri - g_lead.0, rj - g_lead.1);
        if e.0 < qi_lo || e.0 > qi_hi || e.1 < qj_lo || e.1 > qj_hi {
            return Err(Error::NotDivisible(format!(
                "remainder term X1^{ri}X2^{rj} cannot be cancelled"
            )));
        }
        let twist = |ge: Exponent| match side {
            Side::Right => monomial_twist(e, ge),
            Side::Left => monomial_twist(ge, e),
        };
        let kappa = r_lc.div_exact(&g_lc.shift(twist(g_lead))).ok_or_else(|| {
            Error::NotDivisible(format!(
                "coefficient {r_lc} is not divisible by {}",
                g_lc.shift(twist(g_lead))
            ))
        })?;
        for (&ge, gc) in &g.terms {
            if ge == g_lead {
                continue;
            }
            let key = (e.1 + ge.1, e.0 + ge.0);
            let delta = (&kappa * gc).shift(twist(ge));
            let entry = rem.entry(key).or_default();
            *entry -= &delta;
            if entry.is_zero() {
                rem.remove(&key);
            }
        }
        quot.add_term(e, &kappa);
    }
    Ok(quot)
}

/// Exponent in the exchange relation
/// `X_{k+1} X_{k-1} = v^e X_k^e + 1`: `e = b` for odd `k`, `e = c` for even `k`.
pub fn exchange_exponent(k: i64, b: i64, c: i64) -> i64 {
    if k.rem_euclid(2) == 1 {
        b
    } else {
        c
    }
}

/// `v^e Y^e + 1` where `Y` is the given generator.
fn exchange_polynomial(e: i64, generator: &TorusElement) -> TorusElement {
    let mut p = generator.pow(e as u32).scale(&LaurentV::v_pow(e));
    p += &TorusElement::one();
    p
}

fn power_of<'a>(powers: &'a mut Vec<TorusElement>, base: &TorusElement, n: usize) -> &'a TorusElement {
    while powers.len() <= n {
        let next = &powers[powers.len() - 1] * base;
        powers.push(next);
    }
    &powers[n]
}

/// Re-expands `f`, given in the cluster `{X_k, X_{k+1}}`, in the cluster
/// `{X_{k+1}, X_{k+2}}`.
fn step_up(f: &TorusElement, k: i64, b: i64, c: i64, check_only: bool) -> Result<TorusElement> {
    let e = exchange_exponent(k + 1, b, c);
    let y1 = TorusElement::x1();
    let y2_inv = TorusElement::monomial(0, -1, LaurentV::one());
    // X_k = X_{k+2}^{-1} (v^e X_{k+1}^e + 1)
    let departing = &y2_inv * &exchange_polynomial(e, &y1);
    // f = sum_i X_k^i B_i(X_{k+1}); each slice lands on its own power of X_{k+2}.
    let mut slices: BTreeMap<i64, TorusElement> = BTreeMap::new();
    for (&(i, j), coeff) in &f.terms {
        slices.entry(i).or_default().add_term((j, 0), coeff);
    }
    let mut powers = vec![TorusElement::one()];
    let mut out = TorusElement::zero();
    for (i, slice) in slices {
        let mut img = slice;
        if i >= 0 {
            if check_only {
                break;
            }
            img = power_of(&mut powers, &departing, i as usize) * &img;
        } else {
            for _ in 0..-i {
                img = exact_divide_left(&img, &departing)?;
            }
        }
        out += &img;
    }
    Ok(out)
}

/// Re-expands `f`, given in the cluster `{X_k, X_{k+1}}`, in the cluster
/// `{X_{k-1}, X_k}`.
fn step_down(f: &TorusElement, k: i64, b: i64, c: i64, check_only: bool) -> Result<TorusElement> {
    let e = exchange_exponent(k, b, c);
    let z2 = TorusElement::x2();
    let z1_inv = TorusElement::monomial(-1, 0, LaurentV::one());
    // X_{k+1} = (v^e X_k^e + 1) X_{k-1}^{-1}
    let departing = &exchange_polynomial(e, &z2) * &z1_inv;
    // f = sum_j A_j(X_k) X_{k+1}^j; each slice lands on its own power of X_{k-1}.
    let mut slices: BTreeMap<i64, TorusElement> = BTreeMap::new();
    for (&(i, j), coeff) in &f.terms {
        slices.entry(j).or_default().add_term((0, i), coeff);
    }
    let mut powers = vec![TorusElement::one()];
    let mut out = TorusElement::zero();
    for (j, slice) in slices {
        let mut img = slice;
        if j >= 0 {
            if check_only {
                break;
            }
            img = &img * power_of(&mut powers, &departing, j as usize);
        } else {
            for _ in 0..-j {
                img = exact_divide(&img, &departing)?;
            }
        }
        out += &img;
    }
    Ok(out)
}

/// Expansion of `f` (given in the initial cluster `{X1, X2}`) in the cluster
/// `{X_m, X_{m+1}}`, moving one cluster at a time.
pub fn expand_in_cluster(f: &TorusElement, m: ClusterIndex, b: i64, c: i64) -> Result<TorusElement> {
    expand_between_clusters(f, ClusterIndex(1), m, b, c)
}

/// Like [`expand_in_cluster`], starting from an arbitrary cluster `from`.
pub fn expand_between_clusters(
    f: &TorusElement,
    from: ClusterIndex,
    to: ClusterIndex,
    b: i64,
    c: i64,
) -> Result<TorusElement> {
    walk(f, from.0, to.0, b, c, false)
}

/// Checks that `f`, given in the cluster `{X_from, X_{from+1}}`, stays Laurent
/// in every cluster up to `to` without materializing the expansion in `to`
/// itself. Only the negative slices of the last step are divided out.
pub fn check_laurent_between_clusters(
    f: &TorusElement,
    from: ClusterIndex,
    to: ClusterIndex,
    b: i64,
    c: i64,
) -> Result<()> {
    walk(f, from.0, to.0, b, c, true).map(|_| ())
}

fn walk(f: &TorusElement, from: i64, to: i64, b: i64, c: i64, check_last: bool) -> Result<TorusElement> {
    let mut cur = f.clone();
    let mut k = from;
    let lift = |e: Error, target: i64| match e {
        Error::NotDivisible(reason) => Error::NotLaurent { m: target, reason },
        other => other,
    };
    while k != to {
        let dir = (to - k).signum();
        let last = check_last && k + dir == to;
        cur = if dir > 0 {
            step_up(&cur, k, b, c, last)
        } else {
            step_down(&cur, k, b, c, last)
        }
        .map_err(|e| lift(e, k + dir))?;
        k += dir;
    }
    Ok(cur)
}

/// Detects the pointing vector of `f` and extracts its coefficient grid.
pub fn to_pointed(f: &TorusElement, b: i64, c: i64) -> Result<PointedElement> {
    let min_i = f
        .min_first_exponent()
        .ok_or_else(|| Error::NotPointed("zero element".into()))?;
    let min_j = f.min_second_exponent().unwrap_or(0);
    let (a1, a2) = (-min_i, -min_j);
    let mut grid = BTreeMap::new();
    for (&(i, j), coeff) in &f.terms {
        let (di, dj) = (i + a1, j + a2);
        if di % b != 0 || dj % c != 0 {
            return Err(Error::NotPointed(format!(
                "exponent ({i},{j}) is off the lattice ({b}p-{a1}, {c}q-{a2})"
            )));
        }
        grid.insert((di / b, dj / c), coeff.shift(-i * j));
    }
    match grid.get(&(0, 0)) {
        None => Err(Error::NotPointed(format!("corner term X1^{min_i}X2^{min_j} is absent"))),
        Some(corner) if !corner.is_one() => Err(Error::NotPointed(format!(
            "corner coefficient is {corner}, expected 1"
        ))),
        Some(_) => PointedElement::new(b, c, a1, a2, grid),
    }
}

impl fmt::Display for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl fmt::Debug for TorusElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TorusElement({self})")
    }
}

impl AddAssign<&TorusElement> for TorusElement {
    fn add_assign(&mut self, rhs: &TorusElement) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c);
        }
    }
}

impl SubAssign<&TorusElement> for TorusElement {
    fn sub_assign(&mut self, rhs: &TorusElement) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, &-c);
        }
    }
}

impl Add for &TorusElement {
    type Output = TorusElement;
    fn add(self, rhs: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &TorusElement {
    type Output = TorusElement;
    fn sub(self, rhs: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &TorusElement {
    type Output = TorusElement;
    fn neg(self) -> TorusElement {
        TorusElement {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Mul for &TorusElement {
    type Output = TorusElement;
    fn mul(self, rhs: &TorusElement) -> TorusElement {
        let mut out = TorusElement::zero();
        for (&l, a) in &self.terms {
            for (&r, b) in &rhs.terms {
                let c = (a * b).shift(monomial_twist(l, r));
                out.add_term((l.0 + r.0, l.1 + r.1), &c);
            }
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct TorusRepr {
    terms: Vec<(i64, i64, LaurentV)>,
}

impl Serialize for TorusElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TorusRepr {
            terms: self
                .terms
                .iter()
                .map(|(&(i, j), c)| (i, j, c.clone()))
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TorusElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TorusRepr::deserialize(d)?;
        let mut terms = BTreeMap::new();
        for (i, j, c) in repr.terms {
            if c.is_zero() {
                return Err(D::Error::custom(format!("zero coefficient stored at ({i},{j})")));
            }
            if terms.insert((i, j), c).is_some() {
                return Err(D::Error::custom(format!("duplicate exponent ({i},{j})")));
            }
        }
        Ok(Self { terms })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lv(terms: &[(i64, i64)]) -> LaurentV {
        LaurentV::from_terms(terms.iter().copied())
    }

    fn mono(i: i64, j: i64, k: i64) -> TorusElement {
        TorusElement::monomial(i, j, LaurentV::v_pow(k))
    }

    #[test]
    fn mul_examples() {
        assert_eq!(te_mul(&TorusElement::x2(), &TorusElement::x1()), mono(1, 1, 2));
        assert_eq!(te_mul(&mono(-1, 0, 0), &TorusElement::x1()), TorusElement::one());
        let s = &TorusElement::x1() + &TorusElement::x2();
        let expect = TorusElement::from_terms([
            ((2, 0), LaurentV::one()),
            ((1, 1), lv(&[(0, 1), (2, 1)])),
            ((0, 2), LaurentV::one()),
        ]);
        assert_eq!(&s * &s, expect);
    }

    #[test]
    fn bar_examples() {
        assert_eq!(te_bar(&mono(1, 1, 1)), mono(1, 1, 1));
        assert_eq!(te_bar(&TorusElement::x1()), TorusElement::x1());
        assert_eq!(te_bar(&mono(1, 1, 3)), mono(1, 1, -1));
    }

    #[test]
    fn pointed_monomial_examples() {
        assert_eq!(pointed_monomial(0, 0), TorusElement::one());
        assert_eq!(pointed_monomial(1, 1), mono(1, 1, 1));
        assert_eq!(pointed_monomial(-3, -4), mono(-3, -4, 12));
        assert!(pointed_monomial(-3, 5).is_bar_invariant());
    }

    #[test]
    fn exact_divide_examples() {
        let f = &mono(1, 1, 2) + &TorusElement::x2();
        let q = exact_divide(&f, &TorusElement::x2()).unwrap();
        assert_eq!(q, &mono(1, 0, 2) + &TorusElement::one());

        for b in 1..4 {
            let g = &mono(b, 0, b) + &TorusElement::one();
            assert_eq!(exact_divide(&g, &g).unwrap(), TorusElement::one());
        }

        let f = &TorusElement::x1() + &TorusElement::one();
        let g = &TorusElement::x2() + &TorusElement::one();
        assert!(matches!(exact_divide(&f, &g), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn exact_divide_left_and_right_differ() {
        let q = &TorusElement::x2() + &TorusElement::one();
        let g = &TorusElement::x1() + &mono(0, 0, 3);
        let right = &q * &g;
        let left = &g * &q;
        assert_ne!(right, left);
        assert_eq!(exact_divide(&right, &g).unwrap(), q);
        assert_eq!(exact_divide_left(&left, &g).unwrap(), q);
    }

    #[test]
    fn exact_divide_rejects_non_unit_coefficient() {
        let f = TorusElement::constant(LaurentV::one());
        let g = TorusElement::constant(LaurentV::constant(2));
        assert!(exact_divide(&f, &g).is_err());
    }

    #[test]
    fn expand_identity() {
        let f = TorusElement::x1();
        assert_eq!(expand_in_cluster(&f, ClusterIndex(1), 2, 3).unwrap(), f);
    }

    #[test]
    fn expand_x2_in_cluster_zero() {
        // X2 X0 = v X1 + 1 for (b,c) = (1,1); in (X0, X1) coordinates
        // X2 = (v X1 + 1) X0^{-1} = v^{-1} X0^{-1} X1 + X0^{-1}.
        let got = expand_in_cluster(&TorusElement::x2(), ClusterIndex(0), 1, 1).unwrap();
        let expect = &mono(-1, 1, -1) + &mono(-1, 0, 0);
        assert_eq!(got, expect);
    }

    #[test]
    fn expand_round_trip() {
        let f = &(&mono(2, -1, 3) + &TorusElement::x2()) + &mono(-1, 0, -2);
        for m in [-3, -1, 0, 2, 4] {
            let there = expand_in_cluster(&f, ClusterIndex(m), 2, 3);
            // A random Laurent polynomial is not universally Laurent in general.
            if let Ok(there) = there {
                let back = expand_between_clusters(&there, ClusterIndex(m), ClusterIndex(1), 2, 3).unwrap();
                assert_eq!(back, f);
            }
        }
    }

    #[test]
    fn non_laurent_is_reported() {
        // X1^{-1} is not Laurent in the cluster {X2, X3}.
        let f = mono(-1, 0, 0);
        assert!(matches!(
            expand_in_cluster(&f, ClusterIndex(2), 1, 1),
            Err(Error::NotLaurent { m: 2, .. })
        ));
        assert!(matches!(
            check_laurent_between_clusters(&f, ClusterIndex(1), ClusterIndex(2), 1, 1),
            Err(Error::NotLaurent { m: 2, .. })
        ));
        // X2^{-1} is not Laurent in {X0, X1}; the walk stops there.
        let g = mono(0, -1, 0);
        assert!(matches!(
            check_laurent_between_clusters(&g, ClusterIndex(1), ClusterIndex(-1), 2, 3),
            Err(Error::NotLaurent { m: 0, .. })
        ));
        let x3 = expand_in_cluster(&mono(0, 1, 0), ClusterIndex(-2), 2, 3).unwrap();
        assert!(check_laurent_between_clusters(&x3, ClusterIndex(-2), ClusterIndex(-3), 2, 3).is_ok());
    }

    #[test]
    fn to_pointed_examples() {
        let p = to_pointed(&pointed_monomial(-1, -2), 2, 3).unwrap();
        assert_eq!((p.a1, p.a2), (1, 2));
        assert_eq!(p.grid.len(), 1);
        assert!(p.grid[&(0, 0)].is_one());

        let f = &TorusElement::x1() + &TorusElement::x2();
        assert!(matches!(to_pointed(&f, 1, 1), Err(Error::NotPointed(_))));

        let f = TorusElement::constant(LaurentV::constant(2));
        assert!(to_pointed(&f, 1, 1).is_err());
    }

    #[test]
    fn json_shape() {
        let f = &mono(1, 1, 2) + &TorusElement::x2();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"terms":[[0,1,{"terms":[[0,"1"]]}],[1,1,{"terms":[[2,"1"]]}]]}"#);
        let back: TorusElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
    }
}
