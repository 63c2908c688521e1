//! Laurent polynomials in a single variable `v` with arbitrary-precision
//! integer coefficients.
//!
//! Everything in the engine is a module over `Z[v, v^-1]`, so this is the
//! innermost arithmetic type. Values are kept in a canonical sparse form (no
//! zero coefficients stored), which makes structural equality coincide with
//! equality in the ring.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentV {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentV {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::v_pow(0)
    }

    /// `v^k`.
    pub fn v_pow(k: i64) -> Self {
        Self::monomial(k, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// `c * v^k`.
    pub fn monomial(k: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    /// Builds a value from `(exponent, coefficient)` pairs; repeated exponents
    /// are summed.
    pub fn from_terms<I, C>(iter: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (k, c) in iter {
            out.add_term(k, c.into());
        }
        out
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(k).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    /// Terms in ascending exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(&k, c)| (k, c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    fn from_dense(lo: i64, coeffs: Vec<BigInt>) -> Self {
        Self {
            terms: (lo..)
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// Multiplies by `v^k`.
    pub fn shift(&self, k: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(&e, c)| (e, c * s)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// The bar-involution `v -> v^-1`.
    pub fn bar(&self) -> Self {
        Self {
            terms: self.terms.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        self.terms
            .iter()
            .all(|(&e, c)| self.terms.get(&-e) == Some(c))
    }

    /// Keeps the terms with exponent `<= 0`, constant term included.
    pub fn nonpositive_part(&self) -> Self {
        Self {
            terms: self
                .terms
                .range(..=0)
                .map(|(&e, c)| (e, c.clone()))
                .collect(),
        }
    }

    /// The unique bar-invariant `f` whose non-positive part is `self`.
    pub fn symmetrize_from_nonpositive(&self) -> Result<Self> {
        if let Some(k) = self.max_exponent().filter(|&k| k > 0) {
            return Err(Error::InvalidArgument(format!(
                "symmetrize_from_nonpositive: input has positive exponent {k}"
            )));
        }
        let mut out = self.clone();
        for (&e, c) in self.terms.range(..0) {
            out.terms.insert(-e, c.clone());
        }
        Ok(out)
    }

    /// True when every coefficient is non-negative.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    /// True when the value lies in `v Z[v]` (zero included).
    pub fn in_v_positive_lattice(&self) -> bool {
        self.min_exponent().map_or(true, |k| k >= 1)
    }

    /// Specialization at `v = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// If `self = ±v^k`, returns `(sign, k)`.
    pub fn as_unit(&self) -> Option<(i8, i64)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (&k, c) = self.terms.iter().next()?;
        if c.is_one() {
            Some((1, k))
        } else if (-c).is_one() {
            Some((-1, k))
        } else {
            None
        }
    }

    /// Exact quotient `self / divisor`, or `None` when the divisor does not
    /// divide `self` in `Z[v^{±1}]`.
    pub fn div_exact(&self, divisor: &Self) -> Option<Self> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((sign, k)) = divisor.as_unit() {
            let q = self.shift(-k);
            return Some(if sign > 0 { q } else { -q });
        }
        let (d_hi, d_lc) = divisor.terms.iter().next_back().map(|(&k, c)| (k, c))?;
        let d_lo = divisor.min_exponent()?;
        let lowest_quotient_exp = self.min_exponent()? - d_lo;
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while let Some((&r_hi, r_lc)) = rem.terms.iter().next_back() {
            let e = r_hi - d_hi;
            if e < lowest_quotient_exp {
                return None;
            }
            let (c, r) = r_lc.div_rem(d_lc);
            if !r.is_zero() {
                return None;
            }
            let step = Self::monomial(e, c);
            rem -= &(&step * divisor);
            quot += &step;
        }
        Some(quot)
    }

    pub fn to_latex(&self) -> String {
        self.render(true)
    }

    /// Renders in descending exponent order, `v^6 + v^2 - 1 + v^-2` style
    /// (or `v^{6}+v^{2}-1+v^{-2}` for LaTeX).
    fn render(&self, latex: bool) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            match (i, neg, latex) {
                (0, true, _) => out.push('-'),
                (0, false, _) => {}
                (_, true, false) => out.push_str(" - "),
                (_, false, false) => out.push_str(" + "),
                (_, true, true) => out.push('-'),
                (_, false, true) => out.push('+'),
            }
            let unit = mag.is_one();
            if e == 0 {
                out.push_str(&mag.to_string());
                continue;
            }
            if !unit {
                out.push_str(&mag.to_string());
            }
            out.push('v');
            if e != 1 {
                if latex {
                    out.push_str(&format!("^{{{e}}}"));
                } else {
                    out.push_str(&format!("^{e}"));
                }
            }
        }
        out
    }
}

/// The bar-invariant quantum number `[n]_w` at `w = v^d`.
pub fn quantum_number(n: i64, d: i64) -> LaurentV {
    let k = n.abs();
    let mut out = LaurentV::zero();
    for j in 0..k {
        out.add_term(d * (k - 1 - 2 * j), BigInt::one());
    }
    if n < 0 {
        -out
    } else {
        out
    }
}

/// The bar-invariant quantum binomial coefficient `[n choose k]_w` at
/// `w = v^d`, via the product formula and an exact division.
pub fn quantum_binomial(n: i64, k: i64, d: i64) -> LaurentV {
    assert!(k >= 0, "quantum_binomial: k must be non-negative, got {k}");
    assert!(d >= 1, "quantum_binomial: d must be positive, got {d}");
    if k == 0 {
        return LaurentV::one();
    }
    let mut num = LaurentV::one();
    let mut den = LaurentV::one();
    for i in 0..k {
        num = &num * &quantum_number(n - i, d);
        den = &den * &quantum_number(i + 1, d);
    }
    num.div_exact(&den)
        .unwrap_or_else(|| panic!("quantum binomial [{n} choose {k}] at v^{d} is not a Laurent polynomial"))
}

impl fmt::Display for LaurentV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(false))
    }
}

impl fmt::Debug for LaurentV {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentV({self})")
    }
}

impl Neg for LaurentV {
    type Output = LaurentV;
    fn neg(mut self) -> LaurentV {
        for c in self.terms.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentV {
    type Output = LaurentV;
    fn neg(self) -> LaurentV {
        -self.clone()
    }
}

impl AddAssign<&LaurentV> for LaurentV {
    fn add_assign(&mut self, rhs: &LaurentV) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, c.clone());
        }
    }
}

impl SubAssign<&LaurentV> for LaurentV {
    fn sub_assign(&mut self, rhs: &LaurentV) {
        for (&k, c) in &rhs.terms {
            self.add_term(k, -c);
        }
    }
}

impl Add for &LaurentV {
    type Output = LaurentV;
    fn add(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentV {
    type Output = LaurentV;
    fn sub(self, rhs: &LaurentV) -> LaurentV {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul for &LaurentV {
    type Output = LaurentV;
    fn mul(self, rhs: &LaurentV) -> LaurentV {
        let (Some(lo_a), Some(lo_b)) = (self.min_exponent(), rhs.min_exponent()) else {
            return LaurentV::zero();
        };
        let lo = lo_a + lo_b;
        let span = (self.max_exponent().unwrap() + rhs.max_exponent().unwrap() - lo + 1) as usize;
        let bits = |t: &LaurentV| t.terms.values().map(|c| c.bits()).max().unwrap_or(0);
        let len_bits = 64 - (self.terms.len().min(rhs.terms.len()) as u64).leading_zeros() as u64;
        if bits(self) + bits(rhs) + len_bits < 126 {
            // Every partial sum fits in an i128.
            let small = |t: &LaurentV| -> Vec<(i64, i128)> {
                t.terms.iter().map(|(&e, c)| (e, c.to_i128().unwrap())).collect()
            };
            let (a, b) = (small(self), small(rhs));
            let mut acc = vec![0i128; span];
            for &(i, x) in &a {
                for &(j, y) in &b {
                    acc[(i + j - lo) as usize] += x * y;
                }
            }
            return LaurentV::from_dense(lo, acc.into_iter().map(BigInt::from).collect());
        }
        let mut acc = vec![BigInt::zero(); span];
        for (&i, a) in &self.terms {
            for (&j, b) in &rhs.terms {
                acc[(i + j - lo) as usize] += a * b;
            }
        }
        LaurentV::from_dense(lo, acc)
    }
}

macro_rules! forward_owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentV {
            type Output = LaurentV;
            fn $m(self, rhs: LaurentV) -> LaurentV {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentV> for LaurentV {
            type Output = LaurentV;
            fn $m(self, rhs: &LaurentV) -> LaurentV {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl From<i64> for LaurentV {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

#[derive(Serialize, Deserialize)]
struct LaurentRepr {
    terms: Vec<(i64, String)>,
}

impl Serialize for LaurentV {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        LaurentRepr {
            terms: self.terms.iter().map(|(&k, c)| (k, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for LaurentV {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = LaurentRepr::deserialize(d)?;
        let mut terms = BTreeMap::new();
        for (k, c) in repr.terms {
            let c: BigInt = c.parse().map_err(D::Error::custom)?;
            if c.is_zero() {
                return Err(D::Error::custom(format!("zero coefficient stored at v^{k}")));
            }
            if terms.insert(k, c).is_some() {
                return Err(D::Error::custom(format!("duplicate exponent {k}")));
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

    #[test]
    fn ring_ops_examples() {
        let a = lv(&[(1, 1), (0, 1)]);
        let b = lv(&[(-1, 1), (0, -1)]);
        assert_eq!(&a + &b, lv(&[(1, 1), (-1, 1)]));

        let a = lv(&[(1, 1), (-1, -1)]);
        let b = lv(&[(1, 1), (-1, 1)]);
        assert_eq!(&a * &b, lv(&[(2, 1), (-2, -1)]));

        let four = quantum_binomial(4, 1, 2);
        assert_eq!(&four * &LaurentV::one(), lv(&[(6, 1), (2, 1), (-2, 1), (-6, 1)]));
    }

    #[test]
    fn bar_examples() {
        let f = lv(&[(2, 1), (0, -1), (-2, 1)]);
        assert_eq!(f.bar(), f);
        assert_eq!(LaurentV::v_pow(3).bar(), LaurentV::v_pow(-3));
        assert_eq!(LaurentV::zero().bar(), LaurentV::zero());
    }

    #[test]
    fn nonpositive_part_examples() {
        let f = lv(&[(2, 1), (0, -1), (-2, 1)]);
        assert_eq!(f.nonpositive_part(), lv(&[(0, -1), (-2, 1)]));
        assert!(lv(&[(1, 1), (3, 1)]).nonpositive_part().is_zero());
        assert_eq!(LaurentV::constant(5).nonpositive_part(), LaurentV::constant(5));
    }

    #[test]
    fn symmetrize_examples() {
        let g = lv(&[(0, -1), (-2, 1)]);
        assert_eq!(
            g.symmetrize_from_nonpositive().unwrap(),
            lv(&[(2, 1), (0, -1), (-2, 1)])
        );
        assert_eq!(
            LaurentV::constant(7).symmetrize_from_nonpositive().unwrap(),
            LaurentV::constant(7)
        );
        assert_eq!(
            LaurentV::v_pow(-1).symmetrize_from_nonpositive().unwrap(),
            lv(&[(1, 1), (-1, 1)])
        );
        assert!(LaurentV::v_pow(1).symmetrize_from_nonpositive().is_err());
    }

    #[test]
    fn quantum_binomial_examples() {
        assert_eq!(quantum_binomial(4, 1, 2), lv(&[(6, 1), (2, 1), (-2, 1), (-6, 1)]));
        assert_eq!(quantum_binomial(3, 1, 3), lv(&[(6, 1), (0, 1), (-6, 1)]));
        assert_eq!(quantum_binomial(2, 2, 2), LaurentV::one());
        assert!(quantum_binomial(0, 1, 1).is_zero());
        assert!(quantum_binomial(2, 5, 1).is_zero());
        assert_eq!(quantum_binomial(-3, 0, 1), LaurentV::one());
    }

    #[test]
    fn quantum_binomial_negative_top() {
        // [-1 choose k]_w = (-1)^k
        for k in 0..6 {
            let expect = if k % 2 == 0 { 1 } else { -1 };
            assert_eq!(quantum_binomial(-1, k, 1), LaurentV::constant(expect));
        }
        // [-2 choose 2]_w = [2][3]/[2] = [3]_w
        assert_eq!(quantum_binomial(-2, 2, 1), quantum_number(3, 1));
    }

    #[test]
    fn div_exact_rejects_non_divisors() {
        let f = lv(&[(1, 1), (0, 1)]);
        let g = lv(&[(1, 1), (0, -1)]);
        assert!(f.div_exact(&g).is_none());
        let two = LaurentV::constant(2);
        assert!(LaurentV::one().div_exact(&two).is_none());
        assert_eq!((&f * &g).div_exact(&g), Some(f));
    }

    #[test]
    fn display_matches_descending_order() {
        let f = lv(&[(2, 1), (0, -1), (-2, 1)]);
        assert_eq!(f.to_string(), "v^2 - 1 + v^-2");
        assert_eq!(f.to_latex(), "v^{2}-1+v^{-2}");
        assert_eq!(lv(&[(1, -3)]).to_string(), "-3v");
    }

    #[test]
    fn json_shape() {
        let f = lv(&[(2, 1), (0, -1), (-2, 1)]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"terms":[[-2,"1"],[0,"-1"],[2,"1"]]}"#);
        let back: LaurentV = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(serde_json::from_str::<LaurentV>(r#"{"terms":[[0,"0"]]}"#).is_err());
    }
}
