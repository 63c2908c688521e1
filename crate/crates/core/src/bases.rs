//! Basis conversions: greedy elements in terms of standard monomials, and the
//! triangular basis in terms of greedy elements.
//!
//! [`Algebra`] bundles the parameters `(b, c)` with memo tables for greedy
//! elements, standard monomials and `q`-tables, since the triangular
//! recursion revisits the same indices many times.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::clusters::ClusterCache;
use crate::error::{Error, Result};
use crate::greedy::{is_imaginary_root, quantum_greedy, PointedElement};
use crate::laurent::LaurentV;
use crate::qtorus::{to_pointed, TorusElement};

pub type Index = (i64, i64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisTag {
    Standard,
    Greedy,
}

/// Coefficients of an element in the standard or the greedy basis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "ExpansionRepr", try_from = "ExpansionRepr")]
pub struct BasisExpansion {
    pub target: BasisTag,
    pub pointing: Index,
    pub coeffs: BTreeMap<Index, LaurentV>,
}

#[derive(Serialize, Deserialize)]
struct ExpansionRepr {
    target: BasisTag,
    pointing: [i64; 2],
    coeffs: Vec<(i64, i64, LaurentV)>,
}

impl From<BasisExpansion> for ExpansionRepr {
    fn from(e: BasisExpansion) -> Self {
        ExpansionRepr {
            target: e.target,
            pointing: [e.pointing.0, e.pointing.1],
            coeffs: e.coeffs.into_iter().map(|((i, j), c)| (i, j, c)).collect(),
        }
    }
}

impl TryFrom<ExpansionRepr> for BasisExpansion {
    type Error = String;
    fn try_from(r: ExpansionRepr) -> std::result::Result<Self, String> {
        let mut coeffs = BTreeMap::new();
        for (i, j, c) in r.coeffs {
            if c.is_zero() {
                return Err(format!("zero coefficient at ({i},{j})"));
            }
            if coeffs.insert((i, j), c).is_some() {
                return Err(format!("duplicate index ({i},{j})"));
            }
        }
        Ok(BasisExpansion {
            target: r.target,
            pointing: (r.pointing[0], r.pointing[1]),
            coeffs,
        })
    }
}

/// `(a1', a2') < (a1, a2)` iff both entries are strictly smaller.
pub fn strictly_below(x: Index, y: Index) -> bool {
    x.0 < y.0 && x.1 < y.1
}

impl BasisExpansion {
    pub fn get(&self, idx: Index) -> LaurentV {
        self.coeffs.get(&idx).cloned().unwrap_or_default()
    }

    /// Leading coefficient 1 at `pointing`, every other index strictly below it.
    pub fn check_unitriangular(&self) -> Result<()> {
        let (a1, a2) = self.pointing;
        if !self.get(self.pointing).is_one() {
            return Err(Error::OrderViolation(a1, a2, a1, a2));
        }
        for &idx in self.coeffs.keys() {
            if idx != self.pointing && !strictly_below(idx, self.pointing) {
                return Err(Error::OrderViolation(idx.0, idx.1, a1, a2));
            }
        }
        Ok(())
    }

    pub fn off_diagonal(&self) -> impl Iterator<Item = (Index, &LaurentV)> + '_ {
        self.coeffs
            .iter()
            .filter(move |(&k, _)| k != self.pointing)
            .map(|(&k, c)| (k, c))
    }
}

/// A verdict from the triangular support check.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SupportComparison {
    /// Grid points where nonzero-ness matches the inequality.
    pub agreements: usize,
    /// Nonzero `e(p,q)` where the inequality fails.
    pub nonzero_outside: Vec<Index>,
    /// `e(p,q) = 0` where the inequality holds.
    pub zero_inside: Vec<Index>,
    /// Nonzero entries beyond the box `p <= a2`, `q <= a1`.
    pub beyond_box: Vec<Index>,
}

impl SupportComparison {
    pub fn consistent(&self) -> bool {
        self.nonzero_outside.is_empty() && self.zero_inside.is_empty() && self.beyond_box.is_empty()
    }
}

pub struct Algebra<'a> {
    pub b: i64,
    pub c: i64,
    clusters: &'a ClusterCache,
    greedy: HashMap<Index, PointedElement>,
    standard: HashMap<Index, TorusElement>,
    q_tables: HashMap<Index, BasisExpansion>,
}

impl<'a> Algebra<'a> {
    pub fn new(b: i64, c: i64, clusters: &'a ClusterCache) -> Result<Self> {
        if b < 1 || c < 1 {
            return Err(Error::InvalidArgument(format!(
                "b and c must be positive, got ({b},{c})"
            )));
        }
        Ok(Self {
            b,
            c,
            clusters,
            greedy: HashMap::new(),
            standard: HashMap::new(),
            q_tables: HashMap::new(),
        })
    }

    pub fn clusters(&self) -> &'a ClusterCache {
        self.clusters
    }

    pub fn greedy(&mut self, a: Index) -> Result<&PointedElement> {
        if !self.greedy.contains_key(&a) {
            let x = quantum_greedy(self.b, self.c, a.0, a.1)?;
            self.greedy.insert(a, x);
        }
        Ok(&self.greedy[&a])
    }

    pub fn greedy_torus(&mut self, a: Index) -> Result<TorusElement> {
        Ok(self.greedy(a)?.to_torus())
    }

    pub fn standard_monomial(&mut self, a: Index) -> Result<&TorusElement> {
        if !self.standard.contains_key(&a) {
            let m = self.clusters.standard_monomial(self.b, self.c, a.0, a.1)?;
            self.standard.insert(a, m);
        }
        Ok(&self.standard[&a])
    }

    /// Peels standard monomials off `f`: the remaining term with smallest
    /// `(d1 + d2, d1)` is the corner of exactly one `M[-d1, -d2]`.
    pub fn expand_in_standard_basis(&mut self, f: &TorusElement) -> Result<BasisExpansion> {
        let cap = 4 * f.num_terms();
        let mut rem = f.clone();
        let mut coeffs = BTreeMap::new();
        let mut pointing = None;
        let mut steps = 0;
        while let Some(((d1, d2), coeff)) = rem
            .terms()
            .min_by_key(|((d1, d2), _)| (d1 + d2, *d1))
            .map(|(e, c)| (e, c.clone()))
        {
            if steps >= cap {
                return Err(Error::NonTermination(steps));
            }
            steps += 1;
            // The corner of M[a] is the pointed monomial v^{d1 d2} X1^{d1} X2^{d2}.
            let kappa = coeff.shift(-d1 * d2);
            let idx = (-d1, -d2);
            let m = self.standard_monomial(idx)?.scale(&kappa);
            rem -= &m;
            pointing.get_or_insert(idx);
            coeffs.insert(idx, kappa);
        }
        Ok(BasisExpansion {
            target: BasisTag::Standard,
            pointing: pointing.unwrap_or((0, 0)),
            coeffs,
        })
    }

    /// `X[a] = M[a] + sum_{a' < a} q^{a}_{a'} M[a']`.
    pub fn greedy_to_standard_q(&mut self, a: Index) -> Result<&BasisExpansion> {
        if !self.q_tables.contains_key(&a) {
            let x = self.greedy_torus(a)?;
            let mut exp = self.expand_in_standard_basis(&x)?;
            exp.pointing = a;
            exp.check_unitriangular()?;
            self.q_tables.insert(a, exp);
        }
        Ok(&self.q_tables[&a])
    }

    /// `C[a] = X[a] + sum_{a' < a} r^{a}_{a'} X[a']`, from the recursion on
    /// non-positive parts. Indices are processed by decreasing `a1 + a2`,
    /// ties by decreasing `a1`.
    pub fn triangular_r_coeffs(&mut self, a: Index) -> Result<BasisExpansion> {
        let mut r: BTreeMap<Index, LaurentV> = BTreeMap::new();
        r.insert(a, LaurentV::one());
        let key = |idx: Index| (idx.0 + idx.1, idx.0, idx.1);
        let mut queue: BTreeSet<(i64, i64, i64)> = BTreeSet::new();
        let push_support = |queue: &mut BTreeSet<_>, q: &BasisExpansion| {
            for (idx, _) in q.off_diagonal() {
                queue.insert(key(idx));
            }
        };
        let q_top = self.greedy_to_standard_q(a)?.clone();
        push_support(&mut queue, &q_top);

        while let Some((_, i1, i2)) = queue.pop_last() {
            let target = (i1, i2);
            let mut acc = LaurentV::zero();
            let above: Vec<(Index, LaurentV)> = r
                .iter()
                .filter(|(&k, _)| strictly_below(target, k))
                .map(|(&k, v)| (k, v.clone()))
                .collect();
            for (k, rk) in above {
                let qk = self.greedy_to_standard_q(k)?.get(target);
                if !qk.is_zero() {
                    acc += &(&rk * &qk).nonpositive_part();
                }
            }
            let coeff = (-acc).symmetrize_from_nonpositive()?;
            if coeff.is_zero() {
                continue;
            }
            let q_here = self.greedy_to_standard_q(target)?.clone();
            push_support(&mut queue, &q_here);
            r.insert(target, coeff);
        }
        Ok(BasisExpansion {
            target: BasisTag::Greedy,
            pointing: a,
            coeffs: r,
        })
    }

    /// `C[a]` in the initial torus, checked against (P1) bar-invariance and
    /// (P2) `C[a] - M[a]` in the `v`-positive lattice.
    pub fn triangular_element(&mut self, a: Index) -> Result<TorusElement> {
        self.triangular_with_expansions(a).map(|(c, _, _)| c)
    }

    /// Returns `C[a]`, its `r`-table and its standard-monomial expansion.
    pub fn triangular_with_expansions(
        &mut self,
        a: Index,
    ) -> Result<(TorusElement, BasisExpansion, BasisExpansion)> {
        let r = self.triangular_r_coeffs(a)?;
        let mut total = TorusElement::zero();
        for (&idx, coeff) in &r.coeffs {
            total += &self.greedy_torus(idx)?.scale(coeff);
        }
        if !total.is_bar_invariant() {
            return Err(Error::P1Violation(a.0, a.1));
        }
        let m_exp = self.expand_in_standard_basis(&total)?;
        for (&idx, coeff) in &m_exp.coeffs {
            let ok = if idx == a {
                coeff.is_one()
            } else {
                coeff.in_v_positive_lattice()
            };
            if !ok {
                return Err(Error::P2Violation {
                    a1: a.0,
                    a2: a.1,
                    i: idx.0,
                    j: idx.1,
                    coeff: coeff.to_string(),
                });
            }
        }
        if !m_exp.coeffs.contains_key(&a) {
            return Err(Error::P2Violation {
                a1: a.0,
                a2: a.1,
                i: a.0,
                j: a.1,
                coeff: "0".into(),
            });
        }
        Ok((total, r, m_exp))
    }

    /// Compares the support of `C[a]` with the region
    /// `b p^2 + b c p q + c q^2 <= c a1 q + b a2 p` on `0 <= p <= a2`, `0 <= q <= a1`.
    pub fn check_triangular_support_conjecture(&mut self, a: Index) -> Result<SupportComparison> {
        let (b, c) = (self.b, self.c);
        let (a1, a2) = a;
        if !is_imaginary_root(b, c, a1, a2) {
            return Err(Error::InvalidArgument(format!(
                "({a1},{a2}) is not a positive imaginary root for (b,c)=({b},{c})"
            )));
        }
        let elem = self.triangular_element(a)?;
        let pointed = to_pointed(&elem, b, c)?;
        if (pointed.a1, pointed.a2) != a {
            return Err(Error::NotPointed(format!(
                "C[{a1},{a2}] is pointed at ({},{})",
                pointed.a1, pointed.a2
            )));
        }
        let mut out = SupportComparison::default();
        for p in 0..=a2 {
            for q in 0..=a1 {
                let nonzero = !pointed.get(p, q).is_zero();
                let inside = conjectured_triangular_support(b, c, a1, a2, p, q);
                match (nonzero, inside) {
                    (true, false) => out.nonzero_outside.push((p, q)),
                    (false, true) => out.zero_inside.push((p, q)),
                    _ => out.agreements += 1,
                }
            }
        }
        out.beyond_box = pointed
            .grid
            .keys()
            .filter(|&&(p, q)| p > a2 || q > a1)
            .copied()
            .collect();
        Ok(out)
    }
}

/// `b p^2 + b c p q + c q^2 <= c a1 q + b a2 p`.
pub fn conjectured_triangular_support(b: i64, c: i64, a1: i64, a2: i64, p: i64, q: i64) -> bool {
    let (b, c, a1, a2, p, q) = (b as i128, c as i128, a1 as i128, a2 as i128, p as i128, q as i128);
    b * p * p + b * c * p * q + c * q * q <= c * a1 * q + b * a2 * p
}

pub fn expand_in_standard_basis(f: &TorusElement, b: i64, c: i64) -> Result<BasisExpansion> {
    Algebra::new(b, c, ClusterCache::global())?.expand_in_standard_basis(f)
}

pub fn greedy_to_standard_q(b: i64, c: i64, a1: i64, a2: i64) -> Result<BasisExpansion> {
    Algebra::new(b, c, ClusterCache::global())?
        .greedy_to_standard_q((a1, a2))
        .cloned()
}

pub fn triangular_r_coeffs(b: i64, c: i64, a1: i64, a2: i64) -> Result<BasisExpansion> {
    Algebra::new(b, c, ClusterCache::global())?.triangular_r_coeffs((a1, a2))
}

pub fn triangular_element(b: i64, c: i64, a1: i64, a2: i64) -> Result<TorusElement> {
    Algebra::new(b, c, ClusterCache::global())?.triangular_element((a1, a2))
}

pub fn check_triangular_support_conjecture(b: i64, c: i64, a1: i64, a2: i64) -> Result<SupportComparison> {
    Algebra::new(b, c, ClusterCache::global())?.check_triangular_support_conjecture((a1, a2))
}
