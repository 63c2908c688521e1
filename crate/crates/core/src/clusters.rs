//! Quantum cluster variables by exchange-relation mutation, cluster monomials
//! and the standard monomials `M[a1, a2]`.
//!
//! Cluster variables are memoized per `(b, c, m)` in memory and, when a
//! directory is configured, on disk (one JSON file per variable).

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::laurent::LaurentV;
use crate::qtorus::{exact_divide, exact_divide_left, exchange_exponent, TorusElement};

/// The expansions of `X_m` and `X_{m+1}` in the initial torus.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClusterPair {
    pub m: i64,
    pub first: TorusElement,
    pub second: TorusElement,
}

impl ClusterPair {
    /// `X_{m+1} X_m = v^2 X_m X_{m+1}`.
    pub fn quasi_commutes(&self) -> bool {
        &self.second * &self.first == (&self.first * &self.second).scale(&LaurentV::v_pow(2))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CacheStats {
    pub entries: usize,
    pub bytes: u64,
}

type Key = (i64, i64, i64);

pub struct ClusterCache {
    dir: Option<PathBuf>,
    mem: Mutex<HashMap<Key, TorusElement>>,
}

impl ClusterCache {
    pub fn in_memory() -> Self {
        Self {
            dir: None,
            mem: Mutex::new(HashMap::new()),
        }
    }

    pub fn with_dir(dir: impl Into<PathBuf>) -> Self {
        Self {
            dir: Some(dir.into()),
            mem: Mutex::new(HashMap::new()),
        }
    }

    /// Process-wide in-memory cache used by the free functions of this module.
    pub fn global() -> &'static ClusterCache {
        static GLOBAL: OnceLock<ClusterCache> = OnceLock::new();
        GLOBAL.get_or_init(ClusterCache::in_memory)
    }

    pub fn dir(&self) -> Option<&Path> {
        self.dir.as_deref()
    }

    fn entry_path(dir: &Path, (b, c, m): Key) -> PathBuf {
        dir.join(format!("b{b}_c{c}")).join(format!("m{m}.json"))
    }

    fn lookup(&self, key: Key) -> Result<Option<TorusElement>> {
        if let Some(x) = self.mem.lock().expect("cache poisoned").get(&key) {
            return Ok(Some(x.clone()));
        }
        let Some(dir) = &self.dir else {
            return Ok(None);
        };
        let path = Self::entry_path(dir, key);
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(source) => return Err(Error::Cache { path, source }),
        };
        let x: TorusElement = serde_json::from_str(&text)?;
        self.mem.lock().expect("cache poisoned").insert(key, x.clone());
        Ok(Some(x))
    }

    fn store(&self, key: Key, x: &TorusElement) -> Result<()> {
        self.mem.lock().expect("cache poisoned").insert(key, x.clone());
        let Some(dir) = &self.dir else {
            return Ok(());
        };
        let path = Self::entry_path(dir, key);
        if path.exists() {
            return Ok(());
        }
        let parent = path.parent().expect("entry path has a parent");
        fs::create_dir_all(parent).map_err(|source| Error::Cache {
            path: parent.to_path_buf(),
            source,
        })?;
        // Workers may race on the same entry; the content is identical, so
        // whichever rename lands last is fine.
        let tmp = parent.join(format!(
            ".m{}.{}.{:?}.tmp",
            key.2,
            std::process::id(),
            std::thread::current().id()
        ));
        let body = serde_json::to_string(x)?;
        fs::write(&tmp, body).map_err(|source| Error::Cache { path: tmp.clone(), source })?;
        fs::rename(&tmp, &path).map_err(|source| Error::Cache { path, source })?;
        Ok(())
    }

    /// Expansion of the cluster variable `X_m` in the initial torus.
    pub fn cluster_variable(&self, b: i64, c: i64, m: i64) -> Result<TorusElement> {
        if b < 1 || c < 1 {
            return Err(Error::InvalidArgument(format!(
                "b and c must be positive, got ({b},{c})"
            )));
        }
        if let Some(x) = self.lookup((b, c, m))? {
            return Ok(x);
        }
        let x = match m {
            1 => TorusElement::x1(),
            2 => TorusElement::x2(),
            m if m >= 3 => {
                // X_m X_{m-2} = v^e X_{m-1}^e + 1 with e from index m-1
                let prev = self.cluster_variable(b, c, m - 1)?;
                let prev2 = self.cluster_variable(b, c, m - 2)?;
                let rhs = exchange_rhs(&prev, exchange_exponent(m - 1, b, c));
                exact_divide(&rhs, &prev2).map_err(|e| mutation_failure(m, e))?
            }
            m => {
                // X_{m+2} X_m = v^e X_{m+1}^e + 1 with e from index m+1
                let next = self.cluster_variable(b, c, m + 1)?;
                let next2 = self.cluster_variable(b, c, m + 2)?;
                let rhs = exchange_rhs(&next, exchange_exponent(m + 1, b, c));
                exact_divide_left(&rhs, &next2).map_err(|e| mutation_failure(m, e))?
            }
        };
        self.store((b, c, m), &x)?;
        Ok(x)
    }

    pub fn cluster_pair(&self, b: i64, c: i64, m: i64) -> Result<ClusterPair> {
        Ok(ClusterPair {
            m,
            first: self.cluster_variable(b, c, m)?,
            second: self.cluster_variable(b, c, m + 1)?,
        })
    }

    /// `v^{a1 a2} X_m^{a1} X_{m+1}^{a2}` in the initial torus.
    pub fn cluster_monomial(&self, b: i64, c: i64, m: i64, a1: i64, a2: i64) -> Result<TorusElement> {
        if a1 < 0 || a2 < 0 {
            return Err(Error::InvalidArgument(format!(
                "cluster monomial exponents must be non-negative, got ({a1},{a2})"
            )));
        }
        let pair = self.cluster_pair(b, c, m)?;
        let prod = &pair.first.pow(a1 as u32) * &pair.second.pow(a2 as u32);
        Ok(prod.scale(&LaurentV::v_pow(a1 * a2)))
    }

    /// `M[a1,a2] = v^{a1 a2} X_3^{[a1]+} X_1^{[-a1]+} X_2^{[-a2]+} X_0^{[a2]+}`,
    /// multiplied in exactly that order.
    pub fn standard_monomial(&self, b: i64, c: i64, a1: i64, a2: i64) -> Result<TorusElement> {
        let factors = [
            (3, a1.max(0)),
            (1, (-a1).max(0)),
            (2, (-a2).max(0)),
            (0, a2.max(0)),
        ];
        let mut out = TorusElement::constant(LaurentV::v_pow(a1 * a2));
        for (m, e) in factors {
            if e > 0 {
                out = &out * &self.cluster_variable(b, c, m)?.pow(e as u32);
            }
        }
        Ok(out)
    }

    /// Counts the cache files on disk.
    pub fn stats(&self) -> Result<CacheStats> {
        let Some(dir) = &self.dir else {
            let entries = self.mem.lock().expect("cache poisoned").len();
            return Ok(CacheStats { entries, bytes: 0 });
        };
        let mut stats = CacheStats::default();
        let top = match fs::read_dir(dir) {
            Ok(rd) => rd,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(stats),
            Err(source) => return Err(Error::Cache { path: dir.clone(), source }),
        };
        for sub in top {
            let sub = sub.map_err(|source| Error::Cache { path: dir.clone(), source })?;
            if !sub.path().is_dir() {
                continue;
            }
            let rd = fs::read_dir(sub.path()).map_err(|source| Error::Cache { path: sub.path(), source })?;
            for f in rd {
                let f = f.map_err(|source| Error::Cache { path: sub.path(), source })?;
                let path = f.path();
                if path.extension().is_some_and(|e| e == "json") {
                    stats.entries += 1;
                    stats.bytes += f.metadata().map(|m| m.len()).unwrap_or(0);
                }
            }
        }
        Ok(stats)
    }

    /// Drops every cached entry, in memory and on disk.
    pub fn clear(&self) -> Result<()> {
        self.mem.lock().expect("cache poisoned").clear();
        if let Some(dir) = &self.dir {
            match fs::remove_dir_all(dir) {
                Ok(()) => {}
                Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
                Err(source) => return Err(Error::Cache { path: dir.clone(), source }),
            }
        }
        Ok(())
    }
}

fn exchange_rhs(x: &TorusElement, e: i64) -> TorusElement {
    let mut p = x.pow(e as u32).scale(&LaurentV::v_pow(e));
    p += &TorusElement::one();
    p
}

fn mutation_failure(m: i64, e: Error) -> Error {
    match e {
        Error::NotDivisible(reason) => Error::NotDivisible(format!(
            "mutation producing X_{m} failed (contradicts the quantum Laurent phenomenon): {reason}"
        )),
        other => other,
    }
}

pub fn cluster_variable(b: i64, c: i64, m: i64) -> Result<TorusElement> {
    ClusterCache::global().cluster_variable(b, c, m)
}

pub fn quantum_cluster_monomial(b: i64, c: i64, m: i64, a1: i64, a2: i64) -> Result<TorusElement> {
    ClusterCache::global().cluster_monomial(b, c, m, a1, a2)
}

pub fn standard_monomial(b: i64, c: i64, a1: i64, a2: i64) -> Result<TorusElement> {
    ClusterCache::global().standard_monomial(b, c, a1, a2)
}

/// Number of distinct cluster variables when the exchange graph is finite
/// (`bc <= 3`); mutation is then periodic with this period.
pub fn finite_type_period(b: i64, c: i64) -> Option<i64> {
    match b * c {
        1 => Some(5),
        2 => Some(6),
        3 => Some(8),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qtorus::pointed_monomial;

    fn mono(i: i64, j: i64, k: i64) -> TorusElement {
        TorusElement::monomial(i, j, LaurentV::v_pow(k))
    }

    #[test]
    fn seed_cluster() {
        assert_eq!(cluster_variable(2, 3, 1).unwrap(), TorusElement::x1());
        assert_eq!(cluster_variable(2, 3, 2).unwrap(), TorusElement::x2());
    }

    #[test]
    fn x0_for_a2() {
        // X2 X0 = v X1 + 1
        let x0 = cluster_variable(1, 1, 0).unwrap();
        assert_eq!(x0, &mono(1, -1, -1) + &mono(0, -1, 0));
    }

    #[test]
    fn a2_is_periodic() {
        for m in -3..4 {
            assert_eq!(
                cluster_variable(1, 1, m + 5).unwrap(),
                cluster_variable(1, 1, m).unwrap(),
                "m = {m}"
            );
        }
    }

    #[test]
    fn cluster_variables_are_bar_invariant_and_positive() {
        for (b, c) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
            for m in -3..=6 {
                let x = cluster_variable(b, c, m).unwrap();
                assert!(x.is_bar_invariant(), "(b,c)=({b},{c}) m={m}");
                assert!(x.is_positive(), "(b,c)=({b},{c}) m={m}");
            }
        }
    }

    #[test]
    fn neighbours_quasi_commute() {
        for (b, c) in [(1, 1), (2, 1), (2, 3)] {
            for m in -4..=4 {
                let pair = ClusterCache::global().cluster_pair(b, c, m).unwrap();
                assert!(pair.quasi_commutes(), "(b,c)=({b},{c}) m={m}");
            }
        }
    }

    #[test]
    fn cluster_monomial_examples() {
        assert_eq!(quantum_cluster_monomial(2, 3, 1, 2, 3).unwrap(), pointed_monomial(2, 3));
        assert_eq!(quantum_cluster_monomial(2, 3, 1, 0, 0).unwrap(), TorusElement::one());
        assert_eq!(
            quantum_cluster_monomial(1, 1, 3, 1, 0).unwrap(),
            cluster_variable(1, 1, 3).unwrap()
        );
        assert!(quantum_cluster_monomial(1, 1, 3, -1, 0).is_err());
    }

    #[test]
    fn standard_monomial_examples() {
        assert_eq!(standard_monomial(2, 3, 0, 0).unwrap(), TorusElement::one());
        assert_eq!(standard_monomial(2, 3, -1, -2).unwrap(), pointed_monomial(1, 2));
        assert_eq!(standard_monomial(2, 3, 1, 0).unwrap(), cluster_variable(2, 3, 3).unwrap());
    }

    #[test]
    fn disk_cache_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ClusterCache::with_dir(dir.path());
        assert_eq!(cache.stats().unwrap().entries, 0);
        for m in -2..=5 {
            cache.cluster_variable(2, 3, m).unwrap();
        }
        assert_eq!(cache.stats().unwrap().entries, 8);

        let fresh = ClusterCache::with_dir(dir.path());
        assert_eq!(
            fresh.cluster_variable(2, 3, 5).unwrap(),
            cluster_variable(2, 3, 5).unwrap()
        );
        fresh.clear().unwrap();
        assert_eq!(fresh.stats().unwrap().entries, 0);
    }

    #[test]
    fn periods() {
        assert_eq!(finite_type_period(1, 3), Some(8));
        assert_eq!(finite_type_period(2, 2), None);
    }
}
