//! Batch checks over the grid `0 <= a1, a2 <= bound`.
//!
//! Every cell is independent; cells are distributed over a rayon pool and
//! the report is sorted afterwards, so its content does not depend on the
//! number of workers.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bases::Algebra;
use crate::clusters::ClusterCache;
use crate::error::{Error, Result};
use crate::greedy::{
    check_divisibility_axiom, check_support_axiom, is_imaginary_root, quantum_greedy_with_stats, GreedyStats,
    PointedElement, Verdict,
};
use crate::qtorus::{expand_in_cluster, ClusterIndex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    GreedyPositivity,
    Divisibility,
    Support,
    TieConsistency,
    RPositivity,
    TriangularSupport,
    /// `C[a] - X[a]` has non-negative initial-cluster coefficients.
    Domination,
}

impl Check {
    pub const ALL: [Check; 7] = [
        Check::GreedyPositivity,
        Check::Divisibility,
        Check::Support,
        Check::TieConsistency,
        Check::RPositivity,
        Check::TriangularSupport,
        Check::Domination,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::GreedyPositivity => "greedy-positivity",
            Check::Divisibility => "divisibility",
            Check::Support => "support",
            Check::TieConsistency => "tie-consistency",
            Check::RPositivity => "r-positivity",
            Check::TriangularSupport => "triangular-support",
            Check::Domination => "domination",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Check::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown check '{s}'")))
    }
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub b: i64,
    pub c: i64,
    pub bound: i64,
    pub checks: Vec<Check>,
    /// When set to `r`, positivity is also checked in every cluster `|m| <= r`.
    pub cluster_radius: Option<i64>,
    /// Worker count; `None` uses all cores.
    pub threads: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellResult {
    pub a: [i64; 2],
    pub check: String,
    pub pass: bool,
    pub witness: Value,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanReport {
    pub b: i64,
    pub c: i64,
    pub bound: i64,
    pub checks: Vec<String>,
    pub results: Vec<CellResult>,
    pub clusters_covered: Vec<i64>,
}

impl ScanReport {
    /// Pointing vectors that failed `check`.
    pub fn failures(&self, check: Check) -> Vec<(i64, i64)> {
        self.results
            .iter()
            .filter(|r| r.check == check.as_str() && !r.pass)
            .map(|r| (r.a[0], r.a[1]))
            .collect()
    }

    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn first_failure(&self) -> Option<&CellResult> {
        self.results.iter().find(|r| !r.pass)
    }
}

fn verdict_value(v: &Verdict) -> Value {
    match &v.witness {
        None => json!({}),
        Some(w) => json!({"p": w.p, "q": w.q, "detail": w.detail}),
    }
}

fn skipped(reason: &str) -> (bool, Value) {
    (true, json!({"skipped": reason}))
}

struct Cell<'a> {
    a: (i64, i64),
    alg: Algebra<'a>,
    greedy: std::result::Result<(PointedElement, GreedyStats), String>,
    radius: Option<i64>,
}

impl Cell<'_> {
    fn run(&mut self, check: Check) -> (bool, Value) {
        let (b, c) = (self.alg.b, self.alg.c);
        let (a1, a2) = self.a;
        let imaginary = is_imaginary_root(b, c, a1, a2);
        let greedy = match (&self.greedy, check) {
            (Err(e), Check::TieConsistency) => return (false, json!({"error": e})),
            (Err(e), _) => return (false, json!({"error": format!("greedy element unavailable: {e}")})),
            (Ok((x, stats)), _) => (x.clone(), *stats),
        };
        let (x, stats) = greedy;
        let mut out = match check {
            Check::TieConsistency => (true, json!({})),
            Check::GreedyPositivity => self.positivity(&x),
            Check::Support if imaginary => into_pair(check_support_axiom(&x)),
            Check::Divisibility if imaginary => into_pair(check_divisibility_axiom(&x)),
            Check::Support | Check::Divisibility => skipped("not a positive imaginary root"),
            Check::RPositivity => self.r_positivity(),
            Check::TriangularSupport if imaginary => self.triangular_support(),
            Check::TriangularSupport => skipped("not a positive imaginary root"),
            Check::Domination => self.domination(&x),
        };
        if stats.bound_retries > 0 {
            if let Value::Object(map) = &mut out.1 {
                map.insert("bound_retries".into(), json!(stats.bound_retries));
            }
        }
        out
    }

    fn positivity(&mut self, x: &PointedElement) -> (bool, Value) {
        if let Some(((p, q), e)) = x.first_non_positive() {
            return (false, json!({"m": 1, "p": p, "q": q, "coefficient": e.to_string()}));
        }
        let Some(r) = self.radius else {
            return (true, json!({}));
        };
        let torus = x.to_torus();
        for m in -r..=r {
            if m == 1 {
                continue;
            }
            match expand_in_cluster(&torus, ClusterIndex(m), x.b, x.c) {
                Err(e) => return (false, json!({"m": m, "error": e.to_string()})),
                Ok(y) => {
                    if let Some(((i, j), coeff)) = y.terms().find(|(_, c)| !c.is_nonnegative()) {
                        return (
                            false,
                            json!({"m": m, "exponent": [i, j], "coefficient": coeff.to_string()}),
                        );
                    }
                }
            }
        }
        (true, json!({}))
    }

    fn r_positivity(&mut self) -> (bool, Value) {
        match self.alg.triangular_r_coeffs(self.a) {
            Err(e) => (false, json!({"error": e.to_string()})),
            Ok(r) => match r.coeffs.iter().find(|(_, v)| !v.is_nonnegative()) {
                Some((idx, v)) => (false, json!({"index": [idx.0, idx.1], "coefficient": v.to_string()})),
                None => (true, json!({})),
            },
        }
    }

    fn triangular_support(&mut self) -> (bool, Value) {
        match self.alg.check_triangular_support_conjecture(self.a) {
            Err(e) => (false, json!({"error": e.to_string()})),
            Ok(cmp) if cmp.consistent() => (true, json!({"agreements": cmp.agreements})),
            Ok(cmp) => (false, serde_json::to_value(&cmp).expect("serializable")),
        }
    }

    fn domination(&mut self, x: &PointedElement) -> (bool, Value) {
        match self.alg.triangular_element(self.a) {
            Err(e) => (false, json!({"error": e.to_string()})),
            Ok(c_elem) => {
                let diff = &c_elem - &x.to_torus();
                let bad = diff.terms().find(|(_, c)| !c.is_nonnegative()).map(|(e, c)| (e, c.to_string()));
                match bad {
                    Some(((i, j), coeff)) => (false, json!({"exponent": [i, j], "coefficient": coeff})),
                    None => (true, json!({})),
                }
            }
        }
    }
}

fn into_pair(v: Result<Verdict>) -> (bool, Value) {
    match v {
        Ok(v) => (v.pass, verdict_value(&v)),
        Err(e) => (false, json!({"error": e.to_string()})),
    }
}

/// Runs `checks`, in the given order, on the single pointing vector `a`.
pub fn check_vector(
    b: i64,
    c: i64,
    a: (i64, i64),
    checks: &[Check],
    cluster_radius: Option<i64>,
    clusters: &ClusterCache,
) -> Result<Vec<CellResult>> {
    let mut cell = Cell {
        a,
        alg: Algebra::new(b, c, clusters)?,
        greedy: quantum_greedy_with_stats(b, c, a.0, a.1).map_err(|e| e.to_string()),
        radius: cluster_radius,
    };
    Ok(checks
        .iter()
        .map(|&check| {
            let (pass, witness) = cell.run(check);
            CellResult {
                a: [a.0, a.1],
                check: check.as_str().to_string(),
                pass,
                witness,
            }
        })
        .collect())
}

pub fn scan(opts: &ScanOptions, clusters: &ClusterCache) -> Result<ScanReport> {
    if opts.b < 1 || opts.c < 1 {
        return Err(Error::InvalidArgument(format!(
            "b and c must be positive, got ({},{})",
            opts.b, opts.c
        )));
    }
    if opts.bound < 0 {
        return Err(Error::InvalidArgument(format!("bound must be non-negative, got {}", opts.bound)));
    }
    let mut checks = opts.checks.clone();
    checks.sort();
    checks.dedup();

    let cells: Vec<(i64, i64)> = (0..=opts.bound)
        .flat_map(|a1| (0..=opts.bound).map(move |a2| (a1, a2)))
        .collect();

    let run_cell = |&a: &(i64, i64)| check_vector(opts.b, opts.c, a, &checks, opts.cluster_radius, clusters);

    let per_cell: Vec<Result<Vec<CellResult>>> = match opts.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build()
            .map_err(|e| Error::InvalidArgument(format!("cannot build worker pool: {e}")))?
            .install(|| cells.par_iter().map(run_cell).collect()),
        None => cells.par_iter().map(run_cell).collect(),
    };
    let mut results = Vec::with_capacity(cells.len() * checks.len());
    for r in per_cell {
        results.extend(r?);
    }
    results.sort_by(|x, y| {
        (x.a, Check::from_str(&x.check).ok()).cmp(&(y.a, Check::from_str(&y.check).ok()))
    });

    let clusters_covered = match opts.cluster_radius {
        Some(r) => (-r..=r).collect(),
        None => vec![1],
    };
    Ok(ScanReport {
        b: opts.b,
        c: opts.c,
        bound: opts.bound,
        checks: checks.iter().map(|c| c.as_str().to_string()).collect(),
        results,
        clusters_covered,
    })
}
