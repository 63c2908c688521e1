use std::fs;
use std::path::Path;

use qgreedy_core::clusters::ClusterCache;
use qgreedy_core::laurent::LaurentV;
use qgreedy_core::verify::{cluster_variable_consistency, run_suite, Suite};
use qgreedy_core::TorusElement;

fn populate(dir: &Path) {
    let cache = ClusterCache::with_dir(dir);
    for (b, c) in [(1, 1), (1, 2), (2, 2), (2, 3)] {
        for m in -3..=6 {
            cache.cluster_variable(b, c, m).unwrap();
        }
    }
}

fn rewrite(dir: &Path, b: i64, c: i64, m: i64, f: impl FnOnce(TorusElement) -> TorusElement) {
    let path = dir.join(format!("b{b}_c{c}")).join(format!("m{m}.json"));
    let x: TorusElement = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    fs::write(&path, serde_json::to_string(&f(x)).unwrap()).unwrap();
}

#[test]
fn stats_count_distinct_requests() {
    let tmp = tempfile::tempdir().unwrap();
    let cache = ClusterCache::with_dir(tmp.path().join("cache"));
    assert_eq!(cache.stats().unwrap().entries, 0);
    for m in -2..=5 {
        cache.cluster_variable(2, 3, m).unwrap();
    }
    cache.cluster_variable(2, 3, 4).unwrap();
    assert_eq!(cache.stats().unwrap().entries, 8);
    cache.clear().unwrap();
    assert_eq!(cache.stats().unwrap().entries, 0);
}

#[test]
fn disk_entries_are_reused_by_a_fresh_cache() {
    let tmp = tempfile::tempdir().unwrap();
    populate(tmp.path());
    let fresh = ClusterCache::with_dir(tmp.path());
    let from_disk = fresh.cluster_variable(2, 3, 5).unwrap();
    assert_eq!(from_disk, ClusterCache::in_memory().cluster_variable(2, 3, 5).unwrap());
}

#[test]
fn clean_cache_passes_the_axioms_suite() {
    let tmp = tempfile::tempdir().unwrap();
    populate(tmp.path());
    let outcomes = run_suite(Suite::Axioms, &ClusterCache::with_dir(tmp.path()));
    assert!(outcomes.iter().all(|o| o.pass), "{outcomes:?}");
}

#[test]
fn sign_flip_in_cache_is_detected() {
    let tmp = tempfile::tempdir().unwrap();
    populate(tmp.path());
    rewrite(tmp.path(), 2, 3, 4, |x| {
        let ((i, j), c) = x.terms().next().map(|(e, c)| (e, c.clone())).unwrap();
        &x - &TorusElement::monomial(i, j, &c + &c)
    });
    let o = cluster_variable_consistency(&ClusterCache::with_dir(tmp.path()));
    assert!(!o.pass);
    assert!(o.detail.contains("X_4") && o.detail.contains("(2,3)"), "{}", o.detail);
}

#[test]
fn bar_invariant_positive_corruption_is_detected() {
    let tmp = tempfile::tempdir().unwrap();
    populate(tmp.path());
    // Adding the constant 1 keeps bar-invariance and positivity but breaks
    // agreement with the greedy element.
    rewrite(tmp.path(), 2, 2, 3, |x| &x + &TorusElement::constant(LaurentV::one()));
    let o = cluster_variable_consistency(&ClusterCache::with_dir(tmp.path()));
    assert!(!o.pass);
    assert!(o.detail.contains("X_3"), "{}", o.detail);
}

#[test]
fn unreadable_cache_entry_is_reported() {
    let tmp = tempfile::tempdir().unwrap();
    populate(tmp.path());
    fs::write(tmp.path().join("b1_c1").join("m2.json"), "{not json").unwrap();
    let o = cluster_variable_consistency(&ClusterCache::with_dir(tmp.path()));
    assert!(!o.pass);
    assert!(o.detail.starts_with("error:"), "{}", o.detail);
}
