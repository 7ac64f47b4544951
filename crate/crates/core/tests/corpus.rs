use std::collections::BTreeSet;

use loopchart::corpus::{count_exprs, default_corpus, enumerate_exprs, random_exprs};
use loopchart::{Action, StarExpr};

fn alphabet(names: &[&str]) -> BTreeSet<Action> {
    names.iter().map(|a| Action::new(a).unwrap()).collect()
}

// Counts by building every term, without the recurrence.
fn brute_force(actions: &[&str], n: usize) -> Vec<StarExpr> {
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        let mut v = vec![StarExpr::Zero, StarExpr::One];
        v.extend(actions.iter().map(|a| StarExpr::act(a).unwrap()));
        return v;
    }
    let mut out: Vec<StarExpr> = brute_force(actions, n - 1).into_iter().map(StarExpr::star).collect();
    for i in 1..n - 1 {
        for l in brute_force(actions, i) {
            for r in brute_force(actions, n - 1 - i) {
                out.push(StarExpr::sum(l.clone(), r.clone()));
                out.push(StarExpr::prod(l.clone(), r));
            }
        }
    }
    out
}

#[test]
fn enumeration_matches_brute_force() {
    let ab = alphabet(&["a", "b"]);
    let listed: Vec<StarExpr> = enumerate_exprs(&ab, 4).collect();
    assert_eq!(listed.len(), 144);
    let brute: BTreeSet<StarExpr> = (1..=4).flat_map(|n| brute_force(&["a", "b"], n)).collect();
    assert_eq!(listed.iter().cloned().collect::<BTreeSet<_>>(), brute);
    assert_eq!((1..=4).map(|n| count_exprs(2, n)).sum::<u128>(), 144);
}

#[test]
fn size_then_order() {
    let listed: Vec<StarExpr> = enumerate_exprs(&alphabet(&["a", "b"]), 5).collect();
    assert!(listed.windows(2).all(|w| (w[0].size(), &w[0]) < (w[1].size(), &w[1])));
}

#[test]
fn default_corpus_shape() {
    let corpus = default_corpus();
    assert_eq!(corpus.len(), 3736 + 500);
    assert!(corpus[3736..].iter().all(|e| e.size() <= 12));
    assert!(corpus.iter().any(|e| e.size() > 6));
}

#[test]
fn seeds_differ() {
    let ab = alphabet(&["a", "b"]);
    assert_ne!(random_exprs(&ab, 12, 50, 1), random_exprs(&ab, 12, 50, 2));
}
