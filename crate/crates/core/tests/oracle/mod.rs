//! Brute-force reference for `cover` on small binary datasets.
//!
//! Each distinct attribute vector is absent, labelled 0, labelled 1, or
//! present twice with both labels; duplicates beyond that add no new cases
//! for pure covering.

use reann::rulegen::{cover, threshold_candidates, Candidates};
use reann::rules::{Rule, RuleSet};

fn vectors(n_attrs: usize) -> Vec<Vec<f64>> {
    (0..1usize << n_attrs)
        .map(|bits| (0..n_attrs).map(|a| ((bits >> a) & 1) as f64).collect())
        .collect()
}

/// Every conjunction over binary attributes: each attribute free, = 0 or = 1.
fn conjunctions(n_attrs: usize) -> Vec<Vec<Option<f64>>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n_attrs {
        out = out
            .into_iter()
            .flat_map(|c: Vec<Option<f64>>| {
                [None, Some(0.0), Some(1.0)].map(|v| {
                    let mut c = c.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    out
}

fn conj_matches(c: &[Option<f64>], x: &[f64]) -> bool {
    c.iter().zip(x).all(|(c, v)| c.is_none_or(|c| c == *v))
}

/// Best training accuracy of any set of pure conjunctions plus a default class.
fn brute_force(patterns: &[Vec<f64>], labels: &[usize], n_attrs: usize) -> usize {
    let mut coverable = vec![false; patterns.len()];
    for c in conjunctions(n_attrs) {
        let hit: Vec<usize> = (0..patterns.len())
            .filter(|&p| conj_matches(&c, &patterns[p]))
            .collect();
        let pure = hit.windows(2).all(|w| labels[w[0]] == labels[w[1]]);
        if pure {
            for p in hit {
                coverable[p] = true;
            }
        }
    }
    let covered = coverable.iter().filter(|c| **c).count();
    let rest = |class: usize| {
        (0..patterns.len())
            .filter(|&p| !coverable[p] && labels[p] == class)
            .count()
    };
    covered + rest(0).max(rest(1))
}

fn cover_accuracy(patterns: &[Vec<f64>], labels: &[usize], n_attrs: usize) -> Result<usize, String> {
    let candidates: Vec<Candidates> = (0..n_attrs)
        .map(|a| Candidates::Thresholds(threshold_candidates(patterns.iter().map(|p| p[a]))))
        .collect();
    let out = cover(patterns, labels, &candidates).map_err(|e| e.to_string())?;
    for r in &out.rules {
        if !(0..patterns.len())
            .filter(|&p| r.matches(&patterns[p]))
            .all(|p| labels[p] == r.class)
        {
            return Err(format!("impure rule {r:?}"));
        }
    }
    // default: majority label of what no rule covers (ties to class 0)
    let uncovered: Vec<usize> = (0..patterns.len())
        .filter(|&p| !out.rules.iter().any(|r: &Rule| r.matches(&patterns[p])))
        .collect();
    let ones = uncovered.iter().filter(|&&p| labels[p] == 1).count();
    let default_class = usize::from(ones * 2 > uncovered.len());
    let rs = RuleSet {
        rules: out.rules,
        default_class,
    };
    let mut correct = 0;
    for (p, label) in patterns.iter().zip(labels) {
        if reann::eval::classify(&rs, p).map_err(|e| e.to_string())? == *label {
            correct += 1;
        }
    }
    Ok(correct)
}

/// Compares `cover` with brute force on every binary dataset with up to 3
/// attributes and 12 patterns. Returns the number of datasets checked, or the
/// first mismatch.
pub fn exhaustive_check() -> Result<usize, String> {
    let mut checked = 0;
    for n_attrs in 1..=3 {
        let vs = vectors(n_attrs);
        let states = 4usize.pow(vs.len() as u32);
        for code in 0..states {
            let mut patterns = Vec::new();
            let mut labels = Vec::new();
            let mut c = code;
            for v in &vs {
                let state = c % 4;
                c /= 4;
                match state {
                    0 => {}
                    1 | 2 => {
                        patterns.push(v.clone());
                        labels.push(state - 1);
                    }
                    _ => {
                        patterns.push(v.clone());
                        labels.push(0);
                        patterns.push(v.clone());
                        labels.push(1);
                    }
                }
            }
            if patterns.is_empty() || patterns.len() > 12 {
                continue;
            }
            let got = cover_accuracy(&patterns, &labels, n_attrs)?;
            let want = brute_force(&patterns, &labels, n_attrs);
            if got != want {
                return Err(format!(
                    "patterns {patterns:?} labels {labels:?}: cover {got}, brute force {want}"
                ));
            }
            checked += 1;
        }
    }
    Ok(checked)
}
