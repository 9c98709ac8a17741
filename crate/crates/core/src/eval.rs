//! Applying rule sets to data.

use std::fmt::Write as _;

use crate::dataset::DataView;
use crate::discretizer::ActivationClustering;
use crate::error::{Error, Result};
use crate::network::Network;
use crate::rules::RuleSet;

fn check_width(rs: &RuleSet, width: usize) -> Result<()> {
    let needed = rs
        .rules
        .iter()
        .flat_map(|r| &r.conditions)
        .map(|c| c.attribute + 1)
        .max()
        .unwrap_or(0);
    if needed > width {
        return Err(Error::DimensionMismatch(format!(
            "rules reference attribute {needed}, pattern has {width} features"
        )));
    }
    Ok(())
}

/// Class of `x`: the default when nothing matches, otherwise the class of
/// the matching rule with the highest support (then fewest conditions, then
/// earliest listed).
pub fn classify(rs: &RuleSet, x: &[f64]) -> Result<usize> {
    check_width(rs, x.len())?;
    Ok(classify_unchecked(rs, x).0)
}

/// Returns the class and the index of the deciding rule (`None` for default).
fn classify_unchecked(rs: &RuleSet, x: &[f64]) -> (usize, Option<usize>) {
    let mut best: Option<usize> = None;
    for (i, rule) in rs.rules.iter().enumerate() {
        if !rule.matches(x) {
            continue;
        }
        best = match best {
            None => Some(i),
            Some(b) => {
                let cur = &rs.rules[b];
                let better = rule.support > cur.support
                    || (rule.support == cur.support && rule.conditions.len() < cur.conditions.len());
                Some(if better { i } else { b })
            }
        };
    }
    match best {
        Some(i) => (rs.rules[i].class, Some(i)),
        None => (rs.default_class, None),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RuleStat {
    pub matched: usize,
    pub correct: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub accuracy: f64,
    /// One entry per rule, in listing order.
    pub per_rule: Vec<RuleStat>,
    pub default_used: usize,
    pub fidelity_vs_network: Option<f64>,
}

impl EvalReport {
    /// `key = value` lines, every key prefixed with `prefix`.
    pub fn to_kv(&self, prefix: &str) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{prefix}.accuracy = {}", self.accuracy);
        for (i, s) in self.per_rule.iter().enumerate() {
            let _ = writeln!(
                out,
                "{prefix}.rule.{} = matched {} correct {}",
                i + 1,
                s.matched,
                s.correct
            );
        }
        let _ = writeln!(out, "{prefix}.default_used = {}", self.default_used);
        if let Some(f) = self.fidelity_vs_network {
            let _ = writeln!(out, "{prefix}.fidelity = {f}");
        }
        out
    }
}

pub fn evaluate(rs: &RuleSet, data: &DataView) -> Result<EvalReport> {
    check_width(rs, data.n_attributes())?;
    if rs.rules.iter().any(|r| r.class >= data.n_classes()) || rs.default_class >= data.n_classes() {
        return Err(Error::DimensionMismatch(
            "rule class outside the dataset's classes".into(),
        ));
    }
    if data.is_empty() {
        return Err(Error::DimensionMismatch("evaluation on an empty dataset".into()));
    }
    let mut per_rule = vec![RuleStat { matched: 0, correct: 0 }; rs.rules.len()];
    let mut default_used = 0;
    let mut correct = 0;
    for ex in data.examples() {
        for (rule, stat) in rs.rules.iter().zip(per_rule.iter_mut()) {
            if rule.matches(&ex.features) {
                stat.matched += 1;
                if rule.class == ex.label {
                    stat.correct += 1;
                }
            }
        }
        let (class, by) = classify_unchecked(rs, &ex.features);
        if by.is_none() {
            default_used += 1;
        }
        if class == ex.label {
            correct += 1;
        }
    }
    Ok(EvalReport {
        accuracy: correct as f64 / data.len() as f64,
        per_rule,
        default_used,
        fidelity_vs_network: None,
    })
}

/// Fraction of patterns where the rule set agrees with the discretized network.
pub fn fidelity(rs: &RuleSet, net: &Network, c: &ActivationClustering, data: &DataView) -> Result<f64> {
    check_width(rs, data.n_attributes())?;
    if data.is_empty() {
        return Err(Error::DimensionMismatch("fidelity on an empty dataset".into()));
    }
    let mut agree = 0;
    for ex in data.examples() {
        if classify_unchecked(rs, &ex.features).0 == c.predict(net, &ex.features)? {
            agree += 1;
        }
    }
    Ok(agree as f64 / data.len() as f64)
}

/// Agreement with the continuous (undiscretized) network.
pub fn fidelity_to_network(rs: &RuleSet, net: &Network, data: &DataView) -> Result<f64> {
    check_width(rs, data.n_attributes())?;
    if data.is_empty() {
        return Err(Error::DimensionMismatch("fidelity on an empty dataset".into()));
    }
    let mut agree = 0;
    for ex in data.examples() {
        if classify_unchecked(rs, &ex.features).0 == net.predict(&ex.features)? {
            agree += 1;
        }
    }
    Ok(agree as f64 / data.len() as f64)
}
