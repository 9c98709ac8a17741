//! Rule generation from a discretized network.
//!
//! Three phases: rules mapping hidden-cluster combinations to classes
//! ([`extract_output_rules`]), rules mapping inputs to each hidden node's
//! cluster ([`extract_input_rules`]), and their composition into input-space
//! rules ([`compose`]). [`prune_rules`] then removes and generalizes rules
//! while holding training accuracy and fidelity.
//!
//! All phases share one sequential-covering routine, [`cover`], which only
//! emits rules that are pure on the table it is given. Pure rules never
//! disagree on a training pattern, so their evaluation order is irrelevant.

use rayon::prelude::*;

use crate::dataset::DataView;
use crate::discretizer::ActivationClustering;
use crate::error::{Error, Result};
use crate::eval::evaluate;
use crate::network::Network;
use crate::pruner::AccuracyFloor;
use crate::rules::{Condition, Rule, RuleSet};

/// Conditions `cover` may use on one attribute.
#[derive(Debug, Clone, PartialEq)]
pub enum Candidates {
    /// `x <= t` / `x > t` for each threshold, ascending.
    Thresholds(Vec<f64>),
    /// `x = v` for each value.
    Values(Vec<f64>),
}

impl Candidates {
    pub fn is_empty(&self) -> bool {
        match self {
            Candidates::Thresholds(t) => t.is_empty(),
            Candidates::Values(v) => v.is_empty(),
        }
    }
}

/// Thresholds separating consecutive distinct values. Each threshold is the
/// two-decimal number closest to the midpoint that still satisfies
/// `lower <= t < upper`, so a rule printed with two decimals means exactly
/// what was learned; gaps too narrow for any such number get no threshold.
pub fn threshold_candidates(values: impl IntoIterator<Item = f64>) -> Vec<f64> {
    let mut distinct: Vec<f64> = values.into_iter().collect();
    distinct.sort_by(f64::total_cmp);
    distinct.dedup();
    let mut out: Vec<f64> = Vec::new();
    for pair in distinct.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let mid = (lo + hi) / 2.0;
        let options = [
            (mid * 100.0).round() / 100.0,
            (lo * 100.0).ceil() / 100.0,
            (hi * 100.0).floor() / 100.0,
        ];
        if let Some(t) = options.into_iter().find(|t| lo <= *t && *t < hi) {
            if out.last() != Some(&t) {
                out.push(t);
            }
        }
    }
    out
}

/// Candidate conditions over the input attributes listed in `attributes`;
/// every other attribute gets none.
pub fn input_candidates(train: &DataView, attributes: &[usize]) -> Vec<Candidates> {
    let ds = train.dataset;
    (0..ds.n_attributes())
        .map(|a| {
            let column = train.examples().iter().map(|e| e.features[a]);
            let spec = &ds.attributes[a];
            if !attributes.contains(&a) {
                Candidates::Values(Vec::new())
            } else if spec.is_categorical() {
                let mut values: Vec<f64> = column.collect();
                values.sort_by(f64::total_cmp);
                values.dedup();
                Candidates::Values(values)
            } else {
                Candidates::Thresholds(threshold_candidates(column))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoverOutcome {
    pub rules: Vec<Rule>,
    /// Patterns that share every usable condition with a pattern of another
    /// label; no pure rule can cover them.
    pub inseparable: Vec<usize>,
}

#[derive(Clone, Copy)]
struct Choice {
    condition: Condition,
    same: usize,
    other: usize,
}

impl Choice {
    fn score(&self) -> i64 {
        self.same as i64 - self.other as i64
    }

    fn beats(&self, incumbent: &Option<Choice>) -> bool {
        match incumbent {
            None => true,
            Some(b) => self.score() > b.score() || (self.score() == b.score() && self.other < b.other),
        }
    }
}

/// Sequential covering.
///
/// Repeatedly takes the first pattern not yet covered and grows a rule for it
/// one condition at a time. Only conditions the seed satisfies and that
/// exclude at least one more pattern of another label are considered; the
/// one with the best `same - other` coverage wins (ties: fewer other-label
/// patterns, then lower attribute index, then candidate order). The rule is
/// complete once it covers no pattern of another label; all patterns it
/// covers are then marked.
pub fn cover<P: AsRef<[f64]>>(patterns: &[P], labels: &[usize], candidates: &[Candidates]) -> Result<CoverOutcome> {
    if patterns.is_empty() {
        return Err(Error::InvalidConfig("cover needs at least one pattern".into()));
    }
    if labels.len() != patterns.len() || patterns.iter().any(|p| p.as_ref().len() != candidates.len()) {
        return Err(Error::DimensionMismatch(
            "cover: patterns, labels and candidates disagree in size".into(),
        ));
    }
    let n = patterns.len();
    let row = |p: usize| patterns[p].as_ref();
    let mut marked = vec![false; n];
    let mut rules = Vec::new();
    let mut inseparable = Vec::new();

    while let Some(seed) = marked.iter().position(|m| !m) {
        let class = labels[seed];
        let x = row(seed);
        let mut covered: Vec<usize> = (0..n).collect();
        let mut conditions = Vec::new();
        let mut separable = true;
        loop {
            let other = covered.iter().filter(|&&p| labels[p] != class).count();
            if other == 0 {
                break;
            }
            let same_total = covered.len() - other;
            let mut best: Option<Choice> = None;
            for (a, cands) in candidates.iter().enumerate() {
                match cands {
                    Candidates::Thresholds(ts) => {
                        let mut column: Vec<(f64, bool)> =
                            covered.iter().map(|&p| (row(p)[a], labels[p] == class)).collect();
                        column.sort_by(|l, r| l.0.total_cmp(&r.0));
                        let (mut idx, mut same_le, mut other_le) = (0, 0, 0);
                        for &t in ts {
                            while idx < column.len() && column[idx].0 <= t {
                                if column[idx].1 {
                                    same_le += 1;
                                } else {
                                    other_le += 1;
                                }
                                idx += 1;
                            }
                            let choice = if x[a] <= t {
                                Choice {
                                    condition: Condition::le(a, t),
                                    same: same_le,
                                    other: other_le,
                                }
                            } else {
                                Choice {
                                    condition: Condition::gt(a, t),
                                    same: same_total - same_le,
                                    other: other - other_le,
                                }
                            };
                            if choice.other < other && choice.beats(&best) {
                                best = Some(choice);
                            }
                        }
                    }
                    Candidates::Values(vs) => {
                        for &v in vs.iter().filter(|v| **v == x[a]) {
                            let (mut same, mut oth) = (0, 0);
                            for &p in &covered {
                                if row(p)[a] == v {
                                    if labels[p] == class {
                                        same += 1;
                                    } else {
                                        oth += 1;
                                    }
                                }
                            }
                            let choice = Choice {
                                condition: Condition::eq(a, v),
                                same,
                                other: oth,
                            };
                            if choice.other < other && choice.beats(&best) {
                                best = Some(choice);
                            }
                        }
                    }
                }
            }
            match best {
                Some(choice) => {
                    covered.retain(|&p| choice.condition.matches(row(p)));
                    conditions.push(choice.condition);
                }
                None => {
                    separable = false;
                    break;
                }
            }
        }
        if !separable {
            inseparable.push(seed);
            marked[seed] = true;
            continue;
        }
        for &p in &covered {
            marked[p] = true;
        }
        let mut rule = Rule::new(conditions, class)
            .simplify()
            .expect("conditions satisfied by the seed are consistent");
        rule.support = covered.len();
        rules.push(rule);
    }
    Ok(CoverOutcome { rules, inseparable })
}

/// Majority value of `labels` (ties to the lowest), or `None` when empty.
fn majority(labels: impl IntoIterator<Item = usize>, n_classes: usize) -> Option<usize> {
    let mut counts = vec![0usize; n_classes];
    let mut any = false;
    for l in labels {
        counts[l] += 1;
        any = true;
    }
    any.then(|| {
        counts
            .iter()
            .enumerate()
            .fold((0, 0), |acc, (i, &c)| if c > acc.1 { (i, c) } else { acc })
            .0
    })
}

/// Rules from hidden-cluster combinations to classes.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputRules {
    /// Conditions are `node = cluster index`.
    pub rules: Vec<Rule>,
    pub default_class: usize,
    /// Discretized network prediction for each training pattern.
    pub predictions: Vec<usize>,
    /// Cluster indices for each training pattern.
    pub clusters: Vec<Vec<usize>>,
}

fn training_assignment(c: &ActivationClustering, net: &Network, train: &DataView) -> Result<Vec<Vec<usize>>> {
    if c.assignment.len() == train.len() && c.assignment.iter().all(|a| a.len() == net.n_hidden()) {
        Ok(c.assignment.clone())
    } else {
        c.assign(net, train)
    }
}

/// Describes the discretized network's predictions in terms of hidden-node
/// clusters. Rules for the majority predicted class are left to the default.
pub fn extract_output_rules(c: &ActivationClustering, net: &Network, train: &DataView) -> Result<OutputRules> {
    let full = output_cover(c, net, train)?;
    Ok(full.with_default(full.default_class))
}

/// Output rules for every predicted class; `default_class` is the majority.
fn output_cover(c: &ActivationClustering, net: &Network, train: &DataView) -> Result<OutputRules> {
    let clusters = training_assignment(c, net, train)?;
    let predictions = clusters
        .iter()
        .map(|cl| c.predict_from_clusters(net, cl))
        .collect::<Result<Vec<_>>>()?;
    let default_class = majority(predictions.iter().copied(), net.n_out())
        .ok_or_else(|| Error::InvalidConfig("cannot extract rules from an empty dataset".into()))?;

    let table: Vec<Vec<f64>> = clusters
        .iter()
        .map(|cl| cl.iter().map(|&i| i as f64).collect())
        .collect();
    let outcome = cover(&table, &predictions, &cluster_candidates(c))?;
    assert!(
        outcome.inseparable.is_empty(),
        "discretized predictions are a function of the cluster indices"
    );
    Ok(OutputRules {
        rules: outcome.rules,
        default_class,
        predictions,
        clusters,
    })
}

impl OutputRules {
    /// Leaves `class` to the default rule. Lossless: the remaining rules are
    /// pure, so a pattern predicted as `class` matches none of them.
    pub fn with_default(&self, class: usize) -> OutputRules {
        OutputRules {
            rules: self.rules.iter().filter(|r| r.class != class).cloned().collect(),
            default_class: class,
            ..self.clone()
        }
    }
}

/// Rules from inputs to the cluster of one hidden node.
#[derive(Debug, Clone, PartialEq)]
pub struct NodeRules {
    pub node: usize,
    /// Consequents are cluster indices. Empty for a node with one cluster.
    pub rules: Vec<Rule>,
    pub cluster_count: usize,
    /// Most frequent cluster; used for patterns no rule covers.
    pub default_cluster: usize,
    pub inseparable: Vec<usize>,
}

/// For every hidden node, covers its training cluster assignment using only
/// the inputs that still feed that node.
pub fn extract_input_rules(c: &ActivationClustering, net: &Network, train: &DataView) -> Result<Vec<NodeRules>> {
    let clusters = training_assignment(c, net, train)?;
    let features: Vec<&[f64]> = train.examples().iter().map(|e| e.features.as_slice()).collect();
    (0..net.n_hidden())
        .into_par_iter()
        .map(|j| {
            let labels: Vec<usize> = clusters.iter().map(|cl| cl[j]).collect();
            let cluster_count = c.nodes[j].representatives.len();
            let default_cluster = majority(labels.iter().copied(), cluster_count).unwrap_or(0);
            if cluster_count == 1 {
                return Ok(NodeRules {
                    node: j,
                    rules: Vec::new(),
                    cluster_count,
                    default_cluster,
                    inseparable: Vec::new(),
                });
            }
            let feeding: Vec<usize> = (0..net.n_in()).filter(|&i| net.mask_ih[net.ih(i, j)]).collect();
            let candidates = input_candidates(train, &feeding);
            let outcome = cover(&features, &labels, &candidates)?;
            Ok(NodeRules {
                node: j,
                rules: outcome.rules,
                cluster_count,
                default_cluster,
                inseparable: outcome.inseparable,
            })
        })
        .collect()
}

/// Substitutes every `node = cluster` condition of the output rules with each
/// input rule concluding that cluster, expanding across nodes, then merges
/// bounds and drops conjunctions with no feasible point.
pub fn compose(output: &OutputRules, inputs: &[NodeRules]) -> RuleSet {
    let mut rules: Vec<Rule> = Vec::new();
    for out_rule in &output.rules {
        let mut partial: Vec<Vec<Condition>> = vec![Vec::new()];
        for cond in &out_rule.conditions {
            let family = inputs.iter().find(|f| f.node == cond.attribute);
            let cluster = cond.value as usize;
            let options: Vec<&[Condition]> = match family {
                Some(f) if !f.rules.is_empty() => f
                    .rules
                    .iter()
                    .filter(|r| r.class == cluster)
                    .map(|r| r.conditions.as_slice())
                    .collect(),
                _ => vec![&[]],
            };
            let mut next = Vec::with_capacity(partial.len() * options.len());
            for prefix in &partial {
                for opt in &options {
                    let mut conj = prefix.clone();
                    conj.extend_from_slice(opt);
                    if Rule::new(conj.clone(), 0).simplify().is_some() {
                        next.push(conj);
                    }
                }
            }
            partial = next;
        }
        for conj in partial {
            if let Some(rule) = Rule::new(conj, out_rule.class).simplify() {
                rules.push(rule);
            }
        }
    }
    RuleSet {
        rules,
        default_class: output.default_class,
    }
}

/// All intermediate products of one extraction.
#[derive(Debug, Clone, PartialEq)]
pub struct Extraction {
    pub output: OutputRules,
    pub inputs: Vec<NodeRules>,
    pub composed: RuleSet,
    pub rules: RuleSet,
}

/// Extracts, composes and prunes once for every class the discretized
/// network predicts, each time with that class as the default, and keeps the
/// smallest pruned rule set (ties: higher training accuracy, then the lower
/// default class). A class that is a single region is often cheap to
/// describe while its complement is not.
pub fn extract_rules(
    c: &ActivationClustering,
    net: &Network,
    train: &DataView,
    cfg: &RulePruneConfig,
) -> Result<Extraction> {
    let full = output_cover(c, net, train)?;
    let inputs = extract_input_rules(c, net, train)?;
    let mut classes: Vec<usize> = full.predictions.clone();
    classes.sort_unstable();
    classes.dedup();
    let mut best: Option<(Extraction, f64)> = None;
    for class in classes {
        let output = full.with_default(class);
        let composed = compose(&output, &inputs);
        let rules = prune_rules(&composed, train, cfg, Some(&output.predictions))?;
        let accuracy = evaluate(&rules, train)?.accuracy;
        let better = best.as_ref().is_none_or(|(b, acc)| {
            rules.rule_count() < b.rules.rule_count() || (rules.rule_count() == b.rules.rule_count() && accuracy > *acc)
        });
        if better {
            best = Some((
                Extraction {
                    output,
                    inputs: inputs.clone(),
                    composed,
                    rules,
                },
                accuracy,
            ));
        }
    }
    Ok(best.expect("training data predicts at least one class").0)
}

fn cluster_candidates(c: &ActivationClustering) -> Vec<Candidates> {
    c.nodes
        .iter()
        .map(|node| Candidates::Values((0..node.representatives.len()).map(|i| i as f64).collect()))
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct RulePruneConfig {
    /// Training-accuracy floor; relative floors are measured from the
    /// accuracy of the rule set handed to [`prune_rules`].
    pub floor: AccuracyFloor,
    /// Minimum agreement with the reference predictions, when given.
    pub min_fidelity: f64,
}

impl Default for RulePruneConfig {
    fn default() -> Self {
        RulePruneConfig {
            floor: AccuracyFloor::Relative(0.01),
            min_fidelity: 0.98,
        }
    }
}

/// Incremental evaluation of a subset of rules over the training patterns.
struct Tally<'a> {
    labels: &'a [usize],
    reference: Option<&'a [usize]>,
    n_classes: usize,
    /// `counts[p * n_classes + k]`: active rules of class `k` matching pattern `p`.
    counts: Vec<u32>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Score {
    accuracy: f64,
    fidelity: f64,
    default_class: usize,
}

impl<'a> Tally<'a> {
    fn add(&mut self, matches: &[usize], class: usize) {
        for &p in matches {
            self.counts[p * self.n_classes + class] += 1;
        }
    }

    fn remove(&mut self, matches: &[usize], class: usize) {
        for &p in matches {
            self.counts[p * self.n_classes + class] -= 1;
        }
    }

    fn matched_class(&self, p: usize) -> std::result::Result<Option<usize>, ()> {
        let row = &self.counts[p * self.n_classes..(p + 1) * self.n_classes];
        let mut found = None;
        for (k, &c) in row.iter().enumerate() {
            if c > 0 {
                if found.is_some() {
                    return Err(());
                }
                found = Some(k);
            }
        }
        Ok(found)
    }

    /// `None` if two rules of different classes match one pattern.
    fn score(&self) -> Option<Score> {
        let n = self.labels.len();
        let mut predicted: Vec<Option<usize>> = Vec::with_capacity(n);
        for p in 0..n {
            predicted.push(self.matched_class(p).ok()?);
        }
        let default_class = majority(
            (0..n).filter(|&p| predicted[p].is_none()).map(|p| self.labels[p]),
            self.n_classes,
        )
        .or_else(|| majority(self.labels.iter().copied(), self.n_classes))
        .unwrap_or(0);
        let (mut correct, mut agree) = (0usize, 0usize);
        for p in 0..n {
            let class = predicted[p].unwrap_or(default_class);
            if class == self.labels[p] {
                correct += 1;
            }
            if self.reference.is_some_and(|r| r[p] == class) {
                agree += 1;
            }
        }
        Some(Score {
            accuracy: correct as f64 / n as f64,
            fidelity: if self.reference.is_some() {
                agree as f64 / n as f64
            } else {
                1.0
            },
            default_class,
        })
    }
}

/// Shrinks a rule set without letting training accuracy fall below the
/// floor, fidelity to `reference` (if given) fall below `min_fidelity`, or
/// two rules with different classes match the same training pattern.
///
/// Each pass (a) removes rules, always taking the removal that keeps
/// accuracy and fidelity highest, (b) drops single conditions from the
/// remaining rules, and (c) keeps the default class at the majority label
/// of the patterns no rule matches (all patterns when every one is matched).
/// Passes repeat until nothing changes.
pub fn prune_rules(
    rs: &RuleSet,
    train: &DataView,
    cfg: &RulePruneConfig,
    reference: Option<&[usize]>,
) -> Result<RuleSet> {
    if train.is_empty() {
        return Err(Error::InvalidConfig(
            "cannot prune rules against an empty dataset".into(),
        ));
    }
    if reference.is_some_and(|r| r.len() != train.len()) {
        return Err(Error::DimensionMismatch(
            "reference predictions must cover the training data".into(),
        ));
    }
    let n_classes = train.n_classes();
    if rs.rules.iter().any(|r| r.class >= n_classes) {
        return Err(Error::DimensionMismatch(
            "rule class outside the dataset's classes".into(),
        ));
    }
    let labels = train.labels();
    let features: Vec<&[f64]> = train.examples().iter().map(|e| e.features.as_slice()).collect();
    let match_set =
        |rule: &Rule| -> Vec<usize> { (0..features.len()).filter(|&p| rule.matches(features[p])).collect() };

    let mut rules: Vec<Rule> = Vec::new();
    for r in &rs.rules {
        if !rules.iter().any(|kept| kept.same_logic(r)) {
            rules.push(r.clone());
        }
    }
    let mut matches: Vec<Vec<usize>> = rules.iter().map(&match_set).collect();
    let mut active: Vec<bool> = matches.iter().map(|m| !m.is_empty()).collect();

    let mut tally = Tally {
        labels: &labels,
        reference,
        n_classes,
        counts: vec![0; labels.len() * n_classes],
    };
    for (i, r) in rules.iter().enumerate() {
        if active[i] {
            tally.add(&matches[i], r.class);
        }
    }
    let start = tally.score();
    let floor = cfg.floor.resolve(start.map_or(0.0, |s| s.accuracy));
    let acceptable = |s: &Option<Score>| {
        s.is_some_and(|s| {
            AccuracyFloor::satisfied(s.accuracy, floor)
                && (reference.is_none() || AccuracyFloor::satisfied(s.fidelity, cfg.min_fidelity))
        })
    };

    loop {
        let mut changed = false;

        // (a) rule removal, best candidate first
        loop {
            let mut best: Option<(usize, Score)> = None;
            for i in (0..rules.len()).filter(|&i| active[i]) {
                tally.remove(&matches[i], rules[i].class);
                let s = tally.score();
                tally.add(&matches[i], rules[i].class);
                if !acceptable(&s) {
                    continue;
                }
                let s = s.expect("acceptable scores exist");
                let better = match &best {
                    None => true,
                    Some((b, bs)) => {
                        (s.accuracy, s.fidelity) > (bs.accuracy, bs.fidelity)
                            || ((s.accuracy, s.fidelity) == (bs.accuracy, bs.fidelity)
                                && matches[i].len() < matches[*b].len())
                    }
                };
                if better {
                    best = Some((i, s));
                }
            }
            match best {
                Some((i, _)) => {
                    tally.remove(&matches[i], rules[i].class);
                    active[i] = false;
                    changed = true;
                }
                None => break,
            }
        }

        // (b) generalization
        for i in 0..rules.len() {
            if !active[i] {
                continue;
            }
            let mut c = 0;
            while c < rules[i].conditions.len() {
                let mut general = rules[i].clone();
                general.conditions.remove(c);
                let general_matches = match_set(&general);
                tally.remove(&matches[i], rules[i].class);
                tally.add(&general_matches, general.class);
                let duplicate = (0..rules.len()).any(|k| k != i && active[k] && rules[k].same_logic(&general));
                if !duplicate && acceptable(&tally.score()) {
                    rules[i] = general;
                    matches[i] = general_matches;
                    changed = true;
                    c = 0;
                } else {
                    tally.remove(&general_matches, general.class);
                    tally.add(&matches[i], rules[i].class);
                    c += 1;
                }
            }
        }

        if !changed {
            break;
        }
    }

    let score = tally.score();
    let mut default_class = score.map_or(rs.default_class, |s| s.default_class);
    let mut kept: Vec<Rule> = Vec::new();
    for (i, mut rule) in rules.into_iter().enumerate() {
        if !active[i] {
            continue;
        }
        rule.support = matches[i].len();
        rule.errors = matches[i].iter().filter(|&&p| labels[p] != rule.class).count();
        kept.push(rule);
    }
    // An unconditional rule classifies everything its way.
    if let Some(u) = kept.iter().find(|r| r.conditions.is_empty()) {
        default_class = u.class;
        kept.clear();
    }
    Ok(RuleSet {
        rules: kept,
        default_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::discretizer::NodeClusters;

    #[test]
    fn thresholds_are_two_decimal_separators() {
        let vals = (1..=10).map(|v| (v as f64 - 1.0) / 9.0);
        let ts = threshold_candidates(vals);
        assert_eq!(ts.len(), 9);
        assert_eq!(ts[5], 0.61);
        let tight = threshold_candidates([0.1, 0.101, 0.104, 0.5]);
        assert_eq!(tight, vec![0.1, 0.3]);
    }

    #[test]
    fn single_class_gives_one_unconditional_rule() {
        let pats = vec![vec![0.1], vec![0.5], vec![0.9]];
        let out = cover(&pats, &[1, 1, 1], &[Candidates::Thresholds(vec![0.3, 0.7])]).unwrap();
        assert_eq!(out.rules.len(), 1);
        assert!(out.rules[0].conditions.is_empty());
        assert_eq!(out.rules[0].support, 3);
    }

    #[test]
    fn four_pattern_threshold_toy() {
        let pats = vec![vec![0.1], vec![0.3], vec![0.7], vec![0.9]];
        let cands = [Candidates::Thresholds(threshold_candidates(pats.iter().map(|p| p[0])))];
        let out = cover(&pats, &[0, 0, 1, 1], &cands).unwrap();
        assert_eq!(
            out.rules
                .iter()
                .map(|r| (r.conditions.clone(), r.class))
                .collect::<Vec<_>>(),
            vec![(vec![Condition::le(0, 0.5)], 0), (vec![Condition::gt(0, 0.5)], 1)]
        );
    }

    #[test]
    fn conflicting_duplicates_are_reported() {
        let pats = vec![vec![0.2], vec![0.2], vec![0.8]];
        let out = cover(&pats, &[0, 1, 1], &[Candidates::Thresholds(vec![0.5])]).unwrap();
        assert_eq!(out.inseparable, vec![0, 1]);
        assert_eq!(out.rules.len(), 1);
        assert_eq!(out.rules[0].class, 1);
        assert_eq!(out.rules[0].support, 1);
    }

    fn one_node_clustering(reps: Vec<f64>, assignment: Vec<usize>) -> ActivationClustering {
        let mut counts = vec![0; reps.len()];
        for a in &assignment {
            counts[*a] += 1;
        }
        ActivationClustering {
            nodes: vec![NodeClusters {
                epsilon: 0.5,
                representatives: reps,
                counts,
            }],
            assignment: assignment.into_iter().map(|a| vec![a]).collect(),
        }
    }

    #[test]
    fn output_rules_leave_majority_to_default() {
        let d = Dataset::from_rows(&[(vec![0.1], 0), (vec![0.5], 1), (vec![0.9], 0)], 2).unwrap();
        // class 1 only for a positive activation
        let mut net = Network::zeros(1, 1, 2);
        net.w_ho = vec![-10.0, 10.0];
        let c = one_node_clustering(vec![0.9, 0.0, -0.9], vec![0, 1, 2]);
        let out = extract_output_rules(&c, &net, &d.all()).unwrap();
        assert_eq!(out.predictions, vec![1, 0, 0]);
        assert_eq!(out.default_class, 0);
        assert_eq!(out.rules.len(), 1);
        assert_eq!(out.rules[0].conditions, vec![Condition::eq(0, 0.0)]);
        assert_eq!(out.rules[0].class, 1);
    }

    #[test]
    fn compose_expands_and_simplifies() {
        let output = OutputRules {
            rules: vec![Rule::new(vec![Condition::eq(0, 0.0)], 0)],
            default_class: 1,
            predictions: vec![],
            clusters: vec![],
        };
        let inputs = vec![NodeRules {
            node: 0,
            rules: vec![
                Rule::new(
                    vec![Condition::le(0, 0.6), Condition::le(5, 0.5), Condition::le(8, 0.3)],
                    0,
                ),
                Rule::new(vec![Condition::gt(0, 0.6)], 1),
            ],
            cluster_count: 2,
            default_cluster: 0,
            inseparable: vec![],
        }];
        let rs = compose(&output, &inputs);
        assert_eq!(rs.default_class, 1);
        assert_eq!(rs.rules.len(), 1);
        assert_eq!(
            rs.rules[0].conditions,
            vec![Condition::le(0, 0.6), Condition::le(5, 0.5), Condition::le(8, 0.3)]
        );
    }

    #[test]
    fn compose_passes_through_unconditioned_nodes() {
        let output = OutputRules {
            rules: vec![Rule::new(vec![Condition::eq(1, 2.0)], 1)],
            default_class: 0,
            predictions: vec![],
            clusters: vec![],
        };
        let inputs = vec![NodeRules {
            node: 1,
            rules: vec![],
            cluster_count: 1,
            default_cluster: 0,
            inseparable: vec![],
        }];
        let rs = compose(&output, &inputs);
        assert_eq!(rs.rules.len(), 1);
        assert!(rs.rules[0].conditions.is_empty());
    }

    #[test]
    fn prune_drops_duplicates_and_dead_rules() {
        let d = Dataset::from_rows(&[(vec![0.1], 0), (vec![0.2], 0), (vec![0.8], 1), (vec![0.9], 1)], 2).unwrap();
        let r = Rule::new(vec![Condition::le(0, 0.5)], 0);
        let dead = Rule::new(vec![Condition::gt(0, 0.95)], 0);
        let rs = RuleSet {
            rules: vec![r.clone(), r.clone(), dead],
            default_class: 1,
        };
        let cfg = RulePruneConfig {
            floor: AccuracyFloor::Relative(0.0),
            min_fidelity: 1.0,
        };
        let pruned = prune_rules(&rs, &d.all(), &cfg, Some(&[0, 0, 1, 1])).unwrap();
        assert_eq!(pruned.rules.len(), 1);
        assert_eq!(pruned.default_class, 1);
        assert_eq!(pruned.rules[0].support, 2);
    }

    #[test]
    fn prune_generalizes_conditions() {
        let d = Dataset::from_rows(
            &[
                (vec![0.1, 0.1], 0),
                (vec![0.2, 0.9], 0),
                (vec![0.8, 0.2], 1),
                (vec![0.9, 0.8], 1),
            ],
            2,
        )
        .unwrap();
        let rs = RuleSet {
            rules: vec![
                Rule::new(vec![Condition::le(0, 0.5), Condition::le(1, 0.5)], 0),
                Rule::new(vec![Condition::le(0, 0.5), Condition::gt(1, 0.5)], 0),
            ],
            default_class: 1,
        };
        let cfg = RulePruneConfig {
            floor: AccuracyFloor::Relative(0.0),
            min_fidelity: 0.98,
        };
        let pruned = prune_rules(&rs, &d.all(), &cfg, None).unwrap();
        assert_eq!(pruned.rules.len(), 1);
        assert_eq!(pruned.rules[0].conditions, vec![Condition::le(0, 0.5)]);
        assert_eq!(pruned.default_class, 1);
    }
}
