use std::fs;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use reann::constructor::{grow, GrowthConfig};
use reann::dataset::Dataset;
use reann::discretizer::{cluster, default_epsilon_grid, ActivationClustering};
use reann::eval::{classify, evaluate, fidelity};
use reann::network::{Connection, Network, TrainConfig};
use reann::pipeline::{run_pipeline, PipelineConfig};
use reann::pruner::{prune, AccuracyFloor, PruneConfig};
use reann::rulegen::{compose, extract_input_rules, extract_output_rules, extract_rules, prune_rules, RulePruneConfig};
use reann::rules::{Op, RuleSet};
use reann::Error;

fn grid_data(label: impl Fn(f64, f64) -> usize) -> Dataset {
    let mut rows = Vec::new();
    for i in 0..=10 {
        for k in 0..5 {
            let a = i as f64 / 10.0;
            let b = ((i * 7 + k * 3) % 10) as f64 / 9.0;
            rows.push((vec![a, b], label(a, b)));
        }
    }
    Dataset::from_rows(&rows, 2).unwrap()
}

#[test]
fn node_driven_by_one_input_gives_single_threshold_rules() {
    let d = grid_data(|a, _| usize::from(a > 0.6));
    let mut net = Network::zeros(2, 1, 2);
    let w = net.ih(0, 0);
    net.w_ih[w] = 20.0;
    net.b_h[0] = -13.0;
    net.disable(Connection::InputHidden { input: 1, hidden: 0 });
    net.w_ho = vec![-5.0, 5.0];
    let c = ActivationClustering::build(&net, &d.all(), 0.5).unwrap();
    assert_eq!(c.nodes[0].representatives.len(), 2);

    let inputs = extract_input_rules(&c, &net, &d.all()).unwrap();
    assert_eq!(inputs.len(), 1);
    let family = &inputs[0];
    assert!(family.inseparable.is_empty());
    assert_eq!(family.rules.len(), 2);
    for r in &family.rules {
        assert_eq!(r.conditions.len(), 1);
        let cond = r.conditions[0];
        assert_eq!(cond.attribute, 0);
        assert!(cond.value >= 0.6 && cond.value < 0.7, "threshold {}", cond.value);
        // the high cluster (index 0) lies above the threshold
        assert_eq!(cond.op == Op::Gt, r.class == 0);
    }

    let output = extract_output_rules(&c, &net, &d.all()).unwrap();
    let rs = compose(&output, &inputs);
    assert_eq!(rs.rules.len(), 1);
    assert_eq!(evaluate(&rs, &d.all()).unwrap().accuracy, 1.0);
    assert_eq!(fidelity(&rs, &net, &c, &d.all()).unwrap(), 1.0);
}

#[test]
fn pruning_drops_a_noise_input() {
    let d = grid_data(|a, _| usize::from(a > 0.45));
    let tcfg = TrainConfig {
        seed: 11,
        ..TrainConfig::default()
    };
    let gcfg = GrowthConfig {
        max_hidden: 2,
        ..GrowthConfig::default()
    };
    let (net, _) = grow(&d.all(), &tcfg, &gcfg, &mut ChaCha8Rng::seed_from_u64(11)).unwrap();
    let (pruned, log) = prune(&net, &d.all(), &tcfg, &PruneConfig::default()).unwrap();
    assert_eq!(pruned.live_inputs(), vec![0]);
    assert_eq!(log.removed_inputs(&net, &pruned), vec![1]);
    assert!(pruned.accuracy(&d.all()).unwrap() + 1e-12 >= log.base_accuracy - 0.01);
}

fn assert_rule_set_invariants(rs: &RuleSet, d: &Dataset) {
    let view = d.all();
    let examples = view.examples();
    for ex in examples {
        let classes: Vec<usize> = rs
            .rules
            .iter()
            .filter(|r| r.matches(&ex.features))
            .map(|r| r.class)
            .collect();
        assert!(
            classes.windows(2).all(|w| w[0] == w[1]),
            "conflicting rules on {:?}",
            ex.features
        );
    }
    let base: Vec<usize> = examples.iter().map(|e| classify(rs, &e.features).unwrap()).collect();
    let mut reversed = rs.clone();
    reversed.rules.reverse();
    let mut rotated = rs.clone();
    rotated.rules.rotate_left(rs.rules.len() / 2);
    for other in [reversed, rotated] {
        let again: Vec<usize> = examples
            .iter()
            .map(|e| classify(&other, &e.features).unwrap())
            .collect();
        assert_eq!(base, again);
    }
    let correct = base.iter().zip(examples).filter(|(c, e)| **c == e.label).count();
    assert_eq!(
        evaluate(rs, &view).unwrap().accuracy,
        correct as f64 / examples.len() as f64
    );
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn extracted_rule_sets_are_conflict_free_and_order_insensitive(
        seed in any::<u64>(),
        points in prop::collection::vec((0usize..6, 0usize..6, 0usize..2), 8..40),
    ) {
        let rows: Vec<(Vec<f64>, usize)> = points
            .iter()
            .map(|&(a, b, noise)| {
                let (a, b) = (a as f64 / 5.0, b as f64 / 5.0);
                let label = if noise == 1 && a > 0.7 { 0 } else { usize::from(a + b > 1.0) };
                (vec![a, b], label)
            })
            .collect();
        let d = Dataset::from_rows(&rows, 2).unwrap();
        let tcfg = TrainConfig { seed, ..TrainConfig::default() };
        let gcfg = GrowthConfig { max_hidden: 3, patience_epochs: 60, ..GrowthConfig::default() };
        let (net, _) = grow(&d.all(), &tcfg, &gcfg, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let floor = AccuracyFloor::Relative(0.02);
        let c = match cluster(&net, &d.all(), &default_epsilon_grid(), floor) {
            Ok(c) => c,
            Err(Error::NoFeasibleEpsilon { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let cfg = RulePruneConfig::default();
        let ex = extract_rules(&c, &net, &d.all(), &cfg).unwrap();
        assert_rule_set_invariants(&ex.composed, &d);
        assert_rule_set_invariants(&ex.rules, &d);

        let composed_acc = evaluate(&ex.composed, &d.all()).unwrap().accuracy;
        let acc = evaluate(&ex.rules, &d.all()).unwrap().accuracy;
        prop_assert!(acc + 1e-12 >= composed_acc - 0.01);
        prop_assert!(fidelity(&ex.rules, &net, &c, &d.all()).unwrap() + 1e-12 >= 0.98);
        prop_assert!(ex.rules.rules.iter().all(|r| r.support >= 1 && !r.conditions.is_empty()));
    }
}

#[test]
fn prune_rules_keeps_accuracy_floor() {
    let d = grid_data(|a, b| usize::from(a > 0.5 && b > 0.3));
    let mut net = Network::zeros(2, 2, 2);
    net.w_ih = vec![20.0, 0.0, 0.0, 20.0];
    net.b_h = vec![-11.0, -7.0];
    net.w_ho = vec![-5.0, 5.0, -5.0, 5.0];
    net.b_o = vec![0.0, -5.0];
    let c = ActivationClustering::build(&net, &d.all(), 0.5).unwrap();
    let output = extract_output_rules(&c, &net, &d.all()).unwrap();
    let inputs = extract_input_rules(&c, &net, &d.all()).unwrap();
    let composed = compose(&output, &inputs);
    let start = evaluate(&composed, &d.all()).unwrap().accuracy;
    for eta in [0.0, 0.05, 0.2] {
        let cfg = RulePruneConfig {
            floor: AccuracyFloor::Relative(eta),
            min_fidelity: 0.0,
        };
        let pruned = prune_rules(&composed, &d.all(), &cfg, None).unwrap();
        assert!(evaluate(&pruned, &d.all()).unwrap().accuracy + 1e-12 >= start - eta);
        assert!(pruned.rule_count() <= composed.rule_count());
    }
}

fn write_toy_experiment(dir: &std::path::Path, runs: usize) -> PipelineConfig {
    let mut data = String::new();
    for i in 0..60 {
        let a = (i % 10) + 1;
        let b = (i * 7 % 10) + 1;
        let class = if a > 5 { "yes" } else { "no" };
        let a = if i == 13 { "?".to_string() } else { a.to_string() };
        data.push_str(&format!("{a},{b},{class}\n"));
    }
    fs::write(dir.join("toy.data"), data).unwrap();
    fs::write(
        dir.join("toy.schema"),
        "name = toy\nclasses = no, yes\nattribute.1.name = Size\nattribute.1.kind = ordinal\nattribute.1.range = 1, 10\nattribute.2.name = Noise\nattribute.2.kind = ordinal\nattribute.2.range = 1, 10\n",
    )
    .unwrap();
    fs::write(
        dir.join("toy.conf"),
        format!("dataset = toy.data\nschema = toy.schema\nsplit.train = 0..40\nsplit.test = 40..60\ngrowth.max_hidden = 2\nruns = {runs}\nseed = 5\n"),
    )
    .unwrap();
    PipelineConfig::read(&dir.join("toy.conf")).unwrap()
}

#[test]
fn pipeline_writes_every_artifact_and_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_toy_experiment(dir.path(), 2);
    let report = run_pipeline(&cfg).unwrap();
    assert!(report.runs.iter().all(Result::is_ok));
    for run in ["run_00", "run_01"] {
        for file in ["network.txt", "clusters.txt", "rules.txt", "report.txt", "curve.csv"] {
            assert!(cfg.out.join(run).join(file).is_file(), "{run}/{file}");
        }
    }
    let first: Vec<String> = ["run_00/rules.txt", "run_00/report.txt", "summary.txt"]
        .iter()
        .map(|f| fs::read_to_string(cfg.out.join(f)).unwrap())
        .collect();
    run_pipeline(&cfg).unwrap();
    let second: Vec<String> = ["run_00/rules.txt", "run_00/report.txt", "summary.txt"]
        .iter()
        .map(|f| fs::read_to_string(cfg.out.join(f)).unwrap())
        .collect();
    assert_eq!(first, second);
    let rules = RuleSet::parse(&first[0], &cfg.load_dataset().unwrap()).unwrap();
    assert!(rules.rule_count() >= 1);
    assert!(first[1].contains("status = ok"));
}

#[test]
fn missing_dataset_leaves_no_output() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = write_toy_experiment(dir.path(), 1);
    cfg.dataset = dir.path().join("absent.data");
    cfg.out = dir.path().join("out");
    assert!(matches!(run_pipeline(&cfg), Err(Error::Io { .. })));
    assert!(!cfg.out.exists());
}

#[test]
fn failing_run_is_recorded_and_others_proceed() {
    let dir = tempfile::tempdir().unwrap();
    let mut cfg = write_toy_experiment(dir.path(), 2);
    // no epsilon can satisfy an impossible floor
    cfg.cluster_floor = AccuracyFloor::Absolute(1.5);
    let report = run_pipeline(&cfg).unwrap();
    assert!(report.runs.iter().all(Result::is_err));
    let text = fs::read_to_string(cfg.out.join("run_01/report.txt")).unwrap();
    assert!(text.contains("status = failed: "), "{text}");
    assert!(report.summary.contains("runs.ok = 0"));
}
