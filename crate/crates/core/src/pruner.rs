//! Greedy magnitude pruning with retraining and rollback.

use std::collections::BTreeSet;

use crate::dataset::DataView;
use crate::error::{Error, Result};
use crate::network::{hidden_activation, Connection, Network, TrainConfig, TrainTrace};

/// Accuracy requirement relative to a reference accuracy, or absolute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum AccuracyFloor {
    /// At most this much below the reference.
    Relative(f64),
    Absolute(f64),
}

impl AccuracyFloor {
    pub fn resolve(&self, reference: f64) -> f64 {
        match *self {
            AccuracyFloor::Relative(eta) => reference - eta,
            AccuracyFloor::Absolute(a) => a,
        }
    }

    /// `accuracy >= floor`, tolerant of rounding in fractions like 327/350.
    pub fn satisfied(accuracy: f64, floor: f64) -> bool {
        accuracy + 1e-12 >= floor
    }

    /// Parses `relative 0.01` or `absolute 0.9`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut parts = text.split_whitespace();
        let (mode, value) = (parts.next(), parts.next());
        let value: f64 = value
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::InvalidConfig(format!("floor `{text}`: expected `<mode> <value>`")))?;
        let floor = match mode {
            Some("relative") => AccuracyFloor::Relative(value),
            Some("absolute") => AccuracyFloor::Absolute(value),
            _ => return Err(Error::InvalidConfig(format!("floor `{text}`: unknown mode"))),
        };
        if parts.next().is_some() {
            return Err(Error::InvalidConfig(format!("floor `{text}`: trailing input")));
        }
        Ok(floor)
    }

    pub fn render(&self) -> String {
        match self {
            AccuracyFloor::Relative(v) => format!("relative {v}"),
            AccuracyFloor::Absolute(v) => format!("absolute {v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneConfig {
    pub floor: AccuracyFloor,
    pub retrain_epochs: usize,
}

impl Default for PruneConfig {
    fn default() -> Self {
        PruneConfig {
            floor: AccuracyFloor::Relative(0.01),
            retrain_epochs: 20,
        }
    }
}

impl PruneConfig {
    pub fn validate(&self) -> Result<()> {
        match self.floor {
            AccuracyFloor::Relative(eta) if !(0.0..=0.05).contains(&eta) => Err(Error::InvalidConfig(format!(
                "relative prune floor {eta} outside [0, 0.05]"
            ))),
            AccuracyFloor::Absolute(a) if !(0.0..=1.0).contains(&a) => {
                Err(Error::InvalidConfig(format!("absolute prune floor {a} outside [0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PruneOutcome {
    Commit,
    Rollback,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneEntry {
    pub connection: Connection,
    pub weight: f64,
    pub outcome: PruneOutcome,
    /// Training accuracy after the removal and retraining.
    pub accuracy: f64,
    /// Active connections once this entry is settled.
    pub connections: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PruneLog {
    pub base_accuracy: f64,
    pub floor: f64,
    pub entries: Vec<PruneEntry>,
    /// Retraining curve of the committed removals.
    pub trace: TrainTrace,
    pub epochs_trained: usize,
}

impl PruneLog {
    pub fn removed_inputs(&self, before: &Network, after: &Network) -> Vec<usize> {
        let kept = after.live_inputs();
        before.live_inputs().into_iter().filter(|i| !kept.contains(i)).collect()
    }
}

/// Removes connections smallest-magnitude first. A removal is kept when the
/// retrained network still meets the accuracy floor on `train`; otherwise the
/// network is restored and the connection is exempted until the next
/// successful removal. Stops when every active connection is exempt.
pub fn prune(net: &Network, train: &DataView, tcfg: &TrainConfig, pcfg: &PruneConfig) -> Result<(Network, PruneLog)> {
    pcfg.validate()?;
    tcfg.validate()?;
    let base_accuracy = net.accuracy(train)?;
    let floor = pcfg.floor.resolve(base_accuracy);
    if !AccuracyFloor::satisfied(base_accuracy, floor) {
        return Err(Error::InvalidConfig(format!(
            "network accuracy {base_accuracy} is already below the prune floor {floor}"
        )));
    }
    let retrain = TrainConfig {
        max_epochs: pcfg.retrain_epochs,
        ..tcfg.clone()
    };

    let mut current = net.clone();
    tidy(&mut current);
    let mut log = PruneLog {
        base_accuracy,
        floor,
        ..PruneLog::default()
    };
    let mut exempt: BTreeSet<Connection> = BTreeSet::new();

    loop {
        let candidate = current
            .active_connections()
            .into_iter()
            .filter(|c| !exempt.contains(c))
            .min_by(|a, b| {
                current
                    .weight(*a)
                    .abs()
                    .total_cmp(&current.weight(*b).abs())
                    .then(a.cmp(b))
            });
        let Some(connection) = candidate else { break };

        let weight = current.weight(connection);
        let mut trial = current.clone();
        trial.disable(connection);
        tidy(&mut trial);
        let trace = trial.train(train, &retrain)?;
        log.epochs_trained += trace.epochs_run();
        let accuracy = trial.accuracy(train)?;

        if AccuracyFloor::satisfied(accuracy, floor) {
            current = trial;
            log.trace.extend(&trace);
            exempt.clear();
            log.entries.push(PruneEntry {
                connection,
                weight,
                outcome: PruneOutcome::Commit,
                accuracy,
                connections: current.connection_count(),
            });
        } else {
            exempt.insert(connection);
            log.entries.push(PruneEntry {
                connection,
                weight,
                outcome: PruneOutcome::Rollback,
                accuracy,
                connections: current.connection_count(),
            });
        }
    }
    Ok((current, log))
}

/// Removes dead structure without changing any output: a hidden node with no
/// outgoing connections loses its incoming ones, and a hidden node with no
/// incoming connections (a constant `tanh(b_h)`) is folded into the output
/// biases.
pub fn tidy(net: &mut Network) {
    for j in 0..net.n_hidden() {
        let has_in = net.hidden_has_input(j);
        let has_out = net.hidden_has_output(j);
        if has_in && !has_out {
            for input in 0..net.n_in() {
                let c = Connection::InputHidden { input, hidden: j };
                if net.is_active(c) {
                    net.disable(c);
                }
            }
        } else if !has_in && has_out {
            let constant = hidden_activation(net.b_h[j]);
            for output in 0..net.n_out() {
                let c = Connection::HiddenOutput { hidden: j, output };
                if net.is_active(c) {
                    net.b_o[output] += net.weight(c) * constant;
                    net.disable(c);
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;

    fn two_feature_data() -> Dataset {
        let rows: Vec<(Vec<f64>, usize)> = (0..40)
            .map(|i| {
                let x = (i % 10) as f64 / 9.0;
                let noise = ((i * 7) % 11) as f64 / 10.0;
                (vec![x, noise], usize::from(x > 0.5))
            })
            .collect();
        Dataset::from_rows(&rows, 2).unwrap()
    }

    #[test]
    fn floor_parsing() {
        assert_eq!(
            AccuracyFloor::parse("relative 0.01").unwrap(),
            AccuracyFloor::Relative(0.01)
        );
        assert_eq!(
            AccuracyFloor::parse("absolute 0.9").unwrap(),
            AccuracyFloor::Absolute(0.9)
        );
        assert!(AccuracyFloor::parse("relative").is_err());
        assert!(AccuracyFloor::parse("sideways 1").is_err());
    }

    #[test]
    fn zero_weight_goes_first() {
        let d = two_feature_data();
        let cfg = TrainConfig {
            seed: 3,
            ..TrainConfig::default()
        };
        let mut net = Network::init(2, 2, 2, &cfg).unwrap();
        net.train(
            &d.all(),
            &TrainConfig {
                max_epochs: 300,
                ..cfg.clone()
            },
        )
        .unwrap();
        let i = net.ih(1, 1);
        net.w_ih[i] = 0.0;
        let before = net.accuracy(&d.all()).unwrap();
        let (_, log) = prune(&net, &d.all(), &cfg, &PruneConfig::default()).unwrap();
        let first = &log.entries[0];
        assert_eq!(first.connection, Connection::InputHidden { input: 1, hidden: 1 });
        assert_eq!(first.outcome, PruneOutcome::Commit);
        assert!(first.accuracy + 1e-12 >= before - 0.01);
    }

    #[test]
    fn tidy_preserves_outputs() {
        let cfg = TrainConfig {
            seed: 8,
            ..TrainConfig::default()
        };
        let mut net = Network::init(3, 2, 2, &cfg).unwrap();
        for input in 0..3 {
            net.disable(Connection::InputHidden { input, hidden: 0 });
        }
        net.disable(Connection::HiddenOutput { hidden: 1, output: 0 });
        net.disable(Connection::HiddenOutput { hidden: 1, output: 1 });
        let x = [0.2, 0.7, 0.4];
        let before = net.forward(&x).unwrap().1;
        tidy(&mut net);
        let after = net.forward(&x).unwrap().1;
        for (a, b) in before.iter().zip(&after) {
            assert!((a - b).abs() < 1e-12);
        }
        assert_eq!(net.connection_count(), 0);
    }

    #[test]
    fn rejects_out_of_range_relative_floor() {
        let d = two_feature_data();
        let net = Network::zeros(2, 1, 2);
        let pcfg = PruneConfig {
            floor: AccuracyFloor::Relative(0.2),
            retrain_epochs: 1,
        };
        assert!(matches!(
            prune(&net, &d.all(), &TrainConfig::default(), &pcfg),
            Err(Error::InvalidConfig(_))
        ));
    }
}
