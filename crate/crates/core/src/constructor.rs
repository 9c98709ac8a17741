//! Constructive sizing of the hidden layer: start from one hidden node and
//! add nodes one at a time while each addition pays for itself on training error.

use rand::Rng;

use crate::dataset::DataView;
use crate::error::{Error, Result};
use crate::network::{Network, TrainConfig, TrainTrace};

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthConfig {
    /// Minimum relative SSE improvement an added node must deliver.
    pub tau: f64,
    /// Epochs trained for every candidate size.
    pub patience_epochs: usize,
    pub max_hidden: usize,
}

impl Default for GrowthConfig {
    fn default() -> Self {
        GrowthConfig {
            tau: 0.01,
            patience_epochs: 100,
            max_hidden: 8,
        }
    }
}

impl GrowthConfig {
    pub fn validate(&self) -> Result<()> {
        if self.tau.is_nan() || self.tau <= 0.0 {
            return Err(Error::InvalidConfig("growth tau must be > 0".into()));
        }
        if self.max_hidden == 0 {
            return Err(Error::InvalidConfig("max_hidden must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrowthStep {
    pub hidden: usize,
    pub sse: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GrowthLog {
    pub steps: Vec<GrowthStep>,
    /// Error curve of the network that was kept.
    pub trace: TrainTrace,
    /// Every epoch trained, including discarded candidates.
    pub epochs_trained: usize,
}

/// Grows a network on `train`.
///
/// Each step forks the current network: one copy keeps training as is, the
/// other gets a fresh hidden node and the same epoch budget. The new node is
/// kept when `(sse_continued - sse_grown) / sse_continued >= tau`; otherwise the
/// continued copy is kept and growth stops. Growth also stops once the
/// network classifies every training pattern or reaches `max_hidden`.
pub fn grow<R: Rng>(
    train: &DataView,
    tcfg: &TrainConfig,
    gcfg: &GrowthConfig,
    rng: &mut R,
) -> Result<(Network, GrowthLog)> {
    gcfg.validate()?;
    tcfg.validate()?;
    if train.is_empty() {
        return Err(Error::InvalidConfig("cannot grow a network on an empty dataset".into()));
    }
    let budget = TrainConfig {
        max_epochs: gcfg.patience_epochs,
        ..tcfg.clone()
    };

    let mut log = GrowthLog::default();
    let mut net = Network::init_with_rng(train.n_attributes(), 1, train.n_classes(), tcfg, rng)?;
    let t = net.train(train, &budget)?;
    log.epochs_trained += t.epochs_run();
    log.trace.extend(&t);
    let mut sse = net.sse(train)?;
    log.steps.push(GrowthStep {
        hidden: 1,
        sse,
        accepted: true,
    });
    let mut best = (net.clone(), sse, log.trace.clone());

    while net.n_hidden() < gcfg.max_hidden && sse > tcfg.target_error && net.accuracy(train)? < 1.0 {
        let mut continued = net.clone();
        let t_cont = continued.train(train, &budget)?;
        let sse_cont = continued.sse(train)?;

        let mut grown = net.clone();
        grown.add_hidden(tcfg.init_range, rng);
        let t_grown = grown.train(train, &budget)?;
        let sse_grown = grown.sse(train)?;
        log.epochs_trained += t_cont.epochs_run() + t_grown.epochs_run();

        let improvement = if sse_cont > 0.0 {
            (sse_cont - sse_grown) / sse_cont
        } else {
            0.0
        };
        let accepted = improvement >= gcfg.tau;
        log.steps.push(GrowthStep {
            hidden: grown.n_hidden(),
            sse: sse_grown,
            accepted,
        });
        if accepted {
            net = grown;
            sse = sse_grown;
            log.trace.extend(&t_grown);
        } else {
            net = continued;
            sse = sse_cont;
            log.trace.extend(&t_cont);
        }
        if sse <= best.1 {
            best = (net.clone(), sse, log.trace.clone());
        }
        if !accepted {
            break;
        }
    }
    let (net, _, trace) = best;
    log.trace = trace;
    Ok((net, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn toy() -> Dataset {
        Dataset::from_rows(&[(vec![0.0], 0), (vec![1.0], 1)], 2).unwrap()
    }

    #[test]
    fn max_hidden_one_keeps_a_single_node() {
        let d = Dataset::from_rows(
            &[
                (vec![0.0, 0.0], 0),
                (vec![0.0, 1.0], 1),
                (vec![1.0, 0.0], 1),
                (vec![1.0, 1.0], 0),
            ],
            2,
        )
        .unwrap();
        let gcfg = GrowthConfig {
            max_hidden: 1,
            ..GrowthConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (net, log) = grow(&d.all(), &TrainConfig::default(), &gcfg, &mut rng).unwrap();
        assert_eq!(net.n_hidden(), 1);
        assert_eq!(log.steps.len(), 1);
    }

    #[test]
    fn separable_toy_stops_at_one_node() {
        let d = toy();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (net, log) = grow(&d.all(), &TrainConfig::default(), &GrowthConfig::default(), &mut rng).unwrap();
        assert_eq!(net.n_hidden(), 1);
        assert_eq!(net.accuracy(&d.all()).unwrap(), 1.0);
        assert!(log.steps.iter().all(|s| s.accepted));
    }

    #[test]
    fn xor_grows_past_one_node() {
        let d = Dataset::from_rows(
            &[
                (vec![0.0, 0.0], 0),
                (vec![0.0, 1.0], 1),
                (vec![1.0, 0.0], 1),
                (vec![1.0, 1.0], 0),
            ],
            2,
        )
        .unwrap();
        let tcfg = TrainConfig {
            learning_rate: 0.5,
            ..TrainConfig::default()
        };
        let gcfg = GrowthConfig {
            patience_epochs: 400,
            ..GrowthConfig::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let (net, log) = grow(&d.all(), &tcfg, &gcfg, &mut rng).unwrap();
        assert!(net.n_hidden() >= 2, "log: {:?}", log.steps);
        assert_eq!(log.steps[0].hidden, 1);
    }

    #[test]
    fn invalid_growth_config() {
        let d = toy();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let bad = GrowthConfig {
            tau: 0.0,
            ..GrowthConfig::default()
        };
        assert!(matches!(
            grow(&d.all(), &TrainConfig::default(), &bad, &mut rng),
            Err(Error::InvalidConfig(_))
        ));
    }
}
