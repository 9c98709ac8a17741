//! Three-layer feedforward classifier: tanh hidden layer, logistic outputs,
//! per-connection masks, and plain per-pattern backpropagation on squared error.

use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{DataView, Example};
use crate::error::{Error, Result};

/// Hidden activation, `(e^y - e^-y) / (e^y + e^-y)`.
pub fn hidden_activation(y: f64) -> f64 {
    y.tanh()
}

/// Output activation, `1 / (1 + e^-y)`.
pub fn output_activation(y: f64) -> f64 {
    1.0 / (1.0 + (-y).exp())
}

/// Index of the largest value; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate().skip(1) {
        if *v > values[best] {
            best = i;
        }
    }
    best
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub max_epochs: usize,
    /// Training stops once an epoch's summed squared error is at or below this.
    pub target_error: f64,
    pub init_range: (f64, f64),
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            learning_rate: 0.5,
            max_epochs: 200,
            target_error: 0.0,
            init_range: (-1.0, 1.0),
            seed: 0,
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.1..=1.0).contains(&self.learning_rate) {
            return Err(Error::InvalidConfig(format!(
                "learning rate {} outside [0.1, 1.0]",
                self.learning_rate
            )));
        }
        let (lo, hi) = self.init_range;
        if !(-1.0..=1.0).contains(&lo) || !(-1.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::InvalidConfig(format!(
                "init range [{lo}, {hi}] must lie within [-1, 1]"
            )));
        }
        if self.target_error.is_nan() || self.target_error < 0.0 {
            return Err(Error::InvalidConfig("target error must be >= 0".into()));
        }
        Ok(())
    }
}

/// Summed squared error of every epoch, in order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TrainTrace {
    pub epoch_errors: Vec<f64>,
}

impl TrainTrace {
    pub fn epochs_run(&self) -> usize {
        self.epoch_errors.len()
    }

    pub fn extend(&mut self, other: &TrainTrace) {
        self.epoch_errors.extend_from_slice(&other.epoch_errors);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Connection {
    InputHidden { input: usize, hidden: usize },
    HiddenOutput { hidden: usize, output: usize },
}

/// Weight matrices are row-major: `w_ih[i * n_hidden + j]`, `w_ho[j * n_out + k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    n_in: usize,
    n_hidden: usize,
    n_out: usize,
    pub w_ih: Vec<f64>,
    pub mask_ih: Vec<bool>,
    pub w_ho: Vec<f64>,
    pub mask_ho: Vec<bool>,
    pub b_h: Vec<f64>,
    pub b_o: Vec<f64>,
}

/// Gradient of the per-example loss `0.5 * sum_k (o_k - t_k)^2`, laid out
/// like the network parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w_ih: Vec<f64>,
    pub w_ho: Vec<f64>,
    pub b_h: Vec<f64>,
    pub b_o: Vec<f64>,
}

impl Network {
    pub fn init(n_in: usize, n_hidden: usize, n_out: usize, cfg: &TrainConfig) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        Self::init_with_rng(n_in, n_hidden, n_out, cfg, &mut rng)
    }

    pub fn init_with_rng<R: Rng>(
        n_in: usize,
        n_hidden: usize,
        n_out: usize,
        cfg: &TrainConfig,
        rng: &mut R,
    ) -> Result<Self> {
        cfg.validate()?;
        if n_in == 0 || n_hidden == 0 || n_out == 0 {
            return Err(Error::InvalidConfig(format!(
                "layer sizes must be >= 1, got {n_in}-{n_hidden}-{n_out}"
            )));
        }
        let mut draw = |n: usize| -> Vec<f64> { (0..n).map(|_| sample(rng, cfg.init_range)).collect() };
        let w_ih = draw(n_in * n_hidden);
        let w_ho = draw(n_hidden * n_out);
        let b_h = draw(n_hidden);
        let b_o = draw(n_out);
        Ok(Network {
            n_in,
            n_hidden,
            n_out,
            mask_ih: vec![true; w_ih.len()],
            mask_ho: vec![true; w_ho.len()],
            w_ih,
            w_ho,
            b_h,
            b_o,
        })
    }

    /// A network with every weight and bias zero and every mask active.
    pub fn zeros(n_in: usize, n_hidden: usize, n_out: usize) -> Self {
        Network {
            n_in,
            n_hidden,
            n_out,
            w_ih: vec![0.0; n_in * n_hidden],
            mask_ih: vec![true; n_in * n_hidden],
            w_ho: vec![0.0; n_hidden * n_out],
            mask_ho: vec![true; n_hidden * n_out],
            b_h: vec![0.0; n_hidden],
            b_o: vec![0.0; n_out],
        }
    }

    pub fn n_in(&self) -> usize {
        self.n_in
    }

    pub fn n_hidden(&self) -> usize {
        self.n_hidden
    }

    pub fn n_out(&self) -> usize {
        self.n_out
    }

    pub fn ih(&self, input: usize, hidden: usize) -> usize {
        input * self.n_hidden + hidden
    }

    pub fn ho(&self, hidden: usize, output: usize) -> usize {
        hidden * self.n_out + output
    }

    pub fn weight(&self, c: Connection) -> f64 {
        match c {
            Connection::InputHidden { input, hidden } => self.w_ih[self.ih(input, hidden)],
            Connection::HiddenOutput { hidden, output } => self.w_ho[self.ho(hidden, output)],
        }
    }

    pub fn is_active(&self, c: Connection) -> bool {
        match c {
            Connection::InputHidden { input, hidden } => self.mask_ih[self.ih(input, hidden)],
            Connection::HiddenOutput { hidden, output } => self.mask_ho[self.ho(hidden, output)],
        }
    }

    /// Masks a connection and zeroes its weight.
    pub fn disable(&mut self, c: Connection) {
        match c {
            Connection::InputHidden { input, hidden } => {
                let i = self.ih(input, hidden);
                self.mask_ih[i] = false;
                self.w_ih[i] = 0.0;
            }
            Connection::HiddenOutput { hidden, output } => {
                let i = self.ho(hidden, output);
                self.mask_ho[i] = false;
                self.w_ho[i] = 0.0;
            }
        }
    }

    /// Every active connection, input-hidden first, in index order.
    pub fn active_connections(&self) -> Vec<Connection> {
        let mut out = Vec::new();
        for input in 0..self.n_in {
            for hidden in 0..self.n_hidden {
                if self.mask_ih[self.ih(input, hidden)] {
                    out.push(Connection::InputHidden { input, hidden });
                }
            }
        }
        for hidden in 0..self.n_hidden {
            for output in 0..self.n_out {
                if self.mask_ho[self.ho(hidden, output)] {
                    out.push(Connection::HiddenOutput { hidden, output });
                }
            }
        }
        out
    }

    pub fn connection_count(&self) -> usize {
        self.mask_ih.iter().chain(&self.mask_ho).filter(|m| **m).count()
    }

    pub fn hidden_has_input(&self, j: usize) -> bool {
        (0..self.n_in).any(|i| self.mask_ih[self.ih(i, j)])
    }

    pub fn hidden_has_output(&self, j: usize) -> bool {
        (0..self.n_out).any(|k| self.mask_ho[self.ho(j, k)])
    }

    /// Hidden nodes with at least one active incoming and outgoing connection.
    pub fn live_hidden(&self) -> Vec<usize> {
        (0..self.n_hidden)
            .filter(|&j| self.hidden_has_input(j) && self.hidden_has_output(j))
            .collect()
    }

    /// Inputs feeding at least one live hidden node.
    pub fn live_inputs(&self) -> Vec<usize> {
        let live = self.live_hidden();
        (0..self.n_in)
            .filter(|&i| live.iter().any(|&j| self.mask_ih[self.ih(i, j)]))
            .collect()
    }

    /// Input, hidden and output nodes still in use; bias nodes are not counted.
    pub fn node_count(&self) -> usize {
        self.live_inputs().len() + self.live_hidden().len() + self.n_out
    }

    /// Appends a hidden node with fresh random weights; existing weights are kept.
    pub fn add_hidden<R: Rng>(&mut self, range: (f64, f64), rng: &mut R) {
        let old_h = self.n_hidden;
        let new_h = old_h + 1;
        let mut w_ih = Vec::with_capacity(self.n_in * new_h);
        let mut mask_ih = Vec::with_capacity(self.n_in * new_h);
        for i in 0..self.n_in {
            w_ih.extend_from_slice(&self.w_ih[i * old_h..(i + 1) * old_h]);
            mask_ih.extend_from_slice(&self.mask_ih[i * old_h..(i + 1) * old_h]);
            w_ih.push(sample(rng, range));
            mask_ih.push(true);
        }
        for _ in 0..self.n_out {
            self.w_ho.push(sample(rng, range));
            self.mask_ho.push(true);
        }
        self.b_h.push(sample(rng, range));
        self.w_ih = w_ih;
        self.mask_ih = mask_ih;
        self.n_hidden = new_h;
    }

    fn check_input(&self, x: &[f64]) -> Result<()> {
        if x.len() != self.n_in {
            return Err(Error::DimensionMismatch(format!(
                "network expects {} inputs, got {}",
                self.n_in,
                x.len()
            )));
        }
        Ok(())
    }

    pub fn hidden(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.check_input(x)?;
        let mut h = vec![0.0; self.n_hidden];
        self.hidden_into(x, &mut h);
        Ok(h)
    }

    fn hidden_into(&self, x: &[f64], h: &mut [f64]) {
        for (j, hj) in h.iter_mut().enumerate() {
            let mut net = self.b_h[j];
            for (i, xi) in x.iter().enumerate() {
                let w = self.ih(i, j);
                if self.mask_ih[w] {
                    net += self.w_ih[w] * xi;
                }
            }
            *hj = hidden_activation(net);
        }
    }

    fn output_into(&self, h: &[f64], o: &mut [f64]) {
        for (k, ok) in o.iter_mut().enumerate() {
            let mut net = self.b_o[k];
            for (j, hj) in h.iter().enumerate() {
                let w = self.ho(j, k);
                if self.mask_ho[w] {
                    net += self.w_ho[w] * hj;
                }
            }
            *ok = output_activation(net);
        }
    }

    /// Outputs for a given hidden activation vector (used for discretized passes).
    pub fn output_from_hidden(&self, h: &[f64]) -> Result<Vec<f64>> {
        if h.len() != self.n_hidden {
            return Err(Error::DimensionMismatch(format!(
                "network has {} hidden nodes, got {} activations",
                self.n_hidden,
                h.len()
            )));
        }
        let mut o = vec![0.0; self.n_out];
        self.output_into(h, &mut o);
        Ok(o)
    }

    pub fn forward(&self, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
        let h = self.hidden(x)?;
        let o = self.output_from_hidden(&h)?;
        Ok((h, o))
    }

    pub fn predict(&self, x: &[f64]) -> Result<usize> {
        Ok(argmax(&self.forward(x)?.1))
    }

    fn check_labels(&self, data: &DataView) -> Result<()> {
        if data.n_attributes() != self.n_in || data.n_classes() != self.n_out {
            return Err(Error::DimensionMismatch(format!(
                "network is {}-{}-{}, data has {} attributes and {} classes",
                self.n_in,
                self.n_hidden,
                self.n_out,
                data.n_attributes(),
                data.n_classes()
            )));
        }
        Ok(())
    }

    /// Fraction of examples whose arg-max output equals the label.
    pub fn accuracy(&self, data: &DataView) -> Result<f64> {
        self.check_labels(data)?;
        if data.is_empty() {
            return Err(Error::DimensionMismatch("accuracy of an empty dataset".into()));
        }
        let mut correct = 0usize;
        for ex in data.examples() {
            if self.predict(&ex.features)? == ex.label {
                correct += 1;
            }
        }
        Ok(correct as f64 / data.len() as f64)
    }

    /// Summed squared error over the data, `sum_p sum_k (o_k - t_k)^2`.
    pub fn sse(&self, data: &DataView) -> Result<f64> {
        self.check_labels(data)?;
        let mut total = 0.0;
        for ex in data.examples() {
            let (_, o) = self.forward(&ex.features)?;
            total += o
                .iter()
                .enumerate()
                .map(|(k, ok)| (ok - target(ex.label, k)).powi(2))
                .sum::<f64>();
        }
        Ok(total)
    }

    /// Per-example loss `0.5 * sum_k (o_k - t_k)^2` with one-hot targets.
    pub fn example_loss(&self, ex: &Example) -> Result<f64> {
        if ex.label >= self.n_out {
            return Err(Error::DimensionMismatch(format!(
                "label {} >= {} outputs",
                ex.label, self.n_out
            )));
        }
        let (_, o) = self.forward(&ex.features)?;
        Ok(0.5
            * o.iter()
                .enumerate()
                .map(|(k, ok)| (ok - target(ex.label, k)).powi(2))
                .sum::<f64>())
    }

    /// Analytic gradient of [`example_loss`](Self::example_loss); masked
    /// weights get exactly 0.
    pub fn loss_gradient(&self, ex: &Example) -> Result<Gradients> {
        if ex.label >= self.n_out {
            return Err(Error::DimensionMismatch(format!(
                "label {} >= {} outputs",
                ex.label, self.n_out
            )));
        }
        let (h, o) = self.forward(&ex.features)?;
        let delta_o: Vec<f64> = o
            .iter()
            .enumerate()
            .map(|(k, ok)| (ok - target(ex.label, k)) * ok * (1.0 - ok))
            .collect();
        let delta_h = self.hidden_deltas(&h, &delta_o);

        let mut g = Gradients {
            w_ih: vec![0.0; self.w_ih.len()],
            w_ho: vec![0.0; self.w_ho.len()],
            b_h: delta_h.clone(),
            b_o: delta_o.clone(),
        };
        for (j, hj) in h.iter().enumerate() {
            for (k, dk) in delta_o.iter().enumerate() {
                let w = self.ho(j, k);
                if self.mask_ho[w] {
                    g.w_ho[w] = dk * hj;
                }
            }
        }
        for (i, xi) in ex.features.iter().enumerate() {
            for (j, dj) in delta_h.iter().enumerate() {
                let w = self.ih(i, j);
                if self.mask_ih[w] {
                    g.w_ih[w] = dj * xi;
                }
            }
        }
        Ok(g)
    }

    fn hidden_deltas(&self, h: &[f64], delta_o: &[f64]) -> Vec<f64> {
        h.iter()
            .enumerate()
            .map(|(j, hj)| {
                let back: f64 = delta_o
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| self.mask_ho[self.ho(j, *k)])
                    .map(|(k, dk)| self.w_ho[self.ho(j, k)] * dk)
                    .sum();
                (1.0 - hj * hj) * back
            })
            .collect()
    }

    /// Per-pattern gradient descent in file order. Each epoch's error is the
    /// squared error accumulated while the epoch runs.
    pub fn train(&mut self, data: &DataView, cfg: &TrainConfig) -> Result<TrainTrace> {
        cfg.validate()?;
        self.check_labels(data)?;
        if data.is_empty() {
            return Err(Error::InvalidConfig("cannot train on an empty dataset".into()));
        }
        let lr = cfg.learning_rate;
        let mut trace = TrainTrace::default();
        let mut h = vec![0.0; self.n_hidden];
        let mut o = vec![0.0; self.n_out];
        let mut delta_o = vec![0.0; self.n_out];
        for _ in 0..cfg.max_epochs {
            let mut sse = 0.0;
            for ex in data.examples() {
                self.hidden_into(&ex.features, &mut h);
                self.output_into(&h, &mut o);
                for k in 0..self.n_out {
                    let err = o[k] - target(ex.label, k);
                    sse += err * err;
                    delta_o[k] = err * o[k] * (1.0 - o[k]);
                }
                let delta_h = self.hidden_deltas(&h, &delta_o);
                for (j, hj) in h.iter().enumerate() {
                    for (k, dk) in delta_o.iter().enumerate() {
                        let w = self.ho(j, k);
                        if self.mask_ho[w] {
                            self.w_ho[w] -= lr * dk * hj;
                        }
                    }
                }
                for (k, dk) in delta_o.iter().enumerate() {
                    self.b_o[k] -= lr * dk;
                }
                for (i, xi) in ex.features.iter().enumerate() {
                    for (j, dj) in delta_h.iter().enumerate() {
                        let w = self.ih(i, j);
                        if self.mask_ih[w] {
                            self.w_ih[w] -= lr * dj * xi;
                        }
                    }
                }
                for (j, dj) in delta_h.iter().enumerate() {
                    self.b_h[j] -= lr * dj;
                }
            }
            trace.epoch_errors.push(sse);
            if sse <= cfg.target_error {
                break;
            }
        }
        Ok(trace)
    }

    /// Flat text snapshot, one entity per line:
    /// `w_ih i j value active`, `w_ho j k value active`, `b_h j value`, `b_o k value`.
    pub fn to_snapshot(&self) -> String {
        let mut out = String::new();
        for i in 0..self.n_in {
            for j in 0..self.n_hidden {
                let w = self.ih(i, j);
                let _ = writeln!(out, "w_ih {i} {j} {:.16e} {}", self.w_ih[w], u8::from(self.mask_ih[w]));
            }
        }
        for j in 0..self.n_hidden {
            for k in 0..self.n_out {
                let w = self.ho(j, k);
                let _ = writeln!(out, "w_ho {j} {k} {:.16e} {}", self.w_ho[w], u8::from(self.mask_ho[w]));
            }
        }
        for (j, b) in self.b_h.iter().enumerate() {
            let _ = writeln!(out, "b_h {j} {b:.16e}");
        }
        for (k, b) in self.b_o.iter().enumerate() {
            let _ = writeln!(out, "b_o {k} {b:.16e}");
        }
        out
    }

    pub fn from_snapshot(text: &str) -> Result<Self> {
        let bad = |line: usize, msg: &str| Error::MalformedInput(format!("snapshot line {line}: {msg}"));
        type Entry = (usize, usize, f64, bool);
        let mut ih: Vec<Entry> = Vec::new();
        let mut ho: Vec<Entry> = Vec::new();
        let mut bh: Vec<(usize, f64)> = Vec::new();
        let mut bo: Vec<(usize, f64)> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let n = n + 1;
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.is_empty() {
                continue;
            }
            let idx = |s: &str| s.parse::<usize>().map_err(|_| bad(n, "bad index"));
            let val = |s: &str| s.parse::<f64>().map_err(|_| bad(n, "bad value"));
            let flag = |s: &str| match s {
                "1" => Ok(true),
                "0" => Ok(false),
                _ => Err(bad(n, "active flag must be 0 or 1")),
            };
            match (parts[0], parts.len()) {
                ("w_ih", 5) => ih.push((idx(parts[1])?, idx(parts[2])?, val(parts[3])?, flag(parts[4])?)),
                ("w_ho", 5) => ho.push((idx(parts[1])?, idx(parts[2])?, val(parts[3])?, flag(parts[4])?)),
                ("b_h", 3) => bh.push((idx(parts[1])?, val(parts[2])?)),
                ("b_o", 3) => bo.push((idx(parts[1])?, val(parts[2])?)),
                _ => return Err(bad(n, "unrecognised entry")),
            }
        }
        let n_hidden = bh.len();
        let n_out = bo.len();
        if n_hidden == 0 || n_out == 0 || !ih.len().is_multiple_of(n_hidden) {
            return Err(Error::MalformedInput("snapshot has inconsistent dimensions".into()));
        }
        let n_in = ih.len() / n_hidden;
        let mut net = Network::zeros(n_in, n_hidden, n_out);
        let mut seen_ih = vec![false; n_in * n_hidden];
        let mut seen_ho = vec![false; n_hidden * n_out];
        for (i, j, v, a) in ih {
            if i >= n_in || j >= n_hidden || std::mem::replace(&mut seen_ih[i * n_hidden + j], true) {
                return Err(Error::MalformedInput(format!("snapshot: bad or repeated w_ih {i} {j}")));
            }
            net.w_ih[i * n_hidden + j] = v;
            net.mask_ih[i * n_hidden + j] = a;
        }
        if ho.len() != n_hidden * n_out {
            return Err(Error::MalformedInput("snapshot has inconsistent dimensions".into()));
        }
        for (j, k, v, a) in ho {
            if j >= n_hidden || k >= n_out || std::mem::replace(&mut seen_ho[j * n_out + k], true) {
                return Err(Error::MalformedInput(format!("snapshot: bad or repeated w_ho {j} {k}")));
            }
            net.w_ho[j * n_out + k] = v;
            net.mask_ho[j * n_out + k] = a;
        }
        for (list, target) in [(bh, &mut net.b_h), (bo, &mut net.b_o)] {
            let mut seen = vec![false; target.len()];
            for (j, v) in list {
                if j >= target.len() || std::mem::replace(&mut seen[j], true) {
                    return Err(Error::MalformedInput(format!("snapshot: bad or repeated bias {j}")));
                }
                target[j] = v;
            }
        }
        let masked_nonzero = net
            .w_ih
            .iter()
            .zip(&net.mask_ih)
            .chain(net.w_ho.iter().zip(&net.mask_ho))
            .any(|(w, m)| !m && *w != 0.0);
        if masked_nonzero {
            return Err(Error::MalformedInput("snapshot: masked weight is non-zero".into()));
        }
        Ok(net)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_snapshot()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_snapshot(&text)
    }
}

fn target(label: usize, k: usize) -> f64 {
    if label == k {
        1.0
    } else {
        0.0
    }
}

fn sample<R: Rng>(rng: &mut R, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        lo
    } else {
        rng.gen_range(lo..=hi)
    }
}
