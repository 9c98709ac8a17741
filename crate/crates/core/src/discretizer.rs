//! Discretization of hidden-node activations by greedy one-pass clustering.

use std::fmt::Write as _;

use crate::dataset::DataView;
use crate::error::{Error, Result};
use crate::network::{argmax, Network};
use crate::pruner::AccuracyFloor;

/// The default epsilon grid: 1.0 halved down to no less than 0.0125.
pub fn default_epsilon_grid() -> Vec<f64> {
    let mut grid = vec![1.0];
    while grid[grid.len() - 1] * 0.5 >= 0.0125 {
        grid.push(grid[grid.len() - 1] * 0.5);
    }
    grid
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeClusters {
    pub epsilon: f64,
    /// Cluster means, highest first.
    pub representatives: Vec<f64>,
    /// Training patterns assigned to each representative.
    pub counts: Vec<usize>,
}

impl NodeClusters {
    /// Index of the closest representative; ties go to the lower index.
    pub fn nearest(&self, activation: f64) -> usize {
        let mut best = 0;
        for (i, r) in self.representatives.iter().enumerate().skip(1) {
            if (activation - r).abs() < (activation - self.representatives[best]).abs() {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ActivationClustering {
    pub nodes: Vec<NodeClusters>,
    /// `assignment[p][j]`: representative index of training pattern `p` at hidden node `j`.
    pub assignment: Vec<Vec<usize>>,
}

/// Greedy clustering of one node's activations.
///
/// Values are visited from highest to lowest. A value joins the first cluster
/// whose running mean is within `epsilon` of it, provided the cluster's
/// largest member stays within `epsilon` of the updated mean; otherwise it
/// founds a new cluster. Every value is then assigned to its nearest mean,
/// which keeps it within `epsilon` of its representative.
///
/// Returns the representatives and the per-value assignment.
pub fn cluster_values(values: &[f64], epsilon: f64) -> (Vec<f64>, Vec<usize>) {
    struct Running {
        sum: f64,
        count: usize,
        max: f64,
    }
    impl Running {
        fn mean(&self) -> f64 {
            self.sum / self.count as f64
        }
    }

    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let mut clusters: Vec<Running> = Vec::new();
    for &p in &order {
        let v = values[p];
        let target = clusters.iter_mut().find(|c| {
            let joined_mean = (c.sum + v) / (c.count + 1) as f64;
            (v - c.mean()).abs() <= epsilon && c.max - joined_mean <= epsilon
        });
        match target {
            Some(c) => {
                c.sum += v;
                c.count += 1;
            }
            None => clusters.push(Running {
                sum: v,
                count: 1,
                max: v,
            }),
        }
    }
    let representatives: Vec<f64> = clusters.iter().map(Running::mean).collect();
    let node = NodeClusters {
        epsilon,
        representatives,
        counts: Vec::new(),
    };
    let nearest: Vec<usize> = values.iter().map(|v| node.nearest(*v)).collect();

    // a representative can lose every member to a closer one; drop it
    let mut index = vec![usize::MAX; node.representatives.len()];
    let mut representatives = Vec::new();
    for (r, rep) in node.representatives.iter().enumerate() {
        if nearest.contains(&r) {
            index[r] = representatives.len();
            representatives.push(*rep);
        }
    }
    let assignment = nearest.iter().map(|&r| index[r]).collect();
    (representatives, assignment)
}

impl ActivationClustering {
    /// Clusters every hidden node's activations over `train` with one epsilon.
    pub fn build(net: &Network, train: &DataView, epsilon: f64) -> Result<Self> {
        let activations = hidden_activations(net, train)?;
        let mut nodes = Vec::with_capacity(net.n_hidden());
        let mut assignment = vec![vec![0usize; net.n_hidden()]; train.len()];
        for j in 0..net.n_hidden() {
            let column: Vec<f64> = activations.iter().map(|h| h[j]).collect();
            let (representatives, assigned) = cluster_values(&column, epsilon);
            let mut counts = vec![0usize; representatives.len()];
            for (p, a) in assigned.iter().enumerate() {
                counts[*a] += 1;
                assignment[p][j] = *a;
            }
            nodes.push(NodeClusters {
                epsilon,
                representatives,
                counts,
            });
        }
        Ok(ActivationClustering { nodes, assignment })
    }

    /// Representative index per hidden node for an input vector.
    pub fn snap(&self, net: &Network, x: &[f64]) -> Result<Vec<usize>> {
        let h = net.hidden(x)?;
        self.check(net)?;
        Ok(h.iter().zip(&self.nodes).map(|(a, node)| node.nearest(*a)).collect())
    }

    /// Hidden vector made of representatives for the given cluster indices.
    pub fn representative_vector(&self, clusters: &[usize]) -> Vec<f64> {
        clusters
            .iter()
            .zip(&self.nodes)
            .map(|(c, node)| node.representatives[*c])
            .collect()
    }

    /// Class predicted by the network when its hidden layer is replaced by
    /// the representatives `clusters`.
    pub fn predict_from_clusters(&self, net: &Network, clusters: &[usize]) -> Result<usize> {
        Ok(argmax(&net.output_from_hidden(&self.representative_vector(clusters))?))
    }

    pub fn predict(&self, net: &Network, x: &[f64]) -> Result<usize> {
        let clusters = self.snap(net, x)?;
        self.predict_from_clusters(net, &clusters)
    }

    /// Cluster indices for every example of `data` (recomputes `assignment`
    /// for a clustering read back from disk).
    pub fn assign(&self, net: &Network, data: &DataView) -> Result<Vec<Vec<usize>>> {
        data.examples().iter().map(|ex| self.snap(net, &ex.features)).collect()
    }

    fn check(&self, net: &Network) -> Result<()> {
        if self.nodes.len() != net.n_hidden() {
            return Err(Error::DimensionMismatch(format!(
                "clustering covers {} hidden nodes, network has {}",
                self.nodes.len(),
                net.n_hidden()
            )));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (j, node) in self.nodes.iter().enumerate() {
            let _ = writeln!(
                out,
                "node {j} epsilon {:.16e} representatives {}",
                node.epsilon,
                node.representatives.len()
            );
            for (r, (value, count)) in node.representatives.iter().zip(&node.counts).enumerate() {
                let _ = writeln!(out, "rep {j} {r} {value:.16e} {count}");
            }
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |n: usize, m: &str| Error::MalformedInput(format!("clusters line {n}: {m}"));
        let mut nodes: Vec<NodeClusters> = Vec::new();
        let mut expected: Vec<usize> = Vec::new();
        for (n, line) in text.lines().enumerate() {
            let n = n + 1;
            let parts: Vec<&str> = line.split_whitespace().collect();
            match parts.as_slice() {
                [] => {}
                ["node", j, "epsilon", eps, "representatives", count] => {
                    if j.parse::<usize>().ok() != Some(nodes.len()) {
                        return Err(bad(n, "nodes must be listed in order"));
                    }
                    let epsilon = eps.parse().map_err(|_| bad(n, "bad epsilon"))?;
                    expected.push(count.parse().map_err(|_| bad(n, "bad count"))?);
                    nodes.push(NodeClusters {
                        epsilon,
                        representatives: Vec::new(),
                        counts: Vec::new(),
                    });
                }
                ["rep", j, r, value, count] => {
                    let node = nodes.last_mut().ok_or_else(|| bad(n, "rep before node"))?;
                    if j.parse::<usize>().ok() != Some(expected.len() - 1)
                        || r.parse::<usize>().ok() != Some(node.representatives.len())
                    {
                        return Err(bad(n, "representatives must be listed in order"));
                    }
                    node.representatives
                        .push(value.parse().map_err(|_| bad(n, "bad value"))?);
                    node.counts.push(count.parse().map_err(|_| bad(n, "bad count"))?);
                }
                _ => return Err(bad(n, "unrecognised entry")),
            }
        }
        for (node, want) in nodes.iter().zip(&expected) {
            if node.representatives.len() != *want || node.representatives.is_empty() {
                return Err(Error::MalformedInput("clusters: representative count mismatch".into()));
            }
        }
        if nodes.is_empty() {
            return Err(Error::MalformedInput("clusters: no nodes".into()));
        }
        Ok(ActivationClustering {
            nodes,
            assignment: Vec::new(),
        })
    }
}

fn hidden_activations(net: &Network, data: &DataView) -> Result<Vec<Vec<f64>>> {
    data.examples().iter().map(|ex| net.hidden(&ex.features)).collect()
}

/// Accuracy of the network with each hidden activation snapped to its
/// nearest representative.
pub fn discretized_accuracy(net: &Network, c: &ActivationClustering, data: &DataView) -> Result<f64> {
    if data.is_empty() {
        return Err(Error::DimensionMismatch(
            "discretized accuracy of an empty dataset".into(),
        ));
    }
    let mut correct = 0usize;
    for ex in data.examples() {
        if c.predict(net, &ex.features)? == ex.label {
            correct += 1;
        }
    }
    Ok(correct as f64 / data.len() as f64)
}

/// Picks the largest epsilon in `epsilon_grid` whose discretized network
/// still meets `floor` (relative floors are measured from the plain
/// network's training accuracy).
pub fn cluster(
    net: &Network,
    train: &DataView,
    epsilon_grid: &[f64],
    floor: AccuracyFloor,
) -> Result<ActivationClustering> {
    if epsilon_grid.is_empty() || epsilon_grid.iter().any(|e| !(*e > 0.0 && *e <= 2.0)) {
        return Err(Error::InvalidConfig("epsilon grid values must lie in (0, 2]".into()));
    }
    let plain = net.accuracy(train)?;
    let threshold = floor.resolve(plain);
    let mut grid = epsilon_grid.to_vec();
    grid.sort_by(|a, b| b.total_cmp(a));
    for eps in grid {
        let clustering = ActivationClustering::build(net, train, eps)?;
        if AccuracyFloor::satisfied(discretized_accuracy(net, &clustering, train)?, threshold) {
            return Ok(clustering);
        }
    }
    Err(Error::NoFeasibleEpsilon { floor: threshold })
}
