//! Frequency-collision conflict graphs over donor triples and greedy
//! extraction of concurrently executable pulse sets, plus the Monte-Carlo
//! parallelism estimate on random conflict graphs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Undirected conflict graph: node = donor triple, edge = overlapping
/// transition frequencies, so the two CNOT pulses cannot run concurrently.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapGraph {
    n_nodes: usize,
    adjacency: Vec<Vec<bool>>,
}

impl OverlapGraph {
    pub fn empty(n_nodes: usize) -> Self {
        Self { n_nodes, adjacency: vec![vec![false; n_nodes]; n_nodes] }
    }

    pub fn complete(n_nodes: usize) -> Self {
        let mut g = Self::empty(n_nodes);
        for i in 0..n_nodes {
            for j in 0..n_nodes {
                g.adjacency[i][j] = i != j;
            }
        }
        g
    }

    pub fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub fn add_edge(&mut self, a: usize, b: usize) -> Result<()> {
        if a >= self.n_nodes || b >= self.n_nodes {
            return Err(Error::MalformedInput("edge endpoint out of range".into()));
        }
        if a == b {
            return Err(Error::MalformedInput("self-loops are not allowed".into()));
        }
        self.adjacency[a][b] = true;
        self.adjacency[b][a] = true;
        Ok(())
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.adjacency[a][b]
    }

    pub fn degree(&self, node: usize) -> usize {
        self.adjacency[node].iter().filter(|&&e| e).count()
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n_nodes).map(|i| self.adjacency[i][i + 1..].iter().filter(|&&e| e).count()).sum()
    }

    /// Fraction of node pairs in conflict.
    pub fn edge_density(&self) -> f64 {
        if self.n_nodes < 2 {
            return 0.0;
        }
        let pairs = self.n_nodes * (self.n_nodes - 1) / 2;
        self.edge_count() as f64 / pairs as f64
    }
}

/// Partition of the triples into rounds; each round is an independent set
/// of the conflict graph, executed as one batch of concurrent pulses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParallelPlan {
    pub rounds: Vec<Vec<usize>>,
}

impl ParallelPlan {
    pub fn first_round_size(&self) -> usize {
        self.rounds.first().map_or(0, Vec::len)
    }

    /// Checks that rounds partition the nodes and that no round contains a
    /// conflicting pair.
    pub fn validate(&self, graph: &OverlapGraph) -> Result<()> {
        let mut seen = vec![false; graph.n_nodes()];
        for round in &self.rounds {
            for &node in round {
                if node >= graph.n_nodes() || seen[node] {
                    return Err(Error::MalformedInput("rounds do not partition the nodes".into()));
                }
                seen[node] = true;
            }
            for (i, &a) in round.iter().enumerate() {
                for &b in &round[i + 1..] {
                    if graph.has_edge(a, b) {
                        return Err(Error::MalformedInput(format!(
                            "round contains conflicting pair ({a}, {b})"
                        )));
                    }
                }
            }
        }
        if seen.iter().any(|&s| !s) {
            return Err(Error::MalformedInput("rounds omit nodes".into()));
        }
        Ok(())
    }
}

/// Builds the conflict graph from per-triple allowed-frequency lists:
/// edge (i, j) iff some frequency of i lies within `tolerance_mhz` of some
/// frequency of j.
pub fn build_overlap_graph(frequency_sets: &[Vec<f64>], tolerance_mhz: f64) -> OverlapGraph {
    build_overlap_graph_broadband(frequency_sets, tolerance_mhz, 0.0)
}

/// Broadband variant: collisions closer than `broadband_tolerance_mhz` are
/// assumed addressable by a single broadband pulse and do not count as
/// conflicts, so an edge needs a collision in (broadband, tolerance].
/// `broadband_tolerance_mhz = 0` recovers the plain graph.
pub fn build_overlap_graph_broadband(
    frequency_sets: &[Vec<f64>],
    tolerance_mhz: f64,
    broadband_tolerance_mhz: f64,
) -> OverlapGraph {
    let n = frequency_sets.len();
    let mut graph = OverlapGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            let conflict = frequency_sets[i].iter().any(|&fa| {
                frequency_sets[j].iter().any(|&fb| {
                    let gap = (fa - fb).abs();
                    gap <= tolerance_mhz && (broadband_tolerance_mhz <= 0.0 || gap > broadband_tolerance_mhz)
                })
            });
            if conflict {
                graph.adjacency[i][j] = true;
                graph.adjacency[j][i] = true;
            }
        }
    }
    graph
}

/// One greedy independent set: repeatedly take a minimum-degree node of the
/// surviving subgraph (seeded uniform choice among ties) and delete its
/// neighborhood.
fn greedy_independent_set(
    graph: &OverlapGraph,
    available: &[bool],
    rng: &mut ChaCha8Rng,
) -> Vec<usize> {
    let mut alive = available.to_vec();
    // degrees within the subgraph this round starts from; kept static during
    // extraction so the pass stays a simple min-degree-first sweep
    let degree: Vec<usize> = (0..graph.n_nodes())
        .map(|i| {
            if !alive[i] {
                return 0;
            }
            (0..graph.n_nodes()).filter(|&j| alive[j] && graph.has_edge(i, j)).count()
        })
        .collect();
    let mut picked = Vec::new();
    loop {
        let mut best = usize::MAX;
        let mut ties = Vec::new();
        for (node, &a) in alive.iter().enumerate() {
            if !a {
                continue;
            }
            if degree[node] < best {
                best = degree[node];
                ties.clear();
                ties.push(node);
            } else if degree[node] == best {
                ties.push(node);
            }
        }
        if ties.is_empty() {
            break;
        }
        let chosen = ties[rng.random_range(0..ties.len())];
        picked.push(chosen);
        alive[chosen] = false;
        for j in 0..graph.n_nodes() {
            if alive[j] && graph.has_edge(chosen, j) {
                alive[j] = false;
            }
        }
    }
    picked.sort_unstable();
    picked
}

/// Repeated greedy maximum-independent-set extraction until every node is
/// assigned; rounds are ordered largest first.
pub fn greedy_parallel_sets(graph: &OverlapGraph, seed: u64) -> ParallelPlan {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut available = vec![true; graph.n_nodes()];
    let mut rounds = Vec::new();
    while available.iter().any(|&a| a) {
        let round = greedy_independent_set(graph, &available, &mut rng);
        for &node in &round {
            available[node] = false;
        }
        rounds.push(round);
    }
    rounds.sort_by_key(|r| std::cmp::Reverse(r.len()));
    ParallelPlan { rounds }
}

/// Monte-Carlo statistics of the greedy first-round size on random conflict
/// graphs with independent edge probability `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParallelismEstimate {
    pub n: usize,
    pub p: f64,
    pub trials: usize,
    pub mean: f64,
    pub std: f64,
}

fn random_graph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> OverlapGraph {
    let mut graph = OverlapGraph::empty(n);
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(p) {
                graph.adjacency[i][j] = true;
                graph.adjacency[j][i] = true;
            }
        }
    }
    graph
}

/// Samples `trials` random graphs and reports mean and sample standard
/// deviation of the greedy first-round size. Each trial derives its own
/// seed from `seed`, so the result is independent of execution order.
pub fn estimate_parallelism(
    n: usize,
    p: f64,
    trials: usize,
    seed: u64,
) -> Result<ParallelismEstimate> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidConfig("edge probability must lie in [0, 1]".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidConfig("trials must be positive".into()));
    }
    let sizes: Vec<f64> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let trial_seed = seed.wrapping_add((trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
            let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
            let graph = random_graph(n, p, &mut rng);
            let plan = greedy_parallel_sets(&graph, trial_seed ^ 0x5DEE_CE66);
            plan.first_round_size() as f64
        })
        .collect();
    let mean = sizes.iter().sum::<f64>() / trials as f64;
    let var = if trials > 1 {
        sizes.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (trials - 1) as f64
    } else {
        0.0
    };
    Ok(ParallelismEstimate { n, p, trials, mean, std: var.sqrt() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_sets_give_complete_graph() {
        let sets = vec![vec![10.0, 20.0]; 6];
        let g = build_overlap_graph(&sets, 1.0);
        assert_eq!(g.edge_count(), 15);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(g.has_edge(i, j), i != j);
            }
        }
    }

    #[test]
    fn well_separated_sets_give_empty_graph() {
        let sets: Vec<Vec<f64>> = (0..8).map(|i| vec![100.0 * i as f64]).collect();
        let g = build_overlap_graph(&sets, 1.0);
        assert_eq!(g.edge_count(), 0);
        assert_eq!(g.edge_density(), 0.0);
    }

    #[test]
    fn broadband_tolerance_drops_near_collisions_only() {
        // triples 0 and 1 collide only within 0.2 MHz; 0 and 2 collide at
        // a 0.8 MHz gap
        let sets = vec![vec![10.0], vec![10.1], vec![10.8]];
        let plain = build_overlap_graph(&sets, 1.0);
        assert!(plain.has_edge(0, 1) && plain.has_edge(0, 2));
        let broad = build_overlap_graph_broadband(&sets, 1.0, 0.3);
        assert!(!broad.has_edge(0, 1));
        assert!(broad.has_edge(0, 2));
    }

    #[test]
    fn graph_rejects_self_loops_and_out_of_range() {
        let mut g = OverlapGraph::empty(4);
        assert!(g.add_edge(1, 1).is_err());
        assert!(g.add_edge(0, 4).is_err());
        assert!(g.add_edge(0, 3).is_ok());
        assert!(g.has_edge(3, 0));
    }

    #[test]
    fn empty_graph_is_one_full_round() {
        let g = OverlapGraph::empty(225);
        let plan = greedy_parallel_sets(&g, 7);
        assert_eq!(plan.rounds.len(), 1);
        assert_eq!(plan.first_round_size(), 225);
        plan.validate(&g).unwrap();
    }

    #[test]
    fn complete_graph_is_singleton_rounds() {
        let g = OverlapGraph::complete(225);
        let plan = greedy_parallel_sets(&g, 7);
        assert_eq!(plan.rounds.len(), 225);
        assert!(plan.rounds.iter().all(|r| r.len() == 1));
        plan.validate(&g).unwrap();
    }

    #[test]
    fn plan_rounds_are_independent_partitions() {
        for seed in 0..5u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let g = random_graph(60, 0.3, &mut rng);
            let plan = greedy_parallel_sets(&g, seed + 100);
            plan.validate(&g).unwrap();
            // largest first
            for pair in plan.rounds.windows(2) {
                assert!(pair[0].len() >= pair[1].len());
            }
        }
    }

    #[test]
    fn validate_catches_conflicts_and_gaps() {
        let mut g = OverlapGraph::empty(3);
        g.add_edge(0, 1).unwrap();
        let conflicting = ParallelPlan { rounds: vec![vec![0, 1], vec![2]] };
        assert!(conflicting.validate(&g).is_err());
        let missing = ParallelPlan { rounds: vec![vec![0], vec![1]] };
        assert!(missing.validate(&g).is_err());
        let duplicated = ParallelPlan { rounds: vec![vec![0, 2], vec![1, 2]] };
        assert!(duplicated.validate(&g).is_err());
        let good = ParallelPlan { rounds: vec![vec![0, 2], vec![1]] };
        good.validate(&g).unwrap();
    }

    #[test]
    fn estimate_is_exact_for_p_zero() {
        let est = estimate_parallelism(225, 0.0, 10, 1).unwrap();
        assert_eq!(est.mean, 225.0);
        assert_eq!(est.std, 0.0);
    }

    #[test]
    fn estimate_windows_match_expected_parallelism() {
        let low = estimate_parallelism(225, 0.3, 200, 11).unwrap();
        assert!(
            (9.0..=16.0).contains(&low.mean),
            "p = 0.3 mean {} outside [9, 16]",
            low.mean
        );
        let high = estimate_parallelism(225, 0.4, 200, 11).unwrap();
        assert!(
            (7.0..=13.0).contains(&high.mean),
            "p = 0.4 mean {} outside [7, 13]",
            high.mean
        );
    }

    #[test]
    fn estimate_is_deterministic() {
        let a = estimate_parallelism(120, 0.25, 50, 42).unwrap();
        let b = estimate_parallelism(120, 0.25, 50, 42).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn estimate_mean_is_non_increasing_in_p() {
        let mut prev = f64::INFINITY;
        for step in 0..6 {
            let p = 0.1 * step as f64;
            let est = estimate_parallelism(150, p, 80, 5).unwrap();
            // adjacent points may overlap within uncertainty
            let slack = 2.0 * est.std / (est.trials as f64).sqrt();
            assert!(
                est.mean <= prev + slack.max(1e-12),
                "mean increased from {prev} to {} at p = {p}",
                est.mean
            );
            prev = est.mean;
        }
    }

    #[test]
    fn estimate_rejects_bad_inputs() {
        assert!(estimate_parallelism(10, -0.1, 5, 0).is_err());
        assert!(estimate_parallelism(10, 1.5, 5, 0).is_err());
        assert!(estimate_parallelism(10, 0.5, 0, 0).is_err());
    }

    #[test]
    fn plan_json_round_trip() {
        let plan = ParallelPlan { rounds: vec![vec![0, 2, 4], vec![1, 3]] };
        let text = serde_json::to_string(&plan).unwrap();
        assert!(text.contains("rounds"));
        let back: ParallelPlan = serde_json::from_str(&text).unwrap();
        assert_eq!(back, plan);
    }
}
