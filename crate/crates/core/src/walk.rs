//! Second-order walk sampling.
//!
//! Transition weights are computed on the fly for each step: every edge
//! instance `(x, t, w)` at the current node `v` scores
//! `gamma(d(prev, x), type(v), type(x), arrival type, t) * w`, and the next
//! instance is drawn proportionally. Parallel edges are separate candidates.
//! The first step of a walk has no previous node and is drawn by weight alone.

use std::fmt;

use rand::Rng;
use rayon::prelude::*;

use crate::bias::BiasParams;
use crate::error::{Error, Result};
use crate::graph::{EdgeInstance, EdgeTypeId, HetMultigraph, NodeId};
use crate::rng::walk_stream;

/// Second-order walker memory: the edge `prev --arrival_etype--> current`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct WalkerState {
    pub prev: NodeId,
    pub arrival_etype: EdgeTypeId,
    pub current: NodeId,
}

impl WalkerState {
    pub fn new(prev: NodeId, arrival_etype: EdgeTypeId, current: NodeId) -> Self {
        WalkerState {
            prev,
            arrival_etype,
            current,
        }
    }

    /// Checks that the arrival edge exists in `g`.
    pub fn validate(&self, g: &HetMultigraph) -> Result<()> {
        let nb = g.neighbors(self.current)?;
        g.neighbors(self.prev)?;
        let found = nb
            .binary_search_by_key(&(self.prev, self.arrival_etype), |e| (e.endpoint, e.etype))
            .is_ok();
        if found {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "no edge of type {} between {} and {}",
                self.arrival_etype, self.prev, self.current
            )))
        }
    }
}

/// One candidate step with its normalised probability.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transition {
    pub node: NodeId,
    pub etype: EdgeTypeId,
    pub probability: f64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WalkConfig {
    /// Nodes per walk, start node included.
    pub walk_length: usize,
    pub walks_per_node: u32,
    pub seed: u64,
    pub threads: usize,
}

impl Default for WalkConfig {
    fn default() -> Self {
        WalkConfig {
            walk_length: 80,
            walks_per_node: 10,
            seed: 42,
            threads: 1,
        }
    }
}

impl WalkConfig {
    pub fn validate(&self) -> Result<()> {
        if self.walk_length == 0 {
            return Err(Error::Usage("walk length must be at least 1".into()));
        }
        if self.walks_per_node == 0 {
            return Err(Error::Usage("walks per node must be at least 1".into()));
        }
        if self.threads == 0 {
            return Err(Error::Usage("thread count must be at least 1".into()));
        }
        Ok(())
    }
}

/// Walks ordered by `(start node, replicate)`.
///
/// `edge_types[i][j]` is the type of the edge traversed between
/// `walks[i][j]` and `walks[i][j + 1]`; it is only known for corpora produced
/// in memory and is `None` for corpora read back from disk.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct WalkCorpus {
    pub walks: Vec<Vec<NodeId>>,
    pub edge_types: Option<Vec<Vec<EdgeTypeId>>>,
}

impl WalkCorpus {
    pub fn new(walks: Vec<Vec<NodeId>>) -> Self {
        WalkCorpus {
            walks,
            edge_types: None,
        }
    }

    pub fn len(&self) -> usize {
        self.walks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walks.is_empty()
    }

    pub fn token_count(&self) -> usize {
        self.walks.iter().map(Vec::len).sum()
    }
}

/// Writes the unnormalised weight of every instance at `state.current` into `out`.
#[inline]
fn fill_weights(g: &HetMultigraph, params: &BiasParams, state: &WalkerState, out: &mut Vec<f64>) {
    out.clear();
    let from_type = g.ntype(state.current);
    let mut last: Option<(NodeId, crate::graph::DistanceClass)> = None;
    for e in g.adj(state.current) {
        // parallel instances are adjacent in the sorted slice and share d
        let d = match last {
            Some((x, d)) if x == e.endpoint => d,
            _ => {
                let d = g.dclass(state.prev, e.endpoint);
                last = Some((e.endpoint, d));
                d
            }
        };
        let gamma = params.gamma(d, from_type, g.ntype(e.endpoint), state.arrival_etype, e.etype);
        out.push(gamma * e.weight);
    }
}

/// Exact next-step distribution from `state`, one entry per edge instance in
/// adjacency order.
pub fn transition_distribution(g: &HetMultigraph, params: &BiasParams, state: &WalkerState) -> Result<Vec<Transition>> {
    g.neighbors(state.prev)?;
    if g.neighbors(state.current)?.is_empty() {
        return Err(Error::DeadEnd(state.current));
    }
    state.validate(g)?;
    let mut weights = Vec::new();
    fill_weights(g, params, state, &mut weights);
    let total: f64 = weights.iter().sum();
    Ok(g.adj(state.current)
        .iter()
        .zip(weights)
        .map(|(e, w)| Transition {
            node: e.endpoint,
            etype: e.etype,
            probability: w / total,
        })
        .collect())
}

/// Draws an index in proportion to `weights` (all positive, non-empty).
/// Leaves the running sums in `weights`.
#[inline]
fn draw<R: Rng + ?Sized>(weights: &mut [f64], rng: &mut R) -> usize {
    let mut acc = 0.0;
    for w in weights.iter_mut() {
        acc += *w;
        *w = acc;
    }
    let u = rng.random::<f64>() * acc;
    weights.partition_point(|&c| c <= u).min(weights.len() - 1)
}

/// Reusable per-thread sampler holding a scratch buffer.
pub struct Walker<'a> {
    g: &'a HetMultigraph,
    params: &'a BiasParams,
    scratch: Vec<f64>,
}

impl<'a> Walker<'a> {
    pub fn new(g: &'a HetMultigraph, params: &'a BiasParams) -> Self {
        Walker {
            g,
            params,
            scratch: Vec::new(),
        }
    }

    /// Weight-proportional first step out of `start`; `None` when isolated.
    pub fn first_step<R: Rng + ?Sized>(&mut self, start: NodeId, rng: &mut R) -> Option<WalkerState> {
        let nb = self.g.adj(start);
        if nb.is_empty() {
            return None;
        }
        self.scratch.clear();
        self.scratch.extend(nb.iter().map(|e| e.weight));
        let e = nb[draw(&mut self.scratch, rng)];
        Some(WalkerState::new(start, e.etype, e.endpoint))
    }

    /// Second-order step; `None` at a dead end.
    pub fn step<R: Rng + ?Sized>(&mut self, state: &WalkerState, rng: &mut R) -> Option<WalkerState> {
        let nb: &[EdgeInstance] = self.g.adj(state.current);
        if nb.is_empty() {
            return None;
        }
        fill_weights(self.g, self.params, state, &mut self.scratch);
        let e = nb[draw(&mut self.scratch, rng)];
        Some(WalkerState::new(state.current, e.etype, e.endpoint))
    }

    /// Walk of up to `length` nodes from `start`, appending node ids and
    /// traversed edge types to the output buffers.
    pub fn walk_into<R: Rng + ?Sized>(
        &mut self,
        start: NodeId,
        length: usize,
        rng: &mut R,
        nodes: &mut Vec<NodeId>,
        etypes: &mut Vec<EdgeTypeId>,
    ) {
        if length == 0 {
            return;
        }
        nodes.push(start);
        if length == 1 {
            return;
        }
        let Some(mut state) = self.first_step(start, rng) else {
            return;
        };
        nodes.push(state.current);
        etypes.push(state.arrival_etype);
        while nodes.len() < length {
            match self.step(&state, rng) {
                Some(next) => {
                    nodes.push(next.current);
                    etypes.push(next.arrival_etype);
                    state = next;
                }
                None => break,
            }
        }
    }
}

/// Samples the next state from [`transition_distribution`]; `Ok(None)` at a dead end.
pub fn sample_next<R: Rng + ?Sized>(
    g: &HetMultigraph,
    params: &BiasParams,
    state: &WalkerState,
    rng: &mut R,
) -> Result<Option<WalkerState>> {
    g.neighbors(state.current)?;
    if g.adj(state.current).is_empty() {
        return Ok(None);
    }
    state.validate(g)?;
    Ok(Walker::new(g, params).step(state, rng))
}

/// Weight-proportional first step from `start`; `Ok(None)` for an isolated node.
///
/// No switching or return/in-out bias applies here since there is no previous node.
pub fn first_step<R: Rng + ?Sized>(g: &HetMultigraph, start: NodeId, rng: &mut R) -> Result<Option<WalkerState>> {
    g.neighbors(start)?;
    let params = BiasParams::default();
    Ok(Walker::new(g, &params).first_step(start, rng))
}

/// `walks_per_node` walks from every node, ordered by `(start, replicate)`.
///
/// Walk `(v, j)` draws from the stream `walk_stream(seed, v, j)`, so the
/// corpus is identical for any thread count.
pub fn generate_walks(g: &HetMultigraph, params: &BiasParams, cfg: &WalkConfig) -> Result<WalkCorpus> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Usage(format!("cannot build thread pool: {e}")))?;
    let per_start: Vec<Vec<(Vec<NodeId>, Vec<EdgeTypeId>)>> = pool.install(|| {
        (0..g.node_count() as u32)
            .into_par_iter()
            .map_init(
                || Walker::new(g, params),
                |walker, v| {
                    let start = NodeId(v);
                    (0..cfg.walks_per_node)
                        .map(|j| {
                            let mut rng = walk_stream(cfg.seed, start, j);
                            let mut nodes = Vec::with_capacity(cfg.walk_length);
                            let mut etypes = Vec::with_capacity(cfg.walk_length.saturating_sub(1));
                            walker.walk_into(start, cfg.walk_length, &mut rng, &mut nodes, &mut etypes);
                            (nodes, etypes)
                        })
                        .collect()
                },
            )
            .collect()
    });
    let (walks, etypes) = per_start.into_iter().flatten().unzip();
    Ok(WalkCorpus {
        walks,
        edge_types: Some(etypes),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeTypeSource {
    /// Edge types recorded during generation.
    Recorded,
    /// Each step's edge type apportioned among the parallel edges joining the
    /// two nodes in proportion to weight.
    Inferred,
}

/// Type-level summary of a walk corpus.
#[derive(Clone, Debug, PartialEq)]
pub struct WalkStats {
    pub node_type_names: Vec<String>,
    pub edge_type_names: Vec<String>,
    /// Node occurrences per node type (all positions).
    pub node_type_visits: Vec<u64>,
    pub node_type_fraction: Vec<f64>,
    /// Step mass per edge type (fractional when inferred).
    pub edge_type_steps: Vec<f64>,
    pub edge_type_fraction: Vec<f64>,
    pub visits: u64,
    pub steps: u64,
    /// Fraction of steps whose destination type differs from the source type.
    pub node_switch_rate: f64,
    /// Fraction of consecutive step pairs traversing different edge types.
    pub edge_switch_rate: f64,
    pub edge_type_source: EdgeTypeSource,
}

fn fractions(counts: impl Iterator<Item = f64> + Clone) -> Vec<f64> {
    let total: f64 = counts.clone().sum();
    counts.map(|c| if total > 0.0 { c / total } else { 0.0 }).collect()
}

/// Weight shares of each edge type among the instances joining `a` and `b`.
fn edge_shares(g: &HetMultigraph, a: NodeId, b: NodeId, out: &mut Vec<(EdgeTypeId, f64)>) -> Result<()> {
    out.clear();
    let slice = g.adj(a);
    let lo = slice.partition_point(|e| e.endpoint < b);
    let mut total = 0.0;
    for e in slice[lo..].iter().take_while(|e| e.endpoint == b) {
        // self-loops appear twice with the same type; merge them
        match out.last_mut() {
            Some((t, w)) if *t == e.etype => *w += e.weight,
            _ => out.push((e.etype, e.weight)),
        }
        total += e.weight;
    }
    if out.is_empty() {
        return Err(Error::Validation(format!(
            "walk steps between non-adjacent nodes {:?} and {:?}",
            g.node_name(a),
            g.node_name(b)
        )));
    }
    for (_, w) in out.iter_mut() {
        *w /= total;
    }
    Ok(())
}

/// Visit and switching statistics for `corpus` over `g`.
pub fn walk_stats(corpus: &WalkCorpus, g: &HetMultigraph) -> Result<WalkStats> {
    let nt = g.node_type_count();
    let et = g.edge_type_count();
    let mut node_type_visits = vec![0u64; nt];
    let mut edge_type_steps = vec![0.0f64; et];
    let (mut visits, mut steps, mut node_switches) = (0u64, 0u64, 0u64);
    let (mut edge_pairs, mut edge_switches) = (0u64, 0.0f64);

    for walk in &corpus.walks {
        for &v in walk {
            if !g.contains(v) {
                return Err(Error::Validation(format!("walk references unknown node id {v}")));
            }
            node_type_visits[g.ntype(v).index()] += 1;
            visits += 1;
        }
        for pair in walk.windows(2) {
            steps += 1;
            if g.ntype(pair[0]) != g.ntype(pair[1]) {
                node_switches += 1;
            }
        }
    }

    let source = match &corpus.edge_types {
        Some(recorded) => {
            for (walk, types) in corpus.walks.iter().zip(recorded) {
                if types.len() + 1 != walk.len().max(1) {
                    return Err(Error::Validation("edge type record does not match walk length".into()));
                }
                for &t in types {
                    edge_type_steps[t.index()] += 1.0;
                }
                for pair in types.windows(2) {
                    edge_pairs += 1;
                    if pair[0] != pair[1] {
                        edge_switches += 1.0;
                    }
                }
            }
            EdgeTypeSource::Recorded
        }
        None => {
            let mut prev_shares = Vec::new();
            let mut shares = Vec::new();
            for walk in &corpus.walks {
                for (i, pair) in walk.windows(2).enumerate() {
                    edge_shares(g, pair[0], pair[1], &mut shares)?;
                    for &(t, w) in &shares {
                        edge_type_steps[t.index()] += w;
                    }
                    if i > 0 {
                        edge_pairs += 1;
                        let same: f64 = shares
                            .iter()
                            .filter_map(|&(t, w)| prev_shares.iter().find(|(u, _)| *u == t).map(|&(_, pw)| w * pw))
                            .sum();
                        edge_switches += 1.0 - same;
                    }
                    std::mem::swap(&mut prev_shares, &mut shares);
                }
            }
            EdgeTypeSource::Inferred
        }
    };

    let rate = |num: f64, den: u64| if den > 0 { num / den as f64 } else { 0.0 };
    Ok(WalkStats {
        node_type_names: g.node_type_vocab().names().to_vec(),
        edge_type_names: g.edge_type_vocab().names().to_vec(),
        node_type_fraction: fractions(node_type_visits.iter().map(|&c| c as f64)),
        node_type_visits,
        edge_type_fraction: fractions(edge_type_steps.iter().copied()),
        edge_type_steps,
        visits,
        steps,
        node_switch_rate: rate(node_switches as f64, steps),
        edge_switch_rate: rate(edge_switches, edge_pairs),
        edge_type_source: source,
    })
}

impl WalkStats {
    /// Visit fraction of the named node type, if it exists.
    pub fn node_type_fraction_of(&self, name: &str) -> Option<f64> {
        self.node_type_names
            .iter()
            .position(|n| n == name)
            .map(|i| self.node_type_fraction[i])
    }

    /// Machine-readable report, one `key<TAB>value` pair per line.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        let mut kv = |k: &str, v: &dyn fmt::Display| out.push_str(&format!("{k}\t{v}\n"));
        kv("visits", &self.visits);
        kv("steps", &self.steps);
        for (name, f) in self.node_type_names.iter().zip(&self.node_type_fraction) {
            kv(&format!("node_type_fraction.{name}"), f);
        }
        for (name, f) in self.edge_type_names.iter().zip(&self.edge_type_fraction) {
            kv(&format!("edge_type_fraction.{name}"), f);
        }
        kv("node_switch_rate", &self.node_switch_rate);
        kv("edge_switch_rate", &self.edge_switch_rate);
        let source = match self.edge_type_source {
            EdgeTypeSource::Recorded => "recorded",
            EdgeTypeSource::Inferred => "inferred",
        };
        kv("edge_type_source", &source);
        out
    }
}

impl fmt::Display for WalkStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} visits, {} steps", self.visits, self.steps)?;
        writeln!(f, "node type visit fractions:")?;
        for ((name, frac), count) in self
            .node_type_names
            .iter()
            .zip(&self.node_type_fraction)
            .zip(&self.node_type_visits)
        {
            writeln!(f, "  {name:<20} {frac:>8.4}  ({count})")?;
        }
        writeln!(f, "edge type traversal fractions:")?;
        for (name, frac) in self.edge_type_names.iter().zip(&self.edge_type_fraction) {
            writeln!(f, "  {name:<20} {frac:>8.4}")?;
        }
        writeln!(f, "node switch rate: {:.4}", self.node_switch_rate)?;
        write!(f, "edge switch rate: {:.4}", self.edge_switch_rate)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn n(v: u32) -> NodeId {
        NodeId(v)
    }

    fn star_with_cycle() -> HetMultigraph {
        // 0 is the hub; 1-2 adjacent; 3 and 4 hang off the hub; 0-1 also has a type-1 edge
        HetMultigraph::from_edge_list(
            &[0, 0, 1, 1, 0],
            2,
            &[
                (0, 1, 0, 1.0),
                (0, 1, 1, 2.0),
                (0, 2, 0, 1.5),
                (0, 3, 1, 0.5),
                (0, 4, 0, 3.0),
                (1, 2, 0, 1.0),
            ],
        )
        .unwrap()
    }

    #[test]
    fn unit_parameters_give_weight_proportional_steps() {
        let g = star_with_cycle();
        let params = BiasParams::default();
        let dist = transition_distribution(&g, &params, &WalkerState::new(n(1), EdgeTypeId(0), n(0))).unwrap();
        let total: f64 = g.neighbors(n(0)).unwrap().iter().map(|e| e.weight).sum();
        for (t, e) in dist.iter().zip(g.neighbors(n(0)).unwrap()) {
            assert!((t.probability - e.weight / total).abs() < 1e-15);
        }
    }

    #[test]
    fn same_type_distant_target_scores_one_over_q() {
        // r_o -> v_s -> x_s^2 with matching edge types
        let g = HetMultigraph::from_edge_list(&[1, 0, 0], 1, &[(0, 1, 0, 1.0), (1, 2, 0, 2.0)]).unwrap();
        let params = BiasParams::uniform(1.0, 4.0, 3.0, 1.0).unwrap();
        let dist = transition_distribution(&g, &params, &WalkerState::new(n(0), EdgeTypeId(0), n(1))).unwrap();
        // unnormalised: back to r_o = 1/(p s) * 1 = 1/3, to x_s^2 = 1/q * 2 = 1/2
        let (back, fwd) = (1.0 / 3.0, 0.5);
        assert!((dist[0].probability - back / (back + fwd)).abs() < 1e-15);
        assert!((dist[1].probability - fwd / (back + fwd)).abs() < 1e-15);
    }

    #[test]
    fn normalisation_arithmetic() {
        // unnormalised 0.5 (return, p=2) and 1.5 (distant, q=1, weight 1.5)
        let g = HetMultigraph::from_edge_list(&[0, 0, 0], 1, &[(0, 1, 0, 1.0), (1, 2, 0, 1.5)]).unwrap();
        let params = BiasParams::node2vec(2.0, 1.0).unwrap();
        let dist = transition_distribution(&g, &params, &WalkerState::new(n(0), EdgeTypeId(0), n(1))).unwrap();
        assert_eq!(dist[0].probability, 0.25);
        assert_eq!(dist[1].probability, 0.75);
    }

    #[test]
    fn backtrack_over_other_edge_type_takes_one_over_pe() {
        let g = HetMultigraph::from_edge_list(&[0, 0], 2, &[(0, 1, 0, 1.0), (0, 1, 1, 1.0)]).unwrap();
        let (p, e) = (2.0, 5.0);
        let params = BiasParams::uniform(p, 1.0, 1.0, e).unwrap();
        let dist = transition_distribution(&g, &params, &WalkerState::new(n(0), EdgeTypeId(0), n(1))).unwrap();
        let same = 1.0 / p;
        let switched = 1.0 / (p * e);
        assert!((dist[1].probability - switched / (same + switched)).abs() < 1e-15);
    }

    #[test]
    fn invalid_state_and_dead_end() {
        let g = HetMultigraph::from_edge_list(&[0, 0, 0], 1, &[(0, 1, 0, 1.0)]).unwrap();
        let params = BiasParams::default();
        // no edge 2-1
        let err = transition_distribution(&g, &params, &WalkerState::new(n(2), EdgeTypeId(0), n(1))).unwrap_err();
        assert!(err.is_usage());
        let err = transition_distribution(&g, &params, &WalkerState::new(n(0), EdgeTypeId(0), n(2))).unwrap_err();
        assert!(matches!(err, Error::DeadEnd(NodeId(2))));
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(first_step(&g, n(2), &mut rng).unwrap(), None);
        assert_eq!(sample_next(&g, &params, &WalkerState::new(n(0), EdgeTypeId(0), n(2)), &mut rng).unwrap(), None);
    }

    #[test]
    fn degree_one_step_is_forced() {
        let g = HetMultigraph::from_edge_list(&[0, 0], 1, &[(0, 1, 0, 1.0)]).unwrap();
        let params = BiasParams::uniform(0.3, 7.0, 2.0, 2.0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100 {
            let next = sample_next(&g, &params, &WalkerState::new(n(0), EdgeTypeId(0), n(1)), &mut rng).unwrap();
            assert_eq!(next, Some(WalkerState::new(n(1), EdgeTypeId(0), n(0))));
        }
    }

    #[test]
    fn first_step_is_weight_proportional() {
        let g = HetMultigraph::from_edge_list(&[0, 0, 0], 1, &[(0, 1, 0, 1.0), (0, 2, 0, 3.0)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let draws = 200_000;
        let hits = (0..draws)
            .filter(|_| first_step(&g, n(0), &mut rng).unwrap().unwrap().current == n(2))
            .count();
        assert!((hits as f64 / draws as f64 - 0.75).abs() < 0.005);
    }

    #[test]
    fn sampling_matches_exact_distribution() {
        let g = star_with_cycle();
        let params = BiasParams::uniform(0.5, 2.0, 0.25, 3.0).unwrap();
        let state = WalkerState::new(n(1), EdgeTypeId(1), n(0));
        let dist = transition_distribution(&g, &params, &state).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut walker = Walker::new(&g, &params);
        let mut counts = vec![0usize; dist.len()];
        let draws = 1_000_000;
        for _ in 0..draws {
            let next = walker.step(&state, &mut rng).unwrap();
            let i = dist
                .iter()
                .position(|t| t.node == next.current && t.etype == next.arrival_etype)
                .unwrap();
            counts[i] += 1;
        }
        let tv: f64 = 0.5
            * dist
                .iter()
                .zip(&counts)
                .map(|(t, &c)| (c as f64 / draws as f64 - t.probability).abs())
                .sum::<f64>();
        assert!(tv < 0.01, "total variation {tv}");
    }

    #[test]
    fn same_seed_same_draws() {
        let g = star_with_cycle();
        let params = BiasParams::uniform(0.5, 2.0, 0.25, 3.0).unwrap();
        let state = WalkerState::new(n(2), EdgeTypeId(0), n(0));
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..50)
                .map(|_| sample_next(&g, &params, &state, &mut rng).unwrap().unwrap())
                .collect::<Vec<_>>()
        };
        assert_eq!(run(3), run(3));
        assert_ne!(run(3), run(4));
    }

    #[test]
    fn length_one_walks_are_just_the_start() {
        let g = star_with_cycle();
        let cfg = WalkConfig {
            walk_length: 1,
            walks_per_node: 3,
            seed: 9,
            threads: 2,
        };
        let corpus = generate_walks(&g, &BiasParams::default(), &cfg).unwrap();
        assert_eq!(corpus.len(), 15);
        for (i, w) in corpus.walks.iter().enumerate() {
            assert_eq!(w, &vec![n((i / 3) as u32)]);
        }
    }

    #[test]
    fn path_graph_alternates() {
        let g = HetMultigraph::from_edge_list(&[0, 0], 1, &[(0, 1, 0, 1.0)]).unwrap();
        let cfg = WalkConfig {
            walk_length: 5,
            walks_per_node: 1,
            seed: 0,
            threads: 1,
        };
        let corpus = generate_walks(&g, &BiasParams::node2vec(0.1, 10.0).unwrap(), &cfg).unwrap();
        assert_eq!(corpus.walks[0], vec![n(0), n(1), n(0), n(1), n(0)]);
        assert_eq!(corpus.walks[1], vec![n(1), n(0), n(1), n(0), n(1)]);
    }

    #[test]
    fn isolated_start_emits_single_node_walk() {
        let g = HetMultigraph::from_edge_list(&[0, 0, 0], 1, &[(0, 1, 0, 1.0)]).unwrap();
        let corpus = generate_walks(&g, &BiasParams::default(), &WalkConfig::default()).unwrap();
        assert!(corpus.walks[20..30].iter().all(|w| w == &vec![n(2)]));
        assert!(corpus.walks[..20].iter().all(|w| w.len() == 80));
    }

    #[test]
    fn first_step_ignores_bias_parameters() {
        let g = star_with_cycle();
        let cfg = WalkConfig {
            walk_length: 2,
            walks_per_node: 50,
            seed: 17,
            threads: 1,
        };
        let plain = generate_walks(&g, &BiasParams::default(), &cfg).unwrap();
        for params in [
            BiasParams::uniform(0.1, 9.0, 0.2, 5.0).unwrap(),
            BiasParams::uniform(4.0, 0.3, 7.0, 0.1).unwrap(),
        ] {
            assert_eq!(generate_walks(&g, &params, &cfg).unwrap(), plain);
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let g = star_with_cycle();
        for cfg in [
            WalkConfig { walk_length: 0, ..WalkConfig::default() },
            WalkConfig { walks_per_node: 0, ..WalkConfig::default() },
            WalkConfig { threads: 0, ..WalkConfig::default() },
        ] {
            assert!(generate_walks(&g, &BiasParams::default(), &cfg).unwrap_err().is_usage());
        }
    }

    #[test]
    fn stats_single_type_has_no_node_switches() {
        let g = HetMultigraph::from_edge_list(&[0, 0, 0], 2, &[(0, 1, 0, 1.0), (1, 2, 1, 1.0)]).unwrap();
        let corpus = generate_walks(&g, &BiasParams::default(), &WalkConfig::default()).unwrap();
        let stats = walk_stats(&corpus, &g).unwrap();
        assert_eq!(stats.node_switch_rate, 0.0);
        assert!((stats.node_type_fraction.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((stats.edge_type_fraction.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inferred_edge_types_agree_with_recorded_on_simple_graphs() {
        let g = HetMultigraph::from_edge_list(&[0, 1, 0, 1], 2, &[(0, 1, 0, 1.0), (1, 2, 1, 1.0), (2, 3, 0, 2.0), (3, 0, 1, 1.0)])
            .unwrap();
        let corpus = generate_walks(&g, &BiasParams::uniform(1.0, 1.0, 0.5, 2.0).unwrap(), &WalkConfig::default()).unwrap();
        let recorded = walk_stats(&corpus, &g).unwrap();
        let inferred = walk_stats(&WalkCorpus::new(corpus.walks.clone()), &g).unwrap();
        assert_eq!(recorded.edge_type_source, EdgeTypeSource::Recorded);
        assert_eq!(inferred.edge_type_source, EdgeTypeSource::Inferred);
        for (a, b) in recorded.edge_type_fraction.iter().zip(&inferred.edge_type_fraction) {
            assert!((a - b).abs() < 1e-12);
        }
        assert!((recorded.edge_switch_rate - inferred.edge_switch_rate).abs() < 1e-12);
        assert_eq!(recorded.node_switch_rate, 1.0);
    }

    #[test]
    fn inferred_stats_reject_non_adjacent_steps() {
        let g = HetMultigraph::from_edge_list(&[0, 0, 0], 1, &[(0, 1, 0, 1.0), (1, 2, 0, 1.0)]).unwrap();
        let corpus = WalkCorpus::new(vec![vec![n(0), n(2)]]);
        assert!(matches!(walk_stats(&corpus, &g), Err(Error::Validation(_))));
    }

    #[test]
    fn stats_tsv_lists_every_type() {
        let g = star_with_cycle();
        let corpus = generate_walks(&g, &BiasParams::default(), &WalkConfig::default()).unwrap();
        let tsv = walk_stats(&corpus, &g).unwrap().to_tsv();
        assert!(tsv.contains("node_type_fraction.0\t"));
        assert!(tsv.contains("node_type_fraction.1\t"));
        assert!(tsv.contains("edge_type_fraction.1\t"));
        assert!(tsv.lines().all(|l| l.split('\t').count() == 2));
    }
}
