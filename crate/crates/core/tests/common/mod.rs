#![allow(dead_code)]

use std::collections::HashMap;

use hetwalk::{HetMultigraph, NodeId, WalkerState};
use rand::Rng;

/// Raw undirected edge records `(u, v, edge type, weight)` with no repeated
/// `(pair, type)` key, plus node types.
pub struct RandomGraph {
    pub node_types: Vec<u32>,
    pub edge_type_count: usize,
    pub edges: Vec<(u32, u32, u32, f64)>,
}

impl RandomGraph {
    pub fn build(&self) -> HetMultigraph {
        HetMultigraph::from_edge_list(&self.node_types, self.edge_type_count, &self.edges).unwrap()
    }
}

/// Random multigraph: a spanning path keeps it connected, then extra edges
/// (including parallel edges of other types and the odd self-loop).
pub fn random_graph<R: Rng>(
    rng: &mut R,
    nodes: usize,
    node_types: u32,
    edge_types: u32,
    extra_edges: usize,
) -> RandomGraph {
    let mut seen = std::collections::HashSet::new();
    let mut edges = Vec::new();
    let mut push = |u: u32, v: u32, t: u32, w: f64, edges: &mut Vec<_>| {
        let key = (u.min(v), u.max(v), t);
        if seen.insert(key) {
            edges.push((u, v, t, w));
        }
    };
    for v in 1..nodes as u32 {
        let u = rng.random_range(0..v);
        push(u, v, rng.random_range(0..edge_types), rng.random_range(0.1..3.0), &mut edges);
    }
    for _ in 0..extra_edges {
        let u = rng.random_range(0..nodes as u32);
        let v = if rng.random_bool(0.03) { u } else { rng.random_range(0..nodes as u32) };
        push(u, v, rng.random_range(0..edge_types), rng.random_range(0.1..3.0), &mut edges);
    }
    // make sure every type occurs
    let mut types: Vec<u32> = (0..nodes as u32).map(|_| rng.random_range(0..node_types)).collect();
    for t in 0..node_types.min(nodes as u32) {
        types[t as usize] = t;
    }
    RandomGraph {
        node_types: types,
        edge_type_count: edge_types as usize,
        edges,
    }
}

/// Every valid walker state of `g`.
pub fn all_states(g: &HetMultigraph) -> Vec<WalkerState> {
    let mut out = Vec::new();
    for v in g.node_ids() {
        for e in g.neighbors(v).unwrap() {
            let s = WalkerState::new(e.endpoint, e.etype, v);
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

/// Plain node2vec next-step distribution computed straight from the raw edge
/// records, independent of the crate's adjacency structure. Returns
/// `((x, edge type), probability)` sorted by key.
pub fn reference_node2vec(
    rg: &RandomGraph,
    p: f64,
    q: f64,
    prev: NodeId,
    current: NodeId,
) -> Vec<((u32, u32), f64)> {
    let mut adj: HashMap<u32, Vec<(u32, u32, f64)>> = HashMap::new();
    for &(u, v, t, w) in &rg.edges {
        adj.entry(u).or_default().push((v, t, w));
        adj.entry(v).or_default().push((u, t, w));
    }
    let linked = |a: u32, b: u32| adj.get(&a).is_some_and(|l| l.iter().any(|&(x, _, _)| x == b));
    let mut scored: Vec<((u32, u32), f64)> = adj[&current.0]
        .iter()
        .map(|&(x, t, w)| {
            let alpha = if x == prev.0 {
                1.0 / p
            } else if linked(prev.0, x) {
                1.0
            } else {
                1.0 / q
            };
            ((x, t), alpha * w)
        })
        .collect();
    let total: f64 = scored.iter().map(|(_, w)| w).sum();
    for s in &mut scored {
        s.1 /= total;
    }
    scored.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    scored
}

pub fn keyed(dist: &[hetwalk::Transition]) -> Vec<((u32, u32), f64)> {
    let mut out: Vec<((u32, u32), f64)> = dist.iter().map(|t| ((t.node.0, t.etype.0), t.probability)).collect();
    out.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
    out
}


/// Two planted clusters of `half` nodes each.
pub fn planted_partition<R: Rng>(rng: &mut R, half: usize, p_in: f64, p_out: f64) -> HetMultigraph {
    let n = 2 * half;
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            let same = (u < half) == (v < half);
            if rng.random_bool(if same { p_in } else { p_out }) {
                edges.push((u as u32, v as u32, 0, 1.0));
            }
        }
    }
    HetMultigraph::from_edge_list(&vec![0; n], 1, &edges).unwrap()
}

/// Path to a file in the crate's `data/` directory.
pub fn data_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}
