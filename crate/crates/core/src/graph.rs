//! Compressed adjacency for undirected, weighted, typed multigraphs.
//!
//! Every node owns a contiguous slice of [`EdgeInstance`]s sorted by
//! `(endpoint, etype)`. Parallel edges of distinct types stay separate
//! instances; a self-loop contributes two instances to its node's slice so
//! that the slice lengths always sum to twice the number of undirected edges.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

macro_rules! dense_id {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub u32);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0 as usize
            }
        }

        impl From<u32> for $name {
            fn from(v: u32) -> Self {
                $name(v)
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

dense_id!(
    /// Dense node index, `0 <= id < node_count`.
    NodeId
);
dense_id!(
    /// Dense index into the node type vocabulary.
    NodeTypeId
);
dense_id!(
    /// Dense index into the edge type vocabulary.
    EdgeTypeId
);

/// One directed half of an undirected edge, stored in the adjacency of its source.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeInstance {
    pub endpoint: NodeId,
    pub etype: EdgeTypeId,
    pub weight: f64,
}

/// Shortest-path distance class between the previous node and a candidate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DistanceClass {
    /// The candidate is the previous node.
    Return,
    /// The candidate is adjacent to the previous node.
    Adjacent,
    /// The candidate is two hops from the previous node.
    Distant,
}

impl DistanceClass {
    pub const ALL: [DistanceClass; 3] = [
        DistanceClass::Return,
        DistanceClass::Adjacent,
        DistanceClass::Distant,
    ];

    pub fn value(self) -> u8 {
        match self {
            DistanceClass::Return => 0,
            DistanceClass::Adjacent => 1,
            DistanceClass::Distant => 2,
        }
    }

    pub fn from_value(d: u8) -> Option<Self> {
        match d {
            0 => Some(DistanceClass::Return),
            1 => Some(DistanceClass::Adjacent),
            2 => Some(DistanceClass::Distant),
            _ => None,
        }
    }
}

/// Bidirectional name <-> dense id table.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Vocabulary {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, name: &str) -> u32 {
        if let Some(&id) = self.ids.get(name) {
            return id;
        }
        let id = u32::try_from(self.names.len()).expect("vocabulary exceeds u32 ids");
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        id
    }

    pub fn get(&self, name: &str) -> Option<u32> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, id: u32) -> Option<&str> {
        self.names.get(id as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Name of the node type given to nodes without an explicit type.
pub const DEFAULT_NODE_TYPE: &str = "default";

/// Incremental constructor for [`HetMultigraph`].
///
/// Records that repeat the same unordered endpoint pair and edge type are
/// merged by summing their weights; records differing only in edge type are
/// kept as parallel edges.
#[derive(Debug)]
pub struct GraphBuilder {
    nodes: Vocabulary,
    node_type_names: Vocabulary,
    edge_type_names: Vocabulary,
    node_types: Vec<Option<NodeTypeId>>,
    edges: Vec<(NodeId, NodeId, EdgeTypeId, f64)>,
    edge_index: HashMap<(u32, u32, u32), usize>,
}

impl Default for GraphBuilder {
    fn default() -> Self {
        Self::new()
    }
}

impl GraphBuilder {
    /// Builder whose node type vocabulary starts with [`DEFAULT_NODE_TYPE`] at id 0.
    pub fn new() -> Self {
        Self::with_default_node_type(DEFAULT_NODE_TYPE)
    }

    pub fn with_default_node_type(name: &str) -> Self {
        let mut node_type_names = Vocabulary::new();
        node_type_names.intern(name);
        GraphBuilder {
            nodes: Vocabulary::new(),
            node_type_names,
            edge_type_names: Vocabulary::new(),
            node_types: Vec::new(),
            edges: Vec::new(),
            edge_index: HashMap::new(),
        }
    }

    /// Builder for id-addressed graphs: nodes are named `"0".."n-1"` and the
    /// type vocabularies `"0".."k-1"`, so type names equal their ids.
    pub fn with_counts(node_count: usize, node_type_count: usize, edge_type_count: usize) -> Self {
        let mut b = GraphBuilder {
            nodes: Vocabulary::new(),
            node_type_names: Vocabulary::new(),
            edge_type_names: Vocabulary::new(),
            node_types: Vec::new(),
            edges: Vec::new(),
            edge_index: HashMap::new(),
        };
        for t in 0..node_type_count.max(1) {
            b.node_type_names.intern(&t.to_string());
        }
        for t in 0..edge_type_count {
            b.edge_type_names.intern(&t.to_string());
        }
        for v in 0..node_count {
            b.node(&v.to_string());
        }
        b
    }

    /// Interns a node name, returning its id (first-appearance order).
    pub fn node(&mut self, name: &str) -> NodeId {
        let id = self.nodes.intern(name);
        if id as usize == self.node_types.len() {
            self.node_types.push(None);
        }
        NodeId(id)
    }

    pub fn node_type(&mut self, name: &str) -> NodeTypeId {
        NodeTypeId(self.node_type_names.intern(name))
    }

    pub fn edge_type(&mut self, name: &str) -> EdgeTypeId {
        EdgeTypeId(self.edge_type_names.intern(name))
    }

    pub fn node_id(&self, name: &str) -> Option<NodeId> {
        self.nodes.get(name).map(NodeId)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Assigns a node type. Re-assigning a different type is a validation error.
    pub fn set_node_type(&mut self, v: NodeId, t: NodeTypeId) -> Result<()> {
        self.check_node(v)?;
        if t.index() >= self.node_type_names.len() {
            return Err(Error::Usage(format!("node type id {t} out of range")));
        }
        match self.node_types[v.index()] {
            Some(prev) if prev != t => Err(Error::Validation(format!(
                "node {:?} assigned conflicting types {:?} and {:?}",
                self.nodes.name(v.0).unwrap_or_default(),
                self.node_type_names.name(prev.0).unwrap_or_default(),
                self.node_type_names.name(t.0).unwrap_or_default(),
            ))),
            _ => {
                self.node_types[v.index()] = Some(t);
                Ok(())
            }
        }
    }

    pub fn add_edge(&mut self, u: NodeId, v: NodeId, t: EdgeTypeId, weight: f64) -> Result<()> {
        self.check_node(u)?;
        self.check_node(v)?;
        if t.index() >= self.edge_type_names.len() {
            return Err(Error::Usage(format!("edge type id {t} out of range")));
        }
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(Error::Validation(format!(
                "edge weight must be positive and finite, got {weight}"
            )));
        }
        let (a, b) = if u <= v { (u, v) } else { (v, u) };
        match self.edge_index.get(&(a.0, b.0, t.0)) {
            Some(&slot) => self.edges[slot].3 += weight,
            None => {
                self.edge_index.insert((a.0, b.0, t.0), self.edges.len());
                self.edges.push((a, b, t, weight));
            }
        }
        Ok(())
    }

    fn check_node(&self, v: NodeId) -> Result<()> {
        if v.index() < self.nodes.len() {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "node id {v} out of range (node count {})",
                self.nodes.len()
            )))
        }
    }

    pub fn build(self) -> HetMultigraph {
        let n = self.nodes.len();
        let mut degree = vec![0usize; n];
        for &(u, v, _, _) in &self.edges {
            degree[u.index()] += 1;
            degree[v.index()] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let placeholder = EdgeInstance {
            endpoint: NodeId(0),
            etype: EdgeTypeId(0),
            weight: 0.0,
        };
        let mut adjacency = vec![placeholder; offsets[n]];
        let mut cursor = offsets[..n].to_vec();
        for &(u, v, etype, weight) in &self.edges {
            adjacency[cursor[u.index()]] = EdgeInstance {
                endpoint: v,
                etype,
                weight,
            };
            cursor[u.index()] += 1;
            adjacency[cursor[v.index()]] = EdgeInstance {
                endpoint: u,
                etype,
                weight,
            };
            cursor[v.index()] += 1;
        }
        for v in 0..n {
            adjacency[offsets[v]..offsets[v + 1]].sort_by_key(|e| (e.endpoint, e.etype));
        }
        HetMultigraph {
            node_types: self
                .node_types
                .into_iter()
                .map(|t| t.unwrap_or(NodeTypeId(0)))
                .collect(),
            offsets,
            adjacency,
            nodes: self.nodes,
            node_type_names: self.node_type_names,
            edge_type_names: self.edge_type_names,
        }
    }
}

/// Immutable heterogeneous multigraph. Safe to share across walker threads.
#[derive(Clone, Debug)]
pub struct HetMultigraph {
    node_types: Vec<NodeTypeId>,
    offsets: Vec<usize>,
    adjacency: Vec<EdgeInstance>,
    nodes: Vocabulary,
    node_type_names: Vocabulary,
    edge_type_names: Vocabulary,
}

impl HetMultigraph {
    /// Builds an id-addressed graph. `node_types[v]` is the type of node `v`;
    /// edge types must be `< edge_type_count`.
    pub fn from_edge_list(
        node_types: &[u32],
        edge_type_count: usize,
        edges: &[(u32, u32, u32, f64)],
    ) -> Result<Self> {
        let node_type_count = node_types.iter().map(|&t| t as usize + 1).max().unwrap_or(1);
        let mut b = GraphBuilder::with_counts(node_types.len(), node_type_count, edge_type_count);
        for (v, &t) in node_types.iter().enumerate() {
            b.set_node_type(NodeId(v as u32), NodeTypeId(t))?;
        }
        for &(u, v, t, w) in edges {
            b.add_edge(NodeId(u), NodeId(v), EdgeTypeId(t), w)?;
        }
        Ok(b.build())
    }

    pub fn node_count(&self) -> usize {
        self.node_types.len()
    }

    /// Number of stored edge instances (twice the undirected edge count).
    pub fn instance_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn node_type_count(&self) -> usize {
        self.node_type_names.len()
    }

    pub fn edge_type_count(&self) -> usize {
        self.edge_type_names.len()
    }

    pub fn node_ids(&self) -> impl ExactSizeIterator<Item = NodeId> {
        (0..self.node_count() as u32).map(NodeId)
    }

    pub fn contains(&self, v: NodeId) -> bool {
        v.index() < self.node_count()
    }

    fn check(&self, v: NodeId) -> Result<()> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(Error::Usage(format!(
                "node id {v} out of range (node count {})",
                self.node_count()
            )))
        }
    }

    /// Full adjacency slice of `v`, parallel edges and self-loops included.
    pub fn neighbors(&self, v: NodeId) -> Result<&[EdgeInstance]> {
        self.check(v)?;
        Ok(self.adj(v))
    }

    #[inline]
    pub(crate) fn adj(&self, v: NodeId) -> &[EdgeInstance] {
        &self.adjacency[self.offsets[v.index()]..self.offsets[v.index() + 1]]
    }

    pub fn degree(&self, v: NodeId) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    pub fn node_type(&self, v: NodeId) -> Result<NodeTypeId> {
        self.check(v)?;
        Ok(self.node_types[v.index()])
    }

    #[inline]
    pub(crate) fn ntype(&self, v: NodeId) -> NodeTypeId {
        self.node_types[v.index()]
    }

    pub fn node_types(&self) -> &[NodeTypeId] {
        &self.node_types
    }

    /// True iff at least one edge of any type joins `u` and `x`.
    pub fn is_adjacent(&self, u: NodeId, x: NodeId) -> Result<bool> {
        self.check(u)?;
        self.check(x)?;
        Ok(self.adjacent(u, x))
    }

    #[inline]
    pub(crate) fn adjacent(&self, u: NodeId, x: NodeId) -> bool {
        let slice = self.adj(u);
        let i = slice.partition_point(|e| e.endpoint < x);
        i < slice.len() && slice[i].endpoint == x
    }

    /// Distance class of candidate `x` relative to previous node `r`.
    ///
    /// The caller guarantees `x` neighbours the current node, so the distance
    /// is at most two.
    pub fn distance_class(&self, r: NodeId, x: NodeId) -> Result<DistanceClass> {
        self.check(r)?;
        self.check(x)?;
        Ok(self.dclass(r, x))
    }

    #[inline]
    pub(crate) fn dclass(&self, r: NodeId, x: NodeId) -> DistanceClass {
        if x == r {
            DistanceClass::Return
        } else if self.adjacent(r, x) {
            DistanceClass::Adjacent
        } else {
            DistanceClass::Distant
        }
    }

    /// Undirected edge list `(u, v, type, weight)` with `u <= v`, in adjacency order.
    pub fn edges(&self) -> Vec<(NodeId, NodeId, EdgeTypeId, f64)> {
        let mut out = Vec::with_capacity(self.adjacency.len() / 2);
        for u in self.node_ids() {
            let mut skip_loop = false;
            for e in self.adj(u) {
                if e.endpoint > u {
                    out.push((u, e.endpoint, e.etype, e.weight));
                } else if e.endpoint == u {
                    // the two halves of a self-loop are adjacent after sorting
                    if !skip_loop {
                        out.push((u, u, e.etype, e.weight));
                    }
                    skip_loop = !skip_loop;
                }
            }
        }
        out
    }

    pub fn node_vocab(&self) -> &Vocabulary {
        &self.nodes
    }

    pub fn node_type_vocab(&self) -> &Vocabulary {
        &self.node_type_names
    }

    pub fn edge_type_vocab(&self) -> &Vocabulary {
        &self.edge_type_names
    }

    pub fn node_name(&self, v: NodeId) -> &str {
        self.nodes.name(v.0).expect("node id out of range")
    }

    pub fn node_by_name(&self, name: &str) -> Option<NodeId> {
        self.nodes.get(name).map(NodeId)
    }

    pub fn node_type_by_name(&self, name: &str) -> Option<NodeTypeId> {
        self.node_type_names.get(name).map(NodeTypeId)
    }

    pub fn edge_type_by_name(&self, name: &str) -> Option<EdgeTypeId> {
        self.edge_type_names.get(name).map(EdgeTypeId)
    }
}
