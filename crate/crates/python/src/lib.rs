//! Python bindings for hetwalk.
//!
//! Nodes, node types and edge types are dense integer ids on the Python side;
//! `Graph.node_name` and friends map them back to the names from the input files.

use std::path::PathBuf;

use hetwalk::bias::{BiasParams as CoreParams, EdgeSwitchModel, NodeSwitchModel};
use hetwalk::embedding::{self, cosine_neighbors, EmbeddingMatrix};
use hetwalk::graph::HetMultigraph;
use hetwalk::io::{self, LoadOptions};
use hetwalk::walk::{self, WalkConfig, WalkCorpus};
use hetwalk::{EdgeTypeId, Error, NodeId, NodeTypeId, SgnsConfig, WalkerState};
use pyo3::exceptions::{PyOSError, PyRuntimeError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Io { .. } => PyOSError::new_err(e.to_string()),
        Error::DeadEnd(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

/// Immutable typed multigraph.
#[pyclass(module = "hetwalk_py", frozen)]
struct Graph {
    inner: HetMultigraph,
}

#[pymethods]
impl Graph {
    /// Reads a `u<TAB>v<TAB>edge_type[<TAB>weight]` edge list and an optional
    /// `node<TAB>type` file.
    #[staticmethod]
    #[pyo3(signature = (edges, node_types=None, header=false))]
    fn load(edges: PathBuf, node_types: Option<PathBuf>, header: bool) -> PyResult<Self> {
        let opts = LoadOptions {
            header,
            ..LoadOptions::default()
        };
        let inner = io::load_graph(&edges, node_types.as_deref(), &opts).map_err(to_py)?;
        Ok(Graph { inner })
    }

    /// Builds a graph from integer ids: one node type per node and
    /// `(u, v, edge_type, weight)` records.
    #[staticmethod]
    fn from_edge_list(node_types: Vec<u32>, edge_type_count: usize, edges: Vec<(u32, u32, u32, f64)>) -> PyResult<Self> {
        let inner = HetMultigraph::from_edge_list(&node_types, edge_type_count, &edges).map_err(to_py)?;
        Ok(Graph { inner })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    /// Directed adjacency entries; every undirected edge counts twice.
    #[getter]
    fn instance_count(&self) -> usize {
        self.inner.instance_count()
    }

    #[getter]
    fn node_type_names(&self) -> Vec<String> {
        self.inner.node_type_vocab().names().to_vec()
    }

    #[getter]
    fn edge_type_names(&self) -> Vec<String> {
        self.inner.edge_type_vocab().names().to_vec()
    }

    fn node_name(&self, v: u32) -> PyResult<String> {
        self.inner.neighbors(NodeId(v)).map_err(to_py)?;
        Ok(self.inner.node_name(NodeId(v)).to_owned())
    }

    fn node_id(&self, name: &str) -> Option<u32> {
        self.inner.node_by_name(name).map(|v| v.0)
    }

    fn node_type(&self, v: u32) -> PyResult<u32> {
        Ok(self.inner.node_type(NodeId(v)).map_err(to_py)?.0)
    }

    fn node_type_id(&self, name: &str) -> Option<u32> {
        self.inner.node_type_by_name(name).map(|t| t.0)
    }

    fn edge_type_id(&self, name: &str) -> Option<u32> {
        self.inner.edge_type_by_name(name).map(|t| t.0)
    }

    /// `(neighbor, edge_type, weight)` for every incident edge instance.
    fn neighbors(&self, v: u32) -> PyResult<Vec<(u32, u32, f64)>> {
        let nb = self.inner.neighbors(NodeId(v)).map_err(to_py)?;
        Ok(nb.iter().map(|e| (e.endpoint.0, e.etype.0, e.weight)).collect())
    }

    /// Undirected edge records `(u, v, edge_type, weight)` with `u <= v`.
    fn edges(&self) -> Vec<(u32, u32, u32, f64)> {
        self.inner.edges().into_iter().map(|(u, v, t, w)| (u.0, v.0, t.0, w)).collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(nodes={}, edges={}, node_types={}, edge_types={})",
            self.inner.node_count(),
            self.inner.edges().len(),
            self.inner.node_type_count(),
            self.inner.edge_type_count()
        )
    }
}

fn one_of<T>(name: &str, options: [Option<T>; 3]) -> PyResult<Option<T>> {
    let mut set = options.into_iter().flatten();
    let first = set.next();
    if set.next().is_some() {
        return Err(PyValueError::new_err(format!("give at most one {name} switching model")));
    }
    Ok(first)
}

enum Switch {
    Uniform(f64),
    Matrix(Vec<Vec<f64>>),
    Special(Vec<u32>, f64, f64),
}

fn switch_spec(
    kind: &str,
    uniform: Option<f64>,
    matrix: Option<Vec<Vec<f64>>>,
    special: Option<Vec<u32>>,
    to: Option<f64>,
    from: Option<f64>,
) -> PyResult<Switch> {
    let special = match (special, to, from) {
        (Some(ids), Some(to), Some(from)) => Some(Switch::Special(ids, to, from)),
        (None, None, None) => None,
        _ => {
            return Err(PyValueError::new_err(format!(
                "special {kind} types need both the 'to' and 'from' factors"
            )))
        }
    };
    let chosen = one_of(kind, [uniform.map(Switch::Uniform), matrix.map(Switch::Matrix), special])?;
    Ok(chosen.unwrap_or(Switch::Uniform(1.0)))
}

/// Return/in-out parameters plus node- and edge-type switching.
///
/// Each kind takes at most one of a uniform factor, a directed matrix
/// indexed by type id, or a special set with separate into/out-of factors.
#[pyclass(module = "hetwalk_py", frozen)]
struct BiasParams {
    inner: CoreParams,
}

#[pymethods]
impl BiasParams {
    #[new]
    #[pyo3(signature = (
        p=1.0, q=1.0, *,
        s=None, s_matrix=None, special_node_types=None, s_to=None, s_from=None,
        e=None, e_matrix=None, special_edge_types=None, e_to=None, e_from=None,
    ))]
    #[allow(clippy::too_many_arguments)]
    fn new(
        p: f64,
        q: f64,
        s: Option<f64>,
        s_matrix: Option<Vec<Vec<f64>>>,
        special_node_types: Option<Vec<u32>>,
        s_to: Option<f64>,
        s_from: Option<f64>,
        e: Option<f64>,
        e_matrix: Option<Vec<Vec<f64>>>,
        special_edge_types: Option<Vec<u32>>,
        e_to: Option<f64>,
        e_from: Option<f64>,
    ) -> PyResult<Self> {
        let node = match switch_spec("node", s, s_matrix, special_node_types, s_to, s_from)? {
            Switch::Uniform(v) => NodeSwitchModel::uniform(v),
            Switch::Matrix(m) => NodeSwitchModel::pairwise_directed(m),
            Switch::Special(ids, to, from) => NodeSwitchModel::special_set(ids.into_iter().map(NodeTypeId), to, from),
        }
        .map_err(to_py)?;
        let edge = match switch_spec("edge", e, e_matrix, special_edge_types, e_to, e_from)? {
            Switch::Uniform(v) => EdgeSwitchModel::uniform(v),
            Switch::Matrix(m) => EdgeSwitchModel::pairwise_directed(m),
            Switch::Special(ids, to, from) => EdgeSwitchModel::special_set(ids.into_iter().map(EdgeTypeId), to, from),
        }
        .map_err(to_py)?;
        let inner = CoreParams::new(p, q, node, edge).map_err(to_py)?;
        Ok(BiasParams { inner })
    }

    #[getter]
    fn p(&self) -> f64 {
        self.inner.p()
    }

    #[getter]
    fn q(&self) -> f64 {
        self.inner.q()
    }

    /// Unnormalised step weight factor for distance class `d` (0, 1 or 2).
    fn gamma(&self, d: u8, node_from: u32, node_to: u32, edge_arrived: u32, edge_departing: u32) -> PyResult<f64> {
        let d = hetwalk::DistanceClass::from_value(d).ok_or_else(|| PyValueError::new_err("d must be 0, 1 or 2"))?;
        Ok(self.inner.gamma(
            d,
            NodeTypeId(node_from),
            NodeTypeId(node_to),
            EdgeTypeId(edge_arrived),
            EdgeTypeId(edge_departing),
        ))
    }

    fn __repr__(&self) -> String {
        format!(
            "BiasParams(p={}, q={}, node_switch='{}', edge_switch='{}')",
            self.inner.p(),
            self.inner.q(),
            self.inner.node_switch().describe(),
            self.inner.edge_switch().describe()
        )
    }
}

fn corpus_from(walks: Vec<Vec<u32>>) -> WalkCorpus {
    WalkCorpus::new(walks.into_iter().map(|w| w.into_iter().map(NodeId).collect()).collect())
}

fn corpus_to(corpus: WalkCorpus) -> Vec<Vec<u32>> {
    corpus.walks.into_iter().map(|w| w.into_iter().map(|v| v.0).collect()).collect()
}

/// Samples `num_walks` walks of `walk_length` nodes from every node.
/// The result does not depend on `threads`.
#[pyfunction]
#[pyo3(signature = (graph, params=None, walk_length=80, num_walks=10, seed=42, threads=1))]
fn generate_walks(
    py: Python<'_>,
    graph: &Graph,
    params: Option<&BiasParams>,
    walk_length: usize,
    num_walks: u32,
    seed: u64,
    threads: usize,
) -> PyResult<Vec<Vec<u32>>> {
    let default = CoreParams::default();
    let params = params.map_or(&default, |p| &p.inner);
    let cfg = WalkConfig {
        walk_length,
        walks_per_node: num_walks,
        seed,
        threads,
    };
    let corpus = py
        .detach(|| walk::generate_walks(&graph.inner, params, &cfg))
        .map_err(to_py)?;
    Ok(corpus_to(corpus))
}

/// Exact next-step distribution after arriving at `current` from `prev`
/// over an edge of type `edge_type`: `[(node, edge_type, probability)]`.
#[pyfunction]
fn transition_distribution(
    graph: &Graph,
    params: &BiasParams,
    prev: u32,
    edge_type: u32,
    current: u32,
) -> PyResult<Vec<(u32, u32, f64)>> {
    let state = WalkerState::new(NodeId(prev), EdgeTypeId(edge_type), NodeId(current));
    let dist = walk::transition_distribution(&graph.inner, &params.inner, &state).map_err(to_py)?;
    Ok(dist.into_iter().map(|t| (t.node.0, t.etype.0, t.probability)).collect())
}

/// Type visit fractions and switching rates of a corpus, as a dict.
#[pyfunction]
fn walk_stats<'py>(py: Python<'py>, graph: &Graph, walks: Vec<Vec<u32>>) -> PyResult<Bound<'py, PyDict>> {
    let stats = walk::walk_stats(&corpus_from(walks), &graph.inner).map_err(to_py)?;
    let out = PyDict::new(py);
    let by_name = |names: &[String], values: &[f64]| -> PyResult<Bound<'py, PyDict>> {
        let d = PyDict::new(py);
        for (n, v) in names.iter().zip(values) {
            d.set_item(n, v)?;
        }
        Ok(d)
    };
    out.set_item("visits", stats.visits)?;
    out.set_item("steps", stats.steps)?;
    out.set_item("node_type_fraction", by_name(&stats.node_type_names, &stats.node_type_fraction)?)?;
    out.set_item("edge_type_fraction", by_name(&stats.edge_type_names, &stats.edge_type_fraction)?)?;
    out.set_item("node_switch_rate", stats.node_switch_rate)?;
    out.set_item("edge_switch_rate", stats.edge_switch_rate)?;
    Ok(out)
}

/// Trained embedding table, one row per node id.
#[pyclass(module = "hetwalk_py", frozen)]
struct Embeddings {
    inner: EmbeddingMatrix,
    epoch_loss: Vec<f64>,
}

#[pymethods]
impl Embeddings {
    #[getter]
    fn rows(&self) -> usize {
        self.inner.rows()
    }

    #[getter]
    fn dims(&self) -> usize {
        self.inner.dims()
    }

    /// Mean pair loss per epoch.
    #[getter]
    fn epoch_loss(&self) -> Vec<f64> {
        self.epoch_loss.clone()
    }

    fn vector(&self, v: u32) -> PyResult<Vec<f64>> {
        if v as usize >= self.inner.rows() {
            return Err(PyValueError::new_err(format!("node {v} out of range")));
        }
        Ok(self.inner.row(v as usize).to_vec())
    }

    fn to_list(&self) -> Vec<Vec<f64>> {
        self.inner.row_iter().map(<[f64]>::to_vec).collect()
    }

    fn cosine(&self, a: u32, b: u32) -> PyResult<f64> {
        let n = self.inner.rows();
        if a as usize >= n || b as usize >= n {
            return Err(PyValueError::new_err("node out of range"));
        }
        Ok(self.inner.cosine(a as usize, b as usize))
    }

    /// The `top_k` most cosine-similar other nodes as `[(node, similarity)]`.
    #[pyo3(signature = (v, top_k=10))]
    fn neighbors(&self, v: u32, top_k: usize) -> PyResult<Vec<(u32, f64)>> {
        let res = cosine_neighbors(&self.inner, NodeId(v), top_k).map_err(to_py)?;
        Ok(res.into_iter().map(|(n, c)| (n.0, c)).collect())
    }

    /// Writes the word2vec text format with node names from `graph`.
    fn save(&self, graph: &Graph, path: PathBuf) -> PyResult<()> {
        io::write_embeddings(&self.inner, &graph.inner, &path).map_err(to_py)
    }

    fn __repr__(&self) -> String {
        format!("Embeddings(rows={}, dims={})", self.inner.rows(), self.inner.dims())
    }
}

/// Skip-gram with negative sampling over a walk corpus of node ids.
#[pyfunction]
#[pyo3(signature = (
    walks, node_count, *, dims=128, window=10, negatives=5, epochs=5,
    lr=0.025, min_lr=0.0001, seed=42, threads=1, dynamic_window=true,
))]
#[allow(clippy::too_many_arguments)]
fn train_embeddings(
    py: Python<'_>,
    walks: Vec<Vec<u32>>,
    node_count: usize,
    dims: usize,
    window: usize,
    negatives: usize,
    epochs: usize,
    lr: f64,
    min_lr: f64,
    seed: u64,
    threads: usize,
    dynamic_window: bool,
) -> PyResult<Embeddings> {
    let cfg = SgnsConfig {
        dims,
        window,
        negatives,
        epochs,
        initial_lr: lr,
        min_lr,
        seed,
        threads,
        dynamic_window,
    };
    let corpus = corpus_from(walks);
    let trained = py
        .detach(|| embedding::train(&corpus, node_count, &cfg))
        .map_err(to_py)?;
    Ok(Embeddings {
        inner: trained.embeddings,
        epoch_loss: trained.report.epoch_loss,
    })
}

/// Writes walks one per line as space-separated node names.
#[pyfunction]
fn write_walks(graph: &Graph, walks: Vec<Vec<u32>>, path: PathBuf) -> PyResult<()> {
    io::write_walks(&corpus_from(walks), &graph.inner, &path).map_err(to_py)
}

#[pyfunction]
fn read_walks(graph: &Graph, path: PathBuf) -> PyResult<Vec<Vec<u32>>> {
    Ok(corpus_to(io::read_walks(&path, &graph.inner).map_err(to_py)?))
}

#[pymodule]
fn hetwalk_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<Graph>()?;
    m.add_class::<BiasParams>()?;
    m.add_class::<Embeddings>()?;
    m.add_function(wrap_pyfunction!(generate_walks, m)?)?;
    m.add_function(wrap_pyfunction!(transition_distribution, m)?)?;
    m.add_function(wrap_pyfunction!(walk_stats, m)?)?;
    m.add_function(wrap_pyfunction!(train_embeddings, m)?)?;
    m.add_function(wrap_pyfunction!(write_walks, m)?)?;
    m.add_function(wrap_pyfunction!(read_walks, m)?)?;
    Ok(())
}
