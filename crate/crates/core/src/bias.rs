//! Unnormalised step weights for type-aware second-order walks.
//!
//! The weight of a candidate step factorises as
//!
//! ```text
//! gamma = base(d) * node_factor(type(v), type(x)) * edge_factor(type(r,v), type(v,x))
//! base(0) = 1/p, base(1) = 1, base(2) = 1/q
//! ```
//!
//! where `d` is the distance class of the candidate from the previous node.
//! With the edge factor fixed at 1 this is the node-switching kernel, with the
//! node factor fixed at 1 the edge-switching kernel, and with both fixed at 1
//! plain node2vec.

use std::fmt::{self, Write as _};
use std::marker::PhantomData;

use crate::error::{Error, Result};
use crate::graph::{DistanceClass, EdgeTypeId, NodeTypeId};

/// Dense type identifier usable as a switch-model index.
pub trait TypeIndex: Copy + fmt::Debug {
    fn index(self) -> usize;
}

impl TypeIndex for NodeTypeId {
    fn index(self) -> usize {
        NodeTypeId::index(self)
    }
}

impl TypeIndex for EdgeTypeId {
    fn index(self) -> usize {
        EdgeTypeId::index(self)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum SwitchKind {
    Uniform(f64),
    Pairwise {
        n: usize,
        values: Vec<f64>,
        directed: bool,
    },
    SpecialSet {
        special: Vec<bool>,
        to_special: f64,
        from_special: f64,
    },
}

/// Switching parameters over node types or edge types.
///
/// A move between two types is scaled by the reciprocal of the applicable
/// switch value; moves within one type are never scaled.
#[derive(Clone, PartialEq)]
pub struct SwitchModel<T> {
    kind: SwitchKind,
    _marker: PhantomData<fn(T)>,
}

pub type NodeSwitchModel = SwitchModel<NodeTypeId>;
pub type EdgeSwitchModel = SwitchModel<EdgeTypeId>;

impl<T> fmt::Debug for SwitchModel<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl<T: TypeIndex> Default for SwitchModel<T> {
    fn default() -> Self {
        Self::identity()
    }
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Usage(format!("{what} must be positive and finite, got {v}")))
    }
}

impl<T> SwitchModel<T> {
    fn from_kind(kind: SwitchKind) -> Self {
        SwitchModel {
            kind,
            _marker: PhantomData,
        }
    }

    /// Compact textual form, e.g. `uniform:0.5`, `special:to=0.25,from=1,types=1|3`.
    pub fn describe(&self) -> String {
        match &self.kind {
            SwitchKind::Uniform(s) => format!("uniform:{s}"),
            SwitchKind::Pairwise { n, values, directed } => {
                let mut out = String::from(if *directed { "directed:" } else { "symmetric:" });
                let mut first = true;
                for i in 0..*n {
                    for j in 0..*n {
                        let v = values[i * n + j];
                        if i != j && v != 1.0 {
                            if !first {
                                out.push(',');
                            }
                            let _ = write!(out, "{i}>{j}={v}");
                            first = false;
                        }
                    }
                }
                out
            }
            SwitchKind::SpecialSet {
                special,
                to_special,
                from_special,
            } => {
                let ids: Vec<String> = special
                    .iter()
                    .enumerate()
                    .filter(|(_, &s)| s)
                    .map(|(i, _)| i.to_string())
                    .collect();
                format!("special:to={to_special},from={from_special},types={}", ids.join("|"))
            }
        }
    }
}

impl<T: TypeIndex> SwitchModel<T> {
    /// No switching bias: every factor is 1.
    pub fn identity() -> Self {
        Self::from_kind(SwitchKind::Uniform(1.0))
    }

    /// A single switch value `s` for every change of type.
    pub fn uniform(s: f64) -> Result<Self> {
        check_positive("switch value", s)?;
        Ok(Self::from_kind(SwitchKind::Uniform(s)))
    }

    fn pairwise(matrix: Vec<Vec<f64>>, directed: bool) -> Result<Self> {
        let n = matrix.len();
        let mut values = Vec::with_capacity(n * n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Usage(format!(
                    "switch matrix must be square: row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            for &v in row {
                check_positive("switch matrix entry", v)?;
                values.push(v);
            }
        }
        if !directed {
            for i in 0..n {
                for j in 0..i {
                    if values[i * n + j] != values[j * n + i] {
                        return Err(Error::Usage(format!(
                            "symmetric switch matrix differs at ({i},{j}): {} vs {}",
                            values[i * n + j],
                            values[j * n + i]
                        )));
                    }
                }
            }
        }
        Ok(Self::from_kind(SwitchKind::Pairwise { n, values, directed }))
    }

    /// One switch value per unordered type pair; `matrix` must be symmetric.
    /// Types beyond the matrix bounds take factor 1.
    pub fn pairwise_symmetric(matrix: Vec<Vec<f64>>) -> Result<Self> {
        Self::pairwise(matrix, false)
    }

    /// Direction-specific switch values: `matrix[from][to]` scales `from -> to`.
    pub fn pairwise_directed(matrix: Vec<Vec<f64>>) -> Result<Self> {
        Self::pairwise(matrix, true)
    }

    /// Special/non-special partition with separate values for entering and
    /// leaving the special group. Moves inside a group take factor 1.
    pub fn special_set<I: IntoIterator<Item = T>>(special: I, s_to_special: f64, s_from_special: f64) -> Result<Self> {
        check_positive("s_to_special", s_to_special)?;
        check_positive("s_from_special", s_from_special)?;
        let mut set = Vec::new();
        for t in special {
            let i = t.index();
            if set.len() <= i {
                set.resize(i + 1, false);
            }
            set[i] = true;
        }
        Ok(Self::from_kind(SwitchKind::SpecialSet {
            special: set,
            to_special: s_to_special,
            from_special: s_from_special,
        }))
    }

    pub fn is_identity(&self) -> bool {
        match &self.kind {
            SwitchKind::Uniform(s) => *s == 1.0,
            SwitchKind::Pairwise { values, .. } => values.iter().all(|&v| v == 1.0),
            SwitchKind::SpecialSet {
                to_special,
                from_special,
                ..
            } => *to_special == 1.0 && *from_special == 1.0,
        }
    }

    /// The switch value applied to a `from -> to` move (1 for same-type moves).
    #[inline]
    pub fn switch_value(&self, from: T, to: T) -> f64 {
        let (i, j) = (from.index(), to.index());
        if i == j {
            return 1.0;
        }
        match &self.kind {
            SwitchKind::Uniform(s) => *s,
            SwitchKind::Pairwise { n, values, .. } => {
                if i < *n && j < *n {
                    values[i * n + j]
                } else {
                    1.0
                }
            }
            SwitchKind::SpecialSet {
                special,
                to_special,
                from_special,
            } => {
                let is_special = |k: usize| special.get(k).copied().unwrap_or(false);
                match (is_special(i), is_special(j)) {
                    (false, true) => *to_special,
                    (true, false) => *from_special,
                    _ => 1.0,
                }
            }
        }
    }

    /// Multiplicative factor for a `from -> to` move: the reciprocal of [`switch_value`](Self::switch_value).
    #[inline]
    pub fn factor(&self, from: T, to: T) -> f64 {
        1.0 / self.switch_value(from, to)
    }
}

/// Return/in-out parameters plus node and edge switching models.
#[derive(Clone, Debug, PartialEq)]
pub struct BiasParams {
    p: f64,
    q: f64,
    node_switch: NodeSwitchModel,
    edge_switch: EdgeSwitchModel,
}

impl Default for BiasParams {
    fn default() -> Self {
        BiasParams {
            p: 1.0,
            q: 1.0,
            node_switch: NodeSwitchModel::identity(),
            edge_switch: EdgeSwitchModel::identity(),
        }
    }
}

impl BiasParams {
    pub fn new(p: f64, q: f64, node_switch: NodeSwitchModel, edge_switch: EdgeSwitchModel) -> Result<Self> {
        check_positive("p", p)?;
        check_positive("q", q)?;
        Ok(BiasParams {
            p,
            q,
            node_switch,
            edge_switch,
        })
    }

    /// Plain node2vec parameters (no switching).
    pub fn node2vec(p: f64, q: f64) -> Result<Self> {
        Self::new(p, q, NodeSwitchModel::identity(), EdgeSwitchModel::identity())
    }

    /// Uniform node switch `s` and edge switch `e`.
    pub fn uniform(p: f64, q: f64, s: f64, e: f64) -> Result<Self> {
        Self::new(p, q, NodeSwitchModel::uniform(s)?, EdgeSwitchModel::uniform(e)?)
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn node_switch(&self) -> &NodeSwitchModel {
        &self.node_switch
    }

    pub fn edge_switch(&self) -> &EdgeSwitchModel {
        &self.edge_switch
    }

    #[inline]
    fn base_denominator(&self, d: DistanceClass) -> f64 {
        match d {
            DistanceClass::Return => self.p,
            DistanceClass::Adjacent => 1.0,
            DistanceClass::Distant => self.q,
        }
    }

    /// Distance-only node2vec factor: `1/p`, `1`, or `1/q`.
    pub fn base(&self, d: DistanceClass) -> f64 {
        1.0 / self.base_denominator(d)
    }

    /// Unnormalised weight multiplier for stepping from the current node
    /// (type `node_from`, reached via `edge_arrived`) to a candidate of type
    /// `node_to` over an edge of type `edge_departing`.
    ///
    /// Computed as a single reciprocal of the product of the three
    /// denominators, so e.g. the distant/switching/switching case evaluates
    /// to exactly `1.0 / (q * s * e)`.
    #[inline]
    pub fn gamma(
        &self,
        d: DistanceClass,
        node_from: NodeTypeId,
        node_to: NodeTypeId,
        edge_arrived: EdgeTypeId,
        edge_departing: EdgeTypeId,
    ) -> f64 {
        1.0 / (self.base_denominator(d)
            * self.node_switch.switch_value(node_from, node_to)
            * self.edge_switch.switch_value(edge_arrived, edge_departing))
    }
}
