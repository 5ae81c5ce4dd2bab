//! Skip-gram with negative sampling over walk corpora.
//!
//! Each `(center, context)` pair within the window contributes
//! `-ln s(u.v) - sum_k ln s(-u.n_k)` where `u` is the center's input vector,
//! `v` the context's output vector, `n_k` output vectors of nodes drawn from
//! the unigram distribution raised to 0.75, and `s` the logistic function.
//!
//! Multi-threaded training updates the shared matrices without locks
//! (hogwild); concurrent writes may overwrite each other. With one thread the
//! result is fully determined by the seed.

use std::sync::atomic::{AtomicU64, AtomicUsize, Ordering};

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::NodeId;
use crate::rng::stream;
use crate::walk::WalkCorpus;

#[derive(Clone, Debug, PartialEq)]
pub struct SgnsConfig {
    pub dims: usize,
    pub window: usize,
    pub negatives: usize,
    pub epochs: usize,
    pub initial_lr: f64,
    pub min_lr: f64,
    pub seed: u64,
    pub threads: usize,
    /// Sample the effective window uniformly from `1..=window` per center.
    pub dynamic_window: bool,
}

impl Default for SgnsConfig {
    fn default() -> Self {
        SgnsConfig {
            dims: 128,
            window: 10,
            negatives: 5,
            epochs: 5,
            initial_lr: 0.025,
            min_lr: 0.0001,
            seed: 42,
            threads: 1,
            dynamic_window: true,
        }
    }
}

impl SgnsConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("dims", self.dims),
            ("window", self.window),
            ("negatives", self.negatives),
            ("threads", self.threads),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(Error::Usage(format!("{name} must be at least 1")));
            }
        }
        if !(self.initial_lr > 0.0 && self.initial_lr.is_finite()) {
            return Err(Error::Usage(format!("learning rate must be positive, got {}", self.initial_lr)));
        }
        if !(self.min_lr >= 0.0 && self.min_lr <= self.initial_lr) {
            return Err(Error::Usage(format!(
                "minimum learning rate must lie in [0, {}], got {}",
                self.initial_lr, self.min_lr
            )));
        }
        Ok(())
    }
}

/// Dense row-major `rows x dims` matrix; row `i` belongs to node `i`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingMatrix {
    rows: usize,
    dims: usize,
    data: Vec<f64>,
}

impl EmbeddingMatrix {
    pub fn zeros(rows: usize, dims: usize) -> Self {
        EmbeddingMatrix {
            rows,
            dims,
            data: vec![0.0; rows * dims],
        }
    }

    pub fn from_rows(rows: usize, dims: usize, data: Vec<f64>) -> Self {
        assert_eq!(data.len(), rows * dims, "data length must equal rows * dims");
        EmbeddingMatrix { rows, dims, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dims..(i + 1) * self.dims]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks(self.dims.max(1)).take(self.rows)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    /// Cosine similarity of rows `a` and `b`; 0 if either is the zero vector.
    pub fn cosine(&self, a: usize, b: usize) -> f64 {
        cosine(self.row(a), self.row(b))
    }
}

pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let na = dot(a, a).sqrt();
    let nb = dot(b, b).sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot(a, b) / (na * nb)
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// The `top_k` nodes most cosine-similar to `v`, excluding `v`, best first.
pub fn cosine_neighbors(m: &EmbeddingMatrix, v: NodeId, top_k: usize) -> Result<Vec<(NodeId, f64)>> {
    if v.index() >= m.rows() {
        return Err(Error::Usage(format!("node id {v} out of range ({} rows)", m.rows())));
    }
    let mut scored: Vec<(NodeId, f64)> = (0..m.rows())
        .filter(|&i| i != v.index())
        .map(|i| (NodeId(i as u32), m.cosine(v.index(), i)))
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    scored.truncate(top_k);
    Ok(scored)
}

/// Occurrence counts and the negative-sampling distribution.
#[derive(Clone, Debug)]
pub struct Vocab {
    counts: Vec<u64>,
    negative_weights: Vec<f64>,
}

impl Vocab {
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Negative-sampling probabilities, proportional to `count^0.75`.
    pub fn negative_probabilities(&self) -> Vec<f64> {
        let total: f64 = self.negative_weights.iter().sum();
        self.negative_weights.iter().map(|w| w / total).collect()
    }

    fn sampler(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(&self.negative_weights).expect("vocabulary has at least one occurrence")
    }
}

/// Counts node occurrences in `corpus` over `node_count` nodes.
pub fn build_vocab(corpus: &WalkCorpus, node_count: usize) -> Result<Vocab> {
    let mut counts = vec![0u64; node_count];
    for &v in corpus.walks.iter().flatten() {
        let slot = counts
            .get_mut(v.index())
            .ok_or_else(|| Error::Usage(format!("corpus node {v} out of range ({node_count} nodes)")))?;
        *slot += 1;
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::Usage("cannot build a vocabulary from an empty corpus".into()));
    }
    let negative_weights = counts.iter().map(|&c| (c as f64).powf(0.75)).collect();
    Ok(Vocab {
        counts,
        negative_weights,
    })
}

#[inline]
fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `-ln s(x)` without overflow.
#[inline]
fn neg_log_sigmoid(x: f64) -> f64 {
    (-x).max(0.0) + (-x.abs()).exp().ln_1p()
}

/// Loss of one skip-gram pair with its negative samples.
pub fn sgns_loss(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> f64 {
    neg_log_sigmoid(dot(center, context))
        + negatives
            .iter()
            .map(|n| neg_log_sigmoid(-dot(center, n)))
            .sum::<f64>()
}

/// Partial derivatives of [`sgns_loss`].
#[derive(Clone, Debug, PartialEq)]
pub struct SgnsGradient {
    pub center: Vec<f64>,
    pub context: Vec<f64>,
    pub negatives: Vec<Vec<f64>>,
}

pub fn sgns_gradient(center: &[f64], context: &[f64], negatives: &[&[f64]]) -> SgnsGradient {
    let pos = sigmoid(dot(center, context)) - 1.0;
    let mut d_center: Vec<f64> = context.iter().map(|c| pos * c).collect();
    let d_context = center.iter().map(|u| pos * u).collect();
    let d_negatives = negatives
        .iter()
        .map(|n| {
            let s = sigmoid(dot(center, n));
            for (g, x) in d_center.iter_mut().zip(n.iter()) {
                *g += s * x;
            }
            center.iter().map(|u| s * u).collect()
        })
        .collect();
    SgnsGradient {
        center: d_center,
        context: d_context,
        negatives: d_negatives,
    }
}

/// Row-major matrix of `f64` stored as atomic bit patterns so that
/// concurrent trainers can read and write rows without locks.
struct SharedMatrix {
    dims: usize,
    cells: Vec<AtomicU64>,
}

impl SharedMatrix {
    fn new(m: &EmbeddingMatrix) -> Self {
        SharedMatrix {
            dims: m.dims,
            cells: m.data.iter().map(|x| AtomicU64::new(x.to_bits())).collect(),
        }
    }

    #[inline]
    fn load(&self, row: usize, out: &mut [f64]) {
        let cells = &self.cells[row * self.dims..(row + 1) * self.dims];
        for (o, c) in out.iter_mut().zip(cells) {
            *o = f64::from_bits(c.load(Ordering::Relaxed));
        }
    }

    #[inline]
    fn add(&self, row: usize, scale: f64, delta: &[f64]) {
        let cells = &self.cells[row * self.dims..(row + 1) * self.dims];
        for (c, d) in cells.iter().zip(delta) {
            let cur = f64::from_bits(c.load(Ordering::Relaxed));
            c.store((cur + scale * d).to_bits(), Ordering::Relaxed);
        }
    }

    fn into_matrix(self, rows: usize) -> EmbeddingMatrix {
        EmbeddingMatrix {
            rows,
            dims: self.dims,
            data: self.cells.into_iter().map(|c| f64::from_bits(c.into_inner())).collect(),
        }
    }
}

struct Scratch {
    center: Vec<f64>,
    target: Vec<f64>,
    grad: Vec<f64>,
    targets: Vec<(usize, bool)>,
}

impl Scratch {
    fn new(dims: usize) -> Self {
        Scratch {
            center: vec![0.0; dims],
            target: vec![0.0; dims],
            grad: vec![0.0; dims],
            targets: Vec::new(),
        }
    }
}

/// One gradient step on the pair loss for `center` against `scratch.targets`
/// (`true` = positive context, `false` = negative sample). Returns the loss
/// before the update.
fn sgd_step(input: &SharedMatrix, output: &SharedMatrix, center: usize, lr: f64, s: &mut Scratch) -> f64 {
    input.load(center, &mut s.center);
    s.grad.iter_mut().for_each(|g| *g = 0.0);
    let mut loss = 0.0;
    for &(t, positive) in &s.targets {
        output.load(t, &mut s.target);
        let score = dot(&s.center, &s.target);
        // d loss / d score
        let dscore = if positive {
            loss += neg_log_sigmoid(score);
            sigmoid(score) - 1.0
        } else {
            loss += neg_log_sigmoid(-score);
            sigmoid(score)
        };
        for (g, x) in s.grad.iter_mut().zip(&s.target) {
            *g += dscore * x;
        }
        output.add(t, -lr * dscore, &s.center);
    }
    input.add(center, -lr, &s.grad);
    loss
}

/// Per-epoch diagnostics.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct TrainReport {
    /// Mean pair loss (positive plus negatives) observed during each epoch.
    pub epoch_loss: Vec<f64>,
    pub pairs_per_epoch: Vec<u64>,
}

#[derive(Clone, Debug)]
pub struct Trained {
    /// Input vectors: the published embedding.
    pub embeddings: EmbeddingMatrix,
    /// Output (context) vectors.
    pub context: EmbeddingMatrix,
    pub report: TrainReport,
}

/// Input rows uniform in `[-0.5/dims, 0.5/dims]`, output rows zero.
pub fn initialize(node_count: usize, dims: usize, seed: u64) -> (EmbeddingMatrix, EmbeddingMatrix) {
    let mut rng = stream(seed, u64::MAX);
    let half = 0.5 / dims as f64;
    let data = (0..node_count * dims).map(|_| rng.random_range(-half..=half)).collect();
    (
        EmbeddingMatrix::from_rows(node_count, dims, data),
        EmbeddingMatrix::zeros(node_count, dims),
    )
}

/// Trains embeddings for `node_count` nodes from `corpus`.
pub fn train(corpus: &WalkCorpus, node_count: usize, cfg: &SgnsConfig) -> Result<Trained> {
    cfg.validate()?;
    let vocab = build_vocab(corpus, node_count)?;
    let (input, output) = initialize(node_count, cfg.dims, cfg.seed);
    let input = SharedMatrix::new(&input);
    let output = SharedMatrix::new(&output);
    let negatives = vocab.sampler();

    let tokens = corpus.token_count();
    let total_work = (tokens * cfg.epochs).max(1) as f64;
    let processed = AtomicUsize::new(0);
    let chunk = corpus.walks.len().div_ceil(cfg.threads).max(1);
    let mut report = TrainReport::default();

    for epoch in 0..cfg.epochs {
        let run_chunk = |t: usize, walks: &[Vec<NodeId>]| -> (f64, u64) {
            let mut rng = stream(cfg.seed, (epoch * cfg.threads + t) as u64);
            let mut s = Scratch::new(cfg.dims);
            let (mut loss, mut pairs) = (0.0, 0u64);
            for walk in walks {
                for (i, &center) in walk.iter().enumerate() {
                    let done = processed.fetch_add(1, Ordering::Relaxed) as f64;
                    let lr = (cfg.initial_lr - (cfg.initial_lr - cfg.min_lr) * done / total_work).max(cfg.min_lr);
                    let span = if cfg.dynamic_window {
                        rng.random_range(1..=cfg.window)
                    } else {
                        cfg.window
                    };
                    let lo = i.saturating_sub(span);
                    let hi = (i + span).min(walk.len() - 1);
                    for (j, ctx) in walk.iter().enumerate().take(hi + 1).skip(lo) {
                        if j == i {
                            continue;
                        }
                        let context = ctx.index();
                        s.targets.clear();
                        s.targets.push((context, true));
                        for _ in 0..cfg.negatives {
                            let n = negatives.sample(&mut rng);
                            if n != context {
                                s.targets.push((n, false));
                            }
                        }
                        loss += sgd_step(&input, &output, center.index(), lr, &mut s);
                        pairs += 1;
                    }
                }
            }
            (loss, pairs)
        };

        let (loss, pairs) = if cfg.threads == 1 {
            run_chunk(0, &corpus.walks)
        } else {
            std::thread::scope(|scope| {
                let handles: Vec<_> = corpus
                    .walks
                    .chunks(chunk)
                    .enumerate()
                    .map(|(t, walks)| {
                        let run = &run_chunk;
                        scope.spawn(move || run(t, walks))
                    })
                    .collect();
                handles
                    .into_iter()
                    .map(|h| h.join().expect("training thread panicked"))
                    .fold((0.0, 0), |(l, p), (l2, p2)| (l + l2, p + p2))
            })
        };
        report.epoch_loss.push(if pairs > 0 { loss / pairs as f64 } else { 0.0 });
        report.pairs_per_epoch.push(pairs);
    }

    Ok(Trained {
        embeddings: input.into_matrix(node_count),
        context: output.into_matrix(node_count),
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn corpus(walks: &[&[u32]]) -> WalkCorpus {
        WalkCorpus::new(walks.iter().map(|w| w.iter().map(|&v| NodeId(v)).collect()).collect())
    }

    #[test]
    fn vocab_counts() {
        let v = build_vocab(&corpus(&[&[0, 1, 0]]), 2).unwrap();
        assert_eq!(v.counts(), &[2, 1]);
    }

    #[test]
    fn uniform_counts_give_uniform_negatives() {
        let v = build_vocab(&corpus(&[&[0, 1, 2, 3]]), 4).unwrap();
        assert!(v.negative_probabilities().iter().all(|&p| (p - 0.25).abs() < 1e-15));
    }

    #[test]
    fn negative_distribution_uses_three_quarter_power() {
        let walk: Vec<u32> = std::iter::repeat_n(0, 16).chain([1]).collect();
        let v = build_vocab(&corpus(&[&walk]), 2).unwrap();
        let p = v.negative_probabilities();
        assert!((p[0] / p[1] - 8.0).abs() < 1e-12);
    }

    #[test]
    fn empty_corpus_is_usage_error() {
        assert!(build_vocab(&WalkCorpus::default(), 3).unwrap_err().is_usage());
        assert!(build_vocab(&corpus(&[&[5]]), 3).unwrap_err().is_usage());
    }

    #[test]
    fn config_validation() {
        let bad = [
            SgnsConfig { dims: 0, ..SgnsConfig::default() },
            SgnsConfig { window: 0, ..SgnsConfig::default() },
            SgnsConfig { negatives: 0, ..SgnsConfig::default() },
            SgnsConfig { min_lr: 1.0, ..SgnsConfig::default() },
            SgnsConfig { initial_lr: 0.0, min_lr: 0.0, ..SgnsConfig::default() },
        ];
        for cfg in bad {
            assert!(cfg.validate().unwrap_err().is_usage());
        }
    }

    #[test]
    fn zero_epochs_returns_initialisation() {
        let cfg = SgnsConfig { epochs: 0, dims: 8, ..SgnsConfig::default() };
        let trained = train(&corpus(&[&[0, 1, 2]]), 3, &cfg).unwrap();
        let (input, output) = initialize(3, 8, cfg.seed);
        assert_eq!(trained.embeddings, input);
        assert_eq!(trained.context, output);
    }

    #[test]
    fn initialisation_ranges() {
        let (input, output) = initialize(50, 16, 3);
        let half = 0.5 / 16.0;
        assert!(input.as_slice().iter().all(|x| (-half..=half).contains(x)));
        assert!(input.as_slice().iter().any(|&x| x != 0.0));
        assert!(output.as_slice().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn single_pair_is_pushed_together() {
        // two nodes, each the other's only context; negatives equal to the
        // context are skipped, so only the positive term is optimised
        let c = corpus(&[&[0, 1]]);
        let cfg = SgnsConfig {
            dims: 4,
            window: 1,
            epochs: 2000,
            initial_lr: 0.5,
            min_lr: 0.01,
            dynamic_window: false,
            ..SgnsConfig::default()
        };
        let t = train(&c, 2, &cfg).unwrap();
        let score = dot(t.embeddings.row(0), t.context.row(1));
        assert!(sigmoid(score) > 0.9, "sigma(u.v) = {}", sigmoid(score));
    }

    #[test]
    fn sgd_step_follows_analytic_gradient() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let dims = 6;
        let mut rand_vec = || (0..dims).map(|_| rng.random_range(-1.0..1.0)).collect::<Vec<f64>>();
        let (u, v, n1, n2) = (rand_vec(), rand_vec(), rand_vec(), rand_vec());
        let input = SharedMatrix::new(&EmbeddingMatrix::from_rows(1, dims, u.clone()));
        let output = SharedMatrix::new(&EmbeddingMatrix::from_rows(3, dims, [v.clone(), n1.clone(), n2.clone()].concat()));
        let mut s = Scratch::new(dims);
        s.targets = vec![(0, true), (1, false), (2, false)];
        let lr = 0.1;
        let loss = sgd_step(&input, &output, 0, lr, &mut s);
        let grad = sgns_gradient(&u, &v, &[&n1, &n2]);
        assert!((loss - sgns_loss(&u, &v, &[&n1, &n2])).abs() < 1e-12);
        let new_u = input.into_matrix(1);
        let new_out = output.into_matrix(3);
        for k in 0..dims {
            assert!((new_u.row(0)[k] - (u[k] - lr * grad.center[k])).abs() < 1e-12);
            assert!((new_out.row(0)[k] - (v[k] - lr * grad.context[k])).abs() < 1e-12);
            assert!((new_out.row(1)[k] - (n1[k] - lr * grad.negatives[0][k])).abs() < 1e-12);
            assert!((new_out.row(2)[k] - (n2[k] - lr * grad.negatives[1][k])).abs() < 1e-12);
        }
    }

    #[test]
    fn epoch_loss_decreases() {
        let walks: Vec<Vec<u32>> = (0..200)
            .map(|i| (0..20).map(|j| ((i + j) % 10 + 10 * (i % 2)) as u32).collect())
            .collect();
        let refs: Vec<&[u32]> = walks.iter().map(Vec::as_slice).collect();
        let cfg = SgnsConfig { dims: 16, window: 3, epochs: 5, ..SgnsConfig::default() };
        let t = train(&corpus(&refs), 20, &cfg).unwrap();
        let l = &t.report.epoch_loss;
        assert_eq!(l.len(), 5);
        assert!(l[4] < l[0], "{l:?}");
    }

    #[test]
    fn single_threaded_training_is_deterministic() {
        let c = corpus(&[&[0, 1, 2, 3, 2, 1], &[3, 2, 0, 1]]);
        let cfg = SgnsConfig { dims: 8, window: 2, epochs: 3, ..SgnsConfig::default() };
        assert_eq!(train(&c, 4, &cfg).unwrap().embeddings, train(&c, 4, &cfg).unwrap().embeddings);
    }

    #[test]
    fn multi_threaded_training_runs() {
        let walks: Vec<Vec<u32>> = (0..64).map(|i| (0..10).map(|j| ((i * 7 + j * 3) % 16) as u32).collect()).collect();
        let refs: Vec<&[u32]> = walks.iter().map(Vec::as_slice).collect();
        let cfg = SgnsConfig { dims: 8, threads: 4, epochs: 2, ..SgnsConfig::default() };
        let t = train(&corpus(&refs), 16, &cfg).unwrap();
        assert!(t.embeddings.as_slice().iter().all(|x| x.is_finite()));
        assert_eq!(t.report.pairs_per_epoch.len(), 2);
    }

    #[test]
    fn cosine_cases() {
        let m = EmbeddingMatrix::from_rows(4, 2, vec![1.0, 0.0, 2.0, 0.0, 0.0, 3.0, 0.0, 0.0]);
        assert!((m.cosine(0, 1) - 1.0).abs() < 1e-15);
        assert_eq!(m.cosine(0, 2), 0.0);
        assert_eq!(m.cosine(0, 3), 0.0);
        let nb = cosine_neighbors(&m, NodeId(0), 2).unwrap();
        assert_eq!(nb[0].0, NodeId(1));
        assert_eq!(nb.len(), 2);
        assert!(nb.iter().all(|(v, _)| *v != NodeId(0)));
        assert!(cosine_neighbors(&m, NodeId(9), 2).unwrap_err().is_usage());
    }
}
