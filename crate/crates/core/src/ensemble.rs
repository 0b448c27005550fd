//! Dithered ensembles: perturb the input `J` times, cluster each replicate,
//! and average the resulting (quasi-)ultrametrics into a (quasi-)cut metric.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::linkage::{directed_single_linkage, linkage_ultrametric, LinkageKind};
use crate::matrix::SquareMatrix;
use crate::metric::{MetricKind, MetricMatrix, REL_TOLERANCE};
use crate::network::{euclidean_matrix, Network, PointCloud};

/// Floor applied to perturbed dissimilarities, relative to the smallest
/// positive unperturbed one.
pub const CLAMP_FACTOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaRule {
    /// `k ·` smallest distance between distinct nodes.
    MinPairwiseDistance,
    /// `k ·` smallest positive dissimilarity entry.
    MinPositiveEntry,
    /// A fixed standard deviation; the noise factor is ignored.
    Absolute(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DitherTarget {
    /// Jitter point coordinates, then recompute Euclidean distances.
    Coordinates,
    /// Jitter the off-diagonal dissimilarity entries directly.
    MatrixEntries,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DitherConfig {
    pub replicates: usize,
    pub noise_factor: f64,
    pub sigma_rule: SigmaRule,
    pub target: DitherTarget,
    pub seed: u64,
}

impl Default for DitherConfig {
    fn default() -> Self {
        DitherConfig {
            replicates: 100,
            noise_factor: 0.1,
            sigma_rule: SigmaRule::MinPairwiseDistance,
            target: DitherTarget::Coordinates,
            seed: 0,
        }
    }
}

impl DitherConfig {
    pub fn validate(&self, input: &Input) -> Result<()> {
        if self.replicates == 0 {
            return Err(Error::InvalidConfig("at least one replicate is required".into()));
        }
        if !(self.noise_factor >= 0.0) || !self.noise_factor.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "noise factor must be finite and nonnegative, got {}",
                self.noise_factor
            )));
        }
        if let SigmaRule::Absolute(s) = self.sigma_rule {
            if !(s >= 0.0) || !s.is_finite() {
                return Err(Error::InvalidConfig(format!("absolute sigma {s} is invalid")));
            }
        }
        if self.target == DitherTarget::Coordinates && matches!(input, Input::Matrix(_)) {
            return Err(Error::InvalidConfig(
                "coordinate dithering requires a point-cloud input".into(),
            ));
        }
        Ok(())
    }
}

/// Ensemble input: either a point cloud or a dissimilarity matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum Input {
    Points(PointCloud),
    Matrix(Network),
}

impl Input {
    pub fn labels(&self) -> &[String] {
        match self {
            Input::Points(p) => p.labels(),
            Input::Matrix(n) => n.labels(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels().len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels().is_empty()
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            Input::Points(_) => true,
            Input::Matrix(n) => n.is_symmetric(),
        }
    }

    pub fn to_network(&self) -> Result<Network> {
        match self {
            Input::Points(p) => p.to_network(),
            Input::Matrix(n) => Ok(n.clone()),
        }
    }

    fn min_positive(&self) -> Option<f64> {
        match self {
            Input::Points(p) => p.min_pairwise_distance().filter(|d| *d > 0.0),
            Input::Matrix(n) => n.dissim().min_positive_entry(),
        }
    }
}

impl From<PointCloud> for Input {
    fn from(p: PointCloud) -> Self {
        Input::Points(p)
    }
}

impl From<Network> for Input {
    fn from(n: Network) -> Self {
        Input::Matrix(n)
    }
}

/// Standard deviation of the dithering noise.
pub fn sigma_for(input: &Input, cfg: &DitherConfig) -> Result<f64> {
    let base = match cfg.sigma_rule {
        SigmaRule::Absolute(s) => return Ok(s),
        SigmaRule::MinPairwiseDistance => match input {
            Input::Points(p) => p.min_pairwise_distance(),
            Input::Matrix(n) => n.dissim().min_off_diagonal(),
        },
        SigmaRule::MinPositiveEntry => input.min_positive(),
    };
    match base {
        Some(b) if b > 0.0 => Ok(cfg.noise_factor * b),
        _ => Err(Error::DegenerateInput(
            "no positive dissimilarity to scale the noise from".into(),
        )),
    }
}

/// Deterministic RNG stream for replicate `index` under `seed`.
pub fn replicate_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// Draws one dithered version of `input`.
///
/// Symmetric matrices receive one draw per unordered pair so the result stays
/// symmetric; asymmetric matrices receive one draw per ordered pair. Perturbed
/// entries are clamped below at `CLAMP_FACTOR ·` the smallest positive
/// original entry so the identity axiom survives.
pub fn dither<R: Rng + ?Sized>(
    input: &Input,
    target: DitherTarget,
    sigma: f64,
    rng: &mut R,
) -> Result<Network> {
    if !(sigma >= 0.0) {
        return Err(Error::InvalidConfig(format!("sigma must be nonnegative, got {sigma}")));
    }
    if sigma == 0.0 || input.len() < 2 {
        return input.to_network();
    }
    let floor = CLAMP_FACTOR * input.min_positive().unwrap_or(1.0);
    match (input, target) {
        (Input::Points(p), DitherTarget::Coordinates) => {
            let coords: Vec<f64> = p
                .coords()
                .iter()
                .map(|c| c + sigma * rng.sample::<f64, _>(StandardNormal))
                .collect();
            let mut m = euclidean_matrix(p.len(), p.dim(), &coords);
            clamp_off_diagonal(&mut m, floor);
            Network::new(p.labels().to_vec(), m)
        }
        (_, DitherTarget::MatrixEntries) => {
            let net = input.to_network()?;
            let n = net.len();
            let mut m = net.dissim().clone();
            if net.is_symmetric() {
                for i in 0..n {
                    for j in i + 1..n {
                        let v = m.get(i, j) + sigma * rng.sample::<f64, _>(StandardNormal);
                        m.set(i, j, v);
                        m.set(j, i, v);
                    }
                }
            } else {
                for i in 0..n {
                    for j in 0..n {
                        if i != j {
                            let v = m.get(i, j) + sigma * rng.sample::<f64, _>(StandardNormal);
                            m.set(i, j, v);
                        }
                    }
                }
            }
            clamp_off_diagonal(&mut m, floor);
            Network::new(net.labels().to_vec(), m)
        }
        (Input::Matrix(_), DitherTarget::Coordinates) => Err(Error::InvalidConfig(
            "coordinate dithering requires a point-cloud input".into(),
        )),
    }
}

fn clamp_off_diagonal(m: &mut SquareMatrix, floor: f64) {
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            if i != j && !(m.get(i, j) >= floor) {
                m.set(i, j, floor);
            }
        }
    }
}

/// Dithered single/complete/average/Ward ensemble averaged into a cut metric.
///
/// Replicate `i` always draws from `replicate_rng(cfg.seed, i)` and the
/// replicates are summed in index order, so the result does not depend on the
/// number of worker threads.
pub fn algorithm1(input: &Input, cfg: &DitherConfig, kind: LinkageKind) -> Result<MetricMatrix> {
    cfg.validate(input)?;
    if !input.is_symmetric() {
        return Err(Error::RequiresSymmetric);
    }
    let values = ensemble_mean(input, cfg, |net| {
        linkage_ultrametric(net, kind).map(MetricMatrix::into_values)
    })?;
    MetricMatrix::new(values, MetricKind::CutMetric)
}

/// Directed single linkage ensemble averaged into a quasi-cut metric.
pub fn quasi_algorithm1(input: &Network, cfg: &DitherConfig) -> Result<MetricMatrix> {
    let input = Input::Matrix(input.clone());
    cfg.validate(&input)?;
    if cfg.target != DitherTarget::MatrixEntries {
        return Err(Error::InvalidConfig(
            "quasi ensembles dither matrix entries".into(),
        ));
    }
    let values = ensemble_mean(&input, cfg, |net| {
        Ok(directed_single_linkage(net).into_values())
    })?;
    MetricMatrix::new(values, MetricKind::QuasiCutMetric)
}

fn ensemble_mean<F>(input: &Input, cfg: &DitherConfig, cluster: F) -> Result<SquareMatrix>
where
    F: Fn(&Network) -> Result<SquareMatrix> + Sync,
{
    let n = input.len();
    let sigma = if n < 2 { 0.0 } else { sigma_for(input, cfg)? };
    let run = |i: usize| -> Result<SquareMatrix> {
        let mut rng = replicate_rng(cfg.seed, i);
        let net = dither(input, cfg.target, sigma, &mut rng)?;
        cluster(&net)
    };

    // Bounded batches keep memory at O(batch · n²) while preserving order.
    let batch = (rayon::current_num_threads() * 2).max(1);
    let mut sum = SquareMatrix::zeros(n);
    let mut start = 0;
    while start < cfg.replicates {
        let end = (start + batch).min(cfg.replicates);
        let outs: Vec<SquareMatrix> = (start..end)
            .into_par_iter()
            .map(run)
            .collect::<Result<_>>()?;
        for u in &outs {
            for (s, v) in sum.as_mut_slice().iter_mut().zip(u.as_slice()) {
                *s += v;
            }
        }
        start = end;
    }
    let j = cfg.replicates as f64;
    sum.as_mut_slice().iter_mut().for_each(|v| *v /= j);
    Ok(sum)
}

/// Convex combination `Σ w_i m_i`, accumulated in list order.
///
/// Weights must be nonnegative and sum to one (within `1e-9`): only convex
/// weights keep the result on the same distance scale as the inputs.
pub fn average_matrices(list: &[MetricMatrix], weights: &[f64]) -> Result<MetricMatrix> {
    if list.is_empty() {
        return Err(Error::InvalidWeight("no matrices to average".into()));
    }
    if list.len() != weights.len() {
        return Err(Error::InvalidWeight(format!(
            "{} matrices but {} weights",
            list.len(),
            weights.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
        return Err(Error::InvalidWeight(format!("weight {w} is not a nonnegative number")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > REL_TOLERANCE {
        return Err(Error::InvalidWeight(format!("weights sum to {total}, not 1")));
    }
    let n = list[0].dim();
    if let Some(m) = list.iter().find(|m| m.dim() != n) {
        return Err(Error::Structural(format!(
            "cannot average a {}x{} matrix with a {n}x{n} one",
            m.dim(),
            m.dim()
        )));
    }

    let mut sum = SquareMatrix::zeros(n);
    for (m, &w) in list.iter().zip(weights) {
        for (s, v) in sum.as_mut_slice().iter_mut().zip(m.values().as_slice()) {
            *s += w * v;
        }
    }
    let kind = if list.iter().any(|m| m.kind().is_directed()) {
        MetricKind::QuasiCutMetric
    } else if list
        .iter()
        .all(|m| matches!(m.kind(), MetricKind::Ultrametric | MetricKind::CutMetric))
    {
        MetricKind::CutMetric
    } else {
        MetricKind::General
    };
    MetricMatrix::new(sum, kind)
}

/// Uniform weights `1/J`.
pub fn uniform_weights(j: usize) -> Vec<f64> {
    vec![1.0 / j as f64; j]
}
