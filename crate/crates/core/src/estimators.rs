//! Monte Carlo estimators over coupled configurations and the numerical
//! procedures around them.
//!
//! Replication `r` of a run with master seed `s` always uses the
//! configuration seeded by `substream_seed(s, r)`, whatever `p` is, so runs
//! at different `p` are coupled and per-replication crossing indicators are
//! monotone in `p`. Work is spread over the rayon pool and gathered in
//! replication order, so results do not depend on the number of threads.

use rayon::prelude::*;
use thiserror::Error;

use crate::engine::play;
use crate::lattice::{substream_seed, Configuration, LatticeError, Vertex};
use crate::perc::{has_vertical_crossing, BoxSpec, PercError};
use crate::strategies::{P1Spec, P2Spec};

const Z95: f64 = 1.959_963_984_540_054;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EstimatorError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Perc(#[from] PercError),
    #[error("at least one replication is required")]
    NoReplications,
    #[error("crossing estimate is 0 at n = {n}; use more replications or smaller sizes")]
    ZeroEstimate { n: u32 },
    #[error("at least two distinct sizes are needed for a fit")]
    TooFewSizes,
    #[error("fitted decay rate {slope} is negative; the probabilities do not decay")]
    NotDecaying { slope: f64 },
    #[error("target probability must lie in (0, 1), got {0}")]
    InvalidTarget(f64),
    #[error("height must be at least 2, got {0}")]
    HeightTooSmall(u32),
    #[error("portfolios must be non-empty")]
    EmptyPortfolio,
    #[error("horizon must be at least 1")]
    ZeroHorizon,
    #[error("grid needs at least 2 points, got {0}")]
    GridTooSmall(usize),
    #[error("thresholds must satisfy 0 < low < high < 1, got low = {low}, high = {high}")]
    InvalidThresholds { low: f64, high: f64 },
    #[error("Peierls series diverges at p = {p} (5 q^(1/5) = {r} >= 1)")]
    PeierlsDivergence { p: f64, r: f64 },
}

/// A Monte Carlo mean with a normal-approximation 95% half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateCI {
    pub mean: f64,
    pub half_width: f64,
    pub reps: u64,
    pub seed: u64,
}

impl EstimateCI {
    /// Binomial estimate from `hits` successes.
    pub fn from_hits(hits: u64, reps: u64, seed: u64) -> Self {
        let mean = hits as f64 / reps as f64;
        EstimateCI {
            mean,
            half_width: Z95 * (mean * (1.0 - mean) / reps as f64).sqrt(),
            reps,
            seed,
        }
    }

    /// Sample mean and unbiased variance of `xs`, summed in order.
    pub fn from_samples(xs: &[f64], seed: u64) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = if xs.len() > 1 {
            xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0)
        } else {
            0.0
        };
        EstimateCI {
            mean,
            half_width: Z95 * (var / n).sqrt(),
            reps: xs.len() as u64,
            seed,
        }
    }

    /// Binomial standard error, `sqrt(mean (1 - mean) / reps)`.
    pub fn std_error(&self) -> f64 {
        self.half_width / Z95
    }
}

fn check_reps(reps: u64) -> Result<(), EstimatorError> {
    if reps == 0 {
        Err(EstimatorError::NoReplications)
    } else {
        Ok(())
    }
}

fn replicate(seed: u64, r: u64, p: f64) -> Result<Configuration, EstimatorError> {
    Ok(Configuration::new(substream_seed(seed, r), p)?)
}

/// Per-replication crossing indicators of the box `(-m, m] x (-n, n]`.
pub fn crossing_indicators(p: f64, m: u32, n: u32, reps: u64, seed: u64) -> Result<Vec<bool>, EstimatorError> {
    check_reps(reps)?;
    let bx = BoxSpec::new(Vertex::ORIGIN, m, n)?;
    replicate(seed, 0, p)?;
    Ok((0..reps)
        .into_par_iter()
        .map(|r| {
            let c = replicate(seed, r, p).expect("validated above");
            has_vertical_crossing(&c, &bx)
        })
        .collect())
}

/// Estimate of the probability that `(-m, m] x (-n, n]` has a vertical
/// crossing.
pub fn crossing_probability(p: f64, m: u32, n: u32, reps: u64, seed: u64) -> Result<EstimateCI, EstimatorError> {
    let hits = crossing_indicators(p, m, n, reps, seed)?.iter().filter(|&&b| b).count();
    Ok(EstimateCI::from_hits(hits as u64, reps, seed))
}

/// Least-squares line through `(n, -log P(n))`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayFit {
    pub p: f64,
    pub gamma_hat: f64,
    pub intercept: f64,
    pub sizes: Vec<u32>,
    pub probabilities: Vec<f64>,
    /// Root mean square of the fit residuals.
    pub residual: f64,
}

/// Fits `-log P(n) = gamma n + b`.
pub fn fit_decay(p: f64, sizes: &[u32], probabilities: &[f64]) -> Result<DecayFit, EstimatorError> {
    assert_eq!(sizes.len(), probabilities.len(), "one probability per size");
    if let Some(i) = probabilities.iter().position(|&q| q <= 0.0) {
        return Err(EstimatorError::ZeroEstimate { n: sizes[i] });
    }
    let k = sizes.len() as f64;
    let xs: Vec<f64> = sizes.iter().map(|&n| n as f64).collect();
    let ys: Vec<f64> = probabilities.iter().map(|q| -q.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sizes.len() < 2 || sxx == 0.0 {
        return Err(EstimatorError::TooFewSizes);
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    if slope < 0.0 {
        return Err(EstimatorError::NotDecaying { slope });
    }
    let residual = (xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    Ok(DecayFit {
        p,
        gamma_hat: slope,
        intercept,
        sizes: sizes.to_vec(),
        probabilities: probabilities.to_vec(),
        residual,
    })
}

/// Exponential decay rate of square-box crossing probabilities.
pub fn estimate_gamma(p: f64, sizes: &[u32], reps: u64, seed: u64) -> Result<DecayFit, EstimatorError> {
    let probs = sizes
        .iter()
        .map(|&n| crossing_probability(p, n, n, reps, seed).map(|e| e.mean))
        .collect::<Result<Vec<_>, _>>()?;
    fit_decay(p, sizes, &probs)
}

/// Smallest half-width at which boxes of half-height `n` cross with
/// estimated probability at least `c`.
#[derive(Debug, Clone, PartialEq)]
pub struct WidthScaling {
    pub p: f64,
    pub n: u32,
    pub c: f64,
    pub w_hat: u32,
    pub probability: f64,
    /// Set when even the square box misses the target; `w_hat` is `n`.
    pub saturated: bool,
}

impl WidthScaling {
    /// The exponent `log w / log n`; one minus it is the fitted epsilon.
    pub fn exponent(&self) -> f64 {
        (self.w_hat as f64).ln() / (self.n as f64).ln()
    }
}

pub fn estimate_wn(p: f64, n: u32, c: f64, reps: u64, seed: u64) -> Result<WidthScaling, EstimatorError> {
    if n < 2 {
        return Err(EstimatorError::HeightTooSmall(n));
    }
    if !(c > 0.0 && c < 1.0) {
        return Err(EstimatorError::InvalidTarget(c));
    }
    let prob = |m: u32| crossing_probability(p, m, n, reps, seed).map(|e| e.mean);
    let top = prob(n)?;
    if top < c {
        return Ok(WidthScaling {
            p,
            n,
            c,
            w_hat: n,
            probability: top,
            saturated: true,
        });
    }
    // coupled estimates are non-decreasing in m, so bisection is exact
    let (mut lo, mut hi, mut at_hi) = (0u32, n, top);
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        let q = prob(mid)?;
        if q >= c {
            hi = mid;
            at_hi = q;
        } else {
            lo = mid;
        }
    }
    Ok(WidthScaling {
        p,
        n,
        c,
        w_hat: hi,
        probability: at_hi,
        saturated: false,
    })
}

/// Portfolio averages: entry `(i, j)` is Player 1's `i`-th strategy against
/// Player 2's `j`-th.
#[derive(Debug, Clone, PartialEq)]
pub struct ValueMatrix {
    pub p: f64,
    pub entries: Vec<Vec<EstimateCI>>,
    /// Mean over replications of the final-quarter running-average maximum.
    pub limsup: Vec<Vec<f64>>,
    /// `min_i max_j` of the entry means.
    pub v_hat: f64,
    /// The same min-max over the lim sup proxies.
    pub v_hat_limsup: f64,
    /// The entry realizing `v_hat`.
    pub argminmax: (usize, usize),
}

impl ValueMatrix {
    pub fn value_estimate(&self) -> EstimateCI {
        self.entries[self.argminmax.0][self.argminmax.1]
    }
}

fn minmax(means: &[Vec<f64>]) -> (f64, (usize, usize)) {
    let mut best = (f64::INFINITY, (0, 0));
    for (i, row) in means.iter().enumerate() {
        let (j, &m) = row
            .iter()
            .enumerate()
            .fold((0, &f64::NEG_INFINITY), |acc, (j, x)| if *x > *acc.1 { (j, x) } else { acc });
        if m < best.0 {
            best = (m, (i, j));
        }
    }
    best
}

/// Game protocol shared by the matrix and the scan.
#[derive(Debug, Clone, PartialEq)]
pub struct Protocol {
    pub start: Vertex,
    pub p1: Vec<P1Spec>,
    pub p2: Vec<P2Spec>,
    pub horizon: u64,
    pub reps: u64,
    pub seed: u64,
}

impl Protocol {
    fn validate(&self) -> Result<(), EstimatorError> {
        if self.p1.is_empty() || self.p2.is_empty() {
            return Err(EstimatorError::EmptyPortfolio);
        }
        if self.horizon == 0 {
            return Err(EstimatorError::ZeroHorizon);
        }
        check_reps(self.reps)
    }

    /// Plays every (p, replication, i, j) game and assembles one matrix per p.
    fn matrices(&self, ps: &[f64]) -> Result<Vec<ValueMatrix>, EstimatorError> {
        self.validate()?;
        for &p in ps {
            replicate(self.seed, 0, p)?;
        }
        let (a, b, reps) = (self.p1.len(), self.p2.len(), self.reps as usize);
        let per_p = reps * a * b;
        let games: Vec<(u64, f64)> = (0..ps.len() * per_p)
            .into_par_iter()
            .map(|task| {
                let (pi, rest) = (task / per_p, task % per_p);
                let (r, ij) = (rest / (a * b), rest % (a * b));
                let (i, j) = (ij / b, ij % b);
                let c = replicate(self.seed, r as u64, ps[pi]).expect("validated above");
                let mut s1 = self.p1[i].build(self.horizon);
                let mut s2 = self.p2[j].build(self.horizon);
                let t = play(&c, self.start, s1.as_mut(), s2.as_mut(), self.horizon);
                (t.total_cost(), t.limsup_proxy())
            })
            .collect();
        Ok(ps
            .iter()
            .enumerate()
            .map(|(pi, &p)| {
                let block = &games[pi * per_p..(pi + 1) * per_p];
                let cell = |i: usize, j: usize| block.iter().skip(i * b + j).step_by(a * b);
                let entries: Vec<Vec<EstimateCI>> = (0..a)
                    .map(|i| {
                        (0..b)
                            .map(|j| {
                                let xs: Vec<f64> =
                                    cell(i, j).map(|g| g.0 as f64 / self.horizon as f64).collect();
                                EstimateCI::from_samples(&xs, self.seed)
                            })
                            .collect()
                    })
                    .collect();
                let limsup: Vec<Vec<f64>> = (0..a)
                    .map(|i| (0..b).map(|j| cell(i, j).map(|g| g.1).sum::<f64>() / reps as f64).collect())
                    .collect();
                let means: Vec<Vec<f64>> = entries.iter().map(|row| row.iter().map(|e| e.mean).collect()).collect();
                let (v_hat, argminmax) = minmax(&means);
                let (v_hat_limsup, _) = minmax(&limsup);
                ValueMatrix {
                    p,
                    entries,
                    limsup,
                    v_hat,
                    v_hat_limsup,
                    argminmax,
                }
            })
            .collect())
    }
}

/// Portfolio minimax estimate at one `p`. This is a heuristic stand-in for
/// the game value, not a certified bound.
pub fn value_matrix(p: f64, protocol: &Protocol) -> Result<ValueMatrix, EstimatorError> {
    Ok(protocol.matrices(&[p])?.remove(0))
}

/// Detected threshold points of a value curve.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Thresholds {
    pub green: Option<f64>,
    pub red: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseCurve {
    pub grid: Vec<f64>,
    pub values: Vec<EstimateCI>,
    pub limsup: Vec<f64>,
    pub protocol: Protocol,
    pub thresholds: Thresholds,
}

pub const DEFAULT_LOW: f64 = 0.01;
pub const DEFAULT_HIGH: f64 = 0.99;
pub const SMOOTHING_WINDOW: usize = 5;

/// `grid_size` equally spaced points of `[0, 1]`.
pub fn unit_grid(grid_size: usize) -> Result<Vec<f64>, EstimatorError> {
    if grid_size < 2 {
        return Err(EstimatorError::GridTooSmall(grid_size));
    }
    let last = (grid_size - 1) as f64;
    Ok((0..grid_size).map(|k| k as f64 / last).collect())
}

pub fn phase_scan(grid_size: usize, protocol: &Protocol) -> Result<PhaseCurve, EstimatorError> {
    let grid = unit_grid(grid_size)?;
    let matrices = protocol.matrices(&grid)?;
    let values: Vec<EstimateCI> = matrices.iter().map(|m| m.value_estimate()).collect();
    let means: Vec<f64> = values.iter().map(|e| e.mean).collect();
    let thresholds = threshold_crossing(&grid, &means, DEFAULT_LOW, DEFAULT_HIGH)?;
    Ok(PhaseCurve {
        limsup: matrices.iter().map(|m| m.v_hat_limsup).collect(),
        grid,
        values,
        protocol: protocol.clone(),
        thresholds,
    })
}

/// Centred moving average; the window shrinks at the ends of the curve.
pub fn smooth(values: &[f64], window: usize) -> Vec<f64> {
    let half = window / 2;
    (0..values.len())
        .map(|k| {
            let lo = k.saturating_sub(half);
            let hi = (k + half).min(values.len() - 1);
            values[lo..=hi].iter().sum::<f64>() / (hi - lo + 1) as f64
        })
        .collect()
}

/// After smoothing, green is the largest `p` whose value is at most `low`
/// and red the smallest `p` whose value is at least `high`.
pub fn threshold_crossing(grid: &[f64], values: &[f64], low: f64, high: f64) -> Result<Thresholds, EstimatorError> {
    if !(0.0 < low && low < high && high < 1.0) {
        return Err(EstimatorError::InvalidThresholds { low, high });
    }
    let s = smooth(values, SMOOTHING_WINDOW);
    Ok(Thresholds {
        green: grid.iter().zip(&s).filter(|(_, &v)| v <= low).map(|(&p, _)| p).next_back(),
        red: grid.iter().zip(&s).find(|(_, &v)| v >= high).map(|(&p, _)| p),
    })
}

/// `q = 1 - (1 - p)^4`, accurate for small `p`.
fn peierls_q(p: f64) -> f64 {
    -(4.0 * (-p).ln_1p()).exp_m1()
}

/// `B(p) = sum_{n >= 1} sum_{l >= 2n} n^2 5^l q^(l/5)` in closed form:
/// with `r = 5 q^(1/5)` and `s = r^2` it equals `s (1 + s) / ((1 - r)(1 - s)^3)`.
pub fn peierls_bound(p: f64) -> Result<f64, EstimatorError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(LatticeError::InvalidProbability(p).into());
    }
    let r = 5.0 * peierls_q(p).powf(0.2);
    if r >= 1.0 {
        return Err(EstimatorError::PeierlsDivergence { p, r });
    }
    let s = r * r;
    Ok(s * (1.0 + s) / ((1.0 - r) * (1.0 - s).powi(3)))
}

/// The `p` at which the series stops converging (`5 q^(1/5) = 1`).
pub fn peierls_divergence_point() -> f64 {
    // 1 - (1 - p)^4 = 5^-5
    -(0.25 * (-(5f64.powi(-5))).ln_1p()).exp_m1()
}

/// Largest `p` with `B(p) <= 1/2`, by bisection to `1e-12`.
pub fn peierls_p0_lower_bound() -> f64 {
    let (mut lo, mut hi) = (0.0f64, peierls_divergence_point());
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        match peierls_bound(mid) {
            Ok(b) if b <= 0.5 => lo = mid,
            _ => hi = mid,
        }
    }
    lo
}
