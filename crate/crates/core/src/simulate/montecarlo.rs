use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_profile, NetworkScenario, StrategyProfile};
use crate::scalar::Scalar;

/// Samples drawn from one random stream. Results depend only on the seed and
/// the sample count, never on how blocks are spread over threads.
pub const BLOCK_SIZE: usize = 1 << 16;

/// Environment variable capping the worker count.
pub const THREADS_ENV: &str = "JAMNET_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloResult {
    pub empirical_mse: f64,
    /// Sample standard deviation of the squared error over `sqrt(samples)`.
    pub standard_error: f64,
    pub samples: usize,
    pub seed: u64,
    pub chunks: usize,
}

/// Running count, mean and sum of squared deviations.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: f64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1.0;
        let d = x - self.mean;
        self.mean += d / self.n;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if o.n == 0.0 {
            return self;
        }
        if self.n == 0.0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n / n,
            m2: self.m2 + o.m2 + d * d * self.n * o.n / n,
        }
    }
}

/// Channel with every coefficient in `f64` and noise groups renumbered densely.
struct Channel {
    /// `(alpha beta c, alpha c)` per transmitter.
    tx: Vec<(f64, f64)>,
    /// `(alpha a, alpha b, alpha s, group)` per adversary.
    adv: Vec<(f64, f64, f64, usize)>,
    groups: usize,
    randomized: bool,
    gain: f64,
}

impl Channel {
    fn new<T: Scalar>(s: &NetworkScenario<T>, p: &StrategyProfile<T>) -> Result<Self> {
        let f = |x: T| x.to_f64_lossy();
        let tx = p
            .transmit_coeffs
            .iter()
            .zip(&s.transmitters)
            .map(|(c, q)| (f(q.alpha * q.beta * *c), f(q.alpha * *c)))
            .collect();
        let terms = p.adversary.terms(&s.adversaries)?;
        let mut ids = BTreeMap::new();
        let mut adv = Vec::with_capacity(terms.len());
        for (t, q) in terms.iter().zip(&s.adversaries) {
            let next = ids.len();
            let g = *ids.entry(t.group).or_insert(next);
            adv.push((f(q.alpha * t.a), f(q.alpha * t.b), f(q.alpha * t.s), g));
        }
        Ok(Self {
            tx,
            adv,
            groups: ids.len(),
            randomized: p.randomized,
            gain: f(p.decoder_gain),
        })
    }

    fn block(&self, seed: u64, block: u64, n: usize) -> Moments {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(block);
        let mut theta = vec![0.0; self.groups];
        let mut acc = Moments::default();
        for _ in 0..n {
            let s: f64 = rng.sample(StandardNormal);
            let gamma = if self.randomized && rng.random::<bool>() {
                -1.0
            } else {
                1.0
            };
            let mut transmitted = 0.0;
            for (signal, noise) in &self.tx {
                let w: f64 = rng.sample(StandardNormal);
                transmitted += signal * s + noise * w;
            }
            for t in theta.iter_mut() {
                *t = rng.sample(StandardNormal);
            }
            let mut jammed = 0.0;
            for (a, b, sc, g) in &self.adv {
                let w: f64 = rng.sample(StandardNormal);
                jammed += a * s + b * w + sc * theta[*g];
            }
            let z: f64 = rng.sample(StandardNormal);
            let y = gamma * transmitted + jammed + z;
            let err = s - self.gain * gamma * y;
            acc.push(err * err);
        }
        acc
    }
}

fn worker_count(chunks: usize) -> usize {
    let cap = std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|n| *n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    chunks.clamp(1, cap.max(1))
}

/// Seeded simulation of the channel under `p` with a single worker.
pub fn run_monte_carlo<T: Scalar>(
    s: &NetworkScenario<T>,
    p: &StrategyProfile<T>,
    samples: usize,
    seed: u64,
) -> Result<MonteCarloResult> {
    run_monte_carlo_chunked(s, p, samples, seed, 1)
}

/// Same as [`run_monte_carlo`] with up to `chunks` parallel workers.
pub fn run_monte_carlo_chunked<T: Scalar>(
    s: &NetworkScenario<T>,
    p: &StrategyProfile<T>,
    samples: usize,
    seed: u64,
    chunks: usize,
) -> Result<MonteCarloResult> {
    if samples == 0 {
        return Err(Error::InvalidScenario("samples must be at least 1".into()));
    }
    validate_profile(s, p)?;
    let channel = Channel::new(s, p)?;
    let blocks = samples.div_ceil(BLOCK_SIZE);
    let size = |b: usize| BLOCK_SIZE.min(samples - b * BLOCK_SIZE);

    let parts: Vec<Moments> = if chunks <= 1 {
        (0..blocks).map(|b| channel.block(seed, b as u64, size(b))).collect()
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(worker_count(chunks))
            .build()
            .map_err(|e| Error::NumericalFailure(format!("thread pool: {e}")))?;
        pool.install(|| {
            (0..blocks)
                .into_par_iter()
                .map(|b| channel.block(seed, b as u64, size(b)))
                .collect()
        })
    };
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let variance = if total.n > 1.0 { total.m2 / (total.n - 1.0) } else { 0.0 };
    Ok(MonteCarloResult {
        empirical_mse: total.mean,
        standard_error: (variance / total.n).sqrt(),
        samples,
        seed,
        chunks: chunks.max(1),
    })
}
