//! Lyapunov exponents of the homology cocycle over an SL2(Z)-orbit, and the
//! exact sum of the non-negative ones.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::homology::{absolute_homology, move_matrix, ChainModel, Move};
use crate::origami::{orbit_with_cap, OrbitGraph, Origami, DEFAULT_ORBIT_CAP};

/// Dense row-major square matrix used on the numeric path.
#[derive(Clone, Debug)]
struct Mat {
    n: usize,
    a: Vec<f64>,
}

impl Mat {
    fn identity(n: usize) -> Mat {
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            a[i * n + i] = 1.0;
        }
        Mat { n, a }
    }

    fn mul(&self, o: &Mat) -> Mat {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.a[i * n + k];
                if x == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += x * o.a[k * n + j];
                }
            }
        }
        Mat { n, a: out }
    }

    fn pow(&self, mut e: u64) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

/// Frame growth that forces an early re-orthonormalization; beyond this the
/// frame is too ill-conditioned for Gram-Schmidt to resolve small exponents.
const GROWTH_GUARD: f64 = 1e4;

/// Largest digit kept; the Gauss measure of larger digits is below 1e-9.
const MAX_DIGIT: f64 = 1e9;

/// Settings for [`lyapunov_estimate_with`].
#[derive(Clone, Debug)]
pub struct SpectrumConfig {
    /// Continued-fraction digits per trial.
    pub steps: u64,
    pub trials: usize,
    pub seed: u64,
    /// Matrix products between re-orthonormalizations.
    pub cadence: usize,
    /// Number of convergence samples per trial (0 disables the trace).
    pub trace_points: usize,
    pub orbit_cap: usize,
}

impl Default for SpectrumConfig {
    fn default() -> Self {
        SpectrumConfig {
            steps: 100_000,
            trials: 8,
            seed: 0,
            cadence: 20,
            trace_points: 0,
            orbit_cap: DEFAULT_ORBIT_CAP,
        }
    }
}

/// One convergence sample: running normalized exponents after `step` digits.
#[derive(Clone, Debug, Serialize)]
pub struct TraceRow {
    pub trial: usize,
    pub step: u64,
    pub lambdas: Vec<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectrumEstimate {
    /// Top `g` exponents, normalized so the first is 1.
    pub lambdas: Vec<f64>,
    pub stderr: Vec<f64>,
    /// All `2g` normalized exponents, averaged over trials.
    pub full_spectrum: Vec<f64>,
    /// Top exponent before normalization, per unit of `sum log(digit)`.
    pub raw_top: f64,
    /// Number of slightly negative estimates clamped to zero.
    pub clamped: usize,
    pub steps: u64,
    pub trials: usize,
    pub seed: u64,
    #[serde(skip)]
    pub trace: Vec<TraceRow>,
}

impl SpectrumEstimate {
    pub fn sum(&self) -> f64 {
        self.lambdas.iter().sum()
    }

    /// Standard error of the sum, treating exponents as independent.
    pub fn sum_stderr(&self) -> f64 {
        self.stderr.iter().map(|s| s * s).sum::<f64>().sqrt()
    }

    pub fn trace_csv(&self) -> String {
        let g = self.lambdas.len();
        let mut out = String::from("trial,step");
        for i in 1..=2 * g {
            out.push_str(&format!(",lambda_{i}"));
        }
        out.push('\n');
        for row in &self.trace {
            out.push_str(&format!("{},{}", row.trial, row.step));
            for l in &row.lambdas {
                out.push_str(&format!(",{l:.6}"));
            }
            out.push('\n');
        }
        out
    }
}

/// The cocycle over the orbit: for each node, matrices for one upper and
/// one lower shear and for the full return along each shear cycle.
struct Cocycle {
    dim: usize,
    upper: Vec<(usize, Mat)>,
    lower: Vec<(usize, Mat)>,
    upper_cycle: Vec<(usize, Mat)>,
    lower_cycle: Vec<(usize, Mat)>,
}

fn to_mat(m: &crate::intmat::IntMatrix) -> Mat {
    Mat { n: m.rows(), a: m.to_f64() }
}

fn cycle_products(step: &[(usize, Mat)]) -> Vec<(usize, Mat)> {
    step.iter()
        .enumerate()
        .map(|(k, (_, m0))| {
            let mut acc = m0.clone();
            let mut len = 1;
            let mut j = step[k].0;
            while j != k {
                acc = acc.mul(&step[j].1);
                j = step[j].0;
                len += 1;
            }
            (len, acc)
        })
        .collect()
}

impl Cocycle {
    fn build(graph: &OrbitGraph) -> Cocycle {
        let models: Vec<ChainModel> = graph.nodes().iter().map(absolute_homology).collect();
        let dim = models[0].rank();
        let edge = |k: usize, mv: Move| -> (usize, Mat) {
            let o = graph.node(k);
            let img = mv.apply(o).canonical_with_map();
            let j = graph.position(&img.origami).expect("orbit is closed");
            let m = move_matrix(&models[k], &[mv, Move::Relabel(img.sigma)], &models[j]);
            (j, to_mat(&m))
        };
        let upper: Vec<_> = (0..graph.len()).map(|k| edge(k, Move::Upper(1))).collect();
        let lower: Vec<_> = (0..graph.len()).map(|k| edge(k, Move::Lower(1))).collect();
        let upper_cycle = cycle_products(&upper);
        let lower_cycle = cycle_products(&lower);
        Cocycle { dim, upper, lower, upper_cycle, lower_cycle }
    }

    /// Matrix of `a` consecutive shears from `node`, and the end node.
    fn power(&self, node: usize, a: u64, lower: bool, out: &mut Vec<Mat>) -> usize {
        let (step, cycle) = if lower { (&self.lower, &self.lower_cycle) } else { (&self.upper, &self.upper_cycle) };
        let (len, p) = &cycle[node];
        let (q, r) = (a / *len as u64, a % *len as u64);
        if q > 0 {
            out.push(if q == 1 { p.clone() } else { p.pow(q) });
        }
        let mut k = node;
        for _ in 0..r {
            out.push(step[k].1.clone());
            k = step[k].0;
        }
        k
    }
}

/// Frame of row vectors, multiplied on the right by cocycle matrices.
struct Frame {
    n: usize,
    rows: Vec<f64>,
    log_growth: Vec<f64>,
}

impl Frame {
    fn new(n: usize) -> Frame {
        let mut rows = vec![0.0; n * n];
        for i in 0..n {
            rows[i * n + i] = 1.0;
        }
        Frame { n, rows, log_growth: vec![0.0; n] }
    }

    fn apply(&mut self, m: &Mat) {
        let n = self.n;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for k in 0..n {
                let x = self.rows[i * n + k];
                if x == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i * n + j] += x * m.a[k * n + j];
                }
            }
        }
        self.rows = out;
    }

    fn max_abs(&self) -> f64 {
        self.rows.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Modified Gram-Schmidt; accumulates the log of the diagonal of R.
    fn orthonormalize(&mut self) -> Result<()> {
        let n = self.n;
        for i in 0..n {
            for j in 0..i {
                let dot: f64 = (0..n).map(|k| self.rows[i * n + k] * self.rows[j * n + k]).sum();
                for k in 0..n {
                    self.rows[i * n + k] -= dot * self.rows[j * n + k];
                }
            }
            let norm = (0..n).map(|k| self.rows[i * n + k].powi(2)).sum::<f64>().sqrt();
            if !(norm.is_finite() && norm > 1e-300) {
                return Err(Error::NumericalUnderflow(format!(
                    "frame vector {i} has norm {norm}; shorten the renormalization cadence"
                )));
            }
            for k in 0..n {
                self.rows[i * n + k] /= norm;
            }
            self.log_growth[i] += norm.ln();
        }
        Ok(())
    }
}

/// Digits of a Gauss-distributed real, drawn by iterating the Gauss map in
/// floating point. Orbits that collapse onto rationals are resampled.
struct Digits {
    x: f64,
    rng: ChaCha8Rng,
}

impl Digits {
    fn new(rng: ChaCha8Rng) -> Digits {
        let mut d = Digits { x: 0.0, rng };
        d.x = d.fresh();
        d
    }

    fn fresh(&mut self) -> f64 {
        loop {
            let u: f64 = self.rng.gen();
            let x = 2f64.powf(u) - 1.0;
            if x > 1.0 / MAX_DIGIT {
                return x;
            }
        }
    }

    fn next(&mut self) -> u64 {
        let inv = 1.0 / self.x;
        let a = inv.floor();
        let mut frac = inv - a;
        frac += (self.rng.gen::<f64>() - 0.5) * 1e-15;
        if !(frac > 1.0 / MAX_DIGIT && frac < 1.0) {
            frac = self.fresh();
        }
        self.x = frac;
        (a as u64).max(1)
    }
}

struct TrialResult {
    exponents: Vec<f64>,
    raw_top: f64,
    trace: Vec<TraceRow>,
}

fn run_trial(c: &Cocycle, cfg: &SpectrumConfig, trial: usize, nodes: usize) -> Result<TrialResult> {
    let seed = cfg.seed ^ (trial as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64);
    let mut node = rng.gen_range(0..nodes);
    let mut digits = Digits::new(rng);
    let mut frame = Frame::new(c.dim);
    let mut since_qr = 0;
    let mut time = 0.0f64;
    let mut scratch = Vec::new();
    let mut trace = Vec::new();
    let trace_every = if cfg.trace_points > 0 { (cfg.steps / cfg.trace_points as u64).max(1) } else { u64::MAX };
    for step in 0..cfg.steps {
        let a = digits.next();
        time += (a as f64).ln() + 1.0;
        scratch.clear();
        node = c.power(node, a, step % 2 == 1, &mut scratch);
        for m in &scratch {
            frame.apply(m);
            since_qr += 1;
            if since_qr >= cfg.cadence || frame.max_abs() > GROWTH_GUARD {
                frame.orthonormalize()?;
                since_qr = 0;
            }
        }
        if (step + 1) % trace_every == 0 {
            frame.orthonormalize()?;
            since_qr = 0;
            let top = frame.log_growth[0];
            trace.push(TraceRow { trial, step: step + 1, lambdas: frame.log_growth.iter().map(|l| l / top).collect() });
        }
    }
    frame.orthonormalize()?;
    let top = frame.log_growth[0];
    if !(top > 0.0) {
        return Err(Error::NumericalUnderflow("no growth along the top direction".into()));
    }
    Ok(TrialResult { exponents: frame.log_growth.iter().map(|l| l / top).collect(), raw_top: top / time, trace })
}

/// Estimates the normalized exponents `1 = l_1 >= .. >= l_g >= 0`.
pub const MIN_STEPS: u64 = 1000;

pub fn lyapunov_estimate(o: &Origami, steps: u64, trials: usize, seed: u64) -> Result<SpectrumEstimate> {
    lyapunov_estimate_with(o, &SpectrumConfig { steps, trials, seed, ..SpectrumConfig::default() })
}

pub fn lyapunov_estimate_with(o: &Origami, cfg: &SpectrumConfig) -> Result<SpectrumEstimate> {
    if cfg.trials == 0 || cfg.cadence == 0 {
        return Err(Error::InvalidArgument("trials and cadence must be positive".into()));
    }
    if cfg.steps < MIN_STEPS {
        return Err(Error::InvalidArgument(format!("need at least {MIN_STEPS} steps")));
    }
    let g = o.genus();
    let graph = orbit_with_cap(o, cfg.orbit_cap)?;
    let cocycle = Cocycle::build(&graph);
    let results: Vec<Result<TrialResult>> =
        (0..cfg.trials).into_par_iter().map(|t| run_trial(&cocycle, cfg, t, graph.len())).collect();
    let results: Vec<TrialResult> = results.into_iter().collect::<Result<_>>()?;
    let dim = 2 * g;
    let count = results.len() as f64;
    let mean: Vec<f64> = (0..dim).map(|i| results.iter().map(|r| r.exponents[i]).sum::<f64>() / count).collect();
    let stderr: Vec<f64> = (0..g)
        .map(|i| {
            if results.len() < 2 {
                return 0.0;
            }
            let var = results.iter().map(|r| (r.exponents[i] - mean[i]).powi(2)).sum::<f64>() / (count - 1.0);
            (var / count).sqrt()
        })
        .collect();
    let mut clamped = 0;
    let lambdas: Vec<f64> = mean[..g]
        .iter()
        .map(|&l| {
            if l < 0.0 {
                clamped += 1;
                0.0
            } else {
                l
            }
        })
        .collect();
    Ok(SpectrumEstimate {
        lambdas,
        stderr,
        full_spectrum: mean,
        raw_top: results.iter().map(|r| r.raw_top).sum::<f64>() / count,
        clamped,
        steps: cfg.steps,
        trials: cfg.trials,
        seed: cfg.seed,
        trace: results.into_iter().flat_map(|r| r.trace).collect(),
    })
}

/// Exact sum of the non-negative exponents.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSum {
    pub value: BigRational,
    /// Contribution of the zero orders.
    pub stratum_term: BigRational,
    /// Orbit average of the per-surface cylinder sums.
    pub cylinder_term: BigRational,
    pub orbit_size: usize,
}

impl ExactSum {
    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }

    pub fn to_f64(&self) -> f64 {
        self.value.numer().to_f64().unwrap_or(f64::NAN) / self.value.denom().to_f64().unwrap_or(f64::NAN)
    }
}

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// `sum height / width` over horizontal cylinders. A cylinder of height `h`
/// is `h` rows of its width, so this is `sum 1 / len` over the cycles of `h`.
pub fn cylinder_sum(o: &Origami) -> BigRational {
    o.h().cycle_type().into_iter().fold(BigRational::zero(), |acc, len| acc + ratio(1, len as u64))
}

/// `lcm(1..=n)` when it fits in a `u64`.
fn common_denominator(n: usize) -> Option<u64> {
    (1..=n as u64).try_fold(1u64, |acc, k| {
        let l = num_integer::lcm(acc, k);
        (l < u64::MAX / 1024).then_some(l)
    })
}

/// Orbit total of `cylinder_sum`, over one common denominator when possible.
fn orbit_cylinder_total(graph: &OrbitGraph) -> BigRational {
    let n = graph.node(0).n();
    let Some(den) = common_denominator(n) else {
        return graph.nodes().iter().fold(BigRational::zero(), |acc, m| acc + cylinder_sum(m));
    };
    let mut seen = vec![false; n];
    let mut num: u128 = 0;
    for m in graph.nodes() {
        let h = m.h();
        seen.fill(false);
        for s in 0..n {
            if seen[s] {
                continue;
            }
            let mut len = 0u64;
            let mut i = s;
            while !seen[i] {
                seen[i] = true;
                len += 1;
                i = h.apply(i);
            }
            num += u128::from(den / len);
        }
    }
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn stratum_term(o: &Origami) -> BigRational {
    o.stratum().kappa.iter().fold(BigRational::zero(), |acc, &m| {
        let m = m as u64;
        acc + ratio(m * (m + 2), 12 * (m + 1))
    })
}

pub fn exact_sum(o: &Origami) -> Result<ExactSum> {
    exact_sum_with_cap(o, DEFAULT_ORBIT_CAP)
}

pub fn exact_sum_with_cap(o: &Origami, cap: usize) -> Result<ExactSum> {
    let graph = orbit_with_cap(o, cap)?;
    Ok(exact_sum_over(o, &graph))
}

/// The sum computed over an already known orbit of `o`.
pub fn exact_sum_over(o: &Origami, graph: &OrbitGraph) -> ExactSum {
    let cylinder_term = orbit_cylinder_total(graph) / BigRational::from_integer(BigInt::from(graph.len()));
    let stratum_term = stratum_term(o);
    ExactSum { value: &stratum_term + &cylinder_term, stratum_term, cylinder_term, orbit_size: graph.len() }
}

/// `lambda_2 = .. = lambda_g = 0`, decided by the exact sum being 1.
pub fn is_completely_degenerate(o: &Origami) -> Result<(bool, ExactSum)> {
    let s = exact_sum(o)?;
    Ok((s.is_one(), s))
}

/// `2 #{i >= 2 : lambda_i < zero_tol}`.
pub fn forni_dimension(est: &SpectrumEstimate, zero_tol: f64) -> usize {
    2 * est.lambdas.iter().skip(1).filter(|&&l| l < zero_tol).count()
}

pub const DEFAULT_ZERO_TOL: f64 = 0.05;
