//! Deterministic information bottleneck baseline: maximize `I(Z,Y) - beta H(Z)`
//! over arbitrary (not necessarily contiguous) assignments of micro-bins to at
//! most `max_clusters` clusters, for a log-spaced grid of `beta`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::frontier::{eval_groups, ContiguousBinning, ParetoPoint, Provenance};
use crate::info::h;
use crate::pipeline::MicroBinModel;

/// Moves must raise the objective by more than this.
pub const MOVE_TOL: f64 = 1e-12;
/// Swept points closer than this in both `H` and `I` are merged.
pub const DEDUP_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
pub struct DibConfig {
    pub beta_min: f64,
    pub beta_max: f64,
    pub steps: usize,
    pub max_clusters: usize,
    pub restarts: usize,
    pub seed: u64,
    /// Start each `beta` from the previous solution (plus random restarts)
    /// instead of from random assignments only. Forces sequential sweeping.
    pub anneal: bool,
    pub exec: Exec,
}

impl Default for DibConfig {
    fn default() -> Self {
        DibConfig {
            beta_min: 1e-10,
            beta_max: 1.0,
            steps: 20000,
            max_clusters: 8,
            restarts: 10,
            seed: 0,
            anneal: false,
            exec: Exec::default(),
        }
    }
}

impl DibConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta_min > 0.0 && self.beta_min < self.beta_max && self.beta_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < beta_min < beta_max, got {} and {}",
                self.beta_min, self.beta_max
            )));
        }
        if self.steps == 0 || self.max_clusters == 0 || self.restarts == 0 {
            return Err(Error::InvalidParameter("steps, max_clusters and restarts must be positive".into()));
        }
        Ok(())
    }

    /// Log-spaced `beta` values from `beta_min` to `beta_max` inclusive. A
    /// single step gives `beta_max`.
    pub fn betas(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.beta_max];
        }
        let (a, b) = (self.beta_min.ln(), self.beta_max.ln());
        let last = (self.steps - 1) as f64;
        (0..self.steps).map(|k| (a + (b - a) * k as f64 / last).exp()).collect()
    }
}

/// Cluster index (0-based) for every micro-bin.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    z: Vec<usize>,
    clusters: usize,
}

impl Assignment {
    pub fn new(z: Vec<usize>, clusters: usize) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidParameter("empty assignment".into()));
        }
        if let Some(k) = z.iter().position(|&c| c >= clusters) {
            return Err(Error::InvalidParameter(format!("bin {k} assigned to cluster {} of {clusters}", z[k])));
        }
        Ok(Assignment { z, clusters })
    }

    pub fn single(n: usize) -> Self {
        Assignment { z: vec![0; n], clusters: 1 }
    }

    pub fn random(n: usize, clusters: usize, rng: &mut impl Rng) -> Self {
        Assignment { z: (0..n).map(|_| rng.random_range(0..clusters)).collect(), clusters }
    }

    pub fn z(&self) -> &[usize] {
        &self.z
    }

    pub fn clusters(&self) -> usize {
        self.clusters
    }

    pub fn non_empty(&self) -> usize {
        let mut seen = vec![false; self.clusters];
        self.z.iter().for_each(|&c| seen[c] = true);
        seen.iter().filter(|&&s| s).count()
    }

    /// Cut indices if every cluster is a run of consecutive micro-bins.
    pub fn to_binning(&self) -> Option<ContiguousBinning> {
        let mut seen = vec![false; self.clusters];
        let mut cuts = Vec::new();
        seen[self.z[0]] = true;
        for k in 1..self.z.len() {
            if self.z[k] != self.z[k - 1] {
                if seen[self.z[k]] {
                    return None;
                }
                seen[self.z[k]] = true;
                cuts.push(k);
            }
        }
        Some(ContiguousBinning::Indices(cuts))
    }

    fn sums(&self, m: &MicroBinModel) -> (Vec<f64>, Vec<f64>) {
        let mut pm = vec![0.0; self.clusters];
        let mut qm = vec![0.0; self.clusters];
        for (k, &c) in self.z.iter().enumerate() {
            pm[c] += m.mass()[k];
            qm[c] += m.mass()[k] * m.p1()[k];
        }
        (pm, qm)
    }
}

/// `(H(Z), I(Z,Y))` of an assignment.
pub fn dib_point(m: &MicroBinModel, a: &Assignment) -> (f64, f64) {
    let (pm, qm) = a.sums(m);
    eval_groups(&pm, &qm)
}

pub fn dib_objective(m: &MicroBinModel, a: &Assignment, beta: f64) -> f64 {
    let (hz, iz) = dib_point(m, a);
    iz - beta * hz
}

#[derive(Clone, Debug)]
pub struct DibSolution {
    pub assignment: Assignment,
    pub h: f64,
    pub i: f64,
    pub objective: f64,
}

/// Per-cluster part of the objective, up to a constant:
/// `(1 - beta) h(P) - h(Q) - h(P - Q)`.
#[inline]
fn term(beta: f64, p: f64, q: f64) -> f64 {
    (1.0 - beta) * h(p) - h(q) - h((p - q).max(0.0))
}

/// First-order model of the change in [`term`] when a bin of mass `w` and
/// class-1 mass `q` joins a cluster, plus a bound on the remainder: since
/// `|h''(x)| = 1/(x ln 2)` is largest at the smaller mass, the second-order
/// term bounds the error. The upper bound is
/// `w c[0] + q c[1] + r c[2] + w^2 c[3] + q^2 c[4] + r^2 c[5]` with
/// `r = w - q`. Zero masses make it NaN or infinite, which never screens out.
#[derive(Clone, Copy)]
struct Bound {
    join: [f64; 6],
    p: f64,
    q: f64,
}

impl Bound {
    fn new(beta: f64, p: f64, q: f64) -> Self {
        let r = (p - q).max(0.0);
        let half = 0.5 * LOG2_E;
        Bound {
            join: [
                -(1.0 - beta) * p.log2() + beta * LOG2_E,
                q.log2(),
                r.log2(),
                half * (1.0 - beta).abs() / p,
                half / q,
                half / r,
            ],
            p,
            q,
        }
    }

    #[inline]
    fn join(&self, w: f64, q: f64) -> f64 {
        let r = w - q;
        let c = &self.join;
        w * c[0] + q * c[1] + r * c[2] + w * w * c[3] + q * q * c[4] + r * r * c[5]
    }

    /// Upper bound on the change when the bin leaves this cluster.
    #[inline]
    fn leave(&self, beta: f64, w: f64, q: f64) -> f64 {
        let r = w - q;
        let c = &self.join;
        let half = 0.5 * LOG2_E;
        let (pr, qr, rr) = (self.p - w, self.q - q, self.p - self.q - r);
        -(w * c[0] + q * c[1] + r * c[2])
            + half * ((1.0 - beta).abs() * w * w / pr + q * q / qr + r * r / rr)
    }
}

const LOG2_E: f64 = std::f64::consts::LOG2_E;

/// Greedy coordinate ascent from `init`: sweep the micro-bins, alternating
/// direction, moving each to the cluster with the best objective, until a
/// full sweep makes no move. The objective after every move is appended to
/// `trace`.
pub fn dib_optimize_from(
    m: &MicroBinModel,
    beta: f64,
    init: Assignment,
    mut trace: Option<&mut Vec<f64>>,
) -> DibSolution {
    let mut a = init;
    let k = a.clusters;
    let mass = m.mass();
    let qb: Vec<f64> = mass.iter().zip(m.p1()).map(|(&w, &p)| w * p).collect();
    let t_single: Vec<f64> = mass.iter().zip(&qb).map(|(&w, &q)| term(beta, w, q)).collect();
    if let Some(tr) = trace.as_deref_mut() {
        tr.push(dib_objective(m, &a, beta));
    }
    for pass in 0.. {
        let (mut pm, mut qm) = a.sums(m);
        let mut count = vec![0usize; k];
        a.z.iter().for_each(|&c| count[c] += 1);
        let mut t: Vec<f64> = (0..k).map(|c| term(beta, pm[c], qm[c])).collect();
        let mut bound: Vec<Bound> = (0..k).map(|c| Bound::new(beta, pm[c], qm[c])).collect();
        let mut moved = false;
        let n = a.z.len();
        for j in 0..n {
            let i = if pass % 2 == 0 { j } else { n - 1 - j };
            let c = a.z[i];
            let (w, q) = (mass[i], qb[i]);
            if count[c] > 1 {
                let mut ub = f64::NEG_INFINITY;
                for d in 0..k {
                    if d != c {
                        let u = if count[d] == 0 { t_single[i] } else { bound[d].join(w, q) };
                        ub = if u.is_nan() { f64::INFINITY } else { ub.max(u) };
                    }
                }
                // NaN compares false, so it never skips.
                if bound[c].leave(beta, w, q) + ub + 1e-13 <= MOVE_TOL {
                    continue;
                }
            }
            let t_out = if count[c] == 1 { 0.0 } else { term(beta, pm[c] - w, qm[c] - q) };
            let leave = t_out - t[c];
            let mut best = (MOVE_TOL, c, 0.0);
            let mut tried_empty = false;
            for d in 0..k {
                if d == c || (count[d] == 0 && std::mem::replace(&mut tried_empty, true)) {
                    continue;
                }
                if count[d] > 0 && leave + bound[d].join(w, q) + 1e-13 <= best.0 {
                    continue;
                }
                let t_in = term(beta, pm[d] + w, qm[d] + q);
                let gain = leave + t_in - t[d];
                if gain > best.0 {
                    best = (gain, d, t_in);
                }
            }
            let (gain, d, t_in) = best;
            if d == c {
                continue;
            }
            moved = true;
            a.z[i] = d;
            count[c] -= 1;
            count[d] += 1;
            if count[c] == 0 {
                pm[c] = 0.0;
                qm[c] = 0.0;
            } else {
                pm[c] -= w;
                qm[c] -= q;
            }
            pm[d] += w;
            qm[d] += q;
            t[c] = t_out;
            t[d] = t_in;
            bound[c] = Bound::new(beta, pm[c], qm[c]);
            bound[d] = Bound::new(beta, pm[d], qm[d]);
            if let Some(tr) = trace.as_deref_mut() {
                let last = *tr.last().unwrap_or(&0.0);
                tr.push(last + gain);
            }
        }
        if !moved {
            break;
        }
    }
    let (hz, iz) = dib_point(m, &a);
    DibSolution { assignment: a, h: hz, i: iz, objective: iz - beta * hz }
}

fn run_restarts(m: &MicroBinModel, beta: f64, cfg: &DibConfig, stream: u64, warm: Option<&Assignment>) -> DibSolution {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(stream);
    let mut best: Option<DibSolution> = None;
    for r in 0..cfg.restarts {
        let init = match (r, warm) {
            (0, Some(w)) => w.clone(),
            _ => Assignment::random(m.n(), cfg.max_clusters, &mut rng),
        };
        let s = dib_optimize_from(m, beta, init, None);
        if best.as_ref().is_none_or(|b| s.objective > b.objective) {
            best = Some(s);
        }
    }
    best.expect("at least one restart")
}

/// Best of `restarts` greedy runs from random assignments.
pub fn dib_optimize(m: &MicroBinModel, beta: f64, max_clusters: usize, restarts: usize, seed: u64) -> DibSolution {
    let cfg = DibConfig { max_clusters: max_clusters.max(1), restarts: restarts.max(1), seed, ..DibConfig::default() };
    run_restarts(m, beta, &cfg, 0, None)
}

/// Optimize over the `beta` grid and return the distinct `(H, I)` points
/// reached, sorted by `H`.
pub fn dib_sweep(m: &MicroBinModel, cfg: &DibConfig) -> Result<Vec<ParetoPoint>> {
    cfg.validate()?;
    let betas = cfg.betas();
    let sols: Vec<DibSolution> = if cfg.anneal {
        let mut out: Vec<DibSolution> = Vec::with_capacity(betas.len());
        // Largest beta first, so clusters are born as beta decreases.
        for (k, &b) in betas.iter().enumerate().rev() {
            let warm = out.last().map(|s| s.assignment.clone());
            out.push(run_restarts(m, b, cfg, k as u64, warm.as_ref()));
        }
        out.reverse();
        out
    } else {
        cfg.exec.map_range(betas.len(), |k| run_restarts(m, betas[k], cfg, k as u64, None))
    };
    let mut points: Vec<ParetoPoint> = Vec::new();
    for s in sols {
        let dup = points.iter().any(|p| (p.h - s.h).abs() <= DEDUP_TOL && (p.i - s.i).abs() <= DEDUP_TOL);
        if !dup {
            points.push(ParetoPoint {
                h: s.h,
                i: s.i,
                m: s.assignment.non_empty(),
                binning: s.assignment.to_binning(),
                provenance: Provenance::Ba,
            });
        }
    }
    points.sort_by(|a, b| a.h.total_cmp(&b.h).then(a.i.total_cmp(&b.i)));
    Ok(points)
}
