use crate::error::Result;
use crate::exec::Exec;
use crate::pipeline::MicroBinModel;

use super::refine::refine_prefix;
use super::{
    corners_with, pareto_filter, sample_binnings_with, ContiguousBinning, FrontierCurve, ParetoPoint, Prefix,
    Provenance, RefineOptions,
};

#[derive(Clone, Debug)]
pub struct SweepOptions {
    pub m_max: usize,
    /// Entropy targets for refinement, bits.
    pub h_grid: Vec<f64>,
    /// Random binnings drawn for each group count `2..=m_max`.
    pub samples_per_m: usize,
    pub seed: u64,
    pub refine: RefineOptions,
    pub exec: Exec,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            m_max: 8,
            h_grid: default_h_grid(8, 200),
            samples_per_m: 6000,
            seed: 0,
            refine: RefineOptions::default(),
            exec: Exec::default(),
        }
    }
}

/// `points` equispaced entropies on `[0, log2 m_max]`.
pub fn default_h_grid(m_max: usize, points: usize) -> Vec<f64> {
    let top = (m_max.max(1) as f64).log2();
    match points {
        0 => vec![],
        1 => vec![top],
        _ => (0..points).map(|k| top * k as f64 / (points - 1) as f64).collect(),
    }
}

/// Everything a sweep produced, plus the filtered frontier.
#[derive(Clone, Debug)]
pub struct Sweep {
    pub curve: FrontierCurve,
    /// Corners for `M = 1..=m_max`.
    pub corners: Vec<ParetoPoint>,
    /// Random binnings, grouped by `M`.
    pub samples: Vec<(usize, Vec<ParetoPoint>)>,
    /// Best refined point per grid target, in grid order.
    pub refined: Vec<ParetoPoint>,
}

/// Starting binnings for a target between corners: the `M` corner, and the
/// `M - 1` corner with a thin extra group born at either edge of each group.
fn seeds(corners: &[ParetoPoint], groups: usize, n: usize) -> Vec<ContiguousBinning> {
    let mut out = Vec::new();
    let pos = |p: &ParetoPoint| p.binning.as_ref().map(|b| b.positions(n)).unwrap_or_default();
    out.push(ContiguousBinning::Positions(pos(&corners[groups - 1])));
    if groups >= 2 {
        let base = pos(&corners[groups - 2]);
        let mut edges = vec![0.0];
        edges.extend_from_slice(&base);
        edges.push(1.0);
        for g in 0..groups - 1 {
            let (a, b) = (edges[g], edges[g + 1]);
            let d = (1e-3f64).min((b - a) / 4.0);
            for x in [a + d, b - d] {
                let mut c = base.clone();
                c.push(x);
                c.sort_by(f64::total_cmp);
                if ContiguousBinning::Positions(c.clone()).validate(n).is_ok() {
                    out.push(ContiguousBinning::Positions(c));
                }
            }
        }
    }
    out
}

pub fn sweep_frontier(m: &MicroBinModel, opts: &SweepOptions) -> Result<Sweep> {
    let n = m.n();
    let m_max = opts.m_max.clamp(1, n);
    let corners = corners_with(m, m_max, opts.exec)?;
    let mut samples = Vec::new();
    if opts.samples_per_m > 0 {
        for groups in 2..=m_max {
            samples.push((groups, sample_binnings_with(m, groups, opts.samples_per_m, opts.seed, opts.exec)?));
        }
    }
    let pre = Prefix::new(m);
    let tol = opts.refine.h_tol;
    let refined: Vec<Option<ParetoPoint>> = opts.exec.map(&opts.h_grid, |&target| {
        if target <= tol {
            return Some(ParetoPoint::origin(Provenance::Refined));
        }
        let first = (2..=m_max).find(|&g| corners[g - 1].h >= target - tol).unwrap_or(m_max);
        let mut best: Option<ParetoPoint> = None;
        for groups in first..=(first + 1).min(m_max) {
            if (groups as f64).log2() + tol < target {
                continue;
            }
            let mut starts = seeds(&corners, groups, n);
            if let Some((_, cloud)) = samples.iter().find(|(g, _)| *g == groups) {
                if let Some(s) = cloud
                    .iter()
                    .filter(|p| (p.h - target).abs() < 0.05)
                    .max_by(|a, b| a.i.total_cmp(&b.i))
                {
                    starts.extend(s.binning.clone());
                }
            }
            for s in &starts {
                if let Ok(p) = refine_prefix(&pre, s, target, opts.refine) {
                    if best.as_ref().is_none_or(|b| p.i > b.i) {
                        best = Some(p);
                    }
                }
            }
        }
        best
    });
    let refined: Vec<ParetoPoint> = refined.into_iter().flatten().collect();
    let mut all: Vec<ParetoPoint> = corners.clone();
    for (_, cloud) in &samples {
        all.extend(cloud.iter().cloned());
    }
    all.extend(refined.iter().cloned());
    Ok(Sweep { curve: pareto_filter(&all), corners, samples, refined })
}
