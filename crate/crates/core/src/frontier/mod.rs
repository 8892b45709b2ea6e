//! Contiguous groupings of sorted micro-bins and the (H, I) frontier.

mod brute;
mod corner;
mod format;
mod pareto;
mod prefix;
mod refine;
mod sample;
mod swap;
mod sweep;

pub use brute::{brute_force_frontier, brute_force_visit, is_contiguous};
pub use corner::{corner, corners, corners_with};
pub use format::{fmt_sig, frontier_csv, frontier_json, parse_frontier_csv, parse_frontier_json};
pub use pareto::pareto_filter;
pub use refine::{refine, refine_with, RefineOptions};
pub use sample::{sample_binnings, sample_binnings_with};
pub use swap::{swap_derivative, swap_step};
pub use sweep::{default_h_grid, sweep_frontier, Sweep, SweepOptions};

pub(crate) use prefix::Prefix;

use crate::error::{Error, Result};
use crate::info::{group_cost, h, DiscreteJoint};
use crate::pipeline::MicroBinModel;

/// Boundaries between groups of consecutive micro-bins.
#[derive(Clone, Debug, PartialEq)]
pub enum ContiguousBinning {
    /// Micro-bin indices in `1..N`; group `g` holds bins `cuts[g-1]..cuts[g]`.
    Indices(Vec<usize>),
    /// Positions in `(0, 1)` along the micro-bin axis; a position inside a
    /// micro-bin splits its mass and class mass proportionally.
    Positions(Vec<f64>),
}

impl ContiguousBinning {
    pub fn groups(&self) -> usize {
        match self {
            ContiguousBinning::Indices(c) => c.len() + 1,
            ContiguousBinning::Positions(c) => c.len() + 1,
        }
    }

    /// Cuts as positions in `[0, 1]` for a model with `n` micro-bins.
    pub fn positions(&self, n: usize) -> Vec<f64> {
        match self {
            ContiguousBinning::Indices(c) => c.iter().map(|&k| k as f64 / n as f64).collect(),
            ContiguousBinning::Positions(c) => c.clone(),
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            ContiguousBinning::Indices(c) => {
                for (k, &x) in c.iter().enumerate() {
                    if x == 0 || x >= n || (k > 0 && x <= c[k - 1]) {
                        return Err(Error::InvalidBinning(format!(
                            "cut {k} = {x} (need strictly increasing indices in 1..{n})"
                        )));
                    }
                }
            }
            ContiguousBinning::Positions(c) => {
                for (k, &x) in c.iter().enumerate() {
                    if !(x > 0.0 && x < 1.0) || (k > 0 && x <= c[k - 1]) {
                        return Err(Error::InvalidBinning(format!(
                            "cut {k} = {x} (need strictly increasing positions in (0, 1))"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Provenance {
    Corner,
    Sampled,
    Refined,
    Ba,
}

impl Provenance {
    pub fn as_str(self) -> &'static str {
        match self {
            Provenance::Corner => "corner",
            Provenance::Sampled => "sampled",
            Provenance::Refined => "refined",
            Provenance::Ba => "ba",
        }
    }
}

/// An attainable `(H(Z), I(Z, Y))` pair in bits.
#[derive(Clone, Debug, PartialEq)]
pub struct ParetoPoint {
    pub h: f64,
    pub i: f64,
    /// Number of non-empty groups.
    pub m: usize,
    /// `None` for groupings that are not contiguous.
    pub binning: Option<ContiguousBinning>,
    pub provenance: Provenance,
}

impl ParetoPoint {
    pub fn origin(provenance: Provenance) -> Self {
        ParetoPoint {
            h: 0.0,
            i: 0.0,
            m: 1,
            binning: Some(ContiguousBinning::Indices(vec![])),
            provenance,
        }
    }
}

/// Non-dominated points sorted by increasing `H` (and strictly increasing `I`).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FrontierCurve {
    pub points: Vec<ParetoPoint>,
}

impl FrontierCurve {
    pub fn corners(&self) -> Vec<&ParetoPoint> {
        self.points.iter().filter(|p| p.provenance == Provenance::Corner).collect()
    }

    pub fn max_i(&self) -> f64 {
        self.points.iter().map(|p| p.i).fold(0.0, f64::max)
    }

    /// Piecewise-linear interpolation of `I` at entropy `h`, held constant
    /// beyond the last point.
    pub fn interpolate(&self, h: f64) -> f64 {
        let p = &self.points;
        if p.is_empty() {
            return 0.0;
        }
        let k = p.partition_point(|q| q.h <= h);
        if k == 0 {
            return p[0].i;
        }
        if k == p.len() {
            return p[k - 1].i;
        }
        let (a, b) = (&p[k - 1], &p[k]);
        a.i + (b.i - a.i) * (h - a.h) / (b.h - a.h)
    }
}

/// `(H, I)` of groups given their masses and class-1 masses.
pub(crate) fn eval_groups(p: &[f64], q: &[f64]) -> (f64, f64) {
    if p.iter().filter(|&&x| x > 0.0).count() <= 1 {
        return (0.0, 0.0);
    }
    let total_q: f64 = q.iter().sum();
    let total: f64 = p.iter().sum();
    let hy = h(total_q) + h(total - total_q);
    let mut hz = 0.0;
    let mut cond = 0.0;
    for (&pg, &qg) in p.iter().zip(q) {
        hz += h(pg);
        cond += group_cost(pg, qg);
    }
    (hz.max(0.0), (hy - cond).max(0.0))
}

fn aggregate(m: &MicroBinModel, b: &ContiguousBinning) -> Result<(Vec<f64>, Vec<f64>)> {
    b.validate(m.n())?;
    let n = m.n();
    let (mass, p1) = (m.mass(), m.p1());
    let groups = b.groups();
    let mut pm = vec![0.0; groups];
    let mut qm = vec![0.0; groups];
    match b {
        ContiguousBinning::Indices(cuts) => {
            let mut g = 0;
            for k in 0..n {
                while g < cuts.len() && k >= cuts[g] {
                    g += 1;
                }
                pm[g] += mass[k];
                qm[g] += mass[k] * p1[k];
            }
        }
        ContiguousBinning::Positions(cuts) => {
            let mut edges = vec![0.0];
            edges.extend(cuts.iter().map(|&x| x * n as f64));
            edges.push(n as f64);
            for g in 0..groups {
                let (lo, hi) = (edges[g], edges[g + 1]);
                let first = lo.floor() as usize;
                let last = (hi.ceil() as usize).min(n);
                for k in first..last {
                    let frac = (hi.min(k as f64 + 1.0) - lo.max(k as f64)).clamp(0.0, 1.0);
                    pm[g] += frac * mass[k];
                    qm[g] += frac * mass[k] * p1[k];
                }
            }
        }
    }
    Ok((pm, qm))
}

/// Group the micro-bins and evaluate. Masses are accumulated bin by bin in
/// index order.
pub fn eval_binning(m: &MicroBinModel, b: &ContiguousBinning) -> Result<(DiscreteJoint, f64, f64)> {
    let (pm, qm) = aggregate(m, b)?;
    let (hz, iz) = eval_groups(&pm, &qm);
    let rows = pm.iter().zip(&qm).map(|(&p, &q)| [q, (p - q).max(0.0)]).collect();
    Ok((DiscreteJoint::from_rows_unchecked(rows), hz, iz))
}

pub(crate) fn point_from(
    m: &MicroBinModel,
    b: ContiguousBinning,
    provenance: Provenance,
) -> Result<ParetoPoint> {
    let (_, hz, iz) = eval_binning(m, &b)?;
    Ok(ParetoPoint { h: hz, i: iz, m: b.groups(), binning: Some(b), provenance })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model() -> MicroBinModel {
        MicroBinModel::equal_mass(vec![0.05, 0.2, 0.4, 0.6, 0.9, 0.95, 0.99, 1.0]).unwrap()
    }

    #[test]
    fn single_and_full_groupings() {
        let m = model();
        let (_, h0, i0) = eval_binning(&m, &ContiguousBinning::Indices(vec![])).unwrap();
        assert_eq!((h0, i0), (0.0, 0.0));
        let all = ContiguousBinning::Indices((1..8).collect());
        let (_, hn, iz) = eval_binning(&m, &all).unwrap();
        assert!((hn - 3.0).abs() < 1e-15);
        assert!((iz - m.mutual_info()).abs() < 1e-14);
    }

    #[test]
    fn integer_positions_match_indices() {
        let m = model();
        let a = eval_binning(&m, &ContiguousBinning::Indices(vec![3, 5])).unwrap();
        let b = eval_binning(&m, &ContiguousBinning::Positions(vec![3.0 / 8.0, 5.0 / 8.0])).unwrap();
        assert!((a.1 - b.1).abs() < 1e-15 && (a.2 - b.2).abs() < 1e-15);
    }

    #[test]
    fn invalid_cuts() {
        let m = model();
        for c in [vec![0], vec![8], vec![3, 3], vec![5, 2]] {
            assert!(matches!(
                eval_binning(&m, &ContiguousBinning::Indices(c)),
                Err(Error::InvalidBinning(_))
            ));
        }
        assert!(eval_binning(&m, &ContiguousBinning::Positions(vec![1.0])).is_err());
    }

    #[test]
    fn interpolation() {
        let mk = |h, i| ParetoPoint { h, i, m: 1, binning: None, provenance: Provenance::Corner };
        let c = FrontierCurve { points: vec![mk(0.0, 0.0), mk(1.0, 0.5), mk(2.0, 0.6)] };
        assert_eq!(c.interpolate(0.5), 0.25);
        assert!((c.interpolate(1.5) - 0.55).abs() < 1e-15);
        assert_eq!(c.interpolate(3.0), 0.6);
    }
}
