use crate::error::{Error, Result};
use crate::info::DiscreteJoint;
use crate::models::ClassConditionalModel;
use crate::quad::brent;
use crate::unit::{Unit, LOGIT_MAX};

/// Scan resolution in logit space for locating level crossings of `p1`.
const SCAN_POINTS: usize = 4096;
const SCAN_SPAN: f64 = 60.0;

fn p1_at(m: &ClassConditionalModel, t: f64) -> f64 {
    m.native_p1(Unit::from_logit(t)).unwrap_or(m.prior())
}

/// Joint of `Y` and the band of `p1(W)` between consecutive `thresholds`.
/// Row `k` collects `W` with `thresholds[k-1] <= p1(W) < thresholds[k]`.
pub fn vertical_bin(m: &ClassConditionalModel, thresholds: &[f64]) -> Result<DiscreteJoint> {
    for (k, w) in thresholds.windows(2).enumerate() {
        if w[1] <= w[0] {
            return Err(Error::InvalidBinning(format!("threshold {} not increasing", k + 1)));
        }
    }
    if thresholds.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::InvalidBinning("thresholds must lie in (0, 1)".into()));
    }
    let mut grid = vec![-LOGIT_MAX];
    grid.extend((0..=SCAN_POINTS).map(|k| -SCAN_SPAN + 2.0 * SCAN_SPAN * k as f64 / SCAN_POINTS as f64));
    grid.push(LOGIT_MAX);
    let vals: Vec<f64> = grid.iter().map(|&t| p1_at(m, t)).collect();

    let mut cuts = Vec::new();
    for &th in thresholds {
        for k in 0..grid.len() - 1 {
            let (a, b) = (vals[k] - th, vals[k + 1] - th);
            if (a < 0.0) != (b < 0.0) {
                cuts.push(brent(|t| p1_at(m, t) - th, grid[k], grid[k + 1], 1e-12)?);
            }
        }
    }
    cuts.sort_by(f64::total_cmp);

    let mut rows = vec![[0.0, 0.0]; thresholds.len() + 1];
    let mut pts = vec![Unit::ZERO];
    pts.extend(cuts.iter().map(|&t| Unit::from_logit(t)));
    pts.push(Unit::ONE);
    let mut edges = vec![-LOGIT_MAX];
    edges.extend(cuts.iter().copied());
    edges.push(LOGIT_MAX);
    for k in 0..pts.len() - 1 {
        let mid = p1_at(m, 0.5 * (edges[k] + edges[k + 1]));
        let band = thresholds.partition_point(|&th| th <= mid);
        let [a, b] = m.class_masses(pts[k], pts[k + 1]);
        rows[band][0] += a;
        rows[band][1] += b;
    }
    DiscreteJoint::new(rows)
}
