use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::info::group_cost;
use crate::pipeline::MicroBinModel;

use super::{point_from, ContiguousBinning, ParetoPoint, Prefix, Provenance};

/// Costs within this margin of the minimum count as ties; the smallest cut
/// index wins, which makes the chosen cut vector lexicographically smallest.
const TIE: f64 = 1e-13;

/// Max-`I` contiguous binnings for `M = 1..=m_max`, by exact dynamic
/// programming over cut indices. `I = H(Y) - Σ_g P_g h2(Q_g / P_g)`, so the
/// conditional-entropy sum over groups has optimal substructure.
pub fn corners(m: &MicroBinModel, m_max: usize) -> Result<Vec<ParetoPoint>> {
    corners_with(m, m_max, Exec::default())
}

pub fn corners_with(m: &MicroBinModel, m_max: usize, exec: Exec) -> Result<Vec<ParetoPoint>> {
    let n = m.n();
    if m_max == 0 || m_max > n {
        return Err(Error::Infeasible(format!("{m_max} groups from {n} micro-bins")));
    }
    let pre = Prefix::new(m);
    let cost = |i: usize, j: usize| group_cost(pre.cm[j] - pre.cm[i], pre.cq[j] - pre.cq[i]);

    // best[k][i]: least cost covering bins i..n with k + 1 groups.
    // next[k][i]: where the first of those groups ends.
    let mut best: Vec<Vec<f64>> = Vec::with_capacity(m_max);
    let mut next: Vec<Vec<usize>> = Vec::with_capacity(m_max);
    best.push((0..=n).map(|i| if i < n { cost(i, n) } else { f64::INFINITY }).collect());
    next.push(vec![n; n + 1]);
    for k in 1..m_max {
        let prev = &best[k - 1];
        let row = exec.map_range(n + 1, |i| {
            if i + k >= n {
                return (f64::INFINITY, n);
            }
            let lo = i + 1;
            let hi = n - k;
            let vals: Vec<f64> = (lo..=hi).map(|j| cost(i, j) + prev[j]).collect();
            let min = vals.iter().copied().fold(f64::INFINITY, f64::min);
            let arg = vals.iter().position(|&v| v <= min + TIE).unwrap();
            (min, lo + arg)
        });
        best.push(row.iter().map(|r| r.0).collect());
        next.push(row.iter().map(|r| r.1).collect());
    }

    (1..=m_max)
        .map(|groups| {
            let mut cuts = Vec::with_capacity(groups - 1);
            let mut i = 0;
            for k in (1..groups).rev() {
                i = next[k][i];
                cuts.push(i);
            }
            point_from(m, ContiguousBinning::Indices(cuts), Provenance::Corner)
        })
        .collect()
}

/// The max-`I` contiguous binning into exactly `groups` groups.
pub fn corner(m: &MicroBinModel, groups: usize) -> Result<ParetoPoint> {
    Ok(corners(m, groups)?.pop().expect("at least one corner"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontier::eval_binning;

    #[test]
    fn matches_single_cut_scan() {
        let p1: Vec<f64> = (0..50).map(|k| ((k as f64 + 0.5) / 50.0).powi(3)).collect();
        let m = MicroBinModel::equal_mass(p1).unwrap();
        let c = corner(&m, 2).unwrap();
        let best = (1..50)
            .map(|k| eval_binning(&m, &ContiguousBinning::Indices(vec![k])).unwrap().2)
            .fold(0.0, f64::max);
        assert_eq!(c.i, best);
    }

    #[test]
    fn one_group_and_infeasible() {
        let m = MicroBinModel::equal_mass(vec![0.1, 0.9]).unwrap();
        let c = corner(&m, 1).unwrap();
        assert_eq!((c.h, c.i, c.m), (0.0, 0.0, 1));
        assert!(matches!(corner(&m, 3), Err(Error::Infeasible(_))));
    }

    #[test]
    fn ties_take_smallest_cuts() {
        // Identical bins: every split is equally (un)informative.
        let m = MicroBinModel::equal_mass(vec![0.5; 6]).unwrap();
        let c = corner(&m, 3).unwrap();
        assert_eq!(c.binning, Some(ContiguousBinning::Indices(vec![1, 2])));
    }
}
