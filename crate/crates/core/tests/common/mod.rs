//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's information or quadrature code.

#![allow(dead_code)]

use paretobin::frontier::corner;
use paretobin::models::ClassConditionalModel;
use paretobin::pipeline::{fine_bin, sort_bins, uniformize};
use paretobin::MicroBinModel;

pub fn plogp(x: f64) -> f64 {
    if x > 0.0 {
        x * x.log2()
    } else {
        0.0
    }
}

/// `I(Z;Y)` in bits of a joint given as rows `[P(z, y=1), P(z, y=2)]`,
/// straight from the definition.
pub fn mi_rows(rows: &[[f64; 2]]) -> f64 {
    let total: f64 = rows.iter().map(|r| r[0] + r[1]).sum();
    let py = [
        rows.iter().map(|r| r[0]).sum::<f64>() / total,
        rows.iter().map(|r| r[1]).sum::<f64>() / total,
    ];
    let mut i = 0.0;
    for r in rows {
        let pz = (r[0] + r[1]) / total;
        for y in 0..2 {
            let p = r[y] / total;
            if p > 0.0 {
                i += p * (p / (pz * py[y])).log2();
            }
        }
    }
    i
}

/// `H(Z)` in bits of group masses.
pub fn entropy_of(p: &[f64]) -> f64 {
    let t: f64 = p.iter().sum();
    -p.iter().map(|&x| plogp(x / t)).sum::<f64>()
}

/// `(H, I)` of an arbitrary labelling of micro-bins into `groups` groups.
pub fn eval_labels(mass: &[f64], p1: &[f64], labels: &[usize], groups: usize) -> (f64, f64) {
    let mut rows = vec![[0.0; 2]; groups];
    for (k, &g) in labels.iter().enumerate() {
        rows[g][0] += mass[k] * p1[k];
        rows[g][1] += mass[k] * (1.0 - p1[k]);
    }
    let pz: Vec<f64> = rows.iter().map(|r| r[0] + r[1]).collect();
    (entropy_of(&pz), mi_rows(&rows))
}

/// Gauss-Legendre nodes and weights on `[0, 1]` (Newton on the recurrence).
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((0.5 * (1.0 - x), 0.5 * w));
    }
    out
}

/// Composite Gauss-Legendre on `[a, b]` with `panels` equal panels.
pub fn composite(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let gl = gauss_legendre(order);
    let w = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let lo = a + w * p as f64;
        for &(x, wt) in &gl {
            s += wt * w * f(lo + w * x);
        }
    }
    s
}

/// The toy model uniformized and cut into `n` sorted equal-mass micro-bins.
pub fn toy_bins(n: usize) -> MicroBinModel {
    sort_bins(&fine_bin(&uniformize(&ClassConditionalModel::toy()), n).unwrap())
}

pub fn toy_corner_i(n: usize, m: usize) -> f64 {
    corner(&toy_bins(n), m).unwrap().i
}
