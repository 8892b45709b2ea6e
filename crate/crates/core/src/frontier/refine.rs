//! Maximize `I` over real-valued cut positions subject to `H = target`.
//!
//! Projected-gradient ascent: step along the component of `∇I` orthogonal
//! to `∇H`, then return to the constraint surface with Newton steps along
//! `∇H`, falling back to bisection on a path toward an anchor whose entropy
//! is on the other side of the target.

use crate::error::{Error, Result};
use crate::pipeline::MicroBinModel;

use super::{ContiguousBinning, ParetoPoint, Prefix, Provenance};

#[derive(Clone, Copy, Debug)]
pub struct RefineOptions {
    /// Accepted `|H - target|`, bits.
    pub h_tol: f64,
    pub max_iter: usize,
}

impl Default for RefineOptions {
    fn default() -> Self {
        RefineOptions { h_tol: 1e-4, max_iter: 400 }
    }
}

/// Smallest allowed gap between cuts, in micro-bin units.
const MIN_GAP: f64 = 1e-9;

struct Problem<'a> {
    pre: &'a Prefix,
    target: f64,
    tol: f64,
}

fn slog2(a: f64, b: f64) -> f64 {
    (a.max(1e-300) / b.max(1e-300)).log2()
}

impl Problem<'_> {
    fn n(&self) -> f64 {
        self.pre.n as f64
    }

    fn valid(&self, x: &[f64]) -> bool {
        let gap = MIN_GAP / self.n();
        let mut prev = 0.0;
        for &c in x {
            if !(c - prev >= gap) {
                return false;
            }
            prev = c;
        }
        1.0 - prev >= gap
    }

    fn eval(&self, x: &[f64]) -> (f64, f64) {
        self.pre.eval(x)
    }

    /// `(∇H, ∇I)` with respect to the cut positions.
    fn grads(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let (p, q) = self.pre.groups(x);
        let mut gh = Vec::with_capacity(x.len());
        let mut gi = Vec::with_capacity(x.len());
        for (k, &c) in x.iter().enumerate() {
            let b = self.pre.bin(c);
            let dm = self.pre.mass[b] * self.n();
            let dq = self.pre.q[b] * self.n();
            let dr = dm - dq;
            gh.push(dm * slog2(p[k + 1], p[k]));
            // d/dP of the group's conditional-entropy term, split by class.
            let side = |g: usize| {
                let r = p[g] - q[g];
                let a = if dr == 0.0 { 0.0 } else { dr * slog2(p[g], r) };
                let bq = if dq == 0.0 { 0.0 } else { dq * slog2(p[g], q[g]) };
                a + bq
            };
            gi.push(side(k + 1) - side(k));
        }
        (gh, gi)
    }

    fn newton(&self, x: &[f64]) -> Option<Vec<f64>> {
        let mut x = x.to_vec();
        for _ in 0..40 {
            let (hz, _) = self.eval(&x);
            let err = self.target - hz;
            if err.abs() <= 0.5 * self.tol {
                return Some(x);
            }
            let (gh, _) = self.grads(&x);
            let g2: f64 = gh.iter().map(|g| g * g).sum();
            if !(g2 > 0.0) {
                return None;
            }
            let mut t = err / g2;
            loop {
                let y: Vec<f64> = x.iter().zip(&gh).map(|(a, g)| a + t * g).collect();
                if self.valid(&y) {
                    x = y;
                    break;
                }
                t *= 0.5;
                if t.abs() * g2.sqrt() < 1e-15 {
                    return None;
                }
            }
        }
        None
    }

    /// Bisection along `x -> anchor` for the target entropy.
    fn homotopy(&self, x: &[f64], anchor: &[f64]) -> Option<Vec<f64>> {
        let path = |s: f64| -> Vec<f64> { x.iter().zip(anchor).map(|(a, b)| a + s * (b - a)).collect() };
        let f = |s: f64| self.eval(&path(s)).0 - self.target;
        let (mut lo, mut hi) = (0.0, 1.0);
        let (flo, fhi) = (f(lo), f(hi));
        if flo.signum() == fhi.signum() {
            return None;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let v = f(mid);
            if v.abs() <= 0.5 * self.tol && self.valid(&path(mid)) {
                return Some(path(mid));
            }
            if v.signum() == flo.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        None
    }

    fn project(&self, x: &[f64]) -> Option<Vec<f64>> {
        let (hz, _) = self.eval(x);
        if (hz - self.target).abs() <= 0.5 * self.tol {
            return Some(x.to_vec());
        }
        if let Some(y) = self.newton(x) {
            return Some(y);
        }
        let groups = x.len() + 1;
        let anchor: Vec<f64> = if self.target > hz {
            (1..groups).map(|k| self.pre.position_of_mass(k as f64 / groups as f64 * self.pre.cm[self.pre.n])).collect()
        } else {
            // Shrink every group but the largest toward zero width.
            let (p, _) = self.pre.groups(x);
            let big = (0..groups).max_by(|&a, &b| p[a].total_cmp(&p[b]).then(b.cmp(&a))).unwrap();
            (0..groups - 1).map(|c| if c < big { 0.0 } else { 1.0 }).collect()
        };
        let y = self.homotopy(x, &anchor)?;
        Some(self.newton(&y).unwrap_or(y))
    }
}

/// Locally maximize `I` at `H ≈ target_h` (within `h_tol`) starting from
/// `start`, keeping its group count.
pub fn refine(m: &MicroBinModel, start: &ContiguousBinning, target_h: f64) -> Result<ParetoPoint> {
    refine_with(m, start, target_h, RefineOptions::default())
}

pub fn refine_with(
    m: &MicroBinModel,
    start: &ContiguousBinning,
    target_h: f64,
    opts: RefineOptions,
) -> Result<ParetoPoint> {
    refine_prefix(&Prefix::new(m), start, target_h, opts)
}

pub(crate) fn refine_prefix(
    pre: &Prefix,
    start: &ContiguousBinning,
    target_h: f64,
    opts: RefineOptions,
) -> Result<ParetoPoint> {
    let n = pre.n;
    start.validate(n)?;
    if target_h > (n as f64).log2() + 1e-12 || target_h < 0.0 {
        return Err(Error::Infeasible(format!("target H = {target_h} outside [0, log2 {n}]")));
    }
    if target_h <= opts.h_tol {
        return Ok(ParetoPoint::origin(Provenance::Refined));
    }
    let groups = start.groups();
    if target_h > (groups as f64).log2() + opts.h_tol {
        return Err(Error::Infeasible(format!("{groups} groups cannot reach H = {target_h}")));
    }
    let prob = Problem { pre, target: target_h, tol: opts.h_tol };
    let mut x = prob
        .project(&start.positions(n))
        .ok_or_else(|| Error::Numeric(format!("could not reach H = {target_h} from the start")))?;
    let (_, mut cur) = prob.eval(&x);
    let mut step = 0.05;
    for _ in 0..opts.max_iter {
        let (gh, gi) = prob.grads(&x);
        let g2: f64 = gh.iter().map(|g| g * g).sum();
        let along: f64 = if g2 > 0.0 { gh.iter().zip(&gi).map(|(a, b)| a * b).sum::<f64>() / g2 } else { 0.0 };
        let d: Vec<f64> = gi.iter().zip(&gh).map(|(a, b)| a - along * b).collect();
        let dn = d.iter().map(|v| v * v).sum::<f64>().sqrt();
        if !(dn > 1e-14) {
            break;
        }
        let mut moved = false;
        while step > 1e-12 {
            let y: Vec<f64> = x.iter().zip(&d).map(|(a, v)| a + step * v / dn).collect();
            if prob.valid(&y) {
                if let Some(z) = prob.project(&y) {
                    let (_, iz) = prob.eval(&z);
                    if iz > cur + 1e-15 {
                        x = z;
                        cur = iz;
                        moved = true;
                        step = (step * 2.0).min(0.1);
                        break;
                    }
                }
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    let (hz, iz) = prob.eval(&x);
    Ok(ParetoPoint {
        h: hz,
        i: iz,
        m: groups,
        binning: Some(ContiguousBinning::Positions(x)),
        provenance: Provenance::Refined,
    })
}
