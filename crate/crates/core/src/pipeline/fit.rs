//! Maximum-likelihood fit of the exp-polynomial × beta family.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::models::{Class, ClassConditionalModel, ClassDensity, ExpBeta, FitParams};
use crate::quad::Tol;
use crate::unit::Unit;

use super::samples::SampleSet;

/// Samples are pulled this far inside `(0, 1)` before taking logs.
const W_CLAMP: f64 = 1e-15;

#[derive(Clone, Debug)]
pub struct FitOptions {
    pub degree: usize,
    pub starts: usize,
    /// Function evaluations allowed per start.
    pub budget: usize,
    /// Convergence threshold on the simplex diameter.
    pub xtol: f64,
    pub seed: u64,
    pub exec: Exec,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { degree: 4, starts: 16, budget: 50_000, xtol: 1e-7, seed: 0, exec: Exec::default() }
    }
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct ClassFit {
    /// Normalized coefficients.
    pub params: FitParams,
    /// Mean negative log-likelihood per sample, in nats.
    pub mean_nll: f64,
    pub evaluations: usize,
    pub converged_starts: usize,
}

#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct FitReport {
    pub prior: f64,
    pub class1: ClassFit,
    pub class2: ClassFit,
}

/// Sufficient statistics: means of `w^j` (j = 1..=d), `ln w`, `ln(1 - w)`.
struct Stats {
    powers: Vec<f64>,
    ln_w: f64,
    ln_wc: f64,
}

impl Stats {
    fn new(ws: &[f64], d: usize) -> Self {
        let n = ws.len() as f64;
        let mut powers = vec![0.0; d];
        let (mut lw, mut lwc) = (0.0, 0.0);
        for &w in ws {
            let w = w.clamp(W_CLAMP, 1.0 - W_CLAMP);
            let mut p = 1.0;
            for s in powers.iter_mut() {
                p *= w;
                *s += p;
            }
            lw += w.ln();
            lwc += (-w).ln_1p();
        }
        powers.iter_mut().for_each(|s| *s /= n);
        Stats { powers, ln_w: lw / n, ln_wc: lwc / n }
    }

    /// Mean NLL for free parameters `theta = (a_1..a_d, alpha, beta)`, with
    /// `a_0` set by normalization.
    fn nll(&self, theta: &[f64]) -> f64 {
        let d = self.powers.len();
        let (alpha, beta) = (theta[d], theta[d + 1]);
        if alpha <= -1.0 || beta <= -1.0 || theta.iter().any(|x| !x.is_finite()) {
            return f64::INFINITY;
        }
        let mut c = Vec::with_capacity(d + 3);
        c.push(0.0);
        c.extend_from_slice(theta);
        let z = match FitParams::new(c).and_then(|p| p.integral_with(NLL_TOL)) {
            Ok(z) if z > 0.0 && z.is_finite() => z,
            _ => return f64::INFINITY,
        };
        let lin: f64 = theta[..d].iter().zip(&self.powers).map(|(a, s)| a * s).sum::<f64>()
            + alpha * self.ln_w
            + beta * self.ln_wc;
        z.ln() - lin
    }
}

const NLL_TOL: Tol = Tol { abs: 0.0, rel: 1e-12, max_intervals: 2000 };

struct NmResult {
    x: Vec<f64>,
    f: f64,
    evals: usize,
    converged: bool,
}

fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, x0: &[f64], step: f64, budget: usize, xtol: f64) -> NmResult {
    let n = x0.len();
    let mut evals = 0;
    let eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut simplex: Vec<Vec<f64>> = vec![x0.to_vec()];
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += step;
        simplex.push(x);
    }
    let mut fv: Vec<f64> = simplex.iter().map(|x| eval(x, &mut evals)).collect();
    let mut converged = false;
    while evals < budget {
        let mut order: Vec<usize> = (0..=n).collect();
        order.sort_by(|&a, &b| fv[a].total_cmp(&fv[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        fv = order.iter().map(|&i| fv[i]).collect();
        let diam = simplex[1..]
            .iter()
            .map(|x| x.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if diam < xtol && fv[0].is_finite() {
            converged = true;
            break;
        }
        let centroid: Vec<f64> =
            (0..n).map(|j| simplex[..n].iter().map(|x| x[j]).sum::<f64>() / n as f64).collect();
        let along = |t: f64| -> Vec<f64> {
            centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (w - c)).collect()
        };
        let xr = along(-1.0);
        let fr = eval(&xr, &mut evals);
        if fr < fv[0] {
            let xe = along(-2.0);
            let fe = eval(&xe, &mut evals);
            if fe < fr {
                simplex[n] = xe;
                fv[n] = fe;
            } else {
                simplex[n] = xr;
                fv[n] = fr;
            }
        } else if fr < fv[n - 1] {
            simplex[n] = xr;
            fv[n] = fr;
        } else {
            let (xc, fc) = if fr < fv[n] {
                let x = along(-0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            } else {
                let x = along(0.5);
                let v = eval(&x, &mut evals);
                (x, v)
            };
            if fc < fv[n].min(fr) {
                simplex[n] = xc;
                fv[n] = fc;
            } else {
                for i in 1..=n {
                    let x: Vec<f64> =
                        simplex[i].iter().zip(&simplex[0]).map(|(a, b)| b + 0.5 * (a - b)).collect();
                    fv[i] = eval(&x, &mut evals);
                    simplex[i] = x;
                }
            }
        }
    }
    let best = (0..=n).min_by(|&a, &b| fv[a].total_cmp(&fv[b])).unwrap();
    NmResult { x: simplex[best].clone(), f: fv[best], evals, converged }
}

/// Fit one class. Each start runs Nelder–Mead, then restarts it once from
/// its optimum so a collapsed simplex cannot stall short of the minimum.
pub fn fit_density(ws: &[f64], opts: &FitOptions) -> Result<ClassFit> {
    let d = opts.degree;
    let dim = d + 2;
    if ws.len() < d + 3 {
        return Err(Error::InsufficientSamples { need: d + 3, have: ws.len() });
    }
    let stats = Stats::new(ws, d);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let starts: Vec<Vec<f64>> = (0..opts.starts.max(1))
        .map(|s| {
            if s == 0 {
                vec![0.0; dim]
            } else {
                (0..dim)
                    .map(|j| if j < d { rng.random_range(-2.0..2.0) } else { rng.random_range(-0.6..1.0) })
                    .collect()
            }
        })
        .collect();
    let runs = opts.exec.map(&starts, |x0| {
        let f = |x: &[f64]| stats.nll(x);
        let first = nelder_mead(&f, x0, 0.5, opts.budget, opts.xtol);
        let left = opts.budget.saturating_sub(first.evals);
        let second = nelder_mead(&f, &first.x, 0.05, left, opts.xtol);
        let evals = first.evals + second.evals;
        if second.f <= first.f {
            NmResult { evals, ..second }
        } else {
            NmResult { evals, ..first }
        }
    });
    let evaluations = runs.iter().map(|r| r.evals).sum();
    let converged_starts = runs.iter().filter(|r| r.converged).count();
    // First minimum wins ties, keeping the result independent of scheduling.
    let best = runs
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.f.total_cmp(&b.1.f).then(a.0.cmp(&b.0)))
        .map(|(_, r)| r)
        .unwrap();
    let mut coeffs = vec![0.0];
    coeffs.extend_from_slice(&best.x);
    if converged_starts == 0 || !best.f.is_finite() {
        return Err(Error::FitFailed { best: coeffs, best_nll: best.f });
    }
    let params = FitParams::new(coeffs)?.normalized()?;
    Ok(ClassFit { params, mean_nll: best.f, evaluations, converged_starts })
}

/// Fit both class densities at degree `d`; prior is the empirical class-1
/// fraction.
pub fn fit_class_densities(s: &SampleSet, d: usize) -> Result<(ClassConditionalModel, FitReport)> {
    fit_class_densities_with(s, &FitOptions { degree: d, ..FitOptions::default() })
}

pub fn fit_class_densities_with(
    s: &SampleSet,
    opts: &FitOptions,
) -> Result<(ClassConditionalModel, FitReport)> {
    let c1 = fit_density(&s.values(Class::One), opts)?;
    let c2 = fit_density(&s.values(Class::Two), &FitOptions { seed: opts.seed.wrapping_add(1), ..opts.clone() })?;
    let [n1, n2] = s.class_counts();
    let prior = n1 as f64 / (n1 + n2) as f64;
    let model = ClassConditionalModel::new(
        ClassDensity::ExpBeta(ExpBeta::new(c1.params.clone())?),
        ClassDensity::ExpBeta(ExpBeta::new(c2.params.clone())?),
        prior,
    )?;
    Ok((model, FitReport { prior, class1: c1, class2: c2 }))
}

/// `KL(empirical || fitted)` in bits over `bins` equal-count bins of the
/// samples, with bin edges halfway between neighbouring order statistics.
pub fn binned_kl(ws: &[f64], density: &ExpBeta, bins: usize) -> Result<f64> {
    if bins == 0 || ws.len() < bins {
        return Err(Error::InsufficientSamples { need: bins.max(1), have: ws.len() });
    }
    let mut xs = ws.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len();
    let edge = |j: usize| -> f64 {
        match j {
            0 => 0.0,
            _ if j == bins => 1.0,
            _ => {
                let k = j * n / bins;
                0.5 * (xs[k - 1] + xs[k])
            }
        }
    };
    let mut kl = 0.0;
    for j in 0..bins {
        let p = ((j + 1) * n / bins - j * n / bins) as f64 / n as f64;
        let (a, b) = (Unit::from_w(edge(j)), Unit::from_w(edge(j + 1)));
        let f = if b.w <= 0.5 { density.cdf(b) - density.cdf(a) } else { density.ccdf(a) - density.ccdf(b) };
        if !(f > 0.0) {
            return Err(Error::DivergenceUndefined(format!("fitted mass {f} in bin {j}")));
        }
        kl += p * (p / f).log2();
    }
    Ok(kl.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nelder_mead_quadratic() {
        let f = |x: &[f64]| (x[0] - 1.0).powi(2) + 10.0 * (x[1] + 2.0).powi(2);
        let r = nelder_mead(&f, &[0.0, 0.0], 0.5, 10_000, 1e-9);
        assert!(r.converged);
        assert!((r.x[0] - 1.0).abs() < 1e-8 && (r.x[1] + 2.0).abs() < 1e-8);
    }

    #[test]
    fn uniform_samples_recover_flat_density() {
        let ws: Vec<f64> = (0..20_000).map(|k| (k as f64 + 0.5) / 20_000.0).collect();
        let fit = fit_density(&ws, &FitOptions { degree: 0, starts: 4, ..FitOptions::default() }).unwrap();
        let c = &fit.params.coeffs;
        assert!(c[1].abs() < 0.05 && c[2].abs() < 0.05, "{c:?}");
    }

    #[test]
    fn too_few_samples() {
        let r = fit_density(&[0.5, 0.6], &FitOptions::default());
        assert!(matches!(r, Err(Error::InsufficientSamples { .. })));
    }
}
