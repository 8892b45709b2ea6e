//! Adaptive Gauss-Kronrod (7/15) quadrature and bracketed root finding.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::unit::{Unit, LOGIT_MAX};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug)]
pub struct Tol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for Tol {
    fn default() -> Self {
        Tol { abs: 1e-12, rel: 1e-11, max_intervals: 4000 }
    }
}

impl Tol {
    pub fn abs(abs: f64) -> Self {
        Tol { abs, ..Tol::default() }
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    let fc = f(c);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for j in 0..7 {
        let dx = r * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * r, ((k - g) * r).abs())
}

struct Piece {
    a: f64,
    b: f64,
    val: f64,
    err: f64,
}

impl PartialEq for Piece {
    fn eq(&self, o: &Self) -> bool {
        self.err == o.err
    }
}
impl Eq for Piece {}
impl PartialOrd for Piece {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Piece {
    fn cmp(&self, o: &Self) -> Ordering {
        self.err.total_cmp(&o.err)
    }
}

/// Integrate `f` over each consecutive pair of `breaks`, refining globally by
/// largest error estimate. The rule never evaluates the interval endpoints.
pub fn integrate_breaks<F: Fn(f64) -> f64>(f: F, breaks: &[f64], tol: Tol) -> Result<f64> {
    let mut heap = BinaryHeap::new();
    let (mut total, mut err) = (0.0, 0.0);
    for w in breaks.windows(2) {
        let (val, e) = gk15(&f, w[0], w[1]);
        total += val;
        err += e;
        heap.push(Piece { a: w[0], b: w[1], val, err: e });
    }
    let mut count = heap.len();
    while err > tol.abs.max(tol.rel * total.abs()) {
        if !total.is_finite() {
            return Err(Error::Numeric("non-finite integrand".into()));
        }
        if count >= tol.max_intervals {
            return Err(Error::Numeric(format!(
                "quadrature did not converge: estimate {total:e}, error {err:e}"
            )));
        }
        let p = heap.pop().expect("heap is never empty");
        let m = 0.5 * (p.a + p.b);
        if m <= p.a || m >= p.b {
            // Interval below floating-point resolution; accept what we have.
            heap.push(Piece { err: 0.0, ..p });
            err = heap.iter().map(|q| q.err).sum();
            continue;
        }
        let (v1, e1) = gk15(&f, p.a, m);
        let (v2, e2) = gk15(&f, m, p.b);
        total += v1 + v2 - p.val;
        err += e1 + e2 - p.err;
        heap.push(Piece { a: p.a, b: m, val: v1, err: e1 });
        heap.push(Piece { a: m, b: p.b, val: v2, err: e2 });
        count += 1;
    }
    // Re-sum to shed accumulated update roundoff.
    let mut pieces = heap.into_vec();
    pieces.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(pieces.iter().map(|p| p.val).sum())
}

pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: Tol) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    integrate_breaks(f, &[a, b], tol)
}

const LOGIT_BREAKS: [f64; 11] = [
    -LOGIT_MAX, -200.0, -60.0, -20.0, -6.0, 0.0, 6.0, 20.0, 60.0, 200.0, LOGIT_MAX,
];

/// `∫_0^1 g(w) dw` through the logit substitution; copes with integrable
/// endpoint singularities and mass concentrated extremely close to 0 or 1.
pub fn integrate_unit<F: Fn(Unit) -> f64>(g: F, tol: Tol) -> Result<f64> {
    integrate_breaks(
        |t| {
            let u = Unit::from_logit(t);
            let jac = u.w * u.wc;
            if jac == 0.0 {
                0.0
            } else {
                g(u) * jac
            }
        },
        &LOGIT_BREAKS,
        tol,
    )
}

/// Brent's method on a sign-changing bracket.
pub fn brent<F: FnMut(f64) -> f64>(mut f: F, mut a: f64, mut b: f64, xtol: f64) -> Result<f64> {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() || fa.is_nan() || fb.is_nan() {
        return Err(Error::Numeric(format!(
            "root not bracketed on [{a}, {b}]: f = ({fa}, {fb})"
        )));
    }
    let (mut c, mut fc) = (a, fa);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..300 {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol1 = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let xm = 0.5 * (c - b);
        if xm.abs() <= tol1 || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol1 && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * xm * s;
                q = 1.0 - s;
            } else {
                let qq = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            }
            p = p.abs();
            let min1 = 3.0 * xm * q - (tol1 * q).abs();
            let min2 = (e * q).abs();
            if 2.0 * p < min1.min(min2) {
                e = d;
                d = p / q;
            } else {
                d = xm;
                e = d;
            }
        } else {
            d = xm;
            e = d;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol1 { d } else { tol1.copysign(xm) };
        fb = f(b);
        if fb.is_nan() {
            return Err(Error::Numeric(format!("NaN during root search at {b}")));
        }
    }
    Err(Error::Numeric("root search exceeded iteration limit".into()))
}

/// Find `t` with `f(Unit::from_logit(t)) = 0` for an increasing `f`.
pub fn solve_increasing_logit<F: FnMut(Unit) -> f64>(mut f: F) -> Result<Unit> {
    let t = brent(|t| f(Unit::from_logit(t)), -LOGIT_MAX, LOGIT_MAX, 1e-13)?;
    Ok(Unit::from_logit(t))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_exact() {
        let v = integrate(|x| 3.0 * x * x, 0.0, 2.0, Tol::default()).unwrap();
        assert!((v - 8.0).abs() < 1e-13);
    }

    #[test]
    fn endpoint_singularity() {
        // ∫ x^{-1/2} = 2 on (0,1)
        let v = integrate(|x| x.powf(-0.5), 0.0, 1.0, Tol::abs(1e-10)).unwrap();
        assert!((v - 2.0).abs() < 1e-9, "{v}");
        let v = integrate_unit(|u| u.w.powf(-0.9) * u.wc.powf(-0.5), Tol::abs(1e-10)).unwrap();
        // Beta(0.1, 0.5)
        let want = 11.323_086_975_215_753;
        assert!((v - want).abs() < 1e-8, "{v}");
    }

    #[test]
    fn brent_sqrt2() {
        let r = brent(|x| x * x - 2.0, 0.0, 2.0, 1e-15).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-14);
        assert!(brent(|x| x * x + 1.0, 0.0, 2.0, 1e-15).is_err());
    }
}
