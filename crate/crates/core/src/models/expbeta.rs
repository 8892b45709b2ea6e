//! `f(w) = exp(a_0 + a_1 w + ... + a_d w^d) * w^{a_{d+1}} * (1 - w)^{a_{d+2}}`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::{integrate, Tol};
use crate::unit::Unit;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitParams {
    /// `a_0 ..= a_d`, then the exponent of `w`, then the exponent of `1 - w`.
    pub coeffs: Vec<f64>,
}

impl FitParams {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::InvalidParameter(format!(
                "need at least 3 coefficients, got {}",
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidParameter("non-finite coefficient".into()));
        }
        Ok(Self { coeffs })
    }

    /// The uniform density at degree `d`.
    pub fn uniform(d: usize) -> Self {
        Self { coeffs: vec![0.0; d + 3] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 3
    }

    pub fn poly(&self) -> &[f64] {
        &self.coeffs[..=self.degree()]
    }

    pub fn alpha(&self) -> f64 {
        self.coeffs[self.degree() + 1]
    }

    pub fn beta(&self) -> f64 {
        self.coeffs[self.degree() + 2]
    }

    fn poly_at(&self, w: f64) -> f64 {
        self.poly().iter().rev().fold(0.0, |acc, &c| acc * w + c)
    }

    /// Log of the (unnormalized) density at an interior point.
    pub fn ln_eval_unit(&self, u: Unit) -> f64 {
        self.poly_at(u.w) + self.alpha() * u.w.ln() + self.beta() * u.wc.ln()
    }

    pub fn eval_unit(&self, u: Unit) -> f64 {
        self.ln_eval_unit(u).exp()
    }

    /// Density value at `w`. At the endpoints the limit is returned, which is
    /// `+inf` for a negative exponent.
    pub fn eval(&self, w: f64) -> f64 {
        self.eval_unit(Unit::from_w(w))
    }

    fn check_normalizable(&self) -> Result<()> {
        if self.alpha() <= -1.0 || self.beta() <= -1.0 {
            return Err(Error::NonNormalizable(format!(
                "endpoint exponents ({}, {}) must exceed -1",
                self.alpha(),
                self.beta()
            )));
        }
        Ok(())
    }

    /// `∫_0^x f` for `x <= 1/2` after `w = x s^{1/(alpha+1)}`, which removes the
    /// power singularity at 0.
    fn left_integral(&self, x: Unit, tol: Tol) -> Result<f64> {
        if x.w <= 0.0 {
            return Ok(0.0);
        }
        let a1 = self.alpha() + 1.0;
        let q = 1.0 / a1;
        let beta = self.beta();
        let v = integrate(
            |s| {
                let w = x.w * s.powf(q);
                (self.poly_at(w) + beta * (-w).ln_1p()).exp()
            },
            0.0,
            1.0,
            tol,
        )?;
        Ok(x.w.powf(a1) * q * v)
    }

    /// `∫_x^1 f` for `x >= 1/2`, mirrored version of [`Self::left_integral`].
    fn right_integral(&self, x: Unit, tol: Tol) -> Result<f64> {
        if x.wc <= 0.0 {
            return Ok(0.0);
        }
        let b1 = self.beta() + 1.0;
        let q = 1.0 / b1;
        let alpha = self.alpha();
        let v = integrate(
            |s| {
                let v = x.wc * s.powf(q);
                (self.poly_at(1.0 - v) + alpha * (-v).ln_1p()).exp()
            },
            0.0,
            1.0,
            tol,
        )?;
        Ok(x.wc.powf(b1) * q * v)
    }

    /// `∫_0^1 f`.
    pub fn integral(&self) -> Result<f64> {
        self.integral_with(Tol { abs: 0.0, rel: 1e-13, max_intervals: 4000 })
    }

    pub fn integral_with(&self, tol: Tol) -> Result<f64> {
        self.check_normalizable()?;
        Ok(self.left_integral(Unit::HALF, tol)? + self.right_integral(Unit::HALF, tol)?)
    }

    /// Shift `a_0` so the density integrates to one.
    pub fn normalized(&self) -> Result<FitParams> {
        let z = self.integral()?;
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::NonNormalizable(format!("integral = {z}")));
        }
        let mut c = self.coeffs.clone();
        c[0] -= z.ln();
        Ok(FitParams { coeffs: c })
    }
}

/// Density value; free-function form of [`FitParams::eval`].
pub fn fit_density_eval(a: &FitParams, w: f64) -> f64 {
    a.eval(w)
}

pub fn normalize_fit(a: &FitParams) -> Result<FitParams> {
    a.normalized()
}

/// A normalized member of the family with CDF evaluation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpBeta {
    params: FitParams,
    z: f64,
}

const CDF_TOL: Tol = Tol { abs: 0.0, rel: 1e-12, max_intervals: 2000 };

impl ExpBeta {
    /// Wrap `params`; the stored `a_0` is corrected by `ln ∫ f` if needed.
    pub fn new(params: FitParams) -> Result<Self> {
        let z = params.integral()?;
        if !(z.is_finite() && z > 0.0) {
            return Err(Error::NonNormalizable(format!("integral = {z}")));
        }
        Ok(Self { params, z })
    }

    pub fn params(&self) -> &FitParams {
        &self.params
    }

    /// Integral of the raw coefficients; `1` means they were already normalized.
    pub fn raw_integral(&self) -> f64 {
        self.z
    }

    pub fn pdf(&self, u: Unit) -> f64 {
        self.params.eval_unit(u) / self.z
    }

    pub fn cdf(&self, u: Unit) -> f64 {
        if u.w <= 0.5 {
            self.left(u)
        } else {
            1.0 - self.right(u)
        }
    }

    pub fn ccdf(&self, u: Unit) -> f64 {
        if u.w <= 0.5 {
            1.0 - self.left(u)
        } else {
            self.right(u)
        }
    }

    fn left(&self, u: Unit) -> f64 {
        // The integrand is smooth after substitution; failure here means the
        // parameters are pathological, which `new` would already have caught.
        self.params.left_integral(u, CDF_TOL).unwrap_or(f64::NAN) / self.z
    }

    fn right(&self, u: Unit) -> f64 {
        self.params.right_integral(u, CDF_TOL).unwrap_or(f64::NAN) / self.z
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zeros_are_uniform() {
        let a = FitParams::uniform(3);
        assert_eq!(a.eval(0.3), 1.0);
        assert!((a.integral().unwrap() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn constant_density_shifts_a0() {
        let a = FitParams::new(vec![0.7, 0.0, 0.0]).unwrap();
        let n = a.normalized().unwrap();
        assert!((n.coeffs[0] - 0.0).abs() < 1e-13);
    }

    #[test]
    fn beta_function_integral() {
        // w^{-0.5}(1-w)^{2}: B(0.5, 3) = 16/15
        let a = FitParams::new(vec![0.0, -0.5, 2.0]).unwrap();
        assert!((a.integral().unwrap() - 16.0 / 15.0).abs() < 1e-12);
    }

    #[test]
    fn rejects_divergent() {
        let a = FitParams::new(vec![0.0, -1.0, 0.0]).unwrap();
        assert!(matches!(a.normalized(), Err(Error::NonNormalizable(_))));
    }

    #[test]
    fn cdf_is_consistent() {
        let a = FitParams::new(vec![0.3, -2.0, 1.5, -0.4, 0.6]).unwrap();
        let e = ExpBeta::new(a).unwrap();
        assert_eq!(e.cdf(Unit::ZERO), 0.0);
        assert!((e.cdf(Unit::ONE) - 1.0).abs() < 1e-12);
        let (u, v) = (Unit::from_w(0.31), Unit::from_w(0.77));
        let direct = integrate(|w| e.pdf(Unit::from_w(w)), 0.31, 0.77, Tol::default()).unwrap();
        assert!((e.cdf(v) - e.cdf(u) - direct).abs() < 1e-11);
        assert!((e.cdf(v) + e.ccdf(v) - 1.0).abs() < 1e-14);
    }
}
