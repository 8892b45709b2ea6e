//! Piecewise CDF family for likelihoods piled up against both endpoints:
//!
//! `F(w) = a0 F*(w; A)` for `w < 1/2`, `1 - (1 - a0) F*(1 - w; B)` otherwise,
//! with `F*(x) = G((2x)^{a1} / 2)` and
//! `G(u) = [(u/a2)^{a3 a4} + (a5 + a6 u)^{a4}]^{1/a4}`,
//! `a6 = 2 [(1 - (2 a2)^{-a3 a4})^{1/a4} - a5]`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::unit::Unit;

/// One branch: `(a1, a2, a3, a4, a5)` plus the derived `a6`.
#[derive(Clone, Copy, Debug, PartialEq)]
struct Branch {
    a1: f64,
    a2: f64,
    a3: f64,
    a4: f64,
    a5: f64,
    a6: f64,
}

impl Branch {
    fn new(p: &[f64]) -> Result<Self> {
        let [a1, a2, a3, a4, a5] = <[f64; 5]>::try_from(p).map_err(|_| {
            Error::InvalidParameter(format!("branch needs 5 parameters, got {}", p.len()))
        })?;
        if a1 <= 0.0 || a2 <= 0.0 || a4 == 0.0 {
            return Err(Error::InvalidParameter(format!(
                "need a1 > 0, a2 > 0, a4 != 0 (got {a1}, {a2}, {a4})"
            )));
        }
        let base = 1.0 - (2.0 * a2).powf(-a3 * a4);
        if base <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "1 - (2 a2)^(-a3 a4) = {base} is not positive"
            )));
        }
        let a6 = 2.0 * (base.powf(1.0 / a4) - a5);
        // a5 + a6 u is linear in u; check both ends of u ∈ [0, 1/2].
        if a5 <= 0.0 || a5 + 0.5 * a6 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "a5 + a6 u must stay positive on [0, 1/2] (a5 = {a5}, a6 = {a6})"
            )));
        }
        Ok(Branch { a1, a2, a3, a4, a5, a6 })
    }

    /// `(ln S, A, B)` with `S = e^A + e^B` at `u`.
    fn parts(&self, u: f64) -> (f64, f64, f64) {
        let a = self.a3 * self.a4 * (u / self.a2).ln();
        let b = self.a4 * (self.a5 + self.a6 * u).ln();
        let m = a.max(b);
        let ln_s = if m == f64::INFINITY {
            f64::INFINITY
        } else {
            m + ((a - m).exp() + (b - m).exp()).ln()
        };
        (ln_s, a, b)
    }

    /// `F*(x)` for `x ∈ [0, 1/2]`.
    fn fstar(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let u = 0.5 * (2.0 * x).powf(self.a1);
        let (ln_s, _, _) = self.parts(u);
        (ln_s / self.a4).exp()
    }

    /// `dF*/dx`.
    fn fstar_deriv(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let ln2x = (2.0 * x).ln();
        let u = 0.5 * (self.a1 * ln2x).exp();
        let (ln_s, a, b) = self.parts(u);
        let ln_g = ln_s / self.a4;
        // dG/du = G/S [a3 e^A / u + a6 e^B / (a5 + a6 u)], du/dx = a1 (2x)^{a1-1}
        let ln_du = self.a1.ln() + (self.a1 - 1.0) * ln2x;
        let t1 = self.a3 * (ln_g - ln_s + a - u.ln() + ln_du).exp();
        let t2 = self.a6 / (self.a5 + self.a6 * u) * (ln_g - ln_s + b + ln_du).exp();
        t1 + t2
    }
}

/// Parameter layout: branch A is `(a0, a1..a5)`, branch B is `(a1..a5)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CifarFitParams {
    pub branch_a: Vec<f64>,
    pub branch_b: Vec<f64>,
    /// The fit describes `1 - W` rather than `W`.
    #[serde(default)]
    pub reflect: bool,
}

/// A validated member of the family.
#[derive(Clone, Debug, PartialEq)]
pub struct CifarCdf {
    a0: f64,
    a: Branch,
    b: Branch,
    reflect: bool,
    params: CifarFitParams,
}

impl CifarCdf {
    pub fn new(p: CifarFitParams) -> Result<Self> {
        if p.branch_a.len() != 6 {
            return Err(Error::InvalidParameter(format!(
                "branch A needs 6 parameters, got {}",
                p.branch_a.len()
            )));
        }
        let a0 = p.branch_a[0];
        if !(0.0..=1.0).contains(&a0) {
            return Err(Error::InvalidParameter(format!("a0 = {a0} outside [0, 1]")));
        }
        Ok(CifarCdf {
            a0,
            a: Branch::new(&p.branch_a[1..])?,
            b: Branch::new(&p.branch_b)?,
            reflect: p.reflect,
            params: p,
        })
    }

    pub fn params(&self) -> &CifarFitParams {
        &self.params
    }

    fn raw_cdf(&self, u: Unit) -> f64 {
        if u.w < 0.5 {
            self.a0 * self.a.fstar(u.w)
        } else {
            1.0 - (1.0 - self.a0) * self.b.fstar(u.wc)
        }
    }

    fn raw_ccdf(&self, u: Unit) -> f64 {
        if u.w < 0.5 {
            1.0 - self.a0 * self.a.fstar(u.w)
        } else {
            (1.0 - self.a0) * self.b.fstar(u.wc)
        }
    }

    fn raw_pdf(&self, u: Unit) -> f64 {
        if u.w < 0.5 {
            self.a0 * self.a.fstar_deriv(u.w)
        } else {
            (1.0 - self.a0) * self.b.fstar_deriv(u.wc)
        }
    }

    pub fn cdf(&self, u: Unit) -> f64 {
        if self.reflect {
            self.raw_ccdf(u.reflect())
        } else {
            self.raw_cdf(u)
        }
    }

    pub fn ccdf(&self, u: Unit) -> f64 {
        if self.reflect {
            self.raw_cdf(u.reflect())
        } else {
            self.raw_ccdf(u)
        }
    }

    pub fn pdf(&self, u: Unit) -> f64 {
        if self.reflect {
            self.raw_pdf(u.reflect())
        } else {
            self.raw_pdf(u)
        }
    }
}

pub fn cifar_cdf_eval(p: &CifarFitParams, w: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::InvalidParameter(format!("w = {w} outside [0, 1]")));
    }
    Ok(CifarCdf::new(p.clone())?.cdf(Unit::from_w(w)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dog() -> CifarCdf {
        CifarCdf::new(CifarFitParams {
            branch_a: vec![0.8970, 0.2132, 0.0806, 6.0013, -1.0039, 0.8500],
            branch_b: vec![0.7872, 0.0144, 0.7974, -0.9440, 0.7237],
            reflect: false,
        })
        .unwrap()
    }

    #[test]
    fn endpoints_and_continuity() {
        let f = dog();
        assert_eq!(f.cdf(Unit::ZERO), 0.0);
        assert!((f.cdf(Unit::ONE) - 1.0).abs() < 1e-15);
        let left = f.cdf(Unit::from_w(0.5 - 1e-12));
        let right = f.cdf(Unit::HALF);
        assert!((left - right).abs() < 1e-6);
    }

    #[test]
    fn density_is_derivative() {
        let f = dog();
        for &w in &[1e-6f64, 0.01, 0.3, 0.49, 0.51, 0.8, 0.999] {
            let hs = 1e-6 * w.min(1.0 - w);
            let fd = (f.cdf(Unit::from_w(w + hs)) - f.cdf(Unit::from_w(w - hs))) / (2.0 * hs);
            let an = f.pdf(Unit::from_w(w));
            assert!((fd - an).abs() < 1e-5 * an.abs().max(1.0), "w={w}: {fd} vs {an}");
        }
    }

    #[test]
    fn deep_tail_keeps_precision() {
        let f = dog();
        let t = Unit::from_logit(-200.0);
        let c = f.cdf(t);
        assert!(c > 0.0 && c < 1e-3);
        let r = f.ccdf(t.reflect());
        assert!(r > 0.0 && r < 1e-2);
    }

    #[test]
    fn bad_parameters_rejected() {
        let p = CifarFitParams {
            branch_a: vec![0.9, 0.2, -0.1, 6.0, -1.0, 0.85],
            branch_b: vec![0.7, 0.05, 0.7, -1.0, 0.9],
            reflect: false,
        };
        assert!(matches!(CifarCdf::new(p), Err(Error::InvalidParameter(_))));
    }
}
