//! Class-conditional models of the likelihood `W`.

pub mod cifar;
pub mod expbeta;
pub mod spec;
pub mod toy;

use crate::error::{Error, Result};
use crate::info::h;
use crate::quad::{brent, integrate_unit, Tol};
use crate::unit::{Unit, LOGIT_MAX};

pub use cifar::{cifar_cdf_eval, CifarCdf, CifarFitParams};
pub use expbeta::{fit_density_eval, normalize_fit, ExpBeta, FitParams};
pub use spec::{Family, ModelSpec};
pub use toy::{toy_binned_joint, toy_cdf, toy_mutual_info, toy_w, Class};

/// Density of `W` given one class.
#[derive(Clone, Debug, PartialEq)]
pub enum ClassDensity {
    /// The exact toy model's class-conditional density.
    Toy(Class),
    ExpBeta(ExpBeta),
    Cifar(CifarCdf),
}

impl ClassDensity {
    pub fn pdf(&self, u: Unit) -> f64 {
        match self {
            ClassDensity::Toy(y) => 2.0 * toy::toy_pdf_unit(u, *y),
            ClassDensity::ExpBeta(e) => e.pdf(u),
            ClassDensity::Cifar(c) => c.pdf(u),
        }
    }

    pub fn cdf(&self, u: Unit) -> f64 {
        match self {
            ClassDensity::Toy(y) => 2.0 * toy::toy_cdf_unit(u, *y),
            ClassDensity::ExpBeta(e) => e.cdf(u),
            ClassDensity::Cifar(c) => c.cdf(u),
        }
    }

    /// `1 - cdf`, computed without cancellation where the family allows it.
    pub fn ccdf(&self, u: Unit) -> f64 {
        match self {
            ClassDensity::Toy(y) => 2.0 * toy::toy_ccdf_unit(u, *y),
            ClassDensity::ExpBeta(e) => e.ccdf(u),
            ClassDensity::Cifar(c) => c.ccdf(u),
        }
    }

    /// Probability of `[a, b)`, differencing on whichever side of 1/2 is
    /// better conditioned.
    pub fn mass_between(&self, a: Unit, b: Unit) -> f64 {
        if b.w <= 0.5 {
            self.cdf(b) - self.cdf(a)
        } else if a.w >= 0.5 {
            self.ccdf(a) - self.ccdf(b)
        } else {
            (self.cdf(Unit::HALF) - self.cdf(a)) + (self.ccdf(Unit::HALF) - self.ccdf(b))
        }
    }
}

/// Two class densities and the prior `P(Y = 1)`, in either the native `w`
/// coordinate or the uniformized `u = F(w)` coordinate.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassConditionalModel {
    f1: ClassDensity,
    f2: ClassDensity,
    prior: f64,
    uniform: bool,
}

impl ClassConditionalModel {
    pub fn new(f1: ClassDensity, f2: ClassDensity, prior: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&prior) {
            return Err(Error::InvalidParameter(format!("prior {prior} outside [0, 1]")));
        }
        Ok(Self { f1, f2, prior, uniform: false })
    }

    /// The exact toy model, prior 1/2.
    pub fn toy() -> Self {
        Self {
            f1: ClassDensity::Toy(Class::One),
            f2: ClassDensity::Toy(Class::Two),
            prior: 0.5,
            uniform: false,
        }
    }

    pub fn prior(&self) -> f64 {
        self.prior
    }

    pub fn density(&self, y: Class) -> &ClassDensity {
        match y {
            Class::One => &self.f1,
            Class::Two => &self.f2,
        }
    }

    pub fn is_uniformized(&self) -> bool {
        self.uniform
    }

    /// The same model seen through `u = F(w)`. Idempotent.
    pub fn uniformize(&self) -> Self {
        Self { uniform: true, ..self.clone() }
    }

    pub fn native_cdf(&self, u: Unit) -> f64 {
        self.prior * self.f1.cdf(u) + (1.0 - self.prior) * self.f2.cdf(u)
    }

    pub fn native_ccdf(&self, u: Unit) -> f64 {
        self.prior * self.f1.ccdf(u) + (1.0 - self.prior) * self.f2.ccdf(u)
    }

    /// Prior-weighted class densities `(π f1, (1 - π) f2)` at a native point.
    pub fn native_joint_pdf(&self, u: Unit) -> [f64; 2] {
        [self.prior * self.f1.pdf(u), (1.0 - self.prior) * self.f2.pdf(u)]
    }

    pub fn native_p1(&self, u: Unit) -> Result<f64> {
        let [g1, g2] = self.native_joint_pdf(u);
        let f = g1 + g2;
        if !(f > 0.0) || !f.is_finite() {
            if f.is_infinite() && g1.is_finite() {
                return Ok(0.0);
            }
            if f.is_infinite() && g2.is_finite() {
                return Ok(1.0);
            }
            return Err(Error::UndefinedConditional(u.w));
        }
        Ok((g1 / f).clamp(0.0, 1.0))
    }

    /// Native point with marginal CDF `q`.
    pub fn quantile(&self, q: f64) -> Result<Unit> {
        if q <= 0.0 {
            return Ok(Unit::ZERO);
        }
        if q >= 1.0 {
            return Ok(Unit::ONE);
        }
        let t = if q <= 0.5 {
            brent(|t| self.native_cdf(Unit::from_logit(t)) - q, -LOGIT_MAX, LOGIT_MAX, 1e-13)?
        } else {
            let r = 1.0 - q;
            brent(|t| r - self.native_ccdf(Unit::from_logit(t)), -LOGIT_MAX, LOGIT_MAX, 1e-13)?
        };
        Ok(Unit::from_logit(t))
    }

    /// Map a coordinate value of this model to a native point.
    pub fn to_native(&self, x: f64) -> Result<Unit> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::InvalidParameter(format!("coordinate {x} outside [0, 1]")));
        }
        if self.uniform {
            self.quantile(x)
        } else {
            Ok(Unit::from_w(x))
        }
    }

    /// `P(Y = 1 | coordinate = x)`.
    pub fn conditional_prob(&self, x: f64) -> Result<f64> {
        self.native_p1(self.to_native(x)?)
    }

    /// Joint masses `[P(a <= W < b, Y = 1), P(a <= W < b, Y = 2)]`.
    pub fn class_masses(&self, a: Unit, b: Unit) -> [f64; 2] {
        [
            self.prior * self.f1.mass_between(a, b),
            (1.0 - self.prior) * self.f2.mass_between(a, b),
        ]
    }

    /// `P(X < x, Y = y)` in this model's coordinate.
    pub fn joint_cdf(&self, x: f64, y: Class) -> Result<f64> {
        let u = self.to_native(x)?;
        Ok(match y {
            Class::One => self.prior * self.f1.cdf(u),
            Class::Two => (1.0 - self.prior) * self.f2.cdf(u),
        })
    }

    /// `I(W, Y)` by quadrature. Uniformization does not change it.
    pub fn mutual_info(&self) -> Result<f64> {
        let hy = h(self.prior) + h(1.0 - self.prior);
        let hyw = integrate_unit(
            |u| {
                let [g1, g2] = self.native_joint_pdf(u);
                let f = g1 + g2;
                if !(f > 0.0) || !f.is_finite() {
                    return 0.0;
                }
                f * (h(g1 / f) + h(g2 / f))
            },
            Tol { abs: 1e-13, rel: 1e-12, max_intervals: 8000 },
        )?;
        Ok((hy - hyw).max(0.0))
    }
}

/// Free-function form of [`ClassConditionalModel::conditional_prob`].
pub fn conditional_prob(m: &ClassConditionalModel, x: f64) -> Result<f64> {
    m.conditional_prob(x)
}
