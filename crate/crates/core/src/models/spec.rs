//! TOML model-spec files.
//!
//! ```toml
//! family = "expbeta"      # analytic | expbeta | cifarcdf
//! prior = 0.5             # optional, P(Y = 1)
//! degree = 4              # expbeta only, optional check on coefficient count
//!
//! [class1]
//! coefficients = [0.0668, -4.7685, 16.8993, -25.0849, 13.758, 0.5797, -0.27]
//!
//! [class2]
//! coefficients = [...]
//! ```
//!
//! `cifarcdf` classes carry `branch_a` (6 numbers), `branch_b` (5) and an
//! optional `reflect = true`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CifarCdf, CifarFitParams, ClassConditionalModel, ClassDensity, ExpBeta, FitParams};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Analytic,
    Expbeta,
    Cifarcdf,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassSpec {
    pub coefficients: Option<Vec<f64>>,
    pub branch_a: Option<Vec<f64>>,
    pub branch_b: Option<Vec<f64>>,
    pub reflect: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    pub family: Family,
    pub name: Option<String>,
    pub prior: Option<f64>,
    pub degree: Option<usize>,
    #[serde(default)]
    pub class1: ClassSpec,
    #[serde(default)]
    pub class2: ClassSpec,
}

/// What loading changed: the `a_0` shift applied to each expbeta class.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct LoadReport {
    pub a0_correction: Option<[f64; 2]>,
}

impl ModelSpec {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Spec(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    fn expbeta(&self, c: &ClassSpec, label: &str) -> Result<ExpBeta> {
        let coeffs = c
            .coefficients
            .clone()
            .ok_or_else(|| Error::Spec(format!("{label}: missing `coefficients`")))?;
        if let Some(d) = self.degree {
            if coeffs.len() != d + 3 {
                return Err(Error::Spec(format!(
                    "{label}: degree {d} needs {} coefficients, got {}",
                    d + 3,
                    coeffs.len()
                )));
            }
        }
        ExpBeta::new(FitParams::new(coeffs)?)
    }

    fn cifar(c: &ClassSpec, label: &str) -> Result<CifarCdf> {
        let get = |v: &Option<Vec<f64>>, k: &str| {
            v.clone().ok_or_else(|| Error::Spec(format!("{label}: missing `{k}`")))
        };
        CifarCdf::new(CifarFitParams {
            branch_a: get(&c.branch_a, "branch_a")?,
            branch_b: get(&c.branch_b, "branch_b")?,
            reflect: c.reflect.unwrap_or(false),
        })
    }

    /// Build the model. Expbeta coefficients are renormalized; the shift is
    /// reported rather than silently absorbed.
    pub fn build(&self) -> Result<(ClassConditionalModel, LoadReport)> {
        let prior = self.prior.unwrap_or(0.5);
        let mut report = LoadReport::default();
        let model = match self.family {
            Family::Analytic => {
                if self.prior.is_some_and(|p| p != 0.5) {
                    return Err(Error::Spec("the analytic model has prior 1/2".into()));
                }
                ClassConditionalModel::toy()
            }
            Family::Expbeta => {
                let e1 = self.expbeta(&self.class1, "class1")?;
                let e2 = self.expbeta(&self.class2, "class2")?;
                report.a0_correction = Some([-e1.raw_integral().ln(), -e2.raw_integral().ln()]);
                ClassConditionalModel::new(ClassDensity::ExpBeta(e1), ClassDensity::ExpBeta(e2), prior)?
            }
            Family::Cifarcdf => ClassConditionalModel::new(
                ClassDensity::Cifar(Self::cifar(&self.class1, "class1")?),
                ClassDensity::Cifar(Self::cifar(&self.class2, "class2")?),
                prior,
            )?,
        };
        Ok((model, report))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_analytic() {
        let s = ModelSpec::parse("family = \"analytic\"\n").unwrap();
        let (m, r) = s.build().unwrap();
        assert_eq!(m, ClassConditionalModel::toy());
        assert_eq!(r.a0_correction, None);
    }

    #[test]
    fn rejects_unknown_family_and_keys() {
        assert!(ModelSpec::parse("family = \"gauss\"\n").is_err());
        assert!(ModelSpec::parse("family = \"analytic\"\nfoo = 1\n").is_err());
    }

    #[test]
    fn degree_mismatch() {
        let s = ModelSpec::parse(
            "family = \"expbeta\"\ndegree = 2\n[class1]\ncoefficients=[0,0,0]\n[class2]\ncoefficients=[0,0,0]\n",
        )
        .unwrap();
        assert!(matches!(s.build(), Err(Error::Spec(_))));
    }
}
