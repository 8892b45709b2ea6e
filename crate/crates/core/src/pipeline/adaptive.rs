use std::f64::consts::E;

use crate::error::{Error, Result};
use crate::info::{h, DiscreteJoint};
use crate::models::ClassConditionalModel;
use crate::quad::brent;
use crate::unit::{Unit, LOGIT_MAX};

/// `h(x)` below `1/e`, reflected upward above it so the result is increasing.
fn h_star(x: f64) -> f64 {
    if x < 1.0 / E {
        h(x)
    } else {
        2.0 * h(1.0 / E) - h(x)
    }
}

fn h_plus(m: &ClassConditionalModel, t: f64) -> Result<f64> {
    let p = m.native_p1(Unit::from_logit(t))?;
    Ok(h_star(p) - h_star(1.0 - p))
}

/// Outermost logit on the `edge` side where `p1` is defined. Densities can
/// underflow together near the ends of the range.
fn defined_edge(m: &ClassConditionalModel, edge: f64) -> Result<f64> {
    if h_plus(m, edge).is_ok() {
        return Ok(edge);
    }
    h_plus(m, 0.0)?;
    let (mut inner, mut outer) = (0.0, edge);
    for _ in 0..80 {
        let mid = 0.5 * (inner + outer);
        if h_plus(m, mid).is_ok() {
            inner = mid;
        } else {
            outer = mid;
        }
    }
    Ok(inner)
}

/// `N - 1` boundaries, in the model's coordinate, that split the range of
/// `h*(p1) - h*(1 - p1)` into equal steps. `p1` must be monotone. A constant
/// `p1` falls back to equal-width bins.
pub fn adaptive_bin_placement(m: &ClassConditionalModel, n: usize) -> Result<Vec<f64>> {
    if n < 1 {
        return Err(Error::InvalidParameter("need N >= 1".into()));
    }
    let t_lo = defined_edge(m, -LOGIT_MAX)?;
    let t_hi = defined_edge(m, LOGIT_MAX)?;
    let lo = h_plus(m, t_lo)?;
    let hi = h_plus(m, t_hi)?;
    if (hi - lo).abs() < 1e-14 {
        return Ok((1..n).map(|i| i as f64 / n as f64).collect());
    }
    let mut out = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let level = lo + (hi - lo) * i as f64 / n as f64;
        let mut failure = None;
        let t = brent(
            |t| match h_plus(m, t) {
                Ok(v) => v - level,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::NAN
                }
            },
            t_lo,
            t_hi,
            1e-12,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let u = Unit::from_logit(t.map_err(|e| Error::Numeric(format!("boundary {i}: {e}")))?);
        out.push(if m.is_uniformized() { m.native_cdf(u) } else { u.w });
    }
    Ok(out)
}

/// Joint of `Y` and the bin of `W` for boundaries in the model's coordinate.
pub fn binned_joint(m: &ClassConditionalModel, boundaries: &[f64]) -> Result<DiscreteJoint> {
    let mut pts = vec![Unit::ZERO];
    for (k, &b) in boundaries.iter().enumerate() {
        if !(0.0..=1.0).contains(&b) || (k > 0 && b < boundaries[k - 1]) {
            return Err(Error::InvalidBinning(format!("boundary {k} = {b}")));
        }
        pts.push(m.to_native(b)?);
    }
    pts.push(Unit::ONE);
    DiscreteJoint::new(pts.windows(2).map(|p| m.class_masses(p[0], p[1])).collect())
}
