//! Closed-form two-class toy model: `X` uniform on the unit square,
//! `P(Y = 1 | X) = 2 x1 x2` relative to `2 (1 - x1)(1 - x2)`.

use std::f64::consts::{LN_2, PI};

use crate::error::{Error, Result};
use crate::info::DiscreteJoint;
use crate::unit::Unit;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Class {
    One,
    Two,
}

impl Class {
    pub fn from_label(y: i64) -> Option<Class> {
        match y {
            1 => Some(Class::One),
            2 => Some(Class::Two),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Class::One => 0,
            Class::Two => 1,
        }
    }
}

/// The likelihood `P(Y = 1 | X = (x1, x2))`.
pub fn toy_w(x1: f64, x2: f64) -> f64 {
    let n = x1 * x2;
    let d = n + (1.0 - x1) * (1.0 - x2);
    if d == 0.0 {
        0.5
    } else {
        n / d
    }
}

/// Taylor coefficients of `P(W < w, Y = 1)` in `e = w - 1/2`.
const SERIES: [f64; 14] = [
    1.0 / 12.0,
    4.0 / 15.0,
    4.0 / 15.0,
    32.0 / 105.0,
    16.0 / 35.0,
    64.0 / 105.0,
    64.0 / 63.0,
    1024.0 / 693.0,
    256.0 / 99.0,
    5120.0 / 1287.0,
    1024.0 / 143.0,
    8192.0 / 715.0,
    4096.0 / 195.0,
    114688.0 / 3315.0,
];
const SERIES_RADIUS: f64 = 0.05;

fn series(e: f64) -> f64 {
    SERIES.iter().rev().fold(0.0, |acc, &c| acc * e + c)
}

fn series_deriv(e: f64) -> f64 {
    SERIES
        .iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(0.0, |acc, (k, &c)| acc * e + k as f64 * c)
}

/// `P(W < w, Y = 1)`.
pub(crate) fn joint_cdf1(u: Unit) -> f64 {
    let (w, wc) = (u.w, u.wc);
    if w <= 0.0 {
        return 0.0;
    }
    if wc <= 0.0 {
        return 0.5;
    }
    let e = 0.5 * (w - wc);
    if e.abs() < SERIES_RADIUS {
        return series(e);
    }
    let d = w - wc; // 2w - 1
    let l = wc.ln() - w.ln();
    let n = d * (5.0 - 4.0 * w) + 2.0 * wc * (1.0 + w) * l;
    w * w * n / (2.0 * d.powi(4))
}

/// `d/dw P(W < w, Y = 1)`.
pub(crate) fn joint_pdf1(u: Unit) -> f64 {
    let (w, wc) = (u.w, u.wc);
    if w <= 0.0 {
        return 0.0;
    }
    if wc <= 0.0 {
        return f64::INFINITY;
    }
    let e = 0.5 * (w - wc);
    if e.abs() < SERIES_RADIUS {
        return series_deriv(e);
    }
    let d = w - wc;
    let l = wc.ln() - w.ln();
    let n = d * (5.0 - 4.0 * w) + 2.0 * wc * (1.0 + w) * l;
    let dn = 12.0 - 16.0 * w - 2.0 / w - 4.0 * w * l;
    ((2.0 * w * n + w * w * dn) * d - 8.0 * w * w * n) / (2.0 * d.powi(5))
}

/// `F_y(w) = P(W < w, Y = y)` at a precise unit point.
pub fn toy_cdf_unit(u: Unit, y: Class) -> f64 {
    match y {
        Class::One => joint_cdf1(u),
        Class::Two => 0.5 - joint_cdf1(u.reflect()),
    }
}

/// `P(W >= w, Y = y)`.
pub fn toy_ccdf_unit(u: Unit, y: Class) -> f64 {
    match y {
        Class::One => 0.5 - joint_cdf1(u),
        Class::Two => joint_cdf1(u.reflect()),
    }
}

/// Joint density `d/dw F_y(w)`.
pub fn toy_pdf_unit(u: Unit, y: Class) -> f64 {
    match y {
        Class::One => joint_pdf1(u),
        Class::Two => joint_pdf1(u.reflect()),
    }
}

pub fn toy_cdf(w: f64, y: Class) -> Result<f64> {
    if !(0.0..=1.0).contains(&w) {
        return Err(Error::InvalidParameter(format!("w = {w} outside [0, 1]")));
    }
    Ok(toy_cdf_unit(Unit::from_w(w), y))
}

/// `I(X, Y) = I(W, Y)` in closed form.
pub fn toy_mutual_info() -> f64 {
    1.0 - (PI * PI - 4.0) / (16.0 * LN_2)
}

/// Joint of `Y` and the bin index for boundaries `0 < b_1 < ... < 1`.
pub fn toy_binned_joint(b: &[f64]) -> Result<DiscreteJoint> {
    let mut edges = Vec::with_capacity(b.len() + 2);
    edges.push(0.0);
    for (k, &x) in b.iter().enumerate() {
        if !(x > 0.0 && x < 1.0) || x <= *edges.last().unwrap() {
            return Err(Error::InvalidBinning(format!("boundary {k} = {x}")));
        }
        edges.push(x);
    }
    edges.push(1.0);
    let rows = edges
        .windows(2)
        .map(|e| {
            let (lo, hi) = (Unit::from_w(e[0]), Unit::from_w(e[1]));
            [
                toy_cdf_unit(hi, Class::One) - toy_cdf_unit(lo, Class::One),
                toy_cdf_unit(hi, Class::Two) - toy_cdf_unit(lo, Class::Two),
            ]
        })
        .collect();
    DiscreteJoint::new(rows)
}
