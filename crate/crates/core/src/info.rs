//! Discrete information measures in bits.

use crate::error::{Error, Result};

/// Absolute tolerance on the total mass of a distribution.
pub const PROB_TOL: f64 = 1e-9;

/// `-x log2 x` with `0 log 0 = 0`.
#[inline]
pub fn h(x: f64) -> f64 {
    if x > 0.0 {
        -x * x.log2()
    } else {
        0.0
    }
}

/// Binary entropy in bits.
#[inline]
pub fn h2(p: f64) -> f64 {
    h(p) + h(1.0 - p)
}

/// Conditional-entropy contribution `P * h2(Q/P)` of a group with mass `p`
/// and class-1 mass `q`, written without the division.
#[inline]
pub(crate) fn group_cost(p: f64, q: f64) -> f64 {
    let r = (p - q).max(0.0);
    let q = q.clamp(0.0, p.max(0.0));
    h(q) + h(r) - h(p)
}

fn check_entries(v: &[f64]) -> Result<f64> {
    let mut s = 0.0;
    for (k, &x) in v.iter().enumerate() {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::InvalidDistribution(format!("entry {k} = {x}")));
        }
        s += x;
    }
    Ok(s)
}

/// A probability vector: non-negative entries summing to one within [`PROB_TOL`].
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if p.is_empty() {
            return Err(Error::InvalidDistribution("empty vector".into()));
        }
        let s = check_entries(&p)?;
        if (s - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!("sum = {s}")));
        }
        Ok(Self(p))
    }

    /// Divide by the total. The caller opts into this explicitly.
    pub fn normalized(p: Vec<f64>) -> Result<Self> {
        let s = check_entries(&p)?;
        if s <= 0.0 {
            return Err(Error::InvalidDistribution("zero total mass".into()));
        }
        Self::new(p.into_iter().map(|x| x / s).collect())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

/// Joint distribution `P(Z = i, Y = j)` with two label columns.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscreteJoint {
    rows: Vec<[f64; 2]>,
}

impl DiscreteJoint {
    pub fn new(rows: Vec<[f64; 2]>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::InvalidDistribution("joint has no rows".into()));
        }
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        let s = check_entries(&flat)?;
        if (s - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!("joint sums to {s}")));
        }
        Ok(Self { rows })
    }

    pub fn normalized(rows: Vec<[f64; 2]>) -> Result<Self> {
        let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        let s = check_entries(&flat)?;
        if s <= 0.0 {
            return Err(Error::InvalidDistribution("zero total mass".into()));
        }
        Self::new(rows.into_iter().map(|[a, b]| [a / s, b / s]).collect())
    }

    /// Build from a `2 x M` layout (rows indexed by `Y`).
    pub fn from_label_rows(y1: &[f64], y2: &[f64]) -> Result<Self> {
        if y1.len() != y2.len() {
            return Err(Error::InvalidDistribution("label rows differ in length".into()));
        }
        Self::new(y1.iter().zip(y2).map(|(&a, &b)| [a, b]).collect())
    }

    pub(crate) fn from_rows_unchecked(rows: Vec<[f64; 2]>) -> Self {
        Self { rows }
    }

    pub fn rows(&self) -> &[[f64; 2]] {
        &self.rows
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn row_marginal(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0] + r[1]).collect()
    }

    pub fn col_marginal(&self) -> [f64; 2] {
        self.rows
            .iter()
            .fold([0.0, 0.0], |acc, r| [acc[0] + r[0], acc[1] + r[1]])
    }

    /// `P(Y = 1 | Z = i)`, `None` for an empty row.
    pub fn conditional(&self, i: usize) -> Option<f64> {
        let [a, b] = self.rows[i];
        let p = a + b;
        (p > 0.0).then(|| a / p)
    }
}

pub(crate) fn entropy_of(p: &[f64]) -> f64 {
    p.iter().map(|&x| h(x)).sum()
}

pub fn entropy(p: &ProbVector) -> f64 {
    entropy_of(&p.0).max(0.0)
}

/// `H(Z) + H(Y) - H(Z, Y)`, clamped at zero.
pub fn mutual_info(j: &DiscreteJoint) -> f64 {
    let hz = entropy_of(&j.row_marginal());
    let hy = entropy_of(&j.col_marginal());
    let hzy: f64 = j.rows.iter().map(|r| h(r[0]) + h(r[1])).sum();
    (hz + hy - hzy).max(0.0)
}

/// Double-sum form `sum P_ij log(P_ij / (P_i P^Y_j))`. Kept as a cross-check.
pub fn mutual_info_kl(j: &DiscreteJoint) -> f64 {
    let col = j.col_marginal();
    let mut s = 0.0;
    for r in &j.rows {
        let pi = r[0] + r[1];
        for c in 0..2 {
            if r[c] > 0.0 {
                s += r[c] * (r[c] / (pi * col[c])).log2();
            }
        }
    }
    s
}

/// `H(Y | Z)`.
pub fn conditional_entropy(j: &DiscreteJoint) -> f64 {
    let hzy: f64 = j.rows.iter().map(|r| h(r[0]) + h(r[1])).sum();
    (hzy - entropy_of(&j.row_marginal())).max(0.0)
}

pub fn kl_divergence(p: &ProbVector, q: &ProbVector) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DivergenceUndefined(format!(
            "length mismatch {} vs {}",
            p.len(),
            q.len()
        )));
    }
    let mut s = 0.0;
    for (k, (&a, &b)) in p.0.iter().zip(&q.0).enumerate() {
        if a == 0.0 {
            continue;
        }
        if b == 0.0 {
            return Err(Error::DivergenceUndefined(format!(
                "q[{k}] = 0 where p[{k}] = {a}"
            )));
        }
        s += a * (a / b).log2();
    }
    Ok(s.max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pv(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn entropy_examples() {
        assert_eq!(entropy(&pv(&[0.5, 0.5])), 1.0);
        assert_eq!(entropy(&pv(&[1.0, 0.0])), 0.0);
        assert_eq!(entropy(&pv(&[0.25; 4])), 2.0);
    }

    #[test]
    fn rejects_bad_vectors() {
        assert!(ProbVector::new(vec![0.5, 0.6]).is_err());
        assert!(ProbVector::new(vec![1.5, -0.5]).is_err());
        assert!(ProbVector::new(vec![0.5, 0.5 + 5e-10]).is_ok());
        assert!(DiscreteJoint::new(vec![[0.5, 0.5], [0.1, 0.0]]).is_err());
    }

    #[test]
    fn conditional_entropy_examples() {
        let sep = DiscreteJoint::new(vec![[0.5, 0.0], [0.0, 0.5]]).unwrap();
        assert_eq!(conditional_entropy(&sep), 0.0);
        let ind = DiscreteJoint::new(vec![[0.25, 0.25], [0.25, 0.25]]).unwrap();
        assert!((conditional_entropy(&ind) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn kl_examples() {
        assert_eq!(kl_divergence(&pv(&[0.4, 0.6]), &pv(&[0.4, 0.6])).unwrap(), 0.0);
        assert!((kl_divergence(&pv(&[1.0, 0.0]), &pv(&[0.5, 0.5])).unwrap() - 1.0).abs() < 1e-15);
        // 0.75 log2 1.5 + 0.25 log2 0.5
        let want = 0.75 * 1.5f64.log2() - 0.25;
        let got = kl_divergence(&pv(&[0.75, 0.25]), &pv(&[0.5, 0.5])).unwrap();
        assert!((got - want).abs() < 1e-15);
        assert!((got - 0.18872).abs() < 1e-5);
        assert!(matches!(
            kl_divergence(&pv(&[0.5, 0.5]), &pv(&[1.0, 0.0])),
            Err(Error::DivergenceUndefined(_))
        ));
    }

    #[test]
    fn group_cost_matches_binary_entropy() {
        let (p, q) = (0.3, 0.1);
        assert!((group_cost(p, q) - p * h2(q / p)).abs() < 1e-15);
        assert_eq!(group_cost(0.0, 0.0), 0.0);
    }
}
