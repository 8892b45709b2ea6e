use crate::error::{Error, Result};
use crate::info::DiscreteJoint;

/// Move class-1 mass `eps` from the row with the smaller `P(Y=1|row)` to the
/// other and class-2 mass `eps` the opposite way. Row and column marginals are
/// unchanged and the two conditionals move apart for `eps > 0` (together for
/// `eps < 0`).
pub fn swap_step(j: &DiscreteJoint, k: usize, l: usize, eps: f64) -> Result<DiscreteJoint> {
    let rows = j.rows();
    if k >= rows.len() || l >= rows.len() || k == l {
        return Err(Error::InvalidParameter(format!("rows {k}, {l} of {}", rows.len())));
    }
    let (pk, pl) = match (j.conditional(k), j.conditional(l)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NoGain),
    };
    if pk == pl {
        return Err(Error::NoGain);
    }
    let (lo, hi) = if pk < pl { (k, l) } else { (l, k) };
    let mut out = rows.to_vec();
    out[lo][0] -= eps;
    out[lo][1] += eps;
    out[hi][0] += eps;
    out[hi][1] -= eps;
    if [out[lo][0], out[lo][1], out[hi][0], out[hi][1]].iter().any(|&x| x < 0.0) {
        return Err(Error::Negativity);
    }
    Ok(DiscreteJoint::from_rows_unchecked(out))
}

/// `dI/d eps` at zero for [`swap_step`]: `log2[(1/p_lo - 1) / (1/p_hi - 1)]`.
pub fn swap_derivative(j: &DiscreteJoint, k: usize, l: usize) -> Result<f64> {
    let (pk, pl) = match (j.conditional(k), j.conditional(l)) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::NoGain),
    };
    if pk == pl {
        return Err(Error::NoGain);
    }
    let (lo, hi) = if pk < pl { (pk, pl) } else { (pl, pk) };
    Ok(((1.0 / lo - 1.0) / (1.0 / hi - 1.0)).log2())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_step_is_identity() {
        let j = DiscreteJoint::new(vec![[0.1, 0.3], [0.4, 0.2]]).unwrap();
        assert_eq!(swap_step(&j, 0, 1, 0.0).unwrap(), j);
    }

    #[test]
    fn errors() {
        let j = DiscreteJoint::new(vec![[0.1, 0.3], [0.4, 0.2]]).unwrap();
        assert!(matches!(swap_step(&j, 0, 1, 0.2), Err(Error::Negativity)));
        let flat = DiscreteJoint::new(vec![[0.25, 0.25], [0.25, 0.25]]).unwrap();
        assert!(matches!(swap_step(&flat, 0, 1, 0.01), Err(Error::NoGain)));
    }
}
