//! Information bounds, bloat/loss diagnostics and the independent-bit code.

use crate::error::{Error, Result};
use crate::frontier::ParetoPoint;
use crate::info::{entropy, h2, ProbVector};

/// Smallest `I(Z,Y)` compatible with binary error rate `eps` under a uniform
/// prior: `1 + eps log2 eps + (1 - eps) log2 (1 - eps)`.
pub fn fano_bound(eps: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&eps) {
        return Err(Error::InvalidParameter(format!("error rate {eps} outside [0, 1]")));
    }
    Ok((1.0 - h2(eps)).max(0.0))
}

/// `max(0, H(Y) - mean_loss)`, with the loss a cross-entropy in bits.
pub fn info_lower_bound(h_y: f64, mean_loss: f64) -> Result<f64> {
    if !(mean_loss >= 0.0) || !h_y.is_finite() {
        return Err(Error::InvalidParameter(format!("mean loss {mean_loss}, H(Y) {h_y}")));
    }
    Ok((h_y - mean_loss).max(0.0))
}

/// `(H - I, I_XY - I)`: bits stored without class information, and class
/// information discarded. Returned unclamped so that the two add back to
/// the inputs.
pub fn bloat_and_loss(point: &ParetoPoint, i_xy: f64) -> Result<(f64, f64)> {
    const SLACK: f64 = 1e-9;
    if !(point.h >= point.i - SLACK && point.i >= -SLACK) {
        return Err(Error::Inconsistent(format!("point has H = {} and I = {}", point.h, point.i)));
    }
    if !(i_xy >= point.i - SLACK) {
        return Err(Error::Inconsistent(format!("I(X,Y) = {i_xy} below I(Z,Y) = {}", point.i)));
    }
    Ok((point.h - point.i, i_xy - point.i))
}

/// Bernoulli parameters `q_k = P(B_k = 1)`, `k = 1..m-1`, of independent bits
/// whose decoded value has the encoded distribution.
#[derive(Clone, Debug, PartialEq)]
pub struct BitCode {
    pub q: Vec<f64>,
}

impl BitCode {
    pub fn new(q: Vec<f64>) -> Result<Self> {
        if let Some(k) = q.iter().position(|x| !(0.0..=1.0).contains(x)) {
            return Err(Error::InvalidParameter(format!("bit {} has probability {}", k + 1, q[k])));
        }
        Ok(BitCode { q })
    }

    /// Alphabet size `m`.
    pub fn symbols(&self) -> usize {
        self.q.len() + 1
    }

    /// Probability of a bit string under independent bits.
    pub fn string_probability(&self, bits: &[bool]) -> f64 {
        self.q.iter().zip(bits).map(|(&q, &b)| if b { q } else { 1.0 - q }).product()
    }

    /// `P(Z = z)` for `z = 1..m`: bit `z - 1` set and all later bits clear.
    pub fn distribution(&self) -> Vec<f64> {
        let m = self.symbols();
        let mut p = vec![0.0; m];
        let mut tail = 1.0;
        for z in (1..=m).rev() {
            if z == 1 {
                p[0] = tail;
            } else {
                p[z - 1] = self.q[z - 2] * tail;
                tail *= 1.0 - self.q[z - 2];
            }
        }
        p
    }

    /// Total entropy of the bits.
    pub fn entropy(&self) -> f64 {
        self.q.iter().map(|&q| h2(q)).sum()
    }
}

/// `q_k = P(Z = k+1) / P(Z <= k+1)`, or 0 when the denominator vanishes.
pub fn bits_encode(p: &ProbVector) -> BitCode {
    let p = p.as_slice();
    let mut q = Vec::with_capacity(p.len().saturating_sub(1));
    let mut cum = p[0];
    for &x in &p[1..] {
        cum += x;
        q.push(if cum > 0.0 { (x / cum).min(1.0) } else { 0.0 });
    }
    BitCode { q }
}

/// Position (1-based) of the last one in `1 b_1 b_2 ... b_{m-1}`.
pub fn bits_decode(bits: &[bool]) -> usize {
    bits.iter().rposition(|&b| b).map_or(1, |k| k + 2)
}

/// `sum_k h2(q_k) - H(p)`, the extra entropy of the bit representation.
pub fn bitcode_bloat(p: &ProbVector) -> f64 {
    bits_encode(p).entropy() - entropy(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frontier::Provenance;

    #[test]
    fn fano_values() {
        assert_eq!(fano_bound(0.0).unwrap(), 1.0);
        assert_eq!(fano_bound(0.5).unwrap(), 0.0);
        assert!((fano_bound(0.01).unwrap() - 0.919207).abs() < 1e-6);
        assert!((fano_bound(0.3).unwrap() - fano_bound(0.7).unwrap()).abs() < 1e-15);
        assert!(fano_bound(1.5).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(info_lower_bound(1.0, 1.0).unwrap(), 0.0);
        assert!((info_lower_bound(1.0, 0.53).unwrap() - 0.47).abs() < 1e-15);
        assert_eq!(info_lower_bound(1.0, 1.7).unwrap(), 0.0);
        assert!(info_lower_bound(1.0, -0.1).is_err());
    }

    #[test]
    fn bloat_loss() {
        let origin = ParetoPoint::origin(Provenance::Corner);
        assert_eq!(bloat_and_loss(&origin, 0.47).unwrap(), (0.0, 0.47));
        let p = ParetoPoint { h: 0.6, i: 0.6, ..origin.clone() };
        assert_eq!(bloat_and_loss(&p, 0.9).unwrap().0, 0.0);
        assert!(bloat_and_loss(&p, 0.5).is_err());
    }

    #[test]
    fn encode_examples() {
        let u = ProbVector::new(vec![0.25; 4]).unwrap();
        let c = bits_encode(&u);
        assert_eq!(c.q[0], 0.5);
        assert!((c.q[1] - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(c.q[2], 0.25);
        let point = ProbVector::new(vec![1.0, 0.0, 0.0]).unwrap();
        assert_eq!(bits_encode(&point).q, vec![0.0, 0.0]);
    }

    #[test]
    fn decode_examples() {
        let b = |s: &str| s.chars().map(|c| c == '1').collect::<Vec<_>>();
        assert_eq!(bits_decode(&b("001")), 4);
        assert_eq!(bits_decode(&b("101")), 4);
        assert_eq!(bits_decode(&b("010")), 3);
        assert_eq!(bits_decode(&b("110")), 3);
        assert_eq!(bits_decode(&b("100")), 2);
        assert_eq!(bits_decode(&b("000")), 1);
        assert_eq!(bits_decode(&b("1111111")), 8);
    }
}
