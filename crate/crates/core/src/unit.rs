//! Points of the unit interval carried as `(w, 1 - w)` so that both ends keep
//! full relative precision. Densities that pile up within 1e-60 of 0 or 1
//! are common for confident classifiers.

/// Largest logit magnitude used; `exp(-745)` is the smallest subnormal.
pub const LOGIT_MAX: f64 = 745.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Unit {
    pub w: f64,
    pub wc: f64,
}

impl Unit {
    pub const ZERO: Unit = Unit { w: 0.0, wc: 1.0 };
    pub const ONE: Unit = Unit { w: 1.0, wc: 0.0 };
    pub const HALF: Unit = Unit { w: 0.5, wc: 0.5 };

    pub fn from_w(w: f64) -> Self {
        Unit { w, wc: 1.0 - w }
    }

    pub fn from_logit(t: f64) -> Self {
        if t >= 0.0 {
            let e = (-t).exp();
            Unit { w: 1.0 / (1.0 + e), wc: e / (1.0 + e) }
        } else {
            let e = t.exp();
            Unit { w: e / (1.0 + e), wc: 1.0 / (1.0 + e) }
        }
    }

    pub fn logit(&self) -> f64 {
        if self.w <= 0.0 {
            f64::NEG_INFINITY
        } else if self.wc <= 0.0 {
            f64::INFINITY
        } else {
            (self.w / self.wc).ln()
        }
    }

    /// The mirror point `1 - w`.
    pub fn reflect(self) -> Self {
        Unit { w: self.wc, wc: self.w }
    }

    pub fn is_interior(&self) -> bool {
        self.w > 0.0 && self.wc > 0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logit_round_trip() {
        for &t in &[-700.0, -30.0, -1.0, 0.0, 0.3, 40.0, 700.0] {
            let u = Unit::from_logit(t);
            assert!((u.logit() - t).abs() <= 1e-12 * t.abs().max(1.0));
            assert!((u.w + u.wc - 1.0).abs() < 1e-15);
        }
        let tiny = Unit::from_logit(-300.0);
        assert!(tiny.w > 0.0 && tiny.w < 1e-120);
        assert_eq!(tiny.reflect().wc, tiny.w);
    }
}
