use crate::pipeline::MicroBinModel;

/// Cumulative mass and class-1 mass, linearly interpolated inside micro-bins.
#[derive(Clone, Debug)]
pub(crate) struct Prefix {
    pub n: usize,
    pub cm: Vec<f64>,
    pub cq: Vec<f64>,
    pub mass: Vec<f64>,
    pub q: Vec<f64>,
}

impl Prefix {
    pub fn new(m: &MicroBinModel) -> Self {
        let n = m.n();
        let q = m.q();
        let mut cm = Vec::with_capacity(n + 1);
        let mut cq = Vec::with_capacity(n + 1);
        let (mut a, mut b) = (0.0, 0.0);
        cm.push(0.0);
        cq.push(0.0);
        for (&w, &qk) in m.mass().iter().zip(&q) {
            a += w;
            b += qk;
            cm.push(a);
            cq.push(b);
        }
        Prefix { n, cm, cq, mass: m.mass().to_vec(), q }
    }

    /// Micro-bin containing position `x`, taking the right-hand bin at an
    /// exact boundary.
    pub fn bin(&self, x: f64) -> usize {
        ((x * self.n as f64).floor().max(0.0) as usize).min(self.n - 1)
    }

    /// Cumulative `(mass, class-1 mass)` up to position `x`.
    pub fn at(&self, x: f64) -> (f64, f64) {
        if x <= 0.0 {
            return (0.0, 0.0);
        }
        if x >= 1.0 {
            return (self.cm[self.n], self.cq[self.n]);
        }
        let k = self.bin(x);
        let frac = x * self.n as f64 - k as f64;
        (self.cm[k] + frac * self.mass[k], self.cq[k] + frac * self.q[k])
    }

    /// Group masses for sorted positions.
    pub fn groups(&self, cuts: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut p = Vec::with_capacity(cuts.len() + 1);
        let mut q = Vec::with_capacity(cuts.len() + 1);
        let (mut pm, mut pq) = (0.0, 0.0);
        for &x in cuts.iter().chain(std::iter::once(&1.0)) {
            let (a, b) = self.at(x);
            p.push((a - pm).max(0.0));
            q.push((b - pq).max(0.0));
            pm = a;
            pq = b;
        }
        (p, q)
    }

    /// `(H, I)` for sorted positions.
    pub fn eval(&self, cuts: &[f64]) -> (f64, f64) {
        let (p, q) = self.groups(cuts);
        super::eval_groups(&p, &q)
    }

    /// Position where cumulative mass reaches `c`.
    pub fn position_of_mass(&self, c: f64) -> f64 {
        let k = self.cm.partition_point(|&v| v < c).clamp(1, self.n) - 1;
        let frac = if self.mass[k] > 0.0 { ((c - self.cm[k]) / self.mass[k]).clamp(0.0, 1.0) } else { 0.0 };
        (k as f64 + frac) / self.n as f64
    }
}
