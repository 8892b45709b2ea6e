use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::info::{h, DiscreteJoint, PROB_TOL};
use crate::models::{Class, ClassConditionalModel};
use crate::unit::Unit;

use super::samples::SampleSet;

pub const DEFAULT_MICRO_BINS: usize = 2000;

/// `N` micro-bins, each with a mass and `P(Y = 1 | bin)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MicroBinModel {
    mass: Vec<f64>,
    p1: Vec<f64>,
    sorted: bool,
    permutation: Vec<usize>,
}

impl MicroBinModel {
    pub fn new(mass: Vec<f64>, p1: Vec<f64>) -> Result<Self> {
        if mass.len() != p1.len() || mass.is_empty() {
            return Err(Error::InvalidDistribution(format!(
                "mass/p1 lengths {} and {}",
                mass.len(),
                p1.len()
            )));
        }
        let total: f64 = mass.iter().sum();
        if mass.iter().any(|&m| !(m >= 0.0)) || (total - 1.0).abs() > PROB_TOL {
            return Err(Error::InvalidDistribution(format!("bin masses sum to {total}")));
        }
        if let Some(k) = p1.iter().position(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::InvalidDistribution(format!("p1[{k}] = {}", p1[k])));
        }
        let n = mass.len();
        Ok(Self { mass, p1, sorted: false, permutation: (0..n).collect() })
    }

    /// Equal masses `1/N`.
    pub fn equal_mass(p1: Vec<f64>) -> Result<Self> {
        let n = p1.len();
        Self::new(vec![1.0 / n as f64; n], p1)
    }

    pub fn n(&self) -> usize {
        self.p1.len()
    }

    pub fn mass(&self) -> &[f64] {
        &self.mass
    }

    pub fn p1(&self) -> &[f64] {
        &self.p1
    }

    /// Whether [`sort_bins`] produced this model.
    pub fn is_sorted(&self) -> bool {
        self.sorted
    }

    /// `permutation[k]` is the original index of bin `k`.
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    /// Class-1 mass of each bin.
    pub fn q(&self) -> Vec<f64> {
        self.mass.iter().zip(&self.p1).map(|(m, p)| m * p).collect()
    }

    pub fn prior(&self) -> f64 {
        self.q().iter().sum()
    }

    /// The full `N x 2` joint.
    pub fn joint(&self) -> DiscreteJoint {
        DiscreteJoint::from_rows_unchecked(
            self.mass.iter().zip(&self.p1).map(|(&m, &p)| [m * p, m - m * p]).collect(),
        )
    }

    /// `I(bin, Y)`, the information carried by the micro-binning.
    pub fn mutual_info(&self) -> f64 {
        crate::info::mutual_info(&self.joint())
    }

    pub fn entropy(&self) -> f64 {
        self.mass.iter().map(|&m| h(m)).sum()
    }

    /// JSON with every float at 17 significant digits.
    pub fn to_json(&self) -> String {
        let list = |v: &[f64]| v.iter().map(|x| format!("{x:.16e}")).collect::<Vec<_>>().join(",");
        let perm = self.permutation.iter().map(|i| i.to_string()).collect::<Vec<_>>().join(",");
        format!(
            "{{\"n\":{},\"sorted\":{},\"mass\":[{}],\"p1\":[{}],\"permutation\":[{}]}}\n",
            self.n(),
            self.sorted,
            list(&self.mass),
            list(&self.p1),
            perm
        )
    }

    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(serde::Deserialize)]
        struct Raw {
            n: usize,
            sorted: bool,
            mass: Vec<f64>,
            p1: Vec<f64>,
            permutation: Vec<usize>,
        }
        let r: Raw = serde_json::from_str(text).map_err(|e| Error::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        if r.n != r.p1.len() || r.permutation.len() != r.n {
            return Err(Error::Inconsistent(format!("n = {} does not match vectors", r.n)));
        }
        let mut m = Self::new(r.mass, r.p1)?;
        if r.sorted && m.p1.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Inconsistent("marked sorted but p1 decreases".into()));
        }
        m.sorted = r.sorted;
        m.permutation = r.permutation;
        Ok(m)
    }
}

/// Stable sort by `p1`; ties keep their original order.
pub fn sort_bins(m: &MicroBinModel) -> MicroBinModel {
    let mut idx: Vec<usize> = (0..m.n()).collect();
    idx.sort_by(|&a, &b| m.p1[a].total_cmp(&m.p1[b]));
    MicroBinModel {
        mass: idx.iter().map(|&i| m.mass[i]).collect(),
        p1: idx.iter().map(|&i| m.p1[i]).collect(),
        sorted: true,
        permutation: idx.iter().map(|&i| m.permutation[i]).collect(),
    }
}

/// `N` equal-width bins of the model's coordinate (equal-mass once the
/// model is uniformized), with `p1_j` the bin-average conditional.
pub fn fine_bin(m: &ClassConditionalModel, n: usize) -> Result<MicroBinModel> {
    fine_bin_with(m, n, Exec::default())
}

pub fn fine_bin_with(m: &ClassConditionalModel, n: usize, exec: Exec) -> Result<MicroBinModel> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("need N >= 2 micro-bins, got {n}")));
    }
    let edges: Vec<Unit> = exec
        .map_range(n + 1, |j| m.to_native(j as f64 / n as f64))
        .into_iter()
        .collect::<Result<_>>()?;
    let masses = exec.map_range(n, |j| m.class_masses(edges[j], edges[j + 1]));
    let mut p1 = Vec::with_capacity(n);
    let mut mass = Vec::with_capacity(n);
    for (j, [a, b]) in masses.into_iter().enumerate() {
        let t = a + b;
        if !(a >= 0.0 && b >= 0.0) || !t.is_finite() {
            return Err(Error::Numeric(format!("bin {j}: class masses ({a}, {b})")));
        }
        p1.push(if t > 0.0 { a / t } else { m.prior() });
        mass.push(t);
    }
    if m.is_uniformized() {
        mass = vec![1.0 / n as f64; n];
    } else {
        let s: f64 = mass.iter().sum();
        mass.iter_mut().for_each(|x| *x /= s);
    }
    MicroBinModel::new(mass, p1)
}

/// Equal-count bins over the rank order of the observed `w` (ties broken by
/// input order); `p1_j` is the class-1 fraction of bin `j`.
pub fn fine_bin_from_samples(s: &SampleSet, n: usize) -> Result<MicroBinModel> {
    if n == 0 || s.len() < n {
        return Err(Error::InsufficientSamples { need: n.max(1), have: s.len() });
    }
    let mut order: Vec<usize> = (0..s.len()).collect();
    let xs = s.samples();
    order.sort_by(|&a, &b| xs[a].w.total_cmp(&xs[b].w));
    let total = s.len();
    let mut mass = Vec::with_capacity(n);
    let mut p1 = Vec::with_capacity(n);
    for j in 0..n {
        let lo = j * total / n;
        let hi = (j + 1) * total / n;
        let ones = order[lo..hi].iter().filter(|&&i| xs[i].y == Class::One).count();
        mass.push((hi - lo) as f64 / total as f64);
        p1.push(ones as f64 / (hi - lo) as f64);
    }
    MicroBinModel::new(mass, p1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pipeline::Sample;

    #[test]
    fn sort_is_stable_and_recorded() {
        let m = MicroBinModel::equal_mass(vec![0.9, 0.1, 0.5, 0.1]).unwrap();
        let s = sort_bins(&m);
        assert_eq!(s.p1(), &[0.1, 0.1, 0.5, 0.9]);
        assert_eq!(s.permutation(), &[1, 3, 2, 0]);
        assert!(s.is_sorted());
        let again = sort_bins(&s);
        assert_eq!(again.permutation(), s.permutation());
    }

    #[test]
    fn reversed_input() {
        let m = MicroBinModel::equal_mass(vec![0.4, 0.3, 0.2, 0.1]).unwrap();
        assert_eq!(sort_bins(&m).permutation(), &[3, 2, 1, 0]);
    }

    #[test]
    fn json_round_trip_is_exact() {
        let m = sort_bins(&MicroBinModel::equal_mass(vec![0.1 + 1e-17, 2.0 / 3.0, 0.3]).unwrap());
        let back = MicroBinModel::from_json(&m.to_json()).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn separable_samples() {
        let s = SampleSet::new(vec![
            Sample { w: 0.9, y: Class::One },
            Sample { w: 0.2, y: Class::Two },
            Sample { w: 0.7, y: Class::One },
            Sample { w: 0.1, y: Class::Two },
        ])
        .unwrap();
        assert_eq!(fine_bin_from_samples(&s, 2).unwrap().p1(), &[0.0, 1.0]);
        let each = fine_bin_from_samples(&s, 4).unwrap();
        assert!(each.p1().iter().all(|&p| p == 0.0 || p == 1.0));
        assert!(matches!(
            fine_bin_from_samples(&s, 5),
            Err(Error::InsufficientSamples { need: 5, have: 4 })
        ));
    }
}
