use std::io::Read;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::models::{Class, ClassConditionalModel};
use crate::quad::brent;
use crate::unit::{Unit, LOGIT_MAX};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Sample {
    pub w: f64,
    pub y: Class,
}

/// Observed `(w, y)` pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct SampleSet {
    samples: Vec<Sample>,
}

impl SampleSet {
    pub fn new(samples: Vec<Sample>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(k) = samples.iter().position(|s| !(0.0..=1.0).contains(&s.w)) {
            return Err(Error::InvalidParameter(format!(
                "sample {k}: w = {} outside [0, 1]",
                samples[k].w
            )));
        }
        Ok(Self { samples })
    }

    /// Parse `w,y` CSV. Lines starting with `#` are comments.
    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(r);
        let header = rdr
            .headers()
            .map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?
            .clone();
        if header.is_empty() {
            return Err(Error::EmptyInput);
        }
        if header.iter().collect::<Vec<_>>() != ["w", "y"] {
            return Err(Error::Parse {
                line: 1,
                msg: format!("expected header `w,y`, found `{}`", header.iter().collect::<Vec<_>>().join(",")),
            });
        }
        let mut samples = Vec::new();
        for rec in rdr.records() {
            let rec = rec.map_err(|e| Error::Parse {
                line: e.position().map_or(0, |p| p.line() as usize),
                msg: e.to_string(),
            })?;
            let line = rec.position().map_or(0, |p| p.line() as usize);
            let bad = |msg: String| Error::Parse { line, msg };
            if rec.len() != 2 {
                return Err(bad(format!("expected 2 fields, found {}", rec.len())));
            }
            let w: f64 = rec[0].parse().map_err(|_| bad(format!("bad w `{}`", &rec[0])))?;
            if !(0.0..=1.0).contains(&w) {
                return Err(bad(format!("w = {w} outside [0, 1]")));
            }
            let y = rec[1]
                .parse::<i64>()
                .ok()
                .and_then(Class::from_label)
                .ok_or_else(|| bad(format!("label `{}` is not 1 or 2", &rec[1])))?;
            samples.push(Sample { w, y });
        }
        Self::new(samples)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_reader(std::fs::File::open(path)?)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("w,y\n");
        for x in &self.samples {
            s.push_str(&format!("{:?},{}\n", x.w, x.y.index() + 1));
        }
        s
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn class_counts(&self) -> [usize; 2] {
        let mut c = [0, 0];
        for s in &self.samples {
            c[s.y.index()] += 1;
        }
        c
    }

    pub fn values(&self, y: Class) -> Vec<f64> {
        self.samples.iter().filter(|s| s.y == y).map(|s| s.w).collect()
    }
}

pub fn ingest_samples(path: &Path) -> Result<SampleSet> {
    SampleSet::load(path)
}

/// Draw `n` labelled samples from a model by inverse-CDF sampling in native
/// `w`. Deterministic given `seed`.
pub fn draw_samples(m: &ClassConditionalModel, n: usize, seed: u64) -> Result<SampleSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(n);
    for _ in 0..n {
        let y = if rng.random::<f64>() < m.prior() { Class::One } else { Class::Two };
        let d = m.density(y);
        let q: f64 = rng.random();
        let t = if q <= 0.5 {
            brent(|t| d.cdf(Unit::from_logit(t)) - q, -LOGIT_MAX, LOGIT_MAX, 1e-12)?
        } else {
            let r = 1.0 - q;
            brent(|t| r - d.ccdf(Unit::from_logit(t)), -LOGIT_MAX, LOGIT_MAX, 1e-12)?
        };
        out.push(Sample { w: Unit::from_logit(t).w, y });
    }
    SampleSet::new(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file() {
        let s = SampleSet::from_reader("w,y\n0.9,1\n0.1,2\n".as_bytes()).unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(s.class_counts(), [1, 1]);
    }

    #[test]
    fn comments_are_skipped() {
        let s = SampleSet::from_reader("# header comment\nw,y\n# note\n0.5,1\n".as_bytes()).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn errors_carry_line_numbers() {
        match SampleSet::from_reader("w,y\n1.2,1\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        match SampleSet::from_reader("w,y\n0.2,1\n0.3,3\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        match SampleSet::from_reader("w,y\n0.2,1\nabc,1\n".as_bytes()) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(SampleSet::from_reader("".as_bytes()), Err(Error::EmptyInput)));
        assert!(matches!(SampleSet::from_reader("w,y\n".as_bytes()), Err(Error::EmptyInput)));
    }
}
