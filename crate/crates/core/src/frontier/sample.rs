use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::pipeline::MicroBinModel;

use super::{ContiguousBinning, ParetoPoint, Prefix, Provenance};

/// `count` binnings into `groups` groups with cut vectors drawn uniformly
/// among sorted distinct micro-bin indices. Deterministic given `seed`.
pub fn sample_binnings(m: &MicroBinModel, groups: usize, count: usize, seed: u64) -> Result<Vec<ParetoPoint>> {
    sample_binnings_with(m, groups, count, seed, Exec::default())
}

pub fn sample_binnings_with(
    m: &MicroBinModel,
    groups: usize,
    count: usize,
    seed: u64,
    exec: Exec,
) -> Result<Vec<ParetoPoint>> {
    let n = m.n();
    if groups == 0 || groups > n {
        return Err(Error::Infeasible(format!("{groups} groups from {n} micro-bins")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(groups as u64);
    let cuts: Vec<Vec<usize>> = (0..count)
        .map(|_| {
            let mut c: Vec<usize> = sample(&mut rng, n - 1, groups - 1).into_iter().map(|k| k + 1).collect();
            c.sort_unstable();
            c
        })
        .collect();
    let pre = Prefix::new(m);
    Ok(exec.map(&cuts, |c| {
        let pos: Vec<f64> = c.iter().map(|&k| k as f64 / n as f64).collect();
        let (hz, iz) = pre.eval(&pos);
        ParetoPoint {
            h: hz,
            i: iz,
            m: groups,
            binning: Some(ContiguousBinning::Indices(c.clone())),
            provenance: Provenance::Sampled,
        }
    }))
}
