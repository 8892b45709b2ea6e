use crate::error::{Error, Result};
use crate::pipeline::MicroBinModel;

use super::eval_groups;

/// Whether each label occupies one run of consecutive micro-bins.
pub fn is_contiguous(labels: &[u8]) -> bool {
    let mut seen = [false; 256];
    for (k, &z) in labels.iter().enumerate() {
        if k > 0 && labels[k - 1] != z && seen[z as usize] {
            return false;
        }
        seen[z as usize] = true;
    }
    true
}

/// Call `f(labels, H, I)` for every surjective assignment of the micro-bins
/// to `groups` labels. Limited to `N <= 12`, `groups <= 4`.
pub fn brute_force_visit<F: FnMut(&[u8], f64, f64)>(m: &MicroBinModel, groups: usize, mut f: F) -> Result<()> {
    let n = m.n();
    if n > 12 || groups > 4 {
        return Err(Error::TooLarge { n, m: groups });
    }
    if groups == 0 || groups > n {
        return Err(Error::Infeasible(format!("{groups} groups from {n} micro-bins")));
    }
    let (mass, p1) = (m.mass(), m.p1());
    let mut labels = vec![0u8; n];
    let total = (groups as u64).pow(n as u32);
    let mut pm = vec![0.0; groups];
    let mut qm = vec![0.0; groups];
    for code in 0..total {
        let mut c = code;
        for l in labels.iter_mut() {
            *l = (c % groups as u64) as u8;
            c /= groups as u64;
        }
        pm.iter_mut().for_each(|x| *x = 0.0);
        qm.iter_mut().for_each(|x| *x = 0.0);
        let mut used = 0u8;
        for k in 0..n {
            let g = labels[k] as usize;
            pm[g] += mass[k];
            qm[g] += mass[k] * p1[k];
            used |= 1 << g;
        }
        if used.count_ones() as usize != groups {
            continue;
        }
        let (hz, iz) = eval_groups(&pm, &qm);
        f(&labels, hz, iz);
    }
    Ok(())
}

/// `(H, I)` of every surjective assignment, contiguous or not.
pub fn brute_force_frontier(m: &MicroBinModel, groups: usize) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::new();
    brute_force_visit(m, groups, |_, hz, iz| out.push((hz, iz)))?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_surjections() {
        let m = MicroBinModel::equal_mass(vec![0.1, 0.3, 0.6, 0.9]).unwrap();
        assert_eq!(brute_force_frontier(&m, 2).unwrap().len(), 14);
        // 3^4 - 3 * 2^4 + 3 = 36
        assert_eq!(brute_force_frontier(&m, 3).unwrap().len(), 36);
    }

    #[test]
    fn guard() {
        let m = MicroBinModel::equal_mass(vec![0.5; 13]).unwrap();
        assert!(matches!(brute_force_frontier(&m, 2), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn contiguity() {
        assert!(is_contiguous(&[0, 0, 1, 1, 2]));
        assert!(is_contiguous(&[2, 2, 0, 1]));
        assert!(!is_contiguous(&[0, 1, 0]));
    }
}
