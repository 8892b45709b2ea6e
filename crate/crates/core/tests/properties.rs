mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::*;
use paretobin::bounds::{bits_decode, bits_encode, bitcode_bloat, bloat_and_loss};
use paretobin::dib::{dib_objective, dib_optimize_from, dib_point, Assignment};
use paretobin::frontier::{
    corner, eval_binning, pareto_filter, sample_binnings, swap_step, ContiguousBinning, ParetoPoint, Provenance,
};
use paretobin::info::{entropy, kl_divergence, mutual_info, DiscreteJoint, ProbVector};
use paretobin::MicroBinModel;

fn joint() -> impl Strategy<Value = DiscreteJoint> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..1.0), 1..8).prop_filter_map("zero mass", |r| {
        DiscreteJoint::normalized(r.into_iter().map(|(a, b)| [a, b]).collect()).ok()
    })
}

fn prob(len: std::ops::Range<usize>) -> impl Strategy<Value = ProbVector> {
    prop::collection::vec(0.0f64..1.0, len).prop_filter_map("zero mass", |p| ProbVector::normalized(p).ok())
}

fn micro(len: std::ops::Range<usize>) -> impl Strategy<Value = MicroBinModel> {
    prop::collection::vec((0.01f64..1.0, 0.0f64..=1.0), len).prop_map(|v| {
        let t: f64 = v.iter().map(|x| x.0).sum();
        let mut p1: Vec<(f64, f64)> = v.into_iter().map(|(w, p)| (w / t, p)).collect();
        p1.sort_by(|a, b| a.1.total_cmp(&b.1));
        MicroBinModel::new(p1.iter().map(|x| x.0).collect(), p1.iter().map(|x| x.1).collect()).unwrap()
    })
}

proptest! {
    #[test]
    fn mi_matches_definition_and_bounds(j in joint()) {
        let i = mutual_info(&j);
        prop_assert!((i - mi_rows(j.rows())).abs() < 1e-12);
        prop_assert!(i >= 0.0);
        let hz = entropy_of(&j.row_marginal());
        let hy = entropy_of(&j.col_marginal());
        prop_assert!(i <= hz.min(hy) + 1e-12);
    }

    #[test]
    fn mi_is_permutation_invariant(j in joint(), seed in any::<u64>()) {
        let mut rows = j.rows().to_vec();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rand::seq::SliceRandom::shuffle(rows.as_mut_slice(), &mut rng);
        let shuffled = DiscreteJoint::new(rows).unwrap();
        prop_assert!((mutual_info(&j) - mutual_info(&shuffled)).abs() < 1e-12);
    }

    #[test]
    fn independent_joint_has_no_information(pz in prob(1..8), py in 0.0f64..=1.0) {
        let rows = pz.as_slice().iter().map(|&z| [z * py, z * (1.0 - py)]).collect();
        prop_assert!(mutual_info(&DiscreteJoint::new(rows).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn kl_is_nonnegative(p in prob(1..8), q in prob(8..9)) {
        let p = ProbVector::normalized(p.as_slice().iter().copied().chain(std::iter::repeat(0.0)).take(8).collect()).unwrap();
        let qs: Vec<f64> = q.as_slice().iter().map(|x| x + 1e-3).collect();
        let q = ProbVector::normalized(qs).unwrap();
        let d = kl_divergence(&p, &q).unwrap();
        prop_assert!(d >= -1e-12);
        prop_assert!(kl_divergence(&p, &p).unwrap().abs() < 1e-12);
    }

    #[test]
    fn entropy_bounds(p in prob(1..10)) {
        let h = entropy(&p);
        prop_assert!(h >= -1e-15 && h <= (p.len() as f64).log2() + 1e-12);
    }

    #[test]
    fn swap_toward_separation_adds_information(j in joint(), eps_frac in 1e-6f64..1e-3) {
        prop_assume!(j.num_rows() >= 2);
        let r = j.rows();
        let (c0, c1) = (j.conditional(0), j.conditional(1));
        prop_assume!(matches!((c0, c1), (Some(a), Some(b)) if (a - b).abs() > 1e-3));
        let eps = eps_frac * [r[0][0], r[0][1], r[1][0], r[1][1]].into_iter().fold(f64::INFINITY, f64::min);
        prop_assume!(eps > 1e-12);
        let moved = swap_step(&j, 0, 1, eps).unwrap();
        prop_assert!(mutual_info(&moved) > mutual_info(&j));
        let (a, b) = (moved.row_marginal(), j.row_marginal());
        prop_assert!((a[0] - b[0]).abs() < 1e-15 && (a[1] - b[1]).abs() < 1e-15);
    }

    #[test]
    fn pareto_filter_is_monotone_and_complete(pts in prop::collection::vec((0.0f64..3.0, 0.0f64..1.0), 1..40)) {
        let pts: Vec<ParetoPoint> = pts.into_iter()
            .map(|(h, i)| ParetoPoint { h, i, m: 2, binning: None, provenance: Provenance::Sampled })
            .collect();
        let curve = pareto_filter(&pts);
        for w in curve.points.windows(2) {
            prop_assert!(w[1].h > w[0].h && w[1].i > w[0].i);
        }
        for p in &pts {
            let dominated_or_kept = curve.points.iter().any(|c| c.h <= p.h + 1e-12 && c.i >= p.i - 1e-12);
            prop_assert!(dominated_or_kept);
        }
    }

    #[test]
    fn corners_increase_with_groups(m in micro(3..40)) {
        let mut prev = 0.0;
        for g in 1..=m.n().min(5) {
            let c = corner(&m, g).unwrap();
            prop_assert!(c.i >= prev - 1e-12);
            prop_assert!(c.i <= m.mutual_info() + 1e-12);
            prop_assert!(c.h <= (g as f64).log2() + 1e-12);
            prev = c.i;
        }
    }

    #[test]
    fn corner_beats_sampled_binnings(m in micro(4..30), seed in any::<u64>()) {
        let c = corner(&m, 3).unwrap();
        for s in sample_binnings(&m, 3, 50, seed).unwrap() {
            prop_assert!(s.i <= c.i + 1e-12);
        }
    }

    #[test]
    fn eval_binning_matches_labels(m in micro(3..30), a in 1usize..29, b in 1usize..29) {
        let n = m.n();
        let mut cuts = vec![a % n, b % n];
        cuts.retain(|&k| k > 0);
        cuts.sort_unstable();
        cuts.dedup();
        let (_, h, i) = eval_binning(&m, &ContiguousBinning::Indices(cuts.clone())).unwrap();
        let labels: Vec<usize> = (0..n).map(|k| cuts.iter().filter(|&&c| c <= k).count()).collect();
        let (h2, i2) = eval_labels(m.mass(), m.p1(), &labels, cuts.len() + 1);
        prop_assert!((h - h2).abs() < 1e-12 && (i - i2).abs() < 1e-12);
    }

    #[test]
    fn dib_never_worsens_and_stays_feasible(m in micro(3..40), beta in 0.0f64..1.0, k in 1usize..5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let init = Assignment::random(m.n(), k, &mut rng);
        let start = dib_objective(&m, &init, beta);
        let mut trace = Vec::new();
        let sol = dib_optimize_from(&m, beta, init, Some(&mut trace));
        prop_assert!((trace[0] - start).abs() < 1e-12);
        for w in trace.windows(2) {
            prop_assert!(w[1] >= w[0] - 1e-12);
        }
        prop_assert!((sol.objective - dib_objective(&m, &sol.assignment, beta)).abs() < 1e-9);
        let (h, i) = dib_point(&m, &sol.assignment);
        let (h2, i2) = eval_labels(m.mass(), m.p1(), sol.assignment.z(), k);
        prop_assert!((h - h2).abs() < 1e-12 && (i - i2).abs() < 1e-12);
        prop_assert!(i <= h.min(m.mutual_info()) + 1e-12);
        prop_assert!(i >= -1e-12 && h <= (k as f64).log2() + 1e-12);
    }

    #[test]
    fn bit_code_round_trip(p in prob(1..9)) {
        let code = bits_encode(&p);
        let dist = code.distribution();
        for (a, b) in dist.iter().zip(p.as_slice()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        let mut total = vec![0.0; p.len()];
        for s in 0..1usize << (p.len() - 1) {
            let bits: Vec<bool> = (0..p.len() - 1).map(|k| s >> k & 1 == 1).collect();
            total[bits_decode(&bits) - 1] += code.string_probability(&bits);
        }
        for (a, b) in total.iter().zip(p.as_slice()) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        prop_assert!(bitcode_bloat(&p) >= -1e-12);
    }

    #[test]
    fn bloat_and_loss_add_back(i in 0.0f64..1.0, extra_h in 0.0f64..2.0, extra_i in 0.0f64..1.0) {
        let p = ParetoPoint { h: i + extra_h, i, m: 2, binning: None, provenance: Provenance::Corner };
        let (bloat, loss) = bloat_and_loss(&p, i + extra_i).unwrap();
        prop_assert!(bloat >= 0.0 && loss >= 0.0);
        prop_assert!((p.h - bloat - p.i).abs() < 1e-12 && (i + extra_i - loss - p.i).abs() < 1e-12);
    }
}

#[test]
fn dib_at_zero_beta_separates_distinct_bins() {
    let m = MicroBinModel::new(vec![0.25; 4], vec![0.1, 0.4, 0.6, 0.9]).unwrap();
    let sol = dib_optimize_from(&m, 0.0, Assignment::new(vec![0, 1, 2, 3], 4).unwrap(), None);
    assert!((sol.i - m.mutual_info()).abs() < 1e-12);
}
