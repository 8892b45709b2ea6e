use super::{FrontierCurve, ParetoPoint, Provenance};

/// Differences below this are rounding, not a trade-off.
const TIE: f64 = 1e-12;

/// Keep the points not dominated under (minimize `H`, maximize `I`). Points
/// equal within rounding keep their first occurrence, or a corner if any.
pub fn pareto_filter(points: &[ParetoPoint]) -> FrontierCurve {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        let (p, q) = (&points[a], &points[b]);
        p.h.total_cmp(&q.h).then(q.i.total_cmp(&p.i)).then(a.cmp(&b))
    });
    let mut out: Vec<ParetoPoint> = Vec::new();
    for k in idx {
        let p = &points[k];
        match out.last_mut() {
            Some(last) if p.i <= last.i + TIE => {
                let tied = p.h - last.h <= TIE && last.i - p.i <= TIE;
                if tied && p.provenance == Provenance::Corner && last.provenance != Provenance::Corner {
                    *last = p.clone();
                }
            }
            _ => out.push(p.clone()),
        }
    }
    FrontierCurve { points: out }
}
