use crate::error::{Error, Result};

use super::{ContiguousBinning, ParetoPoint, Provenance};

/// `x` with `digits` significant digits, fixed notation where reasonable.
pub fn fmt_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits.max(1) - 1, x);
    // The exponent after rounding, so 9.99.. -> 1.0e1 is handled.
    let exp: i32 = sci.rsplit('e').next().and_then(|e| e.parse().ok()).unwrap_or(0);
    if !(-5..15).contains(&exp) {
        return sci;
    }
    format!("{:.*}", (digits as i32 - 1 - exp).max(0) as usize, x)
}

fn cuts_str(b: &Option<ContiguousBinning>) -> String {
    match b {
        None => String::new(),
        Some(ContiguousBinning::Indices(c)) => c.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(";"),
        Some(ContiguousBinning::Positions(c)) => c.iter().map(|&x| fmt_sig(x, 12)).collect::<Vec<_>>().join(";"),
    }
}

/// `H,I,M,provenance,cuts`, one header line, 12 significant digits.
pub fn frontier_csv(points: &[ParetoPoint]) -> String {
    let mut s = String::from("H,I,M,provenance,cuts\n");
    for p in points {
        s.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_sig(p.h, 12),
            fmt_sig(p.i, 12),
            p.m,
            p.provenance.as_str(),
            cuts_str(&p.binning)
        ));
    }
    s
}

pub fn frontier_json(points: &[ParetoPoint]) -> String {
    let rows: Vec<serde_json::Value> = points
        .iter()
        .map(|p| {
            let cuts = match &p.binning {
                None => serde_json::Value::Null,
                Some(ContiguousBinning::Indices(c)) => serde_json::json!(c),
                Some(ContiguousBinning::Positions(c)) => serde_json::json!(c),
            };
            serde_json::json!({
                "H": p.h,
                "I": p.i,
                "M": p.m,
                "provenance": p.provenance.as_str(),
                "cuts": cuts,
            })
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&rows).expect("plain JSON values");
    s.push('\n');
    s
}

fn provenance_from(s: &str) -> Option<Provenance> {
    [Provenance::Corner, Provenance::Sampled, Provenance::Refined, Provenance::Ba]
        .into_iter()
        .find(|p| p.as_str() == s)
}

fn binning_from(cuts: &str) -> Result<Option<ContiguousBinning>> {
    if cuts.is_empty() {
        return Ok(Some(ContiguousBinning::Indices(vec![])));
    }
    let parts: Vec<&str> = cuts.split(';').collect();
    if let Ok(ix) = parts.iter().map(|p| p.parse::<usize>()).collect::<std::result::Result<Vec<_>, _>>() {
        return Ok(Some(ContiguousBinning::Indices(ix)));
    }
    parts
        .iter()
        .map(|p| p.parse::<f64>())
        .collect::<std::result::Result<Vec<_>, _>>()
        .map(|c| Some(ContiguousBinning::Positions(c)))
        .map_err(|e| Error::Parse { line: 0, msg: format!("cuts `{cuts}`: {e}") })
}

/// Read a table written by [`frontier_csv`]. An empty cuts field reads back
/// as the single-group binning, so non-contiguous points lose that marker.
pub fn parse_frontier_csv(text: &str) -> Result<Vec<ParetoPoint>> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let headers = rdr.headers().map_err(|e| Error::Parse { line: 1, msg: e.to_string() })?.clone();
    if headers.iter().collect::<Vec<_>>() != ["H", "I", "M", "provenance", "cuts"] {
        return Err(Error::Parse { line: 1, msg: format!("unexpected header {:?}", headers) });
    }
    let mut out = Vec::new();
    for (k, rec) in rdr.records().enumerate() {
        let line = k + 2;
        let rec = rec.map_err(|e| Error::Parse { line, msg: e.to_string() })?;
        let bad = |what: &str| Error::Parse { line, msg: format!("bad {what}") };
        let h: f64 = rec[0].parse().map_err(|_| bad("H"))?;
        let i: f64 = rec[1].parse().map_err(|_| bad("I"))?;
        let m: usize = rec[2].parse().map_err(|_| bad("M"))?;
        let provenance = provenance_from(&rec[3]).ok_or_else(|| bad("provenance"))?;
        let binning = binning_from(&rec[4]).map_err(|_| bad("cuts"))?;
        out.push(ParetoPoint { h, i, m, binning, provenance });
    }
    Ok(out)
}

/// Read a table written by [`frontier_json`].
pub fn parse_frontier_json(text: &str) -> Result<Vec<ParetoPoint>> {
    #[derive(serde::Deserialize)]
    struct Row {
        #[serde(rename = "H")]
        h: f64,
        #[serde(rename = "I")]
        i: f64,
        #[serde(rename = "M")]
        m: usize,
        provenance: String,
        cuts: Option<Vec<serde_json::Number>>,
    }
    let rows: Vec<Row> =
        serde_json::from_str(text).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?;
    rows.into_iter()
        .enumerate()
        .map(|(k, r)| {
            let provenance = provenance_from(&r.provenance)
                .ok_or_else(|| Error::Parse { line: 0, msg: format!("row {k}: provenance `{}`", r.provenance) })?;
            let binning = r.cuts.map(|c| {
                if c.iter().all(|x| x.is_u64()) {
                    ContiguousBinning::Indices(c.iter().map(|x| x.as_u64().unwrap_or(0) as usize).collect())
                } else {
                    ContiguousBinning::Positions(c.iter().map(|x| x.as_f64().unwrap_or(f64::NAN)).collect())
                }
            });
            Ok(ParetoPoint { h: r.h, i: r.i, m: r.m, binning, provenance })
        })
        .collect()
}
