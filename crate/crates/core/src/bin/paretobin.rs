use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use paretobin::bounds::{bloat_and_loss, fano_bound, info_lower_bound};
use paretobin::dib::{dib_sweep, DibConfig};
use paretobin::exec::{set_workers, Exec};
use paretobin::frontier::{
    default_h_grid, fmt_sig, frontier_csv, frontier_json, parse_frontier_csv, parse_frontier_json, sweep_frontier,
    ParetoPoint, Sweep, SweepOptions,
};
use paretobin::info::h2;
use paretobin::models::{toy_mutual_info, Class, ClassConditionalModel, ClassDensity, ModelSpec};
use paretobin::pipeline::{
    binned_kl, fine_bin_from_samples, fine_bin_with, fit_class_densities_with, sort_bins, uniformize, FitOptions,
    SampleSet,
};
use paretobin::{Error, MicroBinModel, Result};

#[derive(Parser)]
#[command(name = "paretobin", version, about = "Entropy vs. class-information frontiers for binary classifiers")]
struct Cli {
    /// Worker threads; defaults to all available cores.
    #[arg(long, global = true, env = "PARETOBIN_WORKERS", value_parser = positive)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Frontier, corners and random-binning scatter for the exact toy model.
    Analytic(FrontierArgs),
    /// Frontier for a model spec or a file of classifier outputs.
    Frontier {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        frontier: FrontierArgs,
    },
    /// Compare a beta-swept DIB baseline against the frontier.
    Ba {
        #[command(flatten)]
        source: Source,
        #[command(flatten)]
        fit: FitArgs,
        #[command(flatten)]
        frontier: FrontierArgs,
        #[command(flatten)]
        dib: DibArgs,
    },
    /// Bloat/loss per frontier point, Fano curve and information lower bound.
    Diagnostics(DiagArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// CSV of `w,y` samples.
    #[arg(long)]
    input: Option<PathBuf>,
    /// TOML model spec.
    #[arg(long)]
    model: Option<PathBuf>,
}

#[derive(Args)]
struct FitArgs {
    /// Polynomial degree of fitted densities (sample input only).
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// How sample input becomes micro-bins.
    #[arg(long, value_enum, default_value_t = SampleBinning::Fit)]
    binning: SampleBinning,
}

#[derive(Clone, Copy, ValueEnum)]
enum SampleBinning {
    /// Fit class densities, then bin the fitted model.
    Fit,
    /// Equal-count bins of the sorted samples.
    Empirical,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Delimited,
    Structured,
}

#[derive(Args)]
struct FrontierArgs {
    #[arg(long, default_value_t = 2000, value_parser = positive)]
    micro_bins: usize,
    #[arg(long, default_value_t = 8, value_parser = positive)]
    max_groups: usize,
    #[arg(long, default_value_t = 6000, value_parser = positive)]
    samples_per_group: usize,
    /// Number of entropy targets refined between corners.
    #[arg(long, default_value_t = 200, value_parser = positive)]
    h_grid: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Delimited)]
    format: Format,
}

#[derive(Args)]
struct DibArgs {
    #[arg(long, default_value_t = 1e-10)]
    beta_min: f64,
    #[arg(long, default_value_t = 1.0)]
    beta_max: f64,
    #[arg(long, default_value_t = 20000, value_parser = positive)]
    beta_steps: usize,
    #[arg(long, default_value_t = 10, value_parser = positive)]
    restarts: usize,
    /// Warm-start each beta from the previous solution.
    #[arg(long)]
    anneal: bool,
}

#[derive(Args)]
struct DiagArgs {
    /// Frontier table (`.csv` or `.json`).
    #[arg(long)]
    frontier: PathBuf,
    /// Run report; defaults to `report.json` next to the frontier table.
    #[arg(long)]
    report: Option<PathBuf>,
    /// I(X,Y) in bits; overrides the report.
    #[arg(long)]
    i_xy: Option<f64>,
    /// H(Y) in bits; overrides the report.
    #[arg(long)]
    h_y: Option<f64>,
    /// Mean cross-entropy loss of a classifier, in bits.
    #[arg(long)]
    mean_loss: Option<f64>,
    #[arg(long, default_value = "out")]
    out: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Delimited)]
    format: Format,
}

fn positive(s: &str) -> std::result::Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be positive".into()),
        Ok(n) => Ok(n),
        Err(e) => Err(e.to_string()),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Numeric(_)
        | Error::NonNormalizable(_)
        | Error::FitFailed { .. }
        | Error::Infeasible(_)
        | Error::UndefinedConditional(_)
        | Error::DivergenceUndefined(_)
        | Error::Negativity
        | Error::NoGain => 3,
        _ => 2,
    }
}

fn timed<T>(label: &str, f: impl FnOnce() -> Result<T>) -> Result<T> {
    let t = Instant::now();
    let r = f();
    eprintln!("{label}: {:.2?}", t.elapsed());
    r
}

fn write(dir: &Path, name: &str, text: &str) -> Result<()> {
    std::fs::create_dir_all(dir)?;
    std::fs::write(dir.join(name), text)?;
    Ok(())
}

fn write_table(dir: &Path, stem: &str, format: Format, points: &[ParetoPoint]) -> Result<()> {
    match format {
        Format::Delimited => write(dir, &format!("{stem}.csv"), &frontier_csv(points)),
        Format::Structured => write(dir, &format!("{stem}.json"), &frontier_json(points)),
    }
}

fn write_json(dir: &Path, name: &str, v: &Value) -> Result<()> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| Error::Numeric(e.to_string()))?;
    s.push('\n');
    write(dir, name, &s)
}

/// Micro-bins and report fields for a model spec or a sample file.
struct Prepared {
    bins: MicroBinModel,
    i_model: Option<f64>,
    source: Value,
}

fn prepare_model(model: &ClassConditionalModel, n: usize, exec: Exec) -> Result<MicroBinModel> {
    let fine = timed("fine-binning", || fine_bin_with(&uniformize(model), n, exec))?;
    Ok(sort_bins(&fine))
}

fn prepare(source: &Source, fit: &FitArgs, fa: &FrontierArgs, exec: Exec) -> Result<Prepared> {
    if let Some(path) = &source.model {
        let spec = ModelSpec::load(path)?;
        let (model, load) = spec.build()?;
        let i_model = timed("model information", || model.mutual_info())?;
        return Ok(Prepared {
            bins: prepare_model(&model, fa.micro_bins, exec)?,
            i_model: Some(i_model),
            source: json!({
                "kind": "model",
                "path": path.display().to_string(),
                "family": spec.family,
                "name": spec.name,
                "a0_correction": load.a0_correction,
            }),
        });
    }
    let path = source.input.as_ref().expect("clap enforces one source");
    let samples = timed("ingest", || SampleSet::load(path))?;
    let counts = samples.class_counts();
    match fit.binning {
        SampleBinning::Empirical => {
            let bins = sort_bins(&fine_bin_from_samples(&samples, fa.micro_bins)?);
            Ok(Prepared {
                bins,
                i_model: None,
                source: json!({
                    "kind": "samples",
                    "path": path.display().to_string(),
                    "binning": "empirical",
                    "class_counts": counts,
                }),
            })
        }
        SampleBinning::Fit => {
            let opts = FitOptions { degree: fit.degree, seed: fa.seed, exec, ..FitOptions::default() };
            let (model, report) = timed("density fit", || fit_class_densities_with(&samples, &opts))?;
            let mut fits = Vec::new();
            for (class, cf) in [(Class::One, &report.class1), (Class::Two, &report.class2)] {
                let kl = match model.density(class) {
                    ClassDensity::ExpBeta(e) => binned_kl(&samples.values(class), e, 50).ok(),
                    _ => unreachable!("fitted densities are expbeta"),
                };
                fits.push(json!({
                    "class": class.index() + 1,
                    "coefficients": cf.params.coeffs,
                    "mean_nll_nats": cf.mean_nll,
                    "binned_kl_bits": kl,
                    "converged_starts": cf.converged_starts,
                }));
            }
            let i_model = timed("model information", || model.mutual_info())?;
            Ok(Prepared {
                bins: prepare_model(&model, fa.micro_bins, exec)?,
                i_model: Some(i_model),
                source: json!({
                    "kind": "samples",
                    "path": path.display().to_string(),
                    "binning": "fit",
                    "degree": fit.degree,
                    "class_counts": counts,
                    "prior": report.prior,
                    "fits": fits,
                }),
            })
        }
    }
}

fn sweep_options(fa: &FrontierArgs, exec: Exec) -> SweepOptions {
    SweepOptions {
        m_max: fa.max_groups,
        h_grid: default_h_grid(fa.max_groups, fa.h_grid),
        samples_per_m: fa.samples_per_group,
        seed: fa.seed,
        exec,
        ..SweepOptions::default()
    }
}

fn corner_rows(s: &Sweep) -> Value {
    Value::Array(s.corners.iter().map(|c| json!({"M": c.m, "H": c.h, "I": c.i})).collect())
}

fn emit_frontier(command: &str, p: &Prepared, fa: &FrontierArgs, exec: Exec) -> Result<()> {
    let sweep = timed("frontier sweep", || sweep_frontier(&p.bins, &sweep_options(fa, exec)))?;
    write_table(&fa.out, "frontier", fa.format, &sweep.curve.points)?;
    write_table(&fa.out, "corners", fa.format, &sweep.corners)?;
    for (m, cloud) in &sweep.samples {
        write_table(&fa.out, &format!("scatter_M{m}"), fa.format, cloud)?;
    }
    let report = json!({
        "command": command,
        "source": p.source,
        "micro_bins": p.bins.n(),
        "max_groups": fa.max_groups,
        "samples_per_group": fa.samples_per_group,
        "h_grid": fa.h_grid,
        "seed": fa.seed,
        "prior": p.bins.prior(),
        "h_y": h2(p.bins.prior()),
        "i_fine": p.bins.mutual_info(),
        "i_model": p.i_model,
        "frontier_points": sweep.curve.points.len(),
        "max_i": sweep.curve.max_i(),
        "corners": corner_rows(&sweep),
    });
    write_json(&fa.out, "report.json", &report)
}

fn cmd_analytic(fa: &FrontierArgs, exec: Exec) -> Result<()> {
    let p = Prepared {
        bins: prepare_model(&ClassConditionalModel::toy(), fa.micro_bins, exec)?,
        i_model: Some(toy_mutual_info()),
        source: json!({"kind": "toy"}),
    };
    emit_frontier("analytic", &p, fa, exec)
}

fn cmd_ba(p: &Prepared, fa: &FrontierArgs, da: &DibArgs, exec: Exec) -> Result<()> {
    let cfg = DibConfig {
        beta_min: da.beta_min,
        beta_max: da.beta_max,
        steps: da.beta_steps,
        max_clusters: fa.max_groups,
        restarts: da.restarts,
        seed: fa.seed,
        anneal: da.anneal,
        exec,
    };
    let ba = timed("dib sweep", || dib_sweep(&p.bins, &cfg))?;
    // Refine the frontier exactly at the baseline entropies as well.
    let mut opts = sweep_options(fa, exec);
    opts.h_grid.extend(ba.iter().map(|q| q.h));
    opts.h_grid.sort_by(f64::total_cmp);
    let sweep = timed("frontier sweep", || sweep_frontier(&p.bins, &opts))?;
    write_table(&fa.out, "ba_points", fa.format, &ba)?;
    let rows: Vec<(f64, f64, f64)> = ba.iter().map(|q| (q.h, q.i, sweep.curve.interpolate(q.h))).collect();
    match fa.format {
        Format::Delimited => {
            let mut s = String::from("H,I_ba,I_frontier,gap\n");
            for &(hz, ib, ifr) in &rows {
                s.push_str(&format!("{},{},{},{}\n", fmt_sig(hz, 12), fmt_sig(ib, 12), fmt_sig(ifr, 12), fmt_sig(ifr - ib, 6)));
            }
            write(&fa.out, "ba_comparison.csv", &s)?;
        }
        Format::Structured => {
            let v: Vec<Value> =
                rows.iter().map(|&(hz, ib, ifr)| json!({"H": hz, "I_ba": ib, "I_frontier": ifr, "gap": ifr - ib})).collect();
            write_json(&fa.out, "ba_comparison.json", &Value::Array(v))?;
        }
    }
    let report = json!({
        "command": "ba",
        "source": p.source,
        "micro_bins": p.bins.n(),
        "max_clusters": fa.max_groups,
        "beta_min": da.beta_min,
        "beta_max": da.beta_max,
        "beta_steps": da.beta_steps,
        "restarts": da.restarts,
        "anneal": da.anneal,
        "seed": fa.seed,
        "i_fine": p.bins.mutual_info(),
        "i_model": p.i_model,
        "ba_points": ba.len(),
        "dominated_rows": rows.iter().filter(|r| r.2 >= r.1 - 1e-6).count(),
        "corners": corner_rows(&sweep),
    });
    write_json(&fa.out, "report.json", &report)
}

fn cmd_diagnostics(a: &DiagArgs) -> Result<()> {
    let text = std::fs::read_to_string(&a.frontier)?;
    let points = if a.frontier.extension().is_some_and(|e| e == "json") {
        parse_frontier_json(&text)?
    } else {
        parse_frontier_csv(&text)?
    };
    let report_path = a.report.clone().unwrap_or_else(|| a.frontier.with_file_name("report.json"));
    let report: Option<Value> = match std::fs::read_to_string(&report_path) {
        Ok(s) => Some(serde_json::from_str(&s).map_err(|e| Error::Parse { line: e.line(), msg: e.to_string() })?),
        Err(_) if a.report.is_none() => None,
        Err(e) => return Err(e.into()),
    };
    let field = |k: &str| report.as_ref().and_then(|r| r.get(k)).and_then(Value::as_f64);
    let i_xy = a
        .i_xy
        .or_else(|| field("i_model"))
        .or_else(|| field("i_fine"))
        .ok_or_else(|| Error::InvalidParameter("I(X,Y) unknown: pass --i-xy or a report".into()))?;
    let h_y = a.h_y.or_else(|| field("h_y")).unwrap_or(1.0);

    let mut rows = Vec::with_capacity(points.len());
    for p in &points {
        let (bloat, loss) = bloat_and_loss(p, i_xy)?;
        rows.push((p, bloat, loss));
    }
    let fano: Vec<(f64, f64)> = (0..=50)
        .map(|k| {
            let eps = k as f64 / 100.0;
            fano_bound(eps).map(|b| (eps, b))
        })
        .collect::<Result<_>>()?;
    match a.format {
        Format::Delimited => {
            let mut s = String::from("H,I,bloat,loss,M,provenance\n");
            for (p, b, l) in &rows {
                s.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_sig(p.h, 12),
                    fmt_sig(p.i, 12),
                    fmt_sig(*b, 12),
                    fmt_sig(*l, 12),
                    p.m,
                    p.provenance.as_str()
                ));
            }
            write(&a.out, "diagnostics.csv", &s)?;
            let mut f = String::from("eps,I_min\n");
            for (eps, b) in &fano {
                f.push_str(&format!("{eps},{}\n", fmt_sig(*b, 12)));
            }
            write(&a.out, "fano.csv", &f)?;
        }
        Format::Structured => {
            let v: Vec<Value> = rows
                .iter()
                .map(|(p, b, l)| {
                    json!({"H": p.h, "I": p.i, "bloat": b, "loss": l, "M": p.m, "provenance": p.provenance.as_str()})
                })
                .collect();
            write_json(&a.out, "diagnostics.json", &Value::Array(v))?;
            let f: Vec<Value> = fano.iter().map(|(e, b)| json!({"eps": e, "I_min": b})).collect();
            write_json(&a.out, "fano.json", &Value::Array(f))?;
        }
    }
    let lower = match a.mean_loss {
        Some(loss) => json!({
            "mean_loss": loss,
            "raw": h_y - loss,
            "bound": info_lower_bound(h_y, loss)?,
            "miscalibrated": h_y - loss < 0.0,
        }),
        None => Value::Null,
    };
    let summary = json!({
        "i_xy": i_xy,
        "h_y": h_y,
        "points": rows.len(),
        "max_bloat": rows.iter().map(|r| r.1).fold(0.0, f64::max),
        "lower_bound": lower,
    });
    write_json(&a.out, "diagnostics_report.json", &summary)
}

fn run(cli: Cli) -> Result<()> {
    let exec = match cli.workers {
        Some(1) => Exec::Sequential,
        Some(n) => {
            set_workers(n);
            Exec::Parallel
        }
        None => Exec::default(),
    };
    match &cli.command {
        Command::Analytic(fa) => cmd_analytic(fa, exec),
        Command::Frontier { source, fit, frontier } => {
            let p = prepare(source, fit, frontier, exec)?;
            emit_frontier("frontier", &p, frontier, exec)
        }
        Command::Ba { source, fit, frontier, dib } => {
            let p = prepare(source, fit, frontier, exec)?;
            cmd_ba(&p, frontier, dib, exec)
        }
        Command::Diagnostics(a) => cmd_diagnostics(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
