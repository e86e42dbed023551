//! The single-stage subcommands.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use rdslab::degseq::{load_degree_source, resample_graphical, DegreeSequence, DegreeSource};
use rdslab::estimators::{bias_report, synth_outcomes, OutcomeModel, WeightOracle};
use rdslab::graphgen::{build_bks_counted, build_raman, degree_assortativity, read_edge_list, Graph};
use rdslab::inclusion::{estimate_inclusion_with_workers, loglog_slope};
use rdslab::rng::{derive_seed, Stream};
use rdslab::sampler::{draw_sample, RecruitmentDistribution};
use serde::Deserialize;
use serde_json::json;

use crate::config::{parse_probs, Builder};
use crate::error::CliError;
use crate::{DegreesArgs, EstimateArgs, GraphArgs, InclusionArgs, SampleArgs};

/// Attempts allowed when redrawing an odd-sum or otherwise non-graphical
/// degree sequence.
pub const RESAMPLE_ATTEMPTS: usize = 1000;

pub(crate) fn echo(config: &serde_json::Value) {
    eprintln!("{}", serde_json::to_string_pretty(config).expect("json value"));
}

/// Writes through `body` into `path`, or standard output.
pub(crate) fn emit(
    path: Option<&Path>,
    body: impl FnOnce(&mut dyn Write) -> io::Result<()>,
) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            body(&mut w).and_then(|_| w.flush()).map_err(|e| CliError::io(p, e))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            body(&mut lock).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn distribution(probs: Option<&str>) -> Result<RecruitmentDistribution, CliError> {
    match probs {
        None => Ok(RecruitmentDistribution::observed()),
        Some(text) => RecruitmentDistribution::new(parse_probs(text)?)
            .map_err(|e| CliError::Config(e.to_string())),
    }
}

fn check_sample_size(n: usize, g: &Graph) -> Result<(), CliError> {
    if n == 0 || n > g.node_count() {
        return Err(CliError::Config(format!(
            "sample size {n} must be in 1..={}",
            g.node_count()
        )));
    }
    Ok(())
}

fn opt_path(p: &Option<PathBuf>) -> serde_json::Value {
    p.as_ref().map_or(serde_json::Value::Null, |p| json!(p))
}

pub fn degrees(a: DegreesArgs) -> Result<(), CliError> {
    echo(&json!({
        "command": "degrees",
        "source": opt_path(&a.source),
        "pool_size": a.pool_size,
        "mean": a.mean,
        "cap": a.cap,
        "nodes": a.nodes,
        "seed": a.seed,
        "out": opt_path(&a.out),
    }));
    if a.nodes == 0 {
        return Err(CliError::Config("nodes must be at least 1".into()));
    }
    let source = match &a.source {
        Some(path) => load_degree_source(path)?,
        None => {
            if a.pool_size == 0 || a.mean.is_nan() || a.mean <= 0.0 || a.cap == 0 {
                return Err(CliError::Config("pool size, mean and cap must be positive".into()));
            }
            DegreeSource::synthetic(a.pool_size, a.mean, a.cap, &mut Stream::substream(a.seed, 0))?
        }
    };
    let seq = resample_graphical(&source, a.nodes, &mut Stream::substream(a.seed, 1), RESAMPLE_ATTEMPTS)?;
    emit(a.out.as_deref(), |w| write!(w, "{seq}"))
}

/// Builds one graph; returns it with the number of construction attempts.
pub fn build_graph(
    seq: &DegreeSequence,
    builder: Builder,
    seed: u64,
    max_retries: usize,
) -> Result<(Graph, usize), CliError> {
    let built = match builder {
        Builder::Raman => build_raman(seq).map(|g| (g, 1)),
        Builder::Bks => build_bks_counted(seq, &mut Stream::from_seed(seed), max_retries),
    };
    built.map_err(|e| CliError::compute("graph construction", e))
}

pub fn graph(a: GraphArgs) -> Result<(), CliError> {
    echo(&json!({
        "command": "graph",
        "degrees": a.degrees,
        "builder": a.builder,
        "seed": a.seed,
        "max_retries": a.max_retries,
        "out": opt_path(&a.out),
    }));
    let seq = DegreeSequence::load(&a.degrees)?;
    let (g, attempts) = build_graph(&seq, a.builder, derive_seed(a.seed, 2), a.max_retries)?;
    emit(a.out.as_deref(), |w| w.write_all(rdslab::graphgen::format_edge_list(&g).as_bytes()))?;
    let r = degree_assortativity(&g);
    eprintln!(
        "{}",
        json!({"nodes": g.node_count(), "edges": g.edge_count(), "attempts": attempts, "assortativity": r})
    );
    Ok(())
}

pub fn sample(a: SampleArgs) -> Result<(), CliError> {
    echo(&json!({
        "command": "sample",
        "graph": a.graph,
        "n": a.n,
        "probs": a.probs,
        "seed": a.seed,
        "out": opt_path(&a.out),
    }));
    let p = distribution(a.probs.as_deref())?;
    let g = read_edge_list(&a.graph)?;
    check_sample_size(a.n, &g)?;
    let s = draw_sample(&g, a.n, &p, &mut Stream::substream(a.seed, 0))
        .map_err(|e| CliError::compute("sampling", e))?;
    emit(a.out.as_deref(), |w| s.write_csv(w))
}

pub fn inclusion(a: InclusionArgs) -> Result<(), CliError> {
    echo(&json!({
        "command": "inclusion",
        "graph": a.graph,
        "n": a.n,
        "probs": a.probs,
        "reps": a.reps,
        "seed": a.seed,
        "out": opt_path(&a.out),
    }));
    let p = distribution(a.probs.as_deref())?;
    if a.reps == 0 {
        return Err(CliError::Config("reps must be at least 1".into()));
    }
    let g = read_edge_list(&a.graph)?;
    check_sample_size(a.n, &g)?;
    let est = estimate_inclusion_with_workers(&g, a.n, &p, a.reps, a.seed, a.workers)
        .map_err(|e| CliError::compute("inclusion", e))?;
    let degrees = g.degrees();
    emit(a.out.as_deref(), |w| est.write_csv(&degrees, w))?;
    let fit = match loglog_slope(&est, &degrees) {
        Ok(f) => json!({
            "slope": f.slope, "intercept": f.intercept, "r2": f.r2,
            "used": f.used, "excluded": f.excluded,
        }),
        Err(e) => json!({"error": e.to_string()}),
    };
    eprintln!("{}", json!({ "fit": fit }));
    Ok(())
}

/// Parses `bernoulli:q` or `logistic:a,b`.
pub fn parse_outcome(text: &str) -> Result<OutcomeModel, CliError> {
    let bad = || CliError::Config(format!("bad outcome model {text:?}; use bernoulli:q or logistic:a,b"));
    let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
    let nums: Vec<f64> = rest
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    match (kind, nums.as_slice()) {
        ("bernoulli", &[q]) if (0.0..=1.0).contains(&q) => Ok(OutcomeModel::Bernoulli { q }),
        ("logistic", &[a, b]) if a.is_finite() && b.is_finite() => Ok(OutcomeModel::DegreeLogistic { a, b }),
        _ => Err(bad()),
    }
}

#[derive(Deserialize)]
struct InclusionRow {
    node: usize,
    degree: u32,
    pi_hat: f64,
}

/// Reads an inclusion CSV as a weight oracle labelled by the file stem.
pub fn read_inclusion_oracle(path: &Path, g: &Graph) -> Result<WeightOracle, CliError> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut pi = vec![f64::NAN; g.node_count()];
    for row in reader.deserialize::<InclusionRow>() {
        let row = row.map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        if row.node >= pi.len() || g.degree(row.node as u32) != row.degree {
            return Err(CliError::Io(format!(
                "{}: node {} with degree {} does not match the graph",
                path.display(),
                row.node,
                row.degree
            )));
        }
        pi[row.node] = row.pi_hat;
    }
    if let Some(missing) = pi.iter().position(|x| x.is_nan()) {
        return Err(CliError::Io(format!("{}: no row for node {missing}", path.display())));
    }
    let label = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "inclusion".into());
    Ok(WeightOracle::new(label, pi))
}

pub fn estimate(a: EstimateArgs) -> Result<(), CliError> {
    echo(&json!({
        "command": "estimate",
        "graph": a.graph,
        "n": a.n,
        "probs": a.probs,
        "reps": a.reps,
        "seed": a.seed,
        "outcome": a.outcome,
        "inclusion": a.inclusion,
        "out": opt_path(&a.out),
    }));
    let p = distribution(a.probs.as_deref())?;
    let model = parse_outcome(&a.outcome)?;
    if a.reps == 0 {
        return Err(CliError::Config("reps must be at least 1".into()));
    }
    let g = read_edge_list(&a.graph)?;
    check_sample_size(a.n, &g)?;
    let oracles = a
        .inclusion
        .iter()
        .map(|path| read_inclusion_oracle(path, &g))
        .collect::<Result<Vec<_>, _>>()?;
    let y = synth_outcomes(&g, model, &mut Stream::substream(a.seed, 0))
        .map_err(|e| CliError::compute("outcomes", e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.workers)
        .build()
        .map_err(|e| CliError::Config(format!("workers: {e}")))?;
    let report = pool
        .install(|| bias_report(&g, a.n, &p, &y, &oracles, a.reps, derive_seed(a.seed, 1)))
        .map_err(|e| CliError::compute("estimation", e))?;
    emit(a.out.as_deref(), |w| report.write_csv(w))
}
