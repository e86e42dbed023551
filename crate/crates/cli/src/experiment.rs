//! The full pipeline: one degree sequence, one graph per builder, inclusion
//! estimates on each, and the log-log comparison.

use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use rdslab::degseq::{load_degree_source, resample_graphical, DegreeSource};
use rdslab::graphgen::{degree_assortativity, write_edge_list};
use rdslab::inclusion::{estimate_inclusion_with_workers, loglog_slope};
use rdslab::rng::{derive_seed, Stream};
use serde_json::{json, Map, Value};

use crate::commands::{build_graph, echo, RESAMPLE_ATTEMPTS};
use crate::config::{parse_probs, Builder, DegreeSourceSpec, ExperimentConfig, PartialConfig};
use crate::error::CliError;
use crate::svg::{render, Panel};
use crate::ExperimentArgs;

/// Present in the output directory while a run is in progress or after it
/// failed.
pub const INCOMPLETE_MARKER: &str = "INCOMPLETE";

/// Stage indices fed to `derive_seed(master, k)`.
pub mod stage {
    pub const POOL: u64 = 0;
    pub const RESAMPLE: u64 = 1;
    pub const BKS: u64 = 2;
    pub const INCLUSION_RAMAN: u64 = 3;
    pub const INCLUSION_BKS: u64 = 4;
}

/// Defaults, then the config file, then flags, then `--scale`.
pub fn resolve(args: &ExperimentArgs) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = &args.config {
        PartialConfig::load(path)?.apply(&mut cfg);
    }
    if let Some(p) = &args.degree_source {
        cfg.degree_source = DegreeSourceSpec::File(p.clone());
    }
    if let Some(v) = args.nodes {
        cfg.nodes = v;
    }
    if let Some(v) = args.sample_size {
        cfg.sample_size = v;
    }
    if let Some(v) = args.reps {
        cfg.replications = v;
    }
    if let Some(text) = &args.probs {
        cfg.probs = parse_probs(text)?;
    }
    if let Some(v) = args.seed {
        cfg.master_seed = v;
    }
    if let Some(v) = &args.builders {
        cfg.builders = v.clone();
    }
    if let Some(v) = args.max_retries {
        cfg.max_retries = v;
    }
    if let Some(v) = &args.out_dir {
        cfg.output_dir = v.clone();
    }
    if let Some(f) = args.scale {
        cfg.scale(f)?;
    }
    Ok(cfg)
}

fn inclusion_stage(builder: Builder) -> u64 {
    match builder {
        Builder::Raman => stage::INCLUSION_RAMAN,
        Builder::Bks => stage::INCLUSION_BKS,
    }
}

/// Config echo without the output directory, so that summaries of the same
/// run written to different places are identical.
fn portable_config(cfg: &ExperimentConfig) -> Value {
    let mut v = serde_json::to_value(cfg).expect("config serializes");
    if let Value::Object(map) = &mut v {
        map.remove("output_dir");
    }
    v
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

pub fn run(args: ExperimentArgs) -> Result<(), CliError> {
    let cfg = resolve(&args)?;
    echo(&serde_json::to_value(&cfg).expect("config serializes"));
    cfg.validate()?;
    if args.workers > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(args.workers)
            .build()
            .map_err(|e| CliError::Config(format!("workers: {e}")))?;
    }
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir).map_err(|e| CliError::io(&dir, e))?;
    let marker = dir.join(INCOMPLETE_MARKER);
    write(&marker, "run in progress\n")?;
    match execute(&cfg, &dir, args.workers) {
        Ok(()) => fs::remove_file(&marker).map_err(|e| CliError::io(&marker, e)),
        Err(e) => {
            // Best effort: the marker already flags the directory.
            let _ = fs::write(&marker, format!("{e}\n"));
            Err(e)
        }
    }
}

fn execute(cfg: &ExperimentConfig, dir: &Path, workers: usize) -> Result<(), CliError> {
    let p = cfg.validate()?;
    let master = cfg.master_seed;
    write(&dir.join("config.json"), cfg.to_json() + "\n")?;

    let source = match &cfg.degree_source {
        DegreeSourceSpec::File(path) => load_degree_source(path)?,
        DegreeSourceSpec::Synthetic { pool_size, mean, cap } => {
            DegreeSource::synthetic(*pool_size, *mean, *cap, &mut Stream::substream(master, stage::POOL))?
        }
    };
    let seq = resample_graphical(
        &source,
        cfg.nodes,
        &mut Stream::substream(master, stage::RESAMPLE),
        RESAMPLE_ATTEMPTS,
    )?;
    seq.save(dir.join("degrees.txt"))?;
    info!("degree sequence: {} nodes, total {}", seq.len(), seq.total());

    let mut results = Map::new();
    let mut panels = Vec::new();
    let mut scatter = String::from("builder,node,degree,pi_hat\n");
    let mut seeds = Map::new();
    seeds.insert("pool".into(), json!(derive_seed(master, stage::POOL)));
    seeds.insert("resample".into(), json!(derive_seed(master, stage::RESAMPLE)));

    for &builder in &cfg.builders {
        let name = builder.name();
        let build_seed = derive_seed(master, stage::BKS);
        let (g, attempts) = build_graph(&seq, builder, build_seed, cfg.max_retries)?;
        if builder == Builder::Bks {
            seeds.insert("bks".into(), json!(build_seed));
        }
        write_edge_list(&g, dir.join(format!("graph_{name}.txt")))?;
        let assortativity = degree_assortativity(&g);
        info!("{name}: {} edges, assortativity {assortativity:?}", g.edge_count());

        let inc_seed = derive_seed(master, inclusion_stage(builder));
        seeds.insert(format!("inclusion_{name}"), json!(inc_seed));
        let est = estimate_inclusion_with_workers(&g, cfg.sample_size, &p, cfg.replications, inc_seed, workers)
            .map_err(|e| CliError::compute("inclusion", e))?;
        let degrees = g.degrees();
        let path = dir.join(format!("inclusion_{name}.csv"));
        let mut buf = Vec::new();
        est.write_csv(&degrees, &mut buf).map_err(|e| CliError::io(&path, e))?;
        write(&path, buf)?;

        let fit = loglog_slope(&est, &degrees).map_err(|e| CliError::compute("log-log fit", e))?;
        info!("{name}: slope {:.4}, r2 {:.4}", fit.slope, fit.r2);

        let mut points = Vec::with_capacity(degrees.len());
        for (node, &d) in degrees.iter().enumerate() {
            let pi = est.pi_hat(node);
            scatter.push_str(&format!("{name},{node},{d},{pi}\n"));
            points.push((d as f64, pi));
        }
        panels.push(Panel {
            title: format!("{name} (assortativity {})", assortativity.map_or("n/a".into(), |r| format!("{r:.3}"))),
            points,
            fit: Some((fit.slope, fit.intercept)),
        });
        results.insert(
            name.into(),
            json!({
                "slope": fit.slope,
                "intercept": fit.intercept,
                "r2": fit.r2,
                "used": fit.used,
                "excluded": fit.excluded,
                "assortativity": assortativity,
                "edges": g.edge_count(),
                "attempts": attempts,
                "counting_identity": est.counting_identity_holds(),
            }),
        );
    }

    write(&dir.join("scatter.csv"), scatter)?;
    write(&dir.join("figure.svg"), render(&panels))?;

    let slope_of = |b: &str| results.get(b).and_then(|r| r["slope"].as_f64());
    let ordering = match (slope_of("raman"), slope_of("bks")) {
        (Some(a), Some(b)) => json!(a < b),
        _ => Value::Null,
    };
    let summary = json!({
        "status": "complete",
        "nodes": seq.len(),
        "degree_total": seq.total(),
        "graphs": results,
        "raman_slope_below_bks": ordering,
        "seeds": seeds,
        "config": portable_config(cfg),
    });
    write(
        &dir.join("summary.json"),
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
    )
}

/// Output files of a completed run, in a fixed order.
pub fn output_files(cfg: &ExperimentConfig) -> Vec<PathBuf> {
    let dir = &cfg.output_dir;
    let mut files = vec![dir.join("config.json"), dir.join("degrees.txt")];
    for b in &cfg.builders {
        files.push(dir.join(format!("graph_{}.txt", b.name())));
        files.push(dir.join(format!("inclusion_{}.csv", b.name())));
    }
    files.extend(["scatter.csv", "figure.svg", "summary.json"].map(|f| dir.join(f)));
    files
}
