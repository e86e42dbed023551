//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Set `RDSLAB_FULL_SCALE=1` to also run the full-size
//! inclusion comparison (N = 5000, n = 373, R = 10000).

use std::collections::HashSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rdslab::degseq::{
    is_graphical, resample_graphical, DegreeSequence, DegreeSource, SYNTHETIC_CAP, SYNTHETIC_MEAN,
    SYNTHETIC_POOL_SIZE,
};
use rdslab::estimators::{
    bias_report, horvitz_thompson, naive_mean, rds_two, synth_outcomes, OutcomeAssignment, OutcomeModel,
    WeightOracle,
};
use rdslab::graphgen::{build_bks, build_raman, Graph};
use rdslab::inclusion::{estimate_inclusion, estimate_inclusion_with_workers, loglog_slope, InclusionEstimate};
use rdslab::rng::Stream;
use rdslab::sampler::{draw_sample, RecruitmentDistribution};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// All degree sequences (sorted non-increasing) realized by some simple
/// graph on `n` nodes, by enumerating every edge subset.
fn realizable_sequences(n: usize) -> HashSet<Vec<u32>> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    let mut out = HashSet::new();
    for mask in 0u64..(1u64 << pairs.len()) {
        let mut deg = vec![0u32; n];
        for (bit, &(u, v)) in pairs.iter().enumerate() {
            if mask >> bit & 1 == 1 {
                deg[u] += 1;
                deg[v] += 1;
            }
        }
        deg.sort_unstable_by(|a, b| b.cmp(a));
        out.insert(deg);
    }
    out
}

fn non_increasing(len: usize, max: u32) -> Vec<Vec<u32>> {
    fn rec(len: usize, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in (0..=cap).rev() {
            prefix.push(v);
            rec(len, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(len, max, &mut Vec::new(), &mut out);
    out
}

fn c1_graphicality_oracle() -> Outcome {
    let start = Instant::now();
    let mut cases = 0;
    let mut mismatches = Vec::new();
    for n in 1..=7 {
        let realizable = realizable_sequences(n);
        for degrees in non_increasing(n, 6) {
            cases += 1;
            let oracle = realizable.contains(&degrees);
            // entries >= N are rejected by the type; such sequences are never realizable
            let verdict = DegreeSequence::new(degrees.clone())
                .map(|s| is_graphical(&s))
                .unwrap_or(false);
            if verdict != oracle {
                mismatches.push(degrees);
            }
        }
    }
    let elapsed = start.elapsed();
    outcome(
        mismatches.is_empty() && elapsed < Duration::from_secs(120),
        format!("{cases} sequences, {} mismatches, {elapsed:.1?}", mismatches.len()),
    )
}

fn synthetic_source(seed: u64) -> DegreeSource {
    let mut rng = Stream::from_seed(seed);
    DegreeSource::synthetic(SYNTHETIC_POOL_SIZE, SYNTHETIC_MEAN, SYNTHETIC_CAP, &mut rng).unwrap()
}

fn c2_constructor_exactness() -> Outcome {
    let source = synthetic_source(2);
    let mut rng = Stream::from_seed(20);
    let mut raman_exact = 0;
    let mut bks_ok = 0;
    let mut bks_inexact = 0;
    for _ in 0..100 {
        let nodes = 60 + rng.index(141);
        let seq = resample_graphical(&source, nodes, &mut rng, 1000).unwrap();
        let g = build_raman(&seq).unwrap();
        if g.validate().is_ok() && g.degrees() == seq.degrees() {
            raman_exact += 1;
        }
        if let Ok(g) = build_bks(&seq, &mut rng, 100) {
            bks_ok += 1;
            if g.validate().is_err() || g.degrees() != seq.degrees() {
                bks_inexact += 1;
            }
        }
    }
    outcome(
        raman_exact == 100 && bks_ok >= 95 && bks_inexact == 0,
        format!("raman exact {raman_exact}/100, bks succeeded {bks_ok}/100, bks inexact {bks_inexact}"),
    )
}

fn c3_bks_uniformity() -> Outcome {
    let seq = DegreeSequence::new(vec![1, 1, 1, 1]).unwrap();
    let mut rng = Stream::from_seed(3);
    let runs = 30_000;
    let mut counts = [0usize; 3];
    for _ in 0..runs {
        let g = build_bks(&seq, &mut rng, 100).unwrap();
        let partner = g.neighbors(0)[0] as usize;
        counts[partner - 1] += 1;
    }
    let freqs: Vec<f64> = counts.iter().map(|&c| c as f64 / runs as f64).collect();
    let pass = freqs.iter().all(|f| (f - 1.0 / 3.0).abs() <= 0.02);
    outcome(pass, format!("matching frequencies {freqs:.4?}"))
}

fn max_deviation(est: &InclusionEstimate, target: f64) -> f64 {
    est.pi_hats()
        .iter()
        .map(|p| (p - target).abs())
        .fold(0.0, f64::max)
}

fn c4_uniform_seeds() -> (Outcome, bool) {
    let source = synthetic_source(4);
    let mut rng = Stream::from_seed(40);
    let seq = resample_graphical(&source, 100, &mut rng, 1000).unwrap();
    let g = build_bks(&seq, &mut rng, 100).unwrap();
    let est = estimate_inclusion(&g, 20, &RecruitmentDistribution::no_recruitment(), 50_000, 4).unwrap();
    let dev = max_deviation(&est, 0.2);
    (
        outcome(dev <= 0.01, format!("max |pi_hat - 0.20| = {dev:.4}")),
        est.counting_identity_holds(),
    )
}

fn complete_graph(n: u32) -> Graph {
    Graph::from_edges(n as usize, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

fn c5_symmetry() -> (Outcome, bool) {
    let g = complete_graph(30);
    let est = estimate_inclusion(&g, 10, &RecruitmentDistribution::observed(), 20_000, 5).unwrap();
    let dev = max_deviation(&est, 1.0 / 3.0);
    (
        outcome(dev <= 0.02, format!("max |pi_hat - 1/3| = {dev:.4}")),
        est.counting_identity_holds(),
    )
}

struct FigureTwo {
    raman: f64,
    bks: f64,
    elapsed: Duration,
    identities: bool,
}

fn figure_two(nodes: usize, n: usize, reps: u64, seed: u64) -> FigureTwo {
    let start = Instant::now();
    let source = synthetic_source(seed);
    let mut rng = Stream::from_seed(seed ^ 0x5eed);
    let seq = resample_graphical(&source, nodes, &mut rng, 1000).unwrap();
    let g1 = build_raman(&seq).unwrap();
    let g2 = build_bks(&seq, &mut rng, 100).unwrap();
    let p = RecruitmentDistribution::observed();
    let e1 = estimate_inclusion(&g1, n, &p, reps, seed).unwrap();
    let e2 = estimate_inclusion(&g2, n, &p, reps, seed).unwrap();
    let raman = loglog_slope(&e1, seq.degrees()).unwrap().slope;
    let bks = loglog_slope(&e2, seq.degrees()).unwrap().slope;
    FigureTwo {
        raman,
        bks,
        elapsed: start.elapsed(),
        identities: e1.counting_identity_holds() && e2.counting_identity_holds(),
    }
}

fn slope_windows(f: &FigureTwo, budget: Duration) -> Outcome {
    let raman_ok = (0.35..=0.70).contains(&f.raman);
    let bks_ok = (0.85..=1.15).contains(&f.bks);
    let gap_ok = f.bks - f.raman >= 0.25;
    outcome(
        raman_ok && bks_ok && gap_ok && f.elapsed < budget,
        format!(
            "slope raman {:.3} [0.35,0.70] {}, bks {:.3} [0.85,1.15] {}, gap {:.3} >= 0.25 {}, {:.1?}",
            f.raman,
            if raman_ok { "ok" } else { "OUT" },
            f.bks,
            if bks_ok { "ok" } else { "OUT" },
            f.bks - f.raman,
            if gap_ok { "ok" } else { "OUT" },
            f.elapsed
        ),
    )
}

fn c8_estimator_identities() -> Outcome {
    let mut rng = Stream::from_seed(8);
    let p = RecruitmentDistribution::observed();
    let mut worst_uniform: f64 = 0.0;
    let mut worst_scale: f64 = 0.0;
    let mut rds_mismatch = 0;
    for _ in 0..1000 {
        let nodes = 10 + rng.index(40);
        let source = DegreeSource::new((1..=6).collect()).unwrap();
        let seq = resample_graphical(&source, nodes, &mut rng, 1000).unwrap();
        let g = build_bks(&seq, &mut rng, 100).unwrap();
        let n = 1 + rng.index(nodes);
        let sample = draw_sample(&g, n, &p, &mut rng).unwrap();
        let y = OutcomeAssignment::new((0..nodes).map(|_| rng.uniform() * 10.0 - 5.0).collect());
        let uniform = WeightOracle::new("u", vec![0.25; nodes]);
        let ht = horvitz_thompson(&sample, &y, &uniform).unwrap();
        worst_uniform = worst_uniform.max((ht - naive_mean(&sample, &y).unwrap()).abs());

        let pi = WeightOracle::new("pi", (0..nodes).map(|_| 0.01 + rng.uniform()).collect());
        let c = 10f64.powf(rng.uniform() * 6.0 - 3.0);
        let a = horvitz_thompson(&sample, &y, &pi).unwrap();
        let b = horvitz_thompson(&sample, &y, &pi.scaled(c)).unwrap();
        worst_scale = worst_scale.max((a - b).abs());

        if rds_two(&sample, &y).unwrap() != horvitz_thompson(&sample, &y, &WeightOracle::degrees(&g)).unwrap() {
            rds_mismatch += 1;
        }
    }
    outcome(
        worst_uniform <= 1e-12 && worst_scale <= 1e-12 && rds_mismatch == 0,
        format!(
            "max |HT_uniform - mean| {worst_uniform:.2e}, max scale drift {worst_scale:.2e}, rds-ii mismatches {rds_mismatch}"
        ),
    )
}

fn c9_parallel_reproducibility() -> (Outcome, bool) {
    let source = synthetic_source(9);
    let mut rng = Stream::from_seed(90);
    let seq = resample_graphical(&source, 400, &mut rng, 1000).unwrap();
    let g = build_bks(&seq, &mut rng, 100).unwrap();
    let p = RecruitmentDistribution::observed();
    let runs: Vec<InclusionEstimate> = [1, 2, 8]
        .iter()
        .map(|&w| estimate_inclusion_with_workers(&g, 60, &p, 3000, 99, w).unwrap())
        .collect();
    let same = runs.windows(2).all(|w| w[0] == w[1]);
    (
        outcome(same, format!("workers 1/2/8 identical: {same}")),
        runs.iter().all(|e| e.counting_identity_holds()),
    )
}

fn c10_headline() -> (Outcome, bool) {
    let source = synthetic_source(10);
    let mut rng = Stream::from_seed(100);
    let seq = resample_graphical(&source, 1000, &mut rng, 1000).unwrap();
    let g = build_raman(&seq).unwrap();
    let p = RecruitmentDistribution::observed();
    let n = 150;
    let y = synth_outcomes(&g, OutcomeModel::DegreeLogistic { a: -1.0, b: 0.8 }, &mut rng).unwrap();
    // probabilities estimated on streams disjoint from the evaluation run
    let est = estimate_inclusion(&g, n, &p, 20_000, 1010).unwrap();
    let mc = WeightOracle::new("monte_carlo", est.pi_hats());
    let report = bias_report(&g, n, &p, &y, &[mc], 5000, 1011).unwrap();
    let ht = report.row("horvitz_thompson", "monte_carlo").unwrap();
    let rds = report.row("rds_ii", "degree").unwrap();
    let combined = (ht.stderr.powi(2) + rds.stderr.powi(2)).sqrt();
    let gap = rds.bias.abs() - ht.bias.abs();
    (
        outcome(
            ht.bias.abs() < rds.bias.abs() && gap > 3.0 * combined,
            format!(
                "|bias| HT(MC pi) {:.4} vs RDS-II {:.4}, gap {:.4} > 3 x {:.4}",
                ht.bias.abs(),
                rds.bias.abs(),
                gap,
                combined
            ),
        ),
        est.counting_identity_holds(),
    )
}

fn main() -> ExitCode {
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    let mut identity_runs = Vec::new();

    results.push(("C1 graphicality oracle equivalence", c1_graphicality_oracle()));
    results.push(("C2 constructor exactness", c2_constructor_exactness()));
    results.push(("C3 BKS uniformity on (1,1,1,1)", c3_bks_uniformity()));
    let (c4, id4) = c4_uniform_seeds();
    results.push(("C4 uniform-seed inclusion = n/N", c4));
    let (c5, id5) = c5_symmetry();
    results.push(("C5 complete-graph symmetry", c5));
    identity_runs.extend([id4, id5]);

    let fig = figure_two(1000, 150, 2000, 7);
    identity_runs.push(fig.identities);
    let c7 = slope_windows(&fig, Duration::from_secs(600));

    results.push(("C8 estimator identities", c8_estimator_identities()));
    let (c9, id9) = c9_parallel_reproducibility();
    let (c10, id10) = c10_headline();
    identity_runs.extend([id9, id10]);

    if std::env::var("RDSLAB_FULL_SCALE").is_ok_and(|v| v == "1") {
        let full = figure_two(5000, 373, 10_000, 7);
        identity_runs.push(full.identities);
        results.push(("C7 full-scale slope windows (optional)", slope_windows(&full, Duration::from_secs(3600))));
    }

    let all_identities = identity_runs.iter().all(|&b| b);
    results.push((
        "C6 counting identity",
        outcome(
            all_identities,
            format!("sum(counts) == n*R on {} inclusion runs", identity_runs.len()),
        ),
    ));
    results.push(("C7 log-log slope windows", c7));
    results.push(("C9 parallel reproducibility", c9));
    results.push(("C10 HT with MC pi beats RDS-II", c10));
    results.sort_by_key(|(name, _)| {
        let digits: String = name[1..].chars().take_while(|c| c.is_ascii_digit()).collect();
        digits.parse::<u32>().unwrap_or(0)
    });

    let mut failed = 0;
    for (name, o) in &results {
        println!("[{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        if !o.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
