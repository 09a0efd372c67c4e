use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use qiham_core::evolution::{
    bipartite_state, evolve as run_evolution, partial_trace_a, EvolutionConfig, FeasibilityMask,
    Snapshot, StateSource, TraceRecord, DEFAULT_SNAPSHOT_STRIDE,
};
use qiham_core::killweb::{
    killweb_mask, run_killweb, state_provider, CategoryLayout, ScenarioResult, DEFAULT_ENERGIES,
    KILLWEB_NODES,
};
use qiham_core::measurement::{best_alignment, classical_expectation, rank1_operator};
use qiham_core::qig::{optimize_superposition, Allocation, SearchConfig, SearchSpace};
use qiham_core::quantum_state::{
    coherence, entanglement_entropy, purity, torus_coordinates, DensityMatrix,
};
use qiham_core::{Error, RandomStream};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::table::{
    ensure_dir, fmt_list, fmt_num, read_complex_matrix, read_mask, read_split_matrix,
    render_matrix, render_rows, write_text,
};
use crate::{KillwebArgs, MetricsArgs, PageArgs, RunArgs, ScoreArgs, TorusArgs};

const TRACE_HEADER: [&str; 9] = [
    "t",
    "two_norm",
    "spectral_radius",
    "qtv_real",
    "qtv_abs",
    "purity",
    "qee",
    "coherence",
    "trace_H",
];

const SUMMARY_HEADER: [&str; 6] = [
    "seed",
    "peak_two_norm",
    "peak_step",
    "final_two_norm",
    "best_weights",
    "best_energies",
];

fn invalid(msg: impl Into<String>) -> CliError {
    Error::InvalidConfiguration(msg.into()).into()
}

pub fn metrics(args: &MetricsArgs) -> Result<String, CliError> {
    let m = match &args.imag {
        Some(im) => read_split_matrix(&args.input, im)?,
        None => read_complex_matrix(&args.input)?,
    };
    let residual = m.max_abs_diff(&m.adjoint())?;
    let trace = m.trace().re;
    let rho = DensityMatrix::new(m)?;
    let values = [
        ("purity", purity(&rho)),
        ("qee", entanglement_entropy(&rho)),
        ("coherence", coherence(rho.matrix())?),
        ("trace", trace),
        ("hermitian_residual", residual),
    ];
    ensure_dir(&args.out)?;
    let header: Vec<&str> = values.iter().map(|(k, _)| *k).collect();
    let row: Vec<String> = values.iter().map(|(_, v)| fmt_num(*v)).collect();
    write_text(&args.out.join("metrics.csv"), &render_rows(&header, &[row]))?;
    Ok(key_values(&values))
}

fn key_values(values: &[(&str, f64)]) -> String {
    let mut out = String::new();
    for (k, v) in values {
        writeln!(out, "{k} = {}", fmt_num(*v)).unwrap();
    }
    out
}

pub fn score(args: &ScoreArgs) -> Result<String, CliError> {
    let best = best_alignment(args.alpha, args.lambda1, args.e0, args.e1)?;
    let classical = classical_expectation(args.lambda1, &rank1_operator(args.alpha))?;
    let values = [
        ("t_star", best.t_star),
        ("quantum", best.qtv_max),
        ("classical", classical),
        ("gap", best.qtv_max - classical),
    ];
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        let header = ["alpha", "lambda1", "e0", "e1"]
            .into_iter()
            .chain(values.iter().map(|(k, _)| *k))
            .collect::<Vec<_>>();
        let row = [args.alpha, args.lambda1, args.e0, args.e1]
            .into_iter()
            .chain(values.iter().map(|(_, v)| *v))
            .map(fmt_num)
            .collect();
        write_text(&out.join("score.csv"), &render_rows(&header, &[row]))?;
    }
    Ok(key_values(&values))
}

pub fn page(args: &PageArgs) -> Result<String, CliError> {
    if args.samples == 0 {
        return Err(invalid("samples must be positive"));
    }
    let mut stream = RandomStream::new(args.seed, 0);
    let mut entropies = Vec::with_capacity(args.samples);
    for _ in 0..args.samples {
        let psi = bipartite_state(args.n, args.d, &mut stream)?;
        entropies.push(entanglement_entropy(&partial_trace_a(
            &psi, args.n, args.d,
        )?));
    }
    let k = entropies.len() as f64;
    let mean = entropies.iter().sum::<f64>() / k;
    let std_error = if entropies.len() > 1 {
        let var = entropies.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (k - 1.0);
        (var / k).sqrt()
    } else {
        0.0
    };
    let values = [("mean", mean), ("std_error", std_error)];
    if let Some(out) = &args.out {
        ensure_dir(out)?;
        let row = vec![
            args.n.to_string(),
            args.d.to_string(),
            args.samples.to_string(),
            args.seed.to_string(),
            fmt_num(mean),
            fmt_num(std_error),
        ];
        write_text(
            &out.join("page.csv"),
            &render_rows(&["n", "d", "samples", "seed", "mean", "std_error"], &[row]),
        )?;
    }
    Ok(key_values(&values))
}

pub fn torus(args: &TorusArgs) -> Result<String, CliError> {
    if args.steps == 0 {
        return Err(invalid("steps must be positive"));
    }
    if !args.t_max.is_finite() || args.t_max < 0.0 {
        return Err(invalid(format!(
            "t_max = {} must be finite and nonnegative",
            args.t_max
        )));
    }
    let mut rows = Vec::with_capacity(args.steps);
    for k in 0..args.steps {
        let t = if args.steps == 1 {
            0.0
        } else {
            args.t_max * k as f64 / (args.steps - 1) as f64
        };
        let p = torus_coordinates(args.lambda0, args.lambda1, args.e0, args.e1, t)?;
        rows.push([t, p.x, p.y, p.z].into_iter().map(fmt_num).collect());
    }
    ensure_dir(&args.out)?;
    let path = args.out.join("torus.csv");
    write_text(&path, &render_rows(&["t", "X", "Y", "Z"], &rows))?;
    Ok(format!(
        "wrote {} points to {}\n",
        rows.len(),
        path.display()
    ))
}

/// Everything a run needs, checked before any computation starts.
#[derive(Debug, Clone)]
struct Plan {
    config: EvolutionConfig,
    mask: FeasibilityMask,
    layout: CategoryLayout,
    weights: Allocation,
    energies: Vec<f64>,
    search: SearchConfig,
    out: PathBuf,
}

fn load_config(args: &RunArgs) -> Result<RunConfig, CliError> {
    match &args.config {
        Some(path) => RunConfig::load(path),
        None => Ok(RunConfig::default()),
    }
}

fn default_energies(k: usize) -> Vec<f64> {
    if k <= DEFAULT_ENERGIES.len() {
        DEFAULT_ENERGIES[..k].to_vec()
    } else {
        (0..k).map(|j| j as f64).collect()
    }
}

fn build_plan(
    cfg: &RunConfig,
    args: &RunArgs,
    mask: FeasibilityMask,
    layout: Option<CategoryLayout>,
    source: StateSource,
) -> Result<Plan, CliError> {
    let n = mask.dim();
    let config = EvolutionConfig {
        eta: cfg.eta.unwrap_or(0.7),
        lambda_decay: cfg.lambda_decay.unwrap_or(0.7),
        steps: cfg.steps.unwrap_or(500),
        n,
        d: cfg.d.unwrap_or(1),
        seed: args.seed.or(cfg.seed).unwrap_or(0),
        state_source: cfg.state_source.unwrap_or(source),
        snapshot_stride: args
            .stride
            .or(cfg.snapshot_stride)
            .unwrap_or(DEFAULT_SNAPSHOT_STRIDE),
    };
    config.validate()?;

    let k = match (&layout, &cfg.weights, &cfg.energies) {
        (Some(l), _, _) => l.categories(),
        (None, Some(w), _) => w.len(),
        (None, None, Some(e)) => e.len(),
        (None, None, None) => n.min(4),
    };
    let layout = match layout {
        Some(l) => l,
        None => CategoryLayout::even(n, k)?,
    };
    let weights = match &cfg.weights {
        Some(w) => Allocation::new(w.clone())?,
        None => Allocation::uniform(k)?,
    };
    let energies = cfg.energies.clone().unwrap_or_else(|| default_energies(k));
    if weights.len() != k || energies.len() != k {
        return Err(Error::InvalidShape(format!(
            "{} weights and {} energies for {k} categories",
            weights.len(),
            energies.len()
        ))
        .into());
    }

    let defaults = SearchConfig::default();
    let search = SearchConfig {
        grid_points: cfg.grid_points.unwrap_or(defaults.grid_points),
        restarts: cfg.restarts.unwrap_or(defaults.restarts),
        max_rounds: cfg.max_rounds.unwrap_or(defaults.max_rounds),
        tolerance: cfg.tolerance.unwrap_or(defaults.tolerance),
        seed: config.seed,
    };
    search.validate()?;

    let out = args
        .out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out"));
    Ok(Plan {
        config,
        mask,
        layout,
        weights,
        energies,
        search,
        out,
    })
}

fn write_trace(dir: &Path, records: &[TraceRecord]) -> Result<(), CliError> {
    let rows: Vec<Vec<String>> = records
        .iter()
        .map(|r| {
            let mut row = vec![r.t.to_string()];
            row.extend(
                [
                    r.two_norm,
                    r.spectral_radius,
                    r.qtv_real,
                    r.qtv_abs,
                    r.purity,
                    r.qee,
                    r.coherence,
                    r.trace_h,
                ]
                .into_iter()
                .map(fmt_num),
            );
            row
        })
        .collect();
    write_text(&dir.join("trace.csv"), &render_rows(&TRACE_HEADER, &rows))
}

fn write_run(
    dir: &Path,
    records: &[TraceRecord],
    snapshots: &[Snapshot],
    best: &Snapshot,
    last: &Snapshot,
) -> Result<(), CliError> {
    ensure_dir(dir)?;
    write_trace(dir, records)?;
    let matrix = |s: &Snapshot| render_matrix(s.hamiltonian.matrix());
    write_text(&dir.join("H_best.csv"), &matrix(best))?;
    write_text(&dir.join("H_final.csv"), &matrix(last))?;
    for s in snapshots {
        write_text(&dir.join(format!("H_{}.csv", s.t)), &matrix(s))?;
    }
    Ok(())
}

fn run_line(records: &[TraceRecord], best: &Snapshot, last: &Snapshot) -> String {
    format!(
        "peak two_norm {} at step {}; final two_norm {} at step {}\n",
        fmt_num(records[best.t].two_norm),
        best.t,
        fmt_num(records[last.t].two_norm),
        last.t
    )
}

pub fn evolve(args: &RunArgs) -> Result<String, CliError> {
    let cfg = load_config(args)?;
    let mask = match &cfg.mask_path {
        Some(path) => {
            let mask = read_mask(path)?;
            if let Some(n) = cfg.n {
                if n != mask.dim() {
                    return Err(invalid(format!(
                        "n = {n} but the mask is {0}x{0}",
                        mask.dim()
                    )));
                }
            }
            mask
        }
        None => FeasibilityMask::ones(cfg.n.unwrap_or(KILLWEB_NODES))?,
    };
    let plan = build_plan(&cfg, args, mask, None, StateSource::RandomBipartite)?;
    let mut provider = state_provider(&plan.config, &plan.layout, &plan.weights, &plan.energies)?;
    let ev = run_evolution(&plan.config, &plan.mask, provider.as_mut())?;
    write_run(&plan.out, &ev.records, &ev.snapshots, &ev.best, &ev.last)?;
    Ok(run_line(&ev.records, &ev.best, &ev.last))
}

struct SeedRun {
    seed: u64,
    result: ScenarioResult,
    weights: Allocation,
    energies: Vec<f64>,
}

fn killweb_seed(plan: &Plan, seed: u64, optimize: bool) -> Result<SeedRun, CliError> {
    let config = EvolutionConfig {
        seed,
        ..plan.config.clone()
    };
    let (weights, energies) = if optimize {
        let space = SearchSpace::full(plan.weights.clone(), plan.energies.clone());
        let search = SearchConfig {
            seed,
            ..plan.search.clone()
        };
        let mut scenario =
            |w: &Allocation, e: &[f64]| run_killweb(&config, w, e).map(|r| r.peak_two_norm);
        let outcome = optimize_superposition(&mut scenario, &space, &search)?;
        (outcome.weights, outcome.energies)
    } else {
        (plan.weights.clone(), plan.energies.clone())
    };
    let result = run_killweb(&config, &weights, &energies)?;
    Ok(SeedRun {
        seed,
        result,
        weights,
        energies,
    })
}

pub fn killweb(args: &KillwebArgs) -> Result<String, CliError> {
    let cfg = load_config(&args.run)?;
    if cfg.mask_path.is_some() {
        return Err(invalid(
            "killweb uses its fixed mask; mask_path is not allowed",
        ));
    }
    if let Some(n) = cfg.n {
        if n != KILLWEB_NODES {
            return Err(invalid(format!(
                "kill web has {KILLWEB_NODES} nodes, config has n = {n}"
            )));
        }
    }
    let plan = build_plan(
        &cfg,
        &args.run,
        killweb_mask(),
        Some(CategoryLayout::killweb()),
        StateSource::BlueSuperposition,
    )?;
    let count = args.seeds.unwrap_or(1);
    if count == 0 {
        return Err(invalid("--seeds must be positive"));
    }
    let first = plan.config.seed;
    let seeds: Vec<u64> = (0..count as u64)
        .map(|i| first.checked_add(i))
        .collect::<Option<_>>()
        .ok_or_else(|| invalid("seed range overflows u64"))?;

    let runs: Vec<SeedRun> = seeds
        .par_iter()
        .map(|&s| killweb_seed(&plan, s, args.optimize))
        .collect::<Result<_, _>>()?;

    ensure_dir(&plan.out)?;
    let mut report = String::new();
    let mut summary = Vec::with_capacity(runs.len());
    for run in &runs {
        let r = &run.result;
        let dir = if args.seeds.is_some() {
            plan.out.join(format!("seed_{}", run.seed))
        } else {
            plan.out.clone()
        };
        write_run(&dir, &r.records, &r.snapshots, &r.best, &r.final_h)?;
        summary.push(vec![
            run.seed.to_string(),
            fmt_num(r.peak_two_norm),
            r.peak_step().to_string(),
            fmt_num(r.final_two_norm),
            fmt_list(run.weights.values()),
            fmt_list(&run.energies),
        ]);
        write!(report, "seed {}: ", run.seed).unwrap();
        report.push_str(&run_line(&r.records, &r.best, &r.final_h));
    }
    write_text(
        &plan.out.join("summary.csv"),
        &render_rows(&SUMMARY_HEADER, &summary),
    )?;
    Ok(report)
}
