use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use corrector_lab::acceptance::Acceptance;
use corrector_lab::config::{OutputFormat, RunConfig};
use corrector_lab::elliptic::solve_exact;
use corrector_lab::elliptic::solve_homogenized;
use corrector_lab::harness::{
    amplification_from_samples, collect_samples, mean_square_sup, summarize, theory_kernel, with_threads, AmplificationReport, ExperimentPlan,
    ExperimentReport, THREADS_ENV,
};
use corrector_lab::io::{fmt_real, OutputSet};
use corrector_lab::kernels::{covariance_lrc_matrix, covariance_src_matrix, KernelContext, KernelId, KernelTable};
use corrector_lab::random_media::{correlation_facts, MediumSampler};
use corrector_lab::schemes::solve;
use corrector_lab::{Error, Result, SchemeKind};
use serde::Serialize;

const ACCEPTANCE_FAILURE: u8 = 4;

#[derive(Parser)]
#[command(name = "corrector-lab", version, about = "Corrector test for multiscale schemes on the 1-D random elliptic equation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory; overrides `[output] directory`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Root seed; overrides `[ensemble] seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for Monte Carlo loops.
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
}

#[derive(Args)]
struct KernelArgs {
    /// Kernels to evaluate (L, Lh, Lh11, Lh12, Lh2, Lhdelta); defaults to L
    /// plus the limit kernel of every configured scheme.
    #[arg(long, value_delimiter = ',')]
    kernel: Vec<String>,
}

#[derive(Subcommand)]
enum Command {
    /// Write one realization of the medium as CSV.
    Medium {
        #[command(flatten)]
        common: Common,
        /// Realization index; defaults to `[ensemble] first_index`.
        #[arg(long)]
        index: Option<u64>,
    },
    /// Solve one realization with every configured scheme.
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        index: Option<u64>,
    },
    /// Tabulate limit and discrete kernels on a t grid.
    Kernel {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        kernels: KernelArgs,
        /// Number of uniformly spaced t values in [0, 1].
        #[arg(long, default_value_t = 201)]
        t_points: usize,
    },
    /// Limit covariance matrices at the configured probes.
    Covariance {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        kernels: KernelArgs,
        /// Override σ² for short-range media.
        #[arg(long)]
        sigma2: Option<f64>,
    },
    /// Full Monte Carlo ensemble with comparison against the limit covariances.
    Mc {
        #[command(flatten)]
        common: Common,
    },
    /// Fit the ε-exponent of the mean-square corrector for each scheme and mesh.
    Rates {
        #[command(flatten)]
        common: Common,
    },
    /// Run the built-in acceptance suite.
    Check {
        #[command(flatten)]
        common: Common,
        /// Comma-separated criterion ids; all when omitted.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Medium { common, .. }
            | Command::Solve { common, .. }
            | Command::Kernel { common, .. }
            | Command::Covariance { common, .. }
            | Command::Mc { common }
            | Command::Rates { common }
            | Command::Check { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Medium { .. } => "medium",
            Command::Solve { .. } => "solve",
            Command::Kernel { .. } => "kernel",
            Command::Covariance { .. } => "covariance",
            Command::Mc { .. } => "mc",
            Command::Rates { .. } => "rates",
            Command::Check { .. } => "check",
        }
    }
}

fn load_config(common: &Common) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        cfg = cfg.with_seed(seed);
    }
    if let Some(out) = &common.out {
        cfg.output.directory = out.clone();
    }
    Ok(cfg)
}

fn first<T: Copy>(v: &[T], field: &str) -> Result<T> {
    v.first().copied().ok_or_else(|| Error::config(field, "ladder is empty"))
}

fn reals(v: &[f64]) -> impl Iterator<Item = String> + '_ {
    v.iter().map(|&x| fmt_real(x))
}

/// Requested kernels with their patch ratio, defaulting to L plus the limit
/// kernel of each scheme.
fn kernel_list(args: &KernelArgs, cfg: &RunConfig, plan: &ExperimentPlan) -> Result<Vec<(KernelId, f64)>> {
    let hmm_ratio = plan
        .schemes
        .iter()
        .find_map(|s| match s.kind {
            SchemeKind::Hmm { delta_over_h } => Some(delta_over_h),
            _ => None,
        })
        .unwrap_or(1.0);
    let mut out: Vec<(KernelId, f64)> = Vec::new();
    if args.kernel.is_empty() {
        out.push((KernelId::L, 1.0));
        out.extend(cfg.schemes_on(first(&plan.meshes, "ensemble.meshes")?)?.iter().filter_map(|s| theory_kernel(s.kind)));
    } else {
        for name in &args.kernel {
            let id = KernelId::parse(name.trim())
                .ok_or_else(|| Error::Argument(format!("unknown kernel {name:?}; expected one of L, Lh, Lh11, Lh12, Lh2, Lhdelta")))?;
            out.push((id, if id == KernelId::Lhdelta { hmm_ratio } else { 1.0 }));
        }
    }
    let mut unique = Vec::new();
    for k in out {
        if !unique.contains(&k) {
            unique.push(k);
        }
    }
    Ok(unique)
}

#[derive(Serialize)]
struct CovarianceEntry {
    kernel: KernelId,
    n_elements: usize,
    delta_over_h: f64,
    probes: Vec<f64>,
    values: Vec<f64>,
    min_eigenvalue: f64,
}

#[derive(Serialize)]
struct McReport {
    #[serde(flatten)]
    report: ExperimentReport,
    amplification: Vec<AmplificationReport>,
}

/// Runs the command; `Ok(false)` means the acceptance suite reported a failure.
fn run(cmd: &Command) -> Result<bool> {
    let common = cmd.common();
    let cfg = load_config(common)?;
    let plan = cfg.plan()?;
    let mut out = OutputSet::create(&cfg.output.directory, &cfg.output.formats)?;
    let mut ok = true;
    match cmd {
        Command::Medium { index, .. } => {
            let eps = first(&plan.epsilons, "ensemble.epsilons")?;
            let sample = MediumSampler::new(&plan.medium.with_epsilon(eps))?.sample(index.unwrap_or(plan.first_index))?;
            sample.write_csv(out.create_file("medium.csv")?)?;
        }
        Command::Solve { index, .. } => {
            let eps = first(&plan.epsilons, "ensemble.epsilons")?;
            let spec = plan.medium.with_epsilon(eps);
            let sample = MediumSampler::new(&spec)?.sample(index.unwrap_or(plan.first_index))?;
            let exact = solve_exact(&sample, &plan.source)?;
            let homog = solve_homogenized(spec.a_star, &plan.source)?;
            let mut rows = Vec::new();
            for &n in &plan.meshes {
                for cfg in cfg.schemes_on(n)? {
                    let sol = solve(&sample, &cfg, &plan.source)?;
                    for k in 0..=n {
                        let x = k as f64 / n as f64;
                        let vals = [x, sol.node(k), exact.value(x)?, homog.value(x)?];
                        rows.push([cfg.label(), n.to_string(), k.to_string()].into_iter().chain(reals(&vals)).collect::<Vec<_>>());
                    }
                }
            }
            out.csv("solution.csv", &["scheme", "n_elements", "k", "x", "u_h", "u_exact", "u_homogenized"], rows)?;
        }
        Command::Kernel { kernels, t_points, .. } => {
            if *t_points < 2 {
                return Err(Error::Argument("--t-points must be at least 2".into()));
            }
            let t_grid: Vec<f64> = (0..*t_points).map(|i| i as f64 / (*t_points - 1) as f64).collect();
            for &n in &plan.meshes {
                let mut tables = Vec::new();
                for (id, d) in kernel_list(kernels, &cfg, &plan)? {
                    let ctx = KernelContext::new(plan.medium.a_star, &plan.source, n, d)?;
                    tables.push(KernelTable::build(&ctx, id, &plan.probes, &t_grid)?);
                }
                KernelTable::write_csv(&tables, out.create_file(&format!("kernels_n{n}.csv"))?)?;
            }
        }
        Command::Covariance { kernels, sigma2, .. } => {
            let spec = plan.medium.with_epsilon(first(&plan.epsilons, "ensemble.epsilons")?);
            let long = spec.model.is_long_range();
            let facts = if long || sigma2.is_none() { Some(correlation_facts(&spec)?) } else { None };
            let mut entries = Vec::new();
            for &n in &plan.meshes {
                for (id, d) in kernel_list(kernels, &cfg, &plan)? {
                    let ctx = KernelContext::new(spec.a_star, &plan.source, n, d)?;
                    let m = match (&facts, long) {
                        (Some(f), true) => covariance_lrc_matrix(&ctx, id, f.kappa, f.alpha, &plan.probes)?,
                        _ => covariance_src_matrix(&ctx, id, sigma2.or(facts.as_ref().map(|f| f.sigma2)).unwrap_or(1.0), &plan.probes)?,
                    };
                    entries.push(CovarianceEntry {
                        kernel: id,
                        n_elements: n,
                        delta_over_h: d,
                        probes: m.probes.clone(),
                        min_eigenvalue: m.min_eigenvalue(),
                        values: m.values.clone(),
                    });
                }
            }
            if out.wants(OutputFormat::Csv) {
                let mut rows = Vec::new();
                for e in &entries {
                    let p = e.probes.len();
                    for i in 0..p {
                        for j in 0..p {
                            let head = [e.kernel.name().to_string(), e.n_elements.to_string(), fmt_real(e.delta_over_h)];
                            rows.push(head.into_iter().chain(reals(&[e.probes[i], e.probes[j], e.values[i * p + j]])).collect::<Vec<_>>());
                        }
                    }
                }
                out.csv("covariance.csv", &["kernel", "n_elements", "delta_over_h", "x", "y", "value"], rows)?;
            }
            if out.wants(OutputFormat::Json) {
                out.json("covariance.json", &entries)?;
            }
        }
        Command::Mc { .. } => {
            plan.validate()?;
            let hmm = plan.schemes.iter().position(|s| matches!(s.kind, SchemeKind::Hmm { .. }));
            let msfem = plan.schemes.iter().position(|s| s.kind == SchemeKind::Msfem);
            let (entries, amplification) = with_threads(common.threads, || -> Result<_> {
                let mut entries = Vec::new();
                let mut amplification = Vec::new();
                for &eps in &plan.epsilons {
                    let spec = plan.medium.with_epsilon(eps);
                    for &n in &plan.meshes {
                        let samples = collect_samples(&plan, eps, n)?;
                        for s in 0..samples.schemes.len() {
                            entries.push(summarize(&samples, s, &spec, &plan.source)?);
                        }
                        if let (Some(h), Some(m)) = (hmm, msfem) {
                            amplification.push(amplification_from_samples(&samples, h, m, &spec, &plan.source)?);
                        }
                    }
                }
                Ok((entries, amplification))
            })??;
            if out.wants(OutputFormat::Csv) {
                let mut rows = Vec::new();
                for e in &entries {
                    let (var, theory, se, z) = (e.variance(), e.theory_variance(), e.variance_se(), e.variance_z());
                    for (p, &x) in e.probes.iter().enumerate() {
                        let vals = [x, e.mean[p], e.mean_se[p], var[p], theory[p], se[p], z[p], e.gaussianity.z_skew[p], e.gaussianity.z_kurt[p]];
                        rows.push([e.label.clone(), fmt_real(e.epsilon), e.n_elements.to_string()].into_iter().chain(reals(&vals)).collect::<Vec<_>>());
                    }
                }
                let header = ["scheme", "epsilon", "n_elements", "x", "mean", "mean_se", "empirical_var", "theory_var", "se", "z", "z_skew", "z_kurt"];
                out.csv("mc.csv", &header, rows)?;
            }
            let report = McReport { report: ExperimentReport { plan: plan.clone(), entries }, amplification };
            if out.wants(OutputFormat::Json) {
                out.json("mc.json", &report)?;
            }
            for e in &report.report.entries {
                println!("{:<24} eps={:.3e} N={:<4} verdict={:?} max|gap|/var={:.3}", e.label, e.epsilon, e.n_elements, e.verdict, e.max_relative_gap);
            }
            for a in &report.amplification {
                println!("HMM/MsFEM variance ratio {:.4} +- {:.4} (limit {:.4})", a.mean_ratio, a.mean_ratio_se, a.theory_mean_ratio);
            }
        }
        Command::Rates { .. } => {
            let fits = with_threads(common.threads, || -> Result<Vec<_>> {
                let mut fits = Vec::new();
                for &n in &plan.meshes {
                    for s in cfg.schemes_on(n)? {
                        let single = ExperimentPlan { schemes: vec![s], meshes: vec![n], ..plan.clone() };
                        fits.push(mean_square_sup(&single)?);
                    }
                }
                Ok(fits)
            })??;
            if out.wants(OutputFormat::Csv) {
                let mut rows = Vec::new();
                for f in &fits {
                    for ((e, v), se) in f.epsilons.iter().zip(&f.estimates).zip(&f.estimate_se) {
                        rows.push([f.label.clone(), f.n_elements.to_string()].into_iter().chain(reals(&[*e, *v, *se])).collect::<Vec<_>>());
                    }
                }
                out.csv("rates.csv", &["scheme", "n_elements", "epsilon", "sup_mean_square", "se"], rows)?;
            }
            if out.wants(OutputFormat::Json) {
                out.json("rates.json", &fits)?;
            }
            for f in &fits {
                match f.slope {
                    Some(s) => println!("{:<24} N={:<4} slope {s:.4}", f.label, f.n_elements),
                    None => println!("{:<24} N={:<4} slope undefined (zero estimates)", f.label, f.n_elements),
                }
            }
        }
        Command::Check { only, .. } => {
            let suite = Acceptance::new(cfg.ensemble.seed);
            let outcomes = with_threads(common.threads, || suite.run_all(only))??;
            for o in &outcomes {
                println!("{o}");
            }
            ok = outcomes.iter().all(|o| o.passed);
            out.json("acceptance.json", &outcomes)?;
        }
    }
    let manifest = out.finish(cmd.name(), &cfg)?;
    eprintln!("wrote {} file(s) to {}", manifest.files.len() + 1, cfg.output.directory.display());
    Ok(ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(ACCEPTANCE_FAILURE),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
