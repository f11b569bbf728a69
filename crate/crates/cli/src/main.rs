//! Command-line front end: parameter sweeps of the (purity-corrected)
//! stabilizer Rényi entropy, finite-size-scaling fits, CSV and SVG output.

mod config;
mod output;
mod plot;
mod selftest;

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{parse_extremum, FileConfig, ResolvedConfig};
use srechain::criticality::{
    central_derivative, fss_fit, pseudo_critical_points, sweep, ExtremumKind, Measure,
    ObservableSpec, Sites,
};
use srechain::Error as CoreError;

#[derive(Parser)]
#[command(
    name = "srechain",
    version,
    about = "Stabilizer Renyi entropy sweeps over spin-chain ground states"
)]
struct Cli {
    /// Worker threads (default: machine parallelism, or SRECHAIN_THREADS)
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Transverse ANNNI chain sweep over gamma/J1 (exact diagonalization)
    Tannni(TannniArgs),
    /// Transverse-field Ising chain sweep over gamma/J1
    Tfim(TfimArgs),
    /// Quantum compass chain sweep over Jx/Jz
    Qcm(QcmArgs),
    /// Finite-size-scaling fit of derivative-extremum locations
    Fss(FssArgs),
    /// Run the built-in invariant suite
    Selftest,
}

#[derive(Args, Clone)]
struct CommonSweepArgs {
    /// Chain length N
    #[arg(long)]
    n: Option<usize>,
    /// Sweep start
    #[arg(long, allow_negative_numbers = true)]
    xmin: Option<f64>,
    /// Sweep end
    #[arg(long, allow_negative_numbers = true)]
    xmax: Option<f64>,
    /// Number of grid intervals (points = steps + 1)
    #[arg(long)]
    steps: Option<usize>,
    /// Reduced block: one | two
    #[arg(long)]
    sites: Option<String>,
    /// Observable: m2 | m2tilde
    #[arg(long)]
    measure: Option<String>,
    /// Output CSV path
    #[arg(long)]
    out: Option<String>,
    /// Also write an SVG chart of the observable and its derivative
    #[arg(long)]
    plot: bool,
    /// Seed for the deterministic Lanczos start vectors
    #[arg(long)]
    seed: Option<u64>,
    /// Eigensolver residual tolerance
    #[arg(long)]
    tol: Option<f64>,
    /// Eigensolver iteration cap
    #[arg(long, value_name = "N")]
    max_iter: Option<usize>,
    /// JSON config file; flags override file values
    #[arg(long)]
    config: Option<String>,
}

#[derive(Args, Clone)]
struct TannniArgs {
    #[command(flatten)]
    common: CommonSweepArgs,
    /// Nearest-neighbor coupling (energy unit)
    #[arg(long)]
    j1: Option<f64>,
    /// Next-nearest-neighbor coupling
    #[arg(long)]
    j2: Option<f64>,
    /// Engine must be ed for this model; accepted for interface symmetry
    #[arg(long)]
    engine: Option<String>,
    /// Pair separation for the two-site block (1 or 2)
    #[arg(long)]
    separation: Option<usize>,
}

#[derive(Args, Clone)]
struct TfimArgs {
    #[command(flatten)]
    common: CommonSweepArgs,
    /// Nearest-neighbor coupling (energy unit)
    #[arg(long)]
    j1: Option<f64>,
    /// Engine: ed | freefermion | auto
    #[arg(long)]
    engine: Option<String>,
    /// Free-fermion momentum sector: auto | integer | half
    #[arg(long)]
    sector: Option<String>,
    /// Pair separation for the two-site block (ED engine only)
    #[arg(long)]
    separation: Option<usize>,
}

#[derive(Args, Clone)]
struct QcmArgs {
    #[command(flatten)]
    common: CommonSweepArgs,
    /// Even-bond coupling (energy unit); the sweep variable is Jx/Jz
    #[arg(long)]
    jz: Option<f64>,
    /// Engine: ed | freefermion | auto
    #[arg(long)]
    engine: Option<String>,
    /// Free-fermion momentum sector: auto | integer | half
    #[arg(long)]
    sector: Option<String>,
}

#[derive(Args, Clone)]
struct FssArgs {
    /// JSON config describing the panel (model, sizes, grid, window, ...)
    #[arg(long)]
    config: String,
    /// Output CSV path (overrides config)
    #[arg(long)]
    out: Option<String>,
    /// Known critical point; omitted = estimated-C mode
    #[arg(long)]
    known_c: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = cli.threads.or_else(|| {
        std::env::var("SRECHAIN_THREADS")
            .ok()
            .and_then(|s| s.parse().ok())
    });
    if let Some(t) = threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("srechain: cannot configure {t} threads: {e}");
            return ExitCode::from(2);
        }
    }
    let code = match cli.command {
        Command::Tannni(args) => run_tannni(args),
        Command::Tfim(args) => run_tfim(args),
        Command::Qcm(args) => run_qcm(args),
        Command::Fss(args) => run_fss(args),
        Command::Selftest => selftest::run(),
    };
    ExitCode::from(code as u8)
}

fn usage_error(msg: &str) -> i32 {
    eprintln!("srechain: {msg}");
    2
}

fn solver_error(e: &CoreError) -> i32 {
    eprintln!("srechain: {e}");
    3
}

fn io_error(e: &std::io::Error) -> i32 {
    eprintln!("srechain: io error: {e}");
    1
}

fn load_file_config(path: &Option<String>) -> Result<FileConfig, i32> {
    match path {
        None => Ok(FileConfig::default()),
        Some(p) => FileConfig::load(p).map_err(|e| usage_error(&e)),
    }
}

/// Reject config keys that clash with a model's swept control parameter or
/// that belong to a different model.
fn check_model_keys(model: &str, file: &FileConfig) -> Result<(), i32> {
    let reject = |cond: bool, key: &str| -> Result<(), i32> {
        if cond {
            Err(usage_error(&format!("{key} does not apply to the {model} model")))
        } else {
            Ok(())
        }
    };
    match model {
        "tannni" => {
            reject(file.jx.is_some(), "jx")?;
            reject(file.gamma.is_some(), "gamma (swept as xmin..xmax)")?;
        }
        "tfim" => {
            reject(file.jx.is_some(), "jx")?;
            reject(file.j2.is_some(), "j2")?;
            reject(file.gamma.is_some(), "gamma (swept as xmin..xmax)")?;
        }
        "qcm" => {
            reject(file.jx.is_some(), "jx (swept as xmin..xmax)")?;
            reject(file.j1.is_some(), "j1")?;
            reject(file.j2.is_some(), "j2")?;
            reject(file.gamma.is_some(), "gamma")?;
        }
        _ => {}
    }
    Ok(())
}

struct SweepDefaults {
    xmin: f64,
    xmax: f64,
    steps: usize,
    n: usize,
}

fn resolve_common(
    command: &str,
    model: &str,
    common: &CommonSweepArgs,
    file: &FileConfig,
    engine: Option<String>,
    sector: Option<String>,
    j1: Option<f64>,
    j2: Option<f64>,
    jz: Option<f64>,
    separation: Option<usize>,
    defaults: SweepDefaults,
) -> Result<ResolvedConfig, i32> {
    let engine = engine
        .or_else(|| file.engine.clone())
        .unwrap_or_else(|| "auto".into());
    let sector = sector
        .or_else(|| file.sector.clone())
        .unwrap_or_else(|| "auto".into());
    let out_default = format!("{model}.csv");
    Ok(ResolvedConfig {
        command: command.into(),
        model: model.into(),
        n_sites: common.n.or(file.n_sites).unwrap_or(defaults.n),
        j1: j1.or(file.j1).unwrap_or(1.0),
        j2: j2.or(file.j2).unwrap_or(0.0),
        jz: jz.or(file.jz).unwrap_or(1.0),
        xmin: common.xmin.or(file.xmin).unwrap_or(defaults.xmin),
        xmax: common.xmax.or(file.xmax).unwrap_or(defaults.xmax),
        steps: common.steps.or(file.steps).unwrap_or(defaults.steps),
        sites: common
            .sites
            .clone()
            .or_else(|| file.sites.clone())
            .unwrap_or_else(|| "two".into()),
        measure: common
            .measure
            .clone()
            .or_else(|| file.measure.clone())
            .unwrap_or_else(|| "m2tilde".into()),
        engine,
        sector,
        separation: separation.or(file.separation).unwrap_or(1),
        seed: common.seed.or(file.seed).unwrap_or(7),
        tol: common.tol.or(file.tol).unwrap_or(1e-10),
        max_iter: common.max_iter.or(file.max_iter).unwrap_or(500),
        out: common
            .out
            .clone()
            .or_else(|| file.out.clone())
            .unwrap_or(out_default),
        plot: common.plot || file.plot.unwrap_or(false),
    })
}

fn run_resolved_sweep(cfg: &ResolvedConfig) -> i32 {
    let spec = match cfg.sweep_spec() {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let grid = match cfg.grid() {
        Ok(g) => g,
        Err(e) => return usage_error(&e),
    };
    let obs = match cfg.observable() {
        Ok(o) => o,
        Err(e) => return usage_error(&e),
    };
    let result = match sweep(&spec, &grid, obs) {
        Ok(r) => r,
        Err(e) => return solver_error(&e),
    };
    let deriv = match central_derivative(&result) {
        Ok(d) => d,
        Err(e) => return solver_error(&e),
    };
    let out = Path::new(&cfg.out);
    if let Err(e) = output::write_sweep_csv(out, &result, cfg) {
        return io_error(&e);
    }
    if let Err(e) = output::write_sweep_csv(&output::deriv_path(out), &deriv, cfg) {
        return io_error(&e);
    }
    if cfg.plot {
        let svg = plot::render_sweep_svg(&result, &deriv);
        if let Err(e) = std::fs::write(output::svg_path(out), svg) {
            return io_error(&e);
        }
    }
    println!(
        "wrote {} ({} points, engine {:?}{})",
        cfg.out,
        result.xs.len(),
        result.meta.engine,
        match result.meta.sector {
            Some(s) => format!(", sector {s}"),
            None => String::new(),
        }
    );
    0
}

fn run_tannni(args: TannniArgs) -> i32 {
    let file = match load_file_config(&args.common.config) {
        Ok(f) => f,
        Err(c) => return c,
    };
    if let Some(engine) = args.engine.as_deref() {
        if engine == "freefermion" {
            return usage_error("tannni has no free-fermion engine; use --engine ed");
        }
    }
    if let Err(code) = check_model_keys("tannni", &file) {
        return code;
    }
    let cfg = match resolve_common(
        "tannni",
        "tannni",
        &args.common,
        &file,
        args.engine,
        None,
        args.j1,
        args.j2,
        None,
        args.separation,
        SweepDefaults {
            xmin: 0.01,
            xmax: 1.5,
            steps: 298,
            n: 12,
        },
    ) {
        Ok(c) => c,
        Err(code) => return code,
    };
    run_resolved_sweep(&cfg)
}

fn run_tfim(args: TfimArgs) -> i32 {
    let file = match load_file_config(&args.common.config) {
        Ok(f) => f,
        Err(c) => return c,
    };
    if let Err(code) = check_model_keys("tfim", &file) {
        return code;
    }
    let cfg = match resolve_common(
        "tfim",
        "tfim",
        &args.common,
        &file,
        args.engine,
        args.sector,
        args.j1,
        None,
        None,
        args.separation,
        SweepDefaults {
            xmin: 0.01,
            xmax: 2.0,
            steps: 995,
            n: 400,
        },
    ) {
        Ok(c) => c,
        Err(code) => return code,
    };
    run_resolved_sweep(&cfg)
}

fn run_qcm(args: QcmArgs) -> i32 {
    let file = match load_file_config(&args.common.config) {
        Ok(f) => f,
        Err(c) => return c,
    };
    if let Err(code) = check_model_keys("qcm", &file) {
        return code;
    }
    let cfg = match resolve_common(
        "qcm",
        "qcm",
        &args.common,
        &file,
        args.engine,
        args.sector,
        None,
        None,
        args.jz,
        None,
        SweepDefaults {
            xmin: 0.5,
            xmax: 1.5,
            steps: 500,
            n: 400,
        },
    ) {
        Ok(c) => c,
        Err(code) => return code,
    };
    run_resolved_sweep(&cfg)
}

fn run_fss(args: FssArgs) -> i32 {
    let file = match FileConfig::load(&args.config) {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let model = match file.model.as_deref() {
        Some(m) => m.to_string(),
        None => return usage_error("fss config must set \"model\""),
    };
    if let Err(code) = check_model_keys(&model, &file) {
        return code;
    }
    let sizes = match &file.sizes {
        Some(s) if s.len() >= 3 => s.clone(),
        _ => return usage_error("fss config must set \"sizes\" with at least 3 entries"),
    };
    let common = CommonSweepArgs {
        n: None,
        xmin: None,
        xmax: None,
        steps: None,
        sites: None,
        measure: None,
        out: args.out.clone(),
        plot: false,
        seed: None,
        tol: None,
        max_iter: None,
        config: None,
    };
    let mut cfg = match resolve_common(
        "fss",
        &model,
        &common,
        &file,
        None,
        None,
        None,
        None,
        None,
        None,
        SweepDefaults {
            xmin: 0.05,
            xmax: 1.0,
            steps: 190,
            n: sizes[0],
        },
    ) {
        Ok(c) => c,
        Err(code) => return code,
    };
    if common.out.is_none() && file.out.is_none() {
        cfg.out = format!("{model}_fss.csv");
    }
    let template = match cfg.sweep_spec() {
        Ok(s) => s,
        Err(e) => return usage_error(&e),
    };
    let grid = match cfg.grid() {
        Ok(g) => g,
        Err(e) => return usage_error(&e),
    };
    let obs = match cfg.observable() {
        Ok(o) => o,
        Err(e) => return usage_error(&e),
    };
    let kind = match file
        .extremum
        .as_deref()
        .map(parse_extremum)
        .unwrap_or(Ok(default_kind(obs)))
    {
        Ok(k) => k,
        Err(e) => return usage_error(&e),
    };
    let window = file.window.map(|w| (w[0], w[1])).unwrap_or((cfg.xmin, cfg.xmax));
    let points = match pseudo_critical_points(&template, &sizes, &grid, obs, kind, window) {
        Ok(p) => p,
        Err(e) => return solver_error(&e),
    };
    let known_c = args.known_c.or(file.known_c);
    let fit = match fss_fit(&points, known_c) {
        Ok(f) => f,
        Err(e) => return solver_error(&e),
    };
    if let Err(e) = output::write_fss_csv(Path::new(&cfg.out), &fit, &cfg) {
        return io_error(&e);
    }
    println!(
        "wrote {} (c* = {:.6}, slope = {:.4}, R^2 = {:.6})",
        cfg.out, fit.c_star, fit.slope, fit.r_squared
    );
    0
}

/// Dips flag the raw-M2 transitions; peaks flag the purity-corrected
/// curves. Callers can always override via "extremum" in the config.
fn default_kind(obs: ObservableSpec) -> ExtremumKind {
    match (obs.measure, obs.sites) {
        (Measure::M2, Sites::One) => ExtremumKind::Minimum,
        _ => ExtremumKind::Maximum,
    }
}
