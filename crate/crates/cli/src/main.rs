use clap::{Args, Parser, Subcommand};
use fracprop::{build_contour, contour_angles, validate_orders, MittagLeffler, MlParams, OrderPair, SpectralParams};
use fracprop_cli::config::{normalize_key, read_file, ExperimentConfig};
use fracprop_cli::error::CliError;
use fracprop_cli::experiments::{emit_solution, run_convergence, run_inverse, run_table1, table1_table};
use fracprop_cli::output::{fmt_f64, Table};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "fracprop", version, about = "Sinc-quadrature propagators for Caputo fractional evolution equations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate E_{γ,σ}(z) with an error estimate
    MlEval {
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true)]
        re: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        im: f64,
    },
    /// Print the hyperbolic contour for the first (alpha, beta)
    Contour(Keys),
    /// Error curves over the (alpha, beta, N) sweep
    Converge(Keys),
    /// Smallest N reaching the threshold for each (delta, kappa)
    Table1(Keys),
    /// Batch identification of alpha from point data
    Inverse(Keys),
    /// Solution snapshots at the listed times
    Solve(Keys),
}

/// Experiment keys; flags override the values read from `--config`.
#[derive(Args, Default)]
struct Keys {
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    beta: Option<String>,
    #[arg(long)]
    n: Option<String>,
    #[arg(long, alias = "varphi_s")]
    varphi_s: Option<String>,
    #[arg(long)]
    omega: Option<String>,
    #[arg(long)]
    a0: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    chi: Option<String>,
    #[arg(long = "t-final", aliases = ["t_final", "T"])]
    t_final: Option<String>,
    #[arg(long, alias = "time_grid_size")]
    time_grid_size: Option<String>,
    #[arg(long)]
    backend: Option<String>,
    #[arg(long)]
    modes: Option<String>,
    #[arg(long)]
    m: Option<String>,
    #[arg(long)]
    delta: Option<String>,
    #[arg(long)]
    k0: Option<String>,
    #[arg(long)]
    k1: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    threshold: Option<String>,
    #[arg(long, alias = "n_max")]
    n_max: Option<String>,
    #[arg(long, alias = "probe_x")]
    probe_x: Option<String>,
    #[arg(long)]
    alpha0: Option<String>,
    #[arg(long, alias = "alpha_bounds")]
    alpha_bounds: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    times: Option<String>,
    #[arg(long)]
    samples: Option<String>,
    #[arg(long)]
    output: Option<String>,
    #[arg(long, alias = "trace_dir")]
    trace_dir: Option<String>,
}

impl Keys {
    fn flags(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("problem", &self.problem),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("n", &self.n),
            ("varphi_s", &self.varphi_s),
            ("omega", &self.omega),
            ("a0", &self.a0),
            ("kappa", &self.kappa),
            ("chi", &self.chi),
            ("t_final", &self.t_final),
            ("time_grid_size", &self.time_grid_size),
            ("backend", &self.backend),
            ("modes", &self.modes),
            ("m", &self.m),
            ("delta", &self.delta),
            ("k0", &self.k0),
            ("k1", &self.k1),
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("threshold", &self.threshold),
            ("n_max", &self.n_max),
            ("probe_x", &self.probe_x),
            ("alpha0", &self.alpha0),
            ("alpha_bounds", &self.alpha_bounds),
            ("times", &self.times),
            ("samples", &self.samples),
            ("output", &self.output),
            ("trace_dir", &self.trace_dir),
        ]
    }

    /// File values, then flags, then the subcommand's defaults.
    fn resolve(&self, defaults: &[(&str, &str)]) -> Result<ExperimentConfig, CliError> {
        let mut map: BTreeMap<String, String> = match &self.config {
            Some(p) => read_file(p)?,
            None => BTreeMap::new(),
        };
        for (k, v) in self.flags() {
            if let Some(v) = v {
                map.insert(normalize_key(k), v.clone());
            }
        }
        for (k, v) in defaults {
            map.entry(k.to_string()).or_insert_with(|| v.to_string());
        }
        ExperimentConfig::from_map(&map)
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("FRACPROP_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::config(format!("FRACPROP_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::config(format!("cannot size the thread pool: {e}")))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::MlEval { gamma, sigma, re, im } => {
            let ml = MittagLeffler::new(MlParams::new(gamma, sigma)?);
            let v = ml.eval(Complex64::new(re, im))?;
            let mut t = Table::new("value_re,value_im,est_abs_err");
            t.push(&[fmt_f64(v.value.re), fmt_f64(v.value.im), fmt_f64(v.est_abs_err)]);
            t.emit(None)?;
        }
        Command::Contour(keys) => {
            let cfg = keys.resolve(&[])?;
            let op = OrderPair::new(cfg.alpha[0], cfg.beta[0])?;
            let sp = SpectralParams::with_angle(cfg.varphi_s)?;
            validate_orders(&op, &sp)?;
            let angles = contour_angles(&op, &sp)?;
            let c = build_contour(&op, &sp, cfg.omega, cfg.a0)?;
            if c.omega > angles.omega_c {
                log::warn!("omega = {} exceeds omega_c = {}", c.omega, angles.omega_c);
            }
            let mut t = Table::new("a_i,b_i,d,a_m,omega");
            t.push(&[fmt_f64(c.a_i), fmt_f64(c.b_i), fmt_f64(c.d), fmt_f64(c.a_m), fmt_f64(c.omega)]);
            t.emit(cfg.output.as_deref())?;
        }
        Command::Converge(keys) => {
            let cfg = keys.resolve(&[])?;
            run_convergence(&cfg)?.table().emit(cfg.output.as_deref())?;
        }
        Command::Table1(keys) => {
            let cfg = keys.resolve(&[("problem", "hom-fd"), ("backend", "fd-eigen")])?;
            table1_table(&run_table1(&cfg)?).emit(cfg.output.as_deref())?;
        }
        Command::Inverse(keys) => {
            let cfg = keys.resolve(&[("problem", "inverse")])?;
            let batch = run_inverse(&cfg)?;
            let (s0, s1) = batch.solves_per_vector;
            log::info!("subordinated batch: {s0} solves for u0, {s1} for u1");
            batch.table().emit(cfg.output.as_deref())?;
        }
        Command::Solve(keys) => {
            let cfg = keys.resolve(&[])?;
            emit_solution(&cfg)?.emit(cfg.output.as_deref())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("fracprop: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
