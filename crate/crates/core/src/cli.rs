//! The `kam` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or parse error, 2 structural infeasibility,
//! 3 a Diophantine check failed, 4 numerical failure.

use crate::context::{self, ContextError, KamContext};
use crate::diophantine::{
    self, DiophantineError, DiophantineParams, FrequencyBox, FrequencyVector,
};
use crate::output::{csv_row, to_json};
use crate::toy::{
    self, ModelConfig, ModelFamily, PolarState, Polynomial, Scheme, State, StepConfig, ToyError,
    ToyModel,
};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_CHECK_FAILED: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "kam",
    version,
    about = "KAM context arithmetic, Diophantine checks and a reversible toy model"
)]
pub struct Cli {
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Integer characteristics and transitions between contexts.
    #[command(subcommand)]
    Context(ContextCommand),
    /// Diophantine checks of frequency vectors.
    #[command(subcommand)]
    Dioph(DiophCommand),
    /// The reversible toy model.
    #[command(subcommand)]
    Toy(ToyCommand),
}

#[derive(Debug, Subcommand)]
pub enum ContextCommand {
    Profile(ContextArgs),
    Destroy(TransitionArgs),
    Excite(TransitionArgs),
    /// Zero-exponent bookkeeping for excitation in the reversible context 2.
    Diagnose(TransitionArgs),
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("kind").required(true).args(["hamiltonian", "volume", "dissipative", "reversible"])))]
pub struct ContextArgs {
    #[arg(long)]
    pub hamiltonian: bool,
    #[arg(long, alias = "volume-preserving")]
    pub volume: bool,
    #[arg(long)]
    pub dissipative: bool,
    #[arg(long)]
    pub reversible: bool,
    #[arg(long)]
    pub n: u32,
    #[arg(long)]
    pub p: Option<u32>,
    #[arg(long)]
    pub a: Option<u32>,
    #[arg(long)]
    pub b: Option<u32>,
    #[arg(long, default_value_t = 0)]
    pub s: u32,
}

#[derive(Debug, Args)]
pub struct TransitionArgs {
    #[command(flatten)]
    pub context: ContextArgs,
    #[arg(long)]
    pub r: u32,
}

#[derive(Debug, Subcommand)]
pub enum DiophCommand {
    /// Largest gamma supported up to the cutoff.
    Quality {
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        omega: Vec<f64>,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        kmax: u32,
    },
    Check(CheckArgs),
    /// Check including normal frequencies with |l| <= 2.
    Affine {
        #[command(flatten)]
        check: CheckArgs,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        beta: Vec<f64>,
    },
    /// Monte-Carlo fraction of a box passing the check.
    Measure {
        /// Interleaved bounds lo1,hi1,lo2,hi2,...
        #[arg(
            long = "box",
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        bounds: Vec<f64>,
        #[arg(long)]
        gamma: f64,
        #[arg(long)]
        tau: f64,
        #[arg(long)]
        kmax: u32,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        required = true
    )]
    pub omega: Vec<f64>,
    #[arg(long)]
    pub gamma: f64,
    #[arg(long)]
    pub tau: f64,
    #[arg(long)]
    pub kmax: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Midpoint,
    Rk4,
}

impl From<SchemeArg> for Scheme {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Midpoint => Scheme::ImplicitMidpoint,
            SchemeArg::Rk4 => Scheme::Rk4,
        }
    }
}

#[derive(Debug, Args)]
pub struct OrbitArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub y0: f64,
    #[arg(long)]
    pub rho0: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub phi0: f64,
    #[arg(long)]
    pub dt: f64,
    /// Final time.
    #[arg(long = "t")]
    pub t_end: f64,
    #[arg(long, value_enum, default_value_t = SchemeArg::Midpoint)]
    pub scheme: SchemeArg,
    /// Fixed-point tolerance of the midpoint stage equation.
    #[arg(long, default_value_t = 1e-13)]
    pub stage_tol: f64,
    /// Keep every N-th sample in the output.
    #[arg(long, default_value_t = 1)]
    pub every: usize,
}

#[derive(Debug, Subcommand)]
pub enum ToyCommand {
    Simulate {
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        orbit: OrbitArgs,
        /// Base point of the first integral.
        #[arg(long, default_value_t = 1.0)]
        rho_ref: f64,
    },
    Equilibria {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        rho_lo: f64,
        #[arg(long)]
        rho_hi: f64,
        #[arg(long, default_value_t = toy::roots::SCAN_CELLS)]
        cells: usize,
    },
    Classify {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        rho0: f64,
    },
    Torus {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        y0: f64,
        #[arg(long)]
        rho0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        phi0: f64,
        #[arg(long)]
        dt: f64,
        #[arg(long = "t")]
        t_end: f64,
    },
    Sweep {
        #[arg(long)]
        model: PathBuf,
        /// Comma-separated values of one component of mu; repeat once per component.
        #[arg(long = "axis", allow_hyphen_values = true)]
        axes: Vec<String>,
        #[arg(long)]
        rho_lo: f64,
        #[arg(long)]
        rho_hi: f64,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    Perturb {
        #[arg(long)]
        model: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        eps: f64,
        /// Coefficients of f in ascending powers of rho.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "1"
        )]
        f: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "1"
        )]
        g: Vec<f64>,
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            default_value = "1"
        )]
        h: Vec<f64>,
        #[command(flatten)]
        orbit: OrbitArgs,
        /// Random states used for the reversibility residual.
        #[arg(long, default_value_t = 100)]
        states: usize,
        /// Seed of the random residual states.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Error carrying the exit code it maps to.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: String,
    pub message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: "Usage".into(),
            message: message.into(),
        }
    }
}

impl From<ContextError> for Failure {
    fn from(e: ContextError) -> Self {
        let code = match e {
            ContextError::InvalidContext(_) => EXIT_USAGE,
            _ => EXIT_INFEASIBLE,
        };
        Failure {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

impl From<DiophantineError> for Failure {
    fn from(e: DiophantineError) -> Self {
        Failure {
            code: EXIT_USAGE,
            kind: "InvalidInput".into(),
            message: e.to_string(),
        }
    }
}

impl From<ToyError> for Failure {
    fn from(e: ToyError) -> Self {
        let code = match e {
            ToyError::InvalidModel(_) | ToyError::BadArgument(_) | ToyError::NonpositiveRho(_) => {
                EXIT_USAGE
            }
            _ => EXIT_NUMERICAL,
        };
        Failure {
            code,
            kind: e.kind().into(),
            message: e.to_string(),
        }
    }
}

/// Report text plus the exit code to finish with.
struct Outcome {
    body: String,
    code: i32,
}

impl Outcome {
    fn ok(body: String) -> Self {
        Outcome {
            body,
            code: EXIT_OK,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let rendered = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(rendered.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(rendered.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };

    match execute(&cli) {
        Ok(outcome) => match emit(&cli, &outcome.body, stdout) {
            Ok(()) => outcome.code,
            Err(msg) => {
                let _ = writeln!(stderr, "error: {msg}");
                EXIT_USAGE
            }
        },
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            if f.code != EXIT_USAGE {
                #[derive(Serialize)]
                struct ErrorReport<'a> {
                    error: &'a str,
                    message: &'a str,
                }
                let _ = writeln!(
                    stdout,
                    "{}",
                    to_json(&ErrorReport {
                        error: &f.kind,
                        message: &f.message
                    })
                );
            }
            f.code
        }
    }
}

fn emit(cli: &Cli, body: &str, stdout: &mut dyn Write) -> Result<(), String> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display()))
        }
        None => stdout.write_all(body.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    match &cli.command {
        Command::Context(cmd) => run_context(cmd),
        Command::Dioph(cmd) => run_dioph(cmd),
        Command::Toy(cmd) => run_toy(cli, cmd),
    }
}

fn json_line<T: Serialize + ?Sized>(value: &T) -> String {
    let mut s = to_json(value);
    s.push('\n');
    s
}

impl ContextArgs {
    fn build(&self) -> Result<KamContext, Failure> {
        let need = |name: &str, v: Option<u32>| {
            v.ok_or_else(|| Failure::usage(format!("--{name} is required for this context")))
        };
        if self.reversible {
            if self.p.is_some() {
                return Err(Failure::usage(
                    "--p does not apply to the reversible context",
                ));
            }
            return Ok(KamContext::reversible(
                self.n,
                need("a", self.a)?,
                need("b", self.b)?,
                self.s,
            ));
        }
        if self.a.is_some() || self.b.is_some() {
            return Err(Failure::usage(
                "--a and --b apply to the reversible context only",
            ));
        }
        let p = need("p", self.p)?;
        Ok(if self.hamiltonian {
            KamContext::hamiltonian(self.n, p, self.s)
        } else if self.volume {
            KamContext::volume_preserving(self.n, p, self.s)?
        } else {
            KamContext::dissipative(self.n, p, self.s)
        })
    }
}

#[derive(Serialize)]
struct ProfileReport<'a> {
    context: &'a KamContext,
    #[serde(flatten)]
    profile: &'a context::ContextProfile,
}

#[derive(Serialize)]
struct TransitionReport<'a> {
    source: &'a KamContext,
    #[serde(flatten)]
    result: &'a context::TransitionResult,
}

fn run_context(cmd: &ContextCommand) -> Result<Outcome, Failure> {
    let body = match cmd {
        ContextCommand::Profile(args) => {
            let ctx = args.build()?;
            json_line(&ProfileReport {
                context: &ctx,
                profile: &context::profile(&ctx),
            })
        }
        ContextCommand::Destroy(args) => {
            let ctx = args.context.build()?;
            json_line(&TransitionReport {
                source: &ctx,
                result: &context::destroy_resonant(&ctx, args.r)?,
            })
        }
        ContextCommand::Excite(args) => {
            let ctx = args.context.build()?;
            json_line(&TransitionReport {
                source: &ctx,
                result: &context::excite_modes(&ctx, args.r)?,
            })
        }
        ContextCommand::Diagnose(args) => {
            let ctx = args.context.build()?;
            json_line(&context::context2_excitation_diagnostics(&ctx, args.r)?)
        }
    };
    Ok(Outcome::ok(body))
}

fn join_ints(v: &[i64]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

#[derive(Serialize)]
struct CheckReport<'a> {
    pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    witness_l: Option<String>,
    min_product: f64,
    gamma: f64,
    tau: f64,
    k_max: u32,
    omega: &'a [f64],
    #[serde(skip_serializing_if = "<[f64]>::is_empty")]
    beta: &'a [f64],
}

fn check_outcome(
    result: &diophantine::CheckResult,
    freq: &FrequencyVector,
    params: &DiophantineParams,
    affine: bool,
) -> Outcome {
    let report = CheckReport {
        pass: result.pass,
        witness: result.witness.as_ref().map(|w| join_ints(&w.k)),
        witness_l: if affine {
            result.witness.as_ref().map(|w| join_ints(&w.l))
        } else {
            None
        },
        min_product: result.min_product,
        gamma: params.gamma,
        tau: params.tau,
        k_max: params.k_max,
        omega: &freq.omega,
        beta: &freq.beta,
    };
    Outcome {
        body: json_line(&report),
        code: if result.pass {
            EXIT_OK
        } else {
            EXIT_CHECK_FAILED
        },
    }
}

fn run_dioph(cmd: &DiophCommand) -> Result<Outcome, Failure> {
    match cmd {
        DiophCommand::Quality { omega, tau, kmax } => {
            let freq = FrequencyVector::new(omega.clone());
            let q = diophantine::min_quality(&freq, *tau, *kmax)?;
            #[derive(Serialize)]
            struct QualityReport<'a> {
                min_quality: f64,
                tau: f64,
                k_max: u32,
                omega: &'a [f64],
            }
            Ok(Outcome::ok(json_line(&QualityReport {
                min_quality: q,
                tau: *tau,
                k_max: *kmax,
                omega,
            })))
        }
        DiophCommand::Check(c) => {
            let freq = FrequencyVector::new(c.omega.clone());
            let params = DiophantineParams::new(c.gamma, c.tau, c.kmax);
            let result = diophantine::check_diophantine(&freq, &params)?;
            Ok(check_outcome(&result, &freq, &params, false))
        }
        DiophCommand::Affine { check: c, beta } => {
            let freq = FrequencyVector::with_normal(c.omega.clone(), beta.clone());
            let params = DiophantineParams::new(c.gamma, c.tau, c.kmax);
            let result = diophantine::check_affine_diophantine(&freq, &params)?;
            Ok(check_outcome(&result, &freq, &params, true))
        }
        DiophCommand::Measure {
            bounds,
            gamma,
            tau,
            kmax,
            samples,
            seed,
        } => {
            let bx = FrequencyBox::from_interleaved(bounds)?;
            let params = DiophantineParams::new(*gamma, *tau, *kmax);
            let fraction = diophantine::measure_estimate(&bx, &params, *samples, *seed)?;
            #[derive(Serialize)]
            struct MeasureReport<'a> {
                fraction: f64,
                samples: u64,
                seed: u64,
                generator: &'static str,
                gamma: f64,
                tau: f64,
                k_max: u32,
                lo: &'a [f64],
                hi: &'a [f64],
            }
            Ok(Outcome::ok(json_line(&MeasureReport {
                fraction,
                samples: *samples,
                seed: *seed,
                generator: "ChaCha8 (rand_chacha 0.9), one stream per sample index",
                gamma: *gamma,
                tau: *tau,
                k_max: *kmax,
                lo: &bx.lo,
                hi: &bx.hi,
            })))
        }
    }
}

fn load_model(path: &PathBuf) -> Result<ToyModel, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read model file {}: {e}", path.display())))?;
    Ok(ToyModel::from_config(&ModelConfig::from_json(&text)?)?)
}

fn load_family(path: &PathBuf) -> Result<ModelFamily, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read model file {}: {e}", path.display())))?;
    let config = ModelConfig::from_json(&text)?;
    // validates mu against s as well
    ToyModel::from_config(&config)?;
    Ok(ModelFamily::new(config.s, config.u, config.v, config.w)?)
}

#[derive(Serialize)]
struct SampleRecord {
    t: f64,
    y: f64,
    rho: f64,
    phi: f64,
    #[serde(rename = "E")]
    energy: f64,
}

fn orbit_config(orbit: &OrbitArgs) -> Result<StepConfig, Failure> {
    if orbit.every == 0 {
        return Err(Failure::usage("--every must be at least 1"));
    }
    Ok(StepConfig::new(orbit.scheme.into(), orbit.dt).with_stage_tol(orbit.stage_tol))
}

fn trajectory_body(
    traj: &toy::Trajectory,
    energies: &[f64],
    every: usize,
    format: Format,
) -> String {
    let rows = traj
        .times
        .iter()
        .zip(&traj.states)
        .zip(energies)
        .step_by(every);
    match format {
        Format::Csv => {
            let mut out = String::from("t,y,rho,phi,E\n");
            for ((t, s), e) in rows {
                csv_row(&mut out, &[*t, s.y, s.rho, s.phi, *e]);
            }
            out
        }
        Format::Json => {
            let recs: Vec<SampleRecord> = rows
                .map(|((t, s), e)| SampleRecord {
                    t: *t,
                    y: s.y,
                    rho: s.rho,
                    phi: s.phi,
                    energy: *e,
                })
                .collect();
            json_line(&recs)
        }
    }
}

fn random_states(seed: u64, count: usize) -> Vec<State> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            State::polar(
                rng.random_range(-1.0..1.0),
                rng.random_range(0.05..2.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}

fn run_toy(cli: &Cli, cmd: &ToyCommand) -> Result<Outcome, Failure> {
    match cmd {
        ToyCommand::Simulate {
            model,
            orbit,
            rho_ref,
        } => {
            let model = load_model(model)?;
            let cfg = orbit_config(orbit)?;
            let s0 = PolarState::new(orbit.y0, orbit.rho0, orbit.phi0);
            let traj = toy::integrate(&model, s0, orbit.t_end, cfg)?;
            let (lo, hi) = traj.rho_range();
            let fi = toy::FirstIntegral::new(&model, *rho_ref, lo, hi)?;
            let energies = traj
                .states
                .iter()
                .map(|s| fi.eval(s.y, s.rho))
                .collect::<toy::Result<Vec<f64>>>()?;
            let format = cli.format.unwrap_or(Format::Csv);
            Ok(Outcome::ok(trajectory_body(
                &traj,
                &energies,
                orbit.every,
                format,
            )))
        }
        ToyCommand::Equilibria {
            model,
            rho_lo,
            rho_hi,
            cells,
        } => {
            let model = load_model(model)?;
            model.check_w_positive(*rho_lo, *rho_hi, 256)?;
            let roots = toy::equilibria::find_equilibria_with(&model, *rho_lo, *rho_hi, *cells)?;
            #[derive(Serialize)]
            struct Report<'a> {
                mu: &'a [f64],
                equilibria: Vec<f64>,
            }
            Ok(Outcome::ok(json_line(&Report {
                mu: &model.mu,
                equilibria: roots,
            })))
        }
        ToyCommand::Classify { model, rho0 } => {
            let model = load_model(model)?;
            let info = toy::classify_equilibrium(&model, *rho0)?;
            Ok(Outcome::ok(json_line(&ClassifyReport::from(&info))))
        }
        ToyCommand::Torus {
            model,
            y0,
            rho0,
            phi0,
            dt,
            t_end,
        } => {
            let model = load_model(model)?;
            let f =
                toy::torus_frequencies(&model, PolarState::new(*y0, *rho0, *phi0), *t_end, *dt)?;
            Ok(Outcome::ok(json_line(&f)))
        }
        ToyCommand::Sweep {
            model,
            axes,
            rho_lo,
            rho_hi,
            jobs,
        } => {
            let family = load_family(model)?;
            let axes = parse_axes(axes)?;
            if axes.len() != family.s {
                return Err(Failure::usage(format!(
                    "{} --axis given, the model has s = {}",
                    axes.len(),
                    family.s
                )));
            }
            let grid = toy::product_grid(&axes);
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads((*jobs).max(1))
                .build()
                .map_err(|e| Failure::usage(e.to_string()))?;
            let records = pool.install(|| toy::sweep(&family, &grid, *rho_lo, *rho_hi))?;
            Ok(Outcome::ok(match cli.format.unwrap_or(Format::Json) {
                Format::Json => {
                    let reports: Vec<SweepReport> = records.iter().map(SweepReport::from).collect();
                    json_line(&reports)
                }
                Format::Csv => sweep_csv(&records, family.s),
            }))
        }
        ToyCommand::Perturb {
            model,
            eps,
            f,
            g,
            h,
            orbit,
            states,
            seed,
        } => {
            let model = load_model(model)?;
            let cfg = orbit_config(orbit)?;
            let field = toy::perturb(
                &model,
                *eps,
                Polynomial::new(f.clone()),
                Polynomial::new(g.clone()),
                Polynomial::new(h.clone()),
            );
            let samples = random_states(*seed, *states);
            let residual = toy::reversibility_residual(&field, &samples);
            let s0 = PolarState::new(orbit.y0, orbit.rho0, orbit.phi0);
            let perturbed = toy::integrate(&field, s0, orbit.t_end, cfg)?;
            let unperturbed = toy::integrate(&model, s0, orbit.t_end, cfg)?;
            let (p_lo, p_hi) = perturbed.rho_range();
            let (u_lo, u_hi) = unperturbed.rho_range();
            if let Some(Format::Csv) = cli.format {
                let zeros = vec![0.0; perturbed.len()];
                let mut body = trajectory_body(&perturbed, &zeros, orbit.every, Format::Csv);
                body = body.replacen("t,y,rho,phi,E", "t,y,rho,phi,zero", 1);
                return Ok(Outcome::ok(body));
            }
            #[derive(Serialize)]
            struct Report {
                eps: f64,
                reversibility_residual: f64,
                residual_states: usize,
                seed: u64,
                rho_min: f64,
                rho_max: f64,
                unperturbed_rho_min: f64,
                unperturbed_rho_max: f64,
                band_shift: f64,
            }
            Ok(Outcome::ok(json_line(&Report {
                eps: *eps,
                reversibility_residual: residual,
                residual_states: *states,
                seed: *seed,
                rho_min: p_lo,
                rho_max: p_hi,
                unperturbed_rho_min: u_lo,
                unperturbed_rho_max: u_hi,
                band_shift: (p_lo - u_lo).abs().max((p_hi - u_hi).abs()),
            })))
        }
    }
}

fn parse_axes(raw: &[String]) -> Result<Vec<Vec<f64>>, Failure> {
    raw.iter()
        .map(|axis| {
            axis.split(',')
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Failure::usage(format!("bad axis value {s:?}: {e}")))
                })
                .collect()
        })
        .collect()
}

#[derive(Serialize)]
struct ClassifyReport {
    rho0: f64,
    kind: toy::EquilibriumKind,
    floquet_matrix: [[f64; 2]; 2],
    exponents: String,
    chi_squared: f64,
    cycle_frequency: f64,
}

impl From<&toy::EquilibriumInfo> for ClassifyReport {
    fn from(info: &toy::EquilibriumInfo) -> Self {
        ClassifyReport {
            rho0: info.rho0,
            kind: info.kind,
            floquet_matrix: info.floquet_matrix,
            exponents: info.exponents.to_string(),
            chi_squared: info.exponents.chi_squared(),
            cycle_frequency: info.cycle_frequency,
        }
    }
}

#[derive(Serialize)]
struct SweepReport {
    mu: Vec<f64>,
    origin_equilibrium: bool,
    equilibria: Vec<ClassifyReport>,
    degenerate: Vec<f64>,
}

impl From<&toy::SweepRecord> for SweepReport {
    fn from(r: &toy::SweepRecord) -> Self {
        SweepReport {
            mu: r.mu.clone(),
            origin_equilibrium: r.origin_equilibrium,
            equilibria: r.equilibria.iter().map(ClassifyReport::from).collect(),
            degenerate: r.degenerate.clone(),
        }
    }
}

fn sweep_csv(records: &[toy::SweepRecord], s: usize) -> String {
    let mut out = String::new();
    let mu_cols: Vec<String> = (1..=s).map(|i| format!("mu{i}")).collect();
    out.push_str(&mu_cols.join(","));
    out.push_str(",origin_equilibrium,rho0,kind,chi_squared,cycle_frequency\n");
    for r in records {
        let prefix = |out: &mut String| {
            let mut mu = String::new();
            csv_row(&mut mu, &r.mu);
            out.push_str(mu.trim_end());
            out.push_str(if r.origin_equilibrium { ",1" } else { ",0" });
        };
        if r.equilibria.is_empty() && r.degenerate.is_empty() {
            prefix(&mut out);
            out.push_str(",,none,,\n");
        }
        for e in &r.equilibria {
            prefix(&mut out);
            let mut nums = String::new();
            csv_row(&mut nums, &[e.exponents.chi_squared(), e.cycle_frequency]);
            out.push_str(&format!(
                ",{},{:?},{}",
                crate::output::fmt17(e.rho0),
                e.kind,
                nums
            ));
        }
        for &rho0 in &r.degenerate {
            prefix(&mut out);
            out.push_str(&format!(",{},Degenerate,,\n", crate::output::fmt17(rho0)));
        }
    }
    out
}
