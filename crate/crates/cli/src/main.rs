//! `photonic-module-sim`: compile, simulate and check photonic-module
//! entanglement factories.
//!
//! Exit codes: 0 success, 1 `verify` found the states unequal, 2 parse or
//! validation error, 3 infeasible on the chosen device, 4 verification
//! failure or internal error, 5 I/O error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use log::info;
use photonic_core::physics::format_significant;
use photonic_core::{
    compile, feasibility_report, groups_equal, parse_target, render_report, render_schedule, rng,
    CavityParams, CorrectionPolicy, DeviceLimits, Engine, Error, ErrorClass, Execution,
    FeasibilityReport, ModuleDevice, PauliString, RunConfig, TargetState,
};

const EXIT_UNEQUAL: u8 = 1;
const EXIT_INVALID: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_VERIFICATION: u8 = 4;
const EXIT_IO: u8 = 5;

#[derive(Parser)]
#[command(
    name = "photonic-module-sim",
    version,
    about = "Photonic-module entanglement factory simulator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compile a target, run it, and verify the prepared state.
    Prepare(PrepareArgs),
    /// Compile a target and print its schedule.
    Schedule(ScheduleArgs),
    /// Cavity-QED feasibility estimates.
    Feasibility(FeasibilityArgs),
    /// Check whether two generator lists define the same stabilizer group.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct DeviceArgs {
    /// Cavity preset setting the module's transit and coherence times.
    #[arg(long, default_value = "NV")]
    device: String,
    /// Transit time per photon in µs; overrides the preset with --coherence.
    #[arg(long, requires = "coherence")]
    transit: Option<f64>,
    /// Atom coherence time in µs.
    #[arg(long, requires = "transit")]
    coherence: Option<f64>,
    /// Number of identical modules.
    #[arg(long, default_value_t = 1)]
    modules: usize,
}

#[derive(Args)]
struct PrepareArgs {
    /// Preset (bell, ghz(n), linear_cluster(n), grid_cluster(w,h), graph(n;a-b,...)) or target file.
    target: String,
    #[command(flatten)]
    device: DeviceArgs,
    /// RNG seed; drawn from the OS when omitted and always reported.
    #[arg(long)]
    seed: Option<u64>,
    /// Pulse separation in µs (default: 1.1 × transit time).
    #[arg(long)]
    dt: Option<f64>,
    /// tableau, dense or both.
    #[arg(long, default_value = "tableau")]
    engine: String,
    /// eager or frame.
    #[arg(long, default_value = "eager")]
    policy: String,
    /// Write the report here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Write the final dense photon amplitudes to this file.
    #[arg(long)]
    dump_amplitudes: Option<PathBuf>,
}

#[derive(Args)]
struct ScheduleArgs {
    target: String,
    #[command(flatten)]
    device: DeviceArgs,
    /// Override the device's maximum Parity-weight.
    #[arg(long)]
    max_weight: Option<usize>,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FeasibilityArgs {
    /// Cs, Rb or NV.
    #[arg(long, conflicts_with_all = ["beta", "gamma"])]
    preset: Option<String>,
    /// Atom/cavity coupling β, MHz.
    #[arg(long, requires = "gamma")]
    beta: Option<f64>,
    /// Atomic decay rate Γ, MHz.
    #[arg(long, requires = "beta")]
    gamma: Option<f64>,
    /// Absorption budget ζ in (0, 1).
    #[arg(long)]
    zeta: Option<f64>,
    /// Detuning Δ, MHz (default: the minimum allowed by ζ).
    #[arg(long)]
    delta: Option<f64>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Generator list (`+XX,+ZZ`), preset, or target file.
    #[arg(allow_hyphen_values = true)]
    a: String,
    #[arg(allow_hyphen_values = true)]
    b: String,
}

enum Failure {
    Core(Error),
    Io(String),
    Verification(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Prepare(a) => prepare(a),
        Command::Schedule(a) => schedule(a),
        Command::Feasibility(a) => feasibility(a),
        Command::Verify(a) => verify(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(match e.class() {
                ErrorClass::Invalid => EXIT_INVALID,
                ErrorClass::Infeasible => EXIT_INFEASIBLE,
                ErrorClass::Verification | ErrorClass::Internal => EXIT_VERIFICATION,
            })
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("verification failed: {msg}");
            ExitCode::from(EXIT_VERIFICATION)
        }
    }
}

fn read_arg(arg: &str) -> Result<String, Failure> {
    let path = Path::new(arg);
    if path.is_file() {
        fs::read_to_string(path).map_err(|e| Failure::Io(format!("{arg}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn load_target(arg: &str) -> Result<TargetState, Failure> {
    Ok(parse_target(&read_arg(arg)?)?)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build_device(args: &DeviceArgs) -> Result<ModuleDevice, Failure> {
    if args.modules == 0 {
        return Err(Error::InvalidParameter("--modules must be at least 1".into()).into());
    }
    if let (Some(t), Some(c)) = (args.transit, args.coherence) {
        return Ok(ModuleDevice::new(t, c)?);
    }
    let report = feasibility_report(&CavityParams::preset(&args.device)?)?;
    Ok(ModuleDevice::new(
        report.interaction_time,
        report.coherence_time,
    )?)
}

fn prepare(args: PrepareArgs) -> Result<u8, Failure> {
    let target = load_target(&args.target)?;
    let device = build_device(&args.device)?;
    let engine: Engine = args.engine.parse()?;
    let policy: CorrectionPolicy = args.policy.parse()?;
    let seed = args.seed.unwrap_or_else(rng::fresh_seed);
    if args.seed.is_none() {
        eprintln!("seed={seed}");
    }
    let dt = args.dt.unwrap_or(1.1 * device.transit_time());
    let schedule = compile(
        &target,
        DeviceLimits {
            max_weight: device.max_weight(),
        },
        args.device.modules,
    )?;
    info!(
        "compiled {} checks into {} slots",
        schedule.checks().len(),
        schedule.num_slots()
    );

    let mut config = RunConfig::new(device, dt, seed);
    config.engine = engine;
    config.policy = policy;
    let mut r = rng::seeded(seed);
    let (report, photons) = Execution::new(&schedule, config)?.finish(&mut r)?;
    write_output(args.output.as_deref(), &render_report(&report))?;
    if let (Some(path), Some(photons)) = (&args.dump_amplitudes, &photons) {
        fs::write(path, photons.dump())
            .map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
    }
    if !report.verified() {
        return Err(Failure::Verification(
            report.verdict.diff.clone().unwrap_or_default(),
        ));
    }
    Ok(0)
}

fn schedule(args: ScheduleArgs) -> Result<u8, Failure> {
    let target = load_target(&args.target)?;
    let max_weight = match args.max_weight {
        Some(w) => w,
        None => build_device(&args.device)?.max_weight(),
    };
    let schedule = compile(
        &target,
        DeviceLimits { max_weight },
        args.device.modules.max(1),
    )?;
    write_output(args.output.as_deref(), &render_schedule(&schedule))?;
    Ok(0)
}

fn feasibility(args: FeasibilityArgs) -> Result<u8, Failure> {
    let mut params = match (&args.preset, args.beta, args.gamma) {
        (Some(p), _, _) => CavityParams::preset(p)?,
        (None, Some(b), Some(g)) => CavityParams::new("custom", b, g)?,
        _ => CavityParams::preset("Cs")?,
    };
    if let Some(z) = args.zeta {
        params = params.with_zeta(z)?;
    }
    if let Some(d) = args.delta {
        params = params.with_delta(d)?;
    }
    print!("{}", render_feasibility(&feasibility_report(&params)?));
    Ok(0)
}

fn render_feasibility(r: &FeasibilityReport) -> String {
    let p = &r.params;
    let sig = |x: f64| format_significant(x, 4);
    let mut rows = vec![
        ("system", p.label.clone()),
        ("beta (MHz)", sig(p.beta)),
        ("Gamma (MHz)", sig(p.gamma_decay)),
        ("zeta", sig(p.zeta)),
        ("Delta_min (MHz)", sig(r.min_detuning)),
        ("Delta (MHz)", sig(r.detuning)),
        ("light shift (MHz)", sig(r.light_shift)),
        ("t_pi at Delta_min (us)", format_significant(r.pi_time, 2)),
        ("t at Delta (us)", sig(r.interaction_time)),
        ("required kappa (MHz)", sig(r.required_kappa)),
        ("coherence 1/Gamma (us)", sig(r.coherence_time)),
        ("max Parity-weight P_m", r.max_parity_weight.to_string()),
    ];
    if let Some(t) = p.experimental_time {
        rows.push(("reported storage time (us)", sig(t)));
    }
    let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    let mut out = String::new();
    for (k, v) in &rows {
        out.push_str(&format!("{k:<width$}  {v}\n"));
    }
    out.push('\n');
    out.push_str(&format!("system={}\n", p.label));
    out.push_str(&format!("beta={}\n", sig(p.beta)));
    out.push_str(&format!("gamma={}\n", sig(p.gamma_decay)));
    out.push_str(&format!("zeta={}\n", sig(p.zeta)));
    out.push_str(&format!("delta_min={}MHz\n", sig(r.min_detuning)));
    out.push_str(&format!("delta={}MHz\n", sig(r.detuning)));
    out.push_str(&format!("light_shift={}MHz\n", sig(r.light_shift)));
    out.push_str(&format!("t_pi={}us\n", format_significant(r.pi_time, 2)));
    out.push_str(&format!("t={}us\n", sig(r.interaction_time)));
    out.push_str(&format!("kappa={}MHz\n", sig(r.required_kappa)));
    out.push_str(&format!("coherence={}us\n", sig(r.coherence_time)));
    out.push_str(&format!("P_m={}\n", r.max_parity_weight));
    out.push_str(&format!("supports_parity={}\n", r.supports_parity()));
    if let Some(t) = p.experimental_time {
        out.push_str(&format!("exp_t={}us\n", sig(t)));
    }
    out
}

/// Accepts `+XX,+ZZ` or `{+XX, +ZZ}`, a preset, or a target file.
fn load_generators(arg: &str) -> Result<Vec<PauliString>, Failure> {
    let text = read_arg(arg)?;
    let trimmed = text.trim();
    let inline = trimmed.trim_start_matches('{').trim_end_matches('}');
    let looks_inline = !inline.is_empty()
        && inline.split(',').all(|t| {
            let t = t.trim();
            !t.is_empty() && t.chars().all(|ch| "+-iIXYZ".contains(ch))
        });
    if looks_inline {
        let gens = inline
            .split(',')
            .map(|t| t.trim().parse::<PauliString>())
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(gens);
    }
    Ok(parse_target(&text)?.generators().to_vec())
}

fn verify(args: VerifyArgs) -> Result<u8, Failure> {
    let a = load_generators(&args.a)?;
    let b = load_generators(&args.b)?;
    let (na, nb) = (a[0].len(), b[0].len());
    if na != nb {
        return Err(Error::LengthMismatch {
            left: na,
            right: nb,
        }
        .into());
    }
    let equal = groups_equal(na, &a, &b)?;
    println!("equal={equal}");
    Ok(if equal { 0 } else { EXIT_UNEQUAL })
}
