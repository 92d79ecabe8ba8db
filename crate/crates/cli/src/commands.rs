use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use nalgebra::DVector;
use num_complex::Complex;

use cca_transport::dynamics::{spectral_decompose, transition_amplitudes, AmplitudeMatrix};
use cca_transport::metrics::{
    average_fidelity, infidelity_upper_bound, monte_carlo_fidelity,
    perturbative_reflection_leakage, perturbative_transmission_leakage, site_leakage, Side,
};
use cca_transport::model::{
    channel_energy, channel_mode, validity_report, SystemConfig, ValidityReport,
};
use cca_transport::network::{simulate_schedule, uniform_grid};

use crate::error::{CliError, CliResult};
use crate::output::{num, write_csv};
use crate::scenario::{self, Units};

#[derive(Parser)]
#[command(
    name = "cca-transport",
    version,
    about = "Single-photon transport between cavity registers over atom-switched channels"
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Print the channel mode spectrum as CSV (k, Lambda, psi_1k)
    Spectrum(SpectrumArgs),
    /// Sweep the interface coupling and tabulate infidelities
    Sweep(SweepArgs),
    /// Score one switch setting at a fixed time
    Switch(SwitchArgs),
    /// Run a scheduled network scenario and trace register fidelities
    Network(NetworkArgs),
}

#[derive(Args)]
struct SpectrumArgs {
    /// Channel cavity count
    #[arg(long = "N")]
    n_cavities: usize,
    /// Channel coupling, the energy unit
    #[arg(long = "g-c", default_value_t = 1.0)]
    g_c: f64,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    /// Scenario file providing the system and sweep sections
    #[arg(
        long,
        conflicts_with_all = ["side", "n_cavities", "n", "m", "j_i", "g_i_min", "g_i_max", "points", "linear"]
    )]
    scenario: Option<PathBuf>,
    /// Scored direction: r (transmission) or l (reflection)
    #[arg(long)]
    side: Option<String>,
    /// Channel cavity count
    #[arg(long = "N")]
    n_cavities: Option<usize>,
    /// Register cavity count
    #[arg(long)]
    n: Option<usize>,
    /// Atom site inside the channel
    #[arg(long)]
    m: Option<usize>,
    /// Atom coupling (side l only; side r runs without the switch)
    #[arg(long = "J-I")]
    j_i: Option<f64>,
    /// Lower end of the interface coupling range
    #[arg(long = "g-I-min")]
    g_i_min: Option<f64>,
    /// Upper end of the interface coupling range
    #[arg(long = "g-I-max")]
    g_i_max: Option<f64>,
    /// Number of sweep points
    #[arg(long, default_value_t = 30)]
    points: usize,
    /// Space points linearly instead of logarithmically
    #[arg(long)]
    linear: bool,
    /// Write CSV here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SwitchArgs {
    /// Channel cavity count
    #[arg(long = "N")]
    n_cavities: usize,
    /// Register cavity count
    #[arg(long)]
    n: usize,
    /// Atom site inside the channel
    #[arg(long, default_value_t = 3)]
    m: usize,
    /// Atom coupling
    #[arg(long = "J-I", default_value_t = 0.0)]
    j_i: f64,
    /// Interface coupling
    #[arg(long = "g-I")]
    g_i: f64,
    /// Couple the switch atom (blocks transport)
    #[arg(long)]
    atom_coupled: bool,
    /// Evolution time in units of tau
    #[arg(long, default_value_t = 1.0)]
    time: f64,
    /// Scored side; defaults to l when the atom is coupled, else r
    #[arg(long)]
    side: Option<String>,
    /// Cross-check the fidelity with this many Monte-Carlo samples
    #[arg(long = "mc-samples")]
    mc_samples: Option<usize>,
    /// Seed for the Monte-Carlo cross-check
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Also write the report as CSV (quantity,value)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct NetworkArgs {
    /// Scenario file with a network section
    #[arg(long)]
    scenario: PathBuf,
    /// Override the sample count
    #[arg(long)]
    samples: Option<usize>,
    /// Write CSV here instead of the scenario's output path or stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            eprintln!("error: {err}");
            err.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Spectrum(args) => cmd_spectrum(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Switch(args) => cmd_switch(args),
        Command::Network(args) => cmd_network(args),
    }
}

fn cmd_spectrum(args: SpectrumArgs) -> CliResult<()> {
    if args.n_cavities == 0 {
        return Err(CliError::Validation("channel needs at least one cavity".into()));
    }
    if args.g_c <= 0.0 {
        return Err(CliError::Validation("channel coupling g_c must be positive".into()));
    }
    let mut lines = vec!["k,Lambda,psi_1k".to_string()];
    for k in 1..=args.n_cavities {
        let energy = channel_energy(k, args.n_cavities, args.g_c)?;
        let psi: f64 = channel_mode(1, k, args.n_cavities)?;
        lines.push(format!("{k},{},{}", num(energy), num(psi)));
    }
    write_csv(args.out.as_deref(), &lines)
}

struct SweepPlan {
    side: Side,
    n_cavities: usize,
    n: usize,
    m: usize,
    j_i: f64,
    atom_coupled: bool,
    g_min: f64,
    g_max: f64,
    points: usize,
    log_scale: bool,
}

impl SweepPlan {
    fn from_scenario(path: &Path) -> CliResult<Self> {
        let scenario = scenario::load(path)?;
        let system = scenario.system.ok_or_else(|| {
            CliError::Validation(format!("{}: sweep needs a system section", path.display()))
        })?;
        let sweep = scenario.sweep.ok_or_else(|| {
            CliError::Validation(format!("{}: sweep needs a sweep section", path.display()))
        })?;
        Ok(SweepPlan {
            side: Side::from_str(&sweep.side)?,
            n_cavities: system.n_cavities,
            n: system.n,
            m: system.m,
            j_i: system.j_i,
            atom_coupled: system.atom_coupled,
            g_min: sweep.g_i_min,
            g_max: sweep.g_i_max,
            points: sweep.points,
            log_scale: sweep.log_scale,
        })
    }

    fn from_flags(args: &SweepArgs) -> CliResult<Self> {
        let missing = |flag: &str| {
            CliError::Validation(format!("--{flag} is required when no scenario is given"))
        };
        let side = Side::from_str(args.side.as_deref().ok_or_else(|| missing("side"))?)?;
        let atom_coupled = side == Side::Left;
        Ok(SweepPlan {
            side,
            n_cavities: args.n_cavities.ok_or_else(|| missing("N"))?,
            n: args.n.ok_or_else(|| missing("n"))?,
            m: args.m.unwrap_or(3),
            j_i: args.j_i.unwrap_or(0.0),
            atom_coupled,
            g_min: args.g_i_min.ok_or_else(|| missing("g-I-min"))?,
            g_max: args.g_i_max.ok_or_else(|| missing("g-I-max"))?,
            points: args.points,
            log_scale: !args.linear,
        })
    }

    fn validate(&self) -> CliResult<()> {
        match self.side {
            Side::Right => {
                if self.j_i != 0.0 || self.atom_coupled {
                    return Err(CliError::Validation(
                        "transmission sweeps run with the switch removed: J_I = 0, atom uncoupled"
                            .into(),
                    ));
                }
            }
            Side::Left => {
                if !self.atom_coupled || self.j_i <= 0.0 {
                    return Err(CliError::Validation(
                        "reflection sweeps need the atom coupled with J_I > 0".into(),
                    ));
                }
                if self.m % 2 == 0 {
                    return Err(CliError::Validation(
                        "reflection sweeps need an odd atom site m".into(),
                    ));
                }
            }
        }
        if self.points == 0 {
            return Err(CliError::Validation("sweep needs at least one point".into()));
        }
        if self.g_min <= 0.0 || self.g_max < self.g_min {
            return Err(CliError::Validation(
                "sweep range must satisfy 0 < g_I_min <= g_I_max".into(),
            ));
        }
        Ok(())
    }

    fn grid(&self) -> Vec<f64> {
        if self.points == 1 {
            return vec![self.g_min];
        }
        let last = (self.points - 1) as f64;
        (0..self.points)
            .map(|i| {
                let s = i as f64 / last;
                if self.log_scale {
                    self.g_min * (self.g_max / self.g_min).powf(s)
                } else {
                    self.g_min + (self.g_max - self.g_min) * s
                }
            })
            .collect()
    }
}

/// Amplitude block of the configured system from the left register to the
/// side's target register, at time t.
fn amplitude_block(
    config: &SystemConfig<f64>,
    side: Side,
    t: f64,
) -> CliResult<AmplitudeMatrix<f64>> {
    let h = cca_transport::model::build_full_hamiltonian(config)?;
    let es = spectral_decompose(&h)?;
    let layout = config.layout();
    let targets = match side {
        Side::Left => layout.left_indices(),
        Side::Right => layout.right_indices(),
    };
    let mut block = transition_amplitudes(&es, &layout.left_indices(), &targets, t)?;
    block.source = "l".into();
    block.target = side.to_string();
    Ok(block)
}

fn in_regime(report: &ValidityReport<f64>, side: Side) -> bool {
    report.weak_coupling && (side == Side::Right || report.switch_regime)
}

fn cmd_sweep(args: SweepArgs) -> CliResult<()> {
    let plan = match &args.scenario {
        Some(path) => SweepPlan::from_scenario(path)?,
        None => SweepPlan::from_flags(&args)?,
    };
    plan.validate()?;

    let mut lines = vec!["g_I_ratio,xi_numeric,xi_perturbative,xi_bound".to_string()];
    for (i, g_i) in plan.grid().into_iter().enumerate() {
        let config = SystemConfig::resonant(
            plan.n,
            plan.n_cavities,
            plan.m,
            g_i,
            plan.j_i,
            plan.atom_coupled,
        )?;
        let report = validity_report(&config)?;
        if !in_regime(&report, plan.side) {
            eprintln!(
                "warning: point {i} (g_I = {}) is outside the weak-coupling regime",
                num(g_i)
            );
        }
        let block = amplitude_block(&config, plan.side, config.transfer_time())?;
        let fidelity = average_fidelity(&block, plan.side)?;
        let estimate = match plan.side {
            Side::Right => perturbative_transmission_leakage(&config)?,
            Side::Left => perturbative_reflection_leakage(&config)?,
        };
        let bound = infidelity_upper_bound(&config, plan.side)?;
        lines.push(format!(
            "{},{},{},{}",
            num(g_i),
            num(fidelity.xi),
            num(2.0 * estimate.delta),
            num(bound)
        ));
    }
    write_csv(args.out.as_deref(), &lines)
}

fn cmd_switch(args: SwitchArgs) -> CliResult<()> {
    let side = match &args.side {
        Some(text) => Side::from_str(text)?,
        None if args.atom_coupled => Side::Left,
        None => Side::Right,
    };
    if args.time < 0.0 {
        return Err(CliError::Validation("evolution time must be nonnegative".into()));
    }
    let config = SystemConfig::resonant(
        args.n,
        args.n_cavities,
        args.m,
        args.g_i,
        args.j_i,
        args.atom_coupled,
    )?;
    let tau = config.transfer_time();
    let t = args.time * tau;
    let report = validity_report(&config)?;
    let block = amplitude_block(&config, side, t)?;
    let fidelity = average_fidelity(&block, side)?;
    let eps = site_leakage(&block)?;

    // Perturbative numbers exist only where the corresponding regime does.
    let estimate = match side {
        Side::Right => perturbative_transmission_leakage(&config).ok(),
        Side::Left => perturbative_reflection_leakage(&config).ok(),
    };
    let bound = infidelity_upper_bound(&config, side).ok();
    let mc = match args.mc_samples {
        Some(samples) => Some(monte_carlo_fidelity(&block, samples, args.seed)?),
        None => None,
    };

    let g0 = config.left.g0;
    println!(
        "system: N={} n={} m={} g_I={} J_I={} atom={}",
        args.n_cavities,
        args.n,
        args.m,
        num(args.g_i),
        num(args.j_i),
        if args.atom_coupled { "coupled" } else { "uncoupled" }
    );
    println!("g0={} tau={}", num(g0), num(tau));
    println!("t={} ({} tau), scored side: {}", num(t), num(args.time), side);
    println!(
        "regime: weak_coupling={} switch_regime={} m_parity_ok={}",
        report.weak_coupling, report.switch_regime, report.m_parity_ok
    );
    println!("f diagonal ({}_j <- l_j):", side);
    for j in 0..config.left.n {
        let f = block.f[(j, j)];
        println!("  j={}: re={} im={}", j + 1, num(f.re), num(f.im));
    }
    println!("F={} xi={}", num(fidelity.f), num(fidelity.xi));
    match &estimate {
        Some(est) => println!("xi_perturbative={}", num(2.0 * est.delta)),
        None => println!("xi_perturbative=undefined for this switch setting"),
    }
    match bound {
        Some(b) => println!("xi_bound={}", num(b)),
        None => println!("xi_bound=undefined for this switch setting"),
    }
    let eps_list = eps.iter().map(|&e| num(e)).collect::<Vec<_>>().join(",");
    println!("eps_j={eps_list}");
    if let Some(mc) = &mc {
        println!(
            "mc: mean={} std_err={} (samples={} seed={})",
            num(mc.mean),
            num(mc.std_err),
            args.mc_samples.unwrap_or(0),
            args.seed
        );
    }

    if args.out.is_some() {
        let mut lines = vec!["quantity,value".to_string()];
        lines.push(format!("g0,{}", num(g0)));
        lines.push(format!("tau,{}", num(tau)));
        lines.push(format!("t,{}", num(t)));
        lines.push(format!("fidelity,{}", num(fidelity.f)));
        lines.push(format!("infidelity,{}", num(fidelity.xi)));
        if let Some(est) = &estimate {
            lines.push(format!("xi_perturbative,{}", num(2.0 * est.delta)));
        }
        if let Some(b) = bound {
            lines.push(format!("xi_bound,{}", num(b)));
        }
        for (j, &e) in eps.iter().enumerate() {
            lines.push(format!("eps_{},{}", j + 1, num(e)));
        }
        if let Some(mc) = &mc {
            lines.push(format!("mc_mean,{}", num(mc.mean)));
            lines.push(format!("mc_std_err,{}", num(mc.std_err)));
        }
        write_csv(args.out.as_deref(), &lines)?;
    }
    Ok(())
}

fn cmd_network(args: NetworkArgs) -> CliResult<()> {
    let scenario = scenario::load(&args.scenario)?;
    let section = scenario.network.as_ref().ok_or_else(|| {
        CliError::Validation(format!(
            "{}: network runs need a network section",
            args.scenario.display()
        ))
    })?;
    let built = section.build(scenario.units)?;

    let points = args
        .samples
        .or_else(|| scenario.output.as_ref().and_then(|o| o.sample_points))
        .unwrap_or(600);
    if points == 0 {
        return Err(CliError::Validation("sample count must be at least 1".into()));
    }
    let grid = uniform_grid(built.schedule.total_duration(), points);

    let n = built.topology.registers[built.source].n;
    let mut alpha = DVector::from_element(n, Complex::new(0.0, 0.0));
    alpha[0] = Complex::new(1.0, 0.0);
    let trace = simulate_schedule(&built.topology, &built.schedule, built.source, &alpha, &grid)?;

    let time_scale = match scenario.units {
        Units::Tau => built.tau,
        Units::InvGc => 1.0,
    };
    let r = trace.n_registers();
    let mut header = String::from("t");
    for theta in 1..=r {
        header.push_str(&format!(",F_{theta}"));
    }
    let mut lines = vec![header];
    for s in 0..trace.n_samples() {
        let mut line = num(trace.times()[s] / time_scale);
        for theta in 0..r {
            line.push(',');
            line.push_str(&num(trace.value(s, theta)));
        }
        lines.push(line);
    }

    let out = args
        .out
        .clone()
        .or_else(|| {
            scenario
                .output
                .as_ref()
                .and_then(|o| o.path.as_ref())
                .map(PathBuf::from)
        });
    write_csv(out.as_deref(), &lines)
}
