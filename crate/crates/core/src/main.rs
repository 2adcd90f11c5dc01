use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use osg_bell::bell::BellDiagnostics;
use osg_bell::density::{compute_coefficients, PhaseConvention, TwoQubitDensity};
use osg_bell::oracle::OracleConfig;
use osg_bell::params::{parse_config, Method, RunSpec, Scenario};
use osg_bell::scan::{compare_methods, emit_csv, run_point, run_scan, ScanSpec, ScanVariable};
use osg_bell::Error;

#[derive(Parser)]
#[command(
    name = "osg-bell",
    version,
    about = "Bell correlations of two atoms crossing a cavity mode"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single configuration.
    Run {
        #[command(flatten)]
        common: Common,
    },
    /// Sweep one variable and write CSV.
    Scan {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare closed form and oracle over a grid; non-zero exit on mismatch.
    Compare {
        #[command(flatten)]
        common: Common,
        #[command(flatten)]
        grid: Grid,
        /// Interaction time that sets the phase of the c± coefficients.
        #[arg(long, value_enum, default_value_t = ConventionArg::SecondAtom)]
        convention: ConventionArg,
        #[arg(long, default_value_t = 1e-6)]
        tolerance: f64,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// `key=value`, applied after the file; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// closed, oracle or both; overrides the file.
    #[arg(long)]
    method: Option<Method>,
    /// Starting Fock cutoff of the oracle.
    #[arg(long, default_value_t = 128)]
    cutoff: usize,
    /// Largest cutoff the doubling check may reach.
    #[arg(long, default_value_t = 512)]
    max_cutoff: usize,
}

#[derive(Args)]
struct Grid {
    /// T, T1, T2 or x0.
    #[arg(long)]
    var: ScanVariable,
    #[arg(long, allow_hyphen_values = true)]
    from: f64,
    #[arg(long, allow_hyphen_values = true)]
    to: f64,
    #[arg(long)]
    steps: usize,
    /// Read --from/--to as εT instead of seconds (time variables only).
    #[arg(long)]
    eps_units: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ConventionArg {
    SecondAtom,
    FirstAtom,
}

impl From<ConventionArg> for PhaseConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::SecondAtom => PhaseConvention::SecondAtom,
            ConventionArg::FirstAtom => PhaseConvention::LiteralFirstAtom,
        }
    }
}

impl Common {
    fn load(&self) -> Result<(RunSpec, OracleConfig), Error> {
        let text = fs::read_to_string(&self.config)
            .map_err(|e| Error::Config(format!("{}: {e}", self.config.display())))?;
        let mut spec = parse_config(&text)?;
        for o in &self.overrides {
            spec.apply_override(o)?;
        }
        if let Some(m) = self.method {
            spec.method = m;
        }
        let oracle = OracleConfig {
            cutoff: self.cutoff,
            max_cutoff: self.max_cutoff,
            ..Default::default()
        };
        warn_validity(&spec)?;
        Ok((spec, oracle))
    }
}

impl Grid {
    fn build(&self, base: RunSpec) -> Result<ScanSpec, Error> {
        let scale = if self.eps_units {
            if self.var == ScanVariable::X0 {
                return Err(Error::Config(
                    "--eps-units applies to time variables only".into(),
                ));
            }
            1.0 / base.params.epsilon
        } else {
            1.0
        };
        let scan = ScanSpec {
            variable: self.var,
            start: self.from * scale,
            stop: self.to * scale,
            steps: self.steps,
            base,
        };
        scan.validate()?;
        Ok(scan)
    }
}

fn warn_validity(spec: &RunSpec) -> Result<(), Error> {
    let d = spec.params.derive()?;
    for (i, p) in [spec.packet1, spec.packet2].iter().enumerate() {
        if let Some(w) = p.validity_warning(&d) {
            eprintln!("warning: packet {}: {w:?}", i + 1);
        }
    }
    Ok(())
}

fn print_rho(title: &str, rho: &TwoQubitDensity) {
    println!("{title} (basis gg, ge, eg, ee)");
    for r in 0..4 {
        let cells: Vec<String> = (0..4)
            .map(|c| {
                let z = rho.get(r, c);
                format!("{:+.9e}{:+.9e}i", z.re, z.im)
            })
            .collect();
        println!("  {}", cells.join("  "));
    }
}

fn print_diag(label: &str, d: &BellDiagnostics) {
    println!(
        "{label:<18} λ = [{:.10}, {:.10}, {:.10}]  M = {:.10}  CHSH max = {:.10}  violates = {}",
        d.lambdas[0], d.lambdas[1], d.lambdas[2], d.m, d.chsh_max, d.violates
    );
}

fn run(common: &Common) -> Result<ExitCode, Error> {
    let (spec, oracle) = common.load()?;
    let d = spec.params.derive()?;
    println!(
        "k = {:.6e} m⁻¹  ω₀ = {:.6e} s⁻¹  Δx₀ = {:.6e} m",
        d.k, d.omega0, d.delta_x0
    );
    println!(
        "εT₁ = {:.6}  εT₂ = {:.6}  ω₀T₁ = {:.6}",
        spec.params.epsilon * spec.t1,
        spec.params.epsilon * spec.t2,
        d.omega0 * spec.t1
    );
    if spec.scenario == Scenario::PhotonInCavity && spec.method != Method::Oracle {
        let c = compute_coefficients(&spec)?;
        for (name, v) in ["c1", "c2", "c+", "c-"].iter().zip(c.as_array()) {
            println!(
                "{name:<3} = {:+.12e} {:+.12e}i  |{name}| = {:.12}",
                v.re,
                v.im,
                v.norm()
            );
        }
    }
    let p = run_point(&spec, &oracle)?;
    if let Some((rho, diag)) = &p.closed {
        print_rho("closed-form ρ", rho);
        print_diag("closed", diag);
    }
    if let Some(m) = p.surrogate_m {
        println!("closed-surrogate   M = {m:.10}  violates = {}", m > 1.0);
    }
    if let Some((rho, diag, n)) = &p.oracle {
        print_rho(&format!("oracle ρ, N = {n}"), rho);
        print_diag("oracle", diag);
    }
    if let Some(delta) = p.max_delta_rho() {
        println!("max |ρ_closed − ρ_oracle| = {delta:.3e}");
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Run { common } => run(common),
        Command::Scan { common, grid, out } => (|| {
            let (spec, oracle) = common.load()?;
            let rows = run_scan(&grid.build(spec)?, &oracle)?;
            let csv = emit_csv(&rows);
            match out {
                Some(path) => fs::write(path, csv)
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?,
                None => print!("{csv}"),
            }
            Ok(ExitCode::SUCCESS)
        })(),
        Command::Compare {
            common,
            grid,
            convention,
            tolerance,
        } => (|| {
            let (spec, oracle) = common.load()?;
            let report = compare_methods(
                &grid.build(spec)?,
                (*convention).into(),
                &oracle,
                *tolerance,
            )?;
            println!("{report}");
            Ok(if report.passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        })(),
    };
    result.unwrap_or_else(|e: Error| {
        eprintln!("error: {e}");
        let mut src = std::error::Error::source(&e);
        while let Some(s) = src {
            eprintln!("  caused by: {s}");
            src = s.source();
        }
        ExitCode::from(2)
    })
}
