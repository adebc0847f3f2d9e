//! `dpsfield`: potential tables, Green's function tables, the Møller element and
//! the invariant check suites, written as `#`-headed CSV or TSV.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage error, 3 numerical nonconvergence.
//! `DPSFIELD_THREADS` sets the worker count; output does not depend on it.

mod commands;
mod table;

use std::fs;
use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dpsfield::checks::Suite;
use dpsfield::QuadratureConfig;

use commands::MollerFlags;
use table::{format_float, Format, Table};

const THREADS_ENV: &str = "DPSFIELD_THREADS";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum XMap {
    /// x = n
    Index,
    /// x = √(2n+1)
    Sqrt2n1,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SuiteArg {
    Fast,
    Full,
}

#[derive(Debug, Parser)]
#[command(
    name = "dpsfield",
    version,
    about = "Discrete phase-space Green's functions and potentials"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Boson mass μ (≥ 0)
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    mu: f64,
    /// Fermion mass m (> 0)
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    m: f64,
    /// Coupling g
    #[arg(long, global = true, default_value_t = 1.0, allow_negative_numbers = true)]
    g: f64,
    /// Row count / box size / vertex truncation, depending on the command
    #[arg(long, global = true)]
    n_max: Option<usize>,
    /// Gauss–Hermite nodes per axis (8..=300)
    #[arg(long, global = true, default_value_t = 64)]
    gh_nodes: usize,
    /// Output file; standard output if absent
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Mapping from the discrete index to the continuum coordinate
    #[arg(long, global = true, value_enum, default_value_t = XMap::Sqrt2n1)]
    x_map: XMap,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// W#(n¹; μ) and V#(n¹; μ) for n¹ = 0..=n_max (default 10)
    Yukawa,
    /// Non-singular Coulomb family W#(2n¹; 0) for n¹ = 0..=n_max (default 10)
    Coulomb {
        /// Also write a gnuplot script plotting the table (requires --out)
        #[arg(long)]
        gnuplot: Option<PathBuf>,
    },
    /// Continuum Yukawa potential: closed form and quadrature oracle at r = x(n), n ≤ n_max (default 10)
    Continuum,
    /// G#(n, n̂; μ) over the box [0, n_max]³ × [0, n_max]³ (default n_max 1)
    Greens,
    /// Second-order Møller reduced element, vertex sums truncated at n_max (default 64)
    Moller {
        #[arg(long, value_parser = parse_vec3, default_value = "0,0,0", allow_hyphen_values = true)]
        p1: [f64; 3],
        #[arg(long, value_parser = parse_vec3, default_value = "0,0,0", allow_hyphen_values = true)]
        p2: [f64; 3],
        #[arg(long, value_parser = parse_vec3, default_value = "0,0,0", allow_hyphen_values = true)]
        p1_out: [f64; 3],
        #[arg(long, value_parser = parse_vec3, default_value = "0,0,0", allow_hyphen_values = true)]
        p2_out: [f64; 3],
        /// Spins r₁,r₂,r′₁,r′₂, each 1 or 2
        #[arg(long, value_parser = parse_spins, default_value = "1,1,1,1")]
        spins: [u8; 4],
    },
    /// Invariant and oracle checks
    Check {
        #[arg(value_enum, default_value_t = SuiteArg::Fast)]
        suite: SuiteArg,
        #[arg(long, hide = true)]
        corrupt_gamma: bool,
    },
}

fn parse_vec3(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{s}'"));
    }
    let mut out = [0.0f64; 3];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = p.trim().parse().map_err(|_| format!("'{p}' is not a number"))?;
        if !o.is_finite() {
            return Err(format!("'{p}' is not finite"));
        }
    }
    Ok(out)
}

fn parse_spins(s: &str) -> Result<[u8; 4], String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 4 {
        return Err(format!("expected four comma-separated spins, got '{s}'"));
    }
    let mut out = [0u8; 4];
    for (o, p) in out.iter_mut().zip(parts) {
        *o = match p.trim() {
            "1" => 1,
            "2" => 2,
            other => return Err(format!("spin '{other}' out of range (accepted values: 1 or 2)")),
        };
    }
    Ok(out)
}

/// The effective configuration of one run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub mu: f64,
    pub m: f64,
    pub g: f64,
    pub n_max: usize,
    pub gh_nodes: usize,
    pub out_path: Option<PathBuf>,
    pub x_map: XMap,
    pub format: Format,
}

impl RunConfig {
    fn from_cli(cli: &Cli) -> Self {
        let (command, default_n) = match cli.command {
            Command::Yukawa => ("yukawa", 10),
            Command::Coulomb { .. } => ("coulomb", 10),
            Command::Continuum => ("continuum", 10),
            Command::Greens => ("greens", 1),
            Command::Moller { .. } => ("moller", 64),
            Command::Check { .. } => ("check", 0),
        };
        Self {
            command,
            mu: cli.mu,
            m: cli.m,
            g: cli.g,
            n_max: cli.n_max.unwrap_or(default_n),
            gh_nodes: cli.gh_nodes,
            out_path: cli.out.clone(),
            x_map: cli.x_map,
            format: cli.format,
        }
    }

    fn n_max_range(&self) -> (usize, usize) {
        match self.command {
            "greens" => (0, 4),
            "moller" => (1, 256),
            "coulomb" => (0, 100),
            _ => (0, 200),
        }
    }

    fn validate(&self) -> Result<(), Failure> {
        let bad = |flag: &str, value: String, range: &str| {
            Err(Failure::Usage(format!(
                "invalid value for {flag}: {value} (accepted range: {range})"
            )))
        };
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return bad("--mu", self.mu.to_string(), "finite mu >= 0");
        }
        if !(self.m > 0.0 && self.m.is_finite()) {
            return bad("--m", self.m.to_string(), "finite m > 0");
        }
        if !self.g.is_finite() {
            return bad("--g", self.g.to_string(), "finite g");
        }
        if !(QuadratureConfig::MIN_NODES..=300).contains(&self.gh_nodes) {
            return bad("--gh-nodes", self.gh_nodes.to_string(), "8..=300");
        }
        let (lo, hi) = self.n_max_range();
        if !(lo..=hi).contains(&self.n_max) {
            return bad(
                "--n-max",
                self.n_max.to_string(),
                &format!("{lo}..={hi} for {}", self.command),
            );
        }
        Ok(())
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            gh_nodes: self.gh_nodes,
            ..QuadratureConfig::default()
        }
    }

    /// Writes the full effective configuration into the table header.
    pub fn echo(&self, t: &mut Table) {
        let q = self.quadrature();
        t.meta("dpsfield", env!("CARGO_PKG_VERSION"));
        t.meta("command", self.command);
        t.meta("mu", format_float(self.mu));
        t.meta("m", format_float(self.m));
        t.meta("g", format_float(self.g));
        t.meta("n_max", self.n_max);
        t.meta("gh_nodes", q.gh_nodes);
        t.meta("radial_nodes", q.radial_nodes);
        t.meta("tol", format_float(q.tol));
        t.meta("refine", q.refine);
        let out = self
            .out_path
            .as_ref()
            .map_or("stdout".to_owned(), |p| p.display().to_string());
        t.meta("out", out);
        t.meta("x_map", format!("{:?}", self.x_map).to_lowercase());
        t.meta("format", format!("{:?}", self.format).to_lowercase());
    }
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Check(Vec<String>),
    Numerical(String),
    Io(String),
}

impl From<dpsfield::Error> for Failure {
    fn from(e: dpsfield::Error) -> Self {
        match e {
            dpsfield::Error::NonConvergence { .. } | dpsfield::Error::Rule(_) => Failure::Numerical(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Check(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Numerical(_) => 3,
            Failure::Io(_) => 2,
        }
    }

    fn report(&self) {
        match self {
            Failure::Check(lines) => {
                eprintln!("error: {} check(s) failed", lines.len());
                for l in lines {
                    eprintln!("  {l}");
                }
            }
            Failure::Usage(m) => eprintln!("error: {m}"),
            Failure::Numerical(m) => eprintln!("error: numerical nonconvergence: {m}"),
            Failure::Io(m) => eprintln!("error: {m}"),
        }
    }
}

fn emit(rc: &RunConfig, text: &str) -> Result<(), Failure> {
    match &rc.out_path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| Failure::Io(format!("cannot write to standard output: {e}")))
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw.trim().parse().ok().filter(|&n| n >= 1).ok_or_else(|| {
        Failure::Usage(format!(
            "invalid value for {THREADS_ENV}: '{raw}' (accepted range: integer >= 1)"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(format!("cannot configure {n} threads: {e}")))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    configure_threads()?;
    let rc = RunConfig::from_cli(cli);
    rc.validate()?;
    let table = match &cli.command {
        Command::Yukawa => commands::cmd_yukawa(&rc)?,
        Command::Coulomb { gnuplot } => {
            let t = commands::cmd_coulomb(&rc)?;
            if let Some(script) = gnuplot {
                let Some(data) = &rc.out_path else {
                    return Err(Failure::Usage(
                        "--gnuplot requires --out (the script plots that file)".into(),
                    ));
                };
                let text = commands::gnuplot_script(&data.display().to_string(), rc.format);
                fs::write(script, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", script.display())))?;
            }
            t
        }
        Command::Continuum => commands::cmd_continuum(&rc)?,
        Command::Greens => commands::cmd_greens(&rc)?,
        Command::Moller {
            p1,
            p2,
            p1_out,
            p2_out,
            spins,
        } => {
            let flags = MollerFlags {
                p1: *p1,
                p2: *p2,
                p1_out: *p1_out,
                p2_out: *p2_out,
                spins: *spins,
            };
            commands::cmd_moller(&rc, &flags)?
        }
        Command::Check { suite, corrupt_gamma } => {
            let suite = match suite {
                SuiteArg::Fast => Suite::Fast,
                SuiteArg::Full => Suite::Full,
            };
            let (t, failures) = commands::cmd_check(&rc, suite, *corrupt_gamma);
            emit(&rc, &t.render(rc.format))?;
            return if failures.is_empty() {
                Ok(())
            } else {
                Err(Failure::Check(failures))
            };
        }
    };
    emit(&rc, &table.render(rc.format))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            f.report();
            ExitCode::from(f.exit_code())
        }
    }
}
