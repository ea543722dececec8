use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{ArgGroup, Parser, Subcommand};
use pdmi::capacity::{temporal_capacity, MIN_BUDGET};
use pdmi::entropy::{hermitian_entropy, mutual_information};
use pdmi::pdm::multi_time_pdm;
use pdmi::reproduce::{check_extrema, figure_config, run_example, sweep, uniform_grid, DEFAULT_GRID_POINTS, EXAMPLE_NAMES};
use pdmi_cli::descriptor::{build_chain, matrix_to_json, ChannelDescriptor, StateDescriptor, SweepSpec};
use pdmi_cli::suites::{self, Suite};
use serde::de::DeserializeOwned;

#[derive(Parser)]
#[command(name = "pdmi", version, about = "Pseudo-density matrices and temporal mutual information")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce a worked example and check it against its reference value.
    Example { name: String },
    /// Write a (p, η) sweep of the depolarizing chain as CSV.
    #[command(group(ArgGroup::new("source").required(true).args(["config", "spec"])))]
    Sweep {
        /// One of the built-in configurations a, b, c, d.
        #[arg(long)]
        config: Option<char>,
        /// JSON sweep description.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
        /// Grid points per axis for built-in configurations.
        #[arg(long, default_value_t = DEFAULT_GRID_POINTS)]
        grid: usize,
    },
    /// Run a seeded verification suite.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Build the PDM of a state evolved through a chain of channels.
    Pdm {
        #[arg(long)]
        state: PathBuf,
        /// JSON array of channel descriptors.
        #[arg(long)]
        channels: PathBuf,
        #[arg(long, default_value_t = 1)]
        cut: usize,
        /// Print the report, including the full PDM, as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Maximize the two-time information of a qubit channel over input states.
    Capacity {
        #[arg(long)]
        channel: PathBuf,
        #[arg(long, default_value_t = 200)]
        budget: usize,
    },
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

/// Ok(false) signals a failed check (exit 1); Err is a usage or input error.
fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Example { name } => {
            if !EXAMPLE_NAMES.contains(&name.as_str()) {
                bail!("unknown example '{name}'; valid names: {}", EXAMPLE_NAMES.join(", "));
            }
            let rep = run_example(&name, DEFAULT_GRID_POINTS)?;
            println!("example: {}", rep.name);
            println!("spectrum: {}", fmt_list(&rep.spectrum));
            println!("S(first): {:.6}", rep.marginal_entropies.0);
            println!("S(second): {:.6}", rep.marginal_entropies.1);
            println!("I: {:.6}", rep.mutual_information);
            if let Some((v, tol)) = rep.expected {
                println!("expected: {v} ± {tol:e}");
            }
            for (label, ok) in &rep.checks {
                println!("check {label}: {}", if *ok { "ok" } else { "FAIL" });
            }
            let passed = rep.passed();
            println!("{}", if passed { "PASS" } else { "FAIL" });
            Ok(passed)
        }
        Command::Sweep { config, spec, out, grid } => {
            let (cfg, p_grid, eta_grid) = match (config, spec) {
                (Some(label), _) => {
                    let g = uniform_grid(grid);
                    (figure_config(label)?, g.clone(), g)
                }
                (None, Some(path)) => {
                    let spec: SweepSpec = read_json(&path)?;
                    let (p, eta) = spec.grids();
                    (spec.config()?, p, eta)
                }
                (None, None) => unreachable!("clap requires one source"),
            };
            let points = sweep(&cfg, &p_grid, &eta_grid)?;
            let mut csv = String::from("p,eta,mi\n");
            for pt in &points {
                csv.push_str(&format!("{},{},{}\n", pt.p, pt.eta, pt.mi));
            }
            fs::write(&out, csv).with_context(|| format!("writing {}", out.display()))?;
            let chk = check_extrema(&points);
            println!("wrote {} rows to {}", points.len(), out.display());
            println!("max I = {:.6} at p = {}, eta = {}", chk.max.mi, chk.max.p, chk.max.eta);
            println!("max |I| at eta = 0: {:.6}", chk.eta0_max_abs);
            Ok(true)
        }
        Command::Verify { suite, trials, seed } => {
            let rep = suites::run(suite, trials, seed)?;
            println!("suite: {:?}", rep.suite);
            println!("seed: {}", rep.seed);
            println!("passed: {}/{}", rep.trials - rep.failures, rep.trials);
            for note in &rep.notes {
                println!("{note}");
            }
            Ok(rep.passed())
        }
        Command::Pdm {
            state,
            channels,
            cut,
            json,
        } => {
            let rho = read_json::<StateDescriptor>(&state)?.build()?;
            let descs: Vec<ChannelDescriptor> = read_json(&channels)?;
            let chain = build_chain(&descs)?;
            let r = multi_time_pdm(&rho, &chain)?;
            if cut == 0 || cut >= r.slots() {
                bail!("cut {cut} must lie in 1..{} for {} time slots", r.slots(), r.slots());
            }
            let first: Vec<usize> = (0..cut).collect();
            let second: Vec<usize> = (cut..r.slots()).collect();
            let s1 = hermitian_entropy(r.marginal(&first)?.operator());
            let s2 = hermitian_entropy(r.marginal(&second)?.operator());
            let mi = mutual_information(&r, cut)?;
            let spectrum = r.eigenvalues();
            if json {
                let out = serde_json::json!({
                    "dims": r.dims(),
                    "matrix": matrix_to_json(r.matrix()),
                    "spectrum": spectrum,
                    "dual_state": r.is_dual_state(),
                    "marginal_entropies": [s1, s2],
                    "cut": cut,
                    "mutual_information": mi,
                });
                println!("{}", serde_json::to_string_pretty(&out)?);
            } else {
                println!("dims: {:?}", r.dims());
                println!("spectrum: {}", fmt_list(&spectrum));
                println!("dual state: {}", r.is_dual_state());
                println!("S(first): {s1:.6}");
                println!("S(second): {s2:.6}");
                println!("I: {mi:.6}");
            }
            Ok(true)
        }
        Command::Capacity { channel, budget } => {
            if budget < MIN_BUDGET {
                bail!("budget must be at least {MIN_BUDGET}");
            }
            let ch = read_json::<ChannelDescriptor>(&channel)?.build()?;
            let res = temporal_capacity(&ch, budget)?;
            println!("capacity: {:.8}", res.value);
            println!("argmax bloch: {}", fmt_list(&res.argmax_bloch));
            println!("argmax state: {}", serde_json::to_string(&matrix_to_json(res.argmax_state.matrix()))?);
            println!("evaluations: {}", res.evaluations);
            println!("trace length: {}", res.trace.len());
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
