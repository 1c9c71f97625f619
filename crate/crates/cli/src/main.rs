//! `sporlock` command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 input error, 3 resource budget
//! exhausted. Diagnostics go to stderr; results go to stdout.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use sporlock_core::attack::{recover_key_sequences, AttackConfig, Oracle};
use sporlock_core::encrypt::{window_timing, EncryptConfig, KeySchedule};
use sporlock_core::eval::{
    brute_force_effort, cycle_delay_overhead, cycle_delay_sweep, default_horizon, run_case_with,
    schedule_stimulus, scientific, workload_for_run, write_hd_csv, CaseId,
};
use sporlock_core::sim::{simulate, write_columnar, write_vcd, Stimulus};
use sporlock_core::{emit_bench, encrypt, parse_bench, Netlist};

const DEFAULT_SEED: u64 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "sporlock",
    version,
    about = "Sequential logic locking with authentication back-jumps"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Print input/output/DFF/gate counts of a .bench netlist.
    Stats { bench: PathBuf },
    /// Lock a netlist and write the locked netlist plus its key schedule.
    Encrypt(EncryptArgs),
    /// Simulate a netlist from reset with a random workload.
    Simulate(SimulateArgs),
    /// Mean output Hamming distance of a locked netlist per usage case.
    EvalHd(EvalHdArgs),
    /// Oracle-guided SAT attack on the key sequences.
    Attack(AttackArgs),
    /// Closed-form security and latency models.
    Model {
        #[command(subcommand)]
        model: ModelCmd,
    },
}

#[derive(Args, Debug)]
struct EncryptArgs {
    bench: PathBuf,
    /// JSON design parameters; defaults are used when omitted.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Locked netlist output.
    #[arg(long)]
    out: PathBuf,
    /// Key schedule output (JSON).
    #[arg(long)]
    keys: PathBuf,
    /// Overrides the config's master seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    bench: PathBuf,
    /// Key schedule; drives the key sequences of `--case`.
    #[arg(long, requires = "case")]
    keys: Option<PathBuf>,
    /// Usage case 1 (trusted), 2 (no key) or 3 (first key sequence only).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=3))]
    case: Option<u8>,
    #[arg(long)]
    cycles: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Also write a value change dump.
    #[arg(long)]
    vcd: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct EvalHdArgs {
    orig: PathBuf,
    enc: PathBuf,
    #[arg(long)]
    keys: PathBuf,
    /// Comma-separated usage cases.
    #[arg(long, value_delimiter = ',', default_value = "1,2,3",
          value_parser = clap::value_parser!(u8).range(1..=3))]
    cases: Vec<u8>,
    #[arg(long, default_value_t = 1000)]
    vectors: usize,
    /// Simulated cycles per run; defaults to three full PRNG periods.
    #[arg(long)]
    cycles: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Also write the CSV to this file.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct AttackArgs {
    enc: PathBuf,
    /// Unlocked netlist acting as the working chip.
    #[arg(long)]
    oracle: PathBuf,
    /// Key schedule or `{"key_len": c, "starts": [...]}` file, or `derive`
    /// to replay the controller from `--config`.
    #[arg(long)]
    keys_timing: String,
    /// Design parameters for `--keys-timing derive`.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 7)]
    max_seq: usize,
    /// Solver conflicts allowed per window.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum ModelCmd {
    /// Brute-force effort 2^(n + i*c - 1).
    BruteForce {
        #[arg(long)]
        i: u64,
        #[arg(long)]
        c: u64,
        #[arg(long)]
        n: u64,
    },
    /// Average cycle-delay overhead t_a / 2^(n-1).
    CycleDelay {
        #[arg(long)]
        ta: u64,
        #[arg(long)]
        n: u32,
        /// Sweep n = 5..=15 for t_a in 8, 16, 64, 128 (CSV).
        #[arg(long)]
        sweep: bool,
    },
}

#[derive(Debug, serde::Deserialize)]
#[serde(deny_unknown_fields)]
struct TimingFile {
    key_len: usize,
    starts: Vec<usize>,
}

enum Outcome {
    Done,
    BudgetExhausted,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let usage = e.use_stderr();
            let _ = e.print();
            return ExitCode::from(if usage { 1 } else { 0 });
        }
    };
    match run(cli.cmd) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::BudgetExhausted) => ExitCode::from(3),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_bench(path: &Path) -> Result<Netlist> {
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("circuit");
    parse_bench(&read(path)?, name).with_context(|| format!("parsing {}", path.display()))
}

fn load_schedule(path: &Path) -> Result<KeySchedule> {
    KeySchedule::from_json(&read(path)?).with_context(|| format!("loading {}", path.display()))
}

fn load_config(path: &Path) -> Result<EncryptConfig> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn run(cmd: Cmd) -> Result<Outcome> {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cmd {
        Cmd::Stats { bench } => {
            let nl = load_bench(&bench)?;
            writeln!(out, "{} {}", nl.name(), nl.stats())?;
        }
        Cmd::Encrypt(a) => {
            let nl = load_bench(&a.bench)?;
            let mut cfg = match &a.config {
                Some(p) => load_config(p)?,
                None => EncryptConfig::default(),
            };
            if let Some(s) = a.seed {
                cfg.master_seed = s;
            }
            let enc = encrypt(&nl, &cfg)?;
            write(&a.out, &emit_bench(&enc.netlist))?;
            write(&a.keys, &enc.schedule.to_json())?;
            writeln!(
                out,
                "{} {} -> {} ({} XOR sites)",
                nl.name(),
                nl.stats(),
                enc.netlist.stats(),
                enc.report.sites.len()
            )?;
        }
        Cmd::Simulate(a) => {
            let nl = load_bench(&a.bench)?;
            let width = nl.inputs().len();
            let workload = workload_for_run(a.seed, 0, width, a.cycles);
            let stim = match (&a.keys, a.case) {
                (Some(k), Some(case)) => {
                    let sched = load_schedule(k)?;
                    if sched.i != width {
                        bail!("key schedule has {} inputs, netlist has {width}", sched.i);
                    }
                    let case = CaseId::from_number(case).expect("range checked by clap");
                    schedule_stimulus(&sched, case, &workload, a.cycles)?
                }
                _ => Stimulus::workload_only(workload),
            };
            let trace = simulate(&nl, &stim, a.cycles)?;
            write_columnar(&mut out, &trace)?;
            if let Some(p) = &a.vcd {
                let mut buf = Vec::new();
                write_vcd(&mut buf, &nl, &trace)?;
                fs::write(p, buf).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Cmd::EvalHd(a) => {
            let orig = load_bench(&a.orig)?;
            let enc = load_bench(&a.enc)?;
            let sched = load_schedule(&a.keys)?;
            let cycles = a
                .cycles
                .unwrap_or_else(|| default_horizon(sched.n, sched.c));
            let mut cases: Vec<u8> = a.cases.clone();
            cases.sort_unstable();
            cases.dedup();
            let mut reports = Vec::new();
            for c in cases {
                let case = CaseId::from_number(c).expect("range checked by clap");
                reports.push(run_case_with(
                    &orig, &enc, &sched, case, a.vectors, cycles, a.seed,
                )?);
            }
            let mut csv = Vec::new();
            write_hd_csv(&mut csv, &reports)?;
            out.write_all(&csv)?;
            if let Some(p) = &a.csv {
                fs::write(p, &csv).with_context(|| format!("writing {}", p.display()))?;
            }
        }
        Cmd::Attack(a) => {
            let enc = load_bench(&a.enc)?;
            let oracle = Oracle::new(load_bench(&a.oracle)?);
            let (c, starts, schedule) = attack_timing(&a)?;
            let cfg = AttackConfig {
                max_seq: a.max_seq,
                budget: a.budget,
                seed: a.seed,
                ..AttackConfig::default()
            };
            let report = recover_key_sequences(&enc, &oracle, &starts, c, &cfg)?;
            if let Some(s) = &schedule {
                let windows = s.windows(starts.last().map_or(0, |&t| t + 1));
                for (q, k) in report.keys.iter().enumerate() {
                    let hit = *k == s.key_table[windows[q].chain];
                    eprintln!(
                        "window {q}: recovered key {} the schedule",
                        if hit { "matches" } else { "differs from" }
                    );
                }
            }
            writeln!(out, "{}", report.to_json())?;
            if let Some(why) = &report.stopped {
                eprintln!("{why}");
            }
            if report.budget_exhausted {
                return Ok(Outcome::BudgetExhausted);
            }
        }
        Cmd::Model { model } => match model {
            ModelCmd::BruteForce { i, c, n } => {
                if i * c == 0 {
                    bail!("i and c must both be at least 1");
                }
                let e = brute_force_effort(i, c, n);
                writeln!(out, "2^{} ~ {}", n + i * c - 1, scientific(&e, 3))?;
                writeln!(out, "{e}")?;
            }
            ModelCmd::CycleDelay { ta, n, sweep } => {
                if sweep {
                    writeln!(out, "t_a,n,exact,value")?;
                    for p in cycle_delay_sweep(&[8, 16, 64, 128], 5..=15) {
                        writeln!(out, "{},{},{},{:.9}", p.t_a, p.n, p.exact, p.value)?;
                    }
                } else {
                    if n == 0 {
                        bail!("PRNG width must be at least 1");
                    }
                    let r = cycle_delay_overhead(ta, n);
                    let v = ta as f64 / 2f64.powi(n as i32 - 1);
                    writeln!(out, "{r} = {v:.9} ({:.4}%)", v * 100.0)?;
                }
            }
        },
    }
    Ok(Outcome::Done)
}

/// Key length, window starts and, when the timing came from a key schedule,
/// the schedule itself.
fn attack_timing(a: &AttackArgs) -> Result<(usize, Vec<usize>, Option<KeySchedule>)> {
    let windows_needed = a.max_seq.max(1) + 1;
    let replay = |cfg: &EncryptConfig| -> Result<Vec<usize>> {
        let span = (windows_needed + 1) * (cfg.key_len + (1usize << cfg.lfsr_width));
        let ws = window_timing(cfg.lfsr()?, cfg.key_len, cfg.sbj_bits, span);
        Ok(ws.iter().take(windows_needed).map(|w| w.start).collect())
    };
    if a.keys_timing == "derive" {
        let Some(p) = &a.config else {
            bail!("--keys-timing derive needs --config with the design parameters");
        };
        let cfg = load_config(p)?;
        cfg.validate()?;
        return Ok((cfg.key_len, replay(&cfg)?, None));
    }
    let path = Path::new(&a.keys_timing);
    let text = read(path)?;
    if let Ok(t) = serde_json::from_str::<TimingFile>(&text) {
        return Ok((t.key_len, t.starts, None));
    }
    let sched = load_schedule(path)?;
    let starts = replay(&sched.config)?;
    Ok((sched.c, starts, Some(sched)))
}
