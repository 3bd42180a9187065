mod commands;
mod record;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{ArgGroup, Args, Parser, Subcommand};
use magicdepth::estimate::EstimatorConfig;
use magicdepth::pathint::{PathOptions, DEFAULT_BUDGET};

use commands::{CliResult, Inputs, Reply};
use record::RunRecord;

/// Simulation and compilation of circuits with few layers of diagonal magic gates.
#[derive(Parser, Debug)]
#[command(name = "magicdepth", version)]
struct Cli {
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Pretty-print the run record.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Run a compilation pass.
    Compile {
        /// parallelize | d-one-layer | ccz | ckz:k,l | clz:m,m' | iqp3-td1 | htest | htest-compile:MODE
        #[arg(long)]
        pass: String,
        #[arg(short, long)]
        input: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long)]
        report: Option<PathBuf>,
        /// Base gate of the layer built by d-one-layer: T, S, T^k or T^k/2^m.
        #[arg(long, default_value = "T", allow_hyphen_values = true)]
        d_gate: String,
    },
    /// Exact Pauli expectation of a magic-depth-one circuit.
    ExactPauli {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        pauli: String,
    },
    /// Monte-Carlo estimates on a magic-depth-one circuit.
    #[command(group(ArgGroup::new("target").required(true).args(["pauli", "prob", "amp", "marginal"])))]
    Estimate {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        pauli: Option<String>,
        /// Full output string whose probability is estimated.
        #[arg(long)]
        prob: Option<String>,
        #[arg(long)]
        amp: Option<String>,
        /// Qubits of a marginal; without --outcome every cell is estimated.
        #[arg(long, value_delimiter = ',')]
        marginal: Option<Vec<usize>>,
        #[arg(long, requires = "marginal")]
        outcome: Option<String>,
        #[command(flatten)]
        est: EstArgs,
    },
    /// Draw samples from a marginal of a magic-depth-one circuit.
    Marginal {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long, value_delimiter = ',', required = true)]
        qubits: Vec<usize>,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[command(flatten)]
        est: EstArgs,
    },
    /// Amplitude `<x|U|0>` by the recursive path integral.
    PathAmp {
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        x: String,
        /// Branch budget, as an integer or `2^k`.
        #[arg(long, env = "MAGICDEPTH_BUDGET", value_parser = parse_budget)]
        budget: Option<u64>,
        #[arg(long)]
        no_prune: bool,
    },
    /// Reference values from dense simulation or brute-force enumeration.
    Oracle {
        #[arg(long, value_parser = ["amp", "pauli", "dist", "iqp3"])]
        mode: String,
        #[arg(short, long)]
        input: PathBuf,
        #[arg(long)]
        x: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        pauli: Option<String>,
        #[arg(long, value_delimiter = ',')]
        qubits: Option<Vec<usize>>,
    },
    /// Timing runs.
    Bench {
        #[command(subcommand)]
        which: BenchCmd,
    },
    /// Run acceptance criteria by number; all of them when none are given.
    Verify { ids: Vec<u8> },
}

#[derive(Subcommand, Debug)]
enum BenchCmd {
    /// Per-call time against width.
    Scaling {
        #[arg(long, value_parser = ["inner-product", "exact-pauli"])]
        op: String,
        /// `a..b` doubles from a to b; or a comma-separated list.
        #[arg(long, default_value = "64..512")]
        n: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args, Debug)]
struct EstArgs {
    #[arg(long, default_value_t = 0.05)]
    eps: f64,
    #[arg(long, default_value_t = 0.05)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Total sample count replacing the one derived from --eps.
    #[arg(long)]
    samples_override: Option<u64>,
}

impl EstArgs {
    fn config(&self) -> EstimatorConfig {
        EstimatorConfig {
            samples_override: self.samples_override,
            ..EstimatorConfig::new(self.eps, self.delta, self.seed)
        }
    }
}

fn parse_budget(s: &str) -> Result<u64, String> {
    let s = s.trim();
    match s.split_once('^') {
        Some((b, e)) => {
            let b: u64 = b.parse().map_err(|e| format!("{e}"))?;
            let e: u32 = e.parse().map_err(|e| format!("{e}"))?;
            b.checked_pow(e).ok_or_else(|| format!("{s} overflows"))
        }
        None => s.replace('_', "").parse().map_err(|e| format!("{e}")),
    }
}

fn name(cmd: &Cmd) -> &'static str {
    match cmd {
        Cmd::Compile { .. } => "compile",
        Cmd::ExactPauli { .. } => "exact-pauli",
        Cmd::Estimate { .. } => "estimate",
        Cmd::Marginal { .. } => "marginal",
        Cmd::PathAmp { .. } => "path-amp",
        Cmd::Oracle { .. } => "oracle",
        Cmd::Bench { .. } => "bench",
        Cmd::Verify { .. } => "verify",
    }
}

fn dispatch(cmd: Cmd, inputs: &mut Inputs) -> CliResult<Reply> {
    match cmd {
        Cmd::Compile {
            pass,
            input,
            output,
            report,
            d_gate,
        } => commands::compile(
            commands::CompileOpts {
                pass: &pass,
                input,
                output,
                report,
                d_gate: &d_gate,
            },
            inputs,
        ),
        Cmd::ExactPauli { input, pauli } => commands::exact_pauli(&input, &pauli, inputs),
        Cmd::Estimate {
            input,
            pauli,
            prob,
            amp,
            marginal,
            outcome,
            est,
        } => commands::estimate(
            &input,
            commands::EstimateOpts {
                pauli,
                prob,
                amp,
                marginal,
                outcome,
                cfg: est.config(),
            },
            inputs,
        ),
        Cmd::Marginal {
            input,
            qubits,
            samples,
            est,
        } => commands::marginal(&input, &qubits, samples, &est.config(), inputs),
        Cmd::PathAmp {
            input,
            x,
            budget,
            no_prune,
        } => commands::path_amp(
            &input,
            &x,
            PathOptions {
                prune: !no_prune,
                budget: budget.unwrap_or(DEFAULT_BUDGET),
            },
            inputs,
        ),
        Cmd::Oracle {
            mode,
            input,
            x,
            pauli,
            qubits,
        } => commands::oracle(&input, commands::OracleOpts { mode, x, pauli, qubits }, inputs),
        Cmd::Bench {
            which: BenchCmd::Scaling { op, n, seed },
        } => commands::bench_scaling(&op, &commands::sizes(&n)?, seed),
        Cmd::Verify { ids } => commands::verify(&ids),
    }
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(t) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let command = name(&cli.cmd);
    let start = Instant::now();
    let mut inputs = Inputs::default();
    let reply = match dispatch(cli.cmd, &mut inputs) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.code() as u8);
        }
    };
    let args: Vec<String> = argv.into_iter().skip(1).collect();
    let mut rec = RunRecord {
        command: command.into(),
        inputs_sha256: record::digest(&args, &inputs.0),
        argv: args,
        seed: reply.seed,
        outputs: reply.outputs,
        wall_seconds: start.elapsed().as_secs_f64(),
        counters: reply.counters,
        version: env!("CARGO_PKG_VERSION"),
    };
    record::round_floats(&mut rec.outputs);
    let text = if cli.pretty {
        serde_json::to_string_pretty(&rec)
    } else {
        serde_json::to_string(&rec)
    };
    println!("{}", text.expect("serializable"));
    ExitCode::from(reply.exit as u8)
}
