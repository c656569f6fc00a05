//! Command-line driver. Exit codes: 0 pass, 1 statistical failure, 2 configuration error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use eprot::harness::{
    run_reduction, run_trials, BackendChoice, HybridName, Protocol, RunConfig, Seed, Transcript,
};
use eprot::oneshot::AdversaryStrategy;
use eprot::relations::{parse_ratio, ProtocolParams};
use eprot::Error;
use eprot_quantum::checks;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::Serialize;

#[derive(Parser)]
#[command(name = "eprot", version, about = "Oblivious transfer from shared EPR pairs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Seeded runs of the one-shot protocol.
    RunOneshot {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "honest")]
        adversary: String,
        #[arg(long, default_value = "sequential")]
        hybrid: String,
    },
    /// Seeded runs of the two-round chosen-input protocol.
    RunTworound {
        #[command(flatten)]
        common: Common,
    },
    /// Seeded runs of the unchecked single-collection skeleton.
    RunSkeleton {
        #[command(flatten)]
        common: Common,
    },
    /// One-shot runs against a scripted sender.
    Attack {
        /// honest, no-delete, wrong-commit:F or inconsistent-offsets.
        tag: String,
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "sequential")]
        hybrid: String,
    },
    /// The seed-guessing experiment; fails on any output-1 run outside the relation.
    Reduction {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "no-delete")]
        adversary: String,
        /// Hand the guessed seed to the strategy.
        #[arg(long)]
        force_seed: bool,
    },
    /// Exact parameter arithmetic; defaults to α = 1/120, c = 480, t = 180³·λ_CI for λ_CI = 1..=16.
    VerifyParams {
        #[arg(long)]
        lambda: Option<usize>,
        #[arg(long)]
        alpha: Option<String>,
        #[arg(long)]
        c: Option<usize>,
        #[arg(long)]
        t: Option<usize>,
    },
    /// Exact density-matrix check of the XOR extractor on random low-weight states.
    XorExtractor {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long)]
        seed: Option<String>,
    },
    /// Free-seed run; prints the seed so a failure can be replayed.
    Soak {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "oneshot")]
        protocol: String,
        #[arg(long, default_value = "honest")]
        adversary: String,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    lambda: Option<usize>,
    /// Rational such as 1/8.
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    c: Option<usize>,
    #[arg(long)]
    t: Option<usize>,
    /// Modulus size of the commitment group: 64, 128, 256 or 512.
    #[arg(long, default_value_t = 128)]
    group_bits: usize,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// 32-byte master seed in hex.
    #[arg(long)]
    seed: Option<String>,
    /// statevector, stabilizer or auto.
    #[arg(long, default_value = "auto")]
    backend: String,
    #[arg(long)]
    json_out: Option<PathBuf>,
}

impl Common {
    fn params(&self, base: ProtocolParams) -> eprot::Result<ProtocolParams> {
        let mut p = base.with_group_bits(self.group_bits);
        if let Some(l) = self.lambda {
            p.lambda = l;
            p.lambda_ci = l;
        }
        if let Some(a) = &self.alpha {
            p.alpha = parse_ratio(a)?;
        }
        if let Some(c) = self.c {
            p.c = c;
        }
        if let Some(t) = self.t {
            p.t = t;
        }
        p.validate()?;
        Ok(p)
    }

    fn seed(&self) -> eprot::Result<Seed> {
        self.seed.as_deref().map_or(Ok(Seed([0; 32])), str::parse)
    }

    fn config(&self, protocol: Protocol, seed: Seed) -> eprot::Result<RunConfig> {
        let base = match protocol {
            Protocol::Tworound => ProtocolParams::desk_tworound(),
            Protocol::Oneshot | Protocol::Skeleton => ProtocolParams::desk_oneshot(),
        };
        let mut cfg = RunConfig::new(protocol, self.params(base)?, self.trials, seed);
        cfg.backend = self.backend.parse::<BackendChoice>()?;
        Ok(cfg)
    }
}

#[derive(Serialize)]
struct RunDump<'a, R: Serialize> {
    seed: Seed,
    report: &'a R,
    transcripts: &'a [Transcript],
}

fn emit<R: Serialize>(report: &R, seed: Seed, transcripts: &[Transcript], out: Option<&PathBuf>) -> eprot::Result<()> {
    println!("{}", serde_json::to_string_pretty(report).map_err(|e| Error::Parse(e.to_string()))?);
    if let Some(path) = out {
        let dump = RunDump { seed, report, transcripts };
        let bytes = serde_json::to_vec_pretty(&dump).map_err(|e| Error::Parse(e.to_string()))?;
        std::fs::write(path, bytes)?;
    }
    Ok(())
}

fn run_protocol(cfg: RunConfig, out: Option<&PathBuf>) -> eprot::Result<bool> {
    let result = run_trials(&cfg, out.is_some())?;
    emit(&result.report, cfg.seed, &result.transcripts, out)?;
    Ok(result.report.pass)
}

fn oneshot(common: &Common, adversary: &str, hybrid: &str, seed: Seed) -> eprot::Result<bool> {
    let mut cfg = common.config(Protocol::Oneshot, seed)?;
    cfg.adversary = adversary.parse()?;
    cfg.hybrid = hybrid.parse::<HybridName>()?;
    run_protocol(cfg, common.json_out.as_ref())
}

fn verify_params(lambda: Option<usize>, alpha: Option<String>, c: Option<usize>, t: Option<usize>) -> eprot::Result<bool> {
    let alpha = parse_ratio(alpha.as_deref().unwrap_or("1/120"))?;
    let c = c.unwrap_or(480);
    let lambdas: Vec<usize> = lambda.map_or_else(|| (1..=16).collect(), |l| vec![l]);
    let mut pass = true;
    for l in lambdas {
        let t = t.unwrap_or(180usize.pow(3) * l);
        let p = ProtocolParams::new(l, l, alpha.clone(), c, t)?;
        let report = p.report();
        pass &= report.rho_below_alpha && report.t_bound;
        println!("lambda_ci={l} {}", serde_json::to_string(&report).map_err(|e| Error::Parse(e.to_string()))?);
    }
    Ok(pass)
}

fn execute(command: Command) -> eprot::Result<bool> {
    match command {
        Command::RunOneshot { common, adversary, hybrid } => oneshot(&common, &adversary, &hybrid, common.seed()?),
        Command::Attack { tag, common, hybrid } => oneshot(&common, &tag, &hybrid, common.seed()?),
        Command::RunTworound { common } => run_protocol(common.config(Protocol::Tworound, common.seed()?)?, common.json_out.as_ref()),
        Command::RunSkeleton { common } => run_protocol(common.config(Protocol::Skeleton, common.seed()?)?, common.json_out.as_ref()),
        Command::Reduction { common, adversary, force_seed } => {
            let cfg = common.config(Protocol::Oneshot, common.seed()?)?;
            let adversary: AdversaryStrategy = adversary.parse()?;
            let report = run_reduction(&cfg.params, adversary, force_seed, cfg.backend_kind(), cfg.trials, &cfg.seed)?;
            emit(&report, cfg.seed, &[], common.json_out.as_ref())?;
            Ok(report.pass)
        }
        Command::VerifyParams { lambda, alpha, c, t } => verify_params(lambda, alpha, c, t),
        Command::XorExtractor { trials, seed } => {
            let seed: Seed = seed.as_deref().map_or(Ok(Seed([0; 32])), str::parse)?;
            let report = checks::xor_extractor(trials, &mut ChaCha20Rng::from_seed(seed.0)).map_err(Error::from)?;
            println!(
                "draws={} violations={} max_trace_distance={:e}",
                report.draws, report.violations, report.worst_slack
            );
            Ok(report.pass())
        }
        Command::Soak { common, protocol, adversary } => {
            let seed = Seed::from_entropy();
            eprintln!("soak seed {seed}");
            match protocol.as_str() {
                "oneshot" => oneshot(&common, &adversary, "sequential", seed),
                "tworound" => run_protocol(common.config(Protocol::Tworound, seed)?, common.json_out.as_ref()),
                "skeleton" => run_protocol(common.config(Protocol::Skeleton, seed)?, common.json_out.as_ref()),
                other => Err(Error::Config(format!("unknown protocol {other:?}"))),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("statistical check failed");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
