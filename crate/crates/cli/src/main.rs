use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use relay_bounds::chain_sim::{
    estimate_threshold, rate_grid, simulate_pair, ChainSimConfig, DEFAULT_DELTA, DEFAULT_N1,
    DEFAULT_TRIALS,
};
use relay_bounds::erasure::{
    best_lower_bound, cf_optimized, cut_set, decode_forward, direct_transmission,
    improved_cut_set, new_rate_at, new_rate_optimized, partial_decode_forward,
};
use relay_bounds::general::PdcfGrid;
use relay_bounds::sweep::SweepTable;
use relay_bounds::{BoundReport, ErasureRelayParams, RelayError};

const EXIT_USAGE: u8 = 2;
const EXIT_IO: u8 = 3;
const EXIT_INFEASIBLE: u8 = 4;

/// Rate bounds for the erasure relay channel.
#[derive(Parser)]
#[command(name = "relay-bounds", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate every bound at one parameter point.
    Point(PointArgs),
    /// Evaluate every bound over a range of relay-link capacities and write CSV.
    Sweep(SweepArgs),
    /// Monte-Carlo run of the two-block chaining scheme.
    Simulate(SimulateArgs),
}

#[derive(Args)]
struct Channels {
    /// Erasure probability of the source-destination link.
    #[arg(long)]
    eps_sd: f64,
    /// Erasure probability of the source-relay link.
    #[arg(long)]
    eps_sr: f64,
}

#[derive(Args)]
struct PointArgs {
    #[command(flatten)]
    channels: Channels,
    /// Capacity of the relay-destination link, bits per use.
    #[arg(long)]
    crd: f64,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    channels: Channels,
    #[arg(long)]
    crd_min: f64,
    #[arg(long)]
    crd_max: f64,
    #[arg(long)]
    step: f64,
    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,
    /// Append a brute-force partial decode-compress-and-forward column.
    #[arg(long)]
    with_pdcf: bool,
    /// Points per parameter of the pDCF brute-force grid.
    #[arg(long, default_value_t = 21)]
    pdcf_points: usize,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    channels: Channels,
    #[arg(long)]
    crd: f64,
    /// EEC erasure probability of the relay description; defaults to the
    /// maximizer of the chaining rate.
    #[arg(long)]
    eps_hat: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_N1)]
    n1: usize,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    trials: usize,
    #[arg(long, default_value_t = DEFAULT_DELTA)]
    delta: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Overall rate to attempt; defaults to the closed-form rate minus delta.
    #[arg(long, conflicts_with = "rate_grid")]
    rate: Option<f64>,
    /// Threshold search over LO:HI:COUNT evenly spaced rates.
    #[arg(long, value_parser = parse_rate_grid)]
    rate_grid: Option<(f64, f64, usize)>,
}

fn parse_rate_grid(s: &str) -> Result<(f64, f64, usize), String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, count] = parts.as_slice() else {
        return Err("expected LO:HI:COUNT".into());
    };
    let lo: f64 = lo.parse().map_err(|e| format!("LO: {e}"))?;
    let hi: f64 = hi.parse().map_err(|e| format!("HI: {e}"))?;
    let count: usize = count.parse().map_err(|e| format!("COUNT: {e}"))?;
    if lo.is_nan() || hi.is_nan() || lo > hi || count == 0 {
        return Err("need LO <= HI and COUNT >= 1".into());
    }
    Ok((lo, hi, count))
}

enum Failure {
    Usage(String),
    Io(String),
    Infeasible(String),
}

impl Failure {
    fn usage(e: RelayError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    let result = match cli.command {
        Command::Point(args) => cmd_point(&args, &mut stdout),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Simulate(args) => cmd_simulate(&args, &mut stdout),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Io(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_IO)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_INFEASIBLE)
        }
    }
}

fn line(out: &mut impl Write, name: &str, value: impl std::fmt::Display) -> Result<(), Failure> {
    writeln!(out, "{name}={value}").map_err(|e| Failure::Io(e.to_string()))
}

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

fn report_lines(out: &mut impl Write, name: &str, r: &BoundReport) -> Result<(), Failure> {
    match r.value {
        Some(v) => line(out, name, fixed(v))?,
        None => line(out, name, "infeasible")?,
    }
    line(out, &format!("{name}_binding"), r.binding)
}

/// Why the chaining rate has no feasible `eps_hat`.
fn new_rate_regime(p: &ErasureRelayParams) -> &'static str {
    match new_rate_at(p, 0.0) {
        Err(e) => e.regime_label(),
        Ok(_) => "no feasible eps_hat",
    }
}

fn cmd_point(args: &PointArgs, out: &mut impl Write) -> Result<(), Failure> {
    let p = ErasureRelayParams::new(args.channels.eps_sd, args.channels.eps_sr, args.crd)
        .map_err(Failure::usage)?;
    line(out, "eps_sd", fixed(p.eps_sd))?;
    line(out, "eps_sr", fixed(p.eps_sr))?;
    line(out, "c_rd", fixed(p.c_rd))?;

    report_lines(out, "cut_set", &cut_set(&p))?;
    let improved = improved_cut_set(&p);
    report_lines(out, "improved_cut_set", &improved)?;
    line(out, "improved_cut_set_a", fixed(improved.witness.unwrap_or(0.0)))?;
    report_lines(out, "direct", &direct_transmission(&p))?;
    report_lines(out, "df", &decode_forward(&p))?;
    report_lines(out, "pdf", &partial_decode_forward(&p))?;

    let cf = cf_optimized(&p);
    report_lines(out, "cf", &cf)?;
    if let Some(w) = cf.witness {
        line(out, "cf_eps_hat", fixed(w))?;
    }
    let new = new_rate_optimized(&p);
    match new.value {
        Some(v) => {
            line(out, "new", fixed(v))?;
            line(out, "new_binding", new.binding)?;
            line(out, "new_eps_hat", fixed(new.witness.unwrap_or(0.0)))?;
        }
        None => {
            line(out, "new", "infeasible")?;
            line(out, "new_binding", new_rate_regime(&p))?;
        }
    }
    let best = best_lower_bound(&p);
    line(out, "best_lower", fixed(best.value.unwrap_or(0.0)))?;
    line(out, "best_lower_winner", best.binding)
}

fn cmd_sweep(args: &SweepArgs) -> Result<(), Failure> {
    let grid = args.with_pdcf.then(|| PdcfGrid::uniform(args.pdcf_points));
    if args.with_pdcf && args.pdcf_points < 2 {
        return Err(Failure::Usage("--pdcf-points must be at least 2".into()));
    }
    let table = SweepTable::compute(
        args.channels.eps_sd,
        args.channels.eps_sr,
        args.crd_min,
        args.crd_max,
        args.step,
        grid.as_ref(),
    )
    .map_err(Failure::usage)?;
    let file = File::create(&args.out)
        .map_err(|e| Failure::Io(format!("cannot write {}: {e}", args.out.display())))?;
    let mut w = BufWriter::new(file);
    table.write_csv(&mut w).map_err(|e| Failure::Io(e.to_string()))?;
    w.flush().map_err(|e| Failure::Io(e.to_string()))
}

fn cmd_simulate(args: &SimulateArgs, out: &mut impl Write) -> Result<(), Failure> {
    let p = ErasureRelayParams::new(args.channels.eps_sd, args.channels.eps_sr, args.crd)
        .map_err(Failure::usage)?;
    let eps_hat = match args.eps_hat {
        Some(e) => e,
        None => {
            let best = new_rate_optimized(&p);
            best.witness
                .ok_or_else(|| Failure::Infeasible(new_rate_regime(&p).to_string()))?
        }
    };
    let closed = match new_rate_at(&p, eps_hat) {
        Ok(r) => r.value.unwrap_or(0.0),
        Err(e @ (RelayError::Domain { .. } | RelayError::InvalidConfig(_))) => {
            return Err(Failure::usage(e))
        }
        Err(e) => return Err(Failure::Infeasible(e.to_string())),
    };
    let target = args.rate.unwrap_or((closed - args.delta).max(0.0));
    let cfg = ChainSimConfig {
        params: p,
        eps_hat,
        n1: args.n1,
        delta: args.delta,
        target_rate: target,
        trials: args.trials,
        seed: args.seed,
    };
    let outcome = simulate_pair(&cfg).map_err(|e| match e {
        RelayError::ZeroSecondBlock { .. } => Failure::Infeasible(e.to_string()),
        e => Failure::usage(e),
    })?;

    line(out, "eps_hat", fixed(eps_hat))?;
    line(out, "closed_form_rate", fixed(outcome.closed_form_rate))?;
    line(out, "alpha", fixed(outcome.schedule.alpha))?;
    line(out, "relay_decodes_block2", outcome.schedule.relay_decodes)?;
    line(out, "target_rate", fixed(target))?;
    line(out, "successes", outcome.successes)?;
    line(out, "trials", outcome.trials)?;
    line(out, "success_rate", format!("{:.2}", outcome.empirical_success_rate))?;
    let l = &outcome.ledger_sample;
    line(out, "ledger.n1", l.n1)?;
    line(out, "ledger.n2", l.n2)?;
    line(out, "ledger.message_bits_b1", l.message_bits_b1)?;
    line(out, "ledger.message_bits_b2", l.message_bits_b2)?;
    line(out, "ledger.wz_bits_needed", l.wz_bits_needed)?;
    line(out, "ledger.relay_bits_block1", l.relay_bits_block1)?;
    line(out, "ledger.stored_bits", l.stored_bits)?;
    line(out, "ledger.stored_bits_sent", l.stored_bits_sent)?;
    line(out, "ledger.info_bits_block2", l.info_bits_block2)?;
    line(out, "ledger.relay_bits_block2", l.relay_bits_block2)?;
    line(out, "ledger.equations_known_b1", l.equations_known_b1)?;
    line(out, "ledger.equations_known_b2", l.equations_known_b2)?;
    line(out, "ledger.description_delivered", l.description_delivered)?;
    line(out, "ledger.success", l.success)?;

    if let Some((lo, hi, count)) = args.rate_grid {
        let est = estimate_threshold(&cfg, &rate_grid(lo, hi, count)).map_err(Failure::usage)?;
        for (rate, success) in &est.curve {
            writeln!(out, "curve rate={} success_rate={:.2}", fixed(*rate), success)
                .map_err(|e| Failure::Io(e.to_string()))?;
        }
        match est.threshold {
            Some(t) => line(out, "threshold", fixed(t))?,
            None => line(out, "threshold", "none")?,
        }
    }
    Ok(())
}
