use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use edss::distill::{DistillProtocol, TwirlPolicy};
use edss::experiment::{
    emit_csv, run_experiment, ExperimentKind, ExperimentSpec, LambdaGrid, PairFilter,
};
use edss::lossnet::{LossParameters, NetworkTopology};

/// Entanglement distribution experiments over lossy, noisy fiber networks.
#[derive(Parser, Debug)]
#[command(name = "edss", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Pair rate of every protocol for each node pair.
    PairRates(Common),
    /// Pair-averaged rate as the gate success probability varies.
    #[command(name = "rate-vs-P")]
    RateVsP(Common),
    /// Negativity and fidelity against fiber noise.
    NegativitySweep(Common),
    /// Fidelity and Bell-diagonal weights against fiber noise.
    FidelitySweep(Common),
    /// Pair-averaged ebit rate after distillation to the threshold.
    EbitRates(Common),
    /// Every distillation protocol on every protocol's output state.
    DistillCompare(Common),
}

#[derive(Args, Debug)]
struct Common {
    /// Edge list, one `<nodeA> <nodeB> <length_km>` per line.
    #[arg(long)]
    topology: Option<PathBuf>,
    /// `key = value` overrides of the loss parameters.
    #[arg(long)]
    params: Option<PathBuf>,
    /// Gate success probabilities, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "0.417")]
    gate_p: Vec<f64>,
    /// Noise Λ in 1/km: `start:stop:steps` or a single value.
    #[arg(long, default_value = "0")]
    lambda: LambdaGrid,
    /// Span length for the topology-free sweeps.
    #[arg(long, default_value_t = 1.0)]
    length_km: f64,
    /// `all` or a list like `n1-n4,n2-n6`.
    #[arg(long, default_value = "all")]
    pairs: PairFilter,
    /// Target fidelity with |φ⁺⟩.
    #[arg(long, default_value_t = 0.998)]
    threshold: f64,
    #[arg(long, default_value_t = 20)]
    max_rounds: usize,
    /// Distillation protocol used by `ebit-rates`.
    #[arg(long, default_value = "DEJMPS")]
    distill: DistillProtocol,
    /// Twirl the original BBPSSW on entry only instead of every round.
    #[arg(long)]
    bbpssw_entry_twirl: bool,
    /// Write the table as CSV here.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Command {
    fn split(self) -> (ExperimentKind, Common) {
        match self {
            Command::PairRates(c) => (ExperimentKind::PairRates, c),
            Command::RateVsP(c) => (ExperimentKind::RateVsP, c),
            Command::NegativitySweep(c) => (ExperimentKind::NegativitySweep, c),
            Command::FidelitySweep(c) => (ExperimentKind::FidelitySweep, c),
            Command::EbitRates(c) => (ExperimentKind::EbitRates, c),
            Command::DistillCompare(c) => (ExperimentKind::DistillCompare, c),
        }
    }
}

fn build_spec(kind: ExperimentKind, args: &Common) -> Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::new(kind);
    if let Some(path) = &args.topology {
        spec.topology = Some(
            NetworkTopology::load(path)
                .with_context(|| format!("loading topology {}", path.display()))?,
        );
    }
    if let Some(path) = &args.params {
        spec.params = LossParameters::load(path)
            .with_context(|| format!("loading parameters {}", path.display()))?;
    }
    spec.gate_p = args.gate_p.clone();
    spec.lambda = args.lambda.clone();
    spec.length_km = args.length_km;
    spec.pairs = args.pairs.clone();
    spec.distill.threshold = args.threshold;
    spec.distill.max_rounds = args.max_rounds;
    if args.bbpssw_entry_twirl {
        spec.distill.bbpssw_twirl = TwirlPolicy::EntryOnly;
    }
    spec.distill_protocol = args.distill;
    Ok(spec)
}

fn main() -> Result<()> {
    let (kind, args) = Cli::parse().command.split();
    let spec = build_spec(kind, &args)?;
    let table = run_experiment(&spec).with_context(|| format!("running {kind}"))?;
    print!("{}", table.render_text());
    if let Some(out) = &args.out {
        emit_csv(&table, out).with_context(|| format!("writing {}", out.display()))?;
    }
    Ok(())
}
