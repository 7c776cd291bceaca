use std::fs::{File, OpenOptions};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use acdec::ac::AcConfig;
use acdec::bench::{read_syndromes, run_trials, run_trials_sequential, write_predictions, Report, TrialConfig};
use acdec::bp::{BpConfig, BpDecoder, BpVariant};
use acdec::ingest::{column_weight_histogram, parse_dem};
use acdec::osd::{OsdConfig, OsdMethod};
use acdec::problem::DecodingProblem;
use acdec::DecoderSpec;
use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "acdec", version, about = "Decode syndromes of sparse decoding problems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decode a file of syndromes, one per line.
    Decode {
        #[arg(long)]
        dem: PathBuf,
        #[arg(long)]
        syndromes: PathBuf,
        #[command(flatten)]
        decoder: DecoderArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sample shots, decode them and report failure rate and timing.
    Bench {
        #[arg(long)]
        dem: PathBuf,
        #[command(flatten)]
        decoder: DecoderArgs,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Syndrome extraction rounds covered by the model.
        #[arg(long, default_value_t = 1)]
        rounds: usize,
        /// Append the report as one JSON line to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Physical error rate the model was generated at, recorded in the report.
        #[arg(long)]
        noise: Option<f64>,
        /// Decode on the calling thread only.
        #[arg(long)]
        sequential: bool,
    },
    /// Print the size and column weights of a model.
    DemInfo {
        #[arg(long)]
        dem: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DecoderKind {
    Ac,
    Bposd,
    Bp,
}

#[derive(Clone, Copy, ValueEnum)]
#[value(rename_all = "snake_case")]
enum VariantArg {
    SumProduct,
    MinSum,
}

#[derive(Clone, Copy, ValueEnum)]
enum OsdMethodArg {
    #[value(name = "0")]
    Zero,
    E,
    Cs,
}

#[derive(Args)]
struct DecoderArgs {
    #[arg(long, value_enum, default_value = "ac")]
    decoder: DecoderKind,
    /// Stage-2 budget as a fraction of the columns.
    #[arg(long, conflicts_with = "k")]
    kappa: Option<f64>,
    /// Stage-2 budget as a column count.
    #[arg(long = "K", id = "k")]
    k: Option<usize>,
    /// BP rounds; 9 for ac and bp, 10000 for bposd by default.
    #[arg(long)]
    bp_rounds: Option<usize>,
    /// Sum-product for ac and bp, min-sum for bposd by default.
    #[arg(long, value_enum)]
    bp_variant: Option<VariantArg>,
    #[arg(long, value_enum, default_value = "cs")]
    osd_method: OsdMethodArg,
    #[arg(long, default_value_t = 7)]
    osd_order: usize,
}

impl DecoderArgs {
    fn spec(&self) -> Result<DecoderSpec> {
        let mut bp = match self.decoder {
            DecoderKind::Bposd => BpConfig::osd_default(),
            _ => BpConfig::ac_default(),
        };
        if let Some(r) = self.bp_rounds {
            bp.max_rounds = r;
        }
        if let Some(v) = self.bp_variant {
            bp.variant = match v {
                VariantArg::SumProduct => BpVariant::SumProduct,
                VariantArg::MinSum => BpVariant::MinSum,
            };
        }
        if !matches!(self.decoder, DecoderKind::Ac) && (self.kappa.is_some() || self.k.is_some()) {
            bail!("--kappa and --K only apply to --decoder ac");
        }
        Ok(match self.decoder {
            DecoderKind::Ac => {
                let mut config = match (self.kappa, self.k) {
                    (_, Some(k)) => AcConfig::with_columns(k),
                    (Some(kappa), None) => AcConfig::with_kappa(kappa),
                    (None, None) => AcConfig::default(),
                };
                config.bp = bp;
                DecoderSpec::Ac(config)
            }
            DecoderKind::Bposd => {
                let method = match self.osd_method {
                    OsdMethodArg::Zero => OsdMethod::OrderZero,
                    OsdMethodArg::E => OsdMethod::Exhaustive,
                    OsdMethodArg::Cs => OsdMethod::CombinationSweep,
                };
                let order = if matches!(method, OsdMethod::OrderZero) { 0 } else { self.osd_order };
                DecoderSpec::BpOsd {
                    bp,
                    osd: OsdConfig { method, order },
                }
            }
            DecoderKind::Bp => DecoderSpec::Bp(bp),
        })
    }
}

fn load(path: &Path) -> Result<DecodingProblem> {
    let file = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let name = path.file_stem().map(|s| s.to_string_lossy().into_owned());
    let problem = parse_dem(BufReader::new(file)).with_context(|| format!("reading {}", path.display()))?;
    Ok(match name {
        Some(n) => problem.with_name(n),
        None => problem,
    })
}

fn decode(dem: &Path, syndromes: &Path, args: &DecoderArgs, out: &Path) -> Result<()> {
    let problem = load(dem)?;
    let spec = args.spec()?;
    let file = File::open(syndromes).with_context(|| format!("opening {}", syndromes.display()))?;
    let shots = read_syndromes(BufReader::new(file), Some(problem.num_checks()))
        .with_context(|| format!("reading {}", syndromes.display()))?;
    let mut predictions = Vec::with_capacity(shots.len());
    if let DecoderSpec::Bp(config) = spec {
        // Plain BP always has an answer: the logical effect of its rounding.
        let mut bp = BpDecoder::new(&problem, config)?;
        let mut unconverged = 0;
        for s in &shots {
            let post = bp.run(s)?;
            unconverged += !post.converged as usize;
            predictions.push(problem.logical_of(&post.hard_decision()));
        }
        if unconverged > 0 {
            eprintln!("{unconverged} of {} syndromes were not satisfied by BP", shots.len());
        }
    } else {
        let mut decoder = spec.build(&problem)?;
        for (i, s) in shots.iter().enumerate() {
            let r = decoder.decode(s).with_context(|| format!("decoding syndrome on line {}", i + 1))?;
            predictions.push(r.logical);
        }
    }
    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    write_predictions(BufWriter::new(file), &predictions)?;
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn bench(
    dem: &Path,
    args: &DecoderArgs,
    shots: usize,
    seed: u64,
    rounds: usize,
    json: Option<&Path>,
    noise: Option<f64>,
    sequential: bool,
) -> Result<()> {
    let problem = load(dem)?;
    let spec = args.spec()?;
    let config = TrialConfig::new(shots, seed).with_rounds(rounds);
    let stats = if sequential {
        run_trials_sequential(&problem, &spec, &config)?
    } else {
        run_trials(&problem, &spec, &config)?
    };
    let mut report = Report::new(&problem, &spec, &stats).with_seed(seed);
    if let Some(p) = noise {
        report = report.with_noise(p);
    }
    println!("decoder      {}", report.decoder);
    println!("fails/shots  {}", report.fails_over_shots);
    println!("p_fail       {}", report.p_fail_text);
    println!("time/round   {} s", report.time_text);
    if stats.decoder_errors > 0 {
        println!("decoder gave up on {} shots", stats.decoder_errors);
    }
    if let Some(note) = &report.note {
        println!("note         {note}");
    }
    if let Some(path) = json {
        let mut file = OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        writeln!(file, "{}", serde_json::to_string(&report)?)?;
    }
    Ok(())
}

fn dem_info(dem: &Path) -> Result<()> {
    let problem = load(dem)?;
    println!("detectors (m)   {}", problem.num_checks());
    println!("mechanisms (n)  {}", problem.num_errors());
    println!("logicals (k)    {}", problem.num_logicals());
    println!("column weights");
    for (w, count) in column_weight_histogram(&problem).iter().enumerate() {
        if *count > 0 {
            println!("  {w:>3}  {count}");
        }
    }
    Ok(())
}

fn main() -> Result<()> {
    let cli = Cli::parse();
    match cli.command {
        Command::Decode {
            dem,
            syndromes,
            decoder,
            out,
        } => decode(&dem, &syndromes, &decoder, &out),
        Command::Bench {
            dem,
            decoder,
            shots,
            seed,
            rounds,
            json,
            noise,
            sequential,
        } => bench(&dem, &decoder, shots, seed, rounds, json.as_deref(), noise, sequential),
        Command::DemInfo { dem } => dem_info(&dem),
    }
}
