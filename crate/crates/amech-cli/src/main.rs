//! Command-line driver for the reversible lattice-gas simulator: board
//! evolution, entropy time series toward future and past, reversibility
//! demos, recurrence scans, macrostate sampling and reference entropies.
//!
//! Exit codes: 0 on success (and when a checked property holds), 1 when a
//! checked property is violated, 2 on usage, parse or I/O errors.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use amech::fixtures::{config_a0, config_a1};
use amech::{
    emit_entropy_csv, parse_block_counts, parse_config, reference_entropies, render_board,
    seeded_rng, serialize_config, Apparatus, Configuration, EntropyBits, Field,
};

#[derive(Parser)]
#[command(
    name = "amech",
    version,
    about = "Exact reversible lattice-gas mechanics over a prime field"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve a configuration, printing the board and its apparatus entropy
    Evolve(EvolveArgs),
    /// Emit the apparatus entropy series toward future and past as CSV
    EntropySeries(SeriesArgs),
    /// Evolve n steps, reverse velocities, evolve n steps back; verify the
    /// exact return to the starting microstate
    Demo(DemoArgs),
    /// Scan for an exact recurrence of the initial microstate
    Recur(RecurArgs),
    /// Draw a random microstate compatible with a block-counts macrostate
    Sample(SampleArgs),
    /// Print the closed-form reference entropies
    RefEntropy(RefEntropyArgs),
}

/// Where the initial configuration comes from.
#[derive(Args)]
struct InputArgs {
    /// Configuration file to load
    #[arg(long, value_name = "PATH", conflicts_with_all = ["fixture", "random_block"])]
    input: Option<PathBuf>,

    /// Built-in fixture
    #[arg(long, value_parser = ["a0", "a1"], default_value = "a0",
          conflicts_with = "random_block")]
    fixture: String,

    /// Generate a K x K particle block with seeded random velocities instead
    #[arg(long, value_name = "K")]
    random_block: Option<u32>,

    /// Board prime, used when generating (files carry their own p)
    #[arg(long, default_value_t = 19)]
    p: u32,

    /// Seed for every randomized path
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl InputArgs {
    fn load(&self) -> Result<Configuration> {
        if let Some(path) = &self.input {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            return parse_config(&text).with_context(|| format!("parsing {}", path.display()));
        }
        if let Some(k) = self.random_block {
            let field = Field::new(self.p)?;
            anyhow::ensure!(
                k <= self.p,
                "--random-block {k} exceeds the board edge {}",
                self.p
            );
            return Ok(Configuration::random_block(
                field,
                k,
                &mut seeded_rng(self.seed),
            ));
        }
        Ok(match self.fixture.as_str() {
            "a1" => config_a1(),
            _ => config_a0(),
        })
    }
}

#[derive(Args)]
struct EvolveArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Steps to evolve, printing every step from 0 up
    #[arg(long, default_value_t = 10)]
    steps: u64,

    /// Print only these step numbers (comma-separated), e.g. 0,1,2,5,10,20
    #[arg(long, value_delimiter = ',', value_name = "T,T,...")]
    at: Option<Vec<u64>>,

    /// Reverse all velocities before evolving
    #[arg(long)]
    reverse: bool,

    /// Apparatus block edge
    #[arg(long, default_value_t = 3)]
    block_edge: u32,

    /// Write the final configuration here
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SeriesArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Steps to evolve toward the future
    #[arg(long, default_value_t = 50)]
    steps: u64,

    /// Steps to evolve toward the past (recorded at negative indices)
    #[arg(long, default_value_t = 50)]
    steps_back: u64,

    /// Sample after every stage instead of every step; the index column then
    /// counts stages
    #[arg(long)]
    per_stage: bool,

    /// Apparatus block edge
    #[arg(long, default_value_t = 3)]
    block_edge: u32,

    /// Write the CSV here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DemoArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Steps to evolve before rewinding
    #[arg(long, default_value_t = 50)]
    steps: u64,

    /// Also sweep this many seeded random configurations
    #[arg(long, default_value_t = 0)]
    count: u32,

    /// Particles per random configuration in the sweep
    #[arg(long, default_value_t = 81)]
    particles: u32,
}

#[derive(Args)]
struct RecurArgs {
    #[command(flatten)]
    input: InputArgs,

    /// Maximum number of steps to scan
    #[arg(long, default_value_t = 1000)]
    horizon: u64,
}

#[derive(Args)]
struct SampleArgs {
    /// Block-counts grid file: one row per block row, '#' comments allowed
    #[arg(long, value_name = "PATH")]
    counts: PathBuf,

    /// Board prime
    #[arg(long, default_value_t = 19)]
    p: u32,

    /// Apparatus block edge
    #[arg(long, default_value_t = 3)]
    block_edge: u32,

    /// Seed for the sampler
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Write the sampled configuration here instead of standard output
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct RefEntropyArgs {
    /// Board prime
    #[arg(long, default_value_t = 19)]
    p: u32,

    /// Particle count
    #[arg(long, default_value_t = 81)]
    n: u64,

    /// Edge of the bounding region used by the region-level description
    #[arg(long, default_value_t = 9)]
    region_edge: u64,

    /// Also print the entropy of this block-counts macrostate
    #[arg(long, value_name = "PATH")]
    counts: Option<PathBuf>,

    /// Apparatus block edge for --counts
    #[arg(long, default_value_t = 3)]
    block_edge: u32,
}

fn frame_header(tag: &str, t: i64, s: EntropyBits) -> String {
    format!("====== {tag}{t:>3}  S_A={:.6} bit ======", s.bits())
}

fn cmd_evolve(args: &EvolveArgs) -> Result<ExitCode> {
    let loaded = args.input.load()?;
    let start = if args.reverse {
        loaded.reverse_velocities()
    } else {
        loaded
    };
    let apparatus = Apparatus::new(start.field(), args.block_edge)?;

    let mut frames: Vec<u64> = match &args.at {
        Some(ts) => ts.clone(),
        None => (0..=args.steps).collect(),
    };
    frames.sort_unstable();
    frames.dedup();

    let mut c = start;
    let mut t = 0u64;
    for &target in &frames {
        c = c.advance_steps(target - t);
        t = target;
        println!(
            "{}",
            frame_header("T=", target as i64, apparatus.observed_entropy(&c))
        );
        print!("{}", render_board(&c)?);
    }
    if let Some(path) = &args.out {
        fs::write(path, serialize_config(&c))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_entropy_series(args: &SeriesArgs) -> Result<ExitCode> {
    let start = args.input.load()?;
    let apparatus = Apparatus::new(start.field(), args.block_edge)?;
    let stages_per_sample = if args.per_stage {
        1
    } else {
        start.prime() as u64
    };
    let advance = |c: &Configuration| c.advance_stages(stages_per_sample);

    let mut series: Vec<(i64, EntropyBits)> = Vec::new();
    let mut back = start.reverse_velocities();
    let mut backward = Vec::with_capacity(args.steps_back as usize);
    for k in 1..=args.steps_back as i64 {
        back = advance(&back);
        backward.push((-k, apparatus.observed_entropy(&back)));
    }
    series.extend(backward.into_iter().rev());
    series.push((0, apparatus.observed_entropy(&start)));
    let mut fwd = start;
    for k in 1..=args.steps as i64 {
        fwd = advance(&fwd);
        series.push((k, apparatus.observed_entropy(&fwd)));
    }

    let csv = emit_entropy_csv(&series);
    match &args.out {
        Some(path) => {
            fs::write(path, csv).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{csv}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_demo(args: &DemoArgs) -> Result<ExitCode> {
    let start = args.input.load()?;
    let field = start.field().clone();
    let mut rng = seeded_rng(args.input.seed);
    let mut configs = vec![("input".to_string(), start)];
    for i in 0..args.count {
        configs.push((
            format!("random {i}"),
            Configuration::random(field.clone(), args.particles, &mut rng),
        ));
    }

    let mut all_ok = true;
    for (name, c) in &configs {
        let back = c
            .advance_steps(args.steps)
            .reverse_velocities()
            .advance_steps(args.steps)
            .reverse_velocities();
        let ok = &back == c;
        all_ok &= ok;
        println!(
            "{name}: exact return after {} steps out and back: {ok}",
            args.steps
        );
    }
    if all_ok {
        println!(
            "demo: all {} configuration(s) returned exactly",
            configs.len()
        );
        Ok(ExitCode::SUCCESS)
    } else {
        println!("demo: FAILED, at least one configuration did not return");
        Ok(ExitCode::from(1))
    }
}

fn cmd_recur(args: &RecurArgs) -> Result<ExitCode> {
    let start = args.input.load()?;
    let mut c = start.clone();
    for step in 1..=args.horizon {
        c = c.advance_steps(1);
        if c == start {
            println!("recurrence at step {step}");
            return Ok(ExitCode::SUCCESS);
        }
    }
    println!("no recurrence within {} steps", args.horizon);
    Ok(ExitCode::SUCCESS)
}

fn cmd_sample(args: &SampleArgs) -> Result<ExitCode> {
    let field = Field::new(args.p)?;
    let apparatus = Apparatus::new(&field, args.block_edge)?;
    let text = fs::read_to_string(&args.counts)
        .with_context(|| format!("reading {}", args.counts.display()))?;
    let m = parse_block_counts(&text, &apparatus)
        .with_context(|| format!("parsing {}", args.counts.display()))?;
    let c = apparatus.sample_microstate(&m, &mut seeded_rng(args.seed));
    let entropy_line = format!("S_A = {:.6} bit", apparatus.macrostate_entropy(&m).bits());
    match &args.out {
        Some(path) => {
            fs::write(path, serialize_config(&c))
                .with_context(|| format!("writing {}", path.display()))?;
            println!("{entropy_line}");
        }
        None => {
            // Keep stdout parseable as a configuration file.
            print!("{}", serialize_config(&c));
            eprintln!("{entropy_line}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_ref_entropy(args: &RefEntropyArgs) -> Result<ExitCode> {
    let field = Field::new(args.p)?;
    let r = reference_entropies(&field, args.n, args.region_edge);
    println!(
        "reference entropies for {} particles on the {p} x {p} board (bits):",
        args.n,
        p = args.p
    );
    let rows = [
        ("count only (nothing else known)", r.count_only),
        (
            "exact occupied cells, identities unknown",
            r.pattern_unlabeled,
        ),
        (
            &format!("somewhere in a {e} x {e} region", e = args.region_edge) as &str,
            r.region_only,
        ),
        ("position of every particle known", r.positions_known),
        ("positions and velocities fully known", r.fully_known),
    ];
    for (desc, s) in rows {
        println!("  {desc:<44} {:>14.6}", s.bits());
    }
    if let Some(path) = &args.counts {
        let apparatus = Apparatus::new(&field, args.block_edge)?;
        let text =
            fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        let m = parse_block_counts(&text, &apparatus)
            .with_context(|| format!("parsing {}", path.display()))?;
        println!(
            "  {:<44} {:>14.6}",
            format!("block counts from {}", path.display()),
            apparatus.macrostate_entropy(&m).bits()
        );
    }
    Ok(ExitCode::SUCCESS)
}

fn run(cli: Cli) -> Result<ExitCode> {
    match &cli.command {
        Command::Evolve(args) => cmd_evolve(args),
        Command::EntropySeries(args) => cmd_entropy_series(args),
        Command::Demo(args) => cmd_demo(args),
        Command::Recur(args) => cmd_recur(args),
        Command::Sample(args) => cmd_sample(args),
        Command::RefEntropy(args) => cmd_ref_entropy(args),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
