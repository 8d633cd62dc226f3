use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use c2game::config::{load_config, RunConfig};
use c2game::dynamics::FrustrationAssignment;
use c2game::game::{angles, GameInstance, PayoffMatrix, Strategy};
use c2game::harness::{analyze_matrix, output_dir, run_sweep, score_timeseries, turn_markers};
use c2game::network::build_force_network;

/// Adversarial king-of-the-hill swarm game with a command-and-control layer.
#[derive(Parser, Debug)]
#[command(name = "c2game", version)]
struct Cli {
    /// TOML run configuration; defaults are used when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Game seed; replaces the configured seed list.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Output directory.
    #[arg(long, global = true, env = "C2GAME_OUT")]
    out: Option<PathBuf>,

    /// Worker threads for parallel game play.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Play one game and write its trajectory and scores.
    Simulate {
        /// Blue frustration per turn, comma separated, e.g. "pi/3,pi/3".
        #[arg(long, default_value = "pi/3")]
        blue: String,
        /// Red frustration per turn.
        #[arg(long, default_value = "0")]
        red: String,
        /// Also write the per-term spatial forces at every sample.
        #[arg(long)]
        force_dump: bool,
    },
    /// Play every strategy pair and write the payoff matrix with analyses.
    Sweep {
        /// Comma-separated seeds; replaces the configured list.
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
    },
    /// Analyse an existing payoff matrix without simulating.
    Analyze {
        #[arg(long)]
        matrix: PathBuf,
        /// Use strict instead of weak dominance.
        #[arg(long)]
        strict: bool,
    },
    /// Write the interaction graph and agent roster.
    Network,
}

/// Reads a strategy such as `pi/3,2pi/3`. A single value is repeated for
/// every turn.
fn parse_strategy(text: &str, turns: usize) -> Result<Strategy> {
    let values = text
        .split(',')
        .map(|s| angles::parse(s).map_err(anyhow::Error::msg))
        .collect::<Result<Vec<f64>>>()?;
    let values = if values.len() == 1 { vec![values[0]; turns] } else { values };
    if values.len() != turns {
        bail!("strategy `{text}` has {} turns, the game has {turns}", values.len());
    }
    Ok(Strategy::new(values)?)
}

fn create(dir: &Path, name: &str) -> Result<BufWriter<File>> {
    let path = dir.join(name);
    let f = File::create(&path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn simulate(config: &RunConfig, out: &Path, blue: &str, red: &str, force_dump: bool) -> Result<()> {
    let game = config.game_config(config.seeds[0]);
    let blue = parse_strategy(blue, game.turns).context("--blue")?;
    let red = parse_strategy(red, game.turns).context("--red")?;
    let instance = GameInstance::new(&game)?;
    let result = instance.play(&blue, &red, true)?;
    let trajectory = result.trajectory.as_ref().expect("recorded game");
    std::fs::create_dir_all(out).with_context(|| format!("cannot create {}", out.display()))?;

    trajectory.write_csv(instance.network().swarm_agents(), create(out, "trajectory.csv")?)?;
    score_timeseries(trajectory, game.model.hill_radius, &turn_markers(&game)).write_csv(create(out, "scores.csv")?)?;
    serde_json::to_writer_pretty(create(out, "game.json")?, &result)?;

    if force_dump {
        let model = instance.model()?;
        let mut w = csv::Writer::from_writer(create(out, "forces.csv")?);
        w.write_record(["t", "agent", "att_x", "att_y", "rep_x", "rep_y", "field_x", "field_y"])?;
        for state in &trajectory.states {
            let turn = (0..game.turns)
                .rev()
                .find(|&k| state.t >= game.turn_boundary(k))
                .unwrap_or(0);
            let f = FrustrationAssignment::new(blue.at(turn), red.at(turn));
            for t in model.force_breakdown(state, f)? {
                let rec = [
                    t.attraction[0],
                    t.attraction[1],
                    t.repulsion[0],
                    t.repulsion[1],
                    t.field[0],
                    t.field[1],
                ];
                let mut row = vec![state.t.to_string(), t.agent.to_string()];
                row.extend(rec.iter().map(f64::to_string));
                w.write_record(&row)?;
            }
        }
        w.flush()?;
    }
    println!(
        "seed {}: U_blue = {}, U_red = {} ({} samples) -> {}",
        result.seed,
        result.utility_blue,
        result.utility_red,
        trajectory.len(),
        out.display()
    );
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let mut config = match &cli.config {
        Some(path) => load_config(path)?,
        None => RunConfig::default(),
    };
    if let Some(seed) = cli.seed {
        config.seeds = vec![seed];
    }
    if let Command::Sweep { seeds: Some(seeds) } = &cli.command {
        config.seeds = seeds.clone();
    }
    config.validate()?;
    let out = output_dir(&config, cli.out.as_deref());

    match &cli.command {
        Command::Simulate { blue, red, force_dump } => simulate(&config, &out, blue, red, *force_dump)?,
        Command::Sweep { .. } => {
            let art = run_sweep(&config, &out)?;
            println!(
                "{} cells over {} seed(s), {} invalid -> {}",
                art.matrix.cells.len(),
                config.seeds.len(),
                art.matrix.invalid_count(),
                out.display()
            );
            if let Some(m) = &art.analysis.maximin {
                println!("game value {}", m.value);
            }
        }
        Command::Analyze { matrix, strict } => {
            let f = File::open(matrix).with_context(|| format!("cannot open {}", matrix.display()))?;
            let m = PayoffMatrix::read_csv(f).with_context(|| format!("cannot read {}", matrix.display()))?;
            let (analysis, files) = analyze_matrix(&m, *strict, &out)?;
            if m.invalid_count() > 0 {
                bail!("matrix has {} invalid cells; analyses refused", m.invalid_count());
            }
            println!("wrote {} -> {}", files.join(", "), out.display());
            if let Some(mm) = analysis.maximin {
                println!("game value {}", mm.value);
            }
        }
        Command::Network => {
            let net = build_force_network(&config.layout, config.seeds[0])?;
            std::fs::create_dir_all(&out).with_context(|| format!("cannot create {}", out.display()))?;
            net.write_edges_csv(create(&out, "edges.csv")?)?;
            net.write_roster_csv(create(&out, "roster.csv")?)?;
            println!("{} agents, {} edges -> {}", net.len(), net.edge_count(), out.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            // Library errors already embed their cause in the message.
            let mut message = String::new();
            for cause in e.chain().map(ToString::to_string) {
                if !message.contains(&cause) {
                    if !message.is_empty() {
                        message.push_str(": ");
                    }
                    message.push_str(&cause);
                }
            }
            eprintln!("error: {message}");
            ExitCode::FAILURE
        }
    }
}
