use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::game::{
    dominance_analysis, enumerate_payoffs, format_pi, maximin_solve, DominanceReport, GameInstance, GameResult,
    MaximinSolution, PayoffMatrix, Strategy,
};
use crate::harness::{density_grid, score_timeseries, turn_markers, utility_by_strategy, UtilityDistribution, Window};
use crate::network::Population;

/// Analyses of one payoff matrix. Each is `None` when the matrix has invalid
/// cells.
#[derive(Debug, Clone)]
pub struct AnalysisArtifacts {
    pub dominance: Option<DominanceReport>,
    pub maximin: Option<MaximinSolution>,
    pub utilities: Option<UtilityDistribution>,
}

#[derive(Debug, Clone)]
pub struct SweepArtifacts {
    pub matrix: PayoffMatrix,
    pub analysis: AnalysisArtifacts,
    /// Files written, relative to the output directory, in write order.
    pub files: Vec<String>,
}

#[derive(Serialize)]
struct NamedStrategy {
    index: usize,
    strategy: String,
    label: String,
}

fn named(strategies: &[Strategy], indices: &[usize]) -> Vec<NamedStrategy> {
    indices
        .iter()
        .map(|&i| NamedStrategy {
            index: i,
            strategy: strategies[i].label(),
            label: strategies[i].to_string(),
        })
        .collect()
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum Outcome<T> {
    Ok(T),
    Refused { reason: String },
}

#[derive(Serialize)]
struct DominanceFile {
    strict: bool,
    dominant_blue: Vec<NamedStrategy>,
    dominated_blue: Vec<NamedStrategy>,
    dominant_red: Vec<NamedStrategy>,
    dominated_red: Vec<NamedStrategy>,
}

#[derive(Serialize)]
struct Weighted {
    strategy: String,
    label: String,
    probability: f64,
}

#[derive(Serialize)]
struct MaximinFile {
    value: f64,
    blue_guarantee: f64,
    red_guarantee: f64,
    blue: Vec<Weighted>,
    red: Vec<Weighted>,
    pure_maximin_blue: NamedStrategy,
    pure_maximin_value: f64,
    best_blue_by_mean: Option<NamedStrategy>,
    best_blue_mean_utility: Option<f64>,
}

fn weighted(strategies: &[Strategy], p: &[f64]) -> Vec<Weighted> {
    strategies
        .iter()
        .zip(p)
        .map(|(s, &probability)| Weighted {
            strategy: s.label(),
            label: s.to_string(),
            probability,
        })
        .collect()
}

struct Output<'a> {
    dir: &'a Path,
    files: Vec<String>,
}

impl Output<'_> {
    fn create(&mut self, name: &str) -> Result<BufWriter<File>> {
        let path = self.dir.join(name);
        let f = File::create(&path).map_err(|e| Error::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(BufWriter::new(f))
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        let path = self.dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        self.files.push(name.to_string());
        Ok(())
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))
}

/// Dominance, maximin and utility distribution of `matrix`, written as
/// `dominance.json`, `maximin.json` and `utility_distribution.csv`. A matrix
/// with invalid cells is refused in each file rather than analysed.
pub fn analyze_matrix(matrix: &PayoffMatrix, strict: bool, out_dir: &Path) -> Result<(AnalysisArtifacts, Vec<String>)> {
    ensure_dir(out_dir)?;
    let mut out = Output {
        dir: out_dir,
        files: Vec::new(),
    };
    let analysis = write_analysis(matrix, strict, &mut out)?;
    Ok((analysis, out.files))
}

fn refused<T>(e: &Error) -> Outcome<T> {
    Outcome::Refused { reason: e.to_string() }
}

fn write_analysis(matrix: &PayoffMatrix, strict: bool, out: &mut Output<'_>) -> Result<AnalysisArtifacts> {
    let dominance = dominance_analysis(matrix, strict);
    let maximin = maximin_solve(matrix);
    let utilities = utility_by_strategy(matrix);

    let file = match &dominance {
        Ok(d) => Outcome::Ok(DominanceFile {
            strict: d.strict,
            dominant_blue: named(&matrix.blue_strategies, &d.dominant_rows),
            dominated_blue: named(&matrix.blue_strategies, &d.dominated_rows),
            dominant_red: named(&matrix.red_strategies, &d.dominant_cols),
            dominated_red: named(&matrix.red_strategies, &d.dominated_cols),
        }),
        Err(e) => refused(e),
    };
    out.json("dominance.json", &file)?;

    let file = match &maximin {
        Ok(m) => {
            let best = utilities.as_ref().ok().map(|u| u.best());
            Outcome::Ok(MaximinFile {
                value: m.value,
                blue_guarantee: m.blue_guarantee,
                red_guarantee: m.red_guarantee,
                blue: weighted(&matrix.blue_strategies, &m.blue),
                red: weighted(&matrix.red_strategies, &m.red),
                pure_maximin_blue: named(&matrix.blue_strategies, &[m.pure_maximin_row]).remove(0),
                pure_maximin_value: m.pure_maximin_value,
                best_blue_by_mean: best.map(|b| named(&matrix.blue_strategies, &[b.row]).remove(0)),
                best_blue_mean_utility: best.map(|b| b.mean),
            })
        }
        Err(e) => refused(e),
    };
    out.json("maximin.json", &file)?;

    if let Ok(u) = &utilities {
        u.write_csv(out.create("utility_distribution.csv")?)?;
    }
    Ok(AnalysisArtifacts {
        dominance: dominance.ok(),
        maximin: maximin.ok(),
        utilities: utilities.ok(),
    })
}

#[derive(Serialize)]
struct Provenance<'a> {
    schema_version: u32,
    crate_version: &'static str,
    config_hash: String,
    seeds: &'a [u64],
    blue_strategies: usize,
    red_strategies: usize,
    cells: usize,
    invalid_cells: usize,
    files: &'a [String],
}

/// File-name tag for a frustration, e.g. `0`, `0.50pi`.
fn phi_tag(phi: f64) -> String {
    format_pi(phi)
}

fn write_results(matrix: &PayoffMatrix, turns: usize, out: &mut Output<'_>) -> Result<()> {
    let mut w = csv::Writer::from_writer(out.create("results.csv")?);
    let mut header: Vec<String> = ["row", "col", "blue_strategy", "red_strategy", "seed", "status"]
        .map(String::from)
        .to_vec();
    for k in 1..=turns {
        header.push(format!("omega_blue_{k}"));
        header.push(format!("omega_red_{k}"));
    }
    header.extend(["utility_blue", "utility_red", "message"].map(String::from));
    w.write_record(&header)?;
    for r in 0..matrix.rows() {
        for c in 0..matrix.cols() {
            let cell = matrix.cell(r, c);
            let prefix = [
                r.to_string(),
                c.to_string(),
                matrix.blue_strategies[r].label(),
                matrix.red_strategies[c].label(),
            ];
            let mut rows: Vec<(u64, Vec<String>)> = Vec::new();
            for s in &cell.samples {
                let mut rec: Vec<String> = prefix.to_vec();
                rec.extend([s.seed.to_string(), "ok".into()]);
                for t in &s.turns {
                    rec.extend([t.blue.to_string(), t.red.to_string()]);
                }
                rec.extend([s.utility_blue.to_string(), (-s.utility_blue).to_string(), String::new()]);
                rows.push((s.seed, rec));
            }
            for f in &cell.failures {
                let mut rec: Vec<String> = prefix.to_vec();
                rec.extend([f.seed.to_string(), "failed".into()]);
                rec.extend(std::iter::repeat_n(String::new(), 2 * turns + 2));
                rec.push(f.message.clone());
                rows.push((f.seed, rec));
            }
            rows.sort_by_key(|(seed, _)| *seed);
            for (_, rec) in rows {
                w.write_record(&rec)?;
            }
        }
    }
    w.flush().map_err(|e| Error::io("results.csv", e))?;
    Ok(())
}

/// Plays the full strategy space for every seed and writes all artifacts to
/// `out_dir`: the payoff matrix, per-game results, analyses, figure data for
/// the first seed and a provenance record.
pub fn run_sweep(config: &RunConfig, out_dir: &Path) -> Result<SweepArtifacts> {
    config.validate()?;
    ensure_dir(out_dir)?;
    let mut out = Output {
        dir: out_dir,
        files: Vec::new(),
    };
    let base = config.game_config(config.seeds[0]);
    let matrix = enumerate_payoffs(&base, &config.game.actions, &config.seeds)?;

    matrix.write_csv(out.create("payoff_matrix.csv")?)?;
    write_results(&matrix, config.game.turns, &mut out)?;
    let analysis = write_analysis(&matrix, config.harness.strict_dominance, &mut out)?;
    out.json("failures.json", &matrix.failures())?;

    if config.harness.figures {
        write_figures(config, &mut out)?;
    }
    let files_so_far = out.files.clone();
    let mut listed = files_so_far.clone();
    listed.push("provenance.json".into());
    out.json(
        "provenance.json",
        &Provenance {
            schema_version: config.schema_version,
            crate_version: env!("CARGO_PKG_VERSION"),
            config_hash: config.config_hash(),
            seeds: &config.seeds,
            blue_strategies: matrix.rows(),
            red_strategies: matrix.cols(),
            cells: matrix.cells.len(),
            invalid_cells: matrix.invalid_count(),
            files: &listed,
        },
    )?;
    Ok(SweepArtifacts {
        matrix,
        analysis,
        files: out.files,
    })
}

fn write_figures(config: &RunConfig, out: &mut Output<'_>) -> Result<()> {
    let seed = config.seeds[0];
    let game = config.game_config(seed);
    let instance = GameInstance::new(&game)?;
    let markers = turn_markers(&game);
    let radius = game.model.hill_radius;
    let h = &config.harness;
    let turns = game.turns;

    let scan: Vec<Result<GameResult>> = h
        .frustration_scan
        .par_iter()
        .map(|&phi| {
            let blue = Strategy::constant(phi, turns)?;
            let red = Strategy::constant(h.scan_red, turns)?;
            instance.play(&blue, &red, true)
        })
        .collect();
    let mut scan_failures = Vec::new();
    for (&phi, result) in h.frustration_scan.iter().zip(scan) {
        let tag = phi_tag(phi);
        match result {
            Ok(g) => {
                let tr = g.trajectory.as_ref().expect("recorded game");
                for pop in Population::BOTH {
                    let grid = density_grid(&[tr], pop, Window::ALL, h.density_extent, h.density_resolution)?;
                    grid.write_csv(out.create(&format!("density_{}_{tag}.csv", pop.name()))?)?;
                }
                score_timeseries(tr, radius, &markers).write_csv(out.create(&format!("scores_phi_{tag}.csv"))?)?;
            }
            Err(e) => scan_failures.push(format!("phi {tag}: {e}")),
        }
    }

    let strategies = config.game.actions.strategies(turns);
    let jobs: Vec<(usize, &Strategy, usize)> = h
        .trace_blue
        .iter()
        .enumerate()
        .flat_map(|(k, b)| (0..strategies.len()).map(move |c| (k, b, c)))
        .collect();
    let traces: Vec<Result<GameResult>> = jobs
        .par_iter()
        .map(|&(_, b, c)| instance.play(b, &strategies[c], true))
        .collect();
    for (&(k, b, c), result) in jobs.iter().zip(traces) {
        let row = strategies.iter().position(|s| s == b);
        let name = match row {
            Some(r) => format!("scores_b{r}_r{c}.csv"),
            None => format!("scores_trace{k}_r{c}.csv"),
        };
        match result {
            Ok(g) => {
                let tr = g.trajectory.as_ref().expect("recorded game");
                score_timeseries(tr, radius, &markers).write_csv(out.create(&name)?)?;
            }
            Err(e) => scan_failures.push(format!("{name}: {e}")),
        }
    }
    if !scan_failures.is_empty() {
        out.json("figure_failures.json", &scan_failures)?;
    }
    Ok(())
}

/// Resolves the output directory: an explicit path wins over the config.
pub fn output_dir(config: &RunConfig, explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| config.output_dir.clone())
        .unwrap_or_else(|| PathBuf::from("c2game-out"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::ActionSet;
    use crate::network::ForceLayout;

    fn small() -> RunConfig {
        let mut c = RunConfig::default();
        c.layout = ForceLayout::mirrored(3, 3);
        c.game.horizon = 1.0;
        c.game.actions = ActionSet::new(vec![0.0, std::f64::consts::FRAC_PI_3]).unwrap();
        c.harness.trace_blue = vec![Strategy::constant(std::f64::consts::FRAC_PI_3, 2).unwrap()];
        c.harness.density_resolution = 12;
        c
    }

    #[test]
    fn sweep_writes_every_artifact() {
        let dir = tempfile::tempdir().unwrap();
        let art = run_sweep(&small(), dir.path()).unwrap();
        assert_eq!(art.matrix.cells.len(), 16);
        for name in [
            "payoff_matrix.csv",
            "results.csv",
            "dominance.json",
            "maximin.json",
            "utility_distribution.csv",
            "failures.json",
            "density_blue_0.csv",
            "density_red_0.50pi.csv",
            "density_blue_1.00pi.csv",
            "scores_phi_0.csv",
            "scores_b3_r0.csv",
            "scores_b3_r3.csv",
            "provenance.json",
        ] {
            assert!(dir.path().join(name).is_file(), "missing {name}");
        }
        let results = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
        assert_eq!(results.lines().count(), 17);
        let prov: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join("provenance.json")).unwrap()).unwrap();
        assert_eq!(prov["cells"], 16);
        assert_eq!(prov["config_hash"], small().config_hash());
    }

    #[test]
    fn analysis_refuses_invalid_matrix() {
        let dir = tempfile::tempdir().unwrap();
        let mut m = PayoffMatrix::from_numbers(&[vec![1.0, 2.0]]).unwrap();
        m.cells[0].mean_utility_blue = None;
        let (a, files) = analyze_matrix(&m, false, dir.path()).unwrap();
        assert!(a.dominance.is_none() && a.maximin.is_none() && a.utilities.is_none());
        assert_eq!(files, vec!["dominance.json", "maximin.json"]);
        let text = std::fs::read_to_string(dir.path().join("dominance.json")).unwrap();
        assert!(text.contains("refused"));
    }

    #[test]
    fn empty_seed_list_rejected_before_work() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = small();
        c.seeds.clear();
        assert!(matches!(run_sweep(&c, &dir.path().join("never")), Err(Error::NoSeeds)));
        assert!(!dir.path().join("never").exists());
    }
}
