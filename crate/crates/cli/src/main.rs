use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use padic_potts_cli::config::{parse_config_text, EXPERIMENTS};
use padic_potts_cli::{run_experiment, ExperimentConfig};

/// Runs one experiment on the p-adic Potts-Bethe map and prints a JSON report.
///
/// Exit status: 0 success, 1 error (including bad arguments), 2 the report
/// contains an undecided result.
/// PADIC_PRECISION sets the default number of digits.
#[derive(Debug, Parser)]
#[command(name = "padic-potts", version)]
struct Cli {
    /// Experiment to run; may instead come from the config file.
    #[arg(value_parser = clap::builder::PossibleValuesParser::new(EXPERIMENTS))]
    experiment: Option<String>,
    /// Flat `key = value` file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    prime: Option<u32>,
    /// Literal such as `1+p^3`.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long)]
    q_states: Option<usize>,
    #[arg(long)]
    precision: Option<i64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iter: Option<usize>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Point for classify and orbit.
    #[arg(long, allow_hyphen_values = true)]
    x: Option<String>,
    /// Symbols as digits (`12`) or labels (`C2,C3`).
    #[arg(long)]
    word: Option<String>,
    /// Translation-invariant solution form, A to E.
    #[arg(long)]
    form: Option<String>,
    #[arg(long)]
    m1: Option<usize>,
    #[arg(long)]
    m2: Option<usize>,
    #[arg(long)]
    m3: Option<usize>,
    #[arg(long)]
    alpha_size: Option<usize>,
    /// Chain length for conjugacy, period count for count-bound.
    #[arg(long)]
    m: Option<u32>,
    /// Block length for conjugacy, period for periodic.
    #[arg(long)]
    length: Option<usize>,
    #[arg(long)]
    samples: Option<usize>,
    /// Include wall-clock time in the report (breaks byte-identical output).
    #[arg(long)]
    timing: bool,
}

impl Cli {
    fn pairs(&self) -> Vec<(&'static str, Option<String>)> {
        fn s<T: ToString>(v: &Option<T>) -> Option<String> {
            v.as_ref().map(T::to_string)
        }
        vec![
            ("experiment", self.experiment.clone()),
            ("prime", s(&self.prime)),
            ("theta", self.theta.clone()),
            ("q", self.q.clone()),
            ("q-states", s(&self.q_states)),
            ("precision", s(&self.precision)),
            ("seed", s(&self.seed)),
            ("max-iter", s(&self.max_iter)),
            ("out", self.out.as_ref().map(|p| p.display().to_string())),
            ("x", self.x.clone()),
            ("word", self.word.clone()),
            ("form", self.form.clone()),
            ("m1", s(&self.m1)),
            ("m2", s(&self.m2)),
            ("m3", s(&self.m3)),
            ("alpha-size", s(&self.alpha_size)),
            ("m", s(&self.m)),
            ("length", s(&self.length)),
            ("samples", s(&self.samples)),
            ("timing", self.timing.then(|| "true".to_string())),
        ]
    }
}

fn load(cli: &Cli) -> Result<ExperimentConfig, String> {
    let mut pairs = BTreeMap::new();
    if let Some(path) = &cli.config {
        let text = std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
        pairs = parse_config_text(&text).map_err(|e| e.to_string())?;
    }
    for (k, v) in cli.pairs() {
        if let Some(v) = v {
            pairs.insert(k.to_string(), v);
        }
    }
    ExperimentConfig::from_pairs(&pairs).map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let cfg = match load(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let report = run_experiment(&cfg);
    let text = report.to_json();
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(1);
            }
        }
        None => print!("{text}"),
    }
    ExitCode::from(report.status.exit_code() as u8)
}
