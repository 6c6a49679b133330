//! Experiment runner: config parsing, driver dispatch, history output and
//! decay-rate summaries.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::adaptive::{
    sc_driver, scfe_driver_with, AdaptiveConfig, IterationRecord, Phase, ProfitKind, RunStatus, ToleranceRule,
};
use crate::error::{Error, Result};
use crate::multiindex::MultiIndex;
use crate::problems::ProblemSpec;

/// Overrides `output_dir` from the config file.
pub const OUTPUT_DIR_ENV: &str = "SCFEM_OUTPUT_DIR";

pub const HISTORY_HEADER: &str = "phase,outer,sweep,n_indices,n_points,dofs,zeta_sc,eta_fe,total,tol,selected";

#[derive(Parser, Debug)]
#[command(
    name = "scfem",
    version,
    about = "Adaptive sparse-grid collocation finite element solver"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run an experiment described by a key=value config file
    Run { config: PathBuf },
    /// Fit estimator decay rates from a history.csv
    Summarize { history: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Driver {
    Scfe,
    Sc,
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub preset: String,
    pub driver: Driver,
    pub adaptive: AdaptiveConfig,
    pub output_dir: PathBuf,
    /// write mesh snapshots every this many outer iterations; 0 disables
    pub snapshot_every: usize,
}

fn parse_value<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse()
        .map_err(|_| Error::Config(format!("invalid value '{v}' for '{key}'")))
}

fn parse_bool(key: &str, v: &str) -> Result<bool> {
    match v {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(Error::Config(format!("invalid value '{v}' for '{key}'"))),
    }
}

impl RunConfig {
    /// Parses `key = value` lines; `#` starts a comment. Unknown keys and
    /// repeated keys are errors. `preset` is required.
    pub fn parse(text: &str) -> Result<Self> {
        let mut preset = None;
        let mut driver = Driver::Scfe;
        let mut a = AdaptiveConfig::default();
        let mut output_dir = PathBuf::from("output");
        let mut snapshot_every = 0;
        let mut seen = std::collections::BTreeSet::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, v) = (key.trim(), value.trim());
            if !seen.insert(key.to_string()) {
                return Err(Error::Config(format!("line {}: duplicate key '{key}'", lineno + 1)));
            }
            match key {
                "preset" => preset = Some(v.to_string()),
                "driver" => {
                    driver = match v {
                        "scfe" => Driver::Scfe,
                        "sc" => Driver::Sc,
                        _ => return Err(Error::Config(format!("unknown driver '{v}'"))),
                    }
                }
                "epsilon" => a.epsilon = parse_value(key, v)?,
                "theta_y" => a.theta_y = parse_value(key, v)?,
                "theta_x" => a.theta_x = parse_value(key, v)?,
                "alpha" => a.alpha = parse_value(key, v)?,
                "profit" => {
                    a.profit = match v {
                        "workless" => ProfitKind::Workless,
                        "with_work" => ProfitKind::WithWork,
                        _ => return Err(Error::Config(format!("unknown profit '{v}'"))),
                    }
                }
                "tolerance_rule" => {
                    a.tolerance_rule = match v {
                        "simplified" => ToleranceRule::Simplified,
                        "margin_weighted" => ToleranceRule::MarginWeighted,
                        _ => return Err(Error::Config(format!("unknown tolerance_rule '{v}'"))),
                    }
                }
                "deferred_tolerance" => a.deferred_tolerance = parse_bool(key, v)?,
                "theta_size" => a.theta_size = parse_value(key, v)?,
                "theta_seed" => a.theta_seed = parse_value(key, v)?,
                "pi_size" => a.pi_size = parse_value(key, v)?,
                "pi_seed" => a.pi_seed = parse_value(key, v)?,
                "max_outer_iterations" => a.max_outer_iterations = parse_value(key, v)?,
                "max_dofs" => a.max_dofs = parse_value(key, v)?,
                "max_sweeps" => a.max_sweeps = parse_value(key, v)?,
                "max_enrichments" => a.max_enrichments = parse_value(key, v)?,
                "workers" => a.workers = parse_value(key, v)?,
                "output_dir" => output_dir = PathBuf::from(v),
                "snapshot_every" => snapshot_every = parse_value(key, v)?,
                _ => return Err(Error::Config(format!("line {}: unknown key '{key}'", lineno + 1))),
            }
        }
        let preset = preset.ok_or_else(|| Error::Config("missing required key 'preset'".into()))?;
        ProblemSpec::by_name(&preset).map_err(|e| Error::Config(e.to_string()))?;
        a.validate()?;
        Ok(Self {
            preset,
            driver,
            adaptive: a,
            output_dir,
            snapshot_every,
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    /// Canonical `key = value` listing of every setting.
    pub fn echo(&self) -> String {
        let a = &self.adaptive;
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("preset", self.preset.clone());
        kv("driver", if self.driver == Driver::Scfe { "scfe" } else { "sc" }.into());
        kv("epsilon", format!("{:e}", a.epsilon));
        kv("theta_y", format!("{:e}", a.theta_y));
        kv("theta_x", format!("{:e}", a.theta_x));
        kv("alpha", format!("{:e}", a.alpha));
        kv(
            "profit",
            if a.profit == ProfitKind::Workless {
                "workless"
            } else {
                "with_work"
            }
            .into(),
        );
        kv(
            "tolerance_rule",
            if a.tolerance_rule == ToleranceRule::Simplified {
                "simplified"
            } else {
                "margin_weighted"
            }
            .into(),
        );
        kv("deferred_tolerance", a.deferred_tolerance.to_string());
        kv("theta_size", a.theta_size.to_string());
        kv("theta_seed", a.theta_seed.to_string());
        kv("pi_size", a.pi_size.to_string());
        kv("pi_seed", a.pi_seed.to_string());
        kv("max_outer_iterations", a.max_outer_iterations.to_string());
        kv("max_dofs", a.max_dofs.to_string());
        kv("max_sweeps", a.max_sweeps.to_string());
        kv("max_enrichments", a.max_enrichments.to_string());
        kv("workers", a.workers.to_string());
        kv("output_dir", self.output_dir.display().to_string());
        kv("snapshot_every", self.snapshot_every.to_string());
        s
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

fn index_label(i: &MultiIndex) -> String {
    i.entries().iter().map(|e| e.to_string()).collect::<Vec<_>>().join(":")
}

/// One CSV line (no newline). Floats use the shortest round-trip form.
pub fn history_line(r: &IterationRecord) -> String {
    format!(
        "{},{},{},{},{},{},{},{:e},{},{},{}",
        r.phase.tag(),
        r.outer,
        r.sweep,
        r.n_indices,
        r.n_points,
        r.dofs,
        opt(r.zeta_sc),
        r.eta_fe,
        opt(r.total),
        opt(r.tol),
        r.selected.as_ref().map(index_label).unwrap_or_default()
    )
}

pub fn write_history<W: Write>(mut w: W, records: &[IterationRecord]) -> std::io::Result<()> {
    writeln!(w, "{HISTORY_HEADER}")?;
    for r in records {
        writeln!(w, "{}", history_line(r))?;
    }
    Ok(())
}

/// A parsed row of `history.csv`.
#[derive(Clone, Debug, PartialEq)]
pub struct HistoryRow {
    pub phase: Phase,
    pub outer: usize,
    pub sweep: usize,
    pub n_indices: usize,
    pub n_points: usize,
    pub dofs: usize,
    pub zeta_sc: Option<f64>,
    pub eta_fe: f64,
    pub total: Option<f64>,
    pub tol: Option<f64>,
    pub selected: String,
}

pub fn parse_history(text: &str) -> Result<Vec<HistoryRow>> {
    let mut lines = text.lines();
    match lines.next() {
        Some(h) if h.trim() == HISTORY_HEADER => {}
        _ => return Err(Error::History("missing or unexpected header".into())),
    }
    let bad = |n: usize, what: &str| Error::History(format!("row {n}: {what}"));
    let mut rows = Vec::new();
    for (n, line) in lines.enumerate().map(|(k, l)| (k + 2, l)) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split(',').collect();
        if f.len() != 11 {
            return Err(bad(n, "expected 11 fields"));
        }
        let int = |s: &str| s.parse::<usize>().map_err(|_| bad(n, "bad integer"));
        let float = |s: &str| s.parse::<f64>().map_err(|_| bad(n, "bad number"));
        let ofloat = |s: &str| if s.is_empty() { Ok(None) } else { float(s).map(Some) };
        let phase = match f[0] {
            "fe_sweep" => Phase::FeSweep,
            "enrich" => Phase::Enrich,
            "outer" => Phase::Outer,
            _ => return Err(bad(n, "unknown phase")),
        };
        rows.push(HistoryRow {
            phase,
            outer: int(f[1])?,
            sweep: int(f[2])?,
            n_indices: int(f[3])?,
            n_points: int(f[4])?,
            dofs: int(f[5])?,
            zeta_sc: ofloat(f[6])?,
            eta_fe: float(f[7])?,
            total: ofloat(f[8])?,
            tol: ofloat(f[9])?,
            selected: f[10].to_string(),
        });
    }
    Ok(rows)
}

/// Least-squares slope of `log y` against `log x`.
pub fn loglog_slope(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 4 {
        return Err(Error::History(format!(
            "{} rows are too few for a fit (need 4)",
            points.len()
        )));
    }
    if points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return Err(Error::History("log-log fit needs positive values".into()));
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::History("all rows have the same dof count".into()));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    /// η_FE against dofs over `fe_sweep` rows
    pub fe_sweep_slope: std::result::Result<f64, String>,
    /// total estimator against dofs over `outer` rows
    pub outer_slope: std::result::Result<f64, String>,
}

pub fn summarize_rows(rows: &[HistoryRow]) -> Summary {
    let fe: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.phase == Phase::FeSweep)
        .map(|r| (r.dofs as f64, r.eta_fe))
        .collect();
    let outer: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.phase == Phase::Outer)
        .filter_map(|r| r.total.map(|t| (r.dofs as f64, t)))
        .collect();
    Summary {
        fe_sweep_slope: loglog_slope(&fe).map_err(|e| e.to_string()),
        outer_slope: loglog_slope(&outer).map_err(|e| e.to_string()),
    }
}

pub fn summarize(path: &Path) -> Result<String> {
    let rows = parse_history(&fs::read_to_string(path)?)?;
    let s = summarize_rows(&rows);
    if let (Err(a), Err(b)) = (&s.fe_sweep_slope, &s.outer_slope) {
        return Err(Error::History(format!("fe_sweep: {a}; outer: {b}")));
    }
    let mut out = String::new();
    let mut line = |name: &str, r: &std::result::Result<f64, String>| {
        let _ = match r {
            Ok(v) => writeln!(out, "{name} slope: {v:.4}\n{name}_slope={v:e}"),
            Err(e) => writeln!(out, "{name} slope: unavailable ({e})\n{name}_slope="),
        };
    };
    line("fe_sweep", &s.fe_sweep_slope);
    line("outer", &s.outer_slope);
    Ok(out)
}

/// What a run produced, before process exit codes are applied.
#[derive(Debug)]
pub struct RunOutcome {
    pub status: RunStatus,
    pub output_dir: PathBuf,
}

impl RunOutcome {
    pub fn exit_code(&self) -> i32 {
        match self.status {
            RunStatus::Converged => 0,
            RunStatus::BudgetExhausted(_) => 2,
        }
    }
}

fn meta_text(cfg: &RunConfig, status: &RunStatus) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "# scfem {}", env!("CARGO_PKG_VERSION"));
    s.push_str(&cfg.echo());
    let _ = match status {
        RunStatus::Converged => writeln!(s, "status = converged"),
        RunStatus::BudgetExhausted(m) => writeln!(s, "status = budget_exhausted ({m})"),
    };
    s
}

fn sc_records(res: &crate::adaptive::ScResult) -> Vec<IterationRecord> {
    res.zeta
        .iter()
        .enumerate()
        .map(|(l, &z)| IterationRecord {
            phase: if l == 0 { Phase::Outer } else { Phase::Enrich },
            outer: l,
            sweep: 0,
            n_indices: res.sets[l].len(),
            n_points: res.n_points[l],
            dofs: 0,
            zeta_sc: Some(z),
            eta_fe: 0.0,
            total: Some(z),
            tol: None,
            selected: if l == 0 {
                None
            } else {
                Some(res.selected[l - 1].clone())
            },
            elapsed_seconds: 0.0,
        })
        .collect()
}

/// Loads the config, runs the driver and writes `history.csv`, `timing.csv`,
/// `meta.txt` and optional mesh snapshots. Nothing is written if the
/// config is invalid.
pub fn run(config_path: &Path) -> Result<RunOutcome> {
    let mut cfg = RunConfig::load(config_path)?;
    if let Ok(dir) = std::env::var(OUTPUT_DIR_ENV) {
        cfg.output_dir = PathBuf::from(dir);
    }
    run_config(&cfg)
}

pub fn run_config(cfg: &RunConfig) -> Result<RunOutcome> {
    let problem = ProblemSpec::by_name(&cfg.preset)?;
    let dir = cfg.output_dir.clone();
    fs::create_dir_all(&dir)?;
    let (status, records) = match cfg.driver {
        Driver::Scfe => {
            let mut snapshot_err = None;
            let every = cfg.snapshot_every;
            let res = scfe_driver_with(&problem, &cfg.adaptive, |outer, state| {
                if every == 0 || outer % every != 0 || snapshot_err.is_some() {
                    return;
                }
                for (id, p) in state.points.iter().enumerate() {
                    let path = dir.join(format!("mesh_{id}_{outer}.txt"));
                    if let Err(e) =
                        fs::File::create(&path).and_then(|f| p.mesh.write_snapshot(std::io::BufWriter::new(f)))
                    {
                        snapshot_err = Some(e);
                    }
                }
            })?;
            if let Some(e) = snapshot_err {
                return Err(e.into());
            }
            (res.status, res.history)
        }
        Driver::Sc => {
            let res = sc_driver(&problem, &cfg.adaptive)?;
            let records = sc_records(&res);
            (res.status, records)
        }
    };
    write_history(
        std::io::BufWriter::new(fs::File::create(dir.join("history.csv"))?),
        &records,
    )?;
    let mut timing = String::from("row,elapsed_seconds\n");
    for (k, r) in records.iter().enumerate() {
        let _ = writeln!(timing, "{k},{:e}", r.elapsed_seconds);
    }
    fs::write(dir.join("timing.csv"), timing)?;
    fs::write(dir.join("meta.txt"), meta_text(cfg, &status))?;
    Ok(RunOutcome {
        status,
        output_dir: dir,
    })
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with(cli: Cli) -> i32 {
    match cli.command {
        Command::Run { config } => match run(&config) {
            Ok(o) => {
                if let RunStatus::BudgetExhausted(m) = &o.status {
                    eprintln!("stopped on budget: {m}");
                }
                o.exit_code()
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
        Command::Summarize { history } => match summarize(&history) {
            Ok(text) => {
                print!("{text}");
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                1
            }
        },
    }
}
