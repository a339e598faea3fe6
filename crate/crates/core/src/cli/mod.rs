//! The `mirrorlab` experiment driver. Every verb produces named report files
//! plus a short stdout summary; `run` is deterministic given its inputs.

pub mod config;
pub mod svg;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::billiard::{
    first_return_section, folded_return, from_billiard_params, section_coordinate, trace,
    BilliardError, DirectionSlope, PhasePoint, Quadrant, Table,
};
use crate::classify::{
    classify_map, predict_complexity, preimage_tree, quarter_map, ComplexityPrediction,
    DirectionClass,
};
use crate::itm::{DoubleRotation, IntervalUnion};
use crate::language::{build_language, LanguageLevels};
use crate::report::{complexity_csv, measure_csv, ClassifyReport};
use crate::scalar::Scalar;
use crate::sections::{bound_report, SectionMap};
use crate::suites::{bk_map, Suite, SuiteOptions, DEFAULT_SEED};

pub use config::{Coding, ConfigError, ExperimentConfig, Mode};

#[derive(Parser, Debug)]
#[command(name = "mirrorlab", version, about = "Exact experiments on square billiards with a one-sided mirror")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// TOML experiment config; numbers are fraction strings such as "37/997".
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for report files (created if missing).
    #[arg(long, global = true)]
    pub out_dir: Option<PathBuf>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Largest word length.
    #[arg(long, global = true)]
    pub n_max: Option<usize>,
    /// Iteration or search cap (connections, backward chains, attractor images).
    #[arg(long, global = true)]
    pub cap: Option<usize>,
}

#[derive(Subcommand, Debug, Clone, PartialEq, Eq)]
pub enum Command {
    /// Trace the folded billiard from (a, y) and compare section returns with the double rotation.
    Simulate,
    /// Classify the direction t at a = 1/4 and predict p(n).
    Classify,
    /// Complexity profile of the coded map.
    Complexity,
    /// Forward images of [0,1) and their measures.
    Attractor,
    /// Run a verification suite (or `all`); exits nonzero if any check fails.
    Verify { suite: String },
    /// Classify a grid of (b, t) at a = 1/4.
    Sweep,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Billiard(#[from] BilliardError),
    #[error("{0}")]
    Usage(String),
    #[error("writing {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

/// Report files and summary of one verb.
#[derive(Debug, Default)]
pub struct Outcome {
    pub files: Vec<(String, String)>,
    pub summary: String,
    /// False when a verification claim failed.
    pub ok: bool,
}

/// Config values with command-line overrides applied.
#[derive(Debug, Clone)]
pub struct Settings {
    pub cfg: ExperimentConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
    pub n_max: Option<usize>,
    pub cap: Option<usize>,
}

impl Settings {
    pub fn resolve(cli: &Cli) -> Result<Self, CliError> {
        let cfg = match &cli.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        Ok(Settings {
            out_dir: cli.out_dir.clone().or(cfg.out_dir.clone()).unwrap_or_else(|| "mirrorlab-out".into()),
            seed: cli.seed.or(cfg.seed).unwrap_or(DEFAULT_SEED),
            n_max: cli.n_max.or(cfg.n_max),
            cap: cli.cap.or(cfg.cap),
            cfg,
        })
    }
}

pub fn run(command: &Command, s: &Settings) -> Result<Outcome, CliError> {
    match command {
        Command::Simulate => simulate(s),
        Command::Classify => classify(s),
        Command::Complexity => complexity(s),
        Command::Attractor => attractor(s),
        Command::Verify { suite } => verify(suite, s),
        Command::Sweep => sweep(s),
    }
}

pub fn write_files(dir: &Path, files: &[(String, String)]) -> Result<(), CliError> {
    std::fs::create_dir_all(dir).map_err(|source| CliError::Write { path: dir.into(), source })?;
    for (name, body) in files {
        let path = dir.join(name);
        std::fs::write(&path, body).map_err(|source| CliError::Write { path, source })?;
    }
    Ok(())
}

fn table_and_slope(s: &Settings) -> Result<(Table, DirectionSlope), CliError> {
    let table = Table::new(s.cfg.require("a")?, s.cfg.require("b")?)?;
    Ok((table, DirectionSlope::new(s.cfg.require("t")?)))
}

/// The double rotation named by the config.
fn rotation(s: &Settings) -> Result<DoubleRotation, CliError> {
    match s.cfg.mode {
        Mode::CubicBk => Ok(bk_map()),
        Mode::Rational => {
            let (table, d) = table_and_slope(s)?;
            Ok(from_billiard_params(&table, &d)?)
        }
    }
}

fn simulate(s: &Settings) -> Result<Outcome, CliError> {
    if s.cfg.mode == Mode::CubicBk {
        return Err(CliError::Usage("simulate needs an explicit rational table".into()));
    }
    let (table, d) = table_and_slope(s)?;
    let y = s.cfg.require("y")?;
    let steps = s.cfg.steps.unwrap_or(40);
    let returns = s.cfg.returns.unwrap_or(20);
    let start = PhasePoint::new(table.a.clone(), y, &d, Quadrant::NE);

    let pts = trace(&table, &start, steps)?;
    let mut trace_csv = String::from("step,x,y\n");
    for (k, (x, y)) in pts.iter().enumerate() {
        trace_csv.push_str(&format!("{k},{x},{y}\n"));
    }

    let map = from_billiard_params(&table, &d)?;
    let mut ret_csv = String::from("k,u,mirror_bounce,double_rotation_u,agree\n");
    let mut p = start;
    let mut u = section_coordinate(&table, &d, &p);
    let mut agree = 0;
    for k in 0..returns {
        let (next, bounce) = folded_return(&table, &p)?;
        let nu = section_coordinate(&table, &d, &next);
        let (expected, _) = first_return_section(&table, &d, &u)?;
        let ok = nu == expected && nu == map.apply(&u) && bounce == (map.branch(&u) == 0);
        agree += usize::from(ok);
        ret_csv.push_str(&format!("{k},{u},{bounce},{expected},{ok}\n"));
        p = next;
        u = nu;
    }
    Ok(Outcome {
        files: vec![
            ("trace.csv".into(), trace_csv),
            ("trace.svg".into(), svg::trace_svg(&table, &pts)),
            ("returns.csv".into(), ret_csv),
        ],
        summary: format!(
            "traced {steps} incidences; {agree}/{returns} section returns agree with the double rotation {map}"
        ),
        ok: agree == returns,
    })
}

fn verified_up_to(levels: &LanguageLevels, pred: &ComplexityPrediction, n_max: usize) -> Option<usize> {
    match (0..=n_max).find(|&n| levels.p(n) as i64 != pred.eval(n)) {
        None => Some(n_max),
        Some(n) => n.checked_sub(1),
    }
}

fn direction_report(
    a: &Scalar,
    b: &Scalar,
    t: &Scalar,
    map: &DoubleRotation,
    class: &DirectionClass,
    n_max: usize,
) -> ClassifyReport {
    let pred = predict_complexity(class);
    let verified = pred.as_ref().map(|p| {
        let levels = build_language(map, n_max);
        verified_up_to(&levels, p, n_max)
    });
    ClassifyReport::new(a, b, t, class, pred.as_ref(), verified.flatten())
}

fn classify(s: &Settings) -> Result<Outcome, CliError> {
    let (a, b, t, map) = match s.cfg.mode {
        Mode::CubicBk => {
            let g = Scalar::gamma();
            let half = Scalar::ratio(1, 2);
            ((Scalar::one() - &g) * &half, &g * &half, g, bk_map())
        }
        Mode::Rational => {
            let a = s.cfg.a.clone().unwrap_or_else(|| Scalar::ratio(1, 4));
            if a != Scalar::ratio(1, 4) {
                return Err(CliError::Usage("classification is defined for a = 1/4".into()));
            }
            let (b, t) = (s.cfg.require("b")?, s.cfg.require("t")?);
            let map = quarter_map(&b, &DirectionSlope::new(t.clone()))?;
            (a, b, t, map)
        }
    };
    let n_max = s.n_max.unwrap_or(100);
    let class = classify_map(&map, s.cap.unwrap_or(n_max + 2));
    let report = direction_report(&a, &b, &t, &map, &class, n_max);
    let depth = s.cfg.tree_depth.unwrap_or(6);
    let summary = format!(
        "class {}; n0_e = {:?}, n0_f = {:?}; prediction verified up to n = {:?}",
        class.kind,
        class.n0_e(),
        class.n0_f(),
        report.verified_up_to
    );
    Ok(Outcome {
        files: vec![
            ("classify.json".into(), serde_json::to_string_pretty(&report).expect("plain data") + "\n"),
            ("tree_e.svg".into(), svg::tree_svg(&preimage_tree(&map, &Scalar::zero(), depth))),
            ("tree_f.svg".into(), svg::tree_svg(&preimage_tree(&map, &map.c, depth))),
        ],
        summary,
        ok: true,
    })
}

fn complexity(s: &Settings) -> Result<Outcome, CliError> {
    let n_max = s.n_max.unwrap_or(100);
    let (levels, q, extra) = match s.cfg.coding {
        Coding::Rotation => (build_language(&rotation(s)?, n_max + 2), None, String::new()),
        Coding::Section => {
            if s.cfg.mode == Mode::CubicBk {
                return Err(CliError::Usage("section coding needs a rational a = p/q".into()));
            }
            let a = s.cfg.require("a")?;
            let a = a.as_rational().ok_or_else(|| CliError::Usage("a must be rational".into()))?;
            let small = |v: &num_bigint::BigInt| u32::try_from(v).ok();
            let (p, q) = small(&a.numer())
                .zip(small(&a.denom()))
                .ok_or_else(|| CliError::Usage(format!("a = {a} is not p/q with small p, q")))?;
            let m = SectionMap::new(p, q, s.cfg.require("b")?, s.cfg.require("t")?)
                .map_err(|e| CliError::Usage(e.to_string()))?;
            let levels = build_language(&m, n_max + 2);
            let r = bound_report(q, &levels);
            let extra = format!(
                "; p(n) <= (2+2q)n {}, max s(n)-s(0) = {} (2q = {})",
                if r.p_violation.is_none() { "holds" } else { "fails" },
                r.max_s_excess,
                2 * q
            );
            (levels, Some(q), extra)
        }
    };
    let mut words = String::new();
    for n in 0..=n_max.min(10) {
        words.push_str(&levels.dump_words(n));
    }
    Ok(Outcome {
        summary: format!("p({n_max}) = {}, s({n_max}) = {}{extra}", levels.p(n_max), levels.s(n_max)),
        files: vec![("complexity.csv".into(), complexity_csv(&levels, q)), ("words.txt".into(), words)],
        ok: true,
    })
}

fn attractor(s: &Settings) -> Result<Outcome, CliError> {
    let map = rotation(s)?;
    let cap = s.cap.unwrap_or(200);
    let mut u = IntervalUnion::full();
    let mut measures = vec![u.measure()];
    let mut stable_at = None;
    for k in 1..=cap {
        let next = u.image(&map);
        let same = next == u;
        u = next;
        measures.push(u.measure());
        if same {
            stable_at = Some(k - 1);
            break;
        }
    }
    let status = match stable_at {
        Some(n) => format!("finite type: T^{n}[0,1) is invariant"),
        None => format!("no stabilisation within {cap} images"),
    };
    let json = serde_json::json!({
        "schema": "mirrorlab.attractor/1",
        "map": { "alpha": map.alpha, "beta": map.beta, "c": map.c },
        "stabilised_at": stable_at,
        "images": measures.len() - 1,
        "measure": u.measure(),
        "pieces": u,
    });
    Ok(Outcome {
        summary: format!("{status}; measure {}", u.measure()),
        files: vec![
            ("attractor_measures.csv".into(), measure_csv(&measures)),
            ("attractor.json".into(), serde_json::to_string_pretty(&json).expect("plain data") + "\n"),
            ("attractor.svg".into(), svg::interval_union_svg(&u, &[Scalar::zero(), map.c.clone()])),
        ],
        ok: true,
    })
}

fn verify(name: &str, s: &Settings) -> Result<Outcome, CliError> {
    let suites: Vec<Suite> = if name == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![name.parse().map_err(CliError::Usage)?]
    };
    let opts = SuiteOptions { seed: s.seed, n_max: s.n_max, cap: s.cap };
    let mut out = Outcome { ok: true, ..Default::default() };
    let mut lines = Vec::new();
    for suite in suites {
        let r = suite.run(&opts);
        out.ok &= r.passed;
        lines.push(r.to_text());
        out.files.push((format!("verify_{suite}.txt"), r.to_text()));
        out.files.push((
            format!("verify_{suite}.json"),
            serde_json::to_string_pretty(&r).expect("plain data") + "\n",
        ));
        out.files.extend(r.files.iter().cloned());
    }
    out.summary = lines.concat().trim_end().to_string();
    Ok(out)
}

fn sweep(s: &Settings) -> Result<Outcome, CliError> {
    if s.cfg.mode == Mode::CubicBk {
        return Err(CliError::Usage("sweep runs over rational (b, t) grids".into()));
    }
    let missing = |k: &str| CliError::Usage(format!("sweep needs `{k}` in the config"));
    let bs = s.cfg.b_values.clone().ok_or_else(|| missing("b_values"))?;
    let ts = s.cfg.t_values.clone().ok_or_else(|| missing("t_values"))?;
    let n_max = s.n_max.unwrap_or(100);
    let cap = s.cap.unwrap_or(n_max + 2);
    let a = Scalar::ratio(1, 4);
    let grid: Vec<(Scalar, Scalar)> =
        bs.iter().flat_map(|b| ts.iter().map(move |t| (b.clone(), t.clone()))).collect();
    let mut reports: Vec<ClassifyReport> = grid
        .par_iter()
        .map(|(b, t)| {
            let map = quarter_map(b, &DirectionSlope::new(t.clone()))?;
            let class = classify_map(&map, cap);
            Ok(direction_report(&a, b, t, &map, &class, n_max))
        })
        .collect::<Result<_, BilliardError>>()?;
    reports.sort_by(|x, y| (&x.b, &x.t).cmp(&(&y.b, &y.t)));
    let mut csv = String::from("b,t,class,n0_e,n0_f,verified_up_to\n");
    let opt = |v: Option<usize>| v.map_or(String::new(), |v| v.to_string());
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.b,
            r.t,
            r.class,
            opt(r.n0_e),
            opt(r.n0_f),
            opt(r.verified_up_to)
        ));
    }
    let mut counts = std::collections::BTreeMap::<&str, usize>::new();
    for r in &reports {
        *counts.entry(r.class.as_str()).or_default() += 1;
    }
    Ok(Outcome {
        summary: format!("{} directions classified: {counts:?}", reports.len()),
        files: vec![
            ("sweep.csv".into(), csv),
            ("sweep.json".into(), serde_json::to_string_pretty(&reports).expect("plain data") + "\n"),
        ],
        ok: true,
    })
}

/// Parses arguments, runs the verb, writes its files. Exit status 0 on
/// success, 1 when a verification claim failed, 2 on usage or I/O errors.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = Settings::resolve(&cli).and_then(|s| {
        let out = run(&cli.command, &s)?;
        write_files(&s.out_dir, &out.files)?;
        Ok((out, s.out_dir))
    });
    match result {
        Ok((out, dir)) => {
            println!("{}", out.summary);
            println!("wrote {} file(s) to {}", out.files.len(), dir.display());
            if out.ok {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
