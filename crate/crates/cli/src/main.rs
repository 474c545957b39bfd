use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use spdecide::benchgen::{emit_native, emit_tff, lemma_for, parse_native, sample, Expected, Family};
use spdecide::harness::{emit_plot_data, run_instance, run_suite, RunConfig, RunStatus};
use spdecide::orderings::Scheme;
use spdecide::saturation::{Limits, SearchPlan, Verdict};
use spdecide::theories::{build_problem, BuildOptions};

/// Exit codes: 0 ok, 1 soundness violation, 2 resource or configuration
/// error.
const EXIT_UNSOUND: u8 = 1;
const EXIT_RESOURCE: u8 = 2;

#[derive(Parser)]
#[command(name = "spdecide", version, about = "Ground satisfiability modulo data-structure theories by superposition")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Native,
    Tff,
}

#[derive(Clone, Copy, ValueEnum)]
enum Ordering {
    GoodLpo,
    StdKbo,
}

impl From<Ordering> for Scheme {
    fn from(o: Ordering) -> Scheme {
        match o {
            Ordering::GoodLpo => Scheme::GoodLpo,
            Ordering::StdKbo => Scheme::StdKbo,
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate benchmark instances.
    Gen {
        family: Family,
        #[arg(long)]
        n: usize,
        /// Queue length for circular_queue.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, value_enum, default_value = "native")]
        format: Format,
        /// Precedence recorded in native files.
        #[arg(long, value_enum, default_value = "good-lpo")]
        ordering: Ordering,
        /// Write one file per instance here instead of printing.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Decide a problem file in the native format.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "good-lpo")]
        ordering: Ordering,
        /// Seconds.
        #[arg(long, default_value_t = 150.0)]
        timeout: f64,
        #[arg(long, default_value_t = 1_000_000)]
        clause_cap: usize,
        #[arg(long)]
        lemma_store_comm: bool,
        #[arg(long)]
        nontrivial: bool,
        /// Print the refutation.
        #[arg(long)]
        proof: bool,
    },
    /// Run a benchmark matrix described by a key = value file.
    Suite {
        config: PathBuf,
        /// Directory for records.csv, points.csv and plot.dat.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Run one instance and check its saturated clauses.
    Audit {
        family: Family,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, value_enum, default_value = "good-lpo")]
        ordering: Ordering,
        #[arg(long, default_value_t = 150.0)]
        timeout: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RESOURCE)
        }
    }
}

fn timeout(secs: f64) -> Result<Duration> {
    if !(secs > 0.0 && secs.is_finite()) {
        bail!("timeout must be positive");
    }
    Ok(Duration::from_secs_f64(secs))
}

fn run(cli: Cli) -> Result<u8> {
    match cli.cmd {
        Cmd::Gen { family, n, k, seed, count, format, ordering, out } => {
            let insts = sample(family, n, k, count, seed)?;
            if let Some(dir) = &out {
                fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            }
            for inst in &insts {
                let (text, ext) = match format {
                    Format::Native => (emit_native(inst, ordering.into())?, "p"),
                    Format::Tff => (emit_tff(inst), "tff"),
                };
                match &out {
                    Some(dir) => {
                        let path = dir.join(format!("{}.{ext}", inst.name()));
                        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
                        println!("{}", path.display());
                    }
                    None => print!("{text}"),
                }
            }
            Ok(0)
        }
        Cmd::Solve { file, ordering, timeout: t, clause_cap, lemma_store_comm, nontrivial, proof } => {
            let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let pf = parse_native(&text)?;
            let scheme: Scheme = ordering.into();
            let mut opts = BuildOptions { nontrivial, ..Default::default() };
            if lemma_store_comm {
                opts.lemmas.extend(lemma_for(&pf.combination));
            }
            let mut problem = build_problem(&pf.combination, &pf.literals, scheme, &opts)?;
            if let Some(ord) = pf.recorded_ordering(&problem.signature, scheme) {
                problem.ordering = ord;
            }
            let limits = Limits { timeout: Some(timeout(t)?), max_clauses: clause_cap };
            let sol = problem.solve(&SearchPlan::for_scheme(scheme), &limits);
            let s = &sol.stats;
            println!("{}: {}", pf.name(), sol.verdict.name());
            println!(
                "initial {} generated {} processed {} remaining {} unnecessary {:.1}% time {:.3}s",
                s.initial,
                s.generated,
                s.processed,
                s.remaining,
                s.unnecessary_pct(),
                s.elapsed.as_secs_f64()
            );
            if proof && sol.verdict == Verdict::Unsatisfiable {
                for (o, b) in sol.outcomes.iter().zip(&problem.branches) {
                    if let Some(p) = o.proof() {
                        print!("{}", p.display(&problem.signature));
                        match p.replay(&problem.ordering, Some(&b.clauses())) {
                            Ok(()) => println!("% proof replayed"),
                            Err(e) => {
                                println!("% replay failed: {e}");
                                return Ok(EXIT_UNSOUND);
                            }
                        }
                    }
                }
            }
            Ok(match (sol.verdict, pf.expected()) {
                (Verdict::Satisfiable, Some(Expected::Valid)) | (Verdict::Unsatisfiable, Some(Expected::Invalid)) => {
                    eprintln!("verdict contradicts the expected status");
                    EXIT_UNSOUND
                }
                (Verdict::ResourceOut(_), _) => EXIT_RESOURCE,
                _ => 0,
            })
        }
        Cmd::Suite { config, out } => {
            let text = fs::read_to_string(&config).with_context(|| format!("reading {}", config.display()))?;
            let cfg = RunConfig::parse(&text)?;
            let report = run_suite(&cfg)?;
            fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
            fs::write(out.join("records.csv"), report.records_csv())?;
            fs::write(out.join("points.csv"), report.points_csv())?;
            fs::write(out.join("plot.dat"), emit_plot_data(&report))?;
            for p in &report.points {
                let median = p.median.map_or("FAIL".to_string(), |d| format!("{:.3}s", d.as_secs_f64()));
                println!(
                    "{:<18} n={:<3} {:<8} unsat {} sat {} fail {} median {}",
                    p.family.name(),
                    p.n,
                    p.ordering.name(),
                    p.unsat,
                    p.sat,
                    p.fail,
                    median
                );
            }
            for r in report.violations() {
                eprintln!("soundness violation: {} ({}) gave {}", r.instance, r.ordering, r.status.name());
            }
            Ok(report.exit_code() as u8)
        }
        Cmd::Audit { family, n, k, seed, ordering, timeout: t } => {
            let cfg = RunConfig { audit: true, timeout: timeout(t)?, ..Default::default() };
            let inst = sample(family, n, k, 1, seed)?.remove(0);
            let r = run_instance(&inst, ordering.into(), &cfg);
            let show = |o: Option<usize>| o.map_or("n/a".to_string(), |v| v.to_string());
            println!("{}: {}", r.instance, r.status.name());
            println!("clause-class violations: {}", show(r.class_violations));
            println!("variable-active persistent clauses: {}", show(r.active_vars));
            println!("cross-theory violations: {}", show(r.cross_theory));
            if r.is_soundness_violation()
                || r.class_violations.unwrap_or(0) > 0
                || r.active_vars.unwrap_or(0) > 0
                || r.cross_theory.unwrap_or(0) > 0
            {
                return Ok(EXIT_UNSOUND);
            }
            Ok(if r.status == RunStatus::Fail { EXIT_RESOURCE } else { 0 })
        }
    }
}
