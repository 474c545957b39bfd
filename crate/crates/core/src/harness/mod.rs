//! Running benchmark matrices, aggregating medians and writing reports.

mod config;
pub mod oracle;

pub use config::{ConfigError, FamilyRange, RunConfig};
pub use oracle::{oracle_congruence_closure, oracle_finite_model, OracleError, OracleVerdict};

use std::fmt::Write as _;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::benchgen::{lemma_for, sample, BenchError, Expected, Family, Instance};
use crate::calculus::is_variable_inactive;
use crate::orderings::Scheme;
use crate::saturation::{Limits, SearchPlan, Stats, Verdict};
use crate::theories::{clause_class_audit, cross_theory_violations, BuildOptions};

/// Version of the CSV layout, written in the first line of every report.
pub const CSV_SCHEMA: &str = "spdecide-suite/1";

/// Columns that depend on timing and are left out of golden comparisons.
pub const TIMING_COLUMNS: &[&str] = &["wall_ms", "median_ms"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Unsat,
    Sat,
    Fail,
}

impl RunStatus {
    pub fn name(self) -> &'static str {
        match self {
            RunStatus::Unsat => "UNSAT",
            RunStatus::Sat => "SAT",
            RunStatus::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunRecord {
    pub instance: String,
    pub family: Family,
    pub n: usize,
    pub index: usize,
    pub ordering: Scheme,
    pub expected: Expected,
    pub status: RunStatus,
    /// Why the run failed: `timeout`, `clause-cap`, or an error message.
    pub reason: Option<String>,
    pub wall: Duration,
    pub stats: Stats,
    pub branches: usize,
    /// Whether every proof replayed; `None` when nothing was replayed.
    pub proof_ok: Option<bool>,
    /// Clauses outside the lemma classes, for single-theory problems.
    pub class_violations: Option<usize>,
    /// Persistent clauses that are not variable-inactive.
    pub active_vars: Option<usize>,
    pub cross_theory: Option<usize>,
}

impl RunRecord {
    /// A definite verdict that contradicts the expected status, or a
    /// proof that does not replay.
    pub fn is_soundness_violation(&self) -> bool {
        matches!(
            (self.status, self.expected),
            (RunStatus::Sat, Expected::Valid) | (RunStatus::Unsat, Expected::Invalid)
        ) || self.proof_ok == Some(false)
    }

    fn failed(inst: &Instance, scheme: Scheme, reason: String, wall: Duration) -> RunRecord {
        RunRecord {
            instance: inst.name(),
            family: inst.family,
            n: inst.n,
            index: inst.index,
            ordering: scheme,
            expected: inst.expected,
            status: RunStatus::Fail,
            reason: Some(reason),
            wall,
            stats: Stats::default(),
            branches: 0,
            proof_ok: None,
            class_violations: None,
            active_vars: None,
            cross_theory: None,
        }
    }
}

/// Builds and solves one instance. Panics inside the prover are caught
/// and reported as a failed run.
pub fn run_instance(inst: &Instance, scheme: Scheme, cfg: &RunConfig) -> RunRecord {
    let start = Instant::now();
    match catch_unwind(AssertUnwindSafe(|| run_inner(inst, scheme, cfg))) {
        Ok(Ok(r)) => r,
        Ok(Err(msg)) => RunRecord::failed(inst, scheme, msg, start.elapsed()),
        Err(p) => {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            RunRecord::failed(inst, scheme, format!("crash: {msg}"), start.elapsed())
        }
    }
}

fn run_inner(inst: &Instance, scheme: Scheme, cfg: &RunConfig) -> Result<RunRecord, String> {
    let start = Instant::now();
    let mut opts = BuildOptions { nontrivial: cfg.nontrivial, ..Default::default() };
    if cfg.lemma_store_comm {
        opts.lemmas.extend(lemma_for(&inst.combination));
    }
    let problem = inst.build(scheme, &opts).map_err(|e| format!("error: {e}"))?;
    let plan = SearchPlan::for_scheme(cfg.plan.unwrap_or(scheme));
    let limits = Limits { timeout: Some(cfg.timeout), max_clauses: cfg.clause_cap };
    let sol = problem.solve(&plan, &limits);
    let wall = start.elapsed();
    let (status, reason) = match sol.verdict {
        Verdict::Unsatisfiable => (RunStatus::Unsat, None),
        Verdict::Satisfiable => (RunStatus::Sat, None),
        Verdict::ResourceOut(k) => (RunStatus::Fail, Some(k.name().to_string())),
    };
    let mut rec = RunRecord {
        instance: inst.name(),
        family: inst.family,
        n: inst.n,
        index: inst.index,
        ordering: scheme,
        expected: inst.expected,
        status,
        reason,
        wall,
        stats: sol.stats.clone(),
        branches: problem.branches.len(),
        proof_ok: None,
        class_violations: None,
        active_vars: None,
        cross_theory: None,
    };
    if cfg.replay && status == RunStatus::Unsat {
        let ok = sol.outcomes.iter().zip(&problem.branches).all(|(o, b)| {
            o.proof().is_some_and(|p| p.replay(&problem.ordering, Some(&b.clauses())).is_ok())
        });
        rec.proof_ok = Some(ok);
    }
    if cfg.audit {
        let owners = problem.symbol_owners();
        let sig = &problem.signature;
        let mut cross = 0;
        let mut active = 0;
        let mut classes = 0;
        for (o, b) in sol.outcomes.iter().zip(&problem.branches) {
            cross += cross_theory_violations(&o.clauses, |s| owners.get(&s).copied(), |s| sig.symbol(s).arity()).len();
            active += o.persistent().filter(|c| !is_variable_inactive(&c.literals, &problem.ordering)).count();
            if let [pres] = problem.presentations.as_slice() {
                classes += clause_class_audit(pres, o.persistent(), b.ac_bound.unwrap_or(0)).violations.len();
            }
        }
        rec.cross_theory = Some(cross);
        rec.active_vars = Some(active);
        if problem.presentations.len() == 1 && !cfg.lemma_store_comm && !cfg.nontrivial {
            rec.class_violations = Some(classes);
        }
    }
    Ok(rec)
}

/// Median of run times where a failure (`None`) counts as larger than
/// every success. Returns `None` (FAIL) when the median is a failure or
/// there are no runs.
pub fn median_time(times: &[Option<Duration>]) -> Option<Duration> {
    if times.is_empty() {
        return None;
    }
    let mut v: Vec<Option<Duration>> = times.to_vec();
    // None sorts last
    v.sort_by_key(|t| (t.is_none(), *t));
    let m = v.len() / 2;
    if v.len() % 2 == 1 {
        v[m]
    } else {
        Some((v[m - 1]? + v[m]?) / 2)
    }
}

/// One (family, n, ordering) point of a suite.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    pub family: Family,
    pub n: usize,
    pub ordering: Scheme,
    pub runs: usize,
    pub unsat: usize,
    pub sat: usize,
    pub fail: usize,
    pub median: Option<Duration>,
}

#[derive(Clone, Debug, Default)]
pub struct SuiteReport {
    pub records: Vec<RunRecord>,
    pub points: Vec<Point>,
}

impl SuiteReport {
    pub fn from_records(records: Vec<RunRecord>) -> SuiteReport {
        let mut points: Vec<Point> = Vec::new();
        let mut keys: Vec<(Family, usize, Scheme)> = Vec::new();
        for r in &records {
            let key = (r.family, r.n, r.ordering);
            if !keys.contains(&key) {
                keys.push(key);
            }
        }
        for (family, n, ordering) in keys {
            let rs: Vec<&RunRecord> =
                records.iter().filter(|r| r.family == family && r.n == n && r.ordering == ordering).collect();
            let count = |s: RunStatus| rs.iter().filter(|r| r.status == s).count();
            let times: Vec<Option<Duration>> =
                rs.iter().map(|r| (r.status != RunStatus::Fail).then_some(r.wall)).collect();
            points.push(Point {
                family,
                n,
                ordering,
                runs: rs.len(),
                unsat: count(RunStatus::Unsat),
                sat: count(RunStatus::Sat),
                fail: count(RunStatus::Fail),
                median: median_time(&times),
            });
        }
        SuiteReport { records, points }
    }

    pub fn violations(&self) -> impl Iterator<Item = &RunRecord> {
        self.records.iter().filter(|r| r.is_soundness_violation())
    }

    /// 0 when sound, 1 on any soundness violation.
    pub fn exit_code(&self) -> i32 {
        if self.violations().next().is_some() {
            1
        } else {
            0
        }
    }

    /// Per-instance rows.
    pub fn records_csv(&self) -> String {
        let mut w = csv_writer();
        w.write_record([
            "instance", "family", "n", "index", "ordering", "expected", "status", "reason", "wall_ms", "initial",
            "generated", "processed", "remaining", "unnecessary_pct", "proof_steps", "branches", "proof_ok",
            "class_violations", "active_vars", "cross_theory",
        ])
        .unwrap();
        let opt = |o: Option<usize>| o.map_or(String::new(), |v| v.to_string());
        for r in &self.records {
            let s = &r.stats;
            w.write_record([
                r.instance.clone(),
                r.family.name().into(),
                r.n.to_string(),
                r.index.to_string(),
                r.ordering.name().into(),
                r.expected.name().into(),
                r.status.name().into(),
                r.reason.clone().unwrap_or_default(),
                format!("{:.3}", r.wall.as_secs_f64() * 1e3),
                s.initial.to_string(),
                s.generated.to_string(),
                s.processed.to_string(),
                s.remaining.to_string(),
                format!("{:.1}", s.unnecessary_pct()),
                s.proof_steps.to_string(),
                r.branches.to_string(),
                r.proof_ok.map_or(String::new(), |b| b.to_string()),
                opt(r.class_violations),
                opt(r.active_vars),
                opt(r.cross_theory),
            ])
            .unwrap();
        }
        finish_csv(w)
    }

    /// Per-point rows with the median.
    pub fn points_csv(&self) -> String {
        let mut w = csv_writer();
        w.write_record(["family", "n", "ordering", "runs", "unsat", "sat", "fail", "median_ms"]).unwrap();
        for p in &self.points {
            w.write_record([
                p.family.name().into(),
                p.n.to_string(),
                p.ordering.name().into(),
                p.runs.to_string(),
                p.unsat.to_string(),
                p.sat.to_string(),
                p.fail.to_string(),
                p.median.map_or("FAIL".to_string(), |d| format!("{:.3}", d.as_secs_f64() * 1e3)),
            ])
            .unwrap();
        }
        finish_csv(w)
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(format!("# {CSV_SCHEMA}\n").into_bytes())
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
}

/// Drops the named columns from a CSV text (comment lines are kept).
pub fn strip_columns(csv_text: &str, drop: &[&str]) -> String {
    let mut lines = csv_text.lines().peekable();
    let mut out = String::new();
    while let Some(l) = lines.next_if(|l| l.starts_with('#')) {
        out.push_str(l);
        out.push('\n');
    }
    let rest: String = lines.map(|l| format!("{l}\n")).collect();
    let mut rd = csv::Reader::from_reader(rest.as_bytes());
    let headers = rd.headers().cloned().unwrap_or_default();
    let keep: Vec<usize> = (0..headers.len()).filter(|&i| !drop.contains(&&headers[i])).collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(keep.iter().map(|&i| &headers[i])).unwrap();
    for r in rd.records().flatten() {
        w.write_record(keep.iter().map(|&i| &r[i])).unwrap();
    }
    out + &finish_csv(w)
}

/// Text for gnuplot: one block per family (separated by two blank
/// lines), column 1 is `n`, then one median column (seconds) per
/// ordering. Failed medians are written as `NaN`, which gnuplot skips.
pub fn emit_plot_data(report: &SuiteReport) -> String {
    let mut out = String::from("# median run time in seconds; NaN = FAIL\n");
    let mut families: Vec<Family> = Vec::new();
    let mut orderings: Vec<Scheme> = Vec::new();
    for p in &report.points {
        if !families.contains(&p.family) {
            families.push(p.family);
        }
        if !orderings.contains(&p.ordering) {
            orderings.push(p.ordering);
        }
    }
    for (bi, f) in families.iter().enumerate() {
        if bi > 0 {
            out.push_str("\n\n");
        }
        let _ = write!(out, "# {}\n# n", f.name());
        for o in &orderings {
            let _ = write!(out, " {}", o.name());
        }
        out.push('\n');
        let mut ns: Vec<usize> = report.points.iter().filter(|p| p.family == *f).map(|p| p.n).collect();
        ns.dedup();
        for n in ns {
            let _ = write!(out, "{n}");
            for o in &orderings {
                let m = report.points.iter().find(|p| p.family == *f && p.n == n && p.ordering == *o);
                match m.and_then(|p| p.median) {
                    Some(d) => {
                        let _ = write!(out, " {:.6}", d.as_secs_f64());
                    }
                    None => out.push_str(" NaN"),
                }
            }
            out.push('\n');
        }
    }
    out
}

/// Generates every instance of the configuration, in a fixed order.
pub fn suite_instances(cfg: &RunConfig) -> Result<Vec<Instance>, BenchError> {
    let mut out = Vec::new();
    for fr in &cfg.families {
        let k = (fr.family == Family::CircularQueue).then_some(cfg.k);
        for &n in &fr.sizes {
            out.extend(sample(fr.family, n, k, cfg.count, cfg.seed)?);
        }
    }
    Ok(out)
}

/// Runs the whole matrix on a worker pool, one saturation per worker at
/// a time. Records come back in generation order.
pub fn run_suite(cfg: &RunConfig) -> Result<SuiteReport, BenchError> {
    let instances = suite_instances(cfg)?;
    let jobs: Vec<(&Instance, Scheme)> =
        instances.iter().flat_map(|i| cfg.orderings.iter().map(move |&s| (i, s))).collect();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cfg.jobs).build().expect("thread pool");
    let records = pool.install(|| jobs.par_iter().map(|(i, s)| run_instance(i, *s, cfg)).collect());
    Ok(SuiteReport::from_records(records))
}

/// Least-squares fit of `y = c * x^e` on log-log data; returns `(e, c)`.
pub fn fit_power_law(points: &[(f64, f64)]) -> Option<(f64, f64)> {
    let pts: Vec<(f64, f64)> = points.iter().filter(|(x, y)| *x > 0.0 && *y > 0.0).map(|(x, y)| (x.ln(), y.ln())).collect();
    let n = pts.len() as f64;
    if pts.len() < 2 {
        return None;
    }
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    let e = sxy / sxx;
    Some((e, (my - e * mx).exp()))
}

/// Least-squares fit of `y = a + c·x^e`; returns `(e, c, a)`.
///
/// The exponent is searched on a grid over `(0, 4]` and refined once;
/// `a` and `c` are solved exactly for each candidate.
pub fn fit_offset_power_law(points: &[(f64, f64)]) -> Option<(f64, f64, f64)> {
    if points.len() < 3 || points.iter().any(|p| p.0 <= 0.0) {
        return None;
    }
    let solve = |e: f64| {
        let n = points.len() as f64;
        let xs: Vec<f64> = points.iter().map(|p| p.0.powf(e)).collect();
        let mx = xs.iter().sum::<f64>() / n;
        let my = points.iter().map(|p| p.1).sum::<f64>() / n;
        let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
        let sxy: f64 = xs.iter().zip(points).map(|(x, p)| (x - mx) * (p.1 - my)).sum();
        if sxx == 0.0 {
            return None;
        }
        let c = sxy / sxx;
        let a = my - c * mx;
        let sse: f64 = xs.iter().zip(points).map(|(x, p)| (a + c * x - p.1).powi(2)).sum();
        Some((sse, e, c, a))
    };
    let best = |lo: f64, step: f64, steps: usize| {
        (0..=steps)
            .filter_map(|i| solve(lo + step * i as f64))
            .min_by(|x, y| x.0.total_cmp(&y.0))
    };
    let (_, e0, ..) = best(0.01, 0.01, 399)?;
    let (_, e, c, a) = best((e0 - 0.01).max(1e-4), 1e-4, 200)?;
    Some((e, c, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ms(v: u64) -> Option<Duration> {
        Some(Duration::from_millis(v))
    }

    #[test]
    fn median_with_failures() {
        // 5 of 9 fail: the median is a failure
        let mut t = vec![None; 5];
        t.extend([ms(1), ms(2), ms(3), ms(4)]);
        assert_eq!(median_time(&t), None);
        // 4 of 9 fail: the median is the largest success
        let mut t = vec![None; 4];
        t.extend([ms(5), ms(1), ms(2), ms(3), ms(4)]);
        assert_eq!(median_time(&t), ms(5));
        assert_eq!(median_time(&[ms(1), ms(3)]), ms(2));
        assert_eq!(median_time(&[ms(1), None]), None);
        assert_eq!(median_time(&[]), None);
    }

    #[test]
    fn power_law_fit() {
        let pts: Vec<(f64, f64)> = (2..10).map(|n| (n as f64, 3.0 * (n as f64).powi(2))).collect();
        let (e, c) = fit_power_law(&pts).unwrap();
        assert!((e - 2.0).abs() < 1e-9 && (c - 3.0).abs() < 1e-9);
    }

    #[test]
    fn offset_power_law_fit() {
        let pts: Vec<(f64, f64)> = (4..=15).map(|n| (n as f64, 7.0 + 0.5 * (n as f64).powf(2.0))).collect();
        let (e, c, a) = fit_offset_power_law(&pts).unwrap();
        assert!((e - 2.0).abs() < 1e-3 && (c - 0.5).abs() < 1e-2 && (a - 7.0).abs() < 0.1);
        let pts: Vec<(f64, f64)> = (4..=15).map(|n| (n as f64, 24.0 + 5.0 * n as f64)).collect();
        assert!((fit_offset_power_law(&pts).unwrap().0 - 1.0).abs() < 1e-3);
        assert_eq!(fit_offset_power_law(&pts[..2]), None);
    }

    #[test]
    fn empty_plot_is_header_only() {
        let out = emit_plot_data(&SuiteReport::default());
        assert_eq!(out.lines().count(), 1);
        assert!(out.starts_with('#'));
    }

    #[test]
    fn strip_timing() {
        let text = "# x\na,wall_ms,b\n1,2.5,3\n";
        assert_eq!(strip_columns(text, TIMING_COLUMNS), "# x\na,b\n1,3\n");
    }
}
