//! Verification suites comparing every fast method and closed form with
//! brute force over a bounded envelope of the diagram.
//!
//! Hard checks must pass. Soft checks compare printed formulas and rule
//! variants that are known to disagree in places; their failures become
//! discrepancy records and do not fail a run.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cache::{eulerian_tables, FloorCache};
use crate::diagram::{DiagramParams, VertexLabel};
use crate::error::{out_of_range, Error, Result};
use crate::eulerian::{eulerian_inductive, initial_closed_form};
use crate::fibonacci::{
    constancy_runs, fib_closed_form, fib_stages, interval_classes, printed_interval_classes, step_terms, IntervalClass,
    IntervalKind, StepSource,
};
use crate::genfun::{genfun_for_class, recurrence_check, series_coefficients, SequenceClass};
use crate::hook::{j_class, pow};
use crate::paths::{count_paths, count_paths_full, enumerate_paths, pre_stage_multiplicity, rewalk};
use crate::stats::{
    descent_set, inversion_set, predicted_descent_set, predicted_descents_special, special_path_t, DescentRules,
};
use crate::IntPolynomial;

pub const SCHEMA_VERSION: u32 = 1;

/// Runs whose estimated path count exceeds this need an explicit override.
pub const DEFAULT_PATH_BUDGET: u128 = 200_000_000;

/// Generating-function terms checked per sequence.
pub const SERIES_TERMS: usize = 7;

/// The worked example at `p = 5, k = 2, s = 3`: ranges of `l` with the value printed for them.
pub const WORKED_EXAMPLE_STAGE3: [(u64, u64, u64); 7] = [
    (0, 0, 202),
    (1, 6, 206),
    (7, 9, 210),
    (10, 11, 206),
    (12, 12, 186),
    (13, 19, 190),
    (20, 25, 194),
];

/// The worked step to `s = 4, l = 10`: predecessor values, the two descent terms and the total.
pub const WORKED_EXAMPLE_STEP: ([u64; 5], u64, u64, u64) = ([206, 210, 186, 190, 194], 300, 240, 1526);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Diagram,
    Paths,
    Stats,
    Eulerian,
    Fibonacci,
    Genfun,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Diagram,
        Suite::Paths,
        Suite::Stats,
        Suite::Eulerian,
        Suite::Fibonacci,
        Suite::Genfun,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Diagram => "diagram",
            Suite::Paths => "paths",
            Suite::Stats => "stats",
            Suite::Eulerian => "eulerian",
            Suite::Fibonacci => "fibonacci",
            Suite::Genfun => "genfun",
        }
    }

    /// `all` or a comma-separated list of suite names.
    pub fn parse_list(s: &str) -> Result<Vec<Suite>> {
        let mut out = Vec::new();
        for part in s.split(',').map(str::trim) {
            if part == "all" {
                out.extend(Suite::ALL);
            } else {
                out.push(part.parse()?);
            }
        }
        out.sort();
        out.dedup();
        Ok(out)
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Unsupported(format!("unknown suite {s:?}")))
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Hard,
    Soft,
}

/// One check over one slice of the envelope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReportRow {
    pub schema_version: u32,
    pub record: &'static str,
    pub suite: Suite,
    pub check: String,
    pub severity: Severity,
    pub p: u64,
    pub k: Option<u32>,
    pub floor: Option<u32>,
    pub s: Option<u32>,
    pub cases: u64,
    pub failures: u64,
    pub pass: bool,
    pub detail: String,
}

/// A single cell where a printed formula and the oracle differ.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Discrepancy {
    pub schema_version: u32,
    pub record: &'static str,
    pub check: String,
    pub p: u64,
    pub k: u32,
    pub s: u32,
    pub l: u64,
    pub oracle: String,
    pub closed_form: String,
    pub formula_case: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct Report {
    pub rows: Vec<ReportRow>,
    pub discrepancies: Vec<Discrepancy>,
}

impl Report {
    pub fn hard_failures(&self) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(|r| r.severity == Severity::Hard && !r.pass)
    }

    pub fn passed(&self) -> bool {
        self.hard_failures().next().is_none()
    }

    /// Rows, then discrepancies, one JSON object per line.
    pub fn to_ndjson(&self) -> String {
        let mut out = String::new();
        for r in &self.rows {
            out.push_str(&serde_json::to_string(r).expect("rows serialize"));
            out.push('\n');
        }
        for d in &self.discrepancies {
            out.push_str(&serde_json::to_string(d).expect("discrepancies serialize"));
            out.push('\n');
        }
        out
    }

    pub fn find(&self, suite: Suite, check: &str) -> impl Iterator<Item = &ReportRow> {
        let check = check.to_string();
        self.rows.iter().filter(move |r| r.suite == suite && r.check == check)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyConfig {
    pub p: u64,
    pub ks: Vec<u32>,
    pub max_floor: u32,
    pub suites: Vec<Suite>,
    pub parallelism: Option<usize>,
    pub cache_dir: Option<PathBuf>,
}

impl VerifyConfig {
    pub fn new(p: u64, ks: Vec<u32>, max_floor: u32, suites: Vec<Suite>) -> Self {
        VerifyConfig {
            p,
            ks,
            max_floor,
            suites,
            parallelism: None,
            cache_dir: None,
        }
    }

    pub fn validate(&self) -> Result<DiagramParams> {
        let params = DiagramParams::new(self.p, self.max_floor)?;
        if self.ks.is_empty() {
            return Err(Error::Unsupported("at least one class k is required".into()));
        }
        if self.suites.is_empty() {
            return Err(Error::Unsupported("at least one suite is required".into()));
        }
        let needs_class_floor = self.suites.iter().any(|s| *s != Suite::Diagram && *s != Suite::Genfun);
        let k_max = *self.ks.iter().max().expect("nonempty");
        if needs_class_floor && self.max_floor < 2 * k_max + 2 {
            return Err(out_of_range(
                "max_floor",
                self.max_floor,
                format!("[{}, ..) for k = {k_max}", 2 * k_max + 2),
            ));
        }
        pow(self.p, k_max + 1)?;
        Ok(params)
    }

    pub fn estimated_paths(&self) -> u128 {
        estimated_paths(self.p, &self.ks, self.max_floor)
    }
}

/// `Σ_k (p-1) p^(s-1) p^k` with `s` the top stage of class `k` below `max_floor`.
pub fn estimated_paths(p: u64, ks: &[u32], max_floor: u32) -> u128 {
    let p = u128::from(p);
    ks.iter()
        .map(|&k| {
            let top = max_floor / 2;
            if top <= k {
                return 0;
            }
            let s = top - k;
            p.checked_pow(s - 1 + k).map_or(u128::MAX, |x| x.saturating_mul(p - 1))
        })
        .fold(0u128, u128::saturating_add)
}

/// Everything brute force yields for one class vertex, from one pass over its paths.
#[derive(Clone, Debug)]
struct VertexSummary {
    v: VertexLabel,
    paths: u64,
    rewalk_failures: u64,
    max_des: u64,
    eulerian: IntPolynomial,
    fib: BigInt,
    sign: i64,
    rule_mismatches: [u64; 4],
    special_checked: u64,
    special_failures: u64,
}

fn summarize(v: &VertexLabel) -> Result<VertexSummary> {
    let hook = v.hook();
    let mut counts: Vec<u64> = Vec::new();
    let mut s = VertexSummary {
        v: *v,
        paths: 0,
        rewalk_failures: 0,
        max_des: 0,
        eulerian: IntPolynomial::zero(),
        fib: BigInt::zero(),
        sign: 0,
        rule_mismatches: [0; 4],
        special_checked: 0,
        special_failures: 0,
    };
    let mut fib = 0u64;
    for path in enumerate_paths(v) {
        s.paths += 1;
        if rewalk(&path)? != hook {
            s.rewalk_failures += 1;
        }
        let d = descent_set(&path)?;
        let des = d.len();
        if counts.len() <= des {
            counts.resize(des + 1, 0);
        }
        counts[des] += 1;
        fib += des as u64;
        s.max_des = s.max_des.max(des as u64);
        s.sign += if inversion_set(&path)?.len() % 2 == 0 { 1 } else { -1 };
        for (i, rules) in DescentRules::ALL.iter().enumerate() {
            if predicted_descent_set(&path, rules)? != d {
                s.rule_mismatches[i] += 1;
            }
        }
        if let Some(t) = special_path_t(&path)? {
            s.special_checked += 1;
            let last = path.last_position();
            let mut stage = 2;
            while 2 * stage < last {
                let (odd, even) = predicted_descents_special(v.p, t, stage)?;
                if d.contains(&(2 * stage - 1)) != odd || d.contains(&(2 * stage)) != even {
                    s.special_failures += 1;
                    break;
                }
                stage += 1;
            }
        }
    }
    s.eulerian = IntPolynomial::from_coeffs(counts.into_iter().map(BigInt::from).collect());
    s.fib = BigInt::from(fib);
    Ok(s)
}

/// Class-`k` vertices on floors `2k+2 ..= max_floor`, keyed by floor and ordered by `l`.
type ClassSummaries = BTreeMap<u32, Vec<VertexSummary>>;

fn summaries_for(params: &DiagramParams, k: u32) -> Result<ClassSummaries> {
    let mut out = BTreeMap::new();
    for floor in 2 * k + 2..=params.max_floor() {
        let n = params.subset_len(floor, k as i32);
        let vs: Vec<VertexSummary> = (0..n)
            .into_par_iter()
            .map(|l| summarize(&params.vertex(floor, k as i32, l)?))
            .collect::<Result<_>>()?;
        out.insert(floor, vs);
    }
    Ok(out)
}

struct Ctx<'a> {
    params: DiagramParams,
    p: u64,
    cache: Option<&'a FloorCache>,
    report: Report,
}

impl Ctx<'_> {
    #[allow(clippy::too_many_arguments)]
    fn row(
        &mut self,
        suite: Suite,
        check: &str,
        severity: Severity,
        k: Option<u32>,
        floor: Option<u32>,
        s: Option<u32>,
        cases: u64,
        failures: u64,
        detail: impl Into<String>,
    ) {
        self.report.rows.push(ReportRow {
            schema_version: SCHEMA_VERSION,
            record: "check",
            suite,
            check: check.to_string(),
            severity,
            p: self.p,
            k,
            floor,
            s,
            cases,
            failures,
            pass: failures == 0,
            detail: detail.into(),
        });
    }

    #[allow(clippy::too_many_arguments)]
    fn discrepancy(
        &mut self,
        check: &str,
        k: u32,
        s: u32,
        l: u64,
        oracle: impl fmt::Display,
        closed_form: impl fmt::Display,
        case: impl Into<String>,
    ) {
        self.report.discrepancies.push(Discrepancy {
            schema_version: SCHEMA_VERSION,
            record: "discrepancy",
            check: check.to_string(),
            p: self.p,
            k,
            s,
            l,
            oracle: oracle.to_string(),
            closed_form: closed_form.to_string(),
            formula_case: case.into(),
        });
    }
}

fn stage_of(floor: u32, k: u32) -> u32 {
    floor.div_ceil(2) - k
}

/// Run the selected suites. Only hard checks decide [`Report::passed`].
pub fn run(config: &VerifyConfig) -> Result<Report> {
    let params = config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.parallelism.unwrap_or(0))
        .build()
        .map_err(|e| Error::Unsupported(format!("thread pool: {e}")))?;
    let cache = config.cache_dir.clone().map(FloorCache::new);
    pool.install(|| run_in_pool(config, params, cache.as_ref()))
}

fn run_in_pool(config: &VerifyConfig, params: DiagramParams, cache: Option<&FloorCache>) -> Result<Report> {
    let mut ctx = Ctx {
        params,
        p: config.p,
        cache,
        report: Report::default(),
    };
    let mut ks = config.ks.clone();
    ks.sort();
    ks.dedup();
    let has = |s: Suite| config.suites.contains(&s);
    if has(Suite::Diagram) {
        diagram_suite(&mut ctx)?;
    }
    let needs_paths = [Suite::Paths, Suite::Stats, Suite::Eulerian, Suite::Fibonacci]
        .iter()
        .any(|s| has(*s));
    for &k in &ks {
        let sums = if needs_paths {
            summaries_for(&ctx.params, k)?
        } else {
            BTreeMap::new()
        };
        if has(Suite::Paths) {
            paths_suite(&mut ctx, k, &sums)?;
        }
        if has(Suite::Stats) {
            stats_suite(&mut ctx, k, &sums)?;
        }
        if has(Suite::Eulerian) {
            eulerian_suite(&mut ctx, k, &sums)?;
        }
        if has(Suite::Fibonacci) {
            fibonacci_suite(&mut ctx, k, &sums)?;
        }
        if has(Suite::Genfun) {
            genfun_suite(&mut ctx, k, &sums)?;
        }
    }
    Ok(ctx.report)
}

fn diagram_suite(ctx: &mut Ctx) -> Result<()> {
    let params = ctx.params;
    for floor in 1..=params.max_floor() {
        let vs = params.vertices_on_floor(floor)?;
        let expected: u64 = std::iter::once(-1)
            .chain(params.classes_on_floor(floor).into_iter().map(|k| k as i32))
            .map(|c| params.subset_len(floor, c))
            .sum();
        let bad_size = vs.iter().filter(|v| v.hook().size() != v.size).count() as u64;
        let failures = u64::from(vs.len() as u64 != expected) + bad_size;
        ctx.row(
            Suite::Diagram,
            "floor-population",
            Severity::Hard,
            None,
            Some(floor),
            None,
            vs.len() as u64,
            failures,
            format!("{} vertices, expected {expected}", vs.len()),
        );
        if floor == params.max_floor() {
            continue;
        }
        let edges = params.edges_between(floor)?;
        let inconsistent = edges.par_iter().filter(|e| !e.is_consistent()).count() as u64;
        let mut by_upper: BTreeMap<VertexLabel, Vec<(VertexLabel, crate::hook::Block)>> = BTreeMap::new();
        for e in &edges {
            by_upper.entry(e.upper).or_default().push((e.lower, e.block));
        }
        let uppers = params.vertices_on_floor(floor + 1)?;
        let mismatched = uppers
            .par_iter()
            .map(|u| -> Result<bool> {
                let mut pred = params.predecessors(u)?;
                pred.sort();
                let mut seen = by_upper.get(u).cloned().unwrap_or_default();
                seen.sort();
                Ok(pred.is_empty() || pred != seen)
            })
            .collect::<Result<Vec<bool>>>()?
            .into_iter()
            .filter(|&b| b)
            .count() as u64;
        ctx.row(
            Suite::Diagram,
            "edge-consistency",
            Severity::Hard,
            None,
            Some(floor),
            None,
            edges.len() as u64,
            inconsistent + mismatched,
            format!("{inconsistent} blocks off, {mismatched} predecessor lists disagree"),
        );
    }
    Ok(())
}

fn paths_suite(ctx: &mut Ctx, k: u32, sums: &ClassSummaries) -> Result<()> {
    let (p, params) = (ctx.p, ctx.params);
    let pk = pow(p, k)?;
    if 2 * k < params.max_floor() {
        let mut bad = 0;
        for i in 0..pk * (p - 1) {
            if !pre_stage_multiplicity(&params, k, i)?.is_one() {
                bad += 1;
            }
        }
        ctx.row(
            Suite::Paths,
            "pre-stage-multiplicity",
            Severity::Hard,
            Some(k),
            Some(2 * k + 1),
            None,
            pk * (p - 1),
            bad,
            "paths from floor 1 to each start vertex",
        );
    }
    for (&floor, vs) in sums {
        let s = stage_of(floor, k);
        let exponent = if floor % 2 == 0 { s - 1 } else { s - 2 };
        let formula = BigInt::from(p - 1) * BigInt::from(p).pow(exponent);
        let bad = vs
            .iter()
            .filter(|x| BigInt::from(x.paths) != count_paths(&x.v) || BigInt::from(x.paths) != formula)
            .count() as u64;
        ctx.row(
            Suite::Paths,
            "path-count",
            Severity::Hard,
            Some(k),
            Some(floor),
            Some(s),
            vs.len() as u64,
            bad,
            format!("enumeration, dynamic programming and {formula} agree"),
        );
        let rewalk_bad: u64 = vs.iter().map(|x| x.rewalk_failures).sum();
        let total: u64 = vs.iter().map(|x| x.paths).sum();
        ctx.row(
            Suite::Paths,
            "rewalk",
            Severity::Hard,
            Some(k),
            Some(floor),
            Some(s),
            total,
            rewalk_bad,
            "blocks carry the start hook onto the end vertex",
        );
        let v0 = vs[0].v;
        let full = count_paths_full(&params, &v0)?;
        ctx.row(
            Suite::Paths,
            "full-diagram-count",
            Severity::Hard,
            Some(k),
            Some(floor),
            Some(s),
            1,
            u64::from(full != BigInt::from(vs[0].paths)),
            format!("l = 0: {full} paths from floor 1"),
        );
    }
    Ok(())
}

fn stats_suite(ctx: &mut Ctx, k: u32, sums: &ClassSummaries) -> Result<()> {
    let h = (ctx.p - 1) / 2;
    for (&floor, vs) in sums {
        let s = stage_of(floor, k);
        if floor == 2 * k + 2 {
            let bad = vs.iter().filter(|x| x.max_des > 1 || x.fib != BigInt::from(h)).count() as u64;
            ctx.row(
                Suite::Stats,
                "first-floor-descents",
                Severity::Hard,
                Some(k),
                Some(floor),
                Some(s),
                vs.len() as u64,
                bad,
                format!("each path has at most one descent, {h} in total"),
            );
        }
        let bad = vs.iter().filter(|x| x.sign != 0).count() as u64;
        ctx.row(
            Suite::Stats,
            "sign-balance",
            Severity::Hard,
            Some(k),
            Some(floor),
            Some(s),
            vs.len() as u64,
            bad,
            "signed path count is zero",
        );
        let total: u64 = vs.iter().map(|x| x.paths).sum();
        for (i, rules) in DescentRules::ALL.iter().enumerate() {
            let bad: u64 = vs.iter().map(|x| x.rule_mismatches[i]).sum();
            let adjudicated = *rules == DescentRules::ADJUDICATED;
            ctx.row(
                Suite::Stats,
                if adjudicated {
                    "descent-rules"
                } else {
                    "descent-rules-variant"
                },
                if adjudicated { Severity::Hard } else { Severity::Soft },
                Some(k),
                Some(floor),
                Some(s),
                total,
                bad,
                rules.label(),
            );
        }
        let checked: u64 = vs.iter().map(|x| x.special_checked).sum();
        let bad: u64 = vs.iter().map(|x| x.special_failures).sum();
        ctx.row(
            Suite::Stats,
            "constant-step-paths",
            Severity::Hard,
            Some(k),
            Some(floor),
            Some(s),
            checked,
            bad,
            "descents of paths repeating one t",
        );
    }
    Ok(())
}

fn eulerian_suite(ctx: &mut Ctx, k: u32, sums: &ClassSummaries) -> Result<()> {
    let (p, params) = (ctx.p, ctx.params);
    let top = params.max_floor();
    let inductive = eulerian_tables(&params, k, top, ctx.cache)?;
    for table in &inductive {
        let vs = &sums[&table.floor];
        let s = stage_of(table.floor, k);
        let bad = vs
            .iter()
            .filter(|x| table.by_l.get(&x.v.l_index) != Some(&x.eulerian))
            .count() as u64;
        ctx.row(
            Suite::Eulerian,
            "inductive-vs-bruteforce",
            Severity::Hard,
            Some(k),
            Some(table.floor),
            Some(s),
            vs.len() as u64,
            bad,
            DescentRules::ADJUDICATED.label(),
        );
        if table.floor % 2 == 0 {
            let bad = vs
                .iter()
                .filter(|x| x.eulerian.derivative().eval(&BigInt::one()) != x.fib)
                .count() as u64;
            ctx.row(
                Suite::Eulerian,
                "derivative-at-one",
                Severity::Hard,
                Some(k),
                Some(table.floor),
                Some(s),
                vs.len() as u64,
                bad,
                "F'(1) equals the descent total",
            );
        }
    }
    for rules in DescentRules::ALL.iter().filter(|r| **r != DescentRules::ADJUDICATED) {
        for table in eulerian_inductive(&params, k, top, rules)? {
            let vs = &sums[&table.floor];
            let bad = vs
                .iter()
                .filter(|x| table.by_l.get(&x.v.l_index) != Some(&x.eulerian))
                .count() as u64;
            ctx.row(
                Suite::Eulerian,
                "inductive-variant",
                Severity::Soft,
                Some(k),
                Some(table.floor),
                Some(stage_of(table.floor, k)),
                vs.len() as u64,
                bad,
                rules.label(),
            );
        }
    }
    let last_table = if k == 0 { 4 } else { 2 * k + 8 };
    for floor in 2 * k + 2..=top.min(last_table) {
        let s = stage_of(floor, k);
        let vs = &sums[&floor];
        let mut bad = 0;
        let mut cells = Vec::new();
        for x in vs {
            let l = x.v.l_index;
            match initial_closed_form(p, k, floor, l) {
                Ok(f) if f.poly == x.eulerian => {}
                Ok(f) => {
                    bad += 1;
                    cells.push((l, f.poly.to_string(), f.case));
                }
                Err(e) => {
                    bad += 1;
                    cells.push((l, String::from("-"), e.to_string()));
                }
            }
        }
        for (l, got, case) in cells {
            let oracle = vs[l as usize].eulerian.to_string();
            ctx.discrepancy(
                "tabulated-eulerian",
                k,
                s,
                l,
                oracle,
                got,
                format!("floor {floor}: {case}"),
            );
        }
        ctx.row(
            Suite::Eulerian,
            "tabulated-form",
            Severity::Soft,
            Some(k),
            Some(floor),
            Some(s),
            vs.len() as u64,
            bad,
            "printed closed forms of the first floors",
        );
    }
    Ok(())
}

fn even_floors(sums: &ClassSummaries) -> impl Iterator<Item = (u32, &Vec<VertexSummary>)> {
    sums.iter().filter(|(f, _)| *f % 2 == 0).map(|(f, v)| (*f, v))
}

fn classes_partition(classes: &[IntervalClass], n: u64) -> bool {
    let mut next = 0;
    for c in classes {
        if c.lo != next || c.hi < c.lo {
            return false;
        }
        next = c.hi + 1;
    }
    next == n
}

fn fibonacci_suite(ctx: &mut Ctx, k: u32, sums: &ClassSummaries) -> Result<()> {
    let p = ctx.p;
    let pk = pow(p, k)?;
    let s_top = ctx.params.max_floor() / 2 - k;
    let rec = fib_stages(p, k, s_top, &StepSource::Rules(DescentRules::ADJUDICATED))?;
    let printed = if k >= 1 {
        Some(fib_stages(p, k, s_top, &StepSource::Printed)?)
    } else {
        None
    };
    for (floor, vs) in even_floors(sums) {
        let s = stage_of(floor, k);
        let oracle: Vec<&BigInt> = vs.iter().map(|x| &x.fib).collect();
        let bad = (0..vs.len()).filter(|&l| &rec[s as usize - 1][l] != oracle[l]).count() as u64;
        ctx.row(
            Suite::Fibonacci,
            "recursive-vs-bruteforce",
            Severity::Hard,
            Some(k),
            Some(floor),
            Some(s),
            vs.len() as u64,
            bad,
            "stage recursion with adjudicated descent weights",
        );

        if k >= 2 && s >= 3 {
            let classes = interval_classes(p, k, s)?;
            let mut bad = u64::from(!classes_partition(&classes, pk));
            for c in &classes {
                let first = oracle[c.lo as usize];
                bad += (c.lo..=c.hi.min(pk - 1))
                    .filter(|&l| oracle[l as usize] != first)
                    .count() as u64;
            }
            ctx.row(
                Suite::Fibonacci,
                "class-constancy",
                Severity::Hard,
                Some(k),
                Some(floor),
                Some(s),
                classes.len() as u64,
                bad,
                format!("{} interval classes", classes.len()),
            );

            let printed_classes = printed_interval_classes(p, k, s)?;
            let mut bad = u64::from(!classes_partition(&printed_classes, pk));
            for c in &printed_classes {
                let hi = c.hi.min(pk - 1);
                let first = oracle[c.lo as usize];
                let off: Vec<u64> = (c.lo..=hi).filter(|&l| oracle[l as usize] != first).collect();
                bad += off.len() as u64;
            }
            ctx.row(
                Suite::Fibonacci,
                "printed-interval-classes",
                Severity::Soft,
                Some(k),
                Some(floor),
                Some(s),
                printed_classes.len() as u64,
                bad,
                "printed bounds partition the offsets into constant runs",
            );
        }

        let closed_from = if k == 0 { 2 } else { 3 };
        if s >= closed_from {
            let mut bad = 0;
            for (l, o) in oracle.iter().enumerate() {
                let cf = fib_closed_form(p, k, s, l as u64)?;
                if &&cf.value != o {
                    bad += 1;
                    ctx.discrepancy("closed-form", k, s, l as u64, o, &cf.value, cf.case);
                }
            }
            ctx.row(
                Suite::Fibonacci,
                "closed-form",
                Severity::Soft,
                Some(k),
                Some(floor),
                Some(s),
                vs.len() as u64,
                bad,
                "closed-form M against brute force",
            );
        }

        if let Some(pr) = &printed {
            let mut bad = 0;
            for (l, o) in oracle.iter().enumerate() {
                let got = &pr[s as usize - 1][l];
                if &got != o {
                    bad += 1;
                    ctx.discrepancy("printed-step-constants", k, s, l as u64, o, got, "five-case update");
                }
            }
            ctx.row(
                Suite::Fibonacci,
                "printed-step-constants",
                Severity::Soft,
                Some(k),
                Some(floor),
                Some(s),
                vs.len() as u64,
                bad,
                "recursion driven by the printed five-case constants",
            );
        }

        if p == 5 && k == 2 && s == 3 {
            worked_example_stage3(ctx, &oracle);
        }
        if p == 5 && k == 2 && s == 4 {
            worked_example_step(ctx, oracle[10])?;
        }
    }
    Ok(())
}

fn worked_example_stage3(ctx: &mut Ctx, oracle: &[&BigInt]) {
    let (k, s) = (2, 3);
    let values: Vec<BigInt> = oracle.iter().map(|v| (*v).clone()).collect();
    let runs = constancy_runs(&values)
        .into_iter()
        .map(|(lo, hi, v)| format!("[{lo}, {hi}] = {v}"))
        .collect::<Vec<_>>()
        .join(", ");
    let mut cases = 0;
    let mut bad = 0;
    for (lo, hi, printed) in WORKED_EXAMPLE_STAGE3 {
        for l in lo..=hi {
            cases += 1;
            let case = format!("printed range [{lo}, {hi}]");
            match oracle.get(l as usize) {
                Some(o) if **o == BigInt::from(printed) => {}
                Some(o) => {
                    bad += 1;
                    ctx.discrepancy("worked-example", k, s, l, o, printed, case);
                }
                None => {
                    bad += 1;
                    ctx.discrepancy("worked-example", k, s, l, "no such vertex", printed, case);
                }
            }
        }
    }
    ctx.row(
        Suite::Fibonacci,
        "worked-example",
        Severity::Soft,
        Some(k),
        Some(2 * (k + s)),
        Some(s),
        cases,
        bad,
        format!("oracle runs {runs}"),
    );
}

fn worked_example_step(ctx: &mut Ctx, oracle: &BigInt) -> Result<()> {
    let (k, s, l) = (2, 4, 10);
    let terms = step_terms(5, k, s, l, &StepSource::Rules(DescentRules::ADJUDICATED))?;
    let (preds, odd, even, total) = WORKED_EXAMPLE_STEP;
    let printed_total = BigInt::from(total);
    let internal = u64::from(&terms.total != oracle);
    ctx.row(
        Suite::Fibonacci,
        "worked-step",
        Severity::Hard,
        Some(k),
        Some(2 * (k + s)),
        Some(s),
        1,
        internal,
        format!(
            "M(4, 10) = {} + {} + {} = {}",
            terms
                .predecessor_values
                .iter()
                .map(|v| v.to_string())
                .collect::<Vec<_>>()
                .join(" + "),
            terms.odd_term,
            terms.even_term,
            terms.total
        ),
    );
    let printed_matches = terms
        .predecessor_values
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        == preds.iter().map(|v| v.to_string()).collect::<Vec<_>>()
        && terms.odd_term == BigInt::from(odd)
        && terms.even_term == BigInt::from(even)
        && oracle == &printed_total;
    if !printed_matches {
        ctx.discrepancy("worked-step", k, s, l, oracle, &printed_total, "printed step to s = 4");
    }
    ctx.row(
        Suite::Fibonacci,
        "worked-step-printed",
        Severity::Soft,
        Some(k),
        Some(2 * (k + s)),
        Some(s),
        1,
        u64::from(!printed_matches),
        "printed decomposition 206 + 210 + 186 + 190 + 194 + 300 + 240",
    );
    Ok(())
}

/// The printed sequence classes of class `k` with the offsets each covers.
fn sequence_classes(p: u64, k: u32) -> Result<Vec<(SequenceClass, Vec<u64>)>> {
    Ok(match k {
        0 => vec![(SequenceClass::K0, vec![0])],
        1 => (0..p)
            .map(|l| Ok((SequenceClass::K1 { t: j_class(p, 1, l)? }, vec![l])))
            .collect::<Result<_>>()?,
        _ => interval_classes(p, k, k + 2)?
            .into_iter()
            .filter(|c| c.kind != IntervalKind::F)
            .map(|c| (SequenceClass::Interval(c), (c.lo..=c.hi).collect()))
            .collect(),
    })
}

fn class_name(c: &SequenceClass) -> String {
    match c {
        SequenceClass::K0 => "k = 0".into(),
        SequenceClass::K1 { t } => format!("k = 1, t = {t}"),
        SequenceClass::Interval(ic) => ic.label(),
    }
}

fn genfun_suite(ctx: &mut Ctx, k: u32, sums: &ClassSummaries) -> Result<()> {
    let p = ctx.p;
    let mut vs_closed = 0;
    let mut bad_closed = 0;
    let mut vs_brute = 0;
    let mut bad_brute = 0;
    for (class, ls) in sequence_classes(p, k)? {
        let name = class_name(&class);
        let coeffs = match genfun_for_class(p, k, &class).and_then(|g| series_coefficients(&g, SERIES_TERMS)) {
            Ok(c) => c,
            Err(e) => {
                bad_closed += 1;
                ctx.discrepancy("genfun-series", k, k + 2, ls[0], "-", e, name);
                continue;
            }
        };
        for (n, c) in coeffs.iter().enumerate() {
            let s = n as u32 + k + 2;
            for &l in &ls {
                vs_closed += 1;
                let cf = fib_closed_form(p, k, s, l)?;
                if cf.value != *c {
                    bad_closed += 1;
                    ctx.discrepancy("genfun-series", k, s, l, &cf.value, c, name.clone());
                }
                if let Some(vs) = sums.get(&(2 * (k + s))) {
                    vs_brute += 1;
                    if vs[l as usize].fib != *c {
                        bad_brute += 1;
                        ctx.discrepancy("genfun-bruteforce", k, s, l, &vs[l as usize].fib, c, name.clone());
                    }
                }
            }
        }
    }
    ctx.row(
        Suite::Genfun,
        "series-vs-closed-form",
        Severity::Soft,
        Some(k),
        None,
        None,
        vs_closed,
        bad_closed,
        format!("first {SERIES_TERMS} coefficients, stage n + k + 2"),
    );
    ctx.row(
        Suite::Genfun,
        "series-vs-bruteforce",
        Severity::Soft,
        Some(k),
        None,
        None,
        vs_brute,
        bad_brute,
        "coefficients on floors inside the envelope",
    );

    let pk = pow(p, k)?;
    let s_max = k + 6;
    let mut by_s: BTreeMap<u32, (u64, u64, u64)> = BTreeMap::new();
    let rows: Vec<_> = (0..pk)
        .into_par_iter()
        .map(|l| recurrence_check(p, k, l, s_max, &DescentRules::ADJUDICATED))
        .collect::<Result<Vec<_>>>()?;
    for row in rows.into_iter().flatten() {
        let e = by_s.entry(row.s).or_default();
        e.0 += 1;
        e.1 += u64::from(!row.pass_derived);
        e.2 += u64::from(!row.pass_printed);
        if !row.pass_printed {
            let printed = match &row.printed_b {
                Some(b) => (&row.sums + b).to_string(),
                None => String::from("uncovered"),
            };
            ctx.discrepancy("recurrence", k, row.s, row.l, &row.lhs, printed, row.regime);
        }
    }
    for (s, (cases, bad_derived, bad_printed)) in by_s {
        ctx.row(
            Suite::Genfun,
            "recurrence-derived",
            Severity::Hard,
            Some(k),
            None,
            Some(s),
            cases,
            bad_derived,
            "b_s from the descent weights",
        );
        ctx.row(
            Suite::Genfun,
            "recurrence-printed",
            Severity::Soft,
            Some(k),
            None,
            Some(s),
            cases,
            bad_printed,
            "printed b_s",
        );
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_passes() {
        let cfg = VerifyConfig::new(3, vec![0, 1], 8, Suite::ALL.to_vec());
        let report = run(&cfg).unwrap();
        let failing: Vec<_> = report.hard_failures().collect();
        assert!(failing.is_empty(), "{failing:#?}");
        assert!(report.rows.iter().all(|r| r.schema_version == SCHEMA_VERSION));
    }

    #[test]
    fn suite_lists() {
        assert_eq!(Suite::parse_list("all").unwrap().len(), 6);
        assert_eq!(
            Suite::parse_list("genfun,stats").unwrap(),
            vec![Suite::Stats, Suite::Genfun]
        );
        assert!(Suite::parse_list("nope").is_err());
    }

    #[test]
    fn estimate() {
        assert_eq!(estimated_paths(5, &[2], 14), 4 * 625 * 25);
        assert_eq!(estimated_paths(3, &[0], 1), 0);
    }
}
