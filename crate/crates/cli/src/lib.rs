//! Command implementations behind the `taxicab-bwm` binary.
//!
//! Every command reads one comparison system as JSON and writes its result to
//! the supplied writer. Failures carry the process exit code.

use std::fmt;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use taxicab_bwm::{
    build_families, eta, f, grid_min, instantiate, oracle, preference_flags, solve, verify_weights,
    weights_from_modified, AbwItem, Error, FamilyEnumeration, Mode, ModifiedPcsFamily, Pcs, RawPcs, SolveSummary,
    WeightSet,
};

pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_VERIFICATION: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

/// Tolerance for `--expect-epsilon`.
const EXPECT_TOL: f64 = 1e-4;

#[derive(Debug, Parser)]
#[command(name = "taxicab-bwm", version, about = "Exact taxicab Best-Worst Method solver")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve a comparison system and report every optimal weight set.
    Solve(CommonArgs),
    /// Sample the objective on a range as `x,f` rows.
    Plot(PlotArgs),
    /// Cross-check the analytical solution against brute-force oracles.
    Verify(VerifyArgs),
    /// Label each middle criterion as consistent, downside or upside.
    Classify(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Input document; reads standard input when omitted or `-`.
    pub input: Option<PathBuf>,
    /// Override the document's scale mode.
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    #[arg(long, value_enum, default_value_t = Precision::Table)]
    pub precision: Precision,
}

#[derive(Debug, Clone, Args)]
pub struct PlotArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], default_values_t = [1.0, 25.0], allow_negative_numbers = true)]
    pub range: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Grid size for the objective oracle.
    #[arg(long, default_value_t = 100_000)]
    pub samples: usize,
    /// Random weight vectors tried against the optimum.
    #[arg(long, default_value_t = oracle::DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also require the optimum to equal this value.
    #[arg(long, allow_negative_numbers = true)]
    pub expect_epsilon: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Strict,
    Relaxed,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Strict => Mode::Strict,
            ModeArg::Relaxed => Mode::Relaxed,
        }
    }
}

/// Numeric output: rounded to 4 decimals, or shortest round-trip form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Precision {
    Table,
    Full,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub kind: &'static str,
    pub message: String,
}

impl Failure {
    fn validation(kind: &'static str, message: impl Into<String>) -> Failure {
        Failure {
            code: EXIT_VALIDATION,
            kind,
            message: message.into(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({"error": self.kind, "message": self.message, "exit_code": self.code})
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let (code, kind) = match &e {
            Error::MismatchedBw { .. } => (EXIT_VALIDATION, "mismatched_bw"),
            Error::SelfComparisonNotOne { .. } => (EXIT_VALIDATION, "self_comparison_not_one"),
            Error::OutOfScale { .. } => (EXIT_VALIDATION, "out_of_scale"),
            Error::BadIndex(_) => (EXIT_VALIDATION, "bad_index"),
            Error::BadLength { .. } => (EXIT_VALIDATION, "bad_length"),
            Error::DomainError(_) => (EXIT_VALIDATION, "domain_error"),
            Error::InvalidArgument(_) => (EXIT_VALIDATION, "invalid_argument"),
            Error::VerificationFailed(_) => (EXIT_VERIFICATION, "verification_failed"),
            Error::NotConsistent { .. } => (EXIT_INTERNAL, "not_consistent"),
            Error::ZeroWeight(_) => (EXIT_INTERNAL, "zero_weight"),
            Error::InvalidWeights(_) => (EXIT_INTERNAL, "invalid_weights"),
            Error::PlateauUndecidable { .. } => (EXIT_INTERNAL, "plateau_undecidable"),
            Error::BranchUnstable { .. } => (EXIT_INTERNAL, "branch_unstable"),
            Error::OutOfFamilyDomain { .. } => (EXIT_INTERNAL, "out_of_family_domain"),
        };
        Failure {
            code,
            kind,
            message: e.to_string(),
        }
    }
}

pub type CmdResult = std::result::Result<(), Failure>;

pub fn run(cli: &Cli, stdin: &mut dyn Read, out: &mut dyn Write) -> CmdResult {
    match &cli.command {
        Command::Solve(args) => cmd_solve(args, stdin, out),
        Command::Plot(args) => cmd_plot(args, stdin, out),
        Command::Verify(args) => cmd_verify(args, stdin, out),
        Command::Classify(args) => cmd_classify(args, stdin, out),
    }
}

/// Parse an input document, applying a `--mode` override.
pub fn read_input(args: &CommonArgs, stdin: &mut dyn Read) -> std::result::Result<(RawPcs, Pcs), Failure> {
    let text = match args.input.as_deref() {
        None => read_all(stdin)?,
        Some(p) if p.as_os_str() == "-" => read_all(stdin)?,
        Some(p) => std::fs::read_to_string(p)
            .map_err(|e| Failure::validation("io", format!("cannot read {}: {e}", p.display())))?,
    };
    let mut raw: RawPcs = serde_json::from_str(&text)
        .map_err(|e| Failure::validation("parse", format!("invalid input document: {e}")))?;
    if let Some(m) = args.mode {
        raw.mode = m.into();
    }
    let pcs = Pcs::validate(&raw)?;
    Ok((raw, pcs))
}

fn read_all(stdin: &mut dyn Read) -> std::result::Result<String, Failure> {
    let mut s = String::new();
    stdin
        .read_to_string(&mut s)
        .map_err(|e| Failure::validation("io", format!("cannot read standard input: {e}")))?;
    Ok(s)
}

fn write_json(out: &mut dyn Write, v: &Value) -> CmdResult {
    let text = serde_json::to_string_pretty(v).expect("json values serialize");
    write_out(out, format!("{text}\n").as_bytes())
}

fn write_out(out: &mut dyn Write, bytes: &[u8]) -> CmdResult {
    match out.write_all(bytes) {
        // reader went away, e.g. piped into `head`
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r.map_err(io_failure),
    }
}

fn io_failure(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_INTERNAL,
        kind: "io",
        message: e.to_string(),
    }
}

struct Fmt(Precision);

impl Fmt {
    fn num(&self, v: f64) -> Value {
        let v = match self.0 {
            Precision::Table => (v * 1e4).round() / 1e4,
            Precision::Full => v,
        };
        // -0.0 prints as "-0.0"
        json!(if v == 0.0 { 0.0 } else { v })
    }

    fn nums(&self, vs: &[f64]) -> Value {
        Value::Array(vs.iter().map(|&v| self.num(v)).collect())
    }

    fn text(&self, v: f64) -> String {
        match self.0 {
            Precision::Table => format!("{v:.4}"),
            Precision::Full => format!("{v}"),
        }
    }
}

fn abw_json(item: &AbwItem, fm: &Fmt) -> Value {
    match *item {
        AbwItem::Point(x) => json!({"point": fm.num(x)}),
        AbwItem::Interval { lo, hi } => json!({"interval": {"lo": fm.num(lo), "hi": fm.num(hi)}}),
    }
}

fn classification_json(pcs: &Pcs, fm: &Fmt) -> std::result::Result<Value, Failure> {
    let rows = pcs
        .middle()
        .map(|i| {
            Ok(json!({
                "criterion": i + 1,
                "a_bi": fm.num(pcs.a_bi(i)),
                "a_iw": fm.num(pcs.a_iw(i)),
                "product": fm.num(pcs.product(i)),
                "a_bw": fm.num(pcs.a_bw()),
                "label": pcs.classify(i)?.to_string(),
            }))
        })
        .collect::<std::result::Result<Vec<_>, Error>>()?;
    Ok(Value::Array(rows))
}

fn warnings(pcs: &Pcs) -> Vec<String> {
    let mut out = Vec::new();
    for i in pcs.middle() {
        for (name, v) in [("a_bi", pcs.a_bi(i)), ("a_iw", pcs.a_iw(i))] {
            if v > pcs.a_bw() {
                out.push(format!(
                    "criterion {}: {name} = {v} exceeds a_bw = {}; the best-worst comparison should dominate",
                    i + 1,
                    pcs.a_bw()
                ));
            }
        }
    }
    out
}

fn instantiation_json(pcs: &Pcs, fam: &ModifiedPcsFamily, x: f64, fm: &Fmt) -> std::result::Result<Value, Failure> {
    let m = instantiate(fam, x)?;
    let w = weights_from_modified(&m)?;
    let e = eta(pcs, fam, x)?;
    let diagnostics = preference_flags(pcs, &m, &w);
    let eta_entries: Vec<Value> = e
        .entries
        .iter()
        .map(|t| json!({"criterion": t.criterion + 1, "best_side": fm.num(t.best_side), "worst_side": fm.num(t.worst_side)}))
        .collect();
    Ok(json!({
        "x": fm.num(x),
        "modified": {
            "best_to_other": fm.nums(&m.best_to_other()),
            "other_to_worst": fm.nums(&m.other_to_worst()),
        },
        "weights": fm.nums(w.as_slice()),
        "diagnostics": diagnostics,
        "eta": {"entries": eta_entries, "best_worst": fm.num(e.best_worst), "total": fm.num(e.total)},
    }))
}

/// Entry descriptors in terms of `x` for a parametric family.
fn parametric_json(fam: &ModifiedPcsFamily) -> Value {
    let base = fam.base();
    let n = base.n();
    let (b, w) = (base.best(), base.worst());
    let mut best_to_other = vec![String::new(); n];
    let mut other_to_worst = vec![String::new(); n];
    best_to_other[b] = "1".into();
    other_to_worst[w] = "1".into();
    best_to_other[w] = "x".into();
    other_to_worst[b] = "x".into();
    for (i, fb, fw) in fam.entry_forms() {
        best_to_other[i] = fb.describe("a_bi");
        other_to_worst[i] = fw.describe("a_iw");
    }
    json!({
        "domain": {"lo": fam.abw.lo(), "hi": fam.abw.hi()},
        "best_to_other": best_to_other,
        "other_to_worst": other_to_worst,
        "weights": fam.weight_formula().describe(),
    })
}

fn family_json(pcs: &Pcs, fam: &ModifiedPcsFamily, fm: &Fmt) -> std::result::Result<Value, Failure> {
    let branches: Vec<Value> = fam
        .branches
        .iter()
        .map(|b| json!({"criterion": b.criterion + 1, "tag": b.tag, "tied": b.tied}))
        .collect();
    let xs = match fam.abw {
        AbwItem::Point(x) => vec![x],
        AbwItem::Interval { lo, hi } => vec![lo, 0.5 * (lo + hi), hi],
    };
    let instantiations = xs
        .into_iter()
        .map(|x| instantiation_json(pcs, fam, x, fm))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let mut obj = Map::new();
    obj.insert("abw".into(), abw_json(&fam.abw, fm));
    obj.insert("branches".into(), Value::Array(branches));
    if fam.is_parametric() {
        obj.insert("parametric".into(), parametric_json(fam));
    }
    obj.insert("instantiations".into(), Value::Array(instantiations));
    Ok(Value::Object(obj))
}

fn choices_json(fams: &FamilyEnumeration, fm: &Fmt) -> Value {
    let rows: Vec<Value> = fams
        .choices
        .iter()
        .map(|c| {
            let options: Vec<Value> = c
                .options
                .iter()
                .map(|(i, tags)| json!({"criterion": i + 1, "tags": tags}))
                .collect();
            json!({"abw": abw_json(&c.abw, fm), "combinations": c.combinations(), "options": options})
        })
        .collect();
    Value::Array(rows)
}

/// The full result document for `pcs`.
pub fn solve_document(raw: &RawPcs, pcs: &Pcs, precision: Precision) -> std::result::Result<Value, Failure> {
    let fm = Fmt(precision);
    let summary = solve(pcs)?;
    let fams = build_families(pcs, &summary.optimal_abw)?;
    let families = fams
        .families
        .iter()
        .map(|fam| family_json(pcs, fam, &fm))
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let candidates: Vec<Value> = summary
        .candidate_values
        .iter()
        .map(|&(x, v)| json!({"x": fm.num(x), "f": fm.num(v)}))
        .collect();
    let mut doc = json!({
        "input": raw,
        "consistent": pcs.is_consistent(),
        "classification": classification_json(pcs, &fm)?,
        "candidates": candidates,
        "epsilon_star": fm.num(summary.epsilon_star),
        "optimal_abw": summary.optimal_abw.items().iter().map(|it| abw_json(it, &fm)).collect::<Vec<_>>(),
        "families": families,
        "families_truncated": fams.truncated,
        "warnings": warnings(pcs),
    });
    if fams.truncated {
        doc["branch_choices"] = choices_json(&fams, &fm);
    }
    Ok(doc)
}

pub fn cmd_solve(args: &CommonArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> CmdResult {
    let (raw, pcs) = read_input(args, stdin)?;
    let doc = solve_document(&raw, &pcs, args.precision)?;
    write_json(out, &doc)
}

pub fn cmd_classify(args: &CommonArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> CmdResult {
    let (_, pcs) = read_input(args, stdin)?;
    let fm = Fmt(args.precision);
    let doc = json!({
        "consistent": pcs.is_consistent(),
        "a_bw": fm.num(pcs.a_bw()),
        "criteria": classification_json(&pcs, &fm)?,
    });
    write_json(out, &doc)
}

pub fn cmd_plot(args: &PlotArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> CmdResult {
    let (lo, hi) = (args.range[0], args.range[1]);
    if !(lo >= 1.0 && lo < hi && hi.is_finite()) {
        return Err(Failure::validation(
            "domain_error",
            format!("need 1 <= LO < HI, got [{lo}, {hi}]"),
        ));
    }
    if args.samples < 2 {
        return Err(Failure::validation("invalid_argument", "plot needs at least 2 samples"));
    }
    let (_, pcs) = read_input(&args.common, stdin)?;
    let fm = Fmt(args.common.precision);
    let step = (hi - lo) / (args.samples - 1) as f64;
    let mut text = String::from("x,f\n");
    for k in 0..args.samples {
        let x = if k + 1 == args.samples {
            hi
        } else {
            lo + k as f64 * step
        };
        let v = f(&pcs, x)?;
        text.push_str(&format!("{},{}\n", fm.text(x), fm.text(v)));
    }
    write_out(out, text.as_bytes())
}

/// Optimal weight sets at every reported point (interval ends and midpoint included).
fn optimal_weight_sets(pcs: &Pcs, summary: &SolveSummary) -> std::result::Result<Vec<WeightSet>, Failure> {
    let fams = build_families(pcs, &summary.optimal_abw)?;
    let mut sets = Vec::new();
    for fam in &fams.families {
        let xs = match fam.abw {
            AbwItem::Point(x) => vec![x],
            AbwItem::Interval { lo, hi } => vec![lo, 0.5 * (lo + hi), hi],
        };
        for x in xs {
            sets.push(weights_from_modified(&instantiate(fam, x)?)?);
        }
    }
    Ok(sets)
}

pub fn cmd_verify(args: &VerifyArgs, stdin: &mut dyn Read, out: &mut dyn Write) -> CmdResult {
    let (_, pcs) = read_input(&args.common, stdin)?;
    let fm = Fmt(args.common.precision);
    let summary = solve(&pcs)?;
    let eps = summary.epsilon_star;
    let mut checks: Vec<Value> = Vec::new();
    let mut check = |name: &str, pass: bool, detail: String| {
        checks.push(json!({"name": name, "pass": pass, "detail": detail}));
    };

    let grid = grid_min(&pcs, args.samples)?;
    let gap = grid.grid_min_value - eps;
    check(
        "grid_minimum",
        gap >= -oracle::LOWER_BOUND_TOL && gap <= grid.slope_bound * grid.step,
        format!(
            "grid minimum {} vs epsilon* {} (allowed excess {})",
            grid.grid_min_value,
            eps,
            grid.slope_bound * grid.step
        ),
    );
    let far: Vec<f64> = summary
        .optimal_abw
        .items()
        .iter()
        .flat_map(|it| [it.lo(), it.hi()])
        .filter(|&x| !grid.near_argmin(x))
        .collect();
    check(
        "minimizers_on_grid",
        far.is_empty(),
        if far.is_empty() {
            format!("all minimizers within one step ({}) of a grid argmin", grid.step)
        } else {
            format!("minimizers {far:?} are not near any grid argmin")
        },
    );

    let sets = optimal_weight_sets(&pcs, &summary)?;
    let weights_report = match verify_weights(&pcs, &summary, &sets, args.trials, args.seed) {
        Ok(r) => {
            check(
                "weight_sets",
                true,
                format!(
                    "{} weight sets attain epsilon*, {} random trials do not beat it",
                    sets.len(),
                    r.trials
                ),
            );
            json!({
                "seed": r.seed,
                "trials": r.trials,
                "weight_set_deviations": fm.nums(&r.weight_set_deviations),
                "min_random_deviation": fm.num(r.min_random_deviation),
            })
        }
        Err(Error::VerificationFailed(msg)) => {
            check("weight_sets", false, msg);
            Value::Null
        }
        Err(e) => return Err(e.into()),
    };

    if let Some(expected) = args.expect_epsilon {
        let diff = eps - expected;
        check(
            "expected_epsilon",
            diff.abs() <= EXPECT_TOL,
            format!("epsilon* {eps} vs expected {expected} (diff {diff:+e})"),
        );
    }

    let pass = checks.iter().all(|c| c["pass"] == json!(true));
    let clusters: Vec<Value> = grid
        .clusters
        .iter()
        .map(|&(lo, hi)| json!({"lo": fm.num(lo), "hi": fm.num(hi)}))
        .collect();
    let report = json!({
        "pass": pass,
        "epsilon_star": fm.num(eps),
        "checks": checks,
        "grid": {
            "samples": args.samples,
            "step": grid.step,
            "range": [grid.range.0, grid.range.1],
            "grid_min_value": fm.num(grid.grid_min_value),
            "argmin_clusters": clusters,
        },
        "weights": weights_report,
    });
    write_json(out, &report)?;
    if pass {
        Ok(())
    } else {
        let failed: Vec<String> = report["checks"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|c| c["pass"] == json!(false))
            .map(|c| format!("{}: {}", c["name"].as_str().unwrap(), c["detail"].as_str().unwrap()))
            .collect();
        Err(Failure {
            code: EXIT_VERIFICATION,
            kind: "verification_failed",
            message: failed.join("; "),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes_by_error_kind() {
        let code = |e: Error| Failure::from(e).code;
        assert_eq!(code(Error::BadIndex("x".into())), EXIT_VALIDATION);
        assert_eq!(code(Error::DomainError(0.5)), EXIT_VALIDATION);
        assert_eq!(code(Error::VerificationFailed("x".into())), EXIT_VERIFICATION);
        assert_eq!(
            code(Error::BranchUnstable {
                criterion: 2,
                lo: 6.0,
                hi: 9.0
            }),
            EXIT_INTERNAL
        );
        assert_eq!(
            code(Error::PlateauUndecidable {
                lo: 1.0,
                hi: 2.0,
                sqrt: 1e-12,
                linear: 0.0
            }),
            EXIT_INTERNAL
        );
    }

    #[test]
    fn table_precision_rounds() {
        let fm = Fmt(Precision::Table);
        assert_eq!(fm.num(46.0 / 15.0), json!(3.0667));
        assert_eq!(fm.num(-1e-9), json!(0.0));
        assert_eq!(fm.text(2.0 / 3.0), "0.6667");
        let fm = Fmt(Precision::Full);
        assert_eq!(fm.num(46.0 / 15.0), json!(46.0 / 15.0));
    }
}
