//! `aont`: verify, construct, bound and search for linear AONTs.
//!
//! Exit codes: 0 affirmative verdict, 1 negative verdict, 2 usage or input
//! error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use aont_core::aont::{
    construct_bs, construct_cauchy, construct_even_2s1, construct_even_bastion, construct_odd_bastion,
    shrink_by_cofactor, verify_linear_aont_par,
};
use aont_core::array::{
    build_array, is_orthogonal_array, is_split_orthogonal_array, is_unbiased, verify_aont_array,
    verify_weak_aont_array, ArrayRep, ArrayVerdict, BiasReport, ColumnSet, DEFAULT_MAX_ROWS,
};
use aont_core::bounds::{
    bound_grid, grid_markdown, known_range_markdown, known_range_table, symbolic_table, symbolic_table_markdown,
};
use aont_core::catalog::catalog;
use aont_core::search::{compute_s, search_linear_aont, Budget, SearchConfig, Status, Strategy};
use aont_core::{field_of_order, verify_linear_aont, AontParams, Fe, Matrix, VerificationReport};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "aont", version, about = "Linear all-or-nothing transforms over small finite fields")]
struct Cli {
    /// Machine-readable JSON on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the rank condition of a matrix file.
    Verify(VerifyArgs),
    /// Compute y = x·M⁻¹.
    Transform(VectorArgs),
    /// Compute x = y·M.
    Invert(VectorArgs),
    /// Emit a matrix from one of the built-in constructions.
    Construct(ConstructArgs),
    /// Upper bounds on S(t_i, t_o, q) and the summary tables.
    Bounds(BoundsArgs),
    /// Backtracking search for a linear AONT.
    Search(SearchArgs),
    /// List or print the embedded matrices.
    Catalog(CatalogArgs),
    /// Brute-force checks on the array representation.
    ArrayCheck(ArrayArgs),
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    ti: usize,
    #[arg(long)]
    to: usize,
    /// Split the submatrix checks across threads.
    #[arg(long)]
    parallel: bool,
}

#[derive(Args)]
struct VectorArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Comma-separated field element codes.
    #[arg(long)]
    input: String,
    /// Require the matrix to be a (ti, to) AONT first.
    #[arg(long, requires = "to")]
    ti: Option<usize>,
    #[arg(long, requires = "ti")]
    to: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    EvenBastion,
    OddBastion,
    Bs,
    Even2s1,
    Cauchy,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long, value_enum)]
    kind: Kind,
    #[arg(long)]
    s: usize,
    /// Threshold for Cauchy matrices.
    #[arg(long, default_value_t = 2)]
    t: usize,
    /// Field order for Cauchy matrices.
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Delete a row and column this many times.
    #[arg(long, default_value_t = 0)]
    shrink: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Table {
    #[value(name = "1")]
    Symbolic,
    #[value(name = "2")]
    Known,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value = "2")]
    ti: String,
    /// A value or an inclusive range `a..b`.
    #[arg(long, default_value = "3")]
    to: String,
    /// Comma-separated field orders.
    #[arg(long, default_value = "2")]
    q: String,
    /// Print a summary table instead of a grid.
    #[arg(long, value_enum)]
    table: Option<Table>,
}

#[derive(Args)]
struct SearchArgs {
    #[arg(long)]
    ti: usize,
    #[arg(long)]
    to: usize,
    /// Matrix size; the largest size tried with --compute-s.
    #[arg(long)]
    s: usize,
    #[arg(long)]
    q: u32,
    #[arg(long, default_value = "exhaustive")]
    strategy: Strategy,
    #[arg(long)]
    budget_nodes: Option<u64>,
    #[arg(long)]
    budget_secs: Option<f64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    /// Write a found matrix here.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Search even when s exceeds the closed-form bound.
    #[arg(long)]
    no_bound_pruning: bool,
    /// Ascend from s = to up to --s and report the frontier.
    #[arg(long)]
    compute_s: bool,
}

#[derive(Args)]
struct CatalogArgs {
    /// Print one entry's matrix.
    #[arg(long)]
    name: Option<String>,
}

#[derive(Args)]
struct ArrayArgs {
    /// Array file (`v s` header and v^s rows).
    #[arg(long, conflicts_with = "matrix", required_unless_present = "matrix")]
    array: Option<PathBuf>,
    /// Build the array of y = x·M⁻¹ from a matrix file.
    #[arg(long)]
    matrix: Option<PathBuf>,
    #[arg(long, requires = "to")]
    ti: Option<usize>,
    #[arg(long, requires = "ti")]
    to: Option<usize>,
    /// Covering in place of unbiased.
    #[arg(long, requires = "ti")]
    weak: bool,
    /// Orthogonal array strength.
    #[arg(long)]
    oa: Option<usize>,
    /// Split orthogonal array `t1,t2,n1,n2`.
    #[arg(long)]
    soa: Option<String>,
    /// Bias report for columns such as `x1,y2`.
    #[arg(long)]
    columns: Option<String>,
}

type Outcome = Result<u8, String>;

fn err(e: impl std::fmt::Display) -> String {
    e.to_string()
}

fn read(path: &Path) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_matrix(path: &Path) -> Result<Matrix, String> {
    Matrix::parse(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>, String> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| format!("bad {what} `{t}`")))
        .collect()
}

fn parse_range(s: &str) -> Result<Vec<usize>, String> {
    match s.split_once("..") {
        Some((a, b)) => {
            let (a, b): (usize, usize) =
                (a.parse().map_err(|_| format!("bad range `{s}`"))?, b.parse().map_err(|_| format!("bad range `{s}`"))?);
            Ok((a..=b).collect())
        }
        None => parse_list(s, "value"),
    }
}

fn emit(json: bool, value: Value, human: impl FnOnce() -> String) {
    if json {
        println!("{}", serde_json::to_string_pretty(&value).expect("plain data"));
    } else {
        print!("{}", human());
    }
}

fn report_text(r: &VerificationReport) -> String {
    match (&r.witness, r.invertible, r.passed()) {
        (_, _, true) => format!("pass: {} ({} submatrices checked)\n", r.params, r.checked),
        (_, false, _) => format!("fail: {} matrix is singular\n", r.params),
        (Some(w), _, _) => format!(
            "fail: {} rows {:?} cols {:?} have rank {} (after {} submatrices)\n",
            r.params, w.rows, w.cols, w.rank, r.checked
        ),
        (None, _, _) => format!("fail: {}\n", r.params),
    }
}

fn verify(a: VerifyArgs, json: bool) -> Outcome {
    let m = load_matrix(&a.matrix)?;
    let r = if a.parallel { verify_linear_aont_par(&m, a.ti, a.to) } else { verify_linear_aont(&m, a.ti, a.to) }
        .map_err(err)?;
    emit(json, json!({ "command": "verify", "report": r }), || report_text(&r));
    Ok(if r.passed() { 0 } else { 1 })
}

fn vector_op(a: VectorArgs, json: bool, forward: bool) -> Outcome {
    let m = load_matrix(&a.matrix)?;
    if !m.is_square() {
        return Err(format!("{}: matrix is {}x{}, not square", a.matrix.display(), m.n_rows(), m.n_cols()));
    }
    let x: Vec<Fe> = parse_list(&a.input, "element")?;
    let q = m.field().order();
    if x.len() != m.n_rows() {
        return Err(format!("input has {} entries, matrix size is {}", x.len(), m.n_rows()));
    }
    if let Some(&bad) = x.iter().find(|&&e| e >= q) {
        return Err(format!("element {bad} is not in GF({q})"));
    }
    if let (Some(ti), Some(to)) = (a.ti, a.to) {
        let r = verify_linear_aont(&m, ti, to).map_err(err)?;
        if !r.passed() {
            emit(json, json!({ "command": if forward { "transform" } else { "invert" }, "report": r }), || {
                report_text(&r)
            });
            return Ok(1);
        }
    }
    let y = if forward {
        let inv = m.invert().map_err(err)?.ok_or("matrix is singular")?;
        inv.row_vec_mul(&x).map_err(err)?
    } else {
        m.row_vec_mul(&x).map_err(err)?
    };
    let name = if forward { "transform" } else { "invert" };
    emit(json, json!({ "command": name, "input": x, "output": y }), || {
        format!("{}\n", y.iter().map(u32::to_string).collect::<Vec<_>>().join(","))
    });
    Ok(0)
}

fn construct(a: ConstructArgs, json: bool) -> Outcome {
    let mut aont = match a.kind {
        Kind::EvenBastion => construct_even_bastion(a.s),
        Kind::OddBastion => construct_odd_bastion(a.s),
        Kind::Bs => construct_bs(a.s),
        Kind::Even2s1 => construct_even_2s1(a.s),
        Kind::Cauchy => construct_cauchy(a.t, a.s, &field_of_order(a.q).map_err(err)?),
    }
    .map_err(err)?;
    for _ in 0..a.shrink {
        aont = shrink_by_cofactor(&aont).map_err(err)?;
    }
    let text = aont.matrix().to_text();
    if let Some(out) = &a.out {
        fs::write(out, &text).map_err(|e| format!("{}: {e}", out.display()))?;
    }
    emit(json, json!({ "command": "construct", "params": aont.params(), "matrix": aont.matrix().to_rows() }), || {
        if a.out.is_some() {
            format!("{} written\n", aont.params())
        } else {
            text.clone()
        }
    });
    Ok(0)
}

fn bounds(a: BoundsArgs, json: bool) -> Outcome {
    match a.table {
        Some(Table::Symbolic) => {
            let rows = symbolic_table().map_err(err)?;
            emit(json, json!({ "command": "bounds", "table": 1, "rows": rows }), || symbolic_table_markdown(&rows));
        }
        Some(Table::Known) => {
            let rows = known_range_table().map_err(err)?;
            emit(json, json!({ "command": "bounds", "table": 2, "rows": rows }), || known_range_markdown(&rows));
        }
        None => {
            let (tis, tos, qs) = (parse_range(&a.ti)?, parse_range(&a.to)?, parse_list::<u32>(&a.q, "field order")?);
            let cells = bound_grid(&tis, &tos, &qs).map_err(err)?;
            if cells.is_empty() {
                return Err("no parameter combination with 1 <= t_i <= t_o".into());
            }
            emit(json, json!({ "command": "bounds", "cells": cells }), || {
                if let [c] = &cells[..] {
                    let theorem = c.pair_inputs.into_iter().chain(c.counting).min();
                    let mut s = format!("S({},{},{})\n", c.ti, c.to, c.q);
                    if let Some(t) = theorem {
                        s += &format!("  theorem upper bound: {t}\n");
                    }
                    match c.best.value {
                        Some(v) => s += &format!("  best upper bound: {v} ({})\n", c.best.tag()),
                        None => s += "  unbounded: constructions exist for every s\n",
                    }
                    s
                } else {
                    grid_markdown(&cells)
                }
            });
        }
    }
    Ok(0)
}

fn search(a: SearchArgs, json: bool) -> Outcome {
    let _ = json; // outcomes are always JSON
    let params = AontParams::new(a.ti, a.to, a.s, a.q).map_err(err)?;
    let mut cfg = SearchConfig::new(params, a.strategy);
    cfg.budget = Budget {
        max_nodes: a.budget_nodes,
        max_time: a.budget_secs.map(|s| Duration::try_from_secs_f64(s).map_err(err)).transpose()?,
    };
    cfg.workers = a.workers;
    cfg.seed = a.seed;
    cfg.checkpoint_path = a.checkpoint;
    cfg.use_bounds = !a.no_bound_pruning;
    let out = if a.compute_s { compute_s(a.ti, a.to, a.q, a.s, &cfg) } else { search_linear_aont(&cfg) }.map_err(err)?;
    if let (Some(path), Some(m)) = (&a.out, &out.matrix) {
        fs::write(path, m.to_text()).map_err(|e| format!("{}: {e}", path.display()))?;
    }
    let mut v = out.to_json();
    v["command"] = json!("search");
    println!("{}", serde_json::to_string_pretty(&v).expect("plain data"));
    Ok(if out.status == Status::Found || out.frontier.is_some_and(|f| f.exact.is_some()) { 0 } else { 1 })
}

fn catalog_cmd(a: CatalogArgs, json: bool) -> Outcome {
    let entries = catalog().map_err(err)?;
    if let Some(name) = a.name {
        let e = entries
            .iter()
            .find(|e| e.name.eq_ignore_ascii_case(&name))
            .ok_or_else(|| format!("no catalog entry named `{name}`"))?;
        emit(json, json!({ "command": "catalog", "name": e.name, "params": e.params, "matrix": e.aont.matrix().to_rows() }), || {
            e.aont.matrix().to_text()
        });
        return Ok(0);
    }
    // every entry was re-verified when the catalog loaded
    let list: Vec<Value> = entries
        .iter()
        .map(|e| json!({ "name": e.name, "params": e.params, "verified": true }))
        .collect();
    emit(json, json!({ "command": "catalog", "count": entries.len(), "entries": list }), || {
        let mut s = String::from("name  (ti,to,s,q)   verified\n");
        for e in entries {
            s += &format!("{:<5} {:<12} yes\n", e.name, e.params.to_string());
        }
        s
    });
    Ok(0)
}

fn parse_columns(spec: &str, s: usize) -> Result<ColumnSet, String> {
    let mut cols = Vec::new();
    for t in spec.split(',').map(str::trim) {
        let (side, num) = t.split_at(1.min(t.len()));
        let k: usize = num.parse().map_err(|_| format!("bad column `{t}`"))?;
        if k == 0 || k > s {
            return Err(format!("column `{t}` outside 1..={s}"));
        }
        cols.push(match side {
            "x" => k - 1,
            "y" => s + k - 1,
            _ => return Err(format!("column `{t}` must start with x or y")),
        });
    }
    cols.sort_unstable();
    Ok(ColumnSet::from_columns(&cols, s))
}

fn bias_text(r: &BiasReport, s: usize) -> String {
    let mut out = format!("columns {}: {:?}", r.columns.labels(s).join(","), r.verdict);
    if let Some(h) = &r.histogram {
        out += &format!(" histogram {h:?}");
    }
    out + "\n"
}

fn verdict_json(kind: &str, v: &ArrayVerdict, s: usize) -> Value {
    json!({
        "command": "array-check",
        "check": kind,
        "pass": v.pass,
        "failing": v.failing,
        "failing_labels": v.failing.as_ref().map(|f| f.columns.labels(s)),
    })
}

fn array_check(a: ArrayArgs, json: bool) -> Outcome {
    let arr = match (&a.array, &a.matrix) {
        (Some(p), _) => ArrayRep::parse(&read(p)?).map_err(|e| format!("{}: {e}", p.display()))?,
        (None, Some(p)) => {
            let m = load_matrix(p)?;
            // any invertible matrix; the AONT property is what is being tested
            let inv = m.invert().map_err(err)?.ok_or("matrix is singular")?;
            let q = m.field().order();
            build_array(q, m.n_rows(), DEFAULT_MAX_ROWS, |x| inv.row_vec_mul(x).expect("length s"))
                .map_err(err)?
        }
        (None, None) => unreachable!("clap requires one source"),
    };
    let s = arr.s();
    if let Some(spec) = &a.columns {
        let r = is_unbiased(&arr, &parse_columns(spec, s)?).map_err(err)?;
        emit(json, json!({ "command": "array-check", "check": "columns", "report": r }), || bias_text(&r, s));
        return Ok(if r.is_unbiased() { 0 } else { 1 });
    }
    let (kind, v) = if let (Some(ti), Some(to)) = (a.ti, a.to) {
        if a.weak {
            ("weak-aont", verify_weak_aont_array(&arr, ti, to))
        } else {
            ("aont", verify_aont_array(&arr, ti, to))
        }
    } else if let Some(t) = a.oa {
        ("oa", is_orthogonal_array(&arr, t))
    } else if let Some(spec) = &a.soa {
        let [t1, t2, n1, n2] = parse_list::<usize>(spec, "split parameter")?[..] else {
            return Err("--soa takes t1,t2,n1,n2".into());
        };
        ("soa", is_split_orthogonal_array(&arr, t1, t2, n1, n2))
    } else {
        return Err("choose one of --ti/--to, --oa, --soa or --columns".into());
    };
    let v = v.map_err(err)?;
    emit(json, verdict_json(kind, &v, s), || match &v.failing {
        None => format!("pass: {kind}\n"),
        Some(f) => format!("fail: {kind}; {}", bias_text(f, s)),
    });
    Ok(if v.pass { 0 } else { 1 })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let json = cli.json;
    let result = match cli.cmd {
        Cmd::Verify(a) => verify(a, json),
        Cmd::Transform(a) => vector_op(a, json, true),
        Cmd::Invert(a) => vector_op(a, json, false),
        Cmd::Construct(a) => construct(a, json),
        Cmd::Bounds(a) => bounds(a, json),
        Cmd::Search(a) => search(a, json),
        Cmd::Catalog(a) => catalog_cmd(a, json),
        Cmd::ArrayCheck(a) => array_check(a, json),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
