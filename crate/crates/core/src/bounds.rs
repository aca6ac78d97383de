//! Upper bounds on `S(t_i, t_o, q)`, the largest `s` admitting a linear
//! `(t_i, t_o, s, q)`-AONT, and the consolidated known-range table.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::catalog::{catalog, CatalogError};
use crate::gf::{is_prime, prime_power};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("no known-range entry for t_o = {to}, q = {q}")]
    UnknownEntry { to: usize, q: u32 },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
}

/// Where a bound comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundSource {
    /// Projective counting bound, valid for `t_i ≥ 2`.
    Counting,
    /// The sharper bound specific to `t_i = 2`.
    PairInputs,
    /// An entry of [`SPECIAL_CASES`].
    Special,
    /// No finite bound: constructions exist for every `s`.
    Unbounded,
}

impl fmt::Display for BoundSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundSource::Counting => "counting bound",
            BoundSource::PairInputs => "t_i = 2 bound",
            BoundSource::Special => "special case",
            BoundSource::Unbounded => "unbounded",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    /// `None` when no finite bound applies.
    pub value: Option<u64>,
    pub source: BoundSource,
    /// Human-readable provenance; set for special cases.
    pub citation: Option<String>,
    pub ti: usize,
    pub to: usize,
    pub q: u32,
}

impl BoundResult {
    fn theorem(value: u64, source: BoundSource, ti: usize, to: usize, q: u32) -> Self {
        BoundResult { value: Some(value), source, citation: None, ti, to, q }
    }

    /// The source tag used in tables: the citation when present.
    pub fn tag(&self) -> String {
        self.citation.clone().unwrap_or_else(|| self.source.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum QMatch {
    Any,
    Prime,
    Exactly(u32),
}

/// A fact about `S(t_i, t_o, q)` not derived from the closed-form bounds.
#[derive(Debug, Clone, Copy)]
pub struct SpecialCase {
    pub ti: usize,
    pub to: usize,
    pub q: QMatch,
    /// `None` means `S = q`.
    pub value: Option<u64>,
    pub exact: bool,
    pub citation: &'static str,
}

/// Ordered by preference among equal values.
pub const SPECIAL_CASES: &[SpecialCase] = &[
    SpecialCase { ti: 1, to: 1, q: QMatch::Exactly(2), value: Some(1), exact: true, citation: "no (1,1,s,2)-AONT for s >= 2" },
    SpecialCase { ti: 2, to: 2, q: QMatch::Prime, value: None, exact: true, citation: "S(2,2,q) = q for prime q" },
    SpecialCase { ti: 2, to: 2, q: QMatch::Any, value: None, exact: false, citation: "S(2,2,q) <= q" },
    SpecialCase { ti: 2, to: 4, q: QMatch::Exactly(2), value: Some(5), exact: true, citation: "exhaustive search" },
    SpecialCase { ti: 2, to: 5, q: QMatch::Exactly(2), value: Some(8), exact: true, citation: "exhaustive search" },
];

impl SpecialCase {
    fn applies(&self, ti: usize, to: usize, q: u32) -> bool {
        self.ti == ti
            && self.to == to
            && match self.q {
                QMatch::Any => true,
                QMatch::Prime => is_prime(q),
                QMatch::Exactly(x) => x == q,
            }
    }

    fn bound(&self, q: u32) -> u64 {
        self.value.unwrap_or(q as u64)
    }
}

fn check_q(q: u32) -> Result<(), BoundsError> {
    match prime_power(q) {
        Some(_) => Ok(()),
        None => Err(BoundsError::BadParams(format!("q = {q} is not a prime power"))),
    }
}

/// `floor((t_o−1)(q^t_i−1) / ((t_i−1)(q−1)))` for `2 ≤ t_i ≤ t_o`.
pub fn bound_t1(ti: usize, to: usize, q: u32) -> Result<BoundResult, BoundsError> {
    if ti < 2 || ti > to {
        return Err(BoundsError::BadParams(format!("need 2 <= t_i <= t_o, got ({ti},{to})")));
    }
    check_q(q)?;
    let q = q as u128;
    let num = (to as u128 - 1)
        * q.checked_pow(ti as u32).map(|x| x - 1).ok_or_else(|| BoundsError::BadParams("q^t_i overflows".into()))?;
    let den = (ti as u128 - 1) * (q - 1);
    let value = u64::try_from(num / den).map_err(|_| BoundsError::BadParams("bound overflows".into()))?;
    Ok(BoundResult::theorem(value, BoundSource::Counting, ti, to, q as u32))
}

/// `max{1 + (t_o−2)(q+1), 2 + (t_o−1)(q−1)}` for `t_i = 2`, `t_o ≥ 2`.
pub fn bound_2to(to: usize, q: u32) -> Result<BoundResult, BoundsError> {
    if to < 2 {
        return Err(BoundsError::BadParams(format!("need t_o >= 2, got {to}")));
    }
    check_q(q)?;
    let (t, q64) = (to as u64, q as u64);
    let value = (1 + (t - 2) * (q64 + 1)).max(2 + (t - 1) * (q64 - 1));
    Ok(BoundResult::theorem(value, BoundSource::PairInputs, 2, to, q))
}

/// Minimum over the closed-form bounds only.
pub fn theorem_upper_bound(ti: usize, to: usize, q: u32) -> Result<BoundResult, BoundsError> {
    validate(ti, to, q)?;
    if ti == 1 {
        return Ok(unbounded(ti, to, q));
    }
    let mut best = bound_t1(ti, to, q)?;
    if ti == 2 {
        let b = bound_2to(to, q)?;
        if b.value <= best.value {
            best = b;
        }
    }
    Ok(best)
}

fn unbounded(ti: usize, to: usize, q: u32) -> BoundResult {
    BoundResult { value: None, source: BoundSource::Unbounded, citation: None, ti, to, q }
}

fn validate(ti: usize, to: usize, q: u32) -> Result<(), BoundsError> {
    if ti == 0 || ti > to {
        return Err(BoundsError::BadParams(format!("need 1 <= t_i <= t_o, got ({ti},{to})")));
    }
    check_q(q)
}

/// Minimum over the closed-form bounds and [`SPECIAL_CASES`].
pub fn best_upper_bound(ti: usize, to: usize, q: u32) -> Result<BoundResult, BoundsError> {
    let mut best = theorem_upper_bound(ti, to, q)?;
    for sc in SPECIAL_CASES.iter().filter(|sc| sc.applies(ti, to, q)) {
        let v = sc.bound(q);
        if best.value.is_none_or(|b| v < b) {
            best = BoundResult {
                value: Some(v),
                source: BoundSource::Special,
                citation: Some(sc.citation.to_string()),
                ti,
                to,
                q,
            };
        }
    }
    Ok(best)
}

/// Whether `best_upper_bound` is known to be attained.
pub fn is_exact(ti: usize, to: usize, q: u32) -> bool {
    SPECIAL_CASES.iter().any(|sc| sc.exact && sc.applies(ti, to, q))
}

/// A row of the `t_i = 2` known-range table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KnownRange {
    pub to: usize,
    pub q: u32,
    pub lower: usize,
    /// Catalog entry realising the lower bound.
    pub lower_source: String,
    pub upper: u64,
    pub upper_source: String,
    pub exact: bool,
}

/// Lower bound from the embedded catalog, upper from [`best_upper_bound`].
pub fn known_range(to: usize, q: u32) -> Result<KnownRange, BoundsError> {
    let entry = catalog()?
        .iter()
        .filter(|e| e.params.ti == 2 && e.params.to == to && e.params.q == q)
        .max_by_key(|e| e.params.s)
        .ok_or(BoundsError::UnknownEntry { to, q })?;
    let ub = best_upper_bound(2, to, q)?;
    let upper = ub.value.expect("t_i = 2 is always bounded");
    let lower = entry.params.s;
    Ok(KnownRange {
        to,
        q,
        lower,
        lower_source: entry.name.to_string(),
        upper,
        upper_source: ub.tag(),
        exact: lower as u64 == upper,
    })
}

/// Every `(t_o, q)` pair covered by the catalog, in catalog order.
pub fn known_range_table() -> Result<Vec<KnownRange>, BoundsError> {
    catalog()?
        .iter()
        .filter(|e| e.params.ti == 2)
        .map(|e| known_range(e.params.to, e.params.q))
        .collect()
}

/// Range of `t_o` covered by a row of the symbolic bound table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ToRange {
    Exactly(usize),
    Between(usize, usize),
    AtLeast(usize),
    /// Every `t_o ≥ t_i`.
    Any,
}

impl ToRange {
    fn start(&self, ti: usize) -> usize {
        match *self {
            ToRange::Exactly(a) | ToRange::Between(a, _) | ToRange::AtLeast(a) => a,
            ToRange::Any => ti,
        }
    }

    /// Sample points, capped at `limit` for open ranges.
    pub fn values(&self, ti: usize, limit: usize) -> Vec<usize> {
        match *self {
            ToRange::Exactly(a) => vec![a],
            ToRange::Between(a, b) => (a..=b).collect(),
            ToRange::AtLeast(_) | ToRange::Any => (self.start(ti)..=limit).collect(),
        }
    }
}

impl fmt::Display for ToRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ToRange::Exactly(a) => write!(f, "{a}"),
            ToRange::Between(a, b) => write!(f, "{}", (*a..=*b).map(|x| x.to_string()).collect::<Vec<_>>().join(",")),
            ToRange::AtLeast(a) => write!(f, ">= {a}"),
            ToRange::Any => f.write_str("any"),
        }
    }
}

/// The parameter families of the symbolic bound table.
pub const SYMBOLIC_FAMILIES: &[(usize, u32, ToRange)] = &[
    (2, 2, ToRange::Exactly(2)),
    (2, 2, ToRange::AtLeast(3)),
    (2, 3, ToRange::Between(2, 3)),
    (2, 3, ToRange::AtLeast(4)),
    (2, 4, ToRange::Between(2, 3)),
    (2, 4, ToRange::AtLeast(4)),
    (3, 3, ToRange::Any),
    (3, 4, ToRange::Any),
    (3, 5, ToRange::Any),
];

/// Open ranges are evaluated up to this `t_o`.
pub const SYMBOLIC_LIMIT: usize = 40;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymbolicRow {
    pub ti: usize,
    pub q: u32,
    pub to: ToRange,
    /// Closed form in `t_o`, fitted to the computed values.
    pub expression: String,
    pub source: BoundSource,
    /// `(t_o, bound)` for every sampled `t_o`.
    pub values: Vec<(usize, u64)>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn linear_expr(slope: i64, intercept: i64) -> String {
    let lead = match slope {
        0 => return intercept.to_string(),
        1 => "t_o".to_string(),
        m => format!("{m}t_o"),
    };
    match intercept {
        0 => lead,
        c if c > 0 => format!("{lead}+{c}"),
        c => format!("{lead}{c}"),
    }
}

/// Symbolic rendering of the closed-form bound on one family.
///
/// `t_i = 2` rows fit a line through the sampled values; single-point rows
/// print the value. Counting rows print the rational coefficient of
/// `(t_o−1)` before flooring.
pub fn symbolic_row(ti: usize, q: u32, to: ToRange) -> Result<SymbolicRow, BoundsError> {
    let values: Vec<(usize, u64)> = to
        .values(ti, SYMBOLIC_LIMIT)
        .into_iter()
        .map(|t| Ok((t, theorem_upper_bound(ti, t, q)?.value.expect("t_i >= 2"))))
        .collect::<Result<_, BoundsError>>()?;
    let source = theorem_upper_bound(ti, to.start(ti), q)?.source;
    let expression = match source {
        BoundSource::Counting => {
            let q64 = q as u64;
            let num = q64.pow(ti as u32) - 1;
            let den = (ti as u64 - 1) * (q64 - 1);
            let g = gcd(num, den);
            match den / g {
                1 => format!("{}(t_o-1)", num / g),
                d => format!("{}(t_o-1)/{d}", num / g),
            }
        }
        _ if values.len() == 1 => values[0].1.to_string(),
        _ => {
            let (t0, v0) = (values[0].0 as i64, values[0].1 as i64);
            let slope = values[1].1 as i64 - v0;
            let intercept = v0 - slope * t0;
            if values.iter().any(|&(t, v)| slope * t as i64 + intercept != v as i64) {
                "(not linear)".to_string()
            } else {
                linear_expr(slope, intercept)
            }
        }
    };
    Ok(SymbolicRow { ti, q, to, expression, source, values })
}

pub fn symbolic_table() -> Result<Vec<SymbolicRow>, BoundsError> {
    SYMBOLIC_FAMILIES.iter().map(|&(ti, q, to)| symbolic_row(ti, q, to)).collect()
}

pub fn symbolic_table_markdown(rows: &[SymbolicRow]) -> String {
    let mut out = String::from("| t_i | q | t_o | upper bound on S | source |\n|---|---|---|---|---|\n");
    for r in rows {
        out.push_str(&format!("| {} | {} | {} | {} | {} |\n", r.ti, r.q, r.to, r.expression, r.source));
    }
    out
}

pub fn known_range_markdown(rows: &[KnownRange]) -> String {
    let mut out = String::from("| t_o | q | lower | source | upper | source | exact |\n|---|---|---|---|---|---|---|\n");
    for r in rows {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            r.to,
            r.q,
            r.lower,
            r.lower_source,
            r.upper,
            r.upper_source,
            if r.exact { "yes" } else { "" }
        ));
    }
    out
}

/// One cell of a parameter grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridCell {
    pub ti: usize,
    pub to: usize,
    pub q: u32,
    pub best: BoundResult,
    pub counting: Option<u64>,
    pub pair_inputs: Option<u64>,
}

/// Bounds for every valid combination; invalid ones are skipped.
pub fn bound_grid(tis: &[usize], tos: &[usize], qs: &[u32]) -> Result<Vec<GridCell>, BoundsError> {
    let mut cells = Vec::new();
    for &q in qs {
        check_q(q)?;
        for &ti in tis {
            for &to in tos {
                if ti == 0 || ti > to {
                    continue;
                }
                cells.push(GridCell {
                    ti,
                    to,
                    q,
                    best: best_upper_bound(ti, to, q)?,
                    counting: (ti >= 2).then(|| bound_t1(ti, to, q)).transpose()?.and_then(|b| b.value),
                    pair_inputs: (ti == 2).then(|| bound_2to(to, q)).transpose()?.and_then(|b| b.value),
                });
            }
        }
    }
    Ok(cells)
}

pub fn grid_markdown(cells: &[GridCell]) -> String {
    let show = |v: Option<u64>| v.map_or("-".to_string(), |v| v.to_string());
    let mut out = String::from("| t_i | t_o | q | best | source | counting | t_i = 2 |\n|---|---|---|---|---|---|---|\n");
    for c in cells {
        out.push_str(&format!(
            "| {} | {} | {} | {} | {} | {} | {} |\n",
            c.ti,
            c.to,
            c.q,
            c.best.value.map_or("unbounded".to_string(), |v| v.to_string()),
            c.best.tag(),
            show(c.counting),
            show(c.pair_inputs)
        ));
    }
    out
}
