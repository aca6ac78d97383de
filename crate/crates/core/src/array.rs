//! Brute-force certification on the array representation of a bijection.
//!
//! The array of `φ: Γ^s → Γ^s` has one row `x_1..x_s, y_1..y_s` per input
//! tuple. Columns `0..s` are inputs and `s..2s` outputs. Rows built here are
//! ordered by input tuple, read as a base-`v` number with `x_1` most
//! significant.

use std::collections::HashMap;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::aont::LinearAont;

/// Default cap on the number of rows (`v^s`).
pub const DEFAULT_MAX_ROWS: u64 = 1 << 20;

/// Histograms are attached to reports only up to this many cells.
pub const HISTOGRAM_LIMIT: u64 = 1 << 12;

const DENSE_LIMIT: u64 = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArrayError {
    #[error("array would have {rows} rows, above the cap of {cap}")]
    TooLarge { rows: u64, cap: u64 },
    #[error("not a bijection: inputs {first:?} and {second:?} both map to {output:?}")]
    NotBijective { first: Vec<u32>, second: Vec<u32>, output: Vec<u32> },
    #[error("value {value} out of range for alphabet size {v}")]
    BadValue { value: u64, v: u32 },
    #[error("row {row} has {got} entries, expected {expected}")]
    BadRow { row: usize, got: usize, expected: usize },
    #[error("bad column set: {0}")]
    BadColumns(String),
    #[error("bad split: {0}")]
    BadSplit(String),
    #[error("array file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// An `N × 2s` array over an alphabet of size `v`, stored column-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArrayRep {
    v: u32,
    s: usize,
    n_rows: usize,
    cols: Vec<Vec<u32>>,
}

/// A set of input columns `I ⊆ [0, s)` and output columns `J ⊆ [s, 2s)`,
/// both absolute indices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSet {
    pub input_cols: Vec<usize>,
    pub output_cols: Vec<usize>,
}

impl ColumnSet {
    pub fn new(input_cols: Vec<usize>, output_cols: Vec<usize>) -> Self {
        ColumnSet { input_cols, output_cols }
    }

    pub fn empty() -> Self {
        ColumnSet { input_cols: vec![], output_cols: vec![] }
    }

    /// Splits a sorted list of absolute columns at `s`.
    pub fn from_columns(cols: &[usize], s: usize) -> Self {
        let (i, o): (Vec<usize>, Vec<usize>) = cols.iter().partition(|&&c| c < s);
        ColumnSet { input_cols: i, output_cols: o }
    }

    pub fn len(&self) -> usize {
        self.input_cols.len() + self.output_cols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn columns(&self) -> Vec<usize> {
        self.input_cols.iter().chain(&self.output_cols).copied().collect()
    }

    /// `x1..xs`, `y1..ys` style labels.
    pub fn labels(&self, s: usize) -> Vec<String> {
        self.input_cols
            .iter()
            .map(|c| format!("x{}", c + 1))
            .chain(self.output_cols.iter().map(|c| format!("y{}", c - s + 1)))
            .collect()
    }

    fn validate(&self, s: usize) -> Result<(), ArrayError> {
        if self.input_cols.iter().any(|&c| c >= s) {
            return Err(ArrayError::BadColumns("input column outside [0, s)".into()));
        }
        if self.output_cols.iter().any(|&c| c < s || c >= 2 * s) {
            return Err(ArrayError::BadColumns("output column outside [s, 2s)".into()));
        }
        let mut all = self.columns();
        all.sort_unstable();
        if all.windows(2).any(|w| w[0] == w[1]) {
            return Err(ArrayError::BadColumns("duplicate column".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BiasVerdict {
    Unbiased,
    Covering,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiasReport {
    pub verdict: BiasVerdict,
    pub columns: ColumnSet,
    /// `N / v^|D|`, or `None` when that is not an integer.
    pub expected: Option<u64>,
    /// Counts indexed by tuple code (first listed column most significant),
    /// present when `v^|D|` is at most [`HISTOGRAM_LIMIT`].
    pub histogram: Option<Vec<u64>>,
}

impl BiasReport {
    pub fn is_unbiased(&self) -> bool {
        self.verdict == BiasVerdict::Unbiased
    }

    pub fn is_covering(&self) -> bool {
        self.verdict != BiasVerdict::Neither
    }
}

/// Outcome of a multi-set check: the first failing column set (in the
/// enumeration order of the check) with its report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArrayVerdict {
    pub pass: bool,
    pub failing: Option<BiasReport>,
}

impl ArrayVerdict {
    fn from_failure(f: Option<BiasReport>) -> Self {
        ArrayVerdict { pass: f.is_none(), failing: f }
    }
}

fn checked_pow(v: u32, e: usize) -> Option<u64> {
    (v as u64).checked_pow(e as u32)
}

impl ArrayRep {
    /// Wraps an arbitrary `N × 2s` table. No bijectivity requirement.
    pub fn from_table(v: u32, s: usize, rows: &[Vec<u32>]) -> Result<Self, ArrayError> {
        let mut cols = vec![Vec::with_capacity(rows.len()); 2 * s];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != 2 * s {
                return Err(ArrayError::BadRow { row: r, got: row.len(), expected: 2 * s });
            }
            for (c, &x) in row.iter().enumerate() {
                if x >= v {
                    return Err(ArrayError::BadValue { value: x as u64, v });
                }
                cols[c].push(x);
            }
        }
        Ok(ArrayRep { v, s, n_rows: rows.len(), cols })
    }

    pub fn v(&self) -> u32 {
        self.v
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn row(&self, r: usize) -> Vec<u32> {
        self.cols.iter().map(|c| c[r]).collect()
    }

    pub fn rows(&self) -> Vec<Vec<u32>> {
        (0..self.n_rows).map(|r| self.row(r)).collect()
    }

    /// Text format: `v s`, then one line of `2s` codes per row.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", self.v, self.s);
        for r in 0..self.n_rows {
            out.push_str(&self.row(r).iter().map(u32::to_string).join(" "));
            out.push('\n');
        }
        out
    }

    /// Parses the text format. Exactly `v^s` rows are expected.
    pub fn parse(text: &str) -> Result<Self, ArrayError> {
        let err = |line: usize, msg: String| ArrayError::Parse { line: line + 1, msg };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (hl, head) = lines.next().ok_or_else(|| err(0, "missing `v s` header".into()))?;
        let head: Vec<u64> = head
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| err(hl, format!("bad header token `{t}`"))))
            .collect::<Result<_, _>>()?;
        let [v, s] = head[..] else {
            return Err(err(hl, "expected `v s`".into()));
        };
        let (v, s) = (v as u32, s as usize);
        if v < 2 {
            return Err(err(hl, "alphabet needs at least two symbols".into()));
        }
        let n = checked_pow(v, s).filter(|&n| n <= DEFAULT_MAX_ROWS).ok_or(ArrayError::TooLarge {
            rows: checked_pow(v, s).unwrap_or(u64::MAX),
            cap: DEFAULT_MAX_ROWS,
        })?;
        let mut rows = Vec::with_capacity(n as usize);
        for (ln, line) in lines {
            let row: Vec<u32> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| err(ln, format!("bad entry `{t}`"))))
                .collect::<Result<_, _>>()?;
            rows.push(row);
        }
        if rows.len() as u64 != n {
            return Err(err(hl, format!("expected {n} rows, found {}", rows.len())));
        }
        Self::from_table(v, s, &rows)
    }

    /// Whether inputs enumerate every tuple once and outputs are distinct.
    pub fn is_bijection(&self) -> bool {
        let all_in = ColumnSet::new((0..self.s).collect(), vec![]);
        let all_out = ColumnSet::new(vec![], (self.s..2 * self.s).collect());
        self.analyze(&all_in, false).is_unbiased() && self.analyze(&all_out, false).is_unbiased()
    }

    /// Tuple codes of `cols` for every row, first column most significant.
    fn codes(&self, cols: &[usize], out: &mut Vec<u64>) {
        out.clear();
        out.resize(self.n_rows, 0);
        let v = self.v as u64;
        for &c in cols {
            for (code, &x) in out.iter_mut().zip(&self.cols[c]) {
                *code = *code * v + x as u64;
            }
        }
    }

    fn verdict_from_codes(&self, codes: &[u64], cells: Option<u64>, counts: &mut Vec<u64>) -> (BiasVerdict, bool) {
        // returns (verdict, counts-populated)
        let n = self.n_rows as u64;
        match cells {
            Some(cells) if cells <= DENSE_LIMIT => {
                counts.clear();
                counts.resize(cells as usize, 0);
                for &c in codes {
                    counts[c as usize] += 1;
                }
                let expected = n.is_multiple_of(cells).then(|| n / cells);
                let covering = counts.iter().all(|&c| c > 0);
                let unbiased = expected.is_some_and(|e| counts.iter().all(|&c| c == e));
                (classify(unbiased, covering), true)
            }
            _ => {
                let mut map: HashMap<u64, u64> = HashMap::new();
                for &c in codes {
                    *map.entry(c).or_default() += 1;
                }
                let covering = cells.is_some_and(|cells| map.len() as u64 == cells);
                let unbiased = covering && {
                    let cells = cells.unwrap();
                    n.is_multiple_of(cells) && map.values().all(|&c| c == n / cells)
                };
                (classify(unbiased, covering), false)
            }
        }
    }

    fn analyze(&self, d: &ColumnSet, histogram: bool) -> BiasReport {
        let cols = d.columns();
        let mut codes = Vec::new();
        self.codes(&cols, &mut codes);
        self.report_from_codes(d, &codes, histogram)
    }

    fn report_from_codes(&self, d: &ColumnSet, codes: &[u64], histogram: bool) -> BiasReport {
        let cells = checked_pow(self.v, d.len());
        let mut counts = Vec::new();
        let (verdict, dense) = self.verdict_from_codes(codes, cells, &mut counts);
        let n = self.n_rows as u64;
        BiasReport {
            verdict,
            columns: d.clone(),
            expected: cells.filter(|&c| n.is_multiple_of(c)).map(|c| n / c),
            histogram: (histogram && dense && cells.is_some_and(|c| c <= HISTOGRAM_LIMIT)).then_some(counts),
        }
    }

    fn set_fails(&self, cols: &[usize], codes: &mut Vec<u64>, counts: &mut Vec<u64>, weak: bool) -> bool {
        self.codes(cols, codes);
        let (verdict, _) = self.verdict_from_codes(codes, checked_pow(self.v, cols.len()), counts);
        fails(verdict, weak)
    }
}

fn classify(unbiased: bool, covering: bool) -> BiasVerdict {
    if unbiased {
        BiasVerdict::Unbiased
    } else if covering {
        BiasVerdict::Covering
    } else {
        BiasVerdict::Neither
    }
}

fn fails(verdict: BiasVerdict, weak: bool) -> bool {
    if weak {
        verdict == BiasVerdict::Neither
    } else {
        verdict != BiasVerdict::Unbiased
    }
}

/// Enumerates every input tuple, applies `phi` and checks bijectivity.
pub fn build_array<F>(v: u32, s: usize, max_rows: u64, mut phi: F) -> Result<ArrayRep, ArrayError>
where
    F: FnMut(&[u32]) -> Vec<u32>,
{
    let n = checked_pow(v, s).unwrap_or(u64::MAX);
    if n > max_rows {
        return Err(ArrayError::TooLarge { rows: n, cap: max_rows });
    }
    let n = n as usize;
    let mut cols = vec![Vec::with_capacity(n); 2 * s];
    let mut seen: HashMap<Vec<u32>, Vec<u32>> = HashMap::with_capacity(n);
    let mut x = vec![0u32; s];
    for _ in 0..n {
        let y = phi(&x);
        if y.len() != s {
            return Err(ArrayError::BadRow { row: cols[0].len(), got: s + y.len(), expected: 2 * s });
        }
        if let Some(&bad) = y.iter().find(|&&e| e >= v) {
            return Err(ArrayError::BadValue { value: bad as u64, v });
        }
        if let Some(first) = seen.insert(y.clone(), x.clone()) {
            return Err(ArrayError::NotBijective { first, second: x, output: y });
        }
        for (c, &e) in x.iter().chain(&y).enumerate() {
            cols[c].push(e);
        }
        // next tuple, x_1 most significant
        for d in x.iter_mut().rev() {
            *d += 1;
            if *d < v {
                break;
            }
            *d = 0;
        }
    }
    Ok(ArrayRep { v, s, n_rows: n, cols })
}

/// The array of `y = x·M⁻¹` for a linear AONT.
pub fn build_array_from_aont(a: &LinearAont, max_rows: u64) -> Result<ArrayRep, ArrayError> {
    let p = a.params();
    build_array(p.q, p.s, max_rows, |x| a.transform(x).expect("input length matches"))
}

/// Full bias analysis of `d`; the verdict distinguishes unbiased, covering
/// only, and neither.
pub fn is_unbiased(a: &ArrayRep, d: &ColumnSet) -> Result<BiasReport, ArrayError> {
    d.validate(a.s)?;
    Ok(a.analyze(d, true))
}

/// Same analysis as [`is_unbiased`]; read [`BiasReport::is_covering`].
pub fn is_covering(a: &ArrayRep, d: &ColumnSet) -> Result<BiasReport, ArrayError> {
    is_unbiased(a, d)
}

fn check_params(a: &ArrayRep, ti: usize, to: usize) -> Result<(), ArrayError> {
    if ti == 0 || ti > to || to > a.s {
        return Err(ArrayError::BadColumns(format!("need 1 <= ti <= to <= s, got ({ti},{to},{})", a.s)));
    }
    Ok(())
}

fn verify_definition(a: &ArrayRep, ti: usize, to: usize, weak: bool) -> Result<ArrayVerdict, ArrayError> {
    check_params(a, ti, to)?;
    let s = a.s;
    let inputs = ColumnSet::new((0..s).collect(), vec![]);
    let outputs = ColumnSet::new(vec![], (s..2 * s).collect());
    for d in [inputs, outputs] {
        let rep = a.analyze(&d, true);
        if fails(rep.verdict, weak) {
            return Ok(ArrayVerdict::from_failure(Some(rep)));
        }
    }

    // I ∪ J with |I| = ti, |J| = s - to. Codes of the smaller family are
    // computed once and combined with each member of the larger one.
    let input_sets: Vec<Vec<usize>> = (0..s).combinations(ti).collect();
    let output_sets: Vec<Vec<usize>> = (s..2 * s).combinations(s - to).collect();
    let inputs_inner = input_sets.len() <= output_sets.len();
    let (outer, inner) = if inputs_inner { (&output_sets, &input_sets) } else { (&input_sets, &output_sets) };
    let inner_codes: Vec<Vec<u64>> = inner
        .iter()
        .map(|cols| {
            let mut codes = Vec::new();
            a.codes(cols, &mut codes);
            codes
        })
        .collect();
    let shift = checked_pow(a.v, inner.first().map_or(0, Vec::len)).unwrap_or(u64::MAX);
    let width = checked_pow(a.v, ti + s - to);

    let failure = outer.par_iter().find_map_first(|o| {
        let mut ocodes = Vec::new();
        a.codes(o, &mut ocodes);
        let mut codes = vec![0u64; a.n_rows];
        let mut counts = Vec::new();
        for (k, icodes) in inner_codes.iter().enumerate() {
            for ((c, &oc), &ic) in codes.iter_mut().zip(&ocodes).zip(icodes) {
                *c = oc.wrapping_mul(shift).wrapping_add(ic);
            }
            // more cells than rows can never be covered
            let verdict = match width {
                Some(w) if w <= a.n_rows as u64 => a.verdict_from_codes(&codes, width, &mut counts).0,
                _ => BiasVerdict::Neither,
            };
            if fails(verdict, weak) {
                let (o, i) = (o.clone(), inner[k].clone());
                return Some(if inputs_inner { (i, o) } else { (o, i) });
            }
        }
        None
    });
    Ok(ArrayVerdict::from_failure(failure.map(|(i, j)| a.analyze(&ColumnSet::new(i, j), true))))
}

/// Checks unbiasedness on all inputs, all outputs, and every `I ∪ J` with
/// `|I| = ti` inputs and `|J| = s - to` outputs.
pub fn verify_aont_array(a: &ArrayRep, ti: usize, to: usize) -> Result<ArrayVerdict, ArrayError> {
    verify_definition(a, ti, to, false)
}

/// As [`verify_aont_array`] with covering in place of unbiased.
pub fn verify_weak_aont_array(a: &ArrayRep, ti: usize, to: usize) -> Result<ArrayVerdict, ArrayError> {
    verify_definition(a, ti, to, true)
}

fn first_failing_set(a: &ArrayRep, sets: Vec<Vec<usize>>) -> ArrayVerdict {
    let failure = sets.par_iter().find_first(|cols| {
        let (mut codes, mut counts) = (Vec::new(), Vec::new());
        a.set_fails(cols, &mut codes, &mut counts, false)
    });
    ArrayVerdict::from_failure(failure.map(|cols| a.analyze(&ColumnSet::from_columns(cols, a.s), true)))
}

/// Unbiased with respect to every `t` of the `2s` columns.
pub fn is_orthogonal_array(a: &ArrayRep, t: usize) -> Result<ArrayVerdict, ArrayError> {
    if t > 2 * a.s {
        return Err(ArrayError::BadColumns(format!("strength {t} exceeds {} columns", 2 * a.s)));
    }
    Ok(first_failing_set(a, (0..2 * a.s).combinations(t).collect()))
}

/// Unbiased with respect to every choice of `t1` columns from the first `n1`
/// and `t2` from the last `n2`. Only the unbiasedness property is checked;
/// the row count may be any multiple of `v^(t1+t2)`.
pub fn is_split_orthogonal_array(
    a: &ArrayRep,
    t1: usize,
    t2: usize,
    n1: usize,
    n2: usize,
) -> Result<ArrayVerdict, ArrayError> {
    if n1 + n2 != 2 * a.s {
        return Err(ArrayError::BadSplit(format!("n1 + n2 = {} but the array has {} columns", n1 + n2, 2 * a.s)));
    }
    if t1 > n1 || t2 > n2 {
        return Err(ArrayError::BadSplit(format!("cannot choose ({t1},{t2}) columns from ({n1},{n2})")));
    }
    let sets = (0..n1)
        .combinations(t1)
        .cartesian_product((n1..n1 + n2).combinations(t2).collect::<Vec<_>>())
        .map(|(x, y)| [x, y].concat())
        .collect();
    Ok(first_failing_set(a, sets))
}

/// Exchanges the input and output halves and re-sorts rows by the new
/// inputs: the array of `φ⁻¹` when `a` is a bijection.
pub fn swap_io(a: &ArrayRep) -> ArrayRep {
    let s = a.s;
    let mut rows: Vec<Vec<u32>> = (0..a.n_rows)
        .map(|r| {
            let row = a.row(r);
            [&row[s..], &row[..s]].concat()
        })
        .collect();
    rows.sort();
    ArrayRep::from_table(a.v, s, &rows).expect("same shape and alphabet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aont::construct_even_bastion;

    pub(crate) fn mixed_array() -> ArrayRep {
        // a = 0, b = 1
        let rows = [
            "aaaaaa", "aabbba", "ababab", "abbbaa", "baaabb", "bababa", "bbaaab", "bbbbbb",
        ];
        let rows: Vec<Vec<u32>> =
            rows.iter().map(|r| r.bytes().map(|c| (c - b'a') as u32).collect()).collect();
        ArrayRep::from_table(2, 3, &rows).unwrap()
    }

    fn identity_array(v: u32, s: usize) -> ArrayRep {
        build_array(v, s, DEFAULT_MAX_ROWS, |x| x.to_vec()).unwrap()
    }

    fn oa_gf3() -> ArrayRep {
        let f = crate::gf::field_of_order(3).unwrap();
        build_array(3, 2, DEFAULT_MAX_ROWS, |x| vec![f.add(x[0], x[1]), f.add(x[0], f.mul(2, x[1]))]).unwrap()
    }

    #[test]
    fn mixed_array_pair_histogram() {
        let a = mixed_array();
        let rep = is_unbiased(&a, &ColumnSet::new(vec![0], vec![3])).unwrap();
        assert_eq!(rep.verdict, BiasVerdict::Covering);
        assert_eq!(rep.histogram, Some(vec![1, 3, 3, 1]));
        assert_eq!(rep.expected, Some(2));
        for i in 0..3 {
            for j in 3..6 {
                assert!(is_covering(&a, &ColumnSet::new(vec![i], vec![j])).unwrap().is_covering());
            }
        }
    }

    #[test]
    fn mixed_array_weak_not_strong() {
        let a = mixed_array();
        assert!(verify_weak_aont_array(&a, 1, 2).unwrap().pass);
        let strong = verify_aont_array(&a, 1, 2).unwrap();
        assert!(!strong.pass);
        let f = strong.failing.unwrap();
        assert_eq!(f.columns, ColumnSet::new(vec![0], vec![3]));
    }

    #[test]
    fn empty_set_is_unbiased() {
        let a = mixed_array();
        let rep = is_unbiased(&a, &ColumnSet::empty()).unwrap();
        assert!(rep.is_unbiased());
        assert_eq!(rep.histogram, Some(vec![8]));
    }

    #[test]
    fn constant_column_is_neither() {
        let a = ArrayRep::from_table(2, 1, &[vec![0, 0], vec![1, 0]]).unwrap();
        let rep = is_covering(&a, &ColumnSet::new(vec![], vec![1])).unwrap();
        assert_eq!(rep.verdict, BiasVerdict::Neither);
        assert_eq!(rep.histogram, Some(vec![2, 0]));
        assert!(!a.is_bijection());
    }

    #[test]
    fn build_array_checks() {
        let a = identity_array(2, 2);
        assert_eq!(a.n_rows(), 4);
        for r in 0..4 {
            let row = a.row(r);
            assert_eq!(row[..2], row[2..]);
        }
        let err = build_array(2, 2, DEFAULT_MAX_ROWS, |_| vec![0, 0]).unwrap_err();
        assert!(matches!(err, ArrayError::NotBijective { .. }));
        assert!(matches!(build_array(2, 21, DEFAULT_MAX_ROWS, |x| x.to_vec()), Err(ArrayError::TooLarge { .. })));
        let eb = build_array_from_aont(&construct_even_bastion(4).unwrap(), DEFAULT_MAX_ROWS).unwrap();
        assert_eq!(eb.n_rows(), 16);
        assert!(eb.is_bijection());
    }

    #[test]
    fn even_bastion_array() {
        let a = build_array_from_aont(&construct_even_bastion(4).unwrap(), DEFAULT_MAX_ROWS).unwrap();
        // x1 together with two outputs
        assert!(is_unbiased(&a, &ColumnSet::new(vec![0], vec![5, 6])).unwrap().is_unbiased());
        assert!(verify_aont_array(&a, 1, 2).unwrap().pass);
        let swapped = swap_io(&a);
        assert!(verify_aont_array(&swapped, 2, 3).unwrap().pass);
        assert_eq!(swap_io(&swapped), a);
    }

    #[test]
    fn identity_map_fails() {
        let a = identity_array(2, 2);
        assert!(!verify_aont_array(&a, 1, 1).unwrap().pass);
        assert!(!verify_weak_aont_array(&a, 1, 1).unwrap().pass);
        assert!(!is_orthogonal_array(&a, 3).unwrap().pass);
        assert!(!is_split_orthogonal_array(&a, 1, 1, 2, 2).unwrap().pass);
        assert!(is_split_orthogonal_array(&a, 0, 0, 2, 2).unwrap().pass);
        assert!(matches!(is_split_orthogonal_array(&a, 1, 1, 2, 3), Err(ArrayError::BadSplit(_))));
    }

    #[test]
    fn gf3_orthogonal_array() {
        let a = oa_gf3();
        assert_eq!(a.n_rows(), 9);
        assert!(is_orthogonal_array(&a, 2).unwrap().pass);
        assert!(is_orthogonal_array(&a, 1).unwrap().pass);
        assert!(!is_orthogonal_array(&a, 3).unwrap().pass);
        for (ti, to) in [(1, 1), (1, 2), (2, 2)] {
            assert!(verify_aont_array(&a, ti, to).unwrap().pass);
        }
    }

    #[test]
    fn text_round_trip() {
        let a = mixed_array();
        let text = a.to_text();
        assert!(text.starts_with("2 3\n0 0 0 0 0 0\n"));
        assert_eq!(ArrayRep::parse(&text).unwrap(), a);
        assert!(ArrayRep::parse("2 2\n0 0 0 0\n").is_err());
        assert!(ArrayRep::parse("2 1\n0 0\n1 2\n").is_err());
    }

    #[test]
    fn bad_column_sets_rejected() {
        let a = mixed_array();
        assert!(is_unbiased(&a, &ColumnSet::new(vec![3], vec![])).is_err());
        assert!(is_unbiased(&a, &ColumnSet::new(vec![], vec![2])).is_err());
        assert!(verify_aont_array(&a, 2, 1).is_err());
    }
}
