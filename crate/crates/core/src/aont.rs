//! Linear AONTs: the rank criterion, forward/inverse transforms and the
//! explicit constructions.
//!
//! A linear `(t_i, t_o, s, q)`-AONT is stored as its reconstruction matrix
//! `M` (`x = y·M`, `y = x·M⁻¹`). It is valid exactly when `M` is invertible
//! and every `t_o × t_i` submatrix of `M` has rank `t_i`.

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gf::{prime_power, Fe, Field, FieldError};
use crate::matrix::{gf2, rank_in_place, Matrix, MatrixError, Selector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AontError {
    #[error("bad parameters: {0}")]
    BadParams(String),
    #[error("size {0} is odd, an even size is required")]
    OddSize(usize),
    #[error("size {0} is even, an odd size is required")]
    EvenSize(usize),
    #[error("bad size: {0}")]
    BadSize(String),
    #[error("field of order {q} is too small for size {s} (need q >= 2s)")]
    FieldTooSmall { q: u32, s: usize },
    #[error("matrix does not define a ({ti},{to})-AONT")]
    NotAont { ti: usize, to: usize, report: Box<VerificationReport> },
    #[error("no invertible cofactor found")]
    NoInvertibleCofactor,
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// The parameter tuple `(t_i, t_o, s, q)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AontParams {
    pub ti: usize,
    pub to: usize,
    pub s: usize,
    pub q: u32,
}

impl AontParams {
    /// Checks `1 <= ti <= to <= s` and that `q` is a prime power.
    pub fn new(ti: usize, to: usize, s: usize, q: u32) -> Result<Self, AontError> {
        if ti == 0 || ti > to || to > s {
            return Err(AontError::BadParams(format!("need 1 <= ti <= to <= s, got ({ti},{to},{s})")));
        }
        if prime_power(q).is_none() {
            return Err(AontError::BadParams(format!("q = {q} is not a prime power")));
        }
        Ok(AontParams { ti, to, s, q })
    }
}

impl std::fmt::Display for AontParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{},{})", self.ti, self.to, self.s, self.q)
    }
}

/// A `t_o × t_i` submatrix whose rank falls short of `t_i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub rank: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub params: AontParams,
    pub verdict: Verdict,
    pub invertible: bool,
    pub witness: Option<Witness>,
    /// Number of `t_o × t_i` submatrices examined. On failure this counts
    /// every selector up to and including the witness in `(rows, cols)`
    /// lexicographic order.
    pub checked: u64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Column projections of `M` for every `t_i`-subset of columns.
enum Projections {
    /// One bit mask per row, per column subset.
    Packed(Vec<Vec<u64>>),
    /// `s * t_i` entries per column subset, row-major.
    Dense(Vec<Vec<Fe>>),
}

struct RankChecker<'a> {
    m: &'a Matrix,
    ti: usize,
    col_sets: Vec<Vec<usize>>,
    proj: Projections,
}

impl<'a> RankChecker<'a> {
    fn new(m: &'a Matrix, ti: usize) -> Self {
        let s = m.n_rows();
        let col_sets: Vec<Vec<usize>> = (0..m.n_cols()).combinations(ti).collect();
        let proj = if m.field().order() == 2 {
            Projections::Packed(
                col_sets
                    .iter()
                    .map(|cols| {
                        (0..s)
                            .map(|r| cols.iter().enumerate().fold(0u64, |acc, (b, &c)| acc | ((m.get(r, c) as u64) << b)))
                            .collect()
                    })
                    .collect(),
            )
        } else {
            Projections::Dense(
                col_sets
                    .iter()
                    .map(|cols| (0..s).flat_map(|r| cols.iter().map(move |&c| m.get(r, c))).collect())
                    .collect(),
            )
        };
        RankChecker { m, ti, col_sets, proj }
    }

    /// First column-subset index whose restriction to `rows` is rank deficient.
    fn first_failure(&self, rows: &[usize], packed_buf: &mut Vec<u64>, dense_buf: &mut Vec<Fe>) -> Option<usize> {
        let ti = self.ti;
        match &self.proj {
            Projections::Packed(p) => p.iter().position(|proj| {
                packed_buf.clear();
                packed_buf.extend(rows.iter().map(|&r| proj[r]));
                !gf2::rank_reaches(packed_buf, ti)
            }),
            Projections::Dense(p) => p.iter().position(|proj| {
                dense_buf.clear();
                for &r in rows {
                    dense_buf.extend_from_slice(&proj[r * ti..(r + 1) * ti]);
                }
                rank_in_place(self.m.field(), dense_buf, rows.len(), ti) < ti
            }),
        }
    }

    fn witness(&self, rows: &[usize], col_idx: usize) -> Witness {
        let cols = self.col_sets[col_idx].clone();
        let sub = self
            .m
            .submatrix(&Selector::new(rows.to_vec(), cols.clone()))
            .expect("selector built from valid combinations");
        Witness { rows: rows.to_vec(), cols, rank: sub.rank() }
    }
}

fn check_verify_args(m: &Matrix, ti: usize, to: usize) -> Result<AontParams, AontError> {
    if !m.is_square() {
        return Err(MatrixError::NotSquare { rows: m.n_rows(), cols: m.n_cols() }.into());
    }
    AontParams::new(ti, to, m.n_rows(), m.field().order())
}

/// Checks the rank criterion sequentially. On failure the witness is the
/// lexicographically first `(rows, cols)` selector with rank below `t_i`.
pub fn verify_linear_aont(m: &Matrix, ti: usize, to: usize) -> Result<VerificationReport, AontError> {
    verify_impl(m, ti, to, false)
}

/// Same contract as [`verify_linear_aont`], with row subsets spread over the
/// rayon thread pool. The reported witness is identical.
pub fn verify_linear_aont_par(m: &Matrix, ti: usize, to: usize) -> Result<VerificationReport, AontError> {
    verify_impl(m, ti, to, true)
}

fn verify_impl(m: &Matrix, ti: usize, to: usize, parallel: bool) -> Result<VerificationReport, AontError> {
    let params = check_verify_args(m, ti, to)?;
    if !m.is_invertible() {
        return Ok(VerificationReport { params, verdict: Verdict::Fail, invertible: false, witness: None, checked: 0 });
    }
    let checker = RankChecker::new(m, ti);
    let n_cols_sets = checker.col_sets.len() as u64;
    let row_sets: Vec<Vec<usize>> = (0..params.s).combinations(to).collect();
    let total = row_sets.len() as u64 * n_cols_sets;

    let failure = if parallel {
        row_sets.par_iter().enumerate().find_map_first(|(ji, rows)| {
            let (mut pb, mut db) = (Vec::new(), Vec::new());
            checker.first_failure(rows, &mut pb, &mut db).map(|ii| (ji, ii))
        })
    } else {
        let (mut pb, mut db) = (Vec::new(), Vec::new());
        row_sets
            .iter()
            .enumerate()
            .find_map(|(ji, rows)| checker.first_failure(rows, &mut pb, &mut db).map(|ii| (ji, ii)))
    };

    Ok(match failure {
        None => VerificationReport { params, verdict: Verdict::Pass, invertible: true, witness: None, checked: total },
        Some((ji, ii)) => VerificationReport {
            params,
            verdict: Verdict::Fail,
            invertible: true,
            witness: Some(checker.witness(&row_sets[ji], ii)),
            checked: ji as u64 * n_cols_sets + ii as u64 + 1,
        },
    })
}

/// A verified linear AONT with its cached inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearAont {
    params: AontParams,
    m: Matrix,
    m_inv: Matrix,
}

impl LinearAont {
    /// Verifies `m` at `(ti, to)` and wraps it.
    pub fn new(m: Matrix, ti: usize, to: usize) -> Result<Self, AontError> {
        let report = verify_linear_aont(&m, ti, to)?;
        if !report.passed() {
            return Err(AontError::NotAont { ti, to, report: Box::new(report) });
        }
        let m_inv = m.invert()?.expect("verified matrix is invertible");
        Ok(LinearAont { params: report.params, m, m_inv })
    }

    pub fn params(&self) -> AontParams {
        self.params
    }

    /// The reconstruction matrix `M` (`x = y·M`).
    pub fn matrix(&self) -> &Matrix {
        &self.m
    }

    pub fn inverse_matrix(&self) -> &Matrix {
        &self.m_inv
    }

    pub fn field(&self) -> &Field {
        self.m.field()
    }

    /// `y = x·M⁻¹`.
    pub fn transform(&self, x: &[Fe]) -> Result<Vec<Fe>, AontError> {
        Ok(self.m_inv.row_vec_mul(x)?)
    }

    /// `x = y·M`.
    pub fn inverse_transform(&self, y: &[Fe]) -> Result<Vec<Fe>, AontError> {
        Ok(self.m.row_vec_mul(y)?)
    }
}

fn gf2() -> Field {
    crate::gf::build_field(2, 1, None).expect("GF(2)")
}

fn bastion_matrix(s: usize) -> Matrix {
    let f = gf2();
    let mut m = Matrix::zeros(&f, s, s);
    for r in 0..s {
        for c in 0..s {
            if r != c {
                m.set(r, c, 1);
            }
        }
    }
    m
}

/// The `(1,2,s,2)` transform for even `s`: zero diagonal, ones elsewhere.
/// This matrix is its own inverse.
pub fn construct_even_bastion(s: usize) -> Result<LinearAont, AontError> {
    if s % 2 == 1 {
        return Err(AontError::OddSize(s));
    }
    if s < 2 {
        return Err(AontError::BadSize(format!("even Bastion needs s >= 2, got {s}")));
    }
    LinearAont::new(bastion_matrix(s), 1, 2)
}

/// The `(1,2,s,2)` transform for odd `s >= 3`: all ones except a zero first
/// subdiagonal.
pub fn construct_odd_bastion(s: usize) -> Result<LinearAont, AontError> {
    if s.is_multiple_of(2) {
        return Err(AontError::EvenSize(s));
    }
    if s < 3 {
        return Err(AontError::BadSize(format!("odd Bastion needs s >= 3, got {s}")));
    }
    let f = gf2();
    let mut m = Matrix::zeros(&f, s, s);
    for r in 0..s {
        for c in 0..s {
            if r != c + 1 {
                m.set(r, c, 1);
            }
        }
    }
    LinearAont::new(m, 1, 2)
}

/// `B_s` for odd `s >= 5`: ones on the diagonal, the last row and the last
/// column. A `(2, s-1, s, 2)`-AONT.
pub fn construct_bs(s: usize) -> Result<LinearAont, AontError> {
    if s.is_multiple_of(2) || s < 5 {
        return Err(AontError::BadSize(format!("B_s needs odd s >= 5, got {s}")));
    }
    let f = gf2();
    let mut m = Matrix::zeros(&f, s, s);
    for i in 0..s {
        m.set(i, i, 1);
        m.set(s - 1, i, 1);
        m.set(i, s - 1, 1);
    }
    LinearAont::new(m, 2, s - 1)
}

/// The even Bastion matrix viewed as a `(2, s-1, s, 2)`-AONT, even `s >= 4`.
pub fn construct_even_2s1(s: usize) -> Result<LinearAont, AontError> {
    if s % 2 == 1 || s < 4 {
        return Err(AontError::BadSize(format!("needs even s >= 4, got {s}")));
    }
    LinearAont::new(bastion_matrix(s), 2, s - 1)
}

/// Cauchy matrix `M[i][j] = 1/(x_i - y_j)` with `x_i = i`, `y_j = s + j`
/// (field codes). Requires `q >= 2s`; the result is a `(t,t,s,q)`-AONT for
/// every `1 <= t <= s`.
pub fn construct_cauchy(t: usize, s: usize, field: &Field) -> Result<LinearAont, AontError> {
    let q = field.order();
    if (q as usize) < 2 * s {
        return Err(AontError::FieldTooSmall { q, s });
    }
    if t == 0 || t > s {
        return Err(AontError::BadParams(format!("need 1 <= t <= s, got t = {t}, s = {s}")));
    }
    let mut m = Matrix::zeros(field, s, s);
    for i in 0..s {
        for j in 0..s {
            let diff = field.sub(i as Fe, (s + j) as Fe);
            m.set(i, j, field.inv(diff)?);
        }
    }
    LinearAont::new(m, t, t)
}

/// Deletes row 0 and the first column whose cofactor is invertible,
/// giving a `(t_i, t_o, s-1, q)`-AONT. Requires `s > t_o`.
pub fn shrink_by_cofactor(a: &LinearAont) -> Result<LinearAont, AontError> {
    let AontParams { ti, to, s, .. } = a.params;
    if s <= to {
        return Err(AontError::BadParams(format!("cofactor shrinking needs s > t_o, got s = {s}, t_o = {to}")));
    }
    let rows: Vec<usize> = (1..s).collect();
    for j in 0..s {
        let cols: Vec<usize> = (0..s).filter(|&c| c != j).collect();
        let minor = a.m.submatrix(&Selector::new(rows.clone(), cols))?;
        if minor.is_invertible() {
            return LinearAont::new(minor, ti, to).map_err(|_| AontError::NoInvertibleCofactor);
        }
    }
    Err(AontError::NoInvertibleCofactor)
}

/// Bit-level Bastion transforms over GF(2) with an XOR counter.
pub mod bastion {
    use super::AontError;
    use crate::gf::Fe;

    fn check(s: usize, v: &[Fe]) -> Result<(), AontError> {
        if s < 2 {
            return Err(AontError::BadSize(format!("Bastion needs s >= 2, got {s}")));
        }
        if v.len() != s {
            return Err(AontError::BadSize(format!("vector of length {} for s = {s}", v.len())));
        }
        if v.iter().any(|&b| b > 1) {
            return Err(AontError::BadSize("entries must be 0 or 1".into()));
        }
        Ok(())
    }

    struct Xor<'a>(&'a mut u64);

    impl Xor<'_> {
        fn add(&mut self, a: Fe, b: Fe) -> Fe {
            *self.0 += 1;
            a ^ b
        }

        fn sum(&mut self, v: &[Fe]) -> Fe {
            let mut acc = v[0];
            for &b in &v[1..] {
                acc = self.add(acc, b);
            }
            acc
        }
    }

    /// `y = x·M⁻¹` for the Bastion matrix of size `s` (even or odd variant by
    /// parity). Adds the number of XORs performed to `xors`.
    pub fn fast_bastion_transform(s: usize, x: &[Fe], xors: &mut u64) -> Result<Vec<Fe>, AontError> {
        check(s, x)?;
        let mut ops = Xor(xors);
        if s.is_multiple_of(2) {
            let r = ops.sum(x);
            Ok(x.iter().map(|&xi| ops.add(r, xi)).collect())
        } else {
            let mut y = Vec::with_capacity(s);
            y.push(ops.sum(x));
            for i in 1..s {
                y.push(ops.add(x[i - 1], x[s - 1]));
            }
            Ok(y)
        }
    }

    /// `x = y·M`, the inverse of [`fast_bastion_transform`].
    pub fn fast_bastion_inverse(s: usize, y: &[Fe], xors: &mut u64) -> Result<Vec<Fe>, AontError> {
        check(s, y)?;
        let mut ops = Xor(xors);
        if s.is_multiple_of(2) {
            let r = ops.sum(y);
            Ok(y.iter().map(|&yi| ops.add(r, yi)).collect())
        } else {
            let last = ops.sum(y);
            let mut x: Vec<Fe> = (0..s - 1).map(|i| ops.add(last, y[i + 1])).collect();
            x.push(last);
            Ok(x)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::bastion::*;
    use super::*;
    use crate::gf::field_of_order;

    fn mat(q: u32, rows: &[&[u32]]) -> Matrix {
        Matrix::from_rows(&field_of_order(q).unwrap(), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn e232() -> Matrix {
        mat(2, &[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 1], &[1, 1, 1, 0]])
    }

    /// Brute-force oracle: first rank-deficient selector in (rows, cols) order.
    fn brute_first_witness(m: &Matrix, ti: usize, to: usize) -> Option<Witness> {
        let s = m.n_rows();
        for rows in (0..s).combinations(to) {
            for cols in (0..s).combinations(ti) {
                let r = m.submatrix(&Selector::new(rows.clone(), cols.clone())).unwrap().rank_generic();
                if r < ti {
                    return Some(Witness { rows, cols, rank: r });
                }
            }
        }
        None
    }

    #[test]
    fn e232_passes_at_2_3() {
        let rep = verify_linear_aont(&e232(), 2, 3).unwrap();
        assert!(rep.passed());
        assert_eq!(rep.checked, 4 * 6);
        assert!(rep.invertible);
    }

    #[test]
    fn e232_fails_at_2_2_with_first_witness() {
        let m = e232();
        let rep = verify_linear_aont(&m, 2, 2).unwrap();
        assert_eq!(rep.verdict, Verdict::Fail);
        let w = rep.witness.clone().unwrap();
        assert_eq!(Some(w.clone()), brute_first_witness(&m, 2, 2));
        // rows {0,1}, cols {0,1} is the identity; cols {0,2} gives [[1,0],[0,0]]
        assert_eq!(w, Witness { rows: vec![0, 1], cols: vec![0, 2], rank: 1 });
        assert_eq!(rep.checked, 2);
        assert_eq!(verify_linear_aont_par(&m, 2, 2).unwrap(), rep);
    }

    #[test]
    fn singular_matrix_reports_not_invertible() {
        let m = mat(2, &[&[1, 1], &[1, 1]]);
        let rep = verify_linear_aont(&m, 1, 2).unwrap();
        assert!(!rep.invertible);
        assert!(rep.witness.is_none());
        assert_eq!(rep.verdict, Verdict::Fail);
    }

    #[test]
    fn bad_params_rejected() {
        let m = e232();
        assert!(matches!(verify_linear_aont(&m, 3, 2), Err(AontError::BadParams(_))));
        assert!(matches!(verify_linear_aont(&m, 0, 2), Err(AontError::BadParams(_))));
        assert!(matches!(verify_linear_aont(&m, 2, 5), Err(AontError::BadParams(_))));
        let rect = Matrix::zeros(m.field(), 2, 3);
        assert!(matches!(verify_linear_aont(&rect, 1, 1), Err(AontError::Matrix(_))));
    }

    #[test]
    fn identity_is_t_s_aont() {
        for q in [2, 3, 4] {
            let f = field_of_order(q).unwrap();
            for s in 1..=5 {
                for ti in 1..=s {
                    assert!(verify_linear_aont(&Matrix::identity(&f, s), ti, s).unwrap().passed());
                }
            }
        }
    }

    #[test]
    fn even_bastion() {
        let a = construct_even_bastion(4).unwrap();
        assert_eq!(a.params(), AontParams { ti: 1, to: 2, s: 4, q: 2 });
        assert_eq!(a.matrix().mul(a.matrix()).unwrap(), Matrix::identity(a.field(), 4));
        assert_eq!(a.transform(&[1, 0, 0, 0]).unwrap(), vec![0, 1, 1, 1]);
        assert_eq!(a.inverse_transform(&[0, 1, 1, 1]).unwrap(), vec![1, 0, 0, 0]);
        assert_eq!(a.transform(&[0; 4]).unwrap(), vec![0; 4]);
        assert_eq!(a.inverse_transform(&[0; 4]).unwrap(), vec![0; 4]);
        assert_eq!(construct_even_bastion(3).unwrap_err(), AontError::OddSize(3));
        assert!(matches!(a.transform(&[1, 0]), Err(AontError::Matrix(MatrixError::DimensionMismatch(_)))));
        // negative control: no (2,2,s,2)-AONT for s > 2
        assert!(!verify_linear_aont(a.matrix(), 2, 2).unwrap().passed());
    }

    #[test]
    fn odd_bastion_matches_display() {
        let a = construct_odd_bastion(5).unwrap();
        let m = mat(
            2,
            &[&[1, 1, 1, 1, 1], &[0, 1, 1, 1, 1], &[1, 0, 1, 1, 1], &[1, 1, 0, 1, 1], &[1, 1, 1, 0, 1]],
        );
        let minv = mat(
            2,
            &[&[1, 1, 0, 0, 0], &[1, 0, 1, 0, 0], &[1, 0, 0, 1, 0], &[1, 0, 0, 0, 1], &[1, 1, 1, 1, 1]],
        );
        assert_eq!(a.matrix(), &m);
        assert_eq!(a.inverse_matrix(), &minv);
        assert_eq!(a.transform(&[1, 0, 0, 0, 0]).unwrap(), vec![1, 1, 0, 0, 0]);
        assert_eq!(a.inverse_transform(&[1, 1, 0, 0, 0]).unwrap(), vec![1, 0, 0, 0, 0]);
        assert!(construct_odd_bastion(3).is_ok());
        assert_eq!(construct_odd_bastion(4).unwrap_err(), AontError::EvenSize(4));
        assert!(matches!(construct_odd_bastion(1), Err(AontError::BadSize(_))));
    }

    #[test]
    fn bs_matrices() {
        let b5 = construct_bs(5).unwrap();
        let expect = mat(
            2,
            &[&[1, 0, 0, 0, 1], &[0, 1, 0, 0, 1], &[0, 0, 1, 0, 1], &[0, 0, 0, 1, 1], &[1, 1, 1, 1, 1]],
        );
        assert_eq!(b5.matrix(), &expect);
        assert_eq!(b5.params(), AontParams { ti: 2, to: 4, s: 5, q: 2 });
        for s in [7, 9, 11] {
            assert_eq!(construct_bs(s).unwrap().params().to, s - 1);
        }
        assert!(construct_bs(3).is_err());
        assert!(construct_bs(6).is_err());
    }

    #[test]
    fn even_2s1() {
        for s in [4, 6, 8, 10] {
            assert_eq!(construct_even_2s1(s).unwrap().params(), AontParams { ti: 2, to: s - 1, s, q: 2 });
        }
        assert!(matches!(construct_even_2s1(2), Err(AontError::BadSize(_))));
        assert!(matches!(construct_even_2s1(5), Err(AontError::BadSize(_))));
    }

    #[test]
    fn cauchy() {
        let f5 = field_of_order(5).unwrap();
        assert!(construct_cauchy(1, 2, &f5).is_ok());
        assert!(construct_cauchy(2, 2, &f5).is_ok());
        let f7 = field_of_order(7).unwrap();
        assert!(construct_cauchy(2, 3, &f7).is_ok());
        assert_eq!(construct_cauchy(2, 3, &f5).unwrap_err(), AontError::FieldTooSmall { q: 5, s: 3 });
        for q in [8u32, 9, 11, 16] {
            let f = field_of_order(q).unwrap();
            let s = q as usize / 2;
            let m = construct_cauchy(1, s, &f).unwrap().matrix().clone();
            for t in 1..=s {
                assert!(verify_linear_aont(&m, t, t).unwrap().passed(), "q={q} t={t}");
            }
        }
    }

    #[test]
    fn cofactor_shrinking() {
        // the identity only qualifies at t_o = s, so it can never be shrunk
        let i3 = LinearAont::new(Matrix::identity(&field_of_order(3).unwrap(), 3), 1, 3).unwrap();
        assert!(matches!(shrink_by_cofactor(&i3), Err(AontError::BadParams(_))));
        let b6 = construct_even_bastion(6).unwrap();
        let b5 = shrink_by_cofactor(&b6).unwrap();
        assert_eq!(b5.params(), AontParams { ti: 1, to: 2, s: 5, q: 2 });
        // deleting column 0 leaves the odd-size Bastion pattern, which is singular,
        // so the least invertible cofactor is at column 1
        let expect = b6.matrix().submatrix(&Selector::new(vec![1, 2, 3, 4, 5], vec![0, 2, 3, 4, 5])).unwrap();
        assert_eq!(b5.matrix(), &expect);
        let too_small = LinearAont::new(e232(), 2, 3).unwrap();
        let shrunk = shrink_by_cofactor(&too_small).unwrap();
        assert_eq!(shrunk.params(), AontParams { ti: 2, to: 3, s: 3, q: 2 });
        assert!(matches!(shrink_by_cofactor(&shrunk), Err(AontError::BadParams(_))));
    }

    #[test]
    fn fast_bastion_agrees_with_matrix_path() {
        for s in 2..=10usize {
            let a = if s % 2 == 0 { construct_even_bastion(s) } else { construct_odd_bastion(s) }.unwrap();
            for code in 0..(1u32 << s) {
                let x: Vec<Fe> = (0..s).map(|i| (code >> i) & 1).collect();
                let (mut fx, mut ix) = (0, 0);
                let y = fast_bastion_transform(s, &x, &mut fx).unwrap();
                assert_eq!(y, a.transform(&x).unwrap());
                let back = fast_bastion_inverse(s, &y, &mut ix).unwrap();
                assert_eq!(back, x);
                if s % 2 == 1 {
                    assert_eq!(fx, 2 * s as u64 - 2);
                    assert_eq!(ix, 2 * s as u64 - 2);
                } else {
                    assert_eq!(fx, 2 * s as u64 - 1);
                }
            }
        }
        let mut n = 0;
        assert!(fast_bastion_transform(1, &[1], &mut n).is_err());
        assert!(fast_bastion_transform(3, &[1, 0], &mut n).is_err());
        assert!(fast_bastion_transform(3, &[1, 0, 2], &mut n).is_err());
    }
}
