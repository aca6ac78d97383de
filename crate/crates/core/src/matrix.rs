//! Dense matrices over a [`Field`].

use std::fmt;

use thiserror::Error;

use crate::gf::{Fe, Field, FieldError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MatrixError {
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for dimension {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("selector indices must be strictly increasing")]
    UnsortedSelector,
    #[error("entry {value} at ({row}, {col}) is not a field element")]
    BadEntry { row: usize, col: usize, value: u64 },
    #[error("matrices are over different fields")]
    FieldMismatch,
    #[error("matrix file parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// Row and column index lists for [`Matrix::submatrix`]. Both must be
/// strictly increasing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Selector {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl Selector {
    pub fn new(rows: Vec<usize>, cols: Vec<usize>) -> Self {
        Selector { rows, cols }
    }

    pub fn full(n_rows: usize, n_cols: usize) -> Self {
        Selector { rows: (0..n_rows).collect(), cols: (0..n_cols).collect() }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Fe>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{:?} {}x{}", self.field, self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix { field: field.clone(), rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from row-major entries, validating every code.
    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Fe>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::DimensionMismatch(format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        if let Some(i) = data.iter().position(|&v| !field.contains(v)) {
            return Err(MatrixError::BadEntry { row: i / cols, col: i % cols, value: data[i] as u64 });
        }
        Ok(Matrix { field: field.clone(), rows, cols, data })
    }

    pub fn from_rows(field: &Field, rows: &[Vec<Fe>]) -> Result<Self, MatrixError> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(r) = rows.iter().find(|r| r.len() != cols) {
            return Err(MatrixError::DimensionMismatch(format!(
                "ragged rows: {} vs {} entries",
                r.len(),
                cols
            )));
        }
        Self::from_vec(field, rows.len(), cols, rows.concat())
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Fe {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Fe) {
        assert!(self.field.contains(v), "entry {v} not in field");
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Fe] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Fe] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<Fe>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c);
            }
        }
        t
    }

    pub fn submatrix(&self, sel: &Selector) -> Result<Matrix, MatrixError> {
        check_indices(&sel.rows, self.rows)?;
        check_indices(&sel.cols, self.cols)?;
        let mut data = Vec::with_capacity(sel.rows.len() * sel.cols.len());
        for &r in &sel.rows {
            for &c in &sel.cols {
                data.push(self.get(r, c));
            }
        }
        Ok(Matrix { field: self.field.clone(), rows: sel.rows.len(), cols: sel.cols.len(), data })
    }

    /// Row rank. Over GF(2) with at most 64 columns this uses the bit-packed
    /// routine; otherwise [`Matrix::rank_generic`].
    pub fn rank(&self) -> usize {
        if self.field.order() == 2 && self.cols <= 64 {
            let mut packed = self.pack_gf2_rows();
            gf2::rank(&mut packed)
        } else {
            self.rank_generic()
        }
    }

    /// Rank by Gaussian elimination over the field, pivoting on the first
    /// nonzero entry of each column. Stops once every column has been used.
    pub fn rank_generic(&self) -> usize {
        let mut work = self.data.clone();
        rank_in_place(&self.field, &mut work, self.rows, self.cols)
    }

    /// Rows as bit masks, column `c` at bit `c`. GF(2) only.
    pub fn pack_gf2_rows(&self) -> Vec<u64> {
        assert_eq!(self.field.order(), 2);
        assert!(self.cols <= 64);
        (0..self.rows)
            .map(|r| self.row(r).iter().enumerate().fold(0u64, |acc, (c, &v)| acc | ((v as u64) << c)))
            .collect()
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn invert(&self) -> Result<Option<Matrix>, MatrixError> {
        if !self.is_square() {
            return Err(MatrixError::NotSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let f = &self.field;
        let mut a = self.data.clone();
        let mut inv = Matrix::identity(f, n).data;
        for col in 0..n {
            let Some(piv) = (col..n).find(|&r| a[r * n + col] != 0) else {
                return Ok(None);
            };
            if piv != col {
                for c in 0..n {
                    a.swap(piv * n + c, col * n + c);
                    inv.swap(piv * n + c, col * n + c);
                }
            }
            let scale = f.inv_nz(a[col * n + col]);
            for c in 0..n {
                a[col * n + c] = f.mul(a[col * n + c], scale);
                inv[col * n + c] = f.mul(inv[col * n + c], scale);
            }
            for r in 0..n {
                let factor = a[r * n + col];
                if r == col || factor == 0 {
                    continue;
                }
                for c in 0..n {
                    a[r * n + c] = f.sub(a[r * n + c], f.mul(factor, a[col * n + c]));
                    inv[r * n + c] = f.sub(inv[r * n + c], f.mul(factor, inv[col * n + c]));
                }
            }
        }
        Ok(Some(Matrix { field: f.clone(), rows: n, cols: n, data: inv }))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, MatrixError> {
        if self.field != other.field {
            return Err(MatrixError::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let idx = r * other.cols + c;
                    out.data[idx] = f.add(out.data[idx], f.mul(a, other.get(k, c)));
                }
            }
        }
        Ok(out)
    }

    /// Row vector times matrix: `x · M`.
    pub fn row_vec_mul(&self, x: &[Fe]) -> Result<Vec<Fe>, MatrixError> {
        if x.len() != self.rows {
            return Err(MatrixError::DimensionMismatch(format!(
                "vector of length {} times {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        if let Some(i) = x.iter().position(|&v| !self.field.contains(v)) {
            return Err(MatrixError::BadEntry { row: 0, col: i, value: x[i] as u64 });
        }
        let f = &self.field;
        let mut y = vec![0; self.cols];
        for (r, &xr) in x.iter().enumerate() {
            if xr == 0 {
                continue;
            }
            for (c, yc) in y.iter_mut().enumerate() {
                *yc = f.add(*yc, f.mul(xr, self.get(r, c)));
            }
        }
        Ok(y)
    }

    /// Serializes in the text matrix format: field header, `rows cols`, then
    /// one line of space-separated codes per row.
    pub fn to_text(&self) -> String {
        let mut s = self.field.header();
        s.push('\n');
        s.push_str(&format!("{} {}\n", self.rows, self.cols));
        for r in 0..self.rows {
            let line: Vec<String> = self.row(r).iter().map(u32::to_string).collect();
            s.push_str(&line.join(" "));
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str) -> Result<Matrix, MatrixError> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let parse_err = |line: usize, msg: &str| MatrixError::Parse { line: line + 1, msg: msg.to_string() };
        let (hl, header) = lines.next().ok_or_else(|| parse_err(0, "missing field header"))?;
        let field = Field::parse_header(header).map_err(|e| parse_err(hl, &e.to_string()))?;
        let (dl, dims) = lines.next().ok_or_else(|| parse_err(hl + 1, "missing dimensions"))?;
        let dims: Vec<usize> = dims
            .split_whitespace()
            .map(|t| t.parse().map_err(|_| parse_err(dl, "bad dimension")))
            .collect::<Result<_, _>>()?;
        let [rows, cols] = dims[..] else {
            return Err(parse_err(dl, "expected `rows cols`"));
        };
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            let (ln, line) = lines.next().ok_or_else(|| parse_err(dl + r + 1, "missing row"))?;
            let vals: Vec<u64> = line
                .split_whitespace()
                .map(|t| t.parse().map_err(|_| parse_err(ln, "bad entry")))
                .collect::<Result<_, _>>()?;
            if vals.len() != cols {
                return Err(parse_err(ln, &format!("expected {cols} entries, found {}", vals.len())));
            }
            for (c, v) in vals.into_iter().enumerate() {
                if v >= field.order() as u64 {
                    return Err(MatrixError::BadEntry { row: r, col: c, value: v });
                }
                data.push(v as Fe);
            }
        }
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, "trailing data after last row"));
        }
        Ok(Matrix { field, rows, cols, data })
    }
}

fn check_indices(idx: &[usize], len: usize) -> Result<(), MatrixError> {
    if let Some(&bad) = idx.iter().find(|&&i| i >= len) {
        return Err(MatrixError::IndexOutOfRange { index: bad, len });
    }
    if idx.windows(2).any(|w| w[0] >= w[1]) {
        return Err(MatrixError::UnsortedSelector);
    }
    Ok(())
}

/// Rank of a row-major `rows x cols` buffer, destroyed in the process.
pub(crate) fn rank_in_place(f: &Field, a: &mut [Fe], rows: usize, cols: usize) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(piv) = (rank..rows).find(|&r| a[r * cols + col] != 0) else {
            continue;
        };
        if piv != rank {
            for c in col..cols {
                a.swap(piv * cols + c, rank * cols + c);
            }
        }
        let pinv = f.inv_nz(a[rank * cols + col]);
        for r in rank + 1..rows {
            let v = a[r * cols + col];
            if v == 0 {
                continue;
            }
            let factor = f.mul(v, pinv);
            for c in col..cols {
                a[r * cols + c] = f.sub(a[r * cols + c], f.mul(factor, a[rank * cols + c]));
            }
        }
        rank += 1;
    }
    rank
}

/// Bit-packed GF(2) linear algebra on rows stored as `u64` masks.
pub mod gf2 {
    /// Rank of the rows by XOR elimination. The slice is used as scratch.
    pub fn rank(rows: &mut [u64]) -> usize {
        let mut rank = 0;
        let n = rows.len();
        while rank < n {
            let Some(pi) = (rank..n).find(|&i| rows[i] != 0) else {
                break;
            };
            rows.swap(rank, pi);
            let pivot = rows[rank];
            let bit = pivot & pivot.wrapping_neg();
            for r in rows[rank + 1..].iter_mut() {
                if *r & bit != 0 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
        rank
    }

    /// Whether the rows have rank at least `limit`; stops as soon as `limit`
    /// pivots are found.
    pub fn rank_reaches(rows: &mut [u64], limit: usize) -> bool {
        let mut rank = 0;
        let n = rows.len();
        while rank < n {
            if rank >= limit {
                return true;
            }
            let Some(pi) = (rank..n).find(|&i| rows[i] != 0) else {
                break;
            };
            rows.swap(rank, pi);
            let pivot = rows[rank];
            let bit = pivot & pivot.wrapping_neg();
            for r in rows[rank + 1..].iter_mut() {
                if *r & bit != 0 {
                    *r ^= pivot;
                }
            }
            rank += 1;
        }
        rank >= limit
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::build_field;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn gf(q: u32) -> Field {
        crate::gf::field_of_order(q).unwrap()
    }

    fn m(q: u32, rows: &[&[u32]]) -> Matrix {
        Matrix::from_rows(&gf(q), &rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn e232() -> Matrix {
        m(2, &[&[1, 0, 0, 1], &[0, 1, 0, 1], &[0, 0, 1, 1], &[1, 1, 1, 0]])
    }

    #[test]
    fn rank_basics() {
        for s in 1..6 {
            assert_eq!(Matrix::identity(&gf(3), s).rank(), s);
        }
        assert_eq!(Matrix::zeros(&gf(2), 4, 2).rank(), 0);
        let b5 = m(
            2,
            &[&[1, 0, 0, 0, 1], &[0, 1, 0, 0, 1], &[0, 0, 1, 0, 1], &[0, 0, 0, 1, 1], &[1, 1, 1, 1, 1]],
        );
        assert_eq!(b5.rank(), 5);
        assert_eq!(b5.rank_generic(), 5);
    }

    #[test]
    fn invert_identity_and_singular() {
        let i = Matrix::identity(&gf(5), 4);
        assert_eq!(i.invert().unwrap().unwrap(), i);
        let sing = m(3, &[&[1, 2, 0], &[1, 2, 0], &[0, 1, 1]]);
        assert_eq!(sing.invert().unwrap(), None);
        let rect = Matrix::zeros(&gf(2), 2, 3);
        assert!(matches!(rect.invert(), Err(MatrixError::NotSquare { .. })));
    }

    #[test]
    fn odd_bastion_pair() {
        let mm = m(
            2,
            &[&[1, 1, 1, 1, 1], &[0, 1, 1, 1, 1], &[1, 0, 1, 1, 1], &[1, 1, 0, 1, 1], &[1, 1, 1, 0, 1]],
        );
        let minv = m(
            2,
            &[&[1, 1, 0, 0, 0], &[1, 0, 1, 0, 0], &[1, 0, 0, 1, 0], &[1, 0, 0, 0, 1], &[1, 1, 1, 1, 1]],
        );
        assert_eq!(mm.invert().unwrap().unwrap(), minv);
        assert_eq!(mm.mul(&minv).unwrap(), Matrix::identity(&gf(2), 5));
    }

    #[test]
    fn even_bastion_row_vec() {
        let mut mm = Matrix::zeros(&gf(2), 4, 4);
        for r in 0..4 {
            for c in 0..4 {
                if r != c {
                    mm.set(r, c, 1);
                }
            }
        }
        let minv = mm.invert().unwrap().unwrap();
        assert_eq!(minv.row_vec_mul(&[1, 0, 0, 0]).unwrap(), vec![0, 1, 1, 1]);
        let x = [1, 0, 1, 1];
        assert_eq!(Matrix::identity(&gf(2), 4).row_vec_mul(&x).unwrap(), x.to_vec());
        assert!(matches!(mm.row_vec_mul(&[1, 0]), Err(MatrixError::DimensionMismatch(_))));
    }

    #[test]
    fn submatrix_cases() {
        let a = e232();
        assert_eq!(a.submatrix(&Selector::full(4, 4)).unwrap(), a);
        let i = Matrix::identity(&gf(2), 3);
        assert_eq!(i.submatrix(&Selector::new(vec![0], vec![0])).unwrap().entries(), &[1]);
        let blk = a.submatrix(&Selector::new(vec![1, 2], vec![0, 1])).unwrap();
        // rows (0,1) and (0,0): by hand that block has rank 1
        assert_eq!(blk.to_rows(), vec![vec![0, 1], vec![0, 0]]);
        assert_eq!(blk.rank(), 1);
        assert!(matches!(
            a.submatrix(&Selector::new(vec![4], vec![0])),
            Err(MatrixError::IndexOutOfRange { index: 4, len: 4 })
        ));
        assert!(matches!(
            a.submatrix(&Selector::new(vec![1, 0], vec![0])),
            Err(MatrixError::UnsortedSelector)
        ));
    }

    fn all_matrices(q: u32, n: usize) -> impl Iterator<Item = Matrix> {
        let f = gf(q);
        let total = (q as u64).pow((n * n) as u32);
        (0..total).map(move |mut code| {
            let mut data = vec![0; n * n];
            for d in data.iter_mut() {
                *d = (code % q as u64) as u32;
                code /= q as u64;
            }
            Matrix::from_vec(&f, n, n, data).unwrap()
        })
    }

    #[test]
    fn exhaustive_3x3_rank_and_inverse() {
        let mut invertible = 0;
        for a in all_matrices(2, 3) {
            assert_eq!(a.rank(), a.transpose().rank());
            assert_eq!(a.rank(), a.rank_generic());
            let inv = a.invert().unwrap();
            assert_eq!(inv.is_some(), a.rank() == 3);
            if let Some(inv) = inv {
                invertible += 1;
                assert_eq!(a.mul(&inv).unwrap(), Matrix::identity(a.field(), 3));
            }
        }
        assert_eq!(invertible, 168);
        let mut invertible3 = 0;
        for a in all_matrices(3, 3) {
            assert_eq!(a.rank(), a.transpose().rank());
            if a.invert().unwrap().is_some() {
                invertible3 += 1;
                assert_eq!(a.rank(), 3);
            }
        }
        // |GL(3,3)| = (27-1)(27-3)(27-9)
        assert_eq!(invertible3, 26 * 24 * 18);
    }

    #[test]
    fn packed_rank_agrees_with_generic() {
        let f = gf(2);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let rows = rng.gen_range(1..=16);
            let cols = rng.gen_range(1..=16);
            let density = rng.gen_range(0.05..0.95);
            let data = (0..rows * cols).map(|_| rng.gen_bool(density) as u32).collect();
            let a = Matrix::from_vec(&f, rows, cols, data).unwrap();
            let mut packed = a.pack_gf2_rows();
            assert_eq!(gf2::rank(&mut packed), a.rank_generic());
        }
    }

    #[test]
    fn rank_reaches_limit() {
        let mut rows = vec![0b001u64, 0b010, 0b011];
        assert!(gf2::rank_reaches(&mut rows.clone(), 2));
        assert!(!gf2::rank_reaches(&mut rows, 3));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let f = build_field(2, 2, None).unwrap();
        let a = Matrix::from_rows(&f, &[vec![0, 1, 2], vec![3, 2, 1]]).unwrap();
        let text = a.to_text();
        assert_eq!(text, "4 2 2 1 1 1\n2 3\n0 1 2\n3 2 1\n");
        assert_eq!(Matrix::parse(&text).unwrap(), a);
        assert_eq!(Matrix::parse(&text).unwrap().to_text(), text);
        assert!(matches!(Matrix::parse("2 2 1 0 1\n2 2\n0 1\n1\n"), Err(MatrixError::Parse { .. })));
        assert!(matches!(Matrix::parse("2 2 1 0 1\n1 2\n0 2\n"), Err(MatrixError::BadEntry { .. })));
        assert!(matches!(Matrix::parse("6 2 1 0 1\n1 1\n0\n"), Err(MatrixError::Parse { .. })));
    }
}
