//! Dense matrices over GF(q) and Gaussian elimination.
//!
//! Matrices carry no field reference; every operation that needs
//! arithmetic takes the `Field` explicitly.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}[", self.rows, self.cols)?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, ";")?;
            }
            for v in self.row(r) {
                write!(f, "{}", crate::subspace::digit_char(*v))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<FieldElement>) -> Matrix {
        assert_eq!(rows * cols, data.len(), "entry count must be rows * cols");
        Matrix { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![FieldElement::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, FieldElement::ONE);
        }
        m
    }

    /// Convenience constructor from raw encoded rows.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Matrix {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend(r.as_ref().iter().map(|&v| FieldElement(v)));
        }
        Matrix { rows: rows.len(), cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn data(&self) -> &[FieldElement] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[FieldElement] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    /// Checks that every entry encodes an element of `field`.
    pub fn check_field(&self, field: &Field) -> Result<()> {
        match self.data.iter().find(|&&v| !field.contains(v)) {
            Some(v) => Err(Error::FieldMismatch(v.value(), field.order())),
            None => Ok(()),
        }
    }

    /// Columns `start..end` as a new matrix.
    pub fn column_block(&self, start: usize, end: usize) -> Matrix {
        let w = end - start;
        let mut data = Vec::with_capacity(self.rows * w);
        for r in 0..self.rows {
            data.extend_from_slice(&self.row(r)[start..end]);
        }
        Matrix { rows: self.rows, cols: w, data }
    }

    /// `self` on top of `other`.
    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack needs equal column counts");
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack needs equal row counts");
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Matrix { rows: self.rows, cols, data }
    }

    pub fn mul(&self, other: &Matrix, field: &Field) -> Matrix {
        assert_eq!(self.cols, other.rows, "inner dimensions must agree");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.is_zero() {
                    continue;
                }
                for c in 0..other.cols {
                    let cur = out.get(r, c);
                    out.set(r, c, field.add(cur, field.mul(a, other.get(k, c))));
                }
            }
        }
        out
    }

    /// Applies a lookup table entrywise (used for Frobenius twists).
    pub fn map_entries(&self, table: &[FieldElement]) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| table[v.0 as usize]).collect() }
    }

    /// Reduced row echelon form and rank.
    pub fn rref(&self, field: &Field) -> Result<(Matrix, usize)> {
        self.check_field(field)?;
        let mut m = self.clone();
        let rank = rref_in_place(&mut m.data, m.rows, m.cols, field);
        Ok((m, rank))
    }

    pub fn rank(&self, field: &Field) -> usize {
        let mut data = self.data.clone();
        rref_in_place(&mut data, self.rows, self.cols, field)
    }

    /// The first `rows` rows.
    pub fn truncate_rows(&self, rows: usize) -> Matrix {
        Matrix { rows, cols: self.cols, data: self.data[..rows * self.cols].to_vec() }
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.set(c, r, self.get(r, c));
            }
        }
        out
    }

    /// Inverse of a square matrix, `None` if singular.
    pub fn inverse(&self, field: &Field) -> Option<Matrix> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Matrix::identity(n));
        let mut data = aug.data;
        let rank = rref_in_place(&mut data, n, 2 * n, field);
        let reduced = Matrix { rows: n, cols: 2 * n, data };
        if rank < n || reduced.column_block(0, n) != Matrix::identity(n) {
            return None;
        }
        Some(reduced.column_block(n, 2 * n))
    }
}

/// Row-reduces a row-major `rows x cols` buffer in place and returns the
/// rank. Nonzero rows end up first, in reduced echelon form.
pub fn rref_in_place(data: &mut [FieldElement], rows: usize, cols: usize, field: &Field) -> usize {
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(pivot) = (rank..rows).find(|&r| !data[r * cols + col].is_zero()) else {
            continue;
        };
        if pivot != rank {
            for c in 0..cols {
                data.swap(pivot * cols + c, rank * cols + c);
            }
        }
        let inv = field.inv(data[rank * cols + col]).expect("pivot is nonzero");
        if inv != FieldElement::ONE {
            for c in col..cols {
                data[rank * cols + c] = field.mul(data[rank * cols + c], inv);
            }
        }
        for r in 0..rows {
            if r == rank {
                continue;
            }
            let factor = data[r * cols + col];
            if factor.is_zero() {
                continue;
            }
            let factor = field.neg(factor);
            for c in col..cols {
                let t = field.mul(factor, data[rank * cols + c]);
                data[r * cols + c] = field.add(data[r * cols + c], t);
            }
        }
        rank += 1;
    }
    rank
}

/// Rank of the rows of `a` stacked over the rows of `b`, restricted to the
/// first `width` columns. Both matrices must have at least `width` columns.
pub fn stacked_rank(a: &Matrix, b: &Matrix, width: usize, field: &Field) -> usize {
    let rows = a.rows + b.rows;
    let mut buf = Vec::with_capacity(rows * width);
    for r in 0..a.rows {
        buf.extend_from_slice(&a.row(r)[..width]);
    }
    for r in 0..b.rows {
        buf.extend_from_slice(&b.row(r)[..width]);
    }
    rref_in_place(&mut buf, rows, width, field)
}

/// Every `dim x cols` matrix in reduced row echelon form of full rank,
/// i.e. one canonical basis for each `dim`-subspace of `F_q^cols`.
/// Order: pivot sets lexicographically, then free entries in odometer order.
pub fn enumerate_rref(dim: usize, cols: usize, field: &Field) -> Vec<Matrix> {
    let mut out = Vec::new();
    if dim > cols {
        return out;
    }
    let q = field.order() as u8;
    let mut pivots: Vec<usize> = (0..dim).collect();
    loop {
        // free positions: (row, col) with col > pivot[row] and col not a pivot
        let free: Vec<(usize, usize)> = (0..dim)
            .flat_map(|r| {
                let pv = &pivots;
                (pv[r] + 1..cols).filter(move |c| !pv.contains(c)).map(move |c| (r, c))
            })
            .collect();
        let mut base = Matrix::zeros(dim, cols);
        for (r, &c) in pivots.iter().enumerate() {
            base.set(r, c, FieldElement::ONE);
        }
        let mut digits = vec![0u8; free.len()];
        'odometer: loop {
            let mut m = base.clone();
            for (&(r, c), &d) in free.iter().zip(&digits) {
                m.set(r, c, FieldElement(d));
            }
            out.push(m);
            for k in (0..free.len()).rev() {
                digits[k] += 1;
                if digits[k] < q {
                    continue 'odometer;
                }
                digits[k] = 0;
            }
            break;
        }
        if !next_combination(&mut pivots, cols) {
            break;
        }
    }
    out
}

fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// All vectors of `F_q^len` in odometer order.
pub fn all_vectors(len: usize, field: &Field) -> Vec<Vec<FieldElement>> {
    let q = field.order() as usize;
    let total = q.pow(len as u32);
    (0..total)
        .map(|mut idx| {
            let mut v = vec![FieldElement::ZERO; len];
            for slot in v.iter_mut().rev() {
                *slot = FieldElement((idx % q) as u8);
                idx /= q;
            }
            v
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u32) -> Field {
        Field::new(q).unwrap()
    }

    #[test]
    fn rref_identity_is_fixed() {
        let f = gf(2);
        let (r, rank) = Matrix::identity(3).rref(&f).unwrap();
        assert_eq!(r, Matrix::identity(3));
        assert_eq!(rank, 3);
    }

    #[test]
    fn rref_hand_example() {
        let f = gf(2);
        let m = Matrix::from_rows(&[[1, 1, 0], [0, 1, 1]]);
        let (r, rank) = m.rref(&f).unwrap();
        assert_eq!(r, Matrix::from_rows(&[[1, 0, 1], [0, 1, 1]]));
        assert_eq!(rank, 2);
    }

    #[test]
    fn rref_zero_matrix() {
        let f = gf(3);
        let (r, rank) = Matrix::zeros(2, 4).rref(&f).unwrap();
        assert!(r.is_zero());
        assert_eq!(rank, 0);
    }

    #[test]
    fn rref_rejects_foreign_entries() {
        let f = gf(2);
        let m = Matrix::from_rows(&[[1, 2]]);
        assert_eq!(m.rref(&f), Err(Error::FieldMismatch(2, 2)));
    }

    #[test]
    fn inverse_round_trip() {
        let f = gf(5);
        let m = Matrix::from_rows(&[[1, 2, 0], [3, 4, 1], [0, 1, 1]]);
        let inv = m.inverse(&f).unwrap();
        assert_eq!(m.mul(&inv, &f), Matrix::identity(3));
        assert!(Matrix::from_rows(&[[1, 2], [2, 4]]).inverse(&f).is_none());
    }

    #[test]
    fn rref_enumeration_counts_are_gaussian_binomials() {
        // [4 choose 2]_2 = 35, [4 choose 1]_2 = 15, [4 choose 2]_3 = 130
        assert_eq!(enumerate_rref(2, 4, &gf(2)).len(), 35);
        assert_eq!(enumerate_rref(1, 4, &gf(2)).len(), 15);
        assert_eq!(enumerate_rref(2, 4, &gf(3)).len(), 130);
        assert_eq!(enumerate_rref(0, 3, &gf(2)).len(), 1);
        assert_eq!(enumerate_rref(3, 3, &gf(4)).len(), 1);
        assert_eq!(enumerate_rref(4, 3, &gf(2)).len(), 0);
    }

    #[test]
    fn enumerated_rrefs_are_fixed_points_and_distinct() {
        let f = gf(3);
        let all = enumerate_rref(2, 4, &f);
        let mut seen = std::collections::HashSet::new();
        for m in &all {
            let (r, rank) = m.rref(&f).unwrap();
            assert_eq!(&r, m);
            assert_eq!(rank, 2);
            assert!(seen.insert(m.clone()));
        }
    }
}
