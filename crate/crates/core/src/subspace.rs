//! Subspaces of the singular linear space `F_q^(n+l)`.
//!
//! The first `n` coordinates form the left block `P'`, the last `l` the
//! right block `P''`; the distinguished space `E` is spanned by the last
//! `l` unit vectors and is never stored explicitly.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{self, Field, FieldElement};
use crate::matrix::{enumerate_rref, rref_in_place, stacked_rank, Matrix};

/// Serialization uses one character per entry, so q is capped at 36.
pub const MAX_SERIALIZABLE_Q: u32 = 36;

/// Vertex sets larger than this are refused (IDs are `u32`).
pub const MAX_VERTICES: u128 = 1 << 31;

pub fn digit_char(v: FieldElement) -> char {
    std::char::from_digit(v.value(), MAX_SERIALIZABLE_Q).unwrap_or('?')
}

/// The parameters `(q, n, l, m)` of the scheme on subspaces of type
/// `(m, 0)` in `F_q^(n+l)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct AmbientParams {
    pub q: u32,
    pub n: usize,
    pub l: usize,
    pub m: usize,
}

impl AmbientParams {
    /// Checks that q is a serializable prime power and `m <= n`.
    pub fn new(q: u32, n: usize, l: usize, m: usize) -> Result<AmbientParams> {
        if !field::is_prime_power(q) {
            return Err(Error::NotPrimePower(q));
        }
        if q > MAX_SERIALIZABLE_Q {
            return Err(Error::Parameter(format!("q = {q} exceeds {MAX_SERIALIZABLE_Q}")));
        }
        if n == 0 {
            return Err(Error::Parameter("n must be positive".into()));
        }
        if m > n {
            return Err(Error::Parameter(format!("m = {m} exceeds n = {n}")));
        }
        Ok(AmbientParams { q, n, l, m })
    }

    /// Additionally enforces `1 < m < n - 1` and `l > 0`, the range of the
    /// main automorphism theorem.
    pub fn new_theorem_range(q: u32, n: usize, l: usize, m: usize) -> Result<AmbientParams> {
        let p = AmbientParams::new(q, n, l, m)?;
        if !p.in_theorem_range() {
            return Err(Error::Parameter(format!("(n,l,m) = ({n},{l},{m}) violates 1 < m < n-1, l > 0")));
        }
        Ok(p)
    }

    pub fn in_theorem_range(&self) -> bool {
        self.m > 1 && self.m + 1 < self.n && self.l > 0
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n + self.l
    }

    pub fn field(&self) -> Result<Field> {
        Field::new(self.q)
    }

    /// Same ambient space, different subspace dimension.
    pub fn with_m(&self, m: usize) -> Result<AmbientParams> {
        AmbientParams::new(self.q, self.n, self.l, m)
    }

    /// `|X_m| = q^{ml} [n choose m]_q`, or `None` on overflow.
    pub fn vertex_count(&self) -> Option<u128> {
        let q = self.q as u128;
        let mut num: u128 = 1;
        let mut den: u128 = 1;
        for k in 0..self.m {
            num = num.checked_mul(q.checked_pow((self.n - k) as u32)? - 1)?;
            den = den.checked_mul(q.checked_pow((k + 1) as u32)? - 1)?;
        }
        (num / den).checked_mul(q.checked_pow((self.m * self.l) as u32)?)
    }
}

impl fmt::Display for AmbientParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(q={}, n={}, l={}, m={})", self.q, self.n, self.l, self.m)
    }
}

/// A subspace of `F_q^(n+l)` held by its reduced row echelon basis.
/// Equality of values is equality of subspaces.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    n: usize,
    l: usize,
    basis: Matrix,
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({}|{}: {})", self.n, self.l, self.serialize())
    }
}

impl Subspace {
    /// Canonicalizes the row space of `m` (which must have `n + l` columns).
    pub fn from_matrix(m: &Matrix, n: usize, l: usize, field: &Field) -> Result<Subspace> {
        if m.cols() != n + l {
            return Err(Error::AmbientMismatch(format!("matrix has {} columns, ambient is {}+{}", m.cols(), n, l)));
        }
        let (r, rank) = m.rref(field)?;
        Ok(Subspace { n, l, basis: r.truncate_rows(rank) })
    }

    /// Wraps a matrix already known to be in RREF with independent rows.
    pub(crate) fn from_rref_unchecked(basis: Matrix, n: usize, l: usize) -> Subspace {
        debug_assert_eq!(basis.cols(), n + l);
        Subspace { n, l, basis }
    }

    pub fn zero(n: usize, l: usize) -> Subspace {
        Subspace { n, l, basis: Matrix::zeros(0, n + l) }
    }

    /// `E`, spanned by the last `l` unit vectors.
    pub fn distinguished(n: usize, l: usize) -> Subspace {
        let mut b = Matrix::zeros(l, n + l);
        for k in 0..l {
            b.set(k, n + k, FieldElement::ONE);
        }
        Subspace { n, l, basis: b }
    }

    /// `[I_m | 0 | 0]`, the base vertex used for subconstituents.
    pub fn standard(m: usize, n: usize, l: usize) -> Subspace {
        let mut b = Matrix::zeros(m, n + l);
        for k in 0..m {
            b.set(k, k, FieldElement::ONE);
        }
        Subspace { n, l, basis: b }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn l(&self) -> usize {
        self.l
    }

    #[inline]
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    fn check_ambient(&self, other: &Subspace) -> Result<()> {
        if self.n != other.n || self.l != other.l {
            return Err(Error::AmbientMismatch(format!("{}+{} vs {}+{}", self.n, self.l, other.n, other.l)));
        }
        Ok(())
    }

    /// Rank of the left `n` columns of the basis, i.e. `dim P'`.
    pub fn left_rank(&self, field: &Field) -> usize {
        let mut buf = self.basis.column_block(0, self.n).data().to_vec();
        rref_in_place(&mut buf, self.dim(), self.n, field)
    }

    /// `(m, k)` with `k = dim(P ∩ E) = m - rank(P')`.
    pub fn subspace_type(&self, field: &Field) -> (usize, usize) {
        let m = self.dim();
        (m, m - self.left_rank(field))
    }

    /// The projection `P'` onto the first `n` coordinates, as a subspace
    /// of `F_q^n`.
    pub fn left_block(&self, field: &Field) -> Subspace {
        let left = self.basis.column_block(0, self.n);
        Subspace::from_matrix(&left, self.n, 0, field).expect("entries already checked")
    }

    pub fn intersect_dim(&self, other: &Subspace, field: &Field) -> Result<usize> {
        self.check_ambient(other)?;
        let r = stacked_rank(&self.basis, &other.basis, self.n + self.l, field);
        Ok(self.dim() + other.dim() - r)
    }

    pub fn sum(&self, other: &Subspace, field: &Field) -> Result<Subspace> {
        self.check_ambient(other)?;
        Subspace::from_matrix(&self.basis.vstack(&other.basis), self.n, self.l, field)
    }

    /// `P ∩ Q` by the Zassenhaus sum-intersection construction.
    pub fn intersection(&self, other: &Subspace, field: &Field) -> Result<Subspace> {
        self.check_ambient(other)?;
        let w = self.n + self.l;
        let top = self.basis.hstack(&self.basis);
        let bottom = other.basis.hstack(&Matrix::zeros(other.dim(), w));
        let stacked = top.vstack(&bottom);
        let (r, rank) = stacked.rref(field)?;
        let rows: Vec<usize> = (0..rank).filter(|&k| r.row(k)[..w].iter().all(|v| v.is_zero())).collect();
        let mut b = Matrix::zeros(rows.len(), w);
        for (dst, &src) in rows.iter().enumerate() {
            for c in 0..w {
                b.set(dst, c, r.get(src, w + c));
            }
        }
        Subspace::from_matrix(&b, self.n, self.l, field)
    }

    /// Whether `other ⊆ self`.
    pub fn contains(&self, other: &Subspace, field: &Field) -> Result<bool> {
        Ok(self.intersect_dim(other, field)? == other.dim())
    }

    /// Rows joined by `;`, each row one base-q digit per coordinate.
    pub fn serialize(&self) -> String {
        let mut s = String::with_capacity(self.dim() * (self.n + self.l + 1));
        for r in 0..self.dim() {
            if r > 0 {
                s.push(';');
            }
            s.extend(self.basis.row(r).iter().map(|&v| digit_char(v)));
        }
        s
    }

    /// Parses the `serialize` format and canonicalizes the result.
    pub fn parse(s: &str, n: usize, l: usize, field: &Field) -> Result<Subspace> {
        if s.is_empty() {
            return Ok(Subspace::zero(n, l));
        }
        let mut data = Vec::new();
        let mut rows = 0;
        for row in s.split(';') {
            if row.chars().count() != n + l {
                return Err(Error::Parameter(format!("row {row:?} does not have {} digits", n + l)));
            }
            for ch in row.chars() {
                let v = ch
                    .to_digit(MAX_SERIALIZABLE_Q)
                    .filter(|&v| v < field.order())
                    .ok_or_else(|| Error::Parameter(format!("bad digit {ch:?} for GF({})", field.order())))?;
                data.push(FieldElement(v as u8));
            }
            rows += 1;
        }
        Subspace::from_matrix(&Matrix::new(rows, n + l, data), n, l, field)
    }

    /// Image under the right action of a matrix followed by an entrywise
    /// table map (a Frobenius power).
    pub fn transform(&self, t: &Matrix, twist: Option<&[FieldElement]>, field: &Field) -> Subspace {
        let mut img = self.basis.mul(t, field);
        if let Some(table) = twist {
            img = img.map_entries(table);
        }
        Subspace::from_matrix(&img, self.n, self.l, field).expect("dimensions preserved")
    }
}

/// The canonically ordered vertex set `X_m`.
#[derive(Clone, Debug)]
pub struct TypeM0Set {
    params: AmbientParams,
    vertices: Vec<Subspace>,
}

impl TypeM0Set {
    pub fn params(&self) -> AmbientParams {
        self.params
    }

    pub fn vertices(&self) -> &[Subspace] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn get(&self, id: u32) -> &Subspace {
        &self.vertices[id as usize]
    }

    pub fn id_of(&self, s: &Subspace) -> Option<u32> {
        self.vertices.binary_search(s).ok().map(|i| i as u32)
    }
}

/// All subspaces of type `(m, 0)`, sorted by serialized RREF.
///
/// Each such subspace has a unique basis `[A | B]` where `A` is the RREF
/// basis of an `m`-subspace of `F_q^n` and `B` is any `m x l` matrix.
pub fn enumerate_type_m0(params: &AmbientParams, field: &Field) -> Result<TypeM0Set> {
    if params.m > params.n {
        return Err(Error::Parameter(format!("m = {} exceeds n = {}", params.m, params.n)));
    }
    if field.order() != params.q {
        return Err(Error::Parameter(format!("field GF({}) does not match q = {}", field.order(), params.q)));
    }
    let count = params.vertex_count().unwrap_or(u128::MAX);
    if count > MAX_VERTICES {
        return Err(Error::Scale { projected: count, budget: MAX_VERTICES });
    }
    let (n, l, m) = (params.n, params.l, params.m);
    let lefts = enumerate_rref(m, n, field);
    let rights: Vec<Matrix> = if m * l == 0 {
        vec![Matrix::zeros(m, l)]
    } else {
        crate::matrix::all_vectors(m * l, field).into_iter().map(|v| Matrix::new(m, l, v)).collect()
    };
    let mut vertices = Vec::with_capacity(count as usize);
    for a in &lefts {
        for b in &rights {
            vertices.push(Subspace::from_rref_unchecked(a.hstack(b), n, l));
        }
    }
    vertices.sort();
    Ok(TypeM0Set { params: *params, vertices })
}
