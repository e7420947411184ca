//! Relations `R_{i,j-i}` of the scheme on `X_m`, closed-form valencies,
//! brute-force axiom checks and the valency-distinctness analysis.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::stacked_rank;
use crate::poly::IntPolynomial;
use crate::subspace::{AmbientParams, Subspace, TypeM0Set};

/// The relation label `(i, j - i)`: `dim(P' ∩ Q') = m - i` and
/// `dim(P ∩ Q) = m - j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassIndex {
    pub i: usize,
    pub jmi: usize,
}

impl ClassIndex {
    pub const DIAGONAL: ClassIndex = ClassIndex { i: 0, jmi: 0 };
    pub const ADJACENT: ClassIndex = ClassIndex { i: 1, jmi: 0 };

    pub fn new(i: usize, jmi: usize) -> ClassIndex {
        ClassIndex { i, jmi }
    }

    #[inline]
    pub fn j(&self) -> usize {
        self.i + self.jmi
    }

    /// `0 <= i <= min(m, n-m)` and `0 <= j-i <= min(m-i, j, l)`.
    pub fn is_admissible(&self, params: &AmbientParams) -> bool {
        let (n, l, m) = (params.n, params.l, params.m);
        self.i <= m.min(n - m) && self.jmi <= (m - self.i).min(self.j()).min(l)
    }

    pub fn check(&self, params: &AmbientParams) -> Result<()> {
        if self.is_admissible(params) {
            Ok(())
        } else {
            Err(Error::InadmissibleClass { i: self.i, jmi: self.jmi, n: params.n, l: params.l, m: params.m })
        }
    }

    /// `"i,jmi"`, the JSON key form.
    pub fn key(&self) -> String {
        format!("{},{}", self.i, self.jmi)
    }

    pub fn parse_key(s: &str) -> Option<ClassIndex> {
        let (a, b) = s.split_once(',')?;
        Some(ClassIndex { i: a.trim().parse().ok()?, jmi: b.trim().parse().ok()? })
    }

    /// Exponent of q in the valency: `i^2 + il + (j-i)(j-i-1)/2`.
    pub fn q_exponent(&self, l: usize) -> usize {
        self.i * self.i + self.i * l + self.jmi * self.jmi.saturating_sub(1) / 2
    }
}

impl fmt::Display for ClassIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.i, self.jmi)
    }
}

impl Serialize for ClassIndex {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.key())
    }
}

/// All admissible classes in lexicographic `(i, j-i)` order; the diagonal
/// class is always first.
pub fn admissible_classes(params: &AmbientParams) -> Vec<ClassIndex> {
    let mut out = Vec::new();
    for i in 0..=params.m.min(params.n - params.m) {
        for jmi in 0..=params.l.min(params.m - i) {
            let c = ClassIndex::new(i, jmi);
            if c.is_admissible(params) {
                out.push(c);
            }
        }
    }
    out
}

fn check_type_m0(p: &Subspace, m: usize, field: &Field) -> Result<()> {
    let (dim, k) = p.subspace_type(field);
    if dim != m || k != 0 {
        return Err(Error::Type { m: dim, k, expected: m });
    }
    Ok(())
}

/// The class of an ordered pair of type-`(m,0)` subspaces.
pub fn classify_pair(p: &Subspace, q: &Subspace, field: &Field) -> Result<ClassIndex> {
    if p.n() != q.n() || p.l() != q.l() {
        return Err(Error::AmbientMismatch(format!("{}+{} vs {}+{}", p.n(), p.l(), q.n(), q.l())));
    }
    let m = p.dim();
    check_type_m0(p, m, field)?;
    check_type_m0(q, m, field)?;
    Ok(classify_unchecked(p, q, field))
}

/// `classify_pair` without the type checks. Both inputs must be of type
/// `(m, 0)` with the same `m`.
#[inline]
pub fn classify_unchecked(p: &Subspace, q: &Subspace, field: &Field) -> ClassIndex {
    let m = p.dim();
    let n = p.n();
    let left = stacked_rank(p.basis(), q.basis(), n, field);
    let full = stacked_rank(p.basis(), q.basis(), n + p.l(), field);
    // dim(P'∩Q') = 2m - left = m - i, dim(P∩Q) = 2m - full = m - j
    ClassIndex { i: left - m, jmi: full - left }
}

/// Gaussian binomial `[a choose b]_q`; zero when `b > a`.
pub fn gaussian_binomial(a: usize, b: usize, q: u32) -> BigUint {
    if b > a {
        return BigUint::zero();
    }
    let q = BigUint::from(q);
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for k in 0..b {
        num *= q.pow((a - k) as u32) - 1u32;
        den *= q.pow((k + 1) as u32) - 1u32;
    }
    num / den
}

fn q_minus_one_product(from: usize, to: usize, q: u32) -> BigUint {
    let qb = BigUint::from(q);
    (from..=to).fold(BigUint::one(), |acc, s| acc * (qb.pow(s as u32) - 1u32))
}

/// Closed-form valency
/// `q^{i^2+il+(j-i)(j-i-1)/2} [n-m,i] [m,i] [m-i,j-i] ∏_{s=l-(j-i)+1}^{l} (q^s - 1)`.
pub fn valency(params: &AmbientParams, c: ClassIndex) -> Result<BigUint> {
    c.check(params)?;
    Ok(valency_at_q(params.q, params, c))
}

/// The same formula evaluated at an arbitrary `q` (no prime-power check).
pub fn valency_at_q(q: u32, params: &AmbientParams, c: ClassIndex) -> BigUint {
    let (n, l, m) = (params.n, params.l, params.m);
    let power = BigUint::from(q).pow(c.q_exponent(l) as u32);
    power
        * gaussian_binomial(n - m, c.i, q)
        * gaussian_binomial(m, c.i, q)
        * gaussian_binomial(m - c.i, c.jmi, q)
        * q_minus_one_product(l + 1 - c.jmi, l, q)
}

/// Valencies of every admissible class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValencyTable {
    pub params: AmbientParams,
    pub entries: BTreeMap<ClassIndex, BigUint>,
}

impl ValencyTable {
    pub fn total(&self) -> BigUint {
        self.entries.values().sum()
    }

    pub fn get(&self, c: ClassIndex) -> Option<&BigUint> {
        self.entries.get(&c)
    }
}

impl Serialize for ValencyTable {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.entries.len()))?;
        for (c, v) in &self.entries {
            map.serialize_entry(&c.key(), &v.to_string())?;
        }
        map.end()
    }
}

pub fn valency_table(params: &AmbientParams) -> ValencyTable {
    let entries = admissible_classes(params).into_iter().map(|c| (c, valency_at_q(params.q, params, c))).collect();
    ValencyTable { params: *params, entries }
}

/// Two distinct classes whose valencies coincide.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Coincidence {
    pub first: ClassIndex,
    pub second: ClassIndex,
    #[serde(serialize_with = "crate::report::ser_decimal")]
    pub valency: BigUint,
}

/// All unordered pairs of distinct classes with equal valency.
pub fn distinctness_report(params: &AmbientParams) -> Vec<Coincidence> {
    let table = valency_table(params);
    let entries: Vec<_> = table.entries.iter().collect();
    let mut out = Vec::new();
    for (a, (ca, va)) in entries.iter().enumerate() {
        for (cb, vb) in &entries[a + 1..] {
            if va == vb {
                out.push(Coincidence { first: **ca, second: **cb, valency: (*va).clone() });
            }
        }
    }
    out
}

/// `f_{i,j}(x) = ∏_{s=1}^{i} (x^s-1)^2 ∏_{s=1}^{j-i} (x^s-1)`.
pub fn f_poly(i: usize, j: usize) -> IntPolynomial {
    let sq = IntPolynomial::product_of_factors(1..=i);
    &(&sq * &sq) * &IntPolynomial::product_of_factors(1..=j - i)
}

/// `g_{i,j}(x) = ∏_{s=n-m-i+1}^{n-m} ∏_{s=m-i+1}^{m} ∏_{s=m-j+1}^{m-i} ∏_{s=l-j+i+1}^{l}`
/// of `(x^s - 1)`.
pub fn g_poly(i: usize, j: usize, n: usize, m: usize, l: usize) -> IntPolynomial {
    let a = IntPolynomial::product_of_factors(n - m + 1 - i..=n - m);
    let b = IntPolynomial::product_of_factors(m + 1 - i..=m);
    let c = IntPolynomial::product_of_factors(m + 1 - j..=m - i);
    let d = IntPolynomial::product_of_factors(l + i + 1 - j..=l);
    &(&(&a * &b) * &c) * &d
}

pub fn f_poly_of(c: ClassIndex) -> IntPolynomial {
    f_poly(c.i, c.j())
}

pub fn g_poly_of(c: ClassIndex, params: &AmbientParams) -> IntPolynomial {
    g_poly(c.i, c.j(), params.n, params.m, params.l)
}

/// Field orders at which numeric coincidences are probed.
pub const WITNESS_QS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "witnesses")]
pub enum Verdict {
    /// Valencies agree as functions of q.
    EqualForAllQ,
    /// The polynomial identity fails and no witness q produces equality.
    DistinctForAllQ,
    /// Not identically equal, yet equal at the listed q.
    QDependent(Vec<u32>),
}

/// Evidence for one pair of classes: the exponent identity, its
/// simplified form, and the polynomial identity `f_c g_c' = f_c' g_c`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SymbolicAnalysis {
    pub first: ClassIndex,
    pub second: ClassIndex,
    pub exponent_first: usize,
    pub exponent_second: usize,
    pub exponents_equal: bool,
    pub simplified_lhs: i64,
    pub simplified_rhs: i64,
    pub simplified_holds: bool,
    pub polynomials_equal: bool,
    /// Multiplicity of the root 1 in `f_c g_c'` and `f_c' g_c`.
    pub root1_multiplicities: (usize, usize),
    pub verdict: Verdict,
}

/// `2(a-a')(a+a'+l)` and `((b'-a')-(b-a))(b'-a'+b-a-1)`.
pub fn simplified_exponent_identity(c: ClassIndex, d: ClassIndex, l: usize) -> (i64, i64) {
    let (a, a2) = (c.i as i64, d.i as i64);
    let (ba, ba2) = (c.jmi as i64, d.jmi as i64);
    let lhs = 2 * (a - a2) * (a + a2 + l as i64);
    let rhs = (ba2 - ba) * (ba2 + ba - 1);
    (lhs, rhs)
}

pub fn distinctness_symbolic(params: &AmbientParams, c: ClassIndex, d: ClassIndex) -> Result<SymbolicAnalysis> {
    c.check(params)?;
    d.check(params)?;
    if c == d {
        return Err(Error::Parameter(format!("classes must differ, got {c} twice")));
    }
    let ec = c.q_exponent(params.l);
    let ed = d.q_exponent(params.l);
    let (lhs, rhs) = simplified_exponent_identity(c, d, params.l);
    let left = &f_poly_of(c) * &g_poly_of(d, params);
    let right = &f_poly_of(d) * &g_poly_of(c, params);
    let polynomials_equal = left == right;
    let mults = (left.root1_multiplicity()?, right.root1_multiplicity()?);

    let verdict = if ec == ed && polynomials_equal {
        Verdict::EqualForAllQ
    } else {
        let hits: Vec<u32> =
            WITNESS_QS.iter().copied().filter(|&q| valency_at_q(q, params, c) == valency_at_q(q, params, d)).collect();
        if hits.is_empty() {
            Verdict::DistinctForAllQ
        } else {
            Verdict::QDependent(hits)
        }
    };
    Ok(SymbolicAnalysis {
        first: c,
        second: d,
        exponent_first: ec,
        exponent_second: ed,
        exponents_equal: ec == ed,
        simplified_lhs: lhs,
        simplified_rhs: rhs,
        simplified_holds: lhs == rhs,
        polynomials_equal,
        root1_multiplicities: mults,
        verdict,
    })
}

/// Class of every ordered pair of vertices, as indices into `classes`.
#[derive(Clone, Debug)]
pub struct ClassMatrix {
    params: AmbientParams,
    classes: Vec<ClassIndex>,
    size: usize,
    data: Vec<u8>,
}

/// Sentinel stored for a pair whose computed class is not admissible.
pub const INADMISSIBLE: u8 = u8::MAX;

impl ClassMatrix {
    /// Projected elementary operations to classify all ordered pairs.
    pub fn projected_ops(params: &AmbientParams, vertices: u128) -> u128 {
        let m = params.m.max(1) as u128;
        vertices * vertices * 4 * m * m * params.dim() as u128
    }

    /// Classifies every ordered pair independently (both orders are
    /// computed, so symmetry is observed rather than assumed).
    pub fn build(x: &TypeM0Set, field: &Field, budget: &Budget) -> Result<ClassMatrix> {
        let params = x.params();
        budget.check(ClassMatrix::projected_ops(&params, x.len() as u128))?;
        let classes = admissible_classes(&params);
        let index: BTreeMap<ClassIndex, u8> = classes.iter().enumerate().map(|(k, &c)| (c, k as u8)).collect();
        let size = x.len();
        let verts = x.vertices();
        let data: Vec<u8> = (0..size)
            .into_par_iter()
            .flat_map_iter(|u| {
                let index = &index;
                verts.iter().map(move |v| {
                    let c = classify_unchecked(&verts[u], v, field);
                    index.get(&c).copied().unwrap_or(INADMISSIBLE)
                })
            })
            .collect();
        Ok(ClassMatrix { params, classes, size, data })
    }

    pub fn params(&self) -> AmbientParams {
        self.params
    }

    pub fn classes(&self) -> &[ClassIndex] {
        &self.classes
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u8 {
        self.data[u * self.size + v]
    }

    #[inline]
    pub fn row(&self, u: usize) -> &[u8] {
        &self.data[u * self.size..(u + 1) * self.size]
    }

    pub fn class_of(&self, u: usize, v: usize) -> Option<ClassIndex> {
        self.classes.get(self.get(u, v) as usize).copied()
    }

    pub fn class_id(&self, c: ClassIndex) -> Option<u8> {
        self.classes.iter().position(|&d| d == c).map(|k| k as u8)
    }

    /// Per-class degree of vertex `u`.
    pub fn degree_counts(&self, u: usize) -> Vec<u64> {
        let mut counts = vec![0u64; self.classes.len()];
        for &c in self.row(u) {
            if c != INADMISSIBLE {
                counts[c as usize] += 1;
            }
        }
        counts
    }
}

/// One entry `p^{c3}_{c1,c2}` of the brute-force intersection tensor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntersectionNumber {
    pub c1: ClassIndex,
    pub c2: ClassIndex,
    pub c3: ClassIndex,
    pub count: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeAxiomReport {
    pub params: AmbientParams,
    pub vertex_count: usize,
    pub classes: Vec<ClassIndex>,
    pub partition: bool,
    pub diagonal: bool,
    pub symmetric: bool,
    pub constant_intersection_numbers: bool,
    pub intersection_numbers: Vec<IntersectionNumber>,
    pub violations: Vec<String>,
}

impl SchemeAxiomReport {
    pub fn passed(&self) -> bool {
        self.partition && self.diagonal && self.symmetric && self.constant_intersection_numbers
    }

    /// `c1,c2,c3,count` rows with a header line.
    pub fn intersection_csv(&self) -> String {
        let mut s = String::from("c1,c2,c3,count\n");
        for e in &self.intersection_numbers {
            s.push_str(&format!("\"{}\",\"{}\",\"{}\",{}\n", e.c1.key(), e.c2.key(), e.c3.key(), e.count));
        }
        s
    }
}

const MAX_VIOLATIONS: usize = 20;

/// Checks the association-scheme axioms on a computed class matrix.
pub fn verify_scheme_axioms(cm: &ClassMatrix, budget: &Budget) -> Result<SchemeAxiomReport> {
    let size = cm.size();
    let d = cm.classes().len();
    budget.check((size as u128).pow(3))?;
    let mut violations = Vec::new();

    let inadmissible = cm.data.iter().filter(|&&c| c == INADMISSIBLE).count();
    let mut class_sizes = vec![0u64; d];
    for &c in &cm.data {
        if c != INADMISSIBLE {
            class_sizes[c as usize] += 1;
        }
    }
    let empty: Vec<_> = (0..d).filter(|&k| class_sizes[k] == 0).map(|k| cm.classes()[k]).collect();
    if inadmissible > 0 {
        violations.push(format!("{inadmissible} pairs fall outside every admissible class"));
    }
    if !empty.is_empty() {
        violations.push(format!("empty relations: {empty:?}"));
    }
    let partition = inadmissible == 0 && empty.is_empty();

    let diag_id = cm.class_id(ClassIndex::DIAGONAL);
    let mut diagonal = true;
    let mut symmetric = true;
    for u in 0..size {
        for v in 0..size {
            let on_diag = Some(cm.get(u, v)) == diag_id;
            if on_diag != (u == v) {
                diagonal = false;
                if violations.len() < MAX_VIOLATIONS {
                    violations.push(format!("diagonal relation mismatch at ({u},{v})"));
                }
            }
            if cm.get(u, v) != cm.get(v, u) {
                symmetric = false;
                if violations.len() < MAX_VIOLATIONS {
                    violations.push(format!("asymmetric pair ({u},{v})"));
                }
            }
        }
    }

    let mut intersection_numbers = Vec::new();
    let mut constant = partition;
    if partition {
        let count_table = |u: usize, v: usize| -> Vec<u64> {
            let mut t = vec![0u64; d * d];
            let ru = cm.row(u);
            for z in 0..size {
                // class(z, v) is read directly, symmetry is not assumed
                t[ru[z] as usize * d + cm.get(z, v) as usize] += 1;
            }
            t
        };
        // reference pair per class: the first pair in row-major order
        let mut reference: Vec<Option<(usize, usize)>> = vec![None; d];
        for u in 0..size {
            for v in 0..size {
                let c = cm.get(u, v) as usize;
                if reference[c].is_none() {
                    reference[c] = Some((u, v));
                }
            }
        }
        let tables: Vec<Vec<u64>> = reference
            .iter()
            .map(|r| {
                let (u, v) = r.expect("partition guarantees every class is nonempty");
                count_table(u, v)
            })
            .collect();
        let bad: Vec<(usize, usize)> = (0..size)
            .into_par_iter()
            .flat_map_iter(|u| {
                let tables = &tables;
                (0..size).filter_map(move |v| {
                    let c = cm.get(u, v) as usize;
                    (count_table(u, v) != tables[c]).then_some((u, v))
                })
            })
            .collect();
        if !bad.is_empty() {
            constant = false;
            for (u, v) in bad.iter().take(MAX_VIOLATIONS) {
                violations.push(format!("intersection numbers differ at pair ({u},{v})"));
            }
        }
        for (k3, table) in tables.iter().enumerate() {
            for k1 in 0..d {
                for k2 in 0..d {
                    intersection_numbers.push(IntersectionNumber {
                        c1: cm.classes()[k1],
                        c2: cm.classes()[k2],
                        c3: cm.classes()[k3],
                        count: table[k1 * d + k2],
                    });
                }
            }
        }
    }

    Ok(SchemeAxiomReport {
        params: cm.params(),
        vertex_count: size,
        classes: cm.classes().to_vec(),
        partition,
        diagonal,
        symmetric,
        constant_intersection_numbers: constant,
        intersection_numbers,
        violations,
    })
}

/// Root-1 multiplicity predicted for `f_{a,b} g_{a',b'}`:
/// `2a + (b-a) + 2a' + 2(b'-a')`.
pub fn predicted_root1_multiplicity(c: ClassIndex, d: ClassIndex) -> usize {
    2 * c.i + c.jmi + 2 * d.i + 2 * d.jmi
}

/// Closed valency of the Grassmann scheme `J_q(n, m)`:
/// `q^{i^2} [n-m, i] [m, i]`.
pub fn grassmann_valency(q: u32, n: usize, m: usize, i: usize) -> BigUint {
    BigUint::from(q).pow((i * i) as u32) * gaussian_binomial(n - m, i, q) * gaussian_binomial(m, i, q)
}

/// Signed integer evaluation helper used in tests and reports.
pub fn eval_at(p: &IntPolynomial, q: u32) -> BigInt {
    p.eval(&BigInt::from(q))
}
