//! Semilinear maps fixing `E`, their action on `X_m`, and the induced
//! permutation group.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;
use serde::Serialize;

use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Matrix;
use crate::perm::{Perm, PermGroup};
use crate::report::ser_decimal;
use crate::scheme::{ClassIndex, ClassMatrix};
use crate::subspace::{AmbientParams, Subspace, TypeM0Set};

/// `P ↦ φ^k(P·T)`: matrix on the right, then the Frobenius power entrywise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemilinearMap {
    n: usize,
    l: usize,
    t: Matrix,
    phi: u32,
}

impl SemilinearMap {
    /// An element of the stabilizer of `E`: invertible with `T₂₁ = 0`.
    pub fn new(t: Matrix, phi: u32, n: usize, l: usize, field: &Field) -> Result<SemilinearMap> {
        let s = SemilinearMap::general(t, phi, n, l, field)?;
        if !s.fixes_e() {
            return Err(Error::Parameter("lower-left block T21 must vanish".into()));
        }
        Ok(s)
    }

    /// Any invertible semilinear map of `F_q^{n+l}`.
    pub fn general(t: Matrix, phi: u32, n: usize, l: usize, field: &Field) -> Result<SemilinearMap> {
        let d = n + l;
        if t.rows() != d || t.cols() != d {
            return Err(Error::AmbientMismatch(format!("{}x{} matrix for dimension {d}", t.rows(), t.cols())));
        }
        t.check_field(field)?;
        if phi >= field.e() {
            return Err(Error::Parameter(format!("Frobenius power {phi} out of range for e = {}", field.e())));
        }
        if t.rank(field) != d {
            return Err(Error::Parameter("matrix is singular".into()));
        }
        Ok(SemilinearMap { n, l, t, phi })
    }

    pub fn identity(n: usize, l: usize) -> SemilinearMap {
        SemilinearMap { n, l, t: Matrix::identity(n + l), phi: 0 }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.t
    }

    pub fn phi(&self) -> u32 {
        self.phi
    }

    pub fn fixes_e(&self) -> bool {
        (self.n..self.n + self.l).all(|r| (0..self.n).all(|c| self.t.get(r, c).is_zero()))
    }

    pub fn act(&self, p: &Subspace, field: &Field) -> Result<Subspace> {
        if p.n() != self.n || p.l() != self.l {
            return Err(Error::AmbientMismatch(format!(
                "subspace in ({},{}) acted on by a map of ({},{})",
                p.n(),
                p.l(),
                self.n,
                self.l
            )));
        }
        let table = (self.phi > 0).then(|| field.frobenius_table(self.phi));
        Ok(p.transform(&self.t, table.as_deref(), field))
    }

    pub fn act_vector(&self, v: &[FieldElement], field: &Field) -> Vec<FieldElement> {
        let row = Matrix::new(1, v.len(), v.to_vec()).mul(&self.t, field);
        row.data().iter().map(|&a| field.frobenius(a, self.phi)).collect()
    }

    /// First `self`, then `other`: `T = T₁·φ₁⁻¹(T₂)`, `φ = φ₁ + φ₂`.
    pub fn compose(&self, other: &SemilinearMap, field: &Field) -> SemilinearMap {
        let e = field.e();
        let back = field.frobenius_table((e - self.phi) % e);
        let t2 = other.t.map_entries(&back);
        SemilinearMap { n: self.n, l: self.l, t: self.t.mul(&t2, field), phi: (self.phi + other.phi) % e }
    }

    /// The permutation of `X_m` induced by the map, or `None` if some vertex
    /// leaves `X_m`.
    pub fn induced_perm(&self, x: &TypeM0Set, field: &Field) -> Option<Perm> {
        let table = (self.phi > 0).then(|| field.frobenius_table(self.phi));
        let images: Option<Vec<u32>> =
            x.vertices().par_iter().map(|p| x.id_of(&p.transform(&self.t, table.as_deref(), field))).collect();
        Perm::from_images(images?).ok()
    }
}

/// `|GL_k(q)| = ∏_{i<k} (q^k - q^i)`.
pub fn gl_order(k: usize, q: u32) -> BigUint {
    let q = BigUint::from(q);
    let qk = q.pow(k as u32);
    (0..k).fold(BigUint::one(), |acc, i| acc * (&qk - q.pow(i as u32)))
}

/// `|GL_n(q)|·|GL_l(q)|·q^{nl}·e`.
pub fn abstract_order(params: &AmbientParams, field: &Field) -> BigUint {
    gl_order(params.n, params.q)
        * gl_order(params.l, params.q)
        * BigUint::from(params.q).pow((params.n * params.l) as u32)
        * field.e()
}

fn unit(d: usize, r: usize, c: usize, v: FieldElement) -> Matrix {
    let mut t = Matrix::identity(d);
    t.set(r, c, v);
    t
}

/// Transvections `I + E_rc` inside each diagonal block, the primitive
/// element at the first position of each block, one unit in the
/// upper-right block, and the Frobenius map when `e > 1`.
pub fn generators(params: &AmbientParams, field: &Field) -> Vec<SemilinearMap> {
    let (n, l) = (params.n, params.l);
    let d = n + l;
    let mut out = Vec::new();
    let mut push = |t: Matrix, phi: u32| out.push(SemilinearMap { n, l, t, phi });
    for (lo, hi) in [(0, n), (n, d)] {
        for r in lo..hi {
            for c in lo..hi {
                if r != c {
                    push(unit(d, r, c, FieldElement::ONE), 0);
                }
            }
        }
        if hi > lo && field.order() > 2 {
            push(unit(d, lo, lo, field.primitive_element()), 0);
        }
    }
    if n > 0 && l > 0 {
        push(unit(d, 0, n, FieldElement::ONE), 0);
    }
    if field.e() > 1 {
        push(Matrix::identity(d), 1);
    }
    out
}

fn vector_index(v: &[FieldElement], q: u32) -> usize {
    v.iter().fold(0, |acc, a| acc * q as usize + a.0 as usize)
}

/// The generators acting on the nonzero vectors of `F_q^{n+l}`, point
/// `k` being the vector with base-`q` digits `k + 1`.
pub fn natural_action(params: &AmbientParams, field: &Field, gens: &[SemilinearMap]) -> Result<PermGroup> {
    let d = params.dim();
    let total = (params.q as usize)
        .checked_pow(d as u32)
        .filter(|&t| t <= 1 << 20)
        .ok_or(Error::Scale { projected: (params.q as u128).saturating_pow(d as u32), budget: 1 << 20 })?;
    let vectors = crate::matrix::all_vectors(d, field);
    let perms = gens
        .iter()
        .map(|s| {
            let images =
                vectors[1..].iter().map(|v| vector_index(&s.act_vector(v, field), params.q) as u32 - 1).collect();
            Perm::from_images(images)
        })
        .collect::<Result<Vec<_>>>()?;
    PermGroup::new(total - 1, perms)
}

/// The induced group on `X_m` with the generator images.
#[derive(Clone, Debug)]
pub struct InducedGroup {
    pub maps: Vec<SemilinearMap>,
    pub perms: Vec<Perm>,
    pub group: PermGroup,
}

pub fn induced_perm_group(x: &TypeM0Set, field: &Field) -> Result<InducedGroup> {
    let maps = generators(&x.params(), field);
    let perms = maps
        .iter()
        .map(|s| s.induced_perm(x, field).ok_or_else(|| Error::Internal("generator leaves X_m".into())))
        .collect::<Result<Vec<_>>>()?;
    let group = PermGroup::new(x.len(), perms.clone())?;
    Ok(InducedGroup { maps, perms, group })
}

/// Number of scalar maps `λI` fixing every vertex of `X_m`.
pub fn trivially_acting_scalars(x: &TypeM0Set, field: &Field) -> usize {
    let d = x.params().dim();
    field
        .elements()
        .filter(|a| !a.is_zero())
        .filter(|&a| {
            let mut t = Matrix::zeros(d, d);
            for k in 0..d {
                t.set(k, k, a);
            }
            let s = SemilinearMap { n: x.params().n, l: x.params().l, t, phi: 0 };
            s.induced_perm(x, field).is_some_and(|p| p.is_identity())
        })
        .count()
}

#[derive(Clone, Debug, Serialize)]
pub struct GroupReport {
    pub params: AmbientParams,
    pub generator_count: usize,
    #[serde(serialize_with = "ser_decimal")]
    pub abstract_order: BigUint,
    /// Order on the nonzero vectors, an independent check of the generators.
    #[serde(serialize_with = "ser_decimal")]
    pub natural_order: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub induced_order: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub kernel_order: BigUint,
    pub trivial_scalars: usize,
    pub faithful: bool,
    pub kernel_is_scalars: bool,
    pub transitive: bool,
    pub base_length: usize,
}

impl GroupReport {
    pub fn passed(&self) -> bool {
        self.natural_order == self.abstract_order && self.kernel_is_scalars && self.transitive
    }
}

pub fn group_report(x: &TypeM0Set, field: &Field) -> Result<GroupReport> {
    let params = x.params();
    let maps = generators(&params, field);
    let natural = natural_action(&params, field, &maps)?;
    let induced = induced_perm_group(x, field)?;
    let abstract_order = abstract_order(&params, field);
    let induced_order = induced.group.order();
    let kernel_order = &abstract_order / &induced_order;
    let trivial_scalars = trivially_acting_scalars(x, field);
    Ok(GroupReport {
        params,
        generator_count: maps.len(),
        natural_order: natural.order(),
        faithful: kernel_order.is_one(),
        kernel_is_scalars: kernel_order == BigUint::from(trivial_scalars)
            && &kernel_order * &induced_order == abstract_order,
        transitive: induced.group.is_transitive(),
        base_length: induced.group.base().len(),
        abstract_order,
        induced_order,
        kernel_order,
        trivial_scalars,
    })
}

/// Whether `s` maps `X_m` onto itself and preserves every relation class.
pub fn verify_automorphism(s: &SemilinearMap, x: &TypeM0Set, cm: &ClassMatrix, field: &Field) -> bool {
    let Some(p) = s.induced_perm(x, field) else {
        return false;
    };
    preserves_classes(&p, cm)
}

pub fn preserves_classes(p: &Perm, cm: &ClassMatrix) -> bool {
    (0..cm.size()).into_par_iter().all(|u| {
        let pu = p.apply(u as u32) as usize;
        let row = cm.row(u);
        let img = cm.row(pu);
        row.iter().enumerate().all(|(v, &k)| img[p.apply(v as u32) as usize] == k)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassOrbit {
    pub class: ClassIndex,
    pub base_pair: (u32, u32),
    pub orbit_size: u64,
    pub expected: u64,
    pub passed: bool,
}

/// Orbit of one pair `(M, Q_c)` per class under the induced group acting
/// on ordered pairs, compared with `|X_m|·n_c`.
pub fn verify_class_transitivity(cm: &ClassMatrix, perms: &[Perm], budget: &Budget) -> Result<Vec<ClassOrbit>> {
    let size = cm.size();
    budget.check((size as u128).pow(2) * (perms.len() as u128).max(1))?;
    let base = 0usize;
    let mut out = Vec::new();
    for (id, &c) in cm.classes().iter().enumerate() {
        let Some(q) = cm.row(base).iter().position(|&k| k as usize == id) else {
            continue;
        };
        let mut seen = vec![false; size * size];
        let start = base * size + q;
        seen[start] = true;
        let mut stack = vec![start];
        let mut count = 0u64;
        while let Some(code) = stack.pop() {
            count += 1;
            let (u, v) = ((code / size) as u32, (code % size) as u32);
            for p in perms {
                let next = p.apply(u) as usize * size + p.apply(v) as usize;
                if !seen[next] {
                    seen[next] = true;
                    stack.push(next);
                }
            }
        }
        let per_vertex = cm.row(base).iter().filter(|&&k| k as usize == id).count() as u64;
        let expected = size as u64 * per_vertex;
        out.push(ClassOrbit {
            class: c,
            base_pair: (base as u32, q as u32),
            orbit_size: count,
            expected,
            passed: count == expected,
        });
    }
    Ok(out)
}

/// `valency(c)` as a `u64`, for orbit comparisons.
pub fn valency_u64(params: &AmbientParams, c: ClassIndex) -> Option<u64> {
    crate::scheme::valency(params, c).ok()?.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::subspace::enumerate_type_m0;

    fn setup(q: u32, n: usize, l: usize, m: usize) -> (Field, TypeM0Set) {
        let params = AmbientParams::new(q, n, l, m).unwrap();
        let field = params.field().unwrap();
        let x = enumerate_type_m0(&params, &field).unwrap();
        (field, x)
    }

    #[test]
    fn gl_orders() {
        assert_eq!(gl_order(2, 2), BigUint::from(6u32));
        assert_eq!(gl_order(4, 2), BigUint::from(20160u32));
        assert_eq!(gl_order(1, 3), BigUint::from(2u32));
        assert_eq!(gl_order(0, 5), BigUint::one());
    }

    #[test]
    fn generators_reach_the_abstract_order() {
        for (q, n, l) in [(2, 2, 1), (2, 4, 1), (3, 2, 1), (4, 2, 1), (2, 2, 2), (8, 1, 1)] {
            let params = AmbientParams::new(q, n, l, 1).unwrap();
            let field = params.field().unwrap();
            let g = natural_action(&params, &field, &generators(&params, &field)).unwrap();
            assert_eq!(g.order(), abstract_order(&params, &field), "({q},{n},{l})");
        }
        let p = AmbientParams::new(2, 2, 1, 1).unwrap();
        assert_eq!(abstract_order(&p, &p.field().unwrap()), BigUint::from(24u32));
    }

    #[test]
    fn frobenius_generator_only_for_extension_fields() {
        let (f2, x2) = setup(2, 2, 1, 1);
        assert!(generators(&x2.params(), &f2).iter().all(|s| s.phi() == 0));
        let (f4, x4) = setup(4, 2, 1, 1);
        assert!(generators(&x4.params(), &f4).iter().any(|s| s.phi() == 1));
    }

    #[test]
    fn act_examples() {
        let (field, x) = setup(2, 4, 1, 2);
        let p = Subspace::standard(2, 4, 1);
        assert_eq!(SemilinearMap::identity(4, 1).act(&p, &field).unwrap(), p);
        let mut swap = Matrix::zeros(5, 5);
        for (r, c) in [(0, 1), (1, 0), (2, 2), (3, 3), (4, 4)] {
            swap.set(r, c, FieldElement::ONE);
        }
        let s = SemilinearMap::new(swap, 0, 4, 1, &field).unwrap();
        assert_eq!(s.act(&p, &field).unwrap(), p);
        for g in generators(&x.params(), &field) {
            for v in x.vertices() {
                assert_eq!(g.act(v, &field).unwrap().subspace_type(&field), (2, 0));
            }
        }
        assert!(matches!(s.act(&Subspace::standard(2, 3, 2), &field), Err(Error::AmbientMismatch(_))));
    }

    #[test]
    fn non_triangular_map_leaves_x() {
        let (field, x) = setup(2, 4, 1, 2);
        let mut t = Matrix::zeros(5, 5);
        for (r, c) in [(0, 4), (4, 0), (1, 1), (2, 2), (3, 3)] {
            t.set(r, c, FieldElement::ONE);
        }
        assert!(SemilinearMap::new(t.clone(), 0, 4, 1, &field).is_err());
        let s = SemilinearMap::general(t, 0, 4, 1, &field).unwrap();
        let img = s.act(&Subspace::standard(2, 4, 1), &field).unwrap();
        assert_eq!(img.subspace_type(&field), (2, 1));
        assert!(s.induced_perm(&x, &field).is_none());
        let cm = ClassMatrix::build(&x, &field, &Budget::default()).unwrap();
        assert!(!verify_automorphism(&s, &x, &cm, &field));
    }

    #[test]
    fn composition_law_in_gf8() {
        let field = Field::new(8).unwrap();
        let params = AmbientParams::new(8, 2, 1, 1).unwrap();
        let gens = generators(&params, &field);
        let mut words = vec![SemilinearMap::identity(2, 1)];
        for a in &gens {
            for b in &gens {
                words.push(a.compose(b, &field));
            }
        }
        let p = Subspace::from_matrix(&Matrix::from_rows(&[[1u8, 3, 5]]), 2, 1, &field).unwrap();
        for s1 in words.iter().step_by(3) {
            for s2 in words.iter().step_by(5) {
                let lhs = s2.act(&s1.act(&p, &field).unwrap(), &field).unwrap();
                let rhs = s1.compose(s2, &field).act(&p, &field).unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn induced_group_at_2412() {
        let (field, x) = setup(2, 4, 1, 2);
        let r = group_report(&x, &field).unwrap();
        assert_eq!(r.induced_order, BigUint::from(322560u32));
        assert_eq!(r.natural_order, r.abstract_order);
        assert!(r.faithful && r.kernel_is_scalars && r.transitive && r.passed());
    }

    #[test]
    fn induced_group_kernel_is_scalars_at_q3() {
        let (field, x) = setup(3, 2, 1, 1);
        let r = group_report(&x, &field).unwrap();
        assert_eq!(r.trivial_scalars, 2);
        assert_eq!(r.kernel_order, BigUint::from(2u32));
        assert!(!r.faithful && r.passed());
    }

    #[test]
    fn generators_are_inner_automorphisms() {
        let (field, x) = setup(2, 4, 1, 2);
        let cm = ClassMatrix::build(&x, &field, &Budget::default()).unwrap();
        assert!(verify_automorphism(&SemilinearMap::identity(4, 1), &x, &cm, &field));
        for g in generators(&x.params(), &field) {
            assert!(verify_automorphism(&g, &x, &cm, &field));
        }
    }

    #[test]
    fn class_transitivity_at_2412() {
        let (field, x) = setup(2, 4, 1, 2);
        let cm = ClassMatrix::build(&x, &field, &Budget::default()).unwrap();
        let ind = induced_perm_group(&x, &field).unwrap();
        let orbits = verify_class_transitivity(&cm, &ind.perms, &Budget::default()).unwrap();
        assert_eq!(orbits.len(), 5);
        assert!(orbits.iter().all(|o| o.passed));
        let adj = orbits.iter().find(|o| o.class == ClassIndex::ADJACENT).unwrap();
        assert_eq!(adj.orbit_size, 5040);
        assert_eq!(orbits[0].orbit_size, 140);
        for o in &orbits {
            assert_eq!(o.expected, 140 * valency_u64(&x.params(), o.class).unwrap());
        }
    }
}
