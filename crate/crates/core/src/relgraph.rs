//! The relation graph `Γ^(m) = (X_m, R_{1,0})`: construction, distances,
//! subconstituents around a base vertex, and the clique family `C(W)`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use rayon::prelude::*;
use serde::Serialize;

use crate::bitset::{ones, BitRows};
use crate::budget::Budget;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{enumerate_rref, stacked_rank};
use crate::scheme::{gaussian_binomial, ClassIndex, ClassMatrix};
use crate::subspace::{enumerate_type_m0, AmbientParams, Subspace, TypeM0Set};

pub const UNREACHABLE: u32 = u32::MAX;
const MAX_LISTED: usize = 20;

#[derive(Clone, Debug)]
pub struct RelationGraph {
    field: Field,
    vertices: TypeM0Set,
    adj: Vec<Vec<u32>>,
    bits: BitRows,
}

/// Whether `P + Q` has type `(m+1, 0)`, for `P, Q` of type `(m, 0)`.
#[inline]
pub fn sum_is_type_m1_0(p: &Subspace, q: &Subspace, field: &Field) -> bool {
    let m = p.dim();
    stacked_rank(p.basis(), q.basis(), p.n() + p.l(), field) == m + 1
        && stacked_rank(p.basis(), q.basis(), p.n(), field) == m + 1
}

/// Projected elementary operations for an all-pairs adjacency pass.
pub fn projected_build_ops(params: &AmbientParams) -> u128 {
    let v = params.vertex_count().unwrap_or(u128::MAX);
    let m = params.m.max(1) as u128;
    v.saturating_mul(v).saturating_mul(4 * m * m * params.dim() as u128)
}

/// Builds `Γ^(m)`: `P ~ Q` iff `P + Q` is a subspace of type `(m+1, 0)`.
pub fn build_relation_graph(params: &AmbientParams, budget: &Budget) -> Result<RelationGraph> {
    budget.check(projected_build_ops(params))?;
    let field = params.field()?;
    let vertices = enumerate_type_m0(params, &field)?;
    let verts = vertices.vertices();
    let adj: Vec<Vec<u32>> = (0..verts.len())
        .into_par_iter()
        .map(|u| {
            (0..verts.len())
                .filter(|&v| v != u && sum_is_type_m1_0(&verts[u], &verts[v], &field))
                .map(|v| v as u32)
                .collect()
        })
        .collect();
    Ok(RelationGraph::from_adjacency(field, vertices, adj))
}

/// Adjacency lists of the graph `(X_m, R_c)` read off a class matrix.
pub fn class_graph(cm: &ClassMatrix, c: ClassIndex) -> Result<Vec<Vec<u32>>> {
    let id = cm.class_id(c).ok_or_else(|| {
        let p = cm.params();
        Error::InadmissibleClass { i: c.i, jmi: c.jmi, n: p.n, l: p.l, m: p.m }
    })?;
    Ok((0..cm.size())
        .map(|u| cm.row(u).iter().enumerate().filter(|&(v, &k)| k == id && v != u).map(|(v, _)| v as u32).collect())
        .collect())
}

impl RelationGraph {
    pub fn from_adjacency(field: Field, vertices: TypeM0Set, adj: Vec<Vec<u32>>) -> RelationGraph {
        let mut bits = BitRows::new(adj.len(), adj.len());
        for (u, nb) in adj.iter().enumerate() {
            for &v in nb {
                bits.set(u, v as usize);
            }
        }
        RelationGraph { field, vertices, adj, bits }
    }

    pub fn params(&self) -> AmbientParams {
        self.vertices.params()
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn vertices(&self) -> &TypeM0Set {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.adj[u]
    }

    pub fn adjacency(&self) -> &[Vec<u32>] {
        &self.adj
    }

    pub fn bits(&self) -> &BitRows {
        &self.bits
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.bits.get(u, v)
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// The common degree, or `None` if the graph is not regular.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adj.first().map_or(0, Vec::len);
        self.adj.iter().all(|nb| nb.len() == d).then_some(d)
    }

    /// Plain-text `u v` lines, one per undirected edge with `u < v`.
    pub fn edge_list(&self) -> String {
        let mut s = String::new();
        for (u, nb) in self.adj.iter().enumerate() {
            for &v in nb {
                if (u as u32) < v {
                    s.push_str(&format!("{u} {v}\n"));
                }
            }
        }
        s
    }

    pub fn header(&self) -> GraphHeader {
        GraphHeader {
            params: self.params(),
            vertex_count: self.vertex_count(),
            edge_count: self.edge_count(),
            degree: self.regular_degree(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphHeader {
    pub params: AmbientParams,
    pub vertex_count: usize,
    pub edge_count: usize,
    pub degree: Option<usize>,
}

pub fn bfs(adj: &[Vec<u32>], src: usize) -> Vec<u32> {
    let mut dist = vec![UNREACHABLE; adj.len()];
    dist[src] = 0;
    let mut queue = VecDeque::from([src as u32]);
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        for &v in &adj[u as usize] {
            if dist[v as usize] == UNREACHABLE {
                dist[v as usize] = du + 1;
                queue.push_back(v);
            }
        }
    }
    dist
}

pub fn connected_components(adj: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::new();
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        let dist = bfs(adj, s);
        let comp: Vec<u32> = (0..adj.len() as u32).filter(|&v| dist[v as usize] != UNREACHABLE).collect();
        for &v in &comp {
            seen[v as usize] = true;
        }
        out.push(comp);
    }
    out
}

/// Whether every component is a complete graph; returns the component
/// sizes when it is.
pub fn complete_components(adj: &[Vec<u32>]) -> Option<Vec<usize>> {
    let comps = connected_components(adj);
    comps
        .iter()
        .all(|c| c.iter().all(|&v| adj[v as usize].len() + 1 == c.len()))
        .then(|| comps.iter().map(Vec::len).collect())
}

/// Graph distance predicted for a pair with `dim(P'∩Q') = m-i`,
/// `dim(P∩Q) = m-j`: `j` if `i > 0`, `j + 1` if `i = 0`, and 0 on the
/// diagonal.
pub fn distance_formula(i: usize, j: usize) -> Result<usize> {
    if j < i {
        return Err(Error::Parameter(format!("distance needs j >= i, got i={i} j={j}")));
    }
    Ok(match (i, j) {
        (0, 0) => 0,
        (0, j) => j + 1,
        (_, j) => j,
    })
}

pub fn distance_for_class(c: ClassIndex) -> usize {
    distance_formula(c.i, c.j()).expect("j >= i by construction")
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceViolation {
    pub u: u32,
    pub v: u32,
    pub class: ClassIndex,
    pub formula: usize,
    pub observed: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub struct DistanceReport {
    pub pairs_checked: u64,
    pub violation_count: u64,
    pub violations: Vec<DistanceViolation>,
    /// Number of ordered pairs at each realized distance.
    pub distance_counts: BTreeMap<u32, u64>,
    pub diameter: Option<u32>,
    pub formula_max: usize,
}

impl DistanceReport {
    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

/// BFS from every vertex, comparing against `distance_formula`.
pub fn verify_distance_lemma(g: &RelationGraph, cm: &ClassMatrix) -> DistanceReport {
    let size = g.vertex_count();
    let formula: Vec<usize> = cm.classes().iter().map(|&c| distance_for_class(c)).collect();
    let per_source: Vec<(Vec<DistanceViolation>, u64, BTreeMap<u32, u64>)> = (0..size)
        .into_par_iter()
        .map(|u| {
            let dist = bfs(g.adjacency(), u);
            let mut bad = Vec::new();
            let mut count = 0;
            let mut hist = BTreeMap::new();
            for (v, &dv) in dist.iter().enumerate() {
                let k = cm.get(u, v) as usize;
                let observed = (dv != UNREACHABLE).then_some(dv);
                if let Some(d) = observed {
                    *hist.entry(d).or_insert(0) += 1;
                }
                let expected = formula.get(k).copied();
                if expected.is_none() || observed != expected.map(|e| e as u32) {
                    count += 1;
                    if bad.len() < MAX_LISTED {
                        bad.push(DistanceViolation {
                            u: u as u32,
                            v: v as u32,
                            class: cm.class_of(u, v).unwrap_or(ClassIndex::new(usize::MAX, 0)),
                            formula: expected.unwrap_or(usize::MAX),
                            observed,
                        });
                    }
                }
            }
            (bad, count, hist)
        })
        .collect();
    let mut violations = Vec::new();
    let mut violation_count = 0;
    let mut distance_counts = BTreeMap::new();
    for (bad, count, hist) in per_source {
        violation_count += count;
        for b in bad {
            if violations.len() < MAX_LISTED {
                violations.push(b);
            }
        }
        for (d, c) in hist {
            *distance_counts.entry(d).or_insert(0) += c;
        }
    }
    let diameter = distance_counts.keys().next_back().copied();
    DistanceReport {
        pairs_checked: (size * size) as u64,
        violation_count,
        violations,
        distance_counts,
        diameter,
        formula_max: formula.iter().copied().max().unwrap_or(0),
    }
}

/// `Γ_1(M)` and the split of the distance-2 sphere into
/// `Γ_{0,1}(M)`, `Γ_{1,1}(M)`, `Γ_{2,0}(M)`.
#[derive(Clone, Debug, Serialize)]
pub struct SubconstituentPartition {
    pub base: u32,
    pub first: Vec<u32>,
    pub cells: BTreeMap<ClassIndex, Vec<u32>>,
    /// Distance-2 vertices outside the three classes (expected empty).
    pub stray: Vec<u32>,
    pub sphere2_size: usize,
}

pub const SECOND_SUBCONSTITUENT_CLASSES: [ClassIndex; 3] =
    [ClassIndex { i: 0, jmi: 1 }, ClassIndex { i: 1, jmi: 1 }, ClassIndex { i: 2, jmi: 0 }];

pub fn subconstituents(g: &RelationGraph, cm: &ClassMatrix, base: u32) -> SubconstituentPartition {
    let dist = bfs(g.adjacency(), base as usize);
    let first: Vec<u32> = g.neighbors(base as usize).to_vec();
    let mut cells: BTreeMap<ClassIndex, Vec<u32>> =
        SECOND_SUBCONSTITUENT_CLASSES.iter().map(|&c| (c, Vec::new())).collect();
    let mut stray = Vec::new();
    let mut sphere2_size = 0;
    for (v, &dv) in dist.iter().enumerate() {
        if dv != 2 {
            continue;
        }
        sphere2_size += 1;
        match cm.class_of(base as usize, v).and_then(|c| cells.get_mut(&c)) {
            Some(cell) => cell.push(v as u32),
            None => stray.push(v as u32),
        }
    }
    SubconstituentPartition { base, first, cells, stray, sphere2_size }
}

#[derive(Clone, Debug, Serialize)]
pub struct CellCount {
    pub class: ClassIndex,
    pub cell_size: usize,
    pub expected: u64,
    /// Distinct observed neighbor counts inside `Γ_1(M)`.
    pub observed: Vec<u64>,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct NeighborCountReport {
    pub base: u32,
    pub cells: Vec<CellCount>,
    pub partition_ok: bool,
    /// `v ∈ Γ_{0,1}(M)` adjacent to `u ∈ Γ_1(M)` iff `v ∩ M = u ∩ M`.
    pub characterization_ok: bool,
    pub characterization_failures: Vec<(u32, u32)>,
}

impl NeighborCountReport {
    pub fn passed(&self) -> bool {
        self.partition_ok && self.characterization_ok && self.cells.iter().all(|c| c.passed)
    }
}

/// Expected neighbor counts in `Γ_1(M)`: `q^{l+1}[n-m,1]`, `q^2`, `(q+1)^2`.
pub fn expected_neighbor_counts(params: &AmbientParams) -> [u64; 3] {
    let q = params.q as u64;
    let g = gaussian_binomial(params.n - params.m, 1, params.q).to_u64().unwrap_or(u64::MAX);
    [q.pow(params.l as u32 + 1) * g, q * q, (q + 1) * (q + 1)]
}

pub fn verify_neighbor_counts(g: &RelationGraph, part: &SubconstituentPartition) -> Result<NeighborCountReport> {
    let params = g.params();
    let field = g.field();
    let expected = expected_neighbor_counts(&params);
    let first: Vec<usize> = part.first.iter().map(|&v| v as usize).collect();

    let mut cells = Vec::new();
    for (k, c) in SECOND_SUBCONSTITUENT_CLASSES.iter().enumerate() {
        let members = &part.cells[c];
        let mut observed: Vec<u64> =
            members.iter().map(|&v| first.iter().filter(|&&u| g.adjacent(v as usize, u)).count() as u64).collect();
        observed.sort_unstable();
        observed.dedup();
        let passed = observed.iter().all(|&o| o == expected[k]);
        cells.push(CellCount { class: *c, cell_size: members.len(), expected: expected[k], observed, passed });
    }

    let mut seen = std::collections::HashSet::new();
    let disjoint = part.cells.values().flatten().all(|v| seen.insert(*v));
    let partition_ok = disjoint && part.stray.is_empty() && seen.len() == part.sphere2_size;

    let base = g.vertices().get(part.base);
    let first_meets: Vec<Subspace> =
        part.first.iter().map(|&u| base.intersection(g.vertices().get(u), field)).collect::<Result<_>>()?;
    let mut characterization_failures = Vec::new();
    for &v in &part.cells[&ClassIndex::new(0, 1)] {
        let meet_v = base.intersection(g.vertices().get(v), field)?;
        for (idx, &u) in part.first.iter().enumerate() {
            let same = first_meets[idx] == meet_v;
            if same != g.adjacent(v as usize, u as usize) {
                characterization_failures.push((v, u));
            }
        }
    }
    Ok(NeighborCountReport {
        base: part.base,
        cells,
        partition_ok,
        characterization_ok: characterization_failures.is_empty(),
        characterization_failures: characterization_failures.into_iter().take(MAX_LISTED).collect(),
    })
}

/// `C(W) = {P ∈ X_m : W ⊆ P}` for every `W ∈ X_{m-1}`.
#[derive(Clone, Debug)]
pub struct CliqueFamily {
    lower: TypeM0Set,
    members: Vec<Vec<u32>>,
    /// For each vertex of `X_m`, the cliques containing it.
    vertex_cliques: Vec<Vec<u32>>,
}

impl CliqueFamily {
    pub fn lower(&self) -> &TypeM0Set {
        &self.lower
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self, w: usize) -> &[u32] {
        &self.members[w]
    }

    pub fn cliques_of(&self, v: usize) -> &[u32] {
        &self.vertex_cliques[v]
    }

    /// Lookup from sorted member set to the clique index.
    pub fn index_by_members(&self) -> HashMap<&[u32], u32> {
        self.members.iter().enumerate().map(|(k, m)| (m.as_slice(), k as u32)).collect()
    }
}

/// Every hyperplane of a type-`(m,0)` subspace has type `(m-1,0)`, so the
/// family is built by enumerating hyperplanes of each vertex.
pub fn clique_family(g: &RelationGraph) -> Result<CliqueFamily> {
    let params = g.params();
    if params.m == 0 {
        return Err(Error::Parameter("clique family needs m >= 1".into()));
    }
    let field = g.field();
    let lower = enumerate_type_m0(&params.with_m(params.m - 1)?, field)?;
    let coeffs = enumerate_rref(params.m - 1, params.m, field);
    let vertex_cliques: Vec<Vec<u32>> = g
        .vertices()
        .vertices()
        .par_iter()
        .map(|p| {
            let mut ids: Vec<u32> = coeffs
                .iter()
                .map(|c| {
                    let w = Subspace::from_matrix(&c.mul(p.basis(), field), params.n, params.l, field)
                        .expect("hyperplane basis has the ambient width");
                    lower.id_of(&w).expect("hyperplanes of type (m,0) spaces have type (m-1,0)")
                })
                .collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    let mut members = vec![Vec::new(); lower.len()];
    for (v, ws) in vertex_cliques.iter().enumerate() {
        for &w in ws {
            members[w as usize].push(v as u32);
        }
    }
    Ok(CliqueFamily { lower, members, vertex_cliques })
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueReport {
    pub family_size: usize,
    pub expected_family_size: String,
    pub clique_size: usize,
    pub parts: usize,
    pub part_size: usize,
    /// Cliques failing the size or complete-multipartite test.
    pub bad_cliques: Vec<u32>,
    pub distinct_member_sets: bool,
    pub edges: usize,
    /// Edges not contained in exactly one clique.
    pub edges_not_in_exactly_one: usize,
    pub lower_adjacent_pairs: usize,
    /// Adjacent lower pairs whose cliques do not meet in `{W + W'}`.
    pub lower_pair_failures: usize,
}

impl CliqueReport {
    pub fn passed(&self) -> bool {
        self.bad_cliques.is_empty()
            && self.distinct_member_sets
            && self.edges_not_in_exactly_one == 0
            && self.lower_pair_failures == 0
            && self.family_size.to_string() == self.expected_family_size
    }
}

/// `|C(W)| = q^l [n-m+1, 1]`, split by left block into `[n-m+1,1]`
/// independent parts of size `q^l`, all edges between distinct parts.
pub fn verify_cliques(g: &RelationGraph, family: &CliqueFamily) -> Result<CliqueReport> {
    let params = g.params();
    let field = g.field();
    let part_size = (params.q as usize).pow(params.l as u32);
    let parts = gaussian_binomial(params.n - params.m + 1, 1, params.q).to_usize().unwrap_or(usize::MAX);
    let clique_size = part_size * parts;
    let lefts: Vec<Subspace> = g.vertices().vertices().iter().map(|p| p.left_block(field)).collect();

    let bad_cliques: Vec<u32> = (0..family.len())
        .into_par_iter()
        .filter(|&w| {
            let members = family.members(w);
            if members.len() != clique_size {
                return true;
            }
            let mut by_left: HashMap<&Subspace, Vec<u32>> = HashMap::new();
            for &v in members {
                by_left.entry(&lefts[v as usize]).or_default().push(v);
            }
            if by_left.len() != parts || by_left.values().any(|p| p.len() != part_size) {
                return true;
            }
            members.iter().any(|&a| {
                members
                    .iter()
                    .any(|&b| a != b && g.adjacent(a as usize, b as usize) == (lefts[a as usize] == lefts[b as usize]))
            })
        })
        .map(|w| w as u32)
        .collect();

    let mut sets: Vec<&[u32]> = (0..family.len()).map(|w| family.members(w)).collect();
    sets.sort_unstable();
    let distinct_member_sets = sets.windows(2).all(|w| w[0] != w[1]);

    let mut edges = 0;
    let mut edges_not_in_exactly_one = 0;
    for u in 0..g.vertex_count() {
        for &v in g.neighbors(u) {
            if (v as usize) < u {
                continue;
            }
            edges += 1;
            let shared = count_shared(family.cliques_of(u), family.cliques_of(v as usize));
            if shared != 1 {
                edges_not_in_exactly_one += 1;
            }
        }
    }

    // adjacent W, W' in Γ^(m-1): C(W) ∩ C(W') = {W + W'}
    let lower = family.lower();
    let mut lower_adjacent_pairs = 0;
    let mut lower_pair_failures = 0;
    if params.m >= 2 {
        let lv = lower.vertices();
        let results: Vec<(usize, usize)> = (0..lv.len())
            .into_par_iter()
            .map(|a| {
                let mut adj = 0;
                let mut fail = 0;
                for b in a + 1..lv.len() {
                    let meet = intersect_sorted(family.members(a), family.members(b));
                    if sum_is_type_m1_0(&lv[a], &lv[b], field) {
                        adj += 1;
                        let sum = lv[a].sum(&lv[b], field).expect("same ambient");
                        let ok = meet.len() == 1 && g.vertices().id_of(&sum) == Some(meet[0]);
                        if !ok {
                            fail += 1;
                        }
                    } else if !meet.is_empty() {
                        fail += 1;
                    }
                }
                (adj, fail)
            })
            .collect();
        for (a, f) in results {
            lower_adjacent_pairs += a;
            lower_pair_failures += f;
        }
    }

    let expected_family = BigUint::from(params.q).pow(((params.m - 1) * params.l) as u32)
        * gaussian_binomial(params.n, params.m - 1, params.q);
    Ok(CliqueReport {
        family_size: family.len(),
        expected_family_size: expected_family.to_string(),
        clique_size,
        parts,
        part_size,
        bad_cliques: bad_cliques.into_iter().take(MAX_LISTED).collect(),
        distinct_member_sets,
        edges,
        edges_not_in_exactly_one,
        lower_adjacent_pairs,
        lower_pair_failures,
    })
}

fn count_shared(a: &[u32], b: &[u32]) -> usize {
    intersect_sorted(a, b).len()
}

fn intersect_sorted(a: &[u32], b: &[u32]) -> Vec<u32> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::new();
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct CliqueConverseReport {
    /// `(t-1)s`: common neighbours two same-part vertices of a
    /// `K_t(s)` copy must share.
    pub threshold: u64,
    pub directed_edges: usize,
    /// Edges whose two endpoints lie in a number of cliques other than one.
    pub edges_without_unique_clique: usize,
    /// Common neighbours `Y ∉ C(M∩X)` of an edge `(M, X)` that still admit
    /// a part-mate of `M` adjacent to both `X` and `Y`.
    pub extension_failures: usize,
    /// Largest common-neighbour count of `M` with a distance-2 vertex
    /// outside `Γ_{0,1}(M)`, over all `M`.
    pub max_common_outside_gamma01: u64,
    /// Common-neighbour count of `M` with `Γ_{0,1}(M)` vertices (min, max).
    pub gamma01_common: (u64, u64),
}

impl CliqueConverseReport {
    pub fn passed(&self) -> bool {
        self.edges_without_unique_clique == 0
            && self.extension_failures == 0
            && self.max_common_outside_gamma01 < self.threshold
    }
}

/// Shows that the only complete multipartite `K_t(q^l)` through an edge
/// `(M, X)` is `C(M ∩ X)`, using the common-neighbour separation: a
/// part-mate `P` of `M` inside such a copy shares at least `(t-1)s`
/// neighbours with `M`, which only `Γ_{0,1}(M)` vertices do.
pub fn verify_clique_converse(
    g: &RelationGraph,
    cm: &ClassMatrix,
    family: &CliqueFamily,
    budget: &Budget,
) -> Result<CliqueConverseReport> {
    let params = g.params();
    let size = g.vertex_count();
    let degree = g.regular_degree().unwrap_or(0) as u128;
    budget.check(size as u128 * degree * degree * g.bits().words() as u128)?;
    let s = (params.q as u64).pow(params.l as u32);
    let t = gaussian_binomial(params.n - params.m + 1, 1, params.q).to_u64().unwrap_or(u64::MAX);
    let threshold = (t - 1) * s;
    let gamma01 = cm.class_id(ClassIndex::new(0, 1));
    let bits = g.bits();

    let per_vertex: Vec<(usize, usize, usize, u64, u64, u64)> = (0..size)
        .into_par_iter()
        .map(|mv| {
            // heavy(M): non-neighbours P != M with at least `threshold` common neighbours
            let mut heavy = vec![0u64; bits.words()];
            let mut max_outside = 0;
            let (mut lo, mut hi) = (u64::MAX, 0);
            for p in 0..size {
                if p == mv || g.adjacent(mv, p) {
                    continue;
                }
                let common = bits.common(mv, p) as u64;
                if common == 0 {
                    continue;
                }
                if Some(cm.get(mv, p)) == gamma01 {
                    lo = lo.min(common);
                    hi = hi.max(common);
                } else {
                    max_outside = max_outside.max(common);
                }
                if common >= threshold {
                    heavy[p / 64] |= 1 << (p % 64);
                }
            }
            let mut edges = 0;
            let mut no_unique = 0;
            let mut failures = 0;
            for &x in g.neighbors(mv) {
                let x = x as usize;
                edges += 1;
                let shared = intersect_sorted(family.cliques_of(mv), family.cliques_of(x));
                if shared.len() != 1 {
                    no_unique += 1;
                    continue;
                }
                let clique = shared[0];
                for y in ones(bits.row(mv)) {
                    if !g.adjacent(x, y) || family.cliques_of(y).binary_search(&clique).is_ok() {
                        continue;
                    }
                    let extendable = heavy.iter().zip(bits.row(x)).zip(bits.row(y)).any(|((h, a), b)| h & a & b != 0);
                    if extendable {
                        failures += 1;
                    }
                }
            }
            (edges, no_unique, failures, max_outside, lo, hi)
        })
        .collect();

    let mut report = CliqueConverseReport {
        threshold,
        directed_edges: 0,
        edges_without_unique_clique: 0,
        extension_failures: 0,
        max_common_outside_gamma01: 0,
        gamma01_common: (u64::MAX, 0),
    };
    for (e, nu, f, mo, lo, hi) in per_vertex {
        report.directed_edges += e;
        report.edges_without_unique_clique += nu;
        report.extension_failures += f;
        report.max_common_outside_gamma01 = report.max_common_outside_gamma01.max(mo);
        report.gamma01_common.0 = report.gamma01_common.0.min(lo);
        report.gamma01_common.1 = report.gamma01_common.1.max(hi);
    }
    if report.gamma01_common.0 == u64::MAX {
        report.gamma01_common.0 = 0;
    }
    Ok(report)
}
