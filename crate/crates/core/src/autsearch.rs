//! Automorphism groups of edge-colored complete graphs by individualization
//! and refinement, with orbit pruning.

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::budget::Deadline;
use crate::error::{Error, Result};
use crate::perm::Perm;
use crate::relgraph::CliqueFamily;
use crate::report::ser_decimal;
use crate::scheme::ClassMatrix;

/// A complete graph with a color on every ordered pair; the coloring is
/// symmetric and diagonal colors never occur off the diagonal.
#[derive(Clone, Debug)]
pub struct ColoredGraph {
    n: usize,
    colors: Vec<u8>,
    num_colors: usize,
    /// Non-background, off-diagonal entries per vertex.
    lists: Vec<Vec<(u32, u8)>>,
}

impl ColoredGraph {
    pub fn from_matrix(n: usize, colors: Vec<u8>) -> Result<ColoredGraph> {
        if colors.len() != n * n {
            return Err(Error::Parameter(format!("{} colors for {n} vertices", colors.len())));
        }
        let num_colors = colors.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
        let mut on_diag = vec![false; num_colors];
        let mut off_diag = vec![0u64; num_colors];
        for u in 0..n {
            on_diag[colors[u * n + u] as usize] = true;
            for v in 0..n {
                let c = colors[u * n + v];
                if c != colors[v * n + u] {
                    return Err(Error::Parameter(format!("coloring not symmetric at ({u},{v})")));
                }
                if u != v {
                    off_diag[c as usize] += 1;
                }
            }
        }
        if (0..num_colors).any(|c| on_diag[c] && off_diag[c] > 0) {
            return Err(Error::Parameter("a diagonal color also occurs off the diagonal".into()));
        }
        let background = (0..num_colors).max_by_key(|&c| (off_diag[c], std::cmp::Reverse(c))).unwrap_or(0) as u8;
        let lists = (0..n)
            .map(|u| {
                (0..n)
                    .filter(|&v| v != u && colors[u * n + v] != background)
                    .map(|v| (v as u32, colors[u * n + v]))
                    .collect()
            })
            .collect();
        Ok(ColoredGraph { n, colors, num_colors, lists })
    }

    /// Simple graph: 0 for non-edges, 1 for edges, 2 on the diagonal.
    pub fn from_adjacency(adj: &[Vec<u32>]) -> Result<ColoredGraph> {
        let n = adj.len();
        let mut colors = vec![0u8; n * n];
        for (u, nb) in adj.iter().enumerate() {
            colors[u * n + u] = 2;
            for &v in nb {
                colors[u * n + v as usize] = 1;
            }
        }
        ColoredGraph::from_matrix(n, colors)
    }

    /// One color per relation class.
    pub fn from_class_matrix(cm: &ClassMatrix) -> Result<ColoredGraph> {
        let n = cm.size();
        let colors = (0..n).flat_map(|u| cm.row(u).iter().copied()).collect();
        ColoredGraph::from_matrix(n, colors)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn num_colors(&self) -> usize {
        self.num_colors
    }

    #[inline]
    pub fn color(&self, u: usize, v: usize) -> u8 {
        self.colors[u * self.n + v]
    }

    /// Applies a color permutation `c ↦ sigma[c]`.
    pub fn recolor(&self, sigma: &[u8]) -> Result<ColoredGraph> {
        ColoredGraph::from_matrix(self.n, self.colors.iter().map(|&c| sigma[c as usize]).collect())
    }

    /// The graph with vertex `u` renamed `p(u)`.
    pub fn relabel(&self, p: &Perm) -> Result<ColoredGraph> {
        let n = self.n;
        let mut colors = vec![0u8; n * n];
        for u in 0..n {
            let pu = p.apply(u as u32) as usize;
            for v in 0..n {
                colors[pu * n + p.apply(v as u32) as usize] = self.colors[u * n + v];
            }
        }
        ColoredGraph::from_matrix(n, colors)
    }

    /// Whether `other(p(u), p(v)) = self(u, v)` for all pairs.
    pub fn is_isomorphism(&self, other: &ColoredGraph, p: &Perm) -> bool {
        p.degree() == self.n
            && other.n == self.n
            && (0..self.n).all(|u| {
                let pu = p.apply(u as u32) as usize;
                (0..self.n).all(|v| other.color(pu, p.apply(v as u32) as usize) == self.color(u, v))
            })
    }

    pub fn is_automorphism(&self, p: &Perm) -> bool {
        self.is_isomorphism(self, p)
    }

    /// The color `p` sends `c` to, if `p` permutes the colors consistently.
    pub fn color_action(&self, p: &Perm) -> Option<Vec<u8>> {
        let mut sigma: Vec<Option<u8>> = vec![None; self.num_colors];
        for u in 0..self.n {
            let pu = p.apply(u as u32) as usize;
            for v in 0..self.n {
                let c = self.color(u, v) as usize;
                let d = self.color(pu, p.apply(v as u32) as usize);
                match sigma[c] {
                    None => sigma[c] = Some(d),
                    Some(s) if s == d => {}
                    Some(_) => return None,
                }
            }
        }
        Some(sigma.into_iter().enumerate().map(|(c, s)| s.unwrap_or(c as u8)).collect())
    }

    /// Per color, the sorted multiset of per-vertex degrees.
    fn color_signatures(&self) -> Vec<Vec<u64>> {
        let mut per_vertex = vec![vec![0u64; self.n]; self.num_colors];
        for u in 0..self.n {
            for v in 0..self.n {
                per_vertex[self.color(u, v) as usize][u] += 1;
            }
        }
        for d in &mut per_vertex {
            d.sort_unstable();
        }
        per_vertex
    }
}

/// An ordered partition: `cell_of[v]` is the index of the cell holding `v`.
#[derive(Clone, Debug)]
struct Node {
    cell_of: Vec<u32>,
    cells: usize,
    trace: u64,
}

impl Node {
    fn is_discrete(&self, n: usize) -> bool {
        self.cells == n
    }

    fn cell_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.cells];
        for &c in &self.cell_of {
            sizes[c as usize] += 1;
        }
        sizes
    }

    /// First cell of maximum size, if any cell is not a singleton.
    fn target_cell(&self) -> Option<u32> {
        let sizes = self.cell_sizes();
        let max = *sizes.iter().max()?;
        (max > 1).then(|| sizes.iter().position(|&s| s == max).unwrap() as u32)
    }

    fn members(&self, cell: u32) -> Vec<u32> {
        (0..self.cell_of.len() as u32).filter(|&v| self.cell_of[v as usize] == cell).collect()
    }

    /// The discrete partition read as cell index to vertex.
    fn labeling(&self) -> Vec<u32> {
        let mut order = vec![0; self.cell_of.len()];
        for (v, &c) in self.cell_of.iter().enumerate() {
            order[c as usize] = v as u32;
        }
        order
    }
}

fn root(g: &ColoredGraph) -> Node {
    let cell_of: Vec<u32> = (0..g.n).map(|v| g.color(v, v) as u32).collect();
    refine(g, renumber(&cell_of), 0)
}

/// Dense cell indices preserving the order of the given keys.
fn renumber(keys: &[u32]) -> Vec<u32> {
    let mut sorted: Vec<u32> = keys.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect()
}

/// Iterated colored-degree refinement. New cells are ordered by
/// `(old cell, signature)`, which keeps the result equivariant.
fn refine(g: &ColoredGraph, mut cell_of: Vec<u32>, seed: u64) -> Node {
    let n = g.n;
    let nc = g.num_colors as u64;
    let mut cells = cell_of.iter().map(|&c| c as usize + 1).max().unwrap_or(0);
    let mut hasher = DefaultHasher::new();
    seed.hash(&mut hasher);
    if n == 0 {
        return Node { cell_of, cells: 0, trace: hasher.finish() };
    }
    let mut codes = Vec::new();
    loop {
        let sigs: Vec<Vec<(u64, u32)>> = (0..n)
            .map(|u| {
                codes.clear();
                codes.extend(g.lists[u].iter().map(|&(v, c)| cell_of[v as usize] as u64 * nc + c as u64));
                codes.sort_unstable();
                let mut rle: Vec<(u64, u32)> = Vec::new();
                for &x in codes.iter() {
                    match rle.last_mut() {
                        Some((y, k)) if *y == x => *k += 1,
                        _ => rle.push((x, 1)),
                    }
                }
                rle
            })
            .collect();
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_by(|&a, &b| (cell_of[a as usize], &sigs[a as usize]).cmp(&(cell_of[b as usize], &sigs[b as usize])));
        let mut next = vec![0u32; n];
        let mut id = 0u32;
        for (k, &v) in order.iter().enumerate() {
            if k > 0 {
                let prev = order[k - 1] as usize;
                if (cell_of[prev], &sigs[prev]) != (cell_of[v as usize], &sigs[v as usize]) {
                    (cell_of[prev], &sigs[prev]).hash(&mut hasher);
                    k.hash(&mut hasher);
                    id += 1;
                }
            }
            next[v as usize] = id;
        }
        if let Some(&last) = order.last() {
            (cell_of[last as usize], &sigs[last as usize]).hash(&mut hasher);
        }
        let new_cells = id as usize + 1;
        cell_of = next;
        if new_cells == cells {
            break;
        }
        cells = new_cells;
    }
    Node { cell_of, cells, trace: hasher.finish() }
}

/// Splits `v` off as a singleton placed before the rest of its cell.
fn individualize(g: &ColoredGraph, node: &Node, v: u32) -> Node {
    let c = node.cell_of[v as usize];
    let cell_of = node
        .cell_of
        .iter()
        .enumerate()
        .map(|(u, &d)| if d > c || (d == c && u as u32 != v) { d + 1 } else { d })
        .collect();
    refine(g, cell_of, node.trace)
}

/// The leftmost path of the search tree.
struct FirstPath {
    nodes: Vec<Node>,
    chosen: Vec<u32>,
    targets: Vec<Vec<u32>>,
    leaf: Vec<u32>,
}

fn first_path(g: &ColoredGraph) -> FirstPath {
    let mut nodes = vec![root(g)];
    let mut chosen = Vec::new();
    let mut targets = Vec::new();
    while let Some(cell) = nodes.last().unwrap().target_cell() {
        let node = nodes.last().unwrap();
        let members = node.members(cell);
        let v = members[0];
        let child = individualize(g, node, v);
        chosen.push(v);
        targets.push(members);
        nodes.push(child);
    }
    let leaf = nodes.last().unwrap().labeling();
    FirstPath { nodes, chosen, targets, leaf }
}

struct Search<'a> {
    g: &'a ColoredGraph,
    h: &'a ColoredGraph,
    path: &'a FirstPath,
    deadline: &'a Deadline,
    leaves: u64,
}

impl Search<'_> {
    /// Depth-first search under `node` (a node of `h` at `depth`) for a leaf
    /// whose labeling, matched to the first leaf of `g`, is an isomorphism.
    fn find(
        &mut self,
        node: &Node,
        depth: usize,
        root_orbits: Option<&[u32]>,
    ) -> std::result::Result<Option<Perm>, ()> {
        if self.deadline.expired() {
            return Err(());
        }
        let reference = &self.path.nodes[depth];
        if node.trace != reference.trace || node.cells != reference.cells {
            return Ok(None);
        }
        if node.is_discrete(self.g.n) {
            self.leaves += 1;
            let lambda = node.labeling();
            let mut images = vec![0u32; self.g.n];
            for (k, &v) in self.path.leaf.iter().enumerate() {
                images[v as usize] = lambda[k];
            }
            let p = Perm::from_images(images).expect("two discrete labelings");
            return Ok(self.g.is_isomorphism(self.h, &p).then_some(p));
        }
        let Some(cell) = node.target_cell() else {
            return Ok(None);
        };
        let mut tried = std::collections::HashSet::new();
        for w in node.members(cell) {
            if let Some(orbits) = root_orbits {
                if !tried.insert(orbits[w as usize]) {
                    continue;
                }
            }
            let child = individualize(self.h, node, w);
            if let Some(p) = self.find(&child, depth + 1, None)? {
                return Ok(Some(p));
            }
        }
        Ok(None)
    }
}

struct UnionFind(Vec<u32>);

impl UnionFind {
    fn new(n: usize) -> UnionFind {
        UnionFind((0..n as u32).collect())
    }

    fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.0[r as usize] != r {
            r = self.0[r as usize];
        }
        let mut y = x;
        while self.0[y as usize] != r {
            let next = self.0[y as usize];
            self.0[y as usize] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi as usize] = lo;
        }
    }

    fn add_perm(&mut self, p: &Perm) {
        for x in 0..p.degree() as u32 {
            self.union(x, p.apply(x));
        }
    }

    fn reps(&mut self) -> Vec<u32> {
        (0..self.0.len() as u32).map(|x| self.find(x)).collect()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AutResult {
    #[serde(serialize_with = "ser_decimal")]
    pub order: BigUint,
    pub generator_count: usize,
    pub generators: Vec<Perm>,
    /// For each generator, the permutation it induces on colors.
    pub color_action: Vec<Vec<u8>>,
    pub levels: usize,
    pub leaves_visited: u64,
}

/// Color-preserving automorphism group.
pub fn graph_aut(g: &ColoredGraph, deadline: &Deadline) -> Result<AutResult> {
    let path = first_path(g);
    let levels = path.chosen.len();
    let mut gens: Vec<Perm> = Vec::new();
    let mut order = BigUint::one();
    let mut search = Search { g, h: g, path: &path, deadline, leaves: 1 };
    for (done, i) in (0..levels).rev().enumerate() {
        let mut uf = UnionFind::new(g.n);
        for p in &gens {
            uf.add_perm(p);
        }
        let v = path.chosen[i];
        let mut refuted = vec![false; g.n];
        for &w in &path.targets[i] {
            if w == v || refuted[w as usize] || uf.find(w) == uf.find(v) {
                continue;
            }
            let child = individualize(g, &path.nodes[i], w);
            let found = search.find(&child, i + 1, None).map_err(|_| Error::Timeout {
                seconds: deadline.limit_secs(),
                levels_done: done,
                levels,
            })?;
            match found {
                Some(p) => {
                    uf.add_perm(&p);
                    gens.push(p);
                }
                None => {
                    let r = uf.find(w);
                    for x in 0..g.n as u32 {
                        if uf.find(x) == r {
                            refuted[x as usize] = true;
                        }
                    }
                }
            }
        }
        let r = uf.find(v);
        let orbit = path.targets[i].iter().filter(|&&x| uf.find(x) == r).count();
        order *= orbit;
    }
    let color_action = gens.iter().map(|p| g.color_action(p).expect("automorphism")).collect();
    Ok(AutResult {
        order,
        generator_count: gens.len(),
        generators: gens,
        color_action,
        levels,
        leaves_visited: search.leaves,
    })
}

/// An isomorphism `g → h`, if one exists. `aut_g` must generate a subgroup
/// of `Aut(h)`; it prunes the first branching.
pub fn find_isomorphism(
    g: &ColoredGraph,
    h: &ColoredGraph,
    aut_g: &[Perm],
    deadline: &Deadline,
) -> Result<Option<Perm>> {
    if g.n != h.n {
        return Ok(None);
    }
    let path = first_path(g);
    let mut uf = UnionFind::new(g.n);
    for p in aut_g {
        uf.add_perm(p);
    }
    let orbits = uf.reps();
    let mut search = Search { g, h, path: &path, deadline, leaves: 0 };
    search.find(&root(h), 0, Some(&orbits)).map_err(|_| Error::Timeout {
        seconds: deadline.limit_secs(),
        levels_done: 0,
        levels: path.chosen.len(),
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ColorCandidate {
    pub sigma: Vec<u8>,
    pub realized: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SchemeAutResult {
    #[serde(serialize_with = "ser_decimal")]
    pub inner_order: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub order: BigUint,
    /// Non-identity color permutations with matching degree signatures.
    pub candidates: Vec<ColorCandidate>,
    /// Realized color permutations, the identity included.
    pub color_group_order: usize,
    pub inner: AutResult,
    /// One color-permuting automorphism per realized non-identity candidate.
    pub outer_generators: Vec<Perm>,
}

/// Color permutations fixing the diagonal colors and mapping each color to
/// one with the same per-vertex degree multiset.
pub fn color_candidates(g: &ColoredGraph) -> Vec<Vec<u8>> {
    let sigs = g.color_signatures();
    let diag: Vec<bool> = (0..g.num_colors).map(|c| (0..g.n).any(|v| g.color(v, v) as usize == c)).collect();
    let mut groups: Vec<Vec<u8>> = Vec::new();
    let mut by_sig: HashMap<(&Vec<u64>, bool), usize> = HashMap::new();
    for c in 0..g.num_colors {
        let k = *by_sig.entry((&sigs[c], diag[c])).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[k].push(c as u8);
    }
    let mut out: Vec<Vec<u8>> = vec![(0..g.num_colors as u8).collect()];
    for grp in groups.iter().filter(|grp| grp.len() > 1) {
        let mut next = Vec::new();
        for sigma in &out {
            for p in permutations(grp.len()) {
                let mut s = sigma.clone();
                for (a, &b) in p.iter().enumerate() {
                    s[grp[a] as usize] = grp[b];
                }
                next.push(s);
            }
        }
        out = next;
    }
    out.retain(|s| s.iter().enumerate().any(|(c, &d)| c as u8 != d));
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out.sort();
    out
}

/// Color-permuting automorphism group: the inner group plus one search per
/// candidate color permutation.
pub fn scheme_aut(g: &ColoredGraph, deadline: &Deadline) -> Result<SchemeAutResult> {
    let inner = graph_aut(g, deadline)?;
    let mut candidates = Vec::new();
    let mut outer_generators = Vec::new();
    for sigma in color_candidates(g) {
        let h = g.recolor(&sigma)?;
        let iso = find_isomorphism(g, &h, &inner.generators, deadline)?;
        if let Some(p) = &iso {
            outer_generators.push(p.clone());
        }
        candidates.push(ColorCandidate { sigma, realized: iso.is_some() });
    }
    let color_group_order = 1 + outer_generators.len();
    Ok(SchemeAutResult {
        order: &inner.order * color_group_order,
        inner_order: inner.order.clone(),
        candidates,
        color_group_order,
        inner,
        outer_generators,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct InnerAutReport {
    #[serde(serialize_with = "ser_decimal")]
    pub inner_order: BigUint,
    #[serde(serialize_with = "ser_decimal")]
    pub graph_order: BigUint,
    /// Every generator of the graph group preserves each class.
    pub graph_group_preserves_classes: bool,
    pub inner_equals_graph: bool,
}

/// `Inn` versus `Aut(Γ)`, decided by the two searches and a generator check.
pub fn inner_vs_graph(cm: &ClassMatrix, gamma: &ColoredGraph, deadline: &Deadline) -> Result<InnerAutReport> {
    let full = ColoredGraph::from_class_matrix(cm)?;
    let inner = graph_aut(&full, deadline)?;
    let graph = graph_aut(gamma, deadline)?;
    let graph_group_preserves_classes = graph.generators.iter().all(|p| full.is_automorphism(p));
    Ok(InnerAutReport {
        inner_equals_graph: graph_group_preserves_classes && inner.order == graph.order,
        inner_order: inner.order,
        graph_order: graph.order,
        graph_group_preserves_classes,
    })
}

/// `σ_{m-1}` with `σ(C(W)) = C(σ_{m-1}(W))`.
pub fn induced_lower_action(sigma: &Perm, family: &CliqueFamily) -> Result<Perm> {
    let index = family.index_by_members();
    let images = (0..family.len())
        .map(|w| {
            let mut img: Vec<u32> = family.members(w).iter().map(|&v| sigma.apply(v)).collect();
            img.sort_unstable();
            index.get(img.as_slice()).copied().ok_or(Error::NotCliquePreserving(w))
        })
        .collect::<Result<Vec<u32>>>()?;
    Perm::from_images(images)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::pgroup::induced_perm_group;
    use crate::relgraph::{build_relation_graph, clique_family};
    use crate::subspace::AmbientParams;

    fn deadline() -> Deadline {
        Budget::default().deadline()
    }

    fn graph_of(edges: &[(u32, u32)], n: usize) -> ColoredGraph {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a as usize].push(b);
            adj[b as usize].push(a);
        }
        ColoredGraph::from_adjacency(&adj).unwrap()
    }

    fn factorial(n: u32) -> BigUint {
        (1..=n).fold(BigUint::one(), |a, k| a * k)
    }

    #[test]
    fn complete_graph() {
        let edges: Vec<(u32, u32)> = (0..5).flat_map(|a| (a + 1..5).map(move |b| (a, b))).collect();
        let r = graph_aut(&graph_of(&edges, 5), &deadline()).unwrap();
        assert_eq!(r.order, BigUint::from(120u32));
    }

    #[test]
    fn petersen_and_cube() {
        let mut pet = Vec::new();
        for k in 0..5 {
            pet.push((k, (k + 1) % 5));
            pet.push((k, k + 5));
            pet.push((k + 5, (k + 2) % 5 + 5));
        }
        assert_eq!(graph_aut(&graph_of(&pet, 10), &deadline()).unwrap().order, BigUint::from(120u32));
        let cube: Vec<(u32, u32)> =
            (0..8u32).flat_map(|a| (0..3).map(move |b| (a, a ^ (1 << b)))).filter(|(a, b)| a < b).collect();
        assert_eq!(graph_aut(&graph_of(&cube, 8), &deadline()).unwrap().order, BigUint::from(48u32));
    }

    #[test]
    fn disjoint_edges_wreath_product() {
        let edges: Vec<(u32, u32)> = (0..15).map(|k| (2 * k, 2 * k + 1)).collect();
        let r = graph_aut(&graph_of(&edges, 30), &deadline()).unwrap();
        assert_eq!(r.order, BigUint::from(2u32).pow(15) * factorial(15));
        let g = graph_of(&edges, 30);
        assert!(r.generators.iter().all(|p| g.is_automorphism(p)));
    }

    #[test]
    fn asymmetric_and_empty() {
        // smallest asymmetric trees have 7 vertices
        let tree = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (2, 6)];
        assert_eq!(graph_aut(&graph_of(&tree, 7), &deadline()).unwrap().order, BigUint::one());
        assert_eq!(graph_aut(&graph_of(&[], 0), &deadline()).unwrap().order, BigUint::one());
    }

    #[test]
    fn rejects_bad_colorings() {
        assert!(ColoredGraph::from_matrix(2, vec![0, 1, 2, 0]).is_err());
        assert!(ColoredGraph::from_matrix(2, vec![0, 0, 0, 0]).is_err());
    }

    fn gamma(q: u32, n: usize, l: usize, m: usize) -> (crate::relgraph::RelationGraph, ClassMatrix) {
        let params = AmbientParams::new(q, n, l, m).unwrap();
        let g = build_relation_graph(&params, &Budget::default()).unwrap();
        let cm = ClassMatrix::build(g.vertices(), g.field(), &Budget::default()).unwrap();
        (g, cm)
    }

    #[test]
    fn gamma2_matches_induced_group() {
        let (g, cm) = gamma(2, 4, 1, 2);
        let cg = ColoredGraph::from_adjacency(g.adjacency()).unwrap();
        let r = graph_aut(&cg, &deadline()).unwrap();
        let induced = induced_perm_group(g.vertices(), g.field()).unwrap();
        assert_eq!(r.order, induced.group.order());
        assert_eq!(r.order, BigUint::from(322560u32));
        assert!(induced.perms.iter().all(|p| cg.is_automorphism(p)));

        let rep = inner_vs_graph(&cm, &cg, &deadline()).unwrap();
        assert!(rep.inner_equals_graph);
    }

    #[test]
    fn scheme_mode_refutes_the_equal_valency_swap() {
        let (_, cm) = gamma(2, 4, 1, 2);
        let full = ColoredGraph::from_class_matrix(&cm).unwrap();
        let r = scheme_aut(&full, &deadline()).unwrap();
        assert_eq!(r.candidates.len(), 1);
        let ids =
            [cm.class_id(crate::ClassIndex::new(1, 0)).unwrap(), cm.class_id(crate::ClassIndex::new(1, 1)).unwrap()];
        assert_eq!(r.candidates[0].sigma[ids[0] as usize], ids[1]);
        assert!(!r.candidates[0].realized);
        assert_eq!(r.order, BigUint::from(322560u32));
        assert_eq!(r.color_group_order, 1);
    }

    #[test]
    fn scheme_mode_finds_realized_swaps() {
        // in C_5 with distance coloring the two distances are swapped by x -> 2x
        let n = 5;
        let colors = (0..n * n)
            .map(|k| {
                let d = ((k / n) as i32 - (k % n) as i32).rem_euclid(5);
                match d {
                    0 => 0,
                    1 | 4 => 1,
                    _ => 2,
                }
            })
            .collect();
        let g = ColoredGraph::from_matrix(n, colors).unwrap();
        let r = scheme_aut(&g, &deadline()).unwrap();
        assert_eq!(r.inner_order, BigUint::from(10u32));
        assert_eq!(r.order, BigUint::from(20u32));
        let p = &r.outer_generators[0];
        assert_eq!(g.color_action(p).unwrap(), vec![0, 2, 1]);
    }

    #[test]
    fn order_is_relabel_invariant() {
        let (g, _) = gamma(2, 4, 1, 2);
        let cg = ColoredGraph::from_adjacency(g.adjacency()).unwrap();
        let shuffle = Perm::from_images((0..140u32).map(|v| (v * 37 + 11) % 140).collect()).unwrap();
        let r = graph_aut(&cg.relabel(&shuffle).unwrap(), &deadline()).unwrap();
        assert_eq!(r.order, BigUint::from(322560u32));
    }

    #[test]
    fn timeout_is_reported() {
        let (g, _) = gamma(2, 4, 1, 2);
        let cg = ColoredGraph::from_adjacency(g.adjacency()).unwrap();
        let budget = Budget { timeout: std::time::Duration::ZERO, ..Budget::default() };
        assert!(matches!(graph_aut(&cg, &budget.deadline()), Err(Error::Timeout { .. })));
    }

    #[test]
    fn lower_action_commutes_with_natural_action() {
        let (g, _) = gamma(2, 4, 1, 2);
        let fam = clique_family(&g).unwrap();
        let id = Perm::identity(g.vertex_count());
        assert!(induced_lower_action(&id, &fam).unwrap().is_identity());
        let upper = induced_perm_group(g.vertices(), g.field()).unwrap();
        for (s, p) in upper.maps.iter().zip(&upper.perms) {
            let lower = induced_lower_action(p, &fam).unwrap();
            assert_eq!(Some(lower), s.induced_perm(fam.lower(), g.field()));
        }
        // homomorphism on products
        let (a, b) = (&upper.perms[0], &upper.perms[upper.perms.len() - 1]);
        assert_eq!(
            induced_lower_action(&a.then(b), &fam).unwrap(),
            induced_lower_action(a, &fam).unwrap().then(&induced_lower_action(b, &fam).unwrap())
        );
    }

    #[test]
    fn non_automorphism_is_not_clique_preserving() {
        let (g, _) = gamma(2, 4, 1, 2);
        let fam = clique_family(&g).unwrap();
        let mut images: Vec<u32> = (0..140).collect();
        let other = fam.members(0).iter().find(|&&v| !fam.members(1).contains(&v)).copied().unwrap();
        let inside = fam.members(1).iter().find(|&&v| !fam.members(0).contains(&v)).copied().unwrap();
        images.swap(other as usize, inside as usize);
        let p = Perm::from_images(images).unwrap();
        assert!(matches!(induced_lower_action(&p, &fam), Err(Error::NotCliquePreserving(_))));
    }
}
