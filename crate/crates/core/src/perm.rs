//! Permutations on `0..n` and a deterministic Schreier–Sims.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};

/// A permutation stored as its image array; composition is left to right,
/// `x^(ab) = (x^a)^b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    pub fn from_images(images: Vec<u32>) -> Result<Perm> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            match seen.get_mut(x as usize) {
                Some(s) if !*s => *s = true,
                _ => return Err(Error::Parameter("image array is not a bijection".into())),
            }
        }
        Ok(Perm(images))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn images(&self) -> &[u32] {
        &self.0
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// First `self`, then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            inv[y as usize] = x as u32;
        }
        Perm(inv)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(x, &y)| x as u32 == y)
    }

    pub fn first_moved(&self) -> Option<u32> {
        self.0.iter().enumerate().find(|&(x, &y)| x as u32 != y).map(|(x, _)| x as u32)
    }

    /// Relabels through a bijection `f`: the result sends `f(x)` to `f(self(x))`.
    pub fn conjugate_by(&self, f: &Perm) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (x, &y) in self.0.iter().enumerate() {
            out[f.0[x] as usize] = f.0[y as usize];
        }
        Perm(out)
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

#[derive(Clone, Debug)]
struct Level {
    base: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    /// `transversal[x]` maps the base point to `x`.
    transversal: Vec<Option<Perm>>,
    inverse: Vec<Option<Perm>>,
}

impl Level {
    fn new(base: u32, degree: usize) -> Level {
        let mut l = Level { base, gens: Vec::new(), orbit: Vec::new(), transversal: Vec::new(), inverse: Vec::new() };
        l.rebuild(degree);
        l
    }

    fn rebuild(&mut self, degree: usize) {
        self.transversal = vec![None; degree];
        self.inverse = vec![None; degree];
        self.transversal[self.base as usize] = Some(Perm::identity(degree));
        self.orbit = vec![self.base];
        let mut k = 0;
        while k < self.orbit.len() {
            let x = self.orbit[k];
            let ux = self.transversal[x as usize].clone().expect("orbit point has a coset rep");
            for s in &self.gens {
                let y = s.apply(x);
                if self.transversal[y as usize].is_none() {
                    self.transversal[y as usize] = Some(ux.then(s));
                    self.orbit.push(y);
                }
            }
            k += 1;
        }
        for &x in &self.orbit {
            self.inverse[x as usize] = self.transversal[x as usize].as_ref().map(Perm::inverse);
        }
    }
}

/// A permutation group with a base and strong generating set.
#[derive(Clone, Debug)]
pub struct PermGroup {
    degree: usize,
    generators: Vec<Perm>,
    levels: Vec<Level>,
}

impl PermGroup {
    pub fn new(degree: usize, generators: Vec<Perm>) -> Result<PermGroup> {
        if let Some(g) = generators.iter().find(|g| g.degree() != degree) {
            return Err(Error::Parameter(format!("generator of degree {} in a group of degree {degree}", g.degree())));
        }
        let mut group = PermGroup { degree, generators, levels: Vec::new() };
        group.schreier_sims();
        Ok(group)
    }

    fn schreier_sims(&mut self) {
        let gens: Vec<Perm> = self.generators.iter().filter(|g| !g.is_identity()).cloned().collect();
        let Some(first) = gens.iter().find_map(Perm::first_moved) else {
            return;
        };
        let mut level = Level::new(first, self.degree);
        level.gens = gens;
        level.rebuild(self.degree);
        self.levels.push(level);

        let mut i = 0isize;
        while i >= 0 {
            let lv = i as usize;
            let mut found = None;
            'scan: for &x in &self.levels[lv].orbit {
                let ux = self.levels[lv].transversal[x as usize].as_ref().expect("orbit point");
                for s in &self.levels[lv].gens {
                    let y = s.apply(x);
                    let uy_inv = self.levels[lv].inverse[y as usize].as_ref().expect("orbit point");
                    let h = ux.then(s).then(uy_inv);
                    if h.is_identity() {
                        continue;
                    }
                    let (res, j) = self.strip(h, lv + 1);
                    if !res.is_identity() {
                        found = Some((res, j));
                        break 'scan;
                    }
                }
            }
            match found {
                None => i -= 1,
                Some((res, j)) => {
                    if j == self.levels.len() {
                        let b = res.first_moved().expect("non-identity residue");
                        self.levels.push(Level::new(b, self.degree));
                    }
                    for k in lv + 1..=j {
                        self.levels[k].gens.push(res.clone());
                        self.levels[k].rebuild(self.degree);
                    }
                    i = j as isize;
                }
            }
        }
    }

    /// Sifts `g` through the levels from `from`; returns the residue and the
    /// level where sifting stopped.
    fn strip(&self, mut g: Perm, from: usize) -> (Perm, usize) {
        for k in from..self.levels.len() {
            let l = &self.levels[k];
            let x = g.apply(l.base);
            match &l.inverse[x as usize] {
                Some(u) => g = g.then(u),
                None => return (g, k),
            }
        }
        (g, self.levels.len())
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Perm] {
        &self.generators
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.base).collect()
    }

    pub fn basic_orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn strong_generator_count(&self) -> usize {
        self.levels.first().map_or(0, |l| l.gens.len())
    }

    pub fn order(&self) -> BigUint {
        self.levels.iter().fold(BigUint::one(), |acc, l| acc * l.orbit.len())
    }

    pub fn contains(&self, g: &Perm) -> bool {
        g.degree() == self.degree && self.strip(g.clone(), 0).0.is_identity()
    }

    /// The orbit of `x` under the generators, in discovery order.
    pub fn orbit(&self, x: u32) -> Vec<u32> {
        orbit_of(&self.generators, self.degree, x)
    }

    pub fn is_transitive(&self) -> bool {
        self.degree <= 1 || self.orbit(0).len() == self.degree
    }
}

pub fn orbit_of(gens: &[Perm], degree: usize, x: u32) -> Vec<u32> {
    let mut seen = vec![false; degree];
    seen[x as usize] = true;
    let mut out = vec![x];
    let mut k = 0;
    while k < out.len() {
        let y = out[k];
        for g in gens {
            let z = g.apply(y);
            if !seen[z as usize] {
                seen[z as usize] = true;
                out.push(z);
            }
        }
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Perm {
        Perm::from_images((0..n as u32).map(|x| (x + 1) % n as u32).collect()).unwrap()
    }

    fn transposition(n: usize, a: u32, b: u32) -> Perm {
        let mut v: Vec<u32> = (0..n as u32).collect();
        v.swap(a as usize, b as usize);
        Perm::from_images(v).unwrap()
    }

    #[test]
    fn composition_is_left_to_right() {
        let a = transposition(3, 0, 1);
        let b = transposition(3, 1, 2);
        // 0 -> 1 -> 2
        assert_eq!(a.then(&b).apply(0), 2);
        assert!(a.then(&a.inverse()).is_identity());
        assert!(Perm::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn symmetric_and_cyclic_orders() {
        for n in 1..8usize {
            let g = PermGroup::new(n, vec![cycle(n), transposition(n, 0, 1.min(n as u32 - 1))]).unwrap();
            let fact: u64 = (1..=n as u64).product();
            assert_eq!(g.order(), BigUint::from(fact), "S_{n}");
        }
        let c = PermGroup::new(7, vec![cycle(7)]).unwrap();
        assert_eq!(c.order(), BigUint::from(7u32));
        assert!(!c.contains(&transposition(7, 0, 1)));
    }

    #[test]
    fn alternating_group() {
        // 3-cycles (0 1 2) and (0 1 2 3 4) for n = 5 generate A_5
        let g = PermGroup::new(5, vec![Perm::from_images(vec![1, 2, 0, 3, 4]).unwrap(), cycle(5)]).unwrap();
        assert_eq!(g.order(), BigUint::from(60u32));
        assert!(g.is_transitive());
    }

    #[test]
    fn wreath_product_order() {
        // S_2 wr S_3 on 6 points: order 2^3 * 3! = 48
        let swap = transposition(6, 0, 1);
        let blocks = Perm::from_images(vec![2, 3, 4, 5, 0, 1]).unwrap();
        let blocks2 = Perm::from_images(vec![2, 3, 0, 1, 4, 5]).unwrap();
        let g = PermGroup::new(6, vec![swap, blocks, blocks2]).unwrap();
        assert_eq!(g.order(), BigUint::from(48u32));
    }

    #[test]
    fn strip_recognises_products() {
        let gens = vec![cycle(9), transposition(9, 2, 5), Perm::from_images(vec![0, 2, 1, 3, 4, 5, 6, 8, 7]).unwrap()];
        let g = PermGroup::new(9, gens.clone()).unwrap();
        let mut p = Perm::identity(9);
        for k in 0..30 {
            p = p.then(&gens[(k * 7 + 3) % gens.len()]);
            assert!(g.contains(&p));
        }
        assert!(gens.iter().all(|s| g.contains(s)));
    }

    #[test]
    fn trivial_group() {
        let g = PermGroup::new(4, vec![Perm::identity(4)]).unwrap();
        assert_eq!(g.order(), BigUint::one());
        assert!(g.base().is_empty());
        assert!(PermGroup::new(3, vec![Perm::identity(4)]).is_err());
    }
}
