//! Finite groups as dense Cayley tables built from permutation generators.
//!
//! Groups stay small here (the searches never leave the small-group
//! range), so every structural query is a table lookup over `u16`
//! element indices. Element 0 is always the identity; the remaining
//! indices follow breadth-first closure order of the generators.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Hard cap on group orders; the classifier never needs more.
pub const MAX_GROUP_ORDER: usize = 2048;

/// A permutation of {0, ..., degree-1}, stored by its image vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation {
    images: Vec<u16>,
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree as u16).collect(),
        }
    }

    pub fn from_images(images: Vec<u16>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &x in &images {
            if (x as usize) >= images.len() || seen[x as usize] {
                return Err(Error::NotAPermutation(format!("image vector {images:?}")));
            }
            seen[x as usize] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation from disjoint cycles over {0, ..., degree-1}.
    pub fn from_cycles(degree: usize, cycles: &[&[u16]]) -> Result<Self> {
        let mut images: Vec<u16> = (0..degree as u16).collect();
        for cycle in cycles {
            for w in 0..cycle.len() {
                let from = cycle[w] as usize;
                let to = cycle[(w + 1) % cycle.len()];
                if from >= degree || (to as usize) >= degree {
                    return Err(Error::NotAPermutation(format!(
                        "cycle point out of range in {cycle:?}"
                    )));
                }
                images[from] = to;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[u16] {
        &self.images
    }

    pub fn apply(&self, point: u16) -> u16 {
        self.images[point as usize]
    }

    /// `(self * other)(x) = self(other(x))`.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        debug_assert_eq!(self.degree(), other.degree());
        Permutation {
            images: other.images.iter().map(|&x| self.apply(x)).collect(),
        }
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0u16; self.images.len()];
        for (i, &x) in self.images.iter().enumerate() {
            images[x as usize] = i as u16;
        }
        Permutation { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &x)| i as u16 == x)
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.images)
    }
}

/// Whether a dedup pass saw the full automorphism group or only the inner
/// automorphisms (budget fallback).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AutLevel {
    Full,
    InnerOnly,
}

/// A finite group with dense multiplication, inverse, and element-order
/// tables. Immutable after construction.
pub struct FiniteGroup {
    order: usize,
    degree: usize,
    mult: Vec<u16>,
    inv: Vec<u16>,
    elem_order: Vec<u32>,
    catalog_id: Option<String>,
    generators: Vec<Permutation>,
    elements: Vec<Permutation>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "FiniteGroup(order={}, id={:?})",
            self.order, self.catalog_id
        )
    }
}

impl FiniteGroup {
    /// Closes the generated permutation group by breadth-first
    /// multiplication and builds the lookup tables. Fails when the closure
    /// exceeds `max_order`.
    pub fn from_permutations(
        gens: &[Permutation],
        degree: usize,
        max_order: usize,
    ) -> Result<Arc<Self>> {
        let max_order = max_order.min(MAX_GROUP_ORDER);
        for g in gens {
            if g.degree() != degree {
                return Err(Error::NotAPermutation(format!(
                    "generator degree {} does not match {degree}",
                    g.degree()
                )));
            }
        }
        let id = Permutation::identity(degree);
        let mut elements = vec![id.clone()];
        let mut index: HashMap<Permutation, u16> = HashMap::new();
        index.insert(id, 0);
        let mut head = 0usize;
        while head < elements.len() {
            let current = elements[head].clone();
            head += 1;
            for g in gens {
                let next = current.compose(g);
                if !index.contains_key(&next) {
                    if elements.len() >= max_order {
                        return Err(Error::OrderLimitExceeded(max_order));
                    }
                    index.insert(next.clone(), elements.len() as u16);
                    elements.push(next);
                }
            }
        }

        let order = elements.len();
        let mut mult = vec![0u16; order * order];
        for a in 0..order {
            for b in 0..order {
                let p = elements[a].compose(&elements[b]);
                mult[a * order + b] = index[&p];
            }
        }
        let mut inv = vec![0u16; order];
        for a in 0..order {
            inv[a] = index[&elements[a].inverse()];
        }
        let mut elem_order = vec![0u32; order];
        for a in 0..order {
            let mut k = 1u32;
            let mut x = a as u16;
            while x != 0 {
                x = mult[x as usize * order + a];
                k += 1;
            }
            elem_order[a] = k;
        }

        Ok(Arc::new(FiniteGroup {
            order,
            degree,
            mult,
            inv,
            elem_order,
            catalog_id: None,
            generators: gens.to_vec(),
            elements,
        }))
    }

    pub fn with_catalog_id(
        gens: &[Permutation],
        degree: usize,
        max_order: usize,
        id: &str,
    ) -> Result<Arc<Self>> {
        let g = FiniteGroup::from_permutations(gens, degree, max_order)?;
        let mut g = Arc::try_unwrap(g).expect("fresh group has one owner");
        g.catalog_id = Some(id.to_string());
        Ok(Arc::new(g))
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn catalog_id(&self) -> Option<&str> {
        self.catalog_id.as_deref()
    }

    /// Stable identifier used in reports: the catalog id when present,
    /// otherwise a structural placeholder.
    pub fn id(&self) -> String {
        self.catalog_id
            .clone()
            .unwrap_or_else(|| format!("order{}", self.order))
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn element(&self, a: u16) -> &Permutation {
        &self.elements[a as usize]
    }

    #[inline]
    pub fn mul(&self, a: u16, b: u16) -> u16 {
        self.mult[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inverse(&self, a: u16) -> u16 {
        self.inv[a as usize]
    }

    #[inline]
    pub fn order_of(&self, a: u16) -> u32 {
        self.elem_order[a as usize]
    }

    pub fn pow(&self, a: u16, k: u64) -> u16 {
        let k = k % self.order_of(a) as u64;
        let mut acc = 0u16;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    /// `g x g^-1`.
    #[inline]
    pub fn conjugate(&self, g: u16, x: u16) -> u16 {
        self.mul(self.mul(g, x), self.inverse(g))
    }

    pub fn elements_of_order(&self, k: u32) -> Vec<u16> {
        (0..self.order as u16)
            .filter(|&a| self.elem_order[a as usize] == k)
            .collect()
    }

    /// Multiset of element orders as sorted (order, count) pairs; a cheap
    /// relabeling-invariant fingerprint.
    pub fn order_statistics(&self) -> Vec<(u32, usize)> {
        let mut counts: HashMap<u32, usize> = HashMap::new();
        for &o in &self.elem_order {
            *counts.entry(o).or_insert(0) += 1;
        }
        let mut stats: Vec<(u32, usize)> = counts.into_iter().collect();
        stats.sort_unstable();
        stats
    }

    pub fn conjugacy_classes(&self) -> Vec<Vec<u16>> {
        let mut seen = vec![false; self.order];
        let mut classes = Vec::new();
        for a in 0..self.order as u16 {
            if seen[a as usize] {
                continue;
            }
            let mut class = Vec::new();
            for g in 0..self.order as u16 {
                let c = self.conjugate(g, a);
                if !seen[c as usize] {
                    seen[c as usize] = true;
                    class.push(c);
                }
            }
            class.sort_unstable();
            classes.push(class);
        }
        classes
    }

    /// Closure of a set of elements under multiplication (and hence
    /// inversion); always contains the identity.
    pub fn subgroup_generated(&self, seed: &[u16]) -> Vec<u16> {
        let mut member = vec![false; self.order];
        member[0] = true;
        let mut list = vec![0u16];
        let mut head = 0;
        let push = |x: u16, member: &mut Vec<bool>, list: &mut Vec<u16>| {
            if !member[x as usize] {
                member[x as usize] = true;
                list.push(x);
            }
        };
        for &s in seed {
            push(s, &mut member, &mut list);
        }
        while head < list.len() {
            let a = list[head];
            head += 1;
            for i in 0..list.len() {
                let b = list[i];
                push(self.mul(a, b), &mut member, &mut list);
                push(self.mul(b, a), &mut member, &mut list);
            }
        }
        list.sort_unstable();
        list
    }

    /// One entry per distinct cyclic subgroup of order >= 2, with the
    /// least element index generating it as the canonical generator.
    pub fn cyclic_subgroups(&self) -> Vec<(u16, u32)> {
        let mut seen: HashMap<Vec<u16>, u16> = HashMap::new();
        for a in 1..self.order as u16 {
            let mut members = Vec::new();
            let mut x = a;
            while x != 0 {
                members.push(x);
                x = self.mul(x, a);
            }
            members.push(0);
            members.sort_unstable();
            seen.entry(members).or_insert(a);
        }
        let mut out: Vec<(u16, u32)> = seen
            .into_iter()
            .map(|(_, gen)| (gen, self.order_of(gen)))
            .collect();
        out.sort_unstable();
        out
    }

    /// A small generating tuple found greedily, preferring high-order
    /// elements so automorphism candidate counts stay low.
    pub fn generating_tuple(&self) -> Vec<u16> {
        if self.order == 1 {
            return Vec::new();
        }
        let mut candidates: Vec<u16> = (1..self.order as u16).collect();
        candidates.sort_by_key(|&a| (std::cmp::Reverse(self.order_of(a)), a));
        let mut gens: Vec<u16> = Vec::new();
        let mut closure = vec![0u16];
        while closure.len() < self.order {
            let next = candidates
                .iter()
                .copied()
                .find(|&a| closure.binary_search(&a).is_err())
                .expect("generators exist while closure is proper");
            gens.push(next);
            closure = self.subgroup_generated(&gens);
        }
        gens
    }

    /// Inner automorphisms as element-index permutations, deduplicated.
    pub fn inner_automorphisms(&self) -> Vec<Vec<u16>> {
        let mut set: Vec<Vec<u16>> = (0..self.order as u16)
            .map(|g| {
                (0..self.order as u16)
                    .map(|x| self.conjugate(g, x))
                    .collect()
            })
            .collect();
        set.sort();
        set.dedup();
        set
    }

    /// The automorphism group, by brute force over images of a small
    /// generating tuple. Candidate images must match the generator orders;
    /// each candidate map is extended along the closure words and checked
    /// to be a bijective homomorphism. When the candidate count exceeds
    /// `budget`, falls back to inner automorphisms only.
    pub fn automorphisms(&self, budget: usize) -> (Vec<Vec<u16>>, AutLevel) {
        let gens = self.generating_tuple();
        if gens.is_empty() {
            return (vec![vec![0u16]], AutLevel::Full);
        }
        let candidates: Vec<Vec<u16>> = gens
            .iter()
            .map(|&g| self.elements_of_order(self.order_of(g)))
            .collect();
        let total: usize = candidates.iter().map(|c| c.len()).try_fold(
            1usize,
            |acc, n| acc.checked_mul(n),
        ).unwrap_or(usize::MAX);
        if total > budget {
            return (self.inner_automorphisms(), AutLevel::InnerOnly);
        }

        // express every element as parent * generator along a BFS tree
        let mut parent: Vec<(u16, usize)> = vec![(0, usize::MAX); self.order];
        let mut bfs = vec![0u16];
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut head = 0;
        while head < bfs.len() {
            let x = bfs[head];
            head += 1;
            for (j, &g) in gens.iter().enumerate() {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = (x, j);
                    bfs.push(y);
                }
            }
        }

        let mut auts: Vec<Vec<u16>> = Vec::new();
        let mut pick = vec![0usize; gens.len()];
        'outer: loop {
            let images: Vec<u16> = pick
                .iter()
                .enumerate()
                .map(|(j, &i)| candidates[j][i])
                .collect();
            if let Some(phi) = self.extend_homomorphism(&gens, &images, &parent, &bfs) {
                auts.push(phi);
            }
            let mut j = 0;
            loop {
                if j == pick.len() {
                    break 'outer;
                }
                pick[j] += 1;
                if pick[j] < candidates[j].len() {
                    break;
                }
                pick[j] = 0;
                j += 1;
            }
        }
        auts.sort();
        auts.dedup();
        (auts, AutLevel::Full)
    }

    fn extend_homomorphism(
        &self,
        gens: &[u16],
        images: &[u16],
        parent: &[(u16, usize)],
        bfs: &[u16],
    ) -> Option<Vec<u16>> {
        let mut phi = vec![0u16; self.order];
        let mut hit = vec![false; self.order];
        hit[0] = true;
        for &x in &bfs[1..] {
            let (p, j) = parent[x as usize];
            let y = self.mul(phi[p as usize], images[j]);
            phi[x as usize] = y;
            if hit[y as usize] {
                return None; // not injective
            }
            hit[y as usize] = true;
        }
        // phi(x * g) = phi(x) * phi(g) for all x and generators g suffices
        for x in 0..self.order as u16 {
            for (j, &g) in gens.iter().enumerate() {
                if phi[self.mul(x, g) as usize] != self.mul(phi[x as usize], images[j]) {
                    return None;
                }
            }
        }
        Some(phi)
    }
}

/// Cyclic group of order n on n points.
pub fn cyclic(n: u64) -> Arc<FiniteGroup> {
    let n = n as usize;
    assert!(n >= 1 && n <= MAX_GROUP_ORDER);
    if n == 1 {
        return FiniteGroup::with_catalog_id(&[], 1, 1, "C1").unwrap();
    }
    let cycle: Vec<u16> = (0..n as u16).collect();
    let g = Permutation::from_cycles(n, &[&cycle]).unwrap();
    FiniteGroup::with_catalog_id(&[g], n, n, &format!("C{n}")).unwrap()
}

/// Direct product of cyclic groups, one disjoint cycle per factor.
pub fn abelian(factors: &[u64]) -> Arc<FiniteGroup> {
    let factors: Vec<u64> = factors.iter().copied().filter(|&f| f > 1).collect();
    if factors.is_empty() {
        return cyclic(1);
    }
    let order: u64 = factors.iter().product();
    assert!((order as usize) <= MAX_GROUP_ORDER);
    let degree: usize = factors.iter().map(|&f| f as usize).sum();
    let mut gens = Vec::new();
    let mut offset = 0u16;
    for &f in &factors {
        let cycle: Vec<u16> = (0..f as u16).map(|i| i + offset).collect();
        gens.push(Permutation::from_cycles(degree, &[&cycle]).unwrap());
        offset += f as u16;
    }
    let id = factors
        .iter()
        .map(|f| format!("C{f}"))
        .collect::<Vec<_>>()
        .join("x");
    FiniteGroup::with_catalog_id(&gens, degree, order as usize, &id).unwrap()
}

/// Dihedral group of order 2n (symmetries of the n-gon), n >= 3.
pub fn dihedral(n: u64) -> Arc<FiniteGroup> {
    assert!(n >= 3 && (2 * n as usize) <= MAX_GROUP_ORDER);
    let deg = n as usize;
    let rot: Vec<u16> = (0..n as u16).collect();
    let r = Permutation::from_cycles(deg, &[&rot]).unwrap();
    let s = Permutation::from_images((0..n as u16).map(|i| (n as u16 - i) % n as u16).collect())
        .unwrap();
    FiniteGroup::with_catalog_id(&[r, s], deg, 2 * deg, &format!("D{n}")).unwrap()
}

/// Symmetric group on d letters, d <= 7.
pub fn symmetric(d: u64) -> Arc<FiniteGroup> {
    assert!((2..=7).contains(&d));
    let deg = d as usize;
    let t = Permutation::from_cycles(deg, &[&[0, 1]]).unwrap();
    let cycle: Vec<u16> = (0..d as u16).collect();
    let c = Permutation::from_cycles(deg, &[&cycle]).unwrap();
    let order: usize = (1..=deg).product();
    FiniteGroup::with_catalog_id(&[t, c], deg, order, &format!("S{d}")).unwrap()
}

/// Alternating group on d letters, 3 <= d <= 7.
pub fn alternating(d: u64) -> Arc<FiniteGroup> {
    assert!((3..=7).contains(&d));
    let deg = d as usize;
    let t = Permutation::from_cycles(deg, &[&[0, 1, 2]]).unwrap();
    let rest: Vec<u16> = if d % 2 == 1 {
        (0..d as u16).collect()
    } else {
        (1..d as u16).collect()
    };
    let c = Permutation::from_cycles(deg, &[&rest]).unwrap();
    let order: usize = (1..=deg).product::<usize>() / 2;
    FiniteGroup::with_catalog_id(&[t, c], deg, order, &format!("A{d}")).unwrap()
}

/// All abelian groups of order n, one per partition of each prime
/// exponent, sorted by id.
pub fn abelian_groups_of_order(n: u64) -> Vec<Arc<FiniteGroup>> {
    if n == 0 || (n as usize) > MAX_GROUP_ORDER {
        return Vec::new();
    }
    if n == 1 {
        return vec![cyclic(1)];
    }
    // factorize and enumerate exponent partitions per prime
    let mut factors: Vec<(u64, u32)> = Vec::new();
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            let mut e = 0;
            while m % p == 0 {
                m /= p;
                e += 1;
            }
            factors.push((p, e));
        }
        p += 1;
    }
    if m > 1 {
        factors.push((m, 1));
    }
    let mut variants: Vec<Vec<u64>> = vec![Vec::new()];
    for (p, e) in factors {
        let parts = partitions(e);
        let mut next = Vec::new();
        for v in &variants {
            for part in &parts {
                let mut w = v.clone();
                for &k in part {
                    w.push(p.pow(k));
                }
                next.push(w);
            }
        }
        variants = next;
    }
    let mut out: Vec<Arc<FiniteGroup>> = variants
        .into_iter()
        .map(|mut fs| {
            fs.sort_unstable_by(|a, b| b.cmp(a));
            abelian(&fs)
        })
        .collect();
    out.sort_by_key(|g| g.id());
    out
}

fn partitions(n: u32) -> Vec<Vec<u32>> {
    fn go(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for k in (1..=n.min(max)).rev() {
            prefix.push(k);
            go(n - k, k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// The built-in groups of a given order: all abelian types, the dihedral
/// group when the order is even, and the symmetric/alternating groups of
/// matching order.
pub fn builtin_groups_of_order(n: u64) -> Vec<Arc<FiniteGroup>> {
    let mut out = abelian_groups_of_order(n);
    if n >= 6 && n % 2 == 0 && (n as usize) <= MAX_GROUP_ORDER {
        out.push(dihedral(n / 2));
    }
    for d in 3..=7u64 {
        let fact: u64 = (1..=d).product();
        if fact == n {
            out.push(symmetric(d));
        }
        if fact / 2 == n && d >= 4 {
            out.push(alternating(d));
        }
    }
    out.sort_by_key(|g| g.id());
    out
}
