//! Spherical generating vectors and their equivalence under braid moves,
//! automorphisms, and factor swap.
//!
//! A generating vector of signature `(0; m_1, ..., m_r)` is a tuple
//! `(v_1, ..., v_r)` of group elements with `order(v_i) = m_i`, product
//! one, and `<v_1, ..., v_r> = G`; it encodes a branched G-cover of the
//! line. Braid moves
//!
//! ```text
//! (..., v_i, v_{i+1}, ...) -> (..., v_i v_{i+1} v_i^-1, v_i, ...)
//! ```
//!
//! and simultaneous automorphisms do not change the cover, so
//! classification counts orbits under them.

use std::collections::HashSet;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::group::{AutLevel, FiniteGroup};
use crate::signature::Signature;

#[derive(Clone)]
pub struct GeneratingVector {
    group: Arc<FiniteGroup>,
    signature: Signature,
    elements: Vec<u16>,
}

impl std::fmt::Debug for GeneratingVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "[{:?} over {}]", self.elements, self.group.id())
    }
}

impl PartialEq for GeneratingVector {
    fn eq(&self, other: &Self) -> bool {
        self.signature == other.signature
            && self.elements == other.elements
            && Arc::ptr_eq(&self.group, &other.group)
    }
}
impl Eq for GeneratingVector {}

impl GeneratingVector {
    /// Validates all three defining conditions.
    pub fn new(group: Arc<FiniteGroup>, signature: Signature, elements: Vec<u16>) -> Result<Self> {
        if signature.g0() != 0 {
            return Err(Error::InvalidGeneratingVector(
                "only spherical vectors (g0 = 0) are supported".into(),
            ));
        }
        if elements.len() != signature.r() {
            return Err(Error::InvalidGeneratingVector(format!(
                "expected {} entries, got {}",
                signature.r(),
                elements.len()
            )));
        }
        for (&v, &m) in elements.iter().zip(signature.periods()) {
            if v as usize >= group.order() {
                return Err(Error::InvalidGeneratingVector(format!(
                    "element index {v} out of range"
                )));
            }
            if group.order_of(v) as u64 != m {
                return Err(Error::InvalidGeneratingVector(format!(
                    "entry {v} has order {}, period says {m}",
                    group.order_of(v)
                )));
            }
        }
        let product = elements.iter().fold(0u16, |acc, &v| group.mul(acc, v));
        if product != 0 {
            return Err(Error::InvalidGeneratingVector(
                "product of entries is not the identity".into(),
            ));
        }
        if group.subgroup_generated(&elements).len() != group.order() {
            return Err(Error::InvalidGeneratingVector(
                "entries do not generate the group".into(),
            ));
        }
        Ok(GeneratingVector {
            group,
            signature,
            elements,
        })
    }

    /// Constructor for tuples that already come out of the search or an
    /// orbit walk. The cheap invariants (orders and product) are still
    /// asserted in debug builds; generation was established upstream.
    pub(crate) fn new_unchecked(
        group: Arc<FiniteGroup>,
        signature: Signature,
        elements: Vec<u16>,
    ) -> Self {
        debug_assert!(elements
            .iter()
            .zip(signature.periods())
            .all(|(&v, &m)| group.order_of(v) as u64 == m));
        debug_assert_eq!(
            elements.iter().fold(0u16, |acc, &v| group.mul(acc, v)),
            0
        );
        GeneratingVector {
            group,
            signature,
            elements,
        }
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn elements(&self) -> &[u16] {
        &self.elements
    }
}

/// The complete list of generating vectors of the given spherical
/// signature.
///
/// The backtracking restricts the first coordinate to conjugacy-class
/// representatives and afterwards re-expands every hit by simultaneous
/// conjugation, which recovers the full list: any vector is conjugate to
/// one whose first entry is a class representative, and conjugation
/// preserves all three defining conditions.
pub fn search_spherical_vectors(
    group: &Arc<FiniteGroup>,
    signature: &Signature,
) -> Vec<GeneratingVector> {
    let (tuples, _) = search_tuples(group, signature, u64::MAX);
    tuples
        .into_iter()
        .map(|elements| GeneratingVector {
            group: Arc::clone(group),
            signature: signature.clone(),
            elements,
        })
        .collect()
}

/// Budgeted variant used by the classifier: the second component reports
/// whether the node budget was exhausted (results are then incomplete).
pub fn search_tuples(
    group: &Arc<FiniteGroup>,
    signature: &Signature,
    node_budget: u64,
) -> (Vec<Vec<u16>>, bool) {
    assert_eq!(signature.g0(), 0, "search requires a spherical signature");
    let periods = signature.periods();
    let r = periods.len();
    if r == 0 {
        return (
            if group.order() == 1 {
                vec![Vec::new()]
            } else {
                Vec::new()
            },
            false,
        );
    }

    // elements by requested order, position by position
    let pools: Vec<Vec<u16>> = periods
        .iter()
        .map(|&m| {
            u32::try_from(m)
                .map(|m| group.elements_of_order(m))
                .unwrap_or_default()
        })
        .collect();
    if pools.iter().any(|p| p.is_empty()) {
        return (Vec::new(), false);
    }

    // first coordinate: one representative per conjugacy class
    let first_pool: Vec<u16> = group
        .conjugacy_classes()
        .iter()
        .map(|class| class[0])
        .filter(|&a| group.order_of(a) as u64 == periods[0])
        .collect();

    let mut found: Vec<Vec<u16>> = Vec::new();
    let mut prefix = vec![0u16; r];
    let mut nodes = 0u64;
    let mut exhausted = false;
    for &v1 in &first_pool {
        prefix[0] = v1;
        backtrack(
            group,
            periods,
            &pools,
            &mut prefix,
            1,
            v1,
            &mut found,
            &mut nodes,
            node_budget,
            &mut exhausted,
        );
    }

    // re-expand over conjugation to recover the complete list
    let mut all: HashSet<Vec<u16>> = HashSet::new();
    for tuple in found {
        for g in 0..group.order() as u16 {
            let conj: Vec<u16> = tuple.iter().map(|&v| group.conjugate(g, v)).collect();
            all.insert(conj);
        }
    }
    let mut all: Vec<Vec<u16>> = all.into_iter().collect();
    all.sort();
    (all, exhausted)
}

#[allow(clippy::too_many_arguments)]
fn backtrack(
    group: &FiniteGroup,
    periods: &[u64],
    pools: &[Vec<u16>],
    prefix: &mut Vec<u16>,
    pos: usize,
    partial: u16,
    found: &mut Vec<Vec<u16>>,
    nodes: &mut u64,
    budget: u64,
    exhausted: &mut bool,
) {
    if *exhausted {
        return;
    }
    *nodes += 1;
    if *nodes > budget {
        *exhausted = true;
        return;
    }
    let r = periods.len();
    if pos == r - 1 {
        // the last entry is forced to the inverse of the partial product
        let last = group.inverse(partial);
        if group.order_of(last) as u64 == periods[r - 1] {
            prefix[r - 1] = last;
            if group.subgroup_generated(prefix).len() == group.order() {
                found.push(prefix.clone());
            }
        }
        return;
    }
    for &v in &pools[pos] {
        prefix[pos] = v;
        backtrack(
            group,
            periods,
            pools,
            prefix,
            pos + 1,
            group.mul(partial, v),
            found,
            nodes,
            budget,
            exhausted,
        );
    }
}

/// One braid move at position i, and its inverse.
pub fn braid_move(group: &FiniteGroup, v: &[u16], i: usize) -> Vec<u16> {
    let mut w = v.to_vec();
    w[i] = group.mul(group.mul(v[i], v[i + 1]), group.inverse(v[i]));
    w[i + 1] = v[i];
    w
}

pub fn braid_move_inverse(group: &FiniteGroup, v: &[u16], i: usize) -> Vec<u16> {
    let mut w = v.to_vec();
    w[i] = v[i + 1];
    w[i + 1] = group.mul(group.mul(group.inverse(v[i + 1]), v[i]), v[i + 1]);
    w
}

/// Result of a dedup pass: canonical representatives plus the level of
/// automorphisms that was actually available.
pub struct ReducedPairs {
    pub pairs: Vec<(GeneratingVector, GeneratingVector)>,
    pub level: AutLevel,
}

/// Partitions vector pairs into orbits under braid moves on each factor,
/// simultaneous automorphisms (full if `use_full_aut` and the budget
/// allows, otherwise inner), and the factor swap when both signatures
/// coincide. Keeps one lexicographically least period-sorted
/// representative per orbit.
pub fn hurwitz_reduce(
    pairs: &[(GeneratingVector, GeneratingVector)],
    use_full_aut: bool,
    aut_budget: usize,
) -> ReducedPairs {
    let Some((first, _)) = pairs.first() else {
        return ReducedPairs {
            pairs: Vec::new(),
            level: AutLevel::Full,
        };
    };
    let group = Arc::clone(first.group());
    let (auts, level) = if use_full_aut {
        group.automorphisms(aut_budget)
    } else {
        (group.inner_automorphisms(), AutLevel::InnerOnly)
    };
    // orbits only need a generating set of the automorphism group
    let auts = generating_maps(&auts);

    let mut remaining: HashSet<(Vec<u16>, Vec<u16>)> = pairs
        .iter()
        .map(|(a, b)| (a.elements().to_vec(), b.elements().to_vec()))
        .collect();
    let mut seeds: Vec<(Vec<u16>, Vec<u16>)> = remaining.iter().cloned().collect();
    seeds.sort();

    let mut reps = Vec::new();
    for seed in seeds {
        if !remaining.contains(&seed) {
            continue;
        }
        let (s1, s2) = (first.signature().clone(), pairs[0].1.signature().clone());
        let swap_allowed = s1 == s2;
        let orbit = braid_orbit(&group, &auts, swap_allowed, &seed);
        let mut canonical: Option<(Vec<u16>, Vec<u16>)> = None;
        for member in &orbit {
            remaining.remove(member);
            if is_period_sorted(&group, &member.0) && is_period_sorted(&group, &member.1) {
                if canonical.as_ref().map_or(true, |c| member < c) {
                    canonical = Some(member.clone());
                }
            }
        }
        let (e1, e2) = canonical.expect("orbit contains its period-sorted seed");
        let v1 = GeneratingVector::new(Arc::clone(&group), s1, e1)
            .expect("orbit members remain valid vectors");
        let v2 = GeneratingVector::new(Arc::clone(&group), s2, e2)
            .expect("orbit members remain valid vectors");
        reps.push((v1, v2));
    }
    reps.sort_by(|a, b| {
        (a.0.elements(), a.1.elements()).cmp(&(b.0.elements(), b.1.elements()))
    });
    ReducedPairs { pairs: reps, level }
}

fn is_period_sorted(group: &FiniteGroup, v: &[u16]) -> bool {
    v.windows(2)
        .all(|w| group.order_of(w[0]) <= group.order_of(w[1]))
}

fn braid_orbit(
    group: &FiniteGroup,
    auts: &[Vec<u16>],
    swap_allowed: bool,
    seed: &(Vec<u16>, Vec<u16>),
) -> HashSet<(Vec<u16>, Vec<u16>)> {
    let mut orbit: HashSet<(Vec<u16>, Vec<u16>)> = HashSet::new();
    let mut queue = vec![seed.clone()];
    orbit.insert(seed.clone());
    while let Some(state) = queue.pop() {
        let push = |next: (Vec<u16>, Vec<u16>), orbit: &mut HashSet<_>, queue: &mut Vec<_>| {
            if orbit.insert(next.clone()) {
                debug_assert_eq!(
                    product(group, &next.0),
                    0,
                    "braid/automorphism moves must preserve the product"
                );
                queue.push(next);
            }
        };
        let (ref a, ref b) = state;
        for i in 0..a.len().saturating_sub(1) {
            push((braid_move(group, a, i), b.clone()), &mut orbit, &mut queue);
            push(
                (braid_move_inverse(group, a, i), b.clone()),
                &mut orbit,
                &mut queue,
            );
        }
        for i in 0..b.len().saturating_sub(1) {
            push((a.clone(), braid_move(group, b, i)), &mut orbit, &mut queue);
            push(
                (a.clone(), braid_move_inverse(group, b, i)),
                &mut orbit,
                &mut queue,
            );
        }
        for phi in auts {
            let fa: Vec<u16> = a.iter().map(|&x| phi[x as usize]).collect();
            let fb: Vec<u16> = b.iter().map(|&x| phi[x as usize]).collect();
            push((fa, fb), &mut orbit, &mut queue);
        }
        if swap_allowed {
            push((b.clone(), a.clone()), &mut orbit, &mut queue);
        }
    }
    orbit
}

fn product(group: &FiniteGroup, v: &[u16]) -> u16 {
    v.iter().fold(0u16, |acc, &x| group.mul(acc, x))
}

/// Greedily extracts a generating subset of a closed set of index maps:
/// keep a map only when it is not already generated by the kept ones.
fn generating_maps(maps: &[Vec<u16>]) -> Vec<Vec<u16>> {
    let Some(first) = maps.first() else {
        return Vec::new();
    };
    let n = first.len();
    let identity: Vec<u16> = (0..n as u16).collect();
    let mut closure: HashSet<Vec<u16>> = HashSet::new();
    closure.insert(identity);
    let mut gens: Vec<Vec<u16>> = Vec::new();
    for m in maps {
        if closure.contains(m) {
            continue;
        }
        gens.push(m.clone());
        // regrow the closure under composition with the new generator
        let mut queue: Vec<Vec<u16>> = closure.iter().cloned().collect();
        closure.insert(m.clone());
        queue.push(m.clone());
        while let Some(a) = queue.pop() {
            for g in &gens {
                let c: Vec<u16> = a.iter().map(|&x| g[x as usize]).collect();
                if closure.insert(c.clone()) {
                    queue.push(c);
                }
            }
        }
        if closure.len() == maps.len() {
            break;
        }
    }
    gens
}
