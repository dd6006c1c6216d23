//! Shared test support: an independent brute-force basket oracle.
//!
//! Instead of double cosets, this oracle enumerates all coset pairs
//! `(c<a>, d<b>)`, intersects the explicitly conjugated stabilizers, and
//! counts orbits of the diagonal G-action; one orbit is one singular
//! point. It exercises none of the library's double-coset walk.

use prodquot::basket::Basket;
use prodquot::group::FiniteGroup;
use prodquot::singularity::SingularityType;

/// Left cosets of the cyclic subgroup generated by `a`: returns
/// (coset index per element, representative per coset).
fn left_cosets(group: &FiniteGroup, a: u16) -> (Vec<usize>, Vec<u16>) {
    let order = group.order();
    let mut coset = vec![usize::MAX; order];
    let mut reps = Vec::new();
    for c in 0..order as u16 {
        if coset[c as usize] != usize::MAX {
            continue;
        }
        let idx = reps.len();
        reps.push(c);
        // c * a^k
        let mut x = c;
        loop {
            coset[x as usize] = idx;
            x = group.mul(x, a);
            if x == c {
                break;
            }
        }
    }
    (coset, reps)
}

fn cyclic_set(group: &FiniteGroup, a: u16) -> Vec<bool> {
    let mut member = vec![false; group.order()];
    let mut x = 0u16;
    loop {
        member[x as usize] = true;
        x = group.mul(x, a);
        if x == 0 {
            break;
        }
    }
    member
}

pub fn oracle_basket(group: &FiniteGroup, v1: &[u16], v2: &[u16]) -> Basket {
    let order = group.order();
    let mut basket = Basket::new();
    for &a in v1 {
        let m1 = group.order_of(a) as u64;
        let (coset_a, reps_a) = left_cosets(group, a);
        for &b in v2 {
            let m2 = group.order_of(b) as u64;
            let (coset_b, reps_b) = left_cosets(group, b);

            let mut seen = vec![vec![false; reps_b.len()]; reps_a.len()];
            for i in 0..reps_a.len() {
                for j in 0..reps_b.len() {
                    if seen[i][j] {
                        continue;
                    }
                    // orbit of the pair under the diagonal action
                    let (ci, dj) = (reps_a[i], reps_b[j]);
                    for g in 0..order as u16 {
                        let oi = coset_a[group.mul(g, ci) as usize];
                        let oj = coset_b[group.mul(g, dj) as usize];
                        seen[oi][oj] = true;
                    }

                    // stabilizer of the representative point
                    let st1 = {
                        let conj_a = group.conjugate(ci, a);
                        cyclic_set(group, conj_a)
                    };
                    let conj_b = group.conjugate(dj, b);
                    let st2 = cyclic_set(group, conj_b);
                    let n = (0..order)
                        .filter(|&x| st1[x] && st2[x])
                        .count() as u64;
                    if n <= 1 {
                        continue;
                    }

                    // canonical rotation on the first factor and its
                    // discrete log in the second stabilizer
                    let h = group.pow(group.conjugate(ci, a), m1 / n);
                    let mut beta = 0u64;
                    let mut x = 0u16;
                    while x != h {
                        x = group.mul(x, conj_b);
                        beta += 1;
                    }
                    let q = (beta * n / m2) % n;
                    basket.insert(SingularityType::new(q, n).unwrap(), 1);
                }
            }
        }
    }
    basket
}
