//! Product-quotient surfaces: a pair of generating vectors over one group,
//! the basket of singularities of the quotient model, the numerical
//! invariants, and the dual surface.
//!
//! The key formulas, all exact:
//!
//! ```text
//! K^2  = 8*chi - 2*gamma - l          chi = (g1-1)(g2-1)/|G| + (mu - 2*gamma)/4
//! e    = 4*chi + 2*gamma + l          tau = -2*gamma - l
//! xi   = 4*chi + 2*gamma - mu         alpha_i = xi / (2*Theta_i)
//! h2X  = 2*(gamma + 2*p_g + 1)        K^2 + e = 12*chi
//! ```

use std::sync::Arc;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use crate::basket::Basket;
use crate::error::{Error, Result};
use crate::genvec::GeneratingVector;
use crate::group::FiniteGroup;
use crate::rat::{as_i64, as_u64, rat, rat_string, rat_u64, Rat};
use crate::signature::Signature;
use crate::singularity::SingularityType;

/// The numerical core of a surface: everything downstream diagnostics
/// need, without the group or the vectors. Table rows and serialized
/// records rebuild surfaces at this level.
#[derive(Clone, Debug)]
pub struct SurfaceNumerics {
    pub basket: Basket,
    pub t1: Signature,
    pub t2: Signature,
    pub order: u64,
}

impl SurfaceNumerics {
    pub fn theta1(&self) -> Rat {
        self.t1.theta()
    }

    pub fn theta2(&self) -> Rat {
        self.t2.theta()
    }

    /// `chi = (g1-1)(g2-1)/|G| + (mu - 2*gamma)/4`.
    pub fn chi(&self) -> Rat {
        let inv = self.basket.invariants();
        let genus_part =
            rat_u64(self.order) * self.theta1() * self.theta2() / rat_u64(4);
        genus_part + (inv.mu - rat_u64(2) * inv.gamma) / rat_u64(4)
    }

    pub fn xi(&self) -> Rat {
        let inv = self.basket.invariants();
        rat_u64(4) * self.chi() + rat_u64(2) * inv.gamma - inv.mu
    }

    /// `p_g + gamma`, which controls whether {A_i, F_j} spans H^2.
    pub fn pg_plus_gamma(&self) -> Rat {
        let q = self.t1.g0() as u64 + self.t2.g0() as u64;
        let pg = self.chi() - rat_u64(1) + rat_u64(q);
        pg + self.basket.invariants().gamma
    }
}

/// All numerical invariants of a product-quotient surface. `q` is the sum
/// of the two quotient-curve genera (for the curve genera themselves see
/// `g1`, `g2`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceInvariants {
    pub g1: u64,
    pub g2: u64,
    pub q: u64,
    pub chi: Rat,
    pub pg: i64,
    pub k2: Rat,
    pub e_top: Rat,
    pub tau: Rat,
    pub xi: Rat,
    pub alpha1: u64,
    pub alpha2: u64,
    pub h2x: i64,
}

/// A product-quotient surface, assembled from a pair of generating
/// vectors; the basket is computed once at construction and never
/// recomputed.
#[derive(Clone, Debug)]
pub struct ProductQuotientSurface {
    group: Arc<FiniteGroup>,
    v1: GeneratingVector,
    v2: GeneratingVector,
    basket: Basket,
    invariants: SurfaceInvariants,
}

impl ProductQuotientSurface {
    /// Builds the surface and runs every numerical cross-check. A failure
    /// here means an upstream bug, reported as `InconsistentSurface`.
    pub fn new(v1: GeneratingVector, v2: GeneratingVector) -> Result<Self> {
        if !Arc::ptr_eq(v1.group(), v2.group()) {
            return Err(Error::InconsistentSurface(
                "vectors over different groups".into(),
            ));
        }
        let group = Arc::clone(v1.group());
        let basket = compute_basket(&group, v1.elements(), v2.elements());
        let invariants = surface_invariants(&group, v1.signature(), v2.signature(), &basket)?;

        // each singularity multiplicity must divide a period on both sides
        for (t, _) in basket.entries() {
            for s in [v1.signature(), v2.signature()] {
                if !s.periods().iter().any(|&m| m % t.n() == 0) {
                    return Err(Error::InconsistentSurface(format!(
                        "multiplicity {} divides no period of {s}",
                        t.n()
                    )));
                }
            }
        }
        if basket.admissible().is_none() {
            return Err(Error::InconsistentSurface(format!(
                "computed basket {basket} is not admissible"
            )));
        }

        Ok(ProductQuotientSurface {
            group,
            v1,
            v2,
            basket,
            invariants,
        })
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn v1(&self) -> &GeneratingVector {
        &self.v1
    }

    pub fn v2(&self) -> &GeneratingVector {
        &self.v2
    }

    pub fn basket(&self) -> &Basket {
        &self.basket
    }

    pub fn invariants(&self) -> &SurfaceInvariants {
        &self.invariants
    }

    pub fn numerics(&self) -> SurfaceNumerics {
        SurfaceNumerics {
            basket: self.basket.clone(),
            t1: self.v1.signature().clone(),
            t2: self.v2.signature().clone(),
            order: self.group.order() as u64,
        }
    }

    /// The dual surface: the second vector is reversed and inverted
    /// entrywise (then brought back to sorted period order by braid
    /// moves, which stay inside the Hurwitz class). Only defined for
    /// regular surfaces.
    ///
    /// The construction mirrors the basket entrywise, negates gamma,
    /// preserves mu and xi, and raises p_g by gamma; all four facts are
    /// asserted here.
    pub fn dual(&self) -> Result<Self> {
        if self.invariants.q != 0 {
            return Err(Error::NotRegular(self.invariants.q));
        }
        let g = &self.group;
        let mut reversed: Vec<u16> = self
            .v2
            .elements()
            .iter()
            .rev()
            .map(|&x| g.inverse(x))
            .collect();
        braid_sort(g, &mut reversed);
        let v2 = GeneratingVector::new(
            Arc::clone(g),
            self.v2.signature().clone(),
            reversed,
        )?;
        let dual = ProductQuotientSurface::new(self.v1.clone(), v2)?;

        let (a, b) = (&self.invariants, &dual.invariants);
        let inv = self.basket.invariants();
        let dinv = dual.basket.invariants();
        assert_eq!(dual.basket, self.basket.mirror(), "dual basket must mirror");
        assert_eq!(dinv.gamma, -inv.gamma.clone(), "gamma must negate");
        assert_eq!(dinv.mu, inv.mu, "mu must be preserved");
        assert_eq!(b.xi, a.xi, "xi must be preserved");
        assert_eq!(
            rat(b.pg, 1),
            rat(a.pg, 1) + &inv.gamma,
            "p_g must shift by gamma"
        );
        Ok(dual)
    }
}

/// Sorts a product-one tuple into nondecreasing element order using braid
/// moves only, so the Hurwitz class is unchanged.
fn braid_sort(group: &FiniteGroup, v: &mut Vec<u16>) {
    let n = v.len();
    for _ in 0..n {
        let mut swapped = false;
        for i in 0..n.saturating_sub(1) {
            if group.order_of(v[i]) > group.order_of(v[i + 1]) {
                let moved = crate::genvec::braid_move(group, v, i);
                *v = moved;
                swapped = true;
            }
        }
        if !swapped {
            break;
        }
    }
}

/// The basket of the quotient model, from stabilizer double cosets.
///
/// For branch entries `a = v1[i]` (period m) and `b = v2[j]` (period n_j),
/// the singular points over that branch pair correspond to the double
/// cosets `<a> g <b>` whose stabilizer `H = <a> ∩ g<b>g^-1` is nontrivial.
/// With `|H| = n`, the canonical rotation on the first factor is
/// `h = a^(m/n)`; writing `h = (g b g^-1)^beta` gives the type
/// `q = beta * n / n_j (mod n)`. The convention that a vector entry acts
/// locally by `e^(2*pi*i/m)` fixes the sign of every basket.
pub fn compute_basket(group: &FiniteGroup, v1: &[u16], v2: &[u16]) -> Basket {
    let order = group.order();
    let mut basket = Basket::new();
    for &a in v1 {
        let m1 = group.order_of(a) as u64;
        let a_powers = cyclic_members(group, a);
        for &b in v2 {
            let m2 = group.order_of(b) as u64;
            let b_powers = cyclic_members(group, b);
            let mut seen = vec![false; order];
            for g in 0..order as u16 {
                if seen[g as usize] {
                    continue;
                }
                // mark the double coset <a> g <b>
                for &ap in &a_powers {
                    let left = group.mul(ap, g);
                    for &bp in &b_powers {
                        seen[group.mul(left, bp) as usize] = true;
                    }
                }

                // H = <a> ∩ g<b>g^-1, cyclic of some order n | m1
                let conj_b = group.conjugate(g, b);
                let conj_members = {
                    let mut m = cyclic_members(group, conj_b);
                    m.sort_unstable();
                    m
                };
                let n = a_powers
                    .iter()
                    .filter(|x| conj_members.binary_search(x).is_ok())
                    .count() as u64;
                if n <= 1 {
                    continue;
                }
                let h = group.pow(a, m1 / n);
                debug_assert!(conj_members.binary_search(&h).is_ok());
                // discrete log by direct scan over <g b g^-1>
                let mut beta = 0u64;
                let mut x = 0u16;
                while x != h {
                    x = group.mul(x, conj_b);
                    beta += 1;
                }
                let q = (beta * n / m2) % n;
                basket.insert(
                    SingularityType::new(q, n).expect("stabilizer type is valid"),
                    1,
                );
            }
        }
    }
    basket
}

fn cyclic_members(group: &FiniteGroup, a: u16) -> Vec<u16> {
    let mut members = vec![0u16];
    let mut x = a;
    while x != 0 {
        members.push(x);
        x = group.mul(x, a);
    }
    members
}

/// Memoized basket computation for the classifier's inner loop: the
/// contribution of a branch pair depends only on the two elements, so
/// one double-coset walk per element pair serves every vector pair.
pub struct PairBasketCache {
    group: Arc<FiniteGroup>,
    memo: std::collections::HashMap<(u16, u16), Vec<(u64, u64)>>,
}

impl PairBasketCache {
    pub fn new(group: Arc<FiniteGroup>) -> Self {
        PairBasketCache {
            group,
            memo: std::collections::HashMap::new(),
        }
    }

    fn contribution(&mut self, a: u16, b: u16) -> Vec<(u64, u64)> {
        let group = Arc::clone(&self.group);
        self.memo
            .entry((a, b))
            .or_insert_with(|| {
                let mut types = Vec::new();
                let single = compute_basket(&group, &[a], &[b]);
                for (t, m) in single.entries() {
                    for _ in 0..m {
                        types.push((t.q(), t.n()));
                    }
                }
                types
            })
            .clone()
    }

    pub fn basket(&mut self, v1: &[u16], v2: &[u16]) -> Basket {
        let mut basket = Basket::new();
        for &a in v1 {
            for &b in v2 {
                for (q, n) in self.contribution(a, b) {
                    basket.insert(SingularityType::new(q, n).unwrap(), 1);
                }
            }
        }
        basket
    }
}

/// Assembles all invariants and verifies the cross-checks:
/// chi a positive integer, both genera integers at least 2, alpha_i
/// positive integers, `gamma + p_g` a nonnegative integer, and the
/// Noether identity `K^2 + e = 12*chi`.
pub fn surface_invariants(
    group: &FiniteGroup,
    t1: &Signature,
    t2: &Signature,
    basket: &Basket,
) -> Result<SurfaceInvariants> {
    let order = group.order() as u64;
    let inv = basket.invariants();
    let theta1 = t1.theta();
    let theta2 = t2.theta();

    let g1 = t1
        .curve_genus(order)
        .map_err(|e| Error::InconsistentSurface(format!("genus of first curve: {e}")))?;
    let g2 = t2
        .curve_genus(order)
        .map_err(|e| Error::InconsistentSurface(format!("genus of second curve: {e}")))?;

    let chi = rat_u64((g1 - 1) * (g2 - 1)) / rat_u64(order)
        + (&inv.mu - rat_u64(2) * &inv.gamma) / rat_u64(4);
    let Some(chi_int) = as_i64(&chi).filter(|&c| c > 0) else {
        return Err(Error::InconsistentSurface(format!(
            "chi = {chi} is not a positive integer"
        )));
    };
    let q = t1.g0() as u64 + t2.g0() as u64;
    let pg = chi_int - 1 + q as i64;

    let k2 = rat_u64(8) * &chi - rat_u64(2) * &inv.gamma - rat_u64(inv.l);
    let e_top = rat_u64(4) * &chi + rat_u64(2) * &inv.gamma + rat_u64(inv.l);
    let tau = -(rat_u64(2) * &inv.gamma + rat_u64(inv.l));
    let xi = rat_u64(4) * &chi + rat_u64(2) * &inv.gamma - &inv.mu;

    let alpha1 = as_u64(&(&xi / (rat_u64(2) * &theta1)))
        .filter(|&a| a > 0)
        .ok_or_else(|| Error::InconsistentSurface("alpha_1 not a positive integer".into()))?;
    let alpha2 = as_u64(&(&xi / (rat_u64(2) * &theta2)))
        .filter(|&a| a > 0)
        .ok_or_else(|| Error::InconsistentSurface("alpha_2 not a positive integer".into()))?;
    if alpha1 != g2 - 1 || alpha2 != g1 - 1 {
        return Err(Error::InconsistentSurface(
            "alpha_i must equal the opposite genus minus one".into(),
        ));
    }

    let gamma_plus_pg = &inv.gamma + rat(pg, 1);
    if !gamma_plus_pg.is_integer() || gamma_plus_pg.is_negative() {
        return Err(Error::InconsistentSurface(format!(
            "gamma + p_g = {gamma_plus_pg} must be a nonnegative integer"
        )));
    }
    let h2x = 2 * (as_i64(&inv.gamma).ok_or_else(|| {
        Error::InconsistentSurface("gamma must be an integer for a valid surface".into())
    })? + 2 * pg
        + 1);

    if &k2 + &e_top != rat_u64(12) * &chi {
        return Err(Error::InconsistentSurface(
            "Noether identity K^2 + e = 12*chi failed".into(),
        ));
    }

    Ok(SurfaceInvariants {
        g1,
        g2,
        q,
        chi,
        pg,
        k2,
        e_top,
        tau,
        xi,
        alpha1,
        alpha2,
        h2x,
    })
}

/// Versioned JSON document for one surface.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceRecord {
    pub schema: String,
    pub group_id: String,
    pub order: u64,
    pub t1: Signature,
    pub t2: Signature,
    pub v1: Vec<u16>,
    pub v2: Vec<u16>,
    pub basket: Basket,
    #[serde(rename = "K2", with = "rat_string")]
    pub k2: Rat,
    #[serde(with = "rat_string")]
    pub chi: Rat,
    pub pg: i64,
    pub q: u64,
    #[serde(with = "rat_string")]
    pub gamma: Rat,
    pub l: u64,
    #[serde(with = "rat_string")]
    pub mu: Rat,
    #[serde(with = "rat_string")]
    pub xi: Rat,
    #[serde(rename = "I")]
    pub index: u64,
    #[serde(with = "rat_string")]
    pub tau: Rat,
    #[serde(with = "rat_string")]
    pub e_top: Rat,
    pub dedup: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimality: Option<crate::minimality::MinimalityReport>,
}

pub const SCHEMA_VERSION: &str = "pqc-1";

impl SurfaceRecord {
    pub fn from_surface(s: &ProductQuotientSurface, dedup: &str) -> Self {
        let inv = s.invariants();
        let binv = s.basket().invariants();
        SurfaceRecord {
            schema: SCHEMA_VERSION.to_string(),
            group_id: s.group().id(),
            order: s.group().order() as u64,
            t1: s.v1().signature().clone(),
            t2: s.v2().signature().clone(),
            v1: s.v1().elements().to_vec(),
            v2: s.v2().elements().to_vec(),
            basket: s.basket().clone(),
            k2: inv.k2.clone(),
            chi: inv.chi.clone(),
            pg: inv.pg,
            q: inv.q,
            gamma: binv.gamma,
            l: binv.l,
            mu: binv.mu,
            xi: inv.xi.clone(),
            index: binv.index,
            tau: inv.tau.clone(),
            e_top: inv.e_top.clone(),
            dedup: dedup.to_string(),
            minimality: None,
        }
    }

    pub fn numerics(&self) -> SurfaceNumerics {
        SurfaceNumerics {
            basket: self.basket.clone(),
            t1: self.t1.clone(),
            t2: self.t2.clone(),
            order: self.order,
        }
    }

    /// Numeric dualization of a record: mirrors the basket and recomputes
    /// every invariant; the element entries for the second vector are
    /// reproduced only when `group` is supplied.
    pub fn dual(&self, group: Option<&Arc<FiniteGroup>>) -> Result<SurfaceRecord> {
        if self.q != 0 {
            return Err(Error::NotRegular(self.q));
        }
        let basket = self.basket.mirror();
        let inv = basket.invariants();
        let chi = &self.chi + &self.gamma;
        let k2 = rat_u64(8) * &chi - rat_u64(2) * &inv.gamma - rat_u64(inv.l);
        let e_top = rat_u64(4) * &chi + rat_u64(2) * &inv.gamma + rat_u64(inv.l);
        let tau = -(rat_u64(2) * &inv.gamma + rat_u64(inv.l));
        let xi = rat_u64(4) * &chi + rat_u64(2) * &inv.gamma - &inv.mu;
        let pg = as_i64(&(&self.chi + &self.gamma)).ok_or_else(|| {
            Error::InconsistentSurface("dual chi is not an integer".into())
        })? - 1;
        let v2 = match group {
            Some(g) => {
                let mut rev: Vec<u16> =
                    self.v2.iter().rev().map(|&x| g.inverse(x)).collect();
                braid_sort(g, &mut rev);
                rev
            }
            None => Vec::new(),
        };
        Ok(SurfaceRecord {
            schema: SCHEMA_VERSION.to_string(),
            group_id: self.group_id.clone(),
            order: self.order,
            t1: self.t1.clone(),
            t2: self.t2.clone(),
            v1: self.v1.clone(),
            v2,
            basket,
            k2,
            chi,
            pg,
            q: 0,
            gamma: inv.gamma,
            l: inv.l,
            mu: inv.mu,
            xi,
            index: inv.index,
            tau,
            e_top,
            dedup: self.dedup.clone(),
            minimality: None,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{abelian, cyclic};
    use crate::rat::rat_int;

    fn vector(group: &Arc<FiniteGroup>, periods: &[u64], elements: &[u16]) -> GeneratingVector {
        GeneratingVector::new(
            Arc::clone(group),
            Signature::spherical(periods).unwrap(),
            elements.to_vec(),
        )
        .unwrap()
    }

    #[test]
    fn cyclic5_basket() {
        let c5 = cyclic(5);
        let v = vector(&c5, &[5, 5, 5], &[1, 1, 3]);
        let basket = compute_basket(&c5, v.elements(), v.elements());
        assert_eq!(basket.to_string(), "5x1/5,4x2/5");
    }

    #[test]
    fn elementary_abelian_basket() {
        let g = abelian(&[5, 5]);
        // closure order puts the two factor generators at indices 1 and 2
        let (e10, e01) = (1u16, 2u16);
        assert_eq!(g.element(e10), &g.generators()[0]);
        assert_eq!(g.element(e01), &g.generators()[1]);
        let idx = |a: u16, b: u16| -> u16 {
            let mut x = 0u16;
            for _ in 0..a {
                x = g.mul(x, e10);
            }
            for _ in 0..b {
                x = g.mul(x, e01);
            }
            x
        };
        let v1 = vec![idx(1, 0), idx(0, 1), idx(4, 4)];
        let v2 = vec![idx(1, 0), idx(2, 1), idx(2, 4)];
        let basket = compute_basket(&g, &v1, &v2);
        assert_eq!(basket.to_string(), "5x1/5");

        let s = ProductQuotientSurface::new(
            vector(&g, &[5, 5, 5], &v1),
            vector(&g, &[5, 5, 5], &v2),
        )
        .unwrap();
        let inv = s.invariants();
        assert_eq!(inv.chi, rat_int(1));
        assert_eq!(inv.pg, 0);
        assert_eq!(inv.q, 0);
        assert_eq!(inv.k2, rat_int(-1));
        assert_eq!(inv.tau, rat_int(-9));
        assert_eq!(inv.e_top, rat_int(13));
        assert_eq!(inv.h2x, 6);
        assert_eq!(s.basket().invariants().gamma, rat_int(2));
    }

    #[test]
    fn cyclic2_six_nodes() {
        let c2 = cyclic(2);
        let v = vector(&c2, &[2; 6], &[1; 6]);
        let basket = compute_basket(&c2, v.elements(), v.elements());
        assert_eq!(basket.to_string(), "36x1/2");

        let s = ProductQuotientSurface::new(v.clone(), v).unwrap();
        let inv = s.invariants();
        assert_eq!(inv.chi, rat_int(5));
        assert_eq!(inv.q, 0);
        assert_eq!(inv.pg, 4);
        assert_eq!(inv.k2, rat_int(4));
        assert_eq!(inv.e_top, rat_int(56));
    }

    #[test]
    fn cyclic5_surface_invariants() {
        let c5 = cyclic(5);
        let v = vector(&c5, &[5, 5, 5], &[1, 1, 3]);
        let s = ProductQuotientSurface::new(v.clone(), v).unwrap();
        let inv = s.invariants();
        assert_eq!(inv.chi, rat_int(1));
        assert_eq!(inv.k2, rat_int(-9));
        assert_eq!(inv.xi, rat(4, 5));
        assert_eq!(inv.alpha1, 1);
        assert_eq!(inv.alpha2, 1);
        assert_eq!(inv.g1, 2);
        assert_eq!(inv.g2, 2);
    }

    #[test]
    fn dual_of_cyclic5_surface() {
        let c5 = cyclic(5);
        let v = vector(&c5, &[5, 5, 5], &[1, 1, 3]);
        let s = ProductQuotientSurface::new(v.clone(), v).unwrap();
        let d = s.dual().unwrap();
        assert_eq!(d.basket(), &s.basket().mirror());
        assert_eq!(d.invariants().pg, s.invariants().pg + 2);
        assert_eq!(d.invariants().xi, s.invariants().xi);
        // the double dual restores every invariant
        let dd = d.dual().unwrap();
        assert_eq!(dd.basket(), s.basket());
        assert_eq!(dd.invariants(), s.invariants());
    }

    #[test]
    fn dual_basket_is_entrywise_mirror() {
        let c5 = cyclic(5);
        for v1 in crate::genvec::search_spherical_vectors(&c5, &Signature::spherical(&[5, 5, 5]).unwrap()) {
            for v2 in crate::genvec::search_spherical_vectors(&c5, &Signature::spherical(&[5, 5, 5]).unwrap()) {
                let b = compute_basket(&c5, v1.elements(), v2.elements());
                let rev: Vec<u16> = v2.elements().iter().rev().map(|&x| c5.inverse(x)).collect();
                let bd = compute_basket(&c5, v1.elements(), &rev);
                assert_eq!(bd, b.mirror());
            }
        }
    }

    #[test]
    fn record_round_trip() {
        let c5 = cyclic(5);
        let v = vector(&c5, &[5, 5, 5], &[1, 1, 3]);
        let s = ProductQuotientSurface::new(v.clone(), v).unwrap();
        let rec = SurfaceRecord::from_surface(&s, "full");
        let json = serde_json::to_string_pretty(&rec).unwrap();
        let back: SurfaceRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(back.k2, rat_int(-9));
        assert_eq!(back.basket, *s.basket());
        assert_eq!(back.schema, SCHEMA_VERSION);

        let dual = rec.dual(Some(&c5)).unwrap();
        assert_eq!(dual.pg, 2);
        assert_eq!(dual.gamma, rat_int(-2));
        assert_eq!(dual.basket, s.basket().mirror());
        assert_eq!(dual.xi, rec.xi);
        assert_eq!(dual.mu, rec.mu);
    }
}
