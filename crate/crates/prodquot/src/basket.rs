//! Baskets of singularities: multisets of types with aggregated invariants,
//! the fibre-partition admissibility filter, and bounded enumeration.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{floor_i64, rat, rat_u64, Rat};
use crate::singularity::SingularityType;

/// A multiset of singularity types, keyed by canonical type. The empty
/// basket is allowed (free actions, surfaces isogenous to a product).
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Basket {
    entries: BTreeMap<SingularityType, u64>,
}

/// Aggregated invariants of a basket: multiplicity-weighted sums of the
/// per-type numbers, the lcm of the local indices, and the legacy
/// (e, k, B) triple computed as
///
/// ```text
/// e = l + mu,   k = 6*gamma + l - 2*mu,   B = 3*(2*gamma + l).
/// ```
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasketInvariants {
    pub l: u64,
    pub gamma: Rat,
    pub mu: Rat,
    /// lcm of the local indices; 1 for the empty basket.
    pub index: u64,
    pub e_legacy: Rat,
    pub k_legacy: Rat,
    pub b_legacy: Rat,
}

/// One admissible distribution of the singular points over the fibres of
/// the two fibrations: each part lists `(contribution q, n)` per point and
/// sums to a positive integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityWitness {
    pub factor1: Vec<Vec<(u64, u64)>>,
    pub factor2: Vec<Vec<(u64, u64)>>,
}

impl Basket {
    pub fn new() -> Self {
        Basket::default()
    }

    pub fn from_entries<I: IntoIterator<Item = (SingularityType, u64)>>(entries: I) -> Self {
        let mut b = Basket::new();
        for (t, m) in entries {
            b.insert(t, m);
        }
        b
    }

    pub fn insert(&mut self, t: SingularityType, multiplicity: u64) {
        if multiplicity > 0 {
            *self.entries.entry(t).or_insert(0) += multiplicity;
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (&SingularityType, u64)> {
        self.entries.iter().map(|(t, &m)| (t, m))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Number of singular points, counted with multiplicity.
    pub fn total_multiplicity(&self) -> u64 {
        self.entries.values().sum()
    }

    /// Distinct multiplicities n appearing in the basket.
    pub fn distinct_n(&self) -> Vec<u64> {
        let mut ns: Vec<u64> = self.entries.keys().map(|t| t.n()).collect();
        ns.dedup();
        ns
    }

    pub fn invariants(&self) -> BasketInvariants {
        let mut l = 0u64;
        let mut gamma = Rat::zero();
        let mut mu = Rat::zero();
        let mut index = 1u64;
        for (t, m) in self.entries() {
            let inv = t.invariants();
            l += m * inv.l;
            gamma += inv.gamma * rat_u64(m);
            mu += inv.mu * rat_u64(m);
            index = index.lcm(&inv.index);
        }
        let e_legacy = rat_u64(l) + &mu;
        let k_legacy = rat_u64(6) * &gamma + rat_u64(l) - rat_u64(2) * &mu;
        let b_legacy = rat_u64(3) * (rat_u64(2) * &gamma + rat_u64(l));
        BasketInvariants {
            l,
            gamma,
            mu,
            index,
            e_legacy,
            k_legacy,
            b_legacy,
        }
    }

    /// The entrywise mirror: every type q/n replaced by (n-q)/n. Negates
    /// gamma and preserves mu.
    pub fn mirror(&self) -> Basket {
        Basket::from_entries(self.entries().map(|(t, m)| (t.dual(), m)))
    }

    /// Decides whether the singular points can be distributed over fibres
    /// of the two fibrations so that every fibre receives an integral
    /// self-intersection contribution.
    ///
    /// Each point of type q/n contributes one of q/n, q'/n to a fibre of
    /// the first fibration and the complementary inverse to a fibre of the
    /// second; both multisets must split into parts with positive integer
    /// sums. Two-point baskets must additionally be a mirror pair.
    ///
    /// Returns a witness distribution when admissible.
    pub fn admissible(&self) -> Option<AdmissibilityWitness> {
        if self.is_empty() {
            return Some(AdmissibilityWitness {
                factor1: Vec::new(),
                factor2: Vec::new(),
            });
        }

        if self.total_multiplicity() == 2 {
            let pts: Vec<SingularityType> = self
                .entries()
                .flat_map(|(t, m)| std::iter::repeat(*t).take(m as usize))
                .collect();
            if pts[1] != pts[0].dual() {
                return None;
            }
        }

        // scale all contributions to residues modulo L = lcm of the n's
        let scale: u64 = self
            .entries
            .keys()
            .map(|t| t.n())
            .fold(1u64, |acc, n| acc.lcm(&n));

        // per distinct type: (n, q, q', multiplicity)
        let types: Vec<(u64, u64, u64, u64)> = self
            .entries()
            .map(|(t, m)| (t.n(), t.q(), t.q_inverse(), m))
            .collect();

        // choose, per type, how many of its points contribute q (the rest
        // contribute q'); both partition checks share one choice vector
        let mut choice = vec![0u64; types.len()];
        let mut memo = HashMap::new();
        loop {
            let mut vals1: Vec<(u64, u64)> = Vec::new();
            let mut vals2: Vec<(u64, u64)> = Vec::new();
            for (i, &(n, q, qi, m)) in types.iter().enumerate() {
                for _ in 0..choice[i] {
                    vals1.push((q, n));
                    vals2.push((qi, n));
                }
                for _ in choice[i]..m {
                    vals1.push((qi, n));
                    vals2.push((q, n));
                }
            }
            if let (Some(p1), Some(p2)) = (
                partition_integral(&vals1, scale, &mut memo),
                partition_integral(&vals2, scale, &mut memo),
            ) {
                return Some(AdmissibilityWitness {
                    factor1: p1,
                    factor2: p2,
                });
            }
            // odometer over the choice vector
            let mut i = 0;
            loop {
                if i == types.len() {
                    return None;
                }
                if choice[i] < types[i].3 {
                    choice[i] += 1;
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
        }
    }
}

/// Partitions the values q/n into parts with integer sums, working with
/// residues scaled by `scale`. Memoized on the sorted residue multiset.
fn partition_integral(
    vals: &[(u64, u64)],
    scale: u64,
    memo: &mut HashMap<Vec<u64>, bool>,
) -> Option<Vec<Vec<(u64, u64)>>> {
    let total: u64 = vals.iter().map(|&(q, n)| q * (scale / n)).sum();
    if total % scale != 0 {
        return None;
    }
    let mut items: Vec<(u64, (u64, u64))> =
        vals.iter().map(|&(q, n)| (q * (scale / n), (q, n))).collect();
    items.sort_unstable();
    let mut parts = Vec::new();
    if split_off_parts(&mut items, scale, memo, &mut parts) {
        Some(parts)
    } else {
        None
    }
}

fn split_off_parts(
    items: &mut Vec<(u64, (u64, u64))>,
    scale: u64,
    memo: &mut HashMap<Vec<u64>, bool>,
    parts: &mut Vec<Vec<(u64, u64)>>,
) -> bool {
    if items.is_empty() {
        return true;
    }
    let key: Vec<u64> = items.iter().map(|&(r, _)| r).collect();
    if let Some(&false) = memo.get(&key) {
        return false;
    }
    // the first item must land in some part; enumerate sub-multisets
    // containing it whose residues cancel
    let mut chosen = vec![0usize];
    if find_part(items, scale, 1, items[0].0 % scale, &mut chosen, memo, parts) {
        return true;
    }
    memo.insert(key, false);
    false
}

#[allow(clippy::too_many_arguments)]
fn find_part(
    items: &mut Vec<(u64, (u64, u64))>,
    scale: u64,
    from: usize,
    sum: u64,
    chosen: &mut Vec<usize>,
    memo: &mut HashMap<Vec<u64>, bool>,
    parts: &mut Vec<Vec<(u64, u64)>>,
) -> bool {
    if sum == 0 {
        // remove the chosen part and recurse on the remainder
        let part: Vec<(u64, u64)> = chosen.iter().map(|&i| items[i].1).collect();
        let mut rest: Vec<(u64, (u64, u64))> = Vec::with_capacity(items.len() - chosen.len());
        let mut it = chosen.iter().peekable();
        for (i, v) in items.iter().enumerate() {
            if it.peek() == Some(&&i) {
                it.next();
            } else {
                rest.push(v.clone());
            }
        }
        parts.push(part);
        if split_off_parts(&mut rest, scale, memo, parts) {
            return true;
        }
        parts.pop();
    }
    let mut last = None;
    for i in from..items.len() {
        if last == Some(items[i].0) {
            continue; // identical residue at the same level
        }
        last = Some(items[i].0);
        chosen.push(i);
        if find_part(items, scale, i + 1, (sum + items[i].0) % scale, chosen, memo, parts) {
            return true;
        }
        chosen.pop();
    }
    false
}

impl fmt::Display for Basket {
    /// Renders as sorted comma-separated entries, e.g. `2x1/2,1/6,5/6`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "{{}}");
        }
        let mut first = true;
        for (t, m) in self.entries() {
            if !first {
                write!(f, ",")?;
            }
            first = false;
            if m == 1 {
                write!(f, "{t}")?;
            } else {
                write!(f, "{m}x{t}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Basket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Basket {
    type Err = Error;

    /// Accepts the rendered form; entries may appear in any order.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "{}" {
            return Ok(Basket::new());
        }
        let mut basket = Basket::new();
        for piece in s.split(',') {
            let piece = piece.trim();
            if piece.is_empty() {
                return Err(Error::Parse(format!("empty basket entry in {s:?}")));
            }
            let (mult, frac) = match piece.split_once('x') {
                Some((m, rest)) => {
                    let m: u64 = m
                        .trim()
                        .parse()
                        .map_err(|_| Error::Parse(format!("invalid multiplicity in {piece:?}")))?;
                    (m, rest)
                }
                None => (1, piece),
            };
            if mult == 0 {
                return Err(Error::Parse(format!("zero multiplicity in {piece:?}")));
            }
            basket.insert(frac.parse()?, mult);
        }
        Ok(basket)
    }
}

impl TryFrom<String> for Basket {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Basket> for String {
    fn from(b: Basket) -> String {
        b.to_string()
    }
}

/// All admissible baskets with total gamma exactly `gamma`, every
/// multiplicity n at most `max_mult` (and within the general bound
/// `12*(4*chi + 2*gamma - 1)`, tightened to `- 3/2` when gamma != 0),
/// at most `8*chi + 4*gamma - 1` points, and `mu <= 4*chi + 2*gamma - 1/2`.
///
/// With `regular` set, `gamma` must be an integer with
/// `gamma + (chi - 1) >= 0`; this is the pipeline for regular surfaces
/// where `chi = 1 + p_g`.
pub fn enumerate_baskets(
    chi: u64,
    gamma: &Rat,
    max_mult: u64,
    regular: bool,
) -> Result<Vec<Basket>> {
    if regular {
        let shifted = gamma + rat_u64(chi) - rat_u64(1);
        if !shifted.is_integer() || shifted.is_negative() {
            return Err(Error::InvalidGamma(format!(
                "gamma = {gamma} requires gamma + p_g to be a nonnegative integer (p_g = {})",
                chi - 1
            )));
        }
    }

    let n_cap = multiplicity_ceiling(chi, gamma).min(max_mult);
    let four_chi_two_gamma = rat_u64(4 * chi) + rat_u64(2) * gamma;
    let mu_cap = &four_chi_two_gamma - rat(1, 2);
    let count_cap = {
        let c = rat_u64(8 * chi) + rat_u64(4) * gamma - rat_u64(1);
        floor_i64(&c).max(0) as u64
    };

    // candidate types in canonical order, with their invariants
    let mut types = Vec::new();
    for n in 2..=n_cap {
        for q in 1..n {
            if q.gcd(&n) != 1 {
                continue;
            }
            let t = SingularityType::new(q, n).unwrap();
            if t.q() == q {
                let inv = t.invariants();
                types.push((t, inv.gamma, inv.mu));
            }
        }
    }
    // largest |gamma| over the remaining types, for pruning
    let mut suffix_max: Vec<Rat> = vec![Rat::zero(); types.len() + 1];
    for i in (0..types.len()).rev() {
        let a = types[i].1.abs();
        suffix_max[i] = if a > suffix_max[i + 1] {
            a
        } else {
            suffix_max[i + 1].clone()
        };
    }

    let mut out = Vec::new();
    let mut stack: Vec<(SingularityType, u64)> = Vec::new();
    descend(
        &types,
        &suffix_max,
        0,
        gamma.clone(),
        mu_cap,
        count_cap,
        &mut stack,
        &mut out,
    );
    out.sort();
    Ok(out)
}

/// Upper bound for the multiplicity of a singularity on a surface with the
/// given chi and gamma: `12*(4*chi + 2*gamma - 1)`, or with `-3/2` in place
/// of `-1` when gamma is nonzero.
pub fn multiplicity_ceiling(chi: u64, gamma: &Rat) -> u64 {
    let base = rat_u64(4 * chi) + rat_u64(2) * gamma;
    let bound = if gamma.is_zero() {
        rat_u64(12) * (&base - rat_u64(1))
    } else {
        rat_u64(12) * (&base - rat(3, 2))
    };
    floor_i64(&bound).max(0) as u64
}

#[allow(clippy::too_many_arguments)]
fn descend(
    types: &[(SingularityType, Rat, Rat)],
    suffix_max: &[Rat],
    idx: usize,
    gamma_left: Rat,
    mu_left: Rat,
    count_left: u64,
    stack: &mut Vec<(SingularityType, u64)>,
    out: &mut Vec<Basket>,
) {
    if idx == types.len() {
        if gamma_left.is_zero() {
            let basket = Basket::from_entries(stack.iter().copied());
            if basket.admissible().is_some() {
                out.push(basket);
            }
        }
        return;
    }
    // unreachable gamma prune
    if gamma_left.abs() > rat_u64(count_left) * &suffix_max[idx] {
        return;
    }
    let (t, ref g, ref mu) = types[idx];
    // multiplicity 0 first keeps the output in canonical order
    descend(
        types,
        suffix_max,
        idx + 1,
        gamma_left.clone(),
        mu_left.clone(),
        count_left,
        stack,
        out,
    );
    let mut m = 1u64;
    loop {
        if m > count_left {
            break;
        }
        let mu_next = &mu_left - mu * rat_u64(m);
        if mu_next.is_negative() {
            break;
        }
        let gamma_next = &gamma_left - g * rat_u64(m);
        stack.push((t, m));
        descend(
            types,
            suffix_max,
            idx + 1,
            gamma_next,
            mu_next,
            count_left - m,
            stack,
            out,
        );
        stack.pop();
        m += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn basket(s: &str) -> Basket {
        s.parse().unwrap()
    }

    #[test]
    fn invariants_of_named_baskets() {
        let inv = Basket::new().invariants();
        assert_eq!(inv.l, 0);
        assert_eq!(inv.gamma, rat_int(0));
        assert_eq!(inv.mu, rat_int(0));
        assert_eq!(inv.index, 1);

        let inv = basket("1/6,5/6,2x1/2").invariants();
        assert_eq!(inv.l, 8);
        assert_eq!(inv.gamma, rat_int(0));
        assert_eq!(inv.mu, rat(8, 3));
        assert_eq!(inv.index, 3);
        assert_eq!(inv.e_legacy, rat_u64(8) + rat(8, 3));
        assert_eq!(inv.k_legacy, rat_u64(8) - rat(16, 3));
        assert_eq!(inv.b_legacy, rat_int(24));

        let inv = basket("5x1/5").invariants();
        assert_eq!(inv.l, 5);
        assert_eq!(inv.gamma, rat_int(2));
        assert_eq!(inv.mu, rat_int(4));
        assert_eq!(inv.index, 5);
    }

    #[test]
    fn rendering_is_canonical() {
        let b = basket("1/6,2x1/2,5/6");
        assert_eq!(b.to_string(), "2x1/2,1/6,5/6");
        assert_eq!(basket("3/5").to_string(), "2/5");
        assert_eq!(Basket::new().to_string(), "{}");
        assert_eq!(basket("{}"), Basket::new());
    }

    #[test]
    fn admissibility_examples() {
        let w = basket("2x1/2").admissible().expect("pair of nodes");
        assert_eq!(w.factor1, vec![vec![(1, 2), (1, 2)]]);

        assert!(basket("1/5,2/5").admissible().is_none());
        assert!(basket("1/6,5/6,2x1/2").admissible().is_some());

        // requires mixing representatives: 2/5 + 3/5 = 1 on each fibre
        assert!(basket("2x2/5").admissible().is_some());
        assert!(basket("4x2/5").admissible().is_some());
        assert!(basket("5x1/5,4x2/5").admissible().is_some());

        // two points that are not a mirror pair
        assert!(basket("2x1/5").admissible().is_none());
        assert!(basket("1/5,4/5").admissible().is_some());
    }

    #[test]
    fn witness_parts_sum_to_integers() {
        let b = basket("5x1/5,4x2/5");
        let w = b.admissible().unwrap();
        for parts in [&w.factor1, &w.factor2] {
            let mut seen = 0;
            for part in parts {
                let s: Rat = part
                    .iter()
                    .map(|&(q, n)| Rat::new(q.into(), n.into()))
                    .sum();
                assert!(s.is_integer() && s > Rat::zero(), "part sum {s}");
                seen += part.len();
            }
            assert_eq!(seen as u64, b.total_multiplicity());
        }
    }

    #[test]
    fn enumerate_gamma0_nodes() {
        let got = enumerate_baskets(1, &rat_int(0), 2, true).unwrap();
        let want: Vec<Basket> = ["{}", "2x1/2", "4x1/2", "6x1/2"]
            .iter()
            .map(|s| basket(s))
            .collect();
        let mut want = want;
        want.sort();
        assert_eq!(got, want);
        assert!(!got.contains(&basket("8x1/2")));
    }

    #[test]
    fn enumerate_gamma2_contains_named_baskets() {
        let got = enumerate_baskets(1, &rat_int(2), 5, true).unwrap();
        assert!(got.contains(&basket("5x1/5")));
        assert!(got.contains(&basket("5x1/5,4x2/5")));
        for b in &got {
            assert_eq!(b.invariants().gamma, rat_int(2));
            assert!(b.total_multiplicity() <= 15);
            assert!(b.invariants().mu <= rat(15, 2));
        }
    }

    #[test]
    fn regular_pipeline_rejects_bad_gamma() {
        assert!(enumerate_baskets(1, &rat(1, 2), 5, true).is_err());
        assert!(enumerate_baskets(1, &rat_int(-1), 5, true).is_err());
        // exploratory callers may pass anything
        assert!(enumerate_baskets(1, &rat(1, 2), 3, false).is_ok());
    }

    #[test]
    fn mirror_negates_gamma_preserves_mu() {
        let b = basket("5x1/5,4x2/5");
        let m = b.mirror();
        assert_eq!(m.to_string(), "4x2/5,5x4/5");
        let (bi, mi) = (b.invariants(), m.invariants());
        assert_eq!(bi.gamma, -mi.gamma);
        assert_eq!(bi.mu, mi.mu);
        assert_eq!(b.mirror().mirror(), b);
    }

    #[test]
    fn enumeration_closed_under_mirror() {
        // (chi, gamma) = (1, 1) against (2, -1): same caps, mirrored output
        let a = enumerate_baskets(1, &rat_int(1), 4, true).unwrap();
        let b = enumerate_baskets(2, &rat_int(-1), 4, true).unwrap();
        let mut mirrored: Vec<Basket> = a.iter().map(Basket::mirror).collect();
        mirrored.sort();
        assert_eq!(mirrored, b);
    }

    #[test]
    fn point_count_is_at_most_two_mu() {
        for b in enumerate_baskets(1, &rat_int(1), 6, true).unwrap() {
            let inv = b.invariants();
            assert!(rat_u64(b.total_multiplicity()) <= rat_u64(2) * inv.mu);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("12".parse::<Basket>().is_err());
        assert!("0x1/2".parse::<Basket>().is_err());
        assert!("2x1/2,,1/6".parse::<Basket>().is_err());
    }
}
