//! Orbifold signatures, the Hurwitz formula, and the bound cascade that
//! makes the signature search finite.
//!
//! A signature `(g0; m_1, ..., m_r)` records the genus of the quotient
//! curve and the branching orders of a group action on a curve. Its
//! orbifold number
//!
//! ```text
//! Theta = 2*g0 - 2 + sum_i (1 - 1/m_i)
//! ```
//!
//! ties the curve genus to the group order by `2g - 2 = |G| * Theta`.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed};
use serde::{Deserialize, Serialize};

use crate::basket::Basket;
use crate::error::{Error, Result};
use crate::rat::{as_u64, floor_i64, leq_sqrt, rat, rat_u64, Rat};

/// An orbifold signature with nondecreasing periods. `(g0; -)` with no
/// periods is allowed; downstream positivity of Theta rejects tori.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Signature {
    g0: u32,
    periods: Vec<u64>,
}

impl Signature {
    pub fn new(g0: u32, mut periods: Vec<u64>) -> Result<Self> {
        if periods.iter().any(|&m| m < 2) {
            return Err(Error::InvalidSignature("periods must be >= 2".into()));
        }
        periods.sort_unstable();
        Ok(Signature { g0, periods })
    }

    /// Convenience constructor for the genus-zero signatures the pipeline
    /// works with.
    pub fn spherical(periods: &[u64]) -> Result<Self> {
        Signature::new(0, periods.to_vec())
    }

    pub fn g0(&self) -> u32 {
        self.g0
    }

    pub fn periods(&self) -> &[u64] {
        &self.periods
    }

    pub fn r(&self) -> usize {
        self.periods.len()
    }

    /// `Theta = 2*g0 - 2 + sum (1 - 1/m_i)`, exactly.
    pub fn theta(&self) -> Rat {
        let mut theta = rat(2 * self.g0 as i64 - 2, 1);
        for &m in &self.periods {
            theta += Rat::one() - Rat::new(1.into(), m.into());
        }
        theta
    }

    /// Genus through the Hurwitz formula: `g = 1 + order * Theta / 2`.
    /// `order * Theta` must be an even integer and the genus at least 2.
    pub fn curve_genus(&self, order: u64) -> Result<u64> {
        let double = rat_u64(order) * self.theta();
        let Some(d) = as_u64(&double).filter(|d| d % 2 == 0) else {
            return Err(Error::NonIntegralGenus(double.to_string()));
        };
        let g = 1 + d / 2;
        if g < 2 {
            return Err(Error::GenusTooSmall(g.to_string()));
        }
        Ok(g)
    }

    /// Table-style rendering with the genus omitted: `2,4,6`. Only used
    /// for genus-zero signatures in reports.
    pub fn compact(&self) -> String {
        let body: Vec<String> = self.periods.iter().map(|m| m.to_string()).collect();
        if self.g0 == 0 {
            body.join(",")
        } else {
            format!("({}; {})", self.g0, body.join(","))
        }
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.periods.iter().map(|m| m.to_string()).collect();
        write!(f, "({}; {})", self.g0, body.join(","))
    }
}

impl fmt::Debug for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Signature {
    type Err = Error;

    /// Accepts both `(g0; m1,m2,...)` and the bare `m1,m2,...` table form.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (g0, rest) = match s.strip_prefix('(') {
            Some(inner) => {
                let inner = inner
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse(format!("unbalanced parens in {s:?}")))?;
                let (g, rest) = inner
                    .split_once(';')
                    .ok_or_else(|| Error::Parse(format!("expected (g0; ...) in {s:?}")))?;
                let g: u32 = g
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid genus in {s:?}")))?;
                (g, rest.trim())
            }
            None => (0, s),
        };
        let mut periods = Vec::new();
        if !rest.is_empty() && rest != "-" {
            for p in rest.split(',') {
                let m: u64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid period {p:?}")))?;
                periods.push(m);
            }
        }
        Signature::new(g0, periods)
    }
}

impl TryFrom<String> for Signature {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Signature> for String {
    fn from(s: Signature) -> String {
        s.to_string()
    }
}

/// All signatures of quotient genus `g0` compatible with the given `xi`
/// and basket:
///
/// * `r <= xi + 4 - 2*g0`;
/// * every period within the quadratic bounds (the `r = 3, g0 = 0` bound
///   `m <= 6*[xi + 1 + sqrt(xi*(xi+2))]`, otherwise the bound with
///   denominator `4*g0 + r - 3`), decided by exact comparison against the
///   square root rather than a floored approximation;
/// * `Theta > 0`;
/// * `alpha = xi / (2*Theta)` a positive integer;
/// * every multiplicity n of the basket divides some period.
///
/// Returns an empty list when `xi < 1/2`.
pub fn enumerate_signatures(xi: &Rat, basket: &Basket, g0: u32) -> Vec<Signature> {
    let mut out = Vec::new();
    if xi < &rat(1, 2) {
        return out;
    }
    let ns = basket.distinct_n();
    let r_max = floor_i64(&(xi + rat_u64(4) - rat_u64(2 * g0 as u64))).max(0) as usize;
    for r in 0..=r_max {
        if g0 == 0 && r < 3 {
            continue; // Theta <= -1/2 + ... < 0 is impossible below three periods
        }
        let Some(m_cap) = period_ceiling(xi, g0, r) else {
            continue;
        };
        let mut periods = vec![0u64; r];
        let theta0 = rat(2 * g0 as i64 - 2, 1);
        fill_periods(xi, &ns, g0, m_cap, &mut periods, 0, theta0, &mut out);
    }
    out.sort();
    out
}

/// Largest admissible period for a signature with `r` periods, or `None`
/// when no period can satisfy the bound.
fn period_ceiling(xi: &Rat, g0: u32, r: usize) -> Option<u64> {
    if r == 0 {
        return Some(0);
    }
    let exact: Box<dyn Fn(u64) -> bool> = if g0 == 0 && r == 3 {
        // m/6 - (xi + 1) <= sqrt(xi * (xi + 2))
        let d = xi * (xi + rat_u64(2));
        let shift = xi + rat_u64(1);
        Box::new(move |m: u64| leq_sqrt(&(rat(m as i64, 6) - &shift), &d))
    } else {
        // (m - 3) * B - (2*xi + 1) <= sqrt((3*B + 2*xi + 1)^2 - 12*B)
        let b = rat_u64(4 * g0 as u64 + r as u64) - rat_u64(3);
        if !b.is_positive() {
            return None;
        }
        let a = rat_u64(2) * xi + rat_u64(1);
        let s = rat_u64(3) * &b + &a;
        let d = &s * &s - rat_u64(12) * &b;
        debug_assert!(!d.is_negative());
        Box::new(move |m: u64| leq_sqrt(&((rat_u64(m) - rat_u64(3)) * &b - &a), &d))
    };
    if !exact(2) {
        return None;
    }
    let mut hi = 2u64;
    while exact(hi * 2) {
        hi *= 2;
    }
    let (mut lo, mut hi) = (hi, hi * 2); // exact(lo), !exact(hi)
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if exact(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(lo)
}

#[allow(clippy::too_many_arguments)]
fn fill_periods(
    xi: &Rat,
    ns: &[u64],
    g0: u32,
    m_cap: u64,
    periods: &mut Vec<u64>,
    pos: usize,
    theta: Rat,
    out: &mut Vec<Signature>,
) {
    let r = periods.len();
    let emit = |periods: &[u64], out: &mut Vec<Signature>| {
        if ns.iter().all(|&n| periods.iter().any(|&m| m % n == 0)) {
            out.push(Signature::new(g0, periods.to_vec()).expect("periods >= 2"));
        }
    };
    if r == 0 {
        // no branching: Theta = 2*g0 - 2 must make alpha a positive integer
        if theta.is_positive() {
            let alpha = xi / (rat_u64(2) * &theta);
            if as_u64(&alpha).filter(|&a| a > 0).is_some() {
                emit(periods, out);
            }
        }
        return;
    }
    if pos == r - 1 {
        // alpha = xi / (2*Theta) a positive integer pins the last period:
        // Theta = xi/(2*alpha), so m = 1 / (1 - (Theta - theta)).
        let lo = if pos == 0 { 2 } else { periods[pos - 1] };
        let t_min = &theta + Rat::one() - Rat::new(1.into(), lo.into());
        let t_max = &theta + Rat::one() - Rat::new(1.into(), m_cap.into());
        if !t_max.is_positive() {
            return;
        }
        if !t_min.is_positive() {
            // alpha is unbounded near Theta = 0; walk the periods instead
            for m in lo..=m_cap {
                periods[pos] = m;
                let t = &theta + Rat::one() - Rat::new(1.into(), m.into());
                if t.is_positive() {
                    let alpha = xi / (rat_u64(2) * &t);
                    if as_u64(&alpha).filter(|&a| a > 0).is_some() {
                        emit(periods, out);
                    }
                }
            }
            return;
        }
        let alpha_min = {
            let a = xi / (rat_u64(2) * &t_max);
            let f = floor_i64(&a);
            if rat(f, 1) == a {
                f
            } else {
                f + 1
            }
        }
        .max(1);
        let alpha_max = floor_i64(&(xi / (rat_u64(2) * &t_min)));
        for alpha in alpha_min..=alpha_max {
            let target = xi / rat_u64(2 * alpha as u64);
            let one_minus = Rat::one() - (&target - &theta);
            if !one_minus.is_positive() {
                continue;
            }
            let m = one_minus.recip();
            if let Some(m) = as_u64(&m) {
                if m >= lo && m <= m_cap {
                    periods[pos] = m;
                    emit(periods, out);
                }
            }
        }
        return;
    }
    let lo = if pos == 0 { 2 } else { periods[pos - 1] };
    for m in lo..=m_cap {
        // remaining entries are >= m, so the final Theta is at least
        // theta + (r - pos)*(1 - 1/m); alpha >= 1 needs Theta <= xi/2
        let floor_total = &theta
            + rat_u64((r - pos) as u64) * (Rat::one() - Rat::new(1.into(), m.into()));
        if rat_u64(2) * floor_total > *xi {
            break;
        }
        periods[pos] = m;
        let t = &theta + Rat::one() - Rat::new(1.into(), m.into());
        fill_periods(xi, ns, g0, m_cap, periods, pos + 1, t, out);
    }
}

/// The compatibility filter for a pair of signatures sharing one surface:
/// returns the group order `xi / (Theta_1 * Theta_2)` when
///
/// * that value is a positive integer and both `alpha_i = xi / (2*Theta_i)`
///   are positive integers,
/// * every period m of either signature has `I*xi / (Theta * m)` integral
///   and `m <= (1 + I*xi) / f` with `f = max(1/6, (r-3)/2)`,
/// * at most `basket_size / 2` periods per factor fail the halved
///   integrality test `I*xi / (2*Theta*m)`, and at most that many exceed
///   `(2 + I*xi) / (2*f)`.
pub fn robavecchia_filter(
    s1: &Signature,
    s2: &Signature,
    xi: &Rat,
    index: u64,
    basket_size: u64,
) -> Option<u64> {
    let theta1 = s1.theta();
    let theta2 = s2.theta();
    if !theta1.is_positive() || !theta2.is_positive() {
        return None;
    }
    let order = as_u64(&(xi / (&theta1 * &theta2))).filter(|&o| o > 0)?;
    for (s, theta) in [(s1, &theta1), (s2, &theta2)] {
        let alpha = xi / (rat_u64(2) * theta);
        as_u64(&alpha).filter(|&a| a > 0)?;

        let ixi = rat_u64(index) * xi;
        let f = rat(1, 6).max(rat(s.r() as i64 - 3, 2));
        let d_cap = (rat_u64(1) + &ixi) / &f;
        let e_cap = (rat_u64(2) + &ixi) / (rat_u64(2) * &f);
        let mut c_exceptions = 0u64;
        let mut e_exceptions = 0u64;
        for &m in s.periods() {
            let quot = &ixi / (theta * rat_u64(m));
            if as_u64(&quot).is_none() {
                return None; // condition (b)
            }
            if rat_u64(m) > d_cap {
                return None; // condition (d)
            }
            if as_u64(&(quot / rat_u64(2))).is_none() {
                c_exceptions += 1;
            }
            if rat_u64(m) > e_cap {
                e_exceptions += 1;
            }
        }
        if 2 * c_exceptions > basket_size || 2 * e_exceptions > basket_size {
            return None; // conditions (c) and (e)
        }
    }
    Some(order)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat_int;

    fn sig(periods: &[u64]) -> Signature {
        Signature::spherical(periods).unwrap()
    }

    #[test]
    fn theta_examples() {
        assert_eq!(sig(&[2, 4, 6]).theta(), rat(1, 12));
        assert_eq!(sig(&[2, 5, 6]).theta(), rat(2, 15));
        assert_eq!(Signature::new(1, vec![]).unwrap().theta(), rat_int(0));
        assert_eq!(sig(&[2, 2, 2]).theta(), rat(-1, 2));
    }

    #[test]
    fn hurwitz_genus() {
        assert_eq!(sig(&[5, 5, 5]).curve_genus(25).unwrap(), 6);
        assert_eq!(sig(&[2, 4, 6]).curve_genus(192).unwrap(), 9);
        assert_eq!(sig(&[5, 5, 5]).curve_genus(5).unwrap(), 2);
        // 7 * 2/5 is not an integer
        assert!(matches!(
            sig(&[5, 5, 5]).curve_genus(7),
            Err(Error::NonIntegralGenus(_))
        ));
        // order 1 would give genus 1... 1 + 1*(2/5)/2 not integral either
        assert!(sig(&[5, 5, 5]).curve_genus(1).is_err());
        // (0; 2,2,2,2) on the trivial-ish order 2: Theta = 0
        assert!(matches!(
            sig(&[2, 2, 2, 2]).curve_genus(4),
            Err(Error::GenusTooSmall(_))
        ));
    }

    #[test]
    fn rendering_and_parsing() {
        let s = sig(&[6, 2, 4]);
        assert_eq!(s.periods(), &[2, 4, 6]);
        assert_eq!(s.to_string(), "(0; 2,4,6)");
        assert_eq!(s.compact(), "2,4,6");
        assert_eq!("2,4,6".parse::<Signature>().unwrap(), s);
        assert_eq!("(0; 2,4,6)".parse::<Signature>().unwrap(), s);
        let h = Signature::new(1, vec![2]).unwrap();
        assert_eq!(h.to_string(), "(1; 2)");
        assert_eq!(h.compact(), "(1; 2)");
        assert!("2,x".parse::<Signature>().is_err());
        assert!(Signature::new(0, vec![1, 2]).is_err());
    }

    #[test]
    fn enumerate_named_cases() {
        let basket: Basket = "1/6,5/6,2x1/2".parse().unwrap();
        let xi = rat(4, 3);
        let sigs = enumerate_signatures(&xi, &basket, 0);
        assert!(sigs.contains(&sig(&[2, 4, 6])));
        assert!(!sigs.contains(&sig(&[2, 3, 7])));

        let basket: Basket = "5x1/5,4x2/5".parse().unwrap();
        let sigs = enumerate_signatures(&rat(4, 5), &basket, 0);
        assert!(sigs.contains(&sig(&[5, 5, 5])));

        assert!(enumerate_signatures(&rat(1, 3), &Basket::new(), 0).is_empty());
    }

    #[test]
    fn enumeration_is_deterministic() {
        let basket: Basket = "2x1/2".parse().unwrap();
        let a = enumerate_signatures(&rat_int(3), &basket, 0);
        let b = enumerate_signatures(&rat_int(3), &basket, 0);
        assert_eq!(a, b);
        let mut sorted = a.clone();
        sorted.sort();
        assert_eq!(a, sorted);
    }

    #[test]
    fn pair_filter_named_cases() {
        let xi = rat(4, 3);
        assert_eq!(
            robavecchia_filter(&sig(&[2, 4, 6]), &sig(&[2, 4, 6]), &xi, 3, 4),
            Some(192)
        );
        assert_eq!(
            robavecchia_filter(&sig(&[2, 4, 6]), &sig(&[2, 5, 6]), &xi, 3, 4),
            Some(120)
        );
        assert_eq!(
            robavecchia_filter(&sig(&[2, 2, 2]), &sig(&[2, 4, 6]), &xi, 3, 4),
            None
        );
    }

    #[test]
    fn pair_filter_implies_valid_genera() {
        // for every surviving pair the Hurwitz genera are integers >= 2
        // and (g1-1)(g2-1) = order * xi / 4; periods obey Wiman's bound
        let basket: Basket = "1/6,5/6,2x1/2".parse().unwrap();
        let xi = rat(4, 3);
        let sigs = enumerate_signatures(&xi, &basket, 0);
        let mut seen = 0;
        for s1 in &sigs {
            for s2 in &sigs {
                let Some(order) =
                    robavecchia_filter(s1, s2, &xi, 3, basket.total_multiplicity())
                else {
                    continue;
                };
                seen += 1;
                assert_eq!(rat_u64(order) * s1.theta() * s2.theta(), xi);
                let g1 = s1.curve_genus(order).unwrap();
                let g2 = s2.curve_genus(order).unwrap();
                assert_eq!(
                    rat_u64((g1 - 1) * (g2 - 1)),
                    rat_u64(order) * &xi / rat_u64(4)
                );
                for &m in s1.periods() {
                    assert!(m <= 4 * g2 + 2, "Wiman bound violated");
                }
                for &m in s2.periods() {
                    assert!(m <= 4 * g1 + 2, "Wiman bound violated");
                }
            }
        }
        assert!(seen > 0);
    }

    #[test]
    fn period_ceiling_edges() {
        // r = 3, g0 = 0, xi = 4/3: cap is 6*[xi+1+sqrt(xi(xi+2))] ~ 26.6
        assert_eq!(period_ceiling(&rat(4, 3), 0, 3), Some(26));
        // the r = 4 bound at xi = 4/3 is 3 + (2xi+1) + sqrt(...) with B = 1
        let cap = period_ceiling(&rat(4, 3), 0, 4).unwrap();
        assert!(cap >= 6 && cap < 26, "cap = {cap}");
    }
}
