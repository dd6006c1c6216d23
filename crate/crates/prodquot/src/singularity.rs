//! Cyclic quotient singularities of type q/n and their numerical invariants.
//!
//! A singularity of type q/n is the quotient of the plane by
//! `(x,y) -> (e^(2*pi*i/n) x, e^(2*pi*i*q/n) y)` with `0 < q < n` coprime.
//! Its minimal resolution is a string of rational curves whose
//! self-intersections `-b_i` come from the continued fraction
//!
//! ```text
//! n/q = b_1 - 1/(b_2 - 1/(... - 1/b_l)),   b_i >= 2.
//! ```
//!
//! Four numbers are attached to each type:
//!
//! * `l`     — the length of the continued fraction,
//! * `gamma` — `(1/6) * [ (q + q')/n + sum_i (b_i - 3) ]`,
//! * `mu`    — `1 - 1/n`,
//! * `I`     — `n / gcd(n, q + 1)`, the local index.
//!
//! Here q' is the multiplicative inverse of q mod n; q/n and q'/n are the
//! same singularity, and all four numbers are invariant under q <-> q'.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rat::{rat_u64, Rat};

/// A cyclic quotient singularity, stored by its canonical representative:
/// of the two equivalent fractions q/n and q'/n we keep the smaller q.
///
/// Ordering is by (n, q), which fixes the canonical order of baskets.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct SingularityType {
    n: u64,
    q: u64,
}

impl SingularityType {
    /// Accepts any representative; canonicalizes q <-> q'.
    pub fn new(q: u64, n: u64) -> Result<Self> {
        if n < 2 || q == 0 || q >= n {
            return Err(Error::InvalidType(format!(
                "q must satisfy 0 < q < n (got {q}/{n})"
            )));
        }
        if q.gcd(&n) != 1 {
            return Err(Error::InvalidType("gcd(q,n) must be 1".into()));
        }
        let qi = mod_inverse(q, n);
        Ok(SingularityType { n, q: q.min(qi) })
    }

    /// Canonical numerator (the smaller of q and q').
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// The multiplicative inverse q' of q mod n.
    pub fn q_inverse(&self) -> u64 {
        mod_inverse(self.q, self.n)
    }

    /// The mirror type (n-q)/n. Mirroring is well defined on canonical
    /// representatives because (n-q)' = n-q'.
    pub fn dual(&self) -> SingularityType {
        SingularityType::new(self.n - self.q, self.n).expect("mirror of a valid type is valid")
    }

    /// The Hirzebruch-Jung string [b_1, ..., b_l] of n/q.
    pub fn hj_string(&self) -> Vec<u64> {
        hj_expand(self.q, self.n).expect("stored type is valid")
    }

    pub fn invariants(&self) -> SingularityInvariants {
        let hj = self.hj_string();
        let l = hj.len() as u64;
        // gamma = (1/6) [ (q+q')/n + sum (b_i - 3) ]
        let mut sum = Rat::new((self.q + self.q_inverse()).into(), self.n.into());
        for &b in &hj {
            sum += rat_u64(b) - rat_u64(3);
        }
        let gamma = sum / rat_u64(6);
        let mu = rat_u64(1) - Rat::new(1.into(), self.n.into());
        let index = self.n / self.n.gcd(&(self.q + 1));
        SingularityInvariants {
            hj,
            l,
            gamma,
            mu,
            index,
        }
    }

    /// The intersection-matrix block of the exceptional string: the l x l
    /// symmetric matrix with diagonal -b_1, ..., -b_l and 1 on the off
    /// diagonals, together with the vector (b_1 - 2, ..., b_l - 2) of
    /// canonical multiplicities K.A_i. The block is negative definite.
    pub fn hj_block(&self) -> (Vec<Vec<i64>>, Vec<i64>) {
        let hj = self.hj_string();
        let l = hj.len();
        let mut m = vec![vec![0i64; l]; l];
        let mut b = vec![0i64; l];
        for (i, &bi) in hj.iter().enumerate() {
            m[i][i] = -(bi as i64);
            if i + 1 < l {
                m[i][i + 1] = 1;
                m[i + 1][i] = 1;
            }
            b[i] = bi as i64 - 2;
        }
        (m, b)
    }
}

impl fmt::Display for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.q, self.n)
    }
}

impl fmt::Debug for SingularityType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.q, self.n)
    }
}

impl FromStr for SingularityType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (q, n) = s
            .split_once('/')
            .ok_or_else(|| Error::Parse(format!("expected q/n, got {s:?}")))?;
        let q: u64 = q
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid numerator in {s:?}")))?;
        let n: u64 = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("invalid denominator in {s:?}")))?;
        SingularityType::new(q, n)
    }
}

impl TryFrom<String> for SingularityType {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<SingularityType> for String {
    fn from(t: SingularityType) -> String {
        t.to_string()
    }
}

/// The per-type numerical data; see the module docs for the formulas.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularityInvariants {
    pub hj: Vec<u64>,
    pub l: u64,
    pub gamma: Rat,
    pub mu: Rat,
    /// Local index: the minimal I with I*K Cartier near the point.
    pub index: u64,
}

/// Hirzebruch-Jung expansion of n/q: repeatedly take `b = ceil(n/q)` and
/// replace (n, q) by (q, b*q - n) until q = 0.
pub fn hj_expand(q: u64, n: u64) -> Result<Vec<u64>> {
    if n < 2 || q == 0 || q >= n {
        return Err(Error::InvalidType(format!(
            "q must satisfy 0 < q < n (got {q}/{n})"
        )));
    }
    if q.gcd(&n) != 1 {
        return Err(Error::InvalidType("gcd(q,n) must be 1".into()));
    }
    let (mut n, mut q) = (n, q);
    let mut out = Vec::new();
    while q > 0 {
        let b = n.div_ceil(q);
        out.push(b);
        let next_q = b * q - n;
        n = q;
        q = next_q;
    }
    Ok(out)
}

fn mod_inverse(q: u64, n: u64) -> u64 {
    // extended Euclid; gcd(q, n) = 1 is guaranteed by the caller
    let (mut r0, mut r1) = (n as i128, q as i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let k = r0 / r1;
        (r0, r1) = (r1, r0 - k * r1);
        (t0, t1) = (t1, t0 - k * t1);
    }
    debug_assert_eq!(r0, 1);
    (t0.rem_euclid(n as i128)) as u64
}
