//! Exceptional-lattice arithmetic and the (-1)-curve candidate search.
//!
//! A candidate (-1)-class is written against the basis of fibre classes
//! and exceptional curves,
//!
//! ```text
//! E ~ (mu1/|G|) F1 + (mu2/|G|) F2 - sum_i a_i A_i,
//! ```
//!
//! and evaluated through the two exact identities
//!
//! ```text
//! K.E = mu1*Theta2 + mu2*Theta1 + e^T M^-1 b
//! E^2 = 2*mu1*mu2/|G| + e^T M^-1 e
//! ```
//!
//! where M is the intersection matrix of the basket, b the vector of
//! `b_i - 2`, and e the intersections of E with the exceptional curves.
//! Setting `K.E = E^2 = -1` and eliminating gives one linear equation and
//! one product equation for `(mu1, mu2)`, solved over the nonnegative
//! integers for each admissible intersection pattern e.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::basket::Basket;
use crate::error::{Error, Result};
use crate::linalg;
use crate::rat::{rat_string, rat_u64, Rat};
use crate::singularity::SingularityType;
use crate::surface::SurfaceNumerics;

/// Block-diagonal intersection matrix of a basket, in canonical basket
/// order, with the curve bookkeeping needed by the filters.
#[derive(Clone, Debug)]
pub struct ExceptionalLattice {
    pub matrix: Vec<Vec<i64>>,
    /// K.A_i = b_i - 2 per exceptional curve.
    pub b: Vec<i64>,
    /// Self-intersection -b_i per curve.
    pub self_intersections: Vec<i64>,
    /// (type, position within its string) per matrix row.
    pub curves: Vec<(SingularityType, usize)>,
}

pub fn exceptional_lattice(basket: &Basket) -> ExceptionalLattice {
    // curves ordered by descending multiplicity (then ascending q): the
    // deepest singularity comes first, nodes last
    let mut entries: Vec<(SingularityType, u64)> = basket.entries().map(|(t, m)| (*t, m)).collect();
    entries.sort_by_key(|(t, _)| (std::cmp::Reverse(t.n()), t.q()));
    let mut blocks: Vec<(SingularityType, Vec<Vec<i64>>, Vec<i64>)> = Vec::new();
    for (t, mult) in entries {
        let (m, b) = t.hj_block();
        for _ in 0..mult {
            blocks.push((t, m.clone(), b.clone()));
        }
    }
    let dim: usize = blocks.iter().map(|(_, m, _)| m.len()).sum();
    let mut matrix = vec![vec![0i64; dim]; dim];
    let mut b = Vec::with_capacity(dim);
    let mut self_intersections = Vec::with_capacity(dim);
    let mut curves = Vec::with_capacity(dim);
    let mut offset = 0;
    for (t, block, bvec) in blocks {
        let l = block.len();
        for i in 0..l {
            for j in 0..l {
                matrix[offset + i][offset + j] = block[i][j];
            }
            b.push(bvec[i]);
            self_intersections.push(block[i][i]);
            curves.push((t, i));
        }
        offset += l;
    }
    debug_assert!(dim == 0 || linalg::is_negative_definite(&matrix));
    ExceptionalLattice {
        matrix,
        b,
        self_intersections,
        curves,
    }
}

/// Evaluates `(K.E, E^2)` for one candidate class, exactly. The inverse
/// of M is applied by solving the linear system.
pub fn evaluate_class(
    lattice: &ExceptionalLattice,
    mu1: u64,
    mu2: u64,
    e: &[i64],
    theta1: &Rat,
    theta2: &Rat,
    order: u64,
) -> Result<(Rat, Rat)> {
    let dim = lattice.matrix.len();
    if e.len() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            got: e.len(),
        });
    }
    let (minv_b, minv_e) = if dim == 0 {
        (Rat::zero(), Rat::zero())
    } else {
        let rhs_b: Vec<Rat> = lattice.b.iter().map(|&x| rat_u64(0) + Rat::from_integer(x.into())).collect();
        let rhs_e: Vec<Rat> = e.iter().map(|&x| Rat::from_integer(x.into())).collect();
        let xb = linalg::solve(&lattice.matrix, &rhs_b)
            .expect("negative definite matrices are invertible");
        let xe = linalg::solve(&lattice.matrix, &rhs_e)
            .expect("negative definite matrices are invertible");
        let dot = |u: &[Rat], v: &[i64]| -> Rat {
            u.iter()
                .zip(v)
                .map(|(a, &b)| a * Rat::from_integer(b.into()))
                .sum()
        };
        (dot(&xb, e), dot(&xe, e))
    };
    let ke = rat_u64(mu1) * theta2 + rat_u64(mu2) * theta1 + minv_b;
    let e2 = rat_u64(2 * mu1 * mu2) / rat_u64(order) + minv_e;
    Ok((ke, e2))
}

/// A candidate (-1)-class: `K.E = E^2 = -1` holds exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinusOneCandidate {
    pub mu1: u64,
    pub mu2: u64,
    pub e: Vec<i64>,
}

/// One examined intersection pattern with the (mu1, mu2) system it led
/// to: `mu1*Theta2 + mu2*Theta1 = lin_rhs` and `mu1*mu2 = prod_target`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VisitedSystem {
    pub e: Vec<i64>,
    #[serde(with = "rat_string")]
    pub lin_rhs: Rat,
    #[serde(with = "rat_string")]
    pub prod_target: Rat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Applicability {
    /// `p_g + gamma = 0`: fibres and exceptional curves span H^2, so an
    /// empty candidate list rules out (-1)-curves on a general-type
    /// surface.
    Complete,
    /// The search only certifies lattice-level statements.
    LatticeOnly,
}

/// Which necessary-condition filters were active during a search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterFlags {
    /// Cap e_i by max(1, b_i - 3) (a contracted curve image must stay
    /// permissible on a general-type surface).
    pub b_minus_3_cap: bool,
    /// Allow at most one transversal incidence with (-2)-curves.
    pub two_curve_rule: bool,
}

impl Default for FilterFlags {
    fn default() -> Self {
        FilterFlags {
            b_minus_3_cap: true,
            two_curve_rule: true,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinusOneSearch {
    pub candidates: Vec<MinusOneCandidate>,
    pub applicability: Applicability,
    pub filters: FilterFlags,
    /// Every intersection pattern whose (mu1, mu2) system was examined.
    pub visited: Vec<VisitedSystem>,
}

/// Enumerates intersection patterns e with `sum e_i >= 3` (a rational
/// curve must meet the singular locus in at least three points), each
/// entry within its cap, and at most one incidence with (-2)-curves;
/// solves the resulting systems for nonnegative integers (mu1, mu2), not
/// both zero.
pub fn search_minus_one(s: &SurfaceNumerics, filters: FilterFlags) -> MinusOneSearch {
    let lattice = exceptional_lattice(&s.basket);
    let theta1 = s.theta1();
    let theta2 = s.theta2();
    let applicability = if s.pg_plus_gamma().is_zero() {
        Applicability::Complete
    } else {
        Applicability::LatticeOnly
    };

    let dim = lattice.matrix.len();
    let caps: Vec<i64> = lattice
        .self_intersections
        .iter()
        .map(|&si| {
            let b = -si;
            if filters.b_minus_3_cap {
                (b - 3).max(1)
            } else {
                (b - 1).max(1)
            }
        })
        .collect();

    let mut search = MinusOneSearch {
        candidates: Vec::new(),
        applicability,
        filters,
        visited: Vec::new(),
    };
    if dim == 0 {
        return search;
    }

    // invert M once; each pattern is then a sparse quadratic form over a
    // common denominator, evaluated in integer arithmetic
    let minv = linalg::invert(&lattice.matrix).expect("negative definite");
    let rhs_b: Vec<Rat> = lattice
        .b
        .iter()
        .map(|&x| Rat::from_integer(x.into()))
        .collect();
    let minv_b = linalg::solve(&lattice.matrix, &rhs_b).expect("negative definite");
    let quad = IntegerizedForm::new(&minv, &minv_b);

    let mut e = vec![0i64; dim];
    loop {
        let total: i64 = e.iter().sum();
        let nodes_on_minus2: i64 = e
            .iter()
            .zip(&lattice.self_intersections)
            .filter(|&(_, &si)| si == -2)
            .map(|(&ei, _)| ei)
            .sum();
        let admissible = total >= 3 && (!filters.two_curve_rule || nodes_on_minus2 <= 1);
        if admissible {
            examine_pattern(&quad, &theta1, &theta2, s.order, &e, &mut search);
        }
        // odometer
        let mut i = 0;
        loop {
            if i == dim {
                search.candidates.sort_by(|a, b| {
                    (a.mu1, a.mu2, &a.e).cmp(&(b.mu1, b.mu2, &b.e))
                });
                return search;
            }
            if e[i] < caps[i] {
                e[i] += 1;
                break;
            }
            e[i] = 0;
            i += 1;
        }
    }
}

/// `M^-1` and `M^-1 b` scaled to integer numerators over one common
/// denominator, with an exact-rational fallback when the entries do not
/// fit the fast integer path.
struct IntegerizedForm {
    minv: Vec<Vec<Rat>>,
    minv_b: Vec<Rat>,
    fast: Option<(Vec<Vec<i128>>, Vec<i128>, i128)>,
}

impl IntegerizedForm {
    fn new(minv: &[Vec<Rat>], minv_b: &[Rat]) -> Self {
        use num_bigint::BigInt;
        use num_integer::Integer as _;
        let mut denom = BigInt::from(1);
        for row in minv {
            for x in row {
                denom = denom.lcm(x.denom());
            }
        }
        for x in minv_b {
            denom = denom.lcm(x.denom());
        }
        // headroom for the quadratic sums
        let fits = |x: &BigInt| i128::try_from(x).map_or(false, |v| v.abs() < i128::MAX >> 24);
        let scaled = |x: &Rat| -> Option<i128> {
            let n = (x * Rat::from_integer(denom.clone())).to_integer();
            fits(&n).then(|| i128::try_from(&n).unwrap())
        };
        let fast = (|| {
            if !fits(&denom) {
                return None;
            }
            let d = i128::try_from(&denom).unwrap();
            let mut ns = Vec::with_capacity(minv.len());
            for row in minv {
                ns.push(row.iter().map(scaled).collect::<Option<Vec<_>>>()?);
            }
            let nb = minv_b.iter().map(scaled).collect::<Option<Vec<_>>>()?;
            Some((ns, nb, d))
        })();
        IntegerizedForm {
            minv: minv.to_vec(),
            minv_b: minv_b.to_vec(),
            fast,
        }
    }

    /// Returns `(e^T M^-1 b, e^T M^-1 e)`.
    fn evaluate(&self, e: &[i64]) -> (Rat, Rat) {
        let support: Vec<usize> = (0..e.len()).filter(|&i| e[i] != 0).collect();
        if let Some((ns, nb, d)) = &self.fast {
            let mut s1 = 0i128;
            let mut s2 = 0i128;
            for &i in &support {
                s1 += e[i] as i128 * nb[i];
                for &j in &support {
                    s2 += e[i] as i128 * e[j] as i128 * ns[i][j];
                }
            }
            let to_rat =
                |n: i128| Rat::new(num_bigint::BigInt::from(n), num_bigint::BigInt::from(*d));
            return (to_rat(s1), to_rat(s2));
        }
        let mut etb = Rat::zero();
        let mut ete = Rat::zero();
        for &i in &support {
            let ei = Rat::from_integer(e[i].into());
            etb += &ei * &self.minv_b[i];
            for &j in &support {
                ete += &ei * Rat::from_integer(e[j].into()) * &self.minv[i][j];
            }
        }
        (etb, ete)
    }
}

fn examine_pattern(
    quad: &IntegerizedForm,
    theta1: &Rat,
    theta2: &Rat,
    order: u64,
    e: &[i64],
    search: &mut MinusOneSearch,
) {
    let (etb, ete) = quad.evaluate(e); // e^T M^-1 b, e^T M^-1 e

    // K.E = -1  =>  mu1*Theta2 + mu2*Theta1 = -1 - e^T M^-1 b
    // E^2 = -1  =>  mu1*mu2 = |G| * (-1 - e^T M^-1 e) / 2
    let lin_rhs = -rat_u64(1) - etb;
    let prod_target = rat_u64(order) * (-rat_u64(1) - ete) / rat_u64(2);
    search.visited.push(VisitedSystem {
        e: e.to_vec(),
        lin_rhs: lin_rhs.clone(),
        prod_target: prod_target.clone(),
    });
    if lin_rhs.is_negative() || prod_target.is_negative() || !prod_target.is_integer() {
        return;
    }

    // mu1 <= lin_rhs / Theta2
    let mu1_max = (&lin_rhs / theta2).floor().to_integer();
    let mut mu1 = num_bigint::BigInt::from(0);
    while mu1 <= mu1_max {
        let mu1_u = u64::try_from(&mu1).expect("small");
        let rem = &lin_rhs - rat_u64(mu1_u) * theta2;
        let mu2_rat = rem / theta1;
        if let Some(mu2_u) = crate::rat::as_u64(&mu2_rat) {
            if (mu1_u, mu2_u) != (0, 0)
                && rat_u64(mu1_u) * rat_u64(mu2_u) == prod_target
            {
                search.candidates.push(MinusOneCandidate {
                    mu1: mu1_u,
                    mu2: mu2_u,
                    e: e.to_vec(),
                });
            }
        }
        mu1 += 1;
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    /// No (-1)-curve can exist if the surface is of general type, either
    /// by the exceptional-locus shape or by a complete empty search.
    MinimalIfGeneralType,
    /// The lattice admits candidate (-1)-classes.
    HasLatticeMinusOne,
    Inconclusive,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimalityReport {
    pub verdict: Verdict,
    pub applicability: Applicability,
    pub filters: FilterFlags,
    pub candidates: Vec<MinusOneCandidate>,
}

/// The lattice-level minimality diagnostic. The verdict never claims
/// minimality outright: the exceptional-locus criteria assume the
/// surface is of general type.
///
/// * exceptional curves all (-2)/(-3), or at most two curves of
///   self-intersection -3 or -4 with the rest (-2): minimal if of
///   general type;
/// * otherwise, a complete empty search gives the same verdict;
/// * candidates found: has-lattice-minus-one; else inconclusive.
pub fn minimality_heuristic(s: &SurfaceNumerics, filters: FilterFlags) -> MinimalityReport {
    let lattice = exceptional_lattice(&s.basket);
    let non_two: Vec<i64> = lattice
        .self_intersections
        .iter()
        .copied()
        .filter(|&si| si != -2)
        .collect();
    let locus_ok = non_two.iter().all(|&si| si == -3)
        || (non_two.len() <= 2 && non_two.iter().all(|&si| si == -3 || si == -4));

    let search = search_minus_one(s, filters);
    let verdict = if locus_ok {
        Verdict::MinimalIfGeneralType
    } else if search.candidates.is_empty() {
        if search.applicability == Applicability::Complete {
            Verdict::MinimalIfGeneralType
        } else {
            Verdict::Inconclusive
        }
    } else {
        Verdict::HasLatticeMinusOne
    };
    MinimalityReport {
        verdict,
        applicability: search.applicability,
        filters,
        candidates: search.candidates,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rat_int};
    use crate::signature::Signature;

    fn numerics(basket: &str, t1: &[u64], t2: &[u64], order: u64) -> SurfaceNumerics {
        SurfaceNumerics {
            basket: basket.parse().unwrap(),
            t1: Signature::spherical(t1).unwrap(),
            t2: Signature::spherical(t2).unwrap(),
            order,
        }
    }

    #[test]
    fn lattice_assembly() {
        let lat = exceptional_lattice(&"2x1/2".parse().unwrap());
        assert_eq!(lat.matrix, vec![vec![-2, 0], vec![0, -2]]);
        assert_eq!(lat.b, vec![0, 0]);

        let lat = exceptional_lattice(&"5x1/5".parse().unwrap());
        assert_eq!(lat.matrix.len(), 5);
        assert!(lat.matrix.iter().enumerate().all(|(i, r)| r[i] == -5));
        assert_eq!(lat.b, vec![3; 5]);

        let lat = exceptional_lattice(&"1/6,5/6,2x1/2".parse().unwrap());
        assert_eq!(lat.matrix.len(), 8);
        assert_eq!(lat.b, vec![4, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(lat.self_intersections, vec![-6, -2, -2, -2, -2, -2, -2, -2]);
    }

    #[test]
    fn evaluate_named_classes() {
        // five (-5)-curves, fibre class through all of them
        let lat = exceptional_lattice(&"5x1/5".parse().unwrap());
        let (ke, e2) = evaluate_class(
            &lat,
            5,
            0,
            &[1, 1, 1, 1, 1],
            &rat(2, 5),
            &rat(2, 5),
            25,
        )
        .unwrap();
        assert_eq!(ke, rat_int(-1));
        assert_eq!(e2, rat_int(-1));

        let lat = exceptional_lattice(&"1/6,5/6,2x1/2".parse().unwrap());
        let (ke, e2) = evaluate_class(
            &lat,
            6,
            6,
            &[3, 0, 0, 0, 0, 0, 0, 0],
            &rat(1, 12),
            &rat(1, 12),
            192,
        )
        .unwrap();
        assert_eq!(ke, rat_int(-1));
        assert_eq!(e2, rat(-9, 8));

        let (ke, e2) =
            evaluate_class(&lat, 0, 0, &[0; 8], &rat(1, 12), &rat(1, 12), 192).unwrap();
        assert_eq!(ke, rat_int(0));
        assert_eq!(e2, rat_int(0));

        assert!(evaluate_class(&lat, 0, 0, &[0; 3], &rat(1, 12), &rat(1, 12), 192).is_err());
    }

    #[test]
    fn fake_godeaux_systems_are_insoluble() {
        // basket of the K^2 = 0 rows 1-3; the search must visit the three
        // admissible patterns and find nothing
        let s = numerics("1/6,5/6,2x1/2", &[2, 4, 6], &[2, 4, 6], 192);
        let search = search_minus_one(&s, FilterFlags::default());
        assert!(search.candidates.is_empty());
        assert_eq!(search.applicability, Applicability::Complete);

        let find = |e: &[i64]| -> &VisitedSystem {
            search
                .visited
                .iter()
                .find(|v| v.e == e)
                .expect("pattern visited")
        };
        // e = (3,0,...): mu1 + mu2 = 12, mu1*mu2 = 48
        let v = find(&[3, 0, 0, 0, 0, 0, 0, 0]);
        assert_eq!(&v.lin_rhs / rat(1, 12), rat_int(12));
        assert_eq!(v.prod_target, rat_int(48));
        // e = (2,0,...,1) on either node: mu1 + mu2 = 4, mu1*mu2 = 16
        for e in [
            [2, 0, 0, 0, 0, 0, 0, 1],
            [2, 0, 0, 0, 0, 0, 1, 0],
        ] {
            let v = find(&e);
            assert_eq!(&v.lin_rhs / rat(1, 12), rat_int(4));
            assert_eq!(v.prod_target, rat_int(16));
        }
    }

    #[test]
    fn godeaux_candidates_found() {
        let s = numerics("5x1/5", &[5, 5, 5], &[5, 5, 5], 25);
        let search = search_minus_one(&s, FilterFlags::default());
        let fibre = MinusOneCandidate {
            mu1: 5,
            mu2: 0,
            e: vec![1, 1, 1, 1, 1],
        };
        let fibre2 = MinusOneCandidate {
            mu1: 0,
            mu2: 5,
            e: vec![1, 1, 1, 1, 1],
        };
        assert!(search.candidates.contains(&fibre));
        assert!(search.candidates.contains(&fibre2));

        // every candidate reproduces (-1, -1) exactly
        let lat = exceptional_lattice(&s.basket);
        for c in &search.candidates {
            let (ke, e2) =
                evaluate_class(&lat, c.mu1, c.mu2, &c.e, &s.theta1(), &s.theta2(), s.order)
                    .unwrap();
            assert_eq!(ke, rat_int(-1));
            assert_eq!(e2, rat_int(-1));
        }
    }

    #[test]
    fn empty_basket_has_no_candidates() {
        let s = numerics("{}", &[2, 3, 7], &[2, 3, 7], 168);
        let search = search_minus_one(&s, FilterFlags::default());
        assert!(search.candidates.is_empty());
        assert!(search.visited.is_empty());
    }

    #[test]
    fn verdicts() {
        // two (-4)-curves plus (-2)-strings: minimal by the locus shape
        let s = numerics("2x1/4,2x3/4", &[2, 2, 2, 4], &[2, 2, 2, 4], 16);
        let r = minimality_heuristic(&s, FilterFlags::default());
        assert_eq!(r.verdict, Verdict::MinimalIfGeneralType);

        // all curves (-2)/(-3)
        let s = numerics("4x2/5", &[2, 5, 5], &[2, 5, 5], 80);
        let r = minimality_heuristic(&s, FilterFlags::default());
        assert_eq!(r.verdict, Verdict::MinimalIfGeneralType);

        let s = numerics("5x1/5", &[5, 5, 5], &[5, 5, 5], 25);
        let r = minimality_heuristic(&s, FilterFlags::default());
        assert_eq!(r.verdict, Verdict::HasLatticeMinusOne);

        // complete and empty
        let s = numerics("1/6,5/6,2x1/2", &[2, 4, 6], &[2, 4, 6], 192);
        let r = minimality_heuristic(&s, FilterFlags::default());
        assert_eq!(r.verdict, Verdict::MinimalIfGeneralType);
        assert_eq!(r.applicability, Applicability::Complete);
    }
}
