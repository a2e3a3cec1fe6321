//! The rational parameter space of weight functions: hyperplane
//! arrangements on the class space, facet sign vectors, the
//! specialization orders built from asymptotic weight regimes, and the
//! ball-scale semicontinuity checks.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{GammaHom, OrderedGroupSpec};
use crate::geometry::{Rat, TypeGeometry};
use crate::group::Ball;
use crate::hecke::{cell_partition, kl_table, CellPartition, Flavor, KlContext};
use crate::lowest::{sigma_cells, SigmaCells};

/// A rational hyperplane through the origin of the class space, stored
/// with a primitive integer normal whose first non-zero entry is
/// positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RationalHyperplane {
    pub normal: Vec<i64>,
}

impl RationalHyperplane {
    pub fn from_rational(coeffs: &[Rat]) -> RationalHyperplane {
        let lcm = coeffs
            .iter()
            .map(|c| *c.denom())
            .fold(1i64, |acc, d| acc / gcd(acc, d) * d);
        let mut v: Vec<i64> = coeffs.iter().map(|c| (*c * lcm).to_integer()).collect();
        let g = v.iter().fold(0i64, |acc, &x| gcd(acc, x));
        if g > 1 {
            for x in &mut v {
                *x /= g;
            }
        }
        if let Some(first) = v.iter().find(|&&x| x != 0) {
            if *first < 0 {
                for x in &mut v {
                    *x = -*x;
                }
            }
        }
        RationalHyperplane { normal: v }
    }

    pub fn eval(&self, point: &[Rat]) -> Rat {
        self.normal
            .iter()
            .zip(point)
            .map(|(&n, &x)| Rat::from_integer(n) * x)
            .sum()
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// The six hyperplanes for the two-class types (coordinates (s, t)).
pub fn arrangement_bfg(m1: Rat, m2: Rat) -> Vec<RationalHyperplane> {
    let one = Rat::from_integer(1);
    let zero = Rat::from_integer(0);
    let mut out: Vec<RationalHyperplane> = [
        vec![one, m1],
        vec![one, -m1],
        vec![one, m2],
        vec![one, -m2],
        vec![one, zero],
        vec![zero, one],
    ]
    .iter()
    .map(|c| RationalHyperplane::from_rational(c))
    .collect();
    out.sort();
    out.dedup();
    out
}

/// The listed hyperplanes for the three-class chain (coordinates
/// (t, s, t')), without the sign-flip closure.
pub fn arrangement_c(m: &[Rat; 6]) -> Vec<RationalHyperplane> {
    let one = Rat::from_integer(1);
    let zero = Rat::from_integer(0);
    let mut out: Vec<RationalHyperplane> = [
        vec![zero, one, zero],
        vec![one, zero, zero],
        vec![zero, zero, one],
        vec![one, zero, -one],
        vec![one, -m[0], zero],
        vec![zero, -m[1], one],
        vec![one, -m[2], -m[2]],
        vec![-m[3], -m[3], one],
        vec![one, m[4], -one],
        vec![one, -m[4], -one],
        vec![one, -m[5], one],
    ]
    .iter()
    .map(|c| RationalHyperplane::from_rational(c))
    .collect();
    out.sort();
    out.dedup();
    out
}

/// Closure of an arrangement under the per-coordinate sign flips.
pub fn tau_closure(arr: &[RationalHyperplane]) -> Vec<RationalHyperplane> {
    let m = arr.first().map(|h| h.normal.len()).unwrap_or(0);
    let mut out: HashSet<RationalHyperplane> = HashSet::new();
    for h in arr {
        for mask in 0u32..(1 << m) {
            let coeffs: Vec<Rat> = h
                .normal
                .iter()
                .enumerate()
                .map(|(i, &x)| {
                    let s = if mask & (1 << i) != 0 { -1 } else { 1 };
                    Rat::from_integer(s * x)
                })
                .collect();
            out.insert(RationalHyperplane::from_rational(&coeffs));
        }
    }
    let mut v: Vec<RationalHyperplane> = out.into_iter().collect();
    v.sort();
    v
}

/// Sign vector of a rational weight point against an arrangement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetSignVector {
    pub signs: Vec<i8>,
}

pub fn facet_of(point: &[Rat], arr: &[RationalHyperplane]) -> FacetSignVector {
    let signs = arr
        .iter()
        .map(|h| {
            let v = h.eval(point);
            if v > Rat::from_integer(0) {
                1
            } else if v < Rat::from_integer(0) {
                -1
            } else {
                0
            }
        })
        .collect();
    FacetSignVector { signs }
}

impl FacetSignVector {
    pub fn is_chamber(&self) -> bool {
        self.signs.iter().all(|&s| s != 0)
    }
}

/// Generator classes pinned to zero on the facet: those whose axis
/// hyperplane carries sign zero.
pub fn facet_zero_classes(
    point: &[Rat],
    arr: &[RationalHyperplane],
    n_classes: usize,
) -> Vec<usize> {
    let f = facet_of(point, arr);
    (0..n_classes)
        .filter(|&c| {
            arr.iter().zip(&f.signs).any(|(h, &s)| {
                s == 0
                    && h.normal.iter().enumerate().all(|(i, &x)| {
                        if i == c {
                            x != 0
                        } else {
                            x == 0
                        }
                    })
            })
        })
        .collect()
}

/// Identifier of a specialization-order construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClaimOrder {
    /// Two classes, large (s): lexicographic (s, t).
    BfgLargeS,
    /// Two classes, large (t): lexicographic (t, s).
    BfgLargeT,
    /// Three classes, large (t): threshold form on (s, t').
    CLargeT,
    /// Three classes, large (s): threshold form on (t, t').
    CLargeS,
    /// Three classes, large split pair with a gap: (t+t', t, s).
    CPairGap,
    /// Three classes, large pair, possibly equal: threshold form on
    /// (t - t', s) with a positive middle coefficient.
    CPairClose,
}

impl ClaimOrder {
    pub fn parse(text: &str) -> Result<ClaimOrder> {
        match text {
            "8.3" | "bfg-s" => Ok(ClaimOrder::BfgLargeS),
            "8.3t" | "bfg-t" => Ok(ClaimOrder::BfgLargeT),
            "8.4" => Ok(ClaimOrder::CLargeT),
            "8.5" => Ok(ClaimOrder::CLargeS),
            "8.6" => Ok(ClaimOrder::CPairGap),
            "8.7" => Ok(ClaimOrder::CPairClose),
            _ => Err(Error::Config(format!("unknown order id {text}"))),
        }
    }
}

/// The threshold grid: all fractions `±k/j` with `1 ≤ j, k ≤ n`.
fn threshold_grid(n: i64) -> Vec<Rat> {
    let mut set: HashSet<Rat> = HashSet::new();
    for j in 1..=n {
        for k in 1..=n {
            set.insert(Rat::new(k, j));
            set.insert(Rat::new(-k, j));
        }
    }
    let mut v: Vec<Rat> = set.into_iter().collect();
    v.sort();
    v
}

/// Largest grid fraction `r` (or zero) with `a ≥ r·b`, as a reduced
/// non-negative pair; `b = 0` maxes out the grid.
pub fn threshold_pair(a: i64, b: i64, n0: i64) -> (i64, i64) {
    assert!(a >= 0 && b >= 0);
    if b == 0 {
        return (n0, 1);
    }
    let target = Rat::new(a, b);
    let mut best = Rat::from_integer(0);
    for r in threshold_grid(n0) {
        if r <= target && r > best {
            best = r;
        }
    }
    (*best.numer(), *best.denom())
}

/// Exhaustive implication check on the grid: `p·j + q·k > 0` forces
/// `a·j + b·k > 0` for all `|j|, |k| ≤ n0`.
pub fn check_threshold_implication(p: i64, q: i64, a: i64, b: i64, n0: i64) -> bool {
    for j in -n0..=n0 {
        for k in -n0..=n0 {
            if p * j + q * k > 0 && a * j + b * k <= 0 {
                return false;
            }
        }
    }
    true
}

fn primitive_kernel_form(f1: &[i64], f2: &[i64]) -> Vec<i64> {
    // Rank-1 kernel of two independent forms on Z^3; the generator also
    // serves as the completing form (its self-pairing is positive).
    let cross = |a: &[i64], b: &[i64]| {
        vec![
            a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0],
        ]
    };
    let mut v = cross(f1, f2);
    let g = v.iter().fold(0i64, |acc, &x| gcd(acc, x));
    if g > 1 {
        for x in &mut v {
            *x /= g;
        }
    }
    v
}

/// Build the ordered-group presentation of a claim order for a target
/// weight, after validating the claim's inequality hypotheses.
pub fn order_from_claim(
    claim: ClaimOrder,
    target: &[i64],
    n0: i64,
) -> Result<OrderedGroupSpec> {
    let fail = |msg: &str| Err(Error::ClaimHypothesis(msg.into()));
    match claim {
        ClaimOrder::BfgLargeS => {
            // Coordinates (s, t): large s.
            let (ls, lt) = (target[0], target[1]);
            if ls <= n0 * lt {
                return fail("needs L(s) > n0 * L(t)");
            }
            Ok(OrderedGroupSpec::new(2, vec![vec![1, 0], vec![0, 1]])?
                .with_plus_mask(vec![true, false]))
        }
        ClaimOrder::BfgLargeT => {
            let (ls, lt) = (target[0], target[1]);
            if lt <= n0 * ls {
                return fail("needs L(t) > n0 * L(s)");
            }
            Ok(OrderedGroupSpec::new(2, vec![vec![0, 1], vec![1, 0]])?
                .with_plus_mask(vec![false, true]))
        }
        ClaimOrder::CLargeT => {
            // Coordinates (t, s, t').
            let (lt, ls, lt2) = (target[0], target[1], target[2]);
            if lt <= n0 * ls + n0 * lt2 {
                return fail("needs L(t) > n0 * (L(s) + L(t'))");
            }
            let (b, c) = threshold_pair(ls, lt2, n0);
            let phi2 = vec![0, b, c];
            let phi3 = primitive_kernel_form(&[1, 0, 0], &phi2);
            let phi3 = fix_sign(phi3);
            Ok(
                OrderedGroupSpec::new(3, vec![vec![1, 0, 0], phi2, phi3])?
                    .with_plus_mask(vec![true, false, false]),
            )
        }
        ClaimOrder::CLargeS => {
            let (lt, ls, lt2) = (target[0], target[1], target[2]);
            if ls <= n0 * lt + n0 * lt2 {
                return fail("needs L(s) > n0 * (L(t) + L(t'))");
            }
            let (a, c) = threshold_pair(lt, lt2, n0);
            let phi2 = vec![a, 0, c];
            let phi3 = fix_sign(primitive_kernel_form(&[0, 1, 0], &phi2));
            Ok(
                OrderedGroupSpec::new(3, vec![vec![0, 1, 0], phi2, phi3])?
                    .with_plus_mask(vec![false, true, false]),
            )
        }
        ClaimOrder::CPairGap => {
            let (lt, ls, lt2) = (target[0], target[1], target[2]);
            if lt <= n0 * n0 * ls || lt2 <= n0 * n0 * ls || lt - lt2 <= n0 * ls {
                return fail("needs L(t), L(t') > n0^2 L(s) and L(t) - L(t') > n0 L(s)");
            }
            Ok(OrderedGroupSpec::new(
                3,
                vec![vec![1, 0, 1], vec![1, 0, 0], vec![0, 1, 0]],
            )?
            .with_plus_mask(vec![true, false, true]))
        }
        ClaimOrder::CPairClose => {
            let (lt, ls, lt2) = (target[0], target[1], target[2]);
            if lt < lt2 {
                return fail("needs L(t) >= L(t')");
            }
            if lt <= n0 * n0 * ls || lt2 <= n0 * n0 * ls {
                return fail("needs L(t), L(t') > n0^2 L(s)");
            }
            // phi2 on the kernel {(i, j, -i)}: d·i + b·j with b > 0.
            let (d, b) = threshold_pair(lt - lt2, ls, n0);
            let (d, b) = if b == 0 { (d, 1) } else { (d, b) };
            let phi2 = vec![d, b, 0];
            let phi3 = fix_sign(primitive_kernel_form(&[1, 0, 1], &phi2));
            Ok(
                OrderedGroupSpec::new(3, vec![vec![1, 0, 1], phi2, phi3])?
                    .with_plus_mask(vec![true, false, true]),
            )
        }
    }
}

fn fix_sign(mut v: Vec<i64>) -> Vec<i64> {
    // The completing form must be positive on the kernel generator
    // itself; self-pairing is, so either sign works as long as it is
    // applied consistently. Normalize the leading entry positive on the
    // generator: evaluate on itself.
    let self_val: i64 = v.iter().map(|&x| x * x).sum();
    debug_assert!(self_val > 0);
    if v.iter().find(|&&x| x != 0).copied().unwrap_or(1) < 0 {
        for x in &mut v {
            *x = -*x;
        }
    }
    v
}

/// The specialization homomorphism determined by integer target weights.
pub fn specialization_hom(target: &[i64], target_spec: &OrderedGroupSpec) -> GammaHom {
    GammaHom::new(
        target
            .iter()
            .map(|&w| target_spec.element(vec![w]).unwrap())
            .collect(),
    )
}

/// Per-piece outcome of a semicontinuity comparison.
#[derive(Debug, Serialize)]
pub struct PieceReport {
    pub sigma: usize,
    pub size: usize,
    pub chamber_classes: Vec<usize>,
    pub ok: bool,
}

#[derive(Debug, Serialize)]
pub struct SemicontinuityReport {
    pub ball_n: u64,
    pub pieces: Vec<PieceReport>,
    pub pieces_ok: bool,
    pub cmin_two_sided_ok: bool,
    pub truncated: bool,
}

/// Compare the quarter pieces of a degenerate weight against the cell
/// classes of a nearby positive weight on a shared ball: each piece must
/// be a union of left classes, and the whole lowest cell a union of
/// two-sided classes.
pub fn semicontinuity_check(
    geom: &TypeGeometry,
    facet_weights: &[i64],
    chamber_weights: &[i64],
    radius: u64,
) -> Result<SemicontinuityReport> {
    let facet_l = geom.int_weights(facet_weights)?;
    let chamber_l = geom.int_weights(chamber_weights)?;
    if !chamber_l.is_positive() {
        return Err(Error::InvalidWeight(
            "comparison weight must be positive".into(),
        ));
    }
    let ctx = KlContext::new(geom, &chamber_l, radius)?;
    let table = kl_table(&ctx);
    let left = cell_partition(&ctx, &table, Flavor::Left);
    let two = cell_partition(&ctx, &table, Flavor::TwoSided);
    let cells: SigmaCells = sigma_cells(geom, &facet_l, &ctx.ball)?;
    let report = compare_pieces(&ctx.ball, &cells, &left, &two);
    Ok(report)
}

pub fn compare_pieces(
    ball: &Ball,
    cells: &SigmaCells,
    left: &CellPartition,
    two: &CellPartition,
) -> SemicontinuityReport {
    let mut pieces = Vec::new();
    let mut pieces_ok = true;
    for (qi, members) in cells.members.iter().enumerate() {
        let member_set: HashSet<usize> = members.iter().copied().collect();
        let mut classes: Vec<usize> = members.iter().map(|&m| left.class_of[m]).collect();
        classes.sort();
        classes.dedup();
        // Union property: every touched class is fully inside.
        let ok = classes.iter().all(|&c| {
            left.classes[c].iter().all(|m| member_set.contains(m))
        });
        if !ok {
            pieces_ok = false;
        }
        pieces.push(PieceReport {
            sigma: qi,
            size: members.len(),
            chamber_classes: classes,
            ok,
        });
    }
    let cmin_set: HashSet<usize> = cells.members.iter().flatten().copied().collect();
    let mut two_classes: Vec<usize> = cmin_set.iter().map(|&m| two.class_of[m]).collect();
    two_classes.sort();
    two_classes.dedup();
    let cmin_two_sided_ok = two_classes.iter().all(|&c| {
        two.classes[c].iter().all(|m| cmin_set.contains(m))
    });
    let _ = ball;
    SemicontinuityReport {
        ball_n: ball.radius,
        pieces,
        pieces_ok,
        cmin_two_sided_ok,
        truncated: left.truncated || two.truncated,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::rat;

    #[test]
    fn bfg_arrangement_merges_coincidences() {
        let arr = arrangement_bfg(rat(1), rat(1));
        assert_eq!(arr.len(), 4);
        let arr = arrangement_bfg(rat(3), Rat::new(1, 2));
        assert_eq!(arr.len(), 6);
    }

    #[test]
    fn c_arrangement_contents() {
        let m = [rat(1), rat(1), rat(1), rat(1), rat(1), rat(1)];
        let arr = arrangement_c(&m);
        let has = |n: &[i64]| arr.iter().any(|h| h.normal == n);
        assert!(has(&[0, 1, 0]));
        assert!(has(&[1, 0, 0]));
        assert!(has(&[0, 0, 1]));
        assert!(has(&[1, 0, -1]));
        // Sign-flip closure is a fixed point of itself.
        let closed = tau_closure(&arr);
        let again = tau_closure(&closed);
        assert_eq!(closed, again);
    }

    #[test]
    fn facet_signs() {
        let arr = arrangement_bfg(rat(3), Rat::new(1, 2));
        // L = (5, 1) in (s, t): on the positive side of s - 3t.
        let f = facet_of(&[rat(5), rat(1)], &arr);
        let idx = arr
            .iter()
            .position(|h| h.normal == vec![1, -3])
            .unwrap();
        assert_eq!(f.signs[idx], 1);
        // A point on the t-axis hyperplane gets a zero.
        let f = facet_of(&[rat(5), rat(0)], &arr);
        let idx = arr.iter().position(|h| h.normal == vec![0, 1]).unwrap();
        assert_eq!(f.signs[idx], 0);
        assert!(!f.is_chamber());
    }

    #[test]
    fn facet_zero_class_detection() {
        let arr = arrangement_c(&[rat(1); 6]);
        let zeros = facet_zero_classes(&[rat(2), rat(0), rat(1)], &arr, 3);
        assert_eq!(zeros, vec![1]);
    }

    #[test]
    fn threshold_search() {
        // a = 1, b = 1: the largest grid fraction at most 1 is 1.
        assert_eq!(threshold_pair(1, 1, 8), (1, 1));
        // a = 0: zero.
        assert_eq!(threshold_pair(0, 5, 8), (0, 1));
        // b = 0: the top of the grid.
        assert_eq!(threshold_pair(3, 0, 8), (8, 1));
        let (p, q) = threshold_pair(21, 13, 5);
        assert!(Rat::new(p, q) <= Rat::new(21, 13));
        assert!(check_threshold_implication(p, q, 21, 13, 5));
    }

    #[test]
    fn claim_orders_admissible() {
        let n0 = 8;
        let spec = order_from_claim(ClaimOrder::CLargeT, &[2 * n0 + 1, 1, 1], n0).unwrap();
        assert!(spec.is_plus_admissible());
        let spec = order_from_claim(ClaimOrder::CPairGap, &[112, 1, 101], 10).unwrap();
        assert!(spec.is_plus_admissible());
        let spec = order_from_claim(ClaimOrder::CPairClose, &[101, 1, 101], 10).unwrap();
        assert!(spec.is_plus_admissible());
        // The close-pair order puts (1, j0, -1) on the positive side for
        // some j0 > 0.
        let g = spec.element(vec![1, 1, -1]).unwrap();
        assert!(spec.is_positive(&g));
        assert!(order_from_claim(ClaimOrder::CPairGap, &[5, 1, 4], 10).is_err());
    }

    #[test]
    fn claim83_hypothesis() {
        assert!(order_from_claim(ClaimOrder::BfgLargeS, &[9, 1], 8).is_ok());
        assert!(order_from_claim(ClaimOrder::BfgLargeS, &[8, 1], 8).is_err());
    }
}
