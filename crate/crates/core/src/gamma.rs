//! Totally ordered abelian weight groups `Γ ≅ ℤ^m / K`, their group
//! algebra of integer Laurent combinations `v^γ`, weight functions on
//! generator classes, and specialization homomorphisms between weight
//! groups.
//!
//! An order is presented by a sequence of integer linear forms
//! `(φ_1, …, φ_d)`: an element is positive when the first form that does
//! not vanish on it is positive. The kernel lattice `K` (where all forms
//! vanish) is quotiented away by Hermite-normal-form canonicalization, so
//! equality of canonical coordinate vectors is equality in `Γ`.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Presentation of a totally ordered abelian group on `ℤ^rank`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedGroupSpec {
    pub rank: usize,
    /// Integer linear forms, applied in order; the first non-zero value
    /// decides the sign of an element.
    pub forms: Vec<Vec<i64>>,
    /// HNF basis of the lattice on which every form vanishes.
    pub kernel_basis: Vec<Vec<i64>>,
    /// For specs over generator classes: which classes carry positive
    /// weight (drives the `+`/`°` coordinate projections).
    #[serde(default)]
    pub plus_mask: Option<Vec<bool>>,
}

fn dot(form: &[i64], v: &[i64]) -> i64 {
    form.iter().zip(v).map(|(a, b)| a * b).sum()
}

/// Row-style Hermite normal form of an integer matrix (rows span the
/// same lattice). Pivots positive, entries above a pivot reduced into
/// `[0, pivot)`.
fn hnf(rows: &mut Vec<Vec<i64>>) {
    if rows.is_empty() {
        return;
    }
    let cols = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..cols {
        if pivot_row == rows.len() {
            break;
        }
        // Euclidean elimination below pivot_row in this column.
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..rows.len() {
                if rows[r][col] != 0 {
                    best = match best {
                        Some(b) if rows[b][col].abs() <= rows[r][col].abs() => Some(b),
                        _ => Some(r),
                    };
                }
            }
            let Some(b) = best else { break };
            rows.swap(pivot_row, b);
            let p = rows[pivot_row][col];
            let mut cleared = true;
            for r in pivot_row + 1..rows.len() {
                let q = rows[r][col].div_euclid(p);
                if q != 0 {
                    for c in 0..cols {
                        rows[r][c] -= q * rows[pivot_row][c];
                    }
                }
                if rows[r][col] != 0 {
                    cleared = false;
                }
            }
            if cleared {
                break;
            }
        }
        if rows[pivot_row][col] == 0 {
            continue;
        }
        if rows[pivot_row][col] < 0 {
            for c in 0..cols {
                rows[pivot_row][c] = -rows[pivot_row][c];
            }
        }
        let p = rows[pivot_row][col];
        for r in 0..pivot_row {
            let q = rows[r][col].div_euclid(p);
            if q != 0 {
                for c in 0..cols {
                    rows[r][c] -= q * rows[pivot_row][c];
                }
            }
        }
        pivot_row += 1;
    }
    rows.retain(|r| r.iter().any(|&x| x != 0));
}

impl OrderedGroupSpec {
    /// Build a spec from integer forms; checks each form is non-zero on
    /// the joint kernel of the earlier ones and computes the kernel
    /// lattice of the full sequence.
    pub fn new(rank: usize, forms: Vec<Vec<i64>>) -> Result<Self> {
        for f in &forms {
            if f.len() != rank {
                return Err(Error::DimensionMismatch {
                    expected: rank,
                    got: f.len(),
                });
            }
        }
        for k in 0..forms.len() {
            let prefix = &forms[..k];
            let ker = integer_kernel(prefix, rank);
            let nonzero = ker.iter().any(|v| dot(&forms[k], v) != 0)
                || (prefix.is_empty() && forms[k].iter().any(|&x| x != 0));
            if !nonzero {
                return Err(Error::InvalidWeight(format!(
                    "form {k} vanishes on the kernel of the previous forms"
                )));
            }
        }
        let mut kernel_basis = integer_kernel(&forms, rank);
        hnf(&mut kernel_basis);
        Ok(OrderedGroupSpec {
            rank,
            forms,
            kernel_basis,
            plus_mask: None,
        })
    }

    pub fn with_plus_mask(mut self, mask: Vec<bool>) -> Self {
        assert_eq!(mask.len(), self.rank);
        self.plus_mask = Some(mask);
        self
    }

    /// The rank-1 group `ℤ` with its usual order.
    pub fn integers() -> Self {
        OrderedGroupSpec::new(1, vec![vec![1]]).unwrap()
    }

    /// Lexicographic order on `ℤ^rank`.
    pub fn lex(rank: usize) -> Self {
        let forms = (0..rank)
            .map(|i| {
                let mut f = vec![0; rank];
                f[i] = 1;
                f
            })
            .collect();
        OrderedGroupSpec::new(rank, forms).unwrap()
    }

    /// Canonical representative modulo the kernel lattice.
    fn canonicalize(&self, mut coords: Vec<i64>) -> Vec<i64> {
        for row in &self.kernel_basis {
            let col = row.iter().position(|&x| x != 0).unwrap();
            let p = row[col];
            let q = coords[col].div_euclid(p);
            if q != 0 {
                for c in 0..self.rank {
                    coords[c] -= q * row[c];
                }
            }
        }
        coords
    }

    pub fn element(&self, coords: Vec<i64>) -> Result<GammaElement> {
        if coords.len() != self.rank {
            return Err(Error::DimensionMismatch {
                expected: self.rank,
                got: coords.len(),
            });
        }
        Ok(GammaElement {
            coords: self.canonicalize(coords),
        })
    }

    pub fn zero(&self) -> GammaElement {
        GammaElement {
            coords: vec![0; self.rank],
        }
    }

    pub fn basis(&self, i: usize) -> GammaElement {
        let mut coords = vec![0; self.rank];
        coords[i] = 1;
        GammaElement {
            coords: self.canonicalize(coords),
        }
    }

    /// Sign of the first form that does not vanish on `v`.
    fn sign(&self, v: &[i64]) -> Ordering {
        for f in &self.forms {
            match dot(f, v).cmp(&0) {
                Ordering::Equal => continue,
                s => return s,
            }
        }
        Ordering::Equal
    }

    pub fn compare(&self, a: &GammaElement, b: &GammaElement) -> Ordering {
        let diff: Vec<i64> = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x - y)
            .collect();
        self.sign(&diff)
    }

    pub fn is_positive(&self, a: &GammaElement) -> bool {
        self.sign(&a.coords) == Ordering::Greater
    }

    pub fn add(&self, a: &GammaElement, b: &GammaElement) -> GammaElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x + y)
            .collect();
        GammaElement {
            coords: self.canonicalize(coords),
        }
    }

    pub fn sub(&self, a: &GammaElement, b: &GammaElement) -> GammaElement {
        let coords = a
            .coords
            .iter()
            .zip(&b.coords)
            .map(|(x, y)| x - y)
            .collect();
        GammaElement {
            coords: self.canonicalize(coords),
        }
    }

    pub fn neg(&self, a: &GammaElement) -> GammaElement {
        let coords = a.coords.iter().map(|x| -x).collect();
        GammaElement {
            coords: self.canonicalize(coords),
        }
    }

    pub fn scale(&self, n: i64, a: &GammaElement) -> GammaElement {
        let coords = a.coords.iter().map(|x| n * x).collect();
        GammaElement {
            coords: self.canonicalize(coords),
        }
    }

    /// Zero the coordinates of zero-weight classes (`+`-projection).
    pub fn project_plus(&self, a: &GammaElement) -> GammaElement {
        let mask = self
            .plus_mask
            .as_ref()
            .expect("spec carries no class partition");
        let coords = a
            .coords
            .iter()
            .zip(mask)
            .map(|(x, keep)| if *keep { *x } else { 0 })
            .collect();
        GammaElement {
            coords: self.canonicalize(coords),
        }
    }

    /// Zero the coordinates of positive-weight classes (`°`-projection).
    pub fn project_circ(&self, a: &GammaElement) -> GammaElement {
        let mask = self
            .plus_mask
            .as_ref()
            .expect("spec carries no class partition");
        let coords = a
            .coords
            .iter()
            .zip(mask)
            .map(|(x, keep)| if *keep { 0 } else { *x })
            .collect();
        GammaElement {
            coords: self.canonicalize(coords),
        }
    }

    /// A spec over generator classes is admissible when its first form
    /// is the sum of the duals of the positive classes and every class
    /// is strictly positive for the order.
    pub fn is_plus_admissible(&self) -> bool {
        let Some(mask) = &self.plus_mask else {
            return false;
        };
        let expected: Vec<i64> = mask.iter().map(|&p| if p { 1 } else { 0 }).collect();
        if self.forms.first() != Some(&expected) {
            return false;
        }
        (0..self.rank).all(|i| self.is_positive(&self.basis(i)))
    }
}

/// An exponent in the weight group, stored canonically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GammaElement {
    pub coords: Vec<i64>,
}

impl GammaElement {
    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
}

/// Degree of a Laurent element; the zero element has no exponents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Degree {
    MinusInfinity,
    Finite(GammaElement),
}

impl Degree {
    pub fn finite(self) -> Option<GammaElement> {
        match self {
            Degree::MinusInfinity => None,
            Degree::Finite(g) => Some(g),
        }
    }
}

/// Finitely supported integer combination of `v^γ`, kept sorted by
/// strictly decreasing exponent so the degree is the first term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LaurentElement {
    pub terms: Vec<(GammaElement, i64)>,
}

impl LaurentElement {
    pub fn zero() -> Self {
        LaurentElement { terms: Vec::new() }
    }

    pub fn one(spec: &OrderedGroupSpec) -> Self {
        LaurentElement {
            terms: vec![(spec.zero(), 1)],
        }
    }

    pub fn monomial(exp: GammaElement, coeff: i64) -> Self {
        if coeff == 0 {
            return Self::zero();
        }
        LaurentElement {
            terms: vec![(exp, coeff)],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn normalize(mut terms: Vec<(GammaElement, i64)>, spec: &OrderedGroupSpec) -> Self {
        terms.sort_by(|a, b| spec.compare(&b.0, &a.0).then(b.0.coords.cmp(&a.0.coords)));
        let mut out: Vec<(GammaElement, i64)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| *c != 0);
        LaurentElement { terms: out }
    }

    pub fn add(&self, other: &Self, spec: &OrderedGroupSpec) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self::normalize(terms, spec)
    }

    pub fn sub(&self, other: &Self, spec: &OrderedGroupSpec) -> Self {
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().map(|(e, c)| (e.clone(), -c)));
        Self::normalize(terms, spec)
    }

    pub fn neg(&self) -> Self {
        LaurentElement {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, n: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        LaurentElement {
            terms: self.terms.iter().map(|(e, c)| (e.clone(), n * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self, spec: &OrderedGroupSpec) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                terms.push((spec.add(ea, eb), ca * cb));
            }
        }
        Self::normalize(terms, spec)
    }

    /// Multiply by the monomial `c · v^γ`.
    pub fn mul_monomial(&self, exp: &GammaElement, coeff: i64, spec: &OrderedGroupSpec) -> Self {
        if coeff == 0 {
            return Self::zero();
        }
        LaurentElement {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (spec.add(e, exp), c * coeff))
                .collect(),
        }
    }

    /// `v^γ ↦ v^{-γ}` on every term.
    pub fn bar(&self, spec: &OrderedGroupSpec) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (spec.neg(e), *c))
            .collect();
        Self::normalize(terms, spec)
    }

    pub fn deg(&self, _spec: &OrderedGroupSpec) -> Degree {
        match self.terms.first() {
            None => Degree::MinusInfinity,
            Some((e, _)) => Degree::Finite(e.clone()),
        }
    }

    /// `deg⁺`: the `+`-projection of the degree.
    pub fn deg_plus(&self, spec: &OrderedGroupSpec) -> Degree {
        match self.deg(spec) {
            Degree::MinusInfinity => Degree::MinusInfinity,
            Degree::Finite(g) => Degree::Finite(spec.project_plus(&g)),
        }
    }

    pub fn coeff(&self, exp: &GammaElement) -> i64 {
        self.terms
            .iter()
            .find(|(e, _)| e == exp)
            .map(|(_, c)| *c)
            .unwrap_or(0)
    }

    /// True iff every exponent is strictly negative.
    pub fn is_strictly_negative(&self, spec: &OrderedGroupSpec) -> bool {
        match self.deg(spec) {
            Degree::MinusInfinity => true,
            Degree::Finite(g) => spec.compare(&g, &spec.zero()) == Ordering::Less,
        }
    }

    /// Part with exponents `≥ 0` (resp. `> 0`, `< 0`).
    pub fn part_nonneg(&self, spec: &OrderedGroupSpec) -> Self {
        LaurentElement {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| spec.compare(e, &spec.zero()) != Ordering::Less)
                .cloned()
                .collect(),
        }
    }

    pub fn part_pos(&self, spec: &OrderedGroupSpec) -> Self {
        LaurentElement {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| spec.compare(e, &spec.zero()) == Ordering::Greater)
                .cloned()
                .collect(),
        }
    }

    pub fn part_neg(&self, spec: &OrderedGroupSpec) -> Self {
        LaurentElement {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| spec.compare(e, &spec.zero()) == Ordering::Less)
                .cloned()
                .collect(),
        }
    }

    /// The unique bar-invariant element congruent to `self` modulo the
    /// strictly negative part of the algebra.
    pub fn symmetrize(&self, spec: &OrderedGroupSpec) -> Self {
        let nonneg = self.part_nonneg(spec);
        let pos_bar = self.part_pos(spec).bar(spec);
        nonneg.add(&pos_bar, spec)
    }
}

/// Sufficient negativity test: if the first form is already negative on
/// the `+`-projection of the degree, every exponent is negative.
pub fn neg_shortcut_phi1(a: &LaurentElement, spec: &OrderedGroupSpec) -> bool {
    match a.deg_plus(spec) {
        Degree::MinusInfinity => true,
        Degree::Finite(g) => dot(&spec.forms[0], &g.coords) < 0,
    }
}

/// Negativity shortcut available when the positive classes are the two
/// extremal ones of a three-class chain and `(-1, k, 1) < 0` for all
/// `k > 0`: then `deg⁺(a) ≤ (-1, 0, 1)` already forces `a < 0`.
pub fn neg_shortcut_case3(a: &LaurentElement, spec: &OrderedGroupSpec) -> bool {
    assert_eq!(spec.rank, 3);
    let threshold = GammaElement {
        coords: vec![-1, 0, 1],
    };
    match a.deg_plus(spec) {
        Degree::MinusInfinity => true,
        Degree::Finite(g) => spec.compare(&g, &threshold) != Ordering::Greater,
    }
}

/// Integer basis of `{v : f(v) = 0 for all f in forms}`.
fn integer_kernel(forms: &[Vec<i64>], rank: usize) -> Vec<Vec<i64>> {
    // Rational row reduction of the form matrix, tracking pivot columns.
    let mut m: Vec<Vec<num_rational::Ratio<i64>>> = forms
        .iter()
        .map(|f| f.iter().map(|&x| num_rational::Ratio::from_integer(x)).collect())
        .collect();
    let mut pivots: Vec<usize> = Vec::new();
    let mut row = 0;
    for col in 0..rank {
        let Some(p) = (row..m.len()).find(|&r| m[r][col] != num_rational::Ratio::from_integer(0))
        else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col];
        for c in 0..rank {
            m[row][c] /= inv;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != num_rational::Ratio::from_integer(0) {
                let factor = m[r][col];
                for c in 0..rank {
                    let sub = factor * m[row][c];
                    m[r][c] -= sub;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..rank).filter(|c| !pivots.contains(c)).collect();
    let mut basis = Vec::new();
    for &fc in &free {
        let mut v = vec![num_rational::Ratio::from_integer(0); rank];
        v[fc] = num_rational::Ratio::from_integer(1);
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -m[r][fc];
        }
        // Clear denominators.
        let lcm = v
            .iter()
            .map(|x| *x.denom())
            .fold(1i64, |acc, d| acc / gcd(acc, d) * d);
        let iv: Vec<i64> = v.iter().map(|x| (*x * lcm).to_integer()).collect();
        basis.push(iv);
    }
    basis
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    if a == 0 {
        1
    } else {
        a
    }
}

/// Homomorphism between weight groups, determined by the images of the
/// source basis classes.
#[derive(Debug, Clone)]
pub struct GammaHom {
    pub images: Vec<GammaElement>,
}

impl GammaHom {
    pub fn new(images: Vec<GammaElement>) -> Self {
        GammaHom { images }
    }

    pub fn identity(spec: &OrderedGroupSpec) -> Self {
        GammaHom {
            images: (0..spec.rank).map(|i| spec.basis(i)).collect(),
        }
    }

    pub fn apply(&self, g: &GammaElement, target: &OrderedGroupSpec) -> GammaElement {
        let mut acc = target.zero();
        for (x, im) in g.coords.iter().zip(&self.images) {
            if *x != 0 {
                acc = target.add(&acc, &target.scale(*x, im));
            }
        }
        acc
    }

    /// Well defined on a quotient source only if the kernel lattice maps
    /// to zero.
    pub fn respects_kernel(&self, source: &OrderedGroupSpec, target: &OrderedGroupSpec) -> bool {
        source.kernel_basis.iter().all(|row| {
            let g = GammaElement { coords: row.clone() };
            self.apply(&g, target) == target.zero()
        })
    }

    /// Push every exponent through the homomorphism, merging collisions.
    pub fn specialize(&self, a: &LaurentElement, target: &OrderedGroupSpec) -> LaurentElement {
        let terms = a
            .terms
            .iter()
            .map(|(e, c)| (self.apply(e, target), *c))
            .collect();
        LaurentElement::normalize(terms, target)
    }
}

/// Weight assignment on generator classes, valued in an ordered group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightFunction {
    /// One value per conjugacy class of generators, in class order.
    pub class_values: Vec<GammaElement>,
    pub spec: OrderedGroupSpec,
}

impl WeightFunction {
    pub fn new(class_values: Vec<GammaElement>, spec: OrderedGroupSpec) -> Self {
        WeightFunction { class_values, spec }
    }

    /// Integer weights in `(ℤ, ≤)`.
    pub fn integers(values: &[i64]) -> Self {
        let spec = OrderedGroupSpec::integers();
        let class_values = values
            .iter()
            .map(|&v| spec.element(vec![v]).unwrap())
            .collect();
        WeightFunction { class_values, spec }
    }

    /// The generic weight sending class `i` to the `i`-th basis vector
    /// of the given spec.
    pub fn generic(spec: OrderedGroupSpec) -> Self {
        let class_values = (0..spec.rank).map(|i| spec.basis(i)).collect();
        WeightFunction { class_values, spec }
    }

    pub fn class_weight(&self, class_id: usize) -> &GammaElement {
        &self.class_values[class_id]
    }

    pub fn is_non_negative(&self) -> bool {
        self.class_values
            .iter()
            .all(|v| self.spec.compare(v, &self.spec.zero()) != Ordering::Less)
    }

    pub fn is_positive(&self) -> bool {
        self.class_values.iter().all(|v| self.spec.is_positive(v))
    }

    pub fn is_zero(&self) -> bool {
        self.class_values.iter().all(|v| *v == self.spec.zero())
    }

    pub fn class_is_zero(&self, class_id: usize) -> bool {
        self.class_values[class_id] == self.spec.zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lex2() -> OrderedGroupSpec {
        OrderedGroupSpec::lex(2)
    }

    #[test]
    fn lex_compare() {
        let spec = lex2();
        let a = spec.element(vec![1, -5]).unwrap();
        let z = spec.zero();
        assert_eq!(spec.compare(&a, &z), Ordering::Greater);
        assert_eq!(spec.compare(&z, &z), Ordering::Equal);
    }

    #[test]
    fn chain_order_with_kernel_form() {
        // Rank 3, φ1 = t*, φ2(0,j,k) = j + k, φ3 positive on (0,-1,1).
        let spec = OrderedGroupSpec::new(
            3,
            vec![vec![1, 0, 0], vec![0, 1, 1], vec![0, 0, 1]],
        )
        .unwrap();
        let a = spec.element(vec![0, -1, 1]).unwrap();
        assert_eq!(spec.compare(&a, &spec.zero()), Ordering::Greater);
    }

    #[test]
    fn kernel_quotient_identifies_elements() {
        // φ1 = t*, φ2(0,j,k) = j + k: kernel is generated by (0,-1,1).
        let spec = OrderedGroupSpec::new(3, vec![vec![1, 0, 0], vec![0, 1, 1]]).unwrap();
        assert_eq!(spec.kernel_basis.len(), 1);
        let a = spec.element(vec![2, 3, 0]).unwrap();
        let b = spec.element(vec![2, 2, 1]).unwrap();
        assert_eq!(a, b);
        let c = spec.element(vec![2, 3, 1]).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn degree_and_negativity() {
        let spec = OrderedGroupSpec::integers();
        let g = spec.element(vec![3]).unwrap();
        let p = LaurentElement::monomial(g.clone(), 1);
        assert_eq!(p.deg(&spec), Degree::Finite(g));
        assert_eq!(LaurentElement::zero().deg(&spec), Degree::MinusInfinity);
        let neg = LaurentElement::monomial(spec.element(vec![-2]).unwrap(), 5);
        assert!(neg.is_strictly_negative(&spec));
        assert!(!LaurentElement::one(&spec).is_strictly_negative(&spec));
    }

    #[test]
    fn two_term_degree() {
        // v^L - v^{-L} with L > 0 has degree L.
        let spec = OrderedGroupSpec::integers();
        let l = spec.element(vec![4]).unwrap();
        let p = LaurentElement::monomial(l.clone(), 1)
            .add(&LaurentElement::monomial(spec.neg(&l), -1), &spec);
        assert_eq!(p.deg(&spec), Degree::Finite(l));
    }

    #[test]
    fn projections() {
        let spec = OrderedGroupSpec::lex(2).with_plus_mask(vec![true, false]);
        let g = spec.element(vec![2, 3]).unwrap();
        assert_eq!(spec.project_plus(&g).coords(), &[2, 0]);
        assert_eq!(spec.project_circ(&g).coords(), &[0, 3]);
        let z = spec.zero();
        assert_eq!(spec.project_plus(&z), z);
        let spec3 = OrderedGroupSpec::new(
            3,
            vec![vec![1, 0, 1], vec![1, 0, 0], vec![0, 1, 0]],
        )
        .unwrap()
        .with_plus_mask(vec![true, false, true]);
        let g3 = spec3.element(vec![1, 4, -2]).unwrap();
        assert_eq!(spec3.project_plus(&g3).coords(), &[1, 0, -2]);
    }

    #[test]
    fn strictly_negative_under_lex3() {
        let spec = OrderedGroupSpec::lex(3);
        let p = LaurentElement::monomial(spec.element(vec![-1, 7, 0]).unwrap(), 1);
        assert!(p.is_strictly_negative(&spec));
    }

    #[test]
    fn specialize_is_evaluation() {
        let lex = lex2();
        let z = OrderedGroupSpec::integers();
        // Collapse (1,0) and (0,1) both to 1: v^{(1,0)} - v^{(0,1)} -> 0.
        let theta = GammaHom::new(vec![z.element(vec![1]).unwrap(), z.element(vec![1]).unwrap()]);
        let p = LaurentElement::monomial(lex.element(vec![1, 0]).unwrap(), 1).add(
            &LaurentElement::monomial(lex.element(vec![0, 1]).unwrap(), -1),
            &lex,
        );
        assert!(theta.specialize(&p, &z).is_zero());
        // Identity fixes everything.
        let id = GammaHom::identity(&lex);
        assert_eq!(id.specialize(&p, &lex), p);
    }

    #[test]
    fn plus_admissible() {
        // φ1 = sum of plus duals, all classes positive.
        let spec = OrderedGroupSpec::new(
            3,
            vec![vec![1, 0, 1], vec![1, 0, 0], vec![0, 1, 0]],
        )
        .unwrap()
        .with_plus_mask(vec![true, false, true]);
        assert!(spec.is_plus_admissible());
        let bad = OrderedGroupSpec::lex(3).with_plus_mask(vec![true, false, true]);
        assert!(!bad.is_plus_admissible());
    }

    #[test]
    fn symmetrize_is_bar_invariant() {
        let spec = OrderedGroupSpec::integers();
        let e = |n: i64| spec.element(vec![n]).unwrap();
        let r = LaurentElement::monomial(e(2), 3)
            .add(&LaurentElement::monomial(e(0), 1), &spec)
            .add(&LaurentElement::monomial(e(-1), 7), &spec);
        let m = r.symmetrize(&spec);
        assert_eq!(m.bar(&spec), m);
        assert!(m.sub(&r, &spec).is_strictly_negative(&spec));
    }
}
