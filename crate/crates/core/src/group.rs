//! Affine Weyl group elements as exact affine transforms, together with
//! length, descent, reduced-word, Bruhat-order, parabolic-coset and
//! semidirect-splitting machinery.
//!
//! The identification is `w ↔ w(A₀)`: an element stores the transform
//! carrying the fundamental alcove to its alcove (plus the inverse
//! transform, kept in sync). Because the alcove action is contravariant
//! in the generators, `multiply(x, y)` composes the transforms in the
//! opposite order; all callers go through `multiply`, so this is
//! invisible outside this module.

use std::collections::HashMap;
use std::fmt;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::gamma::{GammaElement, WeightFunction};
use crate::geometry::{rat, Affine, Rat, TildeGeometry, TypeGeometry, VirtualPoint};

#[derive(Clone)]
pub struct GroupElement {
    pub fwd: Affine,
    pub inv: Affine,
}

impl PartialEq for GroupElement {
    fn eq(&self, other: &Self) -> bool {
        self.fwd == other.fwd
    }
}
impl Eq for GroupElement {}

impl std::hash::Hash for GroupElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.fwd.hash(state);
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupElement({:?})", self.fwd.tr)
    }
}

impl GroupElement {
    pub fn identity(geom: &TypeGeometry) -> Self {
        let id = Affine::identity(geom.dim);
        GroupElement {
            fwd: id.clone(),
            inv: id,
        }
    }

    pub fn generator(geom: &TypeGeometry, s: usize) -> Self {
        let r = geom.generator_reflection(s);
        GroupElement {
            fwd: r.clone(),
            inv: r,
        }
    }

    /// Group product. The alcove transform of `xy` is `fwd_y ∘ fwd_x`.
    pub fn multiply(&self, other: &GroupElement) -> GroupElement {
        GroupElement {
            fwd: other.fwd.compose(&self.fwd),
            inv: self.inv.compose(&other.inv),
        }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            fwd: self.inv.clone(),
            inv: self.fwd.clone(),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.fwd.is_identity()
    }

    /// Interior sample point of the element's alcove.
    pub fn sample_point(&self, geom: &TypeGeometry) -> Vec<Rat> {
        self.fwd.apply(&geom.p0)
    }

    fn inv_sample_point(&self, geom: &TypeGeometry) -> Vec<Rat> {
        self.inv.apply(&geom.p0)
    }

    pub fn length(&self, geom: &TypeGeometry) -> u64 {
        geom.separation_count(&geom.p0, &self.sample_point(geom))
    }

    /// `ℓ(ws) < ℓ(w)`: the type-`s` wall of the fundamental alcove
    /// separates it from the alcove of `w`.
    pub fn right_descent(&self, geom: &TypeGeometry, s: usize) -> bool {
        let (fam, off) = geom.walls[s];
        let v = geom.functional(fam, &self.sample_point(geom));
        let base = geom.functional(fam, &geom.p0);
        (v - rat(off)).is_negative() != (base - rat(off)).is_negative()
    }

    /// `ℓ(sw) < ℓ(w)`.
    pub fn left_descent(&self, geom: &TypeGeometry, s: usize) -> bool {
        let (fam, off) = geom.walls[s];
        let v = geom.functional(fam, &self.inv_sample_point(geom));
        let base = geom.functional(fam, &geom.p0);
        (v - rat(off)).is_negative() != (base - rat(off)).is_negative()
    }

    pub fn first_left_descent(&self, geom: &TypeGeometry) -> Option<usize> {
        (0..geom.n_gens()).find(|&s| self.left_descent(geom, s))
    }

    pub fn first_right_descent(&self, geom: &TypeGeometry) -> Option<usize> {
        (0..geom.n_gens()).find(|&s| self.right_descent(geom, s))
    }

    pub fn left_descent_set(&self, geom: &TypeGeometry) -> Vec<usize> {
        (0..geom.n_gens())
            .filter(|&s| self.left_descent(geom, s))
            .collect()
    }

    pub fn right_descent_set(&self, geom: &TypeGeometry) -> Vec<usize> {
        (0..geom.n_gens())
            .filter(|&s| self.right_descent(geom, s))
            .collect()
    }

    /// `s · w` (cross the type-`s` face of the alcove of `w`).
    pub fn apply_generator_left(&self, geom: &TypeGeometry, s: usize) -> GroupElement {
        GroupElement::generator(geom, s).multiply(self)
    }

    /// `w · s`.
    pub fn apply_generator_right(&self, geom: &TypeGeometry, s: usize) -> GroupElement {
        self.multiply(&GroupElement::generator(geom, s))
    }

    /// Reduced word by repeatedly stripping the smallest left descent.
    pub fn reduced_word(&self, geom: &TypeGeometry) -> Vec<usize> {
        let mut word = Vec::new();
        let mut cur = self.clone();
        while let Some(s) = cur.first_left_descent(geom) {
            word.push(s);
            cur = cur.apply_generator_left(geom, s);
        }
        debug_assert!(cur.is_identity());
        word
    }

    pub fn from_word(geom: &TypeGeometry, word: &[usize]) -> GroupElement {
        let mut cur = GroupElement::identity(geom);
        for &s in word {
            cur = cur.apply_generator_right(geom, s);
        }
        cur
    }

    pub fn word_string(&self, geom: &TypeGeometry) -> String {
        let w = self.reduced_word(geom);
        if w.is_empty() {
            return "e".into();
        }
        w.iter()
            .map(|&s| geom.gen_names[s].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn parse_word(geom: &TypeGeometry, text: &str) -> Result<GroupElement> {
        let text = text.trim();
        if text.is_empty() || text == "e" {
            return Ok(GroupElement::identity(geom));
        }
        let mut word = Vec::new();
        for part in text.split('.') {
            let s = geom
                .gen_index(part.trim())
                .ok_or_else(|| Error::Config(format!("unknown generator {part}")))?;
            word.push(s);
        }
        Ok(GroupElement::from_word(geom, &word))
    }

    /// Deterministic sort key: (length, reduced word).
    pub fn sort_key(&self, geom: &TypeGeometry) -> (u64, Vec<usize>) {
        (self.length(geom), self.reduced_word(geom))
    }

    /// Total weight: sum of class weights over any reduced word.
    pub fn weight(&self, geom: &TypeGeometry, l: &WeightFunction) -> GammaElement {
        let mut acc = l.spec.zero();
        for s in self.reduced_word(geom) {
            acc = l.spec.add(&acc, l.class_weight(geom.gen_class[s]));
        }
        acc
    }

    /// Same value computed from the weights of the separating
    /// hyperplanes of positive weight.
    pub fn weight_geometric(&self, geom: &TypeGeometry, l: &WeightFunction) -> GammaElement {
        let mut acc = l.spec.zero();
        for (fam, off) in geom.separating_hyperplanes(&geom.p0, &self.sample_point(geom)) {
            acc = l.spec.add(&acc, &geom.hyperplane_weight(l, fam, off));
        }
        acc
    }
}

/// Standard Bruhat order via descent recursion.
pub fn bruhat_leq(geom: &TypeGeometry, x: &GroupElement, y: &GroupElement) -> bool {
    let mut x = x.clone();
    let mut y = y.clone();
    let mut lx = x.length(geom);
    let mut ly = y.length(geom);
    loop {
        if lx > ly {
            return false;
        }
        if x.is_identity() {
            return true;
        }
        if lx == ly {
            return x == y;
        }
        let s = y
            .first_right_descent(geom)
            .expect("non-identity element has a descent");
        y = y.apply_generator_right(geom, s);
        ly -= 1;
        let xs = x.apply_generator_right(geom, s);
        if xs.length(geom) < lx {
            x = xs;
            lx -= 1;
        }
    }
}

/// Length ball with lookup tables.
pub struct Ball {
    pub geom: TypeGeometry,
    pub radius: u64,
    pub elements: Vec<GroupElement>,
    pub index: HashMap<Affine, usize>,
    pub lengths: Vec<u64>,
    pub words: Vec<Vec<usize>>,
    /// `right[w][s]`: id of `w·s` when it lies in the ball.
    pub right: Vec<Vec<Option<usize>>>,
    pub left: Vec<Vec<Option<usize>>>,
    pub inverse: Vec<usize>,
}

impl Ball {
    pub fn new(geom: &TypeGeometry, radius: u64) -> Ball {
        let n = geom.n_gens();
        let mut elements = vec![GroupElement::identity(geom)];
        let mut words: Vec<Vec<usize>> = vec![vec![]];
        let mut index = HashMap::new();
        index.insert(elements[0].fwd.clone(), 0usize);
        let mut lengths = vec![0u64];
        let mut layer: Vec<usize> = vec![0];
        for len in 1..=radius {
            let mut next: Vec<(Vec<usize>, GroupElement)> = Vec::new();
            for &id in &layer {
                for s in 0..n {
                    let cand = elements[id].apply_generator_right(geom, s);
                    if !cand.right_descent(geom, s) {
                        continue; // went down
                    }
                    if index.contains_key(&cand.fwd) {
                        continue;
                    }
                    if next.iter().any(|(_, e)| e.fwd == cand.fwd) {
                        continue;
                    }
                    let mut w = words[id].clone();
                    w.push(s);
                    next.push((w, cand));
                }
            }
            next.sort_by(|a, b| a.0.cmp(&b.0));
            layer = Vec::new();
            for (w, el) in next {
                let id = elements.len();
                index.insert(el.fwd.clone(), id);
                elements.push(el);
                words.push(w);
                lengths.push(len);
                layer.push(id);
            }
            if layer.is_empty() {
                break;
            }
        }
        let m = elements.len();
        let mut right = vec![vec![None; n]; m];
        let mut left = vec![vec![None; n]; m];
        let mut inverse = vec![0usize; m];
        for id in 0..m {
            for s in 0..n {
                let r = elements[id].apply_generator_right(geom, s);
                right[id][s] = index.get(&r.fwd).copied();
                let l = elements[id].apply_generator_left(geom, s);
                left[id][s] = index.get(&l.fwd).copied();
            }
            inverse[id] = *index
                .get(&elements[id].inv)
                .expect("ball is closed under inverse");
        }
        Ball {
            geom: geom.clone(),
            radius,
            elements,
            index,
            lengths,
            words,
            right,
            left,
            inverse,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn id_of(&self, el: &GroupElement) -> Option<usize> {
        self.index.get(&el.fwd).copied()
    }

    pub fn word_string(&self, id: usize) -> String {
        if self.words[id].is_empty() {
            return "e".into();
        }
        self.words[id]
            .iter()
            .map(|&s| self.geom.gen_names[s].as_str())
            .collect::<Vec<_>>()
            .join(".")
    }
}

/// Longest element of the (finite) standard parabolic on `gens`.
pub fn longest_element(geom: &TypeGeometry, gens: &[usize]) -> Result<GroupElement> {
    if gens.len() >= geom.n_gens() {
        return Err(Error::InfiniteParabolic(
            gens.iter()
                .map(|&s| geom.gen_names[s].clone())
                .collect::<Vec<_>>()
                .join(","),
        ));
    }
    let mut w = GroupElement::identity(geom);
    let mut guard = 0;
    loop {
        let Some(&s) = gens.iter().find(|&&s| !w.right_descent(geom, s)) else {
            return Ok(w);
        };
        w = w.apply_generator_right(geom, s);
        guard += 1;
        if guard > 100_000 {
            return Err(Error::Invariant("parabolic is unexpectedly large".into()));
        }
    }
}

/// All elements of the finite standard parabolic on `gens`.
pub fn parabolic_elements(geom: &TypeGeometry, gens: &[usize]) -> Result<Vec<GroupElement>> {
    if gens.len() >= geom.n_gens() {
        return Err(Error::InfiniteParabolic("all generators".into()));
    }
    let mut seen: HashMap<Affine, GroupElement> = HashMap::new();
    let e = GroupElement::identity(geom);
    seen.insert(e.fwd.clone(), e.clone());
    let mut frontier = vec![e];
    while let Some(w) = frontier.pop() {
        for &s in gens {
            let n = w.apply_generator_right(geom, s);
            if !seen.contains_key(&n.fwd) {
                seen.insert(n.fwd.clone(), n.clone());
                frontier.push(n);
            }
        }
        if seen.len() > 100_000 {
            return Err(Error::Invariant("parabolic is unexpectedly large".into()));
        }
    }
    let mut out: Vec<GroupElement> = seen.into_values().collect();
    out.sort_by_key(|w| w.sort_key(geom));
    Ok(out)
}

/// Triple decomposition of `x` along a finite standard parabolic `I`:
/// `x = a · u · d` with `d` minimal in `W_I x`, `u` minimal in its
/// `W_{I°}`-coset inside `W_I`, and `a ∈ W_{I°}`; `I°` is the zero-weight
/// part of `I`. Lengths add across the three factors.
pub fn coset_decompose(
    geom: &TypeGeometry,
    l: &WeightFunction,
    x: &GroupElement,
    gens: &[usize],
) -> Result<(GroupElement, GroupElement, GroupElement)> {
    if gens.len() >= geom.n_gens() {
        return Err(Error::InfiniteParabolic("all generators".into()));
    }
    let mut d = x.clone();
    let mut prefix = GroupElement::identity(geom);
    loop {
        let Some(&s) = gens.iter().find(|&&s| d.left_descent(geom, s)) else {
            break;
        };
        d = d.apply_generator_left(geom, s);
        prefix = prefix.apply_generator_right(geom, s);
    }
    let zero_gens: Vec<usize> = gens
        .iter()
        .copied()
        .filter(|&s| l.class_is_zero(geom.gen_class[s]))
        .collect();
    let mut u = prefix;
    let mut a = GroupElement::identity(geom);
    loop {
        let Some(&s) = zero_gens.iter().find(|&&s| u.left_descent(geom, s)) else {
            break;
        };
        u = u.apply_generator_left(geom, s);
        a = a.apply_generator_right(geom, s);
    }
    debug_assert_eq!(
        x.length(geom),
        a.length(geom) + u.length(geom) + d.length(geom)
    );
    debug_assert_eq!(&a.multiply(&u).multiply(&d), x);
    Ok((a, u, d))
}

/// Is the rational point inside the closed alcove of `w`?
pub fn point_in_closed_alcove(geom: &TypeGeometry, w: &GroupElement, p: &[Rat]) -> bool {
    let q = w.inv.apply(p);
    (0..geom.families.len()).all(|f| {
        let v = geom.functional(f, &q);
        rat(0) <= v && v <= rat(1)
    })
}

fn virtual_sign(base: Rat, dir: Rat) -> std::cmp::Ordering {
    match base.cmp(&rat(0)) {
        std::cmp::Ordering::Equal => dir.cmp(&rat(0)),
        o => o,
    }
}

/// Element whose closed alcove contains the virtual point (the open
/// alcove of `base + ε·dir` for small ε > 0).
pub fn alcove_element(geom: &TypeGeometry, p: &VirtualPoint) -> GroupElement {
    let mut w = GroupElement::identity(geom);
    let mut q = p.clone();
    let mut guard = 0usize;
    loop {
        let mut crossed = false;
        for s in 0..geom.n_gens() {
            let (fam, off) = geom.walls[s];
            let vb = geom.functional(fam, &q.base) - rat(off);
            let vd = geom.functional(fam, &q.dir);
            let side = virtual_sign(vb, vd);
            let base_side = (geom.functional(fam, &geom.p0) - rat(off)).cmp(&rat(0));
            if side != std::cmp::Ordering::Equal && side != base_side {
                let sigma = geom.generator_reflection(s);
                q = q.apply(&sigma);
                w = w.apply_generator_left(geom, s);
                crossed = true;
                break;
            }
        }
        if !crossed {
            return w;
        }
        guard += 1;
        assert!(guard < 1_000_000, "alcove walk failed to terminate");
    }
}

/// The unique minimal-length element whose closed alcove contains the
/// point (the gate of the set of alcoves at the point).
pub fn gate_element(geom: &TypeGeometry, lambda: &[Rat]) -> GroupElement {
    let vp = VirtualPoint {
        base: lambda.to_vec(),
        dir: geom.p0.clone(),
    };
    let mut b = alcove_element(geom, &vp);
    loop {
        let mut descended = false;
        for s in 0..geom.n_gens() {
            if b.left_descent(geom, s) {
                let cand = b.apply_generator_left(geom, s);
                if point_in_closed_alcove(geom, &cand, lambda) {
                    b = cand;
                    descended = true;
                    break;
                }
            }
        }
        if !descended {
            return b;
        }
    }
}

/// Generators of the stabilizer of the point: the types of the walls of
/// the fundamental alcove through the canonical representative of the
/// point in the closed fundamental alcove.
pub fn stabilizer_gens(geom: &TypeGeometry, lambda: &[Rat]) -> Vec<usize> {
    let gate = gate_element(geom, lambda);
    let rep = gate.inv.apply(lambda);
    (0..geom.n_gens())
        .filter(|&s| {
            let (fam, off) = geom.walls[s];
            geom.functional(fam, &rep) == rat(off)
        })
        .collect()
}

/// Separating hyperplanes of positive weight between the alcoves at two
/// sample points.
pub fn l_separators(
    geom: &TypeGeometry,
    l: &WeightFunction,
    p: &[Rat],
    q: &[Rat],
) -> Vec<(usize, i64)> {
    geom.separating_hyperplanes(p, q)
        .into_iter()
        .filter(|&(fam, off)| {
            l.spec
                .is_positive(&geom.hyperplane_weight(l, fam, off))
        })
        .collect()
}

/// Weighted additivity of a pair, by the separation criterion: no
/// positive-weight hyperplane separates both (A₀, yA₀) and (yA₀, xyA₀).
pub fn is_l_additive_pair(
    geom: &TypeGeometry,
    l: &WeightFunction,
    x: &GroupElement,
    y: &GroupElement,
) -> bool {
    let py = y.sample_point(geom);
    let pxy = x.multiply(y).sample_point(geom);
    let first = l_separators(geom, l, &geom.p0, &py);
    if first.is_empty() {
        return true;
    }
    let second: std::collections::HashSet<(usize, i64)> =
        l_separators(geom, l, &py, &pxy).into_iter().collect();
    first.iter().all(|h| !second.contains(h))
}

/// Weighted additivity of a sequence: the total weight equals the sum of
/// the factor weights.
pub fn is_l_additive_seq(geom: &TypeGeometry, l: &WeightFunction, seq: &[GroupElement]) -> bool {
    let mut prod = GroupElement::identity(geom);
    let mut sum = l.spec.zero();
    for w in seq {
        prod = prod.multiply(w);
        sum = l.spec.add(&sum, &w.weight(geom, l));
    }
    prod.weight(geom, l) == sum
}

/// Length additivity of a pair by the separation criterion.
pub fn is_length_additive_pair(geom: &TypeGeometry, x: &GroupElement, y: &GroupElement) -> bool {
    let py = y.sample_point(geom);
    let pxy = x.multiply(y).sample_point(geom);
    let first: std::collections::HashSet<(usize, i64)> = geom
        .separating_hyperplanes(&geom.p0, &py)
        .into_iter()
        .collect();
    geom.separating_hyperplanes(&py, &pxy)
        .iter()
        .all(|h| !first.contains(h))
}

/// The semidirect splitting `W = W° ⋉ W̃` along the partition of the
/// generators into zero- and positive-weight ones.
pub struct SemidirectSplit {
    pub tilde: TildeGeometry,
    pub zero_gens: Vec<usize>,
    pub positive_gens: Vec<usize>,
    /// The finite group `W°`, keyed by transform.
    pub w_circ: HashMap<Affine, GroupElement>,
    /// The conjugates `w t w⁻¹`, `w ∈ W°`, `t` positive.
    pub s_tilde: Vec<GroupElement>,
}

impl SemidirectSplit {
    pub fn new(geom: &TypeGeometry, l: &WeightFunction) -> Result<SemidirectSplit> {
        let zero_gens: Vec<usize> = (0..geom.n_gens())
            .filter(|&s| l.class_is_zero(geom.gen_class[s]))
            .collect();
        let positive_gens: Vec<usize> = (0..geom.n_gens())
            .filter(|&s| !l.class_is_zero(geom.gen_class[s]))
            .collect();
        if zero_gens.len() == geom.n_gens() {
            return Err(Error::InvalidWeight(
                "zero weight function admits no splitting".into(),
            ));
        }
        let tilde = TildeGeometry::new(geom, l)?;
        let circ_elems = parabolic_elements(geom, &zero_gens)?;
        let mut w_circ = HashMap::new();
        let mut s_tilde = Vec::new();
        for w in &circ_elems {
            w_circ.insert(w.fwd.clone(), w.clone());
            for &t in &positive_gens {
                let conj = w
                    .multiply(&GroupElement::generator(geom, t))
                    .multiply(&w.inverse());
                if !s_tilde.contains(&conj) {
                    s_tilde.push(conj);
                }
            }
        }
        s_tilde.sort_by_key(|w| w.sort_key(geom));
        Ok(SemidirectSplit {
            tilde,
            zero_gens,
            positive_gens,
            w_circ,
            s_tilde,
        })
    }

    /// Unique factorization `w = w° · w̃`.
    pub fn factor(
        &self,
        geom: &TypeGeometry,
        w: &GroupElement,
    ) -> Result<(GroupElement, GroupElement)> {
        let q = w.sample_point(geom);
        let (_, ginv) = self.tilde.locate(geom, &q);
        let rho = ginv.compose(&w.fwd);
        let circ = self
            .w_circ
            .get(&rho)
            .ok_or_else(|| Error::Invariant("splitting residue is not in W°".into()))?
            .clone();
        let tilde_part = circ.inverse().multiply(w);
        debug_assert_eq!(&circ.multiply(&tilde_part), w);
        Ok((circ, tilde_part))
    }

    pub fn is_tilde_member(&self, geom: &TypeGeometry, w: &GroupElement) -> bool {
        matches!(self.factor(geom, w), Ok((c, _)) if c.is_identity())
    }

    /// Gallery length inside the positive-weight sub-arrangement.
    pub fn tilde_length(&self, geom: &TypeGeometry, w: &GroupElement) -> u64 {
        self.tilde
            .separation_count(geom, &geom.p0, &w.sample_point(geom))
    }

    /// Word over the conjugated generator set, by a descent walk.
    pub fn tilde_word(&self, geom: &TypeGeometry, w: &GroupElement) -> Result<Vec<usize>> {
        if !self.is_tilde_member(geom, w) {
            return Err(Error::Invariant("not a member of the split factor".into()));
        }
        let mut word = Vec::new();
        let mut cur = w.clone();
        let mut len = self.tilde_length(geom, &cur);
        let mut guard = 0usize;
        while len > 0 {
            let mut moved = false;
            for (i, t) in self.s_tilde.iter().enumerate() {
                let cand = t.multiply(&cur);
                let cl = self.tilde_length(geom, &cand);
                if cl < len {
                    word.push(i);
                    cur = cand;
                    len = cl;
                    moved = true;
                    break;
                }
            }
            if !moved {
                return Err(Error::Invariant("descent walk stuck".into()));
            }
            guard += 1;
            if guard > 100_000 {
                return Err(Error::Invariant("tilde word walk diverged".into()));
            }
        }
        if !cur.is_identity() {
            return Err(Error::Invariant("tilde walk ended off identity".into()));
        }
        Ok(word)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{ratq, GroupType};

    fn c2() -> TypeGeometry {
        TypeGeometry::new(GroupType::C(2)).unwrap()
    }

    #[test]
    fn generators_are_involutions() {
        let g = c2();
        for s in 0..g.n_gens() {
            let el = GroupElement::generator(&g, s);
            assert!(el.multiply(&el).is_identity());
            assert_eq!(el.length(&g), 1);
        }
    }

    #[test]
    fn inverse_roundtrip() {
        let g = c2();
        let w = GroupElement::parse_word(&g, "t.s1.t'.s1.t").unwrap();
        assert!(w.multiply(&w.inverse()).is_identity());
        assert_eq!(w.length(&g), w.inverse().length(&g));
    }

    #[test]
    fn associativity_spot_check() {
        let g = c2();
        let t = GroupElement::generator(&g, 0);
        let s = GroupElement::generator(&g, 1);
        let ts = t.multiply(&s);
        assert_eq!(ts.multiply(&ts), t.multiply(&s.multiply(&t.multiply(&s))));
    }

    #[test]
    fn lengths_and_words() {
        let g = c2();
        let e = GroupElement::identity(&g);
        assert_eq!(e.length(&g), 0);
        assert!(e.reduced_word(&g).is_empty());
        let tsts = GroupElement::parse_word(&g, "t.s1.t.s1").unwrap();
        assert_eq!(tsts.length(&g), 4);
        // Alternating word of length 4 in an m=4 dihedral: also s.t.s.t.
        let stst = GroupElement::parse_word(&g, "s1.t.s1.t").unwrap();
        assert_eq!(tsts, stst);
    }

    #[test]
    fn word_roundtrip_ball() {
        let g = c2();
        let ball = Ball::new(&g, 5);
        for id in 0..ball.len() {
            let w = &ball.elements[id];
            let word = w.reduced_word(&g);
            assert_eq!(word.len() as u64, ball.lengths[id]);
            assert_eq!(&GroupElement::from_word(&g, &word), w);
        }
    }

    #[test]
    fn ball_sizes_small() {
        let g = c2();
        let ball = Ball::new(&g, 1);
        assert_eq!(ball.len(), 1 + g.n_gens());
        let b0 = Ball::new(&g, 0);
        assert_eq!(b0.len(), 1);
    }

    #[test]
    fn exchange_consistency() {
        let g = c2();
        let ball = Ball::new(&g, 4);
        for w in &ball.elements {
            let lw = w.length(&g);
            for s in 0..g.n_gens() {
                let sw = w.apply_generator_left(&g, s);
                let diff = sw.length(&g) as i64 - lw as i64;
                assert!(diff.abs() == 1);
            }
        }
    }

    #[test]
    fn bruhat_small() {
        let g = c2();
        let e = GroupElement::identity(&g);
        let s = GroupElement::generator(&g, 1);
        let sts = GroupElement::parse_word(&g, "s1.t.s1").unwrap();
        assert!(bruhat_leq(&g, &e, &sts));
        assert!(bruhat_leq(&g, &s, &sts));
        assert!(!bruhat_leq(&g, &sts, &s));
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        let g = c2();
        let ball = Ball::new(&g, 5);
        // Brute force: x ≤ y iff some subword of a reduced word of y
        // evaluates to x with the right length.
        for yi in 0..ball.len() {
            let word = &ball.words[yi];
            let mut reachable = std::collections::HashSet::new();
            for mask in 0u32..(1 << word.len()) {
                let sub: Vec<usize> = word
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, &s)| s)
                    .collect();
                reachable.insert(GroupElement::from_word(&g, &sub).fwd.clone());
            }
            for xi in 0..ball.len() {
                let expect = reachable.contains(&ball.elements[xi].fwd);
                let got = bruhat_leq(&g, &ball.elements[xi], &ball.elements[yi]);
                assert_eq!(expect, got, "pair {} vs {}", xi, yi);
            }
        }
    }

    #[test]
    fn longest_elements() {
        let g = c2();
        let w_ts = longest_element(&g, &[0, 1]).unwrap();
        assert_eq!(w_ts.length(&g), 4);
        assert!(longest_element(&g, &[0, 1, 2]).is_err());
        let w_tt = longest_element(&g, &[0, 2]).unwrap();
        assert_eq!(w_tt.length(&g), 2);
    }

    #[test]
    fn coset_decomposition_roundtrip() {
        let g = c2();
        let l = g.int_weights(&[2, 0, 1]).unwrap();
        let ball = Ball::new(&g, 6);
        for x in &ball.elements {
            let (a, u, d) = coset_decompose(&g, &l, x, &[0, 1]).unwrap();
            assert_eq!(&a.multiply(&u).multiply(&d), x);
            assert_eq!(
                x.length(&g),
                a.length(&g) + u.length(&g) + d.length(&g)
            );
            // d minimal in its left coset: no left descents inside I.
            assert!(!d.left_descent(&g, 0) && !d.left_descent(&g, 1));
        }
    }

    #[test]
    fn weight_additive_on_zero_factor() {
        // If L(x)=0 then L(xy) = L(y) for all y in a test ball.
        let g = c2();
        let l = g.int_weights(&[2, 0, 1]).unwrap();
        let s = GroupElement::generator(&g, 1);
        assert_eq!(s.weight(&g, &l), l.spec.zero());
        let ball = Ball::new(&g, 5);
        for y in &ball.elements {
            assert_eq!(s.multiply(y).weight(&g, &l), y.weight(&g, &l));
            assert_eq!(y.multiply(&s).weight(&g, &l), y.weight(&g, &l));
        }
    }

    #[test]
    fn weight_geometric_agrees() {
        let g = c2();
        let l = g.int_weights(&[2, 1, 1]).unwrap();
        let ball = Ball::new(&g, 6);
        for w in &ball.elements {
            assert_eq!(w.weight(&g, &l), w.weight_geometric(&g, &l));
        }
    }

    #[test]
    fn stabilizer_of_special_points() {
        let g = c2();
        // Origin: stabilized by t and s1.
        let s0 = stabilizer_gens(&g, &[rat(0), rat(0)]);
        assert_eq!(s0, vec![0, 1]);
        // (1/2, 1/2): walls 2x_i = 1 (t') and x_1 - x_2 = 0 (s).
        let s1 = stabilizer_gens(&g, &[ratq(1, 2), ratq(1, 2)]);
        assert_eq!(s1, vec![1, 2]);
        // (1/2, 0): t and t'.
        let s2 = stabilizer_gens(&g, &[ratq(1, 2), rat(0)]);
        assert_eq!(s2, vec![0, 2]);
    }

    #[test]
    fn gate_is_minimal() {
        let g = c2();
        let lam = vec![rat(1), rat(0)];
        let gate = gate_element(&g, &lam);
        assert!(point_in_closed_alcove(&g, &gate, &lam));
        // Everything in the coset W_λ·gate has length >= gate.
        let stab = stabilizer_gens(&g, &lam);
        for u in parabolic_elements(&g, &stab).unwrap() {
            let w = u.multiply(&gate);
            assert!(point_in_closed_alcove(&g, &w, &lam));
            assert!(w.length(&g) >= gate.length(&g));
        }
    }

    #[test]
    fn semidirect_factor_c2() {
        let g = c2();
        // S° = {s}: weights (a, 0, c) with a >= c > 0.
        let l = g.int_weights(&[2, 0, 1]).unwrap();
        let split = SemidirectSplit::new(&g, &l).unwrap();
        let s = GroupElement::generator(&g, 1);
        let t = GroupElement::generator(&g, 0);
        let (c, w) = split.factor(&g, &s).unwrap();
        assert_eq!(c, s);
        assert!(w.is_identity());
        let (c, w) = split.factor(&g, &t).unwrap();
        assert!(c.is_identity());
        assert_eq!(w, t);
        let st = s.multiply(&t);
        let (c, w) = split.factor(&g, &st).unwrap();
        assert_eq!(c, s);
        assert_eq!(w, t);
    }

    #[test]
    fn semidirect_tilde_words() {
        let g = c2();
        let l = g.int_weights(&[2, 0, 1]).unwrap();
        let split = SemidirectSplit::new(&g, &l).unwrap();
        // Conjugated generators carry positive weight.
        for tg in &split.s_tilde {
            assert!(l.spec.is_positive(&tg.weight(&g, &l)));
        }
        let ball = Ball::new(&g, 6);
        for w in &ball.elements {
            let (_, tilde) = split.factor(&g, w).unwrap();
            let word = split.tilde_word(&g, &tilde).unwrap();
            assert_eq!(word.len() as u64, split.tilde_length(&g, &tilde));
            let mut prod = GroupElement::identity(&g);
            for i in word {
                prod = prod.multiply(&split.s_tilde[i]);
            }
            assert_eq!(prod, tilde);
        }
    }
}
