//! Hecke algebra over the weight-group algebra: standard-basis
//! arithmetic, the bar involution, Kazhdan-Lusztig P- and M-polynomials
//! on a length ball, canonical-basis multiplication, cell preorders, and
//! the degree-bound / induction verifications.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exec;
use crate::gamma::{
    Degree, GammaElement, GammaHom, LaurentElement, OrderedGroupSpec, WeightFunction,
};
use crate::geometry::{integer_range_between, TypeGeometry};
use crate::group::Ball;

/// Hecke algebra element in the standard basis, keyed by ball id.
pub type HElt = BTreeMap<usize, LaurentElement>;

/// Shared immutable state for computations over one (group, weight,
/// radius) triple.
pub struct KlContext {
    pub geom: TypeGeometry,
    pub l: WeightFunction,
    pub ball: Ball,
    /// Generators whose class is on the small side of the partition
    /// (actual zero weight, or the non-plus classes of a generic
    /// weight).
    pub circ_gens: Vec<usize>,
    pub gen_v: Vec<LaurentElement>,
    pub gen_v_inv: Vec<LaurentElement>,
    /// `v_s - v_s^{-1}` per generator.
    pub gen_xi: Vec<LaurentElement>,
    /// `ℓ(s·w) > ℓ(w)` per (element, generator).
    pub left_up: Vec<Vec<bool>>,
    pub right_up: Vec<Vec<bool>>,
    /// Bruhat order on ball ids.
    pub leq: Vec<Vec<bool>>,
    /// Ids grouped by length.
    pub layers: Vec<Vec<usize>>,
}

impl KlContext {
    pub fn new(geom: &TypeGeometry, l: &WeightFunction, radius: u64) -> Result<KlContext> {
        geom.check_weight_convention(l)?;
        let ball = Ball::new(geom, radius);
        let n = ball.len();
        let spec = &l.spec;
        let circ_gens = (0..geom.n_gens())
            .filter(|&s| {
                let w = l.class_weight(geom.gen_class[s]);
                match &spec.plus_mask {
                    Some(mask) => !mask[geom.gen_class[s]] || *w == spec.zero(),
                    None => *w == spec.zero(),
                }
            })
            .collect();
        let mut gen_v = Vec::new();
        let mut gen_v_inv = Vec::new();
        let mut gen_xi = Vec::new();
        for s in 0..geom.n_gens() {
            let w = l.class_weight(geom.gen_class[s]).clone();
            let v = LaurentElement::monomial(w.clone(), 1);
            let vi = LaurentElement::monomial(spec.neg(&w), 1);
            gen_xi.push(v.sub(&vi, spec));
            gen_v.push(v);
            gen_v_inv.push(vi);
        }
        let mut left_up = vec![vec![false; geom.n_gens()]; n];
        let mut right_up = vec![vec![false; geom.n_gens()]; n];
        for id in 0..n {
            for s in 0..geom.n_gens() {
                left_up[id][s] = !ball.elements[id].left_descent(geom, s);
                right_up[id][s] = !ball.elements[id].right_descent(geom, s);
            }
        }
        let mut layers: Vec<Vec<usize>> = vec![Vec::new(); radius as usize + 1];
        for id in 0..n {
            layers[ball.lengths[id] as usize].push(id);
        }
        // Bruhat matrix, filled by length using a right descent.
        let mut leq = vec![vec![false; n]; n];
        leq[0][0] = true;
        for len in 1..layers.len() {
            for &w in &layers[len] {
                let s = (0..geom.n_gens())
                    .find(|&s| !right_up[w][s])
                    .expect("non-identity element has a right descent");
                let ws = ball.right[w][s].expect("descent stays in the ball");
                for x in 0..n {
                    if ball.lengths[x] > ball.lengths[w] {
                        continue;
                    }
                    if x == w {
                        leq[x][w] = true;
                        continue;
                    }
                    let xm = if !right_up[x][s] {
                        ball.right[x][s].expect("descent stays in the ball")
                    } else {
                        x
                    };
                    leq[x][w] = leq[xm][ws];
                }
            }
        }
        Ok(KlContext {
            geom: geom.clone(),
            l: l.clone(),
            ball,
            circ_gens,
            gen_v,
            gen_v_inv,
            gen_xi,
            left_up,
            right_up,
            leq,
            layers,
        })
    }

    pub fn spec(&self) -> &OrderedGroupSpec {
        &self.l.spec
    }

    pub fn n(&self) -> usize {
        self.ball.len()
    }

    pub fn first_left_descent(&self, w: usize) -> Option<usize> {
        (0..self.geom.n_gens()).find(|&s| !self.left_up[w][s])
    }

    /// Left multiplication by `T_s`.
    pub fn t_mult_gen_left(&self, s: usize, h: &HElt) -> Result<HElt> {
        let spec = self.spec();
        let mut out: HElt = BTreeMap::new();
        for (&u, c) in h {
            let su = self.ball.left[u][s].ok_or(Error::BallTooSmall(self.ball.radius as usize))?;
            add_term(&mut out, su, c, spec);
            if !self.left_up[u][s] {
                let extra = c.mul(&self.gen_xi[s], spec);
                add_term(&mut out, u, &extra, spec);
            }
        }
        Ok(out)
    }

    /// `T_x · h` for a ball element `x`.
    pub fn t_mult_left(&self, x: usize, h: &HElt) -> Result<HElt> {
        let mut cur = h.clone();
        for &s in self.ball.words[x].iter().rev() {
            cur = self.t_mult_gen_left(s, &cur)?;
        }
        Ok(cur)
    }

    /// Structure constants of `T_x T_y`.
    pub fn t_product(&self, x: usize, y: usize) -> Result<HElt> {
        let mut h: HElt = BTreeMap::new();
        h.insert(y, LaurentElement::one(self.spec()));
        self.t_mult_left(x, &h)
    }
}

fn add_term(dst: &mut HElt, key: usize, val: &LaurentElement, spec: &OrderedGroupSpec) {
    if val.is_zero() {
        return;
    }
    match dst.get_mut(&key) {
        Some(cur) => {
            let sum = cur.add(val, spec);
            if sum.is_zero() {
                dst.remove(&key);
            } else {
                *cur = sum;
            }
        }
        None => {
            dst.insert(key, val.clone());
        }
    }
}

/// The P/M tables on a ball.
#[derive(Default)]
pub struct KlTable {
    /// `P_{y,w}` for `y < w`, non-zero entries only.
    pub p: HashMap<(usize, usize), LaurentElement>,
    /// `M^s_{y,w}` for `sy < y < w < sw`, non-zero entries only.
    pub m: HashMap<(usize, usize, usize), LaurentElement>,
}

impl KlTable {
    pub fn p_of(&self, ctx: &KlContext, y: usize, w: usize) -> LaurentElement {
        if y == w {
            return LaurentElement::one(ctx.spec());
        }
        if !ctx.leq[y][w] {
            return LaurentElement::zero();
        }
        self.p
            .get(&(y, w))
            .cloned()
            .unwrap_or_else(LaurentElement::zero)
    }

    pub fn m_of(&self, s: usize, y: usize, w: usize) -> LaurentElement {
        self.m
            .get(&(s, y, w))
            .cloned()
            .unwrap_or_else(LaurentElement::zero)
    }

    /// Canonical basis element in the standard basis.
    pub fn c_expansion(&self, ctx: &KlContext, w: usize) -> HElt {
        let mut out: HElt = BTreeMap::new();
        out.insert(w, LaurentElement::one(ctx.spec()));
        for y in 0..ctx.n() {
            if y != w && ctx.leq[y][w] {
                if let Some(p) = self.p.get(&(y, w)) {
                    out.insert(y, p.clone());
                }
            }
        }
        out
    }
}

/// Fill the tables by increasing length; within a layer the columns are
/// independent and run in parallel.
pub fn kl_table(ctx: &KlContext) -> KlTable {
    let mut table = KlTable::default();
    for len in 1..ctx.layers.len() {
        let ws: Vec<usize> = ctx.layers[len].clone();
        let cols = exec::map_collect(&ws, |&w| compute_column(ctx, &table, w));
        for (p_col, m_col) in cols {
            table.p.extend(p_col);
            table.m.extend(m_col);
        }
    }
    table
}

type PCol = Vec<((usize, usize), LaurentElement)>;
type MCol = Vec<((usize, usize, usize), LaurentElement)>;

fn compute_column(ctx: &KlContext, lower: &KlTable, w: usize) -> (PCol, MCol) {
    let spec = ctx.spec();
    let s = ctx.first_left_descent(w).expect("w has positive length");
    let w1 = ctx.ball.left[w][s].expect("descent stays in the ball");
    let mut local: HashMap<usize, LaurentElement> = HashMap::new();
    // Candidates below w, processed by decreasing length so the ascent
    // branch can read the longer entry of the same column.
    let mut order: Vec<usize> = (0..ctx.n())
        .filter(|&y| ctx.ball.lengths[y] < ctx.ball.lengths[w] && ctx.leq[y][w])
        .collect();
    order.sort_by(|&a, &b| ctx.ball.lengths[b].cmp(&ctx.ball.lengths[a]));
    for &y in &order {
        let p = if ctx.left_up[y][s] {
            // sy > y: P_{y,w} = v_s^{-1} P_{sy,w}.
            let sy = ctx.ball.left[y][s].expect("within the ball");
            let p_syw = if sy == w {
                LaurentElement::one(spec)
            } else {
                local.get(&sy).cloned().unwrap_or_else(LaurentElement::zero)
            };
            p_syw.mul(&ctx.gen_v_inv[s], spec)
        } else {
            // sy < y: recursion through the shorter column.
            let sy = ctx.ball.left[y][s].expect("within the ball");
            let mut p = lower
                .p_of(ctx, y, w1)
                .mul(&ctx.gen_v[s], spec)
                .add(&lower.p_of(ctx, sy, w1), spec);
            for z in 0..ctx.n() {
                if z == w1 || !ctx.leq[y][z] || !ctx.leq[z][w1] || ctx.left_up[z][s] {
                    continue;
                }
                let m = lower.m_of(s, z, w1);
                if m.is_zero() {
                    continue;
                }
                let sub = lower.p_of(ctx, y, z).mul(&m, spec);
                p = p.sub(&sub, spec);
            }
            p
        };
        if !p.is_zero() {
            local.insert(y, p);
        }
    }
    let p_col: PCol = local.iter().map(|(&y, p)| ((y, w), p.clone())).collect();
    // M-polynomials for every left ascent of w, by decreasing length.
    let p_of_col = |local: &HashMap<usize, LaurentElement>, y: usize| -> LaurentElement {
        if y == w {
            LaurentElement::one(spec)
        } else {
            local.get(&y).cloned().unwrap_or_else(LaurentElement::zero)
        }
    };
    let mut m_col: MCol = Vec::new();
    for t in 0..ctx.geom.n_gens() {
        if !ctx.left_up[w][t] {
            continue;
        }
        let mut m_local: HashMap<usize, LaurentElement> = HashMap::new();
        for &y in &order {
            if ctx.left_up[y][t] {
                continue; // need ty < y
            }
            // The unique bar-invariant element congruent to
            // v_t P_{y,w} - Σ_{y<z<w, tz<z} P_{y,z} M^t_{z,w} modulo the
            // strictly negative part.
            let mut r = p_of_col(&local, y).mul(&ctx.gen_v[t], spec);
            for &z in &order {
                if z == y || ctx.left_up[z][t] || !ctx.leq[y][z] {
                    continue;
                }
                let Some(mz) = m_local.get(&z) else { continue };
                let p_yz = lower.p_of(ctx, y, z);
                r = r.sub(&p_yz.mul(mz, spec), spec);
            }
            let m = r.symmetrize(spec);
            if !m.is_zero() {
                m_local.insert(y, m);
            }
        }
        for (y, m) in m_local {
            m_col.push(((t, y, w), m));
        }
    }
    (p_col, m_col)
}

/// Hecke-algebra bar involution support: expansions of `(T_{u^{-1}})^{-1}`
/// in the standard basis, memoized.
pub struct BarCache {
    einv: Vec<Option<HElt>>,
}

impl BarCache {
    pub fn new(ctx: &KlContext) -> BarCache {
        BarCache {
            einv: vec![None; ctx.n()],
        }
    }

    fn einv(&mut self, ctx: &KlContext, u: usize) -> Result<HElt> {
        if let Some(h) = &self.einv[u] {
            return Ok(h.clone());
        }
        let spec = ctx.spec();
        let h = if u == 0 {
            let mut h: HElt = BTreeMap::new();
            h.insert(0, LaurentElement::one(spec));
            h
        } else {
            let s = ctx.first_left_descent(u).expect("positive length");
            let u1 = ctx.ball.left[u][s].expect("within the ball");
            let prev = self.einv(ctx, u1)?;
            // T_s^{-1} = T_s - ξ_s, applied on the left.
            let mut h = ctx.t_mult_gen_left(s, &prev)?;
            for (&k, c) in &prev {
                let sub = c.mul(&ctx.gen_xi[s], spec);
                add_term(&mut h, k, &sub.neg(), spec);
            }
            h
        };
        self.einv[u] = Some(h.clone());
        Ok(h)
    }

    /// `bar(Σ a_u T_u) = Σ bar(a_u) (T_{u^{-1}})^{-1}`.
    pub fn bar(&mut self, ctx: &KlContext, h: &HElt) -> Result<HElt> {
        let spec = ctx.spec();
        let mut out: HElt = BTreeMap::new();
        for (&u, c) in h {
            let e = self.einv(ctx, u)?;
            let cb = c.bar(spec);
            for (&k, v) in &e {
                add_term(&mut out, k, &v.mul(&cb, spec), spec);
            }
        }
        Ok(out)
    }

    /// Canonical basis element derived purely from the bar involution:
    /// the unique bar-invariant `T_w + Σ_{y<w} p_y T_y` with every `p_y`
    /// strictly negative. Independent of the P/M recursion.
    pub fn c_by_bar(&mut self, ctx: &KlContext, w: usize) -> Result<HElt> {
        let spec = ctx.spec();
        let mut support: Vec<usize> = (0..ctx.n()).filter(|&y| ctx.leq[y][w]).collect();
        support.sort_by(|&a, &b| ctx.ball.lengths[b].cmp(&ctx.ball.lengths[a]));
        let mut r_cols: HashMap<usize, HElt> = HashMap::new();
        for &u in &support {
            r_cols.insert(u, self.einv(ctx, u)?);
        }
        let mut p: HashMap<usize, LaurentElement> = HashMap::new();
        p.insert(w, LaurentElement::one(spec));
        for &y in &support {
            if y == w {
                continue;
            }
            // q_y = Σ_{u>y} bar(p_u) R[y][u]; solve p_y - bar(p_y) = q_y
            // with p_y strictly negative.
            let mut q = LaurentElement::zero();
            for &u in &support {
                if u == y || !ctx.leq[y][u] {
                    continue;
                }
                let Some(pu) = p.get(&u) else { continue };
                let Some(r_yu) = r_cols.get(&u).and_then(|col| col.get(&y)) else {
                    continue;
                };
                q = q.add(&pu.bar(spec).mul(r_yu, spec), spec);
            }
            if q.coeff(&spec.zero()) != 0 {
                return Err(Error::Invariant("bar-defect has a constant term".into()));
            }
            if !q.add(&q.bar(spec), spec).is_zero() {
                return Err(Error::Invariant("bar-defect is not anti-invariant".into()));
            }
            let py = q.part_neg(spec);
            if !py.is_zero() {
                p.insert(y, py);
            }
        }
        let mut out: HElt = BTreeMap::new();
        for (y, c) in p {
            out.insert(y, c);
        }
        Ok(out)
    }
}

/// `C_s · C_w` in the canonical basis: pairs (ball id, coefficient).
/// Fails with a truncation error when `sw` leaves the ball.
pub fn cs_times_cw(
    ctx: &KlContext,
    table: &KlTable,
    s: usize,
    w: usize,
) -> Result<Vec<(usize, LaurentElement)>> {
    let spec = ctx.spec();
    if !ctx.left_up[w][s] {
        let coeff = ctx.gen_v[s].add(&ctx.gen_v_inv[s], spec);
        return Ok(vec![(w, coeff)]);
    }
    let sw = ctx.ball.left[w][s].ok_or(Error::BallTooSmall(ctx.ball.radius as usize))?;
    let mut out = vec![(sw, LaurentElement::one(spec))];
    for z in 0..ctx.n() {
        if z != w && ctx.leq[z][w] && !ctx.left_up[z][s] {
            let m = table.m_of(s, z, w);
            if !m.is_zero() {
                out.push((z, m));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Flavor {
    Left,
    Right,
    TwoSided,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeKind {
    /// `C_{sw}` occurring in `C_s C_w`.
    Ascent,
    /// A non-zero M-polynomial.
    MPoly,
}

/// Cell partition of a ball: strongly connected components of the
/// occurrence relation, with the truncation caveat recorded.
pub struct CellPartition {
    pub flavor: Flavor,
    /// (from, to, kind): `C_to` occurs in some `C_s C_from`.
    pub edges: Vec<(usize, usize, EdgeKind)>,
    pub classes: Vec<Vec<usize>>,
    pub class_of: Vec<usize>,
    /// Edges of the condensation (between class ids).
    pub dag_edges: HashSet<(usize, usize)>,
    /// Some ascent edges left the ball.
    pub truncated: bool,
}

fn left_edges(ctx: &KlContext, table: &KlTable) -> (Vec<(usize, usize, EdgeKind)>, bool) {
    let mut edges = Vec::new();
    let mut truncated = false;
    for w in 0..ctx.n() {
        for s in 0..ctx.geom.n_gens() {
            if ctx.left_up[w][s] {
                match ctx.ball.left[w][s] {
                    Some(sw) => edges.push((w, sw, EdgeKind::Ascent)),
                    None => truncated = true,
                }
            }
        }
    }
    for (&(_, y, w), m) in &table.m {
        if !m.is_zero() {
            edges.push((w, y, EdgeKind::MPoly));
        }
    }
    edges.sort();
    edges.dedup();
    (edges, truncated)
}

pub fn cell_partition(ctx: &KlContext, table: &KlTable, flavor: Flavor) -> CellPartition {
    let (left, truncated) = left_edges(ctx, table);
    let mut edges: Vec<(usize, usize, EdgeKind)> = Vec::new();
    match flavor {
        Flavor::Left => edges = left,
        Flavor::Right => {
            for (w, y, k) in left {
                edges.push((ctx.ball.inverse[w], ctx.ball.inverse[y], k));
            }
        }
        Flavor::TwoSided => {
            for (w, y, k) in left {
                edges.push((ctx.ball.inverse[w], ctx.ball.inverse[y], k));
                edges.push((w, y, k));
            }
        }
    }
    edges.sort();
    edges.dedup();
    let n = ctx.n();
    let mut adj = vec![Vec::new(); n];
    let mut radj = vec![Vec::new(); n];
    for &(a, b, _) in &edges {
        adj[a].push(b);
        radj[b].push(a);
    }
    // Kosaraju, iterative.
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for start in 0..n {
        if visited[start] {
            continue;
        }
        let mut stack = vec![(start, 0usize)];
        visited[start] = true;
        while let Some(&mut (v, ref mut i)) = stack.last_mut() {
            if *i < adj[v].len() {
                let u = adj[v][*i];
                *i += 1;
                if !visited[u] {
                    visited[u] = true;
                    stack.push((u, 0));
                }
            } else {
                order.push(v);
                stack.pop();
            }
        }
    }
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in order.iter().rev() {
        if class_of[v] != usize::MAX {
            continue;
        }
        let cid = classes.len();
        let mut comp = vec![v];
        class_of[v] = cid;
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for &x in &radj[u] {
                if class_of[x] == usize::MAX {
                    class_of[x] = cid;
                    comp.push(x);
                    stack.push(x);
                }
            }
        }
        comp.sort();
        classes.push(comp);
    }
    // Canonical class ids: sort by minimal member.
    let mut perm: Vec<usize> = (0..classes.len()).collect();
    perm.sort_by_key(|&c| classes[c][0]);
    let mut rank = vec![0usize; classes.len()];
    for (new_id, &old) in perm.iter().enumerate() {
        rank[old] = new_id;
    }
    let classes: Vec<Vec<usize>> = perm.iter().map(|&old| classes[old].clone()).collect();
    let class_of: Vec<usize> = class_of.into_iter().map(|c| rank[c]).collect();
    let mut dag_edges = HashSet::new();
    for &(a, b, _) in &edges {
        if class_of[a] != class_of[b] {
            dag_edges.insert((class_of[a], class_of[b]));
        }
    }
    CellPartition {
        flavor,
        edges,
        classes,
        class_of,
        dag_edges,
        truncated,
    }
}

/// Degree bound for a standard-basis product: over each direction
/// separating both (base, y) and (y, xy), the maximal hyperplane weight
/// in the overlap, summed.
pub fn c_bound(ctx: &KlContext, x: usize, y: usize) -> (GammaElement, Vec<usize>) {
    let geom = &ctx.geom;
    let spec = ctx.spec();
    let p0 = &geom.p0;
    let py = ctx.ball.elements[y].sample_point(geom);
    let pxy = ctx.ball.elements[x]
        .multiply(&ctx.ball.elements[y])
        .sample_point(geom);
    let mut total = spec.zero();
    let mut dirs = Vec::new();
    for f in 0..geom.families.len() {
        let a0 = geom.functional(f, p0);
        let ay = geom.functional(f, &py);
        let axy = geom.functional(f, &pxy);
        let r1 = integer_range_between(a0, ay);
        let r2 = integer_range_between(ay, axy);
        let lo = (*r1.start()).max(*r2.start());
        let hi = (*r1.end()).min(*r2.end());
        if lo > hi {
            continue;
        }
        dirs.push(f);
        let mut best: Option<GammaElement> = None;
        for n in lo..=hi.min(lo + 2) {
            let w = geom.hyperplane_weight(&ctx.l, f, n);
            best = match best {
                None => Some(w),
                Some(b) => {
                    if spec.compare(&w, &b) == std::cmp::Ordering::Greater {
                        Some(w)
                    } else {
                        Some(b)
                    }
                }
            };
        }
        total = spec.add(&total, &best.unwrap());
    }
    (total, dirs)
}

/// Check `deg(f_{x,y,z}) ≤ c_{x,y}` for all pairs within the length
/// budget; returns the number of pairs checked.
pub fn verify_product_degree_bounds(ctx: &KlContext, max_len: u64) -> Result<usize> {
    let spec = ctx.spec();
    let pairs: Vec<(usize, usize)> = (0..ctx.n())
        .flat_map(|x| (0..ctx.n()).map(move |y| (x, y)))
        .filter(|&(x, y)| {
            ctx.ball.lengths[x] <= max_len
                && ctx.ball.lengths[y] <= max_len
                && ctx.ball.lengths[x] + ctx.ball.lengths[y] <= ctx.ball.radius
        })
        .collect();
    let failures: Vec<Option<String>> = exec::map_collect(&pairs, |&(x, y)| {
        let (bound, _) = c_bound(ctx, x, y);
        let prod = match ctx.t_product(x, y) {
            Ok(p) => p,
            Err(_) => return Some(format!("truncation at ({x},{y})")),
        };
        for (z, f) in prod {
            if let Degree::Finite(d) = f.deg(spec) {
                if spec.compare(&d, &bound) == std::cmp::Ordering::Greater {
                    return Some(format!("degree bound fails at x={x} y={y} z={z}"));
                }
            }
        }
        None
    });
    if let Some(msg) = failures.into_iter().flatten().next() {
        return Err(Error::Invariant(msg));
    }
    Ok(pairs.len())
}

/// Report for the asymmetric-degree bound on a parabolic.
pub struct KlasymReport {
    pub checked_pairs: usize,
    pub failures: Vec<String>,
}

/// For every `y` in the coset family `W_{I°} · u°_I · X_I^{-1}` and
/// every `x < y`, check `deg⁺(P_{x,y}) ≤ L(u_x)⁺ - L(u°_I)⁺`; a non-zero
/// M-polynomial at a small-class generator must force `u_x = u°_I`.
pub fn verify_klasym(ctx: &KlContext, table: &KlTable, gens: &[usize]) -> Result<KlasymReport> {
    let spec = ctx.spec();
    let geom = &ctx.geom;
    let zero: Vec<usize> = gens
        .iter()
        .copied()
        .filter(|s| ctx.circ_gens.contains(s))
        .collect();
    let w_circ = {
        let w_i = crate::group::longest_element(geom, gens)?;
        let w_zero = crate::group::longest_element(geom, &zero)?;
        w_i.multiply(&w_zero)
    };
    // (u_x == u°_I, weight of u_x) per ball element.
    let split: Vec<(bool, GammaElement)> = (0..ctx.n())
        .map(|id| {
            let x = &ctx.ball.elements[id];
            let mut d = x.clone();
            let mut prefix = crate::group::GroupElement::identity(geom);
            loop {
                let Some(&s) = gens.iter().find(|&&s| d.left_descent(geom, s)) else {
                    break;
                };
                d = d.apply_generator_left(geom, s);
                prefix = prefix.apply_generator_right(geom, s);
            }
            let mut u = prefix;
            loop {
                let Some(&s) = zero.iter().find(|&&s| u.left_descent(geom, s)) else {
                    break;
                };
                u = u.apply_generator_left(geom, s);
            }
            (u == w_circ, u.weight(geom, &ctx.l))
        })
        .collect();
    let w_circ_weight_plus = spec.project_plus(&w_circ.weight(geom, &ctx.l));
    let mut checked = 0usize;
    let mut failures = Vec::new();
    for y in 0..ctx.n() {
        if !split[y].0 {
            continue;
        }
        for x in 0..ctx.n() {
            if x == y || !ctx.leq[x][y] {
                continue;
            }
            checked += 1;
            let p = table.p_of(ctx, x, y);
            if let Degree::Finite(d) = p.deg_plus(spec) {
                let bound = spec.sub(&spec.project_plus(&split[x].1), &w_circ_weight_plus);
                if spec.compare(&d, &bound) == std::cmp::Ordering::Greater {
                    failures.push(format!(
                        "degree bound fails at x={} y={}",
                        ctx.ball.word_string(x),
                        ctx.ball.word_string(y)
                    ));
                }
            }
            for &s in &ctx.circ_gens {
                if !table.m_of(s, x, y).is_zero() && !split[x].0 {
                    failures.push(format!(
                        "M-vanishing fails at s={} x={} y={}",
                        geom.gen_names[s],
                        ctx.ball.word_string(x),
                        ctx.ball.word_string(y)
                    ));
                }
            }
        }
    }
    Ok(KlasymReport {
        checked_pairs: checked,
        failures,
    })
}

/// Reduce a Hecke element modulo the strictly negative span: keep the
/// non-negative parts of the coefficients.
pub fn reduce_mod_neg(ctx: &KlContext, h: &HElt) -> HElt {
    let spec = ctx.spec();
    let mut out: HElt = BTreeMap::new();
    for (&k, c) in h {
        let nn = c.part_nonneg(spec);
        if !nn.is_zero() {
            out.insert(k, nn);
        }
    }
    out
}

/// Induction data derived from the quarter decomposition at a
/// degenerate (plus-part) weight, checked against the Hecke tables at a
/// nearby weight.
pub struct InductionReport {
    pub sigma_count: usize,
    pub i1_ok: bool,
    pub i2_pairs: usize,
    pub i2_ok: bool,
    pub i3_ok: bool,
    pub i5_pairs: usize,
    pub i5_failures: Vec<String>,
    pub left_ideal_failures: Vec<String>,
    pub truncated: bool,
}

impl InductionReport {
    pub fn all_ok(&self) -> bool {
        self.i1_ok
            && self.i2_ok
            && self.i3_ok
            && self.i5_failures.is_empty()
            && self.left_ideal_failures.is_empty()
    }
}

/// Support condition for a product `T_x C_w` with `w = a·u°·b_σ` in a
/// quarter and `x` minimal in its stabilizer coset: modulo the strictly
/// negative span, the product is `T_{xw}` plus terms in quarters whose
/// gate is strictly below `b_σ`. Together with the additivity,
/// disjointness and base-point conditions this feeds the generalized
/// induction of cells; the left-ideal consequence is checked on the
/// ball-restricted preorder.
pub fn check_induction_conditions(
    ctx: &KlContext,
    table: &KlTable,
    plus_l: &WeightFunction,
) -> Result<InductionReport> {
    use crate::group::{longest_element, parabolic_elements, GroupElement};
    use crate::lowest::quarters;

    let geom = &ctx.geom;
    let qs = quarters(geom, plus_l)?;
    let zero_of = |s: usize| plus_l.class_is_zero(geom.gen_class[s]);
    // U_σ per quarter: a · u° · b_σ over the zero part of the stabilizer.
    let mut u_sets: Vec<Vec<usize>> = Vec::new();
    for q in &qs {
        let zero: Vec<usize> = q.stab.iter().copied().filter(|&s| zero_of(s)).collect();
        let w_i = longest_element(geom, &q.stab)?;
        let w_zero = longest_element(geom, &zero)?;
        let u_circ = w_i.multiply(&w_zero);
        let mut ids = Vec::new();
        for a in parabolic_elements(geom, &zero)? {
            let u = a.multiply(&u_circ).multiply(&q.gate);
            if let Some(id) = ctx.ball.id_of(&u) {
                ids.push(id);
            }
        }
        u_sets.push(ids);
    }
    // Bruhat order among the gates.
    let gate_leq = |a: usize, b: usize| -> bool {
        crate::group::bruhat_leq(geom, &qs[a].gate, &qs[b].gate)
    };
    // Minimal coset member test per quarter: no right descent inside the
    // stabilizer.
    let x_member = |sigma: usize, x: usize| -> bool {
        qs[sigma].stab.iter().all(|&s| ctx.right_up[x][s])
    };
    // I1: the identity is a valid coset representative everywhere.
    let i1_ok = (0..qs.len()).all(|sigma| x_member(sigma, 0));
    // I2: length additivity over all in-ball products x·u.
    let mut i2_pairs = 0usize;
    let mut i2_ok = true;
    for (sigma, ids) in u_sets.iter().enumerate() {
        for &u in ids {
            let lu = ctx.ball.lengths[u];
            for x in 0..ctx.n() {
                if !x_member(sigma, x) || ctx.ball.lengths[x] + lu > ctx.ball.radius {
                    continue;
                }
                let xu = ctx.ball.elements[x].multiply(&ctx.ball.elements[u]);
                i2_pairs += 1;
                if xu.length(geom) != ctx.ball.lengths[x] + lu {
                    i2_ok = false;
                }
            }
        }
    }
    // I3: the translated coset families are pairwise disjoint.
    let mut owner: HashMap<usize, (usize, usize)> = HashMap::new();
    let mut i3_ok = true;
    for (sigma, ids) in u_sets.iter().enumerate() {
        for &u in ids {
            let lu = ctx.ball.lengths[u];
            for x in 0..ctx.n() {
                if !x_member(sigma, x) || ctx.ball.lengths[x] + lu > ctx.ball.radius {
                    continue;
                }
                let xu = ctx.ball.elements[x].multiply(&ctx.ball.elements[u]);
                if let Some(id) = ctx.ball.id_of(&xu) {
                    if let Some(&(s2, u2)) = owner.get(&id) {
                        if (s2, u2) != (sigma, u) {
                            i3_ok = false;
                        }
                    } else {
                        owner.insert(id, (sigma, u));
                    }
                }
            }
        }
    }
    // Quarter membership of a ball element (plus-weight geometry).
    let member_quarter: Vec<Option<usize>> = (0..ctx.n())
        .map(|id| {
            let p = ctx.ball.elements[id].sample_point(geom);
            qs.iter().position(|q| q.contains(geom, &p))
        })
        .collect();
    // I5: support of T_x C_w modulo the negative span.
    let spec = ctx.spec();
    let mut i5_pairs = 0usize;
    let mut i5_failures = Vec::new();
    for (sigma, ids) in u_sets.iter().enumerate() {
        for &w in ids {
            let c = table.c_expansion(ctx, w);
            for x in 0..ctx.n() {
                if !x_member(sigma, x)
                    || ctx.ball.lengths[x] + ctx.ball.lengths[w] > ctx.ball.radius
                {
                    continue;
                }
                i5_pairs += 1;
                let xw = ctx.ball.elements[x].multiply(&ctx.ball.elements[w]);
                let xw_id = ctx
                    .ball
                    .id_of(&xw)
                    .ok_or(Error::BallTooSmall(ctx.ball.radius as usize))?;
                let prod = ctx.t_mult_left(x, &c)?;
                let reduced = reduce_mod_neg(ctx, &prod);
                for (&z, coeff) in &reduced {
                    if z == xw_id {
                        if coeff != &LaurentElement::one(spec) {
                            i5_failures.push(format!(
                                "leading coefficient differs at x={} w={}",
                                ctx.ball.word_string(x),
                                ctx.ball.word_string(w)
                            ));
                        }
                        continue;
                    }
                    let ok = match member_quarter[z] {
                        Some(qz) => gate_leq(qz, sigma) && qz != sigma,
                        None => false,
                    };
                    if !ok {
                        i5_failures.push(format!(
                            "support escapes at x={} w={} z={}",
                            ctx.ball.word_string(x),
                            ctx.ball.word_string(w),
                            ctx.ball.word_string(z)
                        ));
                    }
                }
                if !reduced.contains_key(&xw_id) {
                    i5_failures.push(format!(
                        "leading term missing at x={} w={}",
                        ctx.ball.word_string(x),
                        ctx.ball.word_string(w)
                    ));
                }
            }
        }
    }
    // Ball-restricted left-ideal property of the down-closed piece
    // unions.
    let (edges, truncated) = left_edges(ctx, table);
    let mut left_ideal_failures = Vec::new();
    for sigma in 0..qs.len() {
        let in_nle = |id: usize| -> bool {
            matches!(member_quarter[id], Some(q) if gate_leq(q, sigma))
        };
        for &(w, y, _) in &edges {
            if in_nle(w) && !in_nle(y) {
                left_ideal_failures.push(format!(
                    "edge {} -> {} leaves the piece of sigma {}",
                    ctx.ball.word_string(w),
                    ctx.ball.word_string(y),
                    sigma
                ));
            }
        }
    }
    let _ = GroupElement::identity(geom);
    Ok(InductionReport {
        sigma_count: qs.len(),
        i1_ok,
        i2_pairs,
        i2_ok,
        i3_ok,
        i5_pairs,
        i5_failures,
        left_ideal_failures,
        truncated,
    })
}

/// JSON-serializable table (words as keys), used for the cache.
#[derive(Serialize, Deserialize)]
pub struct KlTableJson {
    pub key: String,
    pub radius: u64,
    pub p: Vec<(String, String, Vec<(Vec<i64>, i64)>)>,
    pub m: Vec<(String, String, String, Vec<(Vec<i64>, i64)>)>,
}

pub fn cache_key(geom: &TypeGeometry, l: &WeightFunction, radius: u64) -> String {
    let weights: Vec<String> = l
        .class_values
        .iter()
        .map(|g| {
            g.coords()
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("_")
        })
        .collect();
    let forms: Vec<String> = l
        .spec
        .forms
        .iter()
        .map(|f| {
            f.iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join("_")
        })
        .collect();
    format!(
        "{}-N{}-w{}-o{}",
        geom.group_type.label(),
        radius,
        weights.join("."),
        forms.join(".")
    )
    .chars()
    .map(|c| if c == '-' { 'm' } else { c })
    .collect()
}

pub fn table_to_json(ctx: &KlContext, table: &KlTable) -> KlTableJson {
    let lau = |p: &LaurentElement| -> Vec<(Vec<i64>, i64)> {
        p.terms
            .iter()
            .map(|(e, c)| (e.coords().to_vec(), *c))
            .collect()
    };
    let mut p: Vec<_> = table
        .p
        .iter()
        .map(|(&(y, w), v)| (ctx.ball.word_string(y), ctx.ball.word_string(w), lau(v)))
        .collect();
    p.sort();
    let mut m: Vec<_> = table
        .m
        .iter()
        .map(|(&(s, y, w), v)| {
            (
                ctx.geom.gen_names[s].clone(),
                ctx.ball.word_string(y),
                ctx.ball.word_string(w),
                lau(v),
            )
        })
        .collect();
    m.sort();
    KlTableJson {
        key: cache_key(&ctx.geom, &ctx.l, ctx.ball.radius),
        radius: ctx.ball.radius,
        p,
        m,
    }
}

/// Rehydrate a cached table; triangularity, negativity and
/// bar-invariance are re-validated before use.
pub fn table_from_json(ctx: &KlContext, json: &KlTableJson) -> Result<KlTable> {
    let spec = ctx.spec();
    if json.key != cache_key(&ctx.geom, &ctx.l, ctx.ball.radius) {
        return Err(Error::Cache("cache key mismatch".into()));
    }
    let mut table = KlTable::default();
    let parse = |terms: &[(Vec<i64>, i64)]| -> Result<LaurentElement> {
        let mut acc = LaurentElement::zero();
        for (coords, c) in terms {
            let e = spec.element(coords.clone())?;
            acc = acc.add(&LaurentElement::monomial(e, *c), spec);
        }
        Ok(acc)
    };
    for (yw, ww, terms) in &json.p {
        let y = crate::group::GroupElement::parse_word(&ctx.geom, yw)?;
        let w = crate::group::GroupElement::parse_word(&ctx.geom, ww)?;
        let (Some(yi), Some(wi)) = (ctx.ball.id_of(&y), ctx.ball.id_of(&w)) else {
            return Err(Error::Cache("cached element outside the ball".into()));
        };
        let p = parse(terms)?;
        if !ctx.leq[yi][wi] {
            return Err(Error::Cache("cached entry violates the order".into()));
        }
        if ctx.l.is_positive() && !p.is_strictly_negative(spec) {
            return Err(Error::Cache("cached entry violates negativity".into()));
        }
        table.p.insert((yi, wi), p);
    }
    for (sn, yw, ww, terms) in &json.m {
        let s = ctx
            .geom
            .gen_index(sn)
            .ok_or_else(|| Error::Cache("unknown generator in cache".into()))?;
        let y = crate::group::GroupElement::parse_word(&ctx.geom, yw)?;
        let w = crate::group::GroupElement::parse_word(&ctx.geom, ww)?;
        let (Some(yi), Some(wi)) = (ctx.ball.id_of(&y), ctx.ball.id_of(&w)) else {
            return Err(Error::Cache("cached element outside the ball".into()));
        };
        let m = parse(terms)?;
        if m.bar(spec) != m {
            return Err(Error::Cache("cached M is not bar-invariant".into()));
        }
        table.m.insert((s, yi, wi), m);
    }
    Ok(table)
}

/// Exponent provenance for the specialization gate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GammaPlusSource {
    PExponent,
    MGap,
    MDefect,
}

/// The positive exponents whose images must stay positive for a
/// specialization to transport the tables.
pub fn gamma_plus(ctx: &KlContext, table: &KlTable) -> Vec<(GammaElement, GammaPlusSource)> {
    let spec = ctx.spec();
    let mut seen: HashSet<GammaElement> = HashSet::new();
    let mut out: Vec<(GammaElement, GammaPlusSource)> = Vec::new();
    let mut push = |g: GammaElement, src: GammaPlusSource, out: &mut Vec<_>| {
        if spec.is_positive(&g) && seen.insert(g.clone()) {
            out.push((g, src));
        }
    };
    for p in table.p.values() {
        for (e, _) in &p.terms {
            push(spec.neg(e), GammaPlusSource::PExponent, &mut out);
        }
    }
    for m in table.m.values() {
        let mut exps: Vec<&GammaElement> = m.terms.iter().map(|(e, _)| e).collect();
        exps.sort_by(|a, b| spec.compare(a, b));
        for pair in exps.windows(2) {
            push(spec.sub(pair[1], pair[0]), GammaPlusSource::MGap, &mut out);
        }
    }
    // Defect polynomials of the inductive condition.
    for &(s, y, w) in table.m.keys() {
        let mut expr = table.p_of(ctx, y, w).mul(&ctx.gen_v[s], spec).neg();
        for z in 0..ctx.n() {
            if !ctx.leq[y][z] || !ctx.leq[z][w] || z == w || ctx.left_up[z][s] {
                continue;
            }
            let m = table.m_of(s, z, w);
            if m.is_zero() {
                continue;
            }
            let p_yz = if y == z {
                LaurentElement::one(spec)
            } else {
                table.p_of(ctx, y, z)
            };
            expr = expr.add(&p_yz.mul(&m, spec), spec);
        }
        for (e, _) in &expr.terms {
            push(spec.neg(e), GammaPlusSource::MDefect, &mut out);
        }
    }
    out
}

/// Gate: every collected exponent stays positive under the
/// specialization (and the homomorphism kills the kernel lattice).
pub fn check_specialization_gate(
    source: &OrderedGroupSpec,
    target: &OrderedGroupSpec,
    theta: &GammaHom,
    gamma_plus: &[(GammaElement, GammaPlusSource)],
) -> bool {
    if !theta.respects_kernel(source, target) {
        return false;
    }
    gamma_plus
        .iter()
        .all(|(g, _)| target.is_positive(&theta.apply(g, target)))
}

/// Transport a table along a specialization, re-verifying a tenth of the
/// entries against the recursion identity in the target.
pub fn specialize_table(
    src: &KlTable,
    dst_ctx: &KlContext,
    theta: &GammaHom,
) -> Result<KlTable> {
    let dst_spec = dst_ctx.spec();
    let mut out = KlTable::default();
    for (&k, p) in &src.p {
        let sp = theta.specialize(p, dst_spec);
        if !sp.is_zero() {
            out.p.insert(k, sp);
        }
    }
    for (&k, m) in &src.m {
        let sm = theta.specialize(m, dst_spec);
        if !sm.is_zero() {
            out.m.insert(k, sm);
        }
    }
    let mut keys: Vec<(usize, usize)> = out.p.keys().copied().collect();
    keys.sort();
    for (i, &(y, w)) in keys.iter().enumerate() {
        if i % 10 != 0 {
            continue;
        }
        let s = dst_ctx.first_left_descent(w).expect("positive length");
        let recomputed = if dst_ctx.left_up[y][s] {
            let sy = dst_ctx.ball.left[y][s].expect("within the ball");
            out.p_of(dst_ctx, sy, w).mul(&dst_ctx.gen_v_inv[s], dst_spec)
        } else {
            let w1 = dst_ctx.ball.left[w][s].expect("within the ball");
            let sy = dst_ctx.ball.left[y][s].expect("within the ball");
            let mut p = out
                .p_of(dst_ctx, y, w1)
                .mul(&dst_ctx.gen_v[s], dst_spec)
                .add(&out.p_of(dst_ctx, sy, w1), dst_spec);
            for z in 0..dst_ctx.n() {
                if z == w1 || !dst_ctx.leq[y][z] || !dst_ctx.leq[z][w1] || dst_ctx.left_up[z][s] {
                    continue;
                }
                let m = out.m_of(s, z, w1);
                if m.is_zero() {
                    continue;
                }
                p = p.sub(&out.p_of(dst_ctx, y, z).mul(&m, dst_spec), dst_spec);
            }
            p
        };
        if recomputed != out.p_of(dst_ctx, y, w) {
            return Err(Error::Invariant(format!(
                "specialized entry fails the recursion at ({y},{w})"
            )));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::GroupType;

    fn ctx_c2(weights: &[i64], radius: u64) -> KlContext {
        let geom = TypeGeometry::new(GroupType::C(2)).unwrap();
        let l = geom.int_weights(weights).unwrap();
        KlContext::new(&geom, &l, radius).unwrap()
    }

    #[test]
    fn bruhat_matrix_matches_oracle() {
        let ctx = ctx_c2(&[1, 1, 1], 5);
        for x in 0..ctx.n() {
            for y in 0..ctx.n() {
                let expect = crate::group::bruhat_leq(
                    &ctx.geom,
                    &ctx.ball.elements[x],
                    &ctx.ball.elements[y],
                );
                assert_eq!(ctx.leq[x][y], expect, "{x} {y}");
            }
        }
    }

    #[test]
    fn quadratic_relation() {
        let ctx = ctx_c2(&[2, 1, 1], 4);
        let spec = ctx.spec();
        // T_s T_s = (v_s - v_s^{-1}) T_s + T_e.
        for s in 0..3 {
            let sid = ctx
                .ball
                .id_of(&crate::group::GroupElement::generator(&ctx.geom, s))
                .unwrap();
            let prod = ctx.t_product(sid, sid).unwrap();
            assert_eq!(prod.get(&0).unwrap(), &LaurentElement::one(spec));
            assert_eq!(prod.get(&sid).unwrap(), &ctx.gen_xi[s]);
        }
    }

    #[test]
    fn additive_products_are_monomial() {
        let ctx = ctx_c2(&[2, 1, 1], 6);
        for x in 0..ctx.n() {
            for y in 0..ctx.n() {
                if ctx.ball.lengths[x] + ctx.ball.lengths[y] > 6 {
                    continue;
                }
                let xy = ctx.ball.elements[x].multiply(&ctx.ball.elements[y]);
                if xy.length(&ctx.geom) != ctx.ball.lengths[x] + ctx.ball.lengths[y] {
                    continue;
                }
                let prod = ctx.t_product(x, y).unwrap();
                assert_eq!(prod.len(), 1);
                let id = ctx.ball.id_of(&xy).unwrap();
                assert_eq!(prod.get(&id).unwrap(), &LaurentElement::one(ctx.spec()));
            }
        }
    }

    #[test]
    fn kl_basics_equal_params() {
        let ctx = ctx_c2(&[1, 1, 1], 6);
        let table = kl_table(&ctx);
        let spec = ctx.spec();
        // P_{e,s} = v_s^{-1}.
        for s in 0..3 {
            let sid = ctx
                .ball
                .id_of(&crate::group::GroupElement::generator(&ctx.geom, s))
                .unwrap();
            assert_eq!(table.p_of(&ctx, 0, sid), ctx.gen_v_inv[s]);
        }
        for (&(y, w), p) in &table.p {
            assert!(y != w);
            assert!(p.is_strictly_negative(spec), "entry at ({y},{w})");
        }
        // Classical positivity at equal parameters (smoke test only).
        for p in table.p.values() {
            for (_, c) in &p.terms {
                assert!(*c >= 0);
            }
        }
    }

    #[test]
    fn c_basis_bar_invariant_and_two_route() {
        let ctx = ctx_c2(&[2, 1, 1], 5);
        let table = kl_table(&ctx);
        let mut bar = BarCache::new(&ctx);
        for w in 0..ctx.n() {
            let c = table.c_expansion(&ctx, w);
            let barred = bar.bar(&ctx, &c).unwrap();
            assert_eq!(barred, c, "bar fails at {}", ctx.ball.word_string(w));
            let alt = bar.c_by_bar(&ctx, w).unwrap();
            assert_eq!(alt, c, "route disagreement at {w}");
        }
    }

    #[test]
    fn bar_is_involutive() {
        let ctx = ctx_c2(&[2, 1, 1], 4);
        let mut bar = BarCache::new(&ctx);
        for w in 0..ctx.n() {
            let mut h: HElt = BTreeMap::new();
            h.insert(w, LaurentElement::one(ctx.spec()));
            let b = bar.bar(&ctx, &h).unwrap();
            let bb = bar.bar(&ctx, &b).unwrap();
            assert_eq!(bb, h);
        }
    }

    #[test]
    fn m_degree_guard() {
        let ctx = ctx_c2(&[2, 1, 1], 6);
        let table = kl_table(&ctx);
        let spec = ctx.spec();
        for (&(s, _, _), m) in &table.m {
            let ls = ctx.l.class_weight(ctx.geom.gen_class[s]);
            if let Degree::Finite(d) = m.deg(spec) {
                assert_eq!(spec.compare(&d, ls), std::cmp::Ordering::Less);
            }
            assert_eq!(&m.bar(spec), m);
        }
    }

    #[test]
    fn recursion_two_asserted() {
        // sy > y and sw < w force P_{y,w} = v_s^{-1} P_{sy,w}.
        let ctx = ctx_c2(&[2, 1, 1], 6);
        let table = kl_table(&ctx);
        let spec = ctx.spec();
        for w in 1..ctx.n() {
            for s in 0..ctx.geom.n_gens() {
                if ctx.left_up[w][s] {
                    continue;
                }
                for y in 0..ctx.n() {
                    if y == w || !ctx.leq[y][w] || !ctx.left_up[y][s] {
                        continue;
                    }
                    let sy = ctx.ball.left[y][s].unwrap();
                    let expect = table.p_of(&ctx, sy, w).mul(&ctx.gen_v_inv[s], spec);
                    assert_eq!(table.p_of(&ctx, y, w), expect);
                }
            }
        }
    }

    #[test]
    fn cs_cw_matches_t_basis() {
        let ctx = ctx_c2(&[2, 1, 1], 5);
        let table = kl_table(&ctx);
        let spec = ctx.spec();
        for w in 0..ctx.n() {
            for s in 0..ctx.geom.n_gens() {
                if ctx.left_up[w][s] && ctx.ball.left[w][s].is_none() {
                    continue;
                }
                // (T_s + v_s^{-1}) C_w in the standard basis.
                let c = table.c_expansion(&ctx, w);
                let mut lhs = ctx.t_mult_gen_left(s, &c).unwrap();
                for (&k, coeff) in &c {
                    add_term(&mut lhs, k, &coeff.mul(&ctx.gen_v_inv[s], spec), spec);
                }
                let mut rhs: HElt = BTreeMap::new();
                for (z, coeff) in cs_times_cw(&ctx, &table, s, w).unwrap() {
                    for (&k, p) in &table.c_expansion(&ctx, z) {
                        add_term(&mut rhs, k, &p.mul(&coeff, spec), spec);
                    }
                }
                assert_eq!(lhs, rhs, "s={s} w={}", ctx.ball.word_string(w));
            }
        }
    }

    #[test]
    fn product_degree_bounds_small() {
        let ctx = ctx_c2(&[2, 1, 1], 6);
        let checked = verify_product_degree_bounds(&ctx, 3).unwrap();
        assert!(checked > 0);
    }

    #[test]
    fn c_bound_examples() {
        let ctx = ctx_c2(&[2, 1, 1], 4);
        // A generator against itself: the single wall.
        for s in 0..3 {
            let sid = ctx
                .ball
                .id_of(&crate::group::GroupElement::generator(&ctx.geom, s))
                .unwrap();
            let (c, dirs) = c_bound(&ctx, sid, sid);
            assert_eq!(&c, ctx.l.class_weight(ctx.geom.gen_class[s]));
            assert_eq!(dirs.len(), 1);
        }
        // Length-additive pairs have an empty direction set.
        let t = ctx
            .ball
            .id_of(&crate::group::GroupElement::generator(&ctx.geom, 0))
            .unwrap();
        let s1 = ctx
            .ball
            .id_of(&crate::group::GroupElement::generator(&ctx.geom, 1))
            .unwrap();
        let (c, dirs) = c_bound(&ctx, t, s1);
        assert!(dirs.is_empty());
        assert_eq!(c, ctx.spec().zero());
    }

    #[test]
    fn left_right_duality() {
        let ctx = ctx_c2(&[2, 1, 1], 6);
        let table = kl_table(&ctx);
        let left = cell_partition(&ctx, &table, Flavor::Left);
        let right = cell_partition(&ctx, &table, Flavor::Right);
        for x in 0..ctx.n() {
            for y in 0..ctx.n() {
                let same_left = left.class_of[x] == left.class_of[y];
                let same_right =
                    right.class_of[ctx.ball.inverse[x]] == right.class_of[ctx.ball.inverse[y]];
                assert_eq!(same_left, same_right);
            }
        }
    }

    #[test]
    fn identity_is_singleton_class() {
        let ctx = ctx_c2(&[2, 1, 1], 6);
        let table = kl_table(&ctx);
        let part = cell_partition(&ctx, &table, Flavor::Left);
        assert_eq!(part.classes[part.class_of[0]], vec![0]);
    }

    #[test]
    fn cache_roundtrip() {
        let ctx = ctx_c2(&[2, 1, 1], 5);
        let table = kl_table(&ctx);
        let json = table_to_json(&ctx, &table);
        let text = serde_json::to_string(&json).unwrap();
        let parsed: KlTableJson = serde_json::from_str(&text).unwrap();
        let back = table_from_json(&ctx, &parsed).unwrap();
        assert_eq!(back.p.len(), table.p.len());
        for (k, v) in &table.p {
            assert_eq!(back.p.get(k).unwrap(), v);
        }
        assert_eq!(back.m.len(), table.m.len());
    }

    #[test]
    fn specialization_identity_gate() {
        let ctx = ctx_c2(&[2, 1, 1], 5);
        let table = kl_table(&ctx);
        let gp = gamma_plus(&ctx, &table);
        let spec = ctx.spec();
        for (g, _) in &gp {
            assert!(spec.is_positive(g));
        }
        let theta = GammaHom::identity(spec);
        assert!(check_specialization_gate(spec, spec, &theta, &gp));
        let copied = specialize_table(&table, &ctx, &theta).unwrap();
        assert_eq!(copied.p.len(), table.p.len());
    }

    #[test]
    fn product_expansion_matches_subset_oracle() {
        // Recursive branch expansion of T_x T_y, following the
        // descent/ascent split letter by letter.
        fn expand(
            ctx: &KlContext,
            word: &[usize],
            z: usize,
            factor: LaurentElement,
            acc: &mut HElt,
        ) {
            let spec = ctx.spec();
            if word.is_empty() {
                add_term(acc, z, &factor, spec);
                return;
            }
            let s = word[word.len() - 1];
            let rest = &word[..word.len() - 1];
            let sz = ctx.ball.left[z][s].unwrap();
            if ctx.left_up[z][s] {
                expand(ctx, rest, sz, factor, acc);
            } else {
                expand(ctx, rest, sz, factor.clone(), acc);
                expand(ctx, rest, z, factor.mul(&ctx.gen_xi[s], spec), acc);
            }
        }
        let ctx = ctx_c2(&[2, 1, 1], 6);
        for x in 0..ctx.n() {
            for y in 0..ctx.n() {
                if ctx.ball.lengths[x] + ctx.ball.lengths[y] > 6 {
                    continue;
                }
                let direct = ctx.t_product(x, y).unwrap();
                let mut oracle: HElt = BTreeMap::new();
                expand(
                    &ctx,
                    &ctx.ball.words[x],
                    y,
                    LaurentElement::one(ctx.spec()),
                    &mut oracle,
                );
                assert_eq!(direct, oracle);
            }
        }
    }
}

#[cfg(test)]
mod induction_tests {
    use super::*;
    use crate::geometry::GroupType;

    #[test]
    fn induction_small_ball() {
        let geom = TypeGeometry::new(GroupType::C(2)).unwrap();
        // Positive weights near the equal-pair facet; sigma data from
        // the facet itself.
        let chamber = geom.int_weights(&[101, 1, 101]).unwrap();
        let plus = geom.int_weights(&[101, 0, 101]).unwrap();
        let ctx = KlContext::new(&geom, &chamber, 6).unwrap();
        let table = kl_table(&ctx);
        let report = check_induction_conditions(&ctx, &table, &plus).unwrap();
        assert!(report.i1_ok);
        assert!(report.i2_ok, "length additivity");
        assert!(report.i3_ok, "disjointness");
        assert!(report.i5_failures.is_empty(), "{:?}", report.i5_failures);
        assert!(
            report.left_ideal_failures.is_empty(),
            "{:?}",
            report.left_ideal_failures
        );
    }
}
