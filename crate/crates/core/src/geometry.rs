//! Root data and affine hyperplane arrangements for the supported
//! irreducible affine Weyl groups, realized with exact rational
//! arithmetic.
//!
//! Each group type carries a list of parallel hyperplane *families*, one
//! per positive root `α`: the family is `{x : (x, α) = n, n ∈ ℤ}`. Walls
//! of the fundamental alcove pick out the generators, and the face type
//! of every hyperplane is determined by its family together with (in the
//! two-parameter-per-direction case) the parity of its offset.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gamma::{GammaElement, WeightFunction};

pub type Rat = Ratio<i64>;

pub fn rat(n: i64) -> Rat {
    Ratio::from_integer(n)
}

pub fn ratq(n: i64, d: i64) -> Rat {
    Ratio::new(n, d)
}

/// Exact affine map `x ↦ lin·x + tr` on `ℚ^dim`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Affine {
    pub dim: usize,
    /// Row-major `dim × dim` matrix.
    pub lin: Vec<Rat>,
    pub tr: Vec<Rat>,
}

impl Affine {
    pub fn identity(dim: usize) -> Self {
        let mut lin = vec![rat(0); dim * dim];
        for i in 0..dim {
            lin[i * dim + i] = rat(1);
        }
        Affine {
            dim,
            lin,
            tr: vec![rat(0); dim],
        }
    }

    pub fn is_identity(&self) -> bool {
        *self == Affine::identity(self.dim)
    }

    pub fn apply(&self, p: &[Rat]) -> Vec<Rat> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                let mut acc = self.tr[i];
                for j in 0..d {
                    acc += self.lin[i * d + j] * p[j];
                }
                acc
            })
            .collect()
    }

    pub fn apply_linear(&self, v: &[Rat]) -> Vec<Rat> {
        let d = self.dim;
        (0..d)
            .map(|i| {
                let mut acc = rat(0);
                for j in 0..d {
                    acc += self.lin[i * d + j] * v[j];
                }
                acc
            })
            .collect()
    }

    /// `self ∘ other` (first `other`, then `self`).
    pub fn compose(&self, other: &Affine) -> Affine {
        let d = self.dim;
        let mut lin = vec![rat(0); d * d];
        for i in 0..d {
            for j in 0..d {
                let mut acc = rat(0);
                for k in 0..d {
                    acc += self.lin[i * d + k] * other.lin[k * d + j];
                }
                lin[i * d + j] = acc;
            }
        }
        let tr = self.apply(&other.tr);
        Affine { dim: d, lin, tr }
    }

    pub fn inverse(&self) -> Affine {
        let d = self.dim;
        // Gaussian elimination on [lin | I].
        let mut a: Vec<Vec<Rat>> = (0..d)
            .map(|i| {
                let mut row: Vec<Rat> = self.lin[i * d..(i + 1) * d].to_vec();
                for k in 0..d {
                    row.push(if k == i { rat(1) } else { rat(0) });
                }
                row
            })
            .collect();
        for col in 0..d {
            let p = (col..d)
                .find(|&r| !a[r][col].is_zero())
                .expect("singular transform");
            a.swap(col, p);
            let inv = a[col][col];
            for c in 0..2 * d {
                a[col][c] /= inv;
            }
            for r in 0..d {
                if r != col && !a[r][col].is_zero() {
                    let f = a[r][col];
                    for c in 0..2 * d {
                        let sub = f * a[col][c];
                        a[r][c] -= sub;
                    }
                }
            }
        }
        let lin: Vec<Rat> = (0..d).flat_map(|i| a[i][d..2 * d].to_vec()).collect();
        let inv = Affine {
            dim: d,
            lin,
            tr: vec![rat(0); d],
        };
        let tr = inv
            .apply_linear(&self.tr)
            .into_iter()
            .map(|x| -x)
            .collect();
        Affine { dim: d, lin: inv.lin, tr }
    }
}

/// Point shifted infinitesimally: `base + ε·dir` for `ε → 0⁺`.
#[derive(Debug, Clone)]
pub struct VirtualPoint {
    pub base: Vec<Rat>,
    pub dir: Vec<Rat>,
}

impl VirtualPoint {
    pub fn apply(&self, t: &Affine) -> VirtualPoint {
        VirtualPoint {
            base: t.apply(&self.base),
            dir: t.apply_linear(&self.dir),
        }
    }
}

/// Face type of a family: one class for all offsets, or alternating by
/// offset parity (even offsets first).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassRule {
    Constant(usize),
    Parity { even: usize, odd: usize },
}

#[derive(Debug, Clone)]
pub struct Family {
    /// Positive root; the family functional is `x ↦ (x, root)`.
    pub root: Vec<Rat>,
    pub class_rule: ClassRule,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GroupType {
    /// Affine type A of the given rank (rank ≥ 2; single generator class).
    A(usize),
    B(usize),
    /// C(1) is the infinite dihedral group with generators t, t'.
    C(usize),
    F4,
    G2,
}

impl GroupType {
    pub fn parse(label: &str, rank: usize) -> Result<GroupType> {
        match (label, rank) {
            ("A", r) if r >= 2 => Ok(GroupType::A(r)),
            ("B", r) if r >= 3 => Ok(GroupType::B(r)),
            ("C", r) if r >= 1 => Ok(GroupType::C(r)),
            ("F", 4) => Ok(GroupType::F4),
            ("G", 2) => Ok(GroupType::G2),
            _ => Err(Error::UnsupportedType(format!("{label}{rank}"))),
        }
    }

    pub fn label(&self) -> String {
        match self {
            GroupType::A(r) => format!("A{r}"),
            GroupType::B(r) => format!("B{r}"),
            GroupType::C(r) => format!("C{r}"),
            GroupType::F4 => "F4".into(),
            GroupType::G2 => "G2".into(),
        }
    }
}

/// The full geometric substrate of one affine Weyl group.
#[derive(Debug, Clone)]
pub struct TypeGeometry {
    pub group_type: GroupType,
    /// Ambient dimension of `V`.
    pub dim: usize,
    /// Semisimple rank (number of walls minus one).
    pub rank: usize,
    /// Points are confined to the sum-zero hyperplane (types A, G2).
    pub sum_zero: bool,
    pub families: Vec<Family>,
    pub class_names: Vec<String>,
    pub gen_names: Vec<String>,
    pub gen_class: Vec<usize>,
    /// Wall of the fundamental alcove per generator: (family, offset).
    pub walls: Vec<(usize, i64)>,
    /// Interior point of the fundamental alcove.
    pub p0: Vec<Rat>,
    /// Coxeter matrix; 0 encodes infinity.
    pub coxeter_m: Vec<Vec<u32>>,
}

fn e(dim: usize, i: usize, c: i64) -> Vec<Rat> {
    let mut v = vec![rat(0); dim];
    v[i] = rat(c);
    v
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| *x * *y).sum()
}

impl TypeGeometry {
    pub fn new(group_type: GroupType) -> Result<TypeGeometry> {
        let mut g = match group_type {
            GroupType::C(1) => Self::build_c1(),
            GroupType::C(n) => Self::build_c(n),
            GroupType::B(n) => Self::build_b(n),
            GroupType::G2 => Self::build_g2(),
            GroupType::F4 => Self::build_f4(),
            GroupType::A(n) => Self::build_a(n),
        };
        g.group_type = group_type;
        g.coxeter_m = g.compute_coxeter_matrix();
        g.validate()?;
        Ok(g)
    }

    fn empty(dim: usize, rank: usize, sum_zero: bool) -> TypeGeometry {
        TypeGeometry {
            group_type: GroupType::C(1),
            dim,
            rank,
            sum_zero,
            families: Vec::new(),
            class_names: Vec::new(),
            gen_names: Vec::new(),
            gen_class: Vec::new(),
            walls: Vec::new(),
            p0: Vec::new(),
            coxeter_m: Vec::new(),
        }
    }

    // Type C̃n, n ≥ 2. Long roots 2εᵢ (t-faces at even offsets, t'-faces
    // at odd), short roots εᵢ±εⱼ (s-faces). Fundamental alcove
    // {x₁ > … > xₙ > 0, 2x₁ < 1}.
    fn build_c(n: usize) -> TypeGeometry {
        let mut g = Self::empty(n, n, false);
        g.class_names = vec!["t".into(), "s".into(), "t'".into()];
        let mut long_idx = vec![0usize; n];
        for i in 0..n {
            long_idx[i] = g.families.len();
            g.families.push(Family {
                root: e(n, i, 2),
                class_rule: ClassRule::Parity { even: 0, odd: 2 },
            });
        }
        let mut diff_idx = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut r = e(n, i, 1);
                r[j] = rat(-1);
                diff_idx.insert((i, j), g.families.len());
                g.families.push(Family {
                    root: r,
                    class_rule: ClassRule::Constant(1),
                });
                let mut r = e(n, i, 1);
                r[j] = rat(1);
                g.families.push(Family {
                    root: r,
                    class_rule: ClassRule::Constant(1),
                });
            }
        }
        g.gen_names.push("t".into());
        g.gen_class.push(0);
        g.walls.push((long_idx[n - 1], 0));
        for k in 1..n {
            g.gen_names.push(format!("s{k}"));
            g.gen_class.push(1);
            g.walls.push((diff_idx[&(n - 1 - k, n - k)], 0));
        }
        g.gen_names.push("t'".into());
        g.gen_class.push(2);
        g.walls.push((long_idx[0], 1));
        g.p0 = (0..n)
            .map(|i| ratq((n - i) as i64, 2 * (n as i64 + 1)))
            .collect();
        g
    }

    // Type C̃1 (infinite dihedral): a single direction with t-faces at
    // integer and t'-faces at half-integer positions.
    fn build_c1() -> TypeGeometry {
        let mut g = Self::empty(1, 1, false);
        g.class_names = vec!["t".into(), "s".into(), "t'".into()];
        g.families.push(Family {
            root: vec![rat(2)],
            class_rule: ClassRule::Parity { even: 0, odd: 2 },
        });
        g.gen_names = vec!["t".into(), "t'".into()];
        g.gen_class = vec![0, 2];
        g.walls = vec![(0, 0), (0, 1)];
        g.p0 = vec![ratq(1, 4)];
        g
    }

    // Type B̃n, n ≥ 3. Short roots εᵢ (t-faces), long roots εᵢ±εⱼ
    // (s-faces). Fundamental alcove {x₁ > … > xₙ > 0, x₁ + x₂ < 1}.
    fn build_b(n: usize) -> TypeGeometry {
        let mut g = Self::empty(n, n, false);
        g.class_names = vec!["s".into(), "t".into()];
        let mut short_idx = vec![0usize; n];
        for i in 0..n {
            short_idx[i] = g.families.len();
            g.families.push(Family {
                root: e(n, i, 1),
                class_rule: ClassRule::Constant(1),
            });
        }
        let mut diff_idx = HashMap::new();
        let mut sum_idx = HashMap::new();
        for i in 0..n {
            for j in i + 1..n {
                let mut r = e(n, i, 1);
                r[j] = rat(-1);
                diff_idx.insert((i, j), g.families.len());
                g.families.push(Family {
                    root: r,
                    class_rule: ClassRule::Constant(0),
                });
                let mut r = e(n, i, 1);
                r[j] = rat(1);
                sum_idx.insert((i, j), g.families.len());
                g.families.push(Family {
                    root: r,
                    class_rule: ClassRule::Constant(0),
                });
            }
        }
        g.gen_names.push("t".into());
        g.gen_class.push(1);
        g.walls.push((short_idx[n - 1], 0));
        for k in 1..n {
            g.gen_names.push(format!("s{k}"));
            g.gen_class.push(0);
            g.walls.push((diff_idx[&(n - 1 - k, n - k)], 0));
        }
        g.gen_names.push(format!("s{n}"));
        g.gen_class.push(0);
        g.walls.push((sum_idx[&(0, 1)], 1));
        g.p0 = (0..n)
            .map(|i| ratq((n - i) as i64, 2 * (n as i64 + 1)))
            .collect();
        g
    }

    // Type G̃2 in the sum-zero plane of ℚ³: short roots εᵢ-εⱼ (t-faces),
    // long roots like -2ε₁+ε₂+ε₃ (s-faces).
    fn build_g2() -> TypeGeometry {
        let mut g = Self::empty(3, 2, true);
        g.class_names = vec!["s".into(), "t".into()];
        let v = |a: i64, b: i64, c: i64| vec![rat(a), rat(b), rat(c)];
        // Positive system for simple roots α1 = ε1-ε2 (short),
        // α2 = -2ε1+ε2+ε3 (long).
        let shorts = [v(1, -1, 0), v(0, -1, 1), v(-1, 0, 1)];
        let longs = [v(-2, 1, 1), v(1, -2, 1), v(-1, -1, 2)];
        for r in &shorts {
            g.families.push(Family {
                root: r.clone(),
                class_rule: ClassRule::Constant(1),
            });
        }
        for r in &longs {
            g.families.push(Family {
                root: r.clone(),
                class_rule: ClassRule::Constant(0),
            });
        }
        g.gen_names = vec!["t".into(), "s1".into(), "s2".into()];
        g.gen_class = vec![1, 0, 0];
        // Walls: α1 at 0, α2 at 0, highest root -ε1-ε2+2ε3 at 1.
        g.walls = vec![(0, 0), (3, 0), (5, 1)];
        g.p0 = vec![ratq(-1, 12), ratq(-2, 12), ratq(3, 12)];
        g
    }

    // Type F̃4. Long roots εᵢ±εⱼ (t-faces); short roots εᵢ and
    // (ε₁±ε₂±ε₃±ε₄)/2 (s-faces).
    fn build_f4() -> TypeGeometry {
        let mut g = Self::empty(4, 4, false);
        g.class_names = vec!["s".into(), "t".into()];
        let mut idx: HashMap<String, usize> = HashMap::new();
        let mut push = |g: &mut TypeGeometry, key: String, root: Vec<Rat>, class: usize| {
            idx.insert(key, g.families.len());
            g.families.push(Family {
                root,
                class_rule: ClassRule::Constant(class),
            });
        };
        for i in 0..4 {
            for j in i + 1..4 {
                let mut r = e(4, i, 1);
                r[j] = rat(-1);
                push(&mut g, format!("d{i}{j}"), r, 1);
                let mut r = e(4, i, 1);
                r[j] = rat(1);
                push(&mut g, format!("p{i}{j}"), r, 1);
            }
        }
        for i in 0..4 {
            push(&mut g, format!("e{i}"), e(4, i, 1), 0);
        }
        for s2 in [1i64, -1] {
            for s3 in [1i64, -1] {
                for s4 in [1i64, -1] {
                    let r = vec![ratq(1, 2), ratq(s2, 2), ratq(s3, 2), ratq(s4, 2)];
                    push(&mut g, format!("h{s2}{s3}{s4}"), r, 0);
                }
            }
        }
        // Diagram: s2 - s1 = t1 - t2 - t3 with the affine node t3 on the
        // highest root ε1+ε2.
        g.gen_names = vec![
            "s2".into(),
            "s1".into(),
            "t1".into(),
            "t2".into(),
            "t3".into(),
        ];
        g.gen_class = vec![0, 0, 1, 1, 1];
        g.walls = vec![
            (idx["h-1-1-1"], 0), // (ε1-ε2-ε3-ε4)/2
            (idx["e3"], 0),      // ε4
            (idx["d23"], 0),     // ε3-ε4
            (idx["d12"], 0),     // ε2-ε3
            (idx["p01"], 1),     // ε1+ε2 = 1
        ];
        g.p0 = vec![ratq(11, 24), ratq(5, 24), ratq(3, 24), ratq(1, 24)];
        g
    }

    // Type Ãn (n ≥ 2) in the sum-zero hyperplane of ℚ^{n+1}; a single
    // generator class.
    fn build_a(n: usize) -> TypeGeometry {
        let d = n + 1;
        let mut g = Self::empty(d, n, true);
        g.class_names = vec!["s".into()];
        let mut idx = HashMap::new();
        for i in 0..d {
            for j in i + 1..d {
                let mut r = e(d, i, 1);
                r[j] = rat(-1);
                idx.insert((i, j), g.families.len());
                g.families.push(Family {
                    root: r,
                    class_rule: ClassRule::Constant(0),
                });
            }
        }
        for k in 1..=n {
            g.gen_names.push(format!("s{k}"));
            g.gen_class.push(0);
            g.walls.push((idx[&(k - 1, k)], 0));
        }
        g.gen_names.push(format!("s{}", n + 1));
        g.gen_class.push(0);
        g.walls.push((idx[&(0, d - 1)], 1));
        let dd = d as i64;
        g.p0 = (0..d)
            .map(|i| ratq(dd - 1 - 2 * i as i64, 2 * dd * dd))
            .collect();
        g
    }

    pub fn n_gens(&self) -> usize {
        self.gen_names.len()
    }

    pub fn n_classes(&self) -> usize {
        self.class_names.len()
    }

    pub fn functional(&self, family: usize, p: &[Rat]) -> Rat {
        dot(&self.families[family].root, p)
    }

    pub fn family_values(&self, p: &[Rat]) -> Vec<Rat> {
        (0..self.families.len())
            .map(|f| self.functional(f, p))
            .collect()
    }

    /// Coroot of the family root: `2α/(α,α)`.
    pub fn coroot(&self, family: usize) -> Vec<Rat> {
        let r = &self.families[family].root;
        let norm = dot(r, r);
        r.iter().map(|x| *x * rat(2) / norm).collect()
    }

    pub fn coroot_pairing(&self, family: usize, p: &[Rat]) -> Rat {
        dot(&self.coroot(family), p)
    }

    /// Reflection across the hyperplane `{(x, α) = offset}` of a family.
    pub fn reflection(&self, family: usize, offset: i64) -> Affine {
        let root = &self.families[family].root;
        let norm = dot(root, root);
        let d = self.dim;
        let mut lin = Affine::identity(d).lin;
        for i in 0..d {
            for j in 0..d {
                lin[i * d + j] -= rat(2) * root[i] * root[j] / norm;
            }
        }
        let tr = root
            .iter()
            .map(|x| rat(2) * rat(offset) * *x / norm)
            .collect();
        Affine { dim: d, lin, tr }
    }

    pub fn generator_reflection(&self, gen: usize) -> Affine {
        let (f, n) = self.walls[gen];
        self.reflection(f, n)
    }

    /// Face class of the hyperplane `(family, offset)`.
    pub fn face_class(&self, family: usize, offset: i64) -> usize {
        match self.families[family].class_rule {
            ClassRule::Constant(c) => c,
            ClassRule::Parity { even, odd } => {
                if offset.rem_euclid(2) == 0 {
                    even
                } else {
                    odd
                }
            }
        }
    }

    /// Weight of a single hyperplane.
    pub fn hyperplane_weight(&self, l: &WeightFunction, family: usize, offset: i64) -> GammaElement {
        l.class_weight(self.face_class(family, offset)).clone()
    }

    /// Maximal weight over all hyperplanes of the family.
    pub fn direction_weight(&self, l: &WeightFunction, family: usize) -> GammaElement {
        match self.families[family].class_rule {
            ClassRule::Constant(c) => l.class_weight(c).clone(),
            ClassRule::Parity { even, odd } => {
                let a = l.class_weight(even);
                let b = l.class_weight(odd);
                if l.spec.compare(a, b) == Ordering::Less {
                    b.clone()
                } else {
                    a.clone()
                }
            }
        }
    }

    pub fn is_maximal_weight(&self, l: &WeightFunction, family: usize, offset: i64) -> bool {
        let w = self.hyperplane_weight(l, family, offset);
        w == self.direction_weight(l, family)
    }

    /// Smallest stride such that every maximal-weight offset of the
    /// family is a multiple of it (1, or 2 when the odd offsets carry
    /// strictly smaller weight).
    pub fn maximal_stride(&self, l: &WeightFunction, family: usize) -> i64 {
        match self.families[family].class_rule {
            ClassRule::Constant(_) => 1,
            ClassRule::Parity { even, odd } => {
                let a = l.class_weight(even);
                let b = l.class_weight(odd);
                match l.spec.compare(a, b) {
                    Ordering::Equal => 1,
                    Ordering::Greater => 2,
                    Ordering::Less => panic!("weight convention violated: odd above even"),
                }
            }
        }
    }

    /// Families whose direction weight is positive.
    pub fn positive_weight_families(&self, l: &WeightFunction) -> Vec<usize> {
        (0..self.families.len())
            .filter(|&f| l.spec.is_positive(&self.direction_weight(l, f)))
            .collect()
    }

    /// Number of integers strictly between the functional values of two
    /// alcove sample points, per family; the total is the gallery
    /// distance between the alcoves.
    pub fn separation_count(&self, p: &[Rat], q: &[Rat]) -> u64 {
        (0..self.families.len())
            .map(|f| {
                let a = self.functional(f, p);
                let b = self.functional(f, q);
                count_integers_between(a, b)
            })
            .sum()
    }

    /// Separating hyperplanes between the alcoves at two sample points,
    /// as (family, offset) pairs.
    pub fn separating_hyperplanes(&self, p: &[Rat], q: &[Rat]) -> Vec<(usize, i64)> {
        let mut out = Vec::new();
        for f in 0..self.families.len() {
            let a = self.functional(f, p);
            let b = self.functional(f, q);
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let mut n = lo.floor().to_integer() + 1;
            while rat(n) < hi {
                out.push((f, n));
                n += 1;
            }
        }
        out
    }

    /// The strip of the family around a point: open interval between the
    /// consecutive maximal-weight offsets bracketing it.
    pub fn strip_around(
        &self,
        l: &WeightFunction,
        family: usize,
        value: Rat,
    ) -> Result<(i64, i64)> {
        if !l.spec.is_positive(&self.direction_weight(l, family)) {
            return Err(Error::ZeroWeightDirection);
        }
        let stride = self.maximal_stride(l, family);
        let lo = (value / rat(stride)).floor().to_integer() * stride;
        Ok((lo, lo + stride))
    }

    /// Membership of a sample point in the union of maximal strips
    /// around the fundamental alcove.
    pub fn in_strip_union(&self, l: &WeightFunction, p: &[Rat]) -> bool {
        for f in self.positive_weight_families(l) {
            let (lo, hi) = self.strip_around(l, f, self.functional(f, &self.p0)).unwrap();
            let v = self.functional(f, p);
            if rat(lo) < v && v < rat(hi) {
                return true;
            }
        }
        false
    }

    fn compute_coxeter_matrix(&self) -> Vec<Vec<u32>> {
        let n = self.n_gens();
        let mut m = vec![vec![1u32; n]; n];
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let prod = self
                    .generator_reflection(i)
                    .compose(&self.generator_reflection(j));
                let mut cur = prod.clone();
                let mut order = 0u32;
                for k in 1..=64 {
                    if cur.is_identity() {
                        order = k;
                        break;
                    }
                    cur = cur.compose(&prod);
                }
                m[i][j] = order; // 0 = infinite
            }
        }
        m
    }

    fn validate(&self) -> Result<()> {
        // Conjugacy classes from odd bonds must match the class labels.
        let n = self.n_gens();
        let mut cls: Vec<usize> = (0..n).collect();
        loop {
            let mut changed = false;
            for i in 0..n {
                for j in 0..n {
                    if i != j && self.coxeter_m[i][j] != 0 && self.coxeter_m[i][j] % 2 == 1 {
                        let c = cls[i].min(cls[j]);
                        if cls[i] != c || cls[j] != c {
                            cls[i] = c;
                            cls[j] = c;
                            changed = true;
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for i in 0..n {
            for j in 0..n {
                if (cls[i] == cls[j]) != (self.gen_class[i] == self.gen_class[j]) {
                    return Err(Error::Invariant(format!(
                        "generator classes disagree with diagram bonds at {} / {}",
                        self.gen_names[i], self.gen_names[j]
                    )));
                }
            }
        }
        // p0 must be interior to the fundamental alcove.
        for f in 0..self.families.len() {
            let v = self.functional(f, &self.p0);
            if v <= rat(0) || v >= rat(1) {
                return Err(Error::Invariant(format!(
                    "base point escapes the fundamental alcove on family {f}"
                )));
            }
        }
        Ok(())
    }

    pub fn class_index(&self, name: &str) -> Option<usize> {
        self.class_names.iter().position(|c| c == name)
    }

    pub fn gen_index(&self, name: &str) -> Option<usize> {
        self.gen_names.iter().position(|c| c == name)
    }

    /// Weight function from per-class integer values (in diagram class
    /// order), valued in `(ℤ, ≤)`.
    pub fn int_weights(&self, values: &[i64]) -> Result<WeightFunction> {
        if values.len() != self.n_classes() {
            return Err(Error::InvalidWeight(format!(
                "expected {} class values, got {}",
                self.n_classes(),
                values.len()
            )));
        }
        let w = WeightFunction::integers(values);
        self.check_weight_convention(&w)?;
        Ok(w)
    }

    /// The convention for two-parameter directions: the even-offset class
    /// must weigh at least the odd-offset class, and weights must be
    /// non-negative.
    pub fn check_weight_convention(&self, l: &WeightFunction) -> Result<()> {
        if l.class_values.len() != self.n_classes() {
            return Err(Error::InvalidWeight("class count mismatch".into()));
        }
        if !l.is_non_negative() {
            return Err(Error::InvalidWeight("weights must be non-negative".into()));
        }
        for fam in &self.families {
            if let ClassRule::Parity { even, odd } = fam.class_rule {
                if l.spec.compare(l.class_weight(even), l.class_weight(odd)) == Ordering::Less {
                    return Err(Error::InvalidWeight(
                        "convention requires L(t) >= L(t')".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// The sub-arrangement of positive-weight hyperplanes, reindexed so its
/// offsets run over `ℤ`. For a two-parameter direction whose odd offsets
/// have weight zero the stride is 2 and only even hyperplanes survive.
#[derive(Debug, Clone)]
pub struct TildeGeometry {
    /// (family in the parent geometry, stride).
    pub fams: Vec<(usize, i64)>,
    /// Walls of the fundamental tilde-alcove: (index into `fams`, offset
    /// 0 or 1).
    pub walls: Vec<(usize, i64)>,
}

impl TildeGeometry {
    pub fn new(geom: &TypeGeometry, l: &WeightFunction) -> Result<TildeGeometry> {
        let mut fams = Vec::new();
        for f in 0..geom.families.len() {
            match geom.families[f].class_rule {
                ClassRule::Constant(c) => {
                    if l.spec.is_positive(l.class_weight(c)) {
                        fams.push((f, 1));
                    }
                }
                ClassRule::Parity { even, odd } => {
                    let we = l.spec.is_positive(l.class_weight(even));
                    let wo = l.spec.is_positive(l.class_weight(odd));
                    match (we, wo) {
                        (true, true) => fams.push((f, 1)),
                        (true, false) => fams.push((f, 2)),
                        (false, false) => {}
                        (false, true) => {
                            return Err(Error::InvalidWeight(
                                "convention requires L(t) >= L(t')".into(),
                            ))
                        }
                    }
                }
            }
        }
        if fams.is_empty() {
            return Err(Error::InvalidWeight(
                "zero weight function has no positive sub-arrangement".into(),
            ));
        }
        let mut tg = TildeGeometry {
            fams,
            walls: Vec::new(),
        };
        // A hyperplane bounds the fundamental tilde-alcove exactly when
        // reflecting the base point across it crosses no other
        // tilde-hyperplane.
        let mut walls = Vec::new();
        for i in 0..tg.fams.len() {
            for off in [0i64, 1] {
                let sigma = tg.reflection(geom, i, off);
                let image = sigma.apply(&geom.p0);
                if tg.separation_count(geom, &geom.p0, &image) == 1 {
                    walls.push((i, off));
                }
            }
        }
        tg.walls = walls;
        Ok(tg)
    }

    pub fn functional(&self, geom: &TypeGeometry, i: usize, p: &[Rat]) -> Rat {
        let (fam, stride) = self.fams[i];
        geom.functional(fam, p) / rat(stride)
    }

    /// Reflection across the tilde-hyperplane `(i, offset)`.
    pub fn reflection(&self, geom: &TypeGeometry, i: usize, offset: i64) -> Affine {
        let (fam, stride) = self.fams[i];
        geom.reflection(fam, offset * stride)
    }

    pub fn separation_count(&self, geom: &TypeGeometry, p: &[Rat], q: &[Rat]) -> u64 {
        (0..self.fams.len())
            .map(|i| {
                count_integers_between(self.functional(geom, i, p), self.functional(geom, i, q))
            })
            .sum()
    }

    /// Is the point inside the closed fundamental tilde-alcove?
    pub fn in_closed_base_alcove(&self, geom: &TypeGeometry, p: &[Rat]) -> bool {
        (0..self.fams.len()).all(|i| {
            let v = self.functional(geom, i, p);
            rat(0) <= v && v <= rat(1)
        })
    }

    /// Walk from the fundamental tilde-alcove to the one containing `q`,
    /// returning the transform `g` (and its inverse) with `q ∈ g(Ã₀)`.
    pub fn locate(&self, geom: &TypeGeometry, q: &[Rat]) -> (Affine, Affine) {
        let mut g = Affine::identity(geom.dim);
        let mut ginv = Affine::identity(geom.dim);
        let mut y = q.to_vec();
        let mut guard = 0usize;
        loop {
            let mut crossed = false;
            for &(i, off) in &self.walls {
                let v = self.functional(geom, i, &y);
                let beyond = if off == 0 { v < rat(0) } else { v > rat(1) };
                if beyond {
                    let sigma = self.reflection(geom, i, off);
                    g = g.compose(&sigma);
                    ginv = sigma.compose(&ginv);
                    y = sigma.apply(&y);
                    crossed = true;
                    break;
                }
            }
            if !crossed {
                break;
            }
            guard += 1;
            assert!(guard < 100_000, "tilde walk failed to terminate");
        }
        debug_assert!(self.in_closed_base_alcove(geom, &y));
        (g, ginv)
    }
}

pub fn count_integers_between(a: Rat, b: Rat) -> u64 {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let lo_f = lo.floor().to_integer();
    let hi_f = if hi.is_integer() {
        hi.to_integer() - 1
    } else {
        hi.floor().to_integer()
    };
    (hi_f - lo_f).max(0) as u64
}

/// Integers n with a < n < b (in either order), as an iterator-friendly
/// inclusive range.
pub fn integer_range_between(a: Rat, b: Rat) -> std::ops::RangeInclusive<i64> {
    let (lo, hi) = if a < b { (a, b) } else { (b, a) };
    let start = lo.floor().to_integer() + 1;
    let end = if hi.is_integer() {
        hi.to_integer() - 1
    } else {
        hi.floor().to_integer()
    };
    start..=end
}

#[cfg(test)]
mod tests {
    use super::*;

    fn expect_m(g: &TypeGeometry, a: &str, b: &str, m: u32) {
        let i = g.gen_index(a).unwrap();
        let j = g.gen_index(b).unwrap();
        assert_eq!(g.coxeter_m[i][j], m, "m({a},{b})");
    }

    #[test]
    fn c2_diagram() {
        let g = TypeGeometry::new(GroupType::C(2)).unwrap();
        expect_m(&g, "t", "s1", 4);
        expect_m(&g, "s1", "t'", 4);
        expect_m(&g, "t", "t'", 2);
        assert_eq!(g.families.len(), 4);
    }

    #[test]
    fn c1_diagram() {
        let g = TypeGeometry::new(GroupType::C(1)).unwrap();
        expect_m(&g, "t", "t'", 0);
    }

    #[test]
    fn c3_diagram() {
        let g = TypeGeometry::new(GroupType::C(3)).unwrap();
        expect_m(&g, "t", "s1", 4);
        expect_m(&g, "s1", "s2", 3);
        expect_m(&g, "s2", "t'", 4);
        expect_m(&g, "t", "s2", 2);
        expect_m(&g, "t", "t'", 2);
    }

    #[test]
    fn b3_diagram() {
        let g = TypeGeometry::new(GroupType::B(3)).unwrap();
        expect_m(&g, "t", "s1", 4);
        expect_m(&g, "s1", "s2", 3);
        expect_m(&g, "s1", "s3", 3);
        expect_m(&g, "s2", "s3", 2);
        expect_m(&g, "t", "s2", 2);
        assert_eq!(g.families.len(), 9);
    }

    #[test]
    fn b4_diagram() {
        let g = TypeGeometry::new(GroupType::B(4)).unwrap();
        expect_m(&g, "t", "s1", 4);
        expect_m(&g, "s1", "s2", 3);
        expect_m(&g, "s2", "s3", 3);
        expect_m(&g, "s2", "s4", 3);
        expect_m(&g, "s3", "s4", 2);
    }

    #[test]
    fn g2_diagram() {
        let g = TypeGeometry::new(GroupType::G2).unwrap();
        expect_m(&g, "t", "s1", 6);
        expect_m(&g, "s1", "s2", 3);
        expect_m(&g, "t", "s2", 2);
        assert_eq!(g.families.len(), 6);
    }

    #[test]
    fn f4_diagram() {
        let g = TypeGeometry::new(GroupType::F4).unwrap();
        expect_m(&g, "s2", "s1", 3);
        expect_m(&g, "s1", "t1", 4);
        expect_m(&g, "t1", "t2", 3);
        expect_m(&g, "t2", "t3", 3);
        expect_m(&g, "s2", "t1", 2);
        expect_m(&g, "t1", "t3", 2);
        // 24 long + 24 short roots in total, stored as 24 positives.
        assert_eq!(g.families.len(), 24);
        let long = g
            .families
            .iter()
            .filter(|f| f.class_rule == ClassRule::Constant(1))
            .count();
        assert_eq!(long, 12);
    }

    #[test]
    fn a2_diagram() {
        let g = TypeGeometry::new(GroupType::A(2)).unwrap();
        expect_m(&g, "s1", "s2", 3);
        expect_m(&g, "s1", "s3", 3);
        expect_m(&g, "s2", "s3", 3);
    }

    #[test]
    fn g2_root_count() {
        let g = TypeGeometry::new(GroupType::G2).unwrap();
        assert_eq!(g.families.len() * 2, 12);
    }

    #[test]
    fn reflection_is_involution() {
        let g = TypeGeometry::new(GroupType::C(2)).unwrap();
        for gen in 0..g.n_gens() {
            let r = g.generator_reflection(gen);
            assert!(r.compose(&r).is_identity());
        }
    }

    #[test]
    fn integer_counting() {
        assert_eq!(count_integers_between(ratq(1, 2), ratq(7, 2)), 3);
        assert_eq!(count_integers_between(ratq(7, 2), ratq(1, 2)), 3);
        assert_eq!(count_integers_between(ratq(1, 3), ratq(2, 3)), 0);
        assert_eq!(count_integers_between(ratq(-1, 2), ratq(1, 2)), 1);
    }

    #[test]
    fn c2_face_classes() {
        let g = TypeGeometry::new(GroupType::C(2)).unwrap();
        // Long family 2ε1 at offset 0 is a t-face, offset 1 a t'-face.
        let f_2e1 = g
            .families
            .iter()
            .position(|f| f.root == vec![rat(2), rat(0)])
            .unwrap();
        assert_eq!(g.class_names[g.face_class(f_2e1, 0)], "t");
        assert_eq!(g.class_names[g.face_class(f_2e1, 1)], "t'");
        let l = g.int_weights(&[2, 1, 1]).unwrap();
        let a = g.hyperplane_weight(&l, f_2e1, 0);
        assert_eq!(a.coords(), &[2]);
        // Direction weight is max over parities: a > c picks a.
        assert_eq!(g.direction_weight(&l, f_2e1).coords(), &[2]);
        assert_eq!(g.maximal_stride(&l, f_2e1), 2);
        let leq = g.int_weights(&[1, 1, 1]).unwrap();
        assert_eq!(g.maximal_stride(&leq, f_2e1), 1);
    }

    #[test]
    fn weight_convention_enforced() {
        let g = TypeGeometry::new(GroupType::C(2)).unwrap();
        assert!(g.int_weights(&[1, 1, 2]).is_err());
        assert!(g.int_weights(&[2, -1, 1]).is_err());
    }
}
