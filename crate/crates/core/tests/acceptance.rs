//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its runtime (run with `--nocapture` to see them).

use std::time::Instant;

use affine_cells::gamma::{Degree, WeightFunction};
use affine_cells::geometry::{GroupType, TypeGeometry};
use affine_cells::group::{
    is_l_additive_pair, is_length_additive_pair, Ball, GroupElement, SemidirectSplit,
};
use affine_cells::hecke::{
    cell_partition, check_induction_conditions, check_specialization_gate, gamma_plus, kl_table,
    specialize_table, verify_klasym, verify_product_degree_bounds, BarCache, Flavor, KlContext,
};
use affine_cells::lowest::{
    c2_regime_weights, cmin_semidirect_check, in_cmin_algebraic, in_cmin_geometric,
    in_cmin_special_point, nu, SearchOutcome, C2_REGIMES,
};
use affine_cells::params::{
    order_from_claim, semicontinuity_check, specialization_hom, ClaimOrder,
};

fn c2() -> TypeGeometry {
    TypeGeometry::new(GroupType::C(2)).unwrap()
}

fn words(geom: &TypeGeometry, set: &[GroupElement]) -> Vec<String> {
    let mut v: Vec<String> = set.iter().map(|w| w.word_string(geom)).collect();
    v.sort();
    v
}

#[test]
fn criterion_01_wmax_regimes() {
    let t0 = Instant::now();
    let geom = c2();
    let expected: [(&str, Vec<&str>); 6] = [
        ("a>c,b>0", vec!["t.s1.t.s1"]),
        ("a>c,b=0", vec!["t.s1.t", "t.s1.t.s1"]),
        ("a=c>0,b>0", vec!["s1.t'.s1.t'", "t.s1.t.s1"]),
        (
            "a=c>0,b=0",
            vec!["t'.s1.t'", "s1.t'.s1.t'", "t.s1.t", "t.s1.t.s1", "t.t'"],
        ),
        (
            "a=c=0,b>0",
            vec!["s1.t.s1", "s1.t'.s1", "t.s1.t.s1", "s1.t'.s1.t'"],
        ),
        ("zero", vec![]),
    ];
    for (regime, expect) in expected {
        let l = geom
            .int_weights(&c2_regime_weights(regime).unwrap())
            .unwrap();
        let (nu_val, wmax) = nu(&geom, &l);
        if regime == "zero" {
            // Everything in the parabolic union has weight zero.
            assert_eq!(nu_val.coords(), &[0]);
            assert!(wmax.len() > 5, "zero regime returns the whole union");
            continue;
        }
        let mut expect: Vec<String> = expect.iter().map(|s| s.to_string()).collect();
        expect.sort();
        assert_eq!(words(&geom, &wmax), expect, "regime {regime}");
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "runtime budget: {elapsed:?}");
    println!("criterion 1: PASS ({elapsed:?})");
}

#[test]
fn criterion_02_lowest_cell_oracle_equivalence() {
    let t0 = Instant::now();
    // All six regimes on the rank-2 double-bond chain, ball 12.
    let geom = c2();
    let ball = Ball::new(&geom, 12);
    for regime in C2_REGIMES {
        let reg_t0 = Instant::now();
        let l = geom
            .int_weights(&c2_regime_weights(regime).unwrap())
            .unwrap();
        let (nu_val, wmax) = nu(&geom, &l);
        let _ = nu_val;
        for w in &ball.elements {
            let geo = in_cmin_geometric(&geom, &l, w);
            let alg = in_cmin_algebraic(&geom, &l, &wmax, &ball, w);
            assert_eq!(
                alg,
                if geo {
                    SearchOutcome::Member
                } else {
                    SearchOutcome::NotMember
                },
                "regime {regime} at {}",
                w.word_string(&geom)
            );
            // The special-point description agrees as well.
            let spe = in_cmin_special_point(&geom, &l, &wmax, &ball, w);
            assert_eq!(alg, spe, "descriptions diverge at {}", w.word_string(&geom));
        }
        assert!(reg_t0.elapsed().as_secs() < 60, "regime {regime} budget");
    }
    // Both zero-class choices on the triple-bond rank-2 group, ball 10.
    let geom = TypeGeometry::new(GroupType::G2).unwrap();
    let ball = Ball::new(&geom, 10);
    for weights in [[1i64, 0], [0, 1]] {
        let reg_t0 = Instant::now();
        let l = geom.int_weights(&weights).unwrap();
        let (_, wmax) = nu(&geom, &l);
        for w in &ball.elements {
            let geo = in_cmin_geometric(&geom, &l, w);
            let alg = in_cmin_algebraic(&geom, &l, &wmax, &ball, w);
            assert_eq!(
                alg,
                if geo {
                    SearchOutcome::Member
                } else {
                    SearchOutcome::NotMember
                },
                "weights {weights:?} at {}",
                w.word_string(&geom)
            );
        }
        assert!(reg_t0.elapsed().as_secs() < 60, "budget {weights:?}");
    }
    println!("criterion 2: PASS ({:?})", t0.elapsed());
}

#[test]
fn criterion_03_length_additivity_duality() {
    let t0 = Instant::now();
    for (ty, weight_sets) in [
        (GroupType::C(2), vec![vec![2i64, 0, 1], vec![1, 1, 1]]),
        (GroupType::B(3), vec![vec![1, 0], vec![0, 1]]),
    ] {
        let geom = TypeGeometry::new(ty).unwrap();
        let ball = Ball::new(&geom, 10);
        // Length equals the separating-hyperplane count.
        for (id, w) in ball.elements.iter().enumerate() {
            assert_eq!(w.length(&geom), ball.lengths[id]);
            assert_eq!(
                geom.separating_hyperplanes(&geom.p0, &w.sample_point(&geom))
                    .len() as u64,
                ball.lengths[id]
            );
        }
        let weights: Vec<WeightFunction> = weight_sets
            .iter()
            .map(|w| geom.int_weights(w).unwrap())
            .collect();
        for x in &ball.elements {
            let lx = x.length(&geom);
            for y in &ball.elements {
                if lx + y.length(&geom) > 10 {
                    continue;
                }
                let xy = x.multiply(y);
                let additive = xy.length(&geom) == lx + y.length(&geom);
                assert_eq!(
                    is_length_additive_pair(&geom, x, y),
                    additive,
                    "length criterion"
                );
                for l in &weights {
                    let value_additive = xy.weight(&geom, l)
                        == l.spec.add(&x.weight(&geom, l), &y.weight(&geom, l));
                    assert_eq!(
                        is_l_additive_pair(&geom, l, x, y),
                        value_additive,
                        "weighted criterion"
                    );
                }
            }
        }
    }
    println!("criterion 3: PASS ({:?})", t0.elapsed());
}

#[test]
fn criterion_04_kl_invariants_three_orders() {
    let t0 = Instant::now();
    let geom = c2();
    let n0 = 10i64;
    let orders: Vec<(&str, WeightFunction)> = vec![
        (
            "pair-gap order",
            WeightFunction::generic(
                order_from_claim(ClaimOrder::CPairGap, &[2 * n0 * n0, 1, n0 * n0 + 1], n0)
                    .unwrap(),
            ),
        ),
        (
            "close-pair order",
            WeightFunction::generic(
                order_from_claim(ClaimOrder::CPairClose, &[n0 * n0 + 1, 1, n0 * n0 + 1], n0)
                    .unwrap(),
            ),
        ),
        ("equal parameters", WeightFunction::integers(&[1, 1, 1])),
    ];
    for (name, l) in orders {
        let ctx = KlContext::new(&geom, &l, 8).unwrap();
        let table = kl_table(&ctx);
        let spec = ctx.spec();
        // Strict negativity of the strict entries.
        for (&(y, w), p) in &table.p {
            assert!(y != w && ctx.leq[y][w]);
            assert!(p.is_strictly_negative(spec), "{name} P({y},{w})");
        }
        // Bar invariance of every canonical basis element.
        let mut bar = BarCache::new(&ctx);
        for w in 0..ctx.n() {
            let c = table.c_expansion(&ctx, w);
            assert_eq!(bar.bar(&ctx, &c).unwrap(), c, "{name} bar at {w}");
        }
        // Ascent recursion.
        for w in 1..ctx.n() {
            for s in 0..geom.n_gens() {
                if ctx.left_up[w][s] {
                    continue;
                }
                for y in 0..ctx.n() {
                    if y == w || !ctx.leq[y][w] || !ctx.left_up[y][s] {
                        continue;
                    }
                    let sy = ctx.ball.left[y][s].unwrap();
                    assert_eq!(
                        table.p_of(&ctx, y, w),
                        table.p_of(&ctx, sy, w).mul(&ctx.gen_v_inv[s], spec),
                        "{name} recursion"
                    );
                }
            }
        }
        // Degree guard on the M-polynomials.
        for (&(s, _, _), m) in &table.m {
            let ls = ctx.l.class_weight(geom.gen_class[s]);
            assert!(spec.is_positive(ls));
            if let Degree::Finite(d) = m.deg(spec) {
                assert_eq!(
                    spec.compare(&d, ls),
                    std::cmp::Ordering::Less,
                    "{name} M degree"
                );
            }
        }
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 300, "runtime budget: {elapsed:?}");
    println!("criterion 4: PASS ({elapsed:?})");
}

#[test]
fn criterion_05_degree_bounds() {
    let t0 = Instant::now();
    let geom = c2();
    let n0 = 10i64;
    let spec = order_from_claim(ClaimOrder::CPairGap, &[2 * n0 * n0, 1, n0 * n0 + 1], n0).unwrap();
    let l = WeightFunction::generic(spec);
    // Products of ball(6) pairs need a ball(12) context.
    let ctx = KlContext::new(&geom, &l, 12).unwrap();
    let pairs = verify_product_degree_bounds(&ctx, 6).unwrap();
    assert!(pairs >= 56 * 56 / 2, "checked {pairs} pairs");
    // Parabolic degree bound and M-vanishing on ball(8).
    let ctx8 = KlContext::new(&geom, &l, 8).unwrap();
    let table = kl_table(&ctx8);
    let report = verify_klasym(&ctx8, &table, &[0, 1]).unwrap();
    assert!(report.checked_pairs > 0);
    assert!(report.failures.is_empty(), "{:?}", report.failures);
    println!("criterion 5: PASS ({:?})", t0.elapsed());
}

#[test]
fn criterion_06_induction_conditions() {
    let t0 = Instant::now();
    let geom = c2();
    let n0 = 10i64;
    let big = n0 * n0 + 1;
    let chamber = geom.int_weights(&[big, 1, big]).unwrap();
    let plus = geom.int_weights(&[big, 0, big]).unwrap();
    let ctx = KlContext::new(&geom, &chamber, 10).unwrap();
    let table = kl_table(&ctx);
    let report = check_induction_conditions(&ctx, &table, &plus).unwrap();
    assert!(report.i1_ok, "I1");
    assert!(report.i2_ok, "I2 over {} pairs", report.i2_pairs);
    assert!(report.i3_ok, "I3");
    assert!(
        report.i5_failures.is_empty(),
        "I5 over {} pairs: {:?}",
        report.i5_pairs,
        report.i5_failures
    );
    assert!(
        report.left_ideal_failures.is_empty(),
        "{:?}",
        report.left_ideal_failures
    );
    println!("criterion 6: PASS ({:?})", t0.elapsed());
}

#[test]
fn criterion_07_finite_case_analysis() {
    let t0 = Instant::now();
    let cases = affine_cells::claims::paper_cases();
    // Coverage: both choices for G2 and F4, both for B3/B4, all four
    // zero-sets for C2/C3.
    assert_eq!(
        cases.iter().filter(|c| c.label.starts_with("G2")).count(),
        2
    );
    assert_eq!(
        cases.iter().filter(|c| c.label.starts_with("F4")).count(),
        2
    );
    for n in [3, 4] {
        assert_eq!(
            cases
                .iter()
                .filter(|c| c.label.starts_with(&format!("B{n}")))
                .count(),
            2
        );
    }
    for n in [2, 3] {
        assert_eq!(
            cases
                .iter()
                .filter(|c| c.label.starts_with(&format!("C{n}")))
                .count(),
            5
        );
    }
    for case in &cases {
        let report = affine_cells::claims::verify_case(case).unwrap();
        assert!(
            report.failures.is_empty(),
            "{}: {:?}",
            case.label,
            report.failures
        );
        assert_eq!(report.patterns, 1 << case.delta.len());
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs() < 120, "runtime budget: {elapsed:?}");
    println!("criterion 7: PASS ({elapsed:?})");
}

#[test]
fn criterion_08_semidirect_identity() {
    let t0 = Instant::now();
    // Zero middle class on the double-bond chain.
    let geom = c2();
    let l = geom.int_weights(&[2, 0, 1]).unwrap();
    let ball = Ball::new(&geom, 10);
    let report = cmin_semidirect_check(&geom, &l, &ball).unwrap();
    assert!(report.cmin_equal, "lowest-cell identity");
    assert!(report.pieces_equal, "piecewise identity");
    assert!(report.inverse_stable, "inverse stability");
    // Zero short class on the rank-3 fork type.
    let geom = TypeGeometry::new(GroupType::B(3)).unwrap();
    let l = geom.int_weights(&[1, 0]).unwrap();
    let ball = Ball::new(&geom, 10);
    let report = cmin_semidirect_check(&geom, &l, &ball).unwrap();
    assert!(report.cmin_equal);
    assert!(report.pieces_equal);
    assert!(report.inverse_stable);
    // The split factor generators carry positive weight there.
    let split = SemidirectSplit::new(&geom, &l).unwrap();
    for t in &split.s_tilde {
        assert!(l.spec.is_positive(&t.weight(&geom, &l)));
    }
    println!("criterion 8: PASS ({:?})", t0.elapsed());
}

#[test]
fn criterion_09_specialization_gate() {
    let t0 = Instant::now();
    let geom = c2();
    let n0 = 8i64;
    let target = [2 * n0 + 1, 1, 1];
    let generic_spec = order_from_claim(ClaimOrder::CLargeT, &target, n0).unwrap();
    assert!(generic_spec.is_plus_admissible());
    let generic_l = WeightFunction::generic(generic_spec.clone());
    let gctx = KlContext::new(&geom, &generic_l, 8).unwrap();
    let gtable = kl_table(&gctx);
    let gp = gamma_plus(&gctx, &gtable);
    assert!(!gp.is_empty());
    // Coordinate bound on the collected exponents.
    for (g, _) in &gp {
        for &c in g.coords() {
            assert!((-8..=8).contains(&c), "exponent escapes the ball bound");
        }
    }
    let target_l = geom.int_weights(&target).unwrap();
    let theta = specialization_hom(&target, &target_l.spec);
    assert!(check_specialization_gate(
        &generic_spec,
        &target_l.spec,
        &theta,
        &gp
    ));
    // Transport and recompute.
    let dctx = KlContext::new(&geom, &target_l, 8).unwrap();
    let direct = kl_table(&dctx);
    let transported = specialize_table(&gtable, &dctx, &theta).unwrap();
    assert_eq!(transported.p.len(), direct.p.len());
    for (k, v) in &direct.p {
        assert_eq!(transported.p.get(k), Some(v), "P mismatch at {k:?}");
    }
    for (k, v) in &direct.m {
        assert_eq!(transported.m.get(k), Some(v), "M mismatch at {k:?}");
    }
    println!("criterion 9: PASS ({:?})", t0.elapsed());
}

#[test]
fn criterion_10_semicontinuity_desk_scale() {
    let t0 = Instant::now();
    let geom = c2();
    let big = 101i64;
    // The equal-pair facet against the induction witness chamber.
    let report = semicontinuity_check(&geom, &[big, 0, big], &[big, 1, big], 10).unwrap();
    assert!(report.pieces_ok, "pieces are unions of left classes");
    assert!(report.cmin_two_sided_ok, "two-sided union");
    assert_eq!(report.pieces.len(), 4);
    // Negative control: middle class zero against a balanced chamber.
    let control = semicontinuity_check(&geom, &[2, 0, 1], &[5, 3, 4], 10).unwrap();
    assert!(
        !(control.pieces_ok && control.cmin_two_sided_ok),
        "control must report a containment failure"
    );
    println!("criterion 10: PASS ({:?})", t0.elapsed());
}
