use std::time::Instant;
use affine_cells::gamma::WeightFunction;
use affine_cells::geometry::{GroupType, TypeGeometry};
use affine_cells::hecke::{kl_table, KlContext};
use affine_cells::params::{order_from_claim, ClaimOrder};

fn main() {
    let geom = TypeGeometry::new(GroupType::C(2)).unwrap();
    // Generic pair-gap order, ball 8.
    let spec = order_from_claim(ClaimOrder::CPairGap, &[200, 1, 101], 10).unwrap();
    let l = WeightFunction::generic(spec);
    let t0 = Instant::now();
    let ctx = KlContext::new(&geom, &l, 8).unwrap();
    let table = kl_table(&ctx);
    println!("generic ball(8): n={} p={} m={} in {:?}", ctx.n(), table.p.len(), table.m.len(), t0.elapsed());
    // Specialized (101,1,101), ball 10.
    let l = geom.int_weights(&[101, 1, 101]).unwrap();
    let t0 = Instant::now();
    let ctx = KlContext::new(&geom, &l, 10).unwrap();
    let table = kl_table(&ctx);
    println!("int ball(10): n={} p={} m={} in {:?}", ctx.n(), table.p.len(), table.m.len(), t0.elapsed());
    // Specialized ball 12 (to understand the earlier blowup).
    let t0 = Instant::now();
    let ctx = KlContext::new(&geom, &l, 12).unwrap();
    let table = kl_table(&ctx);
    println!("int ball(12): n={} p={} m={} in {:?}", ctx.n(), table.p.len(), table.m.len(), t0.elapsed());
}
