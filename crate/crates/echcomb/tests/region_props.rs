use echcomb::complex::{Context, OrbitSet};
use echcomb::lattice::{rat, Rat, Vec2};
use echcomb::random;
use echcomb::region::{
    classify_positivity, decoration_distance, ech_index, factor_blocks, factorize, minimal_decoration,
    morse_bott_index, slice_class, theorem_split, Edge, Path, Positivity, Region,
};
use proptest::prelude::*;

fn x(k: i64) -> Rat {
    rat(2 * k, 16)
}

fn region1() -> Region {
    Region::new(
        Path::new().with(x(1), Edge::new(Vec2::new(1, 0), 1, 0, 1)),
        Path::new().with(x(4), Edge::new(Vec2::new(1, 0), -1, 1, 0)),
    )
    .unwrap()
}

fn bigon(at: Rat) -> Region {
    Region::new(
        Path::new().with(at, Edge::new(Vec2::new(0, 1), 1, 1, 0)),
        Path::new().with(at, Edge::new(Vec2::new(0, 1), 1, 0, 1)),
    )
    .unwrap()
}

fn concat(a: &Region, b: &Region) -> Region {
    let mut p0 = a.p0.clone();
    let mut p1 = a.p1.clone();
    for (x, e) in &b.p0.edges {
        p0.add(*x, *e).unwrap();
    }
    for (x, e) in &b.p1.edges {
        p1.add(*x, *e).unwrap();
    }
    Region::new(p0, p1).unwrap()
}

fn translate(r: &Region, by: Rat) -> Region {
    let shift = |p: &Path| Path { edges: p.edges.iter().map(|(x, e)| (*x + by, *e)).collect() };
    Region { p0: shift(&r.p0), p1: shift(&r.p1) }
}

/// Prefix class of a path, summed edge by edge.
fn prefix(p: &Path, x: Rat) -> Vec2 {
    let mut s = Vec2::ZERO;
    for (y, e) in &p.edges {
        if *y < x {
            s += Vec2::new(e.v.x * (e.me + e.mh) as i64, e.v.y * (e.me + e.mh) as i64);
        }
    }
    s
}

/// Up to three generators of one class from a random interval profile.
fn sample(seed: u64, n: usize) -> Option<(Context, Vec<OrbitSet>)> {
    let mut rng = random::rng(seed);
    let p = random::interval_profile(&mut rng, 5);
    let ctx = Context::new(p.clone()).ok()?;
    let classes = ctx.generators_by_class(p.bound);
    let pool: Vec<Vec<OrbitSet>> = classes.into_values().filter(|g| g.len() >= n).collect();
    if pool.is_empty() {
        return None;
    }
    let gens = &pool[(seed as usize / 7) % pool.len()];
    let picks = (0..n).map(|i| gens[(seed as usize / 3 + 5 * i) % gens.len()].clone()).collect();
    Some((ctx, picks))
}

fn region_of(ctx: &Context, a: &OrbitSet, b: &OrbitSet) -> Region {
    ctx.associate_region(a, b, None).unwrap().region
}

#[test]
fn two_local_bigons_give_two_blocks() {
    let r = concat(&bigon(rat(1, 4)), &bigon(rat(3, 4)));
    let blocks = factor_blocks(&r);
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0].positions(), vec![rat(1, 4)]);
    assert_eq!(blocks[1].positions(), vec![rat(3, 4)]);
}

#[test]
fn concatenated_regions_give_two_blocks() {
    let first = region1();
    let second = translate(&region1(), rat(1, 2));
    let r = concat(&first, &second);
    let blocks = factor_blocks(&r);
    assert_eq!(blocks.len(), 2);
    assert_eq!(blocks[0], first);
    assert_eq!(blocks[1], second);
    let gap = (x(4) + x(1) + rat(1, 2)) / Rat::from_integer(2);
    assert_eq!(slice_class(&r, Vec2::ZERO, gap), Vec2::ZERO);
}

#[test]
fn local_region_is_minimally_positive() {
    assert_eq!(classify_positivity(&bigon(rat(1, 2))), Positivity::MinimallyPositive);
    assert_eq!(classify_positivity(&Region::default()), Positivity::MinimallyPositive);
}

#[test]
fn empty_region_edge_cases() {
    let e = Region::default();
    assert_eq!(minimal_decoration(&e), e);
    assert_eq!(decoration_distance(&e), 0);
    assert_eq!(ech_index(&e, Vec2::ZERO), 0);
    assert!(factor_blocks(&e).is_empty());
}

#[test]
fn region_one_minimal_decoration_reverses_the_concave_end() {
    let m = minimal_decoration(&region1());
    assert_eq!(m.p0.edges[&x(1)].mh, 1);
    assert_eq!(m.p1.edges[&x(4)], Edge::new(Vec2::new(1, 0), -1, 0, 1));
}

#[test]
fn split_after_trivial_prefix() {
    let shared = Edge::new(Vec2::new(0, 1), 1, 1, 0);
    let r = concat(
        &Region::new(Path::new().with(rat(1, 32), shared), Path::new().with(rat(1, 32), shared)).unwrap(),
        &region1(),
    );
    let s = theorem_split(&r).expect("split");
    assert_eq!(s.core, region1());
    assert_eq!(s.t1.p0.edges[&rat(1, 32)], shared);
    assert!(s.t2.is_empty());
}

#[test]
fn split_of_local_bigon_is_absent() {
    assert!(theorem_split(&bigon(rat(1, 2))).is_none());
}

#[test]
fn split_with_two_difference_blocks_is_absent() {
    let r = concat(&region1(), &translate(&region1(), rat(1, 2)));
    assert!(theorem_split(&r).is_none());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn slice_class_is_a_prefix_difference(seed in 0u64..10_000) {
        let Some((ctx, g)) = sample(seed, 2) else { return Ok(()) };
        let r = region_of(&ctx, &g[0], &g[1]);
        let mut probes: Vec<Rat> = r.positions();
        probes.push(Rat::from_integer(0));
        if let Some(last) = r.positions().last() {
            probes.push(*last + rat(1, 1000));
        }
        for p in probes {
            prop_assert_eq!(slice_class(&r, Vec2::ZERO, p), prefix(&r.p1, p) - prefix(&r.p0, p));
        }
        if let Some(last) = r.positions().last() {
            prop_assert_eq!(slice_class(&r, Vec2::ZERO, *last + rat(1, 1000)), Vec2::ZERO);
        }
    }

    #[test]
    fn ech_index_telescopes(seed in 0u64..10_000) {
        let Some((ctx, g)) = sample(seed, 3) else { return Ok(()) };
        let i02 = ech_index(&region_of(&ctx, &g[0], &g[2]), Vec2::ZERO);
        let i01 = ech_index(&region_of(&ctx, &g[0], &g[1]), Vec2::ZERO);
        let i12 = ech_index(&region_of(&ctx, &g[1], &g[2]), Vec2::ZERO);
        prop_assert_eq!(i02, i01 + i12);
    }

    #[test]
    fn trivial_regions_have_index_zero(seed in 0u64..10_000) {
        let Some((ctx, g)) = sample(seed, 1) else { return Ok(()) };
        prop_assert_eq!(ech_index(&region_of(&ctx, &g[0], &g[0]), Vec2::ZERO), 0);
    }

    #[test]
    fn minimal_decoration_is_idempotent(seed in 0u64..10_000) {
        let Some((ctx, g)) = sample(seed, 2) else { return Ok(()) };
        let r = region_of(&ctx, &g[0], &g[1]);
        let m = minimal_decoration(&r);
        prop_assert_eq!(minimal_decoration(&m), m.clone());
        prop_assert_eq!(decoration_distance(&m), 0);
        prop_assert!(m.same_underlying(&r));
        prop_assert_eq!(decoration_distance(&r) == 0, r == m);
        prop_assert_eq!(morse_bott_index(&r), ech_index(&m, Vec2::ZERO));
    }

    #[test]
    fn blocks_reassemble_and_close(seed in 0u64..10_000) {
        let Some((ctx, g)) = sample(seed, 2) else { return Ok(()) };
        let r = region_of(&ctx, &g[0], &g[1]);
        let blocks = factor_blocks(&r);
        let whole = blocks.iter().fold(Region::default(), |acc, b| concat(&acc, b));
        prop_assert_eq!(whole, r);
        for b in &blocks {
            prop_assert_eq!(b.p0.class(), b.p1.class());
        }
    }

    #[test]
    fn a_positive_regions_are_positive(seed in 0u64..10_000) {
        let Some((ctx, g)) = sample(seed, 2) else { return Ok(()) };
        let r = region_of(&ctx, &g[0], &g[1]).undecorated();
        if !ctx.line.positive(&r) {
            return Ok(());
        }
        prop_assert_ne!(classify_positivity(&r), Positivity::NotPositive);
        let nonlocal: Vec<_> = factorize(&r).into_iter().filter(|f| !f.is_local()).collect();
        if nonlocal.len() == 1 && factorize(&r).len() == 1 {
            prop_assert_eq!(factor_blocks(&r).len(), 1);
            let sites = r.sites(Vec2::ZERO);
            for s in &sites[1..sites.len() - 1] {
                prop_assert!(s.v.cross(s.left) > 0 || s.left.is_zero());
            }
        }
    }
}

#[test]
fn sampler_is_not_vacuous() {
    let (mut pairs, mut positive) = (0, 0);
    for seed in 0..60 {
        if let Some((ctx, g)) = sample(seed, 2) {
            pairs += 1;
            positive += ctx.line.positive(&region_of(&ctx, &g[0], &g[1]).undecorated()) as usize;
        }
    }
    assert!(pairs >= 40, "{pairs}");
    assert!(positive >= 1, "{positive}");
}
