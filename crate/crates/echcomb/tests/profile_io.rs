use echcomb::complex::{Context, OrbitSet};
use echcomb::lattice::{int, rat, Rat, Vec2};
use echcomb::profile::{NodeKind, Profile, ProfileError};
use echcomb::random::{self, fixtures};
use echcomb::region::{Edge, Path, Region};
use proptest::prelude::*;

fn x(k: i64) -> Rat {
    rat(2 * k, 16)
}

fn trivial(p: Path) -> Region {
    Region::new(p.clone(), p).unwrap()
}

fn region1() -> Region {
    Region::new(
        Path::new().with(x(1), Edge::new(Vec2::new(1, 0), 1, 0, 1)),
        Path::new().with(x(4), Edge::new(Vec2::new(1, 0), -1, 1, 0)),
    )
    .unwrap()
}

fn region3() -> Region {
    Region::new(
        Path::new()
            .with(x(1), Edge::new(Vec2::new(1, 0), 1, 0, 1))
            .with(x(3), Edge::new(Vec2::new(0, 1), -1, 1, 0)),
        Path::new()
            .with(x(2), Edge::new(Vec2::new(0, 1), 1, 0, 1))
            .with(x(4), Edge::new(Vec2::new(1, 0), -1, 0, 1)),
    )
    .unwrap()
}

fn set_action(p: &mut Profile, at: Rat, a: Rat) {
    for n in &mut p.nodes {
        if let NodeKind::Family { action, .. } = &mut n.kind {
            if n.x == at {
                *action = a;
            }
        }
    }
}

#[test]
fn profile_a_validates() {
    assert_eq!(fixtures::profile_a().validate(), Vec::<String>::new());
}

#[test]
fn circle_without_winding_is_rejected() {
    let sq = [Vec2::new(-2, -2), Vec2::new(2, -2), Vec2::new(2, 2), Vec2::new(-2, 2)];
    let mut p = fixtures::convex_circle(&sq, int(6));
    assert!(p.validate().is_empty(), "{:?}", p.validate());
    p.winding = 0;
    assert!(p.validate().iter().any(|d| d.contains("winding ≥ 1")), "{:?}", p.validate());
}

#[test]
fn lens_with_half_rotation_is_rejected() {
    let mut p = fixtures::s3_convex_domain(int(80));
    let min = p.min_action().unwrap();
    p.bound = min * int(4) - rat(1, 7);
    assert_eq!(p.cutoff(), 4);
    p.lens.as_mut().unwrap().phi0 = rat(1, 2);
    assert!(p.validate().iter().any(|d| d.contains("mφ ∉ Z")), "{:?}", p.validate());
}

#[test]
fn compatibility_examples() {
    let line = fixtures::profile_a().line().unwrap();
    assert!(line.compatible(&trivial(Path::new().with(x(1), Edge::new(Vec2::new(1, 0), 1, 0, 1)))));
    assert!(!line.compatible(&trivial(Path::new().with(x(1), Edge::new(Vec2::new(0, 1), 1, 0, 1)))));
    assert!(!line.compatible(&trivial(Path::new().with(x(1), Edge::new(Vec2::new(1, 0), -1, 0, 1)))));
    assert!(!line.compatible(&trivial(Path::new().with(rat(1, 3), Edge::new(Vec2::new(1, 0), 1, 1, 0)))));
}

#[test]
fn positivity_examples() {
    let line = fixtures::profile_a().line().unwrap();
    assert!(line.positive(&region1()));
    assert!(line.positive(&region3()));
    let steep = fixtures::profile_a_with_max(Vec2::new(-2, 1)).line().unwrap();
    assert!(!steep.positive(&region3()));
    assert!(steep.positive(&trivial(region3().p0)));
}

#[test]
fn action_examples() {
    let mut p = fixtures::profile_a();
    set_action(&mut p, x(4), rat(3, 2));
    let ctx = Context::new(p).unwrap();
    assert_eq!(ctx.action(&OrbitSet::empty()).unwrap(), Rat::from_integer(0));
    assert_eq!(ctx.action(&OrbitSet::empty().with(0, 2, 0).with(3, 0, 1)).unwrap(), rat(7, 2));
    assert!(ctx.action(&OrbitSet::empty().with(17, 1, 0)).is_err());

    let mut s3 = fixtures::s3_convex_domain(int(80));
    s3.lens.as_mut().unwrap().action_e0 = rat(2, 5);
    s3.bound = int(2);
    let ctx = Context::new(s3).unwrap();
    assert_eq!(ctx.action(&OrbitSet::empty().with_end(0, 3)).unwrap(), rat(6, 5));
}

#[test]
fn reflection_is_an_involution() {
    let p = fixtures::profile_a();
    let r = p.reflect().unwrap();
    assert!(r.dual);
    assert_eq!(r.reflect().unwrap(), p);
    for (a, b) in p.families().iter().zip(r.families()) {
        assert_eq!(a.action, b.action);
        assert_eq!(a.convex, -b.convex);
    }
}

#[test]
fn convex_circle_reflects_to_concave() {
    let sq = [Vec2::new(-2, -2), Vec2::new(2, -2), Vec2::new(2, 2), Vec2::new(-2, 2)];
    let r = fixtures::convex_circle(&sq, int(6)).reflect().unwrap();
    assert!(r.validate().is_empty(), "{:?}", r.validate());
    assert!(r.families().iter().all(|f| f.convex == -1));
}

#[test]
fn lens_reflection_is_unsupported() {
    let p = fixtures::s3_convex_domain(int(10));
    assert!(matches!(p.reflect(), Err(ProfileError::Unsupported(_))));
}

#[test]
fn single_end_family_when_floors_vanish() {
    let mut p = fixtures::s3_convex_domain(int(80));
    let min = p.min_action().unwrap();
    p.bound = min * int(3) - rat(1, 7);
    assert_eq!(p.cutoff(), 3);
    let ext = p.extension().unwrap();
    assert_eq!(ext.v_families[0].len(), 1);
    assert_eq!(ext.v_families[0][0].1.v, p.lens.unwrap().v0);
}

#[test]
fn unit_cutoff_leaves_only_tilde_families() {
    let p = fixtures::s3_convex_domain(int(1));
    assert_eq!(p.cutoff(), 1);
    let ext = p.extension().unwrap();
    assert!(ext.v_families.iter().all(Vec::is_empty));
    assert_eq!(ext.tilde[0].0, int(-1));
    assert_eq!(ext.tilde[1].0, int(2));
}

#[test]
fn fixture_file_matches_fixture() {
    let path = format!("{}/tests/data/profile_a.json", env!("CARGO_MANIFEST_DIR"));
    let p = Profile::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert_eq!(p, fixtures::profile_a());
}

#[test]
fn malformed_documents_name_the_problem() {
    let err = |s: &str| match Profile::from_json(s) {
        Err(ProfileError::Malformed(m)) => m,
        other => panic!("expected malformed, got {other:?}"),
    };
    assert!(err("{\n  \"geometry\": \"interval\",\n  \"L\": 3,\n").contains("line"));
    let good = fixtures::profile_a().to_json();
    assert!(err(&good.replacen("\"1/8\"", "\"1/0\"", 1)).contains("nodes[0].x"));
    assert!(err(&good.replacen("\"family\"", "\"corner\"", 1)).contains("nodes[0].kind"));
    assert!(err(&good.replacen("\"convex\": true,", "", 1)).contains("nodes[0].convex"));
    assert!(err(&good.replacen("\"interval\"", "\"lens\"", 1)).contains("lens"));
}

#[test]
fn convexity_accepts_signs() {
    let text = fixtures::profile_a().to_json().replace("\"convex\": true", "\"convex\": 1").replace("\"convex\": false", "\"convex\": -1");
    assert_eq!(Profile::from_json(&text).unwrap(), fixtures::profile_a());
}

fn any_profile(seed: u64) -> Profile {
    let mut rng = random::rng(seed);
    match seed % 5 {
        0 => random::interval_profile(&mut rng, 6),
        1 => random::circle_profile(&mut rng, 1, 6),
        2 => random::circle_profile(&mut rng, 2, 8),
        3 => random::lens_profile(&mut rng, false, 5),
        _ => random::lens_profile(&mut rng, true, 5),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn json_round_trip(seed in 0u64..100_000) {
        let p = any_profile(seed);
        let text = p.to_json();
        let q = Profile::from_json(&text).unwrap();
        prop_assert_eq!(&q, &p);
        prop_assert_eq!(q.to_json(), text);
        prop_assert!(q.validate().is_empty());
    }

    #[test]
    fn reflected_json_is_a_fixed_point(seed in 0u64..100_000) {
        let p = any_profile(seed);
        let Ok(r) = p.reflect() else { return Ok(()) };
        let once = Profile::from_json(&r.to_json()).unwrap();
        let twice = Profile::from_json(&once.to_json()).unwrap();
        prop_assert_eq!(&once, &twice);
        prop_assert!(once.validate().is_empty(), "{:?}", once.validate());
        prop_assert_eq!(once.families().len(), p.families().len());
    }

    #[test]
    fn a_positive_regions_are_positive(seed in 0u64..100_000) {
        let p = any_profile(seed * 5 + 3);
        let ctx = Context::new(p.clone()).unwrap();
        for gens in ctx.generators_by_class(p.bound).into_values().take(4) {
            for w in gens.windows(2).take(8) {
                let r = ctx.associate_region(&w[0], &w[1], None).unwrap().region;
                let full = r.p0.class() == r.p1.class();
                prop_assert!(full, "lens region does not close: {}", w[0]);
                if ctx.line.positive(&r) {
                    prop_assert_ne!(
                        echcomb::region::classify_positivity(&r),
                        echcomb::region::Positivity::NotPositive
                    );
                }
            }
        }
    }
}
