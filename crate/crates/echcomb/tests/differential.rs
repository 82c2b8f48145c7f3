use echcomb::complex::{Context, OrbitSet};
use echcomb::differential::Witness;
use echcomb::homology::BitMatrix;
use echcomb::lattice::Vec2;
use echcomb::profile::Profile;
use echcomb::random;
use echcomb::region::{
    classify_positivity, decoration_distance, ech_index, factorize, Edge, Path, Positivity, Region,
};

fn load(name: &str) -> Context {
    let path = format!("{}/tests/data/{name}.json", env!("CARGO_MANIFEST_DIR"));
    let p = Profile::from_json(&std::fs::read_to_string(path).unwrap()).unwrap();
    assert!(p.validate().is_empty(), "{:?}", p.validate());
    Context::new(p).unwrap()
}

#[test]
fn two_relevant_lifts_cancel() {
    let c = load("circle_two_lifts");
    let a = OrbitSet::empty().with(0, 0, 1).with(1, 1, 0);
    let rep = c.coefficient(&a, &OrbitSet::empty()).unwrap();
    assert!(!rep.value);
    assert_eq!(rep.reasons, vec!["2 relevant lifts".to_string()]);
}

#[test]
fn s1s2_both_d_cancel() {
    let c = load("s1s2_cancel");
    let a = OrbitSet::empty().with(0, 0, 1);
    let rep = c.coefficient(&a, &OrbitSet::empty()).unwrap();
    assert!(!rep.value);
    assert!(rep.reasons[0].contains("both d = 0 and d = 1 pass"));
}

#[test]
fn s1s2_single_d_contributes() {
    let c = load("s1s2_single");
    let a = OrbitSet::empty().with(0, 0, 1);
    let rep = c.coefficient(&a, &OrbitSet::empty()).unwrap();
    assert!(rep.value);
    let Some(Witness::Extended { d, region, .. }) = rep.witness else { panic!("no extended witness") };
    assert_eq!(d[0], 0);
    assert_eq!(ech_index(&region, Vec2::ZERO), 1);
    assert_eq!(c.relative_index_with(&a, &OrbitSet::empty(), Vec2::ZERO, 0).unwrap(), 1);
}

#[test]
fn lens_triangle_contributes_with_index_one() {
    let c = load("lens_triangle");
    let a = OrbitSet::empty().with(1, 0, 1);
    let rep = c.coefficient(&a, &OrbitSet::empty()).unwrap();
    assert!(rep.value, "{:?}", rep.reasons);
    let Some(Witness::Extended { region, .. }) = rep.witness else { panic!("no extended witness") };
    assert_eq!(ech_index(&region, Vec2::ZERO), 1);
    // the far end of the triangle is the u₁ edge on the positive side
    assert!(region.p1.is_empty());
    assert_eq!(region.p0.edges.len(), 2);
}

#[test]
fn diagonal_vanishes_in_every_geometry() {
    for name in ["circle_two_lifts", "s1s2_cancel", "s1s2_single", "lens_triangle", "profile_a"] {
        let c = load(name);
        for g in c.generators(c.zero_class(), c.profile.bound) {
            assert!(!c.coefficient(&g, &g).unwrap().value, "{name}: {g}");
        }
    }
}

#[test]
fn empty_generator_list_gives_empty_matrix() {
    let c = load("profile_a");
    assert_eq!(c.boundary_matrix(&[]).unwrap(), BitMatrix::new(0, 0));
}

// A second implementation of the interval criterion: subtract every trivial
// region that fits at the two ends of the support and test what remains.

fn sub(p: &Path, t: &Path) -> Path {
    let mut out = Path::new();
    for (x, e) in &p.edges {
        let (te, th) = t.edges.get(x).map_or((0, 0), |f| (f.me, f.mh));
        if e.me - te + e.mh - th > 0 {
            out.edges.insert(*x, Edge::new(e.v, e.c, e.me - te, e.mh - th));
        }
    }
    out
}

fn naive_coefficient(c: &Context, alpha: &OrbitSet, beta: &OrbitSet) -> bool {
    let r = c.associate_region(alpha, beta, None).unwrap().region;
    let xs = r.positions();
    // candidate shared copies at every position
    let mut options: Vec<Vec<(u32, u32)>> = Vec::new();
    for x in &xs {
        let (a, b) = (r.p0.edges.get(x), r.p1.edges.get(x));
        let (me, mh) = match (a, b) {
            (Some(a), Some(b)) => (a.me.min(b.me), a.mh.min(b.mh)),
            _ => (0, 0),
        };
        let mut o = Vec::new();
        for te in 0..=me {
            for th in 0..=mh {
                o.push((te, th));
            }
        }
        options.push(o);
    }
    let mut idx = vec![0usize; xs.len()];
    loop {
        let mut t = Path::new();
        for (k, x) in xs.iter().enumerate() {
            let (te, th) = options[k][idx[k]];
            if te + th > 0 {
                let e = r.p0.edges[x];
                t.edges.insert(*x, Edge::new(e.v, e.c, te, th));
            }
        }
        let core = Region::new(sub(&r.p0, &t), sub(&r.p1, &t)).unwrap();
        let pos = core.positions();
        let f = factorize(&core);
        let shaped = f.len() == 1
            && !f[0].is_local()
            && t.edges.keys().all(|x| *x <= pos[0] || *x >= pos[pos.len() - 1]);
        if shaped
            && c.line.positive(&core)
            && classify_positivity(&core) == Positivity::MinimallyPositive
            && decoration_distance(&core) == 1
        {
            return true;
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < options[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            return false;
        }
    }
}

#[test]
fn matrix_matches_naive_criteria() {
    let mut rng = random::rng(77);
    let mut nonzero = 0;
    for _ in 0..3 {
        let p = random::interval_profile(&mut rng, 6);
        let c = Context::new(p.clone()).unwrap();
        for gens in c.generators_by_class(p.bound).into_values() {
            let m = c.boundary_matrix(&gens).unwrap();
            let actions: Vec<_> = gens.iter().map(|g| c.action(g).unwrap()).collect();
            for a in 0..gens.len() {
                for b in 0..gens.len() {
                    let want = actions[b] < actions[a] && naive_coefficient(&c, &gens[a], &gens[b]);
                    assert_eq!(m.get(b, a), want, "{} -> {}", gens[a], gens[b]);
                    nonzero += want as usize;
                }
            }
        }
    }
    assert!(nonzero > 0);
}
