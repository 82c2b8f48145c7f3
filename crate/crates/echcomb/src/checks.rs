//! Acceptance suites. Each criterion runs end to end from a seed and reports
//! one [`Outcome`]; the acceptance test target and `echcomb selftest` both
//! drive this module.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use num_integer::Integer;
use rand::Rng;

use crate::chain_map::{canonical_companion, verify_with};
use crate::complex::{Context, HomologyClass, OrbitSet};
use crate::differential::Witness;
use crate::lattice::{floor, int, rat, Rat, Vec2};
use crate::par::Exec;
use crate::partitions::lambda_plus;
use crate::profile::{Geometry, Profile};
use crate::random::{self, fixtures, Rng8};
use crate::region::{
    classify_positivity, decoration_distance, ech_index, factorize, local_index, loose_mult,
    morse_bott_index, sharing_mult, Edge, Path, Positivity, Region,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub exec: Exec,
}

impl Default for Config {
    fn default() -> Self {
        Config { seed: 20_240_601, exec: Exec::default() }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub id: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl Outcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:>2} {:<24} {}  {:.2} s  {}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.elapsed.as_secs_f64(),
            self.detail
        )
    }
}

pub const CRITERIA: [(&str, Option<u64>); 10] = [
    ("reference regions", Some(1)),
    ("d squared", Some(300)),
    ("index laws", None),
    ("local positivity", Some(120)),
    ("partition oracle", Some(60)),
    ("reflection duality", None),
    ("action filtration", None),
    ("homology invariance", None),
    ("chain map", Some(60)),
    ("index identities", None),
];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Runs criterion `id` (1-based).
pub fn run(id: usize, cfg: &Config) -> Outcome {
    let (name, limit) = CRITERIA[id - 1];
    let start = Instant::now();
    let res = match id {
        1 => reference_regions(),
        2 => d_squared(cfg),
        3 => index_laws(cfg),
        4 => local_positivity(),
        5 => partition_oracle(),
        6 => reflection_duality(cfg),
        7 => action_filtration(cfg),
        8 => homology_invariance(),
        9 => chain_map(cfg),
        10 => index_identities(cfg),
        _ => Err(format!("no criterion {id}")),
    };
    let elapsed = start.elapsed();
    let limit = limit.map(Duration::from_secs);
    let (mut passed, mut detail) = match res {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    if let Some(l) = limit {
        if elapsed > l {
            passed = false;
            detail = format!("{detail}; exceeded the {} s budget", l.as_secs());
        }
    }
    Outcome { id, name, passed, detail, elapsed, limit }
}

pub fn run_all(cfg: &Config) -> Vec<Outcome> {
    (1..=CRITERIA.len()).map(|id| run(id, cfg)).collect()
}

fn ctx(p: &Profile) -> Result<Context, String> {
    Context::new(p.clone()).map_err(|e| e.to_string())
}

fn set(orbits: &[(usize, u32, u32)]) -> OrbitSet {
    orbits.iter().fold(OrbitSet::empty(), |g, &(k, e, h)| g.with(k, e, h))
}

// ---------------------------------------------------------------------------
// 1

fn reference_regions() -> Check {
    let c = ctx(&fixtures::profile_a())?;
    let ones = [
        (set(&[(0, 0, 1)]), set(&[(3, 1, 0)])),
        (set(&[(4, 0, 1), (5, 1, 0)]), OrbitSet::empty()),
        (set(&[(0, 0, 1), (2, 1, 0)]), set(&[(1, 0, 1), (3, 0, 1)])),
    ];
    for (a, b) in &ones {
        let rep = c.coefficient(a, b).map_err(|e| e.to_string())?;
        ensure(rep.value && rep.witness.is_some(), || format!("{a} -> {b} is 0: {:?}", rep.reasons))?;
        let i = c.relative_index(a, b).map_err(|e| e.to_string())?;
        ensure(i == 1, || format!("{a} -> {b} has index {i}"))?;
    }
    let sq = ctx(&fixtures::square_profile())?;
    let moved = ctx(&fixtures::profile_a_with_max(Vec2::new(-2, 1)))?;
    let zeros = [
        (&sq, set(&[(0, 0, 1), (1, 0, 1), (2, 0, 1)]), set(&[(1, 1, 0)])),
        (&c, set(&[(0, 1, 0)]), set(&[(0, 0, 1)])),
        (&moved, ones[2].0.clone(), ones[2].1.clone()),
    ];
    for (cx, a, b) in &zeros {
        let rep = cx.coefficient(a, b).map_err(|e| e.to_string())?;
        ensure(!rep.value, || format!("{a} -> {b} should vanish"))?;
    }
    Ok("3 contributing pairs with I = 1, 3 vanishing configurations".into())
}

// ---------------------------------------------------------------------------
// 2 and 7

/// The randomized profile suites: 50 interval, 10 + 10 circle (winding 1
/// and 2), 10 lens and 10 `S¹×S²` profiles.
pub fn random_suites(seed: u64) -> Vec<(String, Profile)> {
    let mut r = random::rng(seed);
    let mut out = Vec::new();
    for k in 0..50 {
        out.push((format!("interval #{k}"), random::interval_profile(&mut r, 6)));
    }
    for w in 1..=2 {
        for k in 0..10 {
            out.push((format!("circle n={w} #{k}"), random::circle_profile(&mut r, w, 6)));
        }
    }
    for k in 0..10 {
        out.push((format!("lens #{k}"), random::lens_profile(&mut r, false, 6)));
    }
    for k in 0..10 {
        out.push((format!("s1s2 #{k}"), random::lens_profile(&mut r, true, 6)));
    }
    out
}

const MAX_CLASS: usize = 300;

/// Index of the region that witnesses a nonzero coefficient.
fn witness_index(c: &Context, a: &OrbitSet, b: &OrbitSet, w: &Witness) -> Result<i64, String> {
    match w {
        Witness::Split(_) => c.relative_index(a, b).map_err(|e| e.to_string()),
        Witness::Lift { sigma0, .. } => c.relative_index_with(a, b, *sigma0, 0).map_err(|e| e.to_string()),
        Witness::Extended { region, .. } => Ok(ech_index(region, Vec2::ZERO)),
    }
}

fn d_squared(cfg: &Config) -> Check {
    let (mut classes, mut entries, mut profiles, mut chains) = (0, 0, 0, 0);
    for (label, p) in random_suites(cfg.seed) {
        let c = ctx(&p)?;
        profiles += 1;
        for (cls, gens) in c.generators_by_class(p.bound) {
            ensure(gens.len() <= MAX_CLASS, || format!("{label}: class {cls} has {} generators", gens.len()))?;
            let m = c.boundary_matrix_with(cfg.exec, &gens).map_err(|e| format!("{label}: {e}"))?;
            if let Some((r, col)) = m.d_squared() {
                return Err(format!("{label}, class {cls}: ∂² has entry ({r}, {col})"));
            }
            for &(b, a) in &m.entries {
                let rep = c.coefficient(&gens[a], &gens[b]).map_err(|e| e.to_string())?;
                let w = rep.witness.ok_or_else(|| format!("{label}: entry without witness"))?;
                let i = witness_index(&c, &gens[a], &gens[b], &w)?;
                ensure(i == 1, || format!("{label}: {} -> {} has witness index {i}", gens[a], gens[b]))?;
            }
            let cols = m.columns();
            chains += m.entries.iter().map(|&(b, _)| cols[b].len()).sum::<usize>();
            classes += 1;
            entries += m.entries.len();
        }
    }
    Ok(format!(
        "{profiles} profiles, {classes} classes, {entries} nonzero entries all of index 1, {chains} two-step chains"
    ))
}

/// Nonzero coefficients against the filtration among all ordered pairs.
fn filtration_violations(c: &Context, gens: &[OrbitSet]) -> Result<(usize, Vec<String>), String> {
    let actions: Vec<Rat> = gens.iter().map(|g| c.action(g)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    let (mut nonzero, mut bad) = (0, Vec::new());
    for a in 0..gens.len() {
        for b in 0..gens.len() {
            if a == b || !c.coefficient(&gens[a], &gens[b]).map_err(|e| e.to_string())?.value {
                continue;
            }
            nonzero += 1;
            let ok = if c.profile.dual { actions[b] > actions[a] } else { actions[b] < actions[a] };
            if !ok {
                bad.push(format!("{} -> {}", gens[a], gens[b]));
            }
        }
    }
    Ok((nonzero, bad))
}

fn action_filtration(cfg: &Config) -> Check {
    let mut suites = random_suites(cfg.seed);
    for (k, p) in duality_profiles(cfg.seed).into_iter().enumerate() {
        let rp = p.reflect().map_err(|e| e.to_string())?;
        suites.push((format!("duality #{k}"), p));
        suites.push((format!("duality #{k} reflected"), rp));
    }
    for (k, (a, b)) in invariance_pairs().into_iter().enumerate() {
        suites.push((format!("invariance #{k}a"), a));
        suites.push((format!("invariance #{k}b"), b));
    }
    suites.push(("companion lens".into(), fixtures::s3_convex_domain(int(CHAIN_MAP_BOUND))));
    let (mut nonzero, mut pairs) = (0, 0);
    for (label, p) in &suites {
        let c = ctx(p)?;
        for (cls, gens) in c.generators_by_class(p.bound) {
            if gens.len() > MAX_CLASS {
                continue;
            }
            pairs += gens.len() * gens.len().saturating_sub(1);
            let (n, bad) = filtration_violations(&c, &gens)?;
            nonzero += n;
            ensure(bad.is_empty(), || format!("{label}, class {cls}: {}", bad.join(", ")))?;
        }
    }
    // profile_a carries literal equal actions, outside the generic setting.
    let a = ctx(&fixtures::profile_a())?;
    let (_, ties) = filtration_violations(&a, &a.generators(HomologyClass::Lattice(Vec2::new(2, 0)), rat(5, 2)))?;
    Ok(format!(
        "{} profiles, {pairs} ordered pairs, {nonzero} nonzero all action-decreasing; profile_a equal-action pairs: {}",
        suites.len(),
        ties.len()
    ))
}

// ---------------------------------------------------------------------------
// 3

fn pick<'a, T>(r: &mut Rng8, xs: &'a [T]) -> &'a T {
    &xs[r.gen_range(0..xs.len())]
}

fn classes_with_two(c: &Context, bound: Rat) -> Vec<Vec<OrbitSet>> {
    c.generators_by_class(bound).into_values().filter(|g| g.len() >= 2 && g.len() <= MAX_CLASS).collect()
}

fn index_laws(cfg: &Config) -> Check {
    let mut r = random::rng(cfg.seed ^ 0x1d3);
    let mut triples = 0;
    while triples < 1000 {
        let p = match triples % 4 {
            0 => random::interval_profile(&mut r, 6),
            1 => random::circle_profile(&mut r, 1, 6),
            2 => random::lens_profile(&mut r, false, 6),
            _ => random::lens_profile(&mut r, true, 6),
        };
        let c = ctx(&p)?;
        let pools = classes_with_two(&c, p.bound);
        if pools.is_empty() {
            continue;
        }
        for _ in 0..10 {
            let g = pick(&mut r, &pools);
            let (a, b, z) = (pick(&mut r, g), pick(&mut r, g), pick(&mut r, g));
            let i = |x: &OrbitSet, y: &OrbitSet| c.relative_index(x, y).map_err(|e| e.to_string());
            let (ac, ab, bc) = (i(a, z)?, i(a, b)?, i(b, z)?);
            ensure(ac == ab + bc, || format!("{:?}: I({a},{z}) = {ac} but {ab} + {bc}", p.geometry))?;
            triples += 1;
        }
    }
    let mut pairs = 0;
    while pairs < 1000 {
        let w = r.gen_range(1..=2);
        let p = random::circle_profile(&mut r, w, 6);
        let c = ctx(&p)?;
        let pools = classes_with_two(&c, p.bound);
        if pools.is_empty() {
            continue;
        }
        for _ in 0..10 {
            let g = pick(&mut r, &pools);
            let (a, b) = (pick(&mut r, g), pick(&mut r, g));
            let reg = c.associate_region(a, b, None).map_err(|e| e.to_string())?.region;
            let mut s = || Vec2::new(r.gen_range(-4..=4), r.gen_range(-4..=4));
            let (s0, s1) = (s(), s());
            let lhs = ech_index(&reg, s1) - ech_index(&reg, s0);
            let rhs = 2 * reg.p0.class().cross(s1 - s0);
            ensure(lhs == rhs, || format!("offset law: {a} -> {b}, σ₀ = {s0}, σ₁ = {s1}: {lhs} ≠ {rhs}"))?;
            pairs += 1;
        }
    }
    Ok(format!("additivity on {triples} triples, offset law on {pairs} circle pairs"))
}

// ---------------------------------------------------------------------------
// 4

/// Primitive vectors with both coordinates in `[−2, 2]`.
fn small_primitive() -> Vec<Vec2> {
    let mut out = Vec::new();
    for x in -2..=2 {
        for y in -2..=2 {
            let v = Vec2::new(x, y);
            if !v.is_zero() && v.is_primitive() {
                out.push(v);
            }
        }
    }
    out
}

#[derive(Clone, Copy)]
struct RawSite {
    v: Vec2,
    c: i8,
    m: [u32; 2],
}

#[derive(Default)]
struct Tally {
    regions: usize,
    strict: usize,
    inadmissible: usize,
    decorated: usize,
    minimal: usize,
}

/// Sign condition of the positivity definition at one site for side `i`.
fn positive_at(s: &RawSite, left: Vec2) -> bool {
    let cr = s.v.cross(left);
    (0..2).all(|i| s.m[i] == 0 || cr > 0 || (cr == 0 && s.c != if i == 0 { -1 } else { 1 }))
}

fn minimal_at(s: &RawSite, left: Vec2, right: Vec2) -> bool {
    let cr = s.v.cross(left);
    let sides = (0..2).all(|i| s.m[i] == 0 || cr < 1 || (cr == 1 && s.c != if i == 0 { 1 } else { -1 }));
    sides && (right.is_zero() || right.is_primitive())
}

/// Decorations `(m_e, m_h)` of `m` copies with at most one hyperbolic copy.
fn decorations(m: u32) -> Vec<(u32, u32)> {
    match m {
        0 => vec![(0, 0)],
        _ => vec![(m, 0), (m - 1, 1)],
    }
}

/// Decoration `((e, h) on p0, (e, h) on p1)` of one site.
type SiteDecoration = ((u32, u32), (u32, u32));

fn check_region(sites: &[RawSite], t: &mut Tally) -> Result<(), String> {
    let build = |dec: &[SiteDecoration]| -> Region {
        let (mut p0, mut p1) = (Path::new(), Path::new());
        for (k, (s, (d0, d1))) in sites.iter().zip(dec).enumerate() {
            let x = int(k as i64 + 1);
            if s.m[0] > 0 {
                p0.edges.insert(x, Edge::new(s.v, s.c, d0.0, d0.1));
            }
            if s.m[1] > 0 {
                p1.edges.insert(x, Edge::new(s.v, s.c, d1.0, d1.1));
            }
        }
        Region { p0, p1 }
    };
    let plain: Vec<_> = sites.iter().map(|s| ((s.m[0], 0), (s.m[1], 0))).collect();
    let base = build(&plain);
    let f = factorize(&base);
    if f.len() != 1 || f[0].is_local() {
        return Ok(());
    }
    t.regions += 1;
    let mut left = Vec2::ZERO;
    let mut minimal = true;
    // a-positivity forces v × σ > 0 at interior support points, p0 convex
    // and p1 concave at the two ends
    let mut strict = true;
    let last = sites.len() - 1;
    for (k, s) in sites.iter().enumerate() {
        let right = left - (s.m[0] as i64) * s.v + (s.m[1] as i64) * s.v;
        minimal &= minimal_at(s, left, right);
        if k > 0 && k < last {
            strict &= s.v.cross(left) > 0;
        } else {
            strict &= (s.m[0] == 0 || s.c == 1) && (s.m[1] == 0 || s.c == -1);
        }
        left = right;
    }
    let class = classify_positivity(&base);
    let expect = if minimal { Positivity::MinimallyPositive } else { Positivity::Positive };
    ensure(class == expect, || format!("{base:?}: classified {class:?}, definition gives {expect:?}"))?;
    let ibar = morse_bott_index(&base);
    ensure(ibar >= 0, || format!("{base:?}: Ī = {ibar}"))?;
    if strict {
        t.strict += 1;
        // the minimal decoration is hyperbolic on convex p0 and concave p1 edges
        let admissible = sites.iter().all(|s| s.m[if s.c == 1 { 0 } else { 1 }] <= 1);
        ensure(!minimal || ibar == 0, || format!("{base:?}: minimally positive with Ī = {ibar}"))?;
        if ibar == 0 && !minimal {
            ensure(!admissible, || format!("{base:?}: Ī = 0 but not minimally positive"))?;
            t.inadmissible += 1;
        }
        if minimal {
            t.minimal += 1;
        }
    }
    // every decoration of the same underlying region
    let opts: Vec<Vec<SiteDecoration>> = sites
        .iter()
        .map(|s| {
            let mut o = Vec::new();
            for a in decorations(s.m[0]) {
                for b in decorations(s.m[1]) {
                    o.push((a, b));
                }
            }
            o
        })
        .collect();
    let mut idx = vec![0usize; sites.len()];
    loop {
        let dec: Vec<_> = idx.iter().zip(&opts).map(|(&i, o)| o[i]).collect();
        let r = build(&dec);
        t.decorated += 1;
        let li = local_index(&r, Vec2::ZERO);
        if let Some((x, v)) = li.iter().find(|(_, v)| **v < 0) {
            return Err(format!("{r:?}: I_R({x}) = {v}"));
        }
        let zero = li.values().sum::<i64>() == 0;
        let tight = minimal && decoration_distance(&r) == 0;
        ensure(!strict || zero == tight, || format!("{r:?}: I = 0 is {zero}, minimal and minimally decorated is {tight}"))?;
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < opts[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    Ok(())
}

fn extend(
    prefix: &mut Vec<RawSite>,
    left: Vec2,
    max_len: usize,
    dirs: &[Vec2],
    t: &mut Tally,
) -> Result<(), String> {
    for &v in dirs {
        for c in [1i8, -1] {
            for m0 in 0..=2u32 {
                for m1 in 0..=2u32 {
                    if m0 + m1 == 0 {
                        continue;
                    }
                    let s = RawSite { v, c, m: [m0, m1] };
                    if !positive_at(&s, left) {
                        continue;
                    }
                    let right = left - (m0 as i64) * v + (m1 as i64) * v;
                    prefix.push(s);
                    if right.is_zero() {
                        if prefix.len() >= 2 {
                            check_region(prefix, t)?;
                        }
                    } else if prefix.len() < max_len {
                        extend(prefix, right, max_len, dirs, t)?;
                    }
                    prefix.pop();
                }
            }
        }
    }
    Ok(())
}

/// Exhaustive pass over positive regions whose slice class is nonzero
/// strictly inside the support. Factorization then keeps the non-local
/// indecomposable ones.
fn local_positivity() -> Check {
    let dirs = small_primitive();
    let mut t = Tally::default();
    extend(&mut Vec::new(), Vec2::ZERO, 4, &dirs, &mut t)?;
    ensure(t.minimal > 0 && t.strict > t.minimal, || "degenerate enumeration".into())?;
    Ok(format!(
        "{} positive non-local indecomposable regions, {} decorations with I_R ≥ 0; \
         {} a-positive candidates, {} minimally positive, Ī = 0 otherwise only with inadmissible \
         minimal decoration ({})",
        t.regions, t.decorated, t.strict, t.minimal, t.inadmissible
    ))
}

// ---------------------------------------------------------------------------
// 5

/// Pointwise value at each integer `x` of the upper envelope of all concave
/// lattice paths from the origin to `(m, ⌊mφ⌋)` weakly below `y = φx`, and
/// whether a single path attains it.
fn brute_max_concave(phi: Rat, m: i64) -> (Vec<Rat>, bool) {
    let end = (m, floor(&(phi * int(m))));
    let mut paths: Vec<Vec<(i64, i64)>> = Vec::new();
    fn turn_ok(cur: &[(i64, i64)], p: (i64, i64)) -> bool {
        cur.len() < 2 || {
            let (a, b) = (cur[cur.len() - 2], cur[cur.len() - 1]);
            (b.0 - a.0) * (p.1 - b.1) - (b.1 - a.1) * (p.0 - b.0) <= 0
        }
    }
    fn go(phi: Rat, end: (i64, i64), cur: &mut Vec<(i64, i64)>, out: &mut Vec<Vec<(i64, i64)>>) {
        let x0 = cur.last().unwrap().0;
        if turn_ok(cur, end) {
            cur.push(end);
            out.push(cur.clone());
            cur.pop();
        }
        for x in x0 + 1..end.0 {
            let top = floor(&(phi * int(x)));
            // a concave path stays on or above its end chord
            let low = Rat::new(end.1 * x, end.0).ceil().to_integer();
            for y in low..=top {
                if turn_ok(cur, (x, y)) {
                    cur.push((x, y));
                    go(phi, end, cur, out);
                    cur.pop();
                }
            }
        }
    }
    go(phi, end, &mut vec![(0, 0)], &mut paths);
    let eval = |p: &[(i64, i64)], x: i64| -> Rat {
        let k = p.windows(2).position(|w| w[1].0 >= x).unwrap();
        let (a, b) = (p[k], p[k + 1]);
        int(a.1) + rat((b.1 - a.1) * (x - a.0), b.0 - a.0)
    };
    let vals: Vec<Vec<Rat>> = paths.iter().map(|p| (0..=m).map(|x| eval(p, x)).collect()).collect();
    let env: Vec<Rat> = (0..=m as usize).map(|x| vals.iter().map(|v| v[x]).max().unwrap()).collect();
    let attained = vals.contains(&env);
    (env, attained)
}

fn partition_oracle() -> Check {
    let mut cases = 0;
    for q in 2..=64i64 {
        for p in -2 * q..=2 * q {
            if p.gcd(&q) != 1 {
                continue;
            }
            let phi = rat(p, q);
            for m in 1..=8.min(q - 1) {
                let lp = lambda_plus(phi, m);
                let (env, attained) = brute_max_concave(phi, m);
                ensure(attained, || format!("φ = {phi}, m = {m}: no maximal concave path"))?;
                let lattice: Vec<(i64, i64)> = env
                    .iter()
                    .enumerate()
                    .filter(|(_, y)| y.is_integer())
                    .map(|(x, y)| (x as i64, y.to_integer()))
                    .collect();
                ensure(lp.vertices == lattice, || format!("φ = {phi}, m = {m}: {:?} vs {lattice:?}", lp.vertices))?;
                for (w, &n) in lp.vertices.windows(2).zip(&lp.entries) {
                    let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
                    ensure(dx == n && dx.gcd(&dy) == 1, || format!("φ = {phi}, m = {m}: segment {w:?} not primitive"))?;
                    ensure(dy == floor(&(phi * int(dx))), || format!("φ = {phi}, m = {m}: rise of run {dx} is {dy}"))?;
                }
                ensure(lp.entries.iter().sum::<i64>() == m, || format!("φ = {phi}, m = {m}: entries do not sum to m"))?;
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (φ, m) cases"))
}

// ---------------------------------------------------------------------------
// 6

fn duality_profiles(seed: u64) -> Vec<Profile> {
    let mut r = random::rng(seed ^ 0xd0a1);
    (0..20).map(|_| random::interval_profile(&mut r, 6)).collect()
}

fn reflection_duality(cfg: &Config) -> Check {
    let mut entries = 0;
    let mut classes = 0;
    for (k, p) in duality_profiles(cfg.seed).into_iter().enumerate() {
        let c = ctx(&p)?;
        let rp = p.reflect().map_err(|e| e.to_string())?;
        let rc = ctx(&rp)?;
        for (cls, gens) in c.generators_by_class(p.bound) {
            let HomologyClass::Lattice(v) = cls else { return Err("interval class expected".into()) };
            let rgens = rc.generators(HomologyClass::Lattice(v.swap()), rp.bound);
            let a: BTreeSet<_> = gens.iter().collect();
            let b: BTreeSet<_> = rgens.iter().collect();
            ensure(a == b, || format!("profile {k}, class {cls}: generator sets differ"))?;
            let m = c.boundary_matrix_with(cfg.exec, &gens).map_err(|e| e.to_string())?;
            let rm = rc.boundary_matrix_with(cfg.exec, &gens).map_err(|e| e.to_string())?;
            ensure(rm == m.transpose(), || format!("profile {k}, class {cls}: reflected matrix is not the transpose"))?;
            entries += m.entries.len();
            classes += 1;
        }
    }
    Ok(format!("20 profiles, {classes} classes, {entries} entries transposed exactly"))
}

// ---------------------------------------------------------------------------
// 8

fn invariance_pairs() -> Vec<(Profile, Profile)> {
    let f = rat(5, 16);
    let square = [Vec2::new(-2, -2), Vec2::new(2, -2), Vec2::new(2, 2), Vec2::new(-2, 2)];
    let rect = [Vec2::new(-3, -2), Vec2::new(3, -2), Vec2::new(3, 2), Vec2::new(-3, 2)];
    vec![
        (
            fixtures::s3_profile(30, 30, (f, f), &[Vec2::new(20, -17)], int(90)),
            fixtures::s3_profile(30, 30, (f, f), &[], int(90)),
        ),
        (fixtures::convex_circle(&square, int(6)), fixtures::convex_circle(&rect, int(8))),
    ]
}

fn nonzero_betti(p: &Profile) -> Result<(usize, BTreeMap<i64, usize>), String> {
    let c = ctx(p)?;
    let cls = c.zero_class();
    let n = c.generators(cls, p.bound).len();
    let b = c.betti(cls, p.bound).map_err(|e| e.to_string())?;
    Ok((n, b.into_iter().filter(|(_, r)| *r > 0).collect()))
}

fn family_multiset(p: &Profile) -> Vec<(Vec2, i8)> {
    let mut v: Vec<_> = p.families().iter().map(|f| (f.dir.v, f.convex)).collect();
    v.sort();
    v
}

fn homology_invariance() -> Check {
    let mut parts = Vec::new();
    for (a, b) in invariance_pairs() {
        ensure(a.nodes != b.nodes, || "profiles of a pair coincide".into())?;
        if a.geometry == Geometry::Circle {
            ensure(family_multiset(&a) == family_multiset(&b), || "circle family multisets differ".into())?;
            ensure(a.families().iter().all(|f| f.convex == 1), || "circle profile is not everywhere convex".into())?;
        }
        let (na, ba) = nonzero_betti(&a)?;
        let (nb, bb) = nonzero_betti(&b)?;
        ensure(ba == bb, || format!("{:?}: {ba:?} vs {bb:?}", a.geometry))?;
        parts.push(format!("{:?} {na}/{nb} generators, ranks {ba:?}", a.geometry));
    }
    Ok(parts.join("; "))
}

// ---------------------------------------------------------------------------
// 9

pub const CHAIN_MAP_BOUND: i64 = 80;

fn chain_map(cfg: &Config) -> Check {
    let p = fixtures::s3_convex_domain(int(CHAIN_MAP_BOUND));
    let cp = canonical_companion(&p).map_err(|e| e.to_string())?;
    let rep = verify_with(&cp, int(CHAIN_MAP_BOUND), cfg.exec, false).map_err(|e| e.to_string())?;
    ensure(rep.rows.len() >= 20, || format!("only {} lens generators", rep.rows.len()))?;
    if let Some(w) = rep.first_failure() {
        return Err(format!("fails at {w:?}"));
    }
    Ok(format!("{} class-0 generators, index and boundary preserved", rep.rows.len()))
}

// ---------------------------------------------------------------------------
// 10

fn sharing_identity(r: &mut Rng8, c: &Context, gens: &[OrbitSet]) -> Result<bool, String> {
    let path = |g: &OrbitSet| c.associate_path(g).map_err(|e| e.to_string());
    let (p0, p1, p2) = (path(pick(r, gens))?, path(pick(r, gens))?, path(pick(r, gens))?);
    let err = |e: crate::region::RegionError| e.to_string();
    let whole = Region::new(p0.clone(), p2.clone()).map_err(err)?;
    let f = factorize(&whole);
    if f.len() != 1 || f[0].is_local() {
        return Ok(false);
    }
    let r1 = Region::new(p0, p1.clone()).map_err(err)?;
    let r2 = Region::new(p1, p2).map_err(err)?;
    let parts: Vec<Region> = factorize(&r1)
        .into_iter()
        .chain(factorize(&r2))
        .filter(|f| !f.is_local())
        .map(|f| f.region())
        .collect();
    let ms = sharing_mult(&r1, &r2).map_err(err)?.1;
    let ibar = morse_bott_index(&whole) - parts.iter().map(morse_bott_index).sum::<i64>();
    let ml = parts.iter().map(|x| loose_mult(x).1 as i64).sum::<i64>() - loose_mult(&whole).1 as i64;
    ensure(ms >= 0 && ibar == ms && ms == ml, || format!("{r1:?} / {r2:?}: Ī difference {ibar}, m^s {ms}, m^l difference {ml}"))?;
    Ok(true)
}

/// `Σ_{x∈Vᵢ} I_R(x)` against the partition-area expression.
fn pick_identity(c: &Context, a: &OrbitSet, b: &OrbitSet, d: Option<i64>) -> Result<(), String> {
    let l = c.profile.lens.as_ref().ok_or("lens data missing")?;
    let asc = c.associate_region(a, b, d).map_err(|e| e.to_string())?;
    let ds = asc.d.ok_or("no end offsets")?;
    let li = local_index(&asc.region, Vec2::ZERO);
    for (i, &di) in ds.iter().enumerate() {
        let (lo, hi) = if i == 0 { (int(-1), int(0)) } else { (int(1), int(2)) };
        let lhs: i64 = li.range(lo..=hi).map(|(_, v)| v).sum();
        let phi = l.phi(i);
        let (mp, mm) = (a.ends[i] as i64, b.ends[i] as i64);
        let ci = di - floor(&(phi * int(mp))) + floor(&(phi * int(mm)));
        let (lp, lm) = (lambda_plus(phi, mp), lambda_plus(phi, mm));
        let q = lp.twice_area() - lm.twice_area() + ci * (mp + mm);
        let cz = lp.entries.len() as i64 - lm.entries.len() as i64 + di;
        ensure(lhs == q + cz, || format!("end {i}, {a} -> {b}: Σ I = {lhs}, expected {q} + {cz}"))?;
    }
    Ok(())
}

fn index_identities(cfg: &Config) -> Check {
    let mut r = random::rng(cfg.seed ^ 0x36);
    let mut sharing = 0;
    while sharing < 1000 {
        let p = random::interval_profile(&mut r, 6);
        let c = ctx(&p)?;
        for g in classes_with_two(&c, p.bound) {
            for _ in 0..20 {
                if sharing_identity(&mut r, &c, &g)? {
                    sharing += 1;
                }
            }
        }
    }
    let mut lens = 0;
    while lens < 1000 {
        let s = r.gen_bool(0.3);
        let p = random::lens_profile(&mut r, s, 6);
        let c = ctx(&p)?;
        for g in classes_with_two(&c, p.bound) {
            for _ in 0..10 {
                let (a, b) = (pick(&mut r, &g), pick(&mut r, &g));
                let d = s.then(|| r.gen_range(0..=1));
                pick_identity(&c, a, b, d)?;
                lens += 1;
            }
        }
    }
    Ok(format!("sharing identity on {sharing} triples, Pick identity on {lens} lens pairs"))
}
