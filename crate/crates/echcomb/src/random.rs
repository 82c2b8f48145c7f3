//! Random realizable profiles and fixed fixtures.
//!
//! A realizable profile comes from an integer polyline `P₀, P₁, …` whose polar
//! angle increases strictly (`Pⱼ × Pⱼ₊₁ > 0`), standing for the dual curve of
//! an orbital moment map. Each edge direction `d` is a family with action
//! `P × d`; each corner sweeps the tangent across every primitive direction
//! between its two edges, and those with action below `L` become families of
//! the corner's convexity. Edges where the sweep reverses become a pair of
//! families around a turning marker.

use num_traits::Zero;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use num_traits::{One, Signed};

use crate::lattice::{int, rat, Rat, RatPoint, Vec2};
use crate::profile::{LensData, Profile, RawNode, Turn};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

fn sign(x: i64) -> i8 {
    if x > 0 {
        1
    } else {
        -1
    }
}

/// Node kinds emitted along a sweep, before positions are assigned.
#[derive(Clone, Copy, Debug)]
enum Item {
    Family(Vec2, i8, Rat),
    Marker(Vec2, Turn),
}

/// A vector `w` with `d × w = 1`.
fn unit_partner(d: Vec2) -> Vec2 {
    let (g, a, b) = ext_gcd(d.x, d.y);
    debug_assert_eq!(g.abs(), 1);
    // a·dx + b·dy = g, so (−b, a)·g satisfies d × w = g².
    Vec2::new(-b * g, a * g)
}

fn ext_gcd(a: i64, b: i64) -> (i64, i64, i64) {
    if b == 0 {
        (a, 1, 0)
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// Primitive directions strictly inside the short arc from `a` to `b`,
/// swept with the given sense, with action `P × w < bound`, in sweep order.
fn corner_families(p: RatPoint, a: Vec2, b: Vec2, sense: i8, bound: Rat) -> Vec<(Vec2, Rat)> {
    let f = |r: Rat| *r.numer() as f64 / *r.denom() as f64;
    let unit = |d: Vec2| f(p.cross_dir(d)) / ((d.x * d.x + d.y * d.y) as f64).sqrt();
    let m = unit(a).min(unit(b));
    let lim = (f(bound) / m).ceil() as i64 + 1;
    let mut out = Vec::new();
    for x in -lim..=lim {
        for y in -lim..=lim {
            let w = Vec2::new(x, y);
            if !w.is_primitive() {
                continue;
            }
            let s = sense as i64;
            if s * a.cross(w) > 0 && s * w.cross(b) > 0 {
                let act = p.cross_dir(w);
                if act < bound {
                    out.push((w, act));
                }
            }
        }
    }
    out.sort_by(|u, v| {
        let c = sense as i64 * u.0.cross(v.0);
        0.cmp(&c)
    });
    out
}

/// A polyline given by its first vertex and `(direction, length)` segments;
/// segment `j` runs from vertex `j` to `start + Σ_{i≤j} lenᵢ·dirᵢ`.
#[derive(Clone, Debug)]
struct Chain {
    start: RatPoint,
    segs: Vec<(Vec2, Rat)>,
    closed: bool,
}

impl Chain {
    fn from_vertices(verts: &[Vec2], closed: bool) -> Option<Chain> {
        let n = verts.len();
        let ne = if closed { n } else { n - 1 };
        let mut segs = Vec::with_capacity(ne);
        for j in 0..ne {
            let e = verts[(j + 1) % n] - verts[j];
            if e.is_zero() {
                return None;
            }
            let d = e.primitive();
            segs.push((d, int(e.gcd())));
        }
        Some(Chain { start: point(verts[0]), segs, closed })
    }

    fn vertices(&self) -> Vec<RatPoint> {
        let mut out = vec![self.start];
        for &(d, t) in &self.segs {
            let last = *out.last().unwrap();
            out.push(last.add_scaled(t, d));
        }
        if self.closed {
            out.pop();
        }
        out
    }

    /// Turning sense at each corner (`segs[j]` into `segs[j+1]`).
    fn senses(&self) -> Option<Vec<i8>> {
        let ne = self.segs.len();
        let nc = if self.closed { ne } else { ne - 1 };
        (0..nc)
            .map(|j| {
                let c = self.segs[j].0.cross(self.segs[(j + 1) % ne].0);
                (c != 0).then(|| sign(c))
            })
            .collect()
    }

    fn polar_ok(&self) -> bool {
        let v = self.vertices();
        let n = v.len();
        let m = if self.closed { n } else { n - 1 };
        (0..m).all(|j| {
            let (p, q) = (v[j], v[(j + 1) % n]);
            p.x * q.y - p.y * q.x > Rat::zero()
        })
    }
}

fn point(v: Vec2) -> RatPoint {
    RatPoint::new(int(v.x), int(v.y))
}

/// Turning marker for an edge of direction `d` at `p` whose sweep reverses
/// from sense `into`: a primitive direction just past `d` on the `into`
/// side, steep enough that no direction between it and `d` has action
/// below `bound`.
fn marker_dir(p: RatPoint, d: Vec2, into: i8, bound: Rat) -> Vec2 {
    let w = unit_partner(d);
    let k = ((bound + p.cross_dir(w).abs()) / p.cross_dir(d)).ceil().to_integer() + 2;
    (k * d + (into as i64) * w).primitive()
}

/// Replaces every corner carrying families (with some headroom above the
/// bound) by a run of short edges, one per family direction, and every turning edge by two parallel edges
/// around a short marker edge. The result is a polyline on which every
/// family is an edge, so each family acquires its own tangency point and
/// orbit sets with zero-area regions between them no longer tie in
/// action. Open chains keep both endpoints fixed when `pin_ends` is set;
/// closed chains stay closed.
fn refine(chain: &Chain, skip_ends: bool, pin_ends: bool, bound: Rat) -> Option<Chain> {
    let senses = chain.senses()?;
    let verts = chain.vertices();
    let ne = chain.segs.len();
    let nc = senses.len();
    let corner = |j: usize| -> Vec<(Vec2, Rat)> {
        let q = verts[(j + 1) % verts.len()];
        corner_families(q, chain.segs[j].0, chain.segs[(j + 1) % ne].0, senses[j], bound + 1)
    };
    let runs: Vec<Vec<(Vec2, Rat)>> = (0..nc).map(corner).collect();
    // Shares (c, c') with Σw = c·d_in + c'·d_out for each corner run.
    let mut trims = vec![(Rat::zero(), Rat::zero()); nc];
    let mut worst = Rat::one();
    for j in 0..nc {
        if runs[j].is_empty() {
            continue;
        }
        let (din, dout) = (chain.segs[j].0, chain.segs[(j + 1) % ne].0);
        let s = runs[j].iter().fold(Vec2::ZERO, |acc, (w, _)| acc + *w);
        let det = din.cross(dout);
        let (c, c2) = (rat(s.cross(dout), det), rat(din.cross(s), det));
        if c <= Rat::zero() || c2 <= Rat::zero() {
            return None;
        }
        worst = worst.max(c).max(c2);
        trims[j] = (c, c2);
    }
    let eps = Rat::one() / (worst * 64);
    let mut segs = Vec::new();
    let mut err = RatPoint::origin();
    let mut start = chain.start;
    let mut long = Vec::new();
    for j in 0..ne {
        let (d, t) = chain.segs[j];
        let before = if j > 0 { Some(j - 1) } else if chain.closed { Some(nc - 1) } else { None };
        let head = before.map_or(Rat::zero(), |i| trims[i].1 * eps);
        let tail = if j < nc { trims[j].0 * eps } else { Rat::zero() };
        if j == 0 {
            start = start.add_scaled(head, d);
        }
        let len = t - head - tail;
        if len <= Rat::zero() {
            return None;
        }
        let sin = before.map(|i| senses[i]);
        let sout = (j < nc).then(|| senses[j]);
        let boundary = skip_ends && (j == 0 || j == ne - 1);
        match (sin, sout) {
            (Some(a), Some(b)) if a != b && !boundary => {
                let mid = verts[j].add_scaled(head + len / 2, d);
                let m = marker_dir(mid, d, a, bound);
                long.push(segs.len());
                segs.push((d, len / 2));
                let short = eps / m.linf();
                segs.push((m, short));
                long.push(segs.len());
                segs.push((d, len / 2));
                err = err.add_scaled(short, m);
            }
            _ => {
                long.push(segs.len());
                segs.push((d, len));
            }
        }
        if j < nc {
            for (w, _) in &runs[j] {
                segs.push((*w, eps));
            }
        }
    }
    if chain.closed || pin_ends {
        // Absorb the marker detours into the two longest non-parallel edges.
        if err.x != Rat::zero() || err.y != Rat::zero() {
            let mut order = long
                .iter()
                .copied()
                .filter(|&i| !(skip_ends && (i == 0 || i == segs.len() - 1)))
                .collect::<Vec<_>>();
            order.sort_by(|&a, &b| segs[b].1.cmp(&segs[a].1));
            let (ia, ib) = order.iter().flat_map(|&a| order.iter().map(move |&b| (a, b))).find(|&(a, b)| {
                segs[a].0.cross(segs[b].0) != 0
            })?;
            let (da, db) = (segs[ia].0, segs[ib].0);
            let det = int(da.cross(db));
            let alpha = (err.x * db.y - err.y * db.x) / det;
            let beta = (int(da.x) * err.y - int(da.y) * err.x) / det;
            segs[ia].1 -= alpha;
            segs[ib].1 -= beta;
            if segs[ia].1 <= Rat::zero() || segs[ib].1 <= Rat::zero() {
                return None;
            }
        }
    }
    let out = Chain { start, segs, closed: chain.closed };
    out.polar_ok().then_some(out)
}

/// Sweep items for a chain. `skip_ends` drops the first and last edges'
/// families (lens boundary edges).
fn sweep(chain: &Chain, skip_ends: bool, bound: Rat) -> Option<Vec<Item>> {
    let senses = chain.senses()?;
    let verts = chain.vertices();
    let ne = chain.segs.len();
    let nc = senses.len();
    let mut items = Vec::new();
    for j in 0..ne {
        let d = chain.segs[j].0;
        let p = verts[j];
        let act = p.cross_dir(d);
        let sin = if j > 0 { Some(senses[j - 1]) } else if chain.closed { Some(senses[nc - 1]) } else { None };
        let sout = (j < nc).then(|| senses[j]);
        let boundary = skip_ends && (j == 0 || j == ne - 1);
        if !boundary {
            match (sin, sout) {
                (Some(a), Some(b)) if a != b => {
                    if act < bound {
                        items.push(Item::Family(d, a, act));
                    }
                    let m = marker_dir(p, d, a, bound);
                    items.push(Item::Marker(m, if a > 0 { Turn::Max } else { Turn::Min }));
                    if act < bound {
                        items.push(Item::Family(d, b, act));
                    }
                }
                (a, b) => {
                    if act < bound {
                        items.push(Item::Family(d, a.or(b).unwrap_or(1), act));
                    }
                }
            }
        }
        if j < nc {
            let q = verts[(j + 1) % verts.len()];
            for (w, a) in corner_families(q, d, chain.segs[(j + 1) % ne].0, senses[j], bound) {
                items.push(Item::Family(w, senses[j], a));
            }
        }
    }
    Some(items)
}

/// Refines the integer polyline and sweeps the result.
fn realize(verts: &[Vec2], closed: bool, skip_ends: bool, bound: Rat) -> Option<Vec<Item>> {
    let chain = Chain::from_vertices(verts, closed)?;
    let fine = refine(&chain, skip_ends, skip_ends, bound)?;
    sweep(&fine, skip_ends, bound)
}

fn place(items: &[Item], lo: Rat, hi: Rat) -> Vec<RawNode> {
    let n = items.len() as i64;
    items
        .iter()
        .enumerate()
        .map(|(k, it)| {
            let x = lo + (hi - lo) * rat(2 * k as i64 + 1, 2 * n);
            match *it {
                Item::Family(v, c, a) => RawNode::family(x, v, c, a),
                Item::Marker(v, t) => RawNode::turning(x, v, t),
            }
        })
        .collect()
}

fn polar_chain_ok(verts: &[Vec2], closed: bool) -> bool {
    let n = verts.len();
    let m = if closed { n } else { n - 1 };
    (0..m).all(|j| verts[j].cross(verts[(j + 1) % n]) > 0)
}

fn small_dirs(r: i64) -> Vec<Vec2> {
    let mut out = Vec::new();
    for x in -r..=r {
        for y in -r..=r {
            let v = Vec2::new(x, y);
            if v.is_primitive() {
                out.push(v);
            }
        }
    }
    out
}

fn angle(v: Vec2) -> f64 {
    (v.y as f64).atan2(v.x as f64)
}

fn nearest_dir(dirs: &[Vec2], theta: f64) -> Vec2 {
    let (c, s) = (theta.cos(), theta.sin());
    *dirs
        .iter()
        .max_by(|a, b| {
            let da = (a.x as f64 * c + a.y as f64 * s) / (a.dot(**a) as f64).sqrt();
            let db = (b.x as f64 * c + b.y as f64 * s) / (b.dot(**b) as f64).sqrt();
            da.partial_cmp(&db).unwrap()
        })
        .unwrap()
}

/// Signed short-arc turning angle from `a` to `b`.
fn turn(a: Vec2, b: Vec2) -> f64 {
    (a.cross(b) as f64).atan2(a.dot(b) as f64)
}

/// Positive integers `(s, t)` with `s·a + t·b = target`, if they exist.
fn solve_pair(a: Vec2, b: Vec2, target: Vec2) -> Option<(i64, i64)> {
    let det = a.cross(b);
    if det == 0 {
        return None;
    }
    let (sn, tn) = (target.cross(b), a.cross(target));
    (sn % det == 0 && tn % det == 0 && sn / det > 0 && tn / det > 0).then(|| (sn / det, tn / det))
}

fn count_families(items: &[Item]) -> usize {
    items.iter().filter(|i| matches!(i, Item::Family(..))).count()
}

/// Random interval profile with between one and `max_families` families.
pub fn interval_profile(rng: &mut Rng8, max_families: usize) -> Profile {
    let dirs = small_dirs(2);
    loop {
        let mut p = Vec2::new(rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        if p.is_zero() {
            continue;
        }
        let k = rng.gen_range(2..=4);
        let mut verts = vec![p];
        let mut prev: Option<Vec2> = None;
        for _ in 0..k {
            let ok: Vec<Vec2> = dirs
                .iter()
                .copied()
                .filter(|d| p.cross(*d) > 0 && prev.is_none_or(|q| q.cross(*d) != 0))
                .collect();
            if ok.is_empty() {
                break;
            }
            let d = ok[rng.gen_range(0..ok.len())];
            p += rng.gen_range(1..=2) * d;
            verts.push(p);
            prev = Some(d);
        }
        if verts.len() < 2 || !polar_chain_ok(&verts, false) {
            continue;
        }
        let bound = int(rng.gen_range(4..=10));
        let Some(items) = realize(&verts, false, false, bound) else { continue };
        let fams = count_families(&items);
        if fams == 0 || fams > max_families {
            continue;
        }
        let prof = Profile::interval(bound, place(&items, Rat::zero(), int(1)));
        if prof.validate().is_empty() {
            return prof;
        }
    }
}

/// Closed polygon with edge directions following `angles`, positioned so
/// that its polar angle increases along every edge.
fn closed_polygon(rng: &mut Rng8, dirs: &[Vec2]) -> Option<Vec<Vec2>> {
    let k = dirs.len();
    for _ in 0..40 {
        let mut t: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=3)).collect();
        let (i, j) = (rng.gen_range(0..k), rng.gen_range(0..k));
        if i == j {
            continue;
        }
        let rest = (0..k)
            .filter(|&m| m != i && m != j)
            .fold(Vec2::ZERO, |acc, m| acc + t[m] * dirs[m]);
        let Some((ti, tj)) = solve_pair(dirs[i], dirs[j], -rest) else { continue };
        if ti > 6 || tj > 6 {
            continue;
        }
        t[i] = ti;
        t[j] = tj;
        let mut v = vec![Vec2::ZERO];
        for m in 0..k - 1 {
            let last = v[m];
            v.push(last + 2 * t[m] * dirs[m]);
        }
        let (lo_x, hi_x) = (v.iter().map(|p| p.x).min()?, v.iter().map(|p| p.x).max()?);
        let (lo_y, hi_y) = (v.iter().map(|p| p.y).min()?, v.iter().map(|p| p.y).max()?);
        let mut feasible = Vec::new();
        for ox in lo_x..=hi_x {
            for oy in lo_y..=hi_y {
                let o = Vec2::new(ox, oy);
                if (0..k).all(|m| (v[m] - o).cross(dirs[m]) > 0) {
                    feasible.push(o);
                }
            }
        }
        if feasible.is_empty() {
            continue;
        }
        let o = feasible[rng.gen_range(0..feasible.len())];
        return Some(v.into_iter().map(|p| p - o).collect());
    }
    None
}

/// Random circle profile with winding `winding` and at most `max_families`.
pub fn circle_profile(rng: &mut Rng8, winding: i64, max_families: usize) -> Profile {
    let pool = small_dirs(2);
    loop {
        let k = rng.gen_range(3 * winding as usize + 1..=3 * winding as usize + 3);
        let total = std::f64::consts::TAU * winding as f64;
        let mut th: Vec<f64> = (0..k).map(|_| rng.gen_range(0.0..total)).collect();
        th.sort_by(|a, b| a.partial_cmp(b).unwrap());
        if rng.gen_bool(0.5) && k > 3 {
            let j = rng.gen_range(0..k - 1);
            th.swap(j, j + 1);
        }
        let dirs: Vec<Vec2> = th.iter().map(|&t| nearest_dir(&pool, t)).collect();
        let turns: Vec<f64> = (0..k).map(|j| turn(dirs[j], dirs[(j + 1) % k])).collect();
        if turns.iter().any(|t| t.abs() < 1e-9 || t.abs() > std::f64::consts::PI - 1e-9) {
            continue;
        }
        let sum: f64 = turns.iter().sum();
        if (sum - total).abs() > 1e-6 {
            continue;
        }
        let Some(verts) = closed_polygon(rng, &dirs) else { continue };
        if !polar_chain_ok(&verts, true) {
            continue;
        }
        let n = verts.len();
        let least = (0..n).map(|j| verts[j].cross(verts[(j + 1) % n] - verts[j]).abs() / (verts[(j + 1) % n] - verts[j]).gcd()).min().unwrap();
        let bound = int(least + rng.gen_range(1..=5));
        let Some(items) = realize(&verts, true, false, bound) else { continue };
        let fams = count_families(&items);
        if fams == 0 || fams > max_families {
            continue;
        }
        let p = Profile::circle(bound, place(&items, Rat::zero(), int(1)));
        if p.winding == winding && p.validate().is_empty() {
            return p;
        }
    }
}

/// Lens data with `u₀ = (0,−1)` and the given `u₁`.
fn lens_frame(u1: Vec2, k0: i64) -> (Vec2, Vec2, Vec2, Vec2) {
    let u0 = Vec2::new(0, -1);
    let v0 = Vec2::new(1, k0);
    // det(u1|v1) = −1 ⇔ u1 × v1 = −1
    let v1 = -unit_partner(u1);
    (u0, v0, u1, v1)
}

/// Random lens-like profile; `s1s2` picks `u₁ = ±u₀`. The dual curve starts at
/// `S·A(e₀)·u₀` and ends at `−S·A(e₁)·u₁` for a scale `S`, so interior
/// actions are comparable to the endpoint actions.
pub fn lens_profile(rng: &mut Rng8, s1s2: bool, max_families: usize) -> Profile {
    let pool = small_dirs(2);
    loop {
        let u1 = if s1s2 {
            Vec2::new(0, if rng.gen_bool(0.5) { -1 } else { 1 })
        } else {
            let c = [Vec2::new(-1, 0), Vec2::new(-1, 1), Vec2::new(-2, 1), Vec2::new(-1, -1), Vec2::new(1, 2)];
            c[rng.gen_range(0..c.len())]
        };
        let (u0, v0, u1, v1) = lens_frame(u1, rng.gen_range(-1..=1));
        let scale = rng.gen_range(3..=6);
        let (l0, l1) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let bound = int(scale * rng.gen_range(2..=4));
        let q0 = rng.gen_range(12..30);
        let q1 = rng.gen_range(12..30);
        let p0 = rng.gen_range(1..q0);
        let p1 = rng.gen_range(1..q1);
        let data = LensData {
            u0,
            v0,
            u1,
            v1,
            phi0: rat(p0, q0),
            phi1: rat(p1, q1),
            action_e0: int(scale * l0),
            action_e1: int(scale * l1),
        };
        let (end0, end1) = (data.end_dir(0), data.end_dir(1));
        let start = (scale * l0) * u0;
        let finish = -(scale * l1) * u1;
        let first = start + end0;
        let last = finish - end1;
        let a0 = angle(end0);
        let mut a1 = angle(end1);
        while a1 <= a0 {
            a1 += std::f64::consts::TAU;
        }
        let k = rng.gen_range(2..=4);
        let mut th: Vec<f64> = (0..k).map(|_| rng.gen_range(a0..a1)).collect();
        th.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut dirs: Vec<Vec2> = th.iter().map(|&t| nearest_dir(&pool, t)).collect();
        dirs.dedup();
        if dirs.len() < 2 {
            continue;
        }
        let mut t: Vec<i64> = (0..dirs.len()).map(|_| rng.gen_range(1..=3)).collect();
        let n = dirs.len();
        let rest = (0..n - 2).fold(Vec2::ZERO, |acc, m| acc + t[m] * dirs[m]);
        let Some((ta, tb)) = solve_pair(dirs[n - 2], dirs[n - 1], last - first - rest) else { continue };
        t[n - 2] = ta;
        t[n - 1] = tb;
        let mut verts = vec![start, first];
        for m in 0..n {
            let p = *verts.last().unwrap();
            verts.push(p + t[m] * dirs[m]);
        }
        verts.push(finish);
        if !polar_chain_ok(&verts, false) {
            continue;
        }
        let Some(items) = realize(&verts, false, true, bound) else { continue };
        if count_families(&items) > max_families {
            continue;
        }
        let p = Profile::lens(bound, place(&items, Rat::zero(), int(1)), data);
        if p.validate().is_empty() {
            return p;
        }
    }
}

/// Fixed profiles used throughout the tests.
pub mod fixtures {
    use super::*;

    /// Six families with directions `(1,0)⁺,(0,1)⁺,(0,1)⁻,(1,0)⁻,(1,0)⁺,(−1,0)⁺`
    /// and turning markers between, all actions 1.
    pub fn profile_a_with_max(max: Vec2) -> Profile {
        let f = |k: i64, x: i64, y: i64, c: i8| RawNode::family(rat(k, 16), Vec2::new(x, y), c, int(1));
        Profile::interval(
            rat(5, 2),
            vec![
                f(2, 1, 0, 1),
                f(4, 0, 1, 1),
                RawNode::turning(rat(5, 16), max, Turn::Max),
                f(6, 0, 1, -1),
                f(8, 1, 0, -1),
                RawNode::turning(rat(9, 16), Vec2::new(1, -1), Turn::Min),
                f(10, 1, 0, 1),
                f(12, -1, 0, 1),
            ],
        )
    }

    pub fn profile_a() -> Profile {
        profile_a_with_max(Vec2::new(-1, 2))
    }

    /// Convex families `(1,0), (0,1), (−1,0)` for the square configuration.
    pub fn square_profile() -> Profile {
        Profile::interval(
            int(4),
            vec![
                RawNode::family(rat(1, 4), Vec2::new(1, 0), 1, int(1)),
                RawNode::family(rat(1, 2), Vec2::new(0, 1), 1, int(1)),
                RawNode::family(rat(3, 4), Vec2::new(-1, 0), 1, int(1)),
            ],
        )
    }

    /// `S³` as the boundary of a convex toric domain: the dual curve runs from
    /// `λ₀u₀` to `−λ₁u₁` through the given interior corner vertices.
    pub fn s3_profile(l0: i64, l1: i64, phi: (Rat, Rat), corners: &[Vec2], bound: Rat) -> Profile {
        let (u0, v0, u1, v1) = (Vec2::new(0, -1), Vec2::new(1, 0), Vec2::new(-1, 0), Vec2::new(0, 1));
        let data = LensData { u0, v0, u1, v1, phi0: phi.0, phi1: phi.1, action_e0: int(l0), action_e1: int(l1) };
        let mut verts = vec![l0 * u0];
        let end0 = data.end_dir(0);
        let end1 = data.end_dir(1);
        verts.push(l0 * u0 + end0);
        verts.extend_from_slice(corners);
        verts.push(-l1 * u1 - end1);
        verts.push(-l1 * u1);
        let items = realize(&verts, false, true, bound).expect("non-degenerate corners");
        Profile::lens(bound, place(&items, Rat::zero(), int(1)), data)
    }

    /// The standard `S³` fixture: rotation angles `5/16` at both ends and one
    /// interior corner.
    pub fn s3_convex_domain(bound: Rat) -> Profile {
        s3_profile(30, 30, (rat(5, 16), rat(5, 16)), &[Vec2::new(20, -17)], bound)
    }

    /// Everywhere-convex `T³` profile from a convex polygon around the origin.
    pub fn convex_circle(verts: &[Vec2], bound: Rat) -> Profile {
        let items = realize(verts, true, false, bound).expect("non-degenerate polygon");
        Profile::circle(bound, place(&items, Rat::zero(), int(1)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_profiles_validate() {
        let mut r = rng(7);
        for _ in 0..10 {
            assert!(interval_profile(&mut r, 6).validate().is_empty());
            assert!(circle_profile(&mut r, 1, 8).validate().is_empty());
            assert!(circle_profile(&mut r, 2, 10).validate().is_empty());
            assert!(lens_profile(&mut r, false, 6).validate().is_empty());
            assert!(lens_profile(&mut r, true, 6).validate().is_empty());
        }
    }

    #[test]
    fn partners() {
        for d in [Vec2::new(3, 2), Vec2::new(-1, 4), Vec2::new(0, -1), Vec2::new(5, -3)] {
            assert_eq!(d.cross(unit_partner(d)), 1);
        }
    }

    #[test]
    fn fixtures_validate() {
        assert!(fixtures::profile_a().validate().is_empty(), "{:?}", fixtures::profile_a().validate());
        assert!(fixtures::square_profile().validate().is_empty());
    }
}
