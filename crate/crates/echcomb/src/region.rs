//! Decorated lattice paths and regions: slice classes, factorization,
//! positivity, decorations and the combinatorial index.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{Rat, Vec2};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegionError {
    #[error("paths disagree on direction or convexity at x = {0}")]
    Incompatible(Rat),
    #[error("edge at x = {0} has zero multiplicity")]
    EmptyEdge(Rat),
    #[error("middle paths of the two regions differ")]
    MiddleMismatch,
}

/// One edge of a decorated path.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub v: Vec2,
    pub c: i8,
    pub me: u32,
    pub mh: u32,
}

impl Edge {
    pub fn new(v: Vec2, c: i8, me: u32, mh: u32) -> Self {
        Edge { v, c, me, mh }
    }

    pub fn m(&self) -> u32 {
        self.me + self.mh
    }
}

/// A decorated lattice path: a finite map from positions to edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Path {
    pub edges: BTreeMap<Rat, Edge>,
}

impl Path {
    pub fn new() -> Self {
        Path::default()
    }

    /// Adds multiplicity at `x`, merging with an existing edge there.
    pub fn add(&mut self, x: Rat, e: Edge) -> Result<(), RegionError> {
        if e.m() == 0 {
            return Ok(());
        }
        match self.edges.get_mut(&x) {
            Some(old) => {
                if old.v != e.v || old.c != e.c {
                    return Err(RegionError::Incompatible(x));
                }
                old.me += e.me;
                old.mh += e.mh;
            }
            None => {
                self.edges.insert(x, e);
            }
        }
        Ok(())
    }

    pub fn with(mut self, x: Rat, e: Edge) -> Self {
        self.add(x, e).expect("compatible edge");
        self
    }

    pub fn class(&self) -> Vec2 {
        self.edges
            .values()
            .fold(Vec2::ZERO, |acc, e| acc + (e.m() as i64) * e.v)
    }

    pub fn mass(&self) -> u32 {
        self.edges.values().map(|e| e.m()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// The undecorated content `x ↦ (v, c, m)`.
    pub fn underlying(&self) -> BTreeMap<Rat, (Vec2, i8, u32)> {
        self.edges.iter().map(|(x, e)| (*x, (e.v, e.c, e.m()))).collect()
    }
}

/// A pair of compatible decorated paths.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Region {
    pub p0: Path,
    pub p1: Path,
}

/// Per-position data of a region, with both one-sided slice classes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Site {
    pub x: Rat,
    pub v: Vec2,
    pub c: i8,
    pub e0: u32,
    pub h0: u32,
    pub e1: u32,
    pub h1: u32,
    pub left: Vec2,
    pub right: Vec2,
}

impl Site {
    pub fn m0(&self) -> u32 {
        self.e0 + self.h0
    }
    pub fn m1(&self) -> u32 {
        self.e1 + self.h1
    }
}

impl Region {
    pub fn new(p0: Path, p1: Path) -> Result<Self, RegionError> {
        for (x, e) in &p0.edges {
            if e.m() == 0 {
                return Err(RegionError::EmptyEdge(*x));
            }
            if let Some(f) = p1.edges.get(x) {
                if f.v != e.v || f.c != e.c {
                    return Err(RegionError::Incompatible(*x));
                }
            }
        }
        if let Some((x, _)) = p1.edges.iter().find(|(_, e)| e.m() == 0) {
            return Err(RegionError::EmptyEdge(*x));
        }
        Ok(Region { p0, p1 })
    }

    pub fn is_empty(&self) -> bool {
        self.p0.is_empty() && self.p1.is_empty()
    }

    pub fn positions(&self) -> Vec<Rat> {
        let mut xs: Vec<Rat> = self.p0.edges.keys().chain(self.p1.edges.keys()).copied().collect();
        xs.sort();
        xs.dedup();
        xs
    }

    /// Sites in increasing order, with slice classes starting from `sigma0`.
    pub fn sites(&self, sigma0: Vec2) -> Vec<Site> {
        let mut s = sigma0;
        self.positions()
            .into_iter()
            .map(|x| {
                let a = self.p0.edges.get(&x);
                let b = self.p1.edges.get(&x);
                let (v, c) = a.or(b).map(|e| (e.v, e.c)).unwrap();
                let (e0, h0) = a.map_or((0, 0), |e| (e.me, e.mh));
                let (e1, h1) = b.map_or((0, 0), |e| (e.me, e.mh));
                let left = s;
                s = s - ((e0 + h0) as i64) * v + ((e1 + h1) as i64) * v;
                Site { x, v, c, e0, h0, e1, h1, left, right: s }
            })
            .collect()
    }

    /// The same underlying region with every copy recorded as elliptic.
    pub fn undecorated(&self) -> Region {
        let strip = |p: &Path| Path {
            edges: p
                .edges
                .iter()
                .map(|(x, e)| (*x, Edge::new(e.v, e.c, e.m(), 0)))
                .collect(),
        };
        Region { p0: strip(&self.p0), p1: strip(&self.p1) }
    }

    pub fn same_underlying(&self, o: &Region) -> bool {
        self.p0.underlying() == o.p0.underlying() && self.p1.underlying() == o.p1.underlying()
    }

    /// True when both paths agree exactly, decorations included.
    pub fn is_trivial(&self) -> bool {
        self.p0 == self.p1
    }

    pub fn swap_sides(&self) -> Region {
        Region { p0: self.p1.clone(), p1: self.p0.clone() }
    }

    fn from_sites<I>(sites: I) -> Region
    where
        I: IntoIterator<Item = (Rat, Vec2, i8, (u32, u32), (u32, u32))>,
    {
        let mut r = Region::default();
        for (x, v, c, (e0, h0), (e1, h1)) in sites {
            if e0 + h0 > 0 {
                r.p0.edges.insert(x, Edge::new(v, c, e0, h0));
            }
            if e1 + h1 > 0 {
                r.p1.edges.insert(x, Edge::new(v, c, e1, h1));
            }
        }
        r
    }
}

/// `σ_R(x)` with the left-limit convention, starting from `sigma0`.
pub fn slice_class(r: &Region, sigma0: Vec2, x: Rat) -> Vec2 {
    let mut s = sigma0;
    for (y, e) in &r.p0.edges {
        if *y < x {
            s -= (e.m() as i64) * e.v;
        }
    }
    for (y, e) in &r.p1.edges {
        if *y < x {
            s += (e.m() as i64) * e.v;
        }
    }
    s
}

/// Maximal blocks of the support separated by gaps on which `σ ≡ 0`.
pub fn factor_blocks(r: &Region) -> Vec<Region> {
    let sites = r.sites(Vec2::ZERO);
    let mut blocks = Vec::new();
    let mut cur: Vec<Site> = Vec::new();
    for s in sites {
        cur.push(s);
        if s.right.is_zero() {
            blocks.push(Region::from_sites(
                cur.drain(..).map(|t| (t.x, t.v, t.c, (t.e0, t.h0), (t.e1, t.h1))),
            ));
        }
    }
    if !cur.is_empty() {
        blocks.push(Region::from_sites(
            cur.into_iter().map(|t| (t.x, t.v, t.c, (t.e0, t.h0), (t.e1, t.h1))),
        ));
    }
    blocks
}

/// An indecomposable factor of an undecorated region.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    /// `(x, v, c, f0, f1)` in increasing `x`.
    pub sites: Vec<(Rat, Vec2, i8, u32, u32)>,
}

impl Factor {
    /// A factor is local exactly when it is a single bigon.
    pub fn is_local(&self) -> bool {
        self.sites.len() == 1
    }

    pub fn start(&self) -> Rat {
        self.sites[0].0
    }

    pub fn end(&self) -> Rat {
        self.sites[self.sites.len() - 1].0
    }

    /// The factor as an undecorated region (all copies elliptic).
    pub fn region(&self) -> Region {
        Region::from_sites(self.sites.iter().map(|&(x, v, c, f0, f1)| (x, v, c, (f0, 0), (f1, 0))))
    }

    pub fn mult_at(&self, x: Rat) -> (u32, u32) {
        self.sites
            .iter()
            .find(|s| s.0 == x)
            .map_or((0, 0), |s| (s.3, s.4))
    }
}

fn pos_neg(k: i64) -> (u32, u32) {
    if k >= 0 {
        (k as u32, 0)
    } else {
        (0, (-k) as u32)
    }
}

/// Unique factorization of the underlying region into indecomposables, in
/// increasing position order. Bigons at the same point are separate factors.
pub fn factorize(r: &Region) -> Vec<Factor> {
    let mut out = Vec::new();
    let mut open: Option<Factor> = None;
    let bigons = |out: &mut Vec<Factor>, x: Rat, v: Vec2, c: i8, n: u32| {
        for _ in 0..n {
            out.push(Factor { sites: vec![(x, v, c, 1, 1)] });
        }
    };
    for s in r.sites(Vec2::ZERO) {
        let (m0, m1) = (s.m0(), s.m1());
        let d = m0 as i64 - m1 as i64;
        match (s.left.is_zero(), s.right.is_zero()) {
            (true, true) => bigons(&mut out, s.x, s.v, s.c, m0.min(m1)),
            (true, false) => {
                bigons(&mut out, s.x, s.v, s.c, m0.min(m1));
                let (f0, f1) = pos_neg(d);
                open = Some(Factor { sites: vec![(s.x, s.v, s.c, f0, f1)] });
            }
            (false, true) => {
                let (f0, f1) = pos_neg(d);
                let mut f = open.take().expect("open factor");
                f.sites.push((s.x, s.v, s.c, f0, f1));
                out.push(f);
                bigons(&mut out, s.x, s.v, s.c, m0.min(m1));
            }
            (false, false) => {
                let split = s.left.multiple_of(s.v).and_then(|kl| {
                    let kr = d - kl;
                    let (l0, l1) = pos_neg(kl);
                    let (r0, r1) = pos_neg(kr);
                    let rest = m0 as i64 - l0 as i64 - r0 as i64;
                    debug_assert_eq!(rest, m1 as i64 - l1 as i64 - r1 as i64);
                    (rest >= 0).then_some(((l0, l1), rest as u32, (r0, r1)))
                });
                let mut f = open.take().expect("open factor");
                match split {
                    Some(((l0, l1), rest, (r0, r1))) => {
                        f.sites.push((s.x, s.v, s.c, l0, l1));
                        out.push(f);
                        bigons(&mut out, s.x, s.v, s.c, rest);
                        open = Some(Factor { sites: vec![(s.x, s.v, s.c, r0, r1)] });
                    }
                    None => {
                        f.sites.push((s.x, s.v, s.c, m0, m1));
                        open = Some(f);
                    }
                }
            }
        }
    }
    if let Some(f) = open {
        // Only reachable when [p0] ≠ [p1]; keep the tail as one piece.
        out.push(f);
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Positivity {
    NotPositive,
    Positive,
    MinimallyPositive,
}

fn factor_positivity(f: &Factor) -> Positivity {
    let sites = f.region().sites(Vec2::ZERO);
    let mut minimal = true;
    for s in &sites {
        let cr = s.v.cross(s.left);
        for (i, m) in [(0, s.m0()), (1, s.m1())] {
            if m == 0 {
                continue;
            }
            if cr < 0 {
                return Positivity::NotPositive;
            }
            // equality needs c ≠ (−1)^{i+1}
            if cr == 0 && s.c == if i == 0 { -1 } else { 1 } {
                return Positivity::NotPositive;
            }
            // minimal: cross ≤ 1, with equality needing c ≠ (−1)^i
            if cr > 1 || (cr == 1 && s.c == if i == 0 { 1 } else { -1 }) {
                minimal = false;
            }
        }
        if !s.right.is_zero() && !s.right.is_primitive() {
            minimal = false;
        }
    }
    if minimal {
        Positivity::MinimallyPositive
    } else {
        Positivity::Positive
    }
}

/// Classification aggregated over the non-local factors.
pub fn classify_positivity(r: &Region) -> Positivity {
    factorize(r)
        .iter()
        .filter(|f| !f.is_local())
        .map(factor_positivity)
        .min()
        .unwrap_or(Positivity::MinimallyPositive)
}

/// The decoration with `p0` convex hyperbolic, `p0` concave elliptic, `p1`
/// convex elliptic and `p1` concave hyperbolic.
pub fn minimal_decoration(r: &Region) -> Region {
    let redo = |p: &Path, elliptic_sign: i8| Path {
        edges: p
            .edges
            .iter()
            .map(|(x, e)| {
                let m = e.m();
                let ed = if e.c == elliptic_sign { Edge::new(e.v, e.c, m, 0) } else { Edge::new(e.v, e.c, 0, m) };
                (*x, ed)
            })
            .collect(),
    };
    Region { p0: redo(&r.p0, -1), p1: redo(&r.p1, 1) }
}

/// ℓ¹ distance of elliptic multiplicities to the minimal decoration.
pub fn decoration_distance(r: &Region) -> u32 {
    let min = minimal_decoration(r);
    let d = |a: &Path, b: &Path| -> u32 {
        a.edges
            .iter()
            .map(|(x, e)| e.me.abs_diff(b.edges[x].me))
            .sum()
    };
    d(&r.p0, &min.p0) + d(&r.p1, &min.p1)
}

/// Local index `I_R(x) = Q_R(x) + CZ_R(x)` at each support point.
pub fn local_index(r: &Region, sigma0: Vec2) -> BTreeMap<Rat, i64> {
    r.sites(sigma0)
        .into_iter()
        .map(|s| {
            let q = (s.m0() + s.m1()) as i64 * s.v.cross(s.left);
            let cz = s.c as i64 * (s.e0 as i64 - s.e1 as i64);
            (s.x, q + cz)
        })
        .collect()
}

/// The combinatorial ECH index.
pub fn ech_index(r: &Region, sigma0: Vec2) -> i64 {
    local_index(r, sigma0).values().sum()
}

/// `Σ_x Q_R(x)`; for interval regions this is twice the enclosed area.
pub fn q_total(r: &Region, sigma0: Vec2) -> i64 {
    r.sites(sigma0)
        .iter()
        .map(|s| (s.m0() + s.m1()) as i64 * s.v.cross(s.left))
        .sum()
}

/// `Ī(R̄) = I(R_min)`.
pub fn morse_bott_index(r: &Region) -> i64 {
    ech_index(&minimal_decoration(r), Vec2::ZERO)
}

/// Loose multiplicity: `m_{P⁰}` at convex points, `m_{P¹}` at concave ones.
pub fn loose_mult(r: &Region) -> (BTreeMap<Rat, u32>, u32) {
    let map: BTreeMap<Rat, u32> = r
        .sites(Vec2::ZERO)
        .into_iter()
        .map(|s| (s.x, if s.c == 1 { s.m0() } else { s.m1() }))
        .collect();
    let total = map.values().sum();
    (map, total)
}

/// Number of local bigon factors at each position.
pub fn trivial_bigon_count(r: &Region) -> BTreeMap<Rat, u32> {
    let mut out = BTreeMap::new();
    for f in factorize(r).iter().filter(|f| f.is_local()) {
        *out.entry(f.start()).or_insert(0) += 1;
    }
    out
}

/// Sharing multiplicity between `R¹ = (P⁰,P¹)` and `R² = (P¹,P²)`.
pub fn sharing_mult(r1: &Region, r2: &Region) -> Result<(BTreeMap<Rat, i64>, i64), RegionError> {
    if r1.p1.underlying() != r2.p0.underlying() {
        return Err(RegionError::MiddleMismatch);
    }
    let whole = Region::new(r1.p0.clone(), r2.p1.clone())?;
    let t = trivial_bigon_count(&whole);
    let t1 = trivial_bigon_count(r1);
    let t2 = trivial_bigon_count(r2);
    let mut xs: Vec<Rat> = whole.positions();
    xs.extend(r1.p1.edges.keys().copied());
    xs.sort();
    xs.dedup();
    let get = |m: &BTreeMap<Rat, u32>, x: &Rat| *m.get(x).unwrap_or(&0) as i64;
    let map: BTreeMap<Rat, i64> = xs
        .iter()
        .map(|x| {
            let mid = r1.p1.edges.get(x).map_or(0, |e| e.m()) as i64;
            (*x, mid + get(&t, x) - get(&t1, x) - get(&t2, x))
        })
        .filter(|(_, v)| *v != 0)
        .collect();
    let total = map.values().sum();
    Ok((map, total))
}

/// A decomposition `R = T₁ R' T₂` with trivial `Tᵢ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Split {
    pub t1: Region,
    pub core: Region,
    pub t2: Region,
}

/// Every way of writing `r` as `T₁R'T₂` with `R'` non-local and
/// indecomposable, enumerating how shared copies at the two ends of `R'` are
/// decorated inside the trivial parts.
pub fn theorem_splits(r: &Region) -> Vec<Split> {
    let factors = factorize(r);
    let mut nonlocal = factors.iter().filter(|f| !f.is_local());
    let (Some(core), None) = (nonlocal.next(), nonlocal.next()) else {
        return Vec::new();
    };
    let (a, b) = (core.start(), core.end());
    let sites = r.sites(Vec2::ZERO);
    // Positions outside the core carry only bigons and must match exactly.
    for s in &sites {
        if (s.x < a || s.x > b) && (s.e0 != s.e1 || s.h0 != s.h1) {
            return Vec::new();
        }
    }
    let end_site = |x: Rat| *sites.iter().find(|s| s.x == x).unwrap();
    let choices = |s: &Site| -> Vec<(u32, u32)> {
        let (f0, _) = core.mult_at(s.x);
        let shared = s.m0() - f0;
        let lo = shared.saturating_sub(s.h0.min(s.h1));
        let hi = shared.min(s.e0).min(s.e1);
        (lo..=hi).map(|te| (te, shared - te)).collect()
    };
    let sa = end_site(a);
    let sb = end_site(b);
    let mut out = Vec::new();
    for &(ta_e, ta_h) in &choices(&sa) {
        for &(tb_e, tb_h) in &choices(&sb) {
            let mut split = Split { t1: Region::default(), core: Region::default(), t2: Region::default() };
            for s in &sites {
                let (te, th) = if s.x == a {
                    (ta_e, ta_h)
                } else if s.x == b {
                    (tb_e, tb_h)
                } else if s.x < a || s.x > b {
                    (s.e0, s.h0)
                } else {
                    (0, 0)
                };
                if te + th > 0 {
                    let t = if s.x <= a { &mut split.t1 } else { &mut split.t2 };
                    t.p0.edges.insert(s.x, Edge::new(s.v, s.c, te, th));
                    t.p1.edges.insert(s.x, Edge::new(s.v, s.c, te, th));
                }
                if s.x >= a && s.x <= b {
                    let (c0, c1) = ((s.e0 - te, s.h0 - th), (s.e1 - te, s.h1 - th));
                    if c0.0 + c0.1 > 0 {
                        split.core.p0.edges.insert(s.x, Edge::new(s.v, s.c, c0.0, c0.1));
                    }
                    if c1.0 + c1.1 > 0 {
                        split.core.p1.edges.insert(s.x, Edge::new(s.v, s.c, c1.0, c1.1));
                    }
                }
            }
            out.push(split);
        }
    }
    out
}

/// The first split found by [`theorem_splits`], if any.
pub fn theorem_split(r: &Region) -> Option<Split> {
    theorem_splits(r).into_iter().next()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::int;

    fn e(x: i64, y: i64, c: i8, me: u32, mh: u32) -> Edge {
        Edge::new(Vec2::new(x, y), c, me, mh)
    }

    /// Three-site region with a convex-to-concave switch at positions 1..4.
    fn third() -> Region {
        let p0 = Path::new().with(int(1), e(1, 0, 1, 0, 1)).with(int(3), e(0, 1, -1, 1, 0));
        let p1 = Path::new().with(int(2), e(0, 1, 1, 0, 1)).with(int(4), e(1, 0, -1, 0, 1));
        Region::new(p0, p1).unwrap()
    }

    #[test]
    fn third_region_values() {
        let r = third();
        assert_eq!(slice_class(&r, Vec2::ZERO, Rat::new(5, 2)), Vec2::new(-1, 1));
        assert_eq!(factor_blocks(&r).len(), 1);
        assert_eq!(classify_positivity(&r), Positivity::MinimallyPositive);
        assert_eq!(decoration_distance(&r), 1);
        assert_eq!(q_total(&r, Vec2::ZERO), 2);
        assert_eq!(ech_index(&r, Vec2::ZERO), 1);
        assert_eq!(morse_bott_index(&r), 0);
    }

    #[test]
    fn incompatible_paths_rejected() {
        let p0 = Path::new().with(int(1), e(1, 0, 1, 1, 0));
        let p1 = Path::new().with(int(1), e(1, 0, -1, 1, 0));
        assert_eq!(Region::new(p0, p1), Err(RegionError::Incompatible(int(1))));
    }

    #[test]
    fn stacked_bigons_factor_separately() {
        let p = Path::new().with(int(0), e(1, 0, 1, 2, 1));
        let r = Region::new(p.clone(), p).unwrap();
        let f = factorize(&r);
        assert_eq!(f.len(), 3);
        assert!(f.iter().all(Factor::is_local));
        assert_eq!(trivial_bigon_count(&r)[&int(0)], 3);
    }

    #[test]
    fn rectangle_is_indecomposable() {
        let p0 = Path::new()
            .with(int(0), e(1, 0, 1, 0, 1))
            .with(int(1), e(0, 1, 1, 0, 2))
            .with(int(2), e(-1, 0, 1, 0, 1));
        let p1 = Path::new().with(int(1), e(0, 1, 1, 2, 0));
        let f = factorize(&Region::new(p0, p1).unwrap());
        assert_eq!(f.len(), 1);
        assert!(!f[0].is_local());
    }

    #[test]
    fn decomposition_at_interior_point() {
        // Two triangles glued at x = 1, plus one shared copy there.
        let h = Rat::new(1, 2);
        let p0 = Path::new()
            .with(int(0), e(1, 0, 1, 0, 1))
            .with(int(1), e(0, 1, 1, 3, 0))
            .with(int(2), e(-1, 0, 1, 0, 1));
        let p1 = Path::new()
            .with(h, e(1, 1, 1, 1, 0))
            .with(int(1), e(0, 1, 1, 1, 0))
            .with(int(1) + h, e(-1, 1, 1, 1, 0));
        let f = factorize(&Region::new(p0, p1).unwrap());
        assert_eq!(f.iter().filter(|f| !f.is_local()).count(), 2);
        assert_eq!(f.iter().filter(|f| f.is_local()).count(), 1);
        assert_eq!(f[0].mult_at(int(1)), (1, 0));
        assert_eq!(f[2].mult_at(int(1)), (1, 0));
    }
}
