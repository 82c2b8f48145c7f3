//! Orbital moment-map profiles: node lists with lifted directions,
//! validation, a-compatibility, a-positivity, reflection and the lens
//! extension over `[x̃₀, x̃₁]`.

use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{floor, fmt_rat, int, parse_rat, rat, LiftedDir, Rat, Vec2};
use crate::region::{Region, Site};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Interval,
    Circle,
    Lens,
    S1s2,
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Geometry::Interval => "interval",
            Geometry::Circle => "circle",
            Geometry::Lens => "lens",
            Geometry::S1s2 => "s1s2",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Turn {
    Max,
    Min,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Family { convex: i8, action: Rat },
    Turning(Turn),
}

impl NodeKind {
    /// Sign of the angular change entering the node.
    pub fn enter(&self) -> i8 {
        match self {
            NodeKind::Family { convex, .. } => *convex,
            NodeKind::Turning(Turn::Max) => 1,
            NodeKind::Turning(Turn::Min) => -1,
        }
    }

    /// Sign of the angular change leaving the node.
    pub fn leave(&self) -> i8 {
        match self {
            NodeKind::Family { convex, .. } => *convex,
            NodeKind::Turning(Turn::Max) => -1,
            NodeKind::Turning(Turn::Min) => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub x: Rat,
    pub dir: LiftedDir,
    pub kind: NodeKind,
}

/// Node data before lifting the directions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RawNode {
    pub x: Rat,
    pub v: Vec2,
    pub kind: NodeKind,
}

impl RawNode {
    pub fn family(x: Rat, v: Vec2, convex: i8, action: Rat) -> Self {
        RawNode { x, v, kind: NodeKind::Family { convex, action } }
    }

    pub fn turning(x: Rat, v: Vec2, t: Turn) -> Self {
        RawNode { x, v, kind: NodeKind::Turning(t) }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LensData {
    pub u0: Vec2,
    pub v0: Vec2,
    pub u1: Vec2,
    pub v1: Vec2,
    pub phi0: Rat,
    pub phi1: Rat,
    pub action_e0: Rat,
    pub action_e1: Rat,
}

impl LensData {
    pub fn u(&self, i: usize) -> Vec2 {
        [self.u0, self.u1][i]
    }
    pub fn v(&self, i: usize) -> Vec2 {
        [self.v0, self.v1][i]
    }
    pub fn phi(&self, i: usize) -> Rat {
        [self.phi0, self.phi1][i]
    }
    pub fn action_e(&self, i: usize) -> Rat {
        [self.action_e0, self.action_e1][i]
    }

    /// Primitive direction of `vᵢ − φᵢuᵢ`.
    pub fn end_dir(&self, i: usize) -> Vec2 {
        let (p, q) = (*self.phi(i).numer(), *self.phi(i).denom());
        (q * self.v(i) - p * self.u(i)).primitive()
    }

    /// `|det(u₀|u₁)|`.
    pub fn order(&self) -> i64 {
        self.u0.cross(self.u1).abs()
    }
}

/// An orbit family as seen by the complex builder.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Family {
    pub x: Rat,
    pub dir: LiftedDir,
    pub convex: i8,
    pub action: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub geometry: Geometry,
    /// `n_a` for circles (negative for reflected circles); 0 otherwise.
    pub winding: i64,
    pub bound: Rat,
    pub nodes: Vec<Node>,
    pub lens: Option<LensData>,
    /// Set on reflected data, whose differential raises action.
    pub dual: bool,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ProfileError {
    #[error("malformed profile document: {0}")]
    Malformed(String),
    #[error("operation unsupported for {0} geometry")]
    Unsupported(Geometry),
    #[error("invalid profile: {0}")]
    Invalid(String),
}

fn compute_lifts(raw: &[RawNode]) -> Vec<LiftedDir> {
    let mut out: Vec<LiftedDir> = Vec::with_capacity(raw.len());
    for (k, n) in raw.iter().enumerate() {
        let d = match out.last() {
            None => LiftedDir::new(n.v, 0),
            Some(prev) => {
                if raw[k - 1].kind.leave() > 0 {
                    prev.next_above(n.v)
                } else {
                    prev.next_below(n.v)
                }
            }
        };
        out.push(d);
    }
    out
}

impl Profile {
    fn assemble(geometry: Geometry, bound: Rat, mut raw: Vec<RawNode>, lens: Option<LensData>) -> Profile {
        raw.sort_by_key(|a| a.x);
        let lifts = compute_lifts(&raw);
        let nodes: Vec<Node> = raw
            .iter()
            .zip(lifts)
            .map(|(r, dir)| Node { x: r.x, dir, kind: r.kind })
            .collect();
        Profile { geometry, winding: 0, bound, nodes, lens, dual: false }
    }

    pub fn interval(bound: Rat, raw: Vec<RawNode>) -> Profile {
        Self::assemble(Geometry::Interval, bound, raw, None)
    }

    /// A circle profile; the winding is read off from the lifts.
    pub fn circle(bound: Rat, raw: Vec<RawNode>) -> Profile {
        let mut p = Self::assemble(Geometry::Circle, bound, raw, None);
        p.winding = p.closing_lift().map_or(0, |d| d.w - p.nodes[0].dir.w);
        p
    }

    pub fn lens(bound: Rat, raw: Vec<RawNode>, data: LensData) -> Profile {
        let g = if data.u0.cross(data.u1) == 0 { Geometry::S1s2 } else { Geometry::Lens };
        Self::assemble(g, bound, raw, Some(data))
    }

    /// For circles, the lift of the first node reached after the last one.
    pub fn closing_lift(&self) -> Option<LiftedDir> {
        let first = self.nodes.first()?;
        let last = self.nodes.last()?;
        Some(if last.kind.leave() > 0 {
            last.dir.next_above(first.dir.v)
        } else {
            last.dir.next_below(first.dir.v)
        })
    }

    pub fn families(&self) -> Vec<Family> {
        self.nodes
            .iter()
            .filter_map(|n| match n.kind {
                NodeKind::Family { convex, action } => Some(Family { x: n.x, dir: n.dir, convex, action }),
                NodeKind::Turning(_) => None,
            })
            .collect()
    }

    pub fn is_lens_like(&self) -> bool {
        matches!(self.geometry, Geometry::Lens | Geometry::S1s2)
    }

    /// Smallest orbit action in the profile, if any orbit exists.
    pub fn min_action(&self) -> Option<Rat> {
        let mut acts: Vec<Rat> = self.families().iter().map(|f| f.action).collect();
        if let Some(l) = &self.lens {
            acts.push(l.action_e0);
            acts.push(l.action_e1);
        }
        acts.into_iter().filter(|a| *a > Rat::zero()).min()
    }

    /// `N = ⌈L / min action⌉` (1 if there are no orbits).
    pub fn cutoff(&self) -> i64 {
        match self.min_action() {
            Some(a) => (self.bound / a).ceil().to_integer().max(1),
            None => 1,
        }
    }

    /// Structural diagnostics; empty iff the profile is valid.
    pub fn validate(&self) -> Vec<String> {
        let mut d = Vec::new();
        if self.bound <= Rat::zero() {
            d.push("L: action bound must be positive".to_string());
        }
        for (k, w) in self.nodes.windows(2).enumerate() {
            if w[0].x >= w[1].x {
                d.push(format!("node {}: positions must be strictly increasing", k + 1));
            }
        }
        let (lo, hi, hi_open) = match self.geometry {
            Geometry::Interval => (Rat::zero(), Rat::one(), false),
            _ => (Rat::zero(), Rat::one(), true),
        };
        for (k, n) in self.nodes.iter().enumerate() {
            let lo_bad = if self.is_lens_like() { n.x <= lo } else { n.x < lo };
            if lo_bad || n.x > hi || (hi_open && n.x == hi) {
                d.push(format!("node {k}: position {} outside the parameter domain", fmt_rat(&n.x)));
            }
            if !n.dir.v.is_primitive() {
                d.push(format!("node {k}: direction {} is not primitive", n.dir.v));
            }
            if let NodeKind::Family { convex, action } = n.kind {
                if convex != 1 && convex != -1 {
                    d.push(format!("node {k}: convexity must be ±1"));
                }
                if action <= Rat::zero() {
                    d.push(format!("node {k}: action must be positive"));
                }
            }
        }
        for k in 1..self.nodes.len() {
            let (a, b) = (&self.nodes[k - 1], &self.nodes[k]);
            if a.kind.leave() != b.kind.enter() {
                d.push(format!("node {k}: monotone run entering the node has the wrong sense"));
            }
            let ok = if a.kind.leave() > 0 { b.dir > a.dir } else { b.dir < a.dir };
            if !ok {
                d.push(format!("node {k}: lifted angle is not strictly monotone from node {}", k - 1));
            }
        }
        match self.geometry {
            Geometry::Circle => self.validate_circle(&mut d),
            Geometry::Lens | Geometry::S1s2 => self.validate_lens(&mut d),
            Geometry::Interval => {}
        }
        d
    }

    fn validate_circle(&self, d: &mut Vec<String>) {
        if self.nodes.is_empty() {
            d.push("circle: at least one node required".into());
            return;
        }
        let first = &self.nodes[0];
        let last = &self.nodes[self.nodes.len() - 1];
        if last.kind.leave() != first.kind.enter() {
            d.push("node 0: run wrapping around the circle has the wrong sense".into());
        }
        let sign = if self.dual { -1 } else { 1 };
        if sign * self.winding < 1 {
            d.push("circle: winding ≥ 1 required".into());
        }
        let closing = first.dir.turn(self.winding);
        let ok = if last.kind.leave() > 0 { closing > last.dir } else { closing < last.dir };
        if !ok {
            d.push("circle: final lifted angle does not close up with the declared winding".into());
        }
    }

    fn validate_lens(&self, d: &mut Vec<String>) {
        let Some(l) = &self.lens else {
            d.push("lens: lens data missing".into());
            return;
        };
        for (name, u) in [("u0", l.u0), ("u1", l.u1)] {
            if !u.is_primitive() {
                d.push(format!("lens: {name} must be primitive"));
            }
        }
        if l.u0.cross(l.v0) != 1 {
            d.push("lens: det(u0|v0) = 1 required".into());
        }
        if l.u1.cross(l.v1) != -1 {
            d.push("lens: det(u1|v1) = −1 required".into());
        }
        let p = l.u0.cross(l.u1);
        match self.geometry {
            Geometry::Lens if p == 0 => d.push("lens: u0 and u1 must be independent".into()),
            Geometry::S1s2 if l.u0 != l.u1 && l.u0 != -l.u1 => d.push("s1s2: u0 = ±u1 required".into()),
            _ => {}
        }
        if l.action_e0 <= Rat::zero() || l.action_e1 <= Rat::zero() {
            d.push("lens: e-actions must be positive".into());
        }
        let n = self.cutoff();
        for (i, phi) in [(0, l.phi0), (1, l.phi1)] {
            for m in 1..n {
                if (phi * int(m)).is_integer() {
                    d.push(format!("lens: mφ ∉ Z violated for φ{i} at m = {m}"));
                    break;
                }
            }
        }
        if d.is_empty() {
            if let Err(e) = self.extension() {
                d.push(format!("lens: {e}"));
            }
        }
    }
}

/// Node of the ambient line used for compatibility and positivity checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LineNode {
    pub x: Rat,
    pub dir: LiftedDir,
    /// Convexity of the family sitting here, `None` for markers.
    pub family: Option<i8>,
}

/// The a'-direction data along a line of positions, possibly periodic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Line {
    pub nodes: Vec<LineNode>,
    /// Winding per unit period for circle lines.
    pub period: Option<i64>,
}

impl Line {
    /// Nodes with lifted position in `[lo, hi]`.
    pub fn nodes_between(&self, lo: Rat, hi: Rat) -> Vec<LineNode> {
        match self.period {
            None => self.nodes.iter().filter(|n| n.x >= lo && n.x <= hi).copied().collect(),
            Some(w) => {
                let mut out = Vec::new();
                for k in (floor(&lo) - 1)..=(floor(&hi) + 1) {
                    for n in &self.nodes {
                        let x = n.x + int(k);
                        if x >= lo && x <= hi {
                            out.push(LineNode { x, dir: n.dir.turn(k * w), family: n.family });
                        }
                    }
                }
                out.sort_by_key(|a| a.x);
                out
            }
        }
    }

    /// Direction and convexity of the family at `x`, if there is one.
    pub fn family_at(&self, x: Rat) -> Option<(LiftedDir, i8)> {
        let (x0, k) = match self.period {
            None => (x, 0),
            Some(_) => {
                let k = floor(&x);
                (x - int(k), k)
            }
        };
        let w = self.period.unwrap_or(0);
        self.nodes
            .iter()
            .find(|n| n.x == x0)
            .and_then(|n| n.family.map(|c| (n.dir.turn(k * w), c)))
    }

    /// Every edge of `region` sits on a matching family.
    pub fn compatible(&self, region: &Region) -> bool {
        [&region.p0, &region.p1].iter().all(|p| {
            p.edges
                .iter()
                .all(|(x, e)| matches!(self.family_at(*x), Some((d, c)) if d.v == e.v && c == e.c))
        })
    }

    /// Whether every node in `[lo, hi]` fits in the half-turn window of `s`.
    /// Families at the two ends may touch the window boundary; everything in
    /// between must lie strictly inside.
    pub fn arc_fits(&self, lo: Rat, hi: Rat, s: Vec2) -> bool {
        let nodes = self.nodes_between(lo, hi);
        let Some(max) = nodes.iter().map(|n| n.dir).max() else {
            return true;
        };
        let top = max.ceil_lift(s.primitive());
        let bottom = top.minus_half_turn();
        nodes.iter().all(|n| {
            let end = (n.x == lo || n.x == hi) && n.family.is_some();
            if end {
                n.dir >= bottom
            } else {
                n.dir > bottom && n.dir < top
            }
        })
    }

    /// a-positivity of an interval-type region on this line.
    pub fn positive(&self, region: &Region) -> bool {
        if !self.compatible(region) {
            return false;
        }
        let sites = region.sites(Vec2::ZERO);
        sites
            .windows(2)
            .all(|w| w[0].right.is_zero() || self.arc_fits(w[0].x, w[1].x, w[0].right))
    }

    /// a-positivity of an offset region on a periodic line.
    pub fn positive_offset(&self, region: &Region, sigma0: Vec2) -> bool {
        if !self.compatible(region) {
            return false;
        }
        let sites: Vec<Site> = region.sites(sigma0);
        if sites.is_empty() {
            return sigma0.is_zero();
        }
        let inner = sites
            .windows(2)
            .all(|w| w[0].right.is_zero() || self.arc_fits(w[0].x, w[1].x, w[0].right));
        let last = sites[sites.len() - 1];
        let wrap = last.right.is_zero() || self.arc_fits(last.x, sites[0].x + Rat::one(), last.right);
        inner && wrap
    }
}

/// Which family of the extended lens line a node represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ExtFamily {
    /// Interior family by index.
    Interior(usize),
    /// `k`-th family on `Vᵢ`.
    End(usize, usize),
    /// The `uᵢ` family at `x̃ᵢ`.
    Tilde(usize),
}

/// The extension of a lens profile over `[x̃₀, x̃₁] = [−1, 2]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LensExtension {
    /// Families on `V₀` and `V₁` as `(x, lifted direction)`, in position order.
    pub v_families: [Vec<(Rat, LiftedDir)>; 2],
    pub tilde: [(Rat, LiftedDir); 2],
    pub end_markers: [(Rat, LiftedDir); 2],
    pub interior: Vec<Family>,
    pub line: Line,
}

impl LensExtension {
    /// Position of the `Vᵢ` family with primitive direction `dir`.
    pub fn v_family_at(&self, i: usize, dir: Vec2) -> Option<Rat> {
        self.v_families[i].iter().find(|(_, d)| d.v == dir).map(|(x, _)| *x)
    }

    /// Everything in the window, as `(family, x, lifted direction)`.
    pub fn all_families(&self) -> Vec<(ExtFamily, Rat, LiftedDir)> {
        let mut out = vec![(ExtFamily::Tilde(0), self.tilde[0].0, self.tilde[0].1)];
        for (k, (x, d)) in self.v_families[0].iter().enumerate() {
            out.push((ExtFamily::End(0, k), *x, *d));
        }
        for (k, f) in self.interior.iter().enumerate() {
            out.push((ExtFamily::Interior(k), f.x, f.dir));
        }
        for (k, (x, d)) in self.v_families[1].iter().enumerate() {
            out.push((ExtFamily::End(1, k), *x, *d));
        }
        out.push((ExtFamily::Tilde(1), self.tilde[1].0, self.tilde[1].1));
        out
    }
}

/// Directions `prim(w_{i,n})`, `1 ≤ n < N`, deduplicated, in sweep order.
pub fn end_directions(l: &LensData, i: usize, cutoff: i64) -> Vec<Vec2> {
    let (u, v, phi) = (l.u(i), l.v(i), l.phi(i));
    let mut out: Vec<(Rat, Vec2)> = Vec::new();
    for n in 1..cutoff {
        let f = floor(&(phi * int(n)));
        let w = (n * v - f * u).primitive();
        let slope = rat(f, n);
        if !out.iter().any(|(_, d)| *d == w) {
            out.push((slope, w));
        }
    }
    // On V₀ the angle grows with ⌊nφ⌋/n; on V₁ it shrinks.
    out.sort_by(|a, b| if i == 0 { a.0.cmp(&b.0) } else { b.0.cmp(&a.0) });
    out.into_iter().map(|(_, d)| d).collect()
}

impl Profile {
    /// Builds the extended family list for lens-like geometries.
    pub fn extension(&self) -> Result<LensExtension, ProfileError> {
        let l = self.lens.as_ref().ok_or(ProfileError::Unsupported(self.geometry))?;
        let n = self.cutoff();
        let interior = self.families();
        let e0 = l.end_dir(0);
        let e1 = l.end_dir(1);
        let end0 = match self.nodes.first() {
            Some(f) if f.kind.enter() > 0 => f.dir.next_below(e0),
            Some(f) => f.dir.next_above(e0),
            None => LiftedDir::new(e0, 0),
        };
        let end1 = match self.nodes.last() {
            Some(f) if f.kind.leave() > 0 => f.dir.next_above(e1),
            Some(f) => f.dir.next_below(e1),
            None if e1 == e0 => end0,
            None => end0.next_above(e1),
        };
        let mut nodes = Vec::new();
        let u0 = end0.next_below(l.u0);
        nodes.push(LineNode { x: int(-1), dir: u0, family: Some(1) });
        let d0 = end_directions(l, 0, n);
        let k0 = d0.len() as i64;
        let mut v0 = Vec::new();
        let mut prev = u0;
        for (j, d) in d0.iter().enumerate() {
            let x = int(-1) + rat(j as i64 + 1, k0 + 1);
            let dir = prev.next_above(*d);
            if dir >= end0 {
                return Err(ProfileError::Invalid("V₀ family direction beyond the boundary direction".into()));
            }
            prev = dir;
            v0.push((x, dir));
            nodes.push(LineNode { x, dir, family: Some(1) });
        }
        nodes.push(LineNode { x: int(0), dir: end0, family: None });
        for f in &self.nodes {
            let family = match f.kind {
                NodeKind::Family { convex, .. } => Some(convex),
                NodeKind::Turning(_) => None,
            };
            nodes.push(LineNode { x: f.x, dir: f.dir, family });
        }
        nodes.push(LineNode { x: int(1), dir: end1, family: None });
        let d1 = end_directions(l, 1, n);
        let k1 = d1.len() as i64;
        let mut v1 = Vec::new();
        let mut prev = end1;
        for (j, d) in d1.iter().enumerate() {
            let x = int(1) + rat(j as i64 + 1, k1 + 1);
            let dir = prev.next_above(*d);
            prev = dir;
            v1.push((x, dir));
            nodes.push(LineNode { x, dir, family: Some(1) });
        }
        let u1 = prev.next_above(l.u1);
        if u1.minus_half_turn() >= end1 {
            return Err(ProfileError::Invalid("V₁ sweep exceeds a half turn".into()));
        }
        nodes.push(LineNode { x: int(2), dir: u1, family: Some(1) });
        Ok(LensExtension {
            v_families: [v0, v1],
            tilde: [(int(-1), u0), (int(2), u1)],
            end_markers: [(int(0), end0), (int(1), end1)],
            interior,
            line: Line { nodes, period: None },
        })
    }

    /// The ambient line: profile nodes, periodic for circles, extended for
    /// lens-like geometries.
    pub fn line(&self) -> Result<Line, ProfileError> {
        let plain = |period| Line {
            nodes: self
                .nodes
                .iter()
                .map(|n| LineNode {
                    x: n.x,
                    dir: n.dir,
                    family: match n.kind {
                        NodeKind::Family { convex, .. } => Some(convex),
                        NodeKind::Turning(_) => None,
                    },
                })
                .collect(),
            period,
        };
        match self.geometry {
            Geometry::Interval => Ok(plain(None)),
            Geometry::Circle => Ok(plain(Some(self.winding))),
            Geometry::Lens | Geometry::S1s2 => Ok(self.extension()?.line),
        }
    }

    /// Diagonal reflection of all directions with convexities flipped; the
    /// family at each position corresponds to itself.
    pub fn reflect(&self) -> Result<Profile, ProfileError> {
        if self.is_lens_like() {
            return Err(ProfileError::Unsupported(self.geometry));
        }
        let nodes = self
            .nodes
            .iter()
            .map(|n| Node {
                x: n.x,
                dir: n.dir.swap(),
                kind: match n.kind {
                    NodeKind::Family { convex, action } => NodeKind::Family { convex: -convex, action },
                    NodeKind::Turning(Turn::Max) => NodeKind::Turning(Turn::Min),
                    NodeKind::Turning(Turn::Min) => NodeKind::Turning(Turn::Max),
                },
            })
            .collect();
        Ok(Profile {
            geometry: self.geometry,
            winding: -self.winding,
            bound: self.bound,
            nodes,
            lens: None,
            dual: !self.dual,
        })
    }
}

// ---------------------------------------------------------------------------
// document format

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum ConvexDoc {
    Flag(bool),
    Sign(i8),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct NodeDoc {
    kind: String,
    x: String,
    v: [i64; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    convex: Option<ConvexDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    action: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    turn: Option<Turn>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct LensDoc {
    u0: [i64; 2],
    v0: [i64; 2],
    u1: [i64; 2],
    v1: [i64; 2],
    phi0: String,
    phi1: String,
    action_e0: String,
    action_e1: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct ProfileDoc {
    geometry: Geometry,
    #[serde(default)]
    winding: i64,
    #[serde(rename = "L")]
    bound: String,
    nodes: Vec<NodeDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lens: Option<LensDoc>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    dual: bool,
}

fn field_rat(s: &str, what: &str) -> Result<Rat, ProfileError> {
    parse_rat(s).ok_or_else(|| ProfileError::Malformed(format!("{what}: cannot parse rational {s:?}")))
}

fn v2(a: [i64; 2]) -> Vec2 {
    Vec2::new(a[0], a[1])
}

/// Turn type of an unannotated marker: a max follows an increasing run and
/// precedes a decreasing one.
fn infer_turn(raw: &[RawNode], k: usize) -> Option<Turn> {
    let pick = |s: i8| if s > 0 { Turn::Max } else { Turn::Min };
    if k > 0 {
        return Some(pick(raw[k - 1].kind.leave()));
    }
    raw.get(k + 1).map(|n| pick(-n.kind.enter()))
}

impl Profile {
    /// Parses the JSON profile document.
    pub fn from_json(text: &str) -> Result<Profile, ProfileError> {
        let doc: ProfileDoc = serde_json::from_str(text).map_err(|e| {
            ProfileError::Malformed(format!("line {}, column {}: {e}", e.line(), e.column()))
        })?;
        let bound = field_rat(&doc.bound, "L")?;
        let mut raw = Vec::new();
        for (k, n) in doc.nodes.iter().enumerate() {
            let x = field_rat(&n.x, &format!("nodes[{k}].x"))?;
            let v = v2(n.v);
            let kind = match n.kind.as_str() {
                "family" => {
                    let convex = match &n.convex {
                        Some(ConvexDoc::Flag(b)) => {
                            if *b {
                                1
                            } else {
                                -1
                            }
                        }
                        Some(ConvexDoc::Sign(s)) => *s,
                        None => return Err(ProfileError::Malformed(format!("nodes[{k}].convex missing"))),
                    };
                    let a = n
                        .action
                        .as_deref()
                        .ok_or_else(|| ProfileError::Malformed(format!("nodes[{k}].action missing")))?;
                    NodeKind::Family { convex, action: field_rat(a, &format!("nodes[{k}].action"))? }
                }
                "turning" => NodeKind::Turning(n.turn.unwrap_or(Turn::Max)),
                other => return Err(ProfileError::Malformed(format!("nodes[{k}].kind: unknown kind {other:?}"))),
            };
            raw.push(RawNode { x, v, kind });
        }
        for k in 0..raw.len() {
            if matches!(raw[k].kind, NodeKind::Turning(_)) && doc.nodes[k].turn.is_none() {
                let t = infer_turn(&raw, k)
                    .ok_or_else(|| ProfileError::Malformed(format!("nodes[{k}].turn missing and no neighbour to infer it")))?;
                raw[k].kind = NodeKind::Turning(t);
            }
        }
        let mut p = match doc.geometry {
            Geometry::Interval => Profile::interval(bound, raw),
            Geometry::Circle => {
                let mut p = Profile::assemble(Geometry::Circle, bound, raw, None);
                p.winding = doc.winding;
                p
            }
            Geometry::Lens | Geometry::S1s2 => {
                let l = doc.lens.as_ref().ok_or_else(|| ProfileError::Malformed("lens: field missing".into()))?;
                let data = LensData {
                    u0: v2(l.u0),
                    v0: v2(l.v0),
                    u1: v2(l.u1),
                    v1: v2(l.v1),
                    phi0: field_rat(&l.phi0, "lens.phi0")?,
                    phi1: field_rat(&l.phi1, "lens.phi1")?,
                    action_e0: field_rat(&l.action_e0, "lens.actionE0")?,
                    action_e1: field_rat(&l.action_e1, "lens.actionE1")?,
                };
                let mut p = Profile::assemble(doc.geometry, bound, raw, Some(data));
                p.geometry = doc.geometry;
                p
            }
        };
        p.dual = doc.dual;
        Ok(p)
    }

    /// Serializes to the JSON profile document.
    pub fn to_json(&self) -> String {
        let nodes = self
            .nodes
            .iter()
            .map(|n| match n.kind {
                NodeKind::Family { convex, action } => NodeDoc {
                    kind: "family".into(),
                    x: fmt_rat(&n.x),
                    v: [n.dir.v.x, n.dir.v.y],
                    convex: Some(ConvexDoc::Flag(convex > 0)),
                    action: Some(fmt_rat(&action)),
                    turn: None,
                },
                NodeKind::Turning(t) => NodeDoc {
                    kind: "turning".into(),
                    x: fmt_rat(&n.x),
                    v: [n.dir.v.x, n.dir.v.y],
                    convex: None,
                    action: None,
                    turn: Some(t),
                },
            })
            .collect();
        let pair = |v: Vec2| [v.x, v.y];
        let doc = ProfileDoc {
            geometry: self.geometry,
            winding: self.winding,
            bound: fmt_rat(&self.bound),
            nodes,
            lens: self.lens.map(|l| LensDoc {
                u0: pair(l.u0),
                v0: pair(l.v0),
                u1: pair(l.u1),
                v1: pair(l.v1),
                phi0: fmt_rat(&l.phi0),
                phi1: fmt_rat(&l.phi1),
                action_e0: fmt_rat(&l.action_e0),
                action_e1: fmt_rat(&l.action_e1),
            }),
            dual: self.dual,
        };
        serde_json::to_string_pretty(&doc).expect("serializable")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lifts_follow_monotone_runs() {
        let p = Profile::interval(
            int(3),
            vec![
                RawNode::family(rat(1, 4), Vec2::new(1, 0), 1, int(1)),
                RawNode::turning(rat(1, 2), Vec2::new(0, 1), Turn::Max),
                RawNode::family(rat(3, 4), Vec2::new(1, -1), -1, int(1)),
            ],
        );
        assert_eq!(p.nodes[2].dir, LiftedDir::new(Vec2::new(1, -1), -1));
        assert!(p.validate().is_empty(), "{:?}", p.validate());
    }

    #[test]
    fn end_direction_order() {
        let l = LensData {
            u0: Vec2::new(0, -1),
            v0: Vec2::new(1, 0),
            u1: Vec2::new(-1, 0),
            v1: Vec2::new(0, 1),
            phi0: rat(8, 5),
            phi1: rat(1, 3),
            action_e0: int(1),
            action_e1: int(1),
        };
        // w₀₁ = v₀ − u₀, w₀₂ = 2v₀ − 3u₀
        assert_eq!(end_directions(&l, 0, 3), vec![Vec2::new(1, 1), Vec2::new(2, 3)]);
        assert_eq!(end_directions(&l, 0, 1), Vec::<Vec2>::new());
    }
}
