//! Orbit sets, their homology classes and associated paths and regions, and
//! generator enumeration under the action filtration.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::{int, Rat, Vec2};
use crate::par::Exec;
use crate::partitions::elliptic_end_path;
use crate::profile::{Family, Geometry, LensExtension, Line, Profile, ProfileError};
use crate::region::{Edge, Path, Region, RegionError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Region(#[from] RegionError),
    #[error("homology classes differ: {0} vs {1}")]
    ClassMismatch(HomologyClass, HomologyClass),
    #[error("no family with index {0}")]
    UnknownFamily(usize),
    #[error("endpoint orbits only exist in lens-like geometries")]
    NoEndpoints,
    #[error("the class difference is not an integral combination of u0 and u1")]
    NonIntegral,
    #[error("s1s2 regions need an explicit d")]
    MissingD,
}

/// Admissible orbit set: per family `(m_e, m_h)`, plus the multiplicities of
/// the endpoint orbits `e₀, e₁` for lens-like geometries.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct OrbitSet {
    pub orbits: BTreeMap<usize, (u32, u32)>,
    pub ends: [u32; 2],
}

impl OrbitSet {
    pub fn empty() -> Self {
        OrbitSet::default()
    }

    pub fn with(mut self, family: usize, me: u32, mh: u32) -> Self {
        if me + mh > 0 {
            let slot = self.orbits.entry(family).or_insert((0, 0));
            slot.0 += me;
            slot.1 += mh;
        }
        self
    }

    pub fn with_end(mut self, i: usize, m: u32) -> Self {
        self.ends[i] += m;
        self
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty() && self.ends == [0, 0]
    }

    pub fn is_admissible(&self) -> bool {
        self.orbits.values().all(|&(_, h)| h <= 1)
    }

    /// Compact label such as `e0^2 h3 E1`.
    pub fn label(&self) -> String {
        let mut parts = Vec::new();
        let pow = |base: String, m: u32| if m == 1 { base } else { format!("{base}^{m}") };
        for (k, &(e, h)) in &self.orbits {
            if e > 0 {
                parts.push(pow(format!("e{k}"), e));
            }
            if h > 0 {
                parts.push(pow(format!("h{k}"), h));
            }
        }
        for (i, &m) in self.ends.iter().enumerate() {
            if m > 0 {
                parts.push(pow(format!("E{i}"), m));
            }
        }
        if parts.is_empty() {
            "∅".to_string()
        } else {
            parts.join(" ")
        }
    }
}

impl fmt::Display for OrbitSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Parses the [`OrbitSet::label`] format; `∅` and the empty string give the
/// empty set.
impl FromStr for OrbitSet {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut g = OrbitSet::empty();
        for tok in s.split_whitespace().filter(|t| *t != "∅") {
            let (head, m) = match tok.split_once('^') {
                Some((h, m)) => (h, m.parse::<u32>().map_err(|_| format!("bad multiplicity in {tok:?}"))?),
                None => (tok, 1),
            };
            let mut chars = head.chars();
            let kind = chars.next().ok_or_else(|| format!("empty orbit token {tok:?}"))?;
            let k: usize = chars.as_str().parse().map_err(|_| format!("bad index in {tok:?}"))?;
            g = match kind {
                'e' => g.with(k, m, 0),
                'h' => g.with(k, 0, m),
                'E' if k < 2 => g.with_end(k, m),
                _ => return Err(format!("unknown orbit {tok:?}")),
            };
        }
        Ok(g)
    }
}

/// First homology class of an orbit set.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum HomologyClass {
    /// Interval and circle geometries.
    Lattice(Vec2),
    /// Residue modulo `p` for lens spaces.
    Cyclic { r: i64, p: i64 },
    /// `S¹×S²`: the quotient by `u₀` is infinite cyclic.
    Integer(i64),
}

impl fmt::Display for HomologyClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HomologyClass::Lattice(v) => write!(f, "{},{}", v.x, v.y),
            HomologyClass::Cyclic { r, .. } => write!(f, "{r}"),
            HomologyClass::Integer(r) => write!(f, "{r}"),
        }
    }
}

/// A profile together with its derived family data.
#[derive(Clone, Debug)]
pub struct Context {
    pub profile: Profile,
    pub families: Vec<Family>,
    pub line: Line,
    pub ext: Option<LensExtension>,
}

impl Context {
    pub fn new(profile: Profile) -> Result<Self, ComplexError> {
        let families = profile.families();
        let line = profile.line()?;
        let ext = if profile.is_lens_like() { Some(profile.extension()?) } else { None };
        Ok(Context { profile, families, line, ext })
    }

    pub fn geometry(&self) -> Geometry {
        self.profile.geometry
    }

    /// Parses `"a,b"` or `"r"` as a class of this geometry.
    pub fn parse_class(&self, s: &str) -> Option<HomologyClass> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        match (self.geometry(), parts.as_slice()) {
            (Geometry::Interval | Geometry::Circle, [a, b]) => {
                Some(HomologyClass::Lattice(Vec2::new(a.parse().ok()?, b.parse().ok()?)))
            }
            (Geometry::Lens, [r]) => {
                let p = self.profile.lens?.order();
                Some(HomologyClass::Cyclic { r: r.parse::<i64>().ok()?.rem_euclid(p), p })
            }
            (Geometry::S1s2, [r]) => Some(HomologyClass::Integer(r.parse().ok()?)),
            _ => None,
        }
    }

    pub fn zero_class(&self) -> HomologyClass {
        self.reduce(Vec2::ZERO)
    }

    /// Reduces a lattice class into this geometry's first homology.
    pub fn reduce(&self, v: Vec2) -> HomologyClass {
        match (self.geometry(), &self.profile.lens) {
            (Geometry::Lens, Some(l)) => {
                let p = l.order();
                HomologyClass::Cyclic { r: l.u0.cross(v).rem_euclid(p), p }
            }
            (Geometry::S1s2, Some(l)) => HomologyClass::Integer(l.u0.cross(v)),
            _ => HomologyClass::Lattice(v),
        }
    }

    fn family(&self, k: usize) -> Result<&Family, ComplexError> {
        self.families.get(k).ok_or(ComplexError::UnknownFamily(k))
    }

    /// Lattice class `Σ m·v`, counting endpoint orbits as `mᵢvᵢ`.
    pub fn lattice_class(&self, g: &OrbitSet) -> Result<Vec2, ComplexError> {
        let mut s = Vec2::ZERO;
        for (&k, &(e, h)) in &g.orbits {
            s += ((e + h) as i64) * self.family(k)?.dir.v;
        }
        if g.ends != [0, 0] {
            let l = self.profile.lens.as_ref().ok_or(ComplexError::NoEndpoints)?;
            s += (g.ends[0] as i64) * l.v0 + (g.ends[1] as i64) * l.v1;
        }
        Ok(s)
    }

    pub fn class_of(&self, g: &OrbitSet) -> Result<HomologyClass, ComplexError> {
        Ok(self.reduce(self.lattice_class(g)?))
    }

    pub fn action(&self, g: &OrbitSet) -> Result<Rat, ComplexError> {
        let mut a = Rat::zero();
        for (&k, &(e, h)) in &g.orbits {
            a += int((e + h) as i64) * self.family(k)?.action;
        }
        if g.ends != [0, 0] {
            let l = self.profile.lens.as_ref().ok_or(ComplexError::NoEndpoints)?;
            a += int(g.ends[0] as i64) * l.action_e0 + int(g.ends[1] as i64) * l.action_e1;
        }
        Ok(a)
    }

    /// The a-compatible decorated path of an orbit set.
    pub fn associate_path(&self, g: &OrbitSet) -> Result<Path, ComplexError> {
        let mut path = Path::new();
        for (&k, &(e, h)) in &g.orbits {
            let f = self.family(k)?;
            path.add(f.x, Edge::new(f.dir.v, f.convex, e, h))?;
        }
        if g.ends != [0, 0] {
            let ext = self.ext.as_ref().ok_or(ComplexError::NoEndpoints)?;
            for i in 0..2 {
                let end = elliptic_end_path(i, g.ends[i] as i64, &self.profile, ext)?;
                for (x, e) in end.edges {
                    path.add(x, e)?;
                }
            }
        }
        Ok(path)
    }

    /// Recovers the orbit set of an interior path, if it sits on families.
    pub fn orbit_set_of_path(&self, path: &Path) -> Option<OrbitSet> {
        let mut g = OrbitSet::empty();
        for (x, e) in &path.edges {
            let k = self.families.iter().position(|f| f.x == *x)?;
            let f = &self.families[k];
            if f.dir.v != e.v || f.convex != e.c {
                return None;
            }
            g = g.with(k, e.me, e.mh);
        }
        Some(g)
    }

    /// The region `R_{α,β}`; lens-like geometries append the `uᵢ` edges at
    /// `x̃ᵢ`, with `d₀ = d` imposed for `S¹×S²`.
    pub fn associate_region(
        &self,
        alpha: &OrbitSet,
        beta: &OrbitSet,
        d: Option<i64>,
    ) -> Result<Associated, ComplexError> {
        let (ca, cb) = (self.class_of(alpha)?, self.class_of(beta)?);
        if ca != cb {
            return Err(ComplexError::ClassMismatch(ca, cb));
        }
        let mut p0 = self.associate_path(alpha)?;
        let mut p1 = self.associate_path(beta)?;
        let ds = match (&self.profile.lens, &self.ext) {
            (Some(l), Some(ext)) => {
                let diff = p1.class() - p0.class();
                let ds = match self.geometry() {
                    Geometry::S1s2 => {
                        let d0 = d.ok_or(ComplexError::MissingD)?;
                        let k = diff.multiple_of(l.u0).ok_or(ComplexError::NonIntegral)?;
                        let s = if l.u1 == l.u0 { 1 } else { -1 };
                        [d0, s * (k - d0)]
                    }
                    _ => {
                        let det = l.u0.cross(l.u1);
                        let (n0, n1) = (diff.cross(l.u1), l.u0.cross(diff));
                        if n0 % det != 0 || n1 % det != 0 {
                            return Err(ComplexError::NonIntegral);
                        }
                        [n0 / det, n1 / det]
                    }
                };
                for (i, &di) in ds.iter().enumerate() {
                    let (x, _) = ext.tilde[i];
                    let side = if di > 0 { &mut p0 } else { &mut p1 };
                    side.add(x, Edge::new(l.u(i), 1, di.unsigned_abs() as u32, 0))?;
                }
                Some(ds)
            }
            _ => None,
        };
        Ok(Associated { region: Region::new(p0, p1)?, d: ds })
    }

    /// Orbit sets with class `cls` and action `< bound`, in lexicographic
    /// order of `(family, m_e, m_h)` followed by the endpoint multiplicities.
    pub fn generators(&self, cls: HomologyClass, bound: Rat) -> Vec<OrbitSet> {
        self.generators_with(Exec::default(), cls, bound)
    }

    pub fn generators_with(&self, exec: Exec, cls: HomologyClass, bound: Rat) -> Vec<OrbitSet> {
        let slots = self.slots();
        if slots.is_empty() {
            let e = OrbitSet::empty();
            return if self.zero_class() == cls && bound > Rat::zero() { vec![e] } else { vec![] };
        }
        if let HomologyClass::Lattice(target) = cls {
            if slots.len() >= 2 {
                return self.lattice_generators(exec, &slots, target, bound);
            }
        }
        let first = slot_choices(&slots[0], bound);
        let chunks = exec.map(&first, |&(me, mh)| {
            let mut out = Vec::new();
            let used = int((me + mh) as i64) * slots[0].action;
            let mut acc = Vec::with_capacity(slots.len());
            acc.push((me, mh));
            self.dfs(&slots, 1, used, bound, &mut acc, &mut |choice| {
                let g = self.assemble(&slots, choice);
                if self.class_of(&g).ok() == Some(cls) {
                    out.push(g);
                }
            });
            out
        });
        chunks.into_iter().flatten().collect()
    }

    /// Lattice-class enumeration: the cheapest slot and the cheapest slot
    /// independent of it are moved last, and their multiplicities are solved
    /// from the remaining class instead of being searched. Output follows the
    /// same lexicographic order as a plain search over `slots`.
    fn lattice_generators(&self, exec: Exec, slots: &[Slot], target: Vec2, bound: Rat) -> Vec<OrbitSet> {
        let dir = |s: &Slot| match s.target {
            SlotTarget::Family(k) => self.families[k].dir.v,
            SlotTarget::End(_) => Vec2::ZERO,
        };
        let cheapest = |skip: &dyn Fn(usize) -> bool| {
            (0..slots.len()).filter(|&i| !skip(i)).min_by(|&a, &b| slots[a].action.cmp(&slots[b].action).then(b.cmp(&a)))
        };
        let last = cheapest(&|_| false).unwrap();
        let second = cheapest(&|i| i == last || dir(&slots[i]).cross(dir(&slots[last])) == 0);
        let tail: Vec<usize> = second.into_iter().chain([last]).collect();
        let order: Vec<usize> = (0..slots.len()).filter(|i| !tail.contains(i)).chain(tail.iter().copied()).collect();
        let arranged: Vec<Slot> = order.iter().map(|&i| slots[i]).collect();
        let head = arranged.len() - tail.len();
        let (da, db) = if let [a, b] = tail[..] {
            (dir(&slots[a]), dir(&slots[b]))
        } else {
            (dir(&slots[last]), Vec2::ZERO)
        };
        let solve = |r: Vec2| -> Option<Vec<u32>> {
            if tail.len() == 2 {
                let det = da.cross(db);
                let (x, y) = (r.cross(db), da.cross(r));
                (x % det == 0 && y % det == 0 && x / det >= 0 && y / det >= 0)
                    .then(|| vec![(x / det) as u32, (y / det) as u32])
            } else if da.is_zero() {
                r.is_zero().then(Vec::new)
            } else {
                let m = r.multiple_of(da)?;
                (m >= 0).then(|| vec![m as u32])
            }
        };
        let run = |prefix: &[(u32, u32)], used: Rat, out: &mut Vec<Vec<(u32, u32)>>| {
            let mut acc = prefix.to_vec();
            self.dfs(&arranged[..head], prefix.len(), used, bound, &mut acc, &mut |choice| {
                let sum = choice
                    .iter()
                    .zip(&arranged)
                    .fold(Vec2::ZERO, |v, (&(me, mh), s)| v + (me + mh) as i64 * dir(s));
                let Some(ms) = solve(target - sum) else { return };
                let used = choice
                    .iter()
                    .zip(&arranged)
                    .fold(Rat::zero(), |a, (&(me, mh), s)| a + int((me + mh) as i64) * s.action);
                let extra = ms.iter().zip(&arranged[head..]).fold(Rat::zero(), |a, (&m, s)| a + int(m as i64) * s.action);
                if used + extra >= bound {
                    return;
                }
                let splits = |m: u32| -> Vec<(u32, u32)> {
                    if m == 0 {
                        vec![(0, 0)]
                    } else {
                        vec![(m, 0), (m - 1, 1)]
                    }
                };
                let mut full = choice.to_vec();
                for a in splits(ms[0]) {
                    full.truncate(head);
                    full.push(a);
                    if ms.len() == 2 {
                        for b in splits(ms[1]) {
                            full.truncate(head + 1);
                            full.push(b);
                            out.push(full.clone());
                        }
                    } else {
                        out.push(full.clone());
                    }
                }
            });
        };
        let mut found: Vec<Vec<(u32, u32)>> = if head == 0 {
            let mut out = Vec::new();
            run(&[], Rat::zero(), &mut out);
            out
        } else {
            let first = slot_choices(&arranged[0], bound);
            exec.map(&first, |&c| {
                let mut out = Vec::new();
                run(&[c], int((c.0 + c.1) as i64) * arranged[0].action, &mut out);
                out
            })
            .into_iter()
            .flatten()
            .collect()
        };
        // Back to the original slot order, then lexicographic as in `dfs`.
        let mut natural: Vec<Vec<(u32, u32)>> = found
            .drain(..)
            .map(|c| {
                let mut v = vec![(0, 0); slots.len()];
                for (pos, &i) in order.iter().enumerate() {
                    v[i] = c[pos];
                }
                v
            })
            .collect();
        natural.sort();
        natural.iter().map(|c| self.assemble(slots, c)).collect()
    }

    /// Every orbit set with action `< bound`, grouped by class.
    pub fn generators_by_class(&self, bound: Rat) -> BTreeMap<HomologyClass, Vec<OrbitSet>> {
        let slots = self.slots();
        let mut out: BTreeMap<HomologyClass, Vec<OrbitSet>> = BTreeMap::new();
        let mut acc = Vec::with_capacity(slots.len());
        self.dfs(&slots, 0, Rat::zero(), bound, &mut acc, &mut |choice| {
            let g = self.assemble(&slots, choice);
            if let Ok(c) = self.class_of(&g) {
                out.entry(c).or_default().push(g);
            }
        });
        out
    }

    fn slots(&self) -> Vec<Slot> {
        let mut s: Vec<Slot> = self
            .families
            .iter()
            .enumerate()
            .map(|(k, f)| Slot { target: SlotTarget::Family(k), action: f.action })
            .collect();
        if let Some(l) = &self.profile.lens {
            s.push(Slot { target: SlotTarget::End(0), action: l.action_e0 });
            s.push(Slot { target: SlotTarget::End(1), action: l.action_e1 });
        }
        s
    }

    fn dfs(
        &self,
        slots: &[Slot],
        idx: usize,
        used: Rat,
        bound: Rat,
        acc: &mut Vec<(u32, u32)>,
        emit: &mut Emit<'_>,
    ) {
        if idx == slots.len() {
            emit(acc);
            return;
        }
        for (me, mh) in slot_choices(&slots[idx], bound - used) {
            acc.push((me, mh));
            let add = int((me + mh) as i64) * slots[idx].action;
            self.dfs(slots, idx + 1, used + add, bound, acc, emit);
            acc.pop();
        }
    }

    fn assemble(&self, slots: &[Slot], choice: &[(u32, u32)]) -> OrbitSet {
        let mut g = OrbitSet::empty();
        for (s, &(me, mh)) in slots.iter().zip(choice) {
            match s.target {
                SlotTarget::Family(k) => g = g.with(k, me, mh),
                SlotTarget::End(i) => g.ends[i] = me,
            }
        }
        g
    }
}

/// Callback receiving one admissible multiplicity vector.
type Emit<'a> = dyn FnMut(&[(u32, u32)]) + 'a;

#[derive(Clone, Copy, Debug)]
enum SlotTarget {
    Family(usize),
    End(usize),
}

#[derive(Clone, Copy, Debug)]
struct Slot {
    target: SlotTarget,
    action: Rat,
}

/// `(m_e, m_h)` choices at one slot whose added action stays `< budget`.
fn slot_choices(s: &Slot, budget: Rat) -> Vec<(u32, u32)> {
    let mut out = vec![(0, 0)];
    if budget <= Rat::zero() {
        return out;
    }
    let max_h = match s.target {
        SlotTarget::Family(_) => 1,
        SlotTarget::End(_) => 0,
    };
    let mut m = 1u32;
    while int(m as i64) * s.action < budget {
        for h in 0..=max_h.min(m) {
            out.push((m - h, h));
        }
        m += 1;
    }
    out.sort();
    out
}

/// A region associated with a pair of orbit sets.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Associated {
    pub region: Region,
    /// `(d₀, d₁)` for lens-like geometries.
    pub d: Option<[i64; 2]>,
}

