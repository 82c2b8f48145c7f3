//! The map `Φ` from the class-zero lens complex into the class-zero `T³`
//! complex of a companion circle profile, and its verification as a chain
//! map.
//!
//! The companion circle carries the extended lens line in the window
//! `[1/8, 7/8]` through `t = (y + 1)/4 + 1/8`, followed by a return arc from
//! `u₁` back to `u₀` that carries no families below the bound.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::complex::{ComplexError, Context, HomologyClass, OrbitSet};
use crate::lattice::{fmt_rat, int, rat, LiftedDir, Rat, Vec2};
use crate::par::Exec;
use crate::profile::{ExtFamily, Geometry, Line, NodeKind, Profile, ProfileError, RawNode, Turn};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainMapError {
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("companion needs a lens profile with p ≠ 0, got {0}")]
    NotLens(Geometry),
    #[error("sign condition fails: {0}")]
    Sign(String),
    #[error("orbit set {0} is not in class 0")]
    NonzeroClass(String),
    #[error("region of {0} with ∅ is not of the form (P, 0)")]
    NotPositivePath(String),
}

/// A return arc: turning markers visited between `u₁` and the next copy of
/// `u₀`, in order. An empty list is the monotone arc.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReturnArc {
    pub markers: Vec<(Vec2, Turn)>,
}

#[derive(Clone, Debug)]
pub struct CompanionPair {
    pub lens: Profile,
    pub circle: Profile,
    /// Circle family index for each extended-line family.
    pub embedding: BTreeMap<ExtFamily, usize>,
    pub arc: ReturnArc,
    /// Action given to the two `uᵢ` families at `x̃ᵢ`.
    pub delta: Rat,
}

/// Circle position of an extended-line position.
pub fn embed(y: Rat) -> Rat {
    (y + Rat::one()) / 4 + rat(1, 8)
}

/// Builds the companion circle profile of a lens profile.
pub fn build_companion(lens: &Profile, arc: &ReturnArc) -> Result<CompanionPair, ChainMapError> {
    if lens.geometry != Geometry::Lens {
        return Err(ChainMapError::NotLens(lens.geometry));
    }
    let l = lens.lens.expect("lens data");
    let ext = lens.extension()?;
    let n = lens.cutoff();
    let min = lens.min_action().unwrap_or_else(Rat::one);
    let delta = min / (97 * (n + 1));

    let mut raw: Vec<(Rat, RawNode, Option<ExtFamily>)> = Vec::new();
    let fam_node = |x: Rat, v: Vec2, c: i8, a: Rat| RawNode::family(x, v, c, a);
    // x̃₀, V₀ families
    raw.push((embed(ext.tilde[0].0), fam_node(embed(ext.tilde[0].0), l.u0, 1, delta), Some(ExtFamily::Tilde(0))));
    for i in 0..2 {
        let fams = &ext.v_families[i];
        let (u, v, a_e) = (l.u(i), l.v(i), l.action_e(i));
        let vrow: Vec<_> = fams
            .iter()
            .enumerate()
            .map(|(k, (x, d))| {
                // d = a·v − b·u
                let a = d.v.cross(u) / v.cross(u);
                (embed(*x), fam_node(embed(*x), d.v, 1, int(a) * a_e), Some(ExtFamily::End(i, k)))
            })
            .collect();
        if i == 0 {
            raw.extend(vrow);
            // end marker at 0 and the interior
            let first_enter = lens.nodes.first().map(|f| f.kind.enter());
            if first_enter == Some(-1) {
                let (x, d) = ext.end_markers[0];
                raw.push((embed(x), RawNode::turning(embed(x), d.v, Turn::Max), None));
            }
            let mut fam = 0;
            for node in &lens.nodes {
                let x = embed(node.x);
                match node.kind {
                    NodeKind::Family { convex, action } => {
                        raw.push((x, fam_node(x, node.dir.v, convex, action), Some(ExtFamily::Interior(fam))));
                        fam += 1;
                    }
                    NodeKind::Turning(t) => raw.push((x, RawNode::turning(x, node.dir.v, t), None)),
                }
            }
            let last_leave = lens.nodes.last().map(|f| f.kind.leave());
            if last_leave == Some(-1) {
                let (x, d) = ext.end_markers[1];
                raw.push((embed(x), RawNode::turning(embed(x), d.v, Turn::Min), None));
            }
        } else {
            raw.extend(vrow);
        }
    }
    raw.push((embed(ext.tilde[1].0), fam_node(embed(ext.tilde[1].0), l.u1, 1, delta), Some(ExtFamily::Tilde(1))));

    // Return arc over (7/8, 9/8), wrapped into [0, 1).
    let k = arc.markers.len() as i64;
    for (j, (v, t)) in arc.markers.iter().enumerate() {
        let mut x = rat(7, 8) + rat(j as i64 + 1, 4 * (k + 1));
        if x >= Rat::one() {
            x -= Rat::one();
        }
        raw.push((x, RawNode::turning(x, *v, *t), None));
    }
    raw.sort_by_key(|a| a.0);

    let mut embedding = BTreeMap::new();
    let mut fam = 0;
    for (_, node, tag) in &raw {
        if let NodeKind::Family { .. } = node.kind {
            if let Some(t) = tag {
                embedding.insert(*t, fam);
            }
            fam += 1;
        }
    }
    let bound = lens.bound + Rat::one();
    let circle = Profile::circle(bound, raw.into_iter().map(|(_, r, _)| r).collect());
    let issues = circle.validate();
    if !issues.is_empty() {
        return Err(ChainMapError::Sign(issues.join("; ")));
    }
    let cp = CompanionPair { lens: lens.clone(), circle, embedding, arc: arc.clone(), delta };
    let bad = cp.sign_violations()?;
    if !bad.is_empty() {
        return Err(ChainMapError::Sign(bad.join("; ")));
    }
    Ok(cp)
}

/// The canonical arc: monotone from `u₁` to the next copy of `u₀`.
pub fn canonical_companion(lens: &Profile) -> Result<CompanionPair, ChainMapError> {
    build_companion(lens, &ReturnArc::default())
}

impl CompanionPair {
    /// Node directions on the circle line that break the return-arc sign
    /// pattern: `a_L(i) × a_T'` positive on `I` and negative on the return
    /// arc, for both ends `i`.
    pub fn sign_violations(&self) -> Result<Vec<String>, ChainMapError> {
        let l = self.lens.lens.expect("lens data");
        let line = self.circle.line()?;
        let mut out = Vec::new();
        let checks: [(Rat, Rat, Vec2, bool, &str); 4] = [
            (embed(Rat::zero()), embed(Rat::one()), -l.u0, true, "I, end 0"),
            (embed(Rat::zero()), embed(Rat::one()), l.u1, true, "I, end 1"),
            (rat(7, 8), rat(9, 8), l.u0, false, "return arc, end 0"),
            (rat(7, 8), rat(9, 8), -l.u1, false, "return arc, end 1"),
        ];
        for (s, what) in [(-l.u0, "I, end 0"), (l.u1, "I, end 1")] {
            for i in 0..2 {
                let d = l.end_dir(i);
                if s.cross(d) >= 0 {
                    out.push(format!("{what}: direction a'({i}) = {d} at x = {}", fmt_rat(&embed(int(i as i64)))));
                }
            }
        }
        for (lo, hi, s, closed, what) in checks {
            out.extend(window_violations(&line, lo, hi, s, closed).into_iter().map(|(x, d)| {
                format!("{what}: node at x = {} with direction {} (turn {})", fmt_rat(&x), d.v, d.w)
            }));
        }
        Ok(out)
    }

    /// Whether the circle window reproduces the lens extension family for
    /// family: position, direction and convexity.
    pub fn window_matches(&self) -> Result<bool, ChainMapError> {
        let ext = self.lens.extension()?;
        let fams = self.circle.families();
        for (tag, x, dir) in ext.all_families() {
            let Some(&k) = self.embedding.get(&tag) else { return Ok(false) };
            let f = &fams[k];
            let c = ext.line.nodes.iter().find(|n| n.x == x).and_then(|n| n.family);
            if f.x != embed(x) || f.dir.v != dir.v || Some(f.convex) != c {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `Φ(α)`: the circle orbit set whose path is the α side of `R_{α,∅}`.
    pub fn phi(&self, lens_ctx: &Context, alpha: &OrbitSet) -> Result<OrbitSet, ChainMapError> {
        self.phi_with(lens_ctx, alpha, false)
    }

    /// `Φ(α)`, optionally with one elliptic orbit at an `x̃ᵢ` family dropped
    /// (an injected fault for exercising the verifier).
    pub fn phi_with(&self, lens_ctx: &Context, alpha: &OrbitSet, drop_tilde: bool) -> Result<OrbitSet, ChainMapError> {
        if lens_ctx.class_of(alpha)? != lens_ctx.zero_class() {
            return Err(ChainMapError::NonzeroClass(alpha.label()));
        }
        let r = lens_ctx.associate_region(alpha, &OrbitSet::empty(), None)?.region;
        if !r.p1.edges.is_empty() {
            return Err(ChainMapError::NotPositivePath(alpha.label()));
        }
        let fams = self.circle.families();
        let by_x: BTreeMap<Rat, usize> = fams.iter().enumerate().map(|(k, f)| (f.x, k)).collect();
        let mut g = OrbitSet::empty();
        let mut dropped = !drop_tilde;
        for (y, e) in &r.p0.edges {
            let t = embed(*y);
            let k = *by_x.get(&t).ok_or_else(|| ChainMapError::NotPositivePath(alpha.label()))?;
            debug_assert_eq!(fams[k].dir.v, e.v);
            let mut me = e.me;
            let tilde = self.embedding.get(&ExtFamily::Tilde(0)) == Some(&k) || self.embedding.get(&ExtFamily::Tilde(1)) == Some(&k);
            if !dropped && tilde && me > 0 {
                me -= 1;
                dropped = true;
            }
            g = g.with(k, me, e.mh);
        }
        Ok(g)
    }
}

/// Nodes of `line` on `[lo, hi]` (or `(lo, hi)` when `closed` is false)
/// whose direction `d` fails `s × d < 0`, or one witness when the sweep
/// leaves every open half-plane.
fn window_violations(line: &Line, lo: Rat, hi: Rat, s: Vec2, closed: bool) -> Vec<(Rat, LiftedDir)> {
    let nodes: Vec<_> = line
        .nodes_between(lo, hi)
        .into_iter()
        .filter(|n| closed || (n.x != lo && n.x != hi))
        .collect();
    let Some(max) = nodes.iter().map(|n| n.dir).max() else { return Vec::new() };
    let top = max.ceil_lift(s.primitive());
    let bottom = top.minus_half_turn();
    let bad: Vec<_> = nodes.iter().filter(|n| !(n.dir > bottom && n.dir < top)).map(|n| (n.x, n.dir)).collect();
    if bad.is_empty() && nodes.iter().any(|n| s.cross(n.dir.v) >= 0) {
        nodes.iter().map(|n| (n.x, n.dir)).take(1).collect()
    } else {
        bad
    }
}

/// One row of the verification report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiCheck {
    pub alpha: OrbitSet,
    pub image: Option<OrbitSet>,
    pub index_lens: i64,
    pub index_t3: Option<i64>,
    pub boundary_match: bool,
    /// `Φ(∂α)` and `∂Φ(α)` when they differ.
    pub mismatch: Option<(BTreeSet<OrbitSet>, BTreeSet<OrbitSet>)>,
}

impl PhiCheck {
    pub fn index_match(&self) -> bool {
        self.index_t3 == Some(self.index_lens)
    }

    pub fn passed(&self) -> bool {
        self.index_match() && self.boundary_match
    }
}

#[derive(Clone, Debug)]
pub struct ChainMapReport {
    pub rows: Vec<PhiCheck>,
}

impl ChainMapReport {
    pub fn passed(&self) -> bool {
        self.rows.iter().all(PhiCheck::passed)
    }

    pub fn first_failure(&self) -> Option<&PhiCheck> {
        self.rows.iter().find(|r| !r.passed())
    }

    /// `alpha-id  index-lens  index-t3  match  boundary-match` lines, tab
    /// separated, with a header.
    pub fn to_text(&self) -> String {
        let mut s = String::from("alpha-id\tindex-lens\tindex-t3\tmatch\tboundary-match\n");
        for (k, r) in self.rows.iter().enumerate() {
            let it = r.index_t3.map_or("-".to_string(), |i| i.to_string());
            let _ = writeln!(s, "{k}\t{}\t{it}\t{}\t{}", r.index_lens, r.index_match(), r.boundary_match);
        }
        s
    }
}

/// Checks index preservation and `∂_T Φ = Φ ∂_L` on every class-zero lens
/// generator with action below `bound`.
pub fn verify_chain_map(cp: &CompanionPair, bound: Rat) -> Result<ChainMapReport, ChainMapError> {
    verify_with(cp, bound, Exec::default(), false)
}

pub fn verify_with(cp: &CompanionPair, bound: Rat, exec: Exec, drop_tilde: bool) -> Result<ChainMapReport, ChainMapError> {
    let lc = Context::new(cp.lens.clone())?;
    let tc = Context::new(cp.circle.clone())?;
    let zero = lc.zero_class();
    let lens_gens = lc.generators_with(exec, zero, bound);
    let images: Vec<Result<OrbitSet, ChainMapError>> =
        lens_gens.iter().map(|a| cp.phi_with(&lc, a, drop_tilde)).collect();
    let phi_ok: Vec<OrbitSet> = images.iter().filter_map(|r| r.as_ref().ok().cloned()).collect();
    let mut tbound = Rat::zero();
    for g in &phi_ok {
        tbound = tbound.max(tc.action(g)?);
    }
    let tbound = tbound + cp.delta / 2;
    let t_zero = HomologyClass::Lattice(Vec2::ZERO);
    let t_gens = tc.generators_with(exec, t_zero, tbound);
    let t_actions = t_gens.iter().map(|g| tc.action(g)).collect::<Result<Vec<_>, _>>()?;
    let lens_m = lc.boundary_matrix_with(exec, &lens_gens)?;
    let cols = lens_m.columns();
    let idx: Vec<usize> = (0..lens_gens.len()).collect();
    let rows = exec.map(&idx, |&a| -> Result<PhiCheck, ChainMapError> {
        let alpha = &lens_gens[a];
        let index_lens = lc.relative_index(alpha, &OrbitSet::empty())?;
        let Ok(img) = &images[a] else {
            return Ok(PhiCheck {
                alpha: alpha.clone(),
                image: None,
                index_lens,
                index_t3: None,
                boundary_match: false,
                mismatch: None,
            });
        };
        let index_t3 = tc.relative_index(img, &OrbitSet::empty()).ok();
        let mapped: BTreeSet<OrbitSet> = cols[a]
            .iter()
            .map(|&b| images[b].clone())
            .collect::<Result<_, _>>()?;
        let mut direct = BTreeSet::new();
        if tc.class_of(img)? == t_zero {
            let top = tc.action(img)?;
            for (b, beta) in t_gens.iter().enumerate() {
                if t_actions[b] < top && tc.coefficient(img, beta)?.value {
                    direct.insert(beta.clone());
                }
            }
        }
        let ok = mapped == direct && tc.class_of(img)? == t_zero;
        Ok(PhiCheck {
            alpha: alpha.clone(),
            image: Some(img.clone()),
            index_lens,
            index_t3,
            boundary_match: ok,
            mismatch: (!ok).then_some((mapped, direct)),
        })
    });
    Ok(ChainMapReport { rows: rows.into_iter().collect::<Result<_, _>>()? })
}
