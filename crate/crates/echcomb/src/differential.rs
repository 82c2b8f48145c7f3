//! The differential coefficient `⟨∂α, β⟩` in each geometry and boundary
//! matrix assembly.

use std::collections::BTreeSet;

use num_traits::One;
use serde::Serialize;

use crate::complex::{ComplexError, Context, OrbitSet};
use crate::homology::BitMatrix;
use crate::lattice::{Rat, Vec2};
use crate::par::Exec;
use crate::profile::{Geometry, Line};
use crate::region::{
    classify_positivity, decoration_distance, slice_class, theorem_splits, Edge, Path, Positivity,
    Region, Split,
};

/// Evidence for a nonzero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Witness {
    Split(Split),
    /// The unique relevant lift of a circle pair with its offset `σ₀`.
    Lift { sigma0: Vec2, lifted: Region, split: Split },
    /// The extended region of a lens-like pair.
    Extended { d: [i64; 2], region: Region, split: Split },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoefficientReport {
    pub value: bool,
    pub witness: Option<Witness>,
    pub reasons: Vec<String>,
}

impl CoefficientReport {
    fn zero(reason: impl Into<String>) -> Self {
        CoefficientReport { value: false, witness: None, reasons: vec![reason.into()] }
    }

    fn one(w: Witness) -> Self {
        CoefficientReport { value: true, witness: Some(w), reasons: Vec::new() }
    }
}

/// A split `T₁R'T₂` whose core is a-positive, minimally positive and at
/// decoration distance one, or the reasons every candidate failed.
pub fn criteria(region: &Region, line: &Line) -> Result<Split, Vec<String>> {
    let splits = theorem_splits(region);
    if splits.is_empty() {
        return Err(vec!["not of the form T₁R'T₂ with R' non-local and indecomposable".into()]);
    }
    let mut reasons = BTreeSet::new();
    for s in splits {
        let mut ok = true;
        if !line.positive(&s.core) {
            reasons.insert("core is not a-positive".to_string());
            ok = false;
        }
        if classify_positivity(&s.core) != Positivity::MinimallyPositive {
            reasons.insert("core is not minimally positive".to_string());
            ok = false;
        }
        if decoration_distance(&s.core) != 1 {
            reasons.insert("core is not almost minimally decorated".to_string());
            ok = false;
        }
        if ok {
            return Ok(s);
        }
    }
    Err(reasons.into_iter().collect())
}

impl Context {
    /// `⟨∂α, β⟩` for whatever geometry the profile has.
    pub fn coefficient(&self, alpha: &OrbitSet, beta: &OrbitSet) -> Result<CoefficientReport, ComplexError> {
        match self.geometry() {
            Geometry::Interval => self.coefficient_interval(alpha, beta),
            Geometry::Circle => self.coefficient_circle(alpha, beta),
            Geometry::Lens => self.coefficient_lens(alpha, beta),
            Geometry::S1s2 => self.coefficient_s1s2(alpha, beta),
        }
    }

    pub fn coefficient_interval(&self, alpha: &OrbitSet, beta: &OrbitSet) -> Result<CoefficientReport, ComplexError> {
        let r = self.associate_region(alpha, beta, None)?.region;
        Ok(match criteria(&r, &self.line) {
            Ok(s) => CoefficientReport::one(Witness::Split(s)),
            Err(reasons) => CoefficientReport { value: false, witness: None, reasons },
        })
    }

    pub fn coefficient_circle(&self, alpha: &OrbitSet, beta: &OrbitSet) -> Result<CoefficientReport, ComplexError> {
        let r = self.associate_region(alpha, beta, None)?.region;
        let lifts = relevant_lifts(&r, &self.line);
        Ok(match lifts.len() {
            0 => CoefficientReport::zero("no relevant lift"),
            1 => {
                let (lifted, split) = lifts.into_iter().next().unwrap();
                let sigma0 = slice_class(&lifted, Vec2::ZERO, Rat::one());
                CoefficientReport::one(Witness::Lift { sigma0, lifted, split })
            }
            n => CoefficientReport::zero(format!("{n} relevant lifts")),
        })
    }

    pub fn coefficient_lens(&self, alpha: &OrbitSet, beta: &OrbitSet) -> Result<CoefficientReport, ComplexError> {
        let a = self.associate_region(alpha, beta, None)?;
        Ok(self.extended_report(a.region, a.d.unwrap_or([0, 0])))
    }

    pub fn coefficient_s1s2(&self, alpha: &OrbitSet, beta: &OrbitSet) -> Result<CoefficientReport, ComplexError> {
        let mut passing = Vec::new();
        let mut reasons = Vec::new();
        for d in 0..=1 {
            let a = self.associate_region(alpha, beta, Some(d))?;
            let rep = self.extended_report(a.region, a.d.unwrap_or([d, 0]));
            if rep.value {
                passing.push(rep);
            } else {
                reasons.extend(rep.reasons.into_iter().map(|r| format!("d = {d}: {r}")));
            }
        }
        Ok(match passing.len() {
            1 => passing.pop().unwrap(),
            2 => CoefficientReport::zero("both d = 0 and d = 1 pass"),
            _ => CoefficientReport { value: false, witness: None, reasons },
        })
    }

    fn extended_report(&self, region: Region, d: [i64; 2]) -> CoefficientReport {
        match criteria(&region, &self.line) {
            Ok(split) => CoefficientReport::one(Witness::Extended { d, region, split }),
            Err(reasons) => CoefficientReport { value: false, witness: None, reasons },
        }
    }

    /// Boundary matrix over `gens`: entry `(β, α)` holds `⟨∂α, β⟩`. Only
    /// pairs that respect the action filtration are evaluated; reflected
    /// profiles carry the dual filtration.
    pub fn boundary_matrix(&self, gens: &[OrbitSet]) -> Result<BitMatrix, ComplexError> {
        self.boundary_matrix_with(Exec::default(), gens)
    }

    pub fn boundary_matrix_with(&self, exec: Exec, gens: &[OrbitSet]) -> Result<BitMatrix, ComplexError> {
        let actions = gens.iter().map(|g| self.action(g)).collect::<Result<Vec<_>, _>>()?;
        let cols: Vec<usize> = (0..gens.len()).collect();
        let dual = self.profile.dual;
        let per_col = exec.map(&cols, |&a| -> Result<Vec<usize>, ComplexError> {
            let mut rows = Vec::new();
            for b in 0..gens.len() {
                let below = if dual { actions[b] > actions[a] } else { actions[b] < actions[a] };
                if below && self.coefficient(&gens[a], &gens[b])?.value {
                    rows.push(b);
                }
            }
            Ok(rows)
        });
        let mut m = BitMatrix::new(gens.len(), gens.len());
        for (a, rows) in per_col.into_iter().enumerate() {
            for b in rows? {
                m.set(b, a);
            }
        }
        Ok(m)
    }
}

/// Relevant lifts of a circle region to the line, each with a passing split.
/// A lift cuts the circle at a support point `x₁`: points `y ≥ x₁` stay,
/// points `y < x₁` move to `y + 1`, and the copies at `x₁` are divided
/// between `x₁` and `x₁ + 1` in every possible way. Every lift whose slice
/// classes vanish outside `[x₁, x₁+1]` arises this way, so this covers all
/// offsets `σ₀` a relevant lift can have.
pub fn relevant_lifts(r: &Region, line: &Line) -> Vec<(Region, Split)> {
    let mut out = Vec::new();
    if r.is_empty() {
        return out;
    }
    for x1 in r.positions() {
        let shifted = |p: &Path| -> Path {
            let mut q = Path::new();
            for (y, e) in &p.edges {
                if *y > x1 {
                    q.edges.insert(*y, *e);
                } else if *y < x1 {
                    q.edges.insert(*y + Rat::one(), *e);
                }
            }
            q
        };
        let base0 = shifted(&r.p0);
        let base1 = shifted(&r.p1);
        let at0 = r.p0.edges.get(&x1).copied();
        let at1 = r.p1.edges.get(&x1).copied();
        let (v, c) = at0.or(at1).map(|e| (e.v, e.c)).unwrap();
        let (e0, h0) = at0.map_or((0, 0), |e| (e.me, e.mh));
        let (e1, h1) = at1.map_or((0, 0), |e| (e.me, e.mh));
        let x2 = x1 + Rat::one();
        for a0 in 0..=e0 {
            for b0 in 0..=h0 {
                for a1 in 0..=e1 {
                    for b1 in 0..=h1 {
                        let mut p0 = base0.clone();
                        let mut p1 = base1.clone();
                        place(&mut p0, x1, v, c, a0, b0);
                        place(&mut p0, x2, v, c, e0 - a0, h0 - b0);
                        place(&mut p1, x1, v, c, a1, b1);
                        place(&mut p1, x2, v, c, e1 - a1, h1 - b1);
                        let Ok(lifted) = Region::new(p0, p1) else { continue };
                        if let Some(split) = relevant_split(&lifted, line, x1) {
                            out.push((lifted, split));
                        }
                    }
                }
            }
        }
    }
    out
}

fn place(p: &mut Path, x: Rat, v: Vec2, c: i8, me: u32, mh: u32) {
    if me + mh > 0 {
        p.edges.insert(x, Edge::new(v, c, me, mh));
    }
}

fn relevant_split(lifted: &Region, line: &Line, x1: Rat) -> Option<Split> {
    let x2 = x1 + Rat::one();
    theorem_splits(lifted).into_iter().find(|s| {
        let core_starts = s.core.positions().first() == Some(&x1);
        let trivial_inside = !s.t1.positions().contains(&x2) && !s.t2.positions().contains(&x2);
        core_starts
            && trivial_inside
            && line.positive(&s.core)
            && classify_positivity(&s.core) == Positivity::MinimallyPositive
            && decoration_distance(&s.core) == 1
    })
}
