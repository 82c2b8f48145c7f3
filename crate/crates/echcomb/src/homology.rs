//! GF(2) linear algebra on boundary matrices: `∂² = 0` checks, ranks,
//! relative gradings and graded homology ranks.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::Write as _;

use num_integer::Integer;
use thiserror::Error;

use crate::complex::{ComplexError, Context, HomologyClass, OrbitSet};
use crate::lattice::Vec2;
use crate::profile::Geometry;
use crate::region::ech_index;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HomologyError {
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error("malformed matrix text: {0}")]
    Parse(String),
    #[error("d² ≠ 0: entry ({0}, {1}) is odd")]
    NotDifferential(usize, usize),
}

/// Sparse matrix over GF(2).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BitMatrix {
    pub rows: usize,
    pub cols: usize,
    pub entries: BTreeSet<(usize, usize)>,
}

impl BitMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        BitMatrix { rows, cols, entries: BTreeSet::new() }
    }

    pub fn set(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols, "entry out of bounds");
        self.entries.insert((r, c));
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.entries.contains(&(r, c))
    }

    pub fn transpose(&self) -> BitMatrix {
        BitMatrix {
            rows: self.cols,
            cols: self.rows,
            entries: self.entries.iter().map(|&(r, c)| (c, r)).collect(),
        }
    }

    /// Column supports as sorted row lists.
    pub fn columns(&self) -> Vec<Vec<usize>> {
        let mut cols = vec![Vec::new(); self.cols];
        for &(r, c) in &self.entries {
            cols[c].push(r);
        }
        cols
    }

    pub fn mul(&self, o: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, o.rows);
        let mut o_rows: Vec<Vec<usize>> = vec![Vec::new(); o.rows];
        for &(k, c) in &o.entries {
            o_rows[k].push(c);
        }
        let mut acc: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &(r, k) in &self.entries {
            for &c in &o_rows[k] {
                if !acc.insert((r, c)) {
                    acc.remove(&(r, c));
                }
            }
        }
        BitMatrix { rows: self.rows, cols: o.cols, entries: acc }
    }

    /// An odd entry `(γ, α)` of `m·m`, if any.
    pub fn d_squared(&self) -> Option<(usize, usize)> {
        self.mul(self).entries.iter().next().copied()
    }

    /// GF(2) rank by column reduction with a pivot table.
    pub fn rank(&self) -> usize {
        self.rank_of(&(0..self.cols).collect::<Vec<_>>(), None)
    }

    /// Rank of the submatrix on the given columns, optionally restricted to
    /// a row subset.
    pub fn rank_of(&self, cols: &[usize], rows: Option<&BTreeSet<usize>>) -> usize {
        let all = self.columns();
        let mut pivots: HashMap<usize, Vec<usize>> = HashMap::new();
        let mut rank = 0;
        for &c in cols {
            let mut col: Vec<usize> = all[c]
                .iter()
                .copied()
                .filter(|r| rows.is_none_or(|s| s.contains(r)))
                .collect();
            while let Some(&low) = col.last() {
                match pivots.get(&low) {
                    Some(p) => col = xor_sorted(&col, p),
                    None => break,
                }
            }
            if let Some(&low) = col.last() {
                pivots.insert(low, col);
                rank += 1;
            }
        }
        rank
    }

    /// `"rows cols"` then one sorted `"r c"` line per entry.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.rows, self.cols);
        for (r, c) in &self.entries {
            let _ = writeln!(s, "{r} {c}");
        }
        s
    }

    pub fn from_text(text: &str) -> Result<BitMatrix, HomologyError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let nums = |l: &str| -> Result<(usize, usize), HomologyError> {
            let mut it = l.split_whitespace().map(|t| t.parse::<usize>());
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
                _ => Err(HomologyError::Parse(format!("bad line {l:?}"))),
            }
        };
        let (rows, cols) = nums(lines.next().ok_or_else(|| HomologyError::Parse("empty".into()))?)?;
        let mut m = BitMatrix::new(rows, cols);
        for l in lines {
            let (r, c) = nums(l)?;
            if r >= rows || c >= cols {
                return Err(HomologyError::Parse(format!("entry {r} {c} out of bounds")));
            }
            if !m.entries.insert((r, c)) {
                return Err(HomologyError::Parse(format!("duplicate entry {r} {c}")));
            }
        }
        Ok(m)
    }
}

fn xor_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(a.len() + b.len());
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Relative grading of a generator list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grading {
    pub base: usize,
    /// `I(α, base)` per generator, reduced when the modulus is nonzero.
    pub offsets: Vec<i64>,
    pub modulus: i64,
}

impl Context {
    /// `I(R_{α,β})` with `σ₀ = 0` on circles and `d = 0` on `S¹×S²`.
    pub fn relative_index(&self, alpha: &OrbitSet, beta: &OrbitSet) -> Result<i64, ComplexError> {
        self.relative_index_with(alpha, beta, Vec2::ZERO, 0)
    }

    pub fn relative_index_with(
        &self,
        alpha: &OrbitSet,
        beta: &OrbitSet,
        sigma0: Vec2,
        d: i64,
    ) -> Result<i64, ComplexError> {
        let d = (self.geometry() == Geometry::S1s2).then_some(d);
        let r = self.associate_region(alpha, beta, d)?.region;
        Ok(ech_index(&r, sigma0))
    }

    /// Index ambiguity of the class on circles: `2·gcd` of its components.
    /// Other geometries are handled by [`Context::grading`].
    pub fn grading_modulus(&self, cls: HomologyClass) -> i64 {
        match (self.geometry(), cls) {
            (Geometry::Circle, HomologyClass::Lattice(v)) => 2 * v.x.gcd(&v.y),
            _ => 0,
        }
    }

    /// Change of `I(α, α)` when `d` moves by one, i.e. the pairing of
    /// `c₁(ξ) + 2PD(Γ)` with the sphere class on `S¹×S²`. Zero elsewhere.
    pub fn sphere_shift(&self, alpha: &OrbitSet) -> Result<i64, ComplexError> {
        if self.geometry() != Geometry::S1s2 {
            return Ok(0);
        }
        let i0 = self.relative_index_with(alpha, alpha, Vec2::ZERO, 0)?;
        let i1 = self.relative_index_with(alpha, alpha, Vec2::ZERO, 1)?;
        Ok((i1 - i0).abs())
    }

    /// Grades `gens` against `∅` when present, else the first one.
    pub fn grading(&self, gens: &[OrbitSet], cls: HomologyClass) -> Result<Grading, ComplexError> {
        let base = gens.iter().position(|g| g.is_empty()).unwrap_or(0);
        let modulus = match gens.get(base) {
            Some(g) if self.geometry() == Geometry::S1s2 => self.sphere_shift(g)?,
            _ => self.grading_modulus(cls),
        };
        let mut offsets = Vec::with_capacity(gens.len());
        for g in gens {
            let i = self.relative_index(g, &gens[base])?;
            offsets.push(if modulus > 0 { i.rem_euclid(modulus) } else { i });
        }
        Ok(Grading { base, offsets, modulus })
    }

    /// Homology ranks per grading value.
    pub fn betti(&self, cls: HomologyClass, bound: crate::lattice::Rat) -> Result<BTreeMap<i64, usize>, HomologyError> {
        let gens = self.generators(cls, bound);
        let m = self.boundary_matrix(&gens)?;
        if let Some((r, c)) = m.d_squared() {
            return Err(HomologyError::NotDifferential(r, c));
        }
        let g = self.grading(&gens, cls)?;
        Ok(graded_ranks(&m, &g.offsets))
    }
}

/// `dim ker − dim im` per grading value for a differential homogeneous
/// with respect to `grades`.
pub fn graded_ranks(m: &BitMatrix, grades: &[i64]) -> BTreeMap<i64, usize> {
    let mut by: BTreeMap<i64, Vec<usize>> = BTreeMap::new();
    for (i, g) in grades.iter().enumerate() {
        by.entry(*g).or_default().push(i);
    }
    by.iter()
        .map(|(g, idx)| {
            let set: BTreeSet<usize> = idx.iter().copied().collect();
            let out = m.rank_of(idx, None);
            let all: Vec<usize> = (0..m.cols).collect();
            let into = m.rank_of(&all, Some(&set));
            (*g, idx.len() - out - into)
        })
        .collect()
}

/// Tab-separated `class grading rank` lines.
pub fn betti_report(cls: HomologyClass, ranks: &BTreeMap<i64, usize>) -> String {
    let mut s = String::new();
    for (g, r) in ranks {
        let _ = writeln!(s, "{cls}\t{g}\t{r}");
    }
    s
}
