//! Integer lattice vectors, exact rationals and lifted directions.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

/// Exact rational number used for positions, actions and angles.
pub type Rat = Ratio<i64>;

/// Builds `n/d` as a reduced rational.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(n, d)
}

/// Builds an integral rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(n)
}

/// Parses `"p/q"` or `"p"` into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i64 = n.trim().parse().ok()?;
            let d: i64 = d.trim().parse().ok()?;
            if d == 0 {
                return None;
            }
            Some(Rat::new(n, d))
        }
        None => s.parse::<i64>().ok().map(Rat::from_integer),
    }
}

/// Formats a rational as `"p/q"`, or `"p"` when integral.
pub fn fmt_rat(r: &Rat) -> String {
    if r.is_integer() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Largest integer not exceeding `r`.
pub fn floor(r: &Rat) -> i64 {
    r.floor().to_integer()
}

/// A vector in the integer lattice Z².
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: i64,
    pub y: i64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Vec2 { x, y }
    }

    /// The pairing `(a,b)×(c,d) = ad − bc`.
    pub fn cross(self, o: Vec2) -> i64 {
        self.x * o.y - self.y * o.x
    }

    pub fn dot(self, o: Vec2) -> i64 {
        self.x * o.x + self.y * o.y
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    pub fn gcd(self) -> i64 {
        self.x.gcd(&self.y)
    }

    pub fn is_primitive(self) -> bool {
        !self.is_zero() && self.gcd() == 1
    }

    /// Divides out the content; the zero vector maps to itself.
    pub fn primitive(self) -> Vec2 {
        if self.is_zero() {
            return self;
        }
        let g = self.gcd();
        Vec2::new(self.x / g, self.y / g)
    }

    pub fn linf(self) -> i64 {
        self.x.abs().max(self.y.abs())
    }

    /// Returns `k` with `self = k·dir`, if it exists.
    pub fn multiple_of(self, dir: Vec2) -> Option<i64> {
        if dir.is_zero() || self.cross(dir) != 0 {
            return None;
        }
        let (num, den) = if dir.x != 0 { (self.x, dir.x) } else { (self.y, dir.y) };
        if num % den == 0 {
            Some(num / den)
        } else {
            None
        }
    }

    /// Upper (0) or lower (1) half of the circle of directions, with the
    /// positive x-axis in the upper half.
    fn half(self) -> u8 {
        if self.y > 0 || (self.y == 0 && self.x > 0) {
            0
        } else {
            1
        }
    }

    /// Compares arguments in `[0, 2π)` exactly.
    pub fn angle_cmp(self, o: Vec2) -> Ordering {
        self.half()
            .cmp(&o.half())
            .then_with(|| 0.cmp(&self.cross(o)))
    }

    /// True when the argument lies in `[0, π/2]`.
    pub fn in_first_quadrant(self) -> bool {
        !self.is_zero() && self.x >= 0 && self.y >= 0
    }

    /// The lattice reflection across the diagonal.
    pub fn swap(self) -> Vec2 {
        Vec2::new(self.y, self.x)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl AddAssign for Vec2 {
    fn add_assign(&mut self, o: Vec2) {
        self.x += o.x;
        self.y += o.y;
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl SubAssign for Vec2 {
    fn sub_assign(&mut self, o: Vec2) {
        self.x -= o.x;
        self.y -= o.y;
    }
}

impl Neg for Vec2 {
    type Output = Vec2;
    fn neg(self) -> Vec2 {
        Vec2::new(-self.x, -self.y)
    }
}

impl Mul<Vec2> for i64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}

/// A point of the plane with rational coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RatPoint {
    pub x: Rat,
    pub y: Rat,
}

impl RatPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        RatPoint { x, y }
    }

    pub fn origin() -> Self {
        RatPoint::new(Rat::zero(), Rat::zero())
    }

    pub fn cross_dir(self, v: Vec2) -> Rat {
        self.x * v.y - self.y * v.x
    }

    pub fn add_scaled(self, t: Rat, v: Vec2) -> Self {
        RatPoint::new(self.x + t * v.x, self.y + t * v.y)
    }
}

impl Sub for RatPoint {
    type Output = RatPoint;
    fn sub(self, o: RatPoint) -> RatPoint {
        RatPoint::new(self.x - o.x, self.y - o.y)
    }
}

/// The lifted angle `2π·w + arg(v)` of a primitive direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LiftedDir {
    pub v: Vec2,
    pub w: i64,
}

impl Ord for LiftedDir {
    fn cmp(&self, o: &Self) -> Ordering {
        self.w.cmp(&o.w).then_with(|| self.v.angle_cmp(o.v))
    }
}

impl PartialOrd for LiftedDir {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl LiftedDir {
    pub fn new(v: Vec2, w: i64) -> Self {
        LiftedDir { v, w }
    }

    /// Adds `n` full turns.
    pub fn turn(self, n: i64) -> Self {
        LiftedDir::new(self.v, self.w + n)
    }

    /// Smallest lift of `v` that is `>= self`.
    pub fn ceil_lift(self, v: Vec2) -> Self {
        let cand = LiftedDir::new(v, self.w);
        if cand >= self {
            cand
        } else {
            cand.turn(1)
        }
    }

    /// Smallest lift of `v` strictly above `self`.
    pub fn next_above(self, v: Vec2) -> Self {
        let cand = LiftedDir::new(v, self.w);
        if cand > self {
            cand
        } else {
            cand.turn(1)
        }
    }

    /// Largest lift of `v` strictly below `self`.
    pub fn next_below(self, v: Vec2) -> Self {
        let cand = LiftedDir::new(v, self.w);
        if cand < self {
            cand
        } else {
            cand.turn(-1)
        }
    }

    /// The lift of `-v` exactly half a turn below.
    pub fn minus_half_turn(self) -> Self {
        let u = -self.v;
        if self.v.half() == 1 {
            LiftedDir::new(u, self.w)
        } else {
            LiftedDir::new(u, self.w - 1)
        }
    }

    /// Image under the diagonal reflection; reverses the lifted order.
    pub fn swap(self) -> Self {
        let w = if self.v.in_first_quadrant() { -self.w } else { -self.w - 1 };
        LiftedDir::new(self.v.swap(), w)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cross_and_primitive() {
        assert_eq!(Vec2::new(1, 2).cross(Vec2::new(3, 4)), -2);
        assert!(Vec2::new(2, 3).is_primitive());
        assert!(!Vec2::new(2, 4).is_primitive());
        assert!(!Vec2::ZERO.is_primitive());
        assert_eq!(Vec2::new(-4, 6).primitive(), Vec2::new(-2, 3));
        assert_eq!(Vec2::new(-3, 0).multiple_of(Vec2::new(1, 0)), Some(-3));
        assert_eq!(Vec2::new(1, 1).multiple_of(Vec2::new(1, 0)), None);
    }

    #[test]
    fn angle_order_matches_atan2() {
        let vs: Vec<Vec2> = (-3..=3)
            .flat_map(|x| (-3..=3).map(move |y| Vec2::new(x, y)))
            .filter(|v| v.is_primitive())
            .collect();
        let ang = |v: Vec2| {
            let a = (v.y as f64).atan2(v.x as f64);
            if a < 0.0 {
                a + std::f64::consts::TAU
            } else {
                a
            }
        };
        for &a in &vs {
            for &b in &vs {
                let exact = a.angle_cmp(b);
                let approx = ang(a).partial_cmp(&ang(b)).unwrap();
                assert_eq!(exact, approx, "{a} vs {b}");
            }
        }
    }

    #[test]
    fn lifts() {
        let e = LiftedDir::new(Vec2::new(1, 0), 0);
        assert_eq!(e.next_above(Vec2::new(1, 0)), e.turn(1));
        assert_eq!(e.next_below(Vec2::new(0, -1)), LiftedDir::new(Vec2::new(0, -1), -1));
        assert_eq!(e.ceil_lift(Vec2::new(1, 0)), e);
        let up = LiftedDir::new(Vec2::new(-1, 1), 0);
        assert_eq!(up.minus_half_turn(), LiftedDir::new(Vec2::new(1, -1), -1));
        let down = LiftedDir::new(Vec2::new(0, -1), 2);
        assert_eq!(down.minus_half_turn(), LiftedDir::new(Vec2::new(0, 1), 2));
    }

    #[test]
    fn swap_reverses_order_and_is_involutive() {
        let dirs = [
            LiftedDir::new(Vec2::new(1, 0), 0),
            LiftedDir::new(Vec2::new(1, 1), 0),
            LiftedDir::new(Vec2::new(0, 1), 0),
            LiftedDir::new(Vec2::new(-1, 2), 0),
            LiftedDir::new(Vec2::new(-1, -1), 0),
            LiftedDir::new(Vec2::new(2, -1), 0),
            LiftedDir::new(Vec2::new(1, 0), 1),
        ];
        for w in dirs.windows(2) {
            assert!(w[0] < w[1]);
            assert!(w[0].swap() > w[1].swap());
        }
        for d in dirs {
            assert_eq!(d.swap().swap(), d);
        }
    }

    #[test]
    fn rational_text() {
        assert_eq!(parse_rat("7/2"), Some(rat(7, 2)));
        assert_eq!(parse_rat("-3"), Some(int(-3)));
        assert_eq!(parse_rat("1/0"), None);
        assert_eq!(fmt_rat(&rat(6, 4)), "3/2");
        assert_eq!(fmt_rat(&int(2)), "2");
        assert_eq!(floor(&rat(-8, 5)), -2);
    }
}
