//! Small exact-arithmetic helpers for points of `Z^n` and finite search
//! windows. Everything here is integer-only.

use serde::{Deserialize, Serialize};

/// A lattice point of `Z^n`. Entries may be negative.
pub type Point = Vec<i64>;

pub fn add(a: &[i64], b: &[i64]) -> Point {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[i64], b: &[i64]) -> Point {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn dot(a: &[i64], b: &[i64]) -> i64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn scale(k: i64, a: &[i64]) -> Point {
    a.iter().map(|x| k * x).collect()
}

pub fn is_nonnegative(a: &[i64]) -> bool {
    a.iter().all(|&x| x >= 0)
}

pub fn is_zero(a: &[i64]) -> bool {
    a.iter().all(|&x| x == 0)
}

/// Componentwise `a mod q` with representatives in `[0, q)`.
pub fn mod_floor(a: &[i64], q: i64) -> Point {
    debug_assert!(q >= 1);
    a.iter().map(|&x| x.rem_euclid(q)).collect()
}

/// Componentwise `(a - r) / q`; caller guarantees exact divisibility.
pub fn div_exact(a: &[i64], r: &[i64], q: i64) -> Point {
    a.iter()
        .zip(r)
        .map(|(&x, &c)| {
            debug_assert_eq!((x - c).rem_euclid(q), 0);
            (x - c) / q
        })
        .collect()
}

/// A finite componentwise window `[lower, upper]` of `Z^n`. All claims about
/// infinite degree sets are verified inside one of these and the report
/// carries the window used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeBox {
    pub lower: Point,
    pub upper: Point,
}

impl DegreeBox {
    pub fn new(lower: Point, upper: Point) -> Self {
        assert_eq!(lower.len(), upper.len());
        assert!(
            lower.iter().zip(&upper).all(|(l, u)| l <= u),
            "degree box must satisfy lower <= upper componentwise"
        );
        DegreeBox { lower, upper }
    }

    /// The cube `[a, b]^n`.
    pub fn cube(n: usize, a: i64, b: i64) -> Self {
        DegreeBox::new(vec![a; n], vec![b; n])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, v: &[i64]) -> bool {
        v.len() == self.dim()
            && v.iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (l, u))| l <= x && x <= u)
    }

    /// All lattice points of the window in row-major (lexicographic) order.
    pub fn iter(&self) -> BoxIter {
        BoxIter {
            cur: self.lower.clone(),
            bx: self.clone(),
            done: false,
        }
    }
}

pub struct BoxIter {
    cur: Point,
    bx: DegreeBox,
    done: bool,
}

impl Iterator for BoxIter {
    type Item = Point;

    fn next(&mut self) -> Option<Point> {
        if self.done {
            return None;
        }
        let out = self.cur.clone();
        // increment with carry, last coordinate fastest
        let n = self.cur.len();
        if n == 0 {
            self.done = true;
            return Some(out);
        }
        let mut i = n;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            self.cur[i] += 1;
            if self.cur[i] <= self.bx.upper[i] {
                break;
            }
            self.cur[i] = self.bx.lower[i];
        }
        Some(out)
    }
}
