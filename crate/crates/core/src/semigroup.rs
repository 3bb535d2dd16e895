//! Pointed affine semigroups `S ⊆ Z^n` over a prime `p`: the ring is `F_p[S]`.
//!
//! Pointedness is witnessed by a grading functional `λ` with `λ·g ≥ 1` for
//! every generator `g`. It makes every degree-bounded enumeration finite and
//! every membership search terminate.

use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{self, Point};

/// `F_p[S]` for a finitely generated pointed subsemigroup `S ⊆ Z^n_{≥0}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineSemigroupRing {
    p: u32,
    n: usize,
    generators: Vec<Point>,
    grading: Point,
    /// Hermite-form basis of the subgroup of `Z^n` generated by the
    /// generators; used as a cheap necessary condition for membership.
    lattice_basis: Vec<Point>,
}

/// On-disk ring description (see the `rings/` directory for the corpus).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RingSpec {
    pub p: u32,
    pub n: usize,
    pub generators: Vec<Point>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grading_functional: Option<Point>,
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Row-style Hermite reduction: returns echelon rows (pivot columns strictly
/// increasing, positive pivots) spanning the same subgroup of `Z^n`.
fn hermite_rows(rows: &[Point], n: usize) -> Vec<Point> {
    let mut rows: Vec<Point> = rows.iter().filter(|r| !lattice::is_zero(r)).cloned().collect();
    let mut basis: Vec<Point> = Vec::new();
    for col in 0..n {
        loop {
            let mut nonzero: Vec<usize> = (0..rows.len()).filter(|&i| rows[i][col] != 0).collect();
            if nonzero.is_empty() {
                break;
            }
            if nonzero.len() == 1 {
                let r = rows.swap_remove(nonzero[0]);
                basis.push(r);
                break;
            }
            // combine the two smallest entries Euclid-style
            nonzero.sort_by_key(|&i| rows[i][col].unsigned_abs());
            let (i, j) = (nonzero[0], nonzero[1]);
            let q = rows[j][col].div_euclid(rows[i][col]);
            let scaled = lattice::scale(q, &rows[i]);
            rows[j] = lattice::sub(&rows[j], &scaled);
        }
        // loop exit leaves every remaining row zero in this column, so the
        // extracted pivots have strictly increasing pivot columns
    }
    // normalize pivot signs
    for r in basis.iter_mut() {
        let piv = r.iter().find(|&&x| x != 0).copied().unwrap_or(0);
        if piv < 0 {
            *r = lattice::scale(-1, r);
        }
    }
    basis.sort_by_key(|r| r.iter().position(|&x| x != 0).unwrap_or(usize::MAX));
    basis
}

/// Bounded deterministic search for a functional `λ` with `λ·g ≥ 1` for all
/// generators. Shells of growing sup-norm are scanned in lexicographic order.
pub fn find_grading_functional(n: usize, generators: &[Point]) -> Option<Point> {
    if generators.is_empty() {
        return Some(vec![1; n.max(1)][..n].to_vec());
    }
    const MAX_SUP: i64 = 8;
    for bound in 1..=MAX_SUP {
        let bx = lattice::DegreeBox::cube(n, -bound, bound);
        for cand in bx.iter() {
            if cand.iter().map(|x| x.abs()).max() != Some(bound) {
                continue; // only the new shell
            }
            if generators.iter().all(|g| lattice::dot(&cand, g) >= 1) {
                return Some(cand);
            }
        }
    }
    None
}

impl AffineSemigroupRing {
    pub fn new(p: u32, n: usize, generators: Vec<Point>, grading: Option<Point>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidRing(format!("{p} is not prime")));
        }
        if n == 0 {
            return Err(Error::InvalidRing("ambient rank must be positive".into()));
        }
        for g in &generators {
            if g.len() != n {
                return Err(Error::InvalidRing(format!(
                    "generator {g:?} does not have {n} coordinates"
                )));
            }
            if lattice::is_zero(g) {
                return Err(Error::InvalidRing("zero generator".into()));
            }
            if !lattice::is_nonnegative(g) {
                return Err(Error::InvalidRing(format!(
                    "generator {g:?} has a negative entry"
                )));
            }
        }
        let grading = match grading {
            Some(l) => {
                if l.len() != n {
                    return Err(Error::InvalidRing("grading functional has wrong length".into()));
                }
                if let Some(g) = generators.iter().find(|g| lattice::dot(&l, g) < 1) {
                    return Err(Error::InvalidRing(format!(
                        "grading functional {l:?} fails λ·g ≥ 1 on generator {g:?}"
                    )));
                }
                l
            }
            None => find_grading_functional(n, &generators).ok_or_else(|| {
                Error::InvalidRing(
                    "no grading functional with λ·g ≥ 1 found in bounded search; \
                     the semigroup may not be pointed"
                        .into(),
                )
            })?,
        };
        let lattice_basis = hermite_rows(&generators, n);
        Ok(AffineSemigroupRing {
            p,
            n,
            generators,
            grading,
            lattice_basis,
        })
    }

    pub fn from_spec(spec: &RingSpec) -> Result<Self> {
        AffineSemigroupRing::new(spec.p, spec.n, spec.generators.clone(), spec.grading_functional.clone())
    }

    pub fn spec(&self) -> RingSpec {
        RingSpec {
            p: self.p,
            n: self.n,
            generators: self.generators.clone(),
            grading_functional: Some(self.grading.clone()),
        }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Point] {
        &self.generators
    }

    pub fn grading(&self) -> &Point {
        &self.grading
    }

    pub fn lambda(&self, v: &[i64]) -> i64 {
        lattice::dot(&self.grading, v)
    }

    /// Sum of the λ-degrees of the generators. Peeling bound: any `s ∈ S`
    /// with `λ(s) > (q-1)·gen_degree_sum()` admits a representation with some
    /// generator coefficient `≥ q`.
    pub fn gen_degree_sum(&self) -> i64 {
        self.generators.iter().map(|g| self.lambda(g)).sum()
    }

    pub fn max_gen_degree(&self) -> i64 {
        self.generators.iter().map(|g| self.lambda(g)).max().unwrap_or(0)
    }

    /// `p^e` as an `i64`, guarding against overflow.
    pub fn power(&self, e: u32) -> i64 {
        (self.p as i64)
            .checked_pow(e)
            .expect("p^e overflows i64; exponent out of supported range")
    }

    fn in_group(&self, v: &[i64]) -> bool {
        let mut v = v.to_vec();
        for row in &self.lattice_basis {
            let col = match row.iter().position(|&x| x != 0) {
                Some(c) => c,
                None => continue,
            };
            if v[col] != 0 {
                if v[col].rem_euclid(row[col]) != 0 {
                    return false;
                }
                let q = v[col] / row[col];
                v = lattice::sub(&v, &lattice::scale(q, row));
            }
        }
        lattice::is_zero(&v)
    }

    /// First-fit descent. Only ever answers `true` with certainty.
    fn contains_greedy(&self, v: &[i64]) -> bool {
        let mut v = v.to_vec();
        'outer: while !lattice::is_zero(&v) {
            for g in &self.generators {
                if v.iter().zip(g).all(|(x, y)| x >= y) {
                    v = lattice::sub(&v, g);
                    continue 'outer;
                }
            }
            return false;
        }
        true
    }

    fn contains_dfs(&self, v: Point, memo: &mut HashMap<Point, bool>) -> bool {
        if lattice::is_zero(&v) {
            return true;
        }
        if let Some(&r) = memo.get(&v) {
            return r;
        }
        for g in &self.generators {
            if v.iter().zip(g).all(|(x, y)| x >= y) {
                let w = lattice::sub(&v, g);
                if self.contains_dfs(w, memo) {
                    memo.insert(v, true);
                    return true;
                }
            }
        }
        memo.insert(v, false);
        false
    }

    /// Exact membership `v ∈ S`. Decided by descent; the grading functional
    /// bounds the depth so the search always terminates.
    pub fn contains(&self, v: &[i64]) -> bool {
        if v.len() != self.n || !lattice::is_nonnegative(v) {
            return false;
        }
        if lattice::is_zero(v) {
            return true;
        }
        if !self.in_group(v) {
            return false;
        }
        if self.contains_greedy(v) {
            return true;
        }
        let mut memo = HashMap::new();
        self.contains_dfs(v.to_vec(), &mut memo)
    }

    /// All of `S` with `λ-degree ≤ cutoff`, sorted. Layered breadth-first walk.
    pub fn enumerate_up_to(&self, cutoff: i64) -> Vec<Point> {
        if cutoff < 0 {
            return Vec::new();
        }
        let mut seen: HashSet<Point> = HashSet::new();
        let mut layers: Vec<Vec<Point>> = vec![Vec::new(); (cutoff + 1) as usize];
        layers[0].push(vec![0; self.n]);
        seen.insert(vec![0; self.n]);
        for deg in 0..=cutoff {
            let frontier = std::mem::take(&mut layers[deg as usize]);
            for s in frontier {
                for g in &self.generators {
                    let d2 = deg + self.lambda(g);
                    if d2 <= cutoff {
                        let t = lattice::add(&s, g);
                        if seen.insert(t.clone()) {
                            layers[d2 as usize].push(t);
                        }
                    }
                }
            }
        }
        let mut out: Vec<Point> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }
}
