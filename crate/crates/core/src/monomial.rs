//! `Z^n`-graded rank-≤1 modules over an affine semigroup ring, stored through
//! their antichain of minimal generators. The degree set is
//! `D = ⋃_i (u_i + S)`; every graded piece has dimension ≤ 1 over `F_p`.
//!
//! These are the building blocks for everything else: summands of Frobenius
//! pushforwards, translation sets of graded Homs, and root-level submodules.

use serde::{Deserialize, Serialize};

use crate::diophantine;
use crate::lattice::{self, DegreeBox, Point};
use crate::semigroup::AffineSemigroupRing;

/// Rank-≤1 graded module given by minimal generators (pairwise incomparable:
/// `u_i - u_j ∉ S`). The empty generator list is the zero module.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MonomialModule {
    gens: Vec<Point>,
}

/// Canonical generator order: by λ-degree, ties broken lexicographically.
fn sort_key(ring: &AffineSemigroupRing, u: &Point) -> (i64, Point) {
    (ring.lambda(u), u.clone())
}

impl MonomialModule {
    /// Antichain-reduce a seed set; the S-closure of the result equals the
    /// S-closure of the seed.
    pub fn from_seed(ring: &AffineSemigroupRing, seed: Vec<Point>) -> Self {
        let mut pts = seed;
        pts.sort_by_key(|u| sort_key(ring, u));
        pts.dedup();
        let mut kept: Vec<Point> = Vec::new();
        for u in pts {
            // sorted by λ-degree, so a dominator of u must already be kept
            if !kept.iter().any(|w| ring.contains(&lattice::sub(&u, w))) {
                kept.push(u);
            }
        }
        MonomialModule { gens: kept }
    }

    pub fn zero() -> Self {
        MonomialModule { gens: Vec::new() }
    }

    /// The ring itself as a module: single generator at the origin.
    pub fn unit(ring: &AffineSemigroupRing) -> Self {
        MonomialModule {
            gens: vec![vec![0; ring.rank()]],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[Point] {
        &self.gens
    }

    pub fn contains(&self, ring: &AffineSemigroupRing, v: &[i64]) -> bool {
        self.gens.iter().any(|u| ring.contains(&lattice::sub(v, u)))
    }

    pub fn contains_module(&self, ring: &AffineSemigroupRing, other: &Self) -> bool {
        other.gens.iter().all(|u| self.contains(ring, u))
    }

    pub fn translate(&self, ring: &AffineSemigroupRing, t: &[i64]) -> Self {
        let gens = self.gens.iter().map(|u| lattice::add(u, t)).collect();
        // translation preserves incomparability and the sort order
        let _ = ring;
        MonomialModule { gens }
    }

    /// Translate the λ-minimal, lexicographically smallest generator to the
    /// origin; returns the canonical form and the anchor that was subtracted.
    pub fn canonical_form(&self, ring: &AffineSemigroupRing) -> (Self, Point) {
        match self.gens.first() {
            None => (self.clone(), vec![0; ring.rank()]),
            Some(anchor) => {
                let anchor = anchor.clone();
                (self.translate(ring, &lattice::scale(-1, &anchor)), anchor)
            }
        }
    }

    /// `t` with `D_other = t + D_self`, if one exists. For rank-1 graded
    /// modules this decides module isomorphism, exactly.
    pub fn translation_isomorphic(&self, ring: &AffineSemigroupRing, other: &Self) -> Option<Point> {
        if self.gens.len() != other.gens.len() {
            return None;
        }
        if self.gens.is_empty() {
            return Some(vec![0; ring.rank()]);
        }
        let t = lattice::sub(&other.gens[0], &self.gens[0]);
        if self.translate(ring, &t) == *other {
            Some(t)
        } else {
            None
        }
    }

    /// Union of degree sets.
    pub fn union(&self, ring: &AffineSemigroupRing, other: &Self) -> Self {
        let mut seed = self.gens.clone();
        seed.extend(other.gens.iter().cloned());
        MonomialModule::from_seed(ring, seed)
    }

    /// Minkowski sum of degree sets: `{u + w} + S` over generator pairs.
    pub fn plus(&self, ring: &AffineSemigroupRing, other: &Self) -> Self {
        let mut seed = Vec::new();
        for u in &self.gens {
            for w in &other.gens {
                seed.push(lattice::add(u, w));
            }
        }
        MonomialModule::from_seed(ring, seed)
    }

    /// Exact intersection of degree sets. Pairwise translate intersections
    /// are solved as linear Diophantine systems; minimality of the output is
    /// guaranteed by minimality of their solutions.
    pub fn intersect(&self, ring: &AffineSemigroupRing, other: &Self) -> Self {
        let mut seed = Vec::new();
        for a in &self.gens {
            for b in &other.gens {
                seed.extend(intersect_translates(ring, a, b));
            }
        }
        MonomialModule::from_seed(ring, seed)
    }

    /// Degree set within a finite window, sorted; for oracles and reports.
    pub fn enumerate_in_box(&self, ring: &AffineSemigroupRing, bx: &DegreeBox) -> Vec<Point> {
        bx.iter().filter(|v| self.contains(ring, v)).collect()
    }
}

/// Minimal elements of `(a + S) ∩ (b + S)`.
pub fn intersect_translates(ring: &AffineSemigroupRing, a: &[i64], b: &[i64]) -> Vec<Point> {
    let delta = lattice::sub(b, a);
    let mut cols: Vec<Point> = ring.generators().to_vec();
    cols.extend(ring.generators().iter().map(|g| lattice::scale(-1, g)));
    let sols = diophantine::minimal_solutions(&cols, &delta);
    let m = ring.generators().len();
    sols.iter()
        .map(|z| {
            let mut t = a.to_vec();
            for (i, g) in ring.generators().iter().enumerate() {
                t = lattice::add(&t, &lattice::scale(z[i], g));
            }
            let _ = m;
            t
        })
        .collect()
}

/// Translation set of the graded Hom: `T = {t : t + D_M ⊆ D_N}`, returned as
/// a monomial module (it is S-closed). Every homogeneous R-linear map
/// `M → N` is a scalar multiple of a translation in `T`. Exact.
pub fn hom_translation_set(
    ring: &AffineSemigroupRing,
    source: &MonomialModule,
    target: &MonomialModule,
) -> MonomialModule {
    if source.is_zero() {
        // Hom(0, N) = 0
        return MonomialModule::zero();
    }
    let mut result: Option<MonomialModule> = None;
    for u in source.gens() {
        let minus_u = lattice::scale(-1, u);
        let shifted = target.translate(ring, &minus_u); // D_N - u
        result = Some(match result {
            None => shifted,
            Some(w) => w.intersect(ring, &shifted),
        });
    }
    result.unwrap()
}

/// Membership form of the Hom condition; used to validate operator terms
/// without materializing the full translation set.
pub fn is_hom_translation(
    ring: &AffineSemigroupRing,
    source: &MonomialModule,
    target: &MonomialModule,
    t: &[i64],
) -> bool {
    !source.is_zero() && source.gens().iter().all(|u| target.contains(ring, &lattice::add(t, u)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cusp() -> AffineSemigroupRing {
        AffineSemigroupRing::new(2, 1, vec![vec![2], vec![3]], None).unwrap()
    }

    fn veronese2() -> AffineSemigroupRing {
        AffineSemigroupRing::new(2, 2, vec![vec![2, 0], vec![1, 1], vec![0, 2]], None).unwrap()
    }

    fn poly(n: usize) -> AffineSemigroupRing {
        let gens = (0..n)
            .map(|i| {
                let mut g = vec![0; n];
                g[i] = 1;
                g
            })
            .collect();
        AffineSemigroupRing::new(2, n, gens, None).unwrap()
    }

    #[test]
    fn antichain_reduction_cusp_seed() {
        let r = cusp();
        let m = MonomialModule::from_seed(&r, (2..=9).map(|v| vec![v]).collect());
        assert_eq!(m.gens(), &[vec![2], vec![3]]);
    }

    #[test]
    fn normalization_generators() {
        // D = N as a <2,3>-module: brute force the antichain in [0,12]
        let r = cusp();
        let m = MonomialModule::from_seed(&r, (0..=12).map(|v| vec![v]).collect());
        assert_eq!(m.gens(), &[vec![0], vec![1]]);
    }

    #[test]
    fn odd_part_generators_veronese() {
        let r = veronese2();
        let seed: Vec<Point> = DegreeBox::cube(2, 0, 6)
            .iter()
            .filter(|v| (v[0] + v[1]) % 2 == 1)
            .collect();
        let m = MonomialModule::from_seed(&r, seed);
        assert_eq!(m.gens(), &[vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn minimal_generators_idempotent() {
        let r = veronese2();
        let m = MonomialModule::from_seed(
            &r,
            vec![vec![1, 0], vec![0, 1], vec![1, 2], vec![3, 0], vec![2, 1]],
        );
        let closure: Vec<Point> = m.enumerate_in_box(&r, &DegreeBox::cube(2, 0, 8));
        let again = MonomialModule::from_seed(&r, closure);
        assert_eq!(m, again);
    }

    #[test]
    fn hom_end_of_ring_is_semigroup() {
        let r = cusp();
        let unit = MonomialModule::unit(&r);
        let t = hom_translation_set(&r, &unit, &unit);
        assert_eq!(t.gens(), &[vec![0]]);
    }

    #[test]
    fn hom_normalization_to_ring_is_conductor_set() {
        // t + N ⊆ <2,3> iff t ≥ 2; as a module over <2,3> the antichain of
        // {2,3,4,...} is {2,3}
        let r = cusp();
        let norm = MonomialModule::from_seed(&r, vec![vec![0], vec![1]]);
        let t = hom_translation_set(&r, &norm, &MonomialModule::unit(&r));
        assert_eq!(t.gens(), &[vec![2], vec![3]]);
        // brute-force oracle over a window
        for v in -6..=12i64 {
            let expect = (0..=12).all(|w| r.contains(&[v + w]) || !norm.contains(&r, &[w]));
            assert_eq!(t.contains(&r, &[v]), expect && v >= 2, "t = {v}");
        }
    }

    #[test]
    fn hom_odd_part_to_ring_veronese() {
        let r = veronese2();
        let odd = MonomialModule::from_seed(&r, vec![vec![1, 0], vec![0, 1]]);
        let t = hom_translation_set(&r, &odd, &MonomialModule::unit(&r));
        assert_eq!(t.gens(), &[vec![0, 1], vec![1, 0]]);
        // brute force over the window [-4,4]^2
        let unit = MonomialModule::unit(&r);
        for cand in DegreeBox::cube(2, -4, 4).iter() {
            let ok = odd
                .enumerate_in_box(&r, &DegreeBox::cube(2, 0, 8))
                .iter()
                .all(|d| unit.contains(&r, &lattice::add(&cand, d)));
            assert_eq!(t.contains(&r, &cand), ok, "candidate {cand:?}");
        }
    }

    #[test]
    fn hom_set_of_zero_module() {
        let r = cusp();
        let z = MonomialModule::zero();
        let unit = MonomialModule::unit(&r);
        assert!(hom_translation_set(&r, &z, &unit).is_zero());
        assert!(hom_translation_set(&r, &unit, &z).is_zero());
    }

    #[test]
    fn translation_iso_basic() {
        let r = cusp();
        let unit = MonomialModule::unit(&r);
        let shifted = unit.translate(&r, &[3]);
        assert_eq!(unit.translation_isomorphic(&r, &shifted), Some(vec![3]));

        let a = MonomialModule::from_seed(&r, vec![vec![1]]); // {1,3,4,...}
        let b = MonomialModule::from_seed(&r, vec![vec![0]]); // S
        assert_eq!(a.translation_isomorphic(&r, &b), Some(vec![-1]));
    }

    #[test]
    fn translation_iso_counts_generators() {
        let r = veronese2();
        let odd = MonomialModule::from_seed(&r, vec![vec![1, 0], vec![0, 1]]);
        let unit = MonomialModule::unit(&r);
        assert_eq!(odd.translation_isomorphic(&r, &unit), None);
    }

    #[test]
    fn composition_compatibility_of_hom_sets() {
        // t ∈ Hom(M,N), s ∈ Hom(N,P) ⟹ s + t ∈ Hom(M,P)
        let r = veronese2();
        let m = MonomialModule::from_seed(&r, vec![vec![1, 0], vec![0, 1]]);
        let n = MonomialModule::unit(&r);
        let p = MonomialModule::from_seed(&r, vec![vec![-1, 1]]);
        let t_mn = hom_translation_set(&r, &m, &n);
        let t_np = hom_translation_set(&r, &n, &p);
        let t_mp = hom_translation_set(&r, &m, &p);
        for t in t_mn.enumerate_in_box(&r, &DegreeBox::cube(2, -3, 3)) {
            for s in t_np.enumerate_in_box(&r, &DegreeBox::cube(2, -3, 3)) {
                assert!(t_mp.contains(&r, &lattice::add(&s, &t)));
            }
        }
    }

    #[test]
    fn intersection_matches_boxed_enumeration() {
        let r = poly(2);
        let a = MonomialModule::from_seed(&r, vec![vec![2, 0], vec![0, 3]]);
        let b = MonomialModule::from_seed(&r, vec![vec![1, 1]]);
        let i = a.intersect(&r, &b);
        let bx = DegreeBox::cube(2, 0, 7);
        let brute: Vec<Point> = bx
            .iter()
            .filter(|v| a.contains(&r, v) && b.contains(&r, v))
            .collect();
        assert_eq!(i.enumerate_in_box(&r, &bx), brute);
        // N^2 joins: componentwise max
        assert_eq!(i.gens(), &[vec![2, 1], vec![1, 3]]);
    }

    #[test]
    fn intersection_matches_boxed_enumeration_cusp() {
        let r = cusp();
        let a = MonomialModule::from_seed(&r, vec![vec![0]]);
        let b = MonomialModule::from_seed(&r, vec![vec![-1]]);
        let i = a.intersect(&r, &b);
        let bx = DegreeBox::new(vec![-2], vec![14]);
        let brute: Vec<Point> = bx
            .iter()
            .filter(|v| a.contains(&r, v) && b.contains(&r, v))
            .collect();
        assert_eq!(i.enumerate_in_box(&r, &bx), brute);
    }

    #[test]
    fn end_is_cancellative_monoid_sanity() {
        // rank-1 indecomposability axiom: End(M) translation sets live in a
        // cancellative monoid, i.e. Hom(M,M) + Hom(M,M) ⊆ Hom(M,M) and the
        // zero translation is present
        let r = veronese2();
        for m in [
            MonomialModule::unit(&r),
            MonomialModule::from_seed(&r, vec![vec![1, 0], vec![0, 1]]),
        ] {
            let e = hom_translation_set(&r, &m, &m);
            assert!(e.contains(&r, &vec![0, 0]));
            let sum = e.plus(&r, &e);
            assert!(e.contains_module(&r, &sum));
        }
    }
}
