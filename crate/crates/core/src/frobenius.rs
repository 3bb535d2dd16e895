//! Decomposition of Frobenius pushforwards `F^e_* M` into residue-class
//! summands, J-sets of isomorphism classes, and FFRT certificates.
//!
//! Integer model: `F^e_* M` splits over the residue classes `c ∈ [0, p^e)^n`
//! as the monomial modules `D_c = {(s - c)/p^e : s ∈ D_M, s ≡ c mod p^e}`,
//! which carries the module action `x·F^e_*u = F^e_*(x^{p^e}u)` onto
//! translation by `S` in reduced degrees.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{self, Point};
use crate::monomial::MonomialModule;
use crate::semigroup::AffineSemigroupRing;

/// One summand per residue class of `Z^n / qZ^n` that meets the degree set;
/// classes that miss it are omitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PushforwardDecomposition {
    pub e: u32,
    pub q: i64,
    /// residue -> reduced summand
    pub summands: BTreeMap<Point, MonomialModule>,
    /// canonical forms in first-encounter order over sorted residues
    pub iso_reps: Vec<MonomialModule>,
    /// residue -> (index into iso_reps, shift with `D_c = rep + shift`)
    pub iso_of_class: BTreeMap<Point, (usize, Point)>,
    /// λ-cutoff used for the certified generator enumeration
    pub sigma_cutoff: i64,
}

/// Deduplicated isomorphism classes of a pushforward, with multiplicities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct JSet {
    pub e: u32,
    pub classes: Vec<MonomialModule>,
    pub multiplicities: Vec<usize>,
}

impl JSet {
    /// J-set equality disregards multiplicities: it is a set of classes.
    pub fn same_classes(&self, other: &JSet) -> bool {
        self.classes == other.classes
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }
}

/// Witness that `J(F^a) = J(F^{a+b})`, with the verified stretch of the
/// forced periodicity recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FfrtCertificate {
    pub a: u32,
    pub b: u32,
    pub e_max: u32,
    /// largest k with `J(F^{a+kb}) = J(F^a)` verified
    pub periodicity_checked_to: u32,
    /// standing assumptions every certificate carries
    pub assumptions: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CertificateSearch {
    Found(FfrtCertificate),
    NotFoundWithinBound { e_max: u32 },
}

/// The assumption flag stamped on every certificate: indecomposables are
/// computed in the Z^n-graded category and carried to the complete local one.
pub const GRADED_ASSUMPTION: &str = "graded-indecomposables-assumed-stable-under-completion";

/// Residue-class decomposition of `F_* M` for the modulus `q`, with the
/// generator enumeration certified by the peeling bound: every reduced degree
/// of λ-degree above `(q-1)·Σλ(g_i)` (plus the generator offset) descends to
/// the enumerated window by subtracting ring generators, so the antichain of
/// the window generates each summand. `cutoff_override` may enlarge the
/// window; asking for less than the certified bound is refused.
pub fn decompose_module(
    ring: &AffineSemigroupRing,
    module: &MonomialModule,
    e: u32,
    cutoff_override: Option<i64>,
) -> Result<PushforwardDecomposition> {
    let q = ring.power(e);
    let certified = (q - 1) * ring.gen_degree_sum();
    let cutoff = match cutoff_override {
        None => certified,
        Some(c) if c < certified => {
            return Err(Error::Inconclusive(format!(
                "λ-cutoff {c} is below the certified generation bound {certified}; \
                 enlarge the cutoff"
            )))
        }
        Some(c) => c,
    };

    let sigma = ring.enumerate_up_to(cutoff);
    let mut pairs: Vec<(Point, Point)> = Vec::with_capacity(sigma.len() * module.gens().len().max(1));
    for u in module.gens() {
        for s in sigma.iter().map(|sg| lattice::add(u, sg)) {
            let c = lattice::mod_floor(&s, q);
            let d = lattice::div_exact(&s, &c, q);
            pairs.push((c, d));
        }
    }
    pairs.sort_unstable();
    let mut buckets: Vec<(Point, Vec<Point>)> = Vec::new();
    for (c, d) in pairs {
        match buckets.last_mut() {
            Some((cur, ds)) if *cur == c => ds.push(d),
            _ => buckets.push((c, vec![d])),
        }
    }

    let mut summands = BTreeMap::new();
    let mut iso_reps: Vec<MonomialModule> = Vec::new();
    let mut iso_of_class = BTreeMap::new();
    for (c, seed) in buckets {
        let m = MonomialModule::from_seed(ring, seed);
        let (canon, shift) = m.canonical_form(ring);
        let id = match iso_reps.iter().position(|r| *r == canon) {
            Some(i) => i,
            None => {
                iso_reps.push(canon);
                iso_reps.len() - 1
            }
        };
        iso_of_class.insert(c.clone(), (id, shift));
        summands.insert(c, m);
    }
    Ok(PushforwardDecomposition {
        e,
        q,
        summands,
        iso_reps,
        iso_of_class,
        sigma_cutoff: cutoff,
    })
}

/// `F^e_* R` decomposed by residue classes.
pub fn pushforward_decompose(
    ring: &AffineSemigroupRing,
    e: u32,
    cutoff_override: Option<i64>,
) -> Result<PushforwardDecomposition> {
    decompose_module(ring, &MonomialModule::unit(ring), e, cutoff_override)
}

impl PushforwardDecomposition {
    pub fn class_count(&self) -> usize {
        self.summands.len()
    }

    pub fn j_set(&self, ring: &AffineSemigroupRing) -> JSet {
        let mut counts: BTreeMap<MonomialModule, usize> = BTreeMap::new();
        for (_c, (id, _shift)) in &self.iso_of_class {
            *counts.entry(self.iso_reps[*id].clone()).or_insert(0) += 1;
        }
        let _ = ring;
        let mut classes = Vec::new();
        let mut multiplicities = Vec::new();
        for (m, k) in counts {
            classes.push(m);
            multiplicities.push(k);
        }
        JSet {
            e: self.e,
            classes,
            multiplicities,
        }
    }

    /// Verify `⨆_c (q·D_c + c) = S ∩ window` for the λ-window `≤ check_cutoff`.
    pub fn reconstruction_holds(&self, ring: &AffineSemigroupRing, check_cutoff: i64) -> bool {
        for s in ring.enumerate_up_to(check_cutoff) {
            let c = lattice::mod_floor(&s, self.q);
            let d = lattice::div_exact(&s, &c, self.q);
            match self.summands.get(&c) {
                None => return false,
                Some(m) => {
                    if !m.contains(ring, &d) {
                        return false;
                    }
                }
            }
        }
        // converse direction on the classes' boxed degree sets
        for (c, m) in &self.summands {
            for u in m.gens() {
                let s = lattice::add(&lattice::scale(self.q, u), c);
                if ring.lambda(&s) <= check_cutoff && !ring.contains(&s) {
                    return false;
                }
            }
        }
        true
    }
}

pub fn j_set(ring: &AffineSemigroupRing, e: u32) -> Result<JSet> {
    Ok(pushforward_decompose(ring, e, None)?.j_set(ring))
}

/// Scan pairs `(a, a+b)` with `a+b ≤ e_max`, ordered by `(a+b, a)`, for
/// `J(F^a) = J(F^{a+b})`. On a hit the forced periodicity
/// `J(F^{a+kb}) = J(F^a)` is verified across the whole explored range and a
/// violation is a hard error, not a report.
pub fn ffrt_certificate(ring: &AffineSemigroupRing, e_max: u32) -> Result<CertificateSearch> {
    if e_max < 1 {
        return Err(Error::InvalidParameter("e_max must be at least 1".into()));
    }
    let jsets: Vec<JSet> = (0..=e_max).map(|e| j_set(ring, e)).collect::<Result<_>>()?;
    for sum in 1..=e_max {
        for a in 0..sum {
            let b = sum - a;
            if jsets[a as usize].same_classes(&jsets[sum as usize]) {
                let mut checked_to = 1;
                let mut k = 2;
                while a + k * b <= e_max {
                    if !jsets[a as usize].same_classes(&jsets[(a + k * b) as usize]) {
                        return Err(Error::PeriodicityViolation { exponent: a + k * b });
                    }
                    checked_to = k;
                    k += 1;
                }
                return Ok(CertificateSearch::Found(FfrtCertificate {
                    a,
                    b,
                    e_max,
                    periodicity_checked_to: checked_to,
                    assumptions: vec![GRADED_ASSUMPTION.to_string()],
                }));
            }
        }
    }
    Ok(CertificateSearch::NotFoundWithinBound { e_max })
}

impl FfrtCertificate {
    /// `p`-power exponent of the level-`e` pushforward, `a + e·b`.
    pub fn exponent(&self, level: u32) -> u32 {
        self.a + level * self.b
    }
}
