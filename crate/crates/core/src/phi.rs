//! The operator algebra of twisted graded maps between Frobenius
//! pushforwards.
//!
//! With a certificate `(a, b)` fixed, level `e` means the pushforward
//! `F^{(e)} = F^{a+eb}`. A homogeneous map between summands of two levels is
//! a translation on reduced degrees; an operator is an `F_p`-combination of
//! such (source class, target class, translation) terms. Composition is
//! exact integer arithmetic on terms: matching classes compose and reduced
//! translations add.
//!
//! On an ambient monomial `x^v` a term `(c, C, t)` from exponent `q_i` to
//! `q_j` acts (whenever `v ≡ c mod q_i`) by
//!
//! ```text
//!     v  ↦  (q_j/q_i)·(v - c) + q_j·t + C,
//! ```
//!
//! the integer shadow of `x·F^e_*u = F^e_*(x^{p^e}u)`.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::{self, FfrtCertificate, PushforwardDecomposition};
use crate::lattice::{self, DegreeBox, Point};
use crate::monomial::{self, MonomialModule};
use crate::semigroup::AffineSemigroupRing;

/// Precomputed decompositions and canonical Hom tables for a certified ring.
/// All operator data is keyed by the certificate; operators from different
/// certificates refuse to compose.
pub struct PhiContext {
    ring: AffineSemigroupRing,
    cert: FfrtCertificate,
    max_level: u32,
    decomps: Vec<PushforwardDecomposition>,
    /// translation sets between canonical summand representatives;
    /// class-level sets are translates of these
    hom_canon: BTreeMap<(MonomialModule, MonomialModule), MonomialModule>,
}

impl PhiContext {
    pub fn new(ring: AffineSemigroupRing, cert: FfrtCertificate, max_level: u32) -> Result<Self> {
        let mut decomps = Vec::new();
        for e in 0..=max_level {
            decomps.push(frobenius::pushforward_decompose(&ring, cert.exponent(e), None)?);
        }
        let mut reps: Vec<MonomialModule> = Vec::new();
        for d in &decomps {
            for r in &d.iso_reps {
                if !reps.contains(r) {
                    reps.push(r.clone());
                }
            }
        }
        let mut hom_canon = BTreeMap::new();
        for a in &reps {
            for b in &reps {
                let t = monomial::hom_translation_set(&ring, a, b);
                hom_canon.insert((a.clone(), b.clone()), t);
            }
        }
        Ok(PhiContext {
            ring,
            cert,
            max_level,
            decomps,
            hom_canon,
        })
    }

    pub fn ring(&self) -> &AffineSemigroupRing {
        &self.ring
    }

    pub fn certificate(&self) -> &FfrtCertificate {
        &self.cert
    }

    pub fn max_level(&self) -> u32 {
        self.max_level
    }

    pub fn decomposition(&self, level: u32) -> &PushforwardDecomposition {
        &self.decomps[level as usize]
    }

    /// `p^{a + level·b}`.
    pub fn modulus(&self, level: u32) -> i64 {
        self.ring.power(self.cert.exponent(level))
    }

    pub(crate) fn class_data(&self, level: u32, class: &Point) -> Option<(&MonomialModule, &Point)> {
        let d = &self.decomps[level as usize];
        d.iso_of_class
            .get(class)
            .map(|(id, shift)| (&d.iso_reps[*id], shift))
    }

    pub(crate) fn hom_canon_between(&self, src: &MonomialModule, dst: &MonomialModule) -> &MonomialModule {
        &self.hom_canon[&(src.clone(), dst.clone())]
    }

    /// Full translation set between two summands, as a monomial module:
    /// `T(D_c, D_C) = T(rep_c, rep_C) + (shift_C - shift_c)`.
    pub fn hom_set(&self, src_level: u32, src_class: &Point, dst_level: u32, dst_class: &Point) -> Option<MonomialModule> {
        let (rs, ss) = self.class_data(src_level, src_class)?;
        let (rd, sd) = self.class_data(dst_level, dst_class)?;
        let canon = self.hom_canon.get(&(rs.clone(), rd.clone()))?;
        Some(canon.translate(&self.ring, &lattice::sub(sd, ss)))
    }

    /// Membership form of the Hom condition for a candidate translation.
    pub fn hom_contains(&self, src_level: u32, src_class: &Point, dst_level: u32, dst_class: &Point, t: &[i64]) -> bool {
        let src = match self.decomps[src_level as usize].summands.get(src_class) {
            Some(m) => m,
            None => return false,
        };
        let dst = match self.decomps[dst_level as usize].summands.get(dst_class) {
            Some(m) => m,
            None => return false,
        };
        monomial::is_hom_translation(&self.ring, src, dst, t)
    }
}

/// One homogeneous term of an operator.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Term {
    pub src_class: Point,
    pub dst_class: Point,
    pub t: Point,
    pub coeff: u64,
}

/// An `F_p`-combination of homogeneous summand-to-summand maps between two
/// levels. Elements of the operator algebra have `src_level ≤ dst_level`;
/// the descent direction appears in pairing witnesses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiOperator {
    pub cert_a: u32,
    pub cert_b: u32,
    pub src_level: u32,
    pub dst_level: u32,
    pub terms: Vec<Term>,
}

fn merge_terms(p: u64, raw: Vec<Term>) -> Vec<Term> {
    let mut acc: BTreeMap<(Point, Point, Point), u64> = BTreeMap::new();
    for term in raw {
        let k = (term.src_class, term.dst_class, term.t);
        let e = acc.entry(k).or_insert(0);
        *e = (*e + term.coeff) % p;
    }
    acc.into_iter()
        .filter(|(_, c)| *c != 0)
        .map(|((src_class, dst_class, t), coeff)| Term {
            src_class,
            dst_class,
            t,
            coeff,
        })
        .collect()
}

impl PhiOperator {
    fn build(ctx: &PhiContext, src_level: u32, dst_level: u32, terms: Vec<Term>) -> Result<Self> {
        let p = ctx.ring.p() as u64;
        for term in &terms {
            if term.coeff == 0 || term.coeff >= p {
                return Err(Error::InvalidParameter(format!(
                    "coefficient {} out of F_{p}*",
                    term.coeff
                )));
            }
            if !ctx.hom_contains(src_level, &term.src_class, dst_level, &term.dst_class, &term.t) {
                return Err(Error::InvalidTranslation { t: term.t.clone() });
            }
        }
        Ok(PhiOperator {
            cert_a: ctx.cert.a,
            cert_b: ctx.cert.b,
            src_level,
            dst_level,
            terms: merge_terms(p, terms),
        })
    }

    /// An element of `Hom(F^{(i)}, F^{(j)})` with `i ≤ j`; every term is
    /// checked to be a valid translation between the named summands.
    pub fn new(ctx: &PhiContext, src_level: u32, dst_level: u32, terms: Vec<Term>) -> Result<Self> {
        if src_level > dst_level {
            return Err(Error::InvalidParameter(
                "operator levels must satisfy src ≤ dst; descent maps arise only as pairing witnesses".into(),
            ));
        }
        Self::build(ctx, src_level, dst_level, terms)
    }

    /// Descent-direction map used in pairing witnesses.
    pub fn descent(ctx: &PhiContext, src_level: u32, dst_level: u32, terms: Vec<Term>) -> Result<Self> {
        Self::build(ctx, src_level, dst_level, terms)
    }

    pub fn zero(ctx: &PhiContext, src_level: u32, dst_level: u32) -> Self {
        PhiOperator {
            cert_a: ctx.cert.a,
            cert_b: ctx.cert.b,
            src_level,
            dst_level,
            terms: Vec::new(),
        }
    }

    /// The identity of `End(F^{(level)})`: the zero translation on every class.
    pub fn identity(ctx: &PhiContext, level: u32) -> Self {
        let classes: Vec<Point> = ctx.decomposition(level).summands.keys().cloned().collect();
        let terms = classes
            .into_iter()
            .map(|c| Term {
                src_class: c.clone(),
                dst_class: c,
                t: vec![0; ctx.ring.rank()],
                coeff: 1,
            })
            .collect();
        PhiOperator {
            cert_a: ctx.cert.a,
            cert_b: ctx.cert.b,
            src_level: level,
            dst_level: level,
            terms,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

/// A finite `F_p`-combination of monomials of the ring, exponents in `S`.
pub type RingElement = BTreeMap<Point, u64>;

pub fn ring_element(ring: &AffineSemigroupRing, monomials: &[(Point, u64)]) -> Result<RingElement> {
    let mut out = RingElement::new();
    let p = ring.p() as u64;
    for (s, c) in monomials {
        if !ring.contains(s) {
            return Err(Error::MonomialOutsideRing(s.clone()));
        }
        let e = out.entry(s.clone()).or_insert(0);
        *e = (*e + c) % p;
    }
    out.retain(|_, c| *c != 0);
    Ok(out)
}

/// Act on a ring element monomial-by-monomial: each `x^s` routes to the
/// terms whose source class is `s mod q_i`.
pub fn apply(ctx: &PhiContext, op: &PhiOperator, x: &RingElement) -> RingElement {
    let p = ctx.ring.p() as u64;
    let qi = ctx.modulus(op.src_level);
    let qj = ctx.modulus(op.dst_level);
    let mut out = RingElement::new();
    for (s, coeff_in) in x {
        let c = lattice::mod_floor(s, qi);
        let d = lattice::div_exact(s, &c, qi);
        for term in op.terms.iter().filter(|t| t.src_class == c) {
            let red = lattice::add(&d, &term.t);
            let target = lattice::add(&lattice::scale(qj, &red), &term.dst_class);
            debug_assert!(ctx.ring.contains(&target));
            let e = out.entry(target).or_insert(0);
            *e = (*e + coeff_in * term.coeff) % p;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

/// Termwise composition; requires `inner.dst_level == outer.src_level` and a
/// shared certificate. Reduced translations add.
pub fn compose(ctx: &PhiContext, outer: &PhiOperator, inner: &PhiOperator) -> Result<PhiOperator> {
    if (outer.cert_a, outer.cert_b) != (inner.cert_a, inner.cert_b) {
        return Err(Error::CertificateMismatch(
            inner.cert_a,
            inner.cert_b,
            outer.cert_a,
            outer.cert_b,
        ));
    }
    if inner.dst_level != outer.src_level {
        return Err(Error::LevelMismatch {
            inner: inner.dst_level,
            outer: outer.src_level,
        });
    }
    let p = ctx.ring.p() as u64;
    let mut raw = Vec::new();
    for ti in &inner.terms {
        for to in &outer.terms {
            if ti.dst_class == to.src_class {
                raw.push(Term {
                    src_class: ti.src_class.clone(),
                    dst_class: to.dst_class.clone(),
                    t: lattice::add(&ti.t, &to.t),
                    coeff: ti.coeff * to.coeff % p,
                });
            }
        }
    }
    Ok(PhiOperator {
        cert_a: inner.cert_a,
        cert_b: inner.cert_b,
        src_level: inner.src_level,
        dst_level: outer.dst_level,
        terms: merge_terms(p, raw),
    })
}

/// The twisted linearity contract `op(x^{q_i·w + s}) = x^{q_j·w}·op(x^s)`
/// for `w, s ∈ S`, checked on one pair.
pub fn twisted_linearity_holds(ctx: &PhiContext, op: &PhiOperator, w: &Point, s: &Point) -> bool {
    let qi = ctx.modulus(op.src_level);
    let qj = ctx.modulus(op.dst_level);
    let lhs_arg = ring_element(&ctx.ring, &[(lattice::add(&lattice::scale(qi, w), s), 1)]).unwrap();
    let lhs = apply(ctx, op, &lhs_arg);
    let rhs_base = apply(ctx, op, &ring_element(&ctx.ring, &[(s.clone(), 1)]).unwrap());
    let shift = lattice::scale(qj, w);
    let rhs: RingElement = rhs_base
        .into_iter()
        .map(|(deg, c)| (lattice::add(&deg, &shift), c))
        .collect();
    lhs == rhs
}

/// One witness pair factoring the identity of a target summand through a
/// source summand of the same isomorphism class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClassWitness {
    pub target_class: Point,
    pub via_class: Point,
    /// translation of the descent map `N_C → M_c`
    pub alpha_translation: Point,
    /// translation of the section `M_c → N_C`
    pub beta_translation: Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PairingOutcome {
    Witnesses(Vec<ClassWitness>),
    Fail { unmatched: MonomialModule },
}

impl PairingOutcome {
    pub fn succeeded(&self) -> bool {
        matches!(self, PairingOutcome::Witnesses(_))
    }
}

/// For every summand `N` of the target decomposition, factor `id_N` through
/// a summand of the source decomposition. Witnesses exist exactly when every
/// target isomorphism class occurs among the source classes.
pub fn pairing_contains_identity(
    ring: &AffineSemigroupRing,
    source: &PushforwardDecomposition,
    target: &PushforwardDecomposition,
) -> PairingOutcome {
    let mut witnesses = Vec::new();
    for (class_c, (id, shift)) in &target.iso_of_class {
        let rep = &target.iso_reps[*id];
        let found = source.iso_of_class.iter().find_map(|(c, (sid, sshift))| {
            if source.iso_reps[*sid] == *rep {
                Some((c.clone(), sshift.clone()))
            } else {
                None
            }
        });
        match found {
            Some((via, sshift)) => {
                witnesses.push(ClassWitness {
                    target_class: class_c.clone(),
                    via_class: via,
                    alpha_translation: lattice::sub(&sshift, shift),
                    beta_translation: lattice::sub(shift, &sshift),
                });
            }
            None => {
                let _ = ring;
                return PairingOutcome::Fail {
                    unmatched: rep.clone(),
                };
            }
        }
    }
    PairingOutcome::Witnesses(witnesses)
}

/// Check that composition `Hom(F^{(mid)}, F^{(hi)}) ∘ Hom(F^{(lo)}, F^{(mid)})`
/// reaches every homogeneous element of `Hom(F^{(lo)}, F^{(hi)})`. Because
/// translation sets between classes are translates of the canonical tables,
/// the check collapses to isomorphism-class triples and is exact.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TensorStep {
    pub lo: u32,
    pub mid: u32,
    pub hi: u32,
    pub surjective: bool,
}

pub fn tensor_step_surjective(ctx: &PhiContext, lo: u32, mid: u32, hi: u32) -> TensorStep {
    let ring = &ctx.ring;
    let lo_reps = &ctx.decomps[lo as usize].iso_reps;
    let mid_reps = &ctx.decomps[mid as usize].iso_reps;
    let hi_reps = &ctx.decomps[hi as usize].iso_reps;
    let mut surjective = true;
    for r0 in lo_reps {
        for r2 in hi_reps {
            let direct = &ctx.hom_canon[&(r0.clone(), r2.clone())];
            let mut reach = MonomialModule::zero();
            for r1 in mid_reps {
                let first = &ctx.hom_canon[&(r0.clone(), r1.clone())];
                let second = &ctx.hom_canon[&(r1.clone(), r2.clone())];
                reach = reach.union(ring, &first.plus(ring, second));
            }
            if reach != *direct {
                surjective = false;
            }
        }
    }
    TensorStep {
        lo,
        mid,
        hi,
        surjective,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DescentReport {
    pub level_lo: u32,
    pub level_hi: u32,
    pub forward: PairingOutcome,
    pub backward: PairingOutcome,
    pub tensor_steps: Vec<TensorStep>,
    pub pass: bool,
}

/// Witness-level verification of the descent equivalence between levels `i`
/// and `i+s`: both pairing directions succeed, and every intermediate tensor
/// splitting of `Hom(F^{(0)}, F^{(e)})` is surjective.
pub fn descent_pairing_check(ctx: &PhiContext, i: u32, s: u32) -> Result<DescentReport> {
    let hi = i + s;
    if hi > ctx.max_level {
        return Err(Error::InvalidParameter(format!(
            "level {hi} beyond context maximum {}",
            ctx.max_level
        )));
    }
    let forward = pairing_contains_identity(&ctx.ring, ctx.decomposition(i), ctx.decomposition(hi));
    let backward = pairing_contains_identity(&ctx.ring, ctx.decomposition(hi), ctx.decomposition(i));
    let mut tensor_steps = Vec::new();
    for e in 1..=ctx.max_level {
        tensor_steps.push(tensor_step_surjective(ctx, 0, e - 1, e));
    }
    let pass = forward.succeeded() && backward.succeeded() && tensor_steps.iter().all(|t| t.surjective);
    Ok(DescentReport {
        level_lo: i,
        level_hi: hi,
        forward,
        backward,
        tensor_steps,
        pass,
    })
}

/// All homogeneous operator terms `(c, C, t)` between two levels whose
/// translation lies in the window; the per-degree basis of the Hom bimodule.
pub fn terms_in_box(ctx: &PhiContext, src_level: u32, dst_level: u32, bx: &DegreeBox) -> Vec<(Point, Point, Point)> {
    let mut out = Vec::new();
    let src_classes: Vec<Point> = ctx.decomposition(src_level).summands.keys().cloned().collect();
    let dst_classes: Vec<Point> = ctx.decomposition(dst_level).summands.keys().cloned().collect();
    for c in &src_classes {
        for class_c in &dst_classes {
            let t_set = ctx
                .hom_set(src_level, c, dst_level, class_c)
                .expect("classes exist");
            for t in t_set.enumerate_in_box(&ctx.ring, bx) {
                out.push((c.clone(), class_c.clone(), t));
            }
        }
    }
    out
}

/// Graded-piece dimensions of `End(F^{(level)})` by absolute degree shift,
/// inside a window: each class pair contributes at most one translation per
/// shift, so every piece is finite-dimensional.
pub fn end_graded_piece_dims(ctx: &PhiContext, level: u32, bx: &DegreeBox) -> BTreeMap<Point, usize> {
    let q = ctx.modulus(level);
    let classes: Vec<Point> = ctx.decomposition(level).summands.keys().cloned().collect();
    let mut dims: BTreeMap<Point, usize> = BTreeMap::new();
    for shift in bx.iter() {
        let mut dim = 0;
        for c in &classes {
            for class_c in &classes {
                // q·t + C - c = shift  ⇒  t determined when divisible
                let num = lattice::sub(&lattice::add(&shift, c), class_c);
                if num.iter().all(|x| x.rem_euclid(q) == 0) {
                    let t: Point = num.iter().map(|x| x / q).collect();
                    if ctx.hom_contains(level, c, level, class_c, &t) {
                        dim += 1;
                    }
                }
            }
        }
        if dim > 0 {
            dims.insert(shift, dim);
        }
    }
    dims
}
