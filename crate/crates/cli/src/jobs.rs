//! Job model: parsed parameters, dispatch to library operations, and the
//! per-command report payloads. One job per process invocation; identical
//! jobs produce byte-identical reports.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use ffrt_core::error::Error;
use ffrt_core::frobenius::{self, CertificateSearch};
use ffrt_core::lattice::{DegreeBox, Point};
use ffrt_core::localcoh;
use ffrt_core::phi::{self, PhiContext};
use ffrt_core::report::{self, Report, CertificateOutcome};
use ffrt_core::semigroup::{AffineSemigroupRing, RingSpec};
use ffrt_core::unitmod::{self, Ambient, RootPresentation};
use ffrt_core::Result;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCONCLUSIVE: i32 = 2;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Job {
    pub ring: RingSpec,
    pub command: String,
    pub params: BTreeMap<String, Value>,
}

impl Job {
    /// Canonical identity of the job, versioned; the cache key hashes this.
    pub fn canonical(&self) -> String {
        let v = json!({
            "schema": report::SCHEMA_VERSION,
            "tool_version": report::TOOL_VERSION,
            "ring": self.ring,
            "command": self.command,
            "params": self.params,
        });
        serde_json::to_string(&v).expect("job serializes")
    }
}

// ---------------------------------------------------------------------------
// parameter parsing
// ---------------------------------------------------------------------------

pub fn parse_vector(s: &str, n: usize) -> Result<Point> {
    let t = s.trim();
    let inner = if t.starts_with('(') && t.ends_with(')') {
        &t[1..t.len() - 1]
    } else if t.starts_with('[') && t.ends_with(']') {
        &t[1..t.len() - 1]
    } else {
        t
    };
    let parts: Vec<&str> = inner.split(',').map(|x| x.trim()).collect();
    let coords: Vec<i64> = parts
        .iter()
        .map(|x| {
            x.parse::<i64>()
                .map_err(|_| Error::InvalidParameter(format!("bad integer `{x}` in vector `{s}`")))
        })
        .collect::<Result<_>>()?;
    if coords.len() != n {
        return Err(Error::InvalidParameter(format!(
            "vector `{s}` has {} coordinates, ring has rank {n}",
            coords.len()
        )));
    }
    Ok(coords)
}

/// A monomial in the coordinate variables `x,y,z,w` (`x^2y`, `xy^3`, `1`) or
/// an explicit exponent vector `(a,b,...)`.
pub fn parse_monomial(s: &str, n: usize) -> Result<Point> {
    let t = s.trim();
    if t.starts_with('(') || t.starts_with('[') || t.parse::<i64>().is_ok() && n == 1 {
        if t == "1" {
            return Ok(vec![0; n]);
        }
        return parse_vector(t, n);
    }
    if t == "1" {
        return Ok(vec![0; n]);
    }
    let vars = ['x', 'y', 'z', 'w'];
    let mut out = vec![0i64; n];
    let chars: Vec<char> = t.chars().collect();
    let mut idx = 0;
    while idx < chars.len() {
        let c = chars[idx];
        let var = vars
            .iter()
            .position(|&v| v == c)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown variable `{c}` in `{s}`")))?;
        if var >= n {
            return Err(Error::InvalidParameter(format!(
                "variable `{c}` exceeds ring rank {n}"
            )));
        }
        idx += 1;
        let mut exp = 1i64;
        if idx < chars.len() && chars[idx] == '^' {
            idx += 1;
            let start = idx;
            while idx < chars.len() && (chars[idx].is_ascii_digit()) {
                idx += 1;
            }
            exp = chars[start..idx]
                .iter()
                .collect::<String>()
                .parse::<i64>()
                .map_err(|_| Error::InvalidParameter(format!("bad exponent in `{s}`")))?;
        }
        out[var] += exp;
    }
    Ok(out)
}

/// Split on `;` always, and on `,` when it is outside parentheses.
fn split_list(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut depth = 0usize;
    let mut cur = String::new();
    for c in s.chars() {
        match c {
            '(' | '[' => {
                depth += 1;
                cur.push(c);
            }
            ')' | ']' => {
                depth = depth.saturating_sub(1);
                cur.push(c);
            }
            ';' => {
                out.push(cur.clone());
                cur.clear();
            }
            ',' if depth == 0 => {
                out.push(cur.clone());
                cur.clear();
            }
            _ => cur.push(c),
        }
    }
    if !cur.trim().is_empty() {
        out.push(cur);
    }
    out.into_iter().map(|x| x.trim().to_string()).filter(|x| !x.is_empty()).collect()
}

pub fn parse_monomial_list(s: &str, n: usize) -> Result<Vec<Point>> {
    split_list(s).iter().map(|t| parse_monomial(t, n)).collect()
}

pub fn parse_box(s: &str, n: usize) -> Result<DegreeBox> {
    let parts: Vec<&str> = s.split("..").collect();
    if parts.len() != 2 {
        return Err(Error::InvalidParameter(format!(
            "box `{s}` must have the form LOWER..UPPER"
        )));
    }
    let lower = parse_vector(parts[0], n)?;
    let upper = parse_vector(parts[1], n)?;
    if lower.iter().zip(&upper).any(|(l, u)| l > u) {
        return Err(Error::InvalidParameter(format!("box `{s}` has lower > upper")));
    }
    Ok(DegreeBox::new(lower, upper))
}

/// Iterated specs `IDEAL@DEGREE;IDEAL@DEGREE;...`, outermost functor first.
pub fn parse_specs(s: &str, n: usize) -> Result<Vec<(Vec<Point>, usize)>> {
    let mut out = Vec::new();
    for part in s.split(';') {
        let part = part.trim();
        if part.is_empty() {
            continue;
        }
        let (ideal_str, deg_str) = part.rsplit_once('@').ok_or_else(|| {
            Error::InvalidParameter(format!("spec `{part}` must be IDEAL@DEGREE"))
        })?;
        let ideal = parse_monomial_list(ideal_str, n)?;
        let degree: usize = deg_str
            .trim()
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad degree in spec `{part}`")))?;
        out.push((ideal, degree));
    }
    if out.is_empty() {
        return Err(Error::InvalidParameter("empty spec list".into()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// parameter access on the canonicalized job
// ---------------------------------------------------------------------------

fn need<'a>(job: &'a Job, key: &str) -> Result<&'a Value> {
    job.params
        .get(key)
        .ok_or_else(|| Error::InvalidParameter(format!("missing parameter `{key}`")))
}

fn get_u32(job: &Job, key: &str) -> Result<u32> {
    need(job, key)?
        .as_u64()
        .map(|x| x as u32)
        .ok_or_else(|| Error::InvalidParameter(format!("parameter `{key}` must be an integer")))
}

fn get_usize(job: &Job, key: &str) -> Result<usize> {
    need(job, key)?
        .as_u64()
        .map(|x| x as usize)
        .ok_or_else(|| Error::InvalidParameter(format!("parameter `{key}` must be an integer")))
}

fn get_point(job: &Job, key: &str) -> Result<Point> {
    serde_json::from_value(need(job, key)?.clone())
        .map_err(|_| Error::InvalidParameter(format!("parameter `{key}` must be a vector")))
}

fn get_points(job: &Job, key: &str) -> Result<Vec<Point>> {
    serde_json::from_value(need(job, key)?.clone())
        .map_err(|_| Error::InvalidParameter(format!("parameter `{key}` must be a vector list")))
}

fn get_box(job: &Job, key: &str) -> Result<DegreeBox> {
    serde_json::from_value(need(job, key)?.clone())
        .map_err(|_| Error::InvalidParameter(format!("parameter `{key}` must be a degree box")))
}

fn get_specs(job: &Job, key: &str) -> Result<Vec<(Vec<Point>, usize)>> {
    serde_json::from_value(need(job, key)?.clone())
        .map_err(|_| Error::InvalidParameter(format!("parameter `{key}` must be a spec list")))
}

// ---------------------------------------------------------------------------
// dispatch
// ---------------------------------------------------------------------------

fn certified_context(
    ring: &AffineSemigroupRing,
    e_max: u32,
    max_level: u32,
) -> Result<std::result::Result<PhiContext, u32>> {
    match frobenius::ffrt_certificate(ring, e_max)? {
        CertificateSearch::Found(cert) => Ok(Ok(PhiContext::new(ring.clone(), cert, max_level)?)),
        CertificateSearch::NotFoundWithinBound { e_max } => Ok(Err(e_max)),
    }
}

#[derive(Serialize)]
struct RootPayload {
    ambient: Ambient,
    /// minimal ring-module generators of the root's degree set
    module_generators: Vec<Point>,
    root_generators: Vec<Point>,
    check: unitmod::RootCheckReport,
    certificate: ffrt_core::frobenius::FfrtCertificate,
    inversion_slack: i64,
}

#[derive(Serialize)]
struct AssPayload {
    object: Value,
    degree_box: DegreeBox,
    status: String,
    witnesses: Vec<localcoh::AssWitness>,
    support: Vec<localcoh::FacePrime>,
}

fn ass_payload(
    ring: &AffineSemigroupRing,
    object: &localcoh::GradedObject,
    describe: Value,
    bx: &DegreeBox,
) -> (AssPayload, i32) {
    let witnesses = localcoh::associated_primes(ring, object, bx);
    let support = localcoh::support_faces(ring, &witnesses);
    let (status, code) = if witnesses.is_empty() {
        let any_nonzero = bx.iter().any(|v| object.slice(ring, &v).dim > 0);
        if any_nonzero {
            ("empty_inconclusive".to_string(), EXIT_INCONCLUSIVE)
        } else {
            ("zero_in_window".to_string(), EXIT_OK)
        }
    } else {
        ("witnesses".to_string(), EXIT_OK)
    };
    (
        AssPayload {
            object: describe,
            degree_box: bx.clone(),
            status,
            witnesses,
            support,
        },
        code,
    )
}

/// Run the job; returns the report payload, a status word and the exit code.
pub fn run(job: &Job) -> Result<(Value, String, i32)> {
    let ring = AffineSemigroupRing::from_spec(&job.ring)?;
    let res: Result<(Value, String, i32)> = run_inner(job, &ring);
    match res {
        Err(Error::Inconclusive(reason)) => Ok((
            json!({ "reason": reason }),
            "inconclusive".to_string(),
            EXIT_INCONCLUSIVE,
        )),
        other => other,
    }
}

fn run_inner(job: &Job, ring: &AffineSemigroupRing) -> Result<(Value, String, i32)> {
    let ok = |v: Value| Ok((v, "ok".to_string(), EXIT_OK));
    match job.command.as_str() {
        "decompose" => {
            let e = get_u32(job, "e")?;
            let cutoff = job.params.get("cutoff").and_then(|v| v.as_i64());
            let d = frobenius::pushforward_decompose(ring, e, cutoff)?;
            let e_max = get_u32(job, "e_max").unwrap_or(4);
            let cert = match frobenius::ffrt_certificate(ring, e_max)? {
                CertificateSearch::Found(c) => CertificateOutcome::Found { certificate: c },
                CertificateSearch::NotFoundWithinBound { e_max } => {
                    CertificateOutcome::NotFoundWithinBound { e_max }
                }
            };
            ok(json!({
                "decomposition": report::decompose_report(ring, &d),
                "certificate": cert,
            }))
        }
        "jset" => {
            let e = get_u32(job, "e")?;
            let d = frobenius::pushforward_decompose(ring, e, None)?;
            let j = d.j_set(ring);
            ok(json!({
                "jset": report::jset_report(&j),
                "residue_classes_meeting_semigroup": d.class_count(),
            }))
        }
        "certify-ffrt" => {
            let e_max = get_u32(job, "e_max")?;
            match frobenius::ffrt_certificate(ring, e_max)? {
                CertificateSearch::Found(c) => ok(json!(CertificateOutcome::Found { certificate: c })),
                CertificateSearch::NotFoundWithinBound { e_max } => Ok((
                    json!(CertificateOutcome::NotFoundWithinBound { e_max }),
                    "inconclusive".to_string(),
                    EXIT_INCONCLUSIVE,
                )),
            }
        }
        "pairing-check" => {
            if let Some(levels) = job.params.get("levels") {
                let lv: Vec<u32> = serde_json::from_value(levels.clone())
                    .map_err(|_| Error::InvalidParameter("levels must be [i, j]".into()))?;
                let (i, j) = (lv[0], lv[1]);
                let e_max = get_u32(job, "e_max").unwrap_or(4);
                let ctx = match certified_context(ring, e_max, i.max(j))? {
                    Ok(c) => c,
                    Err(e_max) => {
                        return Ok((
                            json!(CertificateOutcome::NotFoundWithinBound { e_max }),
                            "inconclusive".to_string(),
                            EXIT_INCONCLUSIVE,
                        ))
                    }
                };
                let fwd = phi::pairing_contains_identity(ring, ctx.decomposition(i), ctx.decomposition(j));
                let bwd = phi::pairing_contains_identity(ring, ctx.decomposition(j), ctx.decomposition(i));
                ok(json!({
                    "levels": [i, j],
                    "certificate": ctx.certificate(),
                    "identity_of_level_j_through_level_i": fwd,
                    "identity_of_level_i_through_level_j": bwd,
                }))
            } else {
                let raw: Vec<u32> = serde_json::from_value(need(job, "raw_exponents")?.clone())
                    .map_err(|_| Error::InvalidParameter("raw_exponents must be [u, v]".into()))?;
                let (u, v) = (raw[0], raw[1]);
                let du = frobenius::pushforward_decompose(ring, u, None)?;
                let dv = frobenius::pushforward_decompose(ring, v, None)?;
                let fwd = phi::pairing_contains_identity(ring, &du, &dv);
                let bwd = phi::pairing_contains_identity(ring, &dv, &du);
                ok(json!({
                    "raw_exponents": [u, v],
                    "identity_of_second_through_first": fwd,
                    "identity_of_first_through_second": bwd,
                }))
            }
        }
        "descent-check" => {
            let i = get_u32(job, "i")?;
            let s = get_u32(job, "s")?;
            let e_max = get_u32(job, "e_max").unwrap_or(4);
            let ctx = match certified_context(ring, e_max, (i + s).max(2))? {
                Ok(c) => c,
                Err(e_max) => {
                    return Ok((
                        json!(CertificateOutcome::NotFoundWithinBound { e_max }),
                        "inconclusive".to_string(),
                        EXIT_INCONCLUSIVE,
                    ))
                }
            };
            let rep = phi::descent_pairing_check(&ctx, i, s)?;
            let code = if rep.pass { EXIT_OK } else { EXIT_INCONCLUSIVE };
            let status = if rep.pass { "ok" } else { "failed" };
            Ok((
                json!({ "certificate": ctx.certificate(), "report": rep }),
                status.to_string(),
                code,
            ))
        }
        "root-check" | "localize" => {
            let e_bound = get_u32(job, "e_bound").unwrap_or(3);
            let e_max = get_u32(job, "e_max").unwrap_or(4);
            let bx = match job.params.get("box") {
                Some(_) => get_box(job, "box")?,
                None => DegreeBox::cube(ring.rank(), -8, 8),
            };
            let ctx = match certified_context(ring, e_max, e_bound.max(2))? {
                Ok(c) => c,
                Err(e_max) => {
                    return Ok((
                        json!(CertificateOutcome::NotFoundWithinBound { e_max }),
                        "inconclusive".to_string(),
                        EXIT_INCONCLUSIVE,
                    ))
                }
            };
            let invert = job.params.get("invert").map(|_| get_point(job, "invert")).transpose()?;
            let seeds = job.params.get("seeds").map(|_| get_points(job, "seeds")).transpose()?;
            let rp: RootPresentation = match (&invert, &seeds) {
                (None, None) => RootPresentation::ring_root(&ctx)?,
                (Some(f), None) => unitmod::localize(&ctx, &RootPresentation::ring_root(&ctx)?, f)?,
                (amb, Some(pts)) => {
                    let ambient = match amb {
                        None => Ambient::Ring,
                        Some(f) => Ambient::Ring.localize(f),
                    };
                    for v in pts {
                        if !ambient.contains(ring, v) {
                            return Err(Error::MonomialOutsideRing(v.clone()));
                        }
                    }
                    let root = unitmod::d0_submodule_from_points(&ctx, pts);
                    RootPresentation::new(&ctx, ambient, root)?
                }
            };
            let check = unitmod::root_check(&ctx, &rp, &bx, e_bound)?;
            let code = if check.passed() { EXIT_OK } else { EXIT_INCONCLUSIVE };
            let status = if check.passed() { "ok" } else { "failed_within_bounds" };
            let payload = RootPayload {
                ambient: rp.ambient.clone(),
                module_generators: rp.root.module_generators(&ctx),
                root_generators: rp.root.absolute_generators(&ctx),
                check,
                certificate: ctx.certificate().clone(),
                inversion_slack: unitmod::INVERSION_SLACK,
            };
            Ok((json!(payload), status.to_string(), code))
        }
        "lc" => {
            let ideal = get_points(job, "ideal")?;
            let i = get_usize(job, "i")?;
            let bx = get_box(job, "box")?;
            let e_bound = get_u32(job, "e_bound").unwrap_or(3);
            let e_max = get_u32(job, "e_max").unwrap_or(4);
            let object = localcoh::lc_object(&ideal, i, None);
            let mut pieces = Vec::new();
            for v in bx.iter() {
                let dim = object.slice(ring, &v).dim;
                if dim > 0 {
                    pieces.push(json!({ "degree": v, "dim": dim }));
                }
            }
            let (root_value, mut code, mut status) = match certified_context(ring, e_max, e_bound.max(2))? {
                Ok(ctx) => match localcoh::lc_root(&ctx, &ideal, i, &bx, e_bound) {
                    Ok((pres, rep)) => (
                        json!({ "status": "ok", "presentation": pres, "check": rep }),
                        EXIT_OK,
                        "ok",
                    ),
                    Err(Error::Inconclusive(reason)) => (
                        json!({ "status": "inconclusive", "reason": reason }),
                        EXIT_INCONCLUSIVE,
                        "inconclusive",
                    ),
                    Err(other) => return Err(other),
                },
                Err(e_max) => (
                    json!({ "status": "no_certificate", "e_max": e_max }),
                    EXIT_INCONCLUSIVE,
                    "inconclusive",
                ),
            };
            let (ass, ass_code) = ass_payload(ring, &object, json!({ "ideal": ideal, "i": i }), &bx);
            if ass_code != EXIT_OK && code == EXIT_OK {
                code = ass_code;
                status = "inconclusive";
            }
            Ok((
                json!({
                    "ideal": ideal,
                    "i": i,
                    "pieces": pieces,
                    "root": root_value,
                    "ass": ass.witnesses,
                    "ass_status": ass.status,
                    "support": ass.support,
                    "box": bx,
                }),
                status.to_string(),
                code,
            ))
        }
        "iterated-lc" => {
            let specs = get_specs(job, "specs")?;
            let bx = get_box(job, "box")?;
            let object = localcoh::iterated_lc_object(&specs);
            let mut pieces = Vec::new();
            for v in bx.iter() {
                let dim = object.slice(ring, &v).dim;
                if dim > 0 {
                    pieces.push(json!({ "degree": v, "dim": dim }));
                }
            }
            let (ass, code) = ass_payload(ring, &object, json!({ "specs": specs }), &bx);
            let status = if code == EXIT_OK { "ok" } else { "inconclusive" };
            Ok((
                json!({
                    "specs": specs,
                    "pieces": pieces,
                    "ass": ass.witnesses,
                    "ass_status": ass.status,
                    "support": ass.support,
                    "box": bx,
                }),
                status.to_string(),
                code,
            ))
        }
        "ass" => {
            let bx = get_box(job, "box")?;
            let (object, describe) = if job.params.contains_key("specs") {
                let specs = get_specs(job, "specs")?;
                (localcoh::iterated_lc_object(&specs), json!({ "specs": specs }))
            } else {
                let ideal = get_points(job, "ideal")?;
                let i = get_usize(job, "i")?;
                (localcoh::lc_object(&ideal, i, None), json!({ "ideal": ideal, "i": i }))
            };
            let (payload, code) = ass_payload(ring, &object, describe, &bx);
            let status = if code == EXIT_OK { "ok" } else { "inconclusive" };
            Ok((json!(payload), status.to_string(), code))
        }
        "support-closed" => {
            let g = get_point(job, "g")?;
            let ideal = get_points(job, "ideal")?;
            let i = get_usize(job, "i")?;
            let bx = get_box(job, "box")?;
            let rep = localcoh::support_closed_check(ring, &g, &ideal, i, &bx)?;
            let pass = rep.decomposition_consistent && rep.les_balanced;
            let code = if pass { EXIT_OK } else { EXIT_INCONCLUSIVE };
            let status = if pass { "ok" } else { "failed_within_bounds" };
            Ok((json!(rep), status.to_string(), code))
        }
        other => Err(Error::InvalidParameter(format!("unknown command `{other}`"))),
    }
}

/// Render the canonical report bytes for a finished job.
pub fn render(job: &Job, ring: &AffineSemigroupRing, result: Value, status: &str) -> Vec<u8> {
    #[derive(Serialize)]
    struct Enveloped {
        status: String,
        #[serde(flatten)]
        value: Value,
    }
    let report = Report::new(
        &job.command,
        ring,
        Enveloped {
            status: status.to_string(),
            value: json!({ "payload": result }),
        },
    );
    report.to_bytes()
}

/// Full pipeline: run and render.
pub fn execute(job: &Job) -> Result<(Vec<u8>, i32)> {
    let ring = AffineSemigroupRing::from_spec(&job.ring)?;
    let (value, status, code) = run(job)?;
    Ok((render(job, &ring, value, &status), code))
}
