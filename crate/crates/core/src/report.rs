//! Report envelope shared by every machine-readable output. Reports are
//! deterministic: struct field order and sorted maps fix the byte layout,
//! and each report embeds the windows and bounds it was verified in.

use serde::Serialize;

use crate::frobenius::{FfrtCertificate, JSet, PushforwardDecomposition};
use crate::lattice::Point;
use crate::semigroup::{AffineSemigroupRing, RingSpec};

/// Bumping this invalidates every cache entry.
pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub schema: u32,
    pub tool_version: String,
    pub command: String,
    pub ring: RingSpec,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, ring: &AffineSemigroupRing, result: T) -> Self {
        Report {
            schema: SCHEMA_VERSION,
            tool_version: TOOL_VERSION.to_string(),
            command: command.to_string(),
            ring: ring.spec(),
            result,
        }
    }

    /// Canonical bytes: pretty JSON with a trailing newline.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s.into_bytes()
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClassEntry {
    pub residue: Point,
    pub generators: Vec<Point>,
    pub iso_class_id: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DecomposeReport {
    pub e: u32,
    pub modulus: i64,
    pub sigma_cutoff: i64,
    pub classes: Vec<ClassEntry>,
    pub jset: JSetReport,
}

#[derive(Debug, Clone, Serialize)]
pub struct JSetReport {
    pub e: u32,
    pub classes: Vec<Vec<Point>>,
    pub multiplicities: Vec<usize>,
}

pub fn jset_report(j: &JSet) -> JSetReport {
    JSetReport {
        e: j.e,
        classes: j.classes.iter().map(|m| m.gens().to_vec()).collect(),
        multiplicities: j.multiplicities.clone(),
    }
}

pub fn decompose_report(ring: &AffineSemigroupRing, d: &PushforwardDecomposition) -> DecomposeReport {
    let classes = d
        .summands
        .iter()
        .map(|(c, m)| ClassEntry {
            residue: c.clone(),
            generators: m.gens().to_vec(),
            iso_class_id: d.iso_of_class[c].0,
        })
        .collect();
    DecomposeReport {
        e: d.e,
        modulus: d.q,
        sigma_cutoff: d.sigma_cutoff,
        classes,
        jset: jset_report(&d.j_set(ring)),
    }
}

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "status")]
pub enum CertificateOutcome {
    #[serde(rename = "found")]
    Found { certificate: FfrtCertificate },
    #[serde(rename = "not_found_within_bound")]
    NotFoundWithinBound { e_max: u32 },
}
