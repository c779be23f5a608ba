//! JSON report envelope and payloads for the command-line front end.
//! Key order is fixed by struct declaration order; `timing_ms` is the only
//! field excluded from golden comparisons.

use crate::disc;
use crate::error::{Error, Result};
use crate::lattice::{parse_lattice, LatticeVector};
use crate::polarisation::{self, PolarisationType};
use crate::pullback::{PullbackCertificate, SweepReport, Verdict};
use crate::roots;
use num_traits::Signed;
use serde::Serialize;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub schema: u32,
    pub tool_version: String,
    pub command: String,
    pub result: T,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &str, result: T) -> Report<T> {
        Report {
            schema: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            result,
            timing_ms: None,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

#[derive(Debug, Serialize)]
pub struct ComplementSummary {
    pub label: String,
    pub rank: usize,
    pub signature: (usize, usize),
    pub det_abs: String,
}

#[derive(Debug, Serialize)]
pub struct ClassEntry {
    #[serde(rename = "type")]
    pub class_type: PolarisationType,
    pub divisor: i64,
    pub witness_ambient: String,
    pub witness_coords: Vec<i64>,
    pub complement: ComplementSummary,
}

#[derive(Debug, Serialize)]
pub struct ClassifyResult {
    pub degree: i64,
    pub classes: Vec<ClassEntry>,
}

pub fn classify_result(two_d: i64) -> Result<ClassifyResult> {
    let mut classes = Vec::new();
    for c in polarisation::classify_polarisations(two_d)? {
        let (l, label) = polarisation::complement_lattice(&c)?;
        classes.push(ClassEntry {
            class_type: c.kind,
            divisor: c.divisor,
            witness_ambient: c.witness_ambient.clone(),
            witness_coords: c.witness.0.clone(),
            complement: ComplementSummary {
                label,
                rank: l.rank(),
                signature: l.signature(),
                det_abs: l.determinant().abs().to_string(),
            },
        });
    }
    Ok(ClassifyResult { degree: two_d, classes })
}

#[derive(Debug, Serialize)]
pub struct CertifyResult {
    pub degree: i64,
    pub certificate: PullbackCertificate,
}

pub fn certify_result(two_d: i64, class_type: PolarisationType) -> Result<CertifyResult> {
    let certificate = crate::pullback::certify(two_d, class_type)?;
    validate_certificate(&certificate)?;
    if let Some(sub) = &certificate.stable_certificate {
        validate_certificate(sub)?;
    }
    Ok(CertifyResult { degree: two_d, certificate })
}

fn validate_certificate(c: &PullbackCertificate) -> Result<()> {
    match c.verdict {
        Verdict::GeneralType => {
            if c.witness_coords.is_none() || c.weight.map(|w| w >= 21) != Some(false) {
                return Err(Error::Invalid(
                    "general-type certificate lacks a witness or low weight".into(),
                ));
            }
        }
        Verdict::NoLowWeightForm => {
            if c.reason.is_none() {
                return Err(Error::Invalid("verdict lacks a reason string".into()));
            }
        }
        Verdict::OutOfMethod => {}
    }
    Ok(())
}

pub type SweepResult = SweepReport;

#[derive(Debug, Serialize)]
pub struct RootsResult {
    pub lattice: String,
    pub norm: i64,
    pub count: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub orthogonal_to: Option<Vec<i64>>,
    pub label: String,
}

pub fn roots_result(spec: &str, norm: i64, orthogonal_to: Option<Vec<i64>>) -> Result<RootsResult> {
    let l = parse_lattice(spec)?.evaluate()?;
    let vectors = match &orthogonal_to {
        None => roots::vectors_of_norm(&l, norm)?,
        Some(v) => {
            if v.len() != l.rank() {
                return Err(Error::Invalid(format!(
                    "orthogonality constraint has {} coordinates, lattice has rank {}",
                    v.len(),
                    l.rank()
                )));
            }
            let lv = LatticeVector(v.clone());
            roots::vectors_of_norm(&l, norm)?
                .into_iter()
                .filter(|r| l.inner(r, &lv) == 0)
                .collect()
        }
    };
    let label = if norm == 2 {
        roots::classify_root_system(&vectors, &l)?.to_string()
    } else {
        "-".to_string()
    };
    Ok(RootsResult {
        lattice: spec.to_string(),
        norm,
        count: vectors.len(),
        orthogonal_to,
        label,
    })
}

#[derive(Debug, Serialize)]
pub struct GeneratorEntry {
    pub order: u64,
    pub q: String,
}

#[derive(Debug, Serialize)]
pub struct DiscResult {
    pub lattice: String,
    pub order: String,
    pub invariant_factors: Vec<u64>,
    pub generators: Vec<GeneratorEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub isotropic_count: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub all_isotropic_subgroups_cyclic: Option<bool>,
}

pub fn disc_result(spec: &str) -> Result<DiscResult> {
    let l = parse_lattice(spec)?.evaluate()?;
    let m = disc::discriminant_module(&l);
    let generators: Vec<GeneratorEntry> = m
        .factors()
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            let mut e = vec![0u64; m.factors().len()];
            e[i] = 1;
            GeneratorEntry {
                order: f,
                q: m.q_value(&e).to_string(),
            }
        })
        .collect();
    let (isotropic_count, cyclic) = if m.order() <= disc::SUBGROUP_SCAN_CAP {
        (
            Some(disc::isotropic_elements(&m)?.len()),
            Some(disc::all_isotropic_subgroups_cyclic(&m)?),
        )
    } else if m.order() <= disc::ELEMENT_SCAN_CAP {
        (Some(disc::isotropic_elements(&m)?.len()), None)
    } else {
        (None, None)
    };
    Ok(DiscResult {
        lattice: spec.to_string(),
        order: m.order().to_string(),
        invariant_factors: m.invariant_factors(),
        generators,
        isotropic_count,
        all_isotropic_subgroups_cyclic: cyclic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classify_report_shape() {
        let r = classify_result(12).unwrap();
        assert_eq!(r.classes.len(), 2);
        assert_eq!(r.classes[1].complement.det_abs, "4");
        let json = Report::new("classify", r).to_json();
        assert!(json.contains("\"schema\": 1"));
        assert!(json.ends_with('\n'));
        assert!(!json.contains("timing_ms"));
    }

    #[test]
    fn certify_report_validation() {
        let r = certify_result(66, PolarisationType::NonSplit).unwrap();
        assert_eq!(r.certificate.weight, Some(19));
        let r = certify_result(16, PolarisationType::Split).unwrap();
        let sub = r.certificate.stable_certificate.as_ref().unwrap();
        assert_eq!(sub.weight, Some(18));
    }

    #[test]
    fn roots_report() {
        let r = roots_result("E6", 2, None).unwrap();
        assert_eq!(r.count, 72);
        assert_eq!(r.label, "E6");
        let r = roots_result("D4", 4, None).unwrap();
        assert_eq!(r.count, 24);
        assert_eq!(r.label, "-");
        assert!(roots_result("E6", 2, Some(vec![1, 2])).is_err());
    }

    #[test]
    fn disc_report() {
        let r = disc_result("A2(-1)").unwrap();
        assert_eq!(r.invariant_factors, vec![3]);
        assert_eq!(r.generators[0].q, "4/3");
        let r = disc_result("U").unwrap();
        assert_eq!(r.order, "1");
        assert!(r.invariant_factors.is_empty());
        let r = disc_result("2U+2E8(-1)+A2(-1)+<-36>").unwrap();
        assert_eq!(r.invariant_factors, vec![3, 36]);
        assert_eq!(r.all_isotropic_subgroups_cyclic, Some(true));
    }
}
