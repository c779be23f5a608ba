//! Quasi-pullback weight bookkeeping and the general-type certification
//! engine.
//!
//! A vector l in the J-fixed D4 sublattice of E6 with N orthogonal roots
//! (2 <= N <= 16) yields a cusp form of weight 12 + N/2 < 21, which certifies
//! general type for the split degree l^2. The engine searches for such
//! witnesses, verifies the side conditions exactly, and reports structured
//! certificates.

use crate::disc;
use crate::e6::E6Model;
use crate::error::{Error, Result};
use crate::lattice::{parse_lattice, LatticeVector};
use crate::polarisation::{self, PolarisationType};
use crate::roots::classify_root_system;
use rayon::prelude::*;
use serde::Serialize;

pub const SWEEP_GUARD: i64 = 200;

fn exact_sqrt(n: i64) -> Option<i64> {
    if n < 0 {
        return None;
    }
    let mut z = (n as f64).sqrt() as i64;
    while z > 0 && z * z > n {
        z -= 1;
    }
    while (z + 1) * (z + 1) <= n {
        z += 1;
    }
    if z * z == n {
        Some(z)
    } else {
        None
    }
}

/// Representations of n as an ordered triple of (signed) integer squares.
pub fn r3(n: i64) -> usize {
    if n < 0 {
        return 0;
    }
    let mut count = 0;
    let bound = exact_sqrt(n).unwrap_or((n as f64).sqrt() as i64 + 1);
    for x in -bound..=bound {
        let rx = n - x * x;
        if rx < 0 {
            continue;
        }
        for y in -bound..=bound {
            let rxy = rx - y * y;
            if rxy < 0 {
                continue;
            }
            if let Some(z) = exact_sqrt(rxy) {
                count += if z == 0 { 1 } else { 2 };
            }
        }
    }
    count
}

/// As `r3` but restricted to triples with gcd(x, y, z) = 1.
pub fn r3_primitive(n: i64) -> usize {
    if n <= 0 {
        return 0;
    }
    let mut count = 0;
    let bound = (n as f64).sqrt() as i64 + 1;
    for x in -bound..=bound {
        for y in -bound..=bound {
            let rxy = n - x * x - y * y;
            if rxy < 0 {
                continue;
            }
            if let Some(z) = exact_sqrt(rxy) {
                if gcd(gcd(x.abs(), y.abs()), z) == 1 {
                    count += if z == 0 { 1 } else { 2 };
                }
            }
        }
    }
    count
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

/// Weight of the quasi-pullback along N orthogonal roots: 12 + N/2.
pub fn quasi_pullback_weight(n: i64) -> Result<i64> {
    if n < 0 || n % 2 != 0 {
        return Err(Error::Invalid(format!(
            "root count must be even and non-negative, got {n}"
        )));
    }
    Ok(12 + n / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct VanishingBound {
    pub computed: i64,
    pub required: i64,
}

/// Extra vanishing order along the branch divisor: the pulled-back form
/// vanishes with order at least 15 - N/2 there, and the certification
/// requires at least 7. Only meaningful for N < 18.
pub fn vanishing_margin(n_l: i64) -> Result<VanishingBound> {
    if n_l >= 18 || n_l < 0 || n_l % 2 != 0 {
        return Err(Error::Invalid(format!(
            "vanishing bound needs an even root count below 18, got {n_l}"
        )));
    }
    let computed = 15 - n_l / 2;
    let required = 7;
    if computed < required {
        return Err(Error::Invalid("vanishing bound below the required floor".into()));
    }
    Ok(VanishingBound { computed, required })
}

#[derive(Debug, Clone, Serialize)]
pub struct RamificationRow {
    pub e: i64,
    pub r_sq: i64,
    pub div_r: i64,
    pub det_t: i64,
    pub surviving: bool,
}

/// The six candidate reflection classes (-sigma_r in the extended group) for
/// degree 2d: norms and divisors with det T = 12 d e / div^2. Only the rows
/// with det T in {12, 3, 4} survive the determinant analysis.
pub fn ramification_cases(d: i64) -> Result<Vec<RamificationRow>> {
    if d < 1 {
        return Err(Error::Invalid("degree parameter must be positive".into()));
    }
    let raw = [
        (d, 2 * d, d),
        (d, 2 * d, 2 * d),
        (2 * d, 4 * d, 2 * d),
        (3 * d, 6 * d, 3 * d),
        (3 * d, 6 * d, 6 * d),
        (6 * d, 12 * d, 6 * d),
    ];
    let expected_det = [12, 3, 6, 4, 1, 2];
    let mut rows = Vec::with_capacity(6);
    for (i, &(e, r_sq, div_r)) in raw.iter().enumerate() {
        let num = 12i128 * d as i128 * e as i128;
        let den = (div_r as i128) * (div_r as i128);
        assert_eq!(num % den, 0);
        let det_t = (num / den) as i64;
        assert_eq!(det_t, expected_det[i]);
        rows.push(RamificationRow {
            e,
            r_sq,
            div_r,
            det_t,
            surviving: matches!(det_t, 12 | 3 | 4),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct LowWeightWitness {
    /// coordinates on the D4 basis of the J-fixed sublattice
    pub d4_coords: LatticeVector,
    /// coordinates on the simple-root basis of E6
    pub alpha_coords: LatticeVector,
    pub norm: i64,
    pub n_l: i64,
    pub weight: i64,
    pub complement_label: String,
}

/// First (lexicographically smallest in D4 coordinates) vector of norm two_d
/// in the J-fixed sublattice orthogonal to at least 2 and at most 16 roots
/// of E6.
pub fn find_low_weight_vector(two_d: i64) -> Result<Option<LowWeightWitness>> {
    if two_d <= 0 || two_d % 2 != 0 {
        return Err(Error::Invalid("degree must be a positive even integer".into()));
    }
    let model = E6Model::new();
    find_low_weight_in(&model, two_d)
}

fn find_low_weight_in(model: &E6Model, two_d: i64) -> Result<Option<LowWeightWitness>> {
    let (d4, basis) = model.d4_plus();
    for v in crate::roots::vectors_of_norm(&d4, two_d)? {
        let alpha = model.embed(&v, &basis);
        let orth = model.orthogonal_roots(&alpha);
        let n = orth.len() as i64;
        if (2..=16).contains(&n) {
            let label = classify_root_system(&orth, model.lattice())?;
            assert_eq!(label.root_count() as i64, n);
            return Ok(Some(LowWeightWitness {
                d4_coords: v,
                alpha_coords: alpha,
                norm: two_d,
                n_l: n,
                weight: quasi_pullback_weight(n)?,
                complement_label: label.to_string(),
            }));
        }
    }
    Ok(None)
}

/// True iff no J-invariant vector of norm <= 2 d_max is orthogonal to
/// exactly 18 roots of E6.
pub fn no_eighteen_scan(d_max: i64) -> Result<bool> {
    Ok(scan_for_exact_count(d_max, 18)?.is_none())
}

/// First J-invariant vector of norm <= 2 d_max orthogonal to exactly
/// `target` roots, if any (negative control for the scan above).
pub fn scan_for_exact_count(d_max: i64, target: usize) -> Result<Option<(i64, LatticeVector)>> {
    guard_dmax(d_max)?;
    let model = E6Model::new();
    let (d4, basis) = model.d4_plus();
    for d in 1..=d_max {
        for v in crate::roots::vectors_of_norm(&d4, 2 * d)? {
            let alpha = model.embed(&v, &basis);
            if model.orthogonal_root_count(&alpha) == target {
                return Ok(Some((2 * d, alpha)));
            }
        }
    }
    Ok(None)
}

fn guard_dmax(d_max: i64) -> Result<()> {
    if d_max < 1 || d_max > SWEEP_GUARD {
        return Err(Error::Invalid(format!(
            "sweep bound must lie in 1..={SWEEP_GUARD}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRow {
    pub d: i64,
    pub pass: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport {
    pub check: String,
    pub d_max: i64,
    pub all_pass: bool,
    pub rows: Vec<SweepRow>,
}

fn assemble(check: &str, d_max: i64, mut rows: Vec<SweepRow>) -> SweepReport {
    rows.sort_by_key(|r| r.d);
    SweepReport {
        check: check.into(),
        d_max,
        all_pass: rows.iter().all(|r| r.pass),
        rows,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepCheck {
    LowWeight,
    NoEighteen,
    OneRoot,
    Eichler,
}

impl SweepCheck {
    pub fn parse(s: &str) -> Result<SweepCheck> {
        match s {
            "low-weight" => Ok(SweepCheck::LowWeight),
            "no-18" => Ok(SweepCheck::NoEighteen),
            "one-root" => Ok(SweepCheck::OneRoot),
            "eichler-congruence" => Ok(SweepCheck::Eichler),
            other => Err(Error::Invalid(format!("unknown sweep check: {other}"))),
        }
    }
}

/// Dispatcher for the four degree sweeps; `force` lifts the d_max guard.
pub fn run_sweep(check: SweepCheck, d_max: i64, force: bool) -> Result<SweepReport> {
    if force {
        if d_max < 1 {
            return Err(Error::Invalid("sweep bound must be positive".into()));
        }
    } else {
        guard_dmax(d_max)?;
    }
    match check {
        SweepCheck::LowWeight => sweep_low_weight_unguarded(d_max),
        SweepCheck::NoEighteen => sweep_no_eighteen_unguarded(d_max),
        SweepCheck::OneRoot => sweep_one_root_unguarded(d_max),
        SweepCheck::Eichler => sweep_eichler_unguarded(d_max),
    }
}

/// For each d <= d_max: a low-weight witness exists iff d is not a power
/// of two.
pub fn sweep_low_weight(d_max: i64) -> Result<SweepReport> {
    run_sweep(SweepCheck::LowWeight, d_max, false)
}

fn sweep_low_weight_unguarded(d_max: i64) -> Result<SweepReport> {
    let rows: Vec<SweepRow> = (1..=d_max)
        .into_par_iter()
        .map(|d| {
            let expected = !is_power_of_two(d);
            match find_low_weight_vector(2 * d) {
                Err(e) => SweepRow {
                    d,
                    pass: false,
                    detail: format!("error: {e}"),
                },
                Ok(found) => {
                    let pass = found.is_some() == expected;
                    let detail = match &found {
                        Some(w) => format!(
                            "witness {:?} with {} orthogonal roots ({})",
                            w.d4_coords.0, w.n_l, w.complement_label
                        ),
                        None => "no admissible vector".to_string(),
                    };
                    SweepRow {
                        d,
                        pass,
                        detail: format!("expected {expected}: {detail}"),
                    }
                }
            }
        })
        .collect();
    Ok(assemble("low-weight", d_max, rows))
}

/// For each d <= d_max: no J-invariant norm-2d vector has exactly 18
/// orthogonal roots.
pub fn sweep_no_eighteen(d_max: i64) -> Result<SweepReport> {
    run_sweep(SweepCheck::NoEighteen, d_max, false)
}

fn sweep_no_eighteen_unguarded(d_max: i64) -> Result<SweepReport> {
    let model = E6Model::new();
    let rows: Vec<SweepRow> = (1..=d_max)
        .into_par_iter()
        .map(|d| {
            let (d4, basis) = model.d4_plus();
            let hit = crate::roots::vectors_of_norm(&d4, 2 * d)
                .map(|vs| {
                    vs.into_iter().find(|v| {
                        model.orthogonal_root_count(&model.embed(v, &basis)) == 18
                    })
                })
                .unwrap_or(None);
            match hit {
                Some(v) => SweepRow {
                    d,
                    pass: false,
                    detail: format!("vector {:?} has exactly 18 orthogonal roots", v.0),
                },
                None => SweepRow {
                    d,
                    pass: true,
                    detail: "no vector with exactly 18 orthogonal roots".into(),
                },
            }
        })
        .collect();
    Ok(assemble("no-18", d_max, rows))
}

/// For each d <= d_max: the J-fixed sublattice contains a norm-2d vector
/// orthogonal to at least one root, via the three-squares counts
/// N_{3A1}(2d) = r3(d) and N_{A3}(2d) = r3(2d).
pub fn sweep_one_root(d_max: i64) -> Result<SweepReport> {
    run_sweep(SweepCheck::OneRoot, d_max, false)
}

fn sweep_one_root_unguarded(d_max: i64) -> Result<SweepReport> {
    let three_a1 = parse_lattice("3A1")?.evaluate()?;
    let a3 = parse_lattice("A3")?.evaluate()?;
    let rows: Vec<SweepRow> = (1..=d_max)
        .into_par_iter()
        .map(|d| {
            let run = || -> Result<SweepRow> {
                let in_3a1 = crate::roots::count_vectors(&three_a1, 2 * d)?;
                let in_a3 = crate::roots::count_vectors(&a3, 2 * d)?;
                let ok = in_3a1 == r3(d) && in_a3 == r3(2 * d) && in_3a1 + in_a3 > 0;
                Ok(SweepRow {
                    d,
                    pass: ok,
                    detail: format!(
                        "3A1 count {} (r3(d) = {}), A3 count {} (r3(2d) = {})",
                        in_3a1,
                        r3(d),
                        in_a3,
                        r3(2 * d)
                    ),
                })
            };
            run().unwrap_or_else(|e| SweepRow {
                d,
                pass: false,
                detail: format!("error: {e}"),
            })
        })
        .collect();
    Ok(assemble("one-root", d_max, rows))
}

/// For each even degree 2d <= 2 d_max: a divisor-3 polarisation class exists
/// iff 2d = 12 mod 18, with the witness verified exactly.
pub fn sweep_eichler(d_max: i64) -> Result<SweepReport> {
    run_sweep(SweepCheck::Eichler, d_max, false)
}

fn sweep_eichler_unguarded(d_max: i64) -> Result<SweepReport> {
    let rows: Vec<SweepRow> = (1..=d_max)
        .into_par_iter()
        .map(|d| {
            let two_d = 2 * d;
            let run = || -> Result<SweepRow> {
                let classes = polarisation::classify_polarisations(two_d)?;
                for c in &classes {
                    polarisation::verify_class(c)?;
                }
                let has_nonsplit = classes.len() == 2;
                let expected = two_d % 18 == 12;
                Ok(SweepRow {
                    d,
                    pass: has_nonsplit == expected,
                    detail: format!(
                        "degree {two_d}: divisor-3 class exists = {has_nonsplit}, congruence predicts {expected}"
                    ),
                })
            };
            run().unwrap_or_else(|e| SweepRow {
                d,
                pass: false,
                detail: format!("error: {e}"),
            })
        })
        .collect();
    Ok(assemble("eichler-congruence", d_max, rows))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "GENERAL_TYPE")]
    GeneralType,
    #[serde(rename = "NO_LOW_WEIGHT_FORM")]
    NoLowWeightForm,
    #[serde(rename = "OUT_OF_METHOD")]
    OutOfMethod,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Group {
    #[serde(rename = "O_G")]
    Og,
    #[serde(rename = "STABLE")]
    Stable,
}

#[derive(Debug, Clone, Serialize)]
pub struct JHypothesisChecks {
    pub fixes_witness: bool,
    pub preserves_orthogonal_roots: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct PullbackCertificate {
    pub degree: i64,
    #[serde(rename = "type")]
    pub class_type: PolarisationType,
    pub group: Group,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_coords: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_frame: Option<String>,
    #[serde(rename = "N_l", skip_serializing_if = "Option::is_none")]
    pub n_l: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub complement_label: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub is_cusp: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub j_hypothesis: Option<JHypothesisChecks>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vanishing: Option<VanishingBound>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stable_certificate: Option<Box<PullbackCertificate>>,
}

impl PullbackCertificate {
    fn bare(degree: i64, class_type: PolarisationType, group: Group, verdict: Verdict) -> Self {
        PullbackCertificate {
            degree,
            class_type,
            group,
            verdict,
            witness_coords: None,
            witness_frame: None,
            n_l: None,
            weight: None,
            complement_label: None,
            is_cusp: None,
            j_hypothesis: None,
            vanishing: None,
            reason: None,
            provenance: None,
            stable_certificate: None,
        }
    }
}

fn is_power_of_two(d: i64) -> bool {
    d > 0 && d & (d - 1) == 0
}

/// Whether every totally isotropic subgroup of the discriminant module of the
/// complement lattice is cyclic (needed for the cusp condition).
fn complement_isotropy_cyclic(class: &polarisation::PolarisationClass) -> Result<bool> {
    let (l, _) = polarisation::complement_lattice(class)?;
    let m = disc::discriminant_module(&l);
    disc::all_isotropic_subgroups_cyclic(&m)
}

const ALPHA_FRAME: &str = "E6 simple-root basis";

/// Full certification for one polarisation class.
pub fn certify(two_d: i64, class_type: PolarisationType) -> Result<PullbackCertificate> {
    let classes = polarisation::classify_polarisations(two_d)?;
    let class = classes
        .into_iter()
        .find(|c| c.kind == class_type)
        .ok_or_else(|| {
            Error::Invalid(format!(
                "no {} polarisation of degree {two_d}",
                class_type.as_str()
            ))
        })?;
    match class_type {
        PolarisationType::Split => certify_split(&class),
        PolarisationType::NonSplit => certify_nonsplit(&class),
    }
}

fn certify_split(class: &polarisation::PolarisationClass) -> Result<PullbackCertificate> {
    let two_d = class.two_d;
    let d = two_d / 2;
    if !is_power_of_two(d) {
        let model = E6Model::new();
        let w = find_low_weight_in(&model, two_d)?.ok_or_else(|| {
            Error::Invalid(format!(
                "expected a low-weight witness for degree {two_d}"
            ))
        })?;
        // combinatorial hypotheses for modularity under the extended group:
        // the witness is J-fixed and J permutes its orthogonal roots
        let fixes = model.is_j_invariant(&w.alpha_coords);
        let orth = model.orthogonal_roots(&w.alpha_coords);
        let preserves = orth.iter().all(|r| orth.contains(&model.j_alpha(r)));
        if !fixes || !preserves {
            return Err(Error::Invalid("witness fails the involution hypotheses".into()));
        }
        let cyclic = complement_isotropy_cyclic(class)?;
        let mut cert = PullbackCertificate::bare(
            two_d,
            PolarisationType::Split,
            Group::Og,
            Verdict::GeneralType,
        );
        cert.witness_coords = Some(w.alpha_coords.0.clone());
        cert.witness_frame = Some(ALPHA_FRAME.into());
        cert.n_l = Some(w.n_l);
        cert.weight = Some(w.weight);
        cert.complement_label = Some(w.complement_label.clone());
        cert.is_cusp = Some(w.n_l >= 2 && cyclic);
        cert.j_hypothesis = Some(JHypothesisChecks {
            fixes_witness: fixes,
            preserves_orthogonal_roots: preserves,
        });
        cert.vanishing = Some(vanishing_margin(w.n_l)?);
        if cert.weight.unwrap() >= 21 || cert.is_cusp != Some(true) {
            return Err(Error::Invalid("certificate fails the general-type gates".into()));
        }
        return Ok(cert);
    }
    // d a power of two: the extended-group search provably fails; report the
    // stable-group verdict alongside
    let mut cert = PullbackCertificate::bare(
        two_d,
        PolarisationType::Split,
        Group::Og,
        Verdict::OutOfMethod,
    );
    cert.reason = Some(
        "no J-invariant vector of this norm is orthogonal to between 2 and 16 roots".into(),
    );
    if two_d <= 2 * SWEEP_GUARD {
        assert!(find_low_weight_vector(two_d)?.is_none());
    }
    cert.stable_certificate = Some(Box::new(certify_split_stable(class)?));
    Ok(cert)
}

fn certify_split_stable(class: &polarisation::PolarisationClass) -> Result<PullbackCertificate> {
    let two_d = class.two_d;
    let d = two_d / 2;
    let model = E6Model::new();
    if matches!(d, 1 | 2 | 4) {
        // every norm-2d vector in E6 is orthogonal to at least 20 roots
        let min_n = crate::roots::vectors_of_norm(model.lattice(), two_d)?
            .iter()
            .map(|v| model.orthogonal_root_count(v))
            .min()
            .unwrap_or(usize::MAX);
        assert!(min_n >= 20, "degree {two_d}: minimum orthogonal count {min_n}");
        let mut cert = PullbackCertificate::bare(
            two_d,
            PolarisationType::Split,
            Group::Stable,
            Verdict::NoLowWeightForm,
        );
        cert.reason = Some(format!(
            "every norm-{two_d} vector in E6 is orthogonal to at least 20 roots (minimum {min_n})"
        ));
        return Ok(cert);
    }
    // 2d = 2^m with m >= 4: explicit witnesses at 16 and 32, finite covers above
    let m = two_d.trailing_zeros();
    let (base_degree, provenance) = if two_d == 16 || two_d == 32 {
        (two_d, None)
    } else if m % 2 == 0 {
        (16, Some("finite cover of the stable degree-16 case".to_string()))
    } else {
        (32, Some("finite cover of the stable degree-32 case".to_string()))
    };
    let (witness, expected_n, expected_label) = if base_degree == 16 {
        (
            crate::e6::E6Vector::from_integral([3, 2, 1, 1, 1, 0]),
            12i64,
            "A3",
        )
    } else {
        (
            crate::e6::E6Vector::from_integral([4, 3, 2, 0, 0, 1]),
            8i64,
            "A1+A2",
        )
    };
    let alpha = model.to_alpha(&witness)?;
    assert_eq!(model.lattice().norm(&alpha), base_degree);
    let orth = model.orthogonal_roots(&alpha);
    assert_eq!(orth.len() as i64, expected_n);
    let label = classify_root_system(&orth, model.lattice())?;
    assert_eq!(label.to_string(), expected_label);
    let base_class = polarisation::classify_polarisations(base_degree)?.remove(0);
    let cyclic = complement_isotropy_cyclic(&base_class)?;
    let mut cert = PullbackCertificate::bare(
        two_d,
        PolarisationType::Split,
        Group::Stable,
        Verdict::GeneralType,
    );
    cert.witness_coords = Some(alpha.0.clone());
    cert.witness_frame = Some(ALPHA_FRAME.into());
    cert.n_l = Some(expected_n);
    cert.weight = Some(quasi_pullback_weight(expected_n)?);
    cert.complement_label = Some(expected_label.into());
    cert.is_cusp = Some(cyclic);
    cert.vanishing = Some(vanishing_margin(expected_n)?);
    cert.provenance = provenance;
    Ok(cert)
}

/// Divisor-3 vectors of the given norm in E6, in enumeration order.
pub fn divisor_three_vectors(model: &E6Model, norm: i64) -> Result<Vec<LatticeVector>> {
    Ok(crate::roots::vectors_of_norm(model.lattice(), norm)?
        .into_iter()
        .filter(|v| model.lattice().divisor(v).map(|d| d == 3).unwrap_or(false))
        .collect())
}

fn certify_nonsplit(class: &polarisation::PolarisationClass) -> Result<PullbackCertificate> {
    let two_d = class.two_d;
    let table_n = polarisation::nonsplit_orthogonal_root_count(class)?;
    let Some(table_n) = table_n else {
        let mut cert = PullbackCertificate::bare(
            two_d,
            PolarisationType::NonSplit,
            Group::Stable,
            Verdict::OutOfMethod,
        );
        cert.reason = Some("degree outside the analysed non-split range".into());
        return Ok(cert);
    };
    let model = E6Model::new();
    let vectors = divisor_three_vectors(&model, two_d)?;
    assert!(!vectors.is_empty(), "no divisor-3 vector of norm {two_d} in E6");
    let counts: Vec<usize> = vectors
        .iter()
        .map(|v| model.orthogonal_root_count(v))
        .collect();
    if two_d == 66 {
        let idx = counts
            .iter()
            .position(|&n| (2..=16).contains(&(n as i64)))
            .expect("weight-19 witness exists at degree 66");
        let witness = &vectors[idx];
        let n = counts[idx] as i64;
        assert_eq!(n as usize, table_n);
        let orth = model.orthogonal_roots(witness);
        let label = classify_root_system(&orth, model.lattice())?;
        let cyclic = complement_isotropy_cyclic(class)?;
        let mut cert = PullbackCertificate::bare(
            two_d,
            PolarisationType::NonSplit,
            Group::Stable,
            Verdict::GeneralType,
        );
        cert.witness_coords = Some(witness.0.clone());
        cert.witness_frame = Some(ALPHA_FRAME.into());
        cert.n_l = Some(n);
        cert.weight = Some(quasi_pullback_weight(n)?);
        cert.complement_label = Some(label.to_string());
        cert.is_cusp = Some(n >= 2 && cyclic);
        cert.vanishing = Some(vanishing_margin(n)?);
        if cert.weight != Some(19) {
            return Err(Error::Invalid("unexpected weight at degree 66".into()));
        }
        return Ok(cert);
    }
    // degrees 12, 30, 48: every divisor-3 vector sees at least 20 roots
    let min_n = *counts.iter().min().unwrap();
    assert!(min_n >= 20, "degree {two_d}: minimum orthogonal count {min_n}");
    assert!(
        counts.contains(&table_n),
        "degree {two_d}: expected count {table_n} not attained"
    );
    let mut cert = PullbackCertificate::bare(
        two_d,
        PolarisationType::NonSplit,
        Group::Stable,
        Verdict::NoLowWeightForm,
    );
    cert.n_l = Some(table_n as i64);
    cert.weight = Some(quasi_pullback_weight(table_n as i64)?);
    cert.reason = Some(format!(
        "every divisor-3 vector of norm {two_d} in E6 is orthogonal to at least 20 roots (minimum {min_n})"
    ));
    Ok(cert)
}
