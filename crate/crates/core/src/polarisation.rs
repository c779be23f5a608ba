//! Classification of primitive norm-2d vectors in `3U + 2E8(-1) + A2(-1)` up
//! to the stable orthogonal group, and the associated complement lattices.
//!
//! There are at most two classes per degree: a split class (divisor 1) for
//! every even 2d > 0, and a non-split class (divisor 3) exactly when
//! 2d = 12 mod 18.

use crate::error::{Error, Result};
use crate::lattice::{parse_lattice, GramLattice, LatticeVector};
use crate::matrix::Int;
use crate::roots;
use num_traits::Signed;
use serde::Serialize;

pub const AMBIENT: &str = "3U+2E8(-1)+A2(-1)";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PolarisationType {
    Split,
    NonSplit,
}

impl PolarisationType {
    pub fn as_str(&self) -> &'static str {
        match self {
            PolarisationType::Split => "split",
            PolarisationType::NonSplit => "nonsplit",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "split" => Ok(PolarisationType::Split),
            "nonsplit" | "non-split" => Ok(PolarisationType::NonSplit),
            other => Err(Error::Invalid(format!("unknown polarisation type: {other}"))),
        }
    }
}

/// One orbit of primitive norm-2d vectors. The witness lives in the small
/// ambient stated in `witness_ambient` and embeds into the full lattice by
/// padding with zeros.
#[derive(Debug, Clone, Serialize)]
pub struct PolarisationClass {
    pub two_d: i64,
    pub kind: PolarisationType,
    pub divisor: i64,
    pub witness_ambient: String,
    pub witness: LatticeVector,
}

/// All classes of the given even positive degree, split first.
pub fn classify_polarisations(two_d: i64) -> Result<Vec<PolarisationClass>> {
    if two_d <= 0 || two_d % 2 != 0 {
        return Err(Error::Invalid(format!(
            "degree must be a positive even integer, got {two_d}"
        )));
    }
    let d = two_d / 2;
    let mut out = vec![PolarisationClass {
        two_d,
        kind: PolarisationType::Split,
        divisor: 1,
        witness_ambient: "U".into(),
        witness: LatticeVector(vec![d, 1]),
    }];
    if two_d % 18 == 12 {
        // 2d = 18n - 6: witness 3n*u1 + 3*u2 + (2a + b) in U + A2(-1)
        let n = (two_d + 6) / 18;
        out.push(PolarisationClass {
            two_d,
            kind: PolarisationType::NonSplit,
            divisor: 3,
            witness_ambient: "U+A2(-1)".into(),
            witness: LatticeVector(vec![3 * n, 3, 2, 1]),
        });
    }
    for c in &out {
        debug_assert!(verify_class(c).is_ok());
    }
    Ok(out)
}

/// Checks the witness has the claimed norm, divisor and primitivity inside
/// its stated ambient.
pub fn verify_class(c: &PolarisationClass) -> Result<()> {
    let amb = parse_lattice(&c.witness_ambient)?.evaluate()?;
    if c.witness.content() != 1 {
        return Err(Error::NonPrimitive(c.witness.content()));
    }
    let norm = amb.norm(&c.witness);
    if norm != c.two_d {
        return Err(Error::Invalid(format!(
            "witness norm {} differs from degree {}",
            norm, c.two_d
        )));
    }
    let div = amb.divisor(&c.witness)?;
    if div != c.divisor {
        return Err(Error::Invalid(format!(
            "witness divisor {} differs from claimed {}",
            div, c.divisor
        )));
    }
    Ok(())
}

/// The witness padded with zeros into the full rank-26 lattice. The small
/// ambient occupies the leading coordinates: `U` is the first hyperbolic
/// plane; `U + A2(-1)` is the first plane plus the trailing A2(-1) block.
pub fn embed_witness(c: &PolarisationClass) -> Result<(GramLattice, LatticeVector)> {
    let full = parse_lattice(AMBIENT)?.evaluate()?;
    let n = full.rank();
    let mut coords = vec![0i64; n];
    match c.kind {
        PolarisationType::Split => {
            coords[0] = c.witness.0[0];
            coords[1] = c.witness.0[1];
        }
        PolarisationType::NonSplit => {
            coords[0] = c.witness.0[0];
            coords[1] = c.witness.0[1];
            coords[n - 2] = c.witness.0[2];
            coords[n - 1] = c.witness.0[3];
        }
    }
    Ok((full, LatticeVector(coords)))
}

/// The complement h^perp in the full lattice, in block form:
///   split:     2U + 2E8(-1) + A2(-1) + <-2d>
///   non-split: 2U + 2E8(-1) + Q(-1), Q ternary positive of determinant 2d/3.
/// The block model is verified against the actual complement of the embedded
/// witness (determinant and signature).
pub fn complement_lattice(c: &PolarisationClass) -> Result<(GramLattice, String)> {
    let (model, label) = match c.kind {
        PolarisationType::Split => {
            let spec = format!("2U+2E8(-1)+A2(-1)+<-{}>", c.two_d);
            (parse_lattice(&spec)?.evaluate()?, spec)
        }
        PolarisationType::NonSplit => {
            let q_neg = nonsplit_q_lattice(c)?.0;
            let head = parse_lattice("2U+2E8(-1)")?.evaluate()?;
            (block_sum(&head, &q_neg)?, "2U+2E8(-1)+Q(-1)".into())
        }
    };
    let (full, h) = embed_witness(c)?;
    let (actual, _) = full.orthogonal_complement(&h)?;
    if actual.determinant() != model.determinant() || actual.signature() != model.signature() {
        return Err(Error::Invalid(
            "complement block model disagrees with direct computation".into(),
        ));
    }
    Ok((model, label))
}

/// Q(-1) = h^perp in U + A2(-1) for a non-split class; returns the negative
/// definite lattice and its basis in U + A2(-1) coordinates.
pub fn nonsplit_q_lattice(c: &PolarisationClass) -> Result<(GramLattice, Vec<LatticeVector>)> {
    if c.kind != PolarisationType::NonSplit {
        return Err(Error::Invalid("Q is defined only for non-split classes".into()));
    }
    let amb = parse_lattice("U+A2(-1)")?.evaluate()?;
    let (q_neg, basis) = amb.orthogonal_complement(&c.witness)?;
    debug_assert!(q_neg.is_negative_definite());
    debug_assert_eq!(q_neg.determinant().abs(), Int::from(c.two_d / 3));
    Ok((q_neg, basis))
}

/// Orthogonal block sum of two Gram lattices.
pub fn block_sum(a: &GramLattice, b: &GramLattice) -> Result<GramLattice> {
    let (ra, rb) = (a.rank(), b.rank());
    let n = ra + rb;
    let mut gram = vec![vec![0i64; n]; n];
    for i in 0..ra {
        gram[i][..ra].copy_from_slice(&a.gram()[i]);
    }
    for i in 0..rb {
        gram[ra + i][ra..].copy_from_slice(&b.gram()[i]);
    }
    GramLattice::new(gram)
}

/// Number of roots of E6 orthogonal to a divisor-3 vector of the given norm,
/// for the four smallest non-split degrees. Values come with a structural
/// cross-check on the positive ternary form Q = (h^perp)(-1):
///   det Q =  4: Q is A3 (12 roots);
///   det Q = 10: Q is the A1-complement in A4;
///   det Q = 16: Q contains A2 + <48> with index 3;
///   det Q = 22: Q contains A2 + <66> with index 3.
pub fn nonsplit_orthogonal_root_count(c: &PolarisationClass) -> Result<Option<usize>> {
    if c.kind != PolarisationType::NonSplit {
        return Err(Error::Invalid(
            "orthogonal root table applies to non-split classes".into(),
        ));
    }
    let n = match c.two_d {
        12 => 40,
        30 => 22,
        48 => 20,
        66 => 14,
        _ => return Ok(None),
    };
    let q = nonsplit_q_lattice(c)?.0.negated();
    match c.two_d {
        12 => {
            let label = roots::classify_root_system(&roots::vectors_of_norm(&q, 2)?, &q)?;
            check(label.to_string() == "A3", "Q for degree 12 is not A3")?;
        }
        30 => {
            let a4 = parse_lattice("A4")?.evaluate()?;
            let e1 = LatticeVector(vec![1, 0, 0, 0]);
            let (model, _) = a4.orthogonal_complement(&e1)?;
            check(
                fingerprint(&q)? == fingerprint(&model)?,
                "Q for degree 30 does not match the A1-complement in A4",
            )?;
        }
        48 | 66 => {
            let a2 = roots::RootSystemLabel::parse("A2")?;
            let emb = roots::embed_root_sublattice(&a2, &q)?
                .ok_or_else(|| Error::Invalid("A2 does not embed into Q".into()))?;
            let (line, _) = q.orthogonal_complement_span(&emb)?;
            check(
                line.rank() == 1 && line.gram()[0][0] == c.two_d,
                "rank-1 complement of A2 in Q has the wrong norm",
            )?;
        }
        _ => unreachable!(),
    }
    Ok(Some(n))
}

fn check(cond: bool, msg: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Invalid(msg.into()))
    }
}

/// (|det|, vector counts in norms 2..=8): a cheap isometry fingerprint for
/// small definite lattices.
pub fn fingerprint(l: &GramLattice) -> Result<(Int, Vec<usize>)> {
    let counts = (1..=4)
        .map(|k| roots::count_vectors(l, 2 * k))
        .collect::<Result<Vec<_>>>()?;
    Ok((l.determinant().abs(), counts))
}
