//! Short-vector enumeration in positive definite lattices and ADE root-system
//! identification.
//!
//! Enumeration works in the positive definite model; callers holding a
//! negative definite lattice negate the Gram first (`GramLattice::negated`).
//! The positive system used for classification is fixed once and for all:
//! a root is positive when its first nonzero coordinate is positive. This
//! order is compatible with addition, so the indecomposable positive roots
//! are a set of simple roots, and the output is deterministic.

use crate::error::{Error, Result};
use crate::lattice::{GramLattice, LatticeVector};
use crate::matrix::Rat;
use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashSet};
use std::fmt;

pub const MAX_ENUM_RANK: usize = 12;

/// Complete list of vectors of square `n`, closed under negation, sorted
/// lexicographically.
pub fn vectors_of_norm(l: &GramLattice, n: i64) -> Result<Vec<LatticeVector>> {
    if n <= 0 {
        return Err(Error::Invalid("norm must be positive".into()));
    }
    if l.rank() > MAX_ENUM_RANK {
        return Err(Error::Invalid(format!(
            "rank {} exceeds enumeration cap {}",
            l.rank(),
            MAX_ENUM_RANK
        )));
    }
    let (low, diag) = crate::matrix::ldl(&l.gram_big()).ok_or(Error::NotPositiveDefinite)?;
    let rank = l.rank();
    let mut out = Vec::new();
    let mut x = vec![0i64; rank];
    let target = Rat::from(BigInt::from(n));
    enumerate(&low, &diag, rank, &target, &mut x, &mut out);
    // exact-norm filter is built into the recursion; verify and sort
    for v in &out {
        debug_assert_eq!(l.norm(v), n);
    }
    out.sort();
    Ok(out)
}

fn enumerate(
    low: &[Vec<Rat>],
    diag: &[Rat],
    level: usize,
    rem: &Rat,
    x: &mut Vec<i64>,
    out: &mut Vec<LatticeVector>,
) {
    if level == 0 {
        if rem.is_zero() {
            out.push(LatticeVector(x.clone()));
        }
        return;
    }
    let j = level - 1;
    // center c = sum_{i>j} l[i][j] * x_i
    let mut c = Rat::zero();
    for i in j + 1..low.len() {
        if x[i] != 0 {
            c += &low[i][j] * Rat::from(BigInt::from(x[i]));
        }
    }
    // d_j * (x_j + c)^2 <= rem
    let alpha = rem / &diag[j];
    if alpha.is_negative() {
        return;
    }
    let sqrt_alpha = alpha.to_f64().map(f64::sqrt).unwrap_or(0.0);
    let c_f = c.to_f64().unwrap_or(0.0);
    let fits = |xj: i64, c: &Rat, alpha: &Rat| {
        let t = Rat::from(BigInt::from(xj)) + c;
        &t * &t <= *alpha
    };
    // float estimates widened by exact checks; the interval may be empty, so
    // only extension loops (which terminate) are exact — non-fitting
    // candidates inside the range are discarded by the exact test below
    let mut hi = (-c_f + sqrt_alpha).floor() as i64 + 1;
    while fits(hi + 1, &c, &alpha) {
        hi += 1;
    }
    let mut lo = (-c_f - sqrt_alpha).ceil() as i64 - 1;
    while fits(lo - 1, &c, &alpha) {
        lo -= 1;
    }
    for xj in lo..=hi {
        let t = Rat::from(BigInt::from(xj)) + &c;
        let used = &diag[j] * &t * &t;
        let next = rem - used;
        if next.is_negative() {
            continue;
        }
        x[j] = xj;
        enumerate(low, diag, j, &next, x, out);
    }
    x[j] = 0;
}

pub fn count_vectors(l: &GramLattice, n: i64) -> Result<usize> {
    Ok(vectors_of_norm(l, n)?.len())
}

/// Roots of `l_ambient` orthogonal to `v`, and their number `N`.
pub fn roots_orthogonal_to(
    v: &LatticeVector,
    l: &GramLattice,
) -> Result<(Vec<LatticeVector>, usize)> {
    let roots = vectors_of_norm(l, 2)?;
    let orth: Vec<LatticeVector> = roots
        .into_iter()
        .filter(|r| l.inner(r, v) == 0)
        .collect();
    let n = orth.len();
    Ok((orth, n))
}

/// An ADE family letter with its rank.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct AdeComponent {
    pub family: char,
    pub rank: u32,
}

impl AdeComponent {
    pub fn root_count(&self) -> usize {
        let n = self.rank as usize;
        match self.family {
            'A' => n * (n + 1),
            'D' => 2 * n * (n - 1),
            'E' => match n {
                6 => 72,
                7 => 126,
                8 => 240,
                _ => unreachable!(),
            },
            _ => unreachable!(),
        }
    }
}

/// Multiset of ADE components; canonical string sorts by rank, then family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootSystemLabel {
    pub components: Vec<AdeComponent>,
}

impl RootSystemLabel {
    pub fn new(mut components: Vec<AdeComponent>) -> Self {
        components.sort_by_key(|c| (c.rank, c.family));
        RootSystemLabel { components }
    }

    pub fn empty() -> Self {
        RootSystemLabel { components: vec![] }
    }

    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank as usize).sum()
    }

    pub fn root_count(&self) -> usize {
        self.components.iter().map(|c| c.root_count()).sum()
    }

    /// Parses labels like "A1+A3", "D4", "0".
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "0" || s.is_empty() {
            return Ok(Self::empty());
        }
        let mut comps = Vec::new();
        for part in s.split('+') {
            let part = part.trim();
            let mut chars = part.chars();
            let family = chars.next().ok_or_else(|| Error::Invalid("empty label component".into()))?;
            let rank: u32 = chars
                .as_str()
                .parse()
                .map_err(|_| Error::Invalid(format!("bad root label '{}'", part)))?;
            let ok = matches!(
                (family, rank),
                ('A', n) if n >= 1
            ) || matches!((family, rank), ('D', n) if n >= 4)
                || matches!((family, rank), ('E', 6..=8));
            if !ok {
                return Err(Error::Invalid(format!("bad root label '{}'", part)));
            }
            comps.push(AdeComponent { family, rank });
        }
        Ok(Self::new(comps))
    }

    /// Does this label contain `other` as a sub-multiset of components?
    pub fn contains(&self, other: &RootSystemLabel) -> bool {
        let mut pool = self.components.clone();
        other.components.iter().all(|c| {
            if let Some(i) = pool.iter().position(|p| p == c) {
                pool.remove(i);
                true
            } else {
                false
            }
        })
    }
}

impl fmt::Display for RootSystemLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| format!("{}{}", c.family, c.rank))
            .collect();
        write!(f, "{}", parts.join("+"))
    }
}

fn is_positive(v: &LatticeVector) -> bool {
    v.0.iter().find(|&&x| x != 0).map(|&x| x > 0).unwrap_or(false)
}

/// Identifies the ADE type of a set of norm-2 vectors closed under negation.
pub fn classify_root_system(roots: &[LatticeVector], l: &GramLattice) -> Result<RootSystemLabel> {
    if roots.is_empty() {
        return Ok(RootSystemLabel::empty());
    }
    let set: HashSet<&LatticeVector> = roots.iter().collect();
    if set.len() != roots.len() {
        return Err(Error::NotRootSystem("duplicate vectors".into()));
    }
    for r in roots {
        if l.norm(r) != 2 {
            return Err(Error::NotRootSystem(format!(
                "vector of norm {} is not a root",
                l.norm(r)
            )));
        }
        let neg = LatticeVector(r.0.iter().map(|&x| -x).collect());
        if !set.contains(&neg) {
            return Err(Error::NotRootSystem("set not closed under negation".into()));
        }
    }
    let positives: BTreeSet<LatticeVector> = roots.iter().filter(|r| is_positive(r)).cloned().collect();
    let pos_set: HashSet<&LatticeVector> = positives.iter().collect();
    let mut simple: Vec<LatticeVector> = Vec::new();
    for r in &positives {
        let decomposable = positives.iter().any(|p| {
            if p == r {
                return false;
            }
            let q = LatticeVector(r.0.iter().zip(&p.0).map(|(a, b)| a - b).collect());
            pos_set.contains(&q)
        });
        if !decomposable {
            simple.push(r.clone());
        }
    }
    let k = simple.len();
    let mut adj = vec![vec![false; k]; k];
    for i in 0..k {
        for j in i + 1..k {
            match l.inner(&simple[i], &simple[j]) {
                0 => {}
                -1 => {
                    adj[i][j] = true;
                    adj[j][i] = true;
                }
                ip => {
                    return Err(Error::NotRootSystem(format!(
                        "simple roots with inner product {}",
                        ip
                    )))
                }
            }
        }
    }
    // connected components of the Dynkin graph
    let mut comp_id = vec![usize::MAX; k];
    let mut n_comp = 0;
    for s in 0..k {
        if comp_id[s] != usize::MAX {
            continue;
        }
        let mut stack = vec![s];
        while let Some(i) = stack.pop() {
            if comp_id[i] != usize::MAX {
                continue;
            }
            comp_id[i] = n_comp;
            for j in 0..k {
                if adj[i][j] && comp_id[j] == usize::MAX {
                    stack.push(j);
                }
            }
        }
        n_comp += 1;
    }
    let mut comps = Vec::new();
    for c in 0..n_comp {
        let nodes: Vec<usize> = (0..k).filter(|&i| comp_id[i] == c).collect();
        comps.push(classify_component(&nodes, &adj)?);
    }
    let label = RootSystemLabel::new(comps);
    if label.root_count() != roots.len() {
        return Err(Error::NotRootSystem(format!(
            "{} vectors but diagram {} accounts for {} roots",
            roots.len(),
            label,
            label.root_count()
        )));
    }
    Ok(label)
}

fn classify_component(nodes: &[usize], adj: &[Vec<bool>]) -> Result<AdeComponent> {
    let n = nodes.len();
    let deg = |i: usize| nodes.iter().filter(|&&j| adj[i][j]).count();
    let edge_count: usize = nodes.iter().map(|&i| deg(i)).sum::<usize>() / 2;
    if edge_count != n - 1 {
        return Err(Error::NotRootSystem("Dynkin graph has a cycle".into()));
    }
    let trivalent: Vec<usize> = nodes.iter().copied().filter(|&i| deg(i) == 3).collect();
    if nodes.iter().any(|&i| deg(i) > 3) || trivalent.len() > 1 {
        return Err(Error::NotRootSystem("diagram is not of ADE shape".into()));
    }
    if trivalent.is_empty() {
        return Ok(AdeComponent {
            family: 'A',
            rank: n as u32,
        });
    }
    let center = trivalent[0];
    let mut lens: Vec<usize> = Vec::new();
    for &start in nodes.iter().filter(|&&j| adj[center][j]) {
        let mut len = 1;
        let mut prev = center;
        let mut cur = start;
        loop {
            let next: Vec<usize> = nodes
                .iter()
                .copied()
                .filter(|&j| adj[cur][j] && j != prev)
                .collect();
            match next.as_slice() {
                [] => break,
                [nxt] => {
                    prev = cur;
                    cur = *nxt;
                    len += 1;
                }
                _ => unreachable!("second trivalent node already excluded"),
            }
        }
        lens.push(len);
    }
    lens.sort_unstable();
    match lens.as_slice() {
        [1, 1, c] => Ok(AdeComponent {
            family: 'D',
            rank: (c + 3) as u32,
        }),
        [1, 2, 2] => Ok(AdeComponent { family: 'E', rank: 6 }),
        [1, 2, 3] => Ok(AdeComponent { family: 'E', rank: 7 }),
        [1, 2, 4] => Ok(AdeComponent { family: 'E', rank: 8 }),
        _ => Err(Error::NotRootSystem("branch lengths match no ADE diagram".into())),
    }
}

/// Builds the prescribed simple-root Gram pattern for a label.
fn target_pattern(label: &RootSystemLabel) -> Vec<Vec<i64>> {
    let rank = label.rank();
    let mut g = vec![vec![0i64; rank]; rank];
    let mut off = 0usize;
    for c in &label.components {
        let n = c.rank as usize;
        for i in 0..n {
            g[off + i][off + i] = 2;
        }
        let link = |a: usize, b: usize, g: &mut Vec<Vec<i64>>| {
            g[off + a][off + b] = -1;
            g[off + b][off + a] = -1;
        };
        match c.family {
            'A' => {
                for i in 0..n.saturating_sub(1) {
                    link(i, i + 1, &mut g);
                }
            }
            'D' => {
                for i in 0..n - 2 {
                    link(i, i + 1, &mut g);
                }
                link(n - 3, n - 1, &mut g);
            }
            'E' => {
                for i in 0..n - 2 {
                    link(i, i + 1, &mut g);
                }
                link(2, n - 1, &mut g);
            }
            _ => unreachable!(),
        }
        off += n;
    }
    g
}

/// Backtracking search for simple roots in `ambient` realizing `target`.
/// Returns the first embedding in deterministic order, or `None`.
pub fn embed_root_sublattice(
    target: &RootSystemLabel,
    ambient: &GramLattice,
) -> Result<Option<Vec<LatticeVector>>> {
    let rank = target.rank();
    if rank == 0 {
        return Ok(Some(vec![]));
    }
    if rank > ambient.rank() {
        return Ok(None);
    }
    let roots = vectors_of_norm(ambient, 2)?;
    let pattern = target_pattern(target);
    let mut chosen: Vec<usize> = Vec::new();
    if backtrack(&roots, ambient, &pattern, &mut chosen) {
        Ok(Some(chosen.into_iter().map(|i| roots[i].clone()).collect()))
    } else {
        Ok(None)
    }
}

fn backtrack(
    roots: &[LatticeVector],
    l: &GramLattice,
    pattern: &[Vec<i64>],
    chosen: &mut Vec<usize>,
) -> bool {
    let k = chosen.len();
    if k == pattern.len() {
        return true;
    }
    'cand: for idx in 0..roots.len() {
        for (i, &ci) in chosen.iter().enumerate() {
            if l.inner(&roots[ci], &roots[idx]) != pattern[i][k] {
                continue 'cand;
            }
        }
        chosen.push(idx);
        if backtrack(roots, l, pattern, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// Roots of `ambient` orthogonal to every vector in `sub`.
pub fn complement_roots(
    sub: &[LatticeVector],
    ambient: &GramLattice,
) -> Result<Vec<LatticeVector>> {
    let roots = vectors_of_norm(ambient, 2)?;
    Ok(roots
        .into_iter()
        .filter(|r| sub.iter().all(|s| ambient.inner(r, s) == 0))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::parse_lattice;

    fn lat(s: &str) -> GramLattice {
        parse_lattice(s).unwrap().evaluate().unwrap()
    }

    #[test]
    fn catalogue_root_counts() {
        assert_eq!(count_vectors(&lat("A2"), 2).unwrap(), 6);
        assert_eq!(count_vectors(&lat("A3"), 2).unwrap(), 12);
        assert_eq!(count_vectors(&lat("D4"), 2).unwrap(), 24);
        assert_eq!(count_vectors(&lat("D4"), 4).unwrap(), 24);
        assert_eq!(count_vectors(&lat("E6"), 2).unwrap(), 72);
        assert_eq!(count_vectors(&lat("E7"), 2).unwrap(), 126);
        assert_eq!(count_vectors(&lat("E8"), 2).unwrap(), 240);
    }

    #[test]
    fn norm8_in_a2_by_direct_scan() {
        // oracle: v^T G v = 2(x^2 - xy + y^2) = 8 over a box
        let mut oracle = 0;
        for x in -10i64..=10 {
            for y in -10i64..=10 {
                if 2 * (x * x - x * y + y * y) == 8 {
                    oracle += 1;
                }
            }
        }
        assert_eq!(count_vectors(&lat("A2"), 8).unwrap(), oracle);
        assert_eq!(oracle, 6);
    }

    #[test]
    fn enumeration_is_negation_closed_and_exact() {
        let l = lat("D4");
        let vs = vectors_of_norm(&l, 6).unwrap();
        let set: HashSet<_> = vs.iter().cloned().collect();
        assert_eq!(set.len(), vs.len());
        for v in &vs {
            assert_eq!(l.norm(v), 6);
            assert!(set.contains(&LatticeVector(v.0.iter().map(|&x| -x).collect())));
        }
        assert_eq!(vs.len() % 2, 0);
    }

    #[test]
    fn not_positive_definite_rejected() {
        assert_eq!(
            vectors_of_norm(&lat("U"), 2),
            Err(Error::NotPositiveDefinite)
        );
    }

    #[test]
    fn classify_catalogue_lattices() {
        for (spec, label) in [
            ("A1", "A1"),
            ("A2", "A2"),
            ("A5", "A5"),
            ("D4", "D4"),
            ("D5", "D5"),
            ("E6", "E6"),
            ("E7", "E7"),
            ("E8", "E8"),
            ("A1+A3", "A1+A3"),
            ("D2", "A1+A1"),
            ("D3", "A3"),
        ] {
            let l = lat(spec);
            let roots = vectors_of_norm(&l, 2).unwrap();
            let got = classify_root_system(&roots, &l).unwrap();
            assert_eq!(got.to_string(), label, "lattice {}", spec);
        }
    }

    #[test]
    fn classify_empty() {
        let l = lat("A2");
        let got = classify_root_system(&[], &l).unwrap();
        assert_eq!(got.to_string(), "0");
        assert_eq!(got.root_count(), 0);
    }

    #[test]
    fn classify_rejects_non_roots() {
        let l = lat("A2");
        let err = classify_root_system(&[LatticeVector(vec![1, -1])], &l);
        assert!(matches!(err, Err(Error::NotRootSystem(_))));
    }

    #[test]
    fn embedding_complements() {
        for (target, ambient, complement) in [
            ("A1", "E6", "A5"),
            ("A2", "E6", "A2+A2"),
            ("A2", "E8", "E6"),
            ("D5", "E8", "A3"),
        ] {
            let amb = lat(ambient);
            let t = RootSystemLabel::parse(target).unwrap();
            let emb = embed_root_sublattice(&t, &amb).unwrap().unwrap();
            let comp = complement_roots(&emb, &amb).unwrap();
            let got = classify_root_system(&comp, &amb).unwrap();
            assert_eq!(got.to_string(), complement, "{} in {}", target, ambient);
        }
    }

    #[test]
    fn embedding_rank_excess() {
        let t = RootSystemLabel::parse("E8").unwrap();
        assert_eq!(embed_root_sublattice(&t, &lat("A2")).unwrap(), None);
    }

    #[test]
    fn three_squares_counts() {
        // N_{3A1}(2d) = r3(d)
        let l = lat("A1+A1+A1");
        assert_eq!(count_vectors(&l, 2).unwrap(), 6);
        assert_eq!(count_vectors(&l, 14).unwrap(), 0); // r3(7) = 0
        // N_{A3}(2d) = r3(2d), at 2d = 4: r3(4) = 6
        assert_eq!(count_vectors(&lat("A3"), 4).unwrap(), 6);
    }
}
