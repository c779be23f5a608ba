//! Even integral lattices as exact Gram matrices, plus the formal-sum
//! mini-language for catalogue lattices (`U`, `A_n`, `D_n`, `E_n`, `<k>`,
//! each optionally rescaled).
//!
//! Grammar of the mini-language:
//!
//! ```text
//! expr  := term ('+' term)*
//! term  := [multiplicity] kind [ '(' scale ')' ]
//! kind  := 'U' | 'A' n | 'D' n | 'E' n | '<' k '>'
//! ```
//!
//! `A2(-1)` is `A_2` rescaled by `-1`; `<k>` is the rank-1 lattice of a
//! vector of square `k` (`k` must be even). Multiplicities repeat the
//! component, e.g. `2U+2E8(-1)+A2(-1)+<-12>`.
//!
//! Determinants are reported with their sign; many statements about
//! complements only pin |det| and the signature, which we track separately
//! (the sources do not fix a sign convention for `det L_h`).

use crate::error::{Error, Result};
use crate::matrix::{self, IMat, Int};
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use std::fmt;

/// An even integral lattice given by a symmetric Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GramLattice {
    gram: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    basis_names: Option<Vec<String>>,
}

/// An integer vector in the basis of some `GramLattice`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LatticeVector(pub Vec<i64>);

impl LatticeVector {
    pub fn content(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| gcd64(g, x.abs()))
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }
}

pub(crate) fn gcd64(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl GramLattice {
    /// Builds a lattice, rejecting asymmetric grams, odd diagonal entries
    /// and degenerate forms.
    pub fn new(gram: Vec<Vec<i64>>) -> Result<Self> {
        let n = gram.len();
        for row in &gram {
            if row.len() != n {
                return Err(Error::Invalid("gram matrix is not square".into()));
            }
        }
        for i in 0..n {
            if gram[i][i] % 2 != 0 {
                return Err(Error::OddLattice(gram[i][i]));
            }
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(Error::Invalid("gram matrix is not symmetric".into()));
                }
            }
        }
        let l = GramLattice {
            gram,
            basis_names: None,
        };
        if n > 0 && l.determinant().is_zero() {
            return Err(Error::Degenerate);
        }
        Ok(l)
    }

    pub fn with_basis_names(mut self, names: Vec<String>) -> Self {
        self.basis_names = Some(names);
        self
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn gram(&self) -> &Vec<Vec<i64>> {
        &self.gram
    }

    pub fn basis_names(&self) -> Option<&[String]> {
        self.basis_names.as_deref()
    }

    pub fn gram_big(&self) -> IMat {
        matrix::int_mat_from_i64(&self.gram)
    }

    pub fn determinant(&self) -> Int {
        matrix::det_bareiss(&self.gram_big())
    }

    pub fn signature(&self) -> (usize, usize) {
        matrix::signature(&self.gram_big())
    }

    pub fn is_positive_definite(&self) -> bool {
        matrix::ldl(&self.gram_big()).is_some()
    }

    pub fn is_negative_definite(&self) -> bool {
        self.negated().is_positive_definite()
    }

    /// Same module with the form negated (L(-1)).
    pub fn negated(&self) -> GramLattice {
        GramLattice {
            gram: self
                .gram
                .iter()
                .map(|r| r.iter().map(|&x| -x).collect())
                .collect(),
            basis_names: self.basis_names.clone(),
        }
    }

    pub fn norm(&self, v: &LatticeVector) -> i64 {
        self.inner(v, v)
    }

    pub fn inner(&self, u: &LatticeVector, v: &LatticeVector) -> i64 {
        let n = self.rank();
        assert_eq!(u.0.len(), n);
        assert_eq!(v.0.len(), n);
        let mut s: i128 = 0;
        for i in 0..n {
            for j in 0..n {
                s += u.0[i] as i128 * self.gram[i][j] as i128 * v.0[j] as i128;
            }
        }
        i64::try_from(s).expect("inner product overflow")
    }

    /// gcd of (v, b_i) over the basis: the positive generator of (v, L).
    pub fn divisor(&self, v: &LatticeVector) -> Result<i64> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let mut g = 0i64;
        for i in 0..self.rank() {
            let mut s: i128 = 0;
            for j in 0..self.rank() {
                s += self.gram[i][j] as i128 * v.0[j] as i128;
            }
            g = gcd64(g, i64::try_from(s).map_err(|_| Error::Overflow)?);
        }
        Ok(g)
    }

    /// Orthogonal complement of a primitive vector: the saturated sublattice
    /// {x : (x,v) = 0} on a Hermite-reduced basis. Also returns the basis
    /// vectors in the coordinates of `self`.
    pub fn orthogonal_complement(&self, v: &LatticeVector) -> Result<(GramLattice, Vec<LatticeVector>)> {
        if v.is_zero() {
            return Err(Error::ZeroVector);
        }
        let c = v.content();
        if c != 1 {
            return Err(Error::NonPrimitive(c));
        }
        let n = self.rank();
        // functional w = gram * v; kernel of w^T is the complement
        let mut w: Vec<Int> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| Int::from(self.gram[i][j]) * Int::from(v.0[j]))
                    .sum()
            })
            .collect();
        // column operations bringing w to (g, 0, ..., 0); track them in vt
        let mut vt = matrix::identity(n);
        loop {
            let mut best: Option<usize> = None;
            for j in 0..n {
                if !w[j].is_zero() {
                    best = Some(match best {
                        None => j,
                        Some(b) => {
                            if w[j].abs() < w[b].abs() {
                                j
                            } else {
                                b
                            }
                        }
                    });
                }
            }
            let b = best.expect("nonzero vector has nonzero functional");
            if b != 0 {
                w.swap(0, b);
                for row in vt.iter_mut() {
                    row.swap(0, b);
                }
            }
            let mut done = true;
            for j in 1..n {
                if !w[j].is_zero() {
                    let q = &w[j] / &w[0];
                    if !q.is_zero() {
                        let t = &q * &w[0];
                        w[j] -= t;
                        for row in vt.iter_mut() {
                            let t = &q * &row[0];
                            row[j] -= t;
                        }
                    }
                    if !w[j].is_zero() {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        // kernel basis: columns 1..n of vt, as rows, Hermite-reduced
        let mut basis: IMat = (1..n)
            .map(|j| (0..n).map(|i| vt[i][j].clone()).collect())
            .collect();
        matrix::row_hnf(&mut basis);
        let basis_i64: Vec<LatticeVector> = basis
            .iter()
            .map(|row| {
                Ok(LatticeVector(
                    row.iter()
                        .map(|x| x.to_i64().ok_or(Error::Overflow))
                        .collect::<Result<Vec<_>>>()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let k = basis_i64.len();
        let mut gram = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                gram[i][j] = self.inner(&basis_i64[i], &basis_i64[j]);
            }
        }
        let sub = GramLattice::new(gram)?;
        // saturation guard: |det(complement)| * div(v)^2 == |v^2| * |det L|
        let nv = self.norm(v);
        if nv != 0 {
            let div = self.divisor(v)?;
            let lhs = sub.determinant().abs() * Int::from(div) * Int::from(div);
            let rhs = (Int::from(nv) * self.determinant()).abs();
            assert_eq!(lhs, rhs, "complement is not saturated");
        }
        Ok((sub, basis_i64))
    }

    /// Saturated orthogonal complement of the span of several vectors:
    /// {x : (x, v_s) = 0 for all s}, Hermite-reduced basis. Kernel columns of
    /// a unimodular transform, hence saturated by construction.
    pub fn orthogonal_complement_span(
        &self,
        vs: &[LatticeVector],
    ) -> Result<(GramLattice, Vec<LatticeVector>)> {
        let n = self.rank();
        let k = vs.len();
        let mut a: IMat = vec![vec![Int::zero(); n]; k];
        for (s, v) in vs.iter().enumerate() {
            assert_eq!(v.0.len(), n);
            for i in 0..n {
                for j in 0..n {
                    a[s][i] += Int::from(self.gram[i][j]) * Int::from(v.0[j]);
                }
            }
        }
        let (_, d, v) = matrix::smith_normal_form(&a);
        let mut basis: IMat = Vec::new();
        for j in 0..n {
            let pivot_zero = j >= k || d[j][j].is_zero();
            if pivot_zero {
                basis.push((0..n).map(|i| v[i][j].clone()).collect());
            }
        }
        matrix::row_hnf(&mut basis);
        let basis_i64: Vec<LatticeVector> = basis
            .iter()
            .map(|row| {
                Ok(LatticeVector(
                    row.iter()
                        .map(|x| x.to_i64().ok_or(Error::Overflow))
                        .collect::<Result<Vec<_>>>()?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = basis_i64.len();
        let mut gram = vec![vec![0i64; m]; m];
        for i in 0..m {
            for j in 0..m {
                gram[i][j] = self.inner(&basis_i64[i], &basis_i64[j]);
            }
        }
        Ok((GramLattice::new(gram)?, basis_i64))
    }
}

impl fmt::Display for GramLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in &self.gram {
            writeln!(f, "{:?}", row)?;
        }
        Ok(())
    }
}

/// One component of a formal orthogonal sum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Kind {
    U,
    A(u32),
    D(u32),
    E(u32),
    Rank1(i64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Component {
    pub kind: Kind,
    /// rescaling factor epsilon, Gram multiplied entrywise
    pub scale: i64,
}

/// A formal orthogonal sum of catalogue components.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeExpr {
    pub components: Vec<Component>,
}

impl Component {
    pub fn rank(&self) -> usize {
        match self.kind {
            Kind::U => 2,
            Kind::A(n) | Kind::D(n) | Kind::E(n) => n as usize,
            Kind::Rank1(_) => 1,
        }
    }

    fn base_gram(&self) -> Result<Vec<Vec<i64>>> {
        Ok(match self.kind {
            Kind::U => vec![vec![0, 1], vec![1, 0]],
            Kind::A(n) => chain_gram(n as usize),
            Kind::D(n) => {
                // simple roots e1-e2, ..., e_{n-1}-e_n, e_{n-1}+e_n
                let n = n as usize;
                let mut g = chain_gram(n);
                if n >= 3 {
                    // last node attaches to node n-3 instead of n-2
                    g[n - 1][n - 2] = 0;
                    g[n - 2][n - 1] = 0;
                    g[n - 1][n - 3] = -1;
                    g[n - 3][n - 1] = -1;
                } else {
                    // D2 = A1 + A1
                    g[0][1] = 0;
                    g[1][0] = 0;
                }
                g
            }
            Kind::E(n) => {
                // chain a1..a_{n-1} with the branch node a_n attached to a3
                let n = n as usize;
                let mut g = chain_gram(n);
                g[n - 1][n - 2] = 0;
                g[n - 2][n - 1] = 0;
                g[n - 1][2] = -1;
                g[2][n - 1] = -1;
                g
            }
            Kind::Rank1(k) => {
                if k % 2 != 0 {
                    return Err(Error::OddLattice(k));
                }
                vec![vec![k]]
            }
        })
    }

    pub fn gram(&self) -> Result<Vec<Vec<i64>>> {
        let mut g = self.base_gram()?;
        for row in g.iter_mut() {
            for x in row.iter_mut() {
                *x *= self.scale;
            }
        }
        for (i, row) in g.iter().enumerate() {
            if row[i] % 2 != 0 {
                return Err(Error::OddAfterScale);
            }
        }
        Ok(g)
    }
}

fn chain_gram(n: usize) -> Vec<Vec<i64>> {
    let mut g = vec![vec![0i64; n]; n];
    for i in 0..n {
        g[i][i] = 2;
        if i + 1 < n {
            g[i][i + 1] = -1;
            g[i + 1][i] = -1;
        }
    }
    g
}

impl LatticeExpr {
    pub fn rank(&self) -> usize {
        self.components.iter().map(|c| c.rank()).sum()
    }

    /// Block-diagonal Gram of the formal sum.
    pub fn evaluate(&self) -> Result<GramLattice> {
        let n = self.rank();
        let mut gram = vec![vec![0i64; n]; n];
        let mut names = Vec::with_capacity(n);
        let mut off = 0;
        for (ci, c) in self.components.iter().enumerate() {
            let g = c.gram()?;
            let k = g.len();
            for i in 0..k {
                for j in 0..k {
                    gram[off + i][off + j] = g[i][j];
                }
                names.push(format!("c{}.{}", ci, i + 1));
            }
            off += k;
        }
        Ok(GramLattice::new(gram)?.with_basis_names(names))
    }

    pub fn signature(&self) -> Result<(usize, usize)> {
        Ok(self.evaluate()?.signature())
    }

    /// Number of unscaled hyperbolic-plane summands (for the Eichler
    /// criterion precondition).
    pub fn u_summands(&self) -> usize {
        self.components
            .iter()
            .filter(|c| c.kind == Kind::U && c.scale == 1)
            .count()
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in &self.components {
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match c.kind {
                Kind::U => write!(f, "U")?,
                Kind::A(n) => write!(f, "A{}", n)?,
                Kind::D(n) => write!(f, "D{}", n)?,
                Kind::E(n) => write!(f, "E{}", n)?,
                Kind::Rank1(k) => write!(f, "<{}>", k)?,
            }
            if c.scale != 1 {
                write!(f, "({})", c.scale)?;
            }
        }
        Ok(())
    }
}

/// Parses the lattice mini-language. See the module docs for the grammar.
pub fn parse_lattice(spec: &str) -> Result<LatticeExpr> {
    let bytes: Vec<char> = spec.chars().collect();
    let mut pos = 0usize;
    let mut components = Vec::new();

    let skip_ws = |pos: &mut usize| {
        while *pos < bytes.len() && bytes[*pos].is_whitespace() {
            *pos += 1;
        }
    };
    let parse_int = |pos: &mut usize| -> Result<i64> {
        let start = *pos;
        let mut s = String::new();
        if *pos < bytes.len() && (bytes[*pos] == '-' || bytes[*pos] == '+') {
            s.push(bytes[*pos]);
            *pos += 1;
        }
        while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
            s.push(bytes[*pos]);
            *pos += 1;
        }
        s.parse::<i64>().map_err(|_| Error::Parse {
            pos: start,
            msg: "expected integer".into(),
        })
    };

    loop {
        skip_ws(&mut pos);
        // optional multiplicity
        let mut mult = 1u32;
        let digits_start = pos;
        if pos < bytes.len() && bytes[pos].is_ascii_digit() {
            let mut s = String::new();
            while pos < bytes.len() && bytes[pos].is_ascii_digit() {
                s.push(bytes[pos]);
                pos += 1;
            }
            // only a multiplicity if followed by a kind letter or '<'
            if pos < bytes.len() && (bytes[pos].is_ascii_alphabetic() || bytes[pos] == '<') {
                mult = s.parse().map_err(|_| Error::Parse {
                    pos: digits_start,
                    msg: "multiplicity too large".into(),
                })?;
                if mult == 0 {
                    return Err(Error::Parse {
                        pos: digits_start,
                        msg: "zero multiplicity".into(),
                    });
                }
            } else {
                return Err(Error::Parse {
                    pos,
                    msg: "expected lattice kind after multiplicity".into(),
                });
            }
        }
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            return Err(Error::Parse {
                pos,
                msg: "expected lattice kind".into(),
            });
        }
        let kind = match bytes[pos] {
            'U' => {
                pos += 1;
                Kind::U
            }
            'A' | 'D' | 'E' => {
                let fam = bytes[pos];
                pos += 1;
                let n_start = pos;
                let n = parse_int(&mut pos)?;
                let bad = |msg: &str| Error::Parse {
                    pos: n_start,
                    msg: msg.into(),
                };
                match fam {
                    'A' if n >= 1 => Kind::A(n as u32),
                    'D' if n >= 2 => Kind::D(n as u32),
                    'E' if (6..=8).contains(&n) => Kind::E(n as u32),
                    'A' => return Err(bad("A_n requires n >= 1")),
                    'D' => return Err(bad("D_n requires n >= 2")),
                    _ => return Err(bad("E_n requires n in {6,7,8}")),
                }
            }
            '<' => {
                pos += 1;
                skip_ws(&mut pos);
                let k = parse_int(&mut pos)?;
                skip_ws(&mut pos);
                if pos >= bytes.len() || bytes[pos] != '>' {
                    return Err(Error::Parse {
                        pos,
                        msg: "expected '>'".into(),
                    });
                }
                pos += 1;
                if k % 2 != 0 {
                    return Err(Error::OddLattice(k));
                }
                if k == 0 {
                    return Err(Error::Degenerate);
                }
                Kind::Rank1(k)
            }
            c => {
                return Err(Error::Parse {
                    pos,
                    msg: format!("unexpected character '{}'", c),
                })
            }
        };
        // optional scale
        let mut scale = 1i64;
        skip_ws(&mut pos);
        if pos < bytes.len() && bytes[pos] == '(' {
            pos += 1;
            skip_ws(&mut pos);
            scale = parse_int(&mut pos)?;
            skip_ws(&mut pos);
            if pos >= bytes.len() || bytes[pos] != ')' {
                return Err(Error::Parse {
                    pos,
                    msg: "expected ')'".into(),
                });
            }
            pos += 1;
            if scale == 0 {
                return Err(Error::Parse {
                    pos,
                    msg: "zero scale".into(),
                });
            }
        }
        let comp = Component { kind, scale };
        comp.gram()?; // validates evenness after scaling
        for _ in 0..mult {
            components.push(comp);
        }
        skip_ws(&mut pos);
        if pos >= bytes.len() {
            break;
        }
        if bytes[pos] != '+' {
            return Err(Error::Parse {
                pos,
                msg: "expected '+'".into(),
            });
        }
        pos += 1;
    }
    Ok(LatticeExpr { components })
}
