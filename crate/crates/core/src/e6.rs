//! The E6 lattice in its Euclidean model, the Dynkin-diagram involution J,
//! and the J-fixed and J-anti-fixed sublattices.
//!
//! Model: l = x1 e1 + ... + x5 e5 + x6 (e6 + e7 - e8) in Z^8, with the x_i
//! all integral or all half-integral and x1 + ... + x6 even. Then
//! l^2 = x1^2 + ... + x5^2 + 3 x6^2. Coordinates are stored doubled so that
//! half-integral vectors stay in i64.

use crate::error::{Error, Result};
use crate::lattice::{GramLattice, LatticeVector};
use crate::matrix::{self, Int, Rat};
use num_traits::{Signed, ToPrimitive};

/// Doubled model coordinates (2x1, ..., 2x6): all even = integral vector,
/// all odd = half-integral vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct E6Vector(pub [i64; 6]);

impl E6Vector {
    /// Build from integral model coordinates.
    pub fn from_integral(x: [i64; 6]) -> E6Vector {
        E6Vector([2 * x[0], 2 * x[1], 2 * x[2], 2 * x[3], 2 * x[4], 2 * x[5]])
    }

    pub fn is_member(&self) -> bool {
        let c = &self.0;
        let all_even = c.iter().all(|v| v % 2 == 0);
        let all_odd = c.iter().all(|v| v % 2 != 0);
        if !all_even && !all_odd {
            return false;
        }
        // x1 + ... + x6 even <=> sum of doubled coords = 0 mod 4
        let s: i64 = c.iter().sum();
        s.rem_euclid(4) == 0
    }

    fn inner_raw(&self, other: &E6Vector) -> i64 {
        let (a, b) = (&self.0, &other.0);
        let mut s = 0i64;
        for i in 0..5 {
            s += a[i] * b[i];
        }
        s + 3 * a[5] * b[5]
    }

    pub fn inner(&self, other: &E6Vector) -> i64 {
        let s = self.inner_raw(other);
        assert_eq!(s % 4, 0, "inner product of non-members");
        s / 4
    }

    pub fn norm(&self) -> i64 {
        self.inner(self)
    }

    pub fn add(&self, other: &E6Vector) -> E6Vector {
        let mut c = [0i64; 6];
        for i in 0..6 {
            c[i] = self.0[i] + other.0[i];
        }
        E6Vector(c)
    }

    pub fn neg(&self) -> E6Vector {
        let mut c = [0i64; 6];
        for i in 0..6 {
            c[i] = -self.0[i];
        }
        E6Vector(c)
    }
}

/// The fixed simple-root basis, the 72 roots in both coordinate systems, and
/// the involution J (alpha1 <-> alpha6, alpha3 <-> alpha5).
pub struct E6Model {
    lattice: GramLattice,
    alpha: [E6Vector; 6],
    alpha_tilde: E6Vector,
    roots_alpha: Vec<LatticeVector>,
    /// columns: doubled model coordinates of alpha_1..alpha_6
    basis_mat: matrix::IMat,
}

impl E6Model {
    pub fn new() -> E6Model {
        let alpha = [
            E6Vector([1, -1, -1, -1, -1, -1]),
            E6Vector([2, 2, 0, 0, 0, 0]),
            E6Vector([-2, 2, 0, 0, 0, 0]),
            E6Vector([0, -2, 2, 0, 0, 0]),
            E6Vector([0, 0, -2, 2, 0, 0]),
            E6Vector([0, 0, 0, -2, 2, 0]),
        ];
        let alpha_tilde = E6Vector([1, 1, 1, 1, 1, -1]);
        let mut gram = [[0i64; 6]; 6];
        for i in 0..6 {
            for j in 0..6 {
                gram[i][j] = alpha[i].inner(&alpha[j]);
            }
        }
        // chain 1-3-4-5-6 with 2 attached to 4
        let expected: [[i64; 6]; 6] = [
            [2, 0, -1, 0, 0, 0],
            [0, 2, 0, -1, 0, 0],
            [-1, 0, 2, -1, 0, 0],
            [0, -1, -1, 2, -1, 0],
            [0, 0, 0, -1, 2, -1],
            [0, 0, 0, 0, -1, 2],
        ];
        assert_eq!(gram, expected, "simple roots do not realize the E6 diagram");
        let lattice = GramLattice::new(gram.iter().map(|r| r.to_vec()).collect()).unwrap();
        let basis_mat: matrix::IMat = (0..6)
            .map(|i| (0..6).map(|j| Int::from(alpha[j].0[i])).collect())
            .collect();
        let mut model = E6Model {
            lattice,
            alpha,
            alpha_tilde,
            roots_alpha: Vec::new(),
            basis_mat,
        };
        let mut roots = model.model_roots();
        assert_eq!(roots.len(), 72);
        roots.sort();
        model.roots_alpha = roots
            .iter()
            .map(|r| model.to_alpha(r).expect("root lies in the lattice"))
            .collect();
        model
    }

    /// Gram lattice on the simple-root basis.
    pub fn lattice(&self) -> &GramLattice {
        &self.lattice
    }

    pub fn alpha(&self) -> &[E6Vector; 6] {
        &self.alpha
    }

    pub fn alpha_tilde(&self) -> &E6Vector {
        &self.alpha_tilde
    }

    /// All 72 roots in simple-root coordinates.
    pub fn roots(&self) -> &[LatticeVector] {
        &self.roots_alpha
    }

    /// The 72 norm-2 vectors in model coordinates: +-e_i +- e_j (i < j <= 5)
    /// and the half-integral vectors (+-1/2)^6 with an odd number of plus
    /// signs among the six entries.
    fn model_roots(&self) -> Vec<E6Vector> {
        let mut out = Vec::with_capacity(72);
        for i in 0..5 {
            for j in (i + 1)..5 {
                for si in [2i64, -2] {
                    for sj in [2i64, -2] {
                        let mut c = [0i64; 6];
                        c[i] = si;
                        c[j] = sj;
                        out.push(E6Vector(c));
                    }
                }
            }
        }
        for mask in 0u32..64 {
            let mut c = [0i64; 6];
            let mut plus = 0;
            for (i, ci) in c.iter_mut().enumerate() {
                if mask & (1 << i) != 0 {
                    *ci = 1;
                    plus += 1;
                } else {
                    *ci = -1;
                }
            }
            if plus % 2 == 1 {
                out.push(E6Vector(c));
            }
        }
        for r in &out {
            debug_assert!(r.is_member() && r.norm() == 2);
        }
        out
    }

    /// Simple-root coordinates of a model vector; errors if it is not in the
    /// lattice.
    pub fn to_alpha(&self, v: &E6Vector) -> Result<LatticeVector> {
        if !v.is_member() {
            return Err(Error::Invalid("vector violates the model constraints".into()));
        }
        let target: Vec<Rat> = v.0.iter().map(|&c| Rat::from(Int::from(c))).collect();
        let sol = matrix::solve_rational(&self.basis_mat, &target)
            .ok_or_else(|| Error::Invalid("degenerate basis".into()))?;
        let mut coords = Vec::with_capacity(6);
        for a in &sol {
            if !a.is_integer() {
                return Err(Error::Invalid("vector is not an integral combination".into()));
            }
            coords.push(a.to_integer().to_i64().ok_or(Error::Overflow)?);
        }
        Ok(LatticeVector(coords))
    }

    pub fn from_alpha(&self, a: &LatticeVector) -> E6Vector {
        let mut v = E6Vector([0; 6]);
        for (i, &c) in a.0.iter().enumerate() {
            let mut scaled = self.alpha[i];
            for x in scaled.0.iter_mut() {
                *x *= c;
            }
            v = v.add(&scaled);
        }
        v
    }

    /// J in simple-root coordinates: swap 1 <-> 6 and 3 <-> 5.
    pub fn j_alpha(&self, a: &LatticeVector) -> LatticeVector {
        let c = &a.0;
        LatticeVector(vec![c[5], c[1], c[4], c[3], c[2], c[0]])
    }

    pub fn is_j_invariant(&self, a: &LatticeVector) -> bool {
        self.j_alpha(a) == *a
    }

    /// J applied to a model vector.
    pub fn j_model(&self, v: &E6Vector) -> Result<E6Vector> {
        Ok(self.from_alpha(&self.j_alpha(&self.to_alpha(v)?)))
    }

    /// The J-fixed sublattice: a D4 on <alpha2, alpha4,
    /// alpha3 + alpha4 + alpha5, -alpha_tilde> with alpha2 the central node.
    /// Returns the Gram and the basis in simple-root coordinates.
    pub fn d4_plus(&self) -> (GramLattice, Vec<LatticeVector>) {
        let basis = vec![
            LatticeVector(vec![0, 1, 0, 0, 0, 0]),
            LatticeVector(vec![0, 0, 0, 1, 0, 0]),
            LatticeVector(vec![0, 0, 1, 1, 1, 0]),
            LatticeVector(vec![-1, -2, -2, -3, -2, -1]),
        ];
        let gram = self.gram_of(&basis);
        debug_assert_eq!(
            gram.gram(),
            &vec![
                vec![2, -1, -1, -1],
                vec![-1, 2, 0, 0],
                vec![-1, 0, 2, 0],
                vec![-1, 0, 0, 2]
            ]
        );
        (gram, basis)
    }

    /// The J-anti-fixed sublattice on <alpha1 - alpha6, alpha3 - alpha5>:
    /// A2 rescaled by 2.
    pub fn a2_doubled(&self) -> (GramLattice, Vec<LatticeVector>) {
        let basis = vec![
            LatticeVector(vec![1, 0, 0, 0, 0, -1]),
            LatticeVector(vec![0, 0, 1, 0, -1, 0]),
        ];
        let gram = self.gram_of(&basis);
        debug_assert_eq!(gram.gram(), &vec![vec![4, -2], vec![-2, 4]]);
        (gram, basis)
    }

    fn gram_of(&self, basis: &[LatticeVector]) -> GramLattice {
        let k = basis.len();
        let mut g = vec![vec![0i64; k]; k];
        for i in 0..k {
            for j in 0..k {
                g[i][j] = self.lattice.inner(&basis[i], &basis[j]);
            }
        }
        GramLattice::new(g).unwrap()
    }

    /// Index of the sum of the two fixed sublattices in E6: the determinant
    /// of their combined bases written in simple-root coordinates.
    pub fn fixed_sum_index(&self) -> Int {
        let (_, d4) = self.d4_plus();
        let (_, a2) = self.a2_doubled();
        let combined: Vec<LatticeVector> = d4.into_iter().chain(a2).collect();
        let m: matrix::IMat = (0..6)
            .map(|i| combined.iter().map(|b| Int::from(b.0[i])).collect())
            .collect();
        matrix::det_bareiss(&m).abs()
    }

    /// Embed a coordinate vector on a sublattice basis into simple-root
    /// coordinates.
    pub fn embed(&self, coords: &LatticeVector, basis: &[LatticeVector]) -> LatticeVector {
        let mut out = vec![0i64; 6];
        for (c, b) in coords.0.iter().zip(basis) {
            for i in 0..6 {
                out[i] += c * b.0[i];
            }
        }
        LatticeVector(out)
    }

    pub fn orthogonal_roots(&self, l: &LatticeVector) -> Vec<LatticeVector> {
        self.roots_alpha
            .iter()
            .filter(|r| self.lattice.inner(r, l) == 0)
            .cloned()
            .collect()
    }

    pub fn orthogonal_root_count(&self, l: &LatticeVector) -> usize {
        self.orthogonal_roots(l).len()
    }
}

impl Default for E6Model {
    fn default() -> Self {
        E6Model::new()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roots::classify_root_system;

    #[test]
    fn model_membership() {
        assert!(E6Vector::from_integral([1, 1, 0, 0, 0, 0]).is_member());
        assert!(!E6Vector::from_integral([1, 0, 0, 0, 0, 0]).is_member()); // odd sum
        assert!(E6Vector([1, 1, 1, 1, 1, -1]).is_member());
        assert!(!E6Vector([1, 1, 1, 1, 1, 1]).is_member()); // odd sum
        assert!(!E6Vector([1, 2, 1, 1, 1, -1]).is_member()); // mixed parity
    }

    #[test]
    fn gram_determinant_and_roots() {
        let m = E6Model::new();
        assert_eq!(m.lattice().determinant(), Int::from(3));
        assert_eq!(m.roots().len(), 72);
        for r in m.roots() {
            assert_eq!(m.lattice().norm(r), 2);
        }
    }

    #[test]
    fn alpha_round_trip() {
        let m = E6Model::new();
        for r in m.roots() {
            let v = m.from_alpha(r);
            assert_eq!(m.to_alpha(&v).unwrap(), *r);
        }
    }

    #[test]
    fn highest_root_coordinates() {
        let m = E6Model::new();
        let at = m.to_alpha(m.alpha_tilde()).unwrap();
        assert_eq!(at, LatticeVector(vec![1, 2, 2, 3, 2, 1]));
    }

    #[test]
    fn j_is_an_involution_and_isometry() {
        let m = E6Model::new();
        for r in m.roots() {
            let jr = m.j_alpha(r);
            assert_eq!(m.j_alpha(&jr), *r);
            assert!(m.roots().contains(&jr));
            assert_eq!(m.lattice().norm(&jr), 2);
        }
        // isometry on pairs
        for a in m.roots().iter().take(12) {
            for b in m.roots().iter().take(12) {
                assert_eq!(
                    m.lattice().inner(a, b),
                    m.lattice().inner(&m.j_alpha(a), &m.j_alpha(b))
                );
            }
        }
    }

    #[test]
    fn noninvariant_roots_are_orthogonal_to_their_image() {
        let m = E6Model::new();
        let mut invariant = 0;
        for r in m.roots() {
            let jr = m.j_alpha(r);
            if jr == *r {
                invariant += 1;
            } else {
                assert_eq!(m.lattice().inner(r, &jr), 0);
            }
        }
        assert_eq!(invariant, 24);
    }

    #[test]
    fn fixed_sublattices() {
        let m = E6Model::new();
        let (d4, basis) = m.d4_plus();
        assert_eq!(d4.determinant(), Int::from(4));
        for b in &basis {
            assert!(m.is_j_invariant(b));
        }
        let label = classify_root_system(&crate::roots::vectors_of_norm(&d4, 2).unwrap(), &d4)
            .unwrap();
        assert_eq!(label.to_string(), "D4");

        let (a2, basis) = m.a2_doubled();
        assert_eq!(a2.determinant(), Int::from(12));
        for b in &basis {
            assert_eq!(m.j_alpha(b), LatticeVector(b.0.iter().map(|&x| -x).collect()));
        }
        assert_eq!(m.fixed_sum_index(), Int::from(4));
    }

    #[test]
    fn d4_plus_norm4_vectors_come_from_root_pairs() {
        let m = E6Model::new();
        let (d4, basis) = m.d4_plus();
        let four = crate::roots::vectors_of_norm(&d4, 4).unwrap();
        assert_eq!(four.len(), 24);
        let mut pair_sums: Vec<LatticeVector> = m
            .roots()
            .iter()
            .filter(|r| m.j_alpha(r) != **r)
            .map(|r| {
                let jr = m.j_alpha(r);
                LatticeVector((0..6).map(|i| r.0[i] + jr.0[i]).collect())
            })
            .collect();
        pair_sums.sort();
        pair_sums.dedup();
        let mut embedded: Vec<LatticeVector> =
            four.iter().map(|v| m.embed(v, &basis)).collect();
        embedded.sort();
        assert_eq!(pair_sums, embedded);
    }

    #[test]
    fn low_weight_vectors_from_the_model() {
        let m = E6Model::new();
        // 2e1 + e2 + e3: norm 6, orthogonal to 14 roots; e3 - e2 is a central
        // A1 and the remaining 12 split as two A2s (e4 + e5 and e4 - e5 each
        // close up with a pair of half-integral roots)
        let l = m
            .to_alpha(&E6Vector::from_integral([2, 1, 1, 0, 0, 0]))
            .unwrap();
        assert_eq!(m.lattice().norm(&l), 6);
        assert!(m.is_j_invariant(&l));
        let orth = m.orthogonal_roots(&l);
        assert_eq!(orth.len(), 14);
        let label = classify_root_system(&orth, m.lattice()).unwrap();
        assert_eq!(label.to_string(), "A1+A2+A2");

        // 3e1 + 2e2 + e3 + e4 + e5: norm 16, complement A3
        let l = m
            .to_alpha(&E6Vector::from_integral([3, 2, 1, 1, 1, 0]))
            .unwrap();
        assert_eq!(m.lattice().norm(&l), 16);
        let orth = m.orthogonal_roots(&l);
        assert_eq!(orth.len(), 12);
        assert_eq!(
            classify_root_system(&orth, m.lattice()).unwrap().to_string(),
            "A3"
        );

        // 4e1 + 3e2 + 2e3 + (e6 + e7 - e8): norm 32, complement A1 + A2
        let l = m
            .to_alpha(&E6Vector::from_integral([4, 3, 2, 0, 0, 1]))
            .unwrap();
        assert_eq!(m.lattice().norm(&l), 32);
        let orth = m.orthogonal_roots(&l);
        assert_eq!(orth.len(), 8);
        assert_eq!(
            classify_root_system(&orth, m.lattice()).unwrap().to_string(),
            "A1+A2"
        );
    }
}
