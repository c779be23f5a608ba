//! Finite quadratic modules D(L) = L^/L with q-values in Q/2Z and bilinear
//! values in Q/Z.
//!
//! Canonical representatives: q in [0, 2), b in [0, 1). Both are exact
//! rationals, so equality is literal equality.

use crate::error::{Error, Result};
use crate::lattice::{GramLattice, LatticeExpr, LatticeVector};
use crate::matrix::{self, Int, Rat};
use num_traits::{One, Signed, ToPrimitive, Zero};

pub const ELEMENT_SCAN_CAP: u128 = 1_000_000;
pub const SUBGROUP_SCAN_CAP: u128 = 100_000;

/// D(L) presented by generators with known orders. `factors` are the orders
/// of the generators; for modules built by `discriminant_module` they form a
/// divisibility chain, for direct sums they are simply concatenated and the
/// canonical chain is available via `invariant_factors()`.
#[derive(Debug, Clone)]
pub struct FiniteQuadraticModule {
    factors: Vec<u64>,
    /// generator cosets as rational vectors in L (x) Q, basis of L
    generators: Vec<Vec<Rat>>,
    /// Gram of the ambient lattice
    gram: Vec<Vec<i64>>,
    /// number of leading generators belonging to the first summand of a
    /// direct sum (equals `factors.len()` for non-sums)
    first_component_len: usize,
}

/// An element in generator coordinates.
pub type Element = Vec<u64>;

impl FiniteQuadraticModule {
    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn order(&self) -> u128 {
        self.factors.iter().map(|&f| f as u128).product()
    }

    pub fn generators(&self) -> &[Vec<Rat>] {
        &self.generators
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Canonical invariant factors d1 | d2 | ... (entries > 1).
    pub fn invariant_factors(&self) -> Vec<u64> {
        if self.factors.is_empty() {
            return vec![];
        }
        let n = self.factors.len();
        let diag: matrix::IMat = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        if i == j {
                            Int::from(self.factors[i])
                        } else {
                            Int::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        let (_, d, _) = matrix::smith_normal_form(&diag);
        (0..n)
            .filter_map(|i| d[i][i].to_u64())
            .filter(|&x| x > 1)
            .collect()
    }

    pub fn is_cyclic(&self) -> bool {
        self.invariant_factors().len() <= 1
    }

    /// Rational representative in L (x) Q of an element.
    pub fn representative(&self, x: &Element) -> Vec<Rat> {
        let rank = self.gram.len();
        let mut rep = vec![Rat::zero(); rank];
        for (gi, &xi) in self.generators.iter().zip(x) {
            if xi == 0 {
                continue;
            }
            let c = Rat::from(Int::from(xi));
            for (r, g) in rep.iter_mut().zip(gi) {
                *r += &c * g;
            }
        }
        rep
    }

    fn form_value(&self, u: &[Rat], v: &[Rat]) -> Rat {
        let n = self.gram.len();
        let mut s = Rat::zero();
        for i in 0..n {
            if u[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if self.gram[i][j] != 0 {
                    s += &u[i] * Rat::from(Int::from(self.gram[i][j])) * &v[j];
                }
            }
        }
        s
    }

    /// q(x) in Q/2Z, canonical representative in [0, 2).
    pub fn q_value(&self, x: &Element) -> Rat {
        let rep = self.representative(x);
        reduce_mod(&self.form_value(&rep, &rep), 2)
    }

    /// b(x, y) in Q/Z, canonical representative in [0, 1).
    pub fn b_value(&self, x: &Element, y: &Element) -> Rat {
        let rx = self.representative(x);
        let ry = self.representative(y);
        reduce_mod(&self.form_value(&rx, &ry), 1)
    }

    pub fn q_of_shifted_representative(&self, x: &Element, shift: &LatticeVector) -> Rat {
        let mut rep = self.representative(x);
        for (r, &s) in rep.iter_mut().zip(&shift.0) {
            *r += Rat::from(Int::from(s));
        }
        reduce_mod(&self.form_value(&rep, &rep), 2)
    }

    pub fn zero(&self) -> Element {
        vec![0; self.factors.len()]
    }

    pub fn add(&self, x: &Element, y: &Element) -> Element {
        x.iter()
            .zip(y)
            .zip(&self.factors)
            .map(|((a, b), &f)| (a + b) % f)
            .collect()
    }

    pub fn neg(&self, x: &Element) -> Element {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &f)| (f - a % f) % f)
            .collect()
    }

    pub fn scalar_mul(&self, k: u64, x: &Element) -> Element {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &f)| ((a as u128 * k as u128) % f as u128) as u64)
            .collect()
    }

    pub fn element_order(&self, x: &Element) -> u64 {
        x.iter()
            .zip(&self.factors)
            .map(|(&a, &f)| {
                if a == 0 {
                    1
                } else {
                    f / gcd_u64(a, f)
                }
            })
            .fold(1, lcm_u64)
    }

    pub fn elements(&self) -> impl Iterator<Item = Element> + '_ {
        let factors = self.factors.clone();
        ElementIter {
            factors,
            current: None,
        }
    }

    pub fn first_component_nontrivial(&self, x: &Element) -> bool {
        x[..self.first_component_len].iter().any(|&a| a != 0)
    }

    /// Direct sum keeping track of the boundary between the two summands.
    pub fn direct_sum(&self, other: &FiniteQuadraticModule) -> FiniteQuadraticModule {
        let ra = self.gram.len();
        let rb = other.gram.len();
        let n = ra + rb;
        let mut gram = vec![vec![0i64; n]; n];
        for i in 0..ra {
            gram[i][..ra].copy_from_slice(&self.gram[i]);
        }
        for i in 0..rb {
            gram[ra + i][ra..].copy_from_slice(&other.gram[i]);
        }
        let mut generators = Vec::new();
        for g in &self.generators {
            let mut v = g.clone();
            v.extend(std::iter::repeat(Rat::zero()).take(rb));
            generators.push(v);
        }
        for g in &other.generators {
            let mut v: Vec<Rat> = std::iter::repeat(Rat::zero()).take(ra).collect();
            v.extend(g.iter().cloned());
            generators.push(v);
        }
        let mut factors = self.factors.clone();
        factors.extend(&other.factors);
        FiniteQuadraticModule {
            factors,
            generators,
            gram,
            first_component_len: self.factors.len(),
        }
    }
}

struct ElementIter {
    factors: Vec<u64>,
    current: Option<Element>,
}

impl Iterator for ElementIter {
    type Item = Element;

    fn next(&mut self) -> Option<Element> {
        match &mut self.current {
            None => {
                let z = vec![0u64; self.factors.len()];
                self.current = Some(z.clone());
                Some(z)
            }
            Some(cur) => {
                for i in 0..self.factors.len() {
                    cur[i] += 1;
                    if cur[i] < self.factors[i] {
                        return Some(cur.clone());
                    }
                    cur[i] = 0;
                }
                None
            }
        }
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    let (mut a, mut b) = (a, b);
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

fn lcm_u64(a: u64, b: u64) -> u64 {
    a / gcd_u64(a, b) * b
}

/// Canonical representative of r modulo `modulus` in [0, modulus).
pub fn reduce_mod(r: &Rat, modulus: i64) -> Rat {
    let m = Rat::from(Int::from(modulus));
    let q = (r / &m).floor();
    r - q * m
}

/// D(L) = L^/L computed from the Smith normal form of the Gram matrix.
pub fn discriminant_module(l: &GramLattice) -> FiniteQuadraticModule {
    let g = l.gram_big();
    let n = l.rank();
    let (u, d, _) = matrix::smith_normal_form(&g);
    // generator for invariant factor d_i: column i of (u * g)^{-1}
    let ug = matrix::mat_mul(&u, &g);
    let mut factors = Vec::new();
    let mut generators = Vec::new();
    for i in 0..n {
        let di = d[i][i].to_u64().expect("invariant factor fits u64");
        if di <= 1 {
            continue;
        }
        let mut e = vec![Rat::zero(); n];
        e[i] = Rat::one();
        let col = matrix::solve_rational(&ug, &e).expect("nondegenerate gram");
        factors.push(di);
        generators.push(col);
    }
    let first = factors.len();
    FiniteQuadraticModule {
        factors,
        generators,
        gram: l.gram().clone(),
        first_component_len: first,
    }
}

/// All elements with q(x) = 0 in Q/2Z, by exhaustive scan.
pub fn isotropic_elements(m: &FiniteQuadraticModule) -> Result<Vec<Element>> {
    let order = m.order();
    if order > ELEMENT_SCAN_CAP {
        return Err(Error::ModuleTooLarge {
            order,
            cap: ELEMENT_SCAN_CAP,
        });
    }
    Ok(m.elements().filter(|x| m.q_value(x).is_zero()).collect())
}

/// Totally isotropic subgroups generated by at most two isotropic elements.
/// Every nontrivial totally isotropic subgroup contains one of these, so the
/// cyclicity verdict below is complete; the subgroup *list* is complete when
/// the module has at most two invariant factors.
pub fn totally_isotropic_subgroups(m: &FiniteQuadraticModule) -> Result<Vec<Vec<Element>>> {
    let order = m.order();
    if order > SUBGROUP_SCAN_CAP {
        return Err(Error::ModuleTooLarge {
            order,
            cap: SUBGROUP_SCAN_CAP,
        });
    }
    let iso = isotropic_elements(m)?;
    let mut subgroups: Vec<Vec<Element>> = Vec::new();
    let mut seen: std::collections::BTreeSet<Vec<Element>> = std::collections::BTreeSet::new();
    for i in 0..iso.len() {
        for j in i..iso.len() {
            if let Some(sub) = span_if_totally_isotropic(m, &iso[i], &iso[j]) {
                if seen.insert(sub.clone()) {
                    subgroups.push(sub);
                }
            }
        }
    }
    Ok(subgroups)
}

fn span_if_totally_isotropic(
    m: &FiniteQuadraticModule,
    x: &Element,
    y: &Element,
) -> Option<Vec<Element>> {
    if !m.b_value(x, y).is_zero() {
        return None;
    }
    let mut members: std::collections::BTreeSet<Element> = std::collections::BTreeSet::new();
    let ox = m.element_order(x);
    let oy = m.element_order(y);
    for a in 0..ox {
        for b in 0..oy {
            let e = m.add(&m.scalar_mul(a, x), &m.scalar_mul(b, y));
            if !m.q_value(&e).is_zero() {
                return None;
            }
            members.insert(e);
        }
    }
    Some(members.into_iter().collect())
}

pub fn all_isotropic_subgroups_cyclic(m: &FiniteQuadraticModule) -> Result<bool> {
    let subs = totally_isotropic_subgroups(m)?;
    for s in &subs {
        let n = s.len() as u64;
        let cyclic = s.iter().any(|e| m.element_order(e) == n);
        if !cyclic {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Image of h/div(h) in D(L).
pub fn image_in_disc(h: &LatticeVector, l: &GramLattice, m: &FiniteQuadraticModule) -> Result<Element> {
    let c = h.content();
    if c != 1 {
        return Err(Error::NonPrimitive(c));
    }
    let div = l.divisor(h)?;
    let n = l.rank();
    // y = G * (h/div); element coordinates are read off via the SNF transform,
    // but since the generators were built from (U*G)^{-1} it is easier to
    // solve directly: find a = (a_i) with sum a_i g_i == h/div  (mod L).
    // Solve the linear system over Q and round within each factor.
    let target: Vec<Rat> = (0..n)
        .map(|i| Rat::new(Int::from(h.0[i]), Int::from(div)))
        .collect();
    solve_element(m, &target)
}

/// Expresses a dual-lattice vector (given in L (x) Q coordinates) in generator
/// coordinates of D(L).
fn solve_element(m: &FiniteQuadraticModule, target: &[Rat]) -> Result<Element> {
    // brute-force over the group would be exponential; instead use the pairing:
    // two dual vectors are equal in D(L) iff their difference is in L. Scan
    // candidate coefficient tuples via the b-pairing with generators is still
    // indirect; with the small orders in play, direct search over the group is
    // acceptable only for tiny modules, so use exact linear algebra instead:
    // write target = sum a_i g_i + z with z integral, solving for rational a_i
    // in the generator lattice basis.
    let k = m.factors.len();
    if k == 0 {
        return Ok(vec![]);
    }
    let n = m.gram.len();
    // Build matrix [g_1 ... g_k | I_n] and solve target = G_a * a + I * z
    // over the integers via SNF on the stacked column system scaled to a
    // common denominator.
    let mut denom = Int::one();
    for g in &m.generators {
        for x in g {
            denom = lcm_int(&denom, x.denom());
        }
    }
    for t in target {
        denom = lcm_int(&denom, t.denom());
    }
    let scale = |r: &Rat| -> Int {
        let v = r * Rat::from(denom.clone());
        debug_assert!(v.denom().is_one());
        v.to_integer()
    };
    // columns: k generators and n lattice basis vectors, all scaled by denom
    let cols = k + n;
    let mut a_mat: matrix::IMat = vec![vec![Int::zero(); cols]; n];
    for (j, g) in m.generators.iter().enumerate() {
        for i in 0..n {
            a_mat[i][j] = scale(&g[i]);
        }
    }
    for j in 0..n {
        a_mat[j][k + j] = denom.clone();
    }
    let b: Vec<Int> = target.iter().map(|t| scale(t)).collect();
    // solve a_mat * x = b over Z via SNF
    let (u, d, v) = matrix::smith_normal_form(&a_mat);
    // u * a_mat * v = d ; set c = u*b, y_i = c_i / d_i, x = v*y
    let mut y = vec![Int::zero(); cols];
    for i in 0..n {
        let mut ci = Int::zero();
        for j in 0..n {
            ci += &u[i][j] * &b[j];
        }
        if i < cols && !d[i][i].is_zero() {
            let (q, r) = num_integer::Integer::div_rem(&ci, &d[i][i]);
            if !r.is_zero() {
                return Err(Error::Invalid("vector is not in the dual lattice".into()));
            }
            y[i] = q;
        } else if !ci.is_zero() {
            return Err(Error::Invalid("vector is not in the dual lattice".into()));
        }
    }
    let mut x = vec![Int::zero(); cols];
    for i in 0..cols {
        for j in 0..cols {
            if !v[i][j].is_zero() && !y[j].is_zero() {
                x[i] += &v[i][j] * &y[j];
            }
        }
    }
    let elem: Element = (0..k)
        .map(|i| {
            let f = Int::from(m.factors[i]);
            let r = num_integer::Integer::mod_floor(&x[i], &f);
            r.to_u64().unwrap()
        })
        .collect();
    Ok(elem)
}

fn lcm_int(a: &Int, b: &Int) -> Int {
    if a.is_zero() || b.is_zero() {
        return Int::zero();
    }
    (a * b).abs() / num_integer::Integer::gcd(a, b)
}

/// The Eichler pair (norm, image in D(L)); applicable only when the formal
/// expression contains two unscaled hyperbolic planes.
pub fn eichler_invariant(
    h: &LatticeVector,
    expr: &LatticeExpr,
) -> Result<(i64, Element, FiniteQuadraticModule)> {
    if expr.u_summands() < 2 {
        return Err(Error::EichlerInapplicable);
    }
    let l = expr.evaluate()?;
    let m = discriminant_module(&l);
    let img = image_in_disc(h, &l, &m)?;
    Ok((l.norm(h), img, m))
}

/// The discriminant module of `A2(-1) + <-2d>` with its two-component
/// structure intact: first component D(A2(-1)), second D(<-2d>).
pub fn split_module(two_d: i64) -> Result<FiniteQuadraticModule> {
    if two_d <= 0 || two_d % 2 != 0 {
        return Err(Error::Invalid("degree must be a positive even integer".into()));
    }
    let a2m = crate::lattice::parse_lattice("A2(-1)")?.evaluate()?;
    let r1 = crate::lattice::parse_lattice(&format!("<-{}>", two_d))?.evaluate()?;
    Ok(discriminant_module(&a2m).direct_sum(&discriminant_module(&r1)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::parse_lattice;

    fn lat(s: &str) -> GramLattice {
        parse_lattice(s).unwrap().evaluate().unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn disc_a2_minus() {
        let m = discriminant_module(&lat("A2(-1)"));
        assert_eq!(m.invariant_factors(), vec![3]);
        assert!(m.is_cyclic());
    }

    #[test]
    fn disc_split_lattice() {
        // d = 5: Z/3 + Z/10, cyclic Z/30 as the canonical chain
        let m = discriminant_module(&lat("2U+2E8(-1)+A2(-1)+<-10>"));
        assert_eq!(m.order(), 30);
        assert_eq!(m.invariant_factors(), vec![30]);
        // d = 6: Z/3 + Z/12
        let m = discriminant_module(&lat("2U+2E8(-1)+A2(-1)+<-12>"));
        assert_eq!(m.invariant_factors(), vec![3, 12]);
    }

    #[test]
    fn disc_d4_q_values() {
        let m = discriminant_module(&lat("D4"));
        assert_eq!(m.invariant_factors(), vec![2, 2]);
        let nonzero: Vec<Element> = m.elements().filter(|e| e.iter().any(|&x| x != 0)).collect();
        assert_eq!(nonzero.len(), 3);
        for e in &nonzero {
            assert_eq!(m.q_value(e), rat(1, 1));
        }
    }

    #[test]
    fn q_value_examples() {
        let m = discriminant_module(&lat("A2"));
        let g = vec![1u64];
        assert_eq!(m.q_value(&g), rat(2, 3));
        assert_eq!(m.q_value(&m.zero()), Rat::zero());

        let m = discriminant_module(&lat("<-6>"));
        assert_eq!(m.q_value(&vec![1]), rat(11, 6));
    }

    #[test]
    fn q_value_sign_convention_for_a2_minus() {
        // computed from the Gram of A2(-1): -2/3, i.e. 4/3 in [0,2)
        let m = discriminant_module(&lat("A2(-1)"));
        assert_eq!(m.q_value(&vec![1]), rat(4, 3));
    }

    #[test]
    fn representative_independence() {
        let l = lat("A2(-1)");
        let m = discriminant_module(&l);
        let e = vec![1u64];
        let q0 = m.q_value(&e);
        for shift in [
            LatticeVector(vec![1, 0]),
            LatticeVector(vec![0, 1]),
            LatticeVector(vec![-3, 2]),
        ] {
            assert_eq!(m.q_of_shifted_representative(&e, &shift), q0);
        }
    }

    #[test]
    fn isotropic_a2_minus_only_zero() {
        let m = discriminant_module(&lat("A2(-1)"));
        let iso = isotropic_elements(&m).unwrap();
        assert_eq!(iso, vec![m.zero()]);
    }

    #[test]
    fn isotropic_split_closed_form_d6_and_d3() {
        // d = 6 = 3*2*1^2: e = 2, f = 1; nontrivial-first-component isotropics
        // exist and are (+-c, 2*e*f*y * hbar) with y not 0 mod 3
        let m = split_module(12).unwrap();
        let iso = isotropic_elements(&m).unwrap();
        let nontrivial: Vec<&Element> = iso
            .iter()
            .filter(|e| m.first_component_nontrivial(e))
            .collect();
        assert!(!nontrivial.is_empty());
        for e in &nontrivial {
            assert!(e[1] % 4 == 0 && (e[1] / 4) % 3 != 0, "element {:?}", e);
        }
        // d = 3: e = 1 not congruent to 2 mod 3, no such elements
        let m = split_module(6).unwrap();
        let iso = isotropic_elements(&m).unwrap();
        assert!(iso.iter().all(|e| !m.first_component_nontrivial(e)));
    }

    #[test]
    fn cyclic_subgroup_checks() {
        for two_d in (2..=96).step_by(2) {
            let m = split_module(two_d).unwrap();
            assert!(
                all_isotropic_subgroups_cyclic(&m).unwrap(),
                "two_d = {}",
                two_d
            );
        }
        // negative control: a module with an isotropic Z/2 x Z/2 plane
        let l = GramLattice::new(vec![
            vec![-2, 0, 0, 0],
            vec![0, -2, 0, 0],
            vec![0, 0, 2, 0],
            vec![0, 0, 0, 2],
        ])
        .unwrap();
        let m = discriminant_module(&l);
        assert!(!all_isotropic_subgroups_cyclic(&m).unwrap());
        // trivial module
        let m = discriminant_module(&lat("U"));
        assert!(m.is_trivial());
        assert!(all_isotropic_subgroups_cyclic(&m).unwrap());
    }

    #[test]
    fn image_in_disc_examples() {
        let expr = parse_lattice("U+A2(-1)").unwrap();
        let l = expr.evaluate().unwrap();
        let m = discriminant_module(&l);
        // split vector: divisor 1, zero class
        let h = LatticeVector(vec![6, 1, 0, 0]);
        assert_eq!(image_in_disc(&h, &l, &m).unwrap(), m.zero());
        // non-split vector: divisor 3, generator of D(A2(-1))
        let h = LatticeVector(vec![3, 3, 2, 1]);
        let img = image_in_disc(&h, &l, &m).unwrap();
        assert_eq!(m.element_order(&img), 3);
    }

    #[test]
    fn eichler_examples() {
        let expr = parse_lattice("2U+A2(-1)").unwrap();
        // split h, 2d = 12: pad coordinates into the first plane
        let h = LatticeVector(vec![6, 1, 0, 0, 0, 0]);
        let (norm, img, m) = eichler_invariant(&h, &expr).unwrap();
        assert_eq!(norm, 12);
        assert_eq!(img, m.zero());
        // non-split h in the first plane plus A2(-1)
        let h = LatticeVector(vec![3, 3, 0, 0, 2, 1]);
        let (norm, img, m) = eichler_invariant(&h, &expr).unwrap();
        assert_eq!(norm, 12);
        assert_eq!(m.element_order(&img), 3);
        // u1 + u2 in 2U + E8(-1)
        let expr = parse_lattice("2U+E8(-1)").unwrap();
        let mut coords = vec![0i64; 12];
        coords[0] = 1;
        coords[1] = 1;
        let (norm, img, m) = eichler_invariant(&LatticeVector(coords), &expr).unwrap();
        assert_eq!(norm, 2);
        assert!(img.is_empty() || img == m.zero());
        // inapplicable without 2U
        let expr = parse_lattice("U+A2(-1)").unwrap();
        assert!(matches!(
            eichler_invariant(&LatticeVector(vec![1, 0, 0, 0]), &expr),
            Err(Error::EichlerInapplicable)
        ));
    }

    #[test]
    fn module_order_matches_det() {
        for spec in ["A2", "A3", "D4", "E6", "E7", "E8", "A2(-1)", "D4(-1)"] {
            let l = lat(spec);
            let m = discriminant_module(&l);
            assert_eq!(
                Int::from(m.order()),
                l.determinant().abs(),
                "lattice {}",
                spec
            );
        }
    }

    #[test]
    fn bilinearity_and_polarization() {
        let m = discriminant_module(&lat("A2(-1)+<-12>"));
        let elems: Vec<Element> = m.elements().collect();
        for x in elems.iter().take(6) {
            for y in elems.iter().take(6) {
                // b(x,y) = (q(x+y) - q(x) - q(y)) / 2 in Q/Z
                let lhs = m.b_value(x, y);
                let s = m.q_value(&m.add(x, y)) - m.q_value(x) - m.q_value(y);
                let rhs = reduce_mod(&(s / Rat::from(Int::from(2))), 1);
                assert_eq!(lhs, rhs);
            }
        }
    }
}
