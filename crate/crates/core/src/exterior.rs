//! Exterior powers of a based vector space: wedge monomial bases, the volume
//! pairing η on ∧³V₆, tangent spaces T_U = ∧²U∧V, the Lagrangian family F_v,
//! and points of the Segre cone C(ℙ(∧²U₁)×ℙ(U₂)).
//!
//! Wedge monomials are increasing index sets stored as bitmasks; signs come
//! from inversion counting, so every multivector has unique canonical
//! coordinates.

use std::fmt;


use crate::field::Field;
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExteriorError {
    DegreeOverflow,
    WrongDegree,
    ZeroInput,
    DimensionMismatch,
}

impl fmt::Display for ExteriorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExteriorError::DegreeOverflow => write!(f, "wedge degree exceeds ambient dimension"),
            ExteriorError::WrongDegree => write!(f, "unexpected exterior degree"),
            ExteriorError::ZeroInput => write!(f, "zero vector where nonzero required"),
            ExteriorError::DimensionMismatch => write!(f, "dimension mismatch"),
        }
    }
}

impl std::error::Error for ExteriorError {}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut b = 1usize;
    for i in 0..k.min(n - k) {
        b = b * (n - i) / (i + 1);
    }
    b
}

/// All d-subsets of {0..n-1} as bitmasks, in lexicographic order of the
/// increasing index tuples.
pub fn subsets(n: usize, d: usize) -> Vec<u32> {
    fn rec(out: &mut Vec<u32>, mask: u32, next: usize, left: usize, n: usize) {
        if left == 0 {
            out.push(mask);
            return;
        }
        for i in next..=(n - left) {
            rec(out, mask | (1 << i), i + 1, left - 1, n);
        }
    }
    let mut out = Vec::with_capacity(binomial(n, d));
    if d <= n {
        rec(&mut out, 0, 0, d, n);
    }
    out
}

pub fn mask_index(n: usize, d: usize, mask: u32) -> usize {
    // Rank of a d-subset in the lexicographic order.
    let mut idx = 0usize;
    let mut prev = 0usize;
    let mut remaining = d;
    for i in 0..n {
        if mask & (1 << i) != 0 {
            for j in prev..i {
                idx += binomial(n - 1 - j, remaining - 1);
            }
            prev = i + 1;
            remaining -= 1;
        }
    }
    idx
}

/// Wedge of two disjoint monomials: the merged mask and the inversion sign.
pub fn wedge_masks(a: u32, b: u32) -> Option<(u32, i32)> {
    if a & b != 0 {
        return None;
    }
    let mut sign = 1i32;
    let mut bb = b;
    while bb != 0 {
        let i = bb.trailing_zeros();
        // count elements of `a` greater than i
        let higher = (a >> (i + 1)).count_ones();
        if higher % 2 == 1 {
            sign = -sign;
        }
        bb &= bb - 1;
    }
    Some((a | b, sign))
}

/// The exterior power ∧^d of an n-dimensional based space.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExteriorSpace {
    pub n: usize,
    pub d: usize,
    basis: Vec<u32>,
}

impl ExteriorSpace {
    pub fn new(n: usize, d: usize) -> Self {
        assert!(d <= n && n <= 16);
        ExteriorSpace {
            n,
            d,
            basis: subsets(n, d),
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis_masks(&self) -> &[u32] {
        &self.basis
    }

    pub fn index_of(&self, mask: u32) -> usize {
        mask_index(self.n, self.d, mask)
    }
}

/// An element of ∧^d V in the lexicographic wedge-monomial basis.
#[derive(Clone, PartialEq, Debug)]
pub struct MultiVector<K> {
    pub n: usize,
    pub d: usize,
    pub coords: Vec<K>,
}

impl<K: Field> MultiVector<K> {
    pub fn zero(n: usize, d: usize) -> Self {
        MultiVector {
            n,
            d,
            coords: vec![K::zero(); binomial(n, d)],
        }
    }

    pub fn from_coords(n: usize, d: usize, coords: Vec<K>) -> Self {
        assert_eq!(coords.len(), binomial(n, d));
        MultiVector { n, d, coords }
    }

    /// A degree-1 vector.
    pub fn vector(coords: Vec<K>) -> Self {
        let n = coords.len();
        MultiVector { n, d: 1, coords }
    }

    /// The basis monomial e_{i1}∧…∧e_{id} for a set of 0-based indices.
    pub fn monomial(n: usize, indices: &[usize], one: K) -> Self {
        let d = indices.len();
        let mut mask = 0u32;
        for &i in indices {
            assert!(i < n && mask & (1 << i) == 0);
            mask |= 1 << i;
        }
        let mut mv = MultiVector::zero(n, d);
        mv.coords[mask_index(n, d, mask)] = one;
        mv
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.n == other.n && self.d == other.d);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        MultiVector {
            n: self.n,
            d: self.d,
            coords,
        }
    }

    pub fn scale(&self, s: &K) -> Self {
        MultiVector {
            n: self.n,
            d: self.d,
            coords: self.coords.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    /// Graded wedge product.
    pub fn wedge(&self, other: &Self) -> Result<Self, ExteriorError> {
        if self.n != other.n {
            return Err(ExteriorError::DimensionMismatch);
        }
        let (n, d1, d2) = (self.n, self.d, other.d);
        if d1 + d2 > n {
            return Err(ExteriorError::DegreeOverflow);
        }
        let sa = subsets(n, d1);
        let sb = subsets(n, d2);
        let mut out: MultiVector<K> = MultiVector::zero(n, d1 + d2);
        for (ia, &ma) in sa.iter().enumerate() {
            if self.coords[ia].is_zero() {
                continue;
            }
            for (ib, &mb) in sb.iter().enumerate() {
                if other.coords[ib].is_zero() {
                    continue;
                }
                if let Some((m, sign)) = wedge_masks(ma, mb) {
                    let idx = mask_index(n, d1 + d2, m);
                    let term = self.coords[ia].clone() * other.coords[ib].clone();
                    let term = if sign < 0 { -term } else { term };
                    out.coords[idx] = out.coords[idx].clone() + term;
                }
            }
        }
        Ok(out)
    }
}

/// vol: ∧^n V → k, normalized to `scalar` on e_1∧…∧e_n.
#[derive(Clone, Debug)]
pub struct VolumeForm<K> {
    pub n: usize,
    pub scalar: K,
}

impl<K: Field> VolumeForm<K> {
    pub fn unit(n: usize, one: K) -> Self {
        assert!(!one.is_zero());
        VolumeForm { n, scalar: one }
    }

    pub fn apply(&self, top: &MultiVector<K>) -> K {
        assert!(top.n == self.n && top.d == self.n);
        top.coords[0].clone() * self.scalar.clone()
    }
}

/// A based symplectic space: an even-dimensional coordinate space together
/// with the Gram matrix of its skew form.
#[derive(Clone, Debug)]
pub struct SymplecticFrame<K> {
    pub gram: Matrix<K>,
}

impl<K: Field> SymplecticFrame<K> {
    pub fn new(gram: Matrix<K>) -> Self {
        assert_eq!(gram.nrows(), gram.ncols());
        assert_eq!(gram.nrows() % 2, 0);
        for i in 0..gram.nrows() {
            for j in 0..gram.ncols() {
                assert!(
                    gram[(i, j)] == -gram[(j, i)].clone(),
                    "Gram matrix must be skew-symmetric"
                );
            }
        }
        assert_eq!(gram.rank(), gram.nrows(), "skew form must be nondegenerate");
        SymplecticFrame { gram }
    }

    pub fn dim(&self) -> usize {
        self.gram.nrows()
    }

    pub fn pair(&self, a: &[K], b: &[K]) -> K {
        let ga = self.gram.apply_left(a);
        let mut acc = K::zero();
        for (x, y) in ga.iter().zip(b.iter()) {
            if !x.is_zero() && !y.is_zero() {
                acc = acc + x.clone() * y.clone();
            }
        }
        acc
    }

    /// The form vanishes identically on the span.
    pub fn is_isotropic(&self, s: &Subspace<K>) -> bool {
        let b = s.basis();
        for i in 0..b.nrows() {
            for j in i..b.nrows() {
                if !self.pair(b.row(i), b.row(j)).is_zero() {
                    return false;
                }
            }
        }
        true
    }
}

/// η(ω,ω′) = vol(ω∧ω′) as a 20×20 skew Gram matrix on ∧³V₆.
pub fn eta_form<K: Field>(vol: &VolumeForm<K>) -> SymplecticFrame<K> {
    assert_eq!(vol.n, 6);
    let dim = binomial(6, 3);
    let masks = subsets(6, 3);
    let mut gram = Matrix::zero(dim, dim);
    for (i, &mi) in masks.iter().enumerate() {
        for (j, &mj) in masks.iter().enumerate() {
            if let Some((_, sign)) = wedge_masks(mi, mj) {
                let v = vol.scalar.clone();
                gram[(i, j)] = if sign < 0 { -v } else { v };
            }
        }
    }
    SymplecticFrame::new(gram)
}

/// η evaluated on two 3-forms of V₆.
pub fn eta_pair<K: Field>(vol: &VolumeForm<K>, a: &MultiVector<K>, b: &MultiVector<K>) -> K {
    let top = a.wedge(b).expect("3+3 = 6");
    vol.apply(&top)
}

/// T_U = ∧²U∧V ⊂ ∧³V for a 3-space U ⊂ V₆: the affine tangent space to
/// G(3,V) at [U], a Lagrangian for η.
pub fn tangent_space<K: Field>(u: &Subspace<K>) -> Result<Subspace<K>, ExteriorError> {
    if u.ambient() != 6 || u.dim() != 3 {
        return Err(ExteriorError::WrongDegree);
    }
    let one = u
        .basis()
        .row(0)
        .iter()
        .find(|c| !c.is_zero())
        .map(|c| c.embed_i64(1))
        .expect("nonzero basis row");
    let rows = u.basis().rows_vec();
    let uvec: Vec<MultiVector<K>> = rows.into_iter().map(MultiVector::vector).collect();
    let mut gens = Vec::new();
    for i in 0..3 {
        for j in (i + 1)..3 {
            let two = uvec[i].wedge(&uvec[j]).unwrap();
            for k in 0..6 {
                let ek = MultiVector::monomial(6, &[k], one.clone());
                gens.push(two.wedge(&ek).unwrap().coords);
            }
        }
    }
    let t = Subspace::from_rows(binomial(6, 3), gens);
    Ok(t)
}

/// The 12-dimensional symplectic frame V₂⊗∧²V₄ ⊂ ∧³(V₂⊕V₄) in which Kummer
/// Lagrangians live.  V₂ = ⟨e₀,e₁⟩ and V₄ = ⟨e₂..e₅⟩; the basis is
/// e_a∧(f_i∧f_j) ordered a-major, (i,j) lexicographic.
#[derive(Clone, Debug)]
pub struct TwoFourFrame<K> {
    /// 12 basis monomials as rows in the 20-dim ∧³V₆ coordinates.
    pub embedding: Matrix<K>,
    /// positions of the 12 monomials among the 20
    pub positions: Vec<usize>,
    pub frame: SymplecticFrame<K>,
    one: K,
}

impl<K: Field> TwoFourFrame<K> {
    pub fn new(one: K) -> Self {
        assert!(!one.is_zero());
        let masks3 = subsets(6, 3);
        let mut positions = Vec::with_capacity(12);
        // a-major over V₂ = {0,1}; pairs of V₄ = {2,3,4,5} lex.
        let pairs = subsets(4, 2);
        for a in 0..2usize {
            for &pm in &pairs {
                let mask = (1u32 << a) | (pm << 2);
                positions.push(mask_index(6, 3, mask));
            }
        }
        let mut embedding = Matrix::zero(12, 20);
        for (r, &pos) in positions.iter().enumerate() {
            embedding[(r, pos)] = one.clone();
        }
        let mut gram = Matrix::zero(12, 12);
        for i in 0..12 {
            for j in 0..12 {
                if let Some((_, sign)) = wedge_masks(masks3[positions[i]], masks3[positions[j]]) {
                    gram[(i, j)] = if sign < 0 {
                        -one.clone()
                    } else {
                        one.clone()
                    };
                }
            }
        }
        TwoFourFrame {
            embedding,
            positions,
            frame: SymplecticFrame::new(gram),
            one,
        }
    }

    pub fn one(&self) -> K {
        self.one.clone()
    }

    /// Restrict a 20-dim 3-form supported on the frame monomials to the 12
    /// frame coordinates.  `None` if it sticks out.
    pub fn restrict(&self, v: &[K]) -> Option<Vec<K>> {
        let mut out = vec![K::zero(); 12];
        let inside: std::collections::BTreeSet<usize> = self.positions.iter().cloned().collect();
        for (i, c) in v.iter().enumerate() {
            if !c.is_zero() && !inside.contains(&i) {
                return None;
            }
        }
        for (r, &pos) in self.positions.iter().enumerate() {
            out[r] = v[pos].clone();
        }
        Some(out)
    }

    pub fn embed(&self, coords: &[K]) -> Vec<K> {
        assert_eq!(coords.len(), 12);
        let mut out = vec![K::zero(); 20];
        for (r, &pos) in self.positions.iter().enumerate() {
            out[pos] = coords[r].clone();
        }
        out
    }

    /// F_v = V₂⊗(V₄∧v): the 6-dimensional η₂,₄-Lagrangian attached to
    /// 0 ≠ v ∈ V₄ (coordinates in the V₄ basis).
    pub fn f_space(&self, v: &[K]) -> Result<Subspace<K>, ExteriorError> {
        assert_eq!(v.len(), 4);
        if v.iter().all(|c| c.is_zero()) {
            return Err(ExteriorError::ZeroInput);
        }
        let mut vv = vec![K::zero(); 6];
        for (i, c) in v.iter().enumerate() {
            vv[2 + i] = c.clone();
        }
        let vmv = MultiVector::vector(vv);
        let mut rows = Vec::with_capacity(8);
        for a in 0..2usize {
            for i in 0..4usize {
                let ea = MultiVector::monomial(6, &[a], self.one.clone());
                let fi = MultiVector::monomial(6, &[2 + i], self.one.clone());
                let w = ea.wedge(&fi.wedge(&vmv).unwrap()).unwrap();
                rows.push(self.restrict(&w.coords).expect("stays in frame"));
            }
        }
        Ok(Subspace::from_rows(12, rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::rng::Rng;
    use num_traits::Zero;

    #[test]
    fn wedge_monomial_signs() {
        // e1∧e1 = 0
        let e1 = MultiVector::<Rational>::monomial(6, &[0], Rational::from_int(1));
        assert!(e1.wedge(&e1).unwrap().is_zero());
        // (e1∧e2)∧(e3∧e4∧e5) = +(e3∧e4∧e5)∧(e1∧e2): sign (−1)^{2·3} = +1
        let a = MultiVector::<Rational>::monomial(6, &[0, 1], Rational::from_int(1));
        let b = MultiVector::<Rational>::monomial(6, &[2, 3, 4], Rational::from_int(1));
        assert_eq!(a.wedge(&b).unwrap(), b.wedge(&a).unwrap());
        // degree overflow
        let c = MultiVector::<Rational>::monomial(6, &[0, 1, 2, 3], Rational::from_int(1));
        assert_eq!(b.wedge(&c), Err(ExteriorError::DegreeOverflow));
    }

    #[test]
    fn wedge_bilinearity_random() {
        let p = 101;
        let mut rng = Rng::seeded(5);
        let dim2 = binomial(6, 2);
        let dim1 = 6;
        for _ in 0..10 {
            let rnd = |rng: &mut Rng, d: usize, len: usize| {
                MultiVector::from_coords(
                    6,
                    d,
                    (0..len).map(|_| Fp::new(rng.below(p) as i64, p)).collect(),
                )
            };
            let a = rnd(&mut rng, 2, dim2);
            let a2 = rnd(&mut rng, 2, dim2);
            let b = rnd(&mut rng, 1, dim1);
            let lhs = a.add(&a2).wedge(&b).unwrap();
            let rhs = a.wedge(&b).unwrap().add(&a2.wedge(&b).unwrap());
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn eta_examples() {
        let vol = VolumeForm::unit(6, Rational::from_int(1));
        let a = MultiVector::monomial(6, &[0, 1, 2], Rational::from_int(1));
        let b = MultiVector::monomial(6, &[3, 4, 5], Rational::from_int(1));
        assert_eq!(eta_pair(&vol, &a, &b), Rational::from_int(1));
        assert_eq!(eta_pair(&vol, &a, &a), Rational::from_int(0));
        let frame = eta_form(&vol);
        assert_eq!(frame.gram.rank(), 20);
    }

    #[test]
    fn tangent_space_standard() {
        let p = 101;
        let one = Fp::new(1, p);
        let e = |i: usize| {
            let mut v = vec![Fp::new(0, p); 6];
            v[i] = one;
            v
        };
        let u = Subspace::from_rows(6, vec![e(0), e(1), e(2)]);
        let t = tangent_space(&u).unwrap();
        assert_eq!(t.dim(), 10);
        // T_U = span of wedge monomials with at least two indices in {0,1,2}
        let masks = subsets(6, 3);
        for (idx, &m) in masks.iter().enumerate() {
            let low = (m & 0b111).count_ones();
            let mut v = vec![Fp::new(0, p); 20];
            v[idx] = one;
            assert_eq!(t.contains(&v), low >= 2, "monomial {idx}");
        }
    }

    #[test]
    fn tangent_space_isotropic_random() {
        let p = 101;
        let vol = VolumeForm::unit(6, Fp::new(1, p));
        let frame = eta_form(&vol);
        let mut rng = Rng::seeded(9);
        for _ in 0..100 {
            let u = Subspace::from_rows(
                6,
                (0..3)
                    .map(|_| (0..6).map(|_| Fp::new(rng.below(p) as i64, p)).collect())
                    .collect(),
            );
            if u.dim() != 3 {
                continue;
            }
            let t = tangent_space(&u).unwrap();
            assert_eq!(t.dim(), 10);
            assert!(frame.is_isotropic(&t));
        }
    }

    #[test]
    fn f_space_properties() {
        let p = 7;
        let tf = TwoFourFrame::new(Fp::new(1, p));
        // exhaustive over P³(F₇): F_v is a 6-dim Lagrangian; F_{2v} = F_v
        let mut count = 0;
        for rep in crate::projective::points::<Fp>(&Fp::new(1, p), 4) {
            let fv = tf.f_space(&rep).unwrap();
            assert_eq!(fv.dim(), 6);
            assert!(tf.frame.is_isotropic(&fv));
            let two: Vec<Fp> = rep.iter().map(|c| *c + *c).collect();
            if two.iter().any(|c| !c.is_zero()) {
                assert_eq!(tf.f_space(&two).unwrap(), fv);
            }
            count += 1;
        }
        assert_eq!(count, 7 * 7 * 7 + 7 * 7 + 7 + 1);
    }
}
