//! Dense exact linear algebra over a [`Field`]: echelon forms, rank, kernel,
//! determinant, adjugate, and canonical subspaces.

use std::fmt;

use crate::field::Field;

#[derive(Clone, PartialEq, Debug)]
pub struct Matrix<K> {
    rows: usize,
    cols: usize,
    data: Vec<K>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LinalgError {
    ShapeMismatch,
    AmbientMismatch,
    NotSquare,
}

impl fmt::Display for LinalgError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LinalgError::ShapeMismatch => write!(f, "matrix shape mismatch"),
            LinalgError::AmbientMismatch => write!(f, "subspace ambient dimension mismatch"),
            LinalgError::NotSquare => write!(f, "square matrix required"),
        }
    }
}

impl std::error::Error for LinalgError {}

impl<K: Field> Matrix<K> {
    pub fn from_rows(rows: Vec<Vec<K>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c));
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn zero(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![K::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = K::one();
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[K] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<K>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn stack(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch);
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn mul(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::ShapeMismatch);
        }
        let mut out: Matrix<K> = Matrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let t = a.clone() * other[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + t;
                }
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &K) -> Self {
        let mut m = self.clone();
        for e in &mut m.data {
            *e = e.clone() * s.clone();
        }
        m
    }

    pub fn add(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch);
        }
        let mut m = self.clone();
        for (e, o) in m.data.iter_mut().zip(other.data.iter()) {
            *e = e.clone() + o.clone();
        }
        Ok(m)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(LinalgError::ShapeMismatch);
        }
        let mut m = self.clone();
        for (e, o) in m.data.iter_mut().zip(other.data.iter()) {
            *e = e.clone() - o.clone();
        }
        Ok(m)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    /// In-place reduced row echelon form.  Returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self[(r, c)].inv().unwrap();
            for j in c..self.cols {
                self[(r, j)] = self[(r, j)].clone() * inv.clone();
            }
            for i in 0..self.rows {
                if i != r && !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone();
                    for j in c..self.cols {
                        let t = f.clone() * self[(r, j)].clone();
                        self[(i, j)] = self[(i, j)].clone() - t;
                    }
                }
            }
            pivots.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        pivots
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        m.row_echelon_rank()
    }

    /// Rank by plain forward elimination (cheaper than full RREF).
    fn row_echelon_rank(&mut self) -> usize {
        let mut r = 0;
        for c in 0..self.cols {
            let Some(pr) = (r..self.rows).find(|&i| !self[(i, c)].is_zero()) else {
                continue;
            };
            self.swap_rows(r, pr);
            let inv = self[(r, c)].inv().unwrap();
            for i in (r + 1)..self.rows {
                if !self[(i, c)].is_zero() {
                    let f = self[(i, c)].clone() * inv.clone();
                    for j in c..self.cols {
                        let t = f.clone() * self[(r, j)].clone();
                        self[(i, j)] = self[(i, j)].clone() - t;
                    }
                }
            }
            r += 1;
            if r == self.rows {
                break;
            }
        }
        r
    }

    pub fn det(&self) -> Result<K, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = K::one();
        let mut flips = 0usize;
        for c in 0..n {
            let Some(pr) = (c..n).find(|&i| !m[(i, c)].is_zero()) else {
                return Ok(K::zero());
            };
            if pr != c {
                m.swap_rows(c, pr);
                flips += 1;
            }
            det = det * m[(c, c)].clone();
            let inv = m[(c, c)].inv().unwrap();
            for i in (c + 1)..n {
                if !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone() * inv.clone();
                    for j in c..n {
                        let t = f.clone() * m[(c, j)].clone();
                        m[(i, j)] = m[(i, j)].clone() - t;
                    }
                }
            }
        }
        Ok(if flips % 2 == 1 { -det } else { det })
    }

    /// Adjugate, satisfying m·adj(m) = det(m)·I.
    pub fn adjugate(&self) -> Result<Self, LinalgError> {
        if self.rows != self.cols {
            return Err(LinalgError::NotSquare);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(self.clone());
        }
        if n == 1 {
            let mut m = Matrix::zero(1, 1);
            m[(0, 0)] = K::one();
            return Ok(m);
        }
        let mut adj = Matrix::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                let c = self.minor(i, j).det()?;
                // adj[(j, i)]: the transpose of the cofactor matrix.
                adj[(j, i)] = if (i + j) % 2 == 0 { c } else { -c };
            }
        }
        Ok(adj)
    }

    fn minor(&self, skip_r: usize, skip_c: usize) -> Self {
        let n = self.rows;
        let mut rows = Vec::with_capacity(n - 1);
        for i in 0..n {
            if i == skip_r {
                continue;
            }
            let mut row = Vec::with_capacity(n - 1);
            for j in 0..n {
                if j == skip_c {
                    continue;
                }
                row.push(self[(i, j)].clone());
            }
            rows.push(row);
        }
        Matrix::from_rows(rows)
    }

    /// Basis of the right kernel {x : m·x = 0}, canonically echelonized.
    pub fn kernel(&self) -> Subspace<K> {
        let one = self
            .data
            .iter()
            .find(|c| !c.is_zero())
            .map(|c| c.embed_i64(1))
            .unwrap_or_else(K::one);
        let mut m = self.clone();
        let pivots = m.rref();
        let rank = pivots.len();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![K::zero(); self.cols];
            v[fc] = one.clone();
            for (ri, &pc) in pivots.iter().enumerate().take(rank) {
                v[pc] = -m[(ri, fc)].clone();
            }
            basis.push(v);
        }
        Subspace::from_rows(self.cols, basis)
    }

    /// Solve m·x = rhs column-wise.  `None` if inconsistent.
    pub fn solve(&self, rhs: &Matrix<K>) -> Result<Option<Matrix<K>>, LinalgError> {
        if rhs.rows != self.rows {
            return Err(LinalgError::ShapeMismatch);
        }
        let mut aug = Matrix::zero(self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..rhs.cols {
                aug[(i, self.cols + j)] = rhs[(i, j)].clone();
            }
        }
        let pivots = aug.rref();
        if pivots.iter().any(|&c| c >= self.cols) {
            return Ok(None); // a pivot in the rhs block: inconsistent
        }
        let mut x = Matrix::zero(self.cols, rhs.cols);
        for (ri, &pc) in pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                x[(pc, j)] = aug[(ri, self.cols + j)].clone();
            }
        }
        Ok(Some(x))
    }

    /// Row-vector × matrix.
    pub fn apply_left(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![K::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let t = vi.clone() * self[(i, j)].clone();
                out[j] = out[j].clone() + t;
            }
        }
        out
    }

    /// Matrix × column-vector.
    pub fn apply(&self, v: &[K]) -> Vec<K> {
        assert_eq!(v.len(), self.cols);
        let mut out = vec![K::zero(); self.rows];
        for i in 0..self.rows {
            let mut acc = K::zero();
            for j in 0..self.cols {
                if !v[j].is_zero() && !self[(i, j)].is_zero() {
                    acc = acc + self[(i, j)].clone() * v[j].clone();
                }
            }
            out[i] = acc;
        }
        out
    }
}

impl<K> std::ops::Index<(usize, usize)> for Matrix<K> {
    type Output = K;
    fn index(&self, (i, j): (usize, usize)) -> &K {
        &self.data[i * self.cols + j]
    }
}

impl<K> std::ops::IndexMut<(usize, usize)> for Matrix<K> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut K {
        &mut self.data[i * self.cols + j]
    }
}

impl<K: Field> fmt::Display for Matrix<K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self[(i, j)])?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Subspaces
// ---------------------------------------------------------------------------

/// A linear subspace stored as its unique reduced-row-echelon basis, so two
/// subspaces are equal iff their basis matrices agree entry-wise.
#[derive(Clone, PartialEq, Debug)]
pub struct Subspace<K> {
    ambient: usize,
    basis: Matrix<K>,
    pivots: Vec<usize>,
}

impl<K: Field> Subspace<K> {
    pub fn from_rows(ambient: usize, rows: Vec<Vec<K>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == ambient));
        let mut m = Matrix::from_rows(rows);
        if m.nrows() == 0 {
            m = Matrix::zero(0, ambient);
        }
        let pivots = m.rref();
        let dim = pivots.len();
        let basis = Matrix::from_rows(m.rows_vec().into_iter().take(dim).collect());
        let basis = if dim == 0 {
            Matrix::zero(0, ambient)
        } else {
            basis
        };
        Subspace {
            ambient,
            basis,
            pivots,
        }
    }

    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Matrix::zero(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self
    where
        K: Field,
    {
        Subspace::from_rows(ambient, Matrix::<K>::identity(ambient).rows_vec())
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    pub fn basis(&self) -> &Matrix<K> {
        &self.basis
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn contains(&self, v: &[K]) -> bool {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for (ri, &pc) in self.pivots.iter().enumerate() {
            if !w[pc].is_zero() {
                let f = w[pc].clone();
                for j in 0..self.ambient {
                    let t = f.clone() * self.basis[(ri, j)].clone();
                    w[j] = w[j].clone() - t;
                }
            }
        }
        w.iter().all(|x| x.is_zero())
    }

    /// Coordinates of `v` in this basis, `None` if `v` is outside.
    pub fn coordinates(&self, v: &[K]) -> Option<Vec<K>> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        let mut coords = vec![K::zero(); self.dim()];
        for (ri, &pc) in self.pivots.iter().enumerate() {
            if !w[pc].is_zero() {
                let f = w[pc].clone();
                coords[ri] = f.clone();
                for j in 0..self.ambient {
                    let t = f.clone() * self.basis[(ri, j)].clone();
                    w[j] = w[j].clone() - t;
                }
            }
        }
        if w.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn intersect(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch);
        }
        let r1 = self.dim();
        let r2 = other.dim();
        if r1 == 0 || r2 == 0 {
            return Ok(Subspace::zero(self.ambient));
        }
        // x ∈ s1∩s2  ⟺  x = a·B1 = b·B2: kernel of the (r1+r2)-column system.
        let mut sys = Matrix::zero(self.ambient, r1 + r2);
        for j in 0..r1 {
            for i in 0..self.ambient {
                sys[(i, j)] = self.basis[(j, i)].clone();
            }
        }
        for j in 0..r2 {
            for i in 0..self.ambient {
                sys[(i, r1 + j)] = -other.basis[(j, i)].clone();
            }
        }
        let ker = sys.kernel();
        let mut rows = Vec::with_capacity(ker.dim());
        for k in 0..ker.dim() {
            let coeffs = &ker.basis().row(k)[..r1];
            rows.push(self.basis.apply_left(coeffs));
        }
        Ok(Subspace::from_rows(self.ambient, rows))
    }

    pub fn sum(&self, other: &Self) -> Result<Self, LinalgError> {
        if self.ambient != other.ambient {
            return Err(LinalgError::AmbientMismatch);
        }
        let stacked = self.basis.stack(&other.basis)?;
        Ok(Subspace::from_rows(self.ambient, stacked.rows_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};
    use crate::rng::Rng;
    use num_traits::Zero;

    fn fp_mat(p: u64, rows: &[&[i64]]) -> Matrix<Fp> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| Fp::new(v, p)).collect())
                .collect(),
        )
    }

    #[test]
    fn rank_identity_and_zero() {
        let id = Matrix::<Fp>::from_rows(
            (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| Fp::new(if i == j { 1 } else { 0 }, 101))
                        .collect()
                })
                .collect(),
        );
        assert_eq!(id.rank(), 3);
        let z: Matrix<Fp> = Matrix::from_rows(vec![vec![Fp::new(0, 101); 6]; 4]);
        assert_eq!(z.rank(), 0);
    }

    #[test]
    fn det_and_adjugate() {
        let m = fp_mat(101, &[&[2, 3, 1], &[0, 5, 4], &[7, 1, 7]]);
        let d = m.det().unwrap();
        assert!(!d.is_zero());
        let adj = m.adjugate().unwrap();
        let prod = m.mul(&adj).unwrap();
        let mut expected = Matrix::<Fp>::zero(3, 3);
        for i in 0..3 {
            expected[(i, i)] = d;
        }
        assert_eq!(prod, expected);

        // adjugate(I) = I over Q
        let id3 = Matrix::<Rational>::identity(3);
        assert_eq!(id3.adjugate().unwrap(), id3);
    }

    #[test]
    fn adjugate_identity_random_rational() {
        let mut rng = Rng::seeded(7);
        for _ in 0..5 {
            let m = Matrix::<Rational>::from_rows(
                (0..3)
                    .map(|_| {
                        (0..3)
                            .map(|_| Rational::from_int(rng.below(19) as i64 - 9))
                            .collect()
                    })
                    .collect(),
            );
            let d = m.det().unwrap();
            let adj = m.adjugate().unwrap();
            let prod = m.mul(&adj).unwrap();
            let mut expected = Matrix::<Rational>::zero(3, 3);
            for i in 0..3 {
                expected[(i, i)] = d.clone();
            }
            assert_eq!(prod, expected);
        }
    }

    #[test]
    fn kernel_solve_roundtrip() {
        let m = fp_mat(11, &[&[1, 2, 3, 4], &[2, 4, 6, 8], &[0, 1, 1, 0]]);
        assert_eq!(m.rank(), 2);
        let ker = m.kernel();
        assert_eq!(ker.dim(), 2);
        for k in 0..ker.dim() {
            let prod = m.apply(ker.basis().row(k));
            assert!(prod.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn subspace_canonical_equality() {
        let p = 101;
        // Two different spanning sets of the same plane.
        let s1 = Subspace::from_rows(
            4,
            vec![
                vec![Fp::new(1, p), Fp::new(2, p), Fp::new(0, p), Fp::new(1, p)],
                vec![Fp::new(0, p), Fp::new(1, p), Fp::new(1, p), Fp::new(3, p)],
            ],
        );
        let s2 = Subspace::from_rows(
            4,
            vec![
                vec![Fp::new(2, p), Fp::new(5, p), Fp::new(1, p), Fp::new(5, p)],
                vec![Fp::new(3, p), Fp::new(7, p), Fp::new(1, p), Fp::new(6, p)],
            ],
        );
        assert_eq!(s1, s2);
    }

    #[test]
    fn intersect_dimension_formula() {
        let p = 101;
        let mut rng = Rng::seeded(42);
        for _ in 0..20 {
            let dim = 8;
            let mk = |rng: &mut Rng, k: usize| {
                Subspace::from_rows(
                    dim,
                    (0..k)
                        .map(|_| (0..dim).map(|_| Fp::new(rng.below(p) as i64, p)).collect())
                        .collect(),
                )
            };
            let s1 = mk(&mut rng, 4);
            let s2 = mk(&mut rng, 3);
            let inter = s1.intersect(&s2).unwrap();
            let stacked = s1.basis().stack(s2.basis()).unwrap();
            assert_eq!(
                inter.dim() + stacked.rank(),
                s1.dim() + s2.dim(),
                "dim(s1∩s2) + rank(stacked) = dim s1 + dim s2"
            );
            // self-intersection
            assert_eq!(s1.intersect(&s1).unwrap(), s1);
        }
    }

    #[test]
    fn complementary_coordinate_subspaces() {
        let p = 7;
        let e = |i: usize| {
            let mut v = vec![Fp::new(0, p); 4];
            v[i] = Fp::new(1, p);
            v
        };
        let s1 = Subspace::from_rows(4, vec![e(0), e(1)]);
        let s2 = Subspace::from_rows(4, vec![e(2), e(3)]);
        let inter = s1.intersect(&s2).unwrap();
        assert_eq!(inter.dim(), 0);
    }

    #[test]
    fn det_multiplicative_random_5x5() {
        let p = 101;
        let mut rng = Rng::seeded(55);
        for _ in 0..10 {
            let mk = |rng: &mut Rng| {
                Matrix::from_rows(
                    (0..5)
                        .map(|_| (0..5).map(|_| Fp::new(rng.below(p) as i64, p)).collect())
                        .collect(),
                )
            };
            let a = mk(&mut rng);
            let b = mk(&mut rng);
            let ab = a.mul(&b).unwrap();
            assert_eq!(ab.det().unwrap(), a.det().unwrap() * b.det().unwrap());
        }
    }

    #[test]
    fn ambient_mismatch_error() {
        let s1 = Subspace::<Fp>::zero(4);
        let s2 = Subspace::<Fp>::zero(5);
        assert_eq!(s1.intersect(&s2), Err(LinalgError::AmbientMismatch));
    }
}
