//! Lagrangian subspaces of a symplectic frame: graphs of symmetric maps,
//! degeneracy-rank predicates, and the local quadric charts of the
//! Lagrangian Grassmannian along the tangent family T_U.

use std::fmt;

use crate::exterior::{subsets, MultiVector, SymplecticFrame};
use crate::field::Field;
use crate::linalg::{Matrix, Subspace};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LagrangianError {
    NotIsotropic,
    WrongDimension,
    NotSymmetric,
    NotTransverse,
    FrameMismatch,
    NotOnCone,
}

impl fmt::Display for LagrangianError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LagrangianError::NotIsotropic => write!(f, "subspace is not isotropic"),
            LagrangianError::WrongDimension => write!(f, "wrong dimension for a Lagrangian"),
            LagrangianError::NotSymmetric => write!(f, "matrix is not symmetric"),
            LagrangianError::NotTransverse => write!(f, "subspace not transverse to the splitting"),
            LagrangianError::FrameMismatch => write!(f, "ambient frames disagree"),
            LagrangianError::NotOnCone => write!(f, "chart point violates the cone condition"),
        }
    }
}

impl std::error::Error for LagrangianError {}

/// A Lagrangian subspace, validated against its frame at construction.
#[derive(Clone, PartialEq, Debug)]
pub struct Lagrangian<K> {
    space: Subspace<K>,
}

impl<K: Field> Lagrangian<K> {
    pub fn new(space: Subspace<K>, frame: &SymplecticFrame<K>) -> Result<Self, LagrangianError> {
        if space.ambient() != frame.dim() || space.dim() * 2 != frame.dim() {
            return Err(LagrangianError::WrongDimension);
        }
        if !frame.is_isotropic(&space) {
            return Err(LagrangianError::NotIsotropic);
        }
        Ok(Lagrangian { space })
    }

    pub fn space(&self) -> &Subspace<K> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }
}

/// A symmetric matrix acting as a map between two dual Lagrangian halves.
#[derive(Clone, PartialEq, Debug)]
pub struct SymmetricMap<K> {
    mat: Matrix<K>,
}

impl<K: Field> SymmetricMap<K> {
    pub fn new(mat: Matrix<K>) -> Result<Self, LagrangianError> {
        if !mat.is_symmetric() {
            return Err(LagrangianError::NotSymmetric);
        }
        Ok(SymmetricMap { mat })
    }

    pub fn matrix(&self) -> &Matrix<K> {
        &self.mat
    }
}

/// dim(a ∩ b) for two Lagrangians of one frame.
pub fn degeneracy_rank<K: Field>(a: &Lagrangian<K>, b: &Lagrangian<K>) -> usize {
    subspace_meet_dim(a.space(), b.space())
}

/// dim of the intersection via the rank of the stacked bases; cheaper than
/// producing the canonical intersection basis.
pub fn subspace_meet_dim<K: Field>(a: &Subspace<K>, b: &Subspace<K>) -> usize {
    let stacked = a.basis().stack(b.basis()).expect("equal ambients");
    a.dim() + b.dim() - stacked.rank()
}

/// The graph of a symmetric map q: L₁ → L₂ as a Lagrangian subspace.
///
/// `l1`, `l2` are bases (rows) of two complementary Lagrangians; the matrix
/// of q is given in the η-normalized identification of L₂ with L₁^∨, i.e.
/// the graph G satisfies η(l1_i, φ(l1_k)) = q[i,k].
pub fn graph_lagrangian<K: Field>(
    q: &SymmetricMap<K>,
    l1: &Matrix<K>,
    l2: &Matrix<K>,
    frame: &SymplecticFrame<K>,
) -> Result<Lagrangian<K>, LagrangianError> {
    let n = l1.nrows();
    if q.matrix().nrows() != n || l2.nrows() != n || l1.ncols() != frame.dim() {
        return Err(LagrangianError::WrongDimension);
    }
    // pairing P[i][j] = η(l1_i, l2_j) must be invertible
    let mut pairing = Matrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            pairing[(i, j)] = frame.pair(l1.row(i), l2.row(j));
        }
    }
    let c = pairing
        .solve(q.matrix())
        .map_err(|_| LagrangianError::WrongDimension)?
        .ok_or(LagrangianError::NotTransverse)?;
    // rows: l1_k + Σ_j c[j,k]·l2_j
    let mut rows = Vec::with_capacity(n);
    for k in 0..n {
        let mut row = l1.row(k).to_vec();
        for j in 0..n {
            if !c[(j, k)].is_zero() {
                for (x, l2x) in row.iter_mut().zip(l2.row(j)) {
                    *x = x.clone() + c[(j, k)].clone() * l2x.clone();
                }
            }
        }
        rows.push(row);
    }
    Lagrangian::new(Subspace::from_rows(frame.dim(), rows), frame)
}

/// Inverse of [`graph_lagrangian`]: the symmetric matrix whose graph over
/// (l1, l2) is `l`; `None` when `l` meets span(l2).
pub fn graph_form<K: Field>(
    l: &Subspace<K>,
    l1: &Matrix<K>,
    l2: &Matrix<K>,
    frame: &SymplecticFrame<K>,
) -> Option<Matrix<K>> {
    let n = l1.nrows();
    if l.dim() != n {
        return None;
    }
    // Express the rows of l in the combined basis [l1; l2].
    let combined = l1.stack(l2).ok()?;
    let coords = combined.transpose().solve(&l.basis().transpose()).ok()??;
    // coords is (2n)×n: column k holds the [l1; l2] coordinates of row k.
    let mut a = Matrix::zero(n, n);
    let mut b = Matrix::zero(n, n);
    for k in 0..n {
        for i in 0..n {
            a[(i, k)] = coords[(i, k)].clone();
            b[(i, k)] = coords[(n + i, k)].clone();
        }
    }
    // l = graph(φ) with φ(l1_k) = Σ_j C[j,k]·l2_j, C = B·A⁻¹ (column form).
    let ainv_cols = a.solve(&Matrix::identity(n)).ok()??;
    let c = b.mul(&ainv_cols).ok()?;
    // q[i,k] = η(l1_i, φ(l1_k)) = Σ_j P[i,j]·C[j,k]
    let mut pairing = Matrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            pairing[(i, j)] = frame.pair(l1.row(i), l2.row(j));
        }
    }
    Some(pairing.mul(&c).expect("shapes"))
}

// ---------------------------------------------------------------------------
// The chart of LG(10, ∧³V₆) at T_{U₀} in (m₀, M)-coordinates
// ---------------------------------------------------------------------------

/// Splitting data for ∧³V₆ = T_{U₀} ⊕ T_{U∞} with U₀ = ⟨e₀,e₁,e₂⟩,
/// U∞ = ⟨e₃,e₄,e₅⟩, plus the η-normalized dual basis of T_{U∞}.
///
/// The T_{U₀} basis is ordered m₀ = e₀∧e₁∧e₂ first, then the nine
/// Hom(U₀,U∞)-coordinates t_{ij} (ε_j ∧ e_{3+i}, row-major in (i,j)), where
/// ε_j is the vol-dual 2-form of e_j in ∧²U₀.
#[derive(Clone, Debug)]
pub struct ChartFrame<K> {
    pub frame: SymplecticFrame<K>,
    pub t_basis: Matrix<K>,
    pub dual_basis: Matrix<K>,
    one: K,
}

impl<K: Field> ChartFrame<K> {
    pub fn new(one: K) -> Self {
        assert!(!one.is_zero());
        let vol = crate::exterior::VolumeForm::unit(6, one.clone());
        let frame = crate::exterior::eta_form(&vol);
        let mut t_rows = chart_half_basis(&one, [0, 1, 2], [3, 4, 5]);
        // Orient the ∧³U₀ direction so the (m₀, M)-chart polynomial takes
        // its displayed form up to the global chart scale.
        for c in t_rows[0].iter_mut() {
            *c = -c.clone();
        }
        let t_basis = Matrix::from_rows(t_rows);
        let w_basis = Matrix::from_rows(chart_half_basis(&one, [3, 4, 5], [0, 1, 2]));
        let n = 10;
        let mut pairing = Matrix::zero(n, n);
        for a in 0..n {
            for c in 0..n {
                pairing[(a, c)] = frame.pair(t_basis.row(a), w_basis.row(c));
            }
        }
        let x = pairing
            .solve(&Matrix::identity(n))
            .unwrap()
            .expect("T_{U∞} pairs nondegenerately with T_{U₀}");
        let dual_basis = x.transpose().mul(&w_basis).unwrap();
        ChartFrame {
            frame,
            t_basis,
            dual_basis,
            one,
        }
    }

    /// Intrinsic scale relating the displayed chart polynomial to the
    /// η-graph form under the unit volume normalization (rank predicates
    /// never see it).
    fn chart_scale(&self) -> K {
        let one = self.one.clone();
        -(one.clone() + one)
    }

    /// The Lagrangian whose chart polynomial is the given symmetric matrix.
    pub fn graph_of_chart(&self, s: &Matrix<K>) -> Result<Lagrangian<K>, LagrangianError> {
        let q = SymmetricMap::new(s.scale(&self.chart_scale()))?;
        graph_lagrangian(&q, &self.t_basis, &self.dual_basis, &self.frame)
    }

    /// Inverse of [`Self::graph_of_chart`].
    pub fn chart_form_of(&self, l: &Subspace<K>) -> Option<Matrix<K>> {
        let q = graph_form(l, &self.t_basis, &self.dual_basis, &self.frame)?;
        Some(q.scale(&self.chart_scale().inv().unwrap()))
    }

    pub fn one(&self) -> K {
        self.one.clone()
    }

    /// graph(q) over (T_{U₀}, dual) as a Lagrangian of the 20-dim frame.
    pub fn graph(&self, q: &SymmetricMap<K>) -> Result<Lagrangian<K>, LagrangianError> {
        graph_lagrangian(q, &self.t_basis, &self.dual_basis, &self.frame)
    }

    /// The symmetric matrix of a Lagrangian transverse to the dual half.
    pub fn form_of(&self, l: &Subspace<K>) -> Option<Matrix<K>> {
        graph_form(l, &self.t_basis, &self.dual_basis, &self.frame)
    }
}

/// Basis [∧³U, ε_j∧e_{w_i}] of T_U for a coordinate 3-space U, as rows in
/// ∧³V₆ coordinates.
fn chart_half_basis<K: Field>(one: &K, u: [usize; 3], w: [usize; 3]) -> Vec<Vec<K>> {
    let top = MultiVector::monomial(6, &u.to_vec(), one.clone());
    let mut rows = vec![top.coords.clone()];
    for i in 0..3 {
        for j in 0..3 {
            // ε_j: vol₃-dual of e_{u_j} inside ∧²U: ε_0 = e_{u1}∧e_{u2},
            // ε_1 = e_{u2}∧e_{u0}, ε_2 = e_{u0}∧e_{u1}.
            let (a, b) = match j {
                0 => (u[1], u[2]),
                1 => (u[2], u[0]),
                _ => (u[0], u[1]),
            };
            let ea = MultiVector::monomial(6, &[a], one.clone());
            let eb = MultiVector::monomial(6, &[b], one.clone());
            let ew = MultiVector::monomial(6, &[w[i]], one.clone());
            let m = ea.wedge(&eb).unwrap().wedge(&ew).unwrap();
            rows.push(m.coords);
        }
    }
    rows
}

/// The symmetric 10×10 Gram matrix (coordinates m₀, m_{ij}) of the chart
/// quadric whose graph is T_{U_B}, for U_B the graph of B: U₀ → U∞:
///
///   Q_U(m₀, M) = Σ b_{ij}·M^{ij} + m₀·Σ B^{ij}·m_{ij} + m₀²·det B,
///
/// with M^{ij}, B^{ij} the adjugate entries.
pub fn chart_quadric<K: Field>(b: &Matrix<K>) -> Matrix<K> {
    assert!(b.nrows() == 3 && b.ncols() == 3);
    let mut gram: Matrix<K> = Matrix::zero(10, 10);
    let midx = |i: usize, j: usize| 1 + 3 * i + j;
    // m₀² · det B
    gram[(0, 0)] = b.det().unwrap();
    // m₀ · Σ B^{ij} m_{ij}, with B^{ij} the (i,j) cofactor of B.
    let cof_b = b.adjugate().unwrap().transpose();
    let half = two_inverse(b);
    for i in 0..3 {
        for j in 0..3 {
            let h = cof_b[(i, j)].clone() * half.clone();
            gram[(0, midx(i, j))] = gram[(0, midx(i, j))].clone() + h.clone();
            gram[(midx(i, j), 0)] = gram[(midx(i, j), 0)].clone() + h;
        }
    }
    // Σ b_{ij} · M^{ij} with M^{ij} the (i,j) cofactor of the coordinate
    // matrix M — a bilinear expression in the m-coordinates.
    for i in 0..3 {
        for j in 0..3 {
            if b[(i, j)].is_zero() {
                continue;
            }
            let rows: Vec<usize> = (0..3).filter(|&r| r != i).collect();
            let cols: Vec<usize> = (0..3).filter(|&c| c != j).collect();
            let sign_pos = (i + j) % 2 == 0;
            // minor = m[r0,c0]m[r1,c1] − m[r0,c1]m[r1,c0]
            let terms = [
                ((rows[0], cols[0]), (rows[1], cols[1]), true),
                ((rows[0], cols[1]), (rows[1], cols[0]), false),
            ];
            for ((r0, c0), (r1, c1), plus) in terms {
                let coeff = b[(i, j)].clone() * half.clone();
                let coeff = if plus == sign_pos { coeff } else { -coeff };
                let x = midx(r0, c0);
                let y = midx(r1, c1);
                gram[(x, y)] = gram[(x, y)].clone() + coeff.clone();
                gram[(y, x)] = gram[(y, x)].clone() + coeff;
            }
        }
    }
    gram
}

fn one_like<K: Field>(sample: &Matrix<K>) -> K {
    sample[(0, 0)].embed_i64(1)
}

fn two_inverse<K: Field>(sample: &Matrix<K>) -> K {
    let one = one_like(sample);
    (one.clone() + one).inv().expect("characteristic ≠ 2")
}

/// The rank-1 corner map f = E₀₀ whose graph is the distinguished space U₁
/// of the cone chart.
pub fn corner_map<K: Field>(one: &K) -> Matrix<K> {
    let mut f: Matrix<K> = Matrix::zero(3, 3);
    f[(0, 0)] = one.clone();
    f
}

/// The 9×9 chart quadric Q̄_U(M) = Σ b_{ij} M^{ij} on the quotient by ∧³U₁,
/// defined for chart points on the cone C_{U₁}: rank(B − f) ≤ 1.
pub fn chart_quadric_bar<K: Field>(b: &Matrix<K>) -> Result<Matrix<K>, LagrangianError> {
    assert!(b.nrows() == 3 && b.ncols() == 3);
    let one = one_like(b);
    let f = corner_map(&one);
    if b.sub(&f).unwrap().rank() > 1 {
        return Err(LagrangianError::NotOnCone);
    }
    let full = chart_quadric(b);
    let mut gram = Matrix::zero(9, 9);
    for i in 0..9 {
        for j in 0..9 {
            gram[(i, j)] = full[(1 + i, 1 + j)].clone();
        }
    }
    Ok(gram)
}

/// Ā_{Q′}: the graph of a symmetric 9×9 map q′: L₂ → L₁ over the coordinate
/// Lagrangian splitting of an 18-dim frame, with bases given by rows.
pub fn lagrangian_from_quadric<K: Field>(
    qprime: &Matrix<K>,
    l2: &Matrix<K>,
    l1: &Matrix<K>,
    frame: &SymplecticFrame<K>,
) -> Result<Lagrangian<K>, LagrangianError> {
    let q = SymmetricMap::new(qprime.clone())?;
    graph_lagrangian(&q, l2, l1, frame)
}

/// A random graph Lagrangian over a splitting (used by sampling scans).
pub fn random_graph_lagrangian<K: Field>(
    rng: &mut crate::rng::Rng,
    sample: &K,
    l1: &Matrix<K>,
    l2: &Matrix<K>,
    frame: &SymplecticFrame<K>,
    bound: u64,
) -> Lagrangian<K> {
    let n = l1.nrows();
    let mut q: Matrix<K> = Matrix::zero(n, n);
    for i in 0..n {
        for j in i..n {
            let v = sample.embed_i64(rng.below(bound) as i64);
            q[(i, j)] = v.clone();
            q[(j, i)] = v;
        }
    }
    let q = SymmetricMap::new(q).unwrap();
    graph_lagrangian(&q, l1, l2, frame).expect("graph of symmetric map is Lagrangian")
}

/// Degree-3 wedge monomial masks (handy for chart tests).
pub fn three_form_masks() -> Vec<u32> {
    subsets(6, 3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::tangent_space;
    use crate::field::{Fp, Rational};
    use crate::linalg::Subspace;
    use crate::rng::Rng;
    use num_traits::Zero;

    fn graph_subspace_of_b<K: Field>(b: &Matrix<K>, one: &K) -> Subspace<K> {
        // U_B = span{e_j + Σ_i b[i][j]·e_{3+i}}
        let mut rows = Vec::new();
        for j in 0..3 {
            let mut v = vec![K::zero(); 6];
            v[j] = one.clone();
            for i in 0..3 {
                v[3 + i] = b[(i, j)].clone();
            }
            rows.push(v);
        }
        Subspace::from_rows(6, rows)
    }

    #[test]
    fn chart_master_rational() {
        let one = Rational::from_int(1);
        let chart = ChartFrame::new(one.clone());
        let mut rng = Rng::seeded(101);
        for trial in 0..20 {
            let b = Matrix::from_rows(
                (0..3)
                    .map(|_| {
                        (0..3)
                            .map(|_| Rational::from_int(rng.below(9) as i64 - 4))
                            .collect()
                    })
                    .collect(),
            );
            let u = graph_subspace_of_b(&b, &one);
            let t = tangent_space(&u).unwrap();
            let s = chart_quadric(&b);
            assert!(s.is_symmetric());
            let g = chart.graph_of_chart(&s).unwrap();
            assert_eq!(
                g.space(),
                &t,
                "trial {trial}: graph(chart_quadric(B)) = T_(graph B) for B:\n{b}"
            );
            // and the inverse chart read-back returns the formula matrix
            assert_eq!(chart.chart_form_of(&t).unwrap(), s);
        }
    }

    #[test]
    fn chart_quadric_special_cases() {
        let one = Rational::from_int(1);
        let chart = ChartFrame::new(one.clone());
        // B = 0 → zero quadric → T_{U₀} itself
        let b0: Matrix<Rational> = Matrix::zero(3, 3);
        let s0 = chart_quadric(&b0);
        assert!(s0.rows_vec().iter().flatten().all(|c| c.is_zero()));
        let g0 = chart.graph_of_chart(&s0).unwrap();
        let t0 = Subspace::from_rows(20, chart.t_basis.rows_vec());
        assert_eq!(g0.space(), &t0);
        // rank-1 B with single corner entry: Q = b₀₀·M^{00} only, i.e. the
        // polarization of b₀₀(m₁₁m₂₂ − m₁₂m₂₁).
        let mut b = Matrix::zero(3, 3);
        b[(0, 0)] = Rational::from_int(5);
        let s = chart_quadric(&b);
        let mut expected = Matrix::zero(10, 10);
        let midx = |i: usize, j: usize| 1 + 3 * i + j;
        let h = Rational::from_frac(5, 2);
        expected[(midx(1, 1), midx(2, 2))] = h.clone();
        expected[(midx(2, 2), midx(1, 1))] = h.clone();
        expected[(midx(1, 2), midx(2, 1))] = -h.clone();
        expected[(midx(2, 1), midx(1, 2))] = -h;
        assert_eq!(s, expected);
    }

    #[test]
    fn chart_master_fp() {
        let p = 101;
        let one = Fp::new(1, p);
        let chart = ChartFrame::new(one);
        let mut rng = Rng::seeded(7);
        for _ in 0..50 {
            let b = Matrix::from_rows(
                (0..3)
                    .map(|_| (0..3).map(|_| Fp::new(rng.below(p) as i64, p)).collect())
                    .collect(),
            );
            let u = graph_subspace_of_b(&b, &one);
            let t = tangent_space(&u).unwrap();
            let s = chart_quadric(&b);
            let g = chart.graph_of_chart(&s).unwrap();
            assert_eq!(g.space(), &t);
        }
    }

    #[test]
    fn graph_and_degeneracy_basics() {
        let p = 101;
        let one = Fp::new(1, p);
        let chart = ChartFrame::new(one);
        let mut rng = Rng::seeded(3);
        // q = 0 → L₁ itself; q = I → transverse to both halves.
        let z = SymmetricMap::new(Matrix::<Fp>::zero(10, 10)).unwrap();
        let l1 = chart.graph(&z).unwrap();
        assert_eq!(
            l1.space(),
            &Subspace::from_rows(20, chart.t_basis.rows_vec())
        );
        let id = SymmetricMap::new(Matrix::<Fp>::identity(10)).unwrap();
        let gid = chart.graph(&id).unwrap();
        let l2 = Subspace::from_rows(20, chart.dual_basis.rows_vec());
        assert_eq!(subspace_meet_dim(gid.space(), l1.space()), 0);
        assert_eq!(subspace_meet_dim(gid.space(), &l2), 0);
        // degeneracy_rank(A, A) = 10; symmetric; generic pairs meet in 0
        // (a random pair degenerates with probability ~1/p).
        assert_eq!(degeneracy_rank(&gid, &gid), 10);
        let mut zeros = 0;
        for _ in 0..10 {
            let a = random_graph_lagrangian(
                &mut rng,
                &Fp::new(1, p),
                &chart.t_basis,
                &chart.dual_basis,
                &chart.frame,
                p,
            );
            let b = random_graph_lagrangian(
                &mut rng,
                &Fp::new(1, p),
                &chart.t_basis,
                &chart.dual_basis,
                &chart.frame,
                p,
            );
            assert_eq!(degeneracy_rank(&a, &b), degeneracy_rank(&b, &a));
            if degeneracy_rank(&a, &b) == 0 {
                zeros += 1;
            }
        }
        assert!(zeros >= 8, "generic value 0 must dominate, saw {zeros}/10");
    }

    #[test]
    fn graph_form_roundtrip() {
        let p = 101;
        let one = Fp::new(1, p);
        let chart = ChartFrame::new(one);
        let mut rng = Rng::seeded(11);
        for _ in 0..10 {
            let mut q: Matrix<Fp> = Matrix::zero(10, 10);
            for i in 0..10 {
                for j in i..10 {
                    let v = Fp::new(rng.below(p) as i64, p);
                    q[(i, j)] = v;
                    q[(j, i)] = v;
                }
            }
            let g = chart.graph(&SymmetricMap::new(q.clone()).unwrap()).unwrap();
            let q2 = chart.form_of(g.space()).unwrap();
            assert_eq!(q, q2);
        }
    }

    #[test]
    fn nonsymmetric_rejected() {
        let mut m: Matrix<Fp> = Matrix::zero(2, 2);
        m[(0, 1)] = Fp::new(1, 7);
        assert_eq!(SymmetricMap::new(m).err(), Some(LagrangianError::NotSymmetric));
    }
}
