//! Integral lattice arithmetic: Beauville–Bogomolov and Fujiki numerics,
//! Riemann–Roch section counts, bounded change-of-basis certificates, and
//! the Noether-consistent surface invariants of the fixed-locus surfaces.

use std::fmt;

use crate::linalg::Matrix;
use crate::field::Rational;

/// An integral lattice given by its Gram matrix.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IntLattice {
    pub name: String,
    pub gram: Vec<Vec<i64>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum LatticeError {
    NotSymmetric,
    RankTooLarge,
    DimensionMismatch,
}

impl fmt::Display for LatticeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeError::NotSymmetric => write!(f, "Gram matrix must be symmetric"),
            LatticeError::RankTooLarge => write!(f, "bounded search implemented for rank ≤ 3"),
            LatticeError::DimensionMismatch => write!(f, "vector length does not match the rank"),
        }
    }
}

impl std::error::Error for LatticeError {}

impl IntLattice {
    pub fn new(name: &str, gram: Vec<Vec<i64>>) -> Result<Self, LatticeError> {
        let n = gram.len();
        if gram.iter().any(|r| r.len() != n) {
            return Err(LatticeError::NotSymmetric);
        }
        for i in 0..n {
            for j in 0..n {
                if gram[i][j] != gram[j][i] {
                    return Err(LatticeError::NotSymmetric);
                }
            }
        }
        Ok(IntLattice {
            name: name.to_string(),
            gram,
        })
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    /// The hyperbolic plane U scaled by m: [[0, m], [m, 0]].
    pub fn u_scaled(m: i64) -> Self {
        IntLattice::new(&format!("U({m})"), vec![vec![0, m], vec![m, 0]]).unwrap()
    }

    pub fn diagonal(name: &str, entries: &[i64]) -> Self {
        let n = entries.len();
        let mut g = vec![vec![0i64; n]; n];
        for (i, &e) in entries.iter().enumerate() {
            g[i][i] = e;
        }
        IntLattice::new(name, g).unwrap()
    }

    /// E₈(−1): the negative-definite E₈ Gram matrix.
    pub fn e8_minus() -> Self {
        // Dynkin-diagram Gram with −2 on the diagonal
        let mut g = vec![vec![0i64; 8]; 8];
        for i in 0..8 {
            g[i][i] = -2;
        }
        let edges = [(0, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 7)];
        for (a, b) in edges {
            g[a][b] = 1;
            g[b][a] = 1;
        }
        IntLattice::new("E8(-1)", g).unwrap()
    }

    pub fn det(&self) -> i64 {
        let m = Matrix::from_rows(
            self.gram
                .iter()
                .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
                .collect(),
        );
        let d = m.det().unwrap();
        assert!(d.denom() == &num_bigint::BigInt::from(1));
        let s: String = d.numer().to_string();
        s.parse().expect("determinant fits in i64")
    }

    /// vᵀGv.
    pub fn bb_square(&self, v: &[i64]) -> Result<i64, LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch);
        }
        let gv = self.apply(v);
        Ok(v.iter().zip(gv.iter()).map(|(a, b)| a * b).sum())
    }

    fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.gram
            .iter()
            .map(|row| row.iter().zip(v.iter()).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// div(v) = gcd of the pairing values ⟨v, L⟩ = gcd of the entries of Gv.
    pub fn divisibility(&self, v: &[i64]) -> Result<i64, LatticeError> {
        if v.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch);
        }
        let gv = self.apply(v);
        Ok(gv.into_iter().fold(0i64, |a, b| gcd(a, b.abs())))
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Fujiki relation on a K3^[2]-type fourfold: H⁴ = 3·q(H)².
pub fn fujiki_degree(q: i64) -> i64 {
    3 * q * q
}

/// Riemann–Roch section count h⁰(O(H)) = binom(q/2 + 3, 2) for q(H) = q
/// even and nonnegative (pinned by the anchors q = 4 ↦ 10, q = 2 ↦ 6).
pub fn rr_sections(q: i64) -> i64 {
    assert!(q >= 0 && q % 2 == 0);
    let m = q / 2 + 3;
    m * (m - 1) / 2
}

/// A change-of-basis certificate: P with integer entries, det ±1 and
/// Pᵀ·G₁·P = G₂.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BasisChange {
    pub p: Vec<Vec<i64>>,
    pub det: i64,
}

/// Bounded exhaustive search for an integral equivalence between two rank-≤3
/// Gram matrices; `None` means the bounded search failed (inconclusive).
pub fn is_equivalent(
    g1: &IntLattice,
    g2: &IntLattice,
    bound: i64,
) -> Result<Option<BasisChange>, LatticeError> {
    let n = g1.rank();
    if n != g2.rank() {
        return Err(LatticeError::DimensionMismatch);
    }
    if n > 3 {
        return Err(LatticeError::RankTooLarge);
    }
    assert!(bound <= 6, "search bound capped at 6");
    // candidate columns: vectors with the required norms
    let mut columns: Vec<Vec<Vec<i64>>> = Vec::with_capacity(n);
    for j in 0..n {
        let want = g2.gram[j][j];
        let mut cands = Vec::new();
        let mut v = vec![-bound; n];
        loop {
            if g1.bb_square(&v)? == want {
                cands.push(v.clone());
            }
            // odometer
            let mut i = 0;
            loop {
                if i == n {
                    break;
                }
                v[i] += 1;
                if v[i] <= bound {
                    break;
                }
                v[i] = -bound;
                i += 1;
            }
            if i == n {
                break;
            }
        }
        if cands.is_empty() {
            return Ok(None);
        }
        columns.push(cands);
    }
    // assemble columns with pairwise pairings matching G₂
    let pair = |a: &[i64], b: &[i64]| -> i64 {
        let ga = g1.apply(a);
        ga.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
    };
    let check_det = |cols: &[&Vec<i64>]| -> Option<i64> {
        let m: Vec<Vec<i64>> = (0..n)
            .map(|i| (0..n).map(|j| cols[j][i]).collect())
            .collect();
        let d = match n {
            1 => m[0][0],
            2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
            3 => {
                m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
                    - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                    + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
            }
            _ => unreachable!(),
        };
        if d == 1 || d == -1 {
            Some(d)
        } else {
            None
        }
    };
    for c0 in &columns[0] {
        if n == 1 {
            if let Some(d) = check_det(&[c0]) {
                return Ok(Some(verify_certificate(g1, g2, &[c0.clone()], d)));
            }
            continue;
        }
        for c1 in &columns[1] {
            if pair(c0, c1) != g2.gram[0][1] {
                continue;
            }
            if n == 2 {
                if let Some(d) = check_det(&[c0, c1]) {
                    return Ok(Some(verify_certificate(
                        g1,
                        g2,
                        &[c0.clone(), c1.clone()],
                        d,
                    )));
                }
                continue;
            }
            for c2 in &columns[2] {
                if pair(c0, c2) != g2.gram[0][2] || pair(c1, c2) != g2.gram[1][2] {
                    continue;
                }
                if let Some(d) = check_det(&[c0, c1, c2]) {
                    return Ok(Some(verify_certificate(
                        g1,
                        g2,
                        &[c0.clone(), c1.clone(), c2.clone()],
                        d,
                    )));
                }
            }
        }
    }
    Ok(None)
}

/// Re-verify Pᵀ·G₁·P = G₂ by exact multiplication before returning.
fn verify_certificate(g1: &IntLattice, g2: &IntLattice, cols: &[Vec<i64>], det: i64) -> BasisChange {
    let n = g1.rank();
    let p: Vec<Vec<i64>> = (0..n)
        .map(|i| (0..n).map(|j| cols[j][i]).collect())
        .collect();
    for a in 0..n {
        for b in 0..n {
            let mut acc = 0i64;
            for i in 0..n {
                for j in 0..n {
                    acc += p[i][a] * g1.gram[i][j] * p[j][b];
                }
            }
            assert_eq!(acc, g2.gram[a][b], "certificate must verify exactly");
        }
    }
    BasisChange { p, det }
}

/// Numerical invariants of the fixed-locus surfaces: the Fano surface of
/// conics on the Verra threefold (F) and its étale quotient (F₀).
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct SurfaceInvariants {
    pub k2: i64,
    pub c2: i64,
    pub pg: i64,
    pub q: i64,
    pub chi: i64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SurfaceKind {
    FanoSurface,
    Quotient,
}

pub fn surface_invariants(kind: SurfaceKind) -> SurfaceInvariants {
    let inv = match kind {
        SurfaceKind::FanoSurface => SurfaceInvariants {
            k2: 576,
            c2: 312,
            pg: 82,
            q: 9,
            chi: 74,
        },
        SurfaceKind::Quotient => SurfaceInvariants {
            k2: 288,
            c2: 156,
            pg: 36,
            q: 0,
            chi: 37,
        },
    };
    // Noether and chi-consistency are structural
    assert_eq!(12 * inv.chi, inv.k2 + inv.c2);
    assert_eq!(inv.chi, inv.pg - inv.q + 1);
    inv
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fujiki_values() {
        assert_eq!(fujiki_degree(4), 48);
        assert_eq!(fujiki_degree(2), 12);
        assert_eq!(fujiki_degree(6), 108);
    }

    #[test]
    fn riemann_roch_counts() {
        assert_eq!(rr_sections(4), 10);
        assert_eq!(rr_sections(2), 6);
        assert_eq!(rr_sections(0), 3);
    }

    #[test]
    fn u2_lattice_arithmetic() {
        let u2 = IntLattice::u_scaled(2);
        assert_eq!(u2.bb_square(&[1, 1]).unwrap(), 4);
        assert_eq!(u2.bb_square(&[1, 0]).unwrap(), 0);
        assert_eq!(u2.bb_square(&[0, 1]).unwrap(), 0);
        assert_eq!(u2.divisibility(&[1, 0]).unwrap(), 2);
        assert_eq!(
            u2.bb_square(&[1]).unwrap_err(),
            LatticeError::DimensionMismatch
        );
    }

    #[test]
    fn equivalence_certificates() {
        let g1 = IntLattice::diagonal("diag(10,-2,-2)", &[10, -2, -2]);
        let g2 = IntLattice::new(
            "U(2)+<-10>",
            vec![vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, -10]],
        )
        .unwrap();
        let cert = is_equivalent(&g1, &g2, 6).unwrap().expect("certificate");
        assert!(cert.det == 1 || cert.det == -1);

        let g3 = IntLattice::new(
            "S[2] lattice",
            vec![vec![2, 4, 0], vec![4, 2, 0], vec![0, 0, -2]],
        )
        .unwrap();
        let g4 = IntLattice::new(
            "U(2)+<-6>",
            vec![vec![0, 2, 0], vec![2, 0, 0], vec![0, 0, -6]],
        )
        .unwrap();
        let cert = is_equivalent(&g3, &g4, 6).unwrap().expect("certificate");
        assert!(cert.det == 1 || cert.det == -1);

        // identity case
        let cert = is_equivalent(&g1, &g1, 1).unwrap().expect("identity works");
        assert!(cert.det == 1 || cert.det == -1);

        // determinant obstruction: no certificate
        let bad = IntLattice::diagonal("bad", &[10, -2, -4]);
        assert!(is_equivalent(&g1, &bad, 2).unwrap().is_none());
    }

    #[test]
    fn surface_invariant_records() {
        let f = surface_invariants(SurfaceKind::FanoSurface);
        let f0 = surface_invariants(SurfaceKind::Quotient);
        assert_eq!((f0.k2 + f0.c2) / 12, 37);
        assert_eq!(f0.chi, 37);
        assert_eq!((f.k2 + f.c2) / 12, 74);
        assert_eq!(f.chi, 74);
        // étale double cover doubles K², c₂ and χ
        assert_eq!(f.k2, 2 * f0.k2);
        assert_eq!(f.c2, 2 * f0.c2);
        assert_eq!(f.chi, 2 * f0.chi);
    }

    #[test]
    fn e8_negative_definite() {
        let e8 = IntLattice::e8_minus();
        // leading principal minors alternate in sign: (−1)^k·minor_k > 0
        for k in 1..=8 {
            let sub: Vec<Vec<i64>> = (0..k)
                .map(|i| (0..k).map(|j| e8.gram[i][j]).collect())
                .collect();
            let m = Matrix::from_rows(
                sub.iter()
                    .map(|r| r.iter().map(|&v| Rational::from_int(v)).collect())
                    .collect(),
            );
            let d = m.det().unwrap();
            let num = d.numer().clone();
            let positive = num > num_bigint::BigInt::from(0);
            assert_eq!(positive, k % 2 == 0, "principal minor {k}");
        }
        assert_eq!(e8.det(), 1);
    }
}
