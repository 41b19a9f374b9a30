//! Exact multivariate polynomial helpers: dense homogeneous forms in few
//! variables, binary forms with gcd and perfect-square detection, and
//! order-2 jets for gradient/Hessian extraction at a point.

use crate::field::{Field, FiniteField};
use crate::linalg::Matrix;

/// Exponent vectors of the homogeneous monomials of degree `d` in `n`
/// variables, in lexicographic order (first variable's exponent descending).
pub fn monomials(n: usize, d: usize) -> Vec<Vec<u8>> {
    fn rec(out: &mut Vec<Vec<u8>>, cur: &mut Vec<u8>, left: usize, pos: usize, n: usize) {
        if pos == n - 1 {
            cur.push(left as u8);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e as u8);
            rec(out, cur, left - e, pos + 1, n);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    let mut cur = Vec::new();
    rec(&mut out, &mut cur, d, 0, n);
    out
}

pub fn monomial_count(n: usize, d: usize) -> usize {
    crate::exterior::binomial(n + d - 1, d)
}

pub fn monomial_index(n: usize, d: usize, expo: &[u8]) -> usize {
    monomials(n, d)
        .iter()
        .position(|m| m.as_slice() == expo)
        .expect("exponent vector of the right degree")
}

/// A homogeneous form of fixed degree in a fixed number of variables, with
/// dense coefficients in the [`monomials`] order.
#[derive(Clone, PartialEq, Debug)]
pub struct DenseForm<K> {
    pub nvars: usize,
    pub degree: usize,
    pub coeffs: Vec<K>,
}

impl<K: Field> DenseForm<K> {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        DenseForm {
            nvars,
            degree,
            coeffs: vec![K::zero(); monomial_count(nvars, degree)],
        }
    }

    pub fn from_coeffs(nvars: usize, degree: usize, coeffs: Vec<K>) -> Self {
        assert_eq!(coeffs.len(), monomial_count(nvars, degree));
        DenseForm {
            nvars,
            degree,
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, point: &[K]) -> K {
        assert_eq!(point.len(), self.nvars);
        let mons = monomials(self.nvars, self.degree);
        let mut acc = K::zero();
        for (c, m) in self.coeffs.iter().zip(mons.iter()) {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for (x, &e) in point.iter().zip(m.iter()) {
                for _ in 0..e {
                    term = term * x.clone();
                }
            }
            acc = acc + term;
        }
        acc
    }

    /// Formal partial derivatives (degree drops by one).
    pub fn gradient(&self) -> Vec<DenseForm<K>> {
        let mons = monomials(self.nvars, self.degree);
        let down = monomials(self.nvars, self.degree - 1);
        let down_idx = |expo: &[u8]| down.iter().position(|m| m.as_slice() == expo).unwrap();
        (0..self.nvars)
            .map(|v| {
                let mut g: DenseForm<K> = DenseForm::zero(self.nvars, self.degree - 1);
                for (c, m) in self.coeffs.iter().zip(mons.iter()) {
                    if c.is_zero() || m[v] == 0 {
                        continue;
                    }
                    let mut e = m.clone();
                    e[v] -= 1;
                    let idx = down_idx(&e);
                    let mut term = c.clone();
                    let mult = m[v] as i64;
                    term = term * c.embed_i64(mult);
                    g.coeffs[idx] = g.coeffs[idx].clone() + term;
                }
                g
            })
            .collect()
    }

    pub fn gradient_at(&self, point: &[K]) -> Vec<K> {
        self.gradient().iter().map(|g| g.eval(point)).collect()
    }

    pub fn scale(&self, s: &K) -> Self {
        DenseForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.nvars == other.nvars && self.degree == other.degree);
        DenseForm {
            nvars: self.nvars,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    /// The scalar c with `other = c·self`, if the forms are proportional.
    pub fn proportionality(&self, other: &Self) -> Option<K> {
        if self.nvars != other.nvars || self.degree != other.degree {
            return None;
        }
        let pivot = self.coeffs.iter().position(|c| !c.is_zero())?;
        let c = other.coeffs[pivot].clone() * self.coeffs[pivot].inv()?;
        for (a, b) in self.coeffs.iter().zip(&other.coeffs) {
            if a.clone() * c.clone() != b.clone() {
                return None;
            }
        }
        Some(c)
    }

    /// Normalize so the first nonzero coefficient is 1.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(c) => self.scale(&c.inv().unwrap()),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let ma = monomials(self.nvars, self.degree);
        let mb = monomials(self.nvars, other.degree);
        let mc = monomials(self.nvars, self.degree + other.degree);
        let mut out: DenseForm<K> = DenseForm::zero(self.nvars, self.degree + other.degree);
        for (ca, ea) in self.coeffs.iter().zip(ma.iter()) {
            if ca.is_zero() {
                continue;
            }
            for (cb, eb) in other.coeffs.iter().zip(mb.iter()) {
                if cb.is_zero() {
                    continue;
                }
                let e: Vec<u8> = ea.iter().zip(eb.iter()).map(|(x, y)| x + y).collect();
                let idx = mc.iter().position(|m| *m == e).unwrap();
                out.coeffs[idx] = out.coeffs[idx].clone() + ca.clone() * cb.clone();
            }
        }
        out
    }

    /// Substitute x_i ← Σ_j m[i][j]·x_j (pullback along a linear map).
    pub fn pullback_linear(&self, m: &Matrix<K>) -> Self {
        assert!(m.nrows() == self.nvars && m.ncols() == self.nvars);
        let mons = monomials(self.nvars, self.degree);
        let mut out: DenseForm<K> = DenseForm::zero(self.nvars, self.degree);
        for (c, e) in self.coeffs.iter().zip(mons.iter()) {
            if c.is_zero() {
                continue;
            }
            // product of the substituted linear forms
            let mut term = DenseForm::from_coeffs(self.nvars, 0, vec![c.clone()]);
            for (i, &exp) in e.iter().enumerate() {
                for _ in 0..exp {
                    let lin = DenseForm::from_coeffs(self.nvars, 1, m.row(i).to_vec());
                    term = term.mul(&lin);
                }
            }
            out = DenseForm {
                nvars: out.nvars,
                degree: out.degree,
                coeffs: out
                    .coeffs
                    .iter()
                    .zip(&term.coeffs)
                    .map(|(a, b)| a.clone() + b.clone())
                    .collect(),
            };
        }
        out
    }
}

// ---------------------------------------------------------------------------
// Binary forms
// ---------------------------------------------------------------------------

/// A binary form of degree d: coeffs[i] is the coefficient of s^{d−i}·t^i.
#[derive(Clone, PartialEq, Debug)]
pub struct BinaryForm<K> {
    pub coeffs: Vec<K>,
}

impl<K: Field> BinaryForm<K> {
    pub fn new(coeffs: Vec<K>) -> Self {
        assert!(!coeffs.is_empty());
        BinaryForm { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, s: &K, t: &K) -> K {
        let d = self.degree();
        let mut acc = K::zero();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut term = c.clone();
            for _ in 0..(d - i) {
                term = term * s.clone();
            }
            for _ in 0..i {
                term = term * t.clone();
            }
            acc = acc + term;
        }
        acc
    }

    pub fn derivative_s(&self) -> BinaryForm<K> {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::new(vec![K::zero()]);
        }
        let mut coeffs = Vec::with_capacity(d);
        for i in 0..d {
            let mult = (d - i) as i64;
            let c = self.coeffs[i].clone();
            let f = if c.is_zero() {
                K::zero()
            } else {
                c.clone() * c.embed_i64(mult)
            };
            coeffs.push(f);
        }
        BinaryForm::new(coeffs)
    }

    pub fn derivative_t(&self) -> BinaryForm<K> {
        let d = self.degree();
        if d == 0 {
            return BinaryForm::new(vec![K::zero()]);
        }
        let mut coeffs = Vec::with_capacity(d);
        for i in 1..=d {
            let mult = i as i64;
            let c = self.coeffs[i].clone();
            let f = if c.is_zero() {
                K::zero()
            } else {
                c.clone() * c.embed_i64(mult)
            };
            coeffs.push(f);
        }
        BinaryForm::new(coeffs)
    }

    /// Split off the t-power: q = t^k·r with r(s, 0) ≠ 0 … here the power of
    /// t dividing q is the number of leading zero coefficients.
    fn t_valuation(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(self.coeffs.len())
    }

    /// Dehomogenize at t = 1: univariate in s, lowest-degree-first.
    fn univariate(&self) -> Vec<K> {
        // coefficient of s^j is coeffs[d - j]
        let d = self.degree();
        (0..=d).map(|j| self.coeffs[d - j].clone()).collect()
    }

    fn from_univariate(poly: &[K], degree: usize) -> BinaryForm<K> {
        // homogenize back to the given degree
        let mut coeffs = vec![K::zero(); degree + 1];
        for (j, c) in poly.iter().enumerate() {
            coeffs[degree - j] = c.clone();
        }
        BinaryForm::new(coeffs)
    }

    /// Monic gcd as a binary form (includes shared s- and t-powers).
    pub fn gcd(&self, other: &Self) -> BinaryForm<K> {
        if self.is_zero() {
            return other.monic();
        }
        if other.is_zero() {
            return self.monic();
        }
        // Dehomogenizing at t = 1 keeps shared s-powers in the univariate
        // gcd; only the shared t-power must be reattached.
        let tv = self.t_valuation().min(other.t_valuation());
        let a = self.univariate();
        let b = other.univariate();
        let g = univariate_gcd(&a, &b);
        let gdeg = g.len() - 1;
        let out = BinaryForm::from_univariate(&g, gdeg);
        let mut coeffs = vec![K::zero(); gdeg + tv + 1];
        for (i, c) in out.coeffs.iter().enumerate() {
            coeffs[i + tv] = c.clone();
        }
        BinaryForm::new(coeffs).monic()
    }

    pub fn monic(&self) -> BinaryForm<K> {
        match self.coeffs.iter().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(c) => {
                let inv = c.inv().unwrap();
                BinaryForm::new(self.coeffs.iter().map(|x| x.clone() * inv.clone()).collect())
            }
        }
    }

    pub fn mul(&self, other: &Self) -> BinaryForm<K> {
        let mut coeffs = vec![K::zero(); self.degree() + other.degree() + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        BinaryForm::new(coeffs)
    }

    /// q squarefree ⟺ gcd(q, ∂q/∂s, ∂q/∂t) is constant (char > deg q).
    pub fn is_squarefree(&self) -> bool {
        let g = self.gcd(&self.derivative_s()).gcd(&self.derivative_t());
        g.degree() == 0 || g.t_valuation() == g.coeffs.len()
    }

    /// Is this binary quartic a square over the algebraic closure?  For a
    /// rational quartic that is equivalent to being a scalar multiple of the
    /// square of a rational quadratic.  Multiplicity patterns: (2,2) gives
    /// gcd(∂s, ∂t) of degree 2 equal to the root; (4) gives a degree-3 gcd
    /// whose radical is the fourfold line.  Requires char > 4.
    pub fn is_perfect_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        assert_eq!(self.degree(), 4, "perfect-square test is for quartics");
        let h = self.derivative_s().gcd(&self.derivative_t());
        match h.degree() {
            2 => h.mul(&h).monic() == self.monic(),
            3 => {
                let common = self.gcd(&h);
                let Some(line) = binary_divide(self, &common) else {
                    return false;
                };
                if line.degree() != 1 {
                    return false;
                }
                let sq = line.mul(&line);
                sq.mul(&sq).monic() == self.monic()
            }
            _ => false,
        }
    }

    /// All projective roots (s:t) over the field, by scanning (x:1) and (1:0).
    pub fn roots(&self) -> Vec<(K, K)>
    where
        K: FiniteField,
    {
        let ctx = self
            .coeffs
            .iter()
            .find(|c| !c.is_zero())
            .expect("nonzero form");
        let one = ctx.embed_i64(1);
        let mut out = Vec::new();
        for x in ctx.all_elements() {
            if self.eval(&x, &one).is_zero() {
                out.push((x, one.clone()));
            }
        }
        if self.coeffs[0].is_zero() {
            out.push((one.clone(), K::zero()));
        }
        out
    }
}

fn univariate_degree<K: Field>(p: &[K]) -> Option<usize> {
    (0..p.len()).rev().find(|&i| !p[i].is_zero())
}

fn univariate_rem<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let db = univariate_degree(b).expect("nonzero divisor");
    let lead = b[db].inv().unwrap();
    let mut r = a.to_vec();
    loop {
        let Some(dr) = univariate_degree(&r) else {
            return vec![K::zero()];
        };
        if dr < db {
            return r;
        }
        let f = r[dr].clone() * lead.clone();
        for i in 0..=db {
            let t = f.clone() * b[i].clone();
            r[i + dr - db] = r[i + dr - db].clone() - t;
        }
    }
}

fn univariate_gcd<K: Field>(a: &[K], b: &[K]) -> Vec<K> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    loop {
        let Some(dy) = univariate_degree(&y) else {
            // normalize monic
            let dx = univariate_degree(&x).unwrap_or(0);
            let inv = x[dx].inv().unwrap_or_else(|| x[dx].embed_i64(1));
            return x[..=dx].iter().map(|c| c.clone() * inv.clone()).collect();
        };
        let _ = dy;
        let r = univariate_rem(&x, &y);
        x = y;
        y = r;
    }
}

/// Exact division of binary forms; `None` if it does not divide.
pub fn binary_divide<K: Field>(num: &BinaryForm<K>, den: &BinaryForm<K>) -> Option<BinaryForm<K>> {
    if den.is_zero() {
        return None;
    }
    if num.is_zero() {
        return Some(BinaryForm::new(vec![K::zero()]));
    }
    let tv_n = num.t_valuation();
    let tv_d = den.t_valuation();
    if tv_d > tv_n {
        return None;
    }
    let a = num.univariate();
    let b = den.univariate();
    // divide a by b as univariate polynomials
    let da = univariate_degree(&a)?;
    let db = univariate_degree(&b)?;
    if db > da {
        return None;
    }
    let lead = b[db].inv()?;
    let mut r = a.clone();
    let mut q = vec![K::zero(); da - db + 1];
    for k in (0..=(da - db)).rev() {
        let Some(dr) = univariate_degree(&r) else {
            break;
        };
        if dr < db + k {
            continue;
        }
        let f = r[db + k].clone() * lead.clone();
        q[k] = f.clone();
        for i in 0..=db {
            let t = f.clone() * b[i].clone();
            r[i + k] = r[i + k].clone() - t;
        }
    }
    if univariate_degree(&r).is_some() {
        return None;
    }
    let target_degree = num.degree() - den.degree();
    if univariate_degree(&q).unwrap_or(0) > target_degree {
        return None;
    }
    Some(BinaryForm::from_univariate(&q, target_degree))
}

// ---------------------------------------------------------------------------
// Order-2 jets
// ---------------------------------------------------------------------------

/// Truncated expansion c + Σ l_i x_i + Σ q_ij x_i x_j (q symmetric) of a
/// polynomial around a point; multiplication discards degree ≥ 3.
#[derive(Clone, Debug)]
pub struct Jet2<K> {
    pub c: K,
    pub lin: Vec<K>,
    pub quad: Matrix<K>,
}

impl<K: Field> Jet2<K> {
    pub fn constant(nvars: usize, c: K) -> Self {
        Jet2 {
            c,
            lin: vec![K::zero(); nvars],
            quad: Matrix::zero(nvars, nvars),
        }
    }

    pub fn linear(c: K, lin: Vec<K>) -> Self {
        let n = lin.len();
        Jet2 {
            c,
            lin,
            quad: Matrix::zero(n, n),
        }
    }

    pub fn nvars(&self) -> usize {
        self.lin.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        Jet2 {
            c: self.c.clone() + other.c.clone(),
            lin: self
                .lin
                .iter()
                .zip(&other.lin)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
            quad: self.quad.add(&other.quad).unwrap(),
        }
    }

    pub fn scale(&self, s: &K) -> Self {
        Jet2 {
            c: self.c.clone() * s.clone(),
            lin: self.lin.iter().map(|a| a.clone() * s.clone()).collect(),
            quad: self.quad.scale(s),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.nvars();
        let nonzero = [self.c.clone(), other.c.clone()]
            .into_iter()
            .chain(self.lin.iter().cloned())
            .chain(other.lin.iter().cloned())
            .chain(self.quad.rows_vec().into_iter().flatten())
            .chain(other.quad.rows_vec().into_iter().flatten())
            .find(|x| !x.is_zero());
        let Some(sample) = nonzero else {
            return Jet2::constant(n, K::zero());
        };
        let mut quad = self.quad.scale(&other.c);
        quad = quad.add(&other.quad.scale(&self.c)).unwrap();
        for i in 0..n {
            for j in 0..n {
                let t = self.lin[i].clone() * other.lin[j].clone();
                quad[(i, j)] = quad[(i, j)].clone() + t;
            }
        }
        // symmetrize the rank-one contribution (x_i x_j = x_j x_i)
        let mut sym = Matrix::zero(n, n);
        let half = {
            let one = sample.embed_i64(1);
            (one.clone() + one).inv().expect("char ≠ 2")
        };
        for i in 0..n {
            for j in 0..n {
                sym[(i, j)] =
                    (quad[(i, j)].clone() + quad[(j, i)].clone()) * half.clone();
            }
        }
        Jet2 {
            c: self.c.clone() * other.c.clone(),
            lin: self
                .lin
                .iter()
                .zip(&other.lin)
                .map(|(a, b)| a.clone() * other.c.clone() + b.clone() * self.c.clone())
                .collect(),
            quad: sym,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{Fp, Rational};

    #[test]
    fn monomial_enumeration() {
        let m = monomials(4, 4);
        assert_eq!(m.len(), 35);
        assert_eq!(m[0], vec![4, 0, 0, 0]);
        assert_eq!(m[34], vec![0, 0, 0, 4]);
        assert_eq!(monomial_count(4, 6), 84);
        assert_eq!(monomial_count(2, 5), 6);
    }

    #[test]
    fn eval_and_gradient() {
        // f = x²y over Q in 3 vars
        let mut f = DenseForm::<Rational>::zero(3, 3);
        let idx = monomial_index(3, 3, &[2, 1, 0]);
        f.coeffs[idx] = Rational::from_int(1);
        let pt = [
            Rational::from_int(2),
            Rational::from_int(3),
            Rational::from_int(5),
        ];
        assert_eq!(f.eval(&pt), Rational::from_int(12));
        let g = f.gradient_at(&pt);
        assert_eq!(g[0], Rational::from_int(12)); // 2xy
        assert_eq!(g[1], Rational::from_int(4)); // x²
        assert_eq!(g[2], Rational::from_int(0));
    }

    #[test]
    fn binary_gcd_and_division() {
        let p = 11;
        let f = |v: i64| Fp::new(v, p);
        // (s+t)²(s+2t) and (s+t)(s+3t)
        let a = BinaryForm::new(vec![f(1), f(1)])
            .mul(&BinaryForm::new(vec![f(1), f(1)]))
            .mul(&BinaryForm::new(vec![f(1), f(2)]));
        let b = BinaryForm::new(vec![f(1), f(1)]).mul(&BinaryForm::new(vec![f(1), f(3)]));
        let g = a.gcd(&b);
        assert_eq!(g, BinaryForm::new(vec![f(1), f(1)]));
        let q = binary_divide(&a, &g).unwrap();
        assert_eq!(
            q.monic(),
            BinaryForm::new(vec![f(1), f(1)]).mul(&BinaryForm::new(vec![f(1), f(2)])).monic()
        );
        assert!(binary_divide(&b, &BinaryForm::new(vec![f(1), f(0), f(1)])).is_none());
    }

    #[test]
    fn perfect_square_exhaustive_f7() {
        // Exhaustive oracle: squares of all quadratics over F₇ versus the
        // detector, over all ~16.8k quartics.
        let p = 7;
        let f = |v: u64| Fp::new(v as i64, p);
        let mut squares = std::collections::BTreeSet::new();
        for a in 0..p {
            for b in 0..p {
                for c in 0..p {
                    let r = BinaryForm::new(vec![f(a), f(b), f(c)]);
                    if r.is_zero() {
                        continue;
                    }
                    let sq = r.mul(&r);
                    // store monic representative (covers scalar multiples c·r²
                    // with c a square; non-square scalars are covered by the
                    // n·r₀² twist, also a square over the closure only when …
                    // — the detector's contract is squareness over F̄₇ of a
                    // rational quartic, i.e. monic form being a square)
                    let key: Vec<u64> = sq.monic().coeffs.iter().map(|x| x.residue()).collect();
                    squares.insert(key);
                }
            }
        }
        let mut checked = 0;
        for c0 in 0..p {
            for c1 in 0..p {
                for c2 in 0..p {
                    for c3 in 0..p {
                        for c4 in 0..p {
                            let q =
                                BinaryForm::new(vec![f(c0), f(c1), f(c2), f(c3), f(c4)]);
                            if q.is_zero() {
                                continue;
                            }
                            let truth = squares
                                .contains(&q.monic().coeffs.iter().map(|x| x.residue()).collect::<Vec<_>>());
                            assert_eq!(
                                q.is_perfect_square(),
                                truth,
                                "quartic {:?}",
                                q.coeffs.iter().map(|x| x.residue()).collect::<Vec<_>>()
                            );
                            checked += 1;
                        }
                    }
                }
            }
        }
        assert_eq!(checked, 7usize.pow(5) - 1);
    }

    #[test]
    fn jet2_matches_expansion() {
        // (1 + 2x + y)(3 + x − y): constant 3, linear 7x + 2y,
        // quadratic 2x² − y² + (−2+1)xy
        let f = |v: i64| Rational::from_int(v);
        let a = Jet2::linear(f(1), vec![f(2), f(1)]);
        let b = Jet2::linear(f(3), vec![f(1), f(-1)]);
        let prod = a.mul(&b);
        assert_eq!(prod.c, f(3));
        assert_eq!(prod.lin, vec![f(7), f(2)]);
        assert_eq!(prod.quad[(0, 0)], f(2));
        assert_eq!(prod.quad[(1, 1)], f(-1));
        assert_eq!(prod.quad[(0, 1)], Rational::from_frac(-1, 2));
        assert_eq!(prod.quad[(1, 0)], Rational::from_frac(-1, 2));
    }

    #[test]
    fn squarefree_check() {
        let p = 11;
        let f = |v: i64| Fp::new(v, p);
        let sf = BinaryForm::new(vec![f(1), f(0), f(1)]); // s² + t²: squarefree over F11? s²=-t²: -1 non-residue mod 11 → irreducible
        assert!(sf.is_squarefree());
        let sq = sf.mul(&sf);
        assert!(!sq.is_squarefree());
    }
}
