//! Exact scalar arithmetic: arbitrary-precision rationals, prime fields
//! and their quadratic extensions.
//!
//! All core math is generic over [`Field`]; scans that enumerate points are
//! additionally generic over [`FiniteField`].  Elements of `Fp` and `Fp2`
//! carry their modulus, so a single runtime `--p` flag picks the field
//! without any global state.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// An exact field, suitable for Gaussian elimination without pivoting
/// heuristics.
pub trait Field:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    /// Multiplicative inverse; `None` on zero.
    fn inv(&self) -> Option<Self>;

    /// An integer literal in the same field as `self`.
    fn embed_i64(&self, n: i64) -> Self;

    fn div(&self, rhs: &Self) -> Self {
        self.clone() * rhs.inv().expect("division by zero")
    }
}

/// A finite field whose points can be enumerated and square-rooted.
pub trait FiniteField: Field {
    /// Field characteristic.
    fn characteristic(&self) -> u64;

    /// Number of elements.
    fn order(&self) -> u64;

    /// All field elements, in a fixed order starting with 0.
    fn all_elements(&self) -> Vec<Self>;

    /// A square root, canonicalized so the answer is reproducible
    /// (the lexicographically smaller of the two roots); `None` when the
    /// element is not a square.
    fn sqrt_in_field(&self) -> Option<Self>;

    /// Deterministic element from a PRNG word.
    fn from_random_word(&self, w: u64) -> Self;
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// ℚ with arbitrary-precision integers.  `num_rational` keeps values in
/// lowest terms with positive denominator, which is exactly the canonical
/// form the subspace machinery relies on.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Rational(pub BigRational);

impl Rational {
    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_frac(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.denom().is_one() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl Add for Rational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Rational(self.0 + rhs.0)
    }
}

impl Sub for Rational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Rational(self.0 - rhs.0)
    }
}

impl Mul for Rational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        Rational(self.0 * rhs.0)
    }
}

impl Neg for Rational {
    type Output = Self;
    fn neg(self) -> Self {
        Rational(-self.0)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

impl Field for Rational {
    fn inv(&self) -> Option<Self> {
        if self.0.is_zero() {
            None
        } else {
            Some(Rational(self.0.recip()))
        }
    }

    fn embed_i64(&self, n: i64) -> Self {
        Rational::from_int(n)
    }
}

/// Signed height proxy used when sampling small rational matrices.
pub fn rational_abs_num(r: &Rational) -> BigInt {
    r.0.numer().abs()
}

// ---------------------------------------------------------------------------
// Prime fields
// ---------------------------------------------------------------------------

/// 𝔽_p element.  `p == 0` marks an "unbound" integer literal produced by
/// `Zero::zero`/`One::one` before it meets a bound element; binary ops and
/// equality unify the modulus.
#[derive(Clone, Copy, Debug)]
pub struct Fp {
    v: u64,
    p: u64,
}

impl PartialEq for Fp {
    fn eq(&self, other: &Self) -> bool {
        match (self.p, other.p) {
            (0, 0) => self.v == other.v,
            (0, p) => self.v % p == other.v,
            (p, 0) => self.v == other.v % p,
            (p, q) => p == q && self.v == other.v,
        }
    }
}

impl Eq for Fp {}

#[inline]
fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    acc
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n % q == 0 {
            return false;
        }
    }
    // Deterministic Miller-Rabin for u64.
    let d = (n - 1) >> (n - 1).trailing_zeros();
    let s = (n - 1).trailing_zeros();
    'w: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'w;
            }
        }
        return false;
    }
    true
}

/// Smallest quadratic non-residue of 𝔽_p (p odd).
pub fn least_nonresidue(p: u64) -> u64 {
    let mut n = 2;
    while powmod(n, (p - 1) / 2, p) != p - 1 {
        n += 1;
    }
    n
}

impl Fp {
    pub fn new(v: i64, p: u64) -> Self {
        debug_assert!(p >= 2);
        let m = v.rem_euclid(p as i64) as u64;
        Fp { v: m, p }
    }

    pub fn from_u64(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }

    pub fn residue(&self) -> u64 {
        self.v
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    fn unify(a: Fp, b: Fp) -> (u64, u64, u64) {
        match (a.p, b.p) {
            (0, 0) => (a.v, b.v, 0),
            (0, p) => (a.v % p, b.v, p),
            (p, 0) => (a.v, b.v % p, p),
            (p, q) => {
                assert_eq!(p, q, "mixed moduli {p} and {q}");
                (a.v, b.v, p)
            }
        }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

impl Add for Fp {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (a, b, p) = Fp::unify(self, rhs);
        if p == 0 {
            return Fp { v: a + b, p: 0 };
        }
        let s = a + b;
        Fp {
            v: if s >= p { s - p } else { s },
            p,
        }
    }
}

impl Sub for Fp {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Fp {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (a, b, p) = Fp::unify(self, rhs);
        if p == 0 {
            return Fp { v: a * b, p: 0 };
        }
        Fp {
            v: mulmod(a, b, p),
            p,
        }
    }
}

impl Neg for Fp {
    type Output = Self;
    fn neg(self) -> Self {
        if self.p == 0 {
            assert!(self.v == 0, "cannot negate unbound literal");
            return self;
        }
        Fp {
            v: if self.v == 0 { 0 } else { self.p - self.v },
            p: self.p,
        }
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp { v: 0, p: 0 }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp { v: 1, p: 0 }
    }
}

impl Field for Fp {
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            return None;
        }
        if self.p == 0 {
            assert!(self.v == 1, "cannot invert unbound literal {}", self.v);
            return Some(*self);
        }
        Some(Fp {
            v: powmod(self.v, self.p - 2, self.p),
            p: self.p,
        })
    }

    fn embed_i64(&self, n: i64) -> Self {
        assert!(self.p != 0, "unbound element cannot mint literals");
        Fp::new(n, self.p)
    }
}

/// Tonelli-Shanks, deterministic (uses the least non-residue as generator).
fn sqrt_mod_p(a: u64, p: u64) -> Option<u64> {
    if a == 0 {
        return Some(0);
    }
    if p == 2 {
        return Some(a);
    }
    if powmod(a, (p - 1) / 2, p) != 1 {
        return None;
    }
    if p % 4 == 3 {
        let r = powmod(a, (p + 1) / 4, p);
        return Some(r.min(p - r));
    }
    let s = (p - 1).trailing_zeros() as u64;
    let q = (p - 1) >> s;
    let z = least_nonresidue(p);
    let mut m = s;
    let mut c = powmod(z, q, p);
    let mut t = powmod(a, q, p);
    let mut r = powmod(a, (q + 1) / 2, p);
    while t != 1 {
        let mut i = 0u64;
        let mut tt = t;
        while tt != 1 {
            tt = mulmod(tt, tt, p);
            i += 1;
        }
        let b = powmod(c, 1 << (m - i - 1), p);
        m = i;
        c = mulmod(b, b, p);
        t = mulmod(t, c, p);
        r = mulmod(r, b, p);
    }
    Some(r.min(p - r))
}

impl FiniteField for Fp {
    fn characteristic(&self) -> u64 {
        self.p
    }

    fn order(&self) -> u64 {
        self.p
    }

    fn all_elements(&self) -> Vec<Self> {
        (0..self.p).map(|v| Fp { v, p: self.p }).collect()
    }

    fn sqrt_in_field(&self) -> Option<Self> {
        sqrt_mod_p(self.v, self.p).map(|v| Fp { v, p: self.p })
    }

    fn from_random_word(&self, w: u64) -> Self {
        Fp {
            v: w % self.p,
            p: self.p,
        }
    }
}

// ---------------------------------------------------------------------------
// Quadratic extensions
// ---------------------------------------------------------------------------

/// 𝔽_{p²} = 𝔽_p[x]/(x² − n) with `n` the least non-residue of 𝔽_p.
/// Elements are `a + b·x`.
#[derive(Clone, Copy, Debug)]
pub struct Fp2 {
    a: u64,
    b: u64,
    p: u64,
    nr: u64,
}

impl PartialEq for Fp2 {
    fn eq(&self, other: &Self) -> bool {
        match (self.p, other.p) {
            (0, 0) => self.a == other.a && self.b == other.b,
            (0, p) => self.a % p == other.a && other.b == 0,
            (p, 0) => self.a == other.a % p && self.b == 0,
            (p, q) => p == q && self.a == other.a && self.b == other.b,
        }
    }
}

impl Eq for Fp2 {}

impl Fp2 {
    pub fn ctx(p: u64) -> Self {
        assert!(p > 2 && is_prime_u64(p));
        Fp2 {
            a: 1,
            b: 0,
            p,
            nr: least_nonresidue(p),
        }
    }

    pub fn new(a: i64, b: i64, p: u64) -> Self {
        let nr = least_nonresidue(p);
        Fp2 {
            a: a.rem_euclid(p as i64) as u64,
            b: b.rem_euclid(p as i64) as u64,
            p,
            nr,
        }
    }

    pub fn from_base(x: Fp) -> Self {
        let p = x.modulus();
        Fp2 {
            a: x.residue(),
            b: 0,
            p,
            nr: least_nonresidue(p),
        }
    }

    pub fn parts(&self) -> (u64, u64) {
        (self.a, self.b)
    }

    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// The base-field part, `None` when the element is not in 𝔽_p.
    pub fn to_base(&self) -> Option<Fp> {
        if self.b == 0 {
            Some(Fp::from_u64(self.a, self.p))
        } else {
            None
        }
    }

    fn unify(x: Fp2, y: Fp2) -> (Fp2, Fp2) {
        match (x.p, y.p) {
            (0, 0) => (x, y),
            (0, p) => (
                Fp2 {
                    a: x.a % p,
                    b: 0,
                    p,
                    nr: y.nr,
                },
                y,
            ),
            (p, 0) => {
                let yy = Fp2 {
                    a: y.a % p,
                    b: 0,
                    p,
                    nr: x.nr,
                };
                (x, yy)
            }
            (p, q) => {
                assert_eq!(p, q, "mixed moduli {p} and {q}");
                (x, y)
            }
        }
    }
}

impl fmt::Display for Fp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 0 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}+{}s", self.a, self.b)
        }
    }
}

impl Add for Fp2 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let (x, y) = Fp2::unify(self, rhs);
        if x.p == 0 {
            return Fp2 {
                a: x.a + y.a,
                b: 0,
                p: 0,
                nr: 0,
            };
        }
        let p = x.p;
        let add = |u: u64, v: u64| {
            let s = u + v;
            if s >= p {
                s - p
            } else {
                s
            }
        };
        Fp2 {
            a: add(x.a, y.a),
            b: add(x.b, y.b),
            p,
            nr: x.nr,
        }
    }
}

impl Neg for Fp2 {
    type Output = Self;
    fn neg(self) -> Self {
        if self.p == 0 {
            assert!(self.a == 0 && self.b == 0);
            return self;
        }
        let f = |u: u64| if u == 0 { 0 } else { self.p - u };
        Fp2 {
            a: f(self.a),
            b: f(self.b),
            ..self
        }
    }
}

impl Sub for Fp2 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for Fp2 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let (x, y) = Fp2::unify(self, rhs);
        if x.p == 0 {
            return Fp2 {
                a: x.a * y.a,
                b: 0,
                p: 0,
                nr: 0,
            };
        }
        let p = x.p;
        let ac = mulmod(x.a, y.a, p);
        let bd = mulmod(x.b, y.b, p);
        let ad = mulmod(x.a, y.b, p);
        let bc = mulmod(x.b, y.a, p);
        Fp2 {
            a: (ac + mulmod(x.nr, bd, p)) % p,
            b: (ad + bc) % p,
            p,
            nr: x.nr,
        }
    }
}

impl Zero for Fp2 {
    fn zero() -> Self {
        Fp2 {
            a: 0,
            b: 0,
            p: 0,
            nr: 0,
        }
    }
    fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

impl One for Fp2 {
    fn one() -> Self {
        Fp2 {
            a: 1,
            b: 0,
            p: 0,
            nr: 0,
        }
    }
}

impl Field for Fp2 {
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.p == 0 {
            assert!(self.a == 1 && self.b == 0, "cannot invert unbound literal");
            return Some(*self);
        }
        let p = self.p;
        // norm = a² − n·b²
        let n = (mulmod(self.a, self.a, p) + p * p
            - mulmod(self.nr, mulmod(self.b, self.b, p), p))
            % p;
        let ninv = powmod(n, p - 2, p);
        Some(Fp2 {
            a: mulmod(self.a, ninv, p),
            b: mulmod((p - self.b) % p, ninv, p),
            p,
            nr: self.nr,
        })
    }

    fn embed_i64(&self, n: i64) -> Self {
        assert!(self.p != 0);
        Fp2 {
            a: n.rem_euclid(self.p as i64) as u64,
            b: 0,
            p: self.p,
            nr: self.nr,
        }
    }
}

impl FiniteField for Fp2 {
    fn characteristic(&self) -> u64 {
        self.p
    }

    fn order(&self) -> u64 {
        self.p * self.p
    }

    fn all_elements(&self) -> Vec<Self> {
        let p = self.p;
        let mut out = Vec::with_capacity((p * p) as usize);
        for b in 0..p {
            for a in 0..p {
                out.push(Fp2 {
                    a,
                    b,
                    p,
                    nr: self.nr,
                });
            }
        }
        out.sort_by_key(|e| (e.b, e.a));
        out
    }

    fn sqrt_in_field(&self) -> Option<Self> {
        let p = self.p;
        if self.is_zero() {
            return Some(*self);
        }
        let canon = |r: Fp2| {
            let neg = -r;
            if (r.b, r.a) <= (neg.b, neg.a) {
                r
            } else {
                neg
            }
        };
        if self.b == 0 {
            // Base-field elements: either the base sqrt, or sqrt(a/n)·x.
            if let Some(r) = sqrt_mod_p(self.a, p) {
                return Some(canon(Fp2 {
                    a: r,
                    b: 0,
                    p,
                    nr: self.nr,
                }));
            }
            let q = mulmod(self.a, powmod(self.nr, p - 2, p), p);
            let r = sqrt_mod_p(q, p).expect("a or a/n is a residue");
            return Some(canon(Fp2 {
                a: 0,
                b: r,
                p,
                nr: self.nr,
            }));
        }
        // (c + d·x)² = a + b·x  ⟺  c² + n·d² = a, 2cd = b.
        // c² is a root of z² − a·z + n·(b/2)².
        let half = powmod(2, p - 2, p);
        let b2 = mulmod(self.b, half, p);
        let disc = (mulmod(self.a, self.a, p) + p * p
            - mulmod(4 % p, mulmod(self.nr, mulmod(b2, b2, p), p), p))
            % p;
        let s = sqrt_mod_p(disc, p)?;
        for cand in [(self.a + s) % p, (self.a + p - s) % p] {
            let c2 = mulmod(cand, half, p);
            if let Some(c) = sqrt_mod_p(c2, p) {
                if c == 0 {
                    continue;
                }
                let d = mulmod(b2, powmod(c, p - 2, p), p);
                let r = Fp2 {
                    a: c,
                    b: d,
                    p,
                    nr: self.nr,
                };
                debug_assert_eq!(r * r, *self);
                return Some(canon(r));
            }
        }
        None
    }

    fn from_random_word(&self, w: u64) -> Self {
        Fp2 {
            a: w % self.p,
            b: (w / self.p) % self.p,
            p: self.p,
            nr: self.nr,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fp_basic() {
        let p = 11;
        let a = Fp::new(7, p);
        let b = Fp::new(8, p);
        assert_eq!((a + b).residue(), 4);
        assert_eq!((a * b).residue(), 1);
        assert_eq!(a.inv().unwrap().residue(), 8);
        assert_eq!((a - b).residue(), 10);
        assert_eq!((Fp::zero() + a).residue(), 7);
        assert_eq!((Fp::one() * b).modulus(), 11);
    }

    #[test]
    fn sqrt_examples() {
        // sqrt(0) = 0 and sqrt(4) = 2 in F_11, tie broken to the smaller residue.
        assert_eq!(Fp::new(0, 11).sqrt_in_field().unwrap().residue(), 0);
        assert_eq!(Fp::new(4, 11).sqrt_in_field().unwrap().residue(), 2);
        // Exhaustive squaring table over F_11: the set of squares matches.
        let squares: std::collections::BTreeSet<u64> =
            (0..11).map(|v| (v * v) % 11).collect();
        for v in 0..11 {
            let has = Fp::new(v as i64, 11).sqrt_in_field().is_some();
            assert_eq!(has, squares.contains(&v), "residue {v}");
        }
        // Non-residues of F_11 gain a root in F_121.
        for v in 0..11u64 {
            if !squares.contains(&v) {
                let e = Fp2::new(v as i64, 0, 11);
                let r = e.sqrt_in_field().expect("square in Fp2");
                assert_eq!(r * r, e);
            }
        }
    }

    #[test]
    fn fp2_field_axioms() {
        let p = 11;
        let ctx = Fp2::ctx(p);
        assert_eq!(least_nonresidue(11), 2);
        for w in 0..200u64 {
            let x = ctx.from_random_word(w.wrapping_mul(0x9e3779b97f4a7c15));
            if !x.is_zero() {
                assert_eq!(x * x.inv().unwrap(), ctx.embed_i64(1));
            }
        }
        // Every square has a canonical root that squares back.
        for x in ctx.all_elements() {
            if let Some(r) = x.sqrt_in_field() {
                assert_eq!(r * r, x);
            }
        }
        // Exactly (p²−1)/2 non-zero squares.
        let squares = ctx
            .all_elements()
            .into_iter()
            .filter(|x| !x.is_zero() && x.sqrt_in_field().is_some())
            .count();
        assert_eq!(squares, (121 - 1) / 2);
    }

    #[test]
    fn rational_basic() {
        let a = Rational::from_frac(3, 5);
        let b = Rational::from_frac(-1, 10);
        assert_eq!(a.clone() + b.clone(), Rational::from_frac(1, 2));
        assert_eq!(a.clone() * b, Rational::from_frac(-3, 50));
        assert_eq!(a.inv().unwrap(), Rational::from_frac(5, 3));
        assert_eq!(format!("{}", Rational::from_frac(4, -6)), "-2/3");
    }

    #[test]
    fn primality() {
        assert!(is_prime_u64(2));
        assert!(is_prime_u64(101));
        assert!(!is_prime_u64(1));
        assert!(!is_prime_u64(4));
        assert!(!is_prime_u64(121));
        assert!(is_prime_u64(1_000_003));
    }
}
