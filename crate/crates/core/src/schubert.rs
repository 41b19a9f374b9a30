//! Exact Schubert calculus in the Chow rings of Grassmannians G(k,n) and
//! projective spaces: Pieri products on Giambelli expansions, Chern classes
//! of twisted and tautological bundles, and the degeneracy-locus classes
//! c₁ and c₁c₂ − 2c₃ that produce the enumerative numbers.

use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RingFlavor {
    Grassmannian { k: usize, n: usize },
    Projective { n: usize },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ChowRing {
    pub flavor: RingFlavor,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SchubertError {
    RingMismatch,
    BadIndex,
    NonIntegral,
    Parse,
}

impl fmt::Display for SchubertError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchubertError::RingMismatch => write!(f, "classes from different rings"),
            SchubertError::BadIndex => write!(f, "special class index out of range"),
            SchubertError::NonIntegral => write!(f, "non-integral coefficient"),
            SchubertError::Parse => write!(f, "cannot parse expression"),
        }
    }
}

impl std::error::Error for SchubertError {}

/// An integer combination of basis classes: partitions in the k×(n−k) box,
/// or powers of the hyperplane class.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SchubertClass {
    pub ring: ChowRing,
    pub coeffs: BTreeMap<Vec<u8>, i64>,
}

impl ChowRing {
    pub fn grassmannian(k: usize, n: usize) -> Self {
        assert!(0 < k && k < n);
        ChowRing {
            flavor: RingFlavor::Grassmannian { k, n },
        }
    }

    pub fn projective(n: usize) -> Self {
        ChowRing {
            flavor: RingFlavor::Projective { n },
        }
    }

    pub fn dimension(&self) -> usize {
        match self.flavor {
            RingFlavor::Grassmannian { k, n } => k * (n - k),
            RingFlavor::Projective { n } => n,
        }
    }

    pub fn zero(&self) -> SchubertClass {
        SchubertClass {
            ring: *self,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(&self) -> SchubertClass {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(Vec::new(), 1);
        SchubertClass { ring: *self, coeffs }
    }

    /// σ_i (Grassmannian) or h^i (projective space).
    pub fn special(&self, i: usize) -> Result<SchubertClass, SchubertError> {
        match self.flavor {
            RingFlavor::Grassmannian { k, n } => {
                if i > n - k {
                    return Err(SchubertError::BadIndex);
                }
                let mut coeffs = BTreeMap::new();
                coeffs.insert(if i == 0 { Vec::new() } else { vec![i as u8] }, 1);
                Ok(SchubertClass { ring: *self, coeffs })
            }
            RingFlavor::Projective { n } => {
                if i > n {
                    return Ok(self.zero());
                }
                let mut coeffs = BTreeMap::new();
                coeffs.insert(if i == 0 { Vec::new() } else { vec![i as u8] }, 1);
                Ok(SchubertClass { ring: *self, coeffs })
            }
        }
    }

    pub fn basis_class(&self, partition: &[u8]) -> SchubertClass {
        let key = canon_partition(partition);
        self.check_in_box(&key);
        let mut coeffs = BTreeMap::new();
        coeffs.insert(key, 1);
        SchubertClass { ring: *self, coeffs }
    }

    fn check_in_box(&self, p: &[u8]) {
        match self.flavor {
            RingFlavor::Grassmannian { k, n } => {
                assert!(p.len() <= k, "partition too long");
                assert!(p.iter().all(|&x| (x as usize) <= n - k), "partition too wide");
            }
            RingFlavor::Projective { n } => {
                assert!(p.len() <= 1 && p.first().map_or(0, |&x| x as usize) <= n);
            }
        }
    }

    /// The class of a point (top-degree basis element).
    pub fn point_class(&self) -> SchubertClass {
        match self.flavor {
            RingFlavor::Grassmannian { k, n } => {
                self.basis_class(&vec![(n - k) as u8; k])
            }
            RingFlavor::Projective { n } => self.basis_class(&[n as u8]),
        }
    }
}

fn canon_partition(p: &[u8]) -> Vec<u8> {
    let mut v: Vec<u8> = p.iter().cloned().filter(|&x| x > 0).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

impl SchubertClass {
    pub fn degree_parts(&self) -> BTreeMap<usize, SchubertClass> {
        let mut out: BTreeMap<usize, SchubertClass> = BTreeMap::new();
        for (p, &c) in &self.coeffs {
            let d: usize = p.iter().map(|&x| x as usize).sum();
            out.entry(d)
                .or_insert_with(|| self.ring.zero())
                .coeffs
                .insert(p.clone(), c);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|&c| c == 0)
    }

    pub fn add(&self, other: &Self) -> Result<Self, SchubertError> {
        if self.ring != other.ring {
            return Err(SchubertError::RingMismatch);
        }
        let mut coeffs = self.coeffs.clone();
        for (p, &c) in &other.coeffs {
            let e = coeffs.entry(p.clone()).or_insert(0);
            *e += c;
            if *e == 0 {
                coeffs.remove(p);
            }
        }
        Ok(SchubertClass {
            ring: self.ring,
            coeffs,
        })
    }

    pub fn scale(&self, s: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if s != 0 {
            for (p, &c) in &self.coeffs {
                coeffs.insert(p.clone(), c * s);
            }
        }
        SchubertClass {
            ring: self.ring,
            coeffs,
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self, SchubertError> {
        self.add(&other.scale(-1))
    }
}

/// Pieri rule: σ_λ·σ_i = Σ σ_μ over horizontal strips μ ⊇ λ with |μ| = |λ|+i
/// inside the box (or h-power truncation in projective space).
pub fn pieri(c: &SchubertClass, i: usize) -> Result<SchubertClass, SchubertError> {
    match c.ring.flavor {
        RingFlavor::Projective { n } => {
            let mut out = c.ring.zero();
            for (p, &coeff) in &c.coeffs {
                let d = p.first().map_or(0, |&x| x as usize) + i;
                if d <= n {
                    let key = if d == 0 { Vec::new() } else { vec![d as u8] };
                    *out.coeffs.entry(key).or_insert(0) += coeff;
                }
            }
            out.coeffs.retain(|_, v| *v != 0);
            Ok(out)
        }
        RingFlavor::Grassmannian { k, n } => {
            if i > n - k {
                return Err(SchubertError::BadIndex);
            }
            let mut out = c.ring.zero();
            if i == 0 {
                return Ok(c.clone());
            }
            let w = (n - k) as u8;
            for (p, &coeff) in &c.coeffs {
                let mut lam = p.clone();
                lam.resize(k, 0);
                // horizontal strips: λ_{j-1} ≥ μ_j ≥ λ_j, Σ(μ_j − λ_j) = i
                let mut stack: Vec<(usize, usize, Vec<u8>)> = vec![(0, i, Vec::new())];
                while let Some((row, left, mu)) = stack.pop() {
                    if row == k {
                        if left == 0 {
                            let key = canon_partition(&mu);
                            let e = out.coeffs.entry(key).or_insert(0);
                            *e += coeff;
                        }
                        continue;
                    }
                    let lo = lam[row];
                    // horizontal strip: at most one new box per column
                    let hi = if row == 0 { w } else { lam[row - 1] };
                    let _ = &mu;
                    for v in lo..=hi {
                        let add = (v - lo) as usize;
                        if add > left {
                            break;
                        }
                        let mut mu2 = mu.clone();
                        mu2.push(v);
                        stack.push((row + 1, left - add, mu2));
                    }
                }
            }
            out.coeffs.retain(|_, v| *v != 0);
            Ok(out)
        }
    }
}

/// The Giambelli expansion of σ_μ as a signed sum of products of special
/// classes: det(σ_{μ_i + j − i}).
fn giambelli_products(mu: &[u8], k: usize) -> Vec<(i64, Vec<usize>)> {
    let mut lam = mu.to_vec();
    lam.resize(k, 0);
    let mut out = Vec::new();
    let perms = permutations(k);
    for (sign, per) in perms {
        let mut specials = Vec::new();
        let mut ok = true;
        for (i, &pi) in per.iter().enumerate() {
            let v = lam[i] as i64 + pi as i64 - i as i64;
            if v < 0 {
                ok = false;
                break;
            }
            if v > 0 {
                specials.push(v as usize);
            }
        }
        if ok {
            out.push((sign, specials));
        }
    }
    out
}

fn permutations(k: usize) -> Vec<(i64, Vec<usize>)> {
    fn rec(out: &mut Vec<(i64, Vec<usize>)>, cur: &mut Vec<usize>, used: &mut Vec<bool>, k: usize) {
        if cur.len() == k {
            // sign by inversion count
            let mut inv = 0;
            for i in 0..k {
                for j in (i + 1)..k {
                    if cur[i] > cur[j] {
                        inv += 1;
                    }
                }
            }
            out.push((if inv % 2 == 0 { 1 } else { -1 }, cur.clone()));
            return;
        }
        for v in 0..k {
            if !used[v] {
                used[v] = true;
                cur.push(v);
                rec(out, cur, used, k);
                cur.pop();
                used[v] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut out, &mut Vec::new(), &mut vec![false; k], k);
    out
}

/// Product by iterated Pieri on the Giambelli expansion of the second factor.
pub fn multiply(a: &SchubertClass, b: &SchubertClass) -> Result<SchubertClass, SchubertError> {
    if a.ring != b.ring {
        return Err(SchubertError::RingMismatch);
    }
    match a.ring.flavor {
        RingFlavor::Projective { .. } => {
            let mut out = a.ring.zero();
            for (p, &cb) in &b.coeffs {
                let i = p.first().map_or(0, |&x| x as usize);
                let t = pieri(a, i)?;
                out = out.add(&t.scale(cb))?;
            }
            Ok(out)
        }
        RingFlavor::Grassmannian { k, .. } => {
            let mut out = a.ring.zero();
            for (p, &cb) in &b.coeffs {
                for (sign, specials) in giambelli_products(p, k) {
                    let mut acc = a.clone();
                    let mut dead = false;
                    for s in specials {
                        if s > a.ring.dimension() {
                            dead = true;
                            break;
                        }
                        match pieri(&acc, s) {
                            Ok(t) => acc = t,
                            Err(SchubertError::BadIndex) => {
                                dead = true;
                                break;
                            }
                            Err(e) => return Err(e),
                        }
                        if acc.is_zero() {
                            dead = true;
                            break;
                        }
                    }
                    if !dead {
                        out = out.add(&acc.scale(sign * cb))?;
                    }
                }
            }
            Ok(out)
        }
    }
}

/// The coefficient of the point class.
pub fn integrate(c: &SchubertClass) -> i64 {
    let point = c.ring.point_class();
    let key = point.coeffs.keys().next().unwrap();
    *c.coeffs.get(key).unwrap_or(&0)
}

pub fn pow(c: &SchubertClass, e: usize) -> Result<SchubertClass, SchubertError> {
    let mut acc = c.ring.one();
    for _ in 0..e {
        acc = multiply(&acc, c)?;
    }
    Ok(acc)
}

// ---------------------------------------------------------------------------
// Total Chern classes
// ---------------------------------------------------------------------------

/// A total Chern class: graded pieces indexed by degree (0 = rank term 1).
#[derive(Clone, PartialEq, Debug)]
pub struct TotalChern {
    pub parts: Vec<SchubertClass>,
}

impl TotalChern {
    pub fn one(ring: &ChowRing, top: usize) -> Self {
        let mut parts = vec![ring.zero(); top + 1];
        parts[0] = ring.one();
        TotalChern { parts }
    }

    pub fn part(&self, d: usize) -> SchubertClass {
        self.parts
            .get(d)
            .cloned()
            .unwrap_or_else(|| self.parts[0].ring.zero())
    }

    pub fn mul(&self, other: &Self) -> Result<Self, SchubertError> {
        let ring = self.parts[0].ring;
        let top = ring.dimension();
        let mut parts = vec![ring.zero(); top + 1];
        for (i, a) in self.parts.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.parts.iter().enumerate() {
                if i + j > top || b.is_zero() {
                    continue;
                }
                let t = multiply(a, b)?;
                parts[i + j] = parts[i + j].add(&t)?;
            }
        }
        Ok(TotalChern { parts })
    }

    /// Formal inverse of a total class with unit constant term.
    pub fn inverse(&self) -> Result<Self, SchubertError> {
        let ring = self.parts[0].ring;
        let top = ring.dimension();
        let mut inv = vec![ring.zero(); top + 1];
        inv[0] = ring.one();
        for d in 1..=top {
            let mut acc = ring.zero();
            for i in 1..=d {
                if self.parts.len() > i && !self.parts[i].is_zero() {
                    let t = multiply(&self.parts[i], &inv[d - i])?;
                    acc = acc.add(&t)?;
                }
            }
            inv[d] = acc.scale(-1);
        }
        Ok(TotalChern { parts: inv })
    }

    /// Dual bundle: sign flip in odd degrees.
    pub fn dual(&self) -> Self {
        let parts = self
            .parts
            .iter()
            .enumerate()
            .map(|(d, p)| if d % 2 == 1 { p.scale(-1) } else { p.clone() })
            .collect();
        TotalChern { parts }
    }
}

fn binom_i64(n: i64, k: i64) -> i64 {
    if k < 0 || k > n {
        return 0;
    }
    let mut b = 1i64;
    for i in 0..k.min(n - k) {
        b = b * (n - i) / (i + 1);
    }
    b
}

/// c(E⊗L) from c(E): c_k(E⊗L) = Σ_i binom(r−i, k−i)·c_i(E)·c₁(L)^{k−i}.
pub fn chern_twisted(
    e: &TotalChern,
    rank: usize,
    line_c1: &SchubertClass,
) -> Result<TotalChern, SchubertError> {
    let ring = e.parts[0].ring;
    let top = ring.dimension();
    let mut parts = vec![ring.zero(); top + 1];
    parts[0] = ring.one();
    for k in 1..=top.min(rank) {
        let mut acc = ring.zero();
        for i in 0..=k {
            let b = binom_i64(rank as i64 - i as i64, (k - i) as i64);
            if b == 0 {
                continue;
            }
            let ci = e.part(i);
            if ci.is_zero() {
                continue;
            }
            let lpow = pow(line_c1, k - i)?;
            let t = multiply(&ci, &lpow)?;
            acc = acc.add(&t.scale(b))?;
        }
        parts[k] = acc;
    }
    Ok(TotalChern { parts })
}

/// Pragacz–Ratajski degeneracy classes: c₁ for the first locus,
/// c₁c₂ − 2c₃ for the second.
pub fn pr_class(c: &TotalChern, k: usize) -> Result<SchubertClass, SchubertError> {
    match k {
        1 => Ok(c.part(1)),
        2 => {
            let c1c2 = multiply(&c.part(1), &c.part(2))?;
            c1c2.sub(&c.part(3).scale(2))
        }
        _ => Err(SchubertError::BadIndex),
    }
}

// ---------------------------------------------------------------------------
// Tautological bundles on G(3,6)
// ---------------------------------------------------------------------------

/// c(Q) = 1 + σ₁ + σ₂ + σ₃ on G(k, n) (quotient bundle).
pub fn chern_quotient(ring: &ChowRing) -> TotalChern {
    let RingFlavor::Grassmannian { k, n } = ring.flavor else {
        panic!("quotient bundle lives on a Grassmannian");
    };
    let top = ring.dimension();
    let mut parts = vec![ring.zero(); top + 1];
    parts[0] = ring.one();
    for i in 1..=(n - k) {
        parts[i] = ring.special(i).unwrap();
    }
    TotalChern { parts }
}

/// c(T_G) for the tangent bundle S^∨⊗Q, via the universal polynomial
/// Π(1 + a_i + b_j) in the elementary symmetric functions of the Chern
/// roots of S^∨ and Q.
pub fn chern_tangent(ring: &ChowRing) -> Result<TotalChern, SchubertError> {
    let RingFlavor::Grassmannian { k, n } = ring.flavor else {
        panic!("tangent bundle of a Grassmannian");
    };
    assert!(k == 3 && n - k == 3, "implemented for the 3×3 box");
    let cq = chern_quotient(ring);
    let cs_dual = cq.inverse()?.dual();
    // universal polynomial in e(a), e(b)
    let universal = tensor33_universal();
    let top = ring.dimension();
    let mut parts = vec![ring.zero(); top + 1];
    parts[0] = ring.one();
    for ((ea, eb), coeff) in universal {
        let mut cls = ring.one();
        let mut deg = 0usize;
        for (i, &e) in ea.iter().enumerate() {
            for _ in 0..e {
                cls = multiply(&cls, &cs_dual.part(i + 1))?;
                deg += i + 1;
            }
        }
        for (i, &e) in eb.iter().enumerate() {
            for _ in 0..e {
                cls = multiply(&cls, &cq.part(i + 1))?;
                deg += i + 1;
            }
        }
        if deg == 0 || deg > top {
            continue;
        }
        parts[deg] = parts[deg].add(&cls.scale(coeff))?;
    }
    Ok(TotalChern { parts })
}

type ZPoly = BTreeMap<[u8; 6], i64>;

fn zp_mul(a: &ZPoly, b: &ZPoly) -> ZPoly {
    let mut out = ZPoly::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            let mut m = [0u8; 6];
            for i in 0..6 {
                m[i] = ma[i] + mb[i];
            }
            *out.entry(m).or_insert(0) += ca * cb;
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

/// Π_{i,j∈{0,1,2}} (1 + a_i + b_j) expressed in the elementary symmetric
/// functions of (a₀,a₁,a₂) and (b₀,b₁,b₂): map (e(a)-exponents,
/// e(b)-exponents) → integer coefficient.  Degree-0 term omitted.
fn tensor33_universal() -> BTreeMap<([u8; 3], [u8; 3]), i64> {
    // expand the product
    let mut prod: ZPoly = BTreeMap::new();
    prod.insert([0; 6], 1);
    for i in 0..3usize {
        for j in 0..3usize {
            let mut f: ZPoly = BTreeMap::new();
            f.insert([0; 6], 1);
            let mut ma = [0u8; 6];
            ma[i] = 1;
            f.insert(ma, 1);
            let mut mb = [0u8; 6];
            mb[3 + j] = 1;
            *f.entry(mb).or_insert(0) += 1;
            prod = zp_mul(&prod, &f);
        }
    }
    // group by b-exponents, reduce the a-part to elementaries, then swap
    let mut stage1: BTreeMap<([u8; 3], [u8; 3]), i64> = BTreeMap::new();
    let mut by_b: BTreeMap<[u8; 3], BTreeMap<[u8; 3], i64>> = BTreeMap::new();
    for (m, c) in prod {
        let a = [m[0], m[1], m[2]];
        let b = [m[3], m[4], m[5]];
        *by_b.entry(b).or_default().entry(a).or_insert(0) += c;
    }
    for (b, apoly) in by_b {
        for (ea, c) in symmetric_to_elementary(apoly) {
            *stage1.entry((ea, b)).or_insert(0) += c;
        }
    }
    let mut by_ea: BTreeMap<[u8; 3], BTreeMap<[u8; 3], i64>> = BTreeMap::new();
    for ((ea, b), c) in stage1 {
        *by_ea.entry(ea).or_default().entry(b).or_insert(0) += c;
    }
    let mut out = BTreeMap::new();
    for (ea, bpoly) in by_ea {
        for (eb, c) in symmetric_to_elementary(bpoly) {
            if c != 0 && (ea != [0; 3] || eb != [0; 3]) {
                *out.entry((ea, eb)).or_insert(0) += c;
            }
        }
    }
    out
}

/// Rewrite a symmetric polynomial in three variables in the elementary
/// symmetric polynomials (Gauss's algorithm).
fn symmetric_to_elementary(mut p: BTreeMap<[u8; 3], i64>) -> BTreeMap<[u8; 3], i64> {
    let elem: [BTreeMap<[u8; 3], i64>; 3] = [
        BTreeMap::from([([1, 0, 0], 1), ([0, 1, 0], 1), ([0, 0, 1], 1)]),
        BTreeMap::from([([1, 1, 0], 1), ([1, 0, 1], 1), ([0, 1, 1], 1)]),
        BTreeMap::from([([1, 1, 1], 1)]),
    ];
    let mul3 = |a: &BTreeMap<[u8; 3], i64>, b: &BTreeMap<[u8; 3], i64>| {
        let mut out: BTreeMap<[u8; 3], i64> = BTreeMap::new();
        for (ma, ca) in a {
            for (mb, cb) in b {
                let m = [ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]];
                *out.entry(m).or_insert(0) += ca * cb;
            }
        }
        out.retain(|_, v| *v != 0);
        out
    };
    let mut out: BTreeMap<[u8; 3], i64> = BTreeMap::new();
    loop {
        p.retain(|_, v| *v != 0);
        // lex-leading monomial (largest exponent vector)
        let Some((&lead, &coeff)) = p.iter().next_back() else {
            break;
        };
        debug_assert!(
            lead[0] >= lead[1] && lead[1] >= lead[2],
            "leading monomial of a symmetric polynomial is a partition: {lead:?}"
        );
        let epow = [lead[0] - lead[1], lead[1] - lead[2], lead[2]];
        // expand e₁^{epow0}·e₂^{epow1}·e₃^{epow2}
        let mut expansion: BTreeMap<[u8; 3], i64> = BTreeMap::from([([0, 0, 0], 1)]);
        for (i, &e) in epow.iter().enumerate() {
            for _ in 0..e {
                expansion = mul3(&expansion, &elem[i]);
            }
        }
        *out.entry(epow).or_insert(0) += coeff;
        for (m, c) in expansion {
            let entry = p.entry(m).or_insert(0);
            *entry -= coeff * c;
        }
    }
    out
}

// ---------------------------------------------------------------------------
// The expression grammar of the CLI
// ---------------------------------------------------------------------------

/// Values of the expression evaluator.
#[derive(Clone, Debug, PartialEq)]
pub enum EvalResult {
    Class(SchubertClass),
    Integer(i64),
}

/// Evaluate an expression over {sigma_i | sigmaN, h, integers, +, -, *, ^,
/// integrate(...)} in the given ring.
pub fn eval_expression(input: &str, ring: &ChowRing) -> Result<EvalResult, SchubertError> {
    let tokens = tokenize(input)?;
    let mut parser = Parser {
        tokens,
        pos: 0,
        ring: *ring,
    };
    let v = parser.expr()?;
    if parser.pos != parser.tokens.len() {
        return Err(SchubertError::Parse);
    }
    Ok(v)
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(i64),
    Sigma(usize),
    H,
    Plus,
    Minus,
    Star,
    Caret,
    LPar,
    RPar,
    Integrate,
}

fn tokenize(s: &str) -> Result<Vec<Tok>, SchubertError> {
    let mut out = Vec::new();
    let b = s.as_bytes();
    let mut i = 0;
    while i < b.len() {
        match b[i] {
            b' ' | b'\t' => i += 1,
            b'+' => {
                out.push(Tok::Plus);
                i += 1;
            }
            b'-' => {
                out.push(Tok::Minus);
                i += 1;
            }
            b'*' => {
                out.push(Tok::Star);
                i += 1;
            }
            b'^' => {
                out.push(Tok::Caret);
                i += 1;
            }
            b'(' => {
                out.push(Tok::LPar);
                i += 1;
            }
            b')' => {
                out.push(Tok::RPar);
                i += 1;
            }
            b'0'..=b'9' => {
                let mut j = i;
                while j < b.len() && b[j].is_ascii_digit() {
                    j += 1;
                }
                let v: i64 = s[i..j].parse().map_err(|_| SchubertError::Parse)?;
                out.push(Tok::Num(v));
                i = j;
            }
            _ => {
                let rest = &s[i..];
                if let Some(r) = rest.strip_prefix("integrate") {
                    let _ = r;
                    out.push(Tok::Integrate);
                    i += "integrate".len();
                } else if rest.starts_with("sigma") {
                    let mut j = i + 5;
                    if j < b.len() && b[j] == b'_' {
                        j += 1;
                    }
                    let start = j;
                    while j < b.len() && b[j].is_ascii_digit() {
                        j += 1;
                    }
                    if start == j {
                        return Err(SchubertError::Parse);
                    }
                    let v: usize = s[start..j].parse().map_err(|_| SchubertError::Parse)?;
                    out.push(Tok::Sigma(v));
                    i = j;
                } else if rest.starts_with('h') {
                    out.push(Tok::H);
                    i += 1;
                } else {
                    return Err(SchubertError::Parse);
                }
            }
        }
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Tok>,
    pos: usize,
    ring: ChowRing,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.tokens.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<EvalResult, SchubertError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = add_vals(&self.ring, acc, rhs)?;
                }
                Some(Tok::Minus) => {
                    self.pos += 1;
                    let rhs = self.term()?;
                    acc = add_vals(&self.ring, acc, negate(rhs))?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<EvalResult, SchubertError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.pos += 1;
            let rhs = self.factor()?;
            acc = mul_vals(&self.ring, acc, rhs)?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<EvalResult, SchubertError> {
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.pos += 1;
            let Some(Tok::Num(e)) = self.next() else {
                return Err(SchubertError::Parse);
            };
            if e < 0 {
                return Err(SchubertError::Parse);
            }
            let mut acc = EvalResult::Integer(1);
            for _ in 0..e {
                acc = mul_vals(&self.ring, acc, base.clone())?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<EvalResult, SchubertError> {
        match self.next() {
            Some(Tok::Num(v)) => Ok(EvalResult::Integer(v)),
            Some(Tok::Sigma(i)) => Ok(EvalResult::Class(
                self.ring.special(i).map_err(|_| SchubertError::Parse)?,
            )),
            Some(Tok::H) => Ok(EvalResult::Class(
                self.ring.special(1).map_err(|_| SchubertError::Parse)?,
            )),
            Some(Tok::Minus) => {
                let v = self.atom()?;
                Ok(negate(v))
            }
            Some(Tok::LPar) => {
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RPar) => Ok(v),
                    _ => Err(SchubertError::Parse),
                }
            }
            Some(Tok::Integrate) => {
                match self.next() {
                    Some(Tok::LPar) => {}
                    _ => return Err(SchubertError::Parse),
                }
                let v = self.expr()?;
                match self.next() {
                    Some(Tok::RPar) => {}
                    _ => return Err(SchubertError::Parse),
                }
                match v {
                    EvalResult::Class(c) => Ok(EvalResult::Integer(integrate(&c))),
                    EvalResult::Integer(_) => Err(SchubertError::Parse),
                }
            }
            _ => Err(SchubertError::Parse),
        }
    }
}

fn negate(v: EvalResult) -> EvalResult {
    match v {
        EvalResult::Integer(x) => EvalResult::Integer(-x),
        EvalResult::Class(c) => EvalResult::Class(c.scale(-1)),
    }
}

fn add_vals(ring: &ChowRing, a: EvalResult, b: EvalResult) -> Result<EvalResult, SchubertError> {
    Ok(match (a, b) {
        (EvalResult::Integer(x), EvalResult::Integer(y)) => EvalResult::Integer(x + y),
        (EvalResult::Class(c), EvalResult::Integer(y)) => {
            EvalResult::Class(c.add(&ring.one().scale(y))?)
        }
        (EvalResult::Integer(x), EvalResult::Class(c)) => {
            EvalResult::Class(ring.one().scale(x).add(&c)?)
        }
        (EvalResult::Class(c), EvalResult::Class(d)) => EvalResult::Class(c.add(&d)?),
    })
}

fn mul_vals(ring: &ChowRing, a: EvalResult, b: EvalResult) -> Result<EvalResult, SchubertError> {
    let _ = ring;
    Ok(match (a, b) {
        (EvalResult::Integer(x), EvalResult::Integer(y)) => EvalResult::Integer(x * y),
        (EvalResult::Class(c), EvalResult::Integer(y)) => EvalResult::Class(c.scale(y)),
        (EvalResult::Integer(x), EvalResult::Class(c)) => EvalResult::Class(c.scale(x)),
        (EvalResult::Class(c), EvalResult::Class(d)) => EvalResult::Class(multiply(&c, &d)?),
    })
}

/// Render a class as "c1*sigma{p1} + …".
pub fn render_class(c: &SchubertClass) -> String {
    if c.is_zero() {
        return "0".to_string();
    }
    let mut parts = Vec::new();
    for (p, &coeff) in &c.coeffs {
        let base = match c.ring.flavor {
            RingFlavor::Projective { .. } => {
                let d = p.first().map_or(0, |&x| x as usize);
                match d {
                    0 => "1".to_string(),
                    1 => "h".to_string(),
                    _ => format!("h^{d}"),
                }
            }
            RingFlavor::Grassmannian { .. } => {
                if p.is_empty() {
                    "1".to_string()
                } else {
                    let idx: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                    format!("sigma({})", idx.join(","))
                }
            }
        };
        if coeff == 1 && base != "1" {
            parts.push(base);
        } else if base == "1" {
            parts.push(format!("{coeff}"));
        } else {
            parts.push(format!("{coeff}*{base}"));
        }
    }
    parts.join(" + ")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g36() -> ChowRing {
        ChowRing::grassmannian(3, 6)
    }

    #[test]
    fn pieri_basics() {
        let r = g36();
        let s1 = r.special(1).unwrap();
        // σ₁² = σ₂ + σ₁,₁
        let sq = multiply(&s1, &s1).unwrap();
        let expected = r.basis_class(&[2]).add(&r.basis_class(&[1, 1])).unwrap();
        assert_eq!(sq, expected);
        // σ₁ · point = 0 (box overflow)
        let top = r.point_class();
        assert!(pieri(&top, 1).unwrap().is_zero());
    }

    #[test]
    fn degree_of_g36_is_42() {
        let r = g36();
        let s1 = r.special(1).unwrap();
        let nine = pow(&s1, 9).unwrap();
        assert_eq!(integrate(&nine), 42);
    }

    #[test]
    fn giambelli_pieri_agreement_full_box() {
        let r = g36();
        // every basis class: its Giambelli determinant evaluated by Pieri
        // products equals the class itself
        let mut all = Vec::new();
        for a in 0..=3u8 {
            for b in 0..=a {
                for c in 0..=b {
                    let p = canon_partition(&[a, b, c]);
                    if !all.contains(&p) {
                        all.push(p);
                    }
                }
            }
        }
        for p in all {
            let direct = r.basis_class(&p);
            let mut acc = r.zero();
            for (sign, specials) in giambelli_products(&p, 3) {
                let mut term = r.one();
                let mut dead = false;
                for s in specials {
                    if s > 3 {
                        dead = true;
                        break;
                    }
                    term = pieri(&term, s).unwrap();
                }
                if !dead {
                    acc = acc.add(&term.scale(sign)).unwrap();
                }
            }
            assert_eq!(acc, direct, "partition {p:?}");
        }
    }

    #[test]
    fn poincare_pairing_nondegenerate() {
        let r = g36();
        // degree-d basis pairs with degree-(9−d): the pairing matrix is a
        // permutation (duality of complementary partitions)
        for d in 0..=4usize {
            let lower: Vec<Vec<u8>> = partitions_of_degree(d);
            let upper: Vec<Vec<u8>> = partitions_of_degree(9 - d);
            let mut m = Vec::new();
            for a in &lower {
                let ca = r.basis_class(a);
                let mut row = Vec::new();
                for b in &upper {
                    let cb = r.basis_class(b);
                    row.push(integrate(&multiply(&ca, &cb).unwrap()));
                }
                m.push(row);
            }
            // square and full rank
            assert_eq!(lower.len(), upper.len());
            let mm = crate::linalg::Matrix::from_rows(
                m.iter()
                    .map(|row| {
                        row.iter()
                            .map(|&v| crate::field::Rational::from_int(v))
                            .collect()
                    })
                    .collect(),
            );
            assert_eq!(mm.rank(), lower.len(), "degree {d}");
        }
    }

    fn partitions_of_degree(d: usize) -> Vec<Vec<u8>> {
        let mut out = Vec::new();
        for a in 0..=3u8 {
            for b in 0..=a {
                for c in 0..=b {
                    if (a + b + c) as usize == d {
                        out.push(canon_partition(&[a, b, c]));
                    }
                }
            }
        }
        out
    }

    #[test]
    fn segre_cone_class_degree() {
        let r = g36();
        // [C_{U₁}] = σ₂² − σ₁σ₃; σ₁⁵·[C] integrates to 6 (the Segre fourfold)
        let s1 = r.special(1).unwrap();
        let s2 = r.special(2).unwrap();
        let s3 = r.special(3).unwrap();
        let cone = multiply(&s2, &s2)
            .unwrap()
            .sub(&multiply(&s1, &s3).unwrap())
            .unwrap();
        let five = pow(&s1, 5).unwrap();
        let val = integrate(&multiply(&five, &cone).unwrap());
        // independent count: deg Segre(P²×P²) = binom(4, 2) = 6
        assert_eq!(val, 6);
    }

    #[test]
    fn tangent_chern_and_the_72() {
        let r = g36();
        let s1 = r.special(1).unwrap();
        let tg = chern_tangent(&r).unwrap();
        // c(T^∨) = c(Ω(1))·c(O(1)): twist the cotangent by σ₁
        let omega = tg.dual();
        let omega1 = chern_twisted(&omega, 9, &s1).unwrap();
        let o1 = {
            let mut t = TotalChern::one(&r, r.dimension());
            t.parts[1] = s1.clone();
            t
        };
        let tdual = omega1.mul(&o1).unwrap();
        // degree-1 part 4σ₁ and degree-2 part 8σ₁²
        assert_eq!(tdual.part(1), s1.scale(4));
        let s1sq = multiply(&s1, &s1).unwrap();
        assert_eq!(tdual.part(2), s1sq.scale(8));
        // degree-3 part: 8σ₁³ + 6σ₁σ₂ − 6σ₃
        let s2 = r.special(2).unwrap();
        let s3 = r.special(3).unwrap();
        let deg3 = pow(&s1, 3)
            .unwrap()
            .scale(8)
            .add(&multiply(&s1, &s2).unwrap().scale(6))
            .unwrap()
            .sub(&s3.scale(6))
            .unwrap();
        assert_eq!(tdual.part(3), deg3);
        // the second degeneracy class: c₁c₂ − 2c₃ = 16σ₁³ − 12σ₁σ₂ + 12σ₃
        let pr2 = pr_class(&tdual, 2).unwrap();
        let expected = pow(&s1, 3)
            .unwrap()
            .scale(16)
            .sub(&multiply(&s1, &s2).unwrap().scale(12))
            .unwrap()
            .add(&s3.scale(12))
            .unwrap();
        assert_eq!(pr2, expected);
        // deg D₂ = ∫ σ₁²·(σ₂²−σ₁σ₃)·pr₂ = 72
        let cone = multiply(&s2, &s2)
            .unwrap()
            .sub(&multiply(&s1, &s3).unwrap())
            .unwrap();
        let prod = multiply(&multiply(&pow(&s1, 2).unwrap(), &cone).unwrap(), &pr2).unwrap();
        assert_eq!(integrate(&prod), 72);
    }

    #[test]
    fn projective_family_classes() {
        // c(F₀⊕F₀) with c(F₀) = 1+2h+2h² on ℙ³: c₁ = 4h, c₁c₂−2c₃ = 16h³
        let r = ChowRing::projective(3);
        let h = r.special(1).unwrap();
        let f0 = {
            let mut t = TotalChern::one(&r, 3);
            t.parts[1] = h.scale(2);
            t.parts[2] = pow(&h, 2).unwrap().scale(2);
            t
        };
        let f = f0.mul(&f0).unwrap();
        assert_eq!(pr_class(&f, 1).unwrap(), h.scale(4));
        assert_eq!(pr_class(&f, 2).unwrap(), pow(&h, 3).unwrap().scale(16));
    }

    #[test]
    fn displayed_intermediate_is_dimensionally_inconsistent() {
        // 36σ₁²σ₂³σ₃ has codimension 2+6+3 = 11 ≠ 9 = dim G(3,6): the
        // honest degree-9 product integrates to 72 (verified above), so the
        // displayed intermediate is flagged rather than reproduced.
        assert_eq!(2 + 2 * 3 + 3, 11);
        assert_ne!(11, ChowRing::grassmannian(3, 6).dimension());
    }

    #[test]
    fn expression_parser() {
        let r = g36();
        let v = eval_expression(
            "integrate(sigma1^2*(sigma2^2-sigma1*sigma3)*(16*sigma1^3-12*sigma1*sigma2+12*sigma3))",
            &r,
        )
        .unwrap();
        assert_eq!(v, EvalResult::Integer(72));
        let v = eval_expression("integrate(sigma1^9)", &r).unwrap();
        assert_eq!(v, EvalResult::Integer(42));
        let p3 = ChowRing::projective(3);
        let v = eval_expression("integrate(h^3*16)", &p3).unwrap();
        assert_eq!(v, EvalResult::Integer(16));
        assert!(eval_expression("integrate(", &r).is_err());
        assert!(eval_expression("sigma9", &r).is_err());
    }
}


