//! Explicit field presentations `B[x]/(g)` over a prime field or over another
//! presentation, their automorphisms, subfields, norms and Hilbert 90.
//!
//! Elements are flat coordinate vectors over the prime field. For a
//! presentation of relative degree `r` over a base of prime-dimension `e`,
//! coordinate block `i` (of length `e`) holds the base coefficient of `x^i`.

use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{right_inverse, Algebra, Elem, Inverse, StructureConstants};
use crate::linalg::{LinearMap, Matrix, Subspace};
use crate::scalars::{count_vectors, vec_add_assign, vec_at, vec_is_zero, vec_scale, vec_sub, vec_zero, BigRat, PrimeField, Scalar, ScalarError};

/// Upper bound on candidate factors tried when verifying irreducibility.
pub const IRREDUCIBILITY_BUDGET: u128 = 1 << 22;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("modulus must have degree at least 1")]
    ConstantModulus,
    #[error("modulus is not monic")]
    NotMonic,
    #[error("modulus is reducible; monic factor {}", fmt_poly(.factor))]
    Reducible { factor: Vec<Elem> },
    #[error("cannot verify irreducibility: {0}")]
    Unverifiable(&'static str),
    #[error("operation needs a finite field")]
    Infinite,
    #[error("element has {got} coordinates, expected {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("zero has no inverse")]
    ZeroInverse,
    #[error("map is not a field automorphism (fails on basis pair {0}, {1})")]
    NotAutomorphism(usize, usize),
    #[error("generator image is not a root of the modulus")]
    NotARoot,
    #[error("element does not lie in the subfield")]
    NotInSubfield,
    #[error("subspace is not a subfield")]
    NotASubfield,
    #[error("automorphism does not preserve the subfield")]
    NotStable,
    #[error("tower levels are not nested")]
    NotNested,
    #[error("tower has no cyclic generator attached")]
    NotCyclic,
    #[error("norm of the element is not 1")]
    NormNotOne,
    #[error("no Hilbert 90 witness found (impossible over a finite cyclic extension)")]
    NoHilbertWitness,
}

fn fmt_poly(coeffs: &[Elem]) -> String {
    let mut s = String::from("[");
    for (i, c) in coeffs.iter().enumerate() {
        if i > 0 {
            s.push_str(", ");
        }
        if c.len() == 1 {
            s.push_str(&c[0].to_string());
        } else {
            s.push('[');
            for (j, x) in c.iter().enumerate() {
                if j > 0 {
                    s.push_str(", ");
                }
                s.push_str(&x.to_string());
            }
            s.push(']');
        }
    }
    s.push(']');
    s
}

#[derive(Debug, Clone)]
pub enum Base {
    Prime(PrimeField),
    Field(Arc<FieldPresentation>),
}

impl Base {
    pub fn prime_field(&self) -> &PrimeField {
        match self {
            Base::Prime(k) => k,
            Base::Field(f) => &f.prime,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Base::Prime(_) => 1,
            Base::Field(f) => f.dim(),
        }
    }

    fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
        match self {
            Base::Prime(k) => vec![k.mul(&a[0], &b[0])],
            Base::Field(f) => f.mul(a, b),
        }
    }

    fn one(&self) -> Elem {
        match self {
            Base::Prime(k) => vec![k.one()],
            Base::Field(f) => f.one(),
        }
    }

    fn size(&self) -> Option<u128> {
        count_vectors(self.prime_field(), self.dim())
    }
}

/// `base[x]/(modulus)` with a verified monic irreducible modulus.
#[derive(Debug, Clone)]
pub struct FieldPresentation {
    name: String,
    base: Base,
    prime: PrimeField,
    modulus: Vec<Elem>,
    degree: usize,
}

impl FieldPresentation {
    /// Builds and verifies a presentation. `modulus` lists base elements in
    /// ascending degree and must be monic.
    pub fn new(name: &str, base: Base, modulus: Vec<Elem>) -> Result<Arc<Self>, FieldError> {
        let pres = Self::unchecked(name, base, modulus)?;
        pres.verify_irreducible()?;
        Ok(Arc::new(pres))
    }

    fn unchecked(name: &str, base: Base, modulus: Vec<Elem>) -> Result<Self, FieldError> {
        let bd = base.dim();
        for c in &modulus {
            if c.len() != bd {
                return Err(FieldError::BadLength { expected: bd, got: c.len() });
            }
        }
        if modulus.len() < 2 {
            return Err(FieldError::ConstantModulus);
        }
        if *modulus.last().unwrap() != base.one() {
            return Err(FieldError::NotMonic);
        }
        Ok(FieldPresentation {
            name: name.to_string(),
            prime: base.prime_field().clone(),
            degree: modulus.len() - 1,
            base,
            modulus,
        })
    }

    /// `𝔽_p[x]/(modulus)`, coefficients ascending.
    pub fn finite(name: &str, p: u64, modulus: &[i64]) -> Result<Arc<Self>, FieldError> {
        let k = PrimeField::finite(p)?;
        let coeffs = modulus.iter().map(|&c| vec![k.from_i64(c)]).collect();
        Self::new(name, Base::Prime(k), coeffs)
    }

    /// `ℚ[x]/(modulus)`, coefficients ascending.
    pub fn number_field(name: &str, modulus: &[BigRat]) -> Result<Arc<Self>, FieldError> {
        let k = PrimeField::Rationals;
        let coeffs = modulus.iter().map(|c| vec![Scalar::Rat(alloc::boxed::Box::new(c.clone()))]).collect();
        Self::new(name, Base::Prime(k), coeffs)
    }

    /// The prime field itself as a degree-1 presentation `P[x]/(x)`.
    pub fn prime(name: &str, k: &PrimeField) -> Arc<Self> {
        let modulus = vec![vec![k.zero()], vec![k.one()]];
        Arc::new(Self::unchecked(name, Base::Prime(k.clone()), modulus).expect("x is monic"))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn base(&self) -> &Base {
        &self.base
    }

    pub fn modulus(&self) -> &[Elem] {
        &self.modulus
    }

    /// Degree over the immediate base.
    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_finite(&self) -> bool {
        self.prime.is_finite()
    }

    /// `|K|` for finite presentations.
    pub fn order(&self) -> Option<u128> {
        self.size()
    }

    fn block(&self) -> usize {
        self.base.dim()
    }

    pub fn check(&self, x: &[Scalar]) -> Result<(), FieldError> {
        if x.len() != self.dim() {
            return Err(FieldError::BadLength { expected: self.dim(), got: x.len() });
        }
        Ok(())
    }

    /// The class of `x`.
    pub fn generator(&self) -> Elem {
        let mut v = self.zero();
        if self.degree == 1 {
            // x ≡ -modulus_0
            let c = &self.modulus[0];
            for (i, s) in c.iter().enumerate() {
                v[i] = self.prime.neg(s);
            }
            return v;
        }
        let b = self.block();
        let one = self.base.one();
        v[b..2 * b].clone_from_slice(&one);
        v
    }

    pub fn embed_base(&self, a: &[Scalar]) -> Elem {
        let mut v = self.zero();
        v[..self.block()].clone_from_slice(a);
        v
    }

    pub fn from_prime(&self, s: &Scalar) -> Elem {
        vec_scale(&self.prime, s, &self.one())
    }

    pub fn inv(&self, a: &[Scalar]) -> Result<Elem, FieldError> {
        if self.is_zero(a) {
            return Err(FieldError::ZeroInverse);
        }
        match right_inverse(self, a) {
            Inverse::Unit(x) => Ok(x),
            Inverse::ZeroDivisor(_) => Err(FieldError::ZeroInverse),
        }
    }

    pub fn div(&self, a: &[Scalar], b: &[Scalar]) -> Result<Elem, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow_u(&self, a: &[Scalar], mut e: u64) -> Elem {
        let mut base = a.to_vec();
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    /// Evaluates a polynomial with base coefficients at `x ∈ K`.
    pub fn eval_base_poly(&self, coeffs: &[Elem], x: &[Scalar]) -> Elem {
        let mut acc = self.zero();
        for c in coeffs.iter().rev() {
            acc = self.mul(&acc, x);
            acc = self.add(&acc, &self.embed_base(c));
        }
        acc
    }

    /// Monic minimal polynomial of `a` over the prime field, ascending.
    pub fn min_poly(&self, a: &[Scalar]) -> Vec<Scalar> {
        let k = &self.prime;
        let mut powers = vec![self.one()];
        loop {
            let next = self.mul(powers.last().unwrap(), a);
            let m = Matrix::from_columns(k, self.dim(), &powers);
            if let Some(c) = m.solve(&next) {
                let mut poly: Vec<Scalar> = c.iter().map(|x| k.neg(x)).collect();
                poly.push(k.one());
                return poly;
            }
            powers.push(next);
        }
    }

    pub fn min_poly_degree(&self, a: &[Scalar]) -> usize {
        self.min_poly(a).len() - 1
    }

    fn verify_irreducible(&self) -> Result<(), FieldError> {
        if self.degree == 1 {
            return Ok(());
        }
        match &self.base {
            Base::Prime(PrimeField::Rationals) => {
                let coeffs: Vec<BigRat> = self.modulus.iter().map(|c| self.prime.to_rational(&c[0])).collect();
                match rational_factor(&coeffs)? {
                    None => Ok(()),
                    Some(f) => Err(FieldError::Reducible {
                        factor: f.into_iter().map(|c| vec![Scalar::Rat(alloc::boxed::Box::new(c))]).collect(),
                    }),
                }
            }
            Base::Field(b) if !b.is_finite() => {
                Err(FieldError::Unverifiable("relative extensions of number fields are not supported"))
            }
            base => {
                // Exhaustive search for a monic factor of degree ≤ r/2 over the finite base.
                let bsize = base.size().ok_or(FieldError::Infinite)?;
                let mut total: u128 = 0;
                for deg in 1..=self.degree / 2 {
                    let count = bsize.checked_pow(deg as u32).ok_or(FieldError::Unverifiable("search space too large"))?;
                    total = total.saturating_add(count);
                    if total > IRREDUCIBILITY_BUDGET {
                        return Err(FieldError::Unverifiable("search space too large"));
                    }
                    let bd = base.dim();
                    for idx in 0..count {
                        let flat = vec_at(&self.prime, bd * deg, idx);
                        let mut h: Vec<Elem> = flat.chunks(bd).map(|c| c.to_vec()).collect();
                        h.push(base.one());
                        if self.base_poly_rem_is_zero(&h) {
                            return Err(FieldError::Reducible { factor: h });
                        }
                    }
                }
                Ok(())
            }
        }
    }

    /// Whether the monic `h` divides the modulus in `base[x]`.
    fn base_poly_rem_is_zero(&self, h: &[Elem]) -> bool {
        let k = &self.prime;
        let mut r: Vec<Elem> = self.modulus.clone();
        let dh = h.len() - 1;
        while r.len() > dh {
            let lead = r.pop().unwrap();
            if vec_is_zero(k, &lead) {
                continue;
            }
            let shift = r.len() - dh;
            for (j, hj) in h[..dh].iter().enumerate() {
                let t = self.base.mul(&lead, hj);
                r[shift + j] = vec_sub(k, &r[shift + j], &t);
            }
        }
        r.iter().all(|c| vec_is_zero(k, c))
    }
}

impl Algebra for FieldPresentation {
    fn prime_field(&self) -> &PrimeField {
        &self.prime
    }

    fn dim(&self) -> usize {
        self.degree * self.block()
    }

    fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
        let k = &self.prime;
        let r = self.degree;
        if let Base::Prime(_) = self.base {
            let mut prod = vec_zero(k, 2 * r - 1);
            for (i, x) in a.iter().enumerate() {
                if k.is_zero(x) {
                    continue;
                }
                for (j, y) in b.iter().enumerate() {
                    if !k.is_zero(y) {
                        prod[i + j] = k.add(&prod[i + j], &k.mul(x, y));
                    }
                }
            }
            for t in (r..2 * r - 1).rev() {
                let c = prod[t].clone();
                if k.is_zero(&c) {
                    continue;
                }
                for j in 0..r {
                    let m = &self.modulus[j][0];
                    if !k.is_zero(m) {
                        prod[t - r + j] = k.sub(&prod[t - r + j], &k.mul(&c, m));
                    }
                }
            }
            prod.truncate(r);
            return prod;
        }
        let bd = self.block();
        let mut prod: Vec<Elem> = (0..2 * r - 1).map(|_| vec_zero(k, bd)).collect();
        for (i, x) in a.chunks(bd).enumerate() {
            if vec_is_zero(k, x) {
                continue;
            }
            for (j, y) in b.chunks(bd).enumerate() {
                if !vec_is_zero(k, y) {
                    vec_add_assign(k, &mut prod[i + j], &self.base.mul(x, y));
                }
            }
        }
        for t in (r..2 * r - 1).rev() {
            let c = prod[t].clone();
            if vec_is_zero(k, &c) {
                continue;
            }
            for j in 0..r {
                let s = self.base.mul(&c, &self.modulus[j]);
                prod[t - r + j] = vec_sub(k, &prod[t - r + j], &s);
            }
        }
        prod.truncate(r);
        prod.concat()
    }

    fn one(&self) -> Elem {
        let mut v = self.zero();
        v[..self.block()].clone_from_slice(&self.base.one());
        v
    }
}

impl fmt::Display for FieldPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = match &self.base {
            Base::Prime(PrimeField::Fp(p)) => alloc::format!("F{p}"),
            Base::Prime(PrimeField::Rationals) => "Q".to_string(),
            Base::Field(b) => b.name.clone(),
        };
        write!(f, "{} = {}[x]/({})", self.name, base, fmt_poly(&self.modulus))
    }
}

/// Searches for a nontrivial factor of a rational polynomial (ascending
/// coefficients). Rational roots first, then Kronecker interpolation for
/// higher-degree factors.
fn rational_factor(coeffs: &[BigRat]) -> Result<Option<Vec<BigRat>>, FieldError> {
    let p = integer_primitive(coeffs);
    let n = p.len() - 1;
    if let Some(root) = rational_root(&p) {
        return Ok(Some(vec![-root, BigRat::one()]));
    }
    let pq: Vec<BigRat> = p.iter().map(|c| BigRat::from_integer(c.clone())).collect();
    for k in 2..=n / 2 {
        // k + 1 interpolation nodes where p does not vanish (no rational roots here).
        let nodes: Vec<i64> = (0..=k as i64).map(|i| if i % 2 == 0 { -(i / 2) } else { i / 2 + 1 }).collect();
        let values: Vec<BigInt> = nodes.iter().map(|&a| eval_int(&p, &BigInt::from(a))).collect();
        let mut divisor_lists = Vec::new();
        let mut combos: u128 = 1;
        for v in &values {
            let v = v.abs().to_u64().ok_or(FieldError::Unverifiable("polynomial values too large for factor search"))?;
            let ds = divisors(v);
            combos = combos.saturating_mul(2 * ds.len() as u128);
            divisor_lists.push(ds);
        }
        if combos > IRREDUCIBILITY_BUDGET {
            return Err(FieldError::Unverifiable("factor search budget exceeded"));
        }
        let mut idx = vec![0usize; nodes.len()];
        'combos: loop {
            // The first node's value is taken positive: g and -g are both factors.
            let targets: Vec<BigRat> = idx
                .iter()
                .enumerate()
                .map(|(i, &c)| {
                    let list = &divisor_lists[i];
                    let d = BigInt::from(list[c % list.len()]);
                    let d = if c >= list.len() { -d } else { d };
                    BigRat::from_integer(d)
                })
                .collect();
            let g = lagrange(&nodes, &targets);
            if g.len() == k + 1 && g.iter().all(|c| c.is_integer()) && rat_poly_divides(&g, &pq) {
                let lead = g.last().unwrap().clone();
                return Ok(Some(g.into_iter().map(|c| c / &lead).collect()));
            }
            // next combination
            let mut pos = 0;
            loop {
                if pos == idx.len() {
                    break 'combos;
                }
                let limit = if pos == 0 { divisor_lists[0].len() } else { 2 * divisor_lists[pos].len() };
                idx[pos] += 1;
                if idx[pos] < limit {
                    break;
                }
                idx[pos] = 0;
                pos += 1;
            }
        }
    }
    Ok(None)
}

fn integer_primitive(coeffs: &[BigRat]) -> Vec<BigInt> {
    let l = coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs.iter().map(|c| (c * BigRat::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &g).collect()
}

fn eval_int(p: &[BigInt], a: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * a + c)
}

fn eval_rat(p: &[BigInt], a: &BigRat) -> BigRat {
    p.iter().rev().fold(BigRat::zero(), |acc, c| acc * a + BigRat::from_integer(c.clone()))
}

fn rational_root(p: &[BigInt]) -> Option<BigRat> {
    if p[0].is_zero() {
        return Some(BigRat::zero());
    }
    let a0 = p[0].abs().to_u64()?;
    let an = p.last().unwrap().abs().to_u64()?;
    for num in divisors(a0) {
        for den in divisors(an) {
            for sign in [1i64, -1] {
                let r = BigRat::new(BigInt::from(num) * sign, BigInt::from(den));
                if eval_rat(p, &r).is_zero() {
                    return Some(r);
                }
            }
        }
    }
    None
}

fn divisors(v: u64) -> Vec<u64> {
    if v == 0 {
        return vec![0];
    }
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= v {
        if v.is_multiple_of(d) {
            small.push(d);
            if d * d != v {
                large.push(v / d);
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

/// Interpolating polynomial through `(nodes[i], values[i])`, trimmed.
fn lagrange(nodes: &[i64], values: &[BigRat]) -> Vec<BigRat> {
    let n = nodes.len();
    let mut out = vec![BigRat::zero(); n];
    for i in 0..n {
        let mut basis = vec![BigRat::one()];
        let mut denom = BigRat::one();
        for j in 0..n {
            if i == j {
                continue;
            }
            let xj = BigRat::from_integer(BigInt::from(nodes[j]));
            let mut next = vec![BigRat::zero(); basis.len() + 1];
            for (d, c) in basis.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * &xj;
            }
            basis = next;
            denom *= BigRat::from_integer(BigInt::from(nodes[i] - nodes[j]));
        }
        let s = &values[i] / denom;
        for (d, c) in basis.iter().enumerate() {
            out[d] += c * &s;
        }
    }
    while out.len() > 1 && out.last().unwrap().is_zero() {
        out.pop();
    }
    out
}

fn rat_poly_divides(g: &[BigRat], p: &[BigRat]) -> bool {
    let mut r = p.to_vec();
    let dg = g.len() - 1;
    let lead = g.last().unwrap();
    while r.len() > dg {
        let c = r.pop().unwrap() / lead;
        let shift = r.len() - dg;
        for (j, gj) in g[..dg].iter().enumerate() {
            r[shift + j] -= &c * gj;
        }
    }
    r.iter().all(|c| c.is_zero())
}

/// A verified automorphism of a presentation, as a prime-linear map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldAutomorphism {
    map: LinearMap,
    order: usize,
}

impl FieldAutomorphism {
    pub fn identity(k: &FieldPresentation) -> Self {
        FieldAutomorphism { map: LinearMap::identity(&k.prime, k.dim()), order: 1 }
    }

    /// `x ↦ x^(p^e)`.
    pub fn frobenius(k: &FieldPresentation, e: usize) -> Result<Self, FieldError> {
        let p = k.prime.order().ok_or(FieldError::Infinite)?;
        let basis = k.basis();
        let images: Vec<_> = basis.iter().map(|b| k.pow_u(b, p)).collect();
        let phi = LinearMap::from_images(&k.prime, k.dim(), &images);
        Self::from_map(k, phi.pow(e))
    }

    /// The automorphism fixing the base and sending the generator to `image`.
    pub fn from_generator_image(k: &FieldPresentation, image: &[Scalar]) -> Result<Self, FieldError> {
        k.check(image)?;
        if !k.is_zero(&k.eval_base_poly(&k.modulus, image)) {
            return Err(FieldError::NotARoot);
        }
        let bd = k.block();
        let base_basis: Vec<Elem> = (0..bd).map(|j| crate::scalars::unit_vec(&k.prime, bd, j)).collect();
        let mut images = Vec::with_capacity(k.dim());
        let mut g_pow = k.one();
        for _ in 0..k.degree {
            for b in &base_basis {
                images.push(k.mul(&k.embed_base(b), &g_pow));
            }
            g_pow = k.mul(&g_pow, image);
        }
        Self::from_map(k, LinearMap::from_images(&k.prime, k.dim(), &images))
    }

    /// Verifies `map` is a bijective ring endomorphism of `k`.
    pub fn from_map(k: &FieldPresentation, map: LinearMap) -> Result<Self, FieldError> {
        let sc = StructureConstants::of(k);
        if let Some((i, j)) = sc.homomorphism_witness(&map) {
            return Err(FieldError::NotAutomorphism(i, j));
        }
        if !map.is_invertible() {
            return Err(FieldError::NotAutomorphism(0, 0));
        }
        let order = map.order(k.dim().max(1)).ok_or(FieldError::NotAutomorphism(0, 0))?;
        Ok(FieldAutomorphism { map, order })
    }

    pub fn map(&self) -> &LinearMap {
        &self.map
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn apply(&self, x: &[Scalar]) -> Elem {
        self.map.apply(x)
    }

    pub fn compose(&self, other: &FieldAutomorphism) -> FieldAutomorphism {
        let map = self.map.compose(&other.map);
        let order = map.order(self.order * other.order).expect("composite of finite-order automorphisms in an abelian setting");
        FieldAutomorphism { map, order }
    }

    pub fn pow(&self, e: usize) -> FieldAutomorphism {
        let map = self.map.pow(e % self.order);
        let order = self.order / gcd(self.order, e % self.order);
        FieldAutomorphism { map, order }
    }

    pub fn commutes_with(&self, other: &FieldAutomorphism) -> bool {
        self.map.commutes_with(&other.map)
    }

    /// Order of the restriction to a stable subfield.
    pub fn order_on(&self, f: &Subfield) -> Result<usize, FieldError> {
        if !self.preserves(f) {
            return Err(FieldError::NotStable);
        }
        for r in 1..=self.order {
            let m = self.map.pow(r);
            if f.space.basis().iter().all(|b| m.apply(b) == *b) {
                return Ok(r);
            }
        }
        unreachable!("σ^order = id")
    }

    pub fn preserves(&self, f: &Subfield) -> bool {
        f.space.basis().iter().all(|b| f.space.contains(&self.map.apply(b)))
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// A subfield of an ambient presentation, with its own prime-based
/// presentation and the embedding of that presentation.
#[derive(Debug, Clone)]
pub struct Subfield {
    ambient: Arc<FieldPresentation>,
    space: Subspace,
    generator: Elem,
    presentation: Arc<FieldPresentation>,
    embedding: Matrix,
}

impl Eq for Subfield {}

impl PartialEq for Subfield {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space
    }
}

impl Subfield {
    /// Wraps a subspace known to be a subfield of `ambient`.
    pub fn from_space(ambient: &Arc<FieldPresentation>, space: Subspace, name: &str) -> Result<Self, FieldError> {
        let k = ambient.prime_field().clone();
        if space.dim() == 0 || !space.contains(&ambient.one()) {
            return Err(FieldError::NotASubfield);
        }
        let generator = primitive_element(ambient, &space)?;
        let poly = ambient.min_poly(&generator);
        let presentation = Arc::new(
            FieldPresentation::unchecked(name, Base::Prime(k.clone()), poly.iter().map(|c| vec![c.clone()]).collect())
                .expect("minimal polynomial is monic"),
        );
        let mut cols = Vec::with_capacity(space.dim());
        let mut g = ambient.one();
        for _ in 0..space.dim() {
            cols.push(g.clone());
            g = ambient.mul(&g, &generator);
        }
        let embedding = Matrix::from_columns(&k, ambient.dim(), &cols);
        Ok(Subfield { ambient: ambient.clone(), space, generator, presentation, embedding })
    }

    pub fn whole(ambient: &Arc<FieldPresentation>) -> Self {
        let space = Subspace::whole(ambient.prime_field(), ambient.dim());
        Self::from_space(ambient, space, ambient.name()).expect("K is a subfield of itself")
    }

    /// The subfield generated by `x` over the prime field.
    pub fn generated_by(ambient: &Arc<FieldPresentation>, x: &[Scalar], name: &str) -> Self {
        let deg = ambient.min_poly_degree(x);
        let mut pows = vec![ambient.one()];
        for _ in 1..deg {
            pows.push(ambient.mul(pows.last().unwrap(), x));
        }
        let space = Subspace::span(ambient.prime_field(), ambient.dim(), &pows);
        Self::from_space(ambient, space, name).expect("powers of x span a subfield")
    }

    pub fn ambient(&self) -> &Arc<FieldPresentation> {
        &self.ambient
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn presentation(&self) -> &Arc<FieldPresentation> {
        &self.presentation
    }

    pub fn generator(&self) -> &Elem {
        &self.generator
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> usize {
        self.space.dim()
    }

    pub fn size(&self) -> Option<u128> {
        self.space.size()
    }

    pub fn contains(&self, x: &[Scalar]) -> bool {
        self.space.contains(x)
    }

    pub fn is_subfield_of(&self, other: &Subfield) -> bool {
        self.space.is_subspace_of(&other.space)
    }

    pub fn intersect(&self, other: &Subfield, name: &str) -> Subfield {
        Subfield::from_space(&self.ambient, self.space.intersect(&other.space), name).expect("intersection of subfields")
    }

    /// Image of a presentation element in the ambient field.
    pub fn embed(&self, x: &[Scalar]) -> Elem {
        self.embedding.mul_vec(x)
    }

    /// Presentation coordinates of an ambient element lying in the subfield.
    pub fn restrict(&self, x: &[Scalar]) -> Result<Elem, FieldError> {
        self.embedding.solve(x).ok_or(FieldError::NotInSubfield)
    }

    /// Ambient elements of the subfield in a fixed order (index 0 is zero).
    pub fn element_at(&self, idx: u128) -> Elem {
        self.space.element_at(idx)
    }

    pub fn nonzero_elements(&self) -> Result<impl Iterator<Item = Elem> + '_, FieldError> {
        let size = self.size().filter(|_| self.ambient.is_finite()).ok_or(FieldError::Infinite)?;
        Ok((1..size).map(move |i| self.element_at(i)))
    }
}

fn primitive_element(k: &FieldPresentation, space: &Subspace) -> Result<Elem, FieldError> {
    let d = space.dim();
    if d == 1 {
        return Ok(k.one());
    }
    if let Some(size) = space.size().filter(|_| k.is_finite()) {
        for i in 1..size {
            let x = space.element_at(i);
            if k.min_poly_degree(&x) == d {
                return Ok(x);
            }
        }
        return Err(FieldError::NotASubfield);
    }
    // Σ c^i b_i for c = 1, 2, …: all but finitely many c give a primitive element.
    let pf = k.prime_field();
    for c in 1..64i64 {
        let cs: Vec<Scalar> = (0..d).map(|i| pf.pow(&pf.from_i64(c), i as u64)).collect();
        let x = space.combine(&cs);
        if k.min_poly_degree(&x) == d {
            return Ok(x);
        }
    }
    Err(FieldError::NotASubfield)
}

/// `Fix(σ)` as a subfield with its presentation and embedding.
pub fn fixed_field(k: &Arc<FieldPresentation>, sigma: &FieldAutomorphism, name: &str) -> Subfield {
    Subfield::from_space(k, sigma.map().fixed_space(), name).expect("fixed points of an automorphism form a subfield")
}

/// Finds a primitive `m`-th root of unity in `f`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RootOfUnity {
    Found(Elem),
    Absent,
    /// Infinite field other than ℚ and `m > 2`.
    Unknown,
}

pub fn primitive_root_of_unity(f: &Subfield, m: u64) -> RootOfUnity {
    let k = &f.ambient;
    if m == 1 {
        return RootOfUnity::Found(k.one());
    }
    if !k.is_finite() {
        return match m {
            2 => RootOfUnity::Found(k.neg(&k.one())),
            _ if f.degree() == 1 => RootOfUnity::Absent,
            _ => RootOfUnity::Unknown,
        };
    }
    match crate::algebra::primitive_root_in(k.as_ref(), &f.space, m) {
        Some(w) => RootOfUnity::Found(w),
        None => RootOfUnity::Absent,
    }
}

/// Whether `f` contains a root of unity of order dividing `m` other than 1
/// (`None` when undecidable by enumeration).
pub fn has_nontrivial_root_of_unity(f: &Subfield, m: u64) -> Option<bool> {
    let k = &f.ambient;
    if !k.is_finite() {
        return if f.degree() == 1 { Some(m.is_multiple_of(2)) } else { None };
    }
    Some(crate::algebra::nontrivial_root_in(k.as_ref(), &f.space, m).is_some())
}

/// The smallest subfield containing `d`, when it is proper.
pub fn in_proper_subfield(k: &Arc<FieldPresentation>, d: &[Scalar]) -> Option<Subfield> {
    let deg = k.min_poly_degree(d);
    (deg < k.dim()).then(|| Subfield::generated_by(k, d, "subfield"))
}

/// A chain `levels[0] ⊆ levels[1] ⊆ …` of subfields of one ambient field,
/// optionally with a generator `σ` of the cyclic extension top/bottom.
#[derive(Debug, Clone)]
pub struct TowerPath {
    levels: Vec<Subfield>,
    sigma: Option<FieldAutomorphism>,
    sigma_order: usize,
}

impl TowerPath {
    pub fn new(levels: Vec<Subfield>) -> Result<Self, FieldError> {
        if levels.is_empty() || levels.windows(2).any(|w| !w[0].is_subfield_of(&w[1]) || !Arc::ptr_eq(&w[0].ambient, &w[1].ambient)) {
            return Err(FieldError::NotNested);
        }
        Ok(TowerPath { levels, sigma: None, sigma_order: 0 })
    }

    /// `top / (top ∩ Fix σ)`, cyclic with generator `σ|_top`.
    pub fn cyclic(top: Subfield, sigma: &FieldAutomorphism, bottom_name: &str) -> Result<Self, FieldError> {
        let order = sigma.order_on(&top)?;
        let bottom = Subfield::from_space(&top.ambient, top.space.intersect(&sigma.map().fixed_space()), bottom_name)?;
        debug_assert_eq!(bottom.degree() * order, top.degree());
        Ok(TowerPath { levels: vec![bottom, top], sigma: Some(sigma.clone()), sigma_order: order })
    }

    pub fn levels(&self) -> &[Subfield] {
        &self.levels
    }

    pub fn bottom(&self) -> &Subfield {
        &self.levels[0]
    }

    pub fn top(&self) -> &Subfield {
        self.levels.last().unwrap()
    }

    /// `[top : bottom]`.
    pub fn degree(&self) -> usize {
        self.top().degree() / self.bottom().degree()
    }

    pub fn sigma(&self) -> Option<&FieldAutomorphism> {
        self.sigma.as_ref()
    }

    fn generator(&self) -> Result<&FieldAutomorphism, FieldError> {
        self.sigma.as_ref().ok_or(FieldError::NotCyclic)
    }

    /// `x σ(x) ⋯ σ^{m-1}(x)`.
    pub fn norm(&self, x: &[Scalar]) -> Result<Elem, FieldError> {
        let s = self.generator()?;
        if !self.top().contains(x) {
            return Err(FieldError::NotInSubfield);
        }
        let k = &self.top().ambient;
        let mut acc = x.to_vec();
        let mut y = x.to_vec();
        for _ in 1..self.sigma_order {
            y = s.apply(&y);
            acc = k.mul(&acc, &y);
        }
        Ok(acc)
    }

    /// All `k` in the top field with norm 1.
    pub fn ker_norm_enumerate(&self) -> Result<Vec<Elem>, FieldError> {
        let k = self.top().ambient.clone();
        let one = k.one();
        let mut out = Vec::new();
        for x in self.top().nonzero_elements()? {
            if self.norm(&x)? == one {
                out.push(x);
            }
        }
        Ok(out)
    }

    /// Some `c ≠ 0` with `c^{-1} σ(c) = k`.
    pub fn hilbert90_solve(&self, kk: &[Scalar]) -> Result<Elem, FieldError> {
        let s = self.generator()?;
        let k = self.top().ambient.clone();
        if self.norm(kk)? != k.one() {
            return Err(FieldError::NormNotOne);
        }
        for c in self.top().nonzero_elements()? {
            // c^{-1}σ(c) = k  ⇔  σ(c) = k c
            if s.apply(&c) == k.mul(kk, &c) {
                return Ok(c);
            }
        }
        Err(FieldError::NoHilbertWitness)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f4() -> Arc<FieldPresentation> {
        FieldPresentation::finite("F4", 2, &[1, 1, 1]).unwrap()
    }

    fn f9() -> Arc<FieldPresentation> {
        FieldPresentation::finite("F9", 3, &[1, 0, 1]).unwrap()
    }

    fn el(k: &FieldPresentation, xs: &[i64]) -> Elem {
        xs.iter().map(|&x| k.prime_field().from_i64(x)).collect()
    }

    #[test]
    fn f4_generator_relation() {
        let k = f4();
        let a = k.generator();
        // α² = α + 1
        assert_eq!(k.mul(&a, &a), k.add(&a, &k.one()));
        assert_eq!(k.order(), Some(4));
    }

    #[test]
    fn f9_builds() {
        assert_eq!(f9().order(), Some(9));
    }

    #[test]
    fn reducible_modulus_reports_factor() {
        let err = FieldPresentation::finite("bad", 2, &[1, 0, 1]).unwrap_err();
        let k = PrimeField::Fp(2);
        assert_eq!(err, FieldError::Reducible { factor: vec![vec![k.one()], vec![k.one()]] });
        assert!(matches!(FieldPresentation::finite("bad", 4, &[1, 1, 1]), Err(FieldError::Scalar(ScalarError::NotPrime(4)))));
        assert_eq!(FieldPresentation::finite("bad", 2, &[1, 1, 0]).unwrap_err(), FieldError::NotMonic);
    }

    #[test]
    fn number_field_irreducibility() {
        let q = |v: i64| BigRat::from_integer(BigInt::from(v));
        assert!(FieldPresentation::number_field("Qi", &[q(1), q(0), q(1)]).is_ok());
        assert!(matches!(FieldPresentation::number_field("bad", &[q(-4), q(0), q(1)]), Err(FieldError::Reducible { .. })));
        // x^4 + 4 = (x² + 2x + 2)(x² − 2x + 2): no rational roots, needs the quadratic search.
        let err = FieldPresentation::number_field("bad", &[q(4), q(0), q(0), q(0), q(1)]).unwrap_err();
        assert!(matches!(err, FieldError::Reducible { .. }), "{err:?}");
        // x^4 − 2 is irreducible (Eisenstein).
        assert!(FieldPresentation::number_field("Q2", &[q(-2), q(0), q(0), q(0), q(1)]).is_ok());
    }

    #[test]
    fn frobenius_orders() {
        let k = f4();
        let s = FieldAutomorphism::frobenius(&k, 1).unwrap();
        assert_eq!(s.order(), 2);
        let a = k.generator();
        assert_eq!(s.apply(&a), k.mul(&a, &a));
        assert_eq!(FieldAutomorphism::frobenius(&f9(), 1).unwrap().order(), 2);
        let f64 = FieldPresentation::finite("F64", 2, &[1, 1, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(FieldAutomorphism::frobenius(&f64, 2).unwrap().order(), 3);
    }

    #[test]
    fn frobenius_needs_finite_field() {
        let q = |v: i64| BigRat::from_integer(BigInt::from(v));
        let k = FieldPresentation::number_field("Qi", &[q(1), q(0), q(1)]).unwrap();
        assert_eq!(FieldAutomorphism::frobenius(&k, 1).unwrap_err(), FieldError::Infinite);
        let conj = FieldAutomorphism::from_generator_image(&k, &el(&k, &[0, -1])).unwrap();
        assert_eq!(conj.order(), 2);
        assert_eq!(fixed_field(&k, &conj, "Q").degree(), 1);
    }

    #[test]
    fn generator_image_must_be_root() {
        let k = f4();
        assert_eq!(FieldAutomorphism::from_generator_image(&k, &el(&k, &[1, 0])).unwrap_err(), FieldError::NotARoot);
        let s = FieldAutomorphism::from_generator_image(&k, &el(&k, &[1, 1])).unwrap();
        assert_eq!(s, FieldAutomorphism::frobenius(&k, 1).unwrap());
    }

    #[test]
    fn fixed_fields() {
        let k = f4();
        let s = FieldAutomorphism::frobenius(&k, 1).unwrap();
        assert_eq!(fixed_field(&k, &s, "F2").degree(), 1);
        assert_eq!(fixed_field(&k, &FieldAutomorphism::identity(&k), "K").degree(), 2);
        let f64 = FieldPresentation::finite("F64", 2, &[1, 1, 0, 0, 0, 0, 1]).unwrap();
        let fix = fixed_field(&f64, &FieldAutomorphism::frobenius(&f64, 2).unwrap(), "F4");
        assert_eq!(fix.degree(), 2);
        assert_eq!(fix.presentation().degree(), 2);
        let g = fix.generator().clone();
        assert_eq!(fix.embed(&fix.restrict(&g).unwrap()), g);
    }

    #[test]
    fn relative_presentation_over_f4() {
        // F16 = F4[y]/(y² + y + α)
        let k = f4();
        let a = k.generator();
        let one = k.one();
        let f16 = FieldPresentation::new("F16", Base::Field(k.clone()), vec![a.clone(), one.clone(), one.clone()]).unwrap();
        assert_eq!(f16.dim(), 4);
        assert_eq!(f16.order(), Some(16));
        let y = f16.generator();
        // y² = y + α in char 2
        assert_eq!(f16.mul(&y, &y), f16.add(&y, &f16.embed_base(&a)));
        let frob = FieldAutomorphism::frobenius(&f16, 1).unwrap();
        assert_eq!(frob.order(), 4);
        // y² + y + 1 over F4 is reducible (roots α, α²)
        assert!(matches!(
            FieldPresentation::new("bad", Base::Field(k.clone()), vec![one.clone(), one.clone(), one]),
            Err(FieldError::Reducible { .. })
        ));
    }

    #[test]
    fn norms_and_kernels() {
        let k = f4();
        let s = FieldAutomorphism::frobenius(&k, 1).unwrap();
        let t = TowerPath::cyclic(Subfield::whole(&k), &s, "F2").unwrap();
        let a = k.generator();
        assert_eq!(t.norm(&a).unwrap(), k.one());
        assert_eq!(t.norm(&k.zero()).unwrap(), k.zero());
        let ker = t.ker_norm_enumerate().unwrap();
        assert_eq!(ker.len(), 3);
        assert_eq!(t.hilbert90_solve(&a).unwrap(), a);
        assert_eq!(t.hilbert90_solve(&k.one()).unwrap(), k.one());

        let k9 = f9();
        let s9 = FieldAutomorphism::frobenius(&k9, 1).unwrap();
        let t9 = TowerPath::cyclic(Subfield::whole(&k9), &s9, "F3").unwrap();
        assert_eq!(t9.ker_norm_enumerate().unwrap().len(), 4);
        // x = 1 + i generates F9^× (order 8); its norm is x^4 = −1.
        let g = el(&k9, &[1, 1]);
        assert_eq!(k9.pow_u(&g, 4), k9.neg(&k9.one()));
        assert_eq!(t9.norm(&g).unwrap(), k9.neg(&k9.one()));
        let minus_one = k9.neg(&k9.one());
        let c = t9.hilbert90_solve(&minus_one).unwrap();
        assert_eq!(k9.mul(&c, &c), minus_one);
        assert_eq!(t9.hilbert90_solve(&g).unwrap_err(), FieldError::NormNotOne);
    }

    #[test]
    fn degenerate_tower() {
        let f2 = FieldPresentation::prime("F2", &PrimeField::Fp(2));
        let t = TowerPath::cyclic(Subfield::whole(&f2), &FieldAutomorphism::identity(&f2), "F2").unwrap();
        assert_eq!(t.ker_norm_enumerate().unwrap(), vec![f2.one()]);
    }

    #[test]
    fn roots_of_unity() {
        let k = f4();
        let w = primitive_root_of_unity(&Subfield::whole(&k), 3);
        assert_eq!(w, RootOfUnity::Found(k.generator()));
        let f2 = FieldPresentation::prime("F2", &PrimeField::Fp(2));
        assert_eq!(primitive_root_of_unity(&Subfield::whole(&f2), 2), RootOfUnity::Absent);
        let f3 = FieldPresentation::prime("F3", &PrimeField::Fp(3));
        assert_eq!(primitive_root_of_unity(&Subfield::whole(&f3), 2), RootOfUnity::Found(vec![Scalar::Mod(2)]));
        let q = FieldPresentation::prime("Q", &PrimeField::Rationals);
        assert!(matches!(primitive_root_of_unity(&Subfield::whole(&q), 2), RootOfUnity::Found(_)));
        assert_eq!(primitive_root_of_unity(&Subfield::whole(&q), 3), RootOfUnity::Absent);
    }

    #[test]
    fn proper_subfields() {
        let k = f4();
        assert!(in_proper_subfield(&k, &k.generator()).is_none());
        let w = in_proper_subfield(&k, &k.one()).unwrap();
        assert_eq!(w.degree(), 1);
        let f64 = FieldPresentation::finite("F64", 2, &[1, 1, 0, 0, 0, 0, 1]).unwrap();
        // x^21 has multiplicative order 3, so it lies in F4.
        let x = f64.pow_u(&f64.generator(), 21);
        assert_eq!(in_proper_subfield(&f64, &x).unwrap().degree(), 2);
    }
}
