//! Twisted polynomials `D[t;σ]` with `t·a = σ(a)·t`, right division, and
//! irreducibility tests for binomials `t^m − d`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{primitive_root_in, two_sided_inverse, Algebra, Elem, Inverse, StructureConstants};
use crate::linalg::{LinearMap, Subspace};
use crate::scalars::{is_prime, vec_at, vec_is_zero, PrimeField, Scalar};

/// Default cap on enumerated candidates (factors, pairs, elements).
pub const DEFAULT_MAX_ENUM: u128 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SkewError {
    #[error("sigma is not an automorphism of the coefficient ring (basis pair {0}, {1})")]
    NotAutomorphism(usize, usize),
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("leading coefficient is not invertible")]
    NonInvertibleLead { witness: Elem },
    #[error("polynomial is not of the form t^m - d")]
    NotBinomial,
    #[error("enumeration budget exceeded ({needed} candidates, limit {limit})")]
    Budget { needed: u128, limit: u128 },
    #[error("coefficient ring is infinite; enumeration unavailable")]
    Infinite,
}

/// An element of `D[t;σ]`, coefficients ascending, trailing zeros stripped.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SkewPoly {
    coeffs: Vec<Elem>,
}

impl SkewPoly {
    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn lead(&self) -> Option<&Elem> {
        self.coeffs.last()
    }

    /// Coefficient of `t^i` (`None` beyond the degree).
    pub fn coeff(&self, i: usize) -> Option<&Elem> {
        self.coeffs.get(i)
    }
}

#[derive(Clone)]
pub struct SkewPolyRing {
    coeff: Arc<dyn Algebra>,
    sigma: LinearMap,
    sigma_pows: Vec<LinearMap>,
    sigma_order: Option<usize>,
}

impl core::fmt::Debug for SkewPolyRing {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("SkewPolyRing").field("dim", &self.coeff.dim()).field("sigma_order", &self.sigma_order).finish()
    }
}

/// Cap on the order of σ we look for when caching its powers.
const SIGMA_ORDER_CAP: usize = 256;

impl SkewPolyRing {
    pub fn new(coeff: Arc<dyn Algebra>, sigma: LinearMap) -> Result<Self, SkewError> {
        let sc = StructureConstants::of(coeff.as_ref());
        if let Some((i, j)) = sc.homomorphism_witness(&sigma) {
            return Err(SkewError::NotAutomorphism(i, j));
        }
        if !sigma.is_invertible() {
            return Err(SkewError::NotAutomorphism(0, 0));
        }
        let sigma_order = sigma.order(SIGMA_ORDER_CAP);
        let count = sigma_order.unwrap_or(1);
        let mut sigma_pows = Vec::with_capacity(count);
        let mut p = LinearMap::identity(coeff.prime_field(), coeff.dim());
        for _ in 0..count {
            sigma_pows.push(p.clone());
            p = sigma.compose(&p);
        }
        Ok(SkewPolyRing { coeff, sigma, sigma_pows, sigma_order })
    }

    pub fn coeff_ring(&self) -> &Arc<dyn Algebra> {
        &self.coeff
    }

    pub fn sigma(&self) -> &LinearMap {
        &self.sigma
    }

    pub fn sigma_order(&self) -> Option<usize> {
        self.sigma_order
    }

    pub fn prime_field(&self) -> &PrimeField {
        self.coeff.prime_field()
    }

    /// `σ^i(a)`.
    pub fn sigma_pow(&self, i: usize, a: &[Scalar]) -> Elem {
        match self.sigma_order {
            Some(o) => self.sigma_pows[i % o].apply(a),
            None => self.sigma.pow(i).apply(a),
        }
    }

    pub fn poly(&self, mut coeffs: Vec<Elem>) -> SkewPoly {
        let k = self.prime_field();
        while coeffs.last().is_some_and(|c| vec_is_zero(k, c)) {
            coeffs.pop();
        }
        SkewPoly { coeffs }
    }

    pub fn zero(&self) -> SkewPoly {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn constant(&self, a: &[Scalar]) -> SkewPoly {
        self.poly(vec![a.to_vec()])
    }

    pub fn one(&self) -> SkewPoly {
        self.constant(&self.coeff.one())
    }

    /// `a·t^i`.
    pub fn monomial(&self, a: &[Scalar], i: usize) -> SkewPoly {
        let mut coeffs = vec![self.coeff.zero(); i];
        coeffs.push(a.to_vec());
        self.poly(coeffs)
    }

    pub fn t(&self) -> SkewPoly {
        self.monomial(&self.coeff.one(), 1)
    }

    /// `t^m − d`.
    pub fn binomial(&self, m: usize, d: &[Scalar]) -> SkewPoly {
        let mut coeffs = vec![self.coeff.zero(); m + 1];
        coeffs[0] = self.coeff.neg(d);
        coeffs[m] = self.coeff.one();
        self.poly(coeffs)
    }

    /// `(m, d)` when `f = t^m − d`.
    pub fn binomial_parts(&self, f: &SkewPoly) -> Option<(usize, Elem)> {
        let m = f.degree()?;
        if m == 0 || *f.lead()? != self.coeff.one() || f.coeffs[1..m].iter().any(|c| !self.coeff.is_zero(c)) {
            return None;
        }
        Some((m, self.coeff.neg(&f.coeffs[0])))
    }

    pub fn add(&self, g: &SkewPoly, h: &SkewPoly) -> SkewPoly {
        let n = g.coeffs.len().max(h.coeffs.len());
        let z = self.coeff.zero();
        let coeffs = (0..n)
            .map(|i| self.coeff.add(g.coeffs.get(i).unwrap_or(&z), h.coeffs.get(i).unwrap_or(&z)))
            .collect();
        self.poly(coeffs)
    }

    pub fn neg(&self, g: &SkewPoly) -> SkewPoly {
        SkewPoly { coeffs: g.coeffs.iter().map(|c| self.coeff.neg(c)).collect() }
    }

    pub fn sub(&self, g: &SkewPoly, h: &SkewPoly) -> SkewPoly {
        self.add(g, &self.neg(h))
    }

    /// `(Σ a_i t^i)(Σ b_j t^j) = Σ a_i σ^i(b_j) t^{i+j}`.
    pub fn mul(&self, g: &SkewPoly, h: &SkewPoly) -> SkewPoly {
        if g.is_zero() || h.is_zero() {
            return self.zero();
        }
        let mut out = vec![self.coeff.zero(); g.coeffs.len() + h.coeffs.len() - 1];
        for (i, a) in g.coeffs.iter().enumerate() {
            if self.coeff.is_zero(a) {
                continue;
            }
            for (j, b) in h.coeffs.iter().enumerate() {
                if self.coeff.is_zero(b) {
                    continue;
                }
                let p = self.coeff.mul(a, &self.sigma_pow(i, b));
                out[i + j] = self.coeff.add(&out[i + j], &p);
            }
        }
        self.poly(out)
    }

    /// `(q, r)` with `g = q·f + r` and `deg r < deg f`.
    pub fn right_divmod(&self, g: &SkewPoly, f: &SkewPoly) -> Result<(SkewPoly, SkewPoly), SkewError> {
        let m = f.degree().ok_or(SkewError::DivisionByZero)?;
        let lead = f.lead().unwrap();
        let mut inv_cache: Vec<Option<Elem>> = vec![None; self.sigma_order.unwrap_or(0)];
        let mut lead_inv = |shift: usize| -> Result<Elem, SkewError> {
            let key = self.sigma_order.map(|o| shift % o);
            if let Some(Some(v)) = key.map(|k| &inv_cache[k]) {
                return Ok(v.clone());
            }
            let v = match two_sided_inverse(self.coeff.as_ref(), &self.sigma_pow(shift, lead)) {
                Inverse::Unit(v) => v,
                Inverse::ZeroDivisor(w) => return Err(SkewError::NonInvertibleLead { witness: w }),
            };
            if let Some(k) = key {
                inv_cache[k] = Some(v.clone());
            }
            Ok(v)
        };
        let mut r = g.coeffs.clone();
        let mut q = vec![self.coeff.zero(); r.len().saturating_sub(m)];
        while r.len() > m {
            let k = r.len() - 1;
            let rk = r.pop().unwrap();
            if self.coeff.is_zero(&rk) {
                continue;
            }
            // b t^{k-m} · f has leading term b σ^{k-m}(lead) t^k
            let b = self.coeff.mul(&rk, &lead_inv(k - m)?);
            for (j, fj) in f.coeffs[..m].iter().enumerate() {
                let p = self.coeff.mul(&b, &self.sigma_pow(k - m, fj));
                r[k - m + j] = self.coeff.sub(&r[k - m + j], &p);
            }
            q[k - m] = b;
        }
        Ok((self.poly(q), self.poly(r)))
    }

    pub fn rem(&self, g: &SkewPoly, f: &SkewPoly) -> Result<SkewPoly, SkewError> {
        Ok(self.right_divmod(g, f)?.1)
    }

    /// First violating product `f·b` (b a basis element of `D`, then `t`)
    /// whose remainder mod_r `f` is nonzero.
    pub fn is_right_invariant(&self, f: &SkewPoly) -> Result<Option<InvarianceWitness>, SkewError> {
        let mut probes: Vec<SkewPoly> = self.coeff.basis().iter().map(|b| self.constant(b)).collect();
        probes.push(self.t());
        for p in probes {
            let product = self.mul(f, &p);
            let remainder = self.rem(&product, f)?;
            if !remainder.is_zero() {
                return Ok(Some(InvarianceWitness { multiplier: p, product, remainder }));
            }
        }
        Ok(None)
    }

    /// `Fix(σ) ∩ C(D)`, as a subspace of `D`.
    pub fn fixed_center(&self) -> Subspace {
        StructureConstants::of(self.coeff.as_ref()).center().intersect(&self.sigma.fixed_space())
    }

    /// `σ^{m-1}(z) ⋯ σ(z) z`.
    pub fn twisted_norm(&self, m: usize, z: &[Scalar]) -> Elem {
        let mut acc = z.to_vec();
        for i in 1..m {
            acc = self.coeff.mul(&self.sigma_pow(i, z), &acc);
        }
        acc
    }

    fn elements(&self, limit: u128) -> Result<u128, SkewError> {
        let size = self.coeff.size().filter(|_| self.prime_field().is_finite()).ok_or(SkewError::Infinite)?;
        if size > limit {
            return Err(SkewError::Budget { needed: size, limit });
        }
        Ok(size)
    }

    /// Degree-specific criteria for `f = t^m − d`.
    pub fn irreducible_criterion(&self, f: &SkewPoly, limit: u128) -> Result<Criterion, SkewError> {
        let (m, d) = self.binomial_parts(f).ok_or(SkewError::NotBinomial)?;
        let method = match m {
            1 => return Ok(Criterion::new("degree-1", CriterionVerdict::Irreducible)),
            2 => "degree-2",
            3 => "degree-3",
            4 => "degree-4",
            _ if is_prime(m as u64) => "prime-degree",
            _ => return Ok(Criterion::new("none", CriterionVerdict::Inapplicable("no criterion for this degree"))),
        };
        let size = self.elements(limit)?;
        if m == 4 {
            let pairs = size.saturating_mul(size);
            if pairs > limit {
                return Err(SkewError::Budget { needed: pairs, limit });
            }
            for xi in 0..size {
                let x = self.coeff.element_at(xi);
                let s2x = self.sigma_pow(2, &x);
                let s1x = self.sigma_pow(1, &x);
                let s2x_x = self.coeff.mul(&s2x, &x);
                for yi in 0..size {
                    let y = self.coeff.element_at(yi);
                    let s2y = self.sigma_pow(2, &y);
                    let s2y_s1y = self.coeff.mul(&s2y, &self.sigma_pow(1, &y));
                    let c1 = self.coeff.add(
                        &self.coeff.add(&self.coeff.mul(&s2y_s1y, &y), &self.coeff.mul(&s2x, &y)),
                        &self.coeff.mul(&s2y, &s1x),
                    );
                    if !self.coeff.is_zero(&c1) {
                        continue;
                    }
                    let c2 = self.coeff.add(&s2x_x, &self.coeff.mul(&s2y_s1y, &x));
                    if c2 == d {
                        return Ok(Criterion::new(method, CriterionVerdict::Reducible(CriterionWitness::Pair { x, y })));
                    }
                }
            }
            return Ok(Criterion::new(method, CriterionVerdict::Irreducible));
        }
        if m > 3 {
            let space = self.fixed_center();
            if primitive_root_in(self.coeff.as_ref(), &space, m as u64).is_none() {
                return Ok(Criterion::new(method, CriterionVerdict::Inapplicable("F0 has no primitive m-th root of unity")));
            }
        }
        for zi in 0..size {
            let z = self.coeff.element_at(zi);
            if self.twisted_norm(m, &z) == d {
                return Ok(Criterion::new(method, CriterionVerdict::Reducible(CriterionWitness::Norm { z })));
            }
        }
        Ok(Criterion::new(method, CriterionVerdict::Irreducible))
    }

    /// Searches monic right factors of degree `1..deg f` in enumeration order.
    /// Returns `Some((g, h))` with `f = g·h` or `None` when there is none.
    pub fn irreducible_exhaustive(&self, f: &SkewPoly, limit: u128) -> Result<Option<(SkewPoly, SkewPoly)>, SkewError> {
        let m = f.degree().ok_or(SkewError::DivisionByZero)?;
        if m <= 1 {
            return Ok(None);
        }
        let size = self.elements(limit)?;
        let mut total: u128 = 0;
        for deg in 1..m {
            total = size.checked_pow(deg as u32).and_then(|c| total.checked_add(c)).unwrap_or(u128::MAX);
            if total > limit {
                return Err(SkewError::Budget { needed: total, limit });
            }
        }
        let dim = self.coeff.dim();
        let k = self.prime_field();
        for deg in 1..m {
            let count = size.pow(deg as u32);
            for idx in 0..count {
                let flat = vec_at(k, dim * deg, idx);
                let mut coeffs: Vec<Elem> = flat.chunks(dim).map(|c| c.to_vec()).collect();
                coeffs.push(self.coeff.one());
                let h = self.poly(coeffs);
                let (g, r) = self.right_divmod(f, &h)?;
                if r.is_zero() {
                    return Ok(Some((g, h)));
                }
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceWitness {
    pub multiplier: SkewPoly,
    pub product: SkewPoly,
    pub remainder: SkewPoly,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriterionWitness {
    /// `σ^{m-1}(z)⋯σ(z)z = d`.
    Norm { z: Elem },
    /// Both degree-4 clauses fail at `(x, y)`.
    Pair { x: Elem, y: Elem },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CriterionVerdict {
    Irreducible,
    Reducible(CriterionWitness),
    Inapplicable(&'static str),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Criterion {
    pub method: &'static str,
    pub verdict: CriterionVerdict,
}

impl Criterion {
    fn new(method: &'static str, verdict: CriterionVerdict) -> Self {
        Criterion { method, verdict }
    }

    /// `Some(true)` for irreducible, `None` when inapplicable.
    pub fn irreducible(&self) -> Option<bool> {
        match self.verdict {
            CriterionVerdict::Irreducible => Some(true),
            CriterionVerdict::Reducible(_) => Some(false),
            CriterionVerdict::Inapplicable(_) => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldAutomorphism, FieldPresentation};

    fn f4_ring() -> (Arc<FieldPresentation>, SkewPolyRing) {
        let k = FieldPresentation::finite("F4", 2, &[1, 1, 1]).unwrap();
        let s = FieldAutomorphism::frobenius(&k, 1).unwrap();
        let r = SkewPolyRing::new(k.clone(), s.map().clone()).unwrap();
        (k, r)
    }

    #[test]
    fn twist_rule() {
        let (k, r) = f4_ring();
        let a = k.generator();
        let ta = r.mul(&r.t(), &r.constant(&a));
        assert_eq!(ta, r.monomial(&k.mul(&a, &a), 1));
    }

    #[test]
    fn product_example() {
        // (αt + 1)(t + α) = αt² + α
        let (k, r) = f4_ring();
        let a = k.generator();
        let g = r.poly(vec![k.one(), a.clone()]);
        let h = r.poly(vec![a.clone(), k.one()]);
        assert_eq!(r.mul(&g, &h), r.poly(vec![a.clone(), k.zero(), a]));
        assert_eq!(r.mul(&r.one(), &g), g);
    }

    #[test]
    fn division_examples() {
        let (k, r) = f4_ring();
        let a = k.generator();
        let f = r.binomial(2, &a);
        let t2 = r.monomial(&k.one(), 2);
        assert_eq!(r.right_divmod(&t2, &f).unwrap(), (r.one(), r.constant(&a)));
        let t3 = r.monomial(&k.one(), 3);
        assert_eq!(r.right_divmod(&t3, &f).unwrap(), (r.t(), r.monomial(&k.mul(&a, &a), 1)));
        assert_eq!(r.right_divmod(&r.t(), &f).unwrap(), (r.zero(), r.t()));
        assert_eq!(r.right_divmod(&t3, &r.zero()).unwrap_err(), SkewError::DivisionByZero);
    }

    #[test]
    fn right_invariance() {
        let (k, r) = f4_ring();
        let a = k.generator();
        assert_eq!(r.is_right_invariant(&r.binomial(2, &k.one())).unwrap(), None);
        assert_eq!(r.is_right_invariant(&r.t()).unwrap(), None);
        let w = r.is_right_invariant(&r.binomial(2, &a)).unwrap().unwrap();
        assert!(!w.remainder.is_zero());
    }

    #[test]
    fn degree_two_criterion() {
        let (k, r) = f4_ring();
        let a = k.generator();
        let c = r.irreducible_criterion(&r.binomial(2, &a), DEFAULT_MAX_ENUM).unwrap();
        assert_eq!(c.verdict, CriterionVerdict::Irreducible);
        let c = r.irreducible_criterion(&r.binomial(2, &k.one()), DEFAULT_MAX_ENUM).unwrap();
        assert_eq!(c.verdict, CriterionVerdict::Reducible(CriterionWitness::Norm { z: k.one() }));
        assert_eq!(r.irreducible_exhaustive(&r.binomial(2, &a), DEFAULT_MAX_ENUM).unwrap(), None);
        let (g, h) = r.irreducible_exhaustive(&r.binomial(2, &k.one()), DEFAULT_MAX_ENUM).unwrap().unwrap();
        assert_eq!(r.mul(&g, &h), r.binomial(2, &k.one()));
        assert_eq!(r.irreducible_exhaustive(&r.t(), DEFAULT_MAX_ENUM).unwrap(), None);
    }

    #[test]
    fn f9_criterion() {
        let k = FieldPresentation::finite("F9", 3, &[1, 0, 1]).unwrap();
        let s = FieldAutomorphism::frobenius(&k, 1).unwrap();
        let r = SkewPolyRing::new(k.clone(), s.map().clone()).unwrap();
        let d = k.generator();
        let f = r.binomial(2, &d);
        assert_eq!(r.irreducible_criterion(&f, DEFAULT_MAX_ENUM).unwrap().irreducible(), Some(true));
        assert_eq!(r.irreducible_exhaustive(&f, DEFAULT_MAX_ENUM).unwrap(), None);
    }

    #[test]
    fn degree_four_clauses_match_factor_search() {
        for (p, modulus, e) in [(2u64, &[1i64, 1, 1][..], 1usize), (2, &[1, 1, 0, 0, 1][..], 1), (3, &[1, 0, 1][..], 1)] {
            let k = FieldPresentation::finite("K", p, modulus).unwrap();
            let s = FieldAutomorphism::frobenius(&k, e).unwrap();
            let r = SkewPolyRing::new(k.clone(), s.map().clone()).unwrap();
            for idx in 0..k.size().unwrap() {
                let d = k.element_at(idx);
                let f = r.binomial(4, &d);
                let crit = r.irreducible_criterion(&f, DEFAULT_MAX_ENUM).unwrap().irreducible().unwrap();
                let ex = r.irreducible_exhaustive(&f, DEFAULT_MAX_ENUM).unwrap().is_none();
                assert_eq!(crit, ex, "p={p} d={d:?}");
            }
        }
    }

    #[test]
    fn prime_degree_needs_root_of_unity() {
        // F2 has no primitive 5th root of unity.
        let (k, r) = f4_ring();
        let c = r.irreducible_criterion(&r.binomial(5, &k.generator()), DEFAULT_MAX_ENUM).unwrap();
        assert!(matches!(c.verdict, CriterionVerdict::Inapplicable(_)));
        let c = r.irreducible_criterion(&r.binomial(6, &k.generator()), DEFAULT_MAX_ENUM).unwrap();
        assert!(matches!(c.verdict, CriterionVerdict::Inapplicable(_)));
        // F11 contains a primitive 5th root; σ = id.
        let f11 = FieldPresentation::prime("F11", &PrimeField::Fp(11));
        let r = SkewPolyRing::new(f11.clone(), LinearMap::identity(f11.prime_field(), 1)).unwrap();
        for d in 1..11 {
            let f = r.binomial(5, &[Scalar::Mod(d)]);
            let crit = r.irreducible_criterion(&f, DEFAULT_MAX_ENUM).unwrap().irreducible().unwrap();
            let ex = r.irreducible_exhaustive(&f, DEFAULT_MAX_ENUM).unwrap().is_none();
            assert_eq!(crit, ex, "d={d}");
        }
    }

    #[test]
    fn budget_is_enforced() {
        let (k, r) = f4_ring();
        let err = r.irreducible_exhaustive(&r.binomial(3, &k.generator()), 10).unwrap_err();
        assert!(matches!(err, SkewError::Budget { .. }));
    }

    #[test]
    fn not_binomial() {
        let (k, r) = f4_ring();
        let f = r.poly(vec![k.one(), k.one(), k.one()]);
        assert_eq!(r.irreducible_criterion(&f, DEFAULT_MAX_ENUM).unwrap_err(), SkewError::NotBinomial);
    }
}
