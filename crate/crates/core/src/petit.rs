//! Petit algebras `S_f = R_m` with `g∘h = gh mod_r f` over `R = D[t;σ]`.
//!
//! Coordinates: block `i` (of length `dim D`) holds the coefficient of `t^i`,
//! so `D` sits in block 0.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{find_zero_divisor, left_inverse, right_inverse, Algebra, Elem, Inverse, NucleusKind, StructureConstants};
use crate::coeffalg::{CoeffAlgebra, DivisionVerdict};
use crate::linalg::{Matrix, Subspace};
use crate::scalars::{unit_vec, PrimeField, Scalar};
use crate::skewpoly::{Criterion, CriterionWitness, SkewError, SkewPoly, SkewPolyRing};

/// Largest `|A|` for which the zero-divisor scan runs.
pub const SCAN_LIMIT: u128 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PetitError {
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error("f must be monic of degree at least 1")]
    BadModulus,
    #[error("computed F0 (dim {computed}) differs from Fix(sigma) ∩ C(D) (dim {expected})")]
    F0Mismatch { computed: usize, expected: usize },
    #[error("division methods disagree: {0}")]
    MethodsDisagree(String),
}

#[derive(Clone)]
pub struct PetitAlgebra {
    ring: SkewPolyRing,
    f: SkewPoly,
    m: usize,
    d: Option<Elem>,
    coeff_alg: Option<Arc<CoeffAlgebra>>,
    coeff_division: Option<bool>,
    table: StructureConstants,
}

impl core::fmt::Debug for PetitAlgebra {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("PetitAlgebra").field("m", &self.m).field("dim", &self.table.dim()).field("d", &self.d).finish()
    }
}

impl PetitAlgebra {
    pub fn new(ring: SkewPolyRing, f: SkewPoly) -> Result<Self, PetitError> {
        let m = f.degree().filter(|&m| m >= 1).ok_or(PetitError::BadModulus)?;
        if *f.lead().unwrap() != ring.coeff_ring().one() {
            return Err(PetitError::BadModulus);
        }
        let d = ring.binomial_parts(&f).map(|(_, d)| d);
        let k = ring.prime_field().clone();
        let dd = ring.coeff_ring().dim();
        let n = m * dd;
        let basis: Vec<Elem> = (0..n).map(|i| unit_vec(&k, n, i)).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in &basis {
            for b in &basis {
                table.push(mul_direct(&ring, &f, m, a, b)?);
            }
        }
        let mut one = unit_vec(&k, n, 0);
        one[..dd].clone_from_slice(&ring.coeff_ring().one());
        let raw: Vec<Scalar> = table.concat();
        let table = StructureConstants::from_raw(&k, n, &raw, one);
        Ok(PetitAlgebra { ring, f, m, d, coeff_alg: None, coeff_division: None, table })
    }

    /// `(D, σ, d) = S_{t^m − d}` over `D[t;σ]` with `σ` the algebra's own lift.
    pub fn generalized_cyclic(coeff: Arc<CoeffAlgebra>, m: usize, d: &[Scalar]) -> Result<Self, PetitError> {
        let ring = SkewPolyRing::new(coeff.clone(), coeff.sigma().clone())?;
        let f = ring.binomial(m, d);
        let mut a = Self::new(ring, f)?;
        a.coeff_division = match coeff.division_verdict(0) {
            DivisionVerdict::Division => Some(true),
            DivisionVerdict::SplitWitness { .. } => Some(false),
            DivisionVerdict::Asserted { .. } => None,
        };
        a.coeff_alg = Some(coeff);
        Ok(a)
    }

    /// Records whether the coefficient ring is known to be a division ring.
    pub fn with_coeff_division(mut self, known: Option<bool>) -> Self {
        self.coeff_division = known;
        self
    }

    pub fn ring(&self) -> &SkewPolyRing {
        &self.ring
    }

    pub fn f(&self) -> &SkewPoly {
        &self.f
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `d` when `f = t^m − d`.
    pub fn d(&self) -> Option<&Elem> {
        self.d.as_ref()
    }

    pub fn coeff_algebra(&self) -> Option<&Arc<CoeffAlgebra>> {
        self.coeff_alg.as_ref()
    }

    pub fn coeff(&self) -> &Arc<dyn Algebra> {
        self.ring.coeff_ring()
    }

    pub fn table(&self) -> &StructureConstants {
        &self.table
    }

    fn block(&self) -> usize {
        self.coeff().dim()
    }

    pub fn to_poly(&self, x: &[Scalar]) -> SkewPoly {
        self.ring.poly(x.chunks(self.block()).map(|c| c.to_vec()).collect())
    }

    /// Coordinates of a polynomial of degree `< m`.
    pub fn from_poly(&self, g: &SkewPoly) -> Elem {
        let mut v = self.zero();
        let b = self.block();
        for (i, c) in g.coeffs().iter().enumerate() {
            v[i * b..(i + 1) * b].clone_from_slice(c);
        }
        v
    }

    /// `a ∈ D` as an element of `A`.
    pub fn embed(&self, a: &[Scalar]) -> Elem {
        let mut v = self.zero();
        v[..a.len()].clone_from_slice(a);
        v
    }

    /// `a·t^i`.
    pub fn monomial(&self, a: &[Scalar], i: usize) -> Elem {
        let mut v = self.zero();
        let b = self.block();
        v[i * b..(i + 1) * b].clone_from_slice(a);
        v
    }

    pub fn t(&self) -> Elem {
        let one = self.coeff().one();
        if self.m == 1 {
            // t ≡ d in S_{t − d}
            return self.from_poly(&self.ring.rem(&self.ring.t(), &self.f).expect("monic"));
        }
        self.monomial(&one, 1)
    }

    /// `D` as a subspace of `A`.
    pub fn d_space(&self) -> Subspace {
        let b = self.block();
        let basis: Vec<Elem> = (0..b).map(|j| unit_vec(self.prime_field(), self.dim(), j)).collect();
        Subspace::span(self.prime_field(), self.dim(), &basis)
    }

    /// Product computed from polynomial arithmetic (bypassing the cached table).
    pub fn mul_direct(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
        mul_direct(&self.ring, &self.f, self.m, a, b).expect("f is monic")
    }

    pub fn nucleus(&self, which: NucleusKind) -> Subspace {
        self.table.nucleus(which)
    }

    /// `{g ∈ R_m : f·g ∈ Rf}`.
    pub fn right_nucleus_by_invariance(&self) -> Subspace {
        let k = self.prime_field().clone();
        let n = self.dim();
        let cols: Vec<Elem> = (0..n)
            .map(|j| {
                let g = self.to_poly(&unit_vec(&k, n, j));
                let r = self.ring.rem(&self.ring.mul(&self.f, &g), &self.f).expect("monic");
                self.from_poly(&r)
            })
            .collect();
        Subspace::span(&k, n, &Matrix::from_columns(&k, n, &cols).nullspace())
    }

    /// `{z ∈ D : z∘h = h∘z for all h}`, checked against `Fix(σ) ∩ C(D)` when `m ≥ 2`.
    pub fn f0_compute(&self) -> Result<Subspace, PetitError> {
        let computed = self.table.commutant().intersect(&self.d_space());
        if self.m >= 2 {
            let expected: Vec<Elem> = self.ring.fixed_center().basis().iter().map(|b| self.embed(b)).collect();
            let expected = Subspace::span(self.prime_field(), self.dim(), &expected);
            if expected != computed {
                return Err(PetitError::F0Mismatch { computed: computed.dim(), expected: expected.dim() });
            }
        }
        Ok(computed)
    }

    /// `dim_{F₀} A`.
    pub fn dim_over_f0(&self) -> Result<usize, PetitError> {
        Ok(self.dim() / self.f0_compute()?.dim())
    }

    pub fn is_associative(&self) -> bool {
        self.table.associativity_witness().is_none()
    }

    pub fn left_inverse(&self, x: &[Scalar]) -> Inverse {
        left_inverse(self, x)
    }

    pub fn right_inverse(&self, x: &[Scalar]) -> Inverse {
        right_inverse(self, x)
    }

    /// Whether `D` is known to be a division ring; scans finite `D` when no
    /// hint was recorded.
    pub fn coeff_is_division(&self) -> Option<bool> {
        if self.coeff_division.is_some() {
            return self.coeff_division;
        }
        let size = self.coeff().size().filter(|_| self.prime_field().is_finite())?;
        (size <= SCAN_LIMIT).then(|| find_zero_divisor(self.coeff().as_ref()).is_none())
    }

    /// Division verdict from every applicable method; disagreement is an error.
    pub fn is_division(&self, limit: u128) -> Result<DivisionReport, PetitError> {
        let mut report = DivisionReport { verdict: None, methods: Vec::new(), witness: None, note: None };
        match self.coeff_is_division() {
            Some(false) => {
                report.note = Some("coefficient ring is not a division ring");
                let (a, b) = find_zero_divisor(self.coeff().as_ref()).expect("non-division finite D");
                report.methods.push(("coefficient-zero-divisor", false));
                report.witness = Some(DivisionWitness::ZeroDivisor { a: self.embed(&a), b: self.embed(&b) });
                report.verdict = Some(false);
                return Ok(report);
            }
            None => report.note = Some("coefficient ring not known to be a division ring"),
            Some(true) => {}
        }
        if let Some(true) = self.coeff_is_division() {
            if self.d.is_some() {
                match self.ring.irreducible_criterion(&self.f, limit) {
                    Ok(c) => {
                        if let Some(v) = c.irreducible() {
                            report.methods.push((c.method, v));
                            if !v && report.witness.is_none() {
                                report.witness = Some(DivisionWitness::Criterion(c));
                            }
                        }
                    }
                    Err(SkewError::Budget { .. } | SkewError::Infinite) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            match self.ring.irreducible_exhaustive(&self.f, limit) {
                Ok(found) => {
                    report.methods.push(("factor-search", found.is_none()));
                    if let Some((g, h)) = found {
                        report.witness.get_or_insert(DivisionWitness::Factor { g, h });
                    }
                }
                Err(SkewError::Budget { .. } | SkewError::Infinite) => {}
                Err(e) => return Err(e.into()),
            }
        }
        if self.size().is_some_and(|s| self.prime_field().is_finite() && s <= SCAN_LIMIT) {
            let found = find_zero_divisor(self);
            report.methods.push(("zero-divisor-scan", found.is_none()));
            if let Some((a, b)) = found {
                report.witness.get_or_insert(DivisionWitness::ZeroDivisor { a, b });
            }
        }
        if let Some(&(_, first)) = report.methods.first() {
            if report.methods.iter().any(|&(_, v)| v != first) {
                let detail: Vec<String> = report.methods.iter().map(|(m, v)| alloc::format!("{m}={v}")).collect();
                return Err(PetitError::MethodsDisagree(detail.join(", ")));
            }
            report.verdict = Some(first);
        }
        Ok(report)
    }
}

fn mul_direct(ring: &SkewPolyRing, f: &SkewPoly, m: usize, a: &[Scalar], b: &[Scalar]) -> Result<Elem, SkewError> {
    let dd = ring.coeff_ring().dim();
    let g = ring.poly(a.chunks(dd).map(|c| c.to_vec()).collect());
    let h = ring.poly(b.chunks(dd).map(|c| c.to_vec()).collect());
    let r = ring.rem(&ring.mul(&g, &h), f)?;
    let mut v = crate::scalars::vec_zero(ring.prime_field(), m * dd);
    for (i, c) in r.coeffs().iter().enumerate() {
        v[i * dd..(i + 1) * dd].clone_from_slice(c);
    }
    Ok(v)
}

impl Algebra for PetitAlgebra {
    fn prime_field(&self) -> &PrimeField {
        self.ring.prime_field()
    }

    fn dim(&self) -> usize {
        self.table.dim()
    }

    fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
        self.table.mul(a, b)
    }

    fn one(&self) -> Elem {
        self.table.one()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionWitness {
    Criterion(Criterion),
    /// `f = g·h`.
    Factor { g: SkewPoly, h: SkewPoly },
    /// `a∘b = 0`.
    ZeroDivisor { a: Elem, b: Elem },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionReport {
    /// `None` when no method applied.
    pub verdict: Option<bool>,
    pub methods: Vec<(&'static str, bool)>,
    pub witness: Option<DivisionWitness>,
    pub note: Option<&'static str>,
}

impl DivisionReport {
    pub fn method_label(&self) -> String {
        let names: Vec<&str> = self.methods.iter().map(|(m, _)| *m).collect();
        names.join("+")
    }

    pub fn criterion_witness(&self) -> Option<&CriterionWitness> {
        match &self.witness {
            Some(DivisionWitness::Criterion(Criterion { verdict: crate::skewpoly::CriterionVerdict::Reducible(w), .. })) => Some(w),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldAutomorphism, FieldPresentation};
    use crate::skewpoly::DEFAULT_MAX_ENUM;

    fn f4_alg(d: impl Fn(&FieldPresentation) -> Elem) -> (Arc<FieldPresentation>, PetitAlgebra) {
        let k = FieldPresentation::finite("F4", 2, &[1, 1, 1]).unwrap();
        let s = FieldAutomorphism::frobenius(&k, 1).unwrap();
        let coeff = Arc::new(CoeffAlgebra::field(&k, s));
        let dd = d(&k);
        (k, PetitAlgebra::generalized_cyclic(coeff, 2, &dd).unwrap())
    }

    #[test]
    fn inverse_pair() {
        let (k, a) = f4_alg(|k| k.generator());
        let al = k.generator();
        let g = a.from_poly(&a.ring().poly(alloc::vec![k.one(), al.clone()]));
        let h = a.from_poly(&a.ring().poly(alloc::vec![al.clone(), k.one()]));
        assert_eq!(a.mul(&g, &h), a.one());
        assert_eq!(a.mul_direct(&g, &h), a.one());
        assert_eq!(a.right_inverse(&g), Inverse::Unit(h.clone()));
        assert_eq!(a.left_inverse(&h), Inverse::Unit(g));
        let x = a.embed(&al);
        assert_eq!(a.right_inverse(&x), Inverse::Unit(a.embed(&k.mul(&al, &al))));
        assert_eq!(a.left_inverse(&a.one()), Inverse::Unit(a.one()));
    }

    #[test]
    fn nuclei_and_f0() {
        let (_, a) = f4_alg(|k| k.generator());
        assert!(!a.is_associative());
        assert_eq!(a.nucleus(NucleusKind::Left), a.d_space());
        assert_eq!(a.nucleus(NucleusKind::Middle), a.d_space());
        assert_eq!(a.nucleus(NucleusKind::Right), a.right_nucleus_by_invariance());
        assert_eq!(a.f0_compute().unwrap().dim(), 1);
        // [t, t, t] ≠ 0
        let t = a.t();
        assert!(!a.is_zero(&a.associator(&t, &t, &t)));
    }

    #[test]
    fn associative_case() {
        let (_, a) = f4_alg(|k| k.one());
        assert!(a.is_associative());
        let whole = Subspace::whole(a.prime_field(), a.dim());
        for kind in [NucleusKind::Left, NucleusKind::Middle, NucleusKind::Right] {
            assert_eq!(a.nucleus(kind), whole);
        }
        assert_eq!(a.f0_compute().unwrap().dim(), 1);
        let r = a.is_division(DEFAULT_MAX_ENUM).unwrap();
        assert_eq!(r.verdict, Some(false));
        assert_eq!(r.methods.len(), 3);
        match r.witness {
            Some(DivisionWitness::Criterion(_)) => {}
            w => panic!("{w:?}"),
        }
    }

    #[test]
    fn division_ladder() {
        let (_, a) = f4_alg(|k| k.generator());
        let r = a.is_division(DEFAULT_MAX_ENUM).unwrap();
        assert_eq!(r.verdict, Some(true));
        assert_eq!(r.method_label(), "degree-2+factor-search+zero-divisor-scan");
        let k = FieldPresentation::finite("F9", 3, &[1, 0, 1]).unwrap();
        let s = FieldAutomorphism::frobenius(&k, 1).unwrap();
        let a = PetitAlgebra::generalized_cyclic(Arc::new(CoeffAlgebra::field(&k, s)), 2, &k.generator()).unwrap();
        assert_eq!(a.is_division(DEFAULT_MAX_ENUM).unwrap().verdict, Some(true));
        assert_eq!(a.f0_compute().unwrap().dim(), 1);
    }

    #[test]
    fn dimension_over_f0() {
        // D = (F16/F4, Frob², 1), σ = Frob, m = 2, n = 2: dim_{F₀} A = m²n² = 16.
        let k = FieldPresentation::finite("F16", 2, &[1, 1, 0, 0, 1]).unwrap();
        let g = FieldAutomorphism::frobenius(&k, 2).unwrap();
        let s = FieldAutomorphism::frobenius(&k, 1).unwrap();
        let coeff = Arc::new(CoeffAlgebra::cyclic(&k, g, k.one(), s).unwrap());
        let d = coeff.embed(&k.generator());
        let a = PetitAlgebra::generalized_cyclic(coeff, 2, &d).unwrap();
        assert_eq!(a.dim_over_f0().unwrap(), 16);
        let r = a.is_division(DEFAULT_MAX_ENUM).unwrap();
        assert_eq!(r.verdict, Some(false));
        assert_eq!(r.note, Some("coefficient ring is not a division ring"));
    }

    #[test]
    fn degree_one_is_the_coefficient_ring() {
        let k = FieldPresentation::finite("F4", 2, &[1, 1, 1]).unwrap();
        let s = FieldAutomorphism::frobenius(&k, 1).unwrap();
        let a = PetitAlgebra::generalized_cyclic(Arc::new(CoeffAlgebra::field(&k, s)), 1, &k.generator()).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.t(), k.generator());
        assert_eq!(a.is_division(DEFAULT_MAX_ENUM).unwrap().verdict, Some(true));
    }
}
