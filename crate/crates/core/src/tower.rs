//! Towers `B = A[t;ρ]/A[t;ρ](t^m − b)` over an associative generalized cyclic
//! algebra `A = (D, σ, a)`, with the automorphism `H_{τ,k}` built from
//! `τ = H_{id,ω}` on `A`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use crate::algebra::{multiplicative_order, Algebra, Elem, NucleusKind, StructureConstants};
use crate::autos::{make_h, AutError, AutMap, Clause};
use crate::fields::{primitive_root_of_unity, RootOfUnity};
use crate::linalg::{LinearMap, Subspace};
use crate::petit::{PetitAlgebra, PetitError};
use crate::skewpoly::{SkewError, SkewPoly, SkewPolyRing};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TowerError {
    #[error(transparent)]
    Petit(#[from] PetitError),
    #[error(transparent)]
    Aut(#[from] AutError),
    #[error(transparent)]
    Skew(#[from] SkewError),
    #[error("A must be associative")]
    NotAssociative,
    #[error("A must be built from a coefficient algebra")]
    NoCoefficientData,
    #[error("F0 has no primitive {0}-th root of unity")]
    NoRootOfUnity(usize),
    #[error("rho is not an automorphism of A (basis pair {0}, {1})")]
    RhoNotAutomorphism(usize, usize),
    #[error("k must lie in F0")]
    KNotInF0,
    #[error("element has the wrong length")]
    BadLength,
    #[error("condition ({0}) fails; the automorphism H cannot be built")]
    ConditionFails(u8),
}

#[derive(Debug, Clone)]
pub struct TowerSpec {
    pub a: Arc<PetitAlgebra>,
    /// `H_{id,ω}` on `A`.
    pub tau: AutMap,
    /// `ω` in `A` coordinates.
    pub omega: Elem,
    /// Order of `σ|_F`.
    pub q: usize,
    pub rho: LinearMap,
    pub b: Elem,
    /// `k ∈ F₀`, in `A` coordinates.
    pub k: Elem,
    pub m: usize,
}

impl TowerSpec {
    pub fn new(a: Arc<PetitAlgebra>, rho: LinearMap, b: Elem, k: Elem, m: usize) -> Result<Self, TowerError> {
        if b.len() != a.dim() || k.len() != a.dim() || rho.dim() != a.dim() {
            return Err(TowerError::BadLength);
        }
        if !a.is_associative() {
            return Err(TowerError::NotAssociative);
        }
        let coeff = a.coeff_algebra().ok_or(TowerError::NoCoefficientData)?.clone();
        if let Some((i, j)) = StructureConstants::of(a.as_ref()).homomorphism_witness(&rho) {
            return Err(TowerError::RhoNotAutomorphism(i, j));
        }
        if !rho.is_invertible() {
            return Err(TowerError::RhoNotAutomorphism(0, 0));
        }
        if !f0_space(&a)?.contains(&k) {
            return Err(TowerError::KNotInF0);
        }
        let q = coeff.m();
        let omega = match primitive_root_of_unity(coeff.f0(), q as u64) {
            RootOfUnity::Found(w) => coeff.embed(&w),
            _ => return Err(TowerError::NoRootOfUnity(q)),
        };
        let id = LinearMap::identity(a.prime_field(), coeff.dim());
        let tau = make_h(&a, &id, &omega, "id")?;
        let omega = a.embed(&omega);
        Ok(TowerSpec { a, tau, omega, q, rho, b, k, m })
    }

    fn ring(&self) -> Result<SkewPolyRing, TowerError> {
        Ok(SkewPolyRing::new(self.a.clone(), self.rho.clone())?)
    }

    fn f(&self, ring: &SkewPolyRing) -> SkewPoly {
        ring.binomial(self.m, &self.b)
    }

    /// `k ρ(k) ⋯ ρ^{m-1}(k)`.
    pub fn rho_norm(&self) -> Elem {
        let mut acc = self.a.one();
        let mut y = self.k.clone();
        for _ in 0..self.m {
            acc = self.a.mul(&acc, &y);
            y = self.rho.apply(&y);
        }
        acc
    }
}

fn f0_space(a: &PetitAlgebra) -> Result<Subspace, TowerError> {
    Ok(a.f0_compute()?)
}

#[derive(Debug, Clone)]
pub struct ConditionReport {
    /// (1) `τρ = ρτ`; on failure, the first basis index where they differ.
    pub commute: Result<(), usize>,
    /// (2) `τ(b) = k ρ(k) ⋯ ρ^{m-1}(k) b`.
    pub norm_relation: bool,
    /// (3) `k^q` is a primitive `m`-th root of unity.
    pub root_of_unity: bool,
    /// (4) `t^m − b` irreducible in `A[t;ρ]` (monic right-factor search).
    pub irreducible: Clause,
    pub factor: Option<(SkewPoly, SkewPoly)>,
    /// (5) finite-dimensional over `F₀ ∩ Fix(ρ)`: the prime-field dimension
    /// of that field, when positive.
    pub finite_dim: Clause,
    pub fixed_dim: usize,
    /// `k ≠ 1`.
    pub k_not_one: bool,
    /// Informational alternatives of (5).
    pub b_associative: bool,
    pub right_nucleus_dim: usize,
}

impl ConditionReport {
    pub fn all_hold(&self) -> bool {
        self.commute.is_ok()
            && self.norm_relation
            && self.root_of_unity
            && self.irreducible == Clause::Holds
            && self.finite_dim == Clause::Holds
            && self.k_not_one
    }
}

pub fn check_conditions(spec: &TowerSpec, limit: u128) -> Result<ConditionReport, TowerError> {
    let a = &spec.a;
    let commute = a
        .basis()
        .iter()
        .position(|x| spec.tau.apply(&spec.rho.apply(x)) != spec.rho.apply(&spec.tau.apply(x)))
        .map_or(Ok(()), Err);
    let norm_relation = spec.tau.apply(&spec.b) == a.mul(&spec.rho_norm(), &spec.b);
    let kq = a.pow(&spec.k, spec.q as u64);
    let root_of_unity = multiplicative_order(a.as_ref(), &kq, spec.m as u64) == Some(spec.m as u64);
    let ring = spec.ring()?;
    let f = spec.f(&ring);
    let (irreducible, factor) = match ring.irreducible_exhaustive(&f, limit) {
        Ok(None) => (Clause::Holds, None),
        Ok(Some(gh)) => (Clause::Fails, Some(gh)),
        Err(SkewError::Budget { .. } | SkewError::Infinite) => (Clause::Unknown, None),
        Err(e) => return Err(e.into()),
    };
    let fixed = f0_space(a)?.intersect(&spec.rho.fixed_space());
    let fixed_dim = fixed.dim();
    let finite_dim = if fixed_dim > 0 { Clause::Holds } else { Clause::Fails };
    let b_alg = PetitAlgebra::new(ring, f)?;
    Ok(ConditionReport {
        commute,
        norm_relation,
        root_of_unity,
        irreducible,
        factor,
        finite_dim,
        fixed_dim,
        k_not_one: spec.k != a.one(),
        b_associative: b_alg.is_associative(),
        right_nucleus_dim: b_alg.nucleus(NucleusKind::Right).dim(),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TowerConclusion {
    /// `B` is a nonassociative cyclic extension of `D` of this degree.
    CyclicExtension { degree: usize },
    HypothesesNotMet(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct TowerBuild {
    pub b: PetitAlgebra,
    pub h: AutMap,
    /// `mq` when condition (3) holds.
    pub expected_order: Option<usize>,
    /// `H^q = H_{id,k^q}` pointwise (`None` when `H_{id,k^q}` does not extend).
    pub power_law: Option<bool>,
    /// `H|_D = id`.
    pub fixes_d: bool,
    pub rank_over_a: usize,
    pub rank_over_d: usize,
    pub conditions: ConditionReport,
    pub conclusion: TowerConclusion,
}

pub fn build_tower(spec: &TowerSpec, limit: u128) -> Result<TowerBuild, TowerError> {
    let conditions = check_conditions(spec, limit)?;
    if conditions.commute.is_err() {
        return Err(TowerError::ConditionFails(1));
    }
    if !conditions.norm_relation {
        return Err(TowerError::ConditionFails(2));
    }
    let a = &spec.a;
    let ring = spec.ring()?;
    let f = spec.f(&ring);
    let a_division = a.is_division(limit)?.verdict;
    let b = PetitAlgebra::new(ring, f)?.with_coeff_division(a_division);
    let h = make_h(&b, &spec.tau.map, &spec.k, "tau")?;
    let kq = a.pow(&spec.k, spec.q as u64);
    let id_a = LinearMap::identity(a.prime_field(), a.dim());
    let power_law = match make_h(&b, &id_a, &kq, "id") {
        Ok(hq) => Some(h.map.pow(spec.q) == hq.map),
        Err(AutError::ConditionFails) => None,
        Err(e) => return Err(e.into()),
    };
    let d_dim = a.coeff().dim();
    let fixes_d = (0..d_dim).all(|j| {
        let x = b.embed(&a.embed(&crate::scalars::unit_vec(a.prime_field(), d_dim, j)));
        h.apply(&x) == x
    });
    let expected_order = conditions.root_of_unity.then_some(spec.m * spec.q);

    let mut unmet = Vec::new();
    if a_division != Some(true) {
        unmet.push(String::from("A is not known to be a division algebra"));
    }
    if !conditions.root_of_unity {
        unmet.push(String::from("condition (3) fails"));
    }
    match conditions.irreducible {
        Clause::Fails => unmet.push(String::from("condition (4) fails")),
        Clause::Unknown => unmet.push(String::from("condition (4) undecided")),
        Clause::Holds => {}
    }
    if conditions.finite_dim != Clause::Holds {
        unmet.push(String::from("condition (5) fails"));
    }
    if !conditions.k_not_one {
        unmet.push(String::from("k = 1"));
    }
    let b_division = b.is_division(limit)?.verdict;
    if unmet.is_empty() && b_division != Some(true) {
        unmet.push(String::from("B is not a division algebra"));
    }
    let conclusion = if unmet.is_empty() {
        TowerConclusion::CyclicExtension { degree: spec.m * spec.q }
    } else {
        TowerConclusion::HypothesesNotMet(unmet)
    };
    Ok(TowerBuild {
        rank_over_a: b.dim() / a.dim(),
        rank_over_d: b.dim() / d_dim,
        b,
        h,
        expected_order,
        power_law,
        fixes_d,
        conditions,
        conclusion,
    })
}

/// The structural instance over `F₂₅/F₅`: `A = (F₂₅/F₅, Frob, a)`, `ρ = id`,
/// `b = x₁·t_A`, with `k` and `m` as given.
pub fn desk_instance(a_const: i64, x1: &[i64], k: i64, m: usize) -> Result<TowerSpec, TowerError> {
    use crate::coeffalg::CoeffAlgebra;
    use crate::fields::{FieldAutomorphism, FieldPresentation};
    let f25 = FieldPresentation::finite("F25", 5, &[3, 0, 1]).map_err(AutError::from)?;
    let p = f25.prime_field().clone();
    let frob = FieldAutomorphism::frobenius(&f25, 1).map_err(AutError::from)?;
    let coeff = Arc::new(CoeffAlgebra::field(&f25, frob));
    let a_elem = f25.from_prime(&p.from_i64(a_const));
    let a = Arc::new(PetitAlgebra::generalized_cyclic(coeff, 2, &a_elem)?);
    let x1: Elem = x1.iter().map(|&c| p.from_i64(c)).collect();
    let b = a.mul(&a.embed(&x1), &a.t());
    let k = a.embed(&f25.from_prime(&p.from_i64(k)));
    let rho = LinearMap::identity(&p, a.dim());
    TowerSpec::new(a, rho, b, k, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::skewpoly::DEFAULT_MAX_ENUM;

    #[test]
    fn desk_conditions() {
        let spec = desk_instance(2, &[1, 1], 2, 2).unwrap();
        assert_eq!(spec.q, 2);
        let r = check_conditions(&spec, DEFAULT_MAX_ENUM).unwrap();
        assert!(r.commute.is_ok());
        assert!(r.norm_relation);
        assert!(r.root_of_unity);
        assert_eq!(r.finite_dim, Clause::Holds);
        assert_ne!(r.irreducible, Clause::Unknown);
    }

    #[test]
    fn desk_order() {
        let spec = desk_instance(2, &[1, 1], 2, 2).unwrap();
        let t = build_tower(&spec, DEFAULT_MAX_ENUM).unwrap();
        assert_eq!(t.h.order, 4);
        assert_eq!(t.expected_order, Some(4));
        assert_eq!(t.power_law, Some(true));
        assert!(t.fixes_d);
        assert_eq!((t.rank_over_a, t.rank_over_d), (2, 4));
        assert!(matches!(t.conclusion, TowerConclusion::HypothesesNotMet(_)));
    }

    #[test]
    fn k_one_fails_condition_three() {
        let spec = desk_instance(2, &[1, 1], 1, 2).unwrap();
        let r = check_conditions(&spec, DEFAULT_MAX_ENUM).unwrap();
        assert!(!r.root_of_unity);
        assert!(!r.k_not_one);
        // τ(b) = −b but k ρ(k) b = b
        assert!(!r.norm_relation);
        assert_eq!(build_tower(&spec, DEFAULT_MAX_ENUM).unwrap_err(), TowerError::ConditionFails(2));
    }

    #[test]
    fn degree_one_is_a() {
        // b central (b = 1), k = 1, m = 1: B ≅ A and H = τ.
        let mut spec = desk_instance(2, &[1, 0], 1, 1).unwrap();
        spec.b = spec.a.one();
        let t = build_tower(&spec, DEFAULT_MAX_ENUM).unwrap();
        assert_eq!(t.b.dim(), spec.a.dim());
        assert_eq!(t.h.map, spec.tau.map);
    }
}
