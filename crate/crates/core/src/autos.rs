//! Automorphisms `H_{τ,k}` of Petit algebras `S_{t^m − d}`:
//!
//! `H_{τ,k}(Σ a_i t^i) = τ(a_0) + Σ_{i≥1} τ(a_i) (Π_{l<i} σ^l(k)) t^i`,
//!
//! which extends `τ` exactly when `τ(d) = k σ(k) ⋯ σ^{m-1}(k) d`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::{Algebra, Elem, StructureConstants};
use crate::coeffalg::CoeffAlgebra;
use crate::fields::{has_nontrivial_root_of_unity, in_proper_subfield, primitive_root_of_unity, FieldError, RootOfUnity, Subfield, TowerPath};
use crate::linalg::LinearMap;
use crate::petit::{PetitAlgebra, PetitError};
use crate::scalars::{unit_vec, Scalar};

/// Cap used when computing automorphism orders.
const ORDER_CAP: usize = 1 << 12;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AutError {
    #[error(transparent)]
    Petit(#[from] PetitError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("algebra is not of the form S_(t^m - d)")]
    NotBinomial,
    #[error("algebra was not built from a coefficient algebra with known center")]
    NoCoefficientData,
    #[error("tau does not commute with sigma")]
    TauSigmaNoncommute { witness: Elem },
    #[error("extension condition tau(d) = N(k) d fails")]
    ConditionFails,
    #[error("H is not multiplicative on basis pair ({0}, {1})")]
    VerificationFailed(usize, usize),
    #[error("enumeration needs a finite center")]
    Infinite,
    #[error("maps are not closed under composition")]
    NotClosed,
    #[error("no c with c^-1 sigma(c) = k")]
    NoHilbertWitness,
    #[error("inner map G_c differs from H on basis element {0}")]
    InnerMismatch(usize),
    #[error("inner realization needs tau = id")]
    NotIdExtension,
    #[error("sweep contradicts the all-inner hypotheses: {0}")]
    HypothesisContradiction(String),
}

/// A verified automorphism `H_{τ,k}` of a Petit algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutMap {
    pub map: LinearMap,
    /// `τ` on the coefficient ring.
    pub tau: LinearMap,
    pub tau_label: String,
    /// `k` in coefficient-ring coordinates.
    pub k: Elem,
    pub order: usize,
    pub inner_witness: Option<Elem>,
}

impl AutMap {
    pub fn apply(&self, x: &[Scalar]) -> Elem {
        self.map.apply(x)
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_identity()
    }
}

fn check_commutes(a: &PetitAlgebra, tau: &LinearMap) -> Result<(), AutError> {
    let sigma = a.ring().sigma();
    for b in a.coeff().basis() {
        if tau.apply(&sigma.apply(&b)) != sigma.apply(&tau.apply(&b)) {
            return Err(AutError::TauSigmaNoncommute { witness: b });
        }
    }
    Ok(())
}

/// `Π_{l<i} σ^l(k)` for `i = 0..=m`.
fn partial_norms(a: &PetitAlgebra, k: &[Scalar]) -> Vec<Elem> {
    let c = a.coeff();
    let mut out = vec![c.one()];
    for i in 0..a.m() {
        let next = c.mul(&out[i], &a.ring().sigma_pow(i, k));
        out.push(next);
    }
    out
}

/// `k σ(k) ⋯ σ^{m-1}(k)` with `m = deg f`.
pub fn twisted_norm(a: &PetitAlgebra, k: &[Scalar]) -> Elem {
    partial_norms(a, k).pop().unwrap()
}

/// `τ(d) = k σ(k) ⋯ σ^{m-1}(k) · d`.
pub fn extension_condition(a: &PetitAlgebra, tau: &LinearMap, k: &[Scalar]) -> Result<bool, AutError> {
    check_commutes(a, tau)?;
    let d = a.d().ok_or(AutError::NotBinomial)?;
    Ok(tau.apply(d) == a.coeff().mul(&twisted_norm(a, k), d))
}

/// Builds `H_{τ,k}` and verifies it on all basis pairs.
pub fn make_h(a: &PetitAlgebra, tau: &LinearMap, k: &[Scalar], tau_label: &str) -> Result<AutMap, AutError> {
    if !extension_condition(a, tau, k)? {
        return Err(AutError::ConditionFails);
    }
    let map = h_map(a, tau, k);
    verify(a, &map)?;
    let order = map.order(ORDER_CAP).ok_or(AutError::VerificationFailed(0, 0))?;
    Ok(AutMap { map, tau: tau.clone(), tau_label: tau_label.into(), k: k.to_vec(), order, inner_witness: None })
}

/// The formula for `H_{τ,k}` as a linear map, without any checks.
pub fn h_map(a: &PetitAlgebra, tau: &LinearMap, k: &[Scalar]) -> LinearMap {
    let c = a.coeff();
    let p = partial_norms(a, k);
    let dd = c.dim();
    let prime = a.prime_field().clone();
    let images: Vec<Elem> = (0..a.dim())
        .map(|j| {
            let (i, off) = (j / dd, j % dd);
            let coeff = c.mul(&tau.apply(&unit_vec(&prime, dd, off)), &p[i]);
            a.monomial(&coeff, i)
        })
        .collect();
    LinearMap::from_images(&prime, a.dim(), &images)
}

fn verify(a: &dyn Algebra, map: &LinearMap) -> Result<(), AutError> {
    if let Some((i, j)) = StructureConstants::of(a).homomorphism_witness(map) {
        return Err(AutError::VerificationFailed(i, j));
    }
    if !map.is_invertible() {
        return Err(AutError::VerificationFailed(0, 0));
    }
    Ok(())
}

/// Verified automorphisms closed under composition, with the composition table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutGroup {
    pub elements: Vec<AutMap>,
    /// `table[i][j]` is the index of `elements[i] ∘ elements[j]`.
    pub table: Vec<Vec<usize>>,
}

impl AutGroup {
    pub fn new(elements: Vec<AutMap>) -> Result<Self, AutError> {
        let mut table = Vec::with_capacity(elements.len());
        for x in &elements {
            let mut row = Vec::with_capacity(elements.len());
            for y in &elements {
                let c = x.map.compose(&y.map);
                row.push(elements.iter().position(|z| z.map == c).ok_or(AutError::NotClosed)?);
            }
            table.push(row);
        }
        Ok(AutGroup { elements, table })
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn identity(&self) -> Option<usize> {
        self.elements.iter().position(|x| x.is_identity())
    }

    pub fn find(&self, map: &LinearMap) -> Option<usize> {
        self.elements.iter().position(|x| x.map == *map)
    }

    /// First element of order `m`; it generates a cyclic subgroup of order `m`.
    pub fn element_of_order(&self, m: usize) -> Option<usize> {
        self.elements.iter().position(|x| x.order == m)
    }

    pub fn is_cyclic(&self) -> bool {
        self.element_of_order(self.len()).is_some()
    }
}

fn coeff_data(a: &PetitAlgebra) -> Result<&Arc<CoeffAlgebra>, AutError> {
    a.coeff_algebra().ok_or(AutError::NoCoefficientData)
}

/// `H_{id,k}` for every `k ∈ F^×` with `k σ(k) ⋯ σ^{m-1}(k) = 1`.
pub fn enumerate_id_extensions(a: &PetitAlgebra) -> Result<AutGroup, AutError> {
    let coeff = coeff_data(a)?;
    let id = LinearMap::identity(a.prime_field(), coeff.dim());
    let one = coeff.one();
    let mut elements = Vec::new();
    for k in coeff.center().nonzero_elements().map_err(|_| AutError::Infinite)? {
        let k = coeff.embed(&k);
        if twisted_norm(a, &k) == one {
            elements.push(make_h(a, &id, &k, "id")?);
        }
    }
    AutGroup::new(elements)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InnerHypotheses {
    /// `F₀` has no root of unity of order dividing `m` other than 1.
    pub no_nontrivial_root: Option<bool>,
    /// Smallest subfield containing `d`, when proper.
    pub d_proper_subfield: Option<Subfield>,
}

impl InnerHypotheses {
    pub fn hold(&self) -> bool {
        self.no_nontrivial_root == Some(true) && self.d_proper_subfield.is_none()
    }
}

#[derive(Debug, Clone)]
pub struct FullAutReport {
    pub group: AutGroup,
    /// `(j, number of k)` verified for `τ = σ^j`.
    pub per_power: Vec<(usize, usize)>,
    pub hypotheses: InnerHypotheses,
    /// Every automorphism found fixes `K` (`τ = id`).
    pub all_id_extensions: bool,
}

/// Sweeps `H_{σ^j,k}` for `j < m` and `k ∈ K^×` over a field coefficient
/// ring. Only `τ` commuting with `σ` (powers of `σ`) are considered.
pub fn full_aut_group(a: &PetitAlgebra) -> Result<FullAutReport, AutError> {
    let coeff = coeff_data(a)?;
    let k_field = coeff.k().clone();
    let d = a.d().ok_or(AutError::NotBinomial)?.clone();
    let m = a.m();
    let sigma = a.ring().sigma().clone();
    let kk = Subfield::whole(&k_field);
    let kernel: Vec<Elem> = kk
        .nonzero_elements()
        .map_err(|_| AutError::Infinite)?
        .map(|x| coeff.embed(&x))
        .filter(|x| twisted_norm(a, x) == coeff.one())
        .collect();
    let mut elements = Vec::new();
    let mut per_power = Vec::new();
    for j in 0..m {
        let tau = sigma.pow(j);
        let target = tau.apply(&d);
        // one preimage k0 of τ(d)/d under the twisted norm, then the coset k0·ker
        let k0 = if coeff.is_zero(&d) {
            None
        } else {
            kk.nonzero_elements()
                .map_err(|_| AutError::Infinite)?
                .map(|x| coeff.embed(&x))
                .find(|x| coeff.mul(&twisted_norm(a, x), &d) == target)
        };
        let mut count = 0;
        if let Some(k0) = k0 {
            for u in &kernel {
                let k = coeff.mul(&k0, u);
                let label = if j == 0 { String::from("id") } else { alloc::format!("sigma^{j}") };
                match make_h(a, &tau, &k, &label) {
                    Ok(h) => {
                        elements.push(h);
                        count += 1;
                    }
                    Err(AutError::VerificationFailed(..)) | Err(AutError::ConditionFails) => {}
                    Err(e) => return Err(e),
                }
            }
        }
        per_power.push((j, count));
    }
    let hypotheses = InnerHypotheses {
        no_nontrivial_root: has_nontrivial_root_of_unity(coeff.f0(), m as u64).map(|b| !b),
        d_proper_subfield: in_proper_subfield(&k_field, coeff.coeff(&d, 0)),
    };
    let all_id_extensions = elements.iter().all(|h| h.tau.is_identity());
    let group = AutGroup::new(elements)?;
    if hypotheses.hold() {
        let ids = enumerate_id_extensions(a)?;
        if !all_id_extensions || ids.len() != group.len() {
            return Err(AutError::HypothesisContradiction(alloc::format!(
                "{} automorphisms found, {} id-extensions",
                group.len(),
                ids.len()
            )));
        }
    }
    Ok(FullAutReport { group, per_power, hypotheses, all_id_extensions })
}

/// Finds `c ∈ F^×` with `c^{-1} σ(c) = k` and checks `G_c(x) = (c^{-1}x)c`
/// agrees with `H_{id,k}` on every basis element.
pub fn inner_realize(a: &PetitAlgebra, h: &mut AutMap) -> Result<Elem, AutError> {
    if !h.tau.is_identity() {
        return Err(AutError::NotIdExtension);
    }
    let coeff = coeff_data(a)?;
    let tower = TowerPath::cyclic(coeff.center().clone(), coeff.sigma_k(), "F0")?;
    let k = coeff.coeff(&h.k, 0).to_vec();
    let c = match tower.hilbert90_solve(&k) {
        Ok(c) => c,
        Err(FieldError::NoHilbertWitness) => return Err(AutError::NoHilbertWitness),
        Err(e) => return Err(e.into()),
    };
    let c_inv = coeff.k().inv(&c)?;
    let (c, c_inv) = (a.embed(&coeff.embed(&c)), a.embed(&coeff.embed(&c_inv)));
    for (i, b) in a.basis().iter().enumerate() {
        let g = a.mul(&a.mul(&c_inv, b), &c);
        if g != h.apply(b) {
            return Err(AutError::InnerMismatch(i));
        }
    }
    h.inner_witness = Some(c.clone());
    Ok(c)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Clause {
    Holds,
    Fails,
    Unknown,
}

#[derive(Debug, Clone)]
pub enum CyclicVerdict {
    /// All three clauses hold; `generator` has order `m` and fixes `D`.
    True { generator: AutMap },
    False { failed: Vec<&'static str> },
    NotApplicable(&'static str),
    Unknown(&'static str),
}

#[derive(Debug, Clone)]
pub struct CyclicExtensionReport {
    pub verdict: CyclicVerdict,
    pub division: Clause,
    pub free_rank: Clause,
    pub cyclic_subgroup: Clause,
    /// Order of the group of `H_{id,k}` when it was enumerated.
    pub id_extension_count: Option<usize>,
}

/// Checks whether `A` is a division algebra, free of rank `degree` over `D`,
/// and has a cyclic group of order `degree` of automorphisms fixing `D`.
pub fn cyclic_extension_verdict(a: &PetitAlgebra, degree: usize, limit: u128) -> Result<CyclicExtensionReport, AutError> {
    let coeff = coeff_data(a)?.clone();
    let division = match a.is_division(limit)?.verdict {
        Some(true) => Clause::Holds,
        Some(false) => Clause::Fails,
        None => Clause::Unknown,
    };
    // S_f is free on 1, t, …, t^{m-1} by construction; check the dimension count.
    let free_rank = if a.dim() == degree * coeff.dim() { Clause::Holds } else { Clause::Fails };

    let mut generator = None;
    let mut id_extension_count = None;
    let id = LinearMap::identity(a.prime_field(), coeff.dim());
    if let RootOfUnity::Found(w) = primitive_root_of_unity(coeff.f0(), degree as u64) {
        let w = coeff.embed(&w);
        if let Ok(h) = make_h(a, &id, &w, "id") {
            if h.order == degree {
                generator = Some(h);
            }
        }
    }
    if generator.is_none() {
        if let Ok(group) = enumerate_id_extensions(a) {
            id_extension_count = Some(group.len());
            generator = group.element_of_order(degree).map(|i| group.elements[i].clone());
        }
    }
    let cyclic_subgroup = match (&generator, id_extension_count) {
        (Some(_), _) => Clause::Holds,
        (None, Some(_)) => Clause::Fails,
        (None, None) if !a.prime_field().is_finite() => Clause::Unknown,
        (None, None) => Clause::Fails,
    };

    let verdict = match division {
        Clause::Fails => CyclicVerdict::NotApplicable("not division"),
        Clause::Unknown => CyclicVerdict::Unknown("division undecided"),
        Clause::Holds => {
            let mut failed = Vec::new();
            if free_rank == Clause::Fails {
                failed.push("free-rank");
            }
            match cyclic_subgroup {
                Clause::Fails => failed.push("cyclic-subgroup"),
                Clause::Unknown if failed.is_empty() => {
                    return Ok(CyclicExtensionReport {
                        verdict: CyclicVerdict::Unknown("automorphism group undecided"),
                        division,
                        free_rank,
                        cyclic_subgroup,
                        id_extension_count,
                    })
                }
                _ => {}
            }
            if failed.is_empty() {
                CyclicVerdict::True { generator: generator.clone().expect("clause holds") }
            } else {
                CyclicVerdict::False { failed }
            }
        }
    };
    Ok(CyclicExtensionReport { verdict, division, free_rank, cyclic_subgroup, id_extension_count })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fields::{FieldAutomorphism, FieldPresentation};
    use crate::skewpoly::DEFAULT_MAX_ENUM;

    fn cyclic(p: u64, modulus: &[i64], e: usize, m: usize, d: impl Fn(&FieldPresentation) -> Elem) -> PetitAlgebra {
        let k = FieldPresentation::finite("K", p, modulus).unwrap();
        let s = FieldAutomorphism::frobenius(&k, e).unwrap();
        let dd = d(&k);
        PetitAlgebra::generalized_cyclic(Arc::new(CoeffAlgebra::field(&k, s)), m, &dd).unwrap()
    }

    fn id(a: &PetitAlgebra) -> LinearMap {
        LinearMap::identity(a.prime_field(), a.coeff().dim())
    }

    #[test]
    fn h_id_alpha_on_f4() {
        let a = cyclic(2, &[1, 1, 1], 1, 2, |k| k.generator());
        let k = a.coeff().dim();
        let alpha = crate::scalars::unit_vec(a.prime_field(), k, 1);
        let h = make_h(&a, &id(&a), &alpha, "id").unwrap();
        assert_eq!(h.order, 3);
        // a0 + a1 t ↦ a0 + a1 α t
        let x = a.monomial(&a.coeff().one(), 1);
        assert_eq!(h.apply(&x), a.monomial(&alpha, 1));
        let one = make_h(&a, &id(&a), &a.coeff().one(), "id").unwrap();
        assert!(one.is_identity());
    }

    #[test]
    fn extension_conditions() {
        let a = cyclic(2, &[1, 1, 1], 1, 2, |k| k.generator());
        let sigma = a.ring().sigma().clone();
        let c = a.coeff().clone();
        for idx in 1..4 {
            assert!(!extension_condition(&a, &sigma, &c.element_at(idx)).unwrap());
        }
        assert!(extension_condition(&a, &id(&a), &c.one()).unwrap());
    }

    #[test]
    fn id_extension_groups() {
        let a = cyclic(2, &[1, 1, 1], 1, 2, |k| k.generator());
        let g = enumerate_id_extensions(&a).unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.is_cyclic());
        let a9 = cyclic(3, &[1, 0, 1], 1, 2, |k| k.generator());
        assert_eq!(enumerate_id_extensions(&a9).unwrap().len(), 4);
    }

    #[test]
    fn full_sweeps() {
        let a = cyclic(2, &[1, 1, 1], 1, 2, |k| k.generator());
        let r = full_aut_group(&a).unwrap();
        assert_eq!(r.group.len(), 3);
        assert!(r.all_id_extensions && r.hypotheses.hold());
        let a8 = cyclic(2, &[1, 1, 0, 1], 1, 3, |k| k.generator());
        let r = full_aut_group(&a8).unwrap();
        assert_eq!(r.group.len(), 7);
        assert!(r.all_id_extensions);
        let a9 = cyclic(3, &[1, 0, 1], 1, 2, |k| k.generator());
        let r = full_aut_group(&a9).unwrap();
        assert_eq!(r.hypotheses.no_nontrivial_root, Some(false));
        assert!(r.group.len() >= 4);
    }

    #[test]
    fn inner_realizations() {
        let a = cyclic(2, &[1, 1, 1], 1, 2, |k| k.generator());
        let g = enumerate_id_extensions(&a).unwrap();
        for mut h in g.elements {
            let c = inner_realize(&a, &mut h).unwrap();
            assert!(!a.is_zero(&c));
        }
    }

    #[test]
    fn verdicts() {
        let a9 = cyclic(3, &[1, 0, 1], 1, 2, |k| k.generator());
        let r = cyclic_extension_verdict(&a9, 2, DEFAULT_MAX_ENUM).unwrap();
        match r.verdict {
            CyclicVerdict::True { generator } => {
                assert_eq!(generator.order, 2);
                assert_eq!(generator.k, a9.coeff().neg(&a9.coeff().one()));
            }
            v => panic!("{v:?}"),
        }
        let a4 = cyclic(2, &[1, 1, 1], 1, 2, |k| k.generator());
        let r = cyclic_extension_verdict(&a4, 2, DEFAULT_MAX_ENUM).unwrap();
        assert!(matches!(r.verdict, CyclicVerdict::False { ref failed } if failed == &["cyclic-subgroup"]));
        assert_eq!(r.id_extension_count, Some(3));
        let split = cyclic(2, &[1, 1, 1], 1, 2, |k| k.one());
        let r = cyclic_extension_verdict(&split, 2, DEFAULT_MAX_ENUM).unwrap();
        assert!(matches!(r.verdict, CyclicVerdict::NotApplicable(_)));
    }
}
