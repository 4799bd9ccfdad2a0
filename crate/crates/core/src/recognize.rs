//! Recognizing `S ≅ S_f` from a multiplication table, a designated subring
//! `D` and an element `t`.
//!
//! Conditions, in the order they are checked:
//! (1) `{d_a ∘ t^i}` is a basis of `S`, with `t^{i+1} = t ∘ t^i`;
//! (2) `t ∘ a = σ(a) ∘ t + δ(a)` with `σ(a), δ(a) ∈ D`;
//! (3) `[a∘t^i, b∘t^j, c∘t^k] = 0` for `i + j < m`, `k < m`.
//! The cyclic specializations add (4) `t^m = d` and report the parts of (5).

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use crate::algebra::{find_zero_divisor, primitive_root_in, right_division_witness, Algebra, Elem, StructureConstants};
use crate::linalg::{LinearMap, Matrix, Subspace};
use crate::petit::{PetitAlgebra, SCAN_LIMIT};
use crate::scalars::{unit_vec, vec_is_zero, PrimeField, Scalar};
use crate::skewpoly::{SkewPoly, SkewPolyRing};

/// Raw input: structure constants over a prime field, `D` by a basis, and `t`.
#[derive(Debug, Clone)]
pub struct RingTable {
    table: StructureConstants,
    subring_basis: Vec<Elem>,
    t: Elem,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rejection {
    /// `0` for a failed standing hypothesis (unital ring, associative
    /// division subring, field subring).
    pub condition: u8,
    pub reason: String,
    pub witness: Vec<Elem>,
}

impl Rejection {
    fn new(condition: u8, reason: &str, witness: Vec<Elem>) -> Self {
        Rejection { condition, reason: reason.into(), witness }
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.condition == 0 {
            write!(f, "hypothesis failed: {}", self.reason)
        } else {
            write!(f, "condition ({}) failed: {}", self.condition, self.reason)
        }
    }
}

impl RingTable {
    /// `constants[(i*n + j)*n + l]` is the `b_l`-coefficient of `b_i ∘ b_j`.
    pub fn new(k: &PrimeField, n: usize, constants: &[Scalar], subring_basis: Vec<Elem>, t: Elem) -> Result<Self, Rejection> {
        if constants.len() != n * n * n || t.len() != n || subring_basis.iter().any(|b| b.len() != n) {
            return Err(Rejection::new(0, "table dimensions are inconsistent", Vec::new()));
        }
        let provisional = StructureConstants::from_raw(k, n, constants, unit_vec(k, n, 0));
        let one = find_unit(&provisional).ok_or_else(|| Rejection::new(0, "ring has no identity", Vec::new()))?;
        let table = StructureConstants::from_raw(k, n, constants, one);
        let space = Subspace::span(k, n, &subring_basis);
        if space.dim() != subring_basis.len() || subring_basis.is_empty() {
            return Err(Rejection::new(0, "subring basis is not linearly independent", Vec::new()));
        }
        if !space.contains(&table.one()) {
            return Err(Rejection::new(0, "subring does not contain 1", Vec::new()));
        }
        for a in &subring_basis {
            for b in &subring_basis {
                if !space.contains(&table.mul(a, b)) {
                    return Err(Rejection::new(0, "subring is not closed under multiplication", alloc::vec![a.clone(), b.clone()]));
                }
            }
        }
        Ok(RingTable { table, subring_basis, t })
    }

    /// The table of a constructed algebra, with `D` = block 0 and `t`.
    pub fn from_petit(a: &PetitAlgebra) -> Self {
        let k = a.prime_field();
        let r = a.coeff().dim();
        let subring_basis = (0..r).map(|j| unit_vec(k, a.dim(), j)).collect();
        RingTable { table: a.table().clone(), subring_basis, t: a.t() }
    }

    pub fn table(&self) -> &StructureConstants {
        &self.table
    }

    pub fn subring_basis(&self) -> &[Elem] {
        &self.subring_basis
    }

    pub fn t(&self) -> &Elem {
        &self.t
    }

    pub fn prime_field(&self) -> &PrimeField {
        self.table.prime_field()
    }

    /// The structure constants of `D` in its own basis.
    fn subring_table(&self) -> StructureConstants {
        let k = self.prime_field();
        let r = self.subring_basis.len();
        let emb = Matrix::from_columns(k, self.table.dim(), &self.subring_basis);
        let mut raw = Vec::with_capacity(r * r * r);
        for a in &self.subring_basis {
            for b in &self.subring_basis {
                raw.extend(emb.solve(&self.table.mul(a, b)).expect("closure checked"));
            }
        }
        let one = emb.solve(&self.table.one()).expect("1 ∈ D checked");
        StructureConstants::from_raw(k, r, &raw, one)
    }
}

fn find_unit(t: &StructureConstants) -> Option<Elem> {
    let k = t.prime_field();
    let n = t.dim();
    // e∘b_j = b_j and b_j∘e = b_j for all j: linear in e.
    let mut m = Matrix::zeros(k, 0, n);
    let mut rhs = Vec::new();
    for j in 0..n {
        let bj = unit_vec(k, n, j);
        let left: Vec<Elem> = (0..n).map(|i| t.mul(&unit_vec(k, n, i), &bj)).collect();
        let right: Vec<Elem> = (0..n).map(|i| t.mul(&bj, &unit_vec(k, n, i))).collect();
        for images in [left, right] {
            let cols = Matrix::from_columns(k, n, &images);
            for (l, target) in bj.iter().enumerate() {
                m.push_row(cols.row(l));
                rhs.push(target.clone());
            }
        }
    }
    m.solve(&rhs)
}

/// What conditions (1)–(3) determine: `σ`, `δ` and `f` over the table of `D`.
#[derive(Debug, Clone)]
pub struct SkewRecognition {
    pub m: usize,
    /// `D` in its own basis.
    pub d_table: StructureConstants,
    pub sigma: LinearMap,
    pub delta: LinearMap,
    /// `t^m = Σ d_i t^i`, in `D` coordinates.
    pub d_coeffs: Vec<Elem>,
    /// Columns `d_a ∘ t^i` at index `i·r + a`.
    pub basis: Matrix,
}

impl SkewRecognition {
    pub fn delta_is_zero(&self) -> bool {
        self.delta.matrix().entries().iter().all(|x| self.d_table.prime_field().is_zero(x))
    }

    /// `f = t^m − Σ d_i t^i`, coefficients ascending.
    pub fn f_coeffs(&self) -> Vec<Elem> {
        let mut out: Vec<Elem> = self.d_coeffs.iter().map(|c| self.d_table.neg(c)).collect();
        out.push(self.d_table.one());
        out
    }
}

pub fn recognize_skew(s: &RingTable) -> Result<SkewRecognition, Rejection> {
    let k = s.prime_field().clone();
    let n = s.table.dim();
    let r = s.subring_basis.len();
    let d_table = s.subring_table();
    if let Some((i, j, l)) = d_table.associativity_witness() {
        let b = &s.subring_basis;
        return Err(Rejection::new(0, "subring is not associative", alloc::vec![b[i].clone(), b[j].clone(), b[l].clone()]));
    }
    if find_zero_divisor_if_finite(&d_table) {
        return Err(Rejection::new(0, "subring is not a division algebra", Vec::new()));
    }
    if !n.is_multiple_of(r) || n / r < 2 {
        return Err(Rejection::new(1, "S is not free of rank at least 2 over D", Vec::new()));
    }
    let m = n / r;
    let mut powers = alloc::vec![s.table.one()];
    for i in 0..m {
        let next = s.table.mul(&s.t, &powers[i]);
        powers.push(next);
    }
    let cols: Vec<Elem> = (0..m).flat_map(|i| s.subring_basis.iter().map(move |b| (i, b))).map(|(i, b)| s.table.mul(b, &powers[i])).collect();
    let basis = Matrix::from_columns(&k, n, &cols);
    if basis.rank() != n {
        return Err(Rejection::new(1, "the elements d∘t^i are not a basis", Vec::new()));
    }
    let coords = |x: &[Scalar]| -> Vec<Elem> { basis.solve(x).expect("basis").chunks(r).map(|c| c.to_vec()).collect() };

    let mut sigma_cols = Vec::with_capacity(r);
    let mut delta_cols = Vec::with_capacity(r);
    for b in &s.subring_basis {
        let c = coords(&s.table.mul(&s.t, b));
        if c[2..].iter().any(|x| !vec_is_zero(&k, x)) {
            return Err(Rejection::new(2, "t∘a has components beyond degree 1", alloc::vec![b.clone()]));
        }
        delta_cols.push(c[0].clone());
        sigma_cols.push(c[1].clone());
    }
    let sigma = LinearMap::from_images(&k, r, &sigma_cols);
    let delta = LinearMap::from_images(&k, r, &delta_cols);
    if !sigma.is_invertible() {
        let w = sigma.matrix().nullspace().into_iter().next().unwrap();
        return Err(Rejection::new(2, "sigma(a) = 0 for some a != 0", alloc::vec![embed_d(s, &w)]));
    }
    if let Some((i, j)) = d_table.homomorphism_witness(&sigma) {
        let b = &s.subring_basis;
        return Err(Rejection::new(2, "sigma is not multiplicative", pair(b, i, j)));
    }
    // δ(ab) = σ(a)δ(b) + δ(a)b
    for i in 0..r {
        for j in 0..r {
            let (a, b) = (unit_vec(&k, r, i), unit_vec(&k, r, j));
            let lhs = delta.apply(&d_table.mul(&a, &b));
            let rhs = d_table.add(&d_table.mul(&sigma.apply(&a), &delta.apply(&b)), &d_table.mul(&delta.apply(&a), &b));
            if lhs != rhs {
                return Err(Rejection::new(2, "delta is not a sigma-derivation", pair(&s.subring_basis, i, j)));
            }
        }
    }
    for i in 0..m {
        for j in 0..m - i {
            for kk in 0..m {
                for a in &s.subring_basis {
                    let x = s.table.mul(a, &powers[i]);
                    for b in &s.subring_basis {
                        let y = s.table.mul(b, &powers[j]);
                        for c in &s.subring_basis {
                            let z = s.table.mul(c, &powers[kk]);
                            if !s.table.is_zero(&s.table.associator(&x, &y, &z)) {
                                return Err(Rejection::new(3, "associator of basis elements is nonzero", alloc::vec![x, y, z]));
                            }
                        }
                    }
                }
            }
        }
    }
    let d_coeffs = coords(&powers[m]);
    Ok(SkewRecognition { m, d_table, sigma, delta, d_coeffs, basis })
}

fn find_zero_divisor_if_finite(d: &StructureConstants) -> bool {
    d.prime_field().is_finite() && d.size().is_some_and(|s| s <= SCAN_LIMIT) && find_zero_divisor(d).is_some()
}

fn embed_d(s: &RingTable, x: &[Scalar]) -> Elem {
    Matrix::from_columns(s.prime_field(), s.table.dim(), &s.subring_basis).mul_vec(x)
}

fn pair(b: &[Elem], i: usize, j: usize) -> Vec<Elem> {
    alloc::vec![b[i].clone(), b[j].clone()]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    /// `D = K` a field; roots of unity are sought in `F = {a : t∘a = a∘t}`.
    Field,
    /// `D` central simple; roots of unity are sought in `F₀ = C(D) ∩ Fix(σ)`.
    Csa,
}

/// The parts of condition (5), reported rather than enforced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionFive {
    pub sigma_order: Option<usize>,
    pub order_is_m: bool,
    /// `{a ∈ D : t∘a = a∘t}`, in `D` coordinates.
    pub fixed: Subspace,
    /// Where the root of unity is sought (`F` or `F₀`).
    pub root_field: Subspace,
    pub omega: Option<Elem>,
}

impl ConditionFive {
    pub fn holds(&self) -> bool {
        self.order_is_m && self.omega.is_some()
    }
}

#[derive(Debug, Clone)]
pub struct CyclicRecognition {
    pub skew: SkewRecognition,
    pub d: Elem,
    pub five: ConditionFive,
    pub algebra: PetitAlgebra,
    /// The coordinate map `S_f → S` is a ring isomorphism.
    pub isomorphism: bool,
    pub associative: bool,
    /// `None` when `S` is a right division ring, else `(a, x)` with `x∘a = 0`.
    pub right_division_witness: Option<Option<(Elem, Elem)>>,
    /// Nonassociative cyclic extension of `D` of degree `m`.
    pub cyclic_extension: Option<bool>,
}

pub fn recognize_cyclic(s: &RingTable, flavor: Flavor) -> Result<CyclicRecognition, Rejection> {
    let skew = recognize_skew(s)?;
    let k = s.prime_field().clone();
    let r = skew.d_table.dim();
    if flavor == Flavor::Field && skew.d_table.commutant().dim() != r {
        return Err(Rejection::new(0, "subring is not a field", Vec::new()));
    }
    if !skew.delta_is_zero() {
        let j = (0..r).find(|&j| !skew.d_table.is_zero(&skew.delta.apply(&unit_vec(&k, r, j)))).unwrap();
        return Err(Rejection::new(2, "t∘a is not of the form a'∘t", alloc::vec![s.subring_basis[j].clone()]));
    }
    let m = skew.m;
    if let Some(i) = (1..m).find(|&i| !skew.d_table.is_zero(&skew.d_coeffs[i])) {
        return Err(Rejection::new(4, "t^m is not in D", alloc::vec![embed_d(s, &skew.d_coeffs[i])]));
    }
    let d = skew.d_coeffs[0].clone();
    if flavor == Flavor::Field && skew.d_table.is_zero(&d) {
        return Err(Rejection::new(4, "t^m = 0", Vec::new()));
    }

    // (5)
    let sigma_order = skew.sigma.order(m.max(r) * 4);
    let fixed = skew.sigma.fixed_space();
    let root_field = match flavor {
        Flavor::Field => fixed.clone(),
        Flavor::Csa => skew.d_table.center().intersect(&fixed),
    };
    let omega = if m == 2 && k.characteristic() != 2 {
        Some(skew.d_table.neg(&skew.d_table.one()))
    } else if k.is_finite() {
        primitive_root_in(&skew.d_table, &root_field, m as u64)
    } else {
        None
    };
    let five = ConditionFive { sigma_order, order_is_m: sigma_order == Some(m), fixed, root_field, omega };

    let d_alg: Arc<dyn Algebra> = Arc::new(skew.d_table.clone());
    let ring = SkewPolyRing::new(d_alg, skew.sigma.clone()).map_err(|_| Rejection::new(2, "sigma is not an automorphism", Vec::new()))?;
    let f: SkewPoly = ring.poly(skew.f_coeffs());
    let d_division = if k.is_finite() { Some(!find_zero_divisor_if_finite(&skew.d_table)) } else { None };
    let algebra = PetitAlgebra::new(ring, f).map_err(|_| Rejection::new(4, "f is not monic", Vec::new()))?.with_coeff_division(d_division);

    let phi = LinearMap::new(skew.basis.clone());
    let isomorphism = {
        let n = algebra.dim();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let (x, y) = (unit_vec(&k, n, i), unit_vec(&k, n, j));
                phi.apply(&algebra.mul(&x, &y)) == s.table.mul(&phi.apply(&x), &phi.apply(&y))
            })
        })
    };
    let associative = algebra.is_associative();
    let right_division_witness = (k.is_finite() && s.table.size().is_some_and(|z| z <= SCAN_LIMIT)).then(|| right_division_witness(&s.table));
    let cyclic_extension = right_division_witness.as_ref().map(|w| w.is_none() && five.holds());
    Ok(CyclicRecognition { skew, d, five, algebra, isomorphism, associative, right_division_witness, cyclic_extension })
}
