//! Finite-dimensional (not necessarily associative) algebras over a prime
//! field, and the linear-algebra computations that only need bilinearity:
//! associators, nuclei, centers, inverses, zero divisors, homomorphism checks.

use alloc::vec::Vec;

use crate::linalg::{LinearMap, Matrix, Subspace};
use crate::scalars::{count_vectors, unit_vec, vec_add, vec_add_assign, vec_at, vec_is_zero, vec_neg, vec_scale, vec_sub, vec_zero, PrimeField, Scalar};

/// Elements everywhere are flat coordinate vectors over the prime field.
pub type Elem = Vec<Scalar>;

pub trait Algebra: Send + Sync {
    fn prime_field(&self) -> &PrimeField;
    /// Dimension over the prime field.
    fn dim(&self) -> usize;
    fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Elem;
    fn one(&self) -> Elem;

    fn zero(&self) -> Elem {
        vec_zero(self.prime_field(), self.dim())
    }

    fn add(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
        vec_add(self.prime_field(), a, b)
    }

    fn sub(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
        vec_sub(self.prime_field(), a, b)
    }

    fn neg(&self, a: &[Scalar]) -> Elem {
        vec_neg(self.prime_field(), a)
    }

    fn scale(&self, s: &Scalar, a: &[Scalar]) -> Elem {
        vec_scale(self.prime_field(), s, a)
    }

    fn is_zero(&self, a: &[Scalar]) -> bool {
        vec_is_zero(self.prime_field(), a)
    }

    fn basis(&self) -> Vec<Elem> {
        (0..self.dim()).map(|i| unit_vec(self.prime_field(), self.dim(), i)).collect()
    }

    /// Number of elements, `None` if infinite or too large for `u128`.
    fn size(&self) -> Option<u128> {
        count_vectors(self.prime_field(), self.dim())
    }

    fn element_at(&self, idx: u128) -> Elem {
        vec_at(self.prime_field(), self.dim(), idx)
    }

    fn pow(&self, a: &[Scalar], e: u64) -> Elem {
        // Left-normed powers a^{i+1} = a∘a^i, well defined whenever a lies in
        // an associative subalgebra (all callers use it that way).
        let mut acc = self.one();
        for _ in 0..e {
            acc = self.mul(a, &acc);
        }
        acc
    }

    /// Matrix of `x ↦ a∘x`.
    fn left_mul_matrix(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<_> = self.basis().iter().map(|b| self.mul(a, b)).collect();
        Matrix::from_columns(self.prime_field(), self.dim(), &cols)
    }

    /// Matrix of `x ↦ x∘a`.
    fn right_mul_matrix(&self, a: &[Scalar]) -> Matrix {
        let cols: Vec<_> = self.basis().iter().map(|b| self.mul(b, a)).collect();
        Matrix::from_columns(self.prime_field(), self.dim(), &cols)
    }

    fn associator(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Elem {
        let l = self.mul(&self.mul(x, y), z);
        let r = self.mul(x, &self.mul(y, z));
        self.sub(&l, &r)
    }
}

/// Result of an inverse computation: either the inverse or a nonzero witness
/// `w` showing the relevant multiplication map is singular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Inverse {
    Unit(Elem),
    ZeroDivisor(Elem),
}

/// `a_l` with `a_l∘a = 1`; witness `w ≠ 0` with `w∘a = 0` otherwise.
pub fn left_inverse(alg: &dyn Algebra, a: &[Scalar]) -> Inverse {
    solve_unit(alg.right_mul_matrix(a), alg)
}

/// `a_r` with `a∘a_r = 1`; witness `w ≠ 0` with `a∘w = 0` otherwise.
pub fn right_inverse(alg: &dyn Algebra, a: &[Scalar]) -> Inverse {
    solve_unit(alg.left_mul_matrix(a), alg)
}

fn solve_unit(m: Matrix, alg: &dyn Algebra) -> Inverse {
    let ns = m.nullspace();
    if let Some(w) = ns.into_iter().next() {
        return Inverse::ZeroDivisor(w);
    }
    Inverse::Unit(m.solve(&alg.one()).expect("nonsingular map reaches 1"))
}

/// Two-sided inverse in an algebra where left and right inverses coincide
/// (associative algebras, or units of the nucleus).
pub fn two_sided_inverse(alg: &dyn Algebra, a: &[Scalar]) -> Inverse {
    match right_inverse(alg, a) {
        Inverse::Unit(r) => {
            let check = alg.mul(&r, a);
            if check == alg.one() {
                Inverse::Unit(r)
            } else {
                match left_inverse(alg, a) {
                    Inverse::ZeroDivisor(w) => Inverse::ZeroDivisor(w),
                    Inverse::Unit(_) => Inverse::ZeroDivisor(alg.sub(&check, &alg.one())),
                }
            }
        }
        z => z,
    }
}

/// Precomputed products of basis elements: `table[i*n + j] = b_i ∘ b_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureConstants {
    k: PrimeField,
    n: usize,
    table: Vec<Elem>,
    one: Elem,
}

impl StructureConstants {
    pub fn of(alg: &dyn Algebra) -> Self {
        let basis = alg.basis();
        let n = basis.len();
        let mut table = Vec::with_capacity(n * n);
        for bi in &basis {
            for bj in &basis {
                table.push(alg.mul(bi, bj));
            }
        }
        StructureConstants { k: alg.prime_field().clone(), n, table, one: alg.one() }
    }

    /// From raw constants `c[(i*n + j)*n + l]` = coefficient of `b_l` in `b_i b_j`,
    /// with a given unit element.
    pub fn from_raw(k: &PrimeField, n: usize, constants: &[Scalar], one: Elem) -> Self {
        assert_eq!(constants.len(), n * n * n);
        let table = constants.chunks(n).map(|c| c.to_vec()).collect();
        StructureConstants { k: k.clone(), n, table, one }
    }

    pub fn product(&self, i: usize, j: usize) -> &Elem {
        &self.table[i * self.n + j]
    }

    /// Flattened constants in the `from_raw` layout.
    pub fn raw(&self) -> Vec<Scalar> {
        self.table.iter().flat_map(|v| v.iter().cloned()).collect()
    }

    /// `x ∘ b_l` for arbitrary `x`.
    fn mul_basis_right(&self, x: &[Scalar], l: usize) -> Elem {
        let mut acc = vec_zero(&self.k, self.n);
        for (r, c) in x.iter().enumerate() {
            if !self.k.is_zero(c) {
                vec_add_assign(&self.k, &mut acc, &vec_scale(&self.k, c, self.product(r, l)));
            }
        }
        acc
    }

    /// `b_i ∘ x` for arbitrary `x`.
    fn mul_basis_left(&self, i: usize, x: &[Scalar]) -> Elem {
        let mut acc = vec_zero(&self.k, self.n);
        for (r, c) in x.iter().enumerate() {
            if !self.k.is_zero(c) {
                vec_add_assign(&self.k, &mut acc, &vec_scale(&self.k, c, self.product(i, r)));
            }
        }
        acc
    }

    /// `[b_i, b_j, b_l]`.
    pub fn basis_associator(&self, i: usize, j: usize, l: usize) -> Elem {
        let left = self.mul_basis_right(self.product(i, j), l);
        let right = self.mul_basis_left(i, self.product(j, l));
        vec_sub(&self.k, &left, &right)
    }

    /// First basis triple with a nonzero associator.
    pub fn associativity_witness(&self) -> Option<(usize, usize, usize)> {
        for i in 0..self.n {
            for j in 0..self.n {
                for l in 0..self.n {
                    if !vec_is_zero(&self.k, &self.basis_associator(i, j, l)) {
                        return Some((i, j, l));
                    }
                }
            }
        }
        None
    }

    /// Left, middle or right nucleus as a prime-field subspace.
    pub fn nucleus(&self, which: NucleusKind) -> Subspace {
        let n = self.n;
        // assoc[(i*n + j)*n + l]
        let mut assoc = Vec::with_capacity(n * n * n);
        for i in 0..n {
            for j in 0..n {
                for l in 0..n {
                    assoc.push(self.basis_associator(i, j, l));
                }
            }
        }
        let at = |i: usize, j: usize, l: usize| &assoc[(i * n + j) * n + l];
        let mut m = Matrix::zeros(&self.k, 0, n);
        for a in 0..n {
            for b in 0..n {
                for s in 0..n {
                    let row: Vec<_> = (0..n)
                        .map(|x| {
                            let v = match which {
                                NucleusKind::Left => at(x, a, b),
                                NucleusKind::Middle => at(a, x, b),
                                NucleusKind::Right => at(a, b, x),
                            };
                            v[s].clone()
                        })
                        .collect();
                    if !vec_is_zero(&self.k, &row) {
                        m.push_row(&row);
                    }
                }
            }
        }
        kernel_subspace(&self.k, n, &m)
    }

    /// `{x : x∘y = y∘x for all y}`.
    pub fn commutant(&self) -> Subspace {
        let n = self.n;
        let mut m = Matrix::zeros(&self.k, 0, n);
        for j in 0..n {
            for s in 0..n {
                let row: Vec<_> = (0..n)
                    .map(|i| self.k.sub(&self.product(i, j)[s], &self.product(j, i)[s]))
                    .collect();
                if !vec_is_zero(&self.k, &row) {
                    m.push_row(&row);
                }
            }
        }
        kernel_subspace(&self.k, n, &m)
    }

    /// Nucleus intersected with the commutant.
    pub fn center(&self) -> Subspace {
        self.nucleus(NucleusKind::Left)
            .intersect(&self.nucleus(NucleusKind::Middle))
            .intersect(&self.nucleus(NucleusKind::Right))
            .intersect(&self.commutant())
    }

    /// Checks `φ(1) = 1` and `φ(b_i b_j) = φ(b_i) φ(b_j)` on all basis pairs;
    /// returns the first failing pair, or `(n, n)` if `φ(1) ≠ 1`.
    pub fn homomorphism_witness(&self, phi: &LinearMap) -> Option<(usize, usize)> {
        if phi.apply(&self.one) != self.one {
            return Some((self.n, self.n));
        }
        let images: Vec<_> = (0..self.n).map(|i| phi.matrix().column(i)).collect();
        for i in 0..self.n {
            for j in 0..self.n {
                let lhs = phi.apply(self.product(i, j));
                let rhs = Algebra::mul(self, &images[i], &images[j]);
                if lhs != rhs {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// True iff `φ` is a bijective multiplicative unital map.
    pub fn is_automorphism(&self, phi: &LinearMap) -> bool {
        phi.is_invertible() && self.homomorphism_witness(phi).is_none()
    }
}

impl Algebra for StructureConstants {
    fn prime_field(&self) -> &PrimeField {
        &self.k
    }

    fn dim(&self) -> usize {
        self.n
    }

    fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
        let k = &self.k;
        let mut acc = vec_zero(k, self.n);
        for (i, x) in a.iter().enumerate() {
            if k.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if k.is_zero(y) {
                    continue;
                }
                let c = k.mul(x, y);
                vec_add_assign(k, &mut acc, &vec_scale(k, &c, self.product(i, j)));
            }
        }
        acc
    }

    fn one(&self) -> Elem {
        self.one.clone()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NucleusKind {
    Left,
    Middle,
    Right,
}

fn kernel_subspace(k: &PrimeField, n: usize, m: &Matrix) -> Subspace {
    if m.rows() == 0 {
        return Subspace::whole(k, n);
    }
    Subspace::span(k, n, &m.nullspace())
}

/// First nonzero `a` (in enumeration order) with a singular left
/// multiplication, with `b ≠ 0` such that `a∘b = 0`. In finite dimension an
/// algebra is a division algebra iff this returns `None`.
pub fn find_zero_divisor(alg: &dyn Algebra) -> Option<(Elem, Elem)> {
    let size = alg.size().expect("zero-divisor scan needs a finite algebra");
    for idx in 1..size {
        let a = alg.element_at(idx);
        if let Some(w) = alg.left_mul_matrix(&a).nullspace().into_iter().next() {
            return Some((a, w));
        }
    }
    None
}

/// First nonzero `a` whose right multiplication `x ↦ x∘a` is not bijective.
pub fn right_division_witness(alg: &dyn Algebra) -> Option<(Elem, Elem)> {
    let size = alg.size().expect("right-division scan needs a finite algebra");
    for idx in 1..size {
        let a = alg.element_at(idx);
        if let Some(w) = alg.right_mul_matrix(&a).nullspace().into_iter().next() {
            return Some((a, w));
        }
    }
    None
}

/// Multiplicative order of `x` under left-normed powers, up to `cap`.
pub fn multiplicative_order(alg: &dyn Algebra, x: &[Scalar], cap: u64) -> Option<u64> {
    let one = alg.one();
    let mut acc = x.to_vec();
    for r in 1..=cap {
        if acc == one {
            return Some(r);
        }
        acc = alg.mul(x, &acc);
    }
    None
}

/// A primitive `m`-th root of unity among the elements of `space` (which must
/// be closed under multiplication), searching in enumeration order.
pub fn primitive_root_in(alg: &dyn Algebra, space: &Subspace, m: u64) -> Option<Elem> {
    let size = space.size()?;
    (1..size)
        .map(|i| space.element_at(i))
        .find(|x| multiplicative_order(alg, x, m) == Some(m))
}

/// Some `x ≠ 1` in `space` with `x^m = 1`.
pub fn nontrivial_root_in(alg: &dyn Algebra, space: &Subspace, m: u64) -> Option<Elem> {
    let size = space.size()?;
    let one = alg.one();
    (1..size).map(|i| space.element_at(i)).find(|x| *x != one && alg.pow(x, m) == one)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// 𝔽_3 × 𝔽_3 with componentwise product.
    struct Split(PrimeField);
    impl Algebra for Split {
        fn prime_field(&self) -> &PrimeField {
            &self.0
        }
        fn dim(&self) -> usize {
            2
        }
        fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
            alloc::vec![self.0.mul(&a[0], &b[0]), self.0.mul(&a[1], &b[1])]
        }
        fn one(&self) -> Elem {
            alloc::vec![self.0.one(), self.0.one()]
        }
    }

    #[test]
    fn split_algebra_has_zero_divisors() {
        let a = Split(PrimeField::finite(3).unwrap());
        let (x, y) = find_zero_divisor(&a).unwrap();
        assert!(a.is_zero(&a.mul(&x, &y)));
        assert!(!a.is_zero(&x) && !a.is_zero(&y));
        assert!(matches!(two_sided_inverse(&a, &x), Inverse::ZeroDivisor(_)));
    }

    #[test]
    fn associative_commutative_structure() {
        let a = Split(PrimeField::finite(3).unwrap());
        let sc = StructureConstants::of(&a);
        assert!(sc.associativity_witness().is_none());
        assert_eq!(sc.center().dim(), 2);
        assert_eq!(sc.nucleus(NucleusKind::Right).dim(), 2);
        let swap = LinearMap::from_images(
            a.prime_field(),
            2,
            &[alloc::vec![Scalar::Mod(0), Scalar::Mod(1)], alloc::vec![Scalar::Mod(1), Scalar::Mod(0)]],
        );
        assert!(sc.is_automorphism(&swap));
    }
}
