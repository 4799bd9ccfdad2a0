//! Dense linear algebra over a prime field by exact row reduction.

use alloc::vec;
use alloc::vec::Vec;

use crate::scalars::{count_vectors, unit_vec, vec_add_assign, vec_at, vec_is_zero, vec_scale, vec_zero, PrimeField, Scalar};

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    k: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(k: &PrimeField, rows: usize, cols: usize) -> Self {
        Matrix { k: k.clone(), rows, cols, data: vec_zero(k, rows * cols) }
    }

    pub fn identity(k: &PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(k, n, n);
        for i in 0..n {
            m.data[i * n + i] = k.one();
        }
        m
    }

    pub fn from_rows(k: &PrimeField, cols: usize, rows: &[Vec<Scalar>]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.len(), cols, "ragged matrix rows");
            data.extend(r.iter().cloned());
        }
        Matrix { k: k.clone(), rows: rows.len(), cols, data }
    }

    /// Builds the matrix whose `j`-th column is `cols[j]`.
    pub fn from_columns(k: &PrimeField, rows: usize, cols: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(k, rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length mismatch");
            for (i, v) in c.iter().enumerate() {
                m.data[i * cols.len() + j] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &PrimeField {
        &self.k
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn push_row(&mut self, r: &[Scalar]) {
        assert_eq!(r.len(), self.cols);
        self.data.extend(r.iter().cloned());
        self.rows += 1;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.k, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "dimension mismatch in matrix-vector product");
        let k = &self.k;
        (0..self.rows)
            .map(|i| {
                let mut acc = k.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !k.is_zero(a) && !k.is_zero(b) {
                        acc = k.add(&acc, &k.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let k = &self.k;
        let mut out = Matrix::zeros(k, self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if k.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if !k.is_zero(b) {
                        let idx = i * other.cols + j;
                        out.data[idx] = k.add(&out.data[idx], &k.mul(a, b));
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.k.sub(a, b)).collect();
        Matrix { k: self.k.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Matrix, Vec<usize>) {
        let k = &self.k;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !k.is_zero(m.get(i, c))) else {
                continue;
            };
            if p != r {
                for j in 0..m.cols {
                    m.data.swap(p * m.cols + j, r * m.cols + j);
                }
            }
            let inv = k.inv(m.get(r, c)).expect("pivot is nonzero");
            for j in c..m.cols {
                let v = k.mul(m.get(r, j), &inv);
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i == r {
                    continue;
                }
                let f = m.get(i, c).clone();
                if k.is_zero(&f) {
                    continue;
                }
                for j in c..m.cols {
                    let v = k.sub(m.get(i, j), &k.mul(&f, m.get(r, j)));
                    m.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{x : M x = 0}`, one vector per free column, in canonical form.
    pub fn nullspace(&self) -> Vec<Vec<Scalar>> {
        let k = &self.k;
        let (r, pivots) = self.rref();
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec_zero(k, self.cols);
            v[free] = k.one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(r.get(row, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `M x = b`, if one exists.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.rows);
        let k = &self.k;
        let mut aug = Matrix::zeros(k, self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, self.cols, b[i].clone());
        }
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec_zero(k, self.cols);
        for (row, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let k = &self.k;
        let mut aug = Matrix::zeros(k, n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, k.one());
        }
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let mut inv = Matrix::zeros(k, n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, r.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// A subspace of `K^n` held by its canonical (reduced echelon) basis, so that
/// equal subspaces compare equal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    k: PrimeField,
    ambient: usize,
    basis: Vec<Vec<Scalar>>,
}

impl Subspace {
    pub fn span(k: &PrimeField, ambient: usize, vectors: &[Vec<Scalar>]) -> Self {
        if vectors.is_empty() {
            return Subspace { k: k.clone(), ambient, basis: Vec::new() };
        }
        let (r, pivots) = Matrix::from_rows(k, ambient, vectors).rref();
        let basis = (0..pivots.len()).map(|i| r.row(i).to_vec()).collect();
        Subspace { k: k.clone(), ambient, basis }
    }

    pub fn whole(k: &PrimeField, ambient: usize) -> Self {
        let vs: Vec<_> = (0..ambient).map(|i| unit_vec(k, ambient, i)).collect();
        Self::span(k, ambient, &vs)
    }

    pub fn field(&self) -> &PrimeField {
        &self.k
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn basis(&self) -> &[Vec<Scalar>] {
        &self.basis
    }

    pub fn contains(&self, v: &[Scalar]) -> bool {
        self.coords(v).is_some()
    }

    /// Coordinates of `v` relative to the canonical basis.
    pub fn coords(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        if self.basis.is_empty() {
            return vec_is_zero(&self.k, v).then(Vec::new);
        }
        Matrix::from_columns(&self.k, self.ambient, &self.basis).solve(v)
    }

    pub fn combine(&self, coeffs: &[Scalar]) -> Vec<Scalar> {
        let mut acc = vec_zero(&self.k, self.ambient);
        for (c, b) in coeffs.iter().zip(&self.basis) {
            vec_add_assign(&self.k, &mut acc, &vec_scale(&self.k, c, b));
        }
        acc
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis.iter().all(|b| other.contains(b))
    }

    pub fn intersect(&self, other: &Subspace) -> Subspace {
        // Solve Σ a_i u_i = Σ b_j w_j.
        let mut cols = self.basis.clone();
        cols.extend(other.basis.iter().map(|w| w.iter().map(|x| self.k.neg(x)).collect()));
        if cols.is_empty() {
            return Subspace::span(&self.k, self.ambient, &[]);
        }
        let m = Matrix::from_columns(&self.k, self.ambient, &cols);
        let vs: Vec<_> = m
            .nullspace()
            .into_iter()
            .map(|n| self.combine(&n[..self.basis.len()]))
            .collect();
        Subspace::span(&self.k, self.ambient, &vs)
    }

    pub fn size(&self) -> Option<u128> {
        count_vectors(&self.k, self.dim())
    }

    /// The `idx`-th element in a fixed enumeration order.
    pub fn element_at(&self, idx: u128) -> Vec<Scalar> {
        self.combine(&vec_at(&self.k, self.dim(), idx))
    }
}

/// A prime-field-linear endomorphism given by its matrix (column `j` is the
/// image of the `j`-th coordinate vector).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    matrix: Matrix,
}

impl LinearMap {
    pub fn new(matrix: Matrix) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "linear endomorphism must be square");
        LinearMap { matrix }
    }

    pub fn identity(k: &PrimeField, n: usize) -> Self {
        LinearMap { matrix: Matrix::identity(k, n) }
    }

    /// Builds the map from the images of the coordinate basis.
    pub fn from_images(k: &PrimeField, n: usize, images: &[Vec<Scalar>]) -> Self {
        LinearMap { matrix: Matrix::from_columns(k, n, images) }
    }

    pub fn from_fn(k: &PrimeField, n: usize, f: impl Fn(&[Scalar]) -> Vec<Scalar>) -> Self {
        let images: Vec<_> = (0..n).map(|i| f(&unit_vec(k, n, i))).collect();
        Self::from_images(k, n, &images)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(v)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> LinearMap {
        LinearMap { matrix: self.matrix.mul(&other.matrix) }
    }

    pub fn pow(&self, mut e: usize) -> LinearMap {
        let mut acc = LinearMap::identity(self.matrix.field(), self.dim());
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.compose(&base);
            }
            base = base.compose(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        self.matrix == Matrix::identity(self.matrix.field(), self.dim())
    }

    pub fn is_invertible(&self) -> bool {
        self.matrix.rank() == self.dim()
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        self.matrix.inverse().map(|matrix| LinearMap { matrix })
    }

    /// Smallest `r ≥ 1` with `self^r = id`, searching up to `cap`.
    pub fn order(&self, cap: usize) -> Option<usize> {
        let mut acc = self.clone();
        for r in 1..=cap {
            if acc.is_identity() {
                return Some(r);
            }
            acc = acc.compose(self);
        }
        None
    }

    /// `{x : self(x) = x}`.
    pub fn fixed_space(&self) -> Subspace {
        let k = self.matrix.field();
        let n = self.dim();
        let m = self.matrix.sub(&Matrix::identity(k, n));
        Subspace::span(k, n, &m.nullspace())
    }

    pub fn commutes_with(&self, other: &LinearMap) -> bool {
        self.compose(other) == other.compose(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5() -> PrimeField {
        PrimeField::finite(5).unwrap()
    }

    fn v(k: &PrimeField, xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| k.from_i64(x)).collect()
    }

    #[test]
    fn nullspace_of_rank_one() {
        let k = f5();
        let m = Matrix::from_rows(&k, 3, &[v(&k, &[1, 2, 3]), v(&k, &[2, 4, 6])]);
        assert_eq!(m.rank(), 1);
        let ns = m.nullspace();
        assert_eq!(ns.len(), 2);
        for n in &ns {
            assert!(vec_is_zero(&k, &m.mul_vec(n)));
        }
    }

    #[test]
    fn solve_and_inverse_over_q() {
        let k = PrimeField::Rationals;
        let m = Matrix::from_rows(&k, 2, &[v(&k, &[2, 1]), v(&k, &[1, 3])]);
        let x = m.solve(&v(&k, &[3, 5])).unwrap();
        assert_eq!(m.mul_vec(&x), v(&k, &[3, 5]));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(&k, 2));
        let sing = Matrix::from_rows(&k, 2, &[v(&k, &[1, 2]), v(&k, &[2, 4])]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&v(&k, &[1, 0])).is_none());
    }

    #[test]
    fn subspace_canonical_and_intersection() {
        let k = f5();
        let a = Subspace::span(&k, 3, &[v(&k, &[1, 1, 0]), v(&k, &[0, 1, 1])]);
        let b = Subspace::span(&k, 3, &[v(&k, &[1, 2, 1]), v(&k, &[1, 0, 4])]);
        assert_eq!(a, b);
        let c = Subspace::span(&k, 3, &[v(&k, &[1, 0, 0]), v(&k, &[0, 0, 1])]);
        let i = a.intersect(&c);
        assert_eq!(i.dim(), 1);
        assert!(i.contains(&v(&k, &[1, 0, 4])));
        assert_eq!(a.size(), Some(25));
    }

    #[test]
    fn linear_map_order() {
        let k = f5();
        // swap of coordinates
        let m = LinearMap::from_images(&k, 2, &[v(&k, &[0, 1]), v(&k, &[1, 0])]);
        assert_eq!(m.order(10), Some(2));
        assert_eq!(m.fixed_space().dim(), 1);
        assert!(m.pow(2).is_identity());
    }
}
