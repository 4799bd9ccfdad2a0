//! Associative coefficient algebras `D`: a field `K`, or a cyclic algebra
//! `(K/F, γ, c)` with basis `1, e, …, e^{n-1}`, `e^n = c`, `e·x = γ(x)·e`,
//! together with a distinguished automorphism `σ` lifted coefficient-wise
//! from `K`.
//!
//! Coordinates: block `i` (of length `[K:P]`) holds the `K`-coefficient of `e^i`.

use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::algebra::{find_zero_divisor, two_sided_inverse, Algebra, Elem, Inverse, StructureConstants};
use crate::fields::{fixed_field, FieldAutomorphism, FieldError, FieldPresentation, Subfield};
use crate::linalg::{LinearMap, Subspace};
use crate::scalars::{unit_vec, vec_add_assign, vec_is_zero, vec_zero, PrimeField, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CoeffError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("structure constant c must be nonzero")]
    ZeroStructureConstant,
    #[error("structure constant c is not fixed by gamma")]
    ConstantNotCentral,
    #[error("sigma does not commute with gamma (witness pair e, {})", fmt_elem(.witness))]
    SigmaGammaCommute { witness: Elem },
    #[error("sigma does not fix c; multiplicativity fails on (e^(n-1), e)")]
    SigmaMovesC { left: Elem, right: Elem },
    #[error("lifted sigma is not multiplicative on basis pair ({0}, {1})")]
    NotMultiplicative(usize, usize),
}

fn fmt_elem(x: &[Scalar]) -> String {
    let parts: Vec<String> = x.iter().map(|s| alloc::format!("{s}")).collect();
    alloc::format!("[{}]", parts.join(", "))
}

#[derive(Debug, Clone)]
pub enum CoeffKind {
    Field,
    Cyclic { gamma: FieldAutomorphism, c: Elem },
}

#[derive(Debug, Clone)]
pub struct CoeffAlgebra {
    kind: CoeffKind,
    k: Arc<FieldPresentation>,
    sigma_k: FieldAutomorphism,
    sigma: LinearMap,
    gamma_pows: Vec<LinearMap>,
    center: Subfield,
    f0: Subfield,
    n: usize,
    m: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DivisionVerdict {
    Division,
    /// `a·b = 0` with both nonzero.
    SplitWitness { a: Elem, b: Elem },
    /// Infinite coefficients: no zero divisor turned up in `tries` random probes.
    Asserted { tries: usize },
}

impl CoeffAlgebra {
    /// `K` viewed as an algebra over itself, with `σ = σ_K`.
    pub fn field(k: &Arc<FieldPresentation>, sigma_k: FieldAutomorphism) -> Self {
        let center = Subfield::whole(k);
        let f0 = fixed_field(k, &sigma_k, "F0");
        let m = sigma_k.order();
        let prime = k.prime_field().clone();
        CoeffAlgebra {
            kind: CoeffKind::Field,
            sigma: sigma_k.map().clone(),
            gamma_pows: alloc::vec![LinearMap::identity(&prime, k.dim())],
            k: k.clone(),
            sigma_k,
            center,
            f0,
            n: 1,
            m,
        }
    }

    /// `(K/Fix(γ), γ, c)` with `σ` lifted from `σ_K`.
    pub fn cyclic(k: &Arc<FieldPresentation>, gamma: FieldAutomorphism, c: Elem, sigma_k: FieldAutomorphism) -> Result<Self, CoeffError> {
        k.check(&c)?;
        if k.is_zero(&c) {
            return Err(CoeffError::ZeroStructureConstant);
        }
        if gamma.apply(&c) != c {
            return Err(CoeffError::ConstantNotCentral);
        }
        let n = gamma.order();
        let gamma_pows = (0..n).map(|i| gamma.map().pow(i)).collect();
        let center = fixed_field(k, &gamma, "F");
        let prime = k.prime_field().clone();
        let dim = n * k.dim();
        let mut alg = CoeffAlgebra {
            kind: CoeffKind::Cyclic { gamma, c },
            sigma: LinearMap::identity(&prime, dim),
            gamma_pows,
            k: k.clone(),
            sigma_k: FieldAutomorphism::identity(k),
            f0: center.clone(),
            center,
            n,
            m: 1,
        };
        alg.lift_sigma(sigma_k)?;
        Ok(alg)
    }

    /// Installs `σ(Σ x_i e^i) = Σ σ_K(x_i) e^i` after checking it is an
    /// automorphism of `D`.
    pub fn lift_sigma(&mut self, sigma_k: FieldAutomorphism) -> Result<(), CoeffError> {
        let kd = self.k.dim();
        if let CoeffKind::Cyclic { gamma, c } = &self.kind {
            for b in self.k.basis() {
                if sigma_k.apply(&gamma.apply(&b)) != gamma.apply(&sigma_k.apply(&b)) {
                    return Err(CoeffError::SigmaGammaCommute { witness: self.embed(&b) });
                }
            }
            let sc = sigma_k.apply(c);
            if sc != *c {
                return Err(CoeffError::SigmaMovesC { left: self.embed(&sc), right: self.embed(c) });
            }
        }
        let prime = self.k.prime_field().clone();
        let images: Vec<Elem> = (0..self.dim())
            .map(|j| {
                let (blk, off) = (j / kd, j % kd);
                let img = sigma_k.apply(&unit_vec(&prime, kd, off));
                let mut v = self.zero();
                v[blk * kd..(blk + 1) * kd].clone_from_slice(&img);
                v
            })
            .collect();
        let sigma = LinearMap::from_images(&prime, self.dim(), &images);
        if let Some((i, j)) = StructureConstants::of(self).homomorphism_witness(&sigma) {
            return Err(CoeffError::NotMultiplicative(i, j));
        }
        self.m = sigma_k.order_on(&self.center)?;
        self.f0 = Subfield::from_space(&self.k, self.center.space().intersect(&sigma_k.map().fixed_space()), "F0")?;
        self.sigma = sigma;
        self.sigma_k = sigma_k;
        Ok(())
    }

    pub fn kind(&self) -> &CoeffKind {
        &self.kind
    }

    pub fn is_field(&self) -> bool {
        matches!(self.kind, CoeffKind::Field)
    }

    pub fn k(&self) -> &Arc<FieldPresentation> {
        &self.k
    }

    pub fn sigma(&self) -> &LinearMap {
        &self.sigma
    }

    pub fn sigma_k(&self) -> &FieldAutomorphism {
        &self.sigma_k
    }

    /// The center `F`, as a subfield of `K`.
    pub fn center(&self) -> &Subfield {
        &self.center
    }

    /// `Fix(σ) ∩ F`, as a subfield of `K`.
    pub fn f0(&self) -> &Subfield {
        &self.f0
    }

    /// Degree of `D` over its center.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Order of `σ|_F`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// `x ∈ K` as the element `x·e^0` of `D`.
    pub fn embed(&self, x: &[Scalar]) -> Elem {
        let mut v = self.zero();
        v[..x.len()].clone_from_slice(x);
        v
    }

    /// `e`, or `1` for the field kind.
    pub fn e(&self) -> Elem {
        let mut v = self.zero();
        let kd = self.k.dim();
        let pos = if self.n > 1 { kd } else { 0 };
        v[pos..pos + kd].clone_from_slice(&self.k.one());
        v
    }

    /// The `K`-coefficient of `e^i`.
    pub fn coeff<'a>(&self, x: &'a [Scalar], i: usize) -> &'a [Scalar] {
        let kd = self.k.dim();
        &x[i * kd..(i + 1) * kd]
    }

    /// `F` embedded in `D`.
    pub fn center_space(&self) -> Subspace {
        let basis: Vec<Elem> = self.center.space().basis().iter().map(|b| self.embed(b)).collect();
        Subspace::span(self.prime_field(), self.dim(), &basis)
    }

    /// `F₀` embedded in `D`.
    pub fn f0_space(&self) -> Subspace {
        let basis: Vec<Elem> = self.f0.space().basis().iter().map(|b| self.embed(b)).collect();
        Subspace::span(self.prime_field(), self.dim(), &basis)
    }

    /// The center recomputed from the commutation system.
    pub fn center_compute(&self) -> Subspace {
        StructureConstants::of(self).center()
    }

    pub fn inverse(&self, x: &[Scalar]) -> Inverse {
        two_sided_inverse(self, x)
    }

    pub fn division_verdict(&self, seed: u64) -> DivisionVerdict {
        if self.n == 1 {
            return DivisionVerdict::Division;
        }
        if self.k.is_finite() {
            return match find_zero_divisor(self) {
                Some((a, b)) => DivisionVerdict::SplitWitness { a, b },
                None => DivisionVerdict::Division,
            };
        }
        const TRIES: usize = 256;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let prime = self.prime_field().clone();
        for _ in 0..TRIES {
            let a: Elem = (0..self.dim()).map(|_| prime.from_i64((rng.next_u32() % 7) as i64 - 3)).collect();
            if self.is_zero(&a) {
                continue;
            }
            if let Some(b) = self.left_mul_matrix(&a).nullspace().into_iter().next() {
                return DivisionVerdict::SplitWitness { a, b };
            }
        }
        DivisionVerdict::Asserted { tries: TRIES }
    }
}

impl Algebra for CoeffAlgebra {
    fn prime_field(&self) -> &PrimeField {
        self.k.prime_field()
    }

    fn dim(&self) -> usize {
        self.n * self.k.dim()
    }

    fn mul(&self, a: &[Scalar], b: &[Scalar]) -> Elem {
        let (gamma_c, n) = match &self.kind {
            CoeffKind::Field => return self.k.mul(a, b),
            CoeffKind::Cyclic { c, .. } => (c, self.n),
        };
        let k = &self.k;
        let kd = k.dim();
        let prime = k.prime_field();
        let mut out = vec_zero(prime, self.dim());
        for i in 0..n {
            let x = self.coeff(a, i);
            if vec_is_zero(prime, x) {
                continue;
            }
            for j in 0..n {
                let y = self.coeff(b, j);
                if vec_is_zero(prime, y) {
                    continue;
                }
                // x e^i · y e^j = x γ^i(y) e^{i+j}
                let mut p = k.mul(x, &self.gamma_pows[i].apply(y));
                let mut l = i + j;
                if l >= n {
                    p = k.mul(&p, gamma_c);
                    l -= n;
                }
                vec_add_assign(prime, &mut out[l * kd..(l + 1) * kd], &p);
            }
        }
        out
    }

    fn one(&self) -> Elem {
        self.embed(&self.k.one())
    }
}
