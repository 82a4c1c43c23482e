//! The skew Bezoutian `B(p, q)`: an `ε`-symmetric Toeplitz Gram matrix on
//! `V = k[T]/(q)` built from the power series of `−εp/q`, together with its
//! isometry `γ` (multiplication by `T`), the `ε`-reflection `σ` at the class
//! `v₀` of `1`, and `δ = γσ`.
//!
//! Conventions. Vectors are columns and `Ψ(u, v) = uᵀ G v`. In the basis
//! `1, T, …, T^{d−1}` the Gram entry `(i, j)` is `c(T^{i−j})`, where the
//! linear form `c` on Laurent polynomials is `c(1) = 1 + ε`, `c(T^{−n}) = c_n`
//! and `c(T^n) = ε c_n` for `n ≥ 1`. Accordingly the series coefficients are
//! recovered from an abstract space as `c_n = Ψ(v₀, γⁿv₀)`, so that the first
//! row of the Gram matrix reads `1 + ε, c_1, …, c_{d−1}`.

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::{pairing, unit_vector, Matrix, Vector};
use crate::poly::{
    char_poly, check_bezoutian_pair, companion, power_series_quotient, resultant,
    series_coefficients, Poly, SeriesPrefix, Sign,
};

/// A finite-dimensional space with an exact Gram matrix satisfying `Gᵀ = εG`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BilinearSpace {
    epsilon: Sign,
    gram: Matrix,
}

impl BilinearSpace {
    pub fn new(gram: Matrix, epsilon: Sign) -> Result<BilinearSpace> {
        if !gram.is_square() {
            return Err(Error::Dimension(format!(
                "Gram matrix is {}x{}",
                gram.rows(),
                gram.cols()
            )));
        }
        let expected = gram.scale(&epsilon.element(gram.field()));
        if gram.transpose() != expected {
            let kind = if epsilon == Sign::Plus { "symmetric" } else { "skew-symmetric" };
            return Err(Error::Space(format!("Gram matrix is not {kind}")));
        }
        Ok(BilinearSpace { epsilon, gram })
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn field(&self) -> Field {
        self.gram.field()
    }

    pub fn determinant(&self) -> FieldElement {
        self.gram.determinant().expect("square")
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.determinant().is_zero()
    }

    pub fn pairing(&self, u: &[FieldElement], v: &[FieldElement]) -> FieldElement {
        pairing(&self.gram, u, v)
    }

    /// `MᵀGM = G`, exactly. A matrix of the wrong shape is not an isometry.
    pub fn is_isometry(&self, m: &Matrix) -> bool {
        is_isometry(self, m)
    }

    /// Orthogonal sum of spaces of the same symmetry type.
    pub fn direct_sum(spaces: &[BilinearSpace]) -> Result<BilinearSpace> {
        let first = spaces
            .first()
            .ok_or_else(|| Error::Space("empty direct sum".into()))?;
        if spaces.iter().any(|s| s.epsilon != first.epsilon || s.field() != first.field()) {
            return Err(Error::Space("direct sum of spaces of different types".into()));
        }
        let blocks: Vec<Matrix> = spaces.iter().map(|s| s.gram.clone()).collect();
        Ok(BilinearSpace {
            epsilon: first.epsilon,
            gram: Matrix::block_diagonal(first.field(), &blocks),
        })
    }
}

pub fn is_isometry(space: &BilinearSpace, m: &Matrix) -> bool {
    let g = space.gram();
    if m.rows() != g.rows() || m.cols() != g.cols() || m.field() != g.field() {
        return false;
    }
    &(&m.transpose() * g) * m == *g
}

/// `σ(v) = v − Ψ(v₀, v)·v₀`, defined when `Ψ(v₀, v₀) = 1 + ε`.
///
/// For `ε = +1` this is the reflection in `v₀^⊥` (determinant −1, order 2);
/// for `ε = −1` it is a transvection (determinant 1, infinite order in
/// characteristic zero).
pub fn epsilon_reflection(space: &BilinearSpace, v0: &[FieldElement]) -> Result<Matrix> {
    let field = space.field();
    let d = space.dim();
    if v0.len() != d {
        return Err(Error::Dimension(format!("base vector has length {}, space has dimension {d}", v0.len())));
    }
    let norm = space.pairing(v0, v0);
    let want = &field.one() + &space.epsilon.element(field);
    if norm != want {
        return Err(Error::Space(format!("Ψ(v0, v0) = {norm}, expected 1 + ε = {want}")));
    }
    // row vector w = v0ᵀ G
    let w: Vector = (0..d)
        .map(|j| crate::matrix::dot(v0, &space.gram.column(j), field))
        .collect();
    let mut sigma = Matrix::identity(field, d);
    for i in 0..d {
        for j in 0..d {
            let x = sigma.get(i, j) - &(&v0[i] * &w[j]);
            sigma.set(i, j, x);
        }
    }
    Ok(sigma)
}

/// `γ`, `δ = γσ` and `σ`: three isometries of `B(p, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub gamma: Matrix,
    pub delta: Matrix,
    pub sigma: Matrix,
}

#[derive(Clone, Debug)]
pub struct SkewBezoutian {
    p: Poly,
    q: Poly,
    space: BilinearSpace,
    series: SeriesPrefix,
    gamma: Matrix,
}

impl SkewBezoutian {
    /// Builds `B(p, q)` for monic `p`, `q` of degree `d ≥ 1` with `q`
    /// reciprocal and `p` `(−ε)`-reciprocal. Degenerate pairs (with a common
    /// factor) are allowed here; see [`SkewBezoutian::require_nondegenerate`].
    pub fn build(p: &Poly, q: &Poly, epsilon: Sign) -> Result<SkewBezoutian> {
        let d = check_bezoutian_pair(p, q, epsilon)?;
        let field = p.field();
        let series = series_coefficients(p, q, epsilon, d - 1)?;
        let eps = epsilon.element(field);
        let diag = &field.one() + &eps;
        let mut gram = Matrix::zeros(field, d, d);
        for i in 0..d {
            for j in 0..d {
                let x = match i.cmp(&j) {
                    std::cmp::Ordering::Equal => diag.clone(),
                    std::cmp::Ordering::Less => series.get(j - i).clone(),
                    std::cmp::Ordering::Greater => &eps * series.get(i - j),
                };
                gram.set(i, j, x);
            }
        }
        let space = BilinearSpace::new(gram, epsilon)?;
        Ok(SkewBezoutian {
            p: p.clone(),
            q: q.clone(),
            space,
            series,
            gamma: companion(q)?,
        })
    }

    pub fn p(&self) -> &Poly {
        &self.p
    }

    pub fn q(&self) -> &Poly {
        &self.q
    }

    pub fn epsilon(&self) -> Sign {
        self.space.epsilon
    }

    pub fn space(&self) -> &BilinearSpace {
        &self.space
    }

    pub fn gram(&self) -> &Matrix {
        &self.space.gram
    }

    pub fn series(&self) -> &SeriesPrefix {
        &self.series
    }

    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    pub fn field(&self) -> Field {
        self.space.field()
    }

    /// Multiplication by `T`: the companion matrix of `q`.
    pub fn gamma(&self) -> &Matrix {
        &self.gamma
    }

    /// The class of `1`, i.e. the first standard basis vector.
    pub fn v0(&self) -> Vector {
        unit_vector(self.field(), self.dim(), 0)
    }

    pub fn sigma(&self) -> Matrix {
        epsilon_reflection(&self.space, &self.v0()).expect("Ψ(v0, v0) = 1 + ε by construction")
    }

    /// `δ = γσ`, with `σ` based at `v₀ = e₁`. Other base vectors of norm
    /// `1 + ε` give conjugate elements.
    pub fn delta(&self) -> Matrix {
        &self.gamma * &self.sigma()
    }

    pub fn group_generators(&self) -> Generators {
        let sigma = self.sigma();
        Generators {
            gamma: self.gamma.clone(),
            delta: &self.gamma * &sigma,
            sigma,
        }
    }

    /// Fails for `gcd(p, q) ≠ 1`, naming the common factor.
    pub fn require_nondegenerate(&self) -> Result<()> {
        if self.space.is_nondegenerate() {
            return Ok(());
        }
        let g = self.p.gcd(&self.q);
        Err(Error::Degenerate(format!(
            "B(p, q) is degenerate: p and q share the factor {g}"
        )))
    }

    /// `Res(p, q)`; equals `det B(p, q)`.
    pub fn resultant(&self) -> FieldElement {
        resultant(&self.p, &self.q).expect("nonzero polynomials")
    }

    /// Series coefficients `c_0 = 1, c_1, …, c_n` of `−εp/q`.
    pub fn extended_series(&self, n: usize) -> Vec<FieldElement> {
        let num = self.p.scale(&(-self.epsilon()).element(self.field()));
        power_series_quotient(&num, &self.q, n).expect("q(0) = 1")
    }

    /// `c(u · v^ι)` for Laurent-free representatives `u`, `v ∈ k[T]`, where
    /// `ι` sends `T` to `T^{−1}`. Independent of the representatives modulo
    /// `q`.
    pub fn pairing_of_representatives(&self, u: &Poly, v: &Poly) -> FieldElement {
        let field = self.field();
        if u.is_zero() || v.is_zero() {
            return field.zero();
        }
        let (du, dv) = (u.degree().expect("nonzero"), v.degree().expect("nonzero"));
        let c = self.extended_series(du.max(dv));
        let eps = self.epsilon().element(field);
        let form = |n: i64| -> FieldElement {
            match n.cmp(&0) {
                std::cmp::Ordering::Equal => &field.one() + &eps,
                std::cmp::Ordering::Greater => &eps * &c[n as usize],
                std::cmp::Ordering::Less => c[(-n) as usize].clone(),
            }
        };
        let mut acc = field.zero();
        for (i, a) in u.coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in v.coeffs().iter().enumerate() {
                if !b.is_zero() {
                    acc += &(&(a * b) * &form(i as i64 - j as i64));
                }
            }
        }
        acc
    }

    /// `e_1, …, e_n` with `e_k = ε Ψ(v₀, δᵏv₀)`: the coefficients of the
    /// series of `−εq/p`, inverse to `1 + Σ c_k T^k`.
    pub fn inverse_series(&self, n: usize) -> Vec<FieldElement> {
        let eps = self.epsilon().element(self.field());
        let delta = self.delta();
        let v0 = self.v0();
        let mut v = v0.clone();
        (1..=n)
            .map(|_| {
                v = delta.mul_vec(&v);
                &eps * &self.space.pairing(&v0, &v)
            })
            .collect()
    }
}

/// `{v₀, γv₀, …, γ^{d−1}v₀}` as columns; fails unless they span.
pub fn cyclic_basis(gamma: &Matrix, v0: &[FieldElement]) -> Result<Matrix> {
    let d = gamma.rows();
    let mut cols: Vec<Vector> = Vec::with_capacity(d);
    let mut v = v0.to_vec();
    for _ in 0..d {
        cols.push(v.clone());
        v = gamma.mul_vec(&v);
    }
    let basis = Matrix::from_columns(gamma.field(), &cols);
    let rank = basis.rank();
    if rank < d {
        return Err(Error::NotCyclic(format!(
            "the translates of v0 span a subspace of dimension {rank} < {d}"
        )));
    }
    Ok(basis)
}

/// Recovers `p` from `(V, Ψ, γ, v₀)` such that `V ≅ B(p, q)` via
/// `Tⁱ ↦ γⁱv₀`, where `q` is the characteristic polynomial of `γ`.
///
/// With `c_n = Ψ(v₀, γⁿv₀)` and `r_n = q_n + Σ_{k=1}^{n} c_k q_{n−k}`, the
/// answer is `p = −ε Σ_{n=0}^{d} r_n Tⁿ`.
pub fn recover_p(space: &BilinearSpace, gamma: &Matrix, v0: &[FieldElement]) -> Result<Poly> {
    let field = space.field();
    let d = space.dim();
    if gamma.rows() != d || gamma.cols() != d || v0.len() != d {
        return Err(Error::Dimension(format!("space has dimension {d}")));
    }
    if gamma.field() != field || v0.iter().any(|x| x.field() != field) {
        return Err(Error::FieldMismatch("isometry or base vector over another field".into()));
    }
    let eps = space.epsilon().element(field);
    let norm = space.pairing(v0, v0);
    if norm != &field.one() + &eps {
        return Err(Error::Space(format!("Ψ(v0, v0) = {norm}, expected 1 + ε")));
    }
    if !space.is_isometry(gamma) {
        return Err(Error::NotIsometry("γ does not preserve the Gram matrix".into()));
    }
    let q = char_poly(gamma)?;
    if !q.is_eps_reciprocal(Sign::Plus) {
        return Err(Error::Space(format!("characteristic polynomial {q} of γ is not reciprocal")));
    }
    cyclic_basis(gamma, v0)?;

    let mut c = vec![field.one()];
    let mut v = v0.to_vec();
    for _ in 1..=d {
        v = gamma.mul_vec(&v);
        c.push(space.pairing(v0, &v));
    }
    let r: Vec<FieldElement> = (0..=d)
        .map(|n| {
            let mut acc = field.zero();
            for k in 0..=n {
                acc += &(&c[k] * &q.coeff(n - k));
            }
            acc
        })
        .collect();
    let p = Poly::new(field, r.iter().map(|x| -(&eps * x)).collect());
    if !p.is_monic() || !p.is_eps_reciprocal(-space.epsilon()) {
        return Err(Error::Invariant(format!("recovered p = {p} is not monic and (−ε)-reciprocal")));
    }
    Ok(p)
}
