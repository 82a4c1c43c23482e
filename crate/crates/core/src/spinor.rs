//! Spinor norms and discriminants of isometries of symmetric spaces.
//!
//! The spinor norm of `r_{v₁}⋯r_{v_k}` is the class of `∏Ψ(vᵢ, vᵢ)` in
//! `k*/(k*)²`. Powers `(−2)^{−n}` only matter through the parity of `n`, so
//! they are evaluated as `(−2)^{n mod 2}`.
//!
//! The formula path splits `V = V₋ ⊥ V'` where `V₋ = ker (γ+1)^{v₋}` is the
//! generalized `−1` eigenspace. On `V'` Zassenhaus applies directly; on `V₋`
//! the isometry is `−id` times a unipotent, and unipotent isometries have
//! trivial spinor norm (they are squares in characteristic zero and of odd
//! order over `F_p`). This agrees with the literal eigenspace `ker(γ+1)`
//! whenever `γ` is semisimple at `−1`, and stays correct when it is not.

use crate::bezoutian::BilinearSpace;
use crate::error::{Error, Result};
use crate::field::{class_mul, square_class, Field, FieldElement, SquareClass};
use crate::matrix::{Matrix, Vector};
use crate::poly::{char_poly, discriminant, Poly, Reciprocity, Sign};

/// The generalized `−1` eigenspace of an isometry.
#[derive(Clone, Debug)]
pub struct EigenspaceSplit {
    pub v_minus_basis: Vec<Vector>,
    pub v_minus: usize,
    pub restricted_gram: Matrix,
    /// `q = (T+1)^{v₋}·q₋`.
    pub q_minus: Poly,
}

fn require_orthogonal(space: &BilinearSpace, gamma: &Matrix) -> Result<()> {
    if space.epsilon() != Sign::Plus {
        return Err(Error::Spinor("spinor norms need a symmetric space".into()));
    }
    if !space.is_nondegenerate() {
        return Err(Error::Degenerate("space is degenerate".into()));
    }
    if !space.is_isometry(gamma) {
        return Err(Error::NotIsometry("matrix does not preserve the form".into()));
    }
    Ok(())
}

fn minus_two_power(field: Field, n: usize) -> FieldElement {
    if n.is_multiple_of(2) {
        field.one()
    } else {
        field.from_i64(-2)
    }
}

/// Generalized eigenspace `ker (γ − λ)^{m}` for `λ = ±1`, where `m` is the
/// multiplicity of `λ` in the characteristic polynomial.
fn generalized_eigenspace(gamma: &Matrix, q: &Poly, at: Sign) -> Result<(Vec<Vector>, Poly)> {
    let field = gamma.field();
    let lambda = at.element(field);
    let (m, rest) = q.strip_root(&lambda);
    let shifted = gamma - &Matrix::identity(field, gamma.rows()).scale(&lambda);
    let basis = shifted.pow(m as u64).kernel();
    if basis.len() != m {
        return Err(Error::Invariant(format!(
            "generalized eigenspace has dimension {}, multiplicity is {m}",
            basis.len()
        )));
    }
    Ok((basis, rest))
}

pub fn eigenspace_split(space: &BilinearSpace, gamma: &Matrix) -> Result<EigenspaceSplit> {
    require_orthogonal(space, gamma)?;
    let q = char_poly(gamma)?;
    let (basis, q_minus) = generalized_eigenspace(gamma, &q, Sign::Minus)?;
    let restricted_gram = space.gram().restrict_form(&basis);
    if restricted_gram.determinant()?.is_zero() {
        return Err(Error::Invariant("-1 eigenspace is degenerate".into()));
    }
    Ok(EigenspaceSplit { v_minus: basis.len(), v_minus_basis: basis, restricted_gram, q_minus })
}

/// Class of `(−2)^{−dim V}·q(−1)`, for `q(−1) ≠ 0`.
pub fn zassenhaus(space: &BilinearSpace, gamma: &Matrix) -> Result<SquareClass> {
    require_orthogonal(space, gamma)?;
    let field = space.field();
    let q = char_poly(gamma)?;
    let at_minus_one = q.eval(&-field.one());
    if at_minus_one.is_zero() {
        return Err(Error::Spinor("q(-1) = 0; use spinor_norm instead".into()));
    }
    square_class(&(&minus_two_power(field, space.dim()) * &at_minus_one))
}

/// Class of `det(V₋)·(−2)^{−(dim V − v₋)}·q₋(−1)`.
pub fn spinor_norm(space: &BilinearSpace, gamma: &Matrix) -> Result<SquareClass> {
    let split = eigenspace_split(space, gamma)?;
    let field = space.field();
    let det_minus = split.restricted_gram.determinant()?;
    let value = &(&det_minus * &minus_two_power(field, space.dim() - split.v_minus))
        * &split.q_minus.eval(&-field.one());
    square_class(&value)
}

/// The reflection `x ↦ x − 2Ψ(x, v)/Ψ(v, v)·v`.
pub fn reflection(space: &BilinearSpace, v: &[FieldElement]) -> Result<Matrix> {
    let field = space.field();
    let d = space.dim();
    if v.len() != d {
        return Err(Error::Dimension(format!("vector of length {} in dimension {d}", v.len())));
    }
    let norm = space.pairing(v, v);
    if norm.is_zero() {
        return Err(Error::Spinor("reflection at an isotropic vector".into()));
    }
    let s = &field.from_i64(2) * &norm.inv()?;
    let w: Vector = (0..d)
        .map(|j| crate::matrix::dot(v, &space.gram().column(j), field))
        .collect();
    let mut r = Matrix::identity(field, d);
    for i in 0..d {
        for j in 0..d {
            let x = r.get(i, j) - &(&s * &(&v[i] * &w[j]));
            r.set(i, j, x);
        }
    }
    Ok(r)
}

/// Anisotropic vectors `w₁, …, w_k` with `γ = r_{w_k}⋯r_{w₁}`, `k ≤ 2·dim V`.
///
/// Walks an orthogonal basis `u₁, …, u_d`. With the remaining map `φ` fixing
/// `u₁, …, u_{i−1}`, set `x = u_i`, `y = φ(x)`: if `x − y` is anisotropic then
/// `r_{x−y}` swaps them, otherwise `Ψ(x+y, x+y) = 4Ψ(x, x) ≠ 0` and
/// `r_x r_{x+y}` sends `y` to `x`. Both fix the earlier `u_j`.
pub fn reflection_decomposition(space: &BilinearSpace, gamma: &Matrix) -> Result<Vec<Vector>> {
    require_orthogonal(space, gamma)?;
    let field = space.field();
    let (basis, _) = space.gram().congruence_diagonalize()?;
    let mut phi = gamma.clone();
    let mut vectors = Vec::new();
    for i in 0..space.dim() {
        let x = basis.column(i);
        let y = phi.mul_vec(&x);
        if x == y {
            continue;
        }
        let diff: Vector = x.iter().zip(&y).map(|(a, b)| a - b).collect();
        if !space.pairing(&diff, &diff).is_zero() {
            phi = &reflection(space, &diff)? * &phi;
            vectors.push(diff);
        } else {
            let sum: Vector = x.iter().zip(&y).map(|(a, b)| a + b).collect();
            phi = &reflection(space, &sum)? * &phi;
            phi = &reflection(space, &x)? * &phi;
            vectors.push(sum);
            vectors.push(x);
        }
    }
    if phi != Matrix::identity(field, space.dim()) {
        return Err(Error::Invariant("reflection decomposition did not terminate at the identity".into()));
    }
    Ok(vectors)
}

pub fn spinor_norm_by_reflections(space: &BilinearSpace, gamma: &Matrix) -> Result<SquareClass> {
    let mut acc = SquareClass::one(space.field());
    for w in reflection_decomposition(space, gamma)? {
        acc = class_mul(&acc, &square_class(&space.pairing(&w, &w))?)?;
    }
    Ok(acc)
}

pub fn det_class(space: &BilinearSpace) -> Result<SquareClass> {
    let det = space.determinant();
    if det.is_zero() {
        return Err(Error::Degenerate("space is degenerate".into()));
    }
    square_class(&det)
}

/// `(−1)^{d(d−1)/2}·det(V, Ψ)`.
pub fn disc(space: &BilinearSpace) -> Result<SquareClass> {
    let d = space.dim();
    let det = det_class(space)?;
    if (d * d.saturating_sub(1) / 2).is_multiple_of(2) {
        Ok(det)
    } else {
        class_mul(&det, &square_class(&space.field().from_i64(-1))?)
    }
}

/// `det V ≡ det(V₋)·det(V₊)·q₀(−1)·q₀(1)`, with `V±` the generalized `±1`
/// eigenspaces.
pub fn disc_relation_check(space: &BilinearSpace, gamma: &Matrix) -> Result<bool> {
    require_orthogonal(space, gamma)?;
    let field = space.field();
    let q = char_poly(gamma)?;
    if q.reciprocity_type()? == Reciprocity::Neither {
        return Err(Error::Spinor(format!("characteristic polynomial {q} is not reciprocal")));
    }
    let (minus, rest) = generalized_eigenspace(gamma, &q, Sign::Minus)?;
    let (plus, q0) = generalized_eigenspace(gamma, &rest, Sign::Plus)?;
    let det_minus = space.gram().restrict_form(&minus).determinant()?;
    let det_plus = space.gram().restrict_form(&plus).determinant()?;
    let rhs = &(&det_minus * &det_plus) * &(&q0.eval(&-field.one()) * &q0.eval(&field.one()));
    if rhs.is_zero() {
        return Ok(false);
    }
    Ok(det_class(space)? == square_class(&rhs)?)
}

fn require_separable_even(q: &Poly) -> Result<usize> {
    let d = q.degree().unwrap_or(0);
    if !q.is_monic() || d == 0 || d % 2 == 1 {
        return Err(Error::Spinor(format!("{q} is not monic of positive even degree")));
    }
    if !q.is_eps_reciprocal(Sign::Plus) {
        return Err(Error::Spinor(format!("{q} is not reciprocal")));
    }
    if q.gcd(&q.derivative()).degree() != Some(0) {
        return Err(Error::Spinor(format!("{q} is not separable")));
    }
    Ok(d / 2)
}

/// `disc q ≡ (−1)^m q(−1) q(1)` for separable reciprocal `q` of degree `2m`.
pub fn edwards_disc_check(q: &Poly) -> Result<bool> {
    let m = require_separable_even(q)?;
    let field = q.field();
    let mut rhs = &q.eval(&-field.one()) * &q.eval(&field.one());
    if m % 2 == 1 {
        rhs = -rhs;
    }
    if rhs.is_zero() {
        return Ok(false);
    }
    Ok(square_class(&discriminant(q)?)? == square_class(&rhs)?)
}

/// `disc(V, Ψ) ≡ disc(q)` when `q = char_poly(γ)` is separable reciprocal of
/// even degree.
pub fn baeza_edwards_check(space: &BilinearSpace, gamma: &Matrix) -> Result<bool> {
    require_orthogonal(space, gamma)?;
    let q = char_poly(gamma)?;
    require_separable_even(&q)?;
    Ok(disc(space)? == square_class(&discriminant(&q)?)?)
}
