//! Nondegenerate `ε`-symmetric spaces carrying an isometry with a prescribed
//! reciprocal characteristic polynomial `q`.
//!
//! * Symplectic, `deg q = 2m`: `B(q + T^m, q)` with `ε = −1`, of determinant 1.
//! * Symmetric: write `q = (T−1)^{v₊}(T+1)^{v₋}q₀` and take
//!   `V = B(p₀, q₀) ⊥ V₊ ⊥ V₋` with `p₀ = (T−1)^e (T+1)^{d₀−e}`, `e` odd, and
//!   `γ = γ₀ ⊥ id ⊥ (−id)`. The spinor norm of `γ` is `q₀(−1)·det(V₋)`, so
//!   choosing the form on `V₋` prescribes it whenever `v₋ > 0`.

use crate::bezoutian::{BilinearSpace, SkewBezoutian};
use crate::error::{Error, Result};
use crate::field::{square_class, FieldElement, SquareClass};
use crate::matrix::Matrix;
use crate::poly::{Poly, Sign};

/// Shape of the orthogonal decomposition `V₀ ⊥ V₊ ⊥ V₋` (only `V₀` for the
/// symplectic construction).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// `q₀`, the factor of `q` prime to `T ∓ 1` (all of `q` in the symplectic case).
    pub core_q: Poly,
    pub core_dim: usize,
    pub plus_dim: usize,
    pub minus_dim: usize,
    pub plus_form: Vec<FieldElement>,
    pub minus_form: Vec<FieldElement>,
}

#[derive(Clone, Debug)]
pub struct SynthesisResult {
    pub space: BilinearSpace,
    pub gamma: Matrix,
    /// The partner polynomial of the Bezoutian block, absent when `V₀ = 0`.
    pub companion_p: Option<Poly>,
    pub blocks: Decomposition,
}

/// Options for [`orthogonal_with_charpoly`]. `None` forms mean the identity.
#[derive(Clone, Debug)]
pub struct OrthogonalOptions {
    pub e: usize,
    pub plus_form: Option<Vec<FieldElement>>,
    pub minus_form: Option<Vec<FieldElement>>,
}

impl Default for OrthogonalOptions {
    fn default() -> Self {
        OrthogonalOptions { e: 1, plus_form: None, minus_form: None }
    }
}

fn require_monic_reciprocal(q: &Poly) -> Result<usize> {
    if !q.is_monic() {
        return Err(Error::Synthesis(format!("q = {q} is not monic")));
    }
    let d = q.degree().expect("monic");
    if d == 0 {
        return Err(Error::Synthesis("q must have degree at least 1".into()));
    }
    if !q.is_eps_reciprocal(Sign::Plus) {
        return Err(Error::Synthesis(format!("q = {q} is not reciprocal")));
    }
    Ok(d)
}

/// Skew-symmetric space of dimension `d = deg q` and determinant 1 with an
/// isometry of characteristic polynomial `q`, realized as `B(q + T^{d/2}, q)`.
pub fn symplectic_with_charpoly(q: &Poly) -> Result<SynthesisResult> {
    let d = require_monic_reciprocal(q)?;
    if d % 2 == 1 {
        return Err(Error::Synthesis(format!("symplectic synthesis needs even degree, got {d}")));
    }
    let field = q.field();
    let p = q + &Poly::monomial(field.one(), d / 2);
    let bez = SkewBezoutian::build(&p, q, Sign::Minus)?;
    if !bez.space().determinant().is_one() {
        return Err(Error::Invariant(format!(
            "symplectic Bezoutian has determinant {}",
            bez.space().determinant()
        )));
    }
    Ok(SynthesisResult {
        space: bez.space().clone(),
        gamma: bez.gamma().clone(),
        companion_p: Some(p),
        blocks: Decomposition {
            core_q: q.clone(),
            core_dim: d,
            plus_dim: 0,
            minus_dim: 0,
            plus_form: Vec::new(),
            minus_form: Vec::new(),
        },
    })
}

fn diagonal_form(
    given: Option<Vec<FieldElement>>,
    dim: usize,
    q: &Poly,
    label: &str,
) -> Result<Vec<FieldElement>> {
    let field = q.field();
    let form = given.unwrap_or_else(|| vec![field.one(); dim]);
    if form.len() != dim {
        return Err(Error::Synthesis(format!(
            "{label} form has {} entries, but {label} has dimension {dim}",
            form.len()
        )));
    }
    if form.iter().any(|x| x.field() != field) {
        return Err(Error::FieldMismatch(format!("{label} form over another field")));
    }
    if form.iter().any(FieldElement::is_zero) {
        return Err(Error::Synthesis(format!("{label} form is degenerate")));
    }
    Ok(form)
}

/// Symmetric nondegenerate space of dimension `deg q` with an isometry of
/// characteristic polynomial `q`.
pub fn orthogonal_with_charpoly(q: &Poly, opts: OrthogonalOptions) -> Result<SynthesisResult> {
    require_monic_reciprocal(q)?;
    let field = q.field();
    let (v_plus, v_minus, q0) = q.factor_pm_one()?;
    let d0 = q0.degree().expect("monic");
    let plus_form = diagonal_form(opts.plus_form, v_plus, q, "V+")?;
    let minus_form = diagonal_form(opts.minus_form, v_minus, q, "V-")?;

    let mut grams = Vec::new();
    let mut gammas = Vec::new();
    let mut companion_p = None;
    if d0 > 0 {
        let e = opts.e;
        if e.is_multiple_of(2) || e > d0 {
            return Err(Error::Synthesis(format!(
                "e must be odd with 0 <= e <= {d0}, got {e}"
            )));
        }
        let t_minus = Poly::linear(&field.one());
        let t_plus = Poly::linear(&-field.one());
        let p0 = &t_minus.pow(e as u32) * &t_plus.pow((d0 - e) as u32);
        let bez = SkewBezoutian::build(&p0, &q0, Sign::Plus)?;
        bez.require_nondegenerate()?;
        grams.push(bez.gram().clone());
        gammas.push(bez.gamma().clone());
        companion_p = Some(p0);
    }
    grams.push(Matrix::diagonal(field, &plus_form));
    gammas.push(Matrix::identity(field, v_plus));
    grams.push(Matrix::diagonal(field, &minus_form));
    gammas.push(-&Matrix::identity(field, v_minus));

    let space = BilinearSpace::new(Matrix::block_diagonal(field, &grams), Sign::Plus)?;
    Ok(SynthesisResult {
        space,
        gamma: Matrix::block_diagonal(field, &gammas),
        companion_p,
        blocks: Decomposition {
            core_q: q0,
            core_dim: d0,
            plus_dim: v_plus,
            minus_dim: v_minus,
            plus_form,
            minus_form,
        },
    })
}

/// Symmetric space with an isometry of characteristic polynomial `q` and
/// spinor norm `s`.
///
/// When `−1` is a root of `q` the form on `V₋` is `diag(s·q₀(−1), 1, …, 1)`.
/// Otherwise the spinor norm is forced to be the class of `q₀(−1)`, and any
/// other request fails.
pub fn orthogonal_with_spinor(q: &Poly, s: &SquareClass) -> Result<SynthesisResult> {
    require_monic_reciprocal(q)?;
    let field = q.field();
    if s.field() != field {
        return Err(Error::FieldMismatch(format!("spinor target over {}, q over {field}", s.field())));
    }
    let (_, v_minus, q0) = q.factor_pm_one()?;
    let q0_at_minus_one = q0.eval(&-field.one());
    if v_minus == 0 {
        let forced = square_class(&q0_at_minus_one)?;
        if forced != *s {
            return Err(Error::Synthesis(format!(
                "spinor norm forced to q0(-1) = {forced} since -1 is not a root of q; {s} is unattainable"
            )));
        }
        return orthogonal_with_charpoly(q, OrthogonalOptions::default());
    }
    let mut minus_form = vec![field.one(); v_minus];
    minus_form[0] = &s.representative() * &q0_at_minus_one;
    orthogonal_with_charpoly(
        q,
        OrthogonalOptions { minus_form: Some(minus_form), ..OrthogonalOptions::default() },
    )
}

/// `p ± T^m` for monic reciprocal `p` of degree `2m`.
pub fn mpv_modification(p: &Poly, sign: Sign) -> Result<Poly> {
    let d = require_monic_reciprocal(p)?;
    if d % 2 == 1 {
        return Err(Error::Synthesis(format!("modification needs even degree, got {d}")));
    }
    Ok(p + &Poly::monomial(sign.element(p.field()), d / 2))
}
