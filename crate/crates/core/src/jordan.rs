//! Jordan forms of isometries of nondegenerate `ε`-symmetric spaces.
//!
//! A Jordan form is realized by an isometry iff blocks at `λ` and `λ⁻¹` come
//! in equal numbers for `λ ≠ ±1`, and at `λ = ±1` the blocks of size `m` have
//! even multiplicity whenever `m` is even (`ε = +1`) or odd (`ε = −1`).
//!
//! Realizations are orthogonal sums of three kinds of pieces:
//! * `J_m(λ) ⊕ J_m(λ⁻¹)`: the companion isometry of `(T−λ)^m(T−λ⁻¹)^m`;
//! * `J_m(±1)` of the "natural" type: `B((T−1)^m, (T+1)^m)` for odd `m`
//!   (symmetric), and the symplectic synthesis of `(T∓1)^m` for even `m`;
//! * `J_m(±1) ⊕ J_m(±1)` of the other type: `X ⊕ X` on `[[0, U], [−U, 0]]`
//!   where `X` preserves the natural `U`.

use std::cmp::Ordering;
use std::fmt;

use num_rational::BigRational;

use crate::bezoutian::{BilinearSpace, SkewBezoutian};
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::{Matrix, Vector};
use crate::poly::{char_poly, roots_in_field, Poly, Sign};
use crate::synthesis::{orthogonal_with_charpoly, symplectic_with_charpoly, OrthogonalOptions};

/// `μ` blocks `J_m(λ)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JordanBlock {
    pub lambda: FieldElement,
    pub size: usize,
    pub multiplicity: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JordanSpec {
    field: Field,
    epsilon: Sign,
    blocks: Vec<JordanBlock>,
}

fn element_key(x: &FieldElement) -> BigRational {
    match x {
        FieldElement::Rational(r) => r.clone(),
        FieldElement::Residue { value, .. } => BigRational::from_integer((*value).into()),
    }
}

fn block_order(a: &JordanBlock, b: &JordanBlock) -> Ordering {
    element_key(&a.lambda)
        .cmp(&element_key(&b.lambda))
        .then(a.size.cmp(&b.size))
}

/// Merges repeated `(λ, m)` entries, drops zero multiplicities and sorts.
fn normalize(mut blocks: Vec<JordanBlock>) -> Vec<JordanBlock> {
    blocks.retain(|b| b.multiplicity > 0);
    blocks.sort_by(block_order);
    let mut out: Vec<JordanBlock> = Vec::with_capacity(blocks.len());
    for b in blocks {
        match out.last_mut() {
            Some(last) if last.lambda == b.lambda && last.size == b.size => last.multiplicity += b.multiplicity,
            _ => out.push(b),
        }
    }
    out
}

fn is_pm_one(x: &FieldElement) -> bool {
    x.is_one() || (-x).is_one()
}

impl JordanSpec {
    pub fn new(field: Field, epsilon: Sign, blocks: Vec<JordanBlock>) -> Result<JordanSpec> {
        for b in &blocks {
            if b.lambda.field() != field {
                return Err(Error::FieldMismatch(format!("eigenvalue {} is not in {field}", b.lambda)));
            }
            if b.lambda.is_zero() {
                return Err(Error::JordanSpec("eigenvalue 0: isometries are invertible".into()));
            }
            if b.size == 0 {
                return Err(Error::JordanSpec("block size must be at least 1".into()));
            }
        }
        let blocks = normalize(blocks);
        if blocks.is_empty() {
            return Err(Error::JordanSpec("no blocks".into()));
        }
        Ok(JordanSpec { field, epsilon, blocks })
    }

    /// Parses `"λ:m:μ,λ:m:μ,…"`, e.g. `"1:3:1,-1:2:2,1/2:1:1"`.
    pub fn parse(field: Field, epsilon: Sign, text: &str) -> Result<JordanSpec> {
        let mut blocks = Vec::new();
        for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let parts: Vec<&str> = item.split(':').map(str::trim).collect();
            if parts.len() != 3 {
                return Err(Error::Parse(format!("block `{item}` is not of the form lambda:size:multiplicity")));
            }
            let lambda = field.parse_element(parts[0])?;
            let size = parts[1]
                .parse()
                .map_err(|_| Error::Parse(format!("bad block size `{}`", parts[1])))?;
            let multiplicity = parts[2]
                .parse()
                .map_err(|_| Error::Parse(format!("bad multiplicity `{}`", parts[2])))?;
            blocks.push(JordanBlock { lambda, size, multiplicity });
        }
        JordanSpec::new(field, epsilon, blocks)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn epsilon(&self) -> Sign {
        self.epsilon
    }

    pub fn blocks(&self) -> &[JordanBlock] {
        &self.blocks
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|b| b.size * b.multiplicity).sum()
    }

    pub fn multiplicity(&self, lambda: &FieldElement, size: usize) -> usize {
        multiplicity_in(&self.blocks, lambda, size)
    }

    /// The first violated condition, if any.
    pub fn violation(&self) -> Option<String> {
        blocks_violation(&self.blocks, self.epsilon)
    }
}

impl fmt::Display for JordanSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let items: Vec<String> = self
            .blocks
            .iter()
            .map(|b| format!("{}:{}:{}", b.lambda, b.size, b.multiplicity))
            .collect();
        write!(f, "{}", items.join(","))
    }
}

fn multiplicity_in(blocks: &[JordanBlock], lambda: &FieldElement, size: usize) -> usize {
    blocks
        .iter()
        .find(|b| b.lambda == *lambda && b.size == size)
        .map_or(0, |b| b.multiplicity)
}

fn symmetry_violation(blocks: &[JordanBlock]) -> Option<String> {
    for b in blocks.iter().filter(|b| !is_pm_one(&b.lambda)) {
        let inv = b.lambda.inv().expect("nonzero eigenvalue");
        let partner = multiplicity_in(blocks, &inv, b.size);
        if partner != b.multiplicity {
            return Some(format!(
                "mu({}, {}) = {} but mu({inv}, {}) = {partner}",
                b.lambda, b.size, b.multiplicity, b.size
            ));
        }
    }
    None
}

fn parity_violation(blocks: &[JordanBlock], epsilon: Sign) -> Option<String> {
    // ε = +1 pairs even sizes, ε = −1 pairs odd sizes
    let paired_size_parity = if epsilon == Sign::Plus { 0 } else { 1 };
    blocks
        .iter()
        .find(|b| is_pm_one(&b.lambda) && b.size % 2 == paired_size_parity && b.multiplicity % 2 == 1)
        .map(|b| {
            let kind = if epsilon == Sign::Plus { "even" } else { "odd" };
            format!(
                "mu({}, {}) = {} must be even for {kind} block sizes when epsilon = {epsilon}",
                b.lambda, b.size, b.multiplicity
            )
        })
}

fn blocks_violation(blocks: &[JordanBlock], epsilon: Sign) -> Option<String> {
    symmetry_violation(blocks).or_else(|| parity_violation(blocks, epsilon))
}

pub fn feasible(spec: &JordanSpec) -> bool {
    spec.violation().is_none()
}

fn linear_power(lambda: &FieldElement, m: usize) -> Poly {
    Poly::linear(lambda).pow(m as u32)
}

/// `J_m(λ)`, `λ = ±1`, preserving a form of its natural type
/// (symmetric for odd `m`, skew for even `m`).
fn natural_unipotent(field: Field, lambda: &FieldElement, m: usize) -> Result<(BilinearSpace, Matrix)> {
    if m.is_multiple_of(2) {
        let r = symplectic_with_charpoly(&linear_power(lambda, m))?;
        Ok((r.space, r.gamma))
    } else {
        let one = field.one();
        let bez = SkewBezoutian::build(
            &linear_power(&one, m),
            &linear_power(&-&one, m),
            Sign::Plus,
        )?;
        bez.require_nondegenerate()?;
        // γ has characteristic polynomial (T+1)^m, δ has (T−1)^m
        let m_iso = if lambda.is_one() { bez.delta() } else { bez.gamma().clone() };
        Ok((bez.space().clone(), m_iso))
    }
}

/// `X ⊕ X` on `[[0, U], [−U, 0]]`, which has the opposite symmetry type to `U`.
fn doubled(space: &BilinearSpace, x: &Matrix) -> Result<(BilinearSpace, Matrix)> {
    let field = space.field();
    let n = space.dim();
    let mut a = Matrix::zeros(field, 2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let u = space.gram().get(i, j);
            a.set(i, n + j, u.clone());
            a.set(n + i, j, -u);
        }
    }
    let space = BilinearSpace::new(a, -space.epsilon())?;
    Ok((space, Matrix::block_diagonal(field, &[x.clone(), x.clone()])))
}

fn pair_block(spec: &JordanSpec, lambda: &FieldElement, m: usize) -> Result<(BilinearSpace, Matrix)> {
    let inv = lambda.inv()?;
    let q = &linear_power(lambda, m) * &linear_power(&inv, m);
    let r = match spec.epsilon {
        Sign::Plus => orthogonal_with_charpoly(&q, OrthogonalOptions::default())?,
        Sign::Minus => symplectic_with_charpoly(&q)?,
    };
    Ok((r.space, r.gamma))
}

/// A nondegenerate `ε`-symmetric space and an isometry with the given Jordan form.
pub fn realize(spec: &JordanSpec) -> Result<(BilinearSpace, Matrix)> {
    if let Some(reason) = spec.violation() {
        return Err(Error::InfeasibleJordan(reason));
    }
    let field = spec.field;
    let mut pieces: Vec<(BilinearSpace, Matrix)> = Vec::new();
    for b in &spec.blocks {
        if is_pm_one(&b.lambda) {
            let natural = if b.size % 2 == 1 { Sign::Plus } else { Sign::Minus };
            let (u, x) = natural_unipotent(field, &b.lambda, b.size)?;
            if natural == spec.epsilon {
                pieces.extend(std::iter::repeat_n((u, x), b.multiplicity));
            } else {
                let piece = doubled(&u, &x)?;
                pieces.extend(std::iter::repeat_n(piece, b.multiplicity / 2));
            }
        } else {
            // handle each {λ, λ⁻¹} pair once, from its smaller member
            let inv = b.lambda.inv()?;
            if element_key(&b.lambda) > element_key(&inv) {
                continue;
            }
            let piece = pair_block(spec, &b.lambda, b.size)?;
            pieces.extend(std::iter::repeat_n(piece, b.multiplicity));
        }
    }
    let spaces: Vec<BilinearSpace> = pieces.iter().map(|(s, _)| s.clone()).collect();
    let isos: Vec<Matrix> = pieces.into_iter().map(|(_, m)| m).collect();
    let space = BilinearSpace::direct_sum(&spaces)?;
    Ok((space, Matrix::block_diagonal(field, &isos)))
}

fn shifted(m: &Matrix, lambda: &FieldElement) -> Matrix {
    m - &Matrix::identity(m.field(), m.rows()).scale(lambda)
}

/// Eigenvalues with algebraic multiplicities; errors unless the
/// characteristic polynomial splits over the field.
fn split_eigenvalues(m: &Matrix) -> Result<Vec<(FieldElement, usize)>> {
    let q = char_poly(m)?;
    let roots = roots_in_field(&q)?;
    let total: usize = roots.iter().map(|(_, k)| k).sum();
    if total != m.rows() {
        return Err(Error::EigenvaluesOutsideField(format!(
            "characteristic polynomial {q} does not split over {}",
            m.field()
        )));
    }
    Ok(roots)
}

/// Block multiplicities from `μ(λ, m) = r_{m−1} − 2r_m + r_{m+1}`, with
/// `r_k = rank (M − λ)^k`.
pub fn jordan_multiplicities(m: &Matrix) -> Result<Vec<JordanBlock>> {
    if !m.is_square() {
        return Err(Error::Dimension("Jordan form of a non-square matrix".into()));
    }
    let mut blocks = Vec::new();
    for (lambda, alg) in split_eigenvalues(m)? {
        let n = shifted(m, &lambda);
        let mut ranks = vec![m.rows()];
        let mut power = Matrix::identity(m.field(), m.rows());
        for _ in 0..=alg {
            power = &power * &n;
            ranks.push(power.rank());
        }
        for size in 1..=alg {
            let mu = ranks[size - 1] + ranks[size + 1] - 2 * ranks[size];
            if mu > 0 {
                blocks.push(JordanBlock { lambda: lambda.clone(), size, multiplicity: mu });
            }
        }
    }
    Ok(normalize(blocks))
}

/// The Jordan form of `m` as a spec for the given symmetry type.
pub fn jordan_spec(m: &Matrix, epsilon: Sign) -> Result<JordanSpec> {
    JordanSpec::new(m.field(), epsilon, jordan_multiplicities(m)?)
}

/// Outcome of checking the necessary conditions on a concrete isometry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NecessityReport {
    pub blocks: Vec<JordanBlock>,
    /// `μ(λ, m) = μ(λ⁻¹, m)` for `λ ≠ ±1`.
    pub multiplicity_symmetry: bool,
    /// The `W_λ = V_λ ⊕ V_{λ⁻¹}` are mutually orthogonal and nondegenerate.
    pub orthogonal_decomposition: bool,
    /// Parity of `μ(±1, m)`.
    pub parity: bool,
    /// For `ε = +1`: on each `V_{±1}` the pairing `⟨N₊u, v⟩ − ⟨N₋u, v⟩`,
    /// with `±M = 1 + N₊` and `±M⁻¹ = 1 + N₋`, is alternating with rank
    /// `dim V_{±1} − #blocks`. `None` for `ε = −1`.
    pub skew_pairing: Option<bool>,
    pub failures: Vec<String>,
}

impl NecessityReport {
    pub fn passed(&self) -> bool {
        self.multiplicity_symmetry
            && self.orthogonal_decomposition
            && self.parity
            && self.skew_pairing.unwrap_or(true)
    }
}

fn generalized_eigenspace(m: &Matrix, lambda: &FieldElement, alg: usize) -> Vec<Vector> {
    shifted(m, lambda).pow(alg as u64).kernel()
}

fn cross_gram(gram: &Matrix, a: &[Vector], b: &[Vector]) -> Matrix {
    let field = gram.field();
    let ma = Matrix::from_columns(field, a);
    let mb = Matrix::from_columns(field, b);
    &(&ma.transpose() * gram) * &mb
}

fn skew_pairing_ok(space: &BilinearSpace, m: &Matrix, lambda: &FieldElement, alg: usize, blocks: usize) -> Result<bool> {
    let field = space.field();
    let basis = generalized_eigenspace(m, lambda, alg);
    let id = Matrix::identity(field, m.rows());
    let unipotent = m.scale(lambda);
    let n_plus = &unipotent - &id;
    let n_minus = &unipotent.inverse()? - &id;
    let pairing = &(&n_plus - &n_minus).transpose() * space.gram();
    let s = cross_gram(&pairing, &basis, &basis);
    let alternating = s.transpose() == -&s;
    Ok(alternating && s.rank() == basis.len() - blocks)
}

pub fn verify_necessity(space: &BilinearSpace, m: &Matrix) -> Result<NecessityReport> {
    if !space.is_nondegenerate() {
        return Err(Error::Degenerate("space is degenerate".into()));
    }
    if !space.is_isometry(m) {
        return Err(Error::NotIsometry("matrix does not preserve the form".into()));
    }
    let eigen = split_eigenvalues(m)?;
    let blocks = jordan_multiplicities(m)?;
    let mut failures = Vec::new();

    let symmetry = symmetry_violation(&blocks);
    if let Some(reason) = &symmetry {
        failures.push(reason.clone());
    }
    let parity = parity_violation(&blocks, space.epsilon());
    if let Some(reason) = &parity {
        failures.push(reason.clone());
    }

    // group eigenvalues into classes {λ, λ⁻¹}
    let mut groups: Vec<Vec<Vector>> = Vec::new();
    let mut seen: Vec<FieldElement> = Vec::new();
    for (lambda, alg) in &eigen {
        if seen.contains(lambda) {
            continue;
        }
        let inv = lambda.inv()?;
        let mut w = generalized_eigenspace(m, lambda, *alg);
        seen.push(lambda.clone());
        if inv != *lambda {
            if let Some((_, alg_inv)) = eigen.iter().find(|(x, _)| *x == inv) {
                w.extend(generalized_eigenspace(m, &inv, *alg_inv));
            }
            seen.push(inv);
        }
        groups.push(w);
    }
    let mut orthogonal = true;
    for (i, a) in groups.iter().enumerate() {
        if cross_gram(space.gram(), a, a).determinant()?.is_zero() {
            orthogonal = false;
            failures.push(format!("W block {i} is degenerate"));
        }
        for (j, b) in groups.iter().enumerate().skip(i + 1) {
            if !cross_gram(space.gram(), a, b).is_zero() {
                orthogonal = false;
                failures.push(format!("W blocks {i} and {j} are not orthogonal"));
            }
        }
    }

    let skew_pairing = if space.epsilon() == Sign::Plus {
        let mut ok = true;
        for (lambda, alg) in eigen.iter().filter(|(x, _)| is_pm_one(x)) {
            let count: usize = blocks.iter().filter(|b| b.lambda == *lambda).map(|b| b.multiplicity).sum();
            if !skew_pairing_ok(space, m, lambda, *alg, count)? {
                ok = false;
                failures.push(format!("skew pairing on the {lambda} eigenspace has the wrong rank"));
            }
        }
        Some(ok)
    } else {
        None
    };

    Ok(NecessityReport {
        blocks,
        multiplicity_symmetry: symmetry.is_none(),
        orthogonal_decomposition: orthogonal,
        parity: parity.is_none(),
        skew_pairing,
        failures,
    })
}
