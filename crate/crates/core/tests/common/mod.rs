// Shared generators and independent oracles for the integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use skewbez::field::{class_mul, square_class};
use skewbez::jordan::{JordanBlock, JordanSpec};
use skewbez::matrix::{Matrix, Vector};
use skewbez::poly::{resultant, Poly, Sign};
use skewbez::spinor::reflection;
use skewbez::{BilinearSpace, Field, FieldElement, SquareClass};

pub use rand::SeedableRng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const Q: Field = Field::Rational;

pub fn fields() -> Vec<Field> {
    let mut out = vec![Q];
    for p in [3, 5, 13, 101] {
        out.push(Field::prime(p).unwrap());
    }
    out
}

pub fn random_field(rng: &mut Rng8) -> Field {
    *fields().choose(rng).unwrap()
}

/// Monic polynomial with `a_k = s·a_{d−k}`; for `s = −1` and even `d` the
/// middle coefficient is forced to 0.
pub fn random_symmetric_poly(rng: &mut Rng8, field: Field, d: usize, s: i64, bound: i64) -> Poly {
    let mut c = vec![0i64; d + 1];
    c[d] = 1;
    c[0] = s;
    for k in 1..=d / 2 {
        if 2 * k == d && s == -1 {
            continue;
        }
        let a = rng.gen_range(-bound..=bound);
        c[k] = a;
        c[d - k] = s * a;
    }
    // d even, s = +1: the middle coefficient was drawn once and mirrored onto itself
    Poly::from_i64(field, &c)
}

pub fn random_reciprocal(rng: &mut Rng8, field: Field, d: usize, bound: i64) -> Poly {
    random_symmetric_poly(rng, field, d, 1, bound)
}

/// `(p, q)` with `q` reciprocal, `p` `(−ε)`-reciprocal, both monic of degree
/// `d`, and `Res(p, q) ≠ 0`.
pub fn random_pair(rng: &mut Rng8, field: Field, d: usize, eps: Sign) -> (Poly, Poly) {
    loop {
        let q = random_reciprocal(rng, field, d, 3);
        let p = random_symmetric_poly(rng, field, d, -eps.value(), 3);
        if !resultant(&p, &q).unwrap().is_zero() {
            return (p, q);
        }
    }
}

pub fn random_sign(rng: &mut Rng8) -> Sign {
    if rng.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

/// Resultant as the Sylvester determinant, rows of `p` first.
pub fn sylvester_resultant(p: &Poly, q: &Poly) -> FieldElement {
    let field = p.field();
    let m = p.degree().unwrap();
    let n = q.degree().unwrap();
    let size = m + n;
    let mut s = Matrix::zeros(field, size, size);
    for i in 0..n {
        for (k, c) in p.coeffs().iter().enumerate() {
            s.set(i, i + m - k, c.clone());
        }
    }
    for i in 0..m {
        for (k, c) in q.coeffs().iter().enumerate() {
            s.set(n + i, i + n - k, c.clone());
        }
    }
    s.determinant().unwrap()
}

/// Power series coefficients `c_0, …, c_n` of `num/den`, computed by the
/// recurrence `den·w = num` over the field.
pub fn series_oracle(num: &Poly, den: &Poly, n: usize) -> Vec<FieldElement> {
    let inv = den.coeff(0).inv().unwrap();
    let mut w: Vec<FieldElement> = Vec::new();
    for k in 0..=n {
        let mut acc = num.coeff(k);
        for j in 1..=k {
            acc = &acc - &(&den.coeff(j) * &w[k - j]);
        }
        w.push(&acc * &inv);
    }
    w
}

pub fn random_nonzero(rng: &mut Rng8, field: Field, bound: i64) -> FieldElement {
    loop {
        let x = field.from_i64(rng.gen_range(-bound..=bound));
        if !x.is_zero() {
            return x;
        }
    }
}

pub fn random_diagonal_space(rng: &mut Rng8, field: Field, dim: usize) -> BilinearSpace {
    let entries: Vec<FieldElement> = (0..dim).map(|_| random_nonzero(rng, field, 6)).collect();
    BilinearSpace::new(Matrix::diagonal(field, &entries), Sign::Plus).unwrap()
}

/// A product of `k` reflections at random anisotropic vectors, with the
/// product of their norms as a square class.
pub fn random_reflection_product(rng: &mut Rng8, space: &BilinearSpace, k: usize) -> (Matrix, SquareClass) {
    let field = space.field();
    let d = space.dim();
    let mut m = Matrix::identity(field, d);
    let mut class = SquareClass::one(field);
    let mut done = 0;
    while done < k {
        let v: Vector = (0..d).map(|_| field.from_i64(rng.gen_range(-3..=3))).collect();
        let norm = space.pairing(&v, &v);
        if norm.is_zero() {
            continue;
        }
        m = &m * &reflection(space, &v).unwrap();
        class = class_mul(&class, &square_class(&norm).unwrap()).unwrap();
        done += 1;
    }
    (m, class)
}

fn block(field: Field, lambda: i64, den: i64, size: usize, mult: usize) -> JordanBlock {
    let lambda = &field.from_i64(lambda) * &field.from_i64(den).inv().unwrap();
    JordanBlock { lambda, size, multiplicity: mult }
}

/// A random Jordan form satisfying the realizability conditions, of
/// dimension at most `max_dim`, over `Q` with `λ ∈ {±1, 2, 3, 1/2, 1/3}`.
pub fn random_feasible_spec(rng: &mut Rng8, max_dim: usize) -> JordanSpec {
    let eps = random_sign(rng);
    loop {
        let mut blocks = Vec::new();
        let mut dim = 0;
        for _ in 0..rng.gen_range(1..=3) {
            let size = rng.gen_range(1..=3usize);
            match rng.gen_range(0..4) {
                0 | 1 => {
                    let lambda = if rng.gen_bool(0.5) { 1 } else { -1 };
                    let paired = (eps == Sign::Plus) == (size % 2 == 0);
                    let mult = if paired { 2 } else { rng.gen_range(1..=2) };
                    dim += size * mult;
                    blocks.push(block(Q, lambda, 1, size, mult));
                }
                _ => {
                    let lambda = if rng.gen_bool(0.5) { 2 } else { 3 };
                    dim += 2 * size;
                    blocks.push(block(Q, lambda, 1, size, 1));
                    blocks.push(block(Q, 1, lambda, size, 1));
                }
            }
        }
        if dim <= max_dim {
            return JordanSpec::new(Q, eps, blocks).unwrap();
        }
    }
}

/// Breaks one of the conditions on a feasible spec: an unpaired `λ = 2`
/// block of size 4 (larger than any generated block), or an odd number of
/// blocks of the paired parity at `λ = 1`.
pub fn make_infeasible(rng: &mut Rng8, spec: &JordanSpec) -> JordanSpec {
    let mut blocks = spec.blocks().to_vec();
    if rng.gen_bool(0.5) {
        blocks.push(block(Q, 2, 1, 4, 1));
    } else {
        let size = if spec.epsilon() == Sign::Plus { 2 } else { 1 };
        let existing = spec.multiplicity(&Q.one(), size);
        blocks.retain(|b| !(b.lambda.is_one() && b.size == size));
        blocks.push(block(Q, 1, 1, size, existing + 1));
    }
    JordanSpec::new(Q, spec.epsilon(), blocks).unwrap()
}
