//! Integral symmetric Gram matrices: signature, parity, unimodularity and a
//! small classifier, plus the search for cyclotomic partners `p` making
//! `B(p, q)` a lattice of a given class.
//!
//! The identifications rely on two classical facts: an odd indefinite
//! unimodular lattice is determined by its signature, and `E8` is the only
//! even unimodular positive definite lattice of rank 8. `A_n` is matched
//! literally against the Cartan matrix. Parity is read off the diagonal,
//! which is basis independent for unimodular lattices.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::bezoutian::SkewBezoutian;
use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Matrix;
use crate::poly::{euler_phi, CyclotomicProduct, Poly, Sign};

/// A symmetric matrix with integer entries, stored over `Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerGram {
    gram: Matrix,
}

fn integer_entry(x: &FieldElement) -> Option<BigInt> {
    x.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
}

impl IntegerGram {
    pub fn new(gram: Matrix) -> Result<IntegerGram> {
        if gram.field() != Field::Rational {
            return Err(Error::Lattice(format!("lattice Gram matrix over {}", gram.field())));
        }
        if !gram.is_square() || gram.transpose() != gram {
            return Err(Error::Lattice("Gram matrix is not symmetric".into()));
        }
        for i in 0..gram.rows() {
            for j in 0..gram.cols() {
                if integer_entry(gram.get(i, j)).is_none() {
                    return Err(Error::Lattice(format!("entry ({i}, {j}) = {} is not an integer", gram.get(i, j))));
                }
            }
        }
        Ok(IntegerGram { gram })
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<IntegerGram> {
        IntegerGram::new(Matrix::from_i64_rows(Field::Rational, rows))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.gram
    }

    pub fn rank(&self) -> usize {
        self.gram.rows()
    }

    pub fn determinant(&self) -> BigInt {
        let det = self.gram.determinant().expect("square");
        integer_entry(&det).expect("integer matrix has integer determinant")
    }

    pub fn is_even(&self) -> bool {
        (0..self.rank()).all(|i| {
            let x = integer_entry(self.gram.get(i, i)).expect("integer entries");
            (x % BigInt::from(2)).is_zero()
        })
    }

    pub fn is_unimodular(&self) -> bool {
        self.determinant().abs().is_one()
    }
}

/// `(n₊, n₋, n₀)` from an exact congruence diagonalization.
pub fn signature(g: &IntegerGram) -> Result<(usize, usize, usize)> {
    let (_, diag) = g.gram.congruence_diagonalize()?;
    let mut sig = (0, 0, 0);
    for x in &diag {
        let r = x.as_rational().expect("rational field");
        if r.is_positive() {
            sig.0 += 1;
        } else if r.is_negative() {
            sig.1 += 1;
        } else {
            sig.2 += 1;
        }
    }
    Ok(sig)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum LatticeClass {
    E8,
    /// Gram matrix equal to the Cartan matrix `C_n`.
    A(usize),
    /// Odd indefinite unimodular of signature `(p, q)`.
    I(usize, usize),
    EvenUnimodular { plus: usize, minus: usize },
    Unclassified { rank: usize, det: BigInt, even: bool, plus: usize, minus: usize },
}

impl fmt::Display for LatticeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LatticeClass::E8 => write!(f, "E8"),
            LatticeClass::A(n) => write!(f, "A{n}"),
            LatticeClass::I(p, q) => write!(f, "I{p},{q}"),
            LatticeClass::EvenUnimodular { plus, minus } => write!(f, "II{plus},{minus}"),
            LatticeClass::Unclassified { rank, det, even, plus, minus } => {
                let parity = if *even { "even" } else { "odd" };
                write!(f, "unclassified (rank {rank}, det {det}, {parity}, signature ({plus},{minus}))")
            }
        }
    }
}

fn parse_pair(text: &str) -> Option<(usize, usize)> {
    let text = text.trim_start_matches('_').trim_start_matches('{').trim_end_matches('}');
    let (a, b) = text.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

impl FromStr for LatticeClass {
    type Err = Error;

    /// Accepts `E8`, `A<n>`, `I<p>,<q>` (also `I_{p,q}`) and `II<p>,<q>`.
    fn from_str(s: &str) -> Result<LatticeClass> {
        let s = s.trim();
        let bad = || Error::Parse(format!("unknown lattice class `{s}` (expected E8, An or Ip,q)"));
        if s.eq_ignore_ascii_case("e8") {
            return Ok(LatticeClass::E8);
        }
        if let Some(rest) = s.strip_prefix("II") {
            let (plus, minus) = parse_pair(rest).ok_or_else(bad)?;
            return Ok(LatticeClass::EvenUnimodular { plus, minus });
        }
        if let Some(rest) = s.strip_prefix('I') {
            let (p, q) = parse_pair(rest).ok_or_else(bad)?;
            return Ok(LatticeClass::I(p, q));
        }
        if let Some(rest) = s.strip_prefix('A').or_else(|| s.strip_prefix("A_")) {
            let n: usize = rest.trim_start_matches('_').parse().map_err(|_| bad())?;
            if n == 0 {
                return Err(bad());
            }
            return Ok(LatticeClass::A(n));
        }
        Err(bad())
    }
}

/// The `A_n` Cartan matrix: 2 on the diagonal, −1 next to it.
pub fn cartan_matrix(n: usize) -> Matrix {
    let f = Field::Rational;
    let mut m = Matrix::zeros(f, n, n);
    for i in 0..n {
        m.set(i, i, f.from_i64(2));
        if i + 1 < n {
            m.set(i, i + 1, f.from_i64(-1));
            m.set(i + 1, i, f.from_i64(-1));
        }
    }
    m
}

pub fn classify(g: &IntegerGram) -> Result<LatticeClass> {
    let det = g.determinant();
    if det.is_zero() {
        return Err(Error::Degenerate("lattice Gram matrix is degenerate".into()));
    }
    let n = g.rank();
    if g.gram == cartan_matrix(n) {
        return Ok(LatticeClass::A(n));
    }
    let (plus, minus, _) = signature(g)?;
    let even = g.is_even();
    if g.is_unimodular() {
        if even && n == 8 && minus == 0 && det.is_one() {
            return Ok(LatticeClass::E8);
        }
        if even {
            return Ok(LatticeClass::EvenUnimodular { plus, minus });
        }
        if plus > 0 && minus > 0 {
            return Ok(LatticeClass::I(plus, minus));
        }
    }
    Ok(LatticeClass::Unclassified { rank: n, det, even, plus, minus })
}

/// Cyclotomic indices `n` with `φ(n) ≤ d`.
fn cyclotomic_indices(d: u64) -> Vec<u64> {
    // φ(n) ≥ √(n/2), so n ≤ 2d² bounds the search
    (1..=2 * d * d + 2).filter(|&n| euler_phi(n) <= d).collect()
}

/// Nondecreasing index sequences of total degree `d`, in lexicographic order.
fn cyclotomic_products(d: u64) -> Vec<Vec<u64>> {
    fn go(indices: &[(u64, u64)], start: usize, left: u64, current: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if left == 0 {
            out.push(current.clone());
            return;
        }
        for (k, &(n, phi)) in indices.iter().enumerate().skip(start) {
            if phi <= left {
                current.push(n);
                go(indices, k, left - phi, current, out);
                current.pop();
            }
        }
    }
    let indices: Vec<(u64, u64)> = cyclotomic_indices(d).into_iter().map(|n| (n, euler_phi(n))).collect();
    let mut out = Vec::new();
    go(&indices, 0, d, &mut Vec::new(), &mut out);
    out
}

fn product_from_sequence(seq: &[u64]) -> Result<CyclotomicProduct> {
    CyclotomicProduct::new(seq.iter().map(|&n| (n, 1)))
}

/// Every skew-reciprocal cyclotomic product `p` of degree `d` prime to `q`
/// with `B(p, q)` (symmetric) in the class `target`, in lexicographic order of
/// the index sequences.
pub fn search_cyclotomic(q: &Poly, degree: usize, target: &LatticeClass) -> Result<Vec<CyclotomicProduct>> {
    if q.field() != Field::Rational {
        return Err(Error::Lattice("cyclotomic search runs over Q".into()));
    }
    if q.degree() != Some(degree) {
        return Ok(Vec::new());
    }
    let candidates: Vec<Vec<u64>> = cyclotomic_products(degree as u64)
        .into_iter()
        .filter(|seq| seq.iter().filter(|&&n| n == 1).count() % 2 == 1)
        .collect();
    let results: Vec<Option<CyclotomicProduct>> = candidates
        .par_iter()
        .map(|seq| -> Result<Option<CyclotomicProduct>> {
            let product = product_from_sequence(seq)?;
            let p = product.expand(Field::Rational)?;
            if p.gcd(q).degree() != Some(0) {
                return Ok(None);
            }
            let bez = SkewBezoutian::build(&p, q, Sign::Plus)?;
            let class = classify(&IntegerGram::new(bez.gram().clone())?)?;
            Ok((class == *target).then_some(product))
        })
        .collect::<Result<_>>()?;
    Ok(results.into_iter().flatten().collect())
}
