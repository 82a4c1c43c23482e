//! Exact univariate polynomials: reversal and reciprocity, valuations at
//! `T = ±1`, resultants, discriminants, cyclotomic polynomials, power-series
//! quotients and characteristic polynomials.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FieldElement};
use crate::matrix::Matrix;

/// A sign `±1`, used both for the symmetry type `ε` of a bilinear space and
/// for the points `T = ±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_i64(v: i64) -> Result<Sign> {
        match v {
            1 => Ok(Sign::Plus),
            -1 => Ok(Sign::Minus),
            _ => Err(Error::Parse(format!("expected +1 or -1, got {v}"))),
        }
    }

    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn element(self, field: Field) -> FieldElement {
        field.from_i64(self.value())
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:+}", self.value())
    }
}

impl std::str::FromStr for Sign {
    type Err = Error;
    fn from_str(s: &str) -> Result<Sign> {
        let v: i64 = s
            .trim()
            .replace('\u{2212}', "-")
            .trim_start_matches('+')
            .parse()
            .map_err(|_| Error::Parse(format!("expected +1 or -1, got {s:?}")))?;
        Sign::from_i64(v)
    }
}

/// Dense polynomial with ascending coefficients; the stored list never ends
/// in a zero, so the zero polynomial has no coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<FieldElement>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reciprocity {
    Reciprocal,
    SkewReciprocal,
    Neither,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<FieldElement>) -> Poly {
        while coeffs.last().is_some_and(FieldElement::is_zero) {
            coeffs.pop();
        }
        debug_assert!(coeffs.iter().all(|c| c.field() == field));
        Poly { field, coeffs }
    }

    pub fn from_i64(field: Field, coeffs: &[i64]) -> Poly {
        Poly::new(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    pub fn zero(field: Field) -> Poly {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: Field) -> Poly {
        Poly::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Poly {
        Poly::new(c.field(), vec![c])
    }

    /// `c·T^k`
    pub fn monomial(c: FieldElement, k: usize) -> Poly {
        let field = c.field();
        let mut coeffs = vec![field.zero(); k];
        coeffs.push(c);
        Poly::new(field, coeffs)
    }

    /// `T - a`
    pub fn linear(a: &FieldElement) -> Poly {
        let f = a.field();
        Poly::new(f, vec![-a, f.one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> FieldElement {
        self.coeffs.get(k).cloned().unwrap_or_else(|| self.field.zero())
    }

    pub fn leading(&self) -> Option<&FieldElement> {
        self.coeffs.last()
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(FieldElement::is_one)
    }

    pub fn monic(&self) -> Result<Poly> {
        let lc = self.leading().ok_or(Error::ZeroPolynomial("monic part"))?;
        Ok(self.scale(&lc.inv()?))
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, s: &FieldElement) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn derivative(&self) -> Poly {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &self.field.from_i64(k as i64))
            .collect();
        Poly::new(self.field, coeffs)
    }

    pub fn pow(&self, exp: u32) -> Poly {
        let mut acc = Poly::one(self.field);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Euclidean division `self = quot·d + rem` with `deg rem < deg d`.
    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dl = d.leading().ok_or(Error::ZeroPolynomial("division by zero polynomial"))?;
        let dl_inv = dl.inv()?;
        let dd = d.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Ok((Poly::zero(self.field), self.clone()));
        }
        let mut quot = vec![self.field.zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &dl_inv;
            if c.is_zero() {
                continue;
            }
            for (i, dc) in d.coeffs.iter().enumerate() {
                rem[k + i] -= &(&c * dc);
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Ok((Poly::new(self.field, quot), Poly::new(self.field, rem)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Monic gcd (zero only when both inputs are zero).
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().expect("nonzero")
        }
    }

    /// `p*(T) = T^deg(p) · p(1/T)`.
    pub fn reverse(&self) -> Result<Poly> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("reversal of the zero polynomial"));
        }
        Ok(Poly::new(self.field, self.coeffs.iter().rev().cloned().collect()))
    }

    pub fn reciprocity_type(&self) -> Result<Reciprocity> {
        let r = self.reverse()?;
        Ok(if r == *self {
            Reciprocity::Reciprocal
        } else if r == -self {
            Reciprocity::SkewReciprocal
        } else {
            Reciprocity::Neither
        })
    }

    /// `p* = ε·p`
    pub fn is_eps_reciprocal(&self, eps: Sign) -> bool {
        matches!(
            (self.reciprocity_type(), eps),
            (Ok(Reciprocity::Reciprocal), Sign::Plus) | (Ok(Reciprocity::SkewReciprocal), Sign::Minus)
        )
    }

    /// Largest `j` with `(T ∓ 1)^j | p`.
    pub fn valuation_pm(&self, at: Sign) -> Result<usize> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial("valuation of the zero polynomial"));
        }
        Ok(self.strip_root(&at.element(self.field)).0)
    }

    /// Divides out the largest power of `T - a`; returns the power and cofactor.
    pub fn strip_root(&self, a: &FieldElement) -> (usize, Poly) {
        let mut p = self.clone();
        let mut k = 0;
        while let Some((quot, rem)) = p.synthetic_division(a) {
            if !rem.is_zero() {
                break;
            }
            p = quot;
            k += 1;
        }
        (k, p)
    }

    /// Division by `T - a`: quotient and remainder `p(a)`. `None` for constants.
    fn synthetic_division(&self, a: &FieldElement) -> Option<(Poly, FieldElement)> {
        let n = self.coeffs.len();
        if n < 2 {
            return None;
        }
        let mut quot = vec![self.field.zero(); n - 1];
        let mut carry = self.field.zero();
        for k in (0..n).rev() {
            let v = &self.coeffs[k] + &(&carry * a);
            if k == 0 {
                return Some((Poly::new(self.field, quot), v));
            }
            quot[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// `q = (T-1)^{v+} (T+1)^{v-} q0` with `q0(±1) ≠ 0`.
    pub fn factor_pm_one(&self) -> Result<(usize, usize, Poly)> {
        if !self.is_monic() {
            return Err(Error::PolyPrecondition(format!("{self} is not monic")));
        }
        let (v_plus, rest) = self.strip_root(&self.field.one());
        let (v_minus, q0) = rest.strip_root(&-self.field.one());
        Ok((v_plus, v_minus, q0))
    }

    fn check_field(&self, other: &Poly) {
        assert_eq!(self.field, other.field, "polynomials over different fields");
    }
}

impl Add<&Poly> for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.field, (0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub<&Poly> for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(self.field, (0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul<&Poly> for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_field(rhs);
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut out = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Poly::new(self.field, out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| -c).collect())
    }
}

/// Printed with explicit powers, highest first: `x^8+2x^7+…-1`.
impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (negative, magnitude) = match c {
                FieldElement::Rational(r) if *r < num_rational::BigRational::zero() => {
                    (true, (-r).to_string())
                }
                FieldElement::Rational(r) => (false, r.to_string()),
                FieldElement::Residue { value, .. } => (false, value.to_string()),
            };
            if negative {
                write!(f, "-")?;
            } else if !first {
                write!(f, "+")?;
            }
            first = false;
            let is_unit = magnitude == "1";
            let monomial = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            if k == 0 {
                write!(f, "{magnitude}")?;
            } else if is_unit {
                write!(f, "{monomial}")?;
            } else if magnitude.contains('/') {
                write!(f, "{magnitude}*{monomial}")?;
            } else {
                write!(f, "{magnitude}{monomial}")?;
            }
        }
        Ok(())
    }
}

/// `Res(p, q) = lc(p)^{deg q} · ∏_{p(α)=0} q(α)`.
///
/// With this convention `Res(T-1, T+1) = 2`, and the determinant of the skew
/// Bezoutian equals `Res(p, q)` including its sign. The opposite argument
/// order differs by `(-1)^{deg p · deg q}`.
pub fn resultant(p: &Poly, q: &Poly) -> Result<FieldElement> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::ZeroPolynomial("resultant with the zero polynomial"));
    }
    if p.field != q.field {
        return Err(Error::FieldMismatch(format!("{} vs {}", p.field, q.field)));
    }
    resultant_euclid(p, q)
}

fn resultant_euclid(a: &Poly, b: &Poly) -> Result<FieldElement> {
    let (da, db) = (a.coeffs.len() - 1, b.coeffs.len() - 1);
    let lc = a.leading().expect("nonzero").clone();
    if da == 0 {
        return Ok(lc.pow(db as u64));
    }
    if db == 0 {
        return Ok(b.coeffs[0].pow(da as u64));
    }
    let r = b.rem(a)?;
    if r.is_zero() {
        return Ok(a.field.zero());
    }
    let dr = r.coeffs.len() - 1;
    let mut res = lc.pow((db - dr) as u64) * resultant_euclid(&r, a)?;
    if da * dr % 2 == 1 {
        res = -res;
    }
    Ok(res)
}

/// `disc(q) = (-1)^{d(d-1)/2} Res(q, q')` for monic `q`.
pub fn discriminant(q: &Poly) -> Result<FieldElement> {
    if !q.is_monic() {
        return Err(Error::PolyPrecondition(format!("discriminant needs a monic polynomial, got {q}")));
    }
    let d = q.degree().expect("monic is nonzero");
    if d == 0 {
        return Err(Error::PolyPrecondition("discriminant of a constant".into()));
    }
    let dq = q.derivative();
    if dq.is_zero() {
        return Ok(q.field.zero());
    }
    let res = resultant(q, &dq)?;
    Ok(if (d * (d - 1) / 2) % 2 == 1 { -res } else { res })
}

fn cyclotomic_cache() -> &'static Mutex<HashMap<u64, Vec<BigInt>>> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Vec<BigInt>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Integer coefficients of `Φ_n`, ascending.
pub fn cyclotomic_coeffs(n: u64) -> Result<Vec<BigInt>> {
    if n == 0 {
        return Err(Error::PolyPrecondition("cyclotomic index must be at least 1".into()));
    }
    if let Some(c) = cyclotomic_cache().lock().expect("cache lock").get(&n) {
        return Ok(c.clone());
    }
    // x^n - 1 divided by Φ_d for every proper divisor d
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = -BigInt::one();
    num[n as usize] = BigInt::one();
    for d in (1..n).filter(|d| n.is_multiple_of(*d)) {
        num = monic_exact_div(&num, &cyclotomic_coeffs(d)?);
    }
    cyclotomic_cache().lock().expect("cache lock").insert(n, num.clone());
    Ok(num)
}

fn monic_exact_div(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let dd = den.len() - 1;
    let mut rem = num.to_vec();
    let mut quot = vec![BigInt::zero(); num.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        for (i, dc) in den.iter().enumerate() {
            rem[k + i] -= &c * dc;
        }
        quot[k] = c;
    }
    debug_assert!(rem.iter().all(Zero::is_zero), "inexact cyclotomic division");
    quot
}

/// `Φ_n` over the given field.
pub fn cyclotomic(n: u64, field: Field) -> Result<Poly> {
    let c = cyclotomic_coeffs(n)?;
    Ok(Poly::new(field, c.iter().map(|x| field.from_bigint(x)).collect()))
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            while n.is_multiple_of(p) {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// A product `∏ Φ_n^e`, kept as a multiset of `(n, e)` sorted by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CyclotomicProduct {
    factors: Vec<(u64, u32)>,
}

impl CyclotomicProduct {
    /// Merges repeated indices and drops zero exponents.
    pub fn new(factors: impl IntoIterator<Item = (u64, u32)>) -> Result<CyclotomicProduct> {
        let mut merged: Vec<(u64, u32)> = Vec::new();
        for (n, e) in factors {
            if n == 0 {
                return Err(Error::PolyPrecondition("cyclotomic index must be at least 1".into()));
            }
            if e == 0 {
                continue;
            }
            match merged.iter_mut().find(|(m, _)| *m == n) {
                Some(entry) => entry.1 += e,
                None => merged.push((n, e)),
            }
        }
        merged.sort_unstable();
        Ok(CyclotomicProduct { factors: merged })
    }

    pub fn factors(&self) -> &[(u64, u32)] {
        &self.factors
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|&(n, e)| euler_phi(n) * e as u64).sum()
    }

    pub fn multiplicity(&self, n: u64) -> u32 {
        self.factors.iter().find(|f| f.0 == n).map_or(0, |f| f.1)
    }

    /// Nondecreasing list of indices with repetition, e.g. `[1, 1, 1, 2, 3, 5]`.
    pub fn index_sequence(&self) -> Vec<u64> {
        self.factors
            .iter()
            .flat_map(|&(n, e)| std::iter::repeat_n(n, e as usize))
            .collect()
    }

    pub fn expand(&self, field: Field) -> Result<Poly> {
        let mut acc = Poly::one(field);
        for &(n, e) in &self.factors {
            acc = &acc * &cyclotomic(n, field)?.pow(e);
        }
        Ok(acc)
    }
}

/// `Phi1^3*Phi2*Phi3*Phi5`; the empty product prints as `1`.
impl fmt::Display for CyclotomicProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|&(n, e)| if e == 1 { format!("Phi{n}") } else { format!("Phi{n}^{e}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl std::str::FromStr for CyclotomicProduct {
    type Err = Error;
    fn from_str(s: &str) -> Result<CyclotomicProduct> {
        let mut factors = Vec::new();
        for part in s.split('*') {
            let part = part.trim();
            let body = part
                .strip_prefix("Phi")
                .or_else(|| part.strip_prefix("phi"))
                .or_else(|| part.strip_prefix("\u{03a6}"))
                .ok_or_else(|| Error::Parse(format!("bad cyclotomic factor {part:?}")))?;
            let (n, e) = match body.split_once('^') {
                Some((n, e)) => (n, e),
                None => (body, "1"),
            };
            let bad = || Error::Parse(format!("bad cyclotomic factor {part:?}"));
            factors.push((n.trim().parse().map_err(|_| bad())?, e.trim().parse().map_err(|_| bad())?));
        }
        CyclotomicProduct::new(factors)
    }
}

/// Parses `-1,-2,-2,-1,0,1,2,2,1` (ascending coefficients) or
/// `Phi1*Phi2^3*Phi15`.
pub fn parse_poly(text: &str, field: Field) -> Result<Poly> {
    let t = text.trim();
    if t.to_ascii_lowercase().starts_with("phi") || t.starts_with('\u{03a6}') {
        return t.parse::<CyclotomicProduct>()?.expand(field);
    }
    let coeffs = t
        .split(',')
        .map(|c| field.parse_element(c))
        .collect::<Result<Vec<_>>>()?;
    if coeffs.is_empty() {
        return Err(Error::Parse("empty coefficient list".into()));
    }
    Ok(Poly::new(field, coeffs))
}

/// Ascending coefficient list with plain rational entries, for use with the
/// `Q` parser regardless of field.
pub fn format_coeff_list(p: &Poly) -> String {
    p.coeffs
        .iter()
        .map(|c| match c {
            FieldElement::Rational(r) => r.to_string(),
            FieldElement::Residue { value, .. } => value.to_string(),
        })
        .collect::<Vec<_>>()
        .join(",")
}

/// First `n + 1` coefficients of `num/den` as a power series at `0`.
pub fn power_series_quotient(num: &Poly, den: &Poly, n: usize) -> Result<Vec<FieldElement>> {
    let field = num.field;
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return Err(Error::PolyPrecondition("series denominator vanishes at 0".into()));
    }
    let d0_inv = d0.inv()?;
    let mut out: Vec<FieldElement> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut acc = num.coeff(k);
        for j in 1..=k.min(den.coeffs.len().saturating_sub(1)) {
            acc -= &(&den.coeffs[j] * &out[k - j]);
        }
        out.push(&acc * &d0_inv);
    }
    debug_assert!(out.iter().all(|c| c.field() == field));
    Ok(out)
}

/// Coefficients of `−εp/q = 1 + Σ c_n T^n`, stored from `c_0 = 1` on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesPrefix {
    series: Vec<FieldElement>,
}

impl SeriesPrefix {
    /// `c_n`, with `c_0 = 1`.
    pub fn get(&self, n: usize) -> &FieldElement {
        &self.series[n]
    }

    /// `[c_1, …, c_N]`
    pub fn coeffs(&self) -> &[FieldElement] {
        &self.series[1..]
    }

    /// Number of stored coefficients beyond `c_0`.
    pub fn len(&self) -> usize {
        self.series.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Checks the standing hypotheses on a pair: both monic of the same degree
/// `d ≥ 1`, `q` reciprocal and `p` `(−ε)`-reciprocal.
pub fn check_bezoutian_pair(p: &Poly, q: &Poly, eps: Sign) -> Result<usize> {
    if p.field != q.field {
        return Err(Error::FieldMismatch(format!("p over {}, q over {}", p.field, q.field)));
    }
    if !p.is_monic() || !q.is_monic() {
        return Err(Error::PolyPrecondition("p and q must be monic".into()));
    }
    let d = q.degree().expect("monic");
    if p.degree() != Some(d) {
        return Err(Error::PolyPrecondition(format!(
            "deg p = {} differs from deg q = {d}",
            p.degree().expect("monic")
        )));
    }
    if d == 0 {
        return Err(Error::PolyPrecondition("degree must be at least 1".into()));
    }
    if !q.is_eps_reciprocal(Sign::Plus) {
        return Err(Error::PolyPrecondition(format!("q = {q} is not reciprocal")));
    }
    if !p.is_eps_reciprocal(-eps) {
        let want = if eps == Sign::Plus { "skew-reciprocal" } else { "reciprocal" };
        return Err(Error::PolyPrecondition(format!(
            "p = {p} is not {want} (required for epsilon = {eps})"
        )));
    }
    Ok(d)
}

pub fn series_coefficients(p: &Poly, q: &Poly, eps: Sign, n: usize) -> Result<SeriesPrefix> {
    check_bezoutian_pair(p, q, eps)?;
    let num = p.scale(&(-eps).element(p.field));
    let series = power_series_quotient(&num, q, n)?;
    debug_assert!(series[0].is_one());
    Ok(SeriesPrefix { series })
}

/// Characteristic polynomial `det(T·I − M)`, via reduction to Hessenberg
/// form by exact similarity transforms (no division by integers, so it is
/// safe over `F_p` for any `p`).
pub fn char_poly(m: &Matrix) -> Result<Poly> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "characteristic polynomial of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    let field = m.field();
    let h = hessenberg(m);
    // p_k = (T − h_kk) p_{k−1} − Σ_{i<k} h_ik (∏_{j=i+1}^{k} h_{j,j−1}) p_{i−1}
    let mut ps: Vec<Poly> = vec![Poly::one(field)];
    let t = Poly::monomial(field.one(), 1);
    for k in 0..n {
        let mut pk = &(&t - &Poly::constant(h.get(k, k).clone())) * &ps[k];
        let mut prod = field.one();
        for i in (0..k).rev() {
            prod = &prod * h.get(i + 1, i);
            if prod.is_zero() {
                break;
            }
            let coef = &prod * h.get(i, k);
            pk = &pk - &ps[i].scale(&coef);
        }
        ps.push(pk);
    }
    Ok(ps.pop().expect("nonempty"))
}

fn hessenberg(m: &Matrix) -> Matrix {
    let n = m.rows();
    let mut h = m.clone();
    for c in 0..n.saturating_sub(2) {
        let Some(r) = (c + 1..n).find(|&i| !h.get(i, c).is_zero()) else {
            continue;
        };
        if r != c + 1 {
            for j in 0..n {
                let (a, b) = (h.get(r, j).clone(), h.get(c + 1, j).clone());
                h.set(r, j, b);
                h.set(c + 1, j, a);
            }
            for i in 0..n {
                let (a, b) = (h.get(i, r).clone(), h.get(i, c + 1).clone());
                h.set(i, r, b);
                h.set(i, c + 1, a);
            }
        }
        let pivot_inv = h.get(c + 1, c).inv().expect("pivot is nonzero");
        for i in c + 2..n {
            if h.get(i, c).is_zero() {
                continue;
            }
            let factor = h.get(i, c) * &pivot_inv;
            for j in 0..n {
                let x = h.get(i, j) - &(&factor * h.get(c + 1, j));
                h.set(i, j, x);
            }
            for k in 0..n {
                let x = h.get(k, c + 1) + &(&factor * h.get(k, i));
                h.set(k, c + 1, x);
            }
        }
    }
    h
}

/// Companion matrix of a monic polynomial: the matrix of multiplication by
/// `T` on the basis `1, T, …, T^{d−1}` of `k[T]/(q)`.
pub fn companion(q: &Poly) -> Result<Matrix> {
    if !q.is_monic() {
        return Err(Error::PolyPrecondition(format!("companion of non-monic {q}")));
    }
    let d = q.degree().expect("monic");
    let mut m = Matrix::zeros(q.field, d, d);
    for j in 0..d {
        if j + 1 < d {
            m.set(j + 1, j, q.field.one());
        }
        m.set(j, d - 1, -q.coeff(j));
    }
    Ok(m)
}

/// Roots of `p` in its field, with multiplicity.
///
/// Over `Q` the candidates come from the rational root theorem; over `F_p`
/// every residue is tried.
pub fn roots_in_field(p: &Poly) -> Result<Vec<(FieldElement, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial("roots of the zero polynomial"));
    }
    let field = p.field;
    let mut out = Vec::new();
    let (k0, mut rest) = p.strip_root(&field.zero());
    if k0 > 0 {
        out.push((field.zero(), k0));
    }
    let candidates: Vec<FieldElement> = match field {
        Field::Prime(q) => {
            if q > 1_000_000 {
                return Err(Error::PolyPrecondition(format!(
                    "root search over F_{q} is limited to moduli up to 10^6"
                )));
            }
            (1..q).map(|a| field.from_i64(a as i64)).collect()
        }
        Field::Rational => rational_root_candidates(&rest)?,
    };
    for a in candidates {
        if rest.degree() == Some(0) {
            break;
        }
        let (k, cof) = rest.strip_root(&a);
        if k > 0 {
            out.push((a, k));
            rest = cof;
        }
    }
    Ok(out)
}

fn rational_root_candidates(p: &Poly) -> Result<Vec<FieldElement>> {
    use num_integer::Integer;
    use num_rational::BigRational;
    use num_traits::Signed;
    if p.degree().unwrap_or(0) == 0 {
        return Ok(Vec::new());
    }
    let mut lcm = BigInt::one();
    for c in &p.coeffs {
        lcm = lcm.lcm(c.as_rational().expect("rational").denom());
    }
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| (c.as_rational().expect("rational") * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let a0 = ints[0].abs();
    let an = ints.last().expect("nonzero").abs();
    let nums = divisors(&a0)?;
    let dens = divisors(&an)?;
    let mut cands = Vec::new();
    for n in &nums {
        for d in &dens {
            if n.gcd(d).is_one() {
                let r = BigRational::new(n.clone(), d.clone());
                cands.push(FieldElement::Rational(r.clone()));
                cands.push(FieldElement::Rational(-r));
            }
        }
    }
    cands.sort_by(|a, b| a.as_rational().cmp(&b.as_rational()));
    cands.dedup();
    Ok(cands)
}

fn divisors(n: &BigInt) -> Result<Vec<BigInt>> {
    use num_traits::ToPrimitive;
    let m = n
        .to_u64()
        .filter(|&m| m <= 1u64 << 40)
        .ok_or_else(|| Error::PolyPrecondition(format!("coefficient {n} too large for rational root search")))?;
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= m {
        if m % d == 0 {
            small.push(BigInt::from(d));
            if d * d != m {
                large.push(BigInt::from(m / d));
            }
        }
        d += 1;
    }
    small.extend(large.into_iter().rev());
    Ok(small)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rational;

    fn qp(c: &[i64]) -> Poly {
        Poly::from_i64(Q, c)
    }

    fn phi(n: u64) -> Poly {
        cyclotomic(n, Q).unwrap()
    }

    /// Sylvester determinant, rows of `p` first, descending coefficients.
    fn sylvester_resultant(p: &Poly, q: &Poly) -> FieldElement {
        let (m, n) = (p.degree().unwrap(), q.degree().unwrap());
        let size = m + n;
        let f = p.field();
        let mut s = Matrix::zeros(f, size, size);
        for i in 0..n {
            for k in 0..=m {
                s.set(i, i + k, p.coeff(m - k));
            }
        }
        for i in 0..m {
            for k in 0..=n {
                s.set(n + i, i + k, q.coeff(n - k));
            }
        }
        s.determinant().unwrap()
    }

    #[test]
    fn reversal_examples() {
        let p = qp(&[-1, -2, -2, -1, 0, 1, 2, 2, 1]);
        assert_eq!(p.reverse().unwrap(), -&p);
        assert_eq!(qp(&[1, 1]).reverse().unwrap(), qp(&[1, 1]));
        assert_eq!(qp(&[0, 3, 2]).reverse().unwrap(), qp(&[2, 3]));
        assert!(Poly::zero(Q).reverse().is_err());
    }

    #[test]
    fn reciprocity_examples() {
        assert_eq!(phi(30).reciprocity_type().unwrap(), Reciprocity::Reciprocal);
        for n in 1..8 {
            let mut c = vec![0; n + 1];
            c[0] = -1;
            c[n] = 1;
            assert_eq!(qp(&c).reciprocity_type().unwrap(), Reciprocity::SkewReciprocal);
        }
        assert_eq!(qp(&[0, 1, 1]).reciprocity_type().unwrap(), Reciprocity::Neither);
    }

    #[test]
    fn valuation_examples() {
        let q0 = phi(5);
        let p = &(&qp(&[-1, 1]).pow(3) * &qp(&[1, 1])) * &q0;
        assert_eq!(p.valuation_pm(Sign::Plus).unwrap(), 3);
        assert_eq!(p.valuation_pm(Sign::Minus).unwrap(), 1);
        assert!(!phi(30).eval(&Q.one()).is_zero());
        assert!(!phi(30).eval(&-Q.one()).is_zero());
        assert_eq!(phi(30).valuation_pm(Sign::Plus).unwrap(), 0);
        assert_eq!(phi(30).valuation_pm(Sign::Minus).unwrap(), 0);
    }

    #[test]
    fn factor_pm_one_examples() {
        let q = &(&qp(&[-1, 1]).pow(2) * &qp(&[1, 1])) * &phi(5);
        assert_eq!(q.factor_pm_one().unwrap(), (2, 1, phi(5)));
        assert_eq!(phi(30).factor_pm_one().unwrap(), (0, 0, phi(30)));
        assert_eq!(qp(&[1, 1]).pow(4).factor_pm_one().unwrap(), (0, 4, Poly::one(Q)));
        assert!(qp(&[1, 2]).factor_pm_one().is_err());
    }

    #[test]
    fn resultant_examples() {
        assert_eq!(resultant(&qp(&[-1, 1]), &qp(&[1, 1])).unwrap(), Q.from_i64(2));
        assert_eq!(resultant(&qp(&[-1, 0, 0, 1]), &qp(&[1, 0, 0, 1])).unwrap(), Q.from_i64(8));
        let common = &qp(&[2, 1]) * &qp(&[1, 1, 1]);
        assert!(resultant(&common, &qp(&[2, 1])).unwrap().is_zero());
        // product form for monic p: Res(T - a, q) = q(a)
        let q = qp(&[3, -1, 4, 1]);
        assert_eq!(resultant(&qp(&[-5, 1]), &q).unwrap(), q.eval(&Q.from_i64(5)));
    }

    #[test]
    fn discriminant_examples() {
        let q5 = phi(5);
        let by_oracle = resultant(&q5, &q5.derivative()).unwrap(); // d(d-1)/2 = 6 is even
        assert_eq!(by_oracle, Q.from_i64(125));
        assert_eq!(discriminant(&q5).unwrap(), Q.from_i64(125));
        assert!(discriminant(&qp(&[1, -2, 1])).unwrap().is_zero());
        // b^2 - 4ac
        assert_eq!(discriminant(&qp(&[1, -3, 1])).unwrap(), Q.from_i64(9 - 4));
    }

    #[test]
    fn cyclotomic_examples() {
        assert_eq!(phi(30), qp(&[1, 1, 0, -1, -1, -1, 0, 1, 1]));
        assert_eq!(phi(1), qp(&[-1, 1]));
        let prod: CyclotomicProduct = "Phi1*Phi2*Phi3*Phi5".parse().unwrap();
        assert_eq!(prod.expand(Q).unwrap(), qp(&[-1, -2, -2, -1, 0, 1, 2, 2, 1]));
        assert_eq!(prod.degree(), 8);
        assert!(cyclotomic(0, Q).is_err());
        for n in 1..40u64 {
            assert_eq!(phi(n).degree().unwrap() as u64, euler_phi(n));
        }
    }

    #[test]
    fn series_examples() {
        let p = parse_poly("Phi1*Phi2*Phi3*Phi5", Q).unwrap();
        let c = series_coefficients(&p, &phi(30), Sign::Plus, 10).unwrap();
        let want: Vec<FieldElement> = [1, 1, 1, 1, 1, 0, 0, 0, 0, -1].iter().map(|&x| Q.from_i64(x)).collect();
        assert_eq!(c.coeffs(), &want[..]);

        // (1 - x^n)/(1 + x + … + x^n) = 1 - x + O(x^n)
        let n = 6;
        let mut pc = vec![0; n + 1];
        pc[0] = -1;
        pc[n] = 1;
        let c = series_coefficients(&qp(&pc), &qp(&vec![1; n + 1]), Sign::Plus, 3).unwrap();
        assert_eq!(c.coeffs(), &[Q.from_i64(-1), Q.zero(), Q.zero()][..]);

        let q = qp(&[1, -3, 1]);
        let p = &q + &Poly::monomial(Q.one(), 1);
        let c = series_coefficients(&p, &q, Sign::Minus, 1).unwrap();
        assert_eq!(c.coeffs(), &[Q.one()][..]);

        let err = series_coefficients(&q, &q, Sign::Plus, 1).unwrap_err();
        assert!(err.to_string().contains("skew-reciprocal"));
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(char_poly(&Matrix::identity(Q, 3)).unwrap(), qp(&[-1, 1]).pow(3));
        let q = phi(30);
        assert_eq!(char_poly(&companion(&q).unwrap()).unwrap(), q);
        assert!(char_poly(&Matrix::zeros(Q, 2, 3)).is_err());
    }

    #[test]
    fn char_poly_matches_pointwise_determinants() {
        // independent route: det(aI − M) at deg+1 points
        let m = Matrix::from_i64_rows(Q, &[[0, 2, -1, 3], [1, 0, 4, 0], [5, -2, 1, 1], [0, 0, 3, -1]]);
        let cp = char_poly(&m).unwrap();
        for a in -3..=3 {
            let a = Q.from_i64(a);
            let shifted = &Matrix::identity(Q, 4).scale(&a) - &m;
            assert_eq!(cp.eval(&a), shifted.determinant().unwrap());
        }
        let f3 = Field::Prime(3);
        let m3 = Matrix::from_i64_rows(f3, &[[1, 2, 0, 1, 1], [0, 1, 1, 2, 0], [2, 2, 0, 0, 1], [1, 0, 1, 1, 2], [0, 1, 2, 0, 0]]);
        let cp3 = char_poly(&m3).unwrap();
        assert_eq!(cp3.degree(), Some(5));
        for a in 0..3 {
            let a = f3.from_i64(a);
            let shifted = &Matrix::identity(f3, 5).scale(&a) - &m3;
            assert_eq!(cp3.eval(&a), shifted.determinant().unwrap());
        }
    }

    #[test]
    fn display_and_parse() {
        let p = parse_poly("Phi1*Phi2*Phi3*Phi5", Q).unwrap();
        assert_eq!(p.to_string(), "x^8+2x^7+2x^6+x^5-x^3-2x^2-2x-1");
        assert_eq!(parse_poly("-1,-2,-2,-1,0,1,2,2,1", Q).unwrap(), p);
        assert_eq!(parse_poly("\u{2212}1,0,1", Q).unwrap(), qp(&[-1, 0, 1]));
        assert_eq!(parse_poly("1/2,1", Q).unwrap().to_string(), "x+1/2");
        let f = Field::Prime(7);
        assert_eq!(parse_poly("-1,1", f).unwrap().to_string(), "x+6");
        assert_eq!("Phi1^3*Phi2".parse::<CyclotomicProduct>().unwrap().to_string(), "Phi1^3*Phi2");
    }

    #[test]
    fn roots_over_q_and_fp() {
        let p = &(&qp(&[-2, 1]).pow(2) * &qp(&[-1, 2])) * &phi(5);
        let roots = roots_in_field(&p).unwrap();
        let half = FieldElement::Rational(num_rational::BigRational::new(1.into(), 2.into()));
        assert!(roots.contains(&(Q.from_i64(2), 2)));
        assert!(roots.contains(&(half, 1)));
        assert_eq!(roots.len(), 2);
        let f = Field::Prime(5);
        let r5 = roots_in_field(&Poly::from_i64(f, &[-1, 0, 0, 0, 1])).unwrap();
        assert_eq!(r5.len(), 4);
    }

    fn small_poly(max_deg: usize) -> impl Strategy<Value = Vec<i64>> {
        prop::collection::vec(-4i64..=4, 1..=max_deg + 1)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn reversal_is_multiplicative(a in small_poly(6), b in small_poly(6)) {
            let (p, q) = (qp(&a), qp(&b));
            prop_assume!(!p.is_zero() && !q.is_zero());
            prop_assert_eq!((&p * &q).reverse().unwrap(), &p.reverse().unwrap() * &q.reverse().unwrap());
        }

        #[test]
        fn reversal_is_additive_at_equal_degree(
            (a, b) in (1usize..7).prop_flat_map(|n| (prop::collection::vec(-4i64..=4, n), prop::collection::vec(-4i64..=4, n))),
            la in 1i64..=4,
            lb in 1i64..=4,
        ) {
            let (mut a, mut b) = (a, b);
            a.push(la);
            b.push(lb);
            let (p, q) = (qp(&a), qp(&b));
            let s = &p + &q;
            prop_assume!(s.degree() == p.degree());
            prop_assert_eq!(s.reverse().unwrap(), &p.reverse().unwrap() + &q.reverse().unwrap());
        }

        #[test]
        fn reciprocity_forces_valuation_parity(half in prop::collection::vec(-3i64..=3, 1..6), mid in -3i64..=3, skew in any::<bool>(), k in 0u32..4) {
            // mirror half the coefficients: palindromic or anti-palindromic
            let mut c = half.clone();
            if skew {
                c.extend(half.iter().rev().map(|x| -x));
            } else {
                c.push(mid);
                c.extend(half.iter().rev());
            }
            let base = qp(&c);
            prop_assume!(!base.is_zero() && !base.coeff(0).is_zero());
            // multiply by a reciprocal factor with known vanishing at 1
            let p = &base * &qp(&[-1, 1]).pow(2 * k);
            let v = p.valuation_pm(Sign::Plus).unwrap();
            match p.reciprocity_type().unwrap() {
                Reciprocity::SkewReciprocal => prop_assert!(v % 2 == 1),
                Reciprocity::Reciprocal => prop_assert!(v.is_multiple_of(2)),
                Reciprocity::Neither => prop_assert!(false, "mirrored polynomial must be (skew-)reciprocal"),
            }
        }

        #[test]
        fn resultant_matches_sylvester(a in small_poly(5), b in small_poly(5)) {
            let (p, q) = (qp(&a), qp(&b));
            prop_assume!(p.degree().unwrap_or(0) >= 1 && q.degree().unwrap_or(0) >= 1);
            prop_assert_eq!(resultant(&p, &q).unwrap(), sylvester_resultant(&p, &q));
        }

        #[test]
        fn resultant_vanishes_iff_common_factor(a in small_poly(4), b in small_poly(4), c in small_poly(2)) {
            let (p, q, g) = (qp(&a), qp(&b), qp(&c));
            prop_assume!(!p.is_zero() && !q.is_zero() && !g.is_zero());
            let (p, q) = (&p * &g, &q * &g);
            let has_common = p.gcd(&q).degree().unwrap() > 0;
            prop_assert_eq!(resultant(&p, &q).unwrap().is_zero(), has_common);
        }

        #[test]
        fn resultant_over_fp_matches_sylvester(a in prop::collection::vec(0i64..13, 2..7), b in prop::collection::vec(0i64..13, 2..7)) {
            let f = Field::Prime(13);
            let (p, q) = (Poly::from_i64(f, &a), Poly::from_i64(f, &b));
            prop_assume!(p.degree().unwrap_or(0) >= 1 && q.degree().unwrap_or(0) >= 1);
            prop_assert_eq!(resultant(&p, &q).unwrap(), sylvester_resultant(&p, &q));
        }
    }
}
