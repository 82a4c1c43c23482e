//! Exact scalars over `Q` and `F_p` (p an odd prime), and square classes in
//! `k*/(k*)^2`.
//!
//! Every value carries its field. Mixing elements of different fields in an
//! arithmetic operator is a logic error and panics; the public constructors
//! in the rest of the crate validate fields at their boundaries and report
//! [`Error::FieldMismatch`] instead.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Largest modulus accepted for `F_p`. Residues fit in `u32`, so products fit
/// in `u64` without widening.
pub const MAX_MODULUS: u64 = u32::MAX as u64;

/// Trial-division bound used when extracting squarefree parts over `Q`.
///
/// An integer whose cofactor after dividing out all primes up to this bound
/// is neither 1, a prime (smaller than the bound squared) nor a perfect
/// square is rejected with [`Error::SquareClassTooLarge`].
pub const TRIAL_DIVISION_BOUND: u64 = 1 << 20;

/// The base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// `F_p`, validating that `p` is an odd prime not exceeding [`MAX_MODULUS`].
    pub fn prime(p: u64) -> Result<Field> {
        if p == 2 {
            return Err(Error::InvalidField("characteristic 2 is not supported".into()));
        }
        if p > MAX_MODULUS {
            return Err(Error::InvalidField(format!(
                "modulus {p} exceeds the supported bound {MAX_MODULUS}"
            )));
        }
        if !is_prime_u64(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        Ok(Field::Prime(p))
    }

    pub fn zero(&self) -> FieldElement {
        self.from_i64(0)
    }

    pub fn one(&self) -> FieldElement {
        self.from_i64(1)
    }

    pub fn from_i64(&self, n: i64) -> FieldElement {
        match *self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(BigInt::from(n))),
            Field::Prime(p) => FieldElement::Residue {
                value: (n as i128).rem_euclid(p as i128) as u64,
                modulus: p,
            },
        }
    }

    pub fn from_bigint(&self, n: &BigInt) -> FieldElement {
        match *self {
            Field::Rational => FieldElement::Rational(BigRational::from_integer(n.clone())),
            Field::Prime(p) => FieldElement::Residue {
                value: n.mod_floor(&BigInt::from(p)).to_u64().expect("residue fits"),
                modulus: p,
            },
        }
    }

    /// Maps a rational into the field; fails over `F_p` when `p` divides the
    /// denominator.
    pub fn from_rational(&self, r: &BigRational) -> Result<FieldElement> {
        match *self {
            Field::Rational => Ok(FieldElement::Rational(r.clone())),
            Field::Prime(p) => {
                let num = self.from_bigint(r.numer());
                let den = self.from_bigint(r.denom());
                if den.is_zero() {
                    return Err(Error::DivisionByZero(format!(
                        "{r} has a denominator divisible by {p}"
                    )));
                }
                Ok(num * den.inv()?)
            }
        }
    }

    /// Parses a scalar written as an integer, a fraction `a/b`, or a residue
    /// `a mod p` (the modulus must then match this field).
    pub fn parse_element(&self, text: &str) -> Result<FieldElement> {
        let s = normalize_minus(text.trim());
        if let Some((value, modulus)) = s.split_once("mod") {
            let modulus: u64 = modulus
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad modulus in scalar {text:?}")))?;
            if *self != Field::Prime(modulus) {
                return Err(Error::FieldMismatch(format!(
                    "scalar {text:?} does not live in {self}"
                )));
            }
            return self.parse_element(value);
        }
        let r = parse_rational(&s)?;
        self.from_rational(&r)
    }

    pub fn characteristic(&self) -> u64 {
        match *self {
            Field::Rational => 0,
            Field::Prime(p) => p,
        }
    }

    /// Least positive quadratic nonresidue modulo `p` (none for `Q`).
    pub fn least_nonresidue(&self) -> Option<u64> {
        match *self {
            Field::Rational => None,
            Field::Prime(p) => (2..p).find(|&a| !is_residue(a, p)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "Fp:{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = Error;

    fn from_str(s: &str) -> Result<Field> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("q") {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix("Fp:")
            .or_else(|| s.strip_prefix("fp:"))
            .or_else(|| s.strip_prefix("F"))
            .ok_or_else(|| Error::Parse(format!("unknown field {s:?} (expected Q or Fp:<p>)")))?;
        let p: u64 = p
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad prime in field {s:?}")))?;
        Field::prime(p)
    }
}

/// An exact scalar.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum FieldElement {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

impl FieldElement {
    pub fn field(&self) -> Field {
        match self {
            FieldElement::Rational(_) => Field::Rational,
            FieldElement::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_zero(),
            FieldElement::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            FieldElement::Rational(r) => r.is_one(),
            FieldElement::Residue { value, .. } => *value == 1,
        }
    }

    pub fn inv(&self) -> Result<FieldElement> {
        if self.is_zero() {
            return Err(Error::DivisionByZero("inverse of zero".into()));
        }
        Ok(match self {
            FieldElement::Rational(r) => FieldElement::Rational(r.recip()),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: pow_mod(*value, modulus - 2, *modulus),
                modulus: *modulus,
            },
        })
    }

    pub fn pow(&self, exp: u64) -> FieldElement {
        match self {
            FieldElement::Rational(r) => {
                let e = i32::try_from(exp).expect("exponent fits in i32");
                FieldElement::Rational(num_traits::Pow::pow(r, e))
            }
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: pow_mod(*value, exp, *modulus),
                modulus: *modulus,
            },
        }
    }

    /// The rational value, if this lives in `Q`.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            FieldElement::Rational(r) => Some(r),
            FieldElement::Residue { .. } => None,
        }
    }

    /// Integer value: the rational if it is integral, or the residue in `[0, p)`.
    pub fn to_bigint(&self) -> Option<BigInt> {
        match self {
            FieldElement::Rational(r) if r.is_integer() => Some(r.to_integer()),
            FieldElement::Rational(_) => None,
            FieldElement::Residue { value, .. } => Some(BigInt::from(*value)),
        }
    }

    fn combine(&self, other: &FieldElement, op: &str) -> (Field, u64, u64) {
        match (self, other) {
            (
                FieldElement::Residue { value: a, modulus: p },
                FieldElement::Residue { value: b, modulus: q },
            ) if p == q => (Field::Prime(*p), *a, *b),
            _ => panic!(
                "field mismatch in {op}: {} vs {}",
                self.field(),
                other.field()
            ),
        }
    }

    fn add_ref(&self, other: &FieldElement) -> FieldElement {
        if let (FieldElement::Rational(a), FieldElement::Rational(b)) = (self, other) {
            return FieldElement::Rational(a + b);
        }
        let (_, a, b) = self.combine(other, "add");
        let p = self.field().characteristic();
        FieldElement::Residue { value: (a + b) % p, modulus: p }
    }

    fn sub_ref(&self, other: &FieldElement) -> FieldElement {
        if let (FieldElement::Rational(a), FieldElement::Rational(b)) = (self, other) {
            return FieldElement::Rational(a - b);
        }
        let (_, a, b) = self.combine(other, "sub");
        let p = self.field().characteristic();
        FieldElement::Residue { value: (a + p - b) % p, modulus: p }
    }

    fn mul_ref(&self, other: &FieldElement) -> FieldElement {
        if let (FieldElement::Rational(a), FieldElement::Rational(b)) = (self, other) {
            return FieldElement::Rational(a * b);
        }
        let (_, a, b) = self.combine(other, "mul");
        let p = self.field().characteristic();
        FieldElement::Residue { value: a * b % p, modulus: p }
    }

    fn neg_ref(&self) -> FieldElement {
        match self {
            FieldElement::Rational(r) => FieldElement::Rational(-r),
            FieldElement::Residue { value, modulus } => FieldElement::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldElement::Rational(r) => write!(f, "{r}"),
            FieldElement::Residue { value, modulus } => write!(f, "{value} mod {modulus}"),
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$inner(rhs)
            }
        }
        impl $trait<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$inner(&rhs)
            }
        }
        impl $trait<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$inner(rhs)
            }
        }
        impl $trait<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$inner(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Div<&FieldElement> for &FieldElement {
    type Output = FieldElement;
    /// Panics on division by zero, like the primitive numeric types.
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self * rhs.inv().expect("division by zero")
    }
}

impl Div<FieldElement> for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        &self / &rhs
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        self.neg_ref()
    }
}

impl AddAssign<&FieldElement> for FieldElement {
    fn add_assign(&mut self, rhs: &FieldElement) {
        *self = self.add_ref(rhs);
    }
}

impl SubAssign<&FieldElement> for FieldElement {
    fn sub_assign(&mut self, rhs: &FieldElement) {
        *self = self.sub_ref(rhs);
    }
}

impl MulAssign<&FieldElement> for FieldElement {
    fn mul_assign(&mut self, rhs: &FieldElement) {
        *self = self.mul_ref(rhs);
    }
}

/// A class in `k*/(k*)^2`.
///
/// Over `Q` the canonical representative is a squarefree integer (sign
/// included). Over `F_p` it is `1` or the least positive nonresidue.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SquareClass {
    Rational(BigInt),
    Residue { nonresidue: bool, modulus: u64 },
}

impl SquareClass {
    /// The trivial class (squares).
    pub fn one(field: Field) -> SquareClass {
        match field {
            Field::Rational => SquareClass::Rational(BigInt::one()),
            Field::Prime(p) => SquareClass::Residue { nonresidue: false, modulus: p },
        }
    }

    pub fn field(&self) -> Field {
        match self {
            SquareClass::Rational(_) => Field::Rational,
            SquareClass::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_trivial(&self) -> bool {
        match self {
            SquareClass::Rational(n) => n.is_one(),
            SquareClass::Residue { nonresidue, .. } => !nonresidue,
        }
    }

    /// The canonical representative as a field element.
    pub fn representative(&self) -> FieldElement {
        match self {
            SquareClass::Rational(n) => Field::Rational.from_bigint(n),
            SquareClass::Residue { nonresidue, modulus } => {
                let f = Field::Prime(*modulus);
                if *nonresidue {
                    f.from_i64(f.least_nonresidue().expect("odd prime has a nonresidue") as i64)
                } else {
                    f.one()
                }
            }
        }
    }

    pub fn mul(&self, other: &SquareClass) -> Result<SquareClass> {
        class_mul(self, other)
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SquareClass::Rational(n) => write!(f, "{n}"),
            SquareClass::Residue { nonresidue: true, modulus } => write!(f, "nonsquare mod {modulus}"),
            SquareClass::Residue { nonresidue: false, modulus } => write!(f, "1 mod {modulus}"),
        }
    }
}

/// Canonical square class of a nonzero scalar.
pub fn square_class(x: &FieldElement) -> Result<SquareClass> {
    if x.is_zero() {
        return Err(Error::ZeroSquareClass);
    }
    match x {
        FieldElement::Rational(r) => {
            let sign = if r.is_negative() { -BigInt::one() } else { BigInt::one() };
            let num = squarefree_part(&r.numer().abs())?;
            let den = squarefree_part(&r.denom().abs())?;
            Ok(SquareClass::Rational(sign * reduce_product(&num, &den)))
        }
        FieldElement::Residue { value, modulus } => Ok(SquareClass::Residue {
            nonresidue: !is_residue(*value, *modulus),
            modulus: *modulus,
        }),
    }
}

/// Group law of `k*/(k*)^2`.
pub fn class_mul(a: &SquareClass, b: &SquareClass) -> Result<SquareClass> {
    match (a, b) {
        (SquareClass::Rational(x), SquareClass::Rational(y)) => {
            let sign = if x.sign() == y.sign() { BigInt::one() } else { -BigInt::one() };
            Ok(SquareClass::Rational(sign * reduce_product(&x.abs(), &y.abs())))
        }
        (
            SquareClass::Residue { nonresidue: x, modulus: p },
            SquareClass::Residue { nonresidue: y, modulus: q },
        ) if p == q => Ok(SquareClass::Residue { nonresidue: x ^ y, modulus: *p }),
        _ => Err(Error::FieldMismatch(format!(
            "square classes over {} and {}",
            a.field(),
            b.field()
        ))),
    }
}

/// Squarefree kernel of `a·b` for positive squarefree `a`, `b`.
fn reduce_product(a: &BigInt, b: &BigInt) -> BigInt {
    let g = a.gcd(b);
    (a / &g) * (b / &g)
}

/// Squarefree part of a positive integer by trial division.
fn squarefree_part(n: &BigInt) -> Result<BigInt> {
    debug_assert!(n.sign() == Sign::Plus);
    if let Some(small) = n.to_u128() {
        return squarefree_part_u128(small).map(BigInt::from).ok_or_else(|| too_large(n));
    }
    let mut rest = n.clone();
    let mut core = BigInt::one();
    let mut d = BigInt::from(2u32);
    let bound = BigInt::from(TRIAL_DIVISION_BOUND);
    while &d * &d <= rest && d <= bound {
        let mut odd = false;
        while (&rest % &d).is_zero() {
            rest /= &d;
            odd = !odd;
        }
        if odd {
            core *= &d;
        }
        d += 1u32;
    }
    if &d * &d > rest {
        if !rest.is_one() {
            core *= &rest;
        }
        return Ok(core);
    }
    let root = rest.sqrt();
    if &root * &root == rest {
        return Ok(core);
    }
    Err(too_large(n))
}

fn squarefree_part_u128(mut rest: u128) -> Option<u128> {
    let mut core: u128 = 1;
    let mut d: u128 = 2;
    while d * d <= rest && d <= TRIAL_DIVISION_BOUND as u128 {
        let mut odd = false;
        while rest.is_multiple_of(d) {
            rest /= d;
            odd = !odd;
        }
        if odd {
            core *= d;
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if d * d > rest {
        return Some(core * rest);
    }
    let root = rest.sqrt();
    (root * root == rest).then_some(core)
}

fn too_large(n: &BigInt) -> Error {
    Error::SquareClassTooLarge(format!(
        "{n} has a cofactor that trial division up to {TRIAL_DIVISION_BOUND} cannot resolve"
    ))
}

/// Euler's criterion for nonzero `a`.
fn is_residue(a: u64, p: u64) -> bool {
    pow_mod(a % p, (p - 1) / 2, p) == 1
}

fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn normalize_minus(s: &str) -> String {
    s.replace('\u{2212}', "-")
}

/// Parses `a` or `a/b` into a rational.
pub(crate) fn parse_rational(text: &str) -> Result<BigRational> {
    let s = normalize_minus(text.trim());
    let bad = || Error::Parse(format!("bad scalar {text:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::DivisionByZero(format!("scalar {text:?}")));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.trim_start_matches('+').parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(n))
        }
    }
}
