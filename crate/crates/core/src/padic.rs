//! Elements of Q_p carried to a finite number of known digits.
//!
//! A nonzero value is stored as `p^v * u` where `u` is a unit known modulo
//! `p^N`; `N` is the relative precision. Precision only ever shrinks under
//! arithmetic: products and quotients keep the smaller relative precision,
//! sums keep the smaller absolute precision `v + N`.
//!
//! Besides exact zero there is a third state, a value known to be
//! `0 mod p^k` and nothing more. It is produced only by the `*_approx`
//! operations and by polynomial evaluation at a root; every query that needs
//! its valuation fails with [`Error::PrecisionExhausted`].

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub const DEFAULT_PRECISION: i64 = 64;

thread_local! {
    static POWERS: RefCell<HashMap<u32, Vec<BigUint>>> = RefCell::new(HashMap::new());
}

/// `p^n` for `n >= 0`, memoised per thread.
pub(crate) fn pow_p(p: u32, n: i64) -> BigUint {
    assert!(n >= 0, "negative exponent {n}");
    let n = n as usize;
    POWERS.with(|cell| {
        let mut map = cell.borrow_mut();
        let table = map.entry(p).or_insert_with(|| vec![BigUint::one()]);
        while table.len() <= n {
            let next = table.last().unwrap() * p;
            table.push(next);
        }
        table[n].clone()
    })
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits off the largest power of `p` dividing a nonzero integer.
pub(crate) fn split_p(p: u32, n: &BigUint) -> (i64, BigUint) {
    debug_assert!(!n.is_zero());
    let pb = BigUint::from(p);
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(&pb);
        if !r.is_zero() {
            return (v, m);
        }
        m = q;
        v += 1;
    }
}

pub fn ord_int(p: u32, n: &BigInt) -> Option<i64> {
    if n.is_zero() {
        None
    } else {
        Some(split_p(p, n.magnitude()).0)
    }
}

/// Valuation with `PlusInfinity` for exact zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Valuation {
    Finite(i64),
    PlusInfinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::PlusInfinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::PlusInfinity => write!(f, "+inf"),
        }
    }
}

/// `|x|_p` as a power of `p`; `PPower(e)` means `p^e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Norm {
    Zero,
    PPower(i64),
}

impl Norm {
    pub fn from_valuation(v: Valuation) -> Norm {
        match v {
            Valuation::Finite(v) => Norm::PPower(-v),
            Valuation::PlusInfinity => Norm::Zero,
        }
    }
}

/// What is known about a valuation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrdBound {
    Exact(i64),
    /// Zero to the known digits: the valuation is at least this.
    AtLeast(i64),
    Infinite,
}

impl OrdBound {
    /// The best lower bound; `i64::MAX` for exact zero.
    pub fn lower(self) -> i64 {
        match self {
            OrdBound::Exact(v) | OrdBound::AtLeast(v) => v,
            OrdBound::Infinite => i64::MAX,
        }
    }

    /// Decides `ord >= k`, failing when the known digits do not settle it.
    pub fn at_least(self, k: i64) -> Result<bool> {
        match self {
            OrdBound::Exact(v) => Ok(v >= k),
            OrdBound::Infinite => Ok(true),
            OrdBound::AtLeast(v) if v >= k => Ok(true),
            OrdBound::AtLeast(v) => Err(Error::PrecisionExhausted(format!(
                "need valuation >= {k}, only {v} digits known"
            ))),
        }
    }

    /// The exact valuation, failing for values that are zero to precision.
    pub fn exact(self) -> Result<Valuation> {
        match self {
            OrdBound::Exact(v) => Ok(Valuation::Finite(v)),
            OrdBound::Infinite => Ok(Valuation::PlusInfinity),
            OrdBound::AtLeast(v) => Err(Error::PrecisionExhausted(format!(
                "value is zero modulo p^{v}"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Repr {
    Zero,
    Vague { abs: i64 },
    Unit { val: i64, unit: BigUint, prec: i64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicNumber {
    prime: u32,
    repr: Repr,
}

impl PadicNumber {
    pub fn zero(prime: u32) -> Self {
        PadicNumber { prime, repr: Repr::Zero }
    }

    /// A value known only to be divisible by `p^abs`.
    pub fn vague(prime: u32, abs: i64) -> Self {
        PadicNumber { prime, repr: Repr::Vague { abs } }
    }

    fn from_parts(prime: u32, val: i64, unit: BigUint, prec: i64) -> Self {
        if prec <= 0 {
            return Self::vague(prime, val);
        }
        let unit = unit % pow_p(prime, prec);
        debug_assert!(!(&unit % prime).is_zero());
        PadicNumber { prime, repr: Repr::Unit { val, unit, prec } }
    }

    pub fn from_bigint(prime: u32, n: &BigInt, precision: i64) -> Self {
        if n.is_zero() {
            return Self::zero(prime);
        }
        let (val, m) = split_p(prime, n.magnitude());
        let modulus = pow_p(prime, precision);
        let mut unit = m % &modulus;
        if n.sign() == Sign::Minus {
            unit = &modulus - unit;
        }
        Self::from_parts(prime, val, unit, precision)
    }

    pub fn from_i64(prime: u32, n: i64, precision: i64) -> Self {
        Self::from_bigint(prime, &BigInt::from(n), precision)
    }

    pub fn one(prime: u32, precision: i64) -> Self {
        Self::from_i64(prime, 1, precision)
    }

    /// `p^e` with the given relative precision.
    pub fn p_power(prime: u32, e: i64, precision: i64) -> Self {
        Self::from_parts(prime, e, BigUint::one(), precision)
    }

    /// `num/den` in canonical form with `precision` unit digits.
    pub fn from_rational(
        numerator: impl Into<BigInt>,
        denominator: impl Into<BigInt>,
        prime: u32,
        precision: i64,
    ) -> Result<Self> {
        if !is_prime(prime as u64) {
            return Err(Error::NotPrime(prime as u64));
        }
        let (num, den) = (numerator.into(), denominator.into());
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if precision < 1 {
            return Err(Error::InvalidArgument(format!("precision {precision} < 1")));
        }
        if num.is_zero() {
            return Ok(Self::zero(prime));
        }
        let (vn, un) = split_p(prime, num.magnitude());
        let (vd, ud) = split_p(prime, den.magnitude());
        let modulus = pow_p(prime, precision);
        let inv = (ud % &modulus)
            .modinv(&modulus)
            .expect("unit part is coprime to p");
        let mut unit = (un * inv) % &modulus;
        if num.sign() != den.sign() {
            unit = (&modulus - unit) % &modulus;
        }
        Ok(Self::from_parts(prime, vn - vd, unit, precision))
    }

    pub fn from_bigrational(r: &BigRational, prime: u32, precision: i64) -> Result<Self> {
        Self::from_rational(r.numer().clone(), r.denom().clone(), prime, precision)
    }

    pub fn prime(&self) -> u32 {
        self.prime
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero)
    }

    /// True for a value known only to vanish modulo some power of `p`.
    pub fn is_vague(&self) -> bool {
        matches!(self.repr, Repr::Vague { .. })
    }

    pub fn ord_bound(&self) -> OrdBound {
        match &self.repr {
            Repr::Zero => OrdBound::Infinite,
            Repr::Vague { abs } => OrdBound::AtLeast(*abs),
            Repr::Unit { val, .. } => OrdBound::Exact(*val),
        }
    }

    pub fn valuation(&self) -> Result<Valuation> {
        self.ord_bound().exact()
    }

    pub fn norm(&self) -> Result<Norm> {
        self.valuation().map(Norm::from_valuation)
    }

    pub fn norm_and_ord(&self) -> Result<(Norm, Valuation)> {
        let v = self.valuation()?;
        Ok((Norm::from_valuation(v), v))
    }

    /// Number of known unit digits; `None` for exact zero.
    pub fn rel_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Vague { .. } => Some(0),
            Repr::Unit { prec, .. } => Some(*prec),
        }
    }

    /// The value is known modulo `p^abs_precision`; `None` for exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero => None,
            Repr::Vague { abs } => Some(*abs),
            Repr::Unit { val, prec, .. } => Some(val + prec),
        }
    }

    fn abs_or_max(&self) -> i64 {
        self.abs_precision().unwrap_or(i64::MAX)
    }

    /// Base-p unit digits `d_0..d_{N-1}`; empty for zero.
    pub fn unit_digits(&self) -> Vec<u32> {
        match &self.repr {
            Repr::Unit { unit, prec, .. } => {
                let mut out = Vec::with_capacity(*prec as usize);
                let mut u = unit.clone();
                let pb = BigUint::from(self.prime);
                for _ in 0..*prec {
                    let (q, r) = u.div_rem(&pb);
                    out.push(r.to_u32().unwrap());
                    u = q;
                }
                out
            }
            _ => Vec::new(),
        }
    }

    /// First unit digit, i.e. the residue of `x / p^v` mod p.
    pub fn leading_digit(&self) -> Option<u32> {
        match &self.repr {
            Repr::Unit { unit, .. } => (unit % self.prime).to_u32(),
            _ => None,
        }
    }

    /// Unit part `x / p^v` as a nonnegative integer below `p^N`.
    pub fn unit_integer(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    /// The represented rational `p^v * u` (the known digits taken exactly).
    pub fn to_rational(&self) -> BigRational {
        match &self.repr {
            Repr::Unit { val, unit, .. } => {
                let u = BigRational::from_integer(BigInt::from(unit.clone()));
                let pp = BigRational::from_integer(BigInt::from(pow_p(self.prime, val.abs())));
                if *val >= 0 {
                    u * pp
                } else {
                    u / pp
                }
            }
            _ => BigRational::zero(),
        }
    }

    /// Residue mod `p^k` of a value of nonnegative valuation known to at
    /// least `k` absolute digits.
    pub fn residue_mod(&self, k: i64) -> Result<BigUint> {
        let modulus = pow_p(self.prime, k);
        match &self.repr {
            Repr::Zero => Ok(BigUint::zero()),
            Repr::Vague { abs } if *abs >= k => Ok(BigUint::zero()),
            Repr::Unit { val, unit, prec } if val + prec >= k => {
                if *val < 0 {
                    return Err(Error::InvalidArgument("value is not integral".into()));
                }
                if *val >= k {
                    return Ok(BigUint::zero());
                }
                Ok((unit * pow_p(self.prime, *val)) % modulus)
            }
            _ => Err(Error::PrecisionExhausted(format!(
                "residue mod p^{k} needs {k} absolute digits"
            ))),
        }
    }

    /// Forgets every digit at or above absolute position `abs`.
    pub fn truncate_abs(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::Zero => Self::vague(self.prime, abs),
            Repr::Vague { abs: a } => Self::vague(self.prime, (*a).min(abs)),
            Repr::Unit { val, unit, prec } => {
                let prec = (*prec).min(abs - val);
                Self::from_parts(self.prime, *val, unit.clone(), prec)
            }
        }
    }

    /// Takes the known digits as exact and pads them with zeros up to
    /// `precision` unit digits. Used to seed computations at higher precision.
    pub fn padded(&self, precision: i64) -> Self {
        match &self.repr {
            Repr::Unit { val, unit, prec } if precision > *prec => PadicNumber {
                prime: self.prime,
                repr: Repr::Unit { val: *val, unit: unit.clone(), prec: precision },
            },
            Repr::Vague { .. } => Self::zero(self.prime),
            _ => self.clone(),
        }
    }

    fn check_prime(&self, other: &Self) {
        assert_eq!(
            self.prime, other.prime,
            "p-adic operands from different fields"
        );
    }

    fn same_prime(&self, other: &Self) -> Result<()> {
        if self.prime == other.prime {
            Ok(())
        } else {
            Err(Error::PrimeMismatch(self.prime, other.prime))
        }
    }

    fn signed_sum(&self, other: &Self, negate: bool) -> Self {
        self.check_prime(other);
        let p = self.prime;
        match (&self.repr, &other.repr) {
            (_, Repr::Zero) => return self.clone(),
            (Repr::Zero, _) => return if negate { -other } else { other.clone() },
            _ => {}
        }
        let abs = self.abs_or_max().min(other.abs_or_max());
        let mut terms: Vec<(i64, BigInt)> = Vec::with_capacity(2);
        if let Repr::Unit { val, unit, .. } = &self.repr {
            terms.push((*val, BigInt::from(unit.clone())));
        }
        if let Repr::Unit { val, unit, .. } = &other.repr {
            let u = BigInt::from(unit.clone());
            terms.push((*val, if negate { -u } else { u }));
        }
        let Some(vmin) = terms.iter().map(|t| t.0).min() else {
            return Self::vague(p, abs);
        };
        if vmin >= abs {
            return Self::vague(p, abs);
        }
        let modulus = BigInt::from(pow_p(p, abs - vmin));
        let mut s = BigInt::zero();
        for (v, u) in terms {
            s += u * BigInt::from(pow_p(p, v - vmin));
        }
        let s = s.mod_floor(&modulus);
        if s.is_zero() {
            return Self::vague(p, abs);
        }
        let (t, unit) = split_p(p, s.magnitude());
        let val = vmin + t;
        Self::from_parts(p, val, unit, abs - val)
    }

    /// Sum that may come out as a value known only to vanish mod `p^k`.
    pub fn add_approx(&self, other: &Self) -> Self {
        self.signed_sum(other, false)
    }

    pub fn sub_approx(&self, other: &Self) -> Self {
        self.signed_sum(other, true)
    }

    fn refuse_vague(x: Self, what: &str) -> Result<Self> {
        if let Repr::Vague { abs } = x.repr {
            Err(Error::PrecisionExhausted(format!(
                "{what} cancels every known digit (result is 0 mod p^{abs})"
            )))
        } else {
            Ok(x)
        }
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Self::refuse_vague(self.add_approx(other), "addition")
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Self::refuse_vague(self.sub_approx(other), "subtraction")
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check_prime(other);
        let p = self.prime;
        match (&self.repr, &other.repr) {
            (Repr::Zero, _) | (_, Repr::Zero) => Self::zero(p),
            (Repr::Vague { abs }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Vague { abs }) => Self::vague(p, abs + val),
            (Repr::Vague { abs: a }, Repr::Vague { abs: b }) => Self::vague(p, a + b),
            (
                Repr::Unit { val: v1, unit: u1, prec: n1 },
                Repr::Unit { val: v2, unit: u2, prec: n2 },
            ) => Self::from_parts(p, v1 + v2, u1 * u2, (*n1).min(*n2)),
        }
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        Ok(self.mul(other))
    }

    pub fn try_div(&self, other: &Self) -> Result<Self> {
        self.same_prime(other)?;
        let p = self.prime;
        match (&self.repr, &other.repr) {
            (_, Repr::Zero) => Err(Error::DivisionByZero),
            (_, Repr::Vague { abs }) => Err(Error::PrecisionExhausted(format!(
                "divisor is 0 mod p^{abs}"
            ))),
            (Repr::Zero, _) => Ok(Self::zero(p)),
            (Repr::Vague { abs }, Repr::Unit { val, .. }) => Ok(Self::vague(p, abs - val)),
            (
                Repr::Unit { val: v1, unit: u1, prec: n1 },
                Repr::Unit { val: v2, unit: u2, prec: n2 },
            ) => {
                let prec = (*n1).min(*n2);
                let modulus = pow_p(p, prec);
                let inv = (u2 % &modulus)
                    .modinv(&modulus)
                    .expect("units are invertible");
                Ok(Self::from_parts(p, v1 - v2, u1 * inv, prec))
            }
        }
    }

    pub fn inverse(&self) -> Result<Self> {
        let one = match self.rel_precision() {
            Some(n) if n > 0 => Self::one(self.prime, n),
            _ => Self::one(self.prime, DEFAULT_PRECISION),
        };
        one.try_div(self)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc: Option<Self> = None;
        for _ in 0..e {
            acc = Some(match acc {
                None => self.clone(),
                Some(a) => a.mul(self),
            });
        }
        acc.unwrap_or_else(|| Self::one(self.prime, self.rel_precision().unwrap_or(DEFAULT_PRECISION).max(1)))
    }

    /// Multiplication by an integer taken as exact.
    pub fn mul_int(&self, k: i64) -> Self {
        let prec = self.rel_precision().unwrap_or(1).max(1);
        self.mul(&Self::from_i64(self.prime, k, prec))
    }

    /// Multiplication by `p^k`, exact.
    pub fn shift(&self, k: i64) -> Self {
        match &self.repr {
            Repr::Zero => self.clone(),
            Repr::Vague { abs } => Self::vague(self.prime, abs + k),
            Repr::Unit { val, unit, prec } => PadicNumber {
                prime: self.prime,
                repr: Repr::Unit { val: val + k, unit: unit.clone(), prec: *prec },
            },
        }
    }

    /// Bound on `ord(self - other)`.
    pub fn diff_ord(&self, other: &Self) -> OrdBound {
        self.sub_approx(other).ord_bound()
    }

    /// Whether the two values agree modulo `p^k`, failing if undecidable.
    pub fn agrees_to(&self, other: &Self, k: i64) -> Result<bool> {
        self.diff_ord(other).at_least(k)
    }

    /// Canonical text form `p^v * (d0 + d1*p + ...) + O(p^{v+N})`.
    pub fn render(&self) -> String {
        let p = self.prime;
        match &self.repr {
            Repr::Zero => "0".to_string(),
            Repr::Vague { abs } => format!("O({p}^{abs})"),
            Repr::Unit { val, prec, .. } => {
                let digits = self.unit_digits();
                let mut body = String::new();
                for (i, d) in digits.iter().enumerate() {
                    if i > 0 {
                        body.push_str(" + ");
                    }
                    match i {
                        0 => body.push_str(&d.to_string()),
                        1 => body.push_str(&format!("{d}*{p}")),
                        _ => body.push_str(&format!("{d}*{p}^{i}")),
                    }
                }
                format!("{p}^{val} * ({body}) + O({p}^{})", val + prec)
            }
        }
    }
}

impl fmt::Display for PadicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl Neg for &PadicNumber {
    type Output = PadicNumber;

    fn neg(self) -> PadicNumber {
        match &self.repr {
            Repr::Unit { val, unit, prec } => {
                let modulus = pow_p(self.prime, *prec);
                PadicNumber::from_parts(self.prime, *val, &modulus - unit, *prec)
            }
            _ => self.clone(),
        }
    }
}

impl Neg for PadicNumber {
    type Output = PadicNumber;

    fn neg(self) -> PadicNumber {
        -&self
    }
}

impl Mul for &PadicNumber {
    type Output = PadicNumber;

    fn mul(self, rhs: &PadicNumber) -> PadicNumber {
        PadicNumber::mul(self, rhs)
    }
}

/// `{x : |x - center|_p <= p^radius_exp}`.
///
/// The open ball `{|x - a| < p^g}` is the closed ball of exponent `g - 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ball {
    pub center: PadicNumber,
    pub radius_exp: i64,
}

impl Ball {
    pub fn new(center: PadicNumber, radius_exp: i64) -> Self {
        Ball { center, radius_exp }
    }

    /// The open ball `{|x - center| < p^open_exp}`.
    pub fn open(center: PadicNumber, open_exp: i64) -> Self {
        Ball { center, radius_exp: open_exp - 1 }
    }

    /// Points of the ball are exactly those with `ord(x - center) >= min_ord()`.
    pub fn min_ord(&self) -> i64 {
        -self.radius_exp
    }

    pub fn contains(&self, x: &PadicNumber) -> Result<bool> {
        x.diff_ord(&self.center).at_least(self.min_ord())
    }

    pub fn contains_ball(&self, other: &Ball) -> Result<bool> {
        if other.radius_exp > self.radius_exp {
            return Ok(false);
        }
        self.contains(&other.center)
    }

    pub fn is_disjoint(&self, other: &Ball) -> Result<bool> {
        let r = self.radius_exp.max(other.radius_exp);
        Ok(!other.center.diff_ord(&self.center).at_least(-r)?)
    }

    /// Splits the ball into `p^(radius_exp - target)` disjoint balls of
    /// closed radius `p^target`, centers `center + k p^{-radius_exp}`.
    pub fn decompose(&self, target: i64) -> Result<Vec<Ball>> {
        if target > self.radius_exp {
            return Err(Error::InvalidArgument(format!(
                "target exponent {target} exceeds ball exponent {}",
                self.radius_exp
            )));
        }
        let p = self.center.prime();
        let step = self.min_ord();
        let abs = self
            .center
            .abs_precision()
            .unwrap_or(-target + DEFAULT_PRECISION);
        if abs < -target {
            return Err(Error::PrecisionExhausted(
                "ball center is not known finely enough to split".into(),
            ));
        }
        let count = pow_p(p, self.radius_exp - target)
            .to_u64()
            .ok_or_else(|| Error::Infeasible("too many sub-balls".into()))?;
        let mut out = Vec::with_capacity(count as usize);
        for k in 0..count {
            let offset = if k == 0 {
                PadicNumber::zero(p)
            } else {
                let kb = BigInt::from(k);
                let vk = ord_int(p, &kb).unwrap();
                PadicNumber::from_bigint(p, &kb, (abs - step - vk).max(1)).shift(step)
            };
            let c = self.center.add_approx(&offset);
            out.push(Ball::new(c, target));
        }
        Ok(out)
    }
}

/// `{x : |x - center|_p = p^radius_exp}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sphere {
    pub center: PadicNumber,
    pub radius_exp: i64,
}

impl Sphere {
    pub fn new(center: PadicNumber, radius_exp: i64) -> Self {
        Sphere { center, radius_exp }
    }

    pub fn contains(&self, x: &PadicNumber) -> Result<bool> {
        match x.diff_ord(&self.center) {
            OrdBound::Exact(v) => Ok(v == -self.radius_exp),
            OrdBound::Infinite => Ok(false),
            b @ OrdBound::AtLeast(_) => Ok(!b.at_least(-self.radius_exp + 1)?),
        }
    }

    /// The balls of closed radius `p^target` making up the sphere.
    pub fn decompose(&self, target: i64) -> Result<Vec<Ball>> {
        let inner = self.radius_exp - 1;
        if target > inner {
            return Err(Error::InvalidArgument(format!(
                "target exponent {target} does not split the sphere"
            )));
        }
        let outer = Ball::new(self.center.clone(), self.radius_exp);
        let hole = Ball::new(self.center.clone(), inner);
        let mut out = Vec::new();
        for b in outer.decompose(target)? {
            if !hole.contains(&b.center)? {
                out.push(b);
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q7(n: i64) -> PadicNumber {
        PadicNumber::from_i64(7, n, 8)
    }

    #[test]
    fn from_rational_examples() {
        let x = PadicNumber::from_rational(7, 1, 7, 8).unwrap();
        assert_eq!(x.valuation().unwrap(), Valuation::Finite(1));
        assert_eq!(x.unit_digits(), vec![1, 0, 0, 0, 0, 0, 0, 0]);
        let y = PadicNumber::from_rational(49, 3, 7, 8).unwrap();
        assert_eq!(y.valuation().unwrap(), Valuation::Finite(2));
        let z = PadicNumber::from_rational(-350, 1, 7, 8).unwrap();
        assert_eq!(z.valuation().unwrap(), Valuation::Finite(1));
        assert_eq!(z.leading_digit(), Some(6));
        assert_eq!(
            PadicNumber::from_rational(1, 1, 6, 8),
            Err(Error::NotPrime(6))
        );
    }

    #[test]
    fn negative_digits_by_long_division() {
        // -50 in base 7: 7-adic digits of -50 = 6 + 6*7 + 5*49 + 6*343 + ...
        let z = PadicNumber::from_rational(-50, 1, 7, 6).unwrap();
        let mut expect = Vec::new();
        let modulus = 7i64.pow(6);
        let mut r = (-50i64).rem_euclid(modulus);
        for _ in 0..6 {
            expect.push((r % 7) as u32);
            r /= 7;
        }
        assert_eq!(z.unit_digits(), expect);
    }

    #[test]
    fn sum_norms_and_cancellation() {
        let s = q7(7).try_add(&q7(49)).unwrap();
        assert_eq!(s.norm().unwrap(), Norm::PPower(-1));
        let x = PadicNumber::from_rational(3, 5, 7, 10).unwrap();
        assert!(matches!(x.try_sub(&x), Err(Error::PrecisionExhausted(_))));
        assert_eq!(x.sub_approx(&x).ord_bound(), OrdBound::AtLeast(10));
    }

    #[test]
    fn norm_examples() {
        let x = q7(343);
        assert_eq!(
            x.norm_and_ord().unwrap(),
            (Norm::PPower(-3), Valuation::Finite(3))
        );
        let y = PadicNumber::from_rational(6, 349, 7, 8).unwrap();
        assert_eq!(
            y.norm_and_ord().unwrap(),
            (Norm::PPower(0), Valuation::Finite(0))
        );
        assert_eq!(
            PadicNumber::zero(7).norm_and_ord().unwrap(),
            (Norm::Zero, Valuation::PlusInfinity)
        );
    }

    #[test]
    fn precision_propagation() {
        let a = PadicNumber::from_i64(5, 1, 10);
        let b = PadicNumber::from_i64(5, 1 + 5i64.pow(4), 12);
        let d = b.try_sub(&a).unwrap();
        assert_eq!(d.valuation().unwrap(), Valuation::Finite(4));
        assert_eq!(d.abs_precision(), Some(10));
        assert_eq!(d.rel_precision(), Some(6));
        let prod = d.mul(&b);
        assert_eq!(prod.rel_precision(), Some(6));
        let q = b.try_div(&d).unwrap();
        assert_eq!(q.valuation().unwrap(), Valuation::Finite(-4));
        assert_eq!(q.rel_precision(), Some(6));
        assert_eq!(
            a.try_div(&PadicNumber::zero(5)),
            Err(Error::DivisionByZero)
        );
    }

    #[test]
    fn division_round_trip() {
        let a = PadicNumber::from_rational(22, 7, 7, 20).unwrap();
        let b = PadicNumber::from_rational(-3, 49, 7, 20).unwrap();
        let back = a.try_div(&b).unwrap().mul(&b);
        assert!(back.agrees_to(&a, a.abs_precision().unwrap()).unwrap());
    }

    #[test]
    fn rational_round_trip_mod_pn() {
        let x = PadicNumber::from_rational(-123, 98, 7, 12).unwrap();
        let r = x.to_rational();
        let back = PadicNumber::from_bigrational(&r, 7, 12).unwrap();
        assert!(back.agrees_to(&x, x.abs_precision().unwrap()).unwrap());
    }

    #[test]
    fn rendering() {
        let x = PadicNumber::from_rational(7, 1, 7, 3).unwrap();
        assert_eq!(x.render(), "7^1 * (1 + 0*7 + 0*7^2) + O(7^4)");
        assert_eq!(PadicNumber::zero(7).render(), "0");
    }

    #[test]
    fn ball_decomposition_examples() {
        let b = Ball::new(PadicNumber::zero(7), -1);
        let parts = b.decompose(-2).unwrap();
        assert_eq!(parts.len(), 7);
        for (k, part) in parts.iter().enumerate() {
            let expect = PadicNumber::from_i64(7, 7 * k as i64, 8);
            assert!(part.center.agrees_to(&expect, 8).unwrap());
            assert_eq!(part.radius_exp, -2);
        }
        assert_eq!(b.decompose(-1).unwrap().len(), 1);
        let b2 = Ball::new(PadicNumber::zero(2), 0);
        let parts = b2.decompose(-1).unwrap();
        assert_eq!(parts.len(), 2);
        assert!(parts[0].center.is_exact_zero());
        assert_eq!(parts[1].center.residue_mod(1).unwrap(), BigUint::one());
    }

    #[test]
    fn decomposition_is_a_partition_by_residues() {
        // every residue class mod p^(gap) lands in exactly one piece
        for &(p, gap) in &[(2u32, 3i64), (3, 2), (5, 2), (7, 1)] {
            let b = Ball::new(PadicNumber::from_i64(p, 1, 10), 0);
            let parts = b.decompose(-gap).unwrap();
            assert_eq!(parts.len() as u64, (p as u64).pow(gap as u32));
            for r in 0..(p as i64).pow(gap as u32) {
                let x = PadicNumber::from_i64(p, r, 10);
                let hits = parts.iter().filter(|b| b.contains(&x).unwrap()).count();
                assert_eq!(hits, 1);
            }
            for (i, a) in parts.iter().enumerate() {
                for c in &parts[i + 1..] {
                    assert!(a.is_disjoint(c).unwrap());
                }
            }
        }
    }

    #[test]
    fn sphere_pieces() {
        let s = Sphere::new(PadicNumber::zero(7), -1);
        let parts = s.decompose(-3).unwrap();
        assert_eq!(parts.len(), 6 * 7);
        assert!(parts.iter().all(|b| s.contains(&b.center).unwrap()));
    }
}
