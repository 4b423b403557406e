//! Exact arithmetic in `Z[q, q^-1]` and its fraction field `Q(q)`.
//!
//! [`Laurent`] stores a trimmed dense coefficient vector together with the
//! exponent of its lowest term, so two equal Laurent polynomials always have
//! identical representations. [`RatFunc`] keeps numerator and denominator
//! coprime up to a unit `±q^k`, with the denominator normalized to have a
//! nonzero constant term and a positive leading coefficient. Equality of
//! either type is therefore structural.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Element of `Z[q, q^-1]`.
///
/// `coeffs[k]` is the coefficient of `q^(low + k)`. The first and last
/// coefficients are nonzero; the zero polynomial has no coefficients and
/// `low == 0`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    low: i32,
    coeffs: Vec<BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn one() -> Self {
        Laurent::monomial(BigInt::one(), 0)
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Laurent::monomial(BigInt::one(), 1)
    }

    pub fn monomial(c: impl Into<BigInt>, exp: i32) -> Self {
        Laurent::from_parts(exp, vec![c.into()])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Laurent::monomial(c, 0)
    }

    /// Builds `sum_k coeffs[k] q^(low + k)`, trimming zeros at both ends.
    pub fn from_parts(low: i32, mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead_zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros == coeffs.len() {
            return Laurent::default();
        }
        coeffs.drain(..lead_zeros);
        Laurent {
            low: low + lead_zeros as i32,
            coeffs,
        }
    }

    /// Builds from `(exponent, coefficient)` pairs; repeated exponents add up.
    pub fn from_terms<I>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, BigInt)>,
    {
        let terms: Vec<(i32, BigInt)> = terms.into_iter().collect();
        let Some(lo) = terms.iter().map(|t| t.0).min() else {
            return Laurent::zero();
        };
        let hi = terms.iter().map(|t| t.0).max().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in terms {
            coeffs[(e - lo) as usize] += c;
        }
        Laurent::from_parts(lo, coeffs)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// True for `±q^k`, the units of the ring.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].abs().is_one()
    }

    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Lowest exponent with a nonzero coefficient (0 for the zero polynomial).
    pub fn low_exp(&self) -> i32 {
        self.low
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn high_exp(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn leading_coeff(&self) -> Option<&BigInt> {
        self.coeffs.last()
    }

    pub fn coeff(&self, exp: i32) -> BigInt {
        let k = exp - self.low;
        if k < 0 || k as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i32, c))
    }

    /// Multiplies by `q^k`.
    pub fn shift(&self, k: i32) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Laurent {
            low: self.low + k,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Laurent::zero();
        }
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// `p(q^-1)`.
    pub fn invert_variable(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Laurent::from_parts(-self.high_exp(), coeffs)
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Laurent::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn eval(&self, q0: &BigRational) -> Option<BigRational> {
        if self.is_zero() {
            return Some(BigRational::zero());
        }
        if q0.is_zero() && self.low < 0 {
            return None;
        }
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * q0 + BigRational::from_integer(c.clone());
        }
        Some(acc * rational_pow(q0, self.low))
    }

    /// Sign for real `q` slightly above 1: the sign of the lowest nonvanishing
    /// Taylor coefficient at `q = 1`. Zero only for the zero polynomial.
    pub fn sign_near_one(&self) -> Ordering {
        // p(1 + t) = sum_k b_k t^k, computed by Horner in t.
        let mut shifted: Vec<BigInt> = Vec::new();
        for c in self.coeffs.iter().rev() {
            // shifted <- shifted * (1 + t) + c
            let mut next = vec![BigInt::zero(); shifted.len() + 1];
            for (k, b) in shifted.iter().enumerate() {
                next[k] += b;
                next[k + 1] += b;
            }
            next[0] += c;
            shifted = next;
        }
        shifted
            .iter()
            .find(|b| !b.is_zero())
            .map(|b| b.sign().cmp_zero())
            .unwrap_or(Ordering::Equal)
    }

    fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact quotient `self / d` if it lies in `Z[q, q^-1]`.
    pub fn div_exact(&self, d: &Laurent) -> Option<Laurent> {
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Laurent::zero());
        }
        let (q, r) = poly_divrem(&self.coeffs, &d.coeffs)?;
        if r.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(Laurent::from_parts(self.low - d.low, q))
    }

    /// Greatest common divisor, normalized to have nonzero constant term and
    /// positive leading coefficient. `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Laurent) -> Laurent {
        let g = poly_gcd(&self.coeffs, &other.coeffs);
        Laurent::from_parts(0, g)
    }
}

fn rational_pow(q0: &BigRational, e: i32) -> BigRational {
    let mut r = BigRational::one();
    let base = if e < 0 { q0.recip() } else { q0.clone() };
    for _ in 0..e.unsigned_abs() {
        r *= &base;
    }
    r
}

trait SignExt {
    fn cmp_zero(&self) -> Ordering;
}

impl SignExt for num_bigint::Sign {
    fn cmp_zero(&self) -> Ordering {
        match self {
            num_bigint::Sign::Minus => Ordering::Less,
            num_bigint::Sign::NoSign => Ordering::Equal,
            num_bigint::Sign::Plus => Ordering::Greater,
        }
    }
}

// Dense polynomial helpers over Z; index = exponent.

fn poly_trim(mut p: Vec<BigInt>) -> Vec<BigInt> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

/// Division with remainder when every step divides exactly over Z.
fn poly_divrem(a: &[BigInt], b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
    let b = poly_trim(b.to_vec());
    let lb = b.last()?.clone();
    let mut r = poly_trim(a.to_vec());
    if r.len() < b.len() {
        return Some((Vec::new(), r));
    }
    let mut q = vec![BigInt::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let lr = r.last().unwrap();
        let (c, rem) = lr.div_rem(&lb);
        if !rem.is_zero() {
            return None;
        }
        let shift = r.len() - b.len();
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] -= &c * bk;
        }
        q[shift] = c;
        r = poly_trim(r);
    }
    Some((q, r))
}

fn pseudo_rem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lb = b.last().unwrap().clone();
    let mut r = a.to_vec();
    while r.len() >= b.len() && !r.is_empty() {
        let lr = r.last().unwrap().clone();
        let shift = r.len() - b.len();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (k, bk) in b.iter().enumerate() {
            r[shift + k] -= &lr * bk;
        }
        r = poly_trim(r);
    }
    r
}

fn poly_content(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn poly_primitive(p: &[BigInt]) -> Vec<BigInt> {
    let c = poly_content(p);
    if c.is_zero() || c.is_one() {
        return p.to_vec();
    }
    p.iter().map(|x| x / &c).collect()
}

/// Primitive PRS gcd over Z[x]; inputs are coefficient vectors with nonzero
/// constant term (Laurent normal form), output has positive leading coefficient.
fn poly_gcd(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let a = poly_trim(a.to_vec());
    let b = poly_trim(b.to_vec());
    if a.is_empty() && b.is_empty() {
        return Vec::new();
    }
    let normalize = |mut p: Vec<BigInt>| {
        if p.last().is_some_and(|c| c.is_negative()) {
            for c in p.iter_mut() {
                *c = -&*c;
            }
        }
        p
    };
    if a.is_empty() {
        return normalize(b);
    }
    if b.is_empty() {
        return normalize(a);
    }
    let c = poly_content(&a).gcd(&poly_content(&b));
    let (mut x, mut y) = (poly_primitive(&a), poly_primitive(&b));
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !y.is_empty() {
        if y.len() == 1 {
            x = vec![BigInt::one()];
            break;
        }
        let r = pseudo_rem(&x, &y);
        x = y;
        y = poly_primitive(&r);
    }
    let x = poly_primitive(&x);
    normalize(x.iter().map(|v| v * &c).collect())
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let lo = self.low.min(rhs.low);
        let hi = self.high_exp().max(rhs.high_exp());
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[(self.low - lo) as usize + k] += c;
        }
        for (k, c) in rhs.coeffs.iter().enumerate() {
            coeffs[(rhs.low - lo) as usize + k] += c;
        }
        Laurent::from_parts(lo, coeffs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent {
            low: self.low,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent::from_parts(self.low + rhs.low, coeffs)
    }
}

fn fmt_terms(p: &Laurent, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return f.write_str("0");
    }
    let terms: Vec<(i32, &BigInt)> = p.terms().collect();
    for (idx, (e, c)) in terms.into_iter().rev().enumerate() {
        let neg = c.is_negative();
        match (idx, neg) {
            (0, true) => f.write_str("-")?,
            (0, false) => {}
            (_, true) => f.write_str(" - ")?,
            (_, false) => f.write_str(" + ")?,
        }
        let a = c.abs();
        if e == 0 {
            write!(f, "{a}")?;
            continue;
        }
        if !a.is_one() {
            write!(f, "{a}*")?;
        }
        if e == 1 {
            f.write_str("q")?;
        } else {
            write!(f, "q^{e}")?;
        }
    }
    Ok(())
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(self, f)
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

/// Element of `Q(q)` in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Laurent,
    den: Laurent,
}

impl Default for RatFunc {
    fn default() -> Self {
        RatFunc::zero()
    }
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: Laurent::zero(),
            den: Laurent::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from(Laurent::one())
    }

    pub fn q() -> Self {
        RatFunc::from(Laurent::q())
    }

    /// `q^k`.
    pub fn q_pow(k: i32) -> Self {
        RatFunc::from(Laurent::monomial(1, k))
    }

    pub fn int(c: i64) -> Self {
        RatFunc::from(Laurent::constant(c))
    }

    /// `q - q^-1`.
    pub fn q_minus_qinv() -> Self {
        RatFunc::from(&Laurent::q() - &Laurent::monomial(1, -1))
    }

    /// `q + q^-1`.
    pub fn q_plus_qinv() -> Self {
        RatFunc::from(&Laurent::q() + &Laurent::monomial(1, -1))
    }

    pub fn new(num: Laurent, den: Laurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::reduce(num, den))
    }

    fn reduce(num: Laurent, den: Laurent) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let shift = num.low - den.low;
        let (mut n, mut d) = if den.is_monomial() {
            // Monomial denominators only need the integer content removed.
            let dc = den.coeffs[0].clone();
            let g = num.content().gcd(&dc);
            let n = Laurent {
                low: 0,
                coeffs: num.coeffs.iter().map(|c| c / &g).collect(),
            };
            (n, Laurent::constant(dc / g))
        } else {
            let g = poly_gcd(&num.coeffs, &den.coeffs);
            let n = poly_divrem(&num.coeffs, &g).expect("gcd divides").0;
            let d = poly_divrem(&den.coeffs, &g).expect("gcd divides").0;
            (Laurent::from_parts(0, n), Laurent::from_parts(0, d))
        };
        if d.leading_coeff().is_some_and(|c| c.is_negative()) {
            n = -&n;
            d = -&d;
        }
        RatFunc {
            num: n.shift(shift),
            den: d,
        }
    }

    pub fn numer(&self) -> &Laurent {
        &self.num
    }

    pub fn denom(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// True for nonzero constants times a power of `q` with unit coefficient.
    pub fn is_unit_monomial(&self) -> bool {
        self.den.is_one() && self.num.is_unit()
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RatFunc::reduce(self.den.clone(), self.num.clone()))
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let n = base.num.pow(e.unsigned_abs());
        let d = base.den.pow(e.unsigned_abs());
        Ok(RatFunc { num: n, den: d })
    }

    pub fn eval_at(&self, q0: &BigRational) -> Result<BigRational> {
        let pole = || Error::Pole(q0.to_string());
        let d = self.den.eval(q0).ok_or_else(pole)?;
        if d.is_zero() {
            return Err(pole());
        }
        let n = self.num.eval(q0).ok_or_else(pole)?;
        Ok(n / d)
    }

    /// Constant rational function.
    pub fn from_rational(x: &BigRational) -> Self {
        RatFunc::reduce(
            Laurent::constant(x.numer().clone()),
            Laurent::constant(x.denom().clone()),
        )
    }

    /// The constant `self(q0)` for an integer `q0`.
    pub fn specialize(&self, q0: i64) -> Result<Self> {
        let v = self.eval_at(&BigRational::from_integer(q0.into()))?;
        Ok(RatFunc::from_rational(&v))
    }

    /// Substitutes `q -> q^-1`.
    pub fn invert_variable(&self) -> Self {
        RatFunc::reduce(self.num.invert_variable(), self.den.invert_variable())
    }

    /// Sign for real `q` in `(1, 1 + eps)`.
    pub fn sign_near_one(&self) -> Ordering {
        match (self.num.sign_near_one(), self.den.sign_near_one()) {
            (Ordering::Equal, _) => Ordering::Equal,
            (a, Ordering::Greater) => a,
            (a, _) => a.reverse(),
        }
    }

    /// Parses the canonical text form; accepts any expression in `q`, integers,
    /// `+ - * / ^` and parentheses.
    pub fn parse(s: &str) -> Result<Self> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let v = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("trailing input"));
        }
        Ok(v)
    }
}

impl From<Laurent> for RatFunc {
    fn from(num: Laurent) -> Self {
        RatFunc {
            num,
            den: Laurent::one(),
        }
    }
}

impl From<i64> for RatFunc {
    fn from(c: i64) -> Self {
        RatFunc::int(c)
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from(&self.num + &rhs.num);
        }
        if self.den == rhs.den {
            return RatFunc::reduce(&self.num + &rhs.num, self.den.clone());
        }
        let n = &(&self.num * &rhs.den) + &(&rhs.num * &self.den);
        RatFunc::reduce(n, &self.den * &rhs.den)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && rhs.den.is_one() {
            return RatFunc::from(&self.num * &rhs.num);
        }
        RatFunc::reduce(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    /// Panics on division by zero; use [`RatFunc::inv`] for a checked form.
    fn div(self, rhs: &RatFunc) -> RatFunc {
        let inv = rhs.inv().expect("division by zero");
        self.mul(&inv)
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { $tr::$m(&self, &rhs) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t { $tr::$m(&self, rhs) }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { $tr::$m(self, &rhs) }
        }
    )*};
}
forward_owned!(Laurent, Add add, Sub sub, Mul mul);
forward_owned!(RatFunc, Add add, Sub sub, Mul mul, Div div);

impl AddAssign for RatFunc {
    fn add_assign(&mut self, rhs: RatFunc) {
        *self = &*self + &rhs;
    }
}

impl SubAssign for RatFunc {
    fn sub_assign(&mut self, rhs: RatFunc) {
        *self = &*self - &rhs;
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -&self
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return fmt_terms(&self.num, f);
        }
        write!(f, "({})/({})", self.num, self.den)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RatFunc::parse(s)
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RatFunc::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        while let Some(c @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            let t = self.term()?;
            acc = if c == b'+' { acc + t } else { acc - t };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        while let Some(c @ (b'*' | b'/')) = self.peek() {
            self.pos += 1;
            let t = self.unary()?;
            acc = if c == b'*' {
                acc * t
            } else {
                let inv = t.inv().map_err(|_| self.err("division by zero"))?;
                acc * inv
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(-self.unary()?);
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.signed_int()?;
            let e = i32::try_from(e).map_err(|_| self.err("exponent out of range"))?;
            return base
                .pow(e)
                .map_err(|_| self.err("zero to a negative power"));
        }
        Ok(base)
    }

    fn signed_int(&mut self) -> Result<BigInt> {
        let neg = if self.peek() == Some(b'-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = self.digits()?;
        Ok(if neg { -v } else { v })
    }

    fn digits(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        Ok(s.parse().unwrap())
    }

    fn atom(&mut self) -> Result<RatFunc> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let v = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(v)
            }
            Some(b'q') => {
                self.pos += 1;
                Ok(RatFunc::q())
            }
            Some(c) if c.is_ascii_digit() => Ok(RatFunc::from(Laurent::constant(self.digits()?))),
            _ => Err(self.err("expected integer, 'q' or '('")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn add_examples() {
        assert_eq!(r("q") + r("q^-1"), RatFunc::q_plus_qinv());
        assert!((r("q - q^-1") + r("q^-1 - q")).is_zero());
        // Cross-multiplication oracle: a/b + c/d = (ad + cb)/(bd).
        let s = r("1/(q + q^-1)") + r("q^2/(q + q^-1)");
        let oracle = r("(1*(q+q^-1) + q^2*(q+q^-1)) / ((q+q^-1)*(q+q^-1))");
        assert_eq!(s, oracle);
        // (1 + q^2)/(q + q^-1) = q (1 + q^2)/(1 + q^2) = q
        assert_eq!(s, RatFunc::q());
    }

    #[test]
    fn mul_inv_eq_examples() {
        assert_eq!(
            RatFunc::q_plus_qinv() * RatFunc::q_minus_qinv(),
            r("q^2 - q^-2")
        );
        assert_eq!(RatFunc::q().inv().unwrap(), RatFunc::q_pow(-1));
        assert_eq!(r("q^2") * r("q^-2"), RatFunc::one());
        assert_eq!(RatFunc::zero().inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn eval_examples() {
        assert_eq!(
            RatFunc::q_minus_qinv().eval_at(&rat(1, 1)).unwrap(),
            rat(0, 1)
        );
        assert_eq!(
            RatFunc::q_plus_qinv()
                .inv()
                .unwrap()
                .eval_at(&rat(1, 1))
                .unwrap(),
            rat(1, 2)
        );
        // q^(1-N) with N = 3 at q = 2
        assert_eq!(
            RatFunc::q_pow(1 - 3).eval_at(&rat(2, 1)).unwrap(),
            rat(1, 4)
        );
        assert!(matches!(
            r("1/(q - 1)").eval_at(&rat(1, 1)),
            Err(Error::Pole(_))
        ));
        assert!(matches!(
            RatFunc::q_pow(-1).eval_at(&rat(0, 1)),
            Err(Error::Pole(_))
        ));
    }

    #[test]
    fn canonical_rendering() {
        assert_eq!(r("q^2 - 2 + q^-2").to_string(), "q^2 - 2 + q^-2");
        assert_eq!(r("(q - q^-1)^2").to_string(), "q^2 - 2 + q^-2");
        assert_eq!(r("-3*q^-1 + q").to_string(), "q - 3*q^-1");
        assert_eq!(r("1/(q + q^-1)").to_string(), "(q)/(q^2 + 1)");
        assert_eq!(r("-1/(2*q^3 + 4)").to_string(), "(-1)/(2*q^3 + 4)");
        assert_eq!(r("2/4").to_string(), "(1)/(2)");
        assert_eq!(RatFunc::zero().to_string(), "0");
    }

    #[test]
    fn canonical_denominator() {
        let x = r("(q^2 - 1)/(-q^3 + q)");
        // (q^2 - 1)/(-q (q^2 - 1)) = -q^-1
        assert_eq!(x, r("-q^-1"));
        let y = r("(q+1)/(2*q^2 - 2)");
        assert_eq!(y.denom(), &r("2*q - 2").numer().clone());
        assert!(y.denom().leading_coeff().unwrap().is_positive());
        assert_eq!(y.denom().low_exp(), 0);
    }

    #[test]
    fn gcd_handles_content() {
        let a = Laurent::parse_poly("6*q^2 - 6");
        let b = Laurent::parse_poly("4*q + 4");
        assert_eq!(a.gcd(&b), Laurent::parse_poly("2*q + 2"));
    }

    #[test]
    fn sign_near_one() {
        assert_eq!(r("-q^-1").sign_near_one(), Ordering::Less);
        assert_eq!(r("q^-4").sign_near_one(), Ordering::Greater);
        assert_eq!(r("q - q^-1").sign_near_one(), Ordering::Greater);
        assert_eq!(r("q^-1 - q").sign_near_one(), Ordering::Less);
        assert_eq!(r("(q - 1)^2").sign_near_one(), Ordering::Greater);
        assert_eq!(r("1/(1 - q)").sign_near_one(), Ordering::Less);
        assert_eq!(RatFunc::zero().sign_near_one(), Ordering::Equal);
    }

    #[test]
    fn parse_errors() {
        assert!(RatFunc::parse("q +").is_err());
        assert!(RatFunc::parse("(q").is_err());
        assert!(RatFunc::parse("1/0").is_err());
        assert!(RatFunc::parse("x").is_err());
    }

    impl Laurent {
        fn parse_poly(s: &str) -> Laurent {
            let v = RatFunc::parse(s).unwrap();
            assert!(v.is_laurent());
            v.num
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn laurent() -> impl Strategy<Value = Laurent> {
            (-4i32..4, prop::collection::vec(-5i64..6, 0..5)).prop_map(|(lo, cs)| {
                Laurent::from_parts(lo, cs.into_iter().map(BigInt::from).collect())
            })
        }

        fn ratfunc() -> impl Strategy<Value = RatFunc> {
            (laurent(), laurent()).prop_map(|(n, d)| {
                if d.is_zero() {
                    RatFunc::from(n)
                } else {
                    RatFunc::new(n, d).unwrap()
                }
            })
        }

        proptest! {
            #[test]
            fn field_axioms(a in ratfunc(), b in ratfunc(), c in ratfunc()) {
                prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
                prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
                prop_assert_eq!(&a * &b, &b * &a);
                if !a.is_zero() {
                    prop_assert_eq!(&a * &a.inv().unwrap(), RatFunc::one());
                }
            }

            #[test]
            fn eval_is_multiplicative(a in ratfunc(), b in ratfunc(), n in 1i64..7, d in 1i64..5) {
                let q0 = BigRational::new(n.into(), d.into());
                if let (Ok(x), Ok(y)) = (a.eval_at(&q0), b.eval_at(&q0)) {
                    prop_assert_eq!((&a * &b).eval_at(&q0).unwrap(), x * y);
                }
            }

            #[test]
            fn render_parse_roundtrip(a in ratfunc()) {
                prop_assert_eq!(RatFunc::parse(&a.to_string()).unwrap(), a);
            }
        }
    }
}
