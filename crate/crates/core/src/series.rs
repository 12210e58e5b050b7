//! Truncated formal power series in `q` over arbitrary-precision integers.
//!
//! A [`QSeries`] stores the dense coefficient vector `c_0 .. c_order`; every
//! coefficient above `order` is unknown. Binary operations truncate to the
//! smaller of the two orders.
//!
//! The same type doubles as a container for exact polynomials. The `poly_*`
//! methods treat the stored coefficients as the whole polynomial (everything
//! above `order` is zero) and grow the order instead of truncating.

use std::fmt;
use std::ops::{Add, Index, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Exact integer coefficient of a series.
pub type Coefficient = BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn from_parity(k: usize) -> Sign {
        if k % 2 == 0 {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub fn times(self, other: Sign) -> Sign {
        if self == other {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// The monomial `±q^k`, used as the base point `a` of `(a; q^t)_n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub sign: Sign,
    pub exponent: usize,
}

impl Monomial {
    pub fn new(sign: Sign, exponent: usize) -> Self {
        Monomial { sign, exponent }
    }

    /// `+q^k`
    pub fn pos(exponent: usize) -> Self {
        Monomial::new(Sign::Plus, exponent)
    }

    /// `-q^k`
    pub fn neg(exponent: usize) -> Self {
        Monomial::new(Sign::Minus, exponent)
    }

    pub fn one() -> Self {
        Monomial::pos(0)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign == Sign::Minus { "-" } else { "" };
        match self.exponent {
            0 => write!(f, "{s}1"),
            1 => write!(f, "{s}q"),
            k => write!(f, "{s}q^{k}"),
        }
    }
}

/// Position and values of the first coefficient where two sides disagree.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mismatch {
    pub z_degree: usize,
    pub q_exponent: usize,
    #[serde(with = "decimal")]
    pub lhs: Coefficient,
    #[serde(with = "decimal")]
    pub rhs: Coefficient,
}

/// Serde adapter writing big integers as decimal strings.
pub mod decimal {
    use super::Coefficient;
    use serde::{de::Error as _, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &Coefficient, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(c)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Coefficient, D::Error> {
        let text = String::deserialize(d)?;
        text.parse().map_err(D::Error::custom)
    }
}

/// Truncated power series `c_0 + c_1 q + ... + c_order q^order + O(q^{order+1})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<Coefficient>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries {
            coeffs: vec![BigInt::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> Self {
        Self::monomial(BigInt::one(), 0, order)
    }

    /// `c q^e`, or the zero series when `e > order`.
    pub fn monomial(c: Coefficient, e: usize, order: usize) -> Self {
        let mut s = Self::zero(order);
        if e <= order {
            s.coeffs[e] = c;
        }
        s
    }

    /// Series whose order is `coeffs.len() - 1`. An empty vector yields the
    /// zero series of order 0.
    pub fn from_coeffs(mut coeffs: Vec<Coefficient>) -> Self {
        if coeffs.is_empty() {
            coeffs.push(BigInt::zero());
        }
        QSeries { coeffs }
    }

    /// Small-integer constructor: `values` are padded with zeros or cut to `order`.
    pub fn from_i64s(values: &[i64], order: usize) -> Self {
        let mut s = Self::zero(order);
        for (e, v) in values.iter().enumerate().take(order + 1) {
            s.coeffs[e] = BigInt::from(*v);
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Coefficient] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Coefficient> {
        self.coeffs
    }

    pub fn coeff(&self, e: usize) -> Option<&Coefficient> {
        self.coeffs.get(e)
    }

    pub fn set_coeff(&mut self, e: usize, c: Coefficient) {
        if e <= self.order() {
            self.coeffs[e] = c;
        }
    }

    pub fn add_to_coeff(&mut self, e: usize, c: &Coefficient) {
        if e <= self.order() {
            self.coeffs[e] += c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// Largest exponent with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| !c.is_zero())
    }

    /// Cut or zero-pad to `order`.
    pub fn with_order(mut self, order: usize) -> Self {
        self.coeffs.resize(order + 1, BigInt::zero());
        self
    }

    pub fn truncate(&self, order: usize) -> Self {
        QSeries {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
        .with_order(order)
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (usize, &Coefficient)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    pub fn scale(&self, c: &Coefficient) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiply by `q^k`, keeping the order (high terms fall off).
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for e in k..=order {
            out.coeffs[e] = self.coeffs[e - k].clone();
        }
        out
    }

    /// Substitute `q -> ±q^k`, keeping the order. `k = 0` would need the
    /// unknown tail and is rejected.
    pub fn substitute(&self, m: Monomial) -> Result<Self> {
        if m.exponent == 0 {
            return Err(Error::InvalidArgument(
                "substitution q -> ±1 is not defined on a truncated series".into(),
            ));
        }
        let order = self.order();
        let mut out = Self::zero(order);
        for (e, c) in self.terms() {
            let target = e * m.exponent;
            if target > order {
                break;
            }
            out.coeffs[target] = if m.sign == Sign::Minus && e % 2 == 1 {
                -c
            } else {
                c.clone()
            };
        }
        Ok(out)
    }

    /// In place multiplication by `1 - sign q^e`.
    pub fn mul_binomial_assign(&mut self, sign: Sign, e: usize) {
        let order = self.order();
        if e == 0 {
            match sign {
                Sign::Plus => self.coeffs.iter_mut().for_each(|c| c.set_zero()),
                Sign::Minus => self.coeffs.iter_mut().for_each(|c| *c *= 2),
            }
            return;
        }
        for i in (e..=order).rev() {
            if self.coeffs[i - e].is_zero() {
                continue;
            }
            let (lo, hi) = self.coeffs.split_at_mut(i);
            match sign {
                Sign::Plus => hi[0] -= &lo[i - e],
                Sign::Minus => hi[0] += &lo[i - e],
            }
        }
    }

    /// In place truncated division by `1 - sign q^e`, `e >= 1`.
    pub fn div_binomial_assign(&mut self, sign: Sign, e: usize) -> Result<()> {
        if e == 0 {
            return Err(Error::NonUnitConstant {
                constant: BigInt::from(1 - sign.to_i64()),
            });
        }
        let order = self.order();
        for i in e..=order {
            if self.coeffs[i - e].is_zero() {
                continue;
            }
            let (lo, hi) = self.coeffs.split_at_mut(i);
            match sign {
                Sign::Plus => hi[0] += &lo[i - e],
                Sign::Minus => hi[0] -= &lo[i - e],
            }
        }
        Ok(())
    }

    /// `self += sign * q^k * other`, truncated at `self.order()`.
    pub fn add_shifted(&mut self, other: &QSeries, k: usize, sign: Sign) {
        let order = self.order();
        if k > order {
            return;
        }
        for (e, c) in other.coeffs[..=(order - k).min(other.order())].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match sign {
                Sign::Plus => self.coeffs[e + k] += c,
                Sign::Minus => self.coeffs[e + k] -= c,
            }
        }
    }

    /// Exact polynomial division by `1 - sign q^e`; fails unless the remainder is zero.
    pub fn poly_div_binomial(&self, sign: Sign, e: usize) -> Result<Self> {
        let Some(deg) = self.degree() else {
            return Ok(self.clone());
        };
        let mut quotient = self.clone();
        quotient.div_binomial_assign(sign, e)?;
        // an exact quotient has degree deg - e; anything above is remainder
        let bound = deg.checked_sub(e);
        let stray = quotient
            .coeffs
            .iter()
            .enumerate()
            .rposition(|(i, c)| !c.is_zero() && bound.map_or(true, |b| i > b));
        if let Some(i) = stray {
            return Err(Error::InexactDivision { exponent: i });
        }
        Ok(quotient)
    }

    /// Multiplicative inverse; the constant term must be `±1`.
    pub fn invert(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.abs() != BigInt::one() {
            return Err(Error::NonUnitConstant {
                constant: c0.clone(),
            });
        }
        let negate = c0.is_negative();
        let order = self.order();
        let support: Vec<(usize, &BigInt)> = self.terms().filter(|(e, _)| *e > 0).collect();
        let mut out = Self::zero(order);
        out.coeffs[0] = c0.clone();
        for k in 1..=order {
            let mut acc = BigInt::zero();
            for &(j, a) in &support {
                if j > k {
                    break;
                }
                let r = &out.coeffs[k - j];
                if !r.is_zero() {
                    acc += a * r;
                }
            }
            // r_k = -c0^{-1} * sum, and c0^{-1} = c0
            out.coeffs[k] = if negate { acc } else { -acc };
        }
        Ok(out)
    }

    /// Polynomial sum; the order grows to the larger of the two.
    pub fn poly_add(&self, other: &Self) -> Self {
        let order = self.order().max(other.order());
        let mut out = self.clone().with_order(order);
        for (e, c) in other.terms() {
            out.coeffs[e] += c;
        }
        out
    }

    pub fn poly_sub(&self, other: &Self) -> Self {
        let order = self.order().max(other.order());
        let mut out = self.clone().with_order(order);
        for (e, c) in other.terms() {
            out.coeffs[e] -= c;
        }
        out
    }

    /// Polynomial product; order is the sum of the orders.
    pub fn poly_mul(&self, other: &Self) -> Self {
        let order = self.order() + other.order();
        let mut out = Self::zero(order);
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.coeffs[i + j] += a * b;
            }
        }
        out
    }

    /// Polynomial `q^k p`; the order grows by `k`.
    pub fn poly_shift(&self, k: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QSeries { coeffs }
    }

    /// First disagreement on the overlap `0..=min(order)`.
    pub fn first_mismatch(&self, other: &Self) -> Option<Mismatch> {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .position(|(a, b)| a != b)
            .map(|e| Mismatch {
                z_degree: 0,
                q_exponent: e,
                lhs: self.coeffs[e].clone(),
                rhs: other.coeffs[e].clone(),
            })
    }

    /// First disagreement when both sides are read as exact polynomials.
    pub fn poly_first_mismatch(&self, other: &Self) -> Option<Mismatch> {
        let order = self.order().max(other.order());
        let zero = BigInt::zero();
        (0..=order).find_map(|e| {
            let a = self.coeff(e).unwrap_or(&zero);
            let b = other.coeff(e).unwrap_or(&zero);
            (a != b).then(|| Mismatch {
                z_degree: 0,
                q_exponent: e,
                lhs: a.clone(),
                rhs: b.clone(),
            })
        })
    }

    /// Equality on the overlap `0..=min(order)`.
    pub fn eq_to_min_order(&self, other: &Self) -> bool {
        self.first_mismatch(other).is_none()
    }
}

impl Index<usize> for QSeries {
    type Output = Coefficient;

    fn index(&self, e: usize) -> &Coefficient {
        &self.coeffs[e]
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let (neg, mag) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_mag = e == 0 || !mag.is_one();
            match (show_mag, e) {
                (_, 0) => write!(f, "{mag}")?,
                (true, 1) => write!(f, "{mag}q")?,
                (true, _) => write!(f, "{mag}q^{e}")?,
                (false, 1) => write!(f, "q")?,
                (false, _) => write!(f, "q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

pub fn qs_add(a: &QSeries, b: &QSeries) -> QSeries {
    let order = a.order().min(b.order());
    QSeries {
        coeffs: a.coeffs[..=order]
            .iter()
            .zip(&b.coeffs[..=order])
            .map(|(x, y)| x + y)
            .collect(),
    }
}

pub fn qs_sub(a: &QSeries, b: &QSeries) -> QSeries {
    let order = a.order().min(b.order());
    QSeries {
        coeffs: a.coeffs[..=order]
            .iter()
            .zip(&b.coeffs[..=order])
            .map(|(x, y)| x - y)
            .collect(),
    }
}

/// Schoolbook convolution truncated at `min(a.order, b.order)`.
pub fn qs_mul(a: &QSeries, b: &QSeries) -> QSeries {
    let order = a.order().min(b.order());
    let mut out = QSeries::zero(order);
    // drive the outer loop with the sparser operand
    let (sparse, dense) = if a.terms().count() <= b.terms().count() {
        (a, b)
    } else {
        (b, a)
    };
    for (i, x) in sparse.terms() {
        if i > order {
            break;
        }
        for j in 0..=(order - i) {
            let y = &dense.coeffs[j];
            if !y.is_zero() {
                out.coeffs[i + j] += x * y;
            }
        }
    }
    out
}

pub fn qs_invert(a: &QSeries) -> Result<QSeries> {
    a.invert()
}

pub fn qs_shift(a: &QSeries, k: usize) -> QSeries {
    a.shift(k)
}

/// `(a; q^t)_n = prod_{k<n} (1 - a q^{kt})` truncated at `order`.
pub fn poch_finite(a: Monomial, step: usize, n: usize, order: usize) -> QSeries {
    let mut out = QSeries::one(order);
    for k in 0..n {
        let e = a.exponent + k * step;
        if e > order {
            // (1 - a q^e) == 1 mod q^{order+1}; later factors are higher still
            break;
        }
        out.mul_binomial_assign(a.sign, e);
    }
    out
}

/// `(a; q^t)_inf` truncated at `order`; needs `a` of positive valuation.
pub fn poch_infinite(a: Monomial, step: usize, order: usize) -> Result<QSeries> {
    if a.exponent == 0 {
        return Err(Error::DivergentProduct {
            reason: "base point has valuation 0",
        });
    }
    if step == 0 {
        return Err(Error::DivergentProduct {
            reason: "step must be positive",
        });
    }
    let factors = if a.exponent > order {
        0
    } else {
        (order - a.exponent) / step + 1
    };
    Ok(poch_finite(a, step, factors, order))
}

/// Gaussian binomial `[n, m]` in the base `q^t`, as an exact polynomial;
/// zero unless `0 <= m <= n`.
pub fn qbinom(n: i64, m: i64, step: usize) -> QSeries {
    if m < 0 || m > n {
        return QSeries::zero(0);
    }
    let (n, m) = (n as usize, m as usize);
    let m = m.min(n - m);
    let degree = m * (n - m);
    // prod_{k=1..m} (1 - q^{n-m+k}) / (1 - q^k), each division exact
    let mut numer = QSeries::one(0);
    for k in 1..=m {
        let grown = numer.order() + n - m + k;
        numer = numer
            .with_order(grown)
            .poly_with_binomial(Sign::Plus, n - m + k);
    }
    let mut quotient = numer;
    for k in 1..=m {
        quotient = quotient
            .poly_div_binomial(Sign::Plus, k)
            .expect("Gaussian binomial numerator divides exactly");
    }
    let base_q = quotient.with_order(degree);
    if step == 1 {
        return base_q;
    }
    let mut out = QSeries::zero(degree * step);
    for (e, c) in base_q.terms() {
        out.coeffs[e * step] += c;
    }
    out
}

impl QSeries {
    // multiply by (1 - sign q^e) in place, assuming the order already fits the product
    fn poly_with_binomial(mut self, sign: Sign, e: usize) -> Self {
        self.mul_binomial_assign(sign, e);
        self
    }
}

impl Add for &QSeries {
    type Output = QSeries;

    fn add(self, rhs: &QSeries) -> QSeries {
        qs_add(self, rhs)
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, rhs: &QSeries) -> QSeries {
        qs_sub(self, rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;

    fn mul(self, rhs: &QSeries) -> QSeries {
        qs_mul(self, rhs)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
