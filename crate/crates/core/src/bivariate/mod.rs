//! Truncated series in two indeterminates `(z, q)`.
//!
//! A [`ZQSeries`] is stored row-wise: row `m` is the coefficient of `z^m`,
//! itself a [`QSeries`] truncated at the shared `q_order`. Truncation is
//! rectangular: rows above `z_order` are dropped.
//!
//! The dropped rows still matter when `z` is later specialized to `±q^k`.
//! Each series carries a [`TailBound`] describing them, which
//! [`ZQSeries::specialize`] uses to decide whether the kept rows determine
//! the result up to `q_order`.

pub mod builders;

use num_bigint::BigInt;
use num_traits::One;
use rayon::prelude::*;

use crate::series::{Coefficient, Mismatch, Monomial, QSeries, Sign};
use crate::{Error, Result};

/// What is known about the rows above `z_order`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TailBound {
    /// There are none: the series is a polynomial in `z` of degree `<= z_order`.
    Polynomial,
    /// Row `m` (for every `m > z_order`) has q-valuation at least `slope * m`.
    Slope(usize),
}

impl TailBound {
    fn slope(self) -> Option<usize> {
        match self {
            TailBound::Polynomial => None,
            TailBound::Slope(s) => Some(s),
        }
    }

    fn from_slope(s: Option<usize>) -> Self {
        s.map_or(TailBound::Polynomial, TailBound::Slope)
    }
}

fn min_opt(a: Option<usize>, b: Option<usize>) -> Option<usize> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

/// One factor `1 - sign * z^[with_z] * q^exp` of a q-Pochhammer product.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factor {
    pub sign: Sign,
    pub with_z: bool,
    pub exp: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZQSeries {
    rows: Vec<QSeries>,
    q_order: usize,
    tail: TailBound,
}

impl ZQSeries {
    pub fn zero(z_order: usize, q_order: usize) -> Self {
        ZQSeries {
            rows: vec![QSeries::zero(q_order); z_order + 1],
            q_order,
            tail: TailBound::Polynomial,
        }
    }

    pub fn one(z_order: usize, q_order: usize) -> Self {
        Self::monomial(BigInt::one(), 0, 0, z_order, q_order)
    }

    /// `c z^m q^e`; zero when outside the truncation.
    pub fn monomial(c: Coefficient, m: usize, e: usize, z_order: usize, q_order: usize) -> Self {
        let mut s = Self::zero(z_order, q_order);
        if m <= z_order && e <= q_order {
            s.rows[m].set_coeff(e, c);
        }
        s
    }

    /// Polynomial in `z` with the given rows; `q_order` is the smallest row order.
    pub fn from_rows(rows: Vec<QSeries>) -> Self {
        if rows.is_empty() {
            return Self::zero(0, 0);
        }
        let q_order = rows.iter().map(QSeries::order).min().unwrap_or(0);
        ZQSeries {
            rows: rows.into_iter().map(|r| r.truncate(q_order)).collect(),
            q_order,
            tail: TailBound::Polynomial,
        }
    }

    pub fn z_order(&self) -> usize {
        self.rows.len() - 1
    }

    pub fn q_order(&self) -> usize {
        self.q_order
    }

    pub fn rows(&self) -> &[QSeries] {
        &self.rows
    }

    pub fn row(&self, m: usize) -> Option<&QSeries> {
        self.rows.get(m)
    }

    pub fn tail(&self) -> TailBound {
        self.tail
    }

    /// Replace the tail description. Builders use this to declare the row
    /// valuation bound of the full (untruncated) series.
    pub fn with_tail(mut self, tail: TailBound) -> Self {
        self.tail = tail;
        self
    }

    /// Exact coefficient of `z^m q^e`.
    pub fn coeff(&self, m: usize, e: usize) -> Result<&Coefficient> {
        self.rows
            .get(m)
            .and_then(|r| r.coeff(e))
            .ok_or(Error::IndexOutOfRange {
                z_degree: m,
                q_exponent: e,
            })
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(QSeries::is_zero)
    }

    /// Highest `z`-degree with a nonzero row.
    pub fn z_degree(&self) -> Option<usize> {
        self.rows.iter().rposition(|r| !r.is_zero())
    }

    // A zero row counts as valuation q_order + 1: nothing it could hold is visible.
    fn effective_valuation(&self, m: usize) -> usize {
        self.rows[m].valuation().unwrap_or(self.q_order + 1)
    }

    /// Largest `s` with row `m` of valuation `>= s*m` for the kept rows `1..=z_order`.
    fn observed_slope(&self, rows: std::ops::RangeInclusive<usize>) -> Option<usize> {
        rows.filter(|&m| m >= 1)
            .map(|m| self.effective_valuation(m) / m)
            .min()
    }

    /// A slope valid for every row of the untruncated series (kept and dropped).
    pub fn slope_bound(&self) -> usize {
        min_opt(self.tail.slope(), self.observed_slope(1..=self.z_order()))
            .unwrap_or(self.q_order + 1)
    }

    /// Whether the kept rows satisfy `valuation(row m) >= slope * m`.
    pub fn rows_satisfy_slope(&self, slope: usize) -> bool {
        (1..=self.z_order()).all(|m| self.effective_valuation(m) >= slope * m)
    }

    /// Drop rows above `z_order` and coefficients above `q_order`.
    pub fn truncate(&self, z_order: usize, q_order: usize) -> Self {
        let z_order = z_order.min(self.z_order());
        let q_order = q_order.min(self.q_order);
        let mut dropped = self.tail.slope();
        let nonzero_dropped = (z_order + 1..=self.z_order()).any(|m| !self.rows[m].is_zero());
        if nonzero_dropped {
            dropped = min_opt(dropped, self.observed_slope(z_order + 1..=self.z_order()));
        }
        ZQSeries {
            rows: self.rows[..=z_order]
                .iter()
                .map(|r| r.truncate(q_order))
                .collect(),
            q_order,
            tail: TailBound::from_slope(dropped),
        }
    }

    fn aligned(a: &Self, b: &Self) -> (Self, Self) {
        let z = a.z_order().min(b.z_order());
        let q = a.q_order.min(b.q_order);
        (a.truncate(z, q), b.truncate(z, q))
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = Self::aligned(self, other);
        ZQSeries {
            rows: a.rows.iter().zip(&b.rows).map(|(x, y)| x + y).collect(),
            q_order: a.q_order,
            tail: TailBound::from_slope(min_opt(a.tail.slope(), b.tail.slope())),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let (a, b) = Self::aligned(self, other);
        ZQSeries {
            rows: a.rows.iter().zip(&b.rows).map(|(x, y)| x - y).collect(),
            q_order: a.q_order,
            tail: TailBound::from_slope(min_opt(a.tail.slope(), b.tail.slope())),
        }
    }

    /// Multiply every row by a series in `q` alone.
    pub fn scale_rows(&self, f: &QSeries) -> Self {
        let q_order = self.q_order.min(f.order());
        ZQSeries {
            rows: self.rows.iter().map(|r| &r.truncate(q_order) * f).collect(),
            q_order,
            tail: self.tail,
        }
    }

    /// Cell-by-cell comparison on the common truncation, rows first.
    pub fn first_mismatch(&self, other: &Self) -> Option<Mismatch> {
        let (a, b) = Self::aligned(self, other);
        a.rows
            .iter()
            .zip(&b.rows)
            .enumerate()
            .find_map(|(m, (x, y))| {
                x.first_mismatch(y).map(|mm| Mismatch {
                    z_degree: m,
                    ..mm
                })
            })
    }

    // a polynomial whose top row is free can absorb one more power of z
    fn degree_has_room(&self) -> bool {
        self.tail == TailBound::Polynomial && self.z_degree().map_or(true, |d| d < self.z_order())
    }

    /// In place multiplication by one Pochhammer factor.
    pub fn mul_factor(&mut self, f: Factor) {
        if !f.with_z {
            self.rows.iter_mut().for_each(|r| r.mul_binomial_assign(f.sign, f.exp));
            return;
        }
        let z_order = self.z_order();
        if !self.degree_has_room() {
            self.tail = TailBound::Slope(self.slope_bound().min(f.exp));
        }
        // out_m = in_m - sign q^e in_{m-1}, descending so in_{m-1} is still untouched
        for m in (1..=z_order).rev() {
            let (lo, hi) = self.rows.split_at_mut(m);
            hi[0].add_shifted(&lo[m - 1], f.exp, f.sign.flip());
        }
    }

    /// In place division by one Pochhammer factor.
    pub fn div_factor(&mut self, f: Factor) -> Result<()> {
        if !f.with_z {
            for r in &mut self.rows {
                r.div_binomial_assign(f.sign, f.exp)?;
            }
            return Ok(());
        }
        self.tail = TailBound::Slope(self.slope_bound().min(f.exp));
        // out_m = in_m + sign q^e out_{m-1}, ascending
        for m in 1..=self.z_order() {
            let (lo, hi) = self.rows.split_at_mut(m);
            hi[0].add_shifted(&lo[m - 1], f.exp, f.sign);
        }
        Ok(())
    }

    /// `prod_{k<count} (1 - a z^[with_z] q^{k step})`; `count = None` runs the
    /// infinite product until the factors pass `q_order`.
    pub fn mul_poch(&mut self, a: Monomial, with_z: bool, step: usize, count: Option<usize>) {
        for exp in poch_exponents(a, step, count, self.q_order) {
            self.mul_factor(Factor {
                sign: a.sign,
                with_z,
                exp,
            });
        }
    }

    pub fn div_poch(
        &mut self,
        a: Monomial,
        with_z: bool,
        step: usize,
        count: Option<usize>,
    ) -> Result<()> {
        for exp in poch_exponents(a, step, count, self.q_order) {
            self.div_factor(Factor {
                sign: a.sign,
                with_z,
                exp,
            })?;
        }
        Ok(())
    }

    /// In place multiplication by `z - q^e`.
    pub fn mul_z_minus_q(&mut self, e: usize) {
        if !self.degree_has_room() {
            self.tail = TailBound::Slope(0);
        }
        for m in (0..=self.z_order()).rev() {
            let mut next = -&self.rows[m].shift(e);
            if m >= 1 {
                next = &next + &self.rows[m - 1];
            }
            self.rows[m] = next;
        }
    }

    /// `self += sign * z^a q^b * other`, within `self`'s truncation.
    pub fn add_shifted(&mut self, other: &Self, z_shift: usize, q_shift: usize, sign: Sign) {
        let z_order = self.z_order();
        for (m, row) in other.rows.iter().enumerate() {
            if m + z_shift > z_order {
                break;
            }
            self.rows[m + z_shift].add_shifted(row, q_shift, sign);
        }
    }

    /// Add `delta` to the cell `z^m q^e` if it is inside the truncation.
    pub fn perturb(&mut self, m: usize, e: usize, delta: &Coefficient) {
        if let Some(r) = self.rows.get_mut(m) {
            r.add_to_coeff(e, delta);
        }
    }

    /// Substitute `z = ±q^k`, truncated at `q_order`.
    pub fn specialize(&self, c: Monomial) -> Result<QSeries> {
        zq_specialize(self, c)
    }
}

fn poch_exponents(
    a: Monomial,
    step: usize,
    count: Option<usize>,
    q_order: usize,
) -> impl Iterator<Item = usize> {
    let n = match count {
        Some(n) => n,
        None if step == 0 || a.exponent > q_order => 0,
        None => (q_order - a.exponent) / step + 1,
    };
    (0..n)
        .map(move |k| a.exponent + k * step)
        .take_while(move |&e| e <= q_order || step == 0)
        .filter(move |&e| e <= q_order)
}

/// Convolution in `z`, each cell an exact truncated product in `q`.
pub fn zq_mul(a: &ZQSeries, b: &ZQSeries) -> ZQSeries {
    let (a, b) = ZQSeries::aligned(a, b);
    let z_order = a.z_order();
    let rows: Vec<QSeries> = (0..=z_order)
        .into_par_iter()
        .map(|m| {
            let mut acc = QSeries::zero(a.q_order);
            for i in 0..=m {
                let (x, y) = (&a.rows[i], &b.rows[m - i]);
                if x.is_zero() || y.is_zero() {
                    continue;
                }
                acc = &acc + &(x * y);
            }
            acc
        })
        .collect();
    let fits = matches!((a.tail, b.tail), (TailBound::Polynomial, TailBound::Polynomial))
        && a.z_degree().unwrap_or(0) + b.z_degree().unwrap_or(0) <= z_order;
    let tail = if fits {
        TailBound::Polynomial
    } else {
        TailBound::Slope(a.slope_bound().min(b.slope_bound()))
    };
    ZQSeries {
        rows,
        q_order: a.q_order,
        tail,
    }
}

/// Inverse by back-substitution in `z`; the `z^0` row needs constant term `±1`.
pub fn zq_invert(a: &ZQSeries) -> Result<ZQSeries> {
    let inv0 = a.rows[0].invert()?;
    let z_order = a.z_order();
    let mut rows = vec![inv0.clone()];
    for m in 1..=z_order {
        let mut acc = QSeries::zero(a.q_order);
        for i in 1..=m {
            if a.rows[i].is_zero() {
                continue;
            }
            acc = &acc + &(&a.rows[i] * &rows[m - i]);
        }
        rows.push(-&(&acc * &inv0));
    }
    let constant_in_z = a.tail == TailBound::Polynomial && a.z_degree().map_or(true, |d| d == 0);
    let tail = if constant_in_z {
        TailBound::Polynomial
    } else {
        TailBound::Slope(a.slope_bound())
    };
    Ok(ZQSeries {
        rows,
        q_order: a.q_order,
        tail,
    })
}

/// `sum_m c^m row_m` for `c = ±q^k`. Fails when rows above `z_order` could
/// still reach `q_order`.
pub fn zq_specialize(a: &ZQSeries, c: Monomial) -> Result<QSeries> {
    let (z_order, q_order) = (a.z_order(), a.q_order);
    if let TailBound::Slope(s) = a.tail {
        // first dropped row z_order+1 starts at q^{(z_order+1)(s+k)}
        if (z_order + 1) * (s + c.exponent) <= q_order {
            return Err(Error::InsufficientZOrder {
                z_order,
                q_order,
                slope: s,
            });
        }
    }
    let mut out = QSeries::zero(q_order);
    for (m, row) in a.rows.iter().enumerate() {
        let shift = m * c.exponent;
        if shift > q_order {
            break;
        }
        let sign = if c.sign == Sign::Minus && m % 2 == 1 {
            Sign::Minus
        } else {
            Sign::Plus
        };
        out.add_shifted(row, shift, sign);
    }
    Ok(out)
}

pub fn zq_coeff(a: &ZQSeries, m: usize, e: usize) -> Result<Coefficient> {
    a.coeff(m, e).cloned()
}

impl std::fmt::Display for ZQSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for (m, r) in self.rows.iter().enumerate() {
            if r.is_zero() {
                continue;
            }
            writeln!(f, "z^{m}: {r}")?;
        }
        Ok(())
    }
}
