//! The finite sums `S_n(i) = sum_{j=0}^{n} q^{ij} (q;q)_{n+j} / (q^2;q^2)_j`
//! as exact polynomials, the identities they satisfy, and the per-`N` chain of
//! identities that reduces the two-variable theorems to them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::series::{poch_finite, Mismatch, Monomial, QSeries, Sign};
use crate::{Error, Result};

/// `S_n(i)` as an exact polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnPolynomial {
    pub n: usize,
    pub i: usize,
    pub poly: QSeries,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail(Mismatch),
}

impl Verdict {
    pub fn is_pass(&self) -> bool {
        matches!(self, Verdict::Pass)
    }

    pub fn mismatch(&self) -> Option<&Mismatch> {
        match self {
            Verdict::Pass => None,
            Verdict::Fail(m) => Some(m),
        }
    }

    fn from_mismatch(m: Option<Mismatch>) -> Self {
        m.map_or(Verdict::Pass, Verdict::Fail)
    }
}

/// Identities in the reduction of the two-variable theorems to `S_n(1)` and `S_n(2)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Chain {
    /// `sum_{s<=N} q^{2s}/(q^2;q^2)_s = 1/(q^2;q^2)_N`
    Geom,
    Eq111,
    Eq12,
    Eq13,
    Eq16,
    Eq17,
    Eq18,
}

impl Chain {
    pub const ALL: [Chain; 7] = [
        Chain::Geom,
        Chain::Eq111,
        Chain::Eq12,
        Chain::Eq13,
        Chain::Eq16,
        Chain::Eq17,
        Chain::Eq18,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Chain::Geom => "geom",
            Chain::Eq111 => "eq111",
            Chain::Eq12 => "eq12",
            Chain::Eq13 => "eq13",
            Chain::Eq16 => "eq16",
            Chain::Eq17 => "eq17",
            Chain::Eq18 => "eq18",
        }
    }

    /// Whether both sides are exact polynomials (otherwise truncated series).
    pub fn is_polynomial(self) -> bool {
        matches!(self, Chain::Eq13 | Chain::Eq17 | Chain::Eq18)
    }
}

impl std::str::FromStr for Chain {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Chain::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown chain identity `{s}`")))
    }
}

impl std::fmt::Display for Chain {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Truncation order for the series members of the chain.
pub fn chain_series_order(n: usize) -> usize {
    4 * n + 4
}

// exact polynomial (a; q^step)_count
fn poly_poch(a: Monomial, step: usize, count: usize) -> QSeries {
    let degree: usize = (0..count).map(|k| a.exponent + k * step).sum();
    poch_finite(a, step, count, degree)
}

fn trimmed(p: QSeries) -> QSeries {
    let d = p.degree().unwrap_or(0);
    p.with_order(d)
}

fn poly_sum(terms: impl IntoIterator<Item = QSeries>) -> QSeries {
    terms
        .into_iter()
        .fold(QSeries::zero(0), |acc, t| acc.poly_add(&t))
}

/// `(q;q)_{n+j} / (q^2;q^2)_j` for `j = 0..=n`, each an exact polynomial.
fn ratio_terms(n: usize) -> Vec<QSeries> {
    let mut out = Vec::with_capacity(n + 1);
    let mut t = poly_poch(Monomial::pos(1), 1, n);
    out.push(t.clone());
    for j in 1..=n {
        let grown = t.order() + n + j;
        t = t.with_order(grown);
        t.mul_binomial_assign(Sign::Plus, n + j);
        t = trimmed(
            t.poly_div_binomial(Sign::Plus, 2 * j)
                .expect("(q;q)_{n+j} is divisible by (q^2;q^2)_j for j <= n"),
        );
        out.push(t.clone());
    }
    out
}

/// `S_n(i)`.
pub fn s_poly(n: usize, i: usize) -> SnPolynomial {
    let poly = trimmed(poly_sum(
        ratio_terms(n)
            .into_iter()
            .enumerate()
            .map(|(j, t)| t.poly_shift(i * j)),
    ));
    SnPolynomial { n, i, poly }
}

fn compare(lhs: &QSeries, rhs: &QSeries) -> Verdict {
    Verdict::from_mismatch(lhs.poly_first_mismatch(rhs))
}

/// `S_n(i) = S_{n-1}(i) - q^n S_{n-1}(i+1) + q^{in} (q;q^2)_n`, for `n >= 1`.
pub fn check_lemma2(n: usize, i: usize) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::InvalidArgument("lemma needs n >= 1".into()));
    }
    let lhs = s_poly(n, i).poly;
    let rhs = s_poly(n - 1, i)
        .poly
        .poly_sub(&s_poly(n - 1, i + 1).poly.poly_shift(n))
        .poly_add(&poly_poch(Monomial::pos(1), 2, n).poly_shift(i * n));
    Ok(compare(&lhs, &rhs))
}

/// `S_n(i+2) = S_n(i) - q^i S_{n+1}(i) + q^{i(n+1)} (1+q^i) (q;q^2)_{n+1}`.
pub fn check_lemma3(n: usize, i: usize) -> Verdict {
    let lhs = s_poly(n, i + 2).poly;
    let one_plus = QSeries::one(0).poly_add(&QSeries::one(0).poly_shift(i));
    let rhs = s_poly(n, i)
        .poly
        .poly_sub(&s_poly(n + 1, i).poly.poly_shift(i))
        .poly_add(
            &one_plus
                .poly_mul(&poly_poch(Monomial::pos(1), 2, n + 1))
                .poly_shift(i * (n + 1)),
        );
    compare(&lhs, &rhs)
}

/// Both sides of `S_n(1) = (q^2;q^2)_n`.
pub fn lemma4_sides(n: usize) -> (QSeries, QSeries) {
    (s_poly(n, 1).poly, poly_poch(Monomial::pos(2), 2, n))
}

/// Both sides of `S_n(2) = (q;q^2)_{n+1} + q^{n+1} (q^2;q^2)_n`.
pub fn lemma5_sides(n: usize) -> (QSeries, QSeries) {
    let rhs = poly_poch(Monomial::pos(1), 2, n + 1)
        .poly_add(&poly_poch(Monomial::pos(2), 2, n).poly_shift(n + 1));
    (s_poly(n, 2).poly, rhs)
}

pub fn check_lemma4(n: usize) -> Verdict {
    let (l, r) = lemma4_sides(n);
    compare(&l, &r)
}

pub fn check_lemma5(n: usize) -> Verdict {
    let (l, r) = lemma5_sides(n);
    compare(&l, &r)
}

/// `S_n(1) = (1 + q - q^{2n}) S_{n-1}(1) - q (1 - q^{2n-2}) S_{n-2}(1)`, for `n >= 2`.
pub fn check_recurrence(n: usize) -> Result<Verdict> {
    if n < 2 {
        return Err(Error::InvalidArgument("recurrence needs n >= 2".into()));
    }
    let one = QSeries::one(0);
    let a = one
        .poly_add(&one.poly_shift(1))
        .poly_sub(&one.poly_shift(2 * n));
    let b = one.poly_sub(&one.poly_shift(2 * n - 2)).poly_shift(1);
    let rhs = a
        .poly_mul(&s_poly(n - 1, 1).poly)
        .poly_sub(&b.poly_mul(&s_poly(n - 2, 1).poly));
    Ok(compare(&s_poly(n, 1).poly, &rhs))
}

/// `q^n S_{n-1}(2) = -S_n(1) + S_{n-1}(1) + q^n (q;q^2)_n` with both `S(1)`
/// values replaced by their closed form, for `n >= 1`.
pub fn check_eq4(n: usize) -> Result<Verdict> {
    if n == 0 {
        return Err(Error::InvalidArgument("needs n >= 1".into()));
    }
    let closed = |k| poly_poch(Monomial::pos(2), 2, k);
    let rhs = closed(n - 1)
        .poly_sub(&closed(n))
        .poly_add(&poly_poch(Monomial::pos(1), 2, n).poly_shift(n));
    let lhs = s_poly(n - 1, 2).poly.poly_shift(n);
    Ok(compare(&lhs, &rhs))
}

/// `q^d p(1/q)`: coefficient `e` of the result is coefficient `d - e` of `p`.
pub fn reverse_poly(p: &QSeries, d: usize) -> Result<QSeries> {
    if let Some(degree) = p.degree() {
        if degree > d {
            return Err(Error::DegreeExceeds { degree, bound: d });
        }
    }
    let mut out = QSeries::zero(d);
    for (e, c) in p.terms() {
        out.set_coeff(d - e, c.clone());
    }
    Ok(out)
}

fn binom2(k: usize) -> usize {
    k * (k + 1) / 2
}

fn inverse(p: QSeries, order: usize) -> QSeries {
    p.with_order(order)
        .invert()
        .expect("Pochhammer products have constant term 1")
}

// 1 / (a; q^step)_count as a series to `order`
fn inv_poch(a: Monomial, step: usize, count: usize, order: usize) -> QSeries {
    inverse(poch_finite(a, step, count, order), order)
}

fn eq17_terms(n: usize) -> Vec<QSeries> {
    ratio_terms(n)
        .into_iter()
        .enumerate()
        .map(|(s, t)| t.poly_shift(binom2(n - s)))
        .collect()
}

fn eq18_terms(n: usize) -> Vec<QSeries> {
    ratio_terms(n)
        .into_iter()
        .enumerate()
        .map(|(s, t)| t.poly_shift(s))
        .collect()
}

/// The two sides of one member of the chain at parameter `n`. Polynomial
/// members come back exact; series members are truncated at
/// [`chain_series_order`].
pub fn chain_sides(n: usize, which: Chain) -> (QSeries, QSeries) {
    let order = chain_series_order(n);
    let sum_over_s = |f: &dyn Fn(usize) -> QSeries| {
        (0..=n).fold(QSeries::zero(order), |acc, s| &acc + &f(s))
    };
    match which {
        Chain::Geom => {
            let lhs = sum_over_s(&|s| inv_poch(Monomial::pos(2), 2, s, order).shift(2 * s));
            (lhs, inv_poch(Monomial::pos(2), 2, n, order))
        }
        Chain::Eq111 => {
            let lhs = sum_over_s(&|s| {
                let bracket =
                    &inv_poch(Monomial::pos(1 + n + s), 1, n - s + 1, order) - &QSeries::one(order);
                (&inv_poch(Monomial::pos(2), 2, s, order) * &bracket).shift(2 * s)
            });
            let rhs = inv_poch(Monomial::pos(1), 2, n + 1, order).shift(n + 1);
            (lhs, rhs)
        }
        Chain::Eq12 => {
            let lhs = sum_over_s(&|s| {
                (&inv_poch(Monomial::pos(2), 2, s, order)
                    * &inv_poch(Monomial::pos(1 + n + s), 1, n - s + 1, order))
                    .shift(2 * s)
            });
            let rhs = &inv_poch(Monomial::pos(2), 2, n, order)
                + &inv_poch(Monomial::pos(1), 2, n + 1, order).shift(n + 1);
            (lhs, rhs)
        }
        Chain::Eq13 => lemma5_sides(n),
        Chain::Eq16 => {
            let lhs = sum_over_s(&|s| {
                (&inv_poch(Monomial::pos(2), 2, s, order)
                    * &inv_poch(Monomial::pos(n + s + 1), 1, n - s + 1, order))
                    .shift(binom2(n - s))
            });
            (lhs, inv_poch(Monomial::pos(1), 2, n + 1, order))
        }
        Chain::Eq17 => (
            trimmed(poly_sum(eq17_terms(n))),
            poly_poch(Monomial::pos(2), 2, n),
        ),
        Chain::Eq18 => (
            trimmed(poly_sum(eq18_terms(n))),
            poly_poch(Monomial::pos(2), 2, n),
        ),
    }
}

/// Checks that reversing each summand and the right side of the `N²+N`-scaled
/// form with `q -> 1/q` gives the other form, up to the sign `(-1)^N`.
pub fn check_reversal(n: usize) -> Verdict {
    let d = n * n + n;
    let sign = QSeries::from_i64s(&[Sign::from_parity(n).to_i64()], 0);
    let (_, rhs17) = chain_sides(n, Chain::Eq17);
    let (_, rhs18) = chain_sides(n, Chain::Eq18);
    let pairs = eq17_terms(n)
        .into_iter()
        .zip(eq18_terms(n))
        .chain(std::iter::once((rhs17, rhs18)));
    for (from17, from18) in pairs {
        let reversed = reverse_poly(&from17, d).expect("every summand has degree at most N^2+N");
        if let Some(m) = reversed.poly_first_mismatch(&sign.poly_mul(&from18)) {
            return Verdict::Fail(m);
        }
    }
    Verdict::Pass
}

pub fn check_chain(n: usize, which: Chain) -> Verdict {
    let (lhs, rhs) = chain_sides(n, which);
    let verdict = if which.is_polynomial() {
        compare(&lhs, &rhs)
    } else {
        Verdict::from_mismatch(lhs.first_mismatch(&rhs))
    };
    match (which, verdict) {
        (Chain::Eq18, Verdict::Pass) => check_reversal(n),
        (_, v) => v,
    }
}

/// First failing `N` in `0..=n_max`, if any.
pub fn check_chain_upto(which: Chain, n_max: usize) -> Option<(usize, Mismatch)> {
    (0..=n_max)
        .into_par_iter()
        .filter_map(|n| match check_chain(n, which) {
            Verdict::Pass => None,
            Verdict::Fail(m) => Some((n, m)),
        })
        .min_by_key(|(n, _)| *n)
}

/// One row of a lemma batch: which identity, at which `(n, i)`, and the verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaOutcome {
    pub lemma: &'static str,
    pub n: usize,
    pub i: usize,
    pub verdict: Verdict,
}

/// Every lemma and recurrence check with `n <= n_max` and `i <= i_max`, in parallel.
pub fn lemma_batch(n_max: usize, i_max: usize) -> Vec<LemmaOutcome> {
    let mut jobs: Vec<(&'static str, usize, usize)> = Vec::new();
    for n in 0..=n_max {
        jobs.push(("s_n(1)", n, 1));
        jobs.push(("s_n(2)", n, 2));
        if n >= 2 {
            jobs.push(("recurrence", n, 1));
        }
        for i in 0..=i_max {
            if n >= 1 {
                jobs.push(("shift-in-n", n, i));
            }
            jobs.push(("shift-in-i", n, i));
        }
    }
    let mut out: Vec<LemmaOutcome> = jobs
        .into_par_iter()
        .map(|(lemma, n, i)| {
            let verdict = match lemma {
                "s_n(1)" => check_lemma4(n),
                "s_n(2)" => check_lemma5(n),
                "recurrence" => check_recurrence(n).expect("n >= 2"),
                "shift-in-n" => check_lemma2(n, i).expect("n >= 1"),
                _ => check_lemma3(n, i),
            };
            LemmaOutcome { lemma, n, i, verdict }
        })
        .collect();
    out.sort_by_key(|o| (o.lemma, o.n, o.i));
    out
}
