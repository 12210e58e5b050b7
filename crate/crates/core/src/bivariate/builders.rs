//! Named series builders: both sides of every identity, as truncated series.
//!
//! Each builder sums its outer index `n` until the minimum q-valuation of the
//! `n`-th term passes `q_order`, so the result is exact at the declared
//! truncation. Every two-variable builder also declares that row `m` of the
//! full series has q-valuation at least `m` (each power of `z` brings at
//! least one `q`), which is what lets `z = ±1` be specialized from
//! `z_order >= q_order`.
//!
//! Terms are built on a local grid sized to what the term can reach, then
//! shifted into place. For example the term `q^n / (zq^n; q)_{n+1}` only
//! reaches rows `m <= (q_order - n) / n`.

use crate::bivariate::{TailBound, ZQSeries};
use crate::series::{Monomial, QSeries, Sign};

/// Truncation orders plus fault-injection knobs for one builder call.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BuildParams {
    pub z_order: usize,
    pub q_order: usize,
    /// Omit this outer-sum term.
    pub skip_term: Option<usize>,
    /// Keep summing this many terms past the valuation cutoff.
    pub extra_terms: usize,
}

impl BuildParams {
    pub fn new(z_order: usize, q_order: usize) -> Self {
        BuildParams {
            z_order,
            q_order,
            ..Default::default()
        }
    }

    /// Same orders, summing `extra` terms past the cutoff.
    pub fn with_extra_terms(mut self, extra: usize) -> Self {
        self.extra_terms = extra;
        self
    }

    pub fn skipping(mut self, n: usize) -> Self {
        self.skip_term = Some(n);
        self
    }

    /// Outer indices `start, start+1, ...` whose term can reach `q_order`.
    /// `valuation` must be nondecreasing in `n`.
    pub fn indices(&self, start: usize, valuation: impl Fn(usize) -> usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut extra = self.extra_terms;
        let mut n = start;
        loop {
            if valuation(n) > self.q_order {
                if extra == 0 {
                    break;
                }
                extra -= 1;
            }
            if self.skip_term != Some(n) {
                out.push(n);
            }
            n += 1;
        }
        out
    }
}

/// Placement of one outer-sum term: `sign * z^z_shift * q^q_shift * body`.
struct Term {
    sign: Sign,
    z_shift: usize,
    q_shift: usize,
    /// every power of z in the body carries at least this many q's
    q_per_z: usize,
    /// the body is a polynomial in z of at most this degree
    z_cap: Option<usize>,
}

impl Term {
    fn at(z_shift: usize, q_shift: usize) -> Self {
        Term {
            sign: Sign::Plus,
            z_shift,
            q_shift,
            q_per_z: 1,
            z_cap: None,
        }
    }

    fn signed(mut self, sign: Sign) -> Self {
        self.sign = sign;
        self
    }

    fn q_per_z(mut self, k: usize) -> Self {
        self.q_per_z = k;
        self
    }

    fn z_cap(mut self, cap: usize) -> Self {
        self.z_cap = Some(cap);
        self
    }
}

struct Sum {
    acc: ZQSeries,
}

impl Sum {
    fn new(p: &BuildParams) -> Self {
        Sum {
            acc: ZQSeries::zero(p.z_order, p.q_order),
        }
    }

    fn add(&mut self, t: Term, body: impl FnOnce(&mut ZQSeries)) {
        let (z_order, q_order) = (self.acc.z_order(), self.acc.q_order());
        if t.z_shift > z_order || t.q_shift > q_order {
            return;
        }
        let local_q = q_order - t.q_shift;
        let mut local_z = z_order - t.z_shift;
        if t.q_per_z > 0 {
            local_z = local_z.min(local_q / t.q_per_z);
        }
        if let Some(cap) = t.z_cap {
            local_z = local_z.min(cap);
        }
        let mut local = ZQSeries::one(local_z, local_q);
        body(&mut local);
        self.acc.add_shifted(&local, t.z_shift, t.q_shift, t.sign);
    }

    fn finish(self) -> ZQSeries {
        debug_assert!(self.acc.rows_satisfy_slope(1));
        self.acc.with_tail(TailBound::Slope(1))
    }
}

// every z-factor below has a positive exponent, so division cannot fail
fn div(s: &mut ZQSeries, a: Monomial, with_z: bool, step: usize, count: Option<usize>) {
    s.div_poch(a, with_z, step, count)
        .expect("Pochhammer factors with positive exponent are invertible");
}

/// `omega(z;q) = sum z^n q^{2n^2+2n} / ((q;q^2)_{n+1} (zq;q^2)_{n+1})`
pub fn omega_z_eulerian(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| 2 * n * n + 2 * n) {
        sum.add(Term::at(n, 2 * n * n + 2 * n), |s| {
            div(s, Monomial::pos(1), false, 2, Some(n + 1));
            div(s, Monomial::pos(1), true, 2, Some(n + 1));
        });
    }
    sum.finish()
}

/// `omega(z;q) = sum z^n q^n / (q;q^2)_{n+1}`
pub fn omega_z_simple(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| n) {
        sum.add(Term::at(n, n), |s| div(s, Monomial::pos(1), false, 2, Some(n + 1)));
    }
    sum.finish()
}

/// `omega(z;q) = sum q^n / (zq;q^2)_{n+1}`
pub fn omega_z_slashed(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| n) {
        sum.add(Term::at(0, n), |s| div(s, Monomial::pos(1), true, 2, Some(n + 1)));
    }
    sum.finish()
}

/// `nu(z;q) = sum q^{n^2+n} / (-zq;q^2)_{n+1}`
pub fn nu_z_eulerian(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| n * n + n) {
        sum.add(Term::at(0, n * n + n), |s| {
            div(s, Monomial::neg(1), true, 2, Some(n + 1))
        });
    }
    sum.finish()
}

/// `nu(z;q) = sum (q/z;q^2)_n (-zq)^n`, each term expanded as
/// `(-q)^n prod_{k<n} (z - q^{2k+1})` so no negative powers of z appear.
pub fn nu_z_product(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| n) {
        let t = Term::at(0, n)
            .signed(Sign::from_parity(n))
            .q_per_z(0)
            .z_cap(n);
        sum.add(t, |s| {
            for k in 0..n {
                s.mul_z_minus_q(2 * k + 1);
            }
        });
    }
    sum.finish()
}

/// `nu_1(z;q) = sum z^n q^{n^2+n} / (-q;q^2)_{n+1}`
pub fn nu1_z_eulerian(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| n * n + n) {
        sum.add(Term::at(n, n * n + n), |s| {
            div(s, Monomial::neg(1), false, 2, Some(n + 1))
        });
    }
    sum.finish()
}

/// `nu_1(z;q) = sum (zq;q^2)_n (-q)^n`
pub fn nu1_z_product(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| n) {
        let t = Term::at(0, n).signed(Sign::from_parity(n)).z_cap(n);
        sum.add(t, |s| s.mul_poch(Monomial::pos(1), true, 2, Some(n)));
    }
    sum.finish()
}

/// `sum_{n>=1} q^n / ((zq^n;q)_{n+1} (zq^{2n+2};q^2)_inf)`
pub fn thm1_omega_lhs(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(1, |n| n) {
        sum.add(Term::at(0, n).q_per_z(n), |s| {
            div(s, Monomial::pos(n), true, 1, Some(n + 1));
            div(s, Monomial::pos(2 * n + 2), true, 2, None);
        });
    }
    sum.finish()
}

/// `sum z^n q^{2n^2+2n+1} / ((q;q^2)_{n+1} (zq;q^2)_{n+1})`
pub fn thm1_omega_rhs(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| 2 * n * n + 2 * n + 1) {
        sum.add(Term::at(n, 2 * n * n + 2 * n + 1), |s| {
            div(s, Monomial::pos(1), false, 2, Some(n + 1));
            div(s, Monomial::pos(1), true, 2, Some(n + 1));
        });
    }
    sum.finish()
}

/// `sum q^n (-zq^{n+1};q)_n (-zq^{2n+2};q^2)_inf`
pub fn thm1_nu_lhs(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| n) {
        sum.add(Term::at(0, n).q_per_z(n + 1), |s| {
            s.mul_poch(Monomial::neg(n + 1), true, 1, Some(n));
            s.mul_poch(Monomial::neg(2 * n + 2), true, 2, None);
        });
    }
    sum.finish()
}

/// `sum z^n q^{n^2+n} / (q;q^2)_{n+1}`
pub fn thm1_nu_rhs(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(0, |n| n * n + n) {
        sum.add(Term::at(n, n * n + n), |s| {
            div(s, Monomial::pos(1), false, 2, Some(n + 1))
        });
    }
    sum.finish()
}

/// `sum_{n>=1} z^{n-1} q^n / (q;q^2)_n`
pub fn thm2omega_rhs(p: &BuildParams) -> ZQSeries {
    let mut sum = Sum::new(p);
    for n in p.indices(1, |n| n) {
        sum.add(Term::at(n - 1, n), |s| {
            div(s, Monomial::pos(1), false, 2, Some(n))
        });
    }
    sum.finish()
}

pub fn build_omega_z_eulerian(z_order: usize, q_order: usize) -> ZQSeries {
    omega_z_eulerian(&BuildParams::new(z_order, q_order))
}

pub fn build_omega_z_simple(z_order: usize, q_order: usize) -> ZQSeries {
    omega_z_simple(&BuildParams::new(z_order, q_order))
}

pub fn build_omega_z_slashed(z_order: usize, q_order: usize) -> ZQSeries {
    omega_z_slashed(&BuildParams::new(z_order, q_order))
}

pub fn build_nu_z_eulerian(z_order: usize, q_order: usize) -> ZQSeries {
    nu_z_eulerian(&BuildParams::new(z_order, q_order))
}

pub fn build_nu_z_product(z_order: usize, q_order: usize) -> ZQSeries {
    nu_z_product(&BuildParams::new(z_order, q_order))
}

pub fn build_nu1_z_eulerian(z_order: usize, q_order: usize) -> ZQSeries {
    nu1_z_eulerian(&BuildParams::new(z_order, q_order))
}

pub fn build_nu1_z_product(z_order: usize, q_order: usize) -> ZQSeries {
    nu1_z_product(&BuildParams::new(z_order, q_order))
}

pub fn build_thm1_omega_lhs(z_order: usize, q_order: usize) -> ZQSeries {
    thm1_omega_lhs(&BuildParams::new(z_order, q_order))
}

pub fn build_thm1_omega_rhs(z_order: usize, q_order: usize) -> ZQSeries {
    thm1_omega_rhs(&BuildParams::new(z_order, q_order))
}

pub fn build_thm1_nu_lhs(z_order: usize, q_order: usize) -> ZQSeries {
    thm1_nu_lhs(&BuildParams::new(z_order, q_order))
}

pub fn build_thm1_nu_rhs(z_order: usize, q_order: usize) -> ZQSeries {
    thm1_nu_rhs(&BuildParams::new(z_order, q_order))
}

// ---------------------------------------------------------------------------
// one-variable sides

struct UniSum {
    acc: QSeries,
}

impl UniSum {
    fn new(q_order: usize) -> Self {
        UniSum {
            acc: QSeries::zero(q_order),
        }
    }

    /// `acc += sign q^shift * body(1)`, with the body built at order `q_order - shift`.
    fn add(&mut self, sign: Sign, shift: usize, body: impl FnOnce(&mut QSeries)) {
        let q_order = self.acc.order();
        if shift > q_order {
            return;
        }
        let mut local = QSeries::one(q_order - shift);
        body(&mut local);
        self.acc.add_shifted(&local, shift, sign);
    }
}

fn mul_poch(s: &mut QSeries, a: Monomial, step: usize, count: Option<usize>) {
    let order = s.order();
    let n = count.unwrap_or(if a.exponent > order {
        0
    } else {
        (order - a.exponent) / step + 1
    });
    for k in 0..n {
        let e = a.exponent + k * step;
        if e > order {
            break;
        }
        s.mul_binomial_assign(a.sign, e);
    }
}

fn div_poch(s: &mut QSeries, a: Monomial, step: usize, count: Option<usize>) {
    let order = s.order();
    let n = count.unwrap_or(if a.exponent > order {
        0
    } else {
        (order - a.exponent) / step + 1
    });
    for k in 0..n {
        let e = a.exponent + k * step;
        if e > order {
            break;
        }
        s.div_binomial_assign(a.sign, e)
            .expect("Pochhammer factors with positive exponent are invertible");
    }
}

/// Watson's `omega(q) = sum q^{2n^2+2n} / (q;q^2)_{n+1}^2`
pub fn watson_omega(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(0, |n| 2 * n * n + 2 * n) {
        sum.add(Sign::Plus, 2 * n * n + 2 * n, |s| {
            div_poch(s, Monomial::pos(1), 2, Some(n + 1));
            div_poch(s, Monomial::pos(1), 2, Some(n + 1));
        });
    }
    sum.acc
}

/// Watson's `nu(q) = sum q^{n^2+n} / (-q;q^2)_{n+1}`
pub fn watson_nu(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(0, |n| n * n + n) {
        sum.add(Sign::Plus, n * n + n, |s| {
            div_poch(s, Monomial::neg(1), 2, Some(n + 1))
        });
    }
    sum.acc
}

/// `q omega(q) = sum q^{2n^2+2n+1} / (q;q^2)_{n+1}^2`
pub fn q_omega(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(0, |n| 2 * n * n + 2 * n + 1) {
        sum.add(Sign::Plus, 2 * n * n + 2 * n + 1, |s| {
            div_poch(s, Monomial::pos(1), 2, Some(n + 1));
            div_poch(s, Monomial::pos(1), 2, Some(n + 1));
        });
    }
    sum.acc
}

/// `nu(-q) = sum q^{n^2+n} / (q;q^2)_{n+1}`
pub fn nu_neg_q(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(0, |n| n * n + n) {
        sum.add(Sign::Plus, n * n + n, |s| {
            div_poch(s, Monomial::pos(1), 2, Some(n + 1))
        });
    }
    sum.acc
}

/// `sum_{n>=1} q^n / ((q^n;q)_{n+1} (q^{2n+2};q^2)_inf)`, the p_omega product form
pub fn ady_omega_lhs(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(1, |n| n) {
        sum.add(Sign::Plus, n, |s| {
            div_poch(s, Monomial::pos(n), 1, Some(n + 1));
            div_poch(s, Monomial::pos(2 * n + 2), 2, None);
        });
    }
    sum.acc
}

/// `sum q^n (-q^{n+1};q)_n (-q^{2n+2};q^2)_inf`, the p_nu product form
pub fn ady_nu_lhs(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(0, |n| n) {
        sum.add(Sign::Plus, n, |s| {
            mul_poch(s, Monomial::neg(n + 1), 1, Some(n));
            mul_poch(s, Monomial::neg(2 * n + 2), 2, None);
        });
    }
    sum.acc
}

/// `sum_{n>=1} q^n / ((-q^n;q)_{n+1} (-q^{2n+2};q^2)_inf)`
pub fn pnt_omega_lhs(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(1, |n| n) {
        sum.add(Sign::Plus, n, |s| {
            div_poch(s, Monomial::neg(n), 1, Some(n + 1));
            div_poch(s, Monomial::neg(2 * n + 2), 2, None);
        });
    }
    sum.acc
}

/// `sum q^n (q^{n+1};q)_n (q^{2n+2};q^2)_inf`
pub fn pnt_nu_lhs(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(0, |n| n) {
        sum.add(Sign::Plus, n, |s| {
            mul_poch(s, Monomial::pos(n + 1), 1, Some(n));
            mul_poch(s, Monomial::pos(2 * n + 2), 2, None);
        });
    }
    sum.acc
}

/// `sum q^n / (-q;q^2)_{n+1}`
pub fn entry953_lhs(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(0, |n| n) {
        sum.add(Sign::Plus, n, |s| {
            div_poch(s, Monomial::neg(1), 2, Some(n + 1))
        });
    }
    sum.acc
}

/// `sum (q;q^2)_n q^n`
pub fn entry952_lhs(p: &BuildParams) -> QSeries {
    let mut sum = UniSum::new(p.q_order);
    for n in p.indices(0, |n| n) {
        sum.add(Sign::Plus, n, |s| mul_poch(s, Monomial::pos(1), 2, Some(n)));
    }
    sum.acc
}

// sum_j (-1)^j (q^{a(j)} + q^{b(j)}) with a(j) <= b(j) both increasing
fn signed_pairs(p: &BuildParams, a: impl Fn(usize) -> usize, b: impl Fn(usize) -> usize) -> QSeries {
    let mut out = QSeries::zero(p.q_order);
    let unit = num_bigint::BigInt::from(1);
    for j in p.indices(0, &a) {
        let c = if j % 2 == 0 { unit.clone() } else { -unit.clone() };
        out.add_to_coeff(a(j), &c);
        out.add_to_coeff(b(j), &c);
    }
    out
}

/// `sum (-1)^j q^{6j^2+4j+1} (1 + q^{4j+2})`
pub fn pentagonal_omega(p: &BuildParams) -> QSeries {
    signed_pairs(p, |j| 6 * j * j + 4 * j + 1, |j| 6 * j * j + 8 * j + 3)
}

/// `sum (-1)^j q^{6j^2+4j} (1 + q^{4j+2})`
pub fn entry953_rhs(p: &BuildParams) -> QSeries {
    signed_pairs(p, |j| 6 * j * j + 4 * j, |j| 6 * j * j + 8 * j + 2)
}

/// `sum (-1)^j q^{3j^2+2j} (1 + q^{2j+1})`
pub fn pentagonal_nu(p: &BuildParams) -> QSeries {
    signed_pairs(p, |j| 3 * j * j + 2 * j, |j| 3 * j * j + 4 * j + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn s(v: &[i64], order: usize) -> QSeries {
        QSeries::from_i64s(v, order)
    }

    #[test]
    fn omega_simple_small_rows() {
        let w = build_omega_z_simple(2, 3);
        assert_eq!(w.row(0).unwrap(), &s(&[1, 1, 1, 1], 3));
        // z^1: q / ((1-q)(1-q^3)) = q + q^2 + q^3
        assert_eq!(w.row(1).unwrap(), &s(&[0, 1, 1, 1], 3));
        // z^2: q^2 / (q;q^2)_3 = q^2 + q^3
        assert_eq!(w.row(2).unwrap(), &s(&[0, 0, 1, 1], 3));
    }

    #[test]
    fn nu1_product_constant_row_alternates() {
        let v = build_nu1_z_product(0, 6);
        assert_eq!(v.row(0).unwrap(), &s(&[1, -1, 1, -1, 1, -1, 1], 6));
    }

    #[test]
    fn thm1_omega_rhs_leading_term() {
        let r = build_thm1_omega_rhs(0, 1);
        assert_eq!(r.row(0).unwrap(), &s(&[0, 1], 1));
    }

    #[test]
    fn thm1_omega_lhs_refined_cell() {
        // {2,1} is the only p_omega partition of 3 with one part besides the smallest
        let l = build_thm1_omega_lhs(3, 3);
        assert_eq!(l.coeff(1, 3).unwrap(), &BigInt::from(1));
    }

    #[test]
    fn builders_declare_unit_slope() {
        let p = BuildParams::new(8, 20);
        let all: Vec<ZQSeries> = vec![
            omega_z_eulerian(&p),
            omega_z_simple(&p),
            omega_z_slashed(&p),
            nu_z_eulerian(&p),
            nu_z_product(&p),
            nu1_z_eulerian(&p),
            nu1_z_product(&p),
            thm1_omega_lhs(&p),
            thm1_omega_rhs(&p),
            thm1_nu_lhs(&p),
            thm1_nu_rhs(&p),
            thm2omega_rhs(&p),
        ];
        for b in &all {
            assert_eq!(b.tail(), TailBound::Slope(1));
            assert!(b.rows_satisfy_slope(1));
        }
    }

    #[test]
    fn indices_respect_skip_and_extra() {
        let p = BuildParams::new(0, 10);
        assert_eq!(p.indices(0, |n| n * n), vec![0, 1, 2, 3]);
        assert_eq!(p.clone().skipping(2).indices(0, |n| n * n), vec![0, 1, 3]);
        assert_eq!(p.with_extra_terms(2).indices(1, |n| n * n), vec![1, 2, 3, 4, 5]);
    }

    #[test]
    fn pentagonal_prefixes() {
        let p = BuildParams::new(0, 50);
        let w: Vec<(usize, i64)> = pentagonal_omega(&p)
            .terms()
            .map(|(e, c)| (e, i64::try_from(c).unwrap()))
            .collect();
        assert_eq!(w, vec![(1, 1), (3, 1), (11, -1), (17, -1), (33, 1), (43, 1)]);
        let v = pentagonal_nu(&BuildParams::new(0, 21));
        assert_eq!(
            v,
            s(
                &[1, 1, 0, 0, 0, -1, 0, 0, -1, 0, 0, 0, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1],
                21
            )
        );
    }
}
