use num_bigint::BigInt;
use proptest::prelude::*;

use mocktheta::series::{poch_finite, qbinom};
use mocktheta::{Monomial, QSeries};

// Pascal's rule [n, m] = [n-1, m-1] + q^m [n-1, m], independent of the division-based qbinom
fn pascal(n: usize, m: usize, order: usize) -> QSeries {
    let mut table: Vec<Vec<QSeries>> = Vec::new();
    for row in 0..=n {
        let mut cur = Vec::new();
        for col in 0..=row {
            let v = if col == 0 || col == row {
                QSeries::one(order)
            } else {
                let up_left = &table[row - 1][col - 1];
                let up = table[row - 1][col].shift(col);
                up_left + &up
            };
            cur.push(v);
        }
        table.push(cur);
    }
    table[n][m].clone()
}

#[test]
fn pascal_matches_division() {
    for n in 0..12 {
        for m in 0..=n {
            let order = m * (n - m) + 2;
            let fast = qbinom(n as i64, m as i64, 1).with_order(order);
            assert_eq!(fast, pascal(n, m, order), "[{n},{m}]");
        }
    }
}

#[test]
fn binomial_theorem_instances() {
    const ORDER: usize = 60;
    for m in 0..=10usize {
        for a in 1..=4usize {
            let lhs = poch_finite(Monomial::pos(a), 1, m + 1, ORDER).invert().unwrap();
            let mut rhs = QSeries::zero(ORDER);
            for k in 0..=ORDER / a {
                rhs = &rhs + &pascal(k + m, m, ORDER).shift(a * k);
            }
            assert_eq!(lhs.first_mismatch(&rhs), None, "m={m} a={a}");
        }
    }
}

#[test]
fn out_of_range_is_zero() {
    assert!(qbinom(3, 4, 1).is_zero());
    assert!(qbinom(3, -1, 2).is_zero());
    assert_eq!(qbinom(4, 2, 1), QSeries::from_i64s(&[1, 1, 2, 1, 1], 4));
}

proptest! {
    #[test]
    fn value_at_one_is_the_binomial(n in 0usize..14, k in 0usize..14, t in 1usize..4) {
        let m = k.min(n);
        let poly = qbinom(n as i64, m as i64, t);
        let total: BigInt = poly.coeffs().iter().sum();
        let mut expect = BigInt::from(1);
        for i in 0..m {
            expect = expect * BigInt::from(n - i) / BigInt::from(i + 1);
        }
        prop_assert_eq!(total, expect);
        prop_assert_eq!(poly.degree().unwrap_or(0), m * (n - m) * t);
    }
}
