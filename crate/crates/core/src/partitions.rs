//! Brute-force partition enumeration for `p_omega(n)` and `p_nu(n)`.
//!
//! `p_omega(n)` counts partitions of `n` in which every odd part is less than
//! twice the smallest part. `p_nu(n)` adds the condition that all parts are
//! distinct, and also admits a single part `0` as the smallest part (which
//! then forbids odd parts entirely); that is what the generating series
//! `nu(-q)` counts, including its constant term.
//!
//! Two independent enumerators are provided. The structured one picks the
//! smallest part first and draws the rest from the parts it allows; the
//! filter one generates every partition and tests the condition directly.

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::series::QSeries;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PartitionMode {
    Omega,
    Nu,
}

impl std::str::FromStr for PartitionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega" | "pomega" => Ok(PartitionMode::Omega),
            "nu" | "pnu" => Ok(PartitionMode::Nu),
            other => Err(Error::InvalidArgument(format!(
                "unknown partition mode `{other}`"
            ))),
        }
    }
}

/// A partition as a weakly decreasing list of parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    /// Sorts the parts into weakly decreasing order. At most one zero part is allowed.
    pub fn new(mut parts: Vec<u64>) -> Result<Self> {
        if parts.is_empty() {
            return Err(Error::InvalidArgument("a partition needs at least one part".into()));
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        if parts.iter().filter(|&&p| p == 0).count() > 1 {
            return Err(Error::InvalidArgument("at most one zero part".into()));
        }
        Ok(Partition { parts })
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn smallest(&self) -> u64 {
        *self.parts.last().expect("partitions are nonempty")
    }

    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn sum(&self) -> u64 {
        self.parts.iter().sum()
    }

    pub fn has_distinct_parts(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] > w[1])
    }

    /// Every odd part is strictly less than twice the smallest part.
    pub fn odd_parts_bounded(&self) -> bool {
        let bound = 2 * self.smallest();
        self.parts.iter().all(|&p| p % 2 == 0 || p < bound)
    }

    pub fn qualifies(&self, mode: PartitionMode) -> bool {
        match mode {
            PartitionMode::Omega => self.smallest() > 0 && self.odd_parts_bounded(),
            PartitionMode::Nu => self.has_distinct_parts() && self.odd_parts_bounded(),
        }
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.parts.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

// Fill `rest` with parts from `allowed` (descending), each used at most once
// when `distinct`, pushing completed partitions (with `tail` appended) to `out`.
fn fill(
    rest: u64,
    allowed: &[u64],
    distinct: bool,
    prefix: &mut Vec<u64>,
    tail: &[u64],
    out: &mut Vec<Partition>,
) {
    if rest == 0 {
        let mut parts = prefix.clone();
        parts.extend_from_slice(tail);
        out.push(Partition { parts });
        return;
    }
    for (i, &p) in allowed.iter().enumerate() {
        if p > rest {
            continue;
        }
        prefix.push(p);
        let next = if distinct { &allowed[i + 1..] } else { &allowed[i..] };
        fill(rest - p, next, distinct, prefix, tail, out);
        prefix.pop();
    }
}

/// Parts that may accompany smallest part `s` in omega mode, descending:
/// `s..=2s` and the even numbers from `2s+2`.
fn omega_companions(s: u64, limit: u64) -> Vec<u64> {
    let mut v: Vec<u64> = (s..=(2 * s).min(limit)).collect();
    v.extend((2 * s + 2..=limit).step_by(2));
    v.reverse();
    v
}

/// Parts that may accompany smallest part `s` in nu mode (distinct, so above `s`).
fn nu_companions(s: u64, limit: u64) -> Vec<u64> {
    if s == 0 {
        let mut v: Vec<u64> = (2..=limit).step_by(2).collect();
        v.reverse();
        return v;
    }
    let mut v: Vec<u64> = (s + 1..=(2 * s).min(limit)).collect();
    v.extend((2 * s + 2..=limit).step_by(2));
    v.reverse();
    v
}

/// All partitions of `n` (positive parts) whose odd parts are below twice the smallest.
pub fn enumerate_omega(n: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    for s in 1..=n {
        let allowed = omega_companions(s, n - s);
        fill(n - s, &allowed, false, &mut Vec::new(), &[s], &mut out);
    }
    out
}

/// All partitions of `n` into distinct parts, with at most one zero part,
/// whose odd parts are below twice the smallest.
pub fn enumerate_nu(n: u64) -> Vec<Partition> {
    let mut out = Vec::new();
    for s in 0..=n {
        let allowed = nu_companions(s, n - s);
        fill(n - s, &allowed, true, &mut Vec::new(), &[s], &mut out);
    }
    out
}

pub fn enumerate(mode: PartitionMode, n: u64) -> Vec<Partition> {
    match mode {
        PartitionMode::Omega => enumerate_omega(n),
        PartitionMode::Nu => enumerate_nu(n),
    }
}

/// Every partition of `n` into positive parts, in reverse lexicographic order.
pub fn all_partitions(n: u64) -> Vec<Partition> {
    fn go(rest: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=max.min(rest)).rev() {
            prefix.push(p);
            go(rest - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        go(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Slow second oracle: generate everything, keep what qualifies. In nu mode
/// each candidate is also tried with a zero part appended.
pub fn enumerate_by_filter(mode: PartitionMode, n: u64) -> Vec<Partition> {
    let mut candidates = all_partitions(n);
    if mode == PartitionMode::Nu {
        let with_zero: Vec<Partition> = candidates
            .iter()
            .map(|p| {
                let mut parts = p.parts.clone();
                parts.push(0);
                Partition { parts }
            })
            .collect();
        candidates.extend(with_zero);
        if n == 0 {
            candidates.push(Partition { parts: vec![0] });
        }
    }
    let mut out: Vec<Partition> = candidates.into_iter().filter(|p| p.qualifies(mode)).collect();
    out.sort();
    out
}

/// Number of qualifying partitions of `n`.
pub fn count(mode: PartitionMode, n: u64) -> BigInt {
    BigInt::from(enumerate(mode, n).len())
}

/// Number of qualifying partitions of `n` with exactly `m` parts besides one
/// copy of the smallest part.
pub fn count_refined(mode: PartitionMode, n: u64, m: usize) -> BigInt {
    BigInt::from(
        enumerate(mode, n)
            .iter()
            .filter(|p| p.num_parts() == m + 1)
            .count(),
    )
}

/// `sum_n count(mode, n) q^n` up to `order` (omega mode starts at `n = 1`).
/// `skip_smallest` drops partitions whose smallest part equals it.
pub fn count_series(mode: PartitionMode, order: usize, skip_smallest: Option<u64>) -> QSeries {
    let mut out = QSeries::zero(order);
    for n in 0..=order as u64 {
        let c = enumerate(mode, n)
            .iter()
            .filter(|p| Some(p.smallest()) != skip_smallest)
            .count();
        out.set_coeff(n as usize, BigInt::from(c));
    }
    out
}

/// Rows `m = 0..=z_order`: `sum_n count_refined(mode, n, m) q^n` up to `q_order`.
pub fn refined_rows(
    mode: PartitionMode,
    z_order: usize,
    q_order: usize,
    skip_smallest: Option<u64>,
) -> Vec<QSeries> {
    let mut rows = vec![QSeries::zero(q_order); z_order + 1];
    for n in 0..=q_order as u64 {
        for p in enumerate(mode, n) {
            if Some(p.smallest()) == skip_smallest {
                continue;
            }
            let m = p.num_parts() - 1;
            if m <= z_order {
                rows[m].add_to_coeff(n as usize, &BigInt::from(1));
            }
        }
    }
    rows
}
